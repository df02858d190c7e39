use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

/// Stdout, or the file named by `--output`.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> io::Result<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}

pub fn write_csv<T: Serialize>(path: Option<&Path>, rows: &[T]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink(path)?);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
