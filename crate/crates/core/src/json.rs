//! Instance file format.
//!
//! `{"m": 1, "jobs": [{"id": 0, "t": 1.0, "u": 1.4, "p": 1.2}]}` with `m`
//! optional (default 1). Serialization is compact, keys in the order shown,
//! numbers as shortest round-trip decimals.

use serde::Deserialize;
use serde_json::error::Category;

use crate::model::{validate_instance, Instance, Job, ModelError};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(default = "one")]
    m: usize,
    jobs: Vec<Job>,
}

fn one() -> usize {
    1
}

pub fn parse_instance(text: &str) -> Result<Instance, ModelError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| match e.classify() {
        Category::Syntax | Category::Eof | Category::Io => ModelError::SyntaxError(e.to_string()),
        Category::Data => ModelError::SchemaError(e.to_string()),
    })?;
    let inst = Instance {
        machines: doc.m,
        jobs: doc.jobs,
    };
    validate_instance(&inst)?;
    Ok(inst)
}

pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string(inst).expect("instance serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example_document() {
        let inst = parse_instance(r#"{"m":1,"jobs":[{"id":0,"t":1.0,"u":1.4,"p":1.2}]}"#).unwrap();
        assert_eq!(inst.machines, 1);
        assert_eq!(inst.jobs, vec![Job::new(0, 1.0, 1.4, 1.2)]);
    }

    #[test]
    fn machine_count_defaults_to_one() {
        let inst = parse_instance(r#"{"jobs":[{"id":4,"t":0.5,"u":2,"p":0}]}"#).unwrap();
        assert_eq!(inst.machines, 1);
    }

    #[test]
    fn zero_machines_is_rejected() {
        let err = parse_instance(r#"{"m":0,"jobs":[{"id":0,"t":1,"u":1,"p":1}]}"#).unwrap_err();
        assert_eq!(err, ModelError::BadMachineCount(0));
    }

    #[test]
    fn error_categories() {
        assert!(matches!(
            parse_instance("{\"jobs\": [").unwrap_err(),
            ModelError::SyntaxError(_)
        ));
        assert!(matches!(
            parse_instance(r#"{"jobs":[{"id":0,"t":1}]}"#).unwrap_err(),
            ModelError::SchemaError(_)
        ));
        assert!(matches!(
            parse_instance(r#"{"m":-1,"jobs":[]}"#).unwrap_err(),
            ModelError::SchemaError(_)
        ));
        assert!(matches!(
            parse_instance(r#"{"jobs":[{"id":0,"t":1,"u":1,"p":2}]}"#).unwrap_err(),
            ModelError::PExceedsU { .. }
        ));
    }

    #[test]
    fn canonical_form_is_stable() {
        let text = r#"{"m":1,"jobs":[{"id":0,"t":1.0,"u":1.4,"p":1.2}]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(serialize_instance(&inst), text);
        let spaced = "{ \"m\": 1,\n \"jobs\": [ {\"id\":0, \"t\":1.0, \"u\":1.4, \"p\":1.2} ] }";
        assert_eq!(serialize_instance(&parse_instance(spaced).unwrap()), text);
    }
}
