//! The book's chapters, one module each, so `cargo test` runs their code
//! samples as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/algorithms.md")]
pub mod algorithms {}
#[doc = include_str!("../../../book/src/randomized.md")]
pub mod randomized {}
#[doc = include_str!("../../../book/src/parallel.md")]
pub mod parallel {}
#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}
#[doc = include_str!("../../../book/src/adversary.md")]
pub mod adversary {}
#[doc = include_str!("../../../book/src/preemption.md")]
pub mod preemption {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
