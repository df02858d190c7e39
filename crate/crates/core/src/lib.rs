//! Online scheduling with testing under explorable uncertainty.
//!
//! Each job has a testing time `t`, an upper limit `u` and a hidden real
//! processing time `p <= u`. An online algorithm either runs the job blind
//! for `u` or tests it for `t` and then runs it for `p`.
//!
//! - [`model`] and [`json`]: jobs, instances, schedules and the file format.
//! - [`opt`]: the clairvoyant optimum for total completion time.
//! - [`online`]: AE, PCP, randomized PCP and the parallel list schedulers.
//! - [`analysis`]: contributions, pair bounds, closed-form ratios, exact
//!   expectations, verification sweeps and worst-case search.
//! - [`adversary`]: the makespan lower-bound game.
//! - [`preempt`]: preemptive schedules and right-merging.
//! - [`gen`]: seeded instance generators.
//!
//! ```
//! use schedlab::analysis::{empirical_ratio, AlgoSpec};
//! use schedlab::gen::gen_pair_family;
//! use schedlab::online::AlgoParams;
//!
//! let inst = gen_pair_family(0.1).unwrap();
//! let report = empirical_ratio(&AlgoSpec::pcp(AlgoParams::pcp_optimal()), &inst).unwrap();
//! assert!((report.ratio - 1.0).abs() < 1e-12);
//! ```

pub mod adversary;
pub mod analysis;
pub mod gen;
pub mod json;
pub mod model;
pub mod online;
pub mod opt;
pub mod preempt;
