//! Instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Instance, Job, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// `t` uniform in (0, 1], `u = t * r` with `r` uniform in (0, r_max],
    /// `p` uniform in [0, u].
    #[default]
    Uniform,
    /// As `Uniform` but every job has `t = 1`.
    UnitTesting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: usize,
    pub r_max: f64,
    pub seed: u64,
    pub distribution: Distribution,
}

impl GenConfig {
    pub fn new(n: usize, r_max: f64, seed: u64) -> Self {
        Self {
            n,
            r_max,
            seed,
            distribution: Distribution::Uniform,
        }
    }

    pub fn unit_testing(mut self) -> Self {
        self.distribution = Distribution::UnitTesting;
        self
    }
}

/// Draws a random instance; a pure function of `cfg`.
pub fn gen_random_instance(cfg: &GenConfig) -> Result<Instance, ModelError> {
    if cfg.n == 0 {
        return Err(ModelError::Precondition("n must be at least 1".into()));
    }
    if !(cfg.r_max > 0.0 && cfg.r_max.is_finite()) {
        return Err(ModelError::Precondition(format!(
            "r_max must be positive, got {}",
            cfg.r_max
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let jobs = (0..cfg.n as u64)
        .map(|id| {
            // random::<f64>() is in [0, 1); flip it to get (0, 1].
            let t = match cfg.distribution {
                Distribution::Uniform => 1.0 - rng.random::<f64>(),
                Distribution::UnitTesting => 1.0,
            };
            let r = cfg.r_max * (1.0 - rng.random::<f64>());
            let u = t * r;
            let p = u * rng.random::<f64>();
            Job::new(id, t, u, p)
        })
        .collect();
    Instance::new(jobs)
}

/// Two jobs: `(1+e, 1+3e, 1+3e)` with id 0 and `(1, 1+4e, 1+2e)` with id 1.
///
/// With `alpha = beta = 1` both get tested although testing neither is
/// optimal, and the queue order interleaves their tasks.
pub fn gen_pair_family(eps: f64) -> Result<Instance, ModelError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ModelError::Precondition(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Instance::new(vec![
        Job::new(0, 1.0 + eps, 1.0 + 3.0 * eps, 1.0 + 3.0 * eps),
        Job::new(1, 1.0, 1.0 + 4.0 * eps, 1.0 + 2.0 * eps),
    ])
}

/// Job set of the makespan adversary: `2m(m-1)+1` jobs with `t = 1`,
/// `u = 2m`. Processing times are placeholders (0); the game fixes them.
pub fn gen_adversary_jobs(m: usize) -> Result<Instance, ModelError> {
    if m < 2 {
        return Err(ModelError::Precondition(format!(
            "the adversary needs at least 2 machines, got {m}"
        )));
    }
    let count = 2 * m * (m - 1) + 1;
    let u = 2.0 * m as f64;
    Instance::with_machines(
        (0..count as u64)
            .map(|id| Job::new(id, 1.0, u, 0.0))
            .collect(),
        m,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;

    #[test]
    fn deterministic_per_seed() {
        let cfg = GenConfig::new(5, 4.0, 42);
        assert_eq!(
            gen_random_instance(&cfg).unwrap(),
            gen_random_instance(&cfg).unwrap()
        );
        let other = GenConfig::new(5, 4.0, 43);
        assert_ne!(
            gen_random_instance(&cfg).unwrap(),
            gen_random_instance(&other).unwrap()
        );
    }

    #[test]
    fn ratio_cap_respected() {
        let inst = gen_random_instance(&GenConfig::new(1000, 3.0, 7)).unwrap();
        assert_eq!(inst.len(), 1000);
        for j in &inst.jobs {
            assert!(j.upper_limit <= 3.0 * j.test_time, "{j:?}");
            assert!(j.test_time > 0.0 && j.test_time <= 1.0);
            assert!(j.proc_time <= j.upper_limit);
        }
    }

    #[test]
    fn unit_testing_distribution() {
        let inst = gen_random_instance(&GenConfig::new(50, 5.0, 1).unit_testing()).unwrap();
        assert!(inst.jobs.iter().all(|j| j.test_time == 1.0));
    }

    #[test]
    fn bad_config() {
        assert!(gen_random_instance(&GenConfig::new(0, 3.0, 1)).is_err());
        assert!(gen_random_instance(&GenConfig::new(3, 0.0, 1)).is_err());
    }

    #[test]
    fn pair_family_values() {
        let inst = gen_pair_family(0.1).unwrap();
        let k = inst.jobs[0];
        let j = inst.jobs[1];
        assert_eq!((k.id, j.id), (0, 1));
        assert!((k.test_time - 1.1).abs() < 1e-15);
        assert!((k.upper_limit - 1.3).abs() < 1e-15);
        assert!((k.proc_time - 1.3).abs() < 1e-15);
        assert_eq!(j.test_time, 1.0);
        assert!((j.upper_limit - 1.4).abs() < 1e-15);
        assert!((j.proc_time - 1.2).abs() < 1e-15);
        for eps in [1e-6, 0.01, 0.1, 1.0, 10.0] {
            assert_eq!(validate_instance(&gen_pair_family(eps).unwrap()), Ok(()));
        }
        assert!(gen_pair_family(0.0).is_err());
    }

    #[test]
    fn adversary_job_counts() {
        let two = gen_adversary_jobs(2).unwrap();
        assert_eq!(two.len(), 5);
        assert_eq!(two.machines, 2);
        assert!(two
            .jobs
            .iter()
            .all(|j| j.test_time == 1.0 && j.upper_limit == 4.0 && j.proc_time == 0.0));
        let three = gen_adversary_jobs(3).unwrap();
        assert_eq!(three.len(), 13);
        assert!(three.jobs.iter().all(|j| j.upper_limit == 6.0));
        assert!(gen_adversary_jobs(1).is_err());
    }
}
