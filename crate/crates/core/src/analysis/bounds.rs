//! Closed-form competitive-ratio expressions and the randomized worst case.

use crate::online::test_probability;

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Ratio guaranteed by AE with parameters `alpha >= 1`, `beta > 0`.
pub fn expr_ae_bound(alpha: f64, beta: f64) -> f64 {
    max_of(&[
        alpha * (1.0 + 1.0 / beta),
        1.0 + 1.0 / alpha + 1.0 / beta,
        1.0 + beta,
        2.0,
        1.0 + 2.0 / alpha,
    ])
}

/// Ratio guaranteed by PCP with parameters `alpha >= 1`, `beta > 0`.
pub fn expr_pcp_bound(alpha: f64, beta: f64) -> f64 {
    max_of(&[
        alpha * (1.0 + 1.0 / beta),
        1.0 + 1.0 / alpha + 1.0 / beta + 1.0 / (alpha * beta),
        beta,
        2.0,
        1.0 + 2.0 / alpha,
    ])
}

/// Ratio guaranteed on `m` identical machines. With `uniform` set the
/// three-phase algorithm for equal testing times is meant and `beta` is
/// ignored.
pub fn expr_parallel_bound(m: usize, alpha: f64, beta: f64, uniform: bool) -> f64 {
    let m = m as f64;
    let single = if uniform {
        max_of(&[2.0, alpha, 1.0 + 2.0 / alpha])
    } else {
        expr_pcp_bound(alpha, beta)
    };
    let per_job = alpha.max(1.0 + 1.0 / alpha);
    single * (0.5 + 0.5 / m) + per_job * (1.0 - 1.0 / m)
}

/// The two expected-ratio expressions for a job with ratio `r`: the case
/// where the optimum leaves the job untested, and the case where it tests.
pub fn rand_case_ratios(r: f64, beta: f64) -> (f64, f64) {
    rand_case_ratios_with(r, beta, test_probability(r, beta))
}

fn rand_case_ratios_with(r: f64, beta: f64, prob: f64) -> (f64, f64) {
    let skip = 1.0 + 1.0 / beta;
    let untested_opt = (2.0 / r + 1.0).max(beta / r).max(skip * (1.0 + 1.0 / r));
    let tested_opt = max_of(&[2.0, beta, skip]);
    (
        skip * (1.0 - prob) + untested_opt * prob,
        skip * r * (1.0 - prob) + tested_opt * prob,
    )
}

fn rand_objective(r: f64, beta: f64) -> f64 {
    let (n, t) = rand_case_ratios(r, beta);
    n.max(t)
}

const GRID_POINTS: usize = 1_000_000;
const R_MIN: f64 = 1e-3;
const R_MAX: f64 = 1e3;

/// Worst expected ratio of Rand-PCP over job ratios `r` in `[1e-3, 1e3]`,
/// with the maximizing `r`.
///
/// A log-spaced grid is scanned, then the best cell is refined by
/// golden-section search. The one-sided limits at the clamp boundaries
/// `r = 1` and `r = 3` are evaluated as well, since the probability may jump
/// there.
pub fn rand_worst_ratio(beta: f64) -> (f64, f64) {
    assert!(beta.is_finite() && beta > 0.0, "beta must be positive");
    let step = (R_MAX / R_MIN).ln() / (GRID_POINTS - 1) as f64;
    let at = |i: usize| R_MIN * (step * i as f64).exp();
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..GRID_POINTS {
        let v = rand_objective(at(i), beta);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = at(best_i.saturating_sub(1));
    let hi = at((best_i + 1).min(GRID_POINTS - 1));
    let (mut best_r, refined) = golden_max(|r| rand_objective(r, beta), lo, hi);
    if refined > best {
        best = refined;
    } else {
        best_r = at(best_i);
    }
    // limits from the clamped side of each boundary
    for (r, prob) in [(1.0, 0.0), (3.0, 1.0)] {
        let (n, t) = rand_case_ratios_with(r, beta, prob);
        if n.max(t) > best {
            best = n.max(t);
            best_r = r;
        }
    }
    (best, best_r)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * b.abs().max(1.0) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::online::{GOLDEN_RATIO, PCP_BETA};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn ae_examples() {
        assert!((expr_ae_bound(SQRT2, SQRT2) - (1.0 + SQRT2)).abs() < 1e-12);
        assert_eq!(expr_ae_bound(1.0, 1.0), 3.0);
        assert_eq!(expr_ae_bound(2.0, 1.0), 4.0);
    }

    #[test]
    fn pcp_examples() {
        assert!((expr_pcp_bound(GOLDEN_RATIO, PCP_BETA) - PCP_BETA).abs() < 1e-12);
        assert_eq!(expr_pcp_bound(1.0, 1.0), 4.0);
        assert!((expr_pcp_bound(SQRT2, SQRT2) - (1.5 + SQRT2)).abs() < 1e-12);
    }

    #[test]
    fn parallel_examples() {
        let var = expr_parallel_bound(1_000_000_000, GOLDEN_RATIO, PCP_BETA, false);
        assert!((var - (PCP_BETA / 2.0 + GOLDEN_RATIO)).abs() < 1e-8);
        assert_eq!(expr_parallel_bound(1, 2.0, 0.0, true), 2.0);
        let m2 = expr_parallel_bound(2, 3f64.sqrt(), 0.0, true);
        assert!((m2 - 2.48206).abs() < 1e-5, "{m2}");
        // one machine reduces to the single-machine bound
        assert_eq!(
            expr_parallel_bound(1, GOLDEN_RATIO, PCP_BETA, false),
            expr_pcp_bound(GOLDEN_RATIO, PCP_BETA)
        );
    }

    #[test]
    fn rand_closed_form_at_beta_two() {
        for i in 0..=2000 {
            let r = 1.0 + 2.0 * i as f64 / 2000.0;
            let (n, t) = rand_case_ratios(r, 2.0);
            let closed = (9.0 * r * r - 3.0 * r) / (6.0 * r * r - 8.0 * r + 6.0);
            assert!((n - closed).abs() < 1e-9, "r = {r}");
            assert!((t - closed).abs() < 1e-9, "r = {r}");
        }
    }

    #[test]
    fn rand_endpoint_at_one() {
        assert_eq!(rand_case_ratios(1.0, 2.0), (1.5, 1.5));
    }

    #[test]
    fn rand_optimum_at_beta_two() {
        let (ratio, r) = rand_worst_ratio(2.0);
        let exact = 3.0 * (7.0 + 3.0 * 6f64.sqrt()) / 20.0;
        assert!((ratio - exact).abs() < 1e-9, "{ratio}");
        assert!((r - (1.0 + (2.0f64 / 3.0).sqrt())).abs() < 1e-4, "{r}");
    }

    #[test]
    fn rand_large_beta_is_worse() {
        let beta = 2.0 + (2.0f64 / 3.0).sqrt();
        let (ratio, _) = rand_worst_ratio(beta);
        // with probabilities capped at 1 the tested-optimum term is at most
        // beta, which is attained just above r = 1
        assert!((ratio - beta).abs() < 1e-9, "{ratio}");
        assert!(ratio > rand_worst_ratio(2.0).0);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-7);
        assert!(v <= 0.0);
    }
}
