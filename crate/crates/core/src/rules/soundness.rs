//! Semantic soundness sweep over rules.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use super::RewriteRule;
use crate::semantics::interpret;

/// Values every parameter slot takes together in the forced draws.
pub const FORCED_DRAWS: [C64; 4] = [
    C64::new(0.0, 0.0),
    C64::new(1.0, 0.0),
    C64::new(-1.0, 0.0),
    C64::new(0.0, 1.0),
];

const DEFAULT_SEED: u64 = 0x5eed_2a11;

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub params: Vec<C64>,
    pub flipped: bool,
    /// `None` when a side could not be interpreted or the shapes differ.
    pub deviation: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub rule: String,
    pub origin: String,
    /// Parameter draws tried, including skipped ones.
    pub draws: usize,
    /// Draws outside the rule's domain.
    pub skipped: usize,
    pub max_deviation: f64,
    pub failures: Vec<Failure>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {:<6} draws={:<3} skipped={:<2} max_dev={:.3e} [{}]",
            self.rule,
            if self.passed() { "ok" } else { "FAIL" },
            self.draws,
            self.skipped,
            self.max_deviation,
            self.origin
        )?;
        for fail in &self.failures {
            write!(
                f,
                "\n    params={:?} flipped={} deviation={:?}",
                fail.params, fail.flipped, fail.deviation
            )?;
            if let Some(e) = &fail.error {
                write!(f, " error={e}")?;
            }
        }
        Ok(())
    }
}

fn random_param(rng: &mut StdRng) -> C64 {
    let r = 2.0 * rng.gen::<f64>().sqrt();
    let theta = 2.0 * PI * rng.gen::<f64>();
    C64::from_polar(r, theta)
}

fn compare(rule: &RewriteRule, params: &[C64], tol: f64) -> Result<f64, Failure> {
    let fail = |deviation, error| Failure {
        params: params.to_vec(),
        flipped: rule.flipped,
        deviation,
        error,
    };
    let (lhs, rhs) = rule
        .instantiate(params)
        .map_err(|e| fail(None, Some(e.to_string())))?;
    let l = interpret(&lhs).map_err(|e| fail(None, Some(e.to_string())))?;
    let r = interpret(&rhs).map_err(|e| fail(None, Some(e.to_string())))?;
    match l.max_abs_diff(&r) {
        Some(dev) if dev <= tol => Ok(dev),
        Some(dev) => Err(fail(Some(dev), None)),
        None => Err(fail(
            None,
            Some(format!(
                "shape mismatch: {}x{} vs {}x{}",
                l.rows(),
                l.cols(),
                r.rows(),
                r.cols()
            )),
        )),
    }
}

/// Checks `rule` and its flipped variant on the forced draws and `samples`
/// random draws from the disk of radius 2.
pub fn check_soundness(rule: &RewriteRule, samples: usize, tol: f64) -> SoundnessReport {
    check_soundness_seeded(rule, samples, tol, DEFAULT_SEED)
}

pub fn check_soundness_seeded(
    rule: &RewriteRule,
    samples: usize,
    tol: f64,
    seed: u64,
) -> SoundnessReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut draws: Vec<Vec<C64>> = if rule.arity == 0 {
        vec![vec![]]
    } else {
        FORCED_DRAWS.iter().map(|v| vec![*v; rule.arity]).collect()
    };
    if rule.arity > 0 {
        for _ in 0..samples {
            draws.push((0..rule.arity).map(|_| random_param(&mut rng)).collect());
        }
    }
    let variants = [rule.clone(), rule.flip()];
    let mut report = SoundnessReport {
        rule: rule.name.clone(),
        origin: rule.origin.to_string(),
        draws: draws.len(),
        skipped: 0,
        max_deviation: 0.0,
        failures: Vec::new(),
    };
    for params in &draws {
        if !rule.domain.admits(params) {
            report.skipped += 1;
            continue;
        }
        for variant in &variants {
            match compare(variant, params, tol) {
                Ok(dev) => report.max_deviation = report.max_deviation.max(dev),
                Err(fail) => {
                    if let Some(dev) = fail.deviation {
                        report.max_deviation = report.max_deviation.max(dev);
                    } else {
                        report.max_deviation = f64::INFINITY;
                    }
                    report.failures.push(fail);
                }
            }
        }
    }
    report
}

/// Sweeps a list of rules in parallel; reports keep the input order.
pub fn check_catalog(rules: &[RewriteRule], samples: usize, tol: f64) -> Vec<SoundnessReport> {
    rules
        .par_iter()
        .map(|r| check_soundness(r, samples, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::rule_by_name;

    #[test]
    fn s1_and_eu_are_sound() {
        for name in ["S1", "EU"] {
            let report = check_soundness(&rule_by_name(name).unwrap(), 20, 1e-9);
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn corrupted_rule_fails() {
        let bad = rule_by_name("S1").unwrap().corrupted();
        let report = check_soundness(&bad, 20, 1e-9);
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| f.flipped));
        let bad = rule_by_name("Ept").unwrap().corrupted();
        assert!(!check_soundness(&bad, 5, 1e-9).passed());
    }

    #[test]
    fn domain_skips_are_counted() {
        let report = check_soundness(&rule_by_name("Pic").unwrap(), 10, 1e-9);
        assert_eq!(report.draws, 14);
        assert_eq!(report.skipped, 1);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn random_params_stay_in_disk() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            assert!(random_param(&mut rng).norm() <= 2.0);
        }
    }
}
