use crate::error::{Error, Result};
use crate::seed::derive_seed;

use super::builtin::TransformationGroup;

pub const DEFAULT_AXIOM_TOL: f64 = 1e-8;

/// Outcome of [`check_group_axioms`]. Each failure list holds the trial
/// seeds that reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub group: String,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub closure_failures: Vec<u64>,
    pub inverse_failures: Vec<u64>,
    pub identity_failures: Vec<u64>,
}

impl AxiomReport {
    pub fn total_failures(&self) -> usize {
        self.closure_failures.len() + self.inverse_failures.len() + self.identity_failures.len()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }
}

pub fn check_group_axioms(g: &dyn TransformationGroup, seed: u64, trials: usize) -> Result<AxiomReport> {
    check_group_axioms_with_tol(g, seed, trials, DEFAULT_AXIOM_TOL)
}

/// Samples pairs `a, b` and checks that `a∘b`, `a⁻¹` and the identity are
/// members, that `a∘a⁻¹` is the identity and that the identity is neutral.
///
/// Trial `k` uses seed `s = derive_seed(seed, k)`; `a` and `b` are drawn
/// from `derive_seed(s, 0)` and `derive_seed(s, 1)`.
pub fn check_group_axioms_with_tol(
    g: &dyn TransformationGroup,
    seed: u64,
    trials: usize,
    tol: f64,
) -> Result<AxiomReport> {
    if trials == 0 {
        return Err(Error::Validation { field: "trials".into(), message: "must be at least 1".into() });
    }
    let mut report = AxiomReport {
        group: g.name().to_string(),
        seed,
        trials,
        tolerance: tol,
        closure_failures: Vec::new(),
        inverse_failures: Vec::new(),
        identity_failures: Vec::new(),
    };
    let id = g.identity();
    let id_ok = g.contains(&id, tol) && g.invert(&id).map(|i| i.is_identity(tol)).unwrap_or(false);
    for k in 0..trials {
        let s = derive_seed(seed, k as u64);
        let a = g.sample(derive_seed(s, 0));
        let b = g.sample(derive_seed(s, 1));

        let closed = g.compose(&a, &b).map(|ab| g.contains(&ab, tol)).unwrap_or(false);
        if !closed {
            report.closure_failures.push(s);
        }

        let inverse_ok = match g.invert(&a) {
            Ok(ai) => g.contains(&ai, tol) && g.compose(&a, &ai).map(|e| e.is_identity(tol)).unwrap_or(false),
            Err(_) => false,
        };
        if !inverse_ok {
            report.inverse_failures.push(s);
        }

        let neutral = id_ok
            && g.compose(&id, &a).map(|x| x.approx_eq(&a, tol)).unwrap_or(false)
            && g.compose(&a, &id).map(|x| x.approx_eq(&a, tol)).unwrap_or(false);
        if !neutral {
            report.identity_failures.push(s);
        }
    }
    Ok(report)
}
