use std::fmt;

use crate::error::{Error, Result};
use crate::projective::Scalar;
use crate::seed::derive_seed;

use super::builtin::TransformationGroup;
use super::configuration::Configuration;
use super::transformation::Transformation;

/// Value of a property on one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropertyValue {
    Number(Scalar),
    /// Relations such as incidence; compared exactly.
    Flag(bool),
    /// The property does not apply to this sample; the trial is skipped.
    Undefined,
}

impl PropertyValue {
    pub fn real(x: f64) -> Self {
        PropertyValue::Number(Scalar::new(x, 0.0))
    }

    /// Numbers agree when `|a − b| ≤ tol·max(1, |a|, |b|)`; flags must be equal.
    pub fn agrees(&self, other: &PropertyValue, tol: f64) -> bool {
        match (self, other) {
            (PropertyValue::Number(a), PropertyValue::Number(b)) => {
                (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm())
            }
            (PropertyValue::Flag(a), PropertyValue::Flag(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Number(z) if z.im == 0.0 => write!(f, "{:.16e}", z.re),
            PropertyValue::Number(z) => write!(f, "{:.16e}{:+.16e}i", z.re, z.im),
            PropertyValue::Flag(b) => write!(f, "{b}"),
            PropertyValue::Undefined => write!(f, "undefined"),
        }
    }
}

/// A function of configurations whose invariance can be tested.
pub trait Property: Send + Sync {
    fn name(&self) -> &str;
    fn evaluate(&self, c: &Configuration) -> PropertyValue;
}

/// Adapts a closure into a [`Property`].
pub struct FnProperty<F> {
    name: String,
    f: F,
}

impl<F: Fn(&Configuration) -> PropertyValue + Send + Sync> FnProperty<F> {
    pub fn new(name: &str, f: F) -> Self {
        Self { name: name.to_string(), f }
    }
}

impl<F: Fn(&Configuration) -> PropertyValue + Send + Sync> Property for FnProperty<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn evaluate(&self, c: &Configuration) -> PropertyValue {
        (self.f)(c)
    }
}

/// A counterexample to invariance, reproducible from `seed`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub trial: usize,
    pub seed: u64,
    pub config: Configuration,
    pub transformation: Transformation,
    pub before: PropertyValue,
    pub after: PropertyValue,
    pub tolerance: f64,
}

/// Result of a randomized invariance test.
///
/// `Invariant` only means no counterexample was found in the trials run.
#[derive(Debug, Clone)]
pub enum Verdict {
    Invariant { trials: usize, skipped: usize, tolerance: f64 },
    Violated(Box<Witness>),
}

impl Verdict {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Verdict::Invariant { .. })
    }
}

/// Fraction of undefined trials above which the sampler is deemed mismatched.
pub const MAX_UNDEFINED_FRACTION: f64 = 0.9;

/// Randomized search for a configuration and group element changing `property`.
///
/// Trial `k` uses `s = derive_seed(seed, k)`; the configuration is drawn
/// from `derive_seed(s, 0)` and the group element from `derive_seed(s, 1)`.
/// The first violation is returned.
pub fn invariance_test(
    property: &dyn Property,
    g: &dyn TransformationGroup,
    config_sampler: &dyn Fn(u64) -> Result<Configuration>,
    seed: u64,
    trials: usize,
    tol: f64,
) -> Result<Verdict> {
    if trials == 0 {
        return Err(Error::Validation { field: "trials".into(), message: "must be at least 1".into() });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Validation { field: "tolerance".into(), message: "must be positive".into() });
    }
    let mut skipped = 0;
    for k in 0..trials {
        let s = derive_seed(seed, k as u64);
        let config = match config_sampler(derive_seed(s, 0)) {
            Ok(c) => c,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let t = g.sample(derive_seed(s, 1));
        let image = t.apply_configuration(&config)?;
        let before = property.evaluate(&config);
        let after = property.evaluate(&image);
        if matches!(before, PropertyValue::Undefined) || matches!(after, PropertyValue::Undefined) {
            skipped += 1;
            continue;
        }
        if !before.agrees(&after, tol) {
            return Ok(Verdict::Violated(Box::new(Witness {
                trial: k,
                seed: s,
                config,
                transformation: t,
                before,
                after,
                tolerance: tol,
            })));
        }
    }
    if skipped as f64 > MAX_UNDEFINED_FRACTION * trials as f64 {
        return Err(Error::SamplerMismatch { undefined: skipped, trials });
    }
    Ok(Verdict::Invariant { trials, skipped, tolerance: tol })
}

/// Images of `c` under `count` independent samples of `g` (a "body").
///
/// Sample `k` uses `derive_seed(seed, k)`. A configuration fixed by a
/// normal subgroup has a degenerate orbit; this is not detected.
pub fn orbit_sample(
    c: &Configuration,
    g: &dyn TransformationGroup,
    seed: u64,
    count: usize,
) -> Result<Vec<Configuration>> {
    if count == 0 {
        return Err(Error::Validation { field: "count".into(), message: "must be at least 1".into() });
    }
    (0..count).map(|k| g.sample(derive_seed(seed, k as u64)).apply_configuration(c)).collect()
}
