use erlangen::fixtures::{load_config, RunConfig};
use erlangen::{Error, Result, Scalar};

use crate::args::RunArgs;

pub fn parse_reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Error::Validation { field: "input".into(), message: format!("`{s}` is not a number") })
        })
        .collect()
}

/// A real `a` or a complex `re:im`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Validation { field: "input".into(), message: format!("`{text}` is not a number") };
    match text.split_once(':') {
        Some((re, im)) => Ok(Scalar::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?)),
        None => Ok(Scalar::new(text.parse().map_err(|_| bad())?, 0.0)),
    }
}

pub fn parse_scalars(text: &str) -> Result<Vec<Scalar>> {
    text.split(',').map(parse_scalar).collect()
}

pub fn expect_len<T>(v: Vec<T>, len: usize, what: &str) -> Result<Vec<T>> {
    if v.len() != len {
        return Err(Error::Validation {
            field: what.into(),
            message: format!("expected {len} values, got {}", v.len()),
        });
    }
    Ok(v)
}

/// Merges the config file, if any, with explicit flags.
pub fn resolve(run: &RunArgs, group: Option<&str>) -> Result<RunConfig> {
    let mut cfg = match &run.config {
        Some(path) => load_config(path)?,
        None => {
            let seed = run.seed.ok_or_else(|| Error::Validation {
                field: "seed".into(),
                message: "--seed is required unless --config supplies it".into(),
            })?;
            RunConfig::new(seed)
        }
    };
    if let Some(s) = run.seed {
        cfg.seed = s;
    }
    if let Some(t) = run.trials {
        cfg.trials = t;
    }
    if let Some(t) = run.tolerance {
        cfg.tolerance = t;
    }
    if let Some(d) = run.dimension {
        cfg.dimension = d;
    }
    if let Some(g) = group {
        cfg.group = g.to_string();
    }
    cfg.validate()?;
    Ok(cfg)
}
