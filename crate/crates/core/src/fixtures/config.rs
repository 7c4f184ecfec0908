use std::path::Path;

use crate::error::{Error, Result};

/// Settings shared by the randomized commands.
///
/// The file format is UTF-8 text with one `key = value` pair per line;
/// blank lines and text after `#` are ignored. Keys: `seed` (required),
/// `trials`, `tolerance`, `group`, `dimension`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub group: String,
    pub dimension: usize,
}

impl RunConfig {
    pub const DEFAULT_TRIALS: usize = 100;
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;
    pub const DEFAULT_GROUP: &'static str = "principal";
    pub const DEFAULT_DIMENSION: usize = 2;

    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            trials: Self::DEFAULT_TRIALS,
            tolerance: Self::DEFAULT_TOLERANCE,
            group: Self::DEFAULT_GROUP.to_string(),
            dimension: Self::DEFAULT_DIMENSION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(invalid("tolerance", "must be a positive finite number"));
        }
        if self.group.is_empty() {
            return Err(invalid("group", "must not be empty"));
        }
        if self.dimension == 0 {
            return Err(invalid("dimension", "must be at least 1"));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut seed = None;
        let mut cfg = Self::new(0);
        let mut seen: Vec<String> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|s| s == key) {
                return Err(Error::Parse { line: line_no, message: format!("duplicate key `{key}`") });
            }
            seen.push(key.to_string());
            let bad =
                |what: &str| Error::Parse { line: line_no, message: format!("{key}: expected {what}, got `{value}`") };
            match key {
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("an unsigned 64-bit integer"))?),
                "trials" => cfg.trials = value.parse().map_err(|_| bad("a nonnegative integer"))?,
                "tolerance" => cfg.tolerance = value.parse().map_err(|_| bad("a number"))?,
                "group" => cfg.group = value.to_string(),
                "dimension" => cfg.dimension = value.parse().map_err(|_| bad("a nonnegative integer"))?,
                _ => return Err(Error::Parse { line: line_no, message: format!("unknown key `{key}`") }),
            }
        }
        cfg.seed = seed.ok_or_else(|| invalid("seed", "is required"))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn invalid(field: &str, message: &str) -> Error {
    Error::Validation { field: field.to_string(), message: message.to_string() }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    RunConfig::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config() {
        let c =
            RunConfig::parse("seed = 42\ntrials = 100\ntolerance = 1e-9\ngroup = principal\ndimension = 2").unwrap();
        assert_eq!(c, RunConfig::new(42));
    }

    #[test]
    fn comments_and_defaults() {
        let c = RunConfig::parse("# run\n\nseed = 7  # fixed\ngroup = projective\n").unwrap();
        assert_eq!((c.seed, c.trials, c.group.as_str()), (7, 100, "projective"));
    }

    #[test]
    fn zero_trials_names_the_field() {
        match RunConfig::parse("seed = 1\ntrials = 0") {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "trials"),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn unknown_key_is_an_error() {
        match RunConfig::parse("seed = 1\ngrup = principal") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("grup"));
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(RunConfig::parse("seed 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(RunConfig::parse("seed = -1"), Err(Error::Parse { .. })));
        assert!(matches!(RunConfig::parse("seed = 1\nseed = 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(RunConfig::parse("trials = 5"), Err(Error::Validation { .. })));
        assert!(matches!(RunConfig::parse("seed = 1\ntolerance = -1"), Err(Error::Validation { .. })));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_config(Path::new("/nonexistent/run.conf")), Err(Error::Io(_))));
    }
}
