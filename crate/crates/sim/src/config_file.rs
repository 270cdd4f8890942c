//! Plain-text scenario configuration.
//!
//! One `key = value` pair per line. `#` starts a comment, blank lines are
//! ignored, every key may appear at most once, and unknown keys are errors.
//! Keys not given take the defaults of [`SimConfig::default`]:
//!
//! | key              | type                      | default    |
//! |------------------|---------------------------|------------|
//! | `n_d`            | integer >= 1              | 15         |
//! | `n_g`            | integer >= 0              | 10000      |
//! | `side_l`         | meters > 0                | 1000       |
//! | `radius_r`       | meters > 0, <= side_l     | 30         |
//! | `radius_overlap` | meters > 0, <= side_l*√2  | 60         |
//! | `phi`            | integer >= 0              | 25         |
//! | `loss`           | integer >= 0              | 5          |
//! | `drone_speed`    | meters/tick > 0           | 5          |
//! | `node_step`      | meters/tick > 0           | 1          |
//! | `t_max`          | integer >= 1              | 1000       |
//! | `check_interval` | integer >= 1              | 1          |
//! | `seed`           | unsigned 64-bit integer   | 0          |
//! | `policy`         | `feedback`/`randomwalk`   | `feedback` |

use std::fmt::Write as _;

use dbs_core::{ConfigError, Policy, SimConfig};

pub const KEYS: [&str; 13] = [
    "n_d",
    "n_g",
    "side_l",
    "radius_r",
    "radius_overlap",
    "phi",
    "loss",
    "drone_speed",
    "node_step",
    "t_max",
    "check_interval",
    "seed",
    "policy",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: {key} = {value} is out of range")]
    OutOfRange {
        line: usize,
        key: &'static str,
        value: String,
    },
    #[error(transparent)]
    Validation(#[from] ConfigError),
}

impl ConfigFileError {
    /// Whether the document was well formed but described an invalid
    /// scenario.
    pub fn is_validation(&self) -> bool {
        matches!(self, Self::OutOfRange { .. } | Self::Validation(_))
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> ConfigFileError {
    ConfigFileError::Parse {
        line,
        message: message.into(),
    }
}

/// Integers are read as `i128` first so that negative values surface as
/// range errors rather than syntax errors.
fn parse_int<T: TryFrom<i128>>(line: usize, key: &'static str, raw: &str) -> Result<T, ConfigFileError> {
    let v: i128 = raw
        .parse()
        .map_err(|_| parse_err(line, format!("{key}: expected an integer, got `{raw}`")))?;
    T::try_from(v).map_err(|_| ConfigFileError::OutOfRange {
        line,
        key,
        value: raw.to_string(),
    })
}

fn parse_f64(line: usize, key: &'static str, raw: &str) -> Result<f64, ConfigFileError> {
    raw.parse()
        .map_err(|_| parse_err(line, format!("{key}: expected a number, got `{raw}`")))
}

pub fn parse_config(text: &str) -> Result<SimConfig, ConfigFileError> {
    let mut cfg = SimConfig::default();
    let mut seen = [false; KEYS.len()];
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(parse_err(line, format!("{key}: missing value")));
        }
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| ConfigFileError::UnknownKey {
                line,
                key: key.to_string(),
            })?;
        if std::mem::replace(&mut seen[slot], true) {
            return Err(parse_err(line, format!("duplicate key `{key}`")));
        }
        let key = KEYS[slot];
        match key {
            "n_d" => cfg.n_d = parse_int(line, key, value)?,
            "n_g" => cfg.n_g = parse_int(line, key, value)?,
            "side_l" => cfg.side_l = parse_f64(line, key, value)?,
            "radius_r" => cfg.radius_r = parse_f64(line, key, value)?,
            "radius_overlap" => cfg.radius_overlap = parse_f64(line, key, value)?,
            "phi" => cfg.phi = parse_int(line, key, value)?,
            "loss" => cfg.loss = parse_int(line, key, value)?,
            "drone_speed" => cfg.drone_speed = parse_f64(line, key, value)?,
            "node_step" => cfg.node_step = parse_f64(line, key, value)?,
            "t_max" => cfg.t_max = parse_int(line, key, value)?,
            "check_interval" => cfg.check_interval = parse_int(line, key, value)?,
            "seed" => cfg.seed = parse_int(line, key, value)?,
            "policy" => {
                cfg.policy = Policy::parse(value).ok_or_else(|| {
                    parse_err(line, format!("policy: expected feedback or randomwalk, got `{value}`"))
                })?
            }
            _ => unreachable!("key list and match arms disagree"),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Canonical rendering: every key, in [`KEYS`] order. Floats use the
/// shortest representation that parses back to the same bits.
pub fn render_config(cfg: &SimConfig) -> String {
    let mut out = String::new();
    let mut put = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k} = {v}");
    };
    put("n_d", &cfg.n_d);
    put("n_g", &cfg.n_g);
    put("side_l", &cfg.side_l);
    put("radius_r", &cfg.radius_r);
    put("radius_overlap", &cfg.radius_overlap);
    put("phi", &cfg.phi);
    put("loss", &cfg.loss);
    put("drone_speed", &cfg.drone_speed);
    put("node_step", &cfg.node_step);
    put("t_max", &cfg.t_max);
    put("check_interval", &cfg.check_interval);
    put("seed", &cfg.seed);
    put("policy", &cfg.policy);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, SimConfig::default());
        assert_eq!(
            (cfg.n_d, cfg.n_g, cfg.side_l, cfg.radius_r, cfg.radius_overlap),
            (15, 10_000, 1000.0, 30.0, 60.0)
        );
        assert_eq!((cfg.phi, cfg.loss, cfg.drone_speed, cfg.node_step), (25, 5, 5.0, 1.0));
        assert_eq!((cfg.t_max, cfg.check_interval, cfg.seed), (1000, 1, 0));
        assert_eq!(cfg.policy, Policy::Feedback);
    }

    #[test]
    fn negative_phi_is_validation_error() {
        let err = parse_config("phi = -1").unwrap_err();
        assert!(err.is_validation(), "{err:?}");
    }

    #[test]
    fn misspelled_key_is_unknown() {
        assert_eq!(
            parse_config("radius = 30").unwrap_err(),
            ConfigFileError::UnknownKey { line: 1, key: "radius".into() }
        );
    }

    #[test]
    fn comments_whitespace_and_overrides() {
        let text = "# scenario\n\n  n_d=5   # five drones\npolicy = randomwalk\nseed = 18446744073709551615\nside_l = 2.5e2\nradius_r = 20\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.n_d, 5);
        assert_eq!(cfg.policy, Policy::RandomWalk);
        assert_eq!(cfg.seed, u64::MAX);
        assert_eq!(cfg.side_l, 250.0);
    }

    #[test]
    fn malformed_lines() {
        for text in ["n_d 5", "n_d = ", "n_d = five", "policy = greedy", "n_d = 1\nn_d = 2", "side_l = 1km"] {
            let err = parse_config(text).unwrap_err();
            assert!(matches!(err, ConfigFileError::Parse { .. }), "{text}: {err:?}");
        }
    }

    #[test]
    fn invariant_violations_are_validation_errors() {
        for text in ["t_max = 0", "side_l = -1", "radius_r = 2000", "node_step = nan", "seed = -3"] {
            let err = parse_config(text).unwrap_err();
            assert!(err.is_validation(), "{text}: {err:?}");
        }
    }

    #[test]
    fn render_parses_back_exactly() {
        let cfg = SimConfig {
            side_l: 1234.5678901234567,
            radius_r: 0.1 + 0.2,
            drone_speed: 1e-7,
            policy: Policy::RandomWalk,
            seed: 99,
            ..SimConfig::default()
        };
        let back = parse_config(&render_config(&cfg)).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.radius_r.to_bits(), cfg.radius_r.to_bits());
    }

    #[test]
    fn render_lists_every_key_in_order() {
        let text = render_config(&SimConfig::default());
        let keys: Vec<&str> = text.lines().map(|l| l.split(" = ").next().unwrap()).collect();
        assert_eq!(keys, KEYS);
    }
}
