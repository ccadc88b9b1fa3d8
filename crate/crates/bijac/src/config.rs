//! Run configuration: defaults, config file, environment overrides, and
//! flags, merged in that order (flags win).
//!
//! The config file is plain `key=value` lines with `#` comments, one key
//! per long flag name. Environment overrides use the same keys uppercased
//! with `-` replaced by `_` and prefixed `BIJAC_`, e.g. `BIJAC_CAP_A`.
//! Every resolved value is echoed into the report so that a report alone
//! reproduces the run.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Error;
use crate::field::DEFAULT_PRIME;

/// Where the curve comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveSource {
    /// A polynomial literal in the grammar.
    Literal { text: String },
    /// A file containing one polynomial in the grammar.
    File { path: PathBuf, text: String },
    /// Re-derived from `(d, e, curve_seed, height)`.
    Seed { curve_seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldMode {
    /// Prime field only.
    Prime,
    /// Exact rationals only.
    Rational,
    /// Prime field first; any failing or undecided check is re-run over
    /// the rationals and the rational verdict stands.
    Hybrid,
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Prime => write!(f, "p"),
            FieldMode::Rational => write!(f, "Q"),
            FieldMode::Hybrid => write!(f, "hybrid"),
        }
    }
}

/// A fully resolved run configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub d: i64,
    pub e: i64,
    pub curve: CurveSource,
    pub field: FieldMode,
    pub prime: u64,
    pub trials: u32,
    pub seed: u64,
    pub height: i64,
    /// Escalation / sweep caps; `None` lets each command pick its
    /// default (recorded in the check inputs).
    pub cap_a: Option<i64>,
    pub cap_b: Option<i64>,
    /// Lower bounds of the `dims` rectangle.
    pub min_a: i64,
    pub min_b: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    pub verbose: bool,
}

/// Raw option values before resolution; every field optional so that the
/// merge can tell "absent" from "given".
#[derive(Clone, Debug, Default)]
pub struct RawOptions {
    pub d: Option<i64>,
    pub e: Option<i64>,
    pub curve: Option<String>,
    pub curve_seed: Option<u64>,
    pub field: Option<String>,
    pub prime: Option<u64>,
    pub trials: Option<u32>,
    pub seed: Option<u64>,
    pub height: Option<i64>,
    pub cap_a: Option<i64>,
    pub cap_b: Option<i64>,
    pub min_a: Option<i64>,
    pub min_b: Option<i64>,
    pub json: Option<PathBuf>,
    pub verbose: bool,
}

impl RawOptions {
    /// Overlays `self` on top of `base`: present values win.
    fn over(self, base: RawOptions) -> RawOptions {
        RawOptions {
            d: self.d.or(base.d),
            e: self.e.or(base.e),
            curve: self.curve.or(base.curve),
            curve_seed: self.curve_seed.or(base.curve_seed),
            field: self.field.or(base.field),
            prime: self.prime.or(base.prime),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            height: self.height.or(base.height),
            cap_a: self.cap_a.or(base.cap_a),
            cap_b: self.cap_b.or(base.cap_b),
            min_a: self.min_a.or(base.min_a),
            min_b: self.min_b.or(base.min_b),
            json: self.json.or(base.json),
            verbose: self.verbose || base.verbose,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Error> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

fn assign(opts: &mut RawOptions, key: &str, value: &str) -> Result<(), Error> {
    match key {
        "d" => opts.d = Some(parse_num(key, value)?),
        "e" => opts.e = Some(parse_num(key, value)?),
        "curve" => opts.curve = Some(value.trim().to_string()),
        "curve-seed" => opts.curve_seed = Some(parse_num(key, value)?),
        "field" => opts.field = Some(value.trim().to_string()),
        "prime" => opts.prime = Some(parse_num(key, value)?),
        "trials" => opts.trials = Some(parse_num(key, value)?),
        "seed" => opts.seed = Some(parse_num(key, value)?),
        "height" => opts.height = Some(parse_num(key, value)?),
        "cap-a" => opts.cap_a = Some(parse_num(key, value)?),
        "cap-b" => opts.cap_b = Some(parse_num(key, value)?),
        "min-a" => opts.min_a = Some(parse_num(key, value)?),
        "min-b" => opts.min_b = Some(parse_num(key, value)?),
        "json" => opts.json = Some(PathBuf::from(value.trim())),
        other => {
            return Err(Error::Config(format!("unknown configuration key `{other}`")));
        }
    }
    Ok(())
}

/// Parses a `key=value` config file.
pub fn parse_config_file(text: &str) -> Result<RawOptions, Error> {
    let mut opts = RawOptions::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected key=value, found `{line}`",
                lineno + 1
            )));
        };
        assign(&mut opts, key.trim(), value)?;
    }
    Ok(opts)
}

/// Reads the `BIJAC_`-prefixed environment overrides.
pub fn env_options(env: &BTreeMap<String, String>) -> Result<RawOptions, Error> {
    let mut opts = RawOptions::default();
    for key in [
        "d", "e", "curve", "curve-seed", "field", "prime", "trials", "seed", "height", "cap-a",
        "cap-b", "min-a", "min-b", "json",
    ] {
        let env_key = format!("BIJAC_{}", key.to_uppercase().replace('-', "_"));
        if let Some(value) = env.get(&env_key) {
            assign(&mut opts, key, value)?;
        }
    }
    Ok(opts)
}

/// Merges flag, environment, and file options (in that precedence) and
/// fills defaults.
pub fn resolve(
    command: &str,
    flags: RawOptions,
    env: &BTreeMap<String, String>,
    config_file: Option<&Path>,
) -> Result<RunConfig, Error> {
    let file_opts = match config_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config_file(&text)?
        }
        None => RawOptions::default(),
    };
    let merged = flags.over(env_options(env)?.over(file_opts));

    let d = merged
        .d
        .ok_or_else(|| Error::Config("the bidegree component d is required (--d)".into()))?;
    let e = merged
        .e
        .ok_or_else(|| Error::Config("the bidegree component e is required (--e)".into()))?;
    if d < 1 || e < 1 {
        return Err(Error::Config(format!("bidegree ({d},{e}) must be at least (1,1)")));
    }

    let curve = match (&merged.curve, merged.curve_seed) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give either --curve or --curve-seed, not both".into(),
            ))
        }
        (Some(text), None) => {
            let path = Path::new(text);
            if path.is_file() {
                let content = std::fs::read_to_string(path)
                    .map_err(|err| Error::Config(format!("cannot read {text}: {err}")))?;
                CurveSource::File {
                    path: path.to_path_buf(),
                    text: content.trim().to_string(),
                }
            } else {
                CurveSource::Literal { text: text.clone() }
            }
        }
        (None, Some(s)) => CurveSource::Seed { curve_seed: s },
        (None, None) => {
            return Err(Error::Config(
                "a curve is required: --curve <file|literal> or --curve-seed <n>".into(),
            ))
        }
    };

    let field = match merged.field.as_deref() {
        None | Some("p") => FieldMode::Prime,
        Some("Q") | Some("q") => FieldMode::Rational,
        Some("hybrid") => FieldMode::Hybrid,
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown field mode `{other}`; use p, Q, or hybrid"
            )))
        }
    };

    let height = merged.height.unwrap_or(10);
    if height < 0 {
        return Err(Error::Config("height must be nonnegative".into()));
    }
    let trials = merged.trials.unwrap_or(20);
    if trials == 0 {
        return Err(Error::NoTrials);
    }

    Ok(RunConfig {
        command: command.to_string(),
        d,
        e,
        curve,
        field,
        prime: merged.prime.unwrap_or(DEFAULT_PRIME),
        trials,
        seed: merged.seed.unwrap_or(42),
        height,
        cap_a: merged.cap_a,
        cap_b: merged.cap_b,
        min_a: merged.min_a.unwrap_or(0),
        min_b: merged.min_b.unwrap_or(0),
        json: merged.json,
        verbose: merged.verbose,
    })
}
