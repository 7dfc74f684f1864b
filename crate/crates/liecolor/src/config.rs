//! Declarative session files.
//!
//! A session is described by one TOML or JSON document; the format is
//! chosen by file extension. Every validator runs before any computation
//! and all violations are collected into one structured report.
//!
//! ```toml
//! seed = 42
//! probes = 64
//! k = [0, 0, 0, 2]
//! t_colors = [[1], [1]]
//!
//! [gamma]
//! invariant_factors = [2]
//!
//! [epsilon]
//! exponent_matrix = [[1]]
//! denominator = 2
//! ```
//!
//! Optional sections: `[G]` with `generators` (rows are rational generator
//! vectors), `[hat]` with `images` (grading coordinates per generator),
//! `[gamma0]` with `elements` and `e_table` (scalar literals), and
//! `[truncation]` with `max_t_degree` and `a_window` (one inclusive
//! `[lo, hi]` range per generator).

use crate::grading::{Grading, GradingGroup};
use crate::rat::Rat;
use crate::report::ValidationReport;
use crate::scalar::Cyclotomic;
use crate::session::{Session, SessionOptions, Truncation};
use crate::structure::{GammaZeroData, GroupG, KSignature};
use num::One;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid configuration:\n{report}")]
    Invalid { report: ValidationReport },
}

/// Serde mirror of a session file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub probes: Option<u32>,
    pub k: [usize; 4],
    #[serde(default)]
    pub t_colors: Vec<Vec<i64>>,
    pub gamma: GammaSection,
    pub epsilon: EpsilonSection,
    #[serde(default, rename = "G")]
    pub g: Option<GSection>,
    #[serde(default)]
    pub hat: Option<HatSection>,
    #[serde(default)]
    pub gamma0: Option<Gamma0Section>,
    #[serde(default)]
    pub truncation: Option<TruncationSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSection {
    pub invariant_factors: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonSection {
    pub exponent_matrix: Vec<Vec<i64>>,
    pub denominator: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSection {
    pub generators: Vec<Vec<Number>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HatSection {
    pub images: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gamma0Section {
    pub elements: Vec<Vec<i64>>,
    pub e_table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSection {
    pub max_t_degree: u32,
    #[serde(default)]
    pub a_window: Vec<[i64; 2]>,
}

/// Integer or rational-string entry.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Str(String),
}

impl Number {
    fn to_rat(&self) -> Result<Rat, String> {
        match self {
            Number::Int(n) => Ok(Rat::from_int(*n)),
            Number::Str(s) => s.parse::<Rat>().map_err(|e| e.to_string()),
        }
    }
}

impl RawConfig {
    /// Validate everything and assemble a session.
    pub fn into_session(self) -> Result<Session, ConfigError> {
        let invalid = |report: ValidationReport| ConfigError::Invalid { report };
        let group = GradingGroup::new(self.gamma.invariant_factors.clone());
        let grading = Grading::new(
            group,
            self.epsilon.exponent_matrix.clone(),
            self.epsilon.denominator,
        )
        .map_err(invalid)?;

        let rank = grading.group().rank();
        let mut report = ValidationReport::new();
        let reduce_all = |coords: &[Vec<i64>], what: &str, report: &mut ValidationReport| {
            coords
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    if c.len() != rank {
                        report.push(
                            format!("{what}.shape"),
                            format!("entry {n} has {} coordinates, want {rank}", c.len()),
                        );
                        grading.group().zero()
                    } else {
                        grading.group().reduce(c)
                    }
                })
                .collect::<Vec<_>>()
        };

        let t_colors = reduce_all(&self.t_colors, "t_colors", &mut report);
        let signature = KSignature::new(self.k, t_colors);

        let generators = match &self.g {
            None => vec![],
            Some(gs) => {
                let mut out = Vec::new();
                for (n, row) in gs.generators.iter().enumerate() {
                    let mut v = Vec::new();
                    for entry in row {
                        match entry.to_rat() {
                            Ok(r) => v.push(r),
                            Err(e) => {
                                report.push("G.entries", format!("generator {n}: {e}"));
                            }
                        }
                    }
                    out.push(v);
                }
                out
            }
        };
        let hat_images = match &self.hat {
            None => vec![],
            Some(h) => reduce_all(&h.images, "hat", &mut report),
        };
        let group_g = GroupG::new(generators, hat_images);

        let gamma0 = match &self.gamma0 {
            None => GammaZeroData::trivial(&grading),
            Some(sec) => {
                let elements = reduce_all(&sec.elements, "gamma0", &mut report);
                let mut rows = Vec::new();
                for (i, row) in sec.e_table.iter().enumerate() {
                    let mut out = Vec::new();
                    for (j, s) in row.iter().enumerate() {
                        match Cyclotomic::parse(s, grading.order()) {
                            Ok(v) => out.push(v),
                            Err(e) => {
                                report.push(
                                    "e-table.entries",
                                    format!("entry ({i},{j}): {e}"),
                                );
                                out.push(Cyclotomic::one());
                            }
                        }
                    }
                    rows.push(out);
                }
                GammaZeroData::new(elements, rows)
            }
        };

        if !report.is_valid() {
            return Err(invalid(report));
        }

        let truncation = match &self.truncation {
            None => None,
            Some(t) => {
                let m = group_g.rank();
                if t.a_window.len() != m {
                    let mut r = ValidationReport::new();
                    r.push(
                        "truncation.shape",
                        format!("a_window has {} ranges, want {m}", t.a_window.len()),
                    );
                    return Err(invalid(r));
                }
                let ranges: Vec<(i64, i64)> =
                    t.a_window.iter().map(|&[lo, hi]| (lo, hi)).collect();
                if ranges.iter().any(|&(lo, hi)| lo > hi) {
                    let mut r = ValidationReport::new();
                    r.push("truncation.range", "empty coordinate range");
                    return Err(invalid(r));
                }
                Some(Truncation::boxed(t.max_t_degree, &ranges))
            }
        };
        let options = SessionOptions {
            seed: self.seed.unwrap_or(0),
            probes: self.probes.unwrap_or(64),
            truncation,
        };

        Session::build(grading, signature, group_g, gamma0, options).map_err(invalid)
    }

    pub fn from_toml_str(text: &str) -> Result<RawConfig, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_json_str(text: &str) -> Result<RawConfig, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

/// Read, parse and validate a session file; format by extension, TOML by
/// default.
pub fn load_and_validate(path: impl AsRef<Path>) -> Result<Session, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let raw = if is_json {
        RawConfig::from_json_str(&text)
    } else {
        RawConfig::from_toml_str(&text)
    }
    .map_err(|message| ConfigError::Parse {
        path: path.display().to_string(),
        message,
    })?;
    raw.into_session()
}
