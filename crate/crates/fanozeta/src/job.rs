//! Job descriptions: the JSON input format and the built-in presets.

use std::collections::BTreeMap;

use fanozeta_core::form::{monomial_degree, Monomial};
use fanozeta_core::presets::{example_cubic_terms, klein_cubic_terms};
use fanozeta_core::{CubicForm, FieldDesc, FqElem, Line};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::AppError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub m: [u8; 5],
    pub c: i64,
}

fn default_e() -> u32 {
    1
}

fn default_max_r() -> u32 {
    5
}

fn default_tol() -> f64 {
    1e-10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub p: u64,
    #[serde(default = "default_e")]
    pub e: u32,
    pub cubic: Vec<Term>,
    /// two points of P^4, coordinates as element codes of F_{p^e}
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<[[u64; 5]; 2]>,
    #[serde(default = "default_max_r")]
    pub max_r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub geometric: bool,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub smoothness_check: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
}

/// The part of a job that determines the counts; its hash keys checkpoints.
#[derive(Serialize)]
struct Identity<'a> {
    p: u64,
    e: u32,
    cubic: Vec<Term>,
    line: &'a Option<[[u64; 5]; 2]>,
}

impl JobSpec {
    pub fn new(p: u64, cubic: Vec<Term>) -> Self {
        JobSpec {
            p,
            e: 1,
            cubic,
            line: None,
            max_r: 5,
            threads: None,
            tol: 1e-10,
            geometric: false,
            oracle: false,
            smoothness_check: false,
            preset: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, AppError> {
        let job: JobSpec = serde_json::from_str(text).map_err(|e| AppError::Input(format!("job file: {e}")))?;
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> Result<(), AppError> {
        FieldDesc::new(self.p, 1).map_err(|e| AppError::Input(e.to_string()))?;
        for (i, t) in self.cubic.iter().enumerate() {
            if monomial_degree(&t.m) != 3 {
                return Err(AppError::Input(format!(
                    "cubic term {i} has exponents {:?} of degree {}, expected 3",
                    t.m,
                    monomial_degree(&t.m)
                )));
            }
        }
        if self.e == 0 {
            return Err(AppError::Input("base extension e must be at least 1".into()));
        }
        if !(1..=5).contains(&self.max_r) {
            return Err(AppError::Input(format!("max r must be in 1..=5, got {}", self.max_r)));
        }
        if !(self.tol > 0.0) {
            return Err(AppError::Input(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    /// Coefficients reduced mod p, like monomials merged, zeros dropped, sorted.
    pub fn reduced_terms(&self) -> Vec<Term> {
        let p = self.p as i64;
        let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
        for t in &self.cubic {
            let v = acc.entry(t.m).or_insert(0);
            *v = (*v + t.c.rem_euclid(p)).rem_euclid(p);
        }
        acc.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| Term { m, c }).collect()
    }

    /// Hex SHA-256 of the count-determining fields.
    pub fn hash(&self) -> String {
        let id = Identity { p: self.p, e: self.e, cubic: self.reduced_terms(), line: &self.line };
        let bytes = serde_json::to_vec(&id).expect("serialisable");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn field(&self) -> Result<FieldDesc, AppError> {
        FieldDesc::new(self.p, self.e).map_err(|e| AppError::Input(e.to_string()))
    }

    pub fn cubic_over(&self, field: &FieldDesc) -> Result<CubicForm, AppError> {
        let terms: Vec<(Monomial, i64)> = self.cubic.iter().map(|t| (t.m, t.c)).collect();
        CubicForm::from_int_terms(field, &terms).map_err(|e| AppError::Input(format!("cubic: {e}")))
    }

    pub fn line_over(&self, field: &FieldDesc) -> Result<Option<Line>, AppError> {
        let Some([a, b]) = self.line else { return Ok(None) };
        let q = field.order();
        if a.iter().chain(b.iter()).any(|&c| c >= q) {
            return Err(AppError::Input(format!("line coordinates must be element codes below {q}")));
        }
        Line::through(field, a.map(FqElem), b.map(FqElem)).map(Some).map_err(|e| AppError::Input(format!("line: {e}")))
    }
}

fn terms_from(list: Vec<(Monomial, i64)>) -> Vec<Term> {
    list.into_iter().map(|(m, c)| Term { m, c }).collect()
}

pub const PRESETS: &[&str] = &["paper-5", "paper-7", "paper-11", "klein:<p>"];

/// Built-in jobs. `paper-*` is the worked example with its line {x1 = x2 = x3 = 0};
/// `klein:p` is the Klein cubic at p with the geometric Picard number switched on.
pub fn preset(name: &str) -> Result<JobSpec, AppError> {
    let std_line = [[0, 0, 0, 1, 0], [0, 0, 0, 0, 1]];
    let mut job = if let Some(p) = name.strip_prefix("paper-") {
        let p: u64 = p.parse().map_err(|_| AppError::Input(format!("unknown preset {name}")))?;
        if ![5, 7, 11].contains(&p) {
            return Err(AppError::Input(format!("unknown preset {name}; try one of {PRESETS:?}")));
        }
        let mut job = JobSpec::new(p, terms_from(example_cubic_terms()));
        job.line = Some(std_line);
        if p == 11 {
            job.max_r = 4;
        }
        job
    } else if let Some(p) = name.strip_prefix("klein:") {
        let p: u64 = p.parse().map_err(|_| AppError::Input(format!("bad prime in preset {name}")))?;
        JobSpec::new(p, terms_from(klein_cubic_terms()))
    } else {
        return Err(AppError::Input(format!("unknown preset {name}; try one of {PRESETS:?}")));
    };
    job.geometric = true;
    job.preset = Some(name.to_string());
    Ok(job)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal() {
        let job = JobSpec::from_json(r#"{"p": 7, "cubic": [{"m": [2,1,0,0,0], "c": 1}, {"m": [0,0,0,2,1], "c": -1}]}"#)
            .unwrap();
        assert_eq!(job.e, 1);
        assert_eq!(job.max_r, 5);
        assert_eq!(job.reduced_terms()[0].c, 6);
    }

    #[test]
    fn bad_monomial_is_named() {
        let err = JobSpec::from_json(r#"{"p": 7, "cubic": [{"m": [1,1,0,0,0], "c": 1}]}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("term 0") && msg.contains("[1, 1, 0, 0, 0]"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn hash_ignores_threads_and_representation() {
        let a = preset("paper-5").unwrap();
        let mut b = a.clone();
        b.threads = Some(3);
        b.max_r = 2;
        b.cubic.push(Term { m: [3, 0, 0, 0, 0], c: 5 });
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), preset("paper-7").unwrap().hash());
    }

    #[test]
    fn presets_parse() {
        assert!(preset("klein:3").is_ok());
        assert!(preset("paper-13").is_err());
        assert!(preset("nope").is_err());
    }
}
