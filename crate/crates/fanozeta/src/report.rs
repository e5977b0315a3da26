//! Serialisable report types. Big integers are decimal strings.

use fanozeta_core::form::Form;
use fanozeta_core::weil::{FactoredZeta, RootCheck, WeilData};
use fanozeta_core::{CountRow, LineFrame};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::job::JobSpec;

pub fn big_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTerm {
    pub m: Vec<u8>,
    /// element code
    pub c: u64,
}

pub fn form_terms(f: &Form) -> Vec<FormTerm> {
    f.terms().filter(|(_, c)| !c.is_zero()).map(|(m, c)| FormTerm { m: m[..f.nvars()].to_vec(), c: c.0 }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameSummary {
    /// columns 4 and 5 span the line
    pub change: Vec<Vec<u64>>,
    pub l: Vec<Vec<FormTerm>>,
    pub q: Vec<Vec<FormTerm>>,
    pub f: Vec<FormTerm>,
}

impl FrameSummary {
    pub fn new(frame: &LineFrame) -> Self {
        FrameSummary {
            change: frame.change.iter().map(|r| r.iter().map(|c| c.0).collect()).collect(),
            l: frame.l.iter().map(form_terms).collect(),
            q: frame.q.iter().map(form_terms).collect(),
            f: form_terms(&frame.f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJson {
    pub r: u32,
    pub d: i64,
    pub gamma_points: u64,
    pub split: u64,
    pub nonsplit: u64,
    pub singular: u64,
    pub coherence_checks: u64,
}

impl From<&CountRow> for RowJson {
    fn from(r: &CountRow) -> Self {
        RowJson {
            r: r.r,
            d: r.d,
            gamma_points: r.gamma_points,
            split: r.split,
            nonsplit: r.nonsplit,
            singular: r.singular,
            coherence_checks: r.coherence_checks,
        }
    }
}

impl RowJson {
    pub fn to_row(&self) -> CountRow {
        CountRow {
            r: self.r,
            d: self.d,
            gamma_points: self.gamma_points,
            split: self.split,
            nonsplit: self.nonsplit,
            singular: self.singular,
            coherence_checks: self.coherence_checks,
            millis: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootCheckJson {
    pub on_circle: bool,
    pub max_deviation: f64,
    pub error_bound: f64,
    pub tol: f64,
}

impl RootCheckJson {
    pub fn new(c: &RootCheck, tol: f64) -> Self {
        RootCheckJson { on_circle: c.on_circle, max_deviation: c.max_deviation, error_bound: c.error_bound, tol }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub factored: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeilJson {
    pub traces: Vec<i64>,
    pub p1: Vec<String>,
    pub p2: Vec<String>,
    pub picard: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometric_picard: Option<u32>,
    pub artin_tate: RationalJson,
    pub artin_tate_q10_integral: bool,
    pub p1_functional_equation: bool,
    /// sign c in the functional equation of P2
    pub p2_sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootCheckJson>,
}

impl WeilJson {
    pub fn new(w: &WeilData, tol: f64) -> Self {
        WeilJson {
            traces: w.traces.clone(),
            p1: big_strings(w.p1.coeffs()),
            p2: big_strings(w.p2.coeffs()),
            picard: w.rho,
            geometric_picard: w.rho_geom,
            artin_tate: RationalJson {
                num: w.artin_tate.numer().to_string(),
                den: w.artin_tate.denom().to_string(),
                factored: w.artin_tate.factored(),
            },
            artin_tate_q10_integral: w.artin_tate_integral,
            p1_functional_equation: w.p1_functional_equation,
            p2_sign: w.p2_sign,
            roots: w.roots.as_ref().map(|c| RootCheckJson::new(c, tol)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaJson {
    pub numerator: Vec<Vec<String>>,
    pub denominator: Vec<Vec<String>>,
}

impl From<&FactoredZeta> for ZetaJson {
    fn from(z: &FactoredZeta) -> Self {
        ZetaJson {
            numerator: z.numerator.iter().map(|p| big_strings(p)).collect(),
            denominator: z.denominator.iter().map(|p| big_strings(p)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LastTraceJson {
    /// 1, a_1, .., a_4
    pub prefix: Vec<String>,
    /// centre of the disk containing a_5, exact
    pub centre: String,
    pub radius: f64,
    pub scanned: [i64; 2],
    pub tol: f64,
    pub passing: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleJson {
    pub n1_cubic_direct: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1_cubic_formula: Option<String>,
    pub lines: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1_fano_formula: Option<String>,
    pub gamma_points: u64,
    pub lines_meeting: u64,
    pub residual_contains_line: u64,
    pub double_lines: u64,
    pub incidence_difference: i64,
    pub pipeline_difference: i64,
    pub agree: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub rows_ms: Vec<u64>,
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub job: JobSpec,
    pub job_hash: String,
    pub p: u64,
    /// base extension actually used: q = p^e
    pub e: u32,
    pub q: u64,
    pub line: [[u64; 5]; 2],
    pub frame: FrameSummary,
    pub counts: Vec<RowJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weil: Option<WeilJson>,
    /// N_r(F), r = 1..3
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_cubic: Vec<String>,
    /// N_r(S), r = 1..3
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_fano: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_cubic: Option<ZetaJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_fano: Option<ZetaJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_trace: Option<LastTraceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
    pub diagnostics: Vec<String>,
    pub timings: Timings,
}

impl ZetaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }

    /// Report with the timing fields cleared, for comparisons between runs.
    pub fn without_timings(&self) -> ZetaReport {
        let mut r = self.clone();
        r.timings = Timings::default();
        r.job.threads = None;
        r
    }
}
