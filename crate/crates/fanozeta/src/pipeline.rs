//! find line, normalise, count, reconstruct, report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use fanozeta_core::cubic::{grassmannian_size, smoothness_heuristic, SmoothnessCheck};
use fanozeta_core::oracle::{count_hypersurface_p4, incidence_counts, lines_on_cubic, DEFAULT_BUDGET};
use fanozeta_core::weil::{
    coeffs_from_power_sums, feasible_last_trace, last_trace_centre, last_trace_radius, last_trace_window, nr_cubic,
    zeta_cubic, zeta_fano,
};
use fanozeta_core::{find_rational_line, normalize, CountRow, CubicForm, FieldDesc, Line, WeilData};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::driver::{count_row, CountOptions, Progress};
use crate::error::AppError;
use crate::job::JobSpec;
use crate::report::*;

/// Largest Grassmannian scanned when looking for a rational line.
pub const LINE_SEARCH_BUDGET: u64 = 50_000_000;
/// How many base extensions beyond the requested one are tried.
pub const EXTRA_EXTENSIONS: u32 = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub job_hash: String,
    pub job: JobSpec,
    pub e: u32,
    pub line: [[u64; 5]; 2],
    pub rows: Vec<RowJson>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| AppError::Io { path: path.display().to_string(), source })?;
        serde_json::from_str(&text).map_err(|e| AppError::Input(format!("checkpoint {}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<(), AppError> {
        let tmp = path.with_extension("tmp");
        let io = |source| AppError::Io { path: path.display().to_string(), source };
        std::fs::write(&tmp, serde_json::to_string_pretty(self).expect("serialisable")).map_err(io)?;
        std::fs::rename(&tmp, path).map_err(io)
    }
}

#[derive(Default)]
pub struct RunOptions<'a> {
    pub checkpoint: Option<PathBuf>,
    pub progress: Option<Progress<'a>>,
    pub chunk: Option<u64>,
}

fn line_codes(line: &Line) -> [[u64; 5]; 2] {
    line.rows().map(|r| r.map(|c| c.0))
}

/// Base field, cubic over it and a rational line, extending the base if needed.
pub fn locate_line(job: &JobSpec) -> Result<(FieldDesc, CubicForm, Line), AppError> {
    let base = job.field()?;
    let cubic = job.cubic_over(&base)?;
    if let Some(line) = job.line_over(&base)? {
        if !fanozeta_core::contains_line(&base, &cubic, &line) {
            return Err(AppError::Input("the given line does not lie on the cubic".into()));
        }
        return Ok((base, cubic, line));
    }
    let mut last = job.e;
    for e in job.e..=job.e + EXTRA_EXTENSIONS {
        let field = FieldDesc::new(job.p, e).map_err(|err| AppError::Input(err.to_string()))?;
        if grassmannian_size(field.order()) > LINE_SEARCH_BUDGET {
            break;
        }
        last = e;
        let cubic = job.cubic_over(&field)?;
        if let Some(line) = find_rational_line(&field, &cubic, LINE_SEARCH_BUDGET)? {
            return Ok((field, cubic, line));
        }
    }
    Err(AppError::NoLine { p: job.p, from: job.e, to: last })
}

fn job_at(job: &JobSpec, e: u32, line: [[u64; 5]; 2]) -> JobSpec {
    let mut j = job.clone();
    j.e = e;
    j.line = Some(line);
    j
}

pub fn run(job: &JobSpec, opts: &RunOptions<'_>) -> Result<ZetaReport, AppError> {
    job.validate()?;
    if let Some(cp) = opts.checkpoint.as_deref().filter(|p| p.exists()) {
        let c = Checkpoint::load(cp)?;
        return continue_from(job, c, opts);
    }
    let (base, _, line) = locate_line(job)?;
    let cp = Checkpoint {
        job_hash: job.hash(),
        job: job.clone(),
        e: base.degree(),
        line: line_codes(&line),
        rows: Vec::new(),
    };
    continue_from(job, cp, opts)
}

/// Resume from a checkpoint. With `job = None` the job stored in the checkpoint is used;
/// otherwise the two must hash identically.
pub fn resume(path: &Path, job: Option<&JobSpec>, opts: &RunOptions<'_>) -> Result<ZetaReport, AppError> {
    let c = Checkpoint::load(path)?;
    let job = match job {
        Some(j) => j.clone(),
        None => c.job.clone(),
    };
    let opts = RunOptions { checkpoint: Some(path.to_path_buf()), progress: opts.progress, chunk: opts.chunk };
    continue_from(&job, c, &opts)
}

fn continue_from(job: &JobSpec, mut cp: Checkpoint, opts: &RunOptions<'_>) -> Result<ZetaReport, AppError> {
    if cp.job_hash != job.hash() {
        return Err(AppError::Input(format!(
            "checkpoint belongs to a different job (hash {} vs {})",
            cp.job_hash,
            job.hash()
        )));
    }
    let start = Instant::now();
    let eff = job_at(job, cp.e, cp.line);
    let base = eff.field()?;
    let cubic = eff.cubic_over(&base)?;
    let line = eff.line_over(&base)?.expect("line set");
    let frame = normalize(&base, &cubic, &line)?;
    let mut diagnostics = Vec::new();
    if cp.e != job.e {
        diagnostics.push(format!(
            "no rational line over F_{}^{}; computed over the extension F_{}^{}",
            job.p, job.e, job.p, cp.e
        ));
    }
    if job.smoothness_check {
        match smoothness_heuristic(&base, &cubic, 1)? {
            SmoothnessCheck::NoSingularPointFound => {
                diagnostics.push("smoothness check: no singular point over the base field".into())
            }
            SmoothnessCheck::SingularPoint { point, .. } => diagnostics.push(format!(
                "smoothness check: singular point {:?}; the zeta data below is not that of a smooth cubic",
                point.map(|c| c.0)
            )),
        }
    }

    let count_opts =
        CountOptions { threads: job.threads, chunk: opts.chunk.unwrap_or(fanozeta_core::counting::DEFAULT_CHUNK) };
    let mut rows: Vec<CountRow> = Vec::new();
    let mut rows_ms = Vec::new();
    for r in 1..=job.max_r {
        if let Some(done) = cp.rows.iter().find(|x| x.r == r) {
            rows.push(done.to_row());
            rows_ms.push(0);
            continue;
        }
        let row = count_row(&base, &frame, r, &count_opts, opts.progress)?;
        rows_ms.push(row.millis.unwrap_or(0));
        cp.rows.push(RowJson::from(&row));
        cp.rows.sort_by_key(|x| x.r);
        if let Some(path) = &opts.checkpoint {
            cp.save(path)?;
        }
        rows.push(row);
    }
    let coherence: u64 = rows.iter().map(|r| r.coherence_checks).sum();
    if coherence > 0 {
        diagnostics.push(format!("delta coherence confirmed at {coherence} points with delta3 = 0"));
    }

    let mut report = ZetaReport {
        job: job.clone(),
        job_hash: job.hash(),
        p: job.p,
        e: cp.e,
        q: base.order(),
        line: cp.line,
        frame: FrameSummary::new(&frame),
        counts: rows.iter().map(RowJson::from).collect(),
        weil: None,
        n_cubic: Vec::new(),
        n_fano: Vec::new(),
        zeta_cubic: None,
        zeta_fano: None,
        last_trace: None,
        oracle: None,
        diagnostics,
        timings: Timings::default(),
    };
    let q = base.order();
    let traces: Vec<i64> = rows.iter().map(|r| -r.d).collect();
    let mut weil = None;
    if traces.len() >= 5 {
        let w = WeilData::from_traces(q, &traces, job.geometric, Some(job.tol))?;
        check_weil(&w, &mut report.diagnostics);
        report.n_cubic = (1..=3).map(|r| w.nr_cubic(r).to_string()).collect();
        report.n_fano = (1..=3).map(|r| w.nr_fano(r).map(|n| n.to_string())).collect::<Result<_, _>>()?;
        report.zeta_cubic = Some(ZetaJson::from(&zeta_cubic(&w.p1)));
        report.zeta_fano = Some(ZetaJson::from(&zeta_fano(&w.p1, &w.p2)?));
        report.weil = Some(WeilJson::new(&w, job.tol));
        weil = Some(w);
    } else {
        report.n_cubic = traces
            .iter()
            .take(3)
            .enumerate()
            .map(|(i, s)| nr_cubic(q, i as u32 + 1, &BigInt::from(*s)).to_string())
            .collect();
    }
    if traces.len() == 4 {
        report.last_trace = Some(last_trace(q, &traces, job.tol)?);
    }
    if job.oracle {
        report.oracle = Some(oracle(&base, &cubic, &line, &rows, weil.as_ref(), &mut report.diagnostics)?);
    }
    report.timings = Timings { rows_ms, total_ms: start.elapsed().as_millis() as u64 };
    Ok(report)
}

fn check_weil(w: &WeilData, diag: &mut Vec<String>) {
    if !w.p1_functional_equation {
        diag.push("P1 fails the functional equation".into());
    }
    if w.rho < 5 {
        diag.push(format!("(1 - qT)^5 does not divide P2: Picard number {} < 5", w.rho));
    }
    if let Some(g) = w.rho_geom {
        if g < w.rho || g > 45 {
            diag.push(format!("geometric Picard number {g} outside [{}, 45]", w.rho));
        }
    }
    if let Some(c) = &w.roots {
        if !c.on_circle {
            diag.push(format!("P1 has a root off the circle |T| = q^(-1/2) (deviation {:e})", c.max_deviation));
        }
    }
    if !w.artin_tate_integral {
        diag.push("q^10 times the Artin-Tate value is not an integer".into());
    }
    match w.p2_sign {
        Some(s) => diag.push(format!("P2 functional equation holds with sign {s:+}")),
        None => diag.push("P2 has no functional equation with sign +-1".into()),
    }
    if let Ok(n) = w.nr_fano(1) {
        if n.sign() == num_bigint::Sign::Minus {
            diag.push("negative N_1(S)".into());
        }
    }
}

/// Candidate values of `a_5` from the traces `s_1..s_4`.
pub fn last_trace(q: u64, traces: &[i64], tol: f64) -> Result<LastTraceJson, AppError> {
    let s: Vec<BigInt> = traces[..4].iter().map(|&v| BigInt::from(v)).collect();
    let head = coeffs_from_power_sums(&s)?;
    let prefix: [i64; 4] =
        core::array::from_fn(|k| i64::try_from(&head[k + 1]).expect("a_k fits in i64 for the supported q"));
    let (lo, hi) = last_trace_window(q, &prefix);
    let centre = last_trace_centre(&prefix);
    Ok(LastTraceJson {
        prefix: big_strings(&head),
        centre: centre.to_string(),
        radius: last_trace_radius(q),
        scanned: [lo, hi],
        tol,
        passing: feasible_last_trace(q, &prefix, tol),
    })
}

fn oracle(
    base: &FieldDesc,
    cubic: &CubicForm,
    line: &Line,
    rows: &[CountRow],
    weil: Option<&WeilData>,
    diag: &mut Vec<String>,
) -> Result<OracleJson, AppError> {
    let n1 = count_hypersurface_p4(base, cubic, 1, DEFAULT_BUDGET)?;
    let lines = lines_on_cubic(base, cubic, DEFAULT_BUDGET)?.len() as u64;
    let inc = incidence_counts(base, cubic, line, DEFAULT_BUDGET)?;
    let d1 = rows.first().map(|r| r.d).unwrap_or_default();
    let n1_formula = rows.first().map(|r| nr_cubic(base.order(), 1, &BigInt::from(-r.d)));
    let fano_formula = weil.map(|w| w.nr_fano(1)).transpose()?;
    let mut agree = inc.difference() == d1;
    if let Some(n) = &n1_formula {
        agree &= *n == BigInt::from(n1);
    }
    if let Some(n) = &fano_formula {
        agree &= *n == BigInt::from(lines);
    }
    if inc.difference() != d1 {
        diag.push(format!(
            "oracle: incidence difference {} (lines meeting L {}, L in residual conic {}, Gamma points {}) differs from D_1 = {d1}",
            inc.difference(),
            inc.lines_meeting,
            inc.residual_contains_line,
            inc.gamma_points
        ));
    }
    if let Some(row) = rows.first() {
        if row.gamma_points != inc.gamma_points {
            diag.push(format!(
                "oracle: Gamma_L has {} points by planes, {} by the quintic",
                inc.gamma_points, row.gamma_points
            ));
        }
    }
    Ok(OracleJson {
        n1_cubic_direct: n1,
        n1_cubic_formula: n1_formula.map(|n| n.to_string()),
        lines,
        n1_fano_formula: fano_formula.map(|n| n.to_string()),
        gamma_points: inc.gamma_points,
        lines_meeting: inc.lines_meeting,
        residual_contains_line: inc.residual_contains_line,
        double_lines: inc.double_lines,
        incidence_difference: inc.difference(),
        pipeline_difference: d1,
        agree,
    })
}
