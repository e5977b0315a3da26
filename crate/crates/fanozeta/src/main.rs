use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fanozeta::report::ZetaReport;
use fanozeta::{locate_line, preset, resume, run, AppError, JobSpec, RunOptions};

#[derive(Parser)]
#[command(
    name = "fanozeta",
    version,
    about = "Zeta functions of cubic threefolds, their Fano surfaces and intermediate Jacobians"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline: line, conic bundle, counts for r = 1..max-r, Weil polynomials
    Run(JobArgs),
    /// Continue an interrupted run from its checkpoint file
    Resume {
        checkpoint: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        /// Job to check the checkpoint against (default: the job stored in it)
        #[arg(long)]
        job: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        json_out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Count up to r = 4 and list the a_5 values compatible with the Weil bounds
    ScanLastTrace(JobArgs),
    /// Brute-force cross-check of N_1(F), N_1(S) and D_1
    Oracle(JobArgs),
    /// Print the first rational line found (and the base extension used)
    FindLine(JobArgs),
}

#[derive(Args, Clone)]
struct JobArgs {
    /// JSON job file
    job: Option<PathBuf>,
    /// paper-5, paper-7, paper-11 or klein:<p>
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    max_r: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// compute the geometric Picard number
    #[arg(long)]
    geometric: bool,
    /// run the brute-force oracle on the base field
    #[arg(long)]
    oracle: bool,
    /// search the base field for a singular point first
    #[arg(long)]
    smoothness: bool,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// write the JSON report here ("-" for stdout)
    #[arg(long)]
    json_out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

fn load_job(path: Option<&PathBuf>, preset_name: Option<&str>) -> Result<JobSpec, AppError> {
    match (path, preset_name) {
        (Some(_), Some(_)) => Err(AppError::Input("give either a job file or --preset, not both".into())),
        (Some(p), None) => {
            let text = std::fs::read_to_string(p).map_err(|e| AppError::Input(format!("{}: {e}", p.display())))?;
            JobSpec::from_json(&text)
        }
        (None, Some(name)) => preset(name),
        (None, None) => Err(AppError::Input("a job file or --preset is required".into())),
    }
}

impl JobArgs {
    fn job(&self) -> Result<JobSpec, AppError> {
        let mut job = load_job(self.job.as_ref(), self.preset.as_deref())?;
        if let Some(r) = self.max_r {
            job.max_r = r;
        }
        if self.threads.is_some() {
            job.threads = self.threads;
        }
        if let Some(t) = self.tol {
            job.tol = t;
        }
        job.geometric |= self.geometric;
        job.oracle |= self.oracle;
        job.smoothness_check |= self.smoothness;
        job.validate()?;
        Ok(job)
    }
}

struct Meter {
    quiet: bool,
    last: Mutex<Instant>,
}

impl Meter {
    fn tick(&self, r: u32, done: u64, total: u64) {
        if self.quiet {
            return;
        }
        let mut last = self.last.lock().unwrap();
        if done == total || last.elapsed().as_secs_f64() > 2.0 {
            *last = Instant::now();
            eprintln!("r = {r}: {done}/{total} points ({:.1}%)", 100.0 * done as f64 / total as f64);
        }
    }
}

fn emit(report: &ZetaReport, out: Option<&PathBuf>) -> Result<(), AppError> {
    let json = report.to_json();
    match out {
        Some(p) if p.as_os_str() == "-" => println!("{json}"),
        Some(p) => std::fs::write(p, json).map_err(|source| AppError::Io { path: p.display().to_string(), source })?,
        None => print_summary(report),
    }
    Ok(())
}

fn print_summary(r: &ZetaReport) {
    let mut o = std::io::stdout().lock();
    let _ = writeln!(o, "q = {} (p = {}, e = {}), line {:?}", r.q, r.p, r.e, r.line);
    for row in &r.counts {
        let _ = writeln!(
            o,
            "r = {}: D = {:>8}  Gamma points = {} (split {}, nonsplit {}, singular {})",
            row.r, row.d, row.gamma_points, row.split, row.nonsplit, row.singular
        );
    }
    if let Some(w) = &r.weil {
        let _ = writeln!(o, "traces s_r = {:?}", w.traces);
        let _ = writeln!(o, "P1(T) coefficients: {}", w.p1.join(", "));
        let _ = writeln!(o, "Picard number: {}", w.picard);
        if let Some(g) = w.geometric_picard {
            let _ = writeln!(o, "geometric Picard number: {g}");
        }
        let _ = writeln!(
            o,
            "Artin-Tate value: {} = {}",
            w.artin_tate.factored,
            w.artin_tate.num.clone() + "/" + &w.artin_tate.den
        );
        let _ = writeln!(o, "N_r(F), r <= 3: {}", r.n_cubic.join(", "));
        let _ = writeln!(o, "N_r(S), r <= 3: {}", r.n_fano.join(", "));
    }
    if let Some(lt) = &r.last_trace {
        let _ = writeln!(o, "prefix 1, a_1..a_4: {}", lt.prefix.join(", "));
        let _ = writeln!(o, "radius (10/5) q^(5/2) = {:.6}", lt.radius);
        match (lt.passing.first(), lt.passing.last()) {
            (Some(a), Some(b)) => {
                let _ = writeln!(o, "{} values of a_5 pass (min {a}, max {b})", lt.passing.len());
            }
            _ => {
                let _ = writeln!(o, "no value of a_5 passes");
            }
        }
    }
    if let Some(or) = &r.oracle {
        let _ = writeln!(
            o,
            "oracle: N_1(F) = {}, lines = {}, incidence difference = {} vs D_1 = {} -> {}",
            or.n1_cubic_direct,
            or.lines,
            or.incidence_difference,
            or.pipeline_difference,
            if or.agree { "agree" } else { "DISAGREE" }
        );
    }
    for d in &r.diagnostics {
        let _ = writeln!(o, "note: {d}");
    }
}

fn execute(cli: Cli) -> Result<(), AppError> {
    match cli.cmd {
        Cmd::Run(a) => {
            let job = a.job()?;
            let meter = Meter { quiet: a.quiet, last: Mutex::new(Instant::now()) };
            let progress = |r, d, t| meter.tick(r, d, t);
            let opts = RunOptions { checkpoint: a.checkpoint.clone(), progress: Some(&progress), chunk: None };
            emit(&run(&job, &opts)?, a.json_out.as_ref())
        }
        Cmd::ScanLastTrace(a) => {
            let mut job = a.job()?;
            job.max_r = 4;
            let meter = Meter { quiet: a.quiet, last: Mutex::new(Instant::now()) };
            let progress = |r, d, t| meter.tick(r, d, t);
            let opts = RunOptions { checkpoint: a.checkpoint.clone(), progress: Some(&progress), chunk: None };
            emit(&run(&job, &opts)?, a.json_out.as_ref())
        }
        Cmd::Oracle(a) => {
            let mut job = a.job()?;
            job.oracle = true;
            if a.max_r.is_none() {
                job.max_r = 1;
            }
            let report = run(&job, &RunOptions::default())?;
            let agree = report.oracle.as_ref().is_some_and(|o| o.agree);
            emit(&report, a.json_out.as_ref())?;
            if !agree {
                return Err(AppError::Invariant("oracle and pipeline disagree".into()));
            }
            Ok(())
        }
        Cmd::FindLine(a) => {
            let job = a.job()?;
            let (field, _, line) = locate_line(&job)?;
            let rows = line.rows().map(|r| r.map(|c| c.0));
            println!(
                "base F_{}^{} (q = {}), line through {:?} and {:?}",
                job.p,
                field.degree(),
                field.order(),
                rows[0],
                rows[1]
            );
            Ok(())
        }
        Cmd::Resume { checkpoint, threads, job, preset: pre, json_out, quiet } => {
            let given = match (job.as_ref(), pre.as_deref()) {
                (None, None) => None,
                (j, p) => Some(load_job(j, p)?),
            };
            let mut stored = fanozeta::Checkpoint::load(&checkpoint)?.job;
            if let Some(g) = &given {
                if g.hash() != stored.hash() {
                    return Err(AppError::Input(format!(
                        "checkpoint {} belongs to a different job",
                        checkpoint.display()
                    )));
                }
                stored = g.clone();
            }
            if threads.is_some() {
                stored.threads = threads;
            }
            let meter = Meter { quiet, last: Mutex::new(Instant::now()) };
            let progress = |r, d, t| meter.tick(r, d, t);
            let opts = RunOptions { checkpoint: None, progress: Some(&progress), chunk: None };
            emit(&resume(&checkpoint, Some(&stored), &opts)?, json_out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
