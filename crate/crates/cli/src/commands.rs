use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use proxcert::{
    certify_trace, rho, run_pg, tightness_measurement, worst_case_instance, CertificationReport,
    CertifyOptions, CompositeProblem, StopReason,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{self, Experiment};
use crate::error::CliError;

/// Exit status for a run in which some certification failed.
pub const EXIT_CERT_FAILURE: i32 = 2;

/// Largest accepted `|measured − ρ(t)|` in the tightness table.
pub const TIGHTNESS_TOLERANCE: f64 = 1e-12;

/// Relative slack on the envelope comparison in the PL table.
pub const ENVELOPE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub seed_override: Option<u64>,
}

/// What gets written to `<id>.report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub stop_reason: StopReason,
    pub projected_start: bool,
    pub final_phi: f64,
    pub final_prox_grad_norm: f64,
    pub certification: CertificationReport,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub report: ExperimentReport,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub experiments: Vec<ExperimentOutcome>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.experiments
            .iter()
            .all(|e| e.report.certification.passed())
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            EXIT_CERT_FAILURE
        }
    }

    /// One line per experiment, in config order.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for e in &self.experiments {
            let c = &e.report.certification;
            let failed: Vec<&str> = c
                .checks
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.name.as_str())
                .collect();
            let _ = write!(
                out,
                "{}: {} after {} iterations (t = {:e}, rho = {:.6})",
                e.report.id,
                if c.passed() { "pass" } else { "FAIL" },
                c.iterations,
                c.step,
                c.rho,
            );
            if !failed.is_empty() {
                let _ = write!(out, " failed: {}", failed.join(", "));
            }
            out.push('\n');
        }
        out
    }
}

struct Prepared<'a> {
    experiment: &'a Experiment,
    problem: CompositeProblem,
    x0: Vec<f64>,
    t: f64,
}

fn prepare(e: &Experiment, seed_override: Option<u64>) -> Result<Prepared<'_>, CliError> {
    let tag = |err: CliError| CliError::Invalid(format!("experiment '{}': {err}", e.id));
    let problem = e.problem.build().map_err(|err| tag(err.into()))?;
    let (mu, lip) = (problem.smooth().mu(), problem.smooth().lip());
    let t = e.t.resolve(mu, lip).map_err(tag)?;
    let x0 = e.x0.resolve(problem.dim(), seed_override).map_err(tag)?;
    Ok(Prepared {
        experiment: e,
        problem,
        x0,
        t,
    })
}

/// Runs and certifies every experiment in the config, writing
/// `<id>.trace.csv`, `<id>.checks.csv` and `<id>.report.json` into `out_dir`.
pub fn cmd_run(config_path: &Path, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let config = config::load(config_path)?;
    let prepared = config
        .experiments
        .iter()
        .map(|e| prepare(e, opts.seed_override))
        .collect::<Result<Vec<_>, _>>()?;
    std::fs::create_dir_all(&opts.out_dir).map_err(|source| CliError::Io {
        path: opts.out_dir.clone(),
        source,
    })?;

    let results: Vec<Result<ExperimentOutcome, CliError>> = prepared
        .par_iter()
        .map(|p| run_one(p, &opts.out_dir))
        .collect();
    let experiments = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(RunOutcome { experiments })
}

fn run_one(p: &Prepared<'_>, out_dir: &Path) -> Result<ExperimentOutcome, CliError> {
    let e = p.experiment;
    let trace = run_pg(&p.problem, &p.x0, p.t, e.max_iters, e.tol)?;
    let opts = CertifyOptions {
        problem_id: e.id.clone(),
        checks: e.checks.clone(),
        ..CertifyOptions::default()
    };
    let certification = certify_trace(&p.problem, &trace, &opts)?;
    log::info!(
        "{}: {:?} after {} iterations",
        e.id,
        trace.stop_reason,
        certification.iterations
    );
    let last = trace.last();
    let report = ExperimentReport {
        id: e.id.clone(),
        stop_reason: trace.stop_reason,
        projected_start: trace.projected_start,
        final_phi: last.phi,
        final_prox_grad_norm: last.prox_grad_norm,
        certification,
    };
    let mut json = serde_json::to_string_pretty(&report).map_err(|err| {
        CliError::Invalid(format!("cannot serialize report for '{}': {err}", e.id))
    })?;
    json.push('\n');

    let files = vec![
        write_atomic(
            out_dir,
            &format!("{}.trace.csv", e.id),
            trace.to_csv().as_bytes(),
        )?,
        write_atomic(
            out_dir,
            &format!("{}.checks.csv", e.id),
            report.certification.to_csv().as_bytes(),
        )?,
        write_atomic(out_dir, &format!("{}.report.json", e.id), json.as_bytes())?,
    ];
    Ok(ExperimentOutcome { report, files })
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let target = dir.join(name);
    let io = |source| CliError::Io {
        path: target.clone(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(&target).map_err(|err| io(err.error))?;
    Ok(target)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessRow {
    pub t: f64,
    pub rho: f64,
    pub measured: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TightnessTable {
    pub rows: Vec<TightnessRow>,
}

impl TightnessTable {
    pub fn max_abs_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_abs_diff() < TIGHTNESS_TOLERANCE
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,rho,measured_worst_ratio,abs_diff\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                r.t, r.rho, r.measured, r.abs_diff
            );
        }
        out
    }
}

/// Measures the one-step contraction on the worst-case instance for each step in `grid`.
pub fn cmd_tightness(mu: f64, lip: f64, grid: &[String]) -> Result<TightnessTable, CliError> {
    if grid.is_empty() {
        return Err(CliError::Invalid("empty step grid".into()));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for token in grid {
        let t = config::StepSpec::Symbolic(token.clone()).resolve(mu, lip)?;
        let (problem, x0) = worst_case_instance(mu, lip, t)?;
        let measured = tightness_measurement(&problem, &x0, t, 1)?;
        let r = rho(t, mu, lip)?;
        rows.push(TightnessRow {
            t,
            rho: r,
            measured,
            abs_diff: (measured - r).abs(),
        });
    }
    Ok(TightnessTable { rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlRow {
    pub k: usize,
    pub gap: f64,
    pub new_envelope: f64,
    pub baseline_envelope: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlComparison {
    pub eta: f64,
    pub t: f64,
    pub new_rate: f64,
    pub baseline_rate: f64,
    pub rows: Vec<PlRow>,
}

impl PlComparison {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.within)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,gap,new_bound_envelope,baseline_envelope,within_new_bound\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{}",
                r.k, r.gap, r.new_envelope, r.baseline_envelope, r.within
            );
        }
        out
    }
}

/// Compares the optimality gap of one configured experiment against the
/// envelopes `gap₀·((1 − ηt)/(1 + ηt))ᵏ` and `gap₀·(1 − ηt)ᵏ`.
pub fn cmd_pl_compare(
    config_path: &Path,
    id: &str,
    iters: Option<usize>,
    seed_override: Option<u64>,
) -> Result<PlComparison, CliError> {
    let config = config::load(config_path)?;
    let e = config
        .experiments
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| {
            CliError::Invalid(format!("no experiment '{id}' in {}", config_path.display()))
        })?;
    let p = prepare(e, seed_override)?;
    let eta = p.problem.pl_constant().ok_or_else(|| {
        CliError::Invalid(format!("experiment '{id}' has no PL constant; set \"eta\""))
    })?;
    let min = p.problem.known_min().ok_or_else(|| {
        CliError::Invalid(format!(
            "experiment '{id}' has no known minimum; set \"known_min\""
        ))
    })?;
    pl_compare(
        &p.problem,
        &p.x0,
        p.t,
        iters.unwrap_or(e.max_iters),
        eta,
        min,
    )
}

/// The table behind [`cmd_pl_compare`] for an already built problem.
pub fn pl_compare(
    problem: &CompositeProblem,
    x0: &[f64],
    t: f64,
    iters: usize,
    eta: f64,
    min: f64,
) -> Result<PlComparison, CliError> {
    let a = eta * t;
    if !(a > 0.0) || a > 1.0 {
        return Err(CliError::Invalid(format!("need 0 < eta*t <= 1, got {a}")));
    }
    let trace = run_pg(problem, x0, t, iters, 0.0)?;
    let (new_rate, baseline_rate) = ((1.0 - a) / (1.0 + a), 1.0 - a);
    let floor = 1e-12 * min.abs().max(1.0);
    let gap0 = trace.records[0].phi - min;
    let rows = trace
        .records
        .iter()
        .map(|r| {
            let gap = r.phi - min;
            let new_envelope = gap0 * new_rate.powi(r.k as i32);
            PlRow {
                k: r.k,
                gap,
                new_envelope,
                baseline_envelope: gap0 * baseline_rate.powi(r.k as i32),
                within: gap <= new_envelope * (1.0 + ENVELOPE_SLACK) + floor,
            }
        })
        .collect();
    Ok(PlComparison {
        eta,
        t,
        new_rate,
        baseline_rate,
        rows,
    })
}
