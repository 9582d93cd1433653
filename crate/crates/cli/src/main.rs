//! `qaffine`: batch driver. Exit codes: 0 all checks pass, 1 a check failed,
//! 2 configuration error, 3 internal inconsistency.

mod config;
mod jobs;
mod report;

use clap::{Args, Parser, Subcommand};
use config::{config_load, validate, JobConfig, JobKind, Output, Point};
use jobs::{run_job, Failure, JobOutput};
use report::{to_json, write, Report};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qaffine", version, about = "Exact workbench for quantum affine sl2")]
struct Cli {
    /// Leave timing fields out of reports, making them byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Out {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the CSV table (poles, spectrum, representatives or criteria) here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct Assign {
    /// Numeric value of q̃ for pole analysis.
    #[arg(long)]
    qt: Option<f64>,
    /// Numeric value of z; requires |q̃² z| > 1.
    #[arg(long)]
    z: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spectral braiding series of X[t] ⊗ Y, with a rational fit.
    Rmatrix {
        #[arg(long = "X", default_value = "V1")]
        x: String,
        #[arg(long = "Y", default_value = "V1")]
        y: String,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        fit_degree: Option<usize>,
        #[command(flatten)]
        assign: Assign,
        #[command(flatten)]
        out: Out,
    },
    /// Sugawara operator on a truncated Verma module.
    Sugawara {
        #[arg(long, default_value = "a")]
        weight: String,
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Order-n coinvariants of V_a ⊗ X ⊗ ωV_b with b = a + shift·ω.
    Coinv {
        #[arg(long = "X", default_value = "V1")]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<i32>,
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Solve a q-difference system from JSON and continue the solution.
    Qdiff {
        #[arg(long)]
        system: PathBuf,
        /// Real part of the continuation target.
        #[arg(long = "continue", allow_hyphen_values = true)]
        continue_to: Option<f64>,
        /// Imaginary part of the continuation target.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        continue_im: f64,
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, default_value = "desk")]
        level: String,
        #[command(flatten)]
        out: Out,
    },
    /// Run the job or jobs in a JSON config file.
    Run { config: PathBuf },
}

fn out_of(o: Out) -> Output {
    Output { json: o.out, csv: o.csv }
}

fn assign_of(a: Assign) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    if let Some(q) = a.qt {
        m.insert("qt".into(), q);
    }
    if let Some(z) = a.z {
        m.insert("z".into(), z);
    }
    m
}

fn build(cmd: Cmd) -> Result<Vec<JobConfig>, Vec<String>> {
    let c = match cmd {
        Cmd::Run { config } => return config_load(&config),
        Cmd::Rmatrix { x, y, order, fit_degree, assign, out } => {
            let mut c = JobConfig::new(JobKind::Rmatrix);
            (c.x, c.y, c.order, c.fit_degree, c.assign, c.output) = (Some(x), Some(y), order, fit_degree, assign_of(assign), out_of(out));
            c
        }
        Cmd::Sugawara { weight, order, out } => {
            let mut c = JobConfig::new(JobKind::Sugawara);
            (c.weight, c.order, c.output) = (Some(weight), order, out_of(out));
            c
        }
        Cmd::Coinv { x, shift, order, out } => {
            let mut c = JobConfig::new(JobKind::Coinv);
            (c.x, c.shift, c.order, c.output) = (Some(x), shift, order, out_of(out));
            c
        }
        Cmd::Qdiff { system, continue_to, continue_im, order, out } => {
            let mut c = JobConfig::new(JobKind::Qdiff);
            c.system = Some(system);
            c.continue_to = continue_to.map(|re| if continue_im == 0.0 { Point::Real(re) } else { Point::Complex([re, continue_im]) });
            (c.order, c.output) = (order, out_of(out));
            c
        }
        Cmd::VerifyAll { level, out } => {
            let mut c = JobConfig::new(JobKind::VerifyAll);
            (c.level, c.output) = (Some(level), out_of(out));
            c
        }
    };
    validate(&c)?;
    Ok(vec![c])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = match build(cli.cmd) {
        Ok(j) => j,
        Err(errs) => {
            for e in errs {
                eprintln!("config error: {e}");
            }
            return ExitCode::from(2);
        }
    };
    let timing = !cli.no_timing;
    // independent jobs run concurrently; reports are assembled in order
    let results: Vec<Result<JobOutput, Failure>> = std::thread::scope(|s| {
        let hs: Vec<_> = jobs.iter().map(|j| s.spawn(move || run_job(j, timing))).collect();
        hs.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(Failure::Internal("job panicked".into())))).collect()
    });
    let mut code = 0u8;
    let mut stdout_reports: Vec<Report> = Vec::new();
    for (job, r) in jobs.iter().zip(results) {
        match r {
            Ok(o) => {
                for c in o.report.checks.iter().filter(|c| !c.pass) {
                    eprintln!("FAIL {}: {} (residual {})", job.kind.name(), c.anchor, c.residual);
                }
                if !o.report.pass {
                    code = code.max(1);
                }
                if let (Some(p), Some(t)) = (&job.output.csv, &o.table) {
                    if let Err(e) = write(p, &t.to_csv()) {
                        eprintln!("error: {}: {e}", p.display());
                        code = code.max(3);
                    }
                }
                match &job.output.json {
                    Some(p) => {
                        if let Err(e) = write(p, &to_json(&o.report)) {
                            eprintln!("error: {}: {e}", p.display());
                            code = code.max(3);
                        }
                    }
                    None => stdout_reports.push(o.report),
                }
            }
            Err(Failure::Config(e)) => {
                eprintln!("config error: {e}");
                code = code.max(2);
            }
            Err(Failure::Internal(e)) => {
                eprintln!("internal inconsistency: {e}");
                code = 3;
            }
        }
    }
    if jobs.len() == 1 {
        if let Some(r) = stdout_reports.first() {
            print!("{}", to_json(r));
        }
    } else if jobs.iter().any(|j| j.output.json.is_none()) || jobs.is_empty() {
        print!("{}", to_json(&serde_json::json!({ "reports": stdout_reports })));
    }
    ExitCode::from(code)
}
