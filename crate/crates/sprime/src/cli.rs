//! Command-line parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sprime_core::rational::{self, Rational};
use sprime_core::ProductManifold;

use crate::commands::{self, DEFAULT_SPECTRUM_CUTOFF};
use crate::config::{Format, RunConfig};
use crate::descriptor::load_manifold;
use crate::error::{exit, CliError};
use crate::oracle_run::{self, DEFAULT_ORACLE_CUTOFF};
use crate::report::{emit, Report};
use crate::sweep;
use crate::verify::{self, Fault, VerifyContext};

#[derive(Debug, Parser)]
#[command(
    name = "sprime",
    version,
    about = "Spectral invariants of the fourth-order stability operator on products of round spheres"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Inline descriptor such as S2(1/4)xS3, or a descriptor file.
    #[arg(long, global = true)]
    pub manifold: Option<String>,
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Enumeration cutoff on the total Laplace eigenvalue.
    #[arg(long, global = true)]
    pub cutoff: Option<String>,
    /// Minimize the A_alpha symbol instead of A (nu only).
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Ricci lower bound used in bound hypotheses.
    #[arg(long, global = true)]
    pub k: Option<String>,
    /// Finite-difference step.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometry of the product: curvatures, lambda1, kernel eigenvalue.
    Describe,
    /// Joint Laplace spectrum up to the cutoff.
    Spectrum,
    /// nu, the bottom of the A spectrum, with its certificate.
    Nu,
    /// mu, the bottom of the P spectrum.
    Mu,
    /// alpha* = nu/|r|^2 and the A_alpha* minimum.
    AlphaStar,
    /// The kernel of A and its Laplace eigenvalue.
    Kernel,
    /// Closed-form eigenvalue bounds with hypothesis checks.
    Bounds,
    /// Finite-difference and quadrature checks of the exact symbols.
    Oracle(OracleArgs),
    /// nu and the bound suite over a one-parameter family.
    Sweep(SweepArgs),
    /// The full reproduction suite.
    Verify,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Modes as ";"-separated level lists, e.g. "1,0;0,2".
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long)]
    pub polar: Option<usize>,
    #[arg(long)]
    pub azimuth: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Disable the Richardson step.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Descriptor with "t" as the swept squared radius, e.g. "S2(t)xS2".
    #[arg(long)]
    pub template: Option<String>,
    /// "a,b,c" or "start:stop:count".
    #[arg(long)]
    pub grid: Option<String>,
}

impl Cli {
    /// Defaults, then the config file, then flags.
    pub fn merged_config(&self) -> Result<RunConfig, CliError> {
        let g = &self.global;
        let mut c = match &g.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        fn set<T: Clone>(field: &mut T, value: &Option<T>) {
            if let Some(v) = value {
                *field = v.clone();
            }
        }
        fn set_some<T: Clone>(field: &mut Option<T>, value: &Option<T>) {
            if value.is_some() {
                *field = value.clone();
            }
        }
        set_some(&mut c.manifold, &g.manifold);
        set_some(&mut c.cutoff, &g.cutoff);
        set_some(&mut c.alpha, &g.alpha);
        set_some(&mut c.k, &g.k);
        set_some(&mut c.out, &g.out);
        set(&mut c.format, &g.format);
        set(&mut c.seed, &g.seed);
        set(&mut c.oracle.epsilon, &g.epsilon);
        match &self.command {
            Command::Oracle(a) => {
                set_some(&mut c.oracle.levels, &a.levels);
                set(&mut c.oracle.polar, &a.polar);
                set(&mut c.oracle.azimuth, &a.azimuth);
                set(&mut c.oracle.samples, &a.samples);
                if a.raw {
                    c.oracle.richardson = false;
                }
            }
            Command::Sweep(a) => {
                set_some(&mut c.sweep.template, &a.template);
                set_some(&mut c.sweep.grid, &a.grid);
            }
            _ => {}
        }
        Ok(c)
    }
}

fn rational_opt(text: &Option<String>, what: &str) -> Result<Option<Rational>, CliError> {
    text.as_deref()
        .map(|t| rational::parse(t).map_err(|e| CliError::Usage(format!("--{what}: {e}"))))
        .transpose()
}

fn manifold(c: &RunConfig) -> Result<ProductManifold, CliError> {
    let desc = c
        .manifold
        .as_deref()
        .ok_or_else(|| CliError::Usage("--manifold is required".into()))?;
    load_manifold(desc)
}

fn cutoff(c: &RunConfig, default: i64) -> Result<Rational, CliError> {
    Ok(rational_opt(&c.cutoff, "cutoff")?.unwrap_or_else(|| rational::int(default)))
}

/// A rendered report and whether its checks passed.
struct Outcome {
    report: Option<Report>,
    passed: bool,
    failure: Option<String>,
}

fn ok(report: Report) -> Outcome {
    Outcome {
        report: Some(report),
        passed: true,
        failure: None,
    }
}

fn checked((report, passed): (Report, bool), what: &str) -> Outcome {
    Outcome {
        report: Some(report),
        passed,
        failure: (!passed).then(|| format!("{what} failed")),
    }
}

fn dispatch(cli: &Cli, c: &RunConfig) -> Result<Outcome, CliError> {
    Ok(match &cli.command {
        Command::Describe => ok(commands::describe(&manifold(c)?)),
        Command::Spectrum => ok(commands::spectrum(
            &manifold(c)?,
            &cutoff(c, DEFAULT_SPECTRUM_CUTOFF)?,
        )),
        Command::Nu => ok(commands::nu(
            &manifold(c)?,
            rational_opt(&c.alpha, "alpha")?.as_ref(),
        )?),
        Command::Mu => ok(commands::mu(&manifold(c)?)?),
        Command::AlphaStar => ok(commands::alpha_star(&manifold(c)?)?),
        Command::Kernel => ok(commands::kernel(&manifold(c)?)?),
        Command::Bounds => checked(
            commands::bounds(&manifold(c)?, rational_opt(&c.k, "k")?.as_ref())?,
            "bound check",
        ),
        Command::Oracle(_) => {
            let m = manifold(c)?;
            let modes = oracle_run::select_modes(
                &m,
                c.oracle.levels.as_deref(),
                &cutoff(c, DEFAULT_ORACLE_CUTOFF)?,
            )?;
            checked(
                oracle_run::oracle(&m, &modes, &c.oracle.settings(), c.seed)?,
                "oracle check",
            )
        }
        Command::Sweep(_) => {
            let template = c
                .sweep
                .template
                .as_deref()
                .ok_or_else(|| CliError::Usage("sweep needs --template".into()))?;
            let grid = c
                .sweep
                .grid
                .as_deref()
                .ok_or_else(|| CliError::Usage("sweep needs --grid".into()))?;
            match sweep::sweep(template, grid)? {
                Some(r) => checked(r, "sweep bound check"),
                None => Outcome {
                    report: None,
                    passed: true,
                    failure: None,
                },
            }
        }
        Command::Verify => {
            let ctx = VerifyContext {
                settings: c.oracle.settings(),
                seed: c.seed,
                fault: cli.global.inject_fault,
            };
            let (report, first) = verify::verify(&ctx);
            Outcome {
                report: Some(report),
                passed: first.is_none(),
                failure: first.map(|r| {
                    format!(
                        "first failing row: {} ({}): {}",
                        r.id, r.description, r.detail
                    )
                }),
            }
        }
    })
}

fn execute(cli: &Cli) -> Result<(Outcome, RunConfig), CliError> {
    let c = cli.merged_config()?;
    let eps = c.oracle.epsilon;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(CliError::Usage(format!(
            "--epsilon must be positive, got {eps}"
        )));
    }
    Ok((dispatch(cli, &c)?, c))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let threads = cli.global.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "sprime: cannot start thread pool: {e}");
            return exit::USAGE;
        }
    };
    let result = pool.install(|| execute(&cli)).and_then(|(o, c)| {
        if let Some(r) = &o.report {
            emit(&r.render(&c), &c, stdout)?;
        }
        Ok(o)
    });
    match result {
        Ok(o) if o.passed => exit::OK,
        Ok(o) => {
            if let Some(f) = o.failure {
                let _ = writeln!(stderr, "sprime: {f}");
            }
            exit::VERIFICATION_FAILED
        }
        Err(e) => {
            let _ = writeln!(stderr, "sprime: {e}");
            e.exit_code()
        }
    }
}
