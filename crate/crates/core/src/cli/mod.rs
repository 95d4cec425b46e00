//! Command-line front end. Exit codes: 0 pass, 1 verification failure or
//! numerical error, 2 usage or configuration error.

pub mod case;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
pub use case::{verify, Case, CaseSummary, Check, PotentialTable, StateSummary, VerifyReport};
pub use config::{figure_panels, FigureId, Overrides, RunConfig};
use output::{to_json, write_csv, write_csv_file};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "DARBOUX_LAB_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "darboux-lab", version, about = "Complex Darboux partners of solvable potentials with finite-difference verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-difference spectrum of V_lambda matched to the prediction (JSON).
    Spectrum,
    /// V_lambda on the sampling grid (CSV: x, re_v, im_v, v0).
    Potential,
    /// Eigenstates of V_lambda (one CSV per state plus a JSON summary).
    States,
    /// Full invariant suite (JSON).
    Verify,
    /// Regenerate the data behind one figure.
    Figure {
        /// fig3, fig4, fig7, fig8, fig9, fig10, fig11 or fig12
        id: String,
    },
}

#[derive(Debug, Args, Default)]
pub struct Flags {
    /// morse, pt or oscillator
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Morse range parameter
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Morse depth offset in (0, 1)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Morse highest level N
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Pöschl-Teller scale
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub u0: Option<f64>,
    /// Pöschl-Teller strength
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Factorization energy
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Imaginary coupling; 0 gives the real one-parameter family
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Ermakov invariant J (> 0)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub bigj: Option<f64>,
    /// Ermakov constant I0
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub i0: Option<f64>,
    /// Left end of the sampling window (with --xmax)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    /// Right end of the sampling window (with --xmin)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    /// Sampling and finite-difference grid size
    #[arg(long, global = true)]
    pub npoints: Option<usize>,
    /// Number of transformed bound states
    #[arg(long, global = true)]
    pub nstates: Option<usize>,
    /// auto, analytic or numeric
    #[arg(long, global = true)]
    pub backend: Option<String>,
    /// Output file (spectrum, potential, verify) or directory (states, figure)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key=value file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Flags {
    fn overrides(&self) -> Result<Overrides> {
        let mut o = Overrides {
            gamma: self.gamma,
            delta: self.delta,
            nmax: self.nmax,
            u0: self.u0,
            r: self.r,
            epsilon: self.epsilon,
            lambda: self.lambda,
            bigj: self.bigj,
            i0: self.i0,
            xmin: self.xmin,
            xmax: self.xmax,
            npoints: self.npoints,
            nstates: self.nstates,
            out: self.out.clone(),
            ..Overrides::default()
        };
        if let Some(f) = &self.family {
            o.family = Some(f.parse()?);
        }
        if let Some(b) = &self.backend {
            o.backend = Some(b.parse()?);
        }
        Ok(o)
    }
}

/// Outcome of a command before it is turned into an exit code.
enum Outcome {
    Pass,
    Fail,
}

/// Error raised while setting up, as opposed to while computing.
struct ConfigError(Error);

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut buf));
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_FAIL;
    }
    match result {
        Ok(Outcome::Pass) => EXIT_PASS,
        Ok(Outcome::Fail) => EXIT_FAIL,
        Err(Ok(ConfigError(e))) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
        Err(Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Numerical(format!("cannot start worker threads: {e}")))
}

type Dispatch<T> = std::result::Result<T, std::result::Result<ConfigError, Error>>;

fn cfg<T>(r: Result<T>) -> Dispatch<T> {
    r.map_err(|e| Ok(ConfigError(e)))
}

fn num<T>(r: Result<T>) -> Dispatch<T> {
    r.map_err(Err)
}

/// Defaults < file < flags.
fn layered(flags: &Flags, base: Overrides) -> Result<Overrides> {
    let mut o = base;
    if let Some(path) = &flags.config {
        o = o.merge(&Overrides::from_file(path)?);
    }
    Ok(o.merge(&flags.overrides()?))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Dispatch<Outcome> {
    if let Command::Figure { id } = &cli.command {
        let id: FigureId = cfg(id.parse())?;
        return figure(id, &cli.flags, out);
    }
    let settings = cfg(layered(&cli.flags, Overrides::default()))?;
    let config = cfg(RunConfig::resolve(&settings))?;
    let case = cfg(Case::build(config))?;
    match cli.command {
        Command::Spectrum => spectrum_cmd(&case, out),
        Command::Potential => potential_cmd(&case, out),
        Command::States => states_cmd(&case, out),
        Command::Verify => verify_cmd(&case, out),
        Command::Figure { .. } => unreachable!("handled above"),
    }
}

fn emit(text: &str, file: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    if let Some(path) = file {
        std::fs::write(path, text)?;
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    case: CaseSummary,
    fd_points: usize,
    report: &'a crate::oracle::SpectrumReport,
}

fn spectrum_cmd(case: &Case, out: &mut dyn Write) -> Dispatch<Outcome> {
    let singular = num(case.singularities(&num(case.grid(case.config.npoints.max(case::VERIFY_MIN_POINTS)))?))?;
    if !singular.is_empty() {
        return num(Err(Error::Singular {
            x: singular[0],
            what: format!("the lambda = 0 potential has {} singularities; no spectrum", singular.len()),
        }));
    }
    let report = num(case.spectrum(case.config.npoints))?;
    let text = num(to_json(&SpectrumOutput { case: case.summary(), fd_points: case.config.npoints, report: &report }))?;
    num(emit(&text, case.config.out.as_deref(), out))?;
    Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
}

fn write_potential<W: Write>(t: &PotentialTable, w: W) -> Result<()> {
    write_csv(w, &["x", "re_v", "im_v", "v0"], &[&t.x, &t.re_v, &t.im_v, &t.v0])
}

fn potential_cmd(case: &Case, out: &mut dyn Write) -> Dispatch<Outcome> {
    let grid = num(case.grid(case.config.npoints))?;
    let table = num(case.potential(&grid))?;
    match &case.config.out {
        Some(path) => num(write_potential(&table, std::io::BufWriter::new(num(std::fs::File::create(path).map_err(Error::from))?)))?,
        None => num(write_potential(&table, &mut *out))?,
    }
    Ok(Outcome::Pass)
}

fn write_state(dir: &Path, name: &str, s: &crate::darboux::EigenState) -> Result<()> {
    let x = s.field.grid.points();
    write_csv_file(&dir.join(name), &["x", "re_psi", "im_psi"], &[x, &s.field.re(), &s.field.im()])
}

#[derive(Serialize)]
struct StatesOutput {
    case: CaseSummary,
    grid_points: usize,
    files: Vec<String>,
    states: Vec<StateSummary>,
}

fn out_dir(path: Option<&Path>) -> Result<PathBuf> {
    let dir = path.map_or_else(|| PathBuf::from("."), Path::to_path_buf);
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn states_cmd(case: &Case, out: &mut dyn Write) -> Dispatch<Outcome> {
    let dir = num(out_dir(case.config.out.as_deref()))?;
    let grid = num(case.grid(case.config.npoints))?;
    let states = num(case.states(&grid))?;
    let mut files = Vec::new();
    for s in &states {
        let name = format!("{}.csv", s.label());
        num(write_state(&dir, &name, s))?;
        files.push(name);
    }
    let summary = num(case::summarize_states(case, &grid, &states))?;
    let text = num(to_json(&StatesOutput { case: case.summary(), grid_points: grid.len(), files, states: summary }))?;
    num(std::fs::write(dir.join("states.json"), &text).map_err(Error::from))?;
    num(out.write_all(text.as_bytes()).map_err(Error::from))?;
    Ok(Outcome::Pass)
}

fn verify_cmd(case: &Case, out: &mut dyn Write) -> Dispatch<Outcome> {
    let report = num(verify(case))?;
    let text = num(to_json(&report))?;
    num(emit(&text, case.config.out.as_deref(), out))?;
    Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct FigurePanel {
    tag: String,
    case: CaseSummary,
    files: Vec<String>,
    singularities: Vec<f64>,
    states: Vec<StateSummary>,
}

#[derive(Serialize)]
struct FigureOutput {
    figure: FigureId,
    grid_points: usize,
    panels: Vec<FigurePanel>,
}

fn figure(id: FigureId, flags: &Flags, out: &mut dyn Write) -> Dispatch<Outcome> {
    let mut cases = Vec::new();
    for p in figure_panels(id) {
        let mut settings = cfg(layered(flags, p.settings))?;
        if id.shows_states() && settings.nstates.is_none() {
            settings.nstates = Some(2);
        }
        let config = cfg(RunConfig::resolve(&settings))?;
        cases.push((p.tag, cfg(Case::build(config))?));
    }
    let dir = num(out_dir(flags.out.as_deref()))?;
    let mut panels = Vec::new();
    let mut npoints = 0;
    for (tag, case) in &cases {
        npoints = case.config.npoints;
        let grid = num(case.grid(npoints))?;
        let mut files = Vec::new();
        let mut states = Vec::new();
        let singularities;
        if id.shows_states() {
            let sampled = num(case.states(&grid))?;
            for s in &sampled {
                let name = format!("{}_{tag}_{}.csv", id.name(), s.label());
                num(write_state(&dir, &name, s))?;
                files.push(name);
            }
            states = num(case::summarize_states(case, &grid, &sampled))?;
            singularities = Vec::new();
        } else {
            let table = num(case.potential(&grid))?;
            let name = format!("{}_{tag}.csv", id.name());
            num(write_csv_file(&dir.join(&name), &["x", "re_v", "im_v", "v0"], &[&table.x, &table.re_v, &table.im_v, &table.v0]))?;
            files.push(name);
            singularities = table.singularities;
        }
        panels.push(FigurePanel { tag: tag.clone(), case: case.summary(), files, singularities, states });
    }
    let text = num(to_json(&FigureOutput { figure: id, grid_points: npoints, panels }))?;
    num(std::fs::write(dir.join(format!("{}.json", id.name())), &text).map_err(Error::from))?;
    num(out.write_all(text.as_bytes()).map_err(Error::from))?;
    Ok(Outcome::Pass)
}
