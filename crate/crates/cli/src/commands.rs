use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use epistab::compound::{add_compound, mult_compound};
use epistab::covid::{self, CovidParams};
use epistab::lozinskii::MeasureKind;
use epistab::matrix::format_number;
use epistab::paper_check::paper_check;
use epistab::seir::{self, SeirParams};
use epistab::sim::{invariance_audit, simulate_covid, simulate_seir, Trajectory};
use epistab::stability::{cardano, cubic_stability};
use epistab::Matrix;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String, io::Error),
    Lib(epistab::Error),
}

impl CliError {
    /// 1 for usage and input problems, 2 for numeric failures, 3 for infeasible requests.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 1,
            CliError::Lib(e) if e.is_numeric() => 2,
            CliError::Lib(epistab::Error::Infeasible(_) | epistab::Error::Precondition(_)) => 3,
            CliError::Lib(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{}", m),
            CliError::Io(path, e) => write!(f, "{}: {}", path, e),
            CliError::Lib(e) => write!(f, "{}", e),
        }
    }
}

impl From<epistab::Error> for CliError {
    fn from(e: epistab::Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "epistab",
    version,
    about = "Stability analysis of compartmental epidemic models"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the five-compartment model and audit the trajectory.
    Simulate {
        #[command(flatten)]
        params: CovidSource,
        #[command(flatten)]
        run: RunOptions,
        /// Initial state E,I,C,H,D.
        #[arg(long, default_value = "40,1,0,0,0")]
        x0: String,
    },
    /// Audit a trajectory CSV written by `simulate`.
    Audit {
        #[command(flatten)]
        params: CovidSource,
        /// Trajectory CSV (`-` for standard input).
        file: PathBuf,
    },
    /// Disease-free and endemic equilibria with feasibility and residuals.
    Equilibria {
        #[command(flatten)]
        params: CovidSource,
    },
    /// Basic reproduction number, or a CSV sweep over one parameter.
    R0 {
        #[command(flatten)]
        params: CovidSource,
        /// Sweep as name=lo:hi:step, e.g. mu=0.005:0.74:0.015.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Full stability report at both equilibria.
    Stability {
        #[command(flatten)]
        params: CovidSource,
        /// Keep only the sufficient test with this measure.
        #[arg(long, value_enum)]
        measure: Option<Measure>,
    },
    /// The three-compartment example.
    Seir {
        #[command(subcommand)]
        command: SeirCommand,
    },
    /// Multiplicative or additive compound of a matrix file.
    Compound {
        /// Matrix file: comma-separated rows, no header (`-` for standard input).
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Additive)]
        mode: Mode,
    },
    /// Cardano roots and the Routh-Hurwitz verdict for a x^3 + b x^2 + c x + d.
    Cubic {
        #[arg(num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, required = true)]
        coefficients: Vec<f64>,
    },
    /// Compare every printed closed form against its numeric oracle.
    PaperCheck {
        #[command(flatten)]
        params: CovidSource,
        /// SEIR parameter file (JSON); defaults to the figure values at mu = 0.1.
        #[arg(long)]
        seir_config: Option<PathBuf>,
        /// List only the flagged claims.
        #[arg(long)]
        flagged: bool,
    },
}

#[derive(Debug, Subcommand)]
enum SeirCommand {
    Simulate {
        #[command(flatten)]
        params: SeirSource,
        #[command(flatten)]
        run: RunOptions,
        /// Initial state S,I1,I2.
        #[arg(long, default_value = "6,1,0")]
        x0: String,
    },
    Equilibria {
        #[command(flatten)]
        params: SeirSource,
    },
    R0 {
        #[command(flatten)]
        params: SeirSource,
        #[arg(long)]
        sweep: Option<String>,
    },
    Stability {
        #[command(flatten)]
        params: SeirSource,
    },
}

/// Parameters of the five-compartment model.
#[derive(Debug, Args)]
struct CovidSource {
    /// JSON file with all twelve rates, beta10 included.
    #[arg(long)]
    config: Option<PathBuf>,
    /// beta10 for the tabulated rates, which do not list it.
    #[arg(long, default_value_t = 0.1, conflicts_with = "config")]
    beta10: f64,
    /// Override one rate, name=value (repeatable).
    #[arg(long = "set", value_name = "NAME=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Args)]
struct SeirSource {
    /// JSON file with Lambda, beta1, beta2, mu, gamma, d.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "set", value_name = "NAME=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Args)]
struct RunOptions {
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 100.0)]
    t_end: f64,
    /// Write the trajectory CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Measure {
    One,
    Two,
    Inf,
}

impl From<Measure> for MeasureKind {
    fn from(m: Measure) -> Self {
        match m {
            Measure::One => MeasureKind::One,
            Measure::Two => MeasureKind::Two,
            Measure::Inf => MeasureKind::Inf,
        }
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    let shown = path.display().to_string();
    if shown == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(shown, e))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Io(shown, e))
}

fn assignment(text: &str) -> CliResult<(String, f64)> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected NAME=VALUE, got {:?}", text)))?;
    let v = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{:?} is not a number", value)))?;
    Ok((name.trim().to_string(), v))
}

impl CovidSource {
    fn load(&self) -> CliResult<CovidParams> {
        let mut p = match &self.config {
            Some(path) => CovidParams::from_json(&read_input(path)?)?,
            None => CovidParams::table(self.beta10),
        };
        for o in &self.overrides {
            let (name, v) = assignment(o)?;
            p = p.with(&name, v)?;
        }
        p.validate()?;
        Ok(p)
    }
}

impl SeirSource {
    fn load(&self) -> CliResult<SeirParams> {
        let mut p = match &self.config {
            Some(path) => SeirParams::from_json(&read_input(path)?)?,
            None => SeirParams::figure(0.1),
        };
        for o in &self.overrides {
            let (name, v) = assignment(o)?;
            p = p.with(&name, v)?;
        }
        p.validate()?;
        Ok(p)
    }
}

fn parse_state<const N: usize>(text: &str) -> CliResult<[f64; N]> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse initial state {:?}", text)))?;
    vals.try_into()
        .map_err(|v: Vec<f64>| CliError::Usage(format!("initial state needs {} values, got {}", N, v.len())))
}

struct Sweep {
    name: String,
    values: Vec<f64>,
}

fn parse_sweep(text: &str) -> CliResult<Sweep> {
    let bad = || CliError::Usage(format!("sweep must look like name=lo:hi:step, got {:?}", text));
    let (name, range) = text.split_once('=').ok_or_else(bad)?;
    let parts: Vec<f64> = range
        .split(':')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [lo, hi, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Usage(format!(
            "sweep needs lo <= hi and step > 0, got {}:{}:{}",
            lo, hi, step
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok(Sweep {
        name: name.trim().to_string(),
        values: (0..count).map(|k| lo + k as f64 * step).collect(),
    })
}

/// Evaluate a sweep in parallel; rows come back in grid order.
fn sweep_csv(sweep: &Sweep, eval: impl Fn(f64) -> epistab::Result<f64> + Sync) -> CliResult<String> {
    let r0: Vec<f64> = sweep
        .values
        .par_iter()
        .map(|&v| eval(v))
        .collect::<epistab::Result<_>>()?;
    let mut out = format!("{},R0\n", sweep.name);
    for (v, r) in sweep.values.iter().zip(r0) {
        out.push_str(&format!("{},{}\n", format_number(*v), format_number(r)));
    }
    Ok(out)
}

/// A closed pipe (e.g. `| head`) is a normal way for a reader to stop.
fn to_stdout(text: &str) -> CliResult<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io("stdout".into(), e)),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report values serialize");
    text.push('\n');
    to_stdout(&text)
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => to_stdout(text),
    }
}

fn emit_trajectory<A: Serialize>(tr: &Trajectory, run: &RunOptions, audit: Option<A>) -> CliResult<()> {
    write_output(run.out.as_deref(), &tr.to_csv())?;
    if let Some(a) = audit {
        let text = serde_json::to_string_pretty(&a).expect("audit serializes");
        // keep standard output pure CSV when it carries the trajectory
        if run.out.is_some() {
            to_stdout(&(text + "\n"))?;
        } else {
            eprintln!("{}", text);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct EquilibriaOut<E: Serialize> {
    dfe: E,
    endemic: E,
}

#[derive(Serialize)]
struct CovidR0 {
    r0_reduced: f64,
    r0_full: f64,
    ngm: covid::NgmParts,
}

#[derive(Serialize)]
struct SeirR0 {
    r0: f64,
    r0_ngm: f64,
}

#[derive(Serialize)]
struct CubicOut {
    coefficients: [f64; 4],
    roots: [Root; 3],
    discriminant: f64,
    class: epistab::stability::CubicClass,
    verdict: epistab::Verdict,
}

#[derive(Serialize)]
struct Root {
    re: f64,
    im: f64,
}

fn covid_equilibria(p: &CovidParams) -> CliResult<()> {
    if p.beta1 < p.beta10 {
        return Err(CliError::Lib(epistab::Error::Infeasible(format!(
            "beta1 = {} < beta10 = {}: the disease-free equilibrium is the only equilibrium, so there is no endemic point",
            p.beta1, p.beta10
        ))));
    }
    print_json(&EquilibriaOut {
        dfe: covid::dfe(p)?,
        endemic: covid::endemic(p)?,
    })
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate { params, run, x0 } => {
            let p = params.load()?;
            let tr = simulate_covid(&p, parse_state(&x0)?, run.dt, run.t_end)?;
            let audit = invariance_audit(&tr, &p)?;
            emit_trajectory(&tr, &run, Some(audit))
        }
        Command::Audit { params, file } => {
            let p = params.load()?;
            print_json(&invariance_audit(&Trajectory::from_csv(&read_input(&file)?)?, &p)?)
        }
        Command::Equilibria { params } => covid_equilibria(&params.load()?),
        Command::R0 { params, sweep } => {
            let p = params.load()?;
            match sweep {
                Some(s) => {
                    let s = parse_sweep(&s)?;
                    p.get(&s.name)?;
                    let csv = sweep_csv(&s, |v| covid::r0_reduced(&p.with(&s.name, v)?))?;
                    write_output(None, &csv)
                }
                None => {
                    let d = covid::dfe(&p)?;
                    let ngm = covid::ngm_full(&p, &d.state.to_array())?;
                    print_json(&CovidR0 {
                        r0_reduced: covid::r0_reduced(&p)?,
                        r0_full: ngm.r0,
                        ngm,
                    })
                }
            }
        }
        Command::Stability { params, measure } => {
            let mut rep = covid::stability_report(&params.load()?)?;
            if let Some(m) = measure {
                let kind = MeasureKind::from(m);
                let keep = |v: &epistab::Verdict| v.evidence.measure_kind == Some(kind);
                rep.dfe.sufficient.retain(keep);
                if let Some(e) = rep.endemic.as_mut() {
                    e.sufficient.retain(keep);
                }
            }
            print_json(&rep)
        }
        Command::Seir { command } => run_seir(command),
        Command::Compound { file, k, mode } => {
            let a = Matrix::parse_text(&read_input(&file)?)?;
            let c = match mode {
                Mode::Additive => add_compound(&a, k)?,
                Mode::Multiplicative => mult_compound(&a, k)?,
            };
            write_output(None, &c.to_text())
        }
        Command::Cubic { coefficients } => {
            let [a, b, c, d] = coefficients[..] else {
                return Err(CliError::Usage("cubic needs exactly four coefficients".into()));
            };
            let roots = cardano(a, b, c, d)?;
            let verdict = cubic_stability(b / a, c / a, d / a);
            print_json(&CubicOut {
                coefficients: [a, b, c, d],
                roots: roots.roots.map(|z| Root { re: z.re, im: z.im }),
                discriminant: roots.discriminant,
                class: roots.klass,
                verdict,
            })
        }
        Command::PaperCheck {
            params,
            seir_config,
            flagged,
        } => {
            let p = params.load()?;
            let s = match seir_config {
                Some(path) => SeirParams::from_json(&read_input(&path)?)?,
                None => SeirParams::figure(0.1),
            };
            let mut rep = paper_check(&p, &s)?;
            if flagged {
                rep.entries.retain(|e| e.verdict == epistab::ClaimVerdict::Flagged);
            }
            print_json(&rep)
        }
    }
}

fn run_seir(command: SeirCommand) -> CliResult<()> {
    match command {
        SeirCommand::Simulate { params, run, x0 } => {
            let p = params.load()?;
            let tr = simulate_seir(&p, parse_state(&x0)?, run.dt, run.t_end)?;
            emit_trajectory::<()>(&tr, &run, None)
        }
        SeirCommand::Equilibria { params } => {
            let p = params.load()?;
            print_json(&EquilibriaOut {
                dfe: seir::dfe3(&p)?,
                endemic: seir::endemic3(&p)?,
            })
        }
        SeirCommand::R0 { params, sweep } => {
            let p = params.load()?;
            match sweep {
                Some(s) => {
                    let s = parse_sweep(&s)?;
                    p.get(&s.name)?;
                    let csv = sweep_csv(&s, |v| seir::r0_seir(&p.with(&s.name, v)?))?;
                    write_output(None, &csv)
                }
                None => print_json(&SeirR0 {
                    r0: seir::r0_seir(&p)?,
                    r0_ngm: seir::r0_seir_numeric(&p)?,
                }),
            }
        }
        SeirCommand::Stability { params } => print_json(&seir::seir_stability(&params.load()?)?),
    }
}
