use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use birelab::fresnel::tamm_rubilar;
use birelab::medium::MediumTensor;
use birelab::metaclass::{construct_metaclass, MetaclassParams};
use birelab::report::{analyze, analyze_params};
use birelab::segre::{Metaclass, SegreOptions};
use birelab::surface::{Projection, SurfaceGrid};
use birelab::verify::{default_count, run_suite};
use birelab::Error;

const EXIT_INPUT: u8 = 1;
const EXIT_ILL_CONDITIONED: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "birelab", version, about = "Fresnel surfaces, metaclasses and double light cones of linear electromagnetic media")]
#[command(after_help = "Set BIRELAB_TOL to override the eigenvalue clustering tolerance of the Segre classification.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report of a medium as JSON.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Medium JSON of a metaclass normal form.
    Construct {
        #[arg(long)]
        class: Option<String>,
        /// Parameter JSON (inline or a file path): {"class":"I","alpha":[..],"beta":[..]}
        #[arg(long)]
        params: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV lattice of Fresnel-quartic values for rendering.
    Surface {
        #[command(flatten)]
        source: Source,
        /// `rotational` or `xiK=0` with K in 0..3.
        #[arg(long, default_value = "rotational")]
        projection: String,
        #[arg(long, default_value_t = 96)]
        resolution: usize,
        /// Lattice bounds `lo,hi` shared by all three axes.
        #[arg(long, default_value = "-3,3", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded property suite and print per-property counts.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    /// Medium JSON file (`-` for stdin).
    #[arg(long, conflicts_with_all = ["class", "params"])]
    input: Option<PathBuf>,
    #[arg(long)]
    class: Option<String>,
    /// Parameter JSON (inline or a file path).
    #[arg(long)]
    params: Option<String>,
}

enum Failure {
    BrokenPipe,
    Input(String),
    Refused(String),
    VerifyFailed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IllConditioned(_) => Failure::Refused(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::BrokenPipe;
        }
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) | Err(Failure::BrokenPipe) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("error: classification refused: {msg}");
            ExitCode::from(EXIT_ILL_CONDITIONED)
        }
        Err(Failure::VerifyFailed(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY_FAILED)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { source, out } => {
            let opts = segre_options()?;
            let report = match load(&source)? {
                Loaded::Medium(k) => analyze(&k, &opts)?,
                Loaded::Params(p) => analyze_params(&p, &opts)?,
            };
            emit(out.as_deref(), &report.to_json_string())
        }
        Command::Construct { class, params, out } => {
            let p = parse_params(class.as_deref(), &params)?;
            let kappa = construct_metaclass(&p)?;
            emit(out.as_deref(), &serde_json::to_string_pretty(&kappa.to_json()).expect("medium serializes"))
        }
        Command::Surface { source, projection, resolution, bounds, out } => {
            let projection: Projection = projection.parse()?;
            let bounds = parse_bounds(&bounds)?;
            let kappa = match load(&source)? {
                Loaded::Medium(k) => *k,
                Loaded::Params(p) => construct_metaclass(&p)?,
            };
            let grid = SurfaceGrid::new(&tamm_rubilar(&kappa), projection, bounds, resolution)?;
            match out {
                Some(path) => grid.write_csv(io::BufWriter::new(fs::File::create(path)?))?,
                None => grid.write_csv(io::BufWriter::new(io::stdout().lock()))?,
            }
            Ok(())
        }
        Command::Verify { suite, seed, count, out } => {
            let count = match count {
                Some(c) => c,
                None => default_count(&suite)?,
            };
            let report = run_suite(&suite, seed, count)?;
            emit(out.as_deref(), &report.to_json_string())?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::VerifyFailed(format!("{suite}: {} failed checks", report.failed())))
            }
        }
    }
}

fn segre_options() -> Result<SegreOptions, Failure> {
    let mut opts = SegreOptions::default();
    if let Ok(raw) = std::env::var("BIRELAB_TOL") {
        match raw.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => opts.cluster_tol = t,
            _ => return Err(Failure::Input(format!("BIRELAB_TOL must be a positive number, got {raw:?}"))),
        }
    }
    Ok(opts)
}

enum Loaded {
    Medium(Box<MediumTensor>),
    Params(MetaclassParams),
}

fn load(source: &Source) -> Result<Loaded, Failure> {
    match (&source.input, &source.params) {
        (Some(path), _) => Ok(Loaded::Medium(Box::new(MediumTensor::from_json_str(&read_input(path)?)?))),
        (None, Some(params)) => Ok(Loaded::Params(parse_params(source.class.as_deref(), params)?)),
        (None, None) => Err(Failure::Input("expected --input or --params".into())),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Inline JSON or a path to a JSON file; `--class` fills in or must match
/// the `class` field.
fn parse_params(class: Option<&str>, raw: &str) -> Result<MetaclassParams, Failure> {
    let text = if raw.trim_start().starts_with('{') { raw.to_string() } else { read_input(Path::new(raw))? };
    let mut value: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("parameter JSON: {e}")))?;
    let obj = value.as_object_mut().ok_or_else(|| Failure::Input("parameter JSON must be an object".into()))?;
    if let Some(class) = class {
        let wanted: Metaclass = class.parse()?;
        match obj.get("class").and_then(Value::as_str) {
            Some(given) if given.parse::<Metaclass>()? != wanted => {
                return Err(Failure::Input(format!("--class {class} disagrees with class {given:?} in the parameters")));
            }
            _ => {
                obj.insert("class".into(), Value::String(wanted.as_str().into()));
            }
        }
    }
    Ok(MetaclassParams::from_json(&value)?)
}

fn parse_bounds(raw: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [lo, hi] => match (lo.parse::<f64>(), hi.parse::<f64>()) {
            (Ok(lo), Ok(hi)) => Ok((lo, hi)),
            _ => Err(Failure::Input(format!("bounds must be two numbers, got {raw:?}"))),
        },
        _ => Err(Failure::Input(format!("bounds must look like lo,hi, got {raw:?}"))),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}
