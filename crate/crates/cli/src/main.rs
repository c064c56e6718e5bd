use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fibregate_core::dynamics::{select_gate_times, Evolver};
use fibregate_core::gates::ControlledPhase;
use fibregate_core::scenario::{physical_units_footer, sweep_table, SWEEP_AXES};
use fibregate_core::{
    preset, run_scenario, spectra, sweep, Error, ResultTable, ScenarioConfig, PRESETS,
};

#[derive(Parser)]
#[command(
    name = "fibregate",
    version,
    about = "Gate emulation with two atoms in fibre-coupled cavities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a config file and write one CSV row per time step.
    Run {
        /// Preset name or path to a `key = value` config file.
        source: String,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        output: Output,
    },
    /// Repeat a run over values of one parameter.
    Sweep {
        source: String,
        /// Parameter to vary (g1, g2, nu, Delta, phi, kappa, gamma, beta, all_couplings_scale).
        #[arg(long)]
        axis: String,
        /// Comma-separated values, e.g. `0.95,1,1.05`. May be empty.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        output: Output,
    },
    /// List the leakage minima (decoupling times) up to t_max.
    Decouple {
        source: String,
        /// Minima closer than this (in 1/g) are merged, keeping the deepest.
        #[arg(long, default_value_t = 1.0)]
        min_separation: f64,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        output: Output,
    },
    /// Print the Hamiltonian eigenvalues in each excitation sector.
    Spectrum {
        source: String,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        output: Output,
    },
    /// Show the built-in presets.
    ListPresets,
}

/// Flags that override config keys. Values go through the config parser,
/// so angles accept forms such as `0.5pi`.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long, allow_hyphen_values = true)]
    g1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long = "Delta", allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long = "t-max", allow_hyphen_values = true)]
    t_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated observables.
    #[arg(long)]
    outputs: Option<String>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ScenarioConfig) -> Result<(), Error> {
        let pairs = [
            ("g1", &self.g1),
            ("g2", &self.g2),
            ("nu", &self.nu),
            ("Delta", &self.delta),
            ("phi", &self.phi),
            ("kappa", &self.kappa),
            ("gamma", &self.gamma),
            ("beta", &self.beta),
            ("t_max", &self.t_max),
            ("dt", &self.dt),
            ("target", &self.target),
            ("seed", &self.seed),
            ("outputs", &self.outputs),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(())
    }
}

#[derive(Args)]
struct Output {
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reference coupling in Hz; adds a footer converting times to seconds.
    #[arg(long = "g-hz")]
    g_hz: Option<f64>,
}

fn parse_values(list: &str) -> Result<Vec<f64>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<f64>().map_err(|_| Error::Config {
                field: "values".into(),
                detail: format!("cannot read `{v}` as a number"),
            })
        })
        .collect()
}

fn load(source: &str, overrides: &Overrides) -> Result<ScenarioConfig, Error> {
    let path = Path::new(source);
    let mut cfg = if path.is_file() {
        ScenarioConfig::from_file(path)?
    } else if PRESETS.iter().any(|p| p.name == source) {
        preset(source)?
    } else {
        return Err(Error::Config {
            field: "source".into(),
            detail: format!("`{source}` is neither a preset nor a readable config file"),
        });
    };
    overrides.apply(&mut cfg)?;
    cfg.validate()?;
    Ok(cfg)
}

fn write_table(mut table: ResultTable, cfg: &ScenarioConfig, output: &Output) -> Result<(), Error> {
    if let Some(hz) = output.g_hz {
        table.footer.push(physical_units_footer(cfg, hz)?);
    }
    match &output.out {
        Some(path) => fibregate_core::emit_csv(&table, path),
        None => {
            std::io::stdout()
                .lock()
                .write_all(table.to_csv().as_bytes())?;
            Ok(())
        }
    }
}

fn decouple_table(cfg: &ScenarioConfig, min_separation: f64) -> Result<ResultTable, Error> {
    let ev = Evolver::new(&cfg.params);
    let minima = ev.decoupling_times(cfg.t_max, cfg.dt)?;
    let mut table = ResultTable::new(vec![
        ("t".into(), "1/g"),
        ("leakage".into(), "probability"),
        ("theta".into(), "rad"),
        ("theta_ent".into(), "rad"),
    ]);
    for m in select_gate_times(&minima, min_separation) {
        let (theta, ent) = ControlledPhase::from_operator(&ev.vacuum_kraus(m.time))
            .map_or((f64::NAN, f64::NAN), |p| (p.theta, p.entangling_angle()));
        table.rows.push(vec![m.time, m.leakage, theta, ent]);
    }
    Ok(table)
}

fn spectrum_table(cfg: &ScenarioConfig) -> ResultTable {
    let mut table = ResultTable::new(vec![
        ("sector".into(), "excitations"),
        ("index".into(), "1"),
        ("energy".into(), "g"),
    ]);
    for (n, values) in spectra(&cfg.params).into_iter().enumerate() {
        for (k, e) in values.into_iter().enumerate() {
            table.rows.push(vec![n as f64, k as f64, e]);
        }
    }
    table
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            source,
            overrides,
            output,
        } => {
            let cfg = load(&source, &overrides)?;
            write_table(run_scenario(&cfg)?, &cfg, &output)
        }
        Command::Sweep {
            source,
            axis,
            values,
            overrides,
            output,
        } => {
            let cfg = load(&source, &overrides)?;
            if !SWEEP_AXES.contains(&axis.as_str()) {
                return Err(Error::Config {
                    field: axis,
                    detail: format!(
                        "unknown sweep axis; expected one of {}",
                        SWEEP_AXES.join(", ")
                    ),
                });
            }
            let values = parse_values(&values)?;
            let results = sweep(&cfg, &axis, &values)?;
            write_table(sweep_table(&axis, &results, &cfg), &cfg, &output)
        }
        Command::Decouple {
            source,
            min_separation,
            overrides,
            output,
        } => {
            let cfg = load(&source, &overrides)?;
            write_table(decouple_table(&cfg, min_separation)?, &cfg, &output)
        }
        Command::Spectrum {
            source,
            overrides,
            output,
        } => {
            let cfg = load(&source, &overrides)?;
            write_table(spectrum_table(&cfg), &cfg, &output)
        }
        Command::ListPresets => {
            let mut out = std::io::stdout().lock();
            for p in PRESETS {
                writeln!(out, "{:<30} {}", p.name, p.description)?;
            }
            Ok(())
        }
    }
}

fn error_line(err: &Error) -> String {
    let mut obj = serde_json::json!({
        "error": err.kind(),
        "message": err.to_string(),
    });
    match err {
        Error::Config { field, .. } => obj["field"] = field.clone().into(),
        Error::InvalidParams { field, .. } => obj["field"] = (*field).into(),
        Error::IntegrationFailure { time, .. } => obj["time"] = (*time).into(),
        _ => {}
    }
    obj.to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::from(2)
        }
    }
}
