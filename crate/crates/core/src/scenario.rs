//! Named runs, parameter sweeps and CSV output.
//!
//! A [`ScenarioConfig`] is built from flat `key = value` text (see
//! [`ScenarioConfig::parse`]) or from one of the [`PRESETS`], which are plain
//! key/value lists fed through the same parser. [`run_scenario`] evaluates the
//! requested observables on the grid `t = k·dt`, `k = 0..=⌊t_max/dt⌋`, using the
//! exact sector propagators when every decay rate is zero and Liouvillian
//! process tomography otherwise.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::dynamics::Evolver;
use crate::entanglement::{entanglement_of_formation, TwoQubitState};
use crate::error::{Error, Result};
use crate::gates::{
    average_fidelity, average_fidelity_monte_carlo, channel_from_kraus, extract_controlled_phase,
    fidelity_local_phase_optimized, swap_fidelity_phase_optimized, ChannelMatrix, ControlledPhase,
    GateKind, GateTarget,
};
use crate::linalg::{AtomicOp, C64};
use crate::model::SystemParams;
use crate::open_system::build_liouvillian;

/// Rows beyond this are refused rather than silently allocated.
pub const MAX_ROWS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetSpec {
    Swap,
    /// `None` compares each row against the controlled phase extracted at
    /// that time.
    Cphase(Option<f64>),
    None,
}

impl TargetSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "swap" => return Ok(Self::Swap),
            "none" => return Ok(Self::None),
            "cphase" => return Ok(Self::Cphase(None)),
            _ => {}
        }
        let inner = s
            .strip_prefix("cphase(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| {
                Error::config(
                    "target",
                    format!("expected swap, none, cphase or cphase(<angle>), got `{s}`"),
                )
            })?;
        Ok(Self::Cphase(Some(
            parse_angle(inner).map_err(|d| Error::config("target", d))?,
        )))
    }

    fn label(&self) -> Option<&'static str> {
        match self {
            Self::Swap => Some("swap"),
            Self::Cphase(_) => Some("cphase"),
            Self::None => None,
        }
    }
}

impl std::fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Swap => f.write_str("swap"),
            Self::None => f.write_str("none"),
            Self::Cphase(None) => f.write_str("cphase"),
            Self::Cphase(Some(t)) => write!(f, "cphase({:?}pi)", t / PI),
        }
    }
}

/// Angle in radians from `1.2`, `pi`, `-0.15pi` or `0.5*pi`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let bad = || format!("cannot read angle `{s}`");
    if let Some(head) = s.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let factor = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(factor * PI)
    } else {
        s.parse::<f64>().map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    PlusPlus,
    /// Computational basis state `|ab⟩` with index `2a + b`.
    Basis(usize),
}

impl InitialState {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "plus_plus" | "++" => Ok(Self::PlusPlus),
            "00" => Ok(Self::Basis(0)),
            "01" => Ok(Self::Basis(1)),
            "10" => Ok(Self::Basis(2)),
            "11" => Ok(Self::Basis(3)),
            other => Err(Error::config(
                "initial_state",
                format!("expected plus_plus, 00, 01, 10 or 11, got `{other}`"),
            )),
        }
    }

    pub fn ket(&self) -> nalgebra::Vector4<C64> {
        match *self {
            Self::PlusPlus => nalgebra::Vector4::repeat(C64::new(0.5, 0.0)),
            Self::Basis(k) => {
                let mut v = nalgebra::Vector4::zeros();
                v[k] = C64::new(1.0, 0.0);
                v
            }
        }
    }

    pub fn density(&self) -> AtomicOp {
        let k = self.ket();
        k * k.adjoint()
    }
}

impl std::fmt::Display for InitialState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::PlusPlus => f.write_str("plus_plus"),
            Self::Basis(k) => write!(f, "{}{}", k >> 1, k & 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Leakage,
    FidelityRaw,
    FidelityPhaseOpt,
    /// Monte-Carlo Haar average against the same target as `fidelity_raw`.
    FidelityMc,
    Theta,
    Eof,
    Populations,
}

impl Observable {
    pub const ALL: [Observable; 7] = [
        Self::Leakage,
        Self::FidelityRaw,
        Self::FidelityPhaseOpt,
        Self::FidelityMc,
        Self::Theta,
        Self::Eof,
        Self::Populations,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Leakage => "leakage",
            Self::FidelityRaw => "fidelity_raw",
            Self::FidelityPhaseOpt => "fidelity_phase_opt",
            Self::FidelityMc => "fidelity_mc",
            Self::Theta => "theta",
            Self::Eof => "eof",
            Self::Populations => "populations",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::config("outputs", format!("unknown observable `{s}`")))
    }

    fn needs_target(&self) -> bool {
        matches!(
            self,
            Self::FidelityRaw | Self::FidelityPhaseOpt | Self::FidelityMc
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub params: SystemParams,
    pub t_max: f64,
    pub dt: f64,
    pub target: TargetSpec,
    pub initial_state: InitialState,
    pub outputs: Vec<Observable>,
    pub seed: u64,
    pub mc_samples: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            params: SystemParams::default(),
            t_max: 5.0,
            dt: 0.01,
            target: TargetSpec::Swap,
            initial_state: InitialState::PlusPlus,
            outputs: vec![
                Observable::Leakage,
                Observable::FidelityRaw,
                Observable::FidelityPhaseOpt,
            ],
            seed: 0,
            mc_samples: 1000,
        }
    }
}

/// Keys accepted by [`ScenarioConfig::set`], in documentation order.
pub const CONFIG_KEYS: [&str; 19] = [
    "name",
    "g1",
    "g1_phase",
    "g2",
    "g2_phase",
    "nu",
    "Delta",
    "phi",
    "kappa",
    "gamma",
    "beta",
    "t_max",
    "dt",
    "target",
    "initial_state",
    "outputs",
    "seed",
    "mc_samples",
    "rates",
];

fn parse_f64(field: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::config(field, format!("expected a number, got `{}`", v.trim())))?;
    if !x.is_finite() {
        return Err(Error::config(field, format!("must be finite, got {x}")));
    }
    Ok(x)
}

impl ScenarioConfig {
    /// Apply one `key = value` setting. Magnitude and phase of the couplings
    /// are set independently; `rates` sets κ, γ and β together.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let p = &mut self.params;
        match key {
            "name" => self.name = value.trim().to_string(),
            "g1" => p.g1 = C64::from_polar(parse_f64(key, value)?, p.g1.arg()),
            "g2" => p.g2 = C64::from_polar(parse_f64(key, value)?, p.g2.arg()),
            "g1_phase" => {
                let ph = parse_angle(value).map_err(|d| Error::config(key, d))?;
                p.g1 = C64::from_polar(p.g1.norm(), ph);
            }
            "g2_phase" => {
                let ph = parse_angle(value).map_err(|d| Error::config(key, d))?;
                p.g2 = C64::from_polar(p.g2.norm(), ph);
            }
            "nu" => p.nu = parse_f64(key, value)?,
            "Delta" | "delta_detuning" => p.detuning = parse_f64(key, value)?,
            "phi" => p.phi = parse_angle(value).map_err(|d| Error::config(key, d))?,
            "kappa" => p.kappa = parse_f64(key, value)?,
            "gamma" => p.gamma = parse_f64(key, value)?,
            "beta" => p.beta = parse_f64(key, value)?,
            "rates" => {
                let r = parse_f64(key, value)?;
                *p = p.with_losses(r, r, r);
            }
            "t_max" => self.t_max = parse_f64(key, value)?,
            "dt" => self.dt = parse_f64(key, value)?,
            "target" => self.target = TargetSpec::parse(value)?,
            "initial_state" => self.initial_state = InitialState::parse(value)?,
            "outputs" => {
                let mut outs = Vec::new();
                for item in value.split(',').filter(|s| !s.trim().is_empty()) {
                    let o = Observable::parse(item)?;
                    if !outs.contains(&o) {
                        outs.push(o);
                    }
                }
                if outs.is_empty() {
                    return Err(Error::config(key, "at least one observable is required"));
                }
                self.outputs = outs;
            }
            "seed" => {
                self.seed = value.trim().parse().map_err(|_| {
                    Error::config(
                        key,
                        format!("expected an unsigned integer, got `{}`", value.trim()),
                    )
                })?
            }
            "mc_samples" => {
                self.mc_samples = value.trim().parse().map_err(|_| {
                    Error::config(
                        key,
                        format!("expected an unsigned integer, got `{}`", value.trim()),
                    )
                })?
            }
            other => return Err(Error::config(other, "unknown key")),
        }
        Ok(())
    }

    /// Parse a config file on top of the defaults. Each key may appear once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Apply the settings in `text` on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                )
            })?;
            let key = key.trim();
            if seen.iter().any(|k| k == key) {
                return Err(Error::config(
                    key,
                    format!("duplicate key on line {}", lineno + 1),
                ));
            }
            self.set(key, value)?;
            seen.push(key.to_string());
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Render as config text that [`ScenarioConfig::parse`] reads back to an
    /// equal value.
    pub fn to_config_text(&self) -> String {
        let p = &self.params;
        let outputs: Vec<&str> = self.outputs.iter().map(|o| o.name()).collect();
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "g1 = {:?}", p.g1.norm());
        let _ = writeln!(s, "g1_phase = {:?}", p.g1.arg());
        let _ = writeln!(s, "g2 = {:?}", p.g2.norm());
        let _ = writeln!(s, "g2_phase = {:?}", p.g2.arg());
        let _ = writeln!(s, "nu = {:?}", p.nu);
        let _ = writeln!(s, "Delta = {:?}", p.detuning);
        let _ = writeln!(s, "phi = {:?}", p.phi);
        let _ = writeln!(s, "kappa = {:?}", p.kappa);
        let _ = writeln!(s, "gamma = {:?}", p.gamma);
        let _ = writeln!(s, "beta = {:?}", p.beta);
        let _ = writeln!(s, "t_max = {:?}", self.t_max);
        let _ = writeln!(s, "dt = {:?}", self.dt);
        let target = match self.target {
            TargetSpec::Cphase(Some(t)) => format!("cphase({t:?})"),
            other => other.to_string(),
        };
        let _ = writeln!(s, "target = {target}");
        let _ = writeln!(s, "initial_state = {}", self.initial_state);
        let _ = writeln!(s, "outputs = {}", outputs.join(","));
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "mc_samples = {}", self.mc_samples);
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| match e {
            Error::InvalidParams { field, detail } => Error::config(field, detail),
            other => other,
        })?;
        if !(self.t_max > 0.0) {
            return Err(Error::config(
                "t_max",
                format!("must be positive, got {}", self.t_max),
            ));
        }
        if !(self.dt > 0.0) {
            return Err(Error::config(
                "dt",
                format!("must be positive, got {}", self.dt),
            ));
        }
        if self.grid_len() > MAX_ROWS {
            return Err(Error::config(
                "dt",
                format!("grid has more than {MAX_ROWS} rows"),
            ));
        }
        if self.target == TargetSpec::None {
            if let Some(o) = self.outputs.iter().find(|o| o.needs_target()) {
                return Err(Error::config(
                    "outputs",
                    format!("`{}` needs a gate target", o.name()),
                ));
            }
        }
        if self.outputs.contains(&Observable::FidelityMc) && self.mc_samples < 100 {
            return Err(Error::config(
                "mc_samples",
                "at least 100 samples are required",
            ));
        }
        if self.outputs.is_empty() {
            return Err(Error::config(
                "outputs",
                "at least one observable is required",
            ));
        }
        Ok(())
    }

    /// Number of grid points, `⌊t_max/dt⌋ + 1`.
    pub fn grid_len(&self) -> usize {
        let n = (self.t_max / self.dt + 1e-9).floor();
        if n.is_finite() && n >= 0.0 {
            (n as usize).saturating_add(1)
        } else {
            usize::MAX
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.grid_len()).map(|k| k as f64 * self.dt).collect()
    }

    pub fn columns(&self) -> Vec<(String, &'static str)> {
        let gate = self.target.label().unwrap_or("none");
        let mut cols = vec![("t".to_string(), "1/g")];
        for o in &self.outputs {
            match o {
                Observable::Leakage => cols.push(("leakage".into(), "probability")),
                Observable::FidelityRaw => cols.push((format!("F_{gate}_raw"), "fidelity")),
                Observable::FidelityPhaseOpt => cols.push((format!("F_{gate}_opt"), "fidelity")),
                Observable::FidelityMc => {
                    cols.push((format!("F_{gate}_mc"), "fidelity"));
                    cols.push((format!("F_{gate}_mc_err"), "fidelity"));
                }
                Observable::Theta => {
                    cols.push(("theta".into(), "rad"));
                    cols.push(("theta_ent".into(), "rad"));
                }
                Observable::Eof => cols.push(("eof".into(), "ebit")),
                Observable::Populations => {
                    for name in ["p00", "p01", "p10", "p11"] {
                        cols.push((name.into(), "probability"));
                    }
                }
            }
        }
        cols
    }
}

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub settings: &'static [(&'static str, &'static str)],
}

impl Preset {
    pub fn config(&self) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::default();
        cfg.set("name", self.name)?;
        for (k, v) in self.settings {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

const SWAP_OUTPUTS: (&str, &str) = ("outputs", "leakage,fidelity_raw,fidelity_phase_opt");
const CPHASE_SETTINGS: [(&str, &str); 6] = [
    ("g1", "1.0"),
    ("g2", "1.5"),
    ("nu", "100"),
    ("Delta", "10"),
    ("target", "cphase(-0.15pi)"),
    ("outputs", "leakage,fidelity_raw,fidelity_phase_opt,theta"),
];

macro_rules! cphase_preset {
    ($($extra:expr),* $(,)?) => {
        &[
            CPHASE_SETTINGS[0], CPHASE_SETTINGS[1], CPHASE_SETTINGS[2],
            CPHASE_SETTINGS[3], CPHASE_SETTINGS[4], CPHASE_SETTINGS[5],
            ("t_max", "10"), ("dt", "0.01"), $($extra),*
        ]
    };
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1-swap-nu1.0",
        description: "swap emulation, equal couplings, nu = 1.0 g",
        settings: &[
            ("nu", "1.0"),
            ("target", "swap"),
            ("t_max", "5"),
            ("dt", "0.01"),
            SWAP_OUTPUTS,
        ],
    },
    Preset {
        name: "fig1-swap-nu1.1",
        description: "swap emulation, equal couplings, nu = 1.1 g",
        settings: &[
            ("nu", "1.1"),
            ("target", "swap"),
            ("t_max", "5"),
            ("dt", "0.01"),
            SWAP_OUTPUTS,
        ],
    },
    Preset {
        name: "fig1-swap-nu1.2",
        description: "swap emulation, equal couplings, nu = 1.2 g",
        settings: &[
            ("nu", "1.2"),
            ("target", "swap"),
            ("t_max", "5"),
            ("dt", "0.01"),
            SWAP_OUTPUTS,
        ],
    },
    Preset {
        name: "swap-nu100",
        description: "swap through the far-detuned fibre, nu = 100 g",
        settings: &[
            ("nu", "100"),
            ("target", "swap"),
            ("t_max", "5"),
            ("dt", "0.01"),
            SWAP_OUTPUTS,
        ],
    },
    Preset {
        name: "fig2-cphase",
        description: "controlled phase, |g1| = 0.1 Delta, |g2| = 0.15 Delta, nu = 10 Delta",
        settings: cphase_preset!(),
    },
    Preset {
        name: "fig3-eof-delta0",
        description: "entanglement of formation from |++>, nu = 100 g = 10 Delta, delta = 0",
        settings: &[
            ("g2", "1.0"),
            ("nu", "100"),
            ("Delta", "10"),
            ("target", "none"),
            ("initial_state", "plus_plus"),
            ("outputs", "eof"),
            ("t_max", "80"),
            ("dt", "0.02"),
        ],
    },
    Preset {
        name: "fig3-eof-delta0.5",
        description: "entanglement of formation from |++>, nu = 100 g = 10 Delta, delta = 0.5 g",
        settings: &[
            ("g2", "1.5"),
            ("nu", "100"),
            ("Delta", "10"),
            ("target", "none"),
            ("initial_state", "plus_plus"),
            ("outputs", "eof"),
            ("t_max", "80"),
            ("dt", "0.02"),
        ],
    },
    Preset {
        name: "fig3-eof-delta1",
        description: "entanglement of formation from |++>, nu = 100 g = 10 Delta, delta = g",
        settings: &[
            ("g2", "2.0"),
            ("nu", "100"),
            ("Delta", "10"),
            ("target", "none"),
            ("initial_state", "plus_plus"),
            ("outputs", "eof"),
            ("t_max", "80"),
            ("dt", "0.02"),
        ],
    },
    Preset {
        name: "diss-swap-kappa1e-2",
        description: "lossy swap, nu = 1.2 g, kappa = 0.01 g",
        settings: &[
            ("nu", "1.2"),
            ("kappa", "1e-2"),
            ("target", "swap"),
            ("t_max", "5"),
            ("dt", "0.01"),
            SWAP_OUTPUTS,
        ],
    },
    Preset {
        name: "diss-swap-all1e-3",
        description: "lossy swap, nu = 1.2 g, kappa = gamma = beta = 0.001 g",
        settings: &[
            ("nu", "1.2"),
            ("rates", "1e-3"),
            ("target", "swap"),
            ("t_max", "5"),
            ("dt", "0.01"),
            SWAP_OUTPUTS,
        ],
    },
    Preset {
        name: "diss-cphase-kappa1e-2",
        description: "lossy controlled phase, kappa = 0.01 g",
        settings: cphase_preset!(("kappa", "1e-2")),
    },
    Preset {
        name: "diss-cphase-kappa-gamma1e-3",
        description: "lossy controlled phase, kappa = gamma = 0.001 g",
        settings: cphase_preset!(("kappa", "1e-3"), ("gamma", "1e-3")),
    },
    Preset {
        name: "diss-cphase-beta1e-2",
        description: "controlled phase with fibre loss only, beta = 0.01 g",
        settings: cphase_preset!(("beta", "1e-2")),
    },
];

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::config("preset", format!("no preset named `{name}`")))?
        .config()
}

/// A numeric table with named columns and per-column units.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub units: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Extra `#` comment lines written after the data.
    pub footer: Vec<String>,
}

impl ResultTable {
    pub fn new(columns: Vec<(String, &str)>) -> Self {
        let (columns, units) = columns.into_iter().map(|(c, u)| (c, u.to_string())).unzip();
        Self {
            columns,
            units,
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Row holding the largest value of `name`, ignoring NaN.
    pub fn argmax(&self, name: &str) -> Option<&[f64]> {
        let k = self.column_index(name)?;
        self.rows
            .iter()
            .filter(|r| !r[k].is_nan())
            .max_by(|a, b| a[k].total_cmp(&b[k]))
            .map(|r| r.as_slice())
    }

    /// CSV text: a `# units:` comment, the header, one line per row and
    /// any footer comments. Values use Rust's shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let units: Vec<String> = self
            .columns
            .iter()
            .zip(&self.units)
            .map(|(c, u)| format!("{c}={u}"))
            .collect();
        let _ = writeln!(s, "# units: {}", units.join(", "));
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        for line in &self.footer {
            let _ = writeln!(s, "# {line}");
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let units_line = lines
            .next()
            .and_then(|l| l.strip_prefix("# units: "))
            .ok_or_else(|| Error::config("csv", "missing `# units:` line"))?;
        let header = lines
            .next()
            .ok_or_else(|| Error::config("csv", "missing header"))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let units: Vec<String> = units_line
            .split(", ")
            .map(|cu| cu.split_once('=').map_or("", |(_, u)| u).to_string())
            .collect();
        if units.len() != columns.len() {
            return Err(Error::config("csv", "units line does not match header"));
        }
        let mut table = Self {
            columns,
            units,
            rows: Vec::new(),
            footer: Vec::new(),
        };
        for (k, line) in lines.enumerate() {
            if let Some(comment) = line.strip_prefix("# ") {
                table.footer.push(comment.to_string());
                continue;
            }
            let row = line
                .split(',')
                .map(|c| c.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::config("csv", format!("row {}: {e}", k + 1)))?;
            if row.len() != table.columns.len() {
                return Err(Error::config(
                    "csv",
                    format!("row {} has {} cells", k + 1, row.len()),
                ));
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}

pub fn emit_csv(table: &ResultTable, path: &Path) -> Result<()> {
    std::fs::write(path, table.to_csv())?;
    Ok(())
}

/// Footer line converting the g-unit time axis to seconds for a coupling of
/// `g_hz` (angular frequency `g` in rad/s equals `g_hz`).
pub fn physical_units_footer(cfg: &ScenarioConfig, g_hz: f64) -> Result<String> {
    if !(g_hz > 0.0) || !g_hz.is_finite() {
        return Err(Error::config(
            "g_hz",
            format!("must be positive, got {g_hz}"),
        ));
    }
    let unit = 1.0 / g_hz;
    Ok(format!(
        "physical units: g = {g_hz:e} Hz, 1/g = {unit:e} s, dt = {:e} s, t_max = {:e} s",
        cfg.dt * unit,
        cfg.t_max * unit
    ))
}

struct RowInput {
    time: f64,
    channel: ChannelMatrix,
    leakage: f64,
    phase: Option<ControlledPhase>,
}

fn gate_target(cfg: &ScenarioConfig, phase: Option<&ControlledPhase>) -> Option<GateTarget> {
    match cfg.target {
        TargetSpec::Swap => Some(GateTarget::swap()),
        TargetSpec::Cphase(Some(theta)) => Some(GateTarget::cphase(theta)),
        TargetSpec::Cphase(None) => Some(GateTarget::cphase(phase.map_or(f64::NAN, |p| p.theta))),
        TargetSpec::None => None,
    }
}

fn evaluate_row(cfg: &ScenarioConfig, row: &RowInput, index: usize) -> Result<Vec<f64>> {
    let mut out = vec![row.time];
    let target = gate_target(cfg, row.phase.as_ref());
    let target_ok = target.as_ref().is_some_and(|t| t.theta.is_finite());
    for o in &cfg.outputs {
        match o {
            Observable::Leakage => out.push(row.leakage.clamp(0.0, 1.0)),
            Observable::FidelityRaw => out.push(match &target {
                Some(t) if target_ok => average_fidelity(&row.channel, t),
                _ => f64::NAN,
            }),
            Observable::FidelityPhaseOpt => out.push(match &target {
                Some(t) if target_ok => match t.kind {
                    GateKind::Swap => swap_fidelity_phase_optimized(&row.channel).fidelity,
                    GateKind::ControlledPhase => {
                        fidelity_local_phase_optimized(&row.channel, t.theta).fidelity
                    }
                },
                _ => f64::NAN,
            }),
            Observable::FidelityMc => match &target {
                Some(t) if target_ok => {
                    let seed = cfg.seed.wrapping_add(index as u64);
                    let est = average_fidelity_monte_carlo(&row.channel, t, cfg.mc_samples, seed)?;
                    out.extend([est.mean, est.std_error]);
                }
                _ => out.extend([f64::NAN, f64::NAN]),
            },
            Observable::Theta => match &row.phase {
                Some(p) => out.extend([p.theta, p.entangling_angle()]),
                None => out.extend([f64::NAN, f64::NAN]),
            },
            Observable::Eof | Observable::Populations => {
                let rho = row.channel.apply(&cfg.initial_state.density());
                if *o == Observable::Populations {
                    out.extend((0..4).map(|k| rho[(k, k)].re));
                } else {
                    let herm = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
                    let state =
                        TwoQubitState::new(herm).map_err(|e| Error::IntegrationFailure {
                            time: row.time,
                            detail: e.to_string(),
                        })?;
                    out.push(entanglement_of_formation(&state));
                }
            }
        }
    }
    Ok(out)
}

fn wants_phase(cfg: &ScenarioConfig) -> bool {
    cfg.outputs.contains(&Observable::Theta)
        || (cfg.target == TargetSpec::Cphase(None) && cfg.outputs.iter().any(|o| o.needs_target()))
}

/// Evaluate `cfg` on its time grid. Rows are independent and computed in
/// parallel on the closed path; the output order is always the grid order.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let mut table = ResultTable::new(cfg.columns());
    let phase = wants_phase(cfg);
    let rows: Vec<Vec<f64>> = if cfg.params.is_closed() {
        let ev = Evolver::new(&cfg.params);
        cfg.times()
            .into_par_iter()
            .enumerate()
            .map(|(k, t)| {
                let ks = ev.kraus_set(t);
                let row = RowInput {
                    time: t,
                    channel: channel_from_kraus(&ks)?,
                    leakage: ev.leakage(t),
                    phase: if phase {
                        extract_controlled_phase(&ks).ok()
                    } else {
                        None
                    },
                };
                evaluate_row(cfg, &row, k)
            })
            .collect::<Result<_>>()?
    } else {
        let li = build_liouvillian(&cfg.params);
        li.tomography_series(0.0, cfg.dt, cfg.grid_len() - 1)?
            .into_par_iter()
            .enumerate()
            .map(|(k, pt)| {
                let row = RowInput {
                    time: pt.time,
                    phase: if phase {
                        ControlledPhase::from_channel(&pt.channel).ok()
                    } else {
                        None
                    },
                    channel: pt.channel,
                    leakage: pt.leakage,
                };
                evaluate_row(cfg, &row, k)
            })
            .collect::<Result<_>>()?
    };
    table.rows = rows;
    Ok(table)
}

/// Axes accepted by [`sweep`].
pub const SWEEP_AXES: [&str; 9] = [
    "g1",
    "g2",
    "nu",
    "Delta",
    "phi",
    "kappa",
    "gamma",
    "beta",
    "all_couplings_scale",
];

/// `base` with one parameter replaced. `all_couplings_scale` multiplies
/// `|g1|`, `|g2|` and `nu` of `base` jointly.
pub fn with_axis_value(base: &ScenarioConfig, axis: &str, value: f64) -> Result<ScenarioConfig> {
    let mut cfg = base.clone();
    match axis {
        "all_couplings_scale" => {
            if !value.is_finite() {
                return Err(Error::config(axis, format!("must be finite, got {value}")));
            }
            cfg.params.g1 *= value;
            cfg.params.g2 *= value;
            cfg.params.nu *= value;
        }
        a if SWEEP_AXES.contains(&a) => cfg.set(a, &format!("{value:?}"))?,
        other => {
            return Err(Error::config(
                other,
                format!(
                    "unknown sweep axis; expected one of {}",
                    SWEEP_AXES.join(", ")
                ),
            ))
        }
    }
    Ok(cfg)
}

/// One independent run per value, returned in input order.
pub fn sweep(base: &ScenarioConfig, axis: &str, values: &[f64]) -> Result<Vec<(f64, ResultTable)>> {
    if !SWEEP_AXES.contains(&axis) {
        return Err(Error::config(
            axis,
            format!(
                "unknown sweep axis; expected one of {}",
                SWEEP_AXES.join(", ")
            ),
        ));
    }
    values
        .par_iter()
        .map(|&v| {
            let cfg = with_axis_value(base, axis, v)?;
            Ok((v, run_scenario(&cfg)?))
        })
        .collect()
}

/// Concatenate sweep results into one table with the axis as first column.
pub fn sweep_table(
    axis: &str,
    results: &[(f64, ResultTable)],
    base: &ScenarioConfig,
) -> ResultTable {
    let mut cols = vec![(axis.to_string(), "g")];
    if axis == "all_couplings_scale" || axis == "phi" {
        cols[0].1 = if axis == "phi" { "rad" } else { "1" };
    }
    cols.extend(base.columns());
    let mut table = ResultTable::new(cols);
    for (v, t) in results {
        for r in &t.rows {
            let mut row = Vec::with_capacity(r.len() + 1);
            row.push(*v);
            row.extend_from_slice(r);
            table.rows.push(row);
        }
    }
    table
}
