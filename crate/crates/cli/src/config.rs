//! Run configuration: defaults, JSON file, command-line overrides, validation.

use std::path::{Path, PathBuf};

use aqd_core::analysis::DEFAULT_ZERO_TOL;
use aqd_core::{Measure, System, TraceOut};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Data file; standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
    /// Write `<path>.meta.json` next to the data file.
    pub sidecar: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: None,
            format: Format::Csv,
            sidecar: true,
        }
    }
}

/// Everything a run needs. Energies are ratios to the coupling `T` and times
/// are in units of `1/T`; `t_coupling` only rescales the written output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub system: System,
    pub n: u32,
    pub u_over_t: f64,
    pub e_over_t: f64,
    pub t_coupling: f64,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    /// Empty selects the defaults for `system` and `trace_out`.
    pub measures: Vec<Measure>,
    pub trace_out: TraceOut,
    pub zero_tol: f64,
    pub n_list: Vec<u32>,
    pub u_min: f64,
    pub u_max: f64,
    pub u_steps: usize,
    pub output: OutputConfig,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: System::Tripartite,
            n: 10,
            u_over_t: 0.2,
            e_over_t: 0.01,
            t_coupling: 1.0,
            t_max: None,
            dt: None,
            measures: Vec::new(),
            trace_out: TraceOut::None,
            zero_tol: DEFAULT_ZERO_TOL,
            n_list: vec![4, 10, 30],
            u_min: 0.05,
            u_max: 1.0,
            u_steps: 20,
            output: OutputConfig::default(),
            threads: None,
        }
    }
}

/// Which subcommand a configuration is validated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Evolve,
    Sweep,
    Spectrum,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Requested measures, or the defaults: the system's concurrence plus the
    /// entanglement of formation and negativity of the chosen reduction.
    pub fn effective_measures(&self) -> Vec<Measure> {
        if !self.measures.is_empty() {
            return self.measures.clone();
        }
        let mut out = vec![self.primary_measure()];
        out.extend(match self.trace_out {
            TraceOut::None => vec![],
            TraceOut::Pool => vec![Measure::EofTwoQubit, Measure::NegativityTwoQubit],
            TraceOut::Qubit => vec![Measure::EofQubitQutrit, Measure::NegativityQubitQutrit],
        });
        out
    }

    pub fn primary_measure(&self) -> Measure {
        match self.system {
            System::Bipartite => Measure::Concurrence,
            System::Tripartite => Measure::ConcurrenceTripartite,
        }
    }

    pub fn validate(&self, command: Command) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        if command != Command::Sweep && self.n < 1 {
            return bad("n must be at least 1".into());
        }
        if !(self.u_over_t >= 0.0 && self.u_over_t.is_finite()) {
            return bad(format!("u_over_t must be non-negative, got {}", self.u_over_t));
        }
        if !self.e_over_t.is_finite() {
            return bad("e_over_t must be finite".into());
        }
        positive("t_coupling", self.t_coupling)?;
        positive("zero_tol", self.zero_tol)?;
        if let Some(t) = self.t_max {
            positive("t_max", t)?;
        }
        if let Some(dt) = self.dt {
            positive("dt", dt)?;
            if let Some(t) = self.t_max {
                if t < dt {
                    return bad(format!("t_max ({t}) must be at least dt ({dt})"));
                }
            }
        }
        if self.system == System::Bipartite && self.trace_out != TraceOut::None {
            return bad("trace_out requires the tripartite system".into());
        }
        for m in &self.measures {
            if m.system() != self.system {
                return bad(format!("measure {m} is not defined for the {:?} system", self.system).to_lowercase());
            }
            if m.trace_out() != TraceOut::None && m.trace_out() != self.trace_out {
                return bad(format!("measure {m} requires trace_out = {}", m.trace_out()));
            }
        }
        if let Some(0) = self.threads {
            return bad("threads must be at least 1".into());
        }
        if command == Command::Sweep {
            if self.n_list.is_empty() {
                return bad("n_list must not be empty".into());
            }
            if self.n_list.contains(&0) {
                return bad("n_list entries must be at least 1".into());
            }
            if self.u_steps == 0 {
                return bad("u_steps must be at least 1".into());
            }
            if !(self.u_min >= 0.0 && self.u_min.is_finite() && self.u_max.is_finite()) {
                return bad("u_min and u_max must be finite and non-negative".into());
            }
            if self.u_steps > 1 && self.u_max <= self.u_min {
                return bad(format!("u_max ({}) must exceed u_min ({})", self.u_max, self.u_min));
            }
        }
        Ok(())
    }
}
