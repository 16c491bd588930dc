use std::path::PathBuf;

use aqd_core::{Measure, System, TraceOut};
use clap::{ArgAction, Args, Parser, Subcommand};

use crate::config::{Command, Format, RunConfig};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "aqd",
    version,
    about = "Entanglement dynamics of atomic quantum dots coupled to a boson pool"
)]
pub struct Cli {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file (standard output when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write a `<out>.meta.json` sidecar with config and summary (default true).
    #[arg(long, global = true, value_name = "BOOL", action = ArgAction::Set)]
    pub seed_metadata: Option<bool>,

    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print the resolved configuration as JSON and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,

    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Sample one trajectory and its entanglement measures.
    Evolve(ModelArgs),
    /// Extract periods and maxima over a grid of U/T and n.
    Sweep(SweepArgs),
    /// Report the spectrum of the Hamiltonian.
    Spectrum(ModelArgs),
}

#[derive(Debug, Default, Args)]
pub struct ModelArgs {
    /// bipartite or tripartite.
    #[arg(long)]
    pub system: Option<System>,

    /// Reference pool occupation.
    #[arg(long)]
    pub n: Option<u32>,

    /// Interaction U/T.
    #[arg(long = "u")]
    pub u_over_t: Option<f64>,

    /// Trap energy difference E/T.
    #[arg(long = "e", allow_negative_numbers = true)]
    pub e_over_t: Option<f64>,

    /// Absolute coupling T used to scale written times and energies.
    #[arg(long)]
    pub t_coupling: Option<f64>,

    /// Horizon in units of 1/T.
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,

    /// Sampling step in units of 1/T.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,

    /// Comma separated measure names.
    #[arg(long, value_delimiter = ',')]
    pub measures: Option<Vec<Measure>>,

    /// none, pool or qubit.
    #[arg(long)]
    pub trace_out: Option<TraceOut>,

    #[arg(long)]
    pub zero_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<u32>>,

    #[arg(long)]
    pub u_min: Option<f64>,

    #[arg(long)]
    pub u_max: Option<f64>,

    #[arg(long)]
    pub u_steps: Option<usize>,
}

impl Cli {
    pub fn command(&self) -> Command {
        match self.command {
            CommandArgs::Evolve(_) => Command::Evolve,
            CommandArgs::Sweep(_) => Command::Sweep,
            CommandArgs::Spectrum(_) => Command::Spectrum,
        }
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let model = match &self.command {
            CommandArgs::Evolve(m) | CommandArgs::Spectrum(m) => m,
            CommandArgs::Sweep(s) => {
                set(&mut cfg.n_list, s.n_list.clone());
                set(&mut cfg.u_min, s.u_min);
                set(&mut cfg.u_max, s.u_max);
                set(&mut cfg.u_steps, s.u_steps);
                &s.model
            }
        };
        set(&mut cfg.system, model.system);
        set(&mut cfg.n, model.n);
        set(&mut cfg.u_over_t, model.u_over_t);
        set(&mut cfg.e_over_t, model.e_over_t);
        set(&mut cfg.t_coupling, model.t_coupling);
        set(&mut cfg.measures, model.measures.clone());
        set(&mut cfg.trace_out, model.trace_out);
        set(&mut cfg.zero_tol, model.zero_tol);
        if model.t_max.is_some() {
            cfg.t_max = model.t_max;
        }
        if model.dt.is_some() {
            cfg.dt = model.dt;
        }
        if self.out.is_some() {
            cfg.output.path = self.out.clone();
        }
        set(&mut cfg.output.format, self.format);
        set(&mut cfg.output.sidecar, self.seed_metadata);
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
