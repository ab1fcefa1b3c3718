//! `ringcons`: consensus analysis of damped second-order agents on ring
//! digraphs.
//!
//! Exit codes: 0 on success, 1 when a computation fails (bracket,
//! convergence, a failed `verify` check), 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ringcons::checks::{run_reference_checks, ReferenceValues};
use ringcons::consensus::{margin, region_report, MarginResult};
use ringcons::report;
use ringcons::sim::simulate;
use ringcons::spectra::{laplacian_spectrum, oracle_spectrum};
use ringcons::{Error, Network, Sign, SimConfig, Topology};

#[derive(Parser)]
#[command(name = "ringcons", version, about = "Consensus analysis for second-order agents on ring digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Laplacian eigenvalues with locus residuals.
    Spectrum {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, value_enum, default_value_t = SignArg::Laplacian)]
        sign: SignArg,
        /// Use the matrix oracle (Faddeev-LeVerrier + Aberth) instead of the closed form.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sampled Cassini ovals of the alternating ring.
    Cassini {
        #[arg(long, value_enum, default_value_t = SignArg::Laplacian)]
        sign: SignArg,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Size-free condition and spectral criterion for one damping value.
    Region {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        gamma: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Critical damping for one network size.
    Margin {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Critical damping over a list of sizes.
    MarginSweep {
        #[arg(long, value_enum)]
        topology: TopologyArg,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// RK4 simulation from a seeded random initial state.
    Simulate {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Uniform initial range as `lo,hi`.
        #[arg(long, allow_hyphen_values = true, default_value = "0,10")]
        init_range: InitRange,
        #[arg(long)]
        zero_velocity: bool,
        /// Also write velocities to the CSV.
        #[arg(long)]
        full_state: bool,
        /// Record every k-th step.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check the bundled reference values.
    Verify,
}

#[derive(Args)]
struct NetArgs {
    #[arg(long, value_enum)]
    topology: TopologyArg,
    /// Number of agents.
    #[arg(long)]
    n: Option<usize>,
    /// Alternating ring half-size; implies n = 2m.
    #[arg(long)]
    m: Option<usize>,
}

impl NetArgs {
    fn topology(&self) -> Topology {
        self.topology.into()
    }

    fn agents(&self) -> Result<usize, Error> {
        let alternating = self.topology() == Topology::Alternating;
        match (self.n, self.m) {
            (Some(n), None) => Ok(n),
            (None, Some(m)) if alternating => Ok(2 * m),
            (None, Some(_)) => Err(Error::InvalidParameter("--m applies only to the alternating ring".into())),
            (Some(n), Some(m)) if alternating && n == 2 * m => Ok(n),
            (Some(_), Some(_)) => Err(Error::InvalidParameter("--n and --m disagree".into())),
            (None, None) => Err(Error::InvalidParameter("one of --n or --m is required".into())),
        }
    }
}

/// `lo,hi`.
#[derive(Clone, Copy)]
struct InitRange(f64, f64);

impl std::str::FromStr for InitRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}"));
        Ok(InitRange(parse(lo)?, parse(hi)?))
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Laplacian,
    Negated,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Laplacian => Sign::Laplacian,
            SignArg::Negated => Sign::Negated,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Alternating,
    Cyclic,
    Bidirectional,
}

impl From<TopologyArg> for Topology {
    fn from(t: TopologyArg) -> Topology {
        match t {
            TopologyArg::Alternating => Topology::Alternating,
            TopologyArg::Cyclic => Topology::Cyclic,
            TopologyArg::Bidirectional => Topology::Bidirectional,
        }
    }
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

fn emit(out: &OutArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn margins_parallel(topology: Topology, ns: &[usize], tol: f64) -> Result<Vec<MarginResult>, Error> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| scope.spawn(move || margin(topology, n, tol)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("margin worker panicked"))
            .collect()
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum { net, sign, oracle, out } => {
            let n = net.agents()?;
            let sign = Sign::from(sign);
            let spectrum = if oracle {
                oracle_spectrum(&Network::new(net.topology(), n)?, sign)?
            } else {
                laplacian_spectrum(net.topology(), n, sign)?
            };
            let text = match out.format {
                Format::Csv => report::spectrum_csv(&spectrum),
                Format::Json => report::spectrum_json(&spectrum),
            };
            emit(&out, &text)
        }
        Command::Cassini { sign, samples, out } => {
            if samples == 0 {
                return Err(Failure::Usage("--samples must be positive".into()));
            }
            if out.format == Format::Json {
                return Err(Failure::Usage("cassini supports only csv output".into()));
            }
            emit(&out, &report::cassini_csv(sign.into(), samples))
        }
        Command::Region { net, gamma, out } => {
            let r = region_report(net.topology(), net.agents()?, gamma)?;
            let text = match out.format {
                Format::Csv => report::region_csv(&r),
                Format::Json => report::region_json(&r),
            };
            emit(&out, &text)
        }
        Command::Margin { net, tol, out } => {
            let r = vec![margin(net.topology(), net.agents()?, tol)?];
            let text = match out.format {
                Format::Csv => report::margin_csv(&r),
                Format::Json => report::margin_json(&r),
            };
            emit(&out, &text)
        }
        Command::MarginSweep { topology, n_list, tol, out } => {
            let topology = Topology::from(topology);
            // Validate every size before spawning any work.
            for &n in &n_list {
                Network::new(topology, n)?;
            }
            let rows = margins_parallel(topology, &n_list, tol)?;
            let text = match out.format {
                Format::Csv => report::margin_csv(&rows),
                Format::Json => report::margin_json(&rows),
            };
            emit(&out, &text)
        }
        Command::Simulate {
            net,
            gamma,
            dt,
            horizon,
            seed,
            init_range,
            zero_velocity,
            full_state,
            stride,
            out,
        } => {
            let cfg = SimConfig {
                topology: net.topology(),
                n: net.agents()?,
                gamma,
                dt,
                horizon,
                seed,
                init_low: init_range.0,
                init_high: init_range.1,
                zero_velocity,
                record_stride: stride,
            };
            cfg.validate()?;
            Network::new(cfg.topology, cfg.n)?;
            let traj = simulate(&cfg)?;
            let text = match out.format {
                Format::Csv => report::trajectory_csv(&traj, full_state),
                Format::Json => report::simulation_summary_json(&cfg, &traj),
            };
            emit(&out, &text)
        }
        Command::Verify => {
            let refs = ReferenceValues::bundled()?;
            let outcomes = run_reference_checks(&refs);
            let mut failed = 0;
            for o in &outcomes {
                println!("[{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                failed += usize::from(!o.passed);
            }
            if failed > 0 {
                return Err(Failure::Compute(format!("{failed} of {} checks failed", outcomes.len())));
            }
            println!("all {} checks passed", outcomes.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
