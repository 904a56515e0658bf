//! `cpuc` — capacity per unit cost for quantum channels.
//!
//! Exit codes: 0 success, 1 input/validation error, 2 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cpuc_core::capacity::{
    capacity_cost, capacity_per_unit_cost, estimation_bounds_report, holevo_chi_entropy_form,
    holevo_chi_relent_form, CpucWitness,
};
use cpuc_core::channel::{CostFunction, KrausChannel};
use cpuc_core::gaussian::{classify, cpuc_gaussian, pie_curve, vacuum_output_params, FiducialChannel};
use cpuc_core::io::{
    format_sig9, parse_json, CostFile, EnsembleFile, FamilyFile, GaussianChannelFile,
    KrausChannelFile,
};
use cpuc_core::{Error, ExtendedReal};

#[derive(Parser)]
#[command(
    name = "cpuc",
    about = "Classical capacity per unit cost for quantum channels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Unit {
    Nats,
    Bits,
}

impl Unit {
    /// Rescale an information value (nats → chosen unit).
    fn info(&self, nats: f64) -> f64 {
        match self {
            Unit::Nats => nats,
            Unit::Bits => nats / std::f64::consts::LN_2,
        }
    }

    /// Rescale a cost-per-information value (the reciprocal scaling).
    fn cost_per_info(&self, per_nat: f64) -> f64 {
        match self {
            Unit::Nats => per_nat,
            Unit::Bits => per_nat * std::f64::consts::LN_2,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Unit::Nats => "nats",
            Unit::Bits => "bits",
        }
    }
}

#[derive(Args)]
struct GaussianFlags {
    /// Transmission (0..=1), gain (>1) or phase-conjugating gain (<0)
    #[arg(long, allow_hyphen_values = true, required_unless_present = "channel_json")]
    eta: Option<f64>,
    /// Environment thermal photons
    #[arg(long, allow_hyphen_values = true, required_unless_present = "channel_json")]
    n_tilde: Option<f64>,
    /// Environment squeezing
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    omega_tilde: f64,
    /// Channel parameters as JSON {"eta", "n_tilde", "omega_tilde"}
    /// instead of flags
    #[arg(long, conflicts_with_all = ["eta", "n_tilde"])]
    channel_json: Option<PathBuf>,
}

impl GaussianFlags {
    fn channel(&self) -> Result<FiducialChannel, Error> {
        if let Some(path) = &self.channel_json {
            return parse_json::<GaussianChannelFile>(&read_to_string(path)?)?.to_channel();
        }
        FiducialChannel::new(
            self.eta.expect("required by clap"),
            self.n_tilde.expect("required by clap"),
            self.omega_tilde,
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form capacity per unit cost of a fiducial Gaussian channel
    GaussianCpuc {
        #[command(flatten)]
        gaussian: GaussianFlags,
        #[arg(long, value_enum, default_value = "nats")]
        unit: Unit,
    },
    /// Photon information efficiency sweep, written as CSV
    PieCurve {
        #[command(flatten)]
        gaussian: GaussianFlags,
        #[arg(long)]
        nbar_min: f64,
        #[arg(long)]
        nbar_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Geometric spacing instead of linear
        #[arg(long)]
        log_grid: bool,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "nats")]
        unit: Unit,
    },
    /// Capacity per unit cost of a Kraus channel over a state family
    FiniteCpuc {
        /// Kraus channel JSON (identity when omitted)
        #[arg(long)]
        channel: Option<PathBuf>,
        /// Family JSON
        #[arg(long)]
        family: PathBuf,
        /// Cost JSON
        #[arg(long)]
        cost: PathBuf,
        #[arg(long, value_enum, default_value = "nats")]
        unit: Unit,
    },
    /// Holevo information of an ensemble file, both forms
    Chi {
        #[arg(long)]
        ensemble: PathBuf,
        /// Kraus channel JSON (identity when omitted)
        #[arg(long)]
        channel: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "nats")]
        unit: Unit,
    },
    /// Capacity-cost curve over the ensemble's states and costs
    CapacityCost {
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long)]
        channel: Option<PathBuf>,
        #[arg(long)]
        beta_min: f64,
        #[arg(long)]
        beta_max: Option<f64>,
        #[arg(long, default_value_t = 1)]
        points: usize,
        #[arg(long)]
        log_grid: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "nats")]
        unit: Unit,
    },
    /// Estimation-theoretic bounds J/2, F/2 and the minimum-energy chain
    Bounds {
        #[arg(long)]
        channel: Option<PathBuf>,
        /// Family JSON; must be scalar with free point 0 (quadratic cost)
        #[arg(long)]
        family: PathBuf,
        /// Skip the capacity-per-unit-cost cross-check
        #[arg(long)]
        skip_cpuc: bool,
        #[arg(long, value_enum, default_value = "nats")]
        unit: Unit,
    },
    /// Run the oracle cross-check suite
    Validate {
        /// Trimmed case counts, finishes in a few seconds
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturbation injected into the Gaussian closed form
        /// (negative control; hidden)
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb: f64,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CPUC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors; anything else is bad input
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) => 2,
        _ => 1,
    }
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_kraus(path: Option<&Path>, fallback_dim: usize) -> Result<KrausChannel, Error> {
    match path {
        Some(p) => parse_json::<KrausChannelFile>(&read_to_string(p)?)?.to_channel(),
        None => Ok(KrausChannel::identity(fallback_dim)),
    }
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn grid(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>, Error> {
    if points == 0 || min <= 0.0 || max < min {
        return Err(Error::Domain(format!(
            "bad grid: min {min}, max {max}, points {points}"
        )));
    }
    if points == 1 || max == min {
        return Ok(vec![min]);
    }
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            if log {
                min * (max / min).powf(t)
            } else {
                min + t * (max - min)
            }
        })
        .collect())
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::GaussianCpuc { gaussian, unit } => {
            let ch = gaussian.channel()?;
            let vac = vacuum_output_params(&ch);
            println!("classification: {}", classify(&ch));
            println!("n0_out: {}", format_sig9(vac.n_out));
            println!("omega0_out: {}", format_sig9(vac.omega_out));
            let value = match cpuc_gaussian(&ch) {
                ExtendedReal::Infinite => "inf".to_string(),
                ExtendedReal::Finite(v) => format_sig9(unit.info(v)),
            };
            println!("capacity_per_unit_cost: {value} {}/photon", unit.label());
            Ok(ExitCode::SUCCESS)
        }
        Command::PieCurve {
            gaussian,
            nbar_min,
            nbar_max,
            points,
            log_grid,
            out,
            unit,
        } => {
            let ch = gaussian.channel()?;
            let nbars = grid(nbar_min, nbar_max, points, log_grid)?;
            let rows = pie_curve(&ch, &nbars)?;
            let mut csv = String::from("nbar,pie,capacity\n");
            for row in &rows {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    format_sig9(row.nbar),
                    format_sig9(unit.info(row.pie)),
                    format_sig9(unit.info(row.capacity))
                ));
            }
            write_or_print(out.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FiniteCpuc {
            channel,
            family,
            cost,
            unit,
        } => {
            let family = parse_json::<FamilyFile>(&read_to_string(&family)?)?.to_family()?;
            let cost = parse_json::<CostFile>(&read_to_string(&cost)?)?.to_cost()?;
            let ch = load_kraus(channel.as_deref(), family.state_dim())?;
            let result = capacity_per_unit_cost(&ch, &family, &cost)?;
            match (&result.value, &result.witness) {
                (ExtendedReal::Infinite, CpucWitness::SupportMismatch { param }) => {
                    println!(
                        "capacity_per_unit_cost: inf (support mismatch at x={})",
                        fmt_vec(param)
                    );
                }
                (ExtendedReal::Finite(v), CpucWitness::Maximizer { param, ratio }) => {
                    println!("capacity_per_unit_cost: {}", format_sig9(unit.info(*v)));
                    println!(
                        "maximizer: x={} ratio {}",
                        fmt_vec(param),
                        format_sig9(unit.info(*ratio))
                    );
                }
                (value, _) => println!("capacity_per_unit_cost: {value}"),
            }
            if let Some(limit) = &result.free_point_limit {
                let text = match limit {
                    ExtendedReal::Infinite => "inf".to_string(),
                    ExtendedReal::Finite(v) => format_sig9(unit.info(*v)),
                };
                println!("free_point_limit_j_half: {text}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Chi {
            ensemble,
            channel,
            unit,
        } => {
            let ens = parse_json::<EnsembleFile>(&read_to_string(&ensemble)?)?.to_ensemble()?;
            let ch = load_kraus(channel.as_deref(), ens.dim())?;
            let entropy_form = holevo_chi_entropy_form(&ens, &ch)?;
            let relent_form = holevo_chi_relent_form(&ens, &ch)?;
            println!(
                "chi_entropy_form: {} {}",
                format_sig9(unit.info(entropy_form)),
                unit.label()
            );
            println!(
                "chi_relative_entropy_form: {} {}",
                format_sig9(unit.info(relent_form)),
                unit.label()
            );
            println!(
                "form_discrepancy: {:e}",
                (entropy_form - relent_form).abs()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CapacityCost {
            ensemble,
            channel,
            beta_min,
            beta_max,
            points,
            log_grid,
            out,
            unit,
        } => {
            let ens = parse_json::<EnsembleFile>(&read_to_string(&ensemble)?)?.to_ensemble()?;
            let ch = load_kraus(channel.as_deref(), ens.dim())?;
            let states: Vec<_> = ens
                .symbols()
                .iter()
                .map(|s| (s.state.clone(), s.cost))
                .collect();
            let betas = grid(beta_min, beta_max.unwrap_or(beta_min), points, log_grid)?;
            let mut csv = String::from("beta,capacity\n");
            for beta in betas {
                let point = capacity_cost(&states, &ch, beta)?;
                csv.push_str(&format!(
                    "{},{}\n",
                    format_sig9(beta),
                    format_sig9(unit.info(point.capacity))
                ));
            }
            write_or_print(out.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds {
            channel,
            family,
            skip_cpuc,
            unit,
        } => {
            let family = parse_json::<FamilyFile>(&read_to_string(&family)?)?.to_family()?;
            let ch = load_kraus(channel.as_deref(), family.state_dim())?;
            let report =
                estimation_bounds_report(&ch, &family, &CostFunction::QuadraticParam, !skip_cpuc)?;
            let fmt_info = |v: &ExtendedReal| match v {
                ExtendedReal::Infinite => "inf".to_string(),
                ExtendedReal::Finite(x) => format_sig9(unit.info(*x)),
            };
            let fmt_cost = |v: &ExtendedReal| match v {
                ExtendedReal::Infinite => "inf".to_string(),
                ExtendedReal::Finite(x) => format_sig9(unit.cost_per_info(*x)),
            };
            println!("j_half: {} {}", fmt_info(&report.j_half), unit.label());
            println!(
                "f_half: {} {}",
                format_sig9(unit.info(report.f_half)),
                unit.label()
            );
            println!("e_min_upper_via_j: {}", fmt_cost(&report.e_min_via_j));
            println!("e_min_upper_via_f: {}", fmt_cost(&report.e_min_via_f));
            if let Some(cpuc) = &report.cpuc {
                println!("capacity_per_unit_cost: {}", fmt_info(&cpuc.value));
            }
            match report.chain_holds {
                Some(true) => println!("chain C >= J/2 >= F/2: holds"),
                Some(false) => println!("chain C >= J/2 >= F/2: VIOLATED"),
                None => println!("chain C >= J/2 >= F/2: not evaluated"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            quick,
            seed,
            perturb,
        } => {
            let report = cpuc_core::validate::run_validation(quick, seed, perturb);
            for check in &report.checks {
                println!(
                    "check {}: {} (max_err {:.3e} <= {:.0e}, {} cases){}",
                    check.name,
                    if check.passed { "PASS" } else { "FAIL" },
                    check.max_err,
                    check.tolerance,
                    check.cases,
                    if check.detail.is_empty() {
                        String::new()
                    } else {
                        format!(" [{}]", check.detail)
                    }
                );
            }
            if report.passed() {
                println!("validation: PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("validation: FAIL");
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format_sig9(*x)).collect();
    format!("[{}]", parts.join(", "))
}
