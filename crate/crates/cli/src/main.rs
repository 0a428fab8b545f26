//! `vaxprice` command-line front end.
//!
//! Units: prices and costs in USD per two-dose regimen, quantities in
//! millions of regimens, profits in millions of USD.
//!
//! Exit codes: 0 success, 1 invalid input, 2 infeasible single-scenario solve.

mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use vaxprice::market::{BASE_MAGNITUDE_EXPONENT, BASE_PUBLIC_SHARE};
use vaxprice::sweep::{self, PriceBand};
use vaxprice::{
    check_surplus_regime, default_sweep_grid, oracle_solve, solve, DemandCurve, Error,
    HistoricalRecord, PrivateEquilibrium, ReducedProblem, ScenarioConfig, SolveStatus, Tolerances,
};

#[derive(Parser, Debug)]
#[command(
    name = "vaxprice",
    version,
    about = "Duopoly vaccine pricing: demand estimation, private equilibrium, public price negotiation",
    long_about = "Duopoly vaccine pricing: demand estimation, private-sector equilibrium and \
                  certified public-sector price negotiation.\n\n\
                  Units: prices and costs are USD per two-dose regimen, quantities are millions \
                  of regimens, profits are millions of USD."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct DataArg {
    /// Historical price/demand CSV (defaults to the bundled 2010-11..2019-20 flu table)
    #[arg(long, value_name = "CSV")]
    data: Option<PathBuf>,
}

impl DataArg {
    fn load(&self) -> Result<Vec<HistoricalRecord>, Error> {
        match &self.data {
            Some(p) => vaxprice::load_historical(p),
            None => Ok(vaxprice::bundled_historical()),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the demand curve (intercepts in millions of persons, slopes in millions per USD)
    Estimate {
        #[command(flatten)]
        data: DataArg,
        /// Product similarity, in (0,1)
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        /// Per-regimen unit costs of the two manufacturers, USD, as `d1,d2`
        #[arg(
            long = "d-usd",
            visible_alias = "d",
            value_name = "D1,D2",
            value_delimiter = ',',
            required = true
        )]
        d_usd: Vec<f64>,
        /// Public-sector share of total demand, in (0,1)
        #[arg(long, default_value_t = BASE_PUBLIC_SHARE)]
        r_pub: f64,
        /// Order-of-magnitude gap between prices and quantities
        #[arg(long, default_value_t = BASE_MAGNITUDE_EXPONENT, allow_hyphen_values = true)]
        k: i32,
    },
    /// Private-sector equilibrium price (USD), quantity and surplus bound (millions)
    Equilibrium {
        /// Scenario configuration JSON
        #[arg(long, value_name = "JSON")]
        config: PathBuf,
        #[command(flatten)]
        data: DataArg,
    },
    /// Solve the public-sector negotiation for one scenario (exit 2 if infeasible)
    Solve {
        /// Scenario configuration JSON
        #[arg(long, value_name = "JSON")]
        config: PathBuf,
        #[command(flatten)]
        data: DataArg,
        /// Also run the brute-force grid oracle with N points per side
        #[arg(long, value_name = "N")]
        oracle_n: Option<usize>,
    },
    /// Run a scenario grid and write one CSV row per scenario
    Sweep {
        /// Use the built-in 1,296-scenario grid
        #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
        default_grid: bool,
        /// JSON array of scenario configurations
        #[arg(long, value_name = "JSON")]
        grid: Option<PathBuf>,
        /// Output CSV
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also write the summary JSON here (it is always printed)
        #[arg(long, value_name = "JSON")]
        summary: Option<PathBuf>,
        /// Interior (p_pub_pf, p_pub_mod, D) triples, CSV
        #[arg(long, value_name = "CSV")]
        price_pairs: Option<PathBuf>,
        /// Interior public prices by unit-cost level, CSV
        #[arg(long, value_name = "CSV")]
        cost_levels: Option<PathBuf>,
        #[command(flatten)]
        bands: BandArgs,
        #[command(flatten)]
        data: DataArg,
    },
    /// Tabulate interior sweep scenarios whose public prices fall in the bands
    Report {
        /// Sweep CSV written by `sweep`
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        #[command(flatten)]
        bands: BandArgs,
    },
}

#[derive(Args, Debug)]
struct BandArgs {
    /// First manufacturer's public price band, USD, `lo:hi`
    #[arg(
        long = "band-pf-usd",
        visible_alias = "band-pf",
        default_value = "34:44"
    )]
    band_pf: String,
    /// Second manufacturer's public price band, USD, `lo:hi`
    #[arg(
        long = "band-mod-usd",
        visible_alias = "band-mod",
        default_value = "45:55"
    )]
    band_mod: String,
}

impl BandArgs {
    fn parse(&self) -> Result<[PriceBand; 2], Error> {
        Ok([self.band_pf.parse()?, self.band_mod.parse()?])
    }
}

enum Failure {
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Invalid(format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    emit(&(text + "\n"))
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(Failure::Invalid(format!("cannot write to stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn load_problem(config: &Path, data: &DataArg) -> Result<ReducedProblem, Failure> {
    let cfg = ScenarioConfig::from_path(config)?;
    let records = data.load()?;
    Ok(ReducedProblem::from_scenario(&records, &cfg)?)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Estimate {
            data,
            gamma,
            d_usd,
            r_pub,
            k,
        } => {
            let d: [f64; 2] = d_usd.as_slice().try_into().map_err(|_| {
                Failure::Invalid(format!("--d-usd needs two costs, got {}", d_usd.len()))
            })?;
            let records = data.load()?;
            let (b, c) = vaxprice::compute_slopes(gamma, k)?;
            let (a_pub, a_priv) = vaxprice::estimate_intercepts(&records, gamma, r_pub, d)?;
            print_json(&DemandCurve::new(a_pub, a_priv, b, c)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equilibrium { config, data } => {
            let cfg = ScenarioConfig::from_path(&config)?;
            let records = data.load()?;
            let curve = DemandCurve::estimate(&records, &cfg)?;
            let eq = PrivateEquilibrium::for_scenario(&curve, &cfg)?;
            let headroom = check_surplus_regime(&eq, cfg.capacities());
            for (i, ok) in headroom.admissible.iter().enumerate() {
                if !ok {
                    eprintln!(
                        "warning: {} capacity is below the surplus bound (headroom {:.3}M)",
                        cfg.manufacturers[i].label, headroom.max_public_quantity[i]
                    );
                }
            }
            print_json(&eq)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            config,
            data,
            oracle_n,
        } => {
            let prob = load_problem(&config, &data)?;
            let tol = Tolerances::default();
            let sol = solve(&prob, &tol)?;
            let mut out = serde_json::to_value(&sol).map_err(Error::from)?;
            if let Some(n) = oracle_n {
                let oracle = oracle_solve(&prob, n, &tol)?;
                out["oracle"] = serde_json::to_value(oracle).map_err(Error::from)?;
            }
            print_json(&out)?;
            Ok(if sol.status == SolveStatus::Infeasible {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Sweep {
            default_grid,
            grid,
            out,
            jobs,
            summary,
            price_pairs,
            cost_levels,
            bands,
            data,
        } => {
            let bands = bands.parse()?;
            let scenarios = match (default_grid, grid) {
                (true, _) => default_sweep_grid(),
                (false, Some(path)) => load_grid(&path)?,
                (false, None) => return Err(Failure::Invalid("no grid given".into())),
            };
            let records = data.load()?;
            let rows = sweep::run_sweep(&scenarios, &records, jobs, &Tolerances::default())?;
            write_with(&out, |w| sweep::write_rows_csv(&rows, w))?;
            if let Some(p) = &price_pairs {
                write_with(p, |w| sweep::write_price_pairs_csv(&rows, w))?;
            }
            if let Some(p) = &cost_levels {
                write_with(p, |w| sweep::write_cost_levels_csv(&rows, w))?;
            }
            let s = sweep::summarize(&rows, bands);
            if let Some(p) = &summary {
                let text = serde_json::to_string_pretty(&s).map_err(Error::from)?;
                std::fs::write(p, text + "\n").map_err(|e| io_failure(p, e))?;
            }
            if s.n_error > 0 {
                eprintln!("warning: {} scenario(s) failed", s.n_error);
                for r in rows.iter().filter(|r| r.error.is_some()) {
                    eprintln!(
                        "  scenario {}: {}",
                        r.scenario_id,
                        r.error.as_deref().unwrap_or("")
                    );
                }
            }
            print_json(&s)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { input, bands } => {
            let bands = bands.parse()?;
            let file = File::open(&input)
                .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", input.display())))?;
            let rows = sweep::read_rows_csv(file)?;
            let matches = sweep::filter_by_band(&rows, bands[0], bands[1]);
            emit(&report::render(&matches, bands))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_grid(path: &Path) -> Result<Vec<ScenarioConfig>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut grid: Vec<ScenarioConfig> = serde_json::from_str(&text)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    if grid.is_empty() {
        return Err(Failure::Invalid(format!(
            "{}: grid is empty",
            path.display()
        )));
    }
    let assign_ids = grid.iter().all(|c| c.scenario_id == 0);
    for (i, cfg) in grid.iter_mut().enumerate() {
        if assign_ids {
            cfg.scenario_id = i as u32 + 1;
        }
    }
    Ok(grid)
}

fn write_with<F>(path: &Path, f: F) -> Result<(), Failure>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<(), Error>,
{
    let file = File::create(path).map_err(|e| io_failure(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(|e| io_failure(path, e))
}
