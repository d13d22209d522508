//! Command-line front end: every subcommand writes plot-ready CSV with
//! `# key=value` metadata lines.
//!
//! Exit status is 0 on success, 2 for bad arguments or configuration and 3
//! when a numerical routine fails.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use async_noma::corr::{build_R, generating_matrix, szego_extremes, DelayProfile};
use async_noma::csv::CsvTable;
use async_noma::dof::{extend_basis, gram_csv, TruncatedBasisSet};
use async_noma::fading::ergodic_region;
use async_noma::pulse::{OverallPulse, PulseSpec};
use async_noma::regions::{default_resolution, region, Method, RateRegion};
use async_noma::sumrate::{sweep_sumrate, sweep_to_csv};
use async_noma::superposition::{example_layers, superpose, DEFAULT_ALPHA};
use clap::{Args, Parser, Subcommand};

use config::{effective_seed, ScenarioFile};

#[derive(Parser)]
#[command(name = "async-noma", version, about = "Rate regions and power allocation for synchronous and asynchronous NOMA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interference energy IUI(τ) over τ ∈ [0, T/2].
    Iui {
        #[command(flatten)]
        pulse: PulseArgs,
        /// Number of τ samples.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rate regions of a scenario for one or more methods.
    Region {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "pnoma,apnoma,tnoma")]
        methods: Vec<Method>,
        /// Grid points per power axis (default 201 for two users, 61 for three).
        #[arg(long)]
        resolution: Option<usize>,
        /// Directory for region_<method>.csv files; required for several methods.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write hull cuts at R_i = <value> for each axis (three users).
        #[arg(long)]
        cut_at: Option<f64>,
    },
    /// Maximum two-user sum rate against the power budget.
    Sumrate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        sigma1: Option<f64>,
        #[arg(long)]
        sigma2: Option<f64>,
        #[arg(long)]
        p_min: Option<f64>,
        #[arg(long)]
        p_max: Option<f64>,
        /// Log-spaced budgets between p-min and p-max.
        #[arg(long)]
        points: Option<usize>,
        /// Interference coefficient; derived from the pulse and --tau when absent.
        #[arg(long)]
        g: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gram matrix of five truncated sincs and its one-function extension.
    Dof {
        /// Offset of the extra sinc.
        #[arg(long, default_value_t = 0.5)]
        shift: f64,
        /// Directory for gram.csv and coefficients.csv; stdout gets the Gram matrix otherwise.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Superposed 4-PSK + 8-QAM constellation.
    Constellation {
        /// Power share of the coarse layer.
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ergodic rate regions over Rayleigh fading.
    Fading {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "pnoma,apnoma,tnoma")]
        methods: Vec<Method>,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Correlation matrix R with its asymptotic eigenvalue limits.
    Corr {
        #[command(flatten)]
        pulse: PulseArgs,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5")]
        delays: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        block_length: usize,
        /// Frequency grid for the limits.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct PulseArgs {
    /// rect, sinc or rrc.
    #[arg(long, default_value = "rect")]
    pulse: String,
    /// RRC rolloff.
    #[arg(long, default_value_t = async_noma::pulse::DEFAULT_ROLLOFF)]
    beta: f64,
    /// Side lobes kept on each side of truncated pulses.
    #[arg(long, default_value_t = async_noma::pulse::DEFAULT_SIDE_LOBES)]
    lobes: usize,
    /// Symbol interval.
    #[arg(long = "symbol-interval", default_value_t = 1.0)]
    symbol_interval: f64,
}

impl PulseArgs {
    fn spec(&self) -> PulseSpec {
        PulseSpec {
            kind: self.pulse.clone(),
            symbol_interval: self.symbol_interval,
            beta: self.beta,
            side_lobes: self.lobes,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let numerical = e
                .chain()
                .any(|c| c.downcast_ref::<async_noma::Error>().is_some_and(|e| e.is_numerical()));
            ExitCode::from(if numerical { 3 } else { 2 })
        }
    }
}

fn emit(table: &CsvTable, out: Option<&Path>) -> Result<()> {
    let text = table.to_string();
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn out_dir(dir: &Option<PathBuf>, several: bool) -> Result<Option<&Path>> {
    match dir {
        Some(d) => {
            std::fs::create_dir_all(d).with_context(|| format!("cannot create {}", d.display()))?;
            Ok(Some(d.as_path()))
        }
        None if several => bail!("--out-dir is required when several tables are produced"),
        None => Ok(None),
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn describe(table: &mut CsvTable, cfg: &ScenarioFile) {
    table.push_meta("sigmas", join(&cfg.sigmas));
    table.push_meta("total_power", cfg.total_power);
    table.push_meta("pulse", &cfg.pulse.kind);
    table.push_meta("beta", cfg.pulse.beta);
    table.push_meta("side_lobes", cfg.pulse.side_lobes);
    table.push_meta("delays", join(&cfg.delays()));
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Iui { pulse, grid, out } => cmd_iui(&pulse, grid, out.as_deref()),
        Command::Region {
            config,
            methods,
            resolution,
            out_dir: dir,
            cut_at,
        } => {
            let cfg = ScenarioFile::load(&config)?;
            let scenario = cfg.scenario()?;
            let res = resolution
                .or(cfg.resolution)
                .unwrap_or_else(|| default_resolution(cfg.sigmas.len()));
            let dir = out_dir(&dir, methods.len() > 1 || cut_at.is_some())?;
            for m in methods {
                let reg = region(&scenario, m, res)?;
                let mut t = reg.to_csv();
                describe(&mut t, &cfg);
                t.push_meta("resolution", res);
                emit(&t, dir.map(|d| d.join(format!("region_{m}.csv"))).as_deref())?;
                if let (Some(v), Some(d)) = (cut_at, dir) {
                    write_cuts(&reg, v, d)?;
                }
            }
            Ok(())
        }
        Command::Sumrate {
            config,
            sigma1,
            sigma2,
            p_min,
            p_max,
            points,
            g,
            tau,
            pulse,
            out,
        } => {
            let cfg = config.as_deref().map(ScenarioFile::load).transpose()?;
            let section = cfg.as_ref().map(|c| c.sumrate.clone()).unwrap_or_default();
            let from_cfg = |i: usize| cfg.as_ref().and_then(|c| c.sigmas.get(i).copied());
            let s1 = sigma1.or(from_cfg(0)).context("--sigma1 is required without --config")?;
            let s2 = sigma2.or(from_cfg(1)).context("--sigma2 is required without --config")?;
            let spec = match &cfg {
                Some(c) => c.pulse.clone(),
                None => pulse.spec(),
            };
            let tau = tau.unwrap_or_else(|| match &cfg {
                Some(c) => {
                    let d = c.delays();
                    (d.get(1).copied().unwrap_or(0.5) - d[0]).abs()
                }
                None => 0.5,
            });
            let g = match g.or(section.g) {
                Some(g) => g,
                None => OverallPulse::new(&spec.build()?).interference_coefficient(tau, 0.0),
            };
            let lo = p_min.unwrap_or(section.p_min);
            let hi = p_max.unwrap_or(section.p_max);
            let n = points.unwrap_or(section.points);
            if !(lo > 0.0 && hi > lo && n >= 2) {
                bail!("need 0 < p-min < p-max and at least two points");
            }
            let grid: Vec<f64> = (0..n)
                .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
                .collect();
            let mut rows = Vec::new();
            for m in Method::ALL {
                rows.extend(sweep_sumrate(m, s1, s2, g, &grid)?);
            }
            let mut t = sweep_to_csv(&rows);
            t.push_meta("sigma1", s1);
            t.push_meta("sigma2", s2);
            t.push_meta("g", g);
            emit(&t, out.as_deref())
        }
        Command::Dof { shift, out_dir: dir } => {
            let basis = TruncatedBasisSet::example();
            let ext = extend_basis(&basis, shift)?;
            let dir = out_dir(&dir, false)?;
            let mut gram = gram_csv(&async_noma::dof::gram_matrix(&basis));
            gram.push_meta("bandwidth", 0.5);
            gram.push_meta("window", 5);
            match dir {
                Some(d) => {
                    emit(&gram, Some(&d.join("gram.csv")))?;
                    let mut c = ext.coefficients_csv();
                    c.push_meta("shift", shift);
                    emit(&c, Some(&d.join("coefficients.csv")))
                }
                None => emit(&gram, None),
            }
        }
        Command::Constellation { alpha, out } => {
            let (coarse, fine) = example_layers(alpha)?;
            let s = superpose(&coarse, &fine);
            let mut t = s.constellation.to_csv();
            t.push_meta("alpha", alpha);
            t.push_meta("collisions", s.collisions);
            t.push_meta("min_distance", s.constellation.min_distance());
            emit(&t, out.as_deref())
        }
        Command::Fading {
            config,
            methods,
            realizations,
            resolution,
            out_dir: dir,
        } => {
            let cfg = ScenarioFile::load(&config)?;
            let scenario = cfg.scenario()?;
            let mut fc = cfg.fading_config(effective_seed(cfg.seed)?);
            if let Some(r) = realizations {
                fc.realizations = r;
            }
            let res = resolution.unwrap_or(cfg.fading.resolution);
            let dir = out_dir(&dir, methods.len() > 1)?;
            for m in methods {
                let er = ergodic_region(&scenario, m, &fc, res)?;
                let mut t = er.to_csv();
                describe(&mut t, &cfg);
                t.push_meta("resolution", res);
                emit(&t, dir.map(|d| d.join(format!("fading_{m}.csv"))).as_deref())?;
            }
            Ok(())
        }
        Command::Corr {
            pulse,
            delays,
            block_length,
            grid,
            out,
        } => {
            let p = pulse.spec().build()?;
            let g = OverallPulse::new(&p);
            let profile = DelayProfile::new(delays, p.symbol_interval())?;
            let r = build_R(&g, &profile, block_length)?;
            let (hi, lo) = szego_extremes(&generating_matrix(&g, &profile), grid)?;
            let e = r.eigen()?;
            let mut t = r.to_csv();
            t.push_meta("pulse", &pulse.pulse);
            t.push_meta("lambda_max", e.max_value());
            t.push_meta("lambda_min", e.min_value());
            t.push_meta("lambda_max_limit", hi);
            t.push_meta("lambda_min_limit", lo);
            emit(&t, out.as_deref())
        }
    }
}

fn cmd_iui(pulse: &PulseArgs, grid: usize, out: Option<&Path>) -> Result<()> {
    if grid < 2 {
        bail!("--grid needs at least 2 points");
    }
    let p = pulse.spec().build()?;
    let g = OverallPulse::new(&p);
    let half = 0.5 * p.symbol_interval();
    let mut t = CsvTable::new(&["tau", "iui"])
        .with_meta("pulse", &pulse.pulse)
        .with_meta("beta", p.rolloff())
        .with_meta("side_lobes", p.side_lobes());
    for i in 0..grid {
        let tau = half * i as f64 / (grid - 1) as f64;
        t.push_row(vec![tau, g.iui(tau)]);
    }
    emit(&t, out)
}

fn write_cuts(reg: &RateRegion, value: f64, dir: &Path) -> Result<()> {
    let hull = reg.hull()?;
    if hull.dim() != 3 || !hull.is_full_dimensional() {
        bail!("cuts need a full-dimensional three-user region");
    }
    for axis in 0..3 {
        let cut = hull.slice(axis, value)?;
        let names: Vec<String> = (1..=3).filter(|&i| i != axis + 1).map(|i| format!("R{i}")).collect();
        let mut t = CsvTable::new(&[&names[0], &names[1]])
            .with_meta("method", reg.method())
            .with_meta("cut", format!("R{}={value}", axis + 1));
        for v in cut.vertex_coords() {
            t.push_row(v.clone());
        }
        emit(&t, Some(&dir.join(format!("region_{}_cut_R{}.csv", reg.method(), axis + 1))))?;
    }
    Ok(())
}
