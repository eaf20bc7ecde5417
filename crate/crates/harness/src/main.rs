use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;

use mflow::cauchy::{cauchy_transform, stieltjes_invert};
use mflow_harness::config::COMMON_KEYS;
use mflow_harness::error::{HarnessError, HarnessResult};
use mflow_harness::plot::{density_curve, histogram, write_dat};
use mflow_harness::run::{law_family_residuals, plan};
use mflow_harness::sweep::SWEEP_STATS;
use mflow_harness::table::{format_value, Replica, ResultTable, Stat, MAX_MOMENT};
use mflow_harness::{run_preset, run_preset_full, sweep_report, ExperimentConfig, Preset};

#[derive(Parser)]
#[command(
    name = "mflow",
    version,
    about = "Simulate spectral matrix flows and compare them with their limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment configuration (flat key = value file).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the `out` key.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed; overrides the `seed` key.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (speed only; results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Clone)]
struct WithInput {
    #[command(flatten)]
    common: Common,
    /// Read an existing results CSV instead of simulating.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every n and write results.csv plus plot data.
    Simulate(Common),
    /// Reference moments along the record times, without simulating.
    Moments(Common),
    /// Ensemble moments and distances against the reference at the last time.
    Compare(WithInput),
    /// Per-n medians of W1 and KS with fitted log-log slopes.
    Sweep(WithInput),
    /// Recover the reference density from its Cauchy transform.
    Invert {
        #[command(flatten)]
        common: Common,
        /// Smoothing widths, strictly descending.
        #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02")]
        eps: Vec<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Limit-equation residuals of x^k along the reference law family.
    Residual {
        #[command(flatten)]
        common: Common,
        /// Quantile atoms per time.
        #[arg(long, default_value_t = 400)]
        atoms: usize,
        /// Highest monomial degree.
        #[arg(long, default_value_t = 6)]
        k_max: usize,
    },
    /// List presets and their configuration keys.
    Presets,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> HarnessResult<()> {
    match command {
        Command::Simulate(c) => simulate(&c),
        Command::Moments(c) => moments(&c),
        Command::Compare(w) => compare(&w),
        Command::Sweep(w) => sweep(&w),
        Command::Invert { common, eps, points } => invert(&common, &eps, points),
        Command::Residual { common, atoms, k_max } => residual(&common, atoms, k_max),
        // A closed pipe (`mflow presets | head`) is not an error.
        Command::Presets => match presets() {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(HarnessError::io(Path::new("<stdout>"), e)),
            _ => Ok(()),
        },
    }
}

/// Loads the config, applies flag overrides and sizes the thread pool.
fn setup(c: &Common) -> HarnessResult<(ExperimentConfig, PathBuf)> {
    let mut cfg = ExperimentConfig::from_file(&c.config)?;
    if let Some(s) = c.seed {
        cfg.base_seed = s;
    }
    if let Some(t) = c.threads {
        if t == 0 {
            return Err(HarnessError::Config("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    }
    let out = c
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("mflow-out"));
    Ok((cfg, out))
}

fn ensure_dir(dir: &Path) -> HarnessResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

fn timestamp_comment(cfg: &ExperimentConfig) -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!(
        "mflow {} preset={} written_unix={secs}",
        env!("CARGO_PKG_VERSION"),
        cfg.preset
    )
}

fn write_table(path: &Path, table: &ResultTable, comment: &str) -> HarnessResult<()> {
    std::fs::write(path, table.to_csv_string(Some(comment))).map_err(|e| HarnessError::io(path, e))
}

fn simulate(c: &Common) -> HarnessResult<()> {
    let (cfg, out) = setup(c)?;
    let run = run_preset_full(&cfg)?;
    ensure_dir(&out)?;
    write_table(&out.join("results.csv"), &run.table, &timestamp_comment(&cfg))?;

    let t_end = cfg.t_end();
    for (n, pooled) in &run.final_spectra {
        write_dat(
            &out.join(format!("spectrum_n{n}.dat")),
            ("x", "density"),
            &histogram(pooled, 40),
        )?;
        let m2: Vec<(f64, f64)> = cfg
            .t_grid
            .iter()
            .filter_map(|&t| run.table.ensemble(*n, t, Stat::Moment(2)).map(|v| (t, v)))
            .collect();
        write_dat(&out.join(format!("m2_vs_t_n{n}.dat")), ("t", "m2"), &m2)?;
    }
    let reference = plan(&cfg, cfg.n_list[0])?.reference;
    if let Some(parts) = reference.parts(t_end)? {
        write_dat(
            &out.join("limit_density.dat"),
            ("x", "density"),
            &density_curve(&parts, 400),
        )?;
    }
    let w1: Vec<(f64, f64)> = cfg
        .n_list
        .iter()
        .filter_map(|&n| run.table.ensemble(n, t_end, Stat::W1Median).map(|v| (n as f64, v)))
        .collect();
    if w1.len() >= 2 {
        write_dat(&out.join("w1_vs_n.dat"), ("n", "w1_median"), &w1)?;
    }
    print_summary(&run.table, t_end);
    println!("wrote {}", out.display());
    Ok(())
}

fn print_summary(table: &ResultTable, t: f64) {
    for n in table.n_values() {
        let get = |s| table.ensemble(n, t, s).map_or("-".to_string(), |v| format!("{v:.5}"));
        println!(
            "n = {n:>4}  t = {t}  m2 = {} (limit {})  w1_med = {}  ks_med = {}",
            get(Stat::Moment(2)),
            get(Stat::LimitMoment(2)),
            get(Stat::W1Median),
            get(Stat::KsMedian)
        );
    }
}

fn moments(c: &Common) -> HarnessResult<()> {
    let (cfg, out) = setup(c)?;
    let reference = plan(&cfg, cfg.n_list[0])?.reference;
    let mut table = ResultTable::default();
    for &t in &cfg.t_grid {
        let m = reference.moments(t, MAX_MOMENT)?.ok_or_else(|| {
            HarnessError::Core(mflow::Error::Unsupported(format!(
                "{} has no reference moments",
                cfg.preset
            )))
        })?;
        println!(
            "t = {t}: {}",
            m[1..].iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" ")
        );
        for (k, &v) in m.iter().enumerate().skip(1) {
            table.push(cfg.preset.name(), 0, Replica::Ensemble, t, Stat::LimitMoment(k), v);
        }
    }
    ensure_dir(&out)?;
    write_table(&out.join("moments.csv"), &table, &timestamp_comment(&cfg))
}

fn load_or_run(w: &WithInput) -> HarnessResult<(ExperimentConfig, PathBuf, ResultTable)> {
    let (cfg, out) = setup(&w.common)?;
    let table = match &w.input {
        Some(path) => {
            let f = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
            ResultTable::read_csv(std::io::BufReader::new(f))?
        }
        None => run_preset(&cfg)?,
    };
    Ok((cfg, out, table))
}

fn compare(w: &WithInput) -> HarnessResult<()> {
    let (_, _, table) = load_or_run(w)?;
    let t = table
        .t_last()
        .ok_or_else(|| HarnessError::Parse("empty results".into()))?;
    for n in table.n_values() {
        println!("n = {n}, t = {t}");
        for k in 1..=4 {
            let (Some(m), Some(se)) = (
                table.ensemble(n, t, Stat::Moment(k)),
                table.ensemble(n, t, Stat::StdErr(k)),
            ) else {
                continue;
            };
            match table.ensemble(n, t, Stat::LimitMoment(k)) {
                Some(lim) => {
                    let z = if se > 0.0 { (m - lim) / se } else { f64::NAN };
                    println!("  m{k} = {m:.6} +- {se:.6}  limit {lim:.6}  z = {z:.2}");
                }
                None => println!("  m{k} = {m:.6} +- {se:.6}"),
            }
        }
        for s in [Stat::W1Median, Stat::KsMedian, Stat::NegMassMedian, Stat::NegMassLimit] {
            if let Some(v) = table.ensemble(n, t, s) {
                println!("  {s} = {v:.6}");
            }
        }
    }
    Ok(())
}

fn sweep(w: &WithInput) -> HarnessResult<()> {
    let (_, out, table) = load_or_run(w)?;
    let report = sweep_report(&table, &SWEEP_STATS)?;
    ensure_dir(&out)?;
    for line in &report.lines {
        let slope = line.slope.map_or("-".to_string(), |s| format!("{s:.3}"));
        println!(
            "{} at t = {}: slope {slope}, monotone decreasing: {}",
            line.stat, report.t, line.monotone_decreasing
        );
        for (n, m) in &line.medians {
            println!("  n = {n:>4}  median {m:.6}");
        }
        let pts: Vec<(f64, f64)> = line.medians.iter().map(|&(n, m)| (n as f64, m)).collect();
        write_dat(&out.join(format!("sweep_{}.dat", line.stat)), ("n", "median"), &pts)?;
    }
    Ok(())
}

fn invert(c: &Common, eps: &[f64], points: usize) -> HarnessResult<()> {
    let (cfg, out) = setup(c)?;
    let t = cfg.t_end();
    let reference = plan(&cfg, cfg.n_list[0])?.reference;
    let parts = reference.parts(t)?.ok_or_else(|| {
        HarnessError::Core(mflow::Error::Unsupported(format!(
            "{} has no closed-form density",
            cfg.preset
        )))
    })?;
    let (lo, hi) = parts.support();
    if points < 2 || hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Err(HarnessError::Config(
            "need at least two points and a nondegenerate support".into(),
        ));
    }
    // Stay off the edges, where the density is not smooth.
    let pad = 0.025 * (hi - lo);
    let xs: Vec<f64> = (0..points)
        .map(|i| lo + pad + (hi - lo - 2.0 * pad) * i as f64 / (points - 1) as f64)
        .collect();
    let recovered = stieltjes_invert(|z: Complex<f64>| cauchy_transform(&parts, z), &xs, eps)?;
    let err = xs
        .iter()
        .zip(&recovered)
        .map(|(&x, &r)| (r - parts.density(x)).abs())
        .fold(0.0, f64::max);
    ensure_dir(&out)?;
    let pts: Vec<(f64, f64)> = xs.iter().copied().zip(recovered).collect();
    write_dat(&out.join("inversion.dat"), ("x", "density"), &pts)?;
    write_dat(
        &out.join("limit_density.dat"),
        ("x", "density"),
        &density_curve(&parts, 400),
    )?;
    println!("t = {t}: sup |recovered - density| = {}", format_value(err));
    Ok(())
}

fn residual(c: &Common, atoms: usize, k_max: usize) -> HarnessResult<()> {
    let (cfg, _) = setup(c)?;
    let r = law_family_residuals(&cfg, atoms, k_max)?;
    for (k, v) in r.iter().enumerate() {
        println!(
            "f = x^{}: max residual on [0, {}] = {}",
            k + 1,
            cfg.t_end(),
            format_value(*v)
        );
    }
    Ok(())
}

fn presets() -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    writeln!(out, "common keys:")?;
    for k in COMMON_KEYS {
        writeln!(
            out,
            "  {:<16} default {:<14} {}",
            k.key,
            format!("{:?}", k.default),
            k.doc
        )?;
    }
    for p in Preset::ALL {
        writeln!(out, "\n{p}: {}", p.summary())?;
        for k in p.keys() {
            writeln!(
                out,
                "  {:<16} default {:<14} {}",
                k.key,
                format!("{:?}", k.default),
                k.doc
            )?;
        }
    }
    Ok(())
}
