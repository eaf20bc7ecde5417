//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when
//! any criterion fails.
//!
//! Run all with `cargo test -p mflow-harness --test acceptance`, or pick
//! criteria by number: `cargo test -p mflow-harness --test acceptance -- 4 9`.

use std::time::{Duration, Instant};

use num_complex::Complex;
use rand::Rng;

use mflow::cauchy::{
    cauchy_transform, ct_evolution_rhs, free_bm_transform, free_pde_residual, semicircle_transform, stieltjes_invert,
    FreeDiffusion,
};
use mflow::empirical::{limit_equation_residual, EmpiricalMeasureProcess};
use mflow::flow::stream;
use mflow::limits::{
    generic_moment_ode, geometric_moments, mixture_three_weights, mp_mixture_three, mp_mixture_two, mp_moments,
    point_mass_moments, LimitLaw, PolyCoefficients,
};
use mflow::linalg::SpectralFunction;
use mflow::poly::Poly;
use mflow::sympoly::{
    elementary_symmetric, incomplete_relation_residuals, newton_residual, pairwise_drift_identity_residual, power_sums,
};
use mflow::Beta;
use mflow_harness::table::{strip_comments, Stat};
use mflow_harness::{run_preset, sweep_report, ExperimentConfig, ResultTable};

/// A law with its `(g², h², b)` coefficients.
type Family = (
    LimitLaw<f64>,
    SpectralFunction<f64>,
    SpectralFunction<f64>,
    SpectralFunction<f64>,
);

/// Number, name, check and time budget.
type Criterion = (u32, &'static str, fn() -> Verdict, Duration);

/// Outcome of one criterion.
struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

/// Accumulates named checks into one verdict.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.failed.push(what.clone());
        }
        self.notes.push(what);
    }

    fn verdict(self) -> Verdict {
        if self.failed.is_empty() {
            Verdict::new(true, self.notes.join("; "))
        } else {
            Verdict::new(false, format!("failed: {}", self.failed.join("; ")))
        }
    }
}

fn config(text: &str) -> ExperimentConfig {
    text.parse()
        .unwrap_or_else(|e| panic!("acceptance config does not parse: {e}"))
}

fn run(text: &str) -> Result<(ExperimentConfig, ResultTable), String> {
    let cfg = config(text);
    let table = run_preset(&cfg).map_err(|e| e.to_string())?;
    Ok((cfg, table))
}

fn random_spectrum(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

fn coefficient_menu() -> Vec<(SpectralFunction<f64>, SpectralFunction<f64>)> {
    use SpectralFunction as F;
    vec![
        (F::Constant(0.5), F::Constant(1.0)),
        (F::SqrtAbs, F::Constant(1.0)),
        (F::SqrtAbs, F::SqrtAbs),
        (F::SqrtAbs, F::SqrtAbsOneMinus),
        (F::poly(&[0.3, -1.0, 0.5]), F::Affine { a: 2.0, b: -0.7 }),
    ]
}

/// Newton identities and the pairwise drift identity.
fn criterion_1() -> Verdict {
    let mut rng = stream(101, 0);
    let mut worst_newton = 0.0f64;
    let mut worst_pair = 0.0f64;
    let menu = coefficient_menu();
    for case in 0..1000 {
        let n = rng.random_range(1..=20);
        let lambda = random_spectrum(&mut rng, n, -2.0, 2.0);
        let e = elementary_symmetric(&lambda);
        let p = power_sums(&lambda, 8);
        for k in 1..=8 {
            worst_newton = worst_newton.max(newton_residual(&e, &p, k));
        }
        let (g, h) = &menu[case % menu.len()];
        for k in 2..=8 {
            match pairwise_drift_identity_residual(&lambda, g, h, k) {
                Ok(r) => worst_pair = worst_pair.max(r),
                Err(e) => return Verdict::new(false, format!("pairwise identity rejected a spectrum: {e}")),
            }
        }
    }
    let mut c = Checks::default();
    c.check(worst_newton <= 1e-9, format!("Newton max {worst_newton:.2e}"));
    c.check(worst_pair <= 1e-9, format!("pairwise max {worst_pair:.2e}"));
    c.verdict()
}

/// Incomplete elementary symmetric polynomial relations.
fn criterion_2() -> Verdict {
    let mut rng = stream(202, 0);
    let mut worst = [0.0f64; 3];
    for _ in 0..1000 {
        let n = rng.random_range(1..=20);
        let lambda = random_spectrum(&mut rng, n, 0.05, 3.0);
        let r = incomplete_relation_residuals(&lambda);
        for i in 0..3 {
            worst[i] = worst[i].max(r[i]);
        }
    }
    let mut c = Checks::default();
    for (i, w) in worst.iter().enumerate() {
        c.check(*w <= 1e-10, format!("relation {} max {w:.2e}", i + 1));
    }
    c.verdict()
}

fn ode_moments(coeffs: &PolyCoefficients<f64>, m0: &[f64], k_max: usize, t: f64) -> Result<Vec<f64>, String> {
    generic_moment_ode(coeffs, m0, k_max, t, 1e-3)
        .map(|tr| tr.last().values)
        .map_err(|e| e.to_string())
}

/// The moment ODE against closed forms.
fn criterion_3() -> Verdict {
    let mut c = Checks::default();
    let x = || Poly::new(vec![0.0, 1.0]);
    let konst = |v: f64| Poly::constant(v);

    // (a) semicircle: β g² h² = 1/2 gives variance t
    let sc = PolyCoefficients {
        b: Poly::zero(),
        g2: konst(0.25),
        h2: konst(1.0),
        beta: Beta::Complex,
    };
    match ode_moments(&sc, &point_mass_moments(0.0, 8), 8, 1.0) {
        Ok(m) => {
            let want = [1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 14.0];
            let err = m.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            c.check(err <= 1e-6, format!("(a) Catalan err {err:.1e}"));
        }
        Err(e) => c.check(false, format!("(a) {e}")),
    }

    // (b) Wishart moments against the exact rational recursion
    let mut err_b = 0.0f64;
    for (alpha, beta) in [
        (1.0, Beta::Real),
        (1.0, Beta::Complex),
        (2.5, Beta::Complex),
        (0.5, Beta::Real),
    ] {
        let coeffs = PolyCoefficients {
            b: konst(alpha),
            g2: x(),
            h2: konst(1.0),
            beta,
        };
        let exact = match mp_moments(alpha, beta, 1.0, 8) {
            Ok(m) => m.values,
            Err(e) => return Verdict::new(false, format!("(b) {e}")),
        };
        match ode_moments(&coeffs, &point_mass_moments(0.0, 8), 8, 1.0) {
            Ok(m) => {
                for k in 0..=8 {
                    err_b = err_b.max((m[k] - exact[k]).abs() / exact[k].abs().max(1.0));
                }
            }
            Err(e) => c.check(false, format!("(b) {e}")),
        }
        if alpha == 1.0 && beta == Beta::Real {
            let first: Vec<f64> = exact[..5].to_vec();
            c.check(
                first == vec![1.0, 1.0, 2.0, 5.0, 14.0],
                format!("(b) alpha = 1 table {first:?}"),
            );
        }
    }
    c.check(err_b <= 1e-6, format!("(b) MP err {err_b:.1e}"));

    // (c) geometric closed form a^k w_k(tβ) e^{kαt}
    let mut err_c = 0.0f64;
    for (a, alpha, beta) in [
        (1.0, 0.0, Beta::Complex),
        (0.5, 0.7, Beta::Real),
        (2.0, -0.4, Beta::Complex),
    ] {
        let coeffs = PolyCoefficients {
            b: Poly::new(vec![0.0, alpha]),
            g2: x(),
            h2: x(),
            beta,
        };
        for t in [0.25, 0.5, 1.0] {
            let closed = geometric_moments(a, alpha, beta, t, 6).values;
            match ode_moments(&coeffs, &point_mass_moments(a, 6), 6, t) {
                Ok(m) => {
                    for k in 1..=6 {
                        err_c = err_c.max((m[k] - closed[k]).abs() / closed[k].abs());
                    }
                }
                Err(e) => c.check(false, format!("(c) {e}")),
            }
        }
    }
    c.check(err_c <= 1e-6, format!("(c) geometric rel err {err_c:.1e}"));
    c.verdict()
}

/// Wigner convergence.
fn criterion_4() -> Verdict {
    let (cfg, table) = match run("preset = wigner\nn_list = 25, 50, 100\nreplicas = 20\nseed = 4\n") {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e),
    };
    let t = cfg.t_end();
    let mut c = Checks::default();
    let report = match sweep_report(&table, &[Stat::W1]) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e.to_string()),
    };
    let line = report.line(Stat::W1).expect("w1 rows");
    let w100 = line.medians.last().expect("three sizes").1;
    let meds: Vec<String> = line.medians.iter().map(|(n, m)| format!("{n}:{m:.4}")).collect();
    c.check(w100 <= 0.15, format!("median W1 at n=100 {w100:.4}"));
    c.check(
        line.monotone_decreasing,
        format!("medians decreasing [{}]", meds.join(" ")),
    );
    for (k, want) in [(2, 1.0), (4, 2.0)] {
        let m = table.ensemble(100, t, Stat::Moment(k)).unwrap_or(f64::NAN);
        let se = table.ensemble(100, t, Stat::StdErr(k)).unwrap_or(f64::NAN);
        c.check((m - want).abs() <= 3.0 * se, format!("n=100 m{k} = {m:.4} +- {se:.4}"));
    }
    c.verdict()
}

/// Wishart positivity and convergence to the Marchenko–Pastur law.
fn criterion_5() -> Verdict {
    let text = "preset = wishart\nalpha = 2.5\nbeta = 2\nn_list = 25, 50\nreplicas = 20\ndt = 2.5e-4\nt_step = 0.1\nseed = 5\n";
    let (cfg, table) = match run(text) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e),
    };
    let t_end = cfg.t_end();
    let mut c = Checks::default();
    // Recorded times after the start, where X_0 = 0 sits on the boundary.
    let recorded_min = table
        .rows
        .iter()
        .filter(|r| r.n == 50 && r.stat == Stat::MinEig && r.t > 0.0)
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    c.check(
        recorded_min > 0.0,
        format!("n=50 min recorded eigenvalue {recorded_min:.3e}"),
    );
    let w25 = table.ensemble(25, t_end, Stat::W1Median).unwrap_or(f64::NAN);
    let w50 = table.ensemble(50, t_end, Stat::W1Median).unwrap_or(f64::NAN);
    c.check(w50 <= 0.2, format!("median W1 at n=50 {w50:.4}"));
    c.check(w50 < w25, format!("decreasing from n=25 ({w25:.4})"));
    let step_min = table
        .select(50, false, t_end, Stat::MinStep)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    c.notes.push(format!("min over all steps {step_min:.2e}"));
    c.verdict()
}

fn law_family_residual(law: &LimitLaw<f64>, b: f64, k_max: usize) -> Result<f64, String> {
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let proc = EmpiricalMeasureProcess::from_law_family(law, &grid, 400).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for k in 1..=k_max {
        let r = limit_equation_residual(
            &proc,
            &Poly::monomial(1.0, k),
            &SpectralFunction::Abs,
            &SpectralFunction::Constant(1.0),
            &SpectralFunction::Constant(b),
            Beta::Real,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Non-uniqueness mixtures and the signed-mass split of the finite-n flow.
fn criterion_6() -> Verdict {
    let mut c = Checks::default();
    let two = mp_mixture_two(0.5, 0.0).expect("valid mixture");
    match law_family_residual(&two, 0.5, 6) {
        Ok(r) => c.check(r <= 2e-2, format!("two-component residual {r:.2e}")),
        Err(e) => c.check(false, e),
    }
    let three = mp_mixture_three(2.0, 3.0, 0.0).expect("valid mixture");
    let induced = mixture_three_weights(2.0, 3.0).expect("valid weights").induced_alpha;
    match law_family_residual(&three, induced, 6) {
        Ok(r) => c.check(r <= 2e-2, format!("three-component residual {r:.2e}")),
        Err(e) => c.check(false, e),
    }
    match run("preset = wishart_nonunique\nalpha = 0.5\nn_list = 100\nreplicas = 20\nseed = 6\n") {
        Ok((cfg, table)) => {
            let t = cfg.t_end();
            let med = table.ensemble(100, t, Stat::NegMassMedian).unwrap_or(f64::NAN);
            let lim = table.ensemble(100, t, Stat::NegMassLimit).unwrap_or(f64::NAN);
            c.check(
                (med - lim).abs() <= 0.05,
                format!("median negative mass {med:.3} vs {lim}"),
            );
        }
        Err(e) => c.check(false, e),
    }
    c.verdict()
}

/// Geometric class moments and positivity.
fn criterion_7() -> Verdict {
    let text = "preset = geometric\na = 1\nalpha = 0\nbeta = 2\nn_list = 50\nreplicas = 20\nseed = 7\n";
    let (cfg, table) = match run(text) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e),
    };
    let t = cfg.t_end();
    let mut c = Checks::default();
    for k in 1..=4 {
        let m = table.ensemble(50, t, Stat::Moment(k)).unwrap_or(f64::NAN);
        let se = table.ensemble(50, t, Stat::StdErr(k)).unwrap_or(f64::NAN);
        let lim = table.ensemble(50, t, Stat::LimitMoment(k)).unwrap_or(f64::NAN);
        c.check(
            (m - lim).abs() <= 3.0 * se + 0.05 * lim.abs(),
            format!("m{k} = {m:.3} +- {se:.3} vs {lim:.3}"),
        );
    }
    let min_step = table
        .select(50, false, t, Stat::MinStep)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    c.check(min_step > 0.0, format!("min eigenvalue over all steps {min_step:.3e}"));
    c.verdict()
}

/// Jacobi class support and moments.
fn criterion_8() -> Verdict {
    let text = "preset = jacobi\np = 3\nq = 3\nbeta = 2\nn_list = 50\nreplicas = 20\nseed = 8\n";
    let (cfg, table) = match run(text) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e),
    };
    let t = cfg.t_end();
    let mut c = Checks::default();
    let lo = table
        .rows
        .iter()
        .filter(|r| r.stat == Stat::MinEig)
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    let hi = table
        .rows
        .iter()
        .filter(|r| r.stat == Stat::MaxEig)
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    c.check(
        lo >= 0.0 && hi <= 1.0,
        format!("recorded spectrum in [{lo:.4}, {hi:.4}]"),
    );
    let clamps: f64 = table.select(50, false, t, Stat::Clamps).iter().sum();
    c.check(clamps == 0.0, format!("{clamps} clamp events"));
    for k in 1..=2 {
        let m = table.ensemble(50, t, Stat::Moment(k)).unwrap_or(f64::NAN);
        let se = table.ensemble(50, t, Stat::StdErr(k)).unwrap_or(f64::NAN);
        let lim = table.ensemble(50, t, Stat::LimitMoment(k)).unwrap_or(f64::NAN);
        c.check(
            (m - lim).abs() <= 3.0 * se,
            format!("m{k} = {m:.5} +- {se:.5} vs {lim:.5}"),
        );
    }
    c.verdict()
}

/// Cauchy transform layer.
fn criterion_9() -> Verdict {
    let mut c = Checks::default();
    let z_grid: Vec<Complex<f64>> = (0..20)
        .map(|i| Complex::new(-3.0 + 0.3 * i as f64, 0.05 + 0.15 * (i % 7) as f64))
        .collect();
    let law = LimitLaw::Semicircle {
        t: 1.0,
        beta: Beta::Complex,
    };
    let mut err_closed = 0.0f64;
    let mut err_quad = 0.0f64;
    for &z in &z_grid {
        let (Ok(a), Ok(b), Ok(q)) = (
            free_bm_transform(0.0, 1.0, 1.0, z),
            semicircle_transform(0.0, 1.0, z),
            cauchy_transform(&law, z),
        ) else {
            return Verdict::new(false, format!("transform failed at z = {z}"));
        };
        err_closed = err_closed.max((a - b).norm());
        err_quad = err_quad.max((a - q).norm());
    }
    c.check(err_closed <= 1e-10, format!("free BM vs semicircle {err_closed:.1e}"));
    c.check(err_quad <= 1e-10, format!("free BM vs quadrature {err_quad:.1e}"));

    let xs: Vec<f64> = (0..=380).map(|i| -1.9 + 0.01 * i as f64).collect();
    match stieltjes_invert(|z| free_bm_transform(0.0, 1.0, 1.0, z), &xs, &[0.08, 0.04, 0.02]) {
        Ok(dens) => {
            let err = xs
                .iter()
                .zip(&dens)
                .map(|(&x, &d)| (d - (4.0 - x * x).sqrt() / (2.0 * std::f64::consts::PI)).abs())
                .fold(0.0, f64::max);
            c.check(err <= 5e-3, format!("inversion sup err {err:.1e}"));
        }
        Err(e) => c.check(false, format!("inversion: {e}")),
    }

    let zs = [Complex::new(0.0, 1.0), Complex::new(1.0, 1.0), Complex::new(0.0, 2.0)];
    let h = 1e-4;
    let mut worst_ct = 0.0f64;
    for beta in [Beta::Real, Beta::Complex] {
        let families: [Family; 2] = [
            (
                LimitLaw::Semicircle { t: 1.0, beta },
                SpectralFunction::Constant(0.25),
                SpectralFunction::Constant(1.0),
                SpectralFunction::zero(),
            ),
            (
                LimitLaw::MarchenkoPastur {
                    alpha: 2.5,
                    t: 1.0,
                    beta,
                },
                SpectralFunction::identity(),
                SpectralFunction::Constant(1.0),
                SpectralFunction::Constant(2.5),
            ),
        ];
        for (law, g2, h2, b) in &families {
            for &z in &zs {
                let r = (|| -> mflow::Result<f64> {
                    let fd = (cauchy_transform(&law.at_time(1.0 + h), z)?
                        - cauchy_transform(&law.at_time(1.0 - h), z)?)
                        / (2.0 * h);
                    Ok((fd - ct_evolution_rhs(law, z, g2, h2, b, beta)?).norm())
                })();
                match r {
                    Ok(r) => worst_ct = worst_ct.max(r),
                    Err(e) => c.check(false, format!("ct rhs: {e}")),
                }
            }
        }
    }
    c.check(worst_ct <= 1e-4, format!("ct residual {worst_ct:.1e}"));

    let mut worst_free = 0.0f64;
    for case in [
        FreeDiffusion::Bm { theta: 0.3, sigma: 1.0 },
        FreeDiffusion::Ou {
            theta: -0.5,
            sigma: 0.8,
        },
        FreeDiffusion::Ou { theta: 0.4, sigma: 1.2 },
    ] {
        for &z in &zs {
            match free_pde_residual(&case, 1.0, z, 1e-4) {
                Ok(r) => worst_free = worst_free.max(r),
                Err(e) => c.check(false, format!("free pde: {e}")),
            }
        }
    }
    c.check(worst_free <= 1e-4, format!("free pde residual {worst_free:.1e}"));
    c.verdict()
}

/// Rate of the real-field correction term.
fn criterion_10() -> Verdict {
    let (_, table) = match run("preset = wigner_real\nn_list = 25, 50, 100\nreplicas = 20\nseed = 10\n") {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e),
    };
    let report = match sweep_report(&table, &[Stat::Correction]) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e.to_string()),
    };
    let line = report.line(Stat::Correction).expect("correction rows");
    let meds: Vec<String> = line.medians.iter().map(|(n, m)| format!("{n}:{m:.3e}")).collect();
    match line.slope {
        Some(s) => Verdict::new((s + 1.0).abs() <= 0.5, format!("slope {s:.3} [{}]", meds.join(" "))),
        None => Verdict::new(false, format!("no slope [{}]", meds.join(" "))),
    }
}

/// Byte-identical CSV across runs and thread counts, through the CLI.
fn criterion_11() -> Verdict {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return Verdict::new(false, e.to_string()),
    };
    let cfg_path = dir.path().join("repro.cfg");
    let text = "# reproducibility check\npreset = geometric\nn_list = 8, 12\nreplicas = 16\nalpha = 0.2\nseed = 11\n";
    if let Err(e) = std::fs::write(&cfg_path, text) {
        return Verdict::new(false, e.to_string());
    }
    let mut outputs = Vec::new();
    for (label, threads) in [("a", 1), ("b", 1), ("c", 8)] {
        let out = dir.path().join(label);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_mflow"))
            .args(["simulate", "--config"])
            .arg(&cfg_path)
            .arg("--out")
            .arg(&out)
            .args(["--threads", &threads.to_string()])
            .env("RUST_LOG", "warn")
            .stdout(std::process::Stdio::null())
            .status();
        match status {
            Ok(s) if s.success() => {}
            other => return Verdict::new(false, format!("mflow simulate failed: {other:?}")),
        }
        match std::fs::read_to_string(out.join("results.csv")) {
            Ok(s) => outputs.push(s),
            Err(e) => return Verdict::new(false, e.to_string()),
        }
    }
    let stripped: Vec<String> = outputs.iter().map(|s| strip_comments(s)).collect();
    let mut c = Checks::default();
    c.check(outputs.iter().all(|s| s.starts_with("# ")), "timestamp header present");
    c.check(stripped[0] == stripped[1], "two runs identical");
    c.check(stripped[0] == stripped[2], "1 vs 8 threads identical");
    c.notes.push(format!("{} bytes", stripped[0].len()));
    c.verdict()
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "algebraic identities", criterion_1, Duration::from_secs(10)),
        (
            2,
            "incomplete polynomial relations",
            criterion_2,
            Duration::from_secs(10),
        ),
        (3, "moment oracles", criterion_3, Duration::from_secs(30)),
        (4, "Wigner convergence", criterion_4, Duration::from_secs(300)),
        (5, "Wishart positivity", criterion_5, Duration::from_secs(300)),
        (6, "non-uniqueness", criterion_6, Duration::from_secs(300)),
        (7, "geometric class", criterion_7, Duration::from_secs(300)),
        (8, "Jacobi class", criterion_8, Duration::from_secs(300)),
        (9, "Cauchy layer", criterion_9, Duration::from_secs(60)),
        (10, "vanishing-term rate", criterion_10, Duration::from_secs(300)),
        (11, "reproducibility", criterion_11, Duration::from_secs(300)),
    ];
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failures = 0;
    for (id, name, f, budget) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = v.pass && in_time;
        if !pass {
            failures += 1;
        }
        let timing = if in_time {
            format!("{:.1} s", elapsed.as_secs_f64())
        } else {
            format!("{:.1} s, over the {} s budget", elapsed.as_secs_f64(), budget.as_secs())
        };
        println!(
            "criterion {id:>2} {name}: {} ({timing}) {}",
            if pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
