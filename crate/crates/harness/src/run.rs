//! Turning a configuration into flows, simulating them and tabulating
//! statistics.

use mflow::cauchy::FreeDiffusion;
use mflow::empirical::{
    em_sde_decomposition, ks_distance_parts, limit_equation_residual, wasserstein1_parts, EmpiricalMeasureProcess,
};
use mflow::flow::{simulate_ensemble, EigenPath, FlowSpec};
use mflow::limits::{mixture_two_weights, LawParts, LimitLaw};
use mflow::linalg::SpectralFunction;
use mflow::poly::Poly;
use mflow::Beta;
use rayon::prelude::*;

use crate::config::{ClassParams, ExperimentConfig};
use crate::error::HarnessResult;
use crate::stats::{mean_and_stderr, median};
use crate::table::{Replica, ResultTable, Stat, MAX_MOMENT, MAX_RESIDUAL_DEGREE};

/// What the simulated spectra are compared against.
#[derive(Clone, Debug, PartialEq)]
pub enum Reference {
    Law(LimitLaw<f64>),
    Free(FreeDiffusion<f64>),
    None,
}

impl Reference {
    /// Atoms and density pieces at time `t`, when known in closed form.
    pub fn parts(&self, t: f64) -> HarnessResult<Option<LawParts<f64>>> {
        Ok(match self {
            Reference::Law(law) if law.has_cdf() => Some(law.at_time(t).parts()?),
            Reference::Free(d) => Some(d.law(t)),
            _ => None,
        })
    }

    /// Moments `m_0..m_kmax` at time `t`.
    pub fn moments(&self, t: f64, k_max: usize) -> HarnessResult<Option<Vec<f64>>> {
        Ok(match self {
            Reference::Law(law) => Some(law.at_time(t).moments(k_max)?.values),
            Reference::Free(d) => {
                let parts = d.law(t);
                Some((0..=k_max).map(|k| parts.expect(|x: f64| x.powi(k as i32))).collect())
            }
            Reference::None => None,
        })
    }
}

/// Everything needed to simulate and assess one `n`.
#[derive(Clone, Debug)]
pub struct Plan {
    pub n: usize,
    pub spec: FlowSpec<f64>,
    pub reference: Reference,
    /// Predicted limit of the negative-side mass.
    pub neg_mass_limit: Option<f64>,
    /// Whether `neg_mass` rows are emitted.
    pub track_neg_mass: bool,
}

impl Plan {
    /// `(g², h², b/n)` of the flow as simulated, the coefficients of the
    /// limit equation its empirical measures are tested against.
    pub fn limit_coefficients(&self) -> (SpectralFunction<f64>, SpectralFunction<f64>, SpectralFunction<f64>) {
        let s = &self.spec;
        (s.g.squared(), s.h.squared(), s.b.clone().scaled(s.drift_scale()))
    }
}

/// Number of initial eigenvalues placed below zero by the
/// `wishart_nonunique` preset, `⌈(n + 1 − α_n)/2⌉` with `α_n = α n`.
pub fn nonunique_negative_count(n: usize, alpha: f64) -> usize {
    let k = ((n as f64 + 1.0 - alpha * n as f64) / 2.0).ceil();
    (k.max(0.0) as usize).min(n)
}

/// The flow and reference of `cfg` at matrix size `n`.
pub fn plan(cfg: &ExperimentConfig, n: usize) -> HarnessResult<Plan> {
    use SpectralFunction as F;
    let nf = n as f64;
    let grid = cfg.t_grid.clone();
    let mk = |g, h, b, beta, initial: Vec<f64>| FlowSpec::new(g, h, b, beta, initial, cfg.dt, grid.clone());
    let mut track_neg_mass = false;
    let mut neg_mass_limit = None;
    let (spec, reference) = match &cfg.params {
        ClassParams::Wigner { a, beta } => {
            let spec = mk(F::Constant(0.5), F::Constant(1.0), F::zero(), *beta, vec![*a; n]);
            let reference = if *a == 0.0 {
                Reference::Law(LimitLaw::Semicircle { t: 0.0, beta: *beta })
            } else {
                Reference::None
            };
            (spec, reference)
        }
        ClassParams::Wishart { alpha, beta } => {
            track_neg_mass = true;
            let spec = mk(
                F::SqrtAbs,
                F::Constant(1.0),
                F::Constant(alpha * nf),
                *beta,
                vec![0.0; n],
            );
            (
                spec,
                Reference::Law(LimitLaw::MarchenkoPastur {
                    alpha: *alpha,
                    t: 0.0,
                    beta: *beta,
                }),
            )
        }
        ClassParams::WishartNonunique { alpha, spacing } => {
            track_neg_mass = true;
            neg_mass_limit = Some(mixture_two_weights(*alpha)?.1);
            let k = nonunique_negative_count(n, *alpha);
            let mut initial: Vec<f64> = (1..=k).rev().map(|i| -(i as f64) * spacing).collect();
            initial.extend((1..=n - k).map(|j| j as f64 * spacing));
            let spec = mk(
                F::SqrtAbs,
                F::Constant(1.0),
                F::Constant(alpha * nf),
                Beta::Real,
                initial,
            );
            (spec, Reference::Law(LimitLaw::MPMixtureTwo { alpha: *alpha, t: 0.0 }))
        }
        ClassParams::Geometric { a, alpha, beta } => {
            let b = F::Affine { a: alpha * nf, b: 0.0 };
            let spec = mk(F::SqrtAbs, F::SqrtAbs, b, *beta, vec![*a; n]);
            let law = LimitLaw::Geometric {
                a: *a,
                alpha: *alpha,
                beta: *beta,
                t: 0.0,
            };
            (spec, Reference::Law(law))
        }
        ClassParams::Jacobi { p, q, a, beta } => {
            let b = F::Affine {
                a: -(p + q) * nf,
                b: p * nf,
            };
            let spec = mk(F::SqrtAbs, F::SqrtAbsOneMinus, b, *beta, vec![*a; n]);
            let law = LimitLaw::Jacobi {
                p: *p,
                q: *q,
                beta: *beta,
                a: *a,
                t: 0.0,
            };
            (spec, Reference::Law(law))
        }
        ClassParams::Free { diffusion, beta } => {
            let (g2, _, b) = diffusion.coefficients();
            // g² = σ/√2 at β = 1 becomes σ/√(2β), keeping β g² h² fixed.
            let c2 = g2.as_constant().expect("constant free coefficients") / (beta.index() as f64).sqrt();
            let c = F::Constant(c2.sqrt());
            let mut spec = mk(c.clone(), c, b, *beta, vec![0.0; n]);
            spec.drift_prescaled = true;
            (spec, Reference::Free(*diffusion))
        }
        ClassParams::Custom(c) => {
            let mut spec = mk(c.g.clone(), c.h.clone(), c.b.clone(), c.beta, vec![c.a; n]);
            spec.drift_prescaled = c.drift_prescaled;
            spec.projection = c.projection;
            spec.frame = c.frame;
            (spec, Reference::None)
        }
    };
    spec.validate()?;
    Ok(Plan {
        n,
        spec,
        reference,
        neg_mass_limit,
        track_neg_mass,
    })
}

/// Plans for every `n`, built (and so validated) before any simulation.
pub fn plans(cfg: &ExperimentConfig) -> HarnessResult<Vec<Plan>> {
    cfg.validate()?;
    cfg.n_list.iter().map(|&n| plan(cfg, n)).collect()
}

/// Reference data shared by all paths of one plan.
struct Targets {
    parts: Vec<Option<LawParts<f64>>>,
    moments: Vec<Option<Vec<f64>>>,
}

impl Targets {
    fn new(plan: &Plan) -> HarnessResult<Self> {
        let grid = &plan.spec.t_grid;
        Ok(Targets {
            parts: grid
                .iter()
                .map(|&t| plan.reference.parts(t))
                .collect::<HarnessResult<_>>()?,
            moments: grid
                .iter()
                .map(|&t| plan.reference.moments(t, MAX_MOMENT))
                .collect::<HarnessResult<_>>()?,
        })
    }
}

/// Statistics of one path: one list per record time plus the
/// final-time extras.
struct PathStats {
    per_time: Vec<Vec<(Stat, f64)>>,
    last: Vec<(Stat, f64)>,
}

fn path_stats(plan: &Plan, targets: &Targets, path: &EigenPath<f64>) -> HarnessResult<PathStats> {
    let proc = EmpiricalMeasureProcess::from_path(path)?;
    let mut per_time = Vec::with_capacity(proc.measures.len());
    for (i, m) in proc.measures.iter().enumerate() {
        let mut row = Vec::new();
        let moments = m.moments(MAX_MOMENT);
        for (k, &v) in moments.iter().enumerate().skip(1) {
            row.push((Stat::Moment(k), v));
        }
        if let Some(parts) = &targets.parts[i] {
            row.push((Stat::Ks, ks_distance_parts(m, parts)));
            row.push((Stat::W1, wasserstein1_parts(m, parts)));
        }
        row.push((Stat::MinEig, m.atoms()[0]));
        row.push((Stat::MaxEig, *m.atoms().last().expect("nonempty")));
        if plan.track_neg_mass {
            row.push((Stat::NegMass, m.negative_mass()));
        }
        per_time.push(row);
    }
    let (g2, h2, b) = plan.limit_coefficients();
    let mut last = Vec::new();
    for k in 1..=MAX_RESIDUAL_DEGREE {
        let f = Poly::monomial(1.0, k);
        let r = limit_equation_residual(&proc, &f, &g2, &h2, &b, plan.spec.beta)?;
        last.push((Stat::Residual(k), r));
    }
    let decomposition = em_sde_decomposition(&proc, &Poly::monomial(1.0, 4), &plan.spec)?;
    last.push((Stat::Correction, decomposition.last().1));
    last.push((Stat::MinStep, path.diagnostics.min_after_start));
    last.push((Stat::Clamps, path.diagnostics.clamp_events as f64));
    Ok(PathStats { per_time, last })
}

/// Simulates every `n` of `cfg` and tabulates path and ensemble statistics.
///
/// All plans are validated first, so a configuration error produces no
/// rows at all. Row order and values do not depend on the thread count.
pub fn run_preset(cfg: &ExperimentConfig) -> HarnessResult<ResultTable> {
    Ok(run_preset_full(cfg)?.table)
}

/// Output of [`run_preset_full`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub table: ResultTable,
    /// Eigenvalues of all replicas at the last record time, per `n`.
    pub final_spectra: Vec<(usize, Vec<f64>)>,
}

/// [`run_preset`] keeping the pooled final spectra for density plots.
pub fn run_preset_full(cfg: &ExperimentConfig) -> HarnessResult<RunOutput> {
    let plans = plans(cfg)?;
    let mut table = ResultTable::default();
    let mut final_spectra = Vec::new();
    for plan in &plans {
        let pooled = run_plan(cfg, plan, &mut table)?;
        final_spectra.push((plan.n, pooled));
    }
    Ok(RunOutput { table, final_spectra })
}

fn run_plan(cfg: &ExperimentConfig, plan: &Plan, table: &mut ResultTable) -> HarnessResult<Vec<f64>> {
    let preset = cfg.preset.name();
    let n = plan.n;
    log::info!("{preset}: n = {n}, {} replicas", cfg.replica_count);
    let targets = Targets::new(plan)?;
    let paths = simulate_ensemble(&plan.spec, cfg.replica_count, cfg.base_seed)?;
    let stats: Vec<PathStats> = paths
        .par_iter()
        .map(|p| path_stats(plan, &targets, p))
        .collect::<HarnessResult<_>>()?;

    let (lo, hi) = paths.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (
            lo.min(p.diagnostics.min_eigenvalue),
            hi.max(p.diagnostics.max_eigenvalue),
        )
    });
    if let Some(w) = plan.spec.growth_warning(lo, hi) {
        log::warn!("{preset}, n = {n}: {w}");
    }

    let grid = &plan.spec.t_grid;
    let t_last = *grid.last().expect("validated grid");
    for (r, s) in stats.iter().enumerate() {
        let replica = Replica::Path(r as u64);
        for (i, row) in s.per_time.iter().enumerate() {
            for &(stat, v) in row {
                table.push(preset, n, replica, grid[i], stat, v);
            }
        }
        for &(stat, v) in &s.last {
            table.push(preset, n, replica, t_last, stat, v);
        }
    }

    for (i, &t) in grid.iter().enumerate() {
        let column = |stat: Stat| -> Vec<f64> {
            stats
                .iter()
                .filter_map(|s| s.per_time[i].iter().find(|(st, _)| *st == stat).map(|p| p.1))
                .collect()
        };
        for k in 1..=MAX_MOMENT {
            let (mean, se) = mean_and_stderr(&column(Stat::Moment(k)));
            table.push(preset, n, Replica::Ensemble, t, Stat::Moment(k), mean);
            table.push(preset, n, Replica::Ensemble, t, Stat::StdErr(k), se);
        }
        if let Some(m) = &targets.moments[i] {
            for k in 1..=MAX_MOMENT {
                table.push(preset, n, Replica::Ensemble, t, Stat::LimitMoment(k), m[k]);
            }
        }
        for (stat, med) in [
            (Stat::Ks, Stat::KsMedian),
            (Stat::W1, Stat::W1Median),
            (Stat::NegMass, Stat::NegMassMedian),
        ] {
            let values = column(stat);
            if !values.is_empty() {
                table.push(preset, n, Replica::Ensemble, t, med, median(&values));
            }
        }
        if let Some(l) = plan.neg_mass_limit {
            table.push(preset, n, Replica::Ensemble, t, Stat::NegMassLimit, l);
        }
    }
    Ok(paths
        .iter()
        .flat_map(|p| p.spectra.last().expect("validated grid").iter().copied())
        .collect())
}

/// Residual of the limit equation along the reference law family itself,
/// each time discretized on `atoms` quantiles, for `f = x^k`,
/// `k = 1..=k_max`. Needs a reference with a CDF.
pub fn law_family_residuals(cfg: &ExperimentConfig, atoms: usize, k_max: usize) -> HarnessResult<Vec<f64>> {
    let plan = plan(cfg, cfg.n_list[0])?;
    let Reference::Law(law) = &plan.reference else {
        return Err(mflow::Error::Unsupported(format!("{} has no limit law family to discretize", cfg.preset)).into());
    };
    let proc = EmpiricalMeasureProcess::from_law_family(law, &cfg.t_grid, atoms)?;
    let (g2, h2, b) = plan.limit_coefficients();
    (1..=k_max)
        .map(|k| {
            Ok(limit_equation_residual(
                &proc,
                &Poly::monomial(1.0, k),
                &g2,
                &h2,
                &b,
                plan.spec.beta,
            )?)
        })
        .collect()
}
