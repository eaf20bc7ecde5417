//! Euler–Maruyama integration of the scaled matrix flow
//!
//! `dX = g(X) dW h(X) + h(X) dW* g(X) + (1/n) b(X) dt`, `W^{(n)} = n^{-1/2} W`,
//!
//! and ensembles of independent replicas with per-replica random streams.

mod noise;
mod step;

pub use noise::{sample_noise, stream, NoiseIncrement, Stream};
pub use step::{euler_step, StepOutcome};

use rayon::prelude::*;

use crate::error::{validation, Error, Result};
use crate::linalg::{map_spectrum, Mat, SpectralFunction};
use crate::scalar::{Beta, Real};
use step::{eigen_frame_step, FrameCoefficients, MatrixFrameState};

/// Optional clamp of the spectrum after each step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Projection {
    #[default]
    None,
    NonNeg,
    UnitInterval,
}

impl std::str::FromStr for Projection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(Projection::None),
            "nonneg" => Ok(Projection::NonNeg),
            "unit_interval" => Ok(Projection::UnitInterval),
            other => Err(validation(format!("unknown projection {other:?}"))),
        }
    }
}

/// Integrator form; both produce the same law for the spectrum path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Frame {
    /// Matrix frame when `g`, `h` are constant, `b` is affine and there is
    /// no projection; eigen frame otherwise.
    #[default]
    Auto,
    Eigen,
    Matrix,
}

/// One scaled matrix flow at fixed `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSpec<T> {
    pub g: SpectralFunction<T>,
    pub h: SpectralFunction<T>,
    pub b: SpectralFunction<T>,
    pub beta: Beta,
    pub n: usize,
    /// `b` already carries the `1/n` factor.
    pub drift_prescaled: bool,
    pub dt: T,
    /// Record times, ascending from 0. Time `t` is recorded after
    /// `round(t / dt)` steps.
    pub t_grid: Vec<T>,
    /// `X_0 = diag(initial_spectrum)`.
    pub initial_spectrum: Vec<T>,
    pub projection: Projection,
    /// `false` drops the `n^{-1/2}` noise factor (the unscaled equation).
    pub scaled_noise: bool,
    pub frame: Frame,
}

impl<T: Real> FlowSpec<T> {
    pub fn new(
        g: SpectralFunction<T>,
        h: SpectralFunction<T>,
        b: SpectralFunction<T>,
        beta: Beta,
        initial_spectrum: Vec<T>,
        dt: T,
        t_grid: Vec<T>,
    ) -> Self {
        FlowSpec {
            g,
            h,
            b,
            beta,
            n: initial_spectrum.len(),
            drift_prescaled: false,
            dt,
            t_grid,
            initial_spectrum,
            projection: Projection::None,
            scaled_noise: true,
            frame: Frame::Auto,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.initial_spectrum.len() != self.n {
            return Err(validation(format!(
                "initial spectrum has {} entries for n = {}",
                self.initial_spectrum.len(),
                self.n
            )));
        }
        if !(self.dt > T::zero() && self.dt.is_finite()) {
            return Err(validation(format!("dt must be > 0, got {}", self.dt)));
        }
        match self.t_grid.first() {
            Some(t0) if *t0 == T::zero() => {}
            _ => return Err(validation("t_grid must start at 0")),
        }
        if self.t_grid.windows(2).any(|w| !(w[1] > w[0])) || self.t_grid.iter().any(|t| !t.is_finite()) {
            return Err(validation("t_grid must be finite and strictly ascending"));
        }
        if self.initial_spectrum.iter().any(|x| !x.is_finite()) {
            return Err(validation("initial spectrum must be finite"));
        }
        if self.initial_spectrum.iter().any(|&x| !self.projection.contains(x)) {
            return Err(validation(format!(
                "initial spectrum lies outside the {:?} projection domain",
                self.projection
            )));
        }
        if self.frame == Frame::Matrix && self.matrix_frame_coefficients().is_none() {
            return Err(validation(
                "matrix frame needs constant g and h, affine b and no projection",
            ));
        }
        Ok(())
    }

    /// Factor multiplying `b` in the drift: `1/n` unless prescaled.
    pub fn drift_scale(&self) -> T {
        if self.drift_prescaled {
            T::one()
        } else {
            T::one() / T::from_usize_lossy(self.n)
        }
    }

    fn noise_scale(&self) -> T {
        if self.scaled_noise {
            T::one() / T::from_usize_lossy(self.n).sqrt()
        } else {
            T::one()
        }
    }

    /// Step counts of the record times.
    pub fn record_steps(&self) -> Vec<usize> {
        self.t_grid
            .iter()
            .map(|&t| (t / self.dt).round().to_usize().unwrap_or(0))
            .collect()
    }

    /// `(g h, b0, b1)` when the matrix frame applies.
    fn matrix_frame_coefficients(&self) -> Option<(T, T, T)> {
        if self.projection != Projection::None {
            return None;
        }
        let g = self.g.as_constant()?;
        let h = self.h.as_constant()?;
        let b = self.b.as_polynomial()?;
        if b.degree().unwrap_or(0) > 1 {
            return None;
        }
        Some((g * h, b.coeff(0), b.coeff(1)))
    }

    /// Reports when `(g² + h²)(x) / (1 + |x|)` grows more than fourfold
    /// between the simulated range and the range widened by a hundred
    /// spans on each side. Under the growth bound `g² + h² ≤ K(1 + |x|)`
    /// the ratio stays below `K`; a quadratic `g²` multiplies it by
    /// roughly a hundred.
    pub fn growth_warning(&self, lo: T, hi: T) -> Option<String> {
        let ratio = |a: T, b: T| {
            (0..=64)
                .map(|i| {
                    let x = a + (b - a) * T::from_usize_lossy(i) / T::lit(64.0);
                    let gx = self.g.eval(x);
                    let hx = self.h.eval(x);
                    (gx * gx + hx * hx) / (T::one() + x.abs())
                })
                .fold(T::zero(), T::max)
        };
        let span = (hi - lo).abs().max(T::one());
        let near = ratio(lo, hi);
        let wide = T::lit(100.0) * span;
        let far = ratio(lo - wide, hi + wide);
        if far > T::lit(4.0) * near + T::lit(1e-12) {
            Some(format!(
                "(g^2 + h^2)/(1 + |x|) rises from {near:e} on [{lo}, {hi}] to {far:e} on the widened range; \
                 the linear growth condition may fail"
            ))
        } else {
            None
        }
    }

    fn use_matrix_frame(&self) -> bool {
        match self.frame {
            Frame::Auto | Frame::Matrix => self.matrix_frame_coefficients().is_some(),
            Frame::Eigen => false,
        }
    }
}

/// Extremes and domain events along a path.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PathDiagnostics<T> {
    pub min_eigenvalue: T,
    pub max_eigenvalue: T,
    /// Minimum over the states after the initial one (the whole path when
    /// no step was taken).
    pub min_after_start: T,
    /// First time the spectrum left the projection domain before clamping.
    pub first_exit: Option<T>,
    pub clamp_events: usize,
    /// `true` when extremes were tracked at every step, `false` when only
    /// at record times (matrix frame).
    pub every_step: bool,
}

/// Sorted spectra at the record times.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPath<T> {
    pub t_grid: Vec<T>,
    pub spectra: Vec<Vec<T>>,
    pub diagnostics: PathDiagnostics<T>,
}

struct Tracker<T> {
    diag: PathDiagnostics<T>,
}

impl<T: Real> Tracker<T> {
    fn new(initial: &[T], every_step: bool) -> Self {
        let lo = initial.iter().copied().fold(T::infinity(), T::min);
        let hi = initial.iter().copied().fold(T::neg_infinity(), T::max);
        Tracker {
            diag: PathDiagnostics {
                min_eigenvalue: lo,
                max_eigenvalue: hi,
                min_after_start: T::infinity(),
                first_exit: None,
                clamp_events: 0,
                every_step,
            },
        }
    }

    fn observe(&mut self, spectrum: &[T]) {
        for &x in spectrum {
            self.diag.min_eigenvalue = self.diag.min_eigenvalue.min(x);
            self.diag.max_eigenvalue = self.diag.max_eigenvalue.max(x);
            self.diag.min_after_start = self.diag.min_after_start.min(x);
        }
    }

    fn finish(mut self) -> PathDiagnostics<T> {
        if self.diag.min_after_start == T::infinity() {
            self.diag.min_after_start = self.diag.min_eigenvalue;
        }
        self.diag
    }
}

fn check_finite<T: Real>(spectrum: &[T], time: T) -> Result<()> {
    let limit = T::max_value().sqrt();
    if let Some(x) = spectrum.iter().find(|x| !(x.abs() < limit)) {
        return Err(Error::Explosion {
            time: time.to_f64_lossy(),
            detail: format!("eigenvalue {x:e}"),
        });
    }
    Ok(())
}

/// Simulates one path from `stream(seed, 0)`.
pub fn simulate_path<T: Real>(spec: &FlowSpec<T>, seed: u64) -> Result<EigenPath<T>> {
    simulate_path_with(spec, &mut stream(seed, 0))
}

/// Simulates one path, drawing noise from `rng`.
pub fn simulate_path_with<T: Real>(spec: &FlowSpec<T>, rng: &mut Stream) -> Result<EigenPath<T>> {
    spec.validate()?;
    let record = spec.record_steps();
    let total = *record.last().expect("validated grid");
    let drift_dt = spec.drift_scale() * spec.dt;
    let scale = spec.noise_scale();
    let mut initial = spec.initial_spectrum.clone();
    initial.sort_by(|a, b| a.partial_cmp(b).expect("finite spectrum"));

    let mut spectra = Vec::with_capacity(record.len());
    let mut next_record = 0;
    let mut push_records = |step: usize, spectrum: &[T], spectra: &mut Vec<Vec<T>>| {
        while next_record < record.len() && record[next_record] == step {
            spectra.push(spectrum.to_vec());
            next_record += 1;
        }
    };

    if let (true, Some((gh, b0, b1))) = (spec.use_matrix_frame(), spec.matrix_frame_coefficients()) {
        let mut tracker = Tracker::new(&initial, false);
        let mut state = match spec.beta {
            Beta::Real => MatrixFrameState::Real(Mat::from_real_diag(&initial)),
            Beta::Complex => MatrixFrameState::Complex(Mat::from_real_diag(&initial)),
        };
        push_records(0, &initial, &mut spectra);
        for step in 1..=total {
            let z = noise::sample_scaled(spec.n, spec.beta, spec.dt, scale, rng);
            state.step(gh, b0, b1, drift_dt, &z)?;
            if record.contains(&step) || step == total {
                let t = T::from_usize_lossy(step) * spec.dt;
                if !state.is_finite() {
                    return Err(Error::Explosion {
                        time: t.to_f64_lossy(),
                        detail: "non-finite matrix entry".into(),
                    });
                }
                let spectrum = state.spectrum()?;
                check_finite(&spectrum, t)?;
                tracker.observe(&spectrum);
                push_records(step, &spectrum, &mut spectra);
            }
        }
        return Ok(EigenPath {
            t_grid: spec.t_grid.clone(),
            spectra,
            diagnostics: tracker.finish(),
        });
    }

    let mut tracker = Tracker::new(&initial, true);
    let mut lambda = initial;
    push_records(0, &lambda, &mut spectra);
    for step in 1..=total {
        let t = T::from_usize_lossy(step) * spec.dt;
        let coeffs = FrameCoefficients {
            g: map_spectrum(&spec.g, &lambda)?,
            h: map_spectrum(&spec.h, &lambda)?,
            b: map_spectrum(&spec.b, &lambda)?,
        };
        let z = noise::sample_scaled(spec.n, spec.beta, spec.dt, scale, rng);
        lambda = eigen_frame_step(&lambda, &coeffs, drift_dt, &z)?;
        check_finite(&lambda, t)?;
        if spec.projection != Projection::None {
            let outside = lambda.iter().filter(|&&x| !spec.projection.contains(x)).count();
            if outside > 0 {
                tracker.diag.first_exit.get_or_insert(t);
                tracker.diag.clamp_events += outside;
                for x in &mut lambda {
                    *x = spec.projection.clamp(*x);
                }
            }
        }
        tracker.observe(&lambda);
        push_records(step, &lambda, &mut spectra);
    }
    Ok(EigenPath {
        t_grid: spec.t_grid.clone(),
        spectra,
        diagnostics: tracker.finish(),
    })
}

/// `replica_count` paths; replica `r` uses `stream(base_seed, r)`. The
/// output does not depend on the rayon pool size.
pub fn simulate_ensemble<T: Real>(
    spec: &FlowSpec<T>,
    replica_count: usize,
    base_seed: u64,
) -> Result<Vec<EigenPath<T>>> {
    if replica_count == 0 {
        return Err(validation("replica_count must be >= 1"));
    }
    spec.validate()?;
    let results: Vec<Result<EigenPath<T>>> = (0..replica_count as u64)
        .into_par_iter()
        .map(|r| simulate_path_with(spec, &mut stream(base_seed, r)))
        .collect();
    results
        .into_iter()
        .enumerate()
        .map(|(r, res)| {
            res.map_err(|e| Error::Replica {
                replica: r as u64,
                source: Box::new(e),
            })
        })
        .collect()
}
