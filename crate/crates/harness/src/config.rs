//! Flat `key = value` experiment configuration.
//!
//! One key per line, `#` starts a comment, blank lines are ignored. Every
//! key has a default, so an empty file with only `preset = ...` is a
//! complete configuration. Unknown and repeated keys are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mflow::cauchy::FreeDiffusion;
use mflow::flow::{Frame, Projection};
use mflow::linalg::SpectralFunction;
use mflow::Beta;

use crate::error::{config_err, HarnessError, HarnessResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Wigner,
    WignerReal,
    Wishart,
    WishartNonunique,
    Geometric,
    Jacobi,
    FreeBm,
    FreeOu,
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Wigner,
        Preset::WignerReal,
        Preset::Wishart,
        Preset::WishartNonunique,
        Preset::Geometric,
        Preset::Jacobi,
        Preset::FreeBm,
        Preset::FreeOu,
        Preset::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Wigner => "wigner",
            Preset::WignerReal => "wigner_real",
            Preset::Wishart => "wishart",
            Preset::WishartNonunique => "wishart_nonunique",
            Preset::Geometric => "geometric",
            Preset::Jacobi => "jacobi",
            Preset::FreeBm => "free_bm",
            Preset::FreeOu => "free_ou",
            Preset::Custom => "custom",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Preset::Wigner => "Dyson Brownian motion, complex Hermitian; semicircle limit",
            Preset::WignerReal => "Dyson Brownian motion, real symmetric; semicircle limit",
            Preset::Wishart => "Wishart process g = sqrt|x|, h = 1, b = alpha n; Marchenko-Pastur limit",
            Preset::WishartNonunique => {
                "real Wishart process started with k* negative eigenvalues; two-component mixture limit"
            }
            Preset::Geometric => "geometric class g = h = sqrt|x|, b = alpha n x from a multiple of the identity",
            Preset::Jacobi => "Jacobi class g = sqrt|x|, h = sqrt|1 - x|, b = n (p - (p + q) x)",
            Preset::FreeBm => "matrix model of free Brownian motion with drift theta",
            Preset::FreeOu => "matrix model of the free Ornstein-Uhlenbeck process",
            Preset::Custom => "user-supplied spectral coefficients; moments and residuals only",
        }
    }

    /// Class keys with their defaults. These may also override the
    /// defaults of [`COMMON_KEYS`].
    pub fn keys(self) -> &'static [KeySpec] {
        match self {
            Preset::Wigner | Preset::WignerReal => WIGNER_KEYS,
            Preset::Wishart => WISHART_KEYS,
            Preset::WishartNonunique => WISHART_NONUNIQUE_KEYS,
            Preset::Geometric => GEOMETRIC_KEYS,
            Preset::Jacobi => JACOBI_KEYS,
            Preset::FreeBm => FREE_BM_KEYS,
            Preset::FreeOu => FREE_OU_KEYS,
            Preset::Custom => CUSTOM_KEYS,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = HarnessError;

    fn from_str(s: &str) -> HarnessResult<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| config_err(format!("unknown preset {s:?}")))
    }
}

/// One documented configuration key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: &'static str,
    pub doc: &'static str,
}

impl KeySpec {
    const fn new(key: &'static str, default: &'static str, doc: &'static str) -> Self {
        KeySpec { key, default, doc }
    }
}

const WIGNER_KEYS: &[KeySpec] = &[KeySpec::new("a", "0", "start X_0 = a I")];
const WISHART_KEYS: &[KeySpec] = &[
    KeySpec::new(
        "alpha",
        "2.5",
        "drift constant, b_n = alpha n; needs alpha n >= beta (n - 1) + 2",
    ),
    KeySpec::new("beta", "2", "1 real, 2 complex"),
    KeySpec::new("dt", "2.5e-4", "time step"),
    KeySpec::new("n_list", "25, 50", "matrix sizes"),
    KeySpec::new("t_step", "0.1", "record spacing"),
];
const WISHART_NONUNIQUE_KEYS: &[KeySpec] = &[
    KeySpec::new(
        "alpha",
        "0.5",
        "limit drift ratio in [0, 1); b_n = alpha n, real symmetric",
    ),
    KeySpec::new("spacing", "1e-3", "gap of the initial eigenvalues around 0"),
    KeySpec::new("n_list", "100", "matrix sizes"),
];
const GEOMETRIC_KEYS: &[KeySpec] = &[
    KeySpec::new("a", "1", "start X_0 = a I, a > 0"),
    KeySpec::new("alpha", "0", "drift b_n = alpha n x"),
    KeySpec::new("beta", "2", "1 real, 2 complex"),
    KeySpec::new("n_list", "50", "matrix sizes"),
];
const JACOBI_KEYS: &[KeySpec] = &[
    KeySpec::new("p", "3", "drift b_n = n (p - (p + q) x)"),
    KeySpec::new("q", "3", "needs beta n min(p, q) >= beta (n - 1) + 2"),
    KeySpec::new("a", "0.5", "start X_0 = a I, a in [0, 1]"),
    KeySpec::new("beta", "2", "1 real, 2 complex"),
    KeySpec::new("n_list", "50", "matrix sizes"),
];
const FREE_BM_KEYS: &[KeySpec] = &[
    KeySpec::new("theta", "0", "drift"),
    KeySpec::new("sigma", "1", "noise level, > 0"),
    KeySpec::new("beta", "2", "1 real, 2 complex"),
];
const FREE_OU_KEYS: &[KeySpec] = &[
    KeySpec::new("theta", "-0.5", "mean reversion rate (drift theta x)"),
    KeySpec::new("sigma", "1", "noise level, > 0"),
    KeySpec::new("beta", "2", "1 real, 2 complex"),
];
const CUSTOM_KEYS: &[KeySpec] = &[
    KeySpec::new("g", "const:0.5", "left coefficient (spectral function)"),
    KeySpec::new("h", "const:1", "right coefficient (spectral function)"),
    KeySpec::new("b", "zero", "drift before the 1/n factor (spectral function)"),
    KeySpec::new("drift_prescaled", "false", "true when b already carries the 1/n factor"),
    KeySpec::new("beta", "2", "1 real, 2 complex"),
    KeySpec::new("a", "0", "start X_0 = a I"),
    KeySpec::new("projection", "none", "none | nonneg | unit_interval"),
    KeySpec::new("frame", "auto", "auto | eigen | matrix"),
];

/// Keys accepted by every preset. `t_grid` (explicit list) and the pair
/// `t_end`/`t_step` are alternatives.
pub const COMMON_KEYS: &[KeySpec] = &[
    KeySpec::new("preset", "", "one of the preset names"),
    KeySpec::new("n_list", "25, 50, 100", "ascending matrix sizes"),
    KeySpec::new("replicas", "20", "paths per n"),
    KeySpec::new("seed", "1", "base seed; replica r uses stream r"),
    KeySpec::new("dt", "1e-3", "Euler-Maruyama step"),
    KeySpec::new("t_end", "1", "last record time"),
    KeySpec::new("t_step", "0.25", "record spacing"),
    KeySpec::new(
        "t_grid",
        "",
        "explicit record times starting at 0 (replaces t_end/t_step)",
    ),
    KeySpec::new("out", "", "output directory"),
];

/// Coefficients of a custom flow.
#[derive(Clone, Debug, PartialEq)]
pub struct CustomFlow {
    pub g: SpectralFunction<f64>,
    pub h: SpectralFunction<f64>,
    pub b: SpectralFunction<f64>,
    pub drift_prescaled: bool,
    pub beta: Beta,
    pub a: f64,
    pub projection: Projection,
    pub frame: Frame,
}

/// Class parameters, one variant per preset family.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassParams {
    Wigner { a: f64, beta: Beta },
    Wishart { alpha: f64, beta: Beta },
    WishartNonunique { alpha: f64, spacing: f64 },
    Geometric { a: f64, alpha: f64, beta: Beta },
    Jacobi { p: f64, q: f64, a: f64, beta: Beta },
    Free { diffusion: FreeDiffusion<f64>, beta: Beta },
    Custom(Box<CustomFlow>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub n_list: Vec<usize>,
    pub replica_count: usize,
    pub base_seed: u64,
    pub dt: f64,
    pub t_grid: Vec<f64>,
    pub params: ClassParams,
    pub out_dir: Option<PathBuf>,
}

/// Raw `key = value` pairs in file order.
fn parse_pairs(text: &str) -> HarnessResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected key = value, got {raw:?}", i + 1)))?;
        let key = k.trim().to_string();
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(config_err(format!("line {}: key {key:?} given twice", i + 1)));
        }
    }
    Ok(map)
}

struct Lookup {
    values: BTreeMap<String, String>,
}

impl Lookup {
    fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    fn parse<V: FromStr>(&self, key: &str) -> HarnessResult<V> {
        let raw = self.raw(key);
        raw.parse()
            .map_err(|_| config_err(format!("{key}: cannot parse {raw:?}")))
    }

    fn float(&self, key: &str) -> HarnessResult<f64> {
        let x: f64 = self.parse(key)?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(config_err(format!("{key} must be finite")))
        }
    }

    fn list<V: FromStr>(&self, key: &str) -> HarnessResult<Vec<V>> {
        self.raw(key)
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| config_err(format!("{key}: cannot parse entry {s:?}")))
            })
            .collect()
    }

    fn beta(&self) -> HarnessResult<Beta> {
        let b: u32 = self.parse("beta")?;
        Beta::from_index(b).ok_or_else(|| config_err(format!("beta must be 1 or 2, got {b}")))
    }

    fn spectral(&self, key: &str) -> HarnessResult<SpectralFunction<f64>> {
        self.raw(key).parse().map_err(|e| config_err(format!("{key}: {e}")))
    }
}

impl FromStr for ExperimentConfig {
    type Err = HarnessError;

    /// Parses and validates.
    fn from_str(text: &str) -> HarnessResult<Self> {
        let given = parse_pairs(text)?;
        let preset: Preset = given
            .get("preset")
            .ok_or_else(|| config_err("missing key preset"))?
            .parse()?;
        let mut values: BTreeMap<String, String> = BTreeMap::new();
        for spec in COMMON_KEYS.iter().chain(preset.keys()) {
            values.insert(spec.key.to_string(), spec.default.to_string());
        }
        for key in given.keys() {
            if !values.contains_key(key) {
                return Err(config_err(format!("unknown key {key:?} for preset {preset}")));
            }
        }
        if given.contains_key("t_grid") && (given.contains_key("t_end") || given.contains_key("t_step")) {
            return Err(config_err("give either t_grid or t_end/t_step, not both"));
        }
        values.extend(given.clone());
        let l = Lookup { values };

        let t_grid = if given.contains_key("t_grid") {
            l.list("t_grid")?
        } else {
            uniform_grid(l.float("t_end")?, l.float("t_step")?)?
        };
        let params = match preset {
            Preset::Wigner | Preset::WignerReal => ClassParams::Wigner {
                a: l.float("a")?,
                beta: if preset == Preset::Wigner {
                    Beta::Complex
                } else {
                    Beta::Real
                },
            },
            Preset::Wishart => ClassParams::Wishart {
                alpha: l.float("alpha")?,
                beta: l.beta()?,
            },
            Preset::WishartNonunique => ClassParams::WishartNonunique {
                alpha: l.float("alpha")?,
                spacing: l.float("spacing")?,
            },
            Preset::Geometric => ClassParams::Geometric {
                a: l.float("a")?,
                alpha: l.float("alpha")?,
                beta: l.beta()?,
            },
            Preset::Jacobi => ClassParams::Jacobi {
                p: l.float("p")?,
                q: l.float("q")?,
                a: l.float("a")?,
                beta: l.beta()?,
            },
            Preset::FreeBm | Preset::FreeOu => {
                let (theta, sigma) = (l.float("theta")?, l.float("sigma")?);
                ClassParams::Free {
                    diffusion: if preset == Preset::FreeBm {
                        FreeDiffusion::Bm { theta, sigma }
                    } else {
                        FreeDiffusion::Ou { theta, sigma }
                    },
                    beta: l.beta()?,
                }
            }
            Preset::Custom => ClassParams::Custom(Box::new(CustomFlow {
                g: l.spectral("g")?,
                h: l.spectral("h")?,
                b: l.spectral("b")?,
                drift_prescaled: l.parse("drift_prescaled")?,
                beta: l.beta()?,
                a: l.float("a")?,
                projection: l.parse("projection")?,
                frame: match l.raw("frame") {
                    "auto" => Frame::Auto,
                    "eigen" => Frame::Eigen,
                    "matrix" => Frame::Matrix,
                    other => return Err(config_err(format!("frame: unknown value {other:?}"))),
                },
            })),
        };
        let out = l.raw("out");
        let cfg = ExperimentConfig {
            preset,
            n_list: l.list("n_list")?,
            replica_count: l.parse("replicas")?,
            base_seed: l.parse("seed")?,
            dt: l.float("dt")?,
            t_grid,
            params,
            out_dir: (!out.is_empty()).then(|| PathBuf::from(out)),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `0, step, 2 step, .., t_end`; `t_end` must be a whole number of steps.
fn uniform_grid(t_end: f64, step: f64) -> HarnessResult<Vec<f64>> {
    if !(t_end > 0.0 && step > 0.0) {
        return Err(config_err("t_end and t_step must be > 0"));
    }
    let count = (t_end / step).round();
    if (count * step - t_end).abs() > 1e-9 * t_end || count > 1e6 {
        return Err(config_err(format!(
            "t_end = {t_end} is not a whole number of t_step = {step}"
        )));
    }
    let count = count as usize;
    Ok((0..=count)
        .map(|i| if i == count { t_end } else { i as f64 * step })
        .collect())
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> HarnessResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        text.parse()
    }

    /// Defaults of `preset`.
    pub fn defaults(preset: Preset) -> Self {
        format!("preset = {preset}").parse().expect("preset defaults are valid")
    }

    pub fn beta(&self) -> Beta {
        match &self.params {
            ClassParams::Wigner { beta, .. }
            | ClassParams::Wishart { beta, .. }
            | ClassParams::Geometric { beta, .. }
            | ClassParams::Jacobi { beta, .. }
            | ClassParams::Free { beta, .. } => *beta,
            ClassParams::WishartNonunique { .. } => Beta::Real,
            ClassParams::Custom(c) => c.beta,
        }
    }

    pub fn t_end(&self) -> f64 {
        *self.t_grid.last().expect("validated grid")
    }

    /// Every constraint that can be checked without simulating.
    pub fn validate(&self) -> HarnessResult<()> {
        if self.n_list.is_empty() || self.n_list[0] == 0 {
            return Err(config_err("n_list must be nonempty with entries >= 1"));
        }
        if self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_err("n_list must be strictly ascending"));
        }
        if self.replica_count == 0 {
            return Err(config_err("replicas must be >= 1"));
        }
        if !(self.dt > 0.0) {
            return Err(config_err("dt must be > 0"));
        }
        if self.t_grid.first() != Some(&0.0)
            || self.t_grid.windows(2).any(|w| !(w[1] > w[0]))
            || self.t_grid.iter().any(|t| !t.is_finite())
        {
            return Err(config_err(
                "record times must start at 0 and be finite and strictly ascending",
            ));
        }
        if self.t_grid.len() < 2 {
            return Err(config_err("need at least one record time after 0"));
        }
        for w in self.t_grid.windows(2) {
            if ((w[1] - w[0]) / self.dt).round() < 1.0 {
                return Err(config_err(format!(
                    "record times {} and {} fall on the same step of dt = {}",
                    w[0], w[1], self.dt
                )));
            }
        }
        let beta = self.beta().index() as f64;
        match &self.params {
            ClassParams::Wigner { a, .. } => finite("a", *a),
            ClassParams::Wishart { alpha, .. } => {
                for &n in &self.n_list {
                    let lhs = alpha * n as f64;
                    let rhs = beta * (n as f64 - 1.0) + 2.0;
                    if !(lhs >= rhs) {
                        return Err(config_err(format!(
                            "Wishart positivity condition alpha n >= beta (n - 1) + 2 fails at n = {n}: \
                             {lhs} < {rhs}"
                        )));
                    }
                }
                Ok(())
            }
            ClassParams::WishartNonunique { alpha, spacing } => {
                if !(*alpha >= 0.0 && *alpha < 1.0) {
                    return Err(config_err(format!("alpha must lie in [0, 1), got {alpha}")));
                }
                if !(*spacing > 0.0 && spacing.is_finite()) {
                    return Err(config_err("spacing must be > 0"));
                }
                if self.n_list[0] < 2 {
                    return Err(config_err("wishart_nonunique needs n >= 2"));
                }
                Ok(())
            }
            ClassParams::Geometric { a, alpha, .. } => {
                finite("alpha", *alpha)?;
                if !(*a > 0.0) {
                    return Err(config_err(format!("geometric start a must be > 0, got {a}")));
                }
                Ok(())
            }
            ClassParams::Jacobi { p, q, a, .. } => {
                if !(*a >= 0.0 && *a <= 1.0) {
                    return Err(config_err(format!("Jacobi start a must lie in [0, 1], got {a}")));
                }
                for &n in &self.n_list {
                    let lhs = beta * n as f64 * p.min(*q);
                    let rhs = beta * (n as f64 - 1.0) + 2.0;
                    if !(lhs >= rhs) {
                        return Err(config_err(format!(
                            "Jacobi condition beta n min(p, q) >= beta (n - 1) + 2 fails at n = {n}: \
                             {lhs} < {rhs}"
                        )));
                    }
                }
                Ok(())
            }
            ClassParams::Free { diffusion, .. } => {
                let (FreeDiffusion::Bm { theta, sigma } | FreeDiffusion::Ou { theta, sigma }) = *diffusion;
                finite("theta", theta)?;
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(config_err(format!("sigma must be > 0, got {sigma}")));
                }
                Ok(())
            }
            ClassParams::Custom(c) => {
                finite("a", c.a)?;
                if !c.projection.contains(c.a) {
                    return Err(config_err(format!(
                        "start a = {} lies outside the projection domain",
                        c.a
                    )));
                }
                Ok(())
            }
        }
    }
}

fn finite(key: &str, x: f64) -> HarnessResult<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(config_err(format!("{key} must be finite")))
    }
}
