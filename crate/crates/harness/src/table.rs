//! Result rows, the statistic vocabulary and the CSV schema.
//!
//! Columns are `preset,n,replica,t,stat,value`. Numbers are written with
//! 17 significant digits, which round-trips every `f64`. An optional first
//! line starting with `#` carries a timestamp and is ignored on reading.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{HarnessError, HarnessResult};

/// Highest moment order reported.
pub const MAX_MOMENT: usize = 8;
/// Highest monomial degree of the residual statistics.
pub const MAX_RESIDUAL_DEGREE: usize = 6;

pub const CSV_HEADER: &str = "preset,n,replica,t,stat,value";

/// The closed statistic vocabulary.
///
/// Per path (`replica` = index):
/// `m1..m8` moments, `ks` and `w1` distances to the reference law,
/// `min_eig`/`max_eig` spectrum extremes at the record time, `neg_mass`
/// mass on `(−∞, 0)`; at the last record time only: `res1..res6`
/// limit-equation residuals of `x^k` over the whole path, `corr` the
/// accumulated `(2−β)/(2n)` correction term for `x^4`, `min_step` the
/// smallest eigenvalue over every simulated step, `clamps` projection
/// events.
///
/// Per ensemble (`replica` = `ens`): `m1..m8` means, `se1..se8` standard
/// errors, `lim1..lim8` reference moments, `ks_med`, `w1_med`,
/// `neg_mass_med` medians and `neg_mass_lim` the predicted negative mass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stat {
    Moment(usize),
    Ks,
    W1,
    MinEig,
    MaxEig,
    NegMass,
    Residual(usize),
    Correction,
    MinStep,
    Clamps,
    StdErr(usize),
    LimitMoment(usize),
    KsMedian,
    W1Median,
    NegMassMedian,
    NegMassLimit,
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stat::Moment(k) => write!(f, "m{k}"),
            Stat::Ks => f.write_str("ks"),
            Stat::W1 => f.write_str("w1"),
            Stat::MinEig => f.write_str("min_eig"),
            Stat::MaxEig => f.write_str("max_eig"),
            Stat::NegMass => f.write_str("neg_mass"),
            Stat::Residual(k) => write!(f, "res{k}"),
            Stat::Correction => f.write_str("corr"),
            Stat::MinStep => f.write_str("min_step"),
            Stat::Clamps => f.write_str("clamps"),
            Stat::StdErr(k) => write!(f, "se{k}"),
            Stat::LimitMoment(k) => write!(f, "lim{k}"),
            Stat::KsMedian => f.write_str("ks_med"),
            Stat::W1Median => f.write_str("w1_med"),
            Stat::NegMassMedian => f.write_str("neg_mass_med"),
            Stat::NegMassLimit => f.write_str("neg_mass_lim"),
        }
    }
}

impl FromStr for Stat {
    type Err = HarnessError;

    fn from_str(s: &str) -> HarnessResult<Self> {
        let fixed = [
            Stat::Ks,
            Stat::W1,
            Stat::MinEig,
            Stat::MaxEig,
            Stat::NegMass,
            Stat::Correction,
            Stat::MinStep,
            Stat::Clamps,
            Stat::KsMedian,
            Stat::W1Median,
            Stat::NegMassMedian,
            Stat::NegMassLimit,
        ];
        if let Some(st) = fixed.into_iter().find(|st| st.to_string() == s) {
            return Ok(st);
        }
        let indexed = |prefix: &str, max: usize| {
            s.strip_prefix(prefix)
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|k| (1..=max).contains(k))
        };
        for (prefix, max, make) in [
            ("m", MAX_MOMENT, Stat::Moment as fn(usize) -> Stat),
            ("se", MAX_MOMENT, Stat::StdErr),
            ("lim", MAX_MOMENT, Stat::LimitMoment),
            ("res", MAX_RESIDUAL_DEGREE, Stat::Residual),
        ] {
            if let Some(k) = indexed(prefix, max) {
                return Ok(make(k));
            }
        }
        Err(HarnessError::Parse(format!("unknown statistic {s:?}")))
    }
}

/// Path index or the ensemble aggregate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Replica {
    Path(u64),
    Ensemble,
}

impl fmt::Display for Replica {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Replica::Path(r) => write!(f, "{r}"),
            Replica::Ensemble => f.write_str("ens"),
        }
    }
}

impl FromStr for Replica {
    type Err = HarnessError;

    fn from_str(s: &str) -> HarnessResult<Self> {
        if s == "ens" {
            return Ok(Replica::Ensemble);
        }
        s.parse()
            .map(Replica::Path)
            .map_err(|_| HarnessError::Parse(format!("bad replica field {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub preset: String,
    /// Matrix size; 0 marks rows that do not depend on `n`.
    pub n: usize,
    pub replica: Replica,
    pub t: f64,
    pub stat: Stat,
    pub value: f64,
}

/// Rows in output order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

/// 17 significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

impl ResultTable {
    pub fn push(&mut self, preset: &str, n: usize, replica: Replica, t: f64, stat: Stat, value: f64) {
        self.rows.push(ResultRow {
            preset: preset.to_string(),
            n,
            replica,
            t,
            stat,
            value,
        });
    }

    /// Distinct `n`, ascending.
    pub fn n_values(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    /// Largest record time present.
    pub fn t_last(&self) -> Option<f64> {
        self.rows
            .iter()
            .map(|r| r.t)
            .fold(None, |m, t| Some(m.map_or(t, |m: f64| m.max(t))))
    }

    /// Values of `stat` for one `n`, replica kind and time, in row order.
    pub fn select(&self, n: usize, ensemble: bool, t: f64, stat: Stat) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.n == n && r.stat == stat && r.t == t && (r.replica == Replica::Ensemble) == ensemble)
            .map(|r| r.value)
            .collect()
    }

    /// The single ensemble value of `stat`, if present.
    pub fn ensemble(&self, n: usize, t: f64, stat: Stat) -> Option<f64> {
        self.select(n, true, t, stat).first().copied()
    }

    /// Writes the CSV; `comment` becomes a leading `#` line.
    pub fn write_csv(&self, out: &mut impl Write, comment: Option<&str>) -> std::io::Result<()> {
        if let Some(c) = comment {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.preset,
                r.n,
                r.replica,
                format_value(r.t),
                r.stat,
                format_value(r.value)
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self, comment: Option<&str>) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, comment).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read_csv(input: impl BufRead) -> HarnessResult<Self> {
        let mut table = ResultTable::default();
        let mut seen_header = false;
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| HarnessError::Parse(format!("line {}: {e}", i + 1)))?;
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            if !seen_header {
                if line != CSV_HEADER {
                    return Err(HarnessError::Parse(format!(
                        "expected header {CSV_HEADER:?}, got {line:?}"
                    )));
                }
                seen_header = true;
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(HarnessError::Parse(format!("line {}: expected 6 fields", i + 1)));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| HarnessError::Parse(format!("line {}: bad number {s:?}", i + 1)))
            };
            table.rows.push(ResultRow {
                preset: f[0].to_string(),
                n: f[1]
                    .parse()
                    .map_err(|_| HarnessError::Parse(format!("line {}: bad n {:?}", i + 1, f[1])))?,
                replica: f[2].parse()?,
                t: num(f[3])?,
                stat: f[4].parse()?,
                value: num(f[5])?,
            });
        }
        if !seen_header {
            return Err(HarnessError::Parse("missing header".into()));
        }
        Ok(table)
    }
}

/// Drops `#` lines, the part of a results file excluded from comparisons.
pub fn strip_comments(csv: &str) -> String {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}
