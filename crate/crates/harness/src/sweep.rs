//! Convergence in `n`: per-`n` medians of distance statistics and their
//! fitted log-log slopes.

use crate::error::{config_err, HarnessResult};
use crate::stats::{log_log_slope, median};
use crate::table::{ResultTable, Stat};

/// One statistic across `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepLine {
    pub stat: Stat,
    /// `(n, median over replicas)` at the last record time, ascending `n`.
    pub medians: Vec<(usize, f64)>,
    /// Slope of `ln median` against `ln n`; `None` when a median is not
    /// positive.
    pub slope: Option<f64>,
    /// Medians strictly decrease with `n`.
    pub monotone_decreasing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub t: f64,
    pub lines: Vec<SweepLine>,
}

/// Default statistics of [`sweep_report`].
pub const SWEEP_STATS: [Stat; 2] = [Stat::W1, Stat::Ks];

/// Medians of the path rows of `stats` at the last record time, per `n`.
/// Statistics absent from the table are skipped.
pub fn sweep_report(table: &ResultTable, stats: &[Stat]) -> HarnessResult<SweepReport> {
    let ns = table.n_values();
    let ns: Vec<usize> = ns.into_iter().filter(|&n| n > 0).collect();
    if ns.len() < 2 {
        return Err(config_err("a sweep needs results for at least two distinct n"));
    }
    let t = table.t_last().expect("nonempty table");
    let mut lines = Vec::new();
    for &stat in stats {
        let medians: Vec<(usize, f64)> = ns
            .iter()
            .filter_map(|&n| {
                let v = table.select(n, false, t, stat);
                (!v.is_empty()).then(|| (n, median(&v)))
            })
            .collect();
        if medians.len() < 2 {
            continue;
        }
        let pts: Vec<(f64, f64)> = medians.iter().map(|&(n, m)| (n as f64, m)).collect();
        lines.push(SweepLine {
            stat,
            slope: log_log_slope(&pts),
            monotone_decreasing: medians.windows(2).all(|w| w[1].1 < w[0].1),
            medians,
        });
    }
    Ok(SweepReport { t, lines })
}

impl SweepReport {
    pub fn line(&self, stat: Stat) -> Option<&SweepLine> {
        self.lines.iter().find(|l| l.stat == stat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Replica;

    fn table(f: impl Fn(usize, u64) -> f64) -> ResultTable {
        let mut t = ResultTable::default();
        for n in [25, 50, 100, 200] {
            for r in 0..5 {
                t.push("x", n, Replica::Path(r), 1.0, Stat::W1, f(n, r));
                t.push("x", n, Replica::Path(r), 0.5, Stat::W1, 99.0);
            }
        }
        t
    }

    #[test]
    fn inverse_sqrt_rate() {
        // W1(n) = c/√n with replica scatter that leaves the median at c/√n
        let t = table(|n, r| 0.8 / (n as f64).sqrt() * (1.0 + 0.01 * (r as f64 - 2.0)));
        let rep = sweep_report(&t, &SWEEP_STATS).unwrap();
        assert_eq!(rep.t, 1.0);
        let line = rep.line(Stat::W1).unwrap();
        assert!((line.slope.unwrap() + 0.5).abs() < 0.05);
        assert!(line.monotone_decreasing);
        assert!(rep.line(Stat::Ks).is_none());
    }

    #[test]
    fn constant_distance() {
        let rep = sweep_report(&table(|_, _| 0.3), &[Stat::W1]).unwrap();
        let line = rep.line(Stat::W1).unwrap();
        assert!(line.slope.unwrap().abs() < 1e-12);
        assert!(!line.monotone_decreasing);
    }

    #[test]
    fn needs_two_sizes() {
        let mut t = ResultTable::default();
        t.push("x", 25, Replica::Path(0), 1.0, Stat::W1, 0.1);
        assert!(sweep_report(&t, &SWEEP_STATS).is_err());
    }
}
