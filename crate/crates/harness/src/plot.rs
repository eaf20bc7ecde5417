//! Two-column `x y` data files, one per figure.

use std::io::Write;
use std::path::Path;

use mflow::limits::LawParts;

use crate::error::{HarnessError, HarnessResult};
use crate::table::format_value;

/// Writes `# x_label y_label` followed by one `x y` line per point.
pub fn write_dat(path: &Path, labels: (&str, &str), points: &[(f64, f64)]) -> HarnessResult<()> {
    let mut out = String::new();
    out.push_str(&format!("# {} {}\n", labels.0, labels.1));
    for &(x, y) in points {
        out.push_str(&format!("{} {}\n", format_value(x), format_value(y)));
    }
    let mut f = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| HarnessError::io(path, e))
}

/// Density histogram with `bins` equal bins over the sample range:
/// `(bin center, mass / (count · width))`.
pub fn histogram(values: &[f64], bins: usize) -> Vec<(f64, f64)> {
    if values.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &x in values {
        let i = (((x - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let norm = values.len() as f64 * width;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (lo + (i as f64 + 0.5) * width, c as f64 / norm))
        .collect()
}

/// Continuous density of `parts` on `count` points across its support
/// (atoms are not drawn).
pub fn density_curve(parts: &LawParts<f64>, count: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = parts.support();
    if !(hi > lo) || count < 2 {
        return Vec::new();
    }
    (0..count)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (count - 1) as f64;
            (x, parts.density(x))
        })
        .collect()
}
