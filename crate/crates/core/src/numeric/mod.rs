//! Small numerical kernels shared by the solvers.

mod quad;
mod roots;
mod search;

pub use quad::{integrate, QuadResult, Tolerance};
pub use roots::{bisect, scan_brackets, Bracket};
pub use search::golden_section;

/// Trapezoidal integral of samples `y` on a (possibly non-uniform) grid `x`.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Grid from `lo` to `hi` with spacing at most `step`; always includes both ends.
pub fn grid_with_step(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = (((hi - lo) / step) - 1e-9).ceil().max(1.0) as usize + 1;
    linspace(lo, hi, count)
}
