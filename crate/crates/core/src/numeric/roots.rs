/// Interval `[lo, hi]` over which a function changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Samples `f` on a uniform grid over `(lo, hi]` with the given step and
/// returns every interval on which it changes sign (or hits zero exactly).
pub fn scan_brackets<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> Vec<Bracket> {
    let mut out = Vec::new();
    let count = ((hi - lo) / step).ceil() as usize;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=count {
        let x1 = if i == count { hi } else { lo + step * i as f64 };
        let f1 = f(x1);
        if f0 == 0.0 || (f0.signum() != f1.signum() && f1 != 0.0) {
            out.push(Bracket { lo: x0, hi: x1 });
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// Bisection on a sign-change bracket until the width is below `rel_tol * |x|`.
/// Returns the endpoint with the smaller residual.
pub fn bisect<F: Fn(f64) -> f64>(f: F, bracket: Bracket, rel_tol: f64) -> f64 {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let mut fhi = f(hi);
    for _ in 0..200 {
        if (hi - lo) <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    if flo.abs() <= fhi.abs() {
        lo
    } else {
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sine_roots() {
        let br = scan_brackets(f64::sin, 0.5, 10.0, 0.1);
        assert_eq!(br.len(), 3);
        let roots: Vec<f64> = br.iter().map(|b| bisect(f64::sin, *b, 1e-14)).collect();
        for (k, r) in roots.iter().enumerate() {
            assert!((r - std::f64::consts::PI * (k + 1) as f64).abs() < 1e-12);
        }
    }
}
