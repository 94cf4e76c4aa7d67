/// Golden-section minimisation of a unimodal `f` on `[lo, hi]`.
/// Returns `(x_min, f(x_min))`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, x_tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let (x, fx) = golden_section(|x| (x - 1.3).powi(2) + 2.0, -4.0, 9.0, 1e-10);
        // f is flat to rounding within ~1e-8 of the minimum.
        assert!((x - 1.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-14);
    }

    #[test]
    fn cusp() {
        let (x, _) = golden_section(|x| (x - 0.7).abs().max(1e-300).ln(), 0.0, 2.0, 1e-12);
        assert!((x - 0.7).abs() < 1e-10);
    }
}
