//! Integer-order Bessel functions of the first and second kind, their
//! derivatives, and the coaxial cutoff cross-products.
//!
//! Values come from `libm` (musl `j0/j1/jn/y0/y1/yn`), which is accurate to a
//! few ulp over the argument range used by the mode solvers.

use std::f64::consts::PI;

#[inline]
pub fn j(n: u32, x: f64) -> f64 {
    match n {
        0 => libm::j0(x),
        1 => libm::j1(x),
        _ => libm::jn(n as i32, x),
    }
}

#[inline]
pub fn y(n: u32, x: f64) -> f64 {
    match n {
        0 => libm::y0(x),
        1 => libm::y1(x),
        _ => libm::yn(n as i32, x),
    }
}

/// dJ_n/dx.
#[inline]
pub fn jp(n: u32, x: f64) -> f64 {
    if n == 0 {
        -libm::j1(x)
    } else {
        0.5 * (j(n - 1, x) - j(n + 1, x))
    }
}

/// dY_n/dx.
#[inline]
pub fn yp(n: u32, x: f64) -> f64 {
    if n == 0 {
        -libm::y1(x)
    } else {
        0.5 * (y(n - 1, x) - y(n + 1, x))
    }
}

/// J_n, Y_n and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub n: u32,
    pub x: f64,
    pub jn: f64,
    pub yn: f64,
    pub jn_p: f64,
    pub yn_p: f64,
}

impl BesselEval {
    pub fn new(n: u32, x: f64) -> Self {
        Self {
            n,
            x,
            jn: j(n, x),
            yn: y(n, x),
            jn_p: jp(n, x),
            yn_p: yp(n, x),
        }
    }

    /// J_n Y_n' - J_n' Y_n, which equals 2/(pi x).
    pub fn wronskian(&self) -> f64 {
        self.jn * self.yn_p - self.jn_p * self.yn
    }

    /// Relative deviation of the Wronskian from 2/(pi x).
    pub fn wronskian_error(&self) -> f64 {
        let expect = 2.0 / (PI * self.x);
        ((self.wronskian() - expect) / expect).abs()
    }
}

/// TE cutoff function J_n'(k a) Y_n'(k b) - J_n'(k b) Y_n'(k a).
pub fn cross_te(n: u32, kc_a: f64, kc_b: f64) -> f64 {
    jp(n, kc_a) * yp(n, kc_b) - jp(n, kc_b) * yp(n, kc_a)
}

/// TM cutoff function J_n(k a) Y_n(k b) - J_n(k b) Y_n(k a).
pub fn cross_tm(n: u32, kc_a: f64, kc_b: f64) -> f64 {
    j(n, kc_a) * y(n, kc_b) - j(n, kc_b) * y(n, kc_a)
}

/// Scale for [`cross_te`]: the product of the norms of the vectors
/// (Jn', Yn') at both radii, so `cross / scale` is the sine of their angle.
pub fn cross_te_scale(n: u32, kc_a: f64, kc_b: f64) -> f64 {
    jp(n, kc_a).hypot(yp(n, kc_a)) * jp(n, kc_b).hypot(yp(n, kc_b))
}

/// Scale for [`cross_tm`], as [`cross_te_scale`] with (Jn, Yn).
pub fn cross_tm_scale(n: u32, kc_a: f64, kc_b: f64) -> f64 {
    j(n, kc_a).hypot(y(n, kc_a)) * j(n, kc_b).hypot(y(n, kc_b))
}
