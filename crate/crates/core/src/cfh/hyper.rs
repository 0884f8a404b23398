//! Kummer `M(a, b, z)` and Tricomi `U(a, b, z)` for complex `a`, real `b > 0`
//!
//! `M` is summed from its power series near the real axis (with Kummer's
//! transformation on the left half plane) and otherwise assembled from two
//! `U` values. `U` comes from its asymptotic `2F0` series for large `|z|` in
//! the right half plane and from Taylor integration of the confluent
//! equation `z w'' + (b - z) w' - a w = 0` elsewhere. The integration path
//! never crosses the negative real axis, so integer `b` needs no special
//! treatment.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CfhError, Lifted};
use crate::szego::gamma::{gamma, rgamma};

/// Largest `|z|` accepted by [`kummer_m`].
pub const SERIES_LIMIT: f64 = 60.0;
/// Radius beyond which the asymptotic series for `U` is used directly.
pub const ASYMPTOTIC_RADIUS: f64 = 40.0;
/// Offset for the perturbed-`b` evaluation of `U` at integer `b`.
pub const B_PERTURBATION: f64 = 1e-6;

const MAX_SERIES_TERMS: usize = 4000;
const MAX_TAYLOR_TERMS: usize = 600;
const MAX_TAYLOR_STEP: f64 = 4.0;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn is_nonpositive_integer(b: f64) -> bool {
    b <= 0.0 && b == b.round()
}

fn is_integer(b: f64) -> bool {
    b == b.round()
}

/// Pochhammer symbol `(a)_k` by direct product.
pub fn pochhammer(a: Complex64, k: usize) -> Complex64 {
    (0..k).fold(c(1.0), |acc, j| acc * (a + j as f64))
}

/// Power series `sum (a)_k z^k / ((b)_k k!)`.
fn m_series(a: Complex64, b: f64, z: Complex64) -> Complex64 {
    let mut term = c(1.0);
    let mut sum = c(1.0);
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && kf > z.norm() {
            break;
        }
        if term == c(0.0) {
            break;
        }
    }
    sum
}

/// `M(a, b, z)` without a size restriction on `z`.
pub(crate) fn m_eval(a: Complex64, b: f64, z: Complex64) -> Complex64 {
    if z == c(0.0) {
        return c(1.0);
    }
    if z.norm() <= 2.0 || z.norm() - z.re.abs() <= 4.0 {
        return if z.re >= 0.0 {
            m_series(a, b, z)
        } else {
            z.exp() * m_series(c(b) - a, b, -z)
        };
    }
    // M / Gamma(b) = e^{-+ i pi a} U(a,b,z) / Gamma(b-a)
    //              + e^{+- i pi (b-a)} e^z U(b-a, b, z e^{+- i pi}) / Gamma(a)
    let s = if z.im > 0.0 { -1.0 } else { 1.0 };
    let i = Complex64::i();
    let r = z.norm();
    let rot = Lifted::new(r, z.arg() + s * PI);
    let u1 = u_principal(a, b, z);
    let u2 = u_lifted_unchecked(c(b) - a, b, rot);
    gamma(c(b))
        * ((-s * i * PI * a).exp() * u1 * rgamma(c(b) - a)
            + (s * i * PI * (c(b) - a)).exp() * z.exp() * u2 * rgamma(a))
}

/// Kummer's function `M(a, b, z) = 1F1(a; b; z)` for `|z| <= 60`.
pub fn kummer_m(a: Complex64, b: f64, z: Complex64) -> Result<Complex64, CfhError> {
    if is_nonpositive_integer(b) {
        return Err(CfhError::BNonPositiveInteger(b));
    }
    if z.norm() > SERIES_LIMIT {
        return Err(CfhError::SeriesOverflow { modulus: z.norm() });
    }
    Ok(m_eval(a, b, z))
}

/// `z^{-a} 2F0(a, 1+a-b; ; -1/z)` truncated at its smallest term, or `None`
/// when the smallest term is not negligible.
fn u_asymptotic(a: Complex64, b: f64, z: Complex64) -> Option<Complex64> {
    let a2 = a + 1.0 - b;
    let mut term = c(1.0);
    let mut sum = c(1.0);
    let mut last = 1.0f64;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let next = term * (a + kf) * (a2 + kf) / (-(kf + 1.0) * z);
        if next == c(0.0) {
            break;
        }
        if next.norm() > last {
            if last > 1e-16 * sum.norm() {
                return None;
            }
            break;
        }
        term = next;
        sum += term;
        last = term.norm();
        if last <= 1e-17 * sum.norm() {
            break;
        }
    }
    Some((-a * z.ln()).exp() * sum)
}

/// `(U, U')` from the asymptotic series, enlarging nothing.
fn u_and_derivative_asymptotic(a: Complex64, b: f64, z: Complex64) -> Option<(Complex64, Complex64)> {
    let u = u_asymptotic(a, b, z)?;
    let du = -a * u_asymptotic(a + 1.0, b + 1.0, z)?;
    Some((u, du))
}

/// One Taylor step of the confluent equation from `z0` by `h`.
fn taylor_step(a: Complex64, b: f64, z0: Complex64, w: Complex64, dw: Complex64, h: Complex64) -> (Complex64, Complex64) {
    let mut c0 = w;
    let mut c1 = dw;
    let mut hk = c(1.0);
    let mut val = w + dw * h;
    let mut der = dw;
    let scale = w.norm() + h.norm() * dw.norm();
    let mut small = 0;
    for k in 0..MAX_TAYLOR_TERMS {
        let kf = k as f64;
        let c2 = ((a + kf) * c0 - (kf + 1.0) * (c(kf + b) - z0) * c1) / (z0 * (kf + 1.0) * (kf + 2.0));
        hk *= h;
        // hk = h^{k+1}
        let t_val = c2 * hk * h;
        let t_der = c2 * hk * (kf + 2.0);
        val += t_val;
        der += t_der;
        if t_val.norm() + h.norm() * t_der.norm() <= 1e-18 * scale.max(val.norm()) {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
        c0 = c1;
        c1 = c2;
    }
    (val, der)
}

fn integrate_segment(
    a: Complex64,
    b: f64,
    mut z: Complex64,
    mut w: Complex64,
    mut dw: Complex64,
    target: Complex64,
) -> (Complex64, Complex64) {
    loop {
        let rem = target - z;
        if rem.norm() <= 1e-15 * target.norm().max(1.0) {
            return (w, dw);
        }
        let hmax = (0.5 * z.norm()).min(MAX_TAYLOR_STEP);
        let h = if rem.norm() <= hmax { rem } else { rem * (hmax / rem.norm()) };
        let (nw, ndw) = taylor_step(a, b, z, w, dw, h);
        w = nw;
        dw = ndw;
        z = if rem.norm() <= hmax { target } else { z + h };
    }
}

fn start_radius(a: Complex64, b: f64) -> f64 {
    ASYMPTOTIC_RADIUS.max(2.0 * (a.norm() + (a + 1.0 - b).norm()).powi(2))
}

/// `U(a, b, z)` on the principal branch `-pi < arg z <= pi`.
pub(crate) fn u_principal(a: Complex64, b: f64, z: Complex64) -> Complex64 {
    let mut r = start_radius(a, b);
    if z.re >= 0.0 && z.norm() >= r {
        if let Some(u) = u_asymptotic(a, b, z) {
            return u;
        }
    }
    loop {
        let y = if z.im.abs() >= 1.0 {
            z.im
        } else if z.im < 0.0 {
            -1.0
        } else {
            1.0
        };
        let x = if y.abs() >= r { z.re.max(0.0) } else { z.re.max(0.0).max((r * r - y * y).sqrt()) };
        let start = Complex64::new(x, y);
        if let Some((w, dw)) = u_and_derivative_asymptotic(a, b, start) {
            let corner = Complex64::new(z.re, y);
            let (w, dw) = integrate_segment(a, b, start, w, dw, corner);
            let (w, _) = integrate_segment(a, b, corner, w, dw, z);
            return w;
        }
        r *= 2.0;
    }
}

fn u_lifted_unchecked(a: Complex64, b: f64, p: Lifted) -> Complex64 {
    let z = p.value();
    let theta = p.theta;
    if theta > -PI && theta <= PI {
        // principal; guard the representation of z near the cut
        let zp = if theta == PI { Complex64::new(-p.r, 0.0) } else { z };
        return u_principal(a, b, zp);
    }
    let i = Complex64::i();
    let k = 2.0 * PI * i * rgamma(c(b)) * rgamma(a + 1.0 - b);
    if theta > PI {
        // U(w e^{2 pi i}) = e^{-2 pi i b} U(w) + 2 pi i e^{-i pi b} M(w) / (Gamma(b) Gamma(1+a-b))
        let w = Lifted::new(p.r, theta - 2.0 * PI).value();
        (-2.0 * PI * i * b).exp() * u_principal(a, b, w) + k * (-PI * i * b).exp() * m_eval(a, b, w)
    } else {
        // U(w e^{-2 pi i}) = e^{2 pi i b} (U(w) - 2 pi i e^{-i pi b} M(w) / (Gamma(b) Gamma(1+a-b)))
        let w = Lifted::new(p.r, theta + 2.0 * PI).value();
        (2.0 * PI * i * b).exp() * (u_principal(a, b, w) - k * (-PI * i * b).exp() * m_eval(a, b, w))
    }
}

/// `U(a, b, z)` at a point with lifted argument in `(-3 pi, 3 pi)`.
pub fn tricomi_u_lifted(a: Complex64, b: f64, p: Lifted) -> Result<Complex64, CfhError> {
    if is_nonpositive_integer(b) {
        return Err(CfhError::BNonPositiveInteger(b));
    }
    if p.r == 0.0 {
        return Err(CfhError::ZeroArgument);
    }
    if !(p.theta > -3.0 * PI && p.theta < 3.0 * PI) {
        return Err(CfhError::ArgOutOfRange(p.theta));
    }
    Ok(u_lifted_unchecked(a, b, p))
}

/// Tricomi's function `U(a, b, z)` with `arg z` taken in `(-pi/2, 3pi/2]`.
pub fn tricomi_u(a: Complex64, b: f64, z: Complex64) -> Result<Complex64, CfhError> {
    tricomi_u_lifted(a, b, Lifted::from_complex(z))
}

/// `U` from the two-`M` connection formula on the principal branch.
pub fn tricomi_u_connection(a: Complex64, b: f64, z: Complex64) -> Result<Complex64, CfhError> {
    if is_integer(b) {
        return Err(CfhError::IntegerBUnsupportedDirect(b));
    }
    if z == c(0.0) {
        return Err(CfhError::ZeroArgument);
    }
    let t1 = gamma(c(1.0 - b)) * rgamma(a - b + 1.0) * m_eval(a, b, z);
    let t2 = gamma(c(b - 1.0)) * rgamma(a) * ((1.0 - b) * z.ln()).exp() * m_eval(a - b + 1.0, 2.0 - b, z);
    Ok(t1 + t2)
}

/// Connection-formula `U` averaged over `b +- 1e-6`, usable at integer `b`.
pub fn tricomi_u_perturbed(a: Complex64, b: f64, z: Complex64) -> Result<Complex64, CfhError> {
    let lo = tricomi_u_connection(a, b - B_PERTURBATION, z)?;
    let hi = tricomi_u_connection(a, b + B_PERTURBATION, z)?;
    Ok(0.5 * (lo + hi))
}
