//! Szegő function of the weight, its value at infinity and boundary phases
//!
//! `D(z) = D(z, h) D(z, w_1gamma) D(z, Xi)` is analytic and zero-free off
//! `[-1, 1]`; its boundary values from above and below multiply to the
//! weight. All integrals against `1/sqrt(1-t^2)` use a Gauss–Chebyshev rule.

pub mod gamma;

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::params::{eval_weight, AnalyticFactor, WeightParams};

/// Nodes of the Gauss–Chebyshev rule used for all Szegő integrals.
pub const CHEBYSHEV_NODES: usize = 512;

/// Below this distance from `[-1, 1]` the Cauchy transform is evaluated
/// with the pole subtracted.
const SUBTRACTION_DISTANCE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SzegoError {
    #[error("z = {0} lies on the cut [-1, 1]")]
    ZOnCut(Complex64),
    #[error("x = {0} is the interior singular point")]
    XAtSingularity(f64),
}

/// The three factors of the Szegő function at one point and their product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzegoEval {
    pub z: Complex64,
    pub d_h: Complex64,
    pub d_w1gamma: Complex64,
    pub d_xi: Complex64,
    pub d_total: Complex64,
}

fn chebyshev_nodes(n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |k| ((2 * k - 1) as f64 * PI / (2 * n) as f64).cos())
}

/// Principal value of `int_{-1}^{1} log h(t) / (sqrt(1-t^2) (t - x0)) dt`.
pub fn pv_log_h(h: &AnalyticFactor, x0: f64) -> f64 {
    if let AnalyticFactor::One = h {
        return 0.0;
    }
    let g0 = h.log_eval(x0);
    let mut acc = crate::recurrence::NeumaierSum::default();
    for t in chebyshev_nodes(CHEBYSHEV_NODES) {
        let d = t - x0;
        let q = if d.abs() < 1e-12 { h.log_derivative(x0) } else { (h.log_eval(t) - g0) / d };
        acc.add(q);
    }
    acc.total() * PI / CHEBYSHEV_NODES as f64
}

/// `int_{-1}^{1} log h(t) / sqrt(1-t^2) dt`
pub fn log_h_mean(h: &AnalyticFactor) -> f64 {
    if let AnalyticFactor::One = h {
        return 0.0;
    }
    let mut acc = crate::recurrence::NeumaierSum::default();
    for t in chebyshev_nodes(CHEBYSHEV_NODES) {
        acc.add(h.log_eval(t));
    }
    acc.total() * PI / CHEBYSHEV_NODES as f64
}

/// Boundary phase without the contribution of the jump factor.
pub fn phase_phi(params: &WeightParams, x: f64) -> f64 {
    let s = params.alpha + params.beta + params.gamma;
    PI * params.alpha / 2.0
        - 0.5 * s * x.acos()
        - (1.0 - x * x).sqrt() / (2.0 * PI) * pv_log_h(&params.h, x)
}

/// `phase_phi` shifted by `pi gamma / 2` to the left of `x0`.
pub fn phase_phi_hat(params: &WeightParams, x: f64) -> Result<f64, SzegoError> {
    if x == params.x0 {
        return Err(SzegoError::XAtSingularity(x));
    }
    let phi = phase_phi(params, x);
    Ok(if x < params.x0 { phi + PI * params.gamma / 2.0 } else { phi })
}

/// Boundary phase (from above) of the jump factor `D(., Xi)`:
/// `-(ln c / pi) log |(1 - x0 x + sqrt((1-x^2)(1-x0^2))) / (x - x0)|`.
pub fn phase_xi(params: &WeightParams, x: f64) -> Result<f64, SzegoError> {
    if x == params.x0 {
        return Err(SzegoError::XAtSingularity(x));
    }
    let x0 = params.x0;
    let r = (1.0 - x0 * x + ((1.0 - x * x) * (1.0 - x0 * x0)).sqrt()) / (x - x0);
    Ok(-params.lambda_im * r.abs().ln())
}

/// Expected boundary value `lim_{eps -> 0+} D(x + i eps)` of the full
/// Szegő function.
pub fn boundary_value(params: &WeightParams, x: f64) -> Result<Complex64, SzegoError> {
    let w = eval_weight(params, x).map_err(|_| SzegoError::XAtSingularity(x))?;
    let phase = phase_phi_hat(params, x)? + phase_xi(params, x)?;
    Ok(Complex64::from_polar(w.sqrt(), phase))
}

/// `D_inf = sqrt(c) D(inf, h) 2^{-(alpha+beta+gamma)/2} exp(-(ln c / pi) asin x0)`
pub fn d_infinity(params: &WeightParams) -> f64 {
    let s = params.alpha + params.beta + params.gamma;
    params.c.sqrt()
        * (log_h_mean(&params.h) / (2.0 * PI)).exp()
        * 2f64.powf(-s / 2.0)
        * (-params.lambda_im * params.x0.asin()).exp()
}

/// `sqrt(z^2 - 1)` with the branch cut on `[-1, 1]`, behaving like `z` at
/// infinity.
pub fn sqrt_z2m1(z: Complex64) -> Complex64 {
    (z - 1.0).sqrt() * (z + 1.0).sqrt()
}

/// `phi(z) = z + sqrt(z^2 - 1)`, the exterior conformal map.
pub fn phi_map(z: Complex64) -> Complex64 {
    z + sqrt_z2m1(z)
}

fn distance_to_interval(z: Complex64) -> f64 {
    let xr = z.re.clamp(-1.0, 1.0);
    Complex64::new(z.re - xr, z.im).norm()
}

/// `int_{-1}^{1} log h(t) / ((z - t) sqrt(1-t^2)) dt`
fn cauchy_log_h(h: &AnalyticFactor, z: Complex64, sq: Complex64) -> Complex64 {
    let n = CHEBYSHEV_NODES as f64;
    if distance_to_interval(z) < SUBTRACTION_DISTANCE {
        let gz = h.log_eval_complex(z);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in chebyshev_nodes(CHEBYSHEV_NODES) {
            acc += (h.log_eval(t) - gz) / (z - t);
        }
        acc * (PI / n) + gz * PI / sq
    } else {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in chebyshev_nodes(CHEBYSHEV_NODES) {
            acc += h.log_eval(t) / (z - t);
        }
        acc * (PI / n)
    }
}

/// Evaluates the Szegő function and its factors at `z` off `[-1, 1]`.
pub fn szego_eval(params: &WeightParams, z: Complex64) -> Result<SzegoEval, SzegoError> {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        return Err(SzegoError::ZOnCut(z));
    }
    let sq = sqrt_z2m1(z);
    let d_h = match params.h {
        AnalyticFactor::One => Complex64::new(1.0, 0.0),
        ref h => (sq / (2.0 * PI) * cauchy_log_h(h, z, sq)).exp(),
    };
    let (a, b, g) = (params.alpha, params.beta, params.gamma);
    let log_w = (z - 1.0).ln() * (a / 2.0) + (z + 1.0).ln() * (b / 2.0)
        + (z - params.x0).ln() * (g / 2.0)
        - phi_map(z).ln() * ((a + b + g) / 2.0);
    let d_w1gamma = log_w.exp();
    let d_xi = if params.c2 == 1.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let x0 = params.x0;
        let i = Complex64::i();
        let ratio = (1.0 - z * x0 - i * (1.0 - x0 * x0).sqrt() * sq) / (z - x0);
        (-params.lambda() * ratio.ln()).exp() * params.c
    };
    Ok(SzegoEval { z, d_h, d_w1gamma, d_xi, d_total: d_h * d_w1gamma * d_xi })
}
