//! Confluent hypergeometric local parametrix
//!
//! `Psi` is defined sectorwise on the eight sectors cut out by the rays
//! `Gamma_1 ... Gamma_8` at angles `pi/2, 3pi/4, pi, 5pi/4, 3pi/2, -pi/4, 0,
//! pi/4`. Sectors are numbered counter-clockwise starting with
//! `(pi/2, 3pi/4)` as sector 1, so sector 7 is `(0, pi/4)`.
//! Arguments of `zeta` are taken in `(-pi/2, 3pi/2)`.

pub mod hyper;
pub mod verify;

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::mat2::Mat2;
use crate::params::WeightParams;
use crate::szego::gamma::{gamma, is_gamma_pole, rgamma};

pub use hyper::{kummer_m, pochhammer, tricomi_u, tricomi_u_connection, tricomi_u_lifted, tricomi_u_perturbed};

/// Angular distance to a ray below which an evaluation is rejected.
pub const CONTOUR_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CfhError {
    #[error("|z| = {modulus} exceeds the series regime")]
    SeriesOverflow { modulus: f64 },
    #[error("z = 0 is a branch point")]
    ZeroArgument,
    #[error("b = {0} is an integer; the connection formula is singular")]
    IntegerBUnsupportedDirect(f64),
    #[error("b = {0} is a nonpositive integer")]
    BNonPositiveInteger(f64),
    #[error("lifted argument {0} outside the supported range")]
    ArgOutOfRange(f64),
    #[error("zeta = {zeta} lies on the contour Gamma_{ray}")]
    OnContour { zeta: Complex64, ray: usize },
    #[error("Gamma function pole at {0}")]
    GammaPole(Complex64),
}

/// A point of the logarithmic Riemann surface: modulus and lifted argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lifted {
    pub r: f64,
    pub theta: f64,
}

impl Lifted {
    pub fn new(r: f64, theta: f64) -> Self {
        Lifted { r, theta }
    }

    /// Lift with argument in `(-pi/2, 3pi/2]`.
    pub fn from_complex(z: Complex64) -> Self {
        let mut theta = z.arg();
        if theta <= -PI / 2.0 {
            theta += 2.0 * PI;
        }
        Lifted { r: z.norm(), theta }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    /// `z e^{i phi}` on the surface.
    pub fn rotated(&self, phi: f64) -> Self {
        Lifted { r: self.r, theta: self.theta + phi }
    }

    /// `log z` with the lifted argument.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.r.ln(), self.theta)
    }

    /// `z^p` with the lifted argument.
    pub fn pow(&self, p: Complex64) -> Complex64 {
        (p * self.ln()).exp()
    }
}

/// Parameters of the confluent equation for a weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfhParams {
    /// `lambda + gamma/2`
    pub a: Complex64,
    /// `gamma + 1`
    pub b: f64,
    pub gamma: f64,
    /// `i log c / pi`
    pub lambda: Complex64,
}

impl CfhParams {
    pub fn from_weight(params: &WeightParams) -> Self {
        let lambda = params.lambda();
        CfhParams { a: lambda + params.gamma / 2.0, b: params.gamma + 1.0, gamma: params.gamma, lambda }
    }
}

/// `z^{gamma/2} M(a, gamma+1, z) e^{-z/2}`
fn g_fn(a: Complex64, gamma: f64, z: Lifted) -> Complex64 {
    let v = z.value();
    z.pow((gamma / 2.0).into()) * hyper::m_eval(a, gamma + 1.0, v) * (-v / 2.0).exp()
}

/// `z^{gamma/2} U(a, gamma+1, z) e^{-z/2}`
fn h_fn(a: Complex64, gamma: f64, z: Lifted) -> Result<Complex64, CfhError> {
    let v = z.value();
    Ok(z.pow((gamma / 2.0).into()) * tricomi_u_lifted(a, gamma + 1.0, z)? * (-v / 2.0).exp())
}

/// `(G, H)` at `z` with `arg z` in `(-pi/2, 3pi/2)`.
pub fn g_h_pair(p: &CfhParams, z: Lifted) -> Result<(Complex64, Complex64), CfhError> {
    if z.r == 0.0 {
        return Err(CfhError::ZeroArgument);
    }
    if !(z.theta > -PI / 2.0 && z.theta < 1.5 * PI) {
        return Err(CfhError::ArgOutOfRange(z.theta));
    }
    Ok((g_fn(p.a, p.gamma, z), h_fn(p.a, p.gamma, z)?))
}

/// A constant jump across one ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpMatrix {
    pub index: usize,
    pub matrix: Mat2,
}

/// One of the eight rays of the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub index: usize,
    /// Angle in `(-pi/2, 3pi/2]`.
    pub angle: f64,
    /// `true` when the ray points away from the origin, so that the
    /// counter-clockwise side is the `+` side.
    pub outward: bool,
}

/// Rays in counter-clockwise order starting above the positive real axis.
/// `Gamma_4`, `Gamma_5` and `Gamma_6` point towards the origin.
pub const RAYS: [Ray; 8] = [
    Ray { index: 8, angle: PI / 4.0, outward: true },
    Ray { index: 1, angle: PI / 2.0, outward: true },
    Ray { index: 2, angle: 3.0 * PI / 4.0, outward: true },
    Ray { index: 3, angle: PI, outward: true },
    Ray { index: 4, angle: 5.0 * PI / 4.0, outward: false },
    Ray { index: 5, angle: 3.0 * PI / 2.0, outward: false },
    Ray { index: 6, angle: -PI / 4.0, outward: false },
    Ray { index: 7, angle: 0.0, outward: true },
];

/// `J_1 ... J_8`, indexed from 0. `J_8` is not displayed alongside the
/// others and is taken as `[[1, 0], [e^{gamma pi i} / c, 1]]`.
pub fn jump_matrices(params: &WeightParams) -> [JumpMatrix; 8] {
    let c = params.c;
    let g = params.gamma;
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let e = |s: f64| (i * PI * g * s).exp();
    let lower = |x: Complex64| Mat2::new(one, zero, x, one);
    let j3 = Mat2::diag(e(0.5), e(-0.5));
    let mats = [
        Mat2::real(0.0, c, -1.0 / c, 0.0),
        lower(e(-1.0) / c),
        j3,
        lower(e(1.0) * c),
        Mat2::real(0.0, 1.0 / c, -c, 0.0),
        lower(e(-1.0) * c),
        j3,
        lower(e(1.0) / c),
    ];
    let mut out = [JumpMatrix { index: 0, matrix: Mat2::zero() }; 8];
    for (k, m) in mats.into_iter().enumerate() {
        out[k] = JumpMatrix { index: k + 1, matrix: m };
    }
    out
}

/// Product of the jumps met on a counter-clockwise loop around the origin
/// starting in sector 7, each taken as the factor `X` in
/// `Psi_ccw = Psi_cw X`.
pub fn cyclic_product(params: &WeightParams) -> Mat2 {
    let jumps = jump_matrices(params);
    RAYS.iter().fold(Mat2::identity(), |acc, ray| {
        let j = jumps[ray.index - 1].matrix;
        acc * if ray.outward { j } else { j.inverse() }
    })
}

/// Jump of `Psi` in sector 7 across `arg zeta = -pi/2` when that sector's
/// formula is continued through the whole plane:
/// `[[e^{i pi gamma}, -e^{-i pi lambda} + e^{i pi lambda} e^{-i pi gamma}], [0, e^{-i pi gamma}]]`.
pub fn monodromy(params: &WeightParams) -> Mat2 {
    let i = Complex64::i();
    let g = params.gamma;
    let lam = params.lambda();
    let zero = Complex64::new(0.0, 0.0);
    Mat2::new(
        (i * PI * g).exp(),
        -(-i * PI * lam).exp() + (i * PI * lam).exp() * (-i * PI * g).exp(),
        zero,
        (-i * PI * g).exp(),
    )
}

/// `Psi` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue {
    pub zeta: Complex64,
    pub sector: usize,
    pub matrix: Mat2,
}

/// Sector of a lifted argument in `(-pi/2, 3pi/2)`, or the ray it lies on.
pub fn sector_of(theta: f64) -> Result<usize, usize> {
    let q = theta / (PI / 4.0);
    let nearest = q.round();
    if (q - nearest).abs() * (PI / 4.0) < CONTOUR_GUARD {
        let k = nearest as i64;
        let ray = match k.rem_euclid(8) {
            0 => 7,
            1 => 8,
            2 => 1,
            3 => 2,
            4 => 3,
            5 => 4,
            6 => 5,
            _ => 6,
        };
        return Err(ray);
    }
    let sector = match q.floor() as i64 {
        -2 => 5,
        -1 => 6,
        0 => 7,
        1 => 8,
        2 => 1,
        3 => 2,
        4 => 3,
        _ => 4,
    };
    Ok(sector)
}

/// Precomputed constants of `Psi` for one weight.
#[derive(Debug, Clone)]
pub struct Parametrix {
    p: CfhParams,
    c: f64,
    /// `Gamma(1 - lambda + gamma/2)`
    ga: Complex64,
    /// `Gamma(1 + lambda + gamma/2)`
    gb: Complex64,
    /// `1/Gamma(gamma + 1)`
    r_g1: Complex64,
    /// `1/Gamma(gamma/2 + lambda)`
    r_gp: Complex64,
    /// `1/Gamma(gamma/2 - lambda)`
    r_gm: Complex64,
}

impl Parametrix {
    pub fn new(params: &WeightParams) -> Self {
        let p = CfhParams::from_weight(params);
        let half = Complex64::new(p.gamma / 2.0, 0.0);
        let lam = p.lambda;
        Parametrix {
            p,
            c: params.c,
            ga: gamma(1.0 - lam + half),
            gb: gamma(1.0 + lam + half),
            r_g1: rgamma((p.gamma + 1.0).into()),
            r_gp: rgamma(half + lam),
            r_gm: rgamma(half - lam),
        }
    }

    pub fn params(&self) -> &CfhParams {
        &self.p
    }

    pub fn eval(&self, zeta: Complex64) -> Result<PsiValue, CfhError> {
        if zeta.norm() == 0.0 {
            return Err(CfhError::ZeroArgument);
        }
        let z = Lifted::from_complex(zeta);
        let sector = sector_of(z.theta).map_err(|ray| CfhError::OnContour { zeta, ray })?;
        Ok(PsiValue { zeta, sector, matrix: self.eval_in_sector(z, sector)? })
    }

    fn eval_in_sector(&self, z: Lifted, sector: usize) -> Result<Mat2, CfhError> {
        let g = self.p.gamma;
        let lam = self.p.lambda;
        let i = Complex64::i();
        let a = self.p.a;
        // 1 - lambda + gamma/2 and gamma/2 - lambda
        let ap = 1.0 - lam + g / 2.0;
        let am = -lam + g / 2.0;
        let c = self.c;
        let h = |s: Complex64, w: Lifted| h_fn(s, g, w);
        let gf = |s: Complex64, w: Lifted| g_fn(s, g, w);
        let e_minus = Mat2::exp_sigma3(-i * PI * g / 4.0);
        let e_plus = Mat2::exp_sigma3(i * PI * g / 4.0);
        let half_turn = (-i * PI * g / 2.0).exp();
        let zm = z.rotated(-PI);
        let (ga, gb) = (self.ga, self.gb);
        let (r1, rp, rm) = (self.r_g1, self.r_gp, self.r_gm);
        let m = match sector {
            1 => {
                Mat2::new(h(a, z)? / c, -ga * rp * h(ap, zm)?, -gb * rm * h(a + 1.0, z)? / c, h(am, zm)?)
                    * e_minus
            }
            2 => {
                Mat2::new(
                    ga * r1 * gf(a, z) * half_turn,
                    -ga * rp * h(ap, zm)?,
                    gb * r1 * gf(a + 1.0, z) * half_turn,
                    h(am, zm)?,
                ) * e_minus
            }
            3 => {
                Mat2::new(
                    ga * r1 * gf(a, z),
                    -ga * rp * h(ap, zm)? * half_turn,
                    gb * r1 * gf(a + 1.0, z),
                    h(am, zm)? * half_turn,
                ) * e_minus
            }
            4 => {
                let z2 = z.rotated(-2.0 * PI);
                Mat2::new(c * h(a, z2)?, -ga * rp * h(ap, zm)?, -c * gb * rm * h(a + 1.0, z2)?, h(am, zm)?)
                    * e_plus
            }
            5 => {
                let zp = z.rotated(PI);
                let f = (-lam * PI * i).exp();
                Mat2::new(-ga * rp * h(ap, zp)? * f, -h(a, z)?, h(am, zp)? * f, gb * rm * h(a + 1.0, z)?) * e_minus
            }
            6 | 7 => {
                let core =
                    Mat2::new(ga * r1 * gf(a, z), -h(a, z)?, gb * r1 * gf(a + 1.0, z), gb * rm * h(a + 1.0, z)?);
                core * if sector == 6 { e_minus } else { e_plus }
            }
            _ => {
                Mat2::new(-ga * rp * h(ap, zm)? / c, -h(a, z)?, h(am, zm)? / c, gb * rm * h(a + 1.0, z)?) * e_plus
            }
        };
        Ok(m)
    }

    /// `Psi` for `zeta` with lifted argument `theta`, built from sector 7's
    /// formula and the jumps.
    pub fn eval_product_form(&self, params: &WeightParams, zeta: Complex64) -> Result<PsiValue, CfhError> {
        let v = self.eval(zeta)?;
        let z = Lifted::from_complex(zeta);
        let base = self.eval_in_sector(z, 7)?;
        let j = jump_matrices(params).map(|j| j.matrix);
        let [j1, j2, j3, j4, _, j6, j7, j8] = j;
        let tail = match v.sector {
            1 => j8 * j1,
            2 => j8 * j1 * j2,
            3 => j8 * j1 * j2 * j3,
            4 => j8 * j1 * j2 * j3 * j4.inverse(),
            5 => j7.inverse() * j6,
            6 => j7.inverse(),
            7 => Mat2::identity(),
            _ => j8,
        };
        Ok(PsiValue { matrix: base * tail, ..v })
    }
}

/// `Psi(zeta)` for a weight.
pub fn psi_eval(params: &WeightParams, zeta: Complex64) -> Result<PsiValue, CfhError> {
    Parametrix::new(params).eval(zeta)
}

/// `upsilon_k = (lambda + gamma/2)_k (lambda - gamma/2)_k / k!` for
/// `k = 1..=k_max`, and `tau = -Gamma(gamma/2 - lambda) / Gamma(gamma/2 + lambda + 1)`.
pub fn expansion_coeffs(params: &WeightParams, k_max: usize) -> Result<(Vec<Complex64>, Complex64), CfhError> {
    let lam = params.lambda();
    let half = Complex64::new(params.gamma / 2.0, 0.0);
    let num = half - lam;
    if is_gamma_pole(num) {
        return Err(CfhError::GammaPole(num));
    }
    let tau = -gamma(num) * rgamma(half + lam + 1.0);
    let mut ups = Vec::with_capacity(k_max);
    let mut fact = 1.0;
    for k in 1..=k_max {
        fact *= k as f64;
        ups.push(pochhammer(lam + half, k) * pochhammer(lam - half, k) / fact);
    }
    Ok((ups, tau))
}

/// Coefficient `T_k` of `zeta^{-k}` in the large-`zeta` expansion:
/// `[[(-1)^k u_k, k tau conj(u_k)], [(-1)^k k conj(tau) u_k, conj(u_k)]]`.
pub fn expansion_matrix(upsilon_k: Complex64, tau: Complex64, k: usize) -> Mat2 {
    let s = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let kf = k as f64;
    Mat2::new(s * upsilon_k, kf * tau * upsilon_k.conj(), s * kf * tau.conj() * upsilon_k, upsilon_k.conj())
}

/// `N(arg zeta)` with `Psi N e^{zeta sigma3/2} zeta^{lambda sigma3} -> I`.
pub fn normalizer(params: &WeightParams, theta: f64) -> Mat2 {
    let i = Complex64::i();
    let g = params.gamma;
    let lam = params.lambda();
    let flip = Mat2::real(0.0, 1.0, -1.0, 0.0);
    if theta > PI / 2.0 && theta < PI {
        Mat2::exp_sigma3(i * PI * g / 4.0) * Mat2::exp_sigma3(-lam * PI * i)
    } else if theta > PI {
        Mat2::exp_sigma3(-i * PI * g / 4.0) * Mat2::exp_sigma3(-lam * PI * i)
    } else if theta < 0.0 {
        Mat2::exp_sigma3(i * PI * g / 4.0) * flip
    } else {
        Mat2::exp_sigma3(-i * PI * g / 4.0) * flip
    }
}

/// `Psi(zeta) N e^{zeta sigma3/2} zeta^{lambda sigma3}`.
pub fn normalized_psi(px: &Parametrix, params: &WeightParams, zeta: Complex64) -> Result<Mat2, CfhError> {
    let v = px.eval(zeta)?;
    let z = Lifted::from_complex(zeta);
    let lam = params.lambda();
    Ok(v.matrix * normalizer(params, z.theta) * Mat2::exp_sigma3(zeta / 2.0) * Mat2::exp_sigma3(lam * z.ln()))
}
