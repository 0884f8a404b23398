//! 2x2 complex matrices

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Mat2([[a11, a12], [a21, a22]])
    }

    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn identity() -> Self {
        Mat2::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn zero() -> Self {
        Mat2::real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2::new(d1, z, z, d2)
    }

    /// `exp(s sigma_3) = diag(e^s, e^-s)`
    pub fn exp_sigma3(s: Complex64) -> Self {
        Mat2::diag(s.exp(), (-s).exp())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        let [[a, b], [c, e]] = self.0;
        Mat2::new(e / d, -b / d, -c / d, a / d)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(a * s, b * s, c * s, d * s)
    }

    /// `D^{sigma_3} X D^{-sigma_3}`
    pub fn conj_by_power(&self, d: f64) -> Self {
        let [[a, b], [c, e]] = self.0;
        Mat2::new(a, b * (d * d), c / (d * d), e)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn dist(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] += o.0[i][j];
            }
        }
        r
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] -= o.0[i][j];
            }
        }
        r
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = self.0;
        let b = o.0;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}
