//! Weight parameters and pointwise evaluation of the generalized Jacobi weight
//!
//! The weight on `[-1, 1]` is
//! `w(x) = (1-x)^alpha (1+x)^beta |x0-x|^gamma h(x) Xi(x)`
//! where `Xi = 1` on `[-1, x0)` and `Xi = c2` on `[x0, 1]`.

use std::f64::consts::PI;

use thiserror::Error;

/// Number of uniform sample points used for the positivity check of `h`.
pub const POSITIVITY_GRID: usize = 1001;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("exponent {name} = {value} must be > -1")]
    ExponentOutOfRange { name: &'static str, value: f64 },
    #[error("x0 = {0} must satisfy -1 < x0 < 1")]
    X0OutOfRange(f64),
    #[error("jump height c2 = {0} must be positive")]
    JumpNonPositive(f64),
    #[error("analytic factor h is not positive at x = {x} (h = {value})")]
    FactorNotPositive { x: f64, value: f64 },
    #[error("weight evaluated at non-integrable singular point x = {0}")]
    EvalAtNonintegrableSingularity(f64),
}

/// The analytic, strictly positive factor `h` of the weight.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFactor {
    One,
    /// `h(x) = exp(s x)`
    ExpLinear(f64),
    /// `h(x) = sum_k coeffs[k] x^k`
    Polynomial(Vec<f64>),
}

impl AnalyticFactor {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            AnalyticFactor::One => 1.0,
            AnalyticFactor::ExpLinear(s) => (s * x).exp(),
            AnalyticFactor::Polynomial(c) => horner(c, x),
        }
    }

    /// `log h(x)` for real `x` in `[-1, 1]`.
    pub fn log_eval(&self, x: f64) -> f64 {
        match self {
            AnalyticFactor::One => 0.0,
            AnalyticFactor::ExpLinear(s) => s * x,
            AnalyticFactor::Polynomial(c) => horner(c, x).ln(),
        }
    }

    /// Derivative of `log h` at real `x`.
    pub fn log_derivative(&self, x: f64) -> f64 {
        match self {
            AnalyticFactor::One => 0.0,
            AnalyticFactor::ExpLinear(s) => *s,
            AnalyticFactor::Polynomial(c) => {
                let (p, dp) = horner_with_derivative(c, x);
                dp / p
            }
        }
    }

    /// Principal-branch `log h(z)` for complex `z`, used for the analytic
    /// continuation of `log h` off the interval.
    pub fn log_eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        use num_complex::Complex64;
        match self {
            AnalyticFactor::One => Complex64::new(0.0, 0.0),
            AnalyticFactor::ExpLinear(s) => z * *s,
            AnalyticFactor::Polynomial(c) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &ck in c.iter().rev() {
                    acc = acc * z + ck;
                }
                acc.ln()
            }
        }
    }

    fn check_positive(&self) -> Result<(), ParamsError> {
        if let AnalyticFactor::One = self {
            return Ok(());
        }
        let uniform = (0..POSITIVITY_GRID)
            .map(|i| -1.0 + 2.0 * i as f64 / (POSITIVITY_GRID - 1) as f64);
        let cheb = (0..=POSITIVITY_GRID - 1)
            .map(|k| (PI * k as f64 / (POSITIVITY_GRID - 1) as f64).cos());
        for x in uniform.chain(cheb) {
            let v = self.eval(x);
            if !(v > 0.0) || !v.is_finite() {
                return Err(ParamsError::FactorNotPositive { x, value: v });
            }
        }
        Ok(())
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

fn horner_with_derivative(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &ck in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + ck;
    }
    (p, dp)
}

/// Full parameter set of the weight together with derived quantities.
///
/// Construct through [`WeightParams::new`] (or [`validate`]) so that the
/// derived fields are consistent.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub x0: f64,
    pub c2: f64,
    pub h: AnalyticFactor,
    /// `c = sqrt(c2)`
    pub c: f64,
    /// `ln c`
    pub log_c: f64,
    /// Imaginary part of `lambda = i ln c / pi`.
    pub lambda_im: f64,
    /// `mu = -ln c / pi`
    pub mu: f64,
}

impl WeightParams {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        x0: f64,
        c2: f64,
        h: AnalyticFactor,
    ) -> Result<Self, ParamsError> {
        let raw = WeightParams {
            alpha,
            beta,
            gamma,
            x0,
            c2,
            h,
            c: f64::NAN,
            log_c: f64::NAN,
            lambda_im: f64::NAN,
            mu: f64::NAN,
        };
        validate(raw)
    }

    /// Pure Legendre weight, all exponents zero, no jump.
    pub fn legendre() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 1.0, AnalyticFactor::One).expect("valid")
    }

    /// `lambda = i ln c / pi` as a complex number.
    pub fn lambda(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(0.0, self.lambda_im)
    }

    /// True when the interior point carries neither a singularity nor a jump.
    pub fn is_degenerate(&self) -> bool {
        self.gamma * self.gamma / 4.0 + self.mu * self.mu < 1e-20
    }

    /// Weight evaluated at `x`; see [`eval_weight`].
    pub fn weight(&self, x: f64) -> Result<f64, ParamsError> {
        eval_weight(self, x)
    }
}

/// Validates the raw exponents and jump, fills in the derived fields.
pub fn validate(params: WeightParams) -> Result<WeightParams, ParamsError> {
    for (name, value) in [
        ("alpha", params.alpha),
        ("beta", params.beta),
        ("gamma", params.gamma),
    ] {
        if !(value > -1.0) || !value.is_finite() {
            return Err(ParamsError::ExponentOutOfRange { name, value });
        }
    }
    if !(params.x0 > -1.0 && params.x0 < 1.0) {
        return Err(ParamsError::X0OutOfRange(params.x0));
    }
    if !(params.c2 > 0.0) || !params.c2.is_finite() {
        return Err(ParamsError::JumpNonPositive(params.c2));
    }
    params.h.check_positive()?;
    let c = params.c2.sqrt();
    let log_c = 0.5 * params.c2.ln();
    let lambda_im = log_c / PI;
    Ok(WeightParams {
        c,
        log_c,
        lambda_im,
        mu: -lambda_im,
        ..params
    })
}

/// Evaluates `w(x)`; the jump factor at `x0` itself is taken as `c2`.
pub fn eval_weight(params: &WeightParams, x: f64) -> Result<f64, ParamsError> {
    let singular = (x == 1.0 && params.alpha < 0.0)
        || (x == -1.0 && params.beta < 0.0)
        || (x == params.x0 && params.gamma < 0.0);
    if singular {
        return Err(ParamsError::EvalAtNonintegrableSingularity(x));
    }
    let xi = if x < params.x0 { 1.0 } else { params.c2 };
    Ok(pow0(1.0 - x, params.alpha)
        * pow0(1.0 + x, params.beta)
        * pow0((params.x0 - x).abs(), params.gamma)
        * params.h.eval(x)
        * xi)
}

/// `t^p` with the convention `0^0 = 1`.
fn pow0(t: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        t.powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_mu_vanishes_without_jump() {
        let p = WeightParams::new(0.0, 0.0, 1.0, 0.0, 1.0, AnalyticFactor::One).unwrap();
        assert_eq!(p.mu, 0.0);
        assert_eq!(p.mu, -p.lambda_im);
    }

    #[test]
    fn gamma_minus_one_rejected() {
        let e = WeightParams::new(0.0, 0.0, -1.0, 0.0, 1.0, AnalyticFactor::One).unwrap_err();
        assert!(matches!(e, ParamsError::ExponentOutOfRange { name: "gamma", .. }));
    }

    #[test]
    fn mu_for_c2_four() {
        let p = WeightParams::new(0.0, 0.0, 0.0, 0.0, 4.0, AnalyticFactor::One).unwrap();
        assert!((p.mu - (-(2.0f64).ln() / PI)).abs() < 1e-15);
        assert!((p.mu + 0.22064).abs() < 1e-5);
        assert_eq!(p.c, 2.0);
    }

    #[test]
    fn other_validation_errors() {
        assert!(matches!(
            WeightParams::new(0.0, 0.0, 0.0, 1.0, 1.0, AnalyticFactor::One),
            Err(ParamsError::X0OutOfRange(_))
        ));
        assert!(matches!(
            WeightParams::new(0.0, 0.0, 0.0, 0.0, 0.0, AnalyticFactor::One),
            Err(ParamsError::JumpNonPositive(_))
        ));
        assert!(matches!(
            WeightParams::new(0.0, 0.0, 0.0, 0.0, 1.0, AnalyticFactor::Polynomial(vec![0.5, 1.0])),
            Err(ParamsError::FactorNotPositive { .. })
        ));
        assert!(matches!(
            WeightParams::new(-1.5, 0.0, 0.0, 0.0, 1.0, AnalyticFactor::One),
            Err(ParamsError::ExponentOutOfRange { name: "alpha", .. })
        ));
    }

    #[test]
    fn weight_examples() {
        let leg = WeightParams::legendre();
        assert_eq!(eval_weight(&leg, 0.5).unwrap(), 1.0);
        let absx = WeightParams::new(0.0, 0.0, 1.0, 0.0, 1.0, AnalyticFactor::One).unwrap();
        assert_eq!(eval_weight(&absx, -0.25).unwrap(), 0.25);
        let jump = WeightParams::new(0.0, 0.0, 0.0, 0.3, 2.0, AnalyticFactor::One).unwrap();
        let r = eval_weight(&jump, 0.3 + 1e-6).unwrap() / eval_weight(&jump, 0.3 - 1e-6).unwrap();
        assert_eq!(r, 2.0);
        assert_eq!(eval_weight(&jump, 0.3).unwrap(), 2.0);
    }

    #[test]
    fn singular_point_rejected() {
        let p = WeightParams::new(0.0, 0.0, -0.5, 0.2, 1.0, AnalyticFactor::One).unwrap();
        assert!(matches!(
            eval_weight(&p, 0.2),
            Err(ParamsError::EvalAtNonintegrableSingularity(_))
        ));
        let q = WeightParams::new(-0.5, 0.0, 0.0, 0.2, 1.0, AnalyticFactor::One).unwrap();
        assert!(eval_weight(&q, 1.0).is_err());
        assert!(eval_weight(&q, -1.0).is_ok());
    }

    #[test]
    fn polynomial_log_derivative() {
        let h = AnalyticFactor::Polynomial(vec![2.0, 0.5, 0.25]);
        let x = 0.3;
        let fd = (h.log_eval(x + 1e-6) - h.log_eval(x - 1e-6)) / 2e-6;
        assert!((h.log_derivative(x) - fd).abs() < 1e-9);
    }
}
