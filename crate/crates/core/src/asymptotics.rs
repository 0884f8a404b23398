//! First-order asymptotics of the recurrence coefficients
//!
//! The predictions are
//! `a_n ~ 1/2 - (M/n) cos theta_n` and
//! `b_n ~ -(2M/n) cos(theta_n + arccos x0)` with
//! `theta_n = 2n arccos x0 - 2 mu log(4n sqrt(1-x0^2)) - Theta`.
//! The same first-order terms are also rebuilt from the residue matrices
//! `A1`, `B1`, `C1(n)` of the Riemann–Hilbert analysis.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::mat2::Mat2;
use crate::params::WeightParams;
use crate::recurrence::RecurrenceTable;
use crate::szego::gamma::arg_gamma;
use crate::szego::{d_infinity, phase_phi, pv_log_h};

/// Largest imaginary part tolerated in reconstructed coefficients.
pub const IMAGINARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("gamma = 0 and c2 = 1: no interior singularity, phase undefined")]
    DegenerateNoSingularity,
    #[error("first-order a_n^2 = {value} is not positive at n = {n}")]
    NegativeA2 { n: usize, value: f64 },
    #[error("reconstructed coefficient has imaginary part {value} at n = {n}")]
    ImaginaryResidue { n: usize, value: f64 },
    #[error("residual window too small: {0}")]
    WindowTooSmall(String),
}

/// Which sign layout the 1/n correction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// `a_n = 1/2 - (M/n) cos theta_n + O(1/n^2)`
    RemarkForm,
    /// The same correction with the opposite sign.
    TheoremSeriesForm,
}

impl SignConvention {
    fn sign(self) -> f64 {
        match self {
            SignConvention::RemarkForm => 1.0,
            SignConvention::TheoremSeriesForm => -1.0,
        }
    }
}

/// Predicted coefficients over a range of degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticPrediction {
    /// `None` when the weight has no interior singularity.
    pub theta_big: Option<f64>,
    pub m: f64,
    pub mu: f64,
    pub n_values: Vec<usize>,
    pub eta_n: Vec<f64>,
    /// `2 eta_n + varsigma`; empty when the weight has no interior
    /// singularity.
    pub theta_n: Vec<f64>,
    pub a_tilde: Vec<f64>,
    pub b_tilde: Vec<f64>,
    pub sign_convention: SignConvention,
}

/// The constant residues and the `n`-dependent one at a single degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueSet {
    pub n: usize,
    pub a1: Mat2,
    pub b1: Mat2,
    pub c1: Mat2,
}

impl ResidueSet {
    pub fn total(&self) -> Mat2 {
        self.a1 + self.b1 + self.c1
    }
}

/// `gamma/2 + lambda`
fn s_param(params: &WeightParams) -> Complex64 {
    Complex64::new(params.gamma / 2.0, params.lambda_im)
}

/// `Theta`, the constant phase of the oscillatory correction.
pub fn big_theta(params: &WeightParams) -> Result<f64, AsymptoticsError> {
    if params.is_degenerate() {
        return Err(AsymptoticsError::DegenerateNoSingularity);
    }
    let (a, b, g, x0) = (params.alpha, params.beta, params.gamma, params.x0);
    let s = s_param(params).conj();
    Ok((a + g / 2.0) * PI
        - (a + b + g) * x0.acos()
        - 2.0 * arg_gamma(s)
        - s.arg()
        - (1.0 - x0 * x0).sqrt() / PI * pv_log_h(&params.h, x0))
}

/// Amplitude `M = (sqrt(1-x0^2)/2) sqrt(gamma^2/4 + mu^2)`.
pub fn amplitude(params: &WeightParams) -> f64 {
    let x0 = params.x0;
    0.5 * (1.0 - x0 * x0).sqrt() * (params.gamma * params.gamma / 4.0 + params.mu * params.mu).sqrt()
}

/// `varsigma = -2 arg Gamma(gamma/2 + lambda) - arg(gamma/2 + lambda)`
pub fn varsigma(params: &WeightParams) -> Result<f64, AsymptoticsError> {
    if params.is_degenerate() {
        return Err(AsymptoticsError::DegenerateNoSingularity);
    }
    let s = s_param(params);
    Ok(-2.0 * arg_gamma(s) - s.arg())
}

fn log_term(params: &WeightParams, n: usize) -> f64 {
    (4.0 * n as f64 * (1.0 - params.x0 * params.x0).sqrt()).ln()
}

/// `eta_n = (ln c/pi) log(4n sqrt(1-x0^2)) + n arccos x0 - gamma pi/4 - Phi(x0)`
pub fn eta_n(params: &WeightParams, n: usize) -> f64 {
    params.lambda_im * log_term(params, n) + n as f64 * params.x0.acos()
        - params.gamma * PI / 4.0
        - phase_phi(params, params.x0)
}

/// `theta_n = 2 eta_n + varsigma`
pub fn theta_n(params: &WeightParams, n: usize) -> Result<f64, AsymptoticsError> {
    Ok(2.0 * eta_n(params, n) + varsigma(params)?)
}

/// Phase of the correction written with `Theta`:
/// `2n arccos x0 - 2 mu log(4n sqrt(1-x0^2)) - Theta`.
pub fn remark_phase(params: &WeightParams, theta_big: f64, n: usize) -> f64 {
    2.0 * n as f64 * params.x0.acos() - 2.0 * params.mu * log_term(params, n) - theta_big
}

/// Predicted `a_n`, `b_n` for every `n` in `n_values`.
pub fn predict(
    params: &WeightParams,
    n_values: impl IntoIterator<Item = usize>,
    convention: SignConvention,
) -> AsymptoticPrediction {
    let n_values: Vec<usize> = n_values.into_iter().collect();
    let eta: Vec<f64> = n_values.iter().map(|&n| eta_n(params, n)).collect();
    let m = amplitude(params);
    let mut out = AsymptoticPrediction {
        theta_big: None,
        m,
        mu: params.mu,
        n_values: n_values.clone(),
        eta_n: eta,
        theta_n: Vec::new(),
        a_tilde: vec![0.5; n_values.len()],
        b_tilde: vec![0.0; n_values.len()],
        sign_convention: convention,
    };
    if params.is_degenerate() {
        return out;
    }
    let theta_big = big_theta(params).expect("non-degenerate");
    let sigma = varsigma(params).expect("non-degenerate");
    let sign = convention.sign();
    let acx0 = params.x0.acos();
    out.theta_big = Some(theta_big);
    out.theta_n = out.eta_n.iter().map(|e| 2.0 * e + sigma).collect();
    for (k, &n) in n_values.iter().enumerate() {
        let th = remark_phase(params, theta_big, n);
        let nf = n as f64;
        out.a_tilde[k] = 0.5 - sign * m / nf * th.cos();
        out.b_tilde[k] = -sign * 2.0 * m / nf * (th + acx0).cos();
    }
    out
}

/// `A1`, `B1` and `C1(n)`.
pub fn residues(params: &WeightParams, n: usize) -> ResidueSet {
    let d = d_infinity(params);
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let ka = (4.0 * params.alpha * params.alpha - 1.0) / 16.0;
    let kb = (4.0 * params.beta * params.beta - 1.0) / 16.0;
    let a1 = Mat2::new(-one, i, i, one).conj_by_power(d).scale(ka.into());
    let b1 = Mat2::new(one, i, i, -one).conj_by_power(d).scale(kb.into());
    ResidueSet { n, a1, b1, c1: c1_matrix(params, d, n) }
}

fn c1_matrix(params: &WeightParams, d: f64, n: usize) -> Mat2 {
    if params.is_degenerate() {
        return Mat2::zero();
    }
    let l2 = params.log_c * params.log_c / (PI * PI);
    let g2 = params.gamma * params.gamma;
    let k = l2 / 2.0 + g2 / 8.0;
    let s = (l2 / 4.0 + g2 / 16.0).sqrt();
    let x0 = params.x0;
    let asx = x0.asin();
    let th = theta_n(params, n).expect("non-degenerate");
    let i = Complex64::i();
    let c11 = Complex64::new(-k * x0 + s * th.sin(), 0.0);
    let c12 = i * (d * d) * (k - s * (asx - th).cos());
    let c21 = i / (d * d) * (k + s * (asx + th).cos());
    Mat2::new(c11, c12, c21, -c11)
}

/// First-order `(a_n, b_n)` rebuilt from the residues.
pub fn first_order_reconstruction(
    params: &WeightParams,
    n: usize,
) -> Result<(f64, f64), AsymptoticsError> {
    let d2 = d_infinity(params).powi(2);
    let i = Complex64::i();
    let sig_n = residues(params, n).total();
    let sig_n1 = residues(params, n + 1).total();
    let nf = n as f64;
    let a2 = 0.25 + (sig_n.get(1, 0) * (-d2 / (2.0 * i)) + sig_n.get(0, 1) / (2.0 * i * d2)) / nf;
    let b = -(sig_n1.get(0, 0) + sig_n.get(1, 1)) / nf;
    for v in [a2.im, b.im] {
        if v.abs() > IMAGINARY_TOLERANCE {
            return Err(AsymptoticsError::ImaginaryResidue { n, value: v });
        }
    }
    if !(a2.re > 0.0) {
        return Err(AsymptoticsError::NegativeA2 { n, value: a2.re });
    }
    Ok((a2.re.sqrt(), b.re))
}

/// Residuals of a computed table against a prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub n_values: Vec<usize>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub a_tilde: Vec<f64>,
    pub b_tilde: Vec<f64>,
    pub res_a: Vec<f64>,
    pub res_b: Vec<f64>,
    /// Envelope slope of `log |res_a|` against `log n`; `None` when there
    /// are too few nonzero local maxima to fit.
    pub slope_a: Option<f64>,
    pub slope_b: Option<f64>,
}

impl ResidualReport {
    /// `(sup n^2 |res_a|, sup n^2 |res_b|)` over `lo..=hi`.
    pub fn sup_n2(&self, lo: usize, hi: usize) -> (f64, f64) {
        let mut sa = 0.0f64;
        let mut sb = 0.0f64;
        for (k, &n) in self.n_values.iter().enumerate() {
            if n >= lo && n <= hi {
                let n2 = (n * n) as f64;
                sa = sa.max(n2 * self.res_a[k].abs());
                sb = sb.max(n2 * self.res_b[k].abs());
            }
        }
        (sa, sb)
    }

    /// CSV with header `n,a_n,b_n,a_tilde,b_tilde,res_a,res_b,n2_res_a,n2_res_b`.
    pub fn to_csv(&self) -> String {
        use crate::fmt17;
        let mut out = String::from("n,a_n,b_n,a_tilde,b_tilde,res_a,res_b,n2_res_a,n2_res_b\n");
        for (k, &n) in self.n_values.iter().enumerate() {
            let n2 = (n * n) as f64;
            out.push_str(&format!(
                "{n},{},{},{},{},{},{},{},{}\n",
                fmt17(self.a[k]),
                fmt17(self.b[k]),
                fmt17(self.a_tilde[k]),
                fmt17(self.b_tilde[k]),
                fmt17(self.res_a[k]),
                fmt17(self.res_b[k]),
                fmt17(n2 * self.res_a[k]),
                fmt17(n2 * self.res_b[k]),
            ));
        }
        out
    }
}

/// Least-squares slope of `log r` against `log n` through the local maxima
/// of `|r|`.
pub fn envelope_slope(n_values: &[usize], residuals: &[f64]) -> Option<f64> {
    let r: Vec<f64> = residuals.iter().map(|v| v.abs()).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 1..r.len().saturating_sub(1) {
        if r[k] > 0.0 && r[k] >= r[k - 1] && r[k] >= r[k + 1] {
            xs.push((n_values[k] as f64).ln());
            ys.push(r[k].ln());
        }
    }
    if xs.len() < 3 {
        return None;
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Minimum table size for a residual report.
pub const MIN_REPORT_DEGREE: usize = 50;

/// Residuals `a_n - a_tilde_n`, `b_n - b_tilde_n` over the prediction's
/// degrees.
pub fn residual_report(
    table: &RecurrenceTable,
    pred: &AsymptoticPrediction,
) -> Result<ResidualReport, AsymptoticsError> {
    if table.n_max < MIN_REPORT_DEGREE {
        return Err(AsymptoticsError::WindowTooSmall(format!(
            "table has n_max = {}, need at least {MIN_REPORT_DEGREE}",
            table.n_max
        )));
    }
    let mut rep = ResidualReport {
        n_values: vec![],
        a: vec![],
        b: vec![],
        a_tilde: vec![],
        b_tilde: vec![],
        res_a: vec![],
        res_b: vec![],
        slope_a: None,
        slope_b: None,
    };
    for (k, &n) in pred.n_values.iter().enumerate() {
        if n == 0 || n >= table.n_max {
            continue;
        }
        let a = table.a(n);
        let b = table.b[n];
        rep.n_values.push(n);
        rep.a.push(a);
        rep.b.push(b);
        rep.a_tilde.push(pred.a_tilde[k]);
        rep.b_tilde.push(pred.b_tilde[k]);
        rep.res_a.push(a - pred.a_tilde[k]);
        rep.res_b.push(b - pred.b_tilde[k]);
    }
    if rep.n_values.len() < 3 {
        return Err(AsymptoticsError::WindowTooSmall(format!(
            "{} degrees inside the table",
            rep.n_values.len()
        )));
    }
    rep.slope_a = envelope_slope(&rep.n_values, &rep.res_a);
    rep.slope_b = envelope_slope(&rep.n_values, &rep.res_b);
    Ok(rep)
}
