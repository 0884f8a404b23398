//! Gauss–Jacobi rules by Golub–Welsch and the composite rule for the weight
//!
//! The eigenproblem of the Jacobi matrix is solved by an implicit-shift QL
//! iteration that only carries the first row of the eigenvector matrix,
//! which is all the weights need.

use thiserror::Error;

use crate::params::WeightParams;
use crate::szego::gamma::ln_beta;

/// Extra nodes per piece beyond `2 N_max` in the sizing rule.
pub const SIZING_MARGIN: usize = 64;

const MAX_QL_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("QL iteration did not converge for eigenvalue {index}")]
    NoConvergence { index: usize },
    #[error("invalid rule request: {0}")]
    InvalidRequest(String),
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

/// Nodes and positive weights on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
    /// Polynomial degree integrated exactly against the Jacobi factor(s) the
    /// rule was built for.
    pub exact_degree: usize,
    /// Number of nodes in each Gauss piece.
    pub nodes_per_piece: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_k w_k f(x_k)`
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = crate::recurrence::NeumaierSum::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(x));
        }
        acc.total()
    }

    pub fn mass(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    /// Largest recurrence index this rule supports under the sizing rule
    /// `nodes_per_piece = 2 N_max + 64`.
    pub fn max_recurrence_index(&self) -> usize {
        self.nodes_per_piece.saturating_sub(SIZING_MARGIN) / 2
    }
}

/// Nodes per piece required to compute recurrence coefficients up to `n_max`.
pub fn nodes_for_degree(n_max: usize) -> usize {
    2 * n_max + SIZING_MARGIN
}

/// Eigenvalues (ascending) and squared first eigenvector components of a
/// symmetric tridiagonal matrix.
pub fn tridiag_eigen(t: &SymTridiag) -> Result<(Vec<f64>, Vec<f64>), QuadratureError> {
    let m = t.diag.len();
    if m == 0 || t.offdiag.len() + 1 != m {
        return Err(QuadratureError::InvalidRequest(format!(
            "diag has {} entries, offdiag {}",
            m,
            t.offdiag.len()
        )));
    }
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; m];
    z[0] = 1.0;

    for l in 0..m {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < m {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(QuadratureError::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = mm;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let fz = z[i + 1];
                z[i + 1] = s * z[i] + c * fz;
                z[i] = c * z[i] - s * fz;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eig = order.iter().map(|&k| d[k]).collect();
    let fcs = order.iter().map(|&k| z[k] * z[k]).collect();
    Ok((eig, fcs))
}

/// Monic recurrence coefficients of the Jacobi weight `(1-x)^p (1+x)^q` on
/// `[-1, 1]` in closed form: returns `(b_k, a_k^2)` with `a_0^2` set to the
/// total mass.
pub fn jacobi_recurrence(n: usize, p: f64, q: f64) -> (Vec<f64>, Vec<f64>) {
    let mut b = Vec::with_capacity(n);
    let mut a2 = Vec::with_capacity(n);
    let s = p + q;
    for k in 0..n {
        let kf = k as f64;
        if k == 0 {
            b.push((q - p) / (s + 2.0));
            a2.push(jacobi_mass(p, q));
            continue;
        }
        let t = 2.0 * kf + s;
        b.push((q * q - p * p) / (t * (t + 2.0)));
        if k == 1 {
            a2.push(4.0 * (1.0 + p) * (1.0 + q) / ((2.0 + s) * (2.0 + s) * (3.0 + s)));
        } else {
            a2.push(
                4.0 * kf * (kf + p) * (kf + q) * (kf + s) / (t * t * (t + 1.0) * (t - 1.0)),
            );
        }
    }
    (b, a2)
}

/// `int_{-1}^{1} (1-x)^p (1+x)^q dx = 2^{p+q+1} B(p+1, q+1)`
pub fn jacobi_mass(p: f64, q: f64) -> f64 {
    ((p + q + 1.0) * std::f64::consts::LN_2 + ln_beta(p + 1.0, q + 1.0)).exp()
}

/// Gauss rule for `int_lo^hi f(x) (hi-x)^p (x-lo)^q dx`.
pub fn gauss_jacobi(
    n_nodes: usize,
    p: f64,
    q: f64,
    interval: (f64, f64),
) -> Result<QuadratureRule, QuadratureError> {
    let (lo, hi) = interval;
    if n_nodes == 0 || !(p > -1.0) || !(q > -1.0) || !(lo < hi) {
        return Err(QuadratureError::InvalidRequest(format!(
            "n = {n_nodes}, p = {p}, q = {q}, interval = ({lo}, {hi})"
        )));
    }
    let (b, a2) = jacobi_recurrence(n_nodes, p, q);
    let t = SymTridiag {
        diag: b,
        offdiag: a2[1..].iter().map(|v| v.sqrt()).collect(),
    };
    let (eig, fcs) = tridiag_eigen(&t)?;
    let half = 0.5 * (hi - lo);
    let mu0 = a2[0] * half.powf(p + q + 1.0);
    Ok(QuadratureRule {
        nodes: eig.iter().map(|&x| lo + half * (x + 1.0)).collect(),
        weights: fcs.iter().map(|&v| mu0 * v).collect(),
        interval,
        exact_degree: 2 * n_nodes - 1,
        nodes_per_piece: n_nodes,
    })
}

/// Rule for `int_{-1}^{1} f(x) w(x) dx`: a Gauss–Jacobi piece on each side of
/// `x0`, with the smooth leftover factors folded into the weights.
pub fn composite_rule(
    params: &WeightParams,
    n_nodes_per_piece: usize,
) -> Result<QuadratureRule, QuadratureError> {
    let x0 = params.x0;
    let left = gauss_jacobi(n_nodes_per_piece, params.gamma, params.beta, (-1.0, x0))?;
    let right = gauss_jacobi(n_nodes_per_piece, params.alpha, params.gamma, (x0, 1.0))?;
    let mut nodes = Vec::with_capacity(2 * n_nodes_per_piece);
    let mut weights = Vec::with_capacity(2 * n_nodes_per_piece);
    for (&x, &w) in left.nodes.iter().zip(&left.weights) {
        nodes.push(x);
        weights.push(w * params.h.eval(x) * (1.0 - x).powf(params.alpha));
    }
    for (&x, &w) in right.nodes.iter().zip(&right.weights) {
        nodes.push(x);
        weights.push(w * params.h.eval(x) * (1.0 + x).powf(params.beta) * params.c2);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        interval: (-1.0, 1.0),
        exact_degree: 2 * n_nodes_per_piece - 1,
        nodes_per_piece: n_nodes_per_piece,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::AnalyticFactor;
    use std::f64::consts::PI;

    #[test]
    fn one_by_one() {
        let (e, f) = tridiag_eigen(&SymTridiag { diag: vec![5.0], offdiag: vec![] }).unwrap();
        assert_eq!(e, vec![5.0]);
        assert_eq!(f, vec![1.0]);
    }

    #[test]
    fn two_by_two() {
        let (e, f) =
            tridiag_eigen(&SymTridiag { diag: vec![0.0, 0.0], offdiag: vec![1.0] }).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
        assert!((f[0] - 0.5).abs() < 1e-15 && (f[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn malformed_tridiag_rejected() {
        let t = SymTridiag { diag: vec![1.0, 2.0], offdiag: vec![] };
        assert!(tridiag_eigen(&t).is_err());
    }

    #[test]
    fn moments_match_dense_powers() {
        let t = SymTridiag {
            diag: vec![0.3, -1.2, 0.7, 2.1, -0.4, 0.9],
            offdiag: vec![0.8, 0.25, 1.4, 0.6, 0.33],
        };
        let (e, f) = tridiag_eigen(&t).unwrap();
        let m = t.diag.len();
        let mut dense = vec![vec![0.0; m]; m];
        for i in 0..m {
            dense[i][i] = t.diag[i];
            if i + 1 < m {
                dense[i][i + 1] = t.offdiag[i];
                dense[i + 1][i] = t.offdiag[i];
            }
        }
        // first column of T^k by repeated products
        let mut v = vec![0.0; m];
        v[0] = 1.0;
        for k in 0..8 {
            let moment: f64 = e.iter().zip(&f).map(|(l, w)| l.powi(k) * w).sum();
            assert!((moment - v[0]).abs() < 1e-12 * v[0].abs().max(1.0), "k = {k}");
            v = (0..m).map(|i| (0..m).map(|j| dense[i][j] * v[j]).sum()).collect();
        }
        assert!((e.iter().zip(&f).map(|(l, w)| l * w).sum::<f64>() - t.diag[0]).abs() < 1e-14);
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn gauss_legendre_two_point() {
        let r = gauss_jacobi(2, 0.0, 0.0, (-1.0, 1.0)).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_chebyshev_three_point() {
        let r = gauss_jacobi(3, -0.5, -0.5, (-1.0, 1.0)).unwrap();
        let want = [(5.0 * PI / 6.0).cos(), 0.0, (PI / 6.0).cos()];
        for k in 0..3 {
            assert!((r.nodes[k] - want[k]).abs() < 1e-15);
            assert!((r.weights[k] - PI / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn mapped_interval_mass() {
        // int_0^2 (2-x)^0.5 x^-0.3 dx = 2^{1.2} B(1.5, 0.7)
        let r = gauss_jacobi(7, 0.5, -0.3, (0.0, 2.0)).unwrap();
        let want = (1.2 * std::f64::consts::LN_2 + ln_beta(1.5, 0.7)).exp();
        assert!((r.mass() - want).abs() < 1e-13 * want);
        assert!(r.nodes.iter().all(|&x| x > 0.0 && x < 2.0));
    }

    #[test]
    fn composite_masses() {
        let leg = WeightParams::legendre();
        for n in [1, 5, 40] {
            assert!((composite_rule(&leg, n).unwrap().mass() - 2.0).abs() < 1e-12);
        }
        let absx = WeightParams::new(0.0, 0.0, 1.0, 0.0, 1.0, AnalyticFactor::One).unwrap();
        assert!((composite_rule(&absx, 10).unwrap().mass() - 1.0).abs() < 1e-13);
        let jump = WeightParams::new(0.0, 0.0, 0.0, 0.0, 2.0, AnalyticFactor::One).unwrap();
        assert!((composite_rule(&jump, 10).unwrap().mass() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn composite_node_layout() {
        let p = WeightParams::new(-0.4, 0.7, 1.3, 0.3, 2.0, AnalyticFactor::ExpLinear(1.0)).unwrap();
        let r = composite_rule(&p, 50).unwrap();
        assert_eq!(r.len(), 100);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.nodes.iter().all(|&x| x != 0.3 && x > -1.0 && x < 1.0));
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert_eq!(r.max_recurrence_index(), 0);
        assert_eq!(nodes_for_degree(200), 464);
    }
}
