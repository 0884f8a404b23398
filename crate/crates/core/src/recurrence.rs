//! Monic recurrence coefficients by the discretized Stieltjes procedure
//!
//! `P_{n+1}(x) = (x - b_n) P_n(x) - a_n^2 P_{n-1}(x)`, with inner products
//! taken by the composite rule of [`crate::quadrature`].

use thiserror::Error;

use crate::params::WeightParams;
use crate::quadrature::{composite_rule, nodes_for_degree, QuadratureError, QuadratureRule};

/// Node values are rescaled by their running maximum at this stride.
pub const RESCALE_STRIDE: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecurrenceError {
    #[error("n_max = {requested} exceeds the {supported} supported by the quadrature rule")]
    DegreeTooHighForRule { requested: usize, supported: usize },
    #[error("b[{index}] = {value} lies outside (-1, 1)")]
    BOutOfRange { index: usize, value: f64 },
    #[error("a2[{index}] = {value} is not positive")]
    NonPositiveA2 { index: usize, value: f64 },
    #[error("degree {n} outside 0..={n_max}")]
    IndexOutOfRange { n: usize, n_max: usize },
    #[error("n_max must be at least 1")]
    EmptyRequest,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Recurrence coefficients of one weight.
///
/// `b[n]` for `n = 0..n_max`, `a2[n] = a_n^2` for `n = 1..=n_max`. The slot
/// `a2[0]` holds the total mass of the weight.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    pub params: WeightParams,
    pub n_max: usize,
    pub b: Vec<f64>,
    pub a2: Vec<f64>,
    pub drift: Option<f64>,
}

impl RecurrenceTable {
    pub fn a(&self, n: usize) -> f64 {
        self.a2[n].sqrt()
    }

    pub fn mass(&self) -> f64 {
        self.a2[0]
    }
}

/// Stieltjes procedure with the composite rule sized for `n_max`.
pub fn stieltjes(params: &WeightParams, n_max: usize) -> Result<RecurrenceTable, RecurrenceError> {
    let rule = composite_rule(params, nodes_for_degree(n_max))?;
    stieltjes_with_rule(params, &rule, n_max)
}

/// Stieltjes procedure on a caller-supplied rule.
pub fn stieltjes_with_rule(
    params: &WeightParams,
    rule: &QuadratureRule,
    n_max: usize,
) -> Result<RecurrenceTable, RecurrenceError> {
    if n_max == 0 {
        return Err(RecurrenceError::EmptyRequest);
    }
    let supported = rule.max_recurrence_index();
    if n_max > supported {
        return Err(RecurrenceError::DegreeTooHighForRule { requested: n_max, supported });
    }
    let x = &rule.nodes;
    let w = &rule.weights;
    let m = x.len();
    let mut p: Vec<f64> = vec![1.0; m];
    let mut p_prev: Vec<f64> = vec![0.0; m];
    let mut b = Vec::with_capacity(n_max);
    let mut a2 = Vec::with_capacity(n_max + 1);
    let mut norm_prev = 0.0;

    for n in 0..=n_max {
        if n > 0 && n % RESCALE_STRIDE == 0 {
            let s = p.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if s > 0.0 {
                let inv = 1.0 / s;
                p.iter_mut().for_each(|v| *v *= inv);
                p_prev.iter_mut().for_each(|v| *v *= inv);
                norm_prev *= inv * inv;
            }
        }
        let mut norm = NeumaierSum::default();
        let mut xnorm = NeumaierSum::default();
        for k in 0..m {
            let t = w[k] * p[k] * p[k];
            norm.add(t);
            xnorm.add(t * x[k]);
        }
        let norm = norm.total();
        if n == 0 {
            a2.push(norm);
        } else {
            let v = norm / norm_prev;
            if !(v > 0.0) {
                return Err(RecurrenceError::NonPositiveA2 { index: n, value: v });
            }
            a2.push(v);
        }
        if n == n_max {
            break;
        }
        let bn = xnorm.total() / norm;
        if !(bn > -1.0 && bn < 1.0) {
            return Err(RecurrenceError::BOutOfRange { index: n, value: bn });
        }
        b.push(bn);
        let an2 = if n == 0 { 0.0 } else { a2[n] };
        for k in 0..m {
            let next = (x[k] - bn) * p[k] - an2 * p_prev[k];
            p_prev[k] = p[k];
            p[k] = next;
        }
        norm_prev = norm;
    }

    Ok(RecurrenceTable { params: params.clone(), n_max, b, a2, drift: None })
}

/// Runs the procedure twice, the second time with doubled node density, and
/// records the largest change in any `a_n` or `b_n` as the table's drift.
pub fn stieltjes_paranoid(
    params: &WeightParams,
    n_max: usize,
) -> Result<RecurrenceTable, RecurrenceError> {
    let mut base = stieltjes(params, n_max)?;
    let fine_rule = composite_rule(params, 2 * nodes_for_degree(n_max))?;
    let fine = stieltjes_with_rule(params, &fine_rule, n_max)?;
    base.drift = Some(max_drift(&base, &fine));
    Ok(base)
}

/// Largest difference in `a_n` (`n >= 1`) or `b_n` between two tables.
pub fn max_drift(t1: &RecurrenceTable, t2: &RecurrenceTable) -> f64 {
    let n = t1.n_max.min(t2.n_max);
    let db = (0..n).map(|k| (t1.b[k] - t2.b[k]).abs());
    let da = (1..=n).map(|k| (t1.a(k) - t2.a(k)).abs());
    db.chain(da).fold(0.0, f64::max)
}

/// Monic `P_n(x)` by forward recurrence.
pub fn eval_monic(table: &RecurrenceTable, n: usize, x: f64) -> Result<f64, RecurrenceError> {
    if n > table.n_max {
        return Err(RecurrenceError::IndexOutOfRange { n, n_max: table.n_max });
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let an2 = if k == 0 { 0.0 } else { table.a2[k] };
        let next = (x - table.b[k]) * cur - an2 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `<P_j, P_k>` by the given rule.
pub fn inner_product(
    table: &RecurrenceTable,
    rule: &QuadratureRule,
    j: usize,
    k: usize,
) -> Result<f64, RecurrenceError> {
    let mut acc = NeumaierSum::default();
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc.add(w * eval_monic(table, j, x)? * eval_monic(table, k, x)?);
    }
    Ok(acc.total())
}

/// CSV with header `n,b_n,a_n2,a_n`.
///
/// Rows run over `n = 0..=n_max`; the `b_n` field is empty for `n = n_max`
/// and the `a` fields are empty for `n = 0`.
pub fn to_csv(table: &RecurrenceTable) -> String {
    let mut out = String::from("n,b_n,a_n2,a_n\n");
    for n in 0..=table.n_max {
        let b = if n < table.n_max { crate::fmt17(table.b[n]) } else { String::new() };
        let (a2, a) = if n >= 1 {
            (crate::fmt17(table.a2[n]), crate::fmt17(table.a(n)))
        } else {
            (String::new(), String::new())
        };
        out.push_str(&format!("{n},{b},{a2},{a}\n"));
    }
    out
}
