//! (p,q)-integer arithmetic.
//!
//! `[n]_{p,q} = p^{n-1} + p^{n-2} q + ... + q^{n-1}` is always evaluated as a
//! sum, never as the quotient `(p^n - q^n) / (p - q)`, so `p == q` is an
//! ordinary input and `p ≈ q` does not cancel catastrophically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by any degree-checked operation.
pub const MAX_DEGREE: usize = 64;

pub(crate) fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        Err(Error::DegreeTooHigh { degree })
    } else {
        Ok(())
    }
}

/// The shape-parameter pair `(p, q)`.
///
/// Any `p, q > 0` is accepted. Non-negativity of the basis and the
/// convex-hull guarantees only hold when the pair is [ordered](Self::is_ordered),
/// i.e. `p >= q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct PQParams {
    p: f64,
    q: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    p: f64,
    q: f64,
}

impl TryFrom<RawParams> for PQParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        PQParams::new(raw.p, raw.q)
    }
}

impl From<PQParams> for RawParams {
    fn from(params: PQParams) -> Self {
        RawParams {
            p: params.p,
            q: params.q,
        }
    }
}

impl PQParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if p.is_finite() && q.is_finite() && p > 0.0 && q > 0.0 {
            Ok(PQParams { p, q })
        } else {
            Err(Error::InvalidParams { p, q })
        }
    }

    /// `p = q = 1`: the classical Bernstein setting.
    pub const CLASSICAL: PQParams = PQParams { p: 1.0, q: 1.0 };

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_ordered(&self) -> bool {
        self.p >= self.q
    }

    /// Integer power of `p`; negative exponents are allowed.
    pub(crate) fn p_pow(&self, exp: i64) -> f64 {
        pow_i(self.p, exp)
    }

    pub(crate) fn q_pow(&self, exp: i64) -> f64 {
        pow_i(self.q, exp)
    }
}

pub(crate) fn pow_i(base: f64, exp: i64) -> f64 {
    match i32::try_from(exp) {
        Ok(e) => base.powi(e),
        Err(_) => base.powf(exp as f64),
    }
}

/// `[n]_{p,q} = Σ_{i=0}^{n-1} p^{n-1-i} q^i`.
pub fn pq_integer(n: usize, params: PQParams) -> f64 {
    // Horner form of the sum: [m] = p [m-1] + q^{m-1}.
    let mut sum = 0.0;
    let mut q_pow = 1.0;
    for _ in 0..n {
        sum = sum * params.p + q_pow;
        q_pow *= params.q;
    }
    sum
}

/// `[n]_{p,q}! = [1][2]...[n]`, with `[0]! = 1`.
pub fn pq_factorial(n: usize, params: PQParams) -> Result<f64> {
    check_degree(n)?;
    let mut product = 1.0;
    for i in 1..=n {
        product *= pq_integer(i, params);
    }
    if product.is_finite() {
        Ok(product)
    } else {
        Err(Error::FactorialOverflow { n })
    }
}

/// The (p,q)-binomial coefficient `[n; k]_{p,q}`; zero when `k` is out of `0..=n`.
///
/// Evaluated as `Π_{i=1}^{k'} [n-k'+i] / [i]` with `k' = min(k, n-k)`, which
/// equals `[n]! / ([k]! [n-k]!)` without forming the full factorials.
pub fn pq_binomial(n: usize, k: i64, params: PQParams) -> f64 {
    if k < 0 || k as usize > n {
        return 0.0;
    }
    let k = (k as usize).min(n - k as usize);
    let mut value = 1.0;
    for i in 1..=k {
        value *= pq_integer(n - k + i, params) / pq_integer(i, params);
    }
    value
}

/// The full row `[n; 0], ..., [n; n]` built with the Pascal recurrence
/// `[n; k] = q^{n-k} [n-1; k-1] + p^k [n-1; k]`.
pub fn pq_binomial_row(n: usize, params: PQParams) -> Vec<f64> {
    let mut row = vec![1.0];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let left = if k >= 1 { row[k - 1] } else { 0.0 };
            let right = if k < m { row[k] } else { 0.0 };
            next.push(params.q_pow((m - k) as i64) * left + params.p_pow(k as i64) * right);
        }
        row = next;
    }
    row
}

/// `(1 - t)^n_{p,q} = Π_{s=0}^{n-1} (p^s - q^s t)`.
pub fn one_minus_t_product(t: f64, n: usize, params: PQParams) -> f64 {
    let mut product = 1.0;
    let (mut p_s, mut q_s) = (1.0, 1.0);
    for _ in 0..n {
        product *= p_s - q_s * t;
        p_s *= params.p;
        q_s *= params.q;
    }
    product
}

/// Power-basis coefficients `c_k` with `Σ c_k t^k = (1 - t)^n_{p,q}`:
/// `c_k = (-1)^k p^{(n-k)(n-k-1)/2} q^{k(k-1)/2} [n; k]_{p,q}`.
pub fn one_minus_t_expansion(n: usize, params: PQParams) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let rest = n - k;
            let p_exp = (rest * rest.saturating_sub(1) / 2) as i64;
            let q_exp = (k * k.saturating_sub(1) / 2) as i64;
            sign * params.p_pow(p_exp) * params.q_pow(q_exp) * pq_binomial(n, k as i64, params)
        })
        .collect()
}
