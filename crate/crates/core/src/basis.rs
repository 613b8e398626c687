//! (p,q)-Bernstein basis functions and their recurrences.
//!
//! The basis of degree `n` is
//!
//! ```text
//! B^{k,n}(t) = p^{-n(n-1)/2} [n; k]_{p,q} p^{k(k-1)/2} t^k Π_{s=0}^{n-k-1} (p^s - q^s t)
//! ```
//!
//! and is zero for `k` outside `0..=n`. The powers of `p` contributed by the
//! prefactor, the binomial and the product cancel exactly, so evaluation
//! works with the ratio `r = q / p`:
//!
//! ```text
//! B^{k,n}(t) = [n; k]_{1,r} t^k Π_{s=0}^{n-k-1} (1 - r^s t)
//! ```
//!
//! which keeps every intermediate in the range of the result and makes the
//! end-point values `B^{0,n}(0) = B^{n,n}(1) = 1` exact for every `(p, q)`.
//!
//! The two degree-reduction recurrences and the two-term degree elevation
//! carry their normalization factors here. The [`Form::Uncorrected`] variants
//! omit them and exist for [`crate::audit`].

use crate::error::Result;
use crate::pq_arith::{check_degree, pq_binomial, pq_integer, PQParams};

/// Index `k` of a basis function of degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub k: i64,
    pub n: usize,
}

impl BasisIndex {
    pub fn new(k: i64, n: usize) -> Self {
        BasisIndex { k, n }
    }

    pub fn in_range(&self) -> bool {
        self.k >= 0 && self.k as usize <= self.n
    }
}

/// Which normalization a recurrence is evaluated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Normalized so that it reproduces the basis exactly.
    Corrected,
    /// The recurrence without its normalization factor.
    Uncorrected,
}

pub fn basis_value(index: BasisIndex, t: f64, params: PQParams) -> Result<f64> {
    check_degree(index.n)?;
    Ok(eval_basis(index.k, index.n, t, params))
}

/// All `n + 1` basis values of degree `n` at `t`.
pub fn basis_row(n: usize, t: f64, params: PQParams) -> Result<Vec<f64>> {
    check_degree(n)?;
    Ok(eval_row(n, t, params))
}

pub(crate) fn eval_row(n: usize, t: f64, params: PQParams) -> Vec<f64> {
    (0..=n as i64)
        .map(|k| eval_basis(k, n, t, params))
        .collect()
}

pub(crate) fn eval_basis(k: i64, n: usize, t: f64, params: PQParams) -> f64 {
    if k < 0 || k as usize > n {
        return 0.0;
    }
    let k = k as usize;
    let ratio = params.q() / params.p();
    let reduced = PQParams::new(1.0, ratio).expect("ratio of positive parameters");
    let mut value = pq_binomial(n, k as i64, reduced) * t.powi(k as i32);
    let mut ratio_pow = 1.0;
    for _ in 0..n - k {
        value *= 1.0 - ratio_pow * t;
        ratio_pow *= ratio;
    }
    value
}

/// Rebuilds `B^{k,n}(t)` from `lower = [B^{k-1,n-1}(t), B^{k,n-1}(t)]` with
///
/// ```text
/// B^{k,n} = p^{-(n-1)} [ q^{n-k} p^{k-1} t B^{k-1,n-1} + (p^{n-1} - p^k q^{n-k-1} t) B^{k,n-1} ]
/// ```
///
/// `n` must be at least 1.
pub fn reduce_step_a(k: i64, n: usize, t: f64, params: PQParams, lower: [f64; 2]) -> f64 {
    reduce_step_a_form(k, n, t, params, lower, Form::Corrected)
}

/// Rebuilds `B^{k,n}(t)` with
///
/// ```text
/// B^{k,n} = t B^{k-1,n-1} + p^{-(n-1)} (q^k p^{n-k-1} - q^{n-1} t) B^{k,n-1}
/// ```
pub fn reduce_step_b(k: i64, n: usize, t: f64, params: PQParams, lower: [f64; 2]) -> f64 {
    reduce_step_b_form(k, n, t, params, lower, Form::Corrected)
}

pub fn reduce_step_a_form(
    k: i64,
    n: usize,
    t: f64,
    params: PQParams,
    lower: [f64; 2],
    form: Form,
) -> f64 {
    assert!(n >= 1, "reduction needs degree >= 1");
    let n = n as i64;
    let [left, right] = lower;
    let left_weight = params.q_pow(n - k) * params.p_pow(k - 1) * t;
    let right_weight = params.p_pow(n - 1) - params.p_pow(k) * params.q_pow(n - k - 1) * t;
    let value = left_weight * left + right_weight * right;
    match form {
        Form::Corrected => value / params.p_pow(n - 1),
        Form::Uncorrected => value,
    }
}

pub fn reduce_step_b_form(
    k: i64,
    n: usize,
    t: f64,
    params: PQParams,
    lower: [f64; 2],
    form: Form,
) -> f64 {
    assert!(n >= 1, "reduction needs degree >= 1");
    let n = n as i64;
    let [left, right] = lower;
    let right_weight = params.q_pow(k) * params.p_pow(n - k - 1) - params.q_pow(n - 1) * t;
    match form {
        Form::Corrected => t * left + right_weight * right / params.p_pow(n - 1),
        Form::Uncorrected => params.p_pow(n - 1) * t * left + right_weight * right,
    }
}

/// Weights of the two-term elevation `B^{k,n} = alpha B^{k,n+1} + beta B^{k+1,n+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElevationCoeffs {
    pub alpha: f64,
    pub beta: f64,
}

/// `alpha = p^k [n+1-k] / [n+1]`, `beta = 1 - p^{k+1} [n-k] / [n+1]`.
///
/// `beta` also equals `q^{n-k} [k+1] / [n+1]`. Both lie in `[0, 1]` when `p >= q`.
pub fn elevation_coeffs(k: usize, n: usize, params: PQParams) -> ElevationCoeffs {
    elevation_coeffs_form(k, n, params, Form::Corrected)
}

/// The uncorrected form scales `alpha` by `p^{-n}` and `beta` by `p^{-n}`.
pub fn elevation_coeffs_form(k: usize, n: usize, params: PQParams, form: Form) -> ElevationCoeffs {
    debug_assert!(k <= n);
    let top = pq_integer(n + 1, params);
    let alpha = params.p_pow(k as i64) * pq_integer(n + 1 - k, params) / top;
    let beta = 1.0 - params.p_pow(k as i64 + 1) * pq_integer(n - k, params) / top;
    match form {
        Form::Corrected => ElevationCoeffs { alpha, beta },
        Form::Uncorrected => {
            let scale = params.p_pow(-(n as i64));
            ElevationCoeffs {
                alpha: alpha * scale,
                beta: beta * scale,
            }
        }
    }
}

/// Weight `alpha'_k = p^k [n+1-k] / [n+1]` carried by `P_k` in the elevated
/// control point `P*_k = alpha'_k P_k + (1 - alpha'_k) P_{k-1}`.
pub(crate) fn elevation_weight(k: usize, n: usize, params: PQParams) -> f64 {
    if k > n {
        return 0.0;
    }
    params.p_pow(k as i64) * pq_integer(n + 1 - k, params) / pq_integer(n + 1, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pq(p: f64, q: f64) -> PQParams {
        PQParams::new(p, q).unwrap()
    }

    const PARAMS: [(f64, f64); 5] = [(1.0, 1.0), (1.0, 0.5), (0.8, 0.5), (1.2, 1.1), (2.0, 1.0)];

    fn grid(count: usize) -> impl Iterator<Item = f64> {
        (0..count).map(move |i| i as f64 / (count - 1) as f64)
    }

    fn value(k: i64, n: usize, t: f64, params: PQParams) -> f64 {
        basis_value(BasisIndex::new(k, n), t, params).unwrap()
    }

    /// Literal evaluation: prefactor, binomial, p^{k(k-1)/2}, t^k and the product.
    fn literal_basis(k: usize, n: usize, t: f64, p: f64, q: f64) -> f64 {
        let int = |m: usize| {
            (0..m)
                .map(|i| p.powi((m - 1 - i) as i32) * q.powi(i as i32))
                .sum::<f64>()
        };
        let fact = |m: usize| (1..=m).map(int).product::<f64>();
        let binom = fact(n) / (fact(k) * fact(n - k));
        let product: f64 = (0..n - k)
            .map(|s| p.powi(s as i32) - q.powi(s as i32) * t)
            .product();
        let exponent =
            (k * k.saturating_sub(1)) as f64 / 2.0 - (n * n.saturating_sub(1)) as f64 / 2.0;
        p.powf(exponent) * binom * t.powi(k as i32) * product
    }

    #[test]
    fn matches_literal_definition() {
        for &(p, q) in &PARAMS {
            for n in 0..=12 {
                for t in grid(21) {
                    for k in 0..=n {
                        let expected = literal_basis(k, n, t, p, q);
                        assert!((value(k as i64, n, t, pq(p, q)) - expected).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn value_examples() {
        for &(p, q) in &PARAMS {
            let params = pq(p, q);
            assert_eq!(value(0, 3, 0.0, params), 1.0);
            assert_eq!(value(3, 3, 1.0, params), 1.0);
            for t in grid(11) {
                let blend = pq_binomial(3, 1, params) * t * (1.0 - t) * (p - q * t) / p.powi(3);
                assert!((value(1, 3, t, params) - blend).abs() <= 1e-14);
            }
        }
        // q-basis [2;1]_q t (1 - t) at q = 0.5, t = 0.5
        assert_relative_eq!(value(1, 2, 0.5, pq(1.0, 0.5)), 0.375, max_relative = 1e-15);
        assert_eq!(value(-1, 3, 0.5, pq(1.0, 0.5)), 0.0);
        assert_eq!(value(4, 3, 0.5, pq(1.0, 0.5)), 0.0);
    }

    #[test]
    fn degree_guard() {
        assert!(basis_value(BasisIndex::new(0, 65), 0.5, pq(1.0, 0.5)).is_err());
        assert!(basis_row(65, 0.5, pq(1.0, 0.5)).is_err());
        let row = basis_row(64, 0.5, pq(2.0, 1.0)).unwrap();
        assert!(row.iter().all(|v| v.is_finite()));
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12 * 65.0);
    }

    #[test]
    fn row_examples() {
        for &(p, q) in &PARAMS {
            for t in grid(11) {
                let row = basis_row(1, t, pq(p, q)).unwrap();
                assert_eq!(row, vec![1.0 - t, t]);
            }
            assert_eq!(
                basis_row(3, 0.0, pq(p, q)).unwrap(),
                vec![1.0, 0.0, 0.0, 0.0]
            );
        }
        // Frozen from a 50-digit evaluation of the definition.
        let row = basis_row(3, 0.4, pq(0.8, 0.5)).unwrap();
        let expected = [0.3796875, 0.3628125, 0.1935, 0.064];
        for (a, b) in row.iter().zip(expected) {
            assert_relative_eq!(*a, b, max_relative = 1e-14);
        }
        assert_relative_eq!(row.iter().sum::<f64>(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn end_points_are_unit_vectors() {
        for &(p, q) in &[
            (1.0, 0.5),
            (0.8, 0.5),
            (1.2, 1.1),
            (2.0, 1.0),
            (0.37, 0.11),
            (3.0, 2.9),
        ] {
            for n in 0..=20 {
                let start = basis_row(n, 0.0, pq(p, q)).unwrap();
                let end = basis_row(n, 1.0, pq(p, q)).unwrap();
                for k in 0..=n {
                    assert_eq!(start[k], if k == 0 { 1.0 } else { 0.0 });
                    assert_eq!(end[k], if k == n { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let params = pq(0.8, 0.5);
        for t in grid(11) {
            assert_eq!(reduce_step_a(0, 1, t, params, [0.0, 1.0]), 1.0 - t);
            assert_eq!(reduce_step_b(0, 1, t, params, [0.0, 1.0]), 1.0 - t);
            let lower = [value(0, 1, t, params), value(1, 1, t, params)];
            let expected = 1.3 * t * (1.0 - t) / 0.8;
            assert!((reduce_step_a(1, 2, t, params, lower) - expected).abs() < 1e-15);
            assert!((reduce_step_b(1, 2, t, params, lower) - expected).abs() < 1e-15);
            let literal = reduce_step_a_form(1, 2, t, params, lower, Form::Uncorrected);
            assert!((literal - 1.3 * t * (1.0 - t)).abs() < 1e-15);
        }
    }

    #[test]
    fn rows_from_reduction_recurrences() {
        for &(p, q) in &PARAMS {
            let params = pq(p, q);
            for t in grid(101) {
                let mut row_a = vec![1.0];
                let mut row_b = vec![1.0];
                for n in 1..=12usize {
                    let step = |row: &[f64], f: fn(i64, usize, f64, PQParams, [f64; 2]) -> f64| {
                        (0..=n as i64)
                            .map(|k| {
                                let get = |j: i64| {
                                    if j < 0 || j as usize >= row.len() {
                                        0.0
                                    } else {
                                        row[j as usize]
                                    }
                                };
                                f(k, n, t, params, [get(k - 1), get(k)])
                            })
                            .collect::<Vec<_>>()
                    };
                    row_a = step(&row_a, reduce_step_a);
                    row_b = step(&row_b, reduce_step_b);
                    let direct = basis_row(n, t, params).unwrap();
                    for k in 0..=n {
                        assert!((row_a[k] - direct[k]).abs() <= 1e-10);
                        assert!((row_b[k] - direct[k]).abs() <= 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn elevation_coefficient_examples() {
        let params = pq(0.8, 0.5);
        let (p, q) = (0.8, 0.5);

        let c = elevation_coeffs(0, 1, params);
        assert_relative_eq!(c.alpha, 1.0, max_relative = 1e-15);
        assert_relative_eq!(c.beta, q / (p + q), max_relative = 1e-14);

        for n in 0..=6 {
            let c = elevation_coeffs(n, n, params);
            assert_eq!(c.beta, 1.0);
            assert_relative_eq!(
                c.alpha,
                p.powi(n as i32) / pq_integer(n + 1, params),
                max_relative = 1e-14
            );
            for t in grid(21) {
                let lhs = value(n as i64, n, t, params);
                let rhs = c.alpha * value(n as i64, n + 1, t, params)
                    + value(n as i64 + 1, n + 1, t, params);
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
    }

    /// Two-term elevation of the Phillips q-basis:
    /// `b^{k,n} = ([n+1-k]_q/[n+1]_q) b^{k,n+1} + (q^{n-k}[k+1]_q/[n+1]_q) b^{k+1,n+1}`.
    #[test]
    fn elevation_at_p_one_is_q_elevation() {
        let q: f64 = 0.5;
        let q_int = |m: usize| (0..m).map(|i| q.powi(i as i32)).sum::<f64>();
        for n in 0..=10 {
            for k in 0..=n {
                let c = elevation_coeffs(k, n, pq(1.0, q));
                assert_relative_eq!(
                    c.alpha,
                    q_int(n + 1 - k) / q_int(n + 1),
                    max_relative = 1e-14
                );
                let expected = q.powi((n - k) as i32) * q_int(k + 1) / q_int(n + 1);
                assert!((c.beta - expected).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn elevation_identity_and_bounds() {
        for &(p, q) in &PARAMS {
            let params = pq(p, q);
            for n in 0..=11 {
                for k in 0..=n {
                    let c = elevation_coeffs(k, n, params);
                    assert!((0.0..=1.0).contains(&c.alpha), "alpha {c:?}");
                    assert!((-1e-15..=1.0).contains(&c.beta), "beta {c:?}");
                    let beta_alt = params.q_pow((n - k) as i64) * pq_integer(k + 1, params)
                        / pq_integer(n + 1, params);
                    assert!((c.beta - beta_alt).abs() <= 1e-12);
                    for t in grid(101) {
                        let rhs = c.alpha * value(k as i64, n + 1, t, params)
                            + c.beta * value(k as i64 + 1, n + 1, t, params);
                        assert!((value(k as i64, n, t, params) - rhs).abs() <= 1e-10);
                    }
                }
                // weight arriving at B^{j,n+1}
                for j in 1..=n {
                    let total = elevation_coeffs(j, n, params).alpha
                        + elevation_coeffs(j - 1, n, params).beta;
                    assert!((total - 1.0).abs() <= 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity(n in 0usize..=12, t in 0.0f64..=1.0, p in 0.1f64..2.0, ratio in 0.01f64..=1.25) {
            let sum: f64 = basis_row(n, t, pq(p, p * ratio)).unwrap().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12 * (n + 1) as f64);
        }

        #[test]
        fn non_negative_when_ordered(n in 0usize..=16, t in 0.0f64..=1.0, p in 0.05f64..3.0, frac in 0.01f64..=1.0) {
            let params = pq(p, p * frac);
            for v in basis_row(n, t, params).unwrap() {
                prop_assert!(v >= 0.0);
            }
        }
    }
}
