//! Numerical audit of the recurrence and elevation identities.
//!
//! Each identity is checked in two forms on a `(degree, params, t)` grid:
//! the corrected form used throughout this crate, and the uncorrected form
//! that omits the normalizing power of `p`. For every record the audit
//! reports
//!
//! * the largest residual of the corrected form (must stay below
//!   [`CORRECTED_TOLERANCE`], otherwise the record is `FAILED`),
//! * the largest residual of the uncorrected form,
//! * the discrepancy factor, least-squares fitted as
//!   `uncorrected ≈ factor · corrected` on the side of the identity that
//!   the correction changes, and the same factor as a power of `p`.
//!
//! | id                  | identity                                                         | expected factor |
//! |---------------------|------------------------------------------------------------------|-----------------|
//! | `pascal-q`          | `[n;k] = q^{n-k}[n-1;k-1] + p^k[n-1;k]`                          | 1               |
//! | `pascal-p`          | `[n;k] = p^{n-k}[n-1;k-1] + q^k[n-1;k]`                          | 1               |
//! | `reduction-a`       | `B^{k,n}` from `B^{k-1,n-1}, B^{k,n-1}` (first recurrence)       | `p^{n-1}`       |
//! | `reduction-b`       | `B^{k,n}` from `B^{k-1,n-1}, B^{k,n-1}` (second recurrence)      | `p^{n-1}`       |
//! | `elevation-upper`   | `p^{-n} q^{n-k} p^k t B^{k,n} = beta B^{k+1,n+1}`                 | `p^n`           |
//! | `elevation-lower`   | `p^{-n} (p^n - p^k q^{n-k} t) B^{k,n} = alpha B^{k,n+1}`          | `p^n`           |
//! | `elevation-weight`  | `q^{n-k}[k+1]/[n+1] = 1 - p^{k+1}[n-k]/[n+1]`                    | 1               |
//! | `elevation-two-term`| `B^{k,n} = alpha B^{k,n+1} + beta B^{k+1,n+1}`                    | `p^{-n}`        |
//!
//! Pascal residuals are relative to the binomial; all other residuals are absolute.

use std::fmt::Write as _;

use serde::Serialize;

use crate::basis::{
    elevation_coeffs_form, eval_basis, reduce_step_a_form, reduce_step_b_form, Form,
};
use crate::error::{Error, Result};
use crate::pq_arith::{check_degree, pq_binomial, pq_integer, PQParams};

pub const CORRECTED_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityId {
    PascalQ,
    PascalP,
    ReductionA,
    ReductionB,
    ElevationUpper,
    ElevationLower,
    ElevationWeight,
    ElevationTwoTerm,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::PascalQ,
        IdentityId::PascalP,
        IdentityId::ReductionA,
        IdentityId::ReductionB,
        IdentityId::ElevationUpper,
        IdentityId::ElevationLower,
        IdentityId::ElevationWeight,
        IdentityId::ElevationTwoTerm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::PascalQ => "pascal-q",
            IdentityId::PascalP => "pascal-p",
            IdentityId::ReductionA => "reduction-a",
            IdentityId::ReductionB => "reduction-b",
            IdentityId::ElevationUpper => "elevation-upper",
            IdentityId::ElevationLower => "elevation-lower",
            IdentityId::ElevationWeight => "elevation-weight",
            IdentityId::ElevationTwoTerm => "elevation-two-term",
        }
    }

    /// Exponent `e` of the expected discrepancy factor `p^e` at degree `n`.
    pub fn expected_exponent(&self, n: usize) -> i64 {
        let n = n as i64;
        match self {
            IdentityId::PascalQ | IdentityId::PascalP | IdentityId::ElevationWeight => 0,
            IdentityId::ReductionA | IdentityId::ReductionB => n - 1,
            IdentityId::ElevationUpper | IdentityId::ElevationLower => n,
            IdentityId::ElevationTwoTerm => -n,
        }
    }

    /// Smallest degree the identity is stated for.
    fn min_degree(&self) -> usize {
        match self {
            IdentityId::PascalQ
            | IdentityId::PascalP
            | IdentityId::ReductionA
            | IdentityId::ReductionB => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AuditStatus {
    Passed,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub identity: IdentityId,
    pub p: f64,
    pub q: f64,
    pub degree: usize,
    pub residual_corrected: f64,
    pub residual_uncorrected: f64,
    pub discrepancy_factor: f64,
    /// `log_p(discrepancy_factor)`; absent when `p = 1`.
    pub discrepancy_exponent: Option<f64>,
    pub expected_exponent: i64,
    pub expected_factor: f64,
    pub grid: String,
    pub status: AuditStatus,
}

impl AuditReport {
    pub fn factor_relative_error(&self) -> f64 {
        (self.discrepancy_factor - self.expected_factor).abs() / self.expected_factor.abs()
    }
}

/// Residual accumulator and least-squares fit of `uncorrected ≈ f · corrected`.
#[derive(Default)]
struct Accumulator {
    residual_corrected: f64,
    residual_uncorrected: f64,
    cross: f64,
    square: f64,
}

impl Accumulator {
    fn add(&mut self, truth: f64, corrected: f64, uncorrected: f64, scale: f64) {
        let corrected_residual = (corrected - truth).abs() / scale;
        // NaN must surface as a failure, so avoid f64::max here.
        if corrected_residual.is_nan() || corrected_residual > self.residual_corrected {
            self.residual_corrected = corrected_residual;
        }
        self.residual_uncorrected = self
            .residual_uncorrected
            .max((uncorrected - truth).abs() / scale);
        self.cross += uncorrected * corrected;
        self.square += corrected * corrected;
    }

    fn factor(&self) -> f64 {
        if self.square == 0.0 {
            1.0
        } else {
            self.cross / self.square
        }
    }
}

pub fn default_params() -> Vec<PQParams> {
    [(1.0, 0.5), (0.8, 0.5), (1.2, 1.1), (2.0, 1.0)]
        .iter()
        .map(|&(p, q)| PQParams::new(p, q).expect("valid default params"))
        .collect()
}

pub fn uniform_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| i as f64 / (count - 1) as f64).collect(),
    }
}

/// Runs every identity for each degree in `0..=n_max` and each parameter pair.
pub fn identity_audit(
    n_max: usize,
    params_set: &[PQParams],
    t_grid: &[f64],
) -> Result<Vec<AuditReport>> {
    if params_set.is_empty() || t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_degree(n_max + 1)?;
    let grid = format!(
        "{} t-values in [{}, {}], k = 0..=n",
        t_grid.len(),
        t_grid.iter().cloned().fold(f64::INFINITY, f64::min),
        t_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    );
    let mut reports = Vec::new();
    for identity in IdentityId::ALL {
        for &params in params_set {
            for n in identity.min_degree()..=n_max {
                let acc = audit_one(identity, n, params, t_grid);
                let expected_exponent = identity.expected_exponent(n);
                let factor = acc.factor();
                let exponent = if params.p() == 1.0 {
                    None
                } else {
                    Some(factor.ln() / params.p().ln())
                };
                let status = if acc.residual_corrected <= CORRECTED_TOLERANCE {
                    AuditStatus::Passed
                } else {
                    AuditStatus::Failed
                };
                reports.push(AuditReport {
                    identity,
                    p: params.p(),
                    q: params.q(),
                    degree: n,
                    residual_corrected: acc.residual_corrected,
                    residual_uncorrected: acc.residual_uncorrected,
                    discrepancy_factor: factor,
                    discrepancy_exponent: exponent,
                    expected_exponent,
                    expected_factor: params.p_pow(expected_exponent),
                    grid: grid.clone(),
                    status,
                });
            }
        }
    }
    Ok(reports)
}

fn audit_one(identity: IdentityId, n: usize, params: PQParams, t_grid: &[f64]) -> Accumulator {
    let mut acc = Accumulator::default();
    let b = |k: i64, m: usize, t: f64| eval_basis(k, m, t, params);
    let p_n = params.p_pow(n as i64);
    match identity {
        IdentityId::PascalQ | IdentityId::PascalP => {
            for k in 0..=n as i64 {
                let target = pq_binomial(n, k, params);
                let left = pq_binomial(n - 1, k - 1, params);
                let right = pq_binomial(n - 1, k, params);
                let rebuilt = if identity == IdentityId::PascalQ {
                    params.q_pow(n as i64 - k) * left + params.p_pow(k) * right
                } else {
                    params.p_pow(n as i64 - k) * left + params.q_pow(k) * right
                };
                acc.add(target, rebuilt, rebuilt, target.abs().max(1.0));
            }
        }
        IdentityId::ElevationWeight => {
            for k in 0..=n {
                let stated = params.q_pow((n - k) as i64) * pq_integer(k + 1, params)
                    / pq_integer(n + 1, params);
                let beta = elevation_coeffs_form(k, n, params, Form::Corrected).beta;
                acc.add(stated, beta, beta, 1.0);
            }
        }
        _ => {
            for &t in t_grid {
                for k in 0..=n as i64 {
                    let (truth, corrected, uncorrected) = match identity {
                        IdentityId::ReductionA | IdentityId::ReductionB => {
                            let lower = [b(k - 1, n - 1, t), b(k, n - 1, t)];
                            let step = if identity == IdentityId::ReductionA {
                                reduce_step_a_form
                            } else {
                                reduce_step_b_form
                            };
                            (
                                b(k, n, t),
                                step(k, n, t, params, lower, Form::Corrected),
                                step(k, n, t, params, lower, Form::Uncorrected),
                            )
                        }
                        IdentityId::ElevationUpper => {
                            let ku = k as usize;
                            let beta = elevation_coeffs_form(ku, n, params, Form::Corrected).beta;
                            let lhs = params.q_pow(n as i64 - k) * params.p_pow(k) * t * b(k, n, t);
                            (beta * b(k + 1, n + 1, t), lhs / p_n, lhs)
                        }
                        IdentityId::ElevationLower => {
                            let ku = k as usize;
                            let alpha = elevation_coeffs_form(ku, n, params, Form::Corrected).alpha;
                            let lhs = (p_n - params.p_pow(k) * params.q_pow(n as i64 - k) * t)
                                * b(k, n, t);
                            (alpha * b(k, n + 1, t), lhs / p_n, lhs)
                        }
                        IdentityId::ElevationTwoTerm => {
                            let ku = k as usize;
                            let rhs = |form| {
                                let c = elevation_coeffs_form(ku, n, params, form);
                                c.alpha * b(k, n + 1, t) + c.beta * b(k + 1, n + 1, t)
                            };
                            (b(k, n, t), rhs(Form::Corrected), rhs(Form::Uncorrected))
                        }
                        _ => unreachable!(),
                    };
                    acc.add(truth, corrected, uncorrected, 1.0);
                }
            }
        }
    }
    acc
}

pub fn any_failed(reports: &[AuditReport]) -> bool {
    reports.iter().any(|r| r.status == AuditStatus::Failed)
}

/// Fixed-width text table, one line per record.
pub fn format_table(reports: &[AuditReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<19} {:>6} {:>6} {:>3} {:>12} {:>12} {:>14} {:>9} {:>9}  status",
        "identity", "p", "q", "n", "res(corr)", "res(uncorr)", "factor", "exp(fit)", "exp(p^e)"
    );
    for r in reports {
        let exponent = match r.discrepancy_exponent {
            Some(e) => format!("{e:.6}"),
            None => "-".to_string(),
        };
        let status = match r.status {
            AuditStatus::Passed => "ok",
            AuditStatus::Failed => "FAILED",
        };
        let _ = writeln!(
            out,
            "{:<19} {:>6} {:>6} {:>3} {:>12.3e} {:>12.3e} {:>14.8e} {:>9} {:>9}  {}",
            r.identity.as_str(),
            r.p,
            r.q,
            r.degree,
            r.residual_corrected,
            r.residual_uncorrected,
            r.discrepancy_factor,
            exponent,
            r.expected_exponent,
            status
        );
    }
    let failed = reports
        .iter()
        .filter(|r| r.status == AuditStatus::Failed)
        .count();
    let _ = writeln!(out, "{} records, {} failed", reports.len(), failed);
    out
}

/// JSON document with one record per `(identity, params, degree)`.
pub fn to_json(reports: &[AuditReport]) -> String {
    serde_json::to_string_pretty(reports).expect("audit reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(p: f64, q: f64) -> PQParams {
        PQParams::new(p, q).unwrap()
    }

    #[test]
    fn empty_grids_are_rejected() {
        assert_eq!(
            identity_audit(3, &[], &[0.5]).unwrap_err(),
            Error::EmptyGrid
        );
        assert_eq!(
            identity_audit(3, &[pq(1.0, 0.5)], &[]).unwrap_err(),
            Error::EmptyGrid
        );
        assert!(identity_audit(64, &[pq(1.0, 0.5)], &[0.5]).is_err());
    }

    #[test]
    fn corrected_forms_pass_and_factors_match() {
        let params = [pq(1.0, 0.5), pq(0.8, 0.5), pq(1.2, 1.1)];
        let reports = identity_audit(10, &params, &uniform_grid(41)).unwrap();
        assert!(!any_failed(&reports));
        for r in &reports {
            assert!(r.residual_corrected <= 1e-10, "{r:?}");
            assert!(r.factor_relative_error() <= 1e-8, "{r:?}");
            if r.p == 1.0 {
                assert!((r.discrepancy_factor - 1.0).abs() <= 1e-12);
                assert!(r.discrepancy_exponent.is_none());
            } else {
                let e = r.discrepancy_exponent.unwrap();
                assert!((e - r.expected_exponent as f64).abs() < 1e-6, "{r:?}");
            }
        }
    }

    #[test]
    fn reduction_factor_at_p_two() {
        let reports = identity_audit(2, &[pq(2.0, 1.0)], &uniform_grid(11)).unwrap();
        let r = reports
            .iter()
            .find(|r| r.identity == IdentityId::ReductionA && r.degree == 2)
            .unwrap();
        assert!((r.discrepancy_factor - 2.0).abs() < 1e-12);
        assert!(r.residual_uncorrected > 0.1);
    }

    #[test]
    fn broken_tolerance_is_flagged() {
        let mut acc = Accumulator::default();
        acc.add(1.0, f64::NAN, 1.0, 1.0);
        assert!(acc.residual_corrected.is_nan());
    }

    #[test]
    fn table_and_json() {
        let reports = identity_audit(2, &[pq(0.8, 0.5)], &uniform_grid(5)).unwrap();
        let table = format_table(&reports);
        assert!(table.contains("reduction-a"));
        assert!(table.ends_with("0 failed\n"));
        let json: serde_json::Value = serde_json::from_str(&to_json(&reports)).unwrap();
        let records = json.as_array().unwrap();
        assert_eq!(records.len(), reports.len());
        assert_eq!(records[0]["status"], "PASSED");
        assert_eq!(records[0]["identity"], "pascal-q");
    }
}
