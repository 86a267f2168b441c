//! Truncated pseudo-boson sector (floating point).

use crate::floatmat::{CMat, C64};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("truncation tail {tail:.3e} exceeds tolerance {tol:.3e} at |alpha| = {alpha_abs}")]
pub struct TruncationError {
    pub tail: f64,
    pub tol: f64,
    pub alpha_abs: f64,
}

pub const DEFAULT_TRUNCATION: usize = 24;
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Truncated boson space of dimension M+1 with a coherent amplitude.
#[derive(Clone)]
pub struct BosonSector {
    pub m_trunc: usize,
    pub alpha: C64,
}

impl BosonSector {
    pub fn new(m_trunc: usize, alpha: C64, tail_tol: f64) -> Result<Self, TruncationError> {
        let tail = coherent_tail(alpha.norm(), m_trunc);
        if tail > tail_tol {
            return Err(TruncationError { tail, tol: tail_tol, alpha_abs: alpha.norm() });
        }
        Ok(BosonSector { m_trunc, alpha })
    }

    pub fn dim(&self) -> usize {
        self.m_trunc + 1
    }

    /// Normalized coherent coefficients e^{-|a|^2/2} a^n / sqrt(n!).
    pub fn coherent_coeffs(&self) -> Vec<C64> {
        let norm = (-self.alpha.norm_sqr() / 2.0).exp();
        let mut out = Vec::with_capacity(self.dim());
        let mut term = C64::new(norm, 0.0);
        out.push(term);
        for n in 1..=self.m_trunc {
            term = term * self.alpha / (n as f64).sqrt();
            out.push(term);
        }
        out
    }
}

/// Probability mass of the coherent state beyond level m.
pub fn coherent_tail(alpha_abs: f64, m: usize) -> f64 {
    let x = alpha_abs * alpha_abs;
    let mut term = (-x).exp();
    let mut head = term;
    for n in 1..=m {
        term *= x / n as f64;
        head += term;
    }
    (1.0 - head).max(0.0)
}

/// Label-space lowering operator on the truncated space: a |n> = sqrt(n) |n-1>.
pub fn boson_lowering(dim: usize) -> CMat {
    CMat::from_fn(dim, dim, |r, c| {
        if c >= 1 && r == c - 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Label-space raising operator: a# |n> = sqrt(n+1) |n+1>, truncated at the top.
pub fn boson_raising(dim: usize) -> CMat {
    boson_lowering(dim).transpose()
}
