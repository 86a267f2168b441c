//! Resolution-of-identity weight: solve for w(theta, thetabar) such that the
//! mixed-basis integral of w |theta><theta~| reproduces the identity.

use super::coherent::{coherent_coeff, tilde_bra_kernel_coeff};
use super::Basis;
use crate::exact::{solve_linear, Matrix};
use crate::pgalg::{PGMono, PGPoly, PGVar};
use crate::qscalar::{DeformParams, QScalar};
use crate::report::Report;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("no weight exists for this target/factor combination")]
    NoSolution,
}

/// Integration kernel in a designated (theta, thetabar) pair.
#[derive(Clone, PartialEq, Debug)]
pub struct WeightFunction {
    pub var: PGVar,
    pub poly: PGPoly,
}

impl WeightFunction {
    pub fn coeff(&self, k: u8, l: u8) -> QScalar {
        let params = self.poly.params();
        let seq = [(self.var, k), (self.var.bar(), l)];
        let seq: Vec<_> = seq.iter().filter(|(_, e)| *e > 0).cloned().collect();
        match PGMono::from_sequence(&seq, params.p()) {
            Some((0, m)) => self.poly.coeff(&m),
            _ => QScalar::zero(params),
        }
    }
}

/// Canonical-form coefficient polynomial of the outer-product entry
/// |ket_n> <bra_m| inside the integrand: c_n d_m' q^(-2nm) theta^n thetabar^m,
/// with the bra-pass already folded into d_m'.
fn kernel_entry(params: DeformParams, var: PGVar, n: u32, m: u32) -> PGPoly {
    let c = coherent_coeff(params, n);
    let d = tilde_bra_kernel_coeff(params, m);
    let ket_pass = QScalar::q_pow(params, -2 * (n as i64) * (m as i64));
    let left = PGPoly::monomial(params, PGMono::power(var, n as u8), &(&c * &d) * &ket_pass);
    let right = PGPoly::monomial(params, PGMono::power(var.bar(), m as u8), QScalar::one(params));
    left.mul(&right)
}

/// Integrate w * kernel over (theta innermost, then thetabar) and return the
/// resulting scalar matrix.
fn integrate_kernel(params: DeformParams, var: PGVar, w: &PGPoly) -> Matrix<QScalar> {
    let dim = params.dim();
    Matrix::from_fn(dim, dim, |n, m| {
        let k = kernel_entry(params, var, n as u32, m as u32);
        let integrand = w.mul(&k);
        integrand
            .berezin_all(&[var, var.bar()])
            .as_scalar()
            .expect("full contraction leaves a scalar")
    })
}

/// Solve for the diagonal-resolving weight.  The solved weight makes both
/// mixed orderings integrate to the identity; off-diagonal monomials come out
/// zero because their equations force them to.
pub fn solve_identity_weight(params: DeformParams, var: PGVar) -> Result<WeightFunction, WeightError> {
    assert!(!var.barred, "weight variable is the unbarred member of the pair");
    let dim = params.dim();
    let p = params.p();
    // unknowns: w_{kl}, 0 <= k, l <= p
    let mut basis: Vec<PGMono> = Vec::new();
    for k in 0..=p as u8 {
        for l in 0..=p as u8 {
            let seq = [(var, k), (var.bar(), l)];
            let seq: Vec<_> = seq.iter().filter(|(_, e)| *e > 0).cloned().collect();
            basis.push(PGMono::from_sequence(&seq, p).expect("basis monomial").1);
        }
    }
    let rows = dim * dim;
    let zero = QScalar::zero(params);
    let mut a = Matrix::zero(rows, basis.len(), &zero);
    let mut rhs = vec![zero.clone(); rows];
    for n in 0..dim {
        for m in 0..dim {
            let row = n * dim + m;
            let kernel = kernel_entry(params, var, n as u32, m as u32);
            for (col, mono) in basis.iter().enumerate() {
                let w_mono = PGPoly::monomial(params, mono.clone(), QScalar::one(params));
                let val = w_mono
                    .mul(&kernel)
                    .berezin_all(&[var, var.bar()])
                    .as_scalar()
                    .expect("scalar");
                *a.at_mut(row, col) = val;
            }
            if n == m {
                rhs[row] = QScalar::one(params);
            }
        }
    }
    let x = solve_linear(&a, &rhs).ok_or(WeightError::NoSolution)?;
    let mut poly = PGPoly::zero(params);
    for (col, mono) in basis.iter().enumerate() {
        poly.insert(mono.clone(), x[col].clone());
    }
    Ok(WeightFunction { var, poly })
}

/// The closed-form diagonal weight sum_l (\[p-l\]!/\[p\]!) q^(-2l(l+1)) theta^l thetabar^l.
pub fn closed_form_identity_weight(params: DeformParams, var: PGVar) -> WeightFunction {
    let p = params.p();
    let mut poly = PGPoly::zero(params);
    let fact_p_inv = QScalar::bracket_factorial(params, p).inv();
    for l in 0..=p {
        let c = &(&QScalar::bracket_factorial(params, p - l) * &fact_p_inv)
            * &QScalar::q_pow(params, -2 * (l as i64) * (l as i64 + 1));
        let seq = [(var, l as u8), (var.bar(), l as u8)];
        let seq: Vec<_> = seq.iter().filter(|(_, e)| *e > 0).cloned().collect();
        let mono = PGMono::from_sequence(&seq, p).unwrap().1;
        poly.insert(mono, c);
    }
    WeightFunction { var, poly }
}

/// Exact verification that both mixed-ordering integrals resolve the identity.
pub fn verify_identity_weight(params: DeformParams, w: &WeightFunction) -> Report {
    let mut report = Report::new("bi-over-completeness");
    // ordering 1: |theta><theta~| keys (psi kets, phi bras); ordering 2 swaps
    // the bases, which leaves the kernel coefficients unchanged, so one
    // integral covers each ordering's coefficient matrix.
    for (ordering, _bases) in [("ket psi / bra phi", (Basis::Psi, Basis::Phi)), ("ket phi / bra psi", (Basis::Phi, Basis::Psi))] {
        let m = integrate_kernel(params, w.var, &w.poly);
        let id = Matrix::identity(params.dim(), &QScalar::one(params));
        let res = m.sub(&id);
        report.push(
            format!("identity resolution ({ordering})"),
            res.is_zero(),
            res.max_abs(),
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> PGVar {
        PGVar::theta(0)
    }

    #[test]
    fn two_level_weight_is_one_plus_pair() {
        let params = DeformParams::new(1);
        let w = solve_identity_weight(params, theta()).unwrap();
        assert_eq!(w.coeff(0, 0), QScalar::one(params));
        assert_eq!(w.coeff(1, 1), QScalar::one(params));
        assert!(w.coeff(0, 1).is_zero());
        assert!(w.coeff(1, 0).is_zero());
        assert!(verify_identity_weight(params, &w).all_passed());
    }

    #[test]
    fn solver_matches_closed_form() {
        for p in 1..=4 {
            let params = DeformParams::new(p);
            let solved = solve_identity_weight(params, theta()).unwrap();
            let closed = closed_form_identity_weight(params, theta());
            assert_eq!(solved.poly, closed.poly, "p={p}");
        }
    }

    #[test]
    fn identity_holds_exactly() {
        for p in 1..=4 {
            let params = DeformParams::new(p);
            let w = solve_identity_weight(params, theta()).unwrap();
            let report = verify_identity_weight(params, &w);
            assert!(report.all_passed(), "p={p}: {:?}", report.failed_relations());
        }
    }

    #[test]
    fn off_diagonal_weights_vanish() {
        for p in 2..=4 {
            let params = DeformParams::new(p);
            let w = solve_identity_weight(params, theta()).unwrap();
            for k in 0..=p as u8 {
                for l in 0..=p as u8 {
                    if k != l {
                        assert!(w.coeff(k, l).is_zero(), "p={p} k={k} l={l}");
                    }
                }
            }
        }
    }
}
