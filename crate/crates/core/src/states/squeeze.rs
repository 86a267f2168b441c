//! Squeezing operator: exp( (theta B^bar^2 - thetabar B^2) / 2 ) as a
//! terminating operator series.

use super::{label_b, label_b_bar, Basis, PGOp};
use crate::pgalg::PGVar;
use crate::qscalar::{DeformParams, QScalar};

/// The exponent X = (var Bbar^2 - varbar B^2) / 2 over the chosen basis.
pub fn squeeze_exponent(params: DeformParams, var: PGVar, dual: bool) -> PGOp {
    assert!(!var.barred, "squeeze argument is unbarred");
    let basis = if dual { Basis::Phi } else { Basis::Psi };
    let lower = PGOp::from_label_matrix(params, basis, &label_b(params));
    let raise = PGOp::from_label_matrix(params, basis, &label_b_bar(params));
    let raise2 = raise.mul(&raise);
    let lower2 = lower.mul(&lower);
    let t_op = PGOp::from_var(params, basis, var);
    let tb_op = PGOp::from_var(params, basis, var.bar());
    let half = QScalar::from_ratio(params, 1, 2);
    t_op.mul(&raise2).sub(&tb_op.mul(&lower2)).scale(&half)
}

/// Squeezing operator; the identity for p = 1 where B^2 = 0.
pub fn squeeze(params: DeformParams, var: PGVar, dual: bool) -> PGOp {
    squeeze_exponent(params, var, dual).exp()
}

/// Partial sums of the exponential series, order by order, for term-by-term
/// comparison against printed expansions.
pub fn squeeze_series_terms(params: DeformParams, var: PGVar, dual: bool, orders: u32) -> Vec<PGOp> {
    let x = squeeze_exponent(params, var, dual);
    let basis = if dual { Basis::Phi } else { Basis::Psi };
    let mut out = vec![PGOp::identity(params, basis)];
    let mut power = PGOp::identity(params, basis);
    let mut factorial = QScalar::one(params);
    for k in 1..=orders {
        power = power.mul(&x);
        factorial = &factorial * &QScalar::from_int(params, k as i64);
        out.push(power.scale(&factorial.inv()));
    }
    out
}
