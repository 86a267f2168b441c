//! Coherent states of the lowering operators and their displacement form.

use super::{label_b_bar, Basis, PGOp, PGState, Side};
use crate::pgalg::{PGMono, PGPoly, PGVar};
use crate::qscalar::{DeformParams, QScalar};

/// Level-n expansion coefficient of the coherent ket: q^(n(n+1)) / sqrt(\[n\]!).
pub fn coherent_coeff(params: DeformParams, n: u32) -> QScalar {
    let num = QScalar::q_pow(params, (n * (n + 1)) as i64);
    let den = QScalar::sqrt_bracket_factorial(params, n).inv();
    &num * &den
}

/// Level-n expansion coefficient of the coherent bra: q^(n(n-1)) / sqrt(\[n\]!).
pub fn coherent_bra_coeff(params: DeformParams, n: u32) -> QScalar {
    let num = QScalar::q_pow(params, (n * n.saturating_sub(1)) as i64);
    let den = QScalar::sqrt_bracket_factorial(params, n).inv();
    &num * &den
}

/// Eigenstate of the lowering operator with eigenvalue `var`:
/// sum_n q^(n(n+1))/sqrt(\[n\]!) var^n |basis_n>.  `dual` selects the phi
/// expansion (the eigenstate of the dual-space lowering operator).
pub fn coherent(params: DeformParams, var: PGVar, dual: bool, ) -> PGState {
    assert!(!var.barred, "coherent kets take an unbarred eigenvalue");
    coherent_scaled(params, var, &QScalar::one(params), dual)
}

/// Coherent state with a scaled argument: var -> scale * var.
pub fn coherent_scaled(params: DeformParams, var: PGVar, scale: &QScalar, dual: bool) -> PGState {
    let basis = if dual { Basis::Phi } else { Basis::Psi };
    let mut s = PGState::zero(params, Side::Ket, vec![basis]);
    let mut scale_pow = QScalar::one(params);
    for n in 0..=params.p() {
        let c = &coherent_coeff(params, n) * &scale_pow;
        s.insert(vec![n as u8], PGPoly::monomial(params, PGMono::power(var, n as u8), c));
        scale_pow = &scale_pow * scale;
    }
    s
}

/// Bra eigenstate of the raising operator:
/// sum_n q^(n(n-1))/sqrt(\[n\]!) varbar^n <basis_n|.
pub fn coherent_bra(params: DeformParams, var: PGVar, dual: bool) -> PGState {
    assert!(var.barred, "coherent bras take a barred eigenvalue");
    let basis = if dual { Basis::Phi } else { Basis::Psi };
    let mut s = PGState::zero(params, Side::Bra, vec![basis]);
    for n in 0..=params.p() {
        s.insert(
            vec![n as u8],
            PGPoly::monomial(params, PGMono::power(var, n as u8), coherent_bra_coeff(params, n)),
        );
    }
    s
}

/// Canonical-form coefficient of <basis_m| varbar^m inside the
/// resolution-of-identity integrand: moving varbar^m left across the level-m
/// bra multiplies q^(-m(m+1))/sqrt(\[m\]!) by q^(2m^2).
pub fn tilde_bra_kernel_coeff(params: DeformParams, m: u32) -> QScalar {
    let base = &QScalar::q_pow(params, -((m * (m + 1)) as i64))
        * &QScalar::sqrt_bracket_factorial(params, m).inv();
    &base * &QScalar::q_pow(params, 2 * (m * m) as i64)
}

/// Displacement operator: the q-exponential of bbar*var, normalized by \[n\]!.
/// Satisfies D(var) |vac> = coherent(var) exactly.
pub fn displacement(params: DeformParams, var: PGVar, dual: bool) -> PGOp {
    assert!(!var.barred, "displacement takes an unbarred argument");
    let basis = if dual { Basis::Phi } else { Basis::Psi };
    let raising = PGOp::from_label_matrix(params, basis, &label_b_bar(params));
    let argument = raising.mul(&PGOp::from_var(params, basis, var));
    let mut acc = PGOp::identity(params, basis);
    let mut power = PGOp::identity(params, basis);
    for n in 1..=params.p() {
        power = power.mul(&argument);
        if power.is_zero() {
            break;
        }
        acc = acc.add(&power.scale(&QScalar::bracket_factorial(params, n).inv()));
    }
    acc
}

/// Closed form of the raising operator acting on a coherent ket:
/// q^-2 sum_{n>=1} q^(n(n+1)) \[n\]/sqrt(\[n\]!) var^(n-1) |basis_n>.
pub fn bbar_action(params: DeformParams, var: PGVar, dual: bool) -> PGState {
    let basis = if dual { Basis::Phi } else { Basis::Psi };
    let mut s = PGState::zero(params, Side::Ket, vec![basis]);
    let q_m2 = QScalar::q_pow(params, -2);
    for n in 1..=params.p() {
        let c = &(&QScalar::q_pow(params, (n * (n + 1)) as i64)
            * &(&QScalar::bracket(params, n) * &QScalar::sqrt_bracket_factorial(params, n).inv()))
            * &q_m2;
        s.insert(vec![n as u8], PGPoly::monomial(params, PGMono::power(var, (n - 1) as u8), c));
    }
    s
}
