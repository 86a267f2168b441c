//! State factories and operator machinery: coherent, squeezed, supercoherent
//! and supersqueezed states, identity-weight solving, time evolution.
//!
//! Convention: para-Grassmann polynomials sit to the LEFT of kets (and of
//! bras).  Everything that moves a monomial across a level-n basis element
//! picks up the corresponding level-pass phase.

mod boson;
mod coherent;
mod evolve;
mod hybrid;
mod op;
mod squeeze;
mod susy;
mod weight;

pub use boson::{
    boson_lowering, boson_raising, coherent_tail, BosonSector, TruncationError, DEFAULT_TAIL_TOL,
    DEFAULT_TRUNCATION,
};
pub use coherent::{
    bbar_action, coherent, coherent_bra, coherent_coeff, coherent_scaled, displacement,
    tilde_bra_kernel_coeff,
};
pub use evolve::{
    coeff_table_distance, eval_with_scaled_vars, evolve, stability_check, Evolved, SpectrumModel,
    StabilityWitness,
};
pub use hybrid::{supercoherent, supersqueeze, HybridKey, HybridState, SuperVariant};
pub use op::PGOp;
pub use squeeze::{squeeze, squeeze_exponent, squeeze_series_terms};
pub use susy::{random_quad_psi, susy_check, SusyConfig};
pub use weight::{
    closed_form_identity_weight, solve_identity_weight, verify_identity_weight, WeightError,
    WeightFunction,
};

use crate::exact::Matrix;
use crate::pgalg::{PGMono, PGPoly, PGVar};
use crate::qscalar::{Complex64, DeformParams, QScalar};
use serde::Serialize;
use std::collections::BTreeMap;

/// Which half of the biorthonormal pair a slot is expanded in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Psi,
    Phi,
}

impl Basis {
    pub fn flip(self) -> Self {
        match self {
            Basis::Psi => Basis::Phi,
            Basis::Phi => Basis::Psi,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ket,
    Bra,
}

/// Multi-slot state with para-Grassmann polynomial coefficients, polynomials
/// written to the left of the basis chain.
#[derive(Clone, PartialEq)]
pub struct PGState {
    params: DeformParams,
    side: Side,
    slots: Vec<Basis>,
    coeffs: BTreeMap<Vec<u8>, PGPoly>,
}

impl PGState {
    pub fn zero(params: DeformParams, side: Side, slots: Vec<Basis>) -> Self {
        PGState { params, side, slots, coeffs: BTreeMap::new() }
    }

    pub fn basis_element(params: DeformParams, side: Side, basis: Basis, level: u8) -> Self {
        let mut s = Self::zero(params, side, vec![basis]);
        s.insert(vec![level], PGPoly::one(params));
        s
    }

    pub fn vacuum(params: DeformParams, basis: Basis) -> Self {
        Self::basis_element(params, Side::Ket, basis, 0)
    }

    pub fn params(&self) -> DeformParams {
        self.params
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn slots(&self) -> &[Basis] {
        &self.slots
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u8>, PGPoly> {
        &self.coeffs
    }

    pub fn coeff(&self, idx: &[u8]) -> PGPoly {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| PGPoly::zero(self.params))
    }

    pub fn insert(&mut self, idx: Vec<u8>, poly: PGPoly) {
        assert_eq!(idx.len(), self.slots.len(), "index arity mismatch");
        if poly.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(poly);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get().add(&poly);
                if merged.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.slots, o.slots);
        assert_eq!(self.side, o.side);
        let mut out = self.clone();
        for (idx, poly) in &o.coeffs {
            out.insert(idx.clone(), poly.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&QScalar::from_int(self.params, -1)))
    }

    pub fn scale(&self, s: &QScalar) -> Self {
        let mut out = Self::zero(self.params, self.side, self.slots.clone());
        for (idx, poly) in &self.coeffs {
            out.insert(idx.clone(), poly.scale(s));
        }
        out
    }

    /// Left-multiply by a polynomial (no basis elements are crossed).
    pub fn left_mul_poly(&self, w: &PGPoly) -> Self {
        let mut out = Self::zero(self.params, self.side, self.slots.clone());
        for (idx, poly) in &self.coeffs {
            out.insert(idx.clone(), w.mul(poly));
        }
        out
    }

    /// Right-multiply a bra state by a polynomial: the polynomial moves left
    /// past every bra in the chain, q^(2 n e) per level-n bra.
    pub fn right_mul_poly(&self, w: &PGPoly) -> Self {
        assert_eq!(self.side, Side::Bra, "right polynomial action is a bra operation");
        let mut out = Self::zero(self.params, self.side, self.slots.clone());
        for (idx, poly) in &self.coeffs {
            let total: i64 = idx.iter().map(|n| *n as i64).sum();
            let mut moved = PGPoly::zero(self.params);
            for (m, c) in w.terms() {
                let phase = QScalar::q_pow(self.params, 2 * total * m.bar_excess());
                moved.insert(m.clone(), c * &phase);
            }
            out.insert(idx.clone(), poly.mul(&moved));
        }
        out
    }

    /// Apply a PG-free label-space operator to one slot of a ket state.
    /// Monomial crossing contributes q^(2 (n_in - n_out) e) per term.
    pub fn apply_label_op(&self, slot: usize, m: &Matrix<QScalar>) -> Self {
        assert_eq!(self.side, Side::Ket, "label operators act on kets here");
        let dim = self.params.dim();
        assert_eq!(m.rows(), dim);
        let mut out = Self::zero(self.params, self.side, self.slots.clone());
        for (idx, poly) in &self.coeffs {
            let n_in = idx[slot] as usize;
            for n_out in 0..dim {
                let entry = m.at(n_out, n_in);
                if entry.is_zero() {
                    continue;
                }
                let mut shifted = PGPoly::zero(self.params);
                for (mono, c) in poly.terms() {
                    let phase = QScalar::q_pow(
                        self.params,
                        2 * (n_in as i64 - n_out as i64) * mono.bar_excess(),
                    );
                    shifted.insert(mono.clone(), &(c * &phase) * entry);
                }
                let mut new_idx = idx.clone();
                new_idx[slot] = n_out as u8;
                out.insert(new_idx, shifted);
            }
        }
        out
    }

    /// Right action of a PG-free label-space operator on a single-slot bra.
    pub fn right_apply_label_op(&self, m: &Matrix<QScalar>) -> Self {
        assert_eq!(self.side, Side::Bra);
        assert_eq!(self.slots.len(), 1, "right action implemented for single-slot bras");
        let dim = self.params.dim();
        let mut out = Self::zero(self.params, self.side, self.slots.clone());
        for (idx, poly) in &self.coeffs {
            let n = idx[0] as usize;
            for mcol in 0..dim {
                let entry = m.at(n, mcol);
                if entry.is_zero() {
                    continue;
                }
                out.insert(vec![mcol as u8], poly.scale(entry));
            }
        }
        out
    }

    /// Tensor product of ket states: the right factor's monomials move left
    /// past the left factor's kets.
    pub fn tensor(&self, o: &Self) -> Self {
        assert_eq!(self.side, Side::Ket);
        assert_eq!(o.side, Side::Ket);
        assert_eq!(self.params, o.params);
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&o.slots);
        let mut out = Self::zero(self.params, Side::Ket, slots);
        for (idx_a, pa) in &self.coeffs {
            let total_a: i64 = idx_a.iter().map(|n| *n as i64).sum();
            for (idx_b, pb) in &o.coeffs {
                let mut moved = PGPoly::zero(self.params);
                for (m, c) in pb.terms() {
                    let phase = QScalar::q_pow(self.params, -2 * total_a * m.bar_excess());
                    moved.insert(m.clone(), c * &phase);
                }
                let poly = pa.mul(&moved);
                let mut idx = idx_a.clone();
                idx.extend_from_slice(idx_b);
                out.insert(idx, poly);
            }
        }
        out
    }

    /// Berezin-integrate every coefficient, innermost variable first.
    pub fn berezin_all(&self, order: &[PGVar]) -> Self {
        let mut out = Self::zero(self.params, self.side, self.slots.clone());
        for (idx, poly) in &self.coeffs {
            out.insert(idx.clone(), poly.berezin_all(order));
        }
        out
    }

    /// Contraction <phi_n| state (for psi-slot kets) or <psi_n| state (for
    /// phi-slot kets): the polynomial passes the level-n ket.
    pub fn overlap_with_dual_bra(&self, level: u8) -> PGPoly {
        assert_eq!(self.side, Side::Ket);
        assert_eq!(self.slots.len(), 1);
        let poly = self.coeff(&[level]);
        let mut out = PGPoly::zero(self.params);
        for (m, c) in poly.terms() {
            let phase = QScalar::q_pow(self.params, 2 * level as i64 * m.bar_excess());
            out.insert(m.clone(), c * &phase);
        }
        out
    }

    /// Contraction of a single-slot bra with the dual ket |phi_n> / |psi_n>.
    pub fn overlap_with_dual_ket(&self, level: u8) -> PGPoly {
        assert_eq!(self.side, Side::Bra);
        assert_eq!(self.slots.len(), 1);
        self.coeff(&[level])
    }

    /// Numeric coefficient table (monomial-resolved), for float cross-checks.
    pub fn eval_coeffs(&self) -> BTreeMap<(Vec<u8>, PGMono), Complex64> {
        let mut out = BTreeMap::new();
        for (idx, poly) in &self.coeffs {
            for (m, c) in poly.terms() {
                out.insert((idx.clone(), m.clone()), c.eval());
            }
        }
        out
    }
}

impl std::fmt::Debug for PGState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PGState ({:?}, slots {:?}):", self.side, self.slots)?;
        for (idx, poly) in &self.coeffs {
            writeln!(f, "  {idx:?}: {poly}")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct PGStateJson {
    side: Side,
    slots: Vec<Basis>,
    coeffs: Vec<PGStateCoeffJson>,
}

#[derive(Serialize)]
struct PGStateCoeffJson {
    index: Vec<u8>,
    poly: PGPoly,
}

impl Serialize for PGState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PGStateJson {
            side: self.side,
            slots: self.slots.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(idx, poly)| PGStateCoeffJson { index: idx.clone(), poly: poly.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// Standard label-space ladder matrices (identity-frame action).
pub fn label_b(params: DeformParams) -> Matrix<QScalar> {
    let dim = params.dim();
    Matrix::from_fn(dim, dim, |r, c| {
        if c >= 1 && r == c - 1 {
            QScalar::sqrt_bracket(params, c as u32)
        } else {
            QScalar::zero(params)
        }
    })
}

pub fn label_b_bar(params: DeformParams) -> Matrix<QScalar> {
    let dim = params.dim();
    Matrix::from_fn(dim, dim, |r, c| {
        if r >= 1 && c == r - 1 {
            QScalar::sqrt_bracket(params, r as u32)
        } else {
            QScalar::zero(params)
        }
    })
}

pub fn label_q_pow_n(params: DeformParams, k: i64) -> Matrix<QScalar> {
    let dim = params.dim();
    Matrix::from_fn(dim, dim, |r, c| {
        if r == c {
            QScalar::q_pow(params, k * r as i64)
        } else {
            QScalar::zero(params)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgalg::PGVar;

    #[test]
    fn tensor_phases_match_level_rule() {
        // |psi_1> (x) theta |psi_1>: theta crosses a level-1 ket
        let params = DeformParams::new(2);
        let theta = PGVar::theta(0);
        let a = PGState::basis_element(params, Side::Ket, Basis::Psi, 1);
        let mut b = PGState::zero(params, Side::Ket, vec![Basis::Psi]);
        b.insert(vec![1], PGPoly::var(params, theta));
        let t = a.tensor(&b);
        let expect = PGPoly::var(params, theta).scale(&QScalar::q_pow(params, 2));
        assert_eq!(t.coeff(&[1, 1]), expect);
    }

    #[test]
    fn label_op_crossing_phase() {
        // b applied to theta^k |psi_n> picks up q^(-2k) from crossing theta^k
        let params = DeformParams::new(2);
        let theta = PGVar::theta(0);
        let mut s = PGState::zero(params, Side::Ket, vec![Basis::Psi]);
        s.insert(vec![2], PGPoly::monomial(params, crate::pgalg::PGMono::power(theta, 2), QScalar::one(params)));
        let out = s.apply_label_op(0, &label_b(params));
        // b |psi_2> = sqrt([2]) |psi_1>, crossing theta^2 gives q^(-4)... but
        // the level drop n_in - n_out = 1 and bar excess -2: q^(2*1*(-2)) = q^-4
        let expect = PGPoly::monomial(
            params,
            crate::pgalg::PGMono::power(theta, 2),
            &QScalar::sqrt_bracket(params, 2) * &QScalar::q_pow(params, -4),
        );
        assert_eq!(out.coeff(&[1]), expect);
    }
}
