//! Weighted Berezin integration over tensor products of coherent states:
//! named entangled-state constructions and weight solving for arbitrary
//! diagonal-type targets.

use crate::exact::{solve_linear, Matrix};
use crate::floatmat::{rank_by_svd, CMat, C64};
use crate::frame::Frame;
use crate::pgalg::{PGMono, PGPoly, PGVar};
use crate::qscalar::{DeformParams, QScalar};
use crate::states::{coherent_scaled, Basis, PGState};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EntangleError {
    #[error("construction requires p = {required}, got {got}")]
    WrongNilpotency { required: u32, got: u32 },
    #[error("no weight exists for this target/factor combination")]
    NoWeight,
    #[error("party count {got} out of supported range {min}..={max}")]
    PartyCount { got: usize, min: usize, max: usize },
}

/// One coherent factor of the tensor product: the state of `var` with a
/// scaled argument, expanded in the psi (plain) or phi (dual) basis.
#[derive(Clone, Debug)]
pub struct CoherentFactor {
    pub var: PGVar,
    pub scale: QScalar,
    pub dual: bool,
}

impl CoherentFactor {
    pub fn plain(var: PGVar, params: DeformParams) -> Self {
        CoherentFactor { var, scale: QScalar::one(params), dual: false }
    }

    pub fn with_sign(var: PGVar, params: DeformParams, minus: bool, dual: bool) -> Self {
        let scale = QScalar::from_int(params, if minus { -1 } else { 1 });
        CoherentFactor { var, scale, dual }
    }

    fn basis(&self) -> Basis {
        if self.dual {
            Basis::Phi
        } else {
            Basis::Psi
        }
    }
}

/// Result of a weighted tensor integration.
#[derive(Clone, Debug)]
pub struct TensorState {
    params: DeformParams,
    slots: Vec<Basis>,
    coeffs: BTreeMap<Vec<u8>, PGPoly>,
    partially_integrated: bool,
}

impl TensorState {
    pub fn params(&self) -> DeformParams {
        self.params
    }

    pub fn slots(&self) -> &[Basis] {
        &self.slots
    }

    pub fn partially_integrated(&self) -> bool {
        self.partially_integrated
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u8>, PGPoly> {
        &self.coeffs
    }

    /// Scalar coefficient map; only meaningful for fully integrated states.
    pub fn scalar_coeffs(&self) -> Option<BTreeMap<Vec<u8>, QScalar>> {
        if self.partially_integrated {
            return None;
        }
        let mut out = BTreeMap::new();
        for (idx, poly) in &self.coeffs {
            out.insert(idx.clone(), poly.as_scalar()?);
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Concrete coefficient vector over the computational product basis.
    pub fn concrete_vector(&self, frame: &Frame) -> Option<Vec<C64>> {
        let scalars = self.scalar_coeffs()?;
        let dim = self.params.dim();
        let total = dim.pow(self.slots.len() as u32);
        let mut v = vec![C64::new(0.0, 0.0); total];
        for (idx, c) in &scalars {
            // kron of the slot basis columns
            let mut amps = vec![C64::new(1.0, 0.0)];
            for (slot, level) in idx.iter().enumerate() {
                let col: Vec<C64> = match self.slots[slot] {
                    Basis::Psi => (0..dim).map(|r| frame.psi().at(r, *level as usize).eval()).collect(),
                    Basis::Phi => (0..dim).map(|r| frame.phi().at(r, *level as usize).eval()).collect(),
                };
                let mut next = Vec::with_capacity(amps.len() * dim);
                for a in &amps {
                    for x in &col {
                        next.push(a * x);
                    }
                }
                amps = next;
            }
            let cv = c.eval();
            for (i, a) in amps.iter().enumerate() {
                v[i] += cv * a;
            }
        }
        Some(v)
    }

    /// Norms under the standard inner product of the concrete vector and
    /// under the per-slot metric pairing (eta on psi slots, eta^-1 on phi
    /// slots).  The latter is frame-covariant and both reduce to the usual
    /// norm when eta = 1.
    pub fn norms(&self, frame: &Frame) -> Option<(f64, f64)> {
        let v = self.concrete_vector(frame)?;
        let norm_standard = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let dim = self.params.dim();
        let metrics: Vec<CMat> = self
            .slots
            .iter()
            .map(|b| match b {
                Basis::Psi => CMat::from_fn(dim, dim, |r, c| frame.eta().at(r, c).eval()),
                Basis::Phi => CMat::from_fn(dim, dim, |r, c| frame.eta_inv().at(r, c).eval()),
            })
            .collect();
        let mut metric = CMat::identity(1, 1);
        for m in &metrics {
            metric = metric.kronecker(m);
        }
        let vv = CMat::from_fn(v.len(), 1, |r, _| v[r]);
        let w = &metric * &vv;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..v.len() {
            acc += v[i].conj() * w[(i, 0)];
        }
        Some((norm_standard, acc.re.max(0.0).sqrt()))
    }

    /// Schmidt rank of a fully integrated two-party state (identity-frame
    /// semantics: singular values of the coefficient matrix).
    pub fn schmidt_rank(&self) -> Option<usize> {
        if self.slots.len() != 2 {
            return None;
        }
        let scalars = self.scalar_coeffs()?;
        let dim = self.params.dim();
        let mut m = CMat::zeros(dim, dim);
        for (idx, c) in &scalars {
            m[(idx[0] as usize, idx[1] as usize)] = c.eval();
        }
        Some(rank_by_svd(&m, 1e-10))
    }
}

#[derive(Serialize)]
struct TensorStateJson {
    schema_version: u32,
    dims: Vec<usize>,
    slots: Vec<Basis>,
    partially_integrated: bool,
    coeffs: Vec<TensorCoeffJson>,
}

#[derive(Serialize)]
struct TensorCoeffJson {
    index: Vec<u8>,
    value: PGPoly,
}

impl Serialize for TensorState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dim = self.params.dim();
        TensorStateJson {
            schema_version: crate::report::SCHEMA_VERSION,
            dims: vec![dim; self.slots.len()],
            slots: self.slots.clone(),
            partially_integrated: self.partially_integrated,
            coeffs: self
                .coeffs
                .iter()
                .map(|(idx, poly)| TensorCoeffJson { index: idx.clone(), value: poly.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// Expand the factors, multiply by the weight under the full exchange rules,
/// and integrate in the given order (innermost first).
pub fn integrate_tensor(
    params: DeformParams,
    weight: &PGPoly,
    factors: &[CoherentFactor],
    order: &[PGVar],
) -> TensorState {
    let mut product: Option<PGState> = None;
    for f in factors {
        assert!(!f.scale.is_zero(), "factor scale must be nonzero");
        let s = coherent_scaled(params, f.var, &f.scale, f.dual);
        product = Some(match product {
            None => s,
            Some(acc) => acc.tensor(&s),
        });
    }
    let product = product.expect("at least one factor");
    let weighted = product.left_mul_poly(weight);
    let integrated = weighted.berezin_all(order);
    let mut coeffs = BTreeMap::new();
    let mut partial = false;
    for (idx, poly) in integrated.coeffs() {
        if poly.as_scalar().is_none() {
            partial = true;
        }
        coeffs.insert(idx.clone(), poly.clone());
    }
    TensorState {
        params,
        slots: factors.iter().map(CoherentFactor::basis).collect(),
        coeffs,
        partially_integrated: partial,
    }
}

// ---------------------------------------------------------------------------
// Weight solving.

/// All canonical monomials over `vars` with exponents 0..=p.
fn weight_basis(params: DeformParams, vars: &[PGVar]) -> Vec<PGMono> {
    let p = params.p() as u8;
    let mut basis: Vec<PGMono> = vec![PGMono::unit()];
    for v in vars {
        let mut next = Vec::with_capacity(basis.len() * (p as usize + 1));
        for m in &basis {
            for e in 0..=p {
                let mut seq: Vec<(PGVar, u8)> = m.factors().to_vec();
                if e > 0 {
                    seq.push((*v, e));
                }
                let (qe, mono) = PGMono::from_sequence(&seq, params.p()).expect("basis monomial");
                debug_assert_eq!(qe, 0, "sorted accumulation stays phase-free");
                next.push(mono);
            }
        }
        basis = next;
    }
    basis.sort();
    basis.dedup();
    basis
}

/// Linear solve for the weight that makes the integral of
/// w * (tensor of factors) equal the target coefficient map.
pub fn solve_weight(
    params: DeformParams,
    factors: &[CoherentFactor],
    vars: &[PGVar],
    order: &[PGVar],
    target: &BTreeMap<Vec<u8>, QScalar>,
) -> Result<PGPoly, EntangleError> {
    let basis = weight_basis(params, vars);
    // collect the full index space reachable by the integrals
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut columns: Vec<BTreeMap<Vec<u8>, QScalar>> = Vec::new();
    for mono in &basis {
        let w = PGPoly::monomial(params, mono.clone(), QScalar::one(params));
        let ts = integrate_tensor(params, &w, factors, order);
        let scalars = ts.scalar_coeffs().ok_or(EntangleError::NoWeight)?;
        for idx in scalars.keys() {
            if !rows.contains(idx) {
                rows.push(idx.clone());
            }
        }
        columns.push(scalars);
    }
    for idx in target.keys() {
        if !rows.contains(idx) {
            rows.push(idx.clone());
        }
    }
    rows.sort();
    let zero = QScalar::zero(params);
    let a = Matrix::from_fn(rows.len(), basis.len(), |r, c| {
        columns[c].get(&rows[r]).cloned().unwrap_or_else(|| zero.clone())
    });
    let rhs: Vec<QScalar> = rows
        .iter()
        .map(|idx| target.get(idx).cloned().unwrap_or_else(|| zero.clone()))
        .collect();
    let x = solve_linear(&a, &rhs).ok_or(EntangleError::NoWeight)?;
    let mut poly = PGPoly::zero(params);
    for (c, mono) in basis.iter().enumerate() {
        poly.insert(mono.clone(), x[c].clone());
    }
    Ok(poly)
}

// ---------------------------------------------------------------------------
// Named constructions.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedState {
    /// Single shared variable: integral of |s theta> |-theta>; `plus` selects
    /// s = -1 (the plus combination of the two-level pair states).
    PBellShared { plus: bool, duals: [bool; 2] },
    /// Two variables with weight 1 + theta_0 theta_1 over |theta_0>|s theta_1>;
    /// `plus` selects s = -1.
    PBellPaired { plus: bool, duals: [bool; 2] },
    /// Shared-variable W state; the first `leading_duals` slots expand in phi.
    W { parties: usize, leading_duals: usize },
    /// Multi-variable GHZ family; the first `leading_duals` slots expand in phi.
    Ghz { parties: usize, leading_duals: usize },
    /// Three-level diagonal pair state |00> +- |11> + |22>.
    QutritDiag { plus: bool, duals: [bool; 2] },
    /// Three-level antidiagonal pair state |02> +- |11> + |20>.
    QutritAnti { plus: bool, duals: [bool; 2] },
    /// Diagonal qudit target sum_i |ii>/sqrt(p+1) from the solved weight.
    QuditDiag { duals: [bool; 2] },
    /// Three-level subspace state |00> + |22>.
    Subspace { duals: [bool; 2] },
}

fn require_p(params: DeformParams, required: u32) -> Result<(), EntangleError> {
    if params.p() != required {
        return Err(EntangleError::WrongNilpotency { required, got: params.p() });
    }
    Ok(())
}

/// Sign heuristic for the GHZ weight constant, (-1)^(floor(n/2)).  The
/// engine-solved constant disagrees with it for odd party counts >= 3; the
/// constructors always use the solved constant.
pub fn ghz_heuristic_constant(n: usize) -> i64 {
    if (n / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// GHZ factor list (slot i carries variable n-1-i) and integration order.
fn ghz_layout(params: DeformParams, parties: usize, leading_duals: usize) -> (Vec<CoherentFactor>, Vec<PGVar>) {
    let factors: Vec<CoherentFactor> = (0..parties)
        .map(|slot| CoherentFactor {
            var: PGVar::theta((parties - 1 - slot) as u32),
            scale: QScalar::one(params),
            dual: slot < leading_duals,
        })
        .collect();
    let order: Vec<PGVar> = (0..parties).rev().map(|i| PGVar::theta(i as u32)).collect();
    (factors, order)
}

/// Descending product theta_(n-1) ... theta_0 as a polynomial.
fn ghz_monomial(params: DeformParams, parties: usize) -> PGPoly {
    let mut acc = PGPoly::one(params);
    for i in (0..parties).rev() {
        acc = acc.mul(&PGPoly::var(params, PGVar::theta(i as u32)));
    }
    acc
}

/// Solve the GHZ weight constant: kappa such that (kappa + theta-product)
/// integrates both diagonal channels to equal coefficients.
pub fn ghz_solved_constant(params: DeformParams, parties: usize) -> QScalar {
    let (factors, order) = ghz_layout(params, parties, 0);
    let mono_part = integrate_tensor(params, &ghz_monomial(params, parties), &factors, &order);
    let const_part = integrate_tensor(params, &PGPoly::one(params), &factors, &order);
    let zeros = vec![0u8; parties];
    let ones = vec![1u8; parties];
    let a = mono_part
        .scalar_coeffs()
        .expect("scalar")
        .get(&zeros)
        .cloned()
        .expect("all-zero channel");
    let b = const_part
        .scalar_coeffs()
        .expect("scalar")
        .get(&ones)
        .cloned()
        .expect("all-one channel");
    &a * &b.inv()
}

/// Diagonal-product coefficient c_ii = q^(2i) / \[i\]! of the paired coherent
/// expansion; its inverse feeds the diagonal qudit weight.
fn paired_diag_coeff_inv(params: DeformParams, i: u32) -> QScalar {
    &QScalar::bracket_factorial(params, i) * &QScalar::q_pow(params, -2 * i as i64)
}

/// Closed-form diagonal qudit weight
/// (1/sqrt(p+1)) sum_k c_(p-k,p-k)^-1 q^(2pk)/\[p\]! thetabar^k theta^k.
pub fn qudit_closed_form_weight(params: DeformParams, var: PGVar) -> PGPoly {
    let p = params.p();
    let norm = QScalar::sqrt_nat(params, p as u64 + 1)
        .expect("sqrt(p+1) exists in the field")
        .inv();
    let fact_inv = QScalar::bracket_factorial(params, p).inv();
    let mut acc = PGPoly::zero(params);
    for k in 0..=p {
        let c = &(&paired_diag_coeff_inv(params, p - k) * &QScalar::q_pow(params, 2 * (p * k) as i64))
            * &(&fact_inv * &norm);
        let barred = PGPoly::monomial(params, PGMono::power(var.bar(), k as u8), c);
        let plain = PGPoly::monomial(params, PGMono::power(var, k as u8), QScalar::one(params));
        acc = acc.add(&barred.mul(&plain));
    }
    acc
}

/// The paired-variable factor list |theta>,|thetabar> and the integration
/// order (theta innermost).
pub fn paired_factors(params: DeformParams, duals: [bool; 2]) -> (Vec<CoherentFactor>, Vec<PGVar>) {
    let theta = PGVar::theta(0);
    let factors = vec![
        CoherentFactor { var: theta, scale: QScalar::one(params), dual: duals[0] },
        CoherentFactor { var: theta.bar(), scale: QScalar::one(params), dual: duals[1] },
    ];
    (factors, vec![theta, theta.bar()])
}

/// Diagonal qutrit/qudit-style target over the paired factors.
fn diagonal_target(params: DeformParams, entries: &[(usize, usize, QScalar)]) -> BTreeMap<Vec<u8>, QScalar> {
    let mut t = BTreeMap::new();
    for (i, j, c) in entries {
        t.insert(vec![*i as u8, *j as u8], c.clone());
    }
    let _ = params;
    t
}

/// Build a named entangled state.
pub fn make_named_state(params: DeformParams, kind: &NamedState) -> Result<TensorState, EntangleError> {
    match kind {
        NamedState::PBellShared { plus, duals } => {
            require_p(params, 1)?;
            let theta = PGVar::theta(0);
            let factors = vec![
                CoherentFactor::with_sign(theta, params, *plus, duals[0]),
                CoherentFactor::with_sign(theta, params, true, duals[1]),
            ];
            Ok(integrate_tensor(params, &PGPoly::one(params), &factors, &[theta]))
        }
        NamedState::PBellPaired { plus, duals } => {
            require_p(params, 1)?;
            let t0 = PGVar::theta(0);
            let t1 = PGVar::theta(1);
            let factors = vec![
                CoherentFactor::with_sign(t0, params, false, duals[0]),
                CoherentFactor::with_sign(t1, params, *plus, duals[1]),
            ];
            let weight = PGPoly::one(params)
                .add(&PGPoly::var(params, t0).mul(&PGPoly::var(params, t1)));
            Ok(integrate_tensor(params, &weight, &factors, &[t0, t1]))
        }
        NamedState::W { parties, leading_duals } => {
            require_p(params, 1)?;
            if !(2..=8).contains(parties) || *leading_duals > *parties {
                return Err(EntangleError::PartyCount { got: *parties, min: 2, max: 8 });
            }
            let theta = PGVar::theta(0);
            let factors: Vec<CoherentFactor> = (0..*parties)
                .map(|slot| CoherentFactor {
                    var: theta,
                    scale: QScalar::one(params),
                    dual: slot < *leading_duals,
                })
                .collect();
            let weight = PGPoly::scalar(QScalar::from_int(params, -1));
            Ok(integrate_tensor(params, &weight, &factors, &[theta]))
        }
        NamedState::Ghz { parties, leading_duals } => {
            require_p(params, 1)?;
            if !(2..=6).contains(parties) || *leading_duals > *parties {
                return Err(EntangleError::PartyCount { got: *parties, min: 2, max: 6 });
            }
            let (factors, order) = ghz_layout(params, *parties, *leading_duals);
            let kappa = ghz_solved_constant(params, *parties);
            let half_norm = QScalar::sqrt_nat(params, 2).expect("sqrt(2) in field").inv();
            let weight = PGPoly::scalar(kappa)
                .add(&ghz_monomial(params, *parties))
                .scale(&half_norm);
            Ok(integrate_tensor(params, &weight, &factors, &order))
        }
        NamedState::QutritDiag { plus, duals } => {
            require_p(params, 2)?;
            let (factors, order) = paired_factors(params, *duals);
            let sign = QScalar::from_int(params, if *plus { 1 } else { -1 });
            let target = diagonal_target(
                params,
                &[
                    (0, 0, QScalar::one(params)),
                    (1, 1, sign),
                    (2, 2, QScalar::one(params)),
                ],
            );
            let weight = solve_weight(params, &factors, &[PGVar::theta(0), PGVar::theta_bar(0)], &order, &target)?;
            Ok(integrate_tensor(params, &weight, &factors, &order))
        }
        NamedState::QutritAnti { plus, duals } => {
            require_p(params, 2)?;
            let (factors, order) = paired_factors(params, *duals);
            let sign = QScalar::from_int(params, if *plus { 1 } else { -1 });
            let target = diagonal_target(
                params,
                &[
                    (0, 2, QScalar::one(params)),
                    (1, 1, sign),
                    (2, 0, QScalar::one(params)),
                ],
            );
            let weight = solve_weight(params, &factors, &[PGVar::theta(0), PGVar::theta_bar(0)], &order, &target)?;
            Ok(integrate_tensor(params, &weight, &factors, &order))
        }
        NamedState::QuditDiag { duals } => {
            let (factors, order) = paired_factors(params, *duals);
            let weight = qudit_closed_form_weight(params, PGVar::theta(0));
            Ok(integrate_tensor(params, &weight, &factors, &order))
        }
        NamedState::Subspace { duals } => {
            require_p(params, 2)?;
            let (factors, order) = paired_factors(params, *duals);
            let theta = PGVar::theta(0);
            let pair2 = PGPoly::monomial(params, PGMono::power(theta, 2), QScalar::one(params)).mul(
                &PGPoly::monomial(params, PGMono::power(theta.bar(), 2), QScalar::one(params)),
            );
            let weight = pair2
                .scale(&QScalar::bracket_factorial(params, 2).inv())
                .add(&PGPoly::scalar(QScalar::q_pow(params, 2)));
            Ok(integrate_tensor(params, &weight, &factors, &order))
        }
    }
}

/// The qutrit weights the two-party constructions actually need, exposed for
/// comparison against hand-written kernels.
pub fn qutrit_diag_weight(params: DeformParams, plus: bool) -> Result<PGPoly, EntangleError> {
    require_p(params, 2)?;
    let (factors, order) = paired_factors(params, [false, false]);
    let sign = QScalar::from_int(params, if plus { 1 } else { -1 });
    let target = diagonal_target(
        params,
        &[
            (0, 0, QScalar::one(params)),
            (1, 1, sign),
            (2, 2, QScalar::one(params)),
        ],
    );
    solve_weight(params, &factors, &[PGVar::theta(0), PGVar::theta_bar(0)], &order, &target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> PGVar {
        PGVar::theta(0)
    }

    fn scalar_map(ts: &TensorState) -> BTreeMap<Vec<u8>, QScalar> {
        ts.scalar_coeffs().expect("fully integrated")
    }

    #[test]
    fn shared_variable_pair_states() {
        let params = DeformParams::new(1);
        // minus first argument: plus combination
        let ts = make_named_state(params, &NamedState::PBellShared { plus: true, duals: [false, false] }).unwrap();
        let m = scalar_map(&ts);
        assert_eq!(m.len(), 2);
        assert_eq!(m[&vec![0, 1]], QScalar::one(params));
        assert_eq!(m[&vec![1, 0]], QScalar::one(params));
        // plus first argument: minus combination
        let ts = make_named_state(params, &NamedState::PBellShared { plus: false, duals: [false, false] }).unwrap();
        let m = scalar_map(&ts);
        assert_eq!(m[&vec![0, 1]], QScalar::one(params));
        assert_eq!(m[&vec![1, 0]], QScalar::from_int(params, -1));
    }

    #[test]
    fn paired_variable_pair_states() {
        let params = DeformParams::new(1);
        let ts = make_named_state(params, &NamedState::PBellPaired { plus: true, duals: [false, false] }).unwrap();
        let m = scalar_map(&ts);
        assert_eq!(m.len(), 2);
        assert_eq!(m[&vec![0, 0]], QScalar::one(params));
        assert_eq!(m[&vec![1, 1]], QScalar::one(params));
        let ts = make_named_state(params, &NamedState::PBellPaired { plus: false, duals: [false, false] }).unwrap();
        let m = scalar_map(&ts);
        assert_eq!(m[&vec![0, 0]], QScalar::one(params));
        assert_eq!(m[&vec![1, 1]], QScalar::from_int(params, -1));
    }

    #[test]
    fn w_states_all_patterns() {
        let params = DeformParams::new(1);
        for parties in 2..=4 {
            for duals in 0..=parties {
                let ts = make_named_state(params, &NamedState::W { parties, leading_duals: duals }).unwrap();
                let m = scalar_map(&ts);
                assert_eq!(m.len(), parties, "parties={parties} duals={duals}");
                for (idx, c) in &m {
                    assert_eq!(idx.iter().map(|x| *x as usize).sum::<usize>(), 1);
                    assert_eq!(*c, QScalar::one(params), "idx={idx:?}");
                }
                // slot bases
                for (slot, b) in ts.slots().iter().enumerate() {
                    let expect = if slot < duals { Basis::Phi } else { Basis::Psi };
                    assert_eq!(*b, expect);
                }
            }
        }
    }

    #[test]
    fn ghz_states_and_constant() {
        let params = DeformParams::new(1);
        let inv_sqrt2 = QScalar::sqrt_nat(params, 2).unwrap().inv();
        for parties in 2..=4 {
            let ts = make_named_state(params, &NamedState::Ghz { parties, leading_duals: 0 }).unwrap();
            let m = scalar_map(&ts);
            assert_eq!(m.len(), 2, "parties={parties}");
            assert_eq!(m[&vec![0; parties]], inv_sqrt2, "parties={parties}");
            assert_eq!(m[&vec![1; parties]], inv_sqrt2, "parties={parties}");
        }
        // the sign heuristic matches for even party counts and fails at n=3
        let solved2 = ghz_solved_constant(params, 2);
        assert_eq!(solved2, QScalar::from_int(params, ghz_heuristic_constant(2)));
        let solved3 = ghz_solved_constant(params, 3);
        assert_ne!(solved3, QScalar::from_int(params, ghz_heuristic_constant(3)));
        let solved4 = ghz_solved_constant(params, 4);
        assert_eq!(solved4, QScalar::from_int(params, ghz_heuristic_constant(4)));
    }

    #[test]
    fn qutrit_diagonal_states() {
        let params = DeformParams::new(2);
        for plus in [true, false] {
            for duals in [[false, false], [true, false], [false, true], [true, true]] {
                let ts = make_named_state(params, &NamedState::QutritDiag { plus, duals }).unwrap();
                let m = scalar_map(&ts);
                assert_eq!(m.len(), 3);
                assert_eq!(m[&vec![0, 0]], QScalar::one(params));
                assert_eq!(m[&vec![2, 2]], QScalar::one(params));
                let sign = QScalar::from_int(params, if plus { 1 } else { -1 });
                assert_eq!(m[&vec![1, 1]], sign);
            }
        }
    }

    #[test]
    fn qutrit_weight_coefficients_vs_hand_kernel() {
        // the solved weight keeps the corner terms theta^2 thetabar^2/[2]! and
        // q^2, but its middle coefficient is q^-1, not 1
        let params = DeformParams::new(2);
        let w = qutrit_diag_weight(params, true).unwrap();
        let t = theta();
        let corner = PGMono::from_sequence(&[(t, 2), (t.bar(), 2)], 2).unwrap().1;
        assert_eq!(w.coeff(&corner), QScalar::bracket_factorial(params, 2).inv());
        assert_eq!(w.coeff(&PGMono::unit()), QScalar::q_pow(params, 2));
        let middle = PGMono::from_sequence(&[(t, 1), (t.bar(), 1)], 2).unwrap().1;
        assert_eq!(w.coeff(&middle), QScalar::q_pow(params, -1));
        assert_ne!(w.coeff(&middle), QScalar::one(params));
    }

    #[test]
    fn qutrit_antidiagonal_states() {
        let params = DeformParams::new(2);
        for plus in [true, false] {
            let ts = make_named_state(params, &NamedState::QutritAnti { plus, duals: [false, false] }).unwrap();
            let m = scalar_map(&ts);
            assert_eq!(m.len(), 3);
            assert_eq!(m[&vec![0, 2]], QScalar::one(params));
            assert_eq!(m[&vec![2, 0]], QScalar::one(params));
            let sign = QScalar::from_int(params, if plus { 1 } else { -1 });
            assert_eq!(m[&vec![1, 1]], sign);
        }
    }

    #[test]
    fn qutrit_antidiagonal_weight_corner_coefficients() {
        // corners theta^2/sqrt([2]!) and q^2 thetabar^2/sqrt([2]!); middle
        // again carries the solved q^-1
        let params = DeformParams::new(2);
        let (factors, order) = paired_factors(params, [false, false]);
        let mut target = BTreeMap::new();
        target.insert(vec![0u8, 2u8], QScalar::one(params));
        target.insert(vec![1u8, 1u8], QScalar::one(params));
        target.insert(vec![2u8, 0u8], QScalar::one(params));
        let w = solve_weight(params, &factors, &[theta(), theta().bar()], &order, &target).unwrap();
        let t = theta();
        let root_inv = QScalar::sqrt_bracket_factorial(params, 2).inv();
        assert_eq!(w.coeff(&PGMono::power(t, 2)), root_inv);
        assert_eq!(
            w.coeff(&PGMono::power(t.bar(), 2)),
            &QScalar::q_pow(params, 2) * &root_inv
        );
        let middle = PGMono::from_sequence(&[(t, 1), (t.bar(), 1)], 2).unwrap().1;
        assert_eq!(w.coeff(&middle), QScalar::q_pow(params, -1));
    }

    #[test]
    fn subspace_states() {
        let params = DeformParams::new(2);
        for duals in [[false, false], [true, true]] {
            let ts = make_named_state(params, &NamedState::Subspace { duals }).unwrap();
            let m = scalar_map(&ts);
            assert_eq!(m.len(), 2);
            assert_eq!(m[&vec![0, 0]], QScalar::one(params));
            assert_eq!(m[&vec![2, 2]], QScalar::one(params));
            assert_eq!(ts.schmidt_rank(), Some(2));
        }
    }

    #[test]
    fn qudit_diagonal_round_trip() {
        for p in 2..=4 {
            let params = DeformParams::new(p);
            let ts = make_named_state(params, &NamedState::QuditDiag { duals: [false, false] }).unwrap();
            let m = scalar_map(&ts);
            assert_eq!(m.len(), params.dim(), "p={p}");
            let norm = QScalar::sqrt_nat(params, p as u64 + 1).unwrap().inv();
            for i in 0..params.dim() as u8 {
                assert_eq!(m[&vec![i, i]], norm, "p={p} level={i}");
            }
            // the solver reproduces the closed-form weight exactly
            let (factors, order) = paired_factors(params, [false, false]);
            let mut target = BTreeMap::new();
            for i in 0..params.dim() as u8 {
                target.insert(vec![i, i], norm.clone());
            }
            let solved = solve_weight(
                params,
                &factors,
                &[PGVar::theta(0), PGVar::theta_bar(0)],
                &order,
                &target,
            )
            .unwrap();
            assert_eq!(solved, qudit_closed_form_weight(params, theta()), "p={p}");
        }
    }

    #[test]
    fn zero_weight_gives_zero_state() {
        let params = DeformParams::new(1);
        let factors = vec![
            CoherentFactor::plain(theta(), params),
            CoherentFactor::plain(theta(), params),
        ];
        let ts = integrate_tensor(params, &PGPoly::zero(params), &factors, &[theta()]);
        assert!(ts.is_zero());
    }

    #[test]
    fn unreachable_target_has_no_weight() {
        // |psi_0 psi_1> alone cannot come from a shared-variable pair
        let params = DeformParams::new(1);
        let factors = vec![
            CoherentFactor::plain(theta(), params),
            CoherentFactor::plain(theta(), params),
        ];
        let mut target = BTreeMap::new();
        target.insert(vec![0, 1], QScalar::one(params));
        let err = solve_weight(params, &factors, &[theta()], &[theta()], &target);
        assert!(matches!(err, Err(EntangleError::NoWeight)));
    }

    #[test]
    fn leftover_variables_are_flagged() {
        let params = DeformParams::new(1);
        let t0 = theta();
        let t1 = PGVar::theta(1);
        let factors = vec![
            CoherentFactor::plain(t0, params),
            CoherentFactor::plain(t1, params),
        ];
        // only integrate one of the two variables
        let ts = integrate_tensor(params, &PGPoly::one(params), &factors, &[t0]);
        assert!(ts.partially_integrated());
        assert!(ts.scalar_coeffs().is_none());
    }

    #[test]
    fn wrong_nilpotency_is_rejected() {
        let params = DeformParams::new(2);
        let err = make_named_state(params, &NamedState::W { parties: 3, leading_duals: 0 });
        assert!(matches!(err, Err(EntangleError::WrongNilpotency { required: 1, got: 2 })));
    }
}
