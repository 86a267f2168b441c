//! Deformed su(2)/su(1,1) structures generated by the changed ladder pair.
//!
//! The structure parameter r twists the commutator \[A,B\]_r = AB - r BA.  The
//! admissible r are found symbolically: normal-ordering in the untruncated
//! oscillator algebra (lower bbar b = 1 + q^2 bbar b) exposes the coefficient
//! of the non-closing monomial bbar b^2, a quadratic in r whose roots are the
//! structure parameters.  Matrix verification then checks the closed relation
//! triples on concrete frames.

use crate::exact::Matrix;
use crate::frame::OperatorSet;
use crate::qscalar::{DeformParams, QScalar};
use crate::report::Report;
use std::collections::BTreeMap;

/// Which twisted commutator defines the middle generator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BzVariant {
    /// b_z = \[b, bbar\]_r = b bbar - r bbar b  (deformed su(2) family)
    LowerRaise,
    /// b_z = \[bbar, b\]_r = bbar b - r b bbar  (deformed su(1,1) family)
    RaiseLower,
}

/// Element of the untruncated oscillator algebra in the normal-ordered basis
/// bbar^j b^k.
#[derive(Clone, PartialEq, Debug)]
pub struct OscPoly {
    params: DeformParams,
    terms: BTreeMap<(u32, u32), QScalar>,
}

impl OscPoly {
    pub fn zero(params: DeformParams) -> Self {
        OscPoly { params, terms: BTreeMap::new() }
    }

    pub fn one(params: DeformParams) -> Self {
        Self::basis(params, 0, 0, QScalar::one(params))
    }

    pub fn lowering(params: DeformParams) -> Self {
        Self::basis(params, 0, 1, QScalar::one(params))
    }

    pub fn raising(params: DeformParams) -> Self {
        Self::basis(params, 1, 0, QScalar::one(params))
    }

    pub fn basis(params: DeformParams, j: u32, k: u32, c: QScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((j, k), c);
        }
        OscPoly { params, terms }
    }

    pub fn coeff(&self, j: u32, k: u32) -> QScalar {
        self.terms.get(&(j, k)).cloned().unwrap_or_else(|| QScalar::zero(self.params))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: (u32, u32), c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get() + &c;
                if merged.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&QScalar::from_int(self.params, -1)))
    }

    pub fn scale(&self, s: &QScalar) -> Self {
        let mut out = Self::zero(self.params);
        for (k, c) in &self.terms {
            out.insert(*k, c * s);
        }
        out
    }

    /// Normal-order b^k bbar^j into sum_i coeff (bbar^a b^c) using
    /// b^k bbar = q^(2k) bbar b^k + \[k\] b^(k-1).
    fn reorder(params: DeformParams, k: u32, j: u32) -> OscPoly {
        if j == 0 || k == 0 {
            return OscPoly::basis(params, j, k, QScalar::one(params));
        }
        // peel one bbar: b^k bbar^j = (b^k bbar) bbar^(j-1)
        let lead = OscPoly::basis(params, 1, k, QScalar::q_pow(params, 2 * k as i64))
            .add(&OscPoly::basis(params, 0, k - 1, QScalar::bracket(params, k)));
        // multiply the remainder bbar^(j-1) from the right
        let mut out = OscPoly::zero(params);
        for (&(a, c), coeff) in &lead.terms {
            let rest = Self::reorder(params, c, j - 1);
            for (&(a2, c2), coeff2) in &rest.terms {
                out.insert((a + a2, c2), &(coeff * coeff2) * &QScalar::one(params));
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let params = self.params;
        let mut out = Self::zero(params);
        for (&(j1, k1), c1) in &self.terms {
            for (&(j2, k2), c2) in &o.terms {
                // bbar^j1 b^k1 bbar^j2 b^k2
                let mid = Self::reorder(params, k1, j2);
                for (&(a, c), coeff) in &mid.terms {
                    out.insert((j1 + a, c + k2), &(c1 * c2) * coeff);
                }
            }
        }
        out
    }
}

/// Polynomial in the structure parameter r with oscillator-algebra
/// coefficients.
#[derive(Clone, Debug)]
pub struct RPoly {
    params: DeformParams,
    /// coeffs\[d\] multiplies r^d
    coeffs: Vec<OscPoly>,
}

impl RPoly {
    fn coeff(&self, d: usize) -> OscPoly {
        self.coeffs.get(d).cloned().unwrap_or_else(|| OscPoly::zero(self.params))
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|d| self.coeff(d).add(&o.coeff(d))).collect();
        RPoly { params: self.params, coeffs }
    }

    fn shift_r(&self) -> Self {
        // multiply by r
        let mut coeffs = vec![OscPoly::zero(self.params)];
        coeffs.extend(self.coeffs.iter().cloned());
        RPoly { params: self.params, coeffs }
    }

    fn neg(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.scale(&QScalar::from_int(self.params, -1)))
            .collect();
        RPoly { params: self.params, coeffs }
    }

    fn mul_left(&self, x: &OscPoly) -> Self {
        let coeffs = self.coeffs.iter().map(|c| x.mul(c)).collect();
        RPoly { params: self.params, coeffs }
    }

    fn mul_right(&self, x: &OscPoly) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.mul(x)).collect();
        RPoly { params: self.params, coeffs }
    }
}

/// b_z as a degree-1 polynomial in r.
fn bz_symbolic(params: DeformParams, variant: BzVariant) -> RPoly {
    let b = OscPoly::lowering(params);
    let bbar = OscPoly::raising(params);
    match variant {
        BzVariant::LowerRaise => RPoly {
            params,
            coeffs: vec![b.mul(&bbar), bbar.mul(&b).scale(&QScalar::from_int(params, -1))],
        },
        BzVariant::RaiseLower => RPoly {
            params,
            coeffs: vec![bbar.mul(&b), b.mul(&bbar).scale(&QScalar::from_int(params, -1))],
        },
    }
}

/// \[b_z, b\]_r as a degree-2 polynomial in r.
fn bz_commutator_symbolic(params: DeformParams, variant: BzVariant) -> RPoly {
    let b = OscPoly::lowering(params);
    let bz = bz_symbolic(params, variant);
    // bz*b - r * b*bz
    bz.mul_right(&b).add(&bz.mul_left(&b).shift_r().neg())
}

/// The obstruction to closure: the coefficient of the normal-ordered monomial
/// bbar b^2 in \[b_z, b\]_r, as a quadratic \[c0, c1, c2\] in r.
pub fn closure_quadratic(params: DeformParams, variant: BzVariant) -> Vec<QScalar> {
    let rp = bz_commutator_symbolic(params, variant);
    (0..=rp.degree().max(2)).map(|d| rp.coeff(d).coeff(1, 2)).collect()
}

/// Scalar coefficient alpha(r) on the closing part: \[b_z, b\]_r = alpha(r) b
/// once the obstruction vanishes.  Read off the coefficient of b itself.
pub fn closure_scalar(params: DeformParams, variant: BzVariant, r: &QScalar) -> QScalar {
    let rp = bz_commutator_symbolic(params, variant);
    let mut acc = QScalar::zero(params);
    let mut rp_pow = QScalar::one(params);
    for d in 0..=rp.degree() {
        acc += &(&rp.coeff(d).coeff(0, 1) * &rp_pow);
        rp_pow = &rp_pow * r;
    }
    acc
}

/// All structure parameters r for which \[b_z, b\]_r closes on b: roots of the
/// obstruction quadratic, found by probing root-of-unity candidates and
/// deflating with the product of roots.
pub fn solve_structure_parameter(params: DeformParams, variant: BzVariant) -> Vec<QScalar> {
    let quad = closure_quadratic(params, variant);
    let eval_at = |r: &QScalar| -> QScalar {
        let mut acc = QScalar::zero(params);
        let mut pow = QScalar::one(params);
        for c in &quad {
            acc += &(c * &pow);
            pow = &pow * r;
        }
        acc
    };
    let c2 = quad.get(2).cloned().unwrap_or_else(|| QScalar::zero(params));
    let c0 = quad.first().cloned().unwrap_or_else(|| QScalar::zero(params));
    let order = 2 * (params.p() as i64 + 1);
    let mut candidates: Vec<QScalar> = Vec::new();
    for k in 0..2 * order {
        candidates.push(QScalar::q_pow(params, k));
        candidates.push(-&QScalar::q_pow(params, k));
    }
    let mut roots: Vec<QScalar> = Vec::new();
    for cand in candidates {
        if eval_at(&cand).is_zero() && !roots.contains(&cand) {
            roots.push(cand);
        }
    }
    // quadratic: recover the partner root from the product c0/c2 when probing
    // found only one
    if roots.len() == 1 && !c2.is_zero() {
        let partner = &(&c0 * &c2.inv()) * &roots[0].inv();
        if eval_at(&partner).is_zero() && !roots.contains(&partner) {
            roots.push(partner);
        }
    }
    roots
}

/// Matrix b_z over a concrete operator set.
pub fn bz_matrix(ops: &OperatorSet, variant: BzVariant, r: &QScalar) -> Matrix<QScalar> {
    match variant {
        BzVariant::LowerRaise => ops.b.matmul(&ops.b_bar).sub(&ops.b_bar.matmul(&ops.b).scale(r)),
        BzVariant::RaiseLower => ops.b_bar.matmul(&ops.b).sub(&ops.b.matmul(&ops.b_bar).scale(r)),
    }
}

fn twisted_comm(x: &Matrix<QScalar>, y: &Matrix<QScalar>, r: &QScalar) -> Matrix<QScalar> {
    x.matmul(y).sub(&y.matmul(x).scale(r))
}

/// Verify the closed relation triple for a solved structure parameter on a
/// concrete frame: the defining relation, \[b_z, b\]_r = alpha b, and
/// \[bbar, b_z\]_r = alpha bbar.
pub fn verify_deformed_algebra(
    ops: &OperatorSet,
    params: DeformParams,
    variant: BzVariant,
    r: &QScalar,
) -> Report {
    let tag = match variant {
        BzVariant::LowerRaise => "su2-type",
        BzVariant::RaiseLower => "su11-type",
    };
    let mut report = Report::new(format!("deformed algebra ({tag})"));
    let bz = bz_matrix(ops, variant, r);
    let alpha = closure_scalar(params, variant, r);

    let defining = match variant {
        BzVariant::LowerRaise => twisted_comm(&ops.b, &ops.b_bar, r).sub(&bz),
        BzVariant::RaiseLower => twisted_comm(&ops.b_bar, &ops.b, r).sub(&bz),
    };
    report.push("[b, b_bar]_r = b_z (defining)", defining.is_zero(), defining.max_abs());

    let lower = twisted_comm(&bz, &ops.b, r).sub(&ops.b.scale(&alpha));
    report.push("[b_z, b]_r = alpha b", lower.is_zero(), lower.max_abs());

    let raise = twisted_comm(&ops.b_bar, &bz, r).sub(&ops.b_bar.scale(&alpha));
    report.push("[b_bar, b_z]_r = alpha b_bar", raise.is_zero(), raise.max_abs());

    report
}

/// Float twin of `verify_deformed_algebra` at the given tolerance.
pub fn verify_deformed_algebra_float(
    ops: &crate::frame::FloatOperatorSet,
    params: DeformParams,
    variant: BzVariant,
    r: &QScalar,
    tol: f64,
) -> Report {
    use crate::floatmat::{max_abs, CMat};
    let tag = match variant {
        BzVariant::LowerRaise => "su2-type",
        BzVariant::RaiseLower => "su11-type",
    };
    let mut report = Report::new(format!("deformed algebra ({tag}, float)"));
    let rv = r.eval();
    let alpha = closure_scalar(params, variant, r).eval();
    let tc = |x: &CMat, y: &CMat| x * y - (y * x).map(|c| c * rv);
    let bz = match variant {
        BzVariant::LowerRaise => tc(&ops.b, &ops.b_bar),
        BzVariant::RaiseLower => tc(&ops.b_bar, &ops.b),
    };
    let lower = tc(&bz, &ops.b) - ops.b.map(|c| c * alpha);
    let m = max_abs(&lower);
    report.push("[b_z, b]_r = alpha b", m <= tol, m);
    let raise = tc(&ops.b_bar, &bz) - ops.b_bar.map(|c| c * alpha);
    let m = max_abs(&raise);
    report.push("[b_bar, b_z]_r = alpha b_bar", m <= tol, m);
    report
}

/// Residual of proportionality on matrices: \[b_z, b\]_r - alpha(r) b.
pub fn proportionality_residual(
    ops: &OperatorSet,
    params: DeformParams,
    variant: BzVariant,
    r: &QScalar,
) -> Matrix<QScalar> {
    let bz = bz_matrix(ops, variant, r);
    let alpha = closure_scalar(params, variant, r);
    twisted_comm(&bz, &ops.b, r).sub(&ops.b.scale(&alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{ladder_ops, Frame};

    #[test]
    fn oscillator_reordering_rule() {
        // b bbar = 1 + q^2 bbar b in the normal-ordered basis
        let params = DeformParams::new(3);
        let prod = OscPoly::lowering(params).mul(&OscPoly::raising(params));
        assert_eq!(prod.coeff(0, 0), QScalar::one(params));
        assert_eq!(prod.coeff(1, 1), QScalar::q_pow(params, 2));
        // b^2 bbar = q^4 bbar b^2 + [2] b
        let b2 = OscPoly::basis(params, 0, 2, QScalar::one(params));
        let prod = b2.mul(&OscPoly::raising(params));
        assert_eq!(prod.coeff(1, 2), QScalar::q_pow(params, 4));
        assert_eq!(prod.coeff(0, 1), QScalar::bracket(params, 2));
    }

    #[test]
    fn closure_quadratic_matches_expected_forms() {
        for p in 1..=5 {
            let params = DeformParams::new(p);
            // lower-raise family: q^2 r^2 - (q^4 + 1) r + q^2
            let quad = closure_quadratic(params, BzVariant::LowerRaise);
            assert_eq!(quad[2], QScalar::q_pow(params, 2), "p={p}");
            assert_eq!(
                quad[1],
                -&(&QScalar::q_pow(params, 4) + &QScalar::one(params)),
                "p={p}"
            );
            assert_eq!(quad[0], QScalar::q_pow(params, 2), "p={p}");
            // raise-lower family: q^4 r^2 - 2 q^2 r + 1 = (q^2 r - 1)^2
            let quad = closure_quadratic(params, BzVariant::RaiseLower);
            assert_eq!(quad[2], QScalar::q_pow(params, 4), "p={p}");
            assert_eq!(quad[1], &QScalar::from_int(params, -2) * &QScalar::q_pow(params, 2), "p={p}");
            assert_eq!(quad[0], QScalar::one(params), "p={p}");
        }
    }

    #[test]
    fn structure_parameters() {
        for p in 1..=5 {
            let params = DeformParams::new(p);
            let roots = solve_structure_parameter(params, BzVariant::LowerRaise);
            let q2 = QScalar::q_pow(params, 2);
            let q2inv = QScalar::q_pow(params, -2);
            if p == 1 {
                assert_eq!(roots.len(), 1, "p=1 roots coincide");
                assert_eq!(roots[0], q2);
                assert_eq!(roots[0], q2inv);
            } else {
                assert_eq!(roots.len(), 2, "p={p}");
                assert!(roots.contains(&q2), "p={p}");
                assert!(roots.contains(&q2inv), "p={p}");
            }
            let roots = solve_structure_parameter(params, BzVariant::RaiseLower);
            assert_eq!(roots.len(), 1, "p={p} double root");
            assert_eq!(roots[0], q2inv, "p={p}");
        }
    }

    #[test]
    fn closure_scalars_match_displayed_coefficients() {
        for p in 2..=5 {
            let params = DeformParams::new(p);
            // r = q^2: coefficient (1 - q^2)
            let alpha = closure_scalar(params, BzVariant::LowerRaise, &QScalar::q_pow(params, 2));
            let expect = &QScalar::one(params) - &QScalar::q_pow(params, 2);
            assert_eq!(alpha, expect, "p={p}");
            // r = q^-2: coefficient (q^-4 - q^-2)
            let alpha = closure_scalar(params, BzVariant::LowerRaise, &QScalar::q_pow(params, -2));
            let expect = &QScalar::q_pow(params, -4) - &QScalar::q_pow(params, -2);
            assert_eq!(alpha, expect, "p={p}");
            // nilpotency exponent form: with k = p, q^(2(k-1)) - q^(2k) equals the same value
            let k = p as i64;
            let expect_k = &QScalar::q_pow(params, 2 * (k - 1)) - &QScalar::q_pow(params, 2 * k);
            assert_eq!(alpha, expect_k, "p={p} exponent form");
            // raise-lower family at its double root
            let alpha = closure_scalar(params, BzVariant::RaiseLower, &QScalar::q_pow(params, -2));
            assert_eq!(alpha, expect, "p={p} raise-lower");
        }
    }

    #[test]
    fn matrix_triples_hold_on_frames() {
        for p in 1..=4 {
            let params = DeformParams::new(p);
            for frame in [Frame::identity(params), Frame::random(params, 42)] {
                let ops = ladder_ops(&frame);
                for variant in [BzVariant::LowerRaise, BzVariant::RaiseLower] {
                    for r in solve_structure_parameter(params, variant) {
                        let report = verify_deformed_algebra(&ops, params, variant, &r);
                        assert!(
                            report.all_passed(),
                            "p={p} {variant:?}: {:?}",
                            report.failed_relations()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn unit_twist_fails_for_higher_levels() {
        // r = 1 is not a structure parameter for p >= 2
        for p in 2..=4 {
            let params = DeformParams::new(p);
            let one = QScalar::one(params);
            let quad = closure_quadratic(params, BzVariant::LowerRaise);
            let at_one = &(&quad[0] + &quad[1]) + &quad[2];
            assert!(!at_one.is_zero(), "p={p} obstruction must not vanish at r=1");
            let ops = ladder_ops(&Frame::identity(params));
            let res = proportionality_residual(&ops, params, BzVariant::LowerRaise, &one);
            assert!(!res.is_zero(), "p={p} matrix residual must not vanish at r=1");
        }
    }

    #[test]
    fn two_level_bz_at_unit_twist() {
        // p=1, r=1, lower-raise: b bbar - bbar b = diag(1, -1)
        let params = DeformParams::new(1);
        let ops = ladder_ops(&Frame::identity(params));
        let bz = bz_matrix(&ops, BzVariant::LowerRaise, &QScalar::one(params));
        assert_eq!(*bz.at(0, 0), QScalar::one(params));
        assert_eq!(*bz.at(1, 1), QScalar::from_int(params, -1));
        assert!(bz.at(0, 1).is_zero() && bz.at(1, 0).is_zero());
    }
}
