//! Para-Grassmann polynomial engine.
//!
//! Generators theta_i (unbarred) and thetabar_i (barred) satisfy
//! theta^(p+1) = 0 and the q^2-twisted exchange rule: for generators g < h in
//! the canonical order (ascending index, unbarred before barred),
//! g h = q^2 h g.  Monomials are stored in canonical order; reordering during
//! multiplication contributes q^(-2) per unit transposition.
//!
//! Berezin integration maps the integrated variable's exponent n to
//! delta_{n,p} sqrt(\[p\]!) after commuting its block to the front.

use crate::qscalar::{DeformParams, QScalar};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// A para-Grassmann generator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize)]
pub struct PGVar {
    pub index: u32,
    pub barred: bool,
}

impl PGVar {
    pub fn theta(index: u32) -> Self {
        PGVar { index, barred: false }
    }
    pub fn theta_bar(index: u32) -> Self {
        PGVar { index, barred: true }
    }
    pub fn bar(&self) -> Self {
        PGVar { index: self.index, barred: !self.barred }
    }
}

impl fmt::Display for PGVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "tb{}", self.index)
        } else {
            write!(f, "t{}", self.index)
        }
    }
}

/// Canonically ordered monomial: sorted (generator, exponent) pairs with
/// exponents in 1..=p.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PGMono(Vec<(PGVar, u8)>);

impl PGMono {
    pub fn unit() -> Self {
        PGMono(Vec::new())
    }

    pub fn var(v: PGVar) -> Self {
        PGMono(vec![(v, 1)])
    }

    pub fn power(v: PGVar, e: u8) -> Self {
        if e == 0 {
            Self::unit()
        } else {
            PGMono(vec![(v, e)])
        }
    }

    pub fn factors(&self) -> &[(PGVar, u8)] {
        &self.0
    }

    pub fn exponent_of(&self, v: PGVar) -> u8 {
        self.0.iter().find(|(g, _)| *g == v).map_or(0, |(_, e)| *e)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e as u32).sum()
    }

    /// Barred count minus unbarred count, the grading that controls all
    /// level-passing phases.
    pub fn bar_excess(&self) -> i64 {
        self.0
            .iter()
            .map(|(g, e)| if g.barred { *e as i64 } else { -(*e as i64) })
            .sum()
    }

    /// Product of two canonical monomials: the right factor's generators move
    /// left into place; each unit transposition across a distinct generator
    /// contributes q^(-2).  Returns the q-exponent (power of q) and the
    /// combined monomial, or None when nilpotency kills it.
    fn mul(&self, other: &Self, p: u32) -> Option<(i64, PGMono)> {
        let mut inversions: i64 = 0;
        for &(g, ge) in &self.0 {
            for &(h, he) in &other.0 {
                if h < g {
                    inversions += ge as i64 * he as i64;
                }
            }
        }
        let mut combined: BTreeMap<PGVar, u32> = BTreeMap::new();
        for &(g, e) in self.0.iter().chain(other.0.iter()) {
            *combined.entry(g).or_insert(0) += e as u32;
        }
        let mut out = Vec::with_capacity(combined.len());
        for (g, e) in combined {
            if e > p {
                return None;
            }
            out.push((g, e as u8));
        }
        Some((-2 * inversions, PGMono(out)))
    }

    /// Canonicalize an arbitrary generator sequence, counting weighted
    /// inversions.  Returns None when an exponent exceeds p.
    pub fn from_sequence(seq: &[(PGVar, u8)], p: u32) -> Option<(i64, PGMono)> {
        let mut inversions: i64 = 0;
        for i in 0..seq.len() {
            for j in (i + 1)..seq.len() {
                if seq[j].0 < seq[i].0 {
                    inversions += seq[i].1 as i64 * seq[j].1 as i64;
                }
            }
        }
        let mut combined: BTreeMap<PGVar, u32> = BTreeMap::new();
        for &(g, e) in seq {
            *combined.entry(g).or_insert(0) += e as u32;
        }
        let mut out = Vec::with_capacity(combined.len());
        for (g, e) in combined {
            if e > p {
                return None;
            }
            out.push((g, e as u8));
        }
        Some((-2 * inversions, PGMono(out)))
    }
}

impl fmt::Display for PGMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (g, e) in &self.0 {
            if *e == 1 {
                write!(f, "{g} ")?;
            } else {
                write!(f, "{g}^{e} ")?;
            }
        }
        Ok(())
    }
}

/// Which side of a level-n basis element a monomial passes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PassSide {
    Ket,
    Bra,
}

/// Phase acquired when a monomial moves rightward past a level-n ket or bra:
/// mono |n> = phase |n> mono  and  mono <n| = phase <n| mono.
/// The phase is identical for both frame bases.
pub fn move_through_level(mono: &PGMono, level: u8, side: PassSide, params: DeformParams) -> QScalar {
    let e = mono.bar_excess();
    let exp = match side {
        PassSide::Ket => 2 * level as i64 * e,
        PassSide::Bra => -2 * level as i64 * e,
    };
    QScalar::q_pow(params, exp)
}

/// Multivariate para-Grassmann polynomial in canonical normal order.
#[derive(Clone, PartialEq, Eq)]
pub struct PGPoly {
    params: DeformParams,
    terms: BTreeMap<PGMono, QScalar>,
}

impl PGPoly {
    pub fn zero(params: DeformParams) -> Self {
        PGPoly { params, terms: BTreeMap::new() }
    }

    pub fn one(params: DeformParams) -> Self {
        Self::scalar(QScalar::one(params))
    }

    pub fn scalar(c: QScalar) -> Self {
        let params = c.params();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(PGMono::unit(), c);
        }
        PGPoly { params, terms }
    }

    pub fn var(params: DeformParams, v: PGVar) -> Self {
        Self::monomial(params, PGMono::var(v), QScalar::one(params))
    }

    pub fn monomial(params: DeformParams, m: PGMono, c: QScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PGPoly { params, terms }
    }

    pub fn params(&self) -> DeformParams {
        self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PGMono, &QScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &PGMono) -> QScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| QScalar::zero(self.params))
    }

    /// The scalar part, when the polynomial has no generator content.
    pub fn as_scalar(&self) -> Option<QScalar> {
        if self.terms.is_empty() {
            return Some(QScalar::zero(self.params));
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&PGMono::unit()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn insert(&mut self, m: PGMono, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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
        assert_eq!(self.params, o.params, "mixed deformation parameters");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = PGPoly::zero(self.params);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, s: &QScalar) -> Self {
        let mut out = PGPoly::zero(self.params);
        for (m, c) in &self.terms {
            let sc = c * s;
            if !sc.is_zero() {
                out.terms.insert(m.clone(), sc);
            }
        }
        out
    }

    /// Product in canonical normal order with exchange phases.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.params, o.params, "mixed deformation parameters");
        let p = self.params.p();
        let mut out = PGPoly::zero(self.params);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if let Some((qexp, m)) = m1.mul(m2, p) {
                    let phase = QScalar::q_pow(self.params, qexp);
                    let coeff = &(c1 * c2) * &phase;
                    out.insert(m, coeff);
                }
            }
        }
        out
    }

    /// Berezin integral over one variable: the variable's block commutes to
    /// the front, then exponent n maps to delta_{n,p} sqrt(\[p\]!).
    pub fn berezin(&self, v: PGVar) -> Self {
        let p = self.params.p();
        let norm = QScalar::sqrt_bracket_factorial(self.params, p);
        let mut out = PGPoly::zero(self.params);
        for (m, c) in &self.terms {
            let k = m.exponent_of(v);
            if k as u32 != p {
                continue;
            }
            // degree of generators strictly earlier than v (they sit to its left)
            let earlier: i64 = m
                .factors()
                .iter()
                .filter(|(g, _)| *g < v)
                .map(|(_, e)| *e as i64)
                .sum();
            let phase = QScalar::q_pow(self.params, 2 * k as i64 * earlier);
            let rest: Vec<(PGVar, u8)> =
                m.factors().iter().filter(|(g, _)| *g != v).cloned().collect();
            let coeff = &(c * &phase) * &norm;
            out.insert(PGMono(rest), coeff);
        }
        out
    }

    /// Iterated Berezin integral, innermost variable first.
    pub fn berezin_all(&self, order: &[PGVar]) -> Self {
        let mut acc = self.clone();
        for v in order {
            acc = acc.berezin(*v);
        }
        acc
    }

    /// Antilinear involution: conjugate coefficients, swap bars, reverse the
    /// generator sequence, re-canonicalize.
    pub fn conjugate(&self) -> Self {
        let p = self.params.p();
        let mut out = PGPoly::zero(self.params);
        for (m, c) in &self.terms {
            let seq: Vec<(PGVar, u8)> =
                m.factors().iter().rev().map(|(g, e)| (g.bar(), *e)).collect();
            let (qexp, mono) = PGMono::from_sequence(&seq, p)
                .expect("conjugation cannot raise exponents");
            let phase = QScalar::q_pow(self.params, qexp);
            out.insert(mono, &c.conj() * &phase);
        }
        out
    }

    /// Substitute v -> scale * v (scaling term coefficients by scale^exp).
    pub fn substitute_scaled(&self, v: PGVar, scale: &QScalar) -> Self {
        let mut out = PGPoly::zero(self.params);
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            let mut factor = QScalar::one(self.params);
            for _ in 0..e {
                factor = &factor * scale;
            }
            out.insert(m.clone(), &factor * c);
        }
        out
    }

    /// All variables that occur.
    pub fn variables(&self) -> Vec<PGVar> {
        let mut vs: Vec<PGVar> = Vec::new();
        for m in self.terms.keys() {
            for (g, _) in m.factors() {
                if !vs.contains(g) {
                    vs.push(*g);
                }
            }
        }
        vs.sort();
        vs
    }

    pub fn eval_map(&self) -> Vec<(String, crate::qscalar::Complex64)> {
        self.terms
            .iter()
            .map(|(m, c)| (format!("{m}"), c.eval()))
            .collect()
    }
}

impl fmt::Display for PGPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}] {m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PGPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize)]
struct PGPolyTermJson {
    exponents: Vec<u8>,
    coeff: QScalar,
}

#[derive(Serialize)]
struct PGPolyJson {
    vars: Vec<PGVar>,
    terms: Vec<PGPolyTermJson>,
}

impl Serialize for PGPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let vars = self.variables();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| PGPolyTermJson {
                exponents: vars.iter().map(|v| m.exponent_of(*v)).collect(),
                coeff: c.clone(),
            })
            .collect();
        PGPolyJson { vars, terms }.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> PGVar {
        PGVar::theta(0)
    }
    fn tb() -> PGVar {
        PGVar::theta_bar(0)
    }

    #[test]
    fn paired_exchange() {
        // thetabar * theta = q^-2 theta thetabar
        for p in 1..=4 {
            let params = DeformParams::new(p);
            let lhs = PGPoly::var(params, tb()).mul(&PGPoly::var(params, t()));
            let mono = PGMono::from_sequence(&[(t(), 1), (tb(), 1)], p).unwrap().1;
            let expected = PGPoly::monomial(params, mono, QScalar::q_pow(params, -2));
            assert_eq!(lhs, expected, "p={p}");
        }
    }

    #[test]
    fn nilpotency() {
        for p in 1..=4 {
            let params = DeformParams::new(p);
            let theta = PGPoly::var(params, t());
            let mut acc = PGPoly::one(params);
            for _ in 0..p {
                acc = acc.mul(&theta);
                assert!(!acc.is_zero());
            }
            assert!(acc.mul(&theta).is_zero(), "theta^(p+1) must vanish at p={p}");
        }
    }

    #[test]
    fn distinct_qubit_variables_anticommute() {
        let params = DeformParams::new(1);
        let t1 = PGVar::theta(1);
        let t2 = PGVar::theta(2);
        let ab = PGPoly::var(params, t1).mul(&PGPoly::var(params, t2));
        let ba = PGPoly::var(params, t2).mul(&PGPoly::var(params, t1));
        assert_eq!(ba, ab.neg(), "theta_2 theta_1 = -theta_1 theta_2 at p=1");
    }

    // Brute-force reference multiplication: expand both monomials into unit
    // generator sequences and bubble-sort, one adjacent swap at a time.
    fn reference_mul(params: DeformParams, m1: &PGMono, m2: &PGMono) -> PGPoly {
        let p = params.p();
        let mut seq: Vec<PGVar> = Vec::new();
        for (g, e) in m1.factors().iter().chain(m2.factors()) {
            for _ in 0..*e {
                seq.push(*g);
            }
        }
        let mut qexp: i64 = 0;
        let n = seq.len();
        for _ in 0..n * n {
            let mut swapped = false;
            for i in 0..seq.len().saturating_sub(1) {
                if seq[i + 1] < seq[i] {
                    seq.swap(i, i + 1);
                    qexp -= 2;
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        let pairs: Vec<(PGVar, u8)> = seq.iter().map(|g| (*g, 1u8)).collect();
        match PGMono::from_sequence(&pairs, p) {
            Some((extra, mono)) => {
                assert_eq!(extra, 0, "sorted sequence must be phase-free");
                PGPoly::monomial(params, mono, QScalar::q_pow(params, qexp))
            }
            None => PGPoly::zero(params),
        }
    }

    #[test]
    fn exchange_consistency_against_bruteforce() {
        for p in 1..=3 {
            let params = DeformParams::new(p);
            let gens = [
                PGVar::theta(0),
                PGVar::theta_bar(0),
                PGVar::theta(1),
                PGVar::theta_bar(1),
            ];
            // all monomials of total degree <= 2 over the four generators
            let mut monos: Vec<PGMono> = vec![PGMono::unit()];
            for &g in &gens {
                monos.push(PGMono::var(g));
                for &h in &gens {
                    if let Some((qe, m)) = PGMono::var(g).mul(&PGMono::var(h), p) {
                        if qe == 0 {
                            monos.push(m);
                        }
                    }
                }
            }
            monos.dedup();
            for m1 in &monos {
                for m2 in &monos {
                    let engine = PGPoly::monomial(params, m1.clone(), QScalar::one(params))
                        .mul(&PGPoly::monomial(params, m2.clone(), QScalar::one(params)));
                    let brute = reference_mul(params, m1, m2);
                    assert_eq!(engine, brute, "p={p} m1={m1} m2={m2}");
                }
            }
        }
    }

    #[test]
    fn berezin_rules() {
        for p in 1..=4 {
            let params = DeformParams::new(p);
            // integral of theta^p is sqrt([p]!)
            let theta_p = PGPoly::monomial(params, PGMono::power(t(), p as u8), QScalar::one(params));
            let val = theta_p.berezin(t());
            assert_eq!(
                val.as_scalar().unwrap(),
                QScalar::sqrt_bracket_factorial(params, p),
                "p={p}"
            );
            // lower powers vanish
            for n in 0..p {
                let theta_n = PGPoly::monomial(params, PGMono::power(t(), n as u8), QScalar::one(params));
                assert!(theta_n.berezin(t()).is_zero(), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn iterated_integral_contraction() {
        // innermost d_theta then d_thetabar of theta^a thetabar^b
        // gives delta_{a,p} delta_{b,p} [p]! with no phase
        for p in 1..=4 {
            let params = DeformParams::new(p);
            for a in 0..=p {
                for b in 0..=p {
                    let seq = [(t(), a as u8), (tb(), b as u8)];
                    let seq: Vec<_> = seq.iter().filter(|(_, e)| *e > 0).cloned().collect();
                    let (qe, m) = PGMono::from_sequence(&seq, p).unwrap();
                    assert_eq!(qe, 0);
                    let poly = PGPoly::monomial(params, m, QScalar::one(params));
                    let out = poly.berezin_all(&[t(), tb()]);
                    if a == p && b == p {
                        assert_eq!(
                            out.as_scalar().unwrap(),
                            QScalar::bracket_factorial(params, p),
                            "p={p}"
                        );
                    } else {
                        assert!(out.is_zero(), "p={p} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn nested_two_variable_integral() {
        // p=1: innermost d_theta then d_thetabar of theta*thetabar is 1
        let params = DeformParams::new(1);
        let (qe, m) = PGMono::from_sequence(&[(t(), 1), (tb(), 1)], 1).unwrap();
        assert_eq!(qe, 0);
        let poly = PGPoly::monomial(params, m, QScalar::one(params));
        let inner = poly.berezin(t());
        let outer = inner.berezin(tb());
        assert_eq!(outer.as_scalar().unwrap(), QScalar::one(params));
    }

    #[test]
    fn berezin_is_linear() {
        let params = DeformParams::new(2);
        let a = PGPoly::monomial(params, PGMono::power(t(), 2), QScalar::from_int(params, 3));
        let b = PGPoly::monomial(params, PGMono::var(t()), params.q());
        let sum = a.add(&b);
        assert_eq!(
            sum.berezin(t()),
            a.berezin(t()).add(&b.berezin(t()))
        );
    }

    #[test]
    fn conjugation_examples() {
        let params = DeformParams::new(2);
        // theta -> thetabar
        let theta = PGPoly::var(params, t());
        assert_eq!(theta.conjugate(), PGPoly::var(params, tb()));
        // q^2 -> q^-2
        let c = PGPoly::scalar(QScalar::q_pow(params, 2));
        assert_eq!(c.conjugate(), PGPoly::scalar(QScalar::q_pow(params, -2)));
    }

    #[test]
    fn conjugation_is_involutive() {
        for p in 1..=3 {
            let params = DeformParams::new(p);
            let t1 = PGVar::theta(1);
            let samples = [
                PGPoly::var(params, t()),
                PGPoly::var(params, t()).mul(&PGPoly::var(params, tb())),
                PGPoly::var(params, t()).mul(&PGPoly::var(params, t1)),
                PGPoly::var(params, tb())
                    .scale(&params.q())
                    .add(&PGPoly::one(params)),
            ];
            for s in &samples {
                assert_eq!(s.conjugate().conjugate(), *s, "p={p} s={s}");
            }
        }
    }

    #[test]
    fn level_pass_phases() {
        let params = DeformParams::new(3);
        let n = 2u8;
        // theta past a ket: q^(-2n)
        let m = PGMono::var(t());
        assert_eq!(
            move_through_level(&m, n, PassSide::Ket, params),
            QScalar::q_pow(params, -2 * n as i64)
        );
        // thetabar past a bra: q^(-2n)
        let mb = PGMono::var(tb());
        assert_eq!(
            move_through_level(&mb, n, PassSide::Bra, params),
            QScalar::q_pow(params, -2 * n as i64)
        );
        // theta^k thetabar^l past a ket: q^(2n(l-k))
        let (_, mixed) = PGMono::from_sequence(&[(t(), 3), (tb(), 1)], 3).unwrap();
        assert_eq!(
            move_through_level(&mixed, n, PassSide::Ket, params),
            QScalar::q_pow(params, 2 * n as i64 * (1 - 3))
        );
    }

    #[test]
    fn associativity_random_triples() {
        for p in 1..=4 {
            let params = DeformParams::new(p);
            let v0 = PGVar::theta(0);
            let v0b = PGVar::theta_bar(0);
            let v1 = PGVar::theta(1);
            let polys = [
                PGPoly::one(params).add(&PGPoly::var(params, v0)),
                PGPoly::var(params, v0b).scale(&params.q()),
                PGPoly::var(params, v1).add(&PGPoly::var(params, v0).scale(&QScalar::from_int(params, -2))),
                PGPoly::var(params, v0).mul(&PGPoly::var(params, v0b)),
            ];
            for a in &polys {
                for b in &polys {
                    for c in &polys {
                        assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)), "p={p}");
                    }
                }
            }
        }
    }
}
