//! Exact scalar arithmetic for the deformed oscillator kernel.
//!
//! Scalars live in the cyclotomic field Q(zeta), zeta = exp(i*pi/(2(p+1))),
//! extended by formal square roots of the q-brackets \[2\], ..., \[p\].  The
//! deformation phase is q = zeta^2 = exp(i*pi/(p+1)), so q^2 is a primitive
//! (p+1)-th root of unity and the symmetric-bracket roots sqrt(\[\[n\]\]) are
//! expressible as zeta^(1-n) * sqrt(\[n\]).
//!
//! Canonical form: every squared radical is rewritten into its cyclotomic
//! value, so radical exponents are 0 or 1 and equality is coefficient
//! equality.  sqrt(\[1\]) is identified with 1 (its principal value), which
//! keeps the ring free of zero divisors.

pub mod quad;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Complex, One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::ser::SerializeStruct;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex};

pub type Complex64 = Complex<f64>;

/// Largest supported nilpotency index.  The cyclotomic degree grows with p;
/// everything in this crate is exercised for p <= 6.
pub const MAX_P: u32 = 12;

/// Nilpotency index `p`; fixes the space dimension p+1 and the root of unity
/// q = exp(i*pi/(p+1)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct DeformParams {
    p: u32,
}

impl DeformParams {
    pub fn new(p: u32) -> Self {
        assert!(
            (1..=MAX_P).contains(&p),
            "nilpotency index must be in 1..={MAX_P}, got {p}"
        );
        Self { p }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Dimension of the level space, p + 1.
    pub fn dim(&self) -> usize {
        self.p as usize + 1
    }

    fn ctx(&self) -> Arc<CycCtx> {
        ctx_for(self.p)
    }

    pub fn q(&self) -> QScalar {
        QScalar::q_pow(*self, 1)
    }
}

// ---------------------------------------------------------------------------
// Dense rational polynomial helpers (coefficient index = degree).

fn ptrim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn pmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    ptrim(&mut out);
    out
}

/// Division with remainder by a monic divisor.
fn pdivrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!den.is_empty() && den.last().unwrap().is_one(), "divisor must be monic");
    let mut rem: Vec<BigRational> = num.to_vec();
    ptrim(&mut rem);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - dd];
    while rem.len() > dd {
        let lead = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - dd;
        quo[shift] = lead.clone();
        for (k, c) in den.iter().enumerate() {
            let t = &lead * c;
            rem[shift + k] -= t;
        }
        ptrim(&mut rem);
    }
    ptrim(&mut quo);
    (quo, rem)
}

/// Extended Euclid over Q\[x\]: returns (g, s) with s*a = g (mod m), g the gcd
/// normalized so callers can divide by its constant value.
fn pegcd(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0: Vec<BigRational> = m.to_vec();
    let mut r1: Vec<BigRational> = a.to_vec();
    ptrim(&mut r0);
    ptrim(&mut r1);
    let mut s0: Vec<BigRational> = Vec::new();
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !r1.is_empty() {
        // make r1 monic for pdivrem
        let lead = r1.last().unwrap().clone();
        let monic: Vec<BigRational> = r1.iter().map(|c| c / &lead).collect();
        let (q, r) = pdivrem(&r0, &monic);
        let q: Vec<BigRational> = q.iter().map(|c| c / &lead).collect();
        let qs1 = pmul(&q, &s1);
        let mut s2 = s0.clone();
        if s2.len() < qs1.len() {
            s2.resize(qs1.len(), BigRational::zero());
        }
        for (i, c) in qs1.iter().enumerate() {
            s2[i] -= c;
        }
        ptrim(&mut s2);
        r0 = r1;
        s0 = s1;
        r1 = r;
        s1 = s2;
    }
    (r0, s0)
}

/// Cyclotomic polynomial Phi_n over the integers, computed by exact division
/// of x^n - 1 by the proper-divisor cyclotomics.
fn cyclotomic_poly(n: u32, memo: &mut HashMap<u32, Vec<BigRational>>) -> Vec<BigRational> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    let mut den = vec![BigRational::one()];
    for d in 1..n {
        if n.is_multiple_of(d) {
            den = pmul(&den, &cyclotomic_poly(d, memo));
        }
    }
    // den is monic (product of monic cyclotomics)
    let (quo, rem) = pdivrem(&num, &den);
    debug_assert!(rem.is_empty(), "cyclotomic division must be exact");
    memo.insert(n, quo.clone());
    quo
}

// ---------------------------------------------------------------------------
// Shared per-p field context.

struct CycCtx {
    p: u32,
    /// Order of zeta: 4(p+1).
    order: u32,
    /// Degree of the cyclotomic polynomial, = phi(order).
    deg: usize,
    /// x^k reduced mod Phi_order, for k = 0..max(order, 2*deg-1).
    xpow: Vec<Vec<BigRational>>,
    /// q-brackets \[n\] for n = 0..=p+1, in the reduced basis.
    brackets: Vec<Vec<BigRational>>,
    /// Complex value of zeta.
    zeta_c: Complex64,
}

impl CycCtx {
    fn new(p: u32) -> Self {
        let order = 4 * (p + 1);
        let mut memo = HashMap::new();
        let phi = cyclotomic_poly(order, &mut memo);
        let deg = phi.len() - 1;
        let table = (order as usize).max(2 * deg);
        let mut xpow: Vec<Vec<BigRational>> = Vec::with_capacity(table);
        let mut cur = vec![BigRational::one()];
        for _ in 0..table {
            xpow.push(cur.clone());
            // multiply by x, reduce
            let mut next = vec![BigRational::zero()];
            next.extend(cur.iter().cloned());
            if next.len() > deg {
                let lead = next.pop().unwrap();
                for (k, c) in phi.iter().take(deg).enumerate() {
                    next[k] -= &lead * c;
                }
            }
            ptrim(&mut next);
            cur = next;
        }
        let mut ctx = CycCtx {
            p,
            order,
            deg,
            xpow,
            brackets: Vec::new(),
            zeta_c: Complex64::from_polar(1.0, std::f64::consts::PI / (2.0 * (p as f64 + 1.0))),
        };
        let mut brackets = Vec::with_capacity(p as usize + 2);
        for n in 0..=p + 1 {
            let mut acc: Vec<BigRational> = Vec::new();
            for j in 0..n {
                acc = ctx.cadd(&acc, &ctx.zeta_elem(4 * j as i64));
            }
            brackets.push(acc);
        }
        ctx.brackets = brackets;
        ctx
    }

    fn zeta_elem(&self, k: i64) -> Vec<BigRational> {
        let k = k.rem_euclid(self.order as i64) as usize;
        self.xpow[k].clone()
    }

    fn cadd(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = a.to_vec();
        if out.len() < b.len() {
            out.resize(b.len(), BigRational::zero());
        }
        for (i, c) in b.iter().enumerate() {
            out[i] += c;
        }
        ptrim(&mut out);
        out
    }

    fn cneg(&self, a: &[BigRational]) -> Vec<BigRational> {
        a.iter().map(|c| -c.clone()).collect()
    }

    fn cmul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let conv = pmul(a, b);
        let mut out: Vec<BigRational> = vec![BigRational::zero(); self.deg];
        for (k, c) in conv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, x) in self.xpow[k].iter().enumerate() {
                out[i] += c * x;
            }
        }
        ptrim(&mut out);
        out
    }

    fn cconj(&self, a: &[BigRational]) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let zk = self.zeta_elem(-(i as i64));
            let term: Vec<BigRational> = zk.iter().map(|x| c * x).collect();
            out = self.cadd(&out, &term);
        }
        out
    }

    fn cinv(&self, a: &[BigRational]) -> Option<Vec<BigRational>> {
        if a.is_empty() {
            return None;
        }
        let mut phi = vec![BigRational::zero(); self.deg + 1];
        phi[self.deg] = BigRational::one();
        // rebuild Phi from xpow relation: x^deg = -(stored reduction)
        // xpow[deg] holds x^deg reduced, so Phi = x^deg - xpow[deg].
        let red = &self.xpow[self.deg];
        for (i, c) in red.iter().enumerate() {
            phi[i] = -c.clone();
        }
        let (g, s) = pegcd(a, &phi);
        if g.len() != 1 {
            return None;
        }
        let ginv = g[0].recip();
        let mut out: Vec<BigRational> = s.iter().map(|c| c * &ginv).collect();
        // s may exceed deg; reduce
        let mut red_out: Vec<BigRational> = vec![BigRational::zero(); self.deg];
        for (k, c) in out.drain(..).enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, x) in self.xpow[k].iter().enumerate() {
                red_out[i] += &c * x;
            }
        }
        ptrim(&mut red_out);
        Some(red_out)
    }

    fn ceval(&self, a: &[BigRational]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            acc = acc * self.zeta_c + Complex64::new(rat_to_f64(c), 0.0);
        }
        acc
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

static CTX_CACHE: Lazy<Mutex<HashMap<u32, Arc<CycCtx>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn ctx_for(p: u32) -> Arc<CycCtx> {
    let mut cache = CTX_CACHE.lock().unwrap();
    cache.entry(p).or_insert_with(|| Arc::new(CycCtx::new(p))).clone()
}

// ---------------------------------------------------------------------------
// QScalar

/// Exact scalar: map from a radical mask to a cyclotomic coefficient.
///
/// Bit i of a mask means one factor of sqrt(\[i+2\]); the relation
/// sqrt(\[n\])^2 = \[n\] keeps every exponent at 0 or 1.
#[derive(Clone)]
pub struct QScalar {
    ctx: Arc<CycCtx>,
    terms: BTreeMap<u32, Vec<BigRational>>,
}

impl PartialEq for QScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p == other.ctx.p && self.terms == other.terms
    }
}
impl Eq for QScalar {}

fn mask_bit(n: u32) -> u32 {
    debug_assert!(n >= 2);
    1 << (n - 2)
}

impl QScalar {
    pub fn params(&self) -> DeformParams {
        DeformParams { p: self.ctx.p }
    }

    pub fn zero(params: DeformParams) -> Self {
        QScalar { ctx: params.ctx(), terms: BTreeMap::new() }
    }

    pub fn one(params: DeformParams) -> Self {
        Self::from_int(params, 1)
    }

    pub fn from_int(params: DeformParams, k: i64) -> Self {
        Self::from_ratio(params, k, 1)
    }

    pub fn from_ratio(params: DeformParams, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        Self::from_rational(params, r)
    }

    pub fn from_rational(params: DeformParams, r: BigRational) -> Self {
        let ctx = params.ctx();
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, vec![r]);
        }
        QScalar { ctx, terms }
    }

    /// zeta^k, zeta = exp(i*pi/(2(p+1))).
    pub fn zeta_pow(params: DeformParams, k: i64) -> Self {
        let ctx = params.ctx();
        let elem = ctx.zeta_elem(k);
        let mut terms = BTreeMap::new();
        if !elem.is_empty() {
            terms.insert(0, elem);
        }
        QScalar { ctx, terms }
    }

    /// q^k = zeta^(2k).
    pub fn q_pow(params: DeformParams, k: i64) -> Self {
        Self::zeta_pow(params, 2 * k)
    }

    /// The imaginary unit, zeta^(p+1).
    pub fn i(params: DeformParams) -> Self {
        Self::zeta_pow(params, params.p as i64 + 1)
    }

    /// q-bracket \[n\] = sum_{j<n} q^(2j).
    pub fn bracket(params: DeformParams, n: u32) -> Self {
        assert!(n <= params.p + 1, "bracket index out of range");
        let ctx = params.ctx();
        let elem = ctx.brackets[n as usize].clone();
        let mut terms = BTreeMap::new();
        if !elem.is_empty() {
            terms.insert(0, elem);
        }
        QScalar { ctx, terms }
    }

    /// Symmetric bracket \[\[n\]\] = sum_{j<n} q^(n-1-2j).
    pub fn qq_bracket(params: DeformParams, n: u32) -> Self {
        let mut acc = Self::zero(params);
        for j in 0..n as i64 {
            acc += &Self::q_pow(params, n as i64 - 1 - 2 * j);
        }
        acc
    }

    /// \[n\]! = \[n\]\[n-1\]...\[1\].
    pub fn bracket_factorial(params: DeformParams, n: u32) -> Self {
        let mut acc = Self::one(params);
        for k in 1..=n {
            acc *= &Self::bracket(params, k);
        }
        acc
    }

    /// sqrt(\[n\]) as a formal radical; sqrt(\[1\]) is 1.
    pub fn sqrt_bracket(params: DeformParams, n: u32) -> Self {
        assert!((1..=params.p).contains(&n), "radical index out of range");
        if n == 1 {
            return Self::one(params);
        }
        let ctx = params.ctx();
        let mut terms = BTreeMap::new();
        terms.insert(mask_bit(n), vec![BigRational::one()]);
        QScalar { ctx, terms }
    }

    /// sqrt(\[n\]!) = prod_k sqrt(\[k\]).
    pub fn sqrt_bracket_factorial(params: DeformParams, n: u32) -> Self {
        let mut acc = Self::one(params);
        for k in 2..=n {
            acc *= &Self::sqrt_bracket(params, k);
        }
        acc
    }

    /// sqrt(\[\[n\]\]) = zeta^(1-n) * sqrt(\[n\]); principal value under eval.
    pub fn sqrt_qq_bracket(params: DeformParams, n: u32) -> Self {
        &Self::zeta_pow(params, 1 - n as i64) * &Self::sqrt_bracket(params, n)
    }

    /// Build from radical powers with arbitrary exponents, reducing each
    /// sqrt(\[n\])^2 to \[n\].  This is the canonicalization entry point.
    pub fn from_radical_powers(params: DeformParams, coeff: QScalar, powers: &[(u32, u32)]) -> Self {
        let mut acc = coeff;
        for &(n, e) in powers {
            let half = e / 2;
            for _ in 0..half {
                acc *= &Self::bracket(params, n);
            }
            if e % 2 == 1 {
                acc *= &Self::sqrt_bracket(params, n);
            }
        }
        acc
    }

    /// Exact sqrt of a non-negative integer, when the field contains it.
    ///
    /// Uses zeta_8 for sqrt(2) and quadratic Gauss sums over odd primes.
    /// Always succeeds for m = p+1.
    pub fn sqrt_nat(params: DeformParams, m: u64) -> Option<Self> {
        if m == 0 {
            return Some(Self::zero(params));
        }
        let mut square_part = 1u64;
        let mut rest = m;
        let mut d = 2u64;
        let mut squarefree: Vec<u64> = Vec::new();
        while d * d <= rest {
            if rest.is_multiple_of(d * d) {
                rest /= d * d;
                square_part *= d;
                continue;
            }
            d += 1;
        }
        let mut x = rest;
        let mut f = 2u64;
        while f * f <= x {
            if x.is_multiple_of(f) {
                squarefree.push(f);
                while x.is_multiple_of(f) {
                    x /= f;
                }
            }
            f += 1;
        }
        if x > 1 {
            squarefree.push(x);
        }
        let order = 4 * (params.p as u64 + 1);
        let mut acc = Self::from_int(params, square_part as i64);
        for ell in squarefree {
            if ell == 2 {
                if !order.is_multiple_of(8) {
                    return None;
                }
                let k = (order / 8) as i64;
                // sqrt(2) = zeta_8 + zeta_8^-1
                acc *= &(&Self::zeta_pow(params, k) + &Self::zeta_pow(params, -k));
            } else {
                if !order.is_multiple_of(ell) {
                    return None;
                }
                let step = (order / ell) as i64;
                let mut g = Self::zero(params);
                for k in 0..ell {
                    let e = ((k * k) % ell) as i64;
                    g += &Self::zeta_pow(params, step * e);
                }
                if ell % 4 == 1 {
                    acc *= &g;
                } else {
                    // g = i*sqrt(ell); divide by i
                    acc *= &(&g * &Self::i(params).conj());
                }
            }
        }
        Some(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Complex conjugation as values: zeta -> zeta^-1 and
    /// sqrt(\[n\]) -> q^(1-n) sqrt(\[n\]), matching conj(principal sqrt(\[n\])).
    pub fn conj(&self) -> Self {
        let params = self.params();
        let mut out = Self::zero(params);
        for (&mask, coeff) in &self.terms {
            let mut c = QScalar {
                ctx: self.ctx.clone(),
                terms: {
                    let elem = self.ctx.cconj(coeff);
                    let mut t = BTreeMap::new();
                    if !elem.is_empty() {
                        t.insert(0, elem);
                    }
                    t
                },
            };
            let mut qshift = 0i64;
            for n in 2..=params.p {
                if mask & mask_bit(n) != 0 {
                    qshift += 1 - n as i64;
                }
            }
            c *= &Self::q_pow(params, qshift);
            if !c.is_zero() {
                let mut term = c;
                // re-attach the radical mask
                let mut shifted = BTreeMap::new();
                for (m0, cc) in term.terms {
                    debug_assert_eq!(m0, 0);
                    shifted.insert(mask, cc);
                }
                term = QScalar { ctx: self.ctx.clone(), terms: shifted };
                out += &term;
            }
        }
        out
    }

    /// Multiplicative inverse; None for 0 (or a zero divisor, which cannot
    /// arise from the constructors here).
    pub fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let params = self.params();
        // find a radical present in some term
        let all_mask = self.terms.keys().fold(0u32, |a, m| a | m);
        if all_mask == 0 {
            let coeff = self.terms.get(&0).unwrap();
            let inv = self.ctx.cinv(coeff)?;
            let mut terms = BTreeMap::new();
            if !inv.is_empty() {
                terms.insert(0, inv);
            }
            return Some(QScalar { ctx: self.ctx.clone(), terms });
        }
        let bit = 1u32 << all_mask.trailing_zeros();
        let n = all_mask.trailing_zeros() + 2;
        let mut a = Self::zero(params);
        let mut b = Self::zero(params);
        for (&mask, coeff) in &self.terms {
            let t = QScalar {
                ctx: self.ctx.clone(),
                terms: {
                    let mut m = BTreeMap::new();
                    m.insert(mask & !bit, coeff.clone());
                    m
                },
            };
            if mask & bit != 0 {
                b += &t;
            } else {
                a += &t;
            }
        }
        // x = a + b*sqrt([n]);  x * (a - b*sqrt([n])) = a^2 - b^2 [n]
        let radical = Self::sqrt_bracket(params, n);
        let disc = &(&a * &a) - &(&(&b * &b) * &Self::bracket(params, n));
        let disc_inv = disc.try_inv()?;
        let flip = &a - &(&b * &radical);
        Some(&flip * &disc_inv)
    }

    pub fn inv(&self) -> Self {
        self.try_inv().expect("scalar not invertible")
    }

    /// Numeric value with principal square roots for the radicals.
    pub fn eval(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&mask, coeff) in &self.terms {
            let mut v = self.ctx.ceval(coeff);
            for n in 2..=self.ctx.p {
                if mask & mask_bit(n) != 0 {
                    v *= self.ctx.ceval(&self.ctx.brackets[n as usize]).sqrt();
                }
            }
            acc += v;
        }
        acc
    }

    fn insert_term(&mut self, mask: u32, elem: Vec<BigRational>) {
        if elem.is_empty() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(elem);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = self.ctx.cadd(e.get(), &elem);
                if merged.is_empty() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.ctx.p, other.ctx.p, "mixed deformation parameters");
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (&mask, elem) in &rhs.terms {
            out.insert_term(mask, elem.clone());
        }
        out
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self + &(-rhs)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        let mut out = QScalar { ctx: self.ctx.clone(), terms: BTreeMap::new() };
        for (&mask, elem) in &self.terms {
            out.terms.insert(mask, self.ctx.cneg(elem));
        }
        out
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        self.assert_compatible(rhs);
        let params = self.params();
        let mut out = QScalar::zero(params);
        for (&m1, c1) in &self.terms {
            for (&m2, c2) in &rhs.terms {
                let mut elem = self.ctx.cmul(c1, c2);
                let common = m1 & m2;
                if common != 0 {
                    for n in 2..=self.ctx.p {
                        if common & mask_bit(n) != 0 {
                            elem = self.ctx.cmul(&elem, &self.ctx.brackets[n as usize]);
                        }
                    }
                }
                out.insert_term(m1 ^ m2, elem);
            }
        }
        out
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        self.assert_compatible(rhs);
        for (&mask, elem) in &rhs.terms {
            self.insert_term(mask, elem.clone());
        }
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        let neg = -rhs;
        *self += &neg;
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, rhs: &QScalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&mask, elem) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "(")?;
            let mut inner_first = true;
            for (i, c) in elem.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !inner_first {
                    write!(f, " + ")?;
                }
                inner_first = false;
                if i == 0 {
                    write!(f, "{c}")?;
                } else if c.is_one() {
                    write!(f, "z^{i}")?;
                } else {
                    write!(f, "{c}*z^{i}")?;
                }
            }
            if inner_first {
                write!(f, "0")?;
            }
            write!(f, ")")?;
            for n in 2..=self.ctx.p {
                if mask & mask_bit(n) != 0 {
                    write!(f, "*r{n}")?;
                }
            }
        }
        Ok(())
    }
}

impl serde::Serialize for QScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v = self.eval();
        let mut s = serializer.serialize_struct("QScalar", 3)?;
        s.serialize_field("re", &v.re)?;
        s.serialize_field("im", &v.im)?;
        s.serialize_field("exact", &format!("{self}"))?;
        s.end()
    }
}

// ---------------------------------------------------------------------------
// Spec-level operation entry points.

/// \[n\] as a scalar (geometric-sum form, no division).
pub fn q_bracket(n: u32, params: DeformParams) -> QScalar {
    let mut acc = QScalar::zero(params);
    for j in 0..n as i64 {
        acc += &QScalar::q_pow(params, 2 * j);
    }
    acc
}

/// \[\[n\]\] as a scalar.
pub fn qq_bracket(n: u32, params: DeformParams) -> QScalar {
    QScalar::qq_bracket(params, n)
}

/// Canonical form of a scalar.  Construction keeps values canonical, so this
/// is the identity on well-formed inputs; exposed for raw radical powers.
pub fn radical_reduce(s: &QScalar) -> QScalar {
    s.clone()
}

/// Numeric evaluation with principal roots.
pub fn eval_complex(s: &QScalar) -> Complex64 {
    s.eval()
}
