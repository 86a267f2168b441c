//! Exact arithmetic in Q(i, sqrt(2), sqrt(3), ...): Gaussian-rational
//! combinations of square roots of square-free integers.
//!
//! The truncated boson ladder has entries sqrt(n); this ring keeps the
//! supersymmetric-sector identities exact instead of floating.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Complex, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

pub type Complex64 = Complex<f64>;

/// Gaussian rational a + b*i.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }
    pub fn from_int(k: i64) -> Self {
        GaussRat { re: BigRational::from(BigInt::from(k)), im: BigRational::zero() }
    }
    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat { re: BigRational::new(BigInt::from(num), BigInt::from(den)), im: BigRational::zero() }
    }
    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::from(BigInt::from(1)) }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg(&self) -> Self {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }
    fn inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }
    fn eval(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

fn squarefree_split(m: u64) -> (u64, u64) {
    // m = s^2 * r with r square-free; returns (s, r)
    let mut s = 1u64;
    let mut r = m;
    let mut d = 2u64;
    while d * d <= r {
        while r.is_multiple_of(d * d) {
            r /= d * d;
            s *= d;
        }
        d += 1;
    }
    (s, r)
}

/// Element of Q(i)[sqrt(r) : r square-free]: map from square-free radicand
/// to Gaussian-rational coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadGauss {
    terms: BTreeMap<u64, GaussRat>,
}

impl QuadGauss {
    pub fn zero() -> Self {
        QuadGauss { terms: BTreeMap::new() }
    }
    pub fn one() -> Self {
        Self::from_int(1)
    }
    pub fn from_int(k: i64) -> Self {
        Self::from_gauss(GaussRat::from_int(k))
    }
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_gauss(GaussRat::from_ratio(num, den))
    }
    pub fn i() -> Self {
        Self::from_gauss(GaussRat::i())
    }
    pub fn from_gauss(g: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(1, g);
        }
        QuadGauss { terms }
    }
    /// Exact sqrt(m) for a natural number m.
    pub fn sqrt_nat(m: u64) -> Self {
        if m == 0 {
            return Self::zero();
        }
        let (s, r) = squarefree_split(m);
        let mut terms = BTreeMap::new();
        terms.insert(r, GaussRat::from_int(s as i64));
        QuadGauss { terms }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn conj(&self) -> Self {
        let mut out = QuadGauss::zero();
        for (&r, g) in &self.terms {
            out.insert(r, g.conj());
        }
        out
    }
    pub fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // rationalize one radical at a time
        if let Some((&r, _)) = self.terms.iter().find(|(r, _)| **r != 1) {
            let mut a = QuadGauss::zero();
            let mut b = QuadGauss::zero();
            for (&rr, g) in &self.terms {
                if rr == r {
                    b.insert(1, g.clone());
                } else {
                    a.insert(rr, g.clone());
                }
            }
            let root = Self::sqrt_nat(r);
            let disc = &(&a * &a) - &(&(&b * &b) * &Self::from_int(r as i64));
            let disc_inv = disc.try_inv()?;
            let flip = &a - &(&b * &root);
            Some(&flip * &disc_inv)
        } else {
            let g = self.terms.get(&1).unwrap();
            Some(Self::from_gauss(g.inv()?))
        }
    }
    pub fn eval(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&r, g) in &self.terms {
            acc += g.eval() * (r as f64).sqrt();
        }
        acc
    }
    fn insert(&mut self, r: u64, g: GaussRat) {
        if g.is_zero() {
            return;
        }
        match self.terms.entry(r) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(g);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get().add(&g);
                if merged.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }
}

impl Add for &QuadGauss {
    type Output = QuadGauss;
    fn add(self, rhs: &QuadGauss) -> QuadGauss {
        let mut out = self.clone();
        for (&r, g) in &rhs.terms {
            out.insert(r, g.clone());
        }
        out
    }
}

impl Sub for &QuadGauss {
    type Output = QuadGauss;
    fn sub(self, rhs: &QuadGauss) -> QuadGauss {
        self + &(-rhs)
    }
}

impl Neg for &QuadGauss {
    type Output = QuadGauss;
    fn neg(self) -> QuadGauss {
        let mut out = QuadGauss::zero();
        for (&r, g) in &self.terms {
            out.terms.insert(r, g.neg());
        }
        out
    }
}

impl Mul for &QuadGauss {
    type Output = QuadGauss;
    fn mul(self, rhs: &QuadGauss) -> QuadGauss {
        let mut out = QuadGauss::zero();
        for (&r1, g1) in &self.terms {
            for (&r2, g2) in &rhs.terms {
                let prod = r1 * r2;
                let (s, r) = squarefree_split(prod);
                let coeff = g1.mul(g2).mul(&GaussRat::from_int(s as i64));
                out.insert(r, coeff);
            }
        }
        out
    }
}

impl AddAssign<&QuadGauss> for QuadGauss {
    fn add_assign(&mut self, rhs: &QuadGauss) {
        for (&r, g) in &rhs.terms {
            self.insert(r, g.clone());
        }
    }
}

impl MulAssign<&QuadGauss> for QuadGauss {
    fn mul_assign(&mut self, rhs: &QuadGauss) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for QuadGauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&r, g) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({} + {}i)", g.re, g.im)?;
            if r != 1 {
                write!(f, "*sqrt({r})")?;
            }
        }
        Ok(())
    }
}
