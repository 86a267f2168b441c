//! Property tests for the scalar ring and the para-Grassmann engine.

use pgq_core::pgalg::{PGPoly, PGVar};
use pgq_core::qscalar::{DeformParams, QScalar};
use proptest::prelude::*;

/// A small random scalar: sum of up to three atoms
/// (rational) * q^k * optional bracket radical.
fn scalar_strategy(p: u32) -> impl Strategy<Value = QScalar> {
    let atom = (
        -3i64..=3,
        1i64..=3,
        0i64..(2 * (p as i64 + 1)),
        prop::option::of(2u32..=p.max(2)),
    );
    prop::collection::vec(atom, 1..=3).prop_map(move |atoms| {
        let params = DeformParams::new(p);
        let mut acc = QScalar::zero(params);
        for (num, den, qexp, radical) in atoms {
            let mut term = &QScalar::from_ratio(params, num, den) * &QScalar::q_pow(params, qexp);
            if let Some(n) = radical {
                if n <= p {
                    term = &term * &QScalar::sqrt_bracket(params, n);
                }
            }
            acc += &term;
        }
        acc
    })
}

/// A small random polynomial over {theta_0, thetabar_0, theta_1}.
fn poly_strategy(p: u32) -> impl Strategy<Value = PGPoly> {
    let term = (
        scalar_strategy(p),
        0u8..=(p.min(2) as u8),
        0u8..=(p.min(2) as u8),
        0u8..=1,
    );
    prop::collection::vec(term, 1..=3).prop_map(move |terms| {
        let params = DeformParams::new(p);
        let mut acc = PGPoly::zero(params);
        for (c, e0, e0b, e1) in terms {
            let mut poly = PGPoly::scalar(c);
            for _ in 0..e0 {
                poly = poly.mul(&PGPoly::var(params, PGVar::theta(0)));
            }
            for _ in 0..e0b {
                poly = poly.mul(&PGPoly::var(params, PGVar::theta_bar(0)));
            }
            for _ in 0..e1 {
                poly = poly.mul(&PGPoly::var(params, PGVar::theta(1)));
            }
            acc = acc.add(&poly);
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_ring_axioms(
        a in scalar_strategy(3),
        b in scalar_strategy(3),
        c in scalar_strategy(3),
    ) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn scalar_eval_is_ring_hom(
        a in scalar_strategy(4),
        b in scalar_strategy(4),
    ) {
        let sum = (&a + &b).eval();
        prop_assert!((sum - (a.eval() + b.eval())).norm() <= 1e-12);
        let prod = (&a * &b).eval();
        prop_assert!((prod - (a.eval() * b.eval())).norm() <= 1e-12);
        let conj = a.conj().eval();
        prop_assert!((conj - a.eval().conj()).norm() <= 1e-12);
    }

    #[test]
    fn scalar_inverse_when_nonzero(a in scalar_strategy(3)) {
        if let Some(inv) = a.try_inv() {
            let params = a.params();
            prop_assert_eq!(&a * &inv, QScalar::one(params));
        } else {
            prop_assert!(a.is_zero());
        }
    }
}

macro_rules! poly_props {
    ($name:ident, $p:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn $name(
                a in poly_strategy($p),
                b in poly_strategy($p),
                c in poly_strategy($p),
            ) {
                // associativity under the exchange rules
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                // distributivity
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                // conjugation is an involution
                prop_assert_eq!(a.conjugate().conjugate(), a.clone());
                // order-reversal is an antiautomorphism only where the
                // exchange phase is real (ordinary Grassmann case)
                if $p == 1 {
                    prop_assert_eq!(a.mul(&b).conjugate(), b.conjugate().mul(&a.conjugate()));
                }
                // Berezin linearity
                let v = PGVar::theta(0);
                prop_assert_eq!(
                    a.add(&b).berezin(v),
                    a.berezin(v).add(&b.berezin(v))
                );
            }
        }
    };
}

poly_props!(poly_props_p1, 1);
poly_props!(poly_props_p2, 2);
poly_props!(poly_props_p3, 3);
poly_props!(poly_props_p5, 5);

#[test]
fn nilpotency_for_all_small_p() {
    for p in 1..=5 {
        let params = DeformParams::new(p);
        for var in [PGVar::theta(0), PGVar::theta_bar(0), PGVar::theta(3)] {
            let v = PGPoly::var(params, var);
            let mut acc = PGPoly::one(params);
            for _ in 0..=p {
                acc = acc.mul(&v);
            }
            assert!(acc.is_zero(), "p={p} var={var:?}");
        }
    }
}
