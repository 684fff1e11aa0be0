use std::collections::HashMap;

use cremona::symfield::{gcd, FieldError, Monomial, Poly, Rf, Substitution, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const NVARS: usize = 4;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::array::uniform4(0u32..3), -4i64..=4), 1..5).prop_map(|terms| {
        Poly::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| (Monomial::from_exponents(&e), BigInt::from(c))),
        )
    })
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn rf() -> impl Strategy<Value = Rf> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| Rf::new(n, d).unwrap())
}

fn point() -> impl Strategy<Value = HashMap<Var, BigRational>> {
    prop::collection::vec((-20i64..=20, 1i64..=7), NVARS).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (n, d))| (Var(i as u32), BigRational::new(n.into(), d.into())))
            .collect()
    })
}

fn eval(x: &Rf, p: &HashMap<Var, BigRational>) -> Option<BigRational> {
    match x.eval_rational(p) {
        Ok(v) => Some(v),
        Err(FieldError::Pole) | Err(FieldError::DivisionByZero) | Err(FieldError::ZeroDenominator) => None,
        Err(e) => panic!("unexpected {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in rf(), b in rf(), c in rf()) {
        prop_assert!((&(&a + &b) + &c).rf_eq(&(&a + &(&b + &c))));
        prop_assert!((&a * &(&b + &c)).rf_eq(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a * &b).rf_eq(&(&b * &a)));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).rf_eq(&Rf::one()));
        }
    }

    #[test]
    fn substitution_is_a_homomorphism(a in rf(), b in rf(), x in rf(), y in rf()) {
        let s = Substitution::new().with(Var(0), x).with(Var(2), y);
        let sa = a.substitute(&s);
        let sb = b.substitute(&s);
        if let (Ok(sa), Ok(sb)) = (sa, sb) {
            if let Ok(sab) = (&a * &b).substitute(&s) {
                prop_assert!(sab.rf_eq(&(&sa * &sb)));
            }
            if let Ok(sab) = (&a + &b).substitute(&s) {
                prop_assert!(sab.rf_eq(&(&sa + &sb)));
            }
        }
    }

    #[test]
    fn field_equality_agrees_with_evaluation(a in rf(), b in rf(), p in point()) {
        let c = &(&a * &b) + &a;
        let d = &a * &(&b + &Rf::one());
        prop_assert!(c.rf_eq(&d));
        if let (Some(x), Some(y), Some(z)) = (eval(&a, &p), eval(&b, &p), eval(&c, &p)) {
            prop_assert_eq!(z, &x * &y + &x);
        }
        // Unequal values are caught by some evaluation.
        let e = &a + &Rf::one();
        prop_assert!(!e.rf_eq(&a));
    }

    #[test]
    fn normal_form_is_idempotent(a in rf()) {
        let r = a.renormalized();
        prop_assert_eq!(r.numer(), a.numer());
        prop_assert_eq!(r.denom(), a.denom());
        let red = a.reduced();
        let twice = red.reduced();
        prop_assert_eq!(twice.numer(), red.numer());
        prop_assert_eq!(twice.denom(), red.denom());
        prop_assert!(red.rf_eq(&a));
        prop_assert!(gcd(red.numer(), red.denom()).is_constant());
    }

    #[test]
    fn gcd_divides_and_contains_common_factor(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let x = &a * &c;
        let y = &b * &c;
        let g = gcd(&x, &y);
        prop_assert!(x.div_exact(&g).is_some());
        prop_assert!(y.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c.primitive()).is_some());
        let cx = x.div_exact(&g).unwrap();
        let cy = y.div_exact(&g).unwrap();
        prop_assert!(gcd(&cx, &cy).is_constant());
    }

    #[test]
    fn product_of_powers_matches_naive_product(a in rf(), b in rf(), ea in -3i64..=3, eb in -3i64..=3) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let fast = Rf::product_of_powers(&[(&a, ea), (&b, eb), (&a, 1)]).unwrap();
        let slow = &(&a.pow(ea).unwrap() * &b.pow(eb).unwrap()) * &a;
        prop_assert!(fast.rf_eq(&slow));
        prop_assert!(gcd(fast.numer(), fast.denom()).is_constant());
    }
}

#[test]
fn product_of_powers_edge_cases() {
    let x = Rf::var(Var(0));
    assert!(Rf::product_of_powers(&[]).unwrap().is_one());
    assert!(Rf::product_of_powers(&[(&Rf::zero(), 2)]).unwrap().is_zero());
    assert_eq!(
        Rf::product_of_powers(&[(&Rf::zero(), -1)]).unwrap_err(),
        FieldError::DivisionByZero
    );
    // (x^2 - 1) / (x - 1)^2 * (x - 1) = x + 1
    let one = Rf::one();
    let num = &(&x * &x) - &one;
    let lin = &x - &one;
    let v = Rf::product_of_powers(&[(&num, 1), (&lin, -2), (&lin, 1)]).unwrap();
    assert!(v.is_polynomial());
    assert!(v.rf_eq(&(&x + &one)));
    let half = Rf::rational(&BigRational::new(1.into(), 2.into()));
    let v = Rf::product_of_powers(&[(&half, 3), (&x, -1)]).unwrap();
    assert!(v.rf_eq(&(&Rf::rational(&BigRational::new(1.into(), 8.into())) / &x)));
}
