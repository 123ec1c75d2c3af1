use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use wqbern::exactq::{poly_gcd, PolyQ, RatFuncQ};

fn poly(max_deg: usize) -> impl Strategy<Value = PolyQ> {
    prop::collection::vec(-6i64..=6, 0..=max_deg + 1).prop_map(|c| PolyQ::from_ints(&c))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = PolyQ> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFuncQ> {
    (poly(4), nonzero_poly(4)).prop_map(|(n, d)| RatFuncQ::new(&n, &d).unwrap())
}

fn nonzero_ratfunc() -> impl Strategy<Value = RatFuncQ> {
    ratfunc().prop_filter("nonzero", |r| !r.is_zero())
}

/// Monic gcd by the Euclidean algorithm over Q.
fn euclid_gcd(a: &PolyQ, b: &PolyQ) -> PolyQ {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b).unwrap();
        a = b;
        b = r;
    }
    a.monic()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gcd_matches_euclid(a in poly(6), b in poly(6), c in nonzero_poly(3)) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let (a, b) = (&a * &c, &b * &c);
        prop_assert_eq!(poly_gcd(&a, &b).unwrap(), euclid_gcd(&a, &b));
    }

    #[test]
    fn normalize_idempotent(n in poly(5), d in nonzero_poly(5)) {
        let r = RatFuncQ::new(&n, &d).unwrap();
        let again = RatFuncQ::new(&r.numerator(), &r.denominator()).unwrap();
        prop_assert_eq!(&again, &r);
        prop_assert!(r.denominator().leading_coeff().unwrap().is_one());
        let g = poly_gcd(&r.numerator(), &r.denominator()).unwrap();
        prop_assert!(g.is_one());
        // cross-multiplication equality with the input fraction
        prop_assert_eq!(&r.numerator() * &d, &n * &r.denominator());
    }

    #[test]
    fn field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverses(a in nonzero_ratfunc()) {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert_eq!(a.pow(-2).unwrap(), a.pow(2).unwrap().inv().unwrap());
    }

    #[test]
    fn subst_composition(a in ratfunc(), d in prop::sample::select(vec![-3i64, -2, -1, 2, 3]), e in prop::sample::select(vec![-2i64, -1, 2])) {
        let lhs = a.subst_power(d).unwrap().subst_power(e).unwrap();
        prop_assert_eq!(lhs, a.subst_power(d * e).unwrap());
    }

    #[test]
    fn subst_is_ring_map(a in ratfunc(), b in ratfunc(), d in prop::sample::select(vec![-2i64, -1, 2, 3])) {
        prop_assert_eq!((&a * &b).subst_power(d).unwrap(), &a.subst_power(d).unwrap() * &b.subst_power(d).unwrap());
        prop_assert_eq!((&a + &b).subst_power(d).unwrap(), &a.subst_power(d).unwrap() + &b.subst_power(d).unwrap());
    }

    #[test]
    fn eval_homomorphism(a in ratfunc(), b in ratfunc(), num in -7i64..=7, den in 1i64..=5) {
        let q0 = BigRational::new(num.into(), den.into());
        if let (Ok(x), Ok(y)) = (a.eval_at(&q0), b.eval_at(&q0)) {
            prop_assert_eq!((&a * &b).eval_at(&q0).unwrap(), &x * &y);
            prop_assert_eq!((&a + &b).eval_at(&q0).unwrap(), &x + &y);
        }
    }

    #[test]
    fn string_round_trip(a in ratfunc()) {
        let s = a.to_string();
        let back: RatFuncQ = s.parse().unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), s);
    }

    #[test]
    fn zero_numerator_canonical(d in nonzero_poly(5)) {
        let r = RatFuncQ::new(&PolyQ::zero(), &d).unwrap();
        prop_assert!(r.is_zero());
        prop_assert_eq!(r.denominator(), PolyQ::one());
        prop_assert!(r.eval_at(&BigRational::zero()).unwrap().is_zero());
    }
}

#[test]
fn large_degree_gcd() {
    // (1 - q^k) share cyclotomic factors; compare against the Euclidean oracle
    let one_minus = |k: usize| &PolyQ::one() - &PolyQ::monomial(k);
    let a = &one_minus(36) * &one_minus(20);
    let b = &one_minus(30) * &one_minus(45);
    assert_eq!(poly_gcd(&a, &b).unwrap(), euclid_gcd(&a, &b));
}
