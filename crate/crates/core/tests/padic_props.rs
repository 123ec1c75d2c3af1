use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use wqbern::padicint::{embed_rational, padic_log, rational_valuation, PadicNumber};

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7])
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-2000i64..=2000, 1i64..=500)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn embedding_valuation(r in nonzero_rational(), p in prime()) {
        let x = embed_rational(&r, p, 10).unwrap();
        prop_assert_eq!(x.valuation(), rational_valuation(&r, p));
        prop_assert_eq!(x.precision(), 10);
    }

    #[test]
    fn multiplication_adds_valuations(a in nonzero_rational(), b in nonzero_rational(), p in prime()) {
        let (x, y) = (embed_rational(&a, p, 8).unwrap(), embed_rational(&b, p, 8).unwrap());
        let prod = x.try_mul(&y).unwrap();
        prop_assert_eq!(prod.valuation().unwrap(), x.valuation().unwrap() + y.valuation().unwrap());
        // and agrees with the image of the exact product
        let exact = embed_rational(&(&a * &b), p, 8).unwrap();
        prop_assert!(prod.agreement(&exact).unwrap().at_least(prod.abs_precision().unwrap()));
    }

    #[test]
    fn ultrametric_addition(a in nonzero_rational(), b in nonzero_rational(), p in prime()) {
        let (x, y) = (embed_rational(&a, p, 8).unwrap(), embed_rational(&b, p, 8).unwrap());
        let (va, vb) = (x.valuation().unwrap(), y.valuation().unwrap());
        let sum = x.try_add(&y).unwrap();
        match sum.valuation() {
            Some(v) => {
                prop_assert!(v >= va.min(vb));
                if va != vb {
                    prop_assert_eq!(v, va.min(vb));
                }
            }
            None => prop_assert!(sum.abs_precision().unwrap() >= va.min(vb)),
        }
        if !sum.is_zero() {
            let exact = embed_rational(&(&a + &b), p, 12).unwrap();
            prop_assert!(sum.agreement(&exact).unwrap().at_least(sum.abs_precision().unwrap()));
        }
    }

    #[test]
    fn division_inverts_multiplication(a in nonzero_rational(), b in nonzero_rational(), p in prime()) {
        let (x, y) = (embed_rational(&a, p, 8).unwrap(), embed_rational(&b, p, 8).unwrap());
        let back = x.try_mul(&y).unwrap().try_div(&y).unwrap();
        prop_assert!(back.agreement(&x).unwrap().at_least(back.abs_precision().unwrap()));
    }

    #[test]
    fn unit_is_coprime(r in nonzero_rational(), p in prime()) {
        let x = embed_rational(&r, p, 6).unwrap();
        let u = x.unit().unwrap();
        prop_assert!(u % BigInt::from(p) != BigInt::from(0));
    }

    #[test]
    fn log_functional_equation(k in 1i64..=20, p in prime(), d in 2u32..=3) {
        let q = BigRational::from_integer((1 + k * p as i64).into());
        let prec = 10;
        let lq = padic_log(&embed_rational(&q, p, 16).unwrap(), prec).unwrap();
        let lqd = padic_log(&embed_rational(&num_traits::pow(q, d as usize), p, 16).unwrap(), prec).unwrap();
        let scaled = PadicNumber::from_integer(&BigInt::from(d), p, 16).unwrap().try_mul(&lq).unwrap();
        let target = lq.valuation().unwrap() + prec as i64 - 1;
        prop_assert!(lqd.agreement(&scaled).unwrap().at_least(target));
    }
}
