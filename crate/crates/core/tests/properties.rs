use num_bigint::BigInt;
use proptest::prelude::*;

use ci_slope_core::chow_ring::{grr_pushforward_degree, ChowClass, RingSpec};
use ci_slope_core::exact_arith::{binom_poly, Rational};
use ci_slope_core::fibration_invariants::{invariants_closed, lambda, FibrationConfig};
use ci_slope_core::oracles::top_product_bruteforce;
use ci_slope_core::singularity_calc::{check_theorem, margin_identity, SingularityInput};

fn big() -> impl Strategy<Value = BigInt> {
    prop::collection::vec(any::<u32>(), 1..4).prop_flat_map(|digits| {
        any::<bool>().prop_map(move |neg| {
            let x = BigInt::from_slice(num_bigint::Sign::Plus, &digits);
            if neg {
                -x
            } else {
                x
            }
        })
    })
}

fn nonzero_big() -> impl Strategy<Value = BigInt> {
    big().prop_filter("nonzero", |x| *x != BigInt::from(0))
}

fn rational() -> impl Strategy<Value = Rational> {
    (big(), nonzero_big()).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

/// A random class in a fixed ring with small rational coefficients.
fn class(spec: RingSpec) -> impl Strategy<Value = ChowClass> {
    let top = spec.top_degree();
    prop::collection::vec((-5i64..=5, -5i64..=5, 1i64..=3), top + 1).prop_map(move |terms| {
        terms
            .into_iter()
            .enumerate()
            .fold(ChowClass::zero(spec), |acc, (k, (t, g, den))| {
                let g = if k == 0 { 0 } else { g };
                let m =
                    ChowClass::monomial(spec, k, Rational::frac(t, den), Rational::frac(g, den))
                        .unwrap();
                &acc + &m
            })
    })
}

fn spec() -> impl Strategy<Value = RingSpec> {
    (2u32..=5, -3i64..=3).prop_map(|(n, e)| RingSpec::new(n, e).unwrap())
}

proptest! {
    #[test]
    fn rational_round_trip(a in rational(), c in rational()) {
        prop_assert_eq!((&a + &c) - &c, a.clone());
        prop_assert_eq!((&a * &c).checked_div(&c).ok(), if c.is_zero() { None } else { Some(a) });
    }

    #[test]
    fn rational_string_round_trip(a in rational()) {
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn pascal_rule(x in -40i64..40, k in 1u32..9) {
        prop_assert_eq!(binom_poly(x, k), binom_poly(x - 1, k) + binom_poly(x - 1, k - 1));
    }

    #[test]
    fn ring_axioms((x, y, z) in spec().prop_flat_map(|s| (class(s), class(s), class(s)))) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &ChowClass::one(x.spec()), x.clone());
    }

    #[test]
    fn top_product_matches_expansion(
        (s, factors) in spec().prop_flat_map(|s| {
            (Just(s), prop::collection::vec((-4i64..=4, -4i64..=4), s.top_degree()))
        })
    ) {
        let product = factors
            .iter()
            .fold(ChowClass::one(s), |acc, &(x, y)| &acc * &ChowClass::divisor(s, x, y));
        prop_assert_eq!(product.evaluate_top(), top_product_bruteforce(s, &factors).unwrap());
    }

    #[test]
    fn grr_is_linear(
        n in 2u32..=4,
        d in 2i64..=4,
        e in 1i64..=8,
        deg in -3i64..=3,
        slot in 0usize..3,
        a in prop::collection::vec(-3i64..=3, 3),
    ) {
        let a = &a[..n as usize - 1];
        let slot = slot % a.len();
        let at = |deg: i64, shift: i64| {
            let mut a = a.to_vec();
            a[slot] += shift;
            grr_pushforward_degree(n, d, e, deg, &a).unwrap()
        };
        // three collinear points in each direction
        let two = Rational::from(2);
        prop_assert_eq!(at(deg + 1, 0) * &two, at(deg, 0) + at(deg + 2, 0));
        prop_assert_eq!(at(deg, 1) * &two, at(deg, 0) + at(deg, 2));
        prop_assert!(grr_pushforward_degree(n, d, e, 0, &vec![0; a.len()]).unwrap().is_zero());
    }

    #[test]
    fn chi_is_integral(
        n in 2u32..=6,
        d in 2i64..=6,
        deg_e in -3i64..=3,
        b in 0i64..=3,
        a in prop::collection::vec(-3i64..=3, 5),
    ) {
        let cfg = FibrationConfig::new(n, d, b, deg_e, a[..n as usize - 1].to_vec()).unwrap();
        let inv = invariants_closed(&cfg).unwrap();
        prop_assert!(inv.chi.is_integer());
        prop_assert!(inv.k2.is_integer());
        if let Ok(l) = lambda(n, d) {
            prop_assert_eq!(inv.k2, l * inv.chi);
        }
    }

    #[test]
    fn signature_identities(
        emb_dim in 3i64..=12,
        pg in 0i64..=50,
        k2 in -60i64..=0,
        exc in 1i64..=30,
        mu0_share in 0.0f64..=1.0,
    ) {
        let mu0 = ((2 * pg) as f64 * mu0_share).floor() as i64;
        let input = SingularityInput::new(emb_dim, pg, k2, exc, mu0).unwrap();
        let Ok(report) = check_theorem(&input) else {
            // mu_minus < 0: not the invariants of an actual smoothing
            return Ok(());
        };
        let margin = Rational::from(k2) + Rational::frac(24 * (emb_dim - 2) * pg, 3 * emb_dim - 5);
        prop_assert_eq!(&report.bound - &Rational::from(report.decomposition.sigma), margin.clone());
        prop_assert_eq!(margin_identity(&input).unwrap(), margin);
        let dec = report.decomposition;
        prop_assert_eq!(dec.sigma, 4 * pg - mu0 - dec.mu);
        prop_assert_eq!(report.satisfied, report.equivalent_form.satisfied);
        prop_assert_eq!(report.equality, report.equivalent_form.equality);
    }
}
