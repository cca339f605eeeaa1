use num_bigint::BigInt;
use proptest::prelude::*;

use ci_slope_core::chow_ring::{grr_pushforward_degree, koszul_ch, ChowClass, RingSpec};
use ci_slope_core::exact_arith::{binom_poly, Rational};
use ci_slope_core::fibration_invariants::{eprime, uvr, FibrationConfig};
use ci_slope_core::oracles::{deg_sym_splitting, koszul_ch_bruteforce, pushforward_degree_rr};

#[test]
fn sym_degree_matches_binomial() {
    for m in 0..=6u32 {
        for rank in 1..=5usize {
            for deg_e in -3..=3i64 {
                let expected = binom_poly(m as i64 + rank as i64 - 1, rank as u32) * deg_e;
                assert_eq!(
                    BigInt::from(deg_sym_splitting(m, rank, deg_e)),
                    expected,
                    "m={m} rank={rank} e={deg_e}"
                );
            }
        }
    }
}

#[test]
fn riemann_roch_matches_grr_and_uv() {
    for n in 2..=3u32 {
        for d in 2..=4i64 {
            let ep = eprime(n, d);
            if ep <= 0 {
                continue;
            }
            for m in 1..=3i64 {
                let e = m * ep;
                if e < (n as i64 - 1) * d {
                    continue;
                }
                let uv = uvr(n, d, m).unwrap();
                for b in 0..=2 {
                    for deg_e in -2..=3 {
                        for a0 in -2..=2 {
                            let mut a = vec![0; n as usize - 1];
                            a[0] = a0;
                            let cfg = FibrationConfig::new(n, d, b, deg_e, a.clone()).unwrap();
                            let rr = pushforward_degree_rr(&cfg, e).unwrap();
                            let grr = grr_pushforward_degree(n, d, e, deg_e, &a).unwrap();
                            let closed =
                                &uv.u * &Rational::from(deg_e) + &uv.v * &Rational::from(a0);
                            assert_eq!(rr, grr, "{cfg:?} e={e}");
                            assert_eq!(rr, closed, "{cfg:?} e={e}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn riemann_roch_vanishes_on_trivial_data() {
    let cfg = FibrationConfig::new(3, 3, 1, 0, vec![0, 0]).unwrap();
    assert!(pushforward_degree_rr(&cfg, 8).unwrap().is_zero());
}

proptest! {
    #[test]
    fn koszul_matches_bruteforce(
        n in 2u32..=4,
        deg_e in -3i64..=3,
        roots in prop::collection::vec((-4i64..=4, -4i64..=4), 1..5),
    ) {
        let spec = RingSpec::new(n, deg_e).unwrap();
        let rhos: Vec<ChowClass> = roots.iter().map(|&(x, y)| ChowClass::divisor(spec, x, y)).collect();
        prop_assert_eq!(koszul_ch(&rhos).unwrap(), koszul_ch_bruteforce(&rhos).unwrap());
    }
}
