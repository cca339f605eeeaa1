//! Invariants of surfaces `X = H_1 ∩ ... ∩ H_(n-1)` in `W = P_B(E)`, where
//! `H_i` is a hypersurface of relative degree `d` twisted by a divisor of
//! degree `a_i` pulled back from the base curve `B` of genus `b`.
//!
//! Each quantity has a closed form and a second route (intersection
//! products in [`crate::chow_ring`], or inclusion-exclusion over Euler
//! characteristics of line bundles on `W`).

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::chow_ring::{ChowClass, RingSpec};
use crate::exact_arith::{binom_poly, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationConfig {
    pub n: u32,
    pub d: i64,
    pub b: i64,
    pub deg_e: i64,
    pub a: Vec<i64>,
}

impl FibrationConfig {
    pub fn new(n: u32, d: i64, b: i64, deg_e: i64, a: Vec<i64>) -> Result<Self> {
        let cfg = FibrationConfig { n, d, b, deg_e, a };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInput(format!(
                "n must be >= 2, got {}",
                self.n
            )));
        }
        if self.a.len() != self.n as usize - 1 {
            return Err(Error::InvalidInput(format!(
                "expected n - 1 = {} twist degrees, got {}",
                self.n - 1,
                self.a.len()
            )));
        }
        if self.d < 1 {
            return Err(Error::InvalidInput(format!(
                "d must be >= 1, got {}",
                self.d
            )));
        }
        if self.b < 0 {
            return Err(Error::InvalidInput(format!(
                "b must be >= 0, got {}",
                self.b
            )));
        }
        Ok(())
    }

    pub fn eprime(&self) -> i64 {
        eprime(self.n, self.d)
    }

    pub fn sum_a(&self) -> i64 {
        self.a.iter().sum()
    }
}

/// `e' = (n - 1) d - (n + 1)`, the degree with `K_F = O_F(e')` on a fiber.
pub fn eprime(n: u32, d: i64) -> i64 {
    let n = n as i64;
    (n - 1) * d - (n + 1)
}

/// `(3n - 2) d - (3n + 2)`, the factor shared by `chi` and `r`.
fn slope_denominator(n: u32, d: i64) -> i64 {
    let n = n as i64;
    (3 * n - 2) * d - (3 * n + 2)
}

fn pow(base: i64, exp: u32) -> Rational {
    Rational::from(base).pow(exp)
}

/// `lambda(n, d) = 24((n-1)d - (n+1)) / ((3n-2)d - (3n+2))`.
pub fn lambda(n: u32, d: i64) -> Result<Rational> {
    let den = slope_denominator(n, d);
    if den == 0 {
        return Err(Error::UndefinedSlope { n: n as i64, d });
    }
    Rational::new(24 * eprime(n, d), den)
}

/// Genus of a complete intersection of `n - 1` hypersurfaces of degree `d`
/// in `P^n`, from `2g - 2 = d^(n-1) e'`.
pub fn genus(n: u32, d: i64) -> BigInt {
    let twice = BigInt::from(d).pow(n - 1) * eprime(n, d);
    twice / 2 + 1
}

/// `chi(O_W(-d) (x) pi^* O_B(-a))` on `W = P_B(E)`, `rank E = n + 1`.
pub fn chi_line(n: u32, b: i64, deg_e: i64, d: i64, a: i64) -> Rational {
    let low = binom_poly(d - 1, n);
    let high = binom_poly(d, n + 1);
    let value = &low * (b - 1) + high * deg_e + low * a;
    let value = Rational::from(value);
    if (n + 1).is_multiple_of(2) {
        value
    } else {
        -value
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ACoefficients {
    pub a0: Rational,
    pub a1: Rational,
    pub a2: Rational,
}

/// Closed forms of the coefficients in
/// `chi(O_X) = A0 (b - 1) + A1 deg E + A2 sum a_i`.
pub fn a_coefficients(n: u32, d: i64) -> ACoefficients {
    let ne = n as i64;
    let ep = eprime(n, d);
    let s = Rational::frac(slope_denominator(n, d), 24);
    ACoefficients {
        a0: pow(d, n - 1) * Rational::frac(ep, 2),
        a1: &s * &pow(d, n - 1) * Rational::from((d - 1) * (ne - 1)),
        a2: &s * &pow(d, n - 2) * Rational::from((d - 1) * (ne + 1)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub k2: Rational,
    pub chi: Rational,
    #[serde(serialize_with = "crate::exact_arith::serialize_display")]
    pub genus: BigInt,
    pub lambda: Option<Rational>,
    pub slope_equality: Option<bool>,
    /// Set when `chi < 0`, which no relatively minimal fibration attains.
    pub chi_negative: bool,
}

/// The common factor `(d - 1) d^(n-2) ((n-1) d deg E + (n+1) sum a_i)`.
fn invariant_core(cfg: &FibrationConfig) -> Rational {
    let ne = cfg.n as i64;
    let linear = (ne - 1) * cfg.d * cfg.deg_e + (ne + 1) * cfg.sum_a();
    Rational::from(cfg.d - 1) * pow(cfg.d, cfg.n - 2) * Rational::from(linear)
}

/// `K^2` and `chi` of the relative fibration `X -> B` from their closed forms.
pub fn invariants_closed(cfg: &FibrationConfig) -> Result<InvariantReport> {
    cfg.validate()?;
    if cfg.d < 2 {
        return Err(Error::InvalidInput(format!(
            "d must be >= 2, got {}",
            cfg.d
        )));
    }
    let core = invariant_core(cfg);
    let k2 = Rational::from(cfg.eprime()) * &core;
    let chi = Rational::frac(slope_denominator(cfg.n, cfg.d), 24) * &core;
    let lambda = lambda(cfg.n, cfg.d).ok();
    let slope_equality = lambda.as_ref().map(|l| l * &chi == k2);
    Ok(InvariantReport {
        chi_negative: chi.is_negative(),
        k2,
        chi,
        genus: genus(cfg.n, cfg.d),
        lambda,
        slope_equality,
    })
}

/// `K^2` of the relative fibration as an intersection number on `W`:
/// `(K_W + sum H_i)^2 H_1 ... H_(n-1) - 4 e' d^(n-1) (b - 1)`.
pub fn k2_chow(cfg: &FibrationConfig) -> Result<Rational> {
    cfg.validate()?;
    let spec = RingSpec::new(cfg.n, cfg.deg_e)?;
    let ep = cfg.eprime();
    let canonical = ChowClass::divisor(spec, ep, cfg.sum_a() + 2 * cfg.b - 2 + cfg.deg_e);
    let product = cfg
        .a
        .iter()
        .map(|&ai| ChowClass::divisor(spec, cfg.d, ai))
        .fold(&canonical * &canonical, |acc, h| &acc * &h);
    let k2_x = product.evaluate_top();
    let correction = Rational::from(4 * ep * (cfg.b - 1)) * pow(cfg.d, cfg.n - 1);
    Ok(k2_x - correction)
}

/// `chi(O_X(twist))` by inclusion-exclusion over the Koszul complex of the
/// hypersurfaces: `sum_k (-1)^k sum_{|J| = k} chi(kd - twist, sum_J a_j)`.
pub fn chi_incl_excl(cfg: &FibrationConfig, twist: i64) -> Result<Rational> {
    cfg.validate()?;
    let count = cfg.a.len();
    let mut total = Rational::zero();
    for mask in 0u32..(1 << count) {
        let k = mask.count_ones() as i64;
        let a_sum: i64 = (0..count)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| cfg.a[i])
            .sum();
        let term = chi_line(cfg.n, cfg.b, cfg.deg_e, k * cfg.d - twist, a_sum);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= &term;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Uvr {
    pub u: Rational,
    pub v: Rational,
    pub r: Rational,
}

/// `r = (d - 1)((3n - 2) d - (3n + 2)) / 24`.
pub fn r_coefficient(n: u32, d: i64) -> Rational {
    Rational::frac((d - 1) * slope_denominator(n, d), 24)
}

/// `u` and `v` at an arbitrary twist `e`, so that
/// `deg pi_* O_X(e) = u deg E + v sum a_i` for `e` large.
pub fn uv_at_twist(n: u32, d: i64, e: i64) -> Uvr {
    let ne = n as i64;
    let r = r_coefficient(n, d);
    let e_r = Rational::from(e);
    let u_inner =
        &e_r * &e_r - Rational::from(((ne - 1) * d - ne) * e) + Rational::from(2 * (ne - 1)) * &r;
    let v_inner =
        &e_r * &e_r - Rational::from((ne * d - (ne + 1)) * e) + Rational::from(2 * (ne + 1)) * &r;
    Uvr {
        u: pow(d, n - 1) * u_inner * Rational::frac(1, 2),
        v: pow(d, n - 2) * v_inner * Rational::frac(1, 2),
        r,
    }
}

/// `(u, v, r)` at the twist `e = m e'`.
pub fn uvr(n: u32, d: i64, m: i64) -> Result<Uvr> {
    let ep = eprime(n, d);
    if ep <= 0 {
        return Err(Error::DegenerateFiberGenus {
            n: n as i64,
            d,
            eprime: ep,
        });
    }
    if m < 1 {
        return Err(Error::InvalidInput(format!("m must be >= 1, got {m}")));
    }
    Ok(uv_at_twist(n, d, m * ep))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn cfg(n: u32, d: i64, b: i64, deg_e: i64, a: &[i64]) -> FibrationConfig {
        FibrationConfig::new(n, d, b, deg_e, a.to_vec()).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda(3, 3).unwrap(), Rational::frac(24, 5));
        assert_eq!(lambda(2, 4).unwrap(), r(3));
        assert_eq!(lambda(2, 2), Err(Error::UndefinedSlope { n: 2, d: 2 }));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(2, 4), BigInt::from(3));
        assert_eq!(genus(3, 2), BigInt::from(1));
        assert_eq!(genus(3, 3), BigInt::from(10));
        assert_eq!(genus(2, 1), BigInt::from(0));
    }

    #[test]
    fn chi_line_examples() {
        assert_eq!(chi_line(3, 0, 1, 0, 0), r(1));
        assert_eq!(chi_line(2, 1, 0, 0, 0), r(0));
        assert_eq!(chi_line(2, 0, 1, 4, 0), r(-1));
    }

    #[test]
    fn a_coefficient_examples() {
        assert_eq!(
            a_coefficients(2, 4),
            ACoefficients {
                a0: r(2),
                a1: r(4),
                a2: r(3)
            }
        );
        assert_eq!(
            a_coefficients(3, 2),
            ACoefficients {
                a0: r(0),
                a1: r(1),
                a2: r(1)
            }
        );
        for n in 2..=6 {
            let c = a_coefficients(n, 1);
            assert!(c.a1.is_zero() && c.a2.is_zero());
        }
    }

    #[test]
    fn worked_fixtures() {
        let rep = invariants_closed(&cfg(3, 3, 0, 1, &[0, 0])).unwrap();
        assert_eq!(rep.k2, r(72));
        assert_eq!(rep.chi, r(15));
        assert_eq!(rep.genus, BigInt::from(10));
        assert_eq!(rep.lambda, Some(Rational::frac(24, 5)));
        assert_eq!(rep.slope_equality, Some(true));

        let rep = invariants_closed(&cfg(2, 4, 0, 1, &[0])).unwrap();
        assert_eq!((rep.k2, rep.chi, rep.lambda), (r(12), r(4), Some(r(3))));

        let rep = invariants_closed(&cfg(2, 4, 0, 0, &[0])).unwrap();
        assert!(rep.k2.is_zero() && rep.chi.is_zero());
    }

    #[test]
    fn degenerate_slope_is_null_not_error() {
        let rep = invariants_closed(&cfg(2, 2, 1, 3, &[1])).unwrap();
        assert_eq!(rep.lambda, None);
        assert_eq!(rep.slope_equality, None);
        assert!(invariants_closed(&cfg(2, 1, 0, 1, &[0])).is_err());
    }

    #[test]
    fn negative_chi_is_flagged() {
        let rep = invariants_closed(&cfg(2, 4, 0, -2, &[0])).unwrap();
        assert!(rep.chi_negative);
    }

    #[test]
    fn config_validation() {
        assert!(FibrationConfig::new(3, 3, 0, 1, vec![0]).is_err());
        assert!(FibrationConfig::new(1, 3, 0, 1, vec![]).is_err());
        assert!(FibrationConfig::new(2, 3, -1, 1, vec![0]).is_err());
    }

    #[test]
    fn k2_chow_examples() {
        assert_eq!(k2_chow(&cfg(3, 3, 0, 1, &[0, 0])).unwrap(), r(72));
        let base = cfg(3, 4, 0, 2, &[1, -2]);
        let shifted = FibrationConfig {
            b: 5,
            ..base.clone()
        };
        assert_eq!(k2_chow(&base).unwrap(), k2_chow(&shifted).unwrap());
    }

    #[test]
    fn chi_incl_excl_example() {
        assert_eq!(chi_incl_excl(&cfg(2, 4, 0, 1, &[0]), 0).unwrap(), r(2));
    }

    #[test]
    fn uvr_examples() {
        assert_eq!(r_coefficient(2, 4), r(1));
        assert!(matches!(
            uvr(3, 2, 1),
            Err(Error::DegenerateFiberGenus { .. })
        ));
        for n in 2..=5 {
            for d in 2..=6 {
                if eprime(n, d) > 0 {
                    let via_r = Rational::from((d - 1) * eprime(n, d)) / r_coefficient(n, d);
                    assert_eq!(lambda(n, d).unwrap(), via_r);
                }
            }
        }
    }
}
