//! Brute-force recomputations of the closed forms, used by the test suites
//! and by `ci-slope verify`.
//!
//! Nothing here calls into `chow_ring` or `fibration_invariants` arithmetic:
//! binomials, symmetric powers and Chern characters are recomputed from
//! scratch by enumeration. Results are compared only through [`Rational`]
//! and, for Chern characters, the [`ChowClass`] container.

use std::collections::BTreeMap;

use crate::chow_ring::{ChowClass, RingSpec};
use crate::exact_arith::Rational;
use crate::fibration_invariants::FibrationConfig;
use crate::{Error, Result};

/// `x (x-1) ... (x-k+1) / k!` as a rational.
fn falling_binomial(x: i64, k: u32) -> Rational {
    (0..k as i64)
        .map(|i| Rational::frac(x - i, i + 1))
        .product()
}

fn alt(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        Rational::from(-1)
    }
}

/// `(A0, A1, A2)` as the literal alternating sums.
pub fn a_coeffs_bruteforce(n: u32, d: i64) -> (Rational, Rational, Rational) {
    let ni = n as i64;
    let mut a0 = Rational::zero();
    let mut a1 = Rational::zero();
    let mut a2 = Rational::zero();
    for k in 0..ni {
        let sign = alt(ni + k + 1);
        let low = falling_binomial(k * d - 1, n);
        a0 += &sign * &falling_binomial(ni - 1, k as u32) * &low;
        a1 += &sign * &falling_binomial(ni - 1, k as u32) * &falling_binomial(k * d, n + 1);
        if k >= 1 {
            a2 += &sign * &falling_binomial(ni - 2, (k - 1) as u32) * &low;
        }
    }
    (a0, a1, a2)
}

/// Calls `visit` on every exponent vector of length `parts` summing to `total`.
fn for_each_composition(total: u32, parts: usize, visit: &mut dyn FnMut(&[u32])) {
    fn go(remaining: u32, slot: usize, exps: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if slot + 1 == exps.len() {
            exps[slot] = remaining;
            visit(exps);
            return;
        }
        for k in 0..=remaining {
            exps[slot] = k;
            go(remaining - k, slot + 1, exps, visit);
        }
    }
    if parts == 0 {
        return;
    }
    let mut exps = vec![0; parts];
    go(total, 0, &mut exps, visit);
}

/// A fixed splitting of degree `deg_e` into `rank` line-bundle degrees.
fn splitting(rank: usize, deg_e: i64) -> Vec<i64> {
    let mut degrees: Vec<i64> = (0..rank as i64).map(|i| i - 1).collect();
    let rest: i64 = degrees[..rank - 1].iter().sum();
    degrees[rank - 1] = deg_e - rest;
    degrees
}

/// `deg Sym^m E` for `E` split as line bundles of total degree `deg_e`,
/// summed over the monomials of `Sym^m`.
pub fn deg_sym_splitting(m: u32, rank: usize, deg_e: i64) -> i64 {
    if rank == 0 {
        return 0;
    }
    let degrees = splitting(rank, deg_e);
    let mut total = 0;
    for_each_composition(m, rank, &mut |exps| {
        total += exps
            .iter()
            .zip(&degrees)
            .map(|(&k, &x)| k as i64 * x)
            .sum::<i64>();
    });
    total
}

/// `rank Sym^m` of a rank-`rank` bundle, by counting monomials.
pub fn sym_rank(m: u32, rank: usize) -> i64 {
    let mut count = 0;
    for_each_composition(m, rank, &mut |_| count += 1);
    count
}

/// `chi(O_W(t) (x) pi^* M)` for `t >= 0` and `deg M = a`, from Riemann-Roch
/// on the base: `deg Sym^t E + rank Sym^t (a + 1 - b)`.
pub fn chi_twisted_rr(n: u32, b: i64, deg_e: i64, t: u32, a: i64) -> i64 {
    let rank = n as usize + 1;
    deg_sym_splitting(t, rank, deg_e) + sym_rank(t, rank) * (a + 1 - b)
}

/// `deg pi_* O_X(e)` from Riemann-Roch on the base curve:
/// `chi(O_X(e)) - rank(pi_* O_X(e)) (1 - b)`, with both terms computed by
/// the Koszul inclusion-exclusion over twists `e - kd >= 0`.
pub fn pushforward_degree_rr(cfg: &FibrationConfig, e: i64) -> Result<Rational> {
    cfg.validate()?;
    let guard = (cfg.n as i64 - 1) * cfg.d;
    if e < guard {
        return Err(Error::OracleOutOfRange(format!(
            "twist e = {e} below (n - 1) d = {guard}"
        )));
    }
    let count = cfg.a.len();
    let mut chi = 0i64;
    let mut rank = 0i64;
    for mask in 0u32..(1 << count) {
        let k = mask.count_ones() as i64;
        let a_sum: i64 = (0..count)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| cfg.a[i])
            .sum();
        let t = (e - k * cfg.d) as u32;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        chi += sign * chi_twisted_rr(cfg.n, cfg.b, cfg.deg_e, t, -a_sum);
        rank += sign * sym_rank(t, cfg.n as usize + 1);
    }
    Ok(Rational::from(chi - rank * (1 - cfg.b)))
}

/// Bivariate polynomial in `T` and `G` with no relations imposed.
type Poly = BTreeMap<(usize, usize), Rational>;

fn poly_mul(x: &Poly, y: &Poly, max_degree: usize) -> Poly {
    let mut out = Poly::new();
    for (&(i1, j1), c1) in x {
        for (&(i2, j2), c2) in y {
            let key = (i1 + i2, j1 + j2);
            if key.0 + key.1 <= max_degree {
                *out.entry(key).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
    }
    out
}

/// `ch` of the Koszul complex of the split bundle with roots `rhos`, expanded
/// term by term: every subset, every power of the exponential, with the
/// relations of the Chow ring applied only at the end.
pub fn koszul_ch_bruteforce(rhos: &[ChowClass]) -> Result<ChowClass> {
    let spec: RingSpec = rhos
        .first()
        .ok_or_else(|| Error::InvalidInput("empty list of divisor classes".into()))?
        .spec();
    let top = spec.top_degree();
    let divisors: Vec<(Rational, Rational)> = rhos.iter().map(|r| r.coefficients(1)).collect();

    let mut total = Poly::new();
    for mask in 0u32..(1 << rhos.len()) {
        let mut sum = Poly::new();
        for (i, (x, y)) in divisors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                *sum.entry((1, 0)).or_insert_with(Rational::zero) += x;
                *sum.entry((0, 1)).or_insert_with(Rational::zero) += y;
            }
        }
        let subset_sign = alt(mask.count_ones() as i64);
        let mut power = Poly::from([((0, 0), Rational::one())]);
        let mut inv_factorial = Rational::one();
        for j in 0..=top {
            if j > 0 {
                power = poly_mul(&power, &sum, top);
                inv_factorial = inv_factorial / Rational::from(j as i64);
            }
            let coeff = &subset_sign * &alt(j as i64) * &inv_factorial;
            for (&key, c) in &power {
                *total.entry(key).or_insert_with(Rational::zero) += &coeff * c;
            }
        }
    }

    let mut out = ChowClass::zero(spec);
    for ((i, j), c) in total {
        let term = match j {
            0 => ChowClass::monomial(spec, i, c, Rational::zero())?,
            1 => ChowClass::monomial(spec, i + 1, Rational::zero(), c)?,
            _ => continue,
        };
        out = &out + &term;
    }
    Ok(out)
}

/// Degree of `prod_i (x_i T + y_i G)` over `n + 1` factors: expand and keep
/// the terms with at most one `G`.
pub fn top_product_bruteforce(spec: RingSpec, factors: &[(i64, i64)]) -> Result<Rational> {
    if factors.len() != spec.top_degree() {
        return Err(Error::InvalidInput(format!(
            "expected {} factors, got {}",
            spec.top_degree(),
            factors.len()
        )));
    }
    let all_t: Rational = factors.iter().map(|&(x, _)| Rational::from(x)).product();
    let one_g: Rational = (0..factors.len())
        .map(|i| {
            factors
                .iter()
                .enumerate()
                .map(|(j, &(x, y))| Rational::from(if i == j { y } else { x }))
                .product::<Rational>()
        })
        .sum();
    Ok(all_t * Rational::from(spec.deg_e()) + one_g)
}
