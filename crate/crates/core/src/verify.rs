//! Grid runner for every exact identity in the crate: closed forms against
//! their oracles, ring-level identities, the elimination, and the
//! singularity pipeline.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chow_ring::{
    ch_oc_closed, ch_ox_closed, grr_linear_coefficients, koszul_ch, ChowClass, RingSpec,
};
use crate::exact_arith::{binom_poly, sigma_closed, sigma_direct, sigma_recursive, Rational};
use crate::fibration_invariants::{
    a_coefficients, chi_incl_excl, eprime, genus, invariants_closed, k2_chow, lambda,
    r_coefficient, uvr, FibrationConfig,
};
use crate::oracles::{a_coeffs_bruteforce, koszul_ch_bruteforce, pushforward_degree_rr};
use crate::singularity_calc::{
    check_theorem, equivalent_form_coefficient, margin_identity, SingularityInput,
};
use crate::slope_elimination::{eliminate, round_trip};
use crate::{Error, Result};

const SEED: u64 = 0x5107e;
const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub n: RangeInclusive<u32>,
    pub d: RangeInclusive<i64>,
    pub m: Vec<i64>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            n: 2..=6,
            d: 2..=6,
            m: vec![5, 10, 100],
        }
    }
}

fn parse_range<T: std::str::FromStr>(s: &str) -> Result<RangeInclusive<T>> {
    let bad = || Error::Parse(format!("expected lo..hi, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| bad())?;
    Ok(lo..=hi)
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("expected comma-separated integers, got {s:?}")))
        })
        .collect()
}

impl Grid {
    pub fn new(n: &str, d: &str, m: &str) -> Result<Self> {
        let grid = Grid {
            n: parse_range(n)?,
            d: parse_range(d)?,
            m: parse_list(m)?,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Parses `n=2..6;d=2..6;m=5,10,100`; omitted keys keep their defaults.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let mut grid = Grid::default();
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "n" => grid.n = parse_range(value)?,
                "d" => grid.d = parse_range(value)?,
                "m" => grid.m = parse_list(value)?,
                other => return Err(Error::Parse(format!("unknown grid key {other:?}"))),
            }
        }
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if *self.n.start() < 2 || self.n.is_empty() || *self.n.end() > 8 {
            return Err(Error::InvalidInput("grid n must lie within 2..8".into()));
        }
        if *self.d.start() < 2 || self.d.is_empty() || *self.d.end() > 12 {
            return Err(Error::InvalidInput("grid d must lie within 2..12".into()));
        }
        if self.m.is_empty() || self.m.iter().any(|&m| !(1..=10_000).contains(&m)) {
            return Err(Error::InvalidInput(
                "grid m must be a nonempty list within 1..10000".into(),
            ));
        }
        Ok(())
    }

    fn points(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.n
            .clone()
            .flat_map(move |n| self.d.clone().map(move |d| (n, d)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub point: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub evaluated: usize,
    pub skipped: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: true,
            evaluated: 0,
            skipped: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, point: impl Display, expected: impl Display, got: impl Display) {
        self.evaluated += 1;
        if !ok {
            self.passed = false;
            self.failed += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(Failure {
                    point: point.to_string(),
                    expected: expected.to_string(),
                    got: got.to_string(),
                });
            }
        }
    }

    fn equal<T: PartialEq + Display>(&mut self, point: impl Display, expected: &T, got: &T) {
        self.record(expected == got, point, expected, got);
    }

    fn error(&mut self, point: impl Display, err: &Error) {
        self.record(false, point, "a value", format!("error: {err}"));
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub grid: Grid,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    /// `lambda_coeff` per `(n, d)` and `m`
    pub elimination_lambda: BTreeMap<String, BTreeMap<i64, Rational>>,
    /// Observed `c_coeff` values that were not zero
    pub nonzero_c_coeff: Vec<String>,
    pub diagnostics: Vec<String>,
}

fn point_nd(n: u32, d: i64) -> String {
    format!("(n={n}, d={d})")
}

/// Deterministic sample of configs for a fixed `(n, d)`:
/// `b in 0..=2`, `deg E in -2..=3`, `a_i in -2..=2`.
pub fn sample_configs(n: u32, d: i64, count: usize, rng: &mut impl Rng) -> Vec<FibrationConfig> {
    (0..count)
        .map(|_| FibrationConfig {
            n,
            d,
            b: rng.gen_range(0..=2),
            deg_e: rng.gen_range(-2..=3),
            a: (0..n - 1).map(|_| rng.gen_range(-2..=2)).collect(),
        })
        .collect()
}

/// A random valid input for the singularity pipeline.
pub fn random_singularity(rng: &mut impl Rng) -> SingularityInput {
    let emb_dim = rng.gen_range(3..=10);
    let pg = rng.gen_range(0..=40);
    let exc_count = rng.gen_range(1..=30);
    let mu0 = rng.gen_range(0..=(2 * pg).min(exc_count + 1));
    // mu- = 10 pg + K2 + #exc - mu0 must stay nonnegative
    let floor = -(10 * pg + exc_count - mu0);
    let k2 = rng.gen_range(floor..=0);
    SingularityInput {
        emb_dim,
        pg,
        k2,
        exc_count,
        mu0,
    }
}

/// The rational double points `A1..A4, D4, D5, E6, E7, E8` by name and rank.
pub const RATIONAL_DOUBLE_POINTS: [(&str, i64); 9] = [
    ("A1", 1),
    ("A2", 2),
    ("A3", 3),
    ("A4", 4),
    ("D4", 4),
    ("D5", 5),
    ("E6", 6),
    ("E7", 7),
    ("E8", 8),
];

pub fn run(grid: &Grid) -> Result<VerifyReport> {
    grid.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = Vec::new();
    let mut diagnostics = Vec::new();

    checks.extend(combinatorics());
    checks.extend(fibrations(grid, &mut rng));
    checks.extend(koszul(grid, &mut rng));
    checks.extend(grr(grid));
    let (elim_checks, elimination_lambda, nonzero_c_coeff) = elimination(grid);
    checks.extend(elim_checks);
    checks.extend(singularities(&mut rng));

    if !nonzero_c_coeff.is_empty() {
        diagnostics.push(format!(
            "c coefficient nonzero at {} grid points",
            nonzero_c_coeff.len()
        ));
    }
    for c in &checks {
        if c.evaluated == 0 && c.skipped > 0 {
            diagnostics.push(format!("{}: every grid point skipped", c.name));
        }
    }
    Ok(VerifyReport {
        grid: grid.clone(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        elimination_lambda,
        nonzero_c_coeff,
        diagnostics,
    })
}

fn combinatorics() -> Vec<CheckOutcome> {
    let mut recursion = CheckOutcome::new("sigma_direct_eq_recursive");
    let mut closed = CheckOutcome::new("sigma_direct_eq_closed");
    let mut vanishing = CheckOutcome::new("sigma_vanishes_below_diagonal");
    for m in 1..=8u32 {
        for l in 0..=10u32 {
            let point = format!("(m={m}, l={l})");
            let direct = sigma_direct(m, l);
            recursion.equal(&point, &direct, &sigma_recursive(m, l));
            if (m..=m + 2).contains(&l) {
                match sigma_closed(m, l) {
                    Ok(v) => closed.equal(&point, &direct, &v),
                    Err(e) => closed.error(&point, &e),
                }
            }
            if l >= 1 && l < m {
                vanishing.equal(&point, &BigInt::from(0), &direct);
            }
        }
    }

    let mut pascal = CheckOutcome::new("binom_poly_pascal");
    for x in -12..=12i64 {
        for k in 1..=7u32 {
            let lhs = binom_poly(x, k);
            let rhs = binom_poly(x - 1, k) + binom_poly(x - 1, k - 1);
            pascal.equal(format!("(x={x}, k={k})"), &lhs, &rhs);
            if x >= k as i64 {
                let standard: BigInt =
                    (0..k as i64).fold(BigInt::from(1), |acc, i| acc * (x - i) / (i + 1));
                pascal.equal(format!("standard (x={x}, k={k})"), &standard, &lhs);
            }
        }
    }
    vec![recursion, closed, vanishing, pascal]
}

fn fibrations(grid: &Grid, rng: &mut ChaCha8Rng) -> Vec<CheckOutcome> {
    let mut a_coeffs = CheckOutcome::new("a_coefficients_closed_eq_bruteforce");
    let mut parity = CheckOutcome::new("genus_integrality");
    let mut lambda_forms = CheckOutcome::new("lambda_two_forms");
    let mut slope = CheckOutcome::new("slope_equality");
    let mut chow = CheckOutcome::new("k2_chow_eq_closed");
    let mut incl_excl = CheckOutcome::new("chi_incl_excl_eq_closed_shifted");
    let mut integral = CheckOutcome::new("chi_integrality");
    let mut expanded = CheckOutcome::new("k2_factored_eq_expanded");

    for n in grid.n.clone() {
        for d in 1..=*grid.d.end() {
            let closed = a_coefficients(n, d);
            let (a0, a1, a2) = a_coeffs_bruteforce(n, d);
            let p = point_nd(n, d);
            a_coeffs.equal(&p, &closed.a0, &a0);
            a_coeffs.equal(&p, &closed.a1, &a1);
            a_coeffs.equal(&p, &closed.a2, &a2);
            let twice = BigInt::from(d).pow(n - 1) * eprime(n, d);
            parity.record(twice.is_even(), &p, "even", &twice);
        }
    }

    for (n, d) in grid.points() {
        let p = point_nd(n, d);
        match lambda(n, d) {
            Ok(l) => {
                let via_r =
                    Rational::from((d - 1) * eprime(n, d)).checked_div(&r_coefficient(n, d));
                match via_r {
                    Ok(v) => lambda_forms.equal(&p, &l, &v),
                    Err(e) => lambda_forms.error(&p, &e),
                }
            }
            Err(_) => lambda_forms.skip(),
        }

        for cfg in sample_configs(n, d, 24, rng) {
            let p = format!("{cfg:?}");
            let report = match invariants_closed(&cfg) {
                Ok(r) => r,
                Err(e) => {
                    slope.error(&p, &e);
                    continue;
                }
            };
            match (&report.lambda, report.slope_equality) {
                (Some(l), Some(eq)) => slope.record(eq, &p, &report.k2, l * &report.chi),
                _ => slope.skip(),
            }
            match k2_chow(&cfg) {
                Ok(k2) => chow.equal(&p, &report.k2, &k2),
                Err(e) => chow.error(&p, &e),
            }
            let shift = Rational::from(report.genus.clone() - 1) * Rational::from(cfg.b - 1);
            match chi_incl_excl(&cfg, 0) {
                Ok(chi) => incl_excl.equal(&p, &(&report.chi + &shift), &chi),
                Err(e) => incl_excl.error(&p, &e),
            }
            integral.record(report.chi.is_integer(), &p, "integer", &report.chi);

            let ep = Rational::from(cfg.eprime());
            let dn2 = Rational::from(d).pow(n - 2);
            let dn1 = Rational::from(d).pow(n - 1);
            let by_parts = &ep * &dn1 * (&ep + Rational::from(2)) * Rational::from(cfg.deg_e)
                + &ep * &dn2 * (&ep + Rational::from(2 * d)) * Rational::from(cfg.sum_a());
            expanded.equal(&p, &report.k2, &by_parts);
        }
    }
    vec![
        a_coeffs,
        parity,
        lambda_forms,
        slope,
        chow,
        incl_excl,
        integral,
        expanded,
    ]
}

fn koszul(grid: &Grid, rng: &mut ChaCha8Rng) -> Vec<CheckOutcome> {
    let mut ox = CheckOutcome::new("koszul_eq_ch_ox_closed");
    let mut oc = CheckOutcome::new("koszul_eq_ch_oc_closed");
    let mut oc_top = CheckOutcome::new("ch_oc_top_degree");
    let mut brute = CheckOutcome::new("koszul_eq_bruteforce");
    for (n, d) in grid.points() {
        for _ in 0..3 {
            let deg_e = rng.gen_range(-2..=3);
            let spec = RingSpec::new(n, deg_e).expect("n >= 2");
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let e = rng.gen_range(1..=3 * d);
            let mut rhos: Vec<ChowClass> = a[..n as usize - 1]
                .iter()
                .map(|&ai| ChowClass::divisor(spec, d, ai))
                .collect();
            let p = format!("(n={n}, d={d}, deg_e={deg_e}, a={a:?}, e={e})");

            let result: Result<()> = (|| {
                let k = koszul_ch(&rhos)?;
                ox.equal(&p, &ch_ox_closed(&rhos)?, &k);
                brute.equal(&p, &koszul_ch_bruteforce(&rhos)?, &k);

                rhos.push(ChowClass::divisor(spec, e, a[n as usize - 1]));
                let k = koszul_ch(&rhos)?;
                oc.equal(&p, &ch_oc_closed(&rhos)?, &k);
                let total = rhos.iter().fold(ChowClass::zero(spec), |acc, r| &acc + r);
                let prod = rhos.iter().fold(ChowClass::one(spec), |acc, r| &acc * r);
                let expected = (&total * &prod).scale(&Rational::frac(-1, 2));
                let top = spec.top_degree();
                oc_top.equal(
                    &p,
                    &expected.homogeneous_part(top),
                    &k.homogeneous_part(top),
                );
                Ok(())
            })();
            if let Err(err) = result {
                ox.error(&p, &err);
            }
        }
    }
    vec![ox, oc, oc_top, brute]
}

fn grr(grid: &Grid) -> Vec<CheckOutcome> {
    let mut uv = CheckOutcome::new("grr_eq_uv");
    let mut rr = CheckOutcome::new("grr_eq_riemann_roch_oracle");
    let mut incl = CheckOutcome::new("riemann_roch_oracle_eq_incl_excl");
    for (n, d) in grid.points() {
        let ep = eprime(n, d);
        if ep <= 0 {
            uv.skip();
            continue;
        }
        for m in 1..=3 {
            let e = m * ep;
            let p = format!("(n={n}, d={d}, e={e})");
            let coeffs = uvr(n, d, m).expect("e' > 0");
            match grr_linear_coefficients(n, d, e) {
                Ok((u, v)) => {
                    uv.equal(&p, &coeffs.u, &u);
                    uv.equal(&p, &coeffs.v, &v);
                }
                Err(err) => uv.error(&p, &err),
            }
            // The symmetric-power enumeration grows quickly; keep to small n, d.
            if n > 3 || d > 4 || e < (n as i64 - 1) * d {
                rr.skip();
                continue;
            }
            for (b, deg_e, a0) in [(0, 1, 0), (2, 0, 1), (1, 3, -2)] {
                let mut a = vec![0; n as usize - 1];
                a[0] = a0;
                let cfg = FibrationConfig { n, d, b, deg_e, a };
                let p = format!("{cfg:?} e={e}");
                let expected = &coeffs.u * &Rational::from(deg_e) + &coeffs.v * &Rational::from(a0);
                match pushforward_degree_rr(&cfg, e) {
                    Ok(got) => {
                        rr.equal(&p, &expected, &got);
                        let rank = Rational::from(BigInt::from(d).pow(n - 1) * e + 1)
                            - Rational::from(genus(n, d));
                        match chi_incl_excl(&cfg, e) {
                            Ok(chi) => incl.equal(&p, &got, &(chi - rank * Rational::from(1 - b))),
                            Err(err) => incl.error(&p, &err),
                        }
                    }
                    Err(err) => rr.error(&p, &err),
                }
            }
        }
    }
    vec![uv, rr, incl]
}

type EliminationSummary = (
    Vec<CheckOutcome>,
    BTreeMap<String, BTreeMap<i64, Rational>>,
    Vec<String>,
);

fn elimination(grid: &Grid) -> EliminationSummary {
    let mut lam = CheckOutcome::new("elimination_lambda_eq_lambda");
    let mut independent = CheckOutcome::new("elimination_lambda_m_independent");
    let mut positive = CheckOutcome::new("elimination_p_positive");
    let mut trip = CheckOutcome::new("elimination_round_trip");
    let mut by_point = BTreeMap::new();
    let mut nonzero_c = Vec::new();

    for (n, d) in grid.points() {
        if eprime(n, d) <= 0 {
            lam.skip();
            continue;
        }
        let expected = match lambda(n, d) {
            Ok(l) => l,
            Err(_) => {
                lam.skip();
                continue;
            }
        };
        let mut per_m = BTreeMap::new();
        for &m in &grid.m {
            let p = format!("(n={n}, d={d}, m={m})");
            let out = match eliminate(n, d, m) {
                Ok(o) => o,
                Err(err) => {
                    lam.error(&p, &err);
                    continue;
                }
            };
            lam.equal(&p, &expected, &out.lambda_coeff);
            if m >= 5 {
                for (name, v) in [("p1", &out.p1), ("p2", &out.p2), ("p3", &out.p3)] {
                    positive.record(v.is_positive(), format!("{p} {name}"), "> 0", v);
                }
            } else {
                positive.skip();
            }
            match round_trip(&out) {
                Ok((a, b)) => trip.record(
                    a.is_zero() && b.is_zero(),
                    &p,
                    "zero forms",
                    format!("{a:?}; {b:?}"),
                ),
                Err(err) => trip.error(&p, &err),
            }
            if !out.c_coeff.is_zero() {
                nonzero_c.push(format!("{p}: c_coeff = {}", out.c_coeff));
            }
            per_m.insert(m, out.lambda_coeff);
        }
        let first = per_m.values().next().cloned();
        if let Some(first) = first {
            for (m, v) in &per_m {
                independent.equal(format!("(n={n}, d={d}, m={m})"), &first, v);
            }
        }
        by_point.insert(point_nd(n, d), per_m);
    }
    (vec![lam, independent, positive, trip], by_point, nonzero_c)
}

fn singularities(rng: &mut ChaCha8Rng) -> Vec<CheckOutcome> {
    let mut rdp = CheckOutcome::new("rational_double_points_equality");
    let mut forms = CheckOutcome::new("bound_forms_agree");
    let mut margin = CheckOutcome::new("margin_identity");
    let mut sigma = CheckOutcome::new("sigma_from_durfee");
    let mut coefficient = CheckOutcome::new("hypersurface_coefficient_is_6");

    for (name, rank) in RATIONAL_DOUBLE_POINTS {
        let input = SingularityInput::rational_double_point(rank);
        match check_theorem(&input) {
            Ok(r) => rdp.record(
                r.decomposition.sigma == -rank && r.equality && r.satisfied,
                name,
                format!("sigma = {} with equality", -rank),
                format!(
                    "sigma = {}, equality = {}",
                    r.decomposition.sigma, r.equality
                ),
            ),
            Err(err) => rdp.error(name, &err),
        }
    }

    let mut inputs: Vec<SingularityInput> = (0..1000).map(|_| random_singularity(rng)).collect();
    inputs.shuffle(rng);
    for input in &inputs {
        let p = format!("{input:?}");
        match (check_theorem(input), margin_identity(input)) {
            (Ok(r), Ok(m)) => {
                forms.record(
                    r.equivalent_form.satisfied == r.satisfied
                        && r.equivalent_form.equality == r.equality,
                    &p,
                    "same verdict",
                    format!("{} vs {}", r.satisfied, r.equivalent_form.satisfied),
                );
                margin.equal(&p, &m, &r.margin);
                let by_durfee = 4 * input.pg - input.mu0 - r.decomposition.mu;
                sigma.equal(&p, &by_durfee, &r.decomposition.sigma);
            }
            (Err(err), _) | (_, Err(err)) => forms.error(&p, &err),
        }
    }
    coefficient.equal(
        "emb_dim=3",
        &Rational::from(6),
        &equivalent_form_coefficient(3),
    );
    vec![rdp, forms, margin, sigma, coefficient]
}
