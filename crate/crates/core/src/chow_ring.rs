//! Numerical Chow ring of `W = P_B(E)` for a rank `n + 1` bundle `E` on a
//! curve `B`.
//!
//! The ring is generated by the tautological class `T` and the fiber class
//! `G`, subject to `G^2 = 0`, `T^n G = 1` and `T^(n+1) = deg E`. A class is
//! stored degree by degree as `t_k T^k + g_k T^(k-1) G` for `0 <= k <= n + 1`.
//! In the top degree the `T^(n+1)` part is always folded into the `T^n G`
//! coefficient, so two equal classes have equal coefficient vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact_arith::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingSpec {
    n: u32,
    deg_e: i64,
}

impl RingSpec {
    pub fn new(n: u32, deg_e: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "relative dimension n must be >= 2, got {n}"
            )));
        }
        Ok(RingSpec { n, deg_e })
    }

    /// Relative dimension of `W` over `B`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn deg_e(&self) -> i64 {
        self.deg_e
    }

    /// Dimension of `W`; everything above this degree vanishes.
    pub fn top_degree(&self) -> usize {
        self.n as usize + 1
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ChowClass {
    spec: RingSpec,
    t: Vec<Rational>,
    g: Vec<Rational>,
}

impl ChowClass {
    pub fn zero(spec: RingSpec) -> Self {
        let len = spec.top_degree() + 1;
        ChowClass {
            spec,
            t: vec![Rational::zero(); len],
            g: vec![Rational::zero(); len],
        }
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::scalar(spec, Rational::one())
    }

    pub fn scalar(spec: RingSpec, value: Rational) -> Self {
        let mut c = Self::zero(spec);
        c.t[0] = value;
        c
    }

    /// `t T^k + g T^(k-1) G`. For `k = 0` the `G` part must be zero.
    pub fn monomial(spec: RingSpec, k: usize, t: Rational, g: Rational) -> Result<Self> {
        if k > spec.top_degree() {
            return Ok(Self::zero(spec));
        }
        if k == 0 && !g.is_zero() {
            return Err(Error::InvalidInput("no fiber class in degree 0".into()));
        }
        let mut c = Self::zero(spec);
        c.t[k] = t;
        c.g[k] = g;
        c.normalize_top();
        Ok(c)
    }

    /// The divisor class `x T + y G`.
    pub fn divisor(spec: RingSpec, x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        let mut c = Self::zero(spec);
        c.t[1] = x.into();
        c.g[1] = y.into();
        c
    }

    pub fn tautological(spec: RingSpec) -> Self {
        Self::divisor(spec, 1, 0)
    }

    pub fn fiber(spec: RingSpec) -> Self {
        Self::divisor(spec, 0, 1)
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    /// `(t_k, g_k)`; zero outside `0..=n+1`.
    pub fn coefficients(&self, k: usize) -> (Rational, Rational) {
        match (self.t.get(k), self.g.get(k)) {
            (Some(t), Some(g)) => (t.clone(), g.clone()),
            _ => (Rational::zero(), Rational::zero()),
        }
    }

    /// The degree-`k` component as a class of its own.
    pub fn homogeneous_part(&self, k: usize) -> ChowClass {
        let mut c = Self::zero(self.spec);
        if k < self.t.len() {
            c.t[k] = self.t[k].clone();
            c.g[k] = self.g[k].clone();
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().chain(self.g.iter()).all(Rational::is_zero)
    }

    pub fn is_homogeneous_of_degree(&self, k: usize) -> bool {
        (0..self.t.len())
            .filter(|&j| j != k)
            .all(|j| self.t[j].is_zero() && self.g[j].is_zero())
    }

    pub fn scale(&self, factor: &Rational) -> ChowClass {
        ChowClass {
            spec: self.spec,
            t: self.t.iter().map(|x| x * factor).collect(),
            g: self.g.iter().map(|x| x * factor).collect(),
        }
    }

    fn check_spec(&self, other: &ChowClass) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &ChowClass) -> Result<ChowClass> {
        self.check_spec(other)?;
        Ok(ChowClass {
            spec: self.spec,
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
            g: self.g.iter().zip(&other.g).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &ChowClass) -> Result<ChowClass> {
        self.checked_add(&-other)
    }

    /// Graded product with `G^2 = 0`, truncated above degree `n + 1`.
    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass> {
        self.check_spec(other)?;
        let top = self.spec.top_degree();
        let mut out = Self::zero(self.spec);
        for i in 0..=top {
            if self.t[i].is_zero() && self.g[i].is_zero() {
                continue;
            }
            for j in 0..=top - i {
                let k = i + j;
                out.t[k] += &self.t[i] * &other.t[j];
                out.g[k] += &self.t[i] * &other.g[j] + &self.g[i] * &other.t[j];
            }
        }
        out.normalize_top();
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> ChowClass {
        let mut acc = Self::one(self.spec);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Degree of the top-dimensional part: `t_(n+1) deg E + g_(n+1)`.
    pub fn evaluate_top(&self) -> Rational {
        let top = self.spec.top_degree();
        &self.t[top] * &Rational::from(self.spec.deg_e) + &self.g[top]
    }

    fn normalize_top(&mut self) {
        let top = self.spec.top_degree();
        if !self.t[top].is_zero() {
            let folded = &self.t[top] * &Rational::from(self.spec.deg_e);
            self.g[top] += folded;
            self.t[top] = Rational::zero();
        }
    }

    /// `sum_j coeffs[j] x^j` for a class `x` without degree-0 part; terms
    /// past the top degree vanish and may be omitted from `coeffs`.
    pub fn power_series(&self, coeffs: &[Rational]) -> ChowClass {
        let mut acc = Self::zero(self.spec);
        let mut power = Self::one(self.spec);
        for c in coeffs.iter().take(self.spec.top_degree() + 1) {
            acc = &acc + &power.scale(c);
            power = &power * self;
        }
        acc
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for k in 0..self.t.len() {
            if !self.t[k].is_zero() {
                terms.push(format!("({}) T^{}", self.t[k], k));
            }
            if !self.g[k].is_zero() {
                terms.push(format!("({}) T^{} G", self.g[k], k - 1));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

// The operator forms panic on mismatched specs; the `checked_*` and `mul`
// methods report it as an error instead.
impl Add<&ChowClass> for &ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: &ChowClass) -> ChowClass {
        self.checked_add(rhs).expect("mismatched ring specs")
    }
}

impl Sub<&ChowClass> for &ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: &ChowClass) -> ChowClass {
        self.checked_sub(rhs).expect("mismatched ring specs")
    }
}

impl Mul<&ChowClass> for &ChowClass {
    type Output = ChowClass;
    fn mul(self, rhs: &ChowClass) -> ChowClass {
        ChowClass::mul(self, rhs).expect("mismatched ring specs")
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        self.scale(&Rational::from(-1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

fn exp_coefficients(len: usize, sign: Sign) -> Vec<Rational> {
    let mut coeffs = Vec::with_capacity(len);
    let mut c = Rational::one();
    for j in 0..len {
        if j > 0 {
            c = c / Rational::from(j as i64);
            if sign == Sign::Minus {
                c = -c;
            }
        }
        coeffs.push(c.clone());
    }
    coeffs
}

/// `exp(+-D)` for a divisor `D`, truncated at the top degree.
pub fn exp_class(divisor: &ChowClass, sign: Sign) -> Result<ChowClass> {
    if !divisor.is_homogeneous_of_degree(1) {
        return Err(Error::InvalidInput(
            "exp_class expects a pure degree-1 class".into(),
        ));
    }
    let len = divisor.spec().top_degree() + 1;
    Ok(divisor.power_series(&exp_coefficients(len, sign)))
}

fn check_divisors(rhos: &[ChowClass]) -> Result<RingSpec> {
    let spec = rhos
        .first()
        .ok_or_else(|| Error::InvalidInput("empty list of divisor classes".into()))?
        .spec();
    for rho in rhos {
        if rho.spec() != spec {
            return Err(Error::SpecMismatch);
        }
        if !rho.is_homogeneous_of_degree(1) {
            return Err(Error::InvalidInput(
                "Chern roots must be pure degree-1 classes".into(),
            ));
        }
    }
    Ok(spec)
}

/// Chern character of the zero scheme of a regular section of a split
/// bundle with Chern roots `rhos`, via its Koszul resolution:
/// `sum_k (-1)^k sum_{|I| = k} exp(-sum_{i in I} rho_i)`.
///
/// Computed as the product `prod_i (1 - exp(-rho_i))`, which expands to the
/// same alternating sum over subsets.
pub fn koszul_ch(rhos: &[ChowClass]) -> Result<ChowClass> {
    let spec = check_divisors(rhos)?;
    let one = ChowClass::one(spec);
    rhos.iter().try_fold(one.clone(), |acc, rho| {
        let factor = &one - &exp_class(rho, Sign::Minus)?;
        Ok(&acc * &factor)
    })
}

fn product(spec: RingSpec, classes: &[ChowClass]) -> ChowClass {
    classes.iter().fold(ChowClass::one(spec), |acc, c| &acc * c)
}

fn sum(spec: RingSpec, classes: impl IntoIterator<Item = ChowClass>) -> ChowClass {
    classes
        .into_iter()
        .fold(ChowClass::zero(spec), |acc, c| &acc + &c)
}

/// Closed form of `ch(O_X)` for `X` cut out by `n - 1` divisors:
/// `(1 - sum rho / 2 + sum_{i<j} rho_i rho_j / 4 + sum rho^2 / 6) prod rho`.
pub fn ch_ox_closed(rhos: &[ChowClass]) -> Result<ChowClass> {
    let spec = check_divisors(rhos)?;
    let n = spec.n() as usize;
    if rhos.len() != n - 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} divisor classes, got {}",
            n - 1,
            rhos.len()
        )));
    }
    let linear = sum(spec, rhos.iter().cloned());
    let mixed = sum(
        spec,
        (0..rhos.len())
            .flat_map(|i| (i + 1..rhos.len()).map(move |j| (i, j)))
            .map(|(i, j)| &rhos[i] * &rhos[j]),
    );
    let squares = sum(spec, rhos.iter().map(|r| r * r));
    let correction = &(&ChowClass::one(spec) - &linear.scale(&Rational::frac(1, 2)))
        + &(&mixed.scale(&Rational::frac(1, 4)) + &squares.scale(&Rational::frac(1, 6)));
    Ok(&correction * &product(spec, rhos))
}

/// Closed form of `ch(O_C)` for a curve `C` cut out by `n` divisors:
/// `(1 - sum rho / 2) prod rho`.
pub fn ch_oc_closed(rhos: &[ChowClass]) -> Result<ChowClass> {
    let spec = check_divisors(rhos)?;
    if rhos.len() != spec.n() as usize {
        return Err(Error::InvalidInput(format!(
            "expected {} divisor classes, got {}",
            spec.n(),
            rhos.len()
        )));
    }
    let linear = sum(spec, rhos.iter().cloned());
    let correction = &ChowClass::one(spec) - &linear.scale(&Rational::frac(1, 2));
    Ok(&correction * &product(spec, rhos))
}

/// Taylor coefficients of `x / (1 - exp(-x))` up to `x^max_degree`.
pub fn todd_series(max_degree: usize) -> Vec<Rational> {
    // (1 - exp(-x)) / x = sum_k (-1)^k x^k / (k+1)!, then invert the series.
    let denom: Vec<Rational> = (0..=max_degree)
        .map(|k| {
            let mut c = Rational::one();
            for i in 2..=(k as i64 + 1) {
                c = c / Rational::from(i);
            }
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let mut inv: Vec<Rational> = Vec::with_capacity(max_degree + 1);
    inv.push(Rational::one());
    for k in 1..=max_degree {
        let s: Rational = (1..=k).map(|j| &denom[j] * &inv[k - j]).sum();
        inv.push(-s);
    }
    inv
}

/// Todd class of a bundle with the given Chern roots.
pub fn todd_of_roots(roots: &[ChowClass]) -> Result<ChowClass> {
    let spec = check_divisors(roots)?;
    let series = todd_series(spec.top_degree());
    Ok(roots.iter().fold(ChowClass::one(spec), |acc, r| {
        &acc * &r.power_series(&series)
    }))
}

/// Todd class of the relative tangent bundle of `W -> B`, from the Euler
/// sequence: Chern roots `T - eta_i` with `sum eta_i = deg E * G`. The
/// roots are taken as equal shares `deg E / (n + 1)`; since `G^2 = 0` any
/// split gives the same class.
pub fn todd_relative(spec: RingSpec) -> ChowClass {
    let share = Rational::frac(-spec.deg_e(), spec.n() as i64 + 1);
    let root = ChowClass::divisor(spec, 1, share);
    let roots = vec![root; spec.n() as usize + 1];
    todd_of_roots(&roots).expect("roots are divisors of one spec")
}

/// `deg pi_* O_X(e)` by Grothendieck-Riemann-Roch, where
/// `X` is cut out by sections of `O_W(d) (x) pi^* a_i` in `W = P_B(E)` with
/// `deg E = deg_fl`. Assumes the higher direct images vanish.
pub fn grr_pushforward_degree(n: u32, d: i64, e: i64, deg_fl: i64, a: &[i64]) -> Result<Rational> {
    let spec = RingSpec::new(n, deg_fl)?;
    if a.len() != n as usize - 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} twist degrees, got {}",
            n - 1,
            a.len()
        )));
    }
    let rhos: Vec<ChowClass> = a
        .iter()
        .map(|&ai| ChowClass::divisor(spec, d, ai))
        .collect();
    let ch_x = ch_ox_closed(&rhos)?;
    let twist = exp_class(&ChowClass::divisor(spec, e, 0), Sign::Plus)?;
    let integrand = &(&ch_x * &twist) * &todd_relative(spec);
    Ok(integrand.evaluate_top())
}

/// Coefficients `(u, v)` with `deg pi_* O_X(e) = u deg E + v sum a_i`,
/// extracted from [`grr_pushforward_degree`] at unit inputs.
pub fn grr_linear_coefficients(n: u32, d: i64, e: i64) -> Result<(Rational, Rational)> {
    let zeros = vec![0; n as usize - 1];
    let mut unit = zeros.clone();
    unit[0] = 1;
    let u = grr_pushforward_degree(n, d, e, 1, &zeros)?;
    let v = grr_pushforward_degree(n, d, e, 0, &unit)?;
    Ok((u, v))
}
