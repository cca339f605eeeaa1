//! Linear relations between `K_f^2`, `chi_f` and the auxiliary quantities of
//! the relative Veronese construction, and the elimination of `deg f_* L`
//! that produces `K_f^2 = lambda chi_f + p1 dPa + p2 ell + p3 EC`.
//!
//! Every relation is a [`LinearForm`] whose value is zero. The twist is
//! `e = m e'`; the m-dependent regime assumes `Z = 0` and `M^2 = m^2 K_f^2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::exact_arith::Rational;
use crate::fibration_invariants::{eprime, uvr};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Var {
    /// `K_f^2`
    K2,
    /// `chi_f`
    Chi,
    /// `deg f_* L`
    DegFl,
    /// `deg c` of the correction divisor
    C,
    /// length of the torsion cokernel
    Ell,
    /// `(Z/m + E) C`, a nonnegative residual
    Ec,
    /// `2 p_a(C') - 2 g(C) >= 0`
    DeltaPa,
}

impl Var {
    pub const ALL: [Var; 7] = [
        Var::K2,
        Var::Chi,
        Var::DegFl,
        Var::C,
        Var::Ell,
        Var::Ec,
        Var::DeltaPa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::K2 => "K2",
            Var::Chi => "chi",
            Var::DegFl => "degfL",
            Var::C => "c",
            Var::Ell => "ell",
            Var::Ec => "EC",
            Var::DeltaPa => "deltaPa",
        }
    }
}

/// `sum coeff(v) v + constant`; missing variables have coefficient zero.
#[derive(Clone, Default, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    coefficients: BTreeMap<Var, Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Var, coeff: Rational) -> Self {
        self.add_term(var, coeff);
        self
    }

    pub fn add_term(&mut self, var: Var, coeff: Rational) {
        let entry = self.coefficients.entry(var).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coefficients.remove(&var);
        }
    }

    pub fn coeff(&self, var: Var) -> Rational {
        self.coefficients
            .get(&var)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty() && self.constant.is_zero()
    }

    pub fn scale(&self, factor: &Rational) -> LinearForm {
        let mut out = LinearForm::new();
        for (&v, c) in &self.coefficients {
            out.add_term(v, c * factor);
        }
        out.constant = &self.constant * factor;
        out
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (&v, c) in &other.coefficients {
            out.add_term(v, c.clone());
        }
        out.constant += &other.constant;
        out
    }

    /// Replaces `var` by the form `value`.
    pub fn substitute(&self, var: Var, value: &LinearForm) -> LinearForm {
        let coeff = self.coeff(var);
        let mut rest = self.clone();
        rest.coefficients.remove(&var);
        if coeff.is_zero() {
            rest
        } else {
            rest.add(&value.scale(&coeff))
        }
    }

    /// Solves `self = 0` for `var`, returning the expression it equals.
    pub fn solve_for(&self, var: Var) -> Option<LinearForm> {
        let coeff = self.coeff(var);
        if coeff.is_zero() {
            return None;
        }
        let mut rest = self.clone();
        rest.coefficients.remove(&var);
        Some(rest.scale(&(-Rational::one() / coeff)))
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coefficients
            .iter()
            .map(|(v, c)| format!("({c}) {}", v.name()))
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_params(n: u32, d: i64, m: i64) -> Result<i64> {
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
    Ok(ep)
}

fn pow(base: i64, exp: u32) -> Rational {
    Rational::from(base).pow(exp)
}

/// Genus comparison of `C` and its image `C'`:
/// `dPa - (d/e) m^2 K2 + d^(n-1) e (d-1) degfL + d^(n-1)(e'+2d) c
///  + d^(n-1)(e'+d) ell + EC = 0`.
pub fn lemma22_form(n: u32, d: i64, m: i64) -> Result<LinearForm> {
    let ep = check_params(n, d, m)?;
    let e = m * ep;
    let dn1 = pow(d, n - 1);
    Ok(LinearForm::new()
        .with(Var::DeltaPa, Rational::one())
        .with(Var::K2, -(Rational::frac(d, e) * Rational::from(m * m)))
        .with(Var::DegFl, &dn1 * &Rational::from(e * (d - 1)))
        .with(Var::C, &dn1 * &Rational::from(ep + 2 * d))
        .with(Var::Ell, &dn1 * &Rational::from(ep + d))
        .with(Var::Ec, Rational::one()))
}

/// Degree of `pi_* O_X(e)` computed two ways:
/// `(u - dv) degfL - (m(m-1)/2 - m^2 v/(d^(n-2) e^2)) K2 - chi
///  - (2dv/e - (1 - 1/(2m)) d^(n-1) e) c - (dv/e - 1) ell = 0`.
pub fn lemma23_form(n: u32, d: i64, m: i64) -> Result<LinearForm> {
    let ep = check_params(n, d, m)?;
    let e = m * ep;
    let coeffs = uvr(n, d, m)?;
    let dr = Rational::from(d);
    let er = Rational::from(e);
    let dv = &dr * &coeffs.v;
    let deg_fl = &coeffs.u - &dv;
    if deg_fl.is_zero() {
        return Err(Error::EliminationSingular { n: n as i64, d, m });
    }
    let k2 = Rational::frac(m * (m - 1), 2)
        - Rational::from(m * m) * &coeffs.v / (pow(d, n - 2) * &er * &er);
    let c = Rational::from(2) * &dv / &er
        - (Rational::one() - Rational::frac(1, 2 * m)) * pow(d, n - 1) * &er;
    let ell = &dv / &er - Rational::one();
    Ok(LinearForm::new()
        .with(Var::DegFl, deg_fl)
        .with(Var::K2, -k2)
        .with(Var::Chi, -Rational::one())
        .with(Var::C, -c)
        .with(Var::Ell, -ell))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationCoefficients {
    pub n: u32,
    pub d: i64,
    pub m: i64,
    pub lambda_coeff: Rational,
    /// coefficient of `deltaPa = 2 p_a(C') - 2 g(C)`
    pub p1: Rational,
    /// coefficient of `ell`
    pub p2: Rational,
    /// coefficient of `EC`
    pub p3: Rational,
    /// coefficient of `c`; the relation is expected to be free of it
    pub c_coeff: Rational,
    /// `K2` as a form in the free variables
    pub k2_form: LinearForm,
    /// `degfL` as a form in the free variables
    pub deg_fl_form: LinearForm,
}

/// Eliminates `degfL` between the two relations and solves for `K2`.
pub fn eliminate(n: u32, d: i64, m: i64) -> Result<EliminationCoefficients> {
    let l22 = lemma22_form(n, d, m)?;
    let l23 = lemma23_form(n, d, m)?;
    let deg_fl = l23
        .solve_for(Var::DegFl)
        .ok_or(Error::EliminationSingular { n: n as i64, d, m })?;
    let combined = l22.substitute(Var::DegFl, &deg_fl);
    let k2_form = combined
        .solve_for(Var::K2)
        .ok_or(Error::DegenerateElimination { n: n as i64, d, m })?;
    let deg_fl_form = deg_fl.substitute(Var::K2, &k2_form);
    Ok(EliminationCoefficients {
        n,
        d,
        m,
        lambda_coeff: k2_form.coeff(Var::Chi),
        p1: k2_form.coeff(Var::DeltaPa),
        p2: k2_form.coeff(Var::Ell),
        p3: k2_form.coeff(Var::Ec),
        c_coeff: k2_form.coeff(Var::C),
        k2_form,
        deg_fl_form,
    })
}

/// Substitutes the solved `K2` and `degfL` back into both relations; both
/// results are the zero form when the elimination is consistent.
pub fn round_trip(coeffs: &EliminationCoefficients) -> Result<(LinearForm, LinearForm)> {
    let back = |form: LinearForm| {
        form.substitute(Var::DegFl, &coeffs.deg_fl_form)
            .substitute(Var::K2, &coeffs.k2_form)
    };
    Ok((
        back(lemma22_form(coeffs.n, coeffs.d, coeffs.m)?),
        back(lemma23_form(coeffs.n, coeffs.d, coeffs.m)?),
    ))
}
