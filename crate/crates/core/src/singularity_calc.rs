//! Milnor number, signature decomposition and the signature bound for a
//! two-dimensional isolated complete intersection singularity, from
//! integer data of its minimal resolution.
//!
//! `emb_dim` is the embedding dimension. The bound
//! `sigma <= -8 pg / (3 emb_dim - 5) - #exc` is the same as
//! `sigma <= -8 pg / (3 k - 2) - #exc` with `k = emb_dim - 1`, the index
//! that arises when the germ is written as the zero set of `k - 1`
//! equations in `C^(k+1)`.

use serde::{Deserialize, Serialize};

use crate::exact_arith::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityInput {
    pub emb_dim: i64,
    pub pg: i64,
    /// self-intersection of the canonical cycle
    pub k2: i64,
    pub exc_count: i64,
    /// nullity of the intersection form on the Milnor fiber
    pub mu0: i64,
}

impl SingularityInput {
    pub fn new(emb_dim: i64, pg: i64, k2: i64, exc_count: i64, mu0: i64) -> Result<Self> {
        let input = SingularityInput {
            emb_dim,
            pg,
            k2,
            exc_count,
            mu0,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        if self.emb_dim < 3 {
            return Err(Error::InvalidInput(format!(
                "embedding dimension must be >= 3, got {}",
                self.emb_dim
            )));
        }
        if self.pg < 0 {
            return Err(Error::InvalidInput(format!(
                "pg must be >= 0, got {}",
                self.pg
            )));
        }
        if self.exc_count < 1 {
            return Err(Error::InvalidInput(format!(
                "#exc must be >= 1, got {}",
                self.exc_count
            )));
        }
        if self.mu0 < 0 {
            return Err(Error::InvalidInput(format!(
                "mu0 must be >= 0, got {}",
                self.mu0
            )));
        }
        if 2 * self.pg - self.mu0 < 0 {
            return Err(Error::InconsistentData(format!(
                "2 pg - mu0 = {} < 0 contradicts 2 pg = mu+ + mu0",
                2 * self.pg - self.mu0
            )));
        }
        Ok(())
    }

    /// A rational double point with `rank` exceptional curves, in `C^3`.
    pub fn rational_double_point(rank: i64) -> Self {
        SingularityInput {
            emb_dim: 3,
            pg: 0,
            k2: 0,
            exc_count: rank,
            mu0: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalentForm {
    /// `12 (n - 1) / (3n - 5) pg`
    pub lhs: Rational,
    /// `mu + 1 - chi_top`
    pub rhs: Rational,
    pub satisfied: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignatureDecomposition {
    pub mu: i64,
    pub mu_plus: i64,
    pub mu_minus: i64,
    pub mu_zero: i64,
    pub sigma: i64,
    pub chi_top: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureReport {
    #[serde(flatten)]
    pub decomposition: SignatureDecomposition,
    pub bound: Rational,
    pub satisfied: bool,
    pub equality: bool,
    pub margin: Rational,
    pub equivalent_form: EquivalentForm,
}

/// Euler number of the exceptional set: `#exc + 1 - mu0`.
pub fn chi_top(exc_count: i64, mu0: i64) -> i64 {
    exc_count + 1 - mu0
}

/// Laufer's formula `mu = 12 pg + K^2 + chi_top - 1`.
pub fn milnor_number(pg: i64, k2: i64, chi_top: i64) -> Result<i64> {
    let mu = 12 * pg + k2 + chi_top - 1;
    if mu < 0 {
        return Err(Error::InconsistentData(format!("Milnor number {mu} < 0")));
    }
    Ok(mu)
}

/// Splits `mu` by the signs of the intersection form using
/// `2 pg = mu+ + mu0`.
pub fn signature_decomposition(input: &SingularityInput) -> Result<SignatureDecomposition> {
    input.validate()?;
    let chi = chi_top(input.exc_count, input.mu0);
    let mu = milnor_number(input.pg, input.k2, chi)?;
    let mu_plus = 2 * input.pg - input.mu0;
    let mu_minus = mu - mu_plus - input.mu0;
    if mu_minus < 0 {
        return Err(Error::InconsistentData(format!("mu- = {mu_minus} < 0")));
    }
    Ok(SignatureDecomposition {
        mu,
        mu_plus,
        mu_minus,
        mu_zero: input.mu0,
        sigma: mu_plus - mu_minus,
        chi_top: chi,
    })
}

/// `-8 pg / (3 emb_dim - 5) - #exc`.
pub fn durfee_bound(emb_dim: i64, pg: i64, exc_count: i64) -> Result<Rational> {
    if emb_dim < 3 {
        return Err(Error::InvalidInput(format!(
            "embedding dimension must be >= 3, got {emb_dim}"
        )));
    }
    Ok(Rational::frac(-8 * pg, 3 * emb_dim - 5) - Rational::from(exc_count))
}

/// The bound with the index of the proof, `k = emb_dim - 1`:
/// `-8 pg / (3k - 2) - #exc`. Equal to [`durfee_bound`].
pub fn durfee_bound_proof_convention(emb_dim: i64, pg: i64, exc_count: i64) -> Result<Rational> {
    let k = emb_dim - 1;
    if k < 2 {
        return Err(Error::InvalidInput(format!(
            "embedding dimension must be >= 3, got {emb_dim}"
        )));
    }
    Ok(Rational::frac(-8 * pg, 3 * k - 2) - Rational::from(exc_count))
}

/// `12 (n - 1) / (3n - 5)`, the coefficient of `pg` in the equivalent form.
pub fn equivalent_form_coefficient(emb_dim: i64) -> Rational {
    Rational::frac(12 * (emb_dim - 1), 3 * emb_dim - 5)
}

/// Evaluates both forms of the bound. Equality is reported as a flag only;
/// whether the germ is a rational double point is not decided here.
pub fn check_theorem(input: &SingularityInput) -> Result<SignatureReport> {
    let decomposition = signature_decomposition(input)?;
    let bound = durfee_bound(input.emb_dim, input.pg, input.exc_count)?;
    let sigma = Rational::from(decomposition.sigma);

    let lhs = equivalent_form_coefficient(input.emb_dim) * Rational::from(input.pg);
    let rhs = Rational::from(decomposition.mu + 1 - decomposition.chi_top);
    let report = SignatureReport {
        decomposition,
        satisfied: sigma <= bound,
        equality: sigma == bound,
        margin: &bound - &sigma,
        bound,
        equivalent_form: EquivalentForm {
            satisfied: lhs <= rhs,
            equality: lhs == rhs,
            lhs,
            rhs,
        },
    };
    if report.equivalent_form.satisfied != report.satisfied
        || report.equivalent_form.equality != report.equality
    {
        return Err(Error::CrossCheck(format!(
            "the two forms of the bound disagree on {input:?}"
        )));
    }
    Ok(report)
}

/// `K^2 + 24 (n - 2) / (3n - 5) pg`, which equals `bound - sigma`.
pub fn margin_identity(input: &SingularityInput) -> Result<Rational> {
    input.validate()?;
    let n = input.emb_dim;
    Ok(Rational::from(input.k2) + Rational::frac(24 * (n - 2) * input.pg, 3 * n - 5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(emb_dim: i64, pg: i64, k2: i64, exc: i64, mu0: i64) -> SingularityInput {
        SingularityInput::new(emb_dim, pg, k2, exc, mu0).unwrap()
    }

    #[test]
    fn chi_top_examples() {
        assert_eq!(chi_top(1, 0), 2);
        assert_eq!(chi_top(8, 0), 9);
        assert_eq!(chi_top(1, 2), 0);
    }

    #[test]
    fn milnor_examples() {
        assert_eq!(milnor_number(0, 0, 2).unwrap(), 1);
        assert_eq!(milnor_number(0, 0, 9).unwrap(), 8);
        assert_eq!(milnor_number(1, -1, 2).unwrap(), 12);
        assert!(matches!(
            milnor_number(0, -5, 2),
            Err(Error::InconsistentData(_))
        ));
    }

    #[test]
    fn decomposition_examples() {
        let a1 = signature_decomposition(&input(3, 0, 0, 1, 0)).unwrap();
        assert_eq!((a1.mu, a1.mu_plus, a1.mu_minus, a1.sigma), (1, 0, 1, -1));
        let e8 = signature_decomposition(&input(3, 0, 0, 8, 0)).unwrap();
        assert_eq!((e8.mu, e8.sigma), (8, -8));
        let x = signature_decomposition(&input(3, 1, -1, 1, 0)).unwrap();
        assert_eq!((x.mu, x.mu_plus, x.mu_minus, x.sigma), (12, 2, 10, -8));
    }

    #[test]
    fn rejects_inconsistent_input() {
        assert!(SingularityInput::new(3, 0, 0, 1, 1).is_err());
        assert!(SingularityInput::new(2, 0, 0, 1, 0).is_err());
        // mu- = 10 pg + K2 + #exc - mu0 < 0
        let bad = SingularityInput {
            emb_dim: 3,
            pg: 1,
            k2: -12,
            exc_count: 1,
            mu0: 0,
        };
        assert!(matches!(
            signature_decomposition(&bad),
            Err(Error::InconsistentData(_))
        ));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(durfee_bound(3, 0, 1).unwrap(), Rational::from(-1));
        assert_eq!(durfee_bound(3, 1, 1).unwrap(), Rational::from(-3));
        assert_eq!(durfee_bound(4, 1, 2).unwrap(), Rational::frac(-22, 7));
        for n in 3..10 {
            assert_eq!(
                durfee_bound(n, 5, 3).unwrap(),
                durfee_bound_proof_convention(n, 5, 3).unwrap()
            );
        }
    }

    #[test]
    fn theorem_examples() {
        let a1 = check_theorem(&input(3, 0, 0, 1, 0)).unwrap();
        assert!(a1.satisfied && a1.equality);
        assert_eq!(a1.bound, Rational::from(-1));
        let e8 = check_theorem(&input(3, 0, 0, 8, 0)).unwrap();
        assert!(e8.satisfied && e8.equality);
        let x = check_theorem(&input(3, 1, -1, 1, 0)).unwrap();
        assert_eq!(x.decomposition.sigma, -8);
        assert_eq!(x.bound, Rational::from(-3));
        assert!(x.satisfied && !x.equality);
        assert_eq!(x.margin, Rational::from(5));
    }

    #[test]
    fn margin_examples() {
        assert!(margin_identity(&input(3, 0, 0, 1, 0)).unwrap().is_zero());
        assert_eq!(
            margin_identity(&input(3, 1, -1, 1, 0)).unwrap(),
            Rational::from(5)
        );
        assert_eq!(
            margin_identity(&input(4, 1, 0, 1, 0)).unwrap(),
            Rational::frac(48, 7)
        );
        assert_eq!(equivalent_form_coefficient(3), Rational::from(6));
    }
}
