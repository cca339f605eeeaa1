use serde::Deserialize;
use serde_json::{json, Value};

use ci_slope_core::fibration_invariants::{
    chi_incl_excl, eprime, genus, invariants_closed, k2_chow, lambda, r_coefficient,
    FibrationConfig,
};
use ci_slope_core::singularity_calc::{
    check_theorem, durfee_bound_proof_convention, SingularityInput,
};
use ci_slope_core::slope_elimination::{eliminate, round_trip};
use ci_slope_core::verify::{self, Grid};
use ci_slope_core::{Error, Rational};

use crate::report::{Failure, Report, EXIT_CROSS_CHECK, EXIT_DOMAIN, EXIT_USAGE, EXIT_VERIFY};

pub type Outcome = std::result::Result<Report, Failure>;

pub const DEFAULT_M: i64 = 100;

pub fn slope(n: u32, d: i64) -> Outcome {
    let report = Report::new("slope", json!({ "n": n, "d": d }));
    if n < 2 || d < 2 {
        return Err(Failure::new(
            EXIT_DOMAIN,
            report,
            format!("need n >= 2 and d >= 2, got ({n}, {d})"),
        ));
    }
    let lam = lambda(n, d).map_err(|e| Failure::from_error(report.clone(), e))?;
    Ok(report.outputs(json!({
        "eprime": eprime(n, d),
        "genus": genus(n, d).to_string(),
        "lambda": lam,
        "r": r_coefficient(n, d),
    })))
}

pub fn fibration(n: u32, d: i64, b: i64, deg_e: i64, coeffs: Vec<i64>) -> Outcome {
    let mut report = Report::new(
        "fibration",
        json!({ "n": n, "d": d, "b": b, "deg_e": deg_e, "coeffs": coeffs }),
    );
    if n >= 1 && coeffs.len() != n as usize - 1 {
        return Err(Failure::new(
            EXIT_USAGE,
            report,
            format!(
                "--coeffs needs n - 1 = {} values, got {}",
                n - 1,
                coeffs.len()
            ),
        ));
    }
    let computed = (|| {
        let cfg = FibrationConfig::new(n, d, b, deg_e, coeffs)?;
        let closed = invariants_closed(&cfg)?;
        let chow = k2_chow(&cfg)?;
        let incl_excl = chi_incl_excl(&cfg, 0)?;
        let shift = (Rational::from(genus(n, d)) - Rational::one()) * Rational::from(b - 1);
        Ok::<_, Error>((closed, chow, incl_excl, shift))
    })();
    let (closed, chow, incl_excl, shift) = match computed {
        Ok(x) => x,
        Err(e) => return Err(Failure::from_error(report, e)),
    };
    let k2_agrees = chow == closed.k2;
    let chi_agrees = incl_excl == &closed.chi + &shift;
    if closed.lambda.is_none() {
        report.note(Error::UndefinedSlope { n: n as i64, d }.to_string());
    }
    if closed.chi_negative {
        report.note("chi < 0: not realized by a relatively minimal fibration");
    }
    let mut outputs = serde_json::to_value(&closed).expect("invariants serialize");
    let map = outputs.as_object_mut().expect("invariants are an object");
    map.insert("k2_chow".into(), json!(chow));
    map.insert("chi_incl_excl".into(), json!(incl_excl));
    map.insert(
        "cross_checks".into(),
        json!({ "k2_closed_eq_chow": k2_agrees, "chi_closed_eq_incl_excl": chi_agrees }),
    );
    let report = report.outputs(outputs);
    if !(k2_agrees && chi_agrees) {
        return Err(Failure::new(
            EXIT_CROSS_CHECK,
            report,
            "closed forms disagree with the intersection-theoretic computation",
        ));
    }
    Ok(report)
}

pub fn singularity(emb_dim: i64, pg: i64, k2: i64, exc: i64, mu0: i64, verbose: bool) -> Outcome {
    let mut report = Report::new(
        "singularity",
        json!({ "emb_dim": emb_dim, "pg": pg, "k2": k2, "exc": exc, "mu0": mu0 }),
    );
    let computed =
        SingularityInput::new(emb_dim, pg, k2, exc, mu0).and_then(|input| check_theorem(&input));
    let theorem = match computed {
        Ok(t) => t,
        Err(e) => return Err(Failure::from_error(report, e)),
    };
    let mut outputs = serde_json::to_value(&theorem).expect("signature report serializes");
    if verbose {
        let alt = durfee_bound_proof_convention(emb_dim, pg, exc)
            .map_err(|e| Failure::from_error(report.clone(), e))?;
        outputs
            .as_object_mut()
            .expect("signature report is an object")
            .insert("bound_proof_convention".into(), json!(alt));
        report.note(format!(
            "bound uses 3n - 5 with n = emb_dim = {emb_dim}; bound_proof_convention uses 3k - 2 with k = n - 1"
        ));
    }
    if theorem.equality {
        report.note("equality in the bound (expected exactly for rational double points)");
    }
    Ok(report.outputs(outputs))
}

pub fn elimination(n: u32, d: i64, m: i64) -> Outcome {
    let mut report = Report::new("eliminate", json!({ "n": n, "d": d, "m": m }));
    if n < 2 || m < 1 {
        return Err(Failure::new(
            EXIT_DOMAIN,
            report,
            format!("need n >= 2 and m >= 1, got n = {n}, m = {m}"),
        ));
    }
    let coeffs = match eliminate(n, d, m) {
        Ok(c) => c,
        Err(e) => return Err(Failure::from_error(report, e)),
    };
    let zero = match round_trip(&coeffs) {
        Ok((a, b)) => a.is_zero() && b.is_zero(),
        Err(e) => return Err(Failure::from_error(report, e)),
    };
    if !coeffs.c_coeff.is_zero() {
        report.note(format!("nonzero coefficient of c: {}", coeffs.c_coeff));
    }
    let mut outputs = serde_json::to_value(&coeffs).expect("coefficients serialize");
    outputs
        .as_object_mut()
        .expect("coefficients are an object")
        .insert("round_trip_zero".into(), json!(zero));
    let report = report.outputs(outputs);
    if !zero {
        return Err(Failure::new(
            EXIT_CROSS_CHECK,
            report,
            "substituting the solution back does not give zero",
        ));
    }
    Ok(report)
}

/// Grid resolution: explicit flags win, then `CI_SLOPE_GRID`, then the default.
pub fn resolve_grid(
    env: Option<&str>,
    n: Option<&str>,
    d: Option<&str>,
    m: Option<&str>,
) -> Result<Grid, Error> {
    let base = match env {
        Some(spec) if !spec.trim().is_empty() => Grid::from_spec(spec)?,
        _ => Grid::default(),
    };
    let fmt_range = |r: &std::ops::RangeInclusive<i64>| format!("{}..={}", r.start(), r.end());
    let base_n = fmt_range(&(*base.n.start() as i64..=*base.n.end() as i64));
    let base_d = fmt_range(&base.d);
    let base_m = base
        .m
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    Grid::new(
        n.unwrap_or(&base_n),
        d.unwrap_or(&base_d),
        m.unwrap_or(&base_m),
    )
}

pub fn run_verify(env: Option<&str>, n: Option<&str>, d: Option<&str>, m: Option<&str>) -> Outcome {
    let inputs = json!({ "grid_n": n, "grid_d": d, "grid_m": m, "env": env });
    let report = Report::new("verify", inputs);
    let grid = match resolve_grid(env, n, d, m) {
        Ok(g) => g,
        Err(e) => return Err(Failure::new(EXIT_USAGE, report, e.to_string())),
    };
    let result = match verify::run(&grid) {
        Ok(r) => r,
        Err(e) => return Err(Failure::from_error(report, e)),
    };
    let mut report = report.outputs(&result);
    for d in &result.diagnostics {
        report.note(d.clone());
    }
    if !result.passed {
        let failed: Vec<&str> = result
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Failure::new(
            EXIT_VERIFY,
            report,
            format!("failed checks: {}", failed.join(", ")),
        ));
    }
    Ok(report)
}

/// One line of `batch` input.
#[derive(Debug, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase", deny_unknown_fields)]
pub enum BatchItem {
    Slope {
        n: u32,
        d: i64,
    },
    Fibration {
        n: u32,
        d: i64,
        b: i64,
        deg_e: i64,
        coeffs: Vec<i64>,
    },
    Singularity {
        emb_dim: i64,
        pg: i64,
        k2: i64,
        exc: i64,
        mu0: i64,
        #[serde(default)]
        verbose: bool,
    },
    Eliminate {
        n: u32,
        d: i64,
        #[serde(default = "default_m")]
        m: i64,
    },
}

fn default_m() -> i64 {
    DEFAULT_M
}

pub fn batch_line(line: &str) -> Outcome {
    let item: BatchItem = serde_json::from_str(line).map_err(|e| {
        let raw =
            serde_json::from_str::<Value>(line).unwrap_or_else(|_| Value::String(line.to_string()));
        Failure::new(
            EXIT_USAGE,
            Report::new("batch", raw),
            format!("bad batch line: {e}"),
        )
    })?;
    match item {
        BatchItem::Slope { n, d } => slope(n, d),
        BatchItem::Fibration {
            n,
            d,
            b,
            deg_e,
            coeffs,
        } => fibration(n, d, b, deg_e, coeffs),
        BatchItem::Singularity {
            emb_dim,
            pg,
            k2,
            exc,
            mu0,
            verbose,
        } => singularity(emb_dim, pg, k2, exc, mu0, verbose),
        BatchItem::Eliminate { n, d, m } => elimination(n, d, m),
    }
}
