//! Runs every applicable constraint on one fixed-point datum.

use num_traits::Zero;
use serde::Serialize;

use crate::constraints::{
    default_truncation, dim12_chain, dim8_relation, integral_of_one, min_weight_balance,
    prop42_failure, sign_sum, signature_series, vandermonde_vanishing, weight_parity,
    dim_mod4_check, Certificate, SignatureResult,
};
use crate::fpdata::{pattern_from_data, FixedPointData, TriplePattern};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub dim: usize,
    pub points: usize,
    pub truncation: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_sum: Option<i64>,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<TriplePattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: Option<String>) {
        self.checks.push(CheckOutcome {
            name,
            passed,
            detail,
        });
    }
}

/// Checks in order: validate, sign-sum, dim-mod-4, weight-parity,
/// min-weight-balance, signature-series, localization, then
/// pontryagin-vanishing where the dimension forces it, and for three points
/// triple-pattern, prop42 and the dimension-specific relation or chain.
///
/// A three-point check passes if some decomposition passes it. Validation
/// failure stops the run.
pub fn verify_data(data: &FixedPointData, truncation: Option<usize>) -> VerifyReport {
    let mut report = VerifyReport {
        dim: data.dim(),
        points: data.len(),
        truncation: 0,
        sign_sum: None,
        checks: Vec::new(),
        patterns: Vec::new(),
        certificate: None,
    };
    if let Err(e) = data.validate() {
        report.push("validate", false, Some(e.to_string()));
        return report;
    }
    report.push("validate", true, None);
    report.truncation = truncation.unwrap_or_else(|| default_truncation(data));

    let total: i64 = data.points().iter().map(|p| p.sign.value()).sum();
    report.sign_sum = Some(total);
    match sign_sum(data) {
        Ok(s) => report.push("sign-sum", true, Some(s.to_string())),
        Err(e) => report.push("sign-sum", false, Some(e.to_string())),
    }
    report.push("dim-mod-4", dim_mod4_check(data), None);
    report.push("weight-parity", weight_parity(data), None);
    report.push("min-weight-balance", min_weight_balance(data), None);
    match signature_series(data, report.truncation) {
        SignatureResult::Constant { value } => {
            report.push("signature-series", true, Some(format!("constant {value}")))
        }
        SignatureResult::NonConstant { first_degree } => report.push(
            "signature-series",
            false,
            Some(format!("nonzero coefficient at t^{first_degree}")),
        ),
    }
    let integral = integral_of_one(data);
    report.push("localization", integral.is_zero(), Some(integral.to_string()));

    for m in 1..=data.half_dim() {
        let Ok(v) = vandermonde_vanishing(data, m) else {
            continue;
        };
        if v.forced {
            let detail = (!v.all_zero).then(|| format!("nonzero group sum for p{m}"));
            report.push("pontryagin-vanishing", v.all_zero, detail);
            if !v.all_zero {
                break;
            }
        }
    }

    if data.len() == 3 {
        verify_triple(data, &mut report);
    }
    report
}

fn verify_triple(data: &FixedPointData, report: &mut VerifyReport) {
    let patterns = match pattern_from_data(data) {
        Ok(set) if !set.is_empty() => set.into_iter().collect::<Vec<_>>(),
        Ok(_) => {
            report.push("triple-pattern", false, Some("no edge-label decomposition".into()));
            return;
        }
        Err(e) => {
            report.push("triple-pattern", false, Some(e.to_string()));
            return;
        }
    };
    report.push("triple-pattern", true, Some(format!("{} decomposition(s)", patterns.len())));
    report.patterns = patterns.clone();

    let failures: Vec<Option<String>> = patterns.iter().map(prop42_failure).collect();
    let passing: Vec<&TriplePattern> = patterns
        .iter()
        .zip(&failures)
        .filter(|(_, f)| f.is_none())
        .map(|(p, _)| p)
        .collect();
    let detail = passing
        .is_empty()
        .then(|| failures.iter().flatten().next().cloned())
        .flatten();
    report.push("prop42", !passing.is_empty(), detail);
    if passing.is_empty() {
        return;
    }

    match data.dim() {
        8 => {
            let ok = passing.iter().any(|p| dim8_relation(p).unwrap_or(false));
            report.push("dim8-relation", ok, None);
        }
        12 => {
            let certs: Vec<Certificate> =
                patterns.iter().filter_map(|p| dim12_chain(p).ok()).collect();
            let admissible = certs.iter().find(|c| c.verdict.is_admissible()).cloned();
            let ok = admissible.is_some();
            let detail = if ok {
                None
            } else {
                certs
                    .iter()
                    .filter_map(|c| c.verdict.refuted_stage())
                    .max()
                    .map(|s| format!("refuted at {s}"))
            };
            report.push("dim12-chain", ok, detail);
            report.certificate = admissible.or_else(|| certs.into_iter().next());
        }
        _ => {}
    }
}
