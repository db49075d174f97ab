//! Inequality checkers, identity verifiers and limit checks.
//!
//! Every checker returns a [`CheckReport`]. Reports tagged
//! [`Severity::Theorem`] describe statements that are proved, so a failure is a
//! bug in this crate. Reports tagged [`Severity::Conjecture`] probe open
//! statements, and a failure there is a counterexample candidate.

mod identities;
mod inequalities;
mod limits;
mod posets;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::exponent::Exponent;
use crate::poly::SparsePoly;
use crate::rational::{to_fraction_string, Rational};

pub use identities::{
    diagonalization_identity_sides, operational_diffop_at_zero, operational_q_ell, q_ell, q_limit,
    q_m, scaled_q_ell, technical_derived_sides, verify_diagonalization_identity,
    verify_qell_identity, verify_technical_derived, verify_weighted_truncation,
    weighted_truncation_sides,
};
pub use inequalities::{
    check_kt, check_rayleigh, check_rkt, check_rkt_all_pivots, Budget, DEFAULT_BUDGET,
};
pub use limits::{
    crossproduct_limit_factor, qell_ratios, qm_ratios, verify_crossproduct_limit,
    verify_qell_convergence, verify_qm_convergence,
};
pub use posets::{
    check_af_type, check_cross_product, check_diagonalization_consistency,
    check_kahn_saks_inequality, check_ks_sum_identity, check_ordinal_sum_invariance,
    check_ordinal_sum_tables,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Theorem,
    Conjecture,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Theorem => "theorem",
            Severity::Conjecture => "conjecture",
        }
    }
}

/// The first violated instance: its indices and the two exact sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub indices: Value,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Witness {
    pub fn new(indices: Value, lhs: Rational, rhs: Rational) -> Self {
        Witness { indices, lhs, rhs }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "indices": self.indices,
            "lhs": to_fraction_string(&self.lhs),
            "rhs": to_fraction_string(&self.rhs),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub instance: Value,
    pub passed: bool,
    pub severity: Severity,
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn pass(check: &str, severity: Severity, instance: Value) -> Self {
        CheckReport {
            check: check.to_string(),
            instance,
            passed: true,
            severity,
            witness: None,
        }
    }

    pub fn fail(check: &str, severity: Severity, instance: Value, witness: Witness) -> Self {
        CheckReport {
            check: check.to_string(),
            instance,
            passed: false,
            severity,
            witness: Some(witness),
        }
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(check: &str, severity: Severity, instance: Value, witness: Option<Witness>) -> Self {
        match witness {
            None => Self::pass(check, severity, instance),
            Some(w) => Self::fail(check, severity, instance, w),
        }
    }

    /// A check that could not run on this instance. It counts as passed and
    /// carries the reason under `instance.skipped`.
    pub fn skipped(check: &str, severity: Severity, mut instance: Value, reason: &str) -> Self {
        match instance.as_object_mut() {
            Some(obj) => {
                obj.insert("skipped".into(), Value::String(reason.to_string()));
            }
            None => instance = json!({ "skipped": reason }),
        }
        Self::pass(check, severity, instance)
    }

    /// Tags the instance with extra context (poset, chain, trial, …).
    pub fn with_context(mut self, key: &str, value: Value) -> Self {
        match self.instance.as_object_mut() {
            Some(obj) => {
                obj.insert(key.to_string(), value);
            }
            None => {
                let old = std::mem::take(&mut self.instance);
                self.instance = json!({ "value": old, key: value });
            }
        }
        self
    }

    pub fn is_skipped(&self) -> bool {
        self.instance.get("skipped").is_some()
    }

    pub fn is_theorem_violation(&self) -> bool {
        !self.passed && self.severity == Severity::Theorem
    }

    pub fn is_conjecture_candidate(&self) -> bool {
        !self.passed && self.severity == Severity::Conjecture
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "instance": self.instance,
            "passed": self.passed,
            "severity": self.severity.as_str(),
            "witness": self.witness.as_ref().map(Witness::to_json),
        })
    }

    /// One line of JSON. Keys are sorted, so equal reports give equal bytes.
    pub fn to_json_line(&self) -> String {
        self.to_json().to_string()
    }
}

/// Compares two polynomials that should be equal. A mismatch is reported at
/// the first exponent where the coefficients differ.
pub fn compare_polys(check: &str, instance: Value, lhs: &SparsePoly, rhs: &SparsePoly) -> CheckReport {
    if lhs == rhs {
        return CheckReport::pass(check, Severity::Theorem, instance);
    }
    let witness = if lhs.nvars() != rhs.nvars() || lhs.degree() != rhs.degree() {
        Witness::new(
            json!(["shape", [lhs.nvars(), lhs.degree()], [rhs.nvars(), rhs.degree()]]),
            Rational::zero(),
            Rational::one(),
        )
    } else {
        let exps: BTreeSet<&Exponent> = lhs.terms().chain(rhs.terms()).map(|(e, _)| e).collect();
        let e = exps
            .into_iter()
            .find(|e| lhs.coeff(e) != rhs.coeff(e))
            .expect("unequal polynomials differ somewhere");
        Witness::new(json!([e.entries()]), lhs.coeff(e), rhs.coeff(e))
    };
    CheckReport::fail(check, Severity::Theorem, instance, witness)
}
