//! Bounded-exhaustive checking of type-class laws.
//!
//! Every universally quantified law is evaluated over all tuples drawn from
//! a finite, canonically ordered enumeration of the type's values. A pass
//! means "no counterexample at this scope", nothing stronger.

mod enumerate;
mod search;
mod suites;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::{enumerate, enumerate_functions, enumerate_reps, FUNCTION_TABLE_LIMIT};
pub use suites::{Checker, PreservationKind, Session};

use crate::derive::{Concept, DeriveError, FnRef};
use crate::rep::{GValue, RepError};
use crate::schema::{PrimType, SchemaError};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LawId {
    EqRefl,
    EqSym,
    EqTrans,
    OrdRefl,
    OrdTotal,
    OrdAnti,
    OrdTrans,
    SgAssoc,
    MonLIdent,
    MonRIdent,
    FunId,
    FunCompose,
    IsoToFrom,
    IsoFromTo,
    FromInj,
    OracleEquiv,
}

impl LawId {
    pub const ALL: [LawId; 16] = [
        LawId::EqRefl,
        LawId::EqSym,
        LawId::EqTrans,
        LawId::OrdRefl,
        LawId::OrdTotal,
        LawId::OrdAnti,
        LawId::OrdTrans,
        LawId::SgAssoc,
        LawId::MonLIdent,
        LawId::MonRIdent,
        LawId::FunId,
        LawId::FunCompose,
        LawId::IsoToFrom,
        LawId::IsoFromTo,
        LawId::FromInj,
        LawId::OracleEquiv,
    ];

    /// Number of universally quantified variables.
    pub fn arity(self) -> u32 {
        match self {
            LawId::EqRefl
            | LawId::OrdRefl
            | LawId::MonLIdent
            | LawId::MonRIdent
            | LawId::FunId
            | LawId::IsoToFrom
            | LawId::IsoFromTo => 1,
            LawId::EqSym | LawId::OrdTotal | LawId::OrdAnti | LawId::FromInj | LawId::OracleEquiv => 2,
            LawId::EqTrans | LawId::OrdTrans | LawId::SgAssoc | LawId::FunCompose => 3,
        }
    }

    /// The concept whose instances the law constrains; `None` for the
    /// isomorphism laws and oracle equivalence, which apply to any.
    pub fn concept(self) -> Option<Concept> {
        match self {
            LawId::EqRefl | LawId::EqSym | LawId::EqTrans => Some(Concept::Eq),
            LawId::OrdRefl | LawId::OrdTotal | LawId::OrdAnti | LawId::OrdTrans => Some(Concept::Ord),
            LawId::SgAssoc => Some(Concept::Semigroup),
            LawId::MonLIdent | LawId::MonRIdent => Some(Concept::Monoid),
            LawId::FunId | LawId::FunCompose => Some(Concept::Functor),
            LawId::IsoToFrom | LawId::IsoFromTo | LawId::FromInj | LawId::OracleEquiv => None,
        }
    }

    /// The law suite of a concept, in report order.
    pub fn suite(concept: Concept) -> &'static [LawId] {
        match concept {
            Concept::Eq => &[LawId::EqRefl, LawId::EqSym, LawId::EqTrans],
            Concept::Ord => &[LawId::OrdRefl, LawId::OrdTotal, LawId::OrdAnti, LawId::OrdTrans],
            Concept::Semigroup => &[LawId::SgAssoc],
            Concept::Monoid => &[LawId::MonLIdent, LawId::MonRIdent],
            Concept::Functor => &[LawId::FunId, LawId::FunCompose],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LawId::EqRefl => "EqRefl",
            LawId::EqSym => "EqSym",
            LawId::EqTrans => "EqTrans",
            LawId::OrdRefl => "OrdRefl",
            LawId::OrdTotal => "OrdTotal",
            LawId::OrdAnti => "OrdAnti",
            LawId::OrdTrans => "OrdTrans",
            LawId::SgAssoc => "SgAssoc",
            LawId::MonLIdent => "MonLIdent",
            LawId::MonRIdent => "MonRIdent",
            LawId::FunId => "FunId",
            LawId::FunCompose => "FunCompose",
            LawId::IsoToFrom => "IsoToFrom",
            LawId::IsoFromTo => "IsoFromTo",
            LawId::FromInj => "FromInj",
            LawId::OracleEquiv => "OracleEquiv",
        }
    }

    pub fn from_name(s: &str) -> Option<LawId> {
        LawId::ALL.into_iter().find(|l| l.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Finite stand-ins for the primitive types plus the scope limits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DomainConfig {
    pub int_domain: Vec<i64>,
    pub bool_domain: Vec<bool>,
    pub char_domain: Vec<char>,
    pub double_domain: Vec<f64>,
    pub include_nan: bool,
    /// Maximum constructor nesting of enumerated values.
    pub depth: usize,
    /// Cap on the number of tuples checked per law.
    pub max_cases: u64,
    /// Element type used when checking functor laws.
    pub functor_element: PrimType,
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig {
            int_domain: (-2..=2).collect(),
            bool_domain: vec![false, true],
            char_domain: vec!['a', 'b'],
            double_domain: vec![-1.0, 0.0, 1.5],
            include_nan: false,
            depth: 3,
            max_cases: 200_000,
            functor_element: PrimType::Bool,
        }
    }
}

impl DomainConfig {
    pub fn validate(&self) -> Result<(), LawError> {
        let bad = |m: &str| Err(LawError::Config(m.to_string()));
        if self.int_domain.is_empty() {
            return bad("intDomain is empty");
        }
        if self.bool_domain.is_empty() {
            return bad("boolDomain is empty");
        }
        if self.char_domain.is_empty() {
            return bad("charDomain is empty");
        }
        if self.double_domain.is_empty() && !self.include_nan {
            return bad("doubleDomain is empty");
        }
        if self.depth == 0 {
            return bad("depth must be at least 1");
        }
        if self.max_cases == 0 {
            return bad("maxCases must be at least 1");
        }
        Ok(())
    }

    /// The configured values of a primitive type, in order.
    pub fn values_of(&self, prim: PrimType) -> Vec<Value> {
        match prim {
            PrimType::Int => self.int_domain.iter().map(|&i| Value::Int(i)).collect(),
            PrimType::Bool => self.bool_domain.iter().map(|&b| Value::Bool(b)).collect(),
            PrimType::Char => self.char_domain.iter().map(|&c| Value::Char(c)).collect(),
            PrimType::Double => {
                let mut out: Vec<Value> = self.double_domain.iter().map(|&d| Value::Double(d)).collect();
                if self.include_nan {
                    out.push(Value::Double(f64::NAN));
                }
                out
            }
            PrimType::Unit => vec![Value::Unit],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unsupported => "UNSUPPORTED",
        })
    }
}

/// One component of a counterexample tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Value(Value),
    Rep(GValue),
    Function(FnRef),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Value(v) => v.fmt(f),
            Witness::Rep(g) => g.fmt(f),
            Witness::Function(fr) => fr.fmt(f),
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<Value> for Witness {
    fn from(v: Value) -> Self {
        Witness::Value(v)
    }
}

impl From<GValue> for Witness {
    fn from(g: GValue) -> Self {
        Witness::Rep(g)
    }
}

impl From<FnRef> for Witness {
    fn from(f: FnRef) -> Self {
        Witness::Function(f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckOutcome {
    pub status: Status,
    /// Tuples evaluated: up to and including the first failure, or the
    /// whole (possibly truncated) space on a pass.
    pub cases_checked: u64,
    /// Size of the full tuple space at this scope.
    pub total_cases: u64,
    /// The tuple space exceeded `maxCases` and only its canonical prefix
    /// was checked.
    pub truncated: bool,
    /// The first failing tuple in canonical order.
    pub counterexample: Option<Vec<Witness>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckOutcome {
    pub fn unsupported(note: impl Into<String>) -> CheckOutcome {
        CheckOutcome {
            status: Status::Unsupported,
            cases_checked: 0,
            total_cases: 0,
            truncated: false,
            counterexample: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LawReport {
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(rename = "args")]
    pub ground_args: Vec<String>,
    /// `eq`, `ord`, `semigroup`, `monoid`, `functor`, or `iso`.
    pub concept: String,
    pub law: LawId,
    #[serde(flatten)]
    pub outcome: CheckOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl LawReport {
    pub fn status(&self) -> Status {
        self.outcome.status
    }

    /// One human-readable line.
    pub fn summary_line(&self) -> String {
        let mut ty = self.type_name.clone();
        for a in &self.ground_args {
            ty.push(' ');
            if a.contains(' ') {
                ty.push_str(&format!("({a})"));
            } else {
                ty.push_str(a);
            }
        }
        let mut line = format!(
            "{:<11} {:<9} {:<11} {:<24} cases={}",
            self.outcome.status.to_string(),
            self.concept,
            self.law.name(),
            ty,
            self.outcome.cases_checked
        );
        if self.outcome.truncated {
            line.push_str(&format!(" (truncated, of {})", self.outcome.total_cases));
        }
        if let Some(cx) = &self.outcome.counterexample {
            let parts: Vec<String> = cx.iter().map(ToString::to_string).collect();
            line.push_str(&format!(" counterexample=[{}]", parts.join(", ")));
        }
        if let Some(note) = &self.outcome.note {
            line.push_str(&format!(" ({note})"));
        }
        line
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LawError {
    #[error(transparent)]
    Derive(#[from] DeriveError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("law {law} does not apply to a {concept} instance")]
    ConceptMismatch { law: LawId, concept: Concept },
    #[error("{0}")]
    NotApplicable(String),
    #[error("enumeration of `{ty}` exceeds {limit} values")]
    TooLarge { ty: String, limit: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_law_has_arity_one_to_three() {
        for l in LawId::ALL {
            assert!((1..=3).contains(&l.arity()));
            assert_eq!(LawId::from_name(l.name()), Some(l));
        }
    }

    #[test]
    fn suites_partition_the_concept_laws() {
        let mut seen = Vec::new();
        for c in Concept::ALL {
            for &l in LawId::suite(c) {
                assert_eq!(l.concept(), Some(c));
                seen.push(l);
            }
        }
        assert_eq!(seen.len(), 12);
    }

    #[test]
    fn default_config_is_valid() {
        let cfg = DomainConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.values_of(PrimType::Int).len(), 5);
        assert_eq!(cfg.values_of(PrimType::Double).len(), 3);
        let nan = DomainConfig { include_nan: true, ..cfg.clone() };
        assert_eq!(nan.values_of(PrimType::Double).last(), Some(&Value::Double(f64::NAN)));
        assert!(DomainConfig { depth: 0, ..cfg.clone() }.validate().is_err());
        assert!(DomainConfig { int_domain: vec![], ..cfg }.validate().is_err());
    }
}
