//! Datatype-generic derivation of equality, ordering, semigroup, monoid and
//! functor instances over algebraic data types, with bounded-exhaustive
//! checking of their laws.

pub mod derive;
pub mod laws;
pub mod parser;
pub mod rep;
pub mod schema;
pub mod value;

pub use derive::{
    derive_bundle, direct_oracle, has_oracle, proof_case_count, Concept, DeriveError, FnRef, InstanceBundle,
    Provenance, Registry,
};
pub use laws::{
    enumerate, enumerate_functions, CheckOutcome, Checker, DomainConfig, LawError, LawId, LawReport, PreservationKind,
    Session, Status, Witness,
};
pub use parser::{parse_schema, parse_type_expr, ParseError};
pub use rep::{build_rep, build_rep1, conforms, GValue, RepError, RepShape};
pub use schema::{
    instantiate, validate, ConstructorDecl, DataDecl, Diagnostic, DiagnosticKind, PrimType, Schema, SchemaError,
    TypeExpr,
};
pub use value::{typecheck_value, Value};
