//! Instance bundles for the five concepts, the registry that resolves them
//! by type, and generic derivation through the representation.

mod cases;
mod generic;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use cases::proof_case_count;
pub use generic::{g_combine, g_empty, g_eq, g_fmap, g_leq};
pub use oracle::{direct_oracle, has_oracle};

use crate::rep::{build_rep, build_rep1, from_shape, to_shape, RepError, RepShape};
use crate::schema::{DataDecl, PrimType, Schema, SchemaError, TypeExpr};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Concept {
    Eq,
    Ord,
    Semigroup,
    Monoid,
    Functor,
}

impl Concept {
    pub const ALL: [Concept; 5] = [Concept::Eq, Concept::Ord, Concept::Semigroup, Concept::Monoid, Concept::Functor];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Concept::Eq => "eq",
            Concept::Ord => "ord",
            Concept::Semigroup => "semigroup",
            Concept::Monoid => "monoid",
            Concept::Functor => "functor",
        }
    }

    pub fn from_name(s: &str) -> Option<Concept> {
        Concept::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DeriveError {
    #[error("{concept} for `{ty}` is unsupported: {reason}")]
    Unsupported { concept: Concept, ty: String, reason: String },
    #[error("no {concept} instance for `{ty}`")]
    MissingInstance { concept: Concept, ty: String },
    #[error("no direct oracle for {concept} at `{ty}`")]
    NoOracle { concept: Concept, ty: String },
    #[error("{concept} instance for `{ty}` is already registered")]
    Duplicate { concept: Concept, ty: String },
    #[error("a {concept} bundle does not provide `{op}`")]
    NotPopulated { concept: Concept, op: &'static str },
    #[error("function `{function}` is not defined on `{value}`")]
    OutsideDomain { function: String, value: String },
    #[error("cannot compose `{outer}` after `{inner}`: codomain and domain differ")]
    Compose { outer: String, inner: String },
    #[error("value mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

impl DeriveError {
    pub fn is_unsupported(&self) -> bool {
        matches!(self, DeriveError::Unsupported { .. })
    }
}

/// A total function between primitive domains, given as an explicit
/// lookup table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FnRef {
    pub name: String,
    pub domain: PrimType,
    pub codomain: PrimType,
    pub table: Vec<(Value, Value)>,
}

impl FnRef {
    pub fn new(name: impl Into<String>, domain: PrimType, codomain: PrimType, table: Vec<(Value, Value)>) -> FnRef {
        FnRef { name: name.into(), domain, codomain, table }
    }

    pub fn identity(prim: PrimType, domain: &[Value]) -> FnRef {
        FnRef::new("id", prim, prim, domain.iter().map(|v| (v.clone(), v.clone())).collect())
    }

    pub fn apply(&self, v: &Value) -> Result<Value, DeriveError> {
        self.table
            .iter()
            .find(|(x, _)| x == v)
            .map(|(_, y)| y.clone())
            .ok_or_else(|| DeriveError::OutsideDomain { function: self.name.clone(), value: v.to_string() })
    }

    /// `self . inner`: apply `inner`, then `self`.
    pub fn compose(&self, inner: &FnRef) -> Result<FnRef, DeriveError> {
        if inner.codomain != self.domain {
            return Err(DeriveError::Compose { outer: self.name.clone(), inner: inner.name.clone() });
        }
        let table =
            inner.table.iter().map(|(x, y)| Ok((x.clone(), self.apply(y)?))).collect::<Result<_, DeriveError>>()?;
        Ok(FnRef::new(format!("{}.{}", self.name, inner.name), inner.domain, self.codomain, table))
    }
}

impl fmt::Display for FnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for FnRef {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Generic,
    DirectOracle,
    BuiltinPrim,
}

#[derive(Clone, Debug)]
pub(crate) enum Imp {
    Prim(PrimType),
    /// Operations computed over `shape` after converting with `from`; for
    /// functors `shape` is the instantiated `Rep1`.
    Generic {
        decl: Arc<DataDecl>,
        shape: Arc<RepShape>,
    },
    Oracle(oracle::Oracle),
}

/// The executable instance of one concept at one type.
///
/// For `Functor` the type is the partially applied constructor, e.g.
/// `Either Int`; for the other concepts it is a ground type.
#[derive(Clone, Debug)]
pub struct InstanceBundle {
    concept: Concept,
    ty: TypeExpr,
    provenance: Provenance,
    imp: Imp,
}

/// Element-level mapping used by `fmap`; nested functors compose these.
pub(crate) type MapFn<'a> = dyn Fn(&Value) -> Result<Value, DeriveError> + 'a;

impl InstanceBundle {
    pub fn concept(&self) -> Concept {
        self.concept
    }

    pub fn ty(&self) -> &TypeExpr {
        &self.ty
    }

    pub fn type_name(&self) -> String {
        self.ty.head()
    }

    pub fn ground_args(&self) -> &[TypeExpr] {
        self.ty.args()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The representation shape a generic bundle works over.
    pub fn shape(&self) -> Option<&RepShape> {
        match &self.imp {
            Imp::Generic { shape, .. } => Some(shape),
            _ => None,
        }
    }

    fn require(&self, allowed: &[Concept], op: &'static str) -> Result<(), DeriveError> {
        if allowed.contains(&self.concept) {
            Ok(())
        } else {
            Err(DeriveError::NotPopulated { concept: self.concept, op })
        }
    }

    pub fn eq(&self, reg: &Registry, a: &Value, b: &Value) -> Result<bool, DeriveError> {
        self.require(&[Concept::Eq, Concept::Ord], "eq")?;
        match &self.imp {
            Imp::Prim(p) => prim_eq(*p, a, b),
            Imp::Generic { decl, shape } => {
                g_eq(shape, &from_shape(decl, shape, a)?, &from_shape(decl, shape, b)?, reg)
            }
            Imp::Oracle(o) => oracle::Oracle::eq(*o, self.ty.args(), reg, a, b),
        }
    }

    pub fn leq(&self, reg: &Registry, a: &Value, b: &Value) -> Result<bool, DeriveError> {
        self.require(&[Concept::Ord], "leq")?;
        match &self.imp {
            Imp::Prim(p) => prim_leq(*p, a, b),
            Imp::Generic { decl, shape } => {
                g_leq(shape, &from_shape(decl, shape, a)?, &from_shape(decl, shape, b)?, reg)
            }
            Imp::Oracle(o) => o.leq(self.ty.args(), reg, a, b),
        }
    }

    fn eq_leq(&self, reg: &Registry, a: &Value, b: &Value) -> Result<(bool, bool), DeriveError> {
        self.require(&[Concept::Ord], "leq")?;
        match &self.imp {
            Imp::Prim(p) => Ok((prim_eq(*p, a, b)?, prim_leq(*p, a, b)?)),
            Imp::Generic { decl, shape } => {
                generic::g_eq_leq(shape, &from_shape(decl, shape, a)?, &from_shape(decl, shape, b)?, reg)
            }
            Imp::Oracle(o) => {
                Ok((oracle::Oracle::eq(*o, self.ty.args(), reg, a, b)?, o.leq(self.ty.args(), reg, a, b)?))
            }
        }
    }

    pub fn combine(&self, reg: &Registry, a: &Value, b: &Value) -> Result<Value, DeriveError> {
        self.require(&[Concept::Semigroup, Concept::Monoid], "combine")?;
        match &self.imp {
            Imp::Prim(p) => prim_combine(*p, a, b),
            Imp::Generic { decl, shape } => {
                let g = g_combine(shape, &from_shape(decl, shape, a)?, &from_shape(decl, shape, b)?, reg)?;
                Ok(to_shape(decl, shape, &g)?)
            }
            Imp::Oracle(o) => o.combine(self.ty.args(), reg, a, b),
        }
    }

    pub fn empty(&self, reg: &Registry) -> Result<Value, DeriveError> {
        self.require(&[Concept::Monoid], "empty")?;
        match &self.imp {
            Imp::Prim(p) => prim_empty(*p),
            Imp::Generic { decl, shape } => Ok(to_shape(decl, shape, &g_empty(shape, reg)?)?),
            Imp::Oracle(o) => o.empty(self.ty.args(), reg),
        }
    }

    pub fn fmap(&self, reg: &Registry, f: &FnRef, v: &Value) -> Result<Value, DeriveError> {
        self.fmap_with(reg, &|x| f.apply(x), v)
    }

    pub(crate) fn fmap_with(&self, reg: &Registry, f: &MapFn<'_>, v: &Value) -> Result<Value, DeriveError> {
        self.require(&[Concept::Functor], "fmap")?;
        match &self.imp {
            Imp::Prim(_) => Err(DeriveError::NotPopulated { concept: self.concept, op: "fmap" }),
            Imp::Generic { decl, shape } => {
                let g = generic::fmap_with(shape, f, &from_shape(decl, shape, v)?, reg)?;
                Ok(to_shape(decl, shape, &g)?)
            }
            Imp::Oracle(o) => o.fmap(f, v),
        }
    }
}

fn prim_mismatch(p: PrimType, a: &Value, b: &Value) -> DeriveError {
    DeriveError::Mismatch(format!("`{a}` and `{b}` are not both {p}"))
}

fn prim_eq(p: PrimType, a: &Value, b: &Value) -> Result<bool, DeriveError> {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => Ok(x == y),
        (Value::Bool(x), Value::Bool(y)) => Ok(x == y),
        (Value::Char(x), Value::Char(y)) => Ok(x == y),
        (Value::Double(x), Value::Double(y)) => Ok(x == y),
        (Value::Unit, Value::Unit) => Ok(true),
        _ => Err(prim_mismatch(p, a, b)),
    }
}

fn prim_leq(p: PrimType, a: &Value, b: &Value) -> Result<bool, DeriveError> {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => Ok(x <= y),
        (Value::Bool(x), Value::Bool(y)) => Ok(x <= y),
        (Value::Char(x), Value::Char(y)) => Ok(x <= y),
        (Value::Double(x), Value::Double(y)) => Ok(x <= y),
        (Value::Unit, Value::Unit) => Ok(true),
        _ => Err(prim_mismatch(p, a, b)),
    }
}

fn prim_combine(p: PrimType, a: &Value, b: &Value) -> Result<Value, DeriveError> {
    match (p, a, b) {
        (PrimType::Int, Value::Int(x), Value::Int(y)) => Ok(Value::Int(x.wrapping_add(*y))),
        (PrimType::Unit, Value::Unit, Value::Unit) => Ok(Value::Unit),
        _ => Err(prim_mismatch(p, a, b)),
    }
}

fn prim_empty(p: PrimType) -> Result<Value, DeriveError> {
    match p {
        PrimType::Int => Ok(Value::Int(0)),
        PrimType::Unit => Ok(Value::Unit),
        _ => Err(DeriveError::MissingInstance { concept: Concept::Monoid, ty: p.to_string() }),
    }
}

/// Instances resolved by type, one slot per concept.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    bundles: BTreeMap<TypeExpr, [Option<InstanceBundle>; 5]>,
}

impl Registry {
    /// Primitive `Eq`/`Ord` for every primitive; `Semigroup`/`Monoid` for
    /// `Int` (addition, identity 0) and `Unit`.
    pub fn with_primitives() -> Registry {
        let mut reg = Registry::default();
        for p in PrimType::ALL {
            let mut concepts = vec![Concept::Eq, Concept::Ord];
            if matches!(p, PrimType::Int | PrimType::Unit) {
                concepts.extend([Concept::Semigroup, Concept::Monoid]);
            }
            for concept in concepts {
                reg.register(InstanceBundle {
                    concept,
                    ty: TypeExpr::Prim(p),
                    provenance: Provenance::BuiltinPrim,
                    imp: Imp::Prim(p),
                })
                .expect("primitive bundles are distinct");
            }
        }
        reg
    }

    pub fn register(&mut self, bundle: InstanceBundle) -> Result<(), DeriveError> {
        let slots = self.bundles.entry(bundle.ty.clone()).or_default();
        let slot = &mut slots[bundle.concept.slot()];
        if slot.is_some() {
            return Err(DeriveError::Duplicate { concept: bundle.concept, ty: bundle.ty.to_string() });
        }
        *slot = Some(bundle);
        Ok(())
    }

    pub fn get(&self, concept: Concept, ty: &TypeExpr) -> Option<&InstanceBundle> {
        self.bundles.get(ty).and_then(|s| s[concept.slot()].as_ref())
    }

    pub fn contains(&self, concept: Concept, ty: &TypeExpr) -> bool {
        self.get(concept, ty).is_some()
    }

    pub fn len(&self) -> usize {
        self.bundles.values().flat_map(|s| s.iter()).filter(|b| b.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lookup(&self, concept: Concept, ty: &TypeExpr) -> Result<&InstanceBundle, DeriveError> {
        self.get(concept, ty).ok_or_else(|| DeriveError::MissingInstance { concept, ty: ty.to_string() })
    }

    pub(crate) fn eq_at(&self, ty: &TypeExpr, a: &Value, b: &Value) -> Result<bool, DeriveError> {
        self.lookup(Concept::Eq, ty)?.eq(self, a, b)
    }

    pub(crate) fn leq_at(&self, ty: &TypeExpr, a: &Value, b: &Value) -> Result<bool, DeriveError> {
        self.lookup(Concept::Ord, ty)?.leq(self, a, b)
    }

    pub(crate) fn eq_leq_at(&self, ty: &TypeExpr, a: &Value, b: &Value) -> Result<(bool, bool), DeriveError> {
        self.lookup(Concept::Ord, ty)?.eq_leq(self, a, b)
    }

    pub(crate) fn combine_at(&self, ty: &TypeExpr, a: &Value, b: &Value) -> Result<Value, DeriveError> {
        self.lookup(Concept::Semigroup, ty)?.combine(self, a, b)
    }

    pub(crate) fn empty_at(&self, ty: &TypeExpr) -> Result<Value, DeriveError> {
        self.lookup(Concept::Monoid, ty)?.empty(self)
    }

    pub(crate) fn fmap_at(&self, head: &TypeExpr, f: &MapFn<'_>, v: &Value) -> Result<Value, DeriveError> {
        self.lookup(Concept::Functor, head)?.fmap_with(self, f, v)
    }
}

/// Derives (or looks up) the bundle for `concept` at `type_name` applied to
/// `args`, registering it and every bundle it depends on. For `Functor`,
/// `args` are all parameters except the last.
///
/// The registry is left untouched when derivation fails.
pub fn derive_bundle(
    schema: &Schema,
    type_name: &str,
    args: &[TypeExpr],
    concept: Concept,
    reg: &mut Registry,
) -> Result<InstanceBundle, DeriveError> {
    let ty = match PrimType::from_name(type_name) {
        Some(p) if args.is_empty() => TypeExpr::Prim(p),
        _ => TypeExpr::Named(type_name.to_string(), args.to_vec()),
    };
    if let Some(b) = reg.get(concept, &ty) {
        return Ok(b.clone());
    }
    let mut staged = reg.clone();
    ensure(schema, &mut staged, concept, &ty)?;
    *reg = staged;
    Ok(reg.lookup(concept, &ty)?.clone())
}

fn ensure(schema: &Schema, reg: &mut Registry, concept: Concept, ty: &TypeExpr) -> Result<(), DeriveError> {
    if reg.contains(concept, ty) {
        return Ok(());
    }
    let TypeExpr::Named(name, args) = ty else {
        return Err(DeriveError::MissingInstance { concept, ty: ty.to_string() });
    };
    if nesting(ty) > MAX_NESTING {
        return Err(DeriveError::Unsupported {
            concept,
            ty: ty.to_string(),
            reason: "non-regular recursion needs unboundedly many instance types".into(),
        });
    }
    let decl = Arc::new(schema.decl(name)?.clone());

    if concept == Concept::Functor {
        if decl.param_count() != args.len() + 1 {
            return Err(SchemaError::Arity {
                name: name.clone(),
                expected: decl.param_count().saturating_sub(1),
                found: args.len(),
            }
            .into());
        }
        args.iter().try_for_each(|a| schema.check_ground(a))?;
        let shape = build_rep1(&decl)?.instantiate(args)?;
        let mut heads = Vec::new();
        functor_heads(&shape, &mut heads);
        register_generic(reg, concept, ty, decl, shape)?;
        for head in heads {
            ensure(schema, reg, Concept::Functor, &head)?;
        }
        return Ok(());
    }

    schema.check_ground(ty)?;
    let shape = build_rep(&decl, args)?;
    if matches!(concept, Concept::Semigroup | Concept::Monoid) && shape.has_sum_or_void() {
        return Err(DeriveError::Unsupported {
            concept,
            ty: ty.to_string(),
            reason: "sum and empty types have no canonical combination".into(),
        });
    }
    if concept == Concept::Monoid && product_cycle(schema, ty)? {
        return Err(DeriveError::Unsupported {
            concept,
            ty: ty.to_string(),
            reason: "the type recurs through its own fields, so an identity element would be infinite".into(),
        });
    }
    match concept {
        Concept::Ord => ensure(schema, reg, Concept::Eq, ty)?,
        Concept::Monoid => ensure(schema, reg, Concept::Semigroup, ty)?,
        _ => {}
    }
    let mut payloads = Vec::new();
    k1_payloads(&shape, &mut payloads);
    register_generic(reg, concept, ty, decl, shape)?;
    for t in payloads {
        ensure(schema, reg, concept, &t)?;
    }
    Ok(())
}

fn register_generic(
    reg: &mut Registry,
    concept: Concept,
    ty: &TypeExpr,
    decl: Arc<DataDecl>,
    shape: RepShape,
) -> Result<(), DeriveError> {
    reg.register(InstanceBundle {
        concept,
        ty: ty.clone(),
        provenance: Provenance::Generic,
        imp: Imp::Generic { decl, shape: Arc::new(shape) },
    })
}

/// Instance types nested deeper than this come from non-regular recursion
/// such as `data N a = N0 | N1 (N (Maybe a))`.
const MAX_NESTING: usize = 32;

fn nesting(ty: &TypeExpr) -> usize {
    match ty {
        TypeExpr::Named(_, args) => 1 + args.iter().map(nesting).max().unwrap_or(0),
        _ => 0,
    }
}

/// Whether `ty` is reachable from its own field types.
fn product_cycle(schema: &Schema, ty: &TypeExpr) -> Result<bool, DeriveError> {
    let mut stack = vec![ty.clone()];
    let mut seen = BTreeSet::new();
    while let Some(t) = stack.pop() {
        let TypeExpr::Named(name, args) = &t else { continue };
        let mut payloads = Vec::new();
        k1_payloads(&build_rep(schema.decl(name)?, args)?, &mut payloads);
        for p in payloads {
            if &p == ty {
                return Ok(true);
            }
            if seen.insert(p.clone()) {
                stack.push(p);
            }
        }
    }
    Ok(false)
}

fn k1_payloads(shape: &RepShape, out: &mut Vec<TypeExpr>) {
    match shape {
        RepShape::K1(t) if !out.contains(t) => out.push(t.clone()),
        RepShape::Sum(l, r) | RepShape::Prod(l, r) => {
            k1_payloads(l, out);
            k1_payloads(r, out);
        }
        _ => {}
    }
}

fn functor_heads(shape: &RepShape, out: &mut Vec<TypeExpr>) {
    match shape {
        RepShape::Rec1 { name, prefix } => {
            let head = TypeExpr::Named(name.clone(), prefix.clone());
            if !out.contains(&head) {
                out.push(head);
            }
        }
        RepShape::Comp1 { name, prefix, inner } => {
            let head = TypeExpr::Named(name.clone(), prefix.clone());
            if !out.contains(&head) {
                out.push(head);
            }
            functor_heads(inner, out);
        }
        RepShape::Sum(l, r) | RepShape::Prod(l, r) => {
            functor_heads(l, out);
            functor_heads(r, out);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_schema;

    fn int() -> TypeExpr {
        TypeExpr::int()
    }

    fn list_val(xs: &[i64]) -> Value {
        xs.iter()
            .rev()
            .fold(Value::con("List", "Nil", vec![]), |acc, x| Value::con("List", "Cons", vec![Value::Int(*x), acc]))
    }

    fn nat(n: usize) -> Value {
        (0..n).fold(Value::con("Nat", "Zero", vec![]), |acc, _| Value::con("Nat", "Suc", vec![acc]))
    }

    fn triple(a: i64, b: i64, c: i64) -> Value {
        Value::con("Triple", "MkTriple", vec![Value::Int(a), Value::Int(b), Value::Int(c)])
    }

    fn int_succ() -> FnRef {
        FnRef::new("succ", PrimType::Int, PrimType::Int, (-5..10).map(|i| (Value::Int(i), Value::Int(i + 1))).collect())
    }

    #[test]
    fn ord_b_matches_handwritten_cases() {
        let s = Schema::with_builtins();
        let mut reg = Registry::with_primitives();
        let ord = derive_bundle(&s, "B", &[], Concept::Ord, &mut reg).unwrap();
        assert_eq!(ord.provenance(), Provenance::Generic);
        let b1 = |i| Value::con("B", "B1", vec![Value::Int(i)]);
        let b2 = |i| Value::con("B", "B2", vec![Value::Int(i)]);
        assert!(ord.leq(&reg, &b1(9), &b2(0)).unwrap());
        assert!(!ord.leq(&reg, &b2(0), &b1(9)).unwrap());
        assert!(ord.leq(&reg, &b1(1), &b1(2)).unwrap());
        assert!(!ord.leq(&reg, &b1(2), &b1(1)).unwrap());
        assert!(ord.eq(&reg, &b1(3), &b1(3)).unwrap());
        assert!(!ord.eq(&reg, &b1(3), &b2(3)).unwrap());
    }

    #[test]
    fn nat_zero_is_minimum() {
        let s = Schema::with_builtins();
        let mut reg = Registry::with_primitives();
        let ord = derive_bundle(&s, "Nat", &[], Concept::Ord, &mut reg).unwrap();
        for n in 0..6 {
            assert!(ord.leq(&reg, &nat(0), &nat(n)).unwrap());
        }
        assert!(ord.leq(&reg, &nat(0), &nat(1)).unwrap());
        assert!(!ord.leq(&reg, &nat(2), &nat(1)).unwrap());
    }

    #[test]
    fn triple_ord_is_lexicographic() {
        let s = Schema::with_builtins();
        let mut reg = Registry::with_primitives();
        let args = [int(), int(), int()];
        let ord = derive_bundle(&s, "Triple", &args, Concept::Ord, &mut reg).unwrap();
        assert!(!ord.leq(&reg, &triple(1, 5, 2), &triple(1, 4, 9)).unwrap());
        assert!(ord.leq(&reg, &triple(1, 4, 9), &triple(1, 5, 2)).unwrap());
    }

    #[test]
    fn semigroup_and_monoid_on_products() {
        let s = Schema::with_builtins();
        let mut reg = Registry::with_primitives();
        let args = [int(), int(), int()];
        let sg = derive_bundle(&s, "Triple", &args, Concept::Semigroup, &mut reg).unwrap();
        assert_eq!(sg.combine(&reg, &triple(1, 2, 3), &triple(4, 5, 6)).unwrap(), triple(5, 7, 9));
        let mon = derive_bundle(&s, "Triple", &args, Concept::Monoid, &mut reg).unwrap();
        assert_eq!(mon.empty(&reg).unwrap(), triple(0, 0, 0));
        assert!(sg.empty(&reg).is_err());

        let id = derive_bundle(&s, "Identity", &[int()], Concept::Semigroup, &mut reg).unwrap();
        let ident = |i| Value::con("Identity", "Identity", vec![Value::Int(i)]);
        assert_eq!(id.combine(&reg, &ident(2), &ident(3)).unwrap(), ident(5));
    }

    #[test]
    fn sums_are_refused_for_semigroup_and_monoid() {
        let s = parse_schema("data U0 = U0\ndata Wrap = Wrap (Maybe Int)").unwrap();
        let mut reg = Registry::with_primitives();
        let before = reg.len();
        for (name, args) in [("Maybe", vec![int()]), ("List", vec![int()]), ("Either", vec![int(), int()])] {
            for c in [Concept::Semigroup, Concept::Monoid] {
                let e = derive_bundle(&s, name, &args, c, &mut reg).unwrap_err();
                assert!(e.is_unsupported(), "{name} {c}: {e}");
            }
        }
        // Propagates from a sum-shaped field, and leaves the registry as it was.
        assert!(derive_bundle(&s, "Wrap", &[], Concept::Semigroup, &mut reg).unwrap_err().is_unsupported());
        assert_eq!(reg.len(), before);
        // A single nullary constructor is U1, not a sum.
        let u = derive_bundle(&s, "U0", &[], Concept::Monoid, &mut reg).unwrap();
        assert_eq!(u.empty(&reg).unwrap(), Value::con("U0", "U0", vec![]));
    }

    #[test]
    fn missing_primitive_semigroup_is_reported() {
        let s = parse_schema("data D = D Double").unwrap();
        let mut reg = Registry::with_primitives();
        assert!(matches!(
            derive_bundle(&s, "D", &[], Concept::Semigroup, &mut reg),
            Err(DeriveError::MissingInstance { concept: Concept::Semigroup, .. })
        ));
    }

    #[test]
    fn functor_examples() {
        let s = parse_schema("data Phantom a = Phantom Int").unwrap();
        let mut reg = Registry::with_primitives();
        let f = int_succ();
        let ph = derive_bundle(&s, "Phantom", &[], Concept::Functor, &mut reg).unwrap();
        let p5 = Value::con("Phantom", "Phantom", vec![Value::Int(5)]);
        assert_eq!(ph.fmap(&reg, &f, &p5).unwrap(), p5);

        let id = derive_bundle(&s, "Identity", &[], Concept::Functor, &mut reg).unwrap();
        let ident = |i| Value::con("Identity", "Identity", vec![Value::Int(i)]);
        assert_eq!(id.fmap(&reg, &f, &ident(3)).unwrap(), ident(4));

        let list = derive_bundle(&s, "List", &[], Concept::Functor, &mut reg).unwrap();
        assert_eq!(list.fmap(&reg, &f, &list_val(&[1, 2])).unwrap(), list_val(&[2, 3]));

        let either = derive_bundle(&s, "Either", &[int()], Concept::Functor, &mut reg).unwrap();
        let l = Value::con("Either", "L", vec![Value::Int(1)]);
        let r = Value::con("Either", "R", vec![Value::Int(1)]);
        assert_eq!(either.fmap(&reg, &f, &l).unwrap(), l);
        assert_eq!(either.fmap(&reg, &f, &r).unwrap(), Value::con("Either", "R", vec![Value::Int(2)]));
    }

    #[test]
    fn functor_through_composition() {
        let s = parse_schema("data T a = MkT Int a (Maybe a) (List (List a))").unwrap();
        let mut reg = Registry::with_primitives();
        let t = derive_bundle(&s, "T", &[], Concept::Functor, &mut reg).unwrap();
        assert!(reg.contains(Concept::Functor, &TypeExpr::named("Maybe", vec![])));
        assert!(reg.contains(Concept::Functor, &TypeExpr::named("List", vec![])));
        let ll = Value::con("List", "Cons", vec![list_val(&[1, 2]), list_val(&[])]);
        let v = Value::con(
            "T",
            "MkT",
            vec![Value::Int(7), Value::Int(0), Value::con("Maybe", "Just", vec![Value::Int(4)]), ll],
        );
        let mapped = t.fmap(&reg, &int_succ(), &v).unwrap();
        let ll2 = Value::con("List", "Cons", vec![list_val(&[2, 3]), list_val(&[])]);
        let expected = Value::con(
            "T",
            "MkT",
            vec![Value::Int(7), Value::Int(1), Value::con("Maybe", "Just", vec![Value::Int(5)]), ll2],
        );
        assert_eq!(mapped, expected);
    }

    #[test]
    fn functor_errors() {
        let s = parse_schema("data W a = MkW (Either a Int)").unwrap();
        let mut reg = Registry::with_primitives();
        assert!(matches!(
            derive_bundle(&s, "W", &[], Concept::Functor, &mut reg),
            Err(DeriveError::Rep(RepError::UnsupportedOccurrence { .. }))
        ));
        assert!(derive_bundle(&s, "Nat", &[], Concept::Functor, &mut reg).is_err());
        let list = derive_bundle(&s, "List", &[], Concept::Functor, &mut reg).unwrap();
        let not_bool = FnRef::new("not", PrimType::Bool, PrimType::Bool, vec![]);
        assert!(matches!(list.fmap(&reg, &not_bool, &list_val(&[1])), Err(DeriveError::OutsideDomain { .. })));
    }

    #[test]
    fn fnref_composition() {
        let wrap = FnRef::new(
            "succ",
            PrimType::Int,
            PrimType::Int,
            (0..5).map(|i| (Value::Int(i), Value::Int((i + 1) % 5))).collect(),
        );
        let ww = wrap.compose(&wrap).unwrap();
        assert_eq!(ww.name, "succ.succ");
        assert_eq!(ww.apply(&Value::Int(4)).unwrap(), Value::Int(1));
        // 9 maps to 10, which is outside the table
        let f = int_succ();
        assert!(matches!(f.compose(&f), Err(DeriveError::OutsideDomain { .. })));
        let g = FnRef::new("b2i", PrimType::Bool, PrimType::Int, vec![(Value::Bool(true), Value::Int(1))]);
        assert!(g.compose(&f).is_err());
        assert_eq!(f.compose(&g).unwrap().apply(&Value::Bool(true)).unwrap(), Value::Int(2));
    }

    #[test]
    fn monoid_refused_on_infinite_identity() {
        let s = crate::parser::parse_schema("data S = MkS Int S\ndata Wrap = Wrap S\ndata Fin = Fin Int Unit").unwrap();
        let mut reg = Registry::with_primitives();
        for name in ["S", "Wrap"] {
            let e = derive_bundle(&s, name, &[], Concept::Monoid, &mut reg).unwrap_err();
            assert!(e.is_unsupported(), "{name}: {e}");
            derive_bundle(&s, name, &[], Concept::Semigroup, &mut reg).unwrap();
        }
        let fin = derive_bundle(&s, "Fin", &[], Concept::Monoid, &mut reg).unwrap();
        assert_eq!(fin.empty(&reg).unwrap().to_string(), "Fin 0 ()");
    }

    #[test]
    fn left_recursive_comparison() {
        let s = crate::parser::parse_schema("data L = Leaf | Node L Int").unwrap();
        let mut reg = Registry::with_primitives();
        let ord = derive_bundle(&s, "L", &[], Concept::Ord, &mut reg).unwrap();
        let build = |last: i64| {
            (0..400).fold(Value::con("L", "Leaf", vec![]), |acc, i| {
                Value::con("L", "Node", vec![acc, Value::Int(if i == 0 { last } else { 0 })])
            })
        };
        let (lo, hi) = (build(1), build(2));
        assert!(ord.leq(&reg, &lo, &hi).unwrap());
        assert!(!ord.leq(&reg, &hi, &lo).unwrap());
        assert!(!ord.eq(&reg, &lo, &hi).unwrap());
        assert!(ord.leq(&reg, &lo, &lo).unwrap());
    }

    #[test]
    fn nested_datatypes_terminate() {
        let s = crate::parser::parse_schema("data N a = N0 | N1 a (N (Maybe a))").unwrap();
        let mut reg = Registry::with_primitives();
        let before = reg.len();
        let e = derive_bundle(&s, "N", &[int()], Concept::Eq, &mut reg).unwrap_err();
        assert!(e.is_unsupported(), "{e}");
        assert_eq!(reg.len(), before);
        let f = derive_bundle(&s, "N", &[], Concept::Functor, &mut reg).unwrap();
        let v = Value::con(
            "N",
            "N1",
            vec![
                Value::Int(1),
                Value::con(
                    "N",
                    "N1",
                    vec![Value::con("Maybe", "Just", vec![Value::Int(2)]), Value::con("N", "N0", vec![])],
                ),
            ],
        );
        assert_eq!(f.fmap(&reg, &int_succ(), &v).unwrap().to_string(), "N1 2 (N1 (Just 3) N0)");
    }

    #[test]
    fn registry_rejects_duplicates() {
        let mut reg = Registry::with_primitives();
        let b = reg.get(Concept::Eq, &int()).unwrap().clone();
        assert!(matches!(reg.register(b), Err(DeriveError::Duplicate { .. })));
    }

    #[test]
    fn recursive_types_reference_their_own_bundle() {
        let s = Schema::with_builtins();
        let mut reg = Registry::with_primitives();
        let list_int = TypeExpr::named("List", vec![int()]);
        let ord = derive_bundle(&s, "List", &[int()], Concept::Ord, &mut reg).unwrap();
        assert!(reg.contains(Concept::Eq, &list_int));
        assert!(ord.leq(&reg, &list_val(&[]), &list_val(&[0])).unwrap());
        assert!(ord.leq(&reg, &list_val(&[1, 2]), &list_val(&[1, 3])).unwrap());
        assert!(!ord.leq(&reg, &list_val(&[2]), &list_val(&[1, 3])).unwrap());
        assert!(!ord.leq(&reg, &list_val(&[1, 3]), &list_val(&[1])).unwrap());
    }
}
