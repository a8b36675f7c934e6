//! Algebraic data type declarations and their validation.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Primitive field types. Each one has a finite check-time domain configured
/// in [`crate::laws::DomainConfig`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PrimType {
    Int,
    Bool,
    Char,
    Double,
    Unit,
}

impl PrimType {
    pub const ALL: [PrimType; 5] = [PrimType::Int, PrimType::Bool, PrimType::Char, PrimType::Double, PrimType::Unit];

    pub fn name(self) -> &'static str {
        match self {
            PrimType::Int => "Int",
            PrimType::Bool => "Bool",
            PrimType::Char => "Char",
            PrimType::Double => "Double",
            PrimType::Unit => "Unit",
        }
    }

    pub fn from_name(name: &str) -> Option<PrimType> {
        PrimType::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for PrimType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A field type: a primitive, a parameter of the enclosing declaration, or
/// a (possibly applied) declared type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Prim(PrimType),
    Param(usize),
    Named(String, Vec<TypeExpr>),
}

impl TypeExpr {
    pub fn named(name: impl Into<String>, args: Vec<TypeExpr>) -> TypeExpr {
        TypeExpr::Named(name.into(), args)
    }

    pub fn int() -> TypeExpr {
        TypeExpr::Prim(PrimType::Int)
    }

    pub fn bool() -> TypeExpr {
        TypeExpr::Prim(PrimType::Bool)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            TypeExpr::Prim(_) => true,
            TypeExpr::Param(_) => false,
            TypeExpr::Named(_, args) => args.iter().all(TypeExpr::is_ground),
        }
    }

    /// True if `Param(index)` occurs anywhere inside.
    pub fn mentions(&self, index: usize) -> bool {
        match self {
            TypeExpr::Prim(_) => false,
            TypeExpr::Param(i) => *i == index,
            TypeExpr::Named(_, args) => args.iter().any(|a| a.mentions(index)),
        }
    }

    /// Head name of the type: the primitive name or the declared name.
    pub fn head(&self) -> String {
        match self {
            TypeExpr::Prim(p) => p.name().to_string(),
            TypeExpr::Param(i) => param_letter(*i),
            TypeExpr::Named(n, _) => n.clone(),
        }
    }

    /// Arguments of a `Named` type, empty otherwise.
    pub fn args(&self) -> &[TypeExpr] {
        match self {
            TypeExpr::Named(_, args) => args,
            _ => &[],
        }
    }

    fn is_atomic(&self) -> bool {
        !matches!(self, TypeExpr::Named(_, args) if !args.is_empty())
    }

    /// Renders the type in argument position (parenthesized if applied).
    pub fn atom(&self) -> String {
        if self.is_atomic() {
            self.to_string()
        } else {
            format!("({self})")
        }
    }

    /// Renders the type with the given parameter names.
    pub fn render_with(&self, params: &[String]) -> String {
        match self {
            TypeExpr::Prim(p) => p.name().to_string(),
            TypeExpr::Param(i) => params.get(*i).cloned().unwrap_or_else(|| param_letter(*i)),
            TypeExpr::Named(n, args) => {
                let mut out = n.clone();
                for a in args {
                    out.push(' ');
                    if a.is_atomic() {
                        out.push_str(&a.render_with(params));
                    } else {
                        out.push('(');
                        out.push_str(&a.render_with(params));
                        out.push(')');
                    }
                }
                out
            }
        }
    }
}

/// Canonical name for an unnamed parameter: `a`, `b`, ... `z`, `a26`, ...
pub fn param_letter(index: usize) -> String {
    if index < 26 {
        char::from(b'a' + index as u8).to_string()
    } else {
        format!("a{index}")
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&[]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructorDecl {
    pub name: String,
    pub fields: Vec<TypeExpr>,
}

impl ConstructorDecl {
    pub fn new(name: impl Into<String>, fields: Vec<TypeExpr>) -> Self {
        ConstructorDecl { name: name.into(), fields }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDecl {
    pub name: String,
    /// Parameter names; only their count and order matter semantically.
    pub params: Vec<String>,
    pub constructors: Vec<ConstructorDecl>,
}

impl DataDecl {
    pub fn new(name: impl Into<String>, params: Vec<String>, constructors: Vec<ConstructorDecl>) -> Self {
        DataDecl { name: name.into(), params, constructors }
    }

    /// A declaration whose parameters are named `a`, `b`, ... by position.
    pub fn with_arity(name: impl Into<String>, arity: usize, constructors: Vec<ConstructorDecl>) -> Self {
        DataDecl::new(name, (0..arity).map(param_letter).collect(), constructors)
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn constructor(&self, name: &str) -> Option<(usize, &ConstructorDecl)> {
        self.constructors.iter().enumerate().find(|(_, c)| c.name == name)
    }

    /// Renders the declaration in the `.adt` surface syntax.
    pub fn pretty(&self) -> String {
        let mut out = format!("data {}", self.name);
        for p in &self.params {
            out.push(' ');
            out.push_str(p);
        }
        for (i, c) in self.constructors.iter().enumerate() {
            out.push_str(if i == 0 { " = " } else { " | " });
            out.push_str(&c.name);
            for f in &c.fields {
                out.push(' ');
                let text = f.render_with(&self.params);
                if f.is_atomic() {
                    out.push_str(&text);
                } else {
                    out.push('(');
                    out.push_str(&text);
                    out.push(')');
                }
            }
        }
        out
    }
}

/// Names of the preloaded declarations, in schema order.
pub const BUILTIN_NAMES: [&str; 7] = ["Identity", "Maybe", "Either", "List", "Triple", "Nat", "B"];

fn builtin_decls() -> Vec<DataDecl> {
    use TypeExpr::{Named, Param};
    let c = ConstructorDecl::new;
    vec![
        DataDecl::with_arity("Identity", 1, vec![c("Identity", vec![Param(0)])]),
        DataDecl::with_arity("Maybe", 1, vec![c("Nothing", vec![]), c("Just", vec![Param(0)])]),
        DataDecl::with_arity("Either", 2, vec![c("L", vec![Param(0)]), c("R", vec![Param(1)])]),
        DataDecl::with_arity(
            "List",
            1,
            vec![c("Nil", vec![]), c("Cons", vec![Param(0), Named("List".into(), vec![Param(0)])])],
        ),
        DataDecl::with_arity("Triple", 3, vec![c("MkTriple", vec![Param(0), Param(1), Param(2)])]),
        DataDecl::with_arity("Nat", 0, vec![c("Zero", vec![]), c("Suc", vec![Named("Nat".into(), vec![])])]),
        DataDecl::with_arity("B", 0, vec![c("B1", vec![TypeExpr::int()]), c("B2", vec![TypeExpr::int()])]),
    ]
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("type `{0}` is already declared")]
    DuplicateDecl(String),
    #[error("type `{0}` shadows a primitive type")]
    ShadowsPrimitive(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("parameter index {index} out of range for {len} ground argument(s)")]
    ParamOutOfRange { index: usize, len: usize },
    #[error("type `{name}` expects {expected} argument(s), got {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("type `{0}` is not ground")]
    NotGround(String),
}

/// A name-indexed, order-preserving collection of declarations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    decls: IndexMap<String, DataDecl>,
    builtin_count: usize,
}

impl Default for Schema {
    fn default() -> Self {
        Schema::with_builtins()
    }
}

impl Schema {
    /// A schema with no declarations at all, not even the built-ins.
    pub fn empty() -> Schema {
        Schema { decls: IndexMap::new(), builtin_count: 0 }
    }

    pub fn with_builtins() -> Schema {
        let mut s = Schema::empty();
        for d in builtin_decls() {
            s.insert(d).expect("built-in declarations are distinct");
        }
        s.builtin_count = s.decls.len();
        s
    }

    pub fn insert(&mut self, decl: DataDecl) -> Result<(), SchemaError> {
        if PrimType::from_name(&decl.name).is_some() {
            return Err(SchemaError::ShadowsPrimitive(decl.name));
        }
        if self.decls.contains_key(&decl.name) {
            return Err(SchemaError::DuplicateDecl(decl.name));
        }
        self.decls.insert(decl.name.clone(), decl);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&DataDecl> {
        self.decls.get(name)
    }

    pub fn decl(&self, name: &str) -> Result<&DataDecl, SchemaError> {
        self.get(name).ok_or_else(|| SchemaError::UnknownType(name.to_string()))
    }

    pub fn is_builtin(&self, name: &str) -> bool {
        self.decls.get_index_of(name).is_some_and(|i| i < self.builtin_count)
    }

    /// All declarations in declaration order, built-ins first.
    pub fn decls(&self) -> impl Iterator<Item = &DataDecl> {
        self.decls.values()
    }

    /// Declarations added after the built-ins.
    pub fn user_decls(&self) -> impl Iterator<Item = &DataDecl> {
        self.decls.values().skip(self.builtin_count)
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    /// Pretty-prints the user declarations, one per line.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for d in self.user_decls() {
            out.push_str(&d.pretty());
            out.push('\n');
        }
        out
    }

    /// Checks that `ty` is ground and every name in it resolves with the
    /// right arity.
    pub fn check_ground(&self, ty: &TypeExpr) -> Result<(), SchemaError> {
        match ty {
            TypeExpr::Prim(_) => Ok(()),
            TypeExpr::Param(_) => Err(SchemaError::NotGround(ty.to_string())),
            TypeExpr::Named(name, args) => {
                let decl = self.decl(name)?;
                if decl.param_count() != args.len() {
                    return Err(SchemaError::Arity {
                        name: name.clone(),
                        expected: decl.param_count(),
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_ground(a))
            }
        }
    }
}

/// Where in a schema a diagnostic applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub decl: usize,
    pub constructor: Option<usize>,
    pub field: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    UnresolvedName { name: String },
    ArityMismatch { name: String, expected: usize, found: usize },
    ParamOutOfRange { index: usize, param_count: usize },
    DuplicateConstructor { name: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub decl_name: String,
    pub location: Location,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DiagnosticKind::UnresolvedName { name } => {
                write!(f, "in `{}`: unresolved type name `{name}`", self.decl_name)
            }
            DiagnosticKind::ArityMismatch { name, expected, found } => {
                write!(f, "in `{}`: type `{name}` expects {expected} argument(s), got {found}", self.decl_name)
            }
            DiagnosticKind::ParamOutOfRange { index, param_count } => {
                write!(f, "in `{}`: parameter #{index} out of range (declaration has {param_count})", self.decl_name)
            }
            DiagnosticKind::DuplicateConstructor { name } => {
                write!(f, "in `{}`: duplicate constructor `{name}`", self.decl_name)
            }
        }
    }
}

/// Returns one diagnostic per violation, in declaration, constructor, then
/// field order. An empty result means the schema is valid.
pub fn validate(schema: &Schema) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (di, decl) in schema.decls().enumerate() {
        for (ci, ctor) in decl.constructors.iter().enumerate() {
            if decl.constructors[..ci].iter().any(|c| c.name == ctor.name) {
                out.push(Diagnostic {
                    kind: DiagnosticKind::DuplicateConstructor { name: ctor.name.clone() },
                    decl_name: decl.name.clone(),
                    location: Location { decl: di, constructor: Some(ci), field: None },
                });
            }
            for (fi, field) in ctor.fields.iter().enumerate() {
                let location = Location { decl: di, constructor: Some(ci), field: Some(fi) };
                audit_type(schema, decl, field, &location, &mut out);
            }
        }
    }
    out
}

fn audit_type(schema: &Schema, decl: &DataDecl, ty: &TypeExpr, location: &Location, out: &mut Vec<Diagnostic>) {
    let push = |kind, out: &mut Vec<Diagnostic>| {
        out.push(Diagnostic { kind, decl_name: decl.name.clone(), location: location.clone() })
    };
    match ty {
        TypeExpr::Prim(_) => {}
        TypeExpr::Param(i) => {
            if *i >= decl.param_count() {
                push(DiagnosticKind::ParamOutOfRange { index: *i, param_count: decl.param_count() }, out);
            }
        }
        TypeExpr::Named(name, args) => {
            match schema.get(name) {
                None => push(DiagnosticKind::UnresolvedName { name: name.clone() }, out),
                Some(target) if target.param_count() != args.len() => push(
                    DiagnosticKind::ArityMismatch {
                        name: name.clone(),
                        expected: target.param_count(),
                        found: args.len(),
                    },
                    out,
                ),
                Some(_) => {}
            }
            for a in args {
                audit_type(schema, decl, a, location, out);
            }
        }
    }
}

/// Substitutes `args[i]` for every `Param(i)` in `expr`.
pub fn instantiate(expr: &TypeExpr, args: &[TypeExpr]) -> Result<TypeExpr, SchemaError> {
    match expr {
        TypeExpr::Prim(p) => Ok(TypeExpr::Prim(*p)),
        TypeExpr::Param(i) => args.get(*i).cloned().ok_or(SchemaError::ParamOutOfRange { index: *i, len: args.len() }),
        TypeExpr::Named(n, es) => {
            Ok(TypeExpr::Named(n.clone(), es.iter().map(|e| instantiate(e, args)).collect::<Result<_, _>>()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builtins_are_valid() {
        assert!(validate(&Schema::with_builtins()).is_empty());
    }

    #[test]
    fn param_out_of_range_is_reported() {
        let mut s = Schema::with_builtins();
        s.insert(DataDecl::with_arity(
            "X",
            0,
            vec![ConstructorDecl::new("MkX", vec![TypeExpr::named("Maybe", vec![TypeExpr::Param(0)])])],
        ))
        .unwrap();
        let diags = validate(&s);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::ParamOutOfRange { index: 0, param_count: 0 });
        assert_eq!(diags[0].location.field, Some(0));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let mut s = Schema::with_builtins();
        s.insert(DataDecl::with_arity(
            "Y",
            0,
            vec![ConstructorDecl::new("MkY", vec![TypeExpr::named("List", vec![TypeExpr::int(), TypeExpr::int()])])],
        ))
        .unwrap();
        let diags = validate(&s);
        assert_eq!(
            diags.iter().map(|d| d.kind.clone()).collect::<Vec<_>>(),
            vec![DiagnosticKind::ArityMismatch { name: "List".into(), expected: 1, found: 2 }]
        );
    }

    #[test]
    fn diagnostics_follow_declaration_order() {
        let mut s = Schema::empty();
        s.insert(DataDecl::with_arity(
            "P",
            0,
            vec![
                ConstructorDecl::new("A", vec![TypeExpr::named("Nope", vec![])]),
                ConstructorDecl::new("A", vec![TypeExpr::Param(3)]),
            ],
        ))
        .unwrap();
        s.insert(DataDecl::with_arity(
            "Q",
            0,
            vec![ConstructorDecl::new("C", vec![TypeExpr::named("P", vec![TypeExpr::int()])])],
        ))
        .unwrap();
        let kinds: Vec<_> = validate(&s).into_iter().map(|d| d.kind).collect();
        assert_eq!(
            kinds,
            vec![
                DiagnosticKind::UnresolvedName { name: "Nope".into() },
                DiagnosticKind::DuplicateConstructor { name: "A".into() },
                DiagnosticKind::ParamOutOfRange { index: 3, param_count: 0 },
                DiagnosticKind::ArityMismatch { name: "P".into(), expected: 0, found: 1 },
            ]
        );
    }

    #[test]
    fn insert_rejects_duplicates_and_primitive_names() {
        let mut s = Schema::with_builtins();
        assert_eq!(s.insert(DataDecl::with_arity("List", 0, vec![])), Err(SchemaError::DuplicateDecl("List".into())));
        assert_eq!(s.insert(DataDecl::with_arity("Int", 0, vec![])), Err(SchemaError::ShadowsPrimitive("Int".into())));
    }

    #[test]
    fn instantiate_examples() {
        assert_eq!(instantiate(&TypeExpr::Param(0), &[TypeExpr::int()]), Ok(TypeExpr::int()));
        assert_eq!(
            instantiate(&TypeExpr::named("List", vec![TypeExpr::Param(0)]), &[TypeExpr::bool()]),
            Ok(TypeExpr::named("List", vec![TypeExpr::bool()]))
        );
        assert_eq!(instantiate(&TypeExpr::int(), &[TypeExpr::Prim(PrimType::Char)]), Ok(TypeExpr::int()));
        assert_eq!(
            instantiate(&TypeExpr::Param(1), &[TypeExpr::int()]),
            Err(SchemaError::ParamOutOfRange { index: 1, len: 1 })
        );
    }

    #[test]
    fn valid_schema_passes_structural_audit() {
        let s = Schema::with_builtins();
        for d in s.decls() {
            for c in &d.constructors {
                for f in &c.fields {
                    audit_expr(&s, d, f);
                }
            }
        }
        fn audit_expr(s: &Schema, d: &DataDecl, e: &TypeExpr) {
            match e {
                TypeExpr::Prim(_) => {}
                TypeExpr::Param(i) => assert!(*i < d.param_count()),
                TypeExpr::Named(n, args) => {
                    assert_eq!(s.get(n).unwrap().param_count(), args.len());
                    args.iter().for_each(|a| audit_expr(s, d, a));
                }
            }
        }
    }

    fn arb_type(depth: u32) -> impl Strategy<Value = TypeExpr> {
        let leaf = prop_oneof![
            prop::sample::select(PrimType::ALL.to_vec()).prop_map(TypeExpr::Prim),
            (0usize..3).prop_map(TypeExpr::Param),
        ];
        leaf.prop_recursive(depth, 16, 3, |inner| {
            (prop::sample::select(vec!["List", "Maybe", "Either"]), prop::collection::vec(inner, 0..3))
                .prop_map(|(n, args)| TypeExpr::named(n, args))
        })
    }

    fn arb_ground(depth: u32) -> impl Strategy<Value = TypeExpr> {
        let leaf = prop::sample::select(PrimType::ALL.to_vec()).prop_map(TypeExpr::Prim);
        leaf.prop_recursive(depth, 16, 3, |inner| {
            (prop::sample::select(vec!["List", "Maybe"]), prop::collection::vec(inner, 0..3))
                .prop_map(|(n, args)| TypeExpr::named(n, args))
        })
    }

    proptest! {
        #[test]
        fn instantiate_fixes_ground_types(g in arb_ground(3), args in prop::collection::vec(arb_ground(2), 0..3)) {
            prop_assert_eq!(instantiate(&g, &args), Ok(g.clone()));
        }

        #[test]
        fn instantiate_commutes_with_application(
            es in prop::collection::vec(arb_type(2), 0..4),
            args in prop::collection::vec(arb_ground(2), 3..4),
        ) {
            let whole = instantiate(&TypeExpr::named("F", es.clone()), &args).unwrap();
            let parts: Vec<_> = es.iter().map(|e| instantiate(e, &args).unwrap()).collect();
            prop_assert!(whole.is_ground());
            prop_assert_eq!(whole, TypeExpr::named("F", parts));
        }
    }
}
