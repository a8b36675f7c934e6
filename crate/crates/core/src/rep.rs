//! Representation types and the conversions between source values and
//! their generic representations.
//!
//! Constructors fold into a right-nested sum in declaration order and the
//! fields of each constructor into a right-nested product. Metadata
//! wrappers are not represented.

use std::fmt;

use thiserror::Error;

use crate::schema::{instantiate, DataDecl, SchemaError, TypeExpr};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RepShape {
    /// No constructors.
    V1,
    /// A constructor without fields.
    U1,
    /// A field stored as-is.
    K1(TypeExpr),
    /// A direct occurrence of the distinguished parameter.
    Par1,
    /// The distinguished parameter as the final argument of a type
    /// application, e.g. `List a`.
    Rec1 {
        name: String,
        prefix: Vec<TypeExpr>,
    },
    /// An application whose final argument itself contains the parameter,
    /// e.g. `List (List a)`.
    Comp1 {
        name: String,
        prefix: Vec<TypeExpr>,
        inner: Box<RepShape>,
    },
    Sum(Box<RepShape>, Box<RepShape>),
    Prod(Box<RepShape>, Box<RepShape>),
}

impl RepShape {
    pub fn sum(l: RepShape, r: RepShape) -> RepShape {
        RepShape::Sum(Box::new(l), Box::new(r))
    }

    pub fn prod(l: RepShape, r: RepShape) -> RepShape {
        RepShape::Prod(Box::new(l), Box::new(r))
    }

    pub fn rec1(name: impl Into<String>, prefix: Vec<TypeExpr>) -> RepShape {
        RepShape::Rec1 { name: name.into(), prefix }
    }

    pub fn comp1(name: impl Into<String>, prefix: Vec<TypeExpr>, inner: RepShape) -> RepShape {
        RepShape::Comp1 { name: name.into(), prefix, inner: Box::new(inner) }
    }

    /// True if a `Sum` or `V1` node occurs anywhere in the shape.
    pub fn has_sum_or_void(&self) -> bool {
        match self {
            RepShape::V1 | RepShape::Sum(..) => true,
            RepShape::Prod(l, r) => l.has_sum_or_void() || r.has_sum_or_void(),
            RepShape::Comp1 { inner, .. } => inner.has_sum_or_void(),
            _ => false,
        }
    }

    pub fn count_sums(&self) -> usize {
        match self {
            RepShape::Sum(l, r) => 1 + l.count_sums() + r.count_sums(),
            RepShape::Prod(l, r) => l.count_sums() + r.count_sums(),
            _ => 0,
        }
    }

    pub fn count_prods(&self) -> usize {
        match self {
            RepShape::Sum(l, r) => l.count_prods() + r.count_prods(),
            RepShape::Prod(l, r) => 1 + l.count_prods() + r.count_prods(),
            _ => 0,
        }
    }

    /// Whether any `Par1`, `Rec1` or `Comp1` node occurs.
    pub fn mentions_parameter(&self) -> bool {
        match self {
            RepShape::Par1 | RepShape::Rec1 { .. } | RepShape::Comp1 { .. } => true,
            RepShape::Sum(l, r) | RepShape::Prod(l, r) => l.mentions_parameter() || r.mentions_parameter(),
            _ => false,
        }
    }

    /// Every `Sum` and `Prod` left child is not itself a `Sum` / `Prod`.
    pub fn is_right_nested(&self) -> bool {
        match self {
            RepShape::Sum(l, r) => !matches!(**l, RepShape::Sum(..)) && l.is_right_nested() && r.is_right_nested(),
            RepShape::Prod(l, r) => !matches!(**l, RepShape::Prod(..)) && l.is_right_nested() && r.is_right_nested(),
            RepShape::Comp1 { inner, .. } => inner.is_right_nested(),
            _ => true,
        }
    }

    /// Substitutes ground arguments for the parameters left symbolic in a
    /// `Rep1` shape (those in `K1` payloads and `Rec1`/`Comp1` prefixes).
    pub fn instantiate(&self, args: &[TypeExpr]) -> Result<RepShape, SchemaError> {
        let inst_all = |ts: &[TypeExpr]| -> Result<Vec<TypeExpr>, SchemaError> {
            ts.iter().map(|t| instantiate(t, args)).collect()
        };
        Ok(match self {
            RepShape::V1 => RepShape::V1,
            RepShape::U1 => RepShape::U1,
            RepShape::Par1 => RepShape::Par1,
            RepShape::K1(t) => RepShape::K1(instantiate(t, args)?),
            RepShape::Rec1 { name, prefix } => RepShape::rec1(name.clone(), inst_all(prefix)?),
            RepShape::Comp1 { name, prefix, inner } => {
                RepShape::comp1(name.clone(), inst_all(prefix)?, inner.instantiate(args)?)
            }
            RepShape::Sum(l, r) => RepShape::sum(l.instantiate(args)?, r.instantiate(args)?),
            RepShape::Prod(l, r) => RepShape::prod(l.instantiate(args)?, r.instantiate(args)?),
        })
    }

    /// Shape of the constructor at `index` out of `count`.
    fn constructor_shape(&self, index: usize, count: usize) -> Option<&RepShape> {
        let mut shape = self;
        let mut remaining = count;
        let mut k = index;
        loop {
            if remaining == 1 {
                return (k == 0).then_some(shape);
            }
            match shape {
                RepShape::Sum(l, r) => {
                    if k == 0 {
                        return Some(l);
                    }
                    shape = r;
                    k -= 1;
                    remaining -= 1;
                }
                _ => return None,
            }
        }
    }
}

fn head_text(name: &str, prefix: &[TypeExpr]) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("({})", TypeExpr::Named(name.to_string(), prefix.to_vec()))
    }
}

impl fmt::Display for RepShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepShape::V1 => f.write_str("V1"),
            RepShape::U1 => f.write_str("U1"),
            RepShape::K1(t) => write!(f, "K1 {}", t.atom()),
            RepShape::Par1 => f.write_str("Par1"),
            RepShape::Rec1 { name, prefix } => write!(f, "Rec1 {}", head_text(name, prefix)),
            RepShape::Comp1 { name, prefix, inner } => {
                write!(f, "Comp1 {} ({inner})", head_text(name, prefix))
            }
            RepShape::Sum(l, r) => write!(f, "({l} :+: {r})"),
            RepShape::Prod(l, r) => write!(f, "({l} :*: {r})"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("`{0}` has no type parameters, so it has no Rep1")]
    ParamCount(String),
    #[error(
        "in `{decl}`, constructor `{constructor}`: the last parameter occurs in a non-final \
         argument of `{field}`, which Rep1 cannot represent"
    )]
    UnsupportedOccurrence { decl: String, constructor: String, field: String },
    #[error("`{decl}` expects {expected} ground argument(s), got {found}")]
    ArgCount { decl: String, expected: usize, found: usize },
    #[error("`{value}` is not a value of `{decl}`")]
    NotOfType { decl: String, value: String },
    #[error("`{0}` does not conform to the representation shape")]
    NonConforming(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

fn fold_right(mut items: Vec<RepShape>, empty: RepShape, node: fn(RepShape, RepShape) -> RepShape) -> RepShape {
    let Some(mut acc) = items.pop() else {
        return empty;
    };
    while let Some(item) = items.pop() {
        acc = node(item, acc);
    }
    acc
}

fn skeleton(
    decl: &DataDecl,
    mut leaf: impl FnMut(&str, &TypeExpr) -> Result<RepShape, RepError>,
) -> Result<RepShape, RepError> {
    let mut ctors = Vec::with_capacity(decl.constructors.len());
    for c in &decl.constructors {
        let fields = c.fields.iter().map(|f| leaf(&c.name, f)).collect::<Result<Vec<_>, _>>()?;
        ctors.push(fold_right(fields, RepShape::U1, RepShape::prod));
    }
    Ok(fold_right(ctors, RepShape::V1, RepShape::sum))
}

/// The representation of `decl` applied to ground arguments.
pub fn build_rep(decl: &DataDecl, args: &[TypeExpr]) -> Result<RepShape, RepError> {
    if args.len() != decl.param_count() {
        return Err(RepError::ArgCount { decl: decl.name.clone(), expected: decl.param_count(), found: args.len() });
    }
    skeleton(decl, |_, f| Ok(RepShape::K1(instantiate(f, args)?)))
}

/// The representation of `decl` as a type constructor over its last
/// parameter. Earlier parameters stay symbolic; see
/// [`RepShape::instantiate`].
pub fn build_rep1(decl: &DataDecl) -> Result<RepShape, RepError> {
    let Some(last) = decl.param_count().checked_sub(1) else {
        return Err(RepError::ParamCount(decl.name.clone()));
    };
    skeleton(decl, |ctor, f| {
        classify(f, last).ok_or_else(|| RepError::UnsupportedOccurrence {
            decl: decl.name.clone(),
            constructor: ctor.to_string(),
            field: f.render_with(&decl.params),
        })
    })
}

fn classify(field: &TypeExpr, last: usize) -> Option<RepShape> {
    if !field.mentions(last) {
        return Some(RepShape::K1(field.clone()));
    }
    match field {
        TypeExpr::Param(_) => Some(RepShape::Par1),
        TypeExpr::Named(name, args) => {
            let (final_arg, prefix) = args.split_last()?;
            if prefix.iter().any(|a| a.mentions(last)) {
                return None;
            }
            if *final_arg == TypeExpr::Param(last) {
                Some(RepShape::rec1(name.clone(), prefix.to_vec()))
            } else {
                Some(RepShape::comp1(name.clone(), prefix.to_vec(), classify(final_arg, last)?))
            }
        }
        TypeExpr::Prim(_) => unreachable!("primitives mention no parameter"),
    }
}

/// A value of a representation type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GValue {
    U1,
    K1(Value),
    Par1(Value),
    /// The whole `f a` sub-structure, unconverted.
    Rec1(Value),
    /// The whole outer `f (g a)` value, unconverted.
    Comp1(Value),
    L(Box<GValue>),
    R(Box<GValue>),
    Prod(Box<GValue>, Box<GValue>),
}

impl GValue {
    pub fn l(g: GValue) -> GValue {
        GValue::L(Box::new(g))
    }

    pub fn r(g: GValue) -> GValue {
        GValue::R(Box::new(g))
    }

    pub fn prod(a: GValue, b: GValue) -> GValue {
        GValue::Prod(Box::new(a), Box::new(b))
    }

    fn is_atomic(&self) -> bool {
        matches!(self, GValue::U1)
    }
}

impl fmt::Display for GValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, tag: &str, v: &Value| {
            let text = v.to_string();
            if v.as_con().is_some_and(|c| !c.fields.is_empty()) || text.starts_with('-') {
                write!(f, "{tag} ({text})")
            } else {
                write!(f, "{tag} {text}")
            }
        };
        match self {
            GValue::U1 => f.write_str("U1"),
            GValue::K1(v) => wrap(f, "K1", v),
            GValue::Par1(v) => wrap(f, "Par1", v),
            GValue::Rec1(v) => wrap(f, "Rec1", v),
            GValue::Comp1(v) => wrap(f, "Comp1", v),
            GValue::L(g) if g.is_atomic() => write!(f, "L1 {g}"),
            GValue::R(g) if g.is_atomic() => write!(f, "R1 {g}"),
            GValue::L(g) => write!(f, "L1 ({g})"),
            GValue::R(g) => write!(f, "R1 ({g})"),
            GValue::Prod(a, b) => write!(f, "({a} :*: {b})"),
        }
    }
}

impl serde::Serialize for GValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Structural check that `g` inhabits `shape`. Payload values are not
/// type-checked.
pub fn conforms(shape: &RepShape, g: &GValue) -> bool {
    match (shape, g) {
        (RepShape::U1, GValue::U1)
        | (RepShape::K1(_), GValue::K1(_))
        | (RepShape::Par1, GValue::Par1(_))
        | (RepShape::Rec1 { .. }, GValue::Rec1(_))
        | (RepShape::Comp1 { .. }, GValue::Comp1(_)) => true,
        (RepShape::Sum(l, _), GValue::L(x)) => conforms(l, x),
        (RepShape::Sum(_, r), GValue::R(x)) => conforms(r, x),
        (RepShape::Prod(l, r), GValue::Prod(a, b)) => conforms(l, a) && conforms(r, b),
        _ => false,
    }
}

fn wrap_leaf(shape: &RepShape, v: &Value) -> Option<GValue> {
    Some(match shape {
        RepShape::K1(_) => GValue::K1(v.clone()),
        RepShape::Par1 => GValue::Par1(v.clone()),
        RepShape::Rec1 { .. } => GValue::Rec1(v.clone()),
        RepShape::Comp1 { .. } => GValue::Comp1(v.clone()),
        _ => return None,
    })
}

fn unwrap_leaf(g: &GValue) -> Option<&Value> {
    match g {
        GValue::K1(v) | GValue::Par1(v) | GValue::Rec1(v) | GValue::Comp1(v) => Some(v),
        _ => None,
    }
}

/// Converts a constructor value of `decl` into a value of `shape`, which
/// must be `build_rep` or `build_rep1` of the same declaration.
pub fn from_shape(decl: &DataDecl, shape: &RepShape, v: &Value) -> Result<GValue, RepError> {
    let not_of_type = || RepError::NotOfType { decl: decl.name.clone(), value: v.to_string() };
    let con = v.as_con().filter(|c| *c.type_name == *decl.name).ok_or_else(not_of_type)?;
    let (index, ctor) = decl.constructor(&con.con_name).ok_or_else(not_of_type)?;
    if ctor.fields.len() != con.fields.len() {
        return Err(not_of_type());
    }
    let n = decl.constructors.len();
    let mut payload_shape =
        shape.constructor_shape(index, n).ok_or_else(|| RepError::NonConforming(shape.to_string()))?;
    let mut leaves = Vec::with_capacity(con.fields.len());
    for (i, field) in con.fields.iter().enumerate() {
        let leaf_shape = if i + 1 == con.fields.len() {
            payload_shape
        } else {
            match payload_shape {
                RepShape::Prod(l, r) => {
                    payload_shape = r;
                    l
                }
                _ => return Err(RepError::NonConforming(shape.to_string())),
            }
        };
        leaves.push(wrap_leaf(leaf_shape, field).ok_or_else(|| RepError::NonConforming(shape.to_string()))?);
    }
    let mut g = match leaves.pop() {
        None => GValue::U1,
        Some(mut acc) => {
            while let Some(l) = leaves.pop() {
                acc = GValue::prod(l, acc);
            }
            acc
        }
    };
    if index + 1 < n {
        g = GValue::l(g);
    }
    for _ in 0..index {
        g = GValue::r(g);
    }
    Ok(g)
}

/// Inverse of [`from_shape`] on conforming inputs.
pub fn to_shape(decl: &DataDecl, shape: &RepShape, g: &GValue) -> Result<Value, RepError> {
    if !conforms(shape, g) {
        return Err(RepError::NonConforming(g.to_string()));
    }
    let n = decl.constructors.len();
    let mut index = 0;
    let mut cur = g;
    while index + 1 < n {
        match cur {
            GValue::L(x) => {
                cur = x;
                break;
            }
            GValue::R(x) => {
                cur = x;
                index += 1;
            }
            _ => return Err(RepError::NonConforming(g.to_string())),
        }
    }
    let ctor = &decl.constructors[index];
    let mut fields = Vec::with_capacity(ctor.fields.len());
    for i in 0..ctor.fields.len() {
        let leaf = if i + 1 == ctor.fields.len() {
            cur
        } else {
            match cur {
                GValue::Prod(a, b) => {
                    cur = b;
                    a
                }
                _ => return Err(RepError::NonConforming(g.to_string())),
            }
        };
        fields.push(unwrap_leaf(leaf).ok_or_else(|| RepError::NonConforming(g.to_string()))?.clone());
    }
    Ok(Value::con(decl.name.as_str(), ctor.name.as_str(), fields))
}

/// `from` for the ground representation. All fields become `K1` leaves, so
/// the ground arguments only matter for the shape, not the conversion.
pub fn from(decl: &DataDecl, v: &Value) -> Result<GValue, RepError> {
    let shape = skeleton(decl, |_, f| Ok(RepShape::K1(f.clone())))?;
    from_shape(decl, &shape, v)
}

pub fn to(decl: &DataDecl, g: &GValue) -> Result<Value, RepError> {
    let shape = skeleton(decl, |_, f| Ok(RepShape::K1(f.clone())))?;
    to_shape(decl, &shape, g)
}

pub fn from1(decl: &DataDecl, v: &Value) -> Result<GValue, RepError> {
    from_shape(decl, &build_rep1(decl)?, v)
}

pub fn to1(decl: &DataDecl, g: &GValue) -> Result<Value, RepError> {
    to_shape(decl, &build_rep1(decl)?, g)
}
