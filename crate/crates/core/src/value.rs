//! Source-level values: primitives and constructor applications.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::schema::{instantiate, PrimType, Schema, TypeExpr};

/// A constructor application. Shared behind an `Arc` so that cloning a
/// value (e.g. when wrapping a recursive field) is constant time.
#[derive(Debug)]
pub struct ConValue {
    pub type_name: Arc<str>,
    pub con_name: Arc<str>,
    pub fields: Vec<Value>,
}

/// A value of some ground type.
///
/// Equality is structural identity: doubles compare by bit pattern, so
/// `NaN` equals itself here even though `NaN <= NaN` is false under the
/// primitive ordering.
#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Char(char),
    Double(f64),
    Unit,
    Con(Arc<ConValue>),
}

impl Value {
    pub fn con(type_name: impl Into<Arc<str>>, con_name: impl Into<Arc<str>>, fields: Vec<Value>) -> Value {
        Value::Con(Arc::new(ConValue { type_name: type_name.into(), con_name: con_name.into(), fields }))
    }

    pub fn as_con(&self) -> Option<&ConValue> {
        match self {
            Value::Con(c) => Some(c),
            _ => None,
        }
    }

    pub fn prim_type(&self) -> Option<PrimType> {
        Some(match self {
            Value::Int(_) => PrimType::Int,
            Value::Bool(_) => PrimType::Bool,
            Value::Char(_) => PrimType::Char,
            Value::Double(_) => PrimType::Double,
            Value::Unit => PrimType::Unit,
            Value::Con(_) => return None,
        })
    }

    /// Number of constructor nodes, counting nested ones.
    pub fn size(&self) -> usize {
        match self {
            Value::Con(c) => 1 + c.fields.iter().map(Value::size).sum::<usize>(),
            _ => 0,
        }
    }

    fn needs_parens(&self) -> bool {
        match self {
            Value::Con(c) => !c.fields.is_empty(),
            Value::Int(i) => *i < 0,
            Value::Double(d) => d.is_sign_negative() && !d.is_nan(),
            _ => false,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Char(a), Value::Char(b)) => a == b,
            (Value::Double(a), Value::Double(b)) => a.to_bits() == b.to_bits(),
            (Value::Unit, Value::Unit) => true,
            (Value::Con(a), Value::Con(b)) => {
                Arc::ptr_eq(a, b) || (a.type_name == b.type_name && a.con_name == b.con_name && a.fields == b.fields)
            }
            _ => false,
        }
    }
}

impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Value::Int(i) => i.hash(state),
            Value::Bool(b) => b.hash(state),
            Value::Char(c) => c.hash(state),
            Value::Double(d) => d.to_bits().hash(state),
            Value::Unit => {}
            Value::Con(c) => {
                c.type_name.hash(state);
                c.con_name.hash(state);
                c.fields.hash(state);
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(true) => f.write_str("True"),
            Value::Bool(false) => f.write_str("False"),
            Value::Char(c) => write!(f, "{c:?}"),
            Value::Double(d) if d.is_nan() => f.write_str("NaN"),
            Value::Double(d) => write!(f, "{d:?}"),
            Value::Unit => f.write_str("()"),
            Value::Con(c) => {
                f.write_str(&c.con_name)?;
                for field in &c.fields {
                    if field.needs_parens() {
                        write!(f, " ({field})")?;
                    } else {
                        write!(f, " {field}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Checks that `v` inhabits the ground type `ty`: constructor arity and
/// every field recursively.
pub fn typecheck_value(v: &Value, ty: &TypeExpr, schema: &Schema) -> Result<(), String> {
    match (ty, v) {
        (TypeExpr::Prim(p), _) => match v.prim_type() {
            Some(q) if q == *p => Ok(()),
            _ => Err(format!("`{v}` is not a {p}")),
        },
        (TypeExpr::Param(i), _) => Err(format!("type parameter #{i} is not ground")),
        (TypeExpr::Named(name, args), Value::Con(c)) => {
            if &*c.type_name != name {
                return Err(format!("`{v}` belongs to `{}`, expected `{name}`", c.type_name));
            }
            let decl = schema.get(name).ok_or_else(|| format!("unknown type `{name}`"))?;
            let (_, ctor) = decl
                .constructor(&c.con_name)
                .ok_or_else(|| format!("`{}` is not a constructor of `{name}`", c.con_name))?;
            if ctor.fields.len() != c.fields.len() {
                return Err(format!("`{}` takes {} field(s), got {}", ctor.name, ctor.fields.len(), c.fields.len()));
            }
            for (fty, fv) in ctor.fields.iter().zip(&c.fields) {
                let fty = instantiate(fty, args).map_err(|e| e.to_string())?;
                typecheck_value(fv, &fty, schema)?;
            }
            Ok(())
        }
        (TypeExpr::Named(name, _), _) => Err(format!("`{v}` is not a value of `{name}`")),
    }
}
