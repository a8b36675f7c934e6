//! Hand-written instances for the built-in datatypes, written by direct
//! case analysis on constructors. They serve as the reference the generic
//! derivations are checked against.

use super::{Concept, DeriveError, Imp, InstanceBundle, MapFn, Provenance, Registry};
use crate::schema::TypeExpr;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Oracle {
    Identity,
    Maybe,
    Either,
    List,
    Triple,
    Nat,
    B,
}

impl Oracle {
    fn from_name(name: &str) -> Option<Oracle> {
        Some(match name {
            "Identity" => Oracle::Identity,
            "Maybe" => Oracle::Maybe,
            "Either" => Oracle::Either,
            "List" => Oracle::List,
            "Triple" => Oracle::Triple,
            "Nat" => Oracle::Nat,
            "B" => Oracle::B,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Oracle::Identity => "Identity",
            Oracle::Maybe => "Maybe",
            Oracle::Either => "Either",
            Oracle::List => "List",
            Oracle::Triple => "Triple",
            Oracle::Nat => "Nat",
            Oracle::B => "B",
        }
    }

    fn arity(self) -> usize {
        match self {
            Oracle::Identity | Oracle::Maybe | Oracle::List => 1,
            Oracle::Either => 2,
            Oracle::Triple => 3,
            Oracle::Nat | Oracle::B => 0,
        }
    }

    fn supports(self, concept: Concept) -> bool {
        match concept {
            Concept::Eq | Concept::Ord => true,
            Concept::Semigroup | Concept::Monoid => matches!(self, Oracle::Identity | Oracle::Triple),
            Concept::Functor => self.arity() > 0,
        }
    }

    fn parts(self, v: &Value) -> Result<(&str, &[Value]), DeriveError> {
        match v.as_con() {
            Some(c) if &*c.type_name == self.name() => Ok((&c.con_name, &c.fields)),
            _ => Err(DeriveError::Mismatch(format!("`{v}` is not a {}", self.name()))),
        }
    }

    fn bad(self, v: &Value) -> DeriveError {
        DeriveError::Mismatch(format!("`{v}` is not a well-formed {}", self.name()))
    }

    pub(crate) fn eq(self, args: &[TypeExpr], reg: &Registry, a: &Value, b: &Value) -> Result<bool, DeriveError> {
        match self {
            Oracle::Identity => {
                let ([x], [y]) = (self.parts(a)?.1, self.parts(b)?.1) else { return Err(self.bad(a)) };
                reg.eq_at(&args[0], x, y)
            }
            Oracle::Maybe => match (self.parts(a)?, self.parts(b)?) {
                (("Nothing", []), ("Nothing", [])) => Ok(true),
                (("Just", [x]), ("Just", [y])) => reg.eq_at(&args[0], x, y),
                (("Nothing", []) | ("Just", [_]), ("Nothing", []) | ("Just", [_])) => Ok(false),
                _ => Err(self.bad(a)),
            },
            Oracle::Either => match (self.parts(a)?, self.parts(b)?) {
                (("L", [x]), ("L", [y])) => reg.eq_at(&args[0], x, y),
                (("R", [x]), ("R", [y])) => reg.eq_at(&args[1], x, y),
                (("L" | "R", [_]), ("L" | "R", [_])) => Ok(false),
                _ => Err(self.bad(a)),
            },
            Oracle::List => {
                let (mut a, mut b) = (a, b);
                loop {
                    match (self.parts(a)?, self.parts(b)?) {
                        (("Nil", []), ("Nil", [])) => return Ok(true),
                        (("Cons", [x, xs]), ("Cons", [y, ys])) => {
                            if !reg.eq_at(&args[0], x, y)? {
                                return Ok(false);
                            }
                            a = xs;
                            b = ys;
                        }
                        (("Nil", []) | ("Cons", [_, _]), ("Nil", []) | ("Cons", [_, _])) => return Ok(false),
                        _ => return Err(self.bad(a)),
                    }
                }
            }
            Oracle::Triple => {
                let ([x1, x2, x3], [y1, y2, y3]) = (self.parts(a)?.1, self.parts(b)?.1) else {
                    return Err(self.bad(a));
                };
                Ok(reg.eq_at(&args[0], x1, y1)? && reg.eq_at(&args[1], x2, y2)? && reg.eq_at(&args[2], x3, y3)?)
            }
            Oracle::Nat => {
                let (mut a, mut b) = (a, b);
                loop {
                    match (self.parts(a)?, self.parts(b)?) {
                        (("Zero", []), ("Zero", [])) => return Ok(true),
                        (("Suc", [x]), ("Suc", [y])) => {
                            a = x;
                            b = y;
                        }
                        (("Zero", []) | ("Suc", [_]), ("Zero", []) | ("Suc", [_])) => return Ok(false),
                        _ => return Err(self.bad(a)),
                    }
                }
            }
            Oracle::B => match (self.parts(a)?, self.parts(b)?) {
                (("B1", [Value::Int(s1)]), ("B1", [Value::Int(s2)]))
                | (("B2", [Value::Int(s1)]), ("B2", [Value::Int(s2)])) => Ok(s1 == s2),
                (("B1" | "B2", [Value::Int(_)]), ("B1" | "B2", [Value::Int(_)])) => Ok(false),
                _ => Err(self.bad(a)),
            },
        }
    }

    pub(crate) fn leq(self, args: &[TypeExpr], reg: &Registry, a: &Value, b: &Value) -> Result<bool, DeriveError> {
        match self {
            Oracle::Identity => {
                let ([x], [y]) = (self.parts(a)?.1, self.parts(b)?.1) else { return Err(self.bad(a)) };
                reg.leq_at(&args[0], x, y)
            }
            Oracle::Maybe => match (self.parts(a)?, self.parts(b)?) {
                (("Nothing", []), ("Nothing", []) | ("Just", [_])) => Ok(true),
                (("Just", [_]), ("Nothing", [])) => Ok(false),
                (("Just", [x]), ("Just", [y])) => reg.leq_at(&args[0], x, y),
                _ => Err(self.bad(a)),
            },
            Oracle::Either => match (self.parts(a)?, self.parts(b)?) {
                (("L", [x]), ("L", [y])) => reg.leq_at(&args[0], x, y),
                (("R", [x]), ("R", [y])) => reg.leq_at(&args[1], x, y),
                (("L", [_]), ("R", [_])) => Ok(true),
                (("R", [_]), ("L", [_])) => Ok(false),
                _ => Err(self.bad(a)),
            },
            Oracle::List => {
                let (mut a, mut b) = (a, b);
                loop {
                    match (self.parts(a)?, self.parts(b)?) {
                        (("Nil", []), ("Nil", []) | ("Cons", [_, _])) => return Ok(true),
                        (("Cons", [_, _]), ("Nil", [])) => return Ok(false),
                        (("Cons", [x, xs]), ("Cons", [y, ys])) => {
                            if !reg.eq_at(&args[0], x, y)? {
                                return reg.leq_at(&args[0], x, y);
                            }
                            a = xs;
                            b = ys;
                        }
                        _ => return Err(self.bad(a)),
                    }
                }
            }
            Oracle::Triple => {
                let ([x1, x2, x3], [y1, y2, y3]) = (self.parts(a)?.1, self.parts(b)?.1) else {
                    return Err(self.bad(a));
                };
                if !reg.eq_at(&args[0], x1, y1)? {
                    reg.leq_at(&args[0], x1, y1)
                } else if !reg.eq_at(&args[1], x2, y2)? {
                    reg.leq_at(&args[1], x2, y2)
                } else {
                    reg.leq_at(&args[2], x3, y3)
                }
            }
            Oracle::Nat => {
                let (mut a, mut b) = (a, b);
                loop {
                    match (self.parts(a)?, self.parts(b)?) {
                        (("Zero", []), ("Zero", []) | ("Suc", [_])) => return Ok(true),
                        (("Suc", [_]), ("Zero", [])) => return Ok(false),
                        (("Suc", [x]), ("Suc", [y])) => {
                            a = x;
                            b = y;
                        }
                        _ => return Err(self.bad(a)),
                    }
                }
            }
            Oracle::B => match (self.parts(a)?, self.parts(b)?) {
                (("B1", [Value::Int(s1)]), ("B1", [Value::Int(s2)])) => Ok(s1 <= s2),
                (("B2", [Value::Int(s1)]), ("B2", [Value::Int(s2)])) => Ok(s1 <= s2),
                (("B1", [Value::Int(_)]), ("B2", [Value::Int(_)])) => Ok(true),
                (("B2", [Value::Int(_)]), ("B1", [Value::Int(_)])) => Ok(false),
                _ => Err(self.bad(a)),
            },
        }
    }

    pub(crate) fn combine(self, args: &[TypeExpr], reg: &Registry, a: &Value, b: &Value) -> Result<Value, DeriveError> {
        match self {
            Oracle::Identity => {
                let ([x], [y]) = (self.parts(a)?.1, self.parts(b)?.1) else { return Err(self.bad(a)) };
                Ok(Value::con("Identity", "Identity", vec![reg.combine_at(&args[0], x, y)?]))
            }
            Oracle::Triple => {
                let ([x1, x2, x3], [y1, y2, y3]) = (self.parts(a)?.1, self.parts(b)?.1) else {
                    return Err(self.bad(a));
                };
                Ok(Value::con(
                    "Triple",
                    "MkTriple",
                    vec![
                        reg.combine_at(&args[0], x1, y1)?,
                        reg.combine_at(&args[1], x2, y2)?,
                        reg.combine_at(&args[2], x3, y3)?,
                    ],
                ))
            }
            _ => Err(DeriveError::NoOracle { concept: Concept::Semigroup, ty: self.name().into() }),
        }
    }

    pub(crate) fn empty(self, args: &[TypeExpr], reg: &Registry) -> Result<Value, DeriveError> {
        match self {
            Oracle::Identity => Ok(Value::con("Identity", "Identity", vec![reg.empty_at(&args[0])?])),
            Oracle::Triple => Ok(Value::con(
                "Triple",
                "MkTriple",
                vec![reg.empty_at(&args[0])?, reg.empty_at(&args[1])?, reg.empty_at(&args[2])?],
            )),
            _ => Err(DeriveError::NoOracle { concept: Concept::Monoid, ty: self.name().into() }),
        }
    }

    pub(crate) fn fmap(self, f: &MapFn<'_>, v: &Value) -> Result<Value, DeriveError> {
        let (con, fields) = self.parts(v)?;
        let name = self.name();
        match (self, con, fields) {
            (Oracle::Identity, "Identity", [x]) => Ok(Value::con(name, con, vec![f(x)?])),
            (Oracle::Maybe, "Nothing", []) => Ok(v.clone()),
            (Oracle::Maybe, "Just", [x]) => Ok(Value::con(name, con, vec![f(x)?])),
            (Oracle::Either, "L", [_]) => Ok(v.clone()),
            (Oracle::Either, "R", [x]) => Ok(Value::con(name, con, vec![f(x)?])),
            (Oracle::List, _, _) => {
                let mut mapped = Vec::new();
                let mut cur = v;
                loop {
                    match self.parts(cur)? {
                        ("Nil", []) => break,
                        ("Cons", [x, xs]) => {
                            mapped.push(f(x)?);
                            cur = xs;
                        }
                        _ => return Err(self.bad(v)),
                    }
                }
                Ok(mapped
                    .into_iter()
                    .rev()
                    .fold(Value::con(name, "Nil", vec![]), |acc, x| Value::con(name, "Cons", vec![x, acc])))
            }
            (Oracle::Triple, "MkTriple", [a, b, c]) => Ok(Value::con(name, con, vec![a.clone(), b.clone(), f(c)?])),
            _ => Err(self.bad(v)),
        }
    }
}

/// Whether a hand-written instance exists for `concept` at `type_name`.
pub fn has_oracle(type_name: &str, concept: Concept) -> bool {
    Oracle::from_name(type_name).is_some_and(|o| o.supports(concept))
}

/// The hand-written instance for a built-in type. For `Functor`, `args`
/// are all parameters but the last.
pub fn direct_oracle(type_name: &str, args: &[TypeExpr], concept: Concept) -> Result<InstanceBundle, DeriveError> {
    let ty = TypeExpr::Named(type_name.to_string(), args.to_vec());
    let no_oracle = || DeriveError::NoOracle { concept, ty: ty.to_string() };
    let oracle = Oracle::from_name(type_name).filter(|o| o.supports(concept)).ok_or_else(no_oracle)?;
    let expected = if concept == Concept::Functor { oracle.arity() - 1 } else { oracle.arity() };
    if args.len() != expected || !args.iter().all(TypeExpr::is_ground) {
        return Err(no_oracle());
    }
    Ok(InstanceBundle { concept, ty, provenance: Provenance::DirectOracle, imp: Imp::Oracle(oracle) })
}
