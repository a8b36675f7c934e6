//! Operations defined once over representation shapes.

use super::{Concept, DeriveError, FnRef, MapFn, Registry};
use crate::rep::{GValue, RepShape};
use crate::value::Value;

fn nonconforming(shape: &RepShape, g: &GValue) -> DeriveError {
    DeriveError::Mismatch(format!("`{g}` does not inhabit `{shape}`"))
}

pub fn g_eq(shape: &RepShape, a: &GValue, b: &GValue, reg: &Registry) -> Result<bool, DeriveError> {
    match (shape, a, b) {
        (RepShape::U1, GValue::U1, GValue::U1) => Ok(true),
        (RepShape::K1(t), GValue::K1(x), GValue::K1(y)) => reg.eq_at(t, x, y),
        (RepShape::Prod(l, r), GValue::Prod(a1, a2), GValue::Prod(b1, b2)) => {
            Ok(g_eq(l, a1, b1, reg)? && g_eq(r, a2, b2, reg)?)
        }
        (RepShape::Sum(l, _), GValue::L(x), GValue::L(y)) => g_eq(l, x, y, reg),
        (RepShape::Sum(_, r), GValue::R(x), GValue::R(y)) => g_eq(r, x, y, reg),
        (RepShape::Sum(..), GValue::L(_), GValue::R(_)) | (RepShape::Sum(..), GValue::R(_), GValue::L(_)) => Ok(false),
        _ => Err(nonconforming(shape, a)),
    }
}

/// Products compare lexicographically, left component first; in a sum
/// every left injection is below every right injection.
pub fn g_leq(shape: &RepShape, a: &GValue, b: &GValue, reg: &Registry) -> Result<bool, DeriveError> {
    Ok(g_eq_leq(shape, a, b, reg)?.1)
}

/// `(eq, leq)` in one traversal, so a product visits its left component
/// once rather than once for each relation.
pub(crate) fn g_eq_leq(shape: &RepShape, a: &GValue, b: &GValue, reg: &Registry) -> Result<(bool, bool), DeriveError> {
    match (shape, a, b) {
        (RepShape::U1, GValue::U1, GValue::U1) => Ok((true, true)),
        (RepShape::K1(t), GValue::K1(x), GValue::K1(y)) => reg.eq_leq_at(t, x, y),
        (RepShape::Prod(l, r), GValue::Prod(a1, a2), GValue::Prod(b1, b2)) => {
            let (eq, leq) = g_eq_leq(l, a1, b1, reg)?;
            if eq {
                g_eq_leq(r, a2, b2, reg)
            } else {
                Ok((false, leq))
            }
        }
        (RepShape::Sum(l, _), GValue::L(x), GValue::L(y)) => g_eq_leq(l, x, y, reg),
        (RepShape::Sum(_, r), GValue::R(x), GValue::R(y)) => g_eq_leq(r, x, y, reg),
        (RepShape::Sum(..), GValue::L(_), GValue::R(_)) => Ok((false, true)),
        (RepShape::Sum(..), GValue::R(_), GValue::L(_)) => Ok((false, false)),
        _ => Err(nonconforming(shape, a)),
    }
}

fn refuse(concept: Concept, shape: &RepShape) -> DeriveError {
    DeriveError::Unsupported {
        concept,
        ty: shape.to_string(),
        reason: "sum and empty types have no canonical combination".into(),
    }
}

pub fn g_combine(shape: &RepShape, a: &GValue, b: &GValue, reg: &Registry) -> Result<GValue, DeriveError> {
    match (shape, a, b) {
        (RepShape::Sum(..) | RepShape::V1, _, _) => Err(refuse(Concept::Semigroup, shape)),
        (RepShape::U1, GValue::U1, GValue::U1) => Ok(GValue::U1),
        (RepShape::K1(t), GValue::K1(x), GValue::K1(y)) => Ok(GValue::K1(reg.combine_at(t, x, y)?)),
        (RepShape::Prod(l, r), GValue::Prod(a1, a2), GValue::Prod(b1, b2)) => {
            Ok(GValue::prod(g_combine(l, a1, b1, reg)?, g_combine(r, a2, b2, reg)?))
        }
        _ => Err(nonconforming(shape, a)),
    }
}

pub fn g_empty(shape: &RepShape, reg: &Registry) -> Result<GValue, DeriveError> {
    match shape {
        RepShape::Sum(..) | RepShape::V1 => Err(refuse(Concept::Monoid, shape)),
        RepShape::U1 => Ok(GValue::U1),
        RepShape::K1(t) => Ok(GValue::K1(reg.empty_at(t)?)),
        RepShape::Prod(l, r) => Ok(GValue::prod(g_empty(l, reg)?, g_empty(r, reg)?)),
        other => Err(DeriveError::Mismatch(format!("`{other}` is not a ground representation"))),
    }
}

/// Maps `f` over every parameter occurrence of a value of a `Rep1` shape.
/// Prefix arguments of `Rec1`/`Comp1` nodes must already be ground.
pub fn g_fmap(shape: &RepShape, f: &FnRef, g: &GValue, reg: &Registry) -> Result<GValue, DeriveError> {
    fmap_with(shape, &|v| f.apply(v), g, reg)
}

pub(crate) fn fmap_with(shape: &RepShape, f: &MapFn<'_>, g: &GValue, reg: &Registry) -> Result<GValue, DeriveError> {
    match (shape, g) {
        (RepShape::U1, GValue::U1) | (RepShape::K1(_), GValue::K1(_)) => Ok(g.clone()),
        (RepShape::Par1, GValue::Par1(v)) => Ok(GValue::Par1(f(v)?)),
        (RepShape::Rec1 { .. }, GValue::Rec1(v)) => Ok(GValue::Rec1(map_leaf(shape, f, v, reg)?)),
        (RepShape::Comp1 { .. }, GValue::Comp1(v)) => Ok(GValue::Comp1(map_leaf(shape, f, v, reg)?)),
        (RepShape::Sum(l, _), GValue::L(x)) => Ok(GValue::l(fmap_with(l, f, x, reg)?)),
        (RepShape::Sum(_, r), GValue::R(x)) => Ok(GValue::r(fmap_with(r, f, x, reg)?)),
        (RepShape::Prod(l, r), GValue::Prod(a, b)) => {
            Ok(GValue::prod(fmap_with(l, f, a, reg)?, fmap_with(r, f, b, reg)?))
        }
        _ => Err(nonconforming(shape, g)),
    }
}

/// `Rec1 h`: the registered `fmap` of `h`. `Comp1 h inner`: `fmap` of `h`
/// applied with the mapping of `inner`.
fn map_leaf(shape: &RepShape, f: &MapFn<'_>, v: &Value, reg: &Registry) -> Result<Value, DeriveError> {
    match shape {
        RepShape::Rec1 { name, prefix } => {
            reg.fmap_at(&crate::schema::TypeExpr::Named(name.clone(), prefix.clone()), f, v)
        }
        RepShape::Comp1 { name, prefix, inner } => reg.fmap_at(
            &crate::schema::TypeExpr::Named(name.clone(), prefix.clone()),
            &|x| map_leaf(inner, f, x, reg),
            v,
        ),
        other => Err(DeriveError::Mismatch(format!("`{other}` is not a functor application"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive::derive_bundle;
    use crate::rep::{build_rep, from};
    use crate::schema::{Schema, TypeExpr};

    fn int() -> TypeExpr {
        TypeExpr::int()
    }

    #[test]
    fn sum_rule_and_product_rule() {
        let s = Schema::with_builtins();
        let reg = Registry::with_primitives();
        let b = s.get("B").unwrap();
        let shape = build_rep(b, &[]).unwrap();
        let g1 = from(b, &Value::con("B", "B1", vec![Value::Int(9)])).unwrap();
        let g2 = from(b, &Value::con("B", "B2", vec![Value::Int(0)])).unwrap();
        assert!(g_leq(&shape, &g1, &g2, &reg).unwrap());
        assert!(!g_leq(&shape, &g2, &g1, &reg).unwrap());
        assert!(g_eq(&shape, &g1, &g1, &reg).unwrap());
        assert!(!g_eq(&shape, &g1, &g2, &reg).unwrap());

        let t = s.get("Triple").unwrap();
        let shape = build_rep(t, &[int(), int(), int()]).unwrap();
        let tv = |a, b, c| {
            from(t, &Value::con("Triple", "MkTriple", vec![Value::Int(a), Value::Int(b), Value::Int(c)])).unwrap()
        };
        assert!(!g_leq(&shape, &tv(1, 5, 2), &tv(1, 4, 9), &reg).unwrap());
        assert!(g_leq(&shape, &tv(0, 5, 2), &tv(1, 4, 9), &reg).unwrap());
    }

    #[test]
    fn nat_sum_rule_needs_registry_for_recursion() {
        let s = Schema::with_builtins();
        let mut reg = Registry::with_primitives();
        derive_bundle(&s, "Nat", &[], Concept::Ord, &mut reg).unwrap();
        let nat = s.get("Nat").unwrap();
        let shape = build_rep(nat, &[]).unwrap();
        let zero = Value::con("Nat", "Zero", vec![]);
        let one = Value::con("Nat", "Suc", vec![zero.clone()]);
        assert!(g_leq(&shape, &from(nat, &zero).unwrap(), &from(nat, &one).unwrap(), &reg).unwrap());
    }

    #[test]
    fn list_equality_agrees_with_structure() {
        let s = Schema::with_builtins();
        let mut reg = Registry::with_primitives();
        derive_bundle(&s, "List", &[int()], Concept::Eq, &mut reg).unwrap();
        let list = s.get("List").unwrap();
        let shape = build_rep(list, &[int()]).unwrap();
        let nil = Value::con("List", "Nil", vec![]);
        let one = Value::con("List", "Cons", vec![Value::Int(1), nil.clone()]);
        let g = from(list, &one).unwrap();
        assert!(g_eq(&shape, &g, &g, &reg).unwrap());
        assert!(!g_eq(&shape, &g, &from(list, &nil).unwrap(), &reg).unwrap());
    }

    #[test]
    fn combine_and_empty_refuse_exactly_on_sum_or_void() {
        let reg = Registry::with_primitives();
        let k = RepShape::K1(int());
        let shapes = [
            (RepShape::U1, false),
            (k.clone(), false),
            (RepShape::prod(k.clone(), RepShape::U1), false),
            (RepShape::sum(RepShape::U1, k.clone()), true),
            (RepShape::V1, true),
        ];
        for (shape, refused) in shapes {
            assert_eq!(shape.has_sum_or_void(), refused);
            let empty = g_empty(&shape, &reg);
            assert_eq!(empty.as_ref().is_err_and(|e| e.is_unsupported()), refused, "{shape}");
            if let Ok(e) = empty {
                assert_eq!(g_combine(&shape, &e, &e, &reg).unwrap(), e);
            } else {
                let l = GValue::l(GValue::U1);
                assert!(g_combine(&shape, &l, &l, &reg).unwrap_err().is_unsupported());
            }
        }
        assert_eq!(
            g_empty(&RepShape::prod(k.clone(), RepShape::prod(k.clone(), k)), &reg).unwrap(),
            GValue::prod(GValue::K1(Value::Int(0)), GValue::prod(GValue::K1(Value::Int(0)), GValue::K1(Value::Int(0))))
        );
    }

    #[test]
    fn fmap_over_par1_only() {
        let reg = Registry::with_primitives();
        let not = FnRef::new(
            "not",
            crate::schema::PrimType::Bool,
            crate::schema::PrimType::Bool,
            vec![(Value::Bool(false), Value::Bool(true)), (Value::Bool(true), Value::Bool(false))],
        );
        let shape = RepShape::prod(RepShape::K1(TypeExpr::bool()), RepShape::Par1);
        let g = GValue::prod(GValue::K1(Value::Bool(true)), GValue::Par1(Value::Bool(true)));
        assert_eq!(
            g_fmap(&shape, &not, &g, &reg).unwrap(),
            GValue::prod(GValue::K1(Value::Bool(true)), GValue::Par1(Value::Bool(false)))
        );
    }
}
