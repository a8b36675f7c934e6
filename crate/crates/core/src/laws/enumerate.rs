use std::collections::HashMap;

use super::{DomainConfig, LawError};
use crate::derive::FnRef;
use crate::rep::{build_rep, GValue, RepShape};
use crate::schema::{instantiate, PrimType, Schema, TypeExpr};
use crate::value::Value;

/// Largest function space enumerated exhaustively; beyond it a fixed
/// catalog is used.
pub const FUNCTION_TABLE_LIMIT: usize = 64;

const MAX_VALUES: usize = 4_000_000;

/// All values of `ty` up to `cfg.depth` constructor nesting, in canonical
/// order: constructors in declaration order, and within a constructor the
/// cross product of its field enumerations with the first field varying
/// slowest.
pub fn enumerate(ty: &TypeExpr, cfg: &DomainConfig, schema: &Schema) -> Result<Vec<Value>, LawError> {
    schema.check_ground(ty)?;
    Enumerator { cfg, schema, memo: HashMap::new() }.values(ty, cfg.depth)
}

/// Values of the ground representation of `decl` at `args`, generated from
/// the shape alone. The order matches mapping `from` over [`enumerate`].
pub fn enumerate_reps(
    schema: &Schema,
    type_name: &str,
    args: &[TypeExpr],
    cfg: &DomainConfig,
) -> Result<(RepShape, Vec<GValue>), LawError> {
    let decl = schema.decl(type_name)?;
    let shape = build_rep(decl, args)?;
    let mut e = Enumerator { cfg, schema, memo: HashMap::new() };
    let reps = e.reps(&shape, cfg.depth - 1)?;
    Ok((shape, reps))
}

struct Enumerator<'a> {
    cfg: &'a DomainConfig,
    schema: &'a Schema,
    memo: HashMap<(TypeExpr, usize), Vec<Value>>,
}

impl Enumerator<'_> {
    fn values(&mut self, ty: &TypeExpr, depth: usize) -> Result<Vec<Value>, LawError> {
        let (name, args) = match ty {
            TypeExpr::Prim(p) => return Ok(self.cfg.values_of(*p)),
            TypeExpr::Param(_) => return Err(crate::schema::SchemaError::NotGround(ty.to_string()).into()),
            TypeExpr::Named(name, args) => (name, args),
        };
        if depth == 0 {
            return Ok(Vec::new());
        }
        if let Some(v) = self.memo.get(&(ty.clone(), depth)) {
            return Ok(v.clone());
        }
        let decl = self.schema.decl(name)?;
        let mut out = Vec::new();
        for ctor in &decl.constructors {
            let mut columns = Vec::with_capacity(ctor.fields.len());
            for f in &ctor.fields {
                columns.push(self.values(&instantiate(f, args)?, depth - 1)?);
            }
            let count = columns.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
            if count.is_none_or(|c| c + out.len() > MAX_VALUES) {
                return Err(LawError::TooLarge { ty: ty.to_string(), limit: MAX_VALUES });
            }
            for fields in cross(&columns) {
                out.push(Value::con(decl.name.as_str(), ctor.name.as_str(), fields));
            }
        }
        self.memo.insert((ty.clone(), depth), out.clone());
        Ok(out)
    }

    fn reps(&mut self, shape: &RepShape, depth: usize) -> Result<Vec<GValue>, LawError> {
        Ok(match shape {
            RepShape::V1 => Vec::new(),
            RepShape::U1 => vec![GValue::U1],
            RepShape::K1(t) => self.values(t, depth)?.into_iter().map(GValue::K1).collect(),
            RepShape::Sum(l, r) => {
                let mut out: Vec<GValue> = self.reps(l, depth)?.into_iter().map(GValue::l).collect();
                out.extend(self.reps(r, depth)?.into_iter().map(GValue::r));
                out
            }
            RepShape::Prod(l, r) => {
                let ls = self.reps(l, depth)?;
                let rs = self.reps(r, depth)?;
                let mut out = Vec::with_capacity(ls.len() * rs.len());
                for a in &ls {
                    for b in &rs {
                        out.push(GValue::prod(a.clone(), b.clone()));
                    }
                }
                out
            }
            other => return Err(LawError::NotApplicable(format!("`{other}` is not part of a ground representation"))),
        })
    }
}

/// Cartesian product with the first column varying slowest.
fn cross<T: Clone>(columns: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::with_capacity(columns.len())];
    for col in columns {
        let mut next = Vec::with_capacity(out.len() * col.len());
        for prefix in &out {
            for item in col {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Functions from `domain` to `codomain` over the configured primitive
/// domains. Small spaces are enumerated exhaustively in lexicographic
/// order of their tables; larger ones fall back to a fixed catalog.
pub fn enumerate_functions(domain: PrimType, codomain: PrimType, cfg: &DomainConfig) -> Vec<FnRef> {
    let dom = cfg.values_of(domain);
    let cod = cfg.values_of(codomain);
    let space =
        u32::try_from(dom.len()).ok().and_then(|n| cod.len().checked_pow(n)).filter(|&s| s <= FUNCTION_TABLE_LIMIT);
    if space.is_some() {
        return cross(&vec![cod.clone(); dom.len()])
            .into_iter()
            .map(|images| {
                let parts: Vec<String> = dom.iter().zip(&images).map(|(x, y)| format!("{x}->{y}")).collect();
                FnRef::new(
                    format!("{{{}}}", parts.join(",")),
                    domain,
                    codomain,
                    dom.iter().cloned().zip(images).collect(),
                )
            })
            .collect();
    }
    let mut out = Vec::new();
    if domain == codomain {
        out.push(FnRef::identity(domain, &dom));
    }
    if let Some(first) = cod.first() {
        out.push(FnRef::new(
            format!("const {first}"),
            domain,
            codomain,
            dom.iter().map(|x| (x.clone(), first.clone())).collect(),
        ));
    }
    if domain == codomain {
        let n = dom.len();
        match domain {
            PrimType::Int => out.push(FnRef::new(
                "succ",
                domain,
                codomain,
                (0..n).map(|i| (dom[i].clone(), dom[(i + 1) % n].clone())).collect(),
            )),
            PrimType::Bool => out.push(FnRef::new(
                "not",
                domain,
                codomain,
                dom.iter()
                    .map(|x| match x {
                        Value::Bool(b) => (x.clone(), Value::Bool(!b)),
                        _ => (x.clone(), x.clone()),
                    })
                    .collect(),
            )),
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_schema;
    use crate::rep::from;
    use crate::value::typecheck_value;

    fn cfg(depth: usize, ints: Vec<i64>) -> DomainConfig {
        DomainConfig { depth, int_domain: ints, ..DomainConfig::default() }
    }

    #[test]
    fn nat_unfolds_to_depth() {
        let s = Schema::with_builtins();
        let vals = enumerate(&TypeExpr::named("Nat", vec![]), &cfg(3, vec![0]), &s).unwrap();
        let text: Vec<String> = vals.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["Zero", "Suc Zero", "Suc (Suc Zero)"]);
    }

    #[test]
    fn list_int_depth_two() {
        let s = Schema::with_builtins();
        let vals = enumerate(&TypeExpr::named("List", vec![TypeExpr::int()]), &cfg(2, vec![0, 1]), &s).unwrap();
        let text: Vec<String> = vals.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["Nil", "Cons 0 Nil", "Cons 1 Nil"]);
    }

    #[test]
    fn empty_type_has_no_values() {
        let s = parse_schema("data V").unwrap();
        assert!(enumerate(&TypeExpr::named("V", vec![]), &cfg(5, vec![0]), &s).unwrap().is_empty());
    }

    #[test]
    fn size_recurrences() {
        let s = Schema::with_builtins();
        let c = cfg(3, (-2..=2).collect());
        let count = |t: TypeExpr| enumerate(&t, &c, &s).unwrap().len();
        let int = TypeExpr::int;
        assert_eq!(count(TypeExpr::named("B", vec![])), 10);
        assert_eq!(count(TypeExpr::named("List", vec![int()])), 1 + 5 * (1 + 5));
        assert_eq!(count(TypeExpr::named("Triple", vec![int(), int(), int()])), 125);
        assert_eq!(count(TypeExpr::named("Maybe", vec![int()])), 6);
        assert_eq!(count(TypeExpr::named("Either", vec![int(), TypeExpr::bool()])), 7);
    }

    #[test]
    fn enumeration_is_duplicate_free_well_typed_and_monotone() {
        let s = parse_schema("data Tree a = Leaf | Node (Tree a) a (Tree a)\ndata Ev = EZ | ES Od\ndata Od = OS Ev")
            .unwrap();
        let tys = [
            TypeExpr::named("Tree", vec![TypeExpr::bool()]),
            TypeExpr::named("List", vec![TypeExpr::named("Maybe", vec![TypeExpr::bool()])]),
            TypeExpr::named("Ev", vec![]),
        ];
        for ty in &tys {
            let mut prev: Vec<Value> = Vec::new();
            for depth in 1..=4 {
                let vals = enumerate(ty, &cfg(depth, vec![0]), &s).unwrap();
                let set: std::collections::HashSet<_> = vals.iter().collect();
                assert_eq!(set.len(), vals.len(), "{ty} depth {depth}");
                for v in &vals {
                    typecheck_value(v, ty, &s).unwrap();
                }
                assert!(prev.iter().all(|p| set.contains(p)), "{ty} depth {depth}");
                prev = vals;
            }
        }
        // A single budget shared across mutual recursion.
        let ev = enumerate(&TypeExpr::named("Ev", vec![]), &cfg(4, vec![0]), &s).unwrap();
        let text: Vec<String> = ev.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["EZ", "ES (OS EZ)"]);
    }

    #[test]
    fn rep_enumeration_matches_from_over_values() {
        let s = parse_schema("data C3 = A | B0 Bool Int | C (List Int)").unwrap();
        let c = cfg(3, vec![0, 1]);
        for (name, args) in [
            ("C3", vec![]),
            ("List", vec![TypeExpr::int()]),
            ("Triple", vec![TypeExpr::int(), TypeExpr::bool(), TypeExpr::int()]),
            ("Nat", vec![]),
        ] {
            let decl = s.get(name).unwrap();
            let vals = enumerate(&TypeExpr::named(name, args.clone()), &c, &s).unwrap();
            let mapped: Vec<GValue> = vals.iter().map(|v| from(decl, v).unwrap()).collect();
            let (_, reps) = enumerate_reps(&s, name, &args, &c).unwrap();
            assert_eq!(mapped, reps, "{name}");
        }
    }

    #[test]
    fn function_enumeration() {
        let c = cfg(3, vec![0, 1]);
        let bools = enumerate_functions(PrimType::Bool, PrimType::Bool, &c);
        assert_eq!(bools.len(), 4);
        assert_eq!(bools[0].name, "{False->False,True->False}");
        assert_eq!(bools[3].name, "{False->True,True->True}");
        assert_eq!(enumerate_functions(PrimType::Int, PrimType::Int, &c).len(), 4);

        let wide = DomainConfig::default();
        let ints = enumerate_functions(PrimType::Int, PrimType::Int, &wide);
        let names: Vec<&str> = ints.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names, ["id", "const -2", "succ"]);
        assert_eq!(ints[2].apply(&Value::Int(2)).unwrap(), Value::Int(-2));
        // 3 ints -> 2 bools is 2^3 = 8 tables
        let small = cfg(3, vec![0, 1, 2]);
        assert_eq!(enumerate_functions(PrimType::Int, PrimType::Bool, &small).len(), 8);
    }
}
