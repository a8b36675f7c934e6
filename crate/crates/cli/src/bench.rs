use std::collections::HashMap;
use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use lawforge_core::{direct_oracle, Concept, DomainConfig, InstanceBundle, Registry, Schema, Session, TypeExpr, Value};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{load_schema, resolve_args, BenchArgs, CmdResult, ConceptArg, Failure, EXIT_FAIL, EXIT_OK};

/// Random values of bounded depth. Constructors are chosen uniformly among
/// those that can still be completed within the remaining depth.
pub(crate) struct ValueGen<'a> {
    schema: &'a Schema,
    cfg: &'a DomainConfig,
    inhabited: HashMap<(TypeExpr, usize), bool>,
}

impl<'a> ValueGen<'a> {
    pub(crate) fn new(schema: &'a Schema, cfg: &'a DomainConfig) -> Self {
        ValueGen { schema, cfg, inhabited: HashMap::new() }
    }

    fn fields(&self, ty: &TypeExpr, ctor: usize) -> Vec<TypeExpr> {
        let decl = self.schema.get(&ty.head()).expect("resolved type");
        decl.constructors[ctor]
            .fields
            .iter()
            .map(|f| lawforge_core::instantiate(f, ty.args()).expect("ground instantiation"))
            .collect()
    }

    fn inhabited(&mut self, ty: &TypeExpr, depth: usize) -> bool {
        let TypeExpr::Named(name, _) = ty else { return true };
        if depth == 0 {
            return false;
        }
        if let Some(&b) = self.inhabited.get(&(ty.clone(), depth)) {
            return b;
        }
        let count = self.schema.get(name).map_or(0, |d| d.constructors.len());
        let b = (0..count).any(|c| self.fields(ty, c).iter().all(|f| self.inhabited(f, depth - 1)));
        self.inhabited.insert((ty.clone(), depth), b);
        b
    }

    pub(crate) fn generate(&mut self, ty: &TypeExpr, depth: usize, rng: &mut impl Rng) -> Option<Value> {
        match ty {
            TypeExpr::Prim(p) => self.cfg.values_of(*p).choose(rng).cloned(),
            TypeExpr::Param(_) => None,
            TypeExpr::Named(name, _) => {
                if depth == 0 {
                    return None;
                }
                let decl = self.schema.get(name)?;
                let count = decl.constructors.len();
                let viable: Vec<usize> =
                    (0..count).filter(|&c| self.fields(ty, c).iter().all(|f| self.inhabited(f, depth - 1))).collect();
                let &c = viable.choose(rng)?;
                let fields =
                    self.fields(ty, c).iter().map(|f| self.generate(f, depth - 1, rng)).collect::<Option<Vec<_>>>()?;
                let ctor = &self.schema.get(name)?.constructors[c];
                Some(Value::con(name.as_str(), ctor.name.as_str(), fields))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Answer {
    Bool(bool),
    Value(Value),
}

fn apply(b: &InstanceBundle, reg: &Registry, concept: Concept, x: &Value, y: &Value) -> Result<Answer, Failure> {
    let r = match concept {
        Concept::Eq => b.eq(reg, x, y).map(Answer::Bool),
        Concept::Ord => b.leq(reg, x, y).map(Answer::Bool),
        _ => b.combine(reg, x, y).map(Answer::Value),
    };
    r.map_err(|e| Failure::usage(e.to_string()))
}

fn time_all(
    b: &InstanceBundle,
    reg: &Registry,
    concept: Concept,
    pairs: &[(Value, Value)],
) -> Result<(Vec<Answer>, f64), Failure> {
    let started = Instant::now();
    let out =
        pairs.iter().map(|(x, y)| apply(b, reg, concept, black_box(x), black_box(y))).collect::<Result<Vec<_>, _>>()?;
    Ok((out, started.elapsed().as_secs_f64()))
}

fn ops_per_sec(n: usize, secs: f64) -> String {
    if n == 0 || secs <= 0.0 {
        "n/a".into()
    } else {
        format!("{:.0}", n as f64 / secs)
    }
}

pub(crate) fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let schema = match &a.file {
        Some(path) => load_schema(path)?,
        None => Schema::with_builtins(),
    };
    let concept = match a.concept {
        ConceptArg::Eq => Concept::Eq,
        ConceptArg::Ord => Concept::Ord,
        ConceptArg::Semigroup => Concept::Semigroup,
        ConceptArg::Monoid => Concept::Monoid,
        other => return Err(Failure::usage(format!("bench compares eq, ord, semigroup or monoid, not {other:?}"))),
    };
    if a.depth == 0 {
        return Err(Failure::usage("--depth must be at least 1"));
    }
    let args = resolve_args(&schema, &a.type_name, a.args.as_deref())?;
    let ty = TypeExpr::Named(a.type_name.clone(), args.clone());
    schema.check_ground(&ty).map_err(|e| Failure::usage(e.to_string()))?;

    let mut cfg = DomainConfig::default();
    if let Some(r) = &a.int_domain {
        cfg.int_domain = r.clone().collect();
    }
    let oracle = direct_oracle(&a.type_name, &args, concept).map_err(|e| Failure::usage(e.to_string()))?;
    let mut session = Session::new(schema.clone(), cfg.clone()).map_err(|e| Failure::usage(e.to_string()))?;
    let derived = session.derive(&a.type_name, &args, concept).map_err(|e| Failure::usage(e.to_string()))?;
    let reg = session.registry();

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut gen = ValueGen::new(&schema, &cfg);
    let mut pairs = Vec::with_capacity(a.n);
    for _ in 0..a.n {
        let x = gen.generate(&ty, a.depth, &mut rng);
        let y = gen.generate(&ty, a.depth, &mut rng);
        match (x, y) {
            (Some(x), Some(y)) => pairs.push((x, y)),
            _ => return Err(Failure::usage(format!("`{ty}` has no values within depth {}", a.depth))),
        }
    }

    let (generic, t_generic) = time_all(&derived, reg, concept, &pairs)?;
    let (direct, t_direct) = time_all(&oracle, reg, concept, &pairs)?;
    let agree = generic.iter().zip(&direct).filter(|(g, d)| g == d).count();

    let _ = writeln!(out, "bench {} {ty}: n={} seed={} depth={}", concept.name(), a.n, a.seed, a.depth);
    let _ = writeln!(out, "generic  {} ops/sec ({:.3} ms)", ops_per_sec(a.n, t_generic), t_generic * 1e3);
    let _ = writeln!(out, "direct   {} ops/sec ({:.3} ms)", ops_per_sec(a.n, t_direct), t_direct * 1e3);
    let _ = writeln!(out, "agreement {agree}/{}", a.n);
    if agree != a.n {
        let first = generic.iter().zip(&direct).position(|(g, d)| g != d).unwrap_or(0);
        let (x, y) = &pairs[first];
        let _ = writeln!(out, "first disagreement at pair {first}: ({x}, {y})");
        return Ok(EXIT_FAIL);
    }
    Ok(EXIT_OK)
}
