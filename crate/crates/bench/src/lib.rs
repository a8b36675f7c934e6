//! Inputs shared by the micro-benchmarks: derived and hand-written bundles
//! for the same type, plus seeded random values to run them on.

use lawforge_core::{
    derive_bundle, direct_oracle, Concept, FnRef, InstanceBundle, PrimType, Registry, Schema, TypeExpr, Value,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A derived bundle and the hand-written one for the same instance, with
/// the registry both need.
pub struct Pair {
    pub registry: Registry,
    pub derived: InstanceBundle,
    pub direct: InstanceBundle,
}

impl Pair {
    pub fn new(type_name: &str, args: &[TypeExpr], concept: Concept) -> Pair {
        let schema = Schema::with_builtins();
        let mut registry = Registry::with_primitives();
        let derived = derive_bundle(&schema, type_name, args, concept, &mut registry).expect("derivable");
        let direct = direct_oracle(type_name, args, concept).expect("oracle exists");
        Pair { registry, derived, direct }
    }
}

pub fn list(xs: &[i64]) -> Value {
    xs.iter()
        .rev()
        .fold(Value::con("List", "Nil", vec![]), |acc, &x| Value::con("List", "Cons", vec![Value::Int(x), acc]))
}

/// `count` lists of exactly `len` elements drawn from `0..4`. The small
/// range makes long shared prefixes, so comparisons walk deep.
pub fn int_lists(count: usize, len: usize, seed: u64) -> Vec<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| list(&(0..len).map(|_| rng.random_range(0..4)).collect::<Vec<_>>())).collect()
}

pub fn triples(count: usize, seed: u64) -> Vec<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let fields = (0..3).map(|_| Value::Int(rng.random_range(-100..100))).collect();
            Value::con("Triple", "MkTriple", fields)
        })
        .collect()
}

/// `x + 1` on `0..4`, wrapping to 0.
pub fn succ_mod4() -> FnRef {
    FnRef::new("succ", PrimType::Int, PrimType::Int, (0..4).map(|i| (Value::Int(i), Value::Int((i + 1) % 4))).collect())
}
