use std::time::Instant;

use super::enumerate::{enumerate, enumerate_functions, enumerate_reps};
use super::search::{search, SearchResult};
use super::{CheckOutcome, DomainConfig, LawError, LawId, LawReport, Status, Witness};
use crate::derive::{
    derive_bundle, direct_oracle, g_combine, g_empty, g_eq, g_leq, has_oracle, Concept, DeriveError, FnRef,
    InstanceBundle, Registry,
};
use crate::rep::{build_rep, conforms, from_shape, to_shape, GValue, RepError, RepShape};
use crate::schema::{ConstructorDecl, DataDecl, Schema, TypeExpr};
use crate::value::Value;

/// A carrier of the algebraic concepts: values with a direct bundle, or
/// representation values with the generic operations.
trait Carrier: Sync {
    type Item: Clone + PartialEq + Sync + Into<Witness>;
    fn eq(&self, a: &Self::Item, b: &Self::Item) -> Result<bool, DeriveError>;
    fn leq(&self, a: &Self::Item, b: &Self::Item) -> Result<bool, DeriveError>;
    fn combine(&self, a: &Self::Item, b: &Self::Item) -> Result<Self::Item, DeriveError>;
    fn empty(&self) -> Result<Self::Item, DeriveError>;
}

struct Direct<'a> {
    bundle: &'a InstanceBundle,
    reg: &'a Registry,
}

impl Carrier for Direct<'_> {
    type Item = Value;
    fn eq(&self, a: &Value, b: &Value) -> Result<bool, DeriveError> {
        self.bundle.eq(self.reg, a, b)
    }
    fn leq(&self, a: &Value, b: &Value) -> Result<bool, DeriveError> {
        self.bundle.leq(self.reg, a, b)
    }
    fn combine(&self, a: &Value, b: &Value) -> Result<Value, DeriveError> {
        self.bundle.combine(self.reg, a, b)
    }
    fn empty(&self) -> Result<Value, DeriveError> {
        self.bundle.empty(self.reg)
    }
}

struct OverRep<'a> {
    shape: &'a RepShape,
    reg: &'a Registry,
}

impl Carrier for OverRep<'_> {
    type Item = GValue;
    fn eq(&self, a: &GValue, b: &GValue) -> Result<bool, DeriveError> {
        g_eq(self.shape, a, b, self.reg)
    }
    fn leq(&self, a: &GValue, b: &GValue) -> Result<bool, DeriveError> {
        g_leq(self.shape, a, b, self.reg)
    }
    fn combine(&self, a: &GValue, b: &GValue) -> Result<GValue, DeriveError> {
        g_combine(self.shape, a, b, self.reg)
    }
    fn empty(&self) -> Result<GValue, DeriveError> {
        g_empty(self.shape, self.reg)
    }
}

fn outcome<T: Clone + Into<Witness>>(res: SearchResult, pick: impl Fn(usize, usize) -> T) -> CheckOutcome {
    let counterexample =
        res.failure.as_ref().map(|idx| idx.iter().enumerate().map(|(axis, &i)| pick(axis, i).into()).collect());
    CheckOutcome {
        status: if counterexample.is_some() { Status::Fail } else { Status::Pass },
        cases_checked: res.checked,
        total_cases: res.total,
        truncated: res.truncated,
        counterexample,
        note: None,
    }
}

fn algebraic<C: Carrier>(
    law: LawId,
    c: &C,
    items: &[C::Item],
    cfg: &DomainConfig,
    workers: usize,
) -> Result<CheckOutcome, LawError> {
    let axes = vec![items.len(); law.arity() as usize];
    let unit = match law {
        LawId::MonLIdent | LawId::MonRIdent => Some(c.empty()?),
        _ => None,
    };
    let res = search(&axes, cfg.max_cases, workers, |t| -> Result<bool, LawError> {
        let x = &items[t[0]];
        let y = || &items[t[1]];
        let z = || &items[t[2]];
        Ok(match law {
            LawId::EqRefl => c.eq(x, x)?,
            LawId::EqSym => !c.eq(x, y())? || c.eq(y(), x)?,
            LawId::EqTrans => !(c.eq(x, y())? && c.eq(y(), z())?) || c.eq(x, z())?,
            LawId::OrdRefl => c.leq(x, x)?,
            LawId::OrdTotal => c.leq(x, y())? || c.leq(y(), x)?,
            LawId::OrdAnti => !(c.leq(x, y())? && c.leq(y(), x)?) || c.eq(x, y())?,
            LawId::OrdTrans => !(c.leq(x, y())? && c.leq(y(), z())?) || c.leq(x, z())?,
            LawId::SgAssoc => c.combine(x, &c.combine(y(), z())?)? == c.combine(&c.combine(x, y())?, z())?,
            LawId::MonLIdent => c.combine(unit.as_ref().expect("unit"), x)? == *x,
            LawId::MonRIdent => c.combine(x, unit.as_ref().expect("unit"))? == *x,
            other => unreachable!("{other} is not an algebraic law"),
        })
    })?;
    Ok(outcome(res, |_, i| items[i].clone()))
}

/// Runs laws against bundles drawn from a fixed registry.
pub struct Checker<'a> {
    pub schema: &'a Schema,
    pub registry: &'a Registry,
    pub cfg: &'a DomainConfig,
    pub workers: usize,
}

impl Checker<'_> {
    /// Checks one law. `oracle` is required for [`LawId::OracleEquiv`] and
    /// ignored otherwise.
    pub fn check_law(
        &self,
        law: LawId,
        bundle: &InstanceBundle,
        oracle: Option<&InstanceBundle>,
    ) -> Result<LawReport, LawError> {
        let started = Instant::now();
        let concept = bundle.concept();
        let applies = match law.concept() {
            Some(Concept::Eq) => matches!(concept, Concept::Eq | Concept::Ord),
            Some(Concept::Semigroup) => matches!(concept, Concept::Semigroup | Concept::Monoid),
            Some(c) => c == concept,
            None => law == LawId::OracleEquiv,
        };
        if !applies {
            return Err(LawError::ConceptMismatch { law, concept });
        }
        let outcome = match (law, concept) {
            (LawId::OracleEquiv, _) => {
                let oracle = oracle.ok_or_else(|| DeriveError::NoOracle { concept, ty: bundle.ty().to_string() })?;
                if oracle.concept() != concept || oracle.ty() != bundle.ty() {
                    return Err(LawError::NotApplicable(format!(
                        "oracle for {} {} does not match {} {}",
                        oracle.concept(),
                        oracle.ty(),
                        concept,
                        bundle.ty()
                    )));
                }
                self.oracle_equiv(bundle, oracle)?
            }
            (_, Concept::Functor) => self.functor_law(law, bundle)?,
            _ => {
                let items = enumerate(bundle.ty(), self.cfg, self.schema)?;
                algebraic(law, &Direct { bundle, reg: self.registry }, &items, self.cfg, self.workers)?
            }
        };
        Ok(self.report(bundle.ty(), concept.name(), law, outcome, started))
    }

    fn report(&self, ty: &TypeExpr, concept: &str, law: LawId, outcome: CheckOutcome, started: Instant) -> LawReport {
        LawReport {
            type_name: ty.head(),
            ground_args: ty.args().iter().map(ToString::to_string).collect(),
            concept: concept.to_string(),
            law,
            outcome,
            wall_time_ms: Some(started.elapsed().as_secs_f64() * 1e3),
        }
    }

    /// The element-applied type a functor bundle acts on.
    fn functor_carrier(&self, bundle: &InstanceBundle) -> TypeExpr {
        let mut args = bundle.ground_args().to_vec();
        args.push(TypeExpr::Prim(self.cfg.functor_element));
        TypeExpr::Named(bundle.type_name(), args)
    }

    fn functor_law(&self, law: LawId, bundle: &InstanceBundle) -> Result<CheckOutcome, LawError> {
        let elem = self.cfg.functor_element;
        let items = enumerate(&self.functor_carrier(bundle), self.cfg, self.schema)?;
        let reg = self.registry;
        if law == LawId::FunId {
            let id = FnRef::identity(elem, &self.cfg.values_of(elem));
            let res = search(&[items.len()], self.cfg.max_cases, self.workers, |t| -> Result<bool, LawError> {
                Ok(bundle.fmap(reg, &id, &items[t[0]])? == items[t[0]])
            })?;
            return Ok(outcome(res, |_, i| items[i].clone()));
        }
        let fns = enumerate_functions(elem, elem, self.cfg);
        let m = fns.len();
        let composed: Vec<FnRef> =
            fns.iter().flat_map(|f| fns.iter().map(move |g| f.compose(g))).collect::<Result<_, _>>()?;
        let res = search(&[m, m, items.len()], self.cfg.max_cases, self.workers, |t| -> Result<bool, LawError> {
            let (f, g, z) = (&fns[t[0]], &fns[t[1]], &items[t[2]]);
            let lhs = bundle.fmap(reg, &composed[t[0] * m + t[1]], z)?;
            let rhs = bundle.fmap(reg, f, &bundle.fmap(reg, g, z)?)?;
            Ok(lhs == rhs)
        })?;
        Ok(outcome(res, |axis, i| -> Witness {
            if axis < 2 {
                fns[i].clone().into()
            } else {
                items[i].clone().into()
            }
        }))
    }

    fn oracle_equiv(&self, derived: &InstanceBundle, oracle: &InstanceBundle) -> Result<CheckOutcome, LawError> {
        let reg = self.registry;
        let cfg = self.cfg;
        if derived.concept() == Concept::Functor {
            let elem = cfg.functor_element;
            let items = enumerate(&self.functor_carrier(derived), cfg, self.schema)?;
            let fns = enumerate_functions(elem, elem, cfg);
            let res = search(&[fns.len(), items.len()], cfg.max_cases, self.workers, |t| -> Result<bool, LawError> {
                let (f, z) = (&fns[t[0]], &items[t[1]]);
                Ok(derived.fmap(reg, f, z)? == oracle.fmap(reg, f, z)?)
            })?;
            return Ok(outcome(res, |axis, i| -> Witness {
                if axis == 0 {
                    fns[i].clone().into()
                } else {
                    items[i].clone().into()
                }
            }));
        }
        if derived.concept() == Concept::Monoid && derived.empty(reg)? != oracle.empty(reg)? {
            return Ok(CheckOutcome {
                status: Status::Fail,
                cases_checked: 1,
                total_cases: 1,
                truncated: false,
                counterexample: Some(Vec::new()),
                note: Some("identity elements differ".into()),
            });
        }
        let items = enumerate(derived.ty(), cfg, self.schema)?;
        let res = search(&[items.len(), items.len()], cfg.max_cases, self.workers, |t| -> Result<bool, LawError> {
            let (x, y) = (&items[t[0]], &items[t[1]]);
            Ok(match derived.concept() {
                Concept::Eq => derived.eq(reg, x, y)? == oracle.eq(reg, x, y)?,
                Concept::Ord => {
                    derived.eq(reg, x, y)? == oracle.eq(reg, x, y)?
                        && derived.leq(reg, x, y)? == oracle.leq(reg, x, y)?
                }
                _ => derived.combine(reg, x, y)? == oracle.combine(reg, x, y)?,
            })
        })?;
        Ok(outcome(res, |_, i| items[i].clone()))
    }

    /// The three round-trip laws of the representation of `type_name` at
    /// ground `args`.
    pub fn check_iso(&self, type_name: &str, args: &[TypeExpr]) -> Result<Vec<LawReport>, LawError> {
        let decl = self.schema.decl(type_name)?;
        let ty = TypeExpr::Named(type_name.to_string(), args.to_vec());
        let shape = build_rep(decl, args)?;
        let values = enumerate(&ty, self.cfg, self.schema)?;
        let (_, direct) = enumerate_reps(self.schema, type_name, args, self.cfg)?;
        let cfg = self.cfg;
        let mut reports = Vec::with_capacity(3);

        let started = Instant::now();
        let res = search(&[values.len()], cfg.max_cases, self.workers, |t| -> Result<bool, LawError> {
            let v = &values[t[0]];
            Ok(from_shape(decl, &shape, v).and_then(|g| to_shape(decl, &shape, &g)).is_ok_and(|back| back == *v))
        })?;
        reports.push(self.report(&ty, "iso", LawId::IsoToFrom, outcome(res, |_, i| values[i].clone()), started));

        // Representation values come both from mapping `from` over the
        // enumeration and from generating the shape directly.
        let started = Instant::now();
        let mut reps = Vec::with_capacity(values.len() + direct.len());
        for v in &values {
            reps.push(from_shape(decl, &shape, v)?);
        }
        reps.extend(direct);
        let res = search(&[reps.len()], cfg.max_cases, self.workers, |t| -> Result<bool, LawError> {
            let g = &reps[t[0]];
            Ok(conforms(&shape, g)
                && to_shape(decl, &shape, g).and_then(|v| from_shape(decl, &shape, &v)).is_ok_and(|back| back == *g))
        })?;
        reports.push(self.report(&ty, "iso", LawId::IsoFromTo, outcome(res, |_, i| reps[i].clone()), started));

        let started = Instant::now();
        let images = &reps[..values.len()];
        let n = values.len();
        let res = search(&[n, n], cfg.max_cases, self.workers, |t| -> Result<bool, LawError> {
            Ok(images[t[0]] != images[t[1]] || values[t[0]] == values[t[1]])
        })?;
        reports.push(self.report(&ty, "iso", LawId::FromInj, outcome(res, |_, i| values[i].clone()), started));
        Ok(reports)
    }
}

/// How a composite type is built from its components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreservationKind {
    /// A single constructor holding both components.
    Product,
    /// One constructor per component.
    Sum,
    /// A type and its generic representation.
    Iso,
}

/// A schema, a domain configuration, and the registry of instances derived
/// so far.
#[derive(Clone, Debug)]
pub struct Session {
    schema: Schema,
    cfg: DomainConfig,
    workers: usize,
    registry: Registry,
}

impl Session {
    pub fn new(schema: Schema, cfg: DomainConfig) -> Result<Session, LawError> {
        cfg.validate()?;
        Ok(Session { schema, cfg, workers: 1, registry: Registry::with_primitives() })
    }

    pub fn with_workers(mut self, workers: usize) -> Session {
        self.workers = workers.max(1);
        self
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn config(&self) -> &DomainConfig {
        &self.cfg
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn checker(&self) -> Checker<'_> {
        Checker { schema: &self.schema, registry: &self.registry, cfg: &self.cfg, workers: self.workers }
    }

    pub fn derive(
        &mut self,
        type_name: &str,
        args: &[TypeExpr],
        concept: Concept,
    ) -> Result<InstanceBundle, DeriveError> {
        derive_bundle(&self.schema, type_name, args, concept, &mut self.registry)
    }

    /// Derives `concept` at `type_name args` and checks its law suite,
    /// followed by agreement with the hand-written instance when one
    /// exists. For `Functor`, `args` omit the last parameter.
    ///
    /// A refused or impossible derivation yields `unsupported` reports.
    pub fn check_concept(
        &mut self,
        type_name: &str,
        args: &[TypeExpr],
        concept: Concept,
    ) -> Result<Vec<LawReport>, LawError> {
        let mut laws = LawId::suite(concept).to_vec();
        let oracle = if has_oracle(type_name, concept) {
            laws.push(LawId::OracleEquiv);
            Some(direct_oracle(type_name, args, concept))
        } else {
            None
        };
        let started = Instant::now();
        let bundle = match self.derive(type_name, args, concept) {
            Ok(b) => b,
            Err(
                e @ (DeriveError::Unsupported { .. }
                | DeriveError::MissingInstance { .. }
                | DeriveError::Rep(RepError::UnsupportedOccurrence { .. })),
            ) => {
                let ty = TypeExpr::Named(type_name.to_string(), args.to_vec());
                let note = e.to_string();
                return Ok(laws
                    .into_iter()
                    .map(|law| LawReport {
                        type_name: type_name.to_string(),
                        ground_args: ty.args().iter().map(ToString::to_string).collect(),
                        concept: concept.name().to_string(),
                        law,
                        outcome: CheckOutcome::unsupported(note.clone()),
                        wall_time_ms: Some(started.elapsed().as_secs_f64() * 1e3),
                    })
                    .collect());
            }
            Err(e) => return Err(e.into()),
        };
        let oracle = oracle.transpose()?;
        let checker = self.checker();
        laws.into_iter().map(|law| checker.check_law(law, &bundle, oracle.as_ref())).collect()
    }

    pub fn check_iso(&self, type_name: &str, args: &[TypeExpr]) -> Result<Vec<LawReport>, LawError> {
        self.checker().check_iso(type_name, args)
    }

    /// Checks `concept` on each component and then on the composite built
    /// from them. Composite reports carry a note when a component failed,
    /// since the composite result is then not implied.
    pub fn check_preservation(
        &mut self,
        kind: PreservationKind,
        concept: Concept,
        components: &[TypeExpr],
    ) -> Result<Vec<LawReport>, LawError> {
        if concept == Concept::Functor {
            return Err(LawError::NotApplicable("preservation is checked for ground concepts only".into()));
        }
        let expected = if kind == PreservationKind::Iso { 1 } else { 2 };
        if components.len() != expected {
            return Err(LawError::NotApplicable(format!(
                "{kind:?} preservation takes {expected} component type(s), got {}",
                components.len()
            )));
        }
        for c in components {
            self.schema.check_ground(c)?;
        }
        let mut reports = Vec::new();
        for c in components {
            reports.extend(self.check_concept(&c.head(), c.args(), concept)?);
        }
        let precondition_failed = reports.iter().any(|r| r.status() == Status::Fail);

        let composite = match kind {
            PreservationKind::Iso => self.rep_suite(concept, &components[0])?,
            PreservationKind::Product | PreservationKind::Sum => {
                let base = if kind == PreservationKind::Product { "Product" } else { "Sum" };
                let mut name = base.to_string();
                let mut n = 1;
                while self.schema.get(&name).is_some() {
                    n += 1;
                    name = format!("{base}{n}");
                }
                let ctors = if kind == PreservationKind::Product {
                    vec![ConstructorDecl::new(format!("Mk{name}"), components.to_vec())]
                } else {
                    vec![
                        ConstructorDecl::new(format!("In{name}L"), vec![components[0].clone()]),
                        ConstructorDecl::new(format!("In{name}R"), vec![components[1].clone()]),
                    ]
                };
                let mut schema = self.schema.clone();
                schema.insert(DataDecl::new(name.clone(), Vec::new(), ctors))?;
                let mut sub =
                    Session { schema, cfg: self.cfg.clone(), workers: self.workers, registry: self.registry.clone() };
                sub.check_concept(&name, &[], concept)?
            }
        };
        reports.extend(composite.into_iter().map(|mut r| {
            if precondition_failed && r.outcome.note.is_none() {
                r.outcome.note = Some("a component failed its laws".into());
            }
            r
        }));
        Ok(reports)
    }

    /// The law suite of `concept` evaluated directly on representation
    /// values of `ty` with the generic operations.
    fn rep_suite(&mut self, concept: Concept, ty: &TypeExpr) -> Result<Vec<LawReport>, LawError> {
        let TypeExpr::Named(name, args) = ty else {
            return Err(LawError::NotApplicable(format!("`{ty}` has no generic representation")));
        };
        let label = TypeExpr::Named("Rep".into(), vec![ty.clone()]);
        let laws = LawId::suite(concept);
        let started = Instant::now();
        if let Err(e) = self.derive(name, args, concept) {
            if !e.is_unsupported() && !matches!(e, DeriveError::MissingInstance { .. }) {
                return Err(e.into());
            }
            let checker = self.checker();
            return Ok(laws
                .iter()
                .map(|&law| {
                    checker.report(&label, concept.name(), law, CheckOutcome::unsupported(e.to_string()), started)
                })
                .collect());
        }
        let (shape, reps) = enumerate_reps(&self.schema, name, args, &self.cfg)?;
        let checker = self.checker();
        let carrier = OverRep { shape: &shape, reg: &self.registry };
        laws.iter()
            .map(|&law| {
                let started = Instant::now();
                let o = algebraic(law, &carrier, &reps, &self.cfg, self.workers)?;
                Ok(checker.report(&label, concept.name(), law, o, started))
            })
            .collect()
    }
}
