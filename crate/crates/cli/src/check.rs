use std::io::Write;

use lawforge_core::{Concept, DomainConfig, LawReport, Session, Status};

use crate::report::ReportDocument;
use crate::{load_schema, resolve_args, CheckArgs, CmdResult, ConceptArg, Failure, EXIT_FAIL, EXIT_OK};

fn config(a: &CheckArgs) -> Result<DomainConfig, Failure> {
    let mut cfg = DomainConfig::default();
    if let Some(d) = a.depth {
        cfg.depth = d;
    }
    if let Some(r) = &a.int_domain {
        cfg.int_domain = r.clone().collect();
    }
    if let Some(m) = a.max_cases {
        cfg.max_cases = m;
    }
    cfg.include_nan = a.include_nan;
    cfg.functor_element = a.element.into();
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(cfg)
}

fn concepts(arg: ConceptArg) -> (Vec<Concept>, bool) {
    match arg {
        ConceptArg::All => (Concept::ALL.to_vec(), true),
        ConceptArg::Iso => (Vec::new(), true),
        ConceptArg::Eq => (vec![Concept::Eq], false),
        ConceptArg::Ord => (vec![Concept::Ord], false),
        ConceptArg::Semigroup => (vec![Concept::Semigroup], false),
        ConceptArg::Monoid => (vec![Concept::Monoid], false),
        ConceptArg::Functor => (vec![Concept::Functor], false),
    }
}

pub(crate) fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> CmdResult {
    let schema = load_schema(&a.file)?;
    let cfg = config(a)?;
    if a.workers == 0 {
        return Err(Failure::usage("--workers must be at least 1"));
    }
    let targets: Vec<String> = match &a.type_name {
        Some(name) => vec![name.clone()],
        None if a.args.is_some() => return Err(Failure::usage("--args requires --type")),
        None => schema.decls().map(|d| d.name.clone()).collect(),
    };
    let (wanted, with_iso) = concepts(a.concept);
    let mut session =
        Session::new(schema.clone(), cfg.clone()).map_err(|e| Failure::usage(e.to_string()))?.with_workers(a.workers);
    let law_error = |e: lawforge_core::LawError| Failure::usage(e.to_string());

    let mut reports: Vec<LawReport> = Vec::new();
    for name in &targets {
        let decl = schema.decl(name).map_err(|e| Failure::usage(e.to_string()))?;
        let n = decl.param_count();
        let args = resolve_args(&schema, name, if a.type_name.is_some() { a.args.as_deref() } else { None })?;
        let functor_only = wanted == [Concept::Functor];
        if args.len() != n && !(functor_only && args.len() + 1 == n) {
            return Err(Failure::usage(format!("`{name}` expects {n} type argument(s), got {}", args.len())));
        }
        for &c in &wanted {
            let cargs = if c == Concept::Functor {
                if n == 0 {
                    if a.concept == ConceptArg::All {
                        continue;
                    }
                    return Err(Failure::usage(format!("`{name}` has no parameter to map over")));
                }
                &args[..n - 1]
            } else {
                &args[..]
            };
            reports.extend(session.check_concept(name, cargs, c).map_err(law_error)?);
        }
        if with_iso {
            reports.extend(session.check_iso(name, &args).map_err(law_error)?);
        }
    }
    if !a.timings {
        for r in &mut reports {
            r.wall_time_ms = None;
        }
    }

    for r in &reports {
        let _ = writeln!(out, "{}", r.summary_line());
    }
    let doc = ReportDocument::new(cfg, reports);
    let s = doc.summary;
    let noun = if s.total == 1 { "law" } else { "laws" };
    let _ = writeln!(out, "{} pass, {} fail, {} unsupported ({} {noun})", s.pass, s.fail, s.unsupported, s.total);
    if let Some(path) = &a.json {
        std::fs::write(path, doc.to_json())
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if doc.reports.iter().any(|r| r.status() == Status::Fail) { EXIT_FAIL } else { EXIT_OK })
}
