use std::collections::BTreeMap;

use lietp_core::algebra::{self, catalog as builtin, AlgebraSpec, CatalogParams, FamilyKind, SampleRange};
use lietp_core::derivations::{
    degree_reports, enumerate_window, solve, solve_all_degrees, DegreeReport, DegreeSel, DerivationProblem,
    MapReport, SolveOptions, Window,
};
use lietp_core::dsl::{self, CompileOptions, DslError};
use lietp_core::exactnum::Scalar;
use lietp_core::group::{GroupElement, GroupSpec};
use lietp_core::tpstruct::{verify_all, Expect, ProductFile, VerifyReport};
use serde_json::{json, Value};

use crate::args::*;
use crate::table;
use crate::{Outcome, UsageError};

/// Witnesses kept per law in tp reports.
const WITNESS_LIMIT: usize = 5;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn scalar(text: &str) -> Result<Scalar, UsageError> {
    text.parse::<Scalar>().map_err(|e| usage(format!("{text:?} is not an exact number: {e}")))
}

pub fn parse_range(text: &str) -> Result<(i64, i64), UsageError> {
    let bad = || usage(format!("{text:?} is not a range like -3..3"));
    let (lo, hi) = text.trim().split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(usage(format!("empty range {text}")));
    }
    Ok((lo, hi))
}

fn parse_box(text: &str) -> Result<Vec<(i64, i64)>, UsageError> {
    text.split(',').map(parse_range).collect()
}

fn parse_bindings(params: &[String]) -> Result<BTreeMap<String, Scalar>, UsageError> {
    let mut out = BTreeMap::new();
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("--param {p:?}: expected NAME=VALUE")))?;
        out.insert(k.trim().to_string(), scalar(v.trim())?);
    }
    Ok(out)
}

fn group_of(a: &AlgebraArgs) -> Result<Option<GroupSpec>, UsageError> {
    match (&a.gens, a.rank) {
        (Some(gens), rank) => {
            let gens = gens.iter().map(|g| scalar(g)).collect::<Result<Vec<_>, _>>()?;
            if rank.is_some_and(|r| r != gens.len()) {
                return Err(usage("--rank disagrees with the number of --gens"));
            }
            Ok(Some(GroupSpec::new(gens)?))
        }
        (None, Some(r)) => Ok(Some(GroupSpec::formal(r)?)),
        (None, None) => Ok(None),
    }
}

fn algebra_config(a: &AlgebraArgs) -> Value {
    json!({
        "name": a.name,
        "file": a.file.as_ref().map(|p| p.display().to_string()),
        "lambda": a.lambda,
        "rank": a.rank,
        "gens": a.gens,
        "params": a.params,
    })
}

fn dsl_error(path: &str, e: &DslError) -> UsageError {
    usage(format!("{path}:{e}"))
}

pub fn load_algebra(a: &AlgebraArgs) -> Result<AlgebraSpec, UsageError> {
    let group = group_of(a)?;
    match (&a.name, &a.file) {
        (Some(name), None) => {
            if !a.params.is_empty() {
                return Err(usage("--param applies to --file only; use --lambda for g"));
            }
            let lambda = a.lambda.as_deref().map(scalar).transpose()?;
            let params = CatalogParams { lambda, group: group.unwrap_or_else(GroupSpec::integers) };
            Ok(builtin(name, &params)?)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let mut bindings = parse_bindings(&a.params)?;
            if let Some(l) = &a.lambda {
                bindings.insert("lambda".into(), scalar(l)?);
            }
            let opts = CompileOptions { bindings, group, ..CompileOptions::default() };
            let p = path.display().to_string();
            let ast = dsl::parse(&text).map_err(|e| dsl_error(&p, &e))?;
            dsl::compile(&ast, &opts).map_err(|e| dsl_error(&p, &e))
        }
        _ => Err(usage("give exactly one of --name or --file")),
    }
}

fn kind_name(k: FamilyKind) -> String {
    match k {
        FamilyKind::Central => "central".into(),
        FamilyKind::Graded { index: None } => "graded".into(),
        FamilyKind::Graded { index: Some(d) } => format!("indexed {d}"),
    }
}

fn algebra_summary(alg: &AlgebraSpec) -> Value {
    json!({
        "name": alg.name(),
        "rank": alg.rank(),
        "generators": alg.group().generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "params": alg.params().iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<BTreeMap<_, _>>(),
        "families": alg.families().iter().map(|f| json!({"name": f.name, "kind": kind_name(f.kind)})).collect::<Vec<_>>(),
        "trivial_half_derivations": alg.trivial_half_derivations(),
    })
}

pub fn catalog(a: &CatalogArgs) -> Result<Outcome, UsageError> {
    let config = json!({ "algebra": algebra_config(&a.alg) });
    if a.alg.name.is_none() && a.alg.file.is_none() {
        let entries = algebra::entries();
        let rows: Vec<Vec<String>> = entries
            .iter()
            .map(|e| vec![e.name.into(), e.params.into(), e.indices.into(), e.title.into()])
            .collect();
        let result = json!({
            "entries": entries.iter().map(|e| json!({
                "name": e.name, "title": e.title, "params": e.params, "indices": e.indices,
            })).collect::<Vec<_>>(),
        });
        let table = table::render(&["name", "params", "indices", "algebra"], &rows);
        return Ok(Outcome { config, result, table, ok: true });
    }
    let alg = load_algebra(&a.alg)?;
    let rows: Vec<Vec<String>> =
        alg.families().iter().map(|f| vec![f.name.clone(), kind_name(f.kind)]).collect();
    let mut table = format!("{} (rank {})\n", alg.name(), alg.rank());
    for (k, v) in alg.params() {
        table.push_str(&format!("{k} = {v}\n"));
    }
    table.push_str(&table::render(&["family", "kind"], &rows));
    Ok(Outcome { config, result: json!({ "algebra": algebra_summary(&alg) }), table, ok: true })
}

pub fn jacobi(a: &JacobiArgs) -> Result<Outcome, UsageError> {
    if a.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let alg = load_algebra(&a.alg)?;
    let mut range = SampleRange { degree: parse_range(&a.degrees)?, ..SampleRange::default() };
    if let Some(ix) = &a.indices {
        let (lo, hi) = parse_range(ix)?;
        range.int_index = (lo, hi);
        range.nat_index = (lo.max(0), hi);
        if hi < 0 {
            return Err(usage("--indices must reach a non-negative index"));
        }
    }
    let config = json!({
        "algebra": algebra_config(&a.alg),
        "samples": a.samples,
        "seed": a.seed,
        "degrees": range.degree,
        "nat_indices": range.nat_index,
        "int_indices": range.int_index,
    });
    let audit = algebra::jacobi_audit(&alg, a.samples, a.seed, &range)?;
    let mut table = format!(
        "jacobi {}: {} triples, seed {} ({})\nzero defects: {}/{}\n",
        alg.name(),
        audit.samples,
        audit.seed,
        audit.prng,
        audit.zero_defects,
        audit.samples
    );
    let cov: Vec<Vec<String>> = audit.coverage.iter().map(|(k, v)| vec![k.clone(), v.to_string()]).collect();
    table.push_str(&table::render(&["family", "arguments"], &cov));
    for w in audit.failures.iter().take(WITNESS_LIMIT) {
        table.push_str(&format!("FAIL J({}, {}, {}) = {}\n", w.x, w.y, w.z, w.defect));
    }
    if audit.failures.len() > WITNESS_LIMIT {
        table.push_str(&format!("... {} failing triples in total\n", audit.failures.len()));
    }
    let ok = audit.passed();
    Ok(Outcome { config, result: serde_json::to_value(&audit)?, table, ok })
}

fn build_window(alg: &AlgebraSpec, w: &WindowArgs, default_gbox: &str, default_ibox: Option<&str>, margin: i64) -> Result<Window, UsageError> {
    let gbox = parse_box(w.gbox.as_deref().unwrap_or(default_gbox))?;
    let indexed = alg.families().iter().any(|f| f.index_domain().is_some());
    let ibox = match (&w.ibox, default_ibox) {
        (Some(s), _) => Some(parse_range(s)?),
        (None, Some(d)) if indexed => Some(parse_range(d)?),
        (None, _) if indexed => return Err(usage(format!("{} has indexed families; give --ibox", alg.name()))),
        _ => None,
    };
    let fams: Option<Vec<&str>> = w.families.as_ref().map(|v| v.iter().map(String::as_str).collect());
    Ok(Window::new(alg, &gbox, ibox, fams.as_deref(), margin)?)
}

pub fn derive(a: &DeriveArgs) -> Result<Outcome, UsageError> {
    let alg = load_algebra(&a.alg)?;
    let mut window = build_window(&alg, &a.window, "-6..6", None, a.margin)?;
    if let Some(p) = a.pad {
        window = window.with_output_pad(p);
    }
    let delta = scalar(&a.delta)?;
    let opts = SolveOptions::default();
    let config = json!({
        "algebra": algebra_config(&a.alg),
        "window": window.report(&alg),
        "delta": delta.to_string(),
        "degree": a.degree,
    });
    let (degrees, reports): (Vec<Option<GroupElement>>, Vec<DegreeReport>) = match a.degree.as_str() {
        "all" => {
            let solves = solve_all_degrees(&alg, &delta, &window, &opts)?;
            let reports = degree_reports(&alg, &solves);
            (solves.into_iter().map(|(g, _)| Some(g)).collect(), reports)
        }
        mode => {
            let sel = if mode == "mixed" {
                DegreeSel::All
            } else {
                let g: GroupElement = mode.parse()?;
                if g.rank() != alg.rank() {
                    return Err(usage(format!("degree {g} has rank {}, algebra has rank {}", g.rank(), alg.rank())));
                }
                DegreeSel::Single(g)
            };
            let problem = DerivationProblem { alg: &alg, delta: delta.clone(), degree: sel.clone(), window: window.clone() };
            let s = solve(&problem, &opts)?;
            let g = match sel {
                DegreeSel::Single(g) => Some(g),
                DegreeSel::All => None,
            };
            (vec![g], vec![s.report(&alg)])
        }
    };
    let total: usize = reports.iter().map(|r| r.interior_rank).sum();
    let nonzero: Vec<&str> = reports.iter().filter(|r| r.interior_rank > 0).map(|r| r.degree.as_str()).collect();
    let result = json!({
        "total_interior_rank": total,
        "nonzero_degrees": nonzero,
        "degrees": reports,
    });
    let mut table = format!(
        "{}-derivations of {} on {} (margin {}, index pad {})\n",
        delta,
        alg.name(),
        window.gbox().iter().map(|(l, h)| format!("[{l},{h}]")).collect::<Vec<_>>().join("x"),
        window.margin(),
        window.output_pad()
    );
    let cells: Vec<(Option<GroupElement>, usize)> =
        degrees.iter().cloned().zip(reports.iter().map(|r| r.interior_rank)).collect();
    table.push_str(&table::rank_grid(&cells));
    table.push_str(&format!("total interior rank: {total}\n"));
    for r in reports.iter().filter(|r| r.interior_rank > 0) {
        for (k, v) in r.interior_basis.iter().enumerate() {
            let shown: Vec<String> =
                v.iter().take(a.show).map(|t| format!("{}*({} -> {})", t.coeff, t.in_symbol, t.out_symbol)).collect();
            let more = if v.len() > a.show { format!(" + ... ({} terms)", v.len()) } else { String::new() };
            table.push_str(&format!("degree {} basis {}: {}{more}\n", r.degree, k + 1, shown.join(" + ")));
        }
    }
    Ok(Outcome { config, result, table, ok: true })
}

fn law_json(r: &VerifyReport) -> Value {
    json!({
        "law": r.law,
        "passed": r.passed(),
        "checks": r.checks,
        "skipped": r.skipped,
        "failure_count": r.failures.len(),
        "witnesses": r.failures.iter().take(WITNESS_LIMIT).collect::<Vec<_>>(),
    })
}

fn left_mult_json(v: &[(String, MapReport)]) -> Value {
    let failing: Vec<Value> = v
        .iter()
        .filter(|(_, r)| !r.passed())
        .take(WITNESS_LIMIT)
        .map(|(z, r)| json!({ "z": z, "witness": r.failures.first() }))
        .collect();
    json!({
        "passed": v.iter().all(|(_, r)| r.passed()),
        "elements": v.len(),
        "failing_elements": v.iter().filter(|(_, r)| !r.passed()).count(),
        "equations_checked": v.iter().map(|(_, r)| r.equations_checked).sum::<usize>(),
        "equations_skipped": v.iter().map(|(_, r)| r.equations_skipped).sum::<usize>(),
        "failures": failing,
    })
}

pub fn tp(a: &TpArgs) -> Result<Outcome, UsageError> {
    let alg = load_algebra(&a.alg)?;
    let window = build_window(&alg, &a.window, "-2..2", Some("0..2"), 0)?;
    let text = std::fs::read_to_string(&a.product).map_err(|e| usage(format!("{}: {e}", a.product.display())))?;
    let file = ProductFile::from_json(&text)?;
    let product = file.build(&alg)?;
    let symbols = enumerate_window(&alg, &window)?;
    let suite = verify_all(&alg, &product, &symbols)?;
    let expect: Vec<Expect> = if file.expect().is_empty() { vec![Expect::TpPass] } else { file.expect().to_vec() };
    let checks: Vec<(Expect, bool)> = expect.iter().map(|e| (*e, e.holds(&suite))).collect();
    let ok = checks.iter().all(|(_, h)| *h);
    let trivial = alg.trivial_half_derivations();
    let note = match (trivial, product.is_zero()) {
        (Some(true), false) => Some("every 1/2-derivation of this algebra is trivial, so every transposed Poisson structure on it is trivial"),
        _ => None,
    };
    let config = json!({
        "algebra": algebra_config(&a.alg),
        "window": window.report(&alg),
        "product": a.product.display().to_string(),
        "product_spec": file,
        "symbols": symbols.len(),
    });
    let laws = [&suite.commutative, &suite.associative, &suite.tp_compat, &suite.poisson_leibniz];
    let result = json!({
        "laws": laws.iter().map(|r| law_json(r)).collect::<Vec<_>>(),
        "left_mult": left_mult_json(&suite.left_mult),
        "tp_pass": suite.tp_pass(),
        "expectations": checks.iter().map(|(e, h)| json!({"expect": e, "holds": h})).collect::<Vec<_>>(),
        "trivial_half_derivations": trivial,
        "note": note,
    });
    let mut rows: Vec<Vec<String>> = laws
        .iter()
        .map(|r| {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            vec![r.law.clone(), r.checks.to_string(), r.skipped.to_string(), r.failures.len().to_string(), status.into()]
        })
        .collect();
    let lm_fail = suite.left_mult.iter().filter(|(_, r)| !r.passed()).count();
    rows.push(vec![
        "left_mult".into(),
        suite.left_mult.len().to_string(),
        "-".into(),
        lm_fail.to_string(),
        if lm_fail == 0 { "PASS" } else { "FAIL" }.into(),
    ]);
    let mut table = format!("product on {} ({} window symbols)\n", alg.name(), symbols.len());
    table.push_str(&table::render(&["law", "checks", "skipped", "failures", "status"], &rows));
    for r in laws.iter().filter(|r| !r.passed()) {
        let w = &r.failures[0];
        table.push_str(&format!("{} witness ({}): {} != {}\n", r.law, w.args.join(", "), w.lhs, w.rhs));
    }
    for (e, h) in &checks {
        table.push_str(&format!("expect {}: {}\n", serde_json::to_value(e)?.as_str().unwrap_or("?"), if *h { "holds" } else { "VIOLATED" }));
    }
    if let Some(n) = note {
        table.push_str(n);
        table.push('\n');
    }
    Ok(Outcome { config, result, table, ok })
}

pub fn compile(a: &CompileArgs) -> Result<Outcome, UsageError> {
    let path = a.file.display().to_string();
    let text = std::fs::read_to_string(&a.file).map_err(|e| usage(format!("{path}: {e}")))?;
    let ast = dsl::parse(&text).map_err(|e| dsl_error(&path, &e))?;
    let bindings = parse_bindings(&a.params)?;
    let group = a.rank.map(GroupSpec::formal).transpose()?;
    let opts = CompileOptions { bindings, group, samples: a.samples, seed: a.seed };
    let config = json!({
        "file": path,
        "params": a.params,
        "rank": a.rank,
        "samples": a.samples,
        "seed": a.seed,
    });
    let canonical = dsl::pretty(&ast);
    match dsl::compile(&ast, &opts) {
        Ok(alg) => {
            let result = json!({
                "algebra": algebra_summary(&alg),
                "clauses": ast.clauses().count(),
                "canonical": canonical,
            });
            let table = if a.canonical {
                canonical
            } else {
                let rows: Vec<Vec<String>> =
                    alg.families().iter().map(|f| vec![f.name.clone(), kind_name(f.kind)]).collect();
                format!(
                    "{path}: {} compiled, rank {}, {} clauses, antisymmetry checked on {} samples per clause\n{}",
                    alg.name(),
                    alg.rank(),
                    ast.clauses().count(),
                    a.samples,
                    table::render(&["family", "kind"], &rows)
                )
            };
            Ok(Outcome { config, result, table, ok: true })
        }
        Err(e) => match e {
            DslError::AntisymmetryViolation { .. }
            | DslError::IndexDomainViolation { .. }
            | DslError::GradingViolation { .. }
            | DslError::Eval { .. } => {
                let s = e.span();
                let result = json!({
                    "error": { "kind": e.kind(), "line": s.line, "column": s.col, "message": e.to_string() },
                    "canonical": canonical,
                });
                let table = format!("{path}:{e}\n");
                Ok(Outcome { config, result, table, ok: false })
            }
            other => Err(dsl_error(&path, &other)),
        },
    }
}
