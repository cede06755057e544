use std::collections::BTreeMap;
use std::path::PathBuf;

use lietp_core::algebra::{catalog, AlgebraSpec, BasisSymbol, CatalogParams, LinComb};
use lietp_core::dsl::{compile, compile_str, parse, pretty, CompileOptions, DslError, Item};
use lietp_core::exactnum::Scalar;
use lietp_core::group::{GroupElement, GroupSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn algebra_file(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../algebras").join(format!("{name}.liealg"));
    std::fs::read_to_string(p).unwrap()
}

fn with_lambda(l: i64) -> CompileOptions {
    CompileOptions {
        bindings: BTreeMap::from([("lambda".to_string(), Scalar::from_int(l))]),
        ..CompileOptions::default()
    }
}

fn sym(alg: &AlgebraSpec, s: &str) -> BasisSymbol {
    alg.parse_symbol(s).unwrap()
}

const WITT_LINE: &str = "family L graded; [L a, L b] = (b - a) L(a+b);";

#[test]
fn witt_example_parses_to_one_clause() {
    let ast = parse(WITT_LINE).unwrap();
    assert_eq!(ast.clauses().count(), 1);
    let alg = compile(&ast, &CompileOptions::default()).unwrap();
    let out = alg.bracket(&sym(&alg, "L(1)"), &sym(&alg, "L(2)")).unwrap();
    assert_eq!(out, alg.parse_lincomb("L(3)").unwrap());
}

#[test]
fn unknown_target_family() {
    let err = parse("family L graded;\n[L a, L b] = (b - a) M(a+b);").unwrap_err();
    match err {
        DslError::UnknownFamily { name, span } => {
            assert_eq!(name, "M");
            assert_eq!((span.line, span.col), (2, 22));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn symmetric_coefficient_is_rejected() {
    let err = compile_str("family L graded; [L a, L b] = (b + a) L(a+b);", &CompileOptions::default()).unwrap_err();
    let DslError::AntisymmetryViolation { binding, sum, .. } = &err else {
        panic!("{err:?}");
    };
    assert!(binding.starts_with("x = L("), "{binding}");
    assert!(sum.contains("L("), "{sum}");
}

#[test]
fn delta_guard_with_val() {
    let text = "param lambda;\nfamily L graded;\nfamily C_L central;\n\
                [L a, L b] = (b - a) L(a+b) + d(a+b=0) (val(a)^3 - val(a))/12 * C_L;";
    let ast = parse(text).unwrap();
    let clause = ast.clauses().next().unwrap();
    assert_eq!(clause.terms.len(), 2);
    assert_eq!(clause.terms[1].guards.len(), 1);
    assert_eq!(clause.terms[1].target.family.name, "C_L");
    let alg = compile(&ast, &with_lambda(3)).unwrap();
    let out = alg.bracket(&sym(&alg, "L(2)"), &sym(&alg, "L(-2)")).unwrap();
    assert_eq!(out, alg.parse_lincomb("-4*L(0) + 1/2*C_L").unwrap());
}

/// Every ordered pair of window symbols, as (formatted) brackets.
fn window_symbols(alg: &AlgebraSpec, degs: &[GroupElement], idx: &[i64]) -> Vec<BasisSymbol> {
    let mut out = Vec::new();
    for f in alg.graded_families() {
        for d in degs {
            match alg.family(f).index_domain() {
                None => out.push(BasisSymbol::graded(f, d.clone())),
                Some(dom) => {
                    for &i in idx.iter().filter(|&&i| dom.contains(i)) {
                        out.push(BasisSymbol::indexed(f, d.clone(), i));
                    }
                }
            }
        }
    }
    out.extend(alg.central_families().into_iter().map(|c| BasisSymbol::central(c, alg.rank())));
    out
}

fn fmt(alg: &AlgebraSpec, v: &LinComb) -> String {
    alg.format_lincomb(v)
}

fn assert_same_window(a: &AlgebraSpec, b: &AlgebraSpec, degs: &[GroupElement], idx: &[i64]) -> usize {
    let names = |x: &AlgebraSpec| x.families().iter().map(|f| format!("{:?}", f)).collect::<Vec<_>>();
    assert_eq!(names(a), names(b));
    let syms = window_symbols(a, degs, idx);
    let mut n = 0;
    for x in &syms {
        for y in &syms {
            let (u, v) = (a.bracket(x, y).unwrap(), b.bracket(x, y).unwrap());
            assert_eq!(fmt(a, &u), fmt(b, &v), "[{}, {}]", a.format_symbol(x), a.format_symbol(y));
            n += 1;
        }
    }
    n
}

fn degrees(rank: usize, r: i64) -> Vec<GroupElement> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| (-r..=r).map(move |k| [v.clone(), vec![k]].concat()))
            .collect();
    }
    out.iter().map(|c| GroupElement::new(c)).collect()
}

#[test]
fn catalog_equivalence_rank_one() {
    let idx: Vec<i64> = (-3..=3).collect();
    for name in ["witt", "virasoro", "W_hat", "W_tilde", "HW", "HW_tilde"] {
        let ours = compile_str(&algebra_file(name), &CompileOptions::default()).unwrap();
        let builtin = catalog(name, &CatalogParams::default()).unwrap();
        assert_eq!(ours.name(), name);
        assert!(assert_same_window(&ours, &builtin, &degrees(1, 4), &idx) >= 81);
    }
    for l in [-2, -1, 0, 1, 2, 5] {
        let ours = compile_str(&algebra_file("g"), &with_lambda(l)).unwrap();
        let builtin = catalog("g", &CatalogParams::with_lambda(l)).unwrap();
        assert_same_window(&ours, &builtin, &degrees(1, 5), &[]);
    }
}

#[test]
fn catalog_equivalence_higher_rank() {
    for rank in [2, 3] {
        let group = GroupSpec::formal(rank).unwrap();
        let opts = CompileOptions { group: Some(group.clone()), ..with_lambda(-2) };
        let ours = compile_str(&algebra_file("g"), &opts).unwrap();
        let builtin = catalog("g", &CatalogParams { lambda: Some(Scalar::from_int(-2)), group }).unwrap();
        assert_eq!(ours.families().len(), 3 + rank - 1);
        assert_same_window(&ours, &builtin, &degrees(rank, 1), &[]);
    }
    let group = GroupSpec::formal(2).unwrap();
    let opts = CompileOptions { group: Some(group.clone()), ..CompileOptions::default() };
    let ours = compile_str(&algebra_file("W_tilde"), &opts).unwrap();
    let builtin = catalog("W_tilde", &CatalogParams { lambda: None, group }).unwrap();
    assert_same_window(&ours, &builtin, &degrees(2, 1), &[-1, 0, 1, 2]);
}

#[test]
fn g_lambda_five_random_pairs() {
    let ours = compile_str(&algebra_file("g"), &with_lambda(5)).unwrap();
    let builtin = catalog("g", &CatalogParams::with_lambda(5)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fams = builtin.graded_families();
    for _ in 0..100 {
        let pick = |rng: &mut ChaCha8Rng| {
            let f = fams[rng.gen_range(0..fams.len())];
            BasisSymbol::graded(f, GroupElement::new(&[rng.gen_range(-30..=30)]))
        };
        let (x, y) = (pick(&mut rng), pick(&mut rng));
        assert_eq!(ours.bracket(&x, &y).unwrap(), builtin.bracket(&x, &y).unwrap());
    }
}

#[test]
fn shipped_files_round_trip() {
    for name in ["g", "witt", "virasoro", "W_hat", "W_tilde", "HW", "HW_tilde"] {
        let ast = parse(&algebra_file(name)).unwrap();
        let printed = pretty(&ast);
        let again = parse(&printed).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert_eq!(again, ast, "{name}");
        assert_eq!(pretty(&again), printed);
    }
}

#[test]
fn round_trip_keeps_tricky_coefficients() {
    let text = "param p = 1/3; family L graded; family C central;\n\
                [L a, L b] = -(b - a) L(a+b) - (-a) * 2 L(a + b) + L(a+b) / 4 - a * -b / (2 * p) L(a+b)\n\
                + d(a + b = 0) d(p = 1/3) a_(1)^2 (-a)^3 / (a^2 - -1) C - 0 * C;";
    let ast = parse(text).unwrap();
    let printed = pretty(&ast);
    assert_eq!(parse(&printed).unwrap(), ast, "{printed}");
    let alg = compile(&ast, &CompileOptions { samples: 0, ..CompileOptions::default() }).unwrap();
    assert_eq!(alg.param("p"), Some(&Scalar::ratio(1, 3).unwrap()));
}

#[test]
fn structural_errors() {
    let cases: &[(&str, &str)] = &[
        ("family L graded; family L central;", "DuplicateFamily"),
        ("family L graded; [L a, L b] = (b - c) L(a+b);", "UnboundVariable"),
        ("family L graded; [L a, L b] = 0; [L x, L y] = 0;", "DuplicateClause"),
        ("family L graded; family I graded; [L a, I b] = 0; [I b, L a] = 0;", "DuplicateClause"),
        ("family L graded [L a, L b] = 0;", "Syntax"),
        ("family L graded; [L a, L b] = (b - a);", "Syntax"),
        ("family L graded; [L a, L b] = (b - a) L(a * b);", "Type"),
        ("family L indexed nat; [L a, L b] = 0;", "Type"),
        ("param lambda; param lambda;", "DuplicateParam"),
        ("family L graded; [L a, L a] = 0;", "Type"),
        ("family L graded; [L a, L b] = 2^99 L(a+b);", "Syntax"),
        ("family L graded; $", "Syntax"),
        ("rank 0;", "Syntax"),
    ];
    for (text, kind) in cases {
        let err = parse(text).expect_err(text);
        assert_eq!(err.kind(), *kind, "{text}: {err}");
        assert!(err.span().line >= 1);
    }
}

#[test]
fn compile_errors() {
    let text = "family L indexed nat; [L a i, L b j] = (b - a) L(a+b; i+j) + (j - i) L(a + b; i + j - 2);";
    let err = compile_str(text, &CompileOptions::default()).unwrap_err();
    assert_eq!(err.kind(), "IndexDomainViolation", "{err}");

    let err = compile_str("param lambda; family L graded;", &CompileOptions::default()).unwrap_err();
    assert_eq!(err.kind(), "UnboundParameter");
    let err = compile_str("family L graded;", &with_lambda(1)).unwrap_err();
    assert_eq!(err.kind(), "UnknownParameter");

    let err = compile_str("family L graded; family C central; [L a, L b] = (b - a) L(a+b) + C;", &CompileOptions::default())
        .unwrap_err();
    assert_eq!(err.kind(), "GradingViolation", "{err}");
    let err = compile_str("family L graded; [L a, L b] = (b - a) L(a+b+a);", &CompileOptions::default()).unwrap_err();
    assert_eq!(err.kind(), "GradingViolation", "{err}");
    let err = compile_str("family L graded; [L a, L b] = (b - a) / (a - a) L(a+b);", &CompileOptions::default())
        .unwrap_err();
    assert_eq!(err.kind(), "Eval", "{err}");
}

#[test]
fn parameters_and_conditions() {
    let text = "param lambda = 2; family L graded; family I graded; family C central if lambda != 2;\n\
                [L a, I b] = (b - lambda a) I(a+b) + d(a+b=0) C;";
    let alg = compile_str(text, &CompileOptions::default()).unwrap();
    assert_eq!(alg.families().len(), 2);
    assert_eq!(
        alg.bracket(&sym(&alg, "L(1)"), &sym(&alg, "I(1)")).unwrap(),
        alg.parse_lincomb("-I(2)").unwrap()
    );
    let alg = compile_str(text, &with_lambda(3)).unwrap();
    assert_eq!(
        alg.bracket(&sym(&alg, "L(1)"), &sym(&alg, "I(-1)")).unwrap(),
        alg.parse_lincomb("-4*I(0) + C").unwrap()
    );
    let sweep: Vec<usize> = (-2..=2)
        .map(|l| compile_str(&algebra_file("g"), &with_lambda(l)).unwrap().families().len())
        .collect();
    assert_eq!(sweep, [3, 3, 5, 4, 3]);
}

#[test]
fn items_are_kept_in_order() {
    let ast = parse(&algebra_file("HW_tilde")).unwrap();
    assert!(matches!(&ast.items[0], Item::Algebra(n) if n.name == "HW_tilde"));
    assert_eq!(ast.families().count(), 5);
    assert_eq!(ast.clauses().count(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn random_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        if let Err(e) = parse(&text) {
            prop_assert!(e.span().line >= 1);
        }
    }

    #[test]
    fn mutated_files_never_panic(file in 0usize..7, edits in proptest::collection::vec((any::<u16>(), any::<u8>(), 0u8..3), 1..6)) {
        let names = ["g", "witt", "virasoro", "W_hat", "W_tilde", "HW", "HW_tilde"];
        let mut bytes = algebra_file(names[file]).into_bytes();
        for (pos, b, kind) in edits {
            let p = pos as usize % (bytes.len() + 1);
            let b = b"()[];,+-*/^=<>!#_ 0123456789abdijLCHI"[b as usize % 37];
            match kind {
                0 if p < bytes.len() => { bytes.remove(p); }
                1 if p < bytes.len() => bytes[p] = b,
                _ => bytes.insert(p, b),
            }
        }
        let text = String::from_utf8_lossy(&bytes).into_owned();
        let opts = CompileOptions { samples: 20, ..with_lambda(1) };
        let ast = parse(&text);
        if let Ok(ast) = ast {
            let _ = compile(&ast, &opts);
            prop_assert_eq!(parse(&pretty(&ast)).unwrap(), ast);
        }
    }
}

#[test]
fn deep_nesting_is_an_error_not_a_crash() {
    let text = format!("family L graded; [L a, L b] = {}1{} L(a+b);", "(".repeat(5000), ")".repeat(5000));
    assert_eq!(parse(&text).unwrap_err().kind(), "Syntax");
    let text = format!("family L graded; [L a, L b] = {}1 L(a+b);", "- ".repeat(5000));
    assert_eq!(parse(&text).unwrap_err().kind(), "Syntax");
}
