//! Acceptance run: one PASS/FAIL line per criterion, exact equality
//! throughout. Exits non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use lietp_core::algebra::*;
use lietp_core::derivations::*;
use lietp_core::exactnum::Scalar;
use lietp_core::group::{GroupElement, GroupSpec};
use lietp_core::tpstruct::*;
use num_traits::Zero;

type Outcome = Result<Vec<String>, String>;

fn half() -> Scalar {
    Scalar::ratio(1, 2).unwrap()
}

fn g(lambda: i64) -> AlgebraSpec {
    catalog("g", &CatalogParams::with_lambda(lambda)).unwrap()
}

fn g_z2(lambda: i64) -> AlgebraSpec {
    let p = CatalogParams { lambda: Some(Scalar::from_int(lambda)), group: GroupSpec::formal(2).unwrap() };
    catalog("g", &p).unwrap()
}

fn named(name: &str) -> AlgebraSpec {
    catalog(name, &CatalogParams::default()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// A per-degree sweep of one window, kept for the oracle comparison.
struct Sweep {
    label: String,
    alg: AlgebraSpec,
    window: Window,
    solves: Vec<(GroupElement, Option<DegreeSolve>)>,
}

impl Sweep {
    fn run(label: &str, alg: AlgebraSpec, gbox: &[(i64, i64)], ibox: Option<(i64, i64)>, margin: i64) -> Sweep {
        let window = Window::new(&alg, gbox, ibox, None, margin).unwrap();
        let solves = solve_all_degrees(&alg, &half(), &window, &SolveOptions::default()).unwrap();
        Sweep { label: label.into(), alg, window, solves }
    }

    fn rank(&self, d: &GroupElement) -> usize {
        self.solves
            .iter()
            .find(|(g, _)| g == d)
            .and_then(|(_, s)| s.as_ref())
            .map_or(0, DegreeSolve::interior_rank)
    }

    fn solve_at(&self, d: &GroupElement) -> &DegreeSolve {
        self.solves.iter().find(|(g, _)| g == d).and_then(|(_, s)| s.as_ref()).expect("degree solved")
    }

    fn ranks(&self) -> BTreeMap<GroupElement, usize> {
        self.solves.iter().map(|(g, s)| (g.clone(), s.as_ref().map_or(0, DegreeSolve::interior_rank))).collect()
    }

    /// Degree 0 has interior rank 1, every other degree 0.
    fn only_identity(&self) -> Result<String, String> {
        let zero = GroupElement::zero(self.alg.rank());
        let bad: Vec<String> = self
            .ranks()
            .into_iter()
            .filter(|(d, r)| *r != usize::from(*d == zero))
            .map(|(d, r)| format!("{d}:{r}"))
            .collect();
        ensure(bad.is_empty(), || format!("{}: unexpected ranks {}", self.label, bad.join(" ")))?;
        let solved = self.solves.iter().filter(|(_, s)| s.is_some()).count();
        Ok(format!("{}: degree 0 rank 1, {} other degrees solved with rank 0", self.label, solved - 1))
    }

    /// Every interior basis vector at `d` satisfies the ½-derivation identity
    /// on the window pairs whose equations close inside the interior, and
    /// every full kernel vector on the pairs that close inside the window.
    /// Returns the number of equations compared.
    fn verify_interior(&self, d: &GroupElement) -> Result<usize, String> {
        let s = self.solve_at(d);
        let pairs = pairs_of(&enumerate_window(&self.alg, &self.window).unwrap());
        let sel = DegreeSel::Single(d.clone());
        let interior = ShiftRegion::interior(&self.alg, &self.window, &sel);
        let window = ShiftRegion::window(&self.alg, &self.window, &sel);
        let mut checked = 0;
        for (vectors, region, what) in
            [(&s.interior.basis, &interior, "interior vector"), (&s.space.basis, &window, "kernel vector")]
        {
            for (k, v) in vectors.iter().enumerate() {
                let map = s.space.to_map(v);
                let r = verify_map(&self.alg, &half(), &map, &pairs, Some(region)).map_err(|e| e.to_string())?;
                ensure(r.passed(), || format!("{} degree {d} {what} {k}: {:?}", self.label, r.failures.first()))?;
                checked += r.equations_checked;
            }
        }
        ensure(checked > 0 || s.space.basis.is_empty(), || format!("{} degree {d}: no closed equations", self.label))?;
        Ok(checked)
    }
}

struct Sweeps {
    g5: Sweep,
    gm2: Sweep,
    gm2_z2: Sweep,
    g1: Sweep,
    gm1: Sweep,
    g0: Sweep,
    w_hat: Sweep,
    w_tilde: Sweep,
    hw_tilde: Sweep,
}

impl Sweeps {
    fn all(&self) -> [&Sweep; 9] {
        [&self.g5, &self.gm2, &self.gm2_z2, &self.g1, &self.gm1, &self.g0, &self.w_hat, &self.w_tilde, &self.hw_tilde]
    }
}

fn sweeps() -> Sweeps {
    // Rank-1 triviality checks use the same box and margin as the rank-2 one.
    let small = [(-3, 3)];
    let z = [(-6, 6)];
    Sweeps {
        g5: Sweep::run("g(Z,5)", g(5), &small, None, 1),
        gm2: Sweep::run("g(Z,-2)", g(-2), &small, None, 1),
        gm2_z2: Sweep::run("g(Z^2,-2)", g_z2(-2), &[(-3, 3), (-3, 3)], None, 1),
        g1: Sweep::run("g(Z,1)", g(1), &z, None, 2),
        gm1: Sweep::run("g(Z,-1)", g(-1), &z, None, 2),
        g0: Sweep::run("g(Z,0)", g(0), &small, None, 1),
        w_hat: Sweep::run("W_hat", named("W_hat"), &[(-3, 3)], Some((0, 6)), 2),
        w_tilde: Sweep::run("W_tilde", named("W_tilde"), &[(-4, 4)], Some((-4, 4)), 2),
        hw_tilde: Sweep::run("HW_tilde", named("HW_tilde"), &[(-4, 4)], Some((0, 4)), 2),
    }
}

fn c1_jacobi() -> Outcome {
    let mut algs: Vec<AlgebraSpec> = [0, 1, -1, -2, 5].into_iter().map(g).collect();
    algs.push(g_z2(-2));
    for n in ["W_hat", "W_tilde", "HW", "HW_tilde"] {
        algs.push(named(n));
    }
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for alg in &algs {
        let a = jacobi_audit(alg, 500, 0, &SampleRange::default()).map_err(|e| e.to_string())?;
        let label = format!("{} (rank {}{})", alg.name(), alg.rank(), lambda_note(alg));
        lines.push(format!("{label}: {}/500 zero defects", a.zero_defects));
        if !a.passed() {
            let w = &a.failures[0];
            failed.push(format!("{label}: {} nonzero, e.g. J({}, {}, {}) = {}", a.failures.len(), w.x, w.y, w.z, w.defect));
        }
    }
    if failed.is_empty() {
        Ok(lines)
    } else {
        Err(failed.join("; "))
    }
}

fn lambda_note(alg: &AlgebraSpec) -> String {
    alg.param("lambda").map_or(String::new(), |l| format!(", lambda {l}"))
}

fn c2_triviality(s: &Sweeps) -> Outcome {
    let mut lines = Vec::new();
    for sw in [&s.g5, &s.gm2, &s.gm2_z2] {
        lines.push(sw.only_identity()?);
        let n = sw.verify_interior(&GroupElement::zero(sw.alg.rank()))?;
        lines.push(format!("{}: degree 0 basis verified on {n} closed equations", sw.label));
    }
    Ok(lines)
}

/// Interior identity restricted to the columns of `s`.
fn identity_vector(s: &DegreeSolve) -> SparseVec {
    s.interior
        .columns
        .iter()
        .filter(|&&c| s.space.unknowns[c].0 == s.space.unknowns[c].1)
        .map(|&c| (c, Scalar::one()))
        .collect()
}

/// `v` minus its identity component, the latter read off the diagonal
/// coefficient at `probe`.
fn strip_identity(s: &DegreeSolve, v: &SparseVec, probe: &BasisSymbol) -> SparseVec {
    let col = s.space.unknowns.iter().position(|(i, o)| i == probe && o == probe).expect("probe column");
    let c = v.get(&col).cloned().unwrap_or_else(Scalar::zero);
    let mut out = v.clone();
    for (k, x) in identity_vector(s) {
        let e = out.entry(k).or_insert_with(Scalar::zero);
        *e = &*e - &(&x * &c);
    }
    out.retain(|_, x| !x.is_zero());
    out
}

/// All coefficients of `v` equal, returned as (input, output) names.
fn uniform_support(alg: &AlgebraSpec, s: &DegreeSolve, v: &SparseVec) -> Result<BTreeSet<(String, String)>, String> {
    let first = v.values().next().ok_or("zero vector")?.clone();
    ensure(v.values().all(|x| *x == first), || "coefficients differ across the support".into())?;
    Ok(v.keys()
        .map(|c| {
            let (i, o) = &s.space.unknowns[*c];
            (alg.format_symbol(i), alg.format_symbol(o))
        })
        .collect())
}

fn verify_vector(sw: &Sweep, v: &SparseVec) -> Result<usize, String> {
    let s = sw.solve_at(&GroupElement::zero(sw.alg.rank()));
    let pairs = pairs_of(&enumerate_window(&sw.alg, &sw.window).unwrap());
    let sel = DegreeSel::Single(GroupElement::zero(sw.alg.rank()));
    let region = ShiftRegion::interior(&sw.alg, &sw.window, &sel);
    let r = verify_map(&sw.alg, &half(), &s.space.to_map(v), &pairs, Some(&region)).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{}: {:?}", sw.label, r.failures.first()))?;
    ensure(r.pairs_checked > 0, || format!("{}: no pairs", sw.label))?;
    Ok(r.equations_checked)
}

fn second_vector(sw: &Sweep) -> Result<(SparseVec, BTreeSet<(String, String)>), String> {
    let zero = GroupElement::zero(1);
    let s = sw.solve_at(&zero);
    ensure(s.interior_rank() == 2, || format!("{}: degree-0 interior rank {}", sw.label, s.interior_rank()))?;
    let probe = sw.alg.symbol("L", &[0], None).unwrap();
    let w = strip_identity(s, &s.interior.basis[1], &probe);
    let support = uniform_support(&sw.alg, s, &w)?;
    Ok((w, support))
}

fn interior_degrees(sw: &Sweep, family: &str) -> Vec<i64> {
    let f = sw.alg.family_id(family).unwrap();
    let mut out: Vec<i64> = enumerate_window(&sw.alg, &sw.window)
        .unwrap()
        .into_iter()
        .filter(|x| x.family == f && sw.window.is_interior(&sw.alg, x))
        .map(|x| x.degree.coords()[0])
        .collect();
    out.dedup();
    out
}

fn c3_g_one(s: &Sweeps) -> Outcome {
    let sw = &s.g1;
    let (w, support) = second_vector(sw)?;
    let mut expect: BTreeSet<(String, String)> =
        interior_degrees(sw, "L").into_iter().map(|k| (format!("L({k})"), format!("I({k})"))).collect();
    expect.insert(("C_L".into(), "C_LI1".into()));
    ensure(support == expect, || format!("support {support:?}, expected {expect:?}"))?;
    let n = verify_vector(sw, &w)?;
    let m = sw.verify_interior(&GroupElement::zero(1))?;
    Ok(vec![
        format!("g(Z,1): degree-0 interior rank 2; second vector minus Id = L_k -> I_k, C_L -> C_LI1 on {} terms", support.len()),
        format!("g(Z,1): extracted map verified on {n} closed equations, raw basis on {m}"),
    ])
}

fn c4_g_minus_one(s: &Sweeps) -> Outcome {
    let sw = &s.gm1;
    let (w, support) = second_vector(sw)?;
    let expect = BTreeSet::from([("I(0)".to_string(), "C_L".to_string())]);
    ensure(support == expect, || format!("support {support:?}, expected {expect:?}"))?;
    let n = verify_vector(sw, &w)?;
    let m = sw.verify_interior(&GroupElement::zero(1))?;
    Ok(vec![
        "g(Z,-1): degree-0 interior rank 2; second vector minus Id = I_0 -> C_L".into(),
        // I_0 is not in [g, g] for lambda = -1, so every equation of the
        // extracted map reads 0 = 0.
        format!("g(Z,-1): extracted map verified ({n} nonzero equations), raw basis on {m}"),
    ])
}

fn c5_g_zero(s: &Sweeps) -> Outcome {
    Ok(vec![s.g0.only_identity()?])
}

fn c6_w_hat(s: &Sweeps) -> Outcome {
    let sw = &s.w_hat;
    let l = sw.alg.family_id("L").unwrap();
    let interior: Vec<BasisSymbol> = enumerate_window(&sw.alg, &sw.window)
        .unwrap()
        .into_iter()
        .filter(|x| x.family == l && sw.window.is_interior(&sw.alg, x))
        .collect();
    let degs: BTreeSet<i64> = interior.iter().map(|x| x.degree.coords()[0]).collect();
    let idxs: BTreeSet<i64> = interior.iter().map(|x| x.idx()).collect();
    let (dlo, dhi) = (*degs.first().unwrap(), *degs.last().unwrap());
    let (ilo, ihi) = (*idxs.first().unwrap(), *idxs.last().unwrap());
    let mut lines = vec![format!("W_hat interior: degrees [{dlo},{dhi}], indices [{ilo},{ihi}]")];
    for (d, solve) in &sw.solves {
        let d0 = d.coords()[0];
        let representable = (dlo - dhi..=dhi - dlo).contains(&d0);
        let expect = if representable { usize::from(d0 == 0) + (ihi - ilo) as usize } else { 0 };
        let got = sw.rank(d);
        ensure(got == expect, || format!("degree {d}: interior rank {got}, expected {expect}"))?;
        let Some(solve) = solve else { continue };
        if got == 0 {
            continue;
        }
        let mut shifts = Vec::new();
        for v in &solve.interior.basis {
            let mut ks = BTreeSet::new();
            let mut coeffs = BTreeSet::new();
            for (c, x) in v {
                let (i, o) = &solve.space.unknowns[*c];
                if sw.alg.is_central(i) || sw.alg.is_central(o) {
                    ensure(i == o && d0 == 0, || format!("degree {d}: central coefficient off the identity"))?;
                } else {
                    ensure(o.degree.coords()[0] - i.degree.coords()[0] == d0, || format!("degree {d}: wrong shift"))?;
                    ks.insert(o.idx() - i.idx());
                }
                coeffs.insert(x.to_string());
            }
            ensure(ks.len() == 1, || format!("degree {d}: vector mixes index shifts {ks:?}"))?;
            ensure(coeffs.len() == 1, || format!("degree {d}: coefficient depends on the symbol: {coeffs:?}"))?;
            let k = *ks.first().unwrap();
            ensure(k >= 1 || (k == 0 && d0 == 0), || format!("degree {d}: index shift {k}"))?;
            shifts.push(k);
        }
        let n = sw.verify_interior(d)?;
        lines.push(format!("degree {d}: rank {got}, index shifts {shifts:?}, verified on {n} closed equations"));
    }
    Ok(lines)
}

fn c7_identity_only(s: &Sweeps) -> Outcome {
    let mut lines = Vec::new();
    for sw in [&s.w_tilde, &s.hw_tilde] {
        lines.push(sw.only_identity()?);
    }
    Ok(lines)
}

fn c8_hw_closed_form() -> Outcome {
    let alg = named("HW");
    let d = 1i64;
    let max_index = 6;
    let phi = FnMap(|s: &BasisSymbol| {
        let mut out = LinComb::zero();
        if alg.is_central(s) {
            return Some(out);
        }
        // (−d)^k / k!
        let mut c = Scalar::one();
        for k in 0..=max_index {
            let i = s.idx() + k;
            if i > max_index {
                break;
            }
            out.add_term(BasisSymbol::indexed(s.family, &s.degree + &GroupElement::scalar(d), i), c.clone());
            c = &c * &Scalar::ratio(-d, k + 1).unwrap();
        }
        Some(out)
    });
    let w = Window::new(&alg, &[(-3, 3)], Some((0, max_index)), None, 0).unwrap();
    let pairs = pairs_of(&enumerate_window(&alg, &w).unwrap());
    let r = verify_map(&alg, &half(), &phi, &pairs, Some(&IndexCeiling { max_index })).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{:?}", r.failures.first()))?;
    ensure(r.equations_checked > 0, || "no closed equations".into())?;
    Ok(vec![format!(
        "HW(Z,-1), d = 1, indices <= {max_index}: {} pairs, {} equations checked, {} skipped as not closed",
        r.pairs_checked, r.equations_checked, r.equations_skipped
    )])
}

struct TpRuns {
    w_hat: (AlgebraSpec, Vec<BasisSymbol>, TpSuite),
    g_minus1: (AlgebraSpec, Vec<BasisSymbol>, TpSuite),
}

fn tp_runs() -> TpRuns {
    let alg = named("W_hat");
    let coeffs = BTreeMap::from([
        ((GroupElement::scalar(0), 0), Scalar::from_int(1)),
        ((GroupElement::scalar(1), 1), Scalar::from_int(2)),
    ]);
    let p = ProductSpec::w_hat(&alg, coeffs).unwrap();
    let syms = enumerate_window(&alg, &Window::new(&alg, &[(-2, 2)], Some((0, 2)), None, 0).unwrap()).unwrap();
    let suite = verify_all(&alg, &p, &syms).unwrap();
    let w_hat = (alg, syms, suite);

    let alg = g(-1);
    let p = ProductSpec::g_minus1(&alg, Scalar::one()).unwrap();
    let syms = enumerate_window(&alg, &Window::new(&alg, &[(-3, 3)], None, None, 0).unwrap()).unwrap();
    let suite = verify_all(&alg, &p, &syms).unwrap();
    TpRuns { w_hat, g_minus1: (alg, syms, suite) }
}

fn law_line(r: &VerifyReport) -> String {
    format!("{} {} ({} checks, {} failures)", r.law, if r.passed() { "PASS" } else { "FAIL" }, r.checks, r.failures.len())
}

/// Ŵ symbol as an oracle key.
fn w_key(alg: &AlgebraSpec, s: &BasisSymbol) -> WKey {
    if alg.is_central(s) {
        None
    } else {
        Some((s.degree.coords()[0], s.idx()))
    }
}

fn to_oracle(alg: &AlgebraSpec, v: &LinComb) -> WElem {
    v.iter()
        .map(|(s, c)| {
            let r = c.as_rational().expect("rational coefficient");
            (w_key(alg, s), Q::new(r.numer().clone(), r.denom().clone()))
        })
        .collect()
}

fn c9_tp(t: &TpRuns) -> Outcome {
    let mut lines = Vec::new();
    let (alg, syms, suite) = &t.w_hat;
    let n = syms.len();
    ensure(suite.commutative.checks == n * n, || "commutativity not exhaustive".into())?;
    ensure(suite.associative.checks == n * n * n && suite.tp_compat.checks == n * n * n, || "triples not exhaustive".into())?;
    for r in [&suite.commutative, &suite.associative, &suite.tp_compat] {
        ensure(r.passed() && r.skipped == 0, || format!("W_hat {}", law_line(r)))?;
    }
    let pl = &suite.poisson_leibniz;
    ensure(!pl.passed(), || "W_hat product satisfies Poisson-Leibniz".into())?;
    lines.push(format!(
        "W_hat, {n} symbols: {}; {}; {}; {}",
        law_line(&suite.commutative),
        law_line(&suite.associative),
        law_line(&suite.tp_compat),
        law_line(pl)
    ));

    // Persist the first witness, read it back and recompute both sides from
    // the oracle multiplication tables.
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("w_hat_poisson_witness.json");
    std::fs::write(&path, serde_json::to_string_pretty(&pl.failures[0]).unwrap()).map_err(|e| e.to_string())?;
    let back: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let args: Vec<BasisSymbol> = back["args"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| alg.parse_symbol(a.as_str().unwrap()).unwrap())
        .collect();
    let (x, y, z) = (w_basis(w_key(alg, &args[0])), w_basis(w_key(alg, &args[1])), w_basis(w_key(alg, &args[2])));
    let cs = [((0, 0), q(1)), ((1, 1), q(2))];
    let pr = |a: WKey, b: WKey| w_hat_product(&cs, a, b);
    let lhs = w_bilin(&w_hat_bracket, &x, &w_bilin(&pr, &y, &z));
    let rhs = w_sum(
        &w_bilin(&pr, &w_bilin(&w_hat_bracket, &x, &y), &z),
        &w_bilin(&pr, &y, &w_bilin(&w_hat_bracket, &x, &z)),
        q(1),
    );
    ensure(lhs != rhs, || "oracle does not reproduce the witness".into())?;
    let got_l = to_oracle(alg, &alg.parse_lincomb(back["lhs"].as_str().unwrap()).unwrap());
    let got_r = to_oracle(alg, &alg.parse_lincomb(back["rhs"].as_str().unwrap()).unwrap());
    ensure(got_l == lhs && got_r == rhs, || "witness sides disagree with the oracle".into())?;
    lines.push(format!(
        "witness [{}, {} * {}]: {} != {}, confirmed by oracle, persisted to {}",
        back["args"][0], back["args"][1], back["args"][2], back["lhs"], back["rhs"],
        path.display()
    ));

    let (_, syms, suite) = &t.g_minus1;
    for r in [&suite.commutative, &suite.associative, &suite.tp_compat, &suite.poisson_leibniz] {
        ensure(r.passed() && r.checks > 0, || format!("g(Z,-1) {}", law_line(r)))?;
    }
    lines.push(format!(
        "g(Z,-1), beta = 1, {} symbols: {}; {}; {}; {}",
        syms.len(),
        law_line(&suite.commutative),
        law_line(&suite.associative),
        law_line(&suite.tp_compat),
        law_line(&suite.poisson_leibniz)
    ));
    Ok(lines)
}

fn c10_left_mult(t: &TpRuns) -> Outcome {
    let mut lines = Vec::new();
    for (label, (_, syms, suite)) in [("W_hat", &t.w_hat), ("g(Z,-1)", &t.g_minus1)] {
        ensure(suite.left_mult.len() == syms.len(), || format!("{label}: {} of {} elements checked", suite.left_mult.len(), syms.len()))?;
        let bad: Vec<&String> = suite.left_mult.iter().filter(|(_, r)| !r.passed()).map(|(z, _)| z).collect();
        ensure(bad.is_empty(), || format!("{label}: L_z fails for {bad:?}"))?;
        let pairs: usize = suite.left_mult.iter().map(|(_, r)| r.pairs_checked).sum();
        let eq: usize = suite.left_mult.iter().map(|(_, r)| r.equations_checked).sum();
        ensure(pairs > 0, || format!("{label}: nothing checked"))?;
        lines.push(format!(
            "{label}: L_z is a 1/2-derivation for all {} window elements ({pairs} pairs, {eq} nonzero equations)",
            syms.len()
        ));
    }
    Ok(lines)
}

fn dense_row(row: &SparseVec, ncols: usize) -> Option<Vec<Q>> {
    let mut out = vec![Q::zero(); ncols];
    for (c, x) in row {
        let r = x.as_rational()?;
        out[*c] = Q::new(r.numer().clone(), r.denom().clone());
    }
    Some(out)
}

fn c11_oracle(s: &Sweeps) -> Outcome {
    let mut lines = Vec::new();
    let mut systems = 0;
    for sw in s.all() {
        let mut here = 0;
        for (d, solve) in &sw.solves {
            let Some(solve) = solve else { continue };
            if solve.unknowns > 60 {
                continue;
            }
            let problem =
                DerivationProblem { alg: &sw.alg, delta: half(), degree: DegreeSel::Single(d.clone()), window: sw.window.clone() };
            let system = assemble(&problem).map_err(|e| e.to_string())?;
            let n = system.unknowns.len();
            let space = nullspace(&system, &SolveOptions::default()).map_err(|e| e.to_string())?;
            let rows: Vec<Vec<Q>> = system
                .rows
                .iter()
                .map(|r| dense_row(r, n))
                .collect::<Option<_>>()
                .ok_or_else(|| format!("{} degree {d}: non-rational entries", sw.label))?;
            let sparse: Vec<Vec<Q>> = space
                .basis
                .iter()
                .map(|v| dense_row(v, n))
                .collect::<Option<_>>()
                .ok_or_else(|| format!("{} degree {d}: non-rational kernel", sw.label))?;
            let dense = dense_kernel(&rows, n);
            ensure(dense.len() == sparse.len(), || {
                format!("{} degree {d}: kernel dimension {} vs oracle {}", sw.label, sparse.len(), dense.len())
            })?;
            ensure(span_contains(&dense, &sparse, n) && span_contains(&sparse, &dense, n), || {
                format!("{} degree {d}: kernels differ", sw.label)
            })?;
            here += 1;
        }
        if here > 0 {
            lines.push(format!("{}: {here} systems", sw.label));
        }
        systems += here;
    }
    ensure(systems > 0, || "no system with at most 60 unknowns".into())?;
    lines.push(format!("{systems} systems with at most 60 unknowns agree with the dense oracle"));
    Ok(lines)
}

fn c12_graded(_: &Sweeps) -> Outcome {
    let alg = g(3);
    let w = Window::new(&alg, &[(-5, 5)], None, None, 2).unwrap();
    let per = solve_all_degrees(&alg, &half(), &w, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let sum: usize = per.iter().filter_map(|(_, s)| s.as_ref().map(DegreeSolve::interior_rank)).sum();
    let problem = DerivationProblem { alg: &alg, delta: half(), degree: DegreeSel::All, window: w };
    let mixed = solve(&problem, &SolveOptions::default()).map_err(|e| e.to_string())?;
    ensure(mixed.interior_rank() == sum, || format!("per-degree sum {sum}, mixed {}", mixed.interior_rank()))?;
    Ok(vec![format!(
        "g(Z,3) box [-5,5]: per-degree sum {sum} = mixed-degree rank {} ({} unknowns)",
        mixed.interior_rank(),
        mixed.unknowns
    )])
}

fn run(n: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panic: {}", msg.unwrap_or_default()))
    });
    let secs = t.elapsed().as_secs_f64();
    match r {
        Ok(lines) => {
            for l in lines {
                println!("    {l}");
            }
            println!("criterion {n:>2}: PASS  {title} ({secs:.1}s)");
            true
        }
        Err(e) => {
            println!("    {e}");
            println!("criterion {n:>2}: FAIL  {title} ({secs:.1}s)");
            false
        }
    }
}

fn main() {
    let t = Instant::now();
    let mut ok = Vec::new();
    ok.push(run(1, "Jacobi audit, 500 seeded triples per algebra", c1_jacobi));
    let s = sweeps();
    println!("    derivation sweeps for criteria 2-7 and 11 solved in {:.1}s", t.elapsed().as_secs_f64());
    ok.push(run(2, "g(Z,5), g(Z,-2), g(Z^2,-2): Id only", || c2_triviality(&s)));
    ok.push(run(3, "g(Z,1): Id and L_k -> I_k, C_L -> C_LI1", || c3_g_one(&s)));
    ok.push(run(4, "g(Z,-1): Id and I_0 -> C_L", || c4_g_minus_one(&s)));
    ok.push(run(5, "g(Z,0): Id only", || c5_g_zero(&s)));
    ok.push(run(6, "W_hat: Id and index-shift maps", || c6_w_hat(&s)));
    ok.push(run(7, "W_tilde, HW_tilde: Id only", || c7_identity_only(&s)));
    ok.push(run(8, "HW(Z,-1) closed-form 1/2-derivation", c8_hw_closed_form));
    let tp = tp_runs();
    ok.push(run(9, "transposed Poisson products on W_hat and g(Z,-1)", || c9_tp(&tp)));
    ok.push(run(10, "left multiplications are 1/2-derivations", || c10_left_mult(&tp)));
    ok.push(run(11, "sparse kernels match the dense oracle", || c11_oracle(&s)));
    ok.push(run(12, "graded decomposition on g(Z,3)", || c12_graded(&s)));
    let passed = ok.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria passed in {:.1}s", ok.len(), t.elapsed().as_secs_f64());
    if passed != ok.len() {
        std::process::exit(1);
    }
}
