//! Built-in algebras: g(G,λ), Ŵ(G), W̃(G), HW(G,−1), H̃W(G), Witt, Virasoro.

use std::sync::Arc;

use super::{AlgebraError, AlgebraSpec, BasisSymbol, Family, FamilyId, IndexDomain, LinComb};
use crate::exactnum::Scalar;
use crate::group::GroupSpec;

pub const CATALOG_NAMES: [&str; 7] = [
    "g", "W_hat", "W_tilde", "HW", "HW_tilde", "witt", "virasoro",
];

#[derive(Clone, Debug)]
pub struct CatalogParams {
    pub lambda: Option<Scalar>,
    pub group: GroupSpec,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams {
            lambda: None,
            group: GroupSpec::integers(),
        }
    }
}

impl CatalogParams {
    pub fn with_lambda(lambda: i64) -> Self {
        CatalogParams {
            lambda: Some(Scalar::from_int(lambda)),
            group: GroupSpec::integers(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub title: &'static str,
    pub params: &'static str,
    pub indices: &'static str,
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "g",
            title: "deformed generalized Heisenberg-Virasoro algebra g(G,λ)",
            params: "lambda (required), rank",
            indices: "none",
        },
        CatalogEntry {
            name: "W_hat",
            title: "not-finitely graded algebra Ŵ(G)",
            params: "rank",
            indices: "nat",
        },
        CatalogEntry {
            name: "W_tilde",
            title: "not-finitely graded algebra W̃(G)",
            params: "rank",
            indices: "int",
        },
        CatalogEntry {
            name: "HW",
            title: "Heisenberg-Virasoro type algebra HW(G,-1)",
            params: "rank",
            indices: "nat",
        },
        CatalogEntry {
            name: "HW_tilde",
            title: "central extension H̃W(G)",
            params: "rank",
            indices: "nat",
        },
        CatalogEntry {
            name: "witt",
            title: "Witt algebra W(G)",
            params: "rank",
            indices: "none",
        },
        CatalogEntry {
            name: "virasoro",
            title: "Virasoro algebra",
            params: "rank",
            indices: "none",
        },
    ]
}

pub fn catalog(name: &str, params: &CatalogParams) -> Result<AlgebraSpec, AlgebraError> {
    let group = params.group.clone();
    let needs_no_lambda = |alg: AlgebraSpec| {
        if params.lambda.is_some() {
            Err(AlgebraError::InvalidParams(format!(
                "{name} takes no lambda"
            )))
        } else {
            Ok(alg)
        }
    };
    match name {
        "g" => {
            let lambda = params
                .lambda
                .clone()
                .ok_or_else(|| AlgebraError::InvalidParams("g needs a lambda".into()))?;
            g_algebra(group, lambda)
        }
        "W_hat" => needs_no_lambda(w_hat(group)?),
        "W_tilde" => needs_no_lambda(w_tilde(group)?),
        "HW" => needs_no_lambda(hw(group, false)?),
        "HW_tilde" => needs_no_lambda(hw(group, true)?),
        "witt" => needs_no_lambda(witt(group, false)?),
        "virasoro" => needs_no_lambda(witt(group, true)?),
        other => Err(AlgebraError::UnknownAlgebra(other.to_string())),
    }
}

fn rule(
    f: impl Fn(&AlgebraSpec, &BasisSymbol, &BasisSymbol) -> LinComb + Send + Sync + 'static,
) -> Arc<super::RuleFn> {
    Arc::new(move |alg, x, y| Ok(f(alg, x, y)))
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// (a³ − a)/12
fn virasoro_cocycle(a: &Scalar) -> Scalar {
    &(&a.pow(3) - a) * &Scalar::ratio(1, 12).unwrap()
}

fn g_algebra(group: GroupSpec, lambda: Scalar) -> Result<AlgebraSpec, AlgebraError> {
    let rank = group.rank();
    let mut alg = AlgebraSpec::new("g", group);
    alg.set_param("lambda", lambda.clone());
    let l = alg.add_family(Family::graded("L"))?;
    let i = alg.add_family(Family::graded("I"))?;
    let c_l = alg.add_family(Family::central("C_L"))?;
    let lam0 = lambda.is_zero();
    let lam1 = lambda == int(1);
    let lam_m2 = lambda == int(-2);
    let (c_i, c_li0) = if lam0 {
        (
            Some(alg.add_family(Family::central("C_I"))?),
            Some(alg.add_family(Family::central("C_LI0"))?),
        )
    } else {
        (None, None)
    };
    let c_li1 = if lam1 {
        Some(alg.add_family(Family::central("C_LI1"))?)
    } else {
        None
    };
    let mut c_li_hi: Vec<FamilyId> = Vec::new();
    if lam_m2 {
        for k in 2..=rank {
            c_li_hi.push(alg.add_family(Family::central(&format!("C_LI{k}")))?);
        }
    }
    alg.set_trivial_half_derivations(Some(!(lam1 || lambda == int(-1))));

    alg.add_rule(
        l,
        l,
        rule(move |alg, x, y| {
            let (a, b) = (alg.value(&x.degree), alg.value(&y.degree));
            let mut out = LinComb::single(BasisSymbol::graded(l, &x.degree + &y.degree), &b - &a);
            if (&x.degree + &y.degree).is_zero() {
                out.add_term(BasisSymbol::central(c_l, alg.rank()), virasoro_cocycle(&a));
            }
            out
        }),
    );
    let lam = lambda.clone();
    alg.add_rule(
        l,
        i,
        rule(move |alg, x, y| {
            let (a, b) = (alg.value(&x.degree), alg.value(&y.degree));
            let mut out = LinComb::single(
                BasisSymbol::graded(i, &x.degree + &y.degree),
                &b - &(&lam * &a),
            );
            if (&x.degree + &y.degree).is_zero() {
                let r = alg.rank();
                if let Some(c) = c_li0 {
                    out.add_term(BasisSymbol::central(c, r), &a.pow(2) + &a);
                }
                if let Some(c) = c_li1 {
                    out.add_term(BasisSymbol::central(c, r), virasoro_cocycle(&a));
                }
                for (k, &c) in c_li_hi.iter().enumerate() {
                    out.add_term(BasisSymbol::central(c, r), int(x.degree.coords()[k + 1]));
                }
            }
            out
        }),
    );
    if let Some(c_i) = c_i {
        alg.add_rule(
            i,
            i,
            rule(move |alg, x, y| {
                if (&x.degree + &y.degree).is_zero() {
                    LinComb::single(BasisSymbol::central(c_i, alg.rank()), alg.value(&x.degree))
                } else {
                    LinComb::zero()
                }
            }),
        );
    }
    Ok(alg)
}

fn witt(group: GroupSpec, central: bool) -> Result<AlgebraSpec, AlgebraError> {
    let mut alg = AlgebraSpec::new(if central { "virasoro" } else { "witt" }, group);
    let l = alg.add_family(Family::graded("L"))?;
    let c = if central {
        Some(alg.add_family(Family::central("C"))?)
    } else {
        None
    };
    alg.add_rule(
        l,
        l,
        rule(move |alg, x, y| {
            let (a, b) = (alg.value(&x.degree), alg.value(&y.degree));
            let mut out = LinComb::single(BasisSymbol::graded(l, &x.degree + &y.degree), &b - &a);
            if let Some(c) = c {
                if (&x.degree + &y.degree).is_zero() {
                    out.add_term(BasisSymbol::central(c, alg.rank()), virasoro_cocycle(&a));
                }
            }
            out
        }),
    );
    Ok(alg)
}

fn w_hat(group: GroupSpec) -> Result<AlgebraSpec, AlgebraError> {
    let mut alg = AlgebraSpec::new("W_hat", group);
    let l = alg.add_family(Family::indexed("L", IndexDomain::Nat))?;
    let c = alg.add_family(Family::central("C"))?;
    alg.set_trivial_half_derivations(Some(false));
    alg.add_rule(
        l,
        l,
        rule(move |alg, x, y| {
            let (a, b) = (alg.value(&x.degree), alg.value(&y.degree));
            let (i, j) = (x.idx(), y.idx());
            let deg = &x.degree + &y.degree;
            let mut out = LinComb::single(BasisSymbol::indexed(l, deg.clone(), i + j), &b - &a);
            out.add_term(BasisSymbol::indexed(l, deg.clone(), i + j + 1), int(j - i));
            if deg.is_zero() && i == -j {
                out.add_term(BasisSymbol::central(c, alg.rank()), virasoro_cocycle(&a));
            }
            out
        }),
    );
    Ok(alg)
}

fn w_tilde(group: GroupSpec) -> Result<AlgebraSpec, AlgebraError> {
    let mut alg = AlgebraSpec::new("W_tilde", group);
    let l = alg.add_family(Family::indexed("L", IndexDomain::Int))?;
    let c = alg.add_family(Family::central("C"))?;
    alg.set_trivial_half_derivations(Some(true));
    alg.add_rule(
        l,
        l,
        rule(move |alg, x, y| {
            let (a, b) = (alg.value(&x.degree), alg.value(&y.degree));
            let (i, j) = (x.idx(), y.idx());
            let deg = &x.degree + &y.degree;
            let mut out = LinComb::single(BasisSymbol::indexed(l, deg.clone(), i + j), &b - &a);
            out.add_term(BasisSymbol::indexed(l, deg.clone(), i + j - 1), int(j - i));
            if deg.is_zero() {
                let coeff = match i + j {
                    -1 => a.pow(3),
                    0 => &int(3 * i) * &a.pow(2),
                    1 => &int(3 * i * (i - 1)) * &a,
                    2 => int(i * (i - 1) * (i - 2)),
                    _ => Scalar::zero(),
                };
                out.add_term(BasisSymbol::central(c, alg.rank()), coeff);
            }
            out
        }),
    );
    Ok(alg)
}

/// HW(G,−1) and, with `central`, its extension H̃W(G).
fn hw(group: GroupSpec, central: bool) -> Result<AlgebraSpec, AlgebraError> {
    let mut alg = AlgebraSpec::new(if central { "HW_tilde" } else { "HW" }, group);
    let l = alg.add_family(Family::indexed("L", IndexDomain::Nat))?;
    let h = alg.add_family(Family::indexed("H", IndexDomain::Nat))?;
    let centrals = if central {
        Some((
            alg.add_family(Family::central("C_L"))?,
            alg.add_family(Family::central("C_LH"))?,
            alg.add_family(Family::central("C_H"))?,
        ))
    } else {
        None
    };
    alg.set_trivial_half_derivations(Some(central));
    alg.add_rule(
        l,
        l,
        rule(move |alg, x, y| {
            let (a, b) = (alg.value(&x.degree), alg.value(&y.degree));
            let (i, j) = (x.idx(), y.idx());
            let deg = &x.degree + &y.degree;
            let mut out = LinComb::single(BasisSymbol::indexed(l, deg.clone(), i + j), &b - &a);
            if j != i {
                out.add_term(BasisSymbol::indexed(l, deg.clone(), i + j - 1), int(j - i));
            }
            if let Some((c_l, _, _)) = centrals {
                if deg.is_zero() && i == -j {
                    out.add_term(BasisSymbol::central(c_l, alg.rank()), virasoro_cocycle(&a));
                }
            }
            out
        }),
    );
    alg.add_rule(
        l,
        h,
        rule(move |alg, x, y| {
            let (a, b) = (alg.value(&x.degree), alg.value(&y.degree));
            let (i, j) = (x.idx(), y.idx());
            let deg = &x.degree + &y.degree;
            let mut out = LinComb::single(BasisSymbol::indexed(h, deg.clone(), i + j), b);
            if j != 0 {
                out.add_term(BasisSymbol::indexed(h, deg.clone(), i + j - 1), int(j));
            }
            if let Some((_, c_lh, _)) = centrals {
                if deg.is_zero() && i == -j {
                    out.add_term(BasisSymbol::central(c_lh, alg.rank()), &a.pow(2) - &a);
                }
            }
            out
        }),
    );
    if let Some((_, _, c_h)) = centrals {
        alg.add_rule(
            h,
            h,
            rule(move |alg, x, y| {
                if (&x.degree + &y.degree).is_zero() && x.idx() == -y.idx() {
                    LinComb::single(BasisSymbol::central(c_h, alg.rank()), alg.value(&x.degree))
                } else {
                    LinComb::zero()
                }
            }),
        );
    }
    Ok(alg)
}
