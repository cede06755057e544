//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's arithmetic on algebra elements.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Kernel of a dense matrix by plain Gauss-Jordan elimination, one vector per
/// free column.
pub fn dense_kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                let pivot = m[r].clone();
                for (a, p) in m[k].iter_mut().zip(&pivot) {
                    *a = a.clone() - p.clone() * f.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (k, &p) in pivots.iter().enumerate() {
            v[p] = -m[k][free].clone();
        }
        out.push(v);
    }
    out
}

/// Rank by the same elimination.
pub fn dense_rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    ncols - dense_kernel(rows, ncols).len()
}

/// Every vector of `b` lies in the span of `a`.
pub fn span_contains(a: &[Vec<Q>], b: &[Vec<Q>], ncols: usize) -> bool {
    let ra = dense_rank(a, ncols);
    b.iter().all(|v| {
        let mut m = a.to_vec();
        m.push(v.clone());
        dense_rank(&m, ncols) == ra
    })
}

/// Elements of Ŵ(ℤ): `Some((α, i))` for L_{α,i}, `None` for C.
pub type WKey = Option<(i64, i64)>;
pub type WElem = BTreeMap<WKey, Q>;

fn w_add(e: &mut WElem, k: WKey, c: Q) {
    let v = e.entry(k).or_insert_with(Q::zero);
    *v += c;
    if v.is_zero() {
        e.remove(&k);
    }
}

/// Ŵ(ℤ) bracket on basis elements, written out from the multiplication table.
pub fn w_hat_bracket(x: WKey, y: WKey) -> WElem {
    let mut out = WElem::new();
    let (Some((a, i)), Some((b, j))) = (x, y) else {
        return out;
    };
    w_add(&mut out, Some((a + b, i + j)), q(b - a));
    w_add(&mut out, Some((a + b, i + j + 1)), q(j - i));
    if a + b == 0 && i == 0 && j == 0 {
        w_add(&mut out, None, qr(a * a * a - a, 12));
    }
    out
}

/// Ŵ(ℤ) product with coefficients `a^{d,k}`.
pub fn w_hat_product(coeffs: &[((i64, i64), Q)], x: WKey, y: WKey) -> WElem {
    let mut out = WElem::new();
    let (Some((a, i)), Some((b, j))) = (x, y) else {
        return out;
    };
    for ((d, k), c) in coeffs {
        w_add(&mut out, Some((d + a + b, k + i + j + 1)), c.clone());
    }
    out
}

pub fn w_bilin(f: &dyn Fn(WKey, WKey) -> WElem, u: &WElem, v: &WElem) -> WElem {
    let mut out = WElem::new();
    for (x, a) in u {
        for (y, b) in v {
            for (k, c) in f(*x, *y) {
                w_add(&mut out, k, c * a.clone() * b.clone());
            }
        }
    }
    out
}

pub fn w_basis(k: WKey) -> WElem {
    WElem::from([(k, Q::one())])
}

pub fn w_sum(u: &WElem, v: &WElem, s: Q) -> WElem {
    let mut out = u.clone();
    for (k, c) in v {
        w_add(&mut out, *k, c.clone() * s.clone());
    }
    out
}
