use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::Rational;

/// Exponent vector over the formal generators `e2, e3, ...` (slot 0 is `e2`).
/// Trailing zero exponents are never stored, so equal monomials compare equal
/// regardless of how many generators the surrounding algebra has.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u32; 2]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    /// The monomial `e_{slot+2}`.
    pub fn var(slot: usize) -> Self {
        let mut v: SmallVec<[u32; 2]> = SmallVec::from_elem(0, slot + 1);
        v[slot] = 1;
        Monomial(v)
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut v: SmallVec<[u32; 2]> = exps.iter().copied().collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, slot: usize) -> u32 {
        self.0.get(slot).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v: SmallVec<[u32; 2]> = (0..n)
            .map(|i| self.exponent(i) + other.exponent(i))
            .collect();
        Monomial(v)
    }
}

/// Graded lexicographic order; the largest monomial is the leading one.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let n = self.0.len().max(other.0.len());
                for i in 0..n {
                    match self.exponent(i).cmp(&other.exponent(i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (slot, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "e{}", slot + 2)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with rational coefficients. No stored
/// coefficient is zero, so the representation is canonical.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The generator `e_{slot+2}`.
    pub fn var(slot: usize) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(slot), Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Generator slots that occur with a nonzero exponent.
    pub fn variables(&self) -> Vec<usize> {
        let mut slots: Vec<usize> = Vec::new();
        for m in self.terms.keys() {
            for (slot, &e) in m.exponents().iter().enumerate() {
                if e > 0 && !slots.contains(&slot) {
                    slots.push(slot);
                }
            }
        }
        slots.sort_unstable();
        slots
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), -a)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Dense coefficient list in the single generator `slot`, lowest degree
    /// first. Returns `None` if any other generator occurs.
    pub fn to_univariate(&self, slot: usize) -> Option<Vec<Rational>> {
        let mut dense: Vec<Rational> = Vec::new();
        for (m, c) in &self.terms {
            if m.exponents()
                .iter()
                .enumerate()
                .any(|(s, &e)| s != slot && e > 0)
            {
                return None;
            }
            let d = m.exponent(slot) as usize;
            if dense.len() <= d {
                dense.resize(d + 1, Rational::zero());
            }
            dense[d] = c.clone();
        }
        Some(dense)
    }

    pub fn from_univariate(slot: usize, dense: &[Rational]) -> Poly {
        let mut p = Poly::zero();
        for (d, c) in dense.iter().enumerate() {
            let mut exps = vec![0u32; slot + 1];
            exps[slot] = d as u32;
            p.add_term(Monomial::from_exponents(&exps), c.clone());
        }
        p
    }
}

/// Univariate helpers on dense coefficient vectors (lowest degree first).
pub(crate) mod uni {
    use super::Rational;

    pub fn trim(p: &mut Vec<Rational>) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    /// Quotient and remainder of `a / b`; `b` must be nonzero.
    pub fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut rem: Vec<Rational> = a.to_vec();
        trim(&mut rem);
        let mut b = b.to_vec();
        trim(&mut b);
        assert!(!b.is_empty(), "univariate division by zero polynomial");
        let lead = b.last().unwrap().clone();
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
        while rem.len() >= b.len() && !rem.is_empty() {
            let shift = rem.len() - b.len();
            let c = rem.last().unwrap() / &lead;
            for (i, bc) in b.iter().enumerate() {
                let t = &c * bc;
                rem[shift + i] -= &t;
            }
            quot[shift] = c;
            rem.pop();
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = div_rem(&x, &y);
            x = y;
            y = r;
        }
        if let Some(lead) = x.last().cloned() {
            for c in x.iter_mut() {
                *c = &*c / &lead;
            }
        }
        x
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn display_and_mul() {
        let e2 = Poly::var(0);
        let p = e2.mul(&e2).sub(&Poly::one());
        assert_eq!(p.to_string(), "e2^2 - 1");
        let q = e2.add(&Poly::one()).mul(&e2.sub(&Poly::one()));
        assert_eq!(p, q);
        assert_eq!(Poly::var(1).mul(&e2).scale(&r(-2)).to_string(), "-2*e2*e3");
    }

    #[test]
    fn univariate_gcd() {
        // (x^2 - 1) and (x - 1)
        let a = vec![r(-1), r(0), r(1)];
        let b = vec![r(-1), r(1)];
        assert_eq!(uni::gcd(&a, &b), vec![r(-1), r(1)]);
        let (q, rem) = uni::div_rem(&a, &b);
        assert_eq!(q, vec![r(1), r(1)]);
        assert!(rem.is_empty());
    }

    #[test]
    fn monomials_trim_trailing_zeros() {
        assert_eq!(Monomial::from_exponents(&[1, 0, 0]), Monomial::var(0));
        assert!(Monomial::from_exponents(&[0, 0]).is_one());
    }
}
