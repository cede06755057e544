use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::uni;
use super::{NumError, Poly, Rational};

/// Element of ℚ(e2, ..., eN).
///
/// Pure rationals take the `Rat` fast path. Fractions keep a monic
/// denominator; when numerator and denominator share a single generator the
/// fraction is reduced by a univariate gcd, otherwise it is left unreduced and
/// equality falls back to cross-multiplication.
#[derive(Clone)]
pub enum Scalar {
    Rat(Rational),
    Frac { num: Poly, den: Poly },
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rational::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Result<Self, NumError> {
        Ok(Scalar::Rat(Rational::new(n, d)?))
    }

    /// The formal generator `e_{slot+2}`.
    pub fn generator(slot: usize) -> Self {
        Scalar::Frac {
            num: Poly::var(slot),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar::fraction(p, Poly::one()).expect("unit denominator")
    }

    pub fn fraction(num: Poly, den: Poly) -> Result<Self, NumError> {
        if den.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(normalize(num, den))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Frac { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Frac { .. } => None,
        }
    }

    /// Integer value, if this scalar is a rational integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        self.as_rational().and_then(Rational::to_i64)
    }

    pub fn numer(&self) -> Poly {
        match self {
            Scalar::Rat(r) => Poly::constant(r.clone()),
            Scalar::Frac { num, .. } => num.clone(),
        }
    }

    pub fn denom(&self) -> Poly {
        match self {
            Scalar::Rat(_) => Poly::one(),
            Scalar::Frac { den, .. } => den.clone(),
        }
    }

    /// Stored polynomial terms; used for growth ceilings.
    pub fn term_count(&self) -> usize {
        match self {
            Scalar::Rat(_) => 1,
            Scalar::Frac { num, den } => num.term_count() + den.term_count(),
        }
    }

    pub fn check_ceiling(&self, limit: usize) -> Result<(), NumError> {
        let terms = self.term_count();
        if terms > limit {
            Err(NumError::TermCeiling { terms, limit })
        } else {
            Ok(())
        }
    }

    pub fn inv(&self) -> Result<Self, NumError> {
        match self {
            Scalar::Rat(r) => Ok(Scalar::Rat(r.inv()?)),
            Scalar::Frac { num, den } => Scalar::fraction(den.clone(), num.clone()),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, NumError> {
        if rhs.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.pow(exp)),
            Scalar::Frac { num, den } => normalize(num.pow(exp), den.pow(exp)),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, exp: i64) -> Result<Self, NumError> {
        let p = self.pow(exp.unsigned_abs() as u32);
        if exp < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }
}

fn normalize(num: Poly, den: Poly) -> Scalar {
    debug_assert!(!den.is_zero());
    if num.is_zero() {
        return Scalar::zero();
    }
    if let Some(c) = den.as_constant() {
        let num = num.scale(&c.inv().expect("nonzero denominator"));
        return match num.as_constant() {
            Some(r) => Scalar::Rat(r),
            None => Scalar::Frac {
                num,
                den: Poly::one(),
            },
        };
    }
    let (num, den) = reduce_univariate(num, den);
    if let Some(c) = den.as_constant() {
        return normalize(num, Poly::constant(c));
    }
    let lead = den
        .leading()
        .map(|(_, c)| c.clone())
        .expect("nonzero denominator");
    let inv = lead.inv().expect("nonzero leading coefficient");
    Scalar::Frac {
        num: num.scale(&inv),
        den: den.scale(&inv),
    }
}

fn reduce_univariate(num: Poly, den: Poly) -> (Poly, Poly) {
    let mut vars = num.variables();
    for v in den.variables() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    if vars.len() != 1 {
        return (num, den);
    }
    let slot = vars[0];
    let (Some(n), Some(d)) = (num.to_univariate(slot), den.to_univariate(slot)) else {
        return (num, den);
    };
    let g = uni::gcd(&n, &d);
    if g.len() <= 1 {
        return (num, den);
    }
    let (nq, _) = uni::div_rem(&n, &g);
    let (dq, _) = uni::div_rem(&d, &g);
    (
        Poly::from_univariate(slot, &nq),
        Poly::from_univariate(slot, &dq),
    )
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Rat(r), Scalar::Frac { num, den })
            | (Scalar::Frac { num, den }, Scalar::Rat(r)) => *num == den.scale(r),
            (Scalar::Frac { num: n1, den: d1 }, Scalar::Frac { num: n2, den: d2 }) => {
                if d1 == d2 {
                    n1 == n2
                } else {
                    n1.mul(d2) == n2.mul(d1)
                }
            }
        }
    }
}

impl Eq for Scalar {}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let (n1, d1, n2, d2) = (self.numer(), self.denom(), rhs.numer(), rhs.denom());
                if d1 == d2 {
                    normalize(n1.add(&n2), d1)
                } else {
                    normalize(n1.mul(&d2).add(&n2.mul(&d1)), d1.mul(&d2))
                }
            }
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => self + &(-rhs),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Frac { num, den })
            | (Scalar::Frac { num, den }, Scalar::Rat(a)) => {
                if a.is_zero() {
                    Scalar::zero()
                } else {
                    Scalar::Frac {
                        num: num.scale(a),
                        den: den.clone(),
                    }
                }
            }
            (Scalar::Frac { num: n1, den: d1 }, Scalar::Frac { num: n2, den: d2 }) => {
                normalize(n1.mul(n2), d1.mul(d2))
            }
        }
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero; see [`Scalar::checked_div`].
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("scalar division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Frac { num, den } => Scalar::Frac {
                num: num.neg(),
                den: den.clone(),
            },
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Frac { num, den } if den.is_constant() => write!(f, "{num}"),
            Scalar::Frac { num, den } => write!(f, "({num})/({den})"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = NumError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn rational_fast_path() {
        assert_eq!(s("1/2") + s("1/3"), s("5/6"));
        assert_eq!(s("2/3") * s("3/4"), s("1/2"));
        assert_eq!(-Scalar::zero(), Scalar::zero());
        assert!(!s("1/12").is_zero());
    }

    #[test]
    fn fractions() {
        let e2 = Scalar::generator(0);
        let sum = &e2 + &e2.inv().unwrap();
        assert_eq!(sum, s("(e2^2 + 1)/e2"));
        assert_eq!(sum.to_string(), "(e2^2 + 1)/(e2)");
        assert_eq!(s("(e2^2 - 1)/(e2 - 1)"), s("e2 + 1"));
        assert_eq!(e2.inv().unwrap().to_string(), "(1)/(e2)");
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn univariate_reduction_is_canonical() {
        let a = s("(e2^2 - 1)/(2*e2 - 2)");
        match &a {
            Scalar::Frac { num, den } => {
                assert!(den.is_constant());
                assert_eq!(num.to_string(), "1/2*e2 + 1/2");
            }
            Scalar::Rat(_) => panic!("expected a fraction"),
        }
    }

    #[test]
    fn multivariate_equality_by_cross_multiplication() {
        let a = s("(e2*e3 + e2)/(e3 + 1)");
        assert_eq!(a, s("e2"));
        let b = s("(e2 + e3)/(e2 - e3)");
        let c = s("(e2^2 + 2*e2*e3 + e3^2)/(e2^2 - e3^2)");
        assert_eq!(b, c);
    }

    #[test]
    fn serde_round_trip() {
        let v = s("(e2^2 + 1)/(e2 - 3)");
        let json = serde_json::to_string(&v).unwrap();
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert_eq!(v, back);
    }
}
