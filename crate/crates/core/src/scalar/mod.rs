//! Exact arithmetic over the rationals and over real quadratic fields `Q(√d)`.
//!
//! A [`Scalar`] is `a + b·√d` with rational `a`, `b` and a non-negative
//! radicand `d`. Radicands are normalized so that perfect squares collapse to
//! rationals, which keeps the rational subfield canonical. Two scalars with
//! different radicands can only be combined arithmetically when they generate
//! the same field (`d₁·d₂` a rational square); otherwise the operation fails
//! with [`ScalarError::MixedRadicals`]. Comparison, on the other hand, is
//! exact across any two quadratic fields.

mod rational;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

pub use rational::{ParseRationalError, Rational};

/// Upper bound for the trial square-factor extraction applied to radicands.
const SQUARE_FACTOR_TRIAL_LIMIT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("non-real scalar: negative radicand {0}")]
    NonReal(Rational),
    #[error("mixed radicals: √{left} and √{right} generate different fields")]
    MixedRadicals { left: Rational, right: Rational },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} has no square root in its quadratic field")]
    NotASquare(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact real number `a + b·√d`.
///
/// Invariants: `d` is a non-negative integer that is not a perfect square
/// whenever `b ≠ 0`; pure rationals are stored with `b = d = 0`.
#[derive(Clone)]
pub struct Scalar {
    a: Rational,
    b: Rational,
    d: Rational,
}

/// Builds the normalized scalar `a + b·√d`.
pub fn make_scalar(a: Rational, b: Rational, d: Rational) -> Result<Scalar, ScalarError> {
    Scalar::new(a, b, d)
}

/// Applies `op` to two scalars of a common quadratic field.
pub fn arithmetic(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

impl Scalar {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Scalar, ScalarError> {
        if d.is_negative() {
            return Err(ScalarError::NonReal(d));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Scalar::rational(a));
        }
        // √(p/q) = √(pq)/q
        let q = d.denom().clone();
        let mut rad: BigInt = d.numer() * &q;
        let mut coeff = &b / &Rational::from_int(q);
        let mut k: u64 = 2;
        while k <= SQUARE_FACTOR_TRIAL_LIMIT {
            let kk = BigInt::from(k * k);
            if kk > rad {
                break;
            }
            while (&rad % &kk).is_zero() {
                rad /= &kk;
                coeff = coeff * Rational::from_int(k);
            }
            k += 1;
        }
        let root = rad.sqrt();
        if &root * &root == rad {
            return Ok(Scalar::rational(a + coeff * Rational::from_int(root)));
        }
        Ok(Scalar {
            a,
            b: coeff,
            d: Rational::from_int(rad),
        })
    }

    pub fn rational(a: Rational) -> Scalar {
        Scalar {
            a,
            b: Rational::zero(),
            d: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::rational(Rational::from(n))
    }

    pub fn zero() -> Scalar {
        Scalar::rational(Rational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::rational(Rational::one())
    }

    /// `√q` for a non-negative rational `q`.
    pub fn sqrt_rational(q: &Rational) -> Result<Scalar, ScalarError> {
        Scalar::new(Rational::zero(), Rational::one(), q.clone())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.a.is_zero()
    }

    /// Exact sign of `a + b√d`.
    pub fn sign(&self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.d;
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn conjugate(&self) -> Scalar {
        Scalar {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// Field norm `a² − b²d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    /// Brings two scalars into a common field, returning
    /// `(a₁, b₁, a₂, b₂, d)` with both values expressed over `√d`.
    fn align(&self, other: &Scalar) -> Result<(Rational, Rational, Rational, Rational, Rational), ScalarError> {
        if other.is_rational() || self.d == other.d {
            let d = if self.is_rational() { other.d.clone() } else { self.d.clone() };
            return Ok((self.a.clone(), self.b.clone(), other.a.clone(), other.b.clone(), d));
        }
        if self.is_rational() {
            return Ok((self.a.clone(), Rational::zero(), other.a.clone(), other.b.clone(), other.d.clone()));
        }
        // √d₂ = k·√d₁ / d₁ when d₁d₂ = k²
        match (&self.d * &other.d).sqrt_exact() {
            Some(k) => {
                let b2 = &other.b * &k / &self.d;
                Ok((self.a.clone(), self.b.clone(), other.a.clone(), b2, self.d.clone()))
            }
            None => Err(ScalarError::MixedRadicals {
                left: self.d.clone(),
                right: other.d.clone(),
            }),
        }
    }

    /// True when both values live in a common quadratic field.
    pub fn compatible(&self, other: &Scalar) -> bool {
        self.align(other).is_ok()
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let (a1, b1, a2, b2, d) = self.align(other)?;
        Scalar::new(a1 + a2, b1 + b2, d)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let (a1, b1, a2, b2, d) = self.align(other)?;
        Scalar::new(a1 - a2, b1 - b2, d)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let (a1, b1, a2, b2, d) = self.align(other)?;
        let a = &a1 * &a2 + &b1 * &b2 * &d;
        let b = &a1 * &b2 + &a2 * &b1;
        Scalar::new(a, b, d)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let (a1, b1, a2, b2, d) = self.align(other)?;
        // (a1 + b1√d)(a2 − b2√d) / (a2² − b2²d)
        let n = &a2 * &a2 - &b2 * &b2 * &d;
        let a = (&a1 * &a2 - &b1 * &b2 * &d) / &n;
        let b = (&b1 * &a2 - &a1 * &b2) / &n;
        Scalar::new(a, b, d)
    }

    pub fn recip(&self) -> Result<Scalar, ScalarError> {
        Scalar::one().checked_div(self)
    }

    pub fn add_rational(&self, q: &Rational) -> Scalar {
        Scalar {
            a: &self.a + q,
            b: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            a: &self.a * q,
            b: &self.b * q,
            d: self.d.clone(),
        }
    }

    pub fn square(&self) -> Scalar {
        self.checked_mul(self).expect("a scalar is compatible with itself")
    }

    /// Non-negative square root inside the field of `self`.
    ///
    /// For a rational argument this produces `√q` (possibly opening a new
    /// field); for an irrational argument the root must already lie in
    /// `Q(√d)`, otherwise [`ScalarError::NotASquare`] is returned.
    pub fn sqrt(&self) -> Result<Scalar, ScalarError> {
        if self.is_negative() {
            return Err(ScalarError::NonReal(self.a.clone()));
        }
        if self.is_rational() {
            return Scalar::sqrt_rational(&self.a);
        }
        // (p + q√d)² = p² + q²d + 2pq√d
        let norm = self.norm();
        let n = norm
            .sqrt_exact()
            .ok_or_else(|| ScalarError::NotASquare(self.to_string()))?;
        let two = Rational::from(2);
        for cand in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if let Some(p) = cand.sqrt_exact() {
                if p.is_zero() {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let root = Scalar::new(p, q, self.d.clone())?;
                return Ok(root.abs());
            }
        }
        // p = 0: self = q²d is rational, handled above
        Err(ScalarError::NotASquare(self.to_string()))
    }

    /// Exact comparison, valid across different quadratic fields.
    pub fn cmp_exact(&self, other: &Scalar) -> Ordering {
        if let Ok(diff) = self.checked_sub(other) {
            return diff.sign().cmp(&0);
        }
        // self − other = X + w√d₂ with X = (a₁ − a₂) + b₁√d₁
        let x = Scalar {
            a: &self.a - &other.a,
            b: self.b.clone(),
            d: self.d.clone(),
        };
        let w = -&other.b;
        let sx = x.sign();
        let sy = w.signum();
        let s = if sx == 0 || sx == sy {
            sy
        } else if sy == 0 {
            sx
        } else {
            let t = x.square().add_rational(&(-(&w * &w * &other.d)));
            match t.sign() {
                1 => sx,
                -1 => sy,
                _ => 0,
            }
        };
        s.cmp(&0)
    }

    /// `floor(self)` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor();
        }
        // floor(b√d) from an integer square root, then settle by exact comparison
        let v = &self.b * &self.b * &self.d;
        let r = v.floor_sqrt();
        let radical_floor = if self.b.is_positive() { r } else { -r - BigInt::one() };
        let mut g = self.a.floor() + radical_floor;
        loop {
            let gs = Scalar::rational(Rational::from_int(g.clone()));
            if gs.cmp_exact(self) == Ordering::Greater {
                g -= 1;
                continue;
            }
            let next = Scalar::rational(Rational::from_int(&g + 1));
            if next.cmp_exact(self) != Ordering::Greater {
                g += 1;
                continue;
            }
            return g;
        }
    }

    /// `floor(self·2^bits)/2^bits`, the dyadic lower approximation.
    pub fn dyadic_floor(&self, bits: u32) -> Rational {
        let scale = Rational::from_int(BigInt::one() << bits);
        Rational::new(self.mul_rational(&scale).floor(), BigInt::one() << bits)
    }

    /// `ceil(self·2^bits)/2^bits`, the dyadic upper approximation.
    pub fn dyadic_ceil(&self, bits: u32) -> Rational {
        -(-self).dyadic_floor(bits)
    }

    /// A rational `q` with `0 < q <= self`; `None` if `self <= 0`.
    pub fn positive_rational_below(&self) -> Option<Rational> {
        if !self.is_positive() {
            return None;
        }
        if self.is_rational() {
            return Some(self.a.clone());
        }
        (0..)
            .map(|bits| self.dyadic_floor(bits))
            .find(|q| q.is_positive())
    }

    /// A rational strictly between `lo < hi`, with the smallest power-of-two
    /// denominator that works.
    pub fn rational_between(lo: &Scalar, hi: &Scalar) -> Option<Rational> {
        if lo.cmp_exact(hi) != Ordering::Less {
            return None;
        }
        for bits in 0u32.. {
            let den = BigInt::one() << bits;
            let q = Rational::new(lo.mul_rational(&Rational::from_int(den.clone())).floor() + 1, den);
            if Scalar::rational(q.clone()).cmp_exact(hi) == Ordering::Less {
                return Some(q);
            }
        }
        unreachable!()
    }

    /// Floating-point approximation, for display and sanity checks only.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * self.d.to_f64().sqrt()
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let coeff = if mag == Rational::one() {
            String::new()
        } else if mag.is_integer() {
            mag.to_string()
        } else {
            format!("({mag})")
        };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{coeff}√{}", self.d)
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{} {sign} {coeff}√{}", self.a, self.d)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ScalarRepr {
            a: self.a.clone(),
            b: self.b.clone(),
            d: self.d.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    /// Accepts `{"a", "b", "d"}` objects as well as bare rationals.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Full(ScalarRepr),
            Plain(Rational),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Full(r) => Scalar::new(r.a, r.b, r.d).map_err(de::Error::custom),
            Repr::Plain(q) => Ok(Scalar::rational(q)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn s(a: &str, b: &str, d: &str) -> Scalar {
        make_scalar(q(a), q(b), q(d)).unwrap()
    }

    #[test]
    fn perfect_square_collapses() {
        let x = s("0", "1", "4");
        assert!(x.is_rational());
        assert_eq!(x.as_rational(), Some(&q("2")));
        assert_eq!(s("1", "0", "7"), Scalar::from(1));
        assert_eq!(s("0", "1", "9/4"), Scalar::from(q("3/2")));
    }

    #[test]
    fn radicand_normalization() {
        let x = s("0", "1", "12");
        assert_eq!(x.radicand(), &q("3"));
        assert_eq!(x.radical_part(), &q("2"));
        let y = s("0", "1", "1/2");
        assert_eq!(y.radicand(), &q("2"));
        assert_eq!(y.radical_part(), &q("1/2"));
        assert_eq!(s("-3", "1", "10").to_string(), "-3 + √10");
    }

    #[test]
    fn negative_radicand_is_rejected() {
        assert_eq!(
            make_scalar(q("0"), q("1"), q("-2")),
            Err(ScalarError::NonReal(q("-2")))
        );
    }

    #[test]
    fn arithmetic_examples() {
        let x = s("-3", "1", "10");
        assert_eq!(arithmetic(&x, &Scalar::from(3), ArithOp::Add).unwrap(), s("0", "1", "10"));
        let prod = arithmetic(&x, &x.conjugate(), ArithOp::Mul).unwrap();
        assert_eq!(prod, Scalar::from(-1));
        assert!(prod.is_rational());
        let err = arithmetic(&s("1", "1", "2"), &s("1", "1", "3"), ArithOp::Mul).unwrap_err();
        assert!(matches!(err, ScalarError::MixedRadicals { .. }));
        assert!(err.to_string().contains("mixed radicals"));
        assert_eq!(
            arithmetic(&x, &Scalar::zero(), ArithOp::Div),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn same_field_different_radicand_is_compatible() {
        // √(1/10)·10 = √10
        let a = s("0", "1", "1/10").mul_rational(&q("10"));
        let b = s("0", "1", "1000");
        assert_eq!(a.checked_sub(&b).unwrap(), s("0", "-9", "10"));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(s("-3", "1", "10").sign(), 1);
        assert_eq!(s("-3", "1", "9").sign(), 0);
        assert_eq!(s("3", "-1", "10").sign(), -1);
        assert_eq!(Scalar::zero().sign(), 0);
    }

    #[test]
    fn sqrt_inside_field() {
        // (1 + √2)² = 3 + 2√2
        let x = s("3", "2", "2");
        assert_eq!(x.sqrt().unwrap(), s("1", "1", "2"));
        // (√2 − 1)² = 3 − 2√2
        assert_eq!(s("3", "-2", "2").sqrt().unwrap(), s("-1", "1", "2"));
        assert!(matches!(s("14", "-4", "11").sqrt(), Err(ScalarError::NotASquare(_))));
        assert_eq!(Scalar::from(3).sqrt().unwrap(), s("0", "1", "3"));
    }

    #[test]
    fn cross_field_comparison() {
        let s2 = s("-3", "1", "33/2");
        assert_eq!(Scalar::from(1).cmp_exact(&s2), Ordering::Less);
        let a = s("0", "1", "2");
        let b = s("0", "1", "3");
        assert!(a < b);
        assert!(s("1", "1", "2") < s("2", "1", "1/5"));
        assert_eq!(s("0", "1", "8").cmp_exact(&s("0", "2", "2")), Ordering::Equal);
    }

    #[test]
    fn floor_and_bounds() {
        assert_eq!(s("-3", "1", "10").floor(), BigInt::from(0));
        assert_eq!(s("3", "-1", "10").floor(), BigInt::from(-1));
        assert_eq!(s("0", "1", "11").dyadic_floor(2), q("13/4"));
        assert_eq!(s("0", "1", "11").dyadic_ceil(0), q("4"));
        let x = s("-3", "1", "11");
        let lo = x.positive_rational_below().unwrap();
        assert!(Scalar::from(lo) <= x);
        let between = Scalar::rational_between(&s("-3", "1", "10"), &s("3/4", "-1/4", "5")).unwrap();
        assert!(Scalar::from(between.clone()) > s("-3", "1", "10"));
        assert!(Scalar::from(between) < s("3/4", "-1/4", "5"));
    }

    #[test]
    fn json_round_trip() {
        let x = s("-3", "1/2", "10");
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"a":"-3","b":"1/2","d":"10"}"#);
        let back: Scalar = serde_json::from_str(&js).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), js);
        let plain: Scalar = serde_json::from_str(r#""5/3""#).unwrap();
        assert_eq!(plain, Scalar::from(q("5/3")));
    }
}
