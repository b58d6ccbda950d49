//! Exact coefficient fields.
//!
//! Everything in the engine is generic over [`Field`]. A field value carries
//! the runtime data (the prime for `F_p`), and elements are plain values that
//! are combined through the field, in the style of `ring.add(&a, &b)`.

use std::fmt::Debug;
use std::hash::Hash;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};

pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, v: i64) -> Self::Elem;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    /// Number of elements, when finite.
    fn order(&self) -> Option<u64>;

    /// The `k`-th element in a fixed enumeration. Only meaningful for finite fields
    /// (`k < order`); for the rationals it enumerates small integers.
    fn nth(&self, k: u64) -> Self::Elem;

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// JSON encoding of a coefficient.
    fn to_json(&self, a: &Self::Elem) -> Value;
    fn from_json(&self, v: &Value) -> Result<Self::Elem>;

    /// Short human-readable form.
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn spec(&self) -> FieldSpec;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a += b * c`
    fn add_mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *a = self.add(a, &self.mul(b, c));
    }
}

/// Which field an algebra is defined over, as written in input files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl FieldSpec {
    pub fn to_json(self) -> Value {
        match self {
            FieldSpec::Prime(p) => serde_json::json!({ "prime": p }),
            FieldSpec::Rational => Value::String("rational".into()),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "rational" => Ok(FieldSpec::Rational),
            Value::Object(map) => {
                let p = map.get("prime").and_then(Value::as_u64).ok_or_else(|| {
                    Error::Parse("field object needs an integer \"prime\"".into())
                })?;
                if map.len() != 1 {
                    return Err(Error::Parse("field object has unexpected keys".into()));
                }
                Ok(FieldSpec::Prime(p))
            }
            _ => Err(Error::Parse(
                "field must be {\"prime\": p} or \"rational\"".into(),
            )),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_p`, elements stored as `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub const MAX_PRIME: u64 = (1 << 31) - 1;

    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > Self::MAX_PRIME {
            return Err(Error::InvalidField(format!("prime {p} exceeds 2^31 - 1")));
        }
        Ok(Fp { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Balanced representative in `(-p/2, p/2]`.
    pub fn balanced(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce_i64(t0))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> Option<u64> {
        Some(self.p)
    }
    fn nth(&self, k: u64) -> u64 {
        k % self.p
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn to_json(&self, a: &u64) -> Value {
        Value::from(self.balanced(*a))
    }
    fn from_json(&self, v: &Value) -> Result<u64> {
        v.as_i64()
            .map(|x| self.reduce_i64(x))
            .ok_or_else(|| Error::Parse(format!("coefficient {v} is not an integer")))
    }
    fn fmt_elem(&self, a: &u64) -> String {
        self.balanced(*a).to_string()
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn nth(&self, k: u64) -> BigRational {
        // 0, 1, -1, 2, -2, ...
        let m = k.div_ceil(2) as i64;
        self.from_i64(if k % 2 == 1 { m } else { -m })
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-7..=7))
    }
    fn to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            if let Some(v) = a.numer().to_i64() {
                return Value::from(v);
            }
        }
        Value::String(a.to_string())
    }
    fn from_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| self.from_i64(x))
                .ok_or_else(|| Error::Parse(format!("coefficient {v} is not an integer"))),
            Value::String(s) => parse_rational(s),
            _ => Err(Error::Parse(format!("bad rational coefficient {v}"))),
        }
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational coefficient \"{s}\""));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_guard() {
        assert!(Fp::new(4).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(5).is_ok());
    }

    #[test]
    fn balanced_coefficients() {
        let f = Fp::new(5).unwrap();
        assert_eq!(f.to_json(&4), Value::from(-1));
        assert_eq!(f.from_json(&Value::from(-1)).unwrap(), 4);
    }

    #[test]
    fn rational_json() {
        let q = Rationals;
        let x = q.from_json(&Value::String("-3/6".into())).unwrap();
        assert_eq!(q.to_json(&x), Value::String("-1/2".into()));
        assert_eq!(q.to_json(&q.from_i64(7)), Value::from(7));
    }

    proptest! {
        #[test]
        fn fp_inverse(a in 1u64..10007) {
            let f = Fp::new(10007).unwrap();
            let inv = f.inv(&a).unwrap();
            prop_assert_eq!(f.mul(&a, &inv), 1);
        }

        #[test]
        fn fp_distributes(a in 0u64..13, b in 0u64..13, c in 0u64..13) {
            let f = Fp::new(13).unwrap();
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        }
    }
}
