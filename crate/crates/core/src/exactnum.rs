//! Exact arithmetic over the Gaussian rationals Q(i).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Complex number whose real and imaginary parts are exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(Rational::from_integer(BigInt::from(n)), Rational::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(rat(n, d), Rational::zero())
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|^2 as a rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let d = self.norm_sqr();
        Ok(Self::new(&self.re / &d, -(&self.im / &d)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.re * q, &self.im * q)
    }

    /// Exact square root inside Q(i), if one exists.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.im.is_zero() {
            return if self.re.is_negative() {
                rational_sqrt(&-&self.re).map(|r| Self::new(Rational::zero(), r))
            } else {
                rational_sqrt(&self.re).map(Self::real)
            };
        }
        let m = rational_sqrt(&(&self.re * &self.re + &self.im * &self.im))?;
        let two = Rational::from_integer(BigInt::from(2));
        let x = rational_sqrt(&((&self.re + &m) / &two))?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / (&two * &x);
        Some(Self::new(x, y))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Conjugation as a free function, matching the ∗ notation.
pub fn conjugate(z: &GaussianRational) -> GaussianRational {
    z.conj()
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $f(self, o: &'b GaussianRational) -> GaussianRational {
                let g: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                g(self, o)
            }
        }
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $f(self, o: GaussianRational) -> GaussianRational {
                (&self).$f(&o)
            }
        }
        impl<'b> $tr<&'b GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $f(self, o: &'b GaussianRational) -> GaussianRational {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $f(self, o: GaussianRational) -> GaussianRational {
                self.$f(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| GaussianRational::new(&a.re + &b.re, &a.im + &b.im));
binop!(Sub, sub, |a, b| GaussianRational::new(&a.re - &b.re, &a.im - &b.im));
binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational::real(&a.re * &b.re);
    }
    GaussianRational::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
});

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

fn fmt_rat(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", fmt_rat(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}*i", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rat(s: &str, whole: &str) -> Result<Rational, NumError> {
    let err = || NumError::Parse(whole.to_string());
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return Err(err());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n).map_err(|_| err())?;
            let d = BigInt::from_str(d).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| err())?)),
    }
}

impl FromStr for GaussianRational {
    type Err = NumError;

    /// Accepts "a/b+c/d*i", "3", "-1/2*i", "i", "2-i" and similar forms.
    fn from_str(src: &str) -> Result<Self, NumError> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(NumError::Parse(src.to_string()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(GaussianRational::real(parse_rat(&s, src)?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // split between real and imaginary part at the last sign not in leading position
        let split = body
            .char_indices()
            .rfind(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k);
        let (re_s, im_s) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let re = if re_s.is_empty() { Rational::zero() } else { parse_rat(re_s, src)? };
        let im = match im_s {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            t => parse_rat(t, src)?,
        };
        Ok(GaussianRational::new(re, im))
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => Ok(GaussianRational::from_int(n.as_i64().unwrap())),
            other => Err(serde::de::Error::custom(format!("expected scalar string, got {other}"))),
        }
    }
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound);
    rat(n, d)
}

/// Draws a scalar with numerators in [-bound, bound] and denominators in [1, bound].
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, bound: u32, real_only: bool) -> GaussianRational {
    let bound = i64::from(bound.max(1));
    let re = random_rational(rng, bound);
    let im = if real_only { Rational::zero() } else { random_rational(rng, bound) };
    GaussianRational::new(re, im)
}

/// Random nonzero scalar, redrawn until nonzero.
pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, bound: u32, real_only: bool) -> GaussianRational {
    loop {
        let z = random_scalar(rng, bound, real_only);
        if !z.is_zero() {
            return z;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn basic_field_ops() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(GaussianRational::i().inv().unwrap(), q("-i"));
        assert_eq!(q("1+i") * q("1-i"), q("2"));
        assert_eq!(q("0").inv(), Err(NumError::DivisionByZero));
        assert_eq!(q("3").checked_div(&q("0")), Err(NumError::DivisionByZero));
    }

    #[test]
    fn conjugation() {
        assert_eq!(q("2+3*i").conj(), q("2-3*i"));
        assert_eq!(q("5").conj(), q("5"));
        assert_eq!(conjugate(&conjugate(&q("1-7*i"))), q("1-7*i"));
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "-4", "3/7", "1/2+3/4*i", "-1/2-3/4*i", "5*i", "-2/3*i"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q("i"), GaussianRational::i());
        assert_eq!(q("2-i"), GaussianRational::from_parts((2, 1), (-1, 1)));
        assert_eq!(q("4/8"), q("1/2"));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("abc".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn sampling_contract() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let z = random_scalar(&mut a, 10, false);
            assert_eq!(z, random_scalar(&mut b, 10, false));
            assert!(z.re.numer().abs() <= BigInt::from(10));
            let r = random_scalar(&mut a, 10, true);
            assert!(r.is_real());
            let _ = random_scalar(&mut b, 10, true);
        }
    }

    #[test]
    fn exact_square_roots() {
        for z in ["4/9", "-1", "2*i", "3+4*i", "-5+12*i", "0"] {
            let r = q(z).sqrt_exact().unwrap();
            assert_eq!(&r * &r, q(z));
        }
        assert!(q("2").sqrt_exact().is_none());
        assert!(q("1+i").sqrt_exact().is_none());
    }
}
