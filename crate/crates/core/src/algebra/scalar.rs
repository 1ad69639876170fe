//! Gaussian rationals `a + bi` with `a, b ∈ Q`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::DsError;

/// An exact element of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    /// `num/den`, real. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    /// `re_num/re_den + (im_num/im_den) i`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Result<Self, DsError> {
        if re_den == 0 || im_den == 0 {
            return Err(DsError::invalid("zero denominator in scalar"));
        }
        Ok(Scalar::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        ))
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar::new(re, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    /// True when `self - other` is a nonzero integer (the resonance relation).
    pub fn differs_by_nonzero_integer(&self, other: &Scalar) -> bool {
        let d = self - other;
        d.is_integer() && !d.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> Scalar {
        let k = BigRational::from_integer(k.into());
        Scalar::new(&self.re * &k, &self.im * &k)
    }

    /// Least common denominator of both components.
    pub fn denominator_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.re.denom(), self.im.denom())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Scalar::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| Scalar::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return Scalar::from_rational(&a.re * &b.re);
    }
    Scalar::new(
        &a.re * &b.re - &a.im * &b.im,
        &a.re * &b.im + &a.im * &b.re,
    )
});
forward_binop!(Div, div, |a, b| {
    let inv = b.inv().expect("division of a Gaussian rational by zero");
    a * &inv
});

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() {
            String::new()
        } else {
            fmt_rational(&im_abs)
        };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im_txt}i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", fmt_rational(&self.re), sign, im_txt)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, DsError> {
    let bad = || DsError::invalid(format!("cannot parse rational '{s}'"));
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Scalar {
    type Err = DsError;

    /// Accepts `3`, `-1/2`, `2i`, `-i`, `1/2+3/4i`, `1-i`.
    fn from_str(s: &str) -> Result<Self, DsError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(DsError::invalid("empty scalar"));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Scalar::from_rational(parse_rational(&t)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (re_txt, im_txt) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let im = match im_txt {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.trim_start_matches('+'))?,
        };
        let re = if re_txt.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(re_txt)?
        };
        Ok(Scalar::new(re, im))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntOrText {
    Int(i64),
    Text(String),
}

impl IntOrText {
    fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            IntOrText::Int(v) => Ok(BigInt::from(*v)),
            IntOrText::Text(s) => s.trim().parse().map_err(|_| format!("bad integer '{s}'")),
        }
    }
}

fn bigint_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

/// Encoded as `[re_num, re_den, im_num, im_den]`; integers that overflow
/// `i64` are written as decimal strings.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts = [
            bigint_json(self.re.numer()),
            bigint_json(self.re.denom()),
            bigint_json(self.im.numer()),
            bigint_json(self.im.denom()),
        ];
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = Vec::<IntOrText>::deserialize(d)?;
        if raw.len() != 4 {
            return Err(D::Error::custom(format!(
                "scalar must be [re_num, re_den, im_num, im_den], got {} entries",
                raw.len()
            )));
        }
        let v: Vec<BigInt> = raw
            .iter()
            .map(IntOrText::to_bigint)
            .collect::<std::result::Result<_, _>>()
            .map_err(D::Error::custom)?;
        if v[1].is_zero() || v[3].is_zero() {
            return Err(D::Error::custom("zero denominator in scalar"));
        }
        Ok(Scalar::new(
            BigRational::new(v[0].clone(), v[1].clone()),
            BigRational::new(v[2].clone(), v[3].clone()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a: Scalar = "1/2+3i".parse().unwrap();
        let b: Scalar = "-2+1/3i".parse().unwrap();
        let q = &a / &b;
        assert_eq!(&q * &b, a);
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["0", "-7/3", "i", "-i", "2/5i", "1-i", "-1/2+3/4i", "4-9/2i"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
            assert_eq!(v.to_string().parse::<Scalar>().unwrap(), v);
        }
    }

    #[test]
    fn resonance_relation() {
        let a = Scalar::ratio(1, 2);
        assert!(a.differs_by_nonzero_integer(&Scalar::ratio(-3, 2)));
        assert!(!a.differs_by_nonzero_integer(&a));
        assert!(!a.differs_by_nonzero_integer(&Scalar::from_int(0)));
        let c: Scalar = "1/2+i".parse().unwrap();
        assert!(!a.differs_by_nonzero_integer(&c));
    }

    #[test]
    fn json_encoding() {
        let v: Scalar = "-1/2+3i".parse().unwrap();
        let txt = serde_json::to_string(&v).unwrap();
        assert_eq!(txt, "[-1,2,3,1]");
        assert_eq!(serde_json::from_str::<Scalar>(&txt).unwrap(), v);
        let big: Scalar = serde_json::from_str(r#"["100000000000000000000",3,0,1]"#).unwrap();
        assert_eq!(serde_json::from_str::<Scalar>(&serde_json::to_string(&big).unwrap()).unwrap(), big);
        assert!(serde_json::from_str::<Scalar>("[1,0,0,1]").is_err());
        assert!(serde_json::from_str::<Scalar>("[1,2]").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }
}
