//! Exact rational edge costs.
//!
//! Values that fit into a reduced `i64` fraction stay inline; anything larger
//! spills into an arbitrary-precision [`BigRational`]. The representation is
//! canonical (small whenever it fits), so derived equality and hashing agree
//! with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `den > 0`.
    Small {
        num: i64,
        den: i64,
    },
    Big(Box<BigRational>),
}

/// An exact rational number.
///
/// Edge costs are non-negative; intermediate values in certificate checks may
/// go negative, so the type itself is signed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cost(Repr);

impl Cost {
    pub const fn zero() -> Self {
        Cost(Repr::Small { num: 0, den: 1 })
    }

    pub const fn one() -> Self {
        Cost(Repr::Small { num: 1, den: 1 })
    }

    pub const fn from_int(v: i64) -> Self {
        Cost(Repr::Small { num: v, den: 1 })
    }

    /// `num / den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Cost(Repr::Small { num, den }),
            _ => Cost(Repr::Big(Box::new(r))),
        }
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let (mut num, mut den) = (num, den);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Cost(Repr::Small { num, den }),
            _ => Cost(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(num), BigInt::from(den))))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.0, Repr::Small { den: 1, .. })
    }

    /// `self * k` for a small integer factor.
    pub fn mul_int(&self, k: i64) -> Self {
        match &self.0 {
            Repr::Small { num, den } => Self::from_i128(*num as i128 * k as i128, *den as i128),
            Repr::Big(b) => Self::from_big(&**b * BigRational::from_integer(BigInt::from(k))),
        }
    }

    /// `self / k` for a small non-zero integer divisor.
    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        match &self.0 {
            Repr::Small { num, den } => Self::from_i128(*num as i128, *den as i128 * k as i128),
            Repr::Big(b) => Self::from_big(&**b / BigRational::from_integer(BigInt::from(k))),
        }
    }

    /// Lossy decimal rendering for human-facing output only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Always `p/q`, even for integers.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl Default for Cost {
    fn default() -> Self {
        Cost::zero()
    }
}

impl From<i64> for Cost {
    fn from(v: i64) -> Self {
        Cost::from_int(v)
    }
}

impl From<i32> for Cost {
    fn from(v: i32) -> Self {
        Cost::from_int(v as i64)
    }
}

impl From<u32> for Cost {
    fn from(v: u32) -> Self {
        Cost::from_int(v as i64)
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn add(self, rhs: &'a Cost) -> Cost {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    Cost::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Cost::from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
                }
            }
            _ => Cost::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn sub(self, rhs: &'a Cost) -> Cost {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    Cost::from_i128(*a as i128 - *c as i128, *b as i128)
                } else {
                    Cost::from_i128(*a as i128 * *d as i128 - *c as i128 * *b as i128, *b as i128 * *d as i128)
                }
            }
            _ => Cost::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn mul(self, rhs: &'a Cost) -> Cost {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                Cost::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Cost::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        &self + &rhs
    }
}

impl Sub for Cost {
    type Output = Cost;
    fn sub(self, rhs: Cost) -> Cost {
        &self - &rhs
    }
}

impl Mul for Cost {
    type Output = Cost;
    fn mul(self, rhs: Cost) -> Cost {
        &self * &rhs
    }
}

impl Neg for Cost {
    type Output = Cost;
    fn neg(self) -> Cost {
        match self.0 {
            Repr::Small { num, den } => Cost::from_i128(-(num as i128), den as i128),
            Repr::Big(b) => Cost::from_big(-*b),
        }
    }
}

impl AddAssign<&Cost> for Cost {
    fn add_assign(&mut self, rhs: &Cost) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Cost> for Cost {
    fn sub_assign(&mut self, rhs: &Cost) {
        *self = &*self - rhs;
    }
}

impl<'a> Sum<&'a Cost> for Cost {
    fn sum<I: Iterator<Item = &'a Cost>>(iter: I) -> Cost {
        iter.fold(Cost::zero(), |acc, c| &acc + c)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::zero(), |acc, c| &acc + &c)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.denom().is_one() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number literal {0:?}")]
pub struct ParseCostError(pub String);

impl FromStr for Cost {
    type Err = ParseCostError;

    /// Accepts integers, decimals (`2.5`) and fractions (`5/2`), each with an
    /// optional sign. Decimals are converted exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCostError(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        if body.is_empty() {
            return Err(err());
        }
        let digits = |d: &str| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit());
        let value = if let Some((p, q)) = body.split_once('/') {
            if !digits(p) || !digits(q) {
                return Err(err());
            }
            let p: BigInt = p.parse().map_err(|_| err())?;
            let q: BigInt = q.parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            BigRational::new(p, q)
        } else if let Some((int, frac)) = body.split_once('.') {
            if (int.is_empty() && frac.is_empty())
                || (!int.is_empty() && !digits(int))
                || (!frac.is_empty() && !digits(frac))
            {
                return Err(err());
            }
            let joined = format!("{}{}", if int.is_empty() { "0" } else { int }, frac);
            let p: BigInt = joined.parse().map_err(|_| err())?;
            let q = num_traits::pow(BigInt::from(10), frac.len());
            BigRational::new(p, q)
        } else {
            if !digits(body) {
                return Err(err());
            }
            BigRational::from_integer(body.parse().map_err(|_| err())?)
        };
        Ok(Cost::from_big(if neg { -value } else { value }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!("2.5".parse::<Cost>().unwrap(), Cost::ratio(5, 2));
        assert_eq!("0.125".parse::<Cost>().unwrap(), Cost::ratio(1, 8));
        assert_eq!(".5".parse::<Cost>().unwrap(), Cost::ratio(1, 2));
        assert_eq!("3.".parse::<Cost>().unwrap(), Cost::from_int(3));
        assert_eq!("6/4".parse::<Cost>().unwrap(), Cost::ratio(3, 2));
        assert_eq!("-1/3".parse::<Cost>().unwrap(), Cost::ratio(-1, 3));
        assert_eq!("0.1".parse::<Cost>().unwrap().to_string(), "1/10");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "1e5", ".", "1/", "/2", "--1", "0x10"] {
            assert!(bad.parse::<Cost>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn spills_to_big_and_back() {
        let big = Cost::from_int(i64::MAX);
        let sum = &big + &big;
        assert!(matches!(sum.0, Repr::Big(_)));
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small { .. }));

        let mut tiny = Cost::one();
        for _ in 0..200 {
            tiny = tiny.div_int(2);
        }
        assert!(!tiny.is_zero());
        assert!(tiny > Cost::zero());
        assert_eq!(tiny.to_fraction_string().split('/').next(), Some("1"));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Cost::from_int(7).to_string(), "7");
        assert_eq!(Cost::ratio(9, 2).to_string(), "9/2");
        assert_eq!(Cost::from_int(7).to_fraction_string(), "7/1");
        assert_eq!(Cost::ratio(-4, 6).to_string(), "-2/3");
    }

    fn small() -> impl Strategy<Value = Cost> {
        (-1000i64..1000, 1i64..64).prop_map(|(p, q)| Cost::ratio(p, q))
    }

    fn wide() -> impl Strategy<Value = Cost> {
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(p, q)| Cost::ratio(p, q))
    }

    proptest! {
        #[test]
        fn arithmetic_matches_bigrational(a in wide(), b in wide()) {
            prop_assert_eq!((&a + &b).to_big(), a.to_big() + b.to_big());
            prop_assert_eq!((&a - &b).to_big(), a.to_big() - b.to_big());
            prop_assert_eq!((&a * &b).to_big(), a.to_big() * b.to_big());
            prop_assert_eq!(a.cmp(&b), a.to_big().cmp(&b.to_big()));
        }

        #[test]
        fn display_parse_round_trip(a in small()) {
            prop_assert_eq!(a.to_string().parse::<Cost>().unwrap(), a.clone());
            prop_assert_eq!(a.to_fraction_string().parse::<Cost>().unwrap(), a);
        }

        #[test]
        fn halving_then_doubling_is_identity(a in wide()) {
            prop_assert_eq!(a.div_int(2).mul_int(2), a);
        }
    }
}
