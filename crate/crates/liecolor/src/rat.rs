//! Exact rational arithmetic with a machine-word fast path.
//!
//! Every structure constant in this crate is a root of unity times a
//! rational, and the verification sweeps multiply millions of them, so the
//! representation matters: a [`Rat`] stores numerator and denominator in
//! `i64` while they fit and transparently promotes to a heap-allocated
//! `BigRational` when an intermediate would overflow. Results are always
//! reduced (gcd 1, positive denominator) and demoted back to the small form
//! whenever possible, so equality is structural.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// An exact rational number.
#[derive(Clone, Debug)]
pub enum Rat {
    /// Reduced fraction with positive denominator, both fitting `i64`.
    Small(i64, i64),
    /// Fallback for values outside the `i64` range, also kept reduced.
    Big(Box<BigRational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Build a reduced `Rat` from an `i128` fraction. The inputs of a single
/// arithmetic step on `i64` operands always fit `i128`, so this never loses
/// information.
fn normalize_i128(mut num: i128, mut den: i128) -> Rat {
    assert!(den != 0, "rational with zero denominator");
    if num == 0 {
        return Rat::Small(0, 1);
    }
    if den < 0 {
        num = -num;
        den = -den;
    }
    let g = gcd_i128(num, den);
    num /= g;
    den /= g;
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) => Rat::Small(n, d),
        _ => Rat::Big(Box::new(BigRational::new(num.into(), den.into()))),
    }
}

fn demote(r: BigRational) -> Rat {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        Rat::Small(n, d)
    } else {
        Rat::Big(Box::new(r))
    }
}

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        normalize_i128(num as i128, den as i128)
    }

    pub fn from_int(n: i64) -> Self {
        Rat::Small(n, 1)
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Rat> {
        match self {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => Some(normalize_i128(*d as i128, *n as i128)),
            Rat::Big(b) => Some(demote(b.recip())),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small(n, d) => *n as f64 / *d as f64,
            Rat::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        // Both variants are canonical, so a Small never equals a Big.
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(a), Rat::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        &self + &rhs
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            // Integer fast path: no gcd needed.
            (Rat::Small(a, 1), Rat::Small(c, 1)) => match a.checked_add(*c) {
                Some(s) => Rat::Small(s, 1),
                None => normalize_i128(*a as i128 + *c as i128, 1),
            },
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                normalize_i128(a * d + c * b, b * d)
            }
            _ => demote(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        &self - &rhs
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, 1), Rat::Small(c, 1)) => match a.checked_sub(*c) {
                Some(s) => Rat::Small(s, 1),
                None => normalize_i128(*a as i128 - *c as i128, 1),
            },
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                normalize_i128(a * d - c * b, b * d)
            }
            _ => demote(self.to_big() - rhs.to_big()),
        }
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, 1), Rat::Small(c, 1)) => match a.checked_mul(*c) {
                Some(p) => Rat::Small(p, 1),
                None => normalize_i128(*a as i128 * *c as i128, 1),
            },
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                // Cross-reduce before multiplying to keep intermediates small.
                let g1 = gcd_i128(*a as i128, *d as i128).max(1);
                let g2 = gcd_i128(*c as i128, *b as i128).max(1);
                let num = (*a as i128 / g1) * (*c as i128 / g2);
                let den = (*b as i128 / g2) * (*d as i128 / g1);
                normalize_i128(num, den)
            }
            _ => demote(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        &self / &rhs
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Rat) -> Rat {
        let inv = rhs.inv().expect("division by zero rational");
        self * &inv
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, d),
            Rat::Big(b) => demote(-*b),
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -self.clone()
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        *self = &*self + &rhs;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        *self = &*self - &rhs;
    }
}

impl MulAssign for Rat {
    fn mul_assign(&mut self, rhs: Rat) {
        *self = &*self * &rhs;
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat::Small(0, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat::Small(1, 1)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(b) => write!(f, "{b}"),
        }
    }
}

/// Error parsing a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ParseRatError(s.to_string());
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num_s).map_err(|_| err())?;
        let den = BigInt::from_str(den_s).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(demote(BigRational::new(num, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        assert_eq!(Rat::new(2, 4), Rat::new(1, 2));
        assert_eq!(Rat::new(-2, -4), Rat::new(1, 2));
        assert_eq!(Rat::new(2, -4), Rat::new(-1, 2));
        assert_eq!(Rat::new(0, 7), Rat::zero());
    }

    #[test]
    fn promotion_and_demotion() {
        let big = Rat::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Rat::Big(_)));
        // Dividing back down demotes to the small representation.
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Rat::Small(_, _)));
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["0", "5", "-3", "1/2", "-7/3"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    fn rat_strategy() -> impl Strategy<Value = Rat> {
        // Mix of small values and values near the i64 boundary to exercise
        // the promotion path.
        prop_oneof![
            (-40i64..40, 1i64..12).prop_map(|(n, d)| Rat::new(n, d)),
            (i64::MAX - 1000..i64::MAX, 1i64..5).prop_map(|(n, d)| Rat::new(n, d)),
        ]
    }

    proptest! {
        #[test]
        fn matches_bigrational_oracle(a in rat_strategy(), b in rat_strategy()) {
            let (ba, bb) = (a.to_big(), b.to_big());
            prop_assert_eq!((&a + &b).to_big(), &ba + &bb);
            prop_assert_eq!((&a - &b).to_big(), &ba - &bb);
            prop_assert_eq!((&a * &b).to_big(), &ba * &bb);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), &ba / &bb);
            }
        }

        #[test]
        fn field_laws(a in rat_strategy(), b in rat_strategy(), c in rat_strategy()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), Rat::one());
            }
        }
    }
}
