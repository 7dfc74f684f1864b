//! The exact coefficient field: rationals extended by a root of unity.
//!
//! A session fixes one even order `L` and works in the field generated over
//! the rationals by a primitive `L`-th root of unity `z`. Elements are dense
//! coefficient vectors reduced modulo the `L`-th cyclotomic polynomial, which
//! makes the representation canonical: an element is zero exactly when its
//! coefficient vector is empty, and equality is structural. Rational
//! constants look the same in every order, so they carry order 0 and unify
//! with either operand; mixing two distinct non-constant orders is a
//! programming error and panics.

use crate::rat::Rat;
use num::{One, Zero};
use smallvec::{smallvec, SmallVec};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

/// Inline coefficient storage; sessions of order up to eight stay on the
/// stack.
type Coeffs = SmallVec<[Rat; 4]>;

/// Element of the session coefficient field.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    /// Root-of-unity order, or 0 for a plain rational constant.
    order: u32,
    /// Coefficients of `z^0, z^1, ...`, trimmed, degree below `deg(Phi_order)`.
    coeffs: Coeffs,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("invalid scalar literal `{0}`")]
    Parse(String),
}

/// Monic coefficient vector of the cyclotomic polynomial for `order`,
/// computed once per order and shared. A thread-local mirror keeps the hot
/// reduction path off the global lock.
fn cyclotomic_polynomial(order: u32) -> Arc<Vec<Rat>> {
    thread_local! {
        static LOCAL: std::cell::RefCell<HashMap<u32, Arc<Vec<Rat>>>> =
            std::cell::RefCell::new(HashMap::new());
    }
    if let Some(hit) = LOCAL.with(|m| m.borrow().get(&order).cloned()) {
        return hit;
    }
    let computed = cyclotomic_polynomial_shared(order);
    LOCAL.with(|m| m.borrow_mut().insert(order, computed.clone()));
    computed
}

fn cyclotomic_polynomial_shared(order: u32) -> Arc<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Rat>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(p) = guard.get(&order) {
        return p.clone();
    }
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, computed bottom-up over
    // the divisors of n.
    let mut by_div: HashMap<u32, Vec<Rat>> = HashMap::new();
    let mut divisors: Vec<u32> = (1..=order).filter(|d| order % d == 0).collect();
    divisors.sort_unstable();
    for &d in &divisors {
        if let Some(p) = guard.get(&d) {
            by_div.insert(d, p.as_ref().clone());
            continue;
        }
        let mut num = vec![Rat::zero(); d as usize + 1];
        num[0] = -Rat::one();
        num[d as usize] = Rat::one();
        for &e in divisors.iter().filter(|&&e| e < d && d % e == 0) {
            num = poly_exact_div(&num, &by_div[&e]);
        }
        by_div.insert(d, num);
    }
    for (d, p) in by_div {
        guard.entry(d).or_insert_with(|| Arc::new(p));
    }
    guard[&order].clone()
}

fn poly_trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(Rat::is_zero) {
        v.pop();
    }
}

fn coeffs_trim(v: &mut Coeffs) {
    while v.last().is_some_and(Rat::is_zero) {
        v.pop();
    }
}

fn poly_deg(v: &[Rat]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

/// Exact division of polynomials over the rationals; the divisor must divide
/// evenly (used only with cyclotomic factors of `x^n - 1`).
fn poly_exact_div(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let dn = poly_deg(num).expect("zero dividend");
    let dd = poly_deg(den).expect("zero divisor");
    assert!(dn >= dd);
    let lead_inv = den[dd].inv().unwrap();
    let mut rem = num.to_vec();
    let mut quot = vec![Rat::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = &rem[i + dd] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate().take(dd + 1) {
            if !dc.is_zero() {
                let t = &c * dc;
                rem[i + j] = &rem[i + j] - &t;
            }
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Rat::is_zero), "inexact polynomial division");
    poly_trim(&mut quot);
    quot
}

/// Reduce `coeffs` in place modulo the cyclotomic polynomial for `order`.
fn reduce_mod_phi(coeffs: &mut Coeffs, order: u32) {
    let phi = cyclotomic_polynomial(order);
    let d = phi.len() - 1;
    while coeffs.len() > d {
        let c = coeffs.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let top = coeffs.len() - d;
        for (j, pc) in phi.iter().enumerate().take(d) {
            if !pc.is_zero() {
                let t = &c * pc;
                coeffs[top + j] = &coeffs[top + j] - &t;
            }
        }
    }
    coeffs_trim(coeffs);
}

impl Cyclotomic {
    fn normalized(order: u32, mut coeffs: Coeffs) -> Self {
        coeffs_trim(&mut coeffs);
        let order = if coeffs.len() <= 1 { 0 } else { order };
        Cyclotomic { order, coeffs }
    }

    pub fn from_rat(r: Rat) -> Self {
        Cyclotomic::normalized(0, smallvec![r])
    }

    pub fn from_int(n: i64) -> Self {
        Cyclotomic::from_rat(Rat::from_int(n))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Cyclotomic::from_rat(Rat::new(num, den))
    }

    /// `z^j` in the field of the given order, in canonical form.
    pub fn root_of_unity(order: u32, j: i64) -> Self {
        assert!(order >= 1, "root-of-unity order must be positive");
        let j = j.rem_euclid(order as i64) as usize;
        let mut coeffs: Coeffs = smallvec![Rat::zero(); j + 1];
        coeffs[j] = Rat::one();
        reduce_mod_phi(&mut coeffs, order);
        Cyclotomic::normalized(order, coeffs)
    }

    /// The ambient order, or 0 for a rational constant.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// The value as a rational if it has no root-of-unity part.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn common_order(&self, rhs: &Self) -> u32 {
        match (self.order, rhs.order) {
            (0, o) | (o, 0) => o,
            (a, b) if a == b => a,
            (a, b) => panic!("mixed scalar orders {a} and {b} in one session"),
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclotomic::from_rat(r.inv().unwrap()));
        }
        // Extended Euclid against the cyclotomic modulus: s*self + t*phi = 1.
        let phi = cyclotomic_polynomial(self.order);
        let (mut r0, mut r1) = (phi.as_ref().clone(), self.coeffs.to_vec());
        let (mut s0, mut s1) = (vec![], vec![Rat::one()]);
        while poly_deg(&r1).is_some() {
            let (q, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 is now a nonzero constant gcd.
        let c = r0[poly_deg(&r0).unwrap()].inv().unwrap();
        let mut inv: Coeffs = s0.iter().map(|x| x * &c).collect();
        reduce_mod_phi(&mut inv, self.order);
        Ok(Cyclotomic::normalized(self.order, inv))
    }

    pub fn pow(&self, n: i64) -> Result<Self, ScalarError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Cyclotomic::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Numerical image under `z -> exp(2*pi*i/order)`, for cross-checks.
    pub fn embed_f64(&self) -> (f64, f64) {
        if self.coeffs.is_empty() {
            return (0.0, 0.0);
        }
        let order = self.order.max(1) as f64;
        let theta = 2.0 * std::f64::consts::PI / order;
        let (mut re, mut im) = (0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64();
            re += v * (theta * j as f64).cos();
            im += v * (theta * j as f64).sin();
        }
        (re, im)
    }

    /// Parse the textual rendering (`1/2 + z^3`, `-z`, `2/3 z^2`, ...) back
    /// into canonical form in the field of the given order.
    pub fn parse(input: &str, order: u32) -> Result<Self, ScalarError> {
        let err = || ScalarError::Parse(input.to_string());
        let mut coeffs: Coeffs = SmallVec::new();
        let mut add_term = |coeff: Rat, power: usize| {
            if coeffs.len() <= power {
                coeffs.resize(power + 1, Rat::zero());
            }
            coeffs[power] = &coeffs[power] + &coeff;
        };
        let s = input.trim();
        if s.is_empty() {
            return Err(err());
        }
        // Split into signed terms at top level.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut first = true;
        for ch in s.chars() {
            match ch {
                '+' | '-' if !first && !cur.trim().is_empty() => {
                    terms.push((neg, cur.trim().to_string()));
                    cur = String::new();
                    neg = ch == '-';
                }
                '-' if first || cur.trim().is_empty() => {
                    neg = !neg;
                }
                _ => cur.push(ch),
            }
            if !ch.is_whitespace() {
                first = false;
            }
        }
        if cur.trim().is_empty() {
            return Err(err());
        }
        terms.push((neg, cur.trim().to_string()));

        for (negated, term) in terms {
            let term = term.replace('*', " ");
            let (coeff, power) = match term.find('z') {
                None => (term.trim().parse::<Rat>().map_err(|_| err())?, 0),
                Some(pos) => {
                    let (head, tail) = term.split_at(pos);
                    let tail = &tail[1..];
                    let coeff = if head.trim().is_empty() {
                        Rat::one()
                    } else {
                        head.trim().parse::<Rat>().map_err(|_| err())?
                    };
                    let power = if tail.trim().is_empty() {
                        1usize
                    } else {
                        let t = tail.trim();
                        let t = t.strip_prefix('^').ok_or_else(err)?;
                        t.trim().parse::<usize>().map_err(|_| err())?
                    };
                    (coeff, power)
                }
            };
            add_term(if negated { -coeff } else { coeff }, power);
        }
        if coeffs.len() > 1 && order < 1 {
            return Err(err());
        }
        if order >= 1 {
            reduce_mod_phi(&mut coeffs, order);
        }
        Ok(Cyclotomic::normalized(order, coeffs))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        // Constants are canonicalized to order 0, so derived equality works.
        self.order == other.order && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic { order: 0, coeffs: SmallVec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::from_int(1)
    }
    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                let t = ca * cb;
                out[i + j] = &out[i + j] + &t;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    poly_trim(&mut out);
    out
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let dd = poly_deg(den).expect("division by zero polynomial");
    let lead_inv = den[dd].inv().unwrap();
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let mut quot = vec![Rat::zero(); rem.len().saturating_sub(dd)];
    while let Some(dn) = poly_deg(&rem) {
        if dn < dd {
            break;
        }
        let c = &rem[dn] * &lead_inv;
        for (j, dc) in den.iter().enumerate().take(dd + 1) {
            if !dc.is_zero() {
                let t = &c * dc;
                rem[dn - dd + j] = &rem[dn - dd + j] - &t;
            }
        }
        quot[dn - dd] = c;
        poly_trim(&mut rem);
    }
    poly_trim(&mut quot);
    (quot, rem)
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let order = self.common_order(rhs);
        let mut out: Coeffs = smallvec![Rat::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        Cyclotomic::normalized(order, out)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let order = self.common_order(rhs);
        let mut out: Coeffs = smallvec![Rat::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] = &out[i] - c;
        }
        Cyclotomic::normalized(order, out)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let order = self.common_order(rhs);
        // Constant fast path: scaling needs no modular reduction.
        if let Some(r) = self.as_rational() {
            if r.is_zero() {
                return Cyclotomic::zero();
            }
            if r.is_one() {
                return rhs.clone();
            }
            let coeffs: Coeffs = rhs.coeffs.iter().map(|c| c * &r).collect();
            return Cyclotomic::normalized(order, coeffs);
        }
        if let Some(r) = rhs.as_rational() {
            if r.is_zero() {
                return Cyclotomic::zero();
            }
            if r.is_one() {
                return self.clone();
            }
            let coeffs: Coeffs = self.coeffs.iter().map(|c| c * &r).collect();
            return Cyclotomic::normalized(order, coeffs);
        }
        // Quadratic sessions (order four) take a hand-written path with no
        // modular reduction loop.
        if order == 4 && self.coeffs.len() == 2 && rhs.coeffs.len() == 2 {
            let (a0, a1) = (&self.coeffs[0], &self.coeffs[1]);
            let (b0, b1) = (&rhs.coeffs[0], &rhs.coeffs[1]);
            let c0 = &(a0 * b0) - &(a1 * b1);
            let c1 = &(a0 * b1) + &(a1 * b0);
            return Cyclotomic::normalized(order, smallvec![c0, c1]);
        }
        let mut out: Coeffs = smallvec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in rhs.coeffs.iter().enumerate() {
                if !cb.is_zero() {
                    let t = ca * cb;
                    out[i + j] = &out[i + j] + &t;
                }
            }
        }
        reduce_mod_phi(&mut out, order);
        Cyclotomic::normalized(order, out)
    }
}

impl<'a> Div<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Cyclotomic) -> Cyclotomic {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

macro_rules! forward_owned_binop {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
forward_owned_binop!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign for Cyclotomic {
    fn add_assign(&mut self, rhs: Cyclotomic) {
        *self = &*self + &rhs;
    }
}

impl SubAssign for Cyclotomic {
    fn sub_assign(&mut self, rhs: Cyclotomic) {
        *self = &*self - &rhs;
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag} ")?;
                    }
                    if j == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{j}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zeta(order: u32, j: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(order, j)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |p: &Arc<Vec<Rat>>| -> Vec<Rat> { p.as_ref().clone() };
        assert_eq!(as_i64(&cyclotomic_polynomial(1)), vec![Rat::new(-1, 1), Rat::one()]);
        assert_eq!(as_i64(&cyclotomic_polynomial(2)), vec![Rat::one(), Rat::one()]);
        assert_eq!(
            as_i64(&cyclotomic_polynomial(4)),
            vec![Rat::one(), Rat::zero(), Rat::one()]
        );
        assert_eq!(
            as_i64(&cyclotomic_polynomial(6)),
            vec![Rat::one(), Rat::new(-1, 1), Rat::one()]
        );
        assert_eq!(
            as_i64(&cyclotomic_polynomial(12)),
            vec![Rat::one(), Rat::zero(), Rat::new(-1, 1), Rat::zero(), Rat::one()]
        );
    }

    #[test]
    fn roots_of_unity_order_four() {
        assert_eq!(zeta(4, 0), Cyclotomic::one());
        assert_eq!(zeta(4, 2), Cyclotomic::from_int(-1));
        // Squaring the canonical form of z reduces through x^2 + 1.
        let i = zeta(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_int(-1));
    }

    #[test]
    fn root_products_add_exponents() {
        for order in [2u32, 4, 6, 8, 12] {
            for j in 0..order as i64 {
                for k in 0..order as i64 {
                    assert_eq!(&zeta(order, j) * &zeta(order, k), zeta(order, j + k));
                }
            }
        }
    }

    #[test]
    fn root_of_unity_has_exact_order() {
        for order in [2u32, 4, 6, 8] {
            for j in 0..order as i64 {
                assert_eq!(zeta(order, j).pow(order as i64).unwrap(), Cyclotomic::one());
            }
            assert_eq!(zeta(order, order as i64 / 2), Cyclotomic::from_int(-1));
        }
    }

    #[test]
    fn product_of_mixed_terms() {
        // (1/2 + z) * (1/2 - z) in order 4 is 1/4 - z^2 = 5/4.
        let a = &Cyclotomic::rational(1, 2) + &zeta(4, 1);
        let b = &Cyclotomic::rational(1, 2) - &zeta(4, 1);
        assert_eq!(&a * &b, Cyclotomic::rational(5, 4));
        // Independent cross-check through the numerical embedding.
        let (re, im) = (&a * &b).embed_f64();
        let (ra, ia) = a.embed_f64();
        let (rb, ib) = b.embed_f64();
        assert!((re - (ra * rb - ia * ib)).abs() < 1e-9);
        assert!((im - (ra * ib + ia * rb)).abs() < 1e-9);
    }

    #[test]
    fn inverse_multiplies_back_to_one() {
        let x = &Cyclotomic::rational(1, 2) + &zeta(4, 1);
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, Cyclotomic::one());
        for j in 0..8 {
            let z = zeta(8, j);
            assert_eq!(z.inv().unwrap(), zeta(8, 8 - j));
        }
        assert_eq!(Cyclotomic::one().inv().unwrap(), Cyclotomic::one());
        assert_eq!(
            Cyclotomic::zero().inv(),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn display_and_parse() {
        let x = &Cyclotomic::rational(1, 2) + &zeta(8, 3);
        assert_eq!(x.to_string(), "1/2 + z^3");
        assert_eq!(Cyclotomic::parse("1/2 + z^3", 8).unwrap(), x);
        let y = &(-&zeta(8, 1)) + &Cyclotomic::rational(-2, 3);
        assert_eq!(y.to_string(), "-2/3 - z");
        assert_eq!(Cyclotomic::parse("-2/3 - z", 8).unwrap(), y);
        assert_eq!(Cyclotomic::parse("0", 8).unwrap(), Cyclotomic::zero());
        // High powers reduce on parse.
        assert_eq!(Cyclotomic::parse("z^9", 8).unwrap(), zeta(8, 1));
        assert!(Cyclotomic::parse("z^", 8).is_err());
        assert!(Cyclotomic::parse("", 8).is_err());
    }

    fn scalar_strategy(order: u32) -> impl Strategy<Value = Cyclotomic> {
        let deg = cyclotomic_polynomial(order).len() - 1;
        prop::collection::vec((-6i64..=6, 1i64..4), deg).prop_map(move |parts| {
            let coeffs = parts.into_iter().map(|(n, d)| Rat::new(n, d)).collect();
            Cyclotomic::normalized(order, coeffs)
        })
    }

    proptest! {
        #[test]
        fn field_laws_order_twelve(
            x in scalar_strategy(12),
            y in scalar_strategy(12),
            z in scalar_strategy(12),
        ) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), Cyclotomic::one());
            }
        }

        #[test]
        fn display_parse_round_trip(x in scalar_strategy(8)) {
            let shown = x.to_string();
            prop_assert_eq!(Cyclotomic::parse(&shown, 8).unwrap(), x);
        }

        #[test]
        fn embedding_respects_multiplication(x in scalar_strategy(6), y in scalar_strategy(6)) {
            let (ra, ia) = x.embed_f64();
            let (rb, ib) = y.embed_f64();
            let (rp, ip) = (&x * &y).embed_f64();
            prop_assert!((rp - (ra * rb - ia * ib)).abs() < 1e-6);
            prop_assert!((ip - (ra * ib + ia * rb)).abs() < 1e-6);
        }
    }
}
