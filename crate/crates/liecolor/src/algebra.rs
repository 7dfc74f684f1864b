//! The graded color-commutative algebra of a session: basis indices, sparse
//! elements, the twisted product with its sign machinery, and inversion of
//! root vectors.
//!
//! A basis vector is labelled by a coefficient-subgroup index, an eigenvalue
//! coordinate vector and a variable exponent vector. The product of two
//! basis vectors is a single basis vector scaled by a structure constant
//! assembled from commutation factors, the coefficient table and the
//! canonical cocycle; square-zero variables make some products vanish
//! outright.

use crate::grading::GroupElement;
use crate::scalar::Cyclotomic;
use crate::session::{Session, Truncation};
use crate::structure::SlotKind;
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// Label of a basis vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex {
    /// Index into the coefficient subgroup.
    pub alpha: u32,
    /// Eigenvalue coordinates with respect to the group generators.
    pub a: Vec<i64>,
    /// Variable exponents, one per slot.
    pub i: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("only indices with zero variable exponents are invertible, got `{0}`")]
    NotRootVector(String),
    #[error("invalid element literal `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("element is not homogeneous")]
    NotHomogeneous,
}

/// Sparse element: a scalar combination of basis indices with no explicit
/// zeros, ordered lexicographically for canonical output.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<BasisIndex, Cyclotomic>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(idx: BasisIndex, c: Cyclotomic) -> Self {
        let mut e = Self::default();
        e.add_term(idx, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &BasisIndex) -> Option<&Cyclotomic> {
        self.terms.get(idx)
    }

    pub fn add_term(&mut self, idx: BasisIndex, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, c) in other.iter() {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, c) in other.iter() {
            out.add_term(idx.clone(), -c);
        }
        out
    }

    pub fn scaled(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }
}

impl Session {
    /// The identity basis index.
    pub fn identity_index(&self) -> BasisIndex {
        BasisIndex {
            alpha: self.g0_zero(),
            a: vec![0; self.m()],
            i: vec![0; self.k()],
        }
    }

    pub fn identity_element(&self) -> AlgebraElement {
        AlgebraElement::term(self.identity_index(), Cyclotomic::one())
    }

    /// Shape check for an index against the session blocks.
    pub fn index_is_valid(&self, u: &BasisIndex) -> bool {
        if (u.alpha as usize) >= self.gamma0().len()
            || u.a.len() != self.m()
            || u.i.len() != self.k()
        {
            return false;
        }
        u.i.iter().enumerate().all(|(p0, &e)| match self.signature().slot_kind(p0 + 1) {
            SlotKind::Fixed => e == 0,
            SlotKind::Poly => true,
            SlotKind::Grassmann => e <= 1,
        })
    }

    /// Total color of a basis vector: coefficient color plus hat image plus
    /// the exponent-weighted variable colors.
    pub fn color_of(&self, u: &BasisIndex) -> GroupElement {
        let grp = self.grading().group();
        let mut c = self.gamma0().element(u.alpha as usize).clone();
        c = grp.add(&c, &self.hat(&u.a));
        for (p0, &e) in u.i.iter().enumerate() {
            if e != 0 {
                c = grp.add(&c, &grp.scale(e as i64, self.t_color(p0 + 1)));
            }
        }
        c
    }

    /// All colors present in an element.
    pub fn element_colors(&self, e: &AlgebraElement) -> BTreeSet<GroupElement> {
        e.iter().map(|(idx, _)| self.color_of(idx)).collect()
    }

    /// The color of a nonzero homogeneous element.
    pub fn homogeneous_color(&self, e: &AlgebraElement) -> Result<GroupElement, AlgebraError> {
        let colors = self.element_colors(e);
        if colors.len() == 1 {
            Ok(colors.into_iter().next().unwrap())
        } else {
            Err(AlgebraError::NotHomogeneous)
        }
    }

    /// The two sign factors of the variable part: the commutation factor of
    /// an exponent vector against a color, and the reordering factor of two
    /// exponent vectors.
    pub fn sign_factors(
        &self,
        i: &[u32],
        beta: &GroupElement,
        j: &[u32],
    ) -> (Cyclotomic, Cyclotomic) {
        let l = self.order() as i64;
        let mut first = 0i64;
        for (p0, &ip) in i.iter().enumerate() {
            if ip != 0 {
                let base = self.grading().eps_exponent(self.t_color(p0 + 1), beta);
                first = (first + (ip as i64 % l) * base) % l;
            }
        }
        (self.zeta_pow(first), self.zeta_pow(self.tilde_exp(i, j)))
    }

    /// Exponent of the reordering factor between two exponent vectors:
    /// moving the left block's variables past the right block's.
    pub(crate) fn tilde_exp(&self, i: &[u32], j: &[u32]) -> i64 {
        let l = self.order() as i64;
        let mut acc = 0i64;
        for q in 2..=self.k() {
            if i[q - 1] == 0 {
                continue;
            }
            for p in 1..q {
                if j[p - 1] == 0 {
                    continue;
                }
                let term = (i[q - 1] as i64 % l) * (j[p - 1] as i64 % l) % l
                    * self.t_t_exp(q, p)
                    % l;
                acc = (acc + term) % l;
            }
        }
        acc
    }

    /// Sum of exponent vectors inside the admissible set, or `None` when a
    /// square-zero slot overflows (the product is zero).
    fn exponent_sum(&self, i: &[u32], j: &[u32]) -> Option<Vec<u32>> {
        let mut out = Vec::with_capacity(i.len());
        for (p0, (&x, &y)) in i.iter().zip(j).enumerate() {
            let s = x + y;
            if self.signature().slot_kind(p0 + 1) == SlotKind::Grassmann && s > 1 {
                return None;
            }
            out.push(s);
        }
        Some(out)
    }

    /// Product of two basis vectors: the structure constant and the target
    /// index, or `None` when a square-zero variable repeats.
    pub fn mul_basis(&self, u: &BasisIndex, v: &BasisIndex) -> Option<(Cyclotomic, BasisIndex)> {
        let i_sum = self.exponent_sum(&u.i, &v.i)?;
        let l = self.order() as i64;
        let beta = v.alpha;
        let mut exp = 0i64;
        for (p0, &ip) in u.i.iter().enumerate() {
            if ip == 0 {
                continue;
            }
            let p = p0 + 1;
            let ip = ip as i64 % l;
            // variable block against the right coefficient color
            exp = (exp + ip * self.t_g0_exp(p, beta)) % l;
            // variable block against the right hat image
            exp = (exp + ip * self.t_vs_hat_exp(p, &v.a)) % l;
        }
        // reordering of the two variable blocks
        exp = (exp + self.tilde_exp(&u.i, &v.i)) % l;
        // left hat image against the right coefficient color
        exp = (exp + self.hat_vs_g0_exp(&u.a, beta)) % l;
        // canonical cocycle of the eigenvalue parts
        exp = (exp + self.f_exp(&u.a, &v.a)) % l;

        let mut scalar = self.zeta_pow(exp);
        let e1 = self.gamma0().e_val(u.alpha as usize, beta as usize);
        if !e1.is_one() {
            scalar = &scalar * e1;
        }
        let alpha_sum = self.g0_add(u.alpha, beta);
        // Hat defect is zero for homomorphic hats; the coefficient factor it
        // contributes is the table entry against the zero element.
        let theta_idx = self.g0_zero();
        let e2 = self.gamma0().e_val(alpha_sum as usize, theta_idx as usize);
        if !e2.is_one() {
            scalar = &scalar * e2;
        }
        let idx = BasisIndex {
            alpha: self.g0_add(alpha_sum, theta_idx),
            a: u.a.iter().zip(&v.a).map(|(x, y)| x + y).collect(),
            i: i_sum,
        };
        Some((scalar, idx))
    }

    /// Bilinear product of two elements.
    pub fn mul(&self, u: &AlgebraElement, v: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (ui, uc) in u.iter() {
            for (vi, vc) in v.iter() {
                if let Some((s, idx)) = self.mul_basis(ui, vi) {
                    out.add_term(idx, &(uc * vc) * &s);
                }
            }
        }
        out
    }

    /// Two-sided inverse of a root vector (an index with zero variable
    /// exponents).
    pub fn invert_root_vector(&self, w: &BasisIndex) -> Result<AlgebraElement, AlgebraError> {
        if w.i.iter().any(|&e| e != 0) {
            return Err(AlgebraError::NotRootVector(self.format_index(w)));
        }
        let mirror = BasisIndex {
            alpha: self.g0_neg(w.alpha),
            a: w.a.iter().map(|&x| -x).collect(),
            i: w.i.clone(),
        };
        let (s, prod) = self
            .mul_basis(&mirror, w)
            .expect("root vectors have no square-zero part");
        debug_assert_eq!(prod, self.identity_index());
        let inv = s.inv().expect("structure constants are nonzero");
        Ok(AlgebraElement::term(mirror, inv))
    }

    /// Basis indices inside a verification window, in canonical order.
    pub fn enumerate_basis(&self, trunc: &Truncation) -> Vec<BasisIndex> {
        let exps = self.enumerate_exponents(trunc.max_t_degree);
        let mut out = Vec::new();
        for alpha in 0..self.gamma0().len() as u32 {
            for a in &trunc.a_window {
                assert_eq!(a.len(), self.m(), "window coordinate length");
                for i in &exps {
                    out.push(BasisIndex { alpha, a: a.clone(), i: i.clone() });
                }
            }
        }
        out.sort();
        out
    }

    /// Admissible exponent vectors with total degree at most `max_deg`.
    pub fn enumerate_exponents(&self, max_deg: u32) -> Vec<Vec<u32>> {
        let k = self.k();
        let mut out = Vec::new();
        let mut cur = vec![0u32; k];
        fn rec(
            s: &Session,
            p: usize,
            left: u32,
            cur: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
        ) {
            if p > s.k() {
                out.push(cur.clone());
                return;
            }
            let hi = match s.signature().slot_kind(p) {
                SlotKind::Fixed => 0,
                SlotKind::Poly => left,
                SlotKind::Grassmann => left.min(1),
            };
            for e in 0..=hi {
                cur[p - 1] = e;
                rec(s, p + 1, left - e, cur, out);
            }
            cur[p - 1] = 0;
        }
        rec(self, 1, max_deg, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Render a basis index in the element-literal syntax.
    pub fn format_index(&self, u: &BasisIndex) -> String {
        let mut parts: Vec<String> = Vec::new();
        if u.alpha != self.g0_zero() {
            let el = self.gamma0().element(u.alpha as usize);
            parts.push(format!("E{}", fmt_ints(el.0.iter().map(|&c| c as i64))));
        }
        if u.a.iter().any(|&x| x != 0) {
            parts.push(format!("x{}", fmt_ints(u.a.iter().copied())));
        }
        if u.i.iter().any(|&x| x != 0) {
            parts.push(format!("t{}", fmt_ints(u.i.iter().map(|&c| c as i64))));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Render an element in the literal syntax, canonically ordered.
    pub fn format_element(&self, e: &AlgebraElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (idx, c)) in e.iter().enumerate() {
            let mono = self.format_index(idx);
            let piece = format_scalar_prefix(c, &mono);
            if n == 0 {
                out.push_str(&piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                let _ = write!(out, " - {rest}");
            } else {
                let _ = write!(out, " + {piece}");
            }
        }
        out
    }

    /// Parse an element literal.
    pub fn parse_element(&self, input: &str) -> Result<AlgebraElement, AlgebraError> {
        let mut out = AlgebraElement::zero();
        for (negated, body) in split_terms(input).map_err(|reason| AlgebraError::Parse {
            input: input.to_string(),
            reason,
        })? {
            let (scalar, factors) =
                parse_term(&body, &['E', 'x', 't']).map_err(|reason| AlgebraError::Parse {
                    input: input.to_string(),
                    reason,
                })?;
            let mut coeff = if scalar.is_empty() {
                Cyclotomic::one()
            } else {
                Cyclotomic::parse(&scalar, self.order()).map_err(|e| AlgebraError::Parse {
                    input: input.to_string(),
                    reason: e.to_string(),
                })?
            };
            if negated {
                coeff = -coeff;
            }
            let idx = self.index_from_factors(&factors).map_err(|reason| AlgebraError::Parse {
                input: input.to_string(),
                reason,
            })?;
            out.add_term(idx, coeff);
        }
        Ok(out)
    }

    pub(crate) fn index_from_factors(
        &self,
        factors: &[(char, Vec<i64>)],
    ) -> Result<BasisIndex, String> {
        let mut idx = self.identity_index();
        let mut seen = BTreeSet::new();
        for (marker, ints) in factors {
            if !seen.insert(*marker) {
                return Err(format!("factor `{marker}` repeated"));
            }
            match marker {
                'E' => {
                    if ints.len() != self.grading().group().rank() {
                        return Err(format!(
                            "E takes {} coordinates",
                            self.grading().group().rank()
                        ));
                    }
                    let el = self.grading().group().reduce(ints);
                    idx.alpha = self
                        .gamma0()
                        .index_of(&el)
                        .ok_or_else(|| format!("{el} is not in the coefficient subgroup"))?
                        as u32;
                }
                'x' => {
                    if ints.len() != self.m() {
                        return Err(format!("x takes {} coordinates", self.m()));
                    }
                    idx.a = ints.clone();
                }
                't' => {
                    if ints.len() != self.k() {
                        return Err(format!("t takes {} exponents", self.k()));
                    }
                    for (p0, &e) in ints.iter().enumerate() {
                        if e < 0 {
                            return Err("negative variable exponent".into());
                        }
                        let e = e as u32;
                        match self.signature().slot_kind(p0 + 1) {
                            SlotKind::Fixed if e != 0 => {
                                return Err(format!("slot {} has no variable", p0 + 1));
                            }
                            SlotKind::Grassmann if e > 1 => {
                                return Err(format!("slot {} is square-zero", p0 + 1));
                            }
                            _ => {}
                        }
                        idx.i[p0] = e;
                    }
                }
                other => return Err(format!("unknown factor `{other}`")),
            }
        }
        Ok(idx)
    }
}

fn fmt_ints(it: impl Iterator<Item = i64>) -> String {
    let mut s = String::from("[");
    for (n, v) in it.enumerate() {
        if n > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v}");
    }
    s.push(']');
    s
}

/// Scalar prefix for a monomial: plain rationals stay bare, anything with a
/// root-of-unity part is parenthesized so literals stay unambiguous.
pub(crate) fn format_scalar_prefix(c: &Cyclotomic, mono: &str) -> String {
    if let Some(r) = c.as_rational() {
        if mono == "1" {
            return format!("{r}");
        }
        if r.is_one() {
            return mono.to_string();
        }
        if (-r.clone()).is_one() {
            return format!("-{mono}");
        }
        return format!("{r} {mono}");
    }
    if mono == "1" {
        format!("({c})")
    } else {
        format!("({c}) {mono}")
    }
}

/// Split a literal into signed terms at top-level plus and minus signs.
pub(crate) fn split_terms(input: &str) -> Result<Vec<(bool, String)>, String> {
    let s = input.trim();
    if s.is_empty() {
        return Err("empty literal".into());
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut any_content = false;
    for ch in s.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced brackets".into());
                }
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() {
                    if ch == '-' {
                        neg = !neg;
                    }
                } else {
                    out.push((neg, cur.trim().to_string()));
                    cur = String::new();
                    neg = ch == '-';
                }
            }
            _ => {
                cur.push(ch);
                if !ch.is_whitespace() {
                    any_content = true;
                }
            }
        }
    }
    if depth != 0 {
        return Err("unbalanced brackets".into());
    }
    if cur.trim().is_empty() || !any_content {
        return Err("dangling sign".into());
    }
    out.push((neg, cur.trim().to_string()));
    Ok(out)
}

/// Split one term into its scalar prefix and factor blocks like `x[1,-2]`.
pub(crate) fn parse_term(
    body: &str,
    markers: &[char],
) -> Result<(String, Vec<(char, Vec<i64>)>), String> {
    let bytes: Vec<char> = body.chars().collect();
    let mut factor_start = bytes.len();
    for (pos, w) in bytes.windows(2).enumerate() {
        if markers.contains(&w[0]) && w[1] == '[' {
            factor_start = pos;
            break;
        }
    }
    let mut scalar: String = bytes[..factor_start].iter().collect();
    scalar = scalar.trim().trim_end_matches('*').trim().to_string();
    if scalar.starts_with('(') {
        if !scalar.ends_with(')') {
            return Err("unclosed scalar parenthesis".into());
        }
        scalar = scalar[1..scalar.len() - 1].to_string();
    }
    let mut factors = Vec::new();
    let mut pos = factor_start;
    while pos < bytes.len() {
        let ch = bytes[pos];
        if ch.is_whitespace() {
            pos += 1;
            continue;
        }
        if !markers.contains(&ch) || pos + 1 >= bytes.len() || bytes[pos + 1] != '[' {
            return Err(format!("unexpected `{ch}` in factor list"));
        }
        let close = bytes[pos..]
            .iter()
            .position(|&c| c == ']')
            .ok_or("unclosed factor bracket")?
            + pos;
        let inner: String = bytes[pos + 2..close].iter().collect();
        let ints: Vec<i64> = if inner.trim().is_empty() {
            vec![]
        } else {
            inner
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad integer `{t}`")))
                .collect::<Result<_, _>>()?
        };
        factors.push((ch, ints));
        pos = close + 1;
    }
    Ok((scalar, factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use num::One;

    fn idx(s: &Session, lit: &str) -> BasisIndex {
        let e = s.parse_element(lit).unwrap();
        assert_eq!(e.len(), 1);
        let (i, c) = e.iter().next().unwrap();
        assert!(c.is_one());
        i.clone()
    }

    #[test]
    fn identity_is_neutral() {
        for s in [grassmann_session(2), mixed_session(), pauli_session()] {
            let one = s.identity_element();
            let window = s.enumerate_basis(&small_window(&s));
            for u in window {
                let eu = AlgebraElement::term(u.clone(), Cyclotomic::one());
                assert_eq!(s.mul(&one, &eu), eu);
                assert_eq!(s.mul(&eu, &one), eu);
            }
        }
    }

    #[test]
    fn square_zero_variables() {
        let s = grassmann_session(2);
        let t1 = s.parse_element("t[1,0]").unwrap();
        let t2 = s.parse_element("t[0,1]").unwrap();
        assert!(s.mul(&t1, &t1).is_zero());
        assert!(s.mul(&t2, &t2).is_zero());
    }

    #[test]
    fn grassmann_variables_anticommute() {
        // Reordering two odd variables picks up the commutation factor -1.
        let s = grassmann_session(2);
        let t1 = s.parse_element("t[1,0]").unwrap();
        let t2 = s.parse_element("t[0,1]").unwrap();
        let t12 = s.parse_element("t[1,1]").unwrap();
        assert_eq!(s.mul(&t1, &t2), t12);
        assert_eq!(s.mul(&t2, &t1), t12.scaled(&Cyclotomic::from_int(-1)));
    }

    #[test]
    fn color_of_examples() {
        let s = grassmann_session(2);
        assert_eq!(s.color_of(&s.identity_index()), s.grading().group().zero());
        let t1 = idx(&s, "t[1,0]");
        assert_eq!(s.color_of(&t1), s.grading().group().reduce(&[1]));
        let t12 = idx(&s, "t[1,1]");
        assert_eq!(s.color_of(&t12), s.grading().group().zero());
    }

    #[test]
    fn sign_factor_examples() {
        let s = grassmann_session(2);
        let odd = s.grading().group().reduce(&[1]);
        // Empty exponent vectors give empty products.
        let (a, b) = s.sign_factors(&[0, 0], &odd, &[0, 0]);
        assert!(a.is_one() && b.is_one());
        // Second variable moved past the first: factor eps(t2, t1) = -1.
        let (_, tilde) = s.sign_factors(&[0, 1], &odd, &[1, 0]);
        assert_eq!(tilde, Cyclotomic::from_int(-1));
        // Ordered the other way the reordering product is empty.
        let (_, tilde) = s.sign_factors(&[1, 0], &odd, &[0, 1]);
        assert!(tilde.is_one());
    }

    #[test]
    fn invert_root_vectors() {
        let s = group_algebra_session();
        let one = s.identity_element();
        // The identity inverts to itself.
        assert_eq!(s.invert_root_vector(&s.identity_index()).unwrap(), one);
        // A group basis vector inverts through the mirrored index.
        let w = idx(&s, "x[1]");
        let inv = s.invert_root_vector(&w).unwrap();
        let back = s.mul(&inv, &AlgebraElement::term(w.clone(), Cyclotomic::one()));
        assert_eq!(back, one);
        let back = s.mul(&AlgebraElement::term(w, Cyclotomic::one()), &inv);
        assert_eq!(back, one);
    }

    #[test]
    fn invert_twisted_coefficient_vectors() {
        let s = pauli_session();
        for alpha in 0..s.gamma0().len() as u32 {
            let w = BasisIndex { alpha, a: vec![0], i: vec![0] };
            let inv = s.invert_root_vector(&w).unwrap();
            let back = s.mul(&inv, &AlgebraElement::term(w, Cyclotomic::one()));
            assert_eq!(back, s.identity_element());
        }
    }

    #[test]
    fn nilpotent_indices_are_not_invertible() {
        let s = grassmann_session(2);
        let t1 = idx(&s, "t[1,0]");
        assert!(matches!(
            s.invert_root_vector(&t1),
            Err(AlgebraError::NotRootVector(_))
        ));
    }

    #[test]
    fn mul_is_color_commutative_on_window() {
        for s in [grassmann_session(2), mixed_session(), pauli_session()] {
            let window = s.enumerate_basis(&small_window(&s));
            for u in &window {
                for v in &window {
                    let uv = s
                        .mul_basis(u, v)
                        .map(|(c, i)| AlgebraElement::term(i, c))
                        .unwrap_or_default();
                    let vu = s
                        .mul_basis(v, u)
                        .map(|(c, i)| AlgebraElement::term(i, c))
                        .unwrap_or_default();
                    let eps = s.eps(&s.color_of(u), &s.color_of(v));
                    assert_eq!(uv, vu.scaled(&eps), "indices {u:?} {v:?}");
                }
            }
        }
    }

    #[test]
    fn mul_is_associative_on_window() {
        for s in [grassmann_session(2), pauli_session(), twisted_full_session()] {
            let window = s.enumerate_basis(&small_window(&s));
            for u in &window {
                let eu = AlgebraElement::term(u.clone(), Cyclotomic::one());
                for v in &window {
                    let ev = AlgebraElement::term(v.clone(), Cyclotomic::one());
                    let uv = s.mul(&eu, &ev);
                    for w in &window {
                        let ew = AlgebraElement::term(w.clone(), Cyclotomic::one());
                        let lhs = s.mul(&uv, &ew);
                        let rhs = s.mul(&eu, &s.mul(&ev, &ew));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn product_colors_add() {
        let s = mixed_session();
        let window = s.enumerate_basis(&small_window(&s));
        for u in window.iter().step_by(3) {
            for v in window.iter().step_by(5) {
                if let Some((_, w)) = s.mul_basis(u, v) {
                    let sum = s
                        .grading()
                        .group()
                        .add(&s.color_of(u), &s.color_of(v));
                    assert_eq!(s.color_of(&w), sum);
                }
            }
        }
    }

    #[test]
    fn literal_round_trip() {
        let s = mixed_session();
        let lits = [
            "1",
            "t[0,1,0,0]",
            "x[1,-2]",
            "-1/2 x[1,0] t[0,0,2,1]",
            "(z) x[0,1]",
            "3 x[1,1] - x[0,1] + (1/2 + z) t[0,1,0,0]",
        ];
        for lit in lits {
            let e = s.parse_element(lit).unwrap();
            let shown = s.format_element(&e);
            let back = s.parse_element(&shown).unwrap();
            assert_eq!(back, e, "round trip through `{shown}`");
        }
    }

    #[test]
    fn random_literals_round_trip() {
        use rand::SeedableRng;
        for s in [grassmann_session(2), mixed_session(), pauli_session()] {
            let window = small_window(&s);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
            for _ in 0..50 {
                let e = crate::derivations::random_homogeneous(&s, &window, &mut rng);
                let shown = s.format_element(&e);
                assert_eq!(s.parse_element(&shown).unwrap(), e, "via `{shown}`");
            }
        }
    }

    #[test]
    fn parse_rejects_bad_shapes() {
        let s = grassmann_session(2);
        assert!(s.parse_element("t[2,0]").is_err()); // square-zero bound
        assert!(s.parse_element("x[1]").is_err()); // no eigenvalue coords here
        assert!(s.parse_element("E[7]").is_err()); // not in the subgroup: wrong length
        assert!(s.parse_element("").is_err());
        assert!(s.parse_element("t[1,0] +").is_err());
        // Pauli session has a nontrivial coefficient subgroup.
        let p = pauli_session();
        assert!(p.parse_element("E[1,0]").is_ok());
        assert!(p.parse_element("E[1]").is_err());
    }
}
