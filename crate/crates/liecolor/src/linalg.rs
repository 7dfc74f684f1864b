//! Sparse exact linear algebra over an arbitrary field.
//!
//! Everything here is generic over the scalar through [`Field`], a bound
//! assembled from `num-traits`: the row-reduction kernel, null-space
//! computation and minimal polynomials work identically over the plain
//! rationals and over the session's cyclotomic field.

use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Neg, Sub};

/// Scalar bound for the linear-algebra kernels: a field with exact equality.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + Div<Output = Self>
{
}

/// Sorted sparse vector with no explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<K: Ord + Clone, F: Field> {
    entries: Vec<(K, F)>,
}

impl<K: Ord + Clone, F: Field> Default for SparseVec<K, F> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<K: Ord + Clone, F: Field> SparseVec<K, F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(key: K) -> Self {
        SparseVec { entries: vec![(key, F::one())] }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (K, F)>) -> Self {
        let mut map: BTreeMap<K, F> = BTreeMap::new();
        for (k, v) in entries {
            let slot = map.entry(k).or_insert_with(F::zero);
            *slot = slot.clone() + v;
        }
        SparseVec {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(K, F)> {
        self.entries.iter()
    }

    pub fn get(&self, key: &K) -> Option<&F> {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// Entry with the smallest key.
    pub fn leading(&self) -> Option<(&K, &F)> {
        self.entries.first().map(|(k, v)| (k, v))
    }

    pub fn scaled(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// `self - c * other`, by sorted merge.
    pub fn sub_scaled(&self, c: &F, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let take_left = match (self.entries.get(i), other.entries.get(j)) {
                (Some((ka, _)), Some((kb, _))) => match ka.cmp(kb) {
                    std::cmp::Ordering::Less => Some(true),
                    std::cmp::Ordering::Greater => Some(false),
                    std::cmp::Ordering::Equal => None,
                },
                (Some(_), None) => Some(true),
                (None, Some(_)) => Some(false),
                (None, None) => break,
            };
            match take_left {
                Some(true) => {
                    out.push(self.entries[i].clone());
                    i += 1;
                }
                Some(false) => {
                    let (k, v) = &other.entries[j];
                    let nv = F::zero() - v.clone() * c.clone();
                    if !nv.is_zero() {
                        out.push((k.clone(), nv));
                    }
                    j += 1;
                }
                None => {
                    let (k, va) = &self.entries[i];
                    let nv = va.clone() - other.entries[j].1.clone() * c.clone();
                    if !nv.is_zero() {
                        out.push((k.clone(), nv));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        let minus_one = F::zero() - F::one();
        self.sub_scaled(&minus_one, other)
    }

    pub fn map_key<K2: Ord + Clone>(&self, f: impl Fn(&K) -> K2) -> SparseVec<K2, F> {
        SparseVec::from_entries(self.entries.iter().map(|(k, v)| (f(k), v.clone())))
    }
}

/// Growing row space in echelon form, with pivots at the smallest key of
/// each row and leading coefficients normalized to one. With `reduced` set,
/// the basis is kept fully reduced so the stored rows are canonical for the
/// subspace.
#[derive(Clone, Debug)]
pub struct Span<K: Ord + Clone, F: Field> {
    rows: BTreeMap<K, SparseVec<K, F>>,
    reduced: bool,
}

impl<K: Ord + Clone, F: Field> Span<K, F> {
    pub fn new() -> Self {
        Span { rows: BTreeMap::new(), reduced: false }
    }

    pub fn new_reduced() -> Self {
        Span { rows: BTreeMap::new(), reduced: true }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K, F>> {
        self.rows.values()
    }

    /// Remainder of `v` after elimination against the current basis.
    pub fn reduce(&self, v: &SparseVec<K, F>) -> SparseVec<K, F> {
        let mut v = v.clone();
        if self.reduced {
            // One forward pass: eliminating a key only touches larger keys.
            let mut cursor: Option<K> = None;
            loop {
                let hit = v
                    .entries
                    .iter()
                    .find(|(k, _)| {
                        cursor.as_ref().is_none_or(|c| k > c) && self.rows.contains_key(k)
                    })
                    .map(|(k, v)| (k.clone(), v.clone()));
                match hit {
                    Some((k, c)) => {
                        v = v.sub_scaled(&c, &self.rows[&k]);
                        cursor = Some(k);
                    }
                    None => break,
                }
            }
        } else {
            while let Some((k, c)) = v.leading().map(|(k, c)| (k.clone(), c.clone())) {
                match self.rows.get(&k) {
                    Some(row) => v = v.sub_scaled(&c, row),
                    None => break,
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<K, F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert a vector; returns true if the dimension grew.
    pub fn insert(&mut self, v: &SparseVec<K, F>) -> bool {
        let rem = self.reduce(v);
        let Some((pivot, lead)) = rem.leading().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = F::one() / lead;
        let row = rem.scaled(&inv);
        if self.reduced {
            let updates: Vec<(K, F)> = self
                .rows
                .iter()
                .filter_map(|(p, r)| r.get(&pivot).map(|c| (p.clone(), c.clone())))
                .collect();
            for (p, c) in updates {
                let fixed = self.rows[&p].sub_scaled(&c, &row);
                self.rows.insert(p, fixed);
            }
        }
        self.rows.insert(pivot, row);
        true
    }
}

impl<K: Ord + Clone, F: Field> Default for Span<K, F> {
    fn default() -> Self {
        Self::new()
    }
}

/// Augmented key used to carry coordinates through an elimination: value
/// keys sort before all tag keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum AugKey<K: Ord + Clone> {
    Val(K),
    Tag(usize),
}

/// Basis of the null space of the linear map `x -> sum x_i columns[i]`.
/// Kernel vectors are dense in the unknowns, produced in a deterministic
/// order.
pub fn kernel<K: Ord + Clone, F: Field>(
    columns: &[SparseVec<K, F>],
) -> Vec<Vec<F>> {
    let n = columns.len();
    let mut span: Span<AugKey<K>, F> = Span::new();
    let mut out = Vec::new();
    for (i, col) in columns.iter().enumerate() {
        let mut aug = col.map_key(|k| AugKey::Val(k.clone()));
        aug.entries.push((AugKey::Tag(i), F::one()));
        let rem = span.reduce(&aug);
        let in_value_part = rem
            .leading()
            .is_some_and(|(k, _)| matches!(k, AugKey::Val(_)));
        if in_value_part {
            span.insert(&rem);
        } else {
            // Value part vanished: the tag part is a kernel combination.
            let mut v = vec![F::zero(); n];
            for (k, c) in rem.iter() {
                if let AugKey::Tag(j) = k {
                    v[*j] = c.clone();
                }
            }
            out.push(v);
        }
    }
    out
}

// Dense polynomial helpers over a generic field; coefficient vectors are
// little-endian and trimmed.

pub fn poly_trim<F: Field>(v: &mut Vec<F>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub fn poly_degree<F: Field>(v: &[F]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

pub fn poly_divmod<F: Field>(num: &[F], den: &[F]) -> (Vec<F>, Vec<F>) {
    let dd = poly_degree(den).expect("division by zero polynomial");
    let lead_inv = F::one() / den[dd].clone();
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let mut quot = vec![F::zero(); rem.len().saturating_sub(dd)];
    while let Some(dn) = poly_degree(&rem) {
        if dn < dd {
            break;
        }
        let c = rem[dn].clone() * lead_inv.clone();
        for (j, dc) in den.iter().enumerate().take(dd + 1) {
            if !dc.is_zero() {
                rem[dn - dd + j] = rem[dn - dd + j].clone() - c.clone() * dc.clone();
            }
        }
        quot[dn - dd] = c;
        poly_trim(&mut rem);
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// Monic greatest common divisor by the Euclidean algorithm.
pub fn poly_gcd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !r1.is_empty() {
        let (_, rem) = poly_divmod(&r0, &r1);
        r0 = r1;
        r1 = rem;
    }
    if let Some(d) = poly_degree(&r0) {
        let inv = F::one() / r0[d].clone();
        for c in &mut r0 {
            *c = c.clone() * inv.clone();
        }
    }
    r0
}

pub fn poly_derivative<F: Field>(p: &[F]) -> Vec<F> {
    let mut out = Vec::with_capacity(p.len().saturating_sub(1));
    let mut factor = F::zero();
    for c in p.iter().skip(1) {
        factor = factor.clone() + F::one();
        out.push(c.clone() * factor.clone());
    }
    poly_trim(&mut out);
    out
}

pub fn poly_is_squarefree<F: Field>(p: &[F]) -> bool {
    let d = poly_derivative(p);
    if d.is_empty() {
        return poly_degree(p).unwrap_or(0) == 0;
    }
    poly_degree(&poly_gcd(p, &d)).unwrap_or(0) == 0
}

/// Square sparse matrix stored by columns over `usize` indices.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Field> {
    pub dim: usize,
    pub cols: Vec<SparseVec<usize, F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn from_columns(cols: Vec<SparseVec<usize, F>>) -> Self {
        SparseMatrix { dim: cols.len(), cols }
    }

    pub fn apply(&self, v: &SparseVec<usize, F>) -> SparseVec<usize, F> {
        let mut entries = Vec::new();
        for (j, c) in v.iter() {
            for (i, m) in self.cols[*j].iter() {
                entries.push((*i, m.clone() * c.clone()));
            }
        }
        SparseVec::from_entries(entries)
    }

    pub fn matmul(&self, rhs: &SparseMatrix<F>) -> SparseMatrix<F> {
        let cols = rhs.cols.iter().map(|c| self.apply(c)).collect();
        SparseMatrix { dim: self.dim, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    /// Flatten to a single sparse vector keyed by `col * dim + row`.
    pub fn flatten(&self) -> SparseVec<usize, F> {
        let mut entries = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col.iter() {
                entries.push((j * self.dim + i, c.clone()));
            }
        }
        SparseVec::from_entries(entries)
    }

    pub fn identity(dim: usize) -> Self {
        SparseMatrix {
            dim,
            cols: (0..dim).map(SparseVec::unit).collect(),
        }
    }

    /// Monic minimal polynomial, little-endian coefficients. Found as the
    /// first linear dependence among the flattened powers of the matrix.
    pub fn minimal_polynomial(&self) -> Vec<F> {
        let mut span: Span<AugKey<usize>, F> = Span::new();
        let mut power = SparseMatrix::identity(self.dim);
        for j in 0..=self.dim {
            let mut aug = power.flatten().map_key(|k| AugKey::Val(*k));
            aug.entries.push((AugKey::Tag(j), F::one()));
            let rem = span.reduce(&aug);
            let in_value_part = rem
                .leading()
                .is_some_and(|(k, _)| matches!(k, AugKey::Val(_)));
            if !in_value_part {
                let mut coeffs = vec![F::zero(); j + 1];
                for (k, c) in rem.iter() {
                    if let AugKey::Tag(d) = k {
                        coeffs[*d] = c.clone();
                    }
                }
                let inv = F::one() / coeffs[j].clone();
                for c in &mut coeffs {
                    *c = c.clone() * inv.clone();
                }
                poly_trim(&mut coeffs);
                return coeffs;
            }
            span.insert(&rem);
            if j < self.dim {
                power = self.matmul(&power);
            }
        }
        unreachable!("a matrix of dimension n has minimal polynomial of degree <= n");
    }

    /// True when some power of the matrix vanishes.
    pub fn is_nilpotent(&self) -> bool {
        let m = self.minimal_polynomial();
        m.iter().take(m.len().saturating_sub(1)).all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;
    use num::rational::BigRational;
    use num::BigInt;

    fn v(entries: &[(usize, i64)]) -> SparseVec<usize, Rat> {
        SparseVec::from_entries(entries.iter().map(|(k, c)| (*k, Rat::from_int(*c))))
    }

    #[test]
    fn span_rank() {
        let mut s: Span<usize, Rat> = Span::new();
        assert!(s.insert(&v(&[(0, 1), (1, 2)])));
        assert!(s.insert(&v(&[(1, 1), (2, 1)])));
        // Dependent on the first two.
        assert!(!s.insert(&v(&[(0, 1), (1, 4), (2, 2)])));
        assert!(s.insert(&v(&[(2, 5), (3, 1)])));
        assert_eq!(s.dim(), 3);
        assert!(s.contains(&v(&[(0, 2), (1, 4)])));
        assert!(!s.contains(&v(&[(3, 1)])));
    }

    #[test]
    fn reduced_span_rows_are_canonical() {
        // The same subspace inserted in two different orders must produce
        // identical reduced rows.
        let vectors = [v(&[(0, 1), (1, 1)]), v(&[(1, 2), (2, 1)]), v(&[(0, 3), (2, 7)])];
        let mut a: Span<usize, Rat> = Span::new_reduced();
        let mut b: Span<usize, Rat> = Span::new_reduced();
        for x in &vectors {
            a.insert(x);
        }
        for x in vectors.iter().rev() {
            b.insert(x);
        }
        let rows_a: Vec<_> = a.rows().cloned().collect();
        let rows_b: Vec<_> = b.rows().cloned().collect();
        assert_eq!(rows_a, rows_b);
    }

    #[test]
    fn kernel_of_rank_deficient_map() {
        // Columns c0 = (1,0), c1 = (0,1), c2 = c0 + c1.
        let cols = vec![v(&[(0, 1)]), v(&[(1, 1)]), v(&[(0, 1), (1, 1)])];
        let ker = kernel(&cols);
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        // Check it really is a kernel vector.
        let mut img: SparseVec<usize, Rat> = SparseVec::new();
        for (i, c) in k.iter().enumerate() {
            img = img.add(&cols[i].scaled(c));
        }
        assert!(img.is_zero());
        assert!(k.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn kernel_of_injective_map_is_trivial() {
        let cols = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1)])];
        assert!(kernel(&cols).is_empty());
    }

    #[test]
    fn minimal_polynomial_of_jordan_block() {
        // Nilpotent 3x3 Jordan block: minimal polynomial x^3.
        let cols = vec![v(&[]), v(&[(0, 1)]), v(&[(1, 1)])];
        let m = SparseMatrix::from_columns(cols);
        let p = m.minimal_polynomial();
        assert_eq!(
            p,
            vec![Rat::zero(), Rat::zero(), Rat::zero(), Rat::one()]
        );
        assert!(m.is_nilpotent());
        assert!(!poly_is_squarefree(&p));
    }

    #[test]
    fn minimal_polynomial_of_diagonal_matrix() {
        // diag(2, 2, 5): minimal polynomial (x-2)(x-5), squarefree.
        let cols = vec![v(&[(0, 2)]), v(&[(1, 2)]), v(&[(2, 5)])];
        let m = SparseMatrix::from_columns(cols);
        let p = m.minimal_polynomial();
        assert_eq!(p, vec![Rat::from_int(10), Rat::from_int(-7), Rat::one()]);
        assert!(poly_is_squarefree(&p));
        assert!(!m.is_nilpotent());
    }

    #[test]
    fn generic_over_bigrational() {
        let big = |n: i64| BigRational::from(BigInt::from(n));
        let mut s: Span<usize, BigRational> = Span::new();
        s.insert(&SparseVec::from_entries([(0usize, big(2)), (1, big(4))]));
        s.insert(&SparseVec::from_entries([(1usize, big(3))]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&SparseVec::from_entries([(0usize, big(1))])));
    }

    #[test]
    fn polynomial_gcd_and_squarefree() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let p = vec![Rat::from_int(2), Rat::from_int(-3), Rat::zero(), Rat::one()];
        assert!(!poly_is_squarefree(&p));
        // x^2 - 1 is squarefree.
        let q = vec![Rat::from_int(-1), Rat::zero(), Rat::one()];
        assert!(poly_is_squarefree(&q));
        let g = poly_gcd(&p, &q);
        // Common factor x - 1.
        assert_eq!(g, vec![Rat::from_int(-1), Rat::one()]);
    }
}
