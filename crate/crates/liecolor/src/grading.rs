//! The grading group, its skew-symmetric bicharacter, and the sign split.
//!
//! The grading group is a finite abelian group given by invariant factors;
//! elements are coordinate vectors reduced componentwise. The bicharacter is
//! stored as an integer exponent matrix on the generators: the commutation
//! factor of two elements is the session root of unity raised to a bilinear
//! form, so it is bimultiplicative by construction and only the generator
//! congruences need validation.

use crate::report::ValidationReport;
use crate::scalar::Cyclotomic;
use std::fmt;

/// Hard cap on exhaustive enumeration of group elements.
const MAX_ENUMERATED_ELEMENTS: u64 = 1 << 20;

/// Element of the grading group: coordinates reduced mod the invariant
/// factors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<u32>);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Finite abelian grading group `Z_{d_1} x ... x Z_{d_r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingGroup {
    invariant_factors: Vec<u32>,
}

impl GradingGroup {
    pub fn new(invariant_factors: Vec<u32>) -> Self {
        GradingGroup { invariant_factors }
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn invariant_factors(&self) -> &[u32] {
        &self.invariant_factors
    }

    /// Least common multiple of the invariant factors; 1 for the trivial
    /// group.
    pub fn exponent(&self) -> u32 {
        self.invariant_factors.iter().fold(1u32, |acc, &d| {
            let g = gcd(acc, d);
            acc / g * d
        })
    }

    /// Session root-of-unity order: twice the exponent, so the coherent
    /// square roots used by the canonical cocycle exist in the field.
    pub fn session_order(&self) -> u32 {
        2 * self.exponent()
    }

    pub fn size(&self) -> u64 {
        self.invariant_factors.iter().map(|&d| d as u64).product()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Reduce arbitrary integer coordinates into the group.
    pub fn reduce(&self, coords: &[i64]) -> GroupElement {
        assert_eq!(coords.len(), self.rank(), "bad coordinate length");
        GroupElement(
            coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u32)
                .collect(),
        )
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.invariant_factors)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.invariant_factors)
                .map(|(&x, &d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn scale(&self, n: i64, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.invariant_factors)
                .map(|(&x, &d)| ((x as i64 * n).rem_euclid(d as i64)) as u32)
                .collect(),
        )
    }

    /// All group elements in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<GroupElement> {
        assert!(
            self.size() <= MAX_ENUMERATED_ELEMENTS,
            "grading group too large to enumerate"
        );
        let mut out = vec![self.zero()];
        for (i, &d) in self.invariant_factors.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for c in 0..d {
                for e in &out {
                    let mut v = e.0.clone();
                    v[i] = c;
                    next.push(GroupElement(v));
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Sign class of a color: whether the commutation factor with itself is
/// plus or minus one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignClass {
    Plus,
    Minus,
}

/// A validated grading group together with its skew-symmetric bicharacter.
#[derive(Clone, Debug)]
pub struct Grading {
    group: GradingGroup,
    /// Exponent matrix on generators, entries already scaled mod the
    /// session order.
    matrix: Vec<Vec<i64>>,
    order: u32,
}

impl Grading {
    /// Build and validate. `denominator` declares the root-of-unity order of
    /// the raw matrix entries; entries are scaled into the session order.
    pub fn new(
        group: GradingGroup,
        raw_matrix: Vec<Vec<i64>>,
        denominator: u32,
    ) -> Result<Self, ValidationReport> {
        let order = group.session_order();
        let mut report = ValidationReport::new();
        let r = group.rank();
        if raw_matrix.len() != r || raw_matrix.iter().any(|row| row.len() != r) {
            report.push(
                "bicharacter.shape",
                format!("exponent matrix must be {r}x{r} for a rank-{r} group"),
            );
            return Err(report);
        }
        if denominator == 0 || order % denominator != 0 {
            report.push(
                "bicharacter.denominator",
                format!(
                    "denominator {denominator} must divide the session order {order}"
                ),
            );
            return Err(report);
        }
        let scale = (order / denominator) as i64;
        let matrix: Vec<Vec<i64>> = raw_matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&b| (b * scale).rem_euclid(order as i64))
                    .collect()
            })
            .collect();
        let g = Grading { group, matrix, order };
        let vr = g.validate();
        if vr.is_valid() {
            Ok(g)
        } else {
            Err(vr)
        }
    }

    /// Check every generator congruence and the per-element sign classes.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let r = self.group.rank();
        let l = self.order as i64;
        let d = self.group.invariant_factors();
        for i in 0..r {
            for j in 0..r {
                if (self.matrix[i][j] + self.matrix[j][i]).rem_euclid(l) != 0 {
                    report.push(
                        "bicharacter.skew",
                        format!(
                            "entries ({i},{j}) and ({j},{i}) sum to {} mod {l}, want 0",
                            (self.matrix[i][j] + self.matrix[j][i]).rem_euclid(l)
                        ),
                    );
                }
                for (label, dd) in [("row", d[i] as i64), ("col", d[j] as i64)] {
                    if (dd * self.matrix[i][j]).rem_euclid(l) != 0 {
                        report.push(
                            "bicharacter.order",
                            format!(
                                "{label} order {dd} times entry ({i},{j})={} is {} mod {l}, want 0",
                                self.matrix[i][j],
                                (dd * self.matrix[i][j]).rem_euclid(l)
                            ),
                        );
                    }
                }
            }
        }
        if report.is_valid() {
            for lam in self.group.elements() {
                let e = self.eps_exponent(&lam, &lam);
                if e != 0 && e != (self.order / 2) as i64 {
                    report.push(
                        "bicharacter.sign-class",
                        format!("self-pairing of {lam} is exponent {e}, not 0 or {}", self.order / 2),
                    );
                }
            }
        }
        report
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Exponent of the commutation factor: the bilinear form of the two
    /// coordinate vectors, mod the session order.
    pub fn eps_exponent(&self, a: &GroupElement, b: &GroupElement) -> i64 {
        let l = self.order as i64;
        let mut acc = 0i64;
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.0.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                acc = (acc + (ai as i64 % l) * (self.matrix[i][j] % l) % l * (bj as i64 % l)) % l;
            }
        }
        acc.rem_euclid(l)
    }

    /// The commutation factor itself as a scalar.
    pub fn eps(&self, a: &GroupElement, b: &GroupElement) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.order, self.eps_exponent(a, b))
    }

    pub fn sign_class(&self, a: &GroupElement) -> SignClass {
        let e = self.eps_exponent(a, a);
        if e == 0 {
            SignClass::Plus
        } else {
            debug_assert_eq!(e, (self.order / 2) as i64, "validated gradings only");
            SignClass::Minus
        }
    }

    pub fn is_plus(&self, a: &GroupElement) -> bool {
        self.sign_class(a) == SignClass::Plus
    }

    /// Whether any color squares to minus one.
    pub fn has_minus_part(&self) -> bool {
        self.group
            .elements()
            .iter()
            .any(|g| self.sign_class(g) == SignClass::Minus)
    }
}

/// Standard supergrading: one factor of order two with the parity sign rule.
pub fn superalgebra_grading() -> Grading {
    Grading::new(GradingGroup::new(vec![2]), vec![vec![1]], 2).unwrap()
}

/// Trivial grading: everything in degree zero, all signs plus.
pub fn trivial_grading() -> Grading {
    Grading::new(GradingGroup::new(vec![]), vec![], 1).unwrap()
}
