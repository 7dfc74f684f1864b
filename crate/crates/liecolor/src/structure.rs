//! Structure data of a session: the block signature, the eigenvalue group
//! with its hat map into the plus part, the twisted coefficient algebra on a
//! subgroup of plus colors, and the multiplicative cocycle that twists the
//! group part.

use crate::grading::{Grading, GroupElement, SignClass};
use crate::linalg::{Span, SparseVec};
use crate::rat::Rat;
use crate::report::ValidationReport;
use crate::scalar::Cyclotomic;
use num::{One, Zero};
use std::collections::HashMap;

/// Kind of a variable slot, determined by its block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    /// First block: no variable, exponent pinned to zero.
    Fixed,
    /// Second and third blocks: polynomial variable, any natural exponent.
    Poly,
    /// Fourth block: square-zero variable, exponent zero or one.
    Grassmann,
}

/// Block sizes `(k1, k2, k3, k4)` and the colors of the variables.
#[derive(Clone, Debug)]
pub struct KSignature {
    k: [usize; 4],
    /// Colors of `t_{k1+1}..t_k`, in slot order.
    t_colors: Vec<GroupElement>,
}

impl KSignature {
    pub fn new(k: [usize; 4], t_colors: Vec<GroupElement>) -> Self {
        KSignature { k, t_colors }
    }

    pub fn blocks(&self) -> [usize; 4] {
        self.k
    }

    pub fn total(&self) -> usize {
        self.k.iter().sum()
    }

    pub fn k1(&self) -> usize {
        self.k[0]
    }

    pub fn k12(&self) -> usize {
        self.k[0] + self.k[1]
    }

    pub fn k123(&self) -> usize {
        self.k[0] + self.k[1] + self.k[2]
    }

    /// Color of the variable in 1-based slot `p`; slots in the first block
    /// carry color zero.
    pub fn t_color<'a>(&'a self, p: usize, grading: &'a Grading) -> GroupElement {
        assert!(p >= 1 && p <= self.total());
        if p <= self.k1() {
            grading.group().zero()
        } else {
            self.t_colors[p - 1 - self.k1()].clone()
        }
    }

    pub fn slot_kind(&self, p: usize) -> SlotKind {
        assert!(p >= 1 && p <= self.total());
        if p <= self.k1() {
            SlotKind::Fixed
        } else if p <= self.k123() {
            SlotKind::Poly
        } else {
            SlotKind::Grassmann
        }
    }

    pub fn validate(&self, grading: &Grading) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.total() == 0 {
            report.push("signature.size", "k1+k2+k3+k4 must be positive");
        }
        let expected = self.total() - self.k1().min(self.total());
        if self.t_colors.len() != expected {
            report.push(
                "signature.colors",
                format!(
                    "need {expected} variable colors for blocks {:?}, got {}",
                    self.k,
                    self.t_colors.len()
                ),
            );
            return report;
        }
        let rank = grading.group().rank();
        for (idx, c) in self.t_colors.iter().enumerate() {
            let p = self.k1() + idx + 1;
            if c.0.len() != rank {
                report.push(
                    "signature.colors",
                    format!("color of slot {p} has {} coordinates, want {rank}", c.0.len()),
                );
                continue;
            }
            let class = grading.sign_class(c);
            if p <= self.k12() && *c != grading.group().zero() {
                report.push(
                    "signature.block2-zero",
                    format!("slot {p} sits in the second block and must have color zero, got {c}"),
                );
            } else if p > self.k12() && p <= self.k123() && class != SignClass::Plus {
                report.push(
                    "signature.block3-plus",
                    format!("slot {p} sits in the third block and must have a plus color, got {c}"),
                );
            } else if p > self.k123() && class != SignClass::Minus {
                report.push(
                    "signature.block4-minus",
                    format!("slot {p} sits in the fourth block and must have a minus color, got {c}"),
                );
            }
        }
        if self.k[3] > 0 && !grading.has_minus_part() {
            report.push(
                "signature.no-minus-colors",
                "fourth block is nonempty but the grading has no minus colors",
            );
        }
        report
    }
}

/// The free eigenvalue group: `m` generators embedded in rational space of
/// dimension `k1 + k2`, each carrying a plus color under the hat map.
#[derive(Clone, Debug)]
pub struct GroupG {
    /// Generator images, each of length `k1 + k2`.
    generators: Vec<Vec<Rat>>,
    /// Hat images of the generators.
    hat_images: Vec<GroupElement>,
}

impl GroupG {
    pub fn new(generators: Vec<Vec<Rat>>, hat_images: Vec<GroupElement>) -> Self {
        GroupG { generators, hat_images }
    }

    pub fn trivial() -> Self {
        GroupG { generators: vec![], hat_images: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn hat_images(&self) -> &[GroupElement] {
        &self.hat_images
    }

    /// Coordinate `p` (0-based within the first two blocks) of the embedded
    /// vector of `coords`.
    pub fn eigenvalue(&self, coords: &[i64], p: usize) -> Rat {
        let mut acc = Rat::zero();
        for (l, &c) in coords.iter().enumerate() {
            if c != 0 {
                acc += &self.generators[l][p] * &Rat::from_int(c);
            }
        }
        acc
    }

    pub fn embedded(&self, coords: &[i64], dim: usize) -> Vec<Rat> {
        (0..dim).map(|p| self.eigenvalue(coords, p)).collect()
    }

    /// Hat map, extended as a homomorphism from the generators.
    pub fn hat(&self, coords: &[i64], grading: &Grading) -> GroupElement {
        let mut acc = grading.group().zero();
        for (l, &c) in coords.iter().enumerate() {
            if c != 0 {
                acc = grading
                    .group()
                    .add(&acc, &grading.group().scale(c, &self.hat_images[l]));
            }
        }
        acc
    }

    pub fn validate(&self, grading: &Grading, sig: &KSignature) -> ValidationReport {
        let mut report = ValidationReport::new();
        let dim = sig.k12();
        if dim == 0 && self.rank() != 0 {
            report.push(
                "G.trivial",
                "first two blocks are empty, so the eigenvalue group must be trivial",
            );
            return report;
        }
        if self.hat_images.len() != self.rank() {
            report.push(
                "hat.shape",
                format!("{} hat images for {} generators", self.hat_images.len(), self.rank()),
            );
            return report;
        }
        for (l, g) in self.generators.iter().enumerate() {
            if g.len() != dim {
                report.push(
                    "G.shape",
                    format!("generator {l} has {} coordinates, want {dim}", g.len()),
                );
                return report;
            }
        }
        let rank_grp = grading.group().rank();
        for (l, h) in self.hat_images.iter().enumerate() {
            if h.0.len() != rank_grp {
                report.push(
                    "hat.shape",
                    format!("hat image {l} has {} coordinates, want {rank_grp}", h.0.len()),
                );
            } else if grading.sign_class(h) != SignClass::Plus {
                report.push(
                    "hat.plus",
                    format!("hat image {h} of generator {l} is not a plus color"),
                );
            }
        }
        // One elimination gives both ranks: independence of the generators
        // and nondegeneracy (spanning the ambient rational space).
        let mut span: Span<usize, Rat> = Span::new();
        for g in &self.generators {
            let v = SparseVec::from_entries(g.iter().cloned().enumerate());
            span.insert(&v);
        }
        if span.dim() < self.rank() {
            report.push(
                "G.independence",
                format!(
                    "generator images span only {} dimensions; {} generators are not free",
                    span.dim(),
                    self.rank()
                ),
            );
        }
        if span.dim() < dim {
            report.push(
                "G.nondegenerate",
                format!(
                    "generator images span {} of {dim} dimensions; the group must contain a basis",
                    span.dim()
                ),
            );
        }
        report
    }
}

/// The subgroup of plus colors carrying the twisted coefficient algebra,
/// with its multiplication table.
#[derive(Clone, Debug)]
pub struct GammaZeroData {
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    e: Vec<Vec<Cyclotomic>>,
}

impl GammaZeroData {
    pub fn new(elements: Vec<GroupElement>, e_rows: Vec<Vec<Cyclotomic>>) -> Self {
        // Keep the element order as given so the e-table rows line up; the
        // index map provides lookups.
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        GammaZeroData { elements, index, e: e_rows }
    }

    pub fn trivial(grading: &Grading) -> Self {
        GammaZeroData::new(vec![grading.group().zero()], vec![vec![Cyclotomic::one()]])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn zero_index(&self) -> usize {
        self.index[&GroupElement(vec![0; self.elements[0].0.len()])]
    }

    pub fn e_val(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.e[i][j]
    }

    /// Corrupt one entry; used to exercise the validator.
    pub fn with_entry(mut self, i: usize, j: usize, v: Cyclotomic) -> Self {
        self.e[i][j] = v;
        self
    }

    pub fn validate(&self, grading: &Grading) -> ValidationReport {
        let mut report = ValidationReport::new();
        let n = self.elements.len();
        if n == 0 {
            report.push("e-table.elements", "the coefficient subgroup must contain zero");
            return report;
        }
        let zero = grading.group().zero();
        if !self.index.contains_key(&zero) {
            report.push("e-table.elements", "the coefficient subgroup must contain zero");
        }
        if self.index.len() != n {
            report.push("e-table.elements", "duplicate subgroup elements");
        }
        for g in &self.elements {
            if g.0.len() != grading.group().rank() {
                report.push(
                    "e-table.elements",
                    format!("element {g} has the wrong coordinate length"),
                );
                return report;
            }
            if grading.sign_class(g) != SignClass::Plus {
                report.push("e-table.plus", format!("element {g} is not a plus color"));
            }
            if self.index_of(&grading.group().neg(g)).is_none() {
                report.push("e-table.subgroup", format!("negation of {g} missing"));
            }
        }
        for a in &self.elements {
            for b in &self.elements {
                if self.index_of(&grading.group().add(a, b)).is_none() {
                    report.push("e-table.subgroup", format!("sum of {a} and {b} missing"));
                }
            }
        }
        if self.e.len() != n || self.e.iter().any(|row| row.len() != n) {
            report.push("e-table.shape", format!("expected a {n}x{n} table"));
            return report;
        }
        if !report.is_valid() {
            return report;
        }
        for (i, row) in self.e.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_zero() {
                    report.push(
                        "e-table.nonzero",
                        format!(
                            "entry at ({}, {}) is zero",
                            self.elements[i], self.elements[j]
                        ),
                    );
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        let zi = self.zero_index();
        for (i, a) in self.elements.iter().enumerate() {
            if !self.e[i][zi].is_one() {
                report.push(
                    "e-table.identity",
                    format!("entry at ({a}, {zero}) is {}, want 1", self.e[i][zi]),
                );
            }
        }
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let lhs = self.e[i][j].clone();
                let rhs = &grading.eps(a, b) * &self.e[j][i];
                if lhs != rhs {
                    report.push(
                        "e-table.skew",
                        format!(
                            "pair ({a}, {b}): table gives {lhs}, commutation demands {rhs}"
                        ),
                    );
                }
            }
        }
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let ij = self.index_of(&grading.group().add(a, b)).unwrap();
                for (k, c) in self.elements.iter().enumerate() {
                    let jk = self.index_of(&grading.group().add(b, c)).unwrap();
                    let lhs = &self.e[i][j] * &self.e[ij][k];
                    let rhs = &self.e[i][jk] * &self.e[j][k];
                    if lhs != rhs {
                        report.push(
                            "e-table.cocycle",
                            format!(
                                "triple ({a}, {b}, {c}): products {lhs} and {rhs} differ"
                            ),
                        );
                    }
                }
            }
        }
        report
    }
}

/// Exponent of the canonical ordered cocycle on coordinate vectors: the
/// bimultiplicative square-root choice over a fixed generator ordering.
pub fn canonical_f_exponent(grading: &Grading, group: &GroupG, a: &[i64], b: &[i64]) -> i64 {
    let l = grading.order() as i64;
    let hats = group.hat_images();
    let mut acc = 0i64;
    for l1 in 0..hats.len() {
        if a[l1] == 0 {
            continue;
        }
        for l2 in (l1 + 1)..hats.len() {
            if b[l2] == 0 {
                continue;
            }
            let base = grading.eps_exponent(&hats[l1], &hats[l2]);
            let term = (base as i128 * a[l1] as i128 % l as i128 * b[l2] as i128) % l as i128;
            acc = ((acc as i128 + term) % l as i128) as i64;
        }
    }
    acc.rem_euclid(l)
}

/// The canonical cocycle value itself.
pub fn canonical_f(grading: &Grading, group: &GroupG, a: &[i64], b: &[i64]) -> Cyclotomic {
    Cyclotomic::root_of_unity(grading.order(), canonical_f_exponent(grading, group, a, b))
}

/// Hat-defect of a pair; identically zero when the hat map is a
/// homomorphism, which is how generative sessions are built. The general
/// formulas are written against it.
pub fn theta(grading: &Grading, group: &GroupG, a: &[i64], b: &[i64]) -> GroupElement {
    let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let ha = group.hat(a, grading);
    let hb = group.hat(b, grading);
    let hab = group.hat(&sum, grading);
    grading
        .group()
        .add(&grading.group().add(&ha, &hb), &grading.group().neg(&hab))
}

/// Source of cocycle data for [`validate_f_cocycle`]: either the canonical
/// construction (total functions) or finite user-supplied tables.
pub enum FCocycleData<'a> {
    Canonical { group: &'a GroupG },
    Table {
        hat: HashMap<Vec<i64>, GroupElement>,
        f: HashMap<(Vec<i64>, Vec<i64>), Cyclotomic>,
    },
}

impl FCocycleData<'_> {
    fn hat(&self, grading: &Grading, x: &[i64]) -> Option<GroupElement> {
        match self {
            FCocycleData::Canonical { group } => Some(group.hat(x, grading)),
            FCocycleData::Table { hat, .. } => hat.get(x).cloned(),
        }
    }

    fn f(&self, grading: &Grading, x: &[i64], y: &[i64]) -> Option<Cyclotomic> {
        match self {
            FCocycleData::Canonical { group } => Some(canonical_f(grading, group, x, y)),
            FCocycleData::Table { f, .. } => f.get(&(x.to_vec(), y.to_vec())).cloned(),
        }
    }
}

/// Outcome of a cocycle validation sweep.
#[derive(Debug)]
pub struct FCocycleReport {
    pub report: ValidationReport,
    pub pairs_checked: u64,
    pub triples_checked: u64,
    pub skipped: u64,
}

impl FCocycleReport {
    pub fn is_valid(&self) -> bool {
        self.report.is_valid()
    }
}

/// Check the two cocycle laws of the group part on a finite sample: the
/// skew relation through the hat colors on all pairs, and the full
/// three-term identity, including the coefficient-table and hat-defect
/// factors, on all triples whose lookups are available.
pub fn validate_f_cocycle(
    grading: &Grading,
    gamma0: &GammaZeroData,
    data: &FCocycleData,
    sample: &[Vec<i64>],
) -> FCocycleReport {
    let mut report = ValidationReport::new();
    let mut pairs = 0u64;
    let mut triples = 0u64;
    let mut skipped = 0u64;
    let dim = sample.first().map(|v| v.len()).unwrap_or(0);
    let zero = vec![0i64; dim];
    let fmt_pt = |x: &[i64]| format!("{x:?}");

    let theta_of = |x: &[i64], y: &[i64]| -> Option<GroupElement> {
        let sum: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        let hx = data.hat(grading, x)?;
        let hy = data.hat(grading, y)?;
        let hxy = data.hat(grading, &sum)?;
        Some(
            grading
                .group()
                .add(&grading.group().add(&hx, &hy), &grading.group().neg(&hxy)),
        )
    };

    if let FCocycleData::Table { hat, .. } = data {
        for (x, h) in hat {
            if grading.sign_class(h) != SignClass::Plus {
                report.push(
                    "hat.plus",
                    format!("hat image {h} of {} is not a plus color", fmt_pt(x)),
                );
            }
        }
    }

    for a in sample {
        match data.f(grading, a, &zero) {
            Some(v) if v.is_one() => {}
            Some(v) => report.push(
                "f.identity",
                format!("f({}, 0) = {v}, want 1", fmt_pt(a)),
            ),
            None => skipped += 1,
        }
    }

    for a in sample {
        for b in sample {
            let (fab, fba) = match (data.f(grading, a, b), data.f(grading, b, a)) {
                (Some(x), Some(y)) => (x, y),
                _ => {
                    skipped += 1;
                    continue;
                }
            };
            let (ha, hb) = match (data.hat(grading, a), data.hat(grading, b)) {
                (Some(x), Some(y)) => (x, y),
                _ => {
                    skipped += 1;
                    continue;
                }
            };
            pairs += 1;
            let rhs = &grading.eps(&ha, &hb) * &fba;
            if fab != rhs {
                report.push(
                    "f.skew",
                    format!(
                        "pair ({}, {}): f(a,b) = {fab} but eps(hat a, hat b) f(b,a) = {rhs}",
                        fmt_pt(a),
                        fmt_pt(b)
                    ),
                );
            }
        }
    }

    let e_of = |g1: &GroupElement, g2: &GroupElement| -> Option<Cyclotomic> {
        let i = gamma0.index_of(g1)?;
        let j = gamma0.index_of(g2)?;
        Some(gamma0.e_val(i, j).clone())
    };

    // Canonical data takes an integer path: the hat map is a homomorphism,
    // so the defect factors are trivial, and both sides of the three-term
    // identity are powers of the primitive session root; comparing
    // exponents mod the order is exact.
    if let FCocycleData::Canonical { group } = data {
        let zero_e_ok = gamma0
            .index_of(&grading.group().zero())
            .map(|z| gamma0.e_val(z, z).is_one())
            .unwrap_or(false);
        if zero_e_ok {
            let l = grading.order() as i64;
            let fexp = |x: &[i64], y: &[i64]| canonical_f_exponent(grading, group, x, y);
            for a in sample {
                for b in sample {
                    for c in sample {
                        let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
                        triples += 1;
                        let lhs = (fexp(a, b) + fexp(&ab, c)).rem_euclid(l);
                        let rhs = (fexp(b, c) + fexp(a, &bc)).rem_euclid(l);
                        if lhs != rhs {
                            report.push(
                                "f.cocycle",
                                format!(
                                    "triple ({}, {}, {}): root exponents {lhs} and {rhs} differ",
                                    fmt_pt(a),
                                    fmt_pt(b),
                                    fmt_pt(c)
                                ),
                            );
                        }
                    }
                }
            }
            return FCocycleReport { report, pairs_checked: pairs, triples_checked: triples, skipped };
        }
    }

    'triples: for a in sample {
        for b in sample {
            for c in sample {
                let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
                let pieces = (
                    data.f(grading, a, b),
                    data.f(grading, &ab, c),
                    data.f(grading, b, c),
                    data.f(grading, a, &bc),
                    theta_of(a, b),
                    theta_of(&ab, c),
                    theta_of(b, c),
                    theta_of(a, &bc),
                    data.hat(grading, a),
                );
                let (
                    Some(fab),
                    Some(fabc),
                    Some(fbc),
                    Some(fa_bc),
                    Some(t_ab),
                    Some(t_ab_c),
                    Some(t_bc),
                    Some(t_a_bc),
                    Some(ha),
                ) = pieces
                else {
                    skipped += 1;
                    continue;
                };
                let e_lhs = match e_of(&t_ab, &t_ab_c) {
                    Some(v) => v,
                    None => {
                        report.push(
                            "theta.range",
                            format!(
                                "hat defect of ({}, {}) or ({:?}, {}) leaves the coefficient subgroup",
                                fmt_pt(a),
                                fmt_pt(b),
                                ab,
                                fmt_pt(c)
                            ),
                        );
                        continue 'triples;
                    }
                };
                let e_rhs = match e_of(&t_bc, &t_a_bc) {
                    Some(v) => v,
                    None => {
                        report.push(
                            "theta.range",
                            format!(
                                "hat defect of ({}, {}) leaves the coefficient subgroup",
                                fmt_pt(b),
                                fmt_pt(c)
                            ),
                        );
                        continue 'triples;
                    }
                };
                triples += 1;
                let lhs = &(&e_lhs * &fab) * &fabc;
                let rhs = &(&grading.eps(&ha, &t_bc) * &e_rhs) * &(&fbc * &fa_bc);
                if lhs != rhs {
                    report.push(
                        "f.cocycle",
                        format!(
                            "triple ({}, {}, {}): sides {lhs} and {rhs} differ",
                            fmt_pt(a),
                            fmt_pt(b),
                            fmt_pt(c)
                        ),
                    );
                }
            }
        }
    }

    FCocycleReport { report, pairs_checked: pairs, triples_checked: triples, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{superalgebra_grading, GradingGroup};

    fn super_two_gen() -> (Grading, GroupG) {
        // Two free generators with odd hat images over the supergrading.
        let g = superalgebra_grading();
        let gg = GroupG::new(
            vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::one()]],
            vec![GroupElement(vec![1]), GroupElement(vec![1])],
        );
        (g, gg)
    }

    #[test]
    fn hat_images_must_be_plus() {
        let (grading, group) = super_two_gen();
        let sig = KSignature::new([2, 0, 0, 0], vec![]);
        let report = group.validate(&grading, &sig);
        // Odd hat images square to minus one, so validation must object.
        assert!(report.violations.iter().any(|v| v.check == "hat.plus"));
    }

    #[test]
    fn canonical_f_on_two_su_generators() {
        // With odd hat images the ordered product gives f(g1,g2) = -1 and
        // f(g2,g1) = 1; the skew law f(a,b) = eps(hat a, hat b) f(b,a) holds.
        let (grading, group) = super_two_gen();
        let a = [1i64, 0];
        let b = [0i64, 1];
        assert_eq!(canonical_f(&grading, &group, &a, &b), Cyclotomic::from_int(-1));
        assert_eq!(canonical_f(&grading, &group, &b, &a), Cyclotomic::one());
        let eps = grading.eps(&group.hat(&a, &grading), &group.hat(&b, &grading));
        assert_eq!(
            canonical_f(&grading, &group, &a, &b),
            &eps * &canonical_f(&grading, &group, &b, &a)
        );
    }

    #[test]
    fn canonical_f_identity() {
        let (grading, group) = super_two_gen();
        for a in [[0i64, 0], [1, 0], [-2, 3]] {
            assert_eq!(canonical_f(&grading, &group, &a, &[0, 0]), Cyclotomic::one());
        }
    }

    #[test]
    fn theta_vanishes_for_homomorphic_hat() {
        let (grading, group) = super_two_gen();
        for a in [[0i64, 0], [1, 2], [-1, 3]] {
            for b in [[2i64, -1], [0, 1]] {
                assert_eq!(theta(&grading, &group, &a, &b), grading.group().zero());
            }
        }
    }

    /// All-plus rank-two grading with anticommuting generators, and a
    /// two-generator eigenvalue group whose hat images pair to -1.
    fn plus_two_gen() -> (Grading, GroupG) {
        let grading = Grading::new(
            GradingGroup::new(vec![2, 2]),
            vec![vec![0, 1], vec![1, 0]],
            2,
        )
        .unwrap();
        let group = GroupG::new(
            vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::one()]],
            vec![GroupElement(vec![1, 0]), GroupElement(vec![0, 1])],
        );
        (grading, group)
    }

    #[test]
    fn canonical_f_passes_cocycle_validation() {
        let (grading, group) = plus_two_gen();
        let sig = KSignature::new([2, 0, 0, 0], vec![]);
        assert!(group.validate(&grading, &sig).is_valid());
        let gamma0 = GammaZeroData::trivial(&grading);
        let mut sample = Vec::new();
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                sample.push(vec![x, y]);
            }
        }
        // The cocycle is nontrivial on this sample.
        assert_eq!(
            canonical_f(&grading, &group, &[1, 0], &[0, 1]),
            Cyclotomic::from_int(-1)
        );
        let out = validate_f_cocycle(
            &grading,
            &gamma0,
            &FCocycleData::Canonical { group: &group },
            &sample,
        );
        assert!(out.is_valid(), "{}", out.report);
        assert_eq!(out.pairs_checked, 625);
        assert_eq!(out.triples_checked, 15625);
        assert_eq!(out.skipped, 0);
    }

    #[test]
    fn cocycle_identity_for_ordered_product_with_odd_hats() {
        // The ordered product is bimultiplicative, so the three-term
        // identity holds whatever the hat images are; brute force over all
        // triples from {0, +-g1, +-g2}. The skew law through the hat colors
        // additionally needs plus diagonals, so it is checked only at the
        // ordered pair here.
        let (grading, group) = super_two_gen();
        let pts: Vec<Vec<i64>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![-1, 0],
            vec![0, 1],
            vec![0, -1],
        ];
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
                    let lhs = &canonical_f(&grading, &group, a, b)
                        * &canonical_f(&grading, &group, &ab, c);
                    let rhs = &canonical_f(&grading, &group, b, c)
                        * &canonical_f(&grading, &group, a, &bc);
                    assert_eq!(lhs, rhs);
                }
            }
        }
        let a = [1i64, 0];
        let b = [0i64, 1];
        let eps = grading.eps(&group.hat(&a, &grading), &group.hat(&b, &grading));
        assert_eq!(
            canonical_f(&grading, &group, &a, &b),
            &eps * &canonical_f(&grading, &group, &b, &a)
        );
    }

    #[test]
    fn constant_table_fails_skew_with_nontrivial_eps() {
        let (grading, group) = super_two_gen();
        let gamma0 = GammaZeroData::trivial(&grading);
        let sample: Vec<Vec<i64>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let mut hat = HashMap::new();
        let mut f = HashMap::new();
        for x in &sample {
            hat.insert(x.clone(), group.hat(x, &grading));
            for y in &sample {
                f.insert((x.clone(), y.clone()), Cyclotomic::one());
            }
        }
        let out = validate_f_cocycle(
            &grading,
            &gamma0,
            &FCocycleData::Table { hat, f },
            &sample,
        );
        assert!(out.report.violations.iter().any(|v| v.check == "f.skew"));
    }

    #[test]
    fn trivial_group_passes() {
        let grading = superalgebra_grading();
        let gamma0 = GammaZeroData::trivial(&grading);
        let group = GroupG::trivial();
        let out = validate_f_cocycle(
            &grading,
            &gamma0,
            &FCocycleData::Canonical { group: &group },
            &[vec![]],
        );
        assert!(out.is_valid());
    }

    /// The sign table of two anticommuting order-two symbols: a valid
    /// nontrivial twisted multiplication on the four plus colors.
    fn pauli_gamma0() -> (Grading, GammaZeroData) {
        let grading = Grading::new(
            GradingGroup::new(vec![2, 2]),
            vec![vec![0, 1], vec![1, 0]],
            2,
        )
        .unwrap();
        let els = grading.group().elements();
        let e: Vec<Vec<Cyclotomic>> = els
            .iter()
            .map(|a| {
                els.iter()
                    .map(|b| {
                        let sign = (a.0[1] * b.0[0]) % 2;
                        Cyclotomic::from_int(if sign == 0 { 1 } else { -1 })
                    })
                    .collect()
            })
            .collect();
        (grading.clone(), GammaZeroData::new(els, e))
    }

    #[test]
    fn pauli_table_is_a_valid_cocycle() {
        let (grading, data) = pauli_gamma0();
        let report = data.validate(&grading);
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn corrupted_e_table_is_pinpointed() {
        let (grading, data) = pauli_gamma0();
        let bad = data.with_entry(1, 2, Cyclotomic::from_int(7));
        let report = bad.validate(&grading);
        assert!(!report.is_valid());
        let cocycle_violation = report
            .violations
            .iter()
            .find(|v| v.check == "e-table.cocycle")
            .expect("cocycle violation with a pinpointed triple");
        assert!(cocycle_violation.message.contains("triple"));
    }

    #[test]
    fn signature_validation() {
        let grading = superalgebra_grading();
        let odd = GroupElement(vec![1]);
        let even = GroupElement(vec![0]);
        // Plus color in the fourth block: rejected.
        let bad = KSignature::new([0, 0, 0, 1], vec![even.clone()]);
        let report = bad.validate(&grading);
        assert!(report.violations.iter().any(|v| v.check == "signature.block4-minus"));
        // Minus color in the third block: rejected.
        let bad = KSignature::new([0, 0, 1, 0], vec![odd.clone()]);
        assert!(!bad.validate(&grading).is_valid());
        // Grassmann pair: fine.
        let good = KSignature::new([0, 0, 0, 2], vec![odd.clone(), odd]);
        assert!(good.validate(&grading).is_valid());
        // No minus colors available: the fourth block must be empty.
        let trivial = crate::grading::trivial_grading();
        let bad = KSignature::new([0, 0, 0, 1], vec![GroupElement(vec![])]);
        assert!(bad
            .validate(&trivial)
            .violations
            .iter()
            .any(|v| v.check == "signature.no-minus-colors" || v.check == "signature.block4-minus"));
    }

    #[test]
    fn degenerate_group_rejected() {
        let grading = superalgebra_grading();
        let sig = KSignature::new([2, 0, 0, 0], vec![]);
        // Two dependent generators in a two-dimensional space.
        let group = GroupG::new(
            vec![vec![Rat::one(), Rat::zero()], vec![Rat::new(2, 1), Rat::zero()]],
            vec![GroupElement(vec![0]), GroupElement(vec![0])],
        );
        let report = group.validate(&grading, &sig);
        assert!(report.violations.iter().any(|v| v.check == "G.independence"));
        assert!(report.violations.iter().any(|v| v.check == "G.nondegenerate"));
    }
}
