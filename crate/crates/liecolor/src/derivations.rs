//! The canonical commuting derivations of a session, their classification
//! on finite invariant windows, and the descent that certifies graded
//! simplicity under the derivation action.
//!
//! Each slot `p` carries up to two operators: a grading operator that scales
//! a basis vector by its `p`-th eigenvalue coordinate, and a lowering
//! operator that differentiates the variable part with a commutation
//! prefactor. The canonical spanning family uses the grading operator on
//! the first block, the sum of both on the second, and the lowering
//! operator on the rest.

use crate::algebra::{AlgebraElement, AlgebraError, BasisIndex};
use crate::grading::GroupElement;
use crate::linalg::{poly_is_squarefree, SparseMatrix, SparseVec};
use crate::rat::Rat;
use crate::report::ValidationReport;
use crate::scalar::Cyclotomic;
use crate::session::{Session, Truncation};
use num::{One, Zero};
use rand::Rng;
use std::collections::BTreeMap;

/// The three operator kinds attached to a slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivKind {
    /// Scales by the eigenvalue coordinate; first two blocks only.
    Grading,
    /// Twisted partial derivative in the slot variable; slots past the
    /// first block.
    Lowering,
    /// Sum of both; second block only.
    Mixed,
}

/// One operator: a kind and a 1-based slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    pub kind: DerivKind,
    pub p: usize,
}

impl DerivationSpec {
    pub fn grading(p: usize) -> Self {
        DerivationSpec { kind: DerivKind::Grading, p }
    }

    pub fn lowering(p: usize) -> Self {
        DerivationSpec { kind: DerivKind::Lowering, p }
    }

    pub fn mixed(p: usize) -> Self {
        DerivationSpec { kind: DerivKind::Mixed, p }
    }

    /// Legal slot ranges for each kind.
    pub fn validate(&self, session: &Session) -> Result<(), DerivError> {
        let (k1, k12, k) = (
            session.signature().k1(),
            session.signature().k12(),
            session.k(),
        );
        let ok = match self.kind {
            DerivKind::Grading => self.p >= 1 && self.p <= k12,
            DerivKind::Lowering => self.p > k1 && self.p <= k,
            DerivKind::Mixed => self.p > k1 && self.p <= k12,
        };
        if ok {
            Ok(())
        } else {
            Err(DerivError::IllegalSlot { kind: self.kind, p: self.p })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivError {
    #[error("operator {kind:?} is not defined on slot {p}")]
    IllegalSlot { kind: DerivKind, p: usize },
    #[error("window is not invariant: image index `{0}` is outside")]
    NonInvariantWindow(String),
}

/// The canonical spanning family: one operator per slot.
pub fn canonical_dspace(session: &Session) -> Vec<DerivationSpec> {
    let (k1, k12) = (session.signature().k1(), session.signature().k12());
    (1..=session.k())
        .map(|p| {
            if p <= k1 {
                DerivationSpec::grading(p)
            } else if p <= k12 {
                DerivationSpec::mixed(p)
            } else {
                DerivationSpec::lowering(p)
            }
        })
        .collect()
}

/// How an operator acts on the window of a classification problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    SemiSimple,
    LocallyFiniteNotSemiSimple,
    LocallyNilpotent,
}

impl Session {
    /// Color of an operator: the negated variable color of its slot.
    pub fn deriv_color(&self, d: &DerivationSpec) -> &GroupElement {
        self.d_color(d.p)
    }

    /// Action on one basis vector: at most one grading term and one
    /// lowering term.
    pub fn apply_basis_deriv(
        &self,
        d: &DerivationSpec,
        u: &BasisIndex,
    ) -> Vec<(Cyclotomic, BasisIndex)> {
        let mut out = Vec::with_capacity(2);
        if matches!(d.kind, DerivKind::Grading | DerivKind::Mixed) {
            let ev = self.group_g().eigenvalue(&u.a, d.p - 1);
            if !ev.is_zero() {
                out.push((Cyclotomic::from_rat(ev), u.clone()));
            }
        }
        if matches!(d.kind, DerivKind::Lowering | DerivKind::Mixed) {
            let ip = u.i[d.p - 1];
            if ip != 0 {
                let l = self.order() as i64;
                // Commutation prefactor of the lowering operator: its color
                // against the coefficient color plus hat image, then against
                // the variables it passes on the way in.
                let mut exp = -(self.t_g0_exp(d.p, u.alpha) + self.t_vs_hat_exp(d.p, &u.a));
                for q in 1..d.p {
                    let iq = u.i[q - 1];
                    if iq != 0 {
                        exp -= (iq as i64 % l) * self.t_t_exp(d.p, q) % l;
                    }
                }
                let mut idx = u.clone();
                idx.i[d.p - 1] -= 1;
                let coeff = &self.zeta_pow(exp.rem_euclid(l)) * &Cyclotomic::from_int(ip as i64);
                out.push((coeff, idx));
            }
        }
        out
    }

    /// Linear extension to elements.
    pub fn apply_deriv(&self, d: &DerivationSpec, u: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (idx, c) in u.iter() {
            for (s, w) in self.apply_basis_deriv(d, idx) {
                out.add_term(w, &s * c);
            }
        }
        out
    }

    /// Apply a polynomial in the canonical operator of slot `p`.
    pub fn apply_poly_in_slot(
        &self,
        p: usize,
        coeffs: &[Cyclotomic],
        u: &AlgebraElement,
    ) -> AlgebraElement {
        let d = canonical_dspace(self)[p - 1];
        let mut acc = AlgebraElement::zero();
        let mut power = u.clone();
        for (deg, c) in coeffs.iter().enumerate() {
            if deg > 0 {
                power = self.apply_deriv(&d, &power);
            }
            if !c.is_zero() {
                acc = acc.add(&power.scaled(c));
            }
        }
        acc
    }

    /// Both sides of the twisted product rule for a homogeneous pair.
    pub fn leibniz_check(
        &self,
        d: &DerivationSpec,
        u: &AlgebraElement,
        v: &AlgebraElement,
    ) -> Result<LeibnizCheck, AlgebraError> {
        let cu = self.homogeneous_color(u)?;
        let lhs = self.apply_deriv(d, &self.mul(u, v));
        let eps = self.eps(self.deriv_color(d), &cu);
        let rhs = self
            .mul(&self.apply_deriv(d, u), v)
            .add(&self.mul(u, &self.apply_deriv(d, v)).scaled(&eps));
        Ok(LeibnizCheck { lhs, rhs })
    }

    /// Matrix of a scalar combination of operators on a window basis.
    pub fn deriv_matrix(
        &self,
        combo: &[(Cyclotomic, DerivationSpec)],
        basis: &[BasisIndex],
    ) -> Result<SparseMatrix<Cyclotomic>, DerivError> {
        for (_, d) in combo {
            d.validate(self)?;
        }
        let pos: BTreeMap<&BasisIndex, usize> =
            basis.iter().enumerate().map(|(n, b)| (b, n)).collect();
        let mut cols = Vec::with_capacity(basis.len());
        for b in basis {
            let mut entries = Vec::new();
            for (c, d) in combo {
                for (s, idx) in self.apply_basis_deriv(d, b) {
                    let row = *pos
                        .get(&idx)
                        .ok_or_else(|| DerivError::NonInvariantWindow(self.format_index(&idx)))?;
                    entries.push((row, &s * c));
                }
            }
            cols.push(SparseVec::from_entries(entries));
        }
        Ok(SparseMatrix::from_columns(cols))
    }

    /// Classify a scalar combination of operators on a finite invariant
    /// window: squarefree minimal polynomial means semisimple, a vanishing
    /// power means locally nilpotent, anything else is locally finite but
    /// not semisimple.
    pub fn classify(
        &self,
        combo: &[(Cyclotomic, DerivationSpec)],
        window: &Truncation,
    ) -> Result<Classification, DerivError> {
        let basis = self.enumerate_basis(window);
        let m = self.deriv_matrix(combo, &basis)?;
        let p = m.minimal_polynomial();
        if poly_is_squarefree(&p) {
            Ok(Classification::SemiSimple)
        } else if p.iter().take(p.len() - 1).all(|c| c.is_zero()) {
            Ok(Classification::LocallyNilpotent)
        } else {
            Ok(Classification::LocallyFiniteNotSemiSimple)
        }
    }

    /// Verify pairwise color-commutation of the canonical operators on a
    /// window.
    pub fn eps_commute_check(&self, window: &Truncation) -> ValidationReport {
        let mut report = ValidationReport::new();
        let basis = self.enumerate_basis(window);
        let ds = canonical_dspace(self);
        for dp in &ds {
            for dq in &ds {
                let eps = self.eps(self.deriv_color(dp), self.deriv_color(dq));
                for b in &basis {
                    let eb = AlgebraElement::term(b.clone(), Cyclotomic::one());
                    let lhs = self.apply_deriv(dp, &self.apply_deriv(dq, &eb));
                    let rhs = self
                        .apply_deriv(dq, &self.apply_deriv(dp, &eb))
                        .scaled(&eps);
                    if lhs != rhs {
                        report.push(
                            "derivations.commutation",
                            format!(
                                "slots {} and {} disagree on `{}`",
                                dp.p,
                                dq.p,
                                self.format_index(b)
                            ),
                        );
                    }
                }
            }
        }
        report
    }
}

/// Result of a product-rule check; both sides are kept for reporting.
#[derive(Debug, Clone)]
pub struct LeibnizCheck {
    pub lhs: AlgebraElement,
    pub rhs: AlgebraElement,
}

impl LeibnizCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// One replayable move of a descent witness.
#[derive(Clone, Debug, PartialEq)]
pub enum Move {
    /// Apply a polynomial in the canonical operator of slot `p`; little-
    /// endian coefficients.
    ApplyPoly { p: usize, coeffs: Vec<Cyclotomic> },
    /// Multiply from the left by a fixed element.
    MulBy { element: AlgebraElement },
}

/// A machine-checkable chain of moves carrying a nonzero homogeneous
/// element to the identity. Every move preserves membership in any graded
/// ideal stable under the canonical operators, so a replayed witness proves
/// that such an ideal containing the start element is everything.
#[derive(Clone, Debug)]
pub struct Witness {
    pub start: AlgebraElement,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescentError {
    #[error("descent input must be nonzero")]
    Zero,
    #[error("descent input must be homogeneous")]
    NotHomogeneous,
    #[error("eigenvalue separation stalled at slot {p}; the eigenvalue group embedding is degenerate")]
    SeparationStuck { p: usize },
    #[error("variable lowering did not isolate a single term")]
    LoweringStuck,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReplayError {
    #[error("move {index} references slot {p} outside the session")]
    BadSlot { index: usize, p: usize },
    #[error("replay finished at `{got}` instead of the identity")]
    NotIdentity { got: String },
}

/// Little-endian coefficients of `(x - root)^power`.
fn shifted_power_poly(root: &Cyclotomic, power: u32) -> Vec<Cyclotomic> {
    let mut poly = vec![Cyclotomic::one()];
    for _ in 0..power {
        // Multiply by (x - root).
        let mut next = vec![Cyclotomic::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] = &next[d + 1] + c;
            next[d] = &next[d] - &(c * root);
        }
        poly = next;
    }
    poly
}

/// Produce a witness chain carrying `u` to the identity: separate the
/// eigenvalue support with annihilating polynomials in the grading slots,
/// lower a maximal variable exponent to zero, then multiply by the inverse
/// of the remaining root vector.
pub fn d_simplicity_descent(session: &Session, u: &AlgebraElement) -> Result<Witness, DescentError> {
    if u.is_zero() {
        return Err(DescentError::Zero);
    }
    if session.element_colors(u).len() != 1 {
        return Err(DescentError::NotHomogeneous);
    }
    let mut moves = Vec::new();
    let mut current = u.clone();

    // Eigenvalue separation, one grading slot at a time.
    for p in 1..=session.signature().k12() {
        let mut values: Vec<Rat> = Vec::new();
        for (idx, _) in current.iter() {
            let v = session.group_g().eigenvalue(&idx.a, p - 1);
            if !values.contains(&v) {
                values.push(v);
            }
        }
        if values.len() <= 1 {
            continue;
        }
        let nil_bound = 1 + current
            .iter()
            .map(|(idx, _)| idx.i[p - 1])
            .max()
            .unwrap_or(0);
        let target = values[0].clone();
        for v in values.iter().skip(1) {
            let poly = shifted_power_poly(&Cyclotomic::from_rat(v.clone()), nil_bound);
            current = session.apply_poly_in_slot(p, &poly, &current);
            moves.push(Move::ApplyPoly { p, coeffs: poly });
        }
        let leftover: Vec<Rat> = current
            .iter()
            .map(|(idx, _)| session.group_g().eigenvalue(&idx.a, p - 1))
            .collect();
        if current.is_zero() || leftover.iter().any(|v| *v != target) {
            return Err(DescentError::SeparationStuck { p });
        }
    }
    let distinct_a: std::collections::BTreeSet<&Vec<i64>> =
        current.iter().map(|(idx, _)| &idx.a).collect();
    if distinct_a.len() != 1 {
        return Err(DescentError::SeparationStuck { p: 0 });
    }

    // Lower a maximal exponent vector to zero. Maximality in the product
    // order means no other support exponent dominates it, so exactly one
    // term survives.
    let exponents: Vec<Vec<u32>> = current.iter().map(|(idx, _)| idx.i.clone()).collect();
    let mut maximal: Vec<&Vec<u32>> = exponents
        .iter()
        .filter(|i| {
            !exponents
                .iter()
                .any(|j| *j != **i && j.iter().zip(i.iter()).all(|(a, b)| a >= b))
        })
        .collect();
    maximal.sort();
    let c: Vec<u32> = (*maximal.last().expect("nonzero element has a maximal exponent")).clone();
    let a_coords = current.iter().next().unwrap().0.a.clone();
    for p in 1..=session.k() {
        if c[p - 1] == 0 {
            continue;
        }
        let root = if p <= session.signature().k12() {
            Cyclotomic::from_rat(session.group_g().eigenvalue(&a_coords, p - 1))
        } else {
            Cyclotomic::zero()
        };
        let poly = shifted_power_poly(&root, c[p - 1]);
        current = session.apply_poly_in_slot(p, &poly, &current);
        moves.push(Move::ApplyPoly { p, coeffs: poly });
    }
    if current.len() != 1 {
        return Err(DescentError::LoweringStuck);
    }

    // Invert the surviving root vector.
    let (idx, coeff) = current.iter().next().unwrap();
    debug_assert!(idx.i.iter().all(|&e| e == 0));
    let inv = session
        .invert_root_vector(idx)
        .expect("lowered term has zero variable exponents")
        .scaled(&coeff.inv().expect("nonzero coefficient"));
    if !(coeff.is_one() && *idx == session.identity_index()) {
        current = session.mul(&inv, &current);
        moves.push(Move::MulBy { element: inv });
    }
    debug_assert_eq!(current, session.identity_element());
    Ok(Witness { start: u.clone(), moves })
}

/// Independent checker: replay a witness through the public operator and
/// product routines only, and confirm it ends at the identity.
pub fn replay_witness(session: &Session, w: &Witness) -> Result<(), ReplayError> {
    let mut current = w.start.clone();
    for (index, mv) in w.moves.iter().enumerate() {
        match mv {
            Move::ApplyPoly { p, coeffs } => {
                if *p < 1 || *p > session.k() {
                    return Err(ReplayError::BadSlot { index, p: *p });
                }
                current = session.apply_poly_in_slot(*p, coeffs, &current);
            }
            Move::MulBy { element } => {
                current = session.mul(element, &current);
            }
        }
    }
    if current == session.identity_element() {
        Ok(())
    } else {
        Err(ReplayError::NotIdentity { got: session.format_element(&current) })
    }
}

/// Draw a random nonzero homogeneous element supported inside a window.
pub fn random_homogeneous(
    session: &Session,
    window: &Truncation,
    rng: &mut impl Rng,
) -> AlgebraElement {
    let basis = session.enumerate_basis(window);
    let mut by_color: BTreeMap<GroupElement, Vec<BasisIndex>> = BTreeMap::new();
    for b in basis {
        by_color.entry(session.color_of(&b)).or_default().push(b);
    }
    let colors: Vec<GroupElement> = by_color.keys().cloned().collect();
    let color = &colors[rng.gen_range(0..colors.len())];
    let pool = &by_color[color];
    let count = rng.gen_range(1..=pool.len().min(3));
    let mut picked: Vec<usize> = Vec::new();
    while picked.len() < count {
        let n = rng.gen_range(0..pool.len());
        if !picked.contains(&n) {
            picked.push(n);
        }
    }
    let mut out = AlgebraElement::zero();
    for n in picked {
        let num = loop {
            let v = rng.gen_range(-3i64..=3);
            if v != 0 {
                break v;
            }
        };
        let den = rng.gen_range(1i64..=2);
        let zexp = rng.gen_range(0..session.order() as i64);
        let coeff = &Cyclotomic::rational(num, den) * &session.zeta_pow(zexp);
        out.add_term(pool[n].clone(), coeff);
    }
    out
}
