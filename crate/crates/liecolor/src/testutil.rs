//! Session constructors shared by the unit tests.

use crate::grading::{superalgebra_grading, trivial_grading, Grading, GradingGroup, GroupElement};
use crate::rat::Rat;
use crate::scalar::Cyclotomic;
use crate::session::{Session, SessionOptions, Truncation};
use crate::structure::{GammaZeroData, GroupG, KSignature};
use num::{One, Zero};

/// Square-zero variables over the supergrading, no eigenvalue part.
pub fn grassmann_session(n: usize) -> Session {
    let grading = superalgebra_grading();
    let odd = GroupElement(vec![1]);
    let sig = KSignature::new([0, 0, 0, n], vec![odd; n]);
    let gamma0 = GammaZeroData::trivial(&grading);
    Session::build(grading, sig, GroupG::trivial(), gamma0, SessionOptions::default()).unwrap()
}

/// Polynomial variables over the trivial grading.
pub fn polynomial_session(k3: usize) -> Session {
    let grading = trivial_grading();
    let zero = GroupElement(vec![]);
    let sig = KSignature::new([0, 0, k3, 0], vec![zero; k3]);
    let gamma0 = GammaZeroData::trivial(&grading);
    Session::build(grading, sig, GroupG::trivial(), gamma0, SessionOptions::default()).unwrap()
}

/// One slot of every block over a rank-two grading, with a nondegenerate
/// rank-two eigenvalue group.
pub fn mixed_session() -> Session {
    let grading = Grading::new(
        GradingGroup::new(vec![2, 2]),
        vec![vec![1, 0], vec![0, 1]],
        2,
    )
    .unwrap();
    let sig = KSignature::new(
        [1, 1, 1, 1],
        vec![
            GroupElement(vec![0, 0]),
            GroupElement(vec![1, 1]),
            GroupElement(vec![1, 0]),
        ],
    );
    let group = GroupG::new(
        vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::one()]],
        vec![GroupElement(vec![1, 1]), GroupElement(vec![1, 1])],
    );
    let gamma0 = GammaZeroData::trivial(&grading);
    Session::build(grading, sig, group, gamma0, SessionOptions::default()).unwrap()
}

/// Nontrivial twisted coefficient algebra: the sign table of two
/// anticommuting order-two symbols on a fully plus grading.
pub fn pauli_session() -> Session {
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
                .map(|b| Cyclotomic::from_int(if (a.0[1] * b.0[0]) % 2 == 0 { 1 } else { -1 }))
                .collect()
        })
        .collect();
    let gamma0 = GammaZeroData::new(els, e);
    let sig = KSignature::new([1, 0, 0, 0], vec![]);
    let group = GroupG::new(vec![vec![Rat::one()]], vec![GroupElement(vec![1, 0])]);
    Session::build(grading, sig, group, gamma0, SessionOptions::default()).unwrap()
}

/// Every structure constant source at once: the Pauli coefficient table on
/// the full plus grading, two eigenvalue generators whose hat images
/// anticommute (nontrivial cocycle), and a polynomial slot with a color
/// that pairs nontrivially against the coefficient subgroup.
pub fn twisted_full_session() -> Session {
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
                .map(|b| Cyclotomic::from_int(if (a.0[1] * b.0[0]) % 2 == 0 { 1 } else { -1 }))
                .collect()
        })
        .collect();
    let gamma0 = GammaZeroData::new(els, e);
    let sig = KSignature::new([2, 0, 1, 0], vec![GroupElement(vec![1, 1])]);
    let group = GroupG::new(
        vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::one()]],
        vec![GroupElement(vec![1, 0]), GroupElement(vec![0, 1])],
    );
    Session::build(grading, sig, group, gamma0, SessionOptions::default()).unwrap()
}

/// Pure group-algebra session over the supergrading: one semisimple slot.
pub fn group_algebra_session() -> Session {
    let grading = superalgebra_grading();
    let sig = KSignature::new([1, 0, 0, 0], vec![]);
    let group = GroupG::new(vec![vec![Rat::one()]], vec![GroupElement(vec![0])]);
    let gamma0 = GammaZeroData::trivial(&grading);
    Session::build(grading, sig, group, gamma0, SessionOptions::default()).unwrap()
}

/// A small verification window fitting any of the test sessions.
pub fn small_window(session: &Session) -> Truncation {
    let ranges = vec![(-1i64, 1i64); session.m()];
    Truncation::boxed(2, &ranges)
}
