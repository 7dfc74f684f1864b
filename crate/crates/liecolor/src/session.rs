//! A validated session: grading, signature, eigenvalue group and twisted
//! coefficient data, plus the integer exponent tables that make the hot
//! paths cheap. All commutation factors are powers of the session root of
//! unity, so products of structure constants reduce to exponent arithmetic
//! with a single table lookup at the end.

use crate::grading::{Grading, GroupElement};
use crate::report::ValidationReport;
use crate::scalar::Cyclotomic;
use crate::structure::{GammaZeroData, GroupG, KSignature};

/// Verification bounds: a cap on total variable degree and a finite set of
/// admissible eigenvalue coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub max_t_degree: u32,
    pub a_window: Vec<Vec<i64>>,
}

impl Truncation {
    /// Box window: one inclusive coordinate range per generator.
    pub fn boxed(max_t_degree: u32, ranges: &[(i64, i64)]) -> Self {
        let mut window = vec![vec![]];
        for &(lo, hi) in ranges {
            assert!(lo <= hi, "empty truncation range");
            let mut next = Vec::new();
            for v in &window {
                for c in lo..=hi {
                    let mut w = v.clone();
                    w.push(c);
                    next.push(w);
                }
            }
            window = next;
        }
        window.sort();
        Truncation { max_t_degree, a_window: window }
    }

    /// Window containing only the zero coordinate vector.
    pub fn origin(max_t_degree: u32, rank: usize) -> Self {
        Truncation { max_t_degree, a_window: vec![vec![0; rank]] }
    }
}

/// Reproducibility knobs carried alongside the mathematical data.
#[derive(Clone, Debug)]
pub struct SessionOptions {
    pub seed: u64,
    pub probes: u32,
    pub truncation: Option<Truncation>,
}

impl Default for SessionOptions {
    fn default() -> Self {
        SessionOptions { seed: 0, probes: 64, truncation: None }
    }
}

/// Fully validated configuration with precomputed exponent tables.
#[derive(Clone, Debug)]
pub struct Session {
    grading: Grading,
    signature: KSignature,
    group: GroupG,
    gamma0: GammaZeroData,
    options: SessionOptions,
    order: u32,
    zeta: Vec<Cyclotomic>,
    /// Variable colors by slot (zero in the first block).
    t_colors: Vec<GroupElement>,
    /// Derivation colors by slot: the negated variable colors.
    d_colors: Vec<GroupElement>,
    /// eps exponents between variable colors, `[p][q]`.
    t_t_exp: Vec<Vec<i64>>,
    /// eps exponents of variable colors against hat images, `[p][l]`.
    t_hat_exp: Vec<Vec<i64>>,
    /// eps exponents between hat images, `[l][l']`.
    hat_hat_exp: Vec<Vec<i64>>,
    /// eps exponents of variable colors against coefficient colors, `[p][alpha]`.
    t_g0_exp: Vec<Vec<i64>>,
    /// eps exponents of hat images against coefficient colors, `[l][alpha]`.
    hat_g0_exp: Vec<Vec<i64>>,
    /// Addition and negation on coefficient-subgroup indices.
    g0_add: Vec<Vec<u32>>,
    g0_neg: Vec<u32>,
    g0_zero: u32,
}

impl Session {
    /// Assemble and validate a session, collecting every violation.
    pub fn build(
        grading: Grading,
        signature: KSignature,
        group: GroupG,
        gamma0: GammaZeroData,
        options: SessionOptions,
    ) -> Result<Session, ValidationReport> {
        let mut report = ValidationReport::new();
        report.merge(signature.validate(&grading));
        report.merge(group.validate(&grading, &signature));
        report.merge(gamma0.validate(&grading));
        if !report.is_valid() {
            return Err(report);
        }

        let order = grading.order();
        let zeta = (0..order)
            .map(|j| Cyclotomic::root_of_unity(order, j as i64))
            .collect();
        let k = signature.total();
        let t_colors: Vec<GroupElement> =
            (1..=k).map(|p| signature.t_color(p, &grading)).collect();
        let d_colors: Vec<GroupElement> =
            t_colors.iter().map(|c| grading.group().neg(c)).collect();
        let hats = group.hat_images().to_vec();
        let g0_els = gamma0.elements().to_vec();

        let t_t_exp = t_colors
            .iter()
            .map(|a| t_colors.iter().map(|b| grading.eps_exponent(a, b)).collect())
            .collect();
        let t_hat_exp = t_colors
            .iter()
            .map(|a| hats.iter().map(|b| grading.eps_exponent(a, b)).collect())
            .collect();
        let hat_hat_exp = hats
            .iter()
            .map(|a| hats.iter().map(|b| grading.eps_exponent(a, b)).collect())
            .collect();
        let t_g0_exp = t_colors
            .iter()
            .map(|a| g0_els.iter().map(|b| grading.eps_exponent(a, b)).collect())
            .collect();
        let hat_g0_exp = hats
            .iter()
            .map(|a| g0_els.iter().map(|b| grading.eps_exponent(a, b)).collect())
            .collect();
        let g0_add = g0_els
            .iter()
            .map(|a| {
                g0_els
                    .iter()
                    .map(|b| {
                        gamma0
                            .index_of(&grading.group().add(a, b))
                            .expect("validated subgroup is closed") as u32
                    })
                    .collect()
            })
            .collect();
        let g0_neg = g0_els
            .iter()
            .map(|a| {
                gamma0
                    .index_of(&grading.group().neg(a))
                    .expect("validated subgroup is closed") as u32
            })
            .collect();
        let g0_zero = gamma0.zero_index() as u32;

        Ok(Session {
            grading,
            signature,
            group,
            gamma0,
            options,
            order,
            zeta,
            t_colors,
            d_colors,
            t_t_exp,
            t_hat_exp,
            hat_hat_exp,
            t_g0_exp,
            hat_g0_exp,
            g0_add,
            g0_neg,
            g0_zero,
        })
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn signature(&self) -> &KSignature {
        &self.signature
    }

    pub fn group_g(&self) -> &GroupG {
        &self.group
    }

    pub fn gamma0(&self) -> &GammaZeroData {
        &self.gamma0
    }

    pub fn options(&self) -> &SessionOptions {
        &self.options
    }

    pub fn set_options(&mut self, options: SessionOptions) {
        self.options = options;
    }

    /// Session root-of-unity order.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn k(&self) -> usize {
        self.signature.total()
    }

    pub fn m(&self) -> usize {
        self.group.rank()
    }

    /// `zeta^e` from the cached power table.
    pub fn zeta_pow(&self, e: i64) -> Cyclotomic {
        self.zeta[e.rem_euclid(self.order as i64) as usize].clone()
    }

    pub fn eps(&self, a: &GroupElement, b: &GroupElement) -> Cyclotomic {
        self.zeta_pow(self.grading.eps_exponent(a, b))
    }

    /// Variable color of 1-based slot `p`.
    pub fn t_color(&self, p: usize) -> &GroupElement {
        &self.t_colors[p - 1]
    }

    /// Derivation color of 1-based slot `p`.
    pub fn d_color(&self, p: usize) -> &GroupElement {
        &self.d_colors[p - 1]
    }

    pub(crate) fn t_t_exp(&self, p: usize, q: usize) -> i64 {
        self.t_t_exp[p - 1][q - 1]
    }

    pub(crate) fn t_hat_exp(&self, p: usize, l: usize) -> i64 {
        self.t_hat_exp[p - 1][l]
    }

    pub(crate) fn hat_hat_exp(&self, l1: usize, l2: usize) -> i64 {
        self.hat_hat_exp[l1][l2]
    }

    pub(crate) fn t_g0_exp(&self, p: usize, alpha: u32) -> i64 {
        self.t_g0_exp[p - 1][alpha as usize]
    }

    pub(crate) fn hat_g0_exp(&self, l: usize, alpha: u32) -> i64 {
        self.hat_g0_exp[l][alpha as usize]
    }

    pub(crate) fn g0_add(&self, a: u32, b: u32) -> u32 {
        self.g0_add[a as usize][b as usize]
    }

    pub(crate) fn g0_neg(&self, a: u32) -> u32 {
        self.g0_neg[a as usize]
    }

    pub fn g0_zero(&self) -> u32 {
        self.g0_zero
    }

    /// Hat image of a coordinate vector.
    pub fn hat(&self, coords: &[i64]) -> GroupElement {
        self.group.hat(coords, &self.grading)
    }

    /// Exponent of `eps(hat a, beta)` for a coefficient-subgroup index.
    pub(crate) fn hat_vs_g0_exp(&self, a: &[i64], beta: u32) -> i64 {
        let l = self.order as i64;
        let mut acc = 0i64;
        for (li, &c) in a.iter().enumerate() {
            if c != 0 {
                acc = (acc + (c % l).rem_euclid(l) * self.hat_g0_exp(li, beta)) % l;
            }
        }
        acc
    }

    /// Exponent of `eps(t_p color, hat b)`.
    pub(crate) fn t_vs_hat_exp(&self, p: usize, b: &[i64]) -> i64 {
        let l = self.order as i64;
        let mut acc = 0i64;
        for (li, &c) in b.iter().enumerate() {
            if c != 0 {
                acc = (acc + (c % l).rem_euclid(l) * self.t_hat_exp(p, li)) % l;
            }
        }
        acc
    }

    /// Exponent of the canonical cocycle on a pair of coordinate vectors:
    /// the ordered product over generator pairs, from the cached table.
    pub(crate) fn f_exp(&self, a: &[i64], b: &[i64]) -> i64 {
        let l = self.order as i64;
        let mut acc = 0i64;
        for l1 in 0..a.len() {
            if a[l1] == 0 {
                continue;
            }
            for l2 in (l1 + 1)..b.len() {
                if b[l2] == 0 {
                    continue;
                }
                let term = (a[l1].rem_euclid(l)) * (b[l2].rem_euclid(l)) % l
                    * self.hat_hat_exp(l1, l2)
                    % l;
                acc = (acc + term) % l;
            }
        }
        acc
    }
}
