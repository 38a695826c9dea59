//! Planar PALFs: a holed-disk fiber plus an ordered list of vanishing cycles,
//! and the invariants of the 4-manifold they describe.
//!
//! The total space is the fiber times a disk (one 0-handle and one 1-handle
//! per hole) with one Lefschetz 2-handle per vanishing cycle, attached with
//! framing −1 relative to the fiber framing. Cycles drawn flat at distinct
//! heights are pairwise unlinked, so the 2-handles' linking matrix is `−I`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{CurveError, FiberModel, StandardCurve};
use crate::forms::IntSymForm;
use crate::kirby::KirbyDiagram;
use crate::linalg::{self, AbelianGroup, BigMatrix, IntMatrix};
use crate::mcg::{self, MappingClass, McgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PalfError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Mcg(#[from] McgError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PalfDescription {
    fiber: FiberModel,
    cycles: Vec<StandardCurve>,
}

/// Which integral kernel algorithm to use for the intersection lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    /// Column reduction to echelon form.
    Hermite,
    /// Read off the Smith normal form transform.
    Smith,
}

impl PalfDescription {
    /// Validates every cycle against the fiber.
    pub fn new(fiber: FiberModel, cycles: Vec<StandardCurve>) -> Result<Self, PalfError> {
        for c in &cycles {
            c.check_on(fiber)?;
        }
        Ok(PalfDescription { fiber, cycles })
    }

    /// The trivial fibration over the disk with fiber `fiber`.
    pub fn trivial(fiber: FiberModel) -> Self {
        PalfDescription { fiber, cycles: Vec::new() }
    }

    pub fn fiber(&self) -> FiberModel {
        self.fiber
    }

    pub fn holes(&self) -> usize {
        self.fiber.holes()
    }

    pub fn cycles(&self) -> &[StandardCurve] {
        &self.cycles
    }

    /// Every cycle is homologically nontrivial in the fiber.
    pub fn is_allowable(&self) -> bool {
        self.cycles
            .iter()
            .all(|c| c.homology_class(self.fiber).is_ok_and(|v| v.iter().any(|&x| x != 0)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        1 - self.holes() as i64 + self.cycles.len() as i64
    }

    /// `h × k` matrix whose column `j` is the homology class of cycle `j`.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let (h, k) = (self.holes(), self.cycles.len());
        let mut m = IntMatrix::zeros(h, k);
        for (j, c) in self.cycles.iter().enumerate() {
            for &i in c.enclosed() {
                m[(i - 1, j)] = 1;
            }
        }
        m
    }

    /// `H1 = coker(incidence)` and `b2 = k − rank(incidence)`.
    pub fn homology(&self) -> (AbelianGroup, usize) {
        let m = self.incidence_matrix();
        (linalg::cokernel(&m), self.cycles.len() - linalg::rank(&m))
    }

    pub fn kernel_basis(&self, method: KernelMethod) -> BigMatrix {
        let m = self.incidence_matrix();
        match method {
            KernelMethod::Hermite => linalg::kernel_basis_hermite(&m),
            KernelMethod::Smith => linalg::kernel_basis_snf(&m),
        }
    }

    /// `Bᵀ(−I)B` for the canonical basis `B` of the cycle relations.
    pub fn intersection_form(&self) -> IntSymForm {
        let basis = linalg::canonical_lattice_basis(&self.kernel_basis(KernelMethod::Hermite));
        self.form_on(&basis)
    }

    /// The intersection form in the raw basis produced by `method`.
    pub fn intersection_form_with(&self, method: KernelMethod) -> IntSymForm {
        self.form_on(&self.kernel_basis(method))
    }

    fn form_on(&self, basis: &BigMatrix) -> IntSymForm {
        let k = self.cycles.len();
        let mut minus_i = IntMatrix::zeros(k, k);
        for j in 0..k {
            minus_i[(j, j)] = -1;
        }
        IntSymForm::restrict(&minus_i, basis).expect("restriction of a symmetric matrix is symmetric")
    }

    /// `t_{c_k} ∘ ⋯ ∘ t_{c_1}`: the first cycle is applied first.
    pub fn total_monodromy(&self) -> Result<MappingClass, PalfError> {
        Ok(mcg::product_of_twists(self.fiber, &self.cycles)?)
    }

    /// Adds one Lefschetz 2-handle along `c`, attached last.
    pub fn attach_lefschetz_handle(&self, c: StandardCurve) -> Result<Self, PalfError> {
        if !crate::curves::is_allowable(c.enclosed(), self.fiber)? {
            return Err(PalfError::Invalid(format!("curve {c} is not allowable")));
        }
        let mut cycles = self.cycles.clone();
        cycles.push(c);
        Ok(PalfDescription { fiber: self.fiber, cycles })
    }

    /// One dotted circle per hole and one (−1)-framed 2-handle per cycle,
    /// linking the dotted circles of its enclosed holes once each.
    pub fn to_kirby(&self) -> KirbyDiagram {
        let (h, k) = (self.holes(), self.cycles.len());
        let mut l = IntMatrix::zeros(k, k);
        for j in 0..k {
            l[(j, j)] = -1;
        }
        let n = self.incidence_matrix().transpose();
        let mut d = KirbyDiagram::new(h, l, n).expect("consistent by construction");
        for (j, c) in self.cycles.iter().enumerate() {
            for i in 1..=h {
                let bound = if c.contains(i) { 1 } else { 0 };
                d.set_bound(j + 1, i, Some(bound)).expect("bounds match the incidence");
            }
        }
        d
    }

    pub fn invariants(&self) -> PalfInvariants {
        let (h1, b2) = self.homology();
        PalfInvariants { chi: self.euler_characteristic(), h1, b2, form: self.intersection_form() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalfInvariants {
    pub chi: i64,
    pub h1: AbelianGroup,
    pub b2: usize,
    pub form: IntSymForm,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{congruent, DEFAULT_BOUND};

    fn palf(h: usize, cycles: &[&str]) -> PalfDescription {
        PalfDescription::new(
            FiberModel::new(h).unwrap(),
            cycles.iter().map(|s| s.parse().unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(palf(4, &["{1}", "{1,2}", "{1,3}", "{1,4}", "{1,2,3,4}"]).euler_characteristic(), 2);
        assert_eq!(palf(1, &[]).euler_characteristic(), 0);
        assert_eq!(palf(4, &["{1}", "{1,2}", "{1,3}", "{1,4}", "{1,2,3,4}", "{1,2}"]).euler_characteristic(), 3);
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(palf(2, &["{1}", "{2}", "{1,2}"]).incidence_matrix().to_rows(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(palf(3, &[]).incidence_matrix().cols(), 0);
        assert_eq!(palf(3, &["{1,3}", "{2}"]).incidence_matrix().to_rows(), vec![vec![1, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn homology_and_form_examples() {
        let p = palf(2, &["{1}", "{2}", "{1,2}"]);
        let (h1, b2) = p.homology();
        assert!(h1.is_trivial());
        assert_eq!(b2, 1);
        assert_eq!(p.intersection_form().gram().to_rows(), vec![vec![-3]]);
        let (h1, b2) = palf(3, &[]).homology();
        assert_eq!((h1.to_string(), b2), ("Z^3".to_string(), 0));
        assert_eq!(palf(3, &[]).intersection_form().rank(), 0);
    }

    #[test]
    fn kernel_methods_agree_up_to_congruence() {
        let p = palf(4, &["{1}", "{1,2}", "{1,3}", "{1,4}", "{1,2,3,4}", "{1,2}", "{2}", "{3,4}"]);
        let a = p.intersection_form_with(KernelMethod::Hermite);
        let b = p.intersection_form_with(KernelMethod::Smith);
        assert!(congruent(&a, &b, DEFAULT_BOUND).is_yes());
    }

    #[test]
    fn monodromy_and_attachment() {
        let f = FiberModel::new(3).unwrap();
        assert!(PalfDescription::trivial(f).total_monodromy().unwrap().is_identity());
        let lhs = palf(3, &["{1}", "{2}", "{3}", "{1,2,3}"]).total_monodromy().unwrap();
        // attaching order {2,3}, {1,3}, {1,2} gives t12 ∘ t13 ∘ t23
        let rhs = palf(3, &["{2,3}", "{1,3}", "{1,2}"]).total_monodromy().unwrap();
        assert_eq!(lhs, rhs);
        let p = PalfDescription::trivial(f).attach_lefschetz_handle("{1}".parse().unwrap()).unwrap();
        assert_eq!(p.euler_characteristic(), 2 - 3);
    }

    #[test]
    fn kirby_translation() {
        let d = palf(1, &["{1}"]).to_kirby();
        assert_eq!((d.dotted(), d.handles()), (1, 1));
        assert!(d.geometric_linking_one(1, 1));
        let p = palf(2, &["{1}", "{2}", "{1,2}"]);
        let d = p.to_kirby();
        assert_eq!(d.incidence().transpose(), p.incidence_matrix());
        let inv = d.invariants().unwrap();
        let pinv = p.invariants();
        assert_eq!((inv.chi, inv.h1.clone(), inv.b2, inv.form.clone()), (pinv.chi, pinv.h1, pinv.b2, pinv.form));
    }
}
