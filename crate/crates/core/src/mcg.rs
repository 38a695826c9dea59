//! Mapping classes of the holed disk rel boundary.
//!
//! A mapping class is stored as its action on the free fundamental group of
//! the fiber (basepoint on the outer boundary) together with a framing
//! vector that counts twists about the inner boundary circles. Those twists
//! act trivially on π1, and the framing vector restores faithfulness.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{CurveError, FiberModel, StandardCurve};
use crate::freegroup::{FreeAutomorphism, FreeGroupError, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McgError {
    #[error(transparent)]
    FreeGroup(#[from] FreeGroupError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("braid generator sigma_{index} out of range for {strands} strands")]
    BraidIndex { index: usize, strands: usize },
    #[error("braid is not pure")]
    NotPure,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

/// Signed Artin generator `sigma_index^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidLetter {
    pub index: usize,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BraidWord {
    pub letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(letters: Vec<BraidLetter>) -> Self {
        BraidWord { letters }
    }

    pub fn sigma(index: usize, positive: bool) -> Self {
        BraidWord { letters: vec![BraidLetter { index, positive }] }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| BraidLetter { index: l.index, positive: !l.positive })
                .collect(),
        }
    }

    pub fn then(mut self, other: &BraidWord) -> BraidWord {
        self.letters.extend_from_slice(&other.letters);
        self
    }

    /// Permutation of strand positions; `perm[i]` is where strand `i` ends.
    pub fn permutation(&self, strands: usize) -> Vec<usize> {
        let mut at: Vec<usize> = (0..strands).collect();
        for l in &self.letters {
            at.swap(l.index - 1, l.index);
        }
        let mut perm = vec![0; strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    pub fn is_pure(&self, strands: usize) -> bool {
        self.permutation(strands).iter().enumerate().all(|(i, &p)| i == p)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "s{}{}", l.index, if l.positive { "" } else { "^-1" })?;
        }
        Ok(())
    }
}

fn sigma_aut(rank: usize, index: usize, positive: bool) -> Result<FreeAutomorphism, McgError> {
    if index == 0 || index >= rank {
        return Err(McgError::BraidIndex { index, strands: rank });
    }
    let g = |i: usize| Word::generator(rank, i).expect("in range");
    let (i, j) = (index, index + 1);
    let xi = g(i);
    let xj = g(j);
    // sigma: x_i -> x_i x_j x_i^-1, x_j -> x_i
    let mut fwd: Vec<Word> = (1..=rank).map(g).collect();
    fwd[i - 1] = xj.conjugate_by(&xi)?;
    fwd[j - 1] = xi.clone();
    // sigma^-1: x_i -> x_j, x_j -> x_j^-1 x_i x_j
    let mut bwd: Vec<Word> = (1..=rank).map(g).collect();
    bwd[i - 1] = xj.clone();
    bwd[j - 1] = xi.conjugate_by(&xj.inverse())?;
    Ok(if positive {
        FreeAutomorphism::new_unchecked(rank, fwd, bwd)
    } else {
        FreeAutomorphism::new_unchecked(rank, bwd, fwd)
    })
}

/// Artin action of a braid word on the free group of rank `rank`; the word
/// `b1 b2 ... bn` acts as `phi(b1) ∘ phi(b2) ∘ ... ∘ phi(bn)`.
pub fn artin_action(rank: usize, b: &BraidWord) -> Result<FreeAutomorphism, McgError> {
    let mut acc = FreeAutomorphism::identity(rank);
    for l in &b.letters {
        acc = acc.compose(&sigma_aut(rank, l.index, l.positive)?)?;
    }
    Ok(acc)
}

/// The braid that carries the strands of `c` into the consecutive block
/// starting at `c.min()`, written with `sigma^-1` letters. Read left to
/// right the word moves the rightmost enclosed strand first.
pub fn gathering_braid(c: &StandardCurve) -> BraidWord {
    let mut letters = Vec::new();
    let first = c.min();
    for (k, &pos) in c.enclosed().iter().enumerate().skip(1) {
        let target = first + k;
        for p in (target..pos).rev() {
            letters.push(BraidLetter { index: p, positive: false });
        }
    }
    letters.reverse();
    BraidWord { letters }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingClass {
    aut: FreeAutomorphism,
    framing: Vec<i64>,
}

impl MappingClass {
    pub fn identity(fiber: FiberModel) -> Self {
        MappingClass {
            aut: FreeAutomorphism::identity(fiber.holes()),
            framing: vec![0; fiber.holes()],
        }
    }

    pub fn new(aut: FreeAutomorphism, framing: Vec<i64>) -> Result<Self, McgError> {
        if aut.rank() != framing.len() {
            return Err(McgError::RankMismatch(aut.rank(), framing.len()));
        }
        Ok(MappingClass { aut, framing })
    }

    /// Pure braid as a mapping class with zero framing.
    pub fn from_pure_braid(fiber: FiberModel, b: &BraidWord) -> Result<Self, McgError> {
        if !b.is_pure(fiber.holes()) {
            return Err(McgError::NotPure);
        }
        Ok(MappingClass { aut: artin_action(fiber.holes(), b)?, framing: vec![0; fiber.holes()] })
    }

    pub fn aut(&self) -> &FreeAutomorphism {
        &self.aut
    }

    pub fn framing(&self) -> &[i64] {
        &self.framing
    }

    pub fn rank(&self) -> usize {
        self.framing.len()
    }

    /// `self ∘ other`; framings add.
    pub fn compose(&self, other: &MappingClass) -> Result<MappingClass, McgError> {
        if self.rank() != other.rank() {
            return Err(McgError::RankMismatch(self.rank(), other.rank()));
        }
        Ok(MappingClass {
            aut: self.aut.compose(&other.aut)?,
            framing: self.framing.iter().zip(&other.framing).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn inverse(&self) -> MappingClass {
        MappingClass {
            aut: self.aut.inverse(),
            framing: self.framing.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.aut.is_identity() && self.framing.iter().all(|&x| x == 0)
    }

    /// Induced map on the abelianization as an integer matrix (column i is
    /// the image of `[x_i]`).
    pub fn homology_action(&self) -> Vec<Vec<i64>> {
        let h = self.rank();
        let cols: Vec<Vec<i64>> = (1..=h).map(|i| self.aut.image(i).abelianize()).collect();
        (0..h).map(|r| (0..h).map(|c| cols[c][r]).collect()).collect()
    }
}

/// Right-handed (`positive = true`) Dehn twist along a standard curve.
pub fn dehn_twist(c: &StandardCurve, fiber: FiberModel, positive: bool) -> Result<MappingClass, McgError> {
    c.check_on(fiber)?;
    let h = fiber.holes();
    let aut = if c.is_consecutive() {
        consecutive_twist(h, c.min(), c.max())?
    } else {
        let beta = gathering_braid(c);
        let block = consecutive_twist(h, c.min(), c.min() + c.enclosed().len() - 1)?;
        let b = artin_action(h, &beta)?;
        b.inverse().compose(&block)?.compose(&b)?
    };
    let mut framing = vec![0; h];
    for &i in c.enclosed() {
        framing[i - 1] = 1;
    }
    let t = MappingClass { aut, framing };
    Ok(if positive { t } else { t.inverse() })
}

fn consecutive_twist(rank: usize, first: usize, last: usize) -> Result<FreeAutomorphism, McgError> {
    let gamma = Word::reduce(rank, (first..=last).map(Letter::gen))?;
    let g = |i: usize| Word::generator(rank, i).expect("in range");
    let conj = |u: &Word| -> Result<Vec<Word>, McgError> {
        (1..=rank)
            .map(|i| {
                if (first..=last).contains(&i) {
                    Ok(g(i).conjugate_by(u)?)
                } else {
                    Ok(g(i))
                }
            })
            .collect()
    };
    let fwd = conj(&gamma)?;
    let bwd = conj(&gamma.inverse())?;
    Ok(FreeAutomorphism::new_unchecked(rank, fwd, bwd))
}

/// `t_{c_n} ∘ ... ∘ t_{c_1}`: the first curve is applied first.
pub fn product_of_twists<'a, I>(fiber: FiberModel, curves: I) -> Result<MappingClass, McgError>
where
    I: IntoIterator<Item = &'a StandardCurve>,
{
    let mut acc = MappingClass::identity(fiber);
    for c in curves {
        acc = dehn_twist(c, fiber, true)?.compose(&acc)?;
    }
    Ok(acc)
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.aut)?;
        let fr: Vec<String> = self.framing.iter().map(|x| x.to_string()).collect();
        write!(f, "framing ({})", fr.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> StandardCurve {
        s.parse().unwrap()
    }

    fn fib(h: usize) -> FiberModel {
        FiberModel::new(h).unwrap()
    }

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn sigma_one_formula() {
        let a = artin_action(2, &BraidWord::sigma(1, true)).unwrap();
        assert_eq!(a.image(1), &w(2, "x1x2X1"));
        assert_eq!(a.image(2), &w(2, "x1"));
        a.check_round_trip().unwrap();
        let back = artin_action(2, &BraidWord::sigma(1, true).then(&BraidWord::sigma(1, false))).unwrap();
        assert!(back.is_identity());
        assert!(matches!(artin_action(2, &BraidWord::sigma(2, true)), Err(McgError::BraidIndex { .. })));
    }

    #[test]
    fn braid_relation_rank_three() {
        let s = |i| BraidWord::sigma(i, true);
        let lhs = artin_action(3, &s(1).then(&s(2)).then(&s(1))).unwrap();
        let rhs = artin_action(3, &s(2).then(&s(1)).then(&s(2))).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_parallel_twist() {
        for h in 1..=4 {
            let t = dehn_twist(&c("{1}"), fib(h), true).unwrap();
            assert!(t.aut().is_identity());
            let mut e1 = vec![0; h];
            e1[0] = 1;
            assert_eq!(t.framing(), &e1[..]);
        }
    }

    #[test]
    fn consecutive_twist_formula() {
        let t = dehn_twist(&c("{1,2}"), fib(2), true).unwrap();
        assert_eq!(t.aut().image(1), &w(2, "x1x2x1X2X1"));
        assert_eq!(t.aut().image(2), &w(2, "x1x2x2X2X1"));
        assert_eq!(t.framing(), &[1, 1]);
        // the full twist on two strands
        assert_eq!(t.aut(), &artin_action(2, &BraidWord::sigma(1, true).then(&BraidWord::sigma(1, true))).unwrap());
    }

    #[test]
    fn lantern_relation() {
        let f = fib(3);
        let lhs = product_of_twists(f, &[c("{1,2,3}"), c("{1}"), c("{2}"), c("{3}")]).unwrap();
        let rhs = product_of_twists(f, &[c("{2,3}"), c("{1,3}"), c("{1,2}")]).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.framing(), &[2, 2, 2]);
    }

    #[test]
    fn compose_examples() {
        let f = fib(3);
        let t = dehn_twist(&c("{1,3}"), f, true).unwrap();
        assert_eq!(t.compose(&MappingClass::identity(f)).unwrap(), t);
        assert!(t.compose(&dehn_twist(&c("{1,3}"), f, false).unwrap()).unwrap().is_identity());
        let t1 = dehn_twist(&c("{1}"), f, true).unwrap();
        assert_eq!(t1.compose(&t1).unwrap().framing(), &[2, 0, 0]);
        assert_ne!(t, dehn_twist(&c("{2}"), f, true).unwrap());
    }

    #[test]
    fn twists_act_trivially_on_homology() {
        let f = fib(4);
        for cur in f.all_curves() {
            let t = dehn_twist(&cur, f, true).unwrap();
            let m = t.homology_action();
            for (i, row) in m.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    assert_eq!(x, i64::from(i == j));
                }
            }
        }
    }

    #[test]
    fn half_twist_carries_adjacent_curve() {
        // conjugating by sigma_2 carries the curve {1,2} to the standard {1,3}
        let f = fib(3);
        let s = artin_action(3, &BraidWord::sigma(2, true)).unwrap();
        let t12 = dehn_twist(&c("{1,2}"), f, true).unwrap();
        let t13 = dehn_twist(&c("{1,3}"), f, true).unwrap();
        let conj = s.compose(t12.aut()).unwrap().compose(&s.inverse()).unwrap();
        assert_eq!(&conj, t13.aut());
    }

    #[test]
    fn gathering_braid_shape() {
        assert_eq!(gathering_braid(&c("{1,3}")).to_string(), "s2^-1");
        assert_eq!(gathering_braid(&c("{1,4,6}")).to_string(), "s3^-1 s4^-1 s5^-1 s2^-1 s3^-1");
        assert!(gathering_braid(&c("{2,3}")).letters.is_empty());
    }
}
