//! Reduced words and automorphisms of finitely generated free groups.
//!
//! Words are kept freely reduced at all times, so equality of group
//! elements is structural equality of [`Word`]s. Automorphisms carry their
//! inverse explicitly; every constructor in this crate knows both directions.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("automorphism inverse check failed on generator x{0}")]
    NotInverse(usize),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("cannot parse word {0:?}")]
    Parse(String),
}

/// A generator `x_i` (1-based) or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(index: usize) -> Self {
        Letter { index, inverse: false }
    }

    pub fn inv(index: usize) -> Self {
        Letter { index, inverse: true }
    }

    pub fn signed(index: usize, positive: bool) -> Self {
        Letter { index, inverse: !positive }
    }

    pub fn invert(self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

/// A freely reduced word in the free group of rank `rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self, FreeGroupError> {
        Self::reduce(rank, [Letter::gen(index)])
    }

    /// Free reduction of an arbitrary letter sequence (stack based, single pass).
    pub fn reduce<I>(rank: usize, letters: I) -> Result<Self, FreeGroupError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.index == 0 || l.index > rank {
                return Err(FreeGroupError::IndexOutOfRange { index: l.index, rank });
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word, FreeGroupError> {
        if self.rank != other.rank {
            return Err(FreeGroupError::RankMismatch(self.rank, other.rank));
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Word { rank: self.rank, letters: out })
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.invert()).collect(),
        }
    }

    /// `u w u^-1`
    pub fn conjugate_by(&self, u: &Word) -> Result<Word, FreeGroupError> {
        u.concat(self)?.concat(&u.inverse())
    }

    /// Exponent sum of each generator; the image in the abelianization.
    pub fn abelianize(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for l in &self.letters {
            v[l.index - 1] += if l.inverse { -1 } else { 1 };
        }
        v
    }

    /// Parses `x1x2X1`; the empty string and `1` denote the identity.
    pub fn parse(rank: usize, s: &str) -> Result<Word, FreeGroupError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity(rank));
        }
        let bytes = s.as_bytes();
        let mut letters = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let inverse = match bytes[pos] {
                b'x' => false,
                b'X' => true,
                _ => return Err(FreeGroupError::Parse(s.to_string())),
            };
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let index: usize = s[start..pos]
                .parse()
                .map_err(|_| FreeGroupError::Parse(s.to_string()))?;
            letters.push(Letter { index, inverse });
        }
        Word::reduce(rank, letters)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&last) if last.cancels(l) => {
            out.pop();
        }
        _ => out.push(l),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{}{}", if l.inverse { 'X' } else { 'x' }, l.index)?;
        }
        Ok(())
    }
}

/// An automorphism of the free group of rank `rank`, stored with its inverse.
#[derive(Debug, Clone)]
pub struct FreeAutomorphism {
    rank: usize,
    forward: Vec<Word>,
    backward: Vec<Word>,
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        let gens: Vec<Word> = (1..=rank)
            .map(|i| Word { rank, letters: vec![Letter::gen(i)] })
            .collect();
        FreeAutomorphism { rank, forward: gens.clone(), backward: gens }
    }

    /// Builds an automorphism from generator images and the images under its
    /// inverse. Both round trips are verified on every generator.
    pub fn new(rank: usize, forward: Vec<Word>, backward: Vec<Word>) -> Result<Self, FreeGroupError> {
        for images in [&forward, &backward] {
            if images.len() != rank {
                return Err(FreeGroupError::ImageCount { expected: rank, got: images.len() });
            }
            if let Some(w) = images.iter().find(|w| w.rank != rank) {
                return Err(FreeGroupError::RankMismatch(rank, w.rank));
            }
        }
        let phi = FreeAutomorphism { rank, forward, backward };
        phi.check_round_trip()?;
        Ok(phi)
    }

    pub(crate) fn new_unchecked(rank: usize, forward: Vec<Word>, backward: Vec<Word>) -> Self {
        FreeAutomorphism { rank, forward, backward }
    }

    pub fn check_round_trip(&self) -> Result<(), FreeGroupError> {
        let inv = self.inverse();
        for i in 1..=self.rank {
            let g = Word { rank: self.rank, letters: vec![Letter::gen(i)] };
            if inv.apply(&self.apply(&g)?)? != g || self.apply(&inv.apply(&g)?)? != g {
                return Err(FreeGroupError::NotInverse(i));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn image(&self, index: usize) -> &Word {
        &self.forward[index - 1]
    }

    pub fn images(&self) -> &[Word] {
        &self.forward
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism {
            rank: self.rank,
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word, FreeGroupError> {
        if w.rank != self.rank {
            return Err(FreeGroupError::RankMismatch(self.rank, w.rank));
        }
        Ok(substitute(&self.forward, w))
    }

    /// `(phi ∘ psi)(x) = phi(psi(x))`.
    pub fn compose(&self, psi: &FreeAutomorphism) -> Result<FreeAutomorphism, FreeGroupError> {
        if self.rank != psi.rank {
            return Err(FreeGroupError::RankMismatch(self.rank, psi.rank));
        }
        let forward = psi.forward.iter().map(|w| substitute(&self.forward, w)).collect();
        let backward = self.backward.iter().map(|w| substitute(&psi.backward, w)).collect();
        Ok(FreeAutomorphism { rank: self.rank, forward, backward })
    }

    pub fn is_identity(&self) -> bool {
        self.forward
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters.len() == 1 && w.letters[0] == Letter::gen(i + 1))
    }

    /// The conjugation `x ↦ u x u^-1`.
    pub fn conjugation(u: &Word) -> FreeAutomorphism {
        let rank = u.rank;
        let ui = u.inverse();
        let gens = |c: &Word| -> Vec<Word> {
            (1..=rank)
                .map(|i| {
                    let g = Word { rank, letters: vec![Letter::gen(i)] };
                    g.conjugate_by(c).expect("same rank")
                })
                .collect()
        };
        FreeAutomorphism { rank, forward: gens(u), backward: gens(&ui) }
    }
}

fn substitute(images: &[Word], w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in &w.letters {
        let img = &images[l.index - 1];
        if l.inverse {
            for &m in img.letters.iter().rev() {
                push_reduced(&mut out, m.invert());
            }
        } else {
            for &m in &img.letters {
                push_reduced(&mut out, m);
            }
        }
    }
    Word { rank: w.rank, letters: out }
}

impl PartialEq for FreeAutomorphism {
    /// Generator-wise comparison of forward images.
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.forward == other.forward
    }
}

impl Eq for FreeAutomorphism {}

impl fmt::Display for FreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.forward.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "x{} -> {}", i + 1, w)?;
        }
        Ok(())
    }
}

impl FromStr for Letter {
    type Err = FreeGroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (inverse, rest) = match s.as_bytes().first() {
            Some(b'x') => (false, &s[1..]),
            Some(b'X') => (true, &s[1..]),
            _ => return Err(FreeGroupError::Parse(s.to_string())),
        };
        let index = rest.parse().map_err(|_| FreeGroupError::Parse(s.to_string()))?;
        Ok(Letter { index, inverse })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let r = Word::reduce(3, [Letter::gen(1), Letter::inv(1), Letter::gen(2)]).unwrap();
        assert_eq!(r, w(3, "x2"));
        assert!(Word::reduce(3, []).unwrap().is_empty());
        let r = Word::reduce(
            3,
            [Letter::gen(1), Letter::gen(2), Letter::inv(2), Letter::inv(1), Letter::gen(3)],
        )
        .unwrap();
        assert_eq!(r, w(3, "x3"));
        assert_eq!(
            Word::reduce(2, [Letter::gen(3)]),
            Err(FreeGroupError::IndexOutOfRange { index: 3, rank: 2 })
        );
    }

    #[test]
    fn concat_examples() {
        assert!(w(3, "x1").concat(&w(3, "X1")).unwrap().is_empty());
        assert_eq!(w(3, "x1").concat(&w(3, "x2")).unwrap(), w(3, "x1x2"));
        assert_eq!(w(3, "x1x2").concat(&w(3, "X2x3")).unwrap(), w(3, "x1x3"));
        assert_eq!(w(2, "x1").concat(&w(3, "x1")), Err(FreeGroupError::RankMismatch(2, 3)));
    }

    #[test]
    fn apply_examples() {
        let id = FreeAutomorphism::identity(2);
        assert_eq!(id.apply(&w(2, "x1X2x1")).unwrap(), w(2, "x1X2x1"));

        let phi = FreeAutomorphism::new(
            2,
            vec![w(2, "x1x2"), w(2, "x2")],
            vec![w(2, "x1X2"), w(2, "x2")],
        )
        .unwrap();
        assert_eq!(phi.apply(&w(2, "X1")).unwrap(), w(2, "X2X1"));

        let swap = FreeAutomorphism::new(2, vec![w(2, "x2"), w(2, "x1")], vec![w(2, "x2"), w(2, "x1")])
            .unwrap();
        assert_eq!(swap.apply(&w(2, "x1x2")).unwrap(), w(2, "x2x1"));
    }

    #[test]
    fn compose_examples() {
        let phi = FreeAutomorphism::new(
            2,
            vec![w(2, "x1x2"), w(2, "x2")],
            vec![w(2, "x1X2"), w(2, "x2")],
        )
        .unwrap();
        assert_eq!(phi.compose(&FreeAutomorphism::identity(2)).unwrap(), phi);
        assert!(phi.compose(&phi.inverse()).unwrap().is_identity());

        let u = w(3, "x1x2");
        let v = w(3, "X3x1");
        let cu = FreeAutomorphism::conjugation(&u);
        let cv = FreeAutomorphism::conjugation(&v);
        let cuv = FreeAutomorphism::conjugation(&u.concat(&v).unwrap());
        assert_eq!(cu.compose(&cv).unwrap(), cuv);
        cu.compose(&cv).unwrap().check_round_trip().unwrap();
    }

    #[test]
    fn equality_examples() {
        let c1 = FreeAutomorphism::conjugation(&w(1, "x1"));
        assert_eq!(c1, FreeAutomorphism::identity(1));
        let a = FreeAutomorphism::conjugation(&w(2, "x1"));
        let b = FreeAutomorphism::conjugation(&w(2, "x2"));
        assert_ne!(a, b);
        assert_eq!(a, a.clone());
    }

    #[test]
    fn bad_inverse_rejected() {
        let r = FreeAutomorphism::new(2, vec![w(2, "x1x2"), w(2, "x2")], vec![w(2, "x1"), w(2, "x2")]);
        assert!(matches!(r, Err(FreeGroupError::NotInverse(_))));
    }

    #[test]
    fn display_round_trip() {
        let x = w(3, "x1x2X1X3");
        assert_eq!(x.to_string(), "x1x2X1X3");
        assert_eq!(Word::parse(3, &x.to_string()).unwrap(), x);
        assert_eq!(Word::identity(2).to_string(), "1");
    }
}
