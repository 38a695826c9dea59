//! Standard simple closed curves on a disk with holes.
//!
//! Holes are numbered `1..=h` left to right along a horizontal axis. A
//! standard curve is the boundary of a regular neighborhood of the enclosed
//! holes joined by arcs that run below every skipped hole.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("empty curve")]
    Empty,
    #[error("hole index {index} outside 1..={holes}")]
    HoleOutOfRange { index: usize, holes: usize },
    #[error("fiber must have at least one hole")]
    NoHoles,
    #[error("curves live on different fibers ({0} vs {1} holes)")]
    FiberMismatch(usize, usize),
    #[error("cannot parse curve {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiberModel {
    holes: usize,
}

impl FiberModel {
    pub fn new(holes: usize) -> Result<Self, CurveError> {
        if holes == 0 {
            return Err(CurveError::NoHoles);
        }
        Ok(FiberModel { holes })
    }

    pub fn holes(&self) -> usize {
        self.holes
    }

    pub fn boundary_components(&self) -> usize {
        self.holes + 1
    }

    /// Every standard curve on this fiber, ordered by size then lexicographically.
    pub fn all_curves(&self) -> Vec<StandardCurve> {
        let h = self.holes;
        let mut out: Vec<StandardCurve> = (1u64..(1u64 << h))
            .map(|mask| StandardCurve {
                enclosed: (1..=h).filter(|i| mask & (1 << (i - 1)) != 0).collect(),
            })
            .collect();
        out.sort_by(|a, b| a.enclosed.len().cmp(&b.enclosed.len()).then(a.enclosed.cmp(&b.enclosed)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StandardCurve {
    enclosed: Vec<usize>,
}

impl StandardCurve {
    /// Sorts and deduplicates the hole set; rejects the empty set and index 0.
    pub fn new<I: IntoIterator<Item = usize>>(holes: I) -> Result<Self, CurveError> {
        let mut enclosed: Vec<usize> = holes.into_iter().collect();
        enclosed.sort_unstable();
        enclosed.dedup();
        if enclosed.is_empty() {
            return Err(CurveError::Empty);
        }
        if enclosed[0] == 0 {
            return Err(CurveError::HoleOutOfRange { index: 0, holes: 0 });
        }
        Ok(StandardCurve { enclosed })
    }

    pub fn interval(first: usize, last: usize) -> Result<Self, CurveError> {
        Self::new(first..=last)
    }

    pub fn enclosed(&self) -> &[usize] {
        &self.enclosed
    }

    pub fn min(&self) -> usize {
        self.enclosed[0]
    }

    pub fn max(&self) -> usize {
        *self.enclosed.last().expect("nonempty")
    }

    pub fn contains(&self, hole: usize) -> bool {
        self.enclosed.binary_search(&hole).is_ok()
    }

    pub fn is_consecutive(&self) -> bool {
        self.max() - self.min() + 1 == self.enclosed.len()
    }

    pub fn check_on(&self, fiber: FiberModel) -> Result<(), CurveError> {
        let m = self.max();
        if m > fiber.holes {
            return Err(CurveError::HoleOutOfRange { index: m, holes: fiber.holes });
        }
        Ok(())
    }

    /// Indicator vector of the enclosed holes in the basis of hole classes.
    pub fn homology_class(&self, fiber: FiberModel) -> Result<Vec<i64>, CurveError> {
        self.check_on(fiber)?;
        let mut v = vec![0; fiber.holes];
        for &i in &self.enclosed {
            v[i - 1] = 1;
        }
        Ok(v)
    }

    /// Skipped holes strictly between consecutive enclosed holes, as gaps.
    fn gaps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.enclosed.windows(2).map(|w| (w[0], w[1]))
    }

    /// One-sided disjointness test under the arcs-below convention: `true`
    /// guarantees disjoint representatives, `false` is inconclusive in general.
    pub fn disjoint(&self, other: &StandardCurve, fiber: FiberModel) -> Result<bool, CurveError> {
        self.check_on(fiber)?;
        other.check_on(fiber)?;
        let sub = |a: &StandardCurve, b: &StandardCurve| a.enclosed.iter().all(|&i| b.contains(i));
        if sub(self, other) || sub(other, self) {
            return Ok(true);
        }
        if self.enclosed.iter().any(|&i| other.contains(i)) {
            return Ok(false);
        }
        if self.max() < other.min() || other.max() < self.min() {
            return Ok(true);
        }
        // Disjoint hole sets with overlapping ranges: the inner curve must sit
        // inside a single gap of the outer one, where the outer arc runs below it.
        let inside_gap = |inner: &StandardCurve, outer: &StandardCurve| {
            outer.gaps().any(|(lo, hi)| lo < inner.min() && inner.max() < hi)
        };
        Ok(inside_gap(self, other) || inside_gap(other, self))
    }
}

/// Allowability of a curve given as a raw hole list (e.g. from a file):
/// the empty list is a validation error rather than `false`.
pub fn is_allowable(holes: &[usize], fiber: FiberModel) -> Result<bool, CurveError> {
    let c = StandardCurve::new(holes.iter().copied())?;
    Ok(c.homology_class(fiber)?.iter().any(|&x| x != 0))
}

impl fmt::Display for StandardCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, h) in self.enclosed.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for StandardCurve {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| CurveError::Parse(s.to_string()))?;
        if inner.trim().is_empty() {
            return Err(CurveError::Empty);
        }
        let holes = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| CurveError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        StandardCurve::new(holes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> StandardCurve {
        s.parse().unwrap()
    }

    #[test]
    fn homology_class_examples() {
        let f3 = FiberModel::new(3).unwrap();
        assert_eq!(c("{1}").homology_class(f3).unwrap(), vec![1, 0, 0]);
        assert_eq!(c("{1,2,3}").homology_class(f3).unwrap(), vec![1, 1, 1]);
        let f4 = FiberModel::new(4).unwrap();
        assert_eq!(c("{1,3}").homology_class(f4).unwrap(), vec![1, 0, 1, 0]);
        assert_eq!(
            c("{4}").homology_class(f3),
            Err(CurveError::HoleOutOfRange { index: 4, holes: 3 })
        );
    }

    #[test]
    fn allowability() {
        let f2 = FiberModel::new(2).unwrap();
        assert!(is_allowable(&[2], f2).unwrap());
        assert!(is_allowable(&[1, 2], f2).unwrap());
        assert_eq!(is_allowable(&[], f2), Err(CurveError::Empty));
        assert_eq!("{}".parse::<StandardCurve>(), Err(CurveError::Empty));
    }

    #[test]
    fn disjointness_examples() {
        let f2 = FiberModel::new(2).unwrap();
        assert!(c("{1}").disjoint(&c("{2}"), f2).unwrap());
        assert!(c("{1,2}").disjoint(&c("{1}"), f2).unwrap());
        // a single-hole curve is boundary parallel and misses the arc below it
        let f3 = FiberModel::new(3).unwrap();
        assert!(c("{1,3}").disjoint(&c("{2}"), f3).unwrap());
        let f4 = FiberModel::new(4).unwrap();
        assert!(!c("{1,3}").disjoint(&c("{2,4}"), f4).unwrap());
        let f6 = FiberModel::new(6).unwrap();
        assert!(c("{1,6}").disjoint(&c("{3,5}"), f6).unwrap());
        assert!(!c("{1,4}").disjoint(&c("{3,5}"), f6).unwrap());
        assert!(!c("{1,2}").disjoint(&c("{2,3}"), f6).unwrap());
    }

    #[test]
    fn parse_canonicalizes() {
        assert_eq!(c("{3,1}").to_string(), "{1,3}");
        assert_eq!(c(" { 2 , 2 ,1 } ").to_string(), "{1,2}");
        assert!("1,2".parse::<StandardCurve>().is_err());
    }

    #[test]
    fn all_curves_count() {
        let f = FiberModel::new(4).unwrap();
        let all = f.all_curves();
        assert_eq!(all.len(), 15);
        assert_eq!(all[0], c("{1}"));
        assert_eq!(all[14], c("{1,2,3,4}"));
    }
}
