//! Integral symmetric bilinear forms: signature, parity, bounded congruence
//! search and linking forms of nondegenerate forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, AbelianGroup, BigMatrix, IntMatrix, LinalgError, Matrix};
use crate::par;

/// Default entry bound for congruence witnesses.
pub const DEFAULT_BOUND: i64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("form is degenerate (determinant 0)")]
    Singular,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntSymForm {
    gram: IntMatrix,
}

impl IntSymForm {
    pub fn new(gram: IntMatrix) -> Result<Self, FormError> {
        if !gram.is_symmetric() {
            return Err(FormError::NotSymmetric);
        }
        Ok(IntSymForm { gram })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, FormError> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn empty() -> Self {
        IntSymForm { gram: IntMatrix::zeros(0, 0) }
    }

    /// The restriction `Bᵀ G B` of `gram` to the lattice spanned by the columns of `basis`.
    pub fn restrict(gram: &IntMatrix, basis: &BigMatrix) -> Result<Self, FormError> {
        let g = basis.transpose().mul(&gram.to_big())?.mul(basis)?;
        Self::new(g.to_int()?)
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        self.gram.det().expect("square by construction")
    }

    /// Pulls the form back along `p`: returns `Pᵀ G P`.
    pub fn transform(&self, p: &IntMatrix) -> Result<Self, FormError> {
        Self::restrict(&self.gram, &p.to_big())
    }

    /// `(positive, negative, zero)` counts of an exact rational diagonalization.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let diag = lagrange_diagonal(&self.gram);
        let pos = diag.iter().filter(|x| x.is_positive()).count();
        let neg = diag.iter().filter(|x| x.is_negative()).count();
        (pos, neg, diag.len() - pos - neg)
    }

    pub fn signature(&self) -> i64 {
        let (p, q, _) = self.inertia();
        p as i64 - q as i64
    }

    pub fn is_negative_definite(&self) -> bool {
        self.inertia().1 == self.rank()
    }

    /// Even iff every diagonal entry is even; by bilinearity this is the same
    /// as `Q(v, v)` being even for all `v`.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)] % 2 == 0)
    }

    pub fn parity(&self) -> Parity {
        if self.is_even() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `vᵀ G w`.
    pub fn pair(&self, v: &[i64], w: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &vi) in v.iter().enumerate().take(self.rank()) {
            if vi == 0 {
                continue;
            }
            for (j, &wj) in w.iter().enumerate().take(self.rank()) {
                s += vi * self.gram[(i, j)] * wj;
            }
        }
        s
    }
}

impl fmt::Display for IntSymForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 0 {
            return write!(f, "[]");
        }
        let rows: Vec<String> = self
            .gram
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Diagonal of a rational congruence diagonalization (symmetric Gaussian
/// elimination; a zero pivot is repaired by adding a partner row/column).
fn lagrange_diagonal(gram: &IntMatrix) -> Vec<BigRational> {
    let n = gram.rows();
    let mut a: Matrix<BigRational> = gram.map(|&x| BigRational::from_integer(BigInt::from(x)));
    let mut diag = Vec::with_capacity(n);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !a[(i, i)].is_zero()) {
            Some(p) => Some(p),
            None => {
                // all active diagonals vanish; look for a nonzero off-diagonal
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[(i, j)].is_zero());
                pair.map(|(i, j)| {
                    // row_i += row_j, col_i += col_j  =>  a_ii = 2 a_ij
                    for c in 0..n {
                        let v = a[(j, c)].clone();
                        a[(i, c)] += v;
                    }
                    for r in 0..n {
                        let v = a[(r, j)].clone();
                        a[(r, i)] += v;
                    }
                    i
                })
            }
        };
        let Some(p) = pivot else {
            // remaining block is zero
            diag.extend(active.iter().map(|_| BigRational::zero()));
            break;
        };
        let piv = a[(p, p)].clone();
        for &i in &active {
            if i == p || a[(i, p)].is_zero() {
                continue;
            }
            let f = a[(i, p)].clone() / &piv;
            for c in 0..n {
                let v = &a[(p, c)] * &f;
                a[(i, c)] -= v;
            }
            for r in 0..n {
                let v = &a[(r, p)] * &f;
                a[(r, i)] -= v;
            }
        }
        diag.push(piv);
        active.retain(|&i| i != p);
    }
    diag
}

/// Which invariant separated two forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Obstruction {
    Rank,
    Determinant,
    Signature,
    Parity,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Obstruction::Rank => "rank",
            Obstruction::Determinant => "determinant",
            Obstruction::Signature => "signature",
            Obstruction::Parity => "parity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Congruence {
    /// `witnessᵀ · f · witness = g` with `witness` unimodular.
    Yes { witness: IntMatrix },
    No { invariant: Obstruction },
    Unknown,
}

impl Congruence {
    pub fn is_yes(&self) -> bool {
        matches!(self, Congruence::Yes { .. })
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Congruence::Yes { .. } => write!(f, "yes"),
            Congruence::No { invariant } => write!(f, "no({invariant})"),
            Congruence::Unknown => write!(f, "unknown"),
        }
    }
}

/// First invariant (rank, determinant, signature, parity) on which `f` and `g` differ.
pub fn obstruction(f: &IntSymForm, g: &IntSymForm) -> Option<Obstruction> {
    if f.rank() != g.rank() {
        Some(Obstruction::Rank)
    } else if f.det() != g.det() {
        Some(Obstruction::Determinant)
    } else if f.signature() != g.signature() {
        Some(Obstruction::Signature)
    } else if f.parity() != g.parity() {
        Some(Obstruction::Parity)
    } else {
        None
    }
}

/// Decides `Pᵀ f P = g` for unimodular `P` with entries bounded by `bound`.
///
/// Invariant mismatches give `No`; otherwise the bounded search gives `Yes`
/// with a witness or an honest `Unknown`. The search fixes columns of `P`
/// one at a time and is deterministic in parallel mode.
pub fn congruent(f: &IntSymForm, g: &IntSymForm, bound: i64) -> Congruence {
    if let Some(invariant) = obstruction(f, g) {
        return Congruence::No { invariant };
    }
    let r = f.rank();
    if r == 0 {
        return Congruence::Yes { witness: IntMatrix::zeros(0, 0) };
    }
    if f == g {
        return Congruence::Yes { witness: IntMatrix::identity(r) };
    }
    // candidate columns grouped by the norm they realize under f
    let mut by_norm: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    let targets: Vec<i64> = (0..r).map(|i| g.gram[(i, i)]).collect();
    for v in box_vectors(r, bound) {
        let q = f.pair(&v, &v);
        if targets.contains(&q) {
            by_norm.entry(q).or_default().push(v);
        }
    }
    let Some(first) = by_norm.get(&targets[0]) else {
        return Congruence::Unknown;
    };
    let search = |v0: &Vec<i64>| {
        let mut cols = vec![v0.clone()];
        extend_columns(f, g, &by_norm, &mut cols)
    };
    match par::find_map_first(first, search) {
        Some(cols) => {
            let mut p = IntMatrix::zeros(r, r);
            for (j, c) in cols.iter().enumerate() {
                for i in 0..r {
                    p[(i, j)] = c[i];
                }
            }
            Congruence::Yes { witness: p }
        }
        None => Congruence::Unknown,
    }
}

fn extend_columns(
    f: &IntSymForm,
    g: &IntSymForm,
    by_norm: &BTreeMap<i64, Vec<Vec<i64>>>,
    cols: &mut Vec<Vec<i64>>,
) -> Option<Vec<Vec<i64>>> {
    let r = f.rank();
    let j = cols.len();
    if j == r {
        let rows: Vec<Vec<i64>> = (0..r).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let p = IntMatrix::from_rows(rows).ok()?;
        return p.det().ok().filter(|d| d.abs().is_one()).map(|_| cols.clone());
    }
    for v in by_norm.get(&g.gram[(j, j)])? {
        if (0..j).all(|i| f.pair(&cols[i], v) == g.gram[(i, j)]) {
            cols.push(v.clone());
            if let Some(done) = extend_columns(f, g, by_norm, cols) {
                return Some(done);
            }
            cols.pop();
        }
    }
    None
}

/// All nonzero vectors in `[-bound, bound]^r`, ordered by max-norm then lexicographically.
fn box_vectors(r: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(r as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut v = vec![0; r];
        for x in v.iter_mut() {
            *x = (code % side) as i64 - bound;
            code /= side;
        }
        if v.iter().any(|&x| x != 0) {
            out.push(v);
        }
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max(), v.iter().map(|x| x.abs()).sum::<i64>()));
    out
}

/// The torsion linking form `-L⁻¹ mod 1` of a nondegenerate form, presented
/// on generators of the cyclic summands of `coker L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingForm {
    pub group: AbelianGroup,
    /// `b(g_i, g_j)` in `[0, 1)` for the summand generators `g_i`.
    pub matrix: Vec<Vec<BigRational>>,
}

impl LinkingForm {
    /// `q(g_i) = b(g_i, g_i)` for each cyclic summand generator.
    pub fn self_values(&self) -> Vec<BigRational> {
        (0..self.matrix.len()).map(|i| self.matrix[i][i].clone()).collect()
    }

    /// `b(x, x)` for `x = Σ c_i g_i`, reduced mod 1.
    pub fn value(&self, coeffs: &[BigInt]) -> BigRational {
        let mut s = BigRational::zero();
        for (i, ci) in coeffs.iter().enumerate() {
            for (j, cj) in coeffs.iter().enumerate() {
                s += &self.matrix[i][j] * BigRational::from_integer(ci * cj);
            }
        }
        frac(&s)
    }

    /// Sorted multiset of `b(x, x)` over every element `x` (small groups only).
    pub fn value_multiset(&self, limit: u64) -> Option<Vec<BigRational>> {
        let order = self.group.order()?;
        if order > BigInt::from(limit) {
            return None;
        }
        let orders: Vec<u64> = self.group.torsion.iter().map(|t| t.to_u64().unwrap_or(1)).collect();
        let mut out = Vec::new();
        let mut c = vec![0u64; orders.len()];
        loop {
            let coeffs: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
            out.push(self.value(&coeffs));
            let mut i = 0;
            loop {
                if i == c.len() {
                    out.sort();
                    return Some(out);
                }
                c[i] += 1;
                if c[i] < orders[i] {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Display for LinkingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.self_values().iter().map(|q| q.to_string()).collect();
        write!(f, "{} q=[{}]", self.group, vals.join(","))
    }
}

fn frac(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

/// Exact inverse over the rationals by Gauss–Jordan elimination.
fn rational_inverse(m: &IntMatrix) -> Result<Matrix<BigRational>, FormError> {
    let n = m.rows();
    let mut a: Matrix<BigRational> = m.map(|&x| BigRational::from_integer(BigInt::from(x)));
    let mut inv: Matrix<BigRational> = Matrix::identity(n);
    for c in 0..n {
        let p = (c..n).find(|&r| !a[(r, c)].is_zero()).ok_or(FormError::Singular)?;
        a.swap_rows(c, p);
        inv.swap_rows(c, p);
        let piv = a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] = &a[(c, j)] / &piv;
            inv[(c, j)] = &inv[(c, j)] / &piv;
        }
        for r in 0..n {
            if r == c || a[(r, c)].is_zero() {
                continue;
            }
            let f = a[(r, c)].clone();
            for j in 0..n {
                let (x, y) = (&a[(c, j)] * &f, &inv[(c, j)] * &f);
                a[(r, j)] -= x;
                inv[(r, j)] -= y;
            }
        }
    }
    Ok(inv)
}

/// Linking form of a nondegenerate form `L` on `coker L`, using `-L⁻¹ mod 1`.
pub fn linking_form(form: &IntSymForm) -> Result<LinkingForm, FormError> {
    let l = form.gram();
    if form.det().is_zero() {
        return Err(FormError::Singular);
    }
    let n = l.rows();
    let snf = linalg::smith_normal_form(l);
    // U L V = D, so x ↦ U x identifies coker L with ⊕ Z/d_i; g_i = U⁻¹ e_i.
    let u_int = snf.u.to_int()?;
    let u_inv = rational_inverse(&u_int)?;
    let l_inv = rational_inverse(l)?;
    let summands: Vec<usize> = (0..n).filter(|&i| !snf.d[(i, i)].abs().is_one()).collect();
    let gens: Vec<Vec<BigRational>> = summands.iter().map(|&i| u_inv.column(i)).collect();
    let mut matrix = vec![vec![BigRational::zero(); gens.len()]; gens.len()];
    for (a, ga) in gens.iter().enumerate() {
        for (b, gb) in gens.iter().enumerate() {
            let mut s = BigRational::zero();
            for i in 0..n {
                for j in 0..n {
                    s += &ga[i] * &l_inv[(i, j)] * &gb[j];
                }
            }
            matrix[a][b] = frac(&-s);
        }
    }
    let group = AbelianGroup {
        free_rank: 0,
        torsion: summands.iter().map(|&i| snf.d[(i, i)].abs()).collect(),
    };
    Ok(LinkingForm { group, matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkingIso {
    Isomorphic,
    NotIsomorphic,
    /// Groups and value multisets agree but no exact decision was made.
    Inconclusive,
}

/// Compares two linking forms. Cyclic groups are decided exactly by searching
/// for a unit `u` with `q' = u² q`; otherwise the full value multisets are compared.
pub fn linking_forms_isomorphic(a: &LinkingForm, b: &LinkingForm) -> LinkingIso {
    if a.group != b.group {
        return LinkingIso::NotIsomorphic;
    }
    match a.group.torsion.len() {
        0 => LinkingIso::Isomorphic,
        1 => {
            let order = &a.group.torsion[0];
            let (qa, qb) = (&a.matrix[0][0], &b.matrix[0][0]);
            let mut u = BigInt::one();
            while &u < order {
                if u.gcd(order).is_one() && frac(&(qa * BigRational::from_integer(&u * &u))) == *qb {
                    return LinkingIso::Isomorphic;
                }
                u += 1;
            }
            LinkingIso::NotIsomorphic
        }
        _ => match (a.value_multiset(1 << 16), b.value_multiset(1 << 16)) {
            (Some(x), Some(y)) if x != y => LinkingIso::NotIsomorphic,
            _ => LinkingIso::Inconclusive,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(rows: Vec<Vec<i64>>) -> IntSymForm {
        IntSymForm::from_rows(rows).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn signature_examples() {
        assert_eq!(form(vec![vec![-8, 1], vec![1, -2]]).signature(), -2);
        assert_eq!(form(vec![vec![1]]).signature(), 1);
        assert_eq!(form(vec![vec![0, 0], vec![0, 0]]).signature(), 0);
        assert_eq!(form(vec![vec![0, 1], vec![1, 0]]).inertia(), (1, 1, 0));
        assert_eq!(form(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).inertia(), (1, 1, 1));
    }

    #[test]
    fn parity_examples() {
        assert!(form(vec![vec![-8, 1], vec![1, -2]]).is_even());
        assert!(!form(vec![vec![-8, -3], vec![-3, -3]]).is_even());
        assert!(form(vec![vec![0]]).is_even());
    }

    #[test]
    fn parity_matches_brute_force() {
        for g in [vec![vec![-8, 1], vec![1, -2]], vec![vec![-8, -3], vec![-3, -3]], vec![vec![2, 3], vec![3, 4]]] {
            let f = form(g);
            let brute = (-2..=2).all(|a| (-2..=2).all(|b| f.pair(&[a, b], &[a, b]) % 2 == 0));
            assert_eq!(f.is_even(), brute);
        }
    }

    #[test]
    fn a_and_b_matrices_differ_by_parity() {
        let a = form(vec![vec![-8, 1], vec![1, -2]]);
        let b = form(vec![vec![-8, -3], vec![-3, -3]]);
        assert_eq!(congruent(&a, &b, DEFAULT_BOUND), Congruence::No { invariant: Obstruction::Parity });
        assert_eq!(congruent(&b, &a, DEFAULT_BOUND), Congruence::No { invariant: Obstruction::Parity });
    }

    #[test]
    fn congruence_finds_constructed_witness() {
        let f = form(vec![vec![-8, 1], vec![1, -2]]);
        let p = IntMatrix::from_rows(vec![vec![1, 2], vec![1, 1]]).unwrap();
        let g = f.transform(&p).unwrap();
        match congruent(&f, &g, DEFAULT_BOUND) {
            Congruence::Yes { witness } => assert_eq!(f.transform(&witness).unwrap(), g),
            other => panic!("expected yes, got {other}"),
        }
        let m3 = form(vec![vec![-3]]);
        assert_eq!(congruent(&m3, &m3, 5), Congruence::Yes { witness: IntMatrix::identity(1) });
    }

    #[test]
    fn linking_form_of_a_and_b_matrices() {
        let a = linking_form(&form(vec![vec![-8, 1], vec![1, -2]])).unwrap();
        let b = linking_form(&form(vec![vec![-8, -3], vec![-3, -3]])).unwrap();
        assert_eq!(a.group.to_string(), "Z/15");
        assert_eq!(b.group.to_string(), "Z/15");
        assert_eq!(linking_forms_isomorphic(&a, &b), LinkingIso::Isomorphic);
        // -L⁻¹ = (1/15)[[2,1],[1,8]]; every generator value is u²·(2/15) or u²·(8/15)
        let v = a.self_values()[0].clone();
        let units: Vec<BigRational> = (1..15)
            .filter(|u: &i64| u.gcd(&15) == 1)
            .map(|u| frac(&(q(2, 15) * BigRational::from_integer(BigInt::from(u * u)))))
            .collect();
        assert!(units.contains(&v));
        assert!(linking_form(&form(vec![vec![-1]])).unwrap().group.is_trivial());
        assert_eq!(linking_form(&form(vec![vec![0]])), Err(FormError::Singular));
    }

    #[test]
    fn linking_form_distinguishes_lens_spaces() {
        // Z/5 with q = 1/5 vs 2/5: 2 is not a square mod 5
        let a = linking_form(&form(vec![vec![-5]])).unwrap();
        let b = linking_form(&form(vec![vec![-2, 1], vec![1, -3]])).unwrap();
        assert_eq!(a.group, b.group);
        assert_eq!(linking_forms_isomorphic(&a, &b), LinkingIso::NotIsomorphic);
    }
}
