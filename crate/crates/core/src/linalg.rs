//! Dense integer matrices, Smith normal form, integral kernels and cokernels.
//!
//! Matrix data is stored as `i64`; every elimination runs over `BigInt` so
//! intermediate growth never overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer overflow converting {0} to i64")]
    Overflow(BigInt),
    #[error("matrix is singular")]
    Singular,
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<i64>;
pub type BigMatrix = Matrix<BigInt>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Explicit shape; needed for `n × 0` and `0 × n` matrices.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension(format!("{} entries for {rows}x{cols}", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn remove_row(&mut self, r: usize) {
        self.data.drain(r * self.cols..(r + 1) * self.cols);
        self.rows -= 1;
    }

    pub fn remove_col(&mut self, c: usize) {
        let cols = self.cols;
        let mut idx = 0;
        self.data.retain(|_| {
            let keep = idx % cols != c;
            idx += 1;
            keep
        });
        self.cols -= 1;
    }

    /// Columns `range` as a new matrix.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: rows.len(), cols: cols.len(), data }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn to_big(&self) -> BigMatrix {
        self.map(|&x| BigInt::from(x))
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        self.to_big().mul(&other.to_big())?.to_int()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn det(&self) -> Result<BigInt, LinalgError> {
        self.to_big().det()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

impl BigMatrix {
    pub fn to_int(&self) -> Result<IntMatrix, LinalgError> {
        let data = self
            .data
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| LinalgError::Overflow(x.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &BigMatrix) -> Result<BigMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BigMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        Ok(out)
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<BigInt, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * a[(n - 1, n - 1)].clone())
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(source, j)] * factor;
            self[(target, j)] += v;
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, source)] * factor;
            self[(i, target)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    /// Replaces rows (a, b) by the unimodular combination
    /// `[[p, q], [r, s]] · [row_a; row_b]`.
    fn combine_rows(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = p * &x + q * &y;
            self[(b, j)] = r * &x + s * &y;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for i in 0..self.rows {
            let x = self[(i, a)].clone();
            let y = self[(i, b)].clone();
            self[(i, a)] = p * &x + q * &y;
            self[(i, b)] = r * &x + s * &y;
        }
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of [`smith_normal_form`]: `d = u · m · v` with `u`, `v` unimodular.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: BigMatrix,
    pub u: BigMatrix,
    pub v: BigMatrix,
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form by pivoting on the smallest nonzero entry.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    smith_normal_form_big(&m.to_big())
}

pub fn smith_normal_form_big(m: &BigMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = BigMatrix::identity(rows);
    let mut v = BigMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                if d[(i, t)].is_multiple_of(&d[(t, t)]) {
                    let f = -(d[(i, t)].clone() / &d[(t, t)]);
                    d.add_row_multiple(i, t, &f);
                    u.add_row_multiple(i, t, &f);
                    continue;
                }
                let (g, x, y) = ext_gcd(&d[(t, t)], &d[(i, t)]);
                let a = d[(t, t)].clone() / &g;
                let b = d[(i, t)].clone() / &g;
                // [[x, y], [-b, a]] has determinant x·a + y·b = 1
                let nb = -&b;
                d.combine_rows(t, i, &x, &y, &nb, &a);
                u.combine_rows(t, i, &x, &y, &nb, &a);
                dirty = true;
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                if d[(t, j)].is_multiple_of(&d[(t, t)]) {
                    let f = -(d[(t, j)].clone() / &d[(t, t)]);
                    d.add_col_multiple(j, t, &f);
                    v.add_col_multiple(j, t, &f);
                    continue;
                }
                let (g, x, y) = ext_gcd(&d[(t, t)], &d[(t, j)]);
                let a = d[(t, t)].clone() / &g;
                let b = d[(t, j)].clone() / &g;
                let nb = -&b;
                d.combine_cols(t, j, &x, &y, &nb, &a);
                v.combine_cols(t, j, &x, &y, &nb, &a);
                dirty = true;
            }
            if dirty {
                continue;
            }
            // divisibility: pull any entry not divisible by the pivot into row t
            let p = d[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Snf { d, u, v, rank: t }
}

/// `(g, x, y)` with `g = gcd(a, b) > 0` and `a·x + b·y = g`.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// A finitely generated abelian group `Z^free ⊕ Z/t_1 ⊕ ... ⊕ Z/t_r`
/// with `t_1 | t_2 | ...` and every `t_i > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^rows / im(m)` for `m: Z^cols -> Z^rows`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(m);
    let torsion = snf
        .invariant_factors()
        .into_iter()
        .filter(|x| !x.is_one())
        .collect();
    AbelianGroup { free_rank: m.rows() - snf.rank, torsion }
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

/// Integral kernel basis of `m` (columns), read off the Smith transform `v`.
pub fn kernel_basis_snf(m: &IntMatrix) -> BigMatrix {
    let snf = smith_normal_form(m);
    let cols: Vec<usize> = (snf.rank..m.cols()).collect();
    snf.v.select_cols(&cols)
}

/// Integral kernel basis of `m` (columns) by unimodular column reduction to
/// echelon form; independent of the Smith routine.
pub fn kernel_basis_hermite(m: &IntMatrix) -> BigMatrix {
    let mut a = m.to_big();
    let n = m.cols();
    let mut v = BigMatrix::identity(n);
    let mut pivot_col = 0;
    for r in 0..m.rows() {
        if pivot_col == n {
            break;
        }
        // gcd-combine all entries of row r in columns >= pivot_col into pivot_col
        for j in pivot_col + 1..n {
            if a[(r, j)].is_zero() {
                continue;
            }
            if a[(r, pivot_col)].is_zero() {
                a.swap_cols(pivot_col, j);
                v.swap_cols(pivot_col, j);
                continue;
            }
            if a[(r, j)].is_multiple_of(&a[(r, pivot_col)]) {
                let f = -(a[(r, j)].clone() / &a[(r, pivot_col)]);
                a.add_col_multiple(j, pivot_col, &f);
                v.add_col_multiple(j, pivot_col, &f);
                continue;
            }
            let (g, x, y) = ext_gcd(&a[(r, pivot_col)], &a[(r, j)]);
            let p = a[(r, pivot_col)].clone() / &g;
            let q = a[(r, j)].clone() / &g;
            let nq = -&q;
            a.combine_cols(pivot_col, j, &x, &y, &nq, &p);
            v.combine_cols(pivot_col, j, &x, &y, &nq, &p);
        }
        if !a[(r, pivot_col)].is_zero() {
            pivot_col += 1;
        }
    }
    let cols: Vec<usize> = (pivot_col..n).collect();
    v.select_cols(&cols)
}

/// Canonical basis of the lattice spanned by the columns of `basis`: the
/// columns of the transposed row-style Hermite normal form (first nonzero
/// coordinate of each vector positive, entries above pivots reduced).
pub fn canonical_lattice_basis(basis: &BigMatrix) -> BigMatrix {
    let mut h = basis.transpose();
    let (rows, cols) = (h.rows(), h.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_rows(r, i);
                continue;
            }
            if h[(i, c)].is_multiple_of(&h[(r, c)]) {
                let f = -(h[(i, c)].clone() / &h[(r, c)]);
                h.add_row_multiple(i, r, &f);
                continue;
            }
            let (g, x, y) = ext_gcd(&h[(r, c)], &h[(i, c)]);
            let p = h[(r, c)].clone() / &g;
            let q = h[(i, c)].clone() / &g;
            let nq = -&q;
            h.combine_rows(r, i, &x, &y, &nq, &p);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
        }
        for i in 0..r {
            let f = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &f);
        }
        r += 1;
    }
    let keep: Vec<usize> = (0..r).collect();
    h.transpose().select_cols(&keep)
}

/// Solves `a · x = b` for an integer matrix `x`, where `a` has full column
/// rank. Returns `None` when no integral solution exists.
pub fn solve_integral(a: &BigMatrix, b: &BigMatrix) -> Option<BigMatrix> {
    if a.rows() != b.rows() {
        return None;
    }
    let snf = smith_normal_form_big(a);
    if snf.rank != a.cols() {
        return None;
    }
    // u a v = d  =>  a x = b  <=>  d (v^-1 x) = u b
    let ub = snf.u.mul(b).ok()?;
    let mut y = BigMatrix::zeros(a.cols(), b.cols());
    for i in 0..a.cols() {
        for j in 0..b.cols() {
            let (q, r) = ub[(i, j)].div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[(i, j)] = q;
        }
    }
    for i in a.cols()..a.rows() {
        if (0..b.cols()).any(|j| !ub[(i, j)].is_zero()) {
            return None;
        }
    }
    snf.v.mul(&y).ok()
}

pub fn is_unimodular(m: &BigMatrix) -> bool {
    m.rows() == m.cols() && m.det().is_ok_and(|d| d.abs().is_one())
}
