//! Matrix-level Kirby diagrams: dotted circles (1-handles) and framed
//! 2-handles, the standard moves, and invariants of the 4-manifold and its
//! boundary.
//!
//! A diagram stores the symmetric linking matrix `L` of its 2-handles (framings
//! on the diagonal) and the incidence matrix `N` (`N[j][i]` = linking of handle
//! `j` with dotted circle `i`). Matrix data cannot certify geometric facts, so
//! every (handle, dotted circle) pair also carries an optional upper bound on
//! how often the handle crosses the circle's spanning disk. A pair may be
//! cancelled only when that bound is exactly one.
//!
//! Handle and dotted-circle indices in [`Move`] are 1-based, as in scripts.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{IntSymForm, Parity};
use crate::linalg::{self, AbelianGroup, IntMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KirbyError {
    #[error("inconsistent diagram: {0}")]
    Shape(String),
    #[error("handle {index} out of range (diagram has {count} handles)")]
    HandleIndex { index: usize, count: usize },
    #[error("dotted circle {index} out of range (diagram has {count} dotted circles)")]
    DottedIndex { index: usize, count: usize },
    #[error("{mv}: {reason}")]
    Precondition { mv: String, reason: String },
    #[error("integer overflow while applying {0}")]
    Overflow(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Upper bound on the geometric intersection of a 2-handle with the spanning
/// disk of a dotted circle; `None` when nothing is known.
pub type GeoBound = Option<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KirbyDiagram {
    dotted: usize,
    linking: IntMatrix,
    incidence: IntMatrix,
    bounds: Vec<Vec<GeoBound>>,
}

impl KirbyDiagram {
    pub fn empty() -> Self {
        KirbyDiagram {
            dotted: 0,
            linking: IntMatrix::zeros(0, 0),
            incidence: IntMatrix::zeros(0, 0),
            bounds: Vec::new(),
        }
    }

    /// Builds a diagram with no geometric information.
    pub fn new(dotted: usize, linking: IntMatrix, incidence: IntMatrix) -> Result<Self, KirbyError> {
        let k = linking.rows();
        if linking.cols() != k {
            return Err(KirbyError::Shape("linking matrix is not square".into()));
        }
        if !linking.is_symmetric() {
            return Err(KirbyError::Shape("linking matrix is not symmetric".into()));
        }
        if incidence.rows() != k || incidence.cols() != dotted {
            return Err(KirbyError::Shape(format!(
                "incidence matrix is {}x{}, expected {k}x{dotted}",
                incidence.rows(),
                incidence.cols()
            )));
        }
        Ok(KirbyDiagram { dotted, linking, incidence, bounds: vec![vec![None; dotted]; k] })
    }

    /// Records a geometric bound for a pair (1-based indices). The bound must
    /// dominate the algebraic linking and share its parity.
    pub fn set_bound(&mut self, handle: usize, dotted: usize, bound: GeoBound) -> Result<(), KirbyError> {
        let (j, i) = (self.handle_index(handle)?, self.dotted_index(dotted)?);
        if let Some(b) = bound {
            let n = self.incidence[(j, i)].unsigned_abs();
            if n > u64::from(b) || !(u64::from(b) - n).is_multiple_of(2) {
                return Err(KirbyError::Shape(format!(
                    "handle {handle} links dotted circle {dotted} algebraically {} times; geometric bound {b} is impossible",
                    self.incidence[(j, i)]
                )));
            }
        }
        self.bounds[j][i] = bound;
        Ok(())
    }

    pub fn dotted(&self) -> usize {
        self.dotted
    }

    pub fn handles(&self) -> usize {
        self.linking.rows()
    }

    pub fn linking(&self) -> &IntMatrix {
        &self.linking
    }

    pub fn incidence(&self) -> &IntMatrix {
        &self.incidence
    }

    pub fn framings(&self) -> Vec<i64> {
        (0..self.handles()).map(|j| self.linking[(j, j)]).collect()
    }

    /// Bound for a pair, 1-based.
    pub fn bound(&self, handle: usize, dotted: usize) -> GeoBound {
        self.bounds[handle - 1][dotted - 1]
    }

    pub fn bounds(&self) -> &[Vec<GeoBound>] {
        &self.bounds
    }

    /// True when the pair is certified to meet geometrically exactly once.
    pub fn geometric_linking_one(&self, handle: usize, dotted: usize) -> bool {
        self.bound(handle, dotted) == Some(1) && self.incidence[(handle - 1, dotted - 1)].abs() == 1
    }

    fn handle_index(&self, handle: usize) -> Result<usize, KirbyError> {
        if handle == 0 || handle > self.handles() {
            return Err(KirbyError::HandleIndex { index: handle, count: self.handles() });
        }
        Ok(handle - 1)
    }

    fn dotted_index(&self, dotted: usize) -> Result<usize, KirbyError> {
        if dotted == 0 || dotted > self.dotted {
            return Err(KirbyError::DottedIndex { index: dotted, count: self.dotted });
        }
        Ok(dotted - 1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        1 - self.dotted as i64 + self.handles() as i64
    }

    /// Integral basis (columns) of the handle-coefficient vectors `c` with `Nᵀc = 0`.
    pub fn kernel_basis(&self) -> linalg::BigMatrix {
        linalg::canonical_lattice_basis(&linalg::kernel_basis_snf(&self.incidence.transpose()))
    }

    pub fn intersection_form(&self) -> Result<IntSymForm, KirbyError> {
        IntSymForm::restrict(&self.linking, &self.kernel_basis()).map_err(|e| KirbyError::Shape(e.to_string()))
    }

    /// The symmetric `(k+d)×(k+d)` surgery matrix with dots read as 0-framed unknots.
    pub fn boundary_matrix(&self) -> IntMatrix {
        let (k, d) = (self.handles(), self.dotted);
        let mut m = IntMatrix::zeros(k + d, k + d);
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] = self.linking[(a, b)];
            }
            for i in 0..d {
                m[(a, k + i)] = self.incidence[(a, i)];
                m[(k + i, a)] = self.incidence[(a, i)];
            }
        }
        m
    }

    pub fn invariants(&self) -> Result<KirbyInvariants, KirbyError> {
        let form = self.intersection_form()?;
        Ok(KirbyInvariants {
            chi: self.euler_characteristic(),
            h1: linalg::cokernel(&self.incidence.transpose()),
            b2: form.rank(),
            parity: form.parity(),
            signature: form.signature(),
            boundary_h1: linalg::cokernel(&self.boundary_matrix()),
            form,
        })
    }

    /// Applies one move, returning the new diagram and the data needed to
    /// check that the move preserved the invariants it should.
    pub fn apply(&self, mv: &Move) -> Result<(KirbyDiagram, Transport), KirbyError> {
        match *mv {
            Move::Slide { handle, over, positive } => self.slide(handle, over, positive, mv),
            Move::SlideUnder { handle, dotted, positive } => self.slide_under(handle, dotted, positive, mv),
            Move::Cancel { handle, dotted } => self.cancel_pair(handle, dotted, mv),
            Move::AddPair => Ok(self.add_cancelling_pair()),
            Move::BlowUp { positive } => Ok(self.blow_up(positive)),
            Move::BlowDown { handle } => self.blow_down(handle, mv),
        }
    }

    /// Replaces handle `handle` by its band sum with `over` (sign `±`).
    fn slide(&self, handle: usize, over: usize, positive: bool, mv: &Move) -> Result<(KirbyDiagram, Transport), KirbyError> {
        let (m, j) = (self.handle_index(handle)?, self.handle_index(over)?);
        if m == j {
            return Err(precondition(mv, "a handle cannot slide over itself"));
        }
        let s = if positive { 1 } else { -1 };
        let mut out = self.clone();
        out.add_handle_multiple(m, j, s).ok_or_else(|| KirbyError::Overflow(mv.to_string()))?;
        for y in 0..self.dotted {
            out.bounds[m][y] = add_bounds(self.bounds[m][y], self.bounds[j][y], 1);
        }
        let mut t = IntMatrix::identity(self.handles());
        t[(j, m)] = s;
        Ok((out, Transport::plain(t)))
    }

    /// `L ← L + t(e_m L_j + L_j e_m) + t² L_jj e_m e_m`, `N_m ← N_m + t N_j`.
    fn add_handle_multiple(&mut self, m: usize, j: usize, t: i64) -> Option<()> {
        let k = self.handles();
        let ljj = self.linking[(j, j)];
        let lmj = self.linking[(m, j)];
        let new_mm = self.linking[(m, m)]
            .checked_add(2i64.checked_mul(t)?.checked_mul(lmj)?)?
            .checked_add(t.checked_mul(t)?.checked_mul(ljj)?)?;
        for c in 0..k {
            if c == m {
                continue;
            }
            let v = self.linking[(m, c)].checked_add(t.checked_mul(self.linking[(j, c)])?)?;
            self.linking[(m, c)] = v;
            self.linking[(c, m)] = v;
        }
        self.linking[(m, m)] = new_mm;
        for y in 0..self.dotted {
            self.incidence[(m, y)] = self.incidence[(m, y)].checked_add(t.checked_mul(self.incidence[(j, y)])?)?;
        }
        Some(())
    }

    /// Slides a 2-handle over a 1-handle: the band sum with a parallel copy of
    /// the dotted circle, treated as a 0-framed unknot unlinked from the other
    /// dotted circles. The incidence row is unchanged.
    fn slide_under(&self, handle: usize, dotted: usize, positive: bool, mv: &Move) -> Result<(KirbyDiagram, Transport), KirbyError> {
        let (m, x) = (self.handle_index(handle)?, self.dotted_index(dotted)?);
        let s: i64 = if positive { 1 } else { -1 };
        let mut out = self.clone();
        let overflow = || KirbyError::Overflow(mv.to_string());
        for c in 0..self.handles() {
            let delta = s * self.incidence[(c, x)] * if c == m { 2 } else { 1 };
            let v = out.linking[(m, c)].checked_add(delta).ok_or_else(overflow)?;
            out.linking[(m, c)] = v;
            out.linking[(c, m)] = v;
        }
        // the 0-framed pushoff of a dotted circle misses every spanning disk
        // (the disks are disjoint), and the band can avoid them, so bounds are kept
        Ok((out, Transport::plain(IntMatrix::identity(self.handles()))))
    }

    /// Cancels dotted circle `dotted` against handle `handle`: every other
    /// handle is first slid off the dotted circle over `handle`, then both are erased.
    fn cancel_pair(&self, handle: usize, dotted: usize, mv: &Move) -> Result<(KirbyDiagram, Transport), KirbyError> {
        let (j, i) = (self.handle_index(handle)?, self.dotted_index(dotted)?);
        let n = self.incidence[(j, i)];
        if n.abs() != 1 {
            return Err(precondition(mv, &format!("handle {handle} links dotted circle {dotted} algebraically {n} times, not ±1")));
        }
        if self.bounds[j][i] != Some(1) {
            return Err(precondition(
                mv,
                &format!("handle {handle} links dotted circle {dotted} algebraically once but is not certified to cross it geometrically once (missing `tag geo {handle} {dotted}`)"),
            ));
        }
        let k = self.handles();
        let mut work = self.clone();
        let mut t = IntMatrix::identity(k);
        for m in 0..k {
            if m == j {
                continue;
            }
            let mult = -self.incidence[(m, i)] * n;
            if mult != 0 {
                work.add_handle_multiple(m, j, mult).ok_or_else(|| KirbyError::Overflow(mv.to_string()))?;
                t[(j, m)] = mult;
            }
            let g = self.bounds[m][i];
            for y in 0..self.dotted {
                if y == i {
                    continue;
                }
                work.bounds[m][y] = match g {
                    Some(g) => add_bounds(self.bounds[m][y], self.bounds[j][y], g),
                    None if self.bounds[j][y] == Some(0) => self.bounds[m][y],
                    None => None,
                };
            }
        }
        work.remove_handle(j);
        work.remove_dotted(i);
        t.remove_col(j);
        Ok((work, Transport::plain(t)))
    }

    fn remove_handle(&mut self, j: usize) {
        self.linking.remove_row(j);
        self.linking.remove_col(j);
        self.incidence.remove_row(j);
        self.bounds.remove(j);
    }

    fn remove_dotted(&mut self, i: usize) {
        self.incidence.remove_col(i);
        for row in &mut self.bounds {
            row.remove(i);
        }
        self.dotted -= 1;
    }

    /// Appends an isolated handle with the given framing and incidence row.
    fn push_handle(&mut self, framing: i64) {
        let k = self.handles();
        let mut l = IntMatrix::zeros(k + 1, k + 1);
        let mut n = IntMatrix::zeros(k + 1, self.dotted);
        for a in 0..k {
            for b in 0..k {
                l[(a, b)] = self.linking[(a, b)];
            }
            for y in 0..self.dotted {
                n[(a, y)] = self.incidence[(a, y)];
            }
        }
        l[(k, k)] = framing;
        self.linking = l;
        self.incidence = n;
        self.bounds.push(vec![Some(0); self.dotted]);
    }

    /// Inserts an isolated handle at position `j` (0-based).
    fn insert_handle(&self, j: usize, framing: i64) -> KirbyDiagram {
        let mut out = self.clone();
        out.push_handle(framing);
        let k = out.handles();
        // rotate the appended handle into place
        let mut order: Vec<usize> = (0..k - 1).collect();
        order.insert(j, k - 1);
        let all: Vec<usize> = (0..out.dotted).collect();
        KirbyDiagram {
            dotted: out.dotted,
            linking: out.linking.select(&order, &order),
            incidence: out.incidence.select(&order, &all),
            bounds: order.iter().map(|&r| out.bounds[r].clone()).collect(),
        }
    }

    pub fn add_cancelling_pair(&self) -> (KirbyDiagram, Transport) {
        let k = self.handles();
        let mut out = self.clone();
        out.dotted += 1;
        let mut n = IntMatrix::zeros(k, self.dotted + 1);
        for a in 0..k {
            for y in 0..self.dotted {
                n[(a, y)] = self.incidence[(a, y)];
            }
        }
        out.incidence = n;
        for row in &mut out.bounds {
            row.push(Some(0));
        }
        out.push_handle(0);
        out.incidence[(k, self.dotted)] = 1;
        out.bounds[k][self.dotted] = Some(1);
        // new coordinates map to old ones by forgetting the new handle
        let mut t = IntMatrix::zeros(k, k + 1);
        for a in 0..k {
            t[(a, a)] = 1;
        }
        (out, Transport::plain(t))
    }

    pub fn blow_up(&self, positive: bool) -> (KirbyDiagram, Transport) {
        let mut out = self.clone();
        out.push_handle(if positive { 1 } else { -1 });
        let k = out.handles();
        (out, Transport { map: IntMatrix::identity(k), blow: Blow::Up { positive } })
    }

    /// Removes a ±1-framed handle that is unlinked from every dotted circle,
    /// after sliding the other handles off it.
    fn blow_down(&self, handle: usize, mv: &Move) -> Result<(KirbyDiagram, Transport), KirbyError> {
        let j = self.handle_index(handle)?;
        let f = self.linking[(j, j)];
        if f.abs() != 1 {
            return Err(precondition(mv, &format!("handle {handle} has framing {f}, not ±1")));
        }
        if let Some(y) = (0..self.dotted).find(|&y| self.bounds[j][y] != Some(0)) {
            return Err(precondition(
                mv,
                &format!("handle {handle} is not certified disjoint from dotted circle {}", y + 1),
            ));
        }
        let k = self.handles();
        let mut work = self.clone();
        let mut t = IntMatrix::identity(k);
        for m in 0..k {
            if m == j {
                continue;
            }
            let mult = -self.linking[(m, j)] * f;
            if mult != 0 {
                work.add_handle_multiple(m, j, mult).ok_or_else(|| KirbyError::Overflow(mv.to_string()))?;
                t[(j, m)] = mult;
            }
        }
        work.remove_handle(j);
        Ok((work, Transport { map: t, blow: Blow::Down { index: j, positive: f > 0 } }))
    }
}

fn add_bounds(a: GeoBound, b: GeoBound, times: u32) -> GeoBound {
    match (a, b) {
        (Some(a), Some(b)) => a.checked_add(b.checked_mul(times)?),
        (Some(a), None) if times == 0 => Some(a),
        _ => None,
    }
}

fn precondition(mv: &Move, reason: &str) -> KirbyError {
    KirbyError::Precondition { mv: mv.to_string(), reason: reason.to_string() }
}

/// How the handle lattice of a move's output sits inside that of its input.
///
/// `map` sends coefficient vectors of the output handles (with an extra
/// isolated handle re-inserted for a blow-down) to coefficient vectors of the
/// input handles (with the new isolated handle appended for a blow-up).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transport {
    pub map: IntMatrix,
    pub blow: Blow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blow {
    None,
    Up { positive: bool },
    Down { index: usize, positive: bool },
}

impl Transport {
    fn plain(map: IntMatrix) -> Self {
        Transport { map, blow: Blow::None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    Slide { handle: usize, over: usize, positive: bool },
    SlideUnder { handle: usize, dotted: usize, positive: bool },
    Cancel { handle: usize, dotted: usize },
    AddPair,
    BlowUp { positive: bool },
    BlowDown { handle: usize },
}

impl Move {
    /// Change of Euler characteristic caused by the move.
    pub fn chi_delta(&self) -> i64 {
        match self {
            Move::BlowUp { .. } => 1,
            Move::BlowDown { .. } => -1,
            _ => 0,
        }
    }
}

fn sign_char(positive: bool) -> char {
    if positive {
        '+'
    } else {
        '-'
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::Slide { handle, over, positive } => write!(f, "slide {handle} over {over} {}", sign_char(positive)),
            Move::SlideUnder { handle, dotted, positive } => {
                write!(f, "slide {handle} under {dotted} {}", sign_char(positive))
            }
            Move::Cancel { handle, dotted } => write!(f, "cancel {handle} with {dotted}"),
            Move::AddPair => write!(f, "pair+"),
            Move::BlowUp { positive } => write!(f, "blowup {}", sign_char(positive)),
            Move::BlowDown { handle } => write!(f, "blowdown {handle}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MoveScript {
    pub moves: Vec<Move>,
}

impl MoveScript {
    pub fn new(moves: Vec<Move>) -> Self {
        MoveScript { moves }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KirbyInvariants {
    pub chi: i64,
    pub h1: AbelianGroup,
    pub b2: usize,
    pub form: IntSymForm,
    pub parity: Parity,
    pub signature: i64,
    pub boundary_h1: AbelianGroup,
}

impl KirbyInvariants {
    /// Torsion part of `H1`.
    pub fn torsion(&self) -> &[num_bigint::BigInt] {
        &self.h1.torsion
    }
}

/// Checks that a move's output is related to its input as the move requires:
/// Euler characteristic shifted by the move's delta, equal `H1` and boundary
/// `H1`, and an exact unimodular witness carrying one intersection form to the
/// other (after splitting off the `⟨±1⟩` summand of a blow-up or blow-down).
pub fn verify_move(before: &KirbyDiagram, after: &KirbyDiagram, transport: &Transport, chi_delta: i64) -> Result<(), String> {
    let expect_chi = before.euler_characteristic() + chi_delta;
    if after.euler_characteristic() != expect_chi {
        return Err(format!("Euler characteristic {} (expected {expect_chi})", after.euler_characteristic()));
    }
    let h_before = linalg::cokernel(&before.incidence.transpose());
    let h_after = linalg::cokernel(&after.incidence.transpose());
    if h_before != h_after {
        return Err(format!("H1 changed from {h_before} to {h_after}"));
    }
    let bd_before = linalg::cokernel(&before.boundary_matrix());
    let bd_after = linalg::cokernel(&after.boundary_matrix());
    if bd_before != bd_after {
        return Err(format!("boundary H1 changed from {bd_before} to {bd_after}"));
    }
    let (x, y) = match transport.blow {
        Blow::None => (before.clone(), after.clone()),
        Blow::Up { positive } => {
            let mut x = before.clone();
            x.push_handle(if positive { 1 } else { -1 });
            (x, after.clone())
        }
        Blow::Down { index, positive } => (before.clone(), after.insert_handle(index, if positive { 1 } else { -1 })),
    };
    form_witness(&x, &y, &transport.map).map(|_| ())
}

/// Finds the unimodular `P` with `K_x P = T K_y` and checks `Pᵀ F_x P = F_y`.
pub fn form_witness(x: &KirbyDiagram, y: &KirbyDiagram, t: &IntMatrix) -> Result<IntMatrix, String> {
    let kx = x.kernel_basis();
    let ky = y.kernel_basis();
    if kx.cols() != ky.cols() {
        return Err(format!("b2 changed from {} to {}", kx.cols(), ky.cols()));
    }
    let rhs = t.to_big().mul(&ky).map_err(|e| e.to_string())?;
    let p = linalg::solve_integral(&kx, &rhs).ok_or("handle lattice not carried onto itself")?;
    if !linalg::is_unimodular(&p) {
        return Err("transport of intersection lattices is not unimodular".into());
    }
    let p = p.to_int().map_err(|e| e.to_string())?;
    let fx = x.intersection_form().map_err(|e| e.to_string())?;
    let fy = y.intersection_form().map_err(|e| e.to_string())?;
    let pulled = fx.transform(&p).map_err(|e| e.to_string())?;
    if pulled != fy {
        return Err(format!("intersection form {fy} is not the transport {pulled} of {fx}"));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: String,
    pub dotted: usize,
    pub handles: usize,
    pub form: String,
}

#[derive(Debug, Clone)]
pub struct ScriptRun {
    pub result: KirbyDiagram,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    /// A move's precondition failed (CLI exit code 2).
    #[error("step {step} ({mv}): {source}")]
    Precondition { step: usize, mv: String, source: KirbyError },
    /// A move broke an invariant it must preserve (CLI exit code 3).
    #[error("step {step} ({mv}): invariant violated: {reason}")]
    Violation { step: usize, mv: String, reason: String },
}

impl ScriptError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScriptError::Precondition { .. } => 2,
            ScriptError::Violation { .. } => 3,
        }
    }
}

/// Runs a script, checking every move against [`verify_move`]. Steps are 1-based.
pub fn run_script(dgm: &KirbyDiagram, script: &MoveScript) -> Result<ScriptRun, ScriptError> {
    let mut current = dgm.clone();
    let mut trace = Vec::with_capacity(script.moves.len());
    for (idx, mv) in script.moves.iter().enumerate() {
        let step = idx + 1;
        let (next, transport) = current
            .apply(mv)
            .map_err(|source| ScriptError::Precondition { step, mv: mv.to_string(), source })?;
        verify_move(&current, &next, &transport, mv.chi_delta())
            .map_err(|reason| ScriptError::Violation { step, mv: mv.to_string(), reason })?;
        let form = next
            .intersection_form()
            .map(|f| f.to_string())
            .map_err(|e| ScriptError::Violation { step, mv: mv.to_string(), reason: e.to_string() })?;
        trace.push(TraceStep { step, mv: mv.to_string(), dotted: next.dotted(), handles: next.handles(), form });
        current = next;
    }
    Ok(ScriptRun { result: current, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dgm(d: usize, l: Vec<Vec<i64>>, n: Vec<Vec<i64>>) -> KirbyDiagram {
        let k = l.len();
        let n = if n.is_empty() { IntMatrix::zeros(k, d) } else { IntMatrix::from_rows(n).unwrap() };
        KirbyDiagram::new(d, IntMatrix::from_rows(l).unwrap_or(IntMatrix::zeros(0, 0)), n).unwrap()
    }

    fn apply(d: &KirbyDiagram, mv: Move) -> KirbyDiagram {
        let (out, t) = d.apply(&mv).unwrap();
        verify_move(d, &out, &t, mv.chi_delta()).unwrap();
        out
    }

    #[test]
    fn slide_formula() {
        let d = dgm(2, vec![vec![-1, 0], vec![0, -1]], vec![vec![1, 0], vec![0, 1]]);
        let s = apply(&d, Move::Slide { handle: 1, over: 2, positive: true });
        assert_eq!(s.linking().to_rows(), vec![vec![-2, -1], vec![-1, -1]]);
        assert_eq!(s.incidence().to_rows(), vec![vec![1, 1], vec![0, 1]]);
        let back = apply(&s, Move::Slide { handle: 1, over: 2, positive: false });
        assert_eq!(back, d);
    }

    #[test]
    fn cancel_standard_pair() {
        let mut d = dgm(1, vec![vec![0]], vec![vec![1]]);
        let err = d.apply(&Move::Cancel { handle: 1, dotted: 1 }).unwrap_err();
        assert!(matches!(err, KirbyError::Precondition { .. }));
        assert!(err.to_string().contains("algebraically once"));
        d.set_bound(1, 1, Some(1)).unwrap();
        assert_eq!(apply(&d, Move::Cancel { handle: 1, dotted: 1 }), KirbyDiagram::empty());
    }

    #[test]
    fn pair_round_trip() {
        let d = dgm(0, vec![vec![-8, 1], vec![1, -2]], vec![]);
        let p = apply(&d, Move::AddPair);
        assert_eq!((p.dotted(), p.handles()), (1, 3));
        assert_eq!(p.invariants().unwrap().form, d.invariants().unwrap().form);
        assert_eq!(apply(&p, Move::Cancel { handle: 3, dotted: 1 }), d);
        let e = apply(&KirbyDiagram::empty(), Move::AddPair);
        let inv = e.invariants().unwrap();
        assert_eq!((inv.chi, inv.b2), (1, 0));
        assert!(inv.h1.is_trivial());
    }

    #[test]
    fn blow_up_and_down() {
        let up = apply(&KirbyDiagram::empty(), Move::BlowUp { positive: true });
        assert_eq!(up.linking().to_rows(), vec![vec![1]]);
        let m1 = dgm(0, vec![vec![-1]], vec![]);
        assert_eq!(apply(&m1, Move::BlowDown { handle: 1 }), KirbyDiagram::empty());
        let d = dgm(0, vec![vec![-3, 2], vec![2, -2]], vec![]);
        let u = apply(&d, Move::BlowUp { positive: false });
        assert_eq!(apply(&u, Move::BlowDown { handle: 3 }), d);
        // linked -1 handle: the engine slides the other handle off first
        let linked = dgm(0, vec![vec![-3, 1], vec![1, -1]], vec![]);
        let down = apply(&linked, Move::BlowDown { handle: 2 });
        assert_eq!(down.linking().to_rows(), vec![vec![-2]]);
    }

    #[test]
    fn reduced_a_and_b_forms() {
        let a = dgm(0, vec![vec![-8, 1], vec![1, -2]], vec![]).invariants().unwrap();
        assert_eq!((a.b2, a.parity, a.signature), (2, Parity::Even, -2));
        assert_eq!(a.boundary_h1.to_string(), "Z/15");
        let b = dgm(0, vec![vec![-8, -3], vec![-3, -3]], vec![]).invariants().unwrap();
        assert_eq!((b.parity, b.signature), (Parity::Odd, -2));
        assert_eq!(b.boundary_h1.to_string(), "Z/15");
    }

    #[test]
    fn slide_under_preserves_form() {
        let d = dgm(1, vec![vec![0, 1], vec![1, -1]], vec![vec![2], vec![1]]);
        let s = apply(&d, Move::SlideUnder { handle: 1, dotted: 1, positive: false });
        assert_eq!(s.linking().to_rows(), vec![vec![-4, 0], vec![0, -1]]);
    }

    #[test]
    fn empty_script_is_identity() {
        let d = dgm(1, vec![vec![-1]], vec![vec![1]]);
        assert_eq!(run_script(&d, &MoveScript::default()).unwrap().result, d);
    }

    #[test]
    fn script_reports_failing_step() {
        let d = dgm(1, vec![vec![-1]], vec![vec![1]]);
        let s = MoveScript::new(vec![Move::AddPair, Move::Cancel { handle: 1, dotted: 1 }]);
        let err = run_script(&d, &s).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().starts_with("step 2"));
    }
}
