//! The concrete objects: the W(m,n) PALFs and plug diagrams, the manifolds A
//! and B, the plug twist relating them, and the constrained curve search used
//! to produce the shipped curve data.
//!
//! Objects are loaded from the text files under `data/`, which are compiled
//! into the library; a [`Catalog`] can also read an on-disk copy of the tree.
//! The generators in this module (`w_cycle_rule`, `w_plug_diagram`, ...) are
//! what `catalog export` writes, and validation checks the shipped files
//! against them.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{FiberModel, StandardCurve};
use crate::forms::{self, Congruence, IntSymForm};
use crate::formats::{self, ConstraintsDoc, ExpectationsDoc, KirbyDoc, PalfDoc, ParseError, ScriptDoc, Tag};
use crate::kirby::{self, GeoBound, KirbyDiagram, KirbyError, Move, MoveScript};
use crate::linalg::{self, IntMatrix};
use crate::palf::{PalfDescription, PalfError};
use crate::par;

/// Parameters with shipped data: `1 ≤ m ≤ 6`, `2 ≤ n ≤ 6`.
pub const GRID_M: std::ops::RangeInclusive<usize> = 1..=6;
pub const GRID_N: std::ops::RangeInclusive<usize> = 2..=6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("missing data file {0}")]
    MissingData(String),
    #[error("{file}: {error}")]
    Parse { file: String, error: ParseError },
    #[error("{file}: {reason}")]
    Invalid { file: String, reason: String },
    #[error("invalid marking: {0}")]
    Marking(String),
    #[error("unknown catalog reference {0:?}")]
    UnknownRef(String),
    #[error(transparent)]
    Palf(#[from] PalfError),
    #[error(transparent)]
    Kirby(#[from] KirbyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlugParams {
    m: usize,
    n: usize,
}

impl PlugParams {
    pub fn new(m: usize, n: usize) -> Result<Self, CatalogError> {
        if m < 1 {
            return Err(CatalogError::Params(format!("m = {m}, expected m >= 1")));
        }
        if n < 2 {
            return Err(CatalogError::Params(format!("n = {n}, expected n >= 2")));
        }
        Ok(PlugParams { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of holes of the fiber: `2n + m − 1`.
    pub fn holes(&self) -> usize {
        2 * self.n + self.m - 1
    }

    /// Length of the monodromy factorization: `2n + m`.
    pub fn cycle_count(&self) -> usize {
        2 * self.n + self.m
    }

    /// `m n² + 2n`, minus the intersection form of W(m,n).
    pub fn form_magnitude(&self) -> i64 {
        (self.m * self.n * self.n + 2 * self.n) as i64
    }

    pub fn in_grid(&self) -> bool {
        GRID_M.contains(&self.m) && GRID_N.contains(&self.n)
    }

    fn stem(&self) -> String {
        format!("W_{}_{}", self.m, self.n)
    }
}

impl fmt::Display for PlugParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({},{})", self.m, self.n)
    }
}

// ---------------------------------------------------------------- generators

/// Vanishing cycles of W(m,n) in attaching order: `{i}` for `i ≤ m`; then for
/// `j = 1..2n−1` the curve `{1..m, m+j}` while `j ≤ n+1` and `{m+j}` after;
/// finally the outer curve `{1..h}`.
pub fn w_cycle_rule(p: PlugParams) -> Vec<StandardCurve> {
    let (m, n, h) = (p.m, p.n, p.holes());
    let mut out: Vec<StandardCurve> = (1..=m).map(|i| curve([i])).collect();
    for j in 1..=2 * n - 1 {
        if j <= n + 1 {
            out.push(curve((1..=m).chain([m + j])));
        } else {
            out.push(curve([m + j]));
        }
    }
    out.push(curve(1..=h));
    out
}

fn curve<I: IntoIterator<Item = usize>>(holes: I) -> StandardCurve {
    StandardCurve::new(holes).expect("generated curves are nonempty")
}

pub fn w_palf(p: PlugParams) -> PalfDescription {
    let fiber = FiberModel::new(p.holes()).expect("at least three holes");
    PalfDescription::new(fiber, w_cycle_rule(p)).expect("rule stays on the fiber")
}

/// The extra cycle of A on the W(1,2) fiber.
pub fn beta() -> StandardCurve {
    curve([1, 2])
}

/// The extra cycle of B on the W(1,2) fiber.
pub fn gamma() -> StandardCurve {
    curve([2])
}

fn w12() -> PlugParams {
    PlugParams { m: 1, n: 2 }
}

pub fn a_palf() -> PalfDescription {
    w_palf(w12()).attach_lefschetz_handle(beta()).expect("beta is allowable")
}

pub fn b_palf() -> PalfDescription {
    w_palf(w12()).attach_lefschetz_handle(gamma()).expect("gamma is allowable")
}

fn diagram(d: usize, l: Vec<Vec<i64>>, n: Vec<Vec<i64>>) -> KirbyDiagram {
    let k = l.len();
    KirbyDiagram::new(
        d,
        IntMatrix::from_rows(l).expect("rectangular"),
        IntMatrix::from_vec(k, d, n.concat()).expect("rectangular"),
    )
    .expect("consistent")
}

fn tag(handle: usize, dotted: usize, bound: u32) -> Tag {
    Tag { handle, dotted, bound }
}

/// W(m,n): one dotted circle, a marked 0-framed handle linking it `n` times
/// and a (−m)-framed handle through it once, the two handles linking once.
pub fn w_plug_diagram(p: PlugParams) -> MarkedDiagram {
    let mut d = diagram(1, vec![vec![0, 1], vec![1, -(p.m as i64)]], vec![vec![p.n as i64], vec![1]]);
    d.set_bound(2, 1, Some(1)).expect("|N| = 1");
    MarkedDiagram::new(d, 1, 1, &[tag(2, 1, 1)]).expect("valid marking")
}

/// W(1,2) with a (−2)-framed handle linking the marked handle once.
pub fn a_raw_diagram() -> MarkedDiagram {
    let mut d = diagram(1, vec![vec![0, 1, 1], vec![1, -1, 0], vec![1, 0, -2]], vec![vec![2], vec![1], vec![0]]);
    d.set_bound(2, 1, Some(1)).expect("|N| = 1");
    d.set_bound(3, 1, Some(0)).expect("N = 0");
    MarkedDiagram::new(d, 1, 1, &[tag(2, 1, 1)]).expect("valid marking")
}

/// The plug twist of [`a_raw_diagram`], written out directly.
pub fn b_raw_diagram() -> MarkedDiagram {
    let mut d = diagram(1, vec![vec![0, 1, 0], vec![1, -1, 0], vec![0, 0, -2]], vec![vec![2], vec![1], vec![1]]);
    d.set_bound(2, 1, Some(1)).expect("|N| = 1");
    MarkedDiagram::new(d, 1, 1, &[tag(2, 1, 1), tag(3, 1, 0)]).expect("valid marking")
}

/// Cancels the (−m)-framed handle against the dot: one slide of the marked
/// handle, then the pair disappears.
pub fn reduce_script() -> MoveScript {
    MoveScript::new(vec![Move::Cancel { handle: 2, dotted: 1 }])
}

pub fn reduced_a() -> KirbyDiagram {
    diagram(0, vec![vec![-8, 1], vec![1, -2]], vec![vec![], vec![]])
}

pub fn reduced_b() -> KirbyDiagram {
    diagram(0, vec![vec![-8, -3], vec![-3, -3]], vec![vec![], vec![]])
}

// ---------------------------------------------------------------- marked diagrams

/// A diagram with a (dotted circle, 0-framed handle) pair to exchange, plus
/// the geometric tags known to hold after the exchange.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedDiagram {
    diagram: KirbyDiagram,
    dotted: usize,
    handle: usize,
    swap_bounds: Vec<Vec<GeoBound>>,
}

impl MarkedDiagram {
    /// `dotted`, `handle` are 1-based; `swap_tags` describe the twisted diagram.
    pub fn new(diagram: KirbyDiagram, dotted: usize, handle: usize, swap_tags: &[Tag]) -> Result<Self, CatalogError> {
        if dotted == 0 || dotted > diagram.dotted() {
            return Err(CatalogError::Marking(format!("dotted circle {dotted} does not exist")));
        }
        if handle == 0 || handle > diagram.handles() {
            return Err(CatalogError::Marking(format!("handle {handle} does not exist")));
        }
        let (k, d) = (diagram.handles(), diagram.dotted());
        let mut md = MarkedDiagram { diagram, dotted, handle, swap_bounds: vec![vec![None; d]; k] };
        let twisted = md.twisted_matrices()?;
        let mut check = twisted;
        for t in swap_tags {
            check
                .set_bound(t.handle, t.dotted, Some(t.bound))
                .map_err(|e| CatalogError::Marking(format!("swap tag {} {}: {e}", t.handle, t.dotted)))?;
        }
        md.swap_bounds = check.bounds().to_vec();
        if md.diagram.bound(handle, dotted) != Some(1) && swap_tags.is_empty() {
            return Err(CatalogError::Marking(
                "marked handle neither meets the marked dotted circle geometrically once nor carries swap tags".into(),
            ));
        }
        Ok(md)
    }

    pub fn diagram(&self) -> &KirbyDiagram {
        &self.diagram
    }

    /// `(dotted, handle)`, 1-based.
    pub fn marked_pair(&self) -> (usize, usize) {
        (self.dotted, self.handle)
    }

    pub fn swap_tags(&self) -> Vec<Tag> {
        formats::tags_of(&self.swap_bounds)
    }

    /// The twisted diagram's matrices, without geometric tags.
    fn twisted_matrices(&self) -> Result<KirbyDiagram, CatalogError> {
        let dg = &self.diagram;
        let (x, j) = (self.dotted - 1, self.handle - 1);
        let (k, d) = (dg.handles(), dg.dotted());
        let (l, n) = (dg.linking(), dg.incidence());
        if l[(j, j)] != 0 {
            return Err(CatalogError::Marking(format!("marked handle {} has framing {}, expected 0", self.handle, l[(j, j)])));
        }
        if let Some(y) = (0..d).find(|&y| y != x && n[(j, y)] != 0) {
            return Err(CatalogError::Marking(format!(
                "marked handle {} links dotted circle {} (dotted circles must stay unlinked)",
                self.handle,
                y + 1
            )));
        }
        let mut l2 = l.clone();
        let mut n2 = n.clone();
        for a in 0..k {
            if a != j {
                l2[(j, a)] = n[(a, x)];
                l2[(a, j)] = n[(a, x)];
                n2[(a, x)] = l[(a, j)];
            }
        }
        Ok(KirbyDiagram::new(d, l2, n2)?)
    }

    /// Exchanges the marked dotted circle and the marked 0-framed handle. The
    /// new 2-handle takes the old handle's index and vice versa, so the twist
    /// is an involution.
    pub fn plug_twist(&self) -> Result<MarkedDiagram, CatalogError> {
        let mut twisted = self.twisted_matrices()?;
        for t in formats::tags_of(&self.swap_bounds) {
            twisted.set_bound(t.handle, t.dotted, Some(t.bound))?;
        }
        Ok(MarkedDiagram {
            diagram: twisted,
            dotted: self.dotted,
            handle: self.handle,
            swap_bounds: self.diagram.bounds().to_vec(),
        })
    }

    pub fn to_doc(&self) -> KirbyDoc {
        KirbyDoc {
            meta: Vec::new(),
            diagram: self.diagram.clone(),
            mark: Some((self.dotted, self.handle)),
            swap_tags: self.swap_tags(),
        }
    }

    pub fn from_doc(doc: &KirbyDoc) -> Result<Self, CatalogError> {
        let (dotted, handle) = doc.mark.ok_or_else(|| CatalogError::Marking("no `mark` line".into()))?;
        MarkedDiagram::new(doc.diagram.clone(), dotted, handle, &doc.swap_tags)
    }
}

// ---------------------------------------------------------------- data access

macro_rules! embedded_files {
    ($($path:expr),* $(,)?) => {
        /// Every file of the shipped `data/` tree, by relative path.
        pub const EMBEDDED: &[(&str, &str)] = &[
            $(($path, include_str!(concat!("../../../data/", $path))),)*
        ];
    };
}

macro_rules! with_grid {
    ($($m:literal: $($n:literal)*;)*) => {
        embedded_files!(
            "expectations.txt",
            "palf/A.palf",
            "palf/B.palf",
            "kirby/A.kirby",
            "kirby/B.kirby",
            "kirby/A.reduced.kirby",
            "kirby/B.reduced.kirby",
            "scripts/reduce_A.script",
            "scripts/reduce_B.script",
            "scripts/reduce_W.script",
            "constraints/A.constraints",
            "constraints/B.constraints",
            "constraints/W_1_2.constraints",
            "constraints/h2_k3.constraints",
            $($(concat!("palf/W_", $m, "_", $n, ".palf"), concat!("kirby/W_", $m, "_", $n, ".kirby"),)*)*
        );
    };
}

with_grid! {
    1: 2 3 4 5 6;
    2: 2 3 4 5 6;
    3: 2 3 4 5 6;
    4: 2 3 4 5 6;
    5: 2 3 4 5 6;
    6: 2 3 4 5 6;
}

/// Where catalog files come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataSource {
    Embedded,
    Dir(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    source: DataSource,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::embedded()
    }
}

impl Catalog {
    pub fn embedded() -> Self {
        Catalog { source: DataSource::Embedded }
    }

    pub fn from_dir(dir: impl Into<PathBuf>) -> Self {
        Catalog { source: DataSource::Dir(dir.into()) }
    }

    pub fn source(&self) -> &DataSource {
        &self.source
    }

    /// Raw text of a data file (path relative to the `data/` root).
    pub fn text(&self, rel: &str) -> Result<String, CatalogError> {
        match &self.source {
            DataSource::Embedded => EMBEDDED
                .iter()
                .find(|(p, _)| *p == rel)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| CatalogError::MissingData(rel.to_string())),
            DataSource::Dir(dir) => {
                std::fs::read_to_string(dir.join(rel)).map_err(|_| CatalogError::MissingData(dir.join(rel).display().to_string()))
            }
        }
    }

    fn label(&self, rel: &str) -> String {
        match &self.source {
            DataSource::Embedded => format!("data/{rel}"),
            DataSource::Dir(dir) => dir.join(rel).display().to_string(),
        }
    }

    fn parsed<T>(&self, rel: &str, parse: fn(&str) -> Result<T, ParseError>) -> Result<T, CatalogError> {
        parse(&self.text(rel)?).map_err(|error| CatalogError::Parse { file: self.label(rel), error })
    }

    pub fn palf_file(&self, rel: &str) -> Result<PalfDoc, CatalogError> {
        self.parsed(rel, formats::parse_palf)
    }

    pub fn kirby_file(&self, rel: &str) -> Result<KirbyDoc, CatalogError> {
        self.parsed(rel, formats::parse_kirby)
    }

    pub fn script_file(&self, rel: &str) -> Result<ScriptDoc, CatalogError> {
        self.parsed(rel, formats::parse_script)
    }

    pub fn constraints_file(&self, rel: &str) -> Result<ConstraintsDoc, CatalogError> {
        self.parsed(rel, formats::parse_constraints)
    }

    pub fn expectations(&self) -> Result<ExpectationsDoc, CatalogError> {
        self.parsed("expectations.txt", formats::parse_expectations)
    }

    fn marked(&self, rel: &str) -> Result<MarkedDiagram, CatalogError> {
        let doc = self.kirby_file(rel)?;
        MarkedDiagram::from_doc(&doc).map_err(|e| CatalogError::Invalid { file: self.label(rel), reason: e.to_string() })
    }

    /// The W(m,n) PALF from its data file.
    pub fn plug_palf(&self, p: PlugParams) -> Result<PalfDescription, CatalogError> {
        let rel = format!("palf/{}.palf", p.stem());
        let palf = self.palf_file(&rel)?.palf;
        if palf.holes() != p.holes() || palf.cycles().len() != p.cycle_count() {
            return Err(CatalogError::Invalid {
                file: self.label(&rel),
                reason: format!(
                    "{} holes and {} cycles, expected {} and {}",
                    palf.holes(),
                    palf.cycles().len(),
                    p.holes(),
                    p.cycle_count()
                ),
            });
        }
        Ok(palf)
    }

    pub fn plug_diagram(&self, p: PlugParams) -> Result<MarkedDiagram, CatalogError> {
        self.marked(&format!("kirby/{}.kirby", p.stem()))
    }

    pub fn manifold_a(&self) -> Result<(PalfDescription, MarkedDiagram), CatalogError> {
        Ok((self.palf_file("palf/A.palf")?.palf, self.marked("kirby/A.kirby")?))
    }

    pub fn manifold_b(&self) -> Result<(PalfDescription, MarkedDiagram), CatalogError> {
        Ok((self.palf_file("palf/B.palf")?.palf, self.marked("kirby/B.kirby")?))
    }

    pub fn script(&self, name: &str) -> Result<MoveScript, CatalogError> {
        Ok(self.script_file(&format!("scripts/{name}.script"))?.script)
    }

    /// Resolves `catalog:<name>` references (the prefix is optional).
    pub fn resolve(&self, reference: &str) -> Result<CatalogObject, CatalogError> {
        let name = reference.strip_prefix("catalog:").unwrap_or(reference);
        let unknown = || CatalogError::UnknownRef(reference.to_string());
        let (base, suffix) = match name.split_once('.') {
            Some((b, s)) => (b, Some(s)),
            None => (name, None),
        };
        if let Some(script) = base.strip_prefix("reduce_") {
            if suffix.is_some() {
                return Err(unknown());
            }
            return match script {
                "A" | "B" => Ok(CatalogObject::Script(self.script(base)?)),
                w if parse_w(w).is_some() => {
                    PlugParams::new(parse_w(w).unwrap().0, parse_w(w).unwrap().1)?;
                    Ok(CatalogObject::Script(self.script("reduce_W")?))
                }
                _ => Err(unknown()),
            };
        }
        match (base, suffix) {
            ("A" | "B", None) => Ok(CatalogObject::Palf(self.palf_file(&format!("palf/{base}.palf"))?.palf)),
            ("A" | "B", Some("kirby")) => Ok(CatalogObject::Marked(self.marked(&format!("kirby/{base}.kirby"))?)),
            ("A" | "B", Some("reduced")) => {
                Ok(CatalogObject::Kirby(self.kirby_file(&format!("kirby/{base}.reduced.kirby"))?.diagram))
            }
            (w, s) => {
                let (m, n) = parse_w(w).ok_or_else(unknown)?;
                let p = PlugParams::new(m, n)?;
                if !p.in_grid() {
                    return Err(CatalogError::MissingData(format!("no shipped data for {p}")));
                }
                match s {
                    None => Ok(CatalogObject::Palf(self.plug_palf(p)?)),
                    Some("kirby") => Ok(CatalogObject::Marked(self.plug_diagram(p)?)),
                    Some("reduced") => {
                        let md = self.plug_diagram(p)?;
                        let run = kirby::run_script(md.diagram(), &self.script("reduce_W")?)
                            .map_err(|e| CatalogError::Invalid { file: self.label("scripts/reduce_W.script"), reason: e.to_string() })?;
                        Ok(CatalogObject::Kirby(run.result))
                    }
                    _ => Err(unknown()),
                }
            }
        }
    }
}

fn parse_w(s: &str) -> Option<(usize, usize)> {
    let inner = s.strip_prefix("W(")?.strip_suffix(')')?;
    let (m, n) = inner.split_once(',')?;
    Some((m.trim().parse().ok()?, n.trim().parse().ok()?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogObject {
    Palf(PalfDescription),
    Kirby(KirbyDiagram),
    Marked(MarkedDiagram),
    Script(MoveScript),
}

/// `plug_palf` from the shipped data.
pub fn plug_palf(p: PlugParams) -> Result<PalfDescription, CatalogError> {
    if !p.in_grid() {
        return Err(CatalogError::MissingData(format!("no shipped data for {p}")));
    }
    Catalog::embedded().plug_palf(p)
}

pub fn manifold_a() -> Result<(PalfDescription, MarkedDiagram), CatalogError> {
    Catalog::embedded().manifold_a()
}

pub fn manifold_b() -> Result<(PalfDescription, MarkedDiagram), CatalogError> {
    Catalog::embedded().manifold_b()
}

pub fn plug_twist(md: &MarkedDiagram) -> Result<MarkedDiagram, CatalogError> {
    md.plug_twist()
}

// ---------------------------------------------------------------- search

/// All cycle lists satisfying the constraints, in a fixed order: the prefix
/// followed by a multiset of curves listed in fiber enumeration order,
/// multisets ordered lexicographically.
pub fn search_curve_family(c: &ConstraintsDoc) -> Vec<PalfDescription> {
    let Ok(fiber) = FiberModel::new(c.holes) else { return Vec::new() };
    if c.b2.is_some_and(|b| b > c.cycles) || c.prefix.len() > c.cycles {
        return Vec::new();
    }
    if c.prefix.iter().chain(&c.require).any(|x| x.check_on(fiber).is_err()) {
        return Vec::new();
    }
    let target = match &c.form {
        Some(rows) => match IntSymForm::from_rows(rows.clone()) {
            Ok(f) => Some(f),
            Err(_) => return Vec::new(),
        },
        None => None,
    };
    let curves = fiber.all_curves();
    let free = c.cycles - c.prefix.len();
    let mut counts = vec![0usize; curves.len()];
    for p in &c.prefix {
        let i = curves.iter().position(|x| x == p).expect("checked on fiber");
        counts[i] += 1;
    }
    if counts.iter().any(|&x| x > c.multiplicity) {
        return Vec::new();
    }
    let mut choices = Vec::new();
    multisets(curves.len(), free, c.multiplicity, 0, &mut counts, &mut Vec::new(), &mut choices);
    let wanted_h1 = c.h1.as_ref().map(|s| normalize_group(s));
    let candidates = par::map(&choices, |choice| {
        let cycles: Vec<StandardCurve> = c.prefix.iter().cloned().chain(choice.iter().map(|&i| curves[i].clone())).collect();
        if !c.require.iter().all(|r| cycles.contains(r)) {
            return None;
        }
        let palf = PalfDescription::new(fiber, cycles).ok()?;
        let (h1, b2) = palf.homology();
        if wanted_h1.as_ref().is_some_and(|w| *w != normalize_group(&h1.to_string())) || c.b2.is_some_and(|b| b != b2) {
            return None;
        }
        if let Some(t) = &target {
            if !matches!(forms::congruent(&palf.intersection_form(), t, c.bound), Congruence::Yes { .. }) {
                return None;
            }
        }
        Some(palf)
    });
    let mut out: Vec<PalfDescription> = candidates.into_iter().flatten().collect();
    if let Some(limit) = c.limit {
        out.truncate(limit);
    }
    out
}

fn normalize_group(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Nondecreasing index sequences of length `left` over `0..n` respecting the
/// per-index multiplicity cap (`counts` holds already-used copies).
fn multisets(n: usize, left: usize, cap: usize, start: usize, counts: &mut [usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        if counts[i] < cap {
            counts[i] += 1;
            cur.push(i);
            multisets(n, left - 1, cap, i, counts, cur, out);
            cur.pop();
            counts[i] -= 1;
        }
    }
}

// ---------------------------------------------------------------- export

fn constraint_meta(c: &ConstraintsDoc) -> Vec<(String, String)> {
    c.serialize().lines().map(|l| ("constraint".to_string(), l.to_string())).collect()
}

fn w_constraints(p: PlugParams) -> ConstraintsDoc {
    let mut c = ConstraintsDoc::new(p.holes(), p.cycle_count());
    c.h1 = Some("0".into());
    c.b2 = Some(1);
    c.form = Some(vec![vec![-p.form_magnitude()]]);
    c
}

fn extension_constraints(extra: &[Vec<i64>]) -> ConstraintsDoc {
    let p = w12();
    let mut c = ConstraintsDoc::new(p.holes(), p.cycle_count() + 1);
    c.h1 = Some("0".into());
    c.b2 = Some(2);
    c.form = Some(extra.to_vec());
    c.multiplicity = 2;
    c.prefix = w_cycle_rule(p);
    c
}

/// Every file of the `data/` tree, generated from the rules in this module.
pub fn export_tree() -> Vec<(String, String)> {
    let mut files = Vec::new();
    let derived = |family: &str| -> Vec<(String, String)> {
        vec![("transcription".into(), "derived".into()), ("family".into(), family.into())]
    };
    for m in GRID_M {
        for n in GRID_N {
            let p = PlugParams { m, n };
            let mut doc = PalfDoc::new(w_palf(p));
            doc.meta = derived("W");
            doc.meta.push(("params".into(), format!("m={m} n={n}")));
            doc.meta.push((
                "rule".into(),
                "{i} for i<=m; {1..m,m+j} for 1<=j<=n+1; {m+j} for n+1<j<=2n-1; {1..h}".into(),
            ));
            doc.meta.push(("boundary-convention".into(), format!("holes={} boundary-components={}", p.holes(), p.holes() + 1)));
            doc.meta.extend(constraint_meta(&w_constraints(p)));
            files.push((format!("palf/{}.palf", p.stem()), doc.serialize()));
            let mut kd = w_plug_diagram(p).to_doc();
            kd.meta = derived("W");
            kd.meta.push(("params".into(), format!("m={m} n={n}")));
            files.push((format!("kirby/{}.kirby", p.stem()), kd.serialize()));
        }
    }
    let a_form = vec![vec![-8, 1], vec![1, -2]];
    let b_form = vec![vec![-8, -3], vec![-3, -3]];
    for (name, palf, extra, form) in [("A", a_palf(), beta(), &a_form), ("B", b_palf(), gamma(), &b_form)] {
        let c = extension_constraints(form);
        let mut doc = PalfDoc::new(palf);
        doc.meta = derived(name);
        doc.meta.push(("extends".into(), format!("W(1,2) by {extra}")));
        doc.meta.extend(constraint_meta(&c));
        files.push((format!("palf/{name}.palf"), doc.serialize()));
        let mut cd = c;
        cd.meta = vec![("target".into(), format!("{name} extends W(1,2) by one cycle"))];
        cd.limit = Some(10);
        files.push((format!("constraints/{name}.constraints"), cd.serialize()));
    }
    for (name, md) in [("A", a_raw_diagram()), ("B", b_raw_diagram())] {
        let mut kd = md.to_doc();
        kd.meta = derived(name);
        files.push((format!("kirby/{name}.kirby"), kd.serialize()));
    }
    for (name, d) in [("A", reduced_a()), ("B", reduced_b())] {
        let mut kd = KirbyDoc::new(d);
        kd.meta = vec![("reduced-from".into(), format!("{name} by reduce_{name}"))];
        files.push((format!("kirby/{name}.reduced.kirby"), kd.serialize()));
    }
    for name in ["reduce_A", "reduce_B", "reduce_W"] {
        let mut sd = ScriptDoc::new(reduce_script());
        sd.meta = vec![("template".into(), name.into())];
        files.push((format!("scripts/{name}.script"), sd.serialize()));
    }
    let mut w = w_constraints(w12());
    w.meta = vec![("target".into(), "W(1,2)".into())];
    files.push(("constraints/W_1_2.constraints".into(), w.serialize()));
    let mut small = ConstraintsDoc::new(2, 3);
    small.h1 = Some("0".into());
    small.b2 = Some(1);
    small.form = Some(vec![vec![-3]]);
    files.push(("constraints/h2_k3.constraints".into(), small.serialize()));
    files.push(("expectations.txt".into(), expectations_text()));
    files.sort();
    files
}

fn expectations_text() -> String {
    let rows: &[(&str, &str, &str, &str)] = &[
        ("A", "chi", "3", "oracle:handle-count"),
        ("A", "h1", "0", "claim:first-homology"),
        ("A", "b2", "2", "claim:betti-numbers"),
        ("A", "h2", "Z^2", "claim:betti-numbers"),
        ("A", "boundary_h1", "Z/15", "oracle:boundary-snf"),
        ("A", "cycles", "6", "claim:monodromy-factorization"),
        ("A", "parity", "even", "claim:parity"),
        ("A.reduced", "form", "[[-8,1],[1,-2]]", "claim:intersection-matrix-A"),
        ("B", "chi", "3", "oracle:handle-count"),
        ("B", "h1", "0", "claim:first-homology"),
        ("B", "b2", "2", "claim:betti-numbers"),
        ("B", "h2", "Z^2", "claim:betti-numbers"),
        ("B", "boundary_h1", "Z/15", "oracle:boundary-snf"),
        ("B", "cycles", "6", "claim:monodromy-factorization"),
        ("B", "parity", "odd", "claim:parity"),
        ("B.reduced", "form", "[[-8,-3],[-3,-3]]", "claim:intersection-matrix-B"),
        ("A~B", "congruent", "no(parity)", "claim:parity"),
        ("A~B", "plug_twist", "equal", "claim:plug-twist"),
        ("A~B", "shared_prefix", "5", "claim:monodromy-factorization"),
        ("W(m,n)", "cycles", "2*n+m", "claim:factorization-length"),
        ("W(m,n)", "chi", "2", "oracle:handle-count"),
        ("W(m,n)", "h1", "0", "oracle:snf-homology"),
        ("W(m,n)", "b2", "1", "oracle:snf-homology"),
        ("W(m,n)", "form", "[[-(m*n^2+2*n)]]", "oracle:kernel-restriction"),
        ("W(m,n)", "boundary_h1", "Z/(m*n^2+2*n)", "oracle:boundary-snf"),
    ];
    let doc = ExpectationsDoc {
        meta: vec![("about".into(), "expected values with the claim or oracle each one comes from".into())],
        entries: rows
            .iter()
            .map(|(o, q, v, s)| formats::Expectation {
                object: o.to_string(),
                quantity: q.to_string(),
                value: v.to_string(),
                source: s.to_string(),
            })
            .collect(),
    };
    doc.serialize()
}

/// Writes [`export_tree`] under `dir`.
pub fn export_to(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (rel, text) in export_tree() {
        let path = dir.join(&rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}

// ---------------------------------------------------------------- validation

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub object: String,
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    fn push(&mut self, object: &str, check: &str, result: Result<String, String>) {
        let (pass, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult { object: object.into(), check: check.into(), pass, detail });
    }
}

fn ensure(cond: bool, ok: String, err: String) -> Result<String, String> {
    if cond {
        Ok(ok)
    } else {
        Err(err)
    }
}

/// Profile check for a W(m,n) PALF and its plug diagram.
pub fn check_w(p: PlugParams, palf: &PalfDescription, md: &MarkedDiagram) -> Result<String, String> {
    if palf.cycles().len() != p.cycle_count() {
        return Err(format!("{} cycles, expected {}", palf.cycles().len(), p.cycle_count()));
    }
    if !palf.is_allowable() {
        return Err("a cycle is not allowable".into());
    }
    let inv = palf.invariants();
    let form = IntSymForm::from_rows(vec![vec![-p.form_magnitude()]]).expect("1x1");
    if inv.chi != 2 || !inv.h1.is_trivial() || inv.b2 != 1 || !inv.form.is_negative_definite() || inv.form != form {
        return Err(format!("profile chi={} H1={} b2={} form={}", inv.chi, inv.h1, inv.b2, inv.form));
    }
    let k = palf.to_kirby().invariants().map_err(|e| e.to_string())?;
    let w = md.diagram().invariants().map_err(|e| e.to_string())?;
    for (name, other) in [("Kirby translation", &k), ("plug diagram", &w)] {
        if other.chi != inv.chi || other.h1 != inv.h1 || other.b2 != inv.b2 || other.form != inv.form {
            return Err(format!("{name} disagrees: chi={} H1={} b2={} form={}", other.chi, other.h1, other.b2, other.form));
        }
    }
    if k.boundary_h1 != w.boundary_h1 || k.signature != w.signature || k.parity != w.parity {
        return Err(format!("boundary H1 {} vs {}", k.boundary_h1, w.boundary_h1));
    }
    Ok(format!("{} cycles, chi=2, H1=0, b2=1, form {}, boundary {}", p.cycle_count(), inv.form, w.boundary_h1))
}

/// Runs every shipped object through the invariant suite and compares the
/// files with the generators that produced them.
pub fn validate_catalog(cat: &Catalog) -> ValidationReport {
    let mut r = ValidationReport::default();
    r.notes.push(
        "fiber convention: W(m,n) fibers have 2n+m-1 holes (2n+m boundary components) so that chi(W)=2; \
         the alternative reading with 2n+m holes gives chi=1 and is rejected by the A/B Euler characteristics"
            .into(),
    );
    let generated = export_tree();
    for (rel, text) in &generated {
        let label = cat.label(rel);
        let res = match cat.text(rel) {
            Ok(t) if t == *text => Ok("matches generator".into()),
            Ok(_) => Err("differs from the generated data".into()),
            Err(e) => Err(e.to_string()),
        };
        r.push(&label, "transcription", res);
        let kind = match rel.split('/').next() {
            Some("palf") => formats::DocKind::Palf,
            Some("kirby") => formats::DocKind::Kirby,
            Some("scripts") => formats::DocKind::Script,
            Some("constraints") => formats::DocKind::Constraints,
            _ => formats::DocKind::Expectations,
        };
        if let Ok(t) = cat.text(rel) {
            let res = formats::parse(kind, &t)
                .map_err(|e| format!("{label}: {e}"))
                .and_then(|d| ensure(formats::serialize(&d) == t, "canonical".into(), "not in canonical form".into()));
            r.push(&label, "parse", res);
        }
    }
    for m in GRID_M {
        for n in GRID_N {
            let p = PlugParams { m, n };
            let res = cat
                .plug_palf(p)
                .and_then(|palf| Ok((palf, cat.plug_diagram(p)?)))
                .map_err(|e| e.to_string())
                .and_then(|(palf, md)| {
                    check_w(p, &palf, &md)?;
                    let twisted = md.plug_twist().map_err(|e| e.to_string())?;
                    ensure(twisted.plug_twist().ok().as_ref() == Some(&md), "ok".into(), "plug twist is not an involution".into())?;
                    let run = kirby::run_script(md.diagram(), &reduce_script()).map_err(|e| e.to_string())?;
                    let want = IntSymForm::from_rows(vec![vec![-p.form_magnitude()]]).expect("1x1");
                    ensure(
                        run.result.dotted() == 0 && run.result.intersection_form().ok() == Some(want.clone()),
                        format!("reduces to {want}"),
                        format!("reduction gives {}", run.result.linking()),
                    )
                });
            r.push(&p.to_string(), "profile", res);
        }
    }
    for name in ["A", "B"] {
        let (reduced, expect) = if name == "A" { (reduced_a(), a_palf()) } else { (reduced_b(), b_palf()) };
        let loaded = if name == "A" { cat.manifold_a() } else { cat.manifold_b() };
        let res = loaded.map_err(|e| e.to_string()).and_then(|(palf, md)| {
            ensure(palf == expect, String::new(), format!("PALF differs from W(1,2) + one cycle: {:?}", palf.cycles()))?;
            let script = cat.script(&format!("reduce_{name}")).map_err(|e| e.to_string())?;
            let run = kirby::run_script(md.diagram(), &script).map_err(|e| e.to_string())?;
            let want = reduced.intersection_form().map_err(|e| e.to_string())?;
            let got = run.result.intersection_form().map_err(|e| e.to_string())?;
            ensure(got == want, format!("reduces to {got}"), format!("reduction gives {got}, expected {want}"))?;
            let pi = palf.invariants();
            let ki = md.diagram().invariants().map_err(|e| e.to_string())?;
            let ti = palf.to_kirby().invariants().map_err(|e| e.to_string())?;
            ensure(
                pi.chi == ki.chi && pi.h1 == ki.h1 && pi.b2 == ki.b2 && ti.boundary_h1 == ki.boundary_h1,
                String::new(),
                format!("PALF and diagram disagree: chi {}/{}, b2 {}/{}, boundary {}/{}", pi.chi, ki.chi, pi.b2, ki.b2, ti.boundary_h1, ki.boundary_h1),
            )?;
            ensure(
                forms::congruent(&pi.form, &want, forms::DEFAULT_BOUND).is_yes(),
                format!("form {got}, chi {}, boundary {}", pi.chi, ki.boundary_h1),
                format!("PALF form {} not congruent to {want}", pi.form),
            )
        });
        r.push(name, "profile", res);
    }
    let res = cat
        .manifold_a()
        .and_then(|(_, a)| Ok((a, cat.manifold_b()?.1)))
        .map_err(|e| e.to_string())
        .and_then(|(a, b)| {
            let t = a.plug_twist().map_err(|e| e.to_string())?;
            ensure(t == b, "plug twist of A is B".into(), "plug twist of A differs from B".into())
        });
    r.push("A~B", "plug_twist", res);
    match cat.expectations() {
        Ok(e) => r.push("expectations.txt", "parse", Ok(format!("{} entries", e.entries.len()))),
        Err(e) => r.push("expectations.txt", "parse", Err(e.to_string())),
    }
    r
}

/// Smoke check used by tests: the matrix of a W(m,n) reduction, for callers
/// that need the number without running a script.
pub fn w_reduced_form(p: PlugParams) -> IntSymForm {
    IntSymForm::from_rows(vec![vec![-p.form_magnitude()]]).expect("1x1")
}

/// Number of cycles shared with W(1,2) at the start of a factorization.
pub fn shared_prefix(a: &PalfDescription, b: &PalfDescription) -> usize {
    a.cycles().iter().zip(b.cycles()).take_while(|(x, y)| x == y).count()
}

/// Boundary `H1` of a PALF through its Kirby translation.
pub fn palf_boundary_h1(p: &PalfDescription) -> linalg::AbelianGroup {
    linalg::cokernel(&p.to_kirby().boundary_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: usize, n: usize) -> PlugParams {
        PlugParams::new(m, n).unwrap()
    }

    #[test]
    fn params() {
        assert!(PlugParams::new(0, 2).is_err());
        assert!(PlugParams::new(1, 1).is_err());
        assert_eq!(p(3, 4).cycle_count(), 11);
        assert!(matches!(plug_palf(p(7, 2)), Err(CatalogError::MissingData(_))));
    }

    #[test]
    fn w12_rule() {
        let cycles: Vec<String> = w_cycle_rule(p(1, 2)).iter().map(|c| c.to_string()).collect();
        assert_eq!(cycles, ["{1}", "{1,2}", "{1,3}", "{1,4}", "{1,2,3,4}"]);
        let palf = plug_palf(p(1, 2)).unwrap();
        let inv = palf.invariants();
        assert_eq!((inv.chi, inv.b2), (2, 1));
        assert!(inv.h1.is_trivial());
        let palf = plug_palf(p(2, 2)).unwrap();
        assert_eq!(palf.cycles().len(), 6);
        assert_eq!(palf.invariants().chi, 2);
    }

    #[test]
    fn a_and_b() {
        let (a, am) = manifold_a().unwrap();
        let (b, bm) = manifold_b().unwrap();
        assert_eq!(a.cycles().len(), 6);
        assert_eq!(shared_prefix(&a, &b), 5);
        let ai = a.invariants();
        assert_eq!((ai.chi, ai.b2), (3, 2));
        assert!(ai.h1.is_trivial());
        let fa = IntSymForm::from_rows(vec![vec![-8, 1], vec![1, -2]]).unwrap();
        let fb = IntSymForm::from_rows(vec![vec![-8, -3], vec![-3, -3]]).unwrap();
        assert!(forms::congruent(&ai.form, &fa, 5).is_yes());
        assert!(forms::congruent(&b.invariants().form, &fb, 5).is_yes());
        assert_eq!(palf_boundary_h1(&a).to_string(), "Z/15");
        assert_eq!(palf_boundary_h1(&b).to_string(), "Z/15");
        assert_eq!(am.plug_twist().unwrap(), bm);
        assert_eq!(bm.plug_twist().unwrap(), am);
    }

    #[test]
    fn twist_keeps_counts_and_boundary() {
        let a = a_raw_diagram();
        let b = a.plug_twist().unwrap();
        assert_eq!(b.diagram().euler_characteristic(), a.diagram().euler_characteristic());
        assert_eq!(
            b.diagram().invariants().unwrap().boundary_h1,
            a.diagram().invariants().unwrap().boundary_h1
        );
        let w = w_plug_diagram(p(2, 3));
        assert_eq!(w.plug_twist().unwrap().plug_twist().unwrap(), w);
    }

    #[test]
    fn invalid_markings() {
        let d = KirbyDiagram::new(1, IntMatrix::from_rows(vec![vec![-1]]).unwrap(), IntMatrix::from_rows(vec![vec![1]]).unwrap()).unwrap();
        assert!(MarkedDiagram::new(d.clone(), 1, 1, &[tag(1, 1, 1)]).is_err());
        assert!(MarkedDiagram::new(d, 2, 1, &[]).is_err());
    }

    #[test]
    fn search_examples() {
        let mut c = ConstraintsDoc::new(2, 3);
        c.h1 = Some("0".into());
        c.b2 = Some(1);
        c.form = Some(vec![vec![-3]]);
        let found = search_curve_family(&c);
        let want: Vec<StandardCurve> = ["{1}", "{2}", "{1,2}"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(found.iter().any(|p| p.cycles() == want.as_slice()));
        c.b2 = Some(4);
        assert!(search_curve_family(&c).is_empty());
    }

    #[test]
    fn search_finds_w12_extension() {
        let c = extension_constraints(&[vec![-8, 1], vec![1, -2]]);
        let found = search_curve_family(&c);
        assert!(!found.is_empty());
        assert!(found.contains(&a_palf()));
    }

    #[test]
    fn references() {
        let cat = Catalog::embedded();
        assert!(matches!(cat.resolve("catalog:W(1,2)").unwrap(), CatalogObject::Palf(_)));
        assert!(matches!(cat.resolve("catalog:A.kirby").unwrap(), CatalogObject::Marked(_)));
        assert!(matches!(cat.resolve("catalog:B.reduced").unwrap(), CatalogObject::Kirby(_)));
        assert!(matches!(cat.resolve("catalog:reduce_W(3,4)").unwrap(), CatalogObject::Script(_)));
        assert!(matches!(cat.resolve("catalog:W(2,5).reduced").unwrap(), CatalogObject::Kirby(_)));
        assert!(cat.resolve("catalog:C").is_err());
        assert!(cat.resolve("catalog:W(0,2)").is_err());
    }

    #[test]
    fn shipped_data_validates() {
        let report = validate_catalog(&Catalog::embedded());
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
    }
}
