//! Line-oriented text formats for PALFs, Kirby diagrams, move scripts,
//! search constraints and expectations.
//!
//! Every format shares the same lexical layer: UTF-8 lines, `#` starts a
//! comment, blank lines are ignored, tokens are separated by whitespace and
//! each significant line starts with a keyword. `meta <key> <value...>` lines
//! are accepted by every format and preserved verbatim. Serialization is
//! canonical, so `serialize(parse(text)) == text` for canonical files.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curves::{FiberModel, StandardCurve};
use crate::kirby::{GeoBound, KirbyDiagram, Move, MoveScript};
use crate::linalg::IntMatrix;
use crate::palf::PalfDescription;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Palf,
    Kirby,
    Script,
    Constraints,
    Expectations,
}

impl std::str::FromStr for DocKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "palf" => Ok(DocKind::Palf),
            "kirby" => Ok(DocKind::Kirby),
            "script" => Ok(DocKind::Script),
            "constraints" => Ok(DocKind::Constraints),
            "expectations" => Ok(DocKind::Expectations),
            other => Err(format!("unknown document kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Palf(PalfDoc),
    Kirby(KirbyDoc),
    Script(ScriptDoc),
    Constraints(ConstraintsDoc),
    Expectations(ExpectationsDoc),
}

pub type Meta = Vec<(String, String)>;

pub fn parse(kind: DocKind, text: &str) -> Result<Document, ParseError> {
    Ok(match kind {
        DocKind::Palf => Document::Palf(parse_palf(text)?),
        DocKind::Kirby => Document::Kirby(parse_kirby(text)?),
        DocKind::Script => Document::Script(parse_script(text)?),
        DocKind::Constraints => Document::Constraints(parse_constraints(text)?),
        DocKind::Expectations => Document::Expectations(parse_expectations(text)?),
    })
}

pub fn serialize(doc: &Document) -> String {
    match doc {
        Document::Palf(d) => d.serialize(),
        Document::Kirby(d) => d.serialize(),
        Document::Script(d) => d.serialize(),
        Document::Constraints(d) => d.serialize(),
        Document::Expectations(d) => d.serialize(),
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Debug, Clone)]
struct Line<'a> {
    number: usize,
    raw: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    fn err_at(&self, token: usize, message: impl Into<String>) -> ParseError {
        let column = self.tokens.get(token).map_or_else(|| self.end_column(), |t| t.column);
        ParseError { line: self.number, column, message: message.into() }
    }

    fn end_column(&self) -> usize {
        self.raw.trim_end().chars().count() + 1
    }

    /// Requires exactly `n` arguments after the keyword.
    fn arity(&self, n: usize) -> Result<(), ParseError> {
        let got = self.tokens.len() - 1;
        if got < n {
            return Err(self.err_at(self.tokens.len(), format!("`{}` expects {n} argument(s), found {got}", self.keyword())));
        }
        if got > n {
            return Err(self.err_at(n + 1, format!("`{}` expects {n} argument(s), found {got}", self.keyword())));
        }
        Ok(())
    }

    fn int(&self, token: usize) -> Result<i64, ParseError> {
        let t = &self.tokens[token];
        t.text.parse().map_err(|_| self.err_at(token, format!("expected an integer, found {:?}", t.text)))
    }

    fn index(&self, token: usize) -> Result<usize, ParseError> {
        let t = &self.tokens[token];
        match t.text.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(self.err_at(token, format!("expected a positive index, found {:?}", t.text))),
        }
    }

    fn count(&self, token: usize) -> Result<usize, ParseError> {
        let t = &self.tokens[token];
        t.text.parse().map_err(|_| self.err_at(token, format!("expected a non-negative integer, found {:?}", t.text)))
    }

    /// Text from token `token` to the end of the line (comment stripped).
    fn rest(&self, token: usize) -> &'a str {
        match self.tokens.get(token) {
            Some(t) => {
                let start = self.raw.char_indices().nth(t.column - 1).map_or(self.raw.len(), |(b, _)| b);
                strip_comment(&self.raw[start..]).trim_end()
            }
            None => "",
        }
    }

    fn curve(&self, token: usize) -> Result<StandardCurve, ParseError> {
        let text = self.rest(token);
        text.parse::<StandardCurve>().map_err(|e| self.err_at(token, e.to_string()))
    }
}

fn strip_comment(s: &str) -> &str {
    s.find('#').map_or(s, |i| &s[..i])
}

fn lex(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        let mut byte_start = 0;
        for (col, (b, ch)) in body.char_indices().enumerate() {
            if ch.is_whitespace() {
                if let Some(c) = start.take() {
                    tokens.push(Token { text: &body[byte_start..b], column: c + 1 });
                }
            } else if start.is_none() {
                start = Some(col);
                byte_start = b;
            }
        }
        if let Some(c) = start {
            tokens.push(Token { text: &body[byte_start..], column: c + 1 });
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, raw, tokens });
        }
    }
    out
}

fn meta_line(line: &Line<'_>, meta: &mut Meta) -> Result<(), ParseError> {
    if line.tokens.len() < 2 {
        return Err(line.err_at(1, "`meta` expects a key"));
    }
    meta.push((line.tokens[1].text.to_string(), line.rest(2).to_string()));
    Ok(())
}

fn write_meta(out: &mut String, meta: &Meta) {
    for (k, v) in meta {
        if v.is_empty() {
            out.push_str(&format!("meta {k}\n"));
        } else {
            out.push_str(&format!("meta {k} {v}\n"));
        }
    }
}

fn unknown(line: &Line<'_>, expected: &str) -> ParseError {
    line.err_at(0, format!("unknown keyword {:?} (expected {expected})", line.keyword()))
}

fn sign(line: &Line<'_>, token: usize) -> Result<bool, ParseError> {
    match line.tokens[token].text {
        "+" => Ok(true),
        "-" => Ok(false),
        other => Err(line.err_at(token, format!("expected `+` or `-`, found {other:?}"))),
    }
}

// ---------------------------------------------------------------- palf

/// `holes <h>` followed by `cycle {..}` lines in attaching order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalfDoc {
    pub meta: Meta,
    pub palf: PalfDescription,
}

impl PalfDoc {
    pub fn new(palf: PalfDescription) -> Self {
        PalfDoc { meta: Vec::new(), palf }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        write_meta(&mut out, &self.meta);
        out.push_str(&format!("holes {}\n", self.palf.holes()));
        for c in self.palf.cycles() {
            out.push_str(&format!("cycle {c}\n"));
        }
        out
    }
}

pub fn parse_palf(text: &str) -> Result<PalfDoc, ParseError> {
    let mut meta = Vec::new();
    let mut holes: Option<(FiberModel, usize)> = None;
    let mut cycles = Vec::new();
    for line in lex(text) {
        match line.keyword() {
            "meta" => meta_line(&line, &mut meta)?,
            "holes" => {
                line.arity(1)?;
                if holes.is_some() {
                    return Err(line.err_at(0, "duplicate `holes` line"));
                }
                let h = line.count(1)?;
                let fiber = FiberModel::new(h).map_err(|e| line.err_at(1, e.to_string()))?;
                holes = Some((fiber, line.number));
            }
            "cycle" => {
                let Some((fiber, _)) = holes else {
                    return Err(line.err_at(0, "`cycle` before `holes`"));
                };
                if line.tokens.len() < 2 {
                    return Err(line.err_at(1, "`cycle` expects a curve like {1,3}"));
                }
                let c = line.curve(1)?;
                c.check_on(fiber).map_err(|e| line.err_at(1, e.to_string()))?;
                cycles.push(c);
            }
            _ => return Err(unknown(&line, "`holes`, `cycle` or `meta`")),
        }
    }
    let (fiber, _) = holes.ok_or(ParseError { line: 1, column: 1, message: "missing `holes` line".into() })?;
    let palf = PalfDescription::new(fiber, cycles).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })?;
    Ok(PalfDoc { meta, palf })
}

// ---------------------------------------------------------------- kirby

/// A geometric annotation `tag <kind> <handle> <dotted>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tag {
    pub handle: usize,
    pub dotted: usize,
    pub bound: u32,
}

impl Tag {
    fn render(&self, keyword: &str) -> String {
        match self.bound {
            0 => format!("{keyword} free {} {}", self.handle, self.dotted),
            1 => format!("{keyword} geo {} {}", self.handle, self.dotted),
            b => format!("{keyword} at-most {} {} {b}", self.handle, self.dotted),
        }
    }
}

/// Kirby diagram, optionally with a marked (dotted circle, 0-framed handle)
/// pair and the tags valid after exchanging them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KirbyDoc {
    pub meta: Meta,
    pub diagram: KirbyDiagram,
    /// `(dotted, handle)`.
    pub mark: Option<(usize, usize)>,
    pub swap_tags: Vec<Tag>,
}

impl KirbyDoc {
    pub fn new(diagram: KirbyDiagram) -> Self {
        KirbyDoc { meta: Vec::new(), diagram, mark: None, swap_tags: Vec::new() }
    }

    pub fn serialize(&self) -> String {
        let d = &self.diagram;
        let mut out = String::new();
        write_meta(&mut out, &self.meta);
        out.push_str(&format!("dotted {}\n", d.dotted()));
        for f in d.framings() {
            out.push_str(&format!("handle f={f}\n"));
        }
        for row in d.linking().to_rows() {
            out.push_str(&format!("L {}\n", join(&row)));
        }
        if d.dotted() > 0 {
            for row in d.incidence().to_rows() {
                out.push_str(&format!("N {}\n", join(&row)));
            }
        }
        for t in tags_of(d.bounds()) {
            out.push_str(&t.render("tag"));
            out.push('\n');
        }
        if let Some((dot, h)) = self.mark {
            out.push_str(&format!("mark {dot} {h}\n"));
        }
        let mut swap = self.swap_tags.clone();
        swap.sort();
        for t in swap {
            out.push_str(&t.render("swaptag"));
            out.push('\n');
        }
        out
    }
}

/// Known bounds of a diagram as tags, ordered by handle then dotted circle.
pub fn tags_of(bounds: &[Vec<GeoBound>]) -> Vec<Tag> {
    let mut out = Vec::new();
    for (j, row) in bounds.iter().enumerate() {
        for (i, b) in row.iter().enumerate() {
            if let Some(b) = b {
                out.push(Tag { handle: j + 1, dotted: i + 1, bound: *b });
            }
        }
    }
    out
}

fn join(row: &[i64]) -> String {
    row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_tag(line: &Line<'_>) -> Result<Tag, ParseError> {
    if line.tokens.len() < 2 {
        return Err(line.err_at(1, "expected `geo`, `free` or `at-most`"));
    }
    let (bound, arity) = match line.tokens[1].text {
        "geo" => (Some(1), 3),
        "free" => (Some(0), 3),
        "at-most" => (None, 4),
        other => return Err(line.err_at(1, format!("unknown tag kind {other:?} (expected geo, free or at-most)"))),
    };
    line.arity(arity)?;
    let handle = line.index(2)?;
    let dotted = line.index(3)?;
    let bound = match bound {
        Some(b) => b,
        None => u32::try_from(line.count(4)?).map_err(|_| line.err_at(4, "bound too large"))?,
    };
    Ok(Tag { handle, dotted, bound })
}

pub fn parse_kirby(text: &str) -> Result<KirbyDoc, ParseError> {
    let mut meta = Vec::new();
    let mut dotted: Option<usize> = None;
    let mut framings: Vec<(i64, usize)> = Vec::new();
    let mut l_rows: Vec<(Vec<i64>, usize)> = Vec::new();
    let mut n_rows: Vec<(Vec<i64>, usize)> = Vec::new();
    let mut tags: Vec<(Tag, usize)> = Vec::new();
    let mut swap_tags = Vec::new();
    let mut mark = None;
    let lines = lex(text);
    for line in &lines {
        match line.keyword() {
            "meta" => meta_line(line, &mut meta)?,
            "dotted" => {
                line.arity(1)?;
                if dotted.is_some() {
                    return Err(line.err_at(0, "duplicate `dotted` line"));
                }
                dotted = Some(line.count(1)?);
            }
            "handle" => {
                line.arity(1)?;
                let t = line.tokens[1].text;
                let f = t
                    .strip_prefix("f=")
                    .ok_or_else(|| line.err_at(1, format!("expected `f=<int>`, found {t:?}")))?;
                let f = f.parse().map_err(|_| line.err_at(1, format!("expected an integer framing, found {f:?}")))?;
                framings.push((f, line.number));
            }
            "L" | "N" => {
                let row = (1..line.tokens.len()).map(|i| line.int(i)).collect::<Result<Vec<_>, _>>()?;
                if line.keyword() == "L" {
                    l_rows.push((row, line.number));
                } else {
                    n_rows.push((row, line.number));
                }
            }
            "tag" => tags.push((parse_tag(line)?, line.number)),
            "swaptag" => swap_tags.push(parse_tag(line)?),
            "mark" => {
                line.arity(2)?;
                if mark.is_some() {
                    return Err(line.err_at(0, "duplicate `mark` line"));
                }
                mark = Some((line.index(1)?, line.index(2)?));
            }
            _ => return Err(unknown(line, "`dotted`, `handle`, `L`, `N`, `tag`, `mark`, `swaptag` or `meta`")),
        }
    }
    let find = |n: usize| lines.iter().find(|l| l.number == n).expect("line exists");
    let d = dotted.ok_or(ParseError { line: 1, column: 1, message: "missing `dotted` line".into() })?;
    let k = framings.len();
    let linking = if l_rows.is_empty() {
        let mut l = IntMatrix::zeros(k, k);
        for (j, (f, _)) in framings.iter().enumerate() {
            l[(j, j)] = *f;
        }
        l
    } else {
        if l_rows.len() != k {
            let (_, n) = l_rows.last().expect("nonempty");
            return Err(find(*n).err_at(0, format!("{} `L` rows for {k} handles", l_rows.len())));
        }
        for (row, n) in &l_rows {
            if row.len() != k {
                return Err(find(*n).err_at(row.len().min(k) + 1, format!("`L` row has {} entries, expected {k}", row.len())));
            }
        }
        IntMatrix::from_rows(l_rows.iter().map(|(r, _)| r.clone()).collect()).expect("rectangular")
    };
    for j in 0..k {
        if linking[(j, j)] != framings[j].0 {
            let n = l_rows.get(j).map_or(framings[j].1, |(_, n)| *n);
            return Err(find(n).err_at(j + 1, format!("diagonal entry {} differs from framing {} of handle {}", linking[(j, j)], framings[j].0, j + 1)));
        }
        for i in 0..j {
            if linking[(i, j)] != linking[(j, i)] {
                return Err(find(l_rows[j].1).err_at(i + 1, format!("linking matrix is not symmetric at ({}, {})", j + 1, i + 1)));
            }
        }
    }
    let incidence = if n_rows.is_empty() {
        IntMatrix::zeros(k, d)
    } else {
        if n_rows.len() != k {
            let (_, n) = n_rows.last().expect("nonempty");
            return Err(find(*n).err_at(0, format!("{} `N` rows for {k} handles", n_rows.len())));
        }
        for (row, n) in &n_rows {
            if row.len() != d {
                return Err(find(*n).err_at(row.len().min(d) + 1, format!("`N` row has {} entries, expected {d}", row.len())));
            }
        }
        IntMatrix::from_vec(k, d, n_rows.iter().flat_map(|(r, _)| r.clone()).collect()).expect("shape checked")
    };
    let mut diagram = KirbyDiagram::new(d, linking, incidence).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })?;
    for (t, n) in &tags {
        diagram.set_bound(t.handle, t.dotted, Some(t.bound)).map_err(|e| find(*n).err_at(2, e.to_string()))?;
    }
    Ok(KirbyDoc { meta, diagram, mark, swap_tags })
}

// ---------------------------------------------------------------- script

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScriptDoc {
    pub meta: Meta,
    pub script: MoveScript,
}

impl ScriptDoc {
    pub fn new(script: MoveScript) -> Self {
        ScriptDoc { meta: Vec::new(), script }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        write_meta(&mut out, &self.meta);
        for m in &self.script.moves {
            out.push_str(&m.to_string());
            out.push('\n');
        }
        out
    }
}

fn parse_move(line: &Line<'_>) -> Result<Move, ParseError> {
    match line.keyword() {
        "slide" => {
            line.arity(4)?;
            let handle = line.index(1)?;
            let target = line.index(3)?;
            let positive = sign(line, 4)?;
            match line.tokens[2].text {
                "over" => Ok(Move::Slide { handle, over: target, positive }),
                "under" => Ok(Move::SlideUnder { handle, dotted: target, positive }),
                other => Err(line.err_at(2, format!("expected `over` or `under`, found {other:?}"))),
            }
        }
        "cancel" => {
            line.arity(3)?;
            if line.tokens[2].text != "with" {
                return Err(line.err_at(2, format!("expected `with`, found {:?}", line.tokens[2].text)));
            }
            Ok(Move::Cancel { handle: line.index(1)?, dotted: line.index(3)? })
        }
        "pair+" => {
            line.arity(0)?;
            Ok(Move::AddPair)
        }
        "blowup" => {
            line.arity(1)?;
            Ok(Move::BlowUp { positive: sign(line, 1)? })
        }
        "blowdown" => {
            line.arity(1)?;
            Ok(Move::BlowDown { handle: line.index(1)? })
        }
        _ => Err(unknown(line, "`slide`, `cancel`, `pair+`, `blowup`, `blowdown` or `meta`")),
    }
}

pub fn parse_script(text: &str) -> Result<ScriptDoc, ParseError> {
    let mut meta = Vec::new();
    let mut moves = Vec::new();
    for line in lex(text) {
        if line.keyword() == "meta" {
            meta_line(&line, &mut meta)?;
        } else {
            moves.push(parse_move(&line)?);
        }
    }
    Ok(ScriptDoc { meta, script: MoveScript::new(moves) })
}

// ---------------------------------------------------------------- constraints

/// Constraints for the curve-family search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintsDoc {
    #[serde(skip)]
    pub meta: Meta,
    pub holes: usize,
    pub cycles: usize,
    /// Invariant factors of `H1`, e.g. `[]` for the trivial group; `None` = unconstrained.
    pub h1: Option<String>,
    pub b2: Option<usize>,
    /// Target intersection form, up to congruence.
    pub form: Option<Vec<Vec<i64>>>,
    /// Largest number of copies of one curve.
    pub multiplicity: usize,
    /// Cycles every result must start with, in order.
    pub prefix: Vec<StandardCurve>,
    /// Curves every result must contain.
    pub require: Vec<StandardCurve>,
    pub bound: i64,
    pub limit: Option<usize>,
}

impl ConstraintsDoc {
    pub fn new(holes: usize, cycles: usize) -> Self {
        ConstraintsDoc {
            meta: Vec::new(),
            holes,
            cycles,
            h1: None,
            b2: None,
            form: None,
            multiplicity: 1,
            prefix: Vec::new(),
            require: Vec::new(),
            bound: crate::forms::DEFAULT_BOUND,
            limit: None,
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        write_meta(&mut out, &self.meta);
        out.push_str(&format!("holes {}\n", self.holes));
        out.push_str(&format!("cycles {}\n", self.cycles));
        if let Some(h1) = &self.h1 {
            out.push_str(&format!("h1 {h1}\n"));
        }
        if let Some(b2) = self.b2 {
            out.push_str(&format!("b2 {b2}\n"));
        }
        if let Some(rows) = &self.form {
            for r in rows {
                out.push_str(&format!("form {}\n", join(r)));
            }
        }
        out.push_str(&format!("multiplicity {}\n", self.multiplicity));
        for c in &self.prefix {
            out.push_str(&format!("prefix {c}\n"));
        }
        for c in &self.require {
            out.push_str(&format!("require {c}\n"));
        }
        out.push_str(&format!("bound {}\n", self.bound));
        if let Some(l) = self.limit {
            out.push_str(&format!("limit {l}\n"));
        }
        out
    }
}

pub fn parse_constraints(text: &str) -> Result<ConstraintsDoc, ParseError> {
    let mut doc = ConstraintsDoc::new(0, 0);
    let (mut holes, mut cycles) = (None, None);
    let mut form_rows: Vec<Vec<i64>> = Vec::new();
    let mut multiplicity = None;
    for line in lex(text) {
        match line.keyword() {
            "meta" => meta_line(&line, &mut doc.meta)?,
            "holes" => {
                line.arity(1)?;
                holes = Some(line.index(1)?);
            }
            "cycles" => {
                line.arity(1)?;
                cycles = Some(line.count(1)?);
            }
            "h1" => {
                if line.tokens.len() < 2 {
                    return Err(line.err_at(1, "`h1` expects a group such as `0` or `Z/15`"));
                }
                doc.h1 = Some(line.rest(1).to_string());
            }
            "b2" => {
                line.arity(1)?;
                doc.b2 = Some(line.count(1)?);
            }
            "form" => {
                let row = (1..line.tokens.len()).map(|i| line.int(i)).collect::<Result<Vec<_>, _>>()?;
                if let Some(first) = form_rows.first() {
                    if first.len() != row.len() {
                        return Err(line.err_at(0, "`form` rows have different lengths"));
                    }
                }
                form_rows.push(row);
            }
            "multiplicity" => {
                line.arity(1)?;
                multiplicity = Some(line.index(1)?);
            }
            "prefix" | "require" => {
                if line.tokens.len() < 2 {
                    return Err(line.err_at(1, format!("`{}` expects a curve", line.keyword())));
                }
                let c = line.curve(1)?;
                if line.keyword() == "prefix" {
                    doc.prefix.push(c);
                } else {
                    doc.require.push(c);
                }
            }
            "bound" => {
                line.arity(1)?;
                doc.bound = line.index(1)? as i64;
            }
            "limit" => {
                line.arity(1)?;
                doc.limit = Some(line.count(1)?);
            }
            _ => return Err(unknown(&line, "a constraint keyword")),
        }
    }
    doc.holes = holes.ok_or(ParseError { line: 1, column: 1, message: "missing `holes` line".into() })?;
    doc.cycles = cycles.ok_or(ParseError { line: 1, column: 1, message: "missing `cycles` line".into() })?;
    if let Some(m) = multiplicity {
        doc.multiplicity = m;
    }
    if !form_rows.is_empty() {
        if form_rows.len() != form_rows[0].len() {
            return Err(ParseError { line: 1, column: 1, message: "`form` rows do not make a square matrix".into() });
        }
        doc.form = Some(form_rows);
    }
    Ok(doc)
}

// ---------------------------------------------------------------- expectations

/// `expect <object> <quantity> <value...> from <source>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub object: String,
    pub quantity: String,
    pub value: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpectationsDoc {
    pub meta: Meta,
    pub entries: Vec<Expectation>,
}

impl ExpectationsDoc {
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        write_meta(&mut out, &self.meta);
        for e in &self.entries {
            out.push_str(&format!("expect {} {} {} from {}\n", e.object, e.quantity, e.value, e.source));
        }
        out
    }

    pub fn get(&self, object: &str, quantity: &str) -> Option<&Expectation> {
        self.entries.iter().find(|e| e.object == object && e.quantity == quantity)
    }
}

pub fn parse_expectations(text: &str) -> Result<ExpectationsDoc, ParseError> {
    let mut doc = ExpectationsDoc::default();
    for line in lex(text) {
        match line.keyword() {
            "meta" => meta_line(&line, &mut doc.meta)?,
            "expect" => {
                let from = line
                    .tokens
                    .iter()
                    .rposition(|t| t.text == "from")
                    .ok_or_else(|| line.err_at(line.tokens.len(), "missing `from <source>`"))?;
                if from < 4 {
                    return Err(line.err_at(from.min(line.tokens.len()), "expected `expect <object> <quantity> <value> from <source>`"));
                }
                if from + 2 != line.tokens.len() {
                    return Err(line.err_at((from + 2).min(line.tokens.len() - 1), "expected exactly one source after `from`"));
                }
                let value = line.tokens[3..from].iter().map(|t| t.text).collect::<Vec<_>>().join(" ");
                doc.entries.push(Expectation {
                    object: line.tokens[1].text.to_string(),
                    quantity: line.tokens[2].text.to_string(),
                    value,
                    source: line.tokens[from + 1].text.to_string(),
                });
            }
            _ => return Err(unknown(&line, "`expect` or `meta`")),
        }
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palf_examples() {
        let d = parse_palf("holes 4\ncycle {1,2}").unwrap();
        assert_eq!(d.palf.holes(), 4);
        assert_eq!(d.palf.cycles().len(), 1);
        let e = parse_palf("holes 4\ncycle {}").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        assert!(e.message.contains("empty curve"));
        let canon = parse_palf("# comment\nholes 3\n\ncycle { 3, 1 }  # trailing\n").unwrap();
        assert_eq!(canon.serialize(), "holes 3\ncycle {1,3}\n");
        assert_eq!(parse_palf("holes 2\ncycle {3}").unwrap_err().line, 2);
    }

    #[test]
    fn script_examples() {
        let d = parse_script("slide 1 over 2 +").unwrap();
        assert_eq!(d.script.moves, vec![Move::Slide { handle: 1, over: 2, positive: true }]);
        let all = "slide 1 over 2 +\nslide 3 under 1 -\ncancel 2 with 1\npair+\nblowup -\nblowdown 3\n";
        assert_eq!(parse_script(all).unwrap().serialize(), all);
        let e = parse_script("slide 1 over x +").unwrap_err();
        assert_eq!((e.line, e.column), (1, 14));
        let e = parse_script("\n  twist 1").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert_eq!(ScriptDoc::default().serialize(), "");
    }

    #[test]
    fn kirby_round_trip() {
        let text = "meta name A\ndotted 1\nhandle f=0\nhandle f=-1\nL 0 1\nL 1 -1\nN 2\nN 1\ntag geo 2 1\nmark 1 1\nswaptag geo 2 1\n";
        let d = parse_kirby(text).unwrap();
        assert_eq!(d.serialize(), text);
        assert_eq!(d.diagram.bound(2, 1), Some(1));
        let e = parse_kirby("dotted 0\nhandle f=1\nL 2").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_kirby("dotted 1\nhandle f=0\nN 2\ntag geo 1 1").unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn constraints_and_expectations_round_trip() {
        let mut c = ConstraintsDoc::new(2, 3);
        c.h1 = Some("0".into());
        c.b2 = Some(1);
        c.form = Some(vec![vec![-3]]);
        c.require.push("{1,2}".parse().unwrap());
        assert_eq!(parse_constraints(&c.serialize()).unwrap(), c);
        let text = "expect A form [[-8,1],[1,-2]] from claim:intersection-matrix-A\n";
        let e = parse_expectations(text).unwrap();
        assert_eq!(e.entries[0].value, "[[-8,1],[1,-2]]");
        assert_eq!(e.serialize(), text);
        assert!(parse_expectations("expect A b2 2").is_err());
    }
}
