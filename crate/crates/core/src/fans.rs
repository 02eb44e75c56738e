//! Fans: the canonical disk diagrams joining two monotone words of equal
//! height in a LOG presentation whose ascending and descending links are
//! trees.
//!
//! A fan is built top-down. The top layer is the simple fan along the tree
//! path between the two top letters; each further layer attaches a simple
//! fan below every peak of the previous rim, plus one at each side. Layers
//! are stored top first, so layer `m` (1-based) is the bottom layer of the
//! fan on the top `m` letters.
//!
//! Ascending fans are the descending fans of the presentation with every
//! edge reversed; their vertex rims use inverted letters and their edge rims
//! the inverse `x_e` letters.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::log::{Curvature, LogEdge, LogPresentation};
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Descending,
    Ascending,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Descending => "descending",
            Direction::Ascending => "ascending",
        }
    }
}

/// An oriented relator square `C_e^±` placed in a fan.
///
/// `left`/`right` are the labels of its two upper edges, `down`/`up` the
/// letters of its vertex rim `down⁻¹ · up`, all in the working orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub edge: u32,
    pub positive: bool,
    pub left: u32,
    pub right: u32,
    pub down: u32,
    pub up: u32,
}

/// Where a block of a layer hangs from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attach {
    /// Below an empty layer (or at the top): pair `(L, R)`.
    Whole,
    /// Left side letter against the first down letter.
    Left,
    /// The peak between cells `j` and `j + 1` of the previous layer.
    Peak(usize),
    /// Last up letter against the right side letter.
    Right,
}

/// A simple fan inside a layer: cells `start..end` of the layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub attach: Attach,
    pub pair: (u32, u32),
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer {
    pub cells: Vec<u16>,
    pub blocks: Vec<Block>,
}

/// Precomputed simple fans for one presentation and direction.
#[derive(Clone, Debug)]
pub struct FanEngine {
    direction: Direction,
    names: Vec<String>,
    cells: Vec<Cell>,
    /// `paths[p * k + q]`: cell ids of the simple fan `Fan(p, q)`.
    paths: Vec<Vec<u16>>,
    k: usize,
}

impl FanEngine {
    pub fn new(p: &LogPresentation, direction: Direction) -> Result<Self> {
        let link = p.link();
        if link.classify_curvature() == Curvature::Fail {
            return Err(Error::InvalidParameter(
                "fans need a link of girth at least 4".into(),
            ));
        }
        let (desc, asc) = link.asc_desc_are_trees();
        let tree_ok = match direction {
            Direction::Descending => desc,
            Direction::Ascending => asc,
        };
        if !(desc && asc) {
            return Err(Error::NotATree(format!(
                "{} link of the presentation",
                if tree_ok { "opposite" } else { direction.as_str() }
            )));
        }
        let k = p.vertex_count();
        // Ascending fans live in the presentation with every edge reversed.
        let edges: Vec<LogEdge> = p
            .edges()
            .iter()
            .map(|e| match direction {
                Direction::Descending => *e,
                Direction::Ascending => LogEdge { from: e.to, to: e.from, label: e.label },
            })
            .collect();
        let mut cells = Vec::with_capacity(2 * edges.len());
        let mut adj: Vec<Vec<(usize, u16)>> = vec![Vec::new(); k];
        for (id, e) in edges.iter().enumerate() {
            let pos = Cell {
                edge: id as u32,
                positive: true,
                left: e.label as u32,
                right: e.to as u32,
                down: e.from as u32,
                up: e.label as u32,
            };
            let neg = Cell {
                edge: id as u32,
                positive: false,
                left: e.to as u32,
                right: e.label as u32,
                down: e.label as u32,
                up: e.from as u32,
            };
            adj[e.label].push((e.to, cells.len() as u16));
            cells.push(pos);
            adj[e.to].push((e.label, cells.len() as u16));
            cells.push(neg);
        }
        let mut paths = vec![Vec::new(); k * k];
        for src in 0..k {
            let mut via: Vec<Option<(usize, u16)>> = vec![None; k];
            let mut seen = vec![false; k];
            seen[src] = true;
            let mut queue = VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                for &(y, c) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        via[y] = Some((x, c));
                        queue.push_back(y);
                    }
                }
            }
            for dst in 0..k {
                let mut path = Vec::new();
                let mut at = dst;
                while let Some((prev, c)) = via[at] {
                    path.push(c);
                    at = prev;
                }
                path.reverse();
                paths[src * k + dst] = path;
            }
        }
        Ok(FanEngine {
            direction,
            names: p.vertices().to_vec(),
            cells,
            paths,
            k,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cell(&self, id: u16) -> &Cell {
        &self.cells[id as usize]
    }

    pub fn simple(&self, p: usize, q: usize) -> &[u16] {
        &self.paths[p * self.k + q]
    }

    /// `C`: the longest simple fan.
    pub fn max_simple_len(&self) -> usize {
        self.paths.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The vertex-rim letters of a cell in the caller's alphabet.
    pub fn vrim_letters(&self, id: u16) -> [Letter; 2] {
        let c = self.cell(id);
        match self.direction {
            Direction::Descending => [Letter::neg(c.down as usize), Letter::pos(c.up as usize)],
            Direction::Ascending => [Letter::pos(c.down as usize), Letter::neg(c.up as usize)],
        }
    }

    /// The edge-rim letter `x_e^{±1}` of a cell.
    pub fn erim_letter(&self, id: u16) -> Letter {
        let c = self.cell(id);
        let positive = match self.direction {
            Direction::Descending => c.positive,
            Direction::Ascending => !c.positive,
        };
        if positive {
            Letter::pos(c.edge as usize)
        } else {
            Letter::neg(c.edge as usize)
        }
    }

    fn side_letters(&self, w: &Word) -> Result<Vec<usize>> {
        let ok = match self.direction {
            Direction::Descending => w.is_positive(),
            Direction::Ascending => w.is_negative(),
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "{} fans need {} words",
                self.direction.as_str(),
                if self.direction == Direction::Descending { "positive" } else { "negative" }
            )));
        }
        let letters: Vec<usize> = w.letters().iter().map(|l| l.gen as usize).collect();
        if let Some(&g) = letters.iter().find(|&&g| g >= self.k) {
            return Err(Error::UnknownVertex(format!("generator #{g}")));
        }
        Ok(letters)
    }

    fn check_pair(&self, u: &Word, v: &Word) -> Result<(Vec<usize>, Vec<usize>)> {
        if u.len() != v.len() {
            return Err(Error::InvalidParameter("fan words must have equal length".into()));
        }
        Ok((self.side_letters(u)?, self.side_letters(v)?))
    }

    /// Builds the fan with its full cell structure.
    pub fn build(&self, u: &Word, v: &Word) -> Result<Fan> {
        let (su, sv) = self.check_pair(u, v)?;
        let n = su.len();
        let mut layers: Vec<Layer> = Vec::with_capacity(n);
        for m in 0..n {
            let (l, r) = (su[n - 1 - m], sv[n - 1 - m]);
            let mut next = Layer::default();
            let attach = |next: &mut Layer, a: Attach, p: usize, q: usize| {
                let start = next.cells.len();
                next.cells.extend_from_slice(self.simple(p, q));
                next.blocks.push(Block {
                    attach: a,
                    pair: (p as u32, q as u32),
                    start,
                    end: next.cells.len(),
                });
            };
            match layers.last() {
                Some(prev) if !prev.cells.is_empty() => {
                    let cells = &prev.cells;
                    attach(&mut next, Attach::Left, l, self.cell(cells[0]).down as usize);
                    for j in 0..cells.len() - 1 {
                        let p = self.cell(cells[j]).up as usize;
                        let q = self.cell(cells[j + 1]).down as usize;
                        attach(&mut next, Attach::Peak(j), p, q);
                    }
                    let last = self.cell(*cells.last().unwrap()).up as usize;
                    attach(&mut next, Attach::Right, last, r);
                }
                _ => attach(&mut next, Attach::Whole, l, r),
            }
            layers.push(next);
        }
        Ok(Fan {
            direction: self.direction,
            u: u.clone(),
            v: v.clone(),
            layers,
        })
    }

    /// Per-layer cell counts without storing the fan. Memory is linear in
    /// the height.
    pub fn stream_counts(&self, u: &Word, v: &Word) -> Result<Vec<u64>> {
        let (su, sv) = self.check_pair(u, v)?;
        let n = su.len();
        let sides: Vec<(usize, usize)> = (0..n).map(|m| (su[n - 1 - m], sv[n - 1 - m])).collect();
        let mut stream = Stream {
            engine: self,
            sides: &sides,
            last: vec![None; n],
            counts: vec![0; n],
        };
        if n > 0 {
            let (l, r) = sides[0];
            for &c in self.simple(l, r) {
                stream.push(0, c);
            }
            stream.finish(1);
        }
        Ok(stream.counts)
    }

    /// `|erim(Fan(a^m, b^m))|` for `m = 1..=n`.
    pub fn constant_rims(&self, a: usize, b: usize, n: usize) -> Result<Vec<u64>> {
        let (u, v) = self.constant_words(a, b, n);
        self.stream_counts(&u, &v)
    }

    pub fn constant_words(&self, a: usize, b: usize, n: usize) -> (Word, Word) {
        match self.direction {
            Direction::Descending => (Word::power(a, n), Word::power(b, n)),
            Direction::Ascending => (Word::power(a, n).inverse(), Word::power(b, n).inverse()),
        }
    }
}

struct Stream<'a> {
    engine: &'a FanEngine,
    sides: &'a [(usize, usize)],
    last: Vec<Option<u16>>,
    counts: Vec<u64>,
}

impl Stream<'_> {
    /// Feeds cell `c` into layer `m` (0-based) and emits what it hangs.
    fn push(&mut self, m: usize, c: u16) {
        self.counts[m] += 1;
        if m + 1 == self.sides.len() {
            return;
        }
        let e = self.engine;
        let p = match self.last[m] {
            None => self.sides[m + 1].0,
            Some(prev) => e.cell(prev).up as usize,
        };
        self.last[m] = Some(c);
        let q = e.cell(c).down as usize;
        for &d in e.simple(p, q) {
            self.push(m + 1, d);
        }
    }

    /// Closes layers `from - 1 ..` in order once their input is complete.
    fn finish(&mut self, from: usize) {
        for m in from..self.sides.len() {
            let e = self.engine;
            let (l, r) = self.sides[m];
            let p = match self.last[m - 1] {
                None => l,
                Some(prev) => e.cell(prev).up as usize,
            };
            for &d in e.simple(p, r) {
                self.push(m, d);
            }
        }
    }
}

/// A fan with its layered cell structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub direction: Direction,
    pub u: Word,
    pub v: Word,
    /// Top layer first.
    pub layers: Vec<Layer>,
}

impl Fan {
    pub fn height(&self) -> usize {
        self.layers.len()
    }

    pub fn area(&self) -> u64 {
        self.layers.iter().map(|l| l.cells.len() as u64).sum()
    }

    /// Rim of the bottom layer (empty for height 0).
    pub fn bottom(&self) -> &[u16] {
        self.layers.last().map_or(&[], |l| &l.cells)
    }

    pub fn erim(&self, engine: &FanEngine) -> Word {
        self.layer_erim(engine, self.height())
    }

    /// Edge rim of layer `m` (1-based), which is the edge rim of the fan on
    /// the top `m` letters.
    pub fn layer_erim(&self, engine: &FanEngine, m: usize) -> Word {
        if m == 0 {
            return Word::new();
        }
        Word(self.layers[m - 1].cells.iter().map(|&c| engine.erim_letter(c)).collect())
    }

    pub fn vrim(&self, engine: &FanEngine) -> Word {
        Word(self.bottom().iter().flat_map(|&c| engine.vrim_letters(c)).collect())
    }

    /// Structural audit: every block hangs from the letters it claims, holds
    /// the tree path between them, and every layer rim is reduced with
    /// pairwise distinct vertices.
    pub fn verify(&self, engine: &FanEngine) -> Result<()> {
        let n = self.height();
        let su: Vec<usize> = self.u.letters().iter().map(|l| l.gen as usize).collect();
        let sv: Vec<usize> = self.v.letters().iter().map(|l| l.gen as usize).collect();
        for (m, layer) in self.layers.iter().enumerate() {
            let (l, r) = (su[n - 1 - m] as u32, sv[n - 1 - m] as u32);
            let prev = if m == 0 { None } else { Some(&self.layers[m - 1]) };
            let mut at = 0;
            for b in &layer.blocks {
                if b.start != at || b.end < b.start {
                    return Err(Error::Mismatch(format!("layer {m}: blocks do not tile the rim")));
                }
                at = b.end;
                let expected = match (b.attach, prev) {
                    (Attach::Whole, None) => (l, r),
                    (Attach::Whole, Some(p)) if p.cells.is_empty() => (l, r),
                    (Attach::Left, Some(p)) if !p.cells.is_empty() => (l, engine.cell(p.cells[0]).down),
                    (Attach::Peak(j), Some(p)) if j + 1 < p.cells.len() => {
                        (engine.cell(p.cells[j]).up, engine.cell(p.cells[j + 1]).down)
                    }
                    (Attach::Right, Some(p)) if !p.cells.is_empty() => {
                        (engine.cell(*p.cells.last().unwrap()).up, r)
                    }
                    _ => return Err(Error::Mismatch(format!("layer {m}: misplaced block"))),
                };
                if b.pair != expected {
                    return Err(Error::Mismatch(format!("layer {m}: block hangs from the wrong edges")));
                }
                let cells = &layer.cells[b.start..b.end];
                if cells != engine.simple(b.pair.0 as usize, b.pair.1 as usize) {
                    return Err(Error::Mismatch(format!("layer {m}: block is not the simple fan")));
                }
                // consecutive cells share their upper edge
                let mut top = b.pair.0;
                for &c in cells {
                    let cell = engine.cell(c);
                    if cell.left != top {
                        return Err(Error::Mismatch(format!("layer {m}: cells are not glued")));
                    }
                    top = cell.right;
                }
                if !cells.is_empty() && top != b.pair.1 {
                    return Err(Error::Mismatch(format!("layer {m}: block ends on the wrong edge")));
                }
            }
            if at != layer.cells.len() {
                return Err(Error::Mismatch(format!("layer {m}: blocks do not cover the rim")));
            }
            let erim = self.layer_erim(engine, m + 1);
            if !erim.is_reduced() {
                return Err(Error::Mismatch(format!("layer {m}: edge rim is not reduced")));
            }
            if !level_injective(&erim) {
                return Err(Error::Mismatch(format!("layer {m}: a level vertex repeats")));
            }
        }
        let vrim = self.vrim(engine);
        if !vrim.is_reduced() {
            return Err(Error::Mismatch("vertex rim is not reduced".into()));
        }
        if vrim.len() != 2 * self.erim(engine).len() {
            return Err(Error::Mismatch("|vrim| != 2 |erim|".into()));
        }
        Ok(())
    }
}

/// The vertices visited by an edge-rim path in the level tree are pairwise
/// distinct. Each prefix is reduced to a normal form and hashed.
pub fn level_injective(erim: &Word) -> bool {
    let mut stack: Vec<Letter> = Vec::new();
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    seen.insert(Vec::new());
    for &l in erim.letters() {
        if stack.last() == Some(&l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
        if !seen.insert(stack.clone()) {
            return false;
        }
    }
    true
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `f_{i,j}(n) = Σ_{k=i+1}^{j} C(n+k-1, n-1)`.
pub fn closed_form_f(i: u64, j: u64, n: u64) -> BigUint {
    if n == 0 || j <= i {
        return BigUint::zero();
    }
    (i + 1..=j).map(|k| binomial(n + k - 1, n - 1)).sum()
}

/// One row of a rim table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RimRow {
    pub i: usize,
    pub j: usize,
    pub n: usize,
    pub constructed: u64,
    pub closed_form: BigUint,
}

impl RimRow {
    pub fn matches(&self) -> bool {
        BigUint::from(self.constructed) == self.closed_form
    }
}

/// Descending rim lengths `f_{i,j}(n) = |erim(Fan(a_i^n, a_j^n))|` in `Ψ_d`,
/// built by construction and checked against the recursion
/// `f_{i,j}(n) = f_{i,j-1}(n) + f_{0,j}(n-1) + 1` and against explicit fans
/// for small heights. Any disagreement is an error.
pub fn rim_table_poly(d: usize, max_n: usize) -> Result<Vec<RimRow>> {
    let p = crate::log::preset_poly(d)?;
    let engine = FanEngine::new(&p, Direction::Descending)?;
    let a = |i: usize| i + 1;
    // constructed[i][j][n]
    let mut built = vec![vec![vec![0u64; max_n + 1]; d + 1]; d + 1];
    for i in 0..=d {
        for j in i + 1..=d {
            let rims = engine.constant_rims(a(i), a(j), max_n)?;
            built[i][j][1..].copy_from_slice(&rims);
        }
    }
    let rec = poly_recursion_table(d, max_n);
    for i in 0..=d {
        for j in i + 1..=d {
            for n in 0..=max_n {
                if BigUint::from(built[i][j][n]) != rec[i][j][n] {
                    return Err(Error::Mismatch(format!(
                        "f_{{{i},{j}}}({n}): construction {} vs recursion {}",
                        built[i][j][n], rec[i][j][n]
                    )));
                }
            }
        }
    }
    let explicit_n = max_n.min(10);
    for i in 0..=d {
        for j in i + 1..=d {
            let (u, v) = engine.constant_words(a(i), a(j), explicit_n);
            let fan = engine.build(&u, &v)?;
            fan.verify(&engine)?;
            for m in 1..=explicit_n {
                if fan.layers[m - 1].cells.len() as u64 != built[i][j][m] {
                    return Err(Error::Mismatch(format!("f_{{{i},{j}}}({m}): explicit fan disagrees with the stream")));
                }
            }
        }
    }
    let mut rows = Vec::new();
    for i in 0..=d {
        for j in i + 1..=d {
            for n in 0..=max_n {
                rows.push(RimRow {
                    i,
                    j,
                    n,
                    constructed: built[i][j][n],
                    closed_form: closed_form_f(i as u64, j as u64, n as u64),
                });
            }
        }
    }
    Ok(rows)
}

/// The table defined only by recursion (*) and its boundary values.
pub fn poly_recursion_table(d: usize, max_n: usize) -> Vec<Vec<Vec<BigUint>>> {
    let mut f = vec![vec![vec![BigUint::zero(); max_n + 1]; d + 1]; d + 1];
    for n in 1..=max_n {
        for j in 1..=d {
            for i in (0..j).rev() {
                let v = &f[i][j - 1][n] + &f[0][j][n - 1] + 1u32;
                f[i][j][n] = v;
            }
        }
    }
    f
}

/// Ascending rim lengths in `Ψ_d`, keyed by vertex names.
#[derive(Clone, Debug, Serialize)]
pub struct AscendingTable {
    pub d: usize,
    pub max_n: usize,
    /// `rims[p][q][n]` for vertex indices `p, q` of `Ψ_d` (0 is `s`).
    pub rims: Vec<Vec<Vec<u64>>>,
}

impl AscendingTable {
    /// `f_{p,q}(n)` where `p, q` are `None` for `s` or `Some(i)` for `a_i`.
    pub fn f(&self, p: Option<usize>, q: Option<usize>, n: usize) -> u64 {
        let idx = |x: Option<usize>| x.map_or(0, |i| i + 1);
        self.rims[idx(p)][idx(q)][n]
    }
}

/// Findings of the ascending audit. Recursion (2) is reported, never
/// enforced.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AscendingAudit {
    pub failures: Vec<String>,
    pub recursion_two_mismatches: Vec<String>,
}

pub fn rim_table_ascending(d: usize, max_n: usize) -> Result<AscendingTable> {
    let p = crate::log::preset_poly(d)?;
    let engine = FanEngine::new(&p, Direction::Ascending)?;
    let k = p.vertex_count();
    let mut rims = vec![vec![vec![0u64; max_n + 1]; k]; k];
    for a in 0..k {
        for b in 0..k {
            if a != b {
                let r = engine.constant_rims(a, b, max_n)?;
                rims[a][b][1..].copy_from_slice(&r);
            }
        }
    }
    Ok(AscendingTable { d, max_n, rims })
}

/// Checks `f_{s,0}(n) = n`, `f_{0,1}(n) = n`, `f_{i,k}(1) = 2`,
/// `f_{s,i}(n) = n + f_{0,i}(n)` and `f_{0,i+1}(n) = 1 + f_{i,i+1}(n-1)`.
/// Recursion (2), `f_{i,k}(n) = 2 + f_{i-1,i}(n-1) + f_{k-1,k}(n-1)`, is only
/// recorded.
pub fn audit_ascending(t: &AscendingTable) -> AscendingAudit {
    let d = t.d;
    let mut audit = AscendingAudit::default();
    let mut check = |ok: bool, what: String| {
        if !ok {
            audit.failures.push(what);
        }
    };
    for n in 1..=t.max_n {
        let nn = n as u64;
        check(t.f(None, Some(0), n) == nn, format!("f_{{s,0}}({n}) = {}", t.f(None, Some(0), n)));
        check(t.f(Some(0), Some(1), n) == nn, format!("f_{{0,1}}({n}) = {}", t.f(Some(0), Some(1), n)));
        for i in 1..=d {
            let lhs = t.f(None, Some(i), n);
            let rhs = nn + t.f(Some(0), Some(i), n);
            check(lhs == rhs, format!("f_{{s,{i}}}({n}) = {lhs}, n + f_{{0,{i}}}({n}) = {rhs}"));
        }
        if n >= 2 {
            for i in 0..d {
                let lhs = t.f(Some(0), Some(i + 1), n);
                let rhs = 1 + t.f(Some(i), Some(i + 1), n - 1);
                check(lhs == rhs, format!("(1) at i={i}, n={n}: {lhs} vs {rhs}"));
            }
        }
    }
    for i in 1..=d {
        for k in i + 1..=d {
            check(t.f(Some(i), Some(k), 1) == 2, format!("f_{{{i},{k}}}(1) = {}", t.f(Some(i), Some(k), 1)));
            for n in 2..=t.max_n {
                let lhs = t.f(Some(i), Some(k), n);
                let rhs = 2 + t.f(Some(i - 1), Some(i), n - 1) + t.f(Some(k - 1), Some(k), n - 1);
                if lhs != rhs {
                    audit
                        .recursion_two_mismatches
                        .push(format!("f_{{{i},{k}}}({n}) = {lhs}, recursion gives {rhs}"));
                }
            }
        }
    }
    audit
}

/// Exponential growth report for `Fan(src^n, dst^n)`.
#[derive(Clone, Debug, Serialize)]
pub struct ExpGrowth {
    pub rims: Vec<u64>,
    pub areas: Vec<u64>,
    pub base: f64,
    pub r_squared: f64,
    pub c: usize,
    pub rim_bound_ok: bool,
    pub area_bound_ok: bool,
}

pub fn measure_exp_growth(p: &LogPresentation, src: &str, dst: &str, max_n: usize) -> Result<ExpGrowth> {
    let engine = FanEngine::new(p, Direction::Descending)?;
    let (a, b) = (p.vertex_index(src)?, p.vertex_index(dst)?);
    let rims = engine.constant_rims(a, b, max_n)?;
    if rims.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Mismatch("rim lengths are not monotone".into()));
    }
    let mut areas = Vec::with_capacity(rims.len());
    let mut acc = 0u64;
    for &r in &rims {
        acc += r;
        areas.push(acc);
    }
    let c = engine.max_simple_len();
    let pow = |n: usize| (c as f64).powi(n as i32);
    let rim_bound_ok = rims.iter().enumerate().all(|(i, &r)| (r as f64) <= pow(i + 1));
    let area_bound_ok = areas.iter().enumerate().all(|(i, &a)| (a as f64) <= pow(i + 2));
    let pts: Vec<(f64, f64)> = rims
        .iter()
        .enumerate()
        .map(|(i, &r)| ((i + 1) as f64, (r.max(1) as f64).ln()))
        .collect();
    let half = &pts[pts.len() / 2..];
    let (slope, _, r2) = crate::stats::least_squares(half).unwrap_or((0.0, 0.0, 0.0));
    Ok(ExpGrowth {
        rims,
        areas,
        base: slope.exp(),
        r_squared: r2,
        c,
        rim_bound_ok,
        area_bound_ok,
    })
}

/// Image at height 0 of an edge pushed down from height `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PushedPath {
    /// `h = 0`: the edge is fixed.
    Identity,
    /// Commuting letters: `|h|` level edges `(a b⁻¹)^{±1}` in a flat.
    Flat { a: String, b: String, edges: u64 },
    /// Perturbing letters: the edge rim of the fan between `a^|h|`, `b^|h|`.
    Fan { direction: Direction, erim: Word, edges: u64 },
}

impl PushedPath {
    pub fn level_edges(&self) -> u64 {
        match self {
            PushedPath::Identity => 0,
            PushedPath::Flat { edges, .. } | PushedPath::Fan { edges, .. } => *edges,
        }
    }

    /// Length of the path as a word in the vertex alphabet.
    pub fn vrim_len(&self) -> u64 {
        2 * self.level_edges()
    }
}

/// Pushing context: one LOG piece plus the pairs known to commute with it
/// (or with each other) in the ambient group.
#[derive(Clone, Debug)]
pub struct PushContext {
    log: LogPresentation,
    desc: FanEngine,
    asc: FanEngine,
    commuting: Vec<(String, String)>,
}

impl PushContext {
    pub fn new(log: LogPresentation, commuting: Vec<(String, String)>) -> Result<Self> {
        let desc = FanEngine::new(&log, Direction::Descending)?;
        let asc = FanEngine::new(&log, Direction::Ascending)?;
        Ok(PushContext { log, desc, asc, commuting })
    }

    pub fn log(&self) -> &LogPresentation {
        &self.log
    }

    pub fn commute(&self, a: &str, b: &str) -> bool {
        self.commuting
            .iter()
            .any(|(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    fn perturbing(&self, a: &str, b: &str) -> Option<(usize, usize)> {
        match (self.log.index_of(a), self.log.index_of(b)) {
            (Some(x), Some(y)) if x != y => Some((x, y)),
            _ => None,
        }
    }

    pub fn push_edge(&self, a: &str, b: &str, h: i64) -> Result<PushedPath> {
        if h == 0 {
            return Ok(PushedPath::Identity);
        }
        let n = h.unsigned_abs() as usize;
        if let Some((x, y)) = self.perturbing(a, b) {
            let engine = if h > 0 { &self.desc } else { &self.asc };
            let (u, v) = engine.constant_words(x, y, n);
            let fan = engine.build(&u, &v)?;
            let erim = fan.erim(engine);
            return Ok(PushedPath::Fan {
                direction: engine.direction(),
                edges: erim.len() as u64,
                erim,
            });
        }
        if self.commute(a, b) {
            return Ok(PushedPath::Flat { a: a.into(), b: b.into(), edges: n as u64 });
        }
        Err(Error::NotAdjacent(a.into(), b.into()))
    }

    /// Area of the pushed image of a link 2-cell at height `h`.
    ///
    /// `third` is the letter commuting with both of `pair`. For a commuting
    /// triple the image is a flat triangle of area `h²`; for a perturbing
    /// pair it is the fan between `a^|h|` and `b^|h|`.
    pub fn pushed_cell_area(&self, pair: (&str, &str), third: &str, h: i64) -> Result<u64> {
        let (a, b) = pair;
        let n = h.unsigned_abs() as usize;
        if let Some((x, y)) = self.perturbing(a, b) {
            if !(self.commute(a, third) && self.commute(b, third)) {
                return Err(Error::NotAdjacent(third.into(), format!("{a}/{b}")));
            }
            let engine = if h >= 0 { &self.desc } else { &self.asc };
            let counts = engine.constant_rims(x, y, n)?;
            return Ok(counts.iter().sum());
        }
        if self.commute(a, b) && self.commute(a, third) && self.commute(b, third) {
            return Ok((n * n) as u64);
        }
        Err(Error::NotAdjacent(a.into(), b.into()))
    }

    pub fn max_simple_len(&self) -> usize {
        self.desc.max_simple_len().max(self.asc.max_simple_len())
    }
}

pub fn to_u64(b: &BigUint) -> Option<u64> {
    b.to_u64()
}


/// Offsets placing each layer `m` of `small` as a contiguous run of cells in
/// layer `m + shift` of `big`, or `None` if some layer does not fit.
pub fn subfan_offsets(big: &Fan, small: &Fan, shift: usize) -> Option<Vec<usize>> {
    if small.height() + shift > big.height() {
        return None;
    }
    small
        .layers
        .iter()
        .enumerate()
        .map(|(m, layer)| {
            let host = &big.layers[m + shift].cells;
            if layer.cells.is_empty() {
                return Some(0);
            }
            host.windows(layer.cells.len()).position(|w| w == layer.cells.as_slice())
        })
        .collect()
}

/// Whether `Fan(x^n, y^n)` contains `Fan(a^{n-1}, b^{n-1})` one layer down.
pub fn contains_subfan(
    engine: &FanEngine,
    anchor: (usize, usize),
    pair: (usize, usize),
    n: usize,
) -> Result<Option<Vec<usize>>> {
    if n < 2 {
        return Err(Error::InvalidParameter("sub-fan check needs n >= 2".into()));
    }
    let (u, v) = engine.constant_words(anchor.0, anchor.1, n);
    let big = engine.build(&u, &v)?;
    let (a, b) = engine.constant_words(pair.0, pair.1, n - 1);
    let small = engine.build(&a, &b)?;
    Ok(subfan_offsets(&big, &small, 1))
}

/// A presentation for the exponential case with its distinguished pair
/// `(src, dst)` and the fan anchor `(anchor, end)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPreset {
    pub log: LogPresentation,
    pub src: String,
    pub dst: String,
    pub anchor: String,
    pub end: String,
}

#[derive(Serialize, serde::Deserialize)]
struct ExpPresetFile {
    note: String,
    src: String,
    dst: String,
    anchor: String,
    end: String,
    log: crate::log::LogFile,
}

const SHIPPED_EXP: &str = include_str!("../../../data/psi_inf.json");

/// Height used when a search candidate is screened for sub-fan containment.
const SCREEN_HEIGHT: usize = 4;

impl ExpPreset {
    pub fn to_json(&self) -> String {
        let file = ExpPresetFile {
            note: SUBSTITUTE_NOTE.into(),
            src: self.src.clone(),
            dst: self.dst.clone(),
            anchor: self.anchor.clone(),
            end: self.end.clone(),
            log: self.log.to_file(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ExpPresetFile = serde_json::from_str(text)?;
        let log = LogPresentation::from_file(&f.log)?;
        for v in [&f.src, &f.dst, &f.anchor, &f.end] {
            log.vertex_index(v)?;
        }
        Ok(ExpPreset { log, src: f.src, dst: f.dst, anchor: f.anchor, end: f.end })
    }

    fn index(&self, v: &str) -> usize {
        self.log.vertex_index(v).expect("checked on construction")
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.index(&self.src), self.index(&self.dst))
    }

    pub fn anchor_pair(&self) -> (usize, usize) {
        (self.index(&self.anchor), self.index(&self.end))
    }
}

const SUBSTITUTE_NOTE: &str = "Girth-4 substitute: no LOG on three or more vertices has a girth-5 link \
with tree sublinks, so this presentation keeps twin trees, the independent quadruple, the \
distance-2 conditions and exponential fan growth, but its link has girth 4.";

/// The shipped exponential-case presentation, named `t, a1..a5`.
pub fn preset_exp() -> Result<ExpPreset> {
    ExpPreset::from_json(SHIPPED_EXP)
}

/// Searches `k` vertices for a twin-tree LOG of link girth at least 4 whose
/// distinguished pair has the quadruple and distance conditions, rims that
/// keep growing by a factor of at least 1.2 per step up to height 14, and an
/// anchor pair whose fans contain the pair's fans one layer down. The result
/// is renamed with [`name_candidate`](crate::log::name_candidate).
pub fn search_exp_substitute(k: usize) -> Result<Option<ExpPreset>> {
    let anchor_for = |p: &LogPresentation, s: usize, t: usize| -> Option<(usize, usize)> {
        let engine = FanEngine::new(p, Direction::Descending).ok()?;
        let rims = engine.constant_rims(s, t, 14).ok()?;
        if rims.windows(2).skip(6).any(|w| (w[1] as f64) < 1.2 * w[0] as f64) {
            return None;
        }
        let k = p.vertex_count();
        (0..k)
            .flat_map(|x| (0..k).map(move |y| (x, y)))
            .filter(|&(x, y)| x != y && ![x, y].iter().any(|v| *v == s || *v == t))
            .find(|&a| matches!(contains_subfan(&engine, a, (s, t), SCREEN_HEIGHT), Ok(Some(_))))
    };
    let Some(found) = crate::log::search_twin_tree(k, 4, |p, s, t| anchor_for(p, s, t).is_some())? else {
        return Ok(None);
    };
    let s = found.log.vertex_index(&found.src)?;
    let t = found.log.vertex_index(&found.dst)?;
    let (x, y) = anchor_for(&found.log, s, t).expect("accepted by the search");
    let names = found.log.vertices();
    let named = crate::log::name_candidate(&found, &names[x], &names[y])?;
    // list vertices as t, a1, a2, ...
    let order: Vec<String> = std::iter::once("t".to_string())
        .chain((1..k).map(|i| format!("a{i}")))
        .collect();
    let file = named.log.to_file();
    let edges: Vec<(&str, &str, &str)> = file
        .edges
        .iter()
        .map(|e| (e.from.as_str(), e.to.as_str(), e.label.as_str()))
        .collect();
    Ok(Some(ExpPreset {
        log: LogPresentation::new(&order.iter().map(String::as_str).collect::<Vec<_>>(), &edges)?,
        src: named.src,
        dst: named.dst,
        anchor: "t".into(),
        end: format!("a{}", k - 1),
    }))
}
