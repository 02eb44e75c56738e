//! LOG presentations: a directed graph `Ψ` with a labelling `λ: EΨ → VΨ`.
//!
//! Each edge `e` gives the relator `(λe)(∂₊e)(λe)⁻¹(∂₋e)⁻¹`. The vertex link
//! of the one-vertex presentation complex lives on the signed vertices
//! `v+`, `v-`, and every relator square contributes four corners.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{self, Multigraph, SignedVertex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::word::{Letter, Presentation, Word};

/// One edge of `Ψ`, by vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogEdge {
    pub from: usize,
    pub to: usize,
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogPresentation {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<LogEdge>,
}

/// On-disk form: `{ "vertices": [...], "edges": [{ "from", "to", "label" }] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogFile {
    pub vertices: Vec<String>,
    pub edges: Vec<LogFileEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogFileEdge {
    pub from: String,
    pub to: String,
    pub label: String,
}

impl LogPresentation {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        let mut p = LogPresentation {
            vertices: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        };
        for v in vertices {
            let v = v.as_ref();
            if p.index.insert(v.to_string(), p.vertices.len()).is_some() {
                return Err(Error::LabelCollision(v.to_string()));
            }
            p.vertices.push(v.to_string());
        }
        for (from, to, label) in edges {
            let e = LogEdge {
                from: p.require(from.as_ref())?,
                to: p.require(to.as_ref())?,
                label: p.require(label.as_ref())?,
            };
            p.edges.push(e);
        }
        Ok(p)
    }

    fn from_indexed(vertices: Vec<String>, edges: Vec<LogEdge>) -> Self {
        let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        LogPresentation { vertices, index, edges }
    }

    fn require(&self, v: &str) -> Result<usize> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[LogEdge] {
        &self.edges
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn vertex_index(&self, v: &str) -> Result<usize> {
        self.require(v)
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    /// `r_e = (λe)(∂₊e)(λe)⁻¹(∂₋e)⁻¹` over the vertex alphabet.
    pub fn relator(&self, e: usize) -> Word {
        let LogEdge { from, to, label } = self.edges[e];
        Word(vec![
            Letter::pos(label),
            Letter::pos(to),
            Letter::neg(label),
            Letter::neg(from),
        ])
    }

    pub fn presentation(&self) -> Presentation {
        let relators: Vec<Word> = (0..self.edges.len()).map(|e| self.relator(e)).collect();
        for r in &relators {
            assert_eq!(r.exponent_sum(), 0, "relator leaves the kernel of the height map");
        }
        Presentation {
            generators: self.vertices.clone(),
            relators,
        }
    }

    /// Plain-text presentation: a `generators:` line, then one relator per line.
    pub fn emit_presentation(&self) -> String {
        self.presentation().to_text()
    }

    pub fn to_file(&self) -> LogFile {
        LogFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| LogFileEdge {
                    from: self.vertices[e.from].clone(),
                    to: self.vertices[e.to].clone(),
                    label: self.vertices[e.label].clone(),
                })
                .collect(),
        }
    }

    pub fn from_file(f: &LogFile) -> Result<Self> {
        let edges: Vec<(&str, &str, &str)> = f
            .edges
            .iter()
            .map(|e| (e.from.as_str(), e.to.as_str(), e.label.as_str()))
            .collect();
        let vertices: Vec<&str> = f.vertices.iter().map(String::as_str).collect();
        Self::new(&vertices, &edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    /// The presentation with vertices renamed.
    pub fn renamed(&self, names: &[String]) -> Result<Self> {
        if names.len() != self.vertices.len() {
            return Err(Error::InvalidParameter("rename needs one name per vertex".into()));
        }
        let mut p = Self::from_indexed(names.to_vec(), self.edges.clone());
        if p.index.len() != names.len() {
            let dup = names.iter().find(|n| names.iter().filter(|m| m == n).count() > 1).unwrap();
            return Err(Error::LabelCollision(dup.clone()));
        }
        p.edges.sort_by_key(|e| (names[e.from].clone(), names[e.to].clone(), names[e.label].clone()));
        Ok(p)
    }

    pub fn link(&self) -> LinkGraph {
        LinkGraph::of(self)
    }
}

/// The polynomial preset `Ψ_d` on `s, a0, …, ad`.
pub fn preset_poly(d: usize) -> Result<LogPresentation> {
    if d < 1 {
        return Err(Error::InvalidParameter("the polynomial preset needs d >= 1".into()));
    }
    let mut vertices = vec!["s".to_string()];
    vertices.extend((0..=d).map(|i| format!("a{i}")));
    let mut edges = vec![LogEdge { from: 1, to: 1, label: 0 }];
    for i in 0..d {
        edges.push(LogEdge { from: 1, to: 1 + i, label: 2 + i });
    }
    Ok(LogPresentation::from_indexed(vertices, edges))
}

/// Which corner of a relator square a link edge comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    /// `{λe+, ∂₊e+}`
    Descending,
    /// `{λe-, ∂₋e-}`
    Ascending,
    /// `{λe+, ∂₊e-}`
    MixedTop,
    /// `{λe-, ∂₋e+}`
    MixedBottom,
}

/// Signed vertex index: `2v` is `v+`, `2v + 1` is `v-`.
pub fn plus(v: usize) -> usize {
    2 * v
}

pub fn minus(v: usize) -> usize {
    2 * v + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkEdge {
    pub a: usize,
    pub b: usize,
    pub edge: usize,
    pub corner: Corner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Fail,
    Npc,
    NpcHyperbolic,
}

impl Curvature {
    pub fn as_str(self) -> &'static str {
        match self {
            Curvature::Fail => "fail",
            Curvature::Npc => "npc",
            Curvature::NpcHyperbolic => "npc_hyperbolic",
        }
    }
}

/// `link(∗, P(Ψ, λ))` on the signed vertex set.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    base: Vec<String>,
    edges: Vec<LinkEdge>,
}

impl LinkGraph {
    pub fn of(p: &LogPresentation) -> Self {
        let mut edges = Vec::with_capacity(4 * p.edges.len());
        for (id, e) in p.edges.iter().enumerate() {
            let corners = [
                (plus(e.label), plus(e.to), Corner::Descending),
                (minus(e.label), minus(e.from), Corner::Ascending),
                (plus(e.label), minus(e.to), Corner::MixedTop),
                (minus(e.label), plus(e.from), Corner::MixedBottom),
            ];
            for (a, b, corner) in corners {
                edges.push(LinkEdge { a, b, edge: id, corner });
            }
        }
        LinkGraph {
            base: p.vertices.clone(),
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.base.len()
    }

    pub fn edges(&self) -> &[LinkEdge] {
        &self.edges
    }

    pub fn label(&self, signed: usize) -> String {
        let v = self.base[signed / 2].as_str();
        if signed % 2 == 0 {
            SignedVertex::plus(v).label()
        } else {
            SignedVertex::minus(v).label()
        }
    }

    pub fn multigraph(&self) -> Multigraph {
        Multigraph {
            vertex_count: self.vertex_count(),
            edges: self.edges.iter().map(|e| (e.a, e.b)).collect(),
        }
    }

    pub fn girth(&self) -> Option<usize> {
        complex::girth(&self.multigraph())
    }

    pub fn classify_curvature(&self) -> Curvature {
        match self.girth() {
            Some(g) if g <= 3 => Curvature::Fail,
            Some(4) => Curvature::Npc,
            _ => Curvature::NpcHyperbolic,
        }
    }

    fn sub_edges(&self, corner: Corner) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|e| e.corner == corner)
            .map(|e| (e.a / 2, e.b / 2))
            .collect()
    }

    /// Descending link as a multigraph on base-vertex indices.
    pub fn descending(&self) -> Multigraph {
        Multigraph {
            vertex_count: self.base.len(),
            edges: self.sub_edges(Corner::Descending),
        }
    }

    pub fn ascending(&self) -> Multigraph {
        Multigraph {
            vertex_count: self.base.len(),
            edges: self.sub_edges(Corner::Ascending),
        }
    }

    /// `(descending is a tree, ascending is a tree)`.
    pub fn asc_desc_are_trees(&self) -> (bool, bool) {
        (is_tree(&self.descending()), is_tree(&self.ascending()))
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        complex::distance(&self.multigraph(), a, b)
    }

    /// Link edges with both ends in `set` (signed indices).
    pub fn edges_within(&self, set: &[usize]) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|e| set.contains(&e.a) && set.contains(&e.b))
            .map(|e| (e.a, e.b))
            .collect()
    }

    /// The link as a 1-dimensional complex on labels `v+`, `v-`.
    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        let labels: Vec<String> = (0..self.vertex_count()).map(|i| self.label(i)).collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut faces = Vec::new();
        for e in &self.edges {
            if e.a == e.b {
                return Err(Error::Loop(labels[e.a].clone()));
            }
            if !seen.insert((e.a.min(e.b), e.a.max(e.b))) {
                return Err(Error::ParallelEdge(labels[e.a].clone(), labels[e.b].clone()));
            }
            faces.push(vec![labels[e.a].clone(), labels[e.b].clone()]);
        }
        SimplicialComplex::from_faces(&labels, &faces)
    }
}

/// Connected and acyclic on all of its vertices.
pub fn is_tree(g: &Multigraph) -> bool {
    if g.vertex_count == 0 || g.edges.len() + 1 != g.vertex_count {
        return false;
    }
    let mut parent: Vec<usize> = (0..g.vertex_count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in &g.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Outcome of the hyperbolic-preset checks for a pair `(src, dst)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpValidation {
    pub girth: Option<usize>,
    pub desc_tree: bool,
    pub asc_tree: bool,
    pub quadruple_edges: Vec<(String, String)>,
    pub dist_src: Option<usize>,
    pub dist_dst: Option<usize>,
    pub dist_src_dst: Option<usize>,
    pub failures: Vec<String>,
}

impl ExpValidation {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate_exp_log(p: &LogPresentation, src: &str, dst: &str) -> Result<ExpValidation> {
    let s = p.vertex_index(src)?;
    let t = p.vertex_index(dst)?;
    let link = p.link();
    let girth = link.girth();
    let (desc_tree, asc_tree) = link.asc_desc_are_trees();
    let quad = [plus(s), minus(s), plus(t), minus(t)];
    let quadruple_edges: Vec<(String, String)> = link
        .edges_within(&quad)
        .into_iter()
        .map(|(a, b)| (link.label(a), link.label(b)))
        .collect();
    let dist_src = link.distance(plus(s), minus(s));
    let dist_dst = link.distance(plus(t), minus(t));
    let dist_src_dst = link.distance(plus(s), plus(t));
    let mut failures = Vec::new();
    if s == t {
        failures.push("src and dst coincide".to_string());
    }
    if girth != Some(5) {
        failures.push(format!("girth is {girth:?}, expected 5"));
    }
    if !desc_tree {
        failures.push("descending link is not a tree".to_string());
    }
    if !asc_tree {
        failures.push("ascending link is not a tree".to_string());
    }
    if !quadruple_edges.is_empty() {
        failures.push("src/dst quadruple spans link edges".to_string());
    }
    for (name, d) in [("src+ to src-", dist_src), ("dst+ to dst-", dist_dst), ("src+ to dst+", dist_src_dst)] {
        if d != Some(2) {
            failures.push(format!("distance {name} is {d:?}, expected 2"));
        }
    }
    Ok(ExpValidation {
        girth,
        desc_tree,
        asc_tree,
        quadruple_edges,
        dist_src,
        dist_dst,
        dist_src_dst,
        failures,
    })
}

/// A presentation found by [`search_exp_log`] with its distinguished pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpCandidate {
    pub log: LogPresentation,
    pub src: String,
    pub dst: String,
}

/// Exhaustive search over LOGs on `k` vertices with `k - 1` edges whose
/// link has girth 5, twin tree sublinks, and a pair passing
/// [`validate_exp_log`]. Edge sets are enumerated as increasing sequences of
/// `(from, to, label)` triples; the lexicographically least hit is returned.
///
/// No LOG on three or more vertices can pass (see [`endpoint_four_cycle`]),
/// so for `k >= 3` this exhausts the space and returns `None`.
pub fn search_exp_log(k: usize) -> Result<Option<ExpCandidate>> {
    search_twin_tree(k, 5, |_, _, _| true)
}

/// The same enumeration with a configurable girth floor and an extra
/// acceptance test on `(presentation, src, dst)`. The distinguished pair must
/// still have an independent quadruple and the three distance-2 conditions.
pub fn search_twin_tree<F>(k: usize, min_girth: usize, accept: F) -> Result<Option<ExpCandidate>>
where
    F: Fn(&LogPresentation, usize, usize) -> bool + Sync,
{
    if k == 0 || k > MAX_SEARCH_VERTICES {
        return Err(Error::InvalidParameter(format!(
            "search supports 1..={MAX_SEARCH_VERTICES} vertices"
        )));
    }
    if !(3..=5).contains(&min_girth) {
        return Err(Error::InvalidParameter("girth floor must be 3, 4 or 5".into()));
    }
    if k < 2 {
        return Ok(None);
    }
    let triples: Vec<LogEdge> = (0..k)
        .flat_map(|from| (0..k).flat_map(move |to| (0..k).map(move |label| LogEdge { from, to, label })))
        .filter(|e| e.label != e.from && e.label != e.to)
        .collect();
    let names: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let ctx = SearchCtx { triples: &triples, need: k - 1, names: &names, accept: &accept };
    let hit = (0..triples.len()).into_par_iter().find_map_first(|first| {
        let mut state = SearchState::new(k, min_girth);
        if !state.push(&triples[first]) {
            return None;
        }
        state.extend(&ctx, first + 1)
    });
    Ok(hit.map(|(log, src, dst)| ExpCandidate {
        log,
        src: names[src].clone(),
        dst: names[dst].clone(),
    }))
}

struct SearchCtx<'a, F> {
    triples: &'a [LogEdge],
    need: usize,
    names: &'a [String],
    accept: &'a F,
}

/// A link 4-cycle forced by a vertex that is an endpoint of two edge ends
/// (two heads, two tails, a head and a tail, or a loop edge). Any LOG whose
/// link has girth 5 therefore has at most `k / 2` edges, so its descending
/// link is not a tree once `k >= 3`.
pub fn endpoint_four_cycle(p: &LogPresentation) -> Option<[String; 4]> {
    let link = p.link();
    let name = |i: usize| link.label(i);
    let edges = p.edges();
    for (i, e) in edges.iter().enumerate() {
        if e.from == e.to {
            let (u, v) = (e.to, e.label);
            return Some([name(plus(u)), name(plus(v)), name(minus(u)), name(minus(v))]);
        }
        for f in &edges[i + 1..] {
            if e.to == f.to {
                let (u, v, w) = (e.to, e.label, f.label);
                return Some([name(plus(v)), name(plus(u)), name(plus(w)), name(minus(u))]);
            }
            if e.from == f.from {
                let (u, v, w) = (e.from, e.label, f.label);
                return Some([name(minus(v)), name(minus(u)), name(minus(w)), name(plus(u))]);
            }
            for (h, t) in [(e, f), (f, e)] {
                if h.to == t.from {
                    let (u, v, w) = (h.to, h.label, t.label);
                    return Some([name(plus(u)), name(plus(v)), name(minus(u)), name(minus(w))]);
                }
            }
        }
    }
    None
}

pub const MAX_SEARCH_VERTICES: usize = 10;

/// Incremental link on at most 20 signed vertices, as bitmasks.
#[derive(Clone)]
struct SearchState {
    k: usize,
    min_girth: usize,
    adj: [u32; 20],
    desc: [u8; 10],
    asc: [u8; 10],
    edges: Vec<LogEdge>,
}

impl SearchState {
    fn new(k: usize, min_girth: usize) -> Self {
        let mut desc = [0u8; 10];
        let mut asc = [0u8; 10];
        for i in 0..10 {
            desc[i] = i as u8;
            asc[i] = i as u8;
        }
        SearchState { k, min_girth, adj: [0; 20], desc, asc, edges: Vec::new() }
    }

    /// Adds a link edge unless it would close a cycle shorter than the
    /// girth floor.
    fn add(&mut self, x: usize, y: usize) -> bool {
        if x == y {
            return false;
        }
        let mut reach = (1u32 << x) | self.adj[x];
        let mut frontier = self.adj[x];
        for _ in 0..self.min_girth.saturating_sub(3) {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[i];
            }
            frontier = next & !reach;
            reach |= next;
        }
        if reach >> y & 1 == 1 {
            return false;
        }
        self.adj[x] |= 1 << y;
        self.adj[y] |= 1 << x;
        true
    }

    fn union(comp: &mut [u8; 10], a: usize, b: usize) -> bool {
        let (ca, cb) = (comp[a], comp[b]);
        if ca == cb {
            return false;
        }
        for c in comp.iter_mut() {
            if *c == cb {
                *c = ca;
            }
        }
        true
    }

    fn push(&mut self, e: &LogEdge) -> bool {
        Self::union(&mut self.desc, e.label, e.to)
            && Self::union(&mut self.asc, e.label, e.from)
            && self.add(plus(e.label), plus(e.to))
            && self.add(minus(e.label), minus(e.from))
            && self.add(plus(e.label), minus(e.to))
            && self.add(minus(e.label), plus(e.from))
            && {
                self.edges.push(*e);
                true
            }
    }

    fn extend<F>(&self, ctx: &SearchCtx<'_, F>, start: usize) -> Option<(LogPresentation, usize, usize)>
    where
        F: Fn(&LogPresentation, usize, usize) -> bool,
    {
        if self.edges.len() == ctx.need {
            let log = LogPresentation::from_indexed(ctx.names.to_vec(), self.edges.clone());
            return self
                .pairs()
                .into_iter()
                .find(|&(s, t)| (ctx.accept)(&log, s, t))
                .map(|(s, t)| (log, s, t));
        }
        for i in start..ctx.triples.len() {
            let mut next = self.clone();
            if next.push(&ctx.triples[i]) {
                if let Some(hit) = next.extend(ctx, i + 1) {
                    return Some(hit);
                }
            }
        }
        None
    }

    fn dist(&self, from: usize, to: usize) -> Option<usize> {
        let mut reach = 1u32 << from;
        let mut frontier = reach;
        let mut d = 0;
        while frontier != 0 {
            if reach >> to & 1 == 1 {
                return Some(d);
            }
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[i];
            }
            frontier = next & !reach;
            reach |= next;
            d += 1;
        }
        None
    }

    /// Ordered pairs with an independent quadruple and the three
    /// distance-2 conditions.
    fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.k {
            for t in 0..self.k {
                if s == t {
                    continue;
                }
                let quad = (1u32 << plus(s)) | (1 << minus(s)) | (1 << plus(t)) | (1 << minus(t));
                if [plus(s), minus(s), plus(t), minus(t)]
                    .iter()
                    .any(|&q| self.adj[q] & quad != 0)
                {
                    continue;
                }
                if self.dist(plus(s), minus(s)) == Some(2)
                    && self.dist(plus(t), minus(t)) == Some(2)
                    && self.dist(plus(s), plus(t)) == Some(2)
                {
                    out.push((s, t));
                }
            }
        }
        out
    }
}

/// Relabels a found candidate: `src ↦ a1`, `dst ↦ a3`, `anchor ↦ t`, and the
/// rest `a2, a4, a5, …` in index order, keeping `end` as the last name.
pub fn name_candidate(c: &ExpCandidate, anchor: &str, end: &str) -> Result<ExpCandidate> {
    let k = c.log.vertex_count();
    let src = c.log.vertex_index(&c.src)?;
    let dst = c.log.vertex_index(&c.dst)?;
    let anchor = c.log.vertex_index(anchor)?;
    let end = c.log.vertex_index(end)?;
    let fixed = [src, dst, anchor, end];
    for (i, a) in fixed.iter().enumerate() {
        if fixed[i + 1..].contains(a) {
            return Err(Error::InvalidParameter("naming roles must be distinct vertices".into()));
        }
    }
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    names.insert(src, "a1".into());
    names.insert(dst, "a3".into());
    names.insert(anchor, "t".into());
    names.insert(end, format!("a{}", k - 1));
    let mut free = (2..k - 1).filter(|i| *i != 3).map(|i| format!("a{i}"));
    for v in 0..k {
        names.entry(v).or_insert_with(|| free.next().expect("enough names"));
    }
    let names: Vec<String> = names.into_values().collect();
    Ok(ExpCandidate {
        log: c.log.renamed(&names)?,
        src: "a1".into(),
        dst: "a3".into(),
    })
}
