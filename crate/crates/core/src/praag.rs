//! Perturbed RAAGs: markings, the assembled vertex link, Morse links, and
//! presentations, plus the orthoplex and its double.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{flag_complex, join, sphere, SignedVertex, SimpleGraph, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::fans::preset_exp;
use crate::homology::{bounded_pi1_trivial, collapse_tree_to_path, greedy_collapse, homology, CollapseCertificate, HomologyProfile, Pi1Outcome};
use crate::log::{preset_poly, LogPresentation};
use crate::word::{Letter, Presentation, Word};

/// An edge degree in `{0, 1, 2, ...} ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Finite(u32),
    Infinite,
}

impl Mark {
    pub fn is_zero(self) -> bool {
        self == Mark::Finite(0)
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mark::Finite(d) => write!(f, "{d}"),
            Mark::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Mark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Mark::Infinite);
        }
        s.parse::<u32>()
            .map(Mark::Finite)
            .map_err(|_| Error::Parse(format!("`{s}` is neither a degree nor `inf`")))
    }
}

impl Serialize for Mark {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Mark::Finite(d) => s.serialize_u32(*d),
            Mark::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Mark {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u32),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(Mark::Finite(n)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

pub type Edge = (String, String);

/// A degree on each oriented edge of a graph; absent edges have degree 0.
#[derive(Clone, Debug)]
pub struct Marking {
    graph: SimpleGraph,
    marks: BTreeMap<Edge, Mark>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingFile {
    pub marks: Vec<MarkEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkEntry {
    pub from: String,
    pub to: String,
    pub d: Mark,
}

impl Marking {
    pub fn zero(graph: SimpleGraph) -> Self {
        Marking { graph, marks: BTreeMap::new() }
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    /// Marks the edge `from → to`, which must exist with this orientation.
    pub fn set(&mut self, from: &str, to: &str, d: Mark) -> Result<()> {
        if !self.graph.edges().any(|(a, b)| a == from && b == to) {
            return Err(Error::InvalidParameter(format!("no edge {from} -> {to} in the graph")));
        }
        if d.is_zero() {
            self.marks.remove(&(from.to_string(), to.to_string()));
        } else {
            self.marks.insert((from.to_string(), to.to_string()), d);
        }
        Ok(())
    }

    pub fn with(mut self, from: &str, to: &str, d: Mark) -> Result<Self> {
        self.set(from, to, d)?;
        Ok(self)
    }

    pub fn mark(&self, from: &str, to: &str) -> Mark {
        self.marks
            .get(&(from.to_string(), to.to_string()))
            .copied()
            .unwrap_or(Mark::Finite(0))
    }

    /// Edges of degree at least 1, sorted.
    pub fn support(&self) -> Vec<Edge> {
        self.marks.keys().cloned().collect()
    }

    pub fn to_file(&self) -> MarkingFile {
        MarkingFile {
            marks: self
                .marks
                .iter()
                .map(|((a, b), d)| MarkEntry { from: a.clone(), to: b.clone(), d: *d })
                .collect(),
        }
    }

    pub fn from_file(graph: SimpleGraph, f: &MarkingFile) -> Result<Self> {
        let mut m = Marking::zero(graph);
        for e in &f.marks {
            m.set(&e.from, &e.to, e.d)?;
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data serializes")
    }

    pub fn from_json(graph: SimpleGraph, text: &str) -> Result<Self> {
        Self::from_file(graph, &serde_json::from_str(text)?)
    }

    fn unmarked_graph(&self) -> Result<SimpleGraph> {
        self.graph.without_edges(&self.support())
    }
}

/// Every pair of distinct supported edges `e, f` has `ē ∩ link(f) = ∅`.
/// On failure the first violating pair and the shared vertices are returned.
pub fn check_admissible(m: &Marking) -> Result<()> {
    let k = flag_complex(m.graph());
    let support = m.support();
    for f in &support {
        let link = k.link(&[&f.0, &f.1])?;
        for e in &support {
            if e == f {
                continue;
            }
            let shared: Vec<String> = [&e.0, &e.1]
                .into_iter()
                .filter(|v| link.has_vertex(v))
                .cloned()
                .collect();
            if !shared.is_empty() {
                return Err(Error::Inadmissible { first: e.clone(), second: f.clone(), shared });
            }
        }
    }
    Ok(())
}

/// The LOG used for an edge of the given degree, with the generators that
/// receive the edge's tail and head.
#[derive(Clone, Debug)]
pub struct LogPreset {
    pub log: LogPresentation,
    pub src: String,
    pub dst: String,
}

pub fn log_for(d: Mark) -> Result<LogPreset> {
    match d {
        Mark::Finite(0) => Err(Error::InvalidParameter("degree-0 edges carry no LOG".into())),
        Mark::Finite(d) => Ok(LogPreset {
            log: preset_poly(d as usize)?,
            src: "s".into(),
            dst: format!("a{d}"),
        }),
        Mark::Infinite => {
            let p = preset_exp()?;
            Ok(LogPreset { log: p.log, src: p.src, dst: p.dst })
        }
    }
}

/// Name of LOG generator `g` attached to edge `f`.
pub fn attached_name(g: &str, f: &Edge) -> String {
    format!("{g}[{}-{}]", f.0, f.1)
}

fn signed(v: &str, plus: bool) -> String {
    if plus {
        SignedVertex::plus(v).label()
    } else {
        SignedVertex::minus(v).label()
    }
}

fn two_points(a: &str, b: &str) -> Result<SimplicialComplex> {
    SimplicialComplex::from_faces::<_, &str, [&str; 0]>(&[a, b], &[])
}

fn not_full(context: String, witness: Option<Vec<String>>) -> Result<()> {
    match witness {
        Some(witness) => Err(Error::NotFull { context, witness }),
        None => Ok(()),
    }
}

fn check_flag(k: &SimplicialComplex, context: &str) -> Result<()> {
    match k.flag_violation() {
        Some(witness) => Err(Error::NotFlag { context: context.into(), witness }),
        None => Ok(()),
    }
}

/// The record of one gluing `φ_f : S(Σ_f) → link(∗, Y_f)`.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub edge: Edge,
    pub d: Mark,
    pub phi: SimplicialMap,
    /// The four receiving vertices of the LOG link.
    pub quadruple: Vec<String>,
    pub y_link_vertices: usize,
}

#[derive(Clone, Debug)]
pub struct PerturbedLink {
    pub complex: SimplicialComplex,
    pub gluings: Vec<Gluing>,
}

impl PerturbedLink {
    pub fn f_vector(&self) -> Vec<usize> {
        self.complex.f_vector()
    }
}

pub fn assemble_perturbed_link(m: &Marking) -> Result<PerturbedLink> {
    assemble_in_order(m, &m.support())
}

/// Glues the spaces `Y_f` onto `S(K_{Γ-F})` in the given order, checking
/// the gluing-lemma hypotheses before each step and flagness after it.
pub fn assemble_in_order(m: &Marking, order: &[Edge]) -> Result<PerturbedLink> {
    check_admissible(m)?;
    let mut listed: Vec<Edge> = order.to_vec();
    listed.sort();
    if listed != m.support() {
        return Err(Error::InvalidParameter("order must list the support exactly once".into()));
    }
    let k = flag_complex(m.graph());
    let k_rest = flag_complex(&m.unmarked_graph()?);
    let base = sphere(&k_rest);
    let mut current = base.clone();
    let mut gluings = Vec::new();
    for f in order {
        let d = m.mark(&f.0, &f.1);
        let link_f = k.link(&[&f.0, &f.1])?;
        let sigma_f = join(&link_f, &two_points(&f.0, &f.1)?)?;
        not_full(format!("Σ_f in K_(Γ-F) for {}->{}", f.0, f.1), sigma_f.fullness_witness(&k_rest)?)?;
        let s_sigma = sphere(&sigma_f);
        not_full(format!("S(Σ_f) in the current link for {}->{}", f.0, f.1), s_sigma.fullness_witness(&current)?)?;

        let preset = log_for(d)?;
        let log_link = preset.log.link();
        let names: BTreeMap<String, String> = (0..log_link.vertex_count())
            .map(|i| {
                let l = log_link.label(i);
                let v = preset.log.name(i / 2);
                (l, signed(&attached_name(v, f), i % 2 == 0))
            })
            .collect();
        let log_complex = log_link.to_complex()?.relabel(&names)?;
        let y = join(&sphere(&link_f), &log_complex)?;
        check_flag(&y, "link of Y_f")?;

        let receive = |g: &str, plus: bool| signed(&attached_name(g, f), plus);
        let quadruple = vec![
            receive(&preset.src, true),
            receive(&preset.src, false),
            receive(&preset.dst, true),
            receive(&preset.dst, false),
        ];
        let spanned: Vec<(String, String)> = log_complex
            .facet_labels()
            .into_iter()
            .filter(|s| s.len() == 2 && quadruple.contains(&s[0]) && quadruple.contains(&s[1]))
            .map(|s| (s[0].clone(), s[1].clone()))
            .collect();
        if !spanned.is_empty() {
            return Err(Error::QuadrupleNotIndependent(spanned));
        }

        let mut phi = BTreeMap::new();
        for v in s_sigma.vertices() {
            let sv = SignedVertex::parse(v).expect("sphere labels carry a sign");
            let plus = sv.sign == crate::complex::Sign::Plus;
            let image = if sv.base == f.0 {
                receive(&preset.src, plus)
            } else if sv.base == f.1 {
                receive(&preset.dst, plus)
            } else {
                v.clone()
            };
            phi.insert(v.clone(), image);
        }
        let phi = SimplicialMap::new(phi);
        let image = phi.image(&s_sigma, &y)?;
        if image.vertex_count() != s_sigma.vertex_count() || image.f_vector() != s_sigma.f_vector() {
            return Err(Error::Mismatch(format!("φ_f is not an embedding for {}->{}", f.0, f.1)));
        }
        not_full(format!("φ_f(S(Σ_f)) in link(∗,Y_f) for {}->{}", f.0, f.1), image.fullness_witness(&y)?)?;

        // identify the receiving vertices with the edge endpoints
        let back: BTreeMap<String, String> = phi
            .as_map()
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        let glued = y.relabel(&back)?;
        current = current.union(&glued);
        check_flag(&current, &format!("assembled link after {}->{}", f.0, f.1))?;
        gluings.push(Gluing {
            edge: f.clone(),
            d,
            phi,
            quadruple,
            y_link_vertices: y.vertex_count(),
        });
    }
    not_full("S(K_(Γ-F)) in the assembled link".into(), base.fullness_witness(&current)?)?;
    Ok(PerturbedLink { complex: current, gluings })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MorseSide {
    Descending,
    Ascending,
}

/// The tree `T_f` of one side with the collapse onto its `α–β` path.
#[derive(Clone, Debug)]
pub struct TreeCertificate {
    pub edge: Edge,
    pub side: MorseSide,
    pub tree: SimplicialComplex,
    pub collapse: CollapseCertificate,
    pub path: SimplicialComplex,
}

#[derive(Clone, Debug)]
pub struct PerturbedMorseLinks {
    pub descending: SimplicialComplex,
    pub ascending: SimplicialComplex,
    pub certificates: Vec<TreeCertificate>,
    pub base: HomologyProfile,
    pub descending_homology: HomologyProfile,
    pub ascending_homology: HomologyProfile,
}

/// Homology is compared in dimensions up to this bound.
pub const MORSE_HOMOLOGY_DIM: usize = 3;

/// Replaces `star(f)` in `K_Γ` by `link(f) ⋆ T_f` for every supported edge,
/// collapses each tree onto the path between the glued vertices, and checks
/// the result against the sign-restricted assembled link and against the
/// homology of `K_Γ`.
pub fn perturbed_morse_links(m: &Marking) -> Result<PerturbedMorseLinks> {
    check_admissible(m)?;
    let k = flag_complex(m.graph());
    let assembled = assemble_perturbed_link(m)?;
    let mut certificates = Vec::new();
    let mut sides = Vec::new();
    for side in [MorseSide::Descending, MorseSide::Ascending] {
        let mut cur = k.clone();
        for f in m.support() {
            let preset = log_for(m.mark(&f.0, &f.1))?;
            let link = preset.log.link();
            let tree_graph = match side {
                MorseSide::Descending => link.descending(),
                MorseSide::Ascending => link.ascending(),
            };
            let name = |i: usize| {
                let g = preset.log.name(i);
                if g == preset.src {
                    f.0.clone()
                } else if g == preset.dst {
                    f.1.clone()
                } else {
                    attached_name(g, &f)
                }
            };
            let labels: Vec<String> = (0..preset.log.vertex_count()).map(name).collect();
            let faces: Vec<Vec<String>> = tree_graph.edges.iter().map(|&(a, b)| vec![name(a), name(b)]).collect();
            let tree = SimplicialComplex::from_faces(&labels, &faces)?;
            let collapse = collapse_tree_to_path(&tree, &f.0, &f.1)?;
            let path = collapse.replay(&tree)?;
            check_path(&path, &f.0, &f.1)?;
            let link_f = k.link(&[&f.0, &f.1])?;
            cur = cur.delete_open_star(&[&f.0, &f.1])?.union(&join(&link_f, &tree)?);
            certificates.push(TreeCertificate { edge: f.clone(), side, tree, collapse, path });
        }
        let restricted = sign_part(&assembled.complex, side == MorseSide::Descending)?;
        if !restricted.same_as(&cur) {
            return Err(Error::Mismatch(format!(
                "{side:?} link differs from the sign-restricted assembled link"
            )));
        }
        sides.push(cur);
    }
    let ascending = sides.pop().unwrap();
    let descending = sides.pop().unwrap();
    let base = homology(&k, MORSE_HOMOLOGY_DIM)?;
    let descending_homology = homology(&descending, MORSE_HOMOLOGY_DIM)?;
    let ascending_homology = homology(&ascending, MORSE_HOMOLOGY_DIM)?;
    for (name, h) in [("descending", &descending_homology), ("ascending", &ascending_homology)] {
        if h.betti != base.betti || h.torsion != base.torsion {
            return Err(Error::Mismatch(format!(
                "{name} link homology {:?} differs from K_Γ {:?}",
                h.betti, base.betti
            )));
        }
    }
    Ok(PerturbedMorseLinks {
        descending,
        ascending,
        certificates,
        base,
        descending_homology,
        ascending_homology,
    })
}

fn check_path(p: &SimplicialComplex, a: &str, b: &str) -> Result<()> {
    let g = p.one_skeleton();
    let adj = g.adjacency();
    let ends: BTreeSet<usize> = [a, b].iter().filter_map(|v| g.index_of(v)).collect();
    let ok = p.dim().unwrap_or(0) <= 1
        && g.edge_count() + 1 == g.vertex_count()
        && ends.len() == 2
        && (0..g.vertex_count()).all(|i| {
            let want = if ends.contains(&i) { 1 } else { 2 };
            adj[i].len() == want
        });
    if ok {
        Ok(())
    } else {
        Err(Error::Mismatch(format!("collapse did not end on the {a}-{b} path")))
    }
}

/// The full subcomplex on vertices of one sign, with the signs dropped.
pub fn sign_part(k: &SimplicialComplex, plus: bool) -> Result<SimplicialComplex> {
    let keep: Vec<String> = k
        .vertices()
        .iter()
        .filter(|v| {
            SignedVertex::parse(v).is_some_and(|s| (s.sign == crate::complex::Sign::Plus) == plus)
        })
        .cloned()
        .collect();
    let part = k.induced(&keep)?;
    let strip: BTreeMap<String, String> = keep
        .iter()
        .map(|v| (v.clone(), SignedVertex::parse(v).unwrap().base))
        .collect();
    part.relabel(&strip)
}

/// Presentation of `A_Γ(F, d)`: a generator per vertex of `Γ` and per LOG
/// generator not identified with an edge endpoint; commutators for unmarked
/// edges; LOG relators; and commutators of each LOG generator with the
/// vertices of `link(f)`. Duplicate relators are dropped.
pub fn emit_praag_presentation(m: &Marking) -> Result<Presentation> {
    check_admissible(m)?;
    let k = flag_complex(m.graph());
    let mut generators: Vec<String> = m.graph().vertices().to_vec();
    let mut index: BTreeMap<String, usize> = generators.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let mut relators: Vec<Word> = Vec::new();
    let commutator = |a: usize, b: usize| Word(vec![Letter::pos(a), Letter::pos(b), Letter::neg(a), Letter::neg(b)]);
    let support = m.support();
    for (a, b) in m.graph().edges() {
        if !support.iter().any(|f| f.0 == a && f.1 == b) {
            relators.push(commutator(index[a], index[b]));
        }
    }
    for f in &support {
        let preset = log_for(m.mark(&f.0, &f.1))?;
        let log = &preset.log;
        let mut global = Vec::with_capacity(log.vertex_count());
        for g in log.vertices() {
            let id = if *g == preset.src {
                index[&f.0]
            } else if *g == preset.dst {
                index[&f.1]
            } else {
                let name = attached_name(g, f);
                generators.push(name.clone());
                index.insert(name, generators.len() - 1);
                generators.len() - 1
            };
            global.push(id);
        }
        for e in 0..log.edges().len() {
            let r = log.relator(e);
            relators.push(Word(
                r.letters()
                    .iter()
                    .map(|l| Letter { gen: global[l.gen as usize] as u32, inv: l.inv })
                    .collect(),
            ));
        }
        let link_f = k.link(&[&f.0, &f.1])?;
        for x in link_f.vertices() {
            for &g in &global {
                relators.push(commutator(index[x], g));
            }
        }
    }
    let mut seen = BTreeSet::new();
    relators.retain(|r| seen.insert(r.clone()));
    let p = Presentation { generators, relators };
    if let Some(&i) = p.height_violations().first() {
        return Err(Error::Mismatch(format!("relator {i} has nonzero exponent sum")));
    }
    Ok(p)
}

/// The 1-orthoplex: edge `e = (a, b)`, six vertices joined to both ends,
/// and the 4-cycle `C = x z y w` among four of them.
#[derive(Clone, Debug)]
pub struct Orthoplex {
    pub graph: SimpleGraph,
    pub e: Edge,
    pub cycle: [String; 4],
}

pub fn preset_orthoplex() -> Orthoplex {
    let vertices = ["a", "b", "u", "v", "x", "y", "z", "w"];
    let mut edges = vec![("a", "b")];
    for p in ["u", "v", "x", "y", "z", "w"] {
        edges.push((p, "a"));
        edges.push((p, "b"));
    }
    edges.extend([("x", "z"), ("z", "y"), ("y", "w"), ("w", "x")]);
    Orthoplex {
        graph: SimpleGraph::from_edges(&vertices, &edges).expect("preset is a simple graph"),
        e: ("a".into(), "b".into()),
        cycle: ["x", "z", "y", "w"].map(String::from),
    }
}

/// Results of the checks the orthoplex must pass.
#[derive(Clone, Debug, Serialize)]
pub struct OrthoplexReport {
    pub homology: HomologyProfile,
    pub collapses_to_point: bool,
    pub pi1_trivial: bool,
    pub cycle_full: bool,
    pub link_contains_all: bool,
    pub sigma_full: bool,
}

impl OrthoplexReport {
    pub fn passes(&self) -> bool {
        self.homology.betti == [1, 0, 0, 0]
            && !self.homology.has_torsion()
            && self.collapses_to_point
            && self.pi1_trivial
            && self.cycle_full
            && self.link_contains_all
            && self.sigma_full
    }
}

pub fn verify_orthoplex(o: &Orthoplex) -> Result<OrthoplexReport> {
    let k = flag_complex(&o.graph);
    let homology = homology(&k, 3)?;
    let collapses_to_point = greedy_collapse(&k).replay(&k)?.f_vector() == [1];
    let pi1_trivial = bounded_pi1_trivial(&k, 10_000)?.outcome == Pi1Outcome::ProvenTrivial;
    let c = &o.cycle;
    let square = SimplicialComplex::from_faces(
        c,
        &[[&c[0], &c[1]], [&c[1], &c[2]], [&c[2], &c[3]], [&c[3], &c[0]]],
    )?;
    let cycle_full = k.induced(c)? == square;
    let link = k.link(&[&o.e.0, &o.e.1])?;
    let link_contains_all = ["u", "v", "x", "y", "z", "w"].iter().all(|v| link.has_vertex(v));
    let rest = flag_complex(&o.graph.without_edges(std::slice::from_ref(&o.e))?);
    let sigma = join(&link, &two_points(&o.e.0, &o.e.1)?)?;
    let sigma_full = sigma.fullness_witness(&rest)?.is_none();
    Ok(OrthoplexReport {
        homology,
        collapses_to_point,
        pi1_trivial,
        cycle_full,
        link_contains_all,
        sigma_full,
    })
}

/// Marks `e` with `d > 1`.
pub fn orthoplex_marking(d: Mark) -> Result<Marking> {
    require_above_one(d)?;
    let o = preset_orthoplex();
    Marking::zero(o.graph).with(&o.e.0, &o.e.1, d)
}

fn require_above_one(d: Mark) -> Result<()> {
    match d {
        Mark::Finite(n) if n <= 1 => Err(Error::InvalidParameter("the degree must exceed 1".into())),
        _ => Ok(()),
    }
}

/// The double of the orthoplex along `C`.
#[derive(Clone, Debug)]
pub struct Double {
    pub graph: SimpleGraph,
    pub e: Edge,
    pub e_prime: Edge,
}

/// Primed copy of every orthoplex vertex except those of `C`.
pub fn prime(v: &str) -> String {
    if ["x", "y", "z", "w"].contains(&v) {
        v.to_string()
    } else {
        format!("{v}'")
    }
}

pub fn preset_double() -> Double {
    let o = preset_orthoplex();
    let mut vertices: Vec<String> = o.graph.vertices().to_vec();
    vertices.extend(o.graph.vertices().iter().map(|v| prime(v)).filter(|v| v.ends_with('\'')));
    let mut edges: Vec<(String, String)> = o.graph.edges().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    for (a, b) in o.graph.edges() {
        let (pa, pb) = (prime(a), prime(b));
        if pa.ends_with('\'') || pb.ends_with('\'') {
            edges.push((pa, pb));
        }
    }
    let refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let vrefs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    Double {
        graph: SimpleGraph::from_edges(&vrefs, &refs).expect("preset is a simple graph"),
        e: o.e.clone(),
        e_prime: (prime(&o.e.0), prime(&o.e.1)),
    }
}

/// Marks `e` and `e'` with the same `d > 1`.
pub fn double_marking(d: Mark) -> Result<Marking> {
    require_above_one(d)?;
    let s = preset_double();
    Marking::zero(s.graph).with(&s.e.0, &s.e.1, d)?.with(&s.e_prime.0, &s.e_prime.1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mark_parsing() {
        assert_eq!("inf".parse::<Mark>().unwrap(), Mark::Infinite);
        assert_eq!("3".parse::<Mark>().unwrap(), Mark::Finite(3));
        assert!("x".parse::<Mark>().is_err());
        let m: MarkEntry = serde_json::from_str(r#"{"from":"a","to":"b","d":"inf"}"#).unwrap();
        assert_eq!(m.d, Mark::Infinite);
    }

    #[test]
    fn preset_sizes() {
        let o = preset_orthoplex();
        assert_eq!((o.graph.vertex_count(), o.graph.edge_count()), (8, 17));
        let s = preset_double();
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (12, 30));
        assert!(verify_orthoplex(&o).unwrap().passes());
    }

    #[test]
    fn admissibility() {
        assert!(check_admissible(&orthoplex_marking(Mark::Finite(2)).unwrap()).is_ok());
        assert!(check_admissible(&double_marking(Mark::Finite(2)).unwrap()).is_ok());
        let bad = orthoplex_marking(Mark::Finite(2)).unwrap().with("u", "a", Mark::Finite(1)).unwrap();
        match check_admissible(&bad) {
            Err(Error::Inadmissible { shared, .. }) => assert!(!shared.is_empty()),
            other => panic!("expected a witness, got {other:?}"),
        }
        assert!(double_marking(Mark::Finite(1)).is_err());
    }

    #[test]
    fn presentation_counts() {
        let p = emit_praag_presentation(&double_marking(Mark::Finite(2)).unwrap()).unwrap();
        assert_eq!(p.generators.len(), 16);
        let zero = emit_praag_presentation(&Marking::zero(preset_orthoplex().graph)).unwrap();
        assert_eq!(zero.relators.len(), 17);
    }

    #[test]
    fn zero_marking_is_the_raag_link() {
        let g = preset_orthoplex().graph;
        let k = flag_complex(&g);
        let m = Marking::zero(g);
        assert_eq!(assemble_perturbed_link(&m).unwrap().complex, sphere(&k));
        let morse = perturbed_morse_links(&m).unwrap();
        assert_eq!(morse.descending, k);
        assert_eq!(morse.ascending, k);
    }

    #[test]
    fn degree_one_subdivides() {
        let o = preset_orthoplex();
        let m = Marking::zero(o.graph.clone()).with("a", "b", Mark::Finite(1)).unwrap();
        let link = assemble_perturbed_link(&m).unwrap().complex;
        // Γ' = Γ with e replaced by a midpoint joined to both ends and to link(e)
        let mut g = o.graph.without_edges(std::slice::from_ref(&o.e)).unwrap();
        g.add_vertex("m").unwrap();
        for p in ["a", "b", "u", "v", "x", "y", "z", "w"] {
            g.add_edge("m", p).unwrap();
        }
        let mid = attached_name("a0", &o.e);
        let map: BTreeMap<String, String> = [("+", true), ("-", false)]
            .iter()
            .map(|(s, plus)| (format!("{mid}{s}"), signed("m", *plus)))
            .collect();
        assert!(link.isomorphic_under(&sphere(&flag_complex(&g)), &map).unwrap());
    }

    #[test]
    fn presets_assemble() {
        for d in [Mark::Finite(2), Mark::Finite(3), Mark::Infinite] {
            let delta = orthoplex_marking(d).unwrap();
            let link = assemble_perturbed_link(&delta).unwrap();
            assert!(link.complex.is_flag());
            let morse = perturbed_morse_links(&delta).unwrap();
            assert_eq!(morse.descending_homology.betti[..3], [1, 0, 0]);
            let sigma = double_marking(d).unwrap();
            let forward = assemble_perturbed_link(&sigma).unwrap();
            let mut order = sigma.support();
            order.reverse();
            assert_eq!(assemble_in_order(&sigma, &order).unwrap().complex, forward.complex);
            let morse = perturbed_morse_links(&sigma).unwrap();
            assert_eq!(morse.ascending_homology.betti[..3], [1, 0, 1]);
            assert_eq!(morse.certificates.len(), 4);
        }
    }
}
