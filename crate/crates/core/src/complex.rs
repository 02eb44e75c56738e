//! Finite simple graphs, simplicial complexes and the sphere construction.
//!
//! Complexes are small (tens of vertices) and stored as their maximal faces
//! over sorted vertex indices. Vertex labels are strings; the sphere
//! construction doubles a vertex `v` into `v+` and `v-`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of a doubled vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A vertex `v+` or `v-` of a doubled vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedVertex {
    pub base: String,
    pub sign: Sign,
}

impl SignedVertex {
    pub fn new(base: impl Into<String>, sign: Sign) -> Self {
        SignedVertex { base: base.into(), sign }
    }

    pub fn plus(base: impl Into<String>) -> Self {
        Self::new(base, Sign::Plus)
    }

    pub fn minus(base: impl Into<String>) -> Self {
        Self::new(base, Sign::Minus)
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.base, self.sign.as_char())
    }

    /// Parses `v+` / `v-`.
    pub fn parse(label: &str) -> Option<Self> {
        let sign = match label.chars().last()? {
            '+' => Sign::Plus,
            '-' => Sign::Minus,
            _ => return None,
        };
        let base = &label[..label.len() - 1];
        if base.is_empty() {
            return None;
        }
        Some(SignedVertex::new(base, sign))
    }
}

impl fmt::Display for SignedVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.base, self.sign.as_char())
    }
}

/// A finite simple graph with string labels. Edges remember the orientation
/// they were declared with (`tail -> head`), which is what the marking and
/// LOG code reads as the initial and terminal vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    edge_set: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new<S: AsRef<str>>(vertices: &[S]) -> Result<Self> {
        let mut g = SimpleGraph {
            vertices: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            edge_set: BTreeSet::new(),
        };
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        Ok(g)
    }

    /// Builds a graph from oriented edges `(tail, head)`.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Self::new(vertices)?;
        for (a, b) in edges {
            g.add_edge(a.as_ref(), b.as_ref())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: &str) -> Result<usize> {
        if self.index.contains_key(label) {
            return Err(Error::LabelCollision(label.to_string()));
        }
        let i = self.vertices.len();
        self.vertices.push(label.to_string());
        self.index.insert(label.to_string(), i);
        Ok(i)
    }

    pub fn add_edge(&mut self, tail: &str, head: &str) -> Result<()> {
        let a = self.require(tail)?;
        let b = self.require(head)?;
        if a == b {
            return Err(Error::Loop(tail.to_string()));
        }
        let key = (a.min(b), a.max(b));
        if !self.edge_set.insert(key) {
            return Err(Error::ParallelEdge(tail.to_string(), head.to_string()));
        }
        self.edges.push((a, b));
        Ok(())
    }

    fn require(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    /// Oriented edges as `(tail, head)` labels, in declaration order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b)| (self.vertices[a].as_str(), self.vertices[b].as_str()))
    }

    pub fn edge_indices(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(a), Some(b)) => self.edge_set.contains(&(a.min(b), a.max(b))),
            _ => false,
        }
    }

    pub fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj
    }

    /// The graph with the given edges removed (endpoints stay).
    pub fn without_edges(&self, removed: &[(String, String)]) -> Result<SimpleGraph> {
        let mut drop = BTreeSet::new();
        for (a, b) in removed {
            let (a, b) = (self.require(a)?, self.require(b)?);
            drop.insert((a.min(b), a.max(b)));
        }
        let mut g = SimpleGraph::new(&self.vertices)?;
        for &(a, b) in &self.edges {
            if !drop.contains(&(a.min(b), a.max(b))) {
                g.add_edge(&self.vertices[a], &self.vertices[b])?;
            }
        }
        Ok(g)
    }

    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph {
            vertex_count: self.vertices.len(),
            edges: self.edges.clone(),
        }
    }
}

/// A finite simplicial complex stored by its maximal faces.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds the downward closure of `faces`. Every listed vertex becomes a
    /// 0-simplex even if no face mentions it.
    pub fn from_faces<S: AsRef<str>, T: AsRef<str>, F: AsRef<[T]>>(vertices: &[S], faces: &[F]) -> Result<Self> {
        let mut index = HashMap::new();
        let mut labels = Vec::new();
        for v in vertices {
            let v = v.as_ref();
            if index.insert(v.to_string(), labels.len()).is_some() {
                return Err(Error::LabelCollision(v.to_string()));
            }
            labels.push(v.to_string());
        }
        let mut raw = Vec::with_capacity(faces.len() + labels.len());
        for face in faces {
            let mut f = Vec::new();
            for v in face.as_ref() {
                let v = v.as_ref();
                f.push(*index.get(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?);
            }
            f.sort_unstable();
            f.dedup();
            if !f.is_empty() {
                raw.push(f);
            }
        }
        raw.extend((0..labels.len()).map(|i| vec![i]));
        Ok(SimplicialComplex {
            vertices: labels,
            index,
            facets: maximal(raw),
        })
    }

    fn from_indexed(vertices: Vec<String>, faces: Vec<Vec<usize>>) -> Self {
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut raw = faces;
        raw.extend((0..vertices.len()).map(|i| vec![i]));
        SimplicialComplex {
            vertices,
            index,
            facets: maximal(raw),
        }
    }

    pub fn empty() -> Self {
        Self::from_indexed(Vec::new(), Vec::new())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn has_vertex(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Maximal faces as sorted index lists.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Maximal faces as sorted label lists, sorted.
    pub fn facet_labels(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .facets
            .iter()
            .map(|f| {
                let mut l: Vec<String> = f.iter().map(|&i| self.vertices[i].clone()).collect();
                l.sort();
                l
            })
            .collect();
        out.sort();
        out
    }

    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Membership of a sorted index set.
    pub fn contains(&self, simplex: &[usize]) -> bool {
        if simplex.is_empty() {
            return true;
        }
        self.facets.iter().any(|f| is_sorted_subset(simplex, f))
    }

    pub fn contains_labels<S: AsRef<str>>(&self, simplex: &[S]) -> bool {
        let mut idx = Vec::with_capacity(simplex.len());
        for v in simplex {
            match self.index_of(v.as_ref()) {
                Some(i) => idx.push(i),
                None => return false,
            }
        }
        idx.sort_unstable();
        idx.dedup();
        self.contains(&idx)
    }

    /// All nonempty faces grouped by dimension, each group sorted.
    pub fn faces_by_dim(&self) -> Vec<Vec<Vec<usize>>> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                let s: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect();
                all.insert(s);
            }
        }
        let top = self.dim().map_or(0, |d| d + 1);
        let mut by_dim = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        by_dim
    }

    /// Number of faces per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim().iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn one_skeleton(&self) -> SimpleGraph {
        let mut edges = BTreeSet::new();
        for f in &self.facets {
            for (x, &a) in f.iter().enumerate() {
                for &b in &f[x + 1..] {
                    edges.insert((a, b));
                }
            }
        }
        let mut g = SimpleGraph::new(&self.vertices).expect("labels are unique");
        for (a, b) in edges {
            g.add_edge(&self.vertices[a], &self.vertices[b])
                .expect("edge set is simple");
        }
        g
    }

    /// `None` if every clique of the 1-skeleton spans a simplex; otherwise a
    /// minimal clique that does not.
    pub fn flag_violation(&self) -> Option<Vec<String>> {
        let g = self.one_skeleton();
        for clique in maximal_cliques(&g.adjacency()) {
            if !self.contains(&clique) {
                let mut witness = clique;
                // shrink to a minimal missing face
                let mut shrunk = true;
                while shrunk {
                    shrunk = false;
                    for i in 0..witness.len() {
                        let mut smaller = witness.clone();
                        smaller.remove(i);
                        if !self.contains(&smaller) {
                            witness = smaller;
                            shrunk = true;
                            break;
                        }
                    }
                }
                return Some(witness.iter().map(|&i| self.vertices[i].clone()).collect());
            }
        }
        None
    }

    pub fn is_flag(&self) -> bool {
        self.flag_violation().is_none()
    }

    /// The full subcomplex spanned by `labels`.
    pub fn induced<S: AsRef<str>>(&self, labels: &[S]) -> Result<SimplicialComplex> {
        let mut keep = BTreeSet::new();
        for l in labels {
            let l = l.as_ref();
            keep.insert(self.index_of(l).ok_or_else(|| Error::UnknownVertex(l.to_string()))?);
        }
        let new_vertices: Vec<String> = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let faces = self
            .facets
            .iter()
            .map(|f| f.iter().filter_map(|v| remap.get(v).copied()).collect::<Vec<_>>())
            .filter(|f| !f.is_empty())
            .collect();
        Ok(Self::from_indexed(new_vertices, faces))
    }

    /// Whether `self` is a full subcomplex of `ambient`: every ambient simplex
    /// on vertices of `self` is a simplex of `self`.
    pub fn is_full_in(&self, ambient: &SimplicialComplex) -> Result<bool> {
        Ok(self.fullness_witness(ambient)?.is_none())
    }

    /// An ambient simplex on our vertices that we are missing, if any.
    pub fn fullness_witness(&self, ambient: &SimplicialComplex) -> Result<Option<Vec<String>>> {
        let span = ambient.induced(&self.vertices)?;
        for f in span.facets() {
            let labels: Vec<&str> = f.iter().map(|&i| span.label(i)).collect();
            if !self.contains_labels(&labels) {
                return Ok(Some(labels.iter().map(|s| s.to_string()).collect()));
            }
        }
        // our own simplices must exist in the ambient complex too
        for f in self.facet_labels() {
            if !ambient.contains_labels(&f) {
                return Err(Error::NotSubcomplex(f));
            }
        }
        Ok(None)
    }

    /// `lk(sigma) = { tau : tau ∩ sigma = ∅, tau ∪ sigma ∈ K }`.
    pub fn link<S: AsRef<str>>(&self, simplex: &[S]) -> Result<SimplicialComplex> {
        let mut sigma = Vec::new();
        for l in simplex {
            let l = l.as_ref();
            sigma.push(self.index_of(l).ok_or_else(|| Error::UnknownVertex(l.to_string()))?);
        }
        sigma.sort_unstable();
        sigma.dedup();
        let mut faces = Vec::new();
        let mut used = BTreeSet::new();
        for f in &self.facets {
            if is_sorted_subset(&sigma, f) {
                let rest: Vec<usize> = f.iter().copied().filter(|v| !sigma.contains(v)).collect();
                used.extend(rest.iter().copied());
                if !rest.is_empty() {
                    faces.push(rest);
                }
            }
        }
        let labels: Vec<String> = used.iter().map(|&i| self.vertices[i].clone()).collect();
        let face_labels: Vec<Vec<&str>> = faces
            .iter()
            .map(|f| f.iter().map(|&i| self.vertices[i].as_str()).collect())
            .collect();
        Self::from_faces(&labels, &face_labels)
    }

    /// Closed star of a simplex.
    pub fn star<S: AsRef<str>>(&self, simplex: &[S]) -> Result<SimplicialComplex> {
        let mut sigma = Vec::new();
        for l in simplex {
            let l = l.as_ref();
            sigma.push(self.index_of(l).ok_or_else(|| Error::UnknownVertex(l.to_string()))?);
        }
        sigma.sort_unstable();
        let faces: Vec<Vec<usize>> = self
            .facets
            .iter()
            .filter(|f| is_sorted_subset(&sigma, f))
            .cloned()
            .collect();
        let used: BTreeSet<usize> = faces.iter().flatten().copied().collect();
        self.restrict_to(&used, faces)
    }

    fn restrict_to(&self, used: &BTreeSet<usize>, faces: Vec<Vec<usize>>) -> Result<SimplicialComplex> {
        let labels: Vec<&str> = used.iter().map(|&i| self.vertices[i].as_str()).collect();
        let face_labels: Vec<Vec<&str>> = faces
            .iter()
            .map(|f| f.iter().map(|&i| self.vertices[i].as_str()).collect())
            .collect();
        Self::from_faces(&labels, &face_labels)
    }

    /// Renames vertices. Labels missing from `map` keep their name; the
    /// result must not merge two vertices.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<SimplicialComplex> {
        let labels: Vec<String> = self
            .vertices
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::LabelCollision(l.clone()));
            }
        }
        Ok(Self::from_indexed(labels, self.facets.clone()))
    }

    /// Union of two complexes; vertices with equal labels are identified.
    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut labels = self.vertices.clone();
        let mut index = self.index.clone();
        for v in &other.vertices {
            if !index.contains_key(v) {
                index.insert(v.clone(), labels.len());
                labels.push(v.clone());
            }
        }
        let mut faces = self.facets.clone();
        for f in &other.facets {
            let mut g: Vec<usize> = f.iter().map(|&i| index[&other.vertices[i]]).collect();
            g.sort_unstable();
            faces.push(g);
        }
        Self::from_indexed(labels, faces)
    }

    /// Disjoint union as a complex (labels must not collide).
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        if let Some(v) = other.vertices.iter().find(|v| self.index.contains_key(*v)) {
            return Err(Error::LabelCollision(v.clone()));
        }
        Ok(self.union(other))
    }

    /// Removes the open star of a simplex (all simplices containing it).
    pub fn delete_open_star<S: AsRef<str>>(&self, simplex: &[S]) -> Result<SimplicialComplex> {
        let mut sigma = Vec::new();
        for l in simplex {
            let l = l.as_ref();
            sigma.push(self.index_of(l).ok_or_else(|| Error::UnknownVertex(l.to_string()))?);
        }
        sigma.sort_unstable();
        let mut faces = Vec::new();
        for f in &self.facets {
            if is_sorted_subset(&sigma, f) {
                // keep every face of f that misses some vertex of sigma
                for &s in &sigma {
                    faces.push(f.iter().copied().filter(|&v| v != s).collect());
                }
            } else {
                faces.push(f.clone());
            }
        }
        let faces = faces.into_iter().filter(|f: &Vec<usize>| !f.is_empty()).collect();
        Ok(Self::from_indexed(self.vertices.clone(), faces))
    }

    /// Structural equality on labelled simplices.
    pub fn same_as(&self, other: &SimplicialComplex) -> bool {
        let mut a = self.vertices.clone();
        let mut b = other.vertices.clone();
        a.sort();
        b.sort();
        a == b && self.facet_labels() == other.facet_labels()
    }

    /// Equality after renaming our vertices through `map`.
    pub fn isomorphic_under(&self, other: &SimplicialComplex, map: &BTreeMap<String, String>) -> Result<bool> {
        Ok(self.relabel(map)?.same_as(other))
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for SimplicialComplex {}

fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

/// Removes faces contained in other faces, sorts the rest.
fn maximal(mut faces: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for f in faces {
        if !kept.iter().any(|k| is_sorted_subset(&f, k)) {
            kept.push(f);
        }
    }
    kept.sort();
    kept
}

/// Bron–Kerbosch with pivoting; cliques come out as sorted index lists.
pub fn maximal_cliques(adj: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    fn bk(
        adj: &[BTreeSet<usize>],
        r: &mut Vec<usize>,
        p: BTreeSet<usize>,
        mut x: BTreeSet<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&&u| adj[u].intersection(&p).count())
            .copied()
            .expect("p or x nonempty");
        let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
        let mut p = p;
        for v in candidates {
            r.push(v);
            let np = p.intersection(&adj[v]).copied().collect();
            let nx = x.intersection(&adj[v]).copied().collect();
            bk(adj, r, np, nx, out);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    let p: BTreeSet<usize> = (0..adj.len()).collect();
    bk(adj, &mut Vec::new(), p, BTreeSet::new(), &mut out);
    out.sort();
    out
}

/// The flag complex whose simplices are the cliques of `g`.
pub fn flag_complex(g: &SimpleGraph) -> SimplicialComplex {
    let cliques = maximal_cliques(&g.adjacency());
    SimplicialComplex::from_indexed(g.vertices().to_vec(), cliques)
}

/// Simplicial join. Vertex labels of the two sides must be disjoint.
pub fn join(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<SimplicialComplex> {
    if let Some(v) = b.vertices().iter().find(|v| a.has_vertex(v)) {
        return Err(Error::LabelCollision(v.clone()));
    }
    if a.is_empty() {
        return Ok(b.clone());
    }
    if b.is_empty() {
        return Ok(a.clone());
    }
    let mut labels = a.vertices().to_vec();
    labels.extend(b.vertices().iter().cloned());
    let off = a.vertex_count();
    let mut faces = Vec::new();
    for fa in a.facets() {
        for fb in b.facets() {
            let mut f = fa.clone();
            f.extend(fb.iter().map(|&i| i + off));
            faces.push(f);
        }
    }
    Ok(SimplicialComplex::from_indexed(labels, faces))
}

/// The sphere construction: vertices `v+`, `v-`; for every simplex `σ` and
/// partition `σ = A ⊔ B`, the simplex `A+ ⊔ B-`.
pub fn sphere(k: &SimplicialComplex) -> SimplicialComplex {
    let mut labels = Vec::with_capacity(2 * k.vertex_count());
    for v in k.vertices() {
        labels.push(SignedVertex::plus(v.as_str()).label());
        labels.push(SignedVertex::minus(v.as_str()).label());
    }
    let mut faces = Vec::new();
    for f in k.facets() {
        let n = f.len();
        for mask in 0u64..(1u64 << n) {
            let face = (0..n)
                .map(|b| 2 * f[b] + usize::from(mask >> b & 1 == 1))
                .collect::<Vec<_>>();
            faces.push(face);
        }
    }
    SimplicialComplex::from_indexed(labels, faces)
}

/// A vertex map between labelled complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    map: BTreeMap<String, String>,
}

impl SimplicialMap {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        SimplicialMap { map }
    }

    pub fn get(&self, v: &str) -> Option<&str> {
        self.map.get(v).map(String::as_str)
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.map
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn after(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        let mut out = BTreeMap::new();
        for (k, v) in &other.map {
            let w = self.get(v).ok_or_else(|| Error::UnknownVertex(v.clone()))?;
            out.insert(k.clone(), w.to_string());
        }
        Ok(SimplicialMap { map: out })
    }

    /// Image of every simplex of `source`, as a subcomplex of `target`.
    pub fn image(&self, source: &SimplicialComplex, target: &SimplicialComplex) -> Result<SimplicialComplex> {
        let mut used = BTreeSet::new();
        let mut faces = Vec::new();
        for f in source.facet_labels() {
            let mut g = BTreeSet::new();
            for v in &f {
                g.insert(self.get(v).ok_or_else(|| Error::UnknownVertex(v.clone()))?.to_string());
            }
            if !target.contains_labels(&g.iter().collect::<Vec<_>>()) {
                return Err(Error::NotSimplicial(g.into_iter().collect()));
            }
            used.extend(g.iter().cloned());
            faces.push(g.into_iter().collect::<Vec<_>>());
        }
        let labels: Vec<String> = used.into_iter().collect();
        SimplicialComplex::from_faces(&labels, &faces)
    }

    /// Whether simplices of `source` land on simplices of `target`.
    pub fn is_simplicial(&self, source: &SimplicialComplex, target: &SimplicialComplex) -> bool {
        self.image(source, target).is_ok()
    }
}

/// `ι_P : K → S(K)`, `v ↦ v+` for `v ∈ P`, `v-` otherwise.
pub fn iota<S: AsRef<str>>(k: &SimplicialComplex, p: &[S]) -> Result<SimplicialMap> {
    let p = checked_subset(k, p)?;
    let map = k
        .vertices()
        .iter()
        .map(|v| {
            let sign = if p.contains(v.as_str()) { Sign::Plus } else { Sign::Minus };
            (v.clone(), SignedVertex::new(v.as_str(), sign).label())
        })
        .collect();
    Ok(SimplicialMap::new(map))
}

/// `π : S(K) → K`, `v± ↦ v`.
pub fn projection(k: &SimplicialComplex) -> SimplicialMap {
    let mut map = BTreeMap::new();
    for v in k.vertices() {
        map.insert(SignedVertex::plus(v.as_str()).label(), v.clone());
        map.insert(SignedVertex::minus(v.as_str()).label(), v.clone());
    }
    SimplicialMap::new(map)
}

/// `fold_P = ι_P ∘ π`, a retraction of `S(K)` onto a copy of `K`.
pub fn fold<S: AsRef<str>>(k: &SimplicialComplex, p: &[S]) -> Result<SimplicialMap> {
    iota(k, p)?.after(&projection(k))
}

fn checked_subset<'a, S: AsRef<str>>(k: &SimplicialComplex, p: &'a [S]) -> Result<BTreeSet<&'a str>> {
    let mut out = BTreeSet::new();
    for v in p {
        let v = v.as_ref();
        if !k.has_vertex(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        out.insert(v);
    }
    Ok(out)
}

/// On-disk form of an oriented graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<GraphFileEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFileEdge {
    pub from: String,
    pub to: String,
}

impl SimpleGraph {
    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges()
                .map(|(a, b)| GraphFileEdge { from: a.to_string(), to: b.to_string() })
                .collect(),
        }
    }

    pub fn from_file(f: &GraphFile) -> Result<Self> {
        let edges: Vec<(&str, &str)> = f.edges.iter().map(|e| (e.from.as_str(), e.to.as_str())).collect();
        let vertices: Vec<&str> = f.vertices.iter().map(String::as_str).collect();
        SimpleGraph::from_edges(&vertices, &edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// On-disk form of a complex: its vertices and maximal faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    pub maximal_faces: Vec<Vec<String>>,
}

impl SimplicialComplex {
    pub fn to_file(&self) -> ComplexFile {
        let mut vertices = self.vertices.clone();
        vertices.sort();
        ComplexFile { vertices, maximal_faces: self.facet_labels() }
    }

    pub fn from_file(f: &ComplexFile) -> Result<Self> {
        Self::from_faces(&f.vertices, &f.maximal_faces)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// A finite multigraph; loops and parallel edges allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Length of a shortest cycle; `None` for forests. Loops count 1, parallel
/// edges 2.
pub fn girth(g: &Multigraph) -> Option<usize> {
    if g.edges.iter().any(|&(a, b)| a == b) {
        return Some(1);
    }
    let mut seen = BTreeSet::new();
    for &(a, b) in &g.edges {
        if !seen.insert((a.min(b), a.max(b))) {
            return Some(2);
        }
    }
    let mut adj = vec![Vec::new(); g.vertex_count];
    for (id, &(a, b)) in g.edges.iter().enumerate() {
        adj[a].push((b, id));
        adj[b].push((a, id));
    }
    let mut best: Option<usize> = None;
    for root in 0..g.vertex_count {
        let mut dist = vec![usize::MAX; g.vertex_count];
        let mut via = vec![usize::MAX; g.vertex_count];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, id) in &adj[x] {
                if id == via[x] {
                    continue;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    via[y] = id;
                    queue.push_back(y);
                } else {
                    let c = dist[x] + dist[y] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

/// Breadth-first distance in a multigraph.
pub fn distance(g: &Multigraph, from: usize, to: usize) -> Option<usize> {
    let mut adj = vec![Vec::new(); g.vertex_count];
    for &(a, b) in &g.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![usize::MAX; g.vertex_count];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            return Some(dist[x]);
        }
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> SimpleGraph {
        SimpleGraph::from_edges(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap()
    }

    fn complex(vs: &[&str], faces: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::from_faces(vs, faces).unwrap()
    }

    #[test]
    fn four_cycle_has_no_triangles() {
        let k = flag_complex(&cycle4());
        assert_eq!(k.f_vector(), vec![4, 4]);
    }

    #[test]
    fn triangle_is_a_two_simplex() {
        let g = SimpleGraph::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let k = flag_complex(&g);
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert_eq!(k.facets().len(), 1);
    }

    #[test]
    fn graph_rejects_loops_and_parallel_edges() {
        let mut g = SimpleGraph::new(&["a", "b"]).unwrap();
        assert!(matches!(g.add_edge("a", "a"), Err(Error::Loop(_))));
        g.add_edge("a", "b").unwrap();
        assert!(matches!(g.add_edge("b", "a"), Err(Error::ParallelEdge(_, _))));
        assert!(matches!(g.add_edge("a", "q"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn fullness_cases() {
        let k3 = complex(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let edge = complex(&["a", "b"], &[&["a", "b"]]);
        assert!(edge.is_full_in(&k3).unwrap());
        let hollow = complex(&["a", "b", "c"], &[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert!(!hollow.is_full_in(&k3).unwrap());
        assert_eq!(
            hollow.fullness_witness(&k3).unwrap(),
            Some(vec!["a".to_string(), "b".to_string(), "c".to_string()])
        );
        assert!(k3.is_full_in(&k3).unwrap());
        let stray = complex(&["q"], &[]);
        assert!(stray.is_full_in(&k3).is_err());
    }

    #[test]
    fn sphere_of_point_and_edge() {
        let pt = complex(&["v"], &[]);
        let s = sphere(&pt);
        assert_eq!(s.f_vector(), vec![2]);
        let edge = complex(&["u", "v"], &[&["u", "v"]]);
        let s = sphere(&edge);
        assert_eq!(s.f_vector(), vec![4, 4]);
        for (a, b) in [("u+", "v+"), ("u+", "v-"), ("u-", "v+"), ("u-", "v-")] {
            assert!(s.contains_labels(&[a, b]));
        }
        assert!(!s.contains_labels(&["u+", "u-"]));
        assert_eq!(girth(&s.one_skeleton().to_multigraph()), Some(4));
    }

    #[test]
    fn joins() {
        let p = complex(&["p"], &[]);
        let q = complex(&["q"], &[]);
        assert_eq!(join(&p, &q).unwrap().f_vector(), vec![2, 1]);
        let s0a = complex(&["a", "b"], &[]);
        let s0b = complex(&["c", "d"], &[]);
        let sq = join(&s0a, &s0b).unwrap();
        assert_eq!(sq.f_vector(), vec![4, 4]);
        assert_eq!(girth(&sq.one_skeleton().to_multigraph()), Some(4));
        assert!(matches!(join(&p, &p), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn fold_all_positive() {
        let k = complex(&["a", "b"], &[&["a", "b"]]);
        let f = fold(&k, &["a", "b"]).unwrap();
        for v in ["a+", "a-"] {
            assert_eq!(f.get(v), Some("a+"));
        }
        assert!(f.is_simplicial(&sphere(&k), &sphere(&k)));
        assert!(fold(&k, &["zz"]).is_err());
    }

    #[test]
    fn projection_after_iota_is_identity() {
        let k = complex(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        let id = projection(&k).after(&iota(&k, &["b"]).unwrap()).unwrap();
        for v in k.vertices() {
            assert_eq!(id.get(v), Some(v.as_str()));
        }
    }

    #[test]
    fn girth_of_trees_and_multigraphs() {
        let tree = Multigraph { vertex_count: 4, edges: vec![(0, 1), (1, 2), (1, 3)] };
        assert_eq!(girth(&tree), None);
        let para = Multigraph { vertex_count: 2, edges: vec![(0, 1), (1, 0)] };
        assert_eq!(girth(&para), Some(2));
        let looped = Multigraph { vertex_count: 1, edges: vec![(0, 0)] };
        assert_eq!(girth(&looped), Some(1));
        let pent = Multigraph { vertex_count: 5, edges: (0..5).map(|i| (i, (i + 1) % 5)).collect() };
        assert_eq!(girth(&pent), Some(5));
    }

    #[test]
    fn links_and_open_stars() {
        let k3 = complex(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let lk = k3.link(&["a", "b"]).unwrap();
        assert_eq!(lk.vertices(), &["c".to_string()]);
        let rest = k3.delete_open_star(&["a", "b"]).unwrap();
        assert!(!rest.contains_labels(&["a", "b"]));
        assert!(rest.contains_labels(&["a", "c"]));
        assert!(rest.contains_labels(&["b", "c"]));
    }

    #[test]
    fn flag_violation_reports_minimal_clique() {
        let hollow = complex(&["a", "b", "c"], &[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert_eq!(hollow.flag_violation().map(|w| w.len()), Some(3));
    }

    #[test]
    fn signed_vertex_labels() {
        let v = SignedVertex::parse("a0@a.b+").unwrap();
        assert_eq!(v.base, "a0@a.b");
        assert_eq!(v.sign, Sign::Plus);
        assert!(SignedVertex::parse("+").is_none());
        assert!(SignedVertex::parse("x").is_none());
    }
}
