//! Integral simplicial homology, elementary collapses, and a bounded check
//! for trivial fundamental group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Default cap on the number of simplices a homology call will enumerate.
pub const DEFAULT_SIMPLEX_LIMIT: usize = 200_000;

type SparseRow = BTreeMap<usize, BigInt>;

/// Simplicial chains with their boundary maps. `boundaries[k]` maps
/// `C_{k+1}` to `C_k`, stored as one sparse column per `(k+1)`-simplex.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub bases: Vec<Vec<Vec<usize>>>,
    pub boundaries: Vec<Vec<SparseRow>>,
}

impl ChainComplex {
    pub fn of(k: &SimplicialComplex, limit: usize) -> Result<Self> {
        let estimate: usize = k
            .facets()
            .iter()
            .map(|f| 1usize.checked_shl(f.len() as u32).unwrap_or(usize::MAX))
            .fold(0, usize::saturating_add);
        if estimate > limit.saturating_mul(4) {
            return Err(Error::SizeLimit(estimate));
        }
        let bases = k.faces_by_dim();
        let total: usize = bases.iter().map(Vec::len).sum();
        if total > limit {
            return Err(Error::SizeLimit(total));
        }
        let mut boundaries = Vec::new();
        for dim in 1..bases.len() {
            let lower: BTreeMap<&[usize], usize> = bases[dim - 1]
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_slice(), i))
                .collect();
            let cols = bases[dim]
                .iter()
                .map(|s| {
                    let mut col = SparseRow::new();
                    for drop in 0..s.len() {
                        let face: Vec<usize> = s
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != drop)
                            .map(|(_, &v)| v)
                            .collect();
                        let sign = if drop % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                        col.insert(lower[face.as_slice()], sign);
                    }
                    col
                })
                .collect();
            boundaries.push(cols);
        }
        let cc = ChainComplex { bases, boundaries };
        cc.check_square_zero()?;
        Ok(cc)
    }

    pub fn rank(&self, dim: usize) -> usize {
        self.bases.get(dim).map_or(0, Vec::len)
    }

    /// Asserts that every composite of two boundary maps vanishes.
    pub fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.boundaries.len() {
            let (low, high) = (&self.boundaries[k - 1], &self.boundaries[k]);
            for (j, col) in high.iter().enumerate() {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (&mid, c) in col {
                    for (&row, a) in &low[mid] {
                        *acc.entry(row).or_default() += a * c;
                    }
                }
                if let Some((row, _)) = acc.iter().find(|(_, v)| !v.is_zero()) {
                    return Err(Error::Mismatch(format!(
                        "boundary of boundary is nonzero: simplex {j} of dimension {} hits row {row}",
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Unreduced Betti numbers and torsion coefficients per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
    pub euler: i64,
}

impl HomologyProfile {
    /// Betti numbers of reduced homology (one less in degree 0 when the
    /// complex is nonempty).
    pub fn reduced_betti(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        if let Some(b0) = b.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        b
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }
}

pub fn homology(k: &SimplicialComplex, max_dim: usize) -> Result<HomologyProfile> {
    homology_with_limit(k, max_dim, DEFAULT_SIMPLEX_LIMIT)
}

/// Homology in dimensions `0..=max_dim`. Boundary matrices are diagonalised
/// over the integers; when `max_dim` covers the whole complex the Euler
/// characteristic of the f-vector is checked against the Betti numbers.
pub fn homology_with_limit(k: &SimplicialComplex, max_dim: usize, limit: usize) -> Result<HomologyProfile> {
    let cc = ChainComplex::of(k, limit)?;
    // ranks and divisors of d_{j}: C_j -> C_{j-1}, j >= 1
    let mut ranks = vec![0usize; max_dim + 2];
    let mut divisors: Vec<Vec<BigInt>> = vec![Vec::new(); max_dim + 2];
    for j in 1..=max_dim + 1 {
        if let Some(cols) = cc.boundaries.get(j - 1) {
            let d = diagonal(cols);
            ranks[j] = d.len();
            divisors[j] = invariant_factors(d);
        }
    }
    let mut betti = Vec::with_capacity(max_dim + 1);
    let mut torsion = Vec::with_capacity(max_dim + 1);
    for j in 0..=max_dim {
        betti.push(cc.rank(j) - ranks[j] - ranks[j + 1]);
        torsion.push(divisors[j + 1].iter().filter(|d| !d.is_one()).cloned().collect());
    }
    let euler = k.euler_characteristic();
    if k.dim().is_none_or(|d| d <= max_dim) {
        let alt: i64 = betti
            .iter()
            .enumerate()
            .map(|(j, &b)| if j % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        if alt != euler {
            return Err(Error::Mismatch(format!(
                "Euler characteristic {euler} differs from alternating Betti sum {alt}"
            )));
        }
    }
    Ok(HomologyProfile { betti, torsion, euler })
}

/// Nonzero diagonal entries after integer row and column reduction of a
/// matrix given by sparse columns. Pivots are taken at minimal absolute
/// value.
fn diagonal(cols: &[SparseRow]) -> Vec<BigInt> {
    // store by rows so that row operations are cheap; columns are tracked
    // through an index from column to the rows that touch it
    let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
    let mut col_rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (&i, v) in col {
            if !v.is_zero() {
                rows.entry(i).or_default().insert(j, v.clone());
                col_rows.entry(j).or_default().insert(i);
            }
        }
    }
    let mut out = Vec::new();
    loop {
        let mut entries = rows.iter().flat_map(|(&i, r)| r.iter().map(move |(&j, v)| (i, j, v)));
        // unit pivots are the common case; take the first one without a full scan
        let pivot = match entries.find(|e| e.2.magnitude().is_one()) {
            Some((i, j, _)) => Some((i, j)),
            None => rows
                .iter()
                .flat_map(|(&i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
                .min_by(|a, b| a.2.magnitude().cmp(b.2.magnitude()))
                .map(|(i, j, _)| (i, j)),
        };
        let Some((mut pi, mut pj)) = pivot else { break };
        loop {
            let mut moved = false;
            // clear the pivot column by row operations
            let others: Vec<usize> = col_rows[&pj].iter().copied().filter(|&i| i != pi).collect();
            for i in others {
                let p = rows[&pi][&pj].clone();
                let a = rows[&i][&pj].clone();
                let q = a.div_floor(&p);
                let src = rows[&pi].clone();
                add_row(&mut rows, &mut col_rows, i, &src, &(-q));
                if rows.get(&i).and_then(|r| r.get(&pj)).is_some() {
                    pi = i;
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            // clear the pivot row by column operations; the pivot column is
            // zero outside the pivot row, so only this row changes
            let p = rows[&pi][&pj].clone();
            let row = rows.get_mut(&pi).unwrap();
            let entries: Vec<(usize, BigInt)> = row.iter().filter(|(&j, _)| j != pj).map(|(&j, v)| (j, v.clone())).collect();
            for (j, a) in entries {
                let r = a.mod_floor(&p);
                if r.is_zero() {
                    row.remove(&j);
                    col_rows.get_mut(&j).unwrap().remove(&pi);
                } else {
                    row.insert(j, r);
                }
            }
            // any remainder is smaller than the pivot and takes its place
            let smaller = row
                .iter()
                .filter(|(&j, _)| j != pj)
                .min_by(|a, b| a.1.magnitude().cmp(b.1.magnitude()))
                .map(|(&j, _)| j);
            match smaller {
                Some(j) => pj = j,
                None => break,
            }
        }
        let v = rows.remove(&pi).unwrap().remove(&pj).unwrap();
        col_rows.remove(&pj);
        out.push(v.abs());
    }
    out
}

fn add_row(
    rows: &mut BTreeMap<usize, SparseRow>,
    col_rows: &mut BTreeMap<usize, BTreeSet<usize>>,
    target: usize,
    src: &SparseRow,
    factor: &BigInt,
) {
    if factor.is_zero() {
        return;
    }
    let row = rows.entry(target).or_default();
    for (&j, v) in src {
        let e = row.entry(j).or_default();
        *e += v * factor;
        if e.is_zero() {
            row.remove(&j);
            col_rows.get_mut(&j).unwrap().remove(&target);
        } else {
            col_rows.entry(j).or_default().insert(target);
        }
    }
    if row.is_empty() {
        rows.remove(&target);
    }
}

/// Turns diagonal entries into invariant factors `d_1 | d_2 | ...`.
fn invariant_factors(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// One elementary collapse: `face` has `coface` as its only proper coface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collapse {
    pub face: Vec<String>,
    pub coface: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    pub steps: Vec<Collapse>,
}

impl CollapseCertificate {
    /// Applies the steps to `source`, checking freeness at each one.
    pub fn replay(&self, source: &SimplicialComplex) -> Result<SimplicialComplex> {
        let mut all: BTreeSet<Vec<String>> = source
            .faces_by_dim()
            .into_iter()
            .flatten()
            .map(|s| sorted_labels(source, &s))
            .collect();
        for (n, step) in self.steps.iter().enumerate() {
            let mut face = step.face.clone();
            let mut coface = step.coface.clone();
            face.sort();
            coface.sort();
            let bad = |why: &str| Error::Mismatch(format!("collapse step {n}: {why}"));
            if coface.len() != face.len() + 1 || !face.iter().all(|v| coface.contains(v)) {
                return Err(bad("coface is not a facet of codimension one over the face"));
            }
            if !all.contains(&face) || !all.contains(&coface) {
                return Err(bad("simplex already removed"));
            }
            let cofaces = all
                .iter()
                .filter(|s| s.len() > face.len() && face.iter().all(|v| s.contains(v)))
                .count();
            if cofaces != 1 {
                return Err(bad("face is not free"));
            }
            all.remove(&face);
            all.remove(&coface);
        }
        let vertices: Vec<String> = all.iter().filter(|s| s.len() == 1).map(|s| s[0].clone()).collect();
        let faces: Vec<Vec<String>> = all.into_iter().collect();
        SimplicialComplex::from_faces(&vertices, &faces)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn sorted_labels(k: &SimplicialComplex, s: &[usize]) -> Vec<String> {
    let mut l: Vec<String> = s.iter().map(|&i| k.label(i).to_string()).collect();
    l.sort();
    l
}

/// Leaf deletions collapsing a tree onto the path between `a` and `b`.
/// Leaves are removed in label order, repeatedly.
pub fn collapse_tree_to_path(t: &SimplicialComplex, a: &str, b: &str) -> Result<CollapseCertificate> {
    let ia = t.index_of(a).ok_or_else(|| Error::UnknownVertex(a.into()))?;
    let ib = t.index_of(b).ok_or_else(|| Error::UnknownVertex(b.into()))?;
    if t.dim().unwrap_or(0) > 1 {
        return Err(Error::NotATree("complex has simplices above dimension 1".into()));
    }
    let g = t.one_skeleton();
    let n = g.vertex_count();
    if g.edge_count() + 1 != n {
        return Err(Error::NotATree(format!("{n} vertices but {} edges", g.edge_count())));
    }
    let mut adj = g.adjacency();
    // BFS parents from a to read off the path and check connectivity
    let mut parent = vec![usize::MAX; n];
    parent[ia] = ia;
    let mut queue = VecDeque::from([ia]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if parent.contains(&usize::MAX) {
        return Err(Error::NotATree("graph is disconnected".into()));
    }
    let mut keep = BTreeSet::from([ib]);
    let mut at = ib;
    while at != ia {
        at = parent[at];
        keep.insert(at);
    }
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut steps = Vec::new();
    loop {
        let leaf = alive
            .iter()
            .copied()
            .filter(|v| !keep.contains(v) && adj[*v].len() == 1)
            .min_by(|x, y| t.label(*x).cmp(t.label(*y)));
        let Some(v) = leaf else { break };
        let w = *adj[v].iter().next().unwrap();
        let mut edge = vec![t.label(v).to_string(), t.label(w).to_string()];
        edge.sort();
        steps.push(Collapse { face: vec![t.label(v).to_string()], coface: edge });
        adj[w].remove(&v);
        adj[v].clear();
        alive.remove(&v);
    }
    Ok(CollapseCertificate { steps })
}

/// Greedily collapses free faces (top dimension first, then by label) until
/// none remain. Returns the certificate; replay it to get the result.
pub fn greedy_collapse(k: &SimplicialComplex) -> CollapseCertificate {
    let mut all: BTreeSet<Vec<String>> = k
        .faces_by_dim()
        .into_iter()
        .flatten()
        .map(|s| sorted_labels(k, &s))
        .collect();
    let mut steps = Vec::new();
    loop {
        let mut found = None;
        let mut order: Vec<&Vec<String>> = all.iter().collect();
        order.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        for face in order {
            let mut cofaces = all
                .iter()
                .filter(|s| s.len() > face.len() && face.iter().all(|v| s.contains(v)));
            if let (Some(c), None) = (cofaces.next(), cofaces.next()) {
                if c.len() == face.len() + 1 {
                    found = Some((face.clone(), c.clone()));
                    break;
                }
            }
        }
        let Some((face, coface)) = found else { break };
        all.remove(&face);
        all.remove(&coface);
        steps.push(Collapse { face, coface });
    }
    CollapseCertificate { steps }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pi1Outcome {
    ProvenTrivial,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi1Report {
    pub outcome: Pi1Outcome,
    /// Generators of the edge-path presentation before simplification.
    pub generators: usize,
    pub relators: usize,
    /// Generators left when the budget ran out or no move applied.
    pub remaining: usize,
    pub steps: usize,
}

/// Edge-path group presentation from a spanning tree, simplified by Tietze
/// moves that delete a generator occurring exactly once in some relator.
/// Returns `ProvenTrivial` only when every generator is eliminated within
/// `budget` moves, and never when `H_1` has positive rank.
pub fn bounded_pi1_trivial(k: &SimplicialComplex, budget: usize) -> Result<Pi1Report> {
    let unknown = |generators, relators, remaining, steps| Pi1Report {
        outcome: Pi1Outcome::Unknown,
        generators,
        relators,
        remaining,
        steps,
    };
    if k.is_empty() {
        return Ok(unknown(0, 0, 0, 0));
    }
    let h = homology(k, 1)?;
    if h.betti[0] != 1 || h.betti[1] > 0 {
        return Ok(unknown(0, 0, 0, 0));
    }
    let g = k.one_skeleton();
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut tree: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                tree.insert((x.min(y), x.max(y)));
                queue.push_back(y);
            }
        }
    }
    let mut gen_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(a, b) in g.edge_indices() {
        let e = (a.min(b), a.max(b));
        if !tree.contains(&e) {
            let next = gen_of.len();
            gen_of.entry(e).or_insert(next);
        }
    }
    let letter = |a: usize, b: usize| -> Option<Letter> {
        let e = (a.min(b), a.max(b));
        gen_of.get(&e).map(|&i| if a < b { Letter::pos(i) } else { Letter::neg(i) })
    };
    let mut relators: Vec<Word> = Vec::new();
    for f in k.faces_by_dim().get(2).into_iter().flatten() {
        // vertex indices of the complex and of the skeleton agree by label
        let v: Vec<usize> = f.iter().map(|&i| g.index_of(k.label(i)).unwrap()).collect();
        let mut w = Word::new();
        for (x, y) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
            if let Some(l) = letter(x, y) {
                w.push(l);
            }
        }
        relators.push(w);
    }
    let generators = gen_of.len();
    let relator_count = relators.len();
    let mut alive: BTreeSet<u32> = (0..generators as u32).collect();
    let mut steps = 0;
    while !alive.is_empty() && steps < budget {
        relators = relators
            .iter()
            .map(Word::cyclic_reduce)
            .filter(|w| !w.is_empty())
            .collect();
        relators.sort_by_key(Word::len);
        relators.dedup();
        let mut pick = None;
        'search: for (ri, r) in relators.iter().enumerate() {
            for (pos, l) in r.letters().iter().enumerate() {
                if r.letters().iter().filter(|m| m.gen == l.gen).count() == 1 {
                    pick = Some((ri, pos));
                    break 'search;
                }
            }
        }
        let Some((ri, pos)) = pick else { break };
        let r = relators.remove(ri);
        let l = r.letters()[pos];
        // r = u l v, so l = u^-1 v^-1 and l^-1 = v u
        let u = Word(r.letters()[..pos].to_vec());
        let v = Word(r.letters()[pos + 1..].to_vec());
        let mut value = u.inverse().concat(&v.inverse());
        if l.inv {
            value = value.inverse();
        }
        let value = value.free_reduce();
        for w in relators.iter_mut() {
            let mut out = Word::new();
            for &m in w.letters() {
                if m.gen == l.gen {
                    let sub = if m.inv { value.inverse() } else { value.clone() };
                    for &x in sub.letters() {
                        out.push(x);
                    }
                } else {
                    out.push(m);
                }
            }
            *w = out.free_reduce();
        }
        alive.remove(&l.gen);
        steps += 1;
    }
    if alive.is_empty() {
        Ok(Pi1Report {
            outcome: Pi1Outcome::ProvenTrivial,
            generators,
            relators: relator_count,
            remaining: 0,
            steps,
        })
    } else {
        Ok(unknown(generators, relator_count, alive.len(), steps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra_boundary() -> SimplicialComplex {
        SimplicialComplex::from_faces(
            &["a", "b", "c", "d"],
            &[["a", "b", "c"], ["a", "b", "d"], ["a", "c", "d"], ["b", "c", "d"]],
        )
        .unwrap()
    }

    fn square() -> SimplicialComplex {
        SimplicialComplex::from_faces(&["a", "b", "c", "d"], &[["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]]).unwrap()
    }

    #[test]
    fn sphere_and_circle() {
        let h = homology(&tetra_boundary(), 2).unwrap();
        assert_eq!(h.betti, vec![1, 0, 1]);
        assert!(!h.has_torsion());
        assert_eq!(homology(&square(), 1).unwrap().betti, vec![1, 1]);
        assert_eq!(h.reduced_betti(), vec![0, 0, 1]);
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        // six-vertex triangulation of the real projective plane
        let faces = [
            [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2],
            [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4],
        ];
        let faces: Vec<Vec<String>> = faces.iter().map(|f| f.iter().map(|v| v.to_string()).collect()).collect();
        let verts: Vec<String> = (1..=6).map(|v| v.to_string()).collect();
        let k = SimplicialComplex::from_faces(&verts, &faces).unwrap();
        let h = homology(&k, 2).unwrap();
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion[1], vec![BigInt::from(2)]);
    }

    #[test]
    fn tree_collapses() {
        let path = SimplicialComplex::from_faces(&["a", "b", "c"], &[["a", "b"], ["b", "c"]]).unwrap();
        assert!(collapse_tree_to_path(&path, "a", "c").unwrap().is_empty());
        let star = SimplicialComplex::from_faces(&["c", "x", "y", "z"], &[["c", "x"], ["c", "y"], ["c", "z"]]).unwrap();
        let cert = collapse_tree_to_path(&star, "x", "y").unwrap();
        assert_eq!(cert.len(), 1);
        let target = SimplicialComplex::from_faces(&["c", "x", "y"], &[["c", "x"], ["c", "y"]]).unwrap();
        assert_eq!(cert.replay(&star).unwrap(), target);
        assert!(matches!(collapse_tree_to_path(&square(), "a", "b"), Err(Error::NotATree(_))));
    }

    #[test]
    fn cone_collapses_to_point() {
        let cone = SimplicialComplex::from_faces(
            &["o", "a", "b", "c"],
            &[["o", "a", "b"], ["o", "b", "c"], ["o", "c", "a"]],
        )
        .unwrap();
        let cert = greedy_collapse(&cone);
        assert_eq!(cert.replay(&cone).unwrap().vertex_count(), 1);
        assert_eq!(greedy_collapse(&tetra_boundary()).len(), 0);
    }

    #[test]
    fn replay_rejects_non_free_faces() {
        let cert = CollapseCertificate {
            steps: vec![Collapse { face: vec!["a".into()], coface: vec!["a".into(), "b".into()] }],
        };
        assert!(cert.replay(&square()).is_err());
    }

    #[test]
    fn pi1_checks() {
        assert_eq!(bounded_pi1_trivial(&tetra_boundary(), 100).unwrap().outcome, Pi1Outcome::ProvenTrivial);
        assert_eq!(bounded_pi1_trivial(&square(), 100).unwrap().outcome, Pi1Outcome::Unknown);
    }
}
