#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use praag_core::complex::{
    flag_complex, fold, iota, join, projection, sphere, SimpleGraph, SimplicialComplex,
};
use praag_core::homology::{homology, ChainComplex, DEFAULT_SIMPLEX_LIMIT};

pub const DEFAULT_SEED: u64 = 0x5eed_2718;
pub const CASES: usize = 200;

/// Seed for randomized suites; override with `PRAAG_SEED`.
pub fn seed() -> u64 {
    std::env::var("PRAAG_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn random_graph(rng: &mut ChaCha8Rng, prefix: &str, n: usize, p: f64) -> SimpleGraph {
    let vs = labels(prefix, n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((vs[i].as_str(), vs[j].as_str()));
            }
        }
    }
    let vrefs: Vec<&str> = vs.iter().map(String::as_str).collect();
    SimpleGraph::from_edges(&vrefs, &edges).expect("random graph is simple")
}

/// Random complex from a handful of random facets, not necessarily flag.
pub fn random_complex(rng: &mut ChaCha8Rng, prefix: &str, max_vertices: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices);
    let vs = labels(prefix, n);
    let mut faces: Vec<Vec<String>> = Vec::new();
    for _ in 0..rng.gen_range(1..=5) {
        let size = rng.gen_range(1..=n.min(4));
        let mut f: Vec<String> = vs.choose_multiple(rng, size).cloned().collect();
        f.sort();
        faces.push(f);
    }
    SimplicialComplex::from_faces(&vs, &faces).expect("faces use declared vertices")
}

pub fn random_flag(rng: &mut ChaCha8Rng, prefix: &str, max_vertices: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices);
    let p = rng.gen_range(0.2..0.8);
    flag_complex(&random_graph(rng, prefix, n, p))
}

/// `S(K)` is flag for flag `K`, and `S(L ⋆ K) = S(L) ⋆ S(K)`.
pub fn check_sphere(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<(), String> {
    let s = sphere(k);
    if k.is_flag() && !s.is_flag() {
        return Err(format!("S(K) not flag for flag K = {:?}", k.facet_labels()));
    }
    let lhs = sphere(&join(l, k).map_err(|e| e.to_string())?);
    let rhs = join(&sphere(l), &s).map_err(|e| e.to_string())?;
    if !lhs.same_as(&rhs) {
        return Err(format!("join distributivity fails for {:?} and {:?}", l.facet_labels(), k.facet_labels()));
    }
    Ok(())
}

/// `fold_P` is a simplicial idempotent onto `ι_P(K)` with `π ∘ ι_P = id`.
pub fn check_fold(k: &SimplicialComplex, p: &[String]) -> Result<(), String> {
    let s = sphere(k);
    let f = fold(k, p).map_err(|e| e.to_string())?;
    if !f.is_simplicial(&s, &s) {
        return Err("fold is not simplicial".into());
    }
    if f.after(&f).map_err(|e| e.to_string())? != f {
        return Err(format!("fold not idempotent for P = {p:?}"));
    }
    let i = iota(k, p).map_err(|e| e.to_string())?;
    let image = f.image(&s, &s).map_err(|e| e.to_string())?;
    if !image.same_as(&i.image(k, &s).map_err(|e| e.to_string())?) {
        return Err("fold image differs from ι_P(K)".into());
    }
    let back = projection(k).after(&i).map_err(|e| e.to_string())?;
    if back.as_map().iter().any(|(a, b)| a != b) {
        return Err("π ∘ ι_P is not the identity".into());
    }
    Ok(())
}

/// Glues two flag complexes along isomorphic full subcomplexes and checks
/// that the union is flag and contains both pieces as full subcomplexes.
pub fn check_gluing(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let shared = rng.gen_range(1..=4);
    let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
    let p = rng.gen_range(0.3..0.8);
    let g1 = random_graph(rng, "c", shared + a, p);
    let mut g2 = random_graph(rng, "d", shared + b, p);
    // force the two copies of L to carry the same graph
    let mut g2_edges: Vec<(String, String)> = g2
        .edges()
        .filter(|(x, y)| index(x) >= shared || index(y) >= shared)
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
    for (x, y) in g1.edges() {
        if index(x) < shared && index(y) < shared {
            g2_edges.push((format!("d{}", index(x)), format!("d{}", index(y))));
        }
    }
    let vs: Vec<String> = g2.vertices().to_vec();
    let vrefs: Vec<&str> = vs.iter().map(String::as_str).collect();
    let erefs: Vec<(&str, &str)> = g2_edges.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    g2 = SimpleGraph::from_edges(&vrefs, &erefs).map_err(|e| e.to_string())?;

    let k1 = flag_complex(&g1);
    let k2 = flag_complex(&g2);
    let l_labels: Vec<String> = (0..shared).map(|i| format!("c{i}")).collect();
    let l = k1.induced(&l_labels).map_err(|e| e.to_string())?;
    if !l.is_full_in(&k1).map_err(|e| e.to_string())? {
        return Err("L is not full in K1".into());
    }
    let phi: BTreeMap<String, String> = vs
        .iter()
        .map(|v| {
            let i = index(v);
            let target = if i < shared { format!("c{i}") } else { format!("b{i}") };
            (v.clone(), target)
        })
        .collect();
    let k2 = k2.relabel(&phi).map_err(|e| e.to_string())?;
    let glued = k1.union(&k2);
    if let Some(w) = glued.flag_violation() {
        return Err(format!("glued complex not flag, witness {w:?}"));
    }
    for piece in [&k1, &k2] {
        if !piece.is_full_in(&glued).map_err(|e| e.to_string())? {
            return Err("a piece is not full in the glued complex".into());
        }
    }
    Ok(())
}

fn index(label: &str) -> usize {
    label[1..].parse().expect("generated label")
}

/// `∂∂ = 0` and Euler characteristic agreement.
pub fn check_homology(k: &SimplicialComplex) -> Result<(), String> {
    let c = ChainComplex::of(k, DEFAULT_SIMPLEX_LIMIT).map_err(|e| e.to_string())?;
    c.check_square_zero().map_err(|e| e.to_string())?;
    let dim = k.dim().unwrap_or(0);
    let h = homology(k, dim).map_err(|e| e.to_string())?;
    if h.euler != k.euler_characteristic() {
        return Err(format!("χ mismatch: {} vs {}", h.euler, k.euler_characteristic()));
    }
    let alt: i64 = h.betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    if alt != h.euler {
        return Err(format!("alternating Betti sum {alt} ≠ χ {}", h.euler));
    }
    Ok(())
}

#[derive(Debug, Default)]
pub struct SuiteReport {
    pub sphere_cases: usize,
    pub gluing_cases: usize,
    pub homology_cases: usize,
    pub failures: Vec<String>,
}

/// Runs every randomized property `cases` times from `seed`.
pub fn run_property_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = rng(seed);
    let mut r = SuiteReport::default();
    for case in 0..cases {
        let k = if case % 2 == 0 { random_flag(&mut rng, "k", 7) } else { random_complex(&mut rng, "k", 7) };
        let l = random_complex(&mut rng, "l", 3);
        let subset: Vec<String> = k.vertices().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        for res in [check_sphere(&k, &l), check_fold(&k, &subset)] {
            if let Err(e) = res {
                r.failures.push(format!("sphere case {case}: {e}"));
            }
        }
        r.sphere_cases += 1;
        if let Err(e) = check_gluing(&mut rng) {
            r.failures.push(format!("gluing case {case}: {e}"));
        }
        r.gluing_cases += 1;
        for c in [&k, &sphere(&k)] {
            if let Err(e) = check_homology(c) {
                r.failures.push(format!("homology case {case}: {e}"));
            }
            r.homology_cases += 1;
        }
    }
    r
}
