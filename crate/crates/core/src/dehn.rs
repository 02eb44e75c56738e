//! Diagram families for Dehn-function experiments in the orthoplex kernel.
//!
//! Every diagram here is assembled from fans, so its statistics come from
//! exact fan layer counts rather than from drawing anything:
//!
//! * `F′_n` is the fan `F_n` with its height −1 vertices chopped off. The
//!   bottom layer of `F_n` is refined into triangles along its `x_e`
//!   diagonals, and chopping removes one triangle per edge-rim letter.
//! * `P_n` is two relabelled copies of `F′_n` glued along the edge rim.
//! * `Q_m` strings `P_1, …, P_m` together with `x·ā` / `y·b̄` corridors.
//! * `R_n` (even `n`) stacks the rows `Q_{n−|j|}`, `|j| ≤ n`, with ζ/ω
//!   corridors. Its boundary is the loop `ℓ_n`.
//! * `T_n` is the flat tent filling the same loop in the ambient complex.
//!
//! A corridor running along `L` level-0 edges contributes `L` cells.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fans::{preset_exp, Direction, FanEngine};
use crate::log::preset_poly;
use crate::praag::Mark;
use crate::stats::least_squares;
use crate::word::{Letter, Word};

/// Diagram families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    FPrime,
    P,
    Q,
    R,
    T,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::FPrime, Family::P, Family::Q, Family::R, Family::T];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::FPrime => "F'",
            Family::P => "P",
            Family::Q => "Q",
            Family::R => "R",
            Family::T => "T",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s || (*f == Family::FPrime && s == "F"))
            .ok_or_else(|| Error::Parse(format!("unknown diagram family `{s}`")))
    }
}

/// Size of one diagram. `fans + corridors == area`.
///
/// The tent does not depend on a mark, so its `d` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramStats {
    pub family: Family,
    pub d: Option<Mark>,
    pub n: u64,
    pub perimeter: u64,
    pub area: u64,
    pub fans: u64,
    pub corridors: u64,
}

impl DiagramStats {
    fn new(family: Family, d: Option<Mark>, n: u64, perimeter: u64, fans: u64, corridors: u64) -> Result<Self> {
        let area = fans.checked_add(corridors).ok_or_else(overflow)?;
        Ok(DiagramStats { family, d, n, perimeter, area, fans, corridors })
    }

    pub fn breakdown_ok(&self) -> bool {
        self.fans.checked_add(self.corridors) == Some(self.area)
    }
}

fn overflow() -> Error {
    Error::InvalidParameter("diagram area overflows u64".into())
}

/// A corridor joining two adjacent sub-diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corridor {
    /// Separating hyperplane tag, unique within a diagram.
    pub tag: String,
    /// Composite label carried by the corridor (`x·ā`, `y·b̄`, `ζ`, `ω`).
    pub label: &'static str,
    pub length: u64,
}

/// Statistics plus the corridors used to assemble the diagram.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub stats: DiagramStats,
    pub corridors: Vec<Corridor>,
    /// Number of pairs of adjacent sub-diagrams.
    pub adjacent_pairs: usize,
    /// Cells dropped when chopping (only for `F′`).
    pub removed: u64,
}

/// Every adjacent pair of sub-diagrams is separated by its own hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub pairs: usize,
    pub distinct_tags: usize,
    pub repeated: Vec<String>,
}

impl SeparationCertificate {
    pub fn holds(&self) -> bool {
        self.repeated.is_empty() && self.distinct_tags == self.pairs
    }
}

impl Diagram {
    pub fn separation(&self) -> SeparationCertificate {
        let mut seen = HashSet::new();
        let mut repeated = Vec::new();
        for c in &self.corridors {
            if !seen.insert(c.tag.as_str()) {
                repeated.push(c.tag.clone());
            }
        }
        SeparationCertificate { pairs: self.adjacent_pairs, distinct_tags: seen.len(), repeated }
    }
}

/// Fan layer counts for one mark, shared by all families.
#[derive(Clone, Debug)]
pub struct DehnLab {
    d: Mark,
    /// `layers[m - 1]` is the edge-rim length of `F_m`, which is also the
    /// size of layer `m` of every larger `F_n`.
    layers: Vec<u64>,
}

impl DehnLab {
    /// Precomputes `F_1, …, F_max_n`. Needs `d > 1` or `d = ∞`.
    pub fn new(d: Mark, max_n: usize) -> Result<Self> {
        let (log, top, bottom) = match d {
            Mark::Finite(k) if k > 1 => (preset_poly(k as usize)?, "s".to_string(), format!("a{k}")),
            Mark::Finite(k) => {
                return Err(Error::InvalidParameter(format!("diagram families need d > 1, got {k}")))
            }
            Mark::Infinite => {
                let p = preset_exp()?;
                (p.log, p.anchor, p.end)
            }
        };
        let engine = FanEngine::new(&log, Direction::Descending)?;
        let a = log.vertex_index(&top)?;
        let b = log.vertex_index(&bottom)?;
        let layers = engine.constant_rims(a, b, max_n)?;
        Ok(DehnLab { d, layers })
    }

    pub fn mark(&self) -> Mark {
        self.d
    }

    pub fn max_n(&self) -> usize {
        self.layers.len()
    }

    fn check_n(&self, n: u64) -> Result<usize> {
        if n == 0 || n as usize > self.layers.len() {
            return Err(Error::InvalidParameter(format!(
                "n = {n} outside 1..={}",
                self.layers.len()
            )));
        }
        Ok(n as usize)
    }

    /// Cells of `F_n` before refinement.
    pub fn squares(&self, n: u64) -> Result<u64> {
        let n = self.check_n(n)?;
        Ok(self.layers[..n].iter().sum())
    }

    /// `|erim(F_n)|`, the size of its bottom layer.
    pub fn erim_len(&self, n: u64) -> Result<u64> {
        Ok(self.layers[self.check_n(n)? - 1])
    }

    /// Area of the refined `F_n`: squares plus one extra triangle per
    /// bottom-layer cell.
    pub fn refined_fan_area(&self, n: u64) -> Result<u64> {
        Ok(self.squares(n)? + self.erim_len(n)?)
    }

    pub fn fprime(&self, n: u64) -> Result<Diagram> {
        let squares = self.squares(n)?;
        let removed = self.erim_len(n)?;
        debug_assert_eq!(self.refined_fan_area(n)? - removed, squares);
        Ok(Diagram {
            stats: DiagramStats::new(Family::FPrime, Some(self.d), n, 2 * n + removed, squares, 0)?,
            corridors: Vec::new(),
            adjacent_pairs: 0,
            removed,
        })
    }

    pub fn p(&self, n: u64) -> Result<Diagram> {
        let fans = 2 * self.squares(n)?;
        Ok(Diagram {
            stats: DiagramStats::new(Family::P, Some(self.d), n, 4 * n, fans, 0)?,
            corridors: Vec::new(),
            adjacent_pairs: 0,
            removed: 0,
        })
    }

    /// `Q_m` with corridor tags prefixed by `row`.
    fn q_in_row(&self, m: u64, row: &str) -> Result<Diagram> {
        let mut fans = 0u64;
        for k in 1..=m {
            fans = fans.checked_add(2 * self.squares(k)?).ok_or_else(overflow)?;
        }
        // The corridor between P_k and P_{k+1} runs along half of ∂P_k.
        let corridors: Vec<Corridor> = (1..m)
            .map(|k| Corridor {
                tag: format!("{row}{}{k}", if k % 2 == 1 { "x" } else { "y" }),
                label: if k % 2 == 1 { "x·ā" } else { "y·b̄" },
                length: 2 * k,
            })
            .collect();
        let corridor_area = corridors.iter().map(|c| c.length).sum();
        Ok(Diagram {
            stats: DiagramStats::new(Family::Q, Some(self.d), m, 6 * m - 2, fans, corridor_area)?,
            corridors,
            adjacent_pairs: m.saturating_sub(1) as usize,
            removed: 0,
        })
    }

    pub fn q(&self, m: u64) -> Result<Diagram> {
        self.q_in_row(m, "")
    }

    /// `R_n` for even `n`.
    pub fn r(&self, n: u64) -> Result<Diagram> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidParameter(format!("R_n is built for even n ≥ 2, got {n}")));
        }
        self.check_n(n)?;
        let n_i = n as i64;
        let size = |j: i64| (n_i - j.abs()) as u64;
        let mut fans = 0u64;
        let mut corridor_area = 0u64;
        let mut corridors = Vec::new();
        let mut pairs = 0usize;
        for j in -n_i..=n_i {
            let m = size(j);
            if m == 0 {
                continue;
            }
            let row = self.q_in_row(m, &format!("{j}:"))?;
            fans = fans.checked_add(row.stats.fans).ok_or_else(overflow)?;
            corridor_area = corridor_area.checked_add(row.stats.corridors).ok_or_else(overflow)?;
            pairs += row.adjacent_pairs;
            corridors.extend(row.corridors);
        }
        // Rows j and j+1 differ by one step of the alternating z/w walk away
        // from the middle row.
        for j in -n_i..n_i {
            let m = size(j).min(size(j + 1));
            if m == 0 {
                continue;
            }
            let steps = j.abs().min((j + 1).abs());
            let towards_positive = j >= 0;
            let zeta = (steps % 2 == 0) == towards_positive;
            let length = 3 * m - 1;
            corridor_area = corridor_area.checked_add(length).ok_or_else(overflow)?;
            corridors.push(Corridor {
                tag: format!("{}{j}/{}", if zeta { "z" } else { "w" }, j + 1),
                label: if zeta { "ζ" } else { "ω" },
                length,
            });
            pairs += 1;
        }
        Ok(Diagram {
            stats: DiagramStats::new(Family::R, Some(self.d), n, loop_length(n), fans, corridor_area)?,
            corridors,
            adjacent_pairs: pairs,
            removed: 0,
        })
    }

    pub fn stats(&self, family: Family, n: u64) -> Result<DiagramStats> {
        Ok(match family {
            Family::FPrime => self.fprime(n)?.stats,
            Family::P => self.p(n)?.stats,
            Family::Q => self.q(n)?.stats,
            Family::R => self.r(n)?.stats,
            Family::T => tent_stats(n)?,
        })
    }

    /// Stats for `n = 1..=max_n` (even `n` only for `R`).
    pub fn series(&self, family: Family, max_n: u64) -> Result<Vec<DiagramStats>> {
        (1..=max_n)
            .filter(|n| family != Family::R || n % 2 == 0)
            .map(|n| self.stats(family, n))
            .collect()
    }
}

pub fn build_fprime(d: Mark, n: u64) -> Result<Diagram> {
    DehnLab::new(d, n as usize)?.fprime(n)
}

pub fn build_pn(d: Mark, n: u64) -> Result<Diagram> {
    DehnLab::new(d, n as usize)?.p(n)
}

/// `Q_n` is only defined for finite marks.
pub fn build_qn(d: Mark, n: u64) -> Result<Diagram> {
    if d == Mark::Infinite {
        return Err(Error::InvalidParameter("Q_n needs a finite mark".into()));
    }
    DehnLab::new(d, n as usize)?.q(n)
}

pub fn build_rn(d: Mark, n: u64) -> Result<Diagram> {
    DehnLab::new(d, n as usize)?.r(n)
}

/// Tent `T_n`: four flat right-angled triangles of leg `n`, subdivided into
/// unit squares and diagonal half-squares, each counted as one cell.
pub fn tent_stats(n: u64) -> Result<DiagramStats> {
    if n == 0 {
        return Err(Error::InvalidParameter("T_n needs n ≥ 1".into()));
    }
    let area = n.checked_mul(n + 1).and_then(|a| a.checked_mul(2)).ok_or_else(overflow)?;
    DiagramStats::new(Family::T, None, n, loop_length(n), area, 0)
}

fn loop_length(n: u64) -> u64 {
    4 * n
}

/// Generators of the boundary 4-cycle, in the order used by [`loop_word`].
pub const CYCLE_LETTERS: [&str; 4] = ["x", "y", "z", "w"];

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const W: usize = 3;

/// A height-0 composite letter `t·s̄` with `t ∈ {z, w}` and `s ∈ {x, y}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Composite {
    pub t: usize,
    pub s: usize,
    pub inverse: bool,
}

impl Composite {
    fn alpha(t: usize) -> Self {
        Composite { t, s: X, inverse: false }
    }

    fn beta(t: usize) -> Self {
        Composite { t, s: Y, inverse: false }
    }

    fn inv(self) -> Self {
        Composite { inverse: !self.inverse, ..self }
    }

    pub fn letters(self) -> [Letter; 2] {
        if self.inverse {
            [Letter::pos(self.s), Letter::neg(self.t)]
        } else {
            [Letter::pos(self.t), Letter::neg(self.s)]
        }
    }

    pub fn name(self) -> String {
        let greek = if self.s == X { "α" } else { "β" };
        let bar = if self.inverse { "̄" } else { "" };
        format!("{greek}{bar}_{}", CYCLE_LETTERS[self.t])
    }
}

fn alt(k: u64, a: Composite, b: Composite) -> impl Iterator<Item = Composite> {
    (0..k).map(move |i| if i % 2 == 0 { a } else { b })
}

/// The loop `ℓ_n` as `4n` composite letters.
pub fn loop_composites(n: u64) -> Result<Vec<Composite>> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("ℓ_n is defined for even n ≥ 2, got {n}")));
    }
    let (az, aw, bz, bw) = (Composite::alpha(Z), Composite::alpha(W), Composite::beta(Z), Composite::beta(W));
    Ok(alt(n, bz.inv(), aw.inv())
        .chain(alt(n, bw, az))
        .chain(alt(n, aw.inv(), bz.inv()))
        .chain(alt(n, az, bw))
        .collect())
}

/// The loop `ℓ_n` spelled in the generators [`CYCLE_LETTERS`].
pub fn loop_word(n: u64) -> Result<Word> {
    let mut w = Word::new();
    for c in loop_composites(n)? {
        for l in c.letters() {
            w.push(l);
        }
    }
    Ok(w)
}

/// Whether a word in [`CYCLE_LETTERS`] is trivial in the RAAG of the 4-cycle
/// `x–z–y–w`: the `{x, y}` and `{z, w}` parts commute with each other and are
/// free, so each part must freely reduce to the empty word.
pub fn trivial_in_cycle_raag(w: &Word) -> bool {
    let part = |gens: [usize; 2]| -> Word {
        let mut p = Word::new();
        for &l in w.letters() {
            if gens.contains(&(l.gen as usize)) {
                p.push(l);
            }
        }
        p.free_reduce()
    };
    part([X, Y]).is_empty() && part([Z, W]).is_empty()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModel {
    Power,
    Exponential,
}

impl FromStr for GrowthModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(GrowthModel::Power),
            "exp" | "exponential" => Ok(GrowthModel::Exponential),
            _ => Err(Error::Parse(format!("unknown growth model `{s}`"))),
        }
    }
}

/// Least-squares growth estimate over the upper half of the `n` range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub model: GrowthModel,
    /// Exponent (power model) or base (exponential model).
    pub value: f64,
    pub intercept: f64,
    pub window: (u64, u64),
    pub points: usize,
    pub r_squared: f64,
}

pub const MIN_FIT_POINTS: usize = 6;

pub fn fit_growth(stats: &[DiagramStats], model: GrowthModel) -> Result<GrowthFit> {
    if stats.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidParameter(format!(
            "growth fit needs at least {MIN_FIT_POINTS} points, got {}",
            stats.len()
        )));
    }
    let mut pts: Vec<(u64, u64)> = stats.iter().map(|s| (s.n, s.area)).collect();
    pts.sort_unstable();
    if let Some(&(n, _)) = pts.iter().find(|p| p.1 == 0 || p.0 == 0) {
        return Err(Error::InvalidParameter(format!("zero size at n = {n}")));
    }
    let upper = &pts[pts.len() / 2..];
    let xy: Vec<(f64, f64)> = upper
        .iter()
        .map(|&(n, a)| {
            let x = match model {
                GrowthModel::Power => (n as f64).ln(),
                GrowthModel::Exponential => n as f64,
            };
            (x, (a as f64).ln())
        })
        .collect();
    let (slope, intercept, r_squared) = least_squares(&xy)
        .ok_or_else(|| Error::InvalidParameter("degenerate fit: all points share one n".into()))?;
    let value = match model {
        GrowthModel::Power => slope,
        GrowthModel::Exponential => slope.exp(),
    };
    Ok(GrowthFit {
        model,
        value,
        intercept,
        window: (upper[0].0, upper[upper.len() - 1].0),
        points: upper.len(),
        r_squared,
    })
}

pub const CSV_HEADER: [&str; 7] = ["family", "d", "n", "perimeter", "area", "fans", "corridors"];

#[derive(Serialize, Deserialize)]
struct CsvRow {
    family: String,
    d: String,
    n: u64,
    perimeter: u64,
    area: u64,
    fans: u64,
    corridors: u64,
}

pub fn write_csv<W: Write>(stats: &[DiagramStats], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for s in stats {
        w.serialize(CsvRow {
            family: s.family.to_string(),
            d: s.d.map(|d| d.to_string()).unwrap_or_default(),
            n: s.n,
            perimeter: s.perimeter,
            area: s.area,
            fans: s.fans,
            corridors: s.corridors,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<DiagramStats>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
    }
    let mut out = Vec::new();
    for row in r.deserialize::<CsvRow>() {
        let row = row?;
        let s = DiagramStats {
            family: row.family.parse()?,
            d: if row.d.is_empty() { None } else { Some(row.d.parse()?) },
            n: row.n,
            perimeter: row.perimeter,
            area: row.area,
            fans: row.fans,
            corridors: row.corridors,
        };
        if !s.breakdown_ok() {
            return Err(Error::Parse(format!("row {} {}: fans + corridors ≠ area", s.family, s.n)));
        }
        out.push(s);
    }
    Ok(out)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;").replace('\'', "&apos;")
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 420.0;
const SVG_PAD: f64 = 48.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// Log-log scatter of area against `n`, one polyline per family. A power fit
/// is drawn as a straight line.
pub fn render_svg(stats: &[DiagramStats], fit: Option<&GrowthFit>) -> String {
    let pts: Vec<(f64, f64)> = stats
        .iter()
        .filter(|s| s.n > 0 && s.area > 0)
        .map(|s| ((s.n as f64).ln(), (s.area as f64).ln()))
        .collect();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let lo = pts.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() && hi > lo {
            (lo, hi)
        } else if lo.is_finite() {
            (lo - 1.0, lo + 1.0)
        } else {
            (0.0, 1.0)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let sx = |x: f64| SVG_PAD + (x - x0) / (x1 - x0) * (SVG_W - 2.0 * SVG_PAD);
    let sy = |y: f64| SVG_H - SVG_PAD - (y - y0) / (y1 - y0) * (SVG_H - 2.0 * SVG_PAD);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">\n"
    ));
    out.push_str(&format!(
        "  <rect x=\"{SVG_PAD}\" y=\"{SVG_PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
        SVG_W - 2.0 * SVG_PAD,
        SVG_H - 2.0 * SVG_PAD
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">log n</text>\n",
        SVG_W / 2.0,
        SVG_H - 12.0
    ));
    out.push_str(&format!(
        "  <text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">log area</text>\n",
        SVG_H / 2.0,
        SVG_H / 2.0
    ));
    let mut families: Vec<(Family, Option<Mark>)> = stats.iter().map(|s| (s.family, s.d)).collect();
    families.sort_by_key(|(f, d)| (*f, d.map(|d| d.to_string())));
    families.dedup();
    for (i, (family, d)) in families.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mut series: Vec<&DiagramStats> = stats
            .iter()
            .filter(|s| s.family == *family && s.d == *d && s.n > 0 && s.area > 0)
            .collect();
        series.sort_by_key(|s| s.n);
        let coords: Vec<String> = series
            .iter()
            .map(|s| format!("{:.2},{:.2}", sx((s.n as f64).ln()), sy((s.area as f64).ln())))
            .collect();
        let label = match d {
            Some(d) => format!("{family} d={d}"),
            None => family.to_string(),
        };
        out.push_str(&format!(
            "  <polyline data-family=\"{}\" fill=\"none\" stroke=\"{colour}\" points=\"{}\"/>\n",
            xml_escape(&label),
            coords.join(" ")
        ));
        for c in &coords {
            let (cx, cy) = c.split_once(',').unwrap_or(("0", "0"));
            out.push_str(&format!("  <circle cx=\"{cx}\" cy=\"{cy}\" r=\"2.5\" fill=\"{colour}\"/>\n"));
        }
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" fill=\"{colour}\">{}</text>\n",
            SVG_PAD + 8.0,
            SVG_PAD + 16.0 * (i as f64 + 1.0),
            xml_escape(&label)
        ));
    }
    if let Some(f) = fit.filter(|f| f.model == GrowthModel::Power) {
        let (lo, hi) = ((f.window.0 as f64).ln(), (f.window.1 as f64).ln());
        out.push_str(&format!(
            "  <line class=\"fit\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#000\" stroke-dasharray=\"4 3\"/>\n",
            sx(lo),
            sy(f.value * lo + f.intercept),
            sx(hi),
            sy(f.value * hi + f.intercept)
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\">slope {:.3}, R² {:.4}</text>\n",
            SVG_W - SVG_PAD - 8.0,
            SVG_H - SVG_PAD - 8.0,
            f.value,
            f.r_squared
        ));
    }
    out.push_str("</svg>\n");
    out
}
