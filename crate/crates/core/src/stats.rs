//! Small numeric helpers: least-squares lines and exact finite differences.

use num_bigint::BigInt;
use num_traits::Zero;

/// Fits `y = slope * x + intercept`. Returns `(slope, intercept, r²)`, or
/// `None` for fewer than two points or constant `x`.
///
/// For constant `y` the fit is exact and `r²` is reported as 1.
pub fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Some((slope, intercept, r2))
}

/// The `k`-th forward difference of an integer sequence.
pub fn finite_difference(seq: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut cur = seq.to_vec();
    for _ in 0..k {
        cur = cur.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    cur
}

/// Smallest `k` whose `(k+1)`-th difference vanishes, i.e. the degree of the
/// interpolating polynomial. `None` if no order up to `len - 2` vanishes.
pub fn difference_degree(seq: &[BigInt]) -> Option<usize> {
    if seq.iter().all(Zero::is_zero) {
        return Some(0);
    }
    // need at least one value left after k+1 differences, and two to be meaningful
    (0..seq.len().saturating_sub(2)).find(|&k| {
        let d = finite_difference(seq, k + 1);
        !d.is_empty() && d.iter().all(Zero::is_zero)
    })
}
