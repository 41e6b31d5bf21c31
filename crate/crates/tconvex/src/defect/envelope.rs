//! Exact supremum of the distance-to-candidates function along a segment.
//!
//! Parametrize the segment as `y(s) = a + s(b - a)`. For each candidate `z`,
//! `|y(s) - z|²` is a parabola in `s` whose leading coefficient `|b - a|²`
//! is shared by all candidates, so the pointwise minimum differs from a
//! lower envelope of *lines* by the common parabola. That envelope is
//! concave piecewise linear; adding the convex common parabola gives a
//! function whose maximum over `[0, 1]` is attained at an envelope
//! breakpoint or at an endpoint. No grid is needed.

use crate::linalg;

/// `sup_{y in [a,b]} min_z |y - z|` over the candidate coordinates.
///
/// Exact up to floating point; candidates must contain every minimizer of
/// the distance for points of the segment (callers guarantee this via the
/// 3r-ball guard).
pub fn segment_defect_sup(a: &[f64], b: &[f64], candidates: &[&[f64]]) -> f64 {
    debug_assert!(!candidates.is_empty());
    let w = linalg::sub(b, a);
    let w2 = linalg::dot(&w, &w);
    if w2 == 0.0 {
        let d2 = candidates
            .iter()
            .map(|z| linalg::dist2(a, z))
            .fold(f64::INFINITY, f64::min);
        return d2.max(0.0).sqrt();
    }
    // |y(s) - z|² = w2·s² + m_z·s + c_z.
    let mut lines: Vec<(f64, f64)> = candidates
        .iter()
        .map(|z| {
            let za = linalg::sub(z, a);
            (-2.0 * linalg::dot(&w, &za), linalg::dot(&za, &za))
        })
        .collect();
    // Lower envelope of lines: sort by slope descending; for equal slopes
    // only the smallest intercept can be active.
    lines.sort_unstable_by(|p, q| q.0.total_cmp(&p.0).then(p.1.total_cmp(&q.1)));
    lines.dedup_by(|next, kept| next.0 == kept.0);
    // Hull of active lines. `bad` detects a middle line never strictly below.
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(lines.len());
    for l in lines {
        while hull.len() >= 2 {
            let l1 = hull[hull.len() - 2];
            let l2 = hull[hull.len() - 1];
            // l2 obsolete iff cross(l1, l) <= cross(l1, l2):
            // (c3-c1)(m1-m2) <= (c2-c1)(m1-m3), all slopes descending.
            if (l.1 - l1.1) * (l1.0 - l2.0) <= (l2.1 - l1.1) * (l1.0 - l.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(l);
    }
    let eval = |s: f64, line: (f64, f64)| w2 * s * s + line.0 * s + line.1;
    let mut best = eval(0.0, hull[0]).min(
        // Guard against envelope construction slack at the endpoints: take
        // the true minimum over all hull lines there.
        hull.iter().map(|&l| eval(0.0, l)).fold(f64::INFINITY, f64::min),
    );
    best = best.max(hull.iter().map(|&l| eval(1.0, l)).fold(f64::INFINITY, f64::min));
    for pair in hull.windows(2) {
        let (m1, c1) = pair[0];
        let (m2, c2) = pair[1];
        let s = (c2 - c1) / (m1 - m2);
        if s > 0.0 && s < 1.0 {
            best = best.max(eval(s, pair[0]).min(eval(s, pair[1])));
        }
    }
    best.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_alone_peaks_at_midpoint() {
        let a = [0.0, 0.0];
        let b = [2.0, 0.0];
        let d = segment_defect_sup(&a, &b, &[&a, &b]);
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interior_candidate_splits_the_segment() {
        let a = [0.0];
        let b = [2.0];
        let m = [1.0];
        let d = segment_defect_sup(&a, &b, &[&a, &b, &m]);
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn off_segment_candidate() {
        // Candidate above the middle of the segment trims the peak.
        let a = [0.0, 0.0];
        let b = [2.0, 0.0];
        let c = [1.0, 0.5];
        let d = segment_defect_sup(&a, &b, &[&a, &b, &c]);
        // Voronoi boundary between a and c crosses the segment at s where
        // |y-a| = |y-c|; the peak there is |y - a|.
        let brute = (0..=100000)
            .map(|i| {
                let s = i as f64 / 100000.0;
                let y = [2.0 * s, 0.0];
                let da = (y[0] * y[0]).sqrt();
                let db = ((y[0] - 2.0) * (y[0] - 2.0)).sqrt();
                let dc = ((y[0] - 1.0) * (y[0] - 1.0) + 0.25).sqrt();
                da.min(db).min(dc)
            })
            .fold(0.0f64, f64::max);
        assert!((d - brute).abs() < 1e-5, "envelope {d} vs brute {brute}");
    }

    #[test]
    fn degenerate_zero_length_segment() {
        let a = [1.0, 1.0];
        let z = [0.0, 0.0];
        let d = segment_defect_sup(&a, &a, &[&z]);
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn matches_dense_sampling_on_random_configurations() {
        let mut state = 7u64;
        let mut rnd = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        for _ in 0..50 {
            let a = [rnd(), rnd(), rnd()];
            let b = [rnd(), rnd(), rnd()];
            let cands: Vec<[f64; 3]> = (0..6).map(|_| [rnd(), rnd(), rnd()]).collect();
            let mut refs: Vec<&[f64]> = cands.iter().map(|c| c.as_slice()).collect();
            refs.push(&a);
            refs.push(&b);
            let fast = segment_defect_sup(&a, &b, &refs);
            let brute = (0..=20000)
                .map(|i| {
                    let s = i as f64 / 20000.0;
                    let y: Vec<f64> = a.iter().zip(&b).map(|(x, u)| x + s * (u - x)).collect();
                    refs.iter()
                        .map(|z| crate::linalg::dist(&y, z))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0f64, f64::max);
            assert!(
                (fast - brute).abs() < 1e-3,
                "envelope {fast} vs brute {brute}"
            );
        }
    }
}
