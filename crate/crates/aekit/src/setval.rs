//! Set-valued analysis over finite point clouds.
//!
//! Compact sets are modeled as finite clouds of points in Euclidean space.
//! This module provides the point-to-set displacement, the (asymmetric)
//! excess, the Hausdorff distance, open neighborhood filtering, and a
//! finite-window check for Painlevé–Kuratowski convergence of cloud
//! sequences (which coincides with Hausdorff convergence for compacts).
//!
//! Empty clouds are allowed and follow the standard extension:
//! `d(x, ∅) = +∞`, `e(∅, D) = 0`, `e(C, ∅) = +∞` for nonempty `C`, and
//! `h(∅, ∅) = 0`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Default tolerance under which two points are considered the same.
pub const DEFAULT_DEDUP: f64 = 1e-12;

/// A point in `R^dim` with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting NaN and infinite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoordinate { value, index });
            }
        }
        // Normalize -0.0 so canonical serialization is unique.
        let coords = coords
            .into_iter()
            .map(|c| if c == 0.0 { 0.0 } else { c })
            .collect();
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean distance.
    pub fn distance(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Lexicographic comparison on coordinates. Total because coordinates
    /// are finite by construction.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.partial_cmp(b).expect("finite coordinates") {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }

    pub(crate) fn translated(&self, shift: &[f64]) -> Point {
        let coords = self
            .coords
            .iter()
            .zip(shift)
            .map(|(c, s)| c + s)
            .collect::<Vec<_>>();
        Point::new(coords).expect("translation of finite point by finite shift")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite point cloud standing for a compact subset of `R^dim`.
///
/// Clouds are canonicalized at construction: points are sorted
/// lexicographically and points within the dedup tolerance of an earlier
/// point are dropped. Iteration order is therefore deterministic.
#[derive(Clone, Debug)]
pub struct FiniteCloud {
    dim: usize,
    dedup: f64,
    points: Vec<Point>,
}

impl PartialEq for FiniteCloud {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points
    }
}

impl FiniteCloud {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        Self::with_dedup(dim, points, DEFAULT_DEDUP)
    }

    pub fn with_dedup(dim: usize, points: Vec<Point>, dedup: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("cloud dimension must be positive"));
        }
        if !(dedup >= 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "dedup tolerance must be nonnegative, got {dedup}"
            )));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        let mut sorted = points;
        sorted.sort_by(|a, b| a.lex_cmp(b));
        let mut kept: Vec<Point> = Vec::with_capacity(sorted.len());
        for p in sorted {
            if kept.iter().all(|q| q.distance(&p) > dedup) {
                kept.push(p);
            }
        }
        Ok(FiniteCloud {
            dim,
            dedup,
            points: kept,
        })
    }

    pub fn empty(dim: usize) -> Self {
        FiniteCloud {
            dim,
            dedup: DEFAULT_DEDUP,
            points: Vec::new(),
        }
    }

    pub fn empty_with_dedup(dim: usize, dedup: f64) -> Self {
        FiniteCloud {
            dim,
            dedup,
            points: Vec::new(),
        }
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_coords(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let points = rows
            .iter()
            .map(|r| Point::new(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, points)
    }

    pub fn from_coords_with_dedup(dim: usize, rows: &[Vec<f64>], dedup: f64) -> Result<Self> {
        let points = rows
            .iter()
            .map(|r| Point::new(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::with_dedup(dim, points, dedup)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dedup(&self) -> f64 {
        self.dedup
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// Membership up to the dedup tolerance.
    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim && self.points.iter().any(|q| q.distance(p) <= self.dedup)
    }

    /// Translates every point by the same vector. Preserves the canonical
    /// order and pairwise distances, so no re-canonicalization is needed.
    pub(crate) fn translated(&self, shift: &[f64]) -> FiniteCloud {
        debug_assert_eq!(shift.len(), self.dim);
        FiniteCloud {
            dim: self.dim,
            dedup: self.dedup,
            points: self.points.iter().map(|p| p.translated(shift)).collect(),
        }
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// Distance from a point to a cloud: the minimum over members, `+∞` for the
/// empty cloud. Values at or below the cloud's dedup tolerance snap to zero,
/// so `displacement(x, S) == 0.0` exactly when `x` is a member up to dedup.
pub fn displacement(x: &Point, s: &FiniteCloud) -> Result<f64> {
    check_dims(s.dim(), x.dim())?;
    let mut best = f64::INFINITY;
    for p in s.iter() {
        let d = x.distance(p);
        if d < best {
            best = d;
        }
    }
    if best <= s.dedup() {
        Ok(0.0)
    } else {
        Ok(best)
    }
}

/// Excess of `c` from `d`: `sup_{x in c} d(x, d)`. Asymmetric.
pub fn excess(c: &FiniteCloud, d: &FiniteCloud) -> Result<f64> {
    check_dims(c.dim(), d.dim())?;
    let mut worst = 0.0_f64;
    for p in c.iter() {
        let disp = displacement(p, d)?;
        if disp > worst {
            worst = disp;
        }
    }
    Ok(worst)
}

/// Hausdorff distance: the larger of the two excesses.
pub fn hausdorff(c: &FiniteCloud, d: &FiniteCloud) -> Result<f64> {
    Ok(excess(c, d)?.max(excess(d, c)?))
}

/// Keeps the candidates that lie strictly within `eps` of `s` (open ball).
/// Preserves the candidates' canonical order.
pub fn neighborhood_filter(
    s: &FiniteCloud,
    candidates: &FiniteCloud,
    eps: f64,
) -> Result<FiniteCloud> {
    check_dims(s.dim(), candidates.dim())?;
    if !(eps > 0.0) {
        return Err(Error::invalid(format!(
            "neighborhood radius must be positive, got {eps}"
        )));
    }
    let mut kept = Vec::new();
    for p in candidates.iter() {
        if displacement(p, s)? < eps {
            kept.push(p.clone());
        }
    }
    Ok(FiniteCloud {
        dim: candidates.dim(),
        dedup: candidates.dedup(),
        points: kept,
    })
}

/// An inclusive index range `start..end` with `1 <= start <= end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    start: usize,
    end: usize,
}

impl Window {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start == 0 || start > end {
            return Err(Error::invalid(format!(
                "window must satisfy 1 <= start <= end, got {start}..{end}"
            )));
        }
        Ok(Window { start, end })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }

    /// Position (0-based, within the window) where the tail half begins:
    /// the last `ceil(len/2)` entries.
    pub fn tail_start_pos(&self) -> usize {
        self.len() / 2
    }

    /// Parses the `a..b` form used on the command line.
    pub fn parse(text: &str) -> Result<Self> {
        let (a, b) = text
            .split_once("..")
            .ok_or_else(|| Error::invalid(format!("window must look like a..b, got `{text}`")))?;
        let start = a
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::invalid(format!("bad window start `{a}`: {e}")))?;
        let end = b
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::invalid(format!("bad window end `{b}`: {e}")))?;
        Window::new(start, end)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Outcome of a finite-window Painlevé–Kuratowski limit check.
///
/// The verdict is an estimate from finite evidence: the trace of Hausdorff
/// distances is always exposed so callers can judge for themselves.
#[derive(Clone, Debug)]
pub struct PkLimitReport {
    pub converged: bool,
    /// `hausdorff(family(n), candidate)` for each `n` in the window.
    pub trace: Vec<f64>,
    pub window: Window,
}

/// Checks whether `candidate` looks like the Painlevé–Kuratowski (equivalently
/// Hausdorff, on compacts) limit of the cloud family over the given window:
/// all tail-half distances must be at most `tol` and the whole trace must be
/// non-increasing up to `tol`.
pub fn pk_limit_check<F>(
    family: F,
    candidate: &FiniteCloud,
    window: Window,
    tol: f64,
) -> Result<PkLimitReport>
where
    F: Fn(usize) -> FiniteCloud,
{
    if !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "pk tolerance must be positive, got {tol}"
        )));
    }
    let mut trace = Vec::with_capacity(window.len());
    for n in window.indices() {
        let member = family(n);
        trace.push(hausdorff(&member, candidate)?);
    }
    let tail_ok = trace[window.tail_start_pos()..].iter().all(|&h| h <= tol);
    let monotone = trace
        .windows(2)
        .all(|w| w[0].is_infinite() || w[1] <= w[0] + tol);
    Ok(PkLimitReport {
        converged: tail_ok && monotone,
        trace,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn cloud(rows: &[&[f64]]) -> FiniteCloud {
        let dim = rows.first().map(|r| r.len()).unwrap_or(1);
        FiniteCloud::from_coords(dim, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(Point::new(vec![0.0, f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn cloud_canonicalizes() {
        let c = cloud(&[&[1.0], &[0.0], &[1.0], &[0.5]]);
        let coords: Vec<f64> = c.iter().map(|p| p.coords()[0]).collect();
        assert_eq!(coords, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn displacement_member_and_nearest() {
        let s = cloud(&[&[0.0], &[3.0]]);
        assert_eq!(displacement(&pt(&[0.0]), &s).unwrap(), 0.0);
        let s2 = cloud(&[&[3.0], &[5.0]]);
        assert_eq!(displacement(&pt(&[0.0]), &s2).unwrap(), 3.0);
    }

    #[test]
    fn displacement_empty_is_infinite() {
        let s = FiniteCloud::empty(1);
        assert!(displacement(&pt(&[0.0]), &s).unwrap().is_infinite());
    }

    #[test]
    fn displacement_snaps_at_dedup() {
        let s = cloud(&[&[0.0]]);
        assert_eq!(displacement(&pt(&[1e-13]), &s).unwrap(), 0.0);
        assert!(displacement(&pt(&[1e-10]), &s).unwrap() > 0.0);
    }

    #[test]
    fn displacement_dimension_mismatch() {
        let s = cloud(&[&[0.0]]);
        assert!(matches!(
            displacement(&pt(&[0.0, 1.0]), &s),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn displacement_matches_pairwise_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows: Vec<Vec<f64>> = (0..50)
                .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let s = FiniteCloud::from_coords(2, &rows).unwrap();
            let x = pt(&[1.0, 1.0]);
            let brute = s
                .iter()
                .map(|p| x.distance(p))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(displacement(&x, &s).unwrap(), brute);
        }
    }

    #[test]
    fn excess_examples_and_asymmetry() {
        let c = cloud(&[&[0.0], &[2.0]]);
        let d = cloud(&[&[0.0]]);
        assert_eq!(excess(&c, &d).unwrap(), 2.0);
        assert_eq!(excess(&d, &c).unwrap(), 0.0);
    }

    #[test]
    fn excess_empty_conventions() {
        let c = cloud(&[&[0.0]]);
        let e = FiniteCloud::empty(1);
        assert_eq!(excess(&e, &c).unwrap(), 0.0);
        assert!(excess(&c, &e).unwrap().is_infinite());
        assert_eq!(excess(&e, &e).unwrap(), 0.0);
    }

    #[test]
    fn excess_matches_nested_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let dim = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=30);
            let m = rng.gen_range(1..=30);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng, k: usize| {
                let rows: Vec<Vec<f64>> = (0..k)
                    .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
                    .collect();
                FiniteCloud::from_coords(dim, &rows).unwrap()
            };
            let c = mk(&mut rng, n);
            let d = mk(&mut rng, m);
            let brute = c
                .iter()
                .map(|x| {
                    d.iter()
                        .map(|y| x.distance(y))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0_f64, f64::max);
            assert_eq!(excess(&c, &d).unwrap(), brute);
        }
    }

    #[test]
    fn hausdorff_basics() {
        let c = cloud(&[&[0.0]]);
        let d = cloud(&[&[3.0]]);
        assert_eq!(hausdorff(&c, &d).unwrap(), 3.0);
        assert_eq!(hausdorff(&c, &c).unwrap(), 0.0);
        let e = FiniteCloud::empty(1);
        assert_eq!(hausdorff(&e, &e).unwrap(), 0.0);
        assert!(hausdorff(&e, &d).unwrap().is_infinite());
    }

    #[test]
    fn hausdorff_zero_iff_equal_up_to_dedup() {
        let c = cloud(&[&[0.0], &[1.0]]);
        let d = cloud(&[&[1e-13], &[1.0]]);
        assert_eq!(hausdorff(&c, &d).unwrap(), 0.0);
        let far = cloud(&[&[1e-10], &[1.0]]);
        assert!(hausdorff(&c, &far).unwrap() > 0.0);
    }

    /// Independent oracle for the Hausdorff distance: bisection on the radius
    /// characterization `h = inf { eta > 0 : N_eta[C] ⊇ D and N_eta[D] ⊇ C }`,
    /// using raw distances only.
    fn hausdorff_bisection_oracle(c: &FiniteCloud, d: &FiniteCloud) -> f64 {
        let covered = |eta: f64| -> bool {
            d.iter().all(|y| {
                c.iter()
                    .map(|x| x.distance(y))
                    .fold(f64::INFINITY, f64::min)
                    < eta
            }) && c.iter().all(|x| {
                d.iter()
                    .map(|y| y.distance(x))
                    .fold(f64::INFINITY, f64::min)
                    < eta
            })
        };
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        while !covered(hi) {
            hi *= 2.0;
            if hi > 1e12 {
                return f64::INFINITY;
            }
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if covered(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    #[test]
    fn hausdorff_matches_radius_characterization() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let dim = rng.gen_range(1..=3);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let k = rng.gen_range(1..=20);
                let rows: Vec<Vec<f64>> = (0..k)
                    .map(|_| (0..dim).map(|_| rng.gen::<f64>() * 3.0).collect())
                    .collect();
                FiniteCloud::from_coords(dim, &rows).unwrap()
            };
            let c = mk(&mut rng);
            let d = mk(&mut rng);
            let h = hausdorff(&c, &d).unwrap();
            let oracle = hausdorff_bisection_oracle(&c, &d);
            assert!(
                (h - oracle).abs() <= 1e-9,
                "h={h} oracle={oracle} differ by more than 1e-9"
            );
        }
    }

    #[test]
    fn neighborhood_filter_strict_boundary() {
        let s = cloud(&[&[0.0]]);
        let cands = cloud(&[&[0.0], &[1.0], &[2.0]]);
        let inside = neighborhood_filter(&s, &cands, 1.5).unwrap();
        let coords: Vec<f64> = inside.iter().map(|p| p.coords()[0]).collect();
        assert_eq!(coords, vec![0.0, 1.0]);
        // A point at distance exactly eps is excluded: the ball is open.
        let boundary = neighborhood_filter(&s, &cands, 1.0).unwrap();
        let coords: Vec<f64> = boundary.iter().map(|p| p.coords()[0]).collect();
        assert_eq!(coords, vec![0.0]);
    }

    #[test]
    fn neighborhood_filter_empty_base() {
        let s = FiniteCloud::empty(1);
        let cands = cloud(&[&[0.0], &[1.0]]);
        assert!(neighborhood_filter(&s, &cands, 1.0).unwrap().is_empty());
    }

    #[test]
    fn pk_constant_family_converges() {
        let c = cloud(&[&[0.0], &[1.0]]);
        let report = pk_limit_check(|_| c.clone(), &c, Window::new(1, 10).unwrap(), 1e-9).unwrap();
        assert!(report.converged);
        assert!(report.trace.iter().all(|&h| h == 0.0));
    }

    #[test]
    fn pk_geometric_decay() {
        let family = |n: usize| cloud(&[&[0.5_f64.powi(n as i32)]]);
        let candidate = cloud(&[&[0.0]]);
        // Tail half of 1..30 starts at n = 16 where the distance is 2^-16,
        // so a 1e-4 tolerance accepts and 1e-6 rejects.
        let w = Window::new(1, 30).unwrap();
        assert!(pk_limit_check(family, &candidate, w, 1e-4).unwrap().converged);
        assert!(!pk_limit_check(family, &candidate, w, 1e-6).unwrap().converged);
        // A window whose tail lies deeper accepts at 1e-6.
        let deep = Window::new(11, 40).unwrap();
        assert!(pk_limit_check(family, &candidate, deep, 1e-6)
            .unwrap()
            .converged);
    }

    #[test]
    fn pk_alternating_family_diverges() {
        let family = |n: usize| {
            if n % 2 == 0 {
                cloud(&[&[0.0]])
            } else {
                cloud(&[&[1.0]])
            }
        };
        let candidate = cloud(&[&[0.0]]);
        let report =
            pk_limit_check(family, &candidate, Window::new(1, 20).unwrap(), 1e-6).unwrap();
        assert!(!report.converged);
    }

    #[test]
    fn pk_empty_candidate_fails_with_infinite_trace() {
        let family = |_: usize| cloud(&[&[0.0]]);
        let candidate = FiniteCloud::empty(1);
        let report =
            pk_limit_check(family, &candidate, Window::new(1, 4).unwrap(), 1e-6).unwrap();
        assert!(!report.converged);
        assert!(report.trace.iter().all(|h| h.is_infinite()));
    }

    #[test]
    fn window_parsing() {
        let w = Window::parse("1..30").unwrap();
        assert_eq!((w.start(), w.end(), w.len()), (1, 30, 30));
        assert!(Window::parse("5..2").is_err());
        assert!(Window::parse("0..3").is_err());
        assert!(Window::parse("nope").is_err());
    }
}
