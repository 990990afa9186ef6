//! Cut-and-project tiling machinery: the perpendicular-space acceptance
//! window, candidate enumeration, rhombic and triangular patch generation,
//! and the rotational symmetry report.
//!
//! The window at the origin is the perpendicular projection of the Voronoi
//! cell, a zonotope spanned by the projected `k` vectors, optionally
//! translated by a shift. Weight-lattice points are additionally graded by
//! congruence level, and level `s` is tested against the projection of the
//! matching Delone vertex orbit (the hull of all sums of `s` distinct `k`
//! images). Membership goes through closed-form interval or polygon gauges
//! when the perpendicular space has dimension 1 or 2, and through a small
//! linear program otherwise; the linear-program route stays available at
//! every rank as an independent cross-check.
//!
//! A shift of exactly zero puts lattice images on the window boundary, so
//! patch generation then counts boundary ("singular") points as accepted.
//! That keeps the patch closed under the lattice symmetries that fix the
//! origin, which is what the symmetry report measures. Any nonzero shift
//! excludes singular points from tiles and records how many were seen.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::catalog::{self, RhombusClassification};
use crate::cells::{self, TriangleFamily};
use crate::error::{Error, Result};
use crate::lattice::{Basis, LatticeRank, LatticeVector};
use crate::lp;
use crate::projection::{CoxeterFrame, PlanePoint};

/// Relative half-width of the singular band around the window boundary.
pub const WINDOW_EPS: f64 = 1e-9;
/// Slack added to the patch radius so that rim points whose parallel norm
/// equals the radius up to float noise land on the same side for every
/// symmetry image.
const RADIUS_EPS: f64 = 1e-9;
/// Grid used to merge coinciding projected vertices (crystallographic
/// duplicates differ by at most ~1e-15, distinct vertices by far more).
const DEDUP_GRID: f64 = 1e-6;
/// Grid used by the symmetry report; respects the 1e-6 match tolerance.
const SYMMETRY_GRID: f64 = 1e-5;

/// Which lattice a patch is generated over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Root,
    Weight,
}

/// What a patch generator did with points on the window boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// Generic shift: singular points are excluded from tiles.
    Excluded,
    /// Zero shift: singular points count as accepted, keeping the patch
    /// closed under the point symmetries of the window.
    Closed,
}

/// Result of testing one lattice point against the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceptance {
    Inside,
    /// Within `WINDOW_EPS` of the window boundary.
    Singular,
    Outside,
}

// ---------------------------------------------------------------------------
// Plane helpers shared by the window and patch code.

fn quantize(x: f64, grid: f64) -> i64 {
    (x / grid).round() as i64
}

fn quantize_point(p: &PlanePoint, grid: f64) -> (i64, i64) {
    (quantize(p.x, grid), quantize(p.y, grid))
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Monotone-chain convex hull, counterclockwise, collinear points dropped.
fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    if pts.len() <= 2 {
        return pts;
    }
    let turn_tol = 1e-12
        * pts
            .iter()
            .map(|p| p[0].abs().max(p[1].abs()))
            .fold(1.0_f64, f64::max);
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross2(lower[lower.len() - 2], lower[lower.len() - 1], p) <= turn_tol
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(upper[upper.len() - 2], upper[upper.len() - 1], p) <= turn_tol
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Closed membership test against the hull of a 2D point set.
fn point_in_hull_2d(points: &[[f64; 2]], d: [f64; 2], eps: f64) -> bool {
    let hull = convex_hull_2d(points);
    match hull.len() {
        0 => false,
        1 => {
            let dx = d[0] - hull[0][0];
            let dy = d[1] - hull[0][1];
            (dx * dx + dy * dy).sqrt() <= eps
        }
        2 => {
            segment_distance(
                PlanePoint::new(d[0], d[1]),
                PlanePoint::new(hull[0][0], hull[0][1]),
                PlanePoint::new(hull[1][0], hull[1][1]),
            ) <= eps
        }
        _ => {
            let k = hull.len();
            (0..k).all(|i| cross2(hull[i], hull[(i + 1) % k], d) >= -eps)
        }
    }
}

/// Minkowski gauge of a convex polygon that contains the origin strictly,
/// stored as counterclockwise vertices with per-edge outward normals and
/// support values.
#[derive(Debug, Clone)]
struct PolyGauge {
    verts: Vec<[f64; 2]>,
    /// `(outward normal, support)` per edge; support is strictly positive.
    edges: Vec<([f64; 2], f64)>,
}

impl PolyGauge {
    fn new(points: &[[f64; 2]]) -> Result<Self> {
        let verts = convex_hull_2d(points);
        if verts.len() < 3 {
            return Err(Error::InvalidInput(
                "window polygon degenerates to fewer than three vertices".into(),
            ));
        }
        let mut edges = Vec::with_capacity(verts.len());
        for i in 0..verts.len() {
            let a = verts[i];
            let b = verts[(i + 1) % verts.len()];
            let normal = [b[1] - a[1], a[0] - b[0]];
            let support = normal[0] * a[0] + normal[1] * a[1];
            if support <= 1e-9 {
                return Err(Error::InvalidInput(
                    "window polygon does not contain the origin strictly".into(),
                ));
            }
            edges.push((normal, support));
        }
        Ok(Self { verts, edges })
    }

    fn gauge(&self, d: [f64; 2]) -> f64 {
        self.edges
            .iter()
            .map(|(n, s)| (n[0] * d[0] + n[1] * d[1]) / s)
            .fold(0.0_f64, f64::max)
    }
}

/// Closed-form gauge evaluators by perpendicular dimension; `Lp` defers to
/// the simplex solver.
#[derive(Debug, Clone)]
enum Gauge {
    /// The level-0 window: the single point at the window center.
    Origin,
    Interval {
        lo: f64,
        hi: f64,
    },
    Polygon(PolyGauge),
    Lp,
}

fn interval_gauge(x: f64, lo: f64, hi: f64) -> f64 {
    if x > 0.0 {
        x / hi
    } else if x < 0.0 {
        x / lo
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------------
// The acceptance window.

/// Acceptance window in the perpendicular space: the projected Voronoi-cell
/// zonotope for flat tests, plus one vertex-orbit hull per congruence level
/// for graded tests. Built once per patch and shared across threads.
#[derive(Debug, Clone)]
pub struct Window {
    rank: LatticeRank,
    frame: CoxeterFrame,
    shift: Vec<f64>,
    gens: Vec<Vec<f64>>,
    zono: Gauge,
    zono_circ: f64,
    zono_box: Vec<(f64, f64)>,
    zono_verts: Option<Vec<Vec<f64>>>,
    levels: Vec<Gauge>,
    level_circ: Vec<f64>,
    level_box: Vec<Vec<(f64, f64)>>,
}

/// Build the acceptance window for rank `n >= 3` with the given shift
/// (length `n - 2`).
pub fn build_window(rank: LatticeRank, shift: &[f64]) -> Result<Window> {
    Window::new(rank, shift)
}

impl Window {
    pub fn new(rank: LatticeRank, shift: &[f64]) -> Result<Self> {
        let n = rank.n();
        if n < 3 {
            return Err(Error::UnsupportedRank {
                n,
                reason: "the acceptance window needs a perpendicular space, so n >= 3".into(),
            });
        }
        let frame = CoxeterFrame::new(rank)?;
        let p = frame.perp_dim();
        if shift.len() != p {
            return Err(Error::RankMismatch {
                expected: p,
                got: shift.len(),
            });
        }
        if shift.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidInput("window shift must be finite".into()));
        }
        let h = rank.h();
        let mut gens = Vec::with_capacity(h);
        for j in 1..=h {
            let k = LatticeVector::basis_vector(rank, Basis::K, j)?;
            gens.push(frame.project_perp(&k));
        }

        // Exact coordinate boxes. Zonotope: half the absolute row sums.
        // Level s: sum of the s largest and s smallest entries per row.
        let mut zono_box = Vec::with_capacity(p);
        for r in 0..p {
            let half: f64 = gens.iter().map(|g| g[r].abs()).sum::<f64>() / 2.0;
            zono_box.push((-half, half));
        }
        let mut level_box: Vec<Vec<(f64, f64)>> = Vec::with_capacity(h);
        for s in 0..h {
            let mut bx = Vec::with_capacity(p);
            for r in 0..p {
                let mut col: Vec<f64> = gens.iter().map(|g| g[r]).collect();
                col.sort_by(|a, b| a.partial_cmp(b).expect("finite generator"));
                let lo: f64 = col[..s].iter().sum();
                let hi: f64 = col[h - s..].iter().sum();
                bx.push((lo, hi));
            }
            level_box.push(bx);
        }

        // Circumradii: exact by subset sweep while 2^h stays reasonable,
        // otherwise safe upper bounds. Both are only used to reject points
        // early, so an upper bound is always sound.
        let gmax = gens
            .iter()
            .map(|g| norm(g))
            .fold(0.0_f64, f64::max);
        let (zono_circ, level_circ) = if h <= cells::MAX_VERTEX_ENUM_RANK {
            sweep_circumradii(&gens, p, h)
        } else {
            let zc: f64 = gens.iter().map(|g| norm(g)).sum::<f64>() / 2.0;
            let lc = (0..h)
                .map(|s| s.min(h - s) as f64 * gmax)
                .collect();
            (zc, lc)
        };

        // Closed-form gauges for one- and two-dimensional perpendicular
        // spaces; everything else goes through the linear program.
        let (zono, zono_verts) = match p {
            1 => {
                let hi = zono_box[0].1;
                (
                    Gauge::Interval {
                        lo: -hi,
                        hi,
                    },
                    Some(vec![vec![-hi], vec![hi]]),
                )
            }
            2 => {
                let pts = proper_subset_sums_2d(&gens);
                let pg = PolyGauge::new(&pts)?;
                let verts = pg.verts.iter().map(|v| v.to_vec()).collect();
                (Gauge::Polygon(pg), Some(verts))
            }
            _ => (Gauge::Lp, None),
        };
        let mut levels = Vec::with_capacity(h);
        for s in 0..h {
            if s == 0 {
                levels.push(Gauge::Origin);
                continue;
            }
            levels.push(match p {
                1 => {
                    let (lo, hi) = level_box[s][0];
                    if !(lo < 0.0 && hi > 0.0) {
                        return Err(Error::InvalidInput(format!(
                            "level {s} window does not contain the origin"
                        )));
                    }
                    Gauge::Interval { lo, hi }
                }
                2 => {
                    let pts = orbit_sums_2d(&gens, s);
                    Gauge::Polygon(PolyGauge::new(&pts)?)
                }
                _ => Gauge::Lp,
            });
        }

        Ok(Self {
            rank,
            frame,
            shift: shift.to_vec(),
            gens,
            zono,
            zono_circ,
            zono_box,
            zono_verts,
            levels,
            level_circ,
            level_box,
        })
    }

    pub fn rank(&self) -> LatticeRank {
        self.rank
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn eps(&self) -> f64 {
        WINDOW_EPS
    }

    pub fn perp_dim(&self) -> usize {
        self.frame.perp_rows().len()
    }

    pub fn frame(&self) -> &CoxeterFrame {
        &self.frame
    }

    /// Perpendicular images of `k_1 ..= k_h`.
    pub fn generators(&self) -> &[Vec<f64>] {
        &self.gens
    }

    /// Upper bound on the distance from the window center to its boundary
    /// (exact while the vertex sweep is affordable).
    pub fn circumradius(&self) -> f64 {
        self.zono_circ
    }

    pub fn level_circumradius(&self, level: usize) -> Option<f64> {
        self.level_circ.get(level).copied()
    }

    /// Hull vertices of the unshifted window when the perpendicular space
    /// is one- or two-dimensional.
    pub fn zonotope_vertices(&self) -> Option<&[Vec<f64>]> {
        self.zono_verts.as_deref()
    }

    /// Gauge of a perpendicular point against the full zonotope window;
    /// values below 1 are inside. The shift is subtracted here.
    pub fn gauge(&self, perp_point: &[f64]) -> Result<f64> {
        let d = self.to_local(perp_point)?;
        self.gauge_shifted(&d)
    }

    /// Gauge against the level-`s` orbit window (`1 <= s < h`).
    pub fn gauge_level(&self, level: usize, perp_point: &[f64]) -> Result<f64> {
        let h = self.rank.h();
        if level == 0 || level >= h {
            return Err(Error::IndexOutOfRange {
                index: level,
                valid: format!("orbit levels run 1..={}", h - 1),
            });
        }
        let d = self.to_local(perp_point)?;
        self.gauge_level_shifted(level, &d)
    }

    /// Same gauges through the linear program, for cross-checking the
    /// closed-form paths. `level: None` targets the full zonotope.
    pub fn gauge_lp_reference(&self, perp_point: &[f64], level: Option<usize>) -> Result<f64> {
        let d = self.to_local(perp_point)?;
        self.gauge_lp(&d, level)
    }

    /// Flat acceptance: is the point's perpendicular image in the shifted
    /// Voronoi window? This is the test for root-lattice points; any
    /// integer point can be asked.
    pub fn accept(&self, q: &LatticeVector) -> Result<Acceptance> {
        if q.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank.h(),
                got: q.rank().h(),
            });
        }
        let coords = q.integer_coords()?;
        Ok(self.accept_coords(&coords))
    }

    /// Graded acceptance: the point is tested against the orbit window of
    /// its own congruence level. Level-0 points only pass when they project
    /// exactly onto the shift (and then as singular).
    pub fn accept_graded(&self, q: &LatticeVector) -> Result<Acceptance> {
        if q.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank.h(),
                got: q.rank().h(),
            });
        }
        let coords = q.integer_coords()?;
        Ok(self.accept_graded_coords(&coords))
    }

    fn to_local(&self, perp_point: &[f64]) -> Result<Vec<f64>> {
        if perp_point.len() != self.shift.len() {
            return Err(Error::RankMismatch {
                expected: self.shift.len(),
                got: perp_point.len(),
            });
        }
        Ok(perp_point
            .iter()
            .zip(&self.shift)
            .map(|(x, g)| x - g)
            .collect())
    }

    fn gauge_shifted(&self, d: &[f64]) -> Result<f64> {
        match &self.zono {
            Gauge::Interval { lo, hi } => Ok(interval_gauge(d[0], *lo, *hi)),
            Gauge::Polygon(pg) => Ok(pg.gauge([d[0], d[1]])),
            Gauge::Lp => self.gauge_lp(d, None),
            Gauge::Origin => unreachable!("the zonotope window is never degenerate"),
        }
    }

    fn gauge_level_shifted(&self, level: usize, d: &[f64]) -> Result<f64> {
        match &self.levels[level] {
            Gauge::Interval { lo, hi } => Ok(interval_gauge(d[0], *lo, *hi)),
            Gauge::Polygon(pg) => Ok(pg.gauge([d[0], d[1]])),
            Gauge::Lp => self.gauge_lp(d, Some(level)),
            Gauge::Origin => Err(Error::IndexOutOfRange {
                index: level,
                valid: "orbit levels with a full-dimensional window".into(),
            }),
        }
    }

    /// Gauge through the simplex solver. For the zonotope, minimize
    /// `lambda` with `sum_i g_i v_i - (lambda/2) sum_i g_i = d` and
    /// `0 <= v_i <= lambda`; for level `s`, with `sum_i g_i v_i = d`,
    /// `sum_i v_i = s lambda`, `0 <= v_i <= lambda`. The upper bounds are
    /// encoded by slacks `w_i = lambda - v_i`.
    fn gauge_lp(&self, d: &[f64], level: Option<usize>) -> Result<f64> {
        let h = self.rank.h();
        let p = self.shift.len();
        let vars = 2 * h + 1;
        let lam = 2 * h;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut b: Vec<f64> = Vec::new();
        for r in 0..p {
            let mut row = vec![0.0; vars];
            for (i, g) in self.gens.iter().enumerate() {
                row[i] = g[r];
            }
            if level.is_none() {
                let half: f64 = self.gens.iter().map(|g| g[r]).sum::<f64>() / 2.0;
                row[lam] = -half;
            }
            rows.push(row);
            b.push(d[r]);
        }
        if let Some(s) = level {
            let mut row = vec![0.0; vars];
            for i in 0..h {
                row[i] = 1.0;
            }
            row[lam] = -(s as f64);
            rows.push(row);
            b.push(0.0);
        }
        for i in 0..h {
            let mut row = vec![0.0; vars];
            row[i] = 1.0;
            row[h + i] = 1.0;
            row[lam] = -1.0;
            rows.push(row);
            b.push(0.0);
        }
        let mut cost = vec![0.0; vars];
        cost[lam] = 1.0;
        Ok(lp::solve_min(&rows, &b, &cost)?.objective)
    }

    fn classify(lambda: f64) -> Acceptance {
        if (lambda - 1.0).abs() <= WINDOW_EPS {
            Acceptance::Singular
        } else if lambda < 1.0 {
            Acceptance::Inside
        } else {
            Acceptance::Outside
        }
    }

    fn box_rejects(bx: &[(f64, f64)], d: &[f64]) -> bool {
        bx.iter().zip(d).any(|((lo, hi), x)| {
            *x > hi + 1e-6 * (1.0 + hi.abs()) || *x < lo - 1e-6 * (1.0 + lo.abs())
        })
    }

    pub(crate) fn accept_coords(&self, coords: &[i64]) -> Acceptance {
        let perp = perp_of(&self.frame, coords);
        let d: Vec<f64> = perp
            .iter()
            .zip(&self.shift)
            .map(|(x, g)| x - g)
            .collect();
        if Self::box_rejects(&self.zono_box, &d) {
            return Acceptance::Outside;
        }
        if norm(&d) > self.zono_circ * (1.0 + 2.0 * WINDOW_EPS) + 1e-12 {
            return Acceptance::Outside;
        }
        match self.gauge_shifted(&d) {
            Ok(lambda) => Self::classify(lambda),
            Err(_) => Acceptance::Outside,
        }
    }

    pub(crate) fn accept_graded_coords(&self, coords: &[i64]) -> Acceptance {
        let h = self.rank.h();
        let level = coords.iter().sum::<i64>().rem_euclid(h as i64) as usize;
        let perp = perp_of(&self.frame, coords);
        let d: Vec<f64> = perp
            .iter()
            .zip(&self.shift)
            .map(|(x, g)| x - g)
            .collect();
        if level == 0 {
            return if norm(&d) <= WINDOW_EPS {
                Acceptance::Singular
            } else {
                Acceptance::Outside
            };
        }
        if Self::box_rejects(&self.level_box[level], &d) {
            return Acceptance::Outside;
        }
        if norm(&d) > self.level_circ[level] * (1.0 + 2.0 * WINDOW_EPS) + 1e-12 {
            return Acceptance::Outside;
        }
        match self.gauge_level_shifted(level, &d) {
            Ok(lambda) => Self::classify(lambda),
            Err(_) => Acceptance::Outside,
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Perpendicular images of all proper subset sums of the generators
/// (the candidate vertex set of the window zonotope), for `p = 2`.
fn proper_subset_sums_2d(gens: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let h = gens.len();
    let mut out = Vec::with_capacity((1usize << h) - 2);
    for mask in 1..((1usize << h) - 1) {
        let mut x = 0.0;
        let mut y = 0.0;
        for (i, g) in gens.iter().enumerate() {
            if mask & (1 << i) != 0 {
                x += g[0];
                y += g[1];
            }
        }
        out.push([x, y]);
    }
    out
}

/// Sums over all `s`-element subsets of the generators, for `p = 2`.
fn orbit_sums_2d(gens: &[Vec<f64>], s: usize) -> Vec<[f64; 2]> {
    let h = gens.len();
    let mut out = Vec::new();
    for mask in 0usize..(1 << h) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let mut x = 0.0;
        let mut y = 0.0;
        for (i, g) in gens.iter().enumerate() {
            if mask & (1 << i) != 0 {
                x += g[0];
                y += g[1];
            }
        }
        out.push([x, y]);
    }
    out
}

/// One pass over all generator subsets, recording the farthest subset sum
/// per cardinality (the level circumradii) and the farthest half-difference
/// from the centered sum (the zonotope circumradius).
fn sweep_circumradii(gens: &[Vec<f64>], p: usize, h: usize) -> (f64, Vec<f64>) {
    let mut center = vec![0.0; p];
    for g in gens {
        for r in 0..p {
            center[r] += g[r] / 2.0;
        }
    }
    let mut level_best = vec![0.0_f64; h];
    let mut zono_best = 0.0_f64;
    let mut acc = vec![0.0; p];
    sweep_rec(
        gens,
        &center,
        0,
        0,
        &mut acc,
        &mut level_best,
        &mut zono_best,
    );
    (zono_best, level_best)
}

fn sweep_rec(
    gens: &[Vec<f64>],
    center: &[f64],
    idx: usize,
    size: usize,
    acc: &mut Vec<f64>,
    level_best: &mut [f64],
    zono_best: &mut f64,
) {
    if idx == gens.len() {
        if size < level_best.len() {
            let r = norm(acc);
            if r > level_best[size] {
                level_best[size] = r;
            }
        }
        let centered: f64 = acc
            .iter()
            .zip(center)
            .map(|(a, c)| (a - c) * (a - c))
            .sum::<f64>()
            .sqrt();
        if centered > *zono_best {
            *zono_best = centered;
        }
        return;
    }
    sweep_rec(gens, center, idx + 1, size, acc, level_best, zono_best);
    for r in 0..acc.len() {
        acc[r] += gens[idx][r];
    }
    sweep_rec(gens, center, idx + 1, size + 1, acc, level_best, zono_best);
    for r in 0..acc.len() {
        acc[r] -= gens[idx][r];
    }
}

// ---------------------------------------------------------------------------
// Raw-coordinate projections (hot paths avoid rational arithmetic).

fn par_of(frame: &CoxeterFrame, coords: &[i64]) -> PlanePoint {
    let rows = frame.par_rows();
    let mut x = 0.0;
    let mut y = 0.0;
    for (idx, &m) in coords.iter().enumerate() {
        if m != 0 {
            let mf = m as f64;
            x += mf * rows[0][idx];
            y += mf * rows[1][idx];
        }
    }
    PlanePoint::new(x, y)
}

fn perp_of(frame: &CoxeterFrame, coords: &[i64]) -> Vec<f64> {
    frame
        .perp_rows()
        .iter()
        .map(|row| {
            coords
                .iter()
                .enumerate()
                .filter(|(_, &m)| m != 0)
                .map(|(idx, &m)| m as f64 * row[idx])
                .sum()
        })
        .collect()
}

fn level_of(coords: &[i64], h: usize) -> i64 {
    coords.iter().sum::<i64>().rem_euclid(h as i64)
}

/// The de Bruijn grid index of a lattice point: its coordinate sum modulo
/// `h`. Accepted points of a generic-shift weight patch always carry a
/// nonzero index.
pub fn debruijn_index(q: &LatticeVector) -> Result<i64> {
    q.level()
}

/// Default window shift: a small irrational multiple per perpendicular
/// coordinate, chosen to keep lattice images clear of the window boundary.
pub fn default_shift(rank: LatticeRank) -> Vec<f64> {
    let p = rank.n().saturating_sub(2);
    (0..p)
        .map(|i| (i as f64 + 2.0) * 1e-4 * std::f64::consts::SQRT_2)
        .collect()
}

/// Cap the global worker pool used for candidate classification. `0` keeps
/// the automatic sizing. Takes effect once per process; a later call that
/// would change the cap reports an error.
pub fn configure_thread_cap(threads: usize) -> Result<()> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidInput(format!("worker pool already running: {e}")))
}

/// Enumeration box half-width: every candidate coordinate is clamped to
/// `|m_i| <= margin`. Conservative for all accepted points within the
/// patch radius; the robustness tests widen it and compare.
pub fn enumeration_margin(rank: LatticeRank, radius: f64) -> i64 {
    let s = (2.0 / rank.h() as f64).sqrt();
    (radius / s).ceil() as i64 + 2
}

/// All integer canonical coordinate vectors that can project into the
/// radius-`radius` disc while staying within reach of the window. The
/// result is a superset of the accepted in-radius points of either
/// lattice; `root_only` keeps the coordinate-sum multiples of `h`.
fn enumerate_coords(
    frame: &CoxeterFrame,
    radius: f64,
    perp_bound: f64,
    root_only: bool,
    margin: i64,
) -> Vec<Vec<i64>> {
    let n = frame.rank().n();
    let h = frame.rank().h();
    let p = frame.perp_rows().len();
    let par_bound = radius + 1e-6;

    // Weighted projection matrix: rows scaled so that acceptable points
    // satisfy |U m|^2 <= 1 per block, hence <= 2 overall (1 when there is
    // no perpendicular block).
    let mut u: Vec<Vec<f64>> = Vec::with_capacity(2 + p);
    for row in frame.par_rows() {
        u.push(row[..n].iter().map(|x| x / par_bound).collect());
    }
    for row in frame.perp_rows() {
        u.push(row[..n].iter().map(|x| x / perp_bound).collect());
    }
    let rho = if p > 0 { 2.0 } else { 1.0 } + 1e-9;

    // Gram matrix and its upper-triangular Cholesky factor.
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for row in &u {
                s += row[i] * row[j];
            }
            a[i][j] = s;
            a[j][i] = s;
        }
    }
    let mut chol = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut s = a[i][j];
            for k in 0..i {
                s -= chol[k][i] * chol[k][j];
            }
            if i == j {
                // The projection is injective on the free coordinates, so
                // the form is positive definite; the ridge only guards
                // against roundoff at extreme ranks.
                chol[i][i] = s.max(1e-12).sqrt();
            } else {
                chol[i][j] = s / chol[i][i];
            }
        }
    }

    let mut out = Vec::new();
    let mut m = vec![0i64; n];
    enumerate_rec(&chol, margin, rho, n - 1, &mut m, root_only, h, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    chol: &[Vec<f64>],
    margin: i64,
    rem: f64,
    i: usize,
    m: &mut Vec<i64>,
    root_only: bool,
    h: usize,
    out: &mut Vec<Vec<i64>>,
) {
    let rii = chol[i][i];
    let off: f64 = (i + 1..m.len()).map(|j| chol[i][j] * m[j] as f64).sum();
    let w = rem.max(0.0).sqrt() / rii;
    let c = -off / rii;
    let lo = ((c - w - 1e-9).ceil() as i64).max(-margin);
    let hi = ((c + w + 1e-9).floor() as i64).min(margin);
    for v in lo..=hi {
        m[i] = v;
        let t = rii * v as f64 + off;
        let rem2 = rem - t * t;
        if rem2 < -1e-9 {
            continue;
        }
        if i == 0 {
            if !root_only || m.iter().sum::<i64>().rem_euclid(h as i64) == 0 {
                let mut coords = m.clone();
                coords.push(0);
                out.push(coords);
            }
        } else {
            enumerate_rec(chol, margin, rem2, i - 1, m, root_only, h, out);
        }
    }
    m[i] = 0;
}

/// The enumeration stage on its own: candidate canonical coordinates for a
/// patch of the given radius and shift. Exposed for robustness tests.
pub fn candidate_coords(
    rank: LatticeRank,
    lattice: LatticeKind,
    radius: f64,
    shift: &[f64],
) -> Result<Vec<Vec<i64>>> {
    let window = Window::new(rank, shift)?;
    let margin = enumeration_margin(rank, radius);
    let perp_bound = window.circumradius() + norm(shift) + 1e-3;
    Ok(enumerate_coords(
        &window.frame,
        radius,
        perp_bound,
        lattice == LatticeKind::Root,
        margin,
    ))
}

// ---------------------------------------------------------------------------
// Patches.

/// A lattice point accepted into a patch.
#[derive(Debug, Clone)]
pub struct AcceptedPoint {
    /// Canonical integer coordinates (length `h`, last entry zero).
    pub coords: Vec<i64>,
    /// Coxeter-plane position.
    pub position: PlanePoint,
    /// Congruence level of the coordinate sum (the de Bruijn index for
    /// weight patches; zero for root points).
    pub index: i64,
    /// Whether the accepted point sat on the window boundary.
    pub on_boundary: bool,
}

/// One projected tile of a patch.
#[derive(Debug, Clone)]
pub struct PlacedTile {
    /// Prototile class label, `rhombus-{m}` or `triangle-{a}-{b}-{c}`.
    pub label: String,
    /// Vertices in counterclockwise order.
    pub vertices: Vec<PlanePoint>,
    /// Anchor canonical coordinates followed by the combinatorial tag:
    /// `[i, j]` for the rhombus on `k_i, k_j`, or `[family, common, a, b]`
    /// for a Delone triangle (family 0 = up, 1 = down).
    pub source: Vec<i64>,
}

/// What kind of tiles a patch carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchKind {
    Rhombic,
    Triangular,
}

/// A generated cut-and-project patch.
#[derive(Debug, Clone)]
pub struct Patch {
    pub rank: LatticeRank,
    pub lattice: LatticeKind,
    pub kind: PatchKind,
    pub radius: f64,
    pub shift: Vec<f64>,
    pub tiles: Vec<PlacedTile>,
    pub points: Vec<AcceptedPoint>,
    pub boundary_mode: BoundaryMode,
    /// In-radius candidates that landed on the window boundary.
    pub singular_count: usize,
    /// Present when the patch is empty or otherwise degenerate, explaining
    /// why in terms of the candidate counts.
    pub diagnostic: Option<String>,
}

impl Patch {
    /// Distinct tile labels, sorted.
    pub fn class_labels(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.tiles.iter().map(|t| t.label.as_str()).collect();
        set.into_iter().map(str::to_owned).collect()
    }
}

fn is_zero_shift(shift: &[f64]) -> bool {
    shift.iter().all(|g| *g == 0.0)
}

fn corner_ok(acc: Acceptance, mode: BoundaryMode) -> bool {
    match acc {
        Acceptance::Inside => true,
        Acceptance::Singular => mode == BoundaryMode::Closed,
        Acceptance::Outside => false,
    }
}

fn add_coords(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Canonical integer coordinates of `k_j`.
fn k_offset(rank: LatticeRank, j: usize) -> Vec<i64> {
    let h = rank.h();
    let mut off = vec![0i64; h];
    if j < h {
        off[j - 1] = 1;
    } else {
        for slot in off.iter_mut().take(h - 1) {
            *slot = -1;
        }
    }
    off
}

type ClassMap = HashMap<Vec<i64>, (PlanePoint, Acceptance)>;

fn classify_batch(
    window: &Window,
    graded: bool,
    coords: Vec<Vec<i64>>,
) -> Vec<(Vec<i64>, PlanePoint, Acceptance)> {
    coords
        .into_par_iter()
        .map(|c| {
            let par = par_of(&window.frame, &c);
            let acc = if graded {
                window.accept_graded_coords(&c)
            } else {
                window.accept_coords(&c)
            };
            (c, par, acc)
        })
        .collect()
}

/// Generate a rhombic patch: accepted lattice points within the radius,
/// and, over the weight lattice, every rhombus `(q; i, j)` whose four
/// corners `q`, `q + k_i`, `q + k_j`, `q + k_i + k_j` are all accepted,
/// anchored at an in-radius point. Root-lattice patches carry points only,
/// since a rhombus corner always steps off the root lattice.
pub fn generate_rhombic_patch(
    rank: LatticeRank,
    lattice: LatticeKind,
    radius: f64,
    shift: &[f64],
) -> Result<Patch> {
    generate_rhombic_patch_bounded(rank, lattice, radius, shift, enumeration_margin(rank, radius))
}

/// Same as [`generate_rhombic_patch`] with an explicit enumeration margin,
/// so robustness tests can verify the default margin loses nothing.
pub fn generate_rhombic_patch_bounded(
    rank: LatticeRank,
    lattice: LatticeKind,
    radius: f64,
    shift: &[f64],
    margin: i64,
) -> Result<Patch> {
    if rank.n() < 3 {
        return Err(Error::UnsupportedRank {
            n: rank.n(),
            reason: "rhombic patches need a perpendicular space, so n >= 3".into(),
        });
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidInput("patch radius must be positive".into()));
    }
    if margin < 0 {
        return Err(Error::InvalidInput(
            "enumeration margin must be nonnegative".into(),
        ));
    }
    let window = Window::new(rank, shift)?;
    let mode = if is_zero_shift(shift) {
        BoundaryMode::Closed
    } else {
        BoundaryMode::Excluded
    };
    let graded = lattice == LatticeKind::Weight;
    let h = rank.h();

    let perp_bound = window.circumradius() + norm(shift) + 1e-3;
    let cands = enumerate_coords(
        &window.frame,
        radius,
        perp_bound,
        lattice == LatticeKind::Root,
        margin,
    );
    let candidate_count = cands.len();
    let classified = classify_batch(&window, graded, cands);

    let mut memo: ClassMap = HashMap::with_capacity(classified.len() * 2);
    let mut anchors: Vec<(Vec<i64>, PlanePoint)> = Vec::new();
    let mut singular_count = 0usize;
    let mut accepted_any_radius = 0usize;
    for (coords, par, acc) in &classified {
        if matches!(acc, Acceptance::Inside | Acceptance::Singular) {
            accepted_any_radius += 1;
        }
        let in_radius = par.norm() <= radius + RADIUS_EPS;
        if in_radius && *acc == Acceptance::Singular {
            singular_count += 1;
        }
        if in_radius && corner_ok(*acc, mode) {
            anchors.push((coords.clone(), *par));
        }
        memo.insert(coords.clone(), (*par, *acc));
    }
    anchors.sort_by(|a, b| a.0.cmp(&b.0));

    let points = collect_points(&anchors, &memo, h);

    let mut tiles = Vec::new();
    let mut diagnostic: Option<String> = None;
    match lattice {
        LatticeKind::Root => {
            diagnostic = Some(format!(
                "root-lattice rhombic patch carries points only: a rhombus corner q + k_i \
                 has congruence level 1 and leaves the root lattice ({} accepted points, \
                 {candidate_count} candidates)",
                points.len()
            ));
        }
        LatticeKind::Weight => {
            let mut pairs = Vec::new();
            for i in 1..=h {
                for j in (i + 1)..=h {
                    if let RhombusClassification::Proper(class) = catalog::classify_rhombus(rank, i, j)? {
                        pairs.push((i, j, format!("rhombus-{}", class.m())));
                    }
                }
            }
            let offsets: Vec<Vec<i64>> = (1..=h).map(|j| k_offset(rank, j)).collect();

            // Classify every corner the emission loop will look at, in one
            // parallel batch.
            let mut need: BTreeSet<Vec<i64>> = BTreeSet::new();
            for (coords, _) in &anchors {
                for (i, j, _) in &pairs {
                    let ci = add_coords(coords, &offsets[i - 1]);
                    let cij = add_coords(&ci, &offsets[j - 1]);
                    let cj = add_coords(coords, &offsets[j - 1]);
                    for c in [ci, cij, cj] {
                        if !memo.contains_key(&c) {
                            need.insert(c);
                        }
                    }
                }
            }
            let extra = classify_batch(&window, graded, need.into_iter().collect());
            for (coords, par, acc) in extra {
                memo.insert(coords, (par, acc));
            }

            let mut dedup: BTreeMap<(String, Vec<(i64, i64)>), PlacedTile> = BTreeMap::new();
            for (coords, par) in &anchors {
                for (i, j, label) in &pairs {
                    let ci = add_coords(coords, &offsets[i - 1]);
                    let cij = add_coords(&ci, &offsets[j - 1]);
                    let cj = add_coords(coords, &offsets[j - 1]);
                    let ok = [&ci, &cij, &cj]
                        .into_iter()
                        .all(|c| corner_ok(memo[c].1, mode));
                    if !ok {
                        continue;
                    }
                    let quad = [*par, memo[&ci].0, memo[&cij].0, memo[&cj].0];
                    let vertices = ccw_quad(quad);
                    let key_verts = sorted_quant(&vertices, DEDUP_GRID);
                    let key = (label.clone(), key_verts);
                    dedup.entry(key).or_insert_with(|| {
                        let mut source = coords.clone();
                        source.push(*i as i64);
                        source.push(*j as i64);
                        PlacedTile {
                            label: label.clone(),
                            vertices: vertices.to_vec(),
                            source,
                        }
                    });
                }
            }
            tiles = dedup.into_values().collect();
            if points.is_empty() {
                diagnostic = Some(format!(
                    "no accepted points within radius {radius}: {candidate_count} candidates \
                     enumerated, {accepted_any_radius} accepted by the window at any radius"
                ));
            } else if tiles.is_empty() {
                diagnostic = Some(format!(
                    "no rhombus had all four corners accepted ({} accepted points, \
                     {candidate_count} candidates)",
                    points.len()
                ));
            } else if mode == BoundaryMode::Closed && singular_count > 0 {
                diagnostic = Some(format!(
                    "symmetric shift: {singular_count} boundary points counted as accepted"
                ));
            }
        }
    }
    if points.is_empty() && diagnostic.is_none() {
        diagnostic = Some(format!(
            "no accepted points within radius {radius}: {candidate_count} candidates \
             enumerated, {accepted_any_radius} accepted by the window at any radius"
        ));
    }

    Ok(Patch {
        rank,
        lattice,
        kind: PatchKind::Rhombic,
        radius,
        shift: shift.to_vec(),
        tiles,
        points,
        boundary_mode: mode,
        singular_count,
        diagnostic,
    })
}

/// Deduplicate accepted anchors into the projected point list.
fn collect_points(
    anchors: &[(Vec<i64>, PlanePoint)],
    memo: &ClassMap,
    h: usize,
) -> Vec<AcceptedPoint> {
    let mut seen: BTreeMap<(i64, i64), AcceptedPoint> = BTreeMap::new();
    for (coords, par) in anchors {
        let key = quantize_point(par, DEDUP_GRID);
        seen.entry(key).or_insert_with(|| AcceptedPoint {
            coords: coords.clone(),
            position: *par,
            index: level_of(coords, h),
            on_boundary: memo[coords].1 == Acceptance::Singular,
        });
    }
    seen.into_values().collect()
}

/// Counterclockwise orientation for the cyclic quad `[q, q+ki, q+ki+kj, q+kj]`.
fn ccw_quad(quad: [PlanePoint; 4]) -> [PlanePoint; 4] {
    let cross = (quad[1] - quad[0]).cross(&(quad[3] - quad[0]));
    if cross >= 0.0 {
        quad
    } else {
        [quad[0], quad[3], quad[2], quad[1]]
    }
}

fn sorted_quant(verts: &[PlanePoint], grid: f64) -> Vec<(i64, i64)> {
    let mut q: Vec<(i64, i64)> = verts.iter().map(|v| quantize_point(v, grid)).collect();
    q.sort_unstable();
    q
}

/// Generate a triangular patch over the root lattice: every Delone 2-face
/// all three of whose vertices are accepted, anchored at an in-radius
/// vertex, and whose dual Voronoi face meets the cut (so the emitted
/// triangles select one diagonal per rhombus of accepted points and tile
/// without overlap at a generic shift). For `n = 2` the perpendicular
/// space is trivial and the full triangular tiling within the radius is
/// returned.
pub fn generate_triangular_patch(rank: LatticeRank, radius: f64, shift: &[f64]) -> Result<Patch> {
    let n = rank.n();
    if n < 2 {
        return Err(Error::UnsupportedRank {
            n,
            reason: "triangular patches need n >= 2".into(),
        });
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidInput("patch radius must be positive".into()));
    }
    let h = rank.h();
    let frame = CoxeterFrame::new(rank)?;
    let margin = enumeration_margin(rank, radius);

    if n == 2 {
        if !shift.is_empty() {
            return Err(Error::RankMismatch {
                expected: 0,
                got: shift.len(),
            });
        }
        return triangular_rank_two(rank, frame, radius, margin);
    }

    let window = Window::new(rank, shift)?;
    let mode = if is_zero_shift(shift) {
        BoundaryMode::Closed
    } else {
        BoundaryMode::Excluded
    };
    let perp_bound = window.circumradius() + norm(shift) + 1e-3;
    let cands = enumerate_coords(&window.frame, radius, perp_bound, true, margin);
    let candidate_count = cands.len();
    let classified = classify_batch(&window, false, cands);

    let mut memo: ClassMap = HashMap::with_capacity(classified.len() * 2);
    let mut anchors: Vec<(Vec<i64>, PlanePoint)> = Vec::new();
    let mut singular_count = 0usize;
    for (coords, par, acc) in &classified {
        let in_radius = par.norm() <= radius + RADIUS_EPS;
        if in_radius && *acc == Acceptance::Singular {
            singular_count += 1;
        }
        if in_radius && corner_ok(*acc, mode) {
            anchors.push((coords.clone(), *par));
        }
        memo.insert(coords.clone(), (*par, *acc));
    }
    anchors.sort_by(|a, b| a.0.cmp(&b.0));
    let points = collect_points(&anchors, &memo, h);

    let mut dedup: BTreeMap<(String, Vec<(i64, i64)>), PlacedTile> = BTreeMap::new();
    let mut corner_cache: ClassMap = HashMap::new();
    for (coords, _par) in &anchors {
        let anchor_vec = LatticeVector::from_integer_coords(rank, Basis::K, coords)?;
        let anchor_perp = perp_of(&window.frame, coords);
        for face in cells::delone_two_faces_at(&anchor_vec)? {
            let mut corner_coords = Vec::with_capacity(3);
            let mut corner_pars = Vec::with_capacity(3);
            let mut all_ok = true;
            for v in face.vertices() {
                let c = v.integer_coords()?;
                let entry = memo.get(&c).copied().or_else(|| corner_cache.get(&c).copied());
                let (par, acc) = match entry {
                    Some(e) => e,
                    None => {
                        let par = par_of(&window.frame, &c);
                        let acc = window.accept_coords(&c);
                        corner_cache.insert(c.clone(), (par, acc));
                        (par, acc)
                    }
                };
                if !corner_ok(acc, mode) {
                    all_ok = false;
                    break;
                }
                corner_coords.push(c);
                corner_pars.push(par);
            }
            if !all_ok {
                continue;
            }
            if !dual_face_admits(&window, &face, &anchor_perp) {
                continue;
            }
            let (a, b) = face.pair;
            let class = catalog::classify_triangle(rank, face.common, a, b)?;
            let (p1, p2, p3) = class.parts();
            let label = format!("triangle-{p1}-{p2}-{p3}");
            let vertices = ccw_triangle([corner_pars[0], corner_pars[1], corner_pars[2]]);
            let key = (label.clone(), sorted_quant(&vertices, DEDUP_GRID));
            dedup.entry(key).or_insert_with(|| {
                let mut source = coords.clone();
                source.push(match face.family {
                    TriangleFamily::Up => 0,
                    TriangleFamily::Down => 1,
                });
                source.push(face.common as i64);
                source.push(a as i64);
                source.push(b as i64);
                PlacedTile {
                    label,
                    vertices: vertices.to_vec(),
                    source,
                }
            });
        }
    }
    let tiles: Vec<PlacedTile> = dedup.into_values().collect();

    let diagnostic = if points.is_empty() {
        Some(format!(
            "no accepted root points within radius {radius}: {candidate_count} candidates"
        ))
    } else if tiles.is_empty() {
        Some(format!(
            "no Delone triangle had all vertices accepted and its dual face on the cut \
             ({} accepted points)",
            points.len()
        ))
    } else if mode == BoundaryMode::Closed && singular_count > 0 {
        Some(format!(
            "symmetric shift: {singular_count} boundary points counted as accepted; \
             triangle selection may keep both diagonals of a cell on the cut"
        ))
    } else {
        None
    };

    Ok(Patch {
        rank,
        lattice: LatticeKind::Root,
        kind: PatchKind::Triangular,
        radius,
        shift: shift.to_vec(),
        tiles,
        points,
        boundary_mode: mode,
        singular_count,
        diagnostic,
    })
}

fn ccw_triangle(tri: [PlanePoint; 3]) -> [PlanePoint; 3] {
    let cross = (tri[1] - tri[0]).cross(&(tri[2] - tri[0]));
    if cross >= 0.0 {
        tri
    } else {
        [tri[0], tri[2], tri[1]]
    }
}

/// Membership of the shifted cut in the dual Voronoi face of a Delone
/// triangle. The dual face is the hull of the common Voronoi vertices of
/// the three corners; its vertices project to sums over the subsets that
/// contain the common index and miss the pair (up family) or contain the
/// pair and miss the common index (down family).
fn dual_face_admits(window: &Window, face: &cells::DeloneFace, anchor_perp: &[f64]) -> bool {
    let p = window.shift().len();
    let d: Vec<f64> = window
        .shift()
        .iter()
        .zip(anchor_perp)
        .map(|(g, x)| g - x)
        .collect();
    let h = window.rank().h();
    let (a, b) = face.pair;
    let fixed: Vec<usize> = match face.family {
        TriangleFamily::Up => vec![face.common],
        TriangleFamily::Down => vec![a, b],
    };
    let free: Vec<usize> = (1..=h)
        .filter(|i| *i != face.common && *i != a && *i != b)
        .collect();
    let mut base = vec![0.0; p];
    for i in &fixed {
        for r in 0..p {
            base[r] += window.generators()[i - 1][r];
        }
    }
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(1 << free.len());
    for mask in 0usize..(1 << free.len()) {
        let mut w = base.clone();
        for (bit, i) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                for r in 0..p {
                    w[r] += window.generators()[i - 1][r];
                }
            }
        }
        pts.push(w);
    }
    match p {
        1 => {
            let lo = pts.iter().map(|w| w[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|w| w[0]).fold(f64::NEG_INFINITY, f64::max);
            d[0] >= lo - WINDOW_EPS && d[0] <= hi + WINDOW_EPS
        }
        2 => {
            let flat: Vec<[f64; 2]> = pts.iter().map(|w| [w[0], w[1]]).collect();
            point_in_hull_2d(&flat, [d[0], d[1]], WINDOW_EPS)
        }
        _ => {
            // Convex-combination feasibility: columns are the candidate
            // vertices, constrained to sum to the target with weights
            // summing to one.
            let k = pts.len();
            let mut rows: Vec<Vec<f64>> = Vec::with_capacity(p + 1);
            for r in 0..p {
                rows.push(pts.iter().map(|w| w[r]).collect());
            }
            rows.push(vec![1.0; k]);
            let mut rhs = d.clone();
            rhs.push(1.0);
            matches!(lp::feasibility_defect(&rows, &rhs, k), Ok(defect) if defect <= 1e-7)
        }
    }
}

/// The `n = 2` triangular patch: no window, every root point within the
/// radius is accepted and every Delone face at those anchors is emitted.
fn triangular_rank_two(
    rank: LatticeRank,
    frame: CoxeterFrame,
    radius: f64,
    margin: i64,
) -> Result<Patch> {
    let h = rank.h();
    let cands = enumerate_coords(&frame, radius, 1.0, true, margin);
    let mut anchors: Vec<(Vec<i64>, PlanePoint)> = cands
        .into_iter()
        .filter_map(|c| {
            let par = par_of(&frame, &c);
            (par.norm() <= radius + RADIUS_EPS).then_some((c, par))
        })
        .collect();
    anchors.sort_by(|a, b| a.0.cmp(&b.0));

    let mut points = Vec::new();
    let mut seen = BTreeSet::new();
    for (coords, par) in &anchors {
        if seen.insert(quantize_point(par, DEDUP_GRID)) {
            points.push(AcceptedPoint {
                coords: coords.clone(),
                position: *par,
                index: level_of(coords, h),
                on_boundary: false,
            });
        }
    }

    let mut dedup: BTreeMap<(String, Vec<(i64, i64)>), PlacedTile> = BTreeMap::new();
    for (coords, _) in &anchors {
        let anchor_vec = LatticeVector::from_integer_coords(rank, Basis::K, coords)?;
        for face in cells::delone_two_faces_at(&anchor_vec)? {
            let mut pars = Vec::with_capacity(3);
            for v in face.vertices() {
                pars.push(par_of(&frame, &v.integer_coords()?));
            }
            let (a, b) = face.pair;
            let class = catalog::classify_triangle(rank, face.common, a, b)?;
            let (p1, p2, p3) = class.parts();
            let label = format!("triangle-{p1}-{p2}-{p3}");
            let vertices = ccw_triangle([pars[0], pars[1], pars[2]]);
            let key = (label.clone(), sorted_quant(&vertices, DEDUP_GRID));
            dedup.entry(key).or_insert_with(|| {
                let mut source = coords.clone();
                source.push(match face.family {
                    TriangleFamily::Up => 0,
                    TriangleFamily::Down => 1,
                });
                source.push(face.common as i64);
                source.push(a as i64);
                source.push(b as i64);
                PlacedTile {
                    label,
                    vertices: vertices.to_vec(),
                    source,
                }
            });
        }
    }
    let tiles: Vec<PlacedTile> = dedup.into_values().collect();
    let diagnostic = points
        .is_empty()
        .then(|| format!("no root points within radius {radius}"));

    Ok(Patch {
        rank,
        lattice: LatticeKind::Root,
        kind: PatchKind::Triangular,
        radius,
        shift: Vec::new(),
        tiles,
        points,
        boundary_mode: BoundaryMode::Excluded,
        singular_count: 0,
        diagnostic,
    })
}

// ---------------------------------------------------------------------------
// Symmetry report.

fn divisors_descending(m: usize) -> Vec<usize> {
    let mut d: Vec<usize> = (1..=m).filter(|k| m % k == 0).collect();
    d.reverse();
    d
}

/// Largest divisor `d` of `2h` such that rotation by `2 pi / d` about the
/// origin maps the tile multiset onto itself within 1e-6. Meaningful for
/// zero-shift patches, whose acceptance is symmetric; requires at least
/// one tile.
pub fn patch_symmetry_report(patch: &Patch) -> Result<usize> {
    if patch.tiles.is_empty() {
        return Err(Error::InvalidInput(
            "symmetry report requires a patch with at least one tile".into(),
        ));
    }
    let signature = |angle: f64| -> BTreeMap<(&str, Vec<(i64, i64)>), usize> {
        let mut sig = BTreeMap::new();
        for tile in &patch.tiles {
            let mut verts: Vec<(i64, i64)> = tile
                .vertices
                .iter()
                .map(|v| quantize_point(&v.rotate(angle), SYMMETRY_GRID))
                .collect();
            verts.sort_unstable();
            *sig.entry((tile.label.as_str(), verts)).or_insert(0) += 1;
        }
        sig
    };
    let base = signature(0.0);
    let two_h = 2 * patch.rank.h();
    for d in divisors_descending(two_h) {
        let angle = 2.0 * std::f64::consts::PI / d as f64;
        if signature(angle) == base {
            return Ok(d);
        }
    }
    Ok(1)
}

// ---------------------------------------------------------------------------
// Patch validity.

impl Patch {
    /// Check the tiling conditions pairwise: no interior overlap, and any
    /// contact is either a single shared vertex or one full shared edge
    /// (within 1e-9). Tiles must be counterclockwise and nondegenerate.
    pub fn validate(&self) -> Result<()> {
        let tiles = &self.tiles;
        let mut areas = Vec::with_capacity(tiles.len());
        for (idx, t) in tiles.iter().enumerate() {
            let area = polygon_area(&t.vertices);
            if area <= 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "tile {idx} ({}) is degenerate or clockwise (area {area})",
                    t.label
                )));
            }
            areas.push(area);
        }
        if tiles.len() < 2 {
            return Ok(());
        }

        // Spatial hash on bounding boxes; cell size covers any tile.
        let mut cell = 0.0_f64;
        let mut boxes = Vec::with_capacity(tiles.len());
        for t in tiles {
            let (lo, hi) = bbox(&t.vertices);
            cell = cell.max(hi.0 - lo.0).max(hi.1 - lo.1);
            boxes.push((lo, hi));
        }
        cell += 1e-9;
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (idx, (lo, hi)) in boxes.iter().enumerate() {
            let cx0 = (lo.0 / cell).floor() as i64;
            let cx1 = (hi.0 / cell).floor() as i64;
            let cy0 = (lo.1 / cell).floor() as i64;
            let cy1 = (hi.1 / cell).floor() as i64;
            for cx in cx0..=cx1 {
                for cy in cy0..=cy1 {
                    grid.entry((cx, cy)).or_default().push(idx);
                }
            }
        }
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for bucket in grid.values() {
            for (i, &a) in bucket.iter().enumerate() {
                for &b in &bucket[i + 1..] {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
        }
        for (a, b) in pairs {
            check_tile_pair(a, b, &tiles[a], &tiles[b], areas[a], areas[b], &boxes[a], &boxes[b])?;
        }
        Ok(())
    }
}

type BBox = ((f64, f64), (f64, f64));

fn bbox(verts: &[PlanePoint]) -> BBox {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in verts {
        lo.0 = lo.0.min(v.x);
        lo.1 = lo.1.min(v.y);
        hi.0 = hi.0.max(v.x);
        hi.1 = hi.1.max(v.y);
    }
    (lo, hi)
}

#[allow(clippy::too_many_arguments)]
fn check_tile_pair(
    ia: usize,
    ib: usize,
    ta: &PlacedTile,
    tb: &PlacedTile,
    area_a: f64,
    area_b: f64,
    ba: &BBox,
    bb: &BBox,
) -> Result<()> {
    if ba.1 .0 < bb.0 .0 - 1e-9
        || bb.1 .0 < ba.0 .0 - 1e-9
        || ba.1 .1 < bb.0 .1 - 1e-9
        || bb.1 .1 < ba.0 .1 - 1e-9
    {
        return Ok(());
    }
    let inter = clip_convex(&ta.vertices, &tb.vertices);
    let overlap = polygon_area(&inter).abs();
    if overlap > 1e-9 * area_a.min(area_b) {
        return Err(Error::InvalidInput(format!(
            "tiles {ia} and {ib} overlap with area {overlap:.3e}"
        )));
    }
    // Shared vertices at the dedup grid.
    let qa: Vec<(i64, i64)> = ta
        .vertices
        .iter()
        .map(|v| quantize_point(v, DEDUP_GRID))
        .collect();
    let qb: Vec<(i64, i64)> = tb
        .vertices
        .iter()
        .map(|v| quantize_point(v, DEDUP_GRID))
        .collect();
    let mut shared: Vec<(usize, usize)> = Vec::new();
    for (i, a) in qa.iter().enumerate() {
        for (j, b) in qb.iter().enumerate() {
            if a == b {
                shared.push((i, j));
            }
        }
    }
    match shared.len() {
        0 | 1 => {}
        2 => {
            let adj = |i: usize, j: usize, len: usize| (i + 1) % len == j || (j + 1) % len == i;
            let ok_a = adj(shared[0].0, shared[1].0, qa.len());
            let ok_b = adj(shared[0].1, shared[1].1, qb.len());
            if !(ok_a && ok_b) {
                return Err(Error::InvalidInput(format!(
                    "tiles {ia} and {ib} share two vertices without a common edge"
                )));
            }
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "tiles {ia} and {ib} share {} vertices",
                shared.len()
            )));
        }
    }
    // A vertex of one tile inside an edge of the other makes a T-junction.
    for (verts, other, label) in [(&ta.vertices, &tb.vertices, ia), (&tb.vertices, &ta.vertices, ib)]
    {
        for v in verts.iter() {
            let near_vertex = other.iter().any(|o| v.dist(o) <= DEDUP_GRID);
            if near_vertex {
                continue;
            }
            for e in 0..other.len() {
                let p0 = other[e];
                let p1 = other[(e + 1) % other.len()];
                if segment_distance(*v, p0, p1) <= 1e-9 {
                    return Err(Error::InvalidInput(format!(
                        "tile {label} has a vertex inside another tile's edge (T junction)"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Signed area, positive for counterclockwise polygons.
fn polygon_area(verts: &[PlanePoint]) -> f64 {
    let k = verts.len();
    if k < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..k {
        let a = verts[i];
        let b = verts[(i + 1) % k];
        twice += a.x * b.y - b.x * a.y;
    }
    twice / 2.0
}

/// Sutherland-Hodgman clip of a convex subject by a counterclockwise
/// convex clipper.
fn clip_convex(subject: &[PlanePoint], clipper: &[PlanePoint]) -> Vec<PlanePoint> {
    let mut poly: Vec<PlanePoint> = subject.to_vec();
    for e in 0..clipper.len() {
        if poly.is_empty() {
            break;
        }
        let a = clipper[e];
        let b = clipper[(e + 1) % clipper.len()];
        let inside = |p: &PlanePoint| (b - a).cross(&(*p - a)) >= 0.0;
        let mut next: Vec<PlanePoint> = Vec::with_capacity(poly.len() + 2);
        for i in 0..poly.len() {
            let cur = poly[i];
            let prev = poly[(i + poly.len() - 1) % poly.len()];
            let cur_in = inside(&cur);
            let prev_in = inside(&prev);
            if cur_in != prev_in {
                if let Some(x) = line_intersect(prev, cur, a, b) {
                    next.push(x);
                }
            }
            if cur_in {
                next.push(cur);
            }
        }
        poly = next;
    }
    poly
}

fn line_intersect(p0: PlanePoint, p1: PlanePoint, a: PlanePoint, b: PlanePoint) -> Option<PlanePoint> {
    let r = p1 - p0;
    let s = b - a;
    let denom = r.cross(&s);
    if denom.abs() < 1e-18 {
        return None;
    }
    let t = (a - p0).cross(&s) / denom;
    Some(PlanePoint::new(p0.x + t * r.x, p0.y + t * r.y))
}

fn segment_distance(p: PlanePoint, a: PlanePoint, b: PlanePoint) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.dist(&a);
    }
    let t = ((p - a).dot(&ab) / len_sq).clamp(0.0, 1.0);
    let proj = PlanePoint::new(a.x + t * ab.x, a.y + t * ab.y);
    p.dist(&proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeRank;

    fn rank(n: usize) -> LatticeRank {
        LatticeRank::new(n).unwrap()
    }

    fn k_vec(r: LatticeRank, j: usize) -> LatticeVector {
        LatticeVector::basis_vector(r, Basis::K, j).unwrap()
    }

    #[test]
    fn window_intervals_for_rank_three_are_exact() {
        let w = build_window(rank(3), &[0.0]).unwrap();
        assert!((w.circumradius() - 1.0).abs() < 1e-12);
        assert!((w.level_circumradius(1).unwrap() - 0.5).abs() < 1e-12);
        assert!((w.level_circumradius(2).unwrap() - 1.0).abs() < 1e-12);
        assert!((w.gauge_level(1, &[0.5]).unwrap() - 1.0).abs() < 1e-12);
        assert!((w.gauge_level(2, &[-1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((w.gauge(&[0.5]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn window_polygons_for_rank_four_match_known_radii() {
        let w = build_window(rank(4), &[0.0, 0.0]).unwrap();
        let s = (2.0_f64 / 5.0).sqrt();
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((w.level_circumradius(1).unwrap() - s).abs() < 1e-9);
        assert!((w.level_circumradius(2).unwrap() - s * phi).abs() < 1e-9);
        assert!((w.circumradius() - s * phi).abs() < 1e-9);
        let verts = w.zonotope_vertices().unwrap();
        assert_eq!(verts.len(), 10);
    }

    #[test]
    fn closed_form_gauges_match_linear_program() {
        let w4 = build_window(rank(4), &[0.0, 0.0]).unwrap();
        for i in -6..=6 {
            for j in -6..=6 {
                let d = [i as f64 * 0.2, j as f64 * 0.2];
                let fast = w4.gauge(&d).unwrap();
                let lp = w4.gauge_lp_reference(&d, None).unwrap();
                assert!((fast - lp).abs() < 1e-7, "flat gauge {d:?}: {fast} vs {lp}");
                for s in 1..5 {
                    let fast = w4.gauge_level(s, &d).unwrap();
                    let lp = w4.gauge_lp_reference(&d, Some(s)).unwrap();
                    assert!((fast - lp).abs() < 1e-7, "level {s} gauge {d:?}: {fast} vs {lp}");
                }
            }
        }
        let w3 = build_window(rank(3), &[0.0]).unwrap();
        for i in -12..=12 {
            let d = [i as f64 * 0.15];
            let fast = w3.gauge(&d).unwrap();
            let lp = w3.gauge_lp_reference(&d, None).unwrap();
            assert!((fast - lp).abs() < 1e-7);
        }
    }

    #[test]
    fn acceptance_examples() {
        let r4 = rank(4);
        let generic = Window::new(r4, &default_shift(r4)).unwrap();
        assert_eq!(generic.accept(&k_vec(r4, 1)).unwrap(), Acceptance::Inside);

        let far =
            LatticeVector::from_integer_coords(r4, Basis::K, &[3, 0, 0, 0, 0]).unwrap();
        assert_eq!(generic.accept(&far).unwrap(), Acceptance::Outside);

        let symmetric = Window::new(r4, &[0.0, 0.0]).unwrap();
        let origin = LatticeVector::zero(r4);
        assert_eq!(symmetric.accept(&origin).unwrap(), Acceptance::Inside);
    }

    #[test]
    fn graded_acceptance_rejects_level_zero_at_generic_shift() {
        let r4 = rank(4);
        let w = Window::new(r4, &default_shift(r4)).unwrap();
        let root = &k_vec(r4, 1) - &k_vec(r4, 3);
        assert_eq!(w.accept(&root).unwrap(), Acceptance::Inside);
        assert_eq!(w.accept_graded(&root).unwrap(), Acceptance::Outside);
    }

    #[test]
    fn debruijn_indices_follow_coordinate_sums() {
        let r4 = rank(4);
        assert_eq!(debruijn_index(&k_vec(r4, 1)).unwrap(), 1);
        let two = &k_vec(r4, 1) + &k_vec(r4, 2);
        assert_eq!(debruijn_index(&two).unwrap(), 2);
        let root = &k_vec(r4, 1) - &k_vec(r4, 3);
        assert_eq!(debruijn_index(&root).unwrap(), 0);
        let neg = -&k_vec(r4, 1);
        assert_eq!(debruijn_index(&neg).unwrap(), 4);
    }

    #[test]
    fn enumerator_covers_box_oracle_rank_three() {
        let r3 = rank(3);
        let shift = default_shift(r3);
        let w = Window::new(r3, &shift).unwrap();
        let radius = 2.5;
        let margin = enumeration_margin(r3, radius);
        let cands: BTreeSet<Vec<i64>> =
            candidate_coords(r3, LatticeKind::Weight, radius, &shift)
                .unwrap()
                .into_iter()
                .collect();
        for c in &cands {
            assert!(c[..3].iter().all(|m| m.abs() <= margin));
            assert_eq!(c[3], 0);
        }
        let mut missed = 0;
        for m1 in -margin..=margin {
            for m2 in -margin..=margin {
                for m3 in -margin..=margin {
                    let coords = vec![m1, m2, m3, 0];
                    let par = par_of(&w.frame, &coords);
                    if par.norm() > radius {
                        continue;
                    }
                    let acc = w.accept_coords(&coords);
                    if matches!(acc, Acceptance::Inside | Acceptance::Singular)
                        && !cands.contains(&coords)
                    {
                        missed += 1;
                    }
                }
            }
        }
        assert_eq!(missed, 0, "accepted in-radius points missing from the candidate set");
    }

    #[test]
    fn enumerator_covers_box_oracle_rank_four_root() {
        let r4 = rank(4);
        let shift = default_shift(r4);
        let w = Window::new(r4, &shift).unwrap();
        let radius = 2.0;
        let margin = enumeration_margin(r4, radius);
        let cands: BTreeSet<Vec<i64>> =
            candidate_coords(r4, LatticeKind::Root, radius, &shift)
                .unwrap()
                .into_iter()
                .collect();
        let m: i64 = 4;
        for m1 in -m..=m {
            for m2 in -m..=m {
                for m3 in -m..=m {
                    for m4 in -m..=m {
                        let coords = vec![m1, m2, m3, m4, 0];
                        if (m1 + m2 + m3 + m4).rem_euclid(5) != 0 {
                            continue;
                        }
                        let par = par_of(&w.frame, &coords);
                        if par.norm() > radius {
                            continue;
                        }
                        let acc = w.accept_coords(&coords);
                        if matches!(acc, Acceptance::Inside | Acceptance::Singular) {
                            assert!(
                                cands.contains(&coords),
                                "missing root candidate {coords:?}"
                            );
                        }
                    }
                }
            }
        }
        let _ = margin;
    }

    #[test]
    fn root_rhombic_patch_is_points_only_on_the_even_sublattice() {
        let r3 = rank(3);
        let patch =
            generate_rhombic_patch(r3, LatticeKind::Root, 4.0, &default_shift(r3)).unwrap();
        assert!(patch.tiles.is_empty());
        assert!(patch.diagnostic.is_some());
        assert!(!patch.points.is_empty());
        let s = (2.0_f64 / 4.0).sqrt();
        for pt in &patch.points {
            let a = (pt.position.x / s).round() as i64;
            let b = (pt.position.y / s).round() as i64;
            assert!((pt.position.x - a as f64 * s).abs() < 1e-9);
            assert!((pt.position.y - b as f64 * s).abs() < 1e-9);
            assert_eq!((a + b).rem_euclid(2), 0, "root projection off the even sublattice");
        }
    }

    #[test]
    fn weight_rhombic_patch_rank_three_is_the_square_grid() {
        let r3 = rank(3);
        let patch =
            generate_rhombic_patch(r3, LatticeKind::Weight, 4.0, &default_shift(r3)).unwrap();
        assert_eq!(patch.class_labels(), vec!["rhombus-1".to_string()]);
        // Every grid point is accepted at a generic shift, so each square
        // is emitted exactly once, via its unique odd-even corner. There
        // are 26 such corners within the radius (a odd, b even, a^2 + b^2
        // <= 32) and each one anchors its four surrounding squares.
        assert_eq!(patch.tiles.len(), 104);
        patch.validate().unwrap();
        let s = (2.0_f64 / 4.0).sqrt();
        let mut parities = BTreeSet::new();
        for pt in &patch.points {
            let a = (pt.position.x / s).round() as i64;
            let b = (pt.position.y / s).round() as i64;
            parities.insert((a.rem_euclid(2), b.rem_euclid(2)));
        }
        assert_eq!(parities.len(), 4, "grid points of every parity class");
    }

    #[test]
    fn weight_rhombic_patch_rank_four_has_thick_and_thin() {
        let r4 = rank(4);
        let patch =
            generate_rhombic_patch(r4, LatticeKind::Weight, 2.5, &default_shift(r4)).unwrap();
        assert_eq!(
            patch.class_labels(),
            vec!["rhombus-1".to_string(), "rhombus-2".to_string()]
        );
        patch.validate().unwrap();
        for pt in &patch.points {
            assert!((1..=4).contains(&pt.index), "index {} out of range", pt.index);
        }
    }

    #[test]
    fn triangular_patch_rank_two_tiles_the_plane() {
        let patch = generate_triangular_patch(rank(2), 2.5, &[]).unwrap();
        assert_eq!(patch.class_labels(), vec!["triangle-1-1-1".to_string()]);
        patch.validate().unwrap();
        let families: BTreeSet<i64> = patch.tiles.iter().map(|t| t.source[3]).collect();
        assert_eq!(families.len(), 2, "both up and down triangles");
    }

    #[test]
    fn triangular_patch_rank_three_cuts_squares_into_right_triangles() {
        let r3 = rank(3);
        let patch = generate_triangular_patch(r3, 3.0, &default_shift(r3)).unwrap();
        assert_eq!(patch.class_labels(), vec!["triangle-1-1-2".to_string()]);
        assert!(!patch.tiles.is_empty());
        patch.validate().unwrap();
        for t in &patch.tiles {
            let mut lens: Vec<f64> = (0..3)
                .map(|i| t.vertices[i].dist(&t.vertices[(i + 1) % 3]))
                .collect();
            lens.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!((lens[0] - 1.0).abs() < 1e-9);
            assert!((lens[1] - 1.0).abs() < 1e-9);
            assert!((lens[2] - 2.0_f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetry_report_single_tile_is_twofold() {
        let r3 = rank(3);
        let square = PlacedTile {
            label: "rhombus-1".into(),
            vertices: vec![
                PlanePoint::new(0.5, 0.5),
                PlanePoint::new(-0.5, 0.5),
                PlanePoint::new(-0.5, -0.5),
                PlanePoint::new(0.5, -0.5),
            ],
            source: vec![0, 0, 0, 0, 1, 2],
        };
        let patch = Patch {
            rank: r3,
            lattice: LatticeKind::Weight,
            kind: PatchKind::Rhombic,
            radius: 1.0,
            shift: default_shift(r3),
            tiles: vec![square],
            points: Vec::new(),
            boundary_mode: BoundaryMode::Excluded,
            singular_count: 0,
            diagnostic: None,
        };
        // A square centered at the origin returns to itself after a half
        // turn but 2h = 8 would need 45 degrees.
        assert_eq!(patch_symmetry_report(&patch).unwrap(), 4);
    }

    #[test]
    fn symmetric_patch_rank_three_is_fourfold() {
        let r3 = rank(3);
        let patch = generate_rhombic_patch(r3, LatticeKind::Weight, 3.0, &[0.0]).unwrap();
        assert_eq!(patch.boundary_mode, BoundaryMode::Closed);
        assert!(!patch.tiles.is_empty(), "symmetric patch must have tiles");
        assert_eq!(patch_symmetry_report(&patch).unwrap(), 4);
    }

    #[test]
    fn symmetric_patch_rank_four_is_fivefold() {
        let r4 = rank(4);
        let patch = generate_rhombic_patch(r4, LatticeKind::Weight, 3.5, &[0.0, 0.0]).unwrap();
        assert_eq!(patch.boundary_mode, BoundaryMode::Closed);
        assert!(!patch.tiles.is_empty());
        assert_eq!(patch_symmetry_report(&patch).unwrap(), 5);
    }

    #[test]
    fn wider_enumeration_margin_changes_nothing() {
        let r3 = rank(3);
        let shift = default_shift(r3);
        let base =
            generate_rhombic_patch_bounded(r3, LatticeKind::Weight, 2.5, &shift, enumeration_margin(r3, 2.5))
                .unwrap();
        let wide = generate_rhombic_patch_bounded(
            r3,
            LatticeKind::Weight,
            2.5,
            &shift,
            enumeration_margin(r3, 2.5) + 3,
        )
        .unwrap();
        assert_eq!(base.tiles.len(), wide.tiles.len());
        assert_eq!(base.points.len(), wide.points.len());
        for (a, b) in base.tiles.iter().zip(&wide.tiles) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.source, b.source);
        }
    }

    #[test]
    fn tiny_radius_gives_an_empty_patch_with_diagnostic() {
        let r4 = rank(4);
        let patch =
            generate_rhombic_patch(r4, LatticeKind::Weight, 0.05, &default_shift(r4)).unwrap();
        assert!(patch.tiles.is_empty());
        assert!(patch.points.is_empty());
        assert!(patch.diagnostic.is_some());
    }

    #[test]
    fn validate_flags_overlapping_tiles() {
        let r3 = rank(3);
        let square = |cx: f64, cy: f64| PlacedTile {
            label: "rhombus-1".into(),
            vertices: vec![
                PlanePoint::new(cx + 0.5, cy + 0.5),
                PlanePoint::new(cx - 0.5, cy + 0.5),
                PlanePoint::new(cx - 0.5, cy - 0.5),
                PlanePoint::new(cx + 0.5, cy - 0.5),
            ],
            source: vec![0, 0, 0, 0, 1, 2],
        };
        let mut patch = Patch {
            rank: r3,
            lattice: LatticeKind::Weight,
            kind: PatchKind::Rhombic,
            radius: 2.0,
            shift: default_shift(r3),
            tiles: vec![square(0.0, 0.0), square(1.0, 0.0)],
            points: Vec::new(),
            boundary_mode: BoundaryMode::Excluded,
            singular_count: 0,
            diagnostic: None,
        };
        patch.validate().unwrap();
        patch.tiles.push(square(0.5, 0.0));
        assert!(patch.validate().is_err());
    }

    #[test]
    fn default_shift_components_are_small_and_distinct() {
        let shift = default_shift(rank(5));
        assert_eq!(shift.len(), 3);
        for (i, g) in shift.iter().enumerate() {
            let expected = (i as f64 + 2.0) * 1e-4 * std::f64::consts::SQRT_2;
            assert!((g - expected).abs() < 1e-18);
        }
    }

    #[test]
    fn window_rejects_bad_inputs() {
        assert!(matches!(
            build_window(rank(2), &[]),
            Err(Error::UnsupportedRank { .. })
        ));
        assert!(matches!(
            build_window(rank(4), &[0.0]),
            Err(Error::RankMismatch { .. })
        ));
        assert!(build_window(rank(4), &[f64::NAN, 0.0]).is_err());
    }
}
