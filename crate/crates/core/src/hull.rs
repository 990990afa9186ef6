//! Brute-force exact convex-hull oracle over integer coordinates.
//!
//! This is the independent cross-check for the combinatorial cell
//! descriptions elsewhere in the crate, so it shares no logic with them: it
//! enumerates every `d`-subset of the input points, keeps the subset's
//! hyperplane when all points fall on one side, and closes the surviving
//! facets under intersection to recover the full face lattice. All
//! arithmetic is `i64`; faces are classified by exact affine rank.
//!
//! Convexity is an affine notion, so lattice polytopes can be passed in
//! canonical coordinates (first `n` entries) without any metric bookkeeping.
//!
//! Capacity: at most 64 points (faces are stored as `u64` bitsets), which
//! covers the cell geometry through rank 5.

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use std::collections::HashSet;

/// One facet: outward description `normal . x <= offset`, tight exactly on
/// `members`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub members: u64,
}

/// Face-lattice summary of the hull of an integer point set.
#[derive(Debug, Clone)]
pub struct HullOracle {
    dim: usize,
    point_count: usize,
    facets: Vec<Facet>,
    /// Proper nonempty faces grouped by affine dimension (index = dim).
    faces_by_dim: Vec<Vec<u64>>,
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        k => {
            let mut acc = 0i64;
            for col in 0..k {
                if m[0][col] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != col)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1 } else { -1 };
                acc += sign * m[0][col] * det(&minor);
            }
            acc
        }
    }
}

/// Normal of the hyperplane spanned by `rows` (each length `d`,
/// `rows.len() == d - 1`): the vector of signed maximal minors. Zero when
/// the rows are dependent.
fn cross_normal(rows: &[Vec<i64>], d: usize) -> Vec<i64> {
    (0..d)
        .map(|skip| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != skip)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if skip % 2 == 0 { 1 } else { -1 };
            sign * det(&minor)
        })
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Step `idx` to the next `idx.len()`-subset of `0..m` in lexicographic
/// order; false when exhausted.
fn advance_subset(idx: &mut [usize], m: usize) -> bool {
    let d = idx.len();
    let mut pos = d;
    while pos > 0 {
        pos -= 1;
        if idx[pos] < m - d + pos {
            idx[pos] += 1;
            for q in pos + 1..d {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact affine rank of the points selected by `mask`.
fn affine_rank(points: &[Vec<i64>], mask: u64) -> usize {
    let sel: Vec<usize> = (0..points.len()).filter(|i| mask >> i & 1 == 1).collect();
    if sel.len() <= 1 {
        return 0;
    }
    let base = &points[sel[0]];
    let mut rows: Vec<Vec<i64>> = sel[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    // Fraction-free elimination; rank = number of pivots.
    let cols = base.len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows.len() && col < cols {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) {
            rows.swap(rank, p);
            let pivot = rows[rank][col];
            for r in rank + 1..rows.len() {
                if rows[r][col] != 0 {
                    let factor = rows[r][col];
                    for c in col..cols {
                        rows[r][c] = rows[r][c] * pivot - rows[rank][c] * factor;
                    }
                    let g = rows[r][col..].iter().fold(0, |acc, &v| gcd(acc, v));
                    if g > 1 {
                        for c in col..cols {
                            rows[r][c] /= g;
                        }
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

impl HullOracle {
    /// Build the hull of `points` (each of length `dim`, at most 64 points,
    /// affinely spanning the whole space).
    pub fn build(points: &[Vec<i64>]) -> Result<Self> {
        let m = points.len();
        if m == 0 {
            return Err(Error::InvalidInput("hull of an empty point set".into()));
        }
        if m > 64 {
            return Err(Error::InvalidInput(format!(
                "hull oracle handles at most 64 points, got {m}"
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("points must have dimension >= 1".into()));
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::RankMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }

        let full_mask: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mut seen: HashSet<(Vec<i64>, i64)> = HashSet::new();
        let mut facets: Vec<Facet> = Vec::new();

        // Walk every d-subset via a fixed-size index vector.
        let mut idx: Vec<usize> = (0..dim).collect();
        if m < dim {
            return Err(Error::InvalidInput(format!(
                "need at least {dim} points to span a hyperplane, got {m}"
            )));
        }
        loop {
            let base = &points[idx[0]];
            let rows: Vec<Vec<i64>> = idx[1..]
                .iter()
                .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let mut normal = cross_normal(&rows, dim);
            if normal.iter().any(|&c| c != 0) {
                let mut offset: i64 = normal.iter().zip(base).map(|(n, p)| n * p).sum();
                // One-side test with early exit.
                let mut side = 0i64;
                let mut ok = true;
                for p in points {
                    let v: i64 = normal.iter().zip(p).map(|(n, x)| n * x).sum::<i64>() - offset;
                    if v != 0 {
                        if side == 0 {
                            side = v.signum();
                        } else if v.signum() != side {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok && side != 0 {
                    if side > 0 {
                        // Flip so that all points satisfy normal . x <= offset.
                        for c in normal.iter_mut() {
                            *c = -*c;
                        }
                        offset = -offset;
                    }
                    let g = normal.iter().fold(offset, |acc, &v| gcd(acc, v));
                    if g > 1 {
                        for c in normal.iter_mut() {
                            *c /= g;
                        }
                        offset /= g;
                    }
                    if seen.insert((normal.clone(), offset)) {
                        let mut members = 0u64;
                        for (i, p) in points.iter().enumerate() {
                            let v: i64 = normal.iter().zip(p).map(|(n, x)| n * x).sum();
                            if v == offset {
                                members |= 1u64 << i;
                            }
                        }
                        facets.push(Facet {
                            normal,
                            offset,
                            members,
                        });
                    }
                } else if ok && side == 0 {
                    return Err(Error::InvalidInput(
                        "points do not span the space (a hyperplane contains them all)".into(),
                    ));
                }
            }

            if !advance_subset(&mut idx, m) {
                break;
            }
        }

        if facets.is_empty() {
            return Err(Error::InvalidInput(
                "no supporting hyperplanes found (degenerate input)".into(),
            ));
        }

        // Close the facet sets under intersection to get all proper faces.
        let mut face_set: HashSet<u64> = facets.iter().map(|f| f.members).collect();
        let mut queue: Vec<u64> = face_set.iter().copied().collect();
        while let Some(f) = queue.pop() {
            for g in &facets {
                let e = f & g.members;
                if e != 0 && e != full_mask && face_set.insert(e) {
                    queue.push(e);
                }
            }
        }

        let mut faces_by_dim: Vec<Vec<u64>> = vec![Vec::new(); dim];
        for &f in &face_set {
            let r = affine_rank(points, f);
            if r < dim {
                faces_by_dim[r].push(f);
            }
        }
        for bucket in faces_by_dim.iter_mut() {
            bucket.sort_unstable();
        }

        Ok(Self {
            dim,
            point_count: m,
            facets,
            faces_by_dim,
        })
    }

    /// Build from lattice vectors using their first `n` canonical
    /// coordinates (an affine isomorphism of the hyperplane).
    pub fn build_from_lattice(points: &[LatticeVector]) -> Result<Self> {
        let coords: Vec<Vec<i64>> = points
            .iter()
            .map(|v| {
                let mut c = v.integer_coords()?;
                c.pop();
                Ok(c)
            })
            .collect::<Result<_>>()?;
        Self::build(&coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Counts of proper faces by dimension `0..dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim.iter().map(|b| b.len()).collect()
    }

    /// Faces of the given dimension as sorted lists of input indices.
    pub fn faces_of_dim(&self, d: usize) -> Vec<Vec<usize>> {
        let Some(bucket) = self.faces_by_dim.get(d) else {
            return Vec::new();
        };
        bucket
            .iter()
            .map(|&mask| (0..self.point_count).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    }

    /// True when the smallest face containing the point is the point itself.
    pub fn is_extreme(&self, index: usize) -> bool {
        let full_mask: u64 = if self.point_count == 64 {
            u64::MAX
        } else {
            (1u64 << self.point_count) - 1
        };
        let mut acc = full_mask;
        for f in &self.facets {
            if f.members >> index & 1 == 1 {
                acc &= f.members;
            }
        }
        acc == 1u64 << index
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_face_lattice() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]];
        let h = HullOracle::build(&pts).unwrap();
        assert_eq!(h.f_vector(), vec![4, 4]);
        assert!((0..4).all(|i| h.is_extreme(i)));
    }

    #[test]
    fn interior_point_is_not_extreme() {
        let pts = vec![vec![0, 0], vec![2, 0], vec![2, 2], vec![0, 2], vec![1, 1]];
        let h = HullOracle::build(&pts).unwrap();
        assert_eq!(h.f_vector(), vec![4, 4]);
        assert!(!h.is_extreme(4));
    }

    #[test]
    fn cube_face_lattice() {
        let pts: Vec<Vec<i64>> = (0..8)
            .map(|m: i64| vec![m & 1, m >> 1 & 1, m >> 2 & 1])
            .collect();
        let h = HullOracle::build(&pts).unwrap();
        assert_eq!(h.f_vector(), vec![8, 12, 6]);
    }

    #[test]
    fn octahedron_face_lattice() {
        let mut pts = Vec::new();
        for a in 0..3 {
            for s in [1i64, -1] {
                let mut p = vec![0i64; 3];
                p[a] = s;
                pts.push(p);
            }
        }
        let h = HullOracle::build(&pts).unwrap();
        assert_eq!(h.f_vector(), vec![6, 12, 8]);
    }

    #[test]
    fn flat_input_is_rejected() {
        let pts = vec![vec![0, 0], vec![1, 1], vec![2, 2]];
        assert!(HullOracle::build(&pts).is_err());
    }

    #[test]
    fn simplex_in_four_dimensions() {
        let mut pts = vec![vec![0i64; 4]];
        for a in 0..4 {
            let mut p = vec![0i64; 4];
            p[a] = 1;
            pts.push(p);
        }
        let h = HullOracle::build(&pts).unwrap();
        assert_eq!(h.f_vector(), vec![5, 10, 10, 5]);
    }
}
