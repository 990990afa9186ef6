//! Descent from the `(n+1)`-dimensional hypercube to the lattice: cube
//! vertices `(1/2)(+-l_1 ... +-l_{n+1})` project onto the Voronoi vertices
//! of the hyperplane lattice once the diagonal direction is dropped. The
//! diagonal coefficient is carried explicitly and only discarded at the
//! projection step, so the lift identities can be checked exactly as
//! stated, not merely up to a diagonal term.

use std::fmt::Write as _;

use num_integer::binomial;

use crate::error::{Error, Result};
use crate::lattice::{AmbientVector, Basis, LatticeRank, LatticeVector};
use crate::rat::{self, Rat};

/// A vertex of the `(n+1)`-cube, recorded by its sign pattern; the global
/// factor of one half is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeVertex {
    signs: Vec<i8>,
}

impl CubeVertex {
    /// Signs must all be `+1` or `-1`, one per ambient axis.
    pub fn new(signs: &[i8]) -> Result<Self> {
        if signs.len() < 2 {
            return Err(Error::InvalidInput(
                "a cube vertex needs at least two signs".into(),
            ));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidInput(
                "cube vertex signs must be +1 or -1".into(),
            ));
        }
        Ok(Self {
            signs: signs.to_vec(),
        })
    }

    /// Parse a pattern like `+-++-`.
    pub fn parse(text: &str) -> Result<Self> {
        let signs: Result<Vec<i8>> = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidInput(format!(
                    "sign pattern may only contain '+' and '-', found {other:?}"
                ))),
            })
            .collect();
        Self::new(&signs?)
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|s| **s < 0).count()
    }

    fn pattern(&self) -> String {
        self.signs
            .iter()
            .map(|s| if *s > 0 { '+' } else { '-' })
            .collect()
    }
}

impl std::fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.pattern())
    }
}

/// Project a cube vertex into the hyperplane: substitute each axis by the
/// diagonal share plus the matching `k` vector and drop the diagonal. A
/// vertex with minus signs exactly on the set `S` maps to `-sum_{i in S}
/// k_i`, so the all-plus and all-minus vertices both map to zero.
pub fn project_cube_vertex(v: &CubeVertex, rank: LatticeRank) -> Result<LatticeVector> {
    if v.len() != rank.h() {
        return Err(Error::RankMismatch {
            expected: rank.h(),
            got: v.len(),
        });
    }
    let coords: Vec<Rat> = v
        .signs()
        .iter()
        .map(|s| rat::frac(*s as i64, 2))
        .collect();
    Ok(AmbientVector::new(rank, &coords)?.hyperplane_part())
}

/// Vertex-class sizes of the cube by minus-sign count, in the order:
/// all-plus, all-minus, then one entry per count `1 ..= n`. The classes
/// with mixed signs each project to a distinct vertex orbit, so the sizes
/// are binomials and the total is `2^{n+1}`.
pub fn cube_orbit_decomposition(rank: LatticeRank) -> Vec<u64> {
    let h = rank.h() as u64;
    let mut sizes = vec![1, 1];
    for j in 1..=rank.n() as u64 {
        sizes.push(binomial(h, j));
    }
    sizes
}

/// Check the five exact lift identities at `n = 4`: for each `i`,
/// `k_i - (3/10) l_0` equals half of (`+l_i`, minus every other axis), and
/// the five right-hand sides sum to `-(3/2) l_0` so that the generators
/// still sum to zero.
pub fn k_lift_check(rank: LatticeRank) -> Result<bool> {
    if rank.n() != 4 {
        return Err(Error::UnsupportedRank {
            n: rank.n(),
            reason: "the lift identities are stated for n = 4".into(),
        });
    }
    let h = rank.h();
    let expected_l0 = rat::frac(-3, 10);
    let mut rhs_sum = vec![rat::int(0); h];
    for i in 0..h {
        let coords: Vec<Rat> = (0..h)
            .map(|j| {
                if j == i {
                    rat::frac(1, 2)
                } else {
                    rat::frac(-1, 2)
                }
            })
            .collect();
        for (acc, c) in rhs_sum.iter_mut().zip(&coords) {
            *acc += *c;
        }
        let ambient = AmbientVector::new(rank, &coords)?;
        if ambient.l0_coefficient() != expected_l0 {
            return Ok(false);
        }
        let k_i = LatticeVector::basis_vector(rank, Basis::K, i + 1)?;
        if ambient.hyperplane_part() != k_i {
            return Ok(false);
        }
    }
    // Summed right-hand sides: every axis appears once with +1/2 and four
    // times with -1/2, so the total is -(3/2) per axis, a pure diagonal.
    let summed = AmbientVector::new(rank, &rhs_sum)?;
    Ok(summed.l0_coefficient() == rat::frac(-3, 2) && summed.hyperplane_part().is_zero())
}

/// One projected cube vertex against its expected image.
#[derive(Debug, Clone)]
pub struct DescentLine {
    pub signs: String,
    pub image: LatticeVector,
    pub expected: LatticeVector,
}

impl DescentLine {
    pub fn matches(&self) -> bool {
        self.image == self.expected
    }
}

/// Report of the three-cube descent at `n = 4`.
#[derive(Debug, Clone)]
pub struct DescentReport {
    pub lines: Vec<DescentLine>,
    /// Mean of the eight images, expected at `(k_1 - k_5) / 2`.
    pub center: LatticeVector,
    pub center_matches: bool,
    /// Exact cosine of the obtuse rhombus angle, `-1/4`.
    pub obtuse_cosine: Rat,
    pub obtuse_angle_degrees: f64,
}

impl DescentReport {
    pub fn pass(&self) -> bool {
        self.center_matches
            && self.obtuse_cosine == rat::frac(-1, 4)
            && self.lines.iter().all(DescentLine::matches)
    }

    /// Human-readable diff of every mismatching line; empty on a pass.
    pub fn diff(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            if !line.matches() {
                let _ = writeln!(
                    out,
                    "{}: projected to {}, expected {}",
                    line.signs, line.image, line.expected
                );
            }
        }
        if !self.center_matches {
            let _ = writeln!(out, "center projected to {}", self.center);
        }
        out
    }
}

/// Project the eight vertices of the three-cube with the first sign fixed
/// plus and the last fixed minus, and compare against the known images:
/// they form a rhombohedron spanned by `k_2, k_3, k_4` starting at `k_1`,
/// centered at `(k_1 - k_5) / 2`, with square faces of obtuse angle
/// `arccos(-1/4)`.
pub fn rhombohedron_descent(rank: LatticeRank) -> Result<DescentReport> {
    if rank.n() != 4 {
        return Err(Error::UnsupportedRank {
            n: rank.n(),
            reason: "the rhombohedron descent is stated for n = 4".into(),
        });
    }
    let k = |i: usize| LatticeVector::basis_vector(rank, Basis::K, i).expect("valid index");
    let expectations: [(i8, i8, i8, LatticeVector); 8] = [
        (-1, -1, -1, k(1)),
        (1, 1, 1, -&k(5)),
        (1, -1, -1, &k(1) + &k(2)),
        (-1, 1, -1, &k(1) + &k(3)),
        (-1, -1, 1, &k(1) + &k(4)),
        (1, 1, -1, -&(&k(4) + &k(5))),
        (1, -1, 1, -&(&k(3) + &k(5))),
        (-1, 1, 1, -&(&k(2) + &k(5))),
    ];
    let mut lines = Vec::with_capacity(8);
    let mut total = LatticeVector::zero(rank);
    for (s2, s3, s4, expected) in expectations {
        let vertex = CubeVertex::new(&[1, s2, s3, s4, -1])?;
        let image = project_cube_vertex(&vertex, rank)?;
        total = &total + &image;
        lines.push(DescentLine {
            signs: vertex.pattern(),
            image,
            expected,
        });
    }
    let center = total.scale(rat::frac(1, 8));
    let expected_center = (&k(1) - &k(5)).scale(rat::frac(1, 2));
    let center_matches = center == expected_center;
    let obtuse_cosine = k(2).inner(&k(3)) / k(2).inner(&k(2));
    let obtuse_angle_degrees = rat::to_f64(obtuse_cosine).acos().to_degrees();
    Ok(DescentReport {
        lines,
        center,
        center_matches,
        obtuse_cosine,
        obtuse_angle_degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells;
    use std::collections::{BTreeMap, BTreeSet};

    fn rank(n: usize) -> LatticeRank {
        LatticeRank::new(n).unwrap()
    }

    fn all_vertices(h: usize) -> Vec<CubeVertex> {
        (0..(1u32 << h))
            .map(|mask| {
                let signs: Vec<i8> = (0..h)
                    .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                    .collect();
                CubeVertex::new(&signs).unwrap()
            })
            .collect()
    }

    #[test]
    fn uniform_vertices_project_to_zero() {
        for n in [2, 4, 6] {
            let r = rank(n);
            let h = r.h();
            let plus = CubeVertex::new(&vec![1; h]).unwrap();
            let minus = CubeVertex::new(&vec![-1; h]).unwrap();
            assert!(project_cube_vertex(&plus, r).unwrap().is_zero());
            assert!(project_cube_vertex(&minus, r).unwrap().is_zero());
        }
    }

    #[test]
    fn single_minus_projects_to_minus_k1() {
        let r = rank(3);
        let v = CubeVertex::parse("-+++").unwrap();
        let k1 = LatticeVector::basis_vector(r, Basis::K, 1).unwrap();
        assert_eq!(project_cube_vertex(&v, r).unwrap(), -&k1);
    }

    #[test]
    fn appendix_first_line_at_rank_four() {
        let r = rank(4);
        let v = CubeVertex::parse("+----").unwrap();
        let k1 = LatticeVector::basis_vector(r, Basis::K, 1).unwrap();
        assert_eq!(project_cube_vertex(&v, r).unwrap(), k1);
    }

    #[test]
    fn orbit_decomposition_values() {
        assert_eq!(cube_orbit_decomposition(rank(4)), vec![1, 1, 5, 10, 10, 5]);
        assert_eq!(cube_orbit_decomposition(rank(2)), vec![1, 1, 3, 3]);
        for n in 1..=10 {
            let sizes = cube_orbit_decomposition(rank(n));
            assert_eq!(sizes.iter().sum::<u64>(), 1 << (n + 1));
        }
    }

    #[test]
    fn images_cover_voronoi_vertices_with_binomial_fibers() {
        for n in 2..=6 {
            let r = rank(n);
            let h = r.h();
            let mut fibers: BTreeMap<LatticeVector, u64> = BTreeMap::new();
            for v in all_vertices(h) {
                let image = project_cube_vertex(&v, r).unwrap();
                *fibers.entry(image).or_insert(0) += 1;
            }
            let vertex_set: BTreeSet<LatticeVector> =
                cells::voronoi_vertices(r).unwrap().into_iter().collect();
            let zero = LatticeVector::zero(r);
            assert_eq!(fibers.get(&zero), Some(&2), "n={n}: both uniform vertices");
            for vertex in &vertex_set {
                assert!(fibers.contains_key(vertex), "n={n}: missed {vertex}");
            }
            assert_eq!(fibers.len(), vertex_set.len() + 1, "n={n}: extra images");
            // Each nonzero image is hit exactly once: distinct subsets have
            // distinct sums.
            for (image, count) in &fibers {
                if !image.is_zero() {
                    assert_eq!(*count, 1, "n={n}: fiber of {image}");
                }
            }
        }
    }

    #[test]
    fn lift_identities_hold_at_rank_four() {
        assert!(k_lift_check(rank(4)).unwrap());
        assert!(matches!(
            k_lift_check(rank(3)),
            Err(Error::UnsupportedRank { .. })
        ));
    }

    #[test]
    fn rhombohedron_descent_matches_all_lines() {
        let report = rhombohedron_descent(rank(4)).unwrap();
        assert!(report.pass(), "diff:\n{}", report.diff());
        assert_eq!(report.lines.len(), 8);
        assert_eq!(report.obtuse_cosine, rat::frac(-1, 4));
        assert!((report.obtuse_angle_degrees - 104.477_512_185_929_92).abs() < 1e-9);
    }

    #[test]
    fn three_cube_mixed_vertices_form_a_hexagon() {
        let r = rank(2);
        let mut images = BTreeSet::new();
        for v in all_vertices(3) {
            let count = v.minus_count();
            if count == 0 || count == 3 {
                continue;
            }
            images.insert(project_cube_vertex(&v, r).unwrap());
        }
        let mut expected = BTreeSet::new();
        for i in 1..=3 {
            let k = LatticeVector::basis_vector(r, Basis::K, i).unwrap();
            expected.insert(k.clone());
            expected.insert(-&k);
        }
        assert_eq!(images, expected);
    }

    #[test]
    fn cube_edges_project_parallel_to_generators() {
        for n in [2, 3, 4] {
            let r = rank(n);
            let h = r.h();
            for v in all_vertices(h) {
                for axis in 0..h {
                    let mut flipped = v.signs().to_vec();
                    flipped[axis] = -flipped[axis];
                    let w = CubeVertex::new(&flipped).unwrap();
                    let delta =
                        &project_cube_vertex(&v, r).unwrap() - &project_cube_vertex(&w, r).unwrap();
                    let k = LatticeVector::basis_vector(r, Basis::K, axis + 1).unwrap();
                    assert!(
                        delta == k || delta == -&k,
                        "n={n}: edge along axis {axis} projected to {delta}"
                    );
                }
            }
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(CubeVertex::parse("+0-").is_err());
        assert!(CubeVertex::parse("+").is_err());
    }
}
