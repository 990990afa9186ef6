//! Voronoi and Delone cell geometry at the origin.
//!
//! The Voronoi cell of the root lattice at the origin is the zonotope
//! `{ sum t_i k_i : |t_i| <= 1/2 }`, the shadow of the `h`-cube along its
//! diagonal. Its vertices are the subset sums `sum_{i in S} k_i` over the
//! proper nonempty subsets `S` of `{1..h}` (because `sum k_i = 0`, the sign
//! pattern with plus-set `S` collapses to that sum), and its 2-faces are
//! rhombi spanned by a pair `k_a, k_b` hung off a base subset disjoint from
//! the pair.
//!
//! The holes of the lattice split into `n` orbits: orbit `i` consists of the
//! sums of `i` distinct `k` vectors. The Delone cell circumscribed at a hole
//! of orbit `i` is the simplex-like polytope whose vertices are the hole plus
//! each member of orbit `h - i`; those vertices are root-lattice points. The
//! 2-faces of the Delone complex are equilateral triangles with root edges,
//! and they come in two orientation families at every lattice point.

use crate::error::{Error, Result};
use crate::lattice::{Basis, LatticeRank, LatticeVector};
use crate::rat::{self, Rat};

/// Largest rank at which the full vertex enumeration (`2^h - 2` points) is
/// allowed to run.
pub const MAX_VERTEX_ENUM_RANK: usize = 20;

fn check_enum_rank(rank: LatticeRank) -> Result<()> {
    if rank.n() > MAX_VERTEX_ENUM_RANK {
        return Err(Error::UnsupportedRank {
            n: rank.n(),
            reason: format!(
                "vertex enumeration is capped at rank {MAX_VERTEX_ENUM_RANK} (2^h - 2 points)"
            ),
        });
    }
    Ok(())
}

fn subset_sum(rank: LatticeRank, mask: u64) -> LatticeVector {
    let h = rank.h();
    let coords: Vec<Rat> = (0..h)
        .map(|b| {
            if mask >> b & 1 == 1 {
                rat::int(1)
            } else {
                rat::int(0)
            }
        })
        .collect();
    LatticeVector::from_coords(rank, Basis::K, &coords).expect("subset coordinates have length h")
}

fn mask_to_set(mask: u64, h: usize) -> Vec<usize> {
    (1..=h).filter(|i| mask >> (i - 1) & 1 == 1).collect()
}

/// All `2^h - 2` vertices of the Voronoi cell at the origin, ordered by
/// subset bitmask.
pub fn voronoi_vertices(rank: LatticeRank) -> Result<Vec<LatticeVector>> {
    check_enum_rank(rank)?;
    let h = rank.h();
    let full = (1u64 << h) - 1;
    Ok((1..full).map(|mask| subset_sum(rank, mask)).collect())
}

/// Identify a point as a Voronoi-cell vertex and return its subset
/// (1-based, sorted). The canonical coordinates of a vertex take exactly two
/// adjacent integer values; the subset collects the positions of the larger.
pub fn voronoi_vertex_subset(v: &LatticeVector) -> Result<Vec<usize>> {
    let fail = |details: String| Error::NotAVoronoiVertex { details };
    let coords = v
        .integer_coords()
        .map_err(|_| fail(format!("{v} has non-integer coordinates")))?;
    let lo = *coords.iter().min().expect("coords are nonempty");
    let hi = *coords.iter().max().expect("coords are nonempty");
    if hi - lo != 1 {
        return Err(fail(format!(
            "{v} takes coordinate values spanning {lo}..{hi}, expected two adjacent values"
        )));
    }
    let set: Vec<usize> = coords
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == hi)
        .map(|(i, _)| i + 1)
        .collect();
    Ok(set)
}

/// One rhombic 2-face of the Voronoi cell: the rhombus spanned by
/// `k_a, k_b` based at the subset sum over `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhombicFace {
    rank: LatticeRank,
    base_mask: u64,
    edge: (usize, usize),
}

impl RhombicFace {
    pub fn rank(&self) -> LatticeRank {
        self.rank
    }

    /// Base subset (1-based, sorted), disjoint from the edge pair.
    pub fn base_set(&self) -> Vec<usize> {
        mask_to_set(self.base_mask, self.rank.h())
    }

    /// The spanning pair `(a, b)`, `a < b`.
    pub fn edge(&self) -> (usize, usize) {
        self.edge
    }

    /// The four corners in cyclic order:
    /// base, base + k_a, base + k_a + k_b, base + k_b.
    pub fn vertices(&self) -> [LatticeVector; 4] {
        let (a, b) = self.edge;
        let s = subset_sum(self.rank, self.base_mask);
        let ka = LatticeVector::basis_vector(self.rank, Basis::K, a).expect("edge index in range");
        let kb = LatticeVector::basis_vector(self.rank, Basis::K, b).expect("edge index in range");
        let sa = &s + &ka;
        let sab = &sa + &kb;
        let sb = &s + &kb;
        [s, sa, sab, sb]
    }

    /// Face center `base + (k_a + k_b)/2`.
    pub fn center(&self) -> LatticeVector {
        let [s, _, sab, _] = self.vertices();
        (&s + &sab).scale(rat::frac(1, 2))
    }
}

/// All rhombic 2-faces of the Voronoi cell. Defined for rank `n >= 3`
/// (at rank 2 the cell is a hexagon whose only 2-face is the cell itself).
pub fn voronoi_two_faces(rank: LatticeRank) -> Result<Vec<RhombicFace>> {
    let n = rank.n();
    if n < 3 {
        return Err(Error::UnsupportedRank {
            n,
            reason: "rhombic 2-faces are proper faces only from rank 3 on".into(),
        });
    }
    check_enum_rank(rank)?;
    let h = rank.h();
    let mut faces = Vec::new();
    for a in 1..=h {
        for b in a + 1..=h {
            let pair_mask = 1u64 << (a - 1) | 1u64 << (b - 1);
            let rest: Vec<usize> = (1..=h).filter(|i| *i != a && *i != b).collect();
            // Base subsets: nonempty, proper within the remaining h - 2
            // elements with at most n - 2 members.
            for sub in 1..(1u64 << rest.len()) {
                let size = sub.count_ones() as usize;
                if size > n - 2 {
                    continue;
                }
                let mut base_mask = 0u64;
                for (pos, i) in rest.iter().enumerate() {
                    if sub >> pos & 1 == 1 {
                        base_mask |= 1u64 << (i - 1);
                    }
                }
                debug_assert_eq!(base_mask & pair_mask, 0);
                faces.push(RhombicFace {
                    rank,
                    base_mask,
                    edge: (a, b),
                });
            }
        }
    }
    Ok(faces)
}

/// Center of the facet associated with the root `k_i - k_j`: the half-root
/// `(k_i - k_j)/2`.
pub fn voronoi_facet_center(rank: LatticeRank, i: usize, j: usize) -> Result<LatticeVector> {
    let h = rank.h();
    if i == j {
        return Err(Error::InvalidInput(
            "facet labels must be a pair of distinct indices".into(),
        ));
    }
    let ki = LatticeVector::basis_vector(rank, Basis::K, i)?;
    let kj = LatticeVector::basis_vector(rank, Basis::K, j)?;
    let _ = h;
    Ok((&ki - &kj).scale(rat::frac(1, 2)))
}

/// Vertices of the facet associated with the root `r = k_i - k_j`: exactly
/// the cell vertices on the supporting hyperplane `(x, r) = 1`, i.e. subset
/// sums with `i` in the subset and `j` outside.
pub fn voronoi_facet_vertices(
    rank: LatticeRank,
    i: usize,
    j: usize,
) -> Result<Vec<LatticeVector>> {
    check_enum_rank(rank)?;
    if i == j {
        return Err(Error::InvalidInput(
            "facet labels must be a pair of distinct indices".into(),
        ));
    }
    let h = rank.h();
    if i < 1 || i > h {
        return Err(Error::IndexOutOfRange {
            index: i,
            valid: format!("facet indices run 1..={h}"),
        });
    }
    if j < 1 || j > h {
        return Err(Error::IndexOutOfRange {
            index: j,
            valid: format!("facet indices run 1..={h}"),
        });
    }
    let full = (1u64 << h) - 1;
    let mut out = Vec::new();
    for mask in 1..full {
        if mask >> (i - 1) & 1 == 1 && mask >> (j - 1) & 1 == 0 {
            out.push(subset_sum(rank, mask));
        }
    }
    Ok(out)
}

/// Orbit `i` of the holes: all sums of `i` distinct `k` vectors
/// (`C(h, i)` points; orbits `0` and `h` are the origin alone).
pub fn delone_orbit(rank: LatticeRank, orbit: usize) -> Result<Vec<LatticeVector>> {
    check_enum_rank(rank)?;
    let h = rank.h();
    if orbit > h {
        return Err(Error::IndexOutOfRange {
            index: orbit,
            valid: format!("orbits run 0..={h}"),
        });
    }
    let full = (1u64 << h) - 1;
    let mut out = Vec::new();
    for mask in 0..=full {
        if mask.count_ones() as usize == orbit {
            out.push(subset_sum(rank, mask));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Vertices of the Delone cell circumscribed at the hole `v`: the
/// translates `v + w` over orbit `h - i`, where `i` is the orbit of `v`.
/// Every returned vertex is a root-lattice point equidistant from `v`.
pub fn delone_cell_at_vertex(v: &LatticeVector) -> Result<Vec<LatticeVector>> {
    let rank = v.rank();
    let set = voronoi_vertex_subset(v)?;
    let co_orbit = rank.h() - set.len();
    let mut out: Vec<LatticeVector> = delone_orbit(rank, co_orbit)?
        .iter()
        .map(|w| v + w)
        .collect();
    out.sort();
    Ok(out)
}

/// Orientation family of a triangular 2-face of the Delone complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriangleFamily {
    /// Edges from the anchor are `k_c - k_j` and `k_c - k_l`
    /// (shared positive index `c`).
    Up,
    /// Edges from the anchor are `k_j - k_c` and `k_l - k_c`
    /// (shared negative index `c`).
    Down,
}

/// A triangular 2-face of the Delone complex, anchored at one of its
/// root-lattice corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeloneFace {
    pub family: TriangleFamily,
    /// The index shared by both anchor edges.
    pub common: usize,
    /// The other two indices, `pair.0 < pair.1`.
    pub pair: (usize, usize),
    vertices: [LatticeVector; 3],
}

impl DeloneFace {
    /// Corners, anchor first.
    pub fn vertices(&self) -> &[LatticeVector; 3] {
        &self.vertices
    }

    /// Corners as a sorted set, the same for all three anchorings.
    pub fn canonical_vertices(&self) -> [LatticeVector; 3] {
        let mut vs = self.vertices.clone();
        vs.sort();
        vs
    }
}

/// All triangular 2-faces of the Delone complex incident to the root-lattice
/// point `p`: `2 (n+1) C(n, 2)` faces, both orientation families. Each
/// distinct triangle shows up at all three of its corners, so collecting
/// faces over several anchors triple-counts until deduplicated by
/// [`DeloneFace::canonical_vertices`].
pub fn delone_two_faces_at(p: &LatticeVector) -> Result<Vec<DeloneFace>> {
    let rank = p.rank();
    let n = rank.n();
    if n < 2 {
        return Err(Error::UnsupportedRank {
            n,
            reason: "triangular faces need rank at least 2".into(),
        });
    }
    if !p.is_root_point() {
        let sum: i64 = p
            .integer_coords()
            .map_err(|_| Error::InvalidInput(format!("{p} is not a lattice point")))?
            .iter()
            .sum();
        return Err(Error::NotARootPoint {
            sum,
            modulus: rank.h_i64(),
        });
    }
    let h = rank.h();
    let k = |i: usize| LatticeVector::basis_vector(rank, Basis::K, i).expect("index in 1..=h");
    let mut faces = Vec::new();
    for common in 1..=h {
        for j in 1..=h {
            if j == common {
                continue;
            }
            for l in j + 1..=h {
                if l == common {
                    continue;
                }
                let kc = k(common);
                let kj = k(j);
                let kl = k(l);
                for family in [TriangleFamily::Up, TriangleFamily::Down] {
                    let (e1, e2) = match family {
                        TriangleFamily::Up => (&kc - &kj, &kc - &kl),
                        TriangleFamily::Down => (&kj - &kc, &kl - &kc),
                    };
                    faces.push(DeloneFace {
                        family,
                        common,
                        pair: (j, l),
                        vertices: [p.clone(), p + &e1, p + &e2],
                    });
                }
            }
        }
    }
    Ok(faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn rank(n: usize) -> LatticeRank {
        LatticeRank::new(n).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut r = 1usize;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn vertex_count_and_norms() {
        for n in [2usize, 3, 4, 6] {
            let h = n + 1;
            let verts = voronoi_vertices(rank(n)).unwrap();
            assert_eq!(verts.len(), (1usize << h) - 2);
            let distinct: BTreeSet<_> = verts.iter().cloned().collect();
            assert_eq!(distinct.len(), verts.len(), "vertices must be distinct");
            for v in &verts {
                let s = voronoi_vertex_subset(v).unwrap().len();
                let expect = rat::frac((s * (h - s)) as i64, h as i64);
                assert_eq!(v.norm_sq(), expect, "norm of orbit-{s} vertex at n = {n}");
            }
        }
    }

    #[test]
    fn vertex_subset_round_trips() {
        let r = rank(4);
        let verts = voronoi_vertices(r).unwrap();
        for v in &verts {
            let set = voronoi_vertex_subset(v).unwrap();
            let mut acc = LatticeVector::zero(r);
            for i in &set {
                acc = &acc + &LatticeVector::basis_vector(r, Basis::K, *i).unwrap();
            }
            assert_eq!(&acc, v);
        }
    }

    #[test]
    fn vertex_subset_rejects_non_vertices() {
        let r = rank(3);
        let two_k1 = LatticeVector::from_integer_coords(r, Basis::K, &[2, 0, 0, 0]).unwrap();
        assert!(matches!(
            voronoi_vertex_subset(&two_k1),
            Err(Error::NotAVoronoiVertex { .. })
        ));
        let origin = LatticeVector::zero(r);
        assert!(voronoi_vertex_subset(&origin).is_err());
    }

    #[test]
    fn two_face_counts() {
        // s ranges over base sizes 1..=n-2.
        for n in [3usize, 4, 5] {
            let h = n + 1;
            let expect: usize = (1..=n - 2).map(|s| binom(h, s) * binom(h - s, 2)).sum();
            let faces = voronoi_two_faces(rank(n)).unwrap();
            assert_eq!(faces.len(), expect, "2-face count at n = {n}");
        }
        assert!(voronoi_two_faces(rank(2)).is_err());
    }

    #[test]
    fn two_face_corners_are_vertices_in_cyclic_order() {
        let faces = voronoi_two_faces(rank(4)).unwrap();
        for f in &faces {
            let [v0, v1, v2, v3] = f.vertices();
            for v in [&v0, &v1, &v2, &v3] {
                voronoi_vertex_subset(v).expect("face corner must be a cell vertex");
            }
            let (a, b) = f.edge();
            let r = f.rank();
            let ka = LatticeVector::basis_vector(r, Basis::K, a).unwrap();
            let kb = LatticeVector::basis_vector(r, Basis::K, b).unwrap();
            assert_eq!(&v1 - &v0, ka);
            assert_eq!(&v2 - &v1, kb);
            assert_eq!(&v2 - &v3, &v1 - &v0);
            assert_eq!(&v3 - &v0, kb);
        }
    }

    #[test]
    fn rank_three_two_faces_are_the_facets() {
        // At rank 3 the 2-faces are facets; their centers are the half-roots.
        let r = rank(3);
        let faces = voronoi_two_faces(r).unwrap();
        let centers: BTreeSet<LatticeVector> = faces.iter().map(|f| f.center()).collect();
        let mut half_roots = BTreeSet::new();
        for i in 1..=4 {
            for j in 1..=4 {
                if i != j {
                    half_roots.insert(voronoi_facet_center(r, i, j).unwrap());
                }
            }
        }
        assert_eq!(centers, half_roots);
    }

    #[test]
    fn facet_vertices_average_to_the_center() {
        for n in [3usize, 4, 5] {
            let r = rank(n);
            let verts = voronoi_facet_vertices(r, 2, 4).unwrap();
            assert_eq!(verts.len(), 1usize << (n - 1));
            let mut acc = LatticeVector::zero(r);
            for v in &verts {
                acc = &acc + v;
            }
            let centroid = acc.scale(rat::frac(1, verts.len() as i64));
            assert_eq!(centroid, voronoi_facet_center(r, 2, 4).unwrap());
        }
    }

    #[test]
    fn facet_supports_the_cell() {
        // (x, r) <= 1 over all vertices, with equality exactly on the facet.
        let r = rank(4);
        let root = &LatticeVector::basis_vector(r, Basis::K, 2).unwrap()
            - &LatticeVector::basis_vector(r, Basis::K, 4).unwrap();
        let on_facet: BTreeSet<LatticeVector> =
            voronoi_facet_vertices(r, 2, 4).unwrap().into_iter().collect();
        for v in voronoi_vertices(r).unwrap() {
            let ip = v.inner(&root);
            assert!(ip <= rat::int(1));
            assert_eq!(ip == rat::int(1), on_facet.contains(&v));
        }
    }

    #[test]
    fn orbit_counts_and_levels() {
        let r = rank(4);
        for orbit in 0..=5usize {
            let pts = delone_orbit(r, orbit).unwrap();
            assert_eq!(pts.len(), binom(5, orbit), "orbit {orbit}");
            for p in &pts {
                assert_eq!(p.level().unwrap(), (orbit % 5) as i64);
            }
        }
        assert!(delone_orbit(r, 6).is_err());
    }

    #[test]
    fn delone_cells_have_the_advertised_shape() {
        // Rank 2, orbit 1: a triangle of root points around each deep hole.
        let r2 = rank(2);
        let hole = LatticeVector::basis_vector(r2, Basis::K, 1).unwrap();
        let tri = delone_cell_at_vertex(&hole).unwrap();
        assert_eq!(tri.len(), 3);
        assert!(tri.iter().any(|v| v.is_zero()));
        // Rank 3: orbit 1 and 3 give tetrahedra, orbit 2 gives octahedra.
        let r3 = rank(3);
        for (orbit, size) in [(1usize, 4usize), (2, 6), (3, 4)] {
            let v = delone_orbit(r3, orbit).unwrap().pop().unwrap();
            let cell = delone_cell_at_vertex(&v).unwrap();
            assert_eq!(cell.len(), size, "orbit {orbit}");
            let rad = rat::frac((orbit * (4 - orbit)) as i64, 4);
            for w in &cell {
                assert!(w.is_root_point());
                assert_eq!((w - &v).norm_sq(), rad, "equidistant from the hole");
            }
        }
    }

    #[test]
    fn triangular_faces_counts_and_geometry() {
        for n in [2usize, 3, 4] {
            let r = rank(n);
            let p = LatticeVector::zero(r);
            let faces = delone_two_faces_at(&p).unwrap();
            let expect = 2 * (n + 1) * binom(n, 2);
            assert_eq!(faces.len(), expect, "face count at n = {n}");
            let mut seen = BTreeSet::new();
            for f in &faces {
                assert_eq!(&f.vertices()[0], &p);
                for v in f.vertices() {
                    assert!(v.is_root_point());
                }
                for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                    let edge = &f.vertices()[a] - &f.vertices()[b];
                    assert_eq!(edge.norm_sq(), rat::int(2), "root-length edges");
                }
                assert!(seen.insert((f.family, f.canonical_vertices())));
            }
        }
    }

    #[test]
    fn triangular_faces_require_root_anchor() {
        let r = rank(3);
        let weight = LatticeVector::basis_vector(r, Basis::Omega, 1).unwrap();
        assert!(matches!(
            delone_two_faces_at(&weight),
            Err(Error::NotARootPoint { .. })
        ));
    }

    #[test]
    fn each_triangle_recurs_at_its_three_corners() {
        let r = rank(3);
        let p = LatticeVector::zero(r);
        let faces = delone_two_faces_at(&p).unwrap();
        let f = &faces[0];
        let target = f.canonical_vertices();
        let mut hits = 0;
        for corner in f.vertices() {
            for g in delone_two_faces_at(corner).unwrap() {
                if g.canonical_vertices() == target {
                    hits += 1;
                    assert_eq!(g.family, f.family);
                }
            }
        }
        assert_eq!(hits, 3);
    }
}
