//! Cross-checks between the combinatorial face enumerator and an
//! independent exact convex hull built over the same vertex set. The hull
//! is the ground truth; the enumerator has to reproduce its 2-skeleton
//! exactly before anything downstream leans on it.

use std::collections::{BTreeMap, BTreeSet};

use coxtile_core::cells;
use coxtile_core::hull::HullOracle;
use coxtile_core::{LatticeRank, LatticeVector};

fn rank(n: usize) -> LatticeRank {
    LatticeRank::new(n).unwrap()
}

struct FaceSets {
    from_hull: BTreeSet<BTreeSet<usize>>,
    from_enumerator: BTreeSet<BTreeSet<usize>>,
    oracle: HullOracle,
    vertex_count: usize,
}

fn face_sets(n: usize) -> FaceSets {
    let r = rank(n);
    let verts = cells::voronoi_vertices(r).unwrap();
    let index: BTreeMap<LatticeVector, usize> = verts
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();

    let oracle = HullOracle::build_from_lattice(&verts).unwrap();
    let from_hull: BTreeSet<BTreeSet<usize>> = oracle
        .faces_of_dim(2)
        .into_iter()
        .map(|f| f.into_iter().collect())
        .collect();

    let from_enumerator: BTreeSet<BTreeSet<usize>> = cells::voronoi_two_faces(r)
        .unwrap()
        .iter()
        .map(|f| {
            f.vertices()
                .iter()
                .map(|v| *index.get(v).expect("face corner is a listed vertex"))
                .collect()
        })
        .collect();

    FaceSets {
        from_hull,
        from_enumerator,
        oracle,
        vertex_count: verts.len(),
    }
}

#[test]
fn rank_three_two_faces_match_the_hull() {
    let sets = face_sets(3);
    assert_eq!(sets.oracle.f_vector(), vec![14, 24, 12]);
    assert_eq!(sets.from_hull.len(), 12);
    assert_eq!(sets.from_hull, sets.from_enumerator);
    for i in 0..sets.vertex_count {
        assert!(sets.oracle.is_extreme(i), "vertex {i} is not extreme");
    }
}

#[test]
fn rank_four_two_faces_match_the_hull() {
    let sets = face_sets(4);
    assert_eq!(sets.vertex_count, 30);
    assert_eq!(sets.oracle.facet_count(), 20);
    assert_eq!(sets.from_hull.len(), 60);
    assert_eq!(sets.from_hull, sets.from_enumerator);
}

#[test]
fn rank_five_two_faces_match_the_hull() {
    let sets = face_sets(5);
    assert_eq!(sets.vertex_count, 62);
    assert_eq!(sets.oracle.facet_count(), 30);
    assert_eq!(sets.from_hull.len(), 210);
    assert_eq!(sets.from_hull, sets.from_enumerator);
}

#[test]
fn every_two_face_is_planar_in_the_hull_sense() {
    // Each enumerated face has exactly four corners, and those corners are
    // extreme points of the hull at both checked ranks.
    for n in [3usize, 4] {
        let sets = face_sets(n);
        for face in &sets.from_enumerator {
            assert_eq!(face.len(), 4, "n = {n}");
            for &i in face {
                assert!(sets.oracle.is_extreme(i));
            }
        }
    }
}
