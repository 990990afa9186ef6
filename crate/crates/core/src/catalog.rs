//! Prototile catalog: congruence classes of the projected tiles.
//!
//! Rhombi come from the 2-faces of the Voronoi cell. A face spanned by
//! `k_a, k_b` projects to a rhombus whose shape depends only on the
//! circular distance `d = (a - b) mod h`: folding `d` with `h - d` picks
//! the representative `m1 = min(d, h - d)`, and for even `h` the angle pair
//! `{2 pi m1 / h, pi - 2 pi m1 / h}` additionally identifies `m1` with
//! `h/2 - m1`. The surviving label `m` has angle pair
//! `(2 pi m / h, pi - 2 pi m / h)`; `m = 0` (even `h`, antipodal pair)
//! degenerates to a segment and is excluded from the catalog.
//!
//! Triangles come from the 2-faces of the Delone complex. A triangle on
//! direction indices `{i, j, l}` is inscribed in a circle of radius equal
//! to the frame scale, so its shape is the partition of `h` given by the
//! three cyclic gaps of the index set, with angles `pi t / h` opposite
//! edges `2 sin(pi t / h)` (unit circumradius).
//!
//! At `h = 5` the two triangle classes reassemble into the dart and kite
//! pair, reported in unit-long-edge normalization.

use crate::error::{Error, Result};
use crate::lattice::LatticeRank;
use crate::projection::PlanePoint;
use crate::rat;
use serde::Serialize;
use std::f64::consts::PI;

/// Congruence class of a projected rhombus: angle pair
/// `(2 pi m / h, pi - 2 pi m / h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RhombusClass {
    h: usize,
    m: usize,
}

impl RhombusClass {
    pub fn h(&self) -> usize {
        self.h
    }

    /// Class label: `1 <= m <= (h-1)/2` for odd `h`, `1 <= m <= h/4` for
    /// even `h`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Interior angle pair in radians, `(2 pi m / h, pi - 2 pi m / h)`.
    pub fn angles(&self) -> (f64, f64) {
        let a = 2.0 * PI * self.m as f64 / self.h as f64;
        (a, PI - a)
    }

    pub fn angles_deg(&self) -> (f64, f64) {
        let (a, b) = self.angles();
        (a.to_degrees(), b.to_degrees())
    }

    /// Angles as multiples of pi, exact: `(2m/h, (h-2m)/h)`.
    pub fn angles_pi(&self) -> (rat::Rat, rat::Rat) {
        let a = rat::frac(2 * self.m as i64, self.h as i64);
        (a, rat::int(1) - a)
    }

    /// True when the angle pair is `(pi/2, pi/2)`, i.e. `h = 4m`.
    pub fn is_square(&self) -> bool {
        self.h == 4 * self.m
    }
}

/// Result of classifying a direction pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhombusClassification {
    Proper(RhombusClass),
    /// Antipodal directions (even `h`, `|i - j| = h/2`): the projected face
    /// collapses to a segment.
    Degenerate,
}

/// Classify the rhombus spanned by directions `k_i, k_j`.
pub fn classify_rhombus(rank: LatticeRank, i: usize, j: usize) -> Result<RhombusClassification> {
    let h = rank.h();
    for idx in [i, j] {
        if idx < 1 || idx > h {
            return Err(Error::IndexOutOfRange {
                index: idx,
                valid: format!("direction indices run 1..={h}"),
            });
        }
    }
    if i == j {
        return Err(Error::InvalidInput(
            "a rhombus needs two distinct directions".into(),
        ));
    }
    let d = (i as i64 - j as i64).rem_euclid(h as i64) as usize;
    let m1 = d.min(h - d);
    let m = if h % 2 == 0 { m1.min(h / 2 - m1) } else { m1 };
    if m == 0 {
        Ok(RhombusClassification::Degenerate)
    } else {
        Ok(RhombusClassification::Proper(RhombusClass { h, m }))
    }
}

/// All rhombus classes at this rank, by ascending label. Defined for
/// `n >= 3`, where the Voronoi cell first has rhombic 2-faces.
pub fn rhombic_prototiles(rank: LatticeRank) -> Result<Vec<RhombusClass>> {
    let n = rank.n();
    if n < 3 {
        return Err(Error::UnsupportedRank {
            n,
            reason: "rhombic prototiles exist from rank 3 on".into(),
        });
    }
    let h = rank.h();
    let top = if h % 2 == 0 { h / 4 } else { (h - 1) / 2 };
    Ok((1..=top).map(|m| RhombusClass { h, m }).collect())
}

/// Congruence class of a projected Delone triangle: a partition of `h`
/// into three positive parts (the cyclic gaps of its direction indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleClass {
    h: usize,
    parts: (usize, usize, usize),
}

impl TriangleClass {
    pub fn h(&self) -> usize {
        self.h
    }

    /// The partition, ascending; parts sum to `h`.
    pub fn parts(&self) -> (usize, usize, usize) {
        self.parts
    }

    /// Interior angles `pi t / h` in part order.
    pub fn angles(&self) -> [f64; 3] {
        let (a, b, c) = self.parts;
        [a, b, c].map(|t| PI * t as f64 / self.h as f64)
    }

    pub fn angles_deg(&self) -> [f64; 3] {
        self.angles().map(f64::to_degrees)
    }

    /// Edge lengths `2 sin(pi t / h)` at unit circumradius; entry `i` is
    /// the edge opposite `angles()[i]`.
    pub fn edge_lengths(&self) -> [f64; 3] {
        let (a, b, c) = self.parts;
        [a, b, c].map(|t| 2.0 * (PI * t as f64 / self.h as f64).sin())
    }
}

/// Classify the triangle on three distinct direction indices.
pub fn classify_triangle(rank: LatticeRank, i: usize, j: usize, l: usize) -> Result<TriangleClass> {
    let h = rank.h();
    for idx in [i, j, l] {
        if idx < 1 || idx > h {
            return Err(Error::IndexOutOfRange {
                index: idx,
                valid: format!("direction indices run 1..={h}"),
            });
        }
    }
    if i == j || j == l || i == l {
        return Err(Error::InvalidInput(
            "a triangle needs three distinct directions".into(),
        ));
    }
    let mut xs = [i % h, j % h, l % h];
    xs.sort_unstable();
    let mut parts = [xs[1] - xs[0], xs[2] - xs[1], h - xs[2] + xs[0]];
    parts.sort_unstable();
    Ok(TriangleClass {
        h,
        parts: (parts[0], parts[1], parts[2]),
    })
}

/// All triangle classes at this rank: the partitions of `h` into three
/// positive parts, lexicographically ascending. Defined for `n >= 2`.
pub fn triangular_prototiles(rank: LatticeRank) -> Result<Vec<TriangleClass>> {
    let n = rank.n();
    if n < 2 {
        return Err(Error::UnsupportedRank {
            n,
            reason: "triangular prototiles exist from rank 2 on".into(),
        });
    }
    let h = rank.h();
    let mut out = Vec::new();
    for a in 1..=h / 3 {
        for b in a..=(h - a) / 2 {
            let c = h - a - b;
            debug_assert!(c >= b);
            out.push(TriangleClass { h, parts: (a, b, c) });
        }
    }
    Ok(out)
}

/// A quadrilateral prototile assembled from two congruent triangles,
/// in unit-long-edge normalization.
#[derive(Debug, Clone)]
pub struct QuadPrototile {
    pub name: &'static str,
    /// Corners in cyclic order, mirror-symmetric about the x-axis.
    pub vertices: [PlanePoint; 4],
    /// Interior angle at each corner, degrees (one may be reflex).
    pub angles_deg: [f64; 4],
    /// Edge `i` joins corner `i` to corner `i + 1 mod 4`.
    pub edge_lengths: [f64; 4],
    /// The triangle class two copies of which assemble the tile.
    pub half: TriangleClass,
}

/// The dart and kite pair.
#[derive(Debug, Clone)]
pub struct DartKitePair {
    pub kite: QuadPrototile,
    pub dart: QuadPrototile,
}

/// Assemble the dart and kite from the two triangle classes at `h = 5`.
/// The kite is two acute `(1,2,2)` triangles joined along a long edge; the
/// dart is two obtuse `(1,1,3)` triangles joined along a short edge. Both
/// have edge lengths `{1/phi, 1}` after normalizing the long edge to 1.
pub fn dart_and_kite(rank: LatticeRank) -> Result<DartKitePair> {
    let h = rank.h();
    if h != 5 {
        return Err(Error::UnsupportedRank {
            n: rank.n(),
            reason: "the dart and kite pair exists at h = 5 only".into(),
        });
    }
    let deg36 = PI / 5.0;
    let short = (PI / 5.0).sin() / (2.0 * PI / 5.0).sin();
    let c36 = deg36.cos();
    let s36 = deg36.sin();

    let kite = QuadPrototile {
        name: "kite",
        vertices: [
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(c36, s36),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(c36, -s36),
        ],
        angles_deg: [72.0, 72.0, 144.0, 72.0],
        edge_lengths: [1.0, short, short, 1.0],
        half: classify_triangle(rank, 1, 2, 4)?,
    };
    debug_assert_eq!(kite.half.parts(), (1, 2, 2));

    let dart = QuadPrototile {
        name: "dart",
        vertices: [
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(c36, s36),
            PlanePoint::new(short, 0.0),
            PlanePoint::new(c36, -s36),
        ],
        angles_deg: [72.0, 36.0, 216.0, 36.0],
        edge_lengths: [1.0, short, short, 1.0],
        half: classify_triangle(rank, 1, 2, 3)?,
    };
    debug_assert_eq!(dart.half.parts(), (1, 1, 3));

    Ok(DartKitePair { kite, dart })
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Exact angle format for the machine output: `"num/den of pi"`, reduced.
fn pi_multiple(r: rat::Rat) -> String {
    format!("{}/{} of pi", r.numer(), r.denom())
}

/// JSON shape for one rhombus class.
#[derive(Debug, Serialize)]
pub struct RhombusJson {
    pub m: usize,
    pub angles_deg: [f64; 2],
    /// Angles as exact rational multiples of pi, `"num/den of pi"`.
    pub angles_pi: [String; 2],
    pub is_square: bool,
}

/// JSON shape for one triangle class.
#[derive(Debug, Serialize)]
pub struct TriangleJson {
    pub parts: [usize; 3],
    pub angles_deg: [f64; 3],
    /// Angles as exact rational multiples of pi, `"num/den of pi"`.
    pub angles_pi: [String; 3],
    pub edge_lengths: [f64; 3],
}

/// JSON catalog for one rank.
#[derive(Debug, Serialize)]
pub struct CatalogJson {
    pub n: usize,
    pub h: usize,
    pub rhombi: Vec<RhombusJson>,
    pub triangles: Vec<TriangleJson>,
}

/// Full catalog for serialization; angles and lengths are rounded to six
/// decimals. The rhombus list is empty at rank 2.
pub fn catalog_json(rank: LatticeRank) -> Result<CatalogJson> {
    let rhombi = if rank.n() >= 3 {
        rhombic_prototiles(rank)?
            .iter()
            .map(|c| {
                let (a, b) = c.angles_deg();
                let (pa, pb) = c.angles_pi();
                RhombusJson {
                    m: c.m(),
                    angles_deg: [round6(a), round6(b)],
                    angles_pi: [pi_multiple(pa), pi_multiple(pb)],
                    is_square: c.is_square(),
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let triangles = triangular_prototiles(rank)?
        .iter()
        .map(|c| {
            let (a, b, cc) = c.parts();
            TriangleJson {
                parts: [a, b, cc],
                angles_deg: c.angles_deg().map(round6),
                angles_pi: [a, b, cc]
                    .map(|t| pi_multiple(rat::Rat::new(t as i64, rank.h() as i64))),
                edge_lengths: c.edge_lengths().map(round6),
            }
        })
        .collect();
    Ok(CatalogJson {
        n: rank.n(),
        h: rank.h(),
        rhombi,
        triangles,
    })
}
