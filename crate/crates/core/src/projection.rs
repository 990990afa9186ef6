//! Projection onto the Coxeter plane and its orthogonal complement.
//!
//! The frame is built from the discrete Fourier modes of the cyclic
//! coordinate shift. For each speed `m` in `1..=floor((h-1)/2)` the pair of
//! zero-sum ambient tuples
//!
//! ```text
//! c_m = sqrt(2/h) (cos(2 pi j m / h))_{j=1..h}
//! s_m = sqrt(2/h) (sin(2 pi j m / h))_{j=1..h}
//! ```
//!
//! spans a plane on which the Coxeter element acts as rotation by
//! `2 pi m / h`; for even `h` the alternating tuple `(1/sqrt(h)) ((-1)^j)_j`
//! contributes one more direction on which it acts as `-1`. Together these
//! `n` orthonormal vectors span the lattice hyperplane. The `m = 1` plane is
//! the Coxeter plane `E_par`; the rest form `E_perp`.
//!
//! With this frame, `k_j` projects onto `E_par` at angle `2 pi j / h` from
//! the positive x-axis (so `k_h` lands on the axis itself) with length
//! `sqrt(2/h)`, reported by [`CoxeterFrame::scale`].
//!
//! Projections are plain dot products against the stored rows: adding a
//! constant to every coordinate leaves them unchanged because each row sums
//! to zero, so canonical K-coordinates can be dotted directly.

use crate::error::{Error, Result};
use crate::lattice::{AmbientVector, LatticeRank, LatticeVector};
use crate::rat;
use std::f64::consts::PI;
use std::ops::{Add, Neg, Sub};

/// A point of the Coxeter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product; positive when `other` lies
    /// counterclockwise of `self`.
    pub fn cross(&self, other: &Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn rotate(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
        }
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }
}

impl Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, rhs: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, rhs: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint::new(-self.x, -self.y)
    }
}

/// How the Coxeter element acts on one block of perpendicular coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerpBlock {
    /// Two consecutive coordinates forming a plane rotated by `2 pi m / h`.
    Rotation { speed: usize },
    /// A single coordinate negated by the shift (even `h` only).
    SignFlip,
}

/// Orthonormal frame splitting the lattice hyperplane into the Coxeter plane
/// and its complement.
#[derive(Debug, Clone)]
pub struct CoxeterFrame {
    rank: LatticeRank,
    scale: f64,
    par_rows: [Vec<f64>; 2],
    perp_rows: Vec<Vec<f64>>,
    perp_blocks: Vec<PerpBlock>,
}

impl CoxeterFrame {
    /// Build the frame for rank `n >= 2`.
    pub fn new(rank: LatticeRank) -> Result<Self> {
        let n = rank.n();
        if n < 2 {
            return Err(Error::UnsupportedRank {
                n,
                reason: "the Coxeter plane needs rank at least 2".into(),
            });
        }
        let h = rank.h();
        let hf = h as f64;
        let amp = (2.0 / hf).sqrt();
        let row_pair = |m: usize| -> (Vec<f64>, Vec<f64>) {
            let mut cos_row = Vec::with_capacity(h);
            let mut sin_row = Vec::with_capacity(h);
            for j in 1..=h {
                let angle = 2.0 * PI * (j * m) as f64 / hf;
                cos_row.push(amp * angle.cos());
                sin_row.push(amp * angle.sin());
            }
            (cos_row, sin_row)
        };

        let (par_cos, par_sin) = row_pair(1);
        let mut perp_rows = Vec::new();
        let mut perp_blocks = Vec::new();
        for m in 2..=(h - 1) / 2 {
            let (c, s) = row_pair(m);
            perp_rows.push(c);
            perp_rows.push(s);
            perp_blocks.push(PerpBlock::Rotation { speed: m });
        }
        if h % 2 == 0 {
            let inv = 1.0 / hf.sqrt();
            let alt: Vec<f64> = (1..=h)
                .map(|j| if j % 2 == 0 { inv } else { -inv })
                .collect();
            perp_rows.push(alt);
            perp_blocks.push(PerpBlock::SignFlip);
        }
        debug_assert_eq!(perp_rows.len(), n - 2);

        Ok(Self {
            rank,
            scale: amp,
            par_rows: [par_cos, par_sin],
            perp_rows,
            perp_blocks,
        })
    }

    pub fn rank(&self) -> LatticeRank {
        self.rank
    }

    /// Length of each projected `k` vector in the Coxeter plane,
    /// `sqrt(2/h)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Dimension of the perpendicular space, `n - 2`.
    pub fn perp_dim(&self) -> usize {
        self.perp_rows.len()
    }

    /// The two rows spanning the Coxeter plane (each of length `h`).
    pub fn par_rows(&self) -> &[Vec<f64>; 2] {
        &self.par_rows
    }

    /// The `n - 2` rows spanning the perpendicular space.
    pub fn perp_rows(&self) -> &[Vec<f64>] {
        &self.perp_rows
    }

    /// Block structure of the perpendicular coordinates under the Coxeter
    /// element, in row order.
    pub fn perp_blocks(&self) -> &[PerpBlock] {
        &self.perp_blocks
    }

    fn dot_row(row: &[f64], v: &LatticeVector) -> f64 {
        v.canonical()
            .iter()
            .zip(row)
            .map(|(c, r)| rat::to_f64(*c) * r)
            .sum()
    }

    /// Orthogonal projection onto the Coxeter plane.
    pub fn project_parallel(&self, v: &LatticeVector) -> PlanePoint {
        assert_eq!(self.rank, v.rank(), "frame and vector ranks must match");
        PlanePoint::new(
            Self::dot_row(&self.par_rows[0], v),
            Self::dot_row(&self.par_rows[1], v),
        )
    }

    /// Orthogonal projection onto the perpendicular space (length `n - 2`).
    pub fn project_perp(&self, v: &LatticeVector) -> Vec<f64> {
        assert_eq!(self.rank, v.rank(), "frame and vector ranks must match");
        self.perp_rows
            .iter()
            .map(|row| Self::dot_row(row, v))
            .collect()
    }

    pub fn perp_norm(&self, v: &LatticeVector) -> f64 {
        self.project_perp(v)
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// Project an ambient point; its diagonal component maps to zero.
    pub fn project_parallel_ambient(&self, a: &AmbientVector) -> PlanePoint {
        self.project_parallel(&a.hyperplane_part())
    }
}

/// Eigenvalues and eigenvectors of the Cartan matrix.
///
/// `eigenvalues[i-1] = 2 + 2 cos(i pi / h)` pairs with the column
/// `x_i[j-1] = (-1)^(j+1) sin(i j pi / h)`, for `i, j = 1..n`.
#[derive(Debug, Clone)]
pub struct CartanEigensystem {
    rank: LatticeRank,
    pub eigenvalues: Vec<f64>,
    /// `columns[i]` is the eigenvector for `eigenvalues[i]`.
    pub columns: Vec<Vec<f64>>,
}

pub fn cartan_eigensystem(rank: LatticeRank) -> CartanEigensystem {
    let n = rank.n();
    let hf = rank.h() as f64;
    let mut eigenvalues = Vec::with_capacity(n);
    let mut columns = Vec::with_capacity(n);
    for i in 1..=n {
        eigenvalues.push(2.0 + 2.0 * (i as f64 * PI / hf).cos());
        let col: Vec<f64> = (1..=n)
            .map(|j| {
                let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
                sign * ((i * j) as f64 * PI / hf).sin()
            })
            .collect();
        columns.push(col);
    }
    CartanEigensystem {
        rank,
        eigenvalues,
        columns,
    }
}

impl CartanEigensystem {
    pub fn rank(&self) -> LatticeRank {
        self.rank
    }

    /// Largest entry of `|C x - lambda x|` over all pairs.
    pub fn residual(&self) -> f64 {
        let cartan = crate::lattice::GramData::new(self.rank).cartan_matrix();
        let n = self.rank.n();
        let mut worst: f64 = 0.0;
        for (lambda, col) in self.eigenvalues.iter().zip(&self.columns) {
            for r in 0..n {
                let cx: f64 = (0..n).map(|c| cartan[r][c] as f64 * col[c]).sum();
                worst = worst.max((cx - lambda * col[r]).abs());
            }
        }
        worst
    }

    /// Largest entry of `|Xhat^T Xhat - I|` after normalizing each column.
    pub fn orthonormality_defect(&self) -> f64 {
        let unit: Vec<Vec<f64>> = self
            .columns
            .iter()
            .map(|col| {
                let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
                col.iter().map(|x| x / norm).collect()
            })
            .collect();
        let mut worst: f64 = 0.0;
        for (a, ca) in unit.iter().enumerate() {
            for (b, cb) in unit.iter().enumerate() {
                let dot: f64 = ca.iter().zip(cb).map(|(x, y)| x * y).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).abs());
            }
        }
        worst
    }
}

/// True iff the cyclic lattice symmetry, seen through the frame, acts on
/// the parallel plane as rotation by `2 pi / h` within 1e-9. Checking the
/// generators `k_1 ..= k_h` covers every lattice vector by linearity.
pub fn coxeter_rotation_check(frame: &CoxeterFrame) -> bool {
    let rank = frame.rank();
    let h = rank.h();
    let angle = 2.0 * PI / h as f64;
    for j in 1..=h {
        let k = match LatticeVector::basis_vector(rank, crate::lattice::Basis::K, j) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let expected = frame.project_parallel(&k).rotate(angle);
        let actual = frame.project_parallel(&k.coxeter_shift());
        if expected.dist(&actual) > 1e-9 {
            return false;
        }
    }
    true
}
