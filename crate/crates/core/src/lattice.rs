//! Vectors of the A_n lattice in four coordinate systems.
//!
//! Ambient picture: `R^h` (with `h = n + 1`) carries an orthonormal basis
//! `l_1..l_h` and the diagonal vector `l_0 = l_1 + ... + l_h`. The lattice
//! lives in the hyperplane orthogonal to `l_0`, spanned by the projections
//! `k_i = l_i - l_0/h`, which satisfy `k_1 + ... + k_h = 0` and
//! `(k_i, k_j) = delta_ij - 1/h`.
//!
//! Coordinate systems:
//! * `K`: coefficients on `k_1..k_h`, unique once the last coefficient is
//!   pinned to zero (the canonical form stored internally);
//! * `Alpha`: simple roots `alpha_i = k_i - k_{i+1}`, `i = 1..n`;
//! * `Omega`: fundamental weights `omega_i = k_1 + ... + k_i`, `i = 1..n`;
//! * `L`: ambient coordinates constrained to sum to zero.
//!
//! Integer canonical K-coordinates characterize the weight lattice; a
//! coordinate sum divisible by `h` additionally characterizes the root
//! lattice, and that sum mod `h` grades the weight lattice into its `h`
//! congruence classes.

use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Rank bundle for A_n: the rank `n` and the Coxeter number `h = n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeRank {
    n: usize,
}

/// Largest rank accepted by [`LatticeRank::new`]. Keeps subset enumerations
/// and `i64` coordinate arithmetic comfortably in range.
pub const MAX_RANK: usize = 30;

impl LatticeRank {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 || n > MAX_RANK {
            return Err(Error::UnsupportedRank {
                n,
                reason: format!("rank must lie in 1..={MAX_RANK}"),
            });
        }
        Ok(Self { n })
    }

    /// Rank of the lattice.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Coxeter number `h = n + 1`, also the number of `k` vectors and the
    /// ambient dimension.
    pub fn h(&self) -> usize {
        self.n + 1
    }

    pub fn h_i64(&self) -> i64 {
        (self.n + 1) as i64
    }
}

impl fmt::Display for LatticeRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}", self.n)
    }
}

/// The four coordinate systems understood by [`LatticeVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Coefficients on `k_1..k_h` (length `h`; canonical form has last = 0).
    K,
    /// Coefficients on the simple roots `alpha_1..alpha_n` (length `n`).
    Alpha,
    /// Coefficients on the fundamental weights `omega_1..omega_n` (length `n`).
    Omega,
    /// Ambient coordinates on `l_1..l_h` (length `h`, must sum to zero).
    L,
}

/// A vector of the hyperplane `sum = 0`, stored as canonical K-coordinates:
/// length `h`, last entry exactly zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    rank: LatticeRank,
    coords: Vec<Rat>,
}

impl LatticeVector {
    pub fn zero(rank: LatticeRank) -> Self {
        Self {
            rank,
            coords: vec![Rat::zero(); rank.h()],
        }
    }

    /// Build a vector from coordinates in any basis. Lengths: `K` and `L`
    /// take `h` entries (`L` must sum to zero), `Alpha` and `Omega` take `n`.
    pub fn from_coords(rank: LatticeRank, basis: Basis, coords: &[Rat]) -> Result<Self> {
        let n = rank.n();
        let h = rank.h();
        match basis {
            Basis::K => {
                if coords.len() != h {
                    return Err(Error::RankMismatch {
                        expected: h,
                        got: coords.len(),
                    });
                }
                Ok(Self::from_raw_k(rank, coords.to_vec()))
            }
            Basis::L => {
                if coords.len() != h {
                    return Err(Error::RankMismatch {
                        expected: h,
                        got: coords.len(),
                    });
                }
                if !rat::sum(coords).is_zero() {
                    return Err(Error::InvalidInput(
                        "ambient coordinates must sum to zero".into(),
                    ));
                }
                // With a zero sum, the l-coordinates double as k-coefficients.
                Ok(Self::from_raw_k(rank, coords.to_vec()))
            }
            Basis::Alpha => {
                if coords.len() != n {
                    return Err(Error::RankMismatch {
                        expected: n,
                        got: coords.len(),
                    });
                }
                // alpha_j = k_j - k_{j+1}, so k_j picks up a_j - a_{j-1}.
                let mut raw = vec![Rat::zero(); h];
                for j in 0..h {
                    let a_j = if j < n { coords[j] } else { Rat::zero() };
                    let a_prev = if j > 0 { coords[j - 1] } else { Rat::zero() };
                    raw[j] = a_j - a_prev;
                }
                Ok(Self::from_raw_k(rank, raw))
            }
            Basis::Omega => {
                if coords.len() != n {
                    return Err(Error::RankMismatch {
                        expected: n,
                        got: coords.len(),
                    });
                }
                // omega_i = k_1 + ... + k_i, so k_j collects the tail sum.
                let mut raw = vec![Rat::zero(); h];
                let mut tail = Rat::zero();
                for j in (0..n).rev() {
                    tail = tail + coords[j];
                    raw[j] = tail;
                }
                Ok(Self::from_raw_k(rank, raw))
            }
        }
    }

    pub fn from_integer_coords(rank: LatticeRank, basis: Basis, coords: &[i64]) -> Result<Self> {
        let rats: Vec<Rat> = coords.iter().map(|&c| rat::int(c)).collect();
        Self::from_coords(rank, basis, &rats)
    }

    /// `k_i`, `alpha_i`, or `omega_i` (1-based index, as in the subscripts).
    pub fn basis_vector(rank: LatticeRank, basis: Basis, index: usize) -> Result<Self> {
        let n = rank.n();
        let h = rank.h();
        let (len, name) = match basis {
            Basis::K => (h, "k"),
            Basis::Alpha => (n, "alpha"),
            Basis::Omega => (n, "omega"),
            Basis::L => {
                return Err(Error::InvalidInput(
                    "l basis vectors do not lie in the lattice hyperplane".into(),
                ))
            }
        };
        if index < 1 || index > len {
            return Err(Error::IndexOutOfRange {
                index,
                valid: format!("{name} indices run 1..={len}"),
            });
        }
        let mut coords = vec![Rat::zero(); len];
        coords[index - 1] = rat::int(1);
        Self::from_coords(rank, basis, &coords)
    }

    fn from_raw_k(rank: LatticeRank, mut raw: Vec<Rat>) -> Self {
        let last = raw[rank.h() - 1];
        if !last.is_zero() {
            for c in raw.iter_mut() {
                *c = *c - last;
            }
        }
        Self { rank, coords: raw }
    }

    pub fn rank(&self) -> LatticeRank {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        rat::all_zero(&self.coords)
    }

    /// Canonical K-coordinates (length `h`, last entry zero).
    pub fn canonical(&self) -> &[Rat] {
        &self.coords
    }

    /// Coordinates in the requested basis. `Alpha` and `Omega` coordinates
    /// are rational for a general vector and integral exactly on the root and
    /// weight lattices respectively.
    pub fn coords(&self, basis: Basis) -> Vec<Rat> {
        let n = self.rank.n();
        let h = self.rank.h_i64();
        let c = &self.coords;
        match basis {
            Basis::K => c.clone(),
            Basis::L => {
                let mean = rat::sum(c) / rat::int(h);
                c.iter().map(|&ci| ci - mean).collect()
            }
            Basis::Omega => (0..n).map(|i| c[i] - c[i + 1]).collect(),
            Basis::Alpha => {
                let total = rat::sum(c);
                let mut out = Vec::with_capacity(n);
                let mut prefix = Rat::zero();
                for j in 0..n {
                    prefix = prefix + c[j];
                    out.push(prefix - rat::int((j + 1) as i64) * total / rat::int(h));
                }
                out
            }
        }
    }

    /// Inner product inherited from the ambient Euclidean structure:
    /// `sum c_i d_i - (sum c)(sum d)/h` on K-coordinates.
    pub fn inner(&self, other: &Self) -> Rat {
        assert_eq!(
            self.rank, other.rank,
            "inner product requires matching ranks"
        );
        let mut dot = Rat::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            dot = dot + *a * *b;
        }
        let sa = rat::sum(&self.coords);
        let sb = rat::sum(&other.coords);
        dot - sa * sb / rat::int(self.rank.h_i64())
    }

    pub fn norm_sq(&self) -> Rat {
        self.inner(self)
    }

    pub fn scale(&self, s: Rat) -> Self {
        Self {
            rank: self.rank,
            coords: self.coords.iter().map(|&c| c * s).collect(),
        }
    }

    /// True when all canonical K-coordinates are integers (the weight
    /// lattice).
    pub fn is_weight_point(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// True when additionally the coordinate sum is divisible by `h` (the
    /// root lattice).
    pub fn is_root_point(&self) -> bool {
        self.is_weight_point() && rat::int_mod(rat::sum(&self.coords), self.rank.h_i64()) == 0
    }

    /// Congruence class of a weight point: canonical coordinate sum mod `h`.
    /// Zero exactly on the root lattice.
    pub fn level(&self) -> Result<i64> {
        if !self.is_weight_point() {
            return Err(Error::InvalidInput(format!(
                "level is defined for weight-lattice points only, got {self}"
            )));
        }
        Ok(rat::int_mod(rat::sum(&self.coords), self.rank.h_i64()))
    }

    /// Apply the simple reflection `r_i` (swap the `i`-th and `i+1`-st
    /// K-coordinates), `1 <= i <= n`.
    pub fn simple_reflection(&self, i: usize) -> Result<Self> {
        let n = self.rank.n();
        if i < 1 || i > n {
            return Err(Error::IndexOutOfRange {
                index: i,
                valid: format!("reflection indices run 1..={n}"),
            });
        }
        let mut raw = self.coords.clone();
        raw.swap(i - 1, i);
        Ok(Self::from_raw_k(self.rank, raw))
    }

    /// Apply the Coxeter element `r_1 r_2 ... r_n` (rightmost factor first),
    /// which cycles `k_j` to `k_{j+1}` with wraparound.
    pub fn coxeter_shift(&self) -> Self {
        let mut raw = self.coords.clone();
        raw.rotate_right(1);
        Self::from_raw_k(self.rank, raw)
    }

    /// Canonical K-coordinates as integers; defined for weight points only.
    pub fn integer_coords(&self) -> Result<Vec<i64>> {
        if !self.is_weight_point() {
            return Err(Error::InvalidInput(format!(
                "integer coordinates exist for weight-lattice points only, got {self}"
            )));
        }
        Ok(self.coords.iter().map(|c| c.to_integer()).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.rank, rhs.rank, "addition requires matching ranks");
        let raw = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| *a + *b)
            .collect();
        LatticeVector::from_raw_k(self.rank, raw)
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        &self + &rhs
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.rank, rhs.rank, "subtraction requires matching ranks");
        let raw = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| *a - *b)
            .collect();
        LatticeVector::from_raw_k(self.rank, raw)
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        &self - &rhs
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        self.scale(rat::int(-1))
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        -&self
    }
}

/// A point of the ambient `R^h` that need not lie in the lattice hyperplane,
/// split on demand into its hyperplane part and its diagonal component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientVector {
    rank: LatticeRank,
    coords: Vec<Rat>,
}

impl AmbientVector {
    pub fn new(rank: LatticeRank, coords: &[Rat]) -> Result<Self> {
        if coords.len() != rank.h() {
            return Err(Error::RankMismatch {
                expected: rank.h(),
                got: coords.len(),
            });
        }
        Ok(Self {
            rank,
            coords: coords.to_vec(),
        })
    }

    pub fn rank(&self) -> LatticeRank {
        self.rank
    }

    /// Raw ambient coordinates on `l_1..l_h`.
    pub fn ambient_coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Coefficient of the diagonal `l_0` in the orthogonal split, i.e. the
    /// coordinate mean.
    pub fn l0_coefficient(&self) -> Rat {
        rat::sum(&self.coords) / rat::int(self.rank.h_i64())
    }

    /// Orthogonal projection into the lattice hyperplane.
    pub fn hyperplane_part(&self) -> LatticeVector {
        let mean = self.l0_coefficient();
        let raw: Vec<Rat> = self.coords.iter().map(|&c| c - mean).collect();
        LatticeVector::from_raw_k(self.rank, raw)
    }
}

/// The fundamental weights `omega_1 ..= omega_n`. In canonical coordinates
/// `omega_i = k_1 + ... + k_i`, and each is dual to the simple roots:
/// `(alpha_i, omega_j) = delta_ij` exactly.
pub fn fundamental_weights(rank: LatticeRank) -> Vec<LatticeVector> {
    let n = rank.n();
    let h = rank.h();
    (1..=n)
        .map(|i| {
            let mut coords = vec![0i64; h];
            for slot in coords.iter_mut().take(i) {
                *slot = 1;
            }
            LatticeVector::from_integer_coords(rank, Basis::K, &coords)
                .expect("prefix sums are valid canonical coordinates")
        })
        .collect()
}

/// The `h = n + 1` equal-norm generators `k_1 ..= k_{n+1}`. They sum to
/// zero, with `(k_i, k_i) = n/h` and `(k_i, k_j) = -1/h` off the diagonal.
pub fn k_vectors(rank: LatticeRank) -> Vec<LatticeVector> {
    (1..=rank.h())
        .map(|j| {
            LatticeVector::basis_vector(rank, Basis::K, j)
                .expect("indices 1..=h are valid for the k basis")
        })
        .collect()
}

/// Gram and Cartan data for a fixed rank.
#[derive(Debug, Clone, Copy)]
pub struct GramData {
    rank: LatticeRank,
}

impl GramData {
    pub fn new(rank: LatticeRank) -> Self {
        Self { rank }
    }

    /// `(k_i, k_j) = delta_ij - 1/h`, an `h x h` matrix.
    pub fn k_gram(&self) -> Vec<Vec<Rat>> {
        let h = self.rank.h();
        let off = rat::frac(-1, self.rank.h_i64());
        (0..h)
            .map(|i| {
                (0..h)
                    .map(|j| if i == j { rat::int(1) + off } else { off })
                    .collect()
            })
            .collect()
    }

    /// The Cartan matrix: 2 on the diagonal, -1 on the off-diagonals of the
    /// path graph, `n x n`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            2
                        } else if i.abs_diff(j) == 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `(omega_i, omega_j) = min(i, j) - ij/h`, an `n x n` matrix (1-based
    /// subscripts in the formula).
    pub fn weight_gram(&self) -> Vec<Vec<Rat>> {
        let n = self.rank.n();
        let h = rat::int(self.rank.h_i64());
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (a, b) = ((i + 1) as i64, (j + 1) as i64);
                        rat::int(a.min(b)) - rat::int(a * b) / h
                    })
                    .collect()
            })
            .collect()
    }
}
