//! Rational scalar type and small helpers.
//!
//! All lattice-side arithmetic uses `Rat` (an `i64`-backed rational). The
//! denominators that actually occur divide `n + 1`, so `i64` leaves enormous
//! headroom for the vector sums and Gram products computed here.

use num_rational::Rational64;
use num_traits::Zero;

/// Exact scalar used for all lattice coordinates and inner products.
pub type Rat = Rational64;

/// `n` as an exact scalar.
pub fn int(n: i64) -> Rat {
    Rational64::from_integer(n)
}

/// `p / q` as an exact scalar. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rat {
    Rational64::new(p, q)
}

/// True if every entry is zero.
pub fn all_zero(xs: &[Rat]) -> bool {
    xs.iter().all(|x| x.is_zero())
}

/// Exact sum of a slice.
pub fn sum(xs: &[Rat]) -> Rat {
    xs.iter().copied().fold(Rat::zero(), |a, b| a + b)
}

/// Nearest `f64` to an exact scalar.
pub fn to_f64(x: Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Euclidean remainder of an exact scalar by a positive integer, in `[0, m)`.
/// Defined only for scalars that are integers; panics otherwise.
pub fn int_mod(x: Rat, m: i64) -> i64 {
    assert!(x.is_integer(), "int_mod needs an integer, got {x}");
    let r = x.to_integer() % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}
