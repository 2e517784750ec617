//! Scalar abstraction shared by the exact (rational) and floating point code
//! paths.
//!
//! Everything geometric in this crate (Gram matrices, LDL factorisations,
//! sphere enumeration, closest-point search) is written once against
//! [`Scalar`]. Algebraic invariants are checked with [`crate::Rational`],
//! channel simulation runs on `f64`.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A signed ordered field element usable by the lattice algorithms.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic and comparisons are exact.
    const EXACT: bool;

    /// Unit roundoff of the arithmetic; zero when exact.
    const ROUNDOFF: f64;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable in scalar type")
    }

    /// Nearest `f64`, used for enumeration bounds and reporting.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Conversion from an exact rational.
    fn from_rational(r: &Ratio<i128>) -> Self;
}

impl Scalar for f32 {
    const EXACT: bool = false;
    const ROUNDOFF: f64 = f32::EPSILON as f64;

    fn from_rational(r: &Ratio<i128>) -> Self {
        (*r.numer() as f64 / *r.denom() as f64) as f32
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const ROUNDOFF: f64 = f64::EPSILON;

    fn from_rational(r: &Ratio<i128>) -> Self {
        *r.numer() as f64 / *r.denom() as f64
    }
}

impl Scalar for Ratio<i128> {
    const EXACT: bool = true;
    const ROUNDOFF: f64 = 0.0;

    fn from_rational(r: &Ratio<i128>) -> Self {
        *r
    }

    fn approx(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// Largest integer not exceeding `r`.
pub fn floor_rational(r: &Ratio<i128>) -> i128 {
    r.floor().to_integer()
}

/// Exact square root of a non-negative rational, when it exists.
pub fn sqrt_rational(r: &Ratio<i128>) -> Option<Ratio<i128>> {
    if r.is_negative() {
        return None;
    }
    let n = isqrt(*r.numer())?;
    let d = isqrt(*r.denom())?;
    Some(Ratio::new(n, d))
}

fn isqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let mut s = (v as f64).sqrt() as i128;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    (s * s == v).then_some(s)
}
