//! Scalar abstraction for exact integer arithmetic.
//!
//! All matrix computations run over a [`Scalar`]: either checked 64-bit
//! integers (the default, overflow is an explicit error) or arbitrary
//! precision [`BigInt`] (the `--bigint` mode of the CLI). Arithmetic never
//! silently wraps.

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};
use std::fmt;
use std::hash::Hash;

/// An exact integer scalar.
///
/// `checked_*` must return `None` instead of wrapping; for arbitrary
/// precision types they simply never fail.
pub trait Scalar:
    Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
{
    fn from_i64(v: i64) -> Self;

    /// Nonnegative value as a count, if it fits a `usize`.
    fn to_count(&self) -> Option<usize>;

    /// Lossless promotion into arbitrary precision.
    fn to_bigint(&self) -> BigInt;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }

    fn to_count(&self) -> Option<usize> {
        usize::try_from(*self).ok()
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn to_count(&self) -> Option<usize> {
        self.to_usize()
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}
