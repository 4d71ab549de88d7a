//! Edge weight scalar.
//!
//! Edge weights are strictly positive unsigned integers. The storage width is
//! a type parameter so large graphs can trade range for memory; every path
//! length and tree total is accumulated in `u64` regardless of the storage
//! width, which keeps all distance comparisons exact.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{NumCast, PrimInt, Unsigned};

/// Unsigned integer type usable as an edge weight.
pub trait Weight:
    PrimInt + Unsigned + Hash + Default + FromStr + Display + Debug + Send + Sync + 'static
{
    /// Lossless widening into the distance domain.
    #[inline]
    fn widen(self) -> u64 {
        self.to_u64().expect("unsigned weight fits in u64")
    }

    /// Narrowing conversion; `None` when `value` does not fit.
    #[inline]
    fn narrow(value: u64) -> Option<Self> {
        <Self as NumCast>::from(value)
    }
}

impl Weight for u8 {}
impl Weight for u16 {}
impl Weight for u32 {}
impl Weight for u64 {}

/// Distance value used for unreachable vertices.
pub const INFINITY: u64 = u64::MAX;
