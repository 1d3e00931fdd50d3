//! Edge weights and the extended cost domain `W ∪ {∞}`.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_traits::Zero;
use serde::{Serialize, Serializer};

/// Scalar type usable as an edge length.
///
/// Integer implementations are exact. Float implementations exist for the
/// library API; parsing rejects NaN and infinities so `total_cmp` is a real
/// total order on every admissible value.
pub trait Weight:
    Copy
    + Debug
    + Display
    + FromStr
    + PartialOrd
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Finite and nonnegative.
    fn is_admissible(&self) -> bool;

    fn total_cmp(&self, other: &Self) -> Ordering;

    /// Order-preserving image in `u64` for admissible values: `a <= b`
    /// iff `a.radix_key() <= b.radix_key()`.
    fn radix_key(&self) -> u64;
}

macro_rules! int_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            #[inline]
            fn is_admissible(&self) -> bool {
                *self >= 0 as $t
            }
            #[inline]
            fn total_cmp(&self, other: &Self) -> Ordering {
                Ord::cmp(self, other)
            }
            #[inline]
            fn radix_key(&self) -> u64 {
                *self as u64
            }
        }
    )*};
}

int_weight!(u16, u32, u64, usize, i32, i64);

macro_rules! float_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            #[inline]
            fn is_admissible(&self) -> bool {
                self.is_finite() && *self >= 0.0
            }
            #[inline]
            fn total_cmp(&self, other: &Self) -> Ordering {
                <$t>::total_cmp(self, other)
            }
            // nonnegative IEEE bit patterns sort like the values; -0.0 is
            // admissible and folds onto +0.0
            #[inline]
            fn radix_key(&self) -> u64 {
                if *self == 0.0 {
                    0
                } else {
                    self.to_bits() as u64
                }
            }
        }
    )*};
}

float_weight!(f32, f64);

/// A path cost: either finite or the distinguished `Infinite`.
///
/// Addition saturates at `Infinite`, and `Infinite` compares greater than
/// every finite value.
#[derive(Clone, Copy, Debug)]
pub enum Cost<W> {
    Finite(W),
    Infinite,
}

impl<W: Weight> Cost<W> {
    pub const INFINITY: Self = Cost::Infinite;

    #[inline]
    pub fn zero() -> Self {
        Cost::Finite(W::zero())
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    #[inline]
    pub fn is_infinite(&self) -> bool {
        matches!(self, Cost::Infinite)
    }

    #[inline]
    pub fn finite(self) -> Option<W> {
        match self {
            Cost::Finite(w) => Some(w),
            Cost::Infinite => None,
        }
    }

    /// Adds a finite length.
    #[inline]
    pub fn plus(self, w: W) -> Self {
        match self {
            Cost::Finite(a) => Cost::Finite(a + w),
            Cost::Infinite => Cost::Infinite,
        }
    }

    /// `self − w` for a finite `w`; `Infinite` stays infinite.
    #[inline]
    pub fn minus(self, w: W) -> Self {
        match self {
            Cost::Finite(a) => Cost::Finite(a - w),
            Cost::Infinite => Cost::Infinite,
        }
    }
}

impl<W: Weight> From<W> for Cost<W> {
    fn from(w: W) -> Self {
        Cost::Finite(w)
    }
}

impl<W: Weight> Add for Cost<W> {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }
}

impl<W: Weight> Add<W> for Cost<W> {
    type Output = Self;

    #[inline]
    fn add(self, rhs: W) -> Self {
        self.plus(rhs)
    }
}

impl<W: Weight> Sub<W> for Cost<W> {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: W) -> Self {
        self.minus(rhs)
    }
}

impl<W: Weight> Ord for Cost<W> {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a.total_cmp(b),
            (Cost::Finite(_), Cost::Infinite) => Ordering::Less,
            (Cost::Infinite, Cost::Finite(_)) => Ordering::Greater,
            (Cost::Infinite, Cost::Infinite) => Ordering::Equal,
        }
    }
}

impl<W: Weight> PartialOrd for Cost<W> {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Weight> PartialEq for Cost<W> {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<W: Weight> Eq for Cost<W> {}

impl<W: Weight> PartialEq<W> for Cost<W> {
    fn eq(&self, other: &W) -> bool {
        *self == Cost::Finite(*other)
    }
}

impl<W: Display> Display for Cost<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(w) => write!(f, "{w}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

/// Accepts a plain number or `inf`.
impl<W: Weight> FromStr for Cost<W> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Cost::Infinite);
        }
        let w: W = s.parse().map_err(|_| format!("not a cost: {s:?}"))?;
        if !w.is_admissible() {
            return Err(format!("cost must be finite and nonnegative: {s:?}"));
        }
        Ok(Cost::Finite(w))
    }
}

/// Finite costs serialize as numbers, `Infinite` as the string `"inf"`.
impl<W: Serialize> Serialize for Cost<W> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(w) => w.serialize(serializer),
            Cost::Infinite => serializer.serialize_str("inf"),
        }
    }
}
