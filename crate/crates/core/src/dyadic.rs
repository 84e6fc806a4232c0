//! Aligned dyadic intervals and exact dyadic rational amounts.
//!
//! A finite bit string is identified with the half-open interval
//! `[0.bits, 0.bits + 2^-|bits|)` of the unit interval; the empty string is
//! the whole unit interval. Containment of intervals is exactly the prefix
//! relation on strings, and adjacency at endpoints never counts as overlap.
//! All sizes, prices and measures are dyadic rationals kept in canonical
//! form, so every comparison made by this crate is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An aligned interval of the unit interval, canonically a bit string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct DyadicInterval {
    bits: Vec<u8>,
}

/// How two aligned intervals sit relative to each other.
///
/// `Contains` means the first properly contains the second (its bits are a
/// proper prefix of the second's); `Within` is the mirror case. Two aligned
/// intervals are disjoint exactly when neither bit string is a prefix of the
/// other.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Equal,
    Contains,
    Within,
    Disjoint,
}

impl DyadicInterval {
    /// The whole unit interval (empty bit string).
    pub fn root() -> Self {
        DyadicInterval { bits: Vec::new() }
    }

    /// Parses an ASCII string over `{0,1}`.
    pub fn from_bits(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => return Err(Error::InvalidBit(other)),
            }
        }
        Ok(DyadicInterval { bits })
    }

    pub fn from_bit_slice(bits: &[u8]) -> Self {
        debug_assert!(bits.iter().all(|&b| b < 2));
        DyadicInterval { bits: bits.to_vec() }
    }

    /// Parses the file-format field, where `-` denotes the empty string.
    pub fn parse_field(s: &str) -> Result<Self> {
        if s == "-" {
            Ok(Self::root())
        } else {
            Self::from_bits(s)
        }
    }

    /// Renders the file-format field, `-` for the empty string.
    pub fn to_field(&self) -> String {
        if self.bits.is_empty() {
            "-".to_string()
        } else {
            self.to_string()
        }
    }

    pub fn as_bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Depth in the binary subdivision; the measure is `2^-depth`.
    pub fn depth(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn measure(&self) -> DyadicAmount {
        DyadicAmount::pow2_neg(self.depth())
    }

    /// Left endpoint as an exact dyadic rational.
    pub fn low_endpoint(&self) -> DyadicAmount {
        let mut m = BigUint::zero();
        for &b in &self.bits {
            m = (m << 1) + BigUint::from(b);
        }
        DyadicAmount::new(m, self.depth() as u64)
    }

    /// The child interval obtained by appending one bit.
    pub fn child(&self, bit: u8) -> Self {
        debug_assert!(bit < 2);
        let mut bits = self.bits.clone();
        bits.push(bit);
        DyadicInterval { bits }
    }

    /// Splits into halves: `(bits·0, bits·1)`, left before right.
    pub fn split(&self) -> (Self, Self) {
        (self.child(0), self.child(1))
    }

    /// Splits down to `target` depth, always descending into the left half.
    /// Returns the final left piece and the right halves shed along the way
    /// (shallowest first).
    pub fn split_to_depth(&self, target: u32) -> (Self, Vec<Self>) {
        debug_assert!(target >= self.depth());
        let mut left = self.clone();
        let mut rights = Vec::with_capacity((target - self.depth()) as usize);
        while left.depth() < target {
            let (l, r) = left.split();
            rights.push(r);
            left = l;
        }
        (left, rights)
    }

    /// The prefix of the first `len` bits.
    pub fn prefix(&self, len: usize) -> Self {
        debug_assert!(len <= self.bits.len());
        DyadicInterval { bits: self.bits[..len].to_vec() }
    }

    /// Prefix-or-equal on bit strings, i.e. `self` contains `other`.
    pub fn is_prefix_of(&self, other: &Self) -> bool {
        other.bits.len() >= self.bits.len() && other.bits[..self.bits.len()] == self.bits[..]
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.is_prefix_of(other)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    pub fn relation(&self, other: &Self) -> Relation {
        if self.bits == other.bits {
            Relation::Equal
        } else if self.is_prefix_of(other) {
            Relation::Contains
        } else if other.is_prefix_of(self) {
            Relation::Within
        } else {
            Relation::Disjoint
        }
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

/// An exact non-negative dyadic rational `mantissa * 2^-exponent`.
///
/// Canonical form: the mantissa is odd, or the value is an integer
/// (exponent 0). Addition, subtraction and comparison are exact; subtraction
/// below zero is an error because ledgers never owe money.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DyadicAmount {
    mantissa: BigUint,
    exponent: u64,
}

impl DyadicAmount {
    pub fn new(mantissa: BigUint, exponent: u64) -> Self {
        let mut amount = DyadicAmount { mantissa, exponent };
        amount.canonicalize();
        amount
    }

    pub fn zero() -> Self {
        DyadicAmount { mantissa: BigUint::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        DyadicAmount { mantissa: BigUint::one(), exponent: 0 }
    }

    /// `2^-e`.
    pub fn pow2_neg(e: u32) -> Self {
        DyadicAmount { mantissa: BigUint::one(), exponent: e as u64 }
    }

    /// `numer * 2^-denom_exp`, canonicalized.
    pub fn from_ratio(numer: u64, denom_exp: u32) -> Self {
        Self::new(BigUint::from(numer), denom_exp as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent);
        if shift > 0 {
            self.mantissa >>= shift;
            self.exponent -= shift;
        }
    }

    /// Mantissas after aligning both values to a common exponent.
    fn aligned(&self, other: &Self) -> (BigUint, BigUint, u64) {
        let e = self.exponent.max(other.exponent);
        let a = &self.mantissa << (e - self.exponent);
        let b = &other.mantissa << (e - other.exponent);
        (a, b, e)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        DyadicAmount::new(a + b, e)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let (a, b, e) = self.aligned(other);
        if a < b {
            return Err(Error::LedgerUnderflow {
                balance: self.to_string(),
                amount: other.to_string(),
            });
        }
        Ok(DyadicAmount::new(a - b, e))
    }
}

impl Ord for DyadicAmount {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicAmount {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl AddAssign<&DyadicAmount> for DyadicAmount {
    fn add_assign(&mut self, other: &DyadicAmount) {
        *self = self.plus(other);
    }
}

/// Panics on underflow; ledger code uses `checked_sub` where the error is
/// part of the contract.
impl SubAssign<&DyadicAmount> for DyadicAmount {
    fn sub_assign(&mut self, other: &DyadicAmount) {
        *self = self.checked_sub(other).expect("dyadic amount underflow");
    }
}

impl fmt::Display for DyadicAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/2^{}", self.mantissa, self.exponent)
        }
    }
}
