//! Finite integer domains.
//!
//! A [`DomainSet`] holds up to [`DomainSet::SPAN`] consecutive candidate
//! values as a bitmask anchored at an offset. Every domain used by the
//! benchmark models fits comfortably inside that window.

use std::fmt;

use crate::error::{Error, Result};

/// A finite, sorted, duplicate-free set of integers.
#[derive(Clone, Copy)]
pub struct DomainSet {
    offset: i32,
    bits: u64,
}

impl DomainSet {
    /// Width of the value window a single domain may span.
    pub const SPAN: i32 = 64;

    pub const fn empty() -> Self {
        DomainSet { offset: 0, bits: 0 }
    }

    /// Domain `{lo, lo+1, ..., hi}`.
    pub fn range(lo: i32, hi: i32) -> Result<Self> {
        if hi < lo {
            return Err(Error::invalid(format!("empty range {lo}..={hi}")));
        }
        let width = i64::from(hi) - i64::from(lo) + 1;
        if width > i64::from(Self::SPAN) {
            return Err(Error::invalid(format!(
                "range {lo}..={hi} spans {width} values, more than {}",
                Self::SPAN
            )));
        }
        let bits = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        Ok(DomainSet { offset: lo, bits })
    }

    pub fn singleton(v: i32) -> Self {
        DomainSet { offset: v, bits: 1 }
    }

    pub fn from_values<I: IntoIterator<Item = i32>>(values: I) -> Result<Self> {
        let values: Vec<i32> = values.into_iter().collect();
        let Some(&lo) = values.iter().min() else {
            return Ok(Self::empty());
        };
        let hi = *values.iter().max().unwrap();
        if i64::from(hi) - i64::from(lo) >= i64::from(Self::SPAN) {
            return Err(Error::invalid(format!(
                "values {lo}..{hi} do not fit a {}-value window",
                Self::SPAN
            )));
        }
        let bits = values.iter().fold(0u64, |acc, &v| acc | 1 << (v - lo));
        Ok(DomainSet { offset: lo, bits })
    }

    #[inline]
    fn bit(&self, v: i32) -> Option<u32> {
        let d = i64::from(v) - i64::from(self.offset);
        (0..i64::from(Self::SPAN)).contains(&d).then_some(d as u32)
    }

    #[inline]
    pub fn contains(&self, v: i32) -> bool {
        self.bit(v).is_some_and(|b| self.bits >> b & 1 == 1)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_singleton(&self) -> bool {
        self.bits != 0 && self.bits & (self.bits - 1) == 0
    }

    /// The value of a singleton domain.
    #[inline]
    pub fn value(&self) -> Option<i32> {
        self.is_singleton().then(|| self.min().unwrap())
    }

    #[inline]
    pub fn min(&self) -> Option<i32> {
        (self.bits != 0).then(|| self.offset + self.bits.trailing_zeros() as i32)
    }

    #[inline]
    pub fn max(&self) -> Option<i32> {
        (self.bits != 0).then(|| self.offset + 63 - self.bits.leading_zeros() as i32)
    }

    /// Removes `v`; returns whether the domain changed.
    #[inline]
    pub fn remove(&mut self, v: i32) -> bool {
        match self.bit(v) {
            Some(b) if self.bits >> b & 1 == 1 => {
                self.bits &= !(1 << b);
                true
            }
            _ => false,
        }
    }

    /// Restricts the domain to `{v}` (or to the empty set when `v` is absent).
    #[inline]
    pub fn assign(&mut self, v: i32) -> bool {
        let before = self.bits;
        self.bits = match self.bit(v) {
            Some(b) => self.bits & (1 << b),
            None => 0,
        };
        before != self.bits
    }

    /// Removes every value strictly below `lo`.
    pub fn remove_below(&mut self, lo: i32) -> bool {
        let d = i64::from(lo) - i64::from(self.offset);
        let before = self.bits;
        if d >= 64 {
            self.bits = 0;
        } else if d > 0 {
            self.bits &= u64::MAX << d;
        }
        before != self.bits
    }

    /// Removes every value strictly above `hi`.
    pub fn remove_above(&mut self, hi: i32) -> bool {
        let d = i64::from(hi) - i64::from(self.offset);
        let before = self.bits;
        if d < 0 {
            self.bits = 0;
        } else if d < 63 {
            self.bits &= (1u64 << (d + 1)) - 1;
        }
        before != self.bits
    }

    pub fn retain(&mut self, mut keep: impl FnMut(i32) -> bool) -> bool {
        let before = self.bits;
        let mut rest = self.bits;
        while rest != 0 {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            if !keep(self.offset + b as i32) {
                self.bits &= !(1 << b);
            }
        }
        before != self.bits
    }

    /// Intersects with `other`; returns whether the domain changed.
    pub fn intersect(&mut self, other: &DomainSet) -> bool {
        let before = self.bits;
        self.bits &= other.shifted_to(self.offset);
        before != self.bits
    }

    pub fn intersects(&self, other: &DomainSet) -> bool {
        self.bits & other.shifted_to(self.offset) != 0
    }

    /// `other`'s bits re-anchored at `offset`, dropping values outside the window.
    fn shifted_to(&self, offset: i32) -> u64 {
        let d = i64::from(self.offset) - i64::from(offset);
        if d >= 64 || d <= -64 {
            0
        } else if d >= 0 {
            self.bits << d
        } else {
            self.bits >> -d
        }
    }

    pub fn iter(&self) -> DomainIter {
        DomainIter { offset: self.offset, rest: self.bits }
    }

    pub fn to_vec(&self) -> Vec<i32> {
        self.iter().collect()
    }
}

impl DomainSet {
    /// `(min, bits shifted so that min is bit 0)`; independent of the offset.
    fn normalized(&self) -> (i32, u64) {
        if self.bits == 0 {
            (0, 0)
        } else {
            let tz = self.bits.trailing_zeros();
            (self.offset + tz as i32, self.bits >> tz)
        }
    }
}

impl PartialEq for DomainSet {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl Eq for DomainSet {}

impl std::hash::Hash for DomainSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.normalized().hash(state);
    }
}

impl Default for DomainSet {
    fn default() -> Self {
        Self::empty()
    }
}

impl fmt::Debug for DomainSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a DomainSet {
    type Item = i32;
    type IntoIter = DomainIter;

    fn into_iter(self) -> DomainIter {
        self.iter()
    }
}

/// Ascending iterator over a [`DomainSet`].
#[derive(Clone)]
pub struct DomainIter {
    offset: i32,
    rest: u64,
}

impl Iterator for DomainIter {
    type Item = i32;

    #[inline]
    fn next(&mut self) -> Option<i32> {
        if self.rest == 0 {
            return None;
        }
        let b = self.rest.trailing_zeros();
        self.rest &= self.rest - 1;
        Some(self.offset + b as i32)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.rest.count_ones() as usize;
        (n, Some(n))
    }
}
