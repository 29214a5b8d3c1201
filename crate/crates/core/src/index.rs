//! Mixed-radix index tuples. One tuple identifies one covering or packing
//! element; packed into a single integer it doubles as the codec payload.
//!
//! Digits are zero-based here (0 <= d_t < r_t). Constructions whose natural
//! digit range starts at 1 shift by one at the call site.

use crate::error::{Error, Result};
use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedRadixIndex {
    digits: Vec<u64>,
    radices: Vec<u64>,
}

impl MixedRadixIndex {
    pub fn new(digits: Vec<u64>, radices: Vec<u64>) -> Result<Self> {
        if digits.len() != radices.len() {
            return Err(Error::IndexLengthMismatch {
                digits: digits.len(),
                radices: radices.len(),
            });
        }
        for (slot, (&d, &r)) in digits.iter().zip(&radices).enumerate() {
            if r == 0 || d >= r {
                return Err(Error::DigitOutOfRange {
                    slot,
                    digit: d,
                    radix: r,
                });
            }
        }
        Ok(Self { digits, radices })
    }

    /// All-zero index for the given radices.
    pub fn zeros(radices: Vec<u64>) -> Result<Self> {
        let digits = vec![0; radices.len()];
        Self::new(digits, radices)
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Packs the tuple into v = sum_t d_t * prod_{s<t} r_s. Slot 0 is the
    /// least significant.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::from(0u32);
        let mut base = BigUint::from(1u32);
        for (&d, &r) in self.digits.iter().zip(&self.radices) {
            v += d * &base;
            base *= r;
        }
        v
    }

    /// Inverse of [`value`](Self::value). Fails if v >= prod r_t.
    pub fn from_value(radices: Vec<u64>, v: &BigUint) -> Result<Self> {
        let mut rem = v.clone();
        let mut digits = Vec::with_capacity(radices.len());
        for &r in &radices {
            let rb = BigUint::from(r);
            let d = &rem % &rb;
            rem /= &rb;
            // r <= u64::MAX so the remainder fits
            digits.push(d.to_u64_digits().first().copied().unwrap_or(0));
        }
        if rem != BigUint::from(0u32) {
            return Err(Error::Corrupt(format!(
                "index value {v} exceeds the radix product"
            )));
        }
        Self::new(digits, radices)
    }

    /// Total number of valid tuples, prod r_t.
    pub fn cardinality(radices: &[u64]) -> BigUint {
        radices.iter().fold(BigUint::from(1u32), |acc, &r| acc * r)
    }

    /// Advances to the next tuple in value order; returns false on wrap.
    pub fn increment(&mut self) -> bool {
        for (d, &r) in self.digits.iter_mut().zip(&self.radices) {
            *d += 1;
            if *d < r {
                return true;
            }
            *d = 0;
        }
        false
    }
}

/// Iterates over all index tuples for the given radices, in value order.
pub fn enumerate_indices(radices: &[u64]) -> IndexIter {
    IndexIter {
        current: MixedRadixIndex::zeros(radices.to_vec()).ok(),
    }
}

pub struct IndexIter {
    current: Option<MixedRadixIndex>,
}

impl Iterator for IndexIter {
    type Item = MixedRadixIndex;

    fn next(&mut self) -> Option<MixedRadixIndex> {
        let cur = self.current.clone()?;
        let mut next = cur.clone();
        if !next.increment() {
            self.current = None;
        } else {
            self.current = Some(next);
        }
        Some(cur)
    }
}
