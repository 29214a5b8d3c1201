//! Bit-exact encoder/decoder for class members at target distortion eps.
//!
//! Stream layout (big-endian throughout):
//!   byte 0        version, 0x01
//!   bytes 1..9    a,   IEEE 754 binary64
//!   bytes 9..17   b,   IEEE 754 binary64
//!   bytes 17..25  eps, IEEE 754 binary64
//!   bytes 25..    payload: the mixed-radix value
//!                 v = sum_t (i_t - 1) prod_{s<t} n_s
//!                 as a big-endian integer occupying exactly
//!                 ceil(ceil(log2 prod n_t) / 8) bytes.
//!
//! The decoder recomputes C2, delta and n_t from the header, so the
//! parameter derivation must be bit-reproducible: it uses f64 ln/exp/floor/
//! ceil in the fixed evaluation order of `covering_params`, which is
//! deterministic for a given platform's libm. The canonical parameter values
//! are pinned by tests.
//!
//! The underlying results only bound the asymptotic bit rate; no encoder is
//! prescribed there. This codec is the natural operationalization: the
//! payload meets the covering count to within ceiling slack.

use crate::class::{DecayClass, ImpulseResponse};
use crate::covering::{
    covering_cardinality_exact, covering_element, covering_params, covering_upper_bound, quantize,
    CoveringParams,
};
use crate::entropy::asymptotic_rate;
use crate::error::{Error, Result};
use crate::index::MixedRadixIndex;
use num_bigint::BigUint;

pub const FORMAT_VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 25;

/// An encoded impulse response: header plus mixed-radix payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitstream {
    bytes: Vec<u8>,
}

impl Bitstream {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self { bytes }
    }

    pub fn payload(&self) -> &[u8] {
        &self.bytes[HEADER_LEN.min(self.bytes.len())..]
    }
}

/// Number of payload bits: ceil(log2 of the covering cardinality).
pub fn payload_bits(params: &CoveringParams) -> u64 {
    let card = covering_cardinality_exact(params);
    // bits() = floor(log2) + 1; a power of two needs exactly bits() - 1
    if card.count_ones() == 1 {
        card.bits() - 1
    } else {
        card.bits()
    }
}

fn payload_len_bytes(params: &CoveringParams) -> usize {
    payload_bits(params).div_ceil(8) as usize
}

/// Encodes a class member: quantize against the eps-covering grid and pack
/// the index digits into a single big-endian integer.
pub fn encode(class: &DecayClass, eps: f64, k: &ImpulseResponse) -> Result<Bitstream> {
    class.check_eps(eps)?;
    class.check_member(k, 0.0)?;
    let params = covering_params(class, eps)?;
    let idx = quantize(&params, class, k)?;
    let v = idx.value();

    let mut bytes = Vec::with_capacity(HEADER_LEN + payload_len_bytes(&params));
    bytes.push(FORMAT_VERSION);
    bytes.extend_from_slice(&class.a().to_be_bytes());
    bytes.extend_from_slice(&class.b().to_be_bytes());
    bytes.extend_from_slice(&eps.to_be_bytes());

    let want = payload_len_bytes(&params);
    let digits = if v == BigUint::from(0u32) {
        Vec::new()
    } else {
        v.to_bytes_be()
    };
    debug_assert!(digits.len() <= want);
    bytes.extend(std::iter::repeat_n(0u8, want - digits.len()));
    bytes.extend_from_slice(&digits);
    debug_assert_eq!(bytes.len(), HEADER_LEN + want);
    Ok(Bitstream { bytes })
}

/// Decodes a stream back to (class, eps, reconstruction). The reconstruction
/// is the covering element at the decoded index; round-trip distortion is at
/// most eps by the l1-plus-tail certificate.
pub fn decode(stream: &Bitstream) -> Result<(DecayClass, f64, ImpulseResponse)> {
    let bytes = stream.as_bytes();
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "stream has {} bytes, header needs {HEADER_LEN}",
            bytes.len()
        )));
    }
    if bytes[0] != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format version 0x{:02x}",
            bytes[0]
        )));
    }
    let read_f64 = |off: usize| f64::from_be_bytes(bytes[off..off + 8].try_into().unwrap());
    let a = read_f64(1);
    let b = read_f64(9);
    let eps = read_f64(17);
    let class = DecayClass::new(a, b).map_err(|e| Error::Format(e.to_string()))?;
    class
        .check_eps(eps)
        .map_err(|e| Error::Format(e.to_string()))?;
    let params = covering_params(&class, eps)?;

    let want = payload_len_bytes(&params);
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != want {
        return Err(Error::Corrupt(format!(
            "payload has {} bytes, expected {want}",
            payload.len()
        )));
    }
    let v = BigUint::from_bytes_be(payload);
    if v >= covering_cardinality_exact(&params) {
        return Err(Error::Corrupt(format!(
            "payload value {v} exceeds the covering cardinality"
        )));
    }
    let idx = MixedRadixIndex::from_value(params.radices(), &v)?;
    let recon = covering_element(&params, &class, &idx)?;
    Ok((class, eps, recon))
}

/// Rate accounting for one (class, eps) configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    /// Payload length in bits.
    pub bits: u64,
    /// The leading-order rate (gamma / 2b) ln^2(a / eps).
    pub rate_formula: f64,
    /// Header size in bits.
    pub overhead_bits: u64,
}

pub fn rate_report(class: &DecayClass, eps: f64) -> Result<RateReport> {
    let params = covering_params(class, eps)?;
    let bits = payload_bits(&params);
    let ub = covering_upper_bound(class, eps)?;
    assert!(
        bits as f64 <= ub + 1.0,
        "payload {bits} bits exceeds the closed-form bound {ub} + 1"
    );
    Ok(RateReport {
        bits,
        rate_formula: asymptotic_rate(class, eps)?,
        overhead_bits: (HEADER_LEN * 8) as u64,
    })
}
