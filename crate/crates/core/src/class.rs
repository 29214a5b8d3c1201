//! Domain types: the decay class C(a, b), finite-support impulse responses,
//! one-sided signals, and a reproducible member sampler.
//!
//! Membership in C(a, b) is taken as |k[t]| <= a e^{-bt} for all t >= 0.
//! Everything here works on finite-support sequences; coefficients beyond the
//! stored support are implicitly zero (and trivially satisfy the envelope).

use crate::error::{Error, Result};

/// The class C(a, b) of causal LTI systems whose impulse responses decay
/// under the envelope a e^{-bt}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayClass {
    a: f64,
    b: f64,
}

impl DecayClass {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidClass { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The envelope a e^{-bt}, strictly decreasing in t.
    pub fn envelope(&self, t: usize) -> f64 {
        self.a * (-self.b * t as f64).exp()
    }

    /// Rejects eps outside the admissible range (0, a).
    pub fn check_eps(&self, eps: f64) -> Result<()> {
        if eps > 0.0 && eps < self.a && eps.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidEpsilon { eps, a: self.a })
        }
    }

    /// True iff |k[t]| <= a e^{-bt} + tol on the stored support. The implicit
    /// zero tail always satisfies the envelope.
    pub fn is_member(&self, k: &ImpulseResponse, tol: f64) -> bool {
        k.coeffs()
            .iter()
            .enumerate()
            .all(|(t, &v)| v.abs() <= self.envelope(t) + tol)
    }

    /// Like [`is_member`](Self::is_member) but reports the first offending
    /// coefficient.
    pub fn check_member(&self, k: &ImpulseResponse, tol: f64) -> Result<()> {
        for (t, &v) in k.coeffs().iter().enumerate() {
            let bound = self.envelope(t);
            if v.abs() > bound + tol {
                return Err(Error::NotAMember { t, value: v, bound });
            }
        }
        Ok(())
    }

    /// Draws k[t] uniformly from [-a e^{-bt}, a e^{-bt}] for t = 0..=support,
    /// using the splitmix64 generator seeded with `seed`. Deterministic: the
    /// t-th coefficient uses the (t+1)-th splitmix64 output.
    pub fn random_member(&self, support: usize, seed: u64) -> ImpulseResponse {
        let mut rng = SplitMix64::new(seed);
        let coeffs = (0..=support)
            .map(|t| {
                let u = rng.next_f64(); // in [0, 1)
                let env = self.envelope(t);
                -env + 2.0 * env * u
            })
            .collect();
        ImpulseResponse::new(coeffs)
    }
}

/// A finite-support causal impulse response k[0..=T]; k[t] = 0 for t > T and
/// (implicitly, by one-sidedness) for t < 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseResponse {
    coeffs: Vec<f64>,
}

impl ImpulseResponse {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(len: usize) -> Self {
        Self {
            coeffs: vec![0.0; len],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// k[t], zero beyond the stored support.
    pub fn get(&self, t: usize) -> f64 {
        self.coeffs.get(t).copied().unwrap_or(0.0)
    }

    /// Coefficient-wise difference, extended with zeros to the longer support.
    pub fn sub(&self, other: &ImpulseResponse) -> ImpulseResponse {
        let len = self.len().max(other.len());
        ImpulseResponse::new((0..len).map(|t| self.get(t) - other.get(t)).collect())
    }

    /// Causal convolution with a one-sided input signal.
    /// output[t] = sum_{tau=0..=t} k[tau] x[t - tau].
    pub fn convolve(&self, x: &Signal) -> Signal {
        if self.is_empty() || x.samples().is_empty() {
            return Signal::new(Vec::new());
        }
        let n = self.len() + x.samples().len() - 1;
        let mut out = vec![0.0; n];
        for (tau, &kv) in self.coeffs.iter().enumerate() {
            for (s, &xv) in x.samples().iter().enumerate() {
                out[tau + s] += kv * xv;
            }
        }
        Signal::new(out)
    }
}

/// A one-sided input signal x[0..=T'].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
}

impl Signal {
    pub fn new(samples: Vec<f64>) -> Self {
        Self { samples }
    }

    /// The unit impulse x[t] = 1{t = 0}.
    pub fn unit_impulse() -> Self {
        Self { samples: vec![1.0] }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn l2_norm(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// splitmix64 (Steele, Lea, Flood 2014). Fixed here so that sampled members
/// are bit-reproducible across platforms and language ports.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in 0..bound (bound > 0), by rejection to avoid modulo bias.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }
}
