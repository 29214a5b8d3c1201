//! The explicit eps-covering of C(a, b).
//!
//! With C2 = floor((1/b) ln(2a / (eps (1 - e^{-b})))) and delta = eps/(C2+1),
//! each slot t <= C2 carries the clipped uniform grid
//! f_t(i) = min(-a e^{-bt} - delta/2 + i delta, a e^{-bt}), i = 1..=n_t,
//! n_t = ceil(2 a e^{-bt} / delta). Quantizing a member slot-wise to the
//! nearest grid point incurs at most delta/2 per slot; the truncated tail
//! contributes at most the geometric bound a e^{-b(C2+1)} / (1 - e^{-b}),
//! and the two add up to at most eps.
//!
//! Grid indices i are one-based as above; [`MixedRadixIndex`] digits are the
//! zero-based offsets i - 1 with radix n_t.

use crate::class::{DecayClass, ImpulseResponse, SplitMix64};
use crate::entropy::GAMMA;
use crate::error::{Error, Result};
use crate::index::MixedRadixIndex;
use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringParams {
    eps: f64,
    c2: usize,
    delta: f64,
    /// n_t for t = 0..=C2.
    counts: Vec<u64>,
}

impl CoveringParams {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn c2(&self) -> usize {
        self.c2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Radices n_t for zero-based index digits.
    pub fn radices(&self) -> Vec<u64> {
        self.counts.clone()
    }

    /// The geometric tail bound a e^{-b(C2+1)} / (1 - e^{-b}) on the l1 mass
    /// beyond the quantized support.
    pub fn tail_bound(&self, class: &DecayClass) -> f64 {
        let b = class.b();
        class.envelope(self.c2 + 1) / (1.0 - (-b).exp())
    }
}

/// Derives C2, delta and the per-slot grid sizes for an eps-covering.
pub fn covering_params(class: &DecayClass, eps: f64) -> Result<CoveringParams> {
    class.check_eps(eps)?;
    let (a, b) = (class.a(), class.b());
    let c2_f = ((2.0 * a / (eps * (1.0 - (-b).exp()))).ln() / b).floor();
    if c2_f < 0.0 {
        // cannot happen for eps < a: the argument of the log exceeds 2
        return Err(Error::InvariantViolation(format!("C2 = {c2_f} < 0")));
    }
    let c2 = c2_f as usize;
    let delta = eps / (c2 as f64 + 1.0);
    let counts: Vec<u64> = (0..=c2)
        .map(|t| (2.0 * class.envelope(t) / delta).ceil() as u64)
        .collect();
    if counts.contains(&0) {
        return Err(Error::InvariantViolation("covering count n_t = 0".into()));
    }
    Ok(CoveringParams {
        eps,
        c2,
        delta,
        counts,
    })
}

/// The grid map f_t(i) = min(-a e^{-bt} - delta/2 + i delta, a e^{-bt}),
/// with one-based i in 1..=n_t.
pub fn grid_point(class: &DecayClass, delta: f64, t: usize, i: u64, n_t: u64) -> Result<f64> {
    if i < 1 || i > n_t {
        return Err(Error::DigitOutOfRange {
            slot: t,
            digit: i,
            radix: n_t,
        });
    }
    let env = class.envelope(t);
    Ok((-env - delta / 2.0 + i as f64 * delta).min(env))
}

/// The covering element k~[t] = f_t(i_t), zero beyond C2. Index digits are
/// zero-based offsets i_t - 1.
pub fn covering_element(
    params: &CoveringParams,
    class: &DecayClass,
    idx: &MixedRadixIndex,
) -> Result<ImpulseResponse> {
    if idx.len() != params.c2 + 1 {
        return Err(Error::IndexLengthMismatch {
            digits: idx.len(),
            radices: params.c2 + 1,
        });
    }
    let mut coeffs = Vec::with_capacity(params.c2 + 1);
    for (t, &d) in idx.digits().iter().enumerate() {
        coeffs.push(grid_point(class, params.delta, t, d + 1, params.counts[t])?);
    }
    Ok(ImpulseResponse::new(coeffs))
}

/// Quantizes a class member slot-wise to the nearest grid point (ties toward
/// the smaller index), guaranteeing per-slot error at most delta/2. Support
/// beyond C2 is truncated; the tail is absorbed by the analytic bound.
pub fn quantize(
    params: &CoveringParams,
    class: &DecayClass,
    k: &ImpulseResponse,
) -> Result<MixedRadixIndex> {
    class.check_member(k, 0.0)?;
    let delta = params.delta;
    let mut digits = Vec::with_capacity(params.c2 + 1);
    for t in 0..=params.c2 {
        let x = k.get(t);
        let n_t = params.counts[t];
        let env = class.envelope(t);
        // unclipped grid is base + i delta; round, then settle ties and the
        // clipped top point by scanning the neighborhood in ascending order
        let base = -env - delta / 2.0;
        let guess = ((x - base) / delta).round() as i64;
        let mut best_i = 0u64;
        let mut best_err = f64::INFINITY;
        for cand in (guess - 1)..=(guess + 1) {
            let i = cand.clamp(1, n_t as i64) as u64;
            let err = (x - grid_point(class, delta, t, i, n_t)?).abs();
            if err < best_err || (err == best_err && i < best_i) {
                best_err = err;
                best_i = i;
            }
        }
        digits.push(best_i - 1);
    }
    MixedRadixIndex::new(digits, params.radices())
}

/// Outcome of a covering-distortion check over sampled members.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport {
    pub samples: u64,
    /// Worst certified distortion: slot-wise l1 error plus the analytic tail.
    pub worst_certified: f64,
    pub tail_bound: f64,
    pub threshold: f64,
    pub violations: u64,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Certified distortion between a member and its quantized reconstruction:
/// the l1 error over 0..=C2 plus the analytic geometric tail bound. This
/// upper-bounds rho via the l1 route.
pub fn certified_distortion(
    params: &CoveringParams,
    class: &DecayClass,
    k: &ImpulseResponse,
    reconstruction: &ImpulseResponse,
) -> f64 {
    let head: f64 = (0..=params.c2)
        .map(|t| (k.get(t) - reconstruction.get(t)).abs())
        .sum();
    // beyond the sampled support the envelope bound covers whatever tail the
    // member has, stored or not
    head + params.tail_bound(class)
}

/// Draws `samples` random members (support C2 + 10) and certifies that each
/// lies within eps of its quantized reconstruction.
pub fn verify_cover(
    params: &CoveringParams,
    class: &DecayClass,
    eps: f64,
    samples: u64,
    seed: u64,
) -> Result<CoverReport> {
    let mut rng = SplitMix64::new(seed);
    let support = params.c2 + 10;
    let mut worst = 0.0f64;
    let mut violations = 0u64;
    for _ in 0..samples {
        let k = class.random_member(support, rng.next_u64());
        let idx = quantize(params, class, &k)?;
        let recon = covering_element(params, class, &idx)?;
        let d = certified_distortion(params, class, &k, &recon);
        if d > worst {
            worst = d;
        }
        if d > eps {
            violations += 1;
        }
    }
    Ok(CoverReport {
        samples,
        worst_certified: worst,
        tail_bound: params.tail_bound(class),
        threshold: eps,
        violations,
    })
}

/// log2 of the covering cardinality, sum_t log2 n_t.
pub fn covering_log2_cardinality(params: &CoveringParams) -> f64 {
    params.counts.iter().map(|&n| (n as f64).log2()).sum()
}

/// The exact covering cardinality prod_t n_t.
pub fn covering_cardinality_exact(params: &CoveringParams) -> BigUint {
    params
        .counts
        .iter()
        .fold(BigUint::from(1u32), |acc, &n| acc * n)
}

/// The constants K1..K6 entering the closed-form covering bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
}

pub fn k_constants(class: &DecayClass) -> KConstants {
    let (a, b) = (class.a(), class.b());
    let k1 = (2.0 / (1.0 - (-b).exp())).ln() / b;
    let k2 = -(GAMMA * b / 2.0) * k1 + GAMMA * b / 2.0 + 2.0;
    let k3 = k1 + 1.0;
    let k4 = k2 / b + GAMMA / 2.0 * k3;
    let k5 = GAMMA / b * a.ln() + GAMMA * k3;
    let k6 = k4 * a.ln() + k3 * k2;
    KConstants {
        k1,
        k2,
        k3,
        k4,
        k5,
        k6,
    }
}

/// The closed-form upper bound on log2 of the covering cardinality:
/// (gamma/2b) ln^2(a/eps) + (gamma/b) ln(1/eps) ln(C2+1) + K4 ln(1/eps)
/// + K5 ln(C2+1) + K6.
pub fn covering_upper_bound(class: &DecayClass, eps: f64) -> Result<f64> {
    let params = covering_params(class, eps)?;
    let k = k_constants(class);
    let b = class.b();
    let l = (class.a() / eps).ln();
    let linv = (1.0 / eps).ln();
    let lc = ((params.c2 + 1) as f64).ln();
    Ok(GAMMA / (2.0 * b) * l * l + GAMMA / b * linv * lc + k.k4 * linv + k.k5 * lc + k.k6)
}
