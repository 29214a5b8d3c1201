//! The explicit (2 eps)-packing of C(a, b).
//!
//! With C1 = ceil(ln(a/eps) / b) - 1, each time slot t <= C1 carries
//! n_t = ceil(a e^{-bt} / eps) - 1 quantization steps of size
//! delta_t = 2 a e^{-bt} / n_t > 2 eps; a packing element places coefficient
//! -a e^{-bt} + d_t delta_t at slot t (digit d_t in 0..=n_t) and is zero
//! beyond C1. Elements differing in any slot are more than 2 eps apart in
//! l2, hence in rho.

use crate::class::{DecayClass, ImpulseResponse, SplitMix64};
use crate::entropy::GAMMA;
use crate::error::{Error, Result};
use crate::index::{enumerate_indices, MixedRadixIndex};
use crate::norms::l2_norm;
use num_bigint::BigUint;

/// Exhaustive pair verification is used up to this cardinality.
pub const EXHAUSTIVE_PAIR_CAP: u64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PackingParams {
    eps: f64,
    c1: usize,
    /// n_t for t = 0..=C1; the packing uses n_t + 1 digit values per slot.
    counts: Vec<u64>,
    /// delta_t = 2 a e^{-bt} / n_t, strictly greater than 2 eps.
    steps: Vec<f64>,
}

impl PackingParams {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn c1(&self) -> usize {
        self.c1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// Per-slot radices n_t + 1 for index enumeration.
    pub fn radices(&self) -> Vec<u64> {
        self.counts.iter().map(|&n| n + 1).collect()
    }
}

/// Derives C1, the per-slot counts and the step sizes for a (2 eps)-packing.
pub fn packing_params(class: &DecayClass, eps: f64) -> Result<PackingParams> {
    class.check_eps(eps)?;
    let b = class.b();
    let c1_f = (class.a() / eps).ln() / b;
    let c1 = (c1_f.ceil() as i64 - 1).max(0) as usize;
    let mut counts = Vec::with_capacity(c1 + 1);
    let mut steps = Vec::with_capacity(c1 + 1);
    for t in 0..=c1 {
        let env = class.envelope(t);
        let n = (env / eps).ceil() as i64 - 1;
        if n < 1 {
            return Err(Error::InvariantViolation(format!(
                "packing count n_{t} = {n} < 1 (a e^{{-bt}} / eps rounded to <= 1)"
            )));
        }
        let n = n as u64;
        let delta = 2.0 * env / n as f64;
        if delta <= 2.0 * eps {
            return Err(Error::InvariantViolation(format!(
                "packing step delta_{t} = {delta} <= 2 eps = {}",
                2.0 * eps
            )));
        }
        counts.push(n);
        steps.push(delta);
    }
    Ok(PackingParams {
        eps,
        c1,
        counts,
        steps,
    })
}

/// The packing element k~[t] = -a e^{-bt} + d_t delta_t on 0..=C1.
pub fn packing_element(
    params: &PackingParams,
    class: &DecayClass,
    idx: &MixedRadixIndex,
) -> Result<ImpulseResponse> {
    if idx.len() != params.c1 + 1 {
        return Err(Error::IndexLengthMismatch {
            digits: idx.len(),
            radices: params.c1 + 1,
        });
    }
    let mut coeffs = Vec::with_capacity(params.c1 + 1);
    for (t, &d) in idx.digits().iter().enumerate() {
        let n = params.counts[t];
        if d > n {
            return Err(Error::DigitOutOfRange {
                slot: t,
                digit: d,
                radix: n + 1,
            });
        }
        coeffs.push(-class.envelope(t) + d as f64 * params.steps[t]);
    }
    Ok(ImpulseResponse::new(coeffs))
}

/// log2 of the packing cardinality, sum_t log2(1 + n_t).
pub fn packing_log2_cardinality(params: &PackingParams) -> f64 {
    params.counts.iter().map(|&n| ((n + 1) as f64).log2()).sum()
}

/// The exact packing cardinality prod_t (1 + n_t).
pub fn packing_cardinality_exact(params: &PackingParams) -> BigUint {
    params
        .counts
        .iter()
        .fold(BigUint::from(1u32), |acc, &n| acc * (n + 1))
}

/// The closed-form lower bound
/// (gamma / 2b) ln^2(a/eps) - (gamma / 2) ln(a/eps) - b gamma / 2
/// on log2 of the packing cardinality.
pub fn packing_lower_bound(class: &DecayClass, eps: f64) -> Result<f64> {
    class.check_eps(eps)?;
    let l = (class.a() / eps).ln();
    let b = class.b();
    Ok(GAMMA / (2.0 * b) * l * l - GAMMA / 2.0 * l - b * GAMMA / 2.0)
}

/// Outcome of a separation check over element pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub min_separation: f64,
    pub threshold: f64,
    pub violations: u64,
}

impl SeparationReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Checks l2 separation > 2 eps between packing elements; the l2 distance is
/// a valid lower bound on rho (attained by the unit-impulse input).
///
/// Exhaustive over all pairs when the cardinality is at most
/// [`EXHAUSTIVE_PAIR_CAP`]; otherwise `pairs` random distinct pairs plus, per
/// slot, a representative adjacent-digit pair (the extremal case: distance
/// exactly delta_t).
pub fn verify_separation(
    params: &PackingParams,
    class: &DecayClass,
    eps: f64,
    pairs: u64,
    seed: u64,
) -> Result<SeparationReport> {
    let threshold = 2.0 * eps;
    let card = packing_cardinality_exact(params);
    let radices = params.radices();
    let mut min_sep = f64::INFINITY;
    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut record = |d: f64| {
        checked += 1;
        if d < min_sep {
            min_sep = d;
        }
        if d <= threshold {
            violations += 1;
        }
    };

    let exhaustive = card <= BigUint::from(EXHAUSTIVE_PAIR_CAP);
    if exhaustive {
        let elements: Vec<ImpulseResponse> = enumerate_indices(&radices)
            .map(|idx| packing_element(params, class, &idx))
            .collect::<Result<_>>()?;
        for i in 0..elements.len() {
            for j in (i + 1)..elements.len() {
                record(l2_norm(&elements[i].sub(&elements[j])));
            }
        }
    } else {
        let mut rng = SplitMix64::new(seed);
        let random_index = |rng: &mut SplitMix64| -> MixedRadixIndex {
            let digits: Vec<u64> = radices.iter().map(|&r| rng.next_below(r)).collect();
            MixedRadixIndex::new(digits, radices.clone()).expect("digits < radices")
        };
        let mut sampled = 0u64;
        while sampled < pairs {
            let ia = random_index(&mut rng);
            let ib = random_index(&mut rng);
            if ia == ib {
                continue;
            }
            let ka = packing_element(params, class, &ia)?;
            let kb = packing_element(params, class, &ib)?;
            record(l2_norm(&ka.sub(&kb)));
            sampled += 1;
        }
        // adjacent-digit pairs: the distance depends only on the slot, so one
        // representative per slot covers the worst case
        for t in 0..radices.len() {
            if radices[t] < 2 {
                continue;
            }
            let base = MixedRadixIndex::zeros(radices.clone())?;
            let mut digits = base.digits().to_vec();
            digits[t] = 1;
            let neighbor = MixedRadixIndex::new(digits, radices.clone())?;
            let ka = packing_element(params, class, &base)?;
            let kb = packing_element(params, class, &neighbor)?;
            record(l2_norm(&ka.sub(&kb)));
        }
    }

    Ok(SeparationReport {
        pairs_checked: checked,
        exhaustive,
        min_separation: min_sep,
        threshold,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon() -> (DecayClass, PackingParams) {
        let class = DecayClass::new(1.0, 1.0).unwrap();
        let params = packing_params(&class, 0.1).unwrap();
        (class, params)
    }

    #[test]
    fn canonical_params() {
        // (a=1, b=1, eps=0.1): values recomputed with 40-digit arithmetic
        let (_, p) = canon();
        assert_eq!(p.c1(), 2);
        assert_eq!(p.counts(), &[9, 3, 1]);
        let expect = [0.2222222222222222, 0.24525296078096154, 0.2706705664732254];
        for (s, e) in p.steps().iter().zip(&expect) {
            assert!((s - e).abs() < 1e-15);
        }
    }

    #[test]
    fn large_eps_single_slot() {
        // eps = 0.5: C1 = ceil(ln 2) - 1 = 0, n = [1], delta_0 = 2
        let class = DecayClass::new(1.0, 1.0).unwrap();
        let p = packing_params(&class, 0.5).unwrap();
        assert_eq!(p.c1(), 0);
        assert_eq!(p.counts(), &[1]);
        assert_eq!(p.steps(), &[2.0]);
        assert_eq!(packing_cardinality_exact(&p), BigUint::from(2u32));
        assert_eq!(packing_log2_cardinality(&p), 1.0);
    }

    #[test]
    fn rejects_eps_at_boundary() {
        let class = DecayClass::new(1.0, 1.0).unwrap();
        assert!(packing_params(&class, 1.0).is_err());
        assert!(packing_params(&class, 0.0).is_err());
        assert!(packing_params(&class, -0.1).is_err());
    }

    #[test]
    fn cardinality_both_paths() {
        let (_, p) = canon();
        assert_eq!(packing_cardinality_exact(&p), BigUint::from(80u32));
        let log2 = packing_log2_cardinality(&p);
        assert!((log2 - 80f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn element_edges_and_membership() {
        let (class, p) = canon();
        let radices = p.radices();
        let zero_idx = MixedRadixIndex::zeros(radices.clone()).unwrap();
        let lowest = packing_element(&p, &class, &zero_idx).unwrap();
        for (t, &v) in lowest.coeffs().iter().enumerate() {
            assert!((v + class.envelope(t)).abs() < 1e-15);
        }
        // top digits land exactly on +a e^{-bt}
        let top_digits: Vec<u64> = p.counts().to_vec();
        let top_idx = MixedRadixIndex::new(top_digits, radices.clone()).unwrap();
        let highest = packing_element(&p, &class, &top_idx).unwrap();
        for (t, &v) in highest.coeffs().iter().enumerate() {
            assert!((v - class.envelope(t)).abs() < 4.0 * f64::EPSILON * class.envelope(t));
        }
        // idx = (1, 0, 0): [-1 + 2/9, -e^{-1}, -e^{-2}]
        let idx = MixedRadixIndex::new(vec![1, 0, 0], radices.clone()).unwrap();
        let k = packing_element(&p, &class, &idx).unwrap();
        assert!((k.get(0) - (-1.0 + 2.0 / 9.0)).abs() < 1e-15);
        assert!((k.get(1) + (-1.0f64).exp()).abs() < 1e-15);
        assert!((k.get(2) + (-2.0f64).exp()).abs() < 1e-15);
        // every element is a member
        for idx in enumerate_indices(&radices) {
            let k = packing_element(&p, &class, &idx).unwrap();
            assert!(class.is_member(&k, 4.0 * f64::EPSILON));
        }
    }

    #[test]
    fn element_rejects_bad_digit() {
        let (class, p) = canon();
        let idx = MixedRadixIndex::new(vec![9, 3, 1], p.radices()).unwrap();
        assert!(packing_element(&p, &class, &idx).is_ok());
        let too_short = MixedRadixIndex::new(vec![0], vec![10]).unwrap();
        assert!(packing_element(&p, &class, &too_short).is_err());
    }

    #[test]
    fn lower_bound_value_and_ordering() {
        let (class, p) = canon();
        let lb = packing_lower_bound(&class, 0.1).unwrap();
        // gamma/2 ln^2(10) - gamma/2 ln(10) - gamma/2, recomputed offline
        assert!((lb - 1.4421994877547122).abs() < 1e-12);
        assert!(packing_log2_cardinality(&p) >= lb);
        // eps -> a^-: the bound tends to -b gamma / 2 (vacuous but valid)
        let near = packing_lower_bound(&class, 1.0 - 1e-12).unwrap();
        assert!((near - (-GAMMA / 2.0)).abs() < 1e-6);
    }

    #[test]
    fn exhaustive_separation() {
        let (class, p) = canon();
        let report = verify_separation(&p, &class, 0.1, 0, 0).unwrap();
        assert!(report.exhaustive);
        assert_eq!(report.pairs_checked, 80 * 79 / 2);
        assert!(report.ok());
        assert!(report.min_separation > 0.2);
    }

    #[test]
    fn sampled_separation_large_instance() {
        let class = DecayClass::new(1.0, 0.5).unwrap();
        let p = packing_params(&class, 1e-3).unwrap();
        assert!(packing_cardinality_exact(&p) > BigUint::from(EXHAUSTIVE_PAIR_CAP));
        let report = verify_separation(&p, &class, 1e-3, 200, 7).unwrap();
        assert!(!report.exhaustive);
        assert!(report.ok());
        // adjacent pairs sit at delta_t, which must exceed 2 eps
        assert!(report.min_separation > 2e-3);
    }

    #[test]
    fn bound_holds_on_grid() {
        for &a in &[0.5, 1.0, 10.0] {
            for &b in &[0.1, 1.0, 3.0] {
                for &r in &[0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
                    let class = DecayClass::new(a, b).unwrap();
                    let eps = r * a;
                    let p = packing_params(&class, eps).unwrap();
                    let lb = packing_lower_bound(&class, eps).unwrap();
                    assert!(
                        packing_log2_cardinality(&p) >= lb,
                        "violated at a={a} b={b} eps/a={r}"
                    );
                    for (t, &d) in p.steps().iter().enumerate() {
                        assert!(d > 2.0 * eps, "delta_{t} at a={a} b={b} eps/a={r}");
                    }
                }
            }
        }
    }
}
