//! The metric-entropy sandwich and its asymptotics.
//!
//! The true minimal covering number of the full class is not computable;
//! what is reported here is the constructive bracket
//! log2 M_{2 eps} <= H(eps) <= log2 N_eps together with the closed-form
//! bounds and the leading-order rate (gamma / 2b) ln^2(a / eps).

use crate::class::DecayClass;
use crate::covering::{covering_log2_cardinality, covering_params, covering_upper_bound};
use crate::error::Result;
use crate::packing::{packing_log2_cardinality, packing_lower_bound, packing_params};

/// gamma = log2(e), the nat-to-bit conversion constant in the rate.
pub const GAMMA: f64 = std::f64::consts::LOG2_E;

/// The corrected leading constant gamma / 2b of the entropy rate. Earlier
/// statements of this scaling used 1/b; that value is incorrect.
pub fn corrected_rate_constant(class: &DecayClass) -> f64 {
    GAMMA / (2.0 * class.b())
}

pub fn gamma_const() -> f64 {
    GAMMA
}

/// The leading-order entropy rate (gamma / 2b) ln^2(a / eps).
pub fn asymptotic_rate(class: &DecayClass, eps: f64) -> Result<f64> {
    class.check_eps(eps)?;
    let l = (class.a() / eps).ln();
    Ok(corrected_rate_constant(class) * l * l)
}

/// The constructive entropy bracket at one eps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub eps: f64,
    /// log2 M_{2 eps}: the packing count, a lower bound on the entropy.
    pub log2_packing: f64,
    /// log2 N_eps: the covering count, an upper bound on the entropy.
    pub log2_covering: f64,
    pub closed_form_lower: f64,
    pub closed_form_upper: f64,
    pub asymptotic: f64,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
}

pub fn entropy_report(class: &DecayClass, eps: f64) -> Result<EntropyReport> {
    let pp = packing_params(class, eps)?;
    let cp = covering_params(class, eps)?;
    let log2_packing = packing_log2_cardinality(&pp);
    let log2_covering = covering_log2_cardinality(&cp);
    let asymptotic = asymptotic_rate(class, eps)?;
    Ok(EntropyReport {
        eps,
        log2_packing,
        log2_covering,
        closed_form_lower: packing_lower_bound(class, eps)?,
        closed_form_upper: covering_upper_bound(class, eps)?,
        asymptotic,
        ratio_lower: log2_packing / asymptotic,
        ratio_upper: log2_covering / asymptotic,
    })
}

impl EntropyReport {
    /// The ordering guaranteed by construction:
    /// closed_form_lower <= log2_packing <= log2_covering <= closed_form_upper.
    pub fn ordering_ok(&self) -> bool {
        self.closed_form_lower <= self.log2_packing
            && self.log2_packing <= self.log2_covering
            && self.log2_covering <= self.closed_form_upper
    }
}

/// One sweep point of the remainder check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderPoint {
    pub eps: f64,
    /// r(eps) = max deviation of the two counts from the asymptotic rate.
    pub remainder: f64,
    /// g(eps) = ln(1/eps) ln(ln(1/eps)); the claimed remainder envelope up
    /// to a constant. Only positive for eps < 1/e.
    pub envelope: f64,
    /// remainder / envelope where the envelope is positive.
    pub constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderReport {
    pub points: Vec<RemainderPoint>,
    /// The fitted constant: the largest per-point ratio.
    pub fitted_c: f64,
    /// True when a finite constant fits every usable point with 2x margin,
    /// i.e. remainder <= 2 fitted_c * envelope throughout.
    pub ok: bool,
}

/// Checks that the bracket deviates from the rate by at most
/// C ln(1/eps) ln(ln(1/eps)) for a single constant C fitted across the sweep.
pub fn big_o_remainder_check(class: &DecayClass, sweep: &[f64]) -> Result<RemainderReport> {
    assert!(!sweep.is_empty(), "sweep must be nonempty");
    let mut points = Vec::with_capacity(sweep.len());
    let mut fitted_c = 0.0f64;
    let mut any_usable = false;
    for &eps in sweep {
        let rep = entropy_report(class, eps)?;
        let remainder = (rep.log2_covering - rep.asymptotic)
            .abs()
            .max((rep.log2_packing - rep.asymptotic).abs());
        let linv = (1.0 / eps).ln();
        let envelope = if linv > 1.0 { linv * linv.ln() } else { 0.0 };
        let constant = if envelope > 0.0 {
            any_usable = true;
            let c = remainder / envelope;
            if c > fitted_c {
                fitted_c = c;
            }
            Some(c)
        } else {
            None
        };
        points.push(RemainderPoint {
            eps,
            remainder,
            envelope,
            constant,
        });
    }
    let ok = any_usable && fitted_c.is_finite();
    Ok(RemainderReport {
        points,
        fitted_c,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_value() {
        let g = gamma_const();
        assert!((g - std::f64::consts::LOG2_E).abs() < 1e-16);
        assert!((g * g - 2.0813689810056075).abs() < 1e-12);
        assert!((g * std::f64::consts::LN_2 - 1.0).abs() <= 4.0 * f64::EPSILON);
        assert!(g > 1.0);
    }

    #[test]
    fn rate_values() {
        let class = DecayClass::new(1.0, 1.0).unwrap();
        let r = asymptotic_rate(&class, 0.1).unwrap();
        assert!((r - 3.824511055642875).abs() < 1e-12);
        // eps = a e^{-b}: ln(a/eps) = b, so the rate is gamma b / 2
        for &b in &[0.5, 1.0, 2.0] {
            let c = DecayClass::new(1.0, b).unwrap();
            let eps = (-b).exp();
            let r = asymptotic_rate(&c, eps).unwrap();
            assert!((r - GAMMA * b / 2.0).abs() < 1e-12);
        }
        // doubling b halves the rate at fixed ln(a/eps)
        let r1 = asymptotic_rate(&DecayClass::new(1.0, 1.0).unwrap(), 0.01).unwrap();
        let r2 = asymptotic_rate(&DecayClass::new(1.0, 2.0).unwrap(), 0.01).unwrap();
        assert!((r1 - 2.0 * r2).abs() < 1e-12);
        assert!(asymptotic_rate(&class, 1.5).is_err());
    }

    #[test]
    fn report_canonical() {
        let class = DecayClass::new(1.0, 1.0).unwrap();
        let rep = entropy_report(&class, 0.1).unwrap();
        assert!((rep.log2_packing - 80f64.log2()).abs() < 1e-12);
        assert!((rep.log2_covering - 105_600f64.log2()).abs() < 1e-12);
        assert!((rep.asymptotic - 3.824511055642875).abs() < 1e-12);
        assert!(rep.ordering_ok());
    }

    #[test]
    fn report_ordering_on_grid() {
        for &a in &[0.5, 1.0, 10.0] {
            for &b in &[0.1, 1.0, 3.0] {
                for &r in &[0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
                    let class = DecayClass::new(a, b).unwrap();
                    let rep = entropy_report(&class, r * a).unwrap();
                    assert!(rep.ordering_ok(), "a={a} b={b} r={r}");
                }
            }
        }
    }

    #[test]
    fn scale_invariance_in_eps_over_a() {
        // everything depends on eps only through eps/a except the explicit
        // ln(a) terms of the closed-form upper bound, which cancel against
        // the eps rescaling
        for &b in &[0.1, 1.0, 3.0] {
            for &r in &[0.5, 1e-2, 1e-5] {
                let scaled = entropy_report(&DecayClass::new(4.0, b).unwrap(), 4.0 * r).unwrap();
                let unit = entropy_report(&DecayClass::new(1.0, b).unwrap(), r).unwrap();
                assert!((scaled.log2_packing - unit.log2_packing).abs() < 1e-9);
                assert!((scaled.log2_covering - unit.log2_covering).abs() < 1e-9);
                assert!((scaled.closed_form_lower - unit.closed_form_lower).abs() < 1e-9);
                assert!((scaled.closed_form_upper - unit.closed_form_upper).abs() < 1e-9);
                assert!((scaled.asymptotic - unit.asymptotic).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ratios_tighten_along_sweep() {
        let class = DecayClass::new(1.0, 1.0).unwrap();
        let mut prev_width = f64::INFINITY;
        for i in 1..=8 {
            let eps = 10f64.powi(-i);
            let rep = entropy_report(&class, eps).unwrap();
            let width = rep.ratio_upper - rep.ratio_lower;
            assert!(width < prev_width, "width grew at eps = 1e-{i}");
            prev_width = width;
        }
    }

    #[test]
    fn remainder_fit() {
        let class = DecayClass::new(1.0, 1.0).unwrap();
        // single point: trivially fits
        let one = big_o_remainder_check(&class, &[1e-3]).unwrap();
        assert!(one.ok);
        assert_eq!(one.points.len(), 1);
        let sweep: Vec<f64> = (2..=8).map(|i| 10f64.powi(-i)).collect();
        let rep = big_o_remainder_check(&class, &sweep).unwrap();
        assert!(rep.ok);
        // the fitted constant is stable within a factor 2 across the tail
        let cs: Vec<f64> = rep.points.iter().filter_map(|p| p.constant).collect();
        let cmax = cs.iter().cloned().fold(f64::MIN, f64::max);
        let cmin = cs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(cmax / cmin < 2.0, "constants range {cmin}..{cmax}");
    }
}
