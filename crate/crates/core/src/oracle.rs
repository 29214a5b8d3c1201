//! Brute-force ground truth on tiny discretized instances.
//!
//! A finite surrogate of the class is built by gridding each coordinate of
//! the envelope box; covering and packing numbers on it are then computed
//! exactly (min dominating set / max clique by branch and bound) and checked
//! against the covering-packing sandwich
//! M(2 eps) <= N(eps) <= M(eps).
//!
//! Every distance comparison against a threshold is interval-certified: the
//! decision is made only once the enclosure excludes the threshold,
//! tightening the H-infinity tolerance as needed. The full class's
//! compactness is a hypothesis of the sandwich, not something checked here;
//! the finite surrogate satisfies it trivially.

use crate::class::{DecayClass, ImpulseResponse};
use crate::error::{Error, Result};
use crate::norms::{rho, NormInterval};

/// Cap on discretized instance size (distance matrix stays desk-scale).
pub const MAX_POINTS: usize = 10_000;
/// Cap on exact search (bitmask branch and bound).
pub const MAX_EXACT: usize = 24;

const BASE_TOL: f64 = 1e-9;
const TIGHTEN: [f64; 3] = [1e-9, 1e-11, 1e-12];

/// A finite set of impulse responses with precomputed certified pairwise
/// distances.
#[derive(Debug, Clone)]
pub struct FiniteMetricSet {
    points: Vec<ImpulseResponse>,
    dist: Vec<Vec<NormInterval>>,
}

impl FiniteMetricSet {
    pub fn new(points: Vec<ImpulseResponse>) -> Result<Self> {
        if points.len() > MAX_POINTS {
            return Err(Error::TooLarge(format!(
                "{} points exceeds the cap {MAX_POINTS}",
                points.len()
            )));
        }
        let n = points.len();
        let mut dist = vec![vec![NormInterval::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = rho(&points[i], &points[j], BASE_TOL)?;
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        Ok(Self { points, dist })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ImpulseResponse] {
        &self.points
    }

    pub fn distance(&self, i: usize, j: usize) -> NormInterval {
        self.dist[i][j]
    }

    /// Certified comparison of d(i, j) against `eps`: Ok(true) means
    /// d > eps, Ok(false) means d <= eps. Tightens the enclosure until the
    /// threshold is excluded (a boundary-exact distance resolves once the
    /// interval collapses onto it).
    pub fn certified_greater(&self, i: usize, j: usize, eps: f64) -> Result<bool> {
        let mut d = self.dist[i][j];
        for (step, &tol) in TIGHTEN.iter().enumerate() {
            if d.lower() > eps {
                return Ok(true);
            }
            if d.upper() <= eps {
                return Ok(false);
            }
            if step + 1 < TIGHTEN.len() {
                d = rho(&self.points[i], &self.points[j], tol / 100.0)?;
            }
        }
        Err(Error::Ambiguous {
            lower: d.lower(),
            upper: d.upper(),
            threshold: eps,
        })
    }

    fn check_exact_cap(&self) -> Result<()> {
        if self.len() > MAX_EXACT {
            return Err(Error::TooLarge(format!(
                "{} points exceeds the exact-search cap {MAX_EXACT}",
                self.len()
            )));
        }
        Ok(())
    }
}

/// Grids each coordinate t <= T into `levels` evenly spaced values across
/// [-a e^{-bt}, a e^{-bt}] and takes all combinations.
pub fn discretize_class(class: &DecayClass, t_max: usize, levels: usize) -> Result<FiniteMetricSet> {
    if levels < 2 {
        return Err(Error::TooLarge(format!("levels = {levels} < 2")));
    }
    let count = (levels as u128).checked_pow(t_max as u32 + 1);
    match count {
        Some(c) if c <= MAX_POINTS as u128 => {}
        _ => {
            return Err(Error::TooLarge(format!(
                "{levels}^{} points requested",
                t_max + 1
            )))
        }
    }
    let grids: Vec<Vec<f64>> = (0..=t_max)
        .map(|t| {
            let env = class.envelope(t);
            (0..levels)
                .map(|j| -env + 2.0 * j as f64 * env / (levels as f64 - 1.0))
                .collect()
        })
        .collect();
    let mut points = Vec::new();
    let mut digits = vec![0usize; t_max + 1];
    loop {
        let k = ImpulseResponse::new((0..=t_max).map(|t| grids[t][digits[t]]).collect());
        debug_assert!(class.is_member(&k, 4.0 * f64::EPSILON));
        points.push(k);
        let mut carry = 0;
        loop {
            digits[carry] += 1;
            if digits[carry] < levels {
                break;
            }
            digits[carry] = 0;
            carry += 1;
            if carry > t_max {
                return FiniteMetricSet::new(points);
            }
        }
    }
}

/// Greedily builds a maximal eps-packing: every pair of chosen points is
/// certifiably more than eps apart, and by maximality every remaining point
/// is within eps of a chosen one, so the result is also an eps-covering.
pub fn greedy_maximal_packing(set: &FiniteMetricSet, eps: f64) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..set.len() {
        let mut separated = true;
        for &c in &chosen {
            if !set.certified_greater(i, c, eps)? {
                separated = false;
                break;
            }
        }
        if separated {
            chosen.push(i);
        }
    }
    // maximality doubles as a covering certificate
    for i in 0..set.len() {
        let covered = chosen
            .iter()
            .map(|&c| {
                if c == i {
                    Ok(true)
                } else {
                    set.certified_greater(i, c, eps).map(|g| !g)
                }
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .any(|x| x);
        if !covered {
            return Err(Error::InvariantViolation(format!(
                "greedy packing is not maximal: point {i} uncovered"
            )));
        }
    }
    Ok(chosen)
}

/// Adjacency: edges[i] bit j set iff d(i, j) > eps (certified).
fn separation_masks(set: &FiniteMetricSet, eps: f64) -> Result<Vec<u32>> {
    let n = set.len();
    let mut masks = vec![0u32; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if set.certified_greater(i, j, eps)? {
                masks[i] |= 1 << j;
                masks[j] |= 1 << i;
            }
        }
    }
    Ok(masks)
}

/// Exact maximum eps-packing cardinality: maximum clique on the "> eps"
/// graph, by branch and bound over bitmasks.
pub fn exact_packing_number(set: &FiniteMetricSet, eps: f64) -> Result<usize> {
    set.check_exact_cap()?;
    let masks = separation_masks(set, eps)?;
    let n = set.len();
    let all: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };

    fn grow(masks: &[u32], clique_size: usize, candidates: u32, best: &mut usize) {
        if clique_size + candidates.count_ones() as usize <= *best {
            return;
        }
        if candidates == 0 {
            *best = (*best).max(clique_size);
            return;
        }
        let mut cands = candidates;
        while cands != 0 {
            if clique_size + cands.count_ones() as usize <= *best {
                return;
            }
            let v = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            grow(masks, clique_size + 1, cands & masks[v], best);
        }
    }

    let mut best = 0usize;
    grow(&masks, 0, all, &mut best);
    Ok(best)
}

/// Exact minimum eps-covering cardinality: minimum set of centers such that
/// every point is within eps (certified) of one of them. Branch and bound,
/// always branching on the point with the fewest admissible centers.
pub fn exact_covering_number(set: &FiniteMetricSet, eps: f64) -> Result<usize> {
    set.check_exact_cap()?;
    let n = set.len();
    // covers[c] = bitmask of points within eps of center c (incl. itself)
    let mut covers = vec![0u32; n];
    for (c, cover) in covers.iter_mut().enumerate() {
        for p in 0..n {
            if c == p || !set.certified_greater(c, p, eps)? {
                *cover |= 1 << p;
            }
        }
    }
    let all: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };

    fn search(covers: &[u32], all: u32, covered: u32, used: usize, best: &mut usize) {
        if covered == all {
            *best = (*best).min(used);
            return;
        }
        if used + 1 >= *best {
            return;
        }
        // the uncovered point with the fewest candidate centers
        let mut pick = usize::MAX;
        let mut pick_count = usize::MAX;
        let mut rem = all & !covered;
        while rem != 0 {
            let p = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            let cnt = covers
                .iter()
                .filter(|&&m| m & (1 << p) != 0)
                .count();
            if cnt < pick_count {
                pick_count = cnt;
                pick = p;
            }
        }
        for c in 0..covers.len() {
            if covers[c] & (1 << pick) != 0 {
                search(covers, all, covered | covers[c], used + 1, best);
            }
        }
    }

    let mut best = n; // every point covers itself, so n centers always work
    search(&covers, all, 0, 0, &mut best);
    Ok(best)
}

/// The covering-packing sandwich on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SandwichReport {
    pub m_2eps: usize,
    pub n_eps: usize,
    pub m_eps: usize,
}

impl SandwichReport {
    pub fn ok(&self) -> bool {
        self.m_2eps <= self.n_eps && self.n_eps <= self.m_eps
    }
}

/// Computes exact M(2 eps), N(eps), M(eps) and reports the chain.
pub fn sandwich_check(set: &FiniteMetricSet, eps: f64) -> Result<SandwichReport> {
    Ok(SandwichReport {
        m_2eps: exact_packing_number(set, 2.0 * eps)?,
        n_eps: exact_covering_number(set, eps)?,
        m_eps: exact_packing_number(set, eps)?,
    })
}
