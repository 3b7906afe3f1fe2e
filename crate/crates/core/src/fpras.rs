//! Peeling: repeatedly sample common independent sets by swap rounding at
//! `1/chi_max` of the remaining elements, then color the leftovers with the
//! two-matroid pipeline.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::coloring::Coloring;
use crate::conflict::color_intersection;
use crate::error::{Error, Result};
use crate::intersection::check_shared;
use crate::matroid::Matroid;
use crate::rational::{ceil_log_ratio, ceil_usize, fmt_q, ln_interval, q, qi, qu, Q};
use crate::rng::{derive_seed, rng_from};
use crate::subset::Subset;
use crate::swap::SwapRounder;
use crate::union::chromatic_number;

/// `eps` must be below this unless the unsafe flag is set.
pub fn safe_epsilon_limit() -> Q {
    q(1, 1000)
}

/// Shrink factor the round count is computed from: `1 - eps + 100 eps^2`,
/// or `1 - eps` when that is not below one (only reachable with unsafe
/// epsilons).
pub fn decay_base(eps: &Q) -> Q {
    let base = Q::one() - eps + qi(100) * eps * eps;
    if base < Q::one() {
        base
    } else {
        Q::one() - eps
    }
}

/// Number of peeling rounds, `ceil(ln eps / ln base)`.
pub fn round_count(eps: &Q) -> Result<usize> {
    let l: BigInt = ceil_log_ratio(eps, &decay_base(eps))?;
    l.to_usize().ok_or_else(|| Error::Refusal("round count does not fit in memory".into()))
}

fn check_epsilon(eps: &Q, unsafe_epsilon: bool) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::Contract("epsilon must be positive".into()));
    }
    if unsafe_epsilon {
        if *eps > q(1, 2) {
            return Err(Error::Contract("epsilon above 1/2 is not supported even with the unsafe flag".into()));
        }
    } else if *eps >= safe_epsilon_limit() {
        return Err(Error::Contract(format!(
            "epsilon {} is outside (0, 1/1000); pass the unsafe flag to run anyway",
            fmt_q(eps)
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundStats {
    pub round: usize,
    pub live_before: usize,
    pub chi_before: usize,
    pub chi_after: usize,
    /// Number of sets sampled, `ceil(eps * chi_before)`.
    pub sampled: usize,
    pub sampled_sizes: Vec<usize>,
    pub removed: usize,
}

impl RoundStats {
    pub fn decay_ratio(&self) -> f64 {
        self.chi_after as f64 / self.chi_before as f64
    }
}

#[derive(Debug, Clone)]
pub struct PeelState {
    pub rounds_planned: usize,
    pub live: Subset,
    pub classes: Vec<Subset>,
    pub rounds: Vec<RoundStats>,
}

fn chi_max(m1: &Matroid, m2: &Matroid) -> usize {
    chromatic_number(m1).0.max(chromatic_number(m2).0)
}

/// Runs the peeling rounds. Round `r` sample `s` uses the stream
/// `derive_seed(seed, [r, s])`.
pub fn peel_rounds(m1: &Matroid, m2: &Matroid, eps: &Q, unsafe_epsilon: bool, seed: u64) -> Result<PeelState> {
    check_shared(m1, m2)?;
    check_epsilon(eps, unsafe_epsilon)?;
    let planned = round_count(eps)?;
    let mut live = m1.ground().clone();
    let mut classes = Vec::new();
    let mut rounds = Vec::new();
    let mut chi = chi_max(m1, m2);
    for round in 0..planned {
        if chi == 0 {
            break;
        }
        let r1 = m1.restrict(&live)?;
        let r2 = m2.restrict(&live)?;
        let count = ceil_usize(&(eps * qu(chi)));
        let rounder = SwapRounder::new(&r1, &r2, &Q::new(BigInt::one(), chi.into()), eps)?;
        let mut removed = Subset::empty(m1.universe());
        let mut sizes = Vec::with_capacity(count);
        for s in 0..count {
            let mut rng = rng_from(derive_seed(seed, &[round as u64, s as u64]));
            let set = rounder.sample(&mut rng)?;
            sizes.push(set.len());
            removed.union_with(&set);
            classes.push(set);
        }
        let before = live.len();
        live.difference_with(&removed);
        let after = chi_max(&m1.restrict(&live)?, &m2.restrict(&live)?);
        if after > chi {
            return Err(Error::Invariant("chromatic number grew after removing elements".into()));
        }
        rounds.push(RoundStats {
            round,
            live_before: before,
            chi_before: chi,
            chi_after: after,
            sampled: count,
            sampled_sizes: sizes,
            removed: removed.len(),
        });
        chi = after;
    }
    Ok(PeelState { rounds_planned: planned, live, classes, rounds })
}

#[derive(Debug, Clone, Serialize)]
pub struct FprasReport {
    pub epsilon: String,
    pub unsafe_epsilon: bool,
    pub seed: u64,
    pub rounds_planned: usize,
    pub chi_max: usize,
    pub rounds: Vec<RoundStats>,
    pub phase1_classes: usize,
    pub phase2_classes: usize,
    /// Classes before duplicate removal: sampled sets plus leftover classes.
    pub total_classes: usize,
    /// Classes after duplicate removal and dropping empty classes.
    pub final_classes: usize,
    /// `(1 + 400 eps) chi_max`.
    pub target_bound: String,
    pub within_target: bool,
    pub valid: bool,
}

/// Peeling followed by the two-matroid pipeline on what is left; the sampled
/// sets and the leftover classes are made disjoint by keeping each element in
/// its earliest class.
pub fn fpras_cover(m1: &Matroid, m2: &Matroid, eps: &Q, unsafe_epsilon: bool, seed: u64) -> Result<(Coloring, FprasReport)> {
    let chi = chi_max(m1, m2);
    let state = peel_rounds(m1, m2, eps, unsafe_epsilon, seed)?;
    let phase1 = state.classes.len();
    let mut classes = state.classes;
    let mut phase2 = 0;
    if !state.live.is_empty() {
        let rest = [m1.restrict(&state.live)?, m2.restrict(&state.live)?];
        let leftover = color_intersection(&rest)?;
        phase2 = leftover.len();
        classes.extend(leftover.classes);
    }
    let total = classes.len();
    let coloring = Coloring::new(classes).dedup_earliest();
    let valid = coloring.is_valid(&[m1.clone(), m2.clone()], m1.ground());
    if !valid {
        return Err(Error::Invariant("peeling produced an invalid coloring".into()));
    }
    let bound = (Q::one() + qi(400) * eps) * qu(chi);
    let report = FprasReport {
        epsilon: fmt_q(eps),
        unsafe_epsilon,
        seed,
        rounds_planned: state.rounds_planned,
        chi_max: chi,
        rounds: state.rounds,
        phase1_classes: phase1,
        phase2_classes: phase2,
        total_classes: total,
        final_classes: coloring.len(),
        within_target: qu(coloring.len()) <= bound,
        target_bound: fmt_q(&bound),
        valid,
    };
    Ok((coloring, report))
}

/// Size threshold constant of the wrapper.
pub fn wrapper_constant() -> Q {
    Q::from_integer(BigInt::from(1000u32).pow(5))
}

#[derive(Debug, Clone, Serialize)]
pub struct WrapperReport {
    pub epsilon: String,
    /// `"pipeline"` or `"peeling"`.
    pub branch: String,
    pub chi_max: usize,
    /// Upper bound on `C ln(n) / eps^5`, the chi_max needed for peeling.
    pub threshold: String,
    pub repetitions: usize,
    pub classes: usize,
    pub warning: Option<String>,
}

/// Peeling with `eps / 1000` when `chi_max >= C ln(n) / eps^5` (repeated
/// `repetitions` times with derived seeds, keeping the fewest classes);
/// otherwise the two-matroid pipeline.
pub fn theorem_wrapper(m1: &Matroid, m2: &Matroid, eps: &Q, seed: u64, repetitions: usize) -> Result<(Coloring, WrapperReport)> {
    check_shared(m1, m2)?;
    if !eps.is_positive() {
        return Err(Error::Contract("epsilon must be positive".into()));
    }
    let n = m1.ground().len();
    let chi = chi_max(m1, m2);
    let ln_n = if n <= 1 { Q::zero() } else { ln_interval(&qu(n), 40).hi };
    let threshold = wrapper_constant() * ln_n / (eps * eps * eps * eps * eps);
    let peel = *eps < Q::one() && qu(chi) >= threshold && n > 0;
    let (coloring, branch, warning) = if peel {
        let small = eps / qi(1000);
        let mut best: Option<Coloring> = None;
        for rep in 0..repetitions.max(1) {
            let (c, _) = fpras_cover(m1, m2, &small, false, derive_seed(seed, &[rep as u64]))?;
            if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                best = Some(c);
            }
        }
        (best.unwrap_or_default(), "peeling", None)
    } else {
        let warning = (*eps < Q::one()).then(|| {
            format!("chi_max {chi} is below the peeling threshold; used the two-matroid pipeline")
        });
        (color_intersection(&[m1.clone(), m2.clone()])?, "pipeline", warning)
    };
    let report = WrapperReport {
        epsilon: fmt_q(eps),
        branch: branch.into(),
        chi_max: chi,
        threshold: fmt_q(&threshold),
        repetitions: if peel { repetitions.max(1) } else { 0 },
        classes: coloring.len(),
        warning,
    };
    if !coloring.is_valid(&[m1.clone(), m2.clone()], m1.ground()) {
        return Err(Error::Invariant("wrapper produced an invalid coloring".into()));
    }
    Ok((coloring, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_counts() {
        assert_eq!(round_count(&q(1, 1000)).unwrap(), 7672);
        assert_eq!(round_count(&q(1, 20)).unwrap(), 59);
        assert_eq!(round_count(&q(1, 10)).unwrap(), 22);
        assert_eq!(round_count(&q(1, 5)).unwrap(), 8);
        assert_eq!(ceil_usize(&(q(1, 1000) * qu(5000))), 5);
    }

    #[test]
    fn epsilon_range_enforced() {
        let m = Matroid::free(3);
        assert!(matches!(peel_rounds(&m, &m, &q(1, 10), false, 0), Err(Error::Contract(_))));
        assert!(peel_rounds(&m, &m, &q(1, 10), true, 0).is_ok());
    }

    #[test]
    fn free_matroids_single_class() {
        let m = Matroid::free(5);
        let (c, report) = fpras_cover(&m, &m, &q(1, 5), true, 1).unwrap();
        assert!(report.valid);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn parallel_edges_with_partition() {
        // 12 parallel copies of three triangle edges: chi = 6 for the
        // graphic side.
        let mut ends = Vec::new();
        for _ in 0..4 {
            ends.extend([(0, 1), (1, 2), (0, 2)]);
        }
        let g = Matroid::graphic(3, &ends).unwrap();
        let p = Matroid::partition(12, &[(0..6).collect(), (6..12).collect()], &[1, 1]).unwrap();
        let (c, report) = fpras_cover(&g, &p, &q(1, 5), true, 9).unwrap();
        assert!(c.is_valid(&[g.clone(), p.clone()], &Subset::full(12)));
        assert!(report.rounds.windows(2).all(|w| w[1].chi_before <= w[0].chi_before));
        let again = fpras_cover(&g, &p, &q(1, 5), true, 9).unwrap();
        assert_eq!(again.0, c);
    }

    #[test]
    fn wrapper_falls_back() {
        let g = Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let f = Matroid::free(6);
        let (c, r) = theorem_wrapper(&g, &f, &qi(2), 0, 1).unwrap();
        assert_eq!(r.branch, "pipeline");
        assert!(r.warning.is_none());
        assert!(c.len() <= 4);
        let (_, r) = theorem_wrapper(&g, &f, &q(1, 2), 0, 1).unwrap();
        assert_eq!(r.branch, "pipeline");
        assert!(r.warning.is_some());
    }

    #[test]
    fn empty_ground_peels_nothing() {
        let m = Matroid::free(0);
        let s = peel_rounds(&m, &m, &q(1, 2000), false, 0).unwrap();
        assert!(s.rounds.is_empty() && s.classes.is_empty());
    }
}
