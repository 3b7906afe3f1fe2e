//! Monte Carlo checks of swap rounding: per-element marginals against
//! `(1 - gamma) alpha` and lower tails of `|R ∩ S|` against
//! `exp(-gamma t^2 / (20 mu))`.

use serde::Serialize;

use crate::error::Result;
use crate::matroid::Matroid;
use crate::rational::{fmt_q, to_f64, Q};
use crate::rng::{derive_seed, rng_from};
use crate::subset::Subset;
use crate::swap::SwapRounder;

#[derive(Debug, Clone)]
pub struct StatSpec {
    pub m1: Matroid,
    pub m2: Matroid,
    pub alpha: Q,
    pub gamma: Q,
    pub trials: usize,
    pub targets: Vec<Subset>,
    /// Trial `k` uses the stream `derive_seed(seed, [k])`.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalVerdict {
    pub element: usize,
    pub expected: f64,
    pub empirical: f64,
    /// Binomial standard deviation of the empirical frequency.
    pub sigma: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailPoint {
    pub t: usize,
    pub empirical: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCurve {
    pub set: Vec<usize>,
    pub mu: f64,
    pub points: Vec<TailPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatReport {
    pub alpha: String,
    pub gamma: String,
    pub trials: usize,
    pub seed: u64,
    pub marginals: Vec<MarginalVerdict>,
    pub tails: Vec<TailCurve>,
    pub pass: bool,
}

/// Binomial standard deviation of a frequency estimate.
pub fn binomial_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Runs `trials` independent roundings. With zero trials the report has no
/// verdicts (and passes vacuously).
pub fn stat_runner(spec: &StatSpec) -> Result<StatReport> {
    let mut report = StatReport {
        alpha: fmt_q(&spec.alpha),
        gamma: fmt_q(&spec.gamma),
        trials: spec.trials,
        seed: spec.seed,
        marginals: vec![],
        tails: vec![],
        pass: true,
    };
    if spec.trials == 0 {
        return Ok(report);
    }
    let rounder = SwapRounder::new(&spec.m1, &spec.m2, &spec.alpha, &spec.gamma)?;
    let n = spec.m1.universe();
    let mut hits = vec![0usize; n];
    // sizes[k][s] = number of trials with |R ∩ S_k| = s
    let mut sizes: Vec<Vec<usize>> = spec.targets.iter().map(|s| vec![0; s.len() + 1]).collect();
    for trial in 0..spec.trials {
        let r = rounder.sample(&mut rng_from(derive_seed(spec.seed, &[trial as u64])))?;
        for e in r.iter() {
            hits[e] += 1;
        }
        for (k, s) in spec.targets.iter().enumerate() {
            sizes[k][r.intersection(s).len()] += 1;
        }
    }
    let gamma = to_f64(&spec.gamma);
    let expected = (1.0 - gamma) * to_f64(&spec.alpha);
    let sigma = binomial_sigma(expected, spec.trials);
    for e in spec.m1.ground().iter() {
        let empirical = hits[e] as f64 / spec.trials as f64;
        let pass = (empirical - expected).abs() <= 3.0 * sigma;
        report.pass &= pass;
        report.marginals.push(MarginalVerdict { element: e, expected, empirical, sigma, pass });
    }
    for (s, counts) in spec.targets.iter().zip(&sizes) {
        let mu = expected * s.len() as f64;
        let mut points = Vec::new();
        for t in 1..=(mu.floor() as usize) {
            let cutoff = mu - t as f64;
            let below: usize = counts.iter().enumerate().filter(|(size, _)| *size as f64 <= cutoff).map(|(_, c)| c).sum();
            let empirical = below as f64 / spec.trials as f64;
            let bound = (-gamma * (t * t) as f64 / (20.0 * mu)).exp();
            let slack = 3.0 * binomial_sigma(bound.min(1.0), spec.trials);
            let pass = empirical <= bound + slack;
            report.pass &= pass;
            points.push(TailPoint { t, empirical, bound, slack, pass });
        }
        report.tails.push(TailCurve { set: s.to_vec(), mu, points });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn spec(trials: usize) -> StatSpec {
        let g = Matroid::graphic(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)]).unwrap();
        let p = Matroid::partition(6, &[vec![0, 1, 2], vec![3, 4, 5]], &[2, 2]).unwrap();
        StatSpec {
            m1: g,
            m2: p,
            alpha: q(1, 2),
            gamma: q(1, 4),
            trials,
            targets: vec![Subset::full(6), Subset::from_ids(6, [0, 1, 2])],
            seed: 42,
        }
    }

    #[test]
    fn zero_trials_empty_report() {
        let r = stat_runner(&spec(0)).unwrap();
        assert!(r.marginals.is_empty() && r.tails.is_empty() && r.pass);
    }

    #[test]
    fn small_suite_passes() {
        let r = stat_runner(&spec(4000)).unwrap();
        assert_eq!(r.marginals.len(), 6);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.tails[0].points.len(), 2);
        assert_eq!(stat_runner(&spec(200)).unwrap(), stat_runner(&spec(200)).unwrap());
    }
}
