//! Command implementations behind the `matcolor` binary. Each returns a JSON
//! document and a status; the binary only parses arguments and prints.

use serde_json::{json, Value};

use crate::conflict::finalize_coloring;
use crate::error::{Error, Result};
use crate::fpras::{fpras_cover, theorem_wrapper};
use crate::harness::gen::{gen_random, gen_rota, RandomKind};
use crate::harness::io::{ColoringFile, Instance, InstanceFile};
use crate::harness::oracle::{brute_chi_intersection, covlp_opt};
use crate::harness::stats::{stat_runner, StatSpec};
use crate::harness::verify::{verify_coloring, Verdict};
use crate::losz::pseudocoloring;
use crate::matroid::Matroid;
use crate::rational::{fmt_q, Q};
use crate::rng::{derive_seed, rng_from};
use crate::subset::Subset;
use crate::swap::{decompose_point, SwapRounder};
use crate::union::chromatic_number;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Refusal = 2,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub status: Status,
    /// Human-readable trace lines, printed only on request.
    pub trace: Vec<String>,
}

impl Output {
    fn pass(json: Value) -> Output {
        Output { json, status: Status::Pass, trace: vec![] }
    }

    /// Error document with the status implied by the error kind.
    pub fn from_error(e: &Error) -> Output {
        let kind = match e {
            Error::Domain(_) => "domain",
            Error::Contract(_) => "contract",
            Error::Invariant(_) => "invariant",
            Error::Refusal(_) => "refusal",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        };
        let status = if matches!(e, Error::Refusal(_)) { Status::Refusal } else { Status::Fail };
        Output { json: json!({"error": e.to_string(), "kind": kind}), status, trace: vec![] }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("json renders");
        s.push('\n');
        s
    }
}

fn classes_json(inst: &Instance, classes: &[Subset]) -> Value {
    json!(classes.iter().map(|c| inst.ground.labels_of(c)).collect::<Vec<_>>())
}

fn two(inst: &Instance) -> Result<(&Matroid, &Matroid)> {
    match &inst.matroids[..] {
        [a, b] => Ok((a, b)),
        ms => Err(Error::Contract(format!("this command needs exactly two matroids, got {}", ms.len()))),
    }
}

pub fn chi(file: &InstanceFile) -> Result<Output> {
    let inst = file.build()?;
    let mut per = Vec::new();
    let mut max = 0;
    for m in &inst.matroids {
        let (t, cert) = chromatic_number(m);
        max = max.max(t);
        per.push(json!({"chi": t, "certificate": classes_json(&inst, &cert.classes)}));
    }
    Ok(Output::pass(json!({"matroids": per, "chi_max": max})))
}

/// Colors with the first `k` matroids of the instance (all when `None`).
pub fn color(file: &InstanceFile, k: Option<usize>) -> Result<Output> {
    let inst = file.build()?;
    let k = k.unwrap_or(inst.matroids.len());
    if k == 0 || k > inst.matroids.len() {
        return Err(Error::Contract(format!("k must be between 1 and {}", inst.matroids.len())));
    }
    let ms = &inst.matroids[..k];
    let pseudo = pseudocoloring(ms)?;
    let coloring = finalize_coloring(ms, &pseudo)?;
    let chi_max = ms.iter().map(|m| chromatic_number(m).0).max().unwrap_or(0);
    let bound = if k == 1 { chi_max } else { k * (k - 1) * chi_max };
    let verdict = verify_coloring(ms, &coloring, &inst.full());
    let status = if verdict.passed() && coloring.len() <= bound { Status::Pass } else { Status::Fail };
    Ok(Output {
        json: json!({
            "k": k,
            "chi_max": chi_max,
            "bound": bound,
            "pseudocolor_classes": pseudo.q,
            "count": coloring.len(),
            "classes": classes_json(&inst, &coloring.classes),
            "verdict": verdict,
        }),
        status,
        trace: pseudo.trace,
    })
}

pub fn fpras(file: &InstanceFile, eps: &Q, unsafe_epsilon: bool, seed: u64) -> Result<Output> {
    let inst = file.build()?;
    let (m1, m2) = two(&inst)?;
    let (coloring, report) = fpras_cover(m1, m2, eps, unsafe_epsilon, seed)?;
    let verdict = verify_coloring(&inst.matroids, &coloring, &inst.full());
    let status = if verdict.passed() { Status::Pass } else { Status::Fail };
    let trace = report
        .rounds
        .iter()
        .map(|r| format!("round {} live={} chi={} -> {} sampled={}", r.round, r.live_before, r.chi_before, r.chi_after, r.sampled))
        .collect();
    Ok(Output {
        json: json!({"report": report, "classes": classes_json(&inst, &coloring.classes), "verdict": verdict}),
        status,
        trace,
    })
}

pub fn wrapper(file: &InstanceFile, eps: &Q, seed: u64, repetitions: usize) -> Result<Output> {
    let inst = file.build()?;
    let (m1, m2) = two(&inst)?;
    let (coloring, report) = theorem_wrapper(m1, m2, eps, seed, repetitions)?;
    let verdict = verify_coloring(&inst.matroids, &coloring, &inst.full());
    let status = if verdict.passed() { Status::Pass } else { Status::Fail };
    let trace = report.warning.iter().cloned().collect();
    Ok(Output {
        json: json!({"report": report, "classes": classes_json(&inst, &coloring.classes), "verdict": verdict}),
        status,
        trace,
    })
}

pub fn verify(file: &InstanceFile, coloring: &ColoringFile) -> Result<Output> {
    let inst = file.build()?;
    let c = coloring.to_coloring(&inst.ground)?;
    let verdict = verify_coloring(&inst.matroids, &c, &inst.full());
    let status = if verdict.passed() { Status::Pass } else { Status::Fail };
    let json = match &verdict {
        Verdict::Fail { class: Some(ci), .. } => {
            json!({"verdict": verdict, "witness": inst.ground.labels_of(&c.classes[*ci])})
        }
        _ => json!({"verdict": verdict}),
    };
    Ok(Output { json, status, trace: vec![] })
}

pub fn gen_rota_cmd(r: usize, p: u64, seed: u64) -> Result<Output> {
    Ok(Output::pass(serde_json::to_value(gen_rota(r, p, seed)?.to_file(Some(seed)))?))
}

pub fn gen_random_cmd(kinds: &[String], n: usize, seed: u64) -> Result<Output> {
    let kinds = kinds.iter().map(|k| k.parse()).collect::<Result<Vec<RandomKind>>>()?;
    Ok(Output::pass(serde_json::to_value(gen_random(&kinds, n, seed)?)?))
}

/// Decomposes `alpha * 1` or an explicit point given as label -> rational.
pub fn decompose(file: &InstanceFile, alpha: Option<&Q>, point: Option<&[(String, Q)]>) -> Result<Output> {
    let inst = file.build()?;
    let (m1, m2) = two(&inst)?;
    let n = inst.ground.len();
    let x: Vec<Q> = match (alpha, point) {
        (Some(a), None) => vec![a.clone(); n],
        (None, Some(pts)) => {
            let mut x = vec![Q::from_integer(0.into()); n];
            for (l, v) in pts {
                x[inst.ground.id(l)?] = v.clone();
            }
            x
        }
        _ => return Err(Error::Contract("give exactly one of an alpha or a point".into())),
    };
    let combo = decompose_point(m1, m2, &x)?;
    let parts: Vec<Value> = combo
        .parts
        .iter()
        .map(|(s, w)| json!({"set": inst.ground.labels_of(s), "weight": fmt_q(w)}))
        .collect();
    Ok(Output::pass(json!({"parts": parts, "exact": combo.is_exact(m1, m2, &x)})))
}

/// Statistical run of swap rounding on `alpha * 1`; the whole ground set and
/// each listed label set are tail targets.
pub fn swapround(
    file: &InstanceFile,
    alpha: &Q,
    gamma: &Q,
    trials: usize,
    targets: &[Vec<String>],
    seed: u64,
) -> Result<Output> {
    let inst = file.build()?;
    let (m1, m2) = two(&inst)?;
    let mut sets = vec![inst.full()];
    for t in targets {
        sets.push(inst.ground.subset_of_labels(t)?);
    }
    let spec = StatSpec { m1: m1.clone(), m2: m2.clone(), alpha: alpha.clone(), gamma: gamma.clone(), trials, targets: sets, seed };
    let report = stat_runner(&spec)?;
    let status = if report.pass { Status::Pass } else { Status::Fail };
    Ok(Output { json: serde_json::to_value(&report)?, status, trace: vec![] })
}

/// One JSON line per trial: seed, merge sequence and final set.
pub fn swapround_transcripts(file: &InstanceFile, alpha: &Q, gamma: &Q, trials: usize, seed: u64) -> Result<Vec<String>> {
    let inst = file.build()?;
    let (m1, m2) = two(&inst)?;
    let rounder = SwapRounder::new(m1, m2, alpha, gamma)?;
    (0..trials)
        .map(|trial| {
            let s = derive_seed(seed, &[trial as u64]);
            let (_, tr) = rounder.sample_with_transcript(&mut rng_from(s))?;
            Ok(serde_json::to_string(&json!({"trial": trial, "seed": s, "transcript": tr}))?)
        })
        .collect()
}

pub fn oracle_chi_int(file: &InstanceFile, budget: usize) -> Result<Output> {
    let inst = file.build()?;
    Ok(Output::pass(json!({"chi": brute_chi_intersection(&inst.matroids, budget)?})))
}

pub fn oracle_covlp(file: &InstanceFile, budget: usize) -> Result<Output> {
    let inst = file.build()?;
    let v = covlp_opt(&inst.matroids, budget)?;
    Ok(Output::pass(json!({"optimum": fmt_q(&v)})))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn rota() -> InstanceFile {
        gen_rota(3, 2, 1).unwrap().to_file(Some(1))
    }

    #[test]
    fn color_and_verify_agree() {
        let f = rota();
        let out = color(&f, None).unwrap();
        assert_eq!(out.status, Status::Pass);
        let classes: Vec<Vec<String>> = serde_json::from_value(out.json["classes"].clone()).unwrap();
        let v = verify(&f, &ColoringFile { classes: classes.clone() }).unwrap();
        assert_eq!(v.status, Status::Pass);
        let mut broken = classes;
        let moved = broken[0].pop().unwrap();
        broken[1].push(moved);
        assert_eq!(verify(&f, &ColoringFile { classes: broken }).unwrap().status, Status::Fail);
    }

    #[test]
    fn randomized_commands_repeatable() {
        let f = rota();
        let a = fpras(&f, &q(1, 5), true, 3).unwrap().render();
        assert_eq!(a, fpras(&f, &q(1, 5), true, 3).unwrap().render());
        let s = swapround(&f, &q(1, 3), &q(1, 4), 50, &[], 9).unwrap().render();
        assert_eq!(s, swapround(&f, &q(1, 3), &q(1, 4), 50, &[], 9).unwrap().render());
        assert_eq!(swapround_transcripts(&f, &q(1, 3), &q(1, 4), 3, 9).unwrap().len(), 3);
    }

    #[test]
    fn refusal_status() {
        let f = gen_random(&[RandomKind::Free, RandomKind::Free], 16, 0).unwrap();
        let err = oracle_chi_int(&f, 14).unwrap_err();
        assert_eq!(Output::from_error(&err).status, Status::Refusal);
    }
}
