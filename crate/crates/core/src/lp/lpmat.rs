//! The program "x in the base polytope of a capacity-one partition matroid,
//! and x restricted to each side matroid's ground set in its matroid
//! polytope", solved exactly with lazily generated rank cuts.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::polytope::violated_sets;
use crate::lp::simplex::{LinearProgram, LpOutcome, Sense, WarmStart};
use crate::matroid::Matroid;
use crate::rational::{qu, Q};
use crate::subset::Subset;

/// A side matroid together with the rank cuts collected for it so far.
#[derive(Debug, Clone)]
pub struct SideMatroid {
    pub matroid: Matroid,
    pub cuts: Vec<Subset>,
}

impl SideMatroid {
    /// Seeds the cut pool with component ground sets and partition parts.
    pub fn new(matroid: Matroid) -> Self {
        let mut cuts = matroid.components();
        cuts.extend(matroid.partition_blocks());
        SideMatroid { matroid, cuts }
    }

    /// Same cuts (projected lazily when the program is built), new matroid.
    pub fn derive(&self, matroid: Matroid) -> Self {
        let mut cuts = self.cuts.clone();
        cuts.extend(matroid.components());
        SideMatroid { matroid, cuts }
    }
}

#[derive(Debug, Clone)]
pub struct LpMatInstance {
    pub universe: usize,
    /// Variables of the program.
    pub live: Subset,
    /// Parts of the base partition matroid with their capacities.
    pub base_parts: Vec<(Subset, usize)>,
    pub side: Vec<SideMatroid>,
    pub weights: Vec<Q>,
}

#[derive(Debug, Clone)]
pub struct ExtremePoint {
    /// Value per universe element (zero off the live set).
    pub x: Vec<Q>,
    pub value: Q,
    /// The final working program (variables are the live elements in
    /// ascending order).
    pub program: LinearProgram,
    pub cut_rounds: usize,
}

#[derive(Debug, Clone)]
pub enum LpMatOutcome {
    Optimal(ExtremePoint),
    Infeasible,
}

impl LpMatInstance {
    fn check(&self) -> Result<()> {
        for (i, s) in self.side.iter().enumerate() {
            if s.matroid.universe() != self.universe || !s.matroid.ground().is_subset(&self.live) {
                return Err(Error::Domain(format!("side matroid {i} is not over the program's variables")));
            }
        }
        if self.weights.len() != self.universe {
            return Err(Error::Domain("weight vector length differs from the universe".into()));
        }
        Ok(())
    }

    /// Builds the working program from the base equalities and current cuts.
    pub fn working_program(&self) -> (LinearProgram, Vec<usize>) {
        let vars: Vec<usize> = self.live.iter().collect();
        let mut col = vec![usize::MAX; self.universe];
        for (j, &e) in vars.iter().enumerate() {
            col[e] = j;
        }
        let mut lp = LinearProgram::new(vars.len());
        lp.var_names = vars.iter().map(|e| format!("x{e}")).collect();
        for (j, &e) in vars.iter().enumerate() {
            lp.objective[j] = self.weights[e].clone();
        }
        let mut covered = Subset::empty(self.universe);
        for (k, (part, cap)) in self.base_parts.iter().enumerate() {
            let p = part.intersection(&self.live);
            covered.union_with(&p);
            if p.is_empty() {
                continue;
            }
            let coeffs = p.iter().map(|e| (col[e], Q::one())).collect();
            lp.add_row(coeffs, Sense::Eq, qu((*cap).min(p.len())), format!("base{k}"));
        }
        for e in self.live.difference(&covered).iter() {
            lp.add_row(vec![(col[e], Q::one())], Sense::Le, Q::one(), format!("unit{e}"));
        }
        for (i, side) in self.side.iter().enumerate() {
            let g = side.matroid.ground();
            let mut seen = HashSet::new();
            for cut in &side.cuts {
                let s = cut.intersection(g);
                if s.is_empty() || seen.contains(&s) {
                    continue;
                }
                let r = side.matroid.r(&s);
                if s.len() > r {
                    let coeffs = s.iter().map(|e| (col[e], Q::one())).collect();
                    lp.add_row(coeffs, Sense::Le, qu(r), format!("rank{i}.{}", seen.len()));
                }
                seen.insert(s);
            }
        }
        (lp, vars)
    }
}

/// Optimal extreme point of the full program. The working program is solved
/// once; every violated rank cut found afterwards is appended to the optimal
/// tableau and re-optimized by dual simplex. A basic optimum that violates
/// nothing is a vertex of the full polytope.
pub fn solve_lp_mat(inst: &mut LpMatInstance) -> Result<LpMatOutcome> {
    inst.check()?;
    let (mut program, vars) = inst.working_program();
    let mut col = vec![usize::MAX; inst.universe];
    for (j, &e) in vars.iter().enumerate() {
        col[e] = j;
    }
    let (mut outcome, mut warm) = WarmStart::start(&program);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let xs = match outcome {
            LpOutcome::Optimal { x, .. } => x,
            LpOutcome::Infeasible => return Ok(LpMatOutcome::Infeasible),
            LpOutcome::Unbounded => return Err(Error::Invariant("bounded program reported unbounded".into())),
        };
        let mut x = vec![Q::zero(); inst.universe];
        for (j, &e) in vars.iter().enumerate() {
            x[e] = xs[j].clone();
        }
        let mut new_rows = Vec::new();
        for (i, side) in inst.side.iter_mut().enumerate() {
            let g = side.matroid.ground();
            let local: Vec<Q> = (0..inst.universe)
                .map(|e| if g.contains(e) { x[e].clone() } else { Q::zero() })
                .collect();
            for s in violated_sets(&side.matroid, &local)? {
                let coeffs: Vec<(usize, Q)> = s.iter().map(|e| (col[e], Q::one())).collect();
                let r = qu(side.matroid.r(&s));
                program.add_row(coeffs.clone(), Sense::Le, r.clone(), format!("rank{i}.cut{}", side.cuts.len()));
                new_rows.push((coeffs, r));
                side.cuts.push(s);
            }
        }
        if new_rows.is_empty() {
            let value = x.iter().zip(&inst.weights).fold(Q::zero(), |acc, (a, b)| acc + a * b);
            debug_assert!(x.iter().all(|v| !v.is_negative()));
            return Ok(LpMatOutcome::Optimal(ExtremePoint { x, value, program, cut_rounds: rounds }));
        }
        let state = warm.as_mut().ok_or_else(|| Error::Invariant("no optimal tableau to extend".into()))?;
        outcome = state.add_rows(&new_rows);
    }
}

impl ExtremePoint {
    /// The point in the program's own variable order.
    pub fn program_point(&self, inst: &LpMatInstance) -> Vec<Q> {
        inst.live.iter().map(|e| self.x[e].clone()).collect()
    }
}
