//! Dense-tableau simplex over exact rationals with Bland's rule: two-phase
//! primal, plus dual re-optimization after appending rows.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::lp::num::Num;
use crate::rational::{fmt_q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, Q)>,
    pub sense: Sense,
    pub rhs: Q,
    pub name: String,
}

/// `maximize objective . x` subject to `rows`, `x >= 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Q>,
    pub rows: Vec<Row>,
    pub var_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Q::zero(); num_vars],
            rows: Vec::new(),
            var_names: (0..num_vars).map(|j| format!("x{j}")).collect(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Q)>, sense: Sense, rhs: Q, name: impl Into<String>) {
        self.rows.push(Row { coeffs, sense, rhs, name: name.into() });
    }

    /// Plain-text listing, one constraint per line with exact rationals.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let term = |j: usize, c: &Q| format!("{} {}", fmt_q(c), self.var_names[j]);
        let obj: Vec<String> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| term(j, c))
            .collect();
        let _ = writeln!(out, "maximize {}", if obj.is_empty() { "0".into() } else { obj.join(" + ") });
        for r in &self.rows {
            let lhs: Vec<String> = r.coeffs.iter().map(|(j, c)| term(*j, c)).collect();
            let op = match r.sense {
                Sense::Le => "<=",
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            let _ = writeln!(out, "{}: {} {} {}", r.name, lhs.join(" + "), op, fmt_q(&r.rhs));
        }
        out
    }

    pub fn solve(&self) -> LpOutcome {
        solve(self)
    }
}

/// Simplex tableau in equality form `A x = b`, `x >= 0`, minimizing `c . x`.
/// Every row starts with an identity column; those columns stay in the
/// tableau so `B^-1` can be read off them.
#[derive(Debug, Clone)]
pub struct Tableau {
    rows: Vec<Vec<Num>>,
    rhs: Vec<Num>,
    reduced: Vec<Num>,
    /// Minus the current objective value.
    neg_obj: Num,
    basis: Vec<usize>,
    cost: Vec<Num>,
    unit_col: Vec<usize>,
    banned: Vec<bool>,
}

pub enum Step {
    Optimal,
    Unbounded(usize),
    Pivoted,
}

impl Tableau {
    /// `cols[j]` is a sparse column; `unit_col[i]` must be an identity column
    /// for row `i`, and `rhs >= 0`.
    pub fn new(m: usize, cols: &[Vec<(usize, Q)>], cost: Vec<Q>, rhs: Vec<Q>, unit_col: Vec<usize>) -> Tableau {
        let ncols = cols.len();
        let mut rows = vec![vec![Num::ZERO; ncols]; m];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col {
                rows[*i][j] = Num::from_q(v);
            }
        }
        let mut t = Tableau {
            rows,
            rhs: rhs.iter().map(Num::from_q).collect(),
            reduced: Vec::new(),
            neg_obj: Num::ZERO,
            basis: unit_col.clone(),
            cost: cost.iter().map(Num::from_q).collect(),
            unit_col,
            banned: vec![false; ncols],
        };
        t.recompute_reduced();
        t
    }

    pub fn num_cols(&self) -> usize {
        self.cost.len()
    }

    fn recompute_reduced(&mut self) {
        let mut d = self.cost.clone();
        let mut obj = Num::ZERO;
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &self.cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[i].iter().enumerate() {
                d[j].sub_mul(cb, a);
            }
            obj = obj.add(&cb.mul(&self.rhs[i]));
        }
        self.reduced = d;
        self.neg_obj = obj.neg();
    }

    pub fn objective(&self) -> Q {
        self.neg_obj.neg().to_q()
    }

    /// Dual value of row `i` (`c_B B^-1` at the row's identity column).
    pub fn dual(&self, i: usize) -> Q {
        let j = self.unit_col[i];
        self.cost[j].sub(&self.reduced[j]).to_q()
    }

    /// Appends a column given in original coordinates.
    pub fn add_column(&mut self, col: &[(usize, Q)], cost: Q) -> usize {
        let m = self.rows.len();
        let mut transformed = vec![Num::ZERO; m];
        for (r, v) in col {
            let v = Num::from_q(v);
            let u = self.unit_col[*r];
            for (i, row) in self.rows.iter().enumerate() {
                transformed[i] = transformed[i].add(&row[u].mul(&v));
            }
        }
        let cost = Num::from_q(&cost);
        let mut d = cost.clone();
        for (i, &b) in self.basis.iter().enumerate() {
            d.sub_mul(&self.cost[b], &transformed[i]);
        }
        for (i, v) in transformed.into_iter().enumerate() {
            self.rows[i].push(v);
        }
        self.cost.push(cost);
        self.reduced.push(d);
        self.banned.push(false);
        self.num_cols() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        debug_assert!(!p.is_zero());
        let nz: Vec<usize> = (0..self.num_cols()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        if !p.is_one() {
            let inv = p.recip();
            for &j in &nz {
                self.rows[r][j] = self.rows[r][j].mul(&inv);
            }
            self.rhs[r] = self.rhs[r].mul(&inv);
        }
        let prow: Vec<(usize, Num)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            let row = &mut self.rows[i];
            for (j, v) in &prow {
                row[*j].sub_mul(&f, v);
            }
            self.rhs[i].sub_mul(&f, &prhs);
        }
        let f = self.reduced[c].clone();
        if !f.is_zero() {
            for (j, v) in &prow {
                self.reduced[*j].sub_mul(&f, v);
            }
            self.neg_obj.sub_mul(&f, &prhs);
        }
        self.basis[r] = c;
    }

    /// One pivot under Bland's rule: the lowest-index improving column enters
    /// and ratio ties leave by lowest basic index.
    pub fn step(&mut self) -> Step {
        let entering = (0..self.num_cols()).find(|&j| !self.banned[j] && self.reduced[j].is_negative());
        let Some(c) = entering else {
            return Step::Optimal;
        };
        let mut leave: Option<(usize, Num)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][c];
            if !a.is_positive() {
                continue;
            }
            let ratio = self.rhs[i].div(a);
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        match leave {
            None => Step::Unbounded(c),
            Some((r, _)) => {
                self.pivot(r, c);
                Step::Pivoted
            }
        }
    }

    /// Pivots to optimality; `false` on unboundedness.
    pub fn optimize(&mut self) -> bool {
        loop {
            match self.step() {
                Step::Optimal => return true,
                Step::Unbounded(_) => return false,
                Step::Pivoted => {}
            }
        }
    }

    /// Appends the constraint `coeffs . x <= rhs` (original column
    /// coordinates) with a fresh basic slack. The row may be infeasible; run
    /// [`Tableau::dual_optimize`] afterwards.
    pub fn add_le_row(&mut self, coeffs: &[(usize, Q)], rhs: &Q) -> usize {
        let ncols = self.num_cols();
        let mut row = vec![Num::ZERO; ncols + 1];
        for (j, v) in coeffs {
            row[*j] = Num::from_q(v);
        }
        let mut b = Num::from_q(rhs);
        for i in 0..self.rows.len() {
            let f = row[self.basis[i]].clone();
            if f.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    row[j].sub_mul(&f, v);
                }
            }
            b.sub_mul(&f, &self.rhs[i]);
        }
        for r in &mut self.rows {
            r.push(Num::ZERO);
        }
        row[ncols] = Num::ONE;
        self.rows.push(row);
        self.rhs.push(b);
        self.basis.push(ncols);
        self.unit_col.push(ncols);
        self.cost.push(Num::ZERO);
        self.reduced.push(Num::ZERO);
        self.banned.push(false);
        ncols
    }

    /// Dual simplex from a dual-feasible basis, with Bland's rule on both
    /// choices. `false` when the program is infeasible.
    pub fn dual_optimize(&mut self) -> bool {
        loop {
            let leaving = (0..self.rows.len()).filter(|&i| self.rhs[i].is_negative()).min_by_key(|&i| self.basis[i]);
            let Some(r) = leaving else {
                return true;
            };
            let mut enter: Option<(usize, Num)> = None;
            for j in 0..self.num_cols() {
                let a = &self.rows[r][j];
                if self.banned[j] || !a.is_negative() {
                    continue;
                }
                let ratio = self.reduced[j].div(&a.neg());
                if enter.as_ref().is_none_or(|(_, best)| ratio < *best) {
                    enter = Some((j, ratio));
                }
            }
            match enter {
                Some((c, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    /// Current value of every column.
    pub fn values(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.num_cols()];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs[i].to_q();
        }
        v
    }

    fn remove_row(&mut self, r: usize) {
        self.rows.remove(r);
        self.rhs.remove(r);
        self.basis.remove(r);
        self.unit_col.remove(r);
    }
}

/// Two-phase simplex for a general-form program.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    WarmStart::start(lp).0
}

/// An optimal tableau kept so that further `<=` rows can be added and
/// re-optimized by dual simplex instead of solving from scratch.
#[derive(Debug, Clone)]
pub struct WarmStart {
    tableau: Tableau,
    objective: Vec<Q>,
}

impl WarmStart {
    /// Solves `lp`; the warm state is returned with an optimal outcome only.
    pub fn start(lp: &LinearProgram) -> (LpOutcome, Option<WarmStart>) {
        match two_phase(lp) {
            Ok(tableau) => {
                let warm = WarmStart { tableau, objective: lp.objective.clone() };
                (warm.outcome(), Some(warm))
            }
            Err(outcome) => (outcome, None),
        }
    }

    /// Adds rows `coeffs . x <= rhs` and re-optimizes. The returned outcome
    /// is `Optimal` or `Infeasible`; after `Infeasible` the state is spent.
    pub fn add_rows(&mut self, rows: &[(Vec<(usize, Q)>, Q)]) -> LpOutcome {
        for (coeffs, rhs) in rows {
            self.tableau.add_le_row(coeffs, rhs);
        }
        if !self.tableau.dual_optimize() {
            return LpOutcome::Infeasible;
        }
        self.outcome()
    }

    fn outcome(&self) -> LpOutcome {
        let vals = self.tableau.values();
        let x: Vec<Q> = vals[..self.objective.len()].to_vec();
        let value = x.iter().zip(&self.objective).fold(Q::zero(), |acc, (a, b)| acc + a * b);
        LpOutcome::Optimal { x, value }
    }
}

/// Optimal tableau, or the non-optimal outcome.
fn two_phase(lp: &LinearProgram) -> std::result::Result<Tableau, LpOutcome> {
    let n = lp.num_vars;
    let m = lp.rows.len();
    let mut cols: Vec<Vec<(usize, Q)>> = vec![Vec::new(); n];
    let mut rhs = Vec::with_capacity(m);
    let mut senses = Vec::with_capacity(m);
    for (i, r) in lp.rows.iter().enumerate() {
        let flip = r.rhs.is_negative();
        let sense = match (r.sense, flip) {
            (Sense::Le, true) => Sense::Ge,
            (Sense::Ge, true) => Sense::Le,
            (s, _) => s,
        };
        for (j, v) in &r.coeffs {
            if !v.is_zero() {
                cols[*j].push((i, if flip { -v.clone() } else { v.clone() }));
            }
        }
        rhs.push(if flip { -r.rhs.clone() } else { r.rhs.clone() });
        senses.push(sense);
    }
    let mut unit_col = vec![0; m];
    let mut artificial = Vec::new();
    for (i, s) in senses.iter().enumerate() {
        match s {
            Sense::Le => {
                unit_col[i] = cols.len();
                cols.push(vec![(i, Q::one())]);
            }
            Sense::Ge => {
                cols.push(vec![(i, -Q::one())]);
            }
            Sense::Eq => {}
        }
    }
    for (i, s) in senses.iter().enumerate() {
        if *s != Sense::Le {
            unit_col[i] = cols.len();
            artificial.push(cols.len());
            cols.push(vec![(i, Q::one())]);
        }
    }
    let ncols = cols.len();
    let mut cost = vec![Q::zero(); ncols];
    for &a in &artificial {
        cost[a] = Q::one();
    }
    let mut t = Tableau::new(m, &cols, cost, rhs, unit_col);
    if !artificial.is_empty() {
        t.optimize();
        if t.objective().is_positive() {
            return Err(LpOutcome::Infeasible);
        }
        let is_art = |j: usize| j >= ncols - artificial.len();
        let mut i = 0;
        while i < t.rows.len() {
            if is_art(t.basis[i]) {
                match (0..ncols).find(|&j| !is_art(j) && !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.remove_row(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for &a in &artificial {
            t.banned[a] = true;
        }
    }
    let mut cost = vec![Num::ZERO; ncols];
    for j in 0..n {
        cost[j] = Num::from_q(&lp.objective[j]).neg();
    }
    t.cost = cost;
    t.recompute_reduced();
    if !t.optimize() {
        return Err(LpOutcome::Unbounded);
    }
    Ok(t)
}

/// Rank of the constraint rows active at `x`, counting `x_j = 0` bounds.
/// Equal to `num_vars` exactly when `x` is a vertex of the feasible region.
pub fn active_rank(lp: &LinearProgram, x: &[Q]) -> usize {
    let n = lp.num_vars;
    let mut mat: Vec<Vec<Q>> = Vec::new();
    for r in &lp.rows {
        let lhs = r.coeffs.iter().fold(Q::zero(), |acc, (j, c)| acc + c * &x[*j]);
        if lhs == r.rhs {
            let mut v = vec![Q::zero(); n];
            for (j, c) in &r.coeffs {
                v[*j] += c;
            }
            mat.push(v);
        }
    }
    for (j, xj) in x.iter().enumerate() {
        if xj.is_zero() {
            let mut v = vec![Q::zero(); n];
            v[j] = Q::one();
            mat.push(v);
        }
    }
    matrix_rank(mat)
}

pub fn matrix_rank(mut mat: Vec<Vec<Q>>) -> usize {
    let cols = mat.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..mat.len()).find(|&i| !mat[i][c].is_zero()) else { continue };
        mat.swap(rank, p);
        let piv = mat[rank][c].clone();
        for i in 0..mat.len() {
            if i != rank && !mat[i][c].is_zero() {
                let f = &mat[i][c] / &piv;
                for j in c..cols {
                    let v = &f * &mat[rank][j];
                    mat[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}
