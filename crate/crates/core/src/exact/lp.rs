//! Exact rational simplex method (two-phase, Bland's rule).
//!
//! Problem sizes here are a few dozen variables at most, so a dense tableau is fine.

use num_traits::{One, Signed, Zero};

use super::rat::{Rat, RatVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: RatVector,
    pub relation: Relation,
    pub rhs: Rat,
}

/// `maximize objective·x` subject to the constraints and variable bounds.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub bounds: Vec<VarBound>,
    pub objective: RatVector,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: RatVector, value: Rat },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(bounds: Vec<VarBound>) -> Self {
        let n = bounds.len();
        Self { bounds, objective: vec![Rat::zero(); n], constraints: Vec::new() }
    }

    pub fn feasibility(n: usize) -> Self {
        Self::new(vec![VarBound::NonNegative; n])
    }

    pub fn constrain(&mut self, coeffs: RatVector, relation: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.bounds.len(), "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self.solve(), LpOutcome::Infeasible)
    }
}

struct Tableau {
    /// Constraint rows; last entry is the right-hand side.
    rows: Vec<RatVector>,
    basis: Vec<usize>,
    /// Column index of each original variable (positive part, optional negative part).
    var_cols: Vec<(usize, Option<usize>)>,
    artificial_start: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut var_cols = Vec::with_capacity(lp.bounds.len());
        let mut col = 0;
        for b in &lp.bounds {
            match b {
                VarBound::NonNegative => {
                    var_cols.push((col, None));
                    col += 1;
                }
                VarBound::Free => {
                    var_cols.push((col, Some(col + 1)));
                    col += 2;
                }
            }
        }
        let slack_start = col;
        let n_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let artificial_start = slack_start + n_slack;
        let m = lp.constraints.len();
        let width = artificial_start + m;

        let mut rows = Vec::with_capacity(m);
        let mut slack = slack_start;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rat::zero(); width + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                let (p, n) = var_cols[j];
                row[p] = a.clone();
                if let Some(n) = n {
                    row[n] = -a.clone();
                }
            }
            match c.relation {
                Relation::Eq => {}
                Relation::Ge => {
                    row[slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Le => {
                    row[slack] = Rat::one();
                    slack += 1;
                }
            }
            row[width] = c.rhs.clone();
            if row[width].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[artificial_start + i] = Rat::one();
            rows.push(row);
        }
        let basis = (artificial_start..artificial_start + m).collect();
        Tableau { rows, basis, var_cols, artificial_start, width }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximize `cost·x` over columns `< col_limit`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rat], col_limit: usize) -> bool {
        loop {
            let entering = (0..col_limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: Rat = self
                    .rows
                    .iter()
                    .zip(&self.basis)
                    .filter(|(row, _)| !row[j].is_zero())
                    .map(|(row, &b)| &cost[b] * &row[j])
                    .sum();
                &cost[j] - z > Rat::zero()
            });
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[j].is_positive() {
                    let ratio = &row[self.width] / &row[j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, j);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let mut phase1 = vec![Rat::zero(); self.width];
        for c in phase1.iter_mut().skip(self.artificial_start) {
            *c = -Rat::one();
        }
        self.optimize(&phase1, self.width);
        let infeas: Rat = self
            .rows
            .iter()
            .zip(&self.basis)
            .filter(|(_, &b)| b >= self.artificial_start)
            .map(|(row, _)| row[self.width].clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }

        let mut cost = vec![Rat::zero(); self.width];
        for (j, c) in lp.objective.iter().enumerate() {
            let (p, n) = self.var_cols[j];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c.clone();
            }
        }
        if !self.optimize(&cost, self.artificial_start) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![Rat::zero(); self.width];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            values[b] = row[self.width].clone();
        }
        let x: RatVector = self
            .var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &values[p] - &values[n],
                None => values[p].clone(),
            })
            .collect();
        let value = super::rat::dot(&lp.objective, &x);
        LpOutcome::Optimal { x, value }
    }
}
