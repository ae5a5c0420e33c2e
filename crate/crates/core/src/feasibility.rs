//! Exact linear feasibility: phase-1 simplex over rationals with Bland's rule.
//!
//! Strict inequalities are not accepted. Conic callers encode `x > 0` as
//! `x >= 1`, which is equivalent whenever the solution set is closed under
//! positive scaling.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inequality {
    pub row: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeasibilitySystem {
    variables: usize,
    equalities: Vec<(Vec<Rational>, Rational)>,
    inequalities: Vec<Inequality>,
    nonneg: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn point(self) -> Option<Vec<Rational>> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

impl FeasibilitySystem {
    /// A system over `variables` free variables with no constraints.
    pub fn new(variables: usize) -> Self {
        Self {
            variables,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            nonneg: vec![false; variables],
        }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn equalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    pub fn nonneg(mut self, var: usize) -> Self {
        self.nonneg[var] = true;
        self
    }

    pub fn all_nonneg(mut self) -> Self {
        self.nonneg.iter_mut().for_each(|b| *b = true);
        self
    }

    pub fn equal(mut self, row: Vec<Rational>, rhs: Rational) -> Self {
        assert_eq!(row.len(), self.variables, "equality row length");
        self.equalities.push((row, rhs));
        self
    }

    pub fn at_least(self, row: Vec<Rational>, rhs: Rational) -> Self {
        self.inequality(row, Relation::Ge, rhs)
    }

    pub fn at_most(self, row: Vec<Rational>, rhs: Rational) -> Self {
        self.inequality(row, Relation::Le, rhs)
    }

    pub fn inequality(mut self, row: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        assert_eq!(row.len(), self.variables, "inequality row length");
        self.inequalities.push(Inequality { row, relation, rhs });
        self
    }

    /// Exact membership test used by independent certificate checks.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.variables {
            return false;
        }
        let dot = |row: &[Rational]| -> Rational { row.iter().zip(x).map(|(a, b)| a * b).sum() };
        self.nonneg
            .iter()
            .zip(x)
            .all(|(&nn, v)| !nn || !v.is_negative())
            && self.equalities.iter().all(|(row, rhs)| dot(row) == *rhs)
            && self.inequalities.iter().all(|ineq| {
                let lhs = dot(&ineq.row);
                match ineq.relation {
                    Relation::Ge => lhs >= ineq.rhs,
                    Relation::Le => lhs <= ineq.rhs,
                }
            })
    }
}

/// Decides feasibility and returns an exact point when one exists.
pub fn solve_feasibility(sys: &FeasibilitySystem) -> Feasibility {
    // Standard form: columns are [x+ for every var | x- for free vars | slacks | artificials].
    let n = sys.variables;
    let free: Vec<usize> = (0..n).filter(|&j| !sys.nonneg[j]).collect();
    let n_struct = n + free.len();
    let n_slack = sys.inequalities.len();
    let m = sys.equalities.len() + n_slack;

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let expand = |row: &[Rational]| -> Vec<Rational> {
        let mut out = Vec::with_capacity(n_struct + n_slack);
        out.extend(row.iter().cloned());
        out.extend(free.iter().map(|&j| -row[j].clone()));
        out.resize(n_struct + n_slack, Rational::zero());
        out
    };
    for (row, b) in &sys.equalities {
        rows.push(expand(row));
        rhs.push(b.clone());
    }
    for (k, ineq) in sys.inequalities.iter().enumerate() {
        let mut r = expand(&ineq.row);
        r[n_struct + k] = match ineq.relation {
            Relation::Ge => -Rational::one(),
            Relation::Le => Rational::one(),
        };
        rows.push(r);
        rhs.push(ineq.rhs.clone());
    }
    for (r, b) in rows.iter_mut().zip(rhs.iter_mut()) {
        if b.is_negative() {
            r.iter_mut().for_each(|x| *x = -x.clone());
            *b = -b.clone();
        }
    }

    // Rows whose slack now has coefficient +1 start with that slack basic.
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut needs_artificial = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let slack = (i >= sys.equalities.len()).then(|| n_struct + i - sys.equalities.len());
        match slack {
            Some(s) if r[s].is_one() => basis.push(s),
            _ => {
                basis.push(usize::MAX);
                needs_artificial.push(i);
            }
        }
    }
    let width = n_struct + n_slack + needs_artificial.len();
    for r in rows.iter_mut() {
        r.resize(width, Rational::zero());
    }
    for (k, &i) in needs_artificial.iter().enumerate() {
        let col = n_struct + n_slack + k;
        rows[i][col] = Rational::one();
        basis[i] = col;
    }
    let first_artificial = n_struct + n_slack;

    let mut tableau = Tableau {
        rows,
        rhs,
        basis,
        cost: vec![Rational::zero(); width],
        cost_rhs: Rational::zero(),
    };
    // Phase-1 objective: minimise the sum of artificials, priced out against the basis.
    for &i in &needs_artificial {
        for (c, x) in tableau.cost.iter_mut().zip(&tableau.rows[i]) {
            *c -= x;
        }
        tableau.cost_rhs -= &tableau.rhs[i];
    }
    for j in first_artificial..width {
        tableau.cost[j] = Rational::zero();
    }
    tableau.run();

    if !tableau.cost_rhs.is_zero() {
        return Feasibility::Infeasible;
    }
    let mut values = vec![Rational::zero(); width];
    for (i, &b) in tableau.basis.iter().enumerate() {
        values[b] = tableau.rhs[i].clone();
    }
    let mut x: Vec<Rational> = values[..n].to_vec();
    for (k, &j) in free.iter().enumerate() {
        x[j] -= &values[n + k];
    }
    debug_assert!(sys.is_satisfied_by(&x), "simplex returned an infeasible point");
    Feasibility::Feasible(x)
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    cost_rhs: Rational,
}

impl Tableau {
    fn run(&mut self) {
        // Bland: lowest-index entering column, ties in the ratio test by lowest basic index.
        while let Some(enter) = self.cost.iter().position(Signed::is_negative) {
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // Phase 1 is bounded below by zero, so an entering column always has a pivot row.
            let (pivot_row, _) = leave.expect("phase-1 objective is bounded");
            self.pivot(pivot_row, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        self.rows[r].iter_mut().for_each(|x| *x *= &inv);
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.cost_rhs -= &f * &prhs;
        }
        self.basis[r] = c;
    }
}
