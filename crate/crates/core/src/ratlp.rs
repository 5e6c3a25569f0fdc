//! Exact linear programming over arbitrary-precision rationals.
//!
//! The interface is deliberately narrow: maximize a linear objective over
//! `A u = b`, `u >= 0`. Solving is a dense two-phase simplex with Bland's
//! rule, so it terminates on degenerate problems and the pivot sequence
//! (lowest eligible index) is deterministic. Every number is a
//! gcd-reduced `BigRational`; nothing is ever rounded.
//!
//! [`enumerate_vertices`] exhaustively lists basic feasible solutions. It
//! exists as an independent cross-check for [`simplex_solve`] and refuses
//! problems where the basis count is combinatorially out of reach.

use std::collections::BTreeSet;

use itertools::Itertools;
use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};

/// Shorthand for a reduced fraction.
pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer as a rational.
pub fn integer(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// `maximize objective . u  subject to  rows . u = rhs, u >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLp {
    objective: Vec<BigRational>,
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
}

impl ExactLp {
    pub fn new(
        objective: Vec<BigRational>,
        rows: Vec<Vec<BigRational>>,
        rhs: Vec<BigRational>,
    ) -> Result<ExactLp> {
        if objective.is_empty() {
            return Err(Error::InvalidArgument(
                "linear program needs at least one variable".into(),
            ));
        }
        if rows.len() != rhs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} constraint rows but {} right-hand sides",
                rows.len(),
                rhs.len()
            )));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != objective.len()) {
            return Err(Error::InvalidArgument(format!(
                "constraint row has width {}, expected {}",
                bad.len(),
                objective.len()
            )));
        }
        Ok(ExactLp {
            objective,
            rows,
            rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[BigRational] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[BigRational] {
        &self.rhs
    }

    /// `objective . point`, exactly.
    pub fn objective_value(&self, point: &[BigRational]) -> BigRational {
        dot(&self.objective, point)
    }

    /// Exact check of `rows . point = rhs` and `point >= 0`.
    pub fn is_feasible(&self, point: &[BigRational]) -> bool {
        point.len() == self.num_vars()
            && point.iter().all(|x| !x.is_negative())
            && self
                .rows
                .iter()
                .zip(&self.rhs)
                .all(|(row, b)| dot(row, point) == *b)
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpSolution {
    /// A vertex (basic feasible solution) attaining the optimum.
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
        basis: Vec<usize>,
    },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal { .. } => LpStatus::Optimal,
            LpSolution::Infeasible => LpStatus::Infeasible,
            LpSolution::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&BigRational> {
        match self {
            LpSolution::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[BigRational]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// Exact two-phase simplex, Bland's rule, deterministic.
pub fn simplex_solve(lp: &ExactLp) -> LpSolution {
    let n = lp.num_vars();
    let m = lp.num_constraints();

    // Phase 1 tableau: structural columns, artificial columns, rhs.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, row) in lp.rows.iter().enumerate() {
        let flip = lp.rhs[i].is_negative();
        let mut t: Vec<BigRational> = Vec::with_capacity(n + m + 1);
        for x in row {
            t.push(if flip { -x } else { x.clone() });
        }
        for j in 0..m {
            t.push(if j == i {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            });
        }
        t.push(if flip {
            -&lp.rhs[i]
        } else {
            lp.rhs[i].clone()
        });
        rows.push(t);
    }
    let mut tableau = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width: n + m,
    };

    let phase1_costs: Vec<BigRational> = (0..n + m)
        .map(|j| {
            if j < n {
                BigRational::zero()
            } else {
                -BigRational::from_integer(1.into())
            }
        })
        .collect();
    let value = tableau.maximize(&phase1_costs);
    let value = match value {
        Some(v) => v,
        None => unreachable!("phase 1 objective is bounded above by zero"),
    };
    if value.is_negative() {
        return LpSolution::Infeasible;
    }

    // Pivot remaining artificials out; rows that cannot be pivoted are
    // redundant (all structural coefficients zero) and get dropped.
    let mut r = 0;
    while r < tableau.rows.len() {
        if tableau.basis[r] >= n {
            let col = (0..n).find(|&j| !tableau.rows[r][j].is_zero());
            match col {
                Some(c) => tableau.pivot(r, c),
                None => {
                    tableau.rows.remove(r);
                    tableau.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Drop artificial columns for phase 2.
    for row in &mut tableau.rows {
        let rhs = row.pop().unwrap();
        row.truncate(n);
        row.push(rhs);
    }
    tableau.width = n;

    match tableau.maximize(&lp.objective) {
        None => LpSolution::Unbounded,
        Some(_) => {
            let mut point = vec![BigRational::zero(); n];
            for (i, &j) in tableau.basis.iter().enumerate() {
                point[j] = tableau.rows[i][n].clone();
            }
            let value = lp.objective_value(&point);
            let mut basis = tableau.basis.clone();
            basis.sort_unstable();
            LpSolution::Optimal {
                value,
                point,
                basis,
            }
        }
    }
}

struct Tableau {
    /// `width + 1` entries per row; the last is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let mut pivot_row = std::mem::take(&mut self.rows[r]);
        let p = pivot_row[c].clone();
        for x in &mut pivot_row {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            eliminate(row, &f, &pivot_row);
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Run the simplex loop for `maximize costs . x` from the current
    /// basis. Returns the optimal value, or `None` if unbounded.
    fn maximize(&mut self, costs: &[BigRational]) -> Option<BigRational> {
        // costrow[j] = (c_B B^-1 A)_j - c_j; costrow[width] = objective value.
        let mut costrow: Vec<BigRational> = (0..=self.width)
            .map(|j| {
                if j < costs.len() {
                    -&costs[j]
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        for (i, &b) in self.basis.iter().enumerate() {
            if !costs[b].is_zero() {
                for (slot, x) in costrow.iter_mut().zip(&self.rows[i]) {
                    if !x.is_zero() {
                        *slot += &costs[b] * x;
                    }
                }
            }
        }

        loop {
            // Bland: lowest column with a strictly improving reduced cost.
            let entering = (0..self.width).find(|&j| costrow[j].is_negative());
            let c = match entering {
                Some(c) => c,
                None => return Some(costrow[self.width].clone()),
            };
            // Ratio test; ties resolved by lowest basic variable index.
            let mut leaving: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c].is_positive() {
                    let ratio = &self.rows[i][self.width] / &self.rows[i][c];
                    let better = match &leaving {
                        None => true,
                        Some((prev, best)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < self.basis[*prev])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let (r, _) = leaving?;
            self.pivot(r, c);
            let f = costrow[c].clone();
            eliminate(&mut costrow, &f, &self.rows[r]);
        }
    }
}

/// `target -= factor * source`, skipping zero entries on both sides.
fn eliminate(target: &mut [BigRational], factor: &BigRational, source: &[BigRational]) {
    if factor.is_zero() {
        return;
    }
    for (slot, x) in target.iter_mut().zip(source) {
        if !x.is_zero() {
            *slot -= factor * x;
        }
    }
}

pub const DEFAULT_BASIS_GUARD: u64 = 1_000_000;

/// All vertices (basic feasible solutions) of the feasible region, by
/// exhaustive basis enumeration, deduplicated and sorted.
///
/// An inconsistent system yields an empty list. Refuses to run when the
/// number of candidate bases exceeds [`DEFAULT_BASIS_GUARD`].
pub fn enumerate_vertices(lp: &ExactLp) -> Result<Vec<Vec<BigRational>>> {
    let n = lp.num_vars();
    let m = lp.num_constraints();
    check_basis_guard(n, m, DEFAULT_BASIS_GUARD)?;

    // Row-reduce [A | b]; inconsistency means an empty feasible region.
    let mut aug: Vec<Vec<BigRational>> = lp
        .rows
        .iter()
        .zip(&lp.rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let piv = (rank..aug.len()).find(|&i| !aug[i][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        aug.swap(rank, piv);
        let mut pivot_row = std::mem::take(&mut aug[rank]);
        let p = pivot_row[col].clone();
        for x in &mut pivot_row {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        for (i, row) in aug.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                eliminate(row, &f, &pivot_row);
            }
        }
        aug[rank] = pivot_row;
        rank += 1;
    }
    for row in &aug[rank..] {
        if !row[n].is_zero() {
            return Ok(Vec::new());
        }
    }
    aug.truncate(rank);
    check_basis_guard(n, rank, DEFAULT_BASIS_GUARD)?;

    let mut vertices: BTreeSet<Vec<BigRational>> = BTreeSet::new();
    for cols in (0..n).combinations(rank) {
        if let Some(xb) = solve_square(&aug, &cols) {
            if xb.iter().any(|x| x.is_negative()) {
                continue;
            }
            let mut full = vec![BigRational::zero(); n];
            for (slot, &j) in cols.iter().enumerate() {
                full[j] = xb[slot].clone();
            }
            vertices.insert(full);
        }
    }
    Ok(vertices.into_iter().collect())
}

fn check_basis_guard(vars: usize, rows: usize, guard: u64) -> Result<()> {
    if binomial_exceeds(vars, rows, guard) {
        return Err(Error::BasisGuardExceeded { vars, rows, guard });
    }
    Ok(())
}

/// Whether C(n, k) > cap, without overflow.
fn binomial_exceeds(n: usize, k: usize, cap: u64) -> bool {
    if k > n {
        return false; // C(n, k) = 0
    }
    let k = k.min(n - k);
    let mut value: u128 = 1;
    for i in 0..k {
        value = value * (n - i) as u128 / (i + 1) as u128;
        if value > cap as u128 * 2 {
            return true;
        }
    }
    value > cap as u128
}

/// Solve the square system given by the chosen columns of the reduced
/// augmented matrix. `None` if singular.
fn solve_square(aug: &[Vec<BigRational>], cols: &[usize]) -> Option<Vec<BigRational>> {
    let r = aug.len();
    let n = aug[0].len() - 1;
    let mut m: Vec<Vec<BigRational>> = aug
        .iter()
        .map(|row| {
            let mut v: Vec<BigRational> = cols.iter().map(|&c| row[c].clone()).collect();
            v.push(row[n].clone());
            v
        })
        .collect();
    for col in 0..r {
        let piv = (col..r).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let mut pivot_row = std::mem::take(&mut m[col]);
        let p = pivot_row[col].clone();
        for x in &mut pivot_row {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        for (i, row) in m.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                eliminate(row, &f, &pivot_row);
            }
        }
        m[col] = pivot_row;
    }
    Some((0..r).map(|i| m[i][r].clone()).collect())
}
