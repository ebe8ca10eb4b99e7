//! Exact primal simplex for `max c·x` subject to `A x <= b`, `x >= 0`, with
//! `b >= 0` so the slack basis is feasible from the start.
//!
//! Pivoting follows Bland's rule (smallest entering index, smallest leaving
//! basis index among ratio ties), which guarantees termination. At the optimum
//! the objective-row entries under the slack columns are an optimal dual
//! solution.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per constraint row; `y >= 0`, `yᵀA >= c`, `yᵀb = value`.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    objective: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for x in self.rows[row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let support: Vec<usize> = (0..=self.width)
            .filter(|&j| !self.rows[row][j].is_zero())
            .collect();
        let pivot_row = self.rows[row].clone();
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[col].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &support {
                target[j] -= &factor * &pivot_row[j];
            }
        };
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i != row {
                eliminate(r);
            }
        }
        eliminate(&mut self.objective);
        self.basis[row] = col;
    }
}

/// Solves the LP exactly. `a` is given row-major, one row per constraint.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<LpSolution> {
    let m = a.len();
    let k = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != k) {
        return Err(Error::Precondition("constraint matrix shape mismatch".into()));
    }
    if b.iter().any(|x| x.is_negative()) {
        return Err(Error::Precondition("right-hand side must be non-negative".into()));
    }
    let width = k + m;
    let rows = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, rhs))| {
            let mut t = Vec::with_capacity(width + 1);
            t.extend(row.iter().cloned());
            t.extend((0..m).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }));
            t.push(rhs.clone());
            t
        })
        .collect();
    let mut objective: Vec<Rational> = c.iter().map(|x| -x).collect();
    objective.resize(width + 1, Rational::zero());
    let mut t = Tableau {
        rows,
        objective,
        basis: (k..width).collect(),
        width,
    };

    let mut pivots = 0;
    while let Some(col) = (0..width).find(|&j| t.objective[j].is_negative()) {
        let mut best: Option<(usize, Rational)> = None;
        for (i, row) in t.rows.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[col];
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && t.basis[i] < t.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        let (row, _) = best.ok_or_else(|| Error::Precondition("linear program is unbounded".into()))?;
        t.pivot(row, col);
        pivots += 1;
    }

    let mut primal = vec![Rational::zero(); k];
    for (i, &j) in t.basis.iter().enumerate() {
        if j < k {
            primal[j] = t.rows[i][width].clone();
        }
    }
    Ok(LpSolution {
        value: t.objective[width].clone(),
        primal,
        dual: t.objective[k..width].to_vec(),
        pivots,
    })
}
