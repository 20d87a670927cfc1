//! Exact primal simplex over rationals.
//!
//! Solves `max c·x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the slack
//! basis is feasible from the start. Bland's rule prevents cycling.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    /// Optimal dual values, one per constraint row.
    pub duals: Vec<Rational>,
    pub objective: Rational,
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Internal("LP dimensions disagree".into()));
    }
    if b.iter().any(|v| v.is_negative()) {
        return Err(Error::Internal(
            "LP right-hand side must be nonnegative".into(),
        ));
    }
    let width = n + m;
    // Row i: [A | I | b]. Objective row: [-c | 0 | 0].
    let mut t: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = Vec::with_capacity(width + 1);
            r.extend(row.iter().cloned());
            r.extend((0..m).map(|j| {
                if i == j {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut obj: Vec<Rational> = c
        .iter()
        .map(|v| -v)
        .chain((0..=m).map(|_| Rational::zero()))
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();

    while let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let r = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => r < *lr || (r == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, r));
            }
        }
        let Some((pivot_row, _)) = leave else {
            return Err(Error::Unbounded);
        };
        pivot(&mut t, &mut obj, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[i][width].clone();
        }
    }
    let duals = obj[n..width].to_vec();
    Ok(LpSolution {
        x,
        duals,
        objective: obj[width].clone(),
    })
}

fn pivot(t: &mut [Vec<Rational>], obj: &mut [Rational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[row].clone();
    let eliminate = |target: &mut [Rational]| {
        let f = target[col].clone();
        if f.is_zero() {
            return;
        }
        for (v, pv) in target.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    };
    for (i, r) in t.iter_mut().enumerate() {
        if i != row {
            eliminate(r);
        }
    }
    eliminate(obj);
}
