//! Total orders with arbitrary nonnegative expected values.
//!
//! A run is a stretch `i..=j` whose cumulative products from `i` all stay at
//! least one. Row and column dominance fold each run into a single location
//! until only the final location may exceed one.

use num_traits::Zero;

use crate::model::ValueModel;
use crate::rational::{self, one, Rational};

/// Reduced values and, for each reduced location, the inclusive range of
/// original locations it stands for. Locations after the last range were
/// removed as dominated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReduction {
    pub values: ValueModel,
    pub segments: Vec<(usize, usize)>,
}

/// `A[i][j] = e_i ⋯ e_j` for `i <= j`, zero below the diagonal.
pub fn triangular_matrix(e: &[Rational]) -> Vec<Vec<Rational>> {
    let n = e.len();
    let mut a = vec![vec![Rational::zero(); n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        let mut acc = one();
        for (cell, x) in row[i..].iter_mut().zip(&e[i..]) {
            acc *= x;
            *cell = acc.clone();
        }
    }
    a
}

pub fn run_reduction(values: &ValueModel) -> RunReduction {
    let mut e: Vec<Rational> = values.values().to_vec();
    let mut segments: Vec<(usize, usize)> = (0..e.len()).map(|i| (i, i)).collect();
    loop {
        let n = e.len();
        let Some(i) = (0..n.saturating_sub(1)).find(|&i| e[i] >= one()) else {
            break;
        };
        let mut j = i;
        let mut acc = e[i].clone();
        while j + 1 < n && &acc * &e[j + 1] >= one() {
            j += 1;
            acc *= &e[j];
        }
        let k = if j + 1 < n {
            // Products past a maximal run drop below one, so the last column wins.
            j + 1
        } else {
            // The run reaches the end: keep the column with the smallest multiple.
            let mut best = (one(), i);
            let mut mult = one();
            for (c, x) in e.iter().enumerate().skip(i + 1) {
                mult *= x;
                if mult < best.0 {
                    best = (mult.clone(), c);
                }
            }
            best.1
        };
        let merged = rational::product(&e[i..=k]);
        let span = (segments[i].0, segments[k].1);
        e.splice(i..=k, [merged]);
        segments.splice(i..=k, [span]);
        if j + 1 >= n {
            e.truncate(i + 1);
            segments.truncate(i + 1);
        }
    }
    RunReduction {
        values: ValueModel::new(e).expect("products of nonnegative values"),
        segments,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::solve_matrix_game;
    use crate::rational::{int, ratio};

    fn reduce(e: Vec<Rational>) -> RunReduction {
        run_reduction(&ValueModel::new(e).unwrap())
    }

    #[test]
    fn examples() {
        let r = reduce(vec![int(2), ratio(1, 2)]);
        assert_eq!(r.values.values(), &[int(1)]);
        assert_eq!(r.segments, vec![(0, 1)]);
        assert_eq!(
            solve_matrix_game(&triangular_matrix(r.values.values()))
                .unwrap()
                .value,
            int(1)
        );

        let r = reduce(vec![ratio(1, 2), ratio(1, 3), int(3)]);
        assert_eq!(r.values.values(), &[ratio(1, 2), ratio(1, 3), int(3)]);

        let r = reduce(vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(
            solve_matrix_game(&triangular_matrix(r.values.values()))
                .unwrap()
                .value,
            ratio(1, 3)
        );
    }

    #[test]
    fn reduction_preserves_value() {
        let e = vec![int(3), ratio(1, 2), ratio(1, 4), int(2), ratio(2, 3)];
        let before = solve_matrix_game(&triangular_matrix(&e)).unwrap().value;
        let r = reduce(e);
        let after = solve_matrix_game(&triangular_matrix(r.values.values()))
            .unwrap()
            .value;
        assert_eq!(before, after);
        let last = r.values.len() - 1;
        assert!(r.values.values()[..last].iter().all(|v| *v < int(1)));
    }
}
