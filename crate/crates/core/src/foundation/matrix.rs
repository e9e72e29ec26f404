//! Dense exact rational matrices and Gaussian elimination.

use num_traits::{One, Zero};

use super::Rational;

/// A dense `rows x cols` grid of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    /// Multiplies by a column vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * &v[c]).sum())
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns in
    /// left-to-right order.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            for c in 0..self.cols {
                self.data.swap(row * self.cols + c, pr * self.cols + c);
            }
            let inv = self.at(row, col).recip();
            for c in col..self.cols {
                let v = self.at(row, c) * &inv;
                *self.at_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c) - &factor * self.at(row, c);
                        *self.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce().len()
    }
}

/// Exact basis of the right nullspace `{v : M v = 0}`.
///
/// The basis is the reduced-echelon parametrization: pivot columns are
/// identified left to right and each free variable is set to one in turn,
/// so the result is deterministic.
pub fn nullspace(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let mut red = m.clone();
    let pivots = red.reduce();
    let mut basis = Vec::new();
    let mut pivot_of_col = vec![None; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = Some(r);
    }
    for free in 0..m.cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -red.at(r, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Outcome of solving `A x = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<Rational>),
    /// Consistent but with the given number of remaining degrees of freedom.
    Underdetermined(usize),
    /// No solution; carries the index of a violated (reduced) equation.
    Inconsistent(usize),
}

/// Solves `A x = b` by elimination on the augmented matrix.
pub fn solve_unique(a: &RationalMatrix, b: &[Rational]) -> SolveOutcome {
    assert_eq!(a.rows(), b.len());
    let mut aug = RationalMatrix::zero(a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            *aug.at_mut(r, c) = a.at(r, c).clone();
        }
        *aug.at_mut(r, a.cols) = b[r].clone();
    }
    let pivots = aug.reduce();
    if pivots.last() == Some(&a.cols) {
        // A pivot in the augmented column: 0 = 1 after reduction.
        return SolveOutcome::Inconsistent(pivots.len() - 1);
    }
    if pivots.len() < a.cols {
        return SolveOutcome::Underdetermined(a.cols - pivots.len());
    }
    let mut x = vec![Rational::zero(); a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.at(r, a.cols).clone();
    }
    SolveOutcome::Unique(x)
}
