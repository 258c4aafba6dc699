//! Exact linear algebra over the rationals.
//!
//! Rows are cleared to integers and reduced with fraction-free (Bareiss)
//! elimination; back-substitution then happens over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{denominator_lcm, primitive_integer_vector, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    /// The system has exactly one solution.
    Unique(Vec<Rational>),
    /// Solutions are `particular + span(kernel)`; kernel vectors are primitive integers.
    Family {
        particular: Vec<Rational>,
        kernel: Vec<Vec<BigInt>>,
    },
    Inconsistent,
}

/// Integer row-echelon form of `[matrix | rhs]` plus pivot columns.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn to_integer_rows(matrix: &[Vec<Rational>], rhs: Option<&[Rational]>) -> Vec<Vec<BigInt>> {
    matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut full: Vec<Rational> = row.clone();
            if let Some(b) = rhs {
                full.push(b[i].clone());
            }
            let lcm = Rational::from_integer(denominator_lcm(&full));
            full.iter().map(|v| (v * &lcm).to_integer()).collect()
        })
        .collect()
}

/// Bareiss elimination restricted to the first `ncols` columns.
fn bareiss(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in (r + 1)..nrows {
            let factor = rows[i][c].clone();
            let width = rows[i].len();
            for j in c..width {
                let v = &rows[r][c] * &rows[i][j] - &factor * &rows[r][j];
                rows[i][j] = v / &prev;
            }
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    if matrix.is_empty() {
        return 0;
    }
    let ncols = matrix[0].len();
    bareiss(to_integer_rows(matrix, None), ncols).pivots.len()
}

pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    assert!(
        matrix.iter().all(|r| r.len() == n),
        "square matrix expected"
    );
    if n == 0 {
        return Rational::one();
    }
    // Row scaling factors are undone at the end.
    let mut scale = Rational::one();
    let rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            let lcm = denominator_lcm(row);
            scale *= Rational::from_integer(lcm.clone());
            let l = Rational::from_integer(lcm);
            row.iter().map(|v| (v * &l).to_integer()).collect()
        })
        .collect();
    let mut rows = rows;
    let mut sign = 1;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            rows.swap(p, c);
            sign = -sign;
        }
        for i in (c + 1)..n {
            for j in (c + 1)..n {
                let v = &rows[c][c] * &rows[i][j] - &rows[i][c] * &rows[c][j];
                rows[i][j] = v / &prev;
            }
            rows[i][c] = BigInt::zero();
        }
        prev = rows[c][c].clone();
    }
    let det = Rational::from_integer(rows[n - 1][n - 1].clone() * sign);
    det / scale
}

/// Back-substitution on an echelon form: free variables fixed by `free_values`.
fn back_substitute(
    ech: &Echelon,
    ncols: usize,
    augmented: bool,
    free: &[(usize, Rational)],
) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); ncols];
    for (j, v) in free {
        x[*j] = v.clone();
    }
    for (r, &c) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[r];
        let mut acc = if augmented {
            Rational::from_integer(row[ncols].clone())
        } else {
            Rational::zero()
        };
        for j in (c + 1)..ncols {
            if !row[j].is_zero() {
                acc -= Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rational::from_integer(row[c].clone());
    }
    x
}

/// Kernel basis of `matrix`, one primitive integer vector per free column
/// (first nonzero coordinate positive).
pub fn kernel_basis(matrix: &[Vec<Rational>], ncols: usize) -> Vec<Vec<BigInt>> {
    let ech = bareiss(to_integer_rows(matrix, None), ncols);
    free_columns(&ech.pivots, ncols)
        .map(|j| {
            let v = back_substitute(&ech, ncols, false, &[(j, Rational::one())]);
            primitive_integer_vector(&v)
        })
        .collect()
}

fn free_columns(pivots: &[usize], ncols: usize) -> impl Iterator<Item = usize> + '_ {
    (0..ncols).filter(move |j| !pivots.contains(j))
}

pub fn solve_linear(matrix: &[Vec<Rational>], rhs: &[Rational]) -> LinearSolution {
    assert_eq!(matrix.len(), rhs.len(), "one right-hand side per row");
    let ncols = matrix.first().map_or(0, Vec::len);
    let ech = bareiss(to_integer_rows(matrix, Some(rhs)), ncols);
    let inconsistent = ech.rows[ech.pivots.len()..]
        .iter()
        .any(|row| !row[ncols].is_zero());
    if inconsistent {
        return LinearSolution::Inconsistent;
    }
    let particular = back_substitute(&ech, ncols, true, &[]);
    if ech.pivots.len() == ncols {
        return LinearSolution::Unique(particular);
    }
    LinearSolution::Family {
        particular,
        kernel: kernel_basis(matrix, ncols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn identity_system() {
        let a = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let sol = solve_linear(&a, &[int(1), int(0), int(0)]);
        assert_eq!(sol, LinearSolution::Unique(vec![int(1), int(0), int(0)]));
    }

    #[test]
    fn primitive_kernel() {
        let a = m(&[&[1, 1]]);
        match solve_linear(&a, &[int(0)]) {
            LinearSolution::Family { kernel, .. } => {
                assert_eq!(kernel, vec![vec![BigInt::from(1), BigInt::from(-1)]])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconsistent_system() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(
            solve_linear(&a, &[int(1), int(3)]),
            LinearSolution::Inconsistent
        );
    }

    #[test]
    fn rational_entries() {
        let a = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), int(-1)]];
        match solve_linear(&a, &[int(1), int(0)]) {
            LinearSolution::Unique(x) => {
                assert_eq!(&x[0] * rat(1, 2) + &x[1] * rat(1, 3), int(1));
                assert_eq!(&x[0] * rat(1, 4) - &x[1], int(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&m(&[&[2, 1], &[1, 3]])), int(5));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), int(0));
        let v: Vec<Vec<Rational>> = (1..=4)
            .map(|t: i64| (0..4).map(|k| int(t.pow(k))).collect())
            .collect();
        assert_eq!(determinant(&v), int(12));
        let a = vec![vec![rat(1, 2), int(0)], vec![int(3), rat(2, 3)]];
        assert_eq!(determinant(&a), rat(1, 3));
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])), 2);
    }
}
