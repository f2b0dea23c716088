//! Backtracking enumeration of independent column subsets.
//!
//! A depth-first scan maintains an incrementally updated integer echelon of
//! the selected columns, so each candidate column costs one cross-multiplied
//! reduction instead of a fresh elimination. Determinants fall out of the
//! pivot products at full-depth leaves.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Integer echelon of a growing column selection. Columns are reduced by
/// cross-multiplication (no divisions), and the accumulated multipliers are
/// divided back out when a determinant is requested.
struct Echelon {
    height: usize,
    pivot_rows: Vec<usize>,
    cols: Vec<Vec<BigInt>>,
    pivots: Vec<BigInt>,
    multipliers: Vec<BigInt>,
}

impl Echelon {
    fn new(height: usize) -> Self {
        Echelon {
            height,
            pivot_rows: Vec::new(),
            cols: Vec::new(),
            pivots: Vec::new(),
            multipliers: Vec::new(),
        }
    }

    /// Reduces `col` against the echelon; pushes it and returns true when it
    /// is independent of the current selection.
    fn try_push(&mut self, col: &[BigInt]) -> bool {
        let mut c = col.to_vec();
        let mut multiplier = BigInt::one();
        for t in 0..self.cols.len() {
            let coeff = c[self.pivot_rows[t]].clone();
            if coeff.is_zero() {
                continue;
            }
            let p = &self.pivots[t];
            for i in 0..self.height {
                c[i] = p * &c[i] - &coeff * &self.cols[t][i];
            }
            multiplier *= p;
        }
        let Some(prow) = c.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let pivot = c[prow].clone();
        self.pivot_rows.push(prow);
        self.cols.push(c);
        self.pivots.push(pivot);
        self.multipliers.push(multiplier);
        true
    }

    fn pop(&mut self) {
        self.pivot_rows.pop();
        self.cols.pop();
        self.pivots.pop();
        self.multipliers.pop();
    }

    /// |det| of the selected columns; valid when the selection is square,
    /// i.e. its size equals the matrix height.
    fn abs_det(&self) -> BigInt {
        let num: BigInt = self.pivots.iter().map(|p| p.abs()).product();
        let den: BigInt = self.multipliers.iter().map(|m| m.abs()).product();
        debug_assert!((&num % &den).is_zero(), "pivot product must divide exactly");
        num / den
    }
}

fn dfs(
    cols: &[Vec<BigInt>],
    start: usize,
    target: usize,
    echelon: &mut Echelon,
    selected: &mut Vec<usize>,
    emit_det: bool,
    visit: &mut dyn FnMut(&[usize], BigInt),
) {
    if selected.len() == target {
        let det = if emit_det { echelon.abs_det() } else { BigInt::zero() };
        visit(selected, det);
        return;
    }
    let need = target - selected.len();
    for j in start..cols.len() {
        if cols.len() - j < need {
            break;
        }
        if echelon.try_push(&cols[j]) {
            selected.push(j);
            dfs(cols, j + 1, target, echelon, selected, emit_det, visit);
            selected.pop();
            echelon.pop();
        }
    }
}

fn to_columns(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m.get(i, j).clone()).collect()).collect()
}

/// Visits every independent subset of `size` columns of `m`, in
/// lexicographic order of (0-based) index sets.
pub fn for_each_independent_subset(
    m: &IntMatrix,
    size: usize,
    mut visit: impl FnMut(&[usize]),
) {
    let cols = to_columns(m);
    let mut echelon = Echelon::new(m.rows());
    let mut selected = Vec::with_capacity(size);
    dfs(&cols, 0, size, &mut echelon, &mut selected, false, &mut |s, _| visit(s));
}

/// All independent subsets of `size` columns, lexicographically ordered.
pub fn independent_column_subsets(m: &IntMatrix, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_independent_subset(m, size, |s| out.push(s.to_vec()));
    out
}

/// For a matrix of full row rank, visits every maximal independent column
/// subset (size = row count) together with |det| of the selected square
/// block, in lexicographic order.
///
/// Panics when `m` does not have full row rank (the determinant would not
/// be a well-defined quantity of the subset).
pub fn for_each_basis_subset_with_det(
    m: &IntMatrix,
    mut visit: impl FnMut(&[usize], BigInt),
) {
    assert_eq!(m.rank(), m.rows(), "matrix must have full row rank");
    let cols = to_columns(m);
    let mut echelon = Echelon::new(m.rows());
    let mut selected = Vec::with_capacity(m.rows());
    dfs(&cols, 0, m.rows(), &mut echelon, &mut selected, true, &mut visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn enumeration_matches_brute_force_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let rows = rng.gen_range(1..4);
            let cols = rng.gen_range(1..7);
            let m =
                IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-2i64..=2)));
            for size in 0..=rows {
                let fast = independent_column_subsets(&m, size);
                let slow: Vec<Vec<usize>> = (0..cols)
                    .combinations(size)
                    .filter(|s| m.select_columns(s).unwrap().rank() == size)
                    .collect();
                assert_eq!(fast, slow, "size {size} of {m:?}");
            }
        }
    }

    #[test]
    fn basis_scan_reports_exact_determinants() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let rows = rng.gen_range(1..4);
            let cols = rng.gen_range(rows..7);
            // Force full row rank by retrying.
            let m = loop {
                let m =
                    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
                if m.rank() == rows {
                    break m;
                }
            };
            for_each_basis_subset_with_det(&m, |subset, det| {
                let direct =
                    m.select_columns(subset).unwrap().determinant().unwrap().abs();
                assert_eq!(det, direct, "subset {subset:?} of {m:?}");
            });
        }
    }

    #[test]
    fn empty_target_yields_single_empty_subset() {
        let m = IntMatrix::from_rows(&[vec![1, 2]]);
        assert_eq!(independent_column_subsets(&m, 0), vec![Vec::<usize>::new()]);
        // Rank-0 matrix at size 0: the empty selection has determinant 1.
        let zero = IntMatrix::zeros(0, 3);
        let mut seen = Vec::new();
        for_each_basis_subset_with_det(&zero, |s, det| seen.push((s.to_vec(), det)));
        assert_eq!(seen, vec![(vec![], BigInt::one())]);
    }
}
