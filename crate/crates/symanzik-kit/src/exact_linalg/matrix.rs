//! Dense integer and rational matrices with exact elimination.
//!
//! `IntMatrix` uses fraction-free (Bareiss) elimination for ranks and
//! determinants so every intermediate value stays an integer. `RatMatrix`
//! performs plain rational elimination and is used wherever inputs are
//! genuinely rational (parameters, weights, preimages).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Row-major matrix over arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from machine-integer rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&v| BigInt::from(v)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Self {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = BigInt::zero();
            for t in 0..self.cols {
                acc += self.get(i, t) * rhs.get(t, j);
            }
            acc
        }))
    }

    /// Columns `idx` (0-based, in the given order) as a new matrix.
    pub fn select_columns(&self, idx: &[usize]) -> Result<IntMatrix> {
        for &c in idx {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange(format!("column {c} of {}", self.cols)));
            }
        }
        Ok(IntMatrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone()))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<IntMatrix> {
        for &r in idx {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange(format!("row {r} of {}", self.rows)));
            }
        }
        Ok(IntMatrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone()))
    }

    /// All rows except those listed (0-based).
    pub fn delete_rows(&self, idx: &[usize]) -> IntMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|r| !idx.contains(r)).collect();
        self.select_rows(&keep).expect("kept rows are in range")
    }

    pub fn hstack(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { rhs.get(i, j - self.cols).clone() }
        }))
    }

    /// Gram matrix `self^T * self`.
    pub fn gram(&self) -> IntMatrix {
        self.transpose().matmul(self).expect("shapes agree by construction")
    }

    /// Rank via fraction-free Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let at = |a: &Vec<BigInt>, i: usize, j: usize| a[i * cols + j].clone();
        let mut prev = BigInt::one();
        let mut pr = 0usize; // pivot row
        for pc in 0..cols {
            if pr == rows {
                break;
            }
            let Some(piv) = (pr..rows).find(|&i| !a[i * cols + pc].is_zero()) else {
                continue;
            };
            if piv != pr {
                for j in 0..cols {
                    a.swap(pr * cols + j, piv * cols + j);
                }
            }
            let pivot = at(&a, pr, pc);
            for i in (pr + 1)..rows {
                let factor = at(&a, i, pc);
                for j in 0..cols {
                    let v = (&pivot * at(&a, i, j) - &factor * at(&a, pr, j)) / &prev;
                    a[i * cols + j] = v;
                }
            }
            prev = pivot;
            pr += 1;
        }
        pr
    }

    /// Determinant via Bareiss elimination. Empty matrices have determinant 1.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.clone();
        let at = |a: &Vec<BigInt>, i: usize, j: usize| a[i * n + j].clone();
        let mut prev = BigInt::one();
        let mut sign = 1i32;
        for p in 0..n {
            let Some(piv) = (p..n).find(|&i| !a[i * n + p].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if piv != p {
                for j in 0..n {
                    a.swap(p * n + j, piv * n + j);
                }
                sign = -sign;
            }
            let pivot = at(&a, p, p);
            for i in (p + 1)..n {
                let factor = at(&a, i, p);
                for j in (p + 1)..n {
                    let v = (&pivot * at(&a, i, j) - &factor * at(&a, p, j)) / &prev;
                    a[i * n + j] = v;
                }
                a[i * n + p] = BigInt::zero();
            }
            prev = pivot;
        }
        let det = at(&a, n - 1, n - 1);
        Ok(if sign < 0 { -det } else { det })
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| BigRational::from_integer(v.clone())).collect(),
        }
    }

    /// Parses the plain text format: a header line `rows cols` followed by
    /// `rows` lines of `cols` integers each.
    pub fn parse_text(s: &str) -> Result<IntMatrix> {
        let mut tokens = s.split_whitespace();
        let rows: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty matrix input".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad row count: {e}")))?;
        let cols: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("missing column count".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad column count: {e}")))?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {} entries", rows * cols)))?;
            let v: BigInt =
                tok.parse().map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))?;
            data.push(v);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing tokens after matrix entries".into()));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Row-major matrix over arbitrary-precision rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Single-column matrix from a vector.
    pub fn column(v: &[BigRational]) -> Self {
        RatMatrix::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(RatMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = BigRational::zero();
            for t in 0..self.cols {
                acc += self.get(i, t) * rhs.get(t, j);
            }
            acc
        }))
    }

    pub fn select_columns(&self, idx: &[usize]) -> Result<RatMatrix> {
        for &c in idx {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange(format!("column {c} of {}", self.cols)));
            }
        }
        Ok(RatMatrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone()))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<RatMatrix> {
        for &r in idx {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange(format!("row {r} of {}", self.rows)));
            }
        }
        Ok(RatMatrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone()))
    }

    pub fn hstack(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(RatMatrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { rhs.get(i, j - self.cols).clone() }
        }))
    }

    pub fn column_vec(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, c).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_echelon().len()
    }

    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigRational::one());
        }
        let mut m = self.clone();
        let mut det = BigRational::one();
        for p in 0..n {
            let Some(piv) = (p..n).find(|&i| !m.get(i, p).is_zero()) else {
                return Ok(BigRational::zero());
            };
            if piv != p {
                for j in 0..n {
                    let tmp = m.get(p, j).clone();
                    m.set(p, j, m.get(piv, j).clone());
                    m.set(piv, j, tmp);
                }
                det = -det;
            }
            let pivot = m.get(p, p).clone();
            det *= &pivot;
            for i in (p + 1)..n {
                let factor = m.get(i, p) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in p..n {
                    let v = m.get(i, j) - &factor * m.get(p, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// In-place reduction to row echelon form; returns the pivot columns.
    fn row_echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for pc in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(piv) = (pr..self.rows).find(|&i| !self.get(i, pc).is_zero()) else {
                continue;
            };
            if piv != pr {
                for j in 0..self.cols {
                    let tmp = self.get(pr, j).clone();
                    self.set(pr, j, self.get(piv, j).clone());
                    self.set(piv, j, tmp);
                }
            }
            let pivot = self.get(pr, pc).clone();
            for i in 0..self.rows {
                if i == pr || self.get(i, pc).is_zero() {
                    continue;
                }
                let factor = self.get(i, pc) / &pivot;
                for j in pc..self.cols {
                    let v = self.get(i, j) - &factor * self.get(pr, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        pivots
    }

    /// Solves `self * X = rhs` exactly. Returns `None` when inconsistent;
    /// underdetermined systems get the particular solution with free
    /// variables set to zero.
    pub fn solve(&self, rhs: &RatMatrix) -> Result<Option<RatMatrix>> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve {}x{} against rhs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut aug = self.hstack(rhs)?;
        let pivots = aug.row_echelon();
        // Any pivot column falling in the rhs block marks inconsistency.
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = RatMatrix::zeros(self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            let pivot = aug.get(row, pc).clone();
            for j in 0..rhs.cols {
                let v = aug.get(row, self.cols + j) / &pivot;
                x.set(pc, j, v);
            }
        }
        Ok(Some(x))
    }

    /// Solves for a single right-hand-side vector.
    pub fn solve_vec(&self, rhs: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        let sol = self.solve(&RatMatrix::column(rhs))?;
        Ok(sol.map(|m| m.column_vec(0)))
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `det(M_I^T M_I)^(k/2)` for the columns `I` of `m`, with the convention
/// `0^0 = 0`: at `k = 0` the result is 1 exactly when the columns are
/// linearly independent.
pub fn gram_norm_pow(m: &IntMatrix, subset: &[usize], k: usize) -> Result<BigInt> {
    assert!(k % 2 == 0, "order must be even");
    let sub = m.select_columns(subset)?;
    let g = sub.gram().determinant()?;
    debug_assert!(!g.is_negative(), "Gram determinants are nonnegative");
    if k == 0 {
        return Ok(if g.is_zero() { BigInt::zero() } else { BigInt::one() });
    }
    Ok(g.pow((k / 2) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_determinant_agree_with_hand_values() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.determinant().unwrap(), BigInt::from(6));

        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.rank(), 1);
        assert_eq!(singular.determinant().unwrap(), BigInt::zero());

        let empty = IntMatrix::zeros(0, 0);
        assert_eq!(empty.determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        // Independent oracle: recursive cofactor expansion.
        fn cofactor_det(m: &IntMatrix) -> BigInt {
            let n = m.rows();
            if n == 0 {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for j in 0..n {
                let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                    m.get(r + 1, if c < j { c } else { c + 1 }).clone()
                });
                let term = m.get(0, j) * cofactor_det(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 0..=4 {
            for _ in 0..20 {
                let m = IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-5i64..=5)));
                assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
            }
        }
    }

    #[test]
    fn rational_solve_finds_exact_solutions() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1], vec![3, 2]]).to_rational();
        let rhs = IntMatrix::from_rows(&[vec![3], vec![2], vec![5]]).to_rational();
        let x = a.solve(&rhs).unwrap().expect("consistent");
        assert_eq!(x.get(0, 0), &BigRational::from_integer(BigInt::one()));
        assert_eq!(x.get(1, 0), &BigRational::from_integer(BigInt::one()));

        let bad = IntMatrix::from_rows(&[vec![1], vec![1]]).to_rational();
        let rhs2 = IntMatrix::from_rows(&[vec![1], vec![2]]).to_rational();
        assert!(bad.solve(&rhs2).unwrap().is_none());
    }

    #[test]
    fn gram_norm_pow_applies_zero_power_convention() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![0, 0]]);
        // Columns dependent in rank-1 matrix: norm is 0 for every even k.
        assert_eq!(gram_norm_pow(&m, &[0, 1], 0).unwrap(), BigInt::zero());
        assert_eq!(gram_norm_pow(&m, &[0, 1], 2).unwrap(), BigInt::zero());
        // Single independent column of squared length 5.
        assert_eq!(gram_norm_pow(&m, &[1], 0).unwrap(), BigInt::one());
        assert_eq!(gram_norm_pow(&m, &[1], 2).unwrap(), BigInt::from(4));
        assert_eq!(gram_norm_pow(&m, &[1], 4).unwrap(), BigInt::from(16));
        // Empty subset: the empty family has norm 1.
        assert_eq!(gram_norm_pow(&m, &[], 2).unwrap(), BigInt::one());
        assert_eq!(gram_norm_pow(&m, &[], 0).unwrap(), BigInt::one());
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = IntMatrix::from_rows(&[vec![-1, -1], vec![-1, -1], vec![1, -1]]);
        let text = m.to_text();
        assert_eq!(IntMatrix::parse_text(&text).unwrap(), m);
        assert!(IntMatrix::parse_text("2 2 1 2 3").is_err());
        assert!(IntMatrix::parse_text("2 2 1 2 3 4 5").is_err());
    }
}
