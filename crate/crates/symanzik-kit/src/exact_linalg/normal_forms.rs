//! Smith and Hermite normal forms, lattice bases, saturation indices.
//!
//! All canonical choices are fixed here: Hermite pivots are positive and
//! entries in pivot rows are reduced to `[0, pivot)`, kernel bases are
//! saturated and Hermite-normalized, so every caller sees deterministic
//! output.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

use super::matrix::IntMatrix;

/// Outcome of `smith_normal_form`: unimodular `left`, `right` with
/// `left * m * right = s`, `s` diagonal with nonnegative entries in a
/// divisibility chain.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    /// The nonzero diagonal entries d_1 | d_2 | ... of `s`.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).filter(|d| !d.is_zero()).collect()
    }
}

/// Smith normal form by repeated gcd pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    let swap_rows = |a: &mut IntMatrix, left: &mut IntMatrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for c in 0..a.cols() {
            let tmp = a.get(i, c).clone();
            a.set(i, c, a.get(j, c).clone());
            a.set(j, c, tmp);
        }
        for c in 0..left.cols() {
            let tmp = left.get(i, c).clone();
            left.set(i, c, left.get(j, c).clone());
            left.set(j, c, tmp);
        }
    };
    let swap_cols = |a: &mut IntMatrix, right: &mut IntMatrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for r in 0..a.rows() {
            let tmp = a.get(r, i).clone();
            a.set(r, i, a.get(r, j).clone());
            a.set(r, j, tmp);
        }
        for r in 0..right.rows() {
            let tmp = right.get(r, i).clone();
            right.set(r, i, right.get(r, j).clone());
            right.set(r, j, tmp);
        }
    };
    // Unimodular 2x2 combination of rows (i, j), replacing
    //   row_i <- x*row_i + y*row_j,  row_j <- u*row_i + v*row_j
    // with x*v - y*u = +-1.
    let combine_rows = |a: &mut IntMatrix,
                        left: &mut IntMatrix,
                        i: usize,
                        j: usize,
                        x: &BigInt,
                        y: &BigInt,
                        u: &BigInt,
                        v: &BigInt| {
        for c in 0..a.cols() {
            let (ai, aj) = (a.get(i, c).clone(), a.get(j, c).clone());
            a.set(i, c, x * &ai + y * &aj);
            a.set(j, c, u * &ai + v * &aj);
        }
        for c in 0..left.cols() {
            let (li, lj) = (left.get(i, c).clone(), left.get(j, c).clone());
            left.set(i, c, x * &li + y * &lj);
            left.set(j, c, u * &li + v * &lj);
        }
    };
    let combine_cols = |a: &mut IntMatrix,
                        right: &mut IntMatrix,
                        i: usize,
                        j: usize,
                        x: &BigInt,
                        y: &BigInt,
                        u: &BigInt,
                        v: &BigInt| {
        for r in 0..a.rows() {
            let (ai, aj) = (a.get(r, i).clone(), a.get(r, j).clone());
            a.set(r, i, x * &ai + y * &aj);
            a.set(r, j, u * &ai + v * &aj);
        }
        for r in 0..right.rows() {
            let (ri, rj) = (right.get(r, i).clone(), right.get(r, j).clone());
            right.set(r, i, x * &ri + y * &rj);
            right.set(r, j, u * &ri + v * &rj);
        }
    };

    let mut pos = 0usize;
    while pos < rows && pos < cols {
        // Locate a pivot in the trailing submatrix.
        let mut pivot = None;
        'search: for i in pos..rows {
            for j in pos..cols {
                if !a.get(i, j).is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut left, pos, pi);
        swap_cols(&mut a, &mut right, pos, pj);

        loop {
            // Clear the pivot column with unimodular row combinations.
            for i in (pos + 1)..rows {
                if a.get(i, pos).is_zero() {
                    continue;
                }
                let p = a.get(pos, pos).clone();
                let q = a.get(i, pos).clone();
                if (&q % &p).is_zero() {
                    let f = &q / &p;
                    combine_rows(
                        &mut a,
                        &mut left,
                        pos,
                        i,
                        &BigInt::one(),
                        &BigInt::zero(),
                        &(-f),
                        &BigInt::one(),
                    );
                } else {
                    let e = p.extended_gcd(&q);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let (u, v) = (-(&q / &g), &p / &g);
                    combine_rows(&mut a, &mut left, pos, i, &x, &y, &u, &v);
                }
            }
            // Clear the pivot row with unimodular column combinations.
            for j in (pos + 1)..cols {
                if a.get(pos, j).is_zero() {
                    continue;
                }
                let p = a.get(pos, pos).clone();
                let q = a.get(pos, j).clone();
                if (&q % &p).is_zero() {
                    let f = &q / &p;
                    combine_cols(
                        &mut a,
                        &mut right,
                        pos,
                        j,
                        &BigInt::one(),
                        &BigInt::zero(),
                        &(-f),
                        &BigInt::one(),
                    );
                } else {
                    let e = p.extended_gcd(&q);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let (u, v) = (-(&q / &g), &p / &g);
                    combine_cols(&mut a, &mut right, pos, j, &x, &y, &u, &v);
                }
            }
            // Column clearing may have refilled the pivot column.
            let col_clear = ((pos + 1)..rows).all(|i| a.get(i, pos).is_zero());
            let row_clear = ((pos + 1)..cols).all(|j| a.get(pos, j).is_zero());
            if col_clear && row_clear {
                break;
            }
        }

        // Enforce the divisibility chain: fold any non-multiple into the pivot.
        let p = a.get(pos, pos).clone();
        let mut divisible = true;
        'chain: for i in (pos + 1)..rows {
            for j in (pos + 1)..cols {
                if !(a.get(i, j) % &p).is_zero() {
                    combine_rows(
                        &mut a,
                        &mut left,
                        pos,
                        i,
                        &BigInt::one(),
                        &BigInt::one(),
                        &BigInt::zero(),
                        &BigInt::one(),
                    );
                    divisible = false;
                    break 'chain;
                }
            }
        }
        if !divisible {
            continue; // re-clear at the same position
        }
        pos += 1;
    }
    // Sign normalization: make every diagonal entry nonnegative by flipping rows.
    for i in 0..rows.min(cols) {
        if a.get(i, i).is_negative() {
            for c in 0..cols {
                let v = -a.get(i, c).clone();
                a.set(i, c, v);
            }
            for c in 0..left.cols() {
                let v = -left.get(i, c).clone();
                left.set(i, c, v);
            }
        }
    }
    SnfResult { s: a, left, right }
}

/// Product of the nonzero elementary divisors: the index of the column
/// lattice inside its saturation. Equals 1 for zero or empty matrices.
pub fn saturation_index(m: &IntMatrix) -> BigInt {
    smith_normal_form(m).elementary_divisors().iter().product()
}

/// Canonical basis of the lattice generated by the columns of `m`, as the
/// columns of the returned matrix (column-style Hermite normal form, zero
/// columns dropped, pivots positive, pivot-row entries reduced mod pivot).
pub fn column_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let rows = m.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..m.cols())
        .map(|j| (0..rows).map(|i| m.get(i, j).clone()).collect())
        .collect();
    let mut echelon: Vec<Vec<BigInt>> = Vec::new(); // pivot rows strictly increase
    for row in 0..rows {
        // Gcd-eliminate all remaining columns against each other at `row`.
        loop {
            let live: Vec<usize> =
                (0..cols.len()).filter(|&j| !cols[j][row].is_zero()).collect();
            if live.len() <= 1 {
                break;
            }
            // Reduce by the column with smallest nonzero |entry|.
            let &best = live
                .iter()
                .min_by_key(|&&j| cols[j][row].abs())
                .expect("nonempty");
            let pivot_val = cols[best][row].clone();
            let mut done = true;
            for &j in &live {
                if j == best {
                    continue;
                }
                let q = cols[j][row].div_floor(&pivot_val);
                if !q.is_zero() {
                    for i in 0..rows {
                        let v = &cols[j][i] - &q * &cols[best][i];
                        cols[j][i] = v;
                    }
                }
                if !cols[j][row].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if let Some(j) = (0..cols.len()).find(|&j| !cols[j][row].is_zero()) {
            let mut col = cols.remove(j);
            if col[row].is_negative() {
                for v in col.iter_mut() {
                    *v = -std::mem::take(v);
                }
            }
            echelon.push(col);
        }
    }
    // Normalize: entries of earlier columns in later pivot rows into [0, pivot).
    let pivot_row = |col: &Vec<BigInt>| col.iter().position(|v| !v.is_zero()).expect("nonzero");
    let pivots: Vec<usize> = echelon.iter().map(pivot_row).collect();
    for j in 0..echelon.len() {
        for j2 in 0..j {
            let r = pivots[j];
            let q = echelon[j2][r].div_floor(&echelon[j][r]);
            if !q.is_zero() {
                for i in 0..rows {
                    let v = &echelon[j2][i] - &q * &echelon[j][i];
                    echelon[j2][i] = v;
                }
            }
        }
    }
    IntMatrix::from_fn(rows, echelon.len(), |i, j| echelon[j][i].clone())
}

/// Canonical basis of the lattice generated by the rows of `m`, returned as
/// a matrix whose rows form the basis.
pub fn row_lattice_basis(m: &IntMatrix) -> IntMatrix {
    column_lattice_basis(&m.transpose()).transpose()
}

/// Canonical basis of the saturated integer kernel `ker(m) ∩ Z^cols`, as
/// columns. The first nonzero entry of every column is positive.
pub fn kernel_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let t = snf.elementary_divisors().len();
    let kernel_cols: Vec<usize> = (t..m.cols()).collect();
    let raw = snf
        .right
        .select_columns(&kernel_cols)
        .expect("kernel columns are in range");
    column_lattice_basis(&raw)
}

/// Canonical basis of the saturation of the column lattice: the lattice
/// `span(columns) ∩ Z^rows`, computed as the integer kernel of the
/// defining equations of the column span.
pub fn saturated_column_basis(m: &IntMatrix) -> IntMatrix {
    // Rows of ker(m^T)^T cut out span(columns); their integer kernel is the
    // saturation, and kernel bases are canonical and saturated already.
    let cokernel = kernel_lattice_basis(&m.transpose());
    kernel_lattice_basis(&cokernel.transpose())
}

/// Solves `f * v = u` for the unique integer matrix `v`, assuming the
/// columns of `f` are independent and every column of `u` lies in the
/// column span of `f` over the integers. Errors otherwise.
pub fn integer_factor(f: &IntMatrix, u: &IntMatrix) -> Result<IntMatrix> {
    let sol = f
        .to_rational()
        .solve(&u.to_rational())?
        .ok_or_else(|| Error::OutsideSpan("columns do not lie in the factor span".into()))?;
    if f.to_rational().rank() < f.cols() {
        return Err(Error::Singular("factor columns are dependent".into()));
    }
    let mut out = IntMatrix::zeros(sol.rows(), sol.cols());
    for i in 0..sol.rows() {
        for j in 0..sol.cols() {
            let v = sol.get(i, j);
            if !v.is_integer() {
                return Err(Error::OutsideSpan(format!(
                    "entry ({i},{j}) of the factor is {v}, not an integer"
                )));
            }
            out.set(i, j, v.to_integer());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_snf_contract(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        // left * m * right == s
        let prod = snf.left.matmul(m).unwrap().matmul(&snf.right).unwrap();
        assert_eq!(prod, snf.s, "L*M*R != S for {m:?}");
        // unimodular transforms
        assert_eq!(snf.left.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(snf.right.determinant().unwrap().abs(), BigInt::one());
        // diagonal, nonnegative, divisibility chain
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s.get(i, j).is_zero(), "off-diagonal in SNF");
                }
            }
        }
        let diag = snf.elementary_divisors();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {diag:?}");
        }
    }

    #[test]
    fn snf_hand_values() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.elementary_divisors(), vec![BigInt::one(), BigInt::from(6)]);
        assert_snf_contract(&m);

        // Boundary matrix of the projective-plane cell structure: divisors (1, 2).
        let rp2 = IntMatrix::from_rows(&[vec![-1, -1], vec![-1, -1], vec![1, -1]]);
        let snf = smith_normal_form(&rp2);
        assert_eq!(snf.elementary_divisors(), vec![BigInt::one(), BigInt::from(2)]);
        assert_eq!(saturation_index(&rp2), BigInt::from(2));
        assert_snf_contract(&rp2);
    }

    #[test]
    fn snf_contract_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let rows = rng.gen_range(0..5);
            let cols = rng.gen_range(0..5);
            let m =
                IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-6i64..=6)));
            assert_snf_contract(&m);
        }
    }

    #[test]
    fn kernel_basis_is_saturated_and_canonical() {
        // Incidence matrix of a triangle: kernel is spanned by (1, -1, 1).
        let tri = IntMatrix::from_rows(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        let k = kernel_lattice_basis(&tri);
        assert_eq!(k.rows(), 3);
        assert_eq!(k.cols(), 1);
        assert_eq!(
            (k.get(0, 0).clone(), k.get(1, 0).clone(), k.get(2, 0).clone()),
            (BigInt::from(1), BigInt::from(-1), BigInt::from(1))
        );

        // Row vector (2 4): saturated kernel is generated by (2, -1), first entry positive.
        let m = IntMatrix::from_rows(&[vec![2, 4]]);
        let k = kernel_lattice_basis(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!((k.get(0, 0).clone(), k.get(1, 0).clone()), (BigInt::from(2), BigInt::from(-1)));

        // Full-rank matrix: empty kernel.
        let full = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![3, 5]]);
        assert_eq!(kernel_lattice_basis(&full).cols(), 0);
    }

    #[test]
    fn kernel_basis_annihilates_and_saturates_under_random_input() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..6);
            let m =
                IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
            let k = kernel_lattice_basis(&m);
            assert_eq!(k.cols(), cols - m.to_rational().rank());
            if k.cols() > 0 {
                assert!(m.matmul(&k).unwrap().is_zero());
                // Saturated bases have all elementary divisors equal to 1.
                assert_eq!(saturation_index(&k), BigInt::one());
                // First nonzero entry of each column is positive.
                for j in 0..k.cols() {
                    let first = (0..k.rows()).find(|&i| !k.get(i, j).is_zero()).unwrap();
                    assert!(k.get(first, j).is_positive());
                }
            }
        }
    }

    #[test]
    fn column_lattice_basis_is_idempotent_and_spans() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..40 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(0..6);
            let m =
                IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-4i64..=4)));
            let b = column_lattice_basis(&m);
            assert_eq!(b.to_rational().rank(), b.cols(), "basis must be independent");
            assert_eq!(b.cols(), m.to_rational().rank());
            // Each original column is an integer combination of the basis.
            if b.cols() > 0 {
                assert!(integer_factor(&b, &m).is_ok());
            } else {
                assert!(m.is_zero());
            }
            // Canonical form is a fixed point.
            assert_eq!(column_lattice_basis(&b), b);
        }
    }

    #[test]
    fn integer_factor_recovers_exact_factors() {
        let f = IntMatrix::from_rows(&[vec![1, 1], vec![1, -1], vec![0, 2]]);
        let v = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, -1]]);
        let u = f.matmul(&v).unwrap();
        assert_eq!(integer_factor(&f, &u).unwrap(), v);

        // A column outside the integer span must be rejected.
        let odd = IntMatrix::from_rows(&[vec![1], vec![0], vec![1]]);
        assert!(integer_factor(&f, &odd).is_err());
    }
}
