//! Hypermatrices, hyperdeterminants, and k-fold symmetric products.
//!
//! The hyperdeterminant of an order-k cubic hypermatrix C of size n is
//!
//!   det(C) = (1/n!) * sum over permutation tuples (t_1..t_k) of
//!            sign(t_1)...sign(t_k) * prod_a C[t_1(a),...,t_k(a)],
//!
//! computed here with the first permutation loop fixed to the identity
//! (which absorbs the 1/n! factor). The cost is (n!)^(k-1) * n products,
//! so the operation is guarded by an explicit cost limit.

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::multipoly::MPoly;
use crate::{Error, Result};

use super::matrix::{IntMatrix, RatMatrix};

/// Cost ceiling for hyperdeterminant expansion: (n!)^(order-1) must stay below this.
const HYPERDET_COST_LIMIT: u128 = 20_000_000;

/// Dense hypermatrix with rational entries. Shapes may be rectangular in
/// intermediate products; hyperdeterminants require a cubic shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HyperMatrix {
    shape: Vec<usize>,
    data: Vec<BigRational>,
}

impl HyperMatrix {
    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        HyperMatrix { shape, data: vec![BigRational::zero(); len] }
    }

    pub fn cubic(order: usize, size: usize) -> Self {
        HyperMatrix::zeros(vec![size; order])
    }

    /// Order-`order` diagonal hypermatrix with `values` on the main diagonal.
    pub fn diagonal(order: usize, values: &[BigRational]) -> Self {
        let mut h = HyperMatrix::cubic(order, values.len());
        for (i, v) in values.iter().enumerate() {
            let idx = vec![i; order];
            h.set(&idx, v.clone());
        }
        h
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn is_cubic(&self) -> bool {
        self.shape.windows(2).all(|w| w[0] == w[1])
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.shape.len(), "index arity mismatch");
        let mut off = 0usize;
        for (d, &i) in idx.iter().enumerate() {
            assert!(i < self.shape[d], "index {i} out of range in direction {d}");
            off = off * self.shape[d] + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> &BigRational {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: BigRational) {
        let off = self.offset(idx);
        self.data[off] = v;
    }

    /// Entrywise sum; the shapes must agree.
    pub fn add(&self, rhs: &HyperMatrix) -> Result<HyperMatrix> {
        if self.shape != rhs.shape {
            return Err(Error::DimensionMismatch(format!(
                "hypermatrix shapes {:?} and {:?}",
                self.shape, rhs.shape
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        Ok(out)
    }
}

fn multi_indices(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    shape.iter().map(|&n| 0..n).multi_cartesian_product()
}

/// Multiplies `c` along direction `l` (0-based) by the matrix `p`:
/// the result entry at index (i_0,..,i_{k-1}) is
/// `sum_a c[..,a,..] * p[a][i_l]`, so direction `l` changes size from
/// `p.rows()` to `p.cols()`.
pub fn hyper_multiply(c: &HyperMatrix, direction: usize, p: &IntMatrix) -> Result<HyperMatrix> {
    hyper_multiply_rational(c, direction, &p.to_rational())
}

/// Rational-matrix version of `hyper_multiply`.
pub fn hyper_multiply_rational(
    c: &HyperMatrix,
    direction: usize,
    p: &RatMatrix,
) -> Result<HyperMatrix> {
    if direction >= c.order() {
        return Err(Error::IndexOutOfRange(format!(
            "direction {direction} of order {}",
            c.order()
        )));
    }
    if p.rows() != c.shape[direction] {
        return Err(Error::DimensionMismatch(format!(
            "direction {direction} has size {} but the matrix has {} rows",
            c.shape[direction],
            p.rows()
        )));
    }
    let mut shape = c.shape.clone();
    shape[direction] = p.cols();
    let mut out = HyperMatrix::zeros(shape);
    let out_shape = out.shape.clone();
    for idx in multi_indices(&out_shape) {
        let mut acc = BigRational::zero();
        let mut src = idx.clone();
        for a in 0..p.rows() {
            src[direction] = a;
            acc += c.get(&src) * p.get(a, idx[direction]);
        }
        out.set(&idx, acc);
    }
    Ok(out)
}

/// Permutations of `0..n` with their signs.
fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    (0..n)
        .permutations(n)
        .map(|p| {
            let mut inversions = 0usize;
            for i in 0..p.len() {
                for j in (i + 1)..p.len() {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            (p, sign)
        })
        .collect()
}

fn hyperdet_guard(order: usize, n: usize) -> Result<()> {
    if order % 2 != 0 {
        return Err(Error::OddOrder(order));
    }
    let mut cost: u128 = 1;
    let fact: u128 = (1..=n as u128).product();
    for _ in 1..order {
        cost = cost.saturating_mul(fact);
        if cost > HYPERDET_COST_LIMIT {
            return Err(Error::SizeGuard(format!(
                "hyperdeterminant of order {order}, size {n} needs about (n!)^(k-1) = {fact}^{} > {HYPERDET_COST_LIMIT} products",
                order - 1
            )));
        }
    }
    Ok(())
}

/// Hyperdeterminant of an even-order cubic hypermatrix, by the signed
/// permutation-tuple expansion with the first permutation fixed to the
/// identity. Order-2 input reproduces the ordinary determinant.
pub fn hyperdeterminant(c: &HyperMatrix) -> Result<BigRational> {
    if !c.is_cubic() {
        return Err(Error::DimensionMismatch(format!(
            "hyperdeterminant needs a cubic shape, got {:?}",
            c.shape
        )));
    }
    let order = c.order();
    let n = c.shape.first().copied().unwrap_or(0);
    hyperdet_guard(order, n)?;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let perms = signed_permutations(n);
    let mut acc = BigRational::zero();
    // Tuples (t_2..t_k); t_1 = identity absorbs the 1/n! normalization.
    for tuple in (0..order - 1).map(|_| perms.iter()).multi_cartesian_product() {
        let sign: i8 = tuple.iter().map(|(_, s)| s).product();
        let mut prod = BigRational::one();
        let mut idx = vec![0usize; order];
        for a in 0..n {
            idx[0] = a;
            for (d, (perm, _)) in tuple.iter().enumerate() {
                idx[d + 1] = perm[a];
            }
            prod *= c.get(&idx);
            if prod.is_zero() {
                break;
            }
        }
        if sign > 0 {
            acc += prod;
        } else {
            acc -= prod;
        }
    }
    Ok(acc)
}

/// Symbolic hyperdeterminant of an even-order cubic table of polynomials.
/// Same expansion and guard as `hyperdeterminant`.
pub fn hyperdeterminant_poly(entries: &HyperMatrixPoly) -> Result<MPoly> {
    let order = entries.shape.len();
    if !entries.shape.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::DimensionMismatch(format!(
            "hyperdeterminant needs a cubic shape, got {:?}",
            entries.shape
        )));
    }
    let n = entries.shape.first().copied().unwrap_or(0);
    hyperdet_guard(order, n)?;
    if n == 0 {
        return Ok(MPoly::one(entries.nvars));
    }
    let perms = signed_permutations(n);
    let mut acc = MPoly::zero(entries.nvars);
    for tuple in (0..order - 1).map(|_| perms.iter()).multi_cartesian_product() {
        let sign: i8 = tuple.iter().map(|(_, s)| s).product();
        let mut prod = MPoly::one(entries.nvars);
        let mut idx = vec![0usize; order];
        for a in 0..n {
            idx[0] = a;
            for (d, (perm, _)) in tuple.iter().enumerate() {
                idx[d + 1] = perm[a];
            }
            prod = prod.mul(entries.get(&idx))?;
            if prod.is_zero() {
                break;
            }
        }
        acc = if sign > 0 { acc.add(&prod)? } else { acc.sub(&prod)? };
    }
    Ok(acc)
}

/// Cubic hypermatrix with polynomial entries (used for symbolic wedge norms).
#[derive(Clone, Debug)]
pub struct HyperMatrixPoly {
    shape: Vec<usize>,
    nvars: usize,
    data: Vec<MPoly>,
}

impl HyperMatrixPoly {
    pub fn new(shape: Vec<usize>, nvars: usize) -> Self {
        let len = shape.iter().product();
        HyperMatrixPoly { shape, nvars, data: vec![MPoly::zero(nvars); len] }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        let mut off = 0usize;
        for (d, &i) in idx.iter().enumerate() {
            off = off * self.shape[d] + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> &MPoly {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: MPoly) {
        let off = self.offset(idx);
        self.data[off] = v;
    }
}

/// k-fold symmetric product of k vectors of common length n with symbolic
/// weights: `sum_i (prod_j a_j[i]) * y_i` as a polynomial in n variables.
pub fn k_product_symbolic(vectors: &[Vec<BigRational>]) -> Result<MPoly> {
    let n = common_length(vectors)?;
    let mut acc = MPoly::zero(n);
    for i in 0..n {
        let mut c = BigRational::one();
        for v in vectors {
            c *= &v[i];
        }
        acc = acc.add(&MPoly::monomial(n, unit_exp(n, i), c))?;
    }
    Ok(acc)
}

/// Numeric k-fold symmetric product; missing weights mean all-ones.
pub fn k_product_numeric(
    vectors: &[Vec<BigRational>],
    weights: Option<&[BigRational]>,
) -> Result<BigRational> {
    let n = common_length(vectors)?;
    if let Some(w) = weights {
        if w.len() != n {
            return Err(Error::VariableMismatch(n, w.len()));
        }
    }
    let mut acc = BigRational::zero();
    for i in 0..n {
        let mut c = BigRational::one();
        for v in vectors {
            c *= &v[i];
        }
        if let Some(w) = weights {
            c *= &w[i];
        }
        acc += c;
    }
    Ok(acc)
}

fn common_length(vectors: &[Vec<BigRational>]) -> Result<usize> {
    let n = vectors
        .first()
        .map(|v| v.len())
        .ok_or_else(|| Error::InvalidInput("k-product of zero vectors".into()))?;
    for v in vectors {
        if v.len() != n {
            return Err(Error::VariableMismatch(n, v.len()));
        }
    }
    Ok(n)
}

fn unit_exp(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0u32; n];
    e[i] = 1;
    e
}

/// Wedge extension of the k-fold product to k families (matrix columns),
/// with symbolic weights: zero unless all families share one size l, in
/// which case it is the hyperdeterminant of the l^k table of k-products.
pub fn wedge_inner_product_symbolic(families: &[RatMatrix]) -> Result<MPoly> {
    let k = families.len();
    if k == 0 {
        return Err(Error::InvalidInput("wedge product of zero families".into()));
    }
    let ambient = families[0].rows();
    for f in families {
        if f.rows() != ambient {
            return Err(Error::VariableMismatch(ambient, f.rows()));
        }
    }
    let l = families[0].cols();
    if families.iter().any(|f| f.cols() != l) {
        return Ok(MPoly::zero(ambient));
    }
    let mut table = HyperMatrixPoly::new(vec![l; k], ambient);
    for idx in multi_indices(&vec![l; k]) {
        let cols: Vec<Vec<BigRational>> =
            idx.iter().enumerate().map(|(j, &c)| families[j].column_vec(c)).collect();
        table.set(&idx, k_product_symbolic(&cols)?);
    }
    hyperdeterminant_poly(&table)
}

/// Numeric wedge extension; missing weights mean all-ones.
pub fn wedge_inner_product_numeric(
    families: &[RatMatrix],
    weights: Option<&[BigRational]>,
) -> Result<BigRational> {
    let k = families.len();
    if k == 0 {
        return Err(Error::InvalidInput("wedge product of zero families".into()));
    }
    let ambient = families[0].rows();
    for f in families {
        if f.rows() != ambient {
            return Err(Error::VariableMismatch(ambient, f.rows()));
        }
    }
    let l = families[0].cols();
    if families.iter().any(|f| f.cols() != l) {
        return Ok(BigRational::zero());
    }
    let mut table = HyperMatrix::cubic(k, l);
    for idx in multi_indices(&vec![l; k]) {
        let cols: Vec<Vec<BigRational>> =
            idx.iter().enumerate().map(|(j, &c)| families[j].column_vec(c)).collect();
        table.set(&idx, k_product_numeric(&cols, weights)?);
    }
    hyperdeterminant(&table)
}
