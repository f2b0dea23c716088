//! Kirchhoff and Symanzik polynomials of integer vector families.
//!
//! A family is the column list of an integer matrix U (p x n, rank r). With
//! `g` the covolume squared of the saturated column lattice, the order-k
//! Kirchhoff polynomial is
//!
//!   Kir_k(u; x) = sum over r-subsets I of (det Gram(U_I) / g)^(k/2) * x^I,
//!
//! and the Symanzik polynomial carries `x^(complement of I)` instead. Both
//! have integer coefficients. Every public entry point recomputes its result
//! along a second independent route and fails loudly on disagreement, so a
//! returned polynomial is a verified identity, not a single code path.
//!
//! Orders `k` are even throughout; `0^0 = 0` makes order 0 enumerate bases.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact_linalg::{
    for_each_basis_subset_with_det, gram_norm_pow, hyperdeterminant_poly, integer_factor,
    kernel_lattice_basis, row_lattice_basis, saturated_column_basis, saturation_index,
    column_lattice_basis, HyperMatrixPoly, IntMatrix, RatMatrix,
};
use crate::matroid::MatroidView;
use crate::multipoly::MPoly;
use crate::{Error, Result};

fn check_even(k: usize) -> Result<()> {
    if k % 2 != 0 { Err(Error::OddOrder(k)) } else { Ok(()) }
}

/// Integer vector family: the columns of a matrix, with its derived lattice
/// data (rank, canonical row-lattice basis, saturation index) cached.
#[derive(Clone, Debug)]
pub struct VectorFamily {
    matrix: IntMatrix,
    rank: usize,
    row_basis: IntMatrix,
    saturation: BigInt,
}

impl VectorFamily {
    pub fn new(matrix: IntMatrix) -> Self {
        let row_basis = row_lattice_basis(&matrix);
        let rank = row_basis.rows();
        let saturation = saturation_index(&matrix);
        VectorFamily { matrix, rank, row_basis, saturation }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        VectorFamily::new(IntMatrix::from_rows(rows))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Number of vectors (columns).
    pub fn len(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Canonical basis of the lattice generated by the rows, as matrix rows.
    pub fn row_basis(&self) -> &IntMatrix {
        &self.row_basis
    }

    /// Index of the column lattice inside its saturation.
    pub fn saturation_index(&self) -> &BigInt {
        &self.saturation
    }

    /// Canonical saturated basis of the integer kernel, as columns.
    pub fn kernel_basis(&self) -> IntMatrix {
        kernel_lattice_basis(&self.matrix)
    }

    /// Squared covolume of the saturated column lattice.
    fn saturated_gram(&self) -> BigInt {
        saturated_column_basis(&self.matrix)
            .gram()
            .determinant()
            .expect("gram matrices are square")
    }
}

/// Order-k Kirchhoff polynomial, computed from the canonical row-lattice
/// basis V: the coefficient of `x^I` is `|det(V_I)|^k`. Depends only on the
/// row lattice of the family.
pub fn kirchhoff(family: &VectorFamily, k: usize) -> Result<MPoly> {
    check_even(k)?;
    let n = family.len();
    let mut poly = MPoly::zero(n);
    for_each_basis_subset_with_det(family.row_basis(), |subset, det| {
        let mut exp = vec![0u32; n];
        for &j in subset {
            exp[j] = 1;
        }
        poly.add_term(exp, BigRational::from_integer(pow_with_zero_convention(&det, k)));
    });
    if !poly.has_integer_coefficients() {
        return Err(Error::IdentityFailure("Kirchhoff coefficients must be integers".into()));
    }
    Ok(poly)
}

/// `|a|^k` with the `0^0 = 0` convention.
fn pow_with_zero_convention(a: &BigInt, k: usize) -> BigInt {
    if k == 0 {
        if a.is_zero() { BigInt::zero() } else { BigInt::one() }
    } else {
        a.abs().pow(k as u32)
    }
}

/// `q^(k/2)` with the `0^0 = 0` convention, `k` even.
fn rational_norm_pow(q: &BigRational, k: usize) -> BigRational {
    if k == 0 {
        if q.is_zero() { BigRational::zero() } else { BigRational::one() }
    } else {
        let mut acc = BigRational::one();
        for _ in 0..k / 2 {
            acc *= q;
        }
        acc
    }
}

/// Order-k Symanzik polynomial. Computed from the defining Gram-quotient
/// sum and cross-checked against the reciprocal transform of the Kirchhoff
/// polynomial; disagreement is an internal error.
pub fn symanzik(family: &VectorFamily, k: usize) -> Result<MPoly> {
    check_even(k)?;
    let n = family.len();
    let r = family.rank();
    let g = BigRational::from_integer(family.saturated_gram());
    let mut direct = MPoly::zero(n);
    for subset in (0..n).combinations(r) {
        let gram = gram_norm_pow(&family.matrix, &subset, 2)?;
        let q = BigRational::from_integer(gram) / &g;
        let mut exp = vec![1u32; n];
        for &j in &subset {
            exp[j] = 0;
        }
        direct.add_term(exp, rational_norm_pow(&q, k));
    }
    let via_reciprocal = kirchhoff(family, k)?.reciprocal_transform()?;
    if direct != via_reciprocal {
        return Err(Error::IdentityFailure(
            "Symanzik polynomial: Gram-quotient route and reciprocal route disagree".into(),
        ));
    }
    if !direct.has_integer_coefficients() {
        return Err(Error::IdentityFailure("Symanzik coefficients must be integers".into()));
    }
    Ok(direct)
}

/// Witness of the duality between a family and its kernel family: with `v`
/// the family whose transpose columns span the integer kernel,
/// `Sym_k(u)/a^k` equals `Kir_k(v)/b^k` for the two saturation indices.
#[derive(Clone, Debug)]
pub struct DualityCertificate {
    /// The kernel family (columns live in Z^(n-r), one per original vector).
    pub kernel_family: IntMatrix,
    /// Saturation index of the primal family.
    pub primal_index: BigInt,
    /// Saturation index of the kernel family.
    pub dual_index: BigInt,
    pub order: usize,
    /// `Sym_k(u) / primal_index^k`.
    pub scaled_symanzik: MPoly,
    /// `Kir_k(v) / dual_index^k`.
    pub scaled_kirchhoff: MPoly,
}

/// Builds and verifies the duality certificate; equality of the two scaled
/// polynomials is asserted coefficientwise.
pub fn duality_certificate(family: &VectorFamily, k: usize) -> Result<DualityCertificate> {
    check_even(k)?;
    let kernel = family.kernel_basis();
    let dual = VectorFamily::new(kernel.transpose());
    let a = family.saturation_index().clone();
    let b = dual.saturation_index().clone();
    let lhs = scale_by_inverse_power(&symanzik(family, k)?, &a, k);
    let rhs = scale_by_inverse_power(&kirchhoff(&dual, k)?, &b, k);
    if lhs != rhs {
        return Err(Error::IdentityFailure(format!(
            "duality failed at order {k}: {} != {}",
            lhs.to_canonical_string(),
            rhs.to_canonical_string()
        )));
    }
    Ok(DualityCertificate {
        kernel_family: dual.matrix().clone(),
        primal_index: a,
        dual_index: b,
        order: k,
        scaled_symanzik: lhs,
        scaled_kirchhoff: rhs,
    })
}

fn scale_by_inverse_power(p: &MPoly, a: &BigInt, k: usize) -> MPoly {
    let factor = BigRational::new(BigInt::one(), a.pow(k as u32));
    p.scalar_mul(&factor)
}

/// Symanzik polynomial along the kernel route: `(a/b)^k` times the order-k
/// weighted norm of the kernel basis. Order 2 expands by Cauchy-Binet over
/// row subsets of the kernel basis; higher orders take the symbolic
/// hyperdeterminant path (size-guarded).
pub fn symanzik_determinantal(family: &VectorFamily, k: usize) -> Result<MPoly> {
    check_even(k)?;
    if k == 0 {
        // The norm route degenerates at order 0; the definition is the sum
        // over complements of independent r-subsets.
        return symanzik(family, k);
    }
    let n = family.len();
    let kernel = family.kernel_basis(); // n x s
    let s = kernel.cols();
    let a = family.saturation_index().clone();
    let b = saturation_index(&kernel.transpose());
    let factor = signed_power(&BigRational::new(a, b), k);
    let norm = if k == 2 {
        // Cauchy-Binet: det(K^T X K) = sum over s-subsets J of det(K_J)^2 x^J.
        let mut poly = MPoly::zero(n);
        for_each_basis_subset_with_det(&kernel.transpose(), |subset, det| {
            let mut exp = vec![0u32; n];
            for &j in subset {
                exp[j] = 1;
            }
            poly.add_term(exp, BigRational::from_integer(&det * &det));
        });
        poly
    } else {
        // Entries of the order-k table: c[j_1..j_k] = sum_i x_i prod_t K[i][j_t].
        let mut table = HyperMatrixPoly::new(vec![s; k], n);
        for idx in (0..k).map(|_| 0..s).multi_cartesian_product() {
            let mut entry = MPoly::zero(n);
            for i in 0..n {
                let mut c = BigRational::one();
                for &j in &idx {
                    c *= BigRational::from_integer(kernel.get(i, j).clone());
                }
                let mut exp = vec![0u32; n];
                exp[i] = 1;
                entry.add_term(exp, c);
            }
            table.set(&idx, entry);
        }
        hyperdeterminant_poly(&table)?
    };
    Ok(norm.scalar_mul(&factor))
}

/// A vector family together with rational parameter vectors from its span.
#[derive(Clone, Debug)]
pub struct ParamFamily {
    family: VectorFamily,
    params: RatMatrix,
    lifts: RatMatrix,
}

impl ParamFamily {
    /// `params` holds one parameter vector per column; each must lie in the
    /// span of the family, and there can be at most `rank` of them.
    pub fn new(family: VectorFamily, params: RatMatrix) -> Result<Self> {
        if params.rows() != family.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "parameters live in dimension {}, family in {}",
                params.rows(),
                family.ambient_dim()
            )));
        }
        if params.cols() > family.rank() {
            return Err(Error::TooManyParameters {
                given: params.cols(),
                rank: family.rank(),
            });
        }
        let lifts = family
            .matrix()
            .to_rational()
            .solve(&params)?
            .ok_or_else(|| Error::OutsideSpan("parameter outside the family span".into()))?;
        Ok(ParamFamily { family, params, lifts })
    }

    pub fn family(&self) -> &VectorFamily {
        &self.family
    }

    pub fn params(&self) -> &RatMatrix {
        &self.params
    }

    /// Preimages of the parameters under the family matrix (one column each).
    pub fn lifts(&self) -> &RatMatrix {
        &self.lifts
    }

    pub fn num_params(&self) -> usize {
        self.params.cols()
    }
}

/// Order-k Symanzik polynomial with parameters, from the defining sum: the
/// coefficient of `x^(complement of I)` over (r-l)-subsets I is the k-th
/// power of the wedge norm of `(u_I, w)` divided by the saturated covolume.
pub fn symanzik_with_params(pf: &ParamFamily, k: usize) -> Result<MPoly> {
    check_even(k)?;
    let family = pf.family();
    let n = family.len();
    let r = family.rank();
    let l = pf.num_params();
    let g = BigRational::from_integer(family.saturated_gram());
    let u = family.matrix().to_rational();
    let mut poly = MPoly::zero(n);
    for subset in (0..n).combinations(r - l) {
        let block = u.select_columns(&subset)?.hstack(pf.params())?;
        let gram = block.transpose().matmul(&block)?.determinant()?;
        let mut exp = vec![1u32; n];
        for &j in &subset {
            exp[j] = 0;
        }
        poly.add_term(exp, rational_norm_pow(&(gram / &g), k));
    }
    Ok(poly)
}

/// Parameterized Symanzik polynomial along the orientation route: signs come
/// from determinants in a fixed integer frame of the column lattice, and the
/// parameter contribution enters through minors of the lifted parameters.
/// Even order makes the result independent of the frame.
pub fn symanzik_orientation(pf: &ParamFamily, k: usize) -> Result<MPoly> {
    let frame = column_lattice_basis(pf.family().matrix());
    symanzik_orientation_with_frame(pf, k, &frame)
}

/// Orientation route with an explicit frame: `frame` must be an integer
/// basis of the column lattice of the family (any such basis gives the same
/// polynomial at even order; this entry point exists to test exactly that).
pub fn symanzik_orientation_with_frame(
    pf: &ParamFamily,
    k: usize,
    frame: &IntMatrix,
) -> Result<MPoly> {
    check_even(k)?;
    let family = pf.family();
    let n = family.len();
    let r = family.rank();
    let l = pf.num_params();
    // Coordinates of the family in the frame: U = frame * coords.
    let coords = integer_factor(frame, family.matrix())?;
    let coords_rat = coords.to_rational();
    let lifts = pf.lifts();
    let a = BigRational::from_integer(family.saturation_index().clone());
    let a_pow = rational_norm_pow(&(&a * &a), k);
    let mut poly = MPoly::zero(n);
    for subset in (0..n).combinations(r - l) {
        let complement: Vec<usize> = (0..n).filter(|j| !subset.contains(j)).collect();
        let mut inner = BigRational::zero();
        for j_set in complement.iter().copied().combinations(l) {
            // det of frame coordinates at columns I then J (concatenated order).
            let mut cols = subset.clone();
            cols.extend(&j_set);
            let det_v = coords_rat.select_columns(&cols)?.determinant()?;
            if det_v.is_zero() {
                continue;
            }
            // Minor of the lifted parameters at rows J.
            let minor = lifts.select_rows(&j_set)?.determinant()?;
            inner += det_v * minor;
        }
        let mut exp = vec![1u32; n];
        for &j in &subset {
            exp[j] = 0;
        }
        poly.add_term(exp, signed_power(&inner, k));
    }
    Ok(poly.scalar_mul(&a_pow))
}

/// `q^k` with `0^0 = 0`, k even (so the sign of q is immaterial).
fn signed_power(q: &BigRational, k: usize) -> BigRational {
    if k == 0 {
        if q.is_zero() { BigRational::zero() } else { BigRational::one() }
    } else {
        let mut acc = BigRational::one();
        for _ in 0..k {
            acc *= q;
        }
        acc
    }
}

/// Symanzik rational fraction `Sym_k(u; w; y) / Sym_k(u; y)` at positive
/// rational weights, evaluated exactly without building the polynomials.
pub fn rat_sym(pf: &ParamFamily, k: usize, weights: &[BigRational]) -> Result<BigRational> {
    check_even(k)?;
    let family = pf.family();
    let n = family.len();
    if weights.len() != n {
        return Err(Error::VariableMismatch(n, weights.len()));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::NonpositiveWeight("rational fraction weights".into()));
    }
    let r = family.rank();
    let l = pf.num_params();
    let u = family.matrix().to_rational();
    let weight_of_complement = |subset: &[usize]| -> BigRational {
        let mut acc = BigRational::one();
        for j in 0..n {
            if !subset.contains(&j) {
                acc *= &weights[j];
            }
        }
        acc
    };
    let mut numer = BigRational::zero();
    for subset in (0..n).combinations(r - l) {
        let block = u.select_columns(&subset)?.hstack(pf.params())?;
        let gram = block.transpose().matmul(&block)?.determinant()?;
        numer += rational_norm_pow(&gram, k) * weight_of_complement(&subset);
    }
    let mut denom = BigRational::zero();
    for subset in (0..n).combinations(r) {
        let block = u.select_columns(&subset)?;
        let gram = block.transpose().matmul(&block)?.determinant()?;
        denom += rational_norm_pow(&gram, k) * weight_of_complement(&subset);
    }
    if denom.is_zero() {
        return Err(Error::Singular("Symanzik denominator vanishes".into()));
    }
    Ok(numer / denom)
}

/// Order-0 Kirchhoff polynomial of a matroid: the basis generating sum.
pub fn matroid_kirchhoff0(m: &MatroidView) -> MPoly {
    let n = m.ground_size();
    let mut poly = MPoly::zero(n);
    for basis in m.bases() {
        let mut exp = vec![0u32; n];
        for &e in &basis {
            exp[e] = 1;
        }
        poly.add_term(exp, BigRational::one());
    }
    poly
}

/// Order-0 Symanzik polynomial of a matroid: basis sum of the dual matroid.
pub fn matroid_symanzik0(m: &MatroidView) -> MPoly {
    let n = m.ground_size();
    let mut poly = MPoly::zero(n);
    for basis in m.bases() {
        let mut exp = vec![1u32; n];
        for &e in &basis {
            exp[e] = 0;
        }
        poly.add_term(exp, BigRational::one());
    }
    poly
}

/// Height pairing of two span vectors at positive weights: the weighted
/// inner product of their kernel-orthogonal preimages. When the family
/// matrix has full row rank the closed form `b^T (U Y^-1 U^T)^-1 b'` is
/// computed as well and must agree.
pub fn height_pairing(
    family: &VectorFamily,
    b1: &[BigRational],
    b2: &[BigRational],
    weights: &[BigRational],
) -> Result<BigRational> {
    let p = family.ambient_dim();
    let n = family.len();
    if b1.len() != p || b2.len() != p {
        return Err(Error::DimensionMismatch(format!(
            "pairing vectors must have length {p}"
        )));
    }
    if weights.len() != n {
        return Err(Error::VariableMismatch(n, weights.len()));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::NonpositiveWeight("height pairing weights".into()));
    }
    let h1 = kernel_orthogonal_preimage(family, b1, weights)?;
    let h2 = kernel_orthogonal_preimage(family, b2, weights)?;
    let mut pairing = BigRational::zero();
    for i in 0..n {
        pairing += &h1[i] * &weights[i] * &h2[i];
    }
    if family.rank() == p {
        let shortcut = full_rank_height_pairing(family, b1, b2, weights)?;
        if shortcut != pairing {
            return Err(Error::IdentityFailure(
                "height pairing: preimage route and full-rank inverse route disagree".into(),
            ));
        }
    }
    Ok(pairing)
}

/// The unique preimage of `b` under the family matrix that is orthogonal to
/// the kernel in the weighted inner product.
fn kernel_orthogonal_preimage(
    family: &VectorFamily,
    b: &[BigRational],
    weights: &[BigRational],
) -> Result<Vec<BigRational>> {
    let u = family.matrix().to_rational();
    let mut pre = u
        .solve_vec(b)?
        .ok_or_else(|| Error::OutsideSpan("pairing vector is not in the span".into()))?;
    let kernel = family.kernel_basis().to_rational();
    let s = kernel.cols();
    if s > 0 {
        // Solve (K^T Y K) lambda = K^T Y pre and subtract K lambda.
        let n = family.len();
        let ky = RatMatrix::from_fn(s, n, |i, j| kernel.get(j, i) * &weights[j]);
        let gram = ky.matmul(&kernel)?;
        let rhs = ky.matmul(&RatMatrix::column(&pre))?;
        let lambda = gram
            .solve(&rhs)?
            .ok_or_else(|| Error::Singular("weighted kernel Gram matrix".into()))?;
        let correction = kernel.matmul(&lambda)?;
        for i in 0..n {
            pre[i] -= correction.get(i, 0);
        }
    }
    Ok(pre)
}

fn full_rank_height_pairing(
    family: &VectorFamily,
    b1: &[BigRational],
    b2: &[BigRational],
    weights: &[BigRational],
) -> Result<BigRational> {
    let p = family.ambient_dim();
    let n = family.len();
    let u = family.matrix().to_rational();
    // M = U Y^-1 U^T.
    let uy = RatMatrix::from_fn(p, n, |i, j| u.get(i, j) / &weights[j]);
    let m = uy.matmul(&u.transpose())?;
    let f = m
        .solve_vec(b1)?
        .ok_or_else(|| Error::Singular("U Y^-1 U^T is singular".into()))?;
    let mut acc = BigRational::zero();
    for i in 0..p {
        acc += &b2[i] * &f[i];
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ones(n: usize) -> Vec<BigRational> {
        vec![rat(1); n]
    }

    #[test]
    fn triangle_kirchhoff_and_symanzik_match_spanning_tree_counts() {
        let fam = VectorFamily::new(fixtures::triangle_graph().top_boundary());
        let kir = kirchhoff(&fam, 2).unwrap();
        assert_eq!(kir.to_canonical_string(), "x1*x2 + x1*x3 + x2*x3");
        let sym = symanzik(&fam, 2).unwrap();
        assert_eq!(sym.to_canonical_string(), "x1 + x2 + x3");
        // Order 0 coincides at full generality for graphs.
        assert_eq!(kirchhoff(&fam, 0).unwrap(), kir);
    }

    #[test]
    fn projective_plane_kirchhoff_has_torsion_squared_coefficient() {
        let fam = VectorFamily::new(fixtures::projective_plane_boundary());
        let kir = kirchhoff(&fam, 2).unwrap();
        assert_eq!(kir.to_canonical_string(), "4*x1*x2");
        let sym = symanzik(&fam, 2).unwrap();
        assert_eq!(sym.to_canonical_string(), "4");
        let cert = duality_certificate(&fam, 2).unwrap();
        assert_eq!(cert.primal_index, BigInt::from(2));
        assert_eq!(cert.dual_index, BigInt::one());
        assert_eq!(cert.scaled_symanzik.to_canonical_string(), "1");
    }

    #[test]
    fn rank_zero_family_has_unit_polynomials() {
        let fam = VectorFamily::new(IntMatrix::zeros(3, 2));
        assert_eq!(kirchhoff(&fam, 4).unwrap().to_canonical_string(), "1");
        // Complement of the empty subset is everything.
        assert_eq!(symanzik(&fam, 2).unwrap().to_canonical_string(), "x1*x2");
    }

    #[test]
    fn kirchhoff_depends_only_on_the_row_lattice() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..25 {
            let p = rng.gen_range(1..5);
            let n = rng.gen_range(1..6);
            let m = IntMatrix::from_fn(p, n, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
            let fam = VectorFamily::new(m.clone());
            // Random unimodular left factor: a product of elementary row ops.
            let mut g = IntMatrix::identity(p);
            for _ in 0..2 * p {
                let i = rng.gen_range(0..p);
                let j = rng.gen_range(0..p);
                if i == j {
                    continue;
                }
                let c = BigInt::from(rng.gen_range(-2i64..=2));
                for col in 0..p {
                    let v = g.get(i, col) + &c * g.get(j, col);
                    g.set(i, col, v);
                }
            }
            let transformed = VectorFamily::new(g.matmul(&m).unwrap());
            for k in [0usize, 2] {
                assert_eq!(
                    kirchhoff(&fam, k).unwrap(),
                    kirchhoff(&transformed, k).unwrap(),
                    "row-lattice invariance failed at k={k}"
                );
            }
        }
    }

    #[test]
    fn kirchhoff_coefficients_match_gram_quotient_definition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..25 {
            let p = rng.gen_range(1..5);
            let n = rng.gen_range(1..6);
            let m = IntMatrix::from_fn(p, n, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
            let fam = VectorFamily::new(m.clone());
            let g = BigRational::from_integer(fam.saturated_gram());
            for k in [0usize, 2, 4] {
                let kir = kirchhoff(&fam, k).unwrap();
                for subset in (0..n).combinations(fam.rank()) {
                    let mut exp = vec![0u32; n];
                    for &j in &subset {
                        exp[j] = 1;
                    }
                    let gram = gram_norm_pow(&m, &subset, 2).unwrap();
                    let expected =
                        rational_norm_pow(&(BigRational::from_integer(gram) / &g), k);
                    assert_eq!(kir.coeff(&exp), expected, "k={k} subset={subset:?}");
                }
            }
        }
    }

    #[test]
    fn duality_certificate_holds_for_fixture_families() {
        for k in [0usize, 2, 4] {
            for fam in [
                VectorFamily::new(fixtures::triangle_graph().top_boundary()),
                VectorFamily::new(fixtures::bipyramid().top_boundary()),
                VectorFamily::new(fixtures::projective_plane_boundary()),
            ] {
                duality_certificate(&fam, k).unwrap();
            }
        }
    }

    #[test]
    fn determinantal_route_agrees_with_definition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for _ in 0..40 {
            let p = rng.gen_range(1..5);
            let n = rng.gen_range(1..7);
            let m = IntMatrix::from_fn(p, n, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
            let fam = VectorFamily::new(m);
            assert_eq!(symanzik_determinantal(&fam, 2).unwrap(), symanzik(&fam, 2).unwrap());
        }
        // Higher order along the hyperdeterminant path, kernel kept small.
        for _ in 0..10 {
            let n = rng.gen_range(1..6);
            let p = rng.gen_range(3..5);
            let m = IntMatrix::from_fn(p, n, |_, _| BigInt::from(rng.gen_range(-2i64..=2)));
            let fam = VectorFamily::new(m);
            if fam.len() - fam.rank() <= 3 {
                assert_eq!(
                    symanzik_determinantal(&fam, 4).unwrap(),
                    symanzik(&fam, 4).unwrap()
                );
            }
        }
    }

    #[test]
    fn parameterized_symanzik_reduces_to_plain_at_zero_parameters() {
        let fam = VectorFamily::new(fixtures::triangle_graph().top_boundary());
        let pf = ParamFamily::new(fam.clone(), RatMatrix::zeros(3, 0)).unwrap();
        assert_eq!(symanzik_with_params(&pf, 2).unwrap(), symanzik(&fam, 2).unwrap());
        assert_eq!(symanzik_orientation(&pf, 2).unwrap(), symanzik(&fam, 2).unwrap());
    }

    #[test]
    fn parameterized_symanzik_counts_separating_forests_on_graphs() {
        // Parameter b = e_{v2} - e_{v3} on the bipartite fixture: the value
        // at all-ones counts 2-forests separating v2 from v3, equivalently
        // spanning trees of the graph with v2 and v3 identified: 12.
        let complex = fixtures::complete_bipartite_k23();
        let fam = VectorFamily::new(complex.top_boundary());
        let mut b = RatMatrix::zeros(5, 1);
        b.set(1, 0, rat(1));
        b.set(2, 0, rat(-1));
        let pf = ParamFamily::new(fam, b).unwrap();
        let sym = symanzik_with_params(&pf, 2).unwrap();
        assert_eq!(sym.evaluate(&ones(6)).unwrap(), rat(12));
        // The orientation route gives the identical polynomial.
        assert_eq!(symanzik_orientation(&pf, 2).unwrap(), sym);
    }

    #[test]
    fn orientation_route_is_frame_independent() {
        let complex = fixtures::complete_bipartite_k23();
        let fam = VectorFamily::new(complex.top_boundary());
        let mut params = RatMatrix::zeros(5, 2);
        params.set(1, 0, rat(1));
        params.set(2, 0, rat(-1));
        params.set(1, 1, rat(1));
        params.set(3, 1, rat(-1));
        let pf = ParamFamily::new(fam.clone(), params).unwrap();
        let canonical = symanzik_orientation(&pf, 2).unwrap();
        // Flip the sign of the first frame vector: an orientation reversal.
        let mut frame = column_lattice_basis(fam.matrix());
        for i in 0..frame.rows() {
            let v = -frame.get(i, 0).clone();
            frame.set(i, 0, v);
        }
        let flipped = symanzik_orientation_with_frame(&pf, 2, &frame).unwrap();
        assert_eq!(canonical, flipped);
        assert_eq!(canonical, symanzik_with_params(&pf, 2).unwrap());
    }

    #[test]
    fn parameters_outside_the_span_are_rejected() {
        let fam = VectorFamily::new(fixtures::triangle_graph().top_boundary());
        // The all-ones vector has nonzero coordinate sum: not a boundary.
        let mut w = RatMatrix::zeros(3, 1);
        for i in 0..3 {
            w.set(i, 0, rat(1));
        }
        assert!(matches!(ParamFamily::new(fam, w), Err(Error::OutsideSpan(_))));
    }

    #[test]
    fn too_many_parameters_are_rejected() {
        let fam = VectorFamily::new(fixtures::triangle_graph().top_boundary());
        let mut w = RatMatrix::zeros(3, 3);
        for j in 0..3 {
            w.set(0, j, rat(1));
            w.set(1, j, rat(-1));
        }
        assert!(matches!(ParamFamily::new(fam, w), Err(Error::TooManyParameters { .. })));
    }

    #[test]
    fn matroid_order_zero_polynomials_match_the_linear_family() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        for _ in 0..20 {
            let p = rng.gen_range(1..4);
            let n = rng.gen_range(1..6);
            let m = IntMatrix::from_fn(p, n, |_, _| BigInt::from(rng.gen_range(-2i64..=2)));
            let fam = VectorFamily::new(m.clone());
            let matroid = MatroidView::linear(&m).unwrap();
            assert_eq!(matroid_kirchhoff0(&matroid), kirchhoff(&fam, 0).unwrap());
            assert_eq!(matroid_symanzik0(&matroid), symanzik(&fam, 0).unwrap());
            // The kernel family realizes the dual matroid: its order-0
            // Kirchhoff polynomial is the primal order-0 Symanzik polynomial.
            let dual = MatroidView::linear(&fam.kernel_basis().transpose()).unwrap();
            assert_eq!(matroid_kirchhoff0(&dual), matroid_symanzik0(&matroid));
        }
    }

    #[test]
    fn triangle_height_pairing_is_the_effective_resistance() {
        let fam = VectorFamily::new(fixtures::triangle_graph().top_boundary());
        let b: Vec<BigRational> = vec![rat(1), rat(-1), rat(0)];
        let v = height_pairing(&fam, &b, &b, &ones(3)).unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(2), BigInt::from(3)));
        // Prop-style identity: the self pairing is the order-2 rational fraction.
        let pf = ParamFamily::new(fam.clone(), RatMatrix::column(&b)).unwrap();
        assert_eq!(rat_sym(&pf, 2, &ones(3)).unwrap(), v);
    }

    #[test]
    fn height_pairing_is_bilinear_symmetric_and_positive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(59);
        for _ in 0..20 {
            let complex = fixtures::random_connected_graph(&mut rng, 4, 6);
            let fam = VectorFamily::new(complex.top_boundary());
            let p = fam.ambient_dim();
            let weights: Vec<BigRational> =
                (0..fam.len()).map(|_| rat(rng.gen_range(1i64..=5))).collect();
            // Random boundaries: U times random integer chains.
            let chain1: Vec<BigRational> =
                (0..fam.len()).map(|_| rat(rng.gen_range(-2i64..=2))).collect();
            let chain2: Vec<BigRational> =
                (0..fam.len()).map(|_| rat(rng.gen_range(-2i64..=2))).collect();
            let u = fam.matrix().to_rational();
            let b1 = u.matmul(&RatMatrix::column(&chain1)).unwrap().column_vec(0);
            let b2 = u.matmul(&RatMatrix::column(&chain2)).unwrap().column_vec(0);
            let p11 = height_pairing(&fam, &b1, &b1, &weights).unwrap();
            let p12 = height_pairing(&fam, &b1, &b2, &weights).unwrap();
            let p21 = height_pairing(&fam, &b2, &b1, &weights).unwrap();
            assert_eq!(p12, p21);
            assert!(p11 >= BigRational::zero());
            // Bilinearity in the first slot.
            let sum: Vec<BigRational> =
                (0..p).map(|i| &b1[i] + &b2[i]).collect();
            let ps2 = height_pairing(&fam, &sum, &b2, &weights).unwrap();
            let p22 = height_pairing(&fam, &b2, &b2, &weights).unwrap();
            assert_eq!(ps2, p12 + p22);
        }
    }

    #[test]
    fn height_pairing_matches_rational_fraction_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for _ in 0..15 {
            let complex = fixtures::random_connected_graph(&mut rng, 4, 6);
            let fam = VectorFamily::new(complex.top_boundary());
            let weights: Vec<BigRational> =
                (0..fam.len()).map(|_| rat(rng.gen_range(1i64..=4))).collect();
            let chain: Vec<BigRational> =
                (0..fam.len()).map(|_| rat(rng.gen_range(-2i64..=2))).collect();
            let u = fam.matrix().to_rational();
            let b = u.matmul(&RatMatrix::column(&chain)).unwrap().column_vec(0);
            if b.iter().all(|v| v.is_zero()) {
                continue;
            }
            let self_pairing = height_pairing(&fam, &b, &b, &weights).unwrap();
            let pf = ParamFamily::new(fam.clone(), RatMatrix::column(&b)).unwrap();
            assert_eq!(rat_sym(&pf, 2, &weights).unwrap(), self_pairing);
        }
    }

    #[test]
    fn odd_orders_are_rejected() {
        let fam = VectorFamily::new(fixtures::triangle_graph().top_boundary());
        assert!(matches!(kirchhoff(&fam, 3), Err(Error::OddOrder(3))));
        assert!(matches!(symanzik(&fam, 1), Err(Error::OddOrder(1))));
    }
}
