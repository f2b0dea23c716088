//! Stability experiments for ratios of Symanzik-type forms.
//!
//! The object under study is the weight-dependent ratio
//!
//!   R(y) = |w|_y^k / |v|_y^k,
//!
//! where the columns of `v` span the kernel of a family matrix, `w` extends
//! `v` by parameter columns, and `|.|_y^k` is the order-k wedge form with
//! diagonal weight hypermatrix `diag^k(y)`. Perturbing the weight form by a
//! bounded hypermatrix `Z` changes the ratio by an amount that stays bounded
//! once every weight is large, and with `l` parameter columns the change
//! grows no faster than `max_i y_i^(l-1)`. The experiments here measure
//! `sup |R_y - R_{y+z}|` over sampled weight vectors at growing scales and
//! report whether the measured suprema plateau.
//!
//! Every quantity is computed as an exact rational; floating point appears
//! only in the human-readable report table.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_linalg::{
    hyper_multiply_rational, hyperdeterminant, hyperdeterminant_poly, k_product_symbolic,
    kernel_lattice_basis, HyperMatrix, HyperMatrixPoly, IntMatrix, RatMatrix,
};
use crate::multipoly::MPoly;
use crate::{Error, Result};

/// Mixing constant for deriving per-grid-point random streams from one seed.
const STREAM_MIX: u64 = 0x9e37_79b9_7f4a_7c15;

/// Bounded perturbation supplier: produces the order-k hypermatrix added to
/// the diagonal weight form at a given grid point. Seeded variants draw
/// entries from `[-1, 1]` at resolution `1/denominator`, deterministically
/// in the seed and the grid index.
#[derive(Clone, Debug)]
pub enum Perturbation {
    /// No perturbation; the ratio difference vanishes identically.
    Zero,
    /// The same fixed hypermatrix at every grid point.
    Constant(HyperMatrix),
    /// Random diagonal entries in `[-1, 1]`, redrawn per grid point.
    SeededDiagonal { seed: u64, denominator: i64 },
    /// Random entries in `[-1, 1]` at every position, redrawn per grid point.
    SeededFull { seed: u64, denominator: i64 },
}

impl Perturbation {
    /// The perturbation hypermatrix at grid point `t`, of the given order
    /// and size. Constant suppliers must match the requested shape.
    pub fn at(&self, order: usize, size: usize, t: usize) -> Result<HyperMatrix> {
        match self {
            Perturbation::Zero => Ok(HyperMatrix::cubic(order, size)),
            Perturbation::Constant(z) => {
                if z.shape() != vec![size; order].as_slice() {
                    return Err(Error::DimensionMismatch(format!(
                        "constant perturbation has shape {:?}, wanted order {order} size {size}",
                        z.shape()
                    )));
                }
                Ok(z.clone())
            }
            Perturbation::SeededDiagonal { seed, denominator } => {
                let den = checked_denominator(*denominator)?;
                let mut rng = stream_rng(*seed, t);
                let diag: Vec<BigRational> =
                    (0..size).map(|_| bounded_entry(&mut rng, den)).collect();
                Ok(HyperMatrix::diagonal(order, &diag))
            }
            Perturbation::SeededFull { seed, denominator } => {
                let den = checked_denominator(*denominator)?;
                let mut rng = stream_rng(*seed, t);
                let mut z = HyperMatrix::cubic(order, size);
                for idx in cubic_indices(order, size) {
                    z.set(&idx, bounded_entry(&mut rng, den));
                }
                Ok(z)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Perturbation::Zero)
    }
}

fn checked_denominator(denominator: i64) -> Result<i64> {
    if denominator < 1 {
        return Err(Error::InvalidInput(format!(
            "perturbation denominator must be at least 1, got {denominator}"
        )));
    }
    Ok(denominator)
}

fn stream_rng(seed: u64, t: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(STREAM_MIX))
}

/// One rational draw from `[-1, 1]` with the given resolution.
fn bounded_entry(rng: &mut ChaCha8Rng, denominator: i64) -> BigRational {
    let numerator = rng.gen_range(-denominator..=denominator);
    BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
}

fn cubic_indices(order: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..order).map(move |_| 0..size).multi_cartesian_product()
}

/// A family matrix together with a kernel basis, parameter columns, a
/// perturbation supplier, and a declared grid of positive weight vectors.
///
/// The kernel columns must be a basis of the kernel of the family matrix,
/// and the numerator family appends the parameter columns to it. On
/// construction, every declared grid point is checked to keep both the
/// plain and the perturbed denominator forms positive.
#[derive(Clone, Debug)]
pub struct StabilityInstance {
    family: IntMatrix,
    kernel: RatMatrix,
    parameters: RatMatrix,
    order: usize,
    perturbation: Perturbation,
    grid: Vec<Vec<BigRational>>,
}

impl StabilityInstance {
    /// Builds an instance with the saturated integer kernel basis of the
    /// family matrix.
    pub fn new(
        family: IntMatrix,
        parameters: RatMatrix,
        order: usize,
        perturbation: Perturbation,
        grid: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        let kernel = kernel_lattice_basis(&family).to_rational();
        StabilityInstance::with_kernel(family, kernel, parameters, order, perturbation, grid)
    }

    /// Builds an instance with an explicit kernel basis (columns).
    pub fn with_kernel(
        family: IntMatrix,
        kernel: RatMatrix,
        parameters: RatMatrix,
        order: usize,
        perturbation: Perturbation,
        grid: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        if order == 0 || order % 2 != 0 {
            return Err(Error::OddOrder(order));
        }
        let n = family.cols();
        if kernel.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "kernel lives in dimension {}, family has {} columns",
                kernel.rows(),
                n
            )));
        }
        if parameters.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "parameters live in dimension {}, family has {} columns",
                parameters.rows(),
                n
            )));
        }
        let product = family.to_rational().matmul(&kernel)?;
        for i in 0..product.rows() {
            for j in 0..product.cols() {
                if !product.get(i, j).is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "kernel column {j} is not annihilated by the family matrix"
                    )));
                }
            }
        }
        if kernel.rank() != kernel.cols() {
            return Err(Error::InvalidInput(
                "kernel columns must be linearly independent".into(),
            ));
        }
        if kernel.cols() != n - family.rank() {
            return Err(Error::InvalidInput(format!(
                "kernel basis must have {} columns, got {}",
                n - family.rank(),
                kernel.cols()
            )));
        }
        let instance = StabilityInstance {
            family,
            kernel,
            parameters,
            order,
            perturbation,
            grid,
        };
        for t in 0..instance.grid.len() {
            instance.check_weights(&instance.grid[t].clone())?;
            // Positivity of both denominator forms at every declared point.
            instance.ratio_difference(t)?;
        }
        Ok(instance)
    }

    pub fn family(&self) -> &IntMatrix {
        &self.family
    }

    /// Kernel basis, one column per kernel vector.
    pub fn kernel(&self) -> &RatMatrix {
        &self.kernel
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn parameter_count(&self) -> usize {
        self.parameters.cols()
    }

    pub fn grid_len(&self) -> usize {
        self.grid.len()
    }

    /// Kernel columns followed by the parameter columns.
    pub fn numerator_family(&self) -> Result<RatMatrix> {
        self.kernel.hstack(&self.parameters)
    }

    fn check_weights(&self, y: &[BigRational]) -> Result<()> {
        let n = self.family.cols();
        if y.len() != n {
            return Err(Error::VariableMismatch(n, y.len()));
        }
        if let Some(i) = y.iter().position(|w| !w.is_positive()) {
            return Err(Error::NonpositiveWeight(format!(
                "weight {} must be positive, got {}",
                i + 1,
                y[i]
            )));
        }
        Ok(())
    }

    /// The plain ratio `R(y)`: numerator form over denominator form, both
    /// with the unperturbed diagonal weight hypermatrix.
    pub fn ratio_at(&self, y: &[BigRational]) -> Result<BigRational> {
        self.check_weights(y)?;
        let diag = HyperMatrix::diagonal(self.order, y);
        let numerator = family_form_value(&diag, &self.numerator_family()?)?;
        let denominator = family_form_value(&diag, &self.kernel)?;
        if !denominator.is_positive() {
            return Err(Error::NonpositiveWeight(format!(
                "kernel form is nonpositive ({denominator})"
            )));
        }
        Ok(numerator / denominator)
    }

    /// `R_y - R_{y+z}` at grid point `t`, with `z` drawn from the
    /// perturbation supplier. Exact; errors if either denominator form
    /// fails to be positive.
    pub fn ratio_difference(&self, t: usize) -> Result<BigRational> {
        let y = self.grid.get(t).ok_or_else(|| {
            Error::IndexOutOfRange(format!("grid point {t} of {}", self.grid.len()))
        })?;
        let z = self.perturbation.at(self.order, self.family.cols(), t)?;
        self.difference_at(y, &z)
    }

    /// `R_y - R_{y+z}` for explicit weights and perturbation.
    pub fn difference_at(&self, y: &[BigRational], z: &HyperMatrix) -> Result<BigRational> {
        self.check_weights(y)?;
        let numerator_family = self.numerator_family()?;
        let plain = HyperMatrix::diagonal(self.order, y);
        let perturbed = plain.add(z)?;
        let f1 = family_form_value(&plain, &self.kernel)?;
        if !f1.is_positive() {
            return Err(Error::NonpositiveWeight(format!(
                "kernel form is nonpositive ({f1})"
            )));
        }
        let g1 = family_form_value(&perturbed, &self.kernel)?;
        if !g1.is_positive() {
            return Err(Error::NonpositiveWeight(format!(
                "perturbed kernel form is nonpositive ({g1})"
            )));
        }
        let f2 = family_form_value(&plain, &numerator_family)?;
        let g2 = family_form_value(&perturbed, &numerator_family)?;
        Ok(f2 / f1 - g2 / g1)
    }
}

/// Value of the order-k form `det(Y x_1 M x_2 M ... x_k M)` for the family
/// given by the columns of `m`, where `Y` is an order-k cubic hypermatrix.
/// Order 2 reduces to the matrix determinant of `M^T Y M`.
pub fn family_form_value(form: &HyperMatrix, m: &RatMatrix) -> Result<BigRational> {
    if form.order() == 2 {
        let matrix = RatMatrix::from_fn(form.shape()[0], form.shape()[1], |i, j| {
            form.get(&[i, j]).clone()
        });
        return m.transpose().matmul(&matrix)?.matmul(m)?.determinant();
    }
    let mut acc = form.clone();
    for direction in 0..form.order() {
        acc = hyper_multiply_rational(&acc, direction, m)?;
    }
    hyperdeterminant(&acc)
}

/// The perturbed form as a polynomial in the weight variables: the entries
/// of the order-k table over the family columns are linear polynomials
/// `sum_i (prod_l M[i][c_l]) y_i` plus the constant contraction of the
/// perturbation against the same columns. The plain form is the `z = 0`
/// case and is then the usual symbolic wedge inner product.
pub fn perturbed_form_symbolic(z: &HyperMatrix, m: &RatMatrix) -> Result<MPoly> {
    let k = z.order();
    let n = m.rows();
    if z.shape() != vec![n; k].as_slice() {
        return Err(Error::DimensionMismatch(format!(
            "perturbation shape {:?} does not match a family in dimension {n}",
            z.shape()
        )));
    }
    let size = m.cols();
    let mut table = HyperMatrixPoly::new(vec![size; k], n);
    for idx in cubic_indices(k, size) {
        let cols: Vec<Vec<BigRational>> = idx.iter().map(|&c| m.column_vec(c)).collect();
        let linear = k_product_symbolic(&cols)?;
        let constant = contract(z, &cols)?;
        table.set(&idx, linear.add(&MPoly::constant(n, constant))?);
    }
    hyperdeterminant_poly(&table)
}

/// Full contraction `sum_idx z[idx] * prod_l v_l[idx_l]` of an order-k
/// hypermatrix against k vectors.
fn contract(z: &HyperMatrix, vectors: &[Vec<BigRational>]) -> Result<BigRational> {
    let mut acc = z.clone();
    for (direction, v) in vectors.iter().enumerate() {
        acc = hyper_multiply_rational(&acc, direction, &RatMatrix::column(v))?;
    }
    Ok(acc.get(&vec![0; vectors.len()]).clone())
}

/// Supremum of the recorded absolute differences at one weight scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleBucket {
    pub scale: i64,
    pub sup_abs_difference: BigRational,
}

/// Result of a scale sweep: one bucket per scale, the normalization degree
/// applied to the recorded differences (0 for the plain experiment, l - 1
/// for the parameter-count version), and whether the suprema plateau.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub buckets: Vec<ScaleBucket>,
    pub normalization_degree: u32,
    pub plateau: bool,
}

impl StabilityReport {
    /// Machine-readable lines, one `scale sup_abs_D` pair per bucket, with
    /// the supremum printed as an exact rational.
    pub fn machine_lines(&self) -> String {
        let mut out = String::new();
        for bucket in &self.buckets {
            out.push_str(&format!("{} {}\n", bucket.scale, bucket.sup_abs_difference));
        }
        out
    }

    /// Human-readable table with approximate values and the verdict.
    pub fn table(&self) -> String {
        let mut out = String::from("scale        sup|D|         (approx)\n");
        for bucket in &self.buckets {
            let approx = bucket.sup_abs_difference.to_f64().unwrap_or(f64::NAN);
            out.push_str(&format!(
                "{:<12} {:<14} {:.6e}\n",
                bucket.scale,
                truncated_rational(&bucket.sup_abs_difference),
                approx
            ));
        }
        if self.normalization_degree > 0 {
            out.push_str(&format!(
                "differences divided by max_i y_i^{}\n",
                self.normalization_degree
            ));
        }
        out.push_str(&format!(
            "plateau (last three within 10%): {}\n",
            if self.plateau { "yes" } else { "no" }
        ));
        out
    }
}

fn truncated_rational(q: &BigRational) -> String {
    let s = q.to_string();
    if s.len() <= 14 {
        s
    } else {
        format!("{}..", &s[..12])
    }
}

/// True when the last three suprema lie within 10% of each other.
fn plateau_of(buckets: &[ScaleBucket]) -> bool {
    if buckets.len() < 3 {
        return false;
    }
    let tail = &buckets[buckets.len() - 3..];
    let min = tail.iter().map(|b| &b.sup_abs_difference).min().expect("nonempty");
    let max = tail.iter().map(|b| &b.sup_abs_difference).max().expect("nonempty");
    let tolerance = BigRational::new(BigInt::from(11), BigInt::from(10));
    *max <= min * tolerance
}

/// Weight-sampling resolution: weights are drawn as multiples of
/// `scale / SAMPLE_RESOLUTION` inside `[scale, 10 * scale]`.
const SAMPLE_RESOLUTION: i64 = 100;

/// Directions in `[1, 10]^n` drawn once per experiment, so that every scale
/// bucket evaluates the same rays and the suprema are comparable.
fn sample_directions(n: usize, samples: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let numerator = rng.gen_range(SAMPLE_RESOLUTION..=10 * SAMPLE_RESOLUTION);
                    BigRational::new(BigInt::from(numerator), BigInt::from(SAMPLE_RESOLUTION))
                })
                .collect()
        })
        .collect()
}

fn check_scales(scales: &[i64]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::InvalidInput("empty scale sequence".into()));
    }
    if scales[0] < 1 {
        return Err(Error::InvalidInput(format!(
            "scales must be positive, got {}",
            scales[0]
        )));
    }
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "scales must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn run_experiment(
    instance: &StabilityInstance,
    scales: &[i64],
    samples: usize,
    seed: u64,
    normalization_degree: u32,
) -> Result<StabilityReport> {
    check_scales(scales)?;
    if samples == 0 {
        return Err(Error::InvalidInput("at least one sample per scale".into()));
    }
    let n = instance.family.cols();
    let directions = sample_directions(n, samples, seed);
    let mut buckets = Vec::with_capacity(scales.len());
    for &scale in scales {
        let factor = BigRational::from_integer(BigInt::from(scale));
        let mut sup = BigRational::zero();
        for (j, direction) in directions.iter().enumerate() {
            let y: Vec<BigRational> = direction.iter().map(|d| d * &factor).collect();
            let z = instance.perturbation.at(instance.order, n, j)?;
            let difference = instance.difference_at(&y, &z)?;
            let mut value = difference.abs();
            if normalization_degree > 0 {
                let max_weight = y.iter().max().expect("weights are nonempty").clone();
                value /= pow_rational(&max_weight, normalization_degree);
            }
            if value > sup {
                sup = value;
            }
        }
        buckets.push(ScaleBucket { scale, sup_abs_difference: sup });
    }
    let plateau = plateau_of(&buckets);
    Ok(StabilityReport { buckets, normalization_degree, plateau })
}

fn pow_rational(q: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Sweeps the scales, sampling `samples` weight vectors uniformly from
/// `[scale, 10 * scale]^n` (fixed seed, same rays at every scale) and
/// recording the supremum of `|R_y - R_{y+z}|` per bucket. The verdict is
/// true when the last three suprema agree within 10%.
pub fn run_stability_experiment(
    instance: &StabilityInstance,
    scales: &[i64],
    samples: usize,
    seed: u64,
) -> Result<StabilityReport> {
    run_experiment(instance, scales, samples, seed, 0)
}

/// Same sweep, but each difference is divided by `max_i y_i^(l-1)` where
/// `l` is the number of parameter columns; the parameter family must be
/// free together with the kernel. With one parameter this reduces to the
/// plain experiment.
pub fn run_corollary_experiment(
    instance: &StabilityInstance,
    scales: &[i64],
    samples: usize,
    seed: u64,
) -> Result<StabilityReport> {
    let l = instance.parameter_count();
    if l == 0 {
        return Err(Error::InvalidInput(
            "the normalized experiment needs at least one parameter column".into(),
        ));
    }
    let numerator = instance.numerator_family()?;
    if numerator.rank() != numerator.cols() {
        return Err(Error::InvalidInput(
            "parameter columns must be free together with the kernel".into(),
        ));
    }
    run_experiment(instance, scales, samples, seed, (l - 1) as u32)
}
