//! Simplicial complexes, boundary operators, forests and their polynomials.
//!
//! A complex is stored by its faces, grouped by dimension and enumerated
//! lexicographically on sorted vertex tuples; that enumeration pins down all
//! boundary signs and variable indices. Vertices are 1-based in text and in
//! face lists; facet and row indices in the API are 0-based.
//!
//! Complexes that only exist through a boundary matrix (Delta-complexes,
//! results of contraction) are carried by `GeneralizedComplex`; every
//! polynomial-level operation here works on the bare matrix.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};

use crate::exact_linalg::{
    column_lattice_basis, for_each_independent_subset, hyperdeterminant_poly, integer_factor,
    kernel_lattice_basis, saturation_index, smith_normal_form, wedge_inner_product_numeric,
    wedge_inner_product_symbolic, HyperMatrixPoly, IntMatrix, RatMatrix,
};
use crate::multipoly::MPoly;
use crate::symanzik::{height_pairing, kirchhoff, symanzik, VectorFamily};
use crate::{Error, Result};

/// Abstract simplicial complex with a fixed lexicographic face enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    /// `faces[l]` lists the dimension-l faces (sorted (l+1)-tuples of
    /// 1-based vertices), lexicographically ordered.
    faces: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Builds the downward closure of the given maximal faces.
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::InvalidInput("a complex needs at least one face".into()));
        }
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for facet in facets {
            if facet.is_empty() {
                return Err(Error::InvalidInput("empty facet".into()));
            }
            let mut sorted = facet.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != facet.len() {
                return Err(Error::InvalidInput(format!(
                    "facet {facet:?} repeats a vertex"
                )));
            }
            if sorted[0] == 0 {
                return Err(Error::InvalidInput("vertices are numbered from 1".into()));
            }
            // Insert every nonempty subset; inclusion-stability by construction.
            for size in 1..=sorted.len() {
                if by_dim.len() < size {
                    by_dim.resize(size, BTreeSet::new());
                }
                for sub in sorted.iter().copied().combinations(size) {
                    by_dim[size - 1].insert(sub);
                }
            }
        }
        let vertex_count = by_dim[0].iter().map(|v| v[0]).max().unwrap_or(0);
        Ok(SimplicialComplex {
            vertex_count,
            faces: by_dim.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dimension(&self) -> usize {
        self.faces.len() - 1
    }

    /// The dimension-l faces, lexicographically ordered.
    pub fn faces_of_dim(&self, l: usize) -> Result<&[Vec<usize>]> {
        self.faces
            .get(l)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::IndexOutOfRange(format!("no faces of dimension {l}")))
    }

    /// Top-dimensional faces.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.faces[self.dimension()]
    }

    pub fn num_facets(&self) -> usize {
        self.facets().len()
    }

    /// Faces not contained in any larger face, top dimension first.
    pub fn maximal_faces(&self) -> Vec<Vec<usize>> {
        // A face is covered when some face one dimension up contains it.
        let mut covered: Vec<BTreeSet<&[usize]>> = vec![BTreeSet::new(); self.faces.len()];
        for l in 1..self.faces.len() {
            for face in &self.faces[l] {
                for skip in 0..face.len() {
                    let sub: Vec<usize> = face
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    if let Ok(pos) = self.faces[l - 1].binary_search(&sub) {
                        covered[l - 1].insert(self.faces[l - 1][pos].as_slice());
                    }
                }
            }
        }
        let mut out = Vec::new();
        for l in (0..self.faces.len()).rev() {
            for face in &self.faces[l] {
                if !covered[l].contains(face.as_slice()) {
                    out.push(face.clone());
                }
            }
        }
        out
    }

    /// Boundary operator from dimension-l chains to dimension-(l-1) chains
    /// of the augmented chain complex: at l = 0 every vertex maps to the
    /// empty face with coefficient one, and l = -1 gives the zero map out of
    /// the rank-one chain group of the empty face.
    pub fn boundary_matrix(&self, l: isize) -> Result<IntMatrix> {
        let d = self.dimension() as isize;
        if l < -1 || l > d {
            return Err(Error::IndexOutOfRange(format!(
                "boundary dimension {l} outside -1..={d}"
            )));
        }
        if l == -1 {
            return Ok(IntMatrix::zeros(0, 1));
        }
        if l == 0 {
            let n = self.faces[0].len();
            return Ok(IntMatrix::from_fn(1, n, |_, _| BigInt::one()));
        }
        let l = l as usize;
        let rows = &self.faces[l - 1];
        let cols = &self.faces[l];
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (c, face) in cols.iter().enumerate() {
            for skip in 0..face.len() {
                let sub: Vec<usize> = face
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let r = rows
                    .binary_search(&sub)
                    .map_err(|_| Error::InvalidInput("face closure is broken".into()))?;
                let sign = if skip % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                m.set(r, c, sign);
            }
        }
        Ok(m)
    }

    /// The top boundary operator, source of all polynomial invariants.
    pub fn top_boundary(&self) -> IntMatrix {
        self.boundary_matrix(self.dimension() as isize)
            .expect("top dimension is always in range")
    }

    /// Order of the torsion part of the reduced homology in dimension l,
    /// the product of the elementary divisors of the (l+1)-boundary.
    pub fn torsion_order(&self, l: usize) -> Result<BigInt> {
        if self.dimension() == 0 || l > self.dimension() - 1 {
            return Err(Error::IndexOutOfRange(format!(
                "torsion dimension {l} outside 0..={}",
                self.dimension().saturating_sub(1)
            )));
        }
        Ok(saturation_index(&self.boundary_matrix(l as isize + 1)?))
    }

    /// Replaces one facet by the cone from a fresh vertex over its boundary.
    /// Returns the new complex and the map sending each new facet index to
    /// the index of its parent facet.
    pub fn stellar_subdivide(&self, facet: usize) -> Result<(SimplicialComplex, Vec<usize>)> {
        let d = self.dimension();
        let old_facets = self.facets();
        if facet >= old_facets.len() {
            return Err(Error::IndexOutOfRange(format!(
                "facet {facet} outside 0..{}",
                old_facets.len()
            )));
        }
        let target = old_facets[facet].clone();
        let apex = self.vertex_count + 1;
        let mut new_maximal: Vec<Vec<usize>> = self
            .maximal_faces()
            .into_iter()
            .filter(|f| *f != target)
            .collect();
        for skip in 0..target.len() {
            let mut child: Vec<usize> = target
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, &v)| v)
                .collect();
            child.push(apex);
            new_maximal.push(child);
        }
        let subdivided = SimplicialComplex::from_facets(&new_maximal)?;
        let mut parent = Vec::with_capacity(subdivided.num_facets());
        for f in subdivided.facets() {
            if f.contains(&apex) {
                parent.push(facet);
            } else {
                let pos = old_facets
                    .binary_search(f)
                    .map_err(|_| Error::IdentityFailure("subdivision lost a facet".into()))?;
                parent.push(pos);
            }
        }
        debug_assert_eq!(subdivided.dimension(), d);
        Ok((subdivided, parent))
    }

    /// Deletes the given (d-1)-face rows from the top boundary.
    pub fn contract(&self, rows: &[usize]) -> Result<GeneralizedComplex> {
        GeneralizedComplex::new(self.top_boundary()).contract(rows)
    }

    /// Text form: header `complex d`, then one maximal face per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("complex {}\n", self.dimension());
        for face in self.maximal_faces() {
            out.push_str(&face.iter().map(|v| v.to_string()).join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty complex text".into()))?;
        let mut tokens = header.split_whitespace();
        match tokens.next() {
            Some("complex") => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected 'complex d' header, got {other:?}"
                )))
            }
        }
        let d: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("missing dimension in header".into()))?
            .parse()
            .map_err(|_| Error::Parse("dimension must be a nonnegative integer".into()))?;
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing tokens after header".into()));
        }
        let mut facets = Vec::new();
        for line in lines {
            let facet: std::result::Result<Vec<usize>, _> =
                line.split_whitespace().map(|t| t.parse::<usize>()).collect();
            facets
                .push(facet.map_err(|_| Error::Parse(format!("bad face line: {line:?}")))?);
        }
        let complex = SimplicialComplex::from_facets(&facets)?;
        if complex.dimension() != d {
            return Err(Error::Parse(format!(
                "declared dimension {d} but faces have dimension {}",
                complex.dimension()
            )));
        }
        Ok(complex)
    }
}

/// A complex known only through its top boundary matrix: Delta-complexes
/// given by incidence data, or contractions of simplicial complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedComplex {
    boundary: IntMatrix,
}

impl GeneralizedComplex {
    pub fn new(boundary: IntMatrix) -> Self {
        GeneralizedComplex { boundary }
    }

    pub fn boundary(&self) -> &IntMatrix {
        &self.boundary
    }

    pub fn num_facets(&self) -> usize {
        self.boundary.cols()
    }

    /// Order of the torsion part of reduced homology one dimension below
    /// the facets.
    pub fn torsion_below_top(&self) -> BigInt {
        saturation_index(&self.boundary)
    }

    /// Contraction: delete the given rows. Composable.
    pub fn contract(&self, rows: &[usize]) -> Result<GeneralizedComplex> {
        for &r in rows {
            if r >= self.boundary.rows() {
                return Err(Error::IndexOutOfRange(format!(
                    "row {r} outside 0..{}",
                    self.boundary.rows()
                )));
            }
        }
        Ok(GeneralizedComplex::new(self.boundary.delete_rows(rows)))
    }

    /// Text form: header `matrix p n`, then the boundary rows.
    pub fn to_text(&self) -> String {
        format!("matrix {}", self.boundary.to_text())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let rest = s
            .trim_start()
            .strip_prefix("matrix")
            .ok_or_else(|| Error::Parse("expected 'matrix p n' header".into()))?;
        Ok(GeneralizedComplex::new(IntMatrix::parse_text(rest)?))
    }
}

/// Either input form of a complex, as read from text.
#[derive(Clone, Debug)]
pub enum ComplexData {
    Simplicial(SimplicialComplex),
    Raw(GeneralizedComplex),
}

impl ComplexData {
    pub fn parse(s: &str) -> Result<Self> {
        let first = s
            .split_whitespace()
            .next()
            .ok_or_else(|| Error::Parse("empty complex text".into()))?;
        match first {
            "complex" => Ok(ComplexData::Simplicial(SimplicialComplex::parse(s)?)),
            "matrix" => Ok(ComplexData::Raw(GeneralizedComplex::parse(s)?)),
            other => Err(Error::Parse(format!(
                "unknown header {other:?}; expected 'complex' or 'matrix'"
            ))),
        }
    }

    pub fn boundary(&self) -> IntMatrix {
        match self {
            ComplexData::Simplicial(c) => c.top_boundary(),
            ComplexData::Raw(g) => g.boundary().clone(),
        }
    }

    pub fn num_facets(&self) -> usize {
        match self {
            ComplexData::Simplicial(c) => c.num_facets(),
            ComplexData::Raw(g) => g.num_facets(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            ComplexData::Simplicial(c) => c.to_text(),
            ComplexData::Raw(g) => g.to_text(),
        }
    }
}

fn normalize_subset(boundary: &IntMatrix, subset: &[usize]) -> Result<Vec<usize>> {
    let n = boundary.cols();
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return Err(Error::InvalidInput("facet subset repeats an index".into()));
    }
    if let Some(&bad) = s.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange(format!("facet {bad} outside 0..{n}")));
    }
    Ok(s)
}

/// The three defining conditions for a facet subset to be a kappa-forest:
/// no nonzero top cycle, rank defect exactly kappa, and cardinality
/// `rank - kappa`.
pub fn forest_condition_flags(
    boundary: &IntMatrix,
    subset: &[usize],
    kappa: usize,
) -> Result<(bool, bool, bool)> {
    let s = normalize_subset(boundary, subset)?;
    let r = boundary.rank();
    let sub_rank = boundary.select_columns(&s)?.rank();
    let acyclic = sub_rank == s.len();
    let rank_defect = r - sub_rank == kappa;
    let cardinality = s.len() + kappa == r;
    Ok((acyclic, rank_defect, cardinality))
}

/// Whether the facet subset spans a kappa-forest. Any two of the three
/// conditions force the third; that reduction is asserted on every call.
pub fn is_kappa_forest(boundary: &IntMatrix, subset: &[usize], kappa: usize) -> Result<bool> {
    let (a, b, c) = forest_condition_flags(boundary, subset, kappa)?;
    let truths = usize::from(a) + usize::from(b) + usize::from(c);
    assert!(
        truths < 2 || truths == 3,
        "two forest conditions held without the third: {:?}",
        (a, b, c)
    );
    Ok(truths == 3)
}

/// All kappa-forests as facet subsets, in lexicographic order. A forest of
/// corank kappa is exactly an independent column subset of size
/// `rank - kappa`; kappa = rank leaves only the empty forest.
pub fn enumerate_forests(boundary: &IntMatrix, kappa: usize) -> Vec<Vec<usize>> {
    let r = boundary.rank();
    if kappa > r {
        return Vec::new();
    }
    let mut out = Vec::new();
    for_each_independent_subset(boundary, r - kappa, |subset| out.push(subset.to_vec()));
    out
}

/// Kirchhoff polynomial of the top boundary, computed three independent
/// ways and checked coefficientwise:
/// minors of the canonical row-lattice basis; the forest sum of boundary
/// lattice indices scaled by the global torsion order; and the forest sum
/// of per-forest elementary divisor products. Any disagreement is a bug in
/// the lattice kernels and reported as an identity failure.
pub fn simplicial_kirchhoff(boundary: &IntMatrix, k: usize) -> Result<MPoly> {
    let family = VectorFamily::new(boundary.clone());
    let via_minors = kirchhoff(&family, k)?;
    let n = boundary.cols();
    let r = family.rank();
    let tor = family.saturation_index().clone();
    let full_basis = column_lattice_basis(boundary);
    let full_gram = full_basis.gram().determinant()?;
    let mut index_sum = MPoly::zero(n);
    let mut divisor_sum = MPoly::zero(n);
    let mut failure: Option<Error> = None;
    for_each_independent_subset(boundary, r, |subset| {
        if failure.is_some() {
            return;
        }
        let result = (|| -> Result<()> {
            let sub = boundary.select_columns(subset)?;
            // Index of the forest's boundary lattice in the full one, via
            // the covolume ratio of the two lattice bases.
            let ratio = BigRational::new(sub.gram().determinant()?, full_gram.clone());
            if !ratio.is_integer() {
                return Err(Error::IdentityFailure(
                    "boundary lattice index squared must be an integer".into(),
                ));
            }
            let sq = ratio.to_integer();
            let index = sq.sqrt();
            if &index * &index != sq {
                return Err(Error::IdentityFailure(
                    "boundary lattice index squared must be a perfect square".into(),
                ));
            }
            let torsion = saturation_index(&sub);
            let mut exp = vec![0u32; n];
            for &j in subset {
                exp[j] = 1;
            }
            index_sum.add_term(exp.clone(), BigRational::from_integer(index.pow(k as u32)));
            divisor_sum.add_term(exp, BigRational::from_integer(torsion.pow(k as u32)));
            Ok(())
        })();
        if let Err(e) = result {
            failure = Some(e);
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let via_indices = index_sum.scalar_mul(&BigRational::from_integer(tor.pow(k as u32)));
    if via_minors != via_indices || via_minors != divisor_sum {
        return Err(Error::IdentityFailure(
            "the three Kirchhoff computation paths disagree".into(),
        ));
    }
    Ok(via_minors)
}

/// Symanzik polynomial of the top boundary.
pub fn simplicial_symanzik(boundary: &IntMatrix, k: usize) -> Result<MPoly> {
    symanzik(&VectorFamily::new(boundary.clone()), k)
}

/// Factorization of the Symanzik polynomial over facet equivalence classes.
#[derive(Clone, Debug)]
pub struct FacetClassDecomposition {
    /// Facet indices per class; a facet appears iff it lies in some cycle.
    pub classes: Vec<Vec<usize>>,
    /// Per class, the integer value pattern over all facets (zero off-class).
    pub tau: Vec<Vec<BigInt>>,
    /// Per class, `Q_j(x) = sum tau_j(facet)^k x_facet`.
    pub q: Vec<MPoly>,
    /// Polynomial in the class variables `T_1..T_l` with
    /// `Sym_k(x) = P(Q_1(x), ..., Q_l(x))`.
    pub p: MPoly,
    pub order: usize,
}

/// Partitions facets by the vanishing pattern of cycles (two facets are
/// equivalent when every cycle vanishes on one exactly when it vanishes on
/// the other, i.e. when their kernel-basis rows are proportional), extracts
/// the minimal integer cycle values tau_j, and rewrites the Symanzik
/// polynomial through them. The factorization identity is verified exactly
/// and at 20 random positive rational points before returning.
pub fn facet_class_factorization(boundary: &IntMatrix, k: usize) -> Result<FacetClassDecomposition> {
    if k % 2 != 0 {
        return Err(Error::OddOrder(k));
    }
    if k == 0 {
        return Err(Error::InvalidInput(
            "facet class factorization needs a positive even order".into(),
        ));
    }
    let n = boundary.cols();
    let kernel = kernel_lattice_basis(boundary);
    let s = kernel.cols();
    let tor = saturation_index(boundary);
    let tor_pow = BigRational::from_integer(tor.pow(k as u32));
    let reference = simplicial_symanzik(boundary, k)?;

    // Group facets by the projective class of their kernel-basis row.
    let mut class_keys: Vec<Vec<BigInt>> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let row: Vec<BigInt> = (0..s).map(|j| kernel.get(i, j).clone()).collect();
        let Some(key) = primitive_direction(&row) else { continue };
        match class_keys.iter().position(|c| *c == key) {
            Some(j) => classes[j].push(i),
            None => {
                class_keys.push(key);
                classes.push(vec![i]);
            }
        }
    }
    let l = classes.len();

    // tau_j: the cycle achieving the minimal nonzero value at the class
    // representative (the gcd of the kernel-basis coefficients there),
    // positive at the representative, evaluated across the class.
    let mut tau: Vec<Vec<BigInt>> = Vec::with_capacity(l);
    let mut rep_gcd: Vec<BigInt> = Vec::with_capacity(l);
    for class in &classes {
        let rep = class[0];
        let row: Vec<BigInt> = (0..s).map(|j| kernel.get(rep, j).clone()).collect();
        let (g, lambda) = gcd_combination(&row);
        let mut values = vec![BigInt::zero(); n];
        for &facet in class {
            let mut acc = BigInt::zero();
            for j in 0..s {
                acc += kernel.get(facet, j) * &lambda[j];
            }
            values[facet] = acc;
        }
        debug_assert!(values[rep] == g && g.is_positive());
        rep_gcd.push(g);
        tau.push(values);
    }

    let mut q = Vec::with_capacity(l);
    for values in &tau {
        let mut poly = MPoly::zero(n);
        for (facet, v) in values.iter().enumerate() {
            if !v.is_zero() {
                let mut exp = vec![0u32; n];
                exp[facet] = 1;
                poly.add_term(exp, BigRational::from_integer(v.pow(k as u32)));
            }
        }
        q.push(poly);
    }

    // Rewrite each kernel-basis cycle in the tau functions: integer matrix
    // rho with row(facet of class j) = rho[.][j] * tau_j(facet).
    let mut rho = vec![vec![BigInt::zero(); l]; s];
    for (j, class) in classes.iter().enumerate() {
        let rep = class[0];
        for t in 0..s {
            let (quot, rem) = kernel.get(rep, t).div_rem(&rep_gcd[j]);
            if !rem.is_zero() {
                return Err(Error::IdentityFailure(
                    "cycle coefficients must be divisible by the class gcd".into(),
                ));
            }
            rho[t][j] = quot;
        }
    }

    // P = torsion^k times the hyperdeterminant of the order-k table whose
    // entries collapse, class by class, to linear forms in T_1..T_l.
    let mut table = HyperMatrixPoly::new(vec![s; k], l);
    for idx in (0..k).map(|_| 0..s).multi_cartesian_product() {
        let mut entry = MPoly::zero(l);
        for j in 0..l {
            let mut c = BigInt::one();
            for &t in &idx {
                c *= &rho[t][j];
            }
            let mut exp = vec![0u32; l];
            exp[j] = 1;
            entry.add_term(exp, BigRational::from_integer(c));
        }
        table.set(&idx, entry);
    }
    let p = hyperdeterminant_poly(&table)?.scalar_mul(&tor_pow);
    if !p.has_integer_coefficients() {
        return Err(Error::IdentityFailure(
            "class polynomial must have integer coefficients".into(),
        ));
    }

    // Verify the identity, first exactly, then at sampled points.
    let composed = compose(&p, &q, n)?;
    if composed != reference {
        return Err(Error::IdentityFailure(
            "facet class factorization does not reproduce the Symanzik polynomial".into(),
        ));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let point: Vec<BigRational> = (0..n)
            .map(|_| {
                BigRational::new(
                    BigInt::from(rng.gen_range(1i64..=12)),
                    BigInt::from(rng.gen_range(1i64..=5)),
                )
            })
            .collect();
        let q_vals: Vec<BigRational> =
            q.iter().map(|poly| poly.evaluate(&point)).collect::<Result<_>>()?;
        if p.evaluate(&q_vals)? != reference.evaluate(&point)? {
            return Err(Error::IdentityFailure(
                "factorization identity failed at a sample point".into(),
            ));
        }
    }
    Ok(FacetClassDecomposition { classes, tau, q, p, order: k })
}

/// Direction of an integer vector: divided by the gcd, sign-normalized so
/// the first nonzero entry is positive. None for the zero vector.
fn primitive_direction(row: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    for v in row {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return None;
    }
    let mut out: Vec<BigInt> = row.iter().map(|v| v / &g).collect();
    if let Some(first) = out.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in &mut out {
                *v = -v.clone();
            }
        }
    }
    Some(out)
}

/// Bezout combination: coefficients lambda with `sum lambda_i row_i` equal
/// to the (positive) gcd of the entries. The row must be nonzero.
fn gcd_combination(row: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut lambda: Vec<BigInt> = Vec::with_capacity(row.len());
    for v in row {
        let ext = g.extended_gcd(v);
        for c in &mut lambda {
            *c *= &ext.x;
        }
        lambda.push(ext.y.clone());
        g = ext.gcd;
    }
    debug_assert!(g.is_positive());
    (g, lambda)
}

/// Substitutes the polynomials `args` (all in `nvars` variables) for the
/// variables of `p`.
fn compose(p: &MPoly, args: &[MPoly], nvars: usize) -> Result<MPoly> {
    let mut acc = MPoly::zero(nvars);
    for (exp, c) in p.terms() {
        let mut term = MPoly::constant(nvars, c.clone());
        for (j, &e) in exp.iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&args[j])?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Canonical basis, as matrix columns, of the lattice of boundaries
/// supported on the given (d-1)-face subset.
pub fn restricted_boundary_lattice(boundary: &IntMatrix, support: &[usize]) -> Result<IntMatrix> {
    let p = boundary.rows();
    for &r in support {
        if r >= p {
            return Err(Error::IndexOutOfRange(format!("row {r} outside 0..{p}")));
        }
    }
    let complement: Vec<usize> = (0..p).filter(|r| !support.contains(r)).collect();
    let outside = boundary.select_rows(&complement)?;
    let chains = kernel_lattice_basis(&outside);
    Ok(column_lattice_basis(&boundary.matmul(&chains)?))
}

fn support_of<T: Zero>(v: &[T]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

/// Whether `b` generates the lattice of boundaries supported on supp(b).
pub fn is_simple_boundary(boundary: &IntMatrix, b: &[BigInt]) -> Result<bool> {
    if b.len() != boundary.rows() {
        return Err(Error::DimensionMismatch(format!(
            "boundary vector length {} does not match {} rows",
            b.len(),
            boundary.rows()
        )));
    }
    let b_rat: Vec<BigRational> = b.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    if boundary.to_rational().solve_vec(&b_rat)?.is_none() {
        return Err(Error::OutsideSpan("vector is not a boundary".into()));
    }
    let support = support_of(b);
    if support.is_empty() {
        return Ok(false);
    }
    let lattice = restricted_boundary_lattice(boundary, &support)?;
    if lattice.cols() != 1 {
        return Ok(false);
    }
    let gen_pos: Vec<BigInt> = (0..lattice.rows()).map(|i| lattice.get(i, 0).clone()).collect();
    let gen_neg: Vec<BigInt> = gen_pos.iter().map(|v| -v.clone()).collect();
    Ok(b == gen_pos.as_slice() || b == gen_neg.as_slice())
}

/// Whether two simple boundaries are cosimple: jointly a maximal-rank
/// independent family of the boundary lattice restricted to the union of
/// their supports.
pub fn is_cosimple_pair(boundary: &IntMatrix, b1: &[BigInt], b2: &[BigInt]) -> Result<bool> {
    if !is_simple_boundary(boundary, b1)? || !is_simple_boundary(boundary, b2)? {
        return Ok(false);
    }
    let mut support = support_of(b1);
    support.extend(support_of(b2));
    support.sort_unstable();
    support.dedup();
    let lattice = restricted_boundary_lattice(boundary, &support)?;
    if lattice.cols() != 2 {
        return Ok(false);
    }
    Ok(!pair_change_of_basis(&lattice, b1, b2)?.determinant()?.is_zero())
}

fn pair_change_of_basis(lattice: &IntMatrix, b1: &[BigInt], b2: &[BigInt]) -> Result<IntMatrix> {
    let p = lattice.rows();
    let pair = IntMatrix::from_fn(p, 2, |i, j| if j == 0 { b1[i].clone() } else { b2[i].clone() });
    integer_factor(lattice, &pair)
}

/// Index of the sublattice spanned by a cosimple pair inside the boundary
/// lattice restricted to the union of supports.
pub fn theta_factor(boundary: &IntMatrix, b1: &[BigInt], b2: &[BigInt]) -> Result<BigInt> {
    if !is_cosimple_pair(boundary, b1, b2)? {
        return Err(Error::InvalidInput("theta needs a cosimple pair".into()));
    }
    let mut support = support_of(b1);
    support.extend(support_of(b2));
    support.sort_unstable();
    support.dedup();
    let lattice = restricted_boundary_lattice(boundary, &support)?;
    Ok(pair_change_of_basis(&lattice, b1, b2)?.determinant()?.abs())
}

/// Decomposes a rational boundary as a positive combination of simple,
/// pairwise cosimple integer boundaries. Reconstruction, simplicity and
/// cosimplicity are all verified before returning.
pub fn decompose_simple(
    boundary: &IntMatrix,
    b: &[BigRational],
) -> Result<Vec<(BigRational, Vec<BigInt>)>> {
    let p = boundary.rows();
    let n = boundary.cols();
    if b.len() != p {
        return Err(Error::DimensionMismatch(format!(
            "boundary vector length {} does not match {p} rows",
            b.len()
        )));
    }
    if boundary.to_rational().solve_vec(b)?.is_none() {
        return Err(Error::OutsideSpan("vector is not a boundary".into()));
    }
    let support = support_of(b);
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let r = boundary.rank();
    // Largest support subset whose contraction keeps the cycle rank: rows
    // rejected once stay rejected, so one greedy pass reaches a maximal set.
    let mut kept: Vec<usize> = Vec::new();
    for &row in &support {
        let mut trial = kept.clone();
        trial.push(row);
        if boundary.delete_rows(&trial).rank() == r {
            kept = trial;
        }
    }
    let full_kernel = kernel_lattice_basis(boundary);
    let s = full_kernel.cols();
    let mut parts: Vec<(BigRational, Vec<BigInt>)> = Vec::new();
    let mut reconstructed = vec![BigRational::zero(); p];
    for &row in support.iter().filter(|row| !kept.contains(row)) {
        let mut deleted = kept.clone();
        deleted.push(row);
        deleted.sort_unstable();
        let larger_kernel = kernel_lattice_basis(&boundary.delete_rows(&deleted));
        if larger_kernel.cols() != s + 1 {
            return Err(Error::IdentityFailure(
                "contracting one more face must raise the cycle rank by one".into(),
            ));
        }
        // Generator of the rank-one quotient of the two cycle lattices.
        let coords = integer_factor(&larger_kernel, &full_kernel)?;
        let snf = smith_normal_form(&coords);
        if snf.elementary_divisors().iter().any(|d| !d.is_one()) {
            return Err(Error::IdentityFailure(
                "cycle lattice quotient must be free".into(),
            ));
        }
        let mut unit = vec![BigRational::zero(); s + 1];
        unit[s] = BigRational::one();
        let gen_coords = snf
            .left
            .to_rational()
            .solve_vec(&unit)?
            .ok_or_else(|| Error::Singular("unimodular transform".into()))?;
        let mut chain = vec![BigInt::zero(); n];
        for (j, c) in gen_coords.iter().enumerate() {
            debug_assert!(c.is_integer());
            let c = c.to_integer();
            for (i, entry) in chain.iter_mut().enumerate() {
                *entry += larger_kernel.get(i, j) * &c;
            }
        }
        let mut part = vec![BigInt::zero(); p];
        for i in 0..p {
            let mut acc = BigInt::zero();
            for (j, c) in chain.iter().enumerate() {
                acc += boundary.get(i, j) * c;
            }
            part[i] = acc;
        }
        if part[row].is_zero() {
            return Err(Error::IdentityFailure(
                "quotient generator must hit its distinguished face".into(),
            ));
        }
        // Orient the part so its weight comes out positive.
        if part[row].is_positive() != b[row].is_positive() {
            for v in &mut part {
                *v = -v.clone();
            }
        }
        let lambda = &b[row] / BigRational::from_integer(part[row].clone());
        for i in 0..p {
            reconstructed[i] += &lambda * BigRational::from_integer(part[i].clone());
        }
        parts.push((lambda, part));
    }
    if reconstructed != b {
        return Err(Error::IdentityFailure(
            "simple parts do not reconstruct the boundary".into(),
        ));
    }
    for (_, part) in &parts {
        if !is_simple_boundary(boundary, part)? {
            return Err(Error::IdentityFailure("a produced part is not simple".into()));
        }
    }
    for pair in parts.iter().combinations(2) {
        if !is_cosimple_pair(boundary, &pair[0].1, &pair[1].1)? {
            return Err(Error::IdentityFailure("produced parts are not cosimple".into()));
        }
    }
    Ok(parts)
}

/// A rational chain whose boundary is the given vector.
pub fn chain_with_boundary(boundary: &IntMatrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    boundary
        .to_rational()
        .solve_vec(b)?
        .ok_or_else(|| Error::OutsideSpan("vector is not a boundary".into()))
}

/// Exact verification data for one chain pair in `cross_term_identity_check`.
#[derive(Clone, Debug)]
pub struct PairCrossTerm {
    pub i: usize,
    pub j: usize,
    /// Height pairing of the two boundaries at the weights.
    pub pairing: BigRational,
    /// The signed square-root value: cycle norm squared times the pairing.
    pub cross_term: BigRational,
    /// Whether the squared cross-term equals the product-minus-wedge form.
    pub square_identity_holds: bool,
    /// Whether every monomial of the symbolic cross-term polynomial carries
    /// the sign of the chain coefficients at a completing facet.
    pub monomial_sign_rule_holds: bool,
}

/// Report of the exact wedge-norm expansion identities for a chain family.
#[derive(Clone, Debug)]
pub struct CrossTermReport {
    /// Squared wedge norm of the cycles with the summed chain appended.
    pub total: BigRational,
    /// Squared wedge norm of the cycle basis alone.
    pub cycle_norm: BigRational,
    /// Squared wedge norms with each single chain appended.
    pub single_norms: Vec<BigRational>,
    /// Whether `total = sum of single norms + 2 * cycle_norm * sum of pairings`.
    pub expansion_holds: bool,
    pub pairs: Vec<PairCrossTerm>,
}

impl CrossTermReport {
    pub fn all_hold(&self) -> bool {
        self.expansion_holds
            && self
                .pairs
                .iter()
                .all(|p| p.square_identity_holds && p.monomial_sign_rule_holds)
    }
}

/// Verifies, exactly over the rationals, the expansion of the squared wedge
/// norm of a chain sum into single-chain norms plus height-pairing cross
/// terms, the square-root identity for each pair, and the monomial sign
/// rule for the symbolic cross-term polynomial.
pub fn cross_term_identity_check(
    boundary: &IntMatrix,
    chains: &[Vec<BigRational>],
    weights: &[BigRational],
) -> Result<CrossTermReport> {
    let n = boundary.cols();
    if weights.len() != n {
        return Err(Error::VariableMismatch(n, weights.len()));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::NonpositiveWeight("cross term weights".into()));
    }
    for a in chains {
        if a.len() != n {
            return Err(Error::VariableMismatch(n, a.len()));
        }
    }
    if chains.is_empty() {
        return Err(Error::InvalidInput("cross term check needs a chain".into()));
    }
    let family = VectorFamily::new(boundary.clone());
    let kernel = family.kernel_basis().to_rational();
    let u = boundary.to_rational();
    let cycle_norm = wedge_inner_product_numeric(&[kernel.clone(), kernel.clone()], Some(weights))?;

    let with_chain = |a: &[BigRational]| -> Result<RatMatrix> {
        Ok(kernel.hstack(&RatMatrix::column(a))?)
    };
    let mut single_norms = Vec::with_capacity(chains.len());
    for a in chains {
        let f = with_chain(a)?;
        single_norms.push(wedge_inner_product_numeric(&[f.clone(), f], Some(weights))?);
    }
    let sum_chain: Vec<BigRational> = (0..n)
        .map(|i| chains.iter().map(|a| &a[i]).sum::<BigRational>())
        .collect();
    let f_sum = with_chain(&sum_chain)?;
    let total = wedge_inner_product_numeric(&[f_sum.clone(), f_sum], Some(weights))?;

    let boundaries: Vec<Vec<BigRational>> = chains
        .iter()
        .map(|a| Ok(u.matmul(&RatMatrix::column(a))?.column_vec(0)))
        .collect::<Result<_>>()?;

    let mut pairs = Vec::new();
    let mut pairing_sum = BigRational::zero();
    for i in 0..chains.len() {
        for j in (i + 1)..chains.len() {
            let pairing = height_pairing(&family, &boundaries[i], &boundaries[j], weights)?;
            pairing_sum += &pairing;
            let cross_term = &cycle_norm * &pairing;
            let fi = with_chain(&chains[i])?;
            let fj = with_chain(&chains[j])?;
            let fij = fi.hstack(&RatMatrix::column(&chains[j]))?;
            let pair_norm = wedge_inner_product_numeric(&[fij.clone(), fij], Some(weights))?;
            let square_identity_holds = &cross_term * &cross_term
                == &single_norms[i] * &single_norms[j] - &cycle_norm * &pair_norm;
            let symbolic = wedge_inner_product_symbolic(&[fi, fj])?;
            let monomial_sign_rule_holds = symbolic.evaluate(weights)? == cross_term
                && monomial_signs_match(boundary, &symbolic, &boundaries[i], &boundaries[j])?;
            pairs.push(PairCrossTerm {
                i,
                j,
                pairing,
                cross_term,
                square_identity_holds,
                monomial_sign_rule_holds,
            });
        }
    }
    let expansion_holds = {
        let mut rhs: BigRational = single_norms.iter().sum();
        rhs += BigRational::from_integer(BigInt::from(2)) * &cycle_norm * pairing_sum;
        total == rhs
    };
    Ok(CrossTermReport { total, cycle_norm, single_norms, expansion_holds, pairs })
}

/// Checks the sign rule on every monomial of the symbolic cross-term
/// polynomial: the complement of the monomial's support is an independent
/// set one short of full rank, and for every facet completing it to a full
/// forest, the product of the two rebuilt chain coefficients there has the
/// sign of the monomial.
fn monomial_signs_match(
    boundary: &IntMatrix,
    symbolic: &MPoly,
    b1: &[BigRational],
    b2: &[BigRational],
) -> Result<bool> {
    let n = boundary.cols();
    let r = boundary.rank();
    for (exp, coeff) in symbolic.terms() {
        if exp.iter().any(|&e| e > 1) {
            return Ok(false);
        }
        let inside: Vec<usize> =
            (0..n).filter(|&i| exp[i] == 0).collect();
        if inside.len() != r - 1 || boundary.select_columns(&inside)?.rank() != r - 1 {
            return Ok(false);
        }
        let mut checked_any = false;
        for candidate in (0..n).filter(|i| exp[*i] == 1) {
            let mut subset = inside.clone();
            subset.push(candidate);
            subset.sort_unstable();
            let sub = boundary.select_columns(&subset)?;
            if sub.rank() != r {
                continue;
            }
            let pos = subset.iter().position(|&c| c == candidate).expect("member");
            let sub_rat = sub.to_rational();
            let (Some(c1), Some(c2)) = (sub_rat.solve_vec(b1)?, sub_rat.solve_vec(b2)?) else {
                return Ok(false);
            };
            let prod = &c1[pos] * &c2[pos];
            if prod.is_zero() || prod.is_positive() != coeff.is_positive() {
                return Ok(false);
            }
            checked_any = true;
        }
        if !checked_any {
            return Ok(false);
        }
    }
    Ok(true)
}
