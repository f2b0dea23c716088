//! Reference complexes, matrices and seeded random generators shared by
//! tests across the crate.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::exact_linalg::{HyperMatrix, IntMatrix, RatMatrix};
use crate::simplicial::SimplicialComplex;

/// The 3-cycle graph on vertices 1, 2, 3.
pub fn triangle_graph() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[vec![1, 2], vec![1, 3], vec![2, 3]])
        .expect("triangle facets are valid")
}

/// Two solid tetrahedra glued along the triangle {2,3,4}, with the shared
/// triangle kept as a facet: seven triangles on five vertices.
pub fn bipyramid() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[
        vec![1, 2, 3],
        vec![1, 2, 4],
        vec![1, 3, 4],
        vec![2, 3, 4],
        vec![2, 3, 5],
        vec![2, 4, 5],
        vec![3, 4, 5],
    ])
    .expect("bipyramid facets are valid")
}

/// Complete bipartite graph with parts {1, 5} and {2, 3, 4}.
pub fn complete_bipartite_k23() -> SimplicialComplex {
    SimplicialComplex::from_facets(&[
        vec![1, 2],
        vec![1, 3],
        vec![1, 4],
        vec![2, 5],
        vec![3, 5],
        vec![4, 5],
    ])
    .expect("bipartite facets are valid")
}

/// The d-skeleton of the full simplex on the given vertices: every
/// (d+1)-subset is a facet.
pub fn complete_complex(nverts: usize, d: usize) -> SimplicialComplex {
    assert!(d + 1 <= nverts, "need at least d + 1 vertices");
    let facets: Vec<Vec<usize>> = (1..=nverts).combinations(d + 1).collect();
    SimplicialComplex::from_facets(&facets).expect("skeleton facets are valid")
}

/// Top boundary of the two-triangle cell structure on the projective
/// plane: three edges, two triangular cells, torsion of order two.
pub fn projective_plane_boundary() -> IntMatrix {
    IntMatrix::from_rows(&[vec![-1, -1], vec![-1, -1], vec![1, -1]])
}

/// Two projective-plane sheets sharing their first two edge rows, each
/// contributing a private third edge and two cells. Its single cycle pairs
/// facets across the two sheets.
pub fn doubled_projective_plane_boundary() -> IntMatrix {
    IntMatrix::from_rows(&[
        vec![-1, -1, -1, -1],
        vec![-1, -1, -1, -1],
        vec![1, -1, 0, 0],
        vec![0, 0, 1, -1],
    ])
}

/// Two rank-one parallel columns next to an independent third one.
pub fn parallel_pair_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 1]])
}

/// Connected simple graph on `nverts` vertices: a random spanning tree
/// plus extra random edges up to `nedges` (clamped to the complete graph).
pub fn random_connected_graph(
    rng: &mut impl Rng,
    nverts: usize,
    nedges: usize,
) -> SimplicialComplex {
    assert!(nverts >= 2, "a connected graph needs at least two vertices");
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for v in 2..=nverts {
        let u = rng.gen_range(1..v);
        edges.push(vec![u, v]);
    }
    let mut extras: Vec<Vec<usize>> = (1..=nverts)
        .combinations(2)
        .filter(|e| !edges.contains(e))
        .collect();
    extras.shuffle(rng);
    let target = nedges.min(nverts * (nverts - 1) / 2);
    while edges.len() < target {
        edges.push(extras.pop().expect("enough pairs remain"));
    }
    SimplicialComplex::from_facets(&edges).expect("graph facets are valid")
}

/// Pure 2-dimensional complex: a random selection of triangles on four to
/// six vertices.
pub fn random_two_complex(rng: &mut impl Rng) -> SimplicialComplex {
    let nverts = rng.gen_range(4..=6usize);
    let triangles: Vec<Vec<usize>> = (1..=nverts).combinations(3).collect();
    let count = rng.gen_range(3..=triangles.len().min(8));
    let chosen: Vec<Vec<usize>> =
        triangles.choose_multiple(rng, count).cloned().collect();
    SimplicialComplex::from_facets(&chosen).expect("triangle facets are valid")
}

/// Integer matrix with entries drawn uniformly from `-bound..=bound`.
pub fn random_int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

/// Family, parameter columns, and constant order-2 perturbation showing
/// that the growth bound for the normalized ratio difference is sharp: the
/// family kills the first coordinate, the three parameters are the other
/// standard basis vectors, and the perturbation subtracts one from the last
/// diagonal weight. The resulting ratio difference is exactly `y_2 * y_3`.
pub fn variation_sharpness_example() -> (IntMatrix, RatMatrix, HyperMatrix) {
    let family = IntMatrix::from_rows(&[
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
    ]);
    let parameters = RatMatrix::from_fn(4, 3, |i, j| {
        BigRational::from_integer(BigInt::from(i64::from(i == j + 1)))
    });
    let mut z = HyperMatrix::cubic(2, 4);
    z.set(&[3, 3], BigRational::from_integer(BigInt::from(-1)));
    (family, parameters, z)
}
