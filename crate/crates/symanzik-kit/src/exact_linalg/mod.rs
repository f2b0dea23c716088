//! Exact linear algebra over the integers and rationals.

mod hyper;
mod matrix;
mod normal_forms;
mod scan;

pub use hyper::{
    hyper_multiply, hyper_multiply_rational, hyperdeterminant, hyperdeterminant_poly,
    k_product_numeric, k_product_symbolic, wedge_inner_product_numeric,
    wedge_inner_product_symbolic, HyperMatrix, HyperMatrixPoly,
};
pub use matrix::{gram_norm_pow, IntMatrix, RatMatrix};
pub use normal_forms::{
    column_lattice_basis, integer_factor, kernel_lattice_basis, row_lattice_basis,
    saturated_column_basis, saturation_index, smith_normal_form, SnfResult,
};
pub use scan::{
    for_each_basis_subset_with_det, for_each_independent_subset, independent_column_subsets,
};
