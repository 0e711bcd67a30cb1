//! Periodic torus discretization: grids, transforms, Galerkin projection,
//! Fourier-multiplier operators, dealiased products, norms and the
//! reflection symmetry class.

mod fft;
mod field;
mod grid;
pub mod norms;
pub mod ops;
pub mod symmetry;

pub use fft::C64;
pub(crate) use fft::fft_nd as fft_raw;
pub use field::{MatrixField, Repr, SpectralField, SpectralVectorField};
pub(crate) use field::dims_of as grid_dims;
pub use grid::TorusGrid;
pub use norms::{h_n_norm, l2_inner, l2_norm, lp_norm, sobolev12_norm, sobolev12_norm_sq, vec_l2_inner, vec_l2_norm};
pub use ops::{
    dealias_product, dealias_product_truncated, dealias_scalar_vector,
    dealias_scalar_vector_truncated, derivative, divergence, gradient, gradient_tensor,
    inv_laplacian, laplacian, project_modes, project_vector, resample, riesz_double, riesz_grad,
    riesz_grad_div, tail_fraction,
};
pub use symmetry::{project_scalar_even, project_vector_class, symmetry_defect, symmetry_project};
