//! Self-contained numerical kernels: dense matrices, a cyclic Jacobi
//! symmetric eigensolver, Gram-Schmidt under an arbitrary inner product,
//! 2-D/3-D convex hulls, composite Simpson quadrature and a stable quadratic
//! solver.

mod eigen;
mod gram_schmidt;
mod hull;
mod matrix;
pub mod quadrature;
mod roots;

pub use eigen::{eigh, EigenDecomposition};
pub use gram_schmidt::{gram_schmidt, GramSchmidt};
pub use hull::{convex_hull, Facet, Hull};
pub use matrix::Matrix;
pub use roots::solve_quadratic;
