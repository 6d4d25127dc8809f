//! The orthonormal-polynomial oracle and its companions.

mod basis;
mod extremal;
mod gram;
mod szego;

pub use basis::{bergman_orthonormalize, gram_residual, orthonormalize, BasisExport, OrthoBasis, Oracle};
pub use extremal::{monic_norm_extremality, ExtremalityReport};
pub use gram::{gram_matrix, Gram};
pub use szego::{szego_monic, SzegoSystem};
