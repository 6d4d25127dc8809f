//! Area quadrature on the disk and contour quadrature on circles.

mod circle;
mod disk;
pub mod fft;
pub mod gauss;

pub use circle::{integrate_circle, CircleRule};
pub use disk::{build_disk_rule, integrate_disk, DiskRule, QuadOrders, ScatteredBlock, TensorBlock};
