//! Fixtures shared by the benchmarks.

use gl2calc_core::group::GroupOperator;
use gl2calc_core::parse::parse_operator;
use gl2calc_core::quad::{KernelPoint, ParamPoint};
use num_complex::Complex64;

/// Operators of increasing cost under `Θ`.
pub const OPERATORS: [&str; 5] = ["a*da + b*db + c*dc + d*dd", "c*c", "c*wb", "wb*wb", "wa*wd - wb*wc"];

pub fn operator(text: &str) -> GroupOperator {
    parse_operator(text).expect("benchmark operator parses")
}

/// A generic point with nonzero kernel for the standard bump.
pub fn kernel_point() -> KernelPoint {
    KernelPoint::new(
        0.3,
        -0.2,
        ParamPoint::new(Complex64::new(0.23, 0.31), 0, Complex64::new(-0.41, -0.17), 1),
    )
}
