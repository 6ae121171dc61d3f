use num_complex::{Complex64, ComplexFloat};

/// Field over which the analytic evaluators run: `f64` on the real line,
/// `Complex64` for contour work and complex pole dynamics.
pub trait Scalar: ComplexFloat<Real = f64> + From<f64> + core::fmt::Debug {
    fn real(x: f64) -> Self {
        <Self as From<f64>>::from(x)
    }
}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
