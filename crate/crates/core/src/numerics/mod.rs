//! Small numerical building blocks shared by the physics modules.

pub mod gamma;
pub mod quadrature;
pub mod roots;
pub mod spline;
pub mod tridiag;

pub use gamma::{cos_pi, gamma, ln_gamma, sin_pi, tan_pi};
pub use quadrature::{tanh_sinh, Quadrature};
pub use roots::brent;
pub use spline::CubicSpline;
pub use tridiag::SymTridiagonal;
