//! Numerical conformable fractional calculus.
//!
//! This crate implements the conformable family of fractional operators:
//! left/right derivatives and integrals of any positive order, sequential
//! derivatives and the fractional chain rule, fractional power series,
//! the fractional Laplace transform, and linear fractional differential
//! systems with a Gronwall-inequality checker.
//!
//! The operators are *local*: for differentiable `f` the order-`alpha`
//! derivative based at `a` is just `(t-a)^{1-alpha} f'(t)`, and the
//! eigenfunction of the derivative is the fractional exponential
//! `e^{(t-a)^alpha / alpha}` rather than a Mittag-Leffler function. Every
//! identity of the calculus (inverse laws, integration by parts, the
//! semigroup property, the transform table) ships as a testable property;
//! see the guide in `book/` for worked narrative examples.
//!
//! ```
//! use conformable::{left_deriv, DerivBackend, FracOrder, RealFn};
//!
//! // T_{1/2} of t^2 at t = 4 (base 0) is 2 t^{3/2} = 16.
//! let f = RealFn::new(|t: f64| t * t).with_deriv(|t| 2.0 * t);
//! let half = FracOrder::new(0.5).unwrap();
//! let v = left_deriv(&f, 0.0, half, 4.0, &DerivBackend::default()).unwrap();
//! assert!((v - 16.0).abs() < 1e-12);
//! ```

pub mod deriv;
pub mod error;
pub mod function;
pub mod gamma;
pub mod integ;
pub mod laplace;
pub mod ode;
pub mod order;
pub mod quadrature;
pub mod series;

mod expm;

pub use deriv::{
    chain_deriv, higher_left_deriv, higher_right_deriv, left_deriv, right_deriv,
    sequential_left_deriv, DerivBackend, DerivMode,
};
pub use error::{Error, Result};
pub use function::RealFn;
pub use integ::{
    left_integral, power_integral_closed, q_reflect, right_integral, rl_integral,
    semigroup_residual, Side, WeightedIntegral,
};
pub use laplace::{laplace_numeric, laplace_of_deriv, laplace_table, TableKind, TransformQuery};
pub use ode::{
    frac_matrix_exp, gronwall_check, picard_iterate, picard_partial, residual, sample_trajectory,
    solve_scalar, solve_system, write_trajectory_csv, GronwallInstance, GronwallPoint,
    GronwallReport, LinearFracSystem,
};
pub use order::{FracOrder, Interval};
pub use quadrature::{integrate, integrate_full, QuadratureSpec};
pub use series::{
    builtin_series, eval_series, ratio_radius, remainder_bound, taylor_coeffs, FracSeries,
    SeriesKind,
};

// The guide's code blocks run as doc-tests so the book cannot drift from
// the crate. `--cfg doctest` is only set while rustdoc collects tests, so
// these modules do not exist in normal builds.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/getting-started.md")]
    mod getting_started {}
    #[doc = include_str!("../../../book/src/derivatives.md")]
    mod derivatives {}
    #[doc = include_str!("../../../book/src/integrals.md")]
    mod integrals {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/laplace.md")]
    mod laplace {}
    #[doc = include_str!("../../../book/src/odes.md")]
    mod odes {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
