//! Evaluatable scalar functions with caller-declared smoothness.
//!
//! Every theorem implemented by this crate states smoothness hypotheses.
//! [`RealFn`] does not attempt to detect smoothness; the caller declares how
//! many continuous classical derivatives the function has on the working
//! interval and optionally supplies those derivatives as exact hooks.
//! Declaring more smoothness than the function actually has is the caller's
//! responsibility and silently produces the consequences the underlying
//! theorems allow.

use std::sync::Arc;

use crate::error::{Error, Result};

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An evaluatable scalar function on an interval.
///
/// Cloning is cheap; the closure is shared. All evaluation is pure, so a
/// `RealFn` can be used from many threads at once.
#[derive(Clone)]
pub struct RealFn {
    eval: EvalFn,
    smoothness: u32,
    exact_derivs: Vec<EvalFn>,
    // Levels of numerical differencing already baked into `eval`.
    // Differencing loses roughly a digit per level, so the total across
    // nested uses is capped at two.
    diff_depth: u32,
}

impl std::fmt::Debug for RealFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RealFn")
            .field("smoothness", &self.smoothness)
            .field("exact_derivs", &self.exact_derivs.len())
            .finish()
    }
}

impl RealFn {
    /// Wraps a plain closure with no smoothness claim.
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RealFn {
            eval: Arc::new(f),
            smoothness: 0,
            exact_derivs: Vec::new(),
            diff_depth: 0,
        }
    }

    /// Wraps a closure and asserts `smoothness` continuous derivatives.
    pub fn smooth(f: impl Fn(f64) -> f64 + Send + Sync + 'static, smoothness: u32) -> Self {
        RealFn {
            eval: Arc::new(f),
            smoothness,
            exact_derivs: Vec::new(),
            diff_depth: 0,
        }
    }

    /// A constant function. Carries enough zero hooks that any supported
    /// derivative order resolves exactly.
    pub fn constant(c: f64) -> Self {
        RealFn {
            eval: Arc::new(move |_| c),
            smoothness: u32::MAX,
            exact_derivs: (0..6).map(|_| Arc::new(|_| 0.0) as EvalFn).collect(),
            diff_depth: 0,
        }
    }

    /// Attaches the exact first derivative. May be chained:
    /// `RealFn::new(f).with_deriv(f1).with_deriv(f2)` supplies f', f''.
    ///
    /// Supplying a hook asserts at least that much smoothness.
    pub fn with_deriv(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact_derivs.push(Arc::new(d));
        self.smoothness = self.smoothness.max(self.exact_derivs.len() as u32);
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    /// Number of exact derivative hooks attached.
    pub fn hooks(&self) -> usize {
        self.exact_derivs.len()
    }

    /// The `n`-th classical derivative as a new `RealFn`.
    ///
    /// Uses exact hooks as far as they reach; the remainder is filled with
    /// central differences of step `h = max(1e-5, 1e-5 |t|)`. At most two
    /// levels of differencing are ever applied in total (each level loses
    /// roughly a digit); deeper requests need exact hooks and otherwise
    /// report a precondition error.
    pub fn derivative_fn(&self, n: u32) -> Result<RealFn> {
        if n == 0 {
            return Ok(self.clone());
        }
        let hooks = self.exact_derivs.len() as u32;
        let hooked = n.min(hooks);
        let numeric = n - hooked;
        if self.diff_depth + numeric > 2 {
            return Err(Error::precondition(format!(
                "derivative of order {n} needs exact hooks: only {hooks} supplied and \
                 numerical differencing is limited to two levels"
            )));
        }
        let base: EvalFn = if hooked == 0 {
            self.eval.clone()
        } else {
            self.exact_derivs[hooked as usize - 1].clone()
        };
        let eval: EvalFn = match numeric {
            0 => base,
            1 => Arc::new(move |t| central_diff1(&base, t)),
            2 => Arc::new(move |t| central_diff2(&base, t)),
            _ => unreachable!(),
        };
        let exact_derivs = if numeric == 0 {
            self.exact_derivs[hooked as usize..].to_vec()
        } else {
            Vec::new()
        };
        Ok(RealFn {
            eval,
            smoothness: self.smoothness.saturating_sub(n),
            exact_derivs,
            diff_depth: self.diff_depth + numeric,
        })
    }

    /// Evaluates the `n`-th classical derivative at `t`.
    pub fn nth_derivative(&self, n: u32, t: f64) -> Result<f64> {
        Ok(self.derivative_fn(n)?.eval(t))
    }
}

fn diff_step(t: f64) -> f64 {
    (1e-5f64).max(1e-5 * t.abs())
}

fn central_diff1(f: &EvalFn, t: f64) -> f64 {
    let h = diff_step(t);
    (f(t + h) - f(t - h)) / (2.0 * h)
}

fn central_diff2(f: &EvalFn, t: f64) -> f64 {
    let h = diff_step(t);
    (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hooks_are_used_verbatim() {
        let f = RealFn::new(|t| t * t * t)
            .with_deriv(|t| 3.0 * t * t)
            .with_deriv(|t| 6.0 * t);
        assert_eq!(f.smoothness(), 2);
        assert_eq!(f.nth_derivative(1, 2.0).unwrap(), 12.0);
        assert_eq!(f.nth_derivative(2, 2.0).unwrap(), 12.0);
    }

    #[test]
    fn central_difference_fallback() {
        let f = RealFn::smooth(|t| t.sin(), 4);
        let d1 = f.nth_derivative(1, 1.0).unwrap();
        assert!((d1 - 1.0f64.cos()).abs() < 1e-9, "got {d1}");
        let d2 = f.nth_derivative(2, 1.0).unwrap();
        assert!((d2 + 1.0f64.sin()).abs() < 1e-5, "got {d2}");
    }

    #[test]
    fn hook_plus_one_difference() {
        let f = RealFn::new(|t| t.exp()).with_deriv(|t| t.exp());
        // f'' = d/dt hook
        let d2 = f.nth_derivative(2, 0.5).unwrap();
        assert!((d2 - 0.5f64.exp()).abs() < 1e-9, "got {d2}");
    }

    #[test]
    fn third_derivative_needs_hooks() {
        let f = RealFn::smooth(|t| t.powi(4), 10);
        assert!(matches!(
            f.nth_derivative(3, 1.0),
            Err(Error::Precondition(_))
        ));
        let g = RealFn::new(|t| t.powi(4))
            .with_deriv(|t| 4.0 * t.powi(3))
            .with_deriv(|t| 12.0 * t * t)
            .with_deriv(|t| 24.0 * t);
        assert_eq!(g.nth_derivative(3, 2.0).unwrap(), 48.0);
    }

    #[test]
    fn constant_has_zero_derivative() {
        let c = RealFn::constant(5.0);
        assert_eq!(c.eval(3.0), 5.0);
        assert_eq!(c.nth_derivative(1, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<RealFn>();
        assert_send_sync::<crate::order::FracOrder>();
        assert_send_sync::<crate::quadrature::QuadratureSpec>();
        assert_send_sync::<crate::series::FracSeries>();

        let f = RealFn::new(|t: f64| t * t);
        let handle = std::thread::spawn(move || f.eval(3.0));
        assert_eq!(handle.join().unwrap(), 9.0);
    }
}
