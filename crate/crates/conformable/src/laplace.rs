//! Fractional Laplace transform of order `alpha`.
//!
//! The transform of `f` starting at `t0` is
//!
//! ```text
//! F_alpha(s) = ∫_{t0}^∞ e^{-s (t-t0)^alpha / alpha} f(t) (t-t0)^{alpha-1} dt
//! ```
//!
//! The substitution `u = (t-t0)^alpha / alpha` absorbs the weight exactly
//! and turns this into the classical transform of
//! `u -> f(t0 + (alpha u)^{1/alpha})`, which is how the numeric evaluator
//! works: fixed-length panels in `u`, summed until a panel's magnitude
//! drops below the absolute tolerance, plus a geometric tail estimate.

use crate::error::{Error, Result};
use crate::function::RealFn;
use crate::gamma::gamma;
use crate::order::FracOrder;
use crate::quadrature::{integrate, KahanSum, QuadratureSpec};

/// A transform evaluation request.
///
/// `tail_bound` is the caller-asserted growth constant `c` with
/// `|f(t0 + (alpha u)^{1/alpha})| <= C e^{c u}`; the integral converges for
/// `s > c` and the query is rejected otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformQuery {
    pub t0: f64,
    pub alpha: f64,
    pub s: f64,
    pub tail_bound: f64,
}

impl TransformQuery {
    pub fn new(t0: f64, alpha: f64, s: f64, tail_bound: f64) -> Result<Self> {
        FracOrder::basic(alpha)?;
        if !s.is_finite() || !tail_bound.is_finite() {
            return Err(Error::domain(
                "transform variable and tail bound must be finite",
            ));
        }
        let q = TransformQuery {
            t0,
            alpha,
            s,
            tail_bound,
        };
        q.check_convergence()?;
        Ok(q)
    }

    fn check_convergence(&self) -> Result<()> {
        if self.s <= self.tail_bound {
            return Err(Error::Divergence(format!(
                "transform diverges for s = {} <= tail bound {}",
                self.s, self.tail_bound
            )));
        }
        Ok(())
    }
}

/// Numeric fractional Laplace transform via the substitution
/// `u = (t-t0)^alpha / alpha`.
pub fn laplace_numeric(f: &RealFn, q: &TransformQuery, spec: &QuadratureSpec) -> Result<f64> {
    FracOrder::basic(q.alpha)?;
    q.check_convergence()?;
    spec.validate()?;
    let inv = 1.0 / q.alpha;
    let g = |u: f64| f.eval(q.t0 + (q.alpha * u).powf(inv));

    // Panels of fixed length in u; the integrand decays at least like
    // e^{-(s-c) u}, so successive panels shrink by r = e^{-5} and the tail
    // beyond the last computed panel is a geometric series.
    let decay = q.s - q.tail_bound;
    let len = 5.0 / decay;
    let ratio = (-decay * len).exp();
    let mut acc = KahanSum::new();
    let mut start = 0.0;
    let mut converged = false;
    for _ in 0..10_000 {
        let panel = integrate(|u| (-q.s * u).exp() * g(u), start, start + len, spec)?;
        acc.add(panel);
        if panel.abs() < spec.abs_tol {
            acc.add(panel * ratio / (1.0 - ratio));
            converged = true;
            break;
        }
        start += len;
    }
    if !converged {
        return Err(Error::Accuracy {
            requested: spec.abs_tol,
            achieved: f64::NAN,
        });
    }
    let v = acc.value();
    if !v.is_finite() {
        return Err(Error::convergence(
            "transform integrand produced non-finite values",
        ));
    }
    Ok(v)
}

/// Entries of the closed-form transform table.
///
/// Each entry states the region of `s` it is valid on; outside that region
/// a domain error is reported.
#[derive(Debug, Clone, PartialEq)]
pub enum TableKind {
    /// `f = 1`: `1/s`, `s > 0`.
    One,
    /// `f(t) = t`: `t0/s + alpha^{1/alpha} Gamma(1 + 1/alpha) / s^{1 + 1/alpha}`, `s > 0`.
    Time,
    /// `f(t) = t^p` based at `t0 = 0`:
    /// `alpha^{p/alpha} Gamma(1 + p/alpha) / s^{1 + p/alpha}`, `s > 0`, `p > -alpha`.
    TimePow { p: f64 },
    /// `f(t) = e^{lambda (t-t0)^alpha / alpha}`: `1/(s - lambda)`, `s > lambda`.
    FracExp { lambda: f64 },
    /// `f(t) = sin(omega (t-t0)^alpha / alpha)`: `omega / (s^2 + omega^2)`, `s > 0`.
    FracSin { omega: f64 },
    /// `f(t) = cos(omega (t-t0)^alpha / alpha)`: `s / (s^2 + omega^2)`, `s > 0`.
    FracCos { omega: f64 },
    /// `f(t) = e^{-k (t-t0)^alpha / alpha} g(t)`: the inner entry shifted
    /// to `s + k`.
    Damped { k: f64, inner: Box<TableKind> },
}

impl TableKind {
    /// Infimum of the region of validity in `s` (exclusive), which doubles
    /// as the growth constant of the transformed function.
    pub fn region_bound(&self) -> f64 {
        match self {
            TableKind::One | TableKind::Time | TableKind::TimePow { .. } => 0.0,
            TableKind::FracExp { lambda } => *lambda,
            TableKind::FracSin { .. } | TableKind::FracCos { .. } => 0.0,
            TableKind::Damped { k, inner } => inner.region_bound() - k,
        }
    }

    /// The time-domain function this entry transforms, with derivative
    /// hooks where they are cheap, plus the growth constant to use as
    /// `tail_bound` in a [`TransformQuery`].
    pub fn time_function(&self, t0: f64, alpha: f64) -> (RealFn, f64) {
        let f = self.build_fn(t0, alpha);
        (f, self.region_bound())
    }

    fn build_fn(&self, t0: f64, alpha: f64) -> RealFn {
        match self {
            TableKind::One => RealFn::constant(1.0),
            TableKind::Time => RealFn::new(|t| t).with_deriv(|_| 1.0),
            TableKind::TimePow { p } => {
                let p = *p;
                RealFn::new(move |t| t.powf(p))
            }
            TableKind::FracExp { lambda } => {
                let l = *lambda;
                RealFn::new(move |t| (l * (t - t0).powf(alpha) / alpha).exp())
            }
            TableKind::FracSin { omega } => {
                let w = *omega;
                RealFn::new(move |t| (w * (t - t0).powf(alpha) / alpha).sin())
            }
            TableKind::FracCos { omega } => {
                let w = *omega;
                RealFn::new(move |t| (w * (t - t0).powf(alpha) / alpha).cos())
            }
            TableKind::Damped { k, inner } => {
                let k = *k;
                let g = inner.build_fn(t0, alpha);
                RealFn::new(move |t| (-k * (t - t0).powf(alpha) / alpha).exp() * g.eval(t))
            }
        }
    }
}

/// Closed-form transform of a table entry.
pub fn laplace_table(kind: &TableKind, t0: f64, alpha: f64, s: f64) -> Result<f64> {
    FracOrder::basic(alpha)?;
    match kind {
        TableKind::One => {
            require_region(s, 0.0, "1")?;
            Ok(1.0 / s)
        }
        TableKind::Time => {
            require_region(s, 0.0, "t")?;
            let inv = 1.0 / alpha;
            Ok(t0 / s + alpha.powf(inv) * gamma(1.0 + inv) / s.powf(1.0 + inv))
        }
        TableKind::TimePow { p } => {
            require_region(s, 0.0, "t^p")?;
            if t0 != 0.0 {
                return Err(Error::domain("the t^p entry is tabulated for t0 = 0 only"));
            }
            if *p <= -alpha {
                return Err(Error::domain(format!(
                    "t^p needs p > -alpha for integrability, got p = {p}, alpha = {alpha}"
                )));
            }
            let q = p / alpha;
            Ok(alpha.powf(q) * gamma(1.0 + q) / s.powf(1.0 + q))
        }
        TableKind::FracExp { lambda } => {
            require_region(s, *lambda, "fractional exponential")?;
            Ok(1.0 / (s - lambda))
        }
        TableKind::FracSin { omega } => {
            require_region(s, 0.0, "fractional sine")?;
            Ok(omega / (s * s + omega * omega))
        }
        TableKind::FracCos { omega } => {
            require_region(s, 0.0, "fractional cosine")?;
            Ok(s / (s * s + omega * omega))
        }
        TableKind::Damped { k, inner } => laplace_table(inner, t0, alpha, s + k),
    }
}

fn require_region(s: f64, bound: f64, what: &str) -> Result<()> {
    if s <= bound {
        return Err(Error::domain(format!(
            "transform of {what} is valid for s > {bound}, got s = {s}"
        )));
    }
    Ok(())
}

/// Transform-domain image of the conformable derivative:
/// `L{T_alpha f}(s) = s F(s) - f(a)`.
pub fn laplace_of_deriv(f_transform: f64, f_at_a: f64, s: f64) -> f64 {
    s * f_transform - f_at_a
}
