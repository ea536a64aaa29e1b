//! Left and right conformable fractional integrals, the Riemann–Liouville
//! comparison integral, closed-form power integrals and the Q-operator.
//!
//! With `alpha = n + beta` the left integral based at `a` is
//!
//! ```text
//! (I_alpha^a f)(t) = 1/n! * ∫_a^t (t-x)^n (x-a)^{beta-1} f(x) dx
//! ```
//!
//! and the right integral mirrors it with kernel `(x-t)^n (b-x)^{beta-1}`.
//! For `beta < 1` the weight is singular at the base point; every such
//! integral is first regularised by the monotone substitution
//! `u = (x-a)^beta / beta` (which absorbs the weight exactly) and then
//! evaluated by adaptive panel quadrature. For `beta = 1` the integrand is
//! already continuous and is integrated directly.

use crate::error::{Error, Result};
use crate::function::RealFn;
use crate::gamma::gamma;
use crate::order::FracOrder;
use crate::quadrature::{integrate, QuadratureSpec};

/// Which base point a one-sided operator hangs off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A configured weighted integral: base point, side, order and tolerances.
#[derive(Debug, Clone)]
pub struct WeightedIntegral {
    pub base: f64,
    pub side: Side,
    pub ord: FracOrder,
    pub spec: QuadratureSpec,
}

impl WeightedIntegral {
    pub fn new(base: f64, side: Side, ord: FracOrder, spec: QuadratureSpec) -> Self {
        WeightedIntegral {
            base,
            side,
            ord,
            spec,
        }
    }

    /// Applies the configured integral to `f` at `t`.
    pub fn apply(&self, f: &RealFn, t: f64) -> Result<f64> {
        match self.side {
            Side::Left => left_integral(f, self.base, self.ord, t, &self.spec),
            Side::Right => right_integral(f, self.base, self.ord, t, &self.spec),
        }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Left conformable integral `(I_alpha^a f)(t)` for `t >= a`.
pub fn left_integral(
    f: &RealFn,
    a: f64,
    ord: FracOrder,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !t.is_finite() || t < a {
        return Err(Error::domain(format!(
            "left integral needs t >= a, got t = {t}, a = {a}"
        )));
    }
    if t == a {
        return Ok(0.0);
    }
    let n = ord.n() as i32;
    let beta = ord.beta();
    let nf = factorial(ord.n());
    if beta == 1.0 {
        let v = integrate(|x| (t - x).powi(n) * f.eval(x), a, t, spec)?;
        return Ok(v / nf);
    }
    let upper = (t - a).powf(beta) / beta;
    let inv = 1.0 / beta;
    let v = integrate(
        |u| {
            let r = (beta * u).powf(inv);
            (t - a - r).powi(n) * f.eval(a + r)
        },
        0.0,
        upper,
        spec,
    )?;
    Ok(v / nf)
}

/// Right conformable integral `(^b I_alpha f)(t)` for `t <= b`.
pub fn right_integral(
    f: &RealFn,
    b: f64,
    ord: FracOrder,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !t.is_finite() || t > b {
        return Err(Error::domain(format!(
            "right integral needs t <= b, got t = {t}, b = {b}"
        )));
    }
    if t == b {
        return Ok(0.0);
    }
    let n = ord.n() as i32;
    let beta = ord.beta();
    let nf = factorial(ord.n());
    if beta == 1.0 {
        let v = integrate(|x| (x - t).powi(n) * f.eval(x), t, b, spec)?;
        return Ok(v / nf);
    }
    let upper = (b - t).powf(beta) / beta;
    let inv = 1.0 / beta;
    let v = integrate(
        |u| {
            let r = (beta * u).powf(inv);
            (b - r - t).powi(n) * f.eval(b - r)
        },
        0.0,
        upper,
        spec,
    )?;
    Ok(v / nf)
}

/// Left Riemann–Liouville integral of order `alpha > 0`:
/// `1/Gamma(alpha) ∫_a^t (t-s)^{alpha-1} f(s) ds`.
///
/// For `alpha < 1` the kernel singularity at `s = t` is removed by
/// `u = (t-s)^alpha / alpha`; for `alpha >= 1` the integrand is continuous
/// and integrated directly. Coincides with [`left_integral`] at natural
/// orders `alpha = n + 1`.
pub fn rl_integral(f: &RealFn, a: f64, alpha: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::domain(format!(
            "Riemann–Liouville order must be positive, got {alpha}"
        )));
    }
    if !t.is_finite() || t < a {
        return Err(Error::domain(format!(
            "Riemann–Liouville integral needs t >= a, got t = {t}, a = {a}"
        )));
    }
    if t == a {
        return Ok(0.0);
    }
    let g = gamma(alpha);
    if alpha >= 1.0 {
        let v = integrate(|s| (t - s).powf(alpha - 1.0) * f.eval(s), a, t, spec)?;
        return Ok(v / g);
    }
    let upper = (t - a).powf(alpha) / alpha;
    let inv = 1.0 / alpha;
    let v = integrate(|u| f.eval(t - (alpha * u).powf(inv)), 0.0, upper, spec)?;
    Ok(v / g)
}

/// Closed form of the conformable integral of a pure power.
///
/// For the left side this is the order-`alpha` integral of `(x-a)^mu`,
/// equal to `Gamma(alpha+mu-n) / Gamma(alpha+mu+1) * (x-a)^{alpha+mu}`;
/// the right side mirrors with `(b-x)`. Requires `alpha + mu - n > 0`.
pub fn power_integral_closed(
    mu: f64,
    ord: FracOrder,
    base: f64,
    side: Side,
    x: f64,
) -> Result<f64> {
    let hypothesis = ord.alpha() + mu - ord.n() as f64;
    if hypothesis.is_nan() || hypothesis <= 0.0 {
        return Err(Error::domain(format!(
            "power integral needs alpha + mu - n > 0, got {hypothesis}"
        )));
    }
    let dist = match side {
        Side::Left => x - base,
        Side::Right => base - x,
    };
    if dist < 0.0 {
        return Err(Error::domain(
            "evaluation point lies on the wrong side of the base point",
        ));
    }
    let coeff = gamma(ord.alpha() + mu - ord.n() as f64) / gamma(ord.alpha() + mu + 1.0);
    Ok(coeff * dist.powf(ord.alpha() + mu))
}

/// The reflection `Q f = x -> f(a + b - x)`, which swaps the roles of the
/// left and right integrals. Derivative hooks are reflected with the
/// alternating sign of the chain rule.
pub fn q_reflect(f: &RealFn, a: f64, b: f64) -> RealFn {
    let inner = f.clone();
    let mut out = RealFn::smooth(move |x| inner.eval(a + b - x), f.smoothness());
    for k in 1..=f.hooks() as u32 {
        let d = f.derivative_fn(k).expect("hook within range");
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        out = out.with_deriv(move |x| sign * d.eval(a + b - x));
    }
    out
}

/// Residual of the semigroup identity for compositions based at 0:
///
/// ```text
/// ∫_0^t (I_alpha f)(t1) t1^{mu-1} dt1
///   = t^mu/mu (I_alpha f)(t) + 1/mu (I_{alpha+mu} f)(t)
///     - t/mu ∫_0^t s^{alpha+mu-2} f(s) ds
/// ```
///
/// valid for `0 < alpha, mu <= 1` with `1 < alpha + mu <= 2`. Every term is
/// evaluated by an independent quadrature; a near-zero return certifies the
/// identity at `t`.
pub fn semigroup_residual(
    f: &RealFn,
    alpha: f64,
    mu: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let a_ord = FracOrder::basic(alpha)?;
    let m_ord = FracOrder::basic(mu)?;
    let total = alpha + mu;
    if !(total > 1.0 && total <= 2.0) {
        return Err(Error::domain(format!(
            "semigroup identity needs 1 < alpha + mu <= 2, got {total}"
        )));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain(
            "semigroup identity is based at 0, needs t >= 0",
        ));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let inner = {
        let f = f.clone();
        let spec = *spec;
        RealFn::new(move |t1| left_integral(&f, 0.0, a_ord, t1, &spec).unwrap_or(f64::NAN))
    };
    let lhs = left_integral(&inner, 0.0, m_ord, t, spec)?;

    let i_alpha = left_integral(f, 0.0, a_ord, t, spec)?;
    let i_total = left_integral(f, 0.0, FracOrder::new(total)?, t, spec)?;
    // ∫_0^t s^{alpha+mu-2} f ds is the order-(alpha+mu-1) weight integral.
    let j = left_integral(f, 0.0, FracOrder::basic(total - 1.0)?, t, spec)?;
    let rhs = t.powf(mu) / mu * i_alpha + i_total / mu - t / mu * j;
    let residual = lhs - rhs;
    if !residual.is_finite() {
        return Err(Error::convergence("semigroup residual is non-finite"));
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn left_integral_worked_values() {
        let one = RealFn::constant(1.0);
        let half = FracOrder::new(0.5).unwrap();
        // t^alpha / alpha at t = 1.
        let v = left_integral(&one, 0.0, half, 1.0, &spec()).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "got {v}");

        // Gamma(1.5)/Gamma(2.5) = 2/3 for f(x) = x.
        let id = RealFn::new(|x| x);
        let v = left_integral(&id, 0.0, half, 1.0, &spec()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10, "got {v}");

        // Integer order 2 is the iterated classical integral.
        let two = FracOrder::new(2.0).unwrap();
        let v = left_integral(&one, 0.0, two, 2.0, &spec()).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "got {v}");

        assert_eq!(left_integral(&one, 0.0, half, 0.0, &spec()).unwrap(), 0.0);
        assert!(matches!(
            left_integral(&one, 0.0, half, -1.0, &spec()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn right_integral_worked_values() {
        let one = RealFn::constant(1.0);
        let half = FracOrder::new(0.5).unwrap();
        let v = right_integral(&one, 1.0, half, 0.0, &spec()).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "got {v}");

        let f = RealFn::new(|x: f64| 1.0 - x);
        let v = right_integral(&f, 1.0, half, 0.0, &spec()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10, "got {v}");

        // alpha = 1 is the classical integral from t to b.
        let id = RealFn::new(|x| x);
        let one_ord = FracOrder::new(1.0).unwrap();
        let v = right_integral(&id, 2.0, one_ord, 1.0, &spec()).unwrap();
        assert!((v - 1.5).abs() < 1e-11, "got {v}");

        assert!(matches!(
            right_integral(&one, 1.0, half, 2.0, &spec()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn riemann_liouville_worked_values() {
        let one = RealFn::constant(1.0);
        let v = rl_integral(&one, 0.5, 1.0, 2.5, &spec()).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "got {v}");

        // Order 1/2 of s^(mu-1) with mu = 2: Gamma(2)/Gamma(2.5).
        let id = RealFn::new(|s| s);
        let v = rl_integral(&id, 0.0, 0.5, 1.0, &spec()).unwrap();
        let want = 1.0 / gamma(2.5);
        assert!((v - want).abs() < 1e-10, "got {v}, want {want}");

        assert!(rl_integral(&one, 0.0, 0.0, 1.0, &spec()).is_err());
        assert!(rl_integral(&one, 0.0, -0.5, 1.0, &spec()).is_err());
    }

    #[test]
    fn power_integral_closed_forms() {
        // mu = 0, alpha = 1/2: x^{1/2}/(1/2) = 4 at x = 4.
        let v =
            power_integral_closed(0.0, FracOrder::new(0.5).unwrap(), 0.0, Side::Left, 4.0).unwrap();
        assert!((v - 4.0).abs() < 1e-12, "got {v}");

        // mu = 1, alpha = 1/2: Gamma(1.5)/Gamma(2.5) = 2/3 at x = 1.
        let v =
            power_integral_closed(1.0, FracOrder::new(0.5).unwrap(), 0.0, Side::Left, 1.0).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-13, "got {v}");

        // mu = 1, alpha = 1.5: Gamma(1.5)/Gamma(3.5) = 4/15 at x = 1, and
        // the quadrature agrees.
        let ord = FracOrder::new(1.5).unwrap();
        let v = power_integral_closed(1.0, ord, 0.0, Side::Left, 1.0).unwrap();
        assert!((v - 4.0 / 15.0).abs() < 1e-13, "got {v}");
        let f = RealFn::new(|x| x);
        let by_quad = left_integral(&f, 0.0, ord, 1.0, &spec()).unwrap();
        assert!((by_quad - v).abs() < 1e-10, "quad {by_quad} vs closed {v}");

        // Right side mirrors with (b - x).
        let v = power_integral_closed(0.0, FracOrder::new(0.5).unwrap(), 1.0, Side::Right, 0.0)
            .unwrap();
        assert!((v - 2.0).abs() < 1e-13);

        // Hypothesis alpha + mu - n > 0 is enforced.
        assert!(matches!(
            power_integral_closed(-0.6, FracOrder::new(1.5).unwrap(), 0.0, Side::Left, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn weighted_integral_dispatches_both_sides() {
        let one = RealFn::constant(1.0);
        let half = FracOrder::new(0.5).unwrap();
        let left = WeightedIntegral::new(0.0, Side::Left, half, spec());
        assert!((left.apply(&one, 1.0).unwrap() - 2.0).abs() < 1e-10);
        let right = WeightedIntegral::new(1.0, Side::Right, half, spec());
        assert!((right.apply(&one, 0.0).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn reflection_examples() {
        let id = RealFn::new(|x| x).with_deriv(|_| 1.0);
        let q = q_reflect(&id, 0.0, 1.0);
        assert_eq!(q.eval(0.25), 0.75);
        // Reflected first derivative flips sign.
        assert_eq!(q.nth_derivative(1, 0.25).unwrap(), -1.0);
    }

    #[test]
    fn semigroup_validation() {
        let one = RealFn::constant(1.0);
        // Orders must satisfy 1 < alpha + mu <= 2.
        assert!(semigroup_residual(&one, 0.3, 0.3, 1.0, &spec()).is_err());
        assert!(semigroup_residual(&one, 1.0, 1.2, 1.0, &spec()).is_err());
        assert!(semigroup_residual(&one, 0.6, 0.7, -1.0, &spec()).is_err());
        assert_eq!(
            semigroup_residual(&one, 0.6, 0.7, 0.0, &spec()).unwrap(),
            0.0
        );
        // The alpha, mu -> 1 case: both sides are t^2/2.
        let r = semigroup_residual(&one, 1.0, 1.0, 2.0, &spec()).unwrap();
        assert!(r.abs() < 1e-10, "got {r}");
    }
}
