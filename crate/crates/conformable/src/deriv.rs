//! Left and right conformable fractional derivatives.
//!
//! For `0 < alpha <= 1` the left derivative based at `a` is the limit of
//! `(f(t + eps (t-a)^{1-alpha}) - f(t)) / eps` as `eps -> 0`; when `f` is
//! differentiable this collapses to `(t-a)^{1-alpha} f'(t)`. Orders above 1
//! are handled through the decomposition `alpha = n + beta`: differentiate
//! classically `n` times, then apply the order-`beta` operator. Right-sided
//! operators mirror these from the terminal point `b` with a sign per
//! classical derivative.
//!
//! Values *at* the base point are defined as one-sided limits and are
//! always computed that way: the operator is evaluated on a geometrically
//! shrinking sequence of interior points and the sequence is extrapolated.

use crate::error::{Error, Result};
use crate::function::RealFn;
use crate::order::FracOrder;

/// How a basic (order <= 1) derivative is evaluated at interior points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivMode {
    /// Evaluate the defining difference quotient on a shrinking sequence of
    /// steps and Richardson-extrapolate. Needs nothing but `eval`.
    LimitQuotient,
    /// Use `(t-a)^{1-alpha} f'(t)` with `f'` from an exact hook or a
    /// central difference. Preferred when the derivative is available.
    ReductionFormula,
}

/// Evaluation strategy for the basic derivative operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivBackend {
    pub mode: DerivMode,
    /// Initial step of the quotient sequence (limit mode).
    pub step0: f64,
    /// Richardson table depth (limit mode), at most 8.
    pub richardson_levels: u32,
}

impl Default for DerivBackend {
    fn default() -> Self {
        DerivBackend {
            mode: DerivMode::ReductionFormula,
            step0: 1e-2,
            richardson_levels: 5,
        }
    }
}

impl DerivBackend {
    pub fn limit_quotient() -> Self {
        DerivBackend {
            mode: DerivMode::LimitQuotient,
            ..DerivBackend::default()
        }
    }

    pub fn reduction() -> Self {
        DerivBackend::default()
    }

    fn validate(&self) -> Result<()> {
        if !(self.step0 > 0.0 && self.step0 < 1.0) {
            return Err(Error::domain("step0 must lie in (0, 1)"));
        }
        if self.richardson_levels == 0 || self.richardson_levels > 8 {
            return Err(Error::domain("richardson_levels must lie in 1..=8"));
        }
        Ok(())
    }
}

/// Left conformable derivative `T_alpha^a f` at `t >= a`, order in (0, 1].
///
/// At `t = a` the value is the right limit, computed by extrapolating the
/// operator along a shrinking sequence of interior points; if the
/// extrapolants keep disagreeing the operation reports a convergence error.
pub fn left_deriv(
    f: &RealFn,
    a: f64,
    ord: FracOrder,
    t: f64,
    backend: &DerivBackend,
) -> Result<f64> {
    backend.validate()?;
    require_basic(ord, "left_deriv")?;
    if !t.is_finite() || t < a {
        return Err(Error::domain(format!(
            "left derivative needs t >= a, got t = {t}, a = {a}"
        )));
    }
    if t == a {
        return endpoint_limit(|h| left_interior(f, a, ord.alpha(), a + h, backend));
    }
    left_interior(f, a, ord.alpha(), t, backend)
}

fn left_interior(f: &RealFn, a: f64, alpha: f64, t: f64, backend: &DerivBackend) -> Result<f64> {
    let w = (t - a).powf(1.0 - alpha);
    match backend.mode {
        DerivMode::ReductionFormula => Ok(w * f.nth_derivative(1, t)?),
        DerivMode::LimitQuotient => {
            let f0 = f.eval(t);
            Ok(richardson_quotient(
                |eps| (f.eval(t + eps * w) - f0) / eps,
                backend.step0,
                backend.richardson_levels,
            ))
        }
    }
}

/// Right conformable derivative terminating at `b`, order in (0, 1], `t <= b`.
///
/// For differentiable `f` this is `-(b-t)^{1-alpha} f'(t)`; at `t = b` the
/// left limit is taken.
pub fn right_deriv(
    f: &RealFn,
    b: f64,
    ord: FracOrder,
    t: f64,
    backend: &DerivBackend,
) -> Result<f64> {
    backend.validate()?;
    require_basic(ord, "right_deriv")?;
    if !t.is_finite() || t > b {
        return Err(Error::domain(format!(
            "right derivative needs t <= b, got t = {t}, b = {b}"
        )));
    }
    if t == b {
        return endpoint_limit(|h| right_interior(f, b, ord.alpha(), b - h, backend));
    }
    right_interior(f, b, ord.alpha(), t, backend)
}

fn right_interior(f: &RealFn, b: f64, alpha: f64, t: f64, backend: &DerivBackend) -> Result<f64> {
    let w = (b - t).powf(1.0 - alpha);
    match backend.mode {
        DerivMode::ReductionFormula => Ok(-w * f.nth_derivative(1, t)?),
        DerivMode::LimitQuotient => {
            let f0 = f.eval(t);
            Ok(-richardson_quotient(
                |eps| (f.eval(t + eps * w) - f0) / eps,
                backend.step0,
                backend.richardson_levels,
            ))
        }
    }
}

/// Left derivative of arbitrary positive order: with `alpha = n + beta`,
/// applies the order-`beta` operator to the `n`-th classical derivative.
///
/// `f` must declare smoothness at least `n`. The classical derivative comes
/// from exact hooks when supplied, otherwise from central differences
/// (limited to two levels). At `t = a` the value is the extrapolated right
/// limit, which vanishes for fractional orders and smooth `f`.
pub fn higher_left_deriv(f: &RealFn, a: f64, ord: FracOrder, t: f64) -> Result<f64> {
    if f.smoothness() < ord.n() {
        return Err(Error::precondition(format!(
            "order {} needs {} classical derivatives, declared smoothness is {}",
            ord.alpha(),
            ord.n(),
            f.smoothness()
        )));
    }
    let g = f.derivative_fn(ord.n())?;
    let beta = FracOrder::new(ord.beta())?;
    let backend = backend_for(&g);
    left_deriv(&g, a, beta, t, &backend)
}

/// Right-sided mirror of [`higher_left_deriv`].
///
/// Each application of the right operator carries one classical sign flip,
/// so the order-`alpha` operator is `(-1)^n` times the order-`beta` right
/// derivative of `f^(n)`: at `alpha = n + 1` it reduces to
/// `(-1)^{n+1} f^{(n+1)}`, the (n+1)-fold mirror of `-f'`.
pub fn higher_right_deriv(f: &RealFn, b: f64, ord: FracOrder, t: f64) -> Result<f64> {
    if f.smoothness() < ord.n() {
        return Err(Error::precondition(format!(
            "order {} needs {} classical derivatives, declared smoothness is {}",
            ord.alpha(),
            ord.n(),
            f.smoothness()
        )));
    }
    let g = f.derivative_fn(ord.n())?;
    let beta = FracOrder::new(ord.beta())?;
    let backend = backend_for(&g);
    let v = right_deriv(&g, b, beta, t, &backend)?;
    Ok(if ord.n().is_multiple_of(2) { v } else { -v })
}

// Reduction needs one more derivative of g; fall back to the defining
// quotient when that derivative cannot be produced.
fn backend_for(g: &RealFn) -> DerivBackend {
    if g.derivative_fn(1).is_ok() {
        DerivBackend::reduction()
    } else {
        DerivBackend::limit_quotient()
    }
}

/// `count`-fold composition of the order-`alpha` left derivative
/// (`0 < alpha <= 1`).
///
/// Interior points use the expansion obtained by iterating the product
/// rule: `T^(k) f = sum_j c_{k,j} (t-a)^{j - k alpha} f^(j)` with
/// `c_{k+1,j} = (j - k alpha) c_{k,j} + c_{k,j-1}`. For `count = 2` this is
/// `(1-alpha)(t-a)^{1-2 alpha} f' + (t-a)^{2-2 alpha} f''`.
///
/// At `t = a`: when `alpha <= 1/count` (and the declared smoothness covers
/// `count`) the value is 0 — the composition is continuous and vanishes at
/// the base point; otherwise the right limit is extrapolated and a
/// convergence error is reported if it diverges.
pub fn sequential_left_deriv(f: &RealFn, a: f64, alpha: f64, count: u32, t: f64) -> Result<f64> {
    let _ = FracOrder::basic(alpha)?;
    if count == 0 {
        return Err(Error::domain("sequential derivative needs count >= 1"));
    }
    if f.smoothness() < count {
        return Err(Error::precondition(format!(
            "sequential derivative of order {count} needs declared smoothness >= {count}, got {}",
            f.smoothness()
        )));
    }
    if !t.is_finite() || t < a {
        return Err(Error::domain(format!(
            "sequential derivative needs t >= a, got t = {t}, a = {a}"
        )));
    }
    if t == a {
        // The vanishing rule is about genuine compositions: the k-fold
        // operator with alpha <= 1/k is continuous and zero at the base
        // point. A single application at alpha = 1 is the classical
        // derivative, so count = 1 always takes the limit path.
        if count >= 2 && alpha <= 1.0 / count as f64 {
            return Ok(0.0);
        }
        return endpoint_limit(|h| sequential_interior(f, a, alpha, count, a + h));
    }
    sequential_interior(f, a, alpha, count, t)
}

pub(crate) fn sequential_interior(
    f: &RealFn,
    a: f64,
    alpha: f64,
    count: u32,
    t: f64,
) -> Result<f64> {
    let coeffs = sequential_coefficients(alpha, count);
    let x = t - a;
    let mut acc = 0.0;
    for (j, c) in coeffs.iter().enumerate().skip(1) {
        if *c == 0.0 {
            continue;
        }
        let expo = j as f64 - count as f64 * alpha;
        acc += c * x.powf(expo) * f.nth_derivative(j as u32, t)?;
    }
    Ok(acc)
}

// c[j] multiplies (t-a)^{j - count*alpha} f^(j); index 0 is unused.
fn sequential_coefficients(alpha: f64, count: u32) -> Vec<f64> {
    let mut c = vec![0.0; count as usize + 1];
    c[1] = 1.0;
    for k in 1..count {
        let mut next = vec![0.0; count as usize + 1];
        for j in 1..=(k as usize) {
            next[j] += (j as f64 - k as f64 * alpha) * c[j];
            next[j + 1] += c[j];
        }
        c = next;
    }
    c
}

/// Chain-rule evaluation of `T_alpha^a (f o g)` at `t`:
/// `(T_alpha^a f)(g(t)) * (T_alpha^a g)(t) * g(t)^{alpha-1}`.
///
/// The formula requires `g(t) != 0`; for fractional `alpha` it also
/// requires `g(t) > 0` (a real power of a negative base is undefined) and
/// `g(t) >= a` so the outer derivative is defined where it is evaluated.
/// At `t = a` the right limit of the product is taken.
pub fn chain_deriv(f: &RealFn, g: &RealFn, a: f64, alpha: f64, t: f64) -> Result<f64> {
    let ord = FracOrder::basic(alpha)?;
    if !t.is_finite() || t < a {
        return Err(Error::domain(format!(
            "chain rule needs t >= a, got t = {t}, a = {a}"
        )));
    }
    if t == a {
        return endpoint_limit(|h| chain_interior(f, g, a, ord, a + h));
    }
    chain_interior(f, g, a, ord, t)
}

fn chain_interior(f: &RealFn, g: &RealFn, a: f64, ord: FracOrder, t: f64) -> Result<f64> {
    let gt = g.eval(t);
    if gt == 0.0 {
        return Err(Error::Singularity(format!(
            "chain rule is singular where g vanishes (g({t}) = 0)"
        )));
    }
    if gt < 0.0 && ord.alpha() < 1.0 {
        return Err(Error::domain(format!(
            "g({t}) = {gt} < 0: g(t)^(alpha-1) is not real for fractional alpha"
        )));
    }
    if gt < a {
        return Err(Error::domain(format!(
            "g({t}) = {gt} lies left of the base point {a}"
        )));
    }
    let backend_f = backend_for(f);
    let backend_g = backend_for(g);
    let outer = left_deriv(f, a, ord, gt, &backend_f)?;
    let inner = left_deriv(g, a, ord, t, &backend_g)?;
    Ok(outer * inner * gt.powf(ord.alpha() - 1.0))
}

/// Richardson extrapolation of a one-sided difference quotient sampled at
/// `eps_k = step0 * 2^-k`. The quotient has a full expansion in powers of
/// `eps`, so each table column removes one order.
fn richardson_quotient(q: impl Fn(f64) -> f64, step0: f64, levels: u32) -> f64 {
    let m = levels as usize;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let eps = step0 * 0.5f64.powi(k as i32);
        let mut row = vec![q(eps)];
        for j in 1..=k {
            let factor = 2f64.powi(j as i32);
            let improved = (factor * row[j - 1] - rows[k - 1][j - 1]) / (factor - 1.0);
            row.push(improved);
        }
        rows.push(row);
    }
    rows[m][m]
}

/// Extrapolates `g(h)` as `h -> 0+` along `h_k = h0 * q^k` with iterated
/// Aitken transforms. Reports a convergence error when the tail of the
/// accelerated sequence still moves.
pub(crate) fn endpoint_limit(g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    const H0: f64 = 0.4;
    const Q: f64 = 0.6;
    const TERMS: usize = 18;

    let mut seq = Vec::with_capacity(TERMS);
    let mut h = H0;
    for _ in 0..TERMS {
        let v = g(h)?;
        if !v.is_finite() {
            return Err(Error::convergence(
                "endpoint sequence produced non-finite values",
            ));
        }
        seq.push(v);
        h *= Q;
    }
    // Iterated Aitken delta-squared.
    let mut cur = seq;
    for _ in 0..4 {
        if cur.len() < 3 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 2);
        for i in 0..cur.len() - 2 {
            let (x0, x1, x2) = (cur[i], cur[i + 1], cur[i + 2]);
            let denom = (x2 - x1) - (x1 - x0);
            if denom == 0.0 {
                next.push(x2);
            } else {
                next.push(x2 - (x2 - x1) * (x2 - x1) / denom);
            }
        }
        cur = next;
    }
    let last = *cur.last().expect("nonempty extrapolation sequence");
    let prev = cur[cur.len().saturating_sub(2)];
    let scale = 1.0 + last.abs();
    if !(last.is_finite() && prev.is_finite()) || (last - prev).abs() > 1e-6 * scale {
        return Err(Error::convergence(format!(
            "extrapolants still differ by {:.3e}",
            (last - prev).abs()
        )));
    }
    Ok(last)
}

fn require_basic(ord: FracOrder, what: &str) -> Result<()> {
    if ord.n() != 0 {
        return Err(Error::precondition(format!(
            "{what} handles orders in (0, 1]; use the higher-order operator for alpha = {}",
            ord.alpha()
        )));
    }
    Ok(())
}
