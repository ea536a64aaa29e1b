//! Fractional power series `sum_k c_k (t - t0)^{k alpha}`.
//!
//! Functions that fail to be classically differentiable at `t0` (the
//! fractional exponential `e^{(t-t0)^alpha / alpha}` being the canonical
//! example) still admit expansions of this form. Coefficients are stored
//! per power slot `k`, explicit zeros included, so term-by-term
//! differentiation is plain slot arithmetic.

use crate::deriv::{endpoint_limit, sequential_interior};
use crate::error::{Error, Result};
use crate::function::RealFn;
use crate::order::FracOrder;
use crate::quadrature::KahanSum;

/// A truncated fractional power series around `t0` with exponent step
/// `alpha`, valid on `[t0, t0 + radius)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracSeries {
    t0: f64,
    alpha: f64,
    coeffs: Vec<f64>,
    radius: f64,
}

/// The built-in expansions with closed-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// `e^{(t-t0)^alpha / alpha}`: slot `k` carries `1 / (alpha^k k!)`.
    FracExp,
    /// `sin((t-t0)^alpha / alpha)`: odd slots `(-1)^k / (alpha^{2k+1} (2k+1)!)`.
    FracSin,
    /// `cos((t-t0)^alpha / alpha)`: even slots `(-1)^k / (alpha^{2k} (2k)!)`.
    FracCos,
    /// `1 / (1 - (t-t0)^alpha / alpha)`: slot `k` carries `alpha^{-k}`,
    /// valid while `(t-t0)^alpha / alpha < 1`.
    FracGeom,
}

impl FracSeries {
    /// Assembles a series from raw slot coefficients.
    pub fn from_coeffs(t0: f64, alpha: f64, coeffs: Vec<f64>, radius: f64) -> Result<Self> {
        FracOrder::basic(alpha)?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("series coefficients must be finite"));
        }
        if radius < 0.0 || radius.is_nan() {
            return Err(Error::domain("series radius must be >= 0 (or +inf)"));
        }
        Ok(FracSeries {
            t0,
            alpha,
            coeffs,
            radius,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Validity radius in the `t` variable (`+inf` when entire).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Highest stored slot index.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Term-by-term conformable derivative: slot `k` maps to slot `k-1`
    /// with factor `k alpha`, since `T_alpha (t-t0)^{k alpha} =
    /// k alpha (t-t0)^{(k-1) alpha}`.
    pub fn deriv_term_by_term(&self) -> FracSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64 * self.alpha)
            .collect();
        FracSeries {
            t0: self.t0,
            alpha: self.alpha,
            coeffs,
            radius: self.radius,
        }
    }

    /// Plain text form: header `t0 alpha K radius`, then one coefficient
    /// per line, shortest round-trip decimals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let radius = if self.radius.is_infinite() {
            "inf".to_string()
        } else {
            format!("{}", self.radius)
        };
        out.push_str(&format!(
            "{} {} {} {}\n",
            self.t0,
            self.alpha,
            self.degree(),
            radius
        ));
        for c in &self.coeffs {
            out.push_str(&format!("{c}\n"));
        }
        out
    }

    /// Parses the [`FracSeries::to_text`] format.
    pub fn from_text(text: &str) -> Result<FracSeries> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::domain("empty series text"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::domain(format!(
                "series header needs `t0 alpha K radius`, got {header:?}"
            )));
        }
        let t0: f64 = fields[0]
            .parse()
            .map_err(|_| Error::domain("bad t0 in series header"))?;
        let alpha: f64 = fields[1]
            .parse()
            .map_err(|_| Error::domain("bad alpha in series header"))?;
        let k: usize = fields[2]
            .parse()
            .map_err(|_| Error::domain("bad K in series header"))?;
        let radius: f64 = if fields[3] == "inf" {
            f64::INFINITY
        } else {
            fields[3]
                .parse()
                .map_err(|_| Error::domain("bad radius in series header"))?
        };
        let coeffs: Vec<f64> = lines
            .map(|l| l.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::domain("bad coefficient line in series text"))?;
        if coeffs.len() != k + 1 {
            return Err(Error::domain(format!(
                "series header promises {} coefficients, found {}",
                k + 1,
                coeffs.len()
            )));
        }
        FracSeries::from_coeffs(t0, alpha, coeffs, radius)
    }
}

/// Closed-form coefficients of the built-in expansions, slots `0..=terms`.
pub fn builtin_series(kind: SeriesKind, t0: f64, alpha: f64, terms: usize) -> Result<FracSeries> {
    FracOrder::basic(alpha)?;
    let mut coeffs = vec![0.0; terms + 1];
    match kind {
        SeriesKind::FracExp => {
            let mut c = 1.0;
            coeffs[0] = c;
            for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
                c /= alpha * k as f64;
                *slot = c;
            }
        }
        SeriesKind::FracSin => {
            if terms >= 1 {
                let mut c = 1.0 / alpha;
                coeffs[1] = c;
                let mut k = 3;
                while k <= terms {
                    c = -c / (alpha * alpha * ((k - 1) * k) as f64);
                    coeffs[k] = c;
                    k += 2;
                }
            }
        }
        SeriesKind::FracCos => {
            let mut c = 1.0;
            coeffs[0] = c;
            let mut k = 2;
            while k <= terms {
                c = -c / (alpha * alpha * ((k - 1) * k) as f64);
                coeffs[k] = c;
                k += 2;
            }
        }
        SeriesKind::FracGeom => {
            let mut c = 1.0;
            coeffs[0] = c;
            for (_, slot) in coeffs.iter_mut().enumerate().skip(1) {
                c /= alpha;
                *slot = c;
            }
        }
    }
    let radius = match kind {
        // (t-t0)^alpha / alpha < 1 bounds the geometric family.
        SeriesKind::FracGeom => alpha.powf(1.0 / alpha),
        _ => f64::INFINITY,
    };
    FracSeries::from_coeffs(t0, alpha, coeffs, radius)
}

/// Evaluates the truncated series at `t >= t0` by compensated summation in
/// ascending slot order. Points at or beyond the validity radius are
/// rejected rather than summed to a meaningless partial value.
pub fn eval_series(s: &FracSeries, t: f64) -> Result<f64> {
    if !t.is_finite() || t < s.t0 {
        return Err(Error::domain(format!(
            "series evaluation needs t >= t0, got t = {t}, t0 = {}",
            s.t0
        )));
    }
    if t - s.t0 >= s.radius {
        return Err(Error::domain(format!(
            "t = {t} lies outside the validity interval [t0, t0 + {})",
            s.radius
        )));
    }
    let p = (t - s.t0).powf(s.alpha);
    let mut power = 1.0;
    let mut acc = KahanSum::new();
    for c in &s.coeffs {
        acc.add(c * power);
        power *= p;
    }
    Ok(acc.value())
}

/// Extracts coefficients numerically: slot `k` is the `k`-fold sequential
/// derivative at `t0` (taken as a right limit) divided by `alpha^k k!`.
///
/// Supported for `k_max <= 4`: each level needs an endpoint limit of a
/// sequential derivative and the noise grows geometrically with the level.
/// Closed-form families should use [`builtin_series`] instead. The
/// returned radius is `+inf` (caller-asserted analyticity); estimate a
/// finite one from more coefficients with [`ratio_radius`].
pub fn taylor_coeffs(f: &RealFn, t0: f64, alpha: f64, k_max: usize) -> Result<FracSeries> {
    FracOrder::basic(alpha)?;
    if k_max > 4 {
        return Err(Error::domain(
            "numeric coefficient extraction supports k_max <= 4; use builtin_series \
             for closed-form families",
        ));
    }
    let mut coeffs = Vec::with_capacity(k_max + 1);
    coeffs.push(f.eval(t0));
    let mut denom = 1.0;
    for k in 1..=k_max as u32 {
        denom *= alpha * k as f64;
        let value = endpoint_limit(|h| sequential_interior(f, t0, alpha, k, t0 + h))?;
        coeffs.push(value / denom);
    }
    FracSeries::from_coeffs(t0, alpha, coeffs, f64::INFINITY)
}

/// Lagrange-style remainder bound for the truncated expansion: with
/// `|T^(n+1) f| <= M` near `t0`, the tail after slot `n` is at most
/// `M (t-t0)^{alpha (n+1)} / (alpha^{n+1} (n+1)!)`.
pub fn remainder_bound(m: f64, n: u32, alpha: f64, t0: f64, t: f64) -> f64 {
    let np1 = n as f64 + 1.0;
    let mut denom = 1.0;
    for k in 1..=(n + 1) {
        denom *= alpha * k as f64;
    }
    m * (t - t0).powf(alpha * np1) / denom
}

/// Estimates the validity radius (in the `t` variable) from successive
/// coefficient ratios. Needs at least three nonzero coefficients; a ratio
/// trend running off to infinity (entire series, or a polynomial's zero
/// tail) reports `+inf`.
pub fn ratio_radius(s: &FracSeries) -> Result<f64> {
    let nonzero: Vec<(usize, f64)> = s
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, c)| (k, *c))
        .collect();
    if nonzero.len() < 3 {
        return Err(Error::domain(
            "radius estimation needs at least three nonzero coefficients",
        ));
    }
    // Two or more trailing zero slots cannot come from the alternating
    // sin/cos pattern: the stored object is a polynomial, which is entire.
    let n = s.coeffs.len();
    if n >= 2 && s.coeffs[n - 1] == 0.0 && s.coeffs[n - 2] == 0.0 {
        return Ok(f64::INFINITY);
    }
    // Radius in x = (t-t0)^alpha from |c_k / c_{k+d}|^(1/d) over the
    // trailing pairs, then mapped back through t = x^(1/alpha). A ratio
    // trend that keeps climbing (entire series: ratios grow like k) is
    // classified as infinite; a settling trend is read off its last value.
    let mut ratios = Vec::new();
    for pair in nonzero.windows(2) {
        let (k0, c0) = pair[0];
        let (k1, c1) = pair[1];
        let d = (k1 - k0) as f64;
        ratios.push((c0 / c1).abs().powf(1.0 / d));
    }
    let window = &ratios[ratios.len().saturating_sub(8)..];
    let nondecreasing = window.windows(2).all(|w| w[1] >= w[0]);
    let first = window[0];
    let last = *window.last().expect("nonempty ratio window");
    if nondecreasing && last >= 1.4 * first {
        return Ok(f64::INFINITY);
    }
    Ok(last.powf(1.0 / s.alpha))
}
