//! Order decomposition and intervals.
//!
//! A fractional order `alpha > 0` is always handled through its unique
//! decomposition `alpha = n + beta` with `n` a nonnegative integer and
//! `beta` in `(0, 1]`. The fractional behaviour of every operator lives in
//! `beta`; `n` contributes ordinary differentiation or iterated
//! integration. Integer orders sit at the right end of the bracket: for
//! `alpha = 3` the decomposition is `n = 2`, `beta = 1`, which is what makes
//! the order-`(n+1)` operators collapse to their classical counterparts.

use crate::error::{Error, Result};

/// A positive derivative/integral order `alpha = n + beta`, `beta ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
    n: u32,
    beta: f64,
}

impl FracOrder {
    /// Decomposes `alpha` into the unique `(n, beta)` pair with
    /// `n < alpha <= n + 1` and `beta = alpha - n ∈ (0, 1]`.
    ///
    /// Rejects non-finite and non-positive orders.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::domain(format!(
                "order must be a finite positive real, got {alpha}"
            )));
        }
        let n = if alpha <= 1.0 {
            0u32
        } else {
            (alpha.ceil() - 1.0) as u32
        };
        let beta = alpha - n as f64;
        Ok(FracOrder { alpha, n, beta })
    }

    /// Like [`FracOrder::new`] but additionally requires `alpha <= 1`
    /// (`n = 0`), the bracket the basic left/right operators act on.
    pub fn basic(alpha: f64) -> Result<Self> {
        let ord = FracOrder::new(alpha)?;
        if ord.n != 0 {
            return Err(Error::domain(format!(
                "order must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(ord)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Integer part of the decomposition.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Fractional part, always in `(0, 1]`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// True when the order reduces to a classical one (`beta = 1`).
    pub fn is_integer(&self) -> bool {
        self.beta == 1.0
    }
}

/// A working interval `[a, b]`, `b` possibly infinite for left-sided work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || a >= b {
            return Err(Error::domain(format!(
                "interval requires finite a < b, got [{a}, {b}]"
            )));
        }
        Ok(Interval { a, b })
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_examples() {
        let o = FracOrder::new(0.5).unwrap();
        assert_eq!((o.n(), o.beta()), (0, 0.5));

        let o = FracOrder::new(1.0).unwrap();
        assert_eq!((o.n(), o.beta()), (0, 1.0));

        let o = FracOrder::new(1.5).unwrap();
        assert_eq!((o.n(), o.beta()), (1, 0.5));

        let o = FracOrder::new(3.0).unwrap();
        assert_eq!((o.n(), o.beta()), (2, 1.0));
        assert!(o.is_integer());
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(-1.0).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert!(FracOrder::new(f64::INFINITY).is_err());
        assert!(FracOrder::basic(1.5).is_err());
        assert!(FracOrder::basic(1.0).is_ok());
    }

    #[test]
    fn sum_is_exact() {
        for i in 1..=1000 {
            let alpha = i as f64 * 0.01;
            let o = FracOrder::new(alpha).unwrap();
            assert_eq!(o.n() as f64 + o.beta(), alpha);
            assert!(o.beta() > 0.0 && o.beta() <= 1.0);
        }
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(0.0, 1.0).is_ok());
        assert!(Interval::new(0.0, f64::INFINITY).is_ok());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
    }
}
