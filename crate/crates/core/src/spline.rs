//! Natural cubic spline interpolation, used by user-supplied profile tables.

use crate::{Error, Real, Result};

/// Natural cubic spline through strictly increasing knots.
#[derive(Debug, Clone)]
pub struct CubicSpline<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    /// Second derivatives at the knots (zero at both ends).
    y2: Vec<T>,
}

impl<T: Real> CubicSpline<T> {
    pub fn natural(xs: Vec<T>, ys: Vec<T>) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} knots vs {} values",
                n,
                ys.len()
            )));
        }
        if n < 3 {
            return Err(Error::InvalidTable(format!("need >= 3 knots, got {n}")));
        }
        for w in xs.windows(2) {
            let increasing = w[1] > w[0];
            if !increasing {
                return Err(Error::InvalidTable(
                    "knots must be strictly increasing".into(),
                ));
            }
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("non-finite table entry".into()));
        }

        // Tridiagonal sweep for the second derivatives; natural ends.
        let mut y2 = vec![T::zero(); n];
        let mut u = vec![T::zero(); n];
        for i in 1..n - 1 {
            let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
            let p = sig * y2[i - 1] + T::of(2.0);
            y2[i] = (sig - T::one()) / p;
            let d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
                - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            u[i] = (T::of(6.0) * d / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
        }
        for i in (1..n - 1).rev() {
            y2[i] = y2[i] * y2[i + 1] + u[i];
        }
        y2[0] = T::zero();
        y2[n - 1] = T::zero();
        Ok(Self { xs, ys, y2 })
    }

    pub fn lo(&self) -> T {
        self.xs[0]
    }

    pub fn hi(&self) -> T {
        *self.xs.last().unwrap()
    }

    fn segment(&self, x: T) -> usize {
        // rightmost knot <= x, clamped to a valid segment index
        match self.xs.iter().rposition(|&k| k <= x) {
            Some(i) => i.min(self.xs.len() - 2),
            None => 0,
        }
    }

    pub fn value(&self, x: T) -> T {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let six = T::of(6.0);
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.y2[i] + (b * b * b - b) * self.y2[i + 1]) * h * h / six
    }

    pub fn derivative(&self, x: T) -> T {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let three = T::of(3.0);
        let six = T::of(6.0);
        (self.ys[i + 1] - self.ys[i]) / h - (three * a * a - T::one()) / six * h * self.y2[i]
            + (three * b * b - T::one()) / six * h * self.y2[i + 1]
    }
}
