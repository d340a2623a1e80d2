//! Adaptive Simpson quadrature with interval bisection and absolute-error
//! budget splitting.
//!
//! The acceptance test `|S(left) + S(right) - S(whole)| <= 15 tol` comes from
//! the usual Richardson estimate for Simpson's rule; the returned value
//! includes the `(S2 - S1)/15` correction term.

use crate::{Error, Real, Result};

const MAX_DEPTH: u32 = 50;

/// Levels of forced bisection before the acceptance test may fire; guards
/// against a coarse top-level estimate passing by accident.
const MIN_DEPTH: u32 = 4;

/// Integrate `f` over `[a, b]` with absolute error budget `abs_tol`.
///
/// The integrand may fail (e.g. a radicand going non-positive); errors
/// propagate out of the recursion unchanged.
pub fn adaptive_simpson<T, F>(f: &F, a: T, b: T, abs_tol: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    if a == b {
        return Ok(T::zero());
    }
    let half = T::of(0.5);
    let m = half * (a + b);
    let fa = f(a)?;
    let fm = f(m)?;
    let fb = f(b)?;
    let whole = simpson(a, b, fa, fm, fb);
    let tol = abs_tol.max(T::epsilon() * abs_tol.abs().max(T::one()));
    recurse(f, a, m, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::of(6.0) * (fa + T::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T, F>(
    f: &F,
    a: T,
    m: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let half = T::of(0.5);
    let ml = half * (a + m);
    let mr = half * (m + b);
    let fml = f(ml)?;
    let fmr = f(mr)?;
    let left = simpson(a, m, fa, fml, fm);
    let right = simpson(m, b, fm, fmr, fb);
    let delta = left + right - whole;
    let deep_enough = depth <= MAX_DEPTH - MIN_DEPTH;
    if depth == 0 || (deep_enough && delta.abs() <= T::of(15.0) * tol) {
        return Ok(left + right + delta / T::of(15.0));
    }
    let sub_tol = half * tol;
    let l = recurse(f, a, ml, m, fa, fml, fm, left, sub_tol, depth - 1)?;
    let r = recurse(f, m, mr, b, fm, fmr, fb, right, sub_tol, depth - 1)?;
    Ok(l + r)
}

/// Convenience wrapper for infallible integrands.
pub fn adaptive_simpson_fn<T: Real>(f: impl Fn(T) -> T, a: T, b: T, abs_tol: T) -> T {
    adaptive_simpson(&|t| Ok(f(t)), a, b, abs_tol).expect("infallible integrand")
}

/// Guard helper used by integrands: reject non-positive radicands.
pub fn checked_sqrt<T: Real>(radicand: T, t: T) -> Result<T> {
    if radicand <= T::zero() || !radicand.is_finite() {
        return Err(Error::NonFiniteIntegrand { t: t.as_f64() });
    }
    Ok(radicand.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson_fn(|x: f64| x * x, 0.0, 1.0, 1e-12);
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn sine_on_long_interval() {
        let v = adaptive_simpson_fn(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn budget_controls_error() {
        // integrand with a sharp feature; compare loose vs tight budgets
        let f = |x: f64| 1.0 / (1e-3 + (x - 0.3).powi(2));
        let tight = adaptive_simpson_fn(f, 0.0, 1.0, 1e-12);
        let loose = adaptive_simpson_fn(f, 0.0, 1.0, 1e-6);
        assert!((tight - loose).abs() < 1e-6);
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = adaptive_simpson(&|t: f64| checked_sqrt(-1.0, t), 0.0, 1.0, 1e-8);
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn empty_interval() {
        assert_eq!(adaptive_simpson_fn(|x: f64| x, 2.0, 2.0, 1e-10), 0.0);
    }

    #[test]
    fn works_at_f32() {
        let v = adaptive_simpson_fn(|x: f32| x.exp(), 0.0f32, 1.0f32, 1e-5f32);
        assert!((v - (std::f32::consts::E - 1.0)).abs() < 1e-4);
    }
}
