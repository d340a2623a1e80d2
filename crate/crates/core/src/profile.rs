//! Profile curves `w: I -> C \ {0}` generating rotationally symmetric
//! submanifolds, including the expander profile `r(s) e^{i phi(s)}` whose
//! phase is built by adaptive quadrature.

use std::path::Path;
use std::sync::{Arc, Mutex};

use num_complex::Complex;

use crate::quad::{adaptive_simpson, checked_sqrt};
use crate::spline::CubicSpline;
use crate::{Error, Real, Result};

/// Default upper end of the one-sided expander domain.
pub const DEFAULT_S_MAX: f64 = 10.0;

/// Below this |s| the phase-rate formula switches to its series limit (E = 1).
const SERIES_SWITCH: f64 = 1e-8;

/// Absolute phase accuracy used when evaluating `w` itself.
const PHI_EVAL_TOL: f64 = 1e-12;

/// Spacing of the memoized phase grid.
const CACHE_STEP: f64 = 0.25;

/// Error budget per cached grid segment.
const CACHE_SEG_TOL: f64 = 1e-15;

/// Constants of the expander family: neck scale `a`, branch constant `E`,
/// exponent weight `alpha`, and the ambient complex dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpanderParams<T> {
    a: T,
    e: T,
    alpha: T,
    n: u32,
}

impl<T: Real> ExpanderParams<T> {
    /// Validates `a > 0`, `E >= 1`, `alpha >= 0`, `n >= 2`.
    pub fn new(a: T, e: T, alpha: T, n: u32) -> Result<Self> {
        if !(a.is_finite() && a > T::zero()) {
            return Err(Error::ParameterViolation(format!("a must be > 0, got {a}")));
        }
        if !(e.is_finite() && e >= T::one()) {
            return Err(Error::ParameterViolation(format!(
                "E must be >= 1, got {e}"
            )));
        }
        if !(alpha.is_finite() && alpha >= T::zero()) {
            return Err(Error::ParameterViolation(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        if n < 2 {
            return Err(Error::ParameterViolation(format!(
                "n must be >= 2, got {n}"
            )));
        }
        Ok(Self { a, e, alpha, n })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn e(&self) -> T {
        self.e
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_steady(&self) -> bool {
        self.e == T::one()
    }

    /// r(s) = sqrt(1/a + s^2).
    pub fn radius(&self, s: T) -> T {
        (self.a.recip() + s * s).sqrt()
    }

    /// dr/ds = s / r(s).
    pub fn radius_rate(&self, s: T) -> T {
        s / self.radius(s)
    }

    /// E (1 + a t^2)^n e^{alpha t^2} - 1, evaluated cancellation-free as
    /// expm1(ln E + n ln1p(a t^2) + alpha t^2).
    pub fn radicand(&self, t: T) -> T {
        let t2 = t * t;
        (self.e.ln() + T::of(self.n as f64) * (self.a * t2).ln_1p() + self.alpha * t2).exp_m1()
    }

    /// (1 + a s^2)^n, via exp/ln1p for accuracy at small s.
    pub fn bracket_power(&self, s: T) -> T {
        (T::of(self.n as f64) * (self.a * s * s).ln_1p()).exp()
    }

    /// The phase integrand t / ((1/a + t^2) sqrt(E (1+a t^2)^n e^{alpha t^2} - 1)).
    ///
    /// For E = 1 the 0/0 limit at t = 0 is removable; below the switch
    /// threshold the series value a / sqrt(n a + alpha) is used directly.
    pub fn phase_integrand(&self, t: T) -> Result<T> {
        if self.is_steady() && t.abs() < T::of(SERIES_SWITCH) {
            return Ok(self.a / (T::of(self.n as f64) * self.a + self.alpha).sqrt());
        }
        if t == T::zero() {
            // E > 1: radicand(0) = E - 1 > 0, integrand vanishes linearly.
            return Ok(T::zero());
        }
        let root = checked_sqrt(self.radicand(t), t)?;
        Ok(t / ((self.a.recip() + t * t) * root))
    }

    /// d(phi_E)/ds: the phase integrand evaluated at s.
    pub fn phase_rate(&self, s: T) -> Result<T> {
        self.phase_integrand(s)
    }

    /// Exponential decay rate (n - 1)(n a + alpha) of the reduced flow near 0
    /// on the E = 1 branch.
    pub fn decay_rate(&self) -> T {
        T::of((self.n - 1) as f64) * (T::of(self.n as f64) * self.a + self.alpha)
    }
}

/// phi_E(s): definite integral of the phase integrand from 0 to s >= 0, with
/// absolute error at most `quad_tol`.
pub fn phi_e<T: Real>(params: &ExpanderParams<T>, s: T, quad_tol: T) -> Result<T> {
    let s_ok = s >= T::zero();
    if !s_ok {
        return Err(Error::ParameterViolation(format!(
            "s must be >= 0, got {s}"
        )));
    }
    let tol_ok = quad_tol > T::zero();
    if !tol_ok {
        return Err(Error::ParameterViolation(format!(
            "quad_tol must be > 0, got {quad_tol}"
        )));
    }
    adaptive_simpson(&|t| params.phase_integrand(t), T::zero(), s, quad_tol)
}

#[derive(Debug, Clone)]
struct TableData<T> {
    re: CubicSpline<T>,
    im: CubicSpline<T>,
}

#[derive(Debug, Clone)]
enum Kind<T> {
    Expander {
        params: ExpanderParams<T>,
        /// Cumulative phase at multiples of `CACHE_STEP`, grown on demand.
        cache: Arc<Mutex<Vec<T>>>,
    },
    Line,
    Circle,
    Table(Arc<TableData<T>>),
}

/// A plane profile curve together with the ambient complex dimension `n` of
/// the rotationally symmetric submanifold it generates.
///
/// Clones share the expander phase cache; all evaluation methods take `&self`
/// and are safe to call concurrently.
#[derive(Debug, Clone)]
pub struct ProfileCurve<T> {
    kind: Kind<T>,
    n: u32,
    lo: T,
    hi: T,
    lo_open: bool,
    hi_open: bool,
}

impl<T: Real> ProfileCurve<T> {
    /// Expander profile on the one-sided domain [0, DEFAULT_S_MAX].
    pub fn expander(params: ExpanderParams<T>) -> Self {
        Self::expander_with_domain(params, T::of(DEFAULT_S_MAX))
    }

    /// Expander profile on [0, s_max].
    pub fn expander_with_domain(params: ExpanderParams<T>, s_max: T) -> Self {
        assert!(s_max > T::zero(), "s_max must be positive");
        Self {
            n: params.n(),
            kind: Kind::Expander {
                params,
                cache: Arc::new(Mutex::new(vec![T::zero()])),
            },
            lo: T::zero(),
            hi: s_max,
            lo_open: false,
            hi_open: false,
        }
    }

    /// Two-sided expander on [-s_max, s_max]: the curve is reflected through
    /// complex conjugation, i.e. r is even and the phase is odd.
    pub fn expander_two_sided(params: ExpanderParams<T>, s_max: T) -> Self {
        let mut p = Self::expander_with_domain(params, s_max);
        p.lo = -s_max;
        p
    }

    /// w(s) = (s, 0) on (0, inf); the slices are round spheres of radius s.
    pub fn line(n: u32) -> Self {
        Self {
            kind: Kind::Line,
            n,
            lo: T::zero(),
            hi: T::infinity(),
            lo_open: true,
            hi_open: true,
        }
    }

    /// w(s) = e^{i s}; the generated submanifold is stationary.
    pub fn circle(n: u32) -> Self {
        Self {
            kind: Kind::Circle,
            n,
            lo: T::neg_infinity(),
            hi: T::infinity(),
            lo_open: true,
            hi_open: true,
        }
    }

    /// Profile interpolated from `(s, w)` samples by natural cubic splines.
    ///
    /// Rejects tables on which `w` or `w'` vanishes somewhere on a sampled
    /// interior grid.
    pub fn from_table(n: u32, rows: Vec<(T, T, T)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParameterViolation(format!(
                "n must be >= 2, got {n}"
            )));
        }
        let s: Vec<T> = rows.iter().map(|r| r.0).collect();
        let re: Vec<T> = rows.iter().map(|r| r.1).collect();
        let im: Vec<T> = rows.iter().map(|r| r.2).collect();
        let table = TableData {
            re: CubicSpline::natural(s.clone(), re)?,
            im: CubicSpline::natural(s, im)?,
        };
        let lo = table.re.lo();
        let hi = table.re.hi();
        // degeneracy scan: knots plus midpoints of a fine uniform grid
        let samples = 257;
        let floor = T::of(1e-9);
        for i in 0..samples {
            let t = lo + (hi - lo) * T::of(i as f64 / (samples - 1) as f64);
            let w = Complex::new(table.re.value(t), table.im.value(t));
            let wd = Complex::new(table.re.derivative(t), table.im.derivative(t));
            if w.norm_sqr() < floor * floor {
                return Err(Error::InvalidTable(format!("w vanishes near s = {t}")));
            }
            if wd.norm_sqr() < floor * floor {
                return Err(Error::InvalidTable(format!("w' vanishes near s = {t}")));
            }
        }
        Ok(Self {
            kind: Kind::Table(Arc::new(table)),
            n,
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        })
    }

    /// Load a table profile from CSV with header `s,re_w,im_w` and a strictly
    /// increasing `s` column.
    pub fn from_table_csv(n: u32, path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path.as_ref())
            .map_err(|e| Error::InvalidTable(format!("cannot open table: {e}")))?;
        let headers = reader
            .headers()
            .map_err(|e| Error::InvalidTable(format!("cannot read header: {e}")))?
            .clone();
        let expected = ["s", "re_w", "im_w"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(Error::InvalidTable(format!(
                "expected header s,re_w,im_w, got {}",
                got.join(",")
            )));
        }
        let mut rows = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::InvalidTable(format!("row {idx}: {e}")))?;
            let mut vals = [T::zero(); 3];
            for (j, field) in record.iter().enumerate().take(3) {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|e| Error::InvalidTable(format!("row {idx}: {e}")))?;
                vals[j] = T::of(v);
            }
            rows.push((vals[0], vals[1], vals[2]));
        }
        Self::from_table(n, rows)
    }

    /// Ambient complex dimension of the generated submanifold.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn domain(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, s: T) -> bool {
        let lo_ok = if self.lo_open {
            s > self.lo
        } else {
            s >= self.lo
        };
        let hi_ok = if self.hi_open {
            s < self.hi
        } else {
            s <= self.hi
        };
        s.is_finite() && lo_ok && hi_ok
    }

    pub fn interior_contains(&self, s: T) -> bool {
        s.is_finite() && s > self.lo && s < self.hi
    }

    fn check_domain(&self, s: T) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::DomainViolation {
                s: s.as_f64(),
                lo: self.lo.as_f64(),
                hi: self.hi.as_f64(),
            })
        }
    }

    /// Expander parameters, when this is an expander profile.
    pub fn params(&self) -> Option<&ExpanderParams<T>> {
        match &self.kind {
            Kind::Expander { params, .. } => Some(params),
            _ => None,
        }
    }

    /// Cached phase phi_E(s) (odd under s -> -s on two-sided domains).
    ///
    /// Only meaningful for expander profiles; other kinds return `None`.
    pub fn phase(&self, s: T) -> Option<Result<T>> {
        match &self.kind {
            Kind::Expander { params, cache } => {
                Some(cached_phase(params, cache, s, T::of(PHI_EVAL_TOL)))
            }
            _ => None,
        }
    }

    /// w(s).
    pub fn eval_w(&self, s: T) -> Result<Complex<T>> {
        self.check_domain(s)?;
        match &self.kind {
            Kind::Expander { params, cache } => {
                let phi = cached_phase(params, cache, s, T::of(PHI_EVAL_TOL))?;
                Ok(Complex::from_polar(params.radius(s), phi))
            }
            Kind::Line => Ok(Complex::new(s, T::zero())),
            Kind::Circle => Ok(Complex::new(s.cos(), s.sin())),
            Kind::Table(t) => Ok(Complex::new(t.re.value(s), t.im.value(s))),
        }
    }

    /// dw/ds, assembled analytically for the expander as
    /// (r' + i r phi') e^{i phi}.
    ///
    /// At s = 0 on the E = 1 branch this is the one-sided value
    /// i r(0) a / sqrt(n a + alpha).
    pub fn eval_wdot(&self, s: T) -> Result<Complex<T>> {
        self.check_domain(s)?;
        match &self.kind {
            Kind::Expander { params, cache } => {
                let phi = cached_phase(params, cache, s, T::of(PHI_EVAL_TOL))?;
                let r = params.radius(s);
                let rdot = params.radius_rate(s);
                // phase rate is even in s on two-sided domains
                let phidot = params.phase_rate(s.abs())?;
                Ok(Complex::new(rdot, r * phidot) * Complex::from_polar(T::one(), phi))
            }
            Kind::Line => Ok(Complex::new(T::one(), T::zero())),
            Kind::Circle => Ok(Complex::new(-s.sin(), s.cos())),
            Kind::Table(t) => Ok(Complex::new(t.re.derivative(s), t.im.derivative(s))),
        }
    }
}

/// Phase lookup backed by a monotone grid of checkpoints at multiples of
/// `CACHE_STEP`, each segment integrated once to `CACHE_SEG_TOL`; only the
/// remainder past the last checkpoint is integrated per call.
fn cached_phase<T: Real>(
    params: &ExpanderParams<T>,
    cache: &Mutex<Vec<T>>,
    s: T,
    tol: T,
) -> Result<T> {
    let mag = s.abs();
    if mag == T::zero() {
        return Ok(T::zero());
    }
    let step = T::of(CACHE_STEP);
    let idx = (mag / step).floor().as_f64() as usize;
    let anchor_idx = idx.min(4096); // cache never grows past s = 1024
    let (anchor_s, anchor_phi) = {
        let mut grid = cache.lock().expect("phase cache poisoned");
        while grid.len() <= anchor_idx {
            let k = grid.len();
            let a = step * T::of((k - 1) as f64);
            let b = step * T::of(k as f64);
            let seg = adaptive_simpson(&|t| params.phase_integrand(t), a, b, T::of(CACHE_SEG_TOL))?;
            let prev = grid[k - 1];
            grid.push(prev + seg);
        }
        (step * T::of(anchor_idx as f64), grid[anchor_idx])
    };
    let tail = adaptive_simpson(
        &|t| params.phase_integrand(t),
        anchor_s,
        mag,
        (tol * T::of(0.5)).max(T::of(CACHE_SEG_TOL)),
    )?;
    let phi = anchor_phi + tail;
    Ok(if s < T::zero() { -phi } else { phi })
}
