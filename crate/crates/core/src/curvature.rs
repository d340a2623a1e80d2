//! Closed-form mean curvature quantities of the sphere slices: the scalar
//! flow coefficient, the intrinsic mean curvature vector of a slice inside
//! the generated submanifold, the ambient round-sphere formula, and the
//! small-s limit vector of the E > 1 branch.

use num_complex::Complex;

use crate::profile::{ExpanderParams, ProfileCurve};
use crate::{Error, Real, Result};

/// Unit vector in R^n selecting a point of the sphere factor.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint<T>(Vec<T>);

impl<T: Real> SpherePoint<T> {
    /// Validates unit norm (within 1e-12, floored at a few ulps for f32).
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "sphere point needs >= 2 coordinates, got {}",
                coords.len()
            )));
        }
        let sum: T = coords.iter().fold(T::zero(), |acc, &x| acc + x * x);
        let tol = T::of(1e-12).max(T::epsilon() * T::of(16.0));
        if !sum.is_finite() || (sum - T::one()).abs() > tol {
            return Err(Error::ParameterViolation(format!(
                "sphere point has |x|^2 = {sum}, expected 1"
            )));
        }
        Ok(Self(coords))
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn from_unnormalized(coords: Vec<T>) -> Result<Self> {
        let norm: T = coords.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        if !norm.is_finite() || norm < T::of(1e-12) {
            return Err(Error::ParameterViolation(
                "cannot normalize near-zero vector".into(),
            ));
        }
        Ok(Self(coords.into_iter().map(|x| x / norm).collect()))
    }

    /// The j-th standard basis vector of R^n.
    pub fn axis(n: u32, j: usize) -> Self {
        assert!(j < n as usize);
        let mut v = vec![T::zero(); n as usize];
        v[j] = T::one();
        Self(v)
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Applies a real n x n matrix and renormalizes (for rotations).
    pub fn rotated(&self, rot: &[Vec<T>]) -> Result<Self> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for (i, row) in rot.iter().enumerate() {
            out[i] = row
                .iter()
                .zip(&self.0)
                .fold(T::zero(), |acc, (&r, &x)| acc + r * x);
        }
        Self::from_unnormalized(out)
    }
}

/// Vector of 2n reals read as n complex coordinates, interleaved
/// (re_1, im_1, ..., re_n, im_n).
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector<T>(Vec<T>);

impl<T: Real> AmbientVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if !entries.len().is_multiple_of(2) || entries.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "ambient vector needs 2n entries, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::ParameterViolation("non-finite ambient entry".into()));
        }
        Ok(Self(entries))
    }

    pub fn zeros(n: u32) -> Self {
        Self(vec![T::zero(); 2 * n as usize])
    }

    /// (x_1 z, ..., x_n z) embedded as 2n reals.
    pub fn embed(x: &SpherePoint<T>, z: Complex<T>) -> Self {
        let mut out = Vec::with_capacity(2 * x.dim());
        for &xi in x.coords() {
            out.push(xi * z.re);
            out.push(xi * z.im);
        }
        Self(out)
    }

    pub fn from_complex_components(zs: &[Complex<T>]) -> Self {
        let mut out = Vec::with_capacity(2 * zs.len());
        for z in zs {
            out.push(z.re);
            out.push(z.im);
        }
        Self(out)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    /// Number of complex coordinates.
    pub fn complex_dim(&self) -> usize {
        self.0.len() / 2
    }

    pub fn complex_component(&self, j: usize) -> Complex<T> {
        Complex::new(self.0[2 * j], self.0[2 * j + 1])
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, c: T) -> Self {
        Self(self.0.iter().map(|&v| v * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    /// Applies a real rotation of the sphere factor blockwise to the complex
    /// coordinates: (z_1, ..., z_n) -> (sum_k R_{1k} z_k, ...).
    pub fn rotated_blockwise(&self, rot: &[Vec<T>]) -> Self {
        let n = self.complex_dim();
        let mut out = Vec::with_capacity(2 * n);
        for row in rot.iter().take(n) {
            let mut z = Complex::new(T::zero(), T::zero());
            for (k, &r) in row.iter().enumerate().take(n) {
                z = z + self.complex_component(k) * r;
            }
            out.push(z.re);
            out.push(z.im);
        }
        Self(out)
    }
}

/// Curvature data of a slice at a given (s, x).
#[derive(Debug, Clone)]
pub struct CurvatureSample<T> {
    pub s: T,
    pub x: SpherePoint<T>,
    /// Scalar G(s) multiplying -d/ds in the mean curvature vector.
    pub coefficient: T,
    /// Intrinsic mean curvature vector of the slice inside the submanifold.
    pub h: AmbientVector<T>,
    /// d/ds = (x_1 w'(s), ..., x_n w'(s)).
    pub ds_vector: AmbientVector<T>,
}

/// Scalar flow coefficient G(s) = (n-1) Re(conj(w) w') / (|w|^2 |w'|^2), so
/// that the reduced flow reads df/dt = -G(f).
///
/// Expander profiles use the simplified closed form
/// (n-1) (E (1+a s^2)^n - e^{-alpha s^2}) / (s E (1+a s^2)^n)
/// with the removable limit 0 at s = 0 on the E = 1 branch; other kinds are
/// assembled from w and w'.
pub fn flow_coefficient<T: Real>(profile: &ProfileCurve<T>, s: T) -> Result<T> {
    match profile.params() {
        Some(params) => {
            if !profile.contains(s) {
                let (lo, hi) = profile.domain();
                return Err(Error::DomainViolation {
                    s: s.as_f64(),
                    lo: lo.as_f64(),
                    hi: hi.as_f64(),
                });
            }
            expander_coefficient(params, s)
        }
        None => flow_coefficient_assembled(profile, s),
    }
}

fn expander_coefficient<T: Real>(params: &ExpanderParams<T>, s: T) -> Result<T> {
    let n_minus_1 = T::of((params.n() - 1) as f64);
    if s.abs() < T::of(1e-8) {
        if params.is_steady() {
            // series branch: G(s) = (n-1)(n a + alpha) s + O(s^3)
            return Ok(params.decay_rate() * s);
        }
        if s == T::zero() {
            // w'(0) = 0 on the E > 1 branch
            return Err(Error::SingularPoint { s: s.as_f64() });
        }
    }
    // (E (1+a s^2)^n - e^{-alpha s^2}) = e^{-alpha s^2} * radicand(s)
    let damp = (-params.alpha() * s * s).exp();
    let numerator = damp * params.radicand(s);
    let denominator = s * params.e() * params.bracket_power(s);
    Ok(n_minus_1 * numerator / denominator)
}

/// The same coefficient assembled directly from w and w'; this is the generic
/// route Eq-for-Eq against which the expander closed form is tested.
pub fn flow_coefficient_assembled<T: Real>(profile: &ProfileCurve<T>, s: T) -> Result<T> {
    let w = profile.eval_w(s)?;
    let wd = profile.eval_wdot(s)?;
    let wd_sq = wd.norm_sqr();
    if wd_sq < T::of(1e-30) {
        return Err(Error::SingularPoint { s: s.as_f64() });
    }
    let n_minus_1 = T::of((profile.n() - 1) as f64);
    Ok(n_minus_1 * (w.conj() * wd).re / (w.norm_sqr() * wd_sq))
}

/// Mean curvature vector of the slice l_s inside the generated submanifold:
/// H = -G(s) d/ds with d/ds = (x_1 w', ..., x_n w').
pub fn mean_curvature_in_l<T: Real>(
    profile: &ProfileCurve<T>,
    s: T,
    x: &SpherePoint<T>,
) -> Result<CurvatureSample<T>> {
    if x.dim() != profile.n() as usize {
        return Err(Error::DimensionMismatch(format!(
            "sphere point dim {} vs profile n {}",
            x.dim(),
            profile.n()
        )));
    }
    let coefficient = flow_coefficient(profile, s)?;
    let ds_vector = AmbientVector::embed(x, profile.eval_wdot(s)?);
    let h = ds_vector.scaled(-coefficient);
    Ok(CurvatureSample {
        s,
        x: x.clone(),
        coefficient,
        h,
        ds_vector,
    })
}

/// Mean curvature vector of the scaled round sphere
/// S = { scale * (x_1, ..., x_n) : |x| = 1 } in C^n at p:
/// H(p) = -(n-1)/|scale|^2 * p.
pub fn ambient_sphere_mean_curvature<T: Real>(
    scale: Complex<T>,
    n: u32,
    p: &AmbientVector<T>,
) -> Result<AmbientVector<T>> {
    if n < 2 {
        return Err(Error::ParameterViolation(format!(
            "n must be >= 2, got {n}"
        )));
    }
    if p.complex_dim() != n as usize {
        return Err(Error::DimensionMismatch(format!(
            "p has {} complex coordinates, expected {n}",
            p.complex_dim()
        )));
    }
    let scale_sq = scale.norm_sqr();
    if scale_sq < T::of(1e-30) {
        return Err(Error::ParameterViolation("scale must be nonzero".into()));
    }
    // recover x_j = Re(p_j conj(scale)) / |scale|^2 and check p = scale * x
    let mut x = Vec::with_capacity(n as usize);
    let mut x_norm_sq = T::zero();
    for j in 0..n as usize {
        let xj = (p.complex_component(j) * scale.conj()).re / scale_sq;
        x_norm_sq = x_norm_sq + xj * xj;
        x.push(xj);
    }
    let mut residual_sq = T::zero();
    for (j, &xj) in x.iter().enumerate() {
        let diff = p.complex_component(j) - scale * xj;
        residual_sq = residual_sq + diff.norm_sqr();
    }
    let tol = T::of(1e-10).max(T::epsilon() * T::of(64.0));
    let scale_norm = scale_sq.sqrt();
    let residual = residual_sq.sqrt() / scale_norm;
    if residual > tol || (x_norm_sq - T::one()).abs() > tol {
        return Err(Error::NotOnSphere {
            residual: residual.max((x_norm_sq - T::one()).abs()).as_f64(),
        });
    }
    Ok(p.scaled(-T::of((n - 1) as f64) / scale_sq))
}

/// The complex scalar -(n-1) sqrt(a) (E-1 + i sqrt(E-1)) / E that the slice
/// mean curvature approaches as s -> 0+ on the E > 1 branch.
pub fn small_s_limit_scalar<T: Real>(params: &ExpanderParams<T>) -> Result<Complex<T>> {
    if params.e() <= T::one() {
        return Err(Error::ParameterViolation(format!(
            "small-s limit needs E > 1, got E = {}",
            params.e()
        )));
    }
    let em1 = params.e() - T::one();
    let c = -T::of((params.n() - 1) as f64) * params.a().sqrt() / params.e();
    Ok(Complex::new(c * em1, c * em1.sqrt()))
}

/// The limit vector: the scalar applied componentwise to (x_1, ..., x_n).
pub fn small_s_limit_vector<T: Real>(
    params: &ExpanderParams<T>,
    x: &SpherePoint<T>,
) -> Result<AmbientVector<T>> {
    if x.dim() != params.n() as usize {
        return Err(Error::DimensionMismatch(format!(
            "sphere point dim {} vs n {}",
            x.dim(),
            params.n()
        )));
    }
    Ok(AmbientVector::embed(x, small_s_limit_scalar(params)?))
}
