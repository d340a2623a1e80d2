//! Independent finite-difference verification of the curvature closed forms.
//!
//! The slice is parametrized near a base point through an orthographic sphere
//! chart; the ambient mean curvature is the inverse-metric trace of the
//! second fundamental form computed from central differences of the embedding
//! alone, then projected onto the tangent space of the generated submanifold.
//! Nothing here evaluates a closed-form curvature expression.

use crate::curvature::{AmbientVector, SpherePoint};
use crate::profile::ProfileCurve;
use crate::{Error, Real, Result};

const GS_PIVOT: f64 = 1e-8;
const ORTHO_TOL: f64 = 1e-8;

/// Local coordinates (s, u) around `base_x` on the generated submanifold.
///
/// The sphere factor is charted orthographically: u in R^{n-1} maps to
/// R (sqrt(1 - |u|^2), u) where R is a rotation taking e_1 to `base_x`.
#[derive(Debug, Clone)]
pub struct EmbeddingChart<T> {
    profile: ProfileCurve<T>,
    base_x: SpherePoint<T>,
    rotation: Vec<Vec<T>>,
    fd_step: T,
}

impl<T: Real> EmbeddingChart<T> {
    pub fn new(profile: ProfileCurve<T>, base_x: SpherePoint<T>, fd_step: T) -> Result<Self> {
        if base_x.dim() != profile.n() as usize {
            return Err(Error::DimensionMismatch(format!(
                "base point dim {} vs profile n {}",
                base_x.dim(),
                profile.n()
            )));
        }
        if !(fd_step >= T::of(1e-7) && fd_step <= T::of(1e-3)) {
            return Err(Error::ParameterViolation(format!(
                "fd_step must lie in [1e-7, 1e-3], got {fd_step}"
            )));
        }
        let rotation = rotation_taking_e1_to(base_x.coords());
        Ok(Self {
            profile,
            base_x,
            rotation,
            fd_step,
        })
    }

    pub fn profile(&self) -> &ProfileCurve<T> {
        &self.profile
    }

    pub fn base_x(&self) -> &SpherePoint<T> {
        &self.base_x
    }

    pub fn fd_step(&self) -> T {
        self.fd_step
    }

    /// x(u) = R (sqrt(1 - |u|^2), u_1, ..., u_{n-1}).
    fn sphere_point(&self, u: &[T]) -> Vec<T> {
        let n = self.base_x.dim();
        let u_sq = u.iter().fold(T::zero(), |acc, &v| acc + v * v);
        let mut chart = Vec::with_capacity(n);
        chart.push((T::one() - u_sq).sqrt());
        chart.extend_from_slice(u);
        let mut out = vec![T::zero(); n];
        for (i, row) in self.rotation.iter().enumerate() {
            out[i] = row
                .iter()
                .zip(&chart)
                .fold(T::zero(), |acc, (&r, &c)| acc + r * c);
        }
        out
    }

    /// F(s, u) = (x(u)_1 w(s), ..., x(u)_n w(s)).
    fn embedding(&self, s: T, u: &[T]) -> Result<AmbientVector<T>> {
        let w = self.profile.eval_w(s)?;
        let x = self.sphere_point(u);
        let mut out = Vec::with_capacity(2 * x.len());
        for &xi in &x {
            out.push(xi * w.re);
            out.push(xi * w.im);
        }
        AmbientVector::new(out)
    }
}

/// Orthonormal tangent frames of the slice and of the full submanifold at a
/// point.
#[derive(Debug, Clone)]
pub struct FrameAtPoint<T> {
    pub point: AmbientVector<T>,
    /// n-1 orthonormal vectors spanning the tangent space of the slice.
    pub tangent_slice: Vec<AmbientVector<T>>,
    /// n orthonormal vectors spanning the tangent space of the submanifold.
    pub tangent_l: Vec<AmbientVector<T>>,
}

/// Rotation in the plane spanned by e_1 and x taking e_1 to x.
fn rotation_taking_e1_to<T: Real>(x: &[T]) -> Vec<Vec<T>> {
    let n = x.len();
    let mut rot = vec![vec![T::zero(); n]; n];
    if x[0] <= T::of(-1.0) + T::of(1e-12) {
        // antipodal special case: rotate by pi in the (e1, e2) plane
        for (i, row) in rot.iter_mut().enumerate() {
            row[i] = if i < 2 { -T::one() } else { T::one() };
        }
        return rot;
    }
    // R = I - (u + x)(u + x)^T / (1 + x_1) + 2 x u^T with u = e_1
    let denom = T::one() + x[0];
    for i in 0..n {
        let ui = if i == 0 { T::one() } else { T::zero() };
        for j in 0..n {
            let uj = if j == 0 { T::one() } else { T::zero() };
            let mut v = if i == j { T::one() } else { T::zero() };
            v = v - (ui + x[i]) * (uj + x[j]) / denom;
            v = v + T::of(2.0) * x[i] * uj;
            rot[i][j] = v;
        }
    }
    rot
}

/// Modified Gram-Schmidt with a second reorthogonalization pass.
pub fn orthonormalize<T: Real>(vectors: &[AmbientVector<T>]) -> Result<Vec<AmbientVector<T>>> {
    let mut basis: Vec<AmbientVector<T>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut u = v.clone();
        for _ in 0..2 {
            for b in &basis {
                u = u.sub(&b.scaled(u.dot(b)));
            }
        }
        let pivot = u.norm();
        if pivot < T::of(GS_PIVOT) {
            return Err(Error::RankDeficient {
                pivot: pivot.as_f64(),
            });
        }
        basis.push(u.scaled(pivot.recip()));
    }
    Ok(basis)
}

/// Orthogonal projection of `v` onto the span of an orthonormal basis.
pub fn project_onto_span<T: Real>(
    basis: &[AmbientVector<T>],
    v: &AmbientVector<T>,
) -> Result<AmbientVector<T>> {
    let mut deviation = T::zero();
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            deviation = deviation.max((bi.dot(bj) - target).abs());
        }
    }
    if deviation > T::of(ORTHO_TOL) {
        return Err(Error::NonOrthonormalBasis {
            deviation: deviation.as_f64(),
        });
    }
    let mut out = AmbientVector::zeros(v.complex_dim() as u32);
    for b in basis {
        out = out.add(&b.scaled(v.dot(b)));
    }
    Ok(out)
}

/// First derivatives of the embedding in the chart directions.
fn chart_first_derivatives<T: Real>(
    chart: &EmbeddingChart<T>,
    s: T,
) -> Result<Vec<AmbientVector<T>>> {
    let m = chart.base_x.dim() - 1;
    let h = chart.fd_step;
    let two_h = T::of(2.0) * h;
    let mut derivs = Vec::with_capacity(m);
    let mut u = vec![T::zero(); m];
    for i in 0..m {
        u[i] = h;
        let plus = chart.embedding(s, &u)?;
        u[i] = -h;
        let minus = chart.embedding(s, &u)?;
        u[i] = T::zero();
        derivs.push(plus.sub(&minus).scaled(two_h.recip()));
    }
    Ok(derivs)
}

/// Orthonormal frames at (s, u = 0): slice directions first, then the
/// s-direction from the analytic w'.
pub fn build_frame<T: Real>(chart: &EmbeddingChart<T>, s: T) -> Result<FrameAtPoint<T>> {
    let point = chart.embedding(s, &vec![T::zero(); chart.base_x.dim() - 1])?;
    let mut vectors = chart_first_derivatives(chart, s)?;
    let ds = AmbientVector::embed(&chart.base_x, chart.profile.eval_wdot(s)?);
    vectors.push(ds);
    let basis = orthonormalize(&vectors)?;
    let tangent_slice = basis[..basis.len() - 1].to_vec();
    Ok(FrameAtPoint {
        point,
        tangent_slice,
        tangent_l: basis,
    })
}

/// Gauss-Jordan inverse of a small symmetric positive-definite matrix.
fn invert_small<T: Real>(mat: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = mat.len();
    let mut a: Vec<Vec<T>> = mat.to_vec();
    let mut inv = vec![vec![T::zero(); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = T::one();
    }
    for col in 0..n {
        // partial pivot
        let mut pivot_row = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[pivot_row][col].abs() {
                pivot_row = row;
            }
        }
        if a[pivot_row][col].abs() < T::of(1e-14) {
            return Err(Error::RankDeficient {
                pivot: a[pivot_row][col].abs().as_f64(),
            });
        }
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let scale = a[col][col].recip();
        for j in 0..n {
            a[col][j] = a[col][j] * scale;
            inv[col][j] = inv[col][j] * scale;
        }
        for row in 0..n {
            if row != col {
                let factor = a[row][col];
                for j in 0..n {
                    a[row][j] = a[row][j] - factor * a[col][j];
                    inv[row][j] = inv[row][j] - factor * inv[col][j];
                }
            }
        }
    }
    Ok(inv)
}

/// Ambient mean curvature of the slice in C^n as the inverse-metric trace of
/// the second fundamental form, via second-order central differences.
pub fn ambient_mean_curvature_fd<T: Real>(
    chart: &EmbeddingChart<T>,
    s: T,
) -> Result<AmbientVector<T>> {
    let m = chart.base_x.dim() - 1;
    let h = chart.fd_step;
    let h_sq = h * h;
    let firsts = chart_first_derivatives(chart, s)?;

    // metric and its inverse
    let mut g = vec![vec![T::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            g[i][j] = firsts[i].dot(&firsts[j]);
        }
    }
    let g_inv = invert_small(&g)?;

    let mut u = vec![T::zero(); m];
    let center = chart.embedding(s, &u)?;

    // weighted sum of second partials, projected once at the end
    let n = chart.base_x.dim() as u32;
    let mut traced = AmbientVector::zeros(n);
    for i in 0..m {
        // diagonal: (F(+h) - 2 F(0) + F(-h)) / h^2
        u[i] = h;
        let plus = chart.embedding(s, &u)?;
        u[i] = -h;
        let minus = chart.embedding(s, &u)?;
        u[i] = T::zero();
        let dii = plus
            .add(&minus)
            .sub(&center.scaled(T::of(2.0)))
            .scaled(h_sq.recip());
        traced = traced.add(&dii.scaled(g_inv[i][i]));
        for j in i + 1..m {
            // mixed: 4-point stencil
            u[i] = h;
            u[j] = h;
            let pp = chart.embedding(s, &u)?;
            u[j] = -h;
            let pm = chart.embedding(s, &u)?;
            u[i] = -h;
            let mm = chart.embedding(s, &u)?;
            u[j] = h;
            let mp = chart.embedding(s, &u)?;
            u[i] = T::zero();
            u[j] = T::zero();
            let dij = pp
                .sub(&pm)
                .sub(&mp)
                .add(&mm)
                .scaled((T::of(4.0) * h_sq).recip());
            // symmetric off-diagonal contributes twice
            traced = traced.add(&dij.scaled(T::of(2.0) * g_inv[i][j]));
        }
    }

    // keep only the part normal to the slice
    let tangent_slice = orthonormalize(&firsts)?;
    let tangential = project_onto_span(&tangent_slice, &traced)?;
    Ok(traced.sub(&tangential))
}

/// Oracle value of the slice mean curvature inside the submanifold:
/// the projection of the ambient mean curvature onto the tangent space of
/// the submanifold.
pub fn oracle_mean_curvature_in_l<T: Real>(
    chart: &EmbeddingChart<T>,
    s: T,
) -> Result<AmbientVector<T>> {
    let frame = build_frame(chart, s)?;
    let h_bar = ambient_mean_curvature_fd(chart, s)?;
    project_onto_span(&frame.tangent_l, &h_bar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{flow_coefficient, mean_curvature_in_l};
    use crate::profile::ExpanderParams;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_sphere_point(rng: &mut ChaCha8Rng, n: u32) -> SpherePoint<f64> {
        loop {
            let raw: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(p) = SpherePoint::from_unnormalized(raw) {
                return p;
            }
        }
    }

    #[test]
    fn rotation_maps_e1_to_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2u32, 3, 4, 6] {
            let x = random_sphere_point(&mut rng, n);
            let rot = rotation_taking_e1_to(x.coords());
            // columns orthonormal
            for i in 0..n as usize {
                for j in 0..n as usize {
                    let dot: f64 = (0..n as usize).map(|k| rot[k][i] * rot[k][j]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-12);
                }
            }
            // first column is x
            for (row, &xk) in rot.iter().zip(x.coords()) {
                assert!((row[0] - xk).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_antipodal_case() {
        let rot = rotation_taking_e1_to(&[-1.0, 0.0, 0.0]);
        assert_eq!(rot[0][0], -1.0);
        let dot: f64 = (0..3).map(|k| rot[k][0] * rot[k][0]).sum();
        assert!((dot - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frame_is_orthonormal_and_nested() {
        let p = ProfileCurve::expander(ExpanderParams::<f64>::new(1.0, 1.0, 0.0, 3).unwrap());
        let chart = EmbeddingChart::new(p, SpherePoint::axis(3, 1), 1e-5).unwrap();
        let frame = build_frame(&chart, 1.0).unwrap();
        assert_eq!(frame.tangent_slice.len(), 2);
        assert_eq!(frame.tangent_l.len(), 3);
        for (i, bi) in frame.tangent_l.iter().enumerate() {
            for (j, bj) in frame.tangent_l.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((bi.dot(bj) - expect).abs() < 1e-10);
            }
        }
        // slice frame sits inside the full frame's span
        for v in &frame.tangent_slice {
            let proj = project_onto_span(&frame.tangent_l, v).unwrap();
            assert!(proj.sub(v).norm() < 1e-10);
        }
    }

    #[test]
    fn line_frame_contains_s_direction() {
        let p = ProfileCurve::<f64>::line(3);
        let chart = EmbeddingChart::new(p, SpherePoint::axis(3, 0), 1e-5).unwrap();
        let frame = build_frame(&chart, 1.0).unwrap();
        // d/ds = e1 (x) (1, 0); must be representable in the full frame
        let ds = AmbientVector::new(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let proj = project_onto_span(&frame.tangent_l, &ds).unwrap();
        assert!(proj.sub(&ds).norm() < 1e-10);
    }

    #[test]
    fn fd_step_bounds_enforced() {
        let p = ProfileCurve::<f64>::line(2);
        assert!(EmbeddingChart::new(p.clone(), SpherePoint::axis(2, 0), 1e-8).is_err());
        assert!(EmbeddingChart::new(p, SpherePoint::axis(2, 0), 1e-2).is_err());
    }

    #[test]
    fn ambient_curvature_matches_sphere_formula_line() {
        let p = ProfileCurve::<f64>::line(3);
        let chart = EmbeddingChart::new(p, SpherePoint::axis(3, 0), 1e-5).unwrap();
        let h_bar = ambient_mean_curvature_fd(&chart, 2.0).unwrap();
        let expected = [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for (got, want) in h_bar.as_slice().iter().zip(expected) {
            assert!((got - want).abs() < 1e-4, "{got} vs {want}");
        }
    }

    #[test]
    fn ambient_curvature_matches_sphere_formula_circle() {
        let p = ProfileCurve::<f64>::circle(2);
        let chart = EmbeddingChart::new(p.clone(), SpherePoint::axis(2, 0), 1e-5).unwrap();
        for s in [0.3, 1.1, 2.5] {
            let h_bar = ambient_mean_curvature_fd(&chart, s).unwrap();
            let w = p.eval_w(s).unwrap();
            let x = SpherePoint::axis(2, 0);
            let point = AmbientVector::embed(&x, w);
            let expected = point.scaled(-1.0);
            assert!(h_bar.sub(&expected).norm() < 1e-4);
        }
    }

    #[test]
    fn projection_fixes_span_and_kills_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw: Vec<AmbientVector<f64>> = (0..2)
            .map(|_| {
                AmbientVector::new(
                    (0..6)
                        .map(|_| rng.sample::<f64, _>(StandardNormal))
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let basis = orthonormalize(&raw).unwrap();
        let fixed = project_onto_span(&basis, &basis[0]).unwrap();
        assert!(fixed.sub(&basis[0]).norm() < 1e-12);

        // Gram-Schmidt residual of a random vector is orthogonal to the span
        let extra = AmbientVector::new(
            (0..6)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect(),
        )
        .unwrap();
        let mut residual = extra.clone();
        for b in &basis {
            residual = residual.sub(&b.scaled(residual.dot(b)));
        }
        let killed = project_onto_span(&basis, &residual).unwrap();
        assert!(killed.norm() < 1e-12);

        // v = basis[0] + residual projects back to basis[0]
        let v = basis[0].add(&residual);
        let back = project_onto_span(&basis, &v).unwrap();
        assert!(back.sub(&basis[0]).norm() < 1e-12);
    }

    #[test]
    fn orthonormalize_rejects_dependent_vectors() {
        let v0 = AmbientVector::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let v1 = AmbientVector::new(vec![2.0, 1e-12, 0.0, 0.0]).unwrap();
        assert!(matches!(
            orthonormalize(&[v0, v1]),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn projection_rejects_skewed_basis() {
        let b0 = AmbientVector::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let b1 = AmbientVector::new(vec![0.6, 0.8, 0.0, 0.0]).unwrap();
        let v = AmbientVector::new(vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            project_onto_span(&[b0, b1], &v),
            Err(Error::NonOrthonormalBasis { .. })
        ));
    }

    #[test]
    fn oracle_vanishes_on_circle() {
        let p = ProfileCurve::<f64>::circle(2);
        let chart = EmbeddingChart::new(p, SpherePoint::axis(2, 0), 1e-4).unwrap();
        for s in [0.2, 1.0, 2.7] {
            let h = oracle_mean_curvature_in_l(&chart, s).unwrap();
            assert!(h.norm() < 1e-6, "|H| = {} at s = {s}", h.norm());
        }
    }

    #[test]
    fn oracle_matches_closed_form_on_line() {
        let p = ProfileCurve::<f64>::line(3);
        let chart = EmbeddingChart::new(p, SpherePoint::axis(3, 0), 1e-5).unwrap();
        let h = oracle_mean_curvature_in_l(&chart, 2.0).unwrap();
        let expected = [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for (got, want) in h.as_slice().iter().zip(expected) {
            assert!((got - want).abs() < 1e-4);
        }
    }

    #[test]
    fn oracle_matches_closed_form_on_expander() {
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 0.0, 2).unwrap();
        let p = ProfileCurve::expander(params);
        let x = SpherePoint::axis(2, 0);
        let chart = EmbeddingChart::new(p.clone(), x.clone(), 1e-5).unwrap();
        let oracle = oracle_mean_curvature_in_l(&chart, 1.0).unwrap();
        let closed = mean_curvature_in_l(&p, 1.0, &x).unwrap();
        let rel = oracle.sub(&closed.h).norm() / closed.h.norm();
        assert!(rel <= 1e-4, "rel err {rel}");
    }

    #[test]
    fn decomposition_residual_is_normal_to_l() {
        let params = ExpanderParams::<f64>::new(2.0, 1.5, 0.5, 3).unwrap();
        let p = ProfileCurve::expander(params);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for s in [0.4, 1.2, 2.6] {
            let x = random_sphere_point(&mut rng, 3);
            let chart = EmbeddingChart::new(p.clone(), x, 1e-5).unwrap();
            let frame = build_frame(&chart, s).unwrap();
            let h_bar = ambient_mean_curvature_fd(&chart, s).unwrap();
            let h = project_onto_span(&frame.tangent_l, &h_bar).unwrap();
            let residual = h_bar.sub(&h);
            for b in &frame.tangent_l {
                assert!(residual.dot(b).abs() <= 1e-8, "dot {}", residual.dot(b));
            }
        }
    }

    #[test]
    fn base_point_independence_under_rotation() {
        // evaluated at moderate |w| and fd_step 1e-3 so rounding noise in the
        // stencils stays below the 1e-8 budget
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 0.0, 3).unwrap();
        let p = ProfileCurve::expander(params);
        let s = 0.5;
        let x = SpherePoint::axis(3, 0);
        let chart = EmbeddingChart::new(p.clone(), x.clone(), 1e-3).unwrap();
        let h_at_x = oracle_mean_curvature_in_l(&chart, s).unwrap();

        // rotate the base point by an explicit rotation in the (e1, e2) plane
        let theta: f64 = 0.83;
        let rot = vec![
            vec![theta.cos(), -theta.sin(), 0.0],
            vec![theta.sin(), theta.cos(), 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let rx = x.rotated(&rot).unwrap();
        let chart_r = EmbeddingChart::new(p, rx, 1e-3).unwrap();
        let h_at_rx = oracle_mean_curvature_in_l(&chart_r, s).unwrap();
        let diff = h_at_rx.sub(&h_at_x.rotated_blockwise(&rot)).norm();
        assert!(diff <= 1e-8, "diff {diff}");
    }

    #[test]
    fn oracle_coefficient_tracks_closed_form() {
        // scalar comparison used by the CLI curvature sweep
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 1.0, 3).unwrap();
        let p = ProfileCurve::expander(params);
        let x = SpherePoint::axis(3, 2);
        let chart = EmbeddingChart::new(p.clone(), x.clone(), 1e-5).unwrap();
        for s in [0.5, 1.5, 2.5] {
            let oracle_h = oracle_mean_curvature_in_l(&chart, s).unwrap();
            let ds = AmbientVector::embed(&x, p.eval_wdot(s).unwrap());
            let oracle_coeff = -oracle_h.dot(&ds) / ds.norm_sq();
            let closed = flow_coefficient(&p, s).unwrap();
            assert!(
                (oracle_coeff - closed).abs() <= 1e-4 * (1.0 + closed.abs()),
                "s = {s}: {oracle_coeff} vs {closed}"
            );
        }
    }
}
