//! Reduced flow of the slice parameter: df/dt = -G(f), integrated by an
//! embedded Dormand-Prince 5(4) pair with PI step-size control.
//!
//! Termination is threefold: reaching t_end, finite-time extinction through
//! the f_min guard (with the extinction time extrapolated from the last steps
//! of f^2, which is asymptotically linear in t), or, on the E = 1 expander
//! branch, convergence to zero detected by switching to the exact linearized
//! solution once f drops below the linearization threshold.

use crate::curvature::flow_coefficient;
use crate::profile::{ExpanderParams, ProfileCurve};
use crate::{Error, Real, Result};

/// Largest number of retained trace samples; longer traces are thinned by
/// uniform stride decimation.
const MAX_SAMPLES: usize = 10_000;

/// Below this f the E = 1 branch switches to the exact linearized solution.
const LINEARIZE_BELOW: f64 = 1e-6;

/// dt floor of the step controller.
const MIN_STEP: f64 = 1e-14;

/// With dt at the floor, f at or below this value is attributed to the
/// extinction funnel rather than reported as an error.
const EXTINCTION_FUNNEL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig<T> {
    /// Initial slice parameter f(0) = s_0.
    pub f0: T,
    pub t_end: T,
    pub rel_tol: T,
    pub abs_tol: T,
    /// Extinction threshold.
    pub f_min: T,
}

impl<T: Real> FlowConfig<T> {
    pub fn new(f0: T, t_end: T) -> Self {
        Self {
            f0,
            t_end,
            rel_tol: T::of(1e-10),
            abs_tol: T::of(1e-12),
            f_min: T::of(1e-8),
        }
    }

    pub fn with_tolerances(mut self, rel_tol: T, abs_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_f_min(mut self, f_min: T) -> Self {
        self.f_min = f_min;
        self
    }

    pub fn validate(&self, profile: &ProfileCurve<T>) -> Result<()> {
        if !profile.interior_contains(self.f0) {
            let (lo, hi) = profile.domain();
            return Err(Error::DomainViolation {
                s: self.f0.as_f64(),
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        if !(self.t_end > T::zero() && self.t_end.is_finite()) {
            return Err(Error::ParameterViolation(format!(
                "t_end must be positive and finite, got {}",
                self.t_end
            )));
        }
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > T::zero() && tol <= T::of(1e-2)) {
                return Err(Error::ParameterViolation(format!(
                    "{name} must lie in (0, 1e-2], got {tol}"
                )));
            }
        }
        if !(self.f_min > T::zero() && self.f_min < self.f0) {
            return Err(Error::ParameterViolation(format!(
                "f_min must lie in (0, f0), got {}",
                self.f_min
            )));
        }
        Ok(())
    }
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination<T> {
    ReachedTEnd,
    /// f crossed f_min; carries the extrapolated extinction time.
    Extinction {
        t_ext: T,
    },
    /// E = 1 branch entered the exponential tail; carries the decay rate.
    ConvergedToZero {
        rate: T,
    },
}

/// Time series of the reduced flow with termination metadata.
///
/// Slopes and curvatures at the samples are retained for dense output; the
/// quintic Hermite interpolant keeps the interpolation error comparable to
/// the integration error even where f has large higher derivatives near
/// extinction (a cubic could not).
#[derive(Debug, Clone)]
pub struct FlowTrace<T> {
    samples: Vec<(T, T)>,
    slopes: Vec<T>,
    curvatures: Vec<T>,
    termination: Termination<T>,
}

impl<T: Real> FlowTrace<T> {
    pub fn samples(&self) -> &[(T, T)] {
        &self.samples
    }

    pub fn termination(&self) -> Termination<T> {
        self.termination
    }

    pub fn first(&self) -> (T, T) {
        self.samples[0]
    }

    pub fn last(&self) -> (T, T) {
        *self.samples.last().unwrap()
    }

    /// Quintic Hermite interpolation between stored samples; `None` outside
    /// the covered time range.
    pub fn eval(&self, t: T) -> Option<T> {
        let (t0, _) = self.first();
        let (t1, _) = self.last();
        if t < t0 || t > t1 {
            return None;
        }
        let idx = match self
            .samples
            .binary_search_by(|(tk, _)| tk.partial_cmp(&t).expect("ordered times"))
        {
            Ok(i) => return Some(self.samples[i].1),
            Err(i) => i - 1,
        };
        let (ta, fa) = self.samples[idx];
        let (tb, fb) = self.samples[idx + 1];
        let h = tb - ta;
        let ma = self.slopes[idx] * h;
        let mb = self.slopes[idx + 1] * h;
        let ka = self.curvatures[idx] * h * h;
        let kb = self.curvatures[idx + 1] * h * h;
        let u = (t - ta) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let u4 = u3 * u;
        let u5 = u4 * u;
        let c = |x: f64| T::of(x);
        let h0 = T::one() - c(10.0) * u3 + c(15.0) * u4 - c(6.0) * u5;
        let h1 = u - c(6.0) * u3 + c(8.0) * u4 - c(3.0) * u5;
        let h2 = c(0.5) * u2 - c(1.5) * u3 + c(1.5) * u4 - c(0.5) * u5;
        let h3 = c(10.0) * u3 - c(15.0) * u4 + c(6.0) * u5;
        let h4 = -c(4.0) * u3 + c(7.0) * u4 - c(3.0) * u5;
        let h5 = c(0.5) * u3 - u4 + c(0.5) * u5;
        Some(h0 * fa + h1 * ma + h2 * ka + h3 * fb + h4 * mb + h5 * kb)
    }
}

/// Dormand-Prince 5(4) tableau.
struct Tableau<T> {
    a: [[T; 6]; 6],
    b5: [T; 7],
    b4: [T; 7],
}

fn tableau<T: Real>() -> Tableau<T> {
    let z = T::zero();
    let f = |x: f64| T::of(x);
    Tableau {
        a: [
            [f(1.0 / 5.0), z, z, z, z, z],
            [f(3.0 / 40.0), f(9.0 / 40.0), z, z, z, z],
            [f(44.0 / 45.0), f(-56.0 / 15.0), f(32.0 / 9.0), z, z, z],
            [
                f(19372.0 / 6561.0),
                f(-25360.0 / 2187.0),
                f(64448.0 / 6561.0),
                f(-212.0 / 729.0),
                z,
                z,
            ],
            [
                f(9017.0 / 3168.0),
                f(-355.0 / 33.0),
                f(46732.0 / 5247.0),
                f(49.0 / 176.0),
                f(-5103.0 / 18656.0),
                z,
            ],
            [
                f(35.0 / 384.0),
                z,
                f(500.0 / 1113.0),
                f(125.0 / 192.0),
                f(-2187.0 / 6784.0),
                f(11.0 / 84.0),
            ],
        ],
        b5: [
            f(35.0 / 384.0),
            z,
            f(500.0 / 1113.0),
            f(125.0 / 192.0),
            f(-2187.0 / 6784.0),
            f(11.0 / 84.0),
            z,
        ],
        b4: [
            f(5179.0 / 57600.0),
            z,
            f(7571.0 / 16695.0),
            f(393.0 / 640.0),
            f(-92097.0 / 339200.0),
            f(187.0 / 2100.0),
            f(1.0 / 40.0),
        ],
    }
}

struct Stepper<'a, T> {
    profile: &'a ProfileCurve<T>,
    tableau: Tableau<T>,
}

impl<'a, T: Real> Stepper<'a, T> {
    /// Right-hand side -G(f); `None` marks an unusable stage value.
    fn rhs(&self, f: T) -> Option<T> {
        let usable = f.is_finite() && f > T::zero();
        if !usable {
            return None;
        }
        match flow_coefficient(self.profile, f) {
            Ok(g) if g.is_finite() => Some(-g),
            _ => None,
        }
    }

    /// f'' = G'(f) G(f) along the flow, with G' from a central difference of
    /// the coefficient. Used only by the dense-output interpolant; falls back
    /// to 0 when G is not evaluable on both sides.
    fn curvature(&self, f: T, slope: T) -> T {
        let delta = (f.abs() * T::of(1e-6)).max(T::of(1e-12));
        match (self.rhs(f + delta), self.rhs(f - delta)) {
            (Some(p), Some(m)) => {
                // rhs = -G, so G' = -(rhs(f+d) - rhs(f-d)) / (2d) and G = -slope
                let g_prime = -(p - m) / (T::of(2.0) * delta);
                g_prime * (-slope)
            }
            _ => T::zero(),
        }
    }

    /// One embedded step from (t, y): returns (y5, error estimate).
    fn step(&self, y: T, h: T, k1: T) -> Option<(T, T)> {
        let tab = &self.tableau;
        let mut k = [
            k1,
            T::zero(),
            T::zero(),
            T::zero(),
            T::zero(),
            T::zero(),
            T::zero(),
        ];
        for stage in 1..7 {
            let mut acc = T::zero();
            for (j, kj) in k.iter().enumerate().take(stage) {
                acc = acc + tab.a[stage - 1][j] * *kj;
            }
            k[stage] = self.rhs(y + h * acc)?;
        }
        let mut y5 = T::zero();
        let mut y4 = T::zero();
        for (j, kj) in k.iter().enumerate() {
            y5 = y5 + tab.b5[j] * *kj;
            y4 = y4 + tab.b4[j] * *kj;
        }
        let y5 = y + h * y5;
        let y4 = y + h * y4;
        Some((y5, (y5 - y4).abs()))
    }
}

struct TraceBuilder<T> {
    samples: Vec<(T, T)>,
    slopes: Vec<T>,
    curvatures: Vec<T>,
    /// Ring of the last accepted samples, kept at full resolution for the
    /// extinction extrapolation even after thinning.
    recent: Vec<(T, T)>,
}

impl<T: Real> TraceBuilder<T> {
    fn new() -> Self {
        Self {
            samples: Vec::new(),
            slopes: Vec::new(),
            curvatures: Vec::new(),
            recent: Vec::new(),
        }
    }

    fn push(&mut self, t: T, f: T, slope: T, curvature: T) {
        self.samples.push((t, f));
        self.slopes.push(slope);
        self.curvatures.push(curvature);
        self.recent.push((t, f));
        if self.recent.len() > 3 {
            self.recent.remove(0);
        }
        if self.samples.len() > MAX_SAMPLES {
            self.decimate();
        }
    }

    fn decimate(&mut self) {
        let last = self.samples.len() - 1;
        let keep: Vec<usize> = (0..=last).step_by(2).chain(std::iter::once(last)).collect();
        let mut samples = Vec::with_capacity(keep.len());
        let mut slopes = Vec::with_capacity(keep.len());
        let mut curvatures = Vec::with_capacity(keep.len());
        let mut prev = usize::MAX;
        for idx in keep {
            if idx != prev {
                samples.push(self.samples[idx]);
                slopes.push(self.slopes[idx]);
                curvatures.push(self.curvatures[idx]);
                prev = idx;
            }
        }
        self.samples = samples;
        self.slopes = slopes;
        self.curvatures = curvatures;
    }

    fn finish(self, termination: Termination<T>) -> FlowTrace<T> {
        FlowTrace {
            samples: self.samples,
            slopes: self.slopes,
            curvatures: self.curvatures,
            termination,
        }
    }
}

/// Quadratic (fallback linear) extrapolation of f^2 to zero past the last
/// accepted samples.
fn extrapolate_extinction<T: Real>(recent: &[(T, T)]) -> T {
    let pts: Vec<(T, T)> = recent.iter().map(|&(t, f)| (t, f * f)).collect();
    let (t_last, y_last) = *pts.last().unwrap();
    if pts.len() >= 3 {
        let (t0, y0) = pts[pts.len() - 3];
        let (t1, y1) = pts[pts.len() - 2];
        // Newton form through three points:
        // y(t) = y0 + c1 (t - t0) + c2 (t - t0)(t - t1)
        let c1 = (y1 - y0) / (t1 - t0);
        let c2 = (((y_last - y1) / (t_last - t1)) - c1) / (t_last - t0);
        // as a t^2 + b t + c:
        let a = c2;
        let b = c1 - c2 * (t0 + t1);
        let c = y0 - c1 * t0 + c2 * t0 * t1;
        if a.abs() > T::epsilon() {
            let disc = b * b - T::of(4.0) * a * c;
            if disc >= T::zero() {
                let sq = disc.sqrt();
                let r1 = (-b + sq) / (T::of(2.0) * a);
                let r2 = (-b - sq) / (T::of(2.0) * a);
                let mut best = T::infinity();
                for r in [r1, r2] {
                    if r >= t_last && r < best {
                        best = r;
                    }
                }
                if best.is_finite() {
                    return best;
                }
            }
        } else if c1.abs() > T::epsilon() {
            // effectively linear data: root of the secant line
            let root = t_last - y_last * (t_last - t1) / (y_last - y1);
            if root >= t_last {
                return root;
            }
        }
    }
    if pts.len() >= 2 {
        let (t1, y1) = pts[pts.len() - 2];
        if y_last < y1 {
            return t_last + y_last * (t_last - t1) / (y1 - y_last);
        }
    }
    t_last
}

/// Integrate the reduced flow from cfg.f0 over [0, cfg.t_end].
pub fn integrate_flow<T: Real>(
    profile: &ProfileCurve<T>,
    cfg: &FlowConfig<T>,
) -> Result<FlowTrace<T>> {
    cfg.validate(profile)?;
    let stepper = Stepper {
        profile,
        tableau: tableau(),
    };
    let linearize = profile
        .params()
        .filter(|p| p.is_steady())
        .map(|p| p.decay_rate());

    let mut trace = TraceBuilder::new();
    let mut t = T::zero();
    let mut y = cfg.f0;
    let mut k1 = stepper
        .rhs(y)
        .ok_or_else(|| Error::ParameterViolation(format!("flow RHS not evaluable at f0 = {y}")))?;
    trace.push(t, y, k1, stepper.curvature(y, k1));

    // initial step from the local slope
    let mut h = (T::of(0.01) * y.abs() / k1.abs().max(T::of(1e-10)))
        .min(cfg.t_end * T::of(0.1))
        .max(T::of(1e-10));
    let mut err_prev = T::of(1e-4);
    let safety = T::of(0.9);
    let alpha = T::of(0.7 / 5.0);
    let beta = T::of(0.4 / 5.0);
    let t_done = cfg.t_end * (T::one() - T::epsilon() * T::of(4.0));

    loop {
        if t >= t_done {
            return Ok(trace.finish(Termination::ReachedTEnd));
        }
        if let Some(rate) = linearize {
            if y < T::of(LINEARIZE_BELOW) {
                // exact exponential tail of the E = 1 branch
                append_linearized_tail(&mut trace, t, y, rate, cfg.t_end);
                return Ok(trace.finish(Termination::ConvergedToZero { rate: -rate }));
            }
        }
        h = h.min(cfg.t_end - t);
        if h < T::of(MIN_STEP) {
            if y <= T::of(EXTINCTION_FUNNEL) {
                let t_ext = extrapolate_extinction(&trace.recent);
                return Ok(trace.finish(Termination::Extinction { t_ext }));
            }
            return Err(Error::StepSizeUnderflow { t: t.as_f64() });
        }

        match stepper.step(y, h, k1) {
            Some((y5, err)) => {
                let tol = cfg.abs_tol + cfg.rel_tol * y.abs().max(y5.abs());
                let err_norm = err / tol;
                if err_norm <= T::one() {
                    // accepted
                    t = (t + h).min(cfg.t_end);
                    y = y5;
                    if y <= cfg.f_min {
                        if y > T::zero() {
                            if let Some(slope) = stepper.rhs(y) {
                                trace.push(t, y, slope, stepper.curvature(y, slope));
                            }
                        }
                        let t_ext = extrapolate_extinction(&trace.recent);
                        return Ok(trace.finish(Termination::Extinction { t_ext }));
                    }
                    k1 = match stepper.rhs(y) {
                        Some(v) => v,
                        None => {
                            let t_ext = extrapolate_extinction(&trace.recent);
                            return Ok(trace.finish(Termination::Extinction { t_ext }));
                        }
                    };
                    trace.push(t, y, k1, stepper.curvature(y, k1));
                    let e = err_norm.max(T::of(1e-10));
                    let fac = safety * e.powf(-alpha) * err_prev.powf(beta);
                    h = h * fac.min(T::of(5.0)).max(T::of(0.2));
                    err_prev = e;
                } else {
                    let fac = (safety * err_norm.powf(T::of(-0.2))).max(T::of(0.1));
                    h = h * fac;
                }
            }
            None => {
                // a stage left the domain; shrink hard
                h = h * T::of(0.25);
            }
        }
    }
}

fn append_linearized_tail<T: Real>(trace: &mut TraceBuilder<T>, t0: T, f0: T, rate: T, t_end: T) {
    let steps = 400usize;
    let dt = (t_end - t0) / T::of(steps as f64);
    let forward = dt > T::zero();
    if !forward {
        return;
    }
    for i in 1..=steps {
        let t = if i == steps {
            t_end
        } else {
            t0 + dt * T::of(i as f64)
        };
        let f = f0 * (-rate * (t - t0)).exp();
        trace.push(t, f, -rate * f, rate * rate * f);
    }
}

/// Leading-order extinction time E f0^2 / (2 (n-1)(E-1)) of the E > 1 branch
/// started from a small f0.
pub fn extinction_time_estimate<T: Real>(params: &ExpanderParams<T>, f0: T) -> Result<T> {
    if params.e() <= T::one() {
        return Err(Error::ParameterViolation(format!(
            "extinction estimate needs E > 1, got {}",
            params.e()
        )));
    }
    if !(f0 > T::zero() && f0 <= T::of(0.1)) {
        return Err(Error::ParameterViolation(format!(
            "f0 must lie in (0, 0.1], got {f0}"
        )));
    }
    let n_minus_1 = T::of((params.n() - 1) as f64);
    Ok(params.e() * f0 * f0 / (T::of(2.0) * n_minus_1 * (params.e() - T::one())))
}

/// Least-squares decay rate of the trace tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate<T> {
    /// Slope of log f versus t over the tail with f < 0.1.
    pub rate: T,
    /// Set when the trace is flat (stationary flow); rate is then 0.
    pub flat: bool,
}

pub fn decay_rate_estimate<T: Real>(trace: &FlowTrace<T>) -> Result<DecayRate<T>> {
    let samples = trace.samples();
    let f_first = samples[0].1;
    let spread = samples
        .iter()
        .fold(T::zero(), |acc, &(_, f)| acc.max((f - f_first).abs()));
    if spread <= T::of(1e-12).max(T::epsilon() * T::of(16.0)) * f_first.abs().max(T::one()) {
        return Ok(DecayRate {
            rate: T::zero(),
            flat: true,
        });
    }
    let tail: Vec<(T, T)> = samples
        .iter()
        .filter(|&&(_, f)| f < T::of(0.1) && f > T::zero())
        .map(|&(t, f)| (t, f.ln()))
        .collect();
    if tail.len() < 10 {
        return Err(Error::InsufficientTail {
            qualifying: tail.len(),
        });
    }
    let len = T::of(tail.len() as f64);
    let (mut st, mut sy, mut stt, mut sty) = (T::zero(), T::zero(), T::zero(), T::zero());
    for &(t, y) in &tail {
        st = st + t;
        sy = sy + y;
        stt = stt + t * t;
        sty = sty + t * y;
    }
    let denom = len * stt - st * st;
    Ok(DecayRate {
        rate: (len * sty - st * sy) / denom,
        flat: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ExpanderParams;

    #[test]
    fn line_recovers_shrinking_sphere() {
        // df/dt = -(n-1)/f gives f^2 = f0^2 - 2(n-1) t
        let p = ProfileCurve::<f64>::line(3);
        let cfg = FlowConfig::new(1.0, 1.0).with_tolerances(1e-10, 1e-12);
        let trace = integrate_flow(&p, &cfg).unwrap();
        match trace.termination() {
            Termination::Extinction { t_ext } => {
                assert!((t_ext - 0.25).abs() < 1e-6, "t_ext {t_ext}");
            }
            other => panic!("expected extinction, got {other:?}"),
        }
        for &(t, f) in trace.samples() {
            assert!((f * f - (1.0 - 4.0 * t)).abs() < 1e-8, "at t = {t}");
        }
        // dense output
        let f02 = trace.eval(0.2).unwrap();
        assert!((f02 - 0.2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn circle_is_stationary() {
        let p = ProfileCurve::<f64>::circle(2);
        let cfg = FlowConfig::new(1.5, 10.0);
        let trace = integrate_flow(&p, &cfg).unwrap();
        assert_eq!(trace.termination(), Termination::ReachedTEnd);
        for &(_, f) in trace.samples() {
            assert!((f - 1.5).abs() <= 1e-12);
        }
        let rate = decay_rate_estimate(&trace).unwrap();
        assert!(rate.flat);
        assert_eq!(rate.rate, 0.0);
    }

    #[test]
    fn steady_expander_converges_with_known_rate() {
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 0.0, 2).unwrap();
        let p = ProfileCurve::expander(params);
        let cfg = FlowConfig::new(2.0, 10.0).with_tolerances(1e-10, 1e-12);
        let trace = integrate_flow(&p, &cfg).unwrap();
        match trace.termination() {
            Termination::ConvergedToZero { rate } => assert!((rate + 2.0).abs() < 1e-12),
            other => panic!("expected convergence, got {other:?}"),
        }
        // strictly decreasing
        for pair in trace.samples().windows(2) {
            assert!(pair[1].1 < pair[0].1);
        }
        let (t_last, f_last) = trace.last();
        assert!((t_last - 10.0).abs() < 1e-12);
        assert!(f_last < 1e-3);
        let est = decay_rate_estimate(&trace).unwrap();
        assert!(!est.flat);
        assert!((est.rate + 2.0).abs() <= 0.04, "rate {}", est.rate);
    }

    #[test]
    fn alpha_weighted_rate() {
        // (n-1)(n a + alpha) = 2 * (3 + 1) = 8
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 1.0, 3).unwrap();
        let p = ProfileCurve::expander(params);
        let cfg = FlowConfig::new(1.0, 6.0).with_tolerances(1e-10, 1e-12);
        let trace = integrate_flow(&p, &cfg).unwrap();
        let est = decay_rate_estimate(&trace).unwrap();
        assert!((est.rate + 8.0).abs() <= 0.16, "rate {}", est.rate);
    }

    #[test]
    fn expanding_branch_has_finite_extinction() {
        let params = ExpanderParams::<f64>::new(1.0, 2.0, 0.0, 2).unwrap();
        let p = ProfileCurve::expander(params);
        let cfg = FlowConfig::new(0.01, 1.0).with_tolerances(1e-10, 1e-14);
        let trace = integrate_flow(&p, &cfg).unwrap();
        let t_ext = match trace.termination() {
            Termination::Extinction { t_ext } => t_ext,
            other => panic!("expected extinction, got {other:?}"),
        };
        let model = extinction_time_estimate(&params, 0.01).unwrap();
        assert!((model - 1e-4).abs() < 1e-18);
        assert!(
            (t_ext - model).abs() <= 0.1 * model,
            "measured {t_ext} vs model {model}"
        );
    }

    #[test]
    fn extinction_estimate_examples() {
        let params = ExpanderParams::<f64>::new(1.0, 3.0, 0.0, 3).unwrap();
        let est = extinction_time_estimate(&params, 0.01).unwrap();
        assert!((est - 3.75e-5).abs() < 1e-19);
        // E -> infinity approaches the line-profile law f0^2 / (2(n-1))
        let params = ExpanderParams::<f64>::new(1.0, 1e9, 0.0, 3).unwrap();
        let est = extinction_time_estimate(&params, 0.01).unwrap();
        assert!((est - 2.5e-5) / 2.5e-5 < 1e-8);
        // E = 1 rejected
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 0.0, 3).unwrap();
        assert!(extinction_time_estimate(&params, 0.01).is_err());
    }

    #[test]
    fn no_extinction_for_steady_branch() {
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 0.5, 2).unwrap();
        let p = ProfileCurve::expander(params);
        let cfg = FlowConfig::new(1.0, 100.0).with_tolerances(1e-8, 1e-10);
        let trace = integrate_flow(&p, &cfg).unwrap();
        assert!(!matches!(
            trace.termination(),
            Termination::Extinction { .. }
        ));
    }

    #[test]
    fn tolerance_tightening_converges() {
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 0.0, 2).unwrap();
        let p = ProfileCurve::expander(params);
        let loose_tol = 1e-4;
        let loose = integrate_flow(
            &p,
            &FlowConfig::new(2.0, 2.0).with_tolerances(loose_tol, 1e-12),
        )
        .unwrap();
        let tight = integrate_flow(
            &p,
            &FlowConfig::new(2.0, 2.0).with_tolerances(loose_tol / 100.0, 1e-12),
        )
        .unwrap();
        let diff = (loose.last().1 - tight.last().1).abs();
        assert!(diff < 10.0 * loose_tol, "diff {diff}");
    }

    #[test]
    fn semigroup_property() {
        let params = ExpanderParams::<f64>::new(1.0, 1.0, 0.0, 2).unwrap();
        let p = ProfileCurve::expander(params);
        let direct =
            integrate_flow(&p, &FlowConfig::new(2.0, 1.5).with_tolerances(1e-10, 1e-12)).unwrap();
        let first =
            integrate_flow(&p, &FlowConfig::new(2.0, 0.5).with_tolerances(1e-10, 1e-12)).unwrap();
        let restart = integrate_flow(
            &p,
            &FlowConfig::new(first.last().1, 1.0).with_tolerances(1e-10, 1e-12),
        )
        .unwrap();
        let diff = (direct.last().1 - restart.last().1).abs();
        assert!(diff < 1e-7, "diff {diff}");
    }

    #[test]
    fn integrator_runs_at_f32() {
        let p = ProfileCurve::<f32>::line(3);
        let cfg = FlowConfig::new(1.0f32, 1.0)
            .with_tolerances(1e-6, 1e-7)
            .with_f_min(1e-4);
        let trace = integrate_flow(&p, &cfg).unwrap();
        match trace.termination() {
            Termination::Extinction { t_ext } => assert!((t_ext - 0.25).abs() < 1e-3),
            other => panic!("expected extinction, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let p = ProfileCurve::<f64>::line(3);
        assert!(FlowConfig::new(0.0, 1.0).validate(&p).is_err());
        assert!(FlowConfig::new(1.0, -1.0).validate(&p).is_err());
        assert!(FlowConfig::new(1.0, 1.0)
            .with_tolerances(0.5, 1e-12)
            .validate(&p)
            .is_err());
        assert!(FlowConfig::new(1.0, 1.0)
            .with_f_min(2.0)
            .validate(&p)
            .is_err());
        assert!(FlowConfig::new(1.0, 1.0).validate(&p).is_ok());
    }

    #[test]
    fn trace_thinning_keeps_endpoints() {
        let mut b = TraceBuilder::<f64>::new();
        for i in 0..25_000 {
            let t = i as f64 * 1e-4;
            b.push(t, 1.0 / (1.0 + t), -1.0, 0.0);
        }
        let trace = b.finish(Termination::ReachedTEnd);
        assert!(trace.samples().len() <= MAX_SAMPLES);
        assert_eq!(trace.first().0, 0.0);
        assert!((trace.last().0 - 2.4999).abs() < 1e-9);
        // still strictly increasing in t
        for w in trace.samples().windows(2) {
            assert!(w[1].0 > w[0].0);
        }
    }

    #[test]
    fn insufficient_tail_is_reported() {
        let p = ProfileCurve::<f64>::line(3);
        // stops long before f < 0.1
        let cfg = FlowConfig::new(1.0, 0.01);
        let trace = integrate_flow(&p, &cfg).unwrap();
        assert!(matches!(
            decay_rate_estimate(&trace),
            Err(Error::InsufficientTail { .. })
        ));
    }
}
