//! Horizontal curves, lifting, lengths and holonomy.
//!
//! A curve γ(s) = (z(s), t(s)) in ℍ is horizontal when ṫ = −2Im(z̄ż); its
//! horizontal length is ∫|ż|ds, the Euclidean length of the projection
//! Π(z,t) = z. In ℍ* horizontality reads ⟨γ̇,𝐓⟩ = (ṫ + 2Im(z̄ż))/(2|z|²) = 0
//! and the length is ∫|ż|/|z| ds, which equals the hyperbolic length of the
//! projected curve α∘γ in ℒ.
//!
//! Both bundles are Ehresmann complete: a plane curve lifts to ℍ through
//! t(s) = t₀ − 2∫Im(z̄ż), and an ℒ-curve lifts to ℍ* through
//! z(s) = √(−Re ζ(s))·e^{iθ(s)}, t = Im ζ, θ(s) = θ₀ + ∫ Im ζ̇/(2Re ζ).
//! Around a closed loop the lift does not close up: Δt = −4·Area (ℍ) and
//! Δθ = −2·Area_h (ℍ*), which [`holonomy_closed`] checks against area
//! oracles.
//!
//! Curves are uniform-parameter sample arrays with an optional analytic
//! evaluator; derivatives use the evaluator when present and Fornberg
//! finite-difference stencils on the nodes otherwise.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::GroupKind;
use crate::numerics::{adaptive_gl, fornberg_weights, interpolant_integral, QuadOpts};

/// Default gate for the horizontality defect before a length is computed.
pub const DEFAULT_HORIZONTAL_TOL: f64 = 1e-6;

/// Domain tag for a complex-valued curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneDomain {
    /// All of ℂ.
    Plane,
    /// The left half-plane ℒ = {Re ζ < 0}.
    LeftHalfPlane,
}

type PathFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
type GroupPathFn = Arc<dyn Fn(f64) -> (Complex64, f64) + Send + Sync>;

/// A curve in ℂ or ℒ: samples plus an optional analytic evaluator.
#[derive(Clone)]
pub struct PlaneCurve {
    pub domain: PlaneDomain,
    samples: Vec<(f64, Complex64)>,
    value: Option<PathFn>,
    velocity: Option<PathFn>,
}

impl PlaneCurve {
    pub fn from_samples(samples: Vec<(f64, Complex64)>, domain: PlaneDomain) -> Result<Self> {
        validate_params(samples.iter().map(|(s, _)| *s))?;
        if domain == PlaneDomain::LeftHalfPlane {
            for (_, z) in &samples {
                if z.re >= 0.0 {
                    return Err(Error::LeftHalfPlaneViolation { re: z.re, im: z.im });
                }
            }
        }
        Ok(PlaneCurve {
            domain,
            samples,
            value: None,
            velocity: None,
        })
    }

    /// Build from closures for the value and its derivative, sampling `n`
    /// uniform parameters on [a, b].
    pub fn from_closures<F, G>(
        a: f64,
        b: f64,
        n: usize,
        domain: PlaneDomain,
        value: F,
        velocity: G,
    ) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
        G: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        let samples: Vec<(f64, Complex64)> = uniform_params(a, b, n)
            .into_iter()
            .map(|s| (s, value(s)))
            .collect();
        let mut curve = PlaneCurve::from_samples(samples, domain)?;
        curve.value = Some(Arc::new(value));
        curve.velocity = Some(Arc::new(velocity));
        Ok(curve)
    }

    pub fn samples(&self) -> &[(f64, Complex64)] {
        &self.samples
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    pub fn is_analytic(&self) -> bool {
        self.value.is_some()
    }

    pub fn value_at(&self, s: f64) -> Option<Complex64> {
        self.value.as_ref().map(|f| f(s))
    }

    pub fn velocity_at(&self, s: f64) -> Option<Complex64> {
        self.velocity.as_ref().map(|f| f(s))
    }

    /// Velocity at every node: analytic when available, else Fornberg stencils.
    pub fn node_velocities(&self) -> Result<Vec<Complex64>> {
        if let Some(vel) = &self.velocity {
            return Ok(self.samples.iter().map(|(s, _)| vel(*s)).collect());
        }
        let params: Vec<f64> = self.samples.iter().map(|(s, _)| *s).collect();
        let re: Vec<f64> = self.samples.iter().map(|(_, z)| z.re).collect();
        let im: Vec<f64> = self.samples.iter().map(|(_, z)| z.im).collect();
        let dre = node_derivatives(&params, &re)?;
        let dim = node_derivatives(&params, &im)?;
        Ok(dre
            .into_iter()
            .zip(dim)
            .map(|(x, y)| Complex64::new(x, y))
            .collect())
    }
}

/// A curve in ℍ or ℍ*.
#[derive(Clone)]
pub struct GroupCurve {
    pub kind: GroupKind,
    samples: Vec<(f64, Complex64, f64)>,
    value: Option<GroupPathFn>,
    velocity: Option<GroupPathFn>,
}

impl GroupCurve {
    pub fn from_samples(samples: Vec<(f64, Complex64, f64)>, kind: GroupKind) -> Result<Self> {
        validate_params(samples.iter().map(|(s, _, _)| *s))?;
        if kind == GroupKind::Star {
            for (_, z, _) in &samples {
                if z.norm() <= crate::group::MIN_STAR_MODULUS {
                    return Err(Error::DomainViolation(
                        "ℍ* curve node has zero modulus".into(),
                    ));
                }
            }
        }
        Ok(GroupCurve {
            kind,
            samples,
            value: None,
            velocity: None,
        })
    }

    pub fn from_closures<F, G>(
        a: f64,
        b: f64,
        n: usize,
        kind: GroupKind,
        value: F,
        velocity: G,
    ) -> Result<Self>
    where
        F: Fn(f64) -> (Complex64, f64) + Send + Sync + 'static,
        G: Fn(f64) -> (Complex64, f64) + Send + Sync + 'static,
    {
        let samples: Vec<(f64, Complex64, f64)> = uniform_params(a, b, n)
            .into_iter()
            .map(|s| {
                let (z, t) = value(s);
                (s, z, t)
            })
            .collect();
        let mut curve = GroupCurve::from_samples(samples, kind)?;
        curve.value = Some(Arc::new(value));
        curve.velocity = Some(Arc::new(velocity));
        Ok(curve)
    }

    pub fn samples(&self) -> &[(f64, Complex64, f64)] {
        &self.samples
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    pub fn is_analytic(&self) -> bool {
        self.value.is_some()
    }

    /// (ż, ṫ) at every node.
    pub fn node_velocities(&self) -> Result<Vec<(Complex64, f64)>> {
        if let Some(vel) = &self.velocity {
            return Ok(self.samples.iter().map(|(s, _, _)| vel(*s)).collect());
        }
        let params: Vec<f64> = self.samples.iter().map(|(s, _, _)| *s).collect();
        let re: Vec<f64> = self.samples.iter().map(|(_, z, _)| z.re).collect();
        let im: Vec<f64> = self.samples.iter().map(|(_, z, _)| z.im).collect();
        let tt: Vec<f64> = self.samples.iter().map(|(_, _, t)| *t).collect();
        let dre = node_derivatives(&params, &re)?;
        let dim = node_derivatives(&params, &im)?;
        let dt = node_derivatives(&params, &tt)?;
        Ok(dre
            .into_iter()
            .zip(dim)
            .zip(dt)
            .map(|((x, y), t)| (Complex64::new(x, y), t))
            .collect())
    }
}

fn uniform_params(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1).max(1) as f64)
        .collect()
}

fn validate_params<I: Iterator<Item = f64>>(params: I) -> Result<()> {
    let ps: Vec<f64> = params.collect();
    if ps.len() < 3 {
        return Err(Error::TooFewSamples {
            got: ps.len(),
            need: 3,
        });
    }
    for w in ps.windows(2) {
        if w[1] <= w[0] || !w[1].is_finite() {
            return Err(Error::DomainViolation(
                "curve parameters must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// First derivative at every node by Fornberg weights on a sliding 5-point
/// window (one-sided at the ends).
fn node_derivatives(params: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let n = params.len();
    if n < 3 {
        return Err(Error::TooFewSamples { got: n, need: 3 });
    }
    let width = 5.min(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(width / 2).min(n - width);
        let xs = &params[lo..lo + width];
        let w = fornberg_weights(params[i], xs, 1);
        let d: f64 = w
            .iter()
            .zip(&values[lo..lo + width])
            .map(|(w, v)| w * v)
            .sum();
        if !d.is_finite() {
            return Err(Error::NonFiniteDerivative);
        }
        out.push(d);
    }
    Ok(out)
}

/// Integral over the whole parameter range of nodal values, by integrating a
/// sliding cubic interpolant over each sample interval.
fn integrate_nodal(params: &[f64], values: &[f64]) -> f64 {
    let n = params.len();
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let width = 4.min(n);
        let lo = i.saturating_sub(1).min(n - width);
        acc += interpolant_integral(
            &params[lo..lo + width],
            &values[lo..lo + width],
            params[i],
            params[i + 1],
        );
    }
    acc
}

/// Prefix integrals of nodal values: out[k] = ∫ from params[0] to params[k].
fn prefix_nodal(params: &[f64], values: &[f64]) -> Vec<f64> {
    let n = params.len();
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let width = 4.min(n);
        let lo = i.saturating_sub(1).min(n - width);
        acc += interpolant_integral(
            &params[lo..lo + width],
            &values[lo..lo + width],
            params[i],
            params[i + 1],
        );
        out.push(acc);
    }
    out
}

/// Cumulative integral of a smooth integrand, exact to quadrature tolerance:
/// node prefix sums plus an adaptive tail for off-node queries.
struct Cumulative {
    params: Vec<f64>,
    prefix: Vec<f64>,
    integrand: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Cumulative {
    fn new<F>(params: Vec<f64>, integrand: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let mut prefix = Vec::with_capacity(params.len());
        prefix.push(0.0);
        let mut acc = 0.0;
        for w in params.windows(2) {
            acc += adaptive_gl(&integrand, w[0], w[1], QuadOpts::default())?;
            prefix.push(acc);
        }
        Ok(Cumulative {
            params,
            prefix,
            integrand: Arc::new(integrand),
        })
    }

    fn total(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    /// Value at arbitrary s; NaN on (exceptional) quadrature failure so that
    /// downstream consumers surface a clean error.
    fn at(&self, s: f64) -> f64 {
        let k = match self.params.binary_search_by(|p| p.partial_cmp(&s).unwrap()) {
            Ok(i) => return self.prefix[i],
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let k = k.min(self.params.len() - 1);
        let f = |u: f64| (self.integrand)(u);
        match adaptive_gl(&f, self.params[k], s, QuadOpts::default()) {
            Ok(tail) => self.prefix[k] + tail,
            Err(_) => f64::NAN,
        }
    }
}

// ---------------------------------------------------------------------------
// Horizontality and lengths
// ---------------------------------------------------------------------------

/// Max over nodes of |⟨γ̇, Reeb⟩|: |ṫ + 2Im(z̄ż)| on ℍ, divided by 2|z|² on ℍ*.
pub fn horizontality_defect(curve: &GroupCurve) -> Result<f64> {
    let vels = curve.node_velocities()?;
    let mut defect: f64 = 0.0;
    for ((_, z, _), (zdot, tdot)) in curve.samples().iter().zip(vels) {
        let raw = tdot + 2.0 * (z.conj() * zdot).im;
        let d = match curve.kind {
            GroupKind::Heis => raw.abs(),
            GroupKind::Star => raw.abs() / (2.0 * z.norm_sqr()),
        };
        defect = defect.max(d);
    }
    Ok(defect)
}

fn gate_horizontal(curve: &GroupCurve, tol: f64) -> Result<()> {
    let defect = horizontality_defect(curve)?;
    if defect > tol {
        return Err(Error::NotHorizontal { defect, tol });
    }
    Ok(())
}

/// Horizontal length ∫|ż|ds of a horizontal curve in ℍ.
pub fn horizontal_length_heis(curve: &GroupCurve) -> Result<f64> {
    horizontal_length_heis_with_tol(curve, DEFAULT_HORIZONTAL_TOL)
}

pub fn horizontal_length_heis_with_tol(curve: &GroupCurve, tol: f64) -> Result<f64> {
    if curve.kind != GroupKind::Heis {
        return Err(Error::DomainViolation("expected a curve in ℍ".into()));
    }
    gate_horizontal(curve, tol)?;
    speed_integral(curve, |z, zdot| {
        let _ = z;
        zdot.norm()
    })
}

/// Horizontal length ∫|ż|/|z| ds of a horizontal curve in ℍ*.
pub fn horizontal_length_star(curve: &GroupCurve) -> Result<f64> {
    horizontal_length_star_with_tol(curve, DEFAULT_HORIZONTAL_TOL)
}

pub fn horizontal_length_star_with_tol(curve: &GroupCurve, tol: f64) -> Result<f64> {
    if curve.kind != GroupKind::Star {
        return Err(Error::DomainViolation("expected a curve in ℍ*".into()));
    }
    gate_horizontal(curve, tol)?;
    speed_integral(curve, |z, zdot| zdot.norm() / z.norm())
}

fn speed_integral<F>(curve: &GroupCurve, speed: F) -> Result<f64>
where
    F: Fn(Complex64, Complex64) -> f64 + Copy,
{
    let (a, b) = curve.interval();
    if let (Some(value), Some(velocity)) = (&curve.value, &curve.velocity) {
        let (value, velocity) = (value.clone(), velocity.clone());
        let f = move |s: f64| {
            let (z, _) = value(s);
            let (zdot, _) = velocity(s);
            speed(z, zdot)
        };
        return adaptive_gl(&f, a, b, QuadOpts::default());
    }
    let params: Vec<f64> = curve.samples().iter().map(|(s, _, _)| *s).collect();
    let vels = curve.node_velocities()?;
    let speeds: Vec<f64> = curve
        .samples()
        .iter()
        .zip(vels)
        .map(|((_, z, _), (zdot, _))| speed(*z, zdot))
        .collect();
    Ok(integrate_nodal(&params, &speeds))
}

/// Hyperbolic length ∫|ζ̇|/(−2Re ζ) ds of a curve in ℒ.
pub fn hyperbolic_length(curve: &PlaneCurve) -> Result<f64> {
    for (_, z) in curve.samples() {
        if z.re >= 0.0 {
            return Err(Error::LeftHalfPlaneViolation { re: z.re, im: z.im });
        }
    }
    let (a, b) = curve.interval();
    if let (Some(value), Some(velocity)) = (&curve.value, &curve.velocity) {
        let (value, velocity) = (value.clone(), velocity.clone());
        let f = move |s: f64| velocity(s).norm() / (-2.0 * value(s).re);
        return adaptive_gl(&f, a, b, QuadOpts::default());
    }
    let params: Vec<f64> = curve.samples().iter().map(|(s, _)| *s).collect();
    let vels = curve.node_velocities()?;
    let vals: Vec<f64> = curve
        .samples()
        .iter()
        .zip(vels)
        .map(|((_, z), zdot)| zdot.norm() / (-2.0 * z.re))
        .collect();
    Ok(integrate_nodal(&params, &vals))
}

// ---------------------------------------------------------------------------
// Lifts
// ---------------------------------------------------------------------------

/// Horizontal lift of a plane curve to ℍ starting at (z(a), t₀):
/// t(s) = t₀ − 2∫ₐˢ Im(z̄ż) du.
pub fn lift_plane_curve_heis(source: &PlaneCurve, t0: f64) -> Result<GroupCurve> {
    let params: Vec<f64> = source.samples().iter().map(|(s, _)| *s).collect();
    if let (Some(value), Some(velocity)) = (&source.value, &source.velocity) {
        let (v, vel) = (value.clone(), velocity.clone());
        let integrand = move |s: f64| (v(s).conj() * vel(s)).im;
        let cum = Arc::new(Cumulative::new(params.clone(), integrand)?);
        let v = value.clone();
        let val_fn = move |s: f64| (v(s), t0 - 2.0 * cum.at(s));
        let (v2, vel2) = (value.clone(), velocity.clone());
        let vel_fn = move |s: f64| {
            let zdot = vel2(s);
            (zdot, -2.0 * (v2(s).conj() * zdot).im)
        };
        let (a, b) = source.interval();
        return GroupCurve::from_closures(a, b, params.len(), GroupKind::Heis, val_fn, vel_fn);
    }
    let vels = source.node_velocities()?;
    let integrand: Vec<f64> = source
        .samples()
        .iter()
        .zip(&vels)
        .map(|((_, z), zdot)| (z.conj() * zdot).im)
        .collect();
    let prefix = prefix_nodal(&params, &integrand);
    let samples = source
        .samples()
        .iter()
        .zip(prefix)
        .map(|((s, z), acc)| (*s, *z, t0 - 2.0 * acc))
        .collect();
    GroupCurve::from_samples(samples, GroupKind::Heis)
}

/// Horizontal lift of an ℒ-curve to ℍ* starting on the fibre over ζ(a) at
/// angle θ₀: γ(s) = (√(−Re ζ)·e^{iθ(s)}, Im ζ) with θ(s) = θ₀ + ∫ Im ζ̇/(2Re ζ).
pub fn lift_hyperbolic_curve(source: &PlaneCurve, theta0: f64) -> Result<GroupCurve> {
    for (_, z) in source.samples() {
        if z.re >= 0.0 {
            return Err(Error::LeftHalfPlaneViolation { re: z.re, im: z.im });
        }
    }
    let params: Vec<f64> = source.samples().iter().map(|(s, _)| *s).collect();
    if let (Some(value), Some(velocity)) = (&source.value, &source.velocity) {
        let (v, vel) = (value.clone(), velocity.clone());
        let integrand = move |s: f64| vel(s).im / (2.0 * v(s).re);
        let cum = Arc::new(Cumulative::new(params.clone(), integrand)?);
        let v = value.clone();
        let cum_v = cum.clone();
        let val_fn = move |s: f64| {
            let zeta = v(s);
            let theta = theta0 + cum_v.at(s);
            (Complex64::from_polar((-zeta.re).sqrt(), theta), zeta.im)
        };
        let (v2, vel2) = (value.clone(), velocity.clone());
        let vel_fn = move |s: f64| {
            let zeta = v2(s);
            let zdot = vel2(s);
            let r = (-zeta.re).sqrt();
            let theta = theta0 + cum.at(s);
            let theta_dot = zdot.im / (2.0 * zeta.re);
            let e = Complex64::from_polar(1.0, theta);
            let zdot_lift = e * Complex64::new(-zdot.re / (2.0 * r), r * theta_dot);
            (zdot_lift, zdot.im)
        };
        let (a, b) = source.interval();
        return GroupCurve::from_closures(a, b, params.len(), GroupKind::Star, val_fn, vel_fn);
    }
    let vels = source.node_velocities()?;
    let integrand: Vec<f64> = source
        .samples()
        .iter()
        .zip(&vels)
        .map(|((_, z), zdot)| zdot.im / (2.0 * z.re))
        .collect();
    let prefix = prefix_nodal(&params, &integrand);
    let samples = source
        .samples()
        .iter()
        .zip(prefix)
        .map(|((s, zeta), acc)| {
            (
                *s,
                Complex64::from_polar((-zeta.re).sqrt(), theta0 + acc),
                zeta.im,
            )
        })
        .collect();
    GroupCurve::from_samples(samples, GroupKind::Star)
}

// ---------------------------------------------------------------------------
// Holonomy
// ---------------------------------------------------------------------------

/// Vertical (Δt) or angular (Δθ) displacement of the lift of a closed source
/// curve, with the enclosed-area oracle and the proportionality residual
/// |Δ + c·Area| (c = 4 on ℍ, c = 2 on ℍ*).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyReport {
    pub delta: f64,
    pub area_oracle: f64,
    pub residual: f64,
}

/// Endpoint-closure tolerance: mismatch below 1e-9·(1 + |γ(a)|).
fn check_closed(source: &PlaneCurve) -> Result<()> {
    let first = source.samples()[0].1;
    let last = source.samples()[source.samples().len() - 1].1;
    let gap = (first - last).norm();
    if gap > 1e-9 * (1.0 + first.norm()) {
        return Err(Error::NotClosed { gap });
    }
    Ok(())
}

fn is_point_curve(source: &PlaneCurve) -> bool {
    let z0 = source.samples()[0].1;
    source
        .samples()
        .iter()
        .all(|(_, z)| (*z - z0).norm() <= 1e-14 * (1.0 + z0.norm()))
}

/// Holonomy of the horizontal lift of a closed source curve.
///
/// For `kind = Heis` the source lives in ℂ, Δt comes from the endpoints of
/// [`lift_plane_curve_heis`], and the oracle is the Green-integral Euclidean
/// area ½∮(x dy − y dx). For `kind = Star` the source lives in ℒ, Δθ comes
/// from [`lift_hyperbolic_curve`], and the oracle is the hyperbolic area via
/// its boundary reduction −∮ dη/(4ξ).
pub fn holonomy_closed(source: &PlaneCurve, kind: GroupKind) -> Result<HolonomyReport> {
    check_closed(source)?;
    if is_point_curve(source) {
        return Ok(HolonomyReport {
            delta: 0.0,
            area_oracle: 0.0,
            residual: 0.0,
        });
    }
    match kind {
        GroupKind::Heis => {
            let lift = lift_plane_curve_heis(source, 0.0)?;
            let delta = lift.samples().last().unwrap().2;
            let area_oracle = green_area(source)?;
            Ok(HolonomyReport {
                delta,
                area_oracle,
                residual: (delta + 4.0 * area_oracle).abs(),
            })
        }
        GroupKind::Star => {
            let delta = theta_shift(source)?;
            let area_oracle = hyperbolic_area_boundary(source)?;
            Ok(HolonomyReport {
                delta,
                area_oracle,
                residual: (delta + 2.0 * area_oracle).abs(),
            })
        }
    }
}

/// Total angular shift ∫ Im ζ̇/(2Re ζ) of the ℍ*-lift over the whole interval.
fn theta_shift(source: &PlaneCurve) -> Result<f64> {
    let params: Vec<f64> = source.samples().iter().map(|(s, _)| *s).collect();
    if let (Some(value), Some(velocity)) = (&source.value, &source.velocity) {
        let (v, vel) = (value.clone(), velocity.clone());
        let integrand = move |s: f64| vel(s).im / (2.0 * v(s).re);
        return Ok(Cumulative::new(params, integrand)?.total());
    }
    let vels = source.node_velocities()?;
    let integrand: Vec<f64> = source
        .samples()
        .iter()
        .zip(&vels)
        .map(|((_, z), zdot)| zdot.im / (2.0 * z.re))
        .collect();
    Ok(integrate_nodal(&params, &integrand))
}

/// Euclidean enclosed area by the Green integral ½∮(x dy − y dx) = ½∮Im(z̄ż).
pub fn green_area(source: &PlaneCurve) -> Result<f64> {
    let params: Vec<f64> = source.samples().iter().map(|(s, _)| *s).collect();
    if let (Some(value), Some(velocity)) = (&source.value, &source.velocity) {
        let (v, vel) = (value.clone(), velocity.clone());
        let f = move |s: f64| 0.5 * (v(s).conj() * vel(s)).im;
        let (a, b) = source.interval();
        return adaptive_gl(&f, a, b, QuadOpts::default());
    }
    let vels = source.node_velocities()?;
    let vals: Vec<f64> = source
        .samples()
        .iter()
        .zip(&vels)
        .map(|((_, z), zdot)| 0.5 * (z.conj() * zdot).im)
        .collect();
    Ok(integrate_nodal(&params, &vals))
}

/// Hyperbolic enclosed area ∬ dξdη/(4ξ²) through its boundary form −∮ dη/(4ξ).
pub fn hyperbolic_area_boundary(source: &PlaneCurve) -> Result<f64> {
    let params: Vec<f64> = source.samples().iter().map(|(s, _)| *s).collect();
    if let (Some(value), Some(velocity)) = (&source.value, &source.velocity) {
        let (v, vel) = (value.clone(), velocity.clone());
        let f = move |s: f64| -vel(s).im / (4.0 * v(s).re);
        let (a, b) = source.interval();
        return adaptive_gl(&f, a, b, QuadOpts::default());
    }
    let vels = source.node_velocities()?;
    let vals: Vec<f64> = source
        .samples()
        .iter()
        .zip(&vels)
        .map(|((_, z), zdot)| -zdot.im / (4.0 * z.re))
        .collect();
    Ok(integrate_nodal(&params, &vals))
}

/// Shoelace area of the sample polygon; an estimate independent of any
/// quadrature, accurate to O(h²) in the sampling step.
pub fn euclidean_area_polygon(source: &PlaneCurve) -> f64 {
    let pts = source.samples();
    let n = pts.len();
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let (a, b) = (pts[i].1, pts[i + 1].1);
        acc += a.re * b.im - b.re * a.im;
    }
    0.5 * acc
}

/// Midpoint 2-D grid estimate of the hyperbolic area ∬ dξdη/(4ξ²) enclosed by
/// the sample polygon, with winding-number point inclusion. Coarse; meant as
/// an independent cross-check at ~1e-4 accuracy.
pub fn hyperbolic_area_grid(source: &PlaneCurve, n: usize) -> f64 {
    let pts: Vec<Complex64> = source.samples().iter().map(|(_, z)| *z).collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in &pts {
        xmin = xmin.min(z.re);
        xmax = xmax.max(z.re);
        ymin = ymin.min(z.im);
        ymax = ymax.max(z.im);
    }
    let (hx, hy) = ((xmax - xmin) / n as f64, (ymax - ymin) / n as f64);
    let mut acc = 0.0;
    for i in 0..n {
        let x = xmin + (i as f64 + 0.5) * hx;
        for j in 0..n {
            let y = ymin + (j as f64 + 0.5) * hy;
            if winding_number(&pts, Complex64::new(x, y)) != 0 {
                acc += hx * hy / (4.0 * x * x);
            }
        }
    }
    acc
}

fn winding_number(poly: &[Complex64], p: Complex64) -> i32 {
    let mut wn = 0;
    for i in 0..poly.len() - 1 {
        let (a, b) = (poly[i], poly[i + 1]);
        if a.im <= p.im {
            if b.im > p.im && cross(b - a, p - a) > 0.0 {
                wn += 1;
            }
        } else if b.im <= p.im && cross(b - a, p - a) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// Parsed curve file content.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveData {
    /// Columns s, re, im.
    Plane(Vec<(f64, Complex64)>),
    /// Columns s, re, im, t.
    Group(Vec<(f64, Complex64, f64)>),
}

/// Parse a curve from CSV (`s,re,im[,t]` with header) or JSON (array of
/// objects with the same fields).
pub fn parse_curve(text: &str) -> Result<CurveData> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        parse_curve_json(text)
    } else {
        parse_curve_csv(text)
    }
}

fn parse_curve_csv(text: &str) -> Result<CurveData> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedCurveFile("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(|c| c.trim()).collect();
    let with_t = match cols.as_slice() {
        ["s", "re", "im"] => false,
        ["s", "re", "im", "t"] => true,
        _ => {
            return Err(Error::MalformedCurveFile(format!(
                "unrecognized header '{header}'; expected 's,re,im' or 's,re,im,t'"
            )))
        }
    };
    let mut plane = Vec::new();
    let mut group = Vec::new();
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(|c| c.trim()).collect();
        let expect = if with_t { 4 } else { 3 };
        if fields.len() != expect {
            return Err(Error::MalformedCurveFile(format!(
                "row {}: expected {} fields, found {}",
                idx + 2,
                expect,
                fields.len()
            )));
        }
        let mut nums = Vec::with_capacity(expect);
        for f in &fields {
            nums.push(f.parse::<f64>().map_err(|_| {
                Error::MalformedCurveFile(format!("row {}: '{}' is not a number", idx + 2, f))
            })?);
        }
        if with_t {
            group.push((nums[0], Complex64::new(nums[1], nums[2]), nums[3]));
        } else {
            plane.push((nums[0], Complex64::new(nums[1], nums[2])));
        }
    }
    if with_t {
        Ok(CurveData::Group(group))
    } else {
        Ok(CurveData::Plane(plane))
    }
}

fn parse_curve_json(text: &str) -> Result<CurveData> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::MalformedCurveFile(format!("invalid JSON: {e}")))?;
    let rows = value
        .as_array()
        .or_else(|| value.get("samples").and_then(|s| s.as_array()))
        .ok_or_else(|| {
            Error::MalformedCurveFile("expected a JSON array or a 'samples' array".into())
        })?;
    if rows.is_empty() {
        return Err(Error::MalformedCurveFile("no samples".into()));
    }
    let with_t = rows[0].get("t").is_some();
    let field = |row: &serde_json::Value, key: &str, idx: usize| -> Result<f64> {
        row.get(key)
            .and_then(|v| v.as_f64())
            .ok_or_else(|| Error::MalformedCurveFile(format!("sample {idx}: missing '{key}'")))
    };
    if with_t {
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            out.push((
                field(row, "s", i)?,
                Complex64::new(field(row, "re", i)?, field(row, "im", i)?),
                field(row, "t", i)?,
            ));
        }
        Ok(CurveData::Group(out))
    } else {
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            out.push((
                field(row, "s", i)?,
                Complex64::new(field(row, "re", i)?, field(row, "im", i)?),
            ));
        }
        Ok(CurveData::Plane(out))
    }
}

/// Emit a plane curve as CSV with header `s,re,im`.
pub fn plane_curve_to_csv(samples: &[(f64, Complex64)]) -> String {
    let mut out = String::from("s,re,im\n");
    for (s, z) in samples {
        out.push_str(&format!(
            "{},{},{}\n",
            crate::contact::fmt_g17(*s),
            crate::contact::fmt_g17(z.re),
            crate::contact::fmt_g17(z.im)
        ));
    }
    out
}

/// Emit a group curve as CSV with header `s,re,im,t`.
pub fn group_curve_to_csv(samples: &[(f64, Complex64, f64)]) -> String {
    let mut out = String::from("s,re,im,t\n");
    for (s, z, t) in samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            crate::contact::fmt_g17(*s),
            crate::contact::fmt_g17(z.re),
            crate::contact::fmt_g17(z.im),
            crate::contact::fmt_g17(*t)
        ));
    }
    out
}

/// Emit a plane curve as a JSON array of {s, re, im} records.
pub fn plane_curve_to_json(samples: &[(f64, Complex64)]) -> serde_json::Value {
    serde_json::Value::Array(
        samples
            .iter()
            .map(|(s, z)| serde_json::json!({"s": s, "re": z.re, "im": z.im}))
            .collect(),
    )
}

/// Emit a group curve as a JSON array of {s, re, im, t} records.
pub fn group_curve_to_json(samples: &[(f64, Complex64, f64)]) -> serde_json::Value {
    serde_json::Value::Array(
        samples
            .iter()
            .map(|(s, z, t)| serde_json::json!({"s": s, "re": z.re, "im": z.im, "t": t}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_circle(n: usize) -> PlaneCurve {
        PlaneCurve::from_closures(
            0.0,
            2.0 * PI,
            n,
            PlaneDomain::Plane,
            |s| Complex64::from_polar(1.0, s),
            |s| Complex64::from_polar(1.0, s) * Complex64::i(),
        )
        .unwrap()
    }

    #[test]
    fn defect_of_fibre_circle_in_star() {
        // γ(s) = (e^{is}, 0): (ṫ + 2Im(z̄ż))/(2|z|²) = 2/2 = 1.
        let curve = GroupCurve::from_closures(
            0.0,
            2.0 * PI,
            64,
            GroupKind::Star,
            |s| (Complex64::from_polar(1.0, s), 0.0),
            |s| (Complex64::from_polar(1.0, s) * Complex64::i(), 0.0),
        )
        .unwrap();
        let d = horizontality_defect(&curve).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn defect_of_real_segment_in_heis() {
        // γ(s) = (s+1, 0): Im(z̄ż) = 0 ⇒ horizontal.
        let curve = GroupCurve::from_closures(
            0.0,
            1.0,
            16,
            GroupKind::Heis,
            |s| (c(s + 1.0, 0.0), 0.0),
            |_| (c(1.0, 0.0), 0.0),
        )
        .unwrap();
        assert!(horizontality_defect(&curve).unwrap() < 1e-15);
        assert!((horizontal_length_heis(&curve).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lifted_circle_heis() {
        let lift = lift_plane_curve_heis(&unit_circle(128), 0.0).unwrap();
        assert!(horizontality_defect(&lift).unwrap() < 1e-12);
        // Δt = −4·Area(unit disk) = −4π
        let dt = lift.samples().last().unwrap().2;
        assert!((dt + 4.0 * PI).abs() < 1e-9, "Δt = {dt}");
        // horizontal length = Euclidean length of the projection = 2π
        let len = horizontal_length_heis(&lift).unwrap();
        assert!((len - 2.0 * PI).abs() < 1e-9);
        // projection reproduces the source nodewise
        for ((_, z, _), (_, w)) in lift.samples().iter().zip(unit_circle(128).samples()) {
            assert!((*z - *w).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_curve_lifts_to_constant() {
        let src = PlaneCurve::from_closures(
            0.0,
            1.0,
            8,
            PlaneDomain::Plane,
            |_| c(0.7, -0.2),
            |_| c(0.0, 0.0),
        )
        .unwrap();
        let lift = lift_plane_curve_heis(&src, 1.5).unwrap();
        for (_, z, t) in lift.samples() {
            assert!((*z - c(0.7, -0.2)).norm() < 1e-15 && (t - 1.5).abs() < 1e-12);
        }
        assert!((horizontal_length_heis(&lift).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn real_segment_lift_keeps_t_constant() {
        let src = PlaneCurve::from_closures(
            0.0,
            1.0,
            8,
            PlaneDomain::Plane,
            |s| c(s, 0.0),
            |_| c(1.0, 0.0),
        )
        .unwrap();
        let lift = lift_plane_curve_heis(&src, 0.25).unwrap();
        for (_, _, t) in lift.samples() {
            assert!((t - 0.25).abs() < 1e-13);
        }
    }

    #[test]
    fn exponential_ray_star_length() {
        // γ(s) = (e^s, 0): horizontal, |ż|/|z| = 1 so length = 1 on [0,1].
        let curve = GroupCurve::from_closures(
            0.0,
            1.0,
            16,
            GroupKind::Star,
            |s| (c(s.exp(), 0.0), 0.0),
            |s| (c(s.exp(), 0.0), 0.0),
        )
        .unwrap();
        assert!(horizontality_defect(&curve).unwrap() < 1e-14);
        assert!((horizontal_length_star(&curve).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_length_of_real_ray() {
        // ζ(s) = −e^s: |ζ̇|/(−2Re ζ) = 1/2.
        let src = PlaneCurve::from_closures(
            0.0,
            1.0,
            16,
            PlaneDomain::LeftHalfPlane,
            |s| c(-s.exp(), 0.0),
            |s| c(-s.exp(), 0.0),
        )
        .unwrap();
        assert!((hyperbolic_length(&src).unwrap() - 0.5).abs() < 1e-12);
        // constant curve has zero length
        let constant = PlaneCurve::from_closures(
            0.0,
            1.0,
            8,
            PlaneDomain::LeftHalfPlane,
            |_| c(-1.0, 0.3),
            |_| c(0.0, 0.0),
        )
        .unwrap();
        assert!(hyperbolic_length(&constant).unwrap().abs() < 1e-14);
    }

    #[test]
    fn hyperbolic_length_rejects_right_half_plane() {
        let bad = PlaneCurve::from_samples(
            vec![(0.0, c(1.0, 0.0)), (0.5, c(1.0, 0.5)), (1.0, c(1.0, 1.0))],
            PlaneDomain::Plane,
        )
        .unwrap();
        assert!(matches!(
            hyperbolic_length(&bad),
            Err(Error::LeftHalfPlaneViolation { .. })
        ));
    }

    fn hyperbolic_circle(n: usize) -> PlaneCurve {
        // Euclidean circle centred at −1 with radius 0.5, inside ℒ.
        PlaneCurve::from_closures(
            0.0,
            2.0 * PI,
            n,
            PlaneDomain::LeftHalfPlane,
            |s| c(-1.0, 0.0) + 0.5 * Complex64::from_polar(1.0, s),
            |s| 0.5 * Complex64::from_polar(1.0, s) * Complex64::i(),
        )
        .unwrap()
    }

    #[test]
    fn star_lift_is_horizontal_and_projects_back() {
        let src = hyperbolic_circle(96);
        let lift = lift_hyperbolic_curve(&src, 0.3).unwrap();
        assert!(horizontality_defect(&lift).unwrap() < 1e-8);
        for ((_, z, t), (_, zeta)) in lift.samples().iter().zip(src.samples()) {
            let back = c(-z.norm_sqr(), *t);
            assert!((back - zeta).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_hyperbolic_curve_lifts_to_fibre_point() {
        let src = PlaneCurve::from_closures(
            0.0,
            1.0,
            8,
            PlaneDomain::LeftHalfPlane,
            |_| c(-2.0, 0.5),
            |_| c(0.0, 0.0),
        )
        .unwrap();
        let lift = lift_hyperbolic_curve(&src, 0.7).unwrap();
        let expect = Complex64::from_polar(2.0f64.sqrt(), 0.7);
        for (_, z, t) in lift.samples() {
            assert!((z - expect).norm() < 1e-13 && (t - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn real_ray_lift_has_constant_angle() {
        let src = PlaneCurve::from_closures(
            0.0,
            1.0,
            16,
            PlaneDomain::LeftHalfPlane,
            |s| c(-s.exp(), 0.0),
            |s| c(-s.exp(), 0.0),
        )
        .unwrap();
        let lift = lift_hyperbolic_curve(&src, 0.4).unwrap();
        for (_, z, _) in lift.samples() {
            assert!((z.arg() - 0.4).abs() < 1e-13);
        }
    }

    #[test]
    fn holonomy_unit_circle_heis() {
        let rep = holonomy_closed(&unit_circle(96), GroupKind::Heis).unwrap();
        assert!((rep.delta + 4.0 * PI).abs() < 1e-9);
        assert!((rep.area_oracle - PI).abs() < 1e-10);
        assert!(rep.residual < 1e-9);
        // coarse independent estimate from the sample polygon
        assert!((euclidean_area_polygon(&unit_circle(512)) - PI).abs() < 1e-3);
    }

    #[test]
    fn holonomy_point_curve_is_zero() {
        let src = PlaneCurve::from_closures(
            0.0,
            1.0,
            8,
            PlaneDomain::Plane,
            |_| c(0.3, 0.4),
            |_| c(0.0, 0.0),
        )
        .unwrap();
        let rep = holonomy_closed(&src, GroupKind::Heis).unwrap();
        assert_eq!(
            rep,
            HolonomyReport {
                delta: 0.0,
                area_oracle: 0.0,
                residual: 0.0
            }
        );
    }

    #[test]
    fn holonomy_hyperbolic_circle() {
        let src = hyperbolic_circle(96);
        let rep = holonomy_closed(&src, GroupKind::Star).unwrap();
        // Hyperbolic area of the disk centred −1, Euclidean radius 1/2 under
        // |dζ|²/(4ξ²): closed form (π/2)(2/√3 − 1).
        let exact = 0.5 * PI * (2.0 / 3.0f64.sqrt() - 1.0);
        assert!(
            (rep.area_oracle - exact).abs() < 1e-10,
            "area {}",
            rep.area_oracle
        );
        assert!((rep.delta + 2.0 * exact).abs() < 1e-9);
        assert!(rep.residual < 1e-9);
        // midpoint-grid cross-check at coarse tolerance
        let grid = hyperbolic_area_grid(&hyperbolic_circle(512), 600);
        assert!((grid - exact).abs() < 1e-4, "grid {grid} vs {exact}");
    }

    #[test]
    fn holonomy_rejects_open_curves() {
        let src = PlaneCurve::from_closures(
            0.0,
            1.0,
            8,
            PlaneDomain::Plane,
            |s| c(s, 0.0),
            |_| c(1.0, 0.0),
        )
        .unwrap();
        assert!(matches!(
            holonomy_closed(&src, GroupKind::Heis),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn doubling_a_loop_doubles_holonomy() {
        let double = PlaneCurve::from_closures(
            0.0,
            4.0 * PI,
            192,
            PlaneDomain::Plane,
            |s| Complex64::from_polar(1.0, s),
            |s| Complex64::from_polar(1.0, s) * Complex64::i(),
        )
        .unwrap();
        let lift = lift_plane_curve_heis(&double, 0.0).unwrap();
        let dt = lift.samples().last().unwrap().2;
        assert!((dt + 8.0 * PI).abs() < 1e-8);

        // and the angular holonomy doubles in ℍ*
        let single = holonomy_closed(&hyperbolic_circle(96), GroupKind::Star).unwrap();
        let double_star = PlaneCurve::from_closures(
            0.0,
            4.0 * PI,
            192,
            PlaneDomain::LeftHalfPlane,
            |s| c(-1.0, 0.0) + 0.5 * Complex64::from_polar(1.0, s),
            |s| 0.5 * Complex64::from_polar(1.0, s) * Complex64::i(),
        )
        .unwrap();
        let rep = holonomy_closed(&double_star, GroupKind::Star).unwrap();
        assert!((rep.delta - 2.0 * single.delta).abs() < 1e-8);
    }

    #[test]
    fn sampled_only_lift_matches_analytic() {
        // Strip the evaluator: the nodal path should agree to O(h⁴).
        let analytic = unit_circle(1024);
        let sampled =
            PlaneCurve::from_samples(analytic.samples().to_vec(), PlaneDomain::Plane).unwrap();
        let la = lift_plane_curve_heis(&analytic, 0.0).unwrap();
        let ls = lift_plane_curve_heis(&sampled, 0.0).unwrap();
        for ((_, _, ta), (_, _, ts)) in la.samples().iter().zip(ls.samples()) {
            assert!((ta - ts).abs() < 1e-7);
        }
        // lengths through the nodal quadrature agree with the analytic route
        let len_a = horizontal_length_heis(&la).unwrap();
        let len_s = horizontal_length_heis_with_tol(&ls, 1e-4).unwrap();
        assert!((len_a - len_s).abs() < 1e-7 * len_a);
    }

    #[test]
    fn sampled_only_star_lift() {
        let analytic = hyperbolic_circle(1024);
        let sampled =
            PlaneCurve::from_samples(analytic.samples().to_vec(), PlaneDomain::LeftHalfPlane)
                .unwrap();
        let la = lift_hyperbolic_curve(&analytic, 0.2).unwrap();
        let ls = lift_hyperbolic_curve(&sampled, 0.2).unwrap();
        for ((_, za, _), (_, zs, _)) in la.samples().iter().zip(ls.samples()) {
            assert!((za - zs).norm() < 1e-7);
        }
        // the projection is exact regardless of the derivative route
        for ((_, z, t), (_, zeta)) in ls.samples().iter().zip(sampled.samples()) {
            assert!((c(-z.norm_sqr(), *t) - zeta).norm() < 1e-12);
        }
        // defect of the nodal lift sits at the O(h⁴) level
        assert!(horizontality_defect(&ls).unwrap() < 1e-6);
    }

    #[test]
    fn length_is_reparameterization_invariant() {
        // Same circle, smooth monotone reparameterization.
        let direct = lift_plane_curve_heis(&unit_circle(128), 0.0).unwrap();
        let warped_src = PlaneCurve::from_closures(
            0.0,
            1.0,
            128,
            PlaneDomain::Plane,
            |u| {
                let s = 2.0 * PI * (u - 0.15 * (2.0 * PI * u).sin() / (2.0 * PI));
                Complex64::from_polar(1.0, s)
            },
            |u| {
                let s = 2.0 * PI * (u - 0.15 * (2.0 * PI * u).sin() / (2.0 * PI));
                let ds = 2.0 * PI * (1.0 - 0.15 * (2.0 * PI * u).cos());
                Complex64::from_polar(1.0, s) * Complex64::i() * ds
            },
        )
        .unwrap();
        let warped = lift_plane_curve_heis(&warped_src, 0.0).unwrap();
        let l1 = horizontal_length_heis(&direct).unwrap();
        let l2 = horizontal_length_heis(&warped).unwrap();
        assert!((l1 - l2).abs() < 1e-8 * l1.max(1.0));
    }

    #[test]
    fn length_gate_rejects_non_horizontal() {
        let curve = GroupCurve::from_closures(
            0.0,
            1.0,
            16,
            GroupKind::Heis,
            |s| (c(s, s), s),
            |_| (c(1.0, 1.0), 1.0),
        )
        .unwrap();
        assert!(matches!(
            horizontal_length_heis(&curve),
            Err(Error::NotHorizontal { .. })
        ));
    }

    #[test]
    fn curve_constructors_validate() {
        assert!(matches!(
            PlaneCurve::from_samples(vec![(0.0, c(1.0, 0.0))], PlaneDomain::Plane),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(PlaneCurve::from_samples(
            vec![(0.0, c(1.0, 0.0)), (0.0, c(1.0, 0.1)), (1.0, c(1.0, 0.2))],
            PlaneDomain::Plane
        )
        .is_err());
        assert!(PlaneCurve::from_samples(
            vec![(0.0, c(1.0, 0.0)), (0.5, c(1.0, 0.1)), (1.0, c(1.0, 0.2))],
            PlaneDomain::LeftHalfPlane
        )
        .is_err());
    }

    #[test]
    fn csv_round_trip() {
        let lift = lift_plane_curve_heis(&unit_circle(16), 0.0).unwrap();
        let text = group_curve_to_csv(lift.samples());
        match parse_curve(&text).unwrap() {
            CurveData::Group(rows) => {
                assert_eq!(rows.len(), 16);
                for (row, orig) in rows.iter().zip(lift.samples()) {
                    assert!((row.1 - orig.1).norm() < 1e-15 && (row.2 - orig.2).abs() < 1e-15);
                }
            }
            other => panic!("expected group curve, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip_and_errors() {
        let text = r#"[{"s":0.0,"re":-1.0,"im":0.0},{"s":0.5,"re":-1.1,"im":0.2},{"s":1.0,"re":-1.2,"im":0.4}]"#;
        match parse_curve(text).unwrap() {
            CurveData::Plane(rows) => {
                assert_eq!(rows.len(), 3);
                // emission parses back to the same samples
                let emitted = plane_curve_to_json(&rows).to_string();
                assert_eq!(parse_curve(&emitted).unwrap(), CurveData::Plane(rows));
            }
            other => panic!("expected plane curve, got {other:?}"),
        }
        assert!(matches!(
            parse_curve("x,y\n1,2\n"),
            Err(Error::MalformedCurveFile(_))
        ));
        assert!(matches!(
            parse_curve("s,re,im\n0,oops,0\n"),
            Err(Error::MalformedCurveFile(_))
        ));
    }
}
