//! Lifting symplectic planar maps to contact maps of the groups.
//!
//! A smooth f: ℒ→ℒ is symplectic for the Kähler form of ℒ exactly when
//! Re²(f(ζ)) = Re²(ζ)·J_f(ζ) with J_f = |f_ζ|² − |f_ζ̄|². For such f the 1-form
//! β = g dζ + ḡ dζ̄ with
//!
//! ```text
//! g(ζ) = i/(4Re ζ) + (Im f)_ζ/(2Re f)
//! ```
//!
//! is closed, hence exact: β = dψ. The lift
//!
//! ```text
//! F(z,t) = ( z·J_f^{1/4}(ζ)·e^{iψ(ζ)},  Im f(ζ) ),   ζ = −|z|² + it,
//! ```
//!
//! is an orientation-preserving, circles-preserving contact transformation of
//! ℍ* with λ* = 1 and μ_F = μ_f∘α.
//!
//! The plane analogue lifts a Euclidean-symplectic f: ℂ→ℂ
//! (|f_z|² − |f_z̄|² = 1) to the vertical-lines-preserving contact map
//! F(z,t) = (f(z), t + φ(z)) of ℍ with λ = 1, where dφ = η = 2Im(z̄dz − f̄df).
//!
//! Potentials are normalized to vanish at a basepoint (default ζ₀ = −1,
//! z₀ = 0) and evaluated by adaptive Gauss–Legendre integration along the
//! straight segment from the basepoint, which stays in the (convex) domain.
//! Each potential memoizes its values behind a read-dominant cache with
//! insert-once semantics, so concurrent queries are safe and idempotent.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::contact::{MapPartials, StarMap};
use crate::curves::PlaneDomain;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::numerics::{adaptive_gl, central4, fd_step, wirtinger_fd, QuadOpts};

/// Symplectic gate tolerance when the map supplies analytic derivatives.
pub const GATE_TOL_ANALYTIC: f64 = 1e-7;
/// Symplectic gate tolerance when derivatives come from finite differences.
pub const GATE_TOL_FD: f64 = 1e-4;

/// A planar map together with its Wirtinger derivatives.
///
/// `L`-domain maps send the left half-plane ℒ into itself; `Plane` maps act
/// on all of ℂ. The default derivative implementations use fourth-order
/// finite differences; closed-form maps override them.
pub trait PlanarMap: Send + Sync {
    fn domain(&self) -> PlaneDomain;

    fn eval(&self, zeta: Complex64) -> Complex64;

    /// (f_ζ, f_ζ̄) at ζ.
    fn wirtinger(&self, zeta: Complex64) -> Result<(Complex64, Complex64)> {
        wirtinger_fd(|w| self.eval(w), zeta)
    }

    /// Whether `wirtinger` is analytic (affects gate tolerances).
    fn has_analytic_derivatives(&self) -> bool {
        false
    }

    /// ∂ζ log J_f; the default differentiates log J_f by finite differences.
    fn log_jacobian_gradient(&self, zeta: Complex64) -> Result<Complex64> {
        let h = fd_step(zeta.norm());
        let logj = |w: Complex64| -> f64 {
            match self.wirtinger(w) {
                Ok((fz, fzb)) => (fz.norm_sqr() - fzb.norm_sqr()).ln(),
                Err(_) => f64::NAN,
            }
        };
        let gx = central4(|x| logj(Complex64::new(x, zeta.im)), zeta.re, h)?;
        let gy = central4(|y| logj(Complex64::new(zeta.re, y)), zeta.im, h)?;
        Ok(Complex64::new(gx, -gy) * 0.5)
    }
}

impl<M: PlanarMap + ?Sized> PlanarMap for Arc<M> {
    fn domain(&self) -> PlaneDomain {
        (**self).domain()
    }
    fn eval(&self, zeta: Complex64) -> Complex64 {
        (**self).eval(zeta)
    }
    fn wirtinger(&self, zeta: Complex64) -> Result<(Complex64, Complex64)> {
        (**self).wirtinger(zeta)
    }
    fn has_analytic_derivatives(&self) -> bool {
        (**self).has_analytic_derivatives()
    }
    fn log_jacobian_gradient(&self, zeta: Complex64) -> Result<Complex64> {
        (**self).log_jacobian_gradient(zeta)
    }
}

/// Jacobian determinant J_f = |f_ζ|² − |f_ζ̄|².
pub fn jacobian(map: &dyn PlanarMap, zeta: Complex64) -> Result<f64> {
    let (fz, fzb) = map.wirtinger(zeta)?;
    Ok(fz.norm_sqr() - fzb.norm_sqr())
}

/// The identity map on either domain, with exact derivatives.
pub struct IdentityPlanar(pub PlaneDomain);

impl PlanarMap for IdentityPlanar {
    fn domain(&self) -> PlaneDomain {
        self.0
    }
    fn eval(&self, zeta: Complex64) -> Complex64 {
        zeta
    }
    fn wirtinger(&self, _zeta: Complex64) -> Result<(Complex64, Complex64)> {
        Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)))
    }
    fn has_analytic_derivatives(&self) -> bool {
        true
    }
    fn log_jacobian_gradient(&self, _zeta: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }
}

/// A closure-backed planar map with finite-difference derivatives.
pub struct FnPlanar<F: Fn(Complex64) -> Complex64 + Send + Sync> {
    pub domain: PlaneDomain,
    pub f: F,
}

impl<F: Fn(Complex64) -> Complex64 + Send + Sync> PlanarMap for FnPlanar<F> {
    fn domain(&self) -> PlaneDomain {
        self.domain
    }
    fn eval(&self, zeta: Complex64) -> Complex64 {
        (self.f)(zeta)
    }
}

/// Composition outer∘inner with chain-rule Wirtinger derivatives.
pub struct ComposedPlanar {
    pub outer: Arc<dyn PlanarMap>,
    pub inner: Arc<dyn PlanarMap>,
}

impl PlanarMap for ComposedPlanar {
    fn domain(&self) -> PlaneDomain {
        self.inner.domain()
    }
    fn eval(&self, zeta: Complex64) -> Complex64 {
        self.outer.eval(self.inner.eval(zeta))
    }
    fn wirtinger(&self, zeta: Complex64) -> Result<(Complex64, Complex64)> {
        let w = self.inner.eval(zeta);
        let (gz, gzb) = self.inner.wirtinger(zeta)?;
        let (fz, fzb) = self.outer.wirtinger(w)?;
        Ok((fz * gz + fzb * gzb.conj(), fz * gzb + fzb * gz.conj()))
    }
    fn has_analytic_derivatives(&self) -> bool {
        self.outer.has_analytic_derivatives() && self.inner.has_analytic_derivatives()
    }
}

// ---------------------------------------------------------------------------
// Symplectic and closedness residuals
// ---------------------------------------------------------------------------

/// |Re²(f(ζ)) − Re²(ζ)·J_f(ζ)| / Re²(ζ) for an ℒ-map.
///
/// Errors with [`Error::LeftHalfPlaneViolation`] when f(ζ) leaves ℒ.
pub fn symplectic_residual(map: &dyn PlanarMap, zeta: Complex64) -> Result<f64> {
    if zeta.re >= 0.0 {
        return Err(Error::LeftHalfPlaneViolation {
            re: zeta.re,
            im: zeta.im,
        });
    }
    let f = map.eval(zeta);
    if f.re >= 0.0 {
        return Err(Error::LeftHalfPlaneViolation { re: f.re, im: f.im });
    }
    let j = jacobian(map, zeta)?;
    let re2 = zeta.re * zeta.re;
    let res = (f.re * f.re - re2 * j).abs() / re2;
    if res.is_finite() {
        Ok(res)
    } else {
        Err(Error::NonFiniteDerivative)
    }
}

/// |J_f − 1| for a plane map, the Euclidean symplectic defect.
pub fn euclidean_symplectic_residual(map: &dyn PlanarMap, z: Complex64) -> Result<f64> {
    Ok((jacobian(map, z)? - 1.0).abs())
}

/// The ζ-grid used by the symplectic gates: the Korányi images of the grid.
pub fn gate_zetas(spec: &GridSpec) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(spec.r_count * spec.t_count);
    for p in spec.points()? {
        let zeta = crate::group::alpha_coord(p.z, p.t);
        if !out.iter().any(|q: &Complex64| (*q - zeta).norm() < 1e-14) {
            out.push(zeta);
        }
    }
    Ok(out)
}

/// Gate an ℒ-map as symplectic on a ζ-grid; returns the max residual.
pub fn symplectic_gate(map: &dyn PlanarMap, zetas: &[Complex64], tol: f64) -> Result<f64> {
    let mut max_res: f64 = 0.0;
    for zeta in zetas {
        max_res = max_res.max(symplectic_residual(map, *zeta)?);
    }
    if max_res > tol {
        return Err(Error::NotSymplectic {
            residual: max_res,
            tol,
        });
    }
    Ok(max_res)
}

/// The coefficient g(ζ) = i/(4Re ζ) + (Im f)_ζ/(2Re f) of the exact form
/// β = g dζ + ḡ dζ̄; (Im f)_ζ is computed branch-free as (f_ζ − conj(f_ζ̄))/(2i).
pub fn g_form(map: &dyn PlanarMap, zeta: Complex64) -> Result<Complex64> {
    let i = Complex64::i();
    let f = map.eval(zeta);
    let (fz, fzb) = map.wirtinger(zeta)?;
    let imf_z = (fz - fzb.conj()) / (2.0 * i);
    let g = i / (4.0 * zeta.re) + imf_z / (2.0 * f.re);
    if g.re.is_finite() && g.im.is_finite() {
        Ok(g)
    } else {
        Err(Error::NonFiniteDerivative)
    }
}

/// Exactness witness |ḡ_ζ − g_ζ̄| at ζ, with the derivatives of g taken by
/// finite differences on g itself.
pub fn closedness_residual(map: &dyn PlanarMap, zeta: Complex64) -> Result<f64> {
    let h = fd_step(zeta.norm());
    let g = |w: Complex64| match g_form(map, w) {
        Ok(v) => v,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    };
    let gx = central4(|x| g(Complex64::new(x, zeta.im)), zeta.re, h)?;
    let gy = central4(|y| g(Complex64::new(zeta.re, y)), zeta.im, h)?;
    let g_zb = (gx + Complex64::i() * gy) * 0.5;
    // ḡ_ζ = conj(g_ζ̄), so the defect is the distance of g_ζ̄ from the real axis.
    Ok((g_zb.conj() - g_zb).norm())
}

// ---------------------------------------------------------------------------
// Potentials
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PotentialKind {
    /// ψ on ℒ: dψ = g dζ + ḡ dζ̄.
    HalfPlane,
    /// φ on ℂ: dφ = 2Im(z̄ dz − f̄ df).
    Plane,
}

/// A potential function reconstructed from its exact differential by straight
/// segment integration from a basepoint, with memoized values.
pub struct Potential {
    map: Arc<dyn PlanarMap>,
    base: Complex64,
    kind: PotentialKind,
    quad: QuadOpts,
    cache: RwLock<HashMap<(u64, u64), f64>>,
}

/// Quadrature tolerance for a map's potential: finite-difference derivatives
/// carry ~1e-11 noise, so their integrands cannot be resolved past 1e-10.
fn potential_quad_opts(map: &dyn PlanarMap) -> QuadOpts {
    QuadOpts {
        tol: if map.has_analytic_derivatives() {
            1e-12
        } else {
            1e-10
        },
        max_depth: 24,
    }
}

impl Potential {
    /// ψ-potential of an ℒ-map, normalized to ψ(base) = 0.
    pub fn psi(map: Arc<dyn PlanarMap>, base: Complex64) -> Result<Self> {
        if base.re >= 0.0 {
            return Err(Error::LeftHalfPlaneViolation {
                re: base.re,
                im: base.im,
            });
        }
        let quad = potential_quad_opts(map.as_ref());
        Ok(Potential {
            map,
            base,
            kind: PotentialKind::HalfPlane,
            quad,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// φ-potential of a plane map, normalized to φ(base) = 0.
    pub fn phi(map: Arc<dyn PlanarMap>, base: Complex64) -> Self {
        let quad = potential_quad_opts(map.as_ref());
        Potential {
            map,
            base,
            kind: PotentialKind::Plane,
            quad,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn basepoint(&self) -> Complex64 {
        self.base
    }

    /// The 1-form evaluated on the tangent `dir` at `w`.
    fn one_form(&self, w: Complex64, dir: Complex64) -> Result<f64> {
        match self.kind {
            PotentialKind::HalfPlane => {
                // β(dir) = g dζ(dir) + ḡ dζ̄(dir) = 2Re(g(w)·dir)
                Ok(2.0 * (g_form(self.map.as_ref(), w)? * dir).re)
            }
            PotentialKind::Plane => {
                let f = self.map.eval(w);
                let (fz, fzb) = self.map.wirtinger(w)?;
                let df = fz * dir + fzb * dir.conj();
                Ok(2.0 * (w.conj() * dir - f.conj() * df).im)
            }
        }
    }

    /// Line integral of the potential's differential along the straight
    /// segment from `from` to `to`.
    pub fn segment_integral(&self, from: Complex64, to: Complex64) -> Result<f64> {
        let dir = to - from;
        if dir.norm() == 0.0 {
            return Ok(0.0);
        }
        let integrand = |u: f64| {
            let w = from + u * dir;
            self.one_form(w, dir).unwrap_or(f64::NAN)
        };
        adaptive_gl(&integrand, 0.0, 1.0, self.quad)
    }

    /// Potential value at ζ, from the cache or by a fresh segment integral.
    pub fn value(&self, zeta: Complex64) -> Result<f64> {
        if self.kind == PotentialKind::HalfPlane && zeta.re >= 0.0 {
            return Err(Error::LeftHalfPlaneViolation {
                re: zeta.re,
                im: zeta.im,
            });
        }
        let key = (zeta.re.to_bits(), zeta.im.to_bits());
        if let Some(v) = self
            .cache
            .read()
            .expect("potential cache poisoned")
            .get(&key)
        {
            return Ok(*v);
        }
        let v = self.segment_integral(self.base, zeta)?;
        self.cache
            .write()
            .expect("potential cache poisoned")
            .entry(key)
            .or_insert(v);
        Ok(v)
    }
}

/// ψ(ζ) for a symplectic ℒ-map, normalized at `base` (ζ₀ = −1 is the
/// conventional choice).
pub fn psi_potential(map: Arc<dyn PlanarMap>, zeta: Complex64, base: Complex64) -> Result<f64> {
    Potential::psi(map, base)?.value(zeta)
}

/// φ(z) for a Euclidean-symplectic plane map, normalized at `base`.
pub fn phi_potential(map: Arc<dyn PlanarMap>, z: Complex64, base: Complex64) -> Result<f64> {
    Potential::phi(map, base).value(z)
}

// ---------------------------------------------------------------------------
// The lift to ℍ*
// ---------------------------------------------------------------------------

/// Options for [`lift_star`].
#[derive(Debug, Clone, Copy)]
pub struct LiftOpts {
    /// Normalization point of ψ; must lie in ℒ.
    pub basepoint: Complex64,
    /// Constant added to ψ; rotates f_I by a fixed U(1) phase.
    pub phase: f64,
    /// Skip the symplectic gate (diagnostic lifts of invalid maps).
    pub force: bool,
    /// Override the gate tolerance (default: analytic/FD defaults).
    pub gate_tol: Option<f64>,
}

impl Default for LiftOpts {
    fn default() -> Self {
        LiftOpts {
            basepoint: Complex64::new(-1.0, 0.0),
            phase: 0.0,
            force: false,
            gate_tol: None,
        }
    }
}

/// The lifted map F = (z·J^{1/4}(ζ)·e^{iψ(ζ)}, Im f(ζ)), ζ = −|z|² + it.
pub struct LiftedStarMap {
    map: Arc<dyn PlanarMap>,
    potential: Potential,
    phase: f64,
    /// Set when the lift was forced past a failing symplectic gate.
    pub forced: bool,
}

impl LiftedStarMap {
    pub fn source(&self) -> &Arc<dyn PlanarMap> {
        &self.map
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn basepoint(&self) -> Complex64 {
        self.potential.basepoint()
    }

    /// ψ(ζ) with the configured normalization (phase not included).
    pub fn psi(&self, zeta: Complex64) -> Result<f64> {
        self.potential.value(zeta)
    }

    /// Both components at (z, t), with the orientation guard on J_f.
    pub fn try_eval(&self, z: Complex64, t: f64) -> Result<(Complex64, f64)> {
        let zeta = crate::group::alpha_coord(z, t);
        let j = jacobian(self.map.as_ref(), zeta)?;
        if j <= 1e-12 {
            return Err(Error::OrientationReversed(j));
        }
        let psi = self.potential.value(zeta)?;
        let f = self.map.eval(zeta);
        let f_i = z * j.powf(0.25) * Complex64::from_polar(1.0, psi + self.phase);
        Ok((f_i, f.im))
    }
}

impl StarMap for LiftedStarMap {
    /// Trait evaluation surfaces failures as NaN; use
    /// [`LiftedStarMap::try_eval`] for checked access.
    fn f_i(&self, z: Complex64, t: f64) -> Complex64 {
        self.try_eval(z, t)
            .map(|(f_i, _)| f_i)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        self.map.eval(crate::group::alpha_coord(z, t)).im
    }

    fn eval(&self, z: Complex64, t: f64) -> (Complex64, f64) {
        self.try_eval(z, t)
            .unwrap_or((Complex64::new(f64::NAN, f64::NAN), f64::NAN))
    }

    /// Semi-analytic partials: ψ enters only through its exact gradient
    /// ψ_ζ = g(ζ), so no derivative is ever taken through the quadrature.
    fn partials(&self, z: Complex64, t: f64) -> Option<MapPartials> {
        let zeta = crate::group::alpha_coord(z, t);
        let g = g_form(self.map.as_ref(), zeta).ok()?;
        let logj_z = self.map.log_jacobian_gradient(zeta).ok()?;
        let (w, _) = match self.try_eval(z, t) {
            Ok(v) => v,
            Err(_) => return None,
        };
        let i = Complex64::i();
        let two_re = 2.0 * zeta.re;
        // 𝐙 Log f_I = 1 + 2Reζ·((log J)_ζ/4 + i·g)
        // 𝐙̄ Log f_I = 2Reζ·(conj((log J)_ζ)/4 + i·conj(g))
        let zlog = 1.0 + two_re * (logj_z * 0.25 + i * g);
        let zblog = two_re * (logj_z.conj() * 0.25 + i * g.conj());
        let bz_fi = w * zlog;
        let bzb_fi = w * zblog;
        let bt_fi = i * w;
        // f_3 = Im f(ζ): 𝐙f_3 = 2Reζ·(Im f)_ζ, 𝐓f_3 = 0.
        let (fz, fzb) = self.map.wirtinger(zeta).ok()?;
        let imf_z = (fz - fzb.conj()) / (2.0 * i);
        let bz_f3 = two_re * imf_z;
        let bzb_f3 = two_re * imf_z.conj();
        Some(MapPartials::from_bold_frame(
            z, bz_fi, bzb_fi, bt_fi, bz_f3, bzb_f3, 0.0,
        ))
    }
}

/// Lift a symplectic ℒ-map to a circles-preserving contact map of ℍ*.
pub fn lift_star(map: Arc<dyn PlanarMap>, opts: LiftOpts) -> Result<LiftedStarMap> {
    if map.domain() != PlaneDomain::LeftHalfPlane {
        return Err(Error::DomainViolation(
            "lift_star expects a map of the left half-plane".into(),
        ));
    }
    let tol = opts.gate_tol.unwrap_or(if map.has_analytic_derivatives() {
        GATE_TOL_ANALYTIC
    } else {
        GATE_TOL_FD
    });
    let mut forced = false;
    let zetas = gate_zetas(&GridSpec::standard())?;
    match symplectic_gate(map.as_ref(), &zetas, tol) {
        Ok(_) => {}
        Err(e) if opts.force => {
            let _ = e;
            forced = true;
        }
        Err(e) => return Err(e),
    }
    for zeta in &zetas {
        let j = jacobian(map.as_ref(), *zeta)?;
        if j <= 1e-12 && !opts.force {
            return Err(Error::OrientationReversed(j));
        }
    }
    let potential = Potential::psi(map.clone(), opts.basepoint)?;
    Ok(LiftedStarMap {
        map,
        potential,
        phase: opts.phase,
        forced,
    })
}

// ---------------------------------------------------------------------------
// The lift to ℍ
// ---------------------------------------------------------------------------

/// The lifted map F(z,t) = (f(z), t + φ(z)); it preserves vertical lines by
/// construction, since f_I is independent of t.
pub struct LiftedHeisMap {
    map: Arc<dyn PlanarMap>,
    potential: Potential,
    pub forced: bool,
}

impl LiftedHeisMap {
    pub fn source(&self) -> &Arc<dyn PlanarMap> {
        &self.map
    }

    pub fn basepoint(&self) -> Complex64 {
        self.potential.basepoint()
    }

    pub fn phi(&self, z: Complex64) -> Result<f64> {
        self.potential.value(z)
    }
}

impl StarMap for LiftedHeisMap {
    fn f_i(&self, z: Complex64, _t: f64) -> Complex64 {
        self.map.eval(z)
    }

    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        t + self.potential.value(z).unwrap_or(f64::NAN)
    }

    fn partials(&self, z: Complex64, _t: f64) -> Option<MapPartials> {
        let (fz, fzb) = self.map.wirtinger(z).ok()?;
        let i = Complex64::i();
        let f = self.map.eval(z);
        // dφ = η: φ_z = (z̄ − f̄·f_z + f·conj(f_z̄))/i
        let phi_z = (z.conj() - f.conj() * fz + f * fzb.conj()) / i;
        Some(MapPartials {
            fi_x: fz + fzb,
            fi_y: i * (fz - fzb),
            fi_t: Complex64::new(0.0, 0.0),
            f3_x: 2.0 * phi_z.re,
            f3_y: -2.0 * phi_z.im,
            f3_t: 1.0,
        })
    }
}

/// Lift a Euclidean-symplectic plane map to a vertical-lines-preserving
/// contact map of ℍ with λ = 1.
pub fn lift_heis(map: Arc<dyn PlanarMap>, base: Complex64, force: bool) -> Result<LiftedHeisMap> {
    if map.domain() != PlaneDomain::Plane {
        return Err(Error::DomainViolation(
            "lift_heis expects a map of the complex plane".into(),
        ));
    }
    let tol = if map.has_analytic_derivatives() {
        GATE_TOL_ANALYTIC
    } else {
        GATE_TOL_FD
    };
    let mut forced = false;
    let mut max_res: f64 = 0.0;
    for p in GridSpec::standard().points()? {
        max_res = max_res.max(euclidean_symplectic_residual(map.as_ref(), p.z)?);
    }
    if max_res > tol {
        if !force {
            return Err(Error::NotSymplectic {
                residual: max_res,
                tol,
            });
        }
        forced = true;
    }
    Ok(LiftedHeisMap {
        potential: Potential::phi(map.clone(), base),
        map,
        forced,
    })
}
