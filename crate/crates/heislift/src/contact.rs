//! Pointwise contact analysis of smooth maps F = (f_I, f_3) of ℍ* and ℍ.
//!
//! For ℍ* the contact conditions for F*ω* = λ*ω* read
//!
//! ```text
//! 𝐙f_3/(2|f_I|²) + 𝐙 arg f_I = 0
//! 𝐙̄f_3/(2|f_I|²) + 𝐙̄ arg f_I = 0
//! 𝐓f_3/(2|f_I|²) + 𝐓 arg f_I = λ*
//! ```
//!
//! with λ* = |𝐙 Log f_I|² − |𝐙̄ Log f_I|², λ₁ = |𝐙 Log f_I| + |𝐙̄ Log f_I|,
//! λ₂ = |𝐙 Log f_I| − |𝐙̄ Log f_I|, K = λ₁/λ₂ and μ = 𝐙̄f_I/𝐙f_I. Derivatives
//! of arg are never taken through a branched arg: every occurrence is the
//! imaginary part of a logarithmic derivative.
//!
//! The ℍ analogues (kind = [`GroupKind::Heis`]) use the plain frame Z, Z̄, T,
//! the form ω, and the unnormalized derivatives: λ = |Zf_I|² − |Z̄f_I|².

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{GroupKind, StarPoint, MIN_STAR_MODULUS};
use crate::numerics::{central4, fd_step};

/// A smooth map of ℍ* (or ℍ) given by its two components.
///
/// Implementors may supply analytic Euclidean partials through
/// [`StarMap::partials`]; otherwise fourth-order finite differences are used.
pub trait StarMap: Send + Sync {
    fn f_i(&self, z: Complex64, t: f64) -> Complex64;
    fn f_3(&self, z: Complex64, t: f64) -> f64;

    fn eval(&self, z: Complex64, t: f64) -> (Complex64, f64) {
        (self.f_i(z, t), self.f_3(z, t))
    }

    /// Analytic partials (∂x, ∂y, ∂t) of both components, when available.
    fn partials(&self, z: Complex64, t: f64) -> Option<MapPartials> {
        let _ = (z, t);
        None
    }
}

impl<M: StarMap + ?Sized> StarMap for &M {
    fn f_i(&self, z: Complex64, t: f64) -> Complex64 {
        (**self).f_i(z, t)
    }
    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        (**self).f_3(z, t)
    }
    fn partials(&self, z: Complex64, t: f64) -> Option<MapPartials> {
        (**self).partials(z, t)
    }
}

/// Euclidean partial derivatives of (f_I, f_3) at a point.
#[derive(Debug, Clone, Copy)]
pub struct MapPartials {
    pub fi_x: Complex64,
    pub fi_y: Complex64,
    pub fi_t: Complex64,
    pub f3_x: f64,
    pub f3_y: f64,
    pub f3_t: f64,
}

impl MapPartials {
    /// Recover Euclidean partials from bold-frame derivatives at z ≠ 0.
    ///
    /// 𝐗 = 𝐙 + 𝐙̄ and 𝐘 = i(𝐙 − 𝐙̄) give the radial/angular derivatives;
    /// f_t = (𝐓f − 𝐘f)/(2|z|²), f_x = (x·𝐗f − y·𝐓f)/|z|²,
    /// f_y = (y·𝐗f + x·𝐓f)/|z|².
    pub fn from_bold_frame(
        z: Complex64,
        bz_fi: Complex64,
        bzb_fi: Complex64,
        bt_fi: Complex64,
        bz_f3: Complex64,
        bzb_f3: Complex64,
        bt_f3: f64,
    ) -> MapPartials {
        let i = Complex64::i();
        let n2 = z.norm_sqr();
        let (x, y) = (z.re, z.im);
        let bx_fi = bz_fi + bzb_fi;
        let by_fi = i * (bz_fi - bzb_fi);
        let fi_t = (bt_fi - by_fi) / (2.0 * n2);
        let fi_x = (x * bx_fi - y * bt_fi) / n2;
        let fi_y = (y * bx_fi + x * bt_fi) / n2;
        let bx_f3 = bz_f3 + bzb_f3;
        let by_f3 = i * (bz_f3 - bzb_f3);
        let bt3 = Complex64::new(bt_f3, 0.0);
        let f3_t = ((bt3 - by_f3) / (2.0 * n2)).re;
        let f3_x = ((x * bx_f3 - y * bt3) / n2).re;
        let f3_y = ((y * bx_f3 + x * bt3) / n2).re;
        MapPartials {
            fi_x,
            fi_y,
            fi_t,
            f3_x,
            f3_y,
            f3_t,
        }
    }
}

/// Frame derivatives of both components in the requested frame.
#[derive(Debug, Clone, Copy)]
pub struct FrameDerivs {
    pub kind: GroupKind,
    /// Zf_I (ℍ) or 𝐙f_I (ℍ*)
    pub zf_i: Complex64,
    pub zbf_i: Complex64,
    pub tf_i: Complex64,
    pub zf_3: Complex64,
    pub zbf_3: Complex64,
    pub tf_3: f64,
}

fn fd_partials(map: &dyn StarMap, z: Complex64, t: f64) -> Result<MapPartials> {
    let h = fd_step((z.norm_sqr() + t * t).sqrt());
    let fx = central4(|x| map.eval(Complex64::new(x, z.im), t), z.re, h)?;
    let fy = central4(|y| map.eval(Complex64::new(z.re, y), t), z.im, h)?;
    let ft = central4(|s| map.eval(z, s), t, h)?;
    Ok(MapPartials {
        fi_x: fx.0,
        fi_y: fy.0,
        fi_t: ft.0,
        f3_x: fx.1,
        f3_y: fy.1,
        f3_t: ft.1,
    })
}

fn assemble_frame(kind: GroupKind, z: Complex64, p: &MapPartials) -> FrameDerivs {
    let i = Complex64::i();
    let hz_i = (p.fi_x - i * p.fi_y) * 0.5;
    let hzb_i = (p.fi_x + i * p.fi_y) * 0.5;
    let f3_x = Complex64::new(p.f3_x, 0.0);
    let f3_y = Complex64::new(p.f3_y, 0.0);
    let f3_t = Complex64::new(p.f3_t, 0.0);
    let hz_3 = (f3_x - i * f3_y) * 0.5;
    let hzb_3 = (f3_x + i * f3_y) * 0.5;
    match kind {
        GroupKind::Heis => FrameDerivs {
            kind,
            zf_i: hz_i + i * z.conj() * p.fi_t,
            zbf_i: hzb_i - i * z * p.fi_t,
            tf_i: p.fi_t,
            zf_3: hz_3 + i * z.conj() * f3_t,
            zbf_3: hzb_3 - i * z * f3_t,
            tf_3: p.f3_t,
        },
        GroupKind::Star => {
            // 𝐙 = zZ and 𝐙̄ = z̄Z̄, so z·(i z̄ f_t) supplies the i|z|² ∂t part;
            // 𝐓 = x∂y − y∂x has no ∂t component.
            let (x, y) = (z.re, z.im);
            FrameDerivs {
                kind,
                zf_i: z * (hz_i + i * z.conj() * p.fi_t),
                zbf_i: z.conj() * (hzb_i - i * z * p.fi_t),
                tf_i: x * p.fi_y - y * p.fi_x,
                zf_3: z * (hz_3 + i * z.conj() * f3_t),
                zbf_3: z.conj() * (hzb_3 - i * z * f3_t),
                tf_3: x * p.f3_y - y * p.f3_x,
            }
        }
    }
}

impl FrameDerivs {
    /// Logarithmic derivatives of f_I with respect to the frame, at image value `w`.
    pub fn log_derivs(&self, w: Complex64) -> Result<(Complex64, Complex64)> {
        if w.norm() < MIN_STAR_MODULUS {
            return Err(Error::ZeroImage);
        }
        Ok((self.zf_i / w, self.zbf_i / w))
    }
}

/// Frame derivatives at (z, t), from analytic partials when the map has them,
/// otherwise by finite differences.
pub fn frame_derivatives(
    map: &dyn StarMap,
    z: Complex64,
    t: f64,
    kind: GroupKind,
) -> Result<FrameDerivs> {
    if kind == GroupKind::Star && z.norm() <= MIN_STAR_MODULUS {
        return Err(Error::DomainViolation(
            "the distinguished frame requires a point of ℍ*".into(),
        ));
    }
    let partials = match map.partials(z, t) {
        Some(p) => p,
        None => fd_partials(map, z, t)?,
    };
    Ok(assemble_frame(kind, z, &partials))
}

/// The residuals of the three contact conditions, together with the multiplier.
#[derive(Debug, Clone, Copy)]
pub struct ContactResiduals {
    pub r1: Complex64,
    pub r2: Complex64,
    /// Third contact expression minus the multiplier computed from the
    /// logarithmic (resp. plain) frame derivatives.
    pub r3_minus_lambda: f64,
    /// λ* (star) or λ (heis) from the frame derivatives.
    pub lambda: f64,
}

/// Contact residuals of `map` at (z, t) in the given frame.
pub fn contact_residuals(
    map: &dyn StarMap,
    z: Complex64,
    t: f64,
    kind: GroupKind,
) -> Result<ContactResiduals> {
    let d = frame_derivatives(map, z, t, kind)?;
    residuals_from_derivs(map, z, t, &d)
}

fn residuals_from_derivs(
    map: &dyn StarMap,
    z: Complex64,
    t: f64,
    d: &FrameDerivs,
) -> Result<ContactResiduals> {
    let i = Complex64::i();
    let w = map.f_i(z, t);
    match d.kind {
        GroupKind::Star => {
            let (zlog, zblog) = d.log_derivs(w)?;
            let m2 = 2.0 * w.norm_sqr();
            let zarg = (zlog - zblog.conj()) / (2.0 * i);
            let zbarg = (zblog - zlog.conj()) / (2.0 * i);
            let lambda = zlog.norm_sqr() - zblog.norm_sqr();
            let r1 = d.zf_3 / m2 + zarg;
            let r2 = d.zbf_3 / m2 + zbarg;
            let targ = (d.tf_i / w).im;
            let r3 = d.tf_3 / m2 + targ;
            Ok(ContactResiduals {
                r1,
                r2,
                r3_minus_lambda: r3 - lambda,
                lambda,
            })
        }
        GroupKind::Heis => {
            let lambda = d.zf_i.norm_sqr() - d.zbf_i.norm_sqr();
            // (F*ω)(V) = Vf_3 − i(f̄_I·Vf_I − f_I·Vf̄_I) for each frame field V.
            let r1 = d.zf_3 - i * (w.conj() * d.zf_i - w * d.zbf_i.conj());
            let r2 = d.zbf_3 - i * (w.conj() * d.zbf_i - w * d.zf_i.conj());
            let r3 = d.tf_3 + 2.0 * (w.conj() * d.tf_i).im;
            Ok(ContactResiduals {
                r1,
                r2,
                r3_minus_lambda: r3 - lambda,
                lambda,
            })
        }
    }
}

/// The contact multiplier λ* (star) or λ (heis).
///
/// Errors with [`Error::OrientationReversed`] when the value is not positive.
pub fn lambda(map: &dyn StarMap, z: Complex64, t: f64, kind: GroupKind) -> Result<f64> {
    let d = frame_derivatives(map, z, t, kind)?;
    let value = match kind {
        GroupKind::Star => {
            let (zlog, zblog) = d.log_derivs(map.f_i(z, t))?;
            zlog.norm_sqr() - zblog.norm_sqr()
        }
        GroupKind::Heis => d.zf_i.norm_sqr() - d.zbf_i.norm_sqr(),
    };
    if value <= 0.0 {
        return Err(Error::OrientationReversed(value));
    }
    Ok(value)
}

/// Singular values of the horizontal differential and the distortion quotient.
#[derive(Debug, Clone, Copy)]
pub struct Distortion {
    pub lambda1: f64,
    pub lambda2: f64,
    pub k: f64,
}

/// λ₁ = |𝐙Log f_I| + |𝐙̄Log f_I|, λ₂ = |𝐙Log f_I| − |𝐙̄Log f_I|, K = λ₁/λ₂.
///
/// K agrees between the two frames, since 𝐙 = zZ rescales both norms equally.
/// Errors with [`Error::DegenerateMap`] when λ₂ ≤ 0.
pub fn distortion(map: &dyn StarMap, z: Complex64, t: f64, kind: GroupKind) -> Result<Distortion> {
    let d = frame_derivatives(map, z, t, kind)?;
    distortion_from_derivs(map, z, t, &d)
}

fn distortion_from_derivs(
    map: &dyn StarMap,
    z: Complex64,
    t: f64,
    d: &FrameDerivs,
) -> Result<Distortion> {
    let (p, q) = match d.kind {
        GroupKind::Star => {
            let (zlog, zblog) = d.log_derivs(map.f_i(z, t))?;
            (zlog.norm(), zblog.norm())
        }
        GroupKind::Heis => (d.zf_i.norm(), d.zbf_i.norm()),
    };
    let lambda1 = p + q;
    let lambda2 = p - q;
    if lambda2 <= 0.0 {
        return Err(Error::DegenerateMap(lambda2));
    }
    Ok(Distortion {
        lambda1,
        lambda2,
        k: lambda1 / lambda2,
    })
}

/// Beltrami coefficient μ = 𝐙̄f_I/𝐙f_I (star) or Z̄f_I/Zf_I (heis).
pub fn beltrami(map: &dyn StarMap, z: Complex64, t: f64, kind: GroupKind) -> Result<Complex64> {
    let d = frame_derivatives(map, z, t, kind)?;
    if d.zf_i.norm() < MIN_STAR_MODULUS {
        return Err(Error::DegenerateMap(0.0));
    }
    Ok(d.zbf_i / d.zf_i)
}

/// Full pointwise report: residuals, multiplier, singular values, distortion,
/// Beltrami coefficient and the independent Jacobian cross-check.
#[derive(Debug, Clone, Copy)]
pub struct ContactReport {
    pub z: Complex64,
    pub t: f64,
    pub r1: Complex64,
    pub r2: Complex64,
    pub r3_minus_lambda: f64,
    pub lambda_star: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub k: f64,
    pub mu: Complex64,
    /// |J_F − λ²| / λ², with J_F from a finite-difference 3×3 Jacobian.
    pub jacobian_residual: f64,
}

/// Determinant of the Euclidean 3×3 Jacobian of (x,y,t) ↦ (Re f_I, Im f_I, f_3),
/// always from finite differences so that it is independent of any analytic
/// derivative path.
pub fn euclidean_jacobian_fd(map: &dyn StarMap, z: Complex64, t: f64) -> Result<f64> {
    let p = fd_partials(map, z, t)?;
    let det = p.fi_x.re * (p.fi_y.im * p.f3_t - p.fi_t.im * p.f3_y)
        - p.fi_y.re * (p.fi_x.im * p.f3_t - p.fi_t.im * p.f3_x)
        + p.fi_t.re * (p.fi_x.im * p.f3_y - p.fi_y.im * p.f3_x);
    if det.is_finite() {
        Ok(det)
    } else {
        Err(Error::NonFiniteDerivative)
    }
}

/// Assemble the full report at one point.
pub fn full_report(
    map: &dyn StarMap,
    z: Complex64,
    t: f64,
    kind: GroupKind,
) -> Result<ContactReport> {
    let d = frame_derivatives(map, z, t, kind)?;
    let res = residuals_from_derivs(map, z, t, &d)?;
    if res.lambda <= 0.0 {
        return Err(Error::OrientationReversed(res.lambda));
    }
    let dist = distortion_from_derivs(map, z, t, &d)?;
    if d.zf_i.norm() < MIN_STAR_MODULUS {
        return Err(Error::DegenerateMap(0.0));
    }
    let mu = d.zbf_i / d.zf_i;
    // The frame volume is dx∧dy∧dt/(2|z|⁴) on ℍ* and dx∧dy∧dt on ℍ, so the
    // frame determinant is the Euclidean one times |z|⁴/|f_I|⁴ (star) or 1.
    let je = euclidean_jacobian_fd(map, z, t)?;
    let j_frame = match kind {
        GroupKind::Star => {
            let w = map.f_i(z, t);
            je * z.norm_sqr().powi(2) / w.norm_sqr().powi(2)
        }
        GroupKind::Heis => je,
    };
    let l2 = res.lambda * res.lambda;
    Ok(ContactReport {
        z,
        t,
        r1: res.r1,
        r2: res.r2,
        r3_minus_lambda: res.r3_minus_lambda,
        lambda_star: res.lambda,
        lambda1: dist.lambda1,
        lambda2: dist.lambda2,
        k: dist.k,
        mu,
        jacobian_residual: (j_frame - l2).abs() / l2,
    })
}

/// Format a number with 17 significant digits, '.' decimal, no locale.
pub fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

impl ContactReport {
    pub fn json_record(&self) -> serde_json::Value {
        json!({
            "point": [self.z.re, self.z.im, self.t],
            "R1": self.r1.norm(),
            "R2": self.r2.norm(),
            "lambda_star": self.lambda_star,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "K": self.k,
            "mu_re": self.mu.re,
            "mu_im": self.mu.im,
            "jacobian_residual": self.jacobian_residual,
        })
    }

    pub fn csv_header() -> &'static str {
        "x,y,t,R1,R2,lambda_star,lambda1,lambda2,K,mu_re,mu_im,jacobian_residual"
    }

    pub fn csv_row(&self) -> String {
        [
            self.z.re,
            self.z.im,
            self.t,
            self.r1.norm(),
            self.r2.norm(),
            self.lambda_star,
            self.lambda1,
            self.lambda2,
            self.k,
            self.mu.re,
            self.mu.im,
            self.jacobian_residual,
        ]
        .iter()
        .map(|v| fmt_g17(*v))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Result of the fibre-preservation sweep.
#[derive(Debug, Clone, Copy)]
pub struct CirclesReport {
    /// max over the grid of |𝐓f_II| with f_II = −|f_I|² + i f_3.
    pub max_t_f_ii: f64,
    /// Standard deviation of λ* over the grid.
    pub lambda_stdev: f64,
    pub preserving: bool,
}

/// A map preserves the Korányi fibres iff f_II depends on ζ only, i.e.
/// 𝐓f_II = 0; equivalently λ* is constant. Both are swept over the grid.
pub fn circles_preserving_check(
    map: &dyn StarMap,
    grid: &[StarPoint],
    tol: f64,
) -> Result<CirclesReport> {
    let mut max_t_f_ii: f64 = 0.0;
    let mut lambdas = Vec::with_capacity(grid.len());
    for p in grid {
        let d = frame_derivatives(map, p.z, p.t, GroupKind::Star)?;
        let w = map.f_i(p.z, p.t);
        // 𝐓f_II = −𝐓|f_I|² + i𝐓f_3 = −2Re(f̄_I·𝐓f_I) + i𝐓f_3
        let t_f_ii = Complex64::new(-2.0 * (w.conj() * d.tf_i).re, d.tf_3);
        max_t_f_ii = max_t_f_ii.max(t_f_ii.norm());
        let (zlog, zblog) = d.log_derivs(w)?;
        lambdas.push(zlog.norm_sqr() - zblog.norm_sqr());
    }
    let n = lambdas.len() as f64;
    let mean = lambdas.iter().sum::<f64>() / n;
    let var = lambdas.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n;
    let lambda_stdev = var.sqrt();
    Ok(CirclesReport {
        max_t_f_ii,
        lambda_stdev,
        preserving: max_t_f_ii < tol,
    })
}

/// Wrapper that hides a map's analytic partials, forcing the
/// finite-difference path.
pub struct FdOnly<M: StarMap>(pub M);

impl<M: StarMap> StarMap for FdOnly<M> {
    fn f_i(&self, z: Complex64, t: f64) -> Complex64 {
        self.0.f_i(z, t)
    }
    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        self.0.f_3(z, t)
    }
}

/// Composition F∘G of two maps, by evaluation only.
pub struct ComposedStar<F, G> {
    pub outer: F,
    pub inner: G,
}

impl<F: StarMap, G: StarMap> StarMap for ComposedStar<F, G> {
    fn f_i(&self, z: Complex64, t: f64) -> Complex64 {
        let (w, s) = self.inner.eval(z, t);
        self.outer.f_i(w, s)
    }
    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        let (w, s) = self.inner.eval(z, t);
        self.outer.f_3(w, s)
    }
}

/// The identity map, with exact partials.
pub struct IdentityStar;

impl StarMap for IdentityStar {
    fn f_i(&self, z: Complex64, _t: f64) -> Complex64 {
        z
    }
    fn f_3(&self, _z: Complex64, t: f64) -> f64 {
        t
    }
    fn partials(&self, _z: Complex64, _t: f64) -> Option<MapPartials> {
        Some(MapPartials {
            fi_x: Complex64::new(1.0, 0.0),
            fi_y: Complex64::new(0.0, 1.0),
            fi_t: Complex64::new(0.0, 0.0),
            f3_x: 0.0,
            f3_y: 0.0,
            f3_t: 1.0,
        })
    }
}
