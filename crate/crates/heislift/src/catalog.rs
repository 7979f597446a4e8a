//! Closed-form map families with analytic derivatives and closed-form
//! potentials. These entries are the oracles for the verification suites:
//! every numeric construction in [`crate::lifting`] is cross-checked against
//! a closed form from here.
//!
//! Families on ℒ (lift target ℍ*):
//!
//! * SU(1,1) isometries f(ζ) = (aζ + ib)/(icζ + d), ad + bc = 1; μ_f ≡ 0,
//!   ψ is constant for c = 0 and arctan(ξ/(η − d/c)) + const for c ≠ 0.
//! * Twist maps f(ζ) = ζ·e^{g(θ)}, θ = arg ζ ∈ (π/2, 3π/2); J_f = e^{2g},
//!   μ_f = i g′/(2 − i g′)·(ζ/ζ̄), with the potential ψ(θ) = ½∫ g′(τ)tan τ dτ
//!   (for g = kθ: ψ(θ) = −(k/2)·ln(−cos θ) + const). The potential varies
//!   with θ whenever g′·tan θ ≢ 0; a constant phase does not satisfy the
//!   potential equation, and the lifted phase factor e^{iψ} must carry it.
//! * Spiral-stretch maps f(ζ) = |ζ|^{k+1}e^{iΘ}, Θ = π + arctan(tan θ/(k+1) + k′),
//!   the symplectic member of the family ζ|ζ|^k e^{i g(θ)};
//!   ψ = (k′(k+1)/2)·ln|ζ| + g(θ)/2 + const. The branch Θ = π + arctan(·)
//!   keeps f(ℒ) ⊆ ℒ and reduces to the identity at k = k′ = 0.
//!
//! Families on ℂ (lift target ℍ): affine symplectic maps az + bz̄ + c with
//! |a|² − |b|² = 1, plus plane rotations. The plain stretch ζ|ζ| is included
//! as a negative control: it is not symplectic and must be rejected by the
//! gates. Heisenberg isometries and similarities are exposed as group-map
//! entries.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contact::{MapPartials, StarMap};
use crate::curves::PlaneDomain;
use crate::error::{Error, Result};
use crate::group::{arg_left, HeisIsometry, HeisPoint, StarPoint, Su11Element};
use crate::lifting::{
    lift_heis, lift_star, IdentityPlanar, LiftOpts, LiftedHeisMap, LiftedStarMap, PlanarMap,
};
use crate::numerics::{adaptive_gl, QuadOpts};

type PsiFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;
type MuFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// One catalog family instance.
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<(String, f64)>,
    /// The planar source map, for families defined by one.
    pub planar: Option<Arc<dyn PlanarMap>>,
    /// Closed-form potential ψ (up to an additive constant).
    pub closed_form_psi: Option<PsiFn>,
    /// Closed-form lifted (or group) map.
    pub closed_form_lift: Option<Arc<dyn StarMap>>,
    /// Expected Beltrami coefficient of the lift, as a function of ζ.
    pub expected_mu: Option<MuFn>,
}

impl CatalogEntry {
    /// Numeric lift of the planar source (ℒ-families only).
    pub fn lift(&self, opts: LiftOpts) -> Result<LiftedStarMap> {
        let planar = self
            .planar
            .clone()
            .ok_or_else(|| Error::DomainViolation(format!("{} has no planar source", self.name)))?;
        lift_star(planar, opts)
    }
}

// ---------------------------------------------------------------------------
// SU(1,1)
// ---------------------------------------------------------------------------

/// The Möbius isometry of ℒ attached to an SU(1,1) element.
pub struct Su11Planar {
    pub elem: Su11Element,
}

impl PlanarMap for Su11Planar {
    fn domain(&self) -> PlaneDomain {
        PlaneDomain::LeftHalfPlane
    }
    fn eval(&self, zeta: Complex64) -> Complex64 {
        self.elem
            .moebius(zeta)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
    fn wirtinger(&self, zeta: Complex64) -> Result<(Complex64, Complex64)> {
        Ok((
            self.elem.moebius_derivative(zeta)?,
            Complex64::new(0.0, 0.0),
        ))
    }
    fn has_analytic_derivatives(&self) -> bool {
        true
    }
    fn log_jacobian_gradient(&self, zeta: Complex64) -> Result<Complex64> {
        // J = |icζ + d|⁻⁴ ⇒ ∂ζ log J = −2ic/(icζ + d)
        let i = Complex64::i();
        let den = i * self.elem.c * zeta + self.elem.d;
        if den.norm() < 1e-300 {
            return Err(Error::SingularDenominator(den.norm()));
        }
        Ok(-2.0 * i * self.elem.c / den)
    }
}

/// The action of SU(1,1)×U(1) on ℍ* as a star map with analytic partials.
pub struct Su11StarMap {
    pub elem: Su11Element,
}

impl StarMap for Su11StarMap {
    fn f_i(&self, z: Complex64, t: f64) -> Complex64 {
        let i = Complex64::i();
        let zeta = crate::group::alpha_coord(z, t);
        let den = i * self.elem.c * zeta + self.elem.d;
        z * Complex64::from_polar(1.0, self.elem.theta) / den
    }

    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        let zeta = crate::group::alpha_coord(z, t);
        self.elem.moebius(zeta).map(|w| w.im).unwrap_or(f64::NAN)
    }

    fn partials(&self, z: Complex64, t: f64) -> Option<MapPartials> {
        let i = Complex64::i();
        let zeta = crate::group::alpha_coord(z, t);
        let den = i * self.elem.c * zeta + self.elem.d;
        if den.norm() < 1e-300 {
            return None;
        }
        // f_I = z·G(ζ) with G holomorphic; ζ_x = −2x, ζ_y = −2y, ζ_t = i.
        let g = Complex64::from_polar(1.0, self.elem.theta) / den;
        let g_z = -i * self.elem.c * g / den;
        let m_z = self.elem.moebius_derivative(zeta).ok()?;
        let (x, y) = (z.re, z.im);
        let fi_x = g + z * g_z * (-2.0 * x);
        let fi_y = i * g + z * g_z * (-2.0 * y);
        let fi_t = z * g_z * i;
        let f3_x = (m_z * (-2.0 * x)).im;
        let f3_y = (m_z * (-2.0 * y)).im;
        let f3_t = (m_z * i).im;
        Some(MapPartials {
            fi_x,
            fi_y,
            fi_t,
            f3_x,
            f3_y,
            f3_t,
        })
    }
}

/// SU(1,1)×U(1) entry: conformal isometries of ℒ and their lifts.
pub fn make_su11(a: f64, b: f64, c: f64, d: f64, theta: f64) -> Result<CatalogEntry> {
    let elem = Su11Element::new(a, b, c, d, theta)?;
    let closed_form_psi: PsiFn = if c == 0.0 {
        Arc::new(|_| 0.0)
    } else {
        let ratio = d / c;
        // arctan(ξ/(η − d/c)) on the branch continuous over ℒ: the argument
        // of (η − d/c) + iξ, which has negative imaginary part there.
        Arc::new(move |zeta: Complex64| zeta.re.atan2(zeta.im - ratio))
    };
    Ok(CatalogEntry {
        name: "su11".into(),
        params: vec![
            ("a".into(), a),
            ("b".into(), b),
            ("c".into(), c),
            ("d".into(), d),
            ("theta".into(), theta),
        ],
        planar: Some(Arc::new(Su11Planar { elem })),
        closed_form_psi: Some(closed_form_psi),
        closed_form_lift: Some(Arc::new(Su11StarMap { elem })),
        expected_mu: Some(Arc::new(|_| Complex64::new(0.0, 0.0))),
    })
}

// ---------------------------------------------------------------------------
// Twist maps
// ---------------------------------------------------------------------------

/// Angular profile g(θ) of a twist map, with its derivative.
#[derive(Clone)]
pub enum TwistProfile {
    /// g(θ) = kθ.
    Linear { k: f64 },
    /// Arbitrary smooth profile with explicit derivative.
    Custom {
        g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        dg: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl TwistProfile {
    pub fn g(&self, theta: f64) -> f64 {
        match self {
            TwistProfile::Linear { k } => k * theta,
            TwistProfile::Custom { g, .. } => g(theta),
        }
    }

    pub fn dg(&self, theta: f64) -> f64 {
        match self {
            TwistProfile::Linear { k } => *k,
            TwistProfile::Custom { dg, .. } => dg(theta),
        }
    }

    /// The potential primitive ψ₀(θ) = ½∫_π^θ g′(τ)·tan τ dτ, closed-form for
    /// linear profiles and by quadrature otherwise.
    pub fn psi0(&self, theta: f64) -> f64 {
        match self {
            TwistProfile::Linear { k } => -(k / 2.0) * (-theta.cos()).ln(),
            TwistProfile::Custom { dg, .. } => {
                let dg = dg.clone();
                adaptive_gl(
                    &move |tau: f64| 0.5 * dg(tau) * tau.tan(),
                    std::f64::consts::PI,
                    theta,
                    QuadOpts::default(),
                )
                .unwrap_or(f64::NAN)
            }
        }
    }
}

/// Twist map f(ζ) = ζ·e^{g(arg ζ)}.
pub struct TwistPlanar {
    pub profile: TwistProfile,
}

impl PlanarMap for TwistPlanar {
    fn domain(&self) -> PlaneDomain {
        PlaneDomain::LeftHalfPlane
    }
    fn eval(&self, zeta: Complex64) -> Complex64 {
        zeta * self.profile.g(arg_left(zeta)).exp()
    }
    fn wirtinger(&self, zeta: Complex64) -> Result<(Complex64, Complex64)> {
        let i = Complex64::i();
        let dg = self.profile.dg(arg_left(zeta));
        let f = self.eval(zeta);
        Ok((
            f * (2.0 - i * dg) / (2.0 * zeta),
            i * dg * f / (2.0 * zeta.conj()),
        ))
    }
    fn has_analytic_derivatives(&self) -> bool {
        true
    }
    fn log_jacobian_gradient(&self, zeta: Complex64) -> Result<Complex64> {
        // J = e^{2g(θ)} ⇒ ∂ζ log J = 2g′·θ_ζ = −i g′/ζ
        let dg = self.profile.dg(arg_left(zeta));
        Ok(-Complex64::i() * dg / zeta)
    }
}

/// Closed-form twist lift: f_I = z·e^{g(θ_ζ)/2}·e^{i(ψ₀(θ_ζ)+c)},
/// f_3 = t·e^{g(θ_ζ)} with θ_ζ = arg(−|z|² + it).
pub struct TwistStarMap {
    pub profile: TwistProfile,
    pub c: f64,
}

impl TwistStarMap {
    fn phase_and_scale(&self, zeta: Complex64) -> (f64, f64) {
        let theta = arg_left(zeta);
        (self.profile.g(theta), self.profile.psi0(theta) + self.c)
    }
}

impl StarMap for TwistStarMap {
    fn f_i(&self, z: Complex64, t: f64) -> Complex64 {
        let zeta = crate::group::alpha_coord(z, t);
        let (g, psi) = self.phase_and_scale(zeta);
        z * (g / 2.0).exp() * Complex64::from_polar(1.0, psi)
    }

    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        let zeta = crate::group::alpha_coord(z, t);
        t * self.profile.g(arg_left(zeta)).exp()
    }

    fn partials(&self, z: Complex64, t: f64) -> Option<MapPartials> {
        let i = Complex64::i();
        let zeta = crate::group::alpha_coord(z, t);
        let theta = arg_left(zeta);
        let dg = self.profile.dg(theta);
        let w = self.f_i(z, t);
        // 𝐙 Log f_I = 1 − i g′/2 and 𝐙̄ Log f_I = (i g′/2)·e^{2iθ} exactly.
        let e2 = (zeta / zeta.conj()) * Complex64::new(1.0, 0.0);
        let bz_fi = w * (1.0 - i * dg / 2.0);
        let bzb_fi = w * (i * dg / 2.0) * e2;
        let bt_fi = i * w;
        // f_3 = Im ζ · e^{g(θ)} is a function of ζ:
        // (f_3)_ζ = −(i/2)e^g(1 + g′·Im ζ/ζ),  𝐙f_3 = 2Re ζ·(f_3)_ζ.
        let eg = self.profile.g(theta).exp();
        let f3_z = -(i / 2.0) * eg * (1.0 + dg * zeta.im / zeta);
        let bz_f3 = 2.0 * zeta.re * f3_z;
        let bzb_f3 = 2.0 * zeta.re * f3_z.conj();
        Some(MapPartials::from_bold_frame(
            z, bz_fi, bzb_fi, bt_fi, bz_f3, bzb_f3, 0.0,
        ))
    }
}

/// Twist entry with potential constant `c`.
pub fn make_twist(profile: TwistProfile, c: f64) -> CatalogEntry {
    let params = match &profile {
        TwistProfile::Linear { k } => vec![("k".into(), *k), ("c".into(), c)],
        TwistProfile::Custom { .. } => vec![("c".into(), c)],
    };
    let psi_profile = profile.clone();
    let mu_profile = profile.clone();
    let lift_profile = profile.clone();
    CatalogEntry {
        name: "twist".into(),
        params,
        planar: Some(Arc::new(TwistPlanar {
            profile: profile.clone(),
        })),
        closed_form_psi: Some(Arc::new(move |zeta: Complex64| {
            psi_profile.psi0(arg_left(zeta)) + c
        })),
        closed_form_lift: Some(Arc::new(TwistStarMap {
            profile: lift_profile,
            c,
        })),
        expected_mu: Some(Arc::new(move |zeta: Complex64| {
            let i = Complex64::i();
            let dg = mu_profile.dg(arg_left(zeta));
            i * dg / (2.0 - i * dg) * (zeta / zeta.conj())
        })),
    }
}

// ---------------------------------------------------------------------------
// Spiral-stretch maps
// ---------------------------------------------------------------------------

/// The symplectic spiral-stretch map
/// f(ζ) = |ζ|^{k+1}·e^{iΘ}, Θ = π + arctan(tan θ/(k+1) + k′), k ≥ 0.
///
/// k = 0, k′ ≠ 0 is the pure spiral family; k > 0, k′ = 0 the stretch
/// (modulo a rotation).
pub struct SpiralStretchPlanar {
    pub k: f64,
    pub kp: f64,
}

impl SpiralStretchPlanar {
    /// (cos Θ, sin Θ) in the overflow-free form
    /// cos Θ = (k+1)ξ/√D, sin Θ = (η + k′(k+1)ξ)/√D,
    /// D = (k+1)²ξ² + (η + k′(k+1)ξ)².
    fn direction(&self, zeta: Complex64) -> Complex64 {
        let kk = self.k + 1.0;
        let num = zeta.im + self.kp * kk * zeta.re;
        let d = (kk * zeta.re).powi(2) + num * num;
        let sqrt_d = d.sqrt();
        Complex64::new(kk * zeta.re / sqrt_d, num / sqrt_d)
    }

    /// g′(θ) at ζ, in the same stable form:
    /// 1 + g′ = (k+1)(ξ² + η²)/D.
    fn dg(&self, zeta: Complex64) -> f64 {
        let kk = self.k + 1.0;
        let num = zeta.im + self.kp * kk * zeta.re;
        let d = (kk * zeta.re).powi(2) + num * num;
        kk * zeta.norm_sqr() / d - 1.0
    }

    /// g(θ) = Θ − θ.
    fn g(&self, zeta: Complex64) -> f64 {
        let kk = self.k + 1.0;
        let a = zeta.im / (zeta.re * kk) + self.kp;
        std::f64::consts::PI + a.atan() - arg_left(zeta)
    }
}

impl PlanarMap for SpiralStretchPlanar {
    fn domain(&self) -> PlaneDomain {
        PlaneDomain::LeftHalfPlane
    }
    fn eval(&self, zeta: Complex64) -> Complex64 {
        zeta.norm().powf(self.k + 1.0) * self.direction(zeta)
    }
    fn wirtinger(&self, zeta: Complex64) -> Result<(Complex64, Complex64)> {
        let dg = self.dg(zeta);
        let f = self.eval(zeta);
        Ok((
            (2.0 + self.k + dg) * f / (2.0 * zeta),
            (self.k - dg) * f / (2.0 * zeta.conj()),
        ))
    }
    fn has_analytic_derivatives(&self) -> bool {
        true
    }
}

/// Closed-form spiral-stretch lift, by the explicit potential
/// ψ = (k′(k+1)/2)·ln|ζ| + g(θ)/2 + c.
pub struct SpiralStarMap {
    pub planar: SpiralStretchPlanar,
    pub c: f64,
}

impl StarMap for SpiralStarMap {
    fn f_i(&self, z: Complex64, t: f64) -> Complex64 {
        let zeta = crate::group::alpha_coord(z, t);
        let r = zeta.norm();
        let dg = self.planar.dg(zeta);
        let j_quarter =
            ((1.0 + self.planar.k) * (1.0 + dg)).powf(0.25) * r.powf(self.planar.k / 2.0);
        let psi = self.planar.kp * (self.planar.k + 1.0) / 2.0 * r.ln()
            + self.planar.g(zeta) / 2.0
            + self.c;
        z * j_quarter * Complex64::from_polar(1.0, psi)
    }

    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        self.planar.eval(crate::group::alpha_coord(z, t)).im
    }
}

/// Spiral-stretch entry; requires k ≥ 0.
pub fn make_spiral_stretch(k: f64, kp: f64, c: f64) -> Result<CatalogEntry> {
    if k < 0.0 {
        return Err(Error::DomainViolation(
            "spiral-stretch requires k ≥ 0".into(),
        ));
    }
    let planar = SpiralStretchPlanar { k, kp };
    let psi_planar = SpiralStretchPlanar { k, kp };
    let mu_planar = SpiralStretchPlanar { k, kp };
    Ok(CatalogEntry {
        name: "spiral".into(),
        params: vec![("k".into(), k), ("kp".into(), kp), ("c".into(), c)],
        planar: Some(Arc::new(planar)),
        closed_form_psi: Some(Arc::new(move |zeta: Complex64| {
            kp * (k + 1.0) / 2.0 * zeta.norm().ln() + psi_planar.g(zeta) / 2.0 + c
        })),
        closed_form_lift: Some(Arc::new(SpiralStarMap {
            planar: SpiralStretchPlanar { k, kp },
            c,
        })),
        expected_mu: Some(Arc::new(move |zeta: Complex64| {
            let dg = mu_planar.dg(zeta);
            (k - dg) / (2.0 + k + dg) * (zeta / zeta.conj())
        })),
    })
}

// ---------------------------------------------------------------------------
// Plane families and negative controls
// ---------------------------------------------------------------------------

/// Affine map az + bz̄ + c of ℂ; Euclidean-symplectic iff |a|² − |b|² = 1.
pub struct AffinePlanar {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl PlanarMap for AffinePlanar {
    fn domain(&self) -> PlaneDomain {
        PlaneDomain::Plane
    }
    fn eval(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b * z.conj() + self.c
    }
    fn wirtinger(&self, _z: Complex64) -> Result<(Complex64, Complex64)> {
        Ok((self.a, self.b))
    }
    fn has_analytic_derivatives(&self) -> bool {
        true
    }
    fn log_jacobian_gradient(&self, _z: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }
}

/// The plain stretch ζ·|ζ|: not symplectic, present as a negative control.
pub struct PlainStretch;

impl PlanarMap for PlainStretch {
    fn domain(&self) -> PlaneDomain {
        PlaneDomain::LeftHalfPlane
    }
    fn eval(&self, zeta: Complex64) -> Complex64 {
        zeta * zeta.norm()
    }
}

/// Affine entry with expected μ = b/a.
pub fn make_affine(a: Complex64, b: Complex64, c: Complex64) -> CatalogEntry {
    let mu = b / a;
    CatalogEntry {
        name: "affine".into(),
        params: vec![
            ("a_re".into(), a.re),
            ("a_im".into(), a.im),
            ("b_re".into(), b.re),
            ("b_im".into(), b.im),
            ("c_re".into(), c.re),
            ("c_im".into(), c.im),
        ],
        planar: Some(Arc::new(AffinePlanar { a, b, c })),
        closed_form_psi: None,
        closed_form_lift: None,
        expected_mu: Some(Arc::new(move |_| mu)),
    }
}

// ---------------------------------------------------------------------------
// Heisenberg isometries as group-map entries
// ---------------------------------------------------------------------------

/// A Heisenberg isometry/similarity as a star map (ℍ kind).
pub struct HeisIsometryMap {
    pub iso: HeisIsometry,
}

impl StarMap for HeisIsometryMap {
    fn f_i(&self, z: Complex64, t: f64) -> Complex64 {
        self.iso
            .apply(HeisPoint::new(z, t))
            .map(|p| p.z)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn f_3(&self, z: Complex64, t: f64) -> f64 {
        self.iso
            .apply(HeisPoint::new(z, t))
            .map(|p| p.t)
            .unwrap_or(f64::NAN)
    }

    fn partials(&self, _z: Complex64, _t: f64) -> Option<MapPartials> {
        let i = Complex64::i();
        match self.iso {
            HeisIsometry::Translation { w, s: _ } => Some(MapPartials {
                fi_x: Complex64::new(1.0, 0.0),
                fi_y: i,
                fi_t: Complex64::new(0.0, 0.0),
                // f_3 = s + t + 2Im(z̄w) = s + t + 2(x·Im w − y·Re w)
                f3_x: 2.0 * w.im,
                f3_y: -2.0 * w.re,
                f3_t: 1.0,
            }),
            HeisIsometry::Rotation { theta } => {
                let e = Complex64::from_polar(1.0, theta);
                Some(MapPartials {
                    fi_x: e,
                    fi_y: i * e,
                    fi_t: Complex64::new(0.0, 0.0),
                    f3_x: 0.0,
                    f3_y: 0.0,
                    f3_t: 1.0,
                })
            }
            HeisIsometry::Conjugation => Some(MapPartials {
                fi_x: Complex64::new(1.0, 0.0),
                fi_y: -i,
                fi_t: Complex64::new(0.0, 0.0),
                f3_x: 0.0,
                f3_y: 0.0,
                f3_t: -1.0,
            }),
            HeisIsometry::Dilation { delta } => Some(MapPartials {
                fi_x: Complex64::new(delta, 0.0),
                fi_y: i * delta,
                fi_t: Complex64::new(0.0, 0.0),
                f3_x: 0.0,
                f3_y: 0.0,
                f3_t: delta * delta,
            }),
            // Inversion partials go through finite differences.
            HeisIsometry::Inversion => None,
        }
    }
}

/// Heisenberg isometry/similarity entry.
pub fn make_heis_isometry(iso: HeisIsometry) -> Result<CatalogEntry> {
    if let HeisIsometry::Dilation { delta } = iso {
        if delta <= 0.0 {
            return Err(Error::DomainViolation("dilation requires δ > 0".into()));
        }
    }
    let (name, params) = match iso {
        HeisIsometry::Translation { w, s } => (
            "heis_translation",
            vec![
                ("w_re".into(), w.re),
                ("w_im".into(), w.im),
                ("s".into(), s),
            ],
        ),
        HeisIsometry::Rotation { theta } => ("heis_rotation", vec![("theta".into(), theta)]),
        HeisIsometry::Conjugation => ("conjugation", vec![]),
        HeisIsometry::Dilation { delta } => ("dilation", vec![("delta".into(), delta)]),
        HeisIsometry::Inversion => ("inversion", vec![]),
    };
    Ok(CatalogEntry {
        name: name.into(),
        params,
        planar: None,
        closed_form_psi: None,
        closed_form_lift: Some(Arc::new(HeisIsometryMap { iso })),
        expected_mu: None,
    })
}

// ---------------------------------------------------------------------------
// JSON map specs and lift descriptors
// ---------------------------------------------------------------------------

/// JSON-addressable map specification, e.g. `{"name":"twist","k":2.0,"c":0.0}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum MapSpec {
    /// Identity of ℒ.
    Identity,
    Su11 {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        #[serde(default)]
        theta: f64,
    },
    Twist {
        k: f64,
        #[serde(default)]
        c: f64,
    },
    Spiral {
        k: f64,
        kp: f64,
        #[serde(default)]
        c: f64,
    },
    PlainStretch,
    Affine {
        a_re: f64,
        a_im: f64,
        b_re: f64,
        b_im: f64,
        #[serde(default)]
        c_re: f64,
        #[serde(default)]
        c_im: f64,
    },
    /// Plane rotation e^{iθ}z (a ℂ-map; its lift is R_θ).
    Rotation {
        theta: f64,
    },
    HeisTranslation {
        w_re: f64,
        w_im: f64,
        s: f64,
    },
    HeisRotation {
        theta: f64,
    },
    Conjugation,
    Dilation {
        delta: f64,
    },
    Inversion,
}

impl MapSpec {
    pub fn parse(text: &str) -> Result<MapSpec> {
        serde_json::from_str(text)
            .map_err(|e| Error::DomainViolation(format!("invalid map spec: {e}")))
    }

    /// Which group the entry's lift (or group map) acts on.
    pub fn target(&self) -> crate::group::GroupKind {
        match self {
            MapSpec::Identity
            | MapSpec::Su11 { .. }
            | MapSpec::Twist { .. }
            | MapSpec::Spiral { .. }
            | MapSpec::PlainStretch => crate::group::GroupKind::Star,
            _ => crate::group::GroupKind::Heis,
        }
    }

    pub fn build(&self) -> Result<CatalogEntry> {
        match *self {
            MapSpec::Identity => Ok(CatalogEntry {
                name: "identity".into(),
                params: vec![],
                planar: Some(Arc::new(IdentityPlanar(PlaneDomain::LeftHalfPlane))),
                closed_form_psi: Some(Arc::new(|_| 0.0)),
                closed_form_lift: Some(Arc::new(crate::contact::IdentityStar)),
                expected_mu: Some(Arc::new(|_| Complex64::new(0.0, 0.0))),
            }),
            MapSpec::Su11 { a, b, c, d, theta } => make_su11(a, b, c, d, theta),
            MapSpec::Twist { k, c } => Ok(make_twist(TwistProfile::Linear { k }, c)),
            MapSpec::Spiral { k, kp, c } => make_spiral_stretch(k, kp, c),
            MapSpec::PlainStretch => Ok(CatalogEntry {
                name: "plainstretch".into(),
                params: vec![],
                planar: Some(Arc::new(PlainStretch)),
                closed_form_psi: None,
                closed_form_lift: None,
                expected_mu: None,
            }),
            MapSpec::Affine {
                a_re,
                a_im,
                b_re,
                b_im,
                c_re,
                c_im,
            } => Ok(make_affine(
                Complex64::new(a_re, a_im),
                Complex64::new(b_re, b_im),
                Complex64::new(c_re, c_im),
            )),
            MapSpec::Rotation { theta } => Ok(make_affine(
                Complex64::from_polar(1.0, theta),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            )),
            MapSpec::HeisTranslation { w_re, w_im, s } => {
                make_heis_isometry(HeisIsometry::Translation {
                    w: Complex64::new(w_re, w_im),
                    s,
                })
            }
            MapSpec::HeisRotation { theta } => make_heis_isometry(HeisIsometry::Rotation { theta }),
            MapSpec::Conjugation => make_heis_isometry(HeisIsometry::Conjugation),
            MapSpec::Dilation { delta } => make_heis_isometry(HeisIsometry::Dilation { delta }),
            MapSpec::Inversion => make_heis_isometry(HeisIsometry::Inversion),
        }
    }
}

/// Names and parameter lists of every addressable family.
pub fn catalog_listing() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("identity", vec![]),
        ("su11", vec!["a", "b", "c", "d", "theta"]),
        ("twist", vec!["k", "c"]),
        ("spiral", vec!["k", "kp", "c"]),
        ("plainstretch", vec![]),
        (
            "affine",
            vec!["a_re", "a_im", "b_re", "b_im", "c_re", "c_im"],
        ),
        ("rotation", vec!["theta"]),
        ("heistranslation", vec!["w_re", "w_im", "s"]),
        ("heisrotation", vec!["theta"]),
        ("conjugation", vec![]),
        ("dilation", vec!["delta"]),
        ("inversion", vec![]),
    ]
}

/// A lifted map in re-loadable form: the source spec plus the lift
/// normalization. Values are recomputed on demand after deserialization.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LiftDescriptor {
    pub kind: String,
    pub map: MapSpec,
    pub basepoint: (f64, f64),
    pub phase: f64,
}

/// A built lift of either kind.
pub enum BuiltLift {
    Star(LiftedStarMap),
    Heis(LiftedHeisMap),
}

impl BuiltLift {
    pub fn as_star_map(&self) -> &dyn StarMap {
        match self {
            BuiltLift::Star(m) => m,
            BuiltLift::Heis(m) => m,
        }
    }

    pub fn kind(&self) -> crate::group::GroupKind {
        match self {
            BuiltLift::Star(_) => crate::group::GroupKind::Star,
            BuiltLift::Heis(_) => crate::group::GroupKind::Heis,
        }
    }
}

impl LiftDescriptor {
    pub fn for_star(map: MapSpec, basepoint: Complex64, phase: f64) -> Self {
        LiftDescriptor {
            kind: "star".into(),
            map,
            basepoint: (basepoint.re, basepoint.im),
            phase,
        }
    }

    pub fn for_heis(map: MapSpec, basepoint: Complex64) -> Self {
        LiftDescriptor {
            kind: "heis".into(),
            map,
            basepoint: (basepoint.re, basepoint.im),
            phase: 0.0,
        }
    }

    /// Rebuild the lift; ψ/φ values are recomputed on demand.
    pub fn build(&self, force: bool) -> Result<BuiltLift> {
        let entry = self.map.build()?;
        let planar = entry.planar.clone().ok_or_else(|| {
            Error::DomainViolation(format!("map '{}' is not a planar source", entry.name))
        })?;
        let base = Complex64::new(self.basepoint.0, self.basepoint.1);
        match self.kind.as_str() {
            "star" => Ok(BuiltLift::Star(lift_star(
                planar,
                LiftOpts {
                    basepoint: base,
                    phase: self.phase,
                    force,
                    gate_tol: None,
                },
            )?)),
            "heis" => Ok(BuiltLift::Heis(lift_heis(planar, base, force)?)),
            other => Err(Error::DomainViolation(format!(
                "unknown lift kind '{other}'"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Comparison helpers used by the verification suites
// ---------------------------------------------------------------------------

/// Sup distance between two maps over a grid after aligning f_I by the single
/// constant U(1) phase estimated at the first grid point.
pub fn sup_distance_after_phase_alignment(
    a: &dyn StarMap,
    b: &dyn StarMap,
    grid: &[StarPoint],
) -> f64 {
    let p0 = grid[0];
    let (wa, wb) = (a.f_i(p0.z, p0.t), b.f_i(p0.z, p0.t));
    let rot = if wb.norm() > 0.0 && wa.norm() > 0.0 {
        let q = wa / wb;
        q / q.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut sup: f64 = 0.0;
    for p in grid {
        let da = (a.f_i(p.z, p.t) - rot * b.f_i(p.z, p.t)).norm();
        let d3 = (a.f_3(p.z, p.t) - b.f_3(p.z, p.t)).abs();
        sup = sup.max(da).max(d3);
    }
    sup
}

/// Standard deviation of the phase difference arg(a.f_I/b.f_I) over a grid
/// (a U(1)-coherence witness).
pub fn phase_difference_stdev(a: &dyn StarMap, b: &dyn StarMap, grid: &[StarPoint]) -> f64 {
    // Average the unit phasors rather than raw angles to stay branch-free.
    let phasors: Vec<Complex64> = grid
        .iter()
        .map(|p| {
            let q = a.f_i(p.z, p.t) / b.f_i(p.z, p.t);
            q / q.norm()
        })
        .collect();
    let mean: Complex64 = phasors.iter().sum::<Complex64>() / phasors.len() as f64;
    let mean = mean / mean.norm();
    let angles: Vec<f64> = phasors.iter().map(|e| (e / mean).arg()).collect();
    let avg = angles.iter().sum::<f64>() / angles.len() as f64;
    (angles.iter().map(|a| (a - avg).powi(2)).sum::<f64>() / angles.len() as f64).sqrt()
}
