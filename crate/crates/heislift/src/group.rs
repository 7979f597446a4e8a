//! The Heisenberg group ℍ and the hyperbolic Heisenberg group ℍ*.
//!
//! ℍ is ℂ×ℝ with (z,t)·(z′,t′) = (z+z′, t+t′+2Im(z̄′z)); its contact form is
//! ω = dt + 2x dy − 2y dx and the left-invariant frame is
//! X = ∂x + 2y∂t, Y = ∂y − 2x∂t, T = ∂t.
//!
//! ℍ* is ℂ_*×ℝ with (z,t)⋆(w,s) = (zw, t+s|z|²); its contact form is
//! ω* = ω/(2|z|²) and the distinguished frame is
//! 𝐗 = x∂x + y∂y, 𝐘 = x∂y − y∂x − 2|z|²∂t, 𝐓 = x∂y − y∂x,
//! with dual coframe φ* = d(|z|²)/(2|z|²), ψ* = −dt/(2|z|²), ω*.
//!
//! The Korányi map α(z,t) = −|z|² + it fibres ℍ* over the left half-plane
//! ℒ = {Re ζ < 0} carrying the hyperbolic metric |dζ|²/(4Re²ζ); the module
//! also provides the Korányi–Cygan distance on ℍ, the 3×3 matrix model of ℍ*,
//! the SU(1,1)×U(1) action, and the embedding onto the Siegel-domain boundary.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{self, central4};

/// Modulus below which a would-be ℍ* point is treated as an effective zero:
/// 1/z and 1/|z|² must stay finite.
pub const MIN_STAR_MODULUS: f64 = 1e-150;

/// Which of the two groups an object lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Heis,
    Star,
}

/// A point (z, t) of the Heisenberg group ℍ = ℂ×ℝ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisPoint {
    pub z: Complex64,
    pub t: f64,
}

impl HeisPoint {
    pub fn new(z: Complex64, t: f64) -> Self {
        HeisPoint { z, t }
    }

    pub fn origin() -> Self {
        HeisPoint {
            z: Complex64::new(0.0, 0.0),
            t: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.z.re.is_finite() && self.z.im.is_finite() && self.t.is_finite()
    }

    /// Group inverse: (z,t)⁻¹ = (−z, −t).
    pub fn inverse(self) -> HeisPoint {
        HeisPoint {
            z: -self.z,
            t: -self.t,
        }
    }

    /// Korányi gauge |(z,t)| = |−|z|² + it|^{1/2} = (|z|⁴ + t²)^{1/4}.
    pub fn gauge(self) -> f64 {
        Complex64::new(-self.z.norm_sqr(), self.t).norm().sqrt()
    }

    /// The complex number −|z|² + it attached to the gauge and to inversion.
    pub fn gauge_complex(self) -> Complex64 {
        Complex64::new(-self.z.norm_sqr(), self.t)
    }
}

/// Group law of ℍ: (z,t)·(z′,t′) = (z + z′, t + t′ + 2Im(z̄′z)).
impl std::ops::Mul for HeisPoint {
    type Output = HeisPoint;

    fn mul(self, other: HeisPoint) -> HeisPoint {
        HeisPoint {
            z: self.z + other.z,
            t: self.t + other.t + 2.0 * (other.z.conj() * self.z).im,
        }
    }
}

/// A point (z, t) of the hyperbolic Heisenberg group ℍ* = ℂ_*×ℝ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarPoint {
    pub z: Complex64,
    pub t: f64,
}

impl StarPoint {
    /// Rejects z with |z| ≤ 1e-150 or non-finite coordinates.
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite() && t.is_finite()) {
            return Err(Error::DomainViolation(
                "ℍ* point has non-finite coordinates".into(),
            ));
        }
        if z.norm() <= MIN_STAR_MODULUS {
            return Err(Error::DomainViolation(
                "ℍ* point has effectively zero modulus".into(),
            ));
        }
        Ok(StarPoint { z, t })
    }

    /// Unit element (1, 0).
    pub fn identity() -> Self {
        StarPoint {
            z: Complex64::new(1.0, 0.0),
            t: 0.0,
        }
    }

    /// Group inverse: (z,t)⁻¹ = (1/z, −t/|z|²).
    pub fn inverse(self) -> StarPoint {
        let n = self.z.norm_sqr();
        StarPoint {
            z: self.z.conj() / n,
            t: -self.t / n,
        }
    }

    pub fn as_heis(self) -> HeisPoint {
        HeisPoint {
            z: self.z,
            t: self.t,
        }
    }
}

/// Group law of ℍ*: (z,t)⋆(w,s) = (zw, t + s|z|²).
impl std::ops::Mul for StarPoint {
    type Output = StarPoint;

    fn mul(self, other: StarPoint) -> StarPoint {
        StarPoint {
            z: self.z * other.z,
            t: self.t + other.t * self.z.norm_sqr(),
        }
    }
}

/// A point ζ = ξ + iη of the left half-plane ℒ = {Re ζ < 0}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypPoint {
    pub zeta: Complex64,
}

impl HypPoint {
    pub fn new(zeta: Complex64) -> Result<Self> {
        if !(zeta.re.is_finite() && zeta.im.is_finite()) || zeta.re >= 0.0 {
            return Err(Error::LeftHalfPlaneViolation {
                re: zeta.re,
                im: zeta.im,
            });
        }
        Ok(HypPoint { zeta })
    }
}

/// Korányi map α: ℍ* → ℒ, (z,t) ↦ −|z|² + it.
pub fn koranyi_alpha(p: StarPoint) -> HypPoint {
    HypPoint {
        zeta: Complex64::new(-p.z.norm_sqr(), p.t),
    }
}

/// Same formula on raw coordinates; used wherever ℍ points tag along.
pub fn alpha_coord(z: Complex64, t: f64) -> Complex64 {
    Complex64::new(-z.norm_sqr(), t)
}

/// The fibre of α over ζ is the circle (√(−Re ζ)·e^{iθ}, Im ζ).
pub fn alpha_fibre_point(zeta: Complex64, theta: f64) -> Result<StarPoint> {
    if zeta.re >= 0.0 {
        return Err(Error::LeftHalfPlaneViolation {
            re: zeta.re,
            im: zeta.im,
        });
    }
    let r = (-zeta.re).sqrt();
    StarPoint::new(Complex64::from_polar(r, theta), zeta.im)
}

/// Korányi–Cygan distance d(p, q) = |p⁻¹·q| on ℍ.
pub fn koranyi_cygan_dist(p: HeisPoint, q: HeisPoint) -> f64 {
    (p.inverse() * q).gauge()
}

/// Hyperbolic metric of ℒ on tangent vectors: g_h(V, W) = Re(V·W̄)/(4Re²ζ).
pub fn hyperbolic_inner(zeta: Complex64, v: Complex64, w: Complex64) -> f64 {
    (v * w.conj()).re / (4.0 * zeta.re * zeta.re)
}

/// arg z on the principal branch (−π, π].
pub fn arg_principal(z: Complex64) -> f64 {
    z.im.atan2(z.re)
}

/// arg ζ on the branch (π/2, 3π/2), continuous on the left half-plane.
pub fn arg_left(zeta: Complex64) -> f64 {
    std::f64::consts::PI + (-zeta.im).atan2(-zeta.re)
}

// ---------------------------------------------------------------------------
// Left-invariant vector fields and the contact coframe
// ---------------------------------------------------------------------------

/// The left-invariant fields of ℍ (plain) and the distinguished frame of ℍ* (bold).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// X = ∂x + 2y∂t
    X,
    /// Y = ∂y − 2x∂t
    Y,
    /// T = ∂t
    T,
    /// Z = ∂z + iz̄∂t
    Z,
    /// Z̄ = ∂z̄ − iz∂t
    ZBar,
    /// 𝐗 = x∂x + y∂y
    BoldX,
    /// 𝐘 = x∂y − y∂x − 2|z|²∂t
    BoldY,
    /// 𝐓 = x∂y − y∂x
    BoldT,
    /// 𝐙 = zZ = z∂z + i|z|²∂t
    BoldZ,
    /// 𝐙̄ = z̄Z̄ = z̄∂z̄ − i|z|²∂t
    BoldZBar,
}

impl Field {
    /// Bold fields live on ℍ* only; they degenerate at z = 0.
    pub fn requires_star(self) -> bool {
        matches!(
            self,
            Field::BoldX | Field::BoldY | Field::BoldT | Field::BoldZ | Field::BoldZBar
        )
    }
}

/// Euclidean partials (∂x h, ∂y h, ∂t h) of a scalar function on the group,
/// by fourth-order central differences with a common step.
pub fn partials_fd<F>(h: &F, z: Complex64, t: f64) -> Result<(Complex64, Complex64, Complex64)>
where
    F: Fn(Complex64, f64) -> Complex64,
{
    let scale = (z.norm_sqr() + t * t).sqrt();
    let step = numerics::fd_step(scale);
    let hx = central4(|x| h(Complex64::new(x, z.im), t), z.re, step)?;
    let hy = central4(|y| h(Complex64::new(z.re, y), t), z.im, step)?;
    let ht = central4(|s| h(z, s), t, step)?;
    Ok((hx, hy, ht))
}

/// Combine Euclidean partials into the directional derivative of `field` at (z, t).
pub fn combine_partials(
    field: Field,
    z: Complex64,
    hx: Complex64,
    hy: Complex64,
    ht: Complex64,
) -> Complex64 {
    let i = Complex64::i();
    let (x, y) = (z.re, z.im);
    let hz = (hx - i * hy) * 0.5;
    let hzb = (hx + i * hy) * 0.5;
    match field {
        Field::X => hx + 2.0 * y * ht,
        Field::Y => hy - 2.0 * x * ht,
        Field::T => ht,
        Field::Z => hz + i * z.conj() * ht,
        Field::ZBar => hzb - i * z * ht,
        Field::BoldX => x * hx + y * hy,
        Field::BoldY => x * hy - y * hx - 2.0 * z.norm_sqr() * ht,
        Field::BoldT => x * hy - y * hx,
        Field::BoldZ => z * (hz + i * z.conj() * ht),
        Field::BoldZBar => z.conj() * (hzb - i * z * ht),
    }
}

/// Directional derivative of `h` along a left-invariant field, partials by
/// finite differences. Callers holding analytic partials of `h` should feed
/// them to [`combine_partials`] instead.
pub fn apply_field<F>(field: Field, h: &F, z: Complex64, t: f64) -> Result<Complex64>
where
    F: Fn(Complex64, f64) -> Complex64,
{
    if field.requires_star() && z.norm() <= MIN_STAR_MODULUS {
        return Err(Error::DomainViolation(
            "bold frame fields require a point of ℍ*".into(),
        ));
    }
    let (hx, hy, ht) = partials_fd(h, z, t)?;
    Ok(combine_partials(field, z, hx, hy, ht))
}

/// A tangent vector at a group point, either in frame coefficients or in
/// coordinate components.
#[derive(Debug, Clone, Copy)]
pub enum Tangent {
    /// a·first + b·second + c·Reeb over {X,Y,T} (ℍ) or {𝐗,𝐘,𝐓} (ℍ*).
    Frame {
        kind: GroupKind,
        a: f64,
        b: f64,
        c: f64,
    },
    /// Components over (∂x, ∂y, ∂t).
    Coord { dx: f64, dy: f64, dt: f64 },
}

impl Tangent {
    /// Coordinate components of the vector at base point (z, t).
    pub fn coord_at(self, z: Complex64) -> (f64, f64, f64) {
        match self {
            Tangent::Coord { dx, dy, dt } => (dx, dy, dt),
            Tangent::Frame {
                kind: GroupKind::Heis,
                a,
                b,
                c,
            } => {
                let (x, y) = (z.re, z.im);
                (a, b, 2.0 * y * a - 2.0 * x * b + c)
            }
            Tangent::Frame {
                kind: GroupKind::Star,
                a,
                b,
                c,
            } => {
                let (x, y) = (z.re, z.im);
                // a𝐗 + b𝐘 + c𝐓 with 𝐗=(x,y,0), 𝐘=(−y,x,−2|z|²), 𝐓=(−y,x,0).
                (
                    a * x - b * y - c * y,
                    a * y + b * x + c * x,
                    -2.0 * (x * x + y * y) * b,
                )
            }
        }
    }

    /// A frame vector is horizontal iff its Reeb coefficient vanishes.
    pub fn is_horizontal_frame(self) -> bool {
        matches!(self, Tangent::Frame { c, .. } if c == 0.0)
    }
}

/// The 1-forms evaluated by [`eval_form`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// ω = dt + 2x dy − 2y dx
    Omega,
    /// ω* = ω/(2|z|²)
    OmegaStar,
    /// φ* = d(|z|²)/(2|z|²)
    PhiStar,
    /// ψ* = −dt/(2|z|²)
    PsiStar,
}

/// Evaluate a contact (co)frame form at (z, t) on the tangent `v`.
pub fn eval_form(form: FormKind, z: Complex64, t: f64, v: Tangent) -> Result<f64> {
    let _ = t;
    let (dx, dy, dt) = v.coord_at(z);
    let omega = dt + 2.0 * z.re * dy - 2.0 * z.im * dx;
    let n2 = z.norm_sqr();
    match form {
        FormKind::Omega => Ok(omega),
        FormKind::OmegaStar | FormKind::PhiStar | FormKind::PsiStar => {
            if z.norm() <= MIN_STAR_MODULUS {
                return Err(Error::DomainViolation(
                    "starred forms require a point of ℍ*".into(),
                ));
            }
            Ok(match form {
                FormKind::OmegaStar => omega / (2.0 * n2),
                FormKind::PhiStar => (z.re * dx + z.im * dy) / n2,
                FormKind::PsiStar => -dt / (2.0 * n2),
                FormKind::Omega => unreachable!(),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Matrix model and SU(1,1)×U(1)
// ---------------------------------------------------------------------------

/// 3×3 complex matrix in row-major order.
pub type Matrix3 = [[Complex64; 3]; 3];

/// Matrix model of ℍ*:
/// M(z,t) = [[|z|, 0, it/|z|], [0, z/|z|, 0], [0, 0, 1/|z|]].
///
/// M is a ⋆-homomorphism and satisfies M·J·M* = J for the anti-diagonal J.
/// The phase factor e^{i·arg z} is computed as z/|z| to avoid a trigonometric
/// round trip.
pub fn matrix_model(p: StarPoint) -> Matrix3 {
    let r = p.z.norm();
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::new(r, 0.0), zero, Complex64::new(0.0, p.t / r)],
        [zero, p.z / r, zero],
        [zero, zero, Complex64::new(1.0 / r, 0.0)],
    ]
}

/// The anti-diagonal involution J preserved by the matrix model.
pub fn matrix_j() -> Matrix3 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [[zero, zero, one], [zero, one, zero], [one, zero, zero]]
}

pub fn matrix_mul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn matrix_adjoint(a: &Matrix3) -> Matrix3 {
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[j][i].conj();
        }
    }
    out
}

/// Entrywise sup-norm distance of two matrices.
pub fn matrix_dist(a: &Matrix3, b: &Matrix3) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// Row-major serialization as 9 (re, im) pairs.
pub fn matrix_flatten(a: &Matrix3) -> Vec<(f64, f64)> {
    a.iter()
        .flat_map(|row| row.iter().map(|c| (c.re, c.im)))
        .collect()
}

/// JSON form of a matrix: a row-major list of 9 [re, im] pairs.
pub fn matrix_to_json(a: &Matrix3) -> serde_json::Value {
    serde_json::Value::Array(
        matrix_flatten(a)
            .into_iter()
            .map(|(re, im)| serde_json::json!([re, im]))
            .collect(),
    )
}

/// An element of SU(1,1)×U(1): the real matrix [[a, ib], [ic, d]] with
/// ad + bc = 1, together with the phase θ of the U(1) factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11Element {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub theta: f64,
}

impl Su11Element {
    const DET_TOL: f64 = 1e-12;

    pub fn new(a: f64, b: f64, c: f64, d: f64, theta: f64) -> Result<Self> {
        let defect = (a * d + b * c - 1.0).abs();
        if defect > Self::DET_TOL {
            return Err(Error::DeterminantViolation(defect));
        }
        Ok(Su11Element { a, b, c, d, theta })
    }

    pub fn identity() -> Self {
        Su11Element {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
            theta: 0.0,
        }
    }

    /// Group composition; matrix product on the SU(1,1) factor, addition on θ.
    pub fn compose(self, other: Su11Element) -> Su11Element {
        Su11Element {
            a: self.a * other.a - self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: -self.c * other.b + self.d * other.d,
            theta: self.theta + other.theta,
        }
    }

    /// Möbius action on ℒ: ζ ↦ (aζ + ib)/(icζ + d).
    pub fn moebius(self, zeta: Complex64) -> Result<Complex64> {
        let i = Complex64::i();
        let den = i * self.c * zeta + self.d;
        if den.norm() < 1e-300 {
            return Err(Error::SingularDenominator(den.norm()));
        }
        Ok((self.a * zeta + i * self.b) / den)
    }

    /// Holomorphic derivative of the Möbius action: 1/(icζ + d)².
    pub fn moebius_derivative(self, zeta: Complex64) -> Result<Complex64> {
        let i = Complex64::i();
        let den = i * self.c * zeta + self.d;
        if den.norm() < 1e-300 {
            return Err(Error::SingularDenominator(den.norm()));
        }
        Ok(1.0 / (den * den))
    }

    /// Action on ℍ*:
    /// (z,t) ↦ (z e^{iθ}/(icζ+d), Im((aζ+ib)/(icζ+d))) with ζ = −|z|²+it.
    pub fn act(self, p: StarPoint) -> Result<StarPoint> {
        let i = Complex64::i();
        let zeta = koranyi_alpha(p).zeta;
        let den = i * self.c * zeta + self.d;
        if den.norm() < 1e-300 {
            return Err(Error::SingularDenominator(den.norm()));
        }
        let f_i = p.z * Complex64::from_polar(1.0, self.theta) / den;
        let f_3 = ((self.a * zeta + i * self.b) / den).im;
        StarPoint::new(f_i, f_3)
    }
}

// ---------------------------------------------------------------------------
// Siegel-domain boundary
// ---------------------------------------------------------------------------

/// Embedding Ψ(z,t) = (−|z|² + it, √2·z) onto the boundary of the Siegel domain.
pub fn siegel_embed(z: Complex64, t: f64) -> (Complex64, Complex64) {
    (alpha_coord(z, t), std::f64::consts::SQRT_2 * z)
}

/// Defining function ρ(z₁, z₂) = 2Re(z₁) + |z₂|²; it vanishes on the image of Ψ.
pub fn siegel_rho(z1: Complex64, z2: Complex64) -> f64 {
    2.0 * z1.re + z2.norm_sqr()
}

/// Contact form ω′ = dy₁ + Im(z̄₂ dz₂) of the Siegel boundary, on the
/// ℂ²-tangent (v₁, v₂) at (z₁, z₂).
pub fn siegel_omega_prime(z2: Complex64, v1: Complex64, v2: Complex64) -> f64 {
    v1.im + (z2.conj() * v2).im
}

/// Rescaled contact form η* = ω′/|z₂|² of the truncated boundary.
pub fn siegel_eta_star(z2: Complex64, v1: Complex64, v2: Complex64) -> f64 {
    siegel_omega_prime(z2, v1, v2) / z2.norm_sqr()
}

/// |(Ψ*η*)(v) − ω*(v)| at p, with the pushforward Ψ_* v computed by finite
/// differences along the straight line through p in direction v.
pub fn siegel_pullback_residual(p: StarPoint, v: Tangent) -> Result<f64> {
    let (dx, dy, dt) = v.coord_at(p.z);
    let h = numerics::fd_step((p.z.norm_sqr() + p.t * p.t).sqrt());
    let curve1 = |s: f64| {
        let z = p.z + Complex64::new(dx * s, dy * s);
        siegel_embed(z, p.t + dt * s).0
    };
    let curve2 = |s: f64| {
        let z = p.z + Complex64::new(dx * s, dy * s);
        siegel_embed(z, p.t + dt * s).1
    };
    let v1 = central4(curve1, 0.0, h)?;
    let v2 = central4(curve2, 0.0, h)?;
    let (_, z2) = siegel_embed(p.z, p.t);
    let pulled = siegel_eta_star(z2, v1, v2);
    let direct = eval_form(FormKind::OmegaStar, p.z, p.t, v)?;
    Ok((pulled - direct).abs())
}

// ---------------------------------------------------------------------------
// Isometries and similarities of ℍ
// ---------------------------------------------------------------------------

/// The generators of Isom(d_ℍ) and of its similarity group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeisIsometry {
    /// Left translation L_{(w,s)}(p) = (w,s)·p.
    Translation { w: Complex64, s: f64 },
    /// Rotation R_θ(z,t) = (z e^{iθ}, t).
    Rotation { theta: f64 },
    /// Conjugation j(z,t) = (z̄, −t).
    Conjugation,
    /// Dilation D_δ(z,t) = (δz, δ²t), δ > 0.
    Dilation { delta: f64 },
    /// Inversion I(z,t) = (z/(−|z|²+it), −t/|−|z|²+it|²), defined away from the origin.
    Inversion,
}

impl HeisIsometry {
    pub fn apply(self, p: HeisPoint) -> Result<HeisPoint> {
        match self {
            HeisIsometry::Translation { w, s } => Ok(HeisPoint::new(w, s) * p),
            HeisIsometry::Rotation { theta } => Ok(HeisPoint {
                z: p.z * Complex64::from_polar(1.0, theta),
                t: p.t,
            }),
            HeisIsometry::Conjugation => Ok(HeisPoint {
                z: p.z.conj(),
                t: -p.t,
            }),
            HeisIsometry::Dilation { delta } => {
                if delta <= 0.0 {
                    return Err(Error::DomainViolation("dilation requires δ > 0".into()));
                }
                Ok(HeisPoint {
                    z: delta * p.z,
                    t: delta * delta * p.t,
                })
            }
            HeisIsometry::Inversion => {
                let g = p.gauge_complex();
                if g.norm() == 0.0 {
                    return Err(Error::DomainViolation(
                        "inversion is undefined at the origin".into(),
                    ));
                }
                Ok(HeisPoint {
                    z: p.z / g,
                    t: -p.t / g.norm_sqr(),
                })
            }
        }
    }
}
