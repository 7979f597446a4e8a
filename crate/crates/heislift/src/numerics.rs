//! Finite-difference and quadrature kernels.
//!
//! Everything downstream (frame derivatives, Wirtinger derivatives, potential
//! integrals, curve lengths) is built on the three primitives in this module:
//!
//! * fourth-order central differences with step `h = max(1, scale)·ε^{1/5}`,
//! * Fornberg weights for differentiating sampled curves at their nodes,
//! * adaptive composite 5-point Gauss–Legendre quadrature.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values a finite-difference stencil can act on.
pub trait FdValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
    fn is_finite(self) -> bool;
}

impl FdValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl FdValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl FdValue for (Complex64, f64) {
    fn zero() -> Self {
        (Complex64::new(0.0, 0.0), 0.0)
    }
    fn add(self, other: Self) -> Self {
        (self.0 + other.0, self.1 + other.1)
    }
    fn scale(self, k: f64) -> Self {
        (self.0 * k, self.1 * k)
    }
    fn is_finite(self) -> bool {
        self.0.is_finite() && self.1.is_finite()
    }
}

/// Step size for fourth-order central differences: `max(1, scale)·ε^{1/5}`.
///
/// ε^{1/5} balances the O(h⁴) truncation error against the O(ε/h) rounding
/// error of the five-point stencil.
pub fn fd_step(scale: f64) -> f64 {
    scale.abs().max(1.0) * f64::EPSILON.powf(0.2)
}

/// First derivative by the fourth-order central stencil
/// `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / (12h)`.
pub fn central4<T, F>(f: F, x: f64, h: f64) -> Result<T>
where
    T: FdValue,
    F: Fn(f64) -> T,
{
    let fp2 = f(x + 2.0 * h);
    let fp1 = f(x + h);
    let fm1 = f(x - h);
    let fm2 = f(x - 2.0 * h);
    let d = fp2
        .scale(-1.0)
        .add(fp1.scale(8.0))
        .add(fm1.scale(-8.0))
        .add(fm2)
        .scale(1.0 / (12.0 * h));
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFiniteDerivative)
    }
}

/// Wirtinger derivatives (f_ζ, f_ζ̄) of a complex map of one complex variable,
/// by central differences in the ξ and η directions:
/// f_ζ = (f_ξ - i f_η)/2, f_ζ̄ = (f_ξ + i f_η)/2.
pub fn wirtinger_fd<F>(f: F, zeta: Complex64) -> Result<(Complex64, Complex64)>
where
    F: Fn(Complex64) -> Complex64,
{
    let h = fd_step(zeta.norm());
    let i = Complex64::i();
    let f_xi = central4(|x| f(Complex64::new(x, zeta.im)), zeta.re, h)?;
    let f_eta = central4(|y| f(Complex64::new(zeta.re, y)), zeta.im, h)?;
    Ok(((f_xi - i * f_eta) * 0.5, (f_xi + i * f_eta) * 0.5))
}

/// Fornberg weights for the `m`-th derivative at `x0` from the nodes `xs`.
///
/// Returns one weight per node; `sum_j w[j]·f(xs[j])` approximates
/// `f^(m)(x0)` to the order the node count allows. Handles arbitrary
/// (non-uniform, one-sided) stencils.
pub fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > m, "need more nodes than the derivative order");
    // c[k][j]: weight of node j for derivative order k, built up node by node.
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c[m].clone()
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_08,
];

/// Single 5-point Gauss–Legendre panel on [a, b].
pub fn gauss5<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Options for adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    /// Relative tolerance for panel acceptance (against max(1, |panel|)).
    pub tol: f64,
    /// Maximum bisection depth before giving up.
    pub max_depth: u32,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            tol: 1e-12,
            max_depth: 24,
        }
    }
}

/// Adaptive composite Gauss–Legendre integral of `f` over [a, b].
///
/// A panel is accepted when its bisected refinement agrees with it to the
/// requested tolerance; the refined value is kept (with the standard
/// Richardson end correction for the 10th-order panel rule).
pub fn adaptive_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, opts: QuadOpts) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gauss5(f, a, b);
    if !whole.is_finite() {
        return Err(Error::NonFiniteDerivative);
    }
    adaptive_rec(f, a, b, whole, opts.tol, opts.max_depth, 0)
}

fn adaptive_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    max_depth: u32,
    depth: u32,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = gauss5(f, a, mid);
    let right = gauss5(f, mid, b);
    let refined = left + right;
    if !refined.is_finite() {
        return Err(Error::NonFiniteDerivative);
    }
    let delta = refined - whole;
    if delta.abs() <= tol * refined.abs().max(1.0) {
        return Ok(refined + delta / 1023.0);
    }
    if depth >= max_depth {
        return Err(Error::QuadratureNonConvergence(depth));
    }
    let l = adaptive_rec(f, a, mid, left, tol * 0.5, max_depth, depth + 1)?;
    let r = adaptive_rec(f, mid, b, right, tol * 0.5, max_depth, depth + 1)?;
    Ok(l + r)
}

/// Integral over [a, b] of the polynomial interpolating the nodes
/// `(xs[j], ys[j])`.
///
/// The interpolant is evaluated in Newton form and integrated with a single
/// Gauss–Legendre panel, which is exact for the cubic stencils used on
/// sampled curves.
pub fn interpolant_integral(xs: &[f64], ys: &[f64], a: f64, b: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    // Divided differences in place.
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let p = |x: f64| {
        let mut acc = coef[n - 1];
        for i in (0..n - 1).rev() {
            acc = acc * (x - xs[i]) + coef[i];
        }
        acc
    };
    gauss5(&p, a, b)
}
