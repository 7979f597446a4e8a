//! Property tests for the structural invariants: group axioms, metric
//! invariances, frame/coframe duality, derivative consistency, potential
//! exactness and lift coherence.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use heislift::catalog::{make_su11, make_twist, phase_difference_stdev, MapSpec, TwistProfile};
use heislift::contact::{beltrami, contact_residuals, ComposedStar, StarMap};
use heislift::curves::{
    horizontal_length_star, hyperbolic_length, lift_hyperbolic_curve, PlaneCurve, PlaneDomain,
};
use heislift::grid::standard_grid;
use heislift::group::{
    eval_form, koranyi_cygan_dist, FormKind, GroupKind, HeisIsometry, HeisPoint, StarPoint, Tangent,
};
use heislift::lifting::{lift_star, ComposedPlanar, LiftOpts, PlanarMap};
use heislift::numerics::wirtinger_fd;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const COORD: std::ops::Range<f64> = -3.0..3.0;

proptest! {
    #[test]
    fn heis_group_axioms(
        ax in COORD, ay in COORD, at in COORD,
        bx in COORD, by in COORD, bt in COORD,
        cx in COORD, cy in COORD, ct in COORD,
    ) {
        let p = HeisPoint::new(c(ax, ay), at);
        let q = HeisPoint::new(c(bx, by), bt);
        let r = HeisPoint::new(c(cx, cy), ct);
        let lhs = (p * q) * r;
        let rhs = p * (q * r);
        prop_assert!((lhs.z - rhs.z).norm() < 1e-12 && (lhs.t - rhs.t).abs() < 1e-12);
        let e = p * p.inverse();
        prop_assert!(e.z.norm() < 1e-12 && e.t.abs() < 1e-12);
        let id = HeisPoint::origin() * p;
        prop_assert_eq!(id, p);
    }

    #[test]
    fn cygan_distance_is_symmetric_and_left_invariant(
        px in COORD, py in COORD, pt in COORD,
        qx in COORD, qy in COORD, qt in COORD,
        wx in COORD, wy in COORD, wt in COORD,
    ) {
        let p = HeisPoint::new(c(px, py), pt);
        let q = HeisPoint::new(c(qx, qy), qt);
        let d = koranyi_cygan_dist(p, q);
        prop_assert!(d >= 0.0);
        prop_assert!((d - koranyi_cygan_dist(q, p)).abs() <= 1e-12 * (1.0 + d));
        let w = HeisPoint::new(c(wx, wy), wt);
        let dl = koranyi_cygan_dist(w * p, w * q);
        prop_assert!((dl - d).abs() <= 1e-10 * (1.0 + d));
    }

    #[test]
    fn wirtinger_fd_matches_polynomial(
        xi in -3.0..-0.2f64, eta in COORD,
        a in -2.0..2.0f64, b in -2.0..2.0f64,
    ) {
        // f(ζ) = a·ζ² + b·ζ·ζ̄: f_ζ = 2aζ + bζ̄, f_ζ̄ = bζ.
        let zeta = c(xi, eta);
        let (fz, fzb) =
            wirtinger_fd(|w| a * w * w + b * w * w.conj(), zeta).unwrap();
        prop_assert!((fz - (2.0 * a * zeta + b * zeta.conj())).norm() < 1e-8);
        prop_assert!((fzb - b * zeta).norm() < 1e-8);
    }

    #[test]
    fn coframe_duality_random_points(
        r in 0.2..3.0f64, phi in 0.0..std::f64::consts::TAU, t in COORD,
        a in COORD, b in COORD, cc in COORD,
    ) {
        let p = StarPoint::new(Complex64::from_polar(r, phi), t).unwrap();
        let v = Tangent::Frame { kind: GroupKind::Star, a, b, c: cc };
        let omega = eval_form(FormKind::OmegaStar, p.z, p.t, v).unwrap();
        let phi_v = eval_form(FormKind::PhiStar, p.z, p.t, v).unwrap();
        let psi_v = eval_form(FormKind::PsiStar, p.z, p.t, v).unwrap();
        prop_assert!((omega - cc).abs() < 1e-10 * (1.0 + cc.abs()));
        prop_assert!((phi_v - a).abs() < 1e-10 * (1.0 + a.abs()));
        prop_assert!((psi_v - b).abs() < 1e-10 * (1.0 + b.abs()));
    }

    #[test]
    fn dilation_scales_cygan_distance(
        px in COORD, py in COORD, pt in COORD,
        qx in COORD, qy in COORD, qt in COORD,
        delta in 0.2..4.0f64,
    ) {
        let p = HeisPoint::new(c(px, py), pt);
        let q = HeisPoint::new(c(qx, qy), qt);
        let dil = HeisIsometry::Dilation { delta };
        let d0 = koranyi_cygan_dist(p, q);
        let d1 = koranyi_cygan_dist(dil.apply(p).unwrap(), dil.apply(q).unwrap());
        prop_assert!((d1 - delta * d0).abs() <= 1e-10 * (1.0 + delta * d0));
    }
}

/// Length equality ℓ_{ℍ*}(γ) = ℓ_h(α∘γ) for random smooth horizontal curves.
#[test]
fn star_length_equals_hyperbolic_length_of_projection() {
    let mut rng = StdRng::seed_from_u64(101);
    for _ in 0..8 {
        let (a0, a1, b1, b2) = (
            rng.gen_range(1.2..2.5),
            rng.gen_range(-0.4..0.4),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.3..0.3),
        );
        let src = PlaneCurve::from_closures(
            0.0,
            1.0,
            48,
            PlaneDomain::LeftHalfPlane,
            move |s| c(-(a0 + a1 * (2.0 * s).sin()), b1 * (3.0 * s).cos() + b2 * s),
            move |s| {
                c(
                    -(2.0 * a1 * (2.0 * s).cos()),
                    -3.0 * b1 * (3.0 * s).sin() + b2,
                )
            },
        )
        .unwrap();
        let theta0 = rng.gen_range(0.0..std::f64::consts::TAU);
        let lift = lift_hyperbolic_curve(&src, theta0).unwrap();
        let l_star = horizontal_length_star(&lift).unwrap();
        let l_hyp = hyperbolic_length(&src).unwrap();
        assert!(
            (l_star - l_hyp).abs() <= 1e-8 * l_hyp.max(1e-6),
            "ℓ* = {l_star}, ℓ_h = {l_hyp}"
        );
    }
}

/// Lifting a composition agrees with composing lifts, up to one U(1) phase.
#[test]
fn lift_composition_coherence() {
    let su = make_su11(1.1, 0.3, -0.2, (1.0 - 0.3 * (-0.2)) / 1.1, 0.0).unwrap();
    let tw = make_twist(TwistProfile::Linear { k: 0.7 }, 0.0);
    let f1 = su.planar.clone().unwrap();
    let f2 = tw.planar.clone().unwrap();
    let composed: Arc<dyn PlanarMap> = Arc::new(ComposedPlanar {
        outer: f1.clone(),
        inner: f2.clone(),
    });
    let lift_12 = lift_star(composed, LiftOpts::default()).unwrap();
    let lift_1 = lift_star(f1, LiftOpts::default()).unwrap();
    let lift_2 = lift_star(f2, LiftOpts::default()).unwrap();
    let chained = ComposedStar {
        outer: lift_1,
        inner: lift_2,
    };
    let grid: Vec<StarPoint> = standard_grid().into_iter().step_by(7).collect();
    let sd = phase_difference_stdev(&lift_12, &chained, &grid);
    assert!(sd < 1e-7, "phase stdev {sd}");
    // and the moduli agree outright
    for p in &grid {
        let a = lift_12.f_i(p.z, p.t).norm();
        let b = chained.f_i(p.z, p.t).norm();
        assert!((a - b).abs() < 1e-8 * (1.0 + a));
    }
}

/// The lifted-map Beltrami coefficient pulls back from the source everywhere,
/// including for maps without analytic derivatives.
#[test]
fn lift_of_fd_only_map_still_verifies() {
    // a twist presented as a bare closure: derivatives via finite differences
    let k = 0.6;
    let raw: Arc<dyn PlanarMap> = Arc::new(heislift::lifting::FnPlanar {
        domain: PlaneDomain::LeftHalfPlane,
        f: move |zeta: Complex64| zeta * (k * heislift::group::arg_left(zeta)).exp(),
    });
    let lift = lift_star(raw, LiftOpts::default()).unwrap();
    let reference = make_twist(TwistProfile::Linear { k }, 0.0);
    let mu_expect = reference.expected_mu.unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..10 {
        let p = StarPoint::new(
            Complex64::from_polar(
                rng.gen_range(0.4..2.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            ),
            rng.gen_range(-1.5..1.5),
        )
        .unwrap();
        let res = contact_residuals(&lift, p.z, p.t, GroupKind::Star).unwrap();
        assert!(res.r1.norm() < 1e-4, "R1 {}", res.r1.norm());
        let zeta = heislift::group::alpha_coord(p.z, p.t);
        let mu = beltrami(&lift, p.z, p.t, GroupKind::Star).unwrap();
        assert!((mu - mu_expect(zeta)).norm() < 1e-4);
    }
}

/// Numeric lifts agree with the closed-form lifts up to one constant phase:
/// the oracle-agreement invariant, per family at its sharpest tolerance.
#[test]
fn numeric_lift_matches_closed_form_lift() {
    let grid = standard_grid();
    let families: Vec<(heislift::catalog::CatalogEntry, f64)> = vec![
        (
            make_su11(1.1, 0.4, 0.3, (1.0 - 0.4 * 0.3) / 1.1, 0.0).unwrap(),
            1e-7,
        ),
        (make_su11(1.3, -0.2, 0.0, 1.0 / 1.3, 0.5).unwrap(), 1e-7),
        (make_twist(TwistProfile::Linear { k: 2.0 }, 0.0), 1e-8),
        (make_twist(TwistProfile::Linear { k: 0.5 }, 0.3), 1e-8),
        (
            heislift::catalog::make_spiral_stretch(1.0, 1.0, 0.0).unwrap(),
            1e-6,
        ),
        (
            heislift::catalog::make_spiral_stretch(0.0, 1.0, 0.0).unwrap(),
            1e-6,
        ),
    ];
    for (entry, tol) in families {
        let numeric = entry.lift(LiftOpts::default()).unwrap();
        let closed = entry.closed_form_lift.as_ref().unwrap();
        let sup =
            heislift::catalog::sup_distance_after_phase_alignment(&numeric, closed.as_ref(), &grid);
        assert!(sup < tol, "{} sup distance {sup:e} ≥ {tol:e}", entry.name);
    }
}

/// The finite-difference gradient of the numeric potential matches both the
/// exact coefficient (ψ_ξ, ψ_η) = (2Re g, −2Im g) and the component system
/// ψ_ξ = v_ξ/(2u), ψ_η = v_η/(2u) − 1/(2ξ), at 100 random ζ per family.
#[test]
fn psi_gradient_invariant_over_catalog() {
    use heislift::lifting::{g_form, Potential};
    use heislift::numerics::{central4, fd_step};
    let mut rng = StdRng::seed_from_u64(606);
    let families = vec![
        make_su11(1.2, 0.3, 0.4, (1.0 - 0.3 * 0.4) / 1.2, 0.0)
            .unwrap()
            .planar
            .unwrap(),
        make_su11(0.8, -0.5, 0.0, 1.0 / 0.8, 0.0)
            .unwrap()
            .planar
            .unwrap(),
        make_twist(TwistProfile::Linear { k: 1.0 }, 0.0)
            .planar
            .unwrap(),
        heislift::catalog::make_spiral_stretch(1.0, 0.5, 0.0)
            .unwrap()
            .planar
            .unwrap(),
    ];
    for map in families {
        let pot = Potential::psi(map.clone(), c(-1.0, 0.0)).unwrap();
        for _ in 0..100 {
            let zeta = c(rng.gen_range(-3.0..-0.2), rng.gen_range(-2.0..2.0));
            let h = fd_step(zeta.norm());
            let px = central4(|x| pot.value(c(x, zeta.im)).unwrap(), zeta.re, h).unwrap();
            let py = central4(|y| pot.value(c(zeta.re, y)).unwrap(), zeta.im, h).unwrap();
            let g = g_form(map.as_ref(), zeta).unwrap();
            assert!((px - 2.0 * g.re).abs() < 1e-6, "ψ_ξ defect at {zeta}");
            assert!((py + 2.0 * g.im).abs() < 1e-6, "ψ_η defect at {zeta}");
            // componentwise system in terms of u = Re f, v = Im f
            let f = map.eval(zeta);
            let (fz, fzb) = map.wirtinger(zeta).unwrap();
            let v_xi = (fz + fzb).im;
            let v_eta = (Complex64::i() * (fz - fzb)).im;
            assert!((px - v_xi / (2.0 * f.re)).abs() < 1e-6);
            assert!((py - (v_eta / (2.0 * f.re) - 1.0 / (2.0 * zeta.re))).abs() < 1e-6);
        }
    }
}

/// Concurrent queries of one potential are safe and idempotent.
#[test]
fn potential_cache_is_concurrent() {
    let entry = make_twist(TwistProfile::Linear { k: 1.0 }, 0.0);
    let pot =
        Arc::new(heislift::lifting::Potential::psi(entry.planar.unwrap(), c(-1.0, 0.0)).unwrap());
    let zetas: Vec<Complex64> = (0..32)
        .map(|i| c(-1.0 - 0.1 * i as f64, 0.05 * i as f64))
        .collect();
    let baseline: Vec<f64> = zetas.iter().map(|z| pot.value(*z).unwrap()).collect();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let pot = pot.clone();
            let zetas = zetas.clone();
            std::thread::spawn(move || {
                zetas
                    .iter()
                    .map(|z| pot.value(*z).unwrap())
                    .collect::<Vec<f64>>()
            })
        })
        .collect();
    for h in handles {
        let got = h.join().unwrap();
        assert_eq!(got, baseline);
    }
}

/// K ≥ 1 always, and K = 1 exactly where μ vanishes (conformality).
#[test]
fn distortion_is_bounded_below_by_one() {
    use heislift::contact::distortion;
    let entry = make_twist(TwistProfile::Linear { k: 1.3 }, 0.0);
    let lift = entry.closed_form_lift.unwrap();
    let conformal = make_su11(1.2, 0.1, -0.3, (1.0 - 0.1 * (-0.3)) / 1.2, 0.2)
        .unwrap()
        .closed_form_lift
        .unwrap();
    for p in standard_grid().iter().step_by(11) {
        let d = distortion(lift.as_ref(), p.z, p.t, GroupKind::Star).unwrap();
        assert!(d.k >= 1.0);
        let mu = beltrami(lift.as_ref(), p.z, p.t, GroupKind::Star).unwrap();
        assert!(mu.norm() > 1e-3, "twist is genuinely non-conformal");
        let dc = distortion(conformal.as_ref(), p.z, p.t, GroupKind::Star).unwrap();
        assert!((dc.k - 1.0).abs() < 1e-9);
        let muc = beltrami(conformal.as_ref(), p.z, p.t, GroupKind::Star).unwrap();
        assert!(muc.norm() < 1e-9);
    }
}

/// The ℍ-lift fixes f_I along vertical lines exactly: ∂t f_I ≡ 0.
#[test]
fn heis_lift_preserves_vertical_lines_exactly() {
    let rot: Arc<dyn PlanarMap> = Arc::new(heislift::catalog::AffinePlanar {
        a: Complex64::from_polar(1.25f64.cosh(), 0.4),
        b: Complex64::from_polar(1.25f64.sinh(), -0.9),
        c: c(0.3, 0.1),
    });
    let lift = heislift::lifting::lift_heis(rot, c(0.0, 0.0), false).unwrap();
    for p in standard_grid().iter().step_by(29) {
        let partials = lift.partials(p.z, p.t).unwrap();
        assert_eq!(partials.fi_t, c(0.0, 0.0));
        // values along the fibre agree outright
        let a = lift.f_i(p.z, -2.0);
        let b = lift.f_i(p.z, 3.0);
        assert_eq!(a, b);
    }
}

/// Lift descriptors reload to maps that agree with the originals pointwise.
#[test]
fn descriptor_reload_reproduces_values() {
    let spec = MapSpec::Spiral {
        k: 1.0,
        kp: 1.0,
        c: 0.0,
    };
    let entry = spec.build().unwrap();
    let lift = entry.lift(LiftOpts::default()).unwrap();
    let descriptor = heislift::catalog::LiftDescriptor::for_star(spec, c(-1.0, 0.0), 0.0);
    let text = serde_json::to_string(&descriptor).unwrap();
    let reloaded: heislift::catalog::LiftDescriptor = serde_json::from_str(&text).unwrap();
    let rebuilt = reloaded.build(false).unwrap();
    let m = rebuilt.as_star_map();
    for p in standard_grid().iter().step_by(23) {
        assert!((lift.f_i(p.z, p.t) - m.f_i(p.z, p.t)).norm() < 1e-12);
        assert!((lift.f_3(p.z, p.t) - m.f_3(p.z, p.t)).abs() < 1e-12);
    }
}
