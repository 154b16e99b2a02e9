use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ttw_orbits::analysis::{measure_closure_with, ClosureOptions};
use ttw_orbits::closedform::{fit_delta1, r2_of_t};
use ttw_orbits::dynamics::{eom, hamiltonian, integrate, propagate, IntegratorConfig};
use ttw_orbits::presets::{orbit_preset, parameter_sets, FIGURE_IDS};
use ttw_orbits::PhaseState;

fn start(id: &str) -> (ttw_orbits::presets::OrbitPreset, PhaseState) {
    let p = orbit_preset(id).unwrap();
    let s0 = p.equation().unwrap().phase_state(0.7, 0, 0.0).unwrap();
    (p, s0)
}

#[test]
fn reversing_momenta_retraces_the_orbit() {
    for p in parameter_sets() {
        let (_, s0) = start(&p.id);
        let t = p.params.radial_period();
        let cfg = IntegratorConfig::default();
        let s1 = propagate(&s0, &p.params, t, &cfg).unwrap();
        let back = PhaseState::new(0.0, s1.r, s1.phi, -s1.p_r, -s1.p_phi);
        let s2 = propagate(&back, &p.params, t, &cfg).unwrap();
        let end = PhaseState::new(0.0, s2.r, s2.phi, -s2.p_r, -s2.p_phi);
        let mut s0 = s0;
        s0.t = 0.0;
        assert!(
            end.distance(&s0) < 1e-8,
            "k={} distance {}",
            p.params.k,
            end.distance(&s0)
        );
    }
}

#[test]
fn equations_of_motion_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sets = parameter_sets();
    for _ in 0..100 {
        let p = &sets[rng.gen_range(0..sets.len())].params;
        let width = PI / (2.0 * p.k());
        let s = PhaseState::new(
            0.0,
            rng.gen_range(0.5..3.0),
            width * rng.gen_range(0.1..0.9),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let d = eom(&s, p).unwrap();
        let h = |f: &dyn Fn(&mut PhaseState, f64), x: f64, step: f64| {
            let (mut a, mut b) = (s, s);
            f(&mut a, x + step);
            f(&mut b, x - step);
            (hamiltonian(&a, p).unwrap() - hamiltonian(&b, p).unwrap()) / (2.0 * step)
        };
        let checks = [
            (h(&|q, v| q.p_r = v, s.p_r, 1e-6), d.dr),
            (h(&|q, v| q.p_phi = v, s.p_phi, 1e-6), d.dphi),
            (-h(&|q, v| q.r = v, s.r, 1e-7), d.dp_r),
            (-h(&|q, v| q.phi = v, s.phi, 1e-8), d.dp_phi),
        ];
        for (fd, an) in checks {
            assert!(
                (fd - an).abs() <= 1e-6 * an.abs().max(1.0),
                "fd {fd} analytic {an} at {s:?}"
            );
        }
    }
}

#[test]
fn radius_follows_the_time_law_for_every_k() {
    for p in parameter_sets() {
        let (_, s0) = start(&p.id);
        let delta = fit_delta1(&s0, p.energy, p.a, p.params.omega).unwrap();
        let traj = integrate(
            &s0,
            &p.params,
            3.0 * p.params.radial_period(),
            &IntegratorConfig::default(),
        )
        .unwrap();
        for s in &traj.samples {
            let want = r2_of_t(p.energy, p.a, p.params.omega, delta, s.t);
            assert!(
                ((s.r * s.r - want) / want).abs() < 1e-7,
                "k={} t={}",
                p.params.k,
                s.t
            );
        }
    }
}

/// The state recurs after `n` radial periods for `k = m/n`.
#[test]
fn full_state_recurs_after_n_radial_periods() {
    for id in FIGURE_IDS.iter().filter(|id| **id != "fig1") {
        let (p, s0) = start(id);
        let n = p.params.k.denom() as f64;
        let offset = n * p.params.radial_period();
        let traj = integrate(
            &s0,
            &p.params,
            offset + 1.5 * p.params.radial_period(),
            &IntegratorConfig::default(),
        )
        .unwrap();
        let rep = measure_closure_with(
            &traj,
            &ClosureOptions {
                offset: Some(offset),
                ..ClosureOptions::default()
            },
        )
        .unwrap();
        assert!(rep.closure_gap < 1e-6, "{id}: gap {}", rep.closure_gap);
        assert!(
            (rep.radial_period_estimate - p.params.radial_period()).abs() < 1e-6,
            "{id}: {}",
            rep.radial_period_estimate
        );
    }
}

#[test]
fn symplectic_and_adaptive_runs_agree() {
    let (p, s0) = start("fig4");
    let t = p.params.radial_period();
    let a = propagate(&s0, &p.params, t, &IntegratorConfig::default()).unwrap();
    let traj = integrate(&s0, &p.params, t, &IntegratorConfig::symplectic(t / 4000.0)).unwrap();
    let b = traj.samples.last().unwrap();
    assert!((b.t - t).abs() < 1e-12);
    assert!(a.distance(b) < 1e-6, "{}", a.distance(b));
    let (dh, _) = traj.max_relative_drift();
    assert!(dh < 1e-8, "{dh}");
}
