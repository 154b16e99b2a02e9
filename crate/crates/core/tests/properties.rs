use std::f64::consts::PI;

use proptest::prelude::*;

use ttw_orbits::cli::table::Table;
use ttw_orbits::closedform::{
    chebyshev_t, chebyshev_t_binomial, AngularReduction, Branch, OrbitEquation, RadialReduction,
};
use ttw_orbits::dynamics::{hamiltonian, xk_value};
use ttw_orbits::k1::{cartesian_state_at, constants_cartesian_to_polar, CartesianConstants};
use ttw_orbits::types::{
    angular_bounds, check_boundedness, radial_bounds, sector_of, Rational, Verdict,
};
use ttw_orbits::SystemParams;

const KS: [(u32, u32); 7] = [(1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (1, 3), (3, 2)];

fn any_k() -> impl Strategy<Value = Rational> {
    (0..KS.len()).prop_map(|i| Rational::new(KS[i].0, KS[i].1).unwrap())
}

prop_compose! {
    /// Parameters with bounded constants `(E, A)`.
    fn bounded_case()(
        omega in 0.5f64..3.0,
        alpha in 0.05f64..4.0,
        beta in 0.05f64..4.0,
        k in any_k(),
        e in 2.0f64..80.0,
        a_frac in 0.0f64..1.0,
    ) -> Option<(SystemParams, f64, f64)> {
        let params = SystemParams::new(omega, alpha, beta, k).unwrap();
        let a = a_frac * e * e / (4.0 * omega * omega);
        (check_boundedness(&params, e, a).verdict == Verdict::Bounded).then_some((params, e, a))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bounded_intervals_are_ordered_and_satisfy_vieta(case in bounded_case()) {
        let Some((p, e, a)) = case else { return Ok(()) };
        let (r1, r2) = radial_bounds(e, a, p.omega).unwrap();
        prop_assert!(0.0 < r1 && r1 < r2);
        let (z1, z2) = angular_bounds(a, p.alpha, p.beta, p.k).unwrap();
        prop_assert!(0.0 < z1 && z1 < z2 && z2 < 1.0);
        let k2 = p.k2();
        let sum = (a - p.alpha * k2 + p.beta * k2) / a;
        let prod = p.beta * k2 / a;
        prop_assert!(((z1 + z2) - sum).abs() <= 1e-12 * sum.abs());
        prop_assert!((z1 * z2 - prod).abs() <= 1e-12 * prod);
    }

    #[test]
    fn verdict_is_symmetric_under_barrier_swap(
        omega in 0.0f64..3.0, alpha in 0.0f64..4.0, beta in 0.0f64..4.0,
        k in any_k(), e in 0.0f64..60.0, a in -5.0f64..200.0,
    ) {
        let p = SystemParams::new(omega, alpha, beta, k).unwrap();
        let q = SystemParams::new(omega, beta, alpha, k).unwrap();
        prop_assert_eq!(check_boundedness(&p, e, a).verdict, check_boundedness(&q, e, a).verdict);
    }

    #[test]
    fn sector_index_shifts_with_the_angle(k in any_k(), frac in 0.01f64..0.99, base in -6i64..6, j in -5i64..5) {
        let width = PI / (2.0 * k.value());
        let phi = (base as f64 + frac) * width;
        let s = sector_of(phi, k).unwrap();
        prop_assert_eq!(s, base);
        prop_assert_eq!(sector_of(phi + j as f64 * PI / k.value(), k).unwrap(), s + 2 * j);
    }

    #[test]
    fn radial_reduction_round_trips(case in bounded_case(), t in 0.0f64..1.0) {
        let Some((p, e, a)) = case else { return Ok(()) };
        let red = RadialReduction::new(e, a, p.omega).unwrap();
        let r = (red.r2_min + t * (red.r2_max - red.r2_min)).sqrt();
        let back = red.radius(red.reduce(r).unwrap());
        prop_assert!((back - r).abs() <= 1e-12 * r);
    }

    #[test]
    fn angular_reduction_round_trips(case in bounded_case(), t in 0.0f64..1.0, sector in -3i64..6) {
        let Some((p, _, a)) = case else { return Ok(()) };
        let red = AngularReduction::new(&p, a).unwrap();
        let z = red.z_min + t * (red.z_max - red.z_min);
        let phi = red.angle_in_sector(z, sector);
        prop_assert_eq!(sector_of(phi, p.k).unwrap(), sector);
        let u = red.reduce(phi).unwrap();
        prop_assert!((red.z_of(u) - z).abs() <= 1e-10);
    }

    #[test]
    fn phase_states_lie_on_the_orbit(case in bounded_case(), c in 0.0f64..PI, psi in 0.0f64..(2.0 * PI)) {
        let Some((p, e, a)) = case else { return Ok(()) };
        let eq = OrbitEquation::new(p, e, a, c, Branch::Plus).unwrap();
        let s = eq.phase_state(psi, 0, 0.0).unwrap();
        prop_assert!(eq.orbit_residual(s.r, s.phi).unwrap().abs() < 1e-7);
        prop_assert!((hamiltonian(&s, &p).unwrap() - e).abs() <= 1e-9 * e);
        prop_assert!((xk_value(&s, &p).unwrap() - a).abs() <= 1e-9 * a);
    }

    #[test]
    fn chebyshev_forms_agree(x in -1.0f64..=1.0, m in 1u32..9, n in 1u32..9) {
        let inner = chebyshev_t(n, x).unwrap();
        prop_assert!((chebyshev_t(m, inner).unwrap() - chebyshev_t(m * n, x).unwrap()).abs() < 1e-12);
        prop_assert!((chebyshev_t_binomial(m, x) - chebyshev_t(m, x).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn polar_map_reproduces_the_angular_integral(e1 in 7.0f64..14.3, s in 0.0f64..PI, t in 0.0f64..0.8) {
        let params = SystemParams::new(2.0, 3.0, 2.0, Rational::integer(1).unwrap()).unwrap();
        let cc = CartesianConstants::from_phase_difference(e1, 20.0 - e1, s, &params).unwrap();
        let map = constants_cartesian_to_polar(&cc, &params).unwrap();
        let st = cartesian_state_at(&cc, &params, t).unwrap();
        prop_assert!((xk_value(&st, &params).unwrap() - map.a).abs() <= 1e-9 * map.a);
        prop_assert!((hamiltonian(&st, &params).unwrap() - 20.0).abs() <= 1e-10 * 20.0);
        prop_assert!(map.c().is_some());
    }

    #[test]
    fn csv_tables_round_trip(v in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 1..50)) {
        let table = Table::new().float("v", v.clone());
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let back = Table::read_csv(buf.as_slice()).unwrap();
        let got = back.floats("v").unwrap();
        prop_assert_eq!(got.len(), v.len());
        for (a, b) in got.iter().zip(&v) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
