use casimir_core::energy::{casimir_energy, logdet_one_minus, NumericsSpec, Truncation};
use casimir_core::pfa::{pfa_energy, PfaParams};
use casimir_core::roundtrip::assemble_block;
use casimir_core::{Plasma, PlaneSheet, SphereSheet};
use proptest::prelude::*;

fn setup(ws: f64, wp: f64, r: f64, l: f64) -> (SphereSheet, PlaneSheet) {
    (
        SphereSheet::new(r, Plasma::new(ws).unwrap()).unwrap(),
        PlaneSheet::new(Plasma::new(wp).unwrap(), l).unwrap(),
    )
}

#[test]
fn round_trip_spectrum_inside_unit_disk() {
    // 0 < det(I - M) < 1 block by block
    let numerics = NumericsSpec {
        l_max: Truncation::Fixed(20),
        ..NumericsSpec::default()
    };
    for (ws, wp) in [(0.5, 4.0), (f64::INFINITY, f64::INFINITY), (3.0, f64::INFINITY)] {
        let (s, p) = setup(ws, wp, 1.0, 1.25);
        for m in [0, 1, 4, 12] {
            for kappa in [0.05, 0.5, 2.0, 8.0] {
                let ld = logdet_one_minus(&assemble_block(m, kappa, &s, &p, &numerics).unwrap()).unwrap();
                assert!(ld < 0.0 && ld.is_finite(), "m={m} kappa={kappa}: {ld}");
            }
        }
    }
}

#[test]
fn tighter_tolerance_stays_within_error_estimate() {
    let (s, p) = setup(2.0, 2.0, 1.0, 1.3);
    let loose = casimir_energy(&s, &p, &NumericsSpec::default()).unwrap();
    let tight = casimir_energy(
        &s,
        &p,
        &NumericsSpec {
            rel_tol: 1e-7,
            ..NumericsSpec::default()
        },
    )
    .unwrap();
    let change = (loose.energy - tight.energy).abs();
    assert!(change <= 3.0 * loose.error_estimate, "{change:e} vs estimate {:e}", loose.error_estimate);
    assert!(change <= 1e-4 * tight.energy.abs());
    assert!(tight.l_max_used >= loose.l_max_used);
}

#[test]
fn approaches_pfa_at_small_gaps() {
    let omega = Plasma::Finite(5.0);
    let ratio = |gap: f64| {
        let s = SphereSheet::new(1.0, omega).unwrap();
        let p = PlaneSheet::new(omega, 1.0 + gap).unwrap();
        let exact = casimir_energy(&s, &p, &NumericsSpec::default()).unwrap().energy;
        exact / pfa_energy(&PfaParams::new(1.0, gap, omega, omega).unwrap()).unwrap()
    };
    let (far, near) = (ratio(0.4), ratio(0.1));
    assert!(near < 1.0 && far < near, "{far} {near}");
    assert!(1.0 - near < 0.25);
}

#[test]
fn energy_fields_consistent() {
    let (s, p) = setup(1.5, 0.7, 2.0, 2.6);
    let e = casimir_energy(&s, &p, &NumericsSpec::default()).unwrap();
    let d: f64 = 0.6;
    assert!((e.dimensionless - e.energy * d * d / 2.0).abs() <= 1e-14 * e.dimensionless.abs());
    assert!(e.error_estimate >= 0.0 && e.error_estimate < 1e-3 * e.energy.abs());
    assert!(e.m_max_used <= e.l_max_used);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]
    #[test]
    fn scale_invariance(lambda in 0.2f64..20.0, ws in 0.3f64..5.0, wp in 0.3f64..5.0, gap in 0.3f64..1.0) {
        let e = |k: f64| {
            let (s, p) = setup(ws / k, wp / k, k, k * (1.0 + gap));
            casimir_energy(&s, &p, &NumericsSpec::default()).unwrap()
        };
        let (a, b) = (e(1.0), e(lambda));
        prop_assert!((b.energy * lambda / a.energy - 1.0).abs() < 1e-6);
        prop_assert!((b.dimensionless / a.dimensionless - 1.0).abs() < 1e-6);
    }
}
