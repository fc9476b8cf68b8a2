use std::f64::consts::{FRAC_1_SQRT_2, PI};

use vkinetic::analytic::{analytic_field, analytic_field_within, analytic_u, bessel_j0, default_table, j0_zeros, GaussianInit, HankelTable};
use vkinetic::lattice::Grid;
use vkinetic::Error;

#[test]
fn default_table_zeros_are_valid() {
    let t = default_table();
    assert_eq!(t.len(), 4096);
    let z = t.zeros();
    assert!(z.windows(2).all(|w| w[1] > w[0]));
    assert!(z.iter().all(|&x| bessel_j0(x).abs() <= 1e-12));
    assert!((z[4095] - z[4094] - PI).abs() < 1e-3);
}

#[test]
fn zeros_agree_with_table() {
    let z = j0_zeros(50).unwrap();
    assert_eq!(&z[..], &default_table().zeros()[..50]);
}

#[test]
fn pulse_profile_examples() {
    let init = GaussianInit::default();
    assert!((analytic_u(init, FRAC_1_SQRT_2, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-6);
    assert!((analytic_u(init, FRAC_1_SQRT_2, 0.0, 1.0).unwrap() - (-2.0f64).exp()).abs() < 1e-6);
}

#[test]
fn pulse_decays_outside_the_light_cone() {
    let init = GaussianInit::default();
    let c = FRAC_1_SQRT_2;
    // At t = 0 the bound sits exactly on κe^{−9} ≈ 1.23e−4.
    let edge = analytic_u(init, c, 0.0, 3.0 / init.mu.sqrt()).unwrap();
    assert!((edge - (-9.0f64).exp()).abs() < 1e-12);
    for t in [0.25, 0.5, 1.0, 1.5, 2.0] {
        let r0 = c * t + 3.0 / init.mu.sqrt();
        for i in 0..20 {
            let r = r0 + (4.0 - r0) * i as f64 / 19.0;
            let u = analytic_u(init, c, t, r).unwrap();
            assert!(u.abs() <= 1e-4, "t={t} r={r} u={u}");
        }
    }
}

#[test]
fn outgoing_wave_with_central_dip() {
    let init = GaussianInit::default();
    let c = FRAC_1_SQRT_2;
    let centre = analytic_u(init, c, 2.0, 0.0).unwrap();
    assert!(centre < 0.0);
    let front = (0..80).map(|i| i as f64 * 0.05).max_by(|a, b| {
        analytic_u(init, c, 2.0, *a).unwrap().total_cmp(&analytic_u(init, c, 2.0, *b).unwrap())
    });
    assert!((front.unwrap() - 2.0 * c).abs() < 0.3, "{front:?}");
}

#[test]
fn fields_on_different_grids_share_radii() {
    let init = GaussianInit::default();
    // Steps 0.25 and 0.75: node (9, 9) of the first and (8, 8) of the second sit at (0.375, 0.375).
    let a = analytic_field_within(init, 0.7, 0.5, &Grid::with_nodes(2.0, 16).unwrap(), 2.0).unwrap();
    let b = analytic_field_within(init, 0.7, 0.5, &Grid::with_nodes(6.0, 16).unwrap(), 2.0).unwrap();
    assert_eq!(a.at(9, 9)[2], b.at(8, 8)[2]);
    assert_eq!(a.at(9, 9)[2], analytic_u(init, 0.7, 0.5, 0.375 * 2f64.sqrt()).unwrap());
    let t0 = analytic_field(init, 0.7, 0.0, &Grid::with_nodes(2.0, 32).unwrap()).unwrap();
    let g = t0.grid();
    for idx in 0..g.len() {
        let (i, j) = g.coords_of(idx);
        assert!((t0.at(i, j)[2] - init.pressure(g.radius(i, j))).abs() < 1e-6);
    }
}

#[test]
fn support_grows_for_large_grids() {
    // Corners of (−4, 4)² lie beyond X = 4.
    let init = GaussianInit::default();
    let f = analytic_field(init, 0.7, 0.0, &Grid::with_nodes(4.0, 16).unwrap()).unwrap();
    assert!((f.at(0, 0)[2] - init.pressure(f.grid().radius(0, 0))).abs() < 1e-6);
    let small = HankelTable::new(64, 1.0).unwrap();
    assert!(matches!(small.inverse(&[1.0], 2.0), Err(Error::DomainTruncation { .. })));
}
