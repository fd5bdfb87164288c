mod common;

use qmarkov::equivalence::{self, decide_equivalence, distance_up_to_phase};
use qmarkov::linalg;
use qmarkov::{output, random, standard};

#[test]
fn constructed_pairs_are_recovered() {
    let mut rng = common::rng(41);
    for &(d, k) in &[(2, 2), (3, 2), (2, 3), (4, 2)] {
        for _ in 0..5 {
            let v = random::primitive_family(&mut rng, d, k, 0.05);
            let u = random::unitary(&mut rng, d);
            let phase = random::phase(&mut rng);
            let w = v.conjugated(&u, phase).unwrap();
            let r = decide_equivalence(&v, &w).unwrap();
            assert!(r.equivalent);
            assert!((r.c.unwrap() - phase).norm() < 1e-8);
            assert!(distance_up_to_phase(r.u.as_ref().unwrap(), &u) < 1e-8);
            assert!(r.reconstruction_residual.unwrap() < 1e-8);
        }
    }
}

#[test]
fn recovered_unitary_is_gauge_fixed() {
    let mut rng = common::rng(42);
    let v = random::primitive_family(&mut rng, 3, 2, 0.05);
    let u = random::unitary(&mut rng, 3);
    let r = decide_equivalence(&v, &v.conjugated(&u, linalg::ONE).unwrap()).unwrap();
    let uh = r.u.unwrap();
    assert!(uh[(0, 0)].im.abs() < 1e-14 && uh[(0, 0)].re > 0.0);
}

#[test]
fn independent_pairs_are_inequivalent_with_decaying_overlap() {
    let mut rng = common::rng(43);
    for _ in 0..10 {
        let v1 = random::primitive_family(&mut rng, 2, 2, 0.05);
        let v2 = random::primitive_family(&mut rng, 2, 2, 0.05);
        let r = decide_equivalence(&v1, &v2).unwrap();
        assert!(!r.equivalent);
        assert!(r.peripheral_modulus < 1.0);
        let p6 = output::output_cross_purity(&v1, &v2, 6).unwrap();
        let p12 = output::output_cross_purity(&v1, &v2, 12).unwrap();
        assert!(p12 < p6);
    }
}

#[test]
fn equivalent_families_have_identical_outputs() {
    let mut rng = common::rng(44);
    let v = random::primitive_family(&mut rng, 2, 2, 0.05);
    let w = v.conjugated(&random::unitary(&mut rng, 2), random::phase(&mut rng)).unwrap();
    let report = equivalence::finite_window_check(&v, &w, 6).unwrap();
    assert!(report.trace_distance < 1e-10);
}

#[test]
fn inequivalent_families_differ_within_the_window() {
    let mut rng = common::rng(45);
    let v = random::primitive_family(&mut rng, 2, 2, 0.05);
    let w = random::primitive_family(&mut rng, 2, 2, 0.05);
    let report = equivalence::finite_window_check(&v, &w, 4).unwrap();
    assert!(report.trace_distance > 1e-3);
    assert_eq!(report.theoretical_n0, equivalence::theoretical_window(2, report.independent_kraus));
}

#[test]
fn different_system_dimensions_are_inequivalent() {
    let mut rng = common::rng(46);
    let v2 = random::primitive_family(&mut rng, 2, 2, 0.05);
    let v3 = random::primitive_family(&mut rng, 3, 2, 0.05);
    assert!(!equivalence::dimension_witness(&v2, &v3));
    let r = decide_equivalence(&v2, &v3).unwrap();
    assert!(!r.equivalent);
    assert!(r.peripheral_modulus < 1.0);
}

#[test]
fn noise_dimension_mismatch_and_non_primitive_inputs_fail() {
    let q = standard::depolarizing(0.3);
    let mut rng = common::rng(47);
    let v = random::primitive_family(&mut rng, 2, 2, 0.05);
    assert_eq!(decide_equivalence(&q, &v).unwrap_err().name(), "NoiseDimMismatch");
    let ad = standard::amplitude_damping(0.4);
    assert_eq!(decide_equivalence(&ad, &v).unwrap_err().name(), "NotPrimitive");
}
