use proptest::prelude::*;

use ringcons::complex::pairing_gap;
use ringcons::consensus::{
    consensus_by_criterion, margin, max_real_nonstructural, omega_contains, omega_contains_parabola,
    system_spectrum, theorem_threshold,
};
use ringcons::roots::{default_tolerance, poly_roots};
use ringcons::sim::build_f;
use ringcons::spectra::{closed_form_spectrum, dense_char_poly, laplacian_spectrum, oracle_spectrum};
use ringcons::{ComplexValue, Network, Sign, Topology};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_matrix_oracle(m in 3usize..=20, negated in any::<bool>()) {
        let sign = if negated { Sign::Negated } else { Sign::Laplacian };
        let network = Network::new(Topology::Alternating, 2 * m).unwrap();
        let oracle = oracle_spectrum(&network, sign).unwrap();
        let closed = closed_form_spectrum(m, sign).unwrap();
        prop_assert!(pairing_gap(&oracle.eigenvalues, &closed.eigenvalues) <= 1e-8);
        prop_assert!(oracle.max_cassini_residual.unwrap() <= 1e-7);
    }

    #[test]
    fn circulant_matches_matrix_oracle(n in 3usize..=24) {
        let network = Network::new(Topology::Cyclic, n).unwrap();
        let oracle = oracle_spectrum(&network, Sign::Negated).unwrap();
        let closed = laplacian_spectrum(Topology::Cyclic, n, Sign::Negated).unwrap();
        prop_assert!(pairing_gap(&oracle.eigenvalues, &closed.eigenvalues) <= 1e-8);
    }

    #[test]
    fn spectra_are_conjugate_closed(m in 3usize..=64) {
        let ev = closed_form_spectrum(m, Sign::Negated).unwrap().eigenvalues;
        let conj: Vec<ComplexValue> = ev.iter().map(|z| z.conj()).collect();
        prop_assert!(pairing_gap(&ev, &conj) <= 1e-12);
    }

    #[test]
    fn root_and_parabola_tests_agree(gamma in 0.05f64..6.0, x in -10.0f64..10.0, y in -10.0f64..10.0) {
        let z = ComplexValue::new(x, y);
        prop_assume!((gamma * gamma * x + y * y).abs() > 1e-9);
        prop_assert_eq!(omega_contains(gamma, z), omega_contains_parabola(gamma, z));
    }

    #[test]
    fn criterion_agrees_with_closed_loop_spectrum(gamma in 0.5f64..2.5, m in 3usize..=40) {
        let lap = closed_form_spectrum(m, Sign::Laplacian).unwrap().eigenvalues;
        let crit = consensus_by_criterion(gamma, &lap).unwrap();
        let max_re = max_real_nonstructural(gamma, &lap).unwrap();
        prop_assert_eq!(crit, max_re < 0.0);
    }

    #[test]
    fn cyclic_closed_loop_matches_f_matrix(n in 3usize..=8, gamma in 0.3f64..3.0) {
        let network = Network::new(Topology::Cyclic, n).unwrap();
        let f = build_f(gamma, &network.laplacian()).unwrap();
        let p = dense_char_poly(&f).unwrap();
        let roots = poly_roots(&p, default_tolerance(p.degree())).unwrap();
        let lap = laplacian_spectrum(Topology::Cyclic, n, Sign::Laplacian).unwrap().eigenvalues;
        let sys = system_spectrum(gamma, &lap).unwrap();
        prop_assert!(pairing_gap(&roots, &sys) <= 1e-6);
    }
}

#[test]
fn theorem_is_sound_for_every_size() {
    for gamma in [0.93, 1.0, 1.5, 2.0, 5.0] {
        for m in 3..=64 {
            let lap = closed_form_spectrum(m, Sign::Laplacian).unwrap().eigenvalues;
            assert!(consensus_by_criterion(gamma, &lap).unwrap(), "γ={gamma} m={m}");
        }
    }
}

#[test]
fn margins_approach_threshold_from_below() {
    let margins: Vec<f64> = (10..=60)
        .step_by(10)
        .map(|n| margin(Topology::Alternating, n, 1e-7).unwrap().gamma_star)
        .collect();
    assert!(margins.windows(2).all(|w| w[0] < w[1]), "{margins:?}");
    assert!(margins.iter().all(|&g| g < theorem_threshold()));
    assert!(margins[5] >= 0.9230 - 5e-4);
}

#[test]
fn margin_brackets_the_sign_change() {
    for (topology, n) in [(Topology::Alternating, 24), (Topology::Cyclic, 10), (Topology::Cyclic, 3)] {
        let tol = 1e-6;
        let r = margin(topology, n, tol).unwrap();
        let lap = laplacian_spectrum(topology, n, Sign::Laplacian).unwrap().eigenvalues;
        assert!(max_real_nonstructural(r.gamma_star - tol, &lap).unwrap() >= 0.0);
        assert!(max_real_nonstructural(r.gamma_star + tol, &lap).unwrap() < 0.0);
        assert!(r.max_re_at_star.abs() <= 10.0 * r.bracket_width * r.local_slope.abs().max(1.0));
    }
}

#[test]
fn cyclic_margins_increase_toward_sqrt2() {
    let margins: Vec<f64> = (3..=64)
        .map(|n| margin(Topology::Cyclic, n, 1e-7).unwrap().gamma_star)
        .collect();
    assert!(margins.iter().all(|&g| g < 2f64.sqrt()));
    assert!(margins.windows(2).all(|w| w[0] <= w[1] + 1e-7), "{margins:?}");
}

#[test]
fn bidirectional_spectrum_is_real_and_converges_for_tiny_damping() {
    for n in [6, 20, 50] {
        let lap = laplacian_spectrum(Topology::Bidirectional, n, Sign::Laplacian).unwrap().eigenvalues;
        assert!(consensus_by_criterion(0.01, &lap).unwrap());
        assert!(margin(Topology::Bidirectional, n, 1e-6).unwrap().all_gamma);
    }
    for n in 3..=16 {
        let network = Network::new(Topology::Bidirectional, n).unwrap();
        let oracle = oracle_spectrum(&network, Sign::Laplacian).unwrap();
        assert!(oracle.eigenvalues.iter().all(|z| z.im.abs() <= 1e-8), "n={n}");
    }
}
