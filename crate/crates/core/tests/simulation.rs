use ringcons::consensus::max_real_nonstructural;
use ringcons::sim::simulate;
use ringcons::spectra::laplacian_spectrum;
use ringcons::{Error, Sign, SimConfig, Topology};

#[test]
fn identical_configs_give_identical_trajectories() {
    let mut cfg = SimConfig::new(Topology::Alternating, 10, 1.2);
    cfg.seed = 99;
    cfg.horizon = 20.0;
    let a = simulate(&cfg).unwrap();
    let b = simulate(&cfg).unwrap();
    assert_eq!(a, b);
    cfg.seed = 100;
    assert_ne!(simulate(&cfg).unwrap().states[0], a.states[0]);
}

#[test]
fn recorded_times_are_uniform() {
    let mut cfg = SimConfig::new(Topology::Cyclic, 5, 2.0);
    cfg.horizon = 10.0;
    cfg.record_stride = 7;
    let t = simulate(&cfg).unwrap();
    let spacing = 7.0 * cfg.dt;
    // The final step is always recorded; all earlier gaps are one stride.
    let n = t.times.len();
    for w in t.times[..n - 1].windows(2) {
        assert!((w[1] - w[0] - spacing).abs() < 1e-9);
    }
    assert!((t.times[n - 1] - 10.0).abs() < 1e-9);
    assert_eq!(t.states.len(), n);
    assert_eq!(t.disagreement.len(), n);
}

#[test]
fn consensus_value_settles() {
    let mut cfg = SimConfig::new(Topology::Alternating, 6, 2.0);
    cfg.seed = 5;
    cfg.horizon = 200.0;
    cfg.record_stride = 100;
    let t = simulate(&cfg).unwrap();
    let settled: Vec<&Vec<f64>> = t
        .states
        .iter()
        .zip(&t.disagreement)
        .filter(|(_, d)| **d < 1e-9)
        .map(|(s, _)| s)
        .collect();
    assert!(settled.len() > 10);
    let x0 = settled[0][0];
    for s in &settled {
        for i in 0..6 {
            assert!((s[2 * i] - x0).abs() < 1e-8);
            assert!(s[2 * i + 1].abs() < 1e-8);
        }
    }
}

#[test]
fn tail_decay_tracks_spectral_abscissa() {
    // Cyclic pursuit, n = 8, γ = 1.5: margin ≈ 1.31, so the network converges.
    let mut cfg = SimConfig::new(Topology::Cyclic, 8, 1.5);
    cfg.seed = 3;
    cfg.horizon = 400.0;
    cfg.record_stride = 50;
    let t = simulate(&cfg).unwrap();
    let lap = laplacian_spectrum(Topology::Cyclic, 8, Sign::Laplacian).unwrap().eigenvalues;
    let rate = max_real_nonstructural(1.5, &lap).unwrap();
    let slope = t.tail_decay_slope().unwrap();
    assert!(rate < 0.0);
    assert!((slope - rate).abs() <= 0.2 * rate.abs(), "slope {slope} vs rate {rate}");
}

#[test]
fn near_threshold_damping_still_converges() {
    let mut cfg = SimConfig::new(Topology::Alternating, 50, 0.95);
    cfg.seed = 42;
    cfg.horizon = 3000.0;
    cfg.record_stride = 100;
    let t = simulate(&cfg).unwrap();
    assert!(t.tail_decay_slope().unwrap() < 0.0);
    assert!(t.final_disagreement() < t.disagreement[0]);
}

#[test]
fn invalid_configs_are_rejected() {
    let cfg = SimConfig::new(Topology::Alternating, 7, 1.0);
    assert!(simulate(&cfg).unwrap_err().is_usage());
    let mut cfg = SimConfig::new(Topology::Cyclic, 5, 1.0);
    cfg.horizon = 1e6;
    cfg.dt = 0.01;
    assert!(matches!(simulate(&cfg), Err(Error::StepCap { .. })));
}
