//! Cross-module checks through the public API: the Young integral against
//! the variance oracle, the projected noise tail, and a full sample-solve
//! round trip.

use fracheat::fbm::{sample_fbm_circulant, young_integral, CirculantSampler, HurstParam, TimeGrid};
use fracheat::noise::{
    mode_variance_oracle, sample_modes, stochastic_convolution, tail_diagnostic, ModeEnsemble,
    SamplerKind,
};
use fracheat::solver::{picard_solve, PicardOptions, ProblemSpec};
use fracheat::spectral::{synthesize, SpectralField};
use fracheat::stats;

fn hp(v: f64) -> HurstParam {
    HurstParam::new(v).unwrap()
}

#[test]
fn young_integral_variance_matches_oracle() {
    // Var[∫₀¹ e^{−(1−s)} db^H(s)] over Monte Carlo paths against the
    // double-integral oracle at λ = 1.
    let grid = TimeGrid::new(1.0, 512).unwrap();
    let h = hp(0.75);
    let sampler = CirculantSampler::new(h, grid).unwrap();
    let phi: Vec<f64> = grid.points().map(|s| (-(1.0 - s)).exp()).collect();
    let n_paths = 30_000;
    let samples: Vec<f64> = (0..n_paths as u64)
        .map(|seed| young_integral(&phi, &sampler.sample(seed)).unwrap())
        .collect();
    let got = stats::second_moment(&samples);
    let want = mode_variance_oracle(1.0, h, 1.0, 2000).unwrap();
    let se = want * (2.0 / n_paths as f64).sqrt();
    assert!(
        (got - want).abs() < 5.0 * se,
        "MC variance {got} vs oracle {want} (5se = {:.2e})",
        5.0 * se
    );
}

#[test]
fn young_integral_and_convolution_agree() {
    // Mode-1 coefficient of the convolution at T is exactly the Young
    // integral of φ(s) = e^{−λ(T−s)} against the driving path: both are
    // left-point sums over the same increments.
    let grid = TimeGrid::new(1.0, 64).unwrap();
    let h = hp(0.8);
    let ens = sample_modes(1, h, grid, 31, SamplerKind::Cholesky).unwrap();
    let z = stochastic_convolution(&ens);
    let phi: Vec<f64> = grid.points().map(|s| (-(1.0 - s)).exp()).collect();
    let via_young = young_integral(&phi, &ens.paths()[0]).unwrap();
    let got = z.field(grid.n_steps()).coeff(1);
    assert!(
        (got - via_young).abs() < 1e-12,
        "z {got} vs Young sum {via_young}"
    );
}

#[test]
fn tail_diagnostic_small_at_default_truncation() {
    let grid = TimeGrid::new(1.0, 256).unwrap();
    let d = tail_diagnostic(64, hp(0.75), grid, 77, SamplerKind::Circulant, 2.0, 512).unwrap();
    assert!(
        d < 0.05,
        "tail diagnostic {d} above the expected soft threshold"
    );
}

#[test]
fn sample_solve_round_trip() {
    // End-to-end through the public API only: sample noise, convolve,
    // solve, and land inside the ball with a consistent trace, across the
    // admissible Hurst range.
    let grid = TimeGrid::new(1.0, 256).unwrap();
    let m = 1024;
    let n_modes = 32;
    let u0 = synthesize(&SpectralField::basis(1, 1), m)
        .unwrap()
        .scale(0.1);
    for &hv in &[0.6, 0.75, 0.9] {
        let h = hp(hv);
        let spec = ProblemSpec::new(h, 2.0, 1.0, 2.0, 1.0, u0.clone()).unwrap();
        for seed in [3u64, 1905, 0xF00D] {
            let ens = sample_modes(n_modes, h, grid, seed, SamplerKind::Circulant).unwrap();
            let z = stochastic_convolution(&ens);
            let (sol, trace) = picard_solve(&spec, &z, &PicardOptions::default()).unwrap();
            assert!(trace.converged, "H = {hv}, seed {seed}");
            assert!(trace.t0 > 0.0 && trace.t0 <= 1.0);
            assert!(trace.c_tilde_t0 <= 1.0 + 1e-12);
            assert!(trace.cond2 >= 0.0 && trace.cond1 >= 0.0);
            let sup = sol.sup_lp_norm(spec.p).unwrap();
            assert!(
                sup <= 3.0 * trace.k0 * 1.02 + 1e-12,
                "H = {hv}, seed {seed}: sup {sup} vs K0 {}",
                trace.k0
            );
            assert_eq!(sol.times.len(), sol.states.len());
            assert!((sol.times[0], sol.times[sol.times.len() - 1]) == (0.0, trace.t0));
        }
    }
}

#[test]
fn zero_noise_ensemble_through_solver() {
    let h = hp(0.75);
    let grid = TimeGrid::new(1.0, 64).unwrap();
    let m = 256;
    let u0 = synthesize(&SpectralField::basis(1, 1), m)
        .unwrap()
        .scale(0.05);
    let spec = ProblemSpec::new(h, 2.0, 1.0, 2.0, 1.0, u0).unwrap();
    let z = stochastic_convolution(&ModeEnsemble::zero(8, h, grid));
    let (sol, trace) = picard_solve(&spec, &z, &PicardOptions::default()).unwrap();
    assert!(trace.converged);
    // With no noise, K0 = ‖u0‖_2 = 0.05 and the solution stays near the
    // decaying deterministic branch.
    assert!((trace.k0 - 0.05).abs() < 1e-6);
    assert!(
        trace.hit_horizon,
        "C̃(T) = 24 K0² < 1 keeps the full horizon"
    );
    let final_norm = fracheat::spectral::lp_norm(sol.states.last().unwrap(), 2.0).unwrap();
    assert!(final_norm < 0.05);
}

#[test]
fn circulant_sampler_one_shot_matches_struct() {
    let grid = TimeGrid::new(1.0, 32).unwrap();
    let h = hp(0.6);
    let a = sample_fbm_circulant(h, grid, 5).unwrap();
    let b = CirculantSampler::new(h, grid).unwrap().sample(5);
    assert_eq!(a.values(), b.values());
}
