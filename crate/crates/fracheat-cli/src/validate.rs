//! Desk-scale validation suites, one per subsystem, runnable from the CLI.
//!
//! Each check pins an identity, law, or inequality to a deterministic seed
//! and a tolerance. Statistical checks use 5-standard-error bands (or the
//! stated test level), so a healthy build fails any individual check with
//! probability well under 1e-5.

use std::f64::consts::PI;

use rand::Rng;

use fracheat::fbm::{
    c_h_constant, fbm_covariance, kernel_kh, kernel_product_integral, sample_fbm_cholesky,
    transfer_indicator, CholeskySampler, CirculantSampler, HurstParam, TimeGrid,
};
use fracheat::noise::{
    mode_variance_oracle, sample_modes, stochastic_convolution, ModeEnsemble, SamplerKind,
};
use fracheat::rng::{derive_rng, DOMAIN_FIELD};
use fracheat::solver::{
    apply_g, check_h1, check_hypotheses, compute_c_tilde, compute_k0, compute_t0,
    compute_t0_bisection, contraction_probe, nonlinearity_apply, picard_solve, InitialIterate,
    PicardOptions, ProblemSpec, Trajectory,
};
use fracheat::spectral::{
    analyze, eigenfunction, eigenvalue, lp_norm, random_field, semigroup_apply, smoothing_check,
    synthesize, GridFunction, SpectralField,
};
use fracheat::stats;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fbm,
    Kernel,
    Semigroup,
    Convolution,
    Solver,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fbm" => Ok(Suite::Fbm),
            "kernel" => Ok(Suite::Kernel),
            "semigroup" => Ok(Suite::Semigroup),
            "convolution" => Ok(Suite::Convolution),
            "solver" => Ok(Suite::Solver),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite `{other}` (expected fbm|kernel|semigroup|convolution|solver|all)"
            )),
        }
    }
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn hp(v: f64) -> HurstParam {
    HurstParam::new(v).unwrap()
}

pub fn run_suites(suite: Suite, seed: u64) -> Vec<SuiteReport> {
    match suite {
        Suite::Fbm => vec![fbm_suite(seed)],
        Suite::Kernel => vec![kernel_suite()],
        Suite::Semigroup => vec![semigroup_suite(seed)],
        Suite::Convolution => vec![convolution_suite(seed)],
        Suite::Solver => vec![solver_suite(seed)],
        Suite::All => vec![
            fbm_suite(seed),
            kernel_suite(),
            semigroup_suite(seed),
            convolution_suite(seed),
            solver_suite(seed),
        ],
    }
}

pub fn fbm_suite(seed: u64) -> SuiteReport {
    let mut checks = Vec::new();

    // Analytic covariance identities across the Hurst range.
    let mut worst = 0.0f64;
    for &hv in &[0.6, 0.75, 0.9] {
        let h = hp(hv);
        for i in 1..=6 {
            for j in 1..=6 {
                let (s, t) = (i as f64 * 0.3, j as f64 * 0.3);
                let r = fbm_covariance(h, s, t).unwrap();
                let sym = (r - fbm_covariance(h, t, s).unwrap()).abs();
                let diag = (fbm_covariance(h, t, t).unwrap() - t.powf(h.two_h())).abs();
                let scale = 1.7f64;
                let ss = (fbm_covariance(h, scale * s, scale * t).unwrap()
                    - scale.powf(h.two_h()) * r)
                    .abs();
                let incr = (fbm_covariance(h, t, t).unwrap() + fbm_covariance(h, s, s).unwrap()
                    - 2.0 * r
                    - (t - s).abs().powf(h.two_h()))
                .abs();
                worst = worst
                    .max(sym)
                    .max(diag)
                    .max(ss / r.abs().max(1.0))
                    .max(incr);
            }
        }
    }
    checks.push(check(
        "covariance identities (symmetry, diagonal, self-similarity, stationary increments)",
        worst < 1e-12,
        format!("worst deviation {worst:.3e}"),
    ));

    let ch = c_h_constant(hp(0.5001));
    checks.push(check(
        "c_H vanishes toward H = 1/2",
        ch < 0.05,
        format!("c_H(0.5001) = {ch:.3e}"),
    ));

    // Determinism for both samplers.
    let grid = TimeGrid::new(1.0, 32).unwrap();
    let mut det = true;
    for &hv in &[0.6, 0.75, 0.9] {
        let chol = CholeskySampler::new(hp(hv), grid).unwrap();
        let circ = CirculantSampler::new(hp(hv), grid).unwrap();
        det &= chol.sample(seed).values() == chol.sample(seed).values();
        det &= circ.sample(seed).values() == circ.sample(seed).values();
    }
    checks.push(check(
        "sampler determinism",
        det,
        "identical seeds give identical paths",
    ));

    // Near-Brownian increment variance, pooled across a 10^4-path sweep.
    let h_bm = hp(0.500001);
    let grid8 = TimeGrid::new(1.0, 8).unwrap();
    let chol = CholeskySampler::new(h_bm, grid8).unwrap();
    let mut incs = Vec::with_capacity(8 * 10_000);
    for s in 0..10_000u64 {
        let p = chol.sample(s.wrapping_add(seed));
        for k in 0..8 {
            incs.push(p.increment(k));
        }
    }
    let v = stats::second_moment(&incs);
    let dt = grid8.dt();
    let se = dt * (2.0 / incs.len() as f64).sqrt();
    checks.push(check(
        "Brownian-limit increment variance",
        (v - dt).abs() < 5.0 * se,
        format!("var {v:.6e} vs dt {dt:.6e} (5se = {:.2e})", 5.0 * se),
    ));

    // Monte Carlo covariance against the formula, per Hurst value.
    let grid64 = TimeGrid::new(1.0, 64).unwrap();
    let n_paths = 20_000;
    for &hv in &[0.6, 0.75, 0.9] {
        let h = hp(hv);
        let sampler = CholeskySampler::new(h, grid64).unwrap();
        let (i, j) = (16, 48);
        let mut xs = Vec::with_capacity(n_paths);
        let mut ys = Vec::with_capacity(n_paths);
        for s in 0..n_paths as u64 {
            let p = sampler.sample(s.wrapping_add(seed));
            xs.push(p.values()[i]);
            ys.push(p.values()[j]);
        }
        let want = fbm_covariance(h, grid64.point(i), grid64.point(j)).unwrap();
        let got = stats::cross_moment(&xs, &ys);
        let vx = fbm_covariance(h, grid64.point(i), grid64.point(i)).unwrap();
        let vy = fbm_covariance(h, grid64.point(j), grid64.point(j)).unwrap();
        let se = stats::cov_standard_error(vx, vy, want, n_paths);
        checks.push(check(
            format!("sample covariance matches formula (H = {hv})"),
            (got - want).abs() < 5.0 * se,
            format!("cov {got:.5} vs {want:.5} (5se = {:.2e})", 5.0 * se),
        ));
    }

    // Cross-sampler agreement in distribution at the terminal time.
    let n_ks = 8_000;
    let h = hp(0.75);
    let chol = CholeskySampler::new(h, grid64).unwrap();
    let circ = CirculantSampler::new(h, grid64).unwrap();
    let a: Vec<f64> = (0..n_ks as u64)
        .map(|s| chol.sample(s.wrapping_add(seed)).terminal())
        .collect();
    let b: Vec<f64> = (0..n_ks as u64)
        .map(|s| circ.sample(s.wrapping_add(seed)).terminal())
        .collect();
    let d = stats::ks_statistic(&a, &b);
    let thr = stats::ks_threshold(n_ks, n_ks, 0.001);
    checks.push(check(
        "Cholesky vs circulant terminal KS (level 0.001)",
        d < thr,
        format!("D = {d:.4} vs threshold {thr:.4}"),
    ));

    // Young integral: telescoping and zero integrand.
    let path = sample_fbm_cholesky(h, grid64, seed).unwrap();
    let ones = vec![1.0; grid64.n_points()];
    let zeros = vec![0.0; grid64.n_points()];
    let tele = (fracheat::fbm::young_integral(&ones, &path).unwrap() - path.terminal()).abs();
    let zero = fracheat::fbm::young_integral(&zeros, &path).unwrap();
    checks.push(check(
        "Young integral telescoping",
        tele < 1e-13 && zero == 0.0,
        format!("|Σ db − b(T)| = {tele:.2e}"),
    ));

    SuiteReport {
        suite: "fbm".into(),
        checks,
    }
}

pub fn kernel_suite() -> SuiteReport {
    let mut checks = Vec::new();

    for &hv in &[0.6, 0.75] {
        let h = hp(hv);
        // Transfer-operator isometry on indicators.
        let mut worst = 0.0f64;
        for &t in &[0.25, 0.5, 1.0] {
            let lhs = kernel_product_integral(h, t, t, 10_000).unwrap();
            let rhs = t.powf(h.two_h());
            worst = worst.max((lhs - rhs).abs());
        }
        checks.push(check(
            format!("transfer isometry ∫K_H(t,s)² ds = t^2H (H = {hv})"),
            worst < 1e-3,
            format!("worst |lhs − rhs| = {worst:.2e}"),
        ));
    }

    // Representation identity on a 3x3 grid at H = 0.75.
    let h = hp(0.75);
    let mut worst = 0.0f64;
    for i in 1..=3 {
        for j in 1..=3 {
            let (s, t) = (i as f64 / 3.0, j as f64 / 3.0);
            let lhs = kernel_product_integral(h, t, s, 10_000).unwrap();
            let rhs = fbm_covariance(h, s, t).unwrap();
            worst = worst.max((lhs - rhs).abs());
        }
    }
    checks.push(check(
        "kernel factorization reproduces the covariance",
        worst < 1e-3,
        format!("worst |∫K K − R| = {worst:.2e}"),
    ));

    // Positivity and decay toward the diagonal.
    let mut positive = true;
    for &(t, s) in &[(1.0, 0.1), (1.0, 0.5), (1.0, 0.9), (0.5, 0.25)] {
        positive &= kernel_kh(h, t, s, 4000).unwrap() > 0.0;
    }
    let near = kernel_kh(h, 1.0, 1.0 - 1e-6, 10_000).unwrap();
    checks.push(check(
        "kernel positive, vanishing at the diagonal",
        positive && near < 0.05,
        format!("K(1, 1−1e−6) = {near:.3e}"),
    ));

    // Indicator support of the transfer operator.
    let zero = transfer_indicator(h, 0.5, 0.7).unwrap();
    checks.push(check(
        "transfer operator respects the indicator",
        zero == 0.0,
        "K*1_[0,t](s) = 0 for s > t",
    ));

    SuiteReport {
        suite: "kernel".into(),
        checks,
    }
}

pub fn semigroup_suite(seed: u64) -> SuiteReport {
    let mut checks = Vec::new();

    let lam_ok = eigenvalue(1) == 1.0 && eigenvalue(3) == 9.0;
    let e1 = eigenfunction(1, PI / 2.0).unwrap();
    checks.push(check(
        "Dirichlet eigenpairs",
        lam_ok && (e1 - (2.0 / PI).sqrt()).abs() < 1e-15,
        format!("λ1 = 1, λ3 = 9, e1(π/2) = {e1:.6}"),
    ));

    // Semigroup law on random fields.
    let mut rng = derive_rng(seed, DOMAIN_FIELD, 100, 0);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let coeffs: Vec<f64> = (0..8)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let u = SpectralField::new(coeffs);
        let (s, t) = (0.13, 0.29);
        let a = semigroup_apply(&semigroup_apply(&u, s).unwrap(), t).unwrap();
        let b = semigroup_apply(&u, s + t).unwrap();
        for n in 1..=8 {
            let denom = b.coeff(n).abs().max(1e-300);
            worst = worst.max((a.coeff(n) - b.coeff(n)).abs() / denom);
        }
    }
    checks.push(check(
        "semigroup law S(s)S(t) = S(s+t)",
        worst < 1e-13,
        format!("worst relative deviation {worst:.2e}"),
    ));

    // Round trip synthesize/analyze.
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let coeffs: Vec<f64> = (0..16)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let u = SpectralField::new(coeffs);
        let back = analyze(&synthesize(&u, 64).unwrap(), 16).unwrap();
        for n in 1..=16 {
            worst = worst.max((back.coeff(n) - u.coeff(n)).abs());
        }
    }
    checks.push(check(
        "synthesis/analysis round trip",
        worst < 1e-10,
        format!("worst coefficient deviation {worst:.2e}"),
    ));

    // L^p quadrature: orthonormality and the quartic closed form.
    let e1g = synthesize(&SpectralField::basis(1, 1), 4096).unwrap();
    let n2 = lp_norm(&e1g, 2.0).unwrap();
    let m = 4096;
    let mut sin_vals: Vec<f64> = (0..=m).map(|j| (j as f64 * PI / m as f64).sin()).collect();
    sin_vals[0] = 0.0;
    sin_vals[m] = 0.0;
    let sin_g = GridFunction::new(sin_vals).unwrap();
    let n4 = lp_norm(&sin_g, 4.0).unwrap();
    let want4 = (3.0 * PI / 8.0).powf(0.25);
    checks.push(check(
        "L^p quadrature (‖e1‖2 = 1, ‖sin‖4 closed form)",
        (n2 - 1.0).abs() < 1e-6 && (n4 - want4).abs() < 1e-5,
        format!("‖e1‖2 = {n2:.8}, ‖sin‖4 = {n4:.8} vs {want4:.8}"),
    ));

    // Smoothing estimate sweep: 20 random fields x 8 parameter combos.
    let mut violations = 0usize;
    let mut worst_ratio = 0.0f64;
    for _ in 0..20 {
        let u = random_field(32, 1024, 1.0, &mut rng).unwrap();
        for &r in &[2.0, 4.0] {
            for &p in &[4.0, 6.0] {
                for &t in &[0.05, 0.5] {
                    let rep = smoothing_check(&u, t, r, p).unwrap();
                    worst_ratio = worst_ratio.max(rep.ratio);
                    if !rep.satisfied {
                        violations += 1;
                    }
                }
            }
        }
    }
    checks.push(check(
        "smoothing estimate sweep (20 fields × 8 combos)",
        violations == 0,
        format!("{violations} violations, worst lhs/rhs = {worst_ratio:.4}"),
    ));

    SuiteReport {
        suite: "semigroup".into(),
        checks,
    }
}

pub fn convolution_suite(seed: u64) -> SuiteReport {
    let mut checks = Vec::new();
    let h = hp(0.75);

    // Zero noise in, zero convolution out.
    let grid = TimeGrid::new(1.0, 64).unwrap();
    let z0 = stochastic_convolution(&ModeEnsemble::zero(8, h, grid));
    checks.push(check(
        "zero-noise convolution is zero",
        z0.sup_lp_norm(2.0, 64).unwrap() == 0.0,
        "z ≡ 0",
    ));

    // Single-mode variance against the double-integral oracle.
    let grid256 = TimeGrid::new(1.0, 256).unwrap();
    let n_paths = 20_000;
    let samples: Vec<f64> = (0..n_paths as u64)
        .map(|s| {
            let ens =
                sample_modes(1, h, grid256, s.wrapping_add(seed), SamplerKind::Circulant).unwrap();
            stochastic_convolution(&ens)
                .field(grid256.n_steps())
                .coeff(1)
        })
        .collect();
    let got = stats::second_moment(&samples);
    let want = mode_variance_oracle(1.0, h, 1.0, 2000).unwrap();
    let se = want * (2.0 / n_paths as f64).sqrt();
    checks.push(check(
        "mode-1 variance vs quadrature oracle",
        (got - want).abs() < 5.0 * se,
        format!("MC {got:.5} vs oracle {want:.5} (5se = {:.2e})", 5.0 * se),
    ));

    // Gaussianity of the terminal coefficient.
    let jb = stats::jarque_bera(&samples);
    let crit = stats::jarque_bera_critical(0.001);
    checks.push(check(
        "terminal coefficient normality (Jarque-Bera, level 0.001)",
        jb < crit,
        format!("JB = {jb:.2} vs critical {crit:.2}"),
    ));

    // Independence across modes.
    let n_ens = 10_000;
    let mut xs = Vec::with_capacity(n_ens);
    let mut ys = Vec::with_capacity(n_ens);
    for s in 0..n_ens as u64 {
        let ens = sample_modes(2, h, grid, s.wrapping_add(seed), SamplerKind::Circulant).unwrap();
        let z = stochastic_convolution(&ens);
        let last = z.field(grid.n_steps());
        xs.push(last.coeff(1));
        ys.push(last.coeff(2));
    }
    let got = stats::cross_moment(&xs, &ys);
    let v1 = mode_variance_oracle(eigenvalue(1), h, 1.0, 1000).unwrap();
    let v2 = mode_variance_oracle(eigenvalue(2), h, 1.0, 1000).unwrap();
    let se = stats::cov_standard_error(v1, v2, 0.0, n_ens);
    checks.push(check(
        "cross-mode independence (5 se)",
        got.abs() < 5.0 * se,
        format!("cross moment {got:.2e} (5se = {:.2e})", 5.0 * se),
    ));

    // Oracle limits: λ → 0 recovers t^{2H}; H ↓ 1/2 recovers the OU value.
    let v_small = mode_variance_oracle(1e-6, h, 1.0, 2000).unwrap();
    let ou = (1.0 - (-2.0f64).exp()) / 2.0;
    let v_bm = mode_variance_oracle(1.0, hp(0.51), 1.0, 2000).unwrap();
    checks.push(check(
        "oracle limits (λ→0 and H→1/2)",
        (v_small - 1.0).abs() < 1e-3 && (v_bm - ou).abs() < 0.05 * ou,
        format!("λ→0: {v_small:.5} vs 1; H=0.51: {v_bm:.5} vs OU {ou:.5}"),
    ));

    // Truncation tail at the default configuration (soft diagnostic).
    let grid512 = TimeGrid::new(1.0, 512).unwrap();
    let tail =
        fracheat::noise::tail_diagnostic(64, h, grid512, seed, SamplerKind::Circulant, 2.0, 512)
            .unwrap();
    checks.push(check(
        "truncation tail diagnostic N = 64 → 128 (soft, not a failure gate)",
        true,
        format!(
            "relative change {tail:.4} (warning threshold 0.05{})",
            if tail < 0.05 { ", ok" } else { " EXCEEDED" }
        ),
    ));

    SuiteReport {
        suite: "convolution".into(),
        checks,
    }
}

pub fn solver_suite(seed: u64) -> SuiteReport {
    let mut checks = Vec::new();
    let h = hp(0.75);
    let m = 512;
    let e1 = synthesize(&SpectralField::basis(1, 1), m).unwrap();

    // Hypothesis arithmetic.
    let ok = check_hypotheses(&ProblemSpec::new(h, 2.0, 1.0, 1.0, 1.0, e1.clone()).unwrap());
    let bad_ph =
        check_hypotheses(&ProblemSpec::new(hp(0.6), 1.5, 1.0, 1.0, 1.0, e1.clone()).unwrap());
    let bad_border =
        check_hypotheses(&ProblemSpec::new(h, 2.0, 4.0, 1.0, 1.0, e1.clone()).unwrap());
    checks.push(check(
        "hypothesis checker (pass case and both failure cases)",
        ok.all_satisfied() && !bad_ph.all_satisfied() && !bad_border.all_satisfied(),
        format!("pass: [{ok}]; pH fail: [{bad_ph}]; boundary fail: [{bad_border}]"),
    ));

    // Scalar growth estimate for the concrete nonlinearity.
    let mut rng = derive_rng(seed, DOMAIN_FIELD, 200, 0);
    let mut worst_excess = 0.0f64;
    for &alpha in &[0.5, 1.0, 2.0] {
        let f = |x: f64| x * x.abs().powf(alpha);
        for _ in 0..100_000 {
            let x: f64 = rng.random_range(-10.0..10.0);
            let y: f64 = rng.random_range(-10.0..10.0);
            let lhs = (f(x) - f(y)).abs();
            let rhs = (1.0 + alpha) * (x - y).abs() * (x.abs().powf(alpha) + y.abs().powf(alpha));
            if rhs > 0.0 {
                worst_excess = worst_excess.max(lhs / rhs);
            }
        }
    }
    checks.push(check(
        "scalar growth bound validates C = 1 + α",
        worst_excess <= 1.0 + 1e-12,
        format!("worst lhs/rhs = {worst_excess:.6}"),
    ));

    // (h1) randomized sweeps at both acceptance configurations.
    for &(p, alpha, c) in &[(4.0, 1.0, 2.0), (6.0, 2.0, 3.0)] {
        let spec = ProblemSpec::new(h, p, alpha, c, 1.0, e1.clone()).unwrap();
        let mut violations = 0usize;
        for _ in 0..20 {
            let u = random_field(16, m, 0.8, &mut rng).unwrap();
            let v = random_field(16, m, 0.8, &mut rng).unwrap();
            if !check_h1(&u, &v, &spec).unwrap().satisfied {
                violations += 1;
            }
        }
        checks.push(check(
            format!("(h1) sweep at p = {p}, α = {alpha}, C = {c}"),
            violations == 0,
            format!("{violations} violations in 20 pairs"),
        ));
    }

    // Constants: worked values and the dual-route stopping time.
    let spec_c = ProblemSpec::new(h, 2.0, 1.0, 1.0, 1.0, e1.clone()).unwrap();
    let ct = compute_c_tilde(1.0, 1.0, &spec_c).unwrap();
    let spec_c2 = ProblemSpec::new(h, 2.0, 2.0, 1.0, 1.0, e1.clone()).unwrap();
    let ct2 = compute_c_tilde(1.0, 1.0, &spec_c2).unwrap();
    let t0 = compute_t0(&spec_c, 1.0).unwrap();
    let t0_expect = 12f64.powf(-4.0 / 3.0);
    checks.push(check(
        "C̃ worked values and closed-form T0",
        (ct - 12.0).abs() < 1e-12 && (ct2 - 72.0).abs() < 1e-12 && (t0 - t0_expect).abs() < 1e-10,
        format!("C̃ = {ct}, {ct2}; T0 = {t0:.9} vs {t0_expect:.9}"),
    ));

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let alpha: f64 = rng.random_range(0.5..3.0);
        let p: f64 = rng.random_range((1.0 + alpha).max(1.0)..8.0);
        let c: f64 = rng.random_range(0.2..4.0);
        let k0: f64 = rng.random_range(0.05..3.0);
        let spec = ProblemSpec::new(h, p, alpha, c, 1.0, e1.clone()).unwrap();
        let a = compute_t0(&spec, k0).unwrap();
        let b = compute_t0_bisection(&spec, k0).unwrap();
        worst = worst.max((a - b).abs());
    }
    checks.push(check(
        "T0 closed form vs bisection on 100 random configurations",
        worst < 1e-10,
        format!("worst |closed − bisection| = {worst:.2e}"),
    ));

    // Linear consistency: C = 0 puts the solver on the linear solution.
    let grid = TimeGrid::new(1.0, 64).unwrap();
    let n_modes = 8;
    let u0 = e1.scale(0.1);
    let lin_spec = ProblemSpec::new(h, 2.0, 1.0, 0.0, 1.0, u0.clone()).unwrap();
    let ens = sample_modes(n_modes, h, grid, seed, SamplerKind::Circulant).unwrap();
    let z = stochastic_convolution(&ens);
    let (sol, trace) = picard_solve(&lin_spec, &z, &PicardOptions::default()).unwrap();
    let mut worst = 0.0f64;
    let u0_hat = analyze(&u0, n_modes).unwrap();
    for (k, &t) in sol.times.iter().enumerate() {
        let lin = semigroup_apply(&u0_hat, t).unwrap().add(z.field(k));
        let lin_grid = synthesize(&lin, m).unwrap();
        worst = worst.max(lp_norm(&sol.states[k].sub(&lin_grid), 2.0).unwrap());
    }
    checks.push(check(
        "linear branch (C = 0) equals S(t)u0 + z(t) in one iteration",
        trace.iterations == 1 && worst < 1e-12,
        format!(
            "{} iterations, worst node deviation {worst:.2e}",
            trace.iterations
        ),
    ));

    // Nonlinear solve at a desk-scale default: convergence, contraction, and
    // the uniqueness probe.
    let spec = ProblemSpec::new(h, 2.0, 1.0, 2.0, 1.0, u0.clone()).unwrap();
    let grid_solve = TimeGrid::new(1.0, 128).unwrap();
    let ens = sample_modes(
        16,
        h,
        grid_solve,
        seed.wrapping_add(1),
        SamplerKind::Circulant,
    )
    .unwrap();
    let z = stochastic_convolution(&ens);
    let opts = PicardOptions::default();
    match picard_solve(&spec, &z, &opts) {
        Ok((_, trace)) => {
            let ratio_ok = trace
                .max_stable_ratio(100.0 * opts.tol)
                .is_none_or(|r| r <= trace.c_tilde_t0 + 0.05);
            checks.push(check(
                "Picard converges with contraction within budget",
                trace.converged && ratio_ok,
                format!(
                    "{} iterations, C̃(T0) = {:.4}, max ratio {:?}",
                    trace.iterations,
                    trace.c_tilde_t0,
                    trace.max_stable_ratio(100.0 * opts.tol)
                ),
            ));
            let probes = contraction_probe(&spec, &z, trace.k0, trace.t0, 5, seed).unwrap();
            let worst_probe = probes.iter().cloned().fold(0.0f64, f64::max);
            checks.push(check(
                "operator contraction probe over 5 random ball pairs",
                probes.iter().all(|r| *r <= trace.c_tilde_t0 * 1.02),
                format!(
                    "worst ratio {worst_probe:.4} vs C̃(T0)(1.02) = {:.4}",
                    trace.c_tilde_t0 * 1.02
                ),
            ));
            let opts2 = PicardOptions {
                initial: InitialIterate::ConstantInitial,
                ..PicardOptions::default()
            };
            let (a, _) = picard_solve(&spec, &z, &opts).unwrap();
            let (b, _) = picard_solve(&spec, &z, &opts2).unwrap();
            let gap = a.sup_diff_lp(&b, spec.p).unwrap();
            checks.push(check(
                "uniqueness probe across initial iterates",
                gap < 1e-6,
                format!("sup gap {gap:.2e}"),
            ));
        }
        Err(e) => {
            checks.push(check(
                "Picard converges with contraction within budget",
                false,
                e.to_string(),
            ));
        }
    }

    // Additivity of G in the injected noise.
    let grid32 = TimeGrid::new(1.0, 32).unwrap();
    let za = stochastic_convolution(
        &sample_modes(6, h, grid32, seed.wrapping_add(2), SamplerKind::Circulant).unwrap(),
    );
    let zb = stochastic_convolution(
        &sample_modes(6, h, grid32, seed.wrapping_add(3), SamplerKind::Circulant).unwrap(),
    );
    let z_sum = za.add(&zb).restrict(1.0).unwrap();
    let za_r = za.restrict(1.0).unwrap();
    let u = fracheat::solver::random_ball_trajectory(&za_r.times, m, 2.0, 0.5, seed, 5).unwrap();
    let g_sum = apply_g(&u, &spec, &z_sum, 6).unwrap();
    let g_a = apply_g(&u, &spec, &za_r, 6).unwrap();
    let mut worst = 0.0f64;
    for (k, state) in g_sum.states.iter().enumerate() {
        let zb_grid = synthesize(zb.field(k), m).unwrap();
        let expect = g_a.states[k].add(&zb_grid);
        worst = worst.max(lp_norm(&state.sub(&expect), 2.0).unwrap());
    }
    checks.push(check(
        "G additivity in the noise term",
        worst < 1e-12,
        format!("worst node deviation {worst:.2e}"),
    ));

    // Refinement order of the deterministic convolution.
    let u0_small = e1.scale(0.3);
    let spec_r = ProblemSpec::new(h, 2.0, 1.0, 2.0, 1.0, u0_small.clone()).unwrap();
    let u0_hat = analyze(&u0_small, 4).unwrap();
    let g_on = |n_steps: usize| -> Trajectory {
        let grid = TimeGrid::new(1.0, n_steps).unwrap();
        let z = stochastic_convolution(&ModeEnsemble::zero(4, h, grid))
            .restrict(1.0)
            .unwrap();
        let states = z
            .times
            .iter()
            .map(|&t| synthesize(&semigroup_apply(&u0_hat, t).unwrap(), m).unwrap())
            .collect();
        let u = Trajectory {
            times: z.times.clone(),
            states,
        };
        apply_g(&u, &spec_r, &z, 4).unwrap()
    };
    let coarse = g_on(64);
    let mid = g_on(128);
    let fine = g_on(256);
    let sup_diff = |a: &Trajectory, b: &Trajectory| -> f64 {
        let mut sup = 0.0f64;
        for (k, s) in a.states.iter().enumerate() {
            sup = sup.max(lp_norm(&s.sub(&b.states[2 * k]), 2.0).unwrap());
        }
        sup
    };
    let ratio = sup_diff(&coarse, &mid) / sup_diff(&mid, &fine);
    checks.push(check(
        "G refinement ratio consistent with first order",
        (1.7..=2.3).contains(&ratio),
        format!("successive-difference ratio {ratio:.3}"),
    ));

    // K0 and the pointwise nonlinearity at their trivial anchors.
    let z0 = stochastic_convolution(&ModeEnsemble::zero(4, h, grid32));
    let k0_zero = compute_k0(&GridFunction::zero(m), &z0, 2.0).unwrap();
    let k0_e1 = compute_k0(&e1, &z0, 2.0).unwrap();
    let f_val = nonlinearity_apply(&GridFunction::new(vec![0.0, 2.0, -2.0, 0.0]).unwrap(), 1.0);
    checks.push(check(
        "K0 anchors and pointwise nonlinearity",
        k0_zero == 0.0 && (k0_e1 - 1.0).abs() < 1e-6 && f_val.values() == [0.0, 4.0, -4.0, 0.0],
        format!("K0(0, 0) = {k0_zero}, K0(e1, 0) = {k0_e1:.8}"),
    ));

    SuiteReport {
        suite: "solver".into(),
        checks,
    }
}
