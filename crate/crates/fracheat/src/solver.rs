//! Local mild solutions by Picard iteration.
//!
//! The solver makes the existence construction executable per noise sample:
//! it checks the standing hypotheses, computes the path constants `K₀`,
//! `C̃(t)` and the stopping time `T₀`, and iterates
//!
//! `G[u](t) = S(t)u₀ + ∫₀ᵗ S(t−s) F(u(s)) ds + z(t)`
//!
//! on `[0, T₀]` until the sup-in-time `L^p` distance of successive iterates
//! falls below tolerance. The deterministic convolution uses exact per-mode
//! exponential weights for piecewise-constant integrands, so each iteration
//! costs `O(modes × nodes)` in spectral space plus the grid transforms
//! needed for the pointwise nonlinearity.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fbm::HurstParam;
use crate::noise::{ConvolutionPath, SpectralPath};
use crate::rng::{derive_rng, DOMAIN_FIELD};
use crate::spectral::{
    eigenvalue, lp_norm, synthesize, DirichletBasis, GridFunction, SpectralField, DIMENSION,
};

/// Pointwise nonlinearity `F(u)(x) = f(u(x))`.
#[derive(Clone)]
pub enum Nonlinearity {
    /// `F ≡ 0`: the linear problem.
    Zero,
    /// `f(x) = x|x|^α` with the problem's `α`.
    PowerLaw,
    /// User-supplied scalar map with claimed `(α, C)`; must fix zero. The
    /// claim is not trusted: check it with [`check_h1`] on representative
    /// fields before solving.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nonlinearity::Zero => write!(f, "Zero"),
            Nonlinearity::PowerLaw => write!(f, "PowerLaw"),
            Nonlinearity::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Problem and discretization parameters for one solve. Dimension is fixed
/// to 1 by the choice of domain.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub hurst: HurstParam,
    /// Integrability exponent of the solution space `L^p(U)`.
    pub p: f64,
    /// Growth exponent of the nonlinearity.
    pub alpha: f64,
    /// Growth constant in the (h1) estimate. Zero switches the nonlinearity
    /// off, reducing the problem to the linear one.
    pub lip_c: f64,
    pub horizon: f64,
    pub u0: GridFunction,
    pub nonlinearity: Nonlinearity,
}

impl ProblemSpec {
    /// Validates parameter ranges. For the power law `f(x) = x|x|^α` the
    /// growth estimate holds with `C = 1 + α`; the constructor accepts any
    /// nonnegative claim (the budget constants scale with it), and `C = 0`
    /// selects the linear problem.
    pub fn new(
        hurst: HurstParam,
        p: f64,
        alpha: f64,
        lip_c: f64,
        horizon: f64,
        u0: GridFunction,
    ) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("p must satisfy 1 <= p < ∞, got {p}")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !(lip_c >= 0.0) || !lip_c.is_finite() {
            return Err(Error::domain(format!("C must be nonnegative, got {lip_c}")));
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::domain(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        let nonlinearity = if lip_c == 0.0 {
            Nonlinearity::Zero
        } else {
            Nonlinearity::PowerLaw
        };
        Ok(ProblemSpec {
            hurst,
            p,
            alpha,
            lip_c,
            horizon,
            u0,
            nonlinearity,
        })
    }

    pub fn with_nonlinearity(mut self, f: Nonlinearity) -> Self {
        self.nonlinearity = f;
        self
    }

    /// `m = p/(1+α)`, the target exponent of the (h1) estimate.
    pub fn m_exponent(&self) -> f64 {
        self.p / (1.0 + self.alpha)
    }

    /// `1 − dα/(2p)`, the exponent governing `C̃(t)`; positive iff `2p > αd`.
    pub fn time_exponent(&self) -> f64 {
        1.0 - DIMENSION * self.alpha / (2.0 * self.p)
    }

    fn apply_f(&self, g: &GridFunction) -> GridFunction {
        match &self.nonlinearity {
            Nonlinearity::Zero => GridFunction::zero(g.m()),
            Nonlinearity::PowerLaw => nonlinearity_apply(g, self.alpha),
            Nonlinearity::Custom(f) => g.map(|x| f(x)),
        }
    }
}

/// One line of a hypothesis report.
#[derive(Debug, Clone)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub satisfied: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of checking (h1)-(h3) plus the quasi-norm guard `m >= 1`.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(
                f,
                "{} [{:.6} vs {:.6}]: {}",
                c.name,
                c.lhs,
                c.rhs,
                if c.satisfied { "ok" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// `f(x) = x|x|^α` applied pointwise. Odd, fixes zero.
pub fn nonlinearity_apply(g: &GridFunction, alpha: f64) -> GridFunction {
    assert!(alpha > 0.0);
    g.map(|x| x * x.abs().powf(alpha))
}

/// Two-sided evaluation of an inequality, with the margin left to the
/// caller to interpret.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Evaluate the (h1) growth estimate
/// `‖F(u)−F(v)‖_m ≤ C ‖u−v‖_p (‖u‖_p^α + ‖v‖_p^α)` on concrete fields.
pub fn check_h1(
    u: &GridFunction,
    v: &GridFunction,
    spec: &ProblemSpec,
) -> Result<ComparisonReport> {
    let m = spec.m_exponent();
    if m < 1.0 {
        return Err(Error::domain(format!(
            "m = p/(1+α) = {m} < 1: L^m is only a quasi-norm, configuration rejected"
        )));
    }
    let fu = spec.apply_f(u);
    let fv = spec.apply_f(v);
    let lhs = lp_norm(&fu.sub(&fv), m)?;
    let rhs = spec.lip_c
        * lp_norm(&u.sub(v), spec.p)?
        * (lp_norm(u, spec.p)?.powf(spec.alpha) + lp_norm(v, spec.p)?.powf(spec.alpha));
    Ok(ComparisonReport {
        lhs,
        rhs,
        satisfied: lhs <= rhs,
    })
}

/// Check `H > 1/2`, `H > d/4`, `pH >= 1`, `2p > αd`, and `m >= 1`.
pub fn check_hypotheses(spec: &ProblemSpec) -> HypothesisReport {
    let h = spec.hurst.value();
    let checks = vec![
        HypothesisCheck {
            name: "H > 1/2",
            satisfied: h > 0.5,
            lhs: h,
            rhs: 0.5,
        },
        HypothesisCheck {
            name: "H > d/4",
            satisfied: h > DIMENSION / 4.0,
            lhs: h,
            rhs: DIMENSION / 4.0,
        },
        HypothesisCheck {
            name: "pH >= 1",
            satisfied: spec.p * h >= 1.0,
            lhs: spec.p * h,
            rhs: 1.0,
        },
        HypothesisCheck {
            name: "2p > alpha*d",
            satisfied: 2.0 * spec.p > spec.alpha * DIMENSION,
            lhs: 2.0 * spec.p,
            rhs: spec.alpha * DIMENSION,
        },
        HypothesisCheck {
            name: "m >= 1",
            satisfied: spec.m_exponent() >= 1.0,
            lhs: spec.m_exponent(),
            rhs: 1.0,
        },
    ];
    HypothesisReport { checks }
}

/// `K₀ = max(‖u₀‖_p, sup_k ‖z(t_k)‖_p)`, the path-dependent radius scale.
pub fn compute_k0(u0: &GridFunction, z: &ConvolutionPath, p: f64) -> Result<f64> {
    let m = u0.m();
    if z.n_modes() > m / 2 {
        return Err(Error::domain(format!(
            "noise has {} modes but the grid only resolves {}",
            z.n_modes(),
            m / 2
        )));
    }
    let sup_z = z.sup_lp_norm(p, m)?;
    Ok(lp_norm(u0, p)?.max(sup_z))
}

const ALPHA_BRANCH: f64 = 1.584_962_500_721_156; // ln 3 / ln 2

/// The contraction budget
/// `C̃(t) = C t^{1−dα/2p}/(1−dα/2p) × (6K₀)^α` for `α >= ln3/ln2`, with the
/// factor `(3K₀)^{α+1}` below the branch point.
pub fn compute_c_tilde(t: f64, k0: f64, spec: &ProblemSpec) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("C̃ needs t >= 0, got {t}")));
    }
    if !(k0 >= 0.0) {
        return Err(Error::domain(format!("C̃ needs K₀ >= 0, got {k0}")));
    }
    let exponent = spec.time_exponent();
    if exponent <= 0.0 {
        return Err(Error::domain(format!(
            "2p > αd required (got 2p = {}, αd = {})",
            2.0 * spec.p,
            spec.alpha * DIMENSION
        )));
    }
    let k_factor = if spec.alpha >= ALPHA_BRANCH {
        (6.0 * k0).powf(spec.alpha)
    } else {
        (3.0 * k0).powf(spec.alpha + 1.0)
    };
    Ok(spec.lip_c * t.powf(exponent) / exponent * k_factor)
}

/// Stopping time `T₀`: the horizon if `C̃(T) < 1`, else the first time
/// `C̃(t) = 1`, available in closed form since `C̃` is a pure power of `t`.
pub fn compute_t0(spec: &ProblemSpec, k0: f64) -> Result<f64> {
    let t_end = spec.horizon;
    if compute_c_tilde(t_end, k0, spec)? < 1.0 {
        return Ok(t_end);
    }
    let exponent = spec.time_exponent();
    // C̃(t) = A t^exponent with A = C̃(1); the root of C̃ = 1 is A^{-1/exponent}.
    let unit = compute_c_tilde(1.0, k0, spec)?;
    Ok(unit.powf(-1.0 / exponent).min(t_end))
}

/// Bisection cross-check of [`compute_t0`], independent of the closed form.
pub fn compute_t0_bisection(spec: &ProblemSpec, k0: f64) -> Result<f64> {
    let t_end = spec.horizon;
    if compute_c_tilde(t_end, k0, spec)? < 1.0 {
        return Ok(t_end);
    }
    let (mut lo, mut hi) = (0.0f64, t_end);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if compute_c_tilde(mid, k0, spec)? >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A grid-function trajectory on an explicit list of times.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GridFunction>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `sup_k ‖u(t_k)‖_p`.
    pub fn sup_lp_norm(&self, p: f64) -> Result<f64> {
        let mut sup = 0.0f64;
        for s in &self.states {
            sup = sup.max(lp_norm(s, p)?);
        }
        Ok(sup)
    }

    /// `sup_k ‖u(t_k) − v(t_k)‖_p`.
    pub fn sup_diff_lp(&self, other: &Trajectory, p: f64) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let mut sup = 0.0f64;
        for (a, b) in self.states.iter().zip(&other.states) {
            sup = sup.max(lp_norm(&a.sub(b), p)?);
        }
        Ok(sup)
    }
}

/// The fixed-point map on a fixed time mesh, with basis table and decay
/// factors precomputed. Built once per solve.
struct GMap<'a> {
    spec: &'a ProblemSpec,
    times: Vec<f64>,
    z_fields: &'a [SpectralField],
    u0_hat: SpectralField,
    basis: DirichletBasis,
    n_modes: usize,
}

impl<'a> GMap<'a> {
    fn new(spec: &'a ProblemSpec, z: &'a SpectralPath, n_modes: usize) -> Result<Self> {
        let m = spec.u0.m();
        let basis = DirichletBasis::new(n_modes, m)?;
        let u0_hat = basis.analyze(&spec.u0);
        if z.fields.iter().any(|f| f.n_modes() < n_modes) {
            return Err(Error::domain(
                "noise fields carry fewer modes than the solver needs",
            ));
        }
        Ok(GMap {
            spec,
            times: z.times.clone(),
            z_fields: &z.fields,
            u0_hat,
            basis,
            n_modes,
        })
    }

    /// `u ↦ S(·)u₀ + ∫₀^· S(·−s) F(u(s)) ds + z(·)` with piecewise-constant
    /// `F(u)` and exact exponential step weights
    /// `∫_{t_i}^{t_{i+1}} e^{−λ(t_k−s)} ds = e^{−λ(t_k−t_{i+1})}(1−e^{−λδ_i})/λ`.
    fn apply(&self, u: &Trajectory) -> Result<Trajectory> {
        let n_nodes = self.times.len();
        if u.len() != n_nodes {
            return Err(Error::LengthMismatch {
                expected: n_nodes,
                got: u.len(),
            });
        }
        let skip_f = matches!(self.spec.nonlinearity, Nonlinearity::Zero);
        let f_hats: Vec<SpectralField> = if skip_f {
            Vec::new()
        } else {
            u.states
                .iter()
                .map(|s| self.basis.analyze(&self.spec.apply_f(s)))
                .collect()
        };

        let mut states = Vec::with_capacity(n_nodes);
        // Per-mode running value of the deterministic convolution.
        let mut integral = vec![0.0; self.n_modes];
        for k in 0..n_nodes {
            if k > 0 {
                let delta = self.times[k] - self.times[k - 1];
                for n in 1..=self.n_modes {
                    let lam = eigenvalue(n);
                    let decay = (-lam * delta).exp();
                    let weight = if skip_f { 0.0 } else { (1.0 - decay) / lam };
                    integral[n - 1] = decay * integral[n - 1]
                        + if skip_f {
                            0.0
                        } else {
                            weight * f_hats[k - 1].coeff(n)
                        };
                }
            }
            let t_k = self.times[k];
            let coeffs: Vec<f64> = (1..=self.n_modes)
                .map(|n| {
                    (-eigenvalue(n) * t_k).exp() * self.u0_hat.coeff(n)
                        + integral[n - 1]
                        + self.z_fields[k].coeff(n)
                })
                .collect();
            states.push(self.basis.synthesize(&coeffs));
        }
        Ok(Trajectory {
            times: self.times.clone(),
            states,
        })
    }

    fn initial(&self, kind: InitialIterate) -> Trajectory {
        let states = match kind {
            InitialIterate::LinearSolution => self
                .times
                .iter()
                .enumerate()
                .map(|(k, &t)| {
                    let coeffs: Vec<f64> = (1..=self.n_modes)
                        .map(|n| {
                            (-eigenvalue(n) * t).exp() * self.u0_hat.coeff(n)
                                + self.z_fields[k].coeff(n)
                        })
                        .collect();
                    self.basis.synthesize(&coeffs)
                })
                .collect(),
            InitialIterate::ConstantInitial => {
                let u0_proj = self.basis.synthesize(self.u0_hat.coeffs());
                vec![u0_proj; self.times.len()]
            }
        };
        Trajectory {
            times: self.times.clone(),
            states,
        }
    }
}

/// Free-standing application of the map `G`; `u` and `z` must share times.
/// Builds the basis table per call; use [`picard_solve`] for iteration.
pub fn apply_g(
    u: &Trajectory,
    spec: &ProblemSpec,
    z: &SpectralPath,
    n_modes: usize,
) -> Result<Trajectory> {
    GMap::new(spec, z, n_modes)?.apply(u)
}

/// Choice of the starting iterate; both lie in the invariant ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialIterate {
    /// `u⁰(t) = S(t)u₀ + z(t)`, the linear solution (norm ≤ 2K₀); makes the
    /// linear case exact after one application.
    LinearSolution,
    /// `u⁰(t) ≡ u₀`, constant in time (norm ≤ K₀); used by the uniqueness
    /// probe.
    ConstantInitial,
}

#[derive(Debug, Clone)]
pub struct PicardOptions {
    /// Convergence tolerance on `sup_t ‖u_{k+1} − u_k‖_p`.
    pub tol: f64,
    pub max_iters: usize,
    /// Relative slack on the `3K₀` ball before the escape error fires;
    /// covers quadrature noise.
    pub ball_slack: f64,
    pub initial: InitialIterate,
    /// Galerkin mode count; defaults to the noise's mode count.
    pub n_modes: Option<usize>,
}

impl Default for PicardOptions {
    fn default() -> Self {
        PicardOptions {
            tol: 1e-8,
            max_iters: 200,
            ball_slack: 0.02,
            initial: InitialIterate::LinearSolution,
            n_modes: None,
        }
    }
}

/// Per-solve record: the path constants, both contraction conditions, and
/// the iteration history.
#[derive(Debug, Clone)]
pub struct PicardTrace {
    pub k0: f64,
    pub t0: f64,
    /// True when `C̃(T) < 1` and the stopping time is the full horizon.
    pub hit_horizon: bool,
    /// `C̃` evaluated at the full horizon; below one iff `hit_horizon`.
    pub c_tilde_horizon: f64,
    pub c_tilde_t0: f64,
    /// `C T₀^{1−dα/2p}/(1−dα/2p) (3K₀)^{α+1}`, the ball-preservation budget.
    pub cond1: f64,
    /// Same expression with `(6K₀)^α`, the contraction budget.
    pub cond2: f64,
    /// `sup_t ‖u_k‖_p` after each application of `G`.
    pub sup_norms: Vec<f64>,
    /// `sup_t ‖u_{k+1} − u_k‖_p` per iteration.
    pub diffs: Vec<f64>,
    /// Successive `diffs` ratios, the empirical contraction factor.
    pub ratios: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl PicardTrace {
    /// Largest ratio among iterations whose previous difference still sits
    /// meaningfully above `floor` (ratios near the tolerance are rounding
    /// noise).
    pub fn max_stable_ratio(&self, floor: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, &r) in self.ratios.iter().enumerate() {
            if self.diffs[i] > floor {
                best = Some(best.map_or(r, |b: f64| b.max(r)));
            }
        }
        best
    }
}

/// Iterate `G` from the chosen starting point until successive iterates are
/// `tol`-close in `sup_t L^p`, on `[0, T₀]` with `T₀` computed from this
/// path's `K₀`.
pub fn picard_solve(
    spec: &ProblemSpec,
    z: &ConvolutionPath,
    opts: &PicardOptions,
) -> Result<(Trajectory, PicardTrace)> {
    let report = check_hypotheses(spec);
    if !report.all_satisfied() {
        return Err(Error::Hypotheses(report));
    }
    let n_modes = opts.n_modes.unwrap_or_else(|| z.n_modes());
    let k0 = compute_k0(&spec.u0, z, spec.p)?;
    let t0 = compute_t0(spec, k0)?;
    let hit_horizon = t0 >= spec.horizon;
    let c_tilde_horizon = compute_c_tilde(spec.horizon, k0, spec)?;
    let c_tilde_t0 = compute_c_tilde(t0, k0, spec)?;
    let exponent = spec.time_exponent();
    let tau = t0.powf(exponent) / exponent;
    let cond1 = spec.lip_c * tau * (3.0 * k0).powf(spec.alpha + 1.0);
    let cond2 = spec.lip_c * tau * (6.0 * k0).powf(spec.alpha);

    let restricted = z.restrict(t0)?;
    let gmap = GMap::new(spec, &restricted, n_modes)?;
    let mut trace = PicardTrace {
        k0,
        t0,
        hit_horizon,
        c_tilde_horizon,
        c_tilde_t0,
        cond1,
        cond2,
        sup_norms: Vec::new(),
        diffs: Vec::new(),
        ratios: Vec::new(),
        iterations: 0,
        converged: false,
    };

    let ball_bound = 3.0 * k0 * (1.0 + opts.ball_slack);
    let mut current = gmap.initial(opts.initial);
    for _ in 0..opts.max_iters {
        let next = gmap.apply(&current)?;
        let diff = next.sup_diff_lp(&current, spec.p)?;
        let sup = next.sup_lp_norm(spec.p)?;
        trace.iterations += 1;
        if let Some(&prev) = trace.diffs.last() {
            if prev > 0.0 {
                trace.ratios.push(diff / prev);
            }
        }
        trace.sup_norms.push(sup);
        trace.diffs.push(diff);
        if sup > ball_bound && k0 > 0.0 {
            return Err(Error::BallEscape {
                trace: Box::new(trace),
                norm: sup,
                bound: ball_bound,
            });
        }
        current = next;
        if diff < opts.tol {
            trace.converged = true;
            return Ok((current, trace));
        }
    }
    let last_diff = trace.diffs.last().copied().unwrap_or(f64::NAN);
    Err(Error::NonConvergence {
        trace: Box::new(trace),
        last_diff,
    })
}

/// Random trajectory in the ball `{sup_t ‖u‖_p ≤ 3K₀}` on the given times:
/// low-mode fields with slowly rotating coefficients, rescaled so the sup
/// norm lands at a uniform fraction of the radius in `[1/2, 1]`.
pub fn random_ball_trajectory(
    times: &[f64],
    m: usize,
    p: f64,
    radius: f64,
    seed: u64,
    index: u64,
) -> Result<Trajectory> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    let mut rng = derive_rng(seed, DOMAIN_FIELD, index, 1);
    let n_modes = 8.min(m / 2).max(1);
    let amps: Vec<f64> = (1..=n_modes)
        .map(|n| rng.sample::<f64, _>(StandardNormal) * (n as f64).powf(-1.0))
        .collect();
    let freqs: Vec<f64> = (0..n_modes).map(|_| rng.random_range(0.0..8.0)).collect();
    let phases: Vec<f64> = (0..n_modes)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();
    let states: Vec<GridFunction> = times
        .iter()
        .map(|&t| {
            let coeffs: Vec<f64> = (0..n_modes)
                .map(|i| amps[i] * (freqs[i] * t + phases[i]).cos())
                .collect();
            synthesize(&SpectralField::new(coeffs), m)
        })
        .collect::<Result<_>>()?;
    let mut traj = Trajectory {
        times: times.to_vec(),
        states,
    };
    let sup = traj.sup_lp_norm(p)?;
    if sup > 0.0 && radius > 0.0 {
        let target = radius * rng.random_range(0.5..1.0);
        let scale = target / sup;
        traj.states = traj.states.iter().map(|s| s.scale(scale)).collect();
    }
    Ok(traj)
}

/// Measured operator ratios `sup_t ‖G[u]−G[v]‖_p / sup_t ‖u−v‖_p` over
/// random pairs in the `3K₀` ball on `[0, T₀]`. The noise and initial data
/// cancel in the difference, so this isolates the nonlinear term that the
/// contraction condition bounds.
pub fn contraction_probe(
    spec: &ProblemSpec,
    z: &ConvolutionPath,
    k0: f64,
    t0: f64,
    pairs: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let restricted = z.restrict(t0)?;
    let n_modes = z.n_modes();
    let gmap = GMap::new(spec, &restricted, n_modes)?;
    let m = spec.u0.m();
    let radius = 3.0 * k0;
    let mut ratios = Vec::with_capacity(pairs);
    for i in 0..pairs {
        let u = random_ball_trajectory(&restricted.times, m, spec.p, radius, seed, 2 * i as u64)?;
        let v =
            random_ball_trajectory(&restricted.times, m, spec.p, radius, seed, 2 * i as u64 + 1)?;
        let gu = gmap.apply(&u)?;
        let gv = gmap.apply(&v)?;
        let denom = u.sup_diff_lp(&v, spec.p)?;
        if denom > 0.0 {
            ratios.push(gu.sup_diff_lp(&gv, spec.p)? / denom);
        }
    }
    Ok(ratios)
}
