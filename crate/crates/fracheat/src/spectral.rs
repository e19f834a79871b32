//! The Dirichlet Laplacian on `U = (0, π)`: eigenpairs `λ_n = n²`,
//! `e_n(x) = √(2/π) sin(nx)`, the heat semigroup, synthesis/analysis between
//! spectral and grid representations, `L^p` norms by trapezoid quadrature,
//! and the semigroup smoothing estimate.
//!
//! Trapezoid quadrature on the uniform grid is spectrally accurate for the
//! trigonometric integrands used here, and the discrete sine orthogonality
//! makes the synthesis/analysis round trip exact (up to rounding) whenever
//! the mode count stays at or below half the grid resolution.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Spatial dimension of the domain; fixed.
pub const DIMENSION: f64 = 1.0;

/// Dirichlet eigenvalue `λ_n = n²` on `(0, π)`, `n >= 1`.
pub fn eigenvalue(n: usize) -> f64 {
    assert!(n >= 1, "eigenvalues are indexed from 1");
    (n * n) as f64
}

/// Normalized eigenfunction `e_n(x) = √(2/π) sin(nx)`.
pub fn eigenfunction(n: usize, x: f64) -> Result<f64> {
    assert!(n >= 1, "eigenfunctions are indexed from 1");
    if !(0.0..=PI).contains(&x) {
        return Err(Error::domain(format!("x = {x} outside [0, π]")));
    }
    Ok((2.0 / PI).sqrt() * (n as f64 * x).sin())
}

fn debug_check_finite(values: &[f64], what: &str) {
    debug_assert!(
        values.iter().all(|v| v.is_finite()),
        "{what} contains non-finite values"
    );
}

/// A function on `(0, π)` represented by its first `N` Dirichlet
/// eigencoefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn new(coeffs: Vec<f64>) -> Self {
        debug_check_finite(&coeffs, "SpectralField");
        SpectralField { coeffs }
    }

    pub fn zero(n_modes: usize) -> Self {
        SpectralField {
            coeffs: vec![0.0; n_modes],
        }
    }

    /// Unit coefficient on mode `n` (1-indexed).
    pub fn basis(n: usize, n_modes: usize) -> Self {
        assert!(n >= 1 && n <= n_modes);
        let mut coeffs = vec![0.0; n_modes];
        coeffs[n - 1] = 1.0;
        SpectralField { coeffs }
    }

    pub fn n_modes(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `e_n` (1-indexed).
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs[n - 1]
    }

    pub fn scale(&self, c: f64) -> Self {
        SpectralField::new(self.coeffs.iter().map(|v| c * v).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_modes(), other.n_modes());
        SpectralField::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `ℓ²` norm of the coefficients, which equals the `L²(0,π)` norm of the
    /// represented function.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// A function sampled at `x_j = jπ/M`, `j = 0..=M`, with Dirichlet boundary
/// values pinned to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::domain("grid needs at least M = 2 intervals"));
        }
        if values[0] != 0.0 || *values.last().unwrap() != 0.0 {
            return Err(Error::domain(
                "Dirichlet boundary: endpoint values must be zero",
            ));
        }
        debug_check_finite(&values, "GridFunction");
        Ok(GridFunction { values })
    }

    pub fn zero(m: usize) -> Self {
        assert!(m >= 2);
        GridFunction {
            values: vec![0.0; m + 1],
        }
    }

    /// Number of grid intervals `M`; there are `M + 1` sample points.
    pub fn m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn point(&self, j: usize) -> f64 {
        j as f64 * PI / self.m() as f64
    }

    /// Apply `f` pointwise; `f` must fix zero so the boundary stays pinned.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        values[0] = 0.0;
        let last = values.len() - 1;
        values[last] = 0.0;
        debug_check_finite(&values, "GridFunction::map");
        GridFunction { values }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m(), other.m());
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        GridFunction { values }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.m(), other.m());
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        GridFunction { values }
    }
}

/// Heat semigroup `S(t)`: multiplies the n-th coefficient by `e^{−n² t}`.
pub fn semigroup_apply(u: &SpectralField, t: f64) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!(
            "semigroup time must be >= 0, got {t}"
        )));
    }
    let coeffs = u
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * (-eigenvalue(i + 1) * t).exp())
        .collect();
    Ok(SpectralField::new(coeffs))
}

/// Evaluate `Σ c_n e_n(x_j)` on the `M`-interval grid.
///
/// Requires `M >= 2 n_modes` so the highest mode is resolved without
/// aliasing. Endpoints are set to zero exactly (every `e_n` vanishes there).
pub fn synthesize(u: &SpectralField, m: usize) -> Result<GridFunction> {
    if m < 2 * u.n_modes() {
        return Err(Error::domain(format!(
            "grid too coarse: M = {m} < 2 × {} modes",
            u.n_modes()
        )));
    }
    let norm = (2.0 / PI).sqrt();
    let mut values = vec![0.0; m + 1];
    for (j, slot) in values.iter_mut().enumerate().take(m).skip(1) {
        let theta = j as f64 * PI / m as f64;
        let (two_cos, mut s_prev, mut s) = (2.0 * theta.cos(), 0.0, theta.sin());
        let mut acc = 0.0;
        for &c in &u.coeffs {
            acc += c * s;
            let s_next = two_cos * s - s_prev;
            s_prev = s;
            s = s_next;
        }
        *slot = norm * acc;
    }
    debug_check_finite(&values, "synthesize");
    Ok(GridFunction { values })
}

/// Project onto the first `n_modes` eigenfunctions by trapezoid quadrature
/// of `⟨g, e_n⟩`. Requires `n_modes <= M/2`.
pub fn analyze(g: &GridFunction, n_modes: usize) -> Result<SpectralField> {
    let m = g.m();
    if n_modes > m / 2 {
        return Err(Error::domain(format!(
            "n_modes = {n_modes} exceeds M/2 = {}",
            m / 2
        )));
    }
    let norm = (2.0 / PI).sqrt();
    let dx = PI / m as f64;
    let mut coeffs = vec![0.0; n_modes];
    // Boundary values are zero, so the trapezoid half-weights drop out.
    for j in 1..m {
        let theta = j as f64 * PI / m as f64;
        let w = g.values[j] * dx;
        let (two_cos, mut s_prev, mut s) = (2.0 * theta.cos(), 0.0, theta.sin());
        for c in coeffs.iter_mut() {
            *c += w * s;
            let s_next = two_cos * s - s_prev;
            s_prev = s;
            s = s_next;
        }
    }
    for c in coeffs.iter_mut() {
        *c *= norm;
    }
    Ok(SpectralField::new(coeffs))
}

/// `L^p(0,π)` norm by trapezoid quadrature, `p >= 1`.
pub fn lp_norm(g: &GridFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("lp_norm needs p >= 1, got {p}")));
    }
    let m = g.m();
    let dx = PI / m as f64;
    let mut acc = 0.0;
    for (j, &v) in g.values.iter().enumerate() {
        let w = if j == 0 || j == m { 0.5 } else { 1.0 };
        acc += w * v.abs().powf(p);
    }
    Ok((acc * dx).powf(1.0 / p))
}

/// Outcome of one smoothing-estimate evaluation
/// `‖S(t)u‖_p ≤ t^{−(d/2)(1/r−1/p)} ‖u‖_r`.
#[derive(Debug, Clone, Copy)]
pub struct SmoothingReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; quantifies how close the bound is to being violated.
    pub ratio: f64,
    pub satisfied: bool,
}

/// Evaluate both sides of the smoothing estimate for `1 < r <= p < ∞` and
/// `t > 0`, reporting the comparison. Used as a test harness, not a runtime
/// guard.
pub fn smoothing_check(u: &GridFunction, t: f64, r: f64, p: f64) -> Result<SmoothingReport> {
    if !(t > 0.0) {
        return Err(Error::domain(format!(
            "smoothing_check needs t > 0, got {t}"
        )));
    }
    if !(1.0 < r && r <= p) || !p.is_finite() {
        return Err(Error::domain(format!(
            "smoothing_check needs 1 < r <= p < ∞, got r={r}, p={p}"
        )));
    }
    let hat = analyze(u, u.m() / 2)?;
    let evolved = synthesize(&semigroup_apply(&hat, t)?, u.m())?;
    let lhs = lp_norm(&evolved, p)?;
    let rhs = t.powf(-(DIMENSION / 2.0) * (1.0 / r - 1.0 / p)) * lp_norm(u, r)?;
    let ratio = if rhs == 0.0 { f64::INFINITY } else { lhs / rhs };
    Ok(SmoothingReport {
        lhs,
        rhs,
        ratio,
        satisfied: lhs <= rhs,
    })
}

/// Precomputed table of `e_n(x_j)` for `n = 1..=n_modes`, `j = 0..=M`.
///
/// [`synthesize`]/[`analyze`] recompute the basis on the fly, which is right
/// for one-shot calls; the Picard solver evaluates both at every time node
/// of every iteration, so it shares one table per `(n_modes, M)`.
#[derive(Debug, Clone)]
pub struct DirichletBasis {
    n_modes: usize,
    m: usize,
    /// Row-major, row `n-1` holding `e_n` at the `M+1` grid points.
    rows: Vec<f64>,
}

impl DirichletBasis {
    pub fn new(n_modes: usize, m: usize) -> Result<Self> {
        if m < 2 * n_modes {
            return Err(Error::domain(format!(
                "grid too coarse: M = {m} < 2 × {n_modes} modes"
            )));
        }
        let norm = (2.0 / PI).sqrt();
        let mut rows = vec![0.0; n_modes * (m + 1)];
        for n in 1..=n_modes {
            for j in 1..m {
                rows[(n - 1) * (m + 1) + j] = norm * (n as f64 * j as f64 * PI / m as f64).sin();
            }
        }
        Ok(DirichletBasis { n_modes, m, rows })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `Σ c_n e_n(x_j)` into a fresh grid function.
    pub fn synthesize(&self, coeffs: &[f64]) -> GridFunction {
        assert!(coeffs.len() <= self.n_modes);
        let mut values = vec![0.0; self.m + 1];
        for (n, &c) in coeffs.iter().enumerate() {
            let row = &self.rows[n * (self.m + 1)..(n + 1) * (self.m + 1)];
            for (v, e) in values.iter_mut().zip(row) {
                *v += c * e;
            }
        }
        debug_check_finite(&values, "DirichletBasis::synthesize");
        GridFunction { values }
    }

    /// Trapezoid projection `⟨g, e_n⟩` for `n = 1..=n_modes`.
    pub fn analyze(&self, g: &GridFunction) -> SpectralField {
        assert_eq!(g.m(), self.m);
        let dx = PI / self.m as f64;
        let coeffs = (0..self.n_modes)
            .map(|n| {
                let row = &self.rows[n * (self.m + 1)..(n + 1) * (self.m + 1)];
                let dot: f64 = g.values.iter().zip(row).map(|(v, e)| v * e).sum();
                dot * dx
            })
            .collect();
        SpectralField::new(coeffs)
    }
}

/// Random field with coefficients `c_n ~ N(0, n^{−decay})`, synthesized on
/// the `M`-interval grid. Shared by the validation suites and tests.
pub fn random_field(
    n_modes: usize,
    m: usize,
    decay: f64,
    rng: &mut impl rand::Rng,
) -> Result<GridFunction> {
    use rand_distr::StandardNormal;
    let coeffs: Vec<f64> = (1..=n_modes)
        .map(|n| rng.sample::<f64, _>(StandardNormal) * (n as f64).powf(-decay / 2.0))
        .collect();
    synthesize(&SpectralField::new(coeffs), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::simpson;
    use crate::rng::{derive_rng, DOMAIN_FIELD};
    use proptest::prelude::*;

    #[test]
    fn eigen_examples() {
        assert_eq!(eigenvalue(1), 1.0);
        assert_eq!(eigenvalue(3), 9.0);
        for n in 1..20 {
            assert!(eigenvalue(n + 1) > eigenvalue(n));
        }
        let v = eigenfunction(1, PI / 2.0).unwrap();
        assert!((v - (2.0 / PI).sqrt()).abs() < 1e-15);
        assert!((v - 0.797885).abs() < 1e-6);
        assert!(eigenfunction(2, PI / 2.0).unwrap().abs() < 1e-15);
        assert!(eigenfunction(1, -0.1).is_err());
        assert!(eigenfunction(1, PI + 0.1).is_err());
    }

    #[test]
    fn eigenfunction_l2_normalized() {
        // Quadrature oracle at M = 4096 against the closed-form unit norm.
        for &n in &[1usize, 2, 5, 17] {
            let sq = simpson(|x| eigenfunction(n, x).unwrap().powi(2), 0.0, PI, 4096);
            assert!((sq.sqrt() - 1.0).abs() < 1e-6, "mode {n}");
        }
    }

    #[test]
    fn semigroup_examples() {
        let u = SpectralField::basis(1, 1);
        let v = semigroup_apply(&u, 1.0).unwrap();
        assert!((v.coeff(1) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((v.coeff(1) - 0.367879).abs() < 1e-6);

        let w = SpectralField::new(vec![0.3, -1.2, 0.07]);
        assert_eq!(semigroup_apply(&w, 0.0).unwrap(), w);
        assert!(semigroup_apply(&w, -0.5).is_err());
    }

    #[test]
    fn semigroup_contracts_l2() {
        let mut rng = derive_rng(1, DOMAIN_FIELD, 0, 0);
        for trial in 0..5u64 {
            let _ = trial;
            let coeffs: Vec<f64> = (0..16)
                .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect();
            let u = SpectralField::new(coeffs);
            for &t in &[0.01, 0.1, 1.0] {
                let v = semigroup_apply(&u, t).unwrap();
                assert!(v.l2_norm() <= u.l2_norm());
            }
        }
    }

    #[test]
    fn synthesize_examples() {
        let zero = synthesize(&SpectralField::zero(4), 16).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));

        let e1 = synthesize(&SpectralField::basis(1, 1), 8).unwrap();
        for j in 0..=8 {
            let expect = if j == 0 || j == 8 {
                0.0
            } else {
                (2.0 / PI).sqrt() * (j as f64 * PI / 8.0).sin()
            };
            assert!((e1.values()[j] - expect).abs() < 1e-14);
        }

        assert!(synthesize(&SpectralField::zero(8), 15).is_err());
    }

    #[test]
    fn analyze_recovers_single_mode() {
        let g = synthesize(&SpectralField::basis(3, 3), 4096).unwrap();
        let hat = analyze(&g, 8).unwrap();
        for n in 1..=8 {
            let expect = if n == 3 { 1.0 } else { 0.0 };
            assert!(
                (hat.coeff(n) - expect).abs() < 1e-10,
                "mode {n}: {}",
                hat.coeff(n)
            );
        }
        assert!(analyze(&g, 4096).is_err());
        let zero = analyze(&GridFunction::zero(64), 8).unwrap();
        assert!(zero.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn lp_norm_examples() {
        let e1 = synthesize(&SpectralField::basis(1, 1), 4096).unwrap();
        assert!((lp_norm(&e1, 2.0).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(lp_norm(&GridFunction::zero(32), 3.0).unwrap(), 0.0);

        // g(x) = sin x, p = 4: (∫ sin⁴)^{1/4} = (3π/8)^{1/4}.
        let m = 4096;
        let mut values: Vec<f64> = (0..=m).map(|j| (j as f64 * PI / m as f64).sin()).collect();
        values[0] = 0.0;
        values[m] = 0.0;
        let g = GridFunction::new(values).unwrap();
        let got = lp_norm(&g, 4.0).unwrap();
        let expect = (3.0 * PI / 8.0).powf(0.25);
        assert!((got - expect).abs() < 1e-5);
        assert!((got - 1.041826).abs() < 1e-5);

        assert!(lp_norm(&g, 0.9).is_err());
    }

    #[test]
    fn smoothing_check_examples() {
        let e1 = synthesize(&SpectralField::basis(1, 4), 256).unwrap();
        // r = p: pure contraction, exponent zero.
        let rep = smoothing_check(&e1, 0.3, 2.0, 2.0).unwrap();
        assert!(rep.satisfied, "ratio {}", rep.ratio);
        // Worked case r = 2, p = 4, t = 1.
        let rep = smoothing_check(&e1, 1.0, 2.0, 4.0).unwrap();
        assert!(rep.satisfied);
        assert!((rep.rhs - 1.0).abs() < 1e-6);

        assert!(smoothing_check(&e1, 0.0, 2.0, 4.0).is_err());
        assert!(smoothing_check(&e1, 1.0, 4.0, 2.0).is_err());
        assert!(smoothing_check(&e1, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn smoothing_randomized_sweep() {
        let mut rng = derive_rng(2, DOMAIN_FIELD, 0, 0);
        for draw in 0..20 {
            let u = random_field(32, 1024, 1.0, &mut rng).unwrap();
            for &r in &[2.0, 4.0] {
                for &p in &[4.0, 6.0] {
                    for &t in &[0.05, 0.5] {
                        let rep = smoothing_check(&u, t, r, p).unwrap();
                        assert!(
                            rep.satisfied,
                            "draw {draw} violated at (r={r}, p={p}, t={t}): ratio {}",
                            rep.ratio
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn basis_table_matches_free_functions() {
        let basis = DirichletBasis::new(6, 64).unwrap();
        let mut rng = derive_rng(3, DOMAIN_FIELD, 9, 0);
        let coeffs: Vec<f64> = (0..6)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let u = SpectralField::new(coeffs.clone());
        let via_table = basis.synthesize(&coeffs);
        let via_free = synthesize(&u, 64).unwrap();
        for (a, b) in via_table.values().iter().zip(via_free.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let hat_table = basis.analyze(&via_table);
        let hat_free = analyze(&via_free, 6).unwrap();
        for n in 1..=6 {
            assert!((hat_table.coeff(n) - hat_free.coeff(n)).abs() < 1e-12);
        }
        assert!(DirichletBasis::new(40, 64).is_err());
    }

    #[test]
    fn grid_function_enforces_boundary() {
        assert!(GridFunction::new(vec![0.0, 1.0, 0.5]).is_err());
        assert!(GridFunction::new(vec![0.1, 1.0, 0.0]).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0, 0.0]).is_ok());
    }

    proptest! {
        #[test]
        fn semigroup_law(s in 0.0f64..2.0, t in 0.0f64..2.0, seed in 0u64..50) {
            let mut rng = derive_rng(seed, DOMAIN_FIELD, 1, 0);
            let coeffs: Vec<f64> =
                (0..12).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
            let u = SpectralField::new(coeffs);
            let a = semigroup_apply(&semigroup_apply(&u, s).unwrap(), t).unwrap();
            let b = semigroup_apply(&u, s + t).unwrap();
            for n in 1..=u.n_modes() {
                let (x, y) = (a.coeff(n), b.coeff(n));
                // exp's condition number: each route carries argument
                // rounding of order λ·(time)·ε/2, so the spread between the
                // two routes is bounded by ~1.5 λ(s+t) ulps plus a few
                // rounding steps.
                let cond = 8.0 + 2.0 * eigenvalue(n) * (s + t);
                prop_assert!((x - y).abs() <= cond * f64::EPSILON * y.abs().max(f64::MIN_POSITIVE));
            }
        }

        #[test]
        fn semigroup_law_small_arguments_tight(s in 0.0f64..0.01, t in 0.0f64..0.01, seed in 0u64..20) {
            // Where the exponent arguments are O(1), the law holds to 4 ulp.
            let mut rng = derive_rng(seed, DOMAIN_FIELD, 7, 0);
            let coeffs: Vec<f64> =
                (0..12).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
            let u = SpectralField::new(coeffs);
            let a = semigroup_apply(&semigroup_apply(&u, s).unwrap(), t).unwrap();
            let b = semigroup_apply(&u, s + t).unwrap();
            for n in 1..=u.n_modes() {
                let (x, y) = (a.coeff(n), b.coeff(n));
                prop_assert!((x - y).abs() <= 4.0 * f64::EPSILON * y.abs().max(f64::MIN_POSITIVE));
            }
        }

        #[test]
        fn round_trip_identity(seed in 0u64..50, n_modes in 1usize..24) {
            let mut rng = derive_rng(seed, DOMAIN_FIELD, 2, 0);
            let coeffs: Vec<f64> =
                (0..n_modes).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
            let u = SpectralField::new(coeffs);
            let back = analyze(&synthesize(&u, 64).unwrap(), n_modes).unwrap();
            for n in 1..=n_modes {
                prop_assert!((back.coeff(n) - u.coeff(n)).abs() < 1e-10);
            }
        }

        #[test]
        fn lp_triangle_inequality(seed in 0u64..50, p in 1.0f64..6.0) {
            let mut rng = derive_rng(seed, DOMAIN_FIELD, 3, 0);
            let f = random_field(16, 128, 0.5, &mut rng).unwrap();
            let g = random_field(16, 128, 0.5, &mut rng).unwrap();
            let lhs = lp_norm(&f.add(&g), p).unwrap();
            let rhs = lp_norm(&f, p).unwrap() + lp_norm(&g, p).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }

        #[test]
        fn semigroup_l2_monotone_decay(seed in 0u64..30) {
            let mut rng = derive_rng(seed, DOMAIN_FIELD, 4, 0);
            let coeffs: Vec<f64> =
                (0..10).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
            let u = SpectralField::new(coeffs);
            let mut prev = u.l2_norm();
            for &t in &[0.01, 0.05, 0.2, 1.0] {
                let cur = semigroup_apply(&u, t).unwrap().l2_norm();
                prop_assert!(cur <= prev * (1.0 + 1e-14));
                prev = cur;
            }
        }
    }
}
