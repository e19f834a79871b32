//! One-dimensional fractional Brownian motion for `H ∈ (1/2, 1)`:
//! covariance, the Volterra kernel and transfer operator, exact and fast
//! samplers, and Young integrals against sampled paths.

mod kernel;
mod sampler;

pub use kernel::{
    kernel_kh, kernel_product_integral, transfer_indicator, DEFAULT_KERNEL_QUAD_STEPS,
};
pub use sampler::{sample_fbm_cholesky, sample_fbm_circulant, CholeskySampler, CirculantSampler};

use crate::error::{Error, Result};
use crate::special::beta;

/// Hurst parameter restricted to the Volterra regime `1/2 < H < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstParam(f64);

impl HurstParam {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.5 && value < 1.0) || !value.is_finite() {
            return Err(Error::domain(format!(
                "Hurst parameter must lie in (1/2, 1), got {value}"
            )));
        }
        Ok(HurstParam(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `2H`, the self-similarity exponent of the covariance.
    pub fn two_h(self) -> f64 {
        2.0 * self.0
    }
}

/// Uniform time grid `t_k = k·T/n`, `k = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, n_steps: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::domain(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::domain("time grid needs at least one step"));
        }
        Ok(TimeGrid { horizon, n_steps })
    }

    pub fn horizon(self) -> f64 {
        self.horizon
    }

    pub fn n_steps(self) -> usize {
        self.n_steps
    }

    /// Number of grid points, `n_steps + 1`.
    pub fn n_points(self) -> usize {
        self.n_steps + 1
    }

    pub fn dt(self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    pub fn point(self, k: usize) -> f64 {
        debug_assert!(k <= self.n_steps);
        k as f64 * self.horizon / self.n_steps as f64
    }

    pub fn points(self) -> impl Iterator<Item = f64> {
        (0..=self.n_steps).map(move |k| self.point(k))
    }
}

/// One sampled fBm trajectory on a uniform grid. Paths start at the origin
/// and are a deterministic function of `(seed, grid, hurst, sampler)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath {
    grid: TimeGrid,
    hurst: HurstParam,
    seed: u64,
    values: Vec<f64>,
}

impl FbmPath {
    pub(crate) fn from_parts(
        grid: TimeGrid,
        hurst: HurstParam,
        seed: u64,
        values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        debug_assert_eq!(values[0], 0.0);
        debug_assert!(values.iter().all(|v| v.is_finite()));
        FbmPath {
            grid,
            hurst,
            seed,
            values,
        }
    }

    /// A path that is identically zero; used to inject noise-free cases into
    /// downstream consumers.
    pub fn zero(grid: TimeGrid, hurst: HurstParam) -> Self {
        FbmPath {
            grid,
            hurst,
            seed: 0,
            values: vec![0.0; grid.n_points()],
        }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn hurst(&self) -> HurstParam {
        self.hurst
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Increment over `[t_k, t_{k+1}]`.
    pub fn increment(&self, k: usize) -> f64 {
        self.values[k + 1] - self.values[k]
    }

    pub fn scale(&self, c: f64) -> Self {
        FbmPath {
            grid: self.grid,
            hurst: self.hurst,
            seed: self.seed,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

/// fBm covariance `R_H(t,s) = ½(t^{2H} + s^{2H} − |t−s|^{2H})`.
pub fn fbm_covariance(h: HurstParam, s: f64, t: f64) -> Result<f64> {
    if s < 0.0 || t < 0.0 {
        return Err(Error::domain(format!(
            "covariance needs s, t >= 0, got ({s}, {t})"
        )));
    }
    let two_h = h.two_h();
    Ok(0.5 * (t.powf(two_h) + s.powf(two_h) - (t - s).abs().powf(two_h)))
}

/// Kernel normalization `c_H = (H(2H−1) / β(2−2H, H−1/2))^{1/2}`.
///
/// The argument range makes both Beta arguments positive, so the constant is
/// finite and positive; it vanishes as `H ↓ 1/2`.
pub fn c_h_constant(h: HurstParam) -> f64 {
    let hv = h.value();
    (hv * (2.0 * hv - 1.0) / beta(2.0 - 2.0 * hv, hv - 0.5)).sqrt()
}

/// Left-point Riemann-Stieltjes sum `Σ φ(t_k)(b^H(t_{k+1}) − b^H(t_k))`,
/// the Young integral of `φ` against the path for `H > 1/2`.
pub fn young_integral(phi: &[f64], path: &FbmPath) -> Result<f64> {
    if phi.len() != path.values().len() {
        return Err(Error::LengthMismatch {
            expected: path.values().len(),
            got: phi.len(),
        });
    }
    Ok(phi
        .iter()
        .zip(path.values().windows(2))
        .map(|(p, w)| p * (w[1] - w[0]))
        .sum())
}
