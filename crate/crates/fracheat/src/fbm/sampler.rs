//! Exact (Cholesky) and fast (circulant embedding) fBm samplers.
//!
//! Both samplers draw the same law: values at the interior grid points are a
//! centered Gaussian vector with covariance `R_H(t_i, t_j)`. The Cholesky
//! route factors that covariance directly and is exact in distribution; the
//! circulant route embeds the stationary increment covariance in a circulant
//! matrix and diagonalizes it with an FFT (Davies-Harte), which is
//! `O(n log n)` per path. For `H > 1/2` the embedding is nonnegative
//! definite in theory; a rounding-level negative eigenvalue triggers a
//! silent fail-over to the Cholesky sampler, recorded on the sampler.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{fbm_covariance, FbmPath, HurstParam, TimeGrid};
use crate::error::{Error, Result};
use crate::rng::{derive_rng, DOMAIN_FBM_CHOLESKY, DOMAIN_FBM_CIRCULANT};

/// Exact sampler: covariance factored once per `(grid, H)`, reusable across
/// seeds.
#[derive(Debug, Clone)]
pub struct CholeskySampler {
    grid: TimeGrid,
    hurst: HurstParam,
    /// Row-major lower triangle, row i holding i+1 entries.
    lower: Vec<Vec<f64>>,
}

impl CholeskySampler {
    pub fn new(hurst: HurstParam, grid: TimeGrid) -> Result<Self> {
        Self::with_jitter(hurst, grid, 0.0)
    }

    /// As [`CholeskySampler::new`], adding `jitter` to the covariance
    /// diagonal. Off by default; a jitter of at most 1e-12 is enough to
    /// absorb rounding-level pivot failures on fine grids.
    pub fn with_jitter(hurst: HurstParam, grid: TimeGrid, jitter: f64) -> Result<Self> {
        let n = grid.n_steps();
        let times: Vec<f64> = (1..=n).map(|k| grid.point(k)).collect();
        let mut cov = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v = fbm_covariance(hurst, times[i], times[j])?;
                cov[i][j] = v;
                cov[j][i] = v;
            }
            cov[i][i] += jitter;
        }
        let lower = cholesky_lower(&cov)?;
        Ok(CholeskySampler { grid, hurst, lower })
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn sample(&self, seed: u64) -> FbmPath {
        let n = self.grid.n_steps();
        let mut rng = derive_rng(seed, DOMAIN_FBM_CHOLESKY, 0, 0);
        let normals: Vec<f64> = (0..n)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let mut values = vec![0.0; n + 1];
        for i in 0..n {
            let mut acc = 0.0;
            for (j, lij) in self.lower[i].iter().enumerate() {
                acc += lij * normals[j];
            }
            values[i + 1] = acc;
        }
        FbmPath::from_parts(self.grid, self.hurst, seed, values)
    }
}

fn cholesky_lower(cov: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = cov.len();
    let mut lower: Vec<Vec<f64>> = (0..n).map(|i| vec![0.0; i + 1]).collect();
    for i in 0..n {
        for j in 0..=i {
            let dot: f64 = lower[i][..j]
                .iter()
                .zip(&lower[j][..j])
                .map(|(a, b)| a * b)
                .sum();
            let acc = cov[i][j] - dot;
            if i == j {
                if acc <= 0.0 {
                    return Err(Error::NotPositiveDefinite { pivot: i });
                }
                lower[i][j] = acc.sqrt();
            } else {
                lower[i][j] = acc / lower[j][j];
            }
        }
    }
    Ok(lower)
}

/// Davies-Harte sampler with Cholesky fail-over.
pub struct CirculantSampler {
    grid: TimeGrid,
    hurst: HurstParam,
    /// `sqrt(eigenvalue)` of the circulant embedding, length `2n`; `None`
    /// when the sampler fell back to Cholesky.
    sqrt_eigs: Option<Vec<f64>>,
    fft: Arc<dyn Fft<f64>>,
    fallback: Option<CholeskySampler>,
}

impl CirculantSampler {
    pub fn new(hurst: HurstParam, grid: TimeGrid) -> Result<Self> {
        let n = grid.n_steps();
        let mut planner = FftPlanner::new();
        if n < 2 {
            // Degenerate embedding; a single step is just one Gaussian.
            return Ok(CirculantSampler {
                grid,
                hurst,
                sqrt_eigs: None,
                fft: planner.plan_fft_forward(2),
                fallback: Some(CholeskySampler::new(hurst, grid)?),
            });
        }
        let m = 2 * n;
        // Unit-step fractional Gaussian noise autocovariance
        // γ(k) = ½(|k+1|^{2H} − 2|k|^{2H} + |k−1|^{2H}); first circulant row
        // [γ(0), γ(1), .., γ(n), γ(n−1), .., γ(1)].
        let two_h = hurst.two_h();
        let gamma = |k: usize| -> f64 {
            let k = k as f64;
            0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
        };
        let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
        for k in 0..=n {
            row.push(Complex::new(gamma(k), 0.0));
        }
        for k in (1..n).rev() {
            row.push(Complex::new(gamma(k), 0.0));
        }
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut row);
        let max_eig = row.iter().map(|c| c.re).fold(0.0f64, f64::max);
        let min_eig = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 * max_eig {
            // Theory says nonnegative for H in (1/2, 1); guard rounding.
            return Ok(CirculantSampler {
                grid,
                hurst,
                sqrt_eigs: None,
                fft,
                fallback: Some(CholeskySampler::new(hurst, grid)?),
            });
        }
        let sqrt_eigs = row.iter().map(|c| c.re.max(0.0).sqrt()).collect();
        Ok(CirculantSampler {
            grid,
            hurst,
            sqrt_eigs: Some(sqrt_eigs),
            fft,
            fallback: None,
        })
    }

    /// True when the embedding was rejected and sampling routes through the
    /// exact Cholesky factorization instead.
    pub fn used_fallback(&self) -> bool {
        self.fallback.is_some()
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn sample(&self, seed: u64) -> FbmPath {
        if let Some(fallback) = &self.fallback {
            return fallback.sample(seed);
        }
        let sqrt_eigs = self.sqrt_eigs.as_ref().unwrap();
        let n = self.grid.n_steps();
        let m = 2 * n;
        let mf = m as f64;
        let mut rng = derive_rng(seed, DOMAIN_FBM_CIRCULANT, 0, 0);
        let mut normal = || rng.sample::<f64, _>(StandardNormal);

        let mut w = vec![Complex::new(0.0, 0.0); m];
        w[0] = Complex::new(sqrt_eigs[0] / mf.sqrt() * normal(), 0.0);
        let half_scale = 1.0 / (2.0 * mf).sqrt();
        for k in 1..n {
            let (xi, eta) = (normal(), normal());
            let amp = sqrt_eigs[k] * half_scale;
            w[k] = Complex::new(amp * xi, amp * eta);
            w[m - k] = Complex::new(amp * xi, -amp * eta);
        }
        w[n] = Complex::new(sqrt_eigs[n] / mf.sqrt() * normal(), 0.0);

        self.fft.process(&mut w);

        // First n outputs are unit-step fGn; rescale increments to Δt and
        // accumulate. Conjugate symmetry makes the imaginary parts zero up
        // to rounding.
        let step_scale = self.grid.dt().powf(self.hurst.value());
        let mut values = vec![0.0; n + 1];
        for k in 0..n {
            values[k + 1] = values[k] + step_scale * w[k].re;
        }
        FbmPath::from_parts(self.grid, self.hurst, seed, values)
    }
}

/// One-shot exact sample; prefer [`CholeskySampler`] when drawing many paths
/// on the same grid.
pub fn sample_fbm_cholesky(h: HurstParam, grid: TimeGrid, seed: u64) -> Result<FbmPath> {
    Ok(CholeskySampler::new(h, grid)?.sample(seed))
}

/// One-shot circulant sample; prefer [`CirculantSampler`] when drawing many
/// paths on the same grid.
pub fn sample_fbm_circulant(h: HurstParam, grid: TimeGrid, seed: u64) -> Result<FbmPath> {
    Ok(CirculantSampler::new(h, grid)?.sample(seed))
}
