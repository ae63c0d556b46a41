//! Unitary representations of H(n) and HSp(2n) on a discretized L²(Rⁿ).
//!
//! Wavefunctions live on a periodic box [−L/2, L/2)ⁿ sampled with N points
//! per axis. Translations, derivatives and off-lattice resampling are
//! spectral (FFT based). Operator identities that only hold up to a global
//! phase are compared with [`phase_residual`].

mod fourier;
pub mod io;
mod ops;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mackey::MackeyError;
use crate::symplectic::SpError;

pub use fourier::{grid_fft, FftDirection};
pub use ops::{
    dilation_escape, enveloping_grid_residuals, intertwine_residual, pq_operators, rho_minus, rho_plus,
    rho_sigma, rho_sigma_inverse, rho_unitary, rho_zeta, rho_zeta_inverse, upsilon_apply, xi_apply,
    CanonicalOperator, GridRelationResidual,
};

#[derive(Debug, Error)]
pub enum HilbertError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("wavefunctions live on different grids")]
    SpecMismatch,
    #[error("expected {expected} samples, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("wavefunction has non-finite samples")]
    NonFinite,
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0} must be symmetric")]
    NotSymmetric(&'static str),
    #[error("alpha is singular")]
    SingularAlpha,
    #[error("delta != 1: not a symmetry of the commutation relations")]
    NotCentralInvariant,
    #[error(transparent)]
    Symplectic(#[from] SpError),
    #[error(transparent)]
    Mackey(#[from] MackeyError),
    #[error("enveloping relation failed for ({0}): {1}")]
    Enveloping(String, String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed wavefunction file: {0}")]
    Format(String),
}

/// N points per axis on [−L/2, L/2)ⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    #[serde(rename = "N")]
    pub points: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

impl GridSpec {
    pub fn new(n: usize, points: usize, length: f64) -> Result<Self, HilbertError> {
        if n == 0 {
            return Err(HilbertError::InvalidGrid("n must be positive".into()));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(HilbertError::InvalidGrid(format!("N = {points} must be a power of two >= 8")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(HilbertError::InvalidGrid(format!("L = {length} must be positive")));
        }
        Ok(GridSpec { n, points, length })
    }

    /// The box with L² = 2πN/|λ|, on which the sampled Fourier kernel
    /// e^{iλxy} is exactly a unitary DFT.
    pub fn self_dual(n: usize, points: usize, lambda: f64) -> Result<Self, HilbertError> {
        Self::new(n, points, (2.0 * std::f64::consts::PI * points as f64 / lambda.abs()).sqrt())
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Δxⁿ.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    pub fn size(&self) -> usize {
        self.points.pow(self.n as u32)
    }

    pub fn coord(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.coord(j)).collect()
    }

    /// The momentum grid: same N, length 2πN/L.
    pub fn dual(&self) -> Self {
        GridSpec { length: 2.0 * std::f64::consts::PI * self.points as f64 / self.length, ..*self }
    }

    /// Multi-index of a flat (row-major) position.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.points;
            flat /= self.points;
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.points + i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RepConfig {
    pub lambda: f64,
    pub phase_tolerance: f64,
    pub boundary_mass_limit: f64,
}

impl Default for RepConfig {
    fn default() -> Self {
        RepConfig { lambda: 1.0, phase_tolerance: 1e-6, boundary_mass_limit: 1e-12 }
    }
}

impl RepConfig {
    pub fn with_lambda(lambda: f64) -> Result<Self, HilbertError> {
        let cfg = RepConfig { lambda, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HilbertError> {
        if self.lambda == 0.0 || !self.lambda.is_finite() {
            return Err(HilbertError::ZeroLambda);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridWavefunction {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridWavefunction {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self, HilbertError> {
        if values.len() != spec.size() {
            return Err(HilbertError::ValueCount { expected: spec.size(), got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(HilbertError::NonFinite);
        }
        Ok(GridWavefunction { spec, values })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        GridWavefunction { spec, values: vec![Complex64::new(0.0, 0.0); spec.size()] }
    }

    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut psi = Self::zeros(spec);
        psi.map_points(|x, v| *v = f(x));
        psi
    }

    /// Normalized (πσ²)^{−n/4} e^{−|x|²/(2σ²)}.
    pub fn gaussian(spec: GridSpec, sigma: f64) -> Self {
        Self::gaussian_packet(spec, sigma, &vec![0.0; spec.n], &vec![0.0; spec.n])
    }

    /// Normalized Gaussian centered at `center` carrying plane wave e^{ik·x}.
    pub fn gaussian_packet(spec: GridSpec, sigma: f64, center: &[f64], k: &[f64]) -> Self {
        let norm = (std::f64::consts::PI * sigma * sigma).powf(-(spec.n as f64) / 4.0);
        Self::from_fn(spec, |x| {
            let mut r2 = 0.0;
            let mut phase = 0.0;
            for a in 0..x.len() {
                r2 += (x[a] - center[a]).powi(2);
                phase += k[a] * x[a];
            }
            Complex64::from_polar(norm * (-r2 / (2.0 * sigma * sigma)).exp(), phase)
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Calls `f(x, &mut ψ(x))` for every grid point.
    pub fn map_points(&mut self, mut f: impl FnMut(&[f64], &mut Complex64)) {
        let spec = self.spec;
        let coords = spec.coords();
        let mut idx = vec![0usize; spec.n];
        let mut x: Vec<f64> = vec![coords[0]; spec.n];
        for v in self.values.iter_mut() {
            f(&x, v);
            for a in (0..spec.n).rev() {
                idx[a] += 1;
                if idx[a] < spec.points {
                    x[a] = coords[idx[a]];
                    break;
                }
                idx[a] = 0;
                x[a] = coords[0];
            }
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GridWavefunction { spec: self.spec, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HilbertError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HilbertError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self, HilbertError> {
        if self.spec != other.spec {
            return Err(HilbertError::SpecMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(GridWavefunction { spec: self.spec, values })
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spec.cell_volume()).sqrt()
    }

    /// Fraction of ‖ψ‖² within `width` of the box faces.
    pub fn boundary_mass(&self, width: f64) -> f64 {
        let half = 0.5 * self.spec.length;
        let mut edge = 0.0;
        let mut total = 0.0;
        let mut psi = self.clone();
        psi.map_points(|x, v| {
            let m = v.norm_sqr();
            total += m;
            if x.iter().any(|c| c.abs() > half - width) {
                edge += m;
            }
        });
        if total == 0.0 {
            0.0
        } else {
            edge / total
        }
    }
}

/// Σ conj(a)·b·Δxⁿ.
pub fn grid_inner(a: &GridWavefunction, b: &GridWavefunction) -> Result<Complex64, HilbertError> {
    if a.spec != b.spec {
        return Err(HilbertError::SpecMismatch);
    }
    let s: Complex64 = a.values.iter().zip(&b.values).map(|(x, y)| x.conj() * y).sum();
    Ok(s * a.spec.cell_volume())
}

/// Agreement of two states up to a global phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseComparison {
    /// 1 − |⟨a,b⟩|/(‖a‖‖b‖).
    pub residual: f64,
    /// arg⟨a,b⟩: the phase e^{iθ} with b ≈ e^{iθ}a.
    pub phase: f64,
}

pub fn phase_compare(a: &GridWavefunction, b: &GridWavefunction) -> Result<PhaseComparison, HilbertError> {
    let ip = grid_inner(a, b)?;
    let denom = a.norm() * b.norm();
    if denom == 0.0 {
        let residual = if a.norm() == b.norm() { 0.0 } else { 1.0 };
        return Ok(PhaseComparison { residual, phase: 0.0 });
    }
    Ok(PhaseComparison { residual: (1.0 - ip.norm() / denom).max(0.0), phase: ip.arg() })
}

/// 1 − |⟨a,b⟩|/(‖a‖‖b‖).
pub fn phase_residual(a: &GridWavefunction, b: &GridWavefunction) -> Result<f64, HilbertError> {
    Ok(phase_compare(a, b)?.residual)
}

/// ‖a − b‖/‖b‖.
pub fn relative_error(a: &GridWavefunction, b: &GridWavefunction) -> Result<f64, HilbertError> {
    let nb = b.norm();
    let d = a.sub(b)?.norm();
    Ok(if nb == 0.0 { d } else { d / nb })
}
