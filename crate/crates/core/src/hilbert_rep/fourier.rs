//! FFT-based building blocks: per-axis line iteration, the unitary grid
//! Fourier transform, spectral multipliers and trigonometric resampling.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{GridSpec, GridWavefunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FftDirection {
    /// (2π)^{−n/2} ∫ e^{−ix·y} ψ(x) dⁿx
    Forward,
    /// (2π)^{−n/2} ∫ e^{+ix·y} ψ(x) dⁿx
    Inverse,
}

/// Applies `f(base, line)` to every line along `axis`, writing results back.
/// `base` is the flat index of the line's first sample.
pub(crate) fn map_lines(
    spec: &GridSpec,
    values: &mut [Complex64],
    axis: usize,
    mut f: impl FnMut(usize, &mut [Complex64]),
) {
    let np = spec.points;
    let stride = np.pow((spec.n - 1 - axis) as u32);
    let outer = np.pow(axis as u32);
    let mut buf = vec![ZERO; np];
    for o in 0..outer {
        for i in 0..stride {
            let base = o * np * stride + i;
            for (k, b) in buf.iter_mut().enumerate() {
                *b = values[base + k * stride];
            }
            f(base, &mut buf);
            for (k, b) in buf.iter().enumerate() {
                values[base + k * stride] = *b;
            }
        }
    }
}

pub(crate) struct LineFft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl LineFft {
    pub(crate) fn new(points: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(points);
        let inverse = planner.plan_fft_inverse(points);
        let len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        LineFft { forward, inverse, scratch: vec![ZERO; len] }
    }

    pub(crate) fn forward(&mut self, line: &mut [Complex64]) {
        self.forward.process_with_scratch(line, &mut self.scratch);
    }

    pub(crate) fn inverse(&mut self, line: &mut [Complex64]) {
        self.inverse.process_with_scratch(line, &mut self.scratch);
    }

    /// Multiplies the periodic spectrum of `line` by `mult[m]`.
    pub(crate) fn apply_multiplier(&mut self, line: &mut [Complex64], mult: &[Complex64]) {
        self.forward(line);
        let inv_n = 1.0 / line.len() as f64;
        for (v, m) in line.iter_mut().zip(mult) {
            *v *= m * inv_n;
        }
        self.inverse(line);
    }
}

/// Signed mode numbers m' ∈ [−N/2, N/2) in FFT order.
pub(crate) fn mode_numbers(points: usize) -> Vec<i64> {
    let np = points as i64;
    (0..np).map(|m| if m < np / 2 { m } else { m - np }).collect()
}

/// Wavenumbers 2πm'/L in FFT order.
pub(crate) fn wavenumbers(spec: &GridSpec) -> Vec<f64> {
    mode_numbers(spec.points).into_iter().map(|m| 2.0 * PI * m as f64 / spec.length).collect()
}

/// Multiplier of i∂ (the Nyquist mode is dropped).
pub(crate) fn momentum_multiplier(spec: &GridSpec) -> Vec<Complex64> {
    let half = spec.points / 2;
    wavenumbers(spec)
        .into_iter()
        .enumerate()
        .map(|(m, k)| if m == half { ZERO } else { Complex64::new(-k, 0.0) })
        .collect()
}

/// Multiplier of ψ(x) ↦ ψ(x − q); exact circular shift for lattice q.
pub(crate) fn shift_multiplier(spec: &GridSpec, q: f64) -> Vec<Complex64> {
    wavenumbers(spec).into_iter().map(|k| Complex64::from_polar(1.0, -k * q)).collect()
}

pub(crate) fn apply_axis_multiplier(psi: &mut GridWavefunction, axis: usize, mult: &[Complex64]) {
    let spec = *psi.spec();
    let mut fft = LineFft::new(spec.points);
    map_lines(&spec, psi.values_mut(), axis, |_, line| fft.apply_multiplier(line, mult));
}

/// Unitary transform from the grid (N, L) to its dual grid (N, 2πN/L),
/// sampling the continuum Fourier transform at y_m = (m − N/2)·2π/L.
pub fn grid_fft(psi: &GridWavefunction, direction: FftDirection) -> GridWavefunction {
    let spec = *psi.spec();
    let out_spec = spec.dual();
    let mut values = psi.values().to_vec();
    let scale = spec.spacing() / (2.0 * PI).sqrt();
    let mut fft = LineFft::new(spec.points);
    // x_j y_m = 2π(j − N/2)(m − N/2)/N and N ≡ 0 mod 4, so the centering
    // reduces to the sign (−1)^{j+m}.
    for axis in 0..spec.n {
        map_lines(&spec, &mut values, axis, |_, line| {
            for (j, v) in line.iter_mut().enumerate() {
                if j % 2 == 1 {
                    *v = -*v;
                }
            }
            match direction {
                FftDirection::Forward => fft.forward(line),
                FftDirection::Inverse => fft.inverse(line),
            }
            for (m, v) in line.iter_mut().enumerate() {
                *v *= if m % 2 == 1 { -scale } else { scale };
            }
        });
    }
    GridWavefunction::new(out_spec, values).expect("transform of finite data is finite")
}

/// Band-limited interpolant of one periodic line, evaluated off-lattice.
pub(crate) struct TrigInterpolant {
    coeffs: Vec<Complex64>,
    length: f64,
    origin: f64,
}

impl TrigInterpolant {
    pub(crate) fn new(fft: &mut LineFft, line: &[Complex64], spec: &GridSpec) -> Self {
        let mut coeffs = line.to_vec();
        fft.forward(&mut coeffs);
        let inv_n = 1.0 / coeffs.len() as f64;
        coeffs.iter_mut().for_each(|c| *c *= inv_n);
        TrigInterpolant { coeffs, length: spec.length, origin: -0.5 * spec.length }
    }

    /// Value at `t`; zero outside [−L/2, L/2).
    pub(crate) fn eval(&self, t: f64) -> Complex64 {
        let u = t - self.origin;
        if !(0.0..self.length).contains(&u) {
            return ZERO;
        }
        let np = self.coeffs.len();
        let half = np / 2;
        let theta = 2.0 * PI * u / self.length;
        let w = Complex64::from_polar(1.0, theta);
        let mut e = Complex64::from_polar(1.0, -theta * (half as f64 - 1.0));
        let mut acc = self.coeffs[half] * (theta * half as f64).cos();
        for mp in -(half as i64 - 1)..(half as i64) {
            let m = if mp < 0 { (mp + np as i64) as usize } else { mp as usize };
            acc += self.coeffs[m] * e;
            e *= w;
        }
        acc
    }
}

/// Replaces ψ by x ↦ ψ(x with x_axis → d·x_axis + Σ_b c_b x_b).
pub(crate) fn shear_axis(psi: &mut GridWavefunction, axis: usize, d: f64, c: &[f64]) {
    let spec = *psi.spec();
    let coords = spec.coords();
    let mut fft = LineFft::new(spec.points);
    let mut idx = vec![0usize; spec.n];
    map_lines(&spec, psi.values_mut(), axis, |base, line| {
        spec.unravel(base, &mut idx);
        let s: f64 = (0..spec.n).filter(|&b| b != axis).map(|b| c[b] * coords[idx[b]]).sum();
        let interp = TrigInterpolant::new(&mut fft, line, &spec);
        for (k, v) in line.iter_mut().enumerate() {
            *v = interp.eval(d * coords[k] + s);
        }
    });
}

/// out(x_k) = scale · Σ_j e^{i·sign·λ x_k x_j} ψ(x_j) Δx along every axis.
pub(crate) fn kernel_transform(psi: &GridWavefunction, lambda: f64, sign: f64) -> GridWavefunction {
    let spec = *psi.spec();
    let coords = spec.coords();
    let np = spec.points;
    let scale = (lambda.abs() / (2.0 * PI)).sqrt() * spec.spacing();
    let kernel: Vec<Complex64> = (0..np * np)
        .map(|kj| Complex64::from_polar(scale, sign * lambda * coords[kj / np] * coords[kj % np]))
        .collect();
    let mut out = psi.clone();
    let mut tmp = vec![ZERO; np];
    for axis in 0..spec.n {
        map_lines(&spec, out.values_mut(), axis, |_, line| {
            for (k, t) in tmp.iter_mut().enumerate() {
                let row = &kernel[k * np..(k + 1) * np];
                *t = row.iter().zip(line.iter()).map(|(a, b)| a * b).sum();
            }
            line.copy_from_slice(&tmp);
        });
    }
    out
}
