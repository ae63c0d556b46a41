//! The operators ξ, Q̂/P̂/Î, ρ and υ on grid wavefunctions.
//!
//! Conventions (with λ from [`RepConfig`]):
//!
//! ```text
//! ξ(Υ(p,q,ι))ψ(x) = e^{iλ(ι + x·p − ½p·q)} ψ(x − q)
//! Q̂_i = λx_i,  P̂_i = i∂_i,  Î = λ
//! ρ(Σ⁺(β))ψ(x)   = e^{(iλ/2) xᵗβx} ψ(x)
//! ρ(Σ°(α))ψ(x)   = |det α|^{−1/2} ψ(α^{−t}x)
//! ρ(ζ)ψ(x)       = (|λ|/2π)^{n/2} ∫ e^{iλx·y} ψ(y) dⁿy
//! ρ(Σ⁻(γ))       = ρ(ζ)⁻¹ ρ(Σ⁺(−γ)) ρ(ζ)
//! ```
//!
//! so that ρ(Σ)ξ(Υ(z,ι))ρ(Σ)⁻¹ = ξ(Υ(Σz,ι)) for every generator.

use num_complex::Complex64;
use serde::Serialize;

use super::fourier::{apply_axis_multiplier, kernel_transform, momentum_multiplier, shear_axis, shift_multiplier};
use super::{phase_residual, GridWavefunction, HilbertError, RepConfig};
use crate::aut_group::{is_central_invariant, AutElement};
use crate::lie_algebra::enveloping::{central_power, envelope};
use crate::lie_algebra::{hsp_structure_constants, AlgebraBasis, Generator, WeylPoly};
use crate::mackey::induce_rep_closed;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::symplectic::{sp_factorize, SymplecticMatrix};
use crate::wh_group::WHElement;

const SYMMETRY_TOL: f64 = 1e-9;

fn check_n(psi: &GridWavefunction, n: usize) -> Result<(), HilbertError> {
    if psi.spec().n != n {
        return Err(HilbertError::DimensionMismatch(psi.spec().n, n));
    }
    Ok(())
}

fn check_square(m: &Matrix<f64>, psi: &GridWavefunction, name: &'static str) -> Result<(), HilbertError> {
    if m.rows() != m.cols() {
        return Err(HilbertError::InvalidGrid(format!("{name} must be square")));
    }
    check_n(psi, m.rows())
}

/// ξ(g)ψ via the closed-form descriptor of the induced representation.
pub fn xi_apply(g: &WHElement<f64>, psi: &GridWavefunction, cfg: &RepConfig) -> Result<GridWavefunction, HilbertError> {
    cfg.validate()?;
    check_n(psi, g.n())?;
    let desc = induce_rep_closed(g, &cfg.lambda)?;
    let spec = *psi.spec();
    let mut out = psi.clone();
    for (axis, &q) in desc.shift.iter().enumerate() {
        if q != 0.0 {
            apply_axis_multiplier(&mut out, axis, &shift_multiplier(&spec, q));
        }
    }
    out.map_points(|x, v| *v *= Complex64::from_polar(1.0, desc.phase_at(x)));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalOperator {
    Q(usize),
    P(usize),
    I,
}

/// Q̂_i = λx_i, P̂_i = i∂_i (spectral), Î = λ.
pub fn pq_operators(
    psi: &GridWavefunction,
    which: CanonicalOperator,
    cfg: &RepConfig,
) -> Result<GridWavefunction, HilbertError> {
    cfg.validate()?;
    let n = psi.spec().n;
    match which {
        CanonicalOperator::Q(i) | CanonicalOperator::P(i) if i >= n => Err(HilbertError::DimensionMismatch(i + 1, n)),
        CanonicalOperator::Q(i) => {
            let mut out = psi.clone();
            out.map_points(|x, v| *v *= cfg.lambda * x[i]);
            Ok(out)
        }
        CanonicalOperator::P(i) => {
            let mut out = psi.clone();
            apply_axis_multiplier(&mut out, i, &momentum_multiplier(psi.spec()));
            Ok(out)
        }
        CanonicalOperator::I => Ok(psi.scale(Complex64::new(cfg.lambda, 0.0))),
    }
}

/// ρ(Σ⁺(β)): multiplication by e^{(iλ/2) xᵗβx}.
pub fn rho_plus(beta: &Matrix<f64>, psi: &GridWavefunction, cfg: &RepConfig) -> Result<GridWavefunction, HilbertError> {
    cfg.validate()?;
    check_square(beta, psi, "beta")?;
    if !beta.is_symmetric(SYMMETRY_TOL) {
        return Err(HilbertError::NotSymmetric("beta"));
    }
    let mut out = psi.clone();
    out.map_points(|x, v| {
        let quad = crate::scalar::dot(x, &beta.mul_vec(x));
        *v *= Complex64::from_polar(1.0, 0.5 * cfg.lambda * quad);
    });
    Ok(out)
}

/// Fraction of ‖ψ‖² that [`rho_unitary`] pushes outside the box: the mass
/// at points y with αᵗy outside [−L/2, L/2)ⁿ.
pub fn dilation_escape(alpha: &Matrix<f64>, psi: &GridWavefunction) -> Result<f64, HilbertError> {
    check_square(alpha, psi, "alpha")?;
    let at = alpha.transpose();
    let half = 0.5 * psi.spec().length;
    let (mut lost, mut total) = (0.0, 0.0);
    let mut scan = psi.clone();
    scan.map_points(|y, v| {
        let m = v.norm_sqr();
        total += m;
        if at.mul_vec(y).iter().any(|c| !(-half..half).contains(c)) {
            lost += m;
        }
    });
    Ok(if total == 0.0 { 0.0 } else { lost / total })
}

/// ρ(Σ°(α))ψ(x) = |det α|^{−1/2} ψ(α^{−t}x), resampled with the band-limited
/// interpolant along a sequence of single-axis shears. Mass leaving the box
/// beyond `boundary_mass_limit` is reported through `log::warn!`.
pub fn rho_unitary(alpha: &Matrix<f64>, psi: &GridWavefunction, cfg: &RepConfig) -> Result<GridWavefunction, HilbertError> {
    cfg.validate()?;
    check_square(alpha, psi, "alpha")?;
    let det = alpha.determinant().map_err(|_| HilbertError::SingularAlpha)?;
    if det == 0.0 || !det.is_finite() {
        return Err(HilbertError::SingularAlpha);
    }
    let escape = dilation_escape(alpha, psi)?;
    if escape > cfg.boundary_mass_limit {
        log::warn!("rho_unitary: {escape:e} of the norm leaves the box");
    }
    let m = alpha.inverse().map_err(|_| HilbertError::SingularAlpha)?.transpose();
    let mut out = compose_linear(psi, &m);
    let c = det.abs().powf(-0.5);
    out.values_mut().iter_mut().for_each(|v| *v *= c);
    Ok(out)
}

/// x ↦ ψ(Mx), with M = Pᵀ·L·U split into axis permutation and single-axis
/// shears: L = B₂⋯Bₙ, U = Cₙ⋯C₁.
fn compose_linear(psi: &GridWavefunction, m: &Matrix<f64>) -> GridWavefunction {
    let n = m.rows();
    let (perm, lower, upper) = lu_pivoted(m);
    let mut out = permute_axes(psi, &perm);
    for a in 1..n {
        let c: Vec<f64> = (0..n).map(|b| if b < a { lower[(a, b)] } else { 0.0 }).collect();
        if c.iter().any(|&v| v != 0.0) {
            shear_axis(&mut out, a, 1.0, &c);
        }
    }
    for a in (0..n).rev() {
        let c: Vec<f64> = (0..n).map(|b| if b > a { upper[(a, b)] } else { 0.0 }).collect();
        let d = upper[(a, a)];
        if d != 1.0 || c.iter().any(|&v| v != 0.0) {
            shear_axis(&mut out, a, d, &c);
        }
    }
    out
}

/// P·M = L·U with partial pivoting; `perm[r]` is the row of M in row r.
fn lu_pivoted(m: &Matrix<f64>) -> (Vec<usize>, Matrix<f64>, Matrix<f64>) {
    let n = m.rows();
    let mut u = m.clone();
    let mut l = Matrix::<f64>::identity(n);
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n).max_by(|&a, &b| u[(a, k)].abs().total_cmp(&u[(b, k)].abs())).unwrap();
        if p != k {
            perm.swap(p, k);
            for j in 0..n {
                let t = u[(k, j)];
                u[(k, j)] = u[(p, j)];
                u[(p, j)] = t;
            }
            for j in 0..k {
                let t = l[(k, j)];
                l[(k, j)] = l[(p, j)];
                l[(p, j)] = t;
            }
        }
        for r in k + 1..n {
            let f = u[(r, k)] / u[(k, k)];
            l[(r, k)] = f;
            for j in k..n {
                u[(r, j)] -= f * u[(k, j)];
            }
        }
    }
    (perm, l, u)
}

/// x ↦ ψ(Pᵀx) where (Pᵀx)_{perm[r]} = x_r.
fn permute_axes(psi: &GridWavefunction, perm: &[usize]) -> GridWavefunction {
    if perm.iter().enumerate().all(|(r, &p)| r == p) {
        return psi.clone();
    }
    let spec = *psi.spec();
    let mut out = psi.clone();
    let (mut idx, mut src) = (vec![0; spec.n], vec![0; spec.n]);
    for (flat, v) in out.values_mut().iter_mut().enumerate() {
        spec.unravel(flat, &mut idx);
        for (r, &p) in perm.iter().enumerate() {
            src[p] = idx[r];
        }
        *v = psi.values()[spec.ravel(&src)];
    }
    out
}

/// ρ(ζ)ψ(x) = (|λ|/2π)^{n/2} ∫ e^{iλx·y}ψ(y)dⁿy, evaluated on the same grid.
/// Exactly unitary on [`super::GridSpec::self_dual`] boxes.
pub fn rho_zeta(psi: &GridWavefunction, cfg: &RepConfig) -> Result<GridWavefunction, HilbertError> {
    cfg.validate()?;
    Ok(kernel_transform(psi, cfg.lambda, 1.0))
}

/// ρ(ζ)⁻¹ = ρ(ζ)†.
pub fn rho_zeta_inverse(psi: &GridWavefunction, cfg: &RepConfig) -> Result<GridWavefunction, HilbertError> {
    cfg.validate()?;
    Ok(kernel_transform(psi, cfg.lambda, -1.0))
}

/// ρ(Σ⁻(γ)) = ρ(ζ)⁻¹ ρ(Σ⁺(−γ)) ρ(ζ).
pub fn rho_minus(gamma: &Matrix<f64>, psi: &GridWavefunction, cfg: &RepConfig) -> Result<GridWavefunction, HilbertError> {
    check_square(gamma, psi, "gamma")?;
    if !gamma.is_symmetric(SYMMETRY_TOL) {
        return Err(HilbertError::NotSymmetric("gamma"));
    }
    if gamma.is_zero() {
        return Ok(psi.clone());
    }
    let t = rho_zeta(psi, cfg)?;
    let t = rho_plus(&gamma.neg(), &t, cfg)?;
    rho_zeta_inverse(&t, cfg)
}

fn is_identity(m: &Matrix<f64>) -> bool {
    m.max_abs_diff(&Matrix::identity(m.rows())) == 0.0
}

/// ρ(Σ) = ρ(Σ⁻(γ)) ρ(Σ°(α)) ρ(Σ⁺(β)) ρ(ζ)^ε from the factorization of Σ.
pub fn rho_sigma(
    s: &SymplecticMatrix<f64>,
    psi: &GridWavefunction,
    cfg: &RepConfig,
) -> Result<GridWavefunction, HilbertError> {
    check_n(psi, s.n())?;
    let f = sp_factorize(s)?.factors;
    let mut out = if f.epsilon % 2 == 1 { rho_zeta(psi, cfg)? } else { psi.clone() };
    if !f.beta.is_zero() {
        out = rho_plus(&f.beta, &out, cfg)?;
    }
    if !is_identity(&f.alpha) {
        out = rho_unitary(&f.alpha, &out, cfg)?;
    }
    rho_minus(&f.gamma, &out, cfg)
}

/// ρ(Σ)⁻¹, inverting the factors of [`rho_sigma`] in reverse order.
pub fn rho_sigma_inverse(
    s: &SymplecticMatrix<f64>,
    psi: &GridWavefunction,
    cfg: &RepConfig,
) -> Result<GridWavefunction, HilbertError> {
    check_n(psi, s.n())?;
    let f = sp_factorize(s)?.factors;
    let mut out = rho_minus(&f.gamma.neg(), psi, cfg)?;
    if !is_identity(&f.alpha) {
        let inv = f.alpha.inverse().map_err(|_| HilbertError::SingularAlpha)?;
        out = rho_unitary(&inv, &out, cfg)?;
    }
    if !f.beta.is_zero() {
        out = rho_plus(&f.beta.neg(), &out, cfg)?;
    }
    if f.epsilon % 2 == 1 {
        out = rho_zeta_inverse(&out, cfg)?;
    }
    Ok(out)
}

/// υ(Ω(1,Σ,z,ι))ψ = ξ(Υ(z,ι)) ρ(Σ) ψ, with the finite-dimensional factor
/// σ(Σ) taken trivial.
pub fn upsilon_apply(g: &AutElement<f64>, psi: &GridWavefunction, cfg: &RepConfig) -> Result<GridWavefunction, HilbertError> {
    if !is_central_invariant(g) {
        return Err(HilbertError::NotCentralInvariant);
    }
    let t = rho_sigma(g.sigma(), psi, cfg)?;
    xi_apply(&g.translation(), &t, cfg)
}

/// 1 − |⟨a,b⟩|/(‖a‖‖b‖) for a = ρ(Σ)ξ(g)ρ(Σ)⁻¹ψ and b = ξ(Υ(Σz,ι))ψ.
pub fn intertwine_residual(
    s: &SymplecticMatrix<f64>,
    g: &WHElement<f64>,
    psi: &GridWavefunction,
    cfg: &RepConfig,
) -> Result<f64, HilbertError> {
    let a = rho_sigma_inverse(s, psi, cfg)?;
    let a = xi_apply(g, &a, cfg)?;
    let a = rho_sigma(s, &a, cfg)?;
    let moved = WHElement::from_z(&s.apply(&g.z()), *g.iota()).expect("same shape");
    let b = xi_apply(&moved, psi, cfg)?;
    phase_residual(&a, &b)
}

/// Applies π(W) with Q ↦ λx, P ↦ i∂, I ↦ iλ to a normal-ordered polynomial.
fn apply_weyl(poly: &WeylPoly, psi: &GridWavefunction, cfg: &RepConfig) -> Result<GridWavefunction, HilbertError> {
    let mut acc = GridWavefunction::zeros(*psi.spec());
    for (mono, coef) in poly.terms() {
        let mut t = psi.clone();
        for (i, &k) in mono.p.iter().enumerate() {
            for _ in 0..k {
                t = pq_operators(&t, CanonicalOperator::P(i), cfg)?;
            }
        }
        for (i, &k) in mono.q.iter().enumerate() {
            for _ in 0..k {
                t = pq_operators(&t, CanonicalOperator::Q(i), cfg)?;
            }
        }
        let c = Complex64::new(0.0, cfg.lambda).powu(mono.i) * coef.to_f64();
        acc = acc.add(&t.scale(c))?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridRelationResidual {
    pub x: String,
    pub y: String,
    /// ‖[π(ẽX), π(ẽY)]ψ − π(I^s ẽ([X,Y]) + c I^{2s})ψ‖ / ‖ψ‖.
    pub residual: f64,
}

/// Checks every enveloping bracket relation of hsp(2n) as an operator
/// identity on `psi`. The commutator side is computed on the grid; the
/// bracket side comes from the structure constants.
pub fn enveloping_grid_residuals(psi: &GridWavefunction, cfg: &RepConfig) -> Result<Vec<GridRelationResidual>, HilbertError> {
    let n = psi.spec().n;
    let relations = crate::lie_algebra::enveloping::enveloping_relations(n, false)
        .map_err(|(x, y, rem)| HilbertError::Enveloping(format!("{x}, {y}"), rem))?;
    let basis = AlgebraBasis::new(n);
    let sc = hsp_structure_constants(n);
    let image = |g: Generator| envelope(n, g, false).expect("basis generator");
    let norm = psi.norm();
    let mut out = Vec::with_capacity(relations.len());
    for rel in relations {
        let (ex, ey) = (image(rel.x), image(rel.y));
        let xy = apply_weyl(&ex, &apply_weyl(&ey, psi, cfg)?, cfg)?;
        let yx = apply_weyl(&ey, &apply_weyl(&ex, psi, cfg)?, cfg)?;
        let lhs = xy.sub(&yx)?;
        let (ia, ib) = (basis.index(rel.x).unwrap(), basis.index(rel.y).unwrap());
        let mut bracket = WeylPoly::zero(n);
        for (c, v) in sc.get(ia, ib) {
            bracket = bracket.add(&image(basis.generator(*c)).scale(v));
        }
        let s = central_power(rel.x, rel.y);
        let mut rhs = apply_weyl(&bracket, psi, cfg)?.scale(Complex64::new(0.0, cfg.lambda).powu(s));
        let central = Complex64::new(0.0, cfg.lambda).powu(2 * s) * rel.central.to_f64();
        rhs = rhs.add(&psi.scale(central))?;
        let residual = lhs.sub(&rhs)?.norm() / norm;
        out.push(GridRelationResidual { x: rel.x.to_string(), y: rel.y.to_string(), residual });
    }
    Ok(out)
}
