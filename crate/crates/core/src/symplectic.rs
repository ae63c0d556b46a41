//! Real symplectic matrices and the block-triangular factorization
//!
//! ```text
//! Σ = Σ⁻(γ) Σ°(α) Σ⁺(β) ζ^ε,
//! Σ⁻(γ) = [[1, 0], [γ, 1]],  Σ°(α) = [[α⁻¹, 0], [0, αᵗ]],  Σ⁺(β) = [[1, β], [0, 1]].
//! ```
//!
//! The ε = 0 patch needs an invertible upper-left block Σ₁, the ε = 1 patch an
//! invertible upper-right block Σ₂; [`sp_factorize`] picks whichever has the
//! larger |det|.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{Matrix, MatrixError};
use crate::scalar::{FromF64, Rational, Scalar};

/// Default membership tolerance for the float backend.
pub const SP_TOL: f64 = 1e-10;

/// Below this pivot determinant a factorization is flagged as ill-conditioned.
pub const CONDITIONING_FLOOR: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum SpError {
    #[error("matrix must be square with even size, got {0}x{1}")]
    OddSize(usize, usize),
    #[error("not symplectic: max |ΣᵗζΣ − ζ| = {residual:e}")]
    NotSymplectic { residual: f64 },
    #[error("ill-conditioned patch: both Σ₁ and Σ₂ are singular")]
    IllConditionedPatch,
    #[error("singular alpha")]
    SingularAlpha,
    #[error("{0} must be symmetric")]
    NotSymmetric(&'static str),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Outcome of [`sp_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpDiagnostics {
    pub is_symplectic: bool,
    /// max |ΣᵗζΣ − ζ|
    pub residual: f64,
    /// max |Σ₁ᵗΣ₄ − Σ₃ᵗΣ₂ − 1|
    pub identity_block: f64,
    /// asymmetry of Σ₁ᵗΣ₃
    pub sym_13: f64,
    /// asymmetry of Σ₂ᵗΣ₄
    pub sym_24: f64,
}

pub fn sp_check<T: Scalar>(m: &Matrix<T>, tol: f64) -> Result<SpDiagnostics, SpError> {
    if !m.is_square() || !m.rows().is_multiple_of(2) || m.rows() == 0 {
        return Err(SpError::OddSize(m.rows(), m.cols()));
    }
    let n = m.rows() / 2;
    let zeta = Matrix::symplectic_form(n);
    let diff = m.transpose().mul(&zeta).mul(m).sub(&zeta);
    let [s1, s2, s3, s4] = quadrants(m);
    let id = s1.transpose().mul(&s4).sub(&s3.transpose().mul(&s2)).sub(&Matrix::identity(n));
    let a13 = s1.transpose().mul(&s3);
    let a24 = s2.transpose().mul(&s4);
    let is_symplectic = if T::EXACT { diff.is_zero() } else { diff.max_abs() <= tol };
    Ok(SpDiagnostics {
        is_symplectic,
        residual: diff.max_abs(),
        identity_block: id.max_abs(),
        sym_13: a13.max_abs_diff(&a13.transpose()),
        sym_24: a24.max_abs_diff(&a24.transpose()),
    })
}

fn quadrants<T: Scalar>(m: &Matrix<T>) -> [Matrix<T>; 4] {
    let n = m.rows() / 2;
    [m.block(0, 0, n, n), m.block(0, n, n, n), m.block(n, 0, n, n), m.block(n, n, n, n)]
}

/// A verified element of Sp(2n).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SymplecticMatrix<T: Scalar> {
    m: Matrix<T>,
}

impl<T: Scalar> SymplecticMatrix<T> {
    /// Validates membership with `tol` (ignored by exact backends).
    pub fn new(m: Matrix<T>, tol: f64) -> Result<Self, SpError> {
        let d = sp_check(&m, tol)?;
        if !d.is_symplectic {
            return Err(SpError::NotSymplectic { residual: d.residual });
        }
        Ok(SymplecticMatrix { m })
    }

    /// Wraps a matrix known to be symplectic by construction.
    pub(crate) fn from_trusted(m: Matrix<T>) -> Self {
        SymplecticMatrix { m }
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix { m: Matrix::identity(2 * n) }
    }

    pub fn zeta(n: usize) -> Self {
        SymplecticMatrix { m: Matrix::symplectic_form(n) }
    }

    pub fn n(&self) -> usize {
        self.m.rows() / 2
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.m
    }

    /// The quadrants [Σ₁, Σ₂, Σ₃, Σ₄].
    pub fn blocks(&self) -> [Matrix<T>; 4] {
        quadrants(&self.m)
    }

    pub fn mul(&self, other: &Self) -> Self {
        SymplecticMatrix { m: self.m.mul(&other.m) }
    }

    /// Σ⁻¹ = ζ⁻¹Σᵗζ, exact in any backend.
    pub fn inverse(&self) -> Self {
        let z = Matrix::symplectic_form(self.n());
        SymplecticMatrix { m: z.neg().mul(&self.m.transpose()).mul(&z) }
    }

    pub fn apply(&self, z: &[T]) -> Vec<T> {
        self.m.mul_vec(z)
    }

    pub fn to_f64(&self) -> SymplecticMatrix<f64> {
        SymplecticMatrix { m: self.m.to_f64() }
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for SymplecticMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = Matrix::<T>::deserialize(d)?;
        SymplecticMatrix::new(m, SP_TOL).map_err(serde::de::Error::custom)
    }
}

/// Σ⁺(β) = [[1, β], [0, 1]] for symmetric β.
pub fn sigma_plus<T: Scalar>(beta: &Matrix<T>) -> Result<SymplecticMatrix<T>, SpError> {
    check_symmetric(beta, "beta")?;
    let n = beta.rows();
    Ok(SymplecticMatrix::from_trusted(Matrix::from_quadrants(
        &Matrix::identity(n),
        beta,
        &Matrix::zeros(n, n),
        &Matrix::identity(n),
    )))
}

/// Σ⁻(γ) = [[1, 0], [γ, 1]] for symmetric γ.
pub fn sigma_minus<T: Scalar>(gamma: &Matrix<T>) -> Result<SymplecticMatrix<T>, SpError> {
    check_symmetric(gamma, "gamma")?;
    let n = gamma.rows();
    Ok(SymplecticMatrix::from_trusted(Matrix::from_quadrants(
        &Matrix::identity(n),
        &Matrix::zeros(n, n),
        gamma,
        &Matrix::identity(n),
    )))
}

/// Σ°(α) = [[α⁻¹, 0], [0, αᵗ]] for invertible α.
pub fn sigma_zero<T: Scalar>(alpha: &Matrix<T>) -> Result<SymplecticMatrix<T>, SpError> {
    let n = alpha.rows();
    let inv = alpha.inverse().map_err(|_| SpError::SingularAlpha)?;
    Ok(SymplecticMatrix::from_trusted(Matrix::from_quadrants(
        &inv,
        &Matrix::zeros(n, n),
        &Matrix::zeros(n, n),
        &alpha.transpose(),
    )))
}

fn check_symmetric<T: Scalar>(m: &Matrix<T>, name: &'static str) -> Result<(), SpError> {
    // generous float tolerance: callers pass products of rounded matrices
    if !m.is_symmetric(1e-9) {
        return Err(SpError::NotSymmetric(name));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticFactors<T: Scalar> {
    pub gamma: Matrix<T>,
    pub alpha: Matrix<T>,
    pub beta: Matrix<T>,
    pub epsilon: u8,
}

impl<T: Scalar> SymplecticFactors<T> {
    pub fn n(&self) -> usize {
        self.alpha.rows()
    }
}

/// Factors plus the conditioning information of the chosen patch.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization<T: Scalar> {
    pub factors: SymplecticFactors<T>,
    /// |det| of the block that was inverted (Σ₁ for ε = 0, Σ₂ for ε = 1).
    pub pivot_det: f64,
    /// Set when `pivot_det` is below [`CONDITIONING_FLOOR`].
    pub ill_conditioned: bool,
}

pub fn sp_factorize<T: Scalar>(s: &SymplecticMatrix<T>) -> Result<Factorization<T>, SpError> {
    let [s1, s2, s3, s4] = s.blocks();
    let d1 = s1.determinant().map_err(|_| SpError::IllConditionedPatch)?;
    let d2 = s2.determinant().map_err(|_| SpError::IllConditionedPatch)?;
    let use_first = d1.abs() >= d2.abs();
    let (pivot, pivot_det) = if use_first { (&s1, d1) } else { (&s2, d2) };
    let inv = match pivot.inverse() {
        Ok(m) => m,
        Err(MatrixError::Singular) => return Err(SpError::IllConditionedPatch),
        Err(_) => unreachable!("blocks are square"),
    };
    let mut factors = if use_first {
        SymplecticFactors {
            gamma: s3.mul(&inv),
            beta: inv.mul(&s2),
            alpha: inv,
            epsilon: 0,
        }
    } else {
        SymplecticFactors {
            gamma: s4.mul(&inv),
            beta: inv.mul(&s1).neg(),
            alpha: inv,
            epsilon: 1,
        }
    };
    if !T::EXACT {
        // β and γ are symmetric in exact arithmetic; remove rounding asymmetry.
        factors.beta = symmetrize(&factors.beta);
        factors.gamma = symmetrize(&factors.gamma);
    }
    let pivot_det = pivot_det.to_f64().abs();
    let ill_conditioned = pivot_det < CONDITIONING_FLOOR;
    if ill_conditioned {
        log::warn!("symplectic factorization: pivot determinant {pivot_det:e} below floor");
    }
    Ok(Factorization { factors, pivot_det, ill_conditioned })
}

fn symmetrize<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    m.add(&m.transpose()).scale(&T::half())
}

pub fn sp_compose_factors<T: Scalar>(f: &SymplecticFactors<T>) -> Result<SymplecticMatrix<T>, SpError> {
    let n = f.n();
    let mut s = sigma_minus(&f.gamma)?
        .mul(&sigma_zero(&f.alpha)?)
        .mul(&sigma_plus(&f.beta)?);
    if f.epsilon % 2 == 1 {
        s = s.mul(&SymplecticMatrix::zeta(n));
    }
    Ok(s)
}

/// Deterministic pseudo-random element of Sp(2n) built from `steps` random
/// generators Σ⁺(β), Σ°(α), Σ⁻(γ) and ζ with bounded entries.
pub fn sp_random(n: usize, seed: u64, steps: usize) -> SymplecticMatrix<f64> {
    random_product(n, seed, steps, |x| x)
}

/// Exact variant of [`sp_random`] whose generator entries are multiples of 1/8.
pub fn sp_random_rational(n: usize, seed: u64, steps: usize) -> SymplecticMatrix<Rational> {
    random_product(n, seed, steps, |x| (x * 8.0).round() / 8.0)
}

fn random_product<T: Scalar + FromF64>(
    n: usize,
    seed: u64,
    steps: usize,
    quantize: impl Fn(f64) -> f64,
) -> SymplecticMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = SymplecticMatrix::<T>::identity(n);
    for _ in 0..steps {
        let g = match rng.gen_range(0..4) {
            0 => sigma_plus(&random_symmetric(n, &mut rng, &quantize)),
            1 => sigma_zero(&random_near_identity(n, &mut rng, &quantize)),
            2 => sigma_minus(&random_symmetric(n, &mut rng, &quantize)),
            _ => Ok(SymplecticMatrix::zeta(n)),
        }
        .expect("generators are valid by construction");
        acc = acc.mul(&g);
    }
    acc
}

fn random_symmetric<T: Scalar + FromF64>(
    n: usize,
    rng: &mut ChaCha8Rng,
    quantize: &impl Fn(f64) -> f64,
) -> Matrix<T> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = T::from_f64(quantize(rng.gen_range(-0.5..=0.5)));
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// Strictly diagonally dominant, hence invertible.
fn random_near_identity<T: Scalar + FromF64>(
    n: usize,
    rng: &mut ChaCha8Rng,
    quantize: &impl Fn(f64) -> f64,
) -> Matrix<T> {
    let off = 0.25 / n as f64;
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j { 1.0 + rng.gen_range(-0.25..=0.25) } else { rng.gen_range(-off..=off) };
            m[(i, j)] = T::from_f64(quantize(v));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix<f64> {
        Matrix::from_rows(vec![vec![a, b], vec![c, d]]).unwrap()
    }

    #[test]
    fn membership_examples() {
        for n in 1..=3 {
            assert!(sp_check(&Matrix::<f64>::identity(2 * n), SP_TOL).unwrap().is_symplectic);
            assert!(sp_check(&Matrix::<Rational>::symplectic_form(n), 0.0).unwrap().is_symplectic);
        }
        assert!(sp_check(&m2(1.0, 1.0, 0.0, 1.0), SP_TOL).unwrap().is_symplectic);
        let d = sp_check(&m2(2.0, 0.0, 0.0, 1.0), SP_TOL).unwrap();
        assert!(!d.is_symplectic);
        assert_eq!(d.residual, 1.0);
        assert_eq!(sp_check(&Matrix::<f64>::zeros(3, 3), SP_TOL), Err(SpError::OddSize(3, 3)));
    }

    #[test]
    fn two_by_two_membership_is_unit_determinant() {
        for (a, b, c, d) in [(2.0, 3.0, 1.0, 2.0), (0.5, 0.0, 0.0, 2.0), (1.0, 2.0, 3.0, 4.0)] {
            let m = m2(a, b, c, d);
            let det_one = (m.determinant().unwrap() - 1.0).abs() < 1e-14;
            assert_eq!(sp_check(&m, SP_TOL).unwrap().is_symplectic, det_one);
        }
    }

    #[test]
    fn factorize_examples() {
        let f = sp_factorize(&SymplecticMatrix::<Rational>::identity(2)).unwrap().factors;
        assert_eq!(f.epsilon, 0);
        assert_eq!(f.alpha, Matrix::identity(2));
        assert!(f.beta.is_zero() && f.gamma.is_zero());

        let f = sp_factorize(&SymplecticMatrix::<Rational>::zeta(2)).unwrap().factors;
        assert_eq!(f.epsilon, 1);
        assert_eq!(f.alpha, Matrix::identity(2));
        assert!(f.beta.is_zero() && f.gamma.is_zero());

        let s = SymplecticMatrix::new(m2(1.0, 1.0, 0.0, 1.0), SP_TOL).unwrap();
        let f = sp_factorize(&s).unwrap().factors;
        assert_eq!((f.gamma[(0, 0)], f.alpha[(0, 0)], f.beta[(0, 0)], f.epsilon), (0.0, 1.0, 1.0, 0));
    }

    #[test]
    fn compose_examples() {
        let one = Matrix::<Rational>::identity(1);
        let zero = Matrix::<Rational>::zeros(1, 1);
        let f = SymplecticFactors { gamma: zero.clone(), alpha: one.clone(), beta: zero.clone(), epsilon: 0 };
        assert_eq!(sp_compose_factors(&f).unwrap(), SymplecticMatrix::identity(1));
        let f = SymplecticFactors { epsilon: 1, ..f };
        assert_eq!(sp_compose_factors(&f).unwrap(), SymplecticMatrix::zeta(1));
        let f = SymplecticFactors { gamma: one.clone(), alpha: one, beta: zero, epsilon: 0 };
        let expected = Matrix::from_rows(vec![
            vec![Rational::from_i64(1), Rational::from_i64(0)],
            vec![Rational::from_i64(1), Rational::from_i64(1)],
        ])
        .unwrap();
        assert_eq!(sp_compose_factors(&f).unwrap().matrix(), &expected);
    }

    #[test]
    fn singular_alpha_is_rejected() {
        let f = SymplecticFactors {
            gamma: Matrix::<f64>::zeros(1, 1),
            alpha: Matrix::zeros(1, 1),
            beta: Matrix::zeros(1, 1),
            epsilon: 0,
        };
        assert_eq!(sp_compose_factors(&f), Err(SpError::SingularAlpha));
    }

    #[test]
    fn partial_exchange_has_no_patch() {
        // ζ on the first coordinate pair, identity on the second: Σ₁ and Σ₂ both singular.
        let mut m = Matrix::<Rational>::identity(4);
        m[(0, 0)] = Rational::from_i64(0);
        m[(2, 2)] = Rational::from_i64(0);
        m[(0, 2)] = Rational::from_i64(1);
        m[(2, 0)] = Rational::from_i64(-1);
        let s = SymplecticMatrix::new(m, 0.0).unwrap();
        assert_eq!(sp_factorize(&s), Err(SpError::IllConditionedPatch));
    }

    #[test]
    fn zeta_conjugates_lower_to_upper() {
        let g = Matrix::from_rows(vec![
            vec![Rational::from_ratio(1, 3), Rational::from_i64(2)],
            vec![Rational::from_i64(2), Rational::from_ratio(-5, 7)],
        ])
        .unwrap();
        let z = SymplecticMatrix::<Rational>::zeta(2);
        let lhs = z.mul(&sigma_minus(&g).unwrap()).mul(&z.inverse());
        assert_eq!(lhs, sigma_plus(&g.neg()).unwrap());
    }

    #[test]
    fn random_is_deterministic_and_symplectic() {
        assert_eq!(sp_random(2, 7, 0), SymplecticMatrix::identity(2));
        for n in 1..=3 {
            let a = sp_random(n, 42, 6);
            assert_eq!(a, sp_random(n, 42, 6));
            assert!(sp_check(a.matrix(), SP_TOL).unwrap().is_symplectic);
            let r = sp_random_rational(n, 42, 6);
            assert!(sp_check(r.matrix(), 0.0).unwrap().is_symplectic);
        }
    }

    #[test]
    fn inverse_is_exact() {
        let s = sp_random_rational(3, 5, 5);
        assert_eq!(s.mul(&s.inverse()), SymplecticMatrix::identity(3));
    }

    #[test]
    fn asymmetric_beta_is_rejected() {
        assert_eq!(sigma_plus(&m2(0.0, 1.0, 0.0, 0.0)), Err(SpError::NotSymmetric("beta")));
    }

    #[test]
    fn json_round_trip_validates() {
        let s = sp_random(1, 3, 3);
        let js = serde_json::to_string(&s).unwrap();
        let back: SymplecticMatrix<f64> = serde_json::from_str(&js).unwrap();
        assert!(back.matrix().approx_eq(s.matrix(), 1e-15));
        assert!(serde_json::from_str::<SymplecticMatrix<f64>>("[[2,0],[0,1]]").is_err());
    }
}
