//! The automorphism group of H(n): elements Ω(δ, Σ, z, ι) with δ ≠ 0,
//! Σ ∈ Sp(2n), realized by
//!
//! ```text
//! Ω = ┌ δΣ        0    z  ┐
//!     │ −δzᵗζΣ    δ²  −2ι │
//!     └ 0         0    1  ┘
//! ```
//!
//! so that Ω(1, 1, z, ι) is exactly the matrix of Υ(z, ι). Conjugation by Ω
//! acts on H(n) and on its Lie algebra; δ = 1 is the subgroup HSp(2n) that
//! fixes the central generator.
//!
//! Ω(−δ, Σ, z, ι) and Ω(δ, −Σ, z, ι) are the same matrix, so elements are
//! stored with δ > 0 and the sign of a negative δ is moved into Σ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lie_algebra::{AlgebraElement, AlgebraError};
use crate::matrix::Matrix;
use crate::scalar::{dot, vec_add, vec_neg, vec_scale, Scalar};
use crate::symplectic::SymplecticMatrix;
use crate::wh_group::{WHElement, WhError};

#[derive(Debug, Error, PartialEq)]
pub enum AutError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("delta must be nonzero")]
    ZeroDelta,
    #[error("z must have length 2n = {expected}, got {got}")]
    BadTranslation { expected: usize, got: usize },
    #[error("algebra element has support outside span{{Q, P, I}}")]
    SupportOutsideWh,
    #[error(transparent)]
    Wh(#[from] WhError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct AutElement<T: Scalar> {
    delta: T,
    sigma: SymplecticMatrix<T>,
    z: Vec<T>,
    iota: T,
}

impl<T: Scalar> AutElement<T> {
    pub fn new(delta: T, sigma: SymplecticMatrix<T>, z: Vec<T>, iota: T) -> Result<Self, AutError> {
        if delta.is_zero() {
            return Err(AutError::ZeroDelta);
        }
        let (delta, sigma) = if delta < T::zero() {
            (-delta, SymplecticMatrix::from_trusted(sigma.matrix().neg()))
        } else {
            (delta, sigma)
        };
        let expected = 2 * sigma.n();
        if z.len() != expected {
            return Err(AutError::BadTranslation { expected, got: z.len() });
        }
        Ok(AutElement { delta, sigma, z, iota })
    }

    pub fn identity(n: usize) -> Self {
        AutElement {
            delta: T::one(),
            sigma: SymplecticMatrix::identity(n),
            z: vec![T::zero(); 2 * n],
            iota: T::zero(),
        }
    }

    /// Ω(1, 1, z, ι): the image of Υ(z, ι).
    pub fn from_wh(h: &WHElement<T>) -> Self {
        AutElement {
            delta: T::one(),
            sigma: SymplecticMatrix::identity(h.n()),
            z: h.z(),
            iota: h.iota().clone(),
        }
    }

    /// Ω(1, Σ, 0, 0).
    pub fn from_symplectic(sigma: SymplecticMatrix<T>) -> Self {
        let n = sigma.n();
        AutElement { delta: T::one(), sigma, z: vec![T::zero(); 2 * n], iota: T::zero() }
    }

    /// Ω(δ, 1, 0, 0).
    pub fn dilation(n: usize, delta: T) -> Result<Self, AutError> {
        Self::new(delta, SymplecticMatrix::identity(n), vec![T::zero(); 2 * n], T::zero())
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn delta(&self) -> &T {
        &self.delta
    }

    pub fn sigma(&self) -> &SymplecticMatrix<T> {
        &self.sigma
    }

    pub fn z(&self) -> &[T] {
        &self.z
    }

    pub fn iota(&self) -> &T {
        &self.iota
    }

    /// The Weyl-Heisenberg part Υ(z, ι).
    pub fn translation(&self) -> WHElement<T> {
        WHElement::from_z(&self.z, self.iota.clone()).expect("z has even positive length")
    }

    pub fn to_f64(&self) -> AutElement<f64> {
        AutElement {
            delta: self.delta.to_f64(),
            sigma: self.sigma.to_f64(),
            z: self.z.iter().map(Scalar::to_f64).collect(),
            iota: self.iota.to_f64(),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n() == other.n()
            && self.delta.approx_eq(&other.delta, tol)
            && self.iota.approx_eq(&other.iota, tol)
            && self.sigma.matrix().approx_eq(other.sigma.matrix(), tol)
            && self.z.iter().zip(&other.z).all(|(a, b)| a.approx_eq(b, tol))
    }
}

fn same_n(a: usize, b: usize) -> Result<(), AutError> {
    if a != b {
        return Err(AutError::DimensionMismatch(a, b));
    }
    Ok(())
}

/// z'ᵗζΣ'z
fn twisted_form<T: Scalar>(zp: &[T], sigma: &SymplecticMatrix<T>, z: &[T]) -> T {
    let zeta = Matrix::<T>::symplectic_form(sigma.n());
    dot(zp, &zeta.mul_vec(&sigma.apply(z)))
}

/// Ω(δ',Σ',z',ι')·Ω(δ,Σ,z,ι) = Ω(δ'δ, Σ'Σ, z' + δ'Σ'z, ι' + δ'²ι + ½δ' z'ᵗζΣ'z).
pub fn aut_product<T: Scalar>(a: &AutElement<T>, b: &AutElement<T>) -> Result<AutElement<T>, AutError> {
    same_n(a.n(), b.n())?;
    let dp = &a.delta;
    let z = vec_add(&a.z, &vec_scale(dp, &a.sigma.apply(&b.z)));
    let iota = a.iota.clone()
        + dp.clone() * dp.clone() * b.iota.clone()
        + T::half() * dp.clone() * twisted_form(&a.z, &a.sigma, &b.z);
    Ok(AutElement { delta: dp.clone() * b.delta.clone(), sigma: a.sigma.mul(&b.sigma), z, iota })
}

/// Ω(δ,Σ,z,ι)⁻¹ = Ω(δ⁻¹, Σ⁻¹, −δ⁻¹Σ⁻¹z, −δ⁻²ι).
pub fn aut_inverse<T: Scalar>(a: &AutElement<T>) -> AutElement<T> {
    let dinv = T::one() / a.delta.clone();
    let sinv = a.sigma.inverse();
    let z = vec_neg(&vec_scale(&dinv, &sinv.apply(&a.z)));
    AutElement { iota: -(dinv.clone() * dinv.clone() * a.iota.clone()), delta: dinv, sigma: sinv, z }
}

pub fn aut_to_matrix<T: Scalar>(a: &AutElement<T>) -> Matrix<T> {
    let n = a.n();
    let d = 2 * n + 2;
    let mut m = Matrix::zeros(d, d);
    m.set_block(0, 0, &a.sigma.matrix().scale(&a.delta));
    let zeta = Matrix::<T>::symplectic_form(n);
    let row = zeta.mul(a.sigma.matrix()).vec_mul(&a.z);
    for k in 0..2 * n {
        m[(k, d - 1)] = a.z[k].clone();
        m[(2 * n, k)] = -a.delta.clone() * row[k].clone();
    }
    m[(2 * n, 2 * n)] = a.delta.clone() * a.delta.clone();
    m[(2 * n, d - 1)] = -T::two() * a.iota.clone();
    m[(d - 1, d - 1)] = T::one();
    m
}

/// ς_Ω Υ(z, ι) = Υ(δΣz, δ²ι + δ z_Ωᵗ ζ Σz), the action by conjugation.
pub fn aut_act_wh<T: Scalar>(g: &AutElement<T>, h: &WHElement<T>) -> Result<WHElement<T>, AutError> {
    same_n(g.n(), h.n())?;
    let z = h.z();
    let new_z = vec_scale(&g.delta, &g.sigma.apply(&z));
    let iota = g.delta.clone() * g.delta.clone() * h.iota().clone()
        + g.delta.clone() * twisted_form(&g.z, &g.sigma, &z);
    Ok(WHElement::from_z(&new_z, iota)?)
}

/// Adjoint action on W(z, ι) ∈ span{Q, P, I}:
/// W(z, ι) ↦ W(δΣz, δ²ι − δ z_Ωᵗ ζ Σz). The ι of Ω does not enter.
pub fn aut_act_algebra<T: Scalar>(
    g: &AutElement<T>,
    w: &AlgebraElement<T>,
) -> Result<AlgebraElement<T>, AutError> {
    same_n(g.n(), w.basis().n)?;
    let (z, iota) = w.wh_part().ok_or(AutError::SupportOutsideWh)?;
    let new_z = vec_scale(&g.delta, &g.sigma.apply(&z));
    let new_iota = g.delta.clone() * g.delta.clone() * iota
        - g.delta.clone() * twisted_form(&g.z, &g.sigma, &z);
    Ok(AlgebraElement::wh(w.basis(), &new_z, new_iota)?)
}

/// δ = 1: the automorphism fixes the central generator I.
pub fn is_central_invariant<T: Scalar>(g: &AutElement<T>) -> bool {
    g.delta == T::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::{alg_matrix_realization, AlgebraBasis, Generator};
    use crate::scalar::Rational;
    use crate::symplectic::sp_random_rational;
    use crate::wh_group::{wh_inner_aut, wh_product};

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| r(x)).collect()
    }

    fn product_oracle(a: &AutElement<Rational>, b: &AutElement<Rational>) -> Matrix<Rational> {
        aut_to_matrix(a).mul(&aut_to_matrix(b))
    }

    #[test]
    fn identity_is_neutral() {
        let b = AutElement::new(r(3), sp_random_rational(1, 1, 3), rv(&[1, 2]), r(5)).unwrap();
        assert_eq!(aut_product(&AutElement::identity(1), &b).unwrap(), b);
        assert_eq!(aut_inverse(&AutElement::<Rational>::identity(2)), AutElement::identity(2));
    }

    #[test]
    fn product_examples_match_matrix_oracle() {
        let dil = AutElement::dilation(1, r(2)).unwrap();
        let t = AutElement::from_wh(&WHElement::from_z(&rv(&[1, -3]), r(7)).unwrap());
        let prod = aut_product(&dil, &t).unwrap();
        assert_eq!(aut_to_matrix(&prod), product_oracle(&dil, &t));
        assert_eq!((prod.z(), prod.iota()), (rv(&[2, -6]).as_slice(), &r(28)));

        let zeta = AutElement::from_symplectic(SymplecticMatrix::zeta(1));
        let t = AutElement::from_wh(&WHElement::from_z(&rv(&[1, 0]), r(0)).unwrap());
        let prod = aut_product(&zeta, &t).unwrap();
        assert_eq!(aut_to_matrix(&prod), product_oracle(&zeta, &t));
        assert_eq!(prod.z(), rv(&[0, -1]).as_slice());
        assert_eq!(prod.sigma(), &SymplecticMatrix::zeta(1));
    }

    #[test]
    fn inverse_example() {
        let a = AutElement::new(r(2), SymplecticMatrix::identity(1), rv(&[0, 0]), r(4)).unwrap();
        let inv = aut_inverse(&a);
        assert_eq!((inv.delta(), inv.iota()), (&Rational::from_ratio(1, 2), &r(-1)));
        let g = AutElement::new(r(-3), sp_random_rational(2, 9, 4), rv(&[1, 2, -1, 3]), r(2)).unwrap();
        assert_eq!(aut_product(&g, &aut_inverse(&g)).unwrap(), AutElement::identity(2));
    }

    #[test]
    fn translations_embed_the_group() {
        let a = WHElement::from_z(&rv(&[1, 2, 0, -1]), Rational::from_ratio(1, 3)).unwrap();
        let b = WHElement::from_z(&rv(&[4, -2, 5, 1]), r(-2)).unwrap();
        let ab = aut_product(&AutElement::from_wh(&a), &AutElement::from_wh(&b)).unwrap();
        assert_eq!(ab, AutElement::from_wh(&wh_product(&a, &b).unwrap()));
        assert_eq!(aut_to_matrix(&AutElement::from_wh(&a)), crate::wh_group::wh_to_matrix(&a));
    }

    #[test]
    fn act_wh_examples() {
        let h = WHElement::new(rv(&[3]), rv(&[5]), r(2)).unwrap();
        assert_eq!(aut_act_wh(&AutElement::identity(1), &h).unwrap(), h);
        let zeta = AutElement::from_symplectic(SymplecticMatrix::zeta(1));
        assert_eq!(aut_act_wh(&zeta, &h).unwrap(), WHElement::new(rv(&[5]), rv(&[-3]), r(2)).unwrap());
        let g = WHElement::new(rv(&[1]), rv(&[-4]), r(9)).unwrap();
        assert_eq!(
            aut_act_wh(&AutElement::from_wh(&g), &h).unwrap(),
            wh_inner_aut(&g, &h).unwrap()
        );
    }

    #[test]
    fn act_wh_is_conjugation() {
        let g = AutElement::new(r(-2), sp_random_rational(2, 4, 5), rv(&[1, 0, 2, -1]), r(3)).unwrap();
        let h = WHElement::from_z(&rv(&[2, 1, -1, 1]), r(5)).unwrap();
        let conj = aut_product(&aut_product(&g, &AutElement::from_wh(&h)).unwrap(), &aut_inverse(&g)).unwrap();
        assert_eq!(conj, AutElement::from_wh(&aut_act_wh(&g, &h).unwrap()));
    }

    #[test]
    fn act_algebra_matches_matrix_conjugation() {
        let basis = AlgebraBasis::new(2);
        let g = AutElement::new(r(3), sp_random_rational(2, 11, 5), rv(&[1, -2, 0, 1]), r(7)).unwrap();
        let w = AlgebraElement::wh(basis, &rv(&[2, 1, -3, 1]), r(4)).unwrap();
        let m = aut_to_matrix(&g);
        let conj = m.mul(&alg_matrix_realization(&w)).mul(&m.inverse().unwrap());
        let acted = aut_act_algebra(&g, &w).unwrap();
        assert_eq!(alg_matrix_realization(&acted), conj);
    }

    #[test]
    fn act_algebra_examples() {
        let basis = AlgebraBasis::new(1);
        let i = AlgebraElement::basis_element(basis, Generator::I).unwrap();
        let g = AutElement::<Rational>::dilation(1, r(2)).unwrap();
        assert_eq!(aut_act_algebra(&g, &i).unwrap().coeff(Generator::I), r(4));
        let w = AlgebraElement::wh(basis, &rv(&[1, 2]), r(3)).unwrap();
        let zeta = AutElement::from_symplectic(SymplecticMatrix::zeta(1));
        assert_eq!(aut_act_algebra(&zeta, &w).unwrap(), AlgebraElement::wh(basis, &rv(&[2, -1]), r(3)).unwrap());
        let a = AlgebraElement::basis_element(basis, Generator::A(0, 0)).unwrap();
        assert_eq!(aut_act_algebra(&g, &a), Err(AutError::SupportOutsideWh));
    }

    #[test]
    fn central_invariance_requires_unit_delta() {
        let basis = AlgebraBasis::new(1);
        let i = AlgebraElement::<Rational>::basis_element(basis, Generator::I).unwrap();
        for (num, den) in [(1, 1), (2, 1), (-1, 1), (1, 2), (-3, 2)] {
            let g = AutElement::dilation(1, Rational::from_ratio(num, den)).unwrap();
            let fixes = aut_act_algebra(&g, &i).unwrap() == i;
            assert_eq!(is_central_invariant(&g), fixes);
            assert_eq!(fixes, num * num == den * den);
        }
    }

    #[test]
    fn negative_delta_is_normalized() {
        let g = AutElement::new(r(-2), SymplecticMatrix::identity(1), rv(&[1, 3]), r(1)).unwrap();
        assert_eq!(g.delta(), &r(2));
        assert_eq!(g.sigma().matrix(), &Matrix::identity(2).neg());
        // −δzᵗζΣ with δ=−2, Σ=1, z=(1,3): 2·(1,3)ζ = 2·(−3,1)
        let mut expected = Matrix::zeros(4, 4);
        for (i, row) in [[-2, 0, 0, 1], [0, -2, 0, 3], [-6, 2, 4, -2], [0, 0, 0, 1]].iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                expected[(i, j)] = r(*v);
            }
        }
        assert_eq!(aut_to_matrix(&g), expected);
    }

    #[test]
    fn zero_delta_rejected() {
        assert_eq!(AutElement::<f64>::dilation(1, 0.0), Err(AutError::ZeroDelta));
    }
}
