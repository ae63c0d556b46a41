//! Faithful (2n+2)-dimensional matrix realization of hsp(2n).
//!
//! ```text
//! X ∈ sp(2n) ↦ [[X, 0, 0], [0, 0, 0], [0, 0, 0]]
//! W(z, ι)    ↦ [[0, 0, z], [−zᵗζ, 0, 2ι], [0, 0, 0]]
//! ```
//!
//! with A_ij = diag(E_ij, −E_ji), B_ij = [[0, E_ij + E_ji], [0, 0]],
//! C_ij = [[0, 0], [E_ij + E_ji, 0]]. These satisfy [X, W(z, 0)] = W(Xz, 0)
//! and [W(a, 0), W(b, 0)] = W(0, −aᵗζb).

use super::{AlgebraBasis, AlgebraElement, AlgebraError, Generator};
use crate::matrix::Matrix;
use crate::scalar::{dot, Rational, Scalar};
use super::structure::StructureConstants;

pub fn alg_matrix_realization<T: Scalar>(x: &AlgebraElement<T>) -> Matrix<T> {
    let n = x.basis().n;
    let d = 2 * n + 2;
    let mut m = Matrix::<T>::zeros(d, d);
    for (g, c) in x.terms() {
        let c = c.clone();
        let mut add = |r: usize, k: usize, v: T| m[(r, k)] = m[(r, k)].clone() + v;
        match g {
            Generator::A(i, j) => {
                add(i, j, c.clone());
                add(n + j, n + i, -c);
            }
            Generator::B(i, j) => {
                add(i, n + j, c.clone());
                add(j, n + i, c);
            }
            Generator::C(i, j) => {
                add(n + i, j, c.clone());
                add(n + j, i, c);
            }
            Generator::Q(_) | Generator::P(_) | Generator::I => {}
        }
    }
    let (z, iota) = wh_coords(x);
    let zeta = Matrix::<T>::symplectic_form(n);
    let row = zeta.vec_mul(&z);
    for k in 0..2 * n {
        m[(k, d - 1)] = z[k].clone();
        m[(2 * n, k)] = -row[k].clone();
    }
    m[(2 * n, d - 1)] = T::two() * iota;
    m
}

fn wh_coords<T: Scalar>(x: &AlgebraElement<T>) -> (Vec<T>, T) {
    let n = x.basis().n;
    let mut z = vec![T::zero(); 2 * n];
    for i in 0..n {
        z[i] = x.coeff(Generator::Q(i));
        z[n + i] = x.coeff(Generator::P(i));
    }
    (z, x.coeff(Generator::I))
}

/// Inverse of [`alg_matrix_realization`]; fails unless the matrix lies in
/// the image exactly (or within `tol` for floats).
pub fn alg_from_matrix<T: Scalar>(m: &Matrix<T>, tol: f64) -> Result<AlgebraElement<T>, AlgebraError> {
    let d = m.rows();
    if !m.is_square() || d < 4 || !d.is_multiple_of(2) {
        return Err(AlgebraError::NotInAlgebra(format!("shape {}x{}", m.rows(), m.cols())));
    }
    let n = (d - 2) / 2;
    let basis = AlgebraBasis::new(n);
    let mut x = AlgebraElement::zero(basis);
    for i in 0..n {
        for j in 0..n {
            x.set(Generator::A(i, j), m[(i, j)].clone())?;
        }
        for j in i..n {
            let (b, c) = if i == j {
                (m[(i, n + i)].clone() * T::half(), m[(n + i, i)].clone() * T::half())
            } else {
                (m[(i, n + j)].clone(), m[(n + i, j)].clone())
            };
            x.set(Generator::B(i, j), b)?;
            x.set(Generator::C(i, j), c)?;
        }
        x.set(Generator::Q(i), m[(i, d - 1)].clone())?;
        x.set(Generator::P(i), m[(n + i, d - 1)].clone())?;
    }
    x.set(Generator::I, m[(2 * n, d - 1)].clone() * T::half())?;
    if !alg_matrix_realization(&x).approx_eq(m, tol) {
        return Err(AlgebraError::NotInAlgebra("entries outside the hsp(2n) template".into()));
    }
    Ok(x)
}

/// Structure constants read off matrix commutators of the basis images.
pub fn structure_from_realization(n: usize) -> StructureConstants {
    let basis = AlgebraBasis::new(n);
    let images: Vec<Matrix<Rational>> = (0..basis.dim())
        .map(|k| {
            alg_matrix_realization(&AlgebraElement::basis_element(basis, basis.generator(k)).unwrap())
        })
        .collect();
    let mut sc = StructureConstants::new(basis.labels());
    for a in 0..basis.dim() {
        for b in (a + 1)..basis.dim() {
            let comm = images[a].commutator(&images[b]);
            let x = alg_from_matrix(&comm, 0.0).expect("commutator stays in the algebra");
            sc.set(a, b, x.terms().map(|(g, v)| (basis.index(g).unwrap(), v.clone())).collect());
        }
    }
    sc
}

/// −aᵗζb: the I-coefficient of [W(a,0), W(b,0)].
pub fn heisenberg_form<T: Scalar>(a: &[T], b: &[T]) -> T {
    let n = a.len() / 2;
    -dot(a, &Matrix::<T>::symplectic_form(n).mul_vec(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::structure::hsp_structure_constants;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn zero_maps_to_zero() {
        let x = AlgebraElement::<Rational>::zero(AlgebraBasis::new(2));
        assert!(alg_matrix_realization(&x).is_zero());
    }

    #[test]
    fn wh_template_n1() {
        let b = AlgebraBasis::new(1);
        let w = AlgebraElement::wh(b, &[r(1), r(0)], r(0)).unwrap();
        let m = alg_matrix_realization(&w);
        // column z = (1, 0); row −zᵗζ = (0, −1)
        assert_eq!((m[(0, 3)].clone(), m[(1, 3)].clone()), (r(1), r(0)));
        assert_eq!((m[(2, 0)].clone(), m[(2, 1)].clone()), (r(0), r(-1)));
    }

    #[test]
    fn p_q_commutator_is_i() {
        let b = AlgebraBasis::new(1);
        let img = |g| alg_matrix_realization(&AlgebraElement::<Rational>::basis_element(b, g).unwrap());
        assert_eq!(img(Generator::P(0)).commutator(&img(Generator::Q(0))), img(Generator::I));
    }

    #[test]
    fn symplectic_block_is_in_sp() {
        let basis = AlgebraBasis::new(2);
        let zeta = Matrix::<Rational>::symplectic_form(2);
        for g in basis.generators().filter(|g| g.is_symplectic()) {
            let m = alg_matrix_realization(&AlgebraElement::<Rational>::basis_element(basis, g).unwrap());
            let x = m.block(0, 0, 4, 4);
            assert!(x.transpose().mul(&zeta).add(&zeta.mul(&x)).is_zero(), "{g}");
        }
    }

    #[test]
    fn table_matches_commutators_small_n() {
        for n in 1..=2 {
            assert_eq!(hsp_structure_constants(n), structure_from_realization(n));
        }
    }

    #[test]
    fn from_matrix_rejects_outside_entries() {
        let mut m = Matrix::<Rational>::zeros(4, 4);
        m[(3, 0)] = r(1);
        assert!(alg_from_matrix(&m, 0.0).is_err());
    }
}
