//! The Lie algebra hsp(2n) = sp(2n) ⋉ h(n).
//!
//! Basis: A_ij (all i, j), B_ij and C_ij (i ≤ j), P_i, Q_i and the central I.
//! Brackets are the ones realized by matrix commutators in
//! [`alg_matrix_realization`]; the closed-form table lives in
//! [`structure`] and is checked against those commutators.

pub mod enveloping;
pub mod extension;
pub mod realization;
pub mod structure;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

pub use enveloping::{alg_enveloping_realize, WeylPoly};
pub use extension::{alg_central_extension_check, ExtensionClass};
pub use realization::{alg_from_matrix, alg_matrix_realization};
pub use structure::{alg_jacobi_check, hsp_structure_constants, JacobiReport, StructureConstants};

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("basis mismatch: n = {0} vs n = {1}")]
    BasisMismatch(usize, usize),
    #[error("index out of range for n = {0}")]
    IndexOutOfRange(usize),
    #[error("{0} is not a symplectic generator")]
    NotSymplectic(Generator),
    #[error("matrix is not in the image of the realization: {0}")]
    NotInAlgebra(String),
}

/// A basis symbol with zero-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    A(usize, usize),
    B(usize, usize),
    C(usize, usize),
    P(usize),
    Q(usize),
    I,
}

impl Generator {
    /// B and C are symmetric in their indices; store them with i ≤ j.
    pub fn canonical(self) -> Self {
        match self {
            Generator::B(i, j) if i > j => Generator::B(j, i),
            Generator::C(i, j) if i > j => Generator::C(j, i),
            g => g,
        }
    }

    pub fn is_symplectic(self) -> bool {
        matches!(self, Generator::A(..) | Generator::B(..) | Generator::C(..))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::A(i, j) => write!(f, "A_{}{}", i + 1, j + 1),
            Generator::B(i, j) => write!(f, "B_{}{}", i + 1, j + 1),
            Generator::C(i, j) => write!(f, "C_{}{}", i + 1, j + 1),
            Generator::P(i) => write!(f, "P_{}", i + 1),
            Generator::Q(i) => write!(f, "Q_{}", i + 1),
            Generator::I => write!(f, "I"),
        }
    }
}

/// Index map of hsp(2n): A block (n², row-major), B block, C block
/// (n(n+1)/2 each, upper triangle row-major), P, Q, then I.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraBasis {
    pub n: usize,
}

impl AlgebraBasis {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "hsp(2n) needs n >= 1");
        AlgebraBasis { n }
    }

    fn sym(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn dim(&self) -> usize {
        self.n * self.n + 2 * self.sym() + 2 * self.n + 1
    }

    /// Dimension of the symplectic part sp(2n).
    pub fn sp_dim(&self) -> usize {
        self.n * self.n + 2 * self.sym()
    }

    fn tri(&self, i: usize, j: usize) -> usize {
        // position of (i, j), i ≤ j, in the row-major upper triangle
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn index(&self, g: Generator) -> Result<usize, AlgebraError> {
        let n = self.n;
        let ok = |i: usize| if i < n { Ok(()) } else { Err(AlgebraError::IndexOutOfRange(n)) };
        let sp = self.sym();
        Ok(match g.canonical() {
            Generator::A(i, j) => {
                ok(i)?;
                ok(j)?;
                i * n + j
            }
            Generator::B(i, j) => {
                ok(j)?;
                n * n + self.tri(i, j)
            }
            Generator::C(i, j) => {
                ok(j)?;
                n * n + sp + self.tri(i, j)
            }
            Generator::P(i) => {
                ok(i)?;
                n * n + 2 * sp + i
            }
            Generator::Q(i) => {
                ok(i)?;
                n * n + 2 * sp + n + i
            }
            Generator::I => self.dim() - 1,
        })
    }

    pub fn generator(&self, idx: usize) -> Generator {
        let n = self.n;
        let sp = self.sym();
        let upper = |mut k: usize| {
            for i in 0..n {
                let row = n - i;
                if k < row {
                    return (i, i + k);
                }
                k -= row;
            }
            unreachable!("triangle index out of range")
        };
        match idx {
            k if k < n * n => Generator::A(k / n, k % n),
            k if k < n * n + sp => {
                let (i, j) = upper(k - n * n);
                Generator::B(i, j)
            }
            k if k < n * n + 2 * sp => {
                let (i, j) = upper(k - n * n - sp);
                Generator::C(i, j)
            }
            k if k < n * n + 2 * sp + n => Generator::P(k - n * n - 2 * sp),
            k if k < self.dim() - 1 => Generator::Q(k - n * n - 2 * sp - n),
            k if k == self.dim() - 1 => Generator::I,
            _ => panic!("basis index {idx} out of range"),
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.dim()).map(|k| self.generator(k))
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators().map(|g| g.to_string()).collect()
    }
}

/// Coefficient vector over an [`AlgebraBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T> {
    basis: AlgebraBasis,
    coeffs: Vec<T>,
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn zero(basis: AlgebraBasis) -> Self {
        AlgebraElement { basis, coeffs: vec![T::zero(); basis.dim()] }
    }

    pub fn from_coeffs(basis: AlgebraBasis, coeffs: Vec<T>) -> Result<Self, AlgebraError> {
        if coeffs.len() != basis.dim() {
            return Err(AlgebraError::IndexOutOfRange(basis.n));
        }
        Ok(AlgebraElement { basis, coeffs })
    }

    pub fn basis_element(basis: AlgebraBasis, g: Generator) -> Result<Self, AlgebraError> {
        let mut e = Self::zero(basis);
        e.coeffs[basis.index(g)?] = T::one();
        Ok(e)
    }

    /// W(z, ι) = Σ z_i Q_i + Σ z_{n+i} P_i + ι I: the first half of z
    /// pairs with Q, the second with P.
    pub fn wh(basis: AlgebraBasis, z: &[T], iota: T) -> Result<Self, AlgebraError> {
        let n = basis.n;
        if z.len() != 2 * n {
            return Err(AlgebraError::IndexOutOfRange(n));
        }
        let mut e = Self::zero(basis);
        for i in 0..n {
            e.coeffs[basis.index(Generator::Q(i))?] = z[i].clone();
            e.coeffs[basis.index(Generator::P(i))?] = z[n + i].clone();
        }
        e.coeffs[basis.dim() - 1] = iota;
        Ok(e)
    }

    /// Returns (z, ι) when the element lies in span{Q, P, I}.
    pub fn wh_part(&self) -> Option<(Vec<T>, T)> {
        let b = self.basis;
        if self.coeffs[..b.sp_dim()].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let n = b.n;
        let mut z = vec![T::zero(); 2 * n];
        for i in 0..n {
            z[i] = self.coeff(Generator::Q(i));
            z[n + i] = self.coeff(Generator::P(i));
        }
        Some((z, self.coeff(Generator::I)))
    }

    pub fn basis(&self) -> AlgebraBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, g: Generator) -> T {
        self.basis.index(g).map(|k| self.coeffs[k].clone()).unwrap_or_else(|_| T::zero())
    }

    pub fn set(&mut self, g: Generator, v: T) -> Result<(), AlgebraError> {
        let k = self.basis.index(g)?;
        self.coeffs[k] = v;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.basis != other.basis {
            return Err(AlgebraError::BasisMismatch(self.basis.n, other.basis.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(AlgebraElement {
            basis: self.basis,
            coeffs: crate::scalar::vec_add(&self.coeffs, &other.coeffs),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(AlgebraElement {
            basis: self.basis,
            coeffs: crate::scalar::vec_sub(&self.coeffs, &other.coeffs),
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        AlgebraElement { basis: self.basis, coeffs: crate::scalar::vec_scale(s, &self.coeffs) }
    }

    /// Nonzero terms as (generator, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Generator, &T)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.basis.generator(k), c))
    }
}

/// Bracket through the shipped hsp(2n) structure constants.
pub fn alg_bracket<T: Scalar>(
    x: &AlgebraElement<T>,
    y: &AlgebraElement<T>,
) -> Result<AlgebraElement<T>, AlgebraError> {
    x.check(y)?;
    let sc = structure::cached_hsp(x.basis.n);
    let coeffs = sc.bracket(x.coeffs(), y.coeffs());
    AlgebraElement::from_coeffs(x.basis, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn dimension_formula() {
        assert_eq!(AlgebraBasis::new(1).dim(), 1 + 2 + 2 + 1);
        assert_eq!(AlgebraBasis::new(2).dim(), 4 + 6 + 4 + 1);
        assert_eq!(AlgebraBasis::new(3).dim(), 28);
    }

    #[test]
    fn index_round_trip() {
        for n in 1..=4 {
            let b = AlgebraBasis::new(n);
            for k in 0..b.dim() {
                assert_eq!(b.index(b.generator(k)).unwrap(), k);
            }
        }
        let b = AlgebraBasis::new(2);
        assert_eq!(b.index(Generator::B(1, 0)), b.index(Generator::B(0, 1)));
        assert_eq!(b.index(Generator::Q(2)), Err(AlgebraError::IndexOutOfRange(2)));
    }

    #[test]
    fn labels_are_one_based() {
        let b = AlgebraBasis::new(2);
        let l = b.labels();
        assert_eq!(l[0], "A_11");
        assert_eq!(l[b.dim() - 1], "I");
        assert!(l.contains(&"C_12".to_string()));
    }

    #[test]
    fn wh_part_round_trip() {
        let b = AlgebraBasis::new(2);
        let z: Vec<Rational> = (1..=4).map(Rational::from_i64).collect();
        let w = AlgebraElement::wh(b, &z, Rational::from_i64(7)).unwrap();
        assert_eq!(w.coeff(Generator::Q(1)), Rational::from_i64(2));
        assert_eq!(w.coeff(Generator::P(0)), Rational::from_i64(3));
        assert_eq!(w.wh_part(), Some((z, Rational::from_i64(7))));
        let a = AlgebraElement::<Rational>::basis_element(b, Generator::A(0, 1)).unwrap();
        assert_eq!(a.wh_part(), None);
    }
}
