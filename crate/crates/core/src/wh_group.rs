//! The Weyl-Heisenberg group H(n).
//!
//! Elements are Υ(p, q, ι) with p, q ∈ Rⁿ and ι ∈ R, multiplied by
//!
//! ```text
//! Υ(p',q',ι')·Υ(p,q,ι) = Υ(p'+p, q'+q, ι'+ι + ½(p'·q − q'·p))
//! ```
//!
//! The z-view stacks z = (p, q) ∈ R²ⁿ; with ζ the standard skew form the
//! central term reads ½ z'ᵗζz. The faithful matrix realization used here is
//!
//! ```text
//!        ┌ 1ₙ   0    0   p  ┐
//!        │ 0    1ₙ   0   q  │
//!        │ qᵗ  −pᵗ   1  −2ι │
//!        └ 0    0    0   1  ┘
//! ```
//!
//! The third row is −zᵗζ; the corner carries −2ι so that matrix
//! multiplication agrees with the product above (see `SIGNS.md`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::{dot, vec_add, vec_neg, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum WhError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("p and q must have the same positive length (got {0} and {1})")]
    BadShape(usize, usize),
    #[error("matrix does not match the Weyl-Heisenberg template: {0}")]
    NotWeylHeisenberg(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WhRepr<T>", into = "WhRepr<T>")]
#[serde(bound(serialize = "T: Serialize + Clone", deserialize = "T: Deserialize<'de>"))]
pub struct WHElement<T> {
    p: Vec<T>,
    q: Vec<T>,
    iota: T,
}

#[derive(Clone, Serialize, Deserialize)]
struct WhRepr<T> {
    n: usize,
    p: Vec<T>,
    q: Vec<T>,
    iota: T,
}

impl<T> TryFrom<WhRepr<T>> for WHElement<T> {
    type Error = WhError;
    fn try_from(r: WhRepr<T>) -> Result<Self, WhError> {
        if r.p.len() != r.n || r.q.len() != r.n || r.n == 0 {
            return Err(WhError::BadShape(r.p.len(), r.q.len()));
        }
        Ok(WHElement { p: r.p, q: r.q, iota: r.iota })
    }
}

impl<T> From<WHElement<T>> for WhRepr<T> {
    fn from(e: WHElement<T>) -> Self {
        WhRepr { n: e.p.len(), p: e.p, q: e.q, iota: e.iota }
    }
}

impl<T: Scalar> WHElement<T> {
    pub fn new(p: Vec<T>, q: Vec<T>, iota: T) -> Result<Self, WhError> {
        if p.len() != q.len() || p.is_empty() {
            return Err(WhError::BadShape(p.len(), q.len()));
        }
        Ok(WHElement { p, q, iota })
    }

    pub fn identity(n: usize) -> Self {
        WHElement { p: vec![T::zero(); n], q: vec![T::zero(); n], iota: T::zero() }
    }

    /// Builds Υ(z, ι) from the stacked vector z = (p, q).
    pub fn from_z(z: &[T], iota: T) -> Result<Self, WhError> {
        if !z.len().is_multiple_of(2) || z.is_empty() {
            return Err(WhError::BadShape(z.len(), z.len()));
        }
        let n = z.len() / 2;
        Self::new(z[..n].to_vec(), z[n..].to_vec(), iota)
    }

    /// Central element Υ(0, 0, ι).
    pub fn central(n: usize, iota: T) -> Self {
        WHElement { iota, ..Self::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[T] {
        &self.p
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    pub fn iota(&self) -> &T {
        &self.iota
    }

    pub fn z(&self) -> Vec<T> {
        self.p.iter().chain(&self.q).cloned().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.p.iter().chain(&self.q).all(|x| x.is_zero()) && self.iota.is_zero()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n() == other.n()
            && self.iota.approx_eq(&other.iota, tol)
            && self.p.iter().zip(&other.p).all(|(a, b)| a.approx_eq(b, tol))
            && self.q.iter().zip(&other.q).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn to_f64(&self) -> WHElement<f64> {
        WHElement {
            p: self.p.iter().map(Scalar::to_f64).collect(),
            q: self.q.iter().map(Scalar::to_f64).collect(),
            iota: self.iota.to_f64(),
        }
    }
}

fn same_dim<T: Scalar>(a: &WHElement<T>, b: &WHElement<T>) -> Result<(), WhError> {
    if a.n() != b.n() {
        return Err(WhError::DimensionMismatch(a.n(), b.n()));
    }
    Ok(())
}

pub fn wh_product<T: Scalar>(a: &WHElement<T>, b: &WHElement<T>) -> Result<WHElement<T>, WhError> {
    same_dim(a, b)?;
    let cross = dot(&a.p, &b.q) - dot(&a.q, &b.p);
    Ok(WHElement {
        p: vec_add(&a.p, &b.p),
        q: vec_add(&a.q, &b.q),
        iota: a.iota.clone() + b.iota.clone() + T::half() * cross,
    })
}

/// The same product written through the z-view: ι'' = ι' + ι + ½ z'ᵗζz.
pub fn wh_product_z<T: Scalar>(a: &WHElement<T>, b: &WHElement<T>) -> Result<WHElement<T>, WhError> {
    same_dim(a, b)?;
    let zeta = Matrix::<T>::symplectic_form(a.n());
    let za = a.z();
    let zb = b.z();
    let form = dot(&za, &zeta.mul_vec(&zb));
    WHElement::from_z(&vec_add(&za, &zb), a.iota.clone() + b.iota.clone() + T::half() * form)
}

pub fn wh_inverse<T: Scalar>(a: &WHElement<T>) -> WHElement<T> {
    WHElement { p: vec_neg(&a.p), q: vec_neg(&a.q), iota: -a.iota.clone() }
}

/// Inner automorphism ς_g h = g·h·g⁻¹ = Υ(h.p, h.q, h.ι + g.p·h.q − g.q·h.p).
pub fn wh_inner_aut<T: Scalar>(g: &WHElement<T>, h: &WHElement<T>) -> Result<WHElement<T>, WhError> {
    same_dim(g, h)?;
    Ok(WHElement {
        p: h.p.clone(),
        q: h.q.clone(),
        iota: h.iota.clone() + dot(&g.p, &h.q) - dot(&g.q, &h.p),
    })
}

pub fn wh_to_matrix<T: Scalar>(a: &WHElement<T>) -> Matrix<T> {
    let n = a.n();
    let d = 2 * n + 2;
    let mut m = Matrix::identity(d);
    for i in 0..n {
        m[(i, d - 1)] = a.p[i].clone();
        m[(n + i, d - 1)] = a.q[i].clone();
        m[(2 * n, i)] = a.q[i].clone();
        m[(2 * n, n + i)] = -a.p[i].clone();
    }
    m[(2 * n, d - 1)] = -T::two() * a.iota.clone();
    m
}

/// Reads (p, q, ι) back from a realization matrix, checking every fixed entry
/// of the template and the consistency of the duplicated p, q entries.
/// The check is exact for exact backends and uses `tol` otherwise.
pub fn wh_from_matrix<T: Scalar>(m: &Matrix<T>, tol: f64) -> Result<WHElement<T>, WhError> {
    let d = m.rows();
    if !m.is_square() || d < 4 || !d.is_multiple_of(2) {
        return Err(WhError::NotWeylHeisenberg(format!("shape {}x{}", m.rows(), m.cols())));
    }
    let n = (d - 2) / 2;
    let p: Vec<T> = (0..n).map(|i| m[(i, d - 1)].clone()).collect();
    let q: Vec<T> = (0..n).map(|i| m[(n + i, d - 1)].clone()).collect();
    let iota = -m[(2 * n, d - 1)].clone() * T::half();
    let candidate = WHElement { p, q, iota };
    let expected = wh_to_matrix(&candidate);
    for i in 0..d {
        for j in 0..d {
            if !m[(i, j)].approx_eq(&expected[(i, j)], tol) {
                return Err(WhError::NotWeylHeisenberg(format!(
                    "entry ({i},{j}) is {:?}, expected {:?}",
                    m[(i, j)],
                    expected[(i, j)]
                )));
            }
        }
    }
    Ok(candidate)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarSign {
    Plus,
    Minus,
}

/// Υ±(p, q, ι±): the same group element in polarized coordinates,
/// ι± = ι ∓ ½ p·q.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizedWHElement<T> {
    pub sign: PolarSign,
    p: Vec<T>,
    q: Vec<T>,
    iota: T,
}

impl<T: Scalar> PolarizedWHElement<T> {
    pub fn new(sign: PolarSign, p: Vec<T>, q: Vec<T>, iota: T) -> Result<Self, WhError> {
        if p.len() != q.len() || p.is_empty() {
            return Err(WhError::BadShape(p.len(), q.len()));
        }
        Ok(PolarizedWHElement { sign, p, q, iota })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[T] {
        &self.p
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    pub fn iota(&self) -> &T {
        &self.iota
    }
}

pub fn wh_polarize<T: Scalar>(a: &WHElement<T>, sign: PolarSign) -> PolarizedWHElement<T> {
    let shift = T::half() * dot(&a.p, &a.q);
    let iota = match sign {
        PolarSign::Plus => a.iota.clone() - shift,
        PolarSign::Minus => a.iota.clone() + shift,
    };
    PolarizedWHElement { sign, p: a.p.clone(), q: a.q.clone(), iota }
}

pub fn wh_depolarize<T: Scalar>(a: &PolarizedWHElement<T>) -> WHElement<T> {
    let shift = T::half() * dot(&a.p, &a.q);
    let iota = match a.sign {
        PolarSign::Plus => a.iota.clone() + shift,
        PolarSign::Minus => a.iota.clone() - shift,
    };
    WHElement { p: a.p.clone(), q: a.q.clone(), iota }
}

/// Product law in polarized coordinates:
/// `+`: ι'' = ι' + ι − q'·p;  `−`: ι'' = ι' + ι + p'·q.
pub fn polarized_product<T: Scalar>(
    a: &PolarizedWHElement<T>,
    b: &PolarizedWHElement<T>,
) -> Result<PolarizedWHElement<T>, WhError> {
    if a.n() != b.n() {
        return Err(WhError::DimensionMismatch(a.n(), b.n()));
    }
    if a.sign != b.sign {
        return Err(WhError::NotWeylHeisenberg("mixed polarizations".into()));
    }
    let cross = match a.sign {
        PolarSign::Plus => -dot(&a.q, &b.p),
        PolarSign::Minus => dot(&a.p, &b.q),
    };
    Ok(PolarizedWHElement {
        sign: a.sign,
        p: vec_add(&a.p, &b.p),
        q: vec_add(&a.q, &b.q),
        iota: a.iota.clone() + b.iota.clone() + cross,
    })
}

/// Upper triangular (n+2)-matrix realization of the polarized coordinates:
/// `+` ↦ [[1, qᵗ, −ι], [0, 1ₙ, p], [0, 0, 1]], `−` ↦ [[1, pᵗ, ι], [0, 1ₙ, q], [0, 0, 1]].
pub fn polarized_to_matrix<T: Scalar>(a: &PolarizedWHElement<T>) -> Matrix<T> {
    let n = a.n();
    let mut m = Matrix::identity(n + 2);
    let (row, col, corner) = match a.sign {
        PolarSign::Plus => (&a.q, &a.p, -a.iota.clone()),
        PolarSign::Minus => (&a.p, &a.q, a.iota.clone()),
    };
    for i in 0..n {
        m[(0, 1 + i)] = row[i].clone();
        m[(1 + i, n + 1)] = col[i].clone();
    }
    m[(0, n + 1)] = corner;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn el(p: &[i64], q: &[i64], num: i64, den: i64) -> WHElement<Rational> {
        WHElement::new(
            p.iter().map(|&x| r(x)).collect(),
            q.iter().map(|&x| r(x)).collect(),
            Rational::from_ratio(num, den),
        )
        .unwrap()
    }

    /// Oracle: read the product off the matrix realization.
    fn matrix_product(a: &WHElement<Rational>, b: &WHElement<Rational>) -> WHElement<Rational> {
        wh_from_matrix(&wh_to_matrix(a).mul(&wh_to_matrix(b)), 0.0).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = el(&[3], &[-2], 5, 7);
        let e = WHElement::identity(1);
        assert_eq!(wh_product(&e, &a).unwrap(), a);
        assert_eq!(wh_product(&a, &e).unwrap(), a);
    }

    #[test]
    fn product_n1_matches_matrix_oracle() {
        let a = el(&[1], &[0], 0, 1);
        let b = el(&[0], &[1], 0, 1);
        let expected = matrix_product(&a, &b);
        assert_eq!(expected, el(&[1], &[1], 1, 2));
        assert_eq!(wh_product(&a, &b).unwrap(), expected);
    }

    #[test]
    fn product_n2_matches_matrix_oracle() {
        let a = el(&[1, 2], &[0, 0], 0, 1);
        let b = el(&[0, 0], &[3, 4], 0, 1);
        let expected = matrix_product(&a, &b);
        assert_eq!(expected, el(&[1, 2], &[3, 4], 11, 2));
        assert_eq!(wh_product(&a, &b).unwrap(), expected);
    }

    #[test]
    fn z_form_agrees_with_pq_form() {
        let a = el(&[1, -2], &[3, 5], 1, 3);
        let b = el(&[-4, 1], &[2, 2], -7, 2);
        assert_eq!(wh_product_z(&a, &b).unwrap(), wh_product(&a, &b).unwrap());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(wh_inverse(&el(&[1], &[2], 3, 1)), el(&[-1], &[-2], -3, 1));
        let a = el(&[1], &[0], 1, 2);
        assert!(wh_product(&a, &wh_inverse(&a)).unwrap().is_identity());
    }

    #[test]
    fn inner_aut_examples_match_triple_product() {
        let triple = |g: &WHElement<Rational>, h: &WHElement<Rational>| {
            wh_product(&wh_product(g, h).unwrap(), &wh_inverse(g)).unwrap()
        };
        let g = el(&[1], &[0], 0, 1);
        let h = el(&[0], &[1], 0, 1);
        assert_eq!(triple(&g, &h), el(&[0], &[1], 1, 1));
        assert_eq!(wh_inner_aut(&g, &h).unwrap(), el(&[0], &[1], 1, 1));
        assert_eq!(wh_inner_aut(&h, &g).unwrap(), el(&[1], &[0], -1, 1));
        assert_eq!(triple(&h, &g), el(&[1], &[0], -1, 1));
        let c = el(&[0], &[0], 9, 4);
        assert_eq!(wh_inner_aut(&c, &h).unwrap(), h);
    }

    #[test]
    fn matrix_of_identity_and_generator() {
        assert_eq!(wh_to_matrix(&WHElement::<Rational>::identity(2)), Matrix::identity(6));
        let m = wh_to_matrix(&el(&[1], &[0], 0, 1));
        assert_eq!(m[(0, 3)], r(1));
        assert_eq!((m[(2, 0)].clone(), m[(2, 1)].clone()), (r(0), r(-1)));
        assert_eq!(m[(2, 3)], r(0));
    }

    #[test]
    fn from_matrix_rejects_broken_template() {
        let mut m = wh_to_matrix(&el(&[1], &[2], 0, 1));
        m[(1, 2)] = r(1);
        assert!(matches!(wh_from_matrix(&m, 0.0), Err(WhError::NotWeylHeisenberg(_))));
        let mut m = wh_to_matrix(&el(&[1], &[2], 0, 1));
        m[(2, 0)] = r(5);
        assert!(wh_from_matrix(&m, 0.0).is_err());
        let f = wh_to_matrix(&el(&[1], &[2], 0, 1).to_f64());
        let mut g = f.clone();
        g[(0, 0)] += 1e-13;
        assert!(wh_from_matrix(&g, 1e-12).is_ok());
        g[(0, 0)] += 1e-11;
        assert!(wh_from_matrix(&g, 1e-12).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = el(&[1], &[0], 0, 1);
        let b = el(&[1, 1], &[0, 0], 0, 1);
        assert_eq!(wh_product(&a, &b), Err(WhError::DimensionMismatch(1, 2)));
    }

    #[test]
    fn polarize_examples() {
        let a = el(&[2], &[0], 3, 1);
        for s in [PolarSign::Plus, PolarSign::Minus] {
            assert_eq!(wh_polarize(&a, s).iota(), &r(3));
        }
        let b = wh_polarize(&el(&[1], &[1], 0, 1), PolarSign::Plus);
        assert_eq!(b.iota(), &Rational::from_ratio(-1, 2));
    }

    #[test]
    fn polarized_product_generator_example() {
        // φ⁺ is the identity on Υ(1,0,0) and Υ(0,1,0); their product Υ(1,1,½)
        // polarizes to Υ⁺(1,1,0).
        let a = wh_polarize(&el(&[1], &[0], 0, 1), PolarSign::Plus);
        let b = wh_polarize(&el(&[0], &[1], 0, 1), PolarSign::Plus);
        let ab = polarized_product(&a, &b).unwrap();
        assert_eq!(ab.iota(), &r(0));
        let via_group = wh_polarize(&wh_product(&wh_depolarize(&a), &wh_depolarize(&b)).unwrap(), PolarSign::Plus);
        assert_eq!(ab, via_group);
    }

    #[test]
    fn polarized_factorizations() {
        let p = vec![r(2), r(-1)];
        let q = vec![r(3), r(5)];
        let zero = vec![r(0); 2];
        let pol = |s, p: &Vec<Rational>, q: &Vec<Rational>, i| {
            PolarizedWHElement::new(s, p.clone(), q.clone(), r(i)).unwrap()
        };
        // Υ⁺(p,0,ι)·Υ⁺(0,q,0) = Υ⁺(p,q,ι)
        let ab = polarized_product(&pol(PolarSign::Plus, &p, &zero, 4), &pol(PolarSign::Plus, &zero, &q, 0)).unwrap();
        assert_eq!(ab, pol(PolarSign::Plus, &p, &q, 4));
        // Υ⁻(0,q,ι)·Υ⁻(p,0,0) = Υ⁻(p,q,ι)
        let ab = polarized_product(&pol(PolarSign::Minus, &zero, &q, 4), &pol(PolarSign::Minus, &p, &zero, 0)).unwrap();
        assert_eq!(ab, pol(PolarSign::Minus, &p, &q, 4));
    }

    #[test]
    fn polarized_matrices_are_homomorphic() {
        let a = el(&[1, 2], &[-3, 1], 1, 2);
        let b = el(&[0, 5], &[2, -2], -3, 4);
        for s in [PolarSign::Plus, PolarSign::Minus] {
            let (pa, pb) = (wh_polarize(&a, s), wh_polarize(&b, s));
            let prod = polarized_product(&pa, &pb).unwrap();
            assert_eq!(
                polarized_to_matrix(&pa).mul(&polarized_to_matrix(&pb)),
                polarized_to_matrix(&prod)
            );
        }
    }

    #[test]
    fn json_round_trip_checks_shape() {
        let a = WHElement::new(vec![1.0, 2.0], vec![3.0, 4.0], 0.5).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"n\":2"));
        let b: WHElement<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let bad = r#"{"n":2,"p":[1.0],"q":[1.0,2.0],"iota":0.0}"#;
        assert!(serde_json::from_str::<WHElement<f64>>(bad).is_err());
    }
}
