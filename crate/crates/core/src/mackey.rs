//! Mackey's induced representations for H(n) ≅ A(n) ⋉ A(n+1).
//!
//! The normal subgroup is A(n+1) = {Υ(p, 0, ι)}. Its characters are
//! ξ_{α,λ}(Υ(p,0,ι)) = e^{i(ιλ + p·α)}, the coset space K = H(n)/A(n+1) is
//! parameterized by x ∈ Rⁿ with section Θ(k_x) = Υ(0, x, 0), and for λ ≠ 0
//! the induced representation acts on ψ(x) by
//!
//! ```text
//! (ϱ(Υ(p,q,ι))ψ)(x) = e^{iλ(ι + x·p − ½p·q)} ψ(x − q)
//! ```
//!
//! Actions are kept symbolic as [`ActionDescriptor`]s (affine phase plus
//! shift), so every identity here can be checked with exact rationals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{dot, vec_add, vec_neg, vec_scale, vec_sub, Scalar};
use crate::wh_group::{wh_inverse, wh_product, WHElement, WhError};

#[derive(Debug, Error, PartialEq)]
pub enum MackeyError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("element is not in the normal subgroup (q must vanish)")]
    NotInNormalSubgroup,
    #[error("lambda = 0 gives a degenerate (character) representation; use char_eval")]
    DegenerateLambda,
    #[error(transparent)]
    Wh(#[from] WhError),
}

/// ξ_{α,λ}: a character of A(n+1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Character<T> {
    pub alpha: Vec<T>,
    pub lambda: T,
}

impl<T: Scalar> Character<T> {
    pub fn new(alpha: Vec<T>, lambda: T) -> Self {
        Character { alpha, lambda }
    }

    /// ξ_{0,λ}.
    pub fn faithful(n: usize, lambda: T) -> Self {
        Character { alpha: vec![T::zero(); n], lambda }
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }
}

/// The coset k_x ∈ K ≅ Rⁿ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct CosetPoint<T> {
    pub x: Vec<T>,
}

impl<T: Scalar> CosetPoint<T> {
    pub fn new(x: Vec<T>) -> Self {
        CosetPoint { x }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Θ(k_x) = Υ(0, x, 0).
    pub fn section(&self) -> WHElement<T> {
        WHElement::new(vec![T::zero(); self.n()], self.x.clone(), T::zero())
            .expect("coset point has positive dimension")
    }
}

fn same_n(a: usize, b: usize) -> Result<(), MackeyError> {
    if a != b {
        return Err(MackeyError::DimensionMismatch(a, b));
    }
    Ok(())
}

fn in_normal_subgroup<T: Scalar>(g: &WHElement<T>) -> bool {
    g.q().iter().all(|v| v.is_zero())
}

/// The real argument ιλ + p·α of ξ_{α,λ}(Υ(p,0,ι)).
pub fn char_phase<T: Scalar>(chi: &Character<T>, g: &WHElement<T>) -> Result<T, MackeyError> {
    same_n(chi.n(), g.n())?;
    if !in_normal_subgroup(g) {
        return Err(MackeyError::NotInNormalSubgroup);
    }
    Ok(g.iota().clone() * chi.lambda.clone() + dot(g.p(), &chi.alpha))
}

/// ξ_{α,λ}(Υ(p,0,ι)) = e^{i(ιλ + p·α)}.
pub fn char_eval<T: Scalar>(chi: &Character<T>, g: &WHElement<T>) -> Result<Complex64, MackeyError> {
    Ok(Complex64::from_polar(1.0, char_phase(chi, g)?.to_f64()))
}

/// The dual action of Υ(0,q,0) on characters: ξ_{α,λ} ↦ ξ_{α−λq,λ}, i.e.
/// h ↦ ξ_{α,λ}(Υ(0,q,0)⁻¹ h Υ(0,q,0)).
pub fn dual_action<T: Scalar>(q: &[T], chi: &Character<T>) -> Result<Character<T>, MackeyError> {
    same_n(q.len(), chi.n())?;
    Ok(Character {
        alpha: vec_sub(&chi.alpha, &vec_scale(&chi.lambda, q)),
        lambda: chi.lambda.clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum LittleGroup<T> {
    /// λ = 0: every q fixes the character.
    Full,
    /// λ ≠ 0: only q = 0 fixes it; ξ_{0,λ} represents the orbit.
    Trivial { representative: Character<T> },
}

pub fn little_group_solve<T: Scalar>(chi: &Character<T>) -> LittleGroup<T> {
    if chi.lambda.is_zero() {
        LittleGroup::Full
    } else {
        LittleGroup::Trivial { representative: Character::faithful(chi.n(), chi.lambda.clone()) }
    }
}

/// The q = α/λ that moves ξ_{α,λ} to ξ_{0,λ}.
pub fn orbit_transport<T: Scalar>(chi: &Character<T>) -> Result<Vec<T>, MackeyError> {
    if chi.lambda.is_zero() {
        return Err(MackeyError::DegenerateLambda);
    }
    let inv = T::one() / chi.lambda.clone();
    Ok(vec_scale(&inv, &chi.alpha))
}

/// (g°, g⁻¹k_x) with g° = Θ(k_x)⁻¹ g Θ(g⁻¹k_x) = Υ(p, 0, ι + p·(x − ½q))
/// and g⁻¹k_x = k_{x−q}.
pub fn coset_cocycle<T: Scalar>(
    g: &WHElement<T>,
    x: &CosetPoint<T>,
) -> Result<(WHElement<T>, CosetPoint<T>), MackeyError> {
    same_n(g.n(), x.n())?;
    let moved = CosetPoint::new(vec_sub(&x.x, g.q()));
    let shifted = vec_sub(&x.x, &vec_scale(&T::half(), g.q()));
    let iota = g.iota().clone() + dot(g.p(), &shifted);
    let g0 = WHElement::new(g.p().to_vec(), vec![T::zero(); g.n()], iota)?;
    Ok((g0, moved))
}

/// The cocycle computed literally as a triple product; used as a check on
/// [`coset_cocycle`].
pub fn coset_cocycle_by_product<T: Scalar>(
    g: &WHElement<T>,
    x: &CosetPoint<T>,
) -> Result<(WHElement<T>, CosetPoint<T>), MackeyError> {
    same_n(g.n(), x.n())?;
    let moved = CosetPoint::new(vec_sub(&x.x, g.q()));
    let g0 = wh_product(&wh_product(&wh_inverse(&x.section()), g)?, &moved.section())?;
    Ok((g0, moved))
}

/// ψ(x) ↦ e^{iφ(x)} ψ(x − shift) with φ(x) = constant + linear·x.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ActionDescriptor<T> {
    pub constant: T,
    pub linear: Vec<T>,
    pub shift: Vec<T>,
}

impl<T: Scalar> ActionDescriptor<T> {
    pub fn identity(n: usize) -> Self {
        ActionDescriptor { constant: T::zero(), linear: vec![T::zero(); n], shift: vec![T::zero(); n] }
    }

    pub fn n(&self) -> usize {
        self.shift.len()
    }

    pub fn phase_at(&self, x: &[T]) -> T {
        self.constant.clone() + dot(&self.linear, x)
    }

    /// The action of `self` after `other`: φ(x) = φ₁(x) + φ₂(x − s₁),
    /// shift s₁ + s₂.
    pub fn compose(&self, other: &Self) -> Result<Self, MackeyError> {
        same_n(self.n(), other.n())?;
        Ok(ActionDescriptor {
            constant: self.constant.clone() + other.phase_at(&vec_neg(&self.shift)),
            linear: vec_add(&self.linear, &other.linear),
            shift: vec_add(&self.shift, &other.shift),
        })
    }

    pub fn to_f64(&self) -> ActionDescriptor<f64> {
        ActionDescriptor {
            constant: self.constant.to_f64(),
            linear: self.linear.iter().map(Scalar::to_f64).collect(),
            shift: self.shift.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// Which abelian normal subgroup the representation is induced from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    /// A(n+1) = {Υ(p,0,ι)}; Q̂ is diagonal.
    #[default]
    Position,
    /// {Υ(0,q,ι)}; P̂ is diagonal. Realized by precomposing with the
    /// exchange automorphism Υ(p,q,ι) ↦ Υ(−q,p,ι).
    Momentum,
}

fn exchange<T: Scalar>(g: &WHElement<T>) -> WHElement<T> {
    WHElement::new(vec_neg(g.q()), g.p().to_vec(), g.iota().clone()).expect("same shape")
}

/// The closed-form descriptor: phase λ(ι + x·p − ½p·q), shift q.
pub fn induce_rep_closed<T: Scalar>(g: &WHElement<T>, lambda: &T) -> Result<ActionDescriptor<T>, MackeyError> {
    if lambda.is_zero() {
        return Err(MackeyError::DegenerateLambda);
    }
    let constant = lambda.clone() * (g.iota().clone() - T::half() * dot(g.p(), g.q()));
    Ok(ActionDescriptor { constant, linear: vec_scale(lambda, g.p()), shift: g.q().to_vec() })
}

/// The descriptor built along the Mackey route: (ϱ(g)ψ)(x) =
/// ξ_{0,λ}(g°)ψ(x − q) with g° from [`coset_cocycle`]. The affine phase is
/// read off at x = 0 and x = e_k.
pub fn induce_rep<T: Scalar>(
    g: &WHElement<T>,
    lambda: &T,
    polarization: Polarization,
) -> Result<ActionDescriptor<T>, MackeyError> {
    if lambda.is_zero() {
        return Err(MackeyError::DegenerateLambda);
    }
    let g = match polarization {
        Polarization::Position => g.clone(),
        Polarization::Momentum => exchange(g),
    };
    let n = g.n();
    let chi = Character::faithful(n, lambda.clone());
    let phase = |x: Vec<T>| -> Result<(T, Vec<T>), MackeyError> {
        let (g0, moved) = coset_cocycle(&g, &CosetPoint::new(x))?;
        Ok((char_phase(&chi, &g0)?, moved.x))
    };
    let origin = vec![T::zero(); n];
    let (constant, moved) = phase(origin.clone())?;
    let shift = vec_neg(&moved);
    let mut linear = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = origin.clone();
        e[k] = T::one();
        linear.push(phase(e)?.0 - constant.clone());
    }
    Ok(ActionDescriptor { constant, linear, shift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::wh_group::wh_inner_aut;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| r(x)).collect()
    }

    fn wh(p: &[i64], q: &[i64], iota: Rational) -> WHElement<Rational> {
        WHElement::new(rv(p), rv(q), iota).unwrap()
    }

    #[test]
    fn char_eval_examples() {
        let g = WHElement::new(vec![0.0], vec![0.0], std::f64::consts::PI).unwrap();
        assert!((char_eval(&Character::new(vec![0.0], 1.0), &g).unwrap() + 1.0).norm() < 1e-15);
        let g = WHElement::new(vec![2.5], vec![0.0], 7.0).unwrap();
        assert_eq!(char_eval(&Character::new(vec![0.0], 0.0), &g).unwrap(), Complex64::new(1.0, 0.0));
        let bad = WHElement::new(vec![0.0], vec![1.0], 0.0).unwrap();
        assert_eq!(char_eval(&Character::new(vec![0.0], 1.0), &bad), Err(MackeyError::NotInNormalSubgroup));
    }

    #[test]
    fn dual_action_matches_conjugation() {
        let chi = Character::new(rv(&[3]), r(1));
        assert_eq!(dual_action(&rv(&[2]), &chi).unwrap(), Character::new(rv(&[1]), r(1)));
        let chi = Character::new(rv(&[3, -1]), Rational::from_ratio(2, 3));
        let q = rv(&[2, 5]);
        let h = wh(&[1, 4], &[0, 0], r(3));
        let theta = WHElement::new(rv(&[0, 0]), q.clone(), r(0)).unwrap();
        let conj = wh_inner_aut(&theta, &h).unwrap();
        assert_eq!(
            char_phase(&dual_action(&q, &chi).unwrap(), &h).unwrap(),
            char_phase(&chi, &conj).unwrap()
        );
    }

    #[test]
    fn little_groups() {
        assert_eq!(little_group_solve(&Character::new(rv(&[4]), r(0))), LittleGroup::Full);
        assert_eq!(
            little_group_solve(&Character::new(rv(&[5, 1]), r(-2))),
            LittleGroup::Trivial { representative: Character::faithful(2, r(-2)) }
        );
        let chi = Character::new(rv(&[5, 1]), r(-2));
        let q = orbit_transport(&chi).unwrap();
        assert_eq!(dual_action(&q, &chi).unwrap(), Character::faithful(2, r(-2)));
    }

    #[test]
    fn cocycle_examples() {
        let x = CosetPoint::new(rv(&[0]));
        let (g0, k) = coset_cocycle(&wh(&[1], &[1], r(0)), &x).unwrap();
        assert_eq!(g0, wh(&[1], &[0], Rational::from_ratio(-1, 2)));
        assert_eq!(k, CosetPoint::new(rv(&[-1])));
        let x = CosetPoint::new(rv(&[3]));
        let (g0, k) = coset_cocycle(&wh(&[0], &[2], r(0)), &x).unwrap();
        assert!(g0.is_identity());
        assert_eq!(k.x, rv(&[1]));
        let g = wh(&[2, -1], &[3, 1], r(5));
        let x = CosetPoint::new(vec![Rational::from_ratio(1, 3), r(-2)]);
        assert_eq!(coset_cocycle(&g, &x).unwrap(), coset_cocycle_by_product(&g, &x).unwrap());
    }

    #[test]
    fn induced_examples() {
        let l = r(3);
        let d = induce_rep(&wh(&[0], &[0], r(2)), &l, Polarization::Position).unwrap();
        assert_eq!(d, ActionDescriptor { constant: r(6), linear: rv(&[0]), shift: rv(&[0]) });
        let d = induce_rep(&wh(&[0], &[4], r(0)), &l, Polarization::Position).unwrap();
        assert_eq!(d, ActionDescriptor { constant: r(0), linear: rv(&[0]), shift: rv(&[4]) });
        let d = induce_rep(&wh(&[2], &[0], r(0)), &l, Polarization::Position).unwrap();
        assert_eq!(d, ActionDescriptor { constant: r(0), linear: rv(&[6]), shift: rv(&[0]) });
        assert_eq!(induce_rep(&wh(&[1], &[1], r(0)), &r(0), Polarization::Position), Err(MackeyError::DegenerateLambda));
    }

    #[test]
    fn mackey_route_equals_closed_form() {
        let g = wh(&[2, -1, 3], &[1, 4, -2], Rational::from_ratio(7, 5));
        let l = Rational::from_ratio(-3, 2);
        assert_eq!(induce_rep(&g, &l, Polarization::Position).unwrap(), induce_rep_closed(&g, &l).unwrap());
    }

    #[test]
    fn descriptors_compose_like_the_group() {
        let l = Rational::from_ratio(5, 2);
        let a = wh(&[1, -2], &[3, 1], r(2));
        let b = wh(&[-4, 1], &[2, 2], Rational::from_ratio(1, 3));
        for pol in [Polarization::Position, Polarization::Momentum] {
            let da = induce_rep(&a, &l, pol).unwrap();
            let db = induce_rep(&b, &l, pol).unwrap();
            let dab = induce_rep(&wh_product(&a, &b).unwrap(), &l, pol).unwrap();
            assert_eq!(da.compose(&db).unwrap(), dab);
        }
    }

    #[test]
    fn momentum_polarization_diagonalizes_translations() {
        let l = r(2);
        let d = induce_rep(&wh(&[0], &[3], r(0)), &l, Polarization::Momentum).unwrap();
        assert_eq!(d.shift, rv(&[0]));
        assert_eq!(d.linear, rv(&[-6]));
    }
}
