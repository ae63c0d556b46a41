//! Quadratic realization of sp(2n) in the enveloping algebra of h(n).
//!
//! Polynomials in Q_i, P_i and the central I are kept in normal order
//! (all Q left of all P) using P_iQ_j = Q_jP_i + δ_ij I. The realization is
//!
//! ```text
//! A_ij ↦ Q_iP_j,   B_ij ↦ −Q_iQ_j,   C_ij ↦ P_iP_j
//! ```
//!
//! and it reproduces the hsp(2n) brackets up to one factor of I and a
//! central constant: [ẽX, ẽY] = I·ẽ([X,Y]) + c_XY I².

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{AlgebraBasis, AlgebraError, Generator};
use crate::lie_algebra::structure::hsp_structure_constants;
use crate::scalar::{Rational, Scalar};

/// Normal-ordered monomial Q^q P^p I^i.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub q: Vec<u32>,
    pub p: Vec<u32>,
    pub i: u32,
}

impl Monomial {
    fn one(n: usize) -> Self {
        Monomial { q: vec![0; n], p: vec![0; n], i: 0 }
    }

    /// Total degree in Q and P.
    pub fn degree(&self) -> u32 {
        self.q.iter().chain(&self.p).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylPoly {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, t| acc * (n - t) as u64 / (t + 1) as u64)
}

fn factorial(k: u32) -> u64 {
    (1..=k as u64).product()
}

impl WeylPoly {
    pub fn zero(n: usize) -> Self {
        WeylPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn q(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.q[i] = 1;
        Self::monomial(n, m)
    }

    pub fn p(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.p[i] = 1;
        Self::monomial(n, m)
    }

    pub fn central(n: usize) -> Self {
        let mut m = Monomial::one(n);
        m.i = 1;
        Self::monomial(n, m)
    }

    fn monomial(n: usize, m: Monomial) -> Self {
        let mut p = Self::zero(n);
        p.add_term(m, Rational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product with normal ordering:
    /// P_i^b Q_i^c = Σ_k k!·C(b,k)·C(c,k)·Q_i^{c−k} P_i^{b−k} I^k.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                // expand each index independently, then take the product
                let mut partial: Vec<(Monomial, u64)> = vec![(
                    Monomial { q: ma.q.clone(), p: mb.p.clone(), i: ma.i + mb.i },
                    1,
                )];
                for idx in 0..self.n {
                    let (b, c) = (ma.p[idx], mb.q[idx]);
                    let mut next = Vec::new();
                    for (m, w) in &partial {
                        for k in 0..=b.min(c) {
                            let mut m2 = m.clone();
                            m2.q[idx] += c - k;
                            m2.p[idx] += b - k;
                            m2.i += k;
                            next.push((m2, w * factorial(k) * binomial(b, k) * binomial(c, k)));
                        }
                    }
                    partial = next;
                }
                for (m, w) in partial {
                    out.add_term(m, ca.clone() * cb.clone() * Rational::from_i64(w as i64));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Coefficient c when the polynomial is c·I^k, `None` otherwise.
    pub fn as_central(&self, k: u32) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0 && m.i == k).then(|| c.clone())
            }
            _ => None,
        }
    }
}

impl fmt::Display for WeylPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            for (i, &e) in m.q.iter().enumerate() {
                factors.extend(std::iter::repeat_n(format!("Q{}", i + 1), e as usize));
            }
            for (i, &e) in m.p.iter().enumerate() {
                factors.extend(std::iter::repeat_n(format!("P{}", i + 1), e as usize));
            }
            factors.extend(std::iter::repeat_n("I".to_string(), m.i as usize));
            let body = factors.join(" ");
            match (c == &Rational::one(), c == &-Rational::one(), body.is_empty()) {
                (true, _, false) => write!(f, "{body}")?,
                (_, true, false) => write!(f, "-{body}")?,
                (_, _, true) => write!(f, "{c}")?,
                _ => write!(f, "{c} {body}")?,
            }
        }
        Ok(())
    }
}

/// The quadratic monomial realizing a symplectic generator.
pub fn alg_enveloping_realize(n: usize, gen: Generator) -> Result<WeylPoly, AlgebraError> {
    match gen.canonical() {
        Generator::A(i, j) if i < n && j < n => Ok(WeylPoly::q(n, i).mul(&WeylPoly::p(n, j))),
        Generator::B(i, j) if j < n => {
            Ok(WeylPoly::q(n, i).mul(&WeylPoly::q(n, j)).scale(&-Rational::one()))
        }
        Generator::C(i, j) if j < n => Ok(WeylPoly::p(n, i).mul(&WeylPoly::p(n, j))),
        g if g.is_symplectic() => Err(AlgebraError::IndexOutOfRange(n)),
        g => Err(AlgebraError::NotSymplectic(g)),
    }
}

/// Image of any basis element: symplectic generators via
/// [`alg_enveloping_realize`], with A_ij Weyl-symmetrized to
/// ½(Q_iP_j + P_jQ_i) when `symmetric` is set; P, Q, I map to themselves.
pub fn envelope(n: usize, gen: Generator, symmetric: bool) -> Result<WeylPoly, AlgebraError> {
    match gen {
        Generator::P(i) if i < n => Ok(WeylPoly::p(n, i)),
        Generator::Q(i) if i < n => Ok(WeylPoly::q(n, i)),
        Generator::I => Ok(WeylPoly::central(n)),
        Generator::A(i, j) if symmetric && i == j && i < n => {
            let half = Rational::from_ratio(1, 2);
            Ok(alg_enveloping_realize(n, gen)?.add(&WeylPoly::central(n).scale(&half)))
        }
        g if g.is_symplectic() => alg_enveloping_realize(n, g),
        _ => Err(AlgebraError::IndexOutOfRange(n)),
    }
}

/// How many explicit factors of I the enveloping bracket carries.
pub fn central_power(x: Generator, y: Generator) -> u32 {
    match (x.is_symplectic(), y.is_symplectic()) {
        (false, false) => 0,
        _ => 1,
    }
}

/// Verified relation [ẽX, ẽY] = I^s·ẽ([X,Y]) + c·I^{2s}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopingRelation {
    pub x: Generator,
    pub y: Generator,
    /// The central constant c (exact, serialized as a string).
    #[serde(serialize_with = "ser_display")]
    pub central: Rational,
}

fn ser_display<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Checks every basis pair not involving I; returns the relations or the
/// first pair whose remainder is not central.
pub fn enveloping_relations(
    n: usize,
    symmetric: bool,
) -> Result<Vec<EnvelopingRelation>, (Generator, Generator, String)> {
    let basis = AlgebraBasis::new(n);
    let sc = hsp_structure_constants(n);
    let gens: Vec<Generator> = basis.generators().filter(|g| *g != Generator::I).collect();
    let image = |g| envelope(n, g, symmetric).expect("basis generator");
    let mut out = Vec::new();
    for (a, &x) in gens.iter().enumerate() {
        for &y in &gens[a + 1..] {
            let lhs = image(x).commutator(&image(y));
            let (ia, ib) = (basis.index(x).unwrap(), basis.index(y).unwrap());
            let mut rhs = WeylPoly::zero(n);
            for (c, v) in sc.get(ia, ib) {
                rhs = rhs.add(&image(basis.generator(*c)).scale(v));
            }
            let s = central_power(x, y);
            for _ in 0..s {
                rhs = rhs.mul(&WeylPoly::central(n));
            }
            let rem = lhs.sub(&rhs);
            match rem.as_central(2 * s) {
                Some(c) if s > 0 || c.is_zero() => out.push(EnvelopingRelation { x, y, central: c }),
                _ => return Err((x, y, rem.to_string())),
            }
        }
    }
    Ok(out)
}
