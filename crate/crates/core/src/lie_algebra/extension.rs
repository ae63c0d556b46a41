//! One-dimensional central extensions of a Lie algebra.
//!
//! Extending by a central generator I with [X_a, X_b]' = c_ab^c X_c + ω_ab I
//! is a Lie algebra iff ω is a 2-cocycle; it is trivial iff ω is a
//! coboundary, ω_ab = Σ_c c_ab^c λ_c for some λ.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use super::structure::{alg_jacobi_check, StructureConstants};
use crate::scalar::Rational;

#[derive(Debug, Error, PartialEq)]
pub enum ExtensionError {
    #[error("base constants violate the Jacobi identity at {0:?}")]
    BaseNotLie((String, String, String)),
    #[error("cocycle refers to basis index {0} outside the base")]
    IndexOutOfRange(usize),
}

/// Antisymmetric ω given by its values on pairs (a, b); (b, a) is implied.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Cocycle {
    values: BTreeMap<(usize, usize), Rational>,
}

impl Cocycle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, a: usize, b: usize, v: Rational) {
        assert_ne!(a, b, "ω(X, X) = 0");
        let (key, v) = if a < b { ((a, b), v) } else { ((b, a), -v) };
        if v.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, v);
        }
    }

    pub fn get(&self, a: usize, b: usize) -> Rational {
        if a < b {
            self.values.get(&(a, b)).cloned().unwrap_or_default()
        } else if a > b {
            -self.values.get(&(b, a)).cloned().unwrap_or_default()
        } else {
            Rational::zero()
        }
    }

    fn max_index(&self) -> Option<usize> {
        self.values.keys().map(|&(_, b)| b).max()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ExtensionClass {
    /// ω = δλ; the extension splits.
    Trivial {
        #[serde(skip)]
        lambda: Vec<Rational>,
    },
    Nontrivial,
    /// The extended constants fail Jacobi at this triple.
    Inconsistent { triple: (String, String, String) },
}

pub fn alg_central_extension_check(
    base: &StructureConstants,
    cocycle: &Cocycle,
) -> Result<ExtensionClass, ExtensionError> {
    let dim = base.dim();
    if let Some(k) = cocycle.max_index().filter(|&k| k >= dim) {
        return Err(ExtensionError::IndexOutOfRange(k));
    }
    let jac = alg_jacobi_check(base);
    if let Some(w) = jac.worst {
        return Err(ExtensionError::BaseNotLie(w));
    }
    // With base Jacobi, only the I-component of the extended Jacobi sum can fail:
    // Σ_cyc Σ_d c_ab^d ω(d, c) = 0.
    for a in 0..dim {
        for b in (a + 1)..dim {
            for c in (b + 1)..dim {
                let mut s = Rational::zero();
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    for (e, v) in base.get(x, y) {
                        s += v.clone() * cocycle.get(*e, z);
                    }
                }
                if !s.is_zero() {
                    let l = base.labels();
                    return Ok(ExtensionClass::Inconsistent {
                        triple: (l[a].clone(), l[b].clone(), l[c].clone()),
                    });
                }
            }
        }
    }
    // Coboundary system: one equation per pair a < b, unknowns λ_c.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut row = base.bracket_basis(a, b);
            row.push(cocycle.get(a, b));
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }
    Ok(match solve_consistent(rows, dim) {
        Some(lambda) => ExtensionClass::Trivial { lambda },
        None => ExtensionClass::Nontrivial,
    })
}

/// Exact row reduction of an augmented system; returns one solution (free
/// variables set to zero) or `None` when inconsistent.
fn solve_consistent(mut rows: Vec<Vec<Rational>>, unknowns: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v *= inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= f.clone() * pv.clone();
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][unknowns].clone();
    }
    Some(x)
}

/// isp(2n): hsp(2n) with the center removed.
pub fn isp_structure_constants(n: usize) -> StructureConstants {
    let hsp = super::structure::hsp_structure_constants(n);
    hsp.without(hsp.dim() - 1)
}

/// ω(P_i, Q_j) = δ_ij on the isp(2n) basis.
pub fn heisenberg_cocycle(isp: &StructureConstants, n: usize) -> Cocycle {
    let mut w = Cocycle::new();
    for i in 0..n {
        let p = isp.index_of(&format!("P_{}", i + 1)).expect("P label");
        let q = isp.index_of(&format!("Q_{}", i + 1)).expect("Q label");
        w.set(p, q, Rational::one());
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn heisenberg_cocycle_is_nontrivial() {
        for n in 1..=2 {
            let isp = isp_structure_constants(n);
            let w = heisenberg_cocycle(&isp, n);
            assert_eq!(alg_central_extension_check(&isp, &w), Ok(ExtensionClass::Nontrivial));
        }
    }

    #[test]
    fn abelian_zero_cocycle_is_trivial() {
        let a2 = StructureConstants::new(vec!["X".into(), "Y".into()]);
        assert!(matches!(
            alg_central_extension_check(&a2, &Cocycle::new()),
            Ok(ExtensionClass::Trivial { .. })
        ));
    }

    #[test]
    fn extra_cocycle_term_breaks_jacobi() {
        let isp = isp_structure_constants(1);
        let mut w = heisenberg_cocycle(&isp, 1);
        w.set(isp.index_of("A_11").unwrap(), isp.index_of("P_1").unwrap(), Rational::from_i64(1));
        assert!(matches!(
            alg_central_extension_check(&isp, &w),
            Ok(ExtensionClass::Inconsistent { .. })
        ));
    }

    #[test]
    fn coboundary_is_recognized_with_witness() {
        // ω = λ([·,·]) with λ(A_11) = 3 on isp(2)
        let isp = isp_structure_constants(1);
        let a = isp.index_of("A_11").unwrap();
        let mut lam = vec![Rational::zero(); isp.dim()];
        lam[a] = Rational::from_i64(3);
        let mut w = Cocycle::new();
        for x in 0..isp.dim() {
            for y in (x + 1)..isp.dim() {
                let v: Rational = isp.get(x, y).iter().map(|(c, v)| v.clone() * lam[*c].clone()).sum();
                w.set(x, y, v);
            }
        }
        match alg_central_extension_check(&isp, &w).unwrap() {
            ExtensionClass::Trivial { lambda } => {
                for x in 0..isp.dim() {
                    for y in (x + 1)..isp.dim() {
                        let v: Rational =
                            isp.get(x, y).iter().map(|(c, v)| v.clone() * lambda[*c].clone()).sum();
                        assert_eq!(v, w.get(x, y));
                    }
                }
            }
            other => panic!("expected trivial, got {other:?}"),
        }
    }
}
