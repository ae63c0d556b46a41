//! Sparse structure constants, the closed-form hsp(2n) table and the
//! Jacobi checker.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{AlgebraBasis, Generator};
use crate::scalar::{Rational, Scalar};

/// [X_a, X_b] = Σ_c c_ab^c X_c, stored sparsely for both orders of (a, b).
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    labels: Vec<String>,
    table: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl StructureConstants {
    pub fn new(labels: Vec<String>) -> Self {
        StructureConstants { labels, table: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sets [X_a, X_b]; [X_b, X_a] is set to the negative.
    pub fn set(&mut self, a: usize, b: usize, terms: Vec<(usize, Rational)>) {
        assert!(a < self.dim() && b < self.dim(), "basis index out of range");
        let terms: Vec<_> = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if a == b {
            assert!(terms.is_empty(), "[X, X] must vanish");
            return;
        }
        let neg = terms.iter().map(|(c, v)| (*c, -v.clone())).collect::<Vec<_>>();
        if terms.is_empty() {
            self.table.remove(&(a, b));
            self.table.remove(&(b, a));
        } else {
            self.table.insert((a, b), terms);
            self.table.insert((b, a), neg);
        }
    }

    pub fn get(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        self.table.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    /// Dense coordinates of [X_a, X_b].
    pub fn bracket_basis(&self, a: usize, b: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (c, v) in self.get(a, b) {
            out[*c] = v.clone();
        }
        out
    }

    /// Bilinear extension to coefficient vectors.
    pub fn bracket<T: Scalar>(&self, x: &[T], y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        for (&(a, b), terms) in &self.table {
            if x[a].is_zero() || y[b].is_zero() {
                continue;
            }
            let w = x[a].clone() * y[b].clone();
            for (c, v) in terms {
                out[*c] = out[*c].clone() + w.clone() * T::from_rational(v);
            }
        }
        out
    }

    /// Drops generator `idx` together with every component along it.
    /// This is the quotient by `idx` when that generator is central.
    pub fn without(&self, idx: usize) -> Self {
        let remap = |k: usize| if k < idx { k } else { k - 1 };
        let mut labels = self.labels.clone();
        labels.remove(idx);
        let mut out = StructureConstants::new(labels);
        for (&(a, b), terms) in &self.table {
            if a == idx || b == idx || a > b {
                continue;
            }
            let kept = terms
                .iter()
                .filter(|(c, _)| *c != idx)
                .map(|(c, v)| (remap(*c), v.clone()))
                .collect();
            out.set(remap(a), remap(b), kept);
        }
        out
    }

    /// Nonzero entries with a < b, as serialized for external tools.
    pub fn sparse_entries(&self) -> Vec<SparseEntry> {
        let mut out = Vec::new();
        for (&(a, b), terms) in &self.table {
            if a < b {
                for (c, v) in terms {
                    out.push(SparseEntry {
                        a: self.labels[a].clone(),
                        b: self.labels[b].clone(),
                        c: self.labels[*c].clone(),
                        value: v.to_string(),
                    });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> SparseTensor {
        SparseTensor { dim: self.dim(), labels: self.labels.clone(), entries: self.sparse_entries() }
    }
}

/// One structure constant c_ab^c; `value` is an exact rational "p/q".
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseTensor {
    pub dim: usize,
    pub labels: Vec<String>,
    pub entries: Vec<SparseEntry>,
}

fn d(i: usize, j: usize) -> i64 {
    (i == j) as i64
}

/// Closed-form brackets of basis symbols (before canonicalizing B/C indices).
fn table_bracket(x: Generator, y: Generator) -> Option<Vec<(Generator, i64)>> {
    use Generator::*;
    Some(match (x, y) {
        (A(i, j), A(k, l)) => vec![(A(i, l), d(j, k)), (A(k, j), -d(i, l))],
        (A(i, j), B(k, l)) => vec![(B(i, l), d(j, k)), (B(i, k), d(j, l))],
        (A(i, j), C(k, l)) => vec![(C(j, l), -d(i, k)), (C(j, k), -d(i, l))],
        (A(i, j), Q(k)) => vec![(Q(i), d(j, k))],
        (A(i, j), P(k)) => vec![(P(j), -d(i, k))],
        (B(i, j), C(k, l)) => vec![
            (A(i, l), d(j, k)),
            (A(i, k), d(j, l)),
            (A(j, l), d(i, k)),
            (A(j, k), d(i, l)),
        ],
        (B(i, j), P(k)) => vec![(Q(i), d(j, k)), (Q(j), d(i, k))],
        (C(i, j), Q(k)) => vec![(P(i), d(j, k)), (P(j), d(i, k))],
        (P(i), Q(j)) => vec![(I, d(i, j))],
        (B(..), B(..)) | (C(..), C(..)) | (B(..), Q(_)) | (C(..), P(_)) => vec![],
        (P(_), P(_)) | (Q(_), Q(_)) | (_, I) | (I, _) => vec![],
        _ => return None,
    })
}

/// The hsp(2n) structure constants from the closed-form bracket table.
pub fn hsp_structure_constants(n: usize) -> StructureConstants {
    let basis = AlgebraBasis::new(n);
    let mut sc = StructureConstants::new(basis.labels());
    for a in 0..basis.dim() {
        for b in (a + 1)..basis.dim() {
            let (x, y) = (basis.generator(a), basis.generator(b));
            let (terms, sign) = match table_bracket(x, y) {
                Some(t) => (t, 1),
                None => (table_bracket(y, x).expect("table covers every pair"), -1),
            };
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (g, c) in terms {
                if c != 0 {
                    *acc.entry(basis.index(g).expect("indices in range")).or_default() += sign * c;
                }
            }
            sc.set(a, b, acc.into_iter().map(|(k, v)| (k, Rational::from_i64(v))).collect());
        }
    }
    sc
}

pub(crate) fn cached_hsp(n: usize) -> Arc<StructureConstants> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<StructureConstants>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("structure constant cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(hsp_structure_constants(n))).clone()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiReport {
    pub triples_checked: usize,
    /// Largest |component| of [[X_a,X_b],X_c] + cyclic, exact.
    #[serde(serialize_with = "ser_rational")]
    pub max_residual: Rational,
    /// First triple attaining the maximum, as labels.
    pub worst: Option<(String, String, String)>,
}

impl JacobiReport {
    pub fn is_exact_zero(&self) -> bool {
        self.max_residual.is_zero()
    }
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(r.to_f64())
}

/// Dense Jacobi sum for one triple.
pub fn jacobi_sum(sc: &StructureConstants, a: usize, b: usize, c: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); sc.dim()];
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        for (e, v) in sc.get(x, y) {
            for (f, w) in sc.get(*e, z) {
                out[*f] += v.clone() * w.clone();
            }
        }
    }
    out
}

/// Enumerates all triples a < b < c (the Jacobi sum is alternating, so this
/// covers every triple).
pub fn alg_jacobi_check(sc: &StructureConstants) -> JacobiReport {
    let dim = sc.dim();
    let mut max = Rational::zero();
    let mut worst = None;
    let mut count = 0;
    for a in 0..dim {
        for b in (a + 1)..dim {
            for c in (b + 1)..dim {
                count += 1;
                let r = jacobi_sum(sc, a, b, c).into_iter().map(|v| v.abs()).max().unwrap_or_default();
                if r > max {
                    max = r;
                    worst = Some((sc.labels[a].clone(), sc.labels[b].clone(), sc.labels[c].clone()));
                }
            }
        }
    }
    JacobiReport { triples_checked: count, max_residual: max, worst }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::{alg_bracket, AlgebraElement};

    fn gen(n: usize, g: Generator) -> AlgebraElement<Rational> {
        AlgebraElement::basis_element(AlgebraBasis::new(n), g).unwrap()
    }

    #[test]
    fn heisenberg_examples() {
        use Generator::*;
        let br = |x, y| alg_bracket(&gen(2, x), &gen(2, y)).unwrap();
        assert_eq!(br(P(0), Q(0)), gen(2, I));
        assert!(br(P(0), Q(1)).is_zero());
        assert_eq!(br(A(0, 1), Q(1)), gen(2, Q(0)));
        assert!(br(A(0, 1), A(0, 1)).is_zero());
    }

    #[test]
    fn diagonal_symmetric_generators_double() {
        use Generator::*;
        let br = |x, y| alg_bracket(&gen(2, x), &gen(2, y)).unwrap();
        assert_eq!(br(A(0, 1), B(1, 1)), gen(2, B(0, 1)).scale(&Rational::from_i64(2)));
        assert_eq!(br(B(0, 0), P(0)), gen(2, Q(0)).scale(&Rational::from_i64(2)));
    }

    #[test]
    fn jacobi_holds_for_small_n() {
        for n in 1..=2 {
            let r = alg_jacobi_check(&hsp_structure_constants(n));
            assert!(r.is_exact_zero(), "n = {n}: {r:?}");
            assert_eq!(r.worst, None);
        }
    }

    #[test]
    fn jacobi_detects_scaled_heisenberg_bracket() {
        let basis = AlgebraBasis::new(2);
        let mut sc = hsp_structure_constants(2);
        let (p, q, i) = (
            basis.index(Generator::P(0)).unwrap(),
            basis.index(Generator::Q(0)).unwrap(),
            basis.index(Generator::I).unwrap(),
        );
        sc.set(p, q, vec![(i, Rational::from_i64(2))]);
        let r = alg_jacobi_check(&sc);
        assert!(!r.is_exact_zero());
        assert!(r.worst.is_some());
    }

    #[test]
    fn without_drops_central_generator() {
        let sc = hsp_structure_constants(1);
        let isp = sc.without(sc.dim() - 1);
        assert_eq!(isp.dim(), 5);
        let (p, q) = (isp.index_of("P_1").unwrap(), isp.index_of("Q_1").unwrap());
        assert!(isp.get(p, q).is_empty());
        assert!(alg_jacobi_check(&isp).is_exact_zero());
    }

    #[test]
    fn sparse_export_lists_upper_pairs() {
        let t = hsp_structure_constants(1).to_json();
        assert!(t.entries.iter().any(|e| e.a == "P_1" && e.b == "Q_1" && e.c == "I" && e.value == "1"));
        let js = serde_json::to_string(&t).unwrap();
        assert!(js.contains("\"dim\":6"));
    }
}
