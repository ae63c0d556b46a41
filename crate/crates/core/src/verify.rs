//! Seeded property suites over every module, producing a machine-readable
//! [`VerifyReport`].
//!
//! Each [`Criterion`] is a group of records `{name, samples, max_residual,
//! tolerance, pass}`. Exact checks use tolerance 0 and report the largest
//! absolute exact discrepancy. Reports are deterministic for a fixed config.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut_group::{aut_act_algebra, aut_act_wh, aut_inverse, aut_product, aut_to_matrix, is_central_invariant, AutElement};
use crate::hilbert_rep::{
    dilation_escape, enveloping_grid_residuals, grid_fft, intertwine_residual, phase_compare, pq_operators,
    relative_error, rho_minus, rho_plus, rho_sigma, rho_unitary, rho_zeta, upsilon_apply, xi_apply, CanonicalOperator,
    FftDirection, GridSpec, GridWavefunction, HilbertError, RepConfig,
};
use crate::lie_algebra::extension::{heisenberg_cocycle, isp_structure_constants};
use crate::lie_algebra::realization::structure_from_realization;
use crate::lie_algebra::{
    alg_central_extension_check, alg_jacobi_check, hsp_structure_constants, AlgebraBasis, AlgebraElement, ExtensionClass,
    Generator,
};
use crate::mackey::{coset_cocycle, coset_cocycle_by_product, induce_rep, induce_rep_closed, ActionDescriptor, CosetPoint, Polarization};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};
use crate::symplectic::{sigma_minus, sigma_plus, sp_compose_factors, sp_factorize, sp_random, sp_random_rational, SymplecticMatrix};
use crate::wh_group::{wh_inverse, wh_product, wh_to_matrix, WHElement};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    WhGroup,
    AutGroup,
    Symplectic,
    LieAlgebra,
    Mackey,
    HilbertRep,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::WhGroup, Suite::AutGroup, Suite::Symplectic, Suite::LieAlgebra, Suite::Mackey, Suite::HilbertRep];

    pub fn name(self) -> &'static str {
        match self {
            Suite::WhGroup => "wh_group",
            Suite::AutGroup => "aut_group",
            Suite::Symplectic => "symplectic",
            Suite::LieAlgebra => "lie_algebra",
            Suite::Mackey => "mackey",
            Suite::HilbertRep => "hilbert_rep",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| VerifyError::UnknownSuite(s.into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    GroupLaw,
    Automorphisms,
    CenterCriterion,
    Factorization,
    AlgebraIntegrity,
    MackeyPipeline,
    GridCommutators,
    XiRepresentation,
    Intertwining,
    ProjectiveComposition,
    Unitarity,
    EnvelopingGrid,
}

impl Criterion {
    pub const ALL: [Criterion; 12] = [
        Criterion::GroupLaw,
        Criterion::Automorphisms,
        Criterion::CenterCriterion,
        Criterion::Factorization,
        Criterion::AlgebraIntegrity,
        Criterion::MackeyPipeline,
        Criterion::GridCommutators,
        Criterion::XiRepresentation,
        Criterion::Intertwining,
        Criterion::ProjectiveComposition,
        Criterion::Unitarity,
        Criterion::EnvelopingGrid,
    ];

    pub fn suite(self) -> Suite {
        match self {
            Criterion::GroupLaw => Suite::WhGroup,
            Criterion::Automorphisms | Criterion::CenterCriterion => Suite::AutGroup,
            Criterion::Factorization => Suite::Symplectic,
            Criterion::AlgebraIntegrity => Suite::LieAlgebra,
            Criterion::MackeyPipeline => Suite::Mackey,
            _ => Suite::HilbertRep,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::GroupLaw => "group_law",
            Criterion::Automorphisms => "automorphisms",
            Criterion::CenterCriterion => "center_criterion",
            Criterion::Factorization => "factorization",
            Criterion::AlgebraIntegrity => "algebra_integrity",
            Criterion::MackeyPipeline => "mackey_pipeline",
            Criterion::GridCommutators => "grid_commutators",
            Criterion::XiRepresentation => "xi_representation",
            Criterion::Intertwining => "intertwining",
            Criterion::ProjectiveComposition => "projective_composition",
            Criterion::Unitarity => "unitarity",
            Criterion::EnvelopingGrid => "enveloping_grid",
        }
    }

    fn seed_offset(self) -> u64 {
        // distinct streams per criterion
        0x9e37_79b9_7f4a_7c15u64.wrapping_mul(self as u64 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// A suite name or "all".
    pub suite: String,
    /// Restricts every suite to this dimension.
    pub n: Option<usize>,
    /// Overrides the per-check grid size.
    #[serde(rename = "N")]
    pub grid_points: Option<usize>,
    /// Overrides the per-check box length.
    #[serde(rename = "L")]
    pub grid_length: Option<f64>,
    pub lambda: f64,
    pub seed: u64,
    /// Record name → tolerance.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suite: "all".into(),
            n: None,
            grid_points: None,
            grid_length: None,
            lambda: 1.0,
            seed: 0,
            tolerances: BTreeMap::new(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        self.suites()?;
        if self.n == Some(0) {
            return Err(VerifyError::InvalidConfig("n must be positive".into()));
        }
        if self.lambda == 0.0 || !self.lambda.is_finite() {
            return Err(VerifyError::InvalidConfig("lambda must be nonzero and finite".into()));
        }
        if let Some(np) = self.grid_points {
            if np < 8 || !np.is_power_of_two() {
                return Err(VerifyError::InvalidConfig(format!("N = {np} must be a power of two >= 8")));
            }
        }
        if let Some(l) = self.grid_length {
            if !(l.is_finite() && l > 0.0) {
                return Err(VerifyError::InvalidConfig(format!("L = {l} must be positive")));
            }
        }
        for (k, v) in &self.tolerances {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(VerifyError::InvalidConfig(format!("tolerance for {k} must be >= 0")));
            }
        }
        Ok(())
    }

    pub fn suites(&self) -> Result<Vec<Suite>, VerifyError> {
        if self.suite == "all" {
            Ok(Suite::ALL.to_vec())
        } else {
            Ok(vec![self.suite.parse()?])
        }
    }

    fn exact_dims(&self) -> Vec<usize> {
        self.n.map_or_else(|| vec![1, 2, 3], |n| vec![n])
    }

    fn grid_dims(&self) -> Vec<usize> {
        self.n.map_or_else(|| vec![1, 2], |n| vec![n])
    }

    fn rep(&self) -> RepConfig {
        RepConfig { lambda: self.lambda, ..RepConfig::default() }
    }

    fn default_points(n: usize) -> usize {
        match n {
            1 => 256,
            2 => 128,
            _ => 32,
        }
    }

    /// Box of length `length` unless overridden.
    fn grid(&self, n: usize, length: f64) -> Result<GridSpec, HilbertError> {
        GridSpec::new(n, self.grid_points.unwrap_or(Self::default_points(n)), self.grid_length.unwrap_or(length))
    }

    /// Self-dual box for the metaplectic checks unless overridden.
    fn metaplectic_grid(&self, n: usize) -> Result<GridSpec, HilbertError> {
        let np = self.grid_points.unwrap_or(Self::default_points(n));
        match self.grid_length {
            Some(l) => GridSpec::new(n, np, l),
            None => GridSpec::self_dual(n, np, self.lambda),
        }
    }

    fn rng(&self, c: Criterion) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ c.seed_offset())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n: Option<usize>,
    #[serde(rename = "N")]
    pub grid_points: Option<usize>,
    #[serde(rename = "L")]
    pub grid_length: Option<f64>,
    pub lambda: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub suite: String,
    pub config: ConfigEcho,
    pub records: Vec<Record>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn failing(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }
}

/// Accumulates one record.
struct Tally {
    name: String,
    samples: usize,
    max: f64,
    tolerance: f64,
    note: Option<String>,
}

impl Tally {
    fn new(suite: Suite, property: &str, tolerance: f64) -> Self {
        Tally { name: format!("{suite}/{property}"), samples: 0, max: 0.0, tolerance, note: None }
    }

    fn push(&mut self, residual: f64) {
        self.samples += 1;
        // NaN must fail
        if residual.is_nan() || residual > self.max {
            self.max = if residual.is_nan() { f64::INFINITY } else { residual };
        }
    }

    fn finish(self, cfg: &VerifyConfig) -> Record {
        let tolerance = cfg.tolerances.get(&self.name).copied().unwrap_or(self.tolerance);
        Record {
            pass: self.max <= tolerance,
            name: self.name,
            samples: self.samples,
            max_residual: self.max,
            tolerance,
            note: self.note,
        }
    }
}

fn qdiff(a: &Rational, b: &Rational) -> f64 {
    (a - b).abs().to_f64()
}

fn vdiff(a: &[Rational], b: &[Rational]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| qdiff(x, y)).fold(0.0, f64::max)
}

fn wh_diff(a: &WHElement<Rational>, b: &WHElement<Rational>) -> f64 {
    vdiff(a.p(), b.p()).max(vdiff(a.q(), b.q())).max(qdiff(a.iota(), b.iota()))
}

fn mat_diff(a: &Matrix<Rational>, b: &Matrix<Rational>) -> f64 {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return f64::INFINITY;
    }
    a.sub(b).max_abs()
}

fn aut_diff(a: &AutElement<Rational>, b: &AutElement<Rational>) -> f64 {
    mat_diff(&aut_to_matrix(a), &aut_to_matrix(b))
}

fn desc_diff(a: &ActionDescriptor<Rational>, b: &ActionDescriptor<Rational>) -> f64 {
    qdiff(&a.constant, &b.constant).max(vdiff(&a.linear, &b.linear)).max(vdiff(&a.shift, &b.shift))
}

fn rand_q(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_ratio(rng.gen_range(-12..=12), rng.gen_range(1..=6))
}

fn rand_qvec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| rand_q(rng)).collect()
}

fn rand_wh(rng: &mut ChaCha8Rng, n: usize) -> WHElement<Rational> {
    WHElement::new(rand_qvec(rng, n), rand_qvec(rng, n), rand_q(rng)).expect("n > 0")
}

fn rand_nonzero_q(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let v: i64 = rng.gen_range(-4..=4);
        if v != 0 {
            break v;
        }
    };
    Rational::from_ratio(num, rng.gen_range(1..=3))
}

fn rand_aut(rng: &mut ChaCha8Rng, n: usize, delta: Option<Rational>) -> AutElement<Rational> {
    let delta = delta.unwrap_or_else(|| rand_nonzero_q(rng));
    let sigma = sp_random_rational(n, rng.gen(), 3);
    AutElement::new(delta, sigma, rand_qvec(rng, 2 * n), rand_q(rng)).expect("valid by construction")
}

fn rand_ball(rng: &mut ChaCha8Rng, len: usize, radius: f64) -> Vec<f64> {
    let v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    v.into_iter().map(|x| radius * x / norm).collect()
}

fn rand_packet(rng: &mut ChaCha8Rng, spec: GridSpec) -> GridWavefunction {
    let sigma = rng.gen_range(0.7..=1.4);
    let center = rand_ball(rng, spec.n, 1.0);
    let k = rand_ball(rng, spec.n, 1.0);
    GridWavefunction::gaussian_packet(spec, sigma, &center, &k)
}

fn group_law(cfg: &VerifyConfig) -> Vec<Record> {
    let mut rng = cfg.rng(Criterion::GroupLaw);
    let s = Suite::WhGroup;
    let mut assoc = Tally::new(s, "associativity", 0.0);
    let mut inverse = Tally::new(s, "inverse", 0.0);
    let mut identity = Tally::new(s, "identity", 0.0);
    let mut hom = Tally::new(s, "matrix_homomorphism", 0.0);
    let dims = cfg.exact_dims();
    for k in 0..1000 {
        let n = dims[k % dims.len()];
        let (a, b, c) = (rand_wh(&mut rng, n), rand_wh(&mut rng, n), rand_wh(&mut rng, n));
        let ab = wh_product(&a, &b).unwrap();
        let left = wh_product(&ab, &c).unwrap();
        let right = wh_product(&a, &wh_product(&b, &c).unwrap()).unwrap();
        assoc.push(wh_diff(&left, &right));
        let e = WHElement::identity(n);
        let inv = wh_inverse(&a);
        inverse.push(wh_diff(&wh_product(&a, &inv).unwrap(), &e).max(wh_diff(&wh_product(&inv, &a).unwrap(), &e)));
        identity.push(wh_diff(&wh_product(&e, &a).unwrap(), &a).max(wh_diff(&wh_product(&a, &e).unwrap(), &a)));
        hom.push(mat_diff(&wh_to_matrix(&ab), &wh_to_matrix(&a).mul(&wh_to_matrix(&b))));
    }
    [assoc, inverse, identity, hom].into_iter().map(|t| t.finish(cfg)).collect()
}

fn automorphisms(cfg: &VerifyConfig) -> Vec<Record> {
    let mut rng = cfg.rng(Criterion::Automorphisms);
    let s = Suite::AutGroup;
    let mut matrix = Tally::new(s, "product_matrix_oracle", 0.0);
    let mut normal = Tally::new(s, "act_wh_is_automorphism", 0.0);
    let mut compat = Tally::new(s, "action_compatibility", 0.0);
    let mut conj = Tally::new(s, "act_wh_is_conjugation", 0.0);
    let mut inverse = Tally::new(s, "inverse", 0.0);
    let dims = cfg.exact_dims();
    for k in 0..500 {
        let n = dims[k % dims.len()];
        let (g1, g2) = (rand_aut(&mut rng, n, None), rand_aut(&mut rng, n, None));
        let (h1, h2) = (rand_wh(&mut rng, n), rand_wh(&mut rng, n));
        let g12 = aut_product(&g1, &g2).unwrap();
        matrix.push(mat_diff(&aut_to_matrix(&g12), &aut_to_matrix(&g1).mul(&aut_to_matrix(&g2))));
        let lhs = aut_act_wh(&g1, &wh_product(&h1, &h2).unwrap()).unwrap();
        let rhs = wh_product(&aut_act_wh(&g1, &h1).unwrap(), &aut_act_wh(&g1, &h2).unwrap()).unwrap();
        normal.push(wh_diff(&lhs, &rhs));
        let nested = aut_act_wh(&g1, &aut_act_wh(&g2, &h1).unwrap()).unwrap();
        compat.push(wh_diff(&aut_act_wh(&g12, &h1).unwrap(), &nested));
        let m = aut_to_matrix(&g1);
        let by_matrix = m.mul(&wh_to_matrix(&h1)).mul(&aut_to_matrix(&aut_inverse(&g1)));
        conj.push(mat_diff(&by_matrix, &wh_to_matrix(&aut_act_wh(&g1, &h1).unwrap())));
        inverse.push(aut_diff(&aut_product(&g1, &aut_inverse(&g1)).unwrap(), &AutElement::identity(n)));
    }
    [matrix, normal, compat, conj, inverse].into_iter().map(|t| t.finish(cfg)).collect()
}

fn center_criterion(cfg: &VerifyConfig) -> Vec<Record> {
    let mut rng = cfg.rng(Criterion::CenterCriterion);
    let s = Suite::AutGroup;
    let mut center = Tally::new(s, "center_fixed_iff_unit_delta", 0.0);
    let mut closure = Tally::new(s, "hsp_closure", 0.0);
    let sweep: Vec<Rational> = [(-3, 1), (-2, 1), (-1, 1), (-1, 2), (-1, 3), (1, 3), (1, 2), (1, 1), (2, 1), (3, 1), (5, 4)]
        .iter()
        .map(|&(a, b)| Rational::from_ratio(a, b))
        .collect();
    let mut saw_negative_unit = false;
    for n in cfg.exact_dims() {
        let basis = AlgebraBasis::new(n);
        let i = AlgebraElement::<Rational>::basis_element(basis, Generator::I).expect("I is a basis element");
        for delta in &sweep {
            for _ in 0..3 {
                let g = rand_aut(&mut rng, n, Some(delta.clone()));
                let fixes = aut_act_algebra(&g, &i).unwrap() == i;
                let unit = g.delta().is_one();
                saw_negative_unit |= unit && delta.is_negative();
                center.push(if fixes == unit && unit == is_central_invariant(&g) { 0.0 } else { 1.0 });
            }
        }
        for _ in 0..50 {
            let one = Rational::one();
            let (a, b) = (rand_aut(&mut rng, n, Some(one.clone())), rand_aut(&mut rng, n, Some(one)));
            let ok = aut_product(&a, &b).unwrap().delta().is_one() && aut_inverse(&a).delta().is_one();
            closure.push(if ok { 0.0 } else { 1.0 });
        }
    }
    if saw_negative_unit {
        center.note = Some("delta = -1 inputs are stored as delta = 1 with Sigma negated (same matrix)".into());
    }
    vec![center.finish(cfg), closure.finish(cfg)]
}

fn factorization(cfg: &VerifyConfig) -> Vec<Record> {
    let mut rng = cfg.rng(Criterion::Factorization);
    let s = Suite::Symplectic;
    let mut recon = Tally::new(s, "reconstruction", 1e-10);
    let mut sym = Tally::new(s, "factor_symmetry", 1e-12);
    let mut exact = Tally::new(s, "exact_reconstruction", 0.0);
    let mut conj = Tally::new(s, "zeta_conjugation_identity", 0.0);
    let mut ill = 0usize;
    let dims = cfg.exact_dims();
    for k in 0..1000 {
        let n = dims[k % dims.len()];
        let m = sp_random(n, rng.gen(), 4);
        match sp_factorize(&m) {
            Ok(f) => {
                ill += f.ill_conditioned as usize;
                let back = sp_compose_factors(&f.factors).expect("factors are valid");
                recon.push(back.matrix().max_abs_diff(m.matrix()));
                let asym = |x: &Matrix<f64>| x.max_abs_diff(&x.transpose());
                sym.push(asym(&f.factors.beta).max(asym(&f.factors.gamma)));
            }
            Err(_) => recon.push(f64::INFINITY),
        }
        if k % 10 == 0 {
            let q = sp_random_rational(n, rng.gen(), 4);
            let d = match sp_factorize(&q) {
                Ok(f) => mat_diff(sp_compose_factors(&f.factors).unwrap().matrix(), q.matrix()),
                Err(_) => f64::INFINITY,
            };
            exact.push(d);
            let mut gamma = Matrix::zeros(n, n);
            for a in 0..n {
                for b in a..n {
                    let v = rand_q(&mut rng);
                    gamma[(a, b)] = v.clone();
                    gamma[(b, a)] = v;
                }
            }
            let zeta = SymplecticMatrix::<Rational>::zeta(n);
            let lhs = zeta.mul(&sigma_minus(&gamma).unwrap()).mul(&zeta.inverse());
            conj.push(mat_diff(lhs.matrix(), sigma_plus(&gamma.neg()).unwrap().matrix()));
        }
    }
    if ill > 0 {
        recon.note = Some(format!("{ill} ill-conditioned patches"));
    }
    [recon, sym, exact, conj].into_iter().map(|t| t.finish(cfg)).collect()
}

fn algebra_integrity(cfg: &VerifyConfig) -> Vec<Record> {
    let s = Suite::LieAlgebra;
    let mut jacobi = Tally::new(s, "jacobi", 0.0);
    let mut oracle = Tally::new(s, "structure_vs_matrix_commutators", 0.0);
    let mut cocycle = Tally::new(s, "heisenberg_cocycle_nontrivial", 0.0);
    let mut triples = 0;
    for n in cfg.exact_dims() {
        let sc = hsp_structure_constants(n);
        let report = alg_jacobi_check(&sc);
        triples += report.triples_checked;
        jacobi.push(report.max_residual.to_f64());
        let from_matrices = structure_from_realization(n);
        let dim = sc.dim();
        let mut worst: f64 = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                worst = worst.max(vdiff(&sc.bracket_basis(a, b), &from_matrices.bracket_basis(a, b)));
            }
        }
        oracle.push(worst);
        let isp = isp_structure_constants(n);
        let class = alg_central_extension_check(&isp, &heisenberg_cocycle(&isp, n));
        cocycle.push(if matches!(class, Ok(ExtensionClass::Nontrivial)) { 0.0 } else { 1.0 });
    }
    jacobi.note = Some(format!("{triples} triples"));
    [jacobi, oracle, cocycle].into_iter().map(|t| t.finish(cfg)).collect()
}

fn mackey_pipeline(cfg: &VerifyConfig) -> Vec<Record> {
    let mut rng = cfg.rng(Criterion::MackeyPipeline);
    let s = Suite::Mackey;
    let mut closed = Tally::new(s, "mackey_route_equals_closed_form", 0.0);
    let mut compose = Tally::new(s, "descriptor_composition", 0.0);
    let mut cocycle = Tally::new(s, "cocycle_triple_product", 0.0);
    let dims = cfg.exact_dims();
    for k in 0..500 {
        let n = dims[k % dims.len()];
        let lambda = rand_nonzero_q(&mut rng);
        let (a, b) = (rand_wh(&mut rng, n), rand_wh(&mut rng, n));
        let da = induce_rep(&a, &lambda, Polarization::Position).unwrap();
        closed.push(desc_diff(&da, &induce_rep_closed(&a, &lambda).unwrap()));
        let mut worst: f64 = 0.0;
        for pol in [Polarization::Position, Polarization::Momentum] {
            let da = induce_rep(&a, &lambda, pol).unwrap();
            let db = induce_rep(&b, &lambda, pol).unwrap();
            let dab = induce_rep(&wh_product(&a, &b).unwrap(), &lambda, pol).unwrap();
            worst = worst.max(desc_diff(&da.compose(&db).unwrap(), &dab));
        }
        compose.push(worst);
        let x = CosetPoint::new(rand_qvec(&mut rng, n));
        let (g0, k0) = coset_cocycle(&a, &x).unwrap();
        let (g1, k1) = coset_cocycle_by_product(&a, &x).unwrap();
        cocycle.push(wh_diff(&g0, &g1).max(vdiff(&k0.x, &k1.x)));
    }
    [closed, compose, cocycle].into_iter().map(|t| t.finish(cfg)).collect()
}

fn grid_commutators(cfg: &VerifyConfig) -> Result<Vec<Record>, VerifyError> {
    let rep = cfg.rep();
    let mut t = Tally::new(Suite::HilbertRep, "heisenberg_commutators", 1e-8);
    for n in cfg.grid_dims() {
        let psi = GridWavefunction::gaussian(cfg.grid(n, 20.0)?, 1.0);
        for i in 0..n {
            for j in 0..n {
                let pq = pq_operators(&pq_operators(&psi, CanonicalOperator::Q(j), &rep)?, CanonicalOperator::P(i), &rep)?;
                let qp = pq_operators(&pq_operators(&psi, CanonicalOperator::P(i), &rep)?, CanonicalOperator::Q(j), &rep)?;
                let expected = if i == j { psi.scale(Complex64::new(0.0, rep.lambda)) } else { psi.scale(Complex64::zero()) };
                t.push(pq.sub(&qp)?.sub(&expected)?.norm() / psi.norm());
            }
        }
    }
    Ok(vec![t.finish(cfg)])
}

fn xi_representation(cfg: &VerifyConfig) -> Result<Vec<Record>, VerifyError> {
    let mut rng = cfg.rng(Criterion::XiRepresentation);
    let rep = cfg.rep();
    let mut t = Tally::new(Suite::HilbertRep, "xi_representation", 1e-10);
    for n in cfg.grid_dims() {
        // shifts add up to |q| = 4; the wider box keeps the wrapped tail negligible
        let psi = GridWavefunction::gaussian(cfg.grid(n, 30.0)?, 1.0);
        for _ in 0..100 {
            let mut el = || {
                let z = [rand_ball(&mut rng, n, 2.0), rand_ball(&mut rng, n, 2.0)].concat();
                WHElement::from_z(&z, rng.gen_range(-2.0..=2.0)).expect("n > 0")
            };
            let (a, b) = (el(), el());
            let lhs = xi_apply(&a, &xi_apply(&b, &psi, &rep)?, &rep)?;
            let rhs = xi_apply(&wh_product(&a, &b).unwrap(), &psi, &rep)?;
            t.push(relative_error(&lhs, &rhs)?);
        }
    }
    Ok(vec![t.finish(cfg)])
}

fn intertwining(cfg: &VerifyConfig) -> Result<Vec<Record>, VerifyError> {
    let mut rng = cfg.rng(Criterion::Intertwining);
    let rep = cfg.rep();
    let mut t = Tally::new(Suite::HilbertRep, "metaplectic_intertwining", 1e-6);
    for n in cfg.grid_dims() {
        let psi = GridWavefunction::gaussian(cfg.metaplectic_grid(n)?, 1.0);
        let count = if n == 1 { 100 } else { 25 };
        for _ in 0..count {
            let s = sp_random(n, rng.gen(), 3);
            let g = WHElement::from_z(&rand_ball(&mut rng, 2 * n, 1.0), rng.gen_range(-1.0..=1.0)).expect("n > 0");
            t.push(intertwine_residual(&s, &g, &psi, &rep)?);
        }
    }
    Ok(vec![t.finish(cfg)])
}

/// Groups phases (mod 2π) within `tol` of each other.
fn phase_clusters(phases: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for &p in phases {
        let p = p.rem_euclid(two_pi);
        let near = |c: f64| {
            let d = (p - c).rem_euclid(two_pi);
            d.min(two_pi - d) < tol
        };
        match clusters.iter_mut().find(|(c, _)| near(*c)) {
            Some(entry) => entry.1 += 1,
            None => clusters.push((p, 1)),
        }
    }
    clusters.sort_by(|a, b| a.0.total_cmp(&b.0));
    clusters
}

/// Phases θ with ρ(s₂)ρ(s₁)ψ ≈ e^{iθ}ρ(s₂s₁)ψ and the residual record.
pub fn projective_phases(cfg: &VerifyConfig) -> Result<(Record, Vec<f64>), VerifyError> {
    let mut rng = cfg.rng(Criterion::ProjectiveComposition);
    let rep = cfg.rep();
    let mut t = Tally::new(Suite::HilbertRep, "projective_composition", 1e-6);
    let n = cfg.n.unwrap_or(1);
    let psi = GridWavefunction::gaussian(cfg.metaplectic_grid(n)?, 1.0);
    let mut phases = Vec::new();
    for _ in 0..100 {
        let (s1, s2) = (sp_random(n, rng.gen(), 3), sp_random(n, rng.gen(), 3));
        let lhs = rho_sigma(&s2, &rho_sigma(&s1, &psi, &rep)?, &rep)?;
        let rhs = rho_sigma(&s2.mul(&s1), &psi, &rep)?;
        let cmp = phase_compare(&rhs, &lhs)?;
        t.push(cmp.residual);
        phases.push(cmp.phase);
    }
    let clusters = phase_clusters(&phases, 1e-3);
    let shown: Vec<String> = clusters.iter().map(|(p, c)| format!("{p:.6}x{c}")).collect();
    t.note = Some(format!("{} distinct phases (rad x count): {}", clusters.len(), shown.join(", ")));
    log::info!("projective composition phases: {}", shown.join(", "));
    Ok((t.finish(cfg), phases))
}

fn projective_composition(cfg: &VerifyConfig) -> Result<Vec<Record>, VerifyError> {
    Ok(vec![projective_phases(cfg)?.0])
}

fn unitarity(cfg: &VerifyConfig) -> Result<Vec<Record>, VerifyError> {
    let mut rng = cfg.rng(Criterion::Unitarity);
    let rep = cfg.rep();
    let s = Suite::HilbertRep;
    let mut xi = Tally::new(s, "unitarity_xi", 1e-12);
    let mut fft = Tally::new(s, "unitarity_grid_fft", 1e-12);
    let mut plus = Tally::new(s, "unitarity_rho_plus", 1e-12);
    let mut zeta = Tally::new(s, "unitarity_rho_zeta", 1e-12);
    let mut minus = Tally::new(s, "unitarity_rho_minus", 1e-10);
    let mut dil = Tally::new(s, "unitarity_rho_unitary", 1e-8);
    let mut sigma = Tally::new(s, "unitarity_rho_sigma", 1e-8);
    let mut ups = Tally::new(s, "unitarity_upsilon", 1e-8);
    let mut skipped = 0usize;
    let limit = rep.boundary_mass_limit;
    for n in cfg.grid_dims() {
        let spec = cfg.metaplectic_grid(n)?;
        let count = if n == 1 { 40 } else { 10 };
        let mut done = 0;
        while done < count {
            let psi = rand_packet(&mut rng, spec);
            let norm = psi.norm();
            let rel = |out: &GridWavefunction| (out.norm() - norm).abs() / norm;
            let alpha = random_dilation(&mut rng, n);
            if psi.boundary_mass(0.1 * spec.length) > limit || dilation_escape(&alpha, &psi)? > limit {
                skipped += 1;
                continue;
            }
            done += 1;
            let g = WHElement::from_z(&rand_ball(&mut rng, 2 * n, 1.0), rng.gen_range(-1.0..=1.0)).expect("n > 0");
            xi.push(rel(&xi_apply(&g, &psi, &rep)?));
            fft.push(rel(&grid_fft(&psi, FftDirection::Forward)).max(rel(&grid_fft(&psi, FftDirection::Inverse))));
            let sym = random_symmetric(&mut rng, n);
            plus.push(rel(&rho_plus(&sym, &psi, &rep)?));
            zeta.push(rel(&rho_zeta(&psi, &rep)?));
            minus.push(rel(&rho_minus(&sym, &psi, &rep)?));
            dil.push(rel(&rho_unitary(&alpha, &psi, &rep)?));
            let sp = sp_random(n, rng.gen(), 3);
            sigma.push(rel(&rho_sigma(&sp, &psi, &rep)?));
            let aut = AutElement::new(1.0, sp, rand_ball(&mut rng, 2 * n, 1.0), 0.5).expect("delta = 1");
            ups.push(rel(&upsilon_apply(&aut, &psi, &rep)?));
        }
    }
    if skipped > 0 {
        dil.note = Some(format!("{skipped} states skipped by the boundary-mass screen"));
    }
    Ok([xi, fft, plus, zeta, minus, dil, sigma, ups].into_iter().map(|t| t.finish(cfg)).collect())
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix<f64> {
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = rng.gen_range(-0.5..=0.5);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    m
}

/// R(θ₁)·diag(s)·R(θ₂) with singular values s ∈ [0.5, 2] (n ≤ 2), or a
/// diagonal dilation for larger n.
fn random_dilation(rng: &mut ChaCha8Rng, n: usize) -> Matrix<f64> {
    let mut d = Matrix::zeros(n, n);
    for a in 0..n {
        d[(a, a)] = 2f64.powf(rng.gen_range(-1.0..=1.0));
    }
    if n != 2 {
        return d;
    }
    let rot = |t: f64| Matrix::from_rows(vec![vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]).expect("2x2");
    let (t1, t2) = (rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.0..std::f64::consts::TAU));
    rot(t1).mul(&d).mul(&rot(t2))
}

fn enveloping_grid(cfg: &VerifyConfig) -> Result<Vec<Record>, VerifyError> {
    let rep = cfg.rep();
    let mut t = Tally::new(Suite::HilbertRep, "enveloping_brackets", 1e-6);
    for n in cfg.grid_dims() {
        let psi = GridWavefunction::gaussian(cfg.grid(n, 20.0)?, 1.0);
        for r in enveloping_grid_residuals(&psi, &rep)? {
            t.push(r.residual);
        }
    }
    Ok(vec![t.finish(cfg)])
}

/// Runs one criterion; an operational error becomes a failing record.
pub fn run_criterion(c: Criterion, cfg: &VerifyConfig) -> Vec<Record> {
    let result = match c {
        Criterion::GroupLaw => Ok(group_law(cfg)),
        Criterion::Automorphisms => Ok(automorphisms(cfg)),
        Criterion::CenterCriterion => Ok(center_criterion(cfg)),
        Criterion::Factorization => Ok(factorization(cfg)),
        Criterion::AlgebraIntegrity => Ok(algebra_integrity(cfg)),
        Criterion::MackeyPipeline => Ok(mackey_pipeline(cfg)),
        Criterion::GridCommutators => grid_commutators(cfg),
        Criterion::XiRepresentation => xi_representation(cfg),
        Criterion::Intertwining => intertwining(cfg),
        Criterion::ProjectiveComposition => projective_composition(cfg),
        Criterion::Unitarity => unitarity(cfg),
        Criterion::EnvelopingGrid => enveloping_grid(cfg),
    };
    result.unwrap_or_else(|e| {
        vec![Record {
            name: format!("{}/{}", c.suite(), c.name()),
            samples: 0,
            max_residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
            note: Some(e.to_string()),
        }]
    })
}

/// Runs every criterion of the selected suites, in parallel across
/// criteria; records are sorted by name.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    cfg.validate()?;
    let suites = cfg.suites()?;
    let selected: Vec<Criterion> = Criterion::ALL.into_iter().filter(|c| suites.contains(&c.suite())).collect();
    let mut records: Vec<Record> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected.iter().map(|&c| scope.spawn(move || run_criterion(c, cfg))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("verification thread panicked")).collect()
    });
    records.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        suite: cfg.suite.clone(),
        config: ConfigEcho {
            n: cfg.n,
            grid_points: cfg.grid_points,
            grid_length: cfg.grid_length,
            lambda: cfg.lambda,
            seed: cfg.seed,
        },
        pass: records.iter().all(|r| r.pass),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerance_override_applies_by_record_name() {
        let mut cfg = VerifyConfig { suite: "lie_algebra".into(), n: Some(1), ..Default::default() };
        cfg.tolerances.insert("lie_algebra/jacobi".into(), 0.5);
        let report = run_verify(&cfg).unwrap();
        assert!(report.records.iter().all(|r| r.name.starts_with("lie_algebra/")));
        let j = report.records.iter().find(|r| r.name == "lie_algebra/jacobi").unwrap();
        assert_eq!(j.tolerance, 0.5);
        assert!(report.pass);
    }

    #[test]
    fn invalid_configs_rejected() {
        let bad = VerifyConfig { lambda: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = VerifyConfig { grid_points: Some(100), ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = VerifyConfig { suite: "x".into(), ..Default::default() };
        assert!(matches!(bad.validate(), Err(VerifyError::UnknownSuite(_))));
    }

    #[test]
    fn phase_clusters_wrap_around() {
        let c = phase_clusters(&[0.0, 2.0 * std::f64::consts::PI - 1e-5, 3.0], 1e-3);
        assert_eq!(c.len(), 2);
        assert_eq!(c.iter().map(|x| x.1).sum::<usize>(), 3);
    }
}
