//! Alice's eight-outcome measurement: sign table, Gram matrix, coefficient
//! family, feasibility analysis, construction, diagnostics, the orthogonal
//! 4-element reduction, and degeneracy classification.
//!
//! For a linearly independent triple `n₁, n₂, n₃` the elements are the rank-1
//! operators
//!
//! ```text
//! E_K = C_K |u_K⟩⟨u_K|,   |u_K⟩ = |Ψ₀⟩ + Σ_k (S^(K) M⁻¹)_k |n_k⟩,
//! ```
//!
//! where `M` is the Gram matrix and `S^(K)` runs over the eight sign vectors.
//! The coefficients form a one-parameter family `C_K(r)`, nonnegative for
//! some `r` exactly when every `|n₁ ± n₂ ± n₃| ≥ 1`.

use core::fmt;

use crate::error::{Error, Result};
use crate::quantum::{expectation, hermitian_eigenvalues, Operator4, OutcomeSign, State4};
use crate::rng::SubStream;
use crate::states::{bob_post_state, singlet, vector_ket_amps};
use crate::vec3::{self, UnitVector3, Vec3};
use crate::{TOL_OPERATOR, TOL_STATE};

/// Triples with `|det[n₁ n₂ n₃]|` above this are treated as linearly
/// independent; unit inputs make the determinant scale-free.
pub const LINEAR_INDEPENDENCE_TOL: f64 = 1e-9;

/// Pairs with cross-product norm below this are treated as parallel.
pub const PARALLEL_TOL: f64 = 1e-9;

/// Outcome labels in the fixed order A..H.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

/// The eight sign vectors S^(K), indexed by label.
pub const SIGN_TABLE: [[i8; 3]; 8] = [
    [1, 1, 1],    // A
    [1, -1, -1],  // B
    [-1, 1, -1],  // C
    [-1, -1, 1],  // D
    [-1, -1, -1], // E
    [-1, 1, 1],   // F
    [1, -1, 1],   // G
    [1, 1, -1],   // H
];

/// Sign patterns (s₂, s₃) applied to n₂, n₃ in `|n₁ + s₂n₂ + s₃n₃|`, in the
/// fixed report order (+,+), (+,−), (−,+), (−,−).
pub const SIGN_PATTERNS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

impl Label {
    pub const ALL: [Label; 8] = [
        Label::A,
        Label::B,
        Label::C,
        Label::D,
        Label::E,
        Label::F,
        Label::G,
        Label::H,
    ];

    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn from_index(i: usize) -> Option<Label> {
        Label::ALL.get(i).copied()
    }

    /// S^(K) for this outcome.
    pub fn signs(&self) -> [i8; 3] {
        SIGN_TABLE[self.index()]
    }

    /// The label with the negated sign vector (A↔E, B↔F, C↔G, D↔H).
    pub fn negation(&self) -> Label {
        Label::from_index((self.index() + 4) % 8).expect("index in range")
    }

    /// True for A..D, the `+r` half of the coefficient family.
    pub fn is_primary_half(&self) -> bool {
        self.index() < 4
    }

    /// Index into [`SIGN_PATTERNS`] of the sign norm governing this label:
    /// the pattern (S₂/S₁, S₃/S₁) of its sign vector.
    pub fn norm_pattern(&self) -> usize {
        let s = self.signs();
        let s2 = s[1] * s[0];
        let s3 = s[2] * s[0];
        SIGN_PATTERNS
            .iter()
            .position(|&(a, b)| (a, b) == (s2, s3))
            .expect("pattern table is exhaustive")
    }

    pub fn as_char(&self) -> char {
        (b'A' + self.index() as u8) as char
    }

    pub fn from_char(ch: char) -> Option<Label> {
        let i = (ch as u32).checked_sub('A' as u32)?;
        Label::from_index(i as usize)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Three measurement directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorTriple {
    n: [UnitVector3; 3],
}

impl VectorTriple {
    pub fn new(n1: UnitVector3, n2: UnitVector3, n3: UnitVector3) -> Self {
        Self { n: [n1, n2, n3] }
    }

    pub fn from_components(v: [[f64; 3]; 3]) -> Result<Self> {
        Ok(Self {
            n: [
                UnitVector3::new(v[0])?,
                UnitVector3::new(v[1])?,
                UnitVector3::new(v[2])?,
            ],
        })
    }

    /// Orthonormal coordinate triad e_x, e_y, e_z.
    pub fn orthonormal() -> Self {
        Self::new(UnitVector3::EX, UnitVector3::EY, UnitVector3::EZ)
    }

    /// `k` is 0-based.
    pub fn get(&self, k: usize) -> &UnitVector3 {
        &self.n[k]
    }

    pub fn vectors(&self) -> &[UnitVector3; 3] {
        &self.n
    }

    /// Three independent uniform directions from counter-indexed draws.
    pub fn random(s: &SubStream, index: u64) -> Self {
        Self {
            n: [
                UnitVector3::random(s, 3 * index),
                UnitVector3::random(s, 3 * index + 1),
                UnitVector3::random(s, 3 * index + 2),
            ],
        }
    }

    /// Random triple conditioned on healthy linear independence
    /// (|det| > 0.01): near-dependent triples make Gram-inverse identities
    /// unattainable at f64 tolerances, so statistical harnesses that probe
    /// those identities sample from this constructor.
    pub fn random_independent(s: &SubStream, index: u64) -> Self {
        for attempt in 0..64 {
            let t = Self::random(s, 64 * index + attempt);
            if libm::fabs(t.det()) > 0.01 {
                return t;
            }
        }
        unreachable!("64 consecutive near-degenerate uniform triples");
    }

    /// Determinant of the 3×3 matrix with the directions as columns.
    pub fn det(&self) -> f64 {
        vec3::dot(&self.n[0].components(), &self.n[1].cross(&self.n[2]))
    }

    /// `n₁ + s₂n₂ + s₃n₃`.
    fn signed_sum(&self, s2: i8, s3: i8) -> Vec3 {
        let a = self.n[0].components();
        let b = vec3::scale(&self.n[1].components(), f64::from(s2));
        let cc = vec3::scale(&self.n[2].components(), f64::from(s3));
        vec3::add(&vec3::add(&a, &b), &cc)
    }

    /// The four squared sign norms `|n₁ ± n₂ ± n₃|²` in [`SIGN_PATTERNS`]
    /// order, computed as direct dot products so exact-integer cases stay
    /// exact.
    pub fn sign_norms_squared(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, &(s2, s3)) in SIGN_PATTERNS.iter().enumerate() {
            let v = self.signed_sum(s2, s3);
            out[i] = vec3::dot(&v, &v);
        }
        out
    }

    /// The four sign norms `|n₁ ± n₂ ± n₃|` in [`SIGN_PATTERNS`] order.
    pub fn sign_norms(&self) -> [f64; 4] {
        self.sign_norms_squared().map(libm::sqrt)
    }
}

/// The planar 120° triad tilted by `eps` toward +z:
/// `n_k = (cos ε cos φ_k, cos ε sin φ_k, sin ε)`, `φ_k ∈ {0, 2π/3, 4π/3}`.
///
/// The minimal sign norm of the family is `3 sin ε`, so it becomes feasible
/// at `ε = arcsin(1/3)`.
pub fn tilted_planar_triple(eps: f64) -> VectorTriple {
    let ce = libm::cos(eps);
    let se = libm::sin(eps);
    let mk = |phi: f64| {
        UnitVector3::new([ce * libm::cos(phi), ce * libm::sin(phi), se])
            .expect("unit by construction")
    };
    let third = 2.0 * core::f64::consts::PI / 3.0;
    VectorTriple::new(mk(0.0), mk(third), mk(2.0 * third))
}

/// Symmetric 3×3 Gram matrix `M_ij = n_i·n_j` with exactly unit diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix {
    m: [[f64; 3]; 3],
}

/// `M_ij = n_i·n_j`, stored canonically symmetric.
pub fn gram(t: &VectorTriple) -> GramMatrix {
    let mut m = [[1.0; 3]; 3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let d = t.get(i).dot(t.get(j));
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    GramMatrix { m }
}

impl GramMatrix {
    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    /// The three off-diagonal dot products (M₁₂, M₁₃, M₂₃).
    pub fn dots(&self) -> [f64; 3] {
        [self.m[0][1], self.m[0][2], self.m[1][2]]
    }

    pub fn det(&self) -> f64 {
        det3(&self.m)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.dots()
            .iter()
            .fold(0.0f64, |acc, d| acc.max(libm::fabs(*d)))
    }

    /// Inverse by adjugate; fails when the triple is linearly dependent.
    pub fn inverse(&self) -> Result<[[f64; 3]; 3]> {
        let d = self.det();
        if libm::fabs(d) < 1e-18 {
            return Err(Error::DegenerateTriple);
        }
        Ok(inv3(&self.m, d))
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inv3(m: &[[f64; 3]; 3], det: f64) -> [[f64; 3]; 3] {
    let inv_det = 1.0 / det;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            let (p, q) = ((j + 1) % 3, (j + 2) % 3);
            // cofactor transpose
            out[j][i] = (m[a][p] * m[b][q] - m[a][q] * m[b][p]) * inv_det;
        }
    }
    out
}

/// The one-parameter coefficient family evaluated at a specific `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    r: f64,
    values: [f64; 8],
}

impl CoefficientSet {
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn get(&self, label: Label) -> f64 {
        self.values[label.index()]
    }

    pub fn values(&self) -> &[f64; 8] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |a, b| a.min(*b))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.min() >= -TOL_STATE
    }

    /// Residuals of the defining linear constraints against a Gram matrix:
    /// `(|ΣC − 1|, max_l |ΣC·S_l|, max_{k≤l} |ΣC·S_k·S_l − M_kl|)`.
    pub fn constraint_residuals(&self, gram: &GramMatrix) -> (f64, f64, f64) {
        let mut sum = 0.0;
        let mut first = [0.0; 3];
        let mut second = [[0.0; 3]; 3];
        for (k, label) in Label::ALL.iter().enumerate() {
            let cv = self.values[k];
            let s = label.signs();
            sum += cv;
            for l in 0..3 {
                first[l] += cv * f64::from(s[l]);
                for m in 0..3 {
                    second[l][m] += cv * f64::from(s[l]) * f64::from(s[m]);
                }
            }
        }
        let e1 = libm::fabs(sum - 1.0);
        let e2 = first.iter().fold(0.0f64, |a, b| a.max(libm::fabs(*b)));
        let mut e3 = 0.0f64;
        for l in 0..3 {
            for m in 0..3 {
                e3 = e3.max(libm::fabs(second[l][m] - gram.entry(l, m)));
            }
        }
        (e1, e2, e3)
    }
}

/// Closed-form coefficients at parameter `r`:
/// `C_K = (1 ± r + Σ_{k<l} S_k S_l M_kl)/8` (dot form, `+` for A..D),
/// cross-checked against the norm form `(q ± 2r − 1)/16` with
/// `q = |n₁ ± n₂ ± n₃|²` evaluated from the actual vector sums.
pub fn solve_coefficients(t: &VectorTriple, r: f64) -> Result<CoefficientSet> {
    let g = gram(t);
    let [m12, m13, m23] = g.dots();
    let squared = t.sign_norms_squared();
    let mut values = [0.0; 8];
    let mut worst = 0.0f64;
    for label in Label::ALL {
        let s = label.signs();
        let w = f64::from(s[0] * s[1]) * m12
            + f64::from(s[0] * s[2]) * m13
            + f64::from(s[1] * s[2]) * m23;
        let sign_r = if label.is_primary_half() { r } else { -r };
        let dot_form = (1.0 + sign_r + w) / 8.0;
        let q = squared[label.norm_pattern()];
        let norm_form = (q + 2.0 * sign_r - 1.0) / 16.0;
        worst = worst.max(libm::fabs(dot_form - norm_form));
        values[label.index()] = dot_form;
    }
    if worst > 1e-13 {
        return Err(Error::FormMismatch { deviation: worst });
    }
    Ok(CoefficientSet { r, values })
}

/// A closed interval of valid `r` values; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RInterval {
    pub const EMPTY: RInterval = RInterval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };

    pub fn is_empty(&self) -> bool {
        // negated so NaN endpoints count as empty
        !(self.lo <= self.hi)
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.lo && r <= self.hi
    }
}

/// Coarse linear-dependence classification of a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyClass {
    Independent,
    DependentNonparallel,
    ContainsParallelPair,
}

impl fmt::Display for DegeneracyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegeneracyClass::Independent => write!(f, "independent"),
            DegeneracyClass::DependentNonparallel => write!(f, "dependent_nonparallel"),
            DegeneracyClass::ContainsParallelPair => write!(f, "contains_parallel_pair"),
        }
    }
}

fn parallel_pair(t: &VectorTriple) -> Option<(usize, usize)> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if vec3::norm(&t.get(i).cross(t.get(j))) <= PARALLEL_TOL {
            return Some((i + 1, j + 1));
        }
    }
    None
}

pub(crate) fn degeneracy_class(t: &VectorTriple) -> DegeneracyClass {
    if libm::fabs(t.det()) > LINEAR_INDEPENDENCE_TOL {
        DegeneracyClass::Independent
    } else if parallel_pair(t).is_some() {
        DegeneracyClass::ContainsParallelPair
    } else {
        DegeneracyClass::DependentNonparallel
    }
}

/// Everything the feasibility test knows about a triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    /// True exactly when the triple is independent and every sign norm ≥ 1
    /// (to state tolerance); equivalently, a valid measurement exists.
    pub feasible: bool,
    /// `|n₁ ± n₂ ± n₃|` in [`SIGN_PATTERNS`] order.
    pub sign_norms: [f64; 4],
    /// Valid parameter range; empty iff infeasible.
    pub r_interval: RInterval,
    /// The sufficient condition `1 > |n₁·n₂| + |n₂·n₃| + |n₃·n₁|`.
    pub sufficient_condition_holds: bool,
    pub degeneracy: DegeneracyClass,
}

impl FeasibilityReport {
    pub fn min_sign_norm(&self) -> f64 {
        self.sign_norms.iter().fold(f64::INFINITY, |a, b| a.min(*b))
    }

    /// The pattern and value of the smallest sign norm.
    pub fn worst_pattern(&self) -> ((i8, i8), f64) {
        let mut idx = 0;
        for i in 1..4 {
            if self.sign_norms[i] < self.sign_norms[idx] {
                idx = i;
            }
        }
        (SIGN_PATTERNS[idx], self.sign_norms[idx])
    }
}

/// Decides whether a valid measurement exists for the triple.
///
/// Degenerate inputs are classified, not rejected.
pub fn feasibility(t: &VectorTriple) -> FeasibilityReport {
    let g = gram(t);
    let degeneracy = degeneracy_class(t);
    let squared = t.sign_norms_squared();
    let sign_norms = squared.map(libm::sqrt);
    let min_norm = sign_norms.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    let sufficient_condition_holds = g.dots().iter().map(|d| libm::fabs(*d)).sum::<f64>() < 1.0;
    let feasible = degeneracy == DegeneracyClass::Independent && min_norm >= 1.0 - TOL_STATE;
    let r_interval = if degeneracy != DegeneracyClass::Independent {
        RInterval::EMPTY
    } else {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for q in squared {
            lo = lo.max((1.0 - q) / 2.0);
            hi = hi.min((q - 1.0) / 2.0);
        }
        if feasible && lo > hi {
            // boundary triple: the interval is [0,0] up to fp noise
            RInterval { lo: 0.0, hi: 0.0 }
        } else {
            RInterval { lo, hi }
        }
    };
    FeasibilityReport {
        feasible,
        sign_norms,
        r_interval,
        sufficient_condition_holds,
        degeneracy,
    }
}

/// A complete eight-element measurement.
#[derive(Debug, Clone)]
pub struct PovmSet {
    elements: [Operator4; 8],
    coefficients: CoefficientSet,
    triple: VectorTriple,
}

impl PovmSet {
    pub fn element(&self, label: Label) -> &Operator4 {
        &self.elements[label.index()]
    }

    pub fn elements(&self) -> &[Operator4; 8] {
        &self.elements
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coefficients
    }

    pub fn triple(&self) -> &VectorTriple {
        &self.triple
    }

    /// `‖Σ_K E_K − 1₄‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = Operator4::zero();
        for e in &self.elements {
            sum = sum.add(e);
        }
        sum.sub(&Operator4::identity()).frobenius_norm()
    }

    /// Outcome distribution `⟨ψ|E_K|ψ⟩` for a given state.
    pub fn outcome_probabilities(&self, psi: &State4) -> Result<[f64; 8]> {
        let mut p = [0.0; 8];
        for (i, e) in self.elements.iter().enumerate() {
            p[i] = expectation(e, psi)?;
        }
        Ok(p)
    }
}

fn assemble(t: &VectorTriple, coefficients: CoefficientSet) -> Result<PovmSet> {
    let g = gram(t);
    let minv = g.inverse()?;
    let psi0 = singlet();
    let kets = [
        vector_ket_amps(t.get(0)),
        vector_ket_amps(t.get(1)),
        vector_ket_amps(t.get(2)),
    ];
    let mut elements = [Operator4::zero(); 8];
    for label in Label::ALL {
        let s = label.signs();
        // w = S^(K) M⁻¹
        let mut w = [0.0; 3];
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = (0..3).map(|l| f64::from(s[l]) * minv[l][k]).sum();
        }
        let mut u = *psi0.amplitudes();
        for (k, ket) in kets.iter().enumerate() {
            for (ui, ki) in u.iter_mut().zip(ket.iter()) {
                *ui += ki * w[k];
            }
        }
        elements[label.index()] = Operator4::outer(&u, &u).scale(coefficients.get(label));
    }
    Ok(PovmSet {
        elements,
        coefficients,
        triple: *t,
    })
}

/// Builds the validated measurement for a feasible triple and an `r` inside
/// the feasible interval.
pub fn build_povm(t: &VectorTriple, r: f64) -> Result<PovmSet> {
    let report = feasibility(t);
    if report.degeneracy != DegeneracyClass::Independent {
        return Err(Error::DegenerateTriple);
    }
    if !report.feasible {
        let (pattern, sign_norm) = report.worst_pattern();
        return Err(Error::Infeasible { pattern, sign_norm });
    }
    if !report.r_interval.contains(r) {
        return Err(Error::ROutOfRange {
            r,
            lo: report.r_interval.lo,
            hi: report.r_interval.hi,
        });
    }
    assemble(t, solve_coefficients(t, r)?)
}

/// Construction without the feasibility and range guards, for diagnosing
/// invalid configurations; still requires linear independence.
pub fn build_povm_unchecked(t: &VectorTriple, r: f64) -> Result<PovmSet> {
    if degeneracy_class(t) != DegeneracyClass::Independent {
        return Err(Error::DegenerateTriple);
    }
    assemble(t, solve_coefficients(t, r)?)
}

/// Row-by-row diagnostics of a measurement set. Rows of the probability
/// table are ordered (k=1,β=+1), (k=1,β=−1), (k=2,+1), (k=2,−1), (k=3,+1),
/// (k=3,−1); columns are labels A..H.
#[derive(Debug, Clone)]
pub struct PovmDiagnostics {
    pub completeness_residual: f64,
    pub min_eigenvalues: [f64; 8],
    /// Second-largest eigenvalue per element; near zero for rank ≤ 1.
    pub second_eigenvalues: [f64; 8],
    pub prob_table: [[f64; 8]; 6],
    pub row_sums: [f64; 6],
    /// Largest probability over cells where `(S^(K))_k = β` (must be ~0).
    pub max_forbidden_probability: f64,
    /// Largest deviation `|p − 2C_K|` over cells where `(S^(K))_k = −β`.
    pub max_allowed_deviation: f64,
}

impl PovmDiagnostics {
    pub fn completeness_ok(&self) -> bool {
        self.completeness_residual < TOL_OPERATOR
    }

    pub fn positive_ok(&self) -> bool {
        self.min_eigenvalues.iter().all(|&e| e >= -TOL_OPERATOR)
    }

    pub fn rank_ok(&self) -> bool {
        self.second_eigenvalues.iter().all(|&e| e < TOL_OPERATOR)
    }

    pub fn zero_pattern_ok(&self) -> bool {
        self.max_forbidden_probability < TOL_STATE && self.max_allowed_deviation < TOL_OPERATOR
    }

    pub fn row_sums_ok(&self) -> bool {
        self.row_sums
            .iter()
            .all(|&s| libm::fabs(s - 1.0) < TOL_OPERATOR)
    }

    pub fn all_ok(&self) -> bool {
        self.completeness_ok()
            && self.positive_ok()
            && self.rank_ok()
            && self.zero_pattern_ok()
            && self.row_sums_ok()
    }
}

/// Checks completeness, positivity, rank, and the outcome-probability table
/// against Bob's six possible post-measurement states. Failures are
/// reported, not thrown.
pub fn verify_povm(p: &PovmSet) -> PovmDiagnostics {
    let mut min_eigenvalues = [0.0; 8];
    let mut second_eigenvalues = [0.0; 8];
    for (i, e) in p.elements().iter().enumerate() {
        let eig = hermitian_eigenvalues(e).expect("elements are Hermitian by construction");
        min_eigenvalues[i] = eig[0];
        second_eigenvalues[i] = eig[2];
    }

    let mut prob_table = [[0.0; 8]; 6];
    let mut row_sums = [0.0; 6];
    let mut max_forbidden = 0.0f64;
    let mut max_allowed_dev = 0.0f64;
    for k in 0..3 {
        for (b, beta) in [OutcomeSign::Plus, OutcomeSign::Minus]
            .into_iter()
            .enumerate()
        {
            let row = 2 * k + b;
            let psi = bob_post_state(p.triple().get(k), beta);
            for label in Label::ALL {
                let prob = expectation(p.element(label), &psi).expect("Hermitian by construction");
                prob_table[row][label.index()] = prob;
                row_sums[row] += prob;
                if label.signs()[k] == beta.value() {
                    max_forbidden = max_forbidden.max(libm::fabs(prob));
                } else {
                    let expected = 2.0 * p.coefficients().get(label);
                    max_allowed_dev = max_allowed_dev.max(libm::fabs(prob - expected));
                }
            }
        }
    }

    PovmDiagnostics {
        completeness_residual: p.completeness_residual(),
        min_eigenvalues,
        second_eigenvalues,
        prob_table,
        row_sums,
        max_forbidden_probability: max_forbidden,
        max_allowed_deviation: max_allowed_dev,
    }
}

/// The four-outcome projective measurement that replaces the eight-element
/// set when the triad is orthonormal.
#[derive(Debug, Clone)]
pub struct ProjectiveReduction {
    /// Orthonormal basis states, one per label A..D.
    pub basis: [State4; 4],
    /// The corresponding rank-1 projectors.
    pub projectors: [Operator4; 4],
}

/// Returns the 4-element reduction (labels A..D at `r = 1`, C_K = 1/4 each)
/// iff the Gram matrix is the identity to operator tolerance; the padded
/// coefficient system has no solution otherwise.
pub fn reduce_to_projective(t: &VectorTriple) -> Option<ProjectiveReduction> {
    let g = gram(t);
    if g.max_off_diagonal() > TOL_OPERATOR {
        return None;
    }
    let psi0 = singlet();
    let kets = [
        vector_ket_amps(t.get(0)),
        vector_ket_amps(t.get(1)),
        vector_ket_amps(t.get(2)),
    ];
    let mut basis = [singlet(); 4];
    let mut projectors = [Operator4::zero(); 4];
    for (i, label) in Label::ALL[..4].iter().enumerate() {
        let s = label.signs();
        let mut u = *psi0.amplitudes();
        for (k, ket) in kets.iter().enumerate() {
            for (ui, ki) in u.iter_mut().zip(ket.iter()) {
                *ui += ki * f64::from(s[k]);
            }
        }
        // ‖u‖ = 2 for an orthonormal triad
        let state = State4::normalized(u).expect("nonzero by construction");
        basis[i] = state;
        projectors[i] = Operator4::outer(state.amplitudes(), state.amplitudes());
    }
    Some(ProjectiveReduction { basis, projectors })
}

/// Witness evidence that no measurement exists for a dependent triple:
/// every admissible element is supported on the single ray |n₁×n₂⟩, so no
/// nonnegative combination can reach the identity.
#[derive(Debug, Clone)]
pub struct NoSolutionCertificate {
    /// The normalized ket of `n₁ × n₂`.
    pub ray: State4,
    /// Second-largest eigenvalue of the ray projector (≈ 0: rank ≤ 1 < 4).
    pub ray_second_eigenvalue: f64,
    /// `‖|v⟩⟨v| − 1₄‖_F`, bounded away from 0.
    pub identity_deficit: f64,
}

/// Degeneracy classification with witnesses.
#[derive(Debug, Clone)]
pub enum DegeneracyReport {
    Independent {
        det: f64,
    },
    /// `n₃ = x·n₁ + y·n₂` with both coefficients nonzero.
    DependentNonparallel {
        x: f64,
        y: f64,
        /// `‖n₃ − x·n₁ − y·n₂‖`.
        residual: f64,
        certificate: NoSolutionCertificate,
    },
    /// 1-based indices of a parallel (or antiparallel) pair.
    ContainsParallelPair {
        first: usize,
        second: usize,
    },
}

impl DegeneracyReport {
    pub fn class(&self) -> DegeneracyClass {
        match self {
            DegeneracyReport::Independent { .. } => DegeneracyClass::Independent,
            DegeneracyReport::DependentNonparallel { .. } => DegeneracyClass::DependentNonparallel,
            DegeneracyReport::ContainsParallelPair { .. } => DegeneracyClass::ContainsParallelPair,
        }
    }
}

/// Classifies a triple and, for dependent non-parallel triples, certifies
/// that the forced element family cannot sum to the identity.
pub fn classify_degenerate(t: &VectorTriple) -> DegeneracyReport {
    let det = t.det();
    if libm::fabs(det) > LINEAR_INDEPENDENCE_TOL {
        return DegeneracyReport::Independent { det };
    }
    if let Some((first, second)) = parallel_pair(t) {
        return DegeneracyReport::ContainsParallelPair { first, second };
    }
    // solve n₃ = x n₁ + y n₂ in the (n₁, n₂) plane
    let g12 = t.get(0).dot(t.get(1));
    let g13 = t.get(0).dot(t.get(2));
    let g23 = t.get(1).dot(t.get(2));
    let denom = 1.0 - g12 * g12;
    let x = (g13 - g12 * g23) / denom;
    let y = (g23 - g12 * g13) / denom;
    let recon = vec3::add(
        &vec3::scale(&t.get(0).components(), x),
        &vec3::scale(&t.get(1).components(), y),
    );
    let residual = vec3::norm(&vec3::sub(&t.get(2).components(), &recon));

    let ray_dir = UnitVector3::normalized(t.get(0).cross(t.get(1))).expect("pair is not parallel");
    let ray = State4::new_unchecked(vector_ket_amps(&ray_dir));
    let projector = Operator4::outer(ray.amplitudes(), ray.amplitudes());
    let eig = hermitian_eigenvalues(&projector).expect("projector is Hermitian");
    let identity_deficit = projector.sub(&Operator4::identity()).frobenius_norm();
    DegeneracyReport::DependentNonparallel {
        x,
        y,
        residual,
        certificate: NoSolutionCertificate {
            ray,
            ray_second_eigenvalue: eig[2],
            identity_deficit,
        },
    }
}

/// Result of checking the coefficient quadratic-form identities
/// `|Σ_k s_k n_k|² = Σ_K C_K (Σ_l s_l S^(K)_l)²` for the four sign patterns.
#[derive(Debug, Clone, Copy)]
pub struct ConsistencyReport {
    /// `(lhs, rhs)` per pattern in [`SIGN_PATTERNS`] order.
    pub quadratic_forms: [(f64, f64); 4],
    pub max_identity_deviation: f64,
    /// Minimum of the four right-hand sides; ≥ ΣC_K = 1 for nonnegative
    /// coefficient sets.
    pub min_form: f64,
}

/// Verifies the quadratic-form identities linking the coefficient set to the
/// geometry of the triple.
pub fn consistency_check(c_set: &CoefficientSet, t: &VectorTriple) -> Result<ConsistencyReport> {
    let mut quadratic_forms = [(0.0, 0.0); 4];
    let mut max_dev = 0.0f64;
    let mut min_form = f64::INFINITY;
    for (i, &(s2, s3)) in SIGN_PATTERNS.iter().enumerate() {
        let lhs_vec = t.signed_sum(s2, s3);
        let lhs = vec3::dot(&lhs_vec, &lhs_vec);
        let mut rhs = 0.0;
        for label in Label::ALL {
            let s = label.signs();
            let proj =
                f64::from(s[0]) + f64::from(s2) * f64::from(s[1]) + f64::from(s3) * f64::from(s[2]);
            rhs += c_set.get(label) * proj * proj;
        }
        quadratic_forms[i] = (lhs, rhs);
        max_dev = max_dev.max(libm::fabs(lhs - rhs));
        min_form = min_form.min(rhs);
    }
    if max_dev > TOL_STATE {
        return Err(Error::InvariantViolation {
            context: "coefficient quadratic-form identity",
            deviation: max_dev,
        });
    }
    Ok(ConsistencyReport {
        quadratic_forms,
        max_identity_deviation: max_dev,
        min_form,
    })
}

/// `‖ |Ψ₀⟩⟨Ψ₀| + Σ_{k,l} (M⁻¹)_{kl} |n_k⟩⟨n_l| − 1₄ ‖_F`.
pub fn identity_expansion_residual(t: &VectorTriple) -> Result<f64> {
    let minv = gram(t).inverse()?;
    let psi0 = singlet();
    let mut sum = Operator4::outer(psi0.amplitudes(), psi0.amplitudes());
    let kets = [
        vector_ket_amps(t.get(0)),
        vector_ket_amps(t.get(1)),
        vector_ket_amps(t.get(2)),
    ];
    for k in 0..3 {
        for l in 0..3 {
            sum = sum.add(&Operator4::outer(&kets[k], &kets[l]).scale(minv[k][l]));
        }
    }
    Ok(sum.sub(&Operator4::identity()).frobenius_norm())
}
