//! Complex linear algebra for one- and two-spin states and 4×4 operators.
//!
//! Two-particle amplitudes are ordered in the product basis
//! `|+z,+z⟩, |+z,−z⟩, |−z,+z⟩, |−z,−z⟩` (first factor = first particle);
//! every literal amplitude in this crate is relative to that order.

use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vec3::UnitVector3;
use crate::TOL_STATE;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Shorthand for a complex entry.
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A measurement result, ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeSign {
    Plus,
    Minus,
}

impl OutcomeSign {
    pub fn value(&self) -> i8 {
        match self {
            OutcomeSign::Plus => 1,
            OutcomeSign::Minus => -1,
        }
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.value())
    }

    pub fn flipped(&self) -> OutcomeSign {
        match self {
            OutcomeSign::Plus => OutcomeSign::Minus,
            OutcomeSign::Minus => OutcomeSign::Plus,
        }
    }

    pub fn from_value(v: i8) -> Option<OutcomeSign> {
        match v {
            1 => Some(OutcomeSign::Plus),
            -1 => Some(OutcomeSign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for OutcomeSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeSign::Plus => write!(f, "+1"),
            OutcomeSign::Minus => write!(f, "-1"),
        }
    }
}

fn amps_finite(amps: &[Complex64]) -> bool {
    amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
}

fn amps_norm(amps: &[Complex64]) -> f64 {
    libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum())
}

/// Pure state of a single spin-1/2; unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State2 {
    amp: [Complex64; 2],
}

impl State2 {
    pub fn new(amp: [Complex64; 2]) -> Result<Self> {
        if !amps_finite(&amp) {
            return Err(Error::NonFinite);
        }
        let n = amps_norm(&amp);
        if libm::fabs(n - 1.0) > TOL_STATE {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { amp })
    }

    pub(crate) fn new_unchecked(amp: [Complex64; 2]) -> Self {
        debug_assert!(libm::fabs(amps_norm(&amp) - 1.0) <= TOL_STATE);
        Self { amp }
    }

    pub fn amplitudes(&self) -> &[Complex64; 2] {
        &self.amp
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &State2) -> Complex64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Pure state of two spin-1/2 particles in the declared product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State4 {
    amp: [Complex64; 4],
}

impl State4 {
    pub fn new(amp: [Complex64; 4]) -> Result<Self> {
        if !amps_finite(&amp) {
            return Err(Error::NonFinite);
        }
        let n = amps_norm(&amp);
        if libm::fabs(n - 1.0) > TOL_STATE {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { amp })
    }

    pub(crate) fn new_unchecked(amp: [Complex64; 4]) -> Self {
        debug_assert!(libm::fabs(amps_norm(&amp) - 1.0) <= TOL_STATE);
        Self { amp }
    }

    /// Normalizes a nonzero amplitude vector.
    pub fn normalized(amp: [Complex64; 4]) -> Result<Self> {
        if !amps_finite(&amp) {
            return Err(Error::NonFinite);
        }
        let n = amps_norm(&amp);
        if n < 1e-12 {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self {
            amp: scale4(&amp, (1.0 / n).into()),
        })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amp
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &State4) -> Complex64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|, the phase-free overlap.
    pub fn overlap_magnitude(&self, other: &State4) -> f64 {
        self.inner(other).norm()
    }
}

pub(crate) fn scale4(v: &[Complex64; 4], s: Complex64) -> [Complex64; 4] {
    [v[0] * s, v[1] * s, v[2] * s, v[3] * s]
}

/// Kronecker product `a ⊗ b` in the declared basis order.
pub fn tensor(a: &State2, b: &State2) -> State4 {
    let a = a.amplitudes();
    let b = b.amplitudes();
    State4::new_unchecked([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
}

/// Eigenstate of `n·σ` with eigenvalue `sign`, in the fixed phase convention
/// `|+1,n⟩ = (cos θ/2, e^{iφ} sin θ/2)`, `|−1,n⟩ = (−e^{−iφ} sin θ/2, cos θ/2)`
/// with `n = (sin θ cos φ, sin θ sin φ, cos θ)` and `φ = 0` at the poles.
pub fn spin_eigenstate(n: &UnitVector3, sign: OutcomeSign) -> State2 {
    let theta = libm::acos(n.z().clamp(-1.0, 1.0));
    let phi = libm::atan2(n.y(), n.x());
    let ct = libm::cos(0.5 * theta);
    let st = libm::sin(0.5 * theta);
    let phase = c(libm::cos(phi), libm::sin(phi));
    match sign {
        OutcomeSign::Plus => State2::new_unchecked([c(ct, 0.0), phase * st]),
        OutcomeSign::Minus => State2::new_unchecked([-phase.conj() * st, c(ct, 0.0)]),
    }
}

/// The 2×2 matrix `n·σ`.
pub fn spin_operator(n: &UnitVector3) -> [[Complex64; 2]; 2] {
    [
        [c(n.z(), 0.0), c(n.x(), -n.y())],
        [c(n.x(), n.y()), c(-n.z(), 0.0)],
    ]
}

/// `m · v` for a 2×2 complex matrix.
pub fn apply2(m: &[[Complex64; 2]; 2], v: &[Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

/// A 4×4 complex operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator4 {
    e: [[Complex64; 4]; 4],
}

impl Operator4 {
    pub fn zero() -> Self {
        Self { e: [[ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        let mut e = [[ZERO; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Self { e }
    }

    pub fn from_entries(e: [[Complex64; 4]; 4]) -> Result<Self> {
        for row in &e {
            if !amps_finite(row) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { e })
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut e = [[ZERO; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = c(d[i], 0.0);
        }
        Self { e }
    }

    /// |u⟩⟨v| from raw (not necessarily unit) amplitude vectors.
    pub fn outer(u: &[Complex64; 4], v: &[Complex64; 4]) -> Self {
        let mut e = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] = u[i] * v[j].conj();
            }
        }
        Self { e }
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.e
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.e[i][j]
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [ZERO; 4];
        for (i, row) in self.e.iter().enumerate() {
            out[i] = row.iter().zip(v.iter()).map(|(m, x)| m * x).sum();
        }
        out
    }

    pub fn add(&self, other: &Operator4) -> Operator4 {
        let mut e = self.e;
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] += other.e[i][j];
            }
        }
        Operator4 { e }
    }

    pub fn sub(&self, other: &Operator4) -> Operator4 {
        let mut e = self.e;
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] -= other.e[i][j];
            }
        }
        Operator4 { e }
    }

    pub fn scale(&self, s: f64) -> Operator4 {
        let mut e = self.e;
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        Operator4 { e }
    }

    pub fn mul(&self, other: &Operator4) -> Operator4 {
        let mut e = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = ZERO;
                for k in 0..4 {
                    s += self.e[i][k] * other.e[k][j];
                }
                e[i][j] = s;
            }
        }
        Operator4 { e }
    }

    pub fn adjoint(&self) -> Operator4 {
        let mut e = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] = self.e[j][i].conj();
            }
        }
        Operator4 { e }
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.e[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(
            self.e
                .iter()
                .flat_map(|row| row.iter())
                .map(|x| x.norm_sqr())
                .sum(),
        )
    }

    /// max_{ij} |e_ij − conj(e_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.e[i][j] - self.e[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= TOL_STATE
    }
}

/// Real expectation value ⟨ψ|op|ψ⟩ of a Hermitian operator.
///
/// The imaginary residue is checked against tolerance and discarded.
pub fn expectation(op: &Operator4, psi: &State4) -> Result<f64> {
    let defect = op.hermiticity_defect();
    if defect > TOL_STATE {
        return Err(Error::NonHermitian { defect });
    }
    let image = op.apply(psi.amplitudes());
    let z: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(image.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    if libm::fabs(z.im) > TOL_STATE {
        return Err(Error::InvariantViolation {
            context: "expectation imaginary residue",
            deviation: z.im,
        });
    }
    Ok(z.re)
}

/// All four eigenvalues of a Hermitian operator, ascending (cyclic Jacobi
/// with complex rotations).
pub fn hermitian_eigenvalues(op: &Operator4) -> Result<[f64; 4]> {
    let defect = op.hermiticity_defect();
    if defect > TOL_STATE {
        return Err(Error::NonHermitian { defect });
    }
    let mut w = op.e;
    let scale = op.frobenius_norm().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off += w[p][q].norm_sqr();
            }
        }
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = w[p][q];
                let abs = apq.norm();
                if abs <= 1e-18 * scale {
                    continue;
                }
                let app = w[p][p].re;
                let aqq = w[q][q].re;
                let phase = apq / abs;
                // zero the (p,q) entry: tan 2θ = 2|a_pq| / (a_pp − a_qq)
                let theta = 0.5 * libm::atan2(2.0 * abs, app - aqq);
                let co = libm::cos(theta);
                let si = libm::sin(theta);
                // columns: v_p' = c v_p + s e^{-iφ} v_q ; v_q' = −s e^{iφ} v_p + c v_q
                for i in 0..4 {
                    let vip = w[i][p];
                    let viq = w[i][q];
                    w[i][p] = vip * co + viq * si * phase.conj();
                    w[i][q] = viq * co - vip * si * phase;
                }
                // rows: w_p' = c w_p + s e^{iφ} w_q ; w_q' = −s e^{-iφ} w_p + c w_q
                for j in 0..4 {
                    let wpj = w[p][j];
                    let wqj = w[q][j];
                    w[p][j] = wpj * co + wqj * si * phase;
                    w[q][j] = wqj * co - wpj * si * phase.conj();
                }
            }
        }
    }
    let mut eig = [w[0][0].re, w[1][1].re, w[2][2].re, w[3][3].re];
    eig.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(eig)
}

/// Smallest eigenvalue of a Hermitian operator.
pub fn min_eigenvalue(op: &Operator4) -> Result<f64> {
    Ok(hermitian_eigenvalues(op)?[0])
}
