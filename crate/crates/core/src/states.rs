//! The named two-particle states: the singlet, the symmetric-sector basis
//! X, Y, Z, the direction kets |n⟩, and Bob's post-measurement states.

use core::fmt;

use num_complex::Complex64;

use crate::error::Result;
use crate::quantum::{c, spin_eigenstate, tensor, OutcomeSign, State4};
use crate::vec3::UnitVector3;

/// Labels for the distinguished orthonormal states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    Psi0,
    X,
    Y,
    Z,
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Psi0 => write!(f, "Psi0"),
            StateLabel::X => write!(f, "X"),
            StateLabel::Y => write!(f, "Y"),
            StateLabel::Z => write!(f, "Z"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NamedState {
    pub label: StateLabel,
    pub state: State4,
}

/// A direction ket |n⟩ paired with the direction that generated it.
#[derive(Debug, Clone, Copy)]
pub struct VectorKet {
    pub direction: UnitVector3,
    pub state: State4,
}

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// The singlet `(1/√2)(|+z,−z⟩ − |−z,+z⟩)` = `(0, 1/√2, −1/√2, 0)`.
pub fn singlet() -> State4 {
    State4::new_unchecked([
        c(0.0, 0.0),
        c(FRAC_1_SQRT_2, 0.0),
        c(-FRAC_1_SQRT_2, 0.0),
        c(0.0, 0.0),
    ])
}

pub(crate) fn triplet_x_amps() -> [Complex64; 4] {
    [
        c(-FRAC_1_SQRT_2, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(FRAC_1_SQRT_2, 0.0),
    ]
}

pub(crate) fn triplet_y_amps() -> [Complex64; 4] {
    [
        c(0.0, FRAC_1_SQRT_2),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(0.0, FRAC_1_SQRT_2),
    ]
}

pub(crate) fn triplet_z_amps() -> [Complex64; 4] {
    [
        c(0.0, 0.0),
        c(FRAC_1_SQRT_2, 0.0),
        c(FRAC_1_SQRT_2, 0.0),
        c(0.0, 0.0),
    ]
}

/// The symmetric-sector basis states X, Y, Z: for each axis `e_a`,
/// `|A⟩ = (1/√2)(|+1,e_a⟩⊗|−1,e_a⟩ + |−1,e_a⟩⊗|+1,e_a⟩)`, giving
///
/// - `|X⟩ = (1/√2)(−|+z,+z⟩ + |−z,−z⟩)`
/// - `|Y⟩ = (i/√2)( |+z,+z⟩ + |−z,−z⟩)`
/// - `|Z⟩ = (1/√2)( |+z,−z⟩ + |−z,+z⟩)`
///
/// Together with the singlet they form an orthonormal basis, and
/// [`vector_ket`] composes them with real coefficients so that
/// `⟨m|n⟩ = m·n` and [`bob_post_state`] decomposes exactly over them.
pub fn triplet_basis() -> [NamedState; 3] {
    [
        NamedState {
            label: StateLabel::X,
            state: State4::new_unchecked(triplet_x_amps()),
        },
        NamedState {
            label: StateLabel::Y,
            state: State4::new_unchecked(triplet_y_amps()),
        },
        NamedState {
            label: StateLabel::Z,
            state: State4::new_unchecked(triplet_z_amps()),
        },
    ]
}

pub(crate) fn vector_ket_amps(n: &UnitVector3) -> [Complex64; 4] {
    let x = triplet_x_amps();
    let y = triplet_y_amps();
    let z = triplet_z_amps();
    let mut amp = [c(0.0, 0.0); 4];
    for i in 0..4 {
        amp[i] = x[i] * n.x() + y[i] * n.y() + z[i] * n.z();
    }
    amp
}

/// `|n⟩ = n_x|X⟩ + n_y|Y⟩ + n_z|Z⟩`; satisfies `⟨m|n⟩ = m·n` and
/// `⟨Ψ₀|n⟩ = 0`.
pub fn vector_ket(n: &UnitVector3) -> VectorKet {
    VectorKet {
        direction: *n,
        state: State4::new_unchecked(vector_ket_amps(n)),
    }
}

/// Fallible variant of [`vector_ket`] for raw component input.
pub fn vector_ket_checked(components: [f64; 3]) -> Result<VectorKet> {
    Ok(vector_ket(&UnitVector3::new(components)?))
}

/// The two-particle state Alice holds after Bob measures `n·σ` and obtains
/// `beta`: `|−β,n⟩ ⊗ |β,n⟩`, which equals `(1/√2)(|n⟩ − β|Ψ₀⟩)` exactly in
/// this crate's phase convention.
pub fn bob_post_state(n: &UnitVector3, beta: OutcomeSign) -> State4 {
    tensor(
        &spin_eigenstate(n, beta.flipped()),
        &spin_eigenstate(n, beta),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::State2;
    use crate::rng::SubStream;

    fn combine(a: &State4, ca: f64, b: &State4, cb: f64) -> State4 {
        let mut amp = [c(0.0, 0.0); 4];
        for i in 0..4 {
            amp[i] = a.amplitudes()[i] * ca + b.amplitudes()[i] * cb;
        }
        State4::new(amp).unwrap()
    }

    #[test]
    fn singlet_amplitudes() {
        let s = singlet();
        let w = core::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s.amplitudes()[0], c(0.0, 0.0));
        assert_eq!(s.amplitudes()[1], c(w, 0.0));
        assert_eq!(s.amplitudes()[2], c(-w, 0.0));
        assert_eq!(s.amplitudes()[3], c(0.0, 0.0));
    }

    #[test]
    fn singlet_overlap_with_opposite_product_states() {
        let s = SubStream::new(21, 400);
        let psi0 = singlet();
        for i in 0..200 {
            let n = UnitVector3::random(&s, i);
            let t = tensor(
                &spin_eigenstate(&n, OutcomeSign::Plus),
                &spin_eigenstate(&n, OutcomeSign::Minus),
            );
            let ov = psi0.overlap_magnitude(&t);
            assert!(
                (ov - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12,
                "overlap {ov}"
            );
        }
    }

    #[test]
    fn singlet_is_rotation_invariant() {
        let s = SubStream::new(22, 401);
        let psi0 = singlet();
        for i in 0..1000 {
            let n = UnitVector3::random(&s, i);
            let plus = spin_eigenstate(&n, OutcomeSign::Plus);
            let minus = spin_eigenstate(&n, OutcomeSign::Minus);
            let rotated = combine(
                &tensor(&plus, &minus),
                core::f64::consts::FRAC_1_SQRT_2,
                &tensor(&minus, &plus),
                -core::f64::consts::FRAC_1_SQRT_2,
            );
            assert!((psi0.overlap_magnitude(&rotated) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_is_orthonormal() {
        let [x, y, z] = triplet_basis();
        let psi0 = singlet();
        let all = [psi0, x.state, y.state, z.state];
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = a.inner(b);
                assert!((got - c(want, 0.0)).norm() < 1e-12, "gram({i},{j}) = {got}");
            }
        }
    }

    #[test]
    fn vector_ket_basis_cases() {
        let [x, _, z] = triplet_basis();
        let kx = vector_ket(&UnitVector3::EX);
        assert!((kx.state.overlap_magnitude(&x.state) - 1.0).abs() < 1e-15);
        let kz = vector_ket(&UnitVector3::EZ);
        assert!((kz.state.overlap_magnitude(&z.state) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vector_ket_inner_products_are_dots() {
        let s = SubStream::new(23, 402);
        for i in 0..100 {
            let m = UnitVector3::random(&s, 2 * i);
            let n = UnitVector3::random(&s, 2 * i + 1);
            let km = vector_ket(&m);
            let kn = vector_ket(&n);
            let ip = km.state.inner(&kn.state);
            assert!(libm::fabs(ip.im) < 1e-14);
            assert!(libm::fabs(ip.re - m.dot(&n)) < 1e-12);
        }
    }

    #[test]
    fn vector_ket_is_orthogonal_to_singlet() {
        let s = SubStream::new(24, 403);
        let psi0 = singlet();
        for i in 0..100 {
            let n = UnitVector3::random(&s, i);
            assert!(psi0.inner(&vector_ket(&n).state).norm() < 1e-12);
        }
    }

    #[test]
    fn bob_post_state_pinned_cases() {
        // (e_z, +1): |−1,e_z⟩⊗|+1,e_z⟩ with components (0,1)⊗(1,0)
        let post = bob_post_state(&UnitVector3::EZ, OutcomeSign::Plus);
        let down = spin_eigenstate(&UnitVector3::EZ, OutcomeSign::Minus);
        assert_eq!(
            down.amplitudes(),
            State2::new([c(0.0, 0.0), c(1.0, 0.0)])
                .unwrap()
                .amplitudes()
        );
        let w = core::f64::consts::FRAC_1_SQRT_2;
        let [_, _, z] = triplet_basis();
        let expect_plus = combine(&z.state, w, &singlet(), -w);
        assert!((post.overlap_magnitude(&expect_plus) - 1.0).abs() < 1e-12);

        let post_minus = bob_post_state(&UnitVector3::EZ, OutcomeSign::Minus);
        let expect_minus = combine(&z.state, w, &singlet(), w);
        assert!((post_minus.overlap_magnitude(&expect_minus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bob_post_state_singlet_component() {
        let s = SubStream::new(25, 404);
        let psi0 = singlet();
        for i in 0..200 {
            let n = UnitVector3::random(&s, i);
            for beta in [OutcomeSign::Plus, OutcomeSign::Minus] {
                let ov = psi0.overlap_magnitude(&bob_post_state(&n, beta));
                assert!((ov - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn post_state_identity_is_exact() {
        let s = SubStream::new(26, 405);
        let w = core::f64::consts::FRAC_1_SQRT_2;
        let psi0 = singlet();
        for i in 0..1000 {
            let n = UnitVector3::random(&s, i);
            for beta in [OutcomeSign::Plus, OutcomeSign::Minus] {
                let post = bob_post_state(&n, beta);
                let rhs = combine(&vector_ket(&n).state, w, &psi0, -w * beta.as_f64());
                // componentwise equality, not just overlap
                for (a, b) in post.amplitudes().iter().zip(rhs.amplitudes()) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }
}
