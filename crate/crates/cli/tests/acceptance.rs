//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line with its measured runtime (visible under `--nocapture`).
//! Tolerances are pinned in the assertions; runtime budgets are printed for
//! reference but not asserted.

use std::time::Instant;

use meanking_core::povm::{
    build_povm, classify_degenerate, consistency_check, feasibility, identity_expansion_residual,
    reduce_to_projective, solve_coefficients, tilted_planar_triple, verify_povm, DegeneracyReport,
    Label, VectorTriple, SIGN_TABLE,
};
use meanking_core::protocol::{run, ProtocolConfig};
use meanking_core::quantum::{c, spin_eigenstate, tensor, OutcomeSign, State4};
use meanking_core::rng::SubStream;
use meanking_core::states::{bob_post_state, singlet, vector_ket};
use meanking_core::vec3::{self, UnitVector3};

fn criterion(name: &str, budget_s: f64, body: impl FnOnce()) {
    let start = Instant::now();
    body();
    let dt = start.elapsed().as_secs_f64();
    println!("[acceptance] {name}: PASS ({dt:.2} s, budget {budget_s} s)");
}

fn combine(a: &State4, ca: f64, b: &State4, cb: f64) -> State4 {
    let mut amp = [c(0.0, 0.0); 4];
    for i in 0..4 {
        amp[i] = a.amplitudes()[i] * ca + b.amplitudes()[i] * cb;
    }
    State4::new(amp).expect("unit combination")
}

fn mixed_triple() -> VectorTriple {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    VectorTriple::from_components([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [h, 0.0, h]]).unwrap()
}

/// Rejection-samples a feasible triple, advancing the index.
fn next_feasible(s: &SubStream, i: &mut u64) -> VectorTriple {
    loop {
        let t = VectorTriple::random(s, *i);
        *i += 1;
        if feasibility(&t).feasible {
            return t;
        }
    }
}

#[test]
fn criterion_01_singlet_rotational_invariance() {
    criterion("01 singlet rotational invariance", 1.0, || {
        let s = SubStream::new(1001, 0);
        let psi0 = singlet();
        let w = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..1000 {
            let n = UnitVector3::random(&s, i);
            let plus = spin_eigenstate(&n, OutcomeSign::Plus);
            let minus = spin_eigenstate(&n, OutcomeSign::Minus);
            let rotated = combine(&tensor(&plus, &minus), w, &tensor(&minus, &plus), -w);
            let overlap = psi0.overlap_magnitude(&rotated);
            assert!(
                (overlap - 1.0).abs() < 1e-12,
                "overlap {overlap} at direction {:?}",
                n.components()
            );
        }
    });
}

#[test]
fn criterion_02_post_measurement_identity() {
    criterion("02 post-measurement state identity", 1.0, || {
        let s = SubStream::new(1002, 0);
        let psi0 = singlet();
        let w = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..1000 {
            let n = UnitVector3::random(&s, i);
            for beta in [OutcomeSign::Plus, OutcomeSign::Minus] {
                let post = bob_post_state(&n, beta);
                let rhs = combine(&vector_ket(&n).state, w, &psi0, -w * beta.as_f64());
                let overlap = post.overlap_magnitude(&rhs);
                assert!(
                    (overlap - 1.0).abs() < 1e-12,
                    "overlap {overlap} at {:?}, beta {beta}",
                    n.components()
                );
            }
        }
    });
}

#[test]
fn criterion_03_identity_expansion() {
    criterion("03 identity expansion over ket basis", 1.0, || {
        let s = SubStream::new(1003, 0);
        for i in 0..100 {
            let t = VectorTriple::random_independent(&s, i);
            let residual = identity_expansion_residual(&t).unwrap();
            assert!(residual < 1e-10, "residual {residual:e} at sample {i}");
        }
    });
}

#[test]
fn criterion_04_coefficient_oracle_equivalence() {
    criterion("04 coefficient closed form vs linear solve", 2.0, || {
        let s = SubStream::new(1004, 0);
        let mut idx = 0u64;
        for i in 0..1000u64 {
            let t = next_feasible(&s, &mut idx);
            let rep = feasibility(&t);
            let span = rep.r_interval.hi - rep.r_interval.lo;
            let r = rep.r_interval.lo + span * s.f64_at(1_000_000 + i);
            let closed = solve_coefficients(&t, r).unwrap();
            let oracle = oracle::coefficients(&t, r);
            for label in Label::ALL {
                let dev = (closed.get(label) - oracle[label.index()]).abs();
                assert!(dev < 1e-12, "C_{label} off by {dev:e} at sample {i}");
            }
        }
    });
}

#[test]
fn criterion_05_feasibility_iff_over_100k_samples() {
    criterion(
        "05 feasibility iff (closed form vs grid search)",
        60.0,
        || {
            let s = SubStream::new(1005, 0);
            let mut feasible_count = 0u64;
            let mut sufficient_count = 0u64;
            for i in 0..100_000u64 {
                let t = VectorTriple::random(&s, i);
                let rep = feasibility(&t);
                let brute = oracle::grid_search_feasible(&t);
                assert_eq!(
                    rep.feasible,
                    brute,
                    "closed form vs grid search disagree at sample {i} \
                 (min sign norm {})",
                    rep.min_sign_norm()
                );
                assert_eq!(
                    rep.feasible,
                    !rep.r_interval.is_empty(),
                    "interval emptiness inconsistent at sample {i}"
                );
                assert_eq!(
                    rep.feasible,
                    rep.min_sign_norm() >= 1.0 - 1e-12,
                    "norm criterion inconsistent at sample {i}"
                );
                if rep.sufficient_condition_holds {
                    sufficient_count += 1;
                    assert!(
                        rep.feasible,
                        "sufficient condition held but a sign norm fell below 1 at sample {i}"
                    );
                }
                if rep.feasible {
                    feasible_count += 1;
                }
            }
            assert!(feasible_count > 10_000, "degenerate sampling");
            assert!(
                sufficient_count > 100,
                "sufficient condition never exercised"
            );
        },
    );
}

#[test]
fn criterion_06_povm_validity_and_zero_pattern() {
    criterion("06 measurement validity and zero pattern", 5.0, || {
        let s = SubStream::new(1006, 0);
        let mut idx = 0u64;
        for _ in 0..100 {
            let t = next_feasible(&s, &mut idx);
            let interval = feasibility(&t).r_interval;
            for r in [0.0, interval.lo, interval.hi] {
                let povm = build_povm(&t, r).unwrap();
                let d = verify_povm(&povm);
                assert!(
                    d.completeness_residual < 1e-10,
                    "completeness {:e}",
                    d.completeness_residual
                );
                for eig in d.min_eigenvalues {
                    assert!(eig >= -1e-10, "negative eigenvalue {eig:e}");
                }
                for eig in d.second_eigenvalues {
                    assert!(eig < 1e-10, "rank above 1: second eigenvalue {eig:e}");
                }
                assert!(
                    d.max_forbidden_probability < 1e-12,
                    "forbidden cell at {:e}",
                    d.max_forbidden_probability
                );
                assert!(
                    d.max_allowed_deviation < 1e-10,
                    "allowed cell off exact value 2C_K by {:e}",
                    d.max_allowed_deviation
                );
                for sum in d.row_sums {
                    assert!((sum - 1.0).abs() < 1e-10, "row sum {sum}");
                }
            }
        }
    });
}

#[test]
fn criterion_07_certainty_of_inference() {
    criterion("07 inference certainty over Monte Carlo runs", 10.0, || {
        let triples = [
            VectorTriple::orthonormal(),
            mixed_triple(),
            tilted_planar_triple(0.6),
        ];
        for (which, triple) in triples.into_iter().enumerate() {
            let config = ProtocolConfig {
                triple,
                r: 0.0,
                seed: 42 + which as u64,
                trials: 100_000,
            };
            let out = run(&config).unwrap();
            assert_eq!(
                out.statistics.accuracy(),
                Some(1.0),
                "accuracy below 1 on triple {which}"
            );
            assert!(out.transcripts.iter().all(|t| t.correct));
            let exact = verify_povm(&build_povm(&triple, 0.0).unwrap()).prob_table;
            assert!(
                out.statistics.zero_cells_empty(&exact),
                "a zero-probability cell was sampled on triple {which}"
            );
            let z = out.statistics.max_z_score(&exact);
            assert!(
                z < 5.0,
                "empirical frequency {z} sigma off on triple {which}"
            );
        }
    });
}

#[test]
fn criterion_08_orthogonal_reduction() {
    criterion("08 orthogonal triad reduces to 4 projectors", 1.0, || {
        let t = VectorTriple::orthonormal();
        let reduction = reduce_to_projective(&t).expect("orthonormal triad reduces");
        let povm = build_povm(&t, 1.0).unwrap();
        let mut sum = meanking_core::quantum::Operator4::zero();
        for (i, proj) in reduction.projectors.iter().enumerate() {
            sum = sum.add(proj);
            // rank-1 projector: eigenvalues {1, 0, 0, 0}
            let eig = meanking_core::quantum::hermitian_eigenvalues(proj).unwrap();
            assert!(eig[0].abs() < 1e-10 && (eig[3] - 1.0).abs() < 1e-10);
            // E_K = C_K ‖u‖² |û⟩⟨û| = (1/4)·4·|û⟩⟨û|: the element IS the projector
            let label = Label::ALL[i];
            let dev = proj.sub(povm.element(label)).frobenius_norm();
            assert!(dev < 1e-12, "projector {label} deviates by {dev:e}");
            for other in reduction.projectors.iter().skip(i + 1) {
                let prod = proj.mul(other).frobenius_norm();
                assert!(prod < 1e-10, "projectors not orthogonal: {prod:e}");
            }
        }
        let identity_dev = sum
            .sub(&meanking_core::quantum::Operator4::identity())
            .frobenius_norm();
        assert!(identity_dev < 1e-10);

        // any pair overlap above 1e-6 must yield no reduction
        assert!(reduce_to_projective(&mixed_triple()).is_none());
        assert!(reduce_to_projective(&tilted_planar_triple(0.6)).is_none());
        let s = SubStream::new(1008, 0);
        let mut rejected = 0;
        for i in 0..200 {
            let t = VectorTriple::random(&s, i);
            let g = meanking_core::povm::gram(&t);
            if g.max_off_diagonal() > 1e-6 {
                assert!(reduce_to_projective(&t).is_none());
                rejected += 1;
            }
        }
        assert!(rejected > 150, "sampling produced too few oblique triples");
    });
}

#[test]
fn criterion_09_degenerate_no_solution() {
    criterion("09 dependent triples certify no solution", 1.0, || {
        let s = SubStream::new(1009, 0);
        let mut produced = 0u64;
        let mut ctr = 0u64;
        while produced < 100 {
            let n1 = UnitVector3::random(&s, 4 * ctr);
            let n2 = UnitVector3::random(&s, 4 * ctr + 1);
            let x = 4.0 * (s.f64_at(1_000_000 + 2 * ctr) - 0.5);
            let y = 4.0 * (s.f64_at(1_000_000 + 2 * ctr + 1) - 0.5);
            ctr += 1;
            if vec3::norm(&n1.cross(&n2)) < 0.1 || x.abs() < 0.1 || y.abs() < 0.1 {
                continue;
            }
            let raw = vec3::add(
                &vec3::scale(&n1.components(), x),
                &vec3::scale(&n2.components(), y),
            );
            if vec3::norm(&raw) < 0.3 {
                continue;
            }
            let n3 = UnitVector3::normalized(raw).unwrap();
            if vec3::norm(&n3.cross(&n1)) < 1e-3 || vec3::norm(&n3.cross(&n2)) < 1e-3 {
                continue;
            }
            let t = VectorTriple::new(n1, n2, n3);
            match classify_degenerate(&t) {
                DegeneracyReport::DependentNonparallel {
                    x: wx,
                    y: wy,
                    residual,
                    certificate,
                } => {
                    assert!(residual < 1e-10, "witness residual {residual:e}");
                    // recompute the residual from the reported coefficients
                    let recon = vec3::add(
                        &vec3::scale(&n1.components(), wx),
                        &vec3::scale(&n2.components(), wy),
                    );
                    let check = vec3::norm(&vec3::sub(&n3.components(), &recon));
                    assert!(check < 1e-10);
                    assert!(
                        certificate.ray_second_eigenvalue < 1e-10,
                        "forced element sum is not rank deficient"
                    );
                    assert!(certificate.identity_deficit > 1.0);
                    assert!(build_povm(&t, 0.0).is_err());
                }
                other => panic!("expected dependent_nonparallel, got {other:?}"),
            }
            produced += 1;
        }
    });
}

#[test]
fn criterion_10_counterexample_family() {
    criterion("10 tilted planar counterexample family", 1.0, || {
        let threshold = (1.0f64 / 3.0).asin();
        let step = 0.01;
        let mut eps = 0.0;
        while eps <= 0.5 + step / 2.0 {
            let rep = feasibility(&tilted_planar_triple(eps));
            if (eps - threshold).abs() > step {
                assert_eq!(
                    rep.feasible,
                    eps > threshold,
                    "feasibility wrong at eps {eps}"
                );
            }
            eps += step;
        }
        let rep = feasibility(&tilted_planar_triple(0.1));
        let want = 3.0 * 0.1f64.sin();
        assert!(
            (rep.min_sign_norm() - want).abs() < 1e-12,
            "min sign norm {} vs 3 sin 0.1 = {want}",
            rep.min_sign_norm()
        );
        assert!(!rep.feasible);
    });
}

#[test]
fn criterion_11_quadratic_form_consistency() {
    criterion("11 coefficient quadratic-form identities", 1.0, || {
        let s = SubStream::new(1011, 0);
        let mut idx = 0u64;
        for i in 0..1000u64 {
            let t = next_feasible(&s, &mut idx);
            let rep = feasibility(&t);
            let span = rep.r_interval.hi - rep.r_interval.lo;
            let r = rep.r_interval.lo + span * s.f64_at(2_000_000 + i);
            let coeffs = solve_coefficients(&t, r).unwrap();
            let report = consistency_check(&coeffs, &t).unwrap();
            assert!(
                report.max_identity_deviation < 1e-12,
                "identity off by {:e}",
                report.max_identity_deviation
            );
            assert!(
                report.min_form >= 1.0 - 1e-12,
                "quadratic form {} below 1",
                report.min_form
            );
        }
    });
}

#[test]
fn criterion_12_cli_round_trip_and_determinism() {
    criterion("12 CLI round trip and determinism", 2.0, || {
        use std::process::Command;
        let bin = env!("CARGO_BIN_EXE_meanking");
        let dir = std::env::temp_dir();
        let config_path = dir.join(format!("meanking-acc-{}.cfg", std::process::id()));
        let povm_path = dir.join(format!("meanking-acc-{}.povm", std::process::id()));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        std::fs::write(
            &config_path,
            format!(
                "vectors = [[1,0,0],[0,1,0],[{h:.17e},0,{h:.17e}]]\nr = 0.1\nseed = 123\ntrials = 20000\n"
            ),
        )
        .unwrap();

        // povm file round trip
        let out = Command::new(bin)
            .args([
                "povm",
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                povm_path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let text = std::fs::read_to_string(&povm_path).unwrap();
        let parsed = meanking_cli::report::parse_povm_file(&text).unwrap();
        let local = build_povm(&mixed_triple(), 0.1).unwrap();
        let mut worst = 0.0f64;
        for (el, label) in parsed.elements.iter().zip(Label::ALL) {
            assert_eq!(el.signs, SIGN_TABLE[label.index()]);
            for i in 0..4 {
                for j in 0..4 {
                    let want = local.element(label).entry(i, j);
                    let got = el.matrix.entry(i, j);
                    worst = worst.max((want - got).norm());
                }
            }
        }
        assert!(
            worst <= 1e-15,
            "matrices differ by {worst:e} after re-parse"
        );

        // simulate determinism
        let sim = |seed: &str| {
            Command::new(bin)
                .args([
                    "simulate",
                    "--config",
                    config_path.to_str().unwrap(),
                    "--seed",
                    seed,
                ])
                .output()
                .unwrap()
        };
        let a = sim("123");
        let b = sim("123");
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "simulate output not byte-identical");
        let differently_seeded = sim("124");
        assert_ne!(a.stdout, differently_seeded.stdout);

        // sweep determinism
        let sweep = || {
            Command::new(bin)
                .args([
                    "sweep",
                    "--family",
                    "random-uniform",
                    "--count",
                    "500",
                    "--seed",
                    "9",
                ])
                .output()
                .unwrap()
        };
        let a = sweep();
        let b = sweep();
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "sweep output not byte-identical");

        let _ = std::fs::remove_file(&config_path);
        let _ = std::fs::remove_file(&povm_path);
    });
}

/// Test-side oracles, independent of the library's code paths.
mod oracle {
    use super::*;

    /// Gaussian elimination with partial pivoting.
    fn solve_dense(mut a: [[f64; 8]; 8], mut rhs: [f64; 8]) -> [f64; 8] {
        for col in 0..8 {
            let pivot = (col..8)
                .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                .unwrap();
            assert!(a[pivot][col].abs() > 1e-12, "singular system");
            a.swap(col, pivot);
            rhs.swap(col, pivot);
            for row in (col + 1)..8 {
                let f = a[row][col] / a[col][col];
                for k in col..8 {
                    a[row][k] -= f * a[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
        let mut x = [0.0; 8];
        for col in (0..8).rev() {
            let mut s = rhs[col];
            for k in (col + 1)..8 {
                s -= a[col][k] * x[k];
            }
            x[col] = s / a[col][col];
        }
        x
    }

    const CONSTRAINT_ROWS: [[f64; 8]; 8] = [
        [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0, -1.0, -1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0],
        [1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0],
        [1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0],
    ];

    /// Solves the seven constraint equations plus `C_A − C_E = r/4`.
    pub fn coefficients(t: &VectorTriple, r: f64) -> [f64; 8] {
        let n = t.vectors();
        let rhs = [
            1.0,
            n[0].dot(&n[1]),
            n[0].dot(&n[2]),
            n[1].dot(&n[2]),
            0.0,
            0.0,
            0.0,
            r / 4.0,
        ];
        solve_dense(CONSTRAINT_ROWS, rhs)
    }

    /// Does any r on the grid −2..2 (step 1e-3) keep every coefficient
    /// ≥ −1e-9? Coefficients evaluated locally from raw dot products.
    pub fn grid_search_feasible(t: &VectorTriple) -> bool {
        let n = t.vectors();
        let m12 = n[0].dot(&n[1]);
        let m13 = n[0].dot(&n[2]);
        let m23 = n[1].dot(&n[2]);
        let mut base = [0.0f64; 8];
        for (idx, s) in SIGN_TABLE.iter().enumerate() {
            let w = f64::from(s[0] * s[1]) * m12
                + f64::from(s[0] * s[2]) * m13
                + f64::from(s[1] * s[2]) * m23;
            base[idx] = (1.0 + w) / 8.0;
        }
        'grid: for i in -2000..=2000i64 {
            let r = i as f64 / 1000.0;
            for (idx, b) in base.iter().enumerate() {
                let coeff = if idx < 4 { b + r / 8.0 } else { b - r / 8.0 };
                if coeff < -1e-9 {
                    continue 'grid;
                }
            }
            return true;
        }
        false
    }
}
