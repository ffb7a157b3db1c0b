//! Release gate: one integration test per numbered acceptance criterion.
//!
//! Each test prints a single `acceptance <NN> <name>: PASS|FAIL` line
//! (visible with `--nocapture`) and pins its tolerance in code, so this
//! target doubles as the release checklist: `cargo test --test acceptance`.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use randset::rng::{self, Rng};
use randset::{
    check_stable, derive_decomposition, energy_double_sum, intersect_independent,
    intersection_convergence, mean_function, n_distance_sq, n_distance_sq_from_pairs, op_circ,
    op_star, scaled_power_convergence, simulate_level, simulate_power, verify_geometric_chain,
    DiscreteRandomSet, FiniteSet, MeasureSpace, SimulationConfig, KAPPA_CONVENTION, STABILITY_TOL,
};

/// Tolerance for identities that hold exactly up to rounding.
const TOL_EXACT: f64 = 1e-12;
/// Tolerance for agreement with an independently computed oracle.
const TOL_ORACLE: f64 = 1e-9;
/// Master seed for every randomized criterion instance.
const SEED: u64 = 0x5e7_d157;

fn criterion(label: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("acceptance {label}: PASS"),
        Err(cause) => {
            println!("acceptance {label}: FAIL");
            resume_unwind(cause);
        }
    }
}

fn set(bits: &str) -> FiniteSet {
    FiniteSet::from_bits(bits.chars().map(|c| c == '1').collect())
}

fn random_space(rng: &mut Rng, points: usize) -> MeasureSpace {
    let weights = (0..points).map(|_| 0.05 + rng::unit_f64(rng)).collect();
    MeasureSpace::new(weights).expect("positive weights")
}

fn random_set(rng: &mut Rng, points: usize) -> FiniteSet {
    FiniteSet::from_bits((0..points).map(|_| rng::unit_f64(rng) < 0.5).collect())
}

/// Probabilities bounded away from zero, normalized to one.
fn random_probs(rng: &mut Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| 0.2 + 0.8 * rng::unit_f64(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn random_distribution(rng: &mut Rng, points: usize, max_support: usize) -> DiscreteRandomSet {
    let k = 1 + rng::bounded_index(rng, max_support);
    let support = (0..k).map(|_| random_set(rng, points)).collect();
    DiscreteRandomSet::new(support, random_probs(rng, k)).expect("valid distribution")
}

/// Strictly nested nonempty sets: sorted distinct prefix sizes of a shuffled
/// point order.
fn nested_sets(rng: &mut Rng, points: usize, len: usize) -> Vec<FiniteSet> {
    let mut order: Vec<usize> = (0..points).collect();
    rng::shuffle(rng, &mut order);
    let mut sizes: Vec<usize> = (1..=points).collect();
    rng::shuffle(rng, &mut sizes);
    let mut chosen = sizes[..len].to_vec();
    chosen.sort_unstable();
    chosen
        .into_iter()
        .map(|size| {
            let mut bits = vec![false; points];
            for &p in &order[..size] {
                bits[p] = true;
            }
            FiniteSet::from_bits(bits)
        })
        .collect()
}

#[test]
fn acceptance_01_zero_sum_forms_are_nonpositive() {
    criterion("01 zero-sum quadratic forms are nonpositive", || {
        let start = Instant::now();
        let mut rng = rng::substream(SEED, 1);
        for _ in 0..1000 {
            let points = 1 + rng::bounded_index(&mut rng, 8);
            let n_sets = 1 + rng::bounded_index(&mut rng, 10);
            let space = random_space(&mut rng, points);
            let sets: Vec<FiniteSet> = (0..n_sets).map(|_| random_set(&mut rng, points)).collect();
            let mut coeffs: Vec<f64> = (0..n_sets).map(|_| rng::unit_f64(&mut rng) - 0.5).collect();
            let mean = coeffs.iter().sum::<f64>() / n_sets as f64;
            for c in &mut coeffs {
                *c -= mean;
            }
            let residue: f64 = coeffs.iter().sum();
            coeffs[0] -= residue;

            let witness = space
                .quadratic_form_l(&sets, &coeffs)
                .expect("zero-sum form");
            assert!(
                witness.value <= TOL_EXACT,
                "form value {} exceeds zero",
                witness.value
            );
            assert!(
                (witness.value - witness.integral_value).abs() <= TOL_EXACT,
                "double sum {} differs from integral form {}",
                witness.value,
                witness.integral_value
            );
        }
        assert!(
            start.elapsed().as_secs_f64() < 5.0,
            "criterion exceeded its five-second budget"
        );
    });
}

#[test]
fn acceptance_02_pair_form_matches_mean_integral() {
    criterion(
        "02 pairwise energy form equals the mean-function integral",
        || {
            let mut rng = rng::substream(SEED, 2);
            for _ in 0..500 {
                let points = 1 + rng::bounded_index(&mut rng, 6);
                let space = random_space(&mut rng, points);
                let d_a = random_distribution(&mut rng, points, 6);
                let d_b = random_distribution(&mut rng, points, 6);
                let f = mean_function(&space, &d_a).unwrap();
                let g = mean_function(&space, &d_b).unwrap();

                let direct: f64 = space
                    .weights()
                    .iter()
                    .zip(f.values().iter().zip(g.values()))
                    .map(|(w, (fv, gv))| w * (fv - gv) * (fv - gv))
                    .sum();

                let pairs = n_distance_sq_from_pairs(&space, &d_a, &d_b).unwrap();
                let means = n_distance_sq(&space, &f, &g).unwrap();
                let energy = energy_double_sum(&space, &d_a, &d_b).unwrap();
                assert!((pairs - direct).abs() <= TOL_EXACT);
                assert!((means - direct).abs() <= TOL_EXACT);
                // The raw double sum carries a factor two over the integral.
                assert!((energy - 2.0 * direct).abs() <= TOL_EXACT);
            }
        },
    );
}

#[test]
fn acceptance_03_polarization_and_exponent_independence() {
    criterion("03 overlap polarization and exponent independence", || {
        let mut rng = rng::substream(SEED, 3);
        for _ in 0..500 {
            let points = 1 + rng::bounded_index(&mut rng, 8);
            let space = random_space(&mut rng, points);
            let a = random_set(&mut rng, points);
            let b = random_set(&mut rng, points);

            let direct = space.kernel_k(&a, &b).unwrap();
            let polarized = space.kernel_k_via_l(&a, &b).unwrap();
            assert!((direct - polarized).abs() <= TOL_EXACT);

            let l = space.kernel_l(&a, &b).unwrap();
            for alpha in [0.5, 1.0, 2.0, 3.0] {
                let integral: f64 = space
                    .weights()
                    .iter()
                    .zip(a.bits().iter().zip(b.bits()))
                    .map(|(w, (&ab, &bb))| {
                        let diff = f64::from(u8::from(ab) ^ u8::from(bb));
                        w * diff.powf(alpha)
                    })
                    .sum();
                assert!((l - integral).abs() <= TOL_EXACT);
            }
        }
    });
}

#[test]
fn acceptance_04_projection_matches_least_squares_oracle() {
    criterion("04 projection matches the least-squares oracle", || {
        let mut rng = rng::substream(SEED, 4);
        for _ in 0..200 {
            let points = 2 + rng::bounded_index(&mut rng, 7);
            let space = random_space(&mut rng, points);

            // Disjoint system with k nonempty cells: seed one point per cell,
            // then scatter the rest (or leave them uncovered).
            let k = 1 + rng::bounded_index(&mut rng, points.min(4));
            let mut order: Vec<usize> = (0..points).collect();
            rng::shuffle(&mut rng, &mut order);
            let mut membership = vec![usize::MAX; points];
            for (cell, &point) in order.iter().take(k).enumerate() {
                membership[point] = cell;
            }
            for &point in order.iter().skip(k) {
                let slot = rng::bounded_index(&mut rng, k + 1);
                if slot < k {
                    membership[point] = slot;
                }
            }
            let system: Vec<FiniteSet> = (0..k)
                .map(|cell| {
                    FiniteSet::from_bits((0..points).map(|x| membership[x] == cell).collect())
                })
                .collect();
            let a = random_set(&mut rng, points);

            let projection = space.project(&a, &system).unwrap();

            // Independent oracle: solve the weighted normal equations with a
            // dense LU factorization.
            let gram =
                DMatrix::from_fn(k, k, |i, j| space.kernel_k(&system[i], &system[j]).unwrap());
            let rhs = DVector::from_fn(k, |i, _| space.kernel_k(&a, &system[i]).unwrap());
            let solved = gram.lu().solve(&rhs).expect("invertible normal equations");
            for (got, want) in projection.coefficients.iter().zip(solved.iter()) {
                assert!((got - want).abs() <= TOL_ORACLE);
            }

            let residual: f64 = space
                .weights()
                .iter()
                .enumerate()
                .map(|(x, w)| {
                    let fitted: f64 = (0..k)
                        .filter(|&j| system[j].bits()[x])
                        .map(|j| solved[j])
                        .sum();
                    let target = f64::from(u8::from(a.bits()[x]));
                    w * (target - fitted) * (target - fitted)
                })
                .sum();
            assert!((projection.residual - residual).abs() <= TOL_ORACLE);

            // Each coefficient is a conditional volume fraction in [0, 1]; the
            // coefficient mass weighted by cell measure cannot exceed the
            // measure of the projected set.
            let mut weighted = 0.0;
            for (s, c) in system.iter().zip(&projection.coefficients) {
                assert!((-TOL_EXACT..=1.0 + TOL_EXACT).contains(c));
                weighted += c * space.mu(s).unwrap();
            }
            assert!(weighted <= space.mu(&a).unwrap() + TOL_EXACT);
        }
    });
}

#[test]
fn acceptance_05_intersection_semigroup_and_union_duality() {
    criterion("05 intersection semigroup and union duality", || {
        let mut rng = rng::substream(SEED, 5);
        for _ in 0..200 {
            let points = 1 + rng::bounded_index(&mut rng, 8);
            let space = random_space(&mut rng, points);
            let d_a = random_distribution(&mut rng, points, 5);
            let d_b = random_distribution(&mut rng, points, 5);
            let f = mean_function(&space, &d_a).unwrap();
            let g = mean_function(&space, &d_b).unwrap();

            let pointwise = op_circ(&f, &g).unwrap();
            let product = intersect_independent(&space, &d_a, &d_b).unwrap();
            let from_distribution = mean_function(&space, &product).unwrap();
            for (got, want) in from_distribution.values().iter().zip(pointwise.values()) {
                assert!((got - want).abs() <= TOL_EXACT);
            }

            // The dual product is literally the product of complements.
            let star = op_star(&f, &g).unwrap();
            let dual = op_circ(&f.complement(), &g.complement()).unwrap();
            assert_eq!(star.values(), dual.values());
        }
    });
}

#[test]
fn acceptance_06_powers_converge_to_the_common_intersection() {
    criterion("06 powers converge to the common intersection", || {
        let mut rng = rng::substream(SEED, 6);
        for _ in 0..100 {
            let points = 2 + rng::bounded_index(&mut rng, 7);
            let len = 2 + rng::bounded_index(&mut rng, points.min(6) - 1);
            let space = random_space(&mut rng, points);
            let chain = nested_sets(&mut rng, points, len);
            let probs = random_probs(&mut rng, len);
            let d = DiscreteRandomSet::new(chain, probs).unwrap();

            let report = intersection_convergence(&space, &d, 50).unwrap();
            assert_eq!(report.rows.len(), 50);
            for row in &report.rows {
                assert!(row.sup_error <= row.bound + TOL_EXACT);
                // A point of the second chain set outside the first carries
                // mean value exactly one minus the intersection probability,
                // so the geometric envelope is attained, not just obeyed.
                assert!((row.sup_error - row.bound).abs() <= TOL_EXACT);
            }
        }
    });
}

#[test]
fn acceptance_07_worked_stability_examples() {
    criterion("07 worked stability examples", || {
        // Complementary halves with equal probability: level c = 1/2.
        let space = MeasureSpace::uniform_probability(4).unwrap();
        let halves =
            DiscreteRandomSet::new(vec![set("1100"), set("0011")], vec![0.5, 0.5]).unwrap();
        let report = check_stable(&space, &halves, 5, STABILITY_TOL).unwrap();
        assert!(report.is_stable);
        assert_eq!(report.kappa.len(), 4);
        for (i, kappa) in report.kappa.iter().enumerate() {
            let n = i as i32 + 2;
            assert!((kappa - 0.5f64.powi(n - 1)).abs() <= TOL_ORACLE);
        }

        // Uniform choice among k = 3 disjoint cells: level c = 1/3.
        let space6 = MeasureSpace::uniform_probability(6).unwrap();
        let cells = DiscreteRandomSet::new(
            vec![set("110000"), set("001100"), set("000011")],
            vec![1.0 / 3.0; 3],
        )
        .unwrap();
        let report = check_stable(&space6, &cells, 5, STABILITY_TOL).unwrap();
        assert!(report.is_stable);
        for (i, kappa) in report.kappa.iter().enumerate() {
            let n = i as i32 + 2;
            assert!((kappa - (1.0f64 / 3.0).powi(n - 1)).abs() <= TOL_ORACLE);
        }

        // The CLI report states the normalization convention next to the
        // computed values.
        let fx = Fixtures::new();
        let space_path = fx.write(
            "space.json",
            r#"{"schema":"randset.space.v1","weights":[0.25,0.25,0.25,0.25]}"#,
        );
        let dist_path = fx.write(
            "halves.json",
            r#"{"support":[{"bits":"1100"},{"bits":"0011"}],"probs":[0.5,0.5]}"#,
        );
        let cli_report = stdout_json(&run(&[
            "stability",
            "check",
            "--space",
            arg(&space_path),
            "--input",
            arg(&dist_path),
            "--n-max",
            "5",
        ]));
        assert_eq!(cli_report["is_stable"], true);
        assert_eq!(
            cli_report["kappa_convention"].as_str().unwrap(),
            KAPPA_CONVENTION
        );
        let rows = cli_report["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        for row in rows {
            let n = row["n"].as_i64().unwrap() as i32;
            let kappa = row["kappa_n"].as_f64().unwrap();
            assert!((kappa - 0.5f64.powi(n - 1)).abs() <= TOL_ORACLE);
        }
    });
}

#[test]
fn acceptance_08_chain_power_identity_is_exact() {
    criterion("08 chain power identity is exact", || {
        let mut rng = rng::substream(SEED, 8);
        for _ in 0..200 {
            let points = 1 + rng::bounded_index(&mut rng, 8);
            let len = 1 + rng::bounded_index(&mut rng, points.min(6));
            let space = random_space(&mut rng, points);
            let chain = nested_sets(&mut rng, points, len);
            let a = 0.05 + 0.9 * rng::unit_f64(&mut rng);

            let worst = verify_geometric_chain(&space, &chain, a, 10).unwrap();
            assert!(worst <= TOL_EXACT, "deviation {worst} for parameter {a}");
        }
    });
}

#[test]
fn acceptance_09_normalized_power_error_matches_closed_form() {
    criterion("09 normalized power error matches its closed form", || {
        let space = MeasureSpace::uniform_probability(6).unwrap();
        let target =
            DiscreteRandomSet::new(vec![set("110000"), set("001100")], vec![0.5, 0.5]).unwrap();
        let mixture = DiscreteRandomSet::new(
            vec![set("110000"), set("001100"), set("000010")],
            vec![0.4, 0.4, 0.2],
        )
        .unwrap();

        let f_a = mean_function(&space, &mixture).unwrap();
        let f_b = mean_function(&space, &target).unwrap();
        let decomp = derive_decomposition(&f_a, &f_b).unwrap();
        assert!((decomp.p1 - 0.8).abs() <= TOL_EXACT);

        let rows = scaled_power_convergence(&space, &mixture, &target, &decomp, 30).unwrap();
        assert_eq!(rows.len(), 30);
        for row in &rows {
            assert!((row.error - row.h_term).abs() <= TOL_EXACT);
            // On this instance the error telescopes to 2^{-(n+1)}.
            let closed = 0.5f64.powi(row.n as i32 + 1);
            assert!((row.error - closed).abs() <= TOL_EXACT);
        }
        for pair in rows.windows(2) {
            assert!(pair[1].error < pair[0].error, "error must shrink with n");
        }
        assert!(rows.last().unwrap().error <= 1e-9);
    });
}

#[test]
fn acceptance_10_null_rejection_rate_is_near_nominal() {
    criterion("10 null rejection rate is near nominal", || {
        let start = Instant::now();
        let space = MeasureSpace::new(vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.25]).unwrap();
        let support = [
            "100000", "010000", "110000", "001100", "101010", "010101", "111000", "000111",
            "100100", "011011",
        ];
        let probs: Vec<f64> = (1..=10).map(|j| j as f64 / 55.0).collect();
        let d = DiscreteRandomSet::new(support.iter().map(|b| set(b)).collect(), probs).unwrap();

        let config = SimulationConfig {
            sample_size: 20,
            n_permutations: 999,
            trials: 500,
            alpha: 0.05,
            seed: 0,
        };
        let report = simulate_level(&space, &d, &config).unwrap();
        assert!(
            (0.03..=0.07).contains(&report.rejection_rate),
            "null rejection rate {} outside [0.03, 0.07]",
            report.rejection_rate
        );
        assert!(
            start.elapsed().as_secs_f64() < 60.0,
            "criterion exceeded its sixty-second budget"
        );
    });
}

#[test]
fn acceptance_11_disjoint_alternative_is_always_rejected() {
    criterion("11 disjoint-support alternative is rejected", || {
        let space = MeasureSpace::uniform_probability(4).unwrap();
        let d_a = DiscreteRandomSet::degenerate(set("1100"));
        let d_b = DiscreteRandomSet::degenerate(set("0011"));

        let config = SimulationConfig {
            sample_size: 10,
            n_permutations: 199,
            trials: 200,
            alpha: 0.05,
            seed: 0,
        };
        let report = simulate_power(&space, &d_a, &d_b, &config).unwrap();
        assert!(
            report.rejection_rate >= 0.99,
            "power {} below 0.99",
            report.rejection_rate
        );
    });
}

#[test]
fn acceptance_12_seeded_reports_are_byte_identical() {
    criterion("12 seeded reports are byte-identical", || {
        let fx = Fixtures::new();
        let space = fx.write(
            "space.json",
            r#"{"schema":"randset.space.v1","weights":[0.25,0.25,0.25,0.25]}"#,
        );
        let sample_a = fx.write(
            "sa.json",
            r#"{"observations":[{"bits":"1100"},{"bits":"1000"},{"bits":"1110"}]}"#,
        );
        let sample_b = fx.write(
            "sb.json",
            r#"{"observations":[{"bits":"0011"},{"bits":"0001"},{"bits":"0111"}]}"#,
        );
        let vectors_a = fx.write("va.json", r#"{"vectors":[[0.1,0.2],[0.3,0.4],[0.5,0.6]]}"#);
        let vectors_b = fx.write("vb.json", r#"{"vectors":[[1.1,0.2],[1.3,0.4],[1.5,0.6]]}"#);
        let dist_a = fx.write(
            "da.json",
            r#"{"support":[{"bits":"1100"},{"bits":"0011"},{"bits":"1010"}],"probs":[0.4,0.4,0.2]}"#,
        );
        let dist_b = fx.write("db.json", r#"{"support":[{"bits":"0011"}],"probs":[1.0]}"#);

        let invocations: Vec<Vec<&str>> = vec![
            vec![
                "test",
                "sets",
                "--space",
                arg(&space),
                "--input",
                arg(&sample_a),
                "--input-b",
                arg(&sample_b),
                "--n-permutations",
                "99",
                "--seed",
                "11",
            ],
            vec![
                "test",
                "sets",
                "--space",
                arg(&space),
                "--input",
                arg(&sample_a),
                "--input-b",
                arg(&sample_b),
                "--n-permutations",
                "99",
                "--seed",
                "11",
                "--format",
                "csv",
            ],
            vec![
                "test",
                "sets",
                "--space",
                arg(&space),
                "--input",
                arg(&sample_a),
                "--input-b",
                arg(&sample_b),
                "--exact",
            ],
            vec![
                "test",
                "vectors",
                "--input",
                arg(&vectors_a),
                "--input-b",
                arg(&vectors_b),
                "--r",
                "1.0",
                "--n-permutations",
                "49",
                "--seed",
                "4",
            ],
            vec![
                "test",
                "simulate-level",
                "--space",
                arg(&space),
                "--input",
                arg(&dist_a),
                "--sample-size",
                "6",
                "--n-permutations",
                "29",
                "--trials",
                "8",
                "--seed",
                "3",
            ],
            vec![
                "test",
                "simulate-power",
                "--space",
                arg(&space),
                "--input",
                arg(&dist_a),
                "--input-b",
                arg(&dist_b),
                "--sample-size",
                "6",
                "--n-permutations",
                "29",
                "--trials",
                "8",
                "--seed",
                "9",
            ],
        ];
        for args in &invocations {
            let first = run(args);
            let second = run(args);
            assert!(
                first.status.success(),
                "command failed: {}",
                String::from_utf8_lossy(&first.stderr)
            );
            assert!(second.status.success());
            assert_eq!(
                first.stdout, second.stdout,
                "reruns of {args:?} disagreed byte for byte"
            );
            assert!(!first.stdout.is_empty());
        }
    });
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_randset"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().expect("tempdir"),
        }
    }

    fn write(&self, name: &str, content: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, content).expect("fixture write");
        path
    }
}

fn arg(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}
