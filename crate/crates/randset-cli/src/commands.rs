//! One handler per leaf command. Each handler is a thin wrapper: it loads
//! inputs, calls the library, and renders the result — no numeric work of
//! its own, so CLI output is identical to direct library calls.

use std::fs;
use std::path::Path;

use randset::io;
use randset::stability::power_deviation;
use randset::{
    cell_means, cell_means_values, check_stable, derive_decomposition, discretize,
    discretize_measure, energy_double_sum, intersection_convergence, mean_function, n_distance_p,
    n_distance_sq, n_distance_sq_from_pairs, permutation_test, permutation_test_exact,
    scaled_power_convergence, vector_permutation_test_exact, vector_permutation_test_r,
    MeasureSpace, SimulationConfig, TestResult, KAPPA_CONVENTION,
};

use crate::reports::{
    replicates_csv, simulation_csv, stability_csv, vectors_csv, ChainReport, ChainReportRow,
    ConvergenceReportRow, DiscretizeReport, DistDistanceReport, IntersectionReport, ProjectReport,
    ScaledReport, ScaledReportRow, SetDistanceReport, SimulationCliReport, SpaceReport,
    StabilityCheckReport, StabilityCheckRow, StabilityCsvRow, TestReport,
};
use crate::{CliError, Format};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_space(path: &Path) -> Result<MeasureSpace, CliError> {
    Ok(io::parse_space(&read(path)?)?)
}

fn json_only(format: Format) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::invalid(
            "this report is not tabular; use --format json",
        ));
    }
    Ok(())
}

pub fn space_validate(input: &Path, format: Format) -> Result<String, CliError> {
    json_only(format)?;
    let space = load_space(input)?;
    Ok(io::to_json_string(&SpaceReport {
        schema: "randset.report.space.v1",
        points: space.len(),
        total_mass: space.total_mass(),
        weights: space.weights().to_vec(),
    }))
}

pub fn distance_sets(
    space_path: &Path,
    a_path: &Path,
    b_path: &Path,
    alpha: f64,
    format: Format,
) -> Result<String, CliError> {
    json_only(format)?;
    let space = load_space(space_path)?;
    let a = io::parse_set(&read(a_path)?, space.len())?;
    let b = io::parse_set(&read(b_path)?, space.len())?;
    let cos_angle = match space.cos_angle(&a, &b) {
        Ok(v) => Some(v),
        Err(randset::Error::ZeroMeasureSet) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(io::to_json_string(&SetDistanceReport {
        schema: "randset.report.distance-sets.v1",
        alpha,
        kernel_l: space.kernel_l(&a, &b)?,
        dist: space.dist(&a, &b, alpha)?,
        kernel_k: space.kernel_k(&a, &b)?,
        kernel_k_via_l: space.kernel_k_via_l(&a, &b)?,
        cos_angle,
        norm_a: space.set_norm(&a)?,
        norm_b: space.set_norm(&b)?,
    }))
}

pub fn distance_dists(
    space_path: &Path,
    a_path: &Path,
    b_path: &Path,
    p: f64,
    format: Format,
) -> Result<String, CliError> {
    json_only(format)?;
    let space = load_space(space_path)?;
    let d_a = io::parse_distribution(&read(a_path)?, space.len())?;
    let d_b = io::parse_distribution(&read(b_path)?, space.len())?;
    let f = mean_function(&space, &d_a)?;
    let g = mean_function(&space, &d_b)?;
    let n2_sq_from_means = n_distance_sq(&space, &f, &g)?;
    Ok(io::to_json_string(&DistDistanceReport {
        schema: "randset.report.distance-dists.v1",
        n2_sq_from_means,
        n2_sq_from_pairs: n_distance_sq_from_pairs(&space, &d_a, &d_b)?,
        energy_double_sum: energy_double_sum(&space, &d_a, &d_b)?,
        n2: n2_sq_from_means.sqrt(),
        p,
        n_p: n_distance_p(&space, &f, &g, p)?,
        n_sup: n_distance_p(&space, &f, &g, f64::INFINITY)?,
    }))
}

pub fn project(
    space_path: &Path,
    set_path: &Path,
    system_path: &Path,
    format: Format,
) -> Result<String, CliError> {
    json_only(format)?;
    let space = load_space(space_path)?;
    let set = io::parse_set(&read(set_path)?, space.len())?;
    let system = io::parse_system(&read(system_path)?, space.len())?;
    let projection = space.project(&set, &system)?;
    Ok(io::to_json_string(&ProjectReport {
        schema: "randset.report.project.v1",
        coefficients: projection.coefficients.clone(),
        residual: projection.residual,
        coefficient_sum: projection.coefficient_sum,
        complete: space.is_complete_system(&system)?,
    }))
}

pub fn stability_check(
    space_path: &Path,
    input: &Path,
    n_max: u32,
    tol: f64,
    format: Format,
) -> Result<String, CliError> {
    let space = load_space(space_path)?;
    let d = io::parse_distribution(&read(input)?, space.len())?;
    let report = check_stable(&space, &d, n_max, tol)?;
    let f = mean_function(&space, &d)?;
    let rows: Vec<StabilityCheckRow> = report
        .kappa
        .iter()
        .enumerate()
        .map(|(i, &kappa_n)| {
            let n = i as u32 + 2;
            StabilityCheckRow {
                n,
                kappa_n,
                deviation: power_deviation(&f, kappa_n, n),
            }
        })
        .collect();
    Ok(match format {
        Format::Json => io::to_json_string(&StabilityCheckReport {
            schema: "randset.report.stability-check.v1",
            is_stable: report.is_stable,
            nonzero_value: report.nonzero_value,
            rows,
            kappa_convention: KAPPA_CONVENTION,
        }),
        Format::Csv => stability_csv(
            &rows
                .iter()
                .map(|r| StabilityCsvRow {
                    n: r.n,
                    kappa_n: Some(r.kappa_n),
                    lambda_n: None,
                    sup_error: r.deviation,
                })
                .collect::<Vec<_>>(),
        ),
    })
}

pub fn stability_t1(
    space_path: &Path,
    input: &Path,
    n_max: u32,
    format: Format,
) -> Result<String, CliError> {
    let space = load_space(space_path)?;
    let d = io::parse_distribution(&read(input)?, space.len())?;
    let conv = intersection_convergence(&space, &d, n_max)?;
    Ok(match format {
        Format::Json => io::to_json_string(&IntersectionReport {
            schema: "randset.report.stability-t1.v1",
            limit_set: conv.limit_set.bit_string(),
            p1: conv.p1,
            rows: conv
                .rows
                .iter()
                .map(|r| ConvergenceReportRow {
                    n: r.n,
                    sup_error: r.sup_error,
                    bound: r.bound,
                })
                .collect(),
        }),
        Format::Csv => stability_csv(
            &conv
                .rows
                .iter()
                .map(|r| StabilityCsvRow {
                    n: r.n,
                    kappa_n: None,
                    lambda_n: None,
                    sup_error: r.sup_error,
                })
                .collect::<Vec<_>>(),
        ),
    })
}

pub fn stability_t2(
    space_path: &Path,
    a_path: &Path,
    b_path: &Path,
    n_max: u32,
    format: Format,
) -> Result<String, CliError> {
    let space = load_space(space_path)?;
    let d_a = io::parse_distribution(&read(a_path)?, space.len())?;
    let d_b = io::parse_distribution(&read(b_path)?, space.len())?;
    let f_a = mean_function(&space, &d_a)?;
    let f_b = mean_function(&space, &d_b)?;
    let decomp = derive_decomposition(&f_a, &f_b)?;
    let rows = scaled_power_convergence(&space, &d_a, &d_b, &decomp, n_max)?;
    Ok(match format {
        Format::Json => io::to_json_string(&ScaledReport {
            schema: "randset.report.stability-t2.v1",
            p1: decomp.p1,
            p2: decomp.p2,
            rows: rows
                .iter()
                .map(|r| ScaledReportRow {
                    n: r.n,
                    kappa_n: r.kappa,
                    lambda_n: r.lambda,
                    error: r.error,
                    h_term: r.h_term,
                })
                .collect(),
            kappa_convention: KAPPA_CONVENTION,
        }),
        Format::Csv => stability_csv(
            &rows
                .iter()
                .map(|r| StabilityCsvRow {
                    n: r.n,
                    kappa_n: Some(r.kappa),
                    lambda_n: Some(r.lambda),
                    sup_error: r.error,
                })
                .collect::<Vec<_>>(),
        ),
    })
}

pub fn stability_t3(
    space_path: &Path,
    chain_path: &Path,
    a: f64,
    n_max: u32,
    format: Format,
) -> Result<String, CliError> {
    let space = load_space(space_path)?;
    let chain = io::parse_system(&read(chain_path)?, space.len())?;
    let rows = randset::chain_power_deviations(&space, &chain, a, n_max)?;
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(match format {
        Format::Json => {
            let mut report_rows = Vec::with_capacity(rows.len());
            for r in &rows {
                report_rows.push(ChainReportRow {
                    n: r.n,
                    xi_n: randset::chain_power_parameter(a, r.n)?,
                    deviation: r.deviation,
                });
            }
            io::to_json_string(&ChainReport {
                schema: "randset.report.stability-t3.v1",
                a,
                max_deviation,
                rows: report_rows,
            })
        }
        Format::Csv => stability_csv(
            &rows
                .iter()
                .map(|r| StabilityCsvRow {
                    n: r.n,
                    kappa_n: None,
                    lambda_n: None,
                    sup_error: r.deviation,
                })
                .collect::<Vec<_>>(),
        ),
    })
}

fn render_test(result: &TestResult, schema: &'static str, format: Format) -> String {
    match format {
        Format::Json => io::to_json_string(&TestReport::new(schema, result)),
        Format::Csv => replicates_csv(result),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn test_sets(
    space_path: &Path,
    a_path: &Path,
    b_path: &Path,
    n_permutations: usize,
    seed: u64,
    exact: bool,
    format: Format,
) -> Result<String, CliError> {
    let space = load_space(space_path)?;
    let a = io::parse_sample(&read(a_path)?, space.len())?;
    let b = io::parse_sample(&read(b_path)?, space.len())?;
    let result = if exact {
        permutation_test_exact(&space, &a, &b)?
    } else {
        permutation_test(&space, &a, &b, n_permutations, seed)?
    };
    Ok(render_test(&result, "randset.report.test-sets.v1", format))
}

#[allow(clippy::too_many_arguments)]
pub fn test_vectors(
    a_path: &Path,
    b_path: &Path,
    r: f64,
    n_permutations: usize,
    seed: u64,
    exact: bool,
    format: Format,
) -> Result<String, CliError> {
    let a = io::parse_vectors(&read(a_path)?)?;
    let b = io::parse_vectors(&read(b_path)?)?;
    let result = if exact {
        vector_permutation_test_exact(&a, &b, r)?
    } else {
        vector_permutation_test_r(&a, &b, r, n_permutations, seed)?
    };
    Ok(render_test(
        &result,
        "randset.report.test-vectors.v1",
        format,
    ))
}

pub fn test_discretize(
    space_path: &Path,
    sample_path: &Path,
    partition_path: &Path,
    measure: bool,
    format: Format,
) -> Result<String, CliError> {
    let space = load_space(space_path)?;
    let sample = io::parse_sample(&read(sample_path)?, space.len())?;
    let partition = io::parse_partition(&read(partition_path)?, space.len())?;
    let (semantics, vectors, means) = if measure {
        let vectors = discretize_measure(&space, &partition, &sample)?;
        let means = cell_means_values(&vectors)?;
        ("measure-fraction", vectors, means)
    } else {
        let binary = discretize(&partition, &sample)?;
        let means = cell_means(&binary)?;
        let vectors = binary.iter().map(|v| v.as_reals()).collect();
        ("nonempty-intersection", vectors, means)
    };
    Ok(match format {
        Format::Json => io::to_json_string(&DiscretizeReport {
            schema: "randset.report.discretize.v1",
            cells: partition.len(),
            semantics,
            vectors,
            cell_means: means,
        }),
        Format::Csv => vectors_csv(&vectors),
    })
}

fn render_simulation(
    report: &randset::SimulationReport,
    kind: &'static str,
    format: Format,
) -> String {
    let body = SimulationCliReport {
        schema: "randset.report.simulate.v1",
        kind,
        trials: report.trials,
        rejections: report.rejections,
        rejection_rate: report.rejection_rate,
        alpha: report.alpha,
        sample_size: report.sample_size,
        n_permutations: report.n_permutations,
        seed: report.seed,
    };
    match format {
        Format::Json => io::to_json_string(&body),
        Format::Csv => simulation_csv(&body),
    }
}

pub fn simulate_level(
    space_path: &Path,
    input: &Path,
    cfg: SimulationConfig,
    format: Format,
) -> Result<String, CliError> {
    let space = load_space(space_path)?;
    let d = io::parse_distribution(&read(input)?, space.len())?;
    let report = randset::simulate_level(&space, &d, &cfg)?;
    Ok(render_simulation(&report, "level", format))
}

pub fn simulate_power(
    space_path: &Path,
    a_path: &Path,
    b_path: &Path,
    cfg: SimulationConfig,
    format: Format,
) -> Result<String, CliError> {
    let space = load_space(space_path)?;
    let d_a = io::parse_distribution(&read(a_path)?, space.len())?;
    let d_b = io::parse_distribution(&read(b_path)?, space.len())?;
    let report = randset::simulate_power(&space, &d_a, &d_b, &cfg)?;
    Ok(render_simulation(&report, "power", format))
}
