//! Serializable report bodies emitted by the CLI, plus the CSV renderers for
//! the tabular ones.
//!
//! Every JSON report carries a versioned `schema` tag and uses a fixed field
//! order, so a command run twice with the same inputs and seed produces
//! byte-identical output.

use serde::Serialize;

use randset::TestResult;

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

/// Structured failure object printed to stderr on any error.
#[derive(Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct SpaceReport {
    pub schema: &'static str,
    pub points: usize,
    pub total_mass: f64,
    pub weights: Vec<f64>,
}

#[derive(Serialize)]
pub struct SetDistanceReport {
    pub schema: &'static str,
    pub alpha: f64,
    pub kernel_l: f64,
    pub dist: f64,
    pub kernel_k: f64,
    pub kernel_k_via_l: f64,
    /// `None` when either set has measure zero and no angle is defined.
    pub cos_angle: Option<f64>,
    pub norm_a: f64,
    pub norm_b: f64,
}

#[derive(Serialize)]
pub struct DistDistanceReport {
    pub schema: &'static str,
    /// `∫ (f - g)^2 dm` computed from the mean functions.
    pub n2_sq_from_means: f64,
    /// Half the raw energy combination of pairwise kernel expectations;
    /// equals `n2_sq_from_means` up to rounding.
    pub n2_sq_from_pairs: f64,
    /// The raw combination `2 E L(A,B) - E L(A,A') - E L(B,B')`, which is
    /// twice the squared distance.
    pub energy_double_sum: f64,
    pub n2: f64,
    pub p: f64,
    pub n_p: f64,
    pub n_sup: f64,
}

#[derive(Serialize)]
pub struct ProjectReport {
    pub schema: &'static str,
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub coefficient_sum: f64,
    pub complete: bool,
}

#[derive(Serialize)]
pub struct StabilityCheckRow {
    pub n: u32,
    pub kappa_n: f64,
    /// `max_x |f(x)^n - kappa_n f(x)|` for the reported constant.
    pub deviation: f64,
}

#[derive(Serialize)]
pub struct StabilityCheckReport {
    pub schema: &'static str,
    pub is_stable: bool,
    pub nonzero_value: Option<f64>,
    pub rows: Vec<StabilityCheckRow>,
    /// Statement of which of the two circulating conventions the reported
    /// constants follow.
    pub kappa_convention: &'static str,
}

#[derive(Serialize)]
pub struct ConvergenceReportRow {
    pub n: u32,
    pub sup_error: f64,
    pub bound: f64,
}

#[derive(Serialize)]
pub struct IntersectionReport {
    pub schema: &'static str,
    /// Bit string of the common intersection of the support.
    pub limit_set: String,
    pub p1: f64,
    pub rows: Vec<ConvergenceReportRow>,
}

#[derive(Serialize)]
pub struct ScaledReportRow {
    pub n: u32,
    pub kappa_n: f64,
    pub lambda_n: f64,
    pub error: f64,
    pub h_term: f64,
}

#[derive(Serialize)]
pub struct ScaledReport {
    pub schema: &'static str,
    pub p1: f64,
    pub p2: f64,
    pub rows: Vec<ScaledReportRow>,
    pub kappa_convention: &'static str,
}

#[derive(Serialize)]
pub struct ChainReportRow {
    pub n: u32,
    /// Transformed chain parameter `1 - (1-a)^n`.
    pub xi_n: f64,
    pub deviation: f64,
}

#[derive(Serialize)]
pub struct ChainReport {
    pub schema: &'static str,
    pub a: f64,
    pub max_deviation: f64,
    pub rows: Vec<ChainReportRow>,
}

#[derive(Serialize)]
pub struct ReplicatesSummary {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

#[derive(Serialize)]
pub struct TestReport {
    pub schema: &'static str,
    pub statistic: f64,
    pub p_value: f64,
    pub n_permutations: usize,
    pub seed: u64,
    pub replicates_summary: ReplicatesSummary,
}

impl TestReport {
    pub fn new(schema: &'static str, result: &TestResult) -> Self {
        Self {
            schema,
            statistic: result.statistic,
            p_value: result.p_value,
            n_permutations: result.n_permutations,
            seed: result.seed,
            replicates_summary: summarize(&result.replicates),
        }
    }
}

#[derive(Serialize)]
pub struct DiscretizeReport {
    pub schema: &'static str,
    pub cells: usize,
    /// "nonempty-intersection" bits or "measure-fraction" reals.
    pub semantics: &'static str,
    pub vectors: Vec<Vec<f64>>,
    pub cell_means: Vec<f64>,
}

#[derive(Serialize)]
pub struct SimulationCliReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub trials: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub alpha: f64,
    pub sample_size: usize,
    pub n_permutations: usize,
    pub seed: u64,
}

/// Five-number summary of the permutation replicates (linear-interpolation
/// quantiles on the sorted values).
pub fn summarize(replicates: &[f64]) -> ReplicatesSummary {
    let mut sorted = replicates.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    ReplicatesSummary {
        min: sorted[0],
        q25: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q75: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Shared CSV table for the stability family: one row per power `n`, with
/// blanks in the columns a given analysis does not produce.
pub struct StabilityCsvRow {
    pub n: u32,
    pub kappa_n: Option<f64>,
    pub lambda_n: Option<f64>,
    pub sup_error: f64,
}

pub fn stability_csv(rows: &[StabilityCsvRow]) -> String {
    let mut out = String::from("n,kappa_n,lambda_n,sup_error\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            opt_cell(row.kappa_n),
            opt_cell(row.lambda_n),
            row.sup_error,
        ));
    }
    out
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Full replicate list, one indexed row per permutation.
pub fn replicates_csv(result: &TestResult) -> String {
    let mut out = String::from("replicate,statistic\n");
    for (i, value) in result.replicates.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, value));
    }
    out
}

/// Discretized observation vectors, one row per observation.
pub fn vectors_csv(vectors: &[Vec<f64>]) -> String {
    let cells = vectors.first().map_or(0, Vec::len);
    let mut out = String::from("observation");
    for l in 1..=cells {
        out.push_str(&format!(",cell_{l}"));
    }
    out.push('\n');
    for (j, v) in vectors.iter().enumerate() {
        out.push_str(&(j + 1).to_string());
        for value in v {
            out.push_str(&format!(",{value}"));
        }
        out.push('\n');
    }
    out
}

pub fn simulation_csv(report: &SimulationCliReport) -> String {
    format!(
        "kind,trials,rejections,rejection_rate,alpha,sample_size,n_permutations,seed\n{},{},{},{},{},{},{},{}\n",
        report.kind,
        report.trials,
        report.rejections,
        report.rejection_rate,
        report.alpha,
        report.sample_size,
        report.n_permutations,
        report.seed,
    )
}
