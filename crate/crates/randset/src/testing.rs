//! Two-sample permutation tests for set-valued and vector-valued samples.
//!
//! The test statistic is the empirical squared N-distance
//! `(2/n^2) ΣΣ d(a_i, b_j) - (1/n^2) ΣΣ d(a_i, a_j) - (1/n^2) ΣΣ d(b_i, b_j)`
//! with `d = mu(· Δ ·)` for sets and `d = ||· - ·||^r` for vectors. The null
//! distribution comes from uniform random re-splits of the pooled sample;
//! replicate `b` draws from substream `b` of the seed, so replicates are
//! independent and order-insensitive. P-values use the add-one rule
//! `(1 + #{replicates >= observed}) / (n_permutations + 1)`, and replicate
//! statistics are evaluated on index groups in sorted order so a re-split
//! that reproduces a previous grouping reproduces its statistic bit for bit.

use crate::error::{Error, Result};
use crate::random_set::DiscreteRandomSet;
use crate::rng;
use crate::space::{FiniteSet, MeasureSpace};
use crate::ENUMERATION_LIMIT;

/// Labeled list of observed sets, all over the same ground space.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSample {
    observations: Vec<FiniteSet>,
    label: String,
}

impl SetSample {
    pub fn new(observations: Vec<FiniteSet>, label: impl Into<String>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptySample);
        }
        let dim = observations[0].len();
        for obs in &observations {
            if obs.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: obs.len(),
                });
            }
        }
        Ok(Self {
            observations,
            label: label.into(),
        })
    }

    pub fn observations(&self) -> &[FiniteSet] {
        &self.observations
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.observations[0].len()
    }
}

/// Pairwise disjoint, covering family of nonempty cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellPartition {
    cells: Vec<FiniteSet>,
}

impl CellPartition {
    pub fn new(cells: Vec<FiniteSet>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidPartition("no cells".into()));
        }
        let dim = cells[0].len();
        for (l, c) in cells.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: c.len(),
                });
            }
            if c.cardinality() == 0 {
                return Err(Error::InvalidPartition(format!("cell {} is empty", l + 1)));
            }
        }
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                if !a.is_disjoint(b)? {
                    return Err(Error::InvalidPartition(
                        "cells are not pairwise disjoint".into(),
                    ));
                }
            }
        }
        let mut union = FiniteSet::empty(dim);
        for c in &cells {
            union = union.union(c)?;
        }
        if union != FiniteSet::full(dim) {
            return Err(Error::InvalidPartition(
                "cells do not cover the space".into(),
            ));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[FiniteSet] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.cells[0].len()
    }
}

/// Cell-nonemptiness pattern of one observed set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryObservationVector {
    bits: Vec<bool>,
}

impl BinaryObservationVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_reals(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| b as u8 as f64).collect()
    }
}

/// Outcome of a permutation test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub replicates: Vec<f64>,
    /// `(1 + #{replicates >= statistic}) / (len(replicates) + 1)`.
    pub p_value: f64,
    pub seed: u64,
    pub n_permutations: usize,
}

/// Flat symmetric matrix of pairwise distances over a pooled sample.
struct PooledMatrix {
    entries: Vec<f64>,
    dim: usize,
}

impl PooledMatrix {
    fn build<T>(pool: &[T], dist: impl Fn(&T, &T) -> Result<f64>) -> Result<Self> {
        let dim = pool.len();
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in (i + 1)..dim {
                let d = dist(&pool[i], &pool[j])?;
                entries[i * dim + j] = d;
                entries[j * dim + i] = d;
            }
        }
        Ok(Self { entries, dim })
    }

    /// Statistic of the split `(group_a, group_b)`; both groups must be in
    /// ascending index order for bitwise reproducibility.
    fn statistic(&self, group_a: &[usize], group_b: &[usize]) -> f64 {
        let n = group_a.len() as f64;
        let mut between = 0.0;
        for &i in group_a {
            for &j in group_b {
                between += self.entries[i * self.dim + j];
            }
        }
        let mut within_a = 0.0;
        for &i in group_a {
            for &j in group_a {
                within_a += self.entries[i * self.dim + j];
            }
        }
        let mut within_b = 0.0;
        for &i in group_b {
            for &j in group_b {
                within_b += self.entries[i * self.dim + j];
            }
        }
        (2.0 * between - within_a - within_b) / (n * n)
    }
}

fn monte_carlo_test(
    matrix: &PooledMatrix,
    n: usize,
    n_permutations: usize,
    seed: u64,
) -> TestResult {
    let group_a: Vec<usize> = (0..n).collect();
    let group_b: Vec<usize> = (n..2 * n).collect();
    let observed = matrix.statistic(&group_a, &group_b);
    let identity: Vec<usize> = (0..2 * n).collect();
    let mut replicates = Vec::with_capacity(n_permutations);
    for b in 1..=n_permutations {
        let mut gen = rng::substream(seed, b as u64);
        let mut indices = identity.clone();
        rng::shuffle(&mut gen, &mut indices);
        let (left, right) = indices.split_at(n);
        let mut left = left.to_vec();
        let mut right = right.to_vec();
        left.sort_unstable();
        right.sort_unstable();
        replicates.push(matrix.statistic(&left, &right));
    }
    let exceed = replicates.iter().filter(|&&r| r >= observed).count();
    TestResult {
        statistic: observed,
        p_value: (1 + exceed) as f64 / (n_permutations + 1) as f64,
        replicates,
        seed,
        n_permutations,
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    let mut result: u128 = 1;
    for i in 0..k.min(n - k) {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Advances to the next lexicographic `combo.len()`-combination of `0..m`.
fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let n = combo.len();
    let mut i = n;
    while i > 0 {
        i -= 1;
        if combo[i] < i + m - n {
            combo[i] += 1;
            for j in i + 1..n {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact test over all `C(2n, n)` splits. The identity split plays the role
/// of the add-one correction, so `p = #{splits >= observed} / C(2n, n)`.
fn enumerated_test(matrix: &PooledMatrix, n: usize, seed: u64) -> Result<TestResult> {
    let total = binomial(2 * n as u64, n as u64);
    if total > ENUMERATION_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "{total} splits exceed the enumeration limit of {ENUMERATION_LIMIT}; \
             use Monte-Carlo permutations"
        )));
    }
    let group_a: Vec<usize> = (0..n).collect();
    let group_b: Vec<usize> = (n..2 * n).collect();
    let observed = matrix.statistic(&group_a, &group_b);
    let mut replicates = Vec::with_capacity(total as usize - 1);
    let m = 2 * n;
    let mut combo: Vec<usize> = (0..n).collect();
    let mut in_combo = vec![false; m];
    loop {
        if combo != group_a {
            in_combo.fill(false);
            for &i in &combo {
                in_combo[i] = true;
            }
            let rest: Vec<usize> = (0..m).filter(|&i| !in_combo[i]).collect();
            replicates.push(matrix.statistic(&combo, &rest));
        }
        if !next_combination(&mut combo, m) {
            break;
        }
    }
    let exceed = replicates.iter().filter(|&&r| r >= observed).count();
    Ok(TestResult {
        statistic: observed,
        p_value: (1 + exceed) as f64 / total as f64,
        n_permutations: replicates.len(),
        replicates,
        seed,
    })
}

fn set_matrix(space: &MeasureSpace, a: &SetSample, b: &SetSample) -> Result<(PooledMatrix, usize)> {
    if a.len() != b.len() {
        return Err(Error::UnequalSampleSizes(a.len(), b.len()));
    }
    for obs in a.observations().iter().chain(b.observations()) {
        if obs.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                actual: obs.len(),
            });
        }
    }
    let pool: Vec<&FiniteSet> = a.observations().iter().chain(b.observations()).collect();
    let matrix = PooledMatrix::build(&pool, |x, y| space.kernel_l(x, y))?;
    Ok((matrix, a.len()))
}

/// Empirical squared N-distance between two equally sized set samples.
pub fn empirical_n_statistic(space: &MeasureSpace, a: &SetSample, b: &SetSample) -> Result<f64> {
    let (matrix, n) = set_matrix(space, a, b)?;
    let group_a: Vec<usize> = (0..n).collect();
    let group_b: Vec<usize> = (n..2 * n).collect();
    Ok(matrix.statistic(&group_a, &group_b))
}

/// Monte-Carlo permutation test on set samples.
pub fn permutation_test(
    space: &MeasureSpace,
    a: &SetSample,
    b: &SetSample,
    n_permutations: usize,
    seed: u64,
) -> Result<TestResult> {
    if n_permutations == 0 {
        return Err(Error::InvalidParameter(
            "need at least one permutation".into(),
        ));
    }
    let (matrix, n) = set_matrix(space, a, b)?;
    Ok(monte_carlo_test(&matrix, n, n_permutations, seed))
}

/// Exact permutation test on set samples, enumerating all splits;
/// available while `C(2n, n)` stays below [`ENUMERATION_LIMIT`].
pub fn permutation_test_exact(
    space: &MeasureSpace,
    a: &SetSample,
    b: &SetSample,
) -> Result<TestResult> {
    let (matrix, n) = set_matrix(space, a, b)?;
    enumerated_test(&matrix, n, 0)
}

fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn vector_matrix(a: &[Vec<f64>], b: &[Vec<f64>], r: f64) -> Result<(PooledMatrix, usize)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    if a.len() != b.len() {
        return Err(Error::UnequalSampleSizes(a.len(), b.len()));
    }
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::InvalidExponent(r));
    }
    let dim = a[0].len();
    for v in a.iter().chain(b) {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
    }
    let pool: Vec<&Vec<f64>> = a.iter().chain(b).collect();
    let matrix = PooledMatrix::build(&pool, |x, y| {
        let d = euclidean(x, y);
        Ok(if r == 1.0 { d } else { d.powf(r) })
    })?;
    Ok((matrix, a.len()))
}

/// Energy statistic between vector samples with the kernel `||x - y||^r`.
pub fn vector_n_statistic_r(a: &[Vec<f64>], b: &[Vec<f64>], r: f64) -> Result<f64> {
    let (matrix, n) = vector_matrix(a, b, r)?;
    let group_a: Vec<usize> = (0..n).collect();
    let group_b: Vec<usize> = (n..2 * n).collect();
    Ok(matrix.statistic(&group_a, &group_b))
}

/// Energy statistic with the plain Euclidean kernel (`r = 1`).
pub fn vector_n_statistic(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    vector_n_statistic_r(a, b, 1.0)
}

/// Monte-Carlo permutation test on vector samples with exponent `r`.
pub fn vector_permutation_test_r(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    r: f64,
    n_permutations: usize,
    seed: u64,
) -> Result<TestResult> {
    if n_permutations == 0 {
        return Err(Error::InvalidParameter(
            "need at least one permutation".into(),
        ));
    }
    let (matrix, n) = vector_matrix(a, b, r)?;
    Ok(monte_carlo_test(&matrix, n, n_permutations, seed))
}

/// Monte-Carlo permutation test on vector samples with `r = 1`.
pub fn vector_permutation_test(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    n_permutations: usize,
    seed: u64,
) -> Result<TestResult> {
    vector_permutation_test_r(a, b, 1.0, n_permutations, seed)
}

/// Exact permutation test on vector samples with exponent `r`.
pub fn vector_permutation_test_exact(a: &[Vec<f64>], b: &[Vec<f64>], r: f64) -> Result<TestResult> {
    let (matrix, n) = vector_matrix(a, b, r)?;
    enumerated_test(&matrix, n, 0)
}

/// Cell-nonemptiness discretization: bit `l` of observation `j` is set when
/// `A_j ∩ C_l` is nonempty.
pub fn discretize(
    partition: &CellPartition,
    sample: &SetSample,
) -> Result<Vec<BinaryObservationVector>> {
    if partition.dim() != sample.dim() {
        return Err(Error::DimensionMismatch {
            expected: partition.dim(),
            actual: sample.dim(),
        });
    }
    sample
        .observations()
        .iter()
        .map(|obs| {
            let bits = partition
                .cells()
                .iter()
                .map(|cell| Ok(!obs.is_disjoint(cell)?))
                .collect::<Result<Vec<bool>>>()?;
            Ok(BinaryObservationVector::new(bits))
        })
        .collect()
}

/// Measure-weighted discretization: entry `l` of observation `j` is
/// `mu(A_j ∩ C_l) / mu(C_l)`.
pub fn discretize_measure(
    space: &MeasureSpace,
    partition: &CellPartition,
    sample: &SetSample,
) -> Result<Vec<Vec<f64>>> {
    if partition.dim() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            actual: partition.dim(),
        });
    }
    if sample.dim() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            actual: sample.dim(),
        });
    }
    let cell_masses: Vec<f64> = partition
        .cells()
        .iter()
        .map(|c| space.mu(c))
        .collect::<Result<_>>()?;
    sample
        .observations()
        .iter()
        .map(|obs| {
            partition
                .cells()
                .iter()
                .zip(&cell_masses)
                .map(|(cell, &mass)| Ok(space.kernel_k(obs, cell)? / mass))
                .collect()
        })
        .collect()
}

/// Coordinatewise mean of binary observation vectors; estimates the cell
/// nonemptiness probabilities `P(A ∩ C_l ≠ ∅)`.
pub fn cell_means(vectors: &[BinaryObservationVector]) -> Result<Vec<f64>> {
    if vectors.is_empty() {
        return Err(Error::EmptySample);
    }
    let dim = vectors[0].len();
    let mut sums = vec![0.0; dim];
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
        for (s, &b) in sums.iter_mut().zip(v.bits()) {
            *s += b as u8 as f64;
        }
    }
    let n = vectors.len() as f64;
    Ok(sums.into_iter().map(|s| s / n).collect())
}

/// Coordinatewise mean of real observation vectors.
pub fn cell_means_values(vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    if vectors.is_empty() {
        return Err(Error::EmptySample);
    }
    let dim = vectors[0].len();
    let mut sums = vec![0.0; dim];
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
        for (s, &x) in sums.iter_mut().zip(v) {
            *s += x;
        }
    }
    let n = vectors.len() as f64;
    Ok(sums.into_iter().map(|s| s / n).collect())
}

/// Shared configuration for rejection-rate simulations.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub sample_size: usize,
    pub n_permutations: usize,
    pub trials: usize,
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub trials: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub alpha: f64,
    pub sample_size: usize,
    pub n_permutations: usize,
    pub seed: u64,
}

fn validate_config(cfg: &SimulationConfig) -> Result<()> {
    if cfg.sample_size == 0 || cfg.n_permutations == 0 || cfg.trials == 0 {
        return Err(Error::InvalidParameter(
            "sample size, permutation count, and trial count must be positive".into(),
        ));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly between 0 and 1, got {}",
            cfg.alpha
        )));
    }
    Ok(())
}

/// Rejection rate of the set permutation test when both samples come from
/// `d_a` vs `d_b`. Trial `t` uses the derived seeds `(3t, 3t+1, 3t+2)` of
/// the master seed for sample A, sample B, and the test.
pub fn simulate_power(
    space: &MeasureSpace,
    d_a: &DiscreteRandomSet,
    d_b: &DiscreteRandomSet,
    cfg: &SimulationConfig,
) -> Result<SimulationReport> {
    validate_config(cfg)?;
    let mut rejections = 0;
    for t in 0..cfg.trials {
        let t = t as u64;
        let sample_a = SetSample::new(
            d_a.sample(rng::derive_seed(cfg.seed, 3 * t), cfg.sample_size),
            "a",
        )?;
        let sample_b = SetSample::new(
            d_b.sample(rng::derive_seed(cfg.seed, 3 * t + 1), cfg.sample_size),
            "b",
        )?;
        let result = permutation_test(
            space,
            &sample_a,
            &sample_b,
            cfg.n_permutations,
            rng::derive_seed(cfg.seed, 3 * t + 2),
        )?;
        if result.p_value <= cfg.alpha {
            rejections += 1;
        }
    }
    Ok(SimulationReport {
        trials: cfg.trials,
        rejections,
        rejection_rate: rejections as f64 / cfg.trials as f64,
        alpha: cfg.alpha,
        sample_size: cfg.sample_size,
        n_permutations: cfg.n_permutations,
        seed: cfg.seed,
    })
}

/// Null rejection rate: both samples drawn from the same distribution.
pub fn simulate_level(
    space: &MeasureSpace,
    d: &DiscreteRandomSet,
    cfg: &SimulationConfig,
) -> Result<SimulationReport> {
    simulate_power(space, d, d, cfg)
}
