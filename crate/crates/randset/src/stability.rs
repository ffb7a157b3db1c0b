//! Stability of discrete random sets under pointwise powers of the mean
//! function, and the limit behaviour of those powers.
//!
//! The n-fold product of a random set with independent copies of itself has
//! mean function `f^n` (pointwise power). A random set is *stable* when
//! `f^n = kappa_n * f` for some constant, which happens exactly when `f`
//! takes at most one nonzero value `c`; then `kappa_n = c^(n-1)`.

use crate::error::{Error, Result};
use crate::random_set::{mean_function, DiscreteRandomSet, MeanFunction};
use crate::space::{FiniteSet, MeasureSpace};
use crate::EXACT_TOL;

/// Convention used for the reported proportionality constants. Some texts
/// define the constant inversely, as the renormalizer `c^(1-n)` applied to
/// `f^n`; the value reported here is always the computed one for
/// `f^n = kappa_n * f`.
pub const KAPPA_CONVENTION: &str =
    "kappa_n is the constant in f^n = kappa_n * f; for a single nonzero level c, \
     kappa_n = c^(n-1). The inverse normalizer c^(1-n) found elsewhere is 1/kappa_n.";

/// Pointwise power `f^n` of a mean function.
pub fn power_mean(f: &MeanFunction, n: u32) -> MeanFunction {
    MeanFunction::new(f.values().iter().map(|&v| v.powi(n as i32)).collect())
        .expect("powers of [0, 1] values stay in [0, 1]")
}

/// Largest pointwise deviation `max_x |f(x)^n - kappa * f(x)|`.
pub fn power_deviation(f: &MeanFunction, kappa: f64, n: u32) -> f64 {
    f.values()
        .iter()
        .map(|&v| (v.powi(n as i32) - kappa * v).abs())
        .fold(0.0, f64::max)
}

/// Outcome of the stability check.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub is_stable: bool,
    /// The single nonzero level `c` of the mean function, when one exists.
    /// `None` for the identically zero mean function, which is stable with
    /// any constant; `kappa` then reports 1.
    pub nonzero_value: Option<f64>,
    /// `kappa_n` for `n = 2..=n_max` when stable, empty otherwise.
    pub kappa: Vec<f64>,
}

/// Decide stability by clustering the positive values of the mean function
/// at tolerance `tol`, then cross-check `f^n = kappa_n * f` pointwise for
/// every `n` up to `n_max`.
pub fn check_stable(
    space: &MeasureSpace,
    d: &DiscreteRandomSet,
    n_max: u32,
    tol: f64,
) -> Result<StabilityReport> {
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let f = mean_function(space, d)?;
    let mut level: Option<f64> = None;
    let mut single = true;
    for &v in f.values() {
        if v > tol {
            match level {
                None => level = Some(v),
                Some(c) if (v - c).abs() <= tol => {}
                Some(_) => {
                    single = false;
                    break;
                }
            }
        }
    }
    if !single {
        return Ok(StabilityReport {
            is_stable: false,
            nonzero_value: None,
            kappa: Vec::new(),
        });
    }
    let mut kappa = Vec::with_capacity((n_max - 1) as usize);
    for n in 2..=n_max {
        let k = match level {
            Some(c) => c.powi(n as i32 - 1),
            None => 1.0,
        };
        if power_deviation(&f, k, n) > tol {
            return Ok(StabilityReport {
                is_stable: false,
                nonzero_value: None,
                kappa: Vec::new(),
            });
        }
        kappa.push(k);
    }
    Ok(StabilityReport {
        is_stable: true,
        nonzero_value: level,
        kappa,
    })
}

/// One row of a power-convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: u32,
    /// `sup_x |f(x)^n - 1_{A_1}(x)|`.
    pub sup_error: f64,
    /// Geometric envelope `(1 - p_1)^n`.
    pub bound: f64,
}

/// Convergence report for powers of a random set whose support has a common
/// intersection that is itself a support atom.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionConvergence {
    /// The limit set `A_1 = ∩_j A_j`.
    pub limit_set: FiniteSet,
    /// Probability of the limit set.
    pub p1: f64,
    pub rows: Vec<ConvergenceRow>,
}

/// Table of `sup |f^n - 1_{A_1}|` for `n = 1..=n_max`, where `A_1` is the
/// intersection of all support sets; requires `A_1` to be a support atom
/// with positive probability. The error never exceeds `(1 - p_1)^n`.
pub fn intersection_convergence(
    space: &MeasureSpace,
    d: &DiscreteRandomSet,
    n_max: u32,
) -> Result<IntersectionConvergence> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let f = mean_function(space, d)?;
    let mut limit = d.support()[0].clone();
    for s in &d.support()[1..] {
        limit = limit.intersect(s)?;
    }
    let p1 = d.prob_of(&limit).ok_or_else(|| {
        Error::PreconditionFailed(
            "the intersection of all support sets must itself be a support atom \
             with positive probability"
                .into(),
        )
    })?;
    let target = MeanFunction::indicator(&limit);
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let sup_error = power_mean(&f, n).max_abs_diff(&target)?;
        rows.push(ConvergenceRow {
            n,
            sup_error,
            bound: (1.0 - p1).powi(n as i32),
        });
    }
    Ok(IntersectionConvergence {
        limit_set: limit,
        p1,
        rows,
    })
}

/// Mixture decomposition `f_A = p1 * f_B + p2 * h` with `f_B * h = 0`
/// pointwise; `h` is a mean function supported off the support of `f_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub p1: f64,
    pub p2: f64,
    pub h: MeanFunction,
}

/// Recover the decomposition of `f_A` against a reference `f_B`: the ratio
/// `f_A / f_B` must be a single constant `p1` on the support of `f_B`, and
/// the remainder off that support is normalized so `max h = 1`.
pub fn derive_decomposition(f_a: &MeanFunction, f_b: &MeanFunction) -> Result<Decomposition> {
    if f_a.len() != f_b.len() {
        return Err(Error::DimensionMismatch {
            expected: f_a.len(),
            actual: f_b.len(),
        });
    }
    let mut p1: Option<f64> = None;
    for (&a, &b) in f_a.values().iter().zip(f_b.values()) {
        if b > 0.0 {
            let ratio = a / b;
            match p1 {
                None => p1 = Some(ratio),
                Some(r) if (ratio - r).abs() <= EXACT_TOL => {}
                Some(r) => {
                    return Err(Error::DecompositionInvalid(format!(
                        "f_A / f_B is not constant on the support of f_B ({ratio} vs {r})"
                    )))
                }
            }
        }
    }
    let p1 = p1.ok_or_else(|| {
        Error::DecompositionInvalid("f_B vanishes identically; no mixing weight p1".into())
    })?;
    if p1 <= 0.0 || p1.is_nan() {
        return Err(Error::DecompositionInvalid(format!(
            "mixing weight p1 = {p1} must be positive"
        )));
    }
    let rest: Vec<f64> = f_a
        .values()
        .iter()
        .zip(f_b.values())
        .map(|(&a, &b)| if b > 0.0 { 0.0 } else { a })
        .collect();
    let p2 = rest.iter().fold(0.0, |m: f64, &v| m.max(v));
    let h = if p2 > 0.0 {
        MeanFunction::new(rest.iter().map(|&v| v / p2).collect())?
    } else {
        MeanFunction::zeros(f_a.len())
    };
    Ok(Decomposition { p1, p2, h })
}

/// One row of the scaled-power convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledConvergenceRow {
    pub n: u32,
    /// `kappa_n` of the stable reference.
    pub kappa: f64,
    /// Normalizer `lambda_n = 1 / (kappa_n * p1^n)`, the unique scale making
    /// the stable part of `lambda_n * f_A^n` equal `f_B` exactly.
    pub lambda: f64,
    /// Directly computed `sup |lambda_n * f_A^n - f_B|`.
    pub error: f64,
    /// Closed form of the same error, `lambda_n * p2^n * max(h^n)`.
    pub h_term: f64,
}

/// Convergence of normalized powers `lambda_n * f_A^n` to the mean function
/// of a stable random set, for mixtures `f_A = p1 * f_B + p2 * h`.
///
/// Validates the decomposition, the stability of the reference, and that the
/// ratio `p2^n / (p1^n * kappa_n)` decays over the checked range, then
/// tabulates the error for `n = 1..=n_max`.
pub fn scaled_power_convergence(
    space: &MeasureSpace,
    d_a: &DiscreteRandomSet,
    d_b: &DiscreteRandomSet,
    decomp: &Decomposition,
    n_max: u32,
) -> Result<Vec<ScaledConvergenceRow>> {
    if n_max < 2 {
        return Err(Error::InvalidParameter("n_max must be at least 2".into()));
    }
    let f_a = mean_function(space, d_a)?;
    let f_b = mean_function(space, d_b)?;
    let Decomposition { p1, p2, ref h } = *decomp;
    if h.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            actual: h.len(),
        });
    }
    if p1 <= 0.0 || p1.is_nan() || p2 < 0.0 || p2.is_nan() {
        return Err(Error::DecompositionInvalid(format!(
            "need p1 > 0 and p2 >= 0, got p1 = {p1}, p2 = {p2}"
        )));
    }
    for ((&a, &b), &hv) in f_a.values().iter().zip(f_b.values()).zip(h.values()) {
        if (a - (p1 * b + p2 * hv)).abs() > EXACT_TOL {
            return Err(Error::DecompositionInvalid(
                "mean function of the first random set must equal p1*f_B + p2*h".into(),
            ));
        }
        if (b * hv).abs() > EXACT_TOL {
            return Err(Error::DecompositionInvalid(
                "h must vanish wherever f_B is positive".into(),
            ));
        }
    }
    let report = check_stable(space, d_b, n_max.max(2), crate::STABILITY_TOL)?;
    if !report.is_stable {
        return Err(Error::NotStable);
    }
    let kappa = |n: u32| match report.nonzero_value {
        Some(c) => c.powi(n as i32 - 1),
        None => 1.0,
    };
    if p2 > 0.0 {
        // the normalized remainder must die out: p2^n / (p1^n kappa_n) -> 0,
        // i.e. strictly decreasing over the checked range
        let ratio = |n: u32| (p2 / p1).powi(n as i32) / kappa(n);
        for n in 2..n_max {
            if ratio(n + 1) >= ratio(n) {
                return Err(Error::DecompositionInvalid(format!(
                    "p2^n / (p1^n kappa_n) does not decay (n = {n}: {} -> {})",
                    ratio(n),
                    ratio(n + 1)
                )));
            }
        }
    }
    let max_h = h.values().iter().fold(0.0, |m: f64, &v| m.max(v));
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let k = kappa(n);
        let lambda = 1.0 / (k * p1.powi(n as i32));
        let f_a_n = power_mean(&f_a, n);
        let error = f_a_n
            .values()
            .iter()
            .zip(f_b.values())
            .map(|(&an, &b)| (lambda * an - b).abs())
            .fold(0.0, f64::max);
        rows.push(ScaledConvergenceRow {
            n,
            kappa: k,
            lambda,
            error,
            h_term: lambda * p2.powi(n as i32) * max_h.powi(n as i32),
        });
    }
    Ok(rows)
}

/// Geometric chain over strictly nested sets `A_1 ⊊ A_2 ⊊ ... ⊊ A_J`:
/// `p_j = a (1-a)^(j-1)` for `j < J`, with the geometric tail absorbed into
/// the last atom, `p_J = (1-a)^(J-1)`. The mean function takes the value
/// `(1-a)^k` on the ring `A_{k+1} \ A_k` (with `A_0 = ∅`).
pub fn make_geometric_chain(
    space: &MeasureSpace,
    chain: &[FiniteSet],
    a: f64,
) -> Result<DiscreteRandomSet> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "chain parameter must lie strictly between 0 and 1, got {a}"
        )));
    }
    if chain.is_empty() {
        return Err(Error::InvalidParameter(
            "chain must contain at least one set".into(),
        ));
    }
    for s in chain {
        if s.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                actual: s.len(),
            });
        }
    }
    for (k, pair) in chain.windows(2).enumerate() {
        if !(pair[0].is_subset(&pair[1])? && pair[0] != pair[1]) {
            return Err(Error::NotNested(k + 1));
        }
    }
    let j_count = chain.len();
    let mut probs = Vec::with_capacity(j_count);
    for j in 1..j_count {
        probs.push(a * (1.0 - a).powi(j as i32 - 1));
    }
    probs.push((1.0 - a).powi(j_count as i32 - 1));
    DiscreteRandomSet::new(chain.to_vec(), probs)
}

/// Parameter of the n-th pointwise power of a geometric chain:
/// `a ↦ 1 - (1-a)^n`. Powers of chains stay chains with this new parameter.
pub fn chain_power_parameter(a: f64, n: u32) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "chain parameter must lie strictly between 0 and 1, got {a}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("power must be at least 1".into()));
    }
    Ok(1.0 - (1.0 - a).powi(n as i32))
}

/// Deviation of the chain-power identity at one power.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDeviationRow {
    pub n: u32,
    /// `max_x |f_a(x)^n - f_{1-(1-a)^n}(x)|`.
    pub deviation: f64,
}

/// Pointwise check that powers of a geometric chain are geometric chains:
/// compares `f_a^n` against the chain with parameter `1 - (1-a)^n` for every
/// `n = 1..=n_max`.
pub fn chain_power_deviations(
    space: &MeasureSpace,
    chain: &[FiniteSet],
    a: f64,
    n_max: u32,
) -> Result<Vec<ChainDeviationRow>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let base = make_geometric_chain(space, chain, a)?;
    let f = mean_function(space, &base)?;
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let lhs = power_mean(&f, n);
        let transformed = make_geometric_chain(space, chain, chain_power_parameter(a, n)?)?;
        let rhs = mean_function(space, &transformed)?;
        rows.push(ChainDeviationRow {
            n,
            deviation: lhs.max_abs_diff(&rhs)?,
        });
    }
    Ok(rows)
}

/// Largest deviation of the chain-power identity over `n = 1..=n_max`.
pub fn verify_geometric_chain(
    space: &MeasureSpace,
    chain: &[FiniteSet],
    a: f64,
    n_max: u32,
) -> Result<f64> {
    Ok(chain_power_deviations(space, chain, a, n_max)?
        .into_iter()
        .map(|row| row.deviation)
        .fold(0.0, f64::max))
}
