//! Discrete random sets, their mean functions, and N-distances.
//!
//! A [`DiscreteRandomSet`] is a finitely supported distribution over subsets
//! of a fixed ground space, held in canonical form. Its mean function
//! `f(x) = Σ_j p_j 1_{A_j}(x)` determines every distance and kernel here, so
//! distinct distributions with the same mean function are at N-distance zero:
//! the N-distances are metrics on mean functions and pseudometrics on
//! distributions.

use crate::error::{Error, Result};
use crate::rng;
use crate::space::{FiniteSet, MeasureSpace};
use crate::{EXACT_TOL, PROB_SUM_TOL};

/// Finitely supported distribution over subsets, in canonical form:
/// duplicate atoms merged, zero-probability atoms dropped, support sorted by
/// membership bits, probabilities renormalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRandomSet {
    support: Vec<FiniteSet>,
    probs: Vec<f64>,
}

impl DiscreteRandomSet {
    pub fn new(support: Vec<FiniteSet>, probs: Vec<f64>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                actual: probs.len(),
            });
        }
        if support.is_empty() {
            return Err(Error::InvalidParameter("support must be nonempty".into()));
        }
        let dim = support[0].len();
        for s in &support {
            if s.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: s.len(),
                });
            }
        }
        for (i, &p) in probs.iter().enumerate() {
            if p < 0.0 || p.is_nan() {
                return Err(Error::NegativeProbability { index: i, prob: p });
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::ProbabilitySumMismatch(total));
        }

        let mut atoms: Vec<(FiniteSet, f64)> = support.into_iter().zip(probs).collect();
        atoms.sort_by(|x, y| x.0.cmp(&y.0));
        let mut merged: Vec<(FiniteSet, f64)> = Vec::with_capacity(atoms.len());
        for (set, p) in atoms {
            match merged.last_mut() {
                Some((last, q)) if *last == set => *q += p,
                _ => merged.push((set, p)),
            }
        }
        let mut out_support = Vec::with_capacity(merged.len());
        let mut out_probs = Vec::with_capacity(merged.len());
        for (set, p) in merged {
            if p > 0.0 {
                out_support.push(set);
                out_probs.push(p / total);
            }
        }
        Ok(Self {
            support: out_support,
            probs: out_probs,
        })
    }

    /// Point mass at a single set.
    pub fn degenerate(set: FiniteSet) -> Self {
        Self {
            support: vec![set],
            probs: vec![1.0],
        }
    }

    pub fn support(&self) -> &[FiniteSet] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.support[0].len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&FiniteSet, f64)> {
        self.support.iter().zip(self.probs.iter().copied())
    }

    pub fn prob_of(&self, set: &FiniteSet) -> Option<f64> {
        self.support
            .iter()
            .position(|s| s == set)
            .map(|i| self.probs[i])
    }

    /// Condition on the set not taking the value `drop`: remove the atom and
    /// rescale the rest by `1 / (1 - p_drop)`.
    pub fn condition_nonvalue(&self, drop: &FiniteSet) -> Result<Self> {
        let pos = self
            .support
            .iter()
            .position(|s| s == drop)
            .ok_or(Error::NotInSupport)?;
        let kept = 1.0 - self.probs[pos];
        if kept <= 0.0 {
            return Err(Error::TotalMassRemoved);
        }
        let mut support = Vec::with_capacity(self.support.len() - 1);
        let mut probs = Vec::with_capacity(self.support.len() - 1);
        for (i, (s, &p)) in self.support.iter().zip(&self.probs).enumerate() {
            if i != pos {
                support.push(s.clone());
                probs.push(p / kept);
            }
        }
        Ok(Self { support, probs })
    }

    /// Draw `n` sets by inverse-CDF over the canonical support order, using
    /// the seeded generator from [`crate::rng`].
    pub fn sample(&self, seed: u64, n: usize) -> Vec<FiniteSet> {
        let mut gen = rng::rng_from_seed(seed);
        (0..n)
            .map(|_| {
                let u = rng::unit_f64(&mut gen);
                let mut acc = 0.0;
                for (set, p) in self.atoms() {
                    acc += p;
                    if u < acc {
                        return set.clone();
                    }
                }
                self.support.last().unwrap().clone()
            })
            .collect()
    }
}

/// Pointwise expectation of the random indicator, `f(x) = Σ_j p_j 1_{A_j}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFunction {
    values: Vec<f64>,
}

impl MeanFunction {
    /// Validates every entry lies in `[0, 1]` up to rounding tolerance.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !(-EXACT_TOL..=1.0 + EXACT_TOL).contains(&v) {
                return Err(Error::ValueOutOfRange {
                    index: i + 1,
                    value: v,
                });
            }
        }
        Ok(Self { values })
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values
            .iter()
            .all(|v| (-EXACT_TOL..=1.0 + EXACT_TOL).contains(v)));
        Self { values }
    }

    pub fn indicator(set: &FiniteSet) -> Self {
        Self {
            values: set.bits().iter().map(|&b| b as u8 as f64).collect(),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![0.0; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            values: vec![1.0; len],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Mean function of the complement random set, `1 - f`.
    pub fn complement(&self) -> Self {
        Self {
            values: self.values.iter().map(|&v| 1.0 - v).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &MeanFunction) -> Result<f64> {
        conform_means(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn conform_dist(space: &MeasureSpace, d: &DiscreteRandomSet) -> Result<()> {
    if d.dim() == space.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: space.len(),
            actual: d.dim(),
        })
    }
}

fn conform_mean(space: &MeasureSpace, f: &MeanFunction) -> Result<()> {
    if f.len() == space.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: space.len(),
            actual: f.len(),
        })
    }
}

fn conform_means(f: &MeanFunction, g: &MeanFunction) -> Result<()> {
    if f.len() == g.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: f.len(),
            actual: g.len(),
        })
    }
}

pub fn mean_function(space: &MeasureSpace, d: &DiscreteRandomSet) -> Result<MeanFunction> {
    conform_dist(space, d)?;
    let mut values = vec![0.0; space.len()];
    for (set, p) in d.atoms() {
        for (v, &b) in values.iter_mut().zip(set.bits()) {
            if b {
                *v += p;
            }
        }
    }
    Ok(MeanFunction::from_raw(values))
}

fn l_double_sum(
    space: &MeasureSpace,
    da: &DiscreteRandomSet,
    db: &DiscreteRandomSet,
) -> Result<f64> {
    let mut total = 0.0;
    for (a, p) in da.atoms() {
        for (b, q) in db.atoms() {
            total += space.kernel_l(a, b)? * p * q;
        }
    }
    Ok(total)
}

/// Energy combination of kernel expectations over independent copies:
/// `2 E L(A, B) - E L(A, A') - E L(B, B')`.
///
/// Expanding `L` pointwise shows this equals `2 ∫ (f - g)^2 dm` — twice the
/// squared N-distance. The factor is kept here because the two-sample
/// statistic is defined through exactly this combination.
pub fn energy_double_sum(
    space: &MeasureSpace,
    dm: &DiscreteRandomSet,
    dn: &DiscreteRandomSet,
) -> Result<f64> {
    conform_dist(space, dm)?;
    conform_dist(space, dn)?;
    Ok(2.0 * l_double_sum(space, dm, dn)?
        - l_double_sum(space, dm, dm)?
        - l_double_sum(space, dn, dn)?)
}

/// Squared N-distance computed from pairwise kernel expectations: half the
/// energy combination, which equals `∫ (f - g)^2 dm` exactly. For point
/// masses this reduces to `L(A, B)`.
pub fn n_distance_sq_from_pairs(
    space: &MeasureSpace,
    dm: &DiscreteRandomSet,
    dn: &DiscreteRandomSet,
) -> Result<f64> {
    Ok(0.5 * energy_double_sum(space, dm, dn)?)
}

/// Squared N-distance through mean functions: `∫ (f - g)^2 dm`.
pub fn n_distance_sq(space: &MeasureSpace, f: &MeanFunction, g: &MeanFunction) -> Result<f64> {
    conform_mean(space, f)?;
    conform_mean(space, g)?;
    Ok(space
        .weights()
        .iter()
        .zip(f.values().iter().zip(g.values()))
        .map(|(&w, (&a, &b))| w * (a - b) * (a - b))
        .sum())
}

/// N-distance of order `p >= 1`; pass `f64::INFINITY` for the sup distance.
pub fn n_distance_p(
    space: &MeasureSpace,
    f: &MeanFunction,
    g: &MeanFunction,
    p: f64,
) -> Result<f64> {
    conform_mean(space, f)?;
    conform_mean(space, g)?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidOrder(p));
    }
    if p.is_infinite() {
        return f.max_abs_diff(g);
    }
    let total: f64 = space
        .weights()
        .iter()
        .zip(f.values().iter().zip(g.values()))
        .map(|(&w, (&a, &b))| w * (a - b).abs().powf(p))
        .sum();
    Ok(total.powf(1.0 / p))
}

/// Positive definite kernel `∫ f g dm` on mean functions.
pub fn kernel_frak_k(space: &MeasureSpace, f: &MeanFunction, g: &MeanFunction) -> Result<f64> {
    conform_mean(space, f)?;
    conform_mean(space, g)?;
    Ok(space
        .weights()
        .iter()
        .zip(f.values().iter().zip(g.values()))
        .map(|(&w, (&a, &b))| w * a * b)
        .sum())
}

/// Dual kernel `∫ (1 - f)(1 - g) dm`, the overlap kernel of the complements.
pub fn kernel_star(space: &MeasureSpace, f: &MeanFunction, g: &MeanFunction) -> Result<f64> {
    conform_mean(space, f)?;
    conform_mean(space, g)?;
    Ok(space
        .weights()
        .iter()
        .zip(f.values().iter().zip(g.values()))
        .map(|(&w, (&a, &b))| w * (1.0 - a) * (1.0 - b))
        .sum())
}

/// Pointwise product `f ∘ g`; on indicators this is set intersection, and on
/// mean functions it is the mean of the independent intersection.
pub fn op_circ(f: &MeanFunction, g: &MeanFunction) -> Result<MeanFunction> {
    conform_means(f, g)?;
    Ok(MeanFunction::from_raw(
        f.values()
            .iter()
            .zip(g.values())
            .map(|(&a, &b)| a * b)
            .collect(),
    ))
}

/// Dual product `f * g = (1 - f)(1 - g)`; on indicators this is the
/// complement of set union.
pub fn op_star(f: &MeanFunction, g: &MeanFunction) -> Result<MeanFunction> {
    conform_means(f, g)?;
    Ok(MeanFunction::from_raw(
        f.values()
            .iter()
            .zip(g.values())
            .map(|(&a, &b)| (1.0 - a) * (1.0 - b))
            .collect(),
    ))
}

/// Distribution of `A ∩ B` for independent `A ~ dm`, `B ~ dn`: every pairwise
/// intersection with product probability, canonicalized.
pub fn intersect_independent(
    space: &MeasureSpace,
    dm: &DiscreteRandomSet,
    dn: &DiscreteRandomSet,
) -> Result<DiscreteRandomSet> {
    conform_dist(space, dm)?;
    conform_dist(space, dn)?;
    let mut support = Vec::with_capacity(dm.support().len() * dn.support().len());
    let mut probs = Vec::with_capacity(support.capacity());
    for (a, p) in dm.atoms() {
        for (b, q) in dn.atoms() {
            support.push(a.intersect(b)?);
            probs.push(p * q);
        }
    }
    DiscreteRandomSet::new(support, probs)
}
