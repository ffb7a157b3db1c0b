//! Finite weighted ground spaces and their set algebra.
//!
//! A [`MeasureSpace`] is a list of finite, strictly positive point masses
//! `m({x_i}) = w_i`; a [`FiniteSet`] is a subset of the points stored as an
//! indicator bit vector. Two kernels drive everything downstream: the
//! symmetric-difference kernel `L(A, B) = mu(A Δ B)`, which is negative
//! definite on zero-sum coefficient vectors, and the overlap kernel
//! `K(A, B) = mu(A ∩ B)`, which is the inner product of the indicator
//! embedding `A ↦ 1_A` in L2(m).

use crate::error::{Error, Result};
use crate::EXACT_TOL;

/// Subset of a finite ground space, stored as indicator bits.
///
/// Points are labeled `1..=M`; bit `i` is membership of point `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSet {
    bits: Vec<bool>,
}

impl FiniteSet {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn empty(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn full(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    /// Build from 1-based point labels; labels may repeat.
    pub fn from_indices(len: usize, points: &[usize]) -> Result<Self> {
        let mut bits = vec![false; len];
        for &p in points {
            if p == 0 || p > len {
                return Err(Error::InvalidParameter(format!(
                    "point label {p} outside 1..={len}"
                )));
            }
            bits[p - 1] = true;
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Membership of the 1-based point label.
    pub fn contains(&self, point: usize) -> bool {
        point >= 1 && point <= self.bits.len() && self.bits[point - 1]
    }

    /// 1-based labels of the member points, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i + 1))
            .collect()
    }

    pub fn cardinality(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Indicator string with point 1 leftmost, e.g. `"0110"`.
    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    fn conform(&self, other: &FiniteSet) -> Result<()> {
        if self.bits.len() == other.bits.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.bits.len(),
                actual: other.bits.len(),
            })
        }
    }

    fn zip_with(&self, other: &FiniteSet, f: impl Fn(bool, bool) -> bool) -> Result<FiniteSet> {
        self.conform(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(FiniteSet { bits })
    }

    pub fn intersect(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn sym_diff(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> FiniteSet {
        FiniteSet {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &FiniteSet) -> Result<bool> {
        self.conform(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| !(a && b)))
    }

    pub fn is_subset(&self, other: &FiniteSet) -> Result<bool> {
        self.conform(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b))
    }
}

impl std::fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.bit_string())
    }
}

/// Finite ground space with strictly positive point masses.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    weights: Vec<f64>,
    total_mass: f64,
}

impl MeasureSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    index: i + 1,
                    weight: w,
                });
            }
        }
        let total_mass = weights.iter().sum();
        Ok(Self {
            weights,
            total_mass,
        })
    }

    /// Uniform probability space on `points` points.
    pub fn uniform_probability(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::EmptySpace);
        }
        Self::new(vec![1.0 / points as f64; points])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn empty_set(&self) -> FiniteSet {
        FiniteSet::empty(self.len())
    }

    pub fn full_set(&self) -> FiniteSet {
        FiniteSet::full(self.len())
    }

    fn conform(&self, a: &FiniteSet) -> Result<()> {
        if a.len() == self.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: a.len(),
            })
        }
    }

    /// Measure of the set: `mu(A) = Σ_{x ∈ A} w_x`.
    pub fn mu(&self, a: &FiniteSet) -> Result<f64> {
        self.conform(a)?;
        Ok(self
            .weights
            .iter()
            .zip(a.bits())
            .filter(|(_, &b)| b)
            .map(|(&w, _)| w)
            .sum())
    }

    /// Squared norm of the indicator embedding: `||A||^2 = K(A, A) = mu(A)`.
    pub fn set_norm(&self, a: &FiniteSet) -> Result<f64> {
        self.mu(a)
    }

    /// Symmetric-difference kernel `L(A, B) = mu(A Δ B)`.
    pub fn kernel_l(&self, a: &FiniteSet, b: &FiniteSet) -> Result<f64> {
        self.mu(&a.sym_diff(b)?)
    }

    /// Overlap kernel `K(A, B) = mu(A ∩ B)`.
    pub fn kernel_k(&self, a: &FiniteSet, b: &FiniteSet) -> Result<f64> {
        self.mu(&a.intersect(b)?)
    }

    /// The overlap kernel rebuilt from `L` alone by polarizing at the empty
    /// set: `K(A, B) = (L(A, ∅) + L(∅, B) - L(A, B)) / 2`.
    ///
    /// Since `L(A, ∅) = mu(A)`, expanding `L(A, B) = mu(A) + mu(B) -
    /// 2 mu(A ∩ B)` shows this equals `mu(A ∩ B)` exactly. The empty set is
    /// the only base point for which that holds; polarizing at the full set
    /// instead would produce `mu(Aᶜ ∩ Bᶜ)`.
    pub fn kernel_k_via_l(&self, a: &FiniteSet, b: &FiniteSet) -> Result<f64> {
        let base = self.empty_set();
        Ok(0.5 * (self.kernel_l(a, &base)? + self.kernel_l(&base, b)? - self.kernel_l(a, b)?))
    }

    /// Metric `d(A, B) = L(A, B)^min(1, 1/alpha)`.
    ///
    /// The integral `∫ |1_A - 1_B|^alpha dm` does not depend on `alpha`, so a
    /// single exponent rule covers the whole family.
    pub fn dist(&self, a: &FiniteSet, b: &FiniteSet, alpha: f64) -> Result<f64> {
        if alpha <= 0.0 || alpha.is_nan() {
            return Err(Error::InvalidAlpha(alpha));
        }
        let exponent = 1.0_f64.min(1.0 / alpha);
        Ok(self.kernel_l(a, b)?.powf(exponent))
    }

    /// Cosine of the angle between the indicator embeddings:
    /// `mu(A ∩ B) / sqrt(mu(A) mu(B))`, in `[0, 1]`.
    pub fn cos_angle(&self, a: &FiniteSet, b: &FiniteSet) -> Result<f64> {
        let ma = self.mu(a)?;
        let mb = self.mu(b)?;
        if ma <= 0.0 || mb <= 0.0 {
            return Err(Error::ZeroMeasureSet);
        }
        Ok(self.kernel_k(a, b)? / (ma * mb).sqrt())
    }

    /// Quadratic form `Σ_ij L(A_i, A_j) c_i c_j` over zero-sum coefficients,
    /// together with its closed form `-2 ∫ (Σ_k c_k 1_{A_k})^2 dm`.
    pub fn quadratic_form_l(
        &self,
        sets: &[FiniteSet],
        coeffs: &[f64],
    ) -> Result<QuadraticFormWitness> {
        if sets.is_empty() {
            return Err(Error::InvalidParameter("need at least one set".into()));
        }
        if sets.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: sets.len(),
                actual: coeffs.len(),
            });
        }
        for s in sets {
            self.conform(s)?;
        }
        let total: f64 = coeffs.iter().sum();
        if total.abs() > EXACT_TOL {
            return Err(Error::CoefficientsNotZeroSum(total));
        }
        let mut value = 0.0;
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                value += self.kernel_l(a, b)? * coeffs[i] * coeffs[j];
            }
        }
        let mut integral = 0.0;
        for (x, &w) in self.weights.iter().enumerate() {
            let s: f64 = sets
                .iter()
                .zip(coeffs)
                .filter(|(set, _)| set.bits()[x])
                .map(|(_, &c)| c)
                .sum();
            integral += w * s * s;
        }
        Ok(QuadraticFormWitness {
            sets: sets.to_vec(),
            coeffs: coeffs.to_vec(),
            value,
            integral_value: -2.0 * integral,
        })
    }

    /// True when the sets are pairwise disjoint.
    pub fn is_orthogonal_system(&self, sets: &[FiniteSet]) -> Result<bool> {
        if sets.is_empty() {
            return Err(Error::InvalidParameter("system must be nonempty".into()));
        }
        for s in sets {
            self.conform(s)?;
        }
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if !a.is_disjoint(b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// True when the sets are pairwise disjoint and their union is the whole
    /// space.
    pub fn is_complete_system(&self, sets: &[FiniteSet]) -> Result<bool> {
        if !self.is_orthogonal_system(sets)? {
            return Ok(false);
        }
        let mut union = self.empty_set();
        for s in sets {
            union = union.union(s)?;
        }
        Ok(union == self.full_set())
    }

    /// Best L2(m) approximation of `1_A` by `Σ_j a_j 1_{A_j}` over a pairwise
    /// disjoint system: `a_j* = mu(A ∩ A_j) / mu(A_j)`.
    ///
    /// The system need not be complete; `coefficient_sum` reports `Σ_j a_j*`
    /// so a caller can complete the weights with an empty-set atom.
    pub fn project(&self, a: &FiniteSet, system: &[FiniteSet]) -> Result<Projection> {
        self.conform(a)?;
        for s in system {
            self.conform(s)?;
        }
        for (i, s) in system.iter().enumerate() {
            for t in &system[i + 1..] {
                if !s.is_disjoint(t)? {
                    return Err(Error::NotDisjointSystem);
                }
            }
        }
        let mut coefficients = Vec::with_capacity(system.len());
        for s in system {
            let mass = self.mu(s)?;
            if mass <= 0.0 {
                return Err(Error::ZeroMeasureSet);
            }
            coefficients.push(self.kernel_k(a, s)? / mass);
        }
        let mut residual = 0.0;
        for (x, &w) in self.weights.iter().enumerate() {
            let approx: f64 = system
                .iter()
                .zip(&coefficients)
                .filter(|(s, _)| s.bits()[x])
                .map(|(_, &c)| c)
                .sum();
            let diff = (a.bits()[x] as u8 as f64) - approx;
            residual += w * diff * diff;
        }
        Ok(Projection {
            coefficient_sum: coefficients.iter().sum(),
            coefficients,
            residual,
        })
    }
}

/// Zero-sum quadratic form in the symmetric-difference kernel, evaluated both
/// as a double sum and in closed form.
#[derive(Debug, Clone)]
pub struct QuadraticFormWitness {
    pub sets: Vec<FiniteSet>,
    pub coeffs: Vec<f64>,
    /// `Σ_ij L(A_i, A_j) c_i c_j`.
    pub value: f64,
    /// `-2 ∫ (Σ_k c_k 1_{A_k})^2 dm`; always equals `value` up to rounding.
    pub integral_value: f64,
}

/// Result of projecting a set onto a disjoint indicator system.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub coefficients: Vec<f64>,
    /// `∫ (1_A - Σ_j a_j* 1_{A_j})^2 dm`.
    pub residual: f64,
    pub coefficient_sum: f64,
}
