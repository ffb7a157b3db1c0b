#![allow(dead_code)]

use proptest::prelude::*;
use randset::{DiscreteRandomSet, FiniteSet, MeasureSpace};

/// Point weights kept well away from zero so 1e-12 identity checks have
/// floating-point headroom.
pub fn weights(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..2.0, m)
}

pub fn space(m: usize) -> impl Strategy<Value = MeasureSpace> {
    weights(m).prop_map(|w| MeasureSpace::new(w).unwrap())
}

pub fn set(m: usize) -> impl Strategy<Value = FiniteSet> {
    prop::collection::vec(any::<bool>(), m).prop_map(FiniteSet::from_bits)
}

pub fn sets(
    m: usize,
    count: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<FiniteSet>> {
    prop::collection::vec(set(m), count)
}

/// Random finitely supported distribution; raw masses are normalized, so
/// canonicalization sees probabilities summing to one up to round-off.
pub fn distribution(m: usize, max_support: usize) -> impl Strategy<Value = DiscreteRandomSet> {
    prop::collection::vec((set(m), 0.05f64..1.0), 1..=max_support).prop_map(|atoms| {
        let (support, raw): (Vec<_>, Vec<f64>) = atoms.into_iter().unzip();
        let total: f64 = raw.iter().sum();
        let probs = raw.iter().map(|&p| p / total).collect();
        DiscreteRandomSet::new(support, probs).unwrap()
    })
}

/// Coefficients centered to sum to zero (up to round-off well inside 1e-12).
pub fn zero_sum_coeffs(count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.5f64..0.5, count).prop_map(|mut c| {
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        for v in &mut c {
            *v -= mean;
        }
        c
    })
}

/// Pairwise disjoint nonempty cells built from a random point labeling;
/// label 0 leaves the point uncovered, so systems need not be complete.
pub fn disjoint_system(m: usize, max_cells: usize) -> impl Strategy<Value = Vec<FiniteSet>> {
    prop::collection::vec(0..=max_cells, m).prop_map(move |labels| {
        (1..=max_cells)
            .filter_map(|cell| {
                let bits: Vec<bool> = labels.iter().map(|&l| l == cell).collect();
                bits.iter().any(|&b| b).then(|| FiniteSet::from_bits(bits))
            })
            .collect()
    })
}

/// Like [`disjoint_system`], but every point is covered, so the cells form
/// a partition of the space.
pub fn complete_system(m: usize, max_cells: usize) -> impl Strategy<Value = Vec<FiniteSet>> {
    prop::collection::vec(1..=max_cells, m).prop_map(move |labels| {
        (1..=max_cells)
            .filter_map(|cell| {
                let bits: Vec<bool> = labels.iter().map(|&l| l == cell).collect();
                bits.iter().any(|&b| b).then(|| FiniteSet::from_bits(bits))
            })
            .collect()
    })
}

/// Strictly nested chain: prefixes of a random point order at random cuts.
pub fn nested_chain(m: usize, max_len: usize) -> impl Strategy<Value = Vec<FiniteSet>> {
    (
        Just((0..m).collect::<Vec<usize>>()).prop_shuffle(),
        prop::collection::btree_set(1..=m, 1..=max_len.min(m)),
    )
        .prop_map(move |(order, cuts)| {
            cuts.into_iter()
                .map(|cut| {
                    let mut bits = vec![false; m];
                    for &point in &order[..cut] {
                        bits[point] = true;
                    }
                    FiniteSet::from_bits(bits)
                })
                .collect()
        })
}
