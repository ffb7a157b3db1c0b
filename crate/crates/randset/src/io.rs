//! JSON file formats for spaces, sets, distributions, and samples.
//!
//! Every file carries an optional `schema` field naming its format version;
//! when present it must match the expected constant. Sets may be written
//! either as `{"bits": "0110"}` (point 1 leftmost) or as
//! `{"indices": [2, 3]}` with 1-based point labels; emitters always produce
//! the bits form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random_set::{DiscreteRandomSet, MeanFunction};
use crate::space::{FiniteSet, MeasureSpace};
use crate::testing::{CellPartition, SetSample};

pub const SPACE_SCHEMA: &str = "randset.space.v1";
pub const SET_SCHEMA: &str = "randset.set.v1";
pub const DISTRIBUTION_SCHEMA: &str = "randset.distribution.v1";
pub const SAMPLE_SCHEMA: &str = "randset.sample.v1";
pub const SYSTEM_SCHEMA: &str = "randset.system.v1";
pub const PARTITION_SCHEMA: &str = "randset.partition.v1";
pub const VECTORS_SCHEMA: &str = "randset.vectors.v1";
pub const MEAN_SCHEMA: &str = "randset.mean.v1";

/// One set in either accepted notation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetForm {
    Bits { bits: String },
    Indices { indices: Vec<usize> },
}

impl SetForm {
    pub fn from_set(set: &FiniteSet) -> Self {
        SetForm::Bits {
            bits: set.bit_string(),
        }
    }

    pub fn to_set(&self, dim: usize) -> Result<FiniteSet> {
        match self {
            SetForm::Bits { bits } => {
                let bits = bits
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::Parse(format!(
                            "set bits may only contain 0 and 1, found {other:?}"
                        ))),
                    })
                    .collect::<Result<Vec<bool>>>()?;
                if bits.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: bits.len(),
                    });
                }
                Ok(FiniteSet::from_bits(bits))
            }
            SetForm::Indices { indices } => FiniteSet::from_indices(dim, indices),
        }
    }
}

fn check_schema(found: &Option<String>, expected: &str) -> Result<()> {
    match found {
        Some(s) if s != expected => Err(Error::Parse(format!(
            "expected schema {expected:?}, found {s:?}"
        ))),
        _ => Ok(()),
    }
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Serializes a report or file struct as pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable report");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub weights: Vec<f64>,
}

impl SpaceFile {
    pub fn from_space(space: &MeasureSpace) -> Self {
        Self {
            schema: Some(SPACE_SCHEMA.to_string()),
            weights: space.weights().to_vec(),
        }
    }
}

pub fn parse_space(text: &str) -> Result<MeasureSpace> {
    let file: SpaceFile = from_json(text)?;
    check_schema(&file.schema, SPACE_SCHEMA)?;
    MeasureSpace::new(file.weights)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub set: SetForm,
}

impl SetFile {
    pub fn from_set(set: &FiniteSet) -> Self {
        Self {
            schema: Some(SET_SCHEMA.to_string()),
            set: SetForm::from_set(set),
        }
    }
}

pub fn parse_set(text: &str, dim: usize) -> Result<FiniteSet> {
    let file: SetFile = from_json(text)?;
    check_schema(&file.schema, SET_SCHEMA)?;
    file.set.to_set(dim)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub support: Vec<SetForm>,
    pub probs: Vec<f64>,
}

impl DistributionFile {
    pub fn from_distribution(d: &DiscreteRandomSet) -> Self {
        Self {
            schema: Some(DISTRIBUTION_SCHEMA.to_string()),
            support: d.support().iter().map(SetForm::from_set).collect(),
            probs: d.probs().to_vec(),
        }
    }
}

pub fn parse_distribution(text: &str, dim: usize) -> Result<DiscreteRandomSet> {
    let file: DistributionFile = from_json(text)?;
    check_schema(&file.schema, DISTRIBUTION_SCHEMA)?;
    let support = file
        .support
        .iter()
        .map(|s| s.to_set(dim))
        .collect::<Result<Vec<_>>>()?;
    DiscreteRandomSet::new(support, file.probs)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    /// Optional path of the space file these observations live on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub observations: Vec<SetForm>,
}

pub fn parse_sample_file(text: &str) -> Result<SampleFile> {
    let file: SampleFile = from_json(text)?;
    check_schema(&file.schema, SAMPLE_SCHEMA)?;
    Ok(file)
}

pub fn parse_sample(text: &str, dim: usize) -> Result<SetSample> {
    let file = parse_sample_file(text)?;
    let observations = file
        .observations
        .iter()
        .map(|s| s.to_set(dim))
        .collect::<Result<Vec<_>>>()?;
    SetSample::new(observations, file.label.unwrap_or_else(|| "sample".into()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub sets: Vec<SetForm>,
}

pub fn parse_system(text: &str, dim: usize) -> Result<Vec<FiniteSet>> {
    let file: SystemFile = from_json(text)?;
    check_schema(&file.schema, SYSTEM_SCHEMA)?;
    file.sets.iter().map(|s| s.to_set(dim)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub cells: Vec<SetForm>,
}

pub fn parse_partition(text: &str, dim: usize) -> Result<CellPartition> {
    let file: PartitionFile = from_json(text)?;
    check_schema(&file.schema, PARTITION_SCHEMA)?;
    let cells = file
        .cells
        .iter()
        .map(|s| s.to_set(dim))
        .collect::<Result<Vec<_>>>()?;
    CellPartition::new(cells)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorsFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub vectors: Vec<Vec<f64>>,
}

pub fn parse_vectors(text: &str) -> Result<Vec<Vec<f64>>> {
    let file: VectorsFile = from_json(text)?;
    check_schema(&file.schema, VECTORS_SCHEMA)?;
    Ok(file.vectors)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeanFunctionFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub values: Vec<f64>,
}

impl MeanFunctionFile {
    pub fn from_mean(f: &MeanFunction) -> Self {
        Self {
            schema: Some(MEAN_SCHEMA.to_string()),
            values: f.values().to_vec(),
        }
    }
}

pub fn parse_mean_function(text: &str) -> Result<MeanFunction> {
    let file: MeanFunctionFile = from_json(text)?;
    check_schema(&file.schema, MEAN_SCHEMA)?;
    MeanFunction::new(file.values)
}
