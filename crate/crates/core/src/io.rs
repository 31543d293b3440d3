//! JSON file formats for instances and results.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::auction::{AuctionError, AuctionResult, Assignment2DInstance};
use crate::discrete::facility::FacilityInstance;
use crate::gen::SeparableTruth;
use crate::multidim::{MultiAssignInstance, MultidimError};
use crate::toy::ToyDp;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Auction(#[from] AuctionError),
    #[error(transparent)]
    Multidim(#[from] MultidimError),
    #[error("multidimensional instance needs a dense cost tensor to be written")]
    CallableCost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assign2dFile {
    pub n: usize,
    pub n_obj: usize,
    pub benefits: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<(usize, usize)>>,
}

impl Assign2dFile {
    pub fn from_instance(inst: &Assignment2DInstance) -> Self {
        Self {
            n: inst.persons(),
            n_obj: inst.objects(),
            benefits: inst.benefits().to_vec(),
            mask: inst.mask_pairs(),
        }
    }

    pub fn to_instance(&self) -> Result<Assignment2DInstance, AuctionError> {
        Assignment2DInstance::new(self.n, self.n_obj, self.benefits.clone(), self.mask.as_deref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiAssignFile {
    pub layers: usize,
    pub m: usize,
    pub costs: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<SeparableTruth>,
}

impl MultiAssignFile {
    pub fn from_instance(inst: &MultiAssignInstance, metadata: Option<SeparableTruth>) -> Result<Self, FormatError> {
        Ok(Self {
            layers: inst.layers(),
            m: inst.nodes(),
            costs: inst.dense_costs().ok_or(FormatError::CallableCost)?.to_vec(),
            metadata,
        })
    }

    pub fn to_instance(&self) -> Result<MultiAssignInstance, MultidimError> {
        MultiAssignInstance::dense(self.layers, self.m, self.costs.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceBody {
    Assign2d(Assign2dFile),
    Assign3d(MultiAssignFile),
    Assignnd(MultiAssignFile),
    Separable3d(MultiAssignFile),
    EpsSeparable3d(MultiAssignFile),
    Facility(FacilityInstance),
    ToyDp(ToyDp),
}

impl InstanceBody {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceBody::Assign2d(_) => "assign2d",
            InstanceBody::Assign3d(_) => "assign3d",
            InstanceBody::Assignnd(_) => "assignnd",
            InstanceBody::Separable3d(_) => "separable3d",
            InstanceBody::EpsSeparable3d(_) => "eps-separable3d",
            InstanceBody::Facility(_) => "facility",
            InstanceBody::ToyDp(_) => "toy-dp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub body: InstanceBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuctionResultFile {
    pub assignment: Vec<usize>,
    pub prices: Vec<i64>,
    pub scale: i64,
    pub epsilon: i64,
    pub rounds: usize,
    pub primal: i64,
    /// Scaled units, like `prices`.
    pub dual: i64,
}

impl From<&AuctionResult> for AuctionResultFile {
    fn from(r: &AuctionResult) -> Self {
        Self {
            assignment: r.assignment.clone(),
            prices: r.prices.clone(),
            scale: r.scale,
            epsilon: r.epsilon,
            rounds: r.rounds,
            primal: r.primal,
            dual: r.dual_scaled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiAssignResultFile {
    pub groupings: Vec<Vec<usize>>,
    pub cost: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacilityResultFile {
    pub placements: Vec<bool>,
    /// Clients by locations, row-major.
    pub flows: Vec<i64>,
    pub cost: i64,
    pub transport_solves: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpResultFile {
    pub controls: Vec<u8>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResultFile {
    Assign2d(AuctionResultFile),
    MultiAssign(MultiAssignResultFile),
    Facility(FacilityResultFile),
    ToyDp(DpResultFile),
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, FormatError> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}
