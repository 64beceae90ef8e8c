//! Tabulated views of weight modules over a window of indices.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::hcmod::{Support, WeightModule};
use crate::pbw::Gen;
use crate::scalar::Coefficient;

/// `(index, weight, E coefficient, F coefficient, H coefficient)`.
pub type ModuleRow = (i64, i64, String, String, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleTable {
    pub label: String,
    pub ring: String,
    pub support: Support,
    pub rows: Vec<ModuleRow>,
}

impl ModuleTable {
    pub fn new<C: Coefficient>(m: &WeightModule<C>, window: RangeInclusive<i64>) -> Self {
        let cell = |x: Gen, p: i64| m.coefficient(x, p).to_value().to_string();
        let rows = m
            .support
            .clip(window)
            .into_iter()
            .map(|p| {
                (
                    p,
                    m.weight(p),
                    cell(Gen::E, p),
                    cell(Gen::F, p),
                    cell(Gen::H, p),
                )
            })
            .collect();
        ModuleTable {
            label: m.label.clone(),
            ring: m.ring.to_string(),
            support: m.support,
            rows,
        }
    }
}

/// A contracted module, or the reason its integral version is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractOutput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleTable>,
}

/// A finite lattice together with its scales against the divided-power basis
/// when it sits inside one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub lattice: crate::borelweil::FiniteLattice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<String>>,
}
