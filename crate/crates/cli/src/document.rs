//! JSON documents: decomposition output and the ground-truth sidecar written
//! by `randgen`. Points and orbit indices are one-based; orders are decimal
//! strings.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use ddpd_core::oracle::{
    partition_supports, projection_order, verify_decomposition, RNG_ALGORITHM,
};
use ddpd_core::stabchain::build_chain;
use ddpd_core::stabchain::SmallestMoved;
use ddpd_core::{
    format_cycles, parse_cycles, DecompositionResult, GroupHandle, OrbitPartition, Permutation,
    PointSet,
};

use crate::error::{CliError, CliResult};

pub const TOOL_NAME: &str = "ddpd";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Generator algorithm behind `seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

impl ToolInfo {
    pub fn new(method: &str, seed: Option<u64>) -> Self {
        Self {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            method: method.into(),
            seed,
            rng: seed.map(|_| RNG_ALGORITHM.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDocument {
    /// One-based orbit indices of the cell.
    pub orbits: Vec<usize>,
    pub support: Vec<usize>,
    pub generators: Vec<String>,
    pub order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub tool: ToolInfo,
    pub degree: usize,
    pub orbits: Vec<Vec<usize>>,
    pub fixed_points: Vec<usize>,
    pub cells: Vec<Vec<usize>>,
    pub factors: Vec<FactorDocument>,
    pub whole_order: String,
}

fn one_based(cell: &[usize]) -> Vec<usize> {
    cell.iter().map(|i| i + 1).collect()
}

impl DecompositionDocument {
    pub fn from_result(result: &DecompositionResult) -> Self {
        Self {
            tool: ToolInfo::new("ddpd", None),
            degree: result.degree,
            orbits: result
                .orbits
                .orbits()
                .iter()
                .map(|o| o.iter().copied().collect())
                .collect(),
            fixed_points: result.fixed_points().iter().copied().collect(),
            cells: result
                .partition
                .cells()
                .iter()
                .map(|c| one_based(c))
                .collect(),
            factors: result
                .factors
                .iter()
                .map(|f| FactorDocument {
                    orbits: one_based(&f.orbits),
                    support: f.support.iter().copied().collect(),
                    generators: f.generators.iter().map(format_cycles).collect(),
                    order: f.order.to_string(),
                })
                .collect(),
            whole_order: result.whole_order.to_string(),
        }
    }

    /// Document for a partition found by the oracle. Factor generators are
    /// the restrictions of the group's generators to each cell's support.
    pub fn from_partition(handle: &GroupHandle, partition: &OrbitPartition) -> CliResult<Self> {
        let orbits = handle.orbits();
        let mut factors = Vec::new();
        for cell in partition.cells() {
            let support = orbits.union_of(cell.iter().copied());
            let mut generators: Vec<Permutation> = Vec::new();
            for g in handle.generators() {
                let r = g.restrict(&support)?;
                if !r.is_identity() && !generators.contains(&r) {
                    generators.push(r);
                }
            }
            factors.push(FactorDocument {
                orbits: one_based(cell),
                support: support.into_iter().collect(),
                generators: generators.iter().map(format_cycles).collect(),
                order: projection_order(handle, cell)?.to_string(),
            });
        }
        Ok(Self {
            tool: ToolInfo::new("oracle", None),
            degree: handle.degree(),
            orbits: orbits
                .orbits()
                .iter()
                .map(|o| o.iter().copied().collect())
                .collect(),
            fixed_points: orbits.fixed_points().iter().copied().collect(),
            cells: partition.cells().iter().map(|c| one_based(c)).collect(),
            factors,
            whole_order: handle.order().to_string(),
        })
    }

    pub fn supports(&self) -> BTreeSet<PointSet> {
        self.factors
            .iter()
            .map(|f| f.support.iter().copied().collect())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }

    /// Checks this document against the group it claims to decompose.
    ///
    /// Passing means: the orbits are the group's orbits, the cells partition
    /// them, the factor supports are the cell supports, every factor
    /// generator lies in the group and inside its support, every group
    /// generator restricted to a support lies in that factor, and the factor
    /// orders multiply to the group order. Together these force the group to
    /// be the direct product of the factors.
    pub fn check_against(&self, handle: &GroupHandle) -> CliResult<()> {
        let fail = |m: String| Err(CliError::Check(m));
        if self.degree != handle.degree() {
            return fail(format!(
                "degree {} but the group has degree {}",
                self.degree,
                handle.degree()
            ));
        }
        let orbits = handle.orbits();
        let claimed: BTreeSet<PointSet> = self
            .orbits
            .iter()
            .map(|o| o.iter().copied().collect())
            .collect();
        let actual: BTreeSet<PointSet> = orbits.orbits().iter().cloned().collect();
        if claimed != actual || self.orbits.len() != orbits.len() {
            return fail("orbits do not match the group's orbits".into());
        }
        let fixed: Vec<usize> = orbits.fixed_points().iter().copied().collect();
        if self.fixed_points != fixed {
            return fail("fixed points do not match".into());
        }
        let whole = parse_order(&self.whole_order)?;
        if &whole != handle.order() {
            return fail(format!(
                "whole order {} but the group has order {}",
                whole,
                handle.order()
            ));
        }

        // Cells over the group's own orbit indices.
        let k = self.orbits.len();
        let mut cells = Vec::new();
        for cell in &self.cells {
            let mut mapped = Vec::new();
            for &i in cell {
                if i == 0 || i > k {
                    return fail(format!("cell index {i} out of range 1..={k}"));
                }
                let first = *self.orbits[i - 1]
                    .first()
                    .ok_or_else(|| CliError::Check("empty orbit".into()))?;
                mapped.push(orbits.orbit_of(first).expect("orbit matched above"));
            }
            cells.push(mapped);
        }
        let partition = OrbitPartition::new(cells).map_err(|e| CliError::Check(e.to_string()))?;
        if partition.len() != k {
            return fail("cells do not cover every orbit".into());
        }
        if self.factors.len() != partition.num_cells() {
            return fail(format!(
                "{} factors for {} cells",
                self.factors.len(),
                partition.num_cells()
            ));
        }

        let expected_supports = partition_supports(handle, &partition);
        let supports = self.supports();
        if supports != expected_supports || supports.len() != self.factors.len() {
            return fail("factor supports are not the cell supports".into());
        }

        let mut product = BigUint::from(1u32);
        for factor in &self.factors {
            let support: PointSet = factor.support.iter().copied().collect();
            let mut gens = Vec::new();
            for text in &factor.generators {
                let g = parse_cycles(text, self.degree)?;
                if !g.support().is_subset(&support) {
                    return fail(format!("generator {text} moves points outside its support"));
                }
                if !handle.contains(&g) {
                    return fail(format!("generator {text} is not in the group"));
                }
                gens.push(g);
            }
            let chain = build_chain(&gens, self.degree, &SmallestMoved)?;
            let order = parse_order(&factor.order)?;
            if chain.order() != &order {
                return fail(format!(
                    "factor order {} but its generators give {}",
                    order,
                    chain.order()
                ));
            }
            for g in handle.generators() {
                let restricted = g.restrict(&support).map_err(|_| {
                    CliError::Check(format!("support {:?} is not invariant", factor.support))
                })?;
                if !chain.is_member(&restricted) {
                    return fail(format!(
                        "a group generator restricted to {:?} is not in the factor",
                        factor.support
                    ));
                }
            }
            product *= order;
        }
        if &product != handle.order() {
            return fail(format!(
                "factor orders multiply to {product}, the group has order {}",
                handle.order()
            ));
        }
        if !verify_decomposition(handle, &partition)? {
            return fail("cells fail the order-product test".into());
        }
        Ok(())
    }
}

fn parse_order(text: &str) -> CliResult<BigUint> {
    text.parse()
        .map_err(|_| CliError::Document(format!("order {text:?} is not a decimal integer")))
}

/// Ground truth written next to a generated group file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedDocument {
    pub tool: ToolInfo,
    pub inner: String,
    pub r: usize,
    pub s: usize,
    pub degree: usize,
    pub supports: Vec<Vec<usize>>,
}

impl ExpectedDocument {
    pub fn supports(&self) -> BTreeSet<PointSet> {
        self.supports
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }
}

/// Either kind of document, as far as comparison is concerned.
#[derive(Debug, Clone)]
pub struct SupportFamily {
    pub degree: usize,
    pub supports: BTreeSet<PointSet>,
}

pub fn read_support_family(path: &Path) -> CliResult<SupportFamily> {
    let text = crate::read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Document(format!("{}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| CliError::Document(format!("{}: {e}", path.display()));
    if value.get("factors").is_some() {
        let doc: DecompositionDocument = serde_json::from_value(value).map_err(bad)?;
        Ok(SupportFamily {
            degree: doc.degree,
            supports: doc.supports(),
        })
    } else {
        let doc: ExpectedDocument = serde_json::from_value(value).map_err(bad)?;
        Ok(SupportFamily {
            degree: doc.degree,
            supports: doc.supports(),
        })
    }
}

pub fn read_document(path: &Path) -> CliResult<DecompositionDocument> {
    let text = crate::read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Document(format!("{}: {e}", path.display())))
}
