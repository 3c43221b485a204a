//! Finest disjoint direct product decomposition.
//!
//! Orbits `Ω_1, ..., Ω_k` are processed in order. After step `i` the partition
//! `P_i` groups the first `i` orbits into the cells of the finest
//! decomposition of the projection of `H` onto those orbits, and the working
//! generating set is `i`-separable: every element that moves a point of the
//! first `i` orbits does so inside a single cell.
//!
//! Step `i -> i+1` sifts each element through the pointwise stabilizer of the
//! first `i` orbits (a tail of the orbit-ordered chain). The siftee still
//! agrees with the element on those orbits, and its action on `Ω_{i+1}` is
//! trivial exactly when the element's component there lies in the kernel
//! subgroup `N_{i+1}`. Cells holding an element whose siftee still moves
//! `Ω_{i+1}` are merged with the new orbit; all other cells survive unchanged.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::partition::{DisjointSets, OrbitPartition};
use crate::perm::{Permutation, Point, PointSet};
use crate::stabchain::{build_chain, GroupHandle, OrbitStructure, SmallestMoved};

/// A strong generating set that is `index`-separable for the current partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparableSgs {
    pub elements: Vec<Permutation>,
    pub index: usize,
}

/// What happened to one element during a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SifteeRecord {
    pub original: Permutation,
    pub siftee: Permutation,
    /// Position of the element's cell in the incoming partition.
    pub cell: usize,
    /// Whether the siftee still moves the next orbit.
    pub next_orbit_moved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub sgs: SeparableSgs,
    pub partition: OrbitPartition,
    pub records: Vec<SifteeRecord>,
}

/// One direct factor: the subgroup acting on the orbits of a single cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub orbits: Vec<usize>,
    pub support: PointSet,
    pub generators: Vec<Permutation>,
    pub order: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    pub degree: usize,
    pub orbits: OrbitStructure,
    pub partition: OrbitPartition,
    pub factors: Vec<Factor>,
    pub whole_order: BigUint,
}

impl DecompositionResult {
    pub fn fixed_points(&self) -> &PointSet {
        self.orbits.fixed_points()
    }

    /// The factor supports as a set of sets.
    pub fn supports(&self) -> BTreeSet<PointSet> {
        self.factors.iter().map(|f| f.support.clone()).collect()
    }

    /// Checks the structural laws of a decomposition of `<generators>`:
    /// factor supports partition the group's support and match the cells,
    /// factor generators stay inside their supports, every generator's
    /// restriction to a factor support lies in that factor, stated factor
    /// orders are correct, and they multiply to the order of the group.
    pub fn check_laws(&self, generators: &[Permutation]) -> Result<()> {
        let breach = |msg: String| Err(Error::Invariant(msg));
        let whole = GroupHandle::new(generators, self.degree)?;
        if whole.order() != &self.whole_order {
            return breach(format!(
                "whole order is {} but the group has order {}",
                self.whole_order,
                whole.order()
            ));
        }
        let mut covered = PointSet::new();
        for factor in &self.factors {
            if factor.support.iter().any(|p| covered.contains(p)) {
                return breach("factor supports overlap".into());
            }
            covered.extend(factor.support.iter().copied());
        }
        if covered != whole.support() {
            return breach("factor supports do not cover the support of the group".into());
        }
        if self.factors.len() != self.partition.num_cells() {
            return breach("factor count differs from the number of cells".into());
        }
        let mut product = BigUint::one();
        for factor in &self.factors {
            if self.orbits.union_of(factor.orbits.iter().copied()) != factor.support {
                return breach(format!(
                    "support of factor on orbits {:?} is inconsistent",
                    factor.orbits
                ));
            }
            if factor
                .generators
                .iter()
                .any(|g| g.support().iter().any(|p| !factor.support.contains(p)))
            {
                return breach("a factor generator moves points outside its support".into());
            }
            let chain = build_chain(&factor.generators, self.degree, &SmallestMoved)?;
            if chain.order() != &factor.order {
                return breach(format!(
                    "factor stated order {} but generates {}",
                    factor.order,
                    chain.order()
                ));
            }
            for g in generators {
                let Ok(part) = g.restrict(&factor.support) else {
                    return breach("a factor support is not invariant".into());
                };
                if !chain.is_member(&part) {
                    return breach(format!("restriction of {g} is not in its factor"));
                }
            }
            product *= &factor.order;
        }
        if product != self.whole_order {
            return breach(format!(
                "factor orders multiply to {product}, not {}",
                self.whole_order
            ));
        }
        Ok(())
    }
}

/// Handle whose chain uses the orbit-ordered base for the smallest-point orbit order.
pub fn orbit_ordered_handle(generators: &[Permutation], degree: usize) -> Result<GroupHandle> {
    GroupHandle::orbit_ordered(generators, degree)
}

/// Generators of `N_{i+1}`: the strong generators fixing the first `i` orbits
/// pointwise, restricted to orbit `i+1` (zero-based index `i`). Identities
/// are dropped, so the list is empty when `N_{i+1}` is trivial.
pub fn compute_n_generators(handle: &GroupHandle, i: usize) -> Result<Vec<Permutation>> {
    let k = handle.orbits().len();
    if i == 0 || i >= k {
        return Err(Error::IndexOutOfRange {
            index: i,
            expected: format!("1..{k}"),
        });
    }
    let level = handle.pointwise_stabilizer_level(i)?;
    let next = handle.orbits().orbit(i);
    let mut out: Vec<Permutation> = Vec::new();
    for g in handle.chain().level_generators(level) {
        let r = g.restrict_to(next.iter().copied());
        if !r.is_identity() && !out.contains(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Cell containing the first of the leading `partition.len()` orbits that `x`
/// moves. Relies on separability for the answer to be the unique cell.
pub fn find_cell(
    x: &Permutation,
    partition: &OrbitPartition,
    orbits: &OrbitStructure,
) -> Result<usize> {
    let i = partition.len();
    (0..i)
        .find(|&j| x.moves_any(orbits.orbit(j)))
        .and_then(|j| partition.cell_of(j))
        .ok_or_else(|| Error::InvalidInstance(format!("{x} fixes the first {i} orbits pointwise")))
}

/// Like [`find_cell`] but scans every orbit and rejects elements touching two cells.
pub fn find_cell_checked(
    x: &Permutation,
    partition: &OrbitPartition,
    orbits: &OrbitStructure,
) -> Result<usize> {
    let cells = touched_cells(x, partition, orbits);
    match cells.len() {
        0 => Err(Error::InvalidInstance(format!(
            "{x} fixes the first {} orbits pointwise",
            partition.len()
        ))),
        1 => Ok(*cells.iter().next().unwrap()),
        _ => Err(Error::Separability(format!("{x} touches cells {cells:?}"))),
    }
}

fn touched_cells(
    x: &Permutation,
    partition: &OrbitPartition,
    orbits: &OrbitStructure,
) -> BTreeSet<usize> {
    (0..partition.len())
        .filter(|&j| x.moves_any(orbits.orbit(j)))
        .filter_map(|j| partition.cell_of(j))
        .collect()
}

/// Whether every element moving a point of the first `partition.len()` orbits
/// does so within exactly one cell.
pub fn verify_separability(
    sgs: &SeparableSgs,
    partition: &OrbitPartition,
    orbits: &OrbitStructure,
) -> bool {
    sgs.elements
        .iter()
        .all(|x| touched_cells(x, partition, orbits).len() <= 1)
}

/// One refinement step `P_i -> P_{i+1}` with `i = partition.len()`.
pub fn ddpd_step(
    handle: &GroupHandle,
    sgs: &SeparableSgs,
    partition: &OrbitPartition,
) -> Result<StepOutcome> {
    let i = partition.len();
    let k = handle.orbits().len();
    if sgs.index != i || i == 0 || i >= k {
        return Err(Error::IndexOutOfRange {
            index: i,
            expected: format!("1..{k}, matching the separability index {}", sgs.index),
        });
    }
    let mut sets = DisjointSets::from_partition(partition, k);
    let mut records = Vec::new();
    let elements = step(
        handle,
        i,
        &sgs.elements,
        &mut sets,
        Some((partition, &mut records)),
        true,
    )?;
    Ok(StepOutcome {
        sgs: SeparableSgs {
            elements,
            index: i + 1,
        },
        partition: sets.to_partition_prefix(i + 1),
        records,
    })
}

fn step(
    handle: &GroupHandle,
    i: usize,
    elements: &[Permutation],
    sets: &mut DisjointSets,
    mut trace: Option<(&OrbitPartition, &mut Vec<SifteeRecord>)>,
    verify: bool,
) -> Result<Vec<Permutation>> {
    let orbits = handle.orbits();
    let chain = handle.chain();
    let level = handle.pointwise_stabilizer_level(i)?;
    let delta: Vec<Point> = orbits.orbits()[..i].iter().flatten().copied().collect();
    let next = orbits.orbit(i);

    let mut out = Vec::with_capacity(elements.len());
    let mut merge = Vec::new();
    for x in elements {
        let Some(&moved) = delta.iter().find(|&&p| x.moves(p)) else {
            out.push(x.clone());
            continue;
        };
        let first = orbits.orbit_of(moved).expect("delta lies in the orbits");
        let root = sets.find(first);
        if verify {
            for j in first + 1..i {
                if x.moves_any(orbits.orbit(j)) && sets.find(j) != root {
                    return Err(Error::Separability(format!(
                        "{x} moves orbits {} and {} from different cells",
                        first + 1,
                        j + 1
                    )));
                }
            }
        }
        let (siftee, _) = chain.sift(x, level)?;
        let next_moved = siftee.moves_any(next);
        if next_moved {
            merge.push(root);
        }
        if let Some((partition, records)) = trace.as_mut() {
            records.push(SifteeRecord {
                original: x.clone(),
                siftee: siftee.clone(),
                cell: partition.cell_of(first).expect("orbit lies in a cell"),
                next_orbit_moved: next_moved,
            });
        }
        out.push(siftee);
    }
    for root in merge {
        sets.union(root, i);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecomposeOptions {
    /// Re-check separability and the strong generating property after every step.
    pub verify: bool,
}

/// Finest disjoint direct product decomposition of `<generators>`.
pub fn decompose(generators: &[Permutation], degree: usize) -> Result<DecompositionResult> {
    let handle = orbit_ordered_handle(generators, degree)?;
    decompose_handle(&handle, DecomposeOptions::default())
}

/// Decomposition for an orbit-ordered handle, honouring its orbit order.
pub fn decompose_handle(
    handle: &GroupHandle,
    options: DecomposeOptions,
) -> Result<DecompositionResult> {
    let orbits = handle.orbits();
    let k = orbits.len();
    let degree = handle.degree();
    let whole_order = handle.order().clone();
    let mut result = DecompositionResult {
        degree,
        orbits: orbits.clone(),
        partition: OrbitPartition::single_cell(k),
        factors: Vec::new(),
        whole_order: whole_order.clone(),
    };
    if k == 0 {
        return Ok(result);
    }
    if k == 1 {
        result.factors.push(Factor {
            orbits: vec![0],
            support: orbits.orbit(0).clone(),
            generators: handle.generators().to_vec(),
            order: whole_order,
        });
        return Ok(result);
    }
    if handle.boundaries().is_none() {
        return Err(Error::NotOrbitOrdered);
    }

    let mut sets = DisjointSets::new(k);
    let mut elements = handle.chain().strong_generators().to_vec();
    for i in 1..k {
        elements = step(handle, i, &elements, &mut sets, None, options.verify)?;
        if options.verify {
            let sgs = SeparableSgs {
                elements: elements.clone(),
                index: i + 1,
            };
            let partition = sets.to_partition_prefix(i + 1);
            if !verify_separability(&sgs, &partition, orbits) {
                return Err(Error::Separability(format!(
                    "step {i} produced a non-separable set"
                )));
            }
            let fresh = build_chain(&elements, degree, &SmallestMoved)?;
            if fresh.order() != handle.order() {
                return Err(Error::Invariant(format!(
                    "step {i} changed the generated group (order {} instead of {})",
                    fresh.order(),
                    handle.order()
                )));
            }
        }
    }

    let partition = sets.to_partition();
    let mut grouped: BTreeMap<usize, Vec<Permutation>> = BTreeMap::new();
    for x in elements {
        if x.is_identity() {
            continue;
        }
        let cell = find_cell(&x, &partition, orbits)?;
        let bucket = grouped.entry(cell).or_default();
        if !bucket.contains(&x) {
            bucket.push(x);
        }
    }
    let mut product = BigUint::one();
    for (pos, cell) in partition.cells().iter().enumerate() {
        let generators = grouped.remove(&pos).unwrap_or_default();
        let order = build_chain(&generators, degree, &SmallestMoved)?
            .order()
            .clone();
        product *= &order;
        result.factors.push(Factor {
            orbits: cell.clone(),
            support: orbits.union_of(cell.iter().copied()),
            generators,
            order,
        });
    }
    if product != result.whole_order {
        return Err(Error::Invariant(format!(
            "factor orders multiply to {product}, not {}",
            result.whole_order
        )));
    }
    result.partition = partition;
    Ok(result)
}
