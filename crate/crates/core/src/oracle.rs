//! Ground truth: exhaustive decomposition, decomposition checks and random
//! instances with a known finest decomposition.
//!
//! Every test here rests on one fact. `H` is a subdirect product of its
//! projections onto the two sides `A`, `B` of any split of its orbits, so
//! `|H| <= |Proj_A(H)| * |Proj_B(H)|`, with equality exactly when `H` contains
//! `Proj_A(H) x 1` and hence equals `Proj_A(H) x Proj_B(H)`. By induction a
//! partition into cells is a direct decomposition iff the projection orders
//! of the cells multiply to `|H|`.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ddpd::DecompositionResult;
use crate::error::{Error, Result};
use crate::partition::{DisjointSets, OrbitPartition};
use crate::perm::{Permutation, Point, PointSet};
use crate::stabchain::{build_chain, GroupHandle, SmallestMoved};

/// Default limit on the number of orbits the exhaustive search accepts.
pub const DEFAULT_ORBIT_CAP: usize = 12;
/// Orbit subsets are bit masks, so no configuration may exceed this.
pub const MAX_ORBITS: usize = 64;
/// Attempts `make_subdirect` makes before giving up.
pub const DEFAULT_RETRY_BUDGET: usize = 1000;
/// The generator behind every seeded computation in this crate.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Seeded generator used for instance construction.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub cap: usize,
    /// Merge orbits whose pairwise projection is indecomposable before the
    /// main search.
    pub pair_prepass: bool,
    pub deadline: Option<Instant>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ORBIT_CAP,
            pair_prepass: false,
            deadline: None,
        }
    }
}

/// Orders of projections of one group onto unions of its orbits, memoized by
/// orbit subset.
struct ProjectionOrders<'a> {
    handle: &'a GroupHandle,
    memo: HashMap<u64, BigUint>,
}

impl<'a> ProjectionOrders<'a> {
    fn new(handle: &'a GroupHandle) -> Self {
        Self {
            handle,
            memo: HashMap::new(),
        }
    }

    fn order(&mut self, mask: u64) -> Result<BigUint> {
        if let Some(order) = self.memo.get(&mask) {
            return Ok(order.clone());
        }
        let order = projection_order(self.handle, &bits(mask))?;
        self.memo.insert(mask, order.clone());
        Ok(order)
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

/// Order of the projection of `handle`'s group onto the given orbits.
pub fn projection_order(handle: &GroupHandle, orbit_indices: &[usize]) -> Result<BigUint> {
    let points: Vec<Point> = handle
        .orbits()
        .union_of(orbit_indices.iter().copied())
        .into_iter()
        .collect();
    let gens: Vec<Permutation> = handle
        .generators()
        .iter()
        .map(|g| g.restrict_to(points.iter().copied()))
        .collect();
    Ok(build_chain(&gens, handle.degree(), &SmallestMoved)?
        .order()
        .clone())
}

/// Whether the cells of `partition` (over `handle`'s orbit indices) give a
/// disjoint direct product decomposition.
pub fn verify_decomposition(handle: &GroupHandle, partition: &OrbitPartition) -> Result<bool> {
    let k = handle.orbits().len();
    if partition.len() != k {
        return Err(Error::MalformedPartition(format!(
            "partition covers {} orbit indices, the group has {k} orbits",
            partition.len()
        )));
    }
    let mut product = BigUint::one();
    for cell in partition.cells() {
        product *= projection_order(handle, cell)?;
    }
    Ok(&product == handle.order())
}

/// Finest decomposition by exhaustive search over two-cell splits.
pub fn brute_force_decompose(handle: &GroupHandle, cap: usize) -> Result<OrbitPartition> {
    brute_force_decompose_with(
        handle,
        &OracleOptions {
            cap,
            ..OracleOptions::default()
        },
    )
}

/// Finest decomposition by exhaustive search.
///
/// Splits of the current orbit set into two cells are tried in order of
/// increasing size of the smaller side; the first valid split is recursed
/// into on both sides, and a set with no valid split is one cell.
pub fn brute_force_decompose_with(
    handle: &GroupHandle,
    options: &OracleOptions,
) -> Result<OrbitPartition> {
    let k = handle.orbits().len();
    let cap = options.cap.min(MAX_ORBITS);
    if k > cap {
        return Err(Error::OrbitCap { orbits: k, cap });
    }
    if k == 0 {
        return Ok(OrbitPartition::single_cell(0));
    }
    let mut orders = ProjectionOrders::new(handle);

    // Blocks are sets of orbits that must share a cell.
    let mut blocks: Vec<u64> = (0..k).map(|i| 1 << i).collect();
    if options.pair_prepass {
        let mut sets = DisjointSets::new(k);
        for a in 0..k {
            for b in a + 1..k {
                check_deadline(options)?;
                let pair = orders.order(1 << a | 1 << b)?;
                if orders.order(1 << a)? * orders.order(1 << b)? != pair {
                    sets.union(a, b);
                }
            }
        }
        blocks = sets
            .to_partition()
            .cells()
            .iter()
            .map(|c| mask_of(c))
            .collect();
    }

    let mut cells = Vec::new();
    split_recursive(&mut orders, &blocks, options, &mut cells)?;
    OrbitPartition::new(cells.into_iter().map(bits).collect())
}

fn split_recursive(
    orders: &mut ProjectionOrders<'_>,
    blocks: &[u64],
    options: &OracleOptions,
    cells: &mut Vec<u64>,
) -> Result<()> {
    let n = blocks.len();
    let whole_mask = blocks.iter().fold(0, |m, b| m | b);
    if n <= 1 {
        cells.push(whole_mask);
        return Ok(());
    }
    let whole = orders.order(whole_mask)?;
    for t in 1..=n / 2 {
        let mut combo: Vec<usize> = (0..t).collect();
        loop {
            // With equal halves, keep only the side containing block 0.
            if !(2 * t == n && combo[0] != 0) {
                check_deadline(options)?;
                let side = combo.iter().fold(0, |m, &i| m | blocks[i]);
                let rest = whole_mask & !side;
                if orders.order(side)? * orders.order(rest)? == whole {
                    let (left, right): (Vec<u64>, Vec<u64>) =
                        blocks.iter().partition(|&&b| b & side != 0);
                    split_recursive(orders, &left, options, cells)?;
                    split_recursive(orders, &right, options, cells)?;
                    return Ok(());
                }
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    cells.push(whole_mask);
    Ok(())
}

/// Advances `combo` to the next `combo.len()`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let t = combo.len();
    let Some(i) = (0..t).rev().find(|&i| combo[i] < n - t + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..t {
        combo[j] = combo[j - 1] + 1;
    }
    true
}

fn check_deadline(options: &OracleOptions) -> Result<()> {
    match options.deadline {
        Some(deadline) if Instant::now() >= deadline => Err(Error::Timeout),
        _ => Ok(()),
    }
}

/// Whether the group admits no disjoint direct product decomposition with
/// more than one factor.
pub fn is_ddp_indecomposable(handle: &GroupHandle, cap: usize) -> Result<bool> {
    Ok(brute_force_decompose(handle, cap)?.num_cells() <= 1)
}

fn check_inner(inner: &GroupHandle) -> Result<usize> {
    let d = inner.degree();
    let orbits = inner.orbits();
    if d < 2 || orbits.len() != 1 || orbits.orbit(0).len() != d {
        return Err(Error::InvalidInstance(format!(
            "inner group must be transitive on all {d} points"
        )));
    }
    Ok(d)
}

/// A random d.d.p. indecomposable subdirect product of `s` copies of the
/// transitive group `inner`; copy `b` acts on points `b*d+1 ..= (b+1)*d`.
///
/// Each attempt takes `i` uniform in `2..=max(s, 2)` random elements of
/// `inner^s` and keeps the generated group when every copy is hit
/// surjectively and the result is indecomposable.
pub fn make_subdirect<R: Rng + ?Sized>(
    inner: &GroupHandle,
    s: usize,
    rng: &mut R,
) -> Result<GroupHandle> {
    make_subdirect_with_budget(inner, s, rng, DEFAULT_RETRY_BUDGET)
}

pub fn make_subdirect_with_budget<R: Rng + ?Sized>(
    inner: &GroupHandle,
    s: usize,
    rng: &mut R,
    budget: usize,
) -> Result<GroupHandle> {
    let d = check_inner(inner)?;
    if s == 0 || s > MAX_ORBITS {
        return Err(Error::InvalidInstance(format!(
            "s = {s} out of range 1..={MAX_ORBITS}"
        )));
    }
    let n = s * d;
    for _ in 0..budget {
        let count = rng.gen_range(2..=s.max(2));
        let gens: Vec<Permutation> = (0..count)
            .map(|_| {
                let mut g = Permutation::identity(n);
                for b in 0..s {
                    g *= &inner.chain().random_element(rng).shifted(b * d, n);
                }
                g
            })
            .collect();
        let candidate = GroupHandle::new(&gens, n)?;
        if candidate.orbits().len() != s {
            continue;
        }
        let surjective =
            (0..s).all(|b| projection_order(&candidate, &[b]).is_ok_and(|o| &o == inner.order()));
        if surjective && is_ddp_indecomposable(&candidate, MAX_ORBITS)? {
            return Ok(candidate);
        }
    }
    Err(Error::RetryBudget { attempts: budget })
}

/// Parameters of a random instance: `r` indecomposable factors, each a
/// subdirect product of `s` copies of `inner`.
#[derive(Debug, Clone)]
pub struct RandomInstanceSpec {
    pub inner: GroupHandle,
    pub r: usize,
    pub s: usize,
    pub seed: u64,
}

/// A random group together with its known finest decomposition.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub group: GroupHandle,
    /// Cells over `group`'s orbit indices.
    pub expected_partition: OrbitPartition,
    /// One support per constructed factor, in construction order.
    pub expected_supports: Vec<PointSet>,
}

/// Direct product of `r` outputs of [`make_subdirect`] on consecutive point
/// ranges, conjugated by a uniformly random permutation of the moved points.
pub fn random_ddp_group(spec: &RandomInstanceSpec) -> Result<RandomInstance> {
    let d = check_inner(&spec.inner)?;
    if spec.r == 0 || spec.s == 0 || spec.r * spec.s > MAX_ORBITS {
        return Err(Error::InvalidInstance(format!(
            "r = {}, s = {} must be positive with r*s <= {MAX_ORBITS}",
            spec.r, spec.s
        )));
    }
    let mut rng = seeded_rng(spec.seed);
    let width = spec.s * d;
    let n = spec.r * width;

    let mut gens = Vec::new();
    for t in 0..spec.r {
        let factor = make_subdirect(&spec.inner, spec.s, &mut rng)?;
        gens.extend(factor.generators().iter().map(|g| g.shifted(t * width, n)));
    }

    let moved: Vec<Point> = (1..=n)
        .filter(|&p| gens.iter().any(|g| g.moves(p)))
        .collect();
    let mut shuffled = moved.clone();
    shuffled.shuffle(&mut rng);
    let mut images: Vec<Point> = (1..=n).collect();
    for (&p, &q) in moved.iter().zip(&shuffled) {
        images[p - 1] = q;
    }
    let conjugator = Permutation::from_images(&images)?;
    let gens: Vec<Permutation> = gens.iter().map(|g| g.conjugate_by(&conjugator)).collect();

    let group = GroupHandle::orbit_ordered(&gens, n)?;
    let expected_supports: Vec<PointSet> = (0..spec.r)
        .map(|t| {
            (t * width + 1..=(t + 1) * width)
                .map(|p| conjugator.apply(p))
                .collect()
        })
        .collect();
    let orbits = group.orbits();
    let cells = expected_supports
        .iter()
        .map(|support| {
            (0..orbits.len())
                .filter(|&i| orbits.orbit(i).is_subset(support))
                .collect()
        })
        .collect();
    Ok(RandomInstance {
        group,
        expected_partition: OrbitPartition::new(cells)?,
        expected_supports,
    })
}

/// Outcome of comparing two decompositions by their factor supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub left_supports: BTreeSet<PointSet>,
    pub right_supports: BTreeSet<PointSet>,
    pub mismatch: Option<String>,
}

pub fn decompositions_equivalent(
    a: &DecompositionResult,
    b: &DecompositionResult,
) -> EquivalenceReport {
    let mut report = supports_equivalent(a.supports(), b.supports());
    if a.degree != b.degree {
        report.equivalent = false;
        report.mismatch = Some(format!("degrees differ: {} vs {}", a.degree, b.degree));
    }
    report
}

/// Compares two families of supports as sets of sets.
pub fn supports_equivalent(
    left: BTreeSet<PointSet>,
    right: BTreeSet<PointSet>,
) -> EquivalenceReport {
    let equivalent = left == right;
    let mismatch = (!equivalent).then(|| {
        let show = |s: &PointSet| format!("{:?}", s.iter().collect::<Vec<_>>());
        let only_left: Vec<String> = left.difference(&right).map(show).collect();
        let only_right: Vec<String> = right.difference(&left).map(show).collect();
        format!(
            "only left: [{}]; only right: [{}]",
            only_left.join(", "),
            only_right.join(", ")
        )
    });
    EquivalenceReport {
        equivalent,
        left_supports: left,
        right_supports: right,
        mismatch,
    }
}

/// Supports of the cells of `partition` over `handle`'s orbits.
pub fn partition_supports(handle: &GroupHandle, partition: &OrbitPartition) -> BTreeSet<PointSet> {
    partition
        .cells()
        .iter()
        .map(|c| handle.orbits().union_of(c.iter().copied()))
        .collect()
}
