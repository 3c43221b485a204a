//! Downstream computations with a whole-group path and a decomposed path:
//! derived subgroups, conjugacy class counts, and a small benchmark harness.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::ddpd::{decompose, decompose_handle, DecomposeOptions, DecompositionResult};
use crate::error::{Error, Result};
use crate::oracle::{
    brute_force_decompose_with, random_ddp_group, OracleOptions, RandomInstanceSpec, MAX_ORBITS,
};
use crate::perm::Permutation;
use crate::stabchain::GroupHandle;

/// Default enumeration limit for [`count_conjugacy_classes`].
pub const DEFAULT_ORDER_CAP: u64 = 100_000;

fn check_deadline(deadline: Option<Instant>) -> Result<()> {
    match deadline {
        Some(d) if Instant::now() >= d => Err(Error::Timeout),
        _ => Ok(()),
    }
}

/// Decomposes `h`, reusing its chain when it is already orbit-ordered.
fn decompose_group(h: &GroupHandle) -> Result<DecompositionResult> {
    if h.boundaries().is_some() {
        decompose_handle(h, DecomposeOptions::default())
    } else {
        decompose(h.generators(), h.degree())
    }
}

/// Derived subgroup `[H, H]`, the normal closure of the commutators of
/// generator pairs.
pub fn derived_subgroup(h: &GroupHandle) -> Result<GroupHandle> {
    derived_subgroup_until(h, None)
}

pub fn derived_subgroup_until(h: &GroupHandle, deadline: Option<Instant>) -> Result<GroupHandle> {
    let gens = h.generators();
    let mut derived_gens = Vec::new();
    for (a, x) in gens.iter().enumerate() {
        for y in &gens[a + 1..] {
            let c = x.commutator(y)?;
            if !c.is_identity() {
                derived_gens.push(c);
            }
        }
    }
    let mut derived = GroupHandle::new(&derived_gens, h.degree())?;
    // Every element of the closure is reached by conjugating known
    // generators by generators of H.
    let mut next = 0;
    while next < derived_gens.len() {
        let x = derived_gens[next].clone();
        next += 1;
        for g in gens {
            check_deadline(deadline)?;
            let y = x.conjugate_by(g);
            if !derived.contains(&y) {
                derived_gens.push(y);
                derived = GroupHandle::new(&derived_gens, h.degree())?;
            }
        }
    }
    Ok(derived)
}

/// Derived subgroup assembled from the derived subgroups of the factors of
/// the finest decomposition.
pub fn derived_subgroup_via_ddpd(h: &GroupHandle) -> Result<GroupHandle> {
    let decomposition = decompose_group(h)?;
    derived_subgroup_of_factors(h, &decomposition, None)
}

fn derived_subgroup_of_factors(
    h: &GroupHandle,
    decomposition: &DecompositionResult,
    deadline: Option<Instant>,
) -> Result<GroupHandle> {
    let mut gens = Vec::new();
    let mut expected = BigUint::one();
    for factor in &decomposition.factors {
        let factor_group = GroupHandle::new(&factor.generators, h.degree())?;
        let derived = derived_subgroup_until(&factor_group, deadline)?;
        expected *= derived.order();
        gens.extend(derived.generators().iter().cloned());
    }
    let derived = GroupHandle::new(&gens, h.degree())?;
    if derived.order() != &expected {
        return Err(Error::Invariant(format!(
            "derived factors generate order {}, expected {expected}",
            derived.order()
        )));
    }
    Ok(derived)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassCountMethod {
    WholeGroup,
    PerFactorProduct,
}

impl fmt::Display for ClassCountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::WholeGroup => "whole-group",
            Self::PerFactorProduct => "per-factor-product",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCountReport {
    pub count: BigUint,
    pub method: ClassCountMethod,
    pub per_factor_counts: Option<Vec<BigUint>>,
}

/// Number of conjugacy classes, by enumerating all elements.
///
/// Fails with [`Error::OrderCap`] when `|H| > order_cap`.
pub fn count_conjugacy_classes(h: &GroupHandle, order_cap: u64) -> Result<ClassCountReport> {
    Ok(ClassCountReport {
        count: BigUint::from(count_classes_until(h, order_cap, None)?),
        method: ClassCountMethod::WholeGroup,
        per_factor_counts: None,
    })
}

fn count_classes_until(h: &GroupHandle, order_cap: u64, deadline: Option<Instant>) -> Result<u64> {
    let order = h
        .order()
        .to_u64()
        .filter(|&o| o <= order_cap)
        .ok_or_else(|| Error::OrderCap {
            order: h.order().to_string(),
            cap: order_cap,
        })?;
    let chain = h.chain();
    let mut seen = vec![false; order as usize];
    let mut classes = 0;
    let mut stack = Vec::new();
    for start in 0..order as usize {
        if seen[start] {
            continue;
        }
        check_deadline(deadline)?;
        classes += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let x = chain.element_at(i);
            for g in h.generators() {
                let j = chain
                    .element_index(&x.conjugate_by(g))
                    .ok_or_else(|| Error::Invariant("conjugate left the group".into()))?;
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    Ok(classes)
}

/// Number of conjugacy classes as the product of the counts of the factors
/// of the finest decomposition. Each factor must have order at most
/// `per_factor_cap`.
pub fn count_conjugacy_classes_via_ddpd(
    h: &GroupHandle,
    per_factor_cap: u64,
) -> Result<ClassCountReport> {
    let decomposition = decompose_group(h)?;
    classes_of_factors(h, &decomposition, per_factor_cap, None)
}

fn classes_of_factors(
    h: &GroupHandle,
    decomposition: &DecompositionResult,
    per_factor_cap: u64,
    deadline: Option<Instant>,
) -> Result<ClassCountReport> {
    let mut counts = Vec::with_capacity(decomposition.factors.len());
    for factor in &decomposition.factors {
        let factor_group = GroupHandle::new(&factor.generators, h.degree())?;
        counts.push(BigUint::from(count_classes_until(
            &factor_group,
            per_factor_cap,
            deadline,
        )?));
    }
    Ok(ClassCountReport {
        count: counts.iter().product(),
        method: ClassCountMethod::PerFactorProduct,
        per_factor_counts: Some(counts),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchTask {
    Derived,
    Classes,
    /// Oracle against the fast decomposition.
    Decompose,
}

impl fmt::Display for BenchTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Derived => "derived",
            Self::Classes => "classes",
            Self::Decompose => "decompose",
        })
    }
}

impl FromStr for BenchTask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derived" => Ok(Self::Derived),
            "classes" => Ok(Self::Classes),
            "decompose" => Ok(Self::Decompose),
            _ => Err(Error::Parse {
                offset: 0,
                message: format!("unknown task {s:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Label for the inner group, e.g. `"D8"`.
    pub inner_name: String,
    /// Instance parameters; repetition `k` uses seed `spec.seed + k`.
    pub spec: RandomInstanceSpec,
    pub task: BenchTask,
    pub repetitions: usize,
    pub time_limit: Duration,
    /// Enumeration cap for class counting, on both paths.
    pub order_cap: u64,
}

/// Timings of one repetition. A `None` time means the run hit the time
/// limit or a cap.
///
/// For `derived` and `classes` the whole column times the whole-group
/// computation and the decomposed column the per-factor computation. For
/// `decompose` the whole column times the exhaustive oracle and the
/// decomposed column is unused.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub inner: String,
    pub r: usize,
    pub s: usize,
    pub seed: u64,
    pub whole_seconds: Option<f64>,
    pub decomposition_seconds: Option<f64>,
    pub decomposed_seconds: Option<f64>,
}

/// Medians over repetitions. A median is reported only when more than half
/// of the repetitions completed.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub inner: String,
    pub r: usize,
    pub s: usize,
    pub task: BenchTask,
    pub repetitions: usize,
    pub whole_median: Option<f64>,
    pub whole_completed: usize,
    pub decomposition_median: Option<f64>,
    pub decomposition_completed: usize,
    pub decomposed_median: Option<f64>,
    pub decomposed_completed: usize,
}

/// Median of `values`; the mean of the middle pair for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(Option<f64>, Option<T>)> {
    let start = Instant::now();
    match f() {
        Ok(v) => Ok((Some(start.elapsed().as_secs_f64()), Some(v))),
        Err(Error::Timeout | Error::OrderCap { .. } | Error::OrbitCap { .. }) => Ok((None, None)),
        Err(e) => Err(e),
    }
}

/// Runs `config.repetitions` fresh instances and times each path.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::with_capacity(config.repetitions);
    for rep in 0..config.repetitions {
        let spec = RandomInstanceSpec {
            seed: config.spec.seed.wrapping_add(rep as u64),
            ..config.spec.clone()
        };
        let h = random_ddp_group(&spec)?.group;
        let limit = config.time_limit;
        let deadline = || Some(Instant::now() + limit);

        let (decomposition_seconds, decomposition) = timed(|| decompose_group(&h))?;
        let decomposition =
            decomposition.ok_or_else(|| Error::Invariant("decomposition failed".into()))?;

        let (whole_seconds, decomposed_seconds) = match config.task {
            BenchTask::Derived => (
                timed(|| derived_subgroup_until(&h, deadline()))?.0,
                timed(|| derived_subgroup_of_factors(&h, &decomposition, deadline()))?.0,
            ),
            BenchTask::Classes => (
                timed(|| count_classes_until(&h, config.order_cap, deadline()))?.0,
                timed(|| classes_of_factors(&h, &decomposition, config.order_cap, deadline()))?.0,
            ),
            BenchTask::Decompose => {
                let options = OracleOptions {
                    cap: MAX_ORBITS,
                    pair_prepass: false,
                    deadline: deadline(),
                };
                (timed(|| brute_force_decompose_with(&h, &options))?.0, None)
            }
        };
        records.push(BenchRecord {
            inner: config.inner_name.clone(),
            r: spec.r,
            s: spec.s,
            seed: spec.seed,
            whole_seconds,
            decomposition_seconds,
            decomposed_seconds,
        });
    }
    Ok(records)
}

pub fn summarize(config: &BenchConfig, records: &[BenchRecord]) -> BenchSummary {
    let reps = records.len();
    let column = |pick: fn(&BenchRecord) -> Option<f64>| {
        let done: Vec<f64> = records.iter().filter_map(pick).collect();
        let median = (done.len() * 2 > reps).then(|| median(&done)).flatten();
        (median, done.len())
    };
    let (whole_median, whole_completed) = column(|r| r.whole_seconds);
    let (decomposition_median, decomposition_completed) = column(|r| r.decomposition_seconds);
    let (decomposed_median, decomposed_completed) = column(|r| r.decomposed_seconds);
    BenchSummary {
        inner: config.inner_name.clone(),
        r: config.spec.r,
        s: config.spec.s,
        task: config.task,
        repetitions: reps,
        whole_median,
        whole_completed,
        decomposition_median,
        decomposition_completed,
        decomposed_median,
        decomposed_completed,
    }
}

/// Whether `sub` is normalized by every generator of `h`.
pub fn is_normal_in(sub: &GroupHandle, h: &GroupHandle) -> bool {
    sub.generators().iter().all(|x| {
        h.generators()
            .iter()
            .all(|g| sub.contains(&x.conjugate_by(g)))
    })
}

/// Generators of the disjoint direct product of `groups`, placed on
/// consecutive point ranges.
pub fn disjoint_product(groups: &[&GroupHandle]) -> Result<(Vec<Permutation>, usize)> {
    let degree: usize = groups.iter().map(|g| g.degree()).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for g in groups {
        gens.extend(g.generators().iter().map(|x| x.shifted(offset, degree)));
        offset += g.degree();
    }
    Ok((gens, degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;
    use crate::perm::parse_cycles;

    fn handle(texts: &[&str], n: usize) -> GroupHandle {
        let gens: Vec<Permutation> = texts.iter().map(|t| parse_cycles(t, n).unwrap()).collect();
        GroupHandle::new(&gens, n).unwrap()
    }

    fn running_example() -> GroupHandle {
        handle(
            &[
                "(1,2,3)(7,9,8)(10,12,11)",
                "(4,5,6)(7,8,9)(10,11,12)",
                "(5,6)(8,9)(11,12)",
                "(7,8,9)(10,11,12)",
            ],
            12,
        )
    }

    fn classes(h: &GroupHandle) -> BigUint {
        count_conjugacy_classes(h, DEFAULT_ORDER_CAP).unwrap().count
    }

    fn big(n: u32) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn derived_examples() {
        let abelian = handle(&["(1,2,3)", "(4,5,6)"], 6);
        assert!(derived_subgroup(&abelian).unwrap().order().is_one());
        assert!(derived_subgroup_via_ddpd(&abelian)
            .unwrap()
            .order()
            .is_one());

        let s4 = groups::named("S4").unwrap();
        let d = derived_subgroup(&s4).unwrap();
        assert_eq!(d.order(), &big(12));
        assert!(is_normal_in(&d, &s4));
        assert_eq!(
            derived_subgroup(&groups::named("D8").unwrap())
                .unwrap()
                .order(),
            &big(2)
        );
    }

    #[test]
    fn derived_of_products() {
        let s4 = groups::named("S4").unwrap();
        let (gens, n) = disjoint_product(&[&s4, &s4]).unwrap();
        let h = GroupHandle::new(&gens, n).unwrap();
        assert_eq!(derived_subgroup(&h).unwrap().order(), &big(144));
        assert_eq!(derived_subgroup_via_ddpd(&h).unwrap().order(), &big(144));

        let h = running_example();
        assert_eq!(
            derived_subgroup(&h).unwrap().order(),
            derived_subgroup_via_ddpd(&h).unwrap().order()
        );
    }

    #[test]
    fn class_count_examples() {
        assert_eq!(classes(&groups::cyclic(3).unwrap()), big(3));
        assert_eq!(classes(&groups::named("S4").unwrap()), big(5));
        assert_eq!(classes(&groups::named("D8").unwrap()), big(5));
        assert_eq!(classes(&groups::named("A4").unwrap()), big(4));
        assert_eq!(classes(&groups::symmetric(5).unwrap()), big(7));
    }

    #[test]
    fn class_count_of_products() {
        let c3 = groups::cyclic(3).unwrap();
        let (gens, n) = disjoint_product(&[&c3, &c3]).unwrap();
        let h = GroupHandle::new(&gens, n).unwrap();
        let report = count_conjugacy_classes_via_ddpd(&h, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(report.count, big(9));
        assert_eq!(report.method, ClassCountMethod::PerFactorProduct);
        assert_eq!(report.per_factor_counts, Some(vec![big(3), big(3)]));

        let s4 = groups::named("S4").unwrap();
        let d8 = groups::named("D8").unwrap();
        let (gens, n) = disjoint_product(&[&s4, &s4]).unwrap();
        let h = GroupHandle::new(&gens, n).unwrap();
        assert_eq!(classes(&h), big(25));
        assert_eq!(
            count_conjugacy_classes_via_ddpd(&h, DEFAULT_ORDER_CAP)
                .unwrap()
                .count,
            big(25)
        );

        let (gens, n) = disjoint_product(&[&s4, &d8]).unwrap();
        let h = GroupHandle::new(&gens, n).unwrap();
        assert_eq!(classes(&h), big(25));
    }

    #[test]
    fn order_cap() {
        let s5 = groups::symmetric(5).unwrap();
        assert_eq!(
            count_conjugacy_classes(&s5, 100),
            Err(Error::OrderCap {
                order: "120".into(),
                cap: 100
            })
        );
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn tiny_benchmark() {
        let config = BenchConfig {
            inner_name: "C3".into(),
            spec: RandomInstanceSpec {
                inner: groups::cyclic(3).unwrap(),
                r: 2,
                s: 2,
                seed: 1,
            },
            task: BenchTask::Classes,
            repetitions: 1,
            time_limit: Duration::from_secs(10),
            order_cap: DEFAULT_ORDER_CAP,
        };
        let records = run_benchmark(&config).unwrap();
        assert_eq!(records.len(), 1);
        let summary = summarize(&config, &records);
        assert_eq!(summary.whole_completed, 1);
        assert_eq!(summary.decomposition_completed, 1);
        assert_eq!(summary.decomposed_completed, 1);
        assert!(summary.whole_median.is_some());
    }

    #[test]
    fn whole_path_capped_decomposed_path_completes() {
        let config = BenchConfig {
            inner_name: "D8".into(),
            spec: RandomInstanceSpec {
                inner: groups::named("D8").unwrap(),
                r: 4,
                s: 4,
                seed: 1,
            },
            task: BenchTask::Classes,
            repetitions: 3,
            time_limit: Duration::from_secs(10),
            order_cap: DEFAULT_ORDER_CAP,
        };
        let summary = summarize(&config, &run_benchmark(&config).unwrap());
        assert_eq!(summary.decomposed_completed, 3);
        assert_eq!(summary.whole_completed, 0);
        assert_eq!(summary.whole_median, None);
    }
}
