//! Orbits, stabilizer chains and sifting.
//!
//! Chains are built by deterministic Schreier–Sims over a prescribed sequence
//! of candidate base points. Every moved point is a candidate, so the sequence
//! is a (usually redundant) base; levels whose basic orbit is trivial are
//! dropped once the chain is complete. Feeding the concatenation of the orbits
//! as candidates therefore yields a non-redundant orbit-ordered base.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{Permutation, Point, PointSet};

/// The non-trivial orbits of a group in a fixed order, plus its fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitStructure {
    degree: usize,
    orbits: Vec<PointSet>,
    orbit_of: Vec<Option<usize>>,
    fixed_points: PointSet,
}

impl OrbitStructure {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn orbits(&self) -> &[PointSet] {
        &self.orbits
    }

    pub fn orbit(&self, index: usize) -> &PointSet {
        &self.orbits[index]
    }

    /// Number of non-trivial orbits.
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn fixed_points(&self) -> &PointSet {
        &self.fixed_points
    }

    /// Index of the orbit containing `p`, or `None` for a fixed point.
    pub fn orbit_of(&self, p: Point) -> Option<usize> {
        self.orbit_of.get(p).copied().flatten()
    }

    /// Union of the first `i` orbits.
    pub fn prefix(&self, i: usize) -> PointSet {
        self.orbits[..i].iter().flatten().copied().collect()
    }

    /// Union of the orbits with the given indices.
    pub fn union_of<I: IntoIterator<Item = usize>>(&self, indices: I) -> PointSet {
        indices
            .into_iter()
            .flat_map(|i| self.orbits[i].iter().copied())
            .collect()
    }

    /// The same orbits listed in a different order: position `t` of the result
    /// holds the orbit that is at index `order[t]` here.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.orbits.len()];
        if order.len() != self.orbits.len()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidInstance(format!(
                "{order:?} is not a permutation of the {} orbit indices",
                self.orbits.len()
            )));
        }
        Ok(Self::from_orbits(
            self.degree,
            order.iter().map(|&i| self.orbits[i].clone()).collect(),
        ))
    }

    fn from_orbits(degree: usize, orbits: Vec<PointSet>) -> Self {
        let mut orbit_of = vec![None; degree + 1];
        for (i, orbit) in orbits.iter().enumerate() {
            for &p in orbit {
                orbit_of[p] = Some(i);
            }
        }
        let fixed_points = (1..=degree).filter(|&p| orbit_of[p].is_none()).collect();
        Self {
            degree,
            orbits,
            orbit_of,
            fixed_points,
        }
    }
}

/// Orbits of `<generators>` on `1..=degree`, ordered by smallest element.
pub fn compute_orbits(generators: &[Permutation], degree: usize) -> Result<OrbitStructure> {
    check_degrees(generators, degree)?;
    let mut seen = vec![false; degree + 1];
    let mut orbits = Vec::new();
    for start in 1..=degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut next = 0;
        while next < orbit.len() {
            let p = orbit[next];
            next += 1;
            for g in generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
        }
        if orbit.len() > 1 {
            orbits.push(orbit.into_iter().collect());
        }
    }
    Ok(OrbitStructure::from_orbits(degree, orbits))
}

/// Chooses the order in which points are offered as base points.
///
/// The candidate list must contain every point moved by the generators.
pub trait BaseSelector {
    fn candidates(&self, degree: usize, generators: &[Permutation]) -> Vec<Point>;
}

/// Base points in increasing order: the smallest point moved by each level group.
#[derive(Debug, Clone, Copy, Default)]
pub struct SmallestMoved;

impl BaseSelector for SmallestMoved {
    fn candidates(&self, degree: usize, generators: &[Permutation]) -> Vec<Point> {
        (1..=degree)
            .filter(|&p| generators.iter().any(|g| g.moves(p)))
            .collect()
    }
}

/// Base points orbit by orbit in the given orbit order, smallest point first
/// within each orbit.
#[derive(Debug, Clone)]
pub struct OrbitOrdered<'a> {
    pub orbits: &'a OrbitStructure,
}

impl BaseSelector for OrbitOrdered<'_> {
    fn candidates(&self, _degree: usize, _generators: &[Permutation]) -> Vec<Point> {
        self.orbits.orbits().iter().flatten().copied().collect()
    }
}

/// One level `H^[j]` of a stabilizer chain together with its transversal.
#[derive(Debug, Clone)]
pub struct TransversalLevel {
    base_point: Point,
    orbit: Vec<Point>,
    position: HashMap<Point, usize>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
    generators: Vec<usize>,
}

impl TransversalLevel {
    fn new(base_point: Point, degree: usize) -> Self {
        Self {
            base_point,
            orbit: vec![base_point],
            position: HashMap::from([(base_point, 0)]),
            reps: vec![Permutation::identity(degree)],
            inv_reps: vec![Permutation::identity(degree)],
            generators: Vec::new(),
        }
    }

    pub fn base_point(&self) -> Point {
        self.base_point
    }

    /// Basic orbit in discovery order; the base point comes first.
    pub fn basic_orbit(&self) -> &[Point] {
        &self.orbit
    }

    /// Coset representative mapping the base point to `q`.
    pub fn coset_rep(&self, q: Point) -> Option<&Permutation> {
        self.position.get(&q).map(|&i| &self.reps[i])
    }

    pub fn coset_reps(&self) -> &[Permutation] {
        &self.reps
    }

    /// Indices into the chain's strong generators that fix all earlier base points.
    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    fn push_point(&mut self, q: Point, rep: Permutation) {
        self.position.insert(q, self.orbit.len());
        self.orbit.push(q);
        self.inv_reps.push(rep.inverse());
        self.reps.push(rep);
    }
}

/// Base, transversals and strong generators of a permutation group.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<TransversalLevel>,
    strong_generators: Vec<Permutation>,
    order: BigUint,
}

impl StabilizerChain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<Point> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn levels(&self) -> &[TransversalLevel] {
        &self.levels
    }

    /// Number of base points `m`. Level indices run over `0..=m`, where `m`
    /// stands for the trivial bottom group.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong_generators
    }

    /// Strong generators lying in level `j`, i.e. fixing the first `j` base points.
    pub fn level_generators(&self, j: usize) -> Vec<&Permutation> {
        let base = self.base();
        self.strong_generators
            .iter()
            .filter(|g| !g.moves_any(&base[..j.min(base.len())]))
            .collect()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Order of the level-`j` group `H^[j]`.
    pub fn level_order(&self, j: usize) -> BigUint {
        self.levels[j.min(self.levels.len())..]
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.orbit.len())
    }

    /// Sifts `g` through the levels `start..m`.
    ///
    /// Returns the siftee and the index of the level where sifting stopped
    /// (`m` when every level was passed). The siftee fixes the base points of
    /// the passed levels and `g = siftee * h` with `h` in the level-`start` group.
    pub fn sift(&self, g: &Permutation, start: usize) -> Result<(Permutation, usize)> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: g.degree(),
                right: self.degree,
            });
        }
        if start > self.levels.len() {
            return Err(Error::IndexOutOfRange {
                index: start,
                expected: format!("0..={}", self.levels.len()),
            });
        }
        Ok(sift_levels(&self.levels, g.clone(), start))
    }

    pub fn is_member(&self, g: &Permutation) -> bool {
        match self.sift(g, 0) {
            Ok((siftee, stop)) => stop == self.levels.len() && siftee.is_identity(),
            Err(_) => false,
        }
    }

    /// Uniform random element: one uniformly chosen coset representative per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            g *= &level.reps[rng.gen_range(0..level.reps.len())];
        }
        g
    }

    /// Mixed-radix index of a group element, `None` for non-members.
    pub fn element_index(&self, g: &Permutation) -> Option<usize> {
        let mut g = g.clone();
        let mut index = 0usize;
        let mut radix = 1usize;
        for level in &self.levels {
            let &pos = level.position.get(&g.apply(level.base_point))?;
            g *= &level.inv_reps[pos];
            index += pos * radix;
            radix = radix.checked_mul(level.orbit.len())?;
        }
        g.is_identity().then_some(index)
    }

    /// Inverse of [`Self::element_index`].
    pub fn element_at(&self, mut index: usize) -> Permutation {
        let mut positions = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            positions.push(index % level.orbit.len());
            index /= level.orbit.len();
        }
        let mut g = Permutation::identity(self.degree);
        for (level, &pos) in self.levels.iter().zip(&positions).rev() {
            g *= &level.reps[pos];
        }
        g
    }

    /// Chain with explicitly prescribed transversals, one `(base point, reps)`
    /// pair per level. Each list must contain the identity and every
    /// representative must fix the earlier base points. The transversals are
    /// trusted to belong to a genuine stabilizer chain.
    pub fn with_transversals(degree: usize, spec: Vec<(Point, Vec<Permutation>)>) -> Result<Self> {
        let mut levels = Vec::with_capacity(spec.len());
        let mut strong_generators: Vec<Permutation> = Vec::new();
        let mut prefix: Vec<Point> = Vec::new();
        for (base_point, reps) in spec {
            if base_point == 0 || base_point > degree {
                return Err(Error::PointOutOfRange {
                    point: base_point,
                    degree,
                });
            }
            check_degrees(&reps, degree)?;
            let mut level = TransversalLevel::new(base_point, degree);
            let mut has_identity = false;
            for r in reps {
                if r.moves_any(&prefix) {
                    return Err(Error::InvalidInstance(format!(
                        "representative {r} moves an earlier base point"
                    )));
                }
                if r.is_identity() {
                    has_identity = true;
                    continue;
                }
                let q = r.apply(base_point);
                if level.position.contains_key(&q) {
                    return Err(Error::InvalidInstance(format!(
                        "two representatives map {base_point} to {q}"
                    )));
                }
                if !strong_generators.contains(&r) {
                    strong_generators.push(r.clone());
                }
                level.push_point(q, r);
            }
            if !has_identity {
                return Err(Error::InvalidInstance(format!(
                    "transversal of level {base_point} lacks the identity"
                )));
            }
            prefix.push(base_point);
            levels.push(level);
        }
        let mut chain = Self {
            degree,
            levels,
            strong_generators,
            order: BigUint::one(),
        };
        chain.finish_metadata();
        Ok(chain)
    }

    fn finish_metadata(&mut self) {
        let mut prefix = Vec::new();
        for level in &mut self.levels {
            level.generators = self
                .strong_generators
                .iter()
                .enumerate()
                .filter(|(_, g)| !g.moves_any(&prefix))
                .map(|(i, _)| i)
                .collect();
            prefix.push(level.base_point);
        }
        self.order = self
            .levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.orbit.len());
    }
}

fn sift_levels(
    levels: &[TransversalLevel],
    mut g: Permutation,
    start: usize,
) -> (Permutation, usize) {
    for (j, level) in levels.iter().enumerate().skip(start) {
        let q = g.apply(level.base_point);
        if q == level.base_point {
            continue;
        }
        match level.position.get(&q) {
            Some(&pos) => g *= &level.inv_reps[pos],
            None => return (g, j),
        }
    }
    (g, levels.len())
}

/// Drops identity and repeated generators, keeping first occurrences.
pub fn clean_generators(generators: &[Permutation]) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = Vec::with_capacity(generators.len());
    for g in generators {
        if !g.is_identity() && !out.contains(g) {
            out.push(g.clone());
        }
    }
    out
}

fn check_degrees(generators: &[Permutation], degree: usize) -> Result<()> {
    match generators.iter().find(|g| g.degree() != degree) {
        Some(g) => Err(Error::DegreeMismatch {
            left: g.degree(),
            right: degree,
        }),
        None => Ok(()),
    }
}

/// Deterministic Schreier–Sims.
///
/// The cleaned generators come first in the strong generating set; further
/// elements are only added when a Schreier generator fails to sift, so a
/// generating set that is already strong is returned unchanged.
pub fn build_chain(
    generators: &[Permutation],
    degree: usize,
    selector: &dyn BaseSelector,
) -> Result<StabilizerChain> {
    check_degrees(generators, degree)?;
    let strong = clean_generators(generators);
    let candidates = selector.candidates(degree, &strong);
    let mut is_candidate = vec![false; degree + 1];
    for &p in &candidates {
        if p == 0 || p > degree {
            return Err(Error::PointOutOfRange { point: p, degree });
        }
        is_candidate[p] = true;
    }
    for g in &strong {
        if let Some(p) = (1..=degree).find(|&p| g.moves(p) && !is_candidate[p]) {
            return Err(Error::BaseCandidates { point: p });
        }
    }

    let mut builder = Builder {
        strong,
        levels: candidates
            .iter()
            .map(|&p| TransversalLevel::new(p, degree))
            .collect(),
        checked: vec![Vec::new(); candidates.len()],
    };
    for idx in 0..builder.strong.len() {
        builder.assign(idx, 0);
    }
    builder.run();

    let mut chain = StabilizerChain {
        degree,
        levels: builder
            .levels
            .into_iter()
            .filter(|l| l.orbit.len() > 1)
            .collect(),
        strong_generators: builder.strong,
        order: BigUint::one(),
    };
    chain.finish_metadata();
    Ok(chain)
}

struct Builder {
    strong: Vec<Permutation>,
    levels: Vec<TransversalLevel>,
    // checked[j][a]: how many generators of level j have been paired with orbit point a.
    checked: Vec<Vec<usize>>,
}

impl Builder {
    /// Registers strong generator `idx` on levels `from..` up to and including
    /// the first level whose base point it moves.
    fn assign(&mut self, idx: usize, from: usize) {
        for level in &mut self.levels[from..] {
            level.generators.push(idx);
            if self.strong[idx].moves(level.base_point) {
                break;
            }
        }
    }

    fn run(&mut self) {
        let mut j = self.levels.len();
        while j > 0 {
            let level = j - 1;
            self.close_orbit(level);
            match self.next_failing_schreier(level) {
                None => j -= 1,
                Some((residue, stop)) => {
                    debug_assert!(stop < self.levels.len());
                    let idx = self.strong.len();
                    self.strong.push(residue);
                    self.assign(idx, level + 1);
                    j = stop + 1;
                }
            }
        }
    }

    fn close_orbit(&mut self, j: usize) {
        let level = &mut self.levels[j];
        let mut next = 0;
        while next < level.orbit.len() {
            let q = level.orbit[next];
            for gi in 0..level.generators.len() {
                let g = &self.strong[level.generators[gi]];
                let qs = g.apply(q);
                if !level.position.contains_key(&qs) {
                    let rep = &level.reps[next] * g;
                    level.push_point(qs, rep);
                }
            }
            next += 1;
        }
        self.checked[j].resize(level.orbit.len(), 0);
    }

    /// Sifts the not-yet-checked Schreier generators of level `j` through the
    /// levels below it and returns the first non-trivial residue.
    fn next_failing_schreier(&mut self, j: usize) -> Option<(Permutation, usize)> {
        let (upper, lower) = self.levels.split_at(j + 1);
        let level = &upper[j];
        if level.orbit.len() == 1 {
            // Every generator fixes the base point and already sits on level j+1.
            return None;
        }
        let checked = &mut self.checked[j];
        for (a, done) in checked.iter_mut().enumerate().take(level.orbit.len()) {
            while *done < level.generators.len() {
                let s = &self.strong[level.generators[*done]];
                *done += 1;
                let b = level.position[&s.apply(level.orbit[a])];
                let mut h = &level.reps[a] * s;
                h *= &level.inv_reps[b];
                if h.is_identity() {
                    continue;
                }
                let (residue, stop) = sift_levels(lower, h, 0);
                if !residue.is_identity() {
                    return Some((residue, j + 1 + stop));
                }
            }
        }
        None
    }
}

/// A group given by generators with its orbits and an eagerly built chain.
#[derive(Debug, Clone)]
pub struct GroupHandle {
    degree: usize,
    generators: Vec<Permutation>,
    orbits: OrbitStructure,
    chain: StabilizerChain,
    boundaries: Option<Vec<usize>>,
}

impl GroupHandle {
    /// Chain with the smallest-moved-point base.
    pub fn new(generators: &[Permutation], degree: usize) -> Result<Self> {
        let orbits = compute_orbits(generators, degree)?;
        let chain = build_chain(generators, degree, &SmallestMoved)?;
        Ok(Self {
            degree,
            generators: clean_generators(generators),
            orbits,
            chain,
            boundaries: None,
        })
    }

    /// Chain with an orbit-ordered base for orbits ordered by smallest point.
    pub fn orbit_ordered(generators: &[Permutation], degree: usize) -> Result<Self> {
        let orbits = compute_orbits(generators, degree)?;
        Self::with_orbit_structure(generators, orbits)
    }

    /// Orbit-ordered chain for a custom orbit order; `order[t]` is the index
    /// (in smallest-point order) of the orbit placed at position `t`.
    pub fn orbit_ordered_with(
        generators: &[Permutation],
        degree: usize,
        order: &[usize],
    ) -> Result<Self> {
        let orbits = compute_orbits(generators, degree)?.reordered(order)?;
        Self::with_orbit_structure(generators, orbits)
    }

    fn with_orbit_structure(generators: &[Permutation], orbits: OrbitStructure) -> Result<Self> {
        let degree = orbits.degree();
        let chain = build_chain(generators, degree, &OrbitOrdered { orbits: &orbits })?;
        let base = chain.base();
        let mut boundaries = Vec::with_capacity(orbits.len());
        let mut count = 0;
        for i in 0..orbits.len() {
            count += base
                .iter()
                .filter(|&&b| orbits.orbit_of(b) == Some(i))
                .count();
            boundaries.push(count);
        }
        Ok(Self {
            degree,
            generators: clean_generators(generators),
            orbits,
            chain,
            boundaries: Some(boundaries),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Generators with identities and duplicates removed.
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn orbits(&self) -> &OrbitStructure {
        &self.orbits
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn order(&self) -> &BigUint {
        self.chain.order()
    }

    pub fn support(&self) -> PointSet {
        self.orbits.orbits().iter().flatten().copied().collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.is_member(g)
    }

    pub fn is_transitive_on_support(&self) -> bool {
        self.orbits.len() <= 1
    }

    /// `j_1 <= ... <= j_k`: `j_i` base points lie in the first `i` orbits.
    /// `None` unless the chain was built orbit-ordered.
    pub fn boundaries(&self) -> Option<&[usize]> {
        self.boundaries.as_deref()
    }

    /// Index of the chain level whose group is the pointwise stabilizer of the
    /// first `i` orbits (`0` for `i = 0`, the chain length once all orbits are fixed).
    pub fn pointwise_stabilizer_level(&self, i: usize) -> Result<usize> {
        let boundaries = self.boundaries.as_ref().ok_or(Error::NotOrbitOrdered)?;
        if i > boundaries.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                expected: format!("0..={}", boundaries.len()),
            });
        }
        Ok(if i == 0 { 0 } else { boundaries[i - 1] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn perms(texts: &[&str], n: usize) -> Vec<Permutation> {
        texts.iter().map(|t| parse_cycles(t, n).unwrap()).collect()
    }

    fn running_example() -> Vec<Permutation> {
        perms(
            &[
                "(1,2,3)(7,9,8)(10,12,11)",
                "(4,5,6)(7,8,9)(10,11,12)",
                "(5,6)(8,9)(11,12)",
                "(7,8,9)(10,11,12)",
            ],
            12,
        )
    }

    fn d10() -> Vec<Permutation> {
        perms(&["(1,2,3,4,5)", "(2,5)(3,4)"], 5)
    }

    // Brute-force closure, independent of the chain code.
    fn closure(gens: &[Permutation], n: usize) -> HashSet<Permutation> {
        let mut seen = HashSet::from([Permutation::identity(n)]);
        let mut queue = vec![Permutation::identity(n)];
        while let Some(g) = queue.pop() {
            for s in gens {
                let h = &g * s;
                if seen.insert(h.clone()) {
                    queue.push(h);
                }
            }
        }
        seen
    }

    fn set(points: &[Point]) -> PointSet {
        points.iter().copied().collect()
    }

    #[test]
    fn orbits_of_running_example() {
        let orbits = compute_orbits(&running_example(), 12).unwrap();
        assert_eq!(
            orbits.orbits(),
            &[
                set(&[1, 2, 3]),
                set(&[4, 5, 6]),
                set(&[7, 8, 9]),
                set(&[10, 11, 12])
            ]
        );
        assert!(orbits.fixed_points().is_empty());
        assert_eq!(orbits.prefix(2), set(&[1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn orbits_edge_cases() {
        let orbits = compute_orbits(&[], 5).unwrap();
        assert!(orbits.is_empty());
        assert_eq!(orbits.fixed_points(), &set(&[1, 2, 3, 4, 5]));

        let orbits = compute_orbits(&perms(&["(1,3)(2,4)"], 4), 4).unwrap();
        assert_eq!(orbits.orbits(), &[set(&[1, 3]), set(&[2, 4])]);
    }

    #[test]
    fn d10_chain() {
        let chain = build_chain(&d10(), 5, &SmallestMoved).unwrap();
        assert_eq!(chain.base(), vec![1, 2]);
        assert_eq!(closure(&d10(), 5).len(), 10);
        assert_eq!(chain.order(), &BigUint::from(10u32));
    }

    #[test]
    fn trivial_chain() {
        let chain = build_chain(&[], 4, &SmallestMoved).unwrap();
        assert!(chain.base().is_empty());
        assert_eq!(chain.order(), &BigUint::one());
        assert!(chain.is_member(&Permutation::identity(4)));
        let (siftee, stop) = chain.sift(&Permutation::identity(4), 0).unwrap();
        assert!(siftee.is_identity());
        assert_eq!(stop, 0);
    }

    #[test]
    fn running_example_orbit_ordered() {
        let handle = GroupHandle::orbit_ordered(&running_example(), 12).unwrap();
        assert_eq!(handle.chain().base(), vec![1, 4, 5, 7]);
        assert_eq!(closure(&running_example(), 12).len(), 54);
        assert_eq!(handle.order(), &BigUint::from(54u32));
        assert_eq!(handle.boundaries().unwrap(), &[1, 3, 4, 4]);
        // {x1..x4} is already strong, so nothing is added.
        assert_eq!(
            handle.chain().strong_generators(),
            running_example().as_slice()
        );
    }

    #[test]
    fn pinned_transversal_sift() {
        let r1 = perms(
            &[
                "()",
                "(1,5,4,3,2)",
                "(1,4,2,5,3)",
                "(1,2)(3,5)",
                "(1,3,5,2,4)",
            ],
            5,
        );
        let r2 = perms(&["()", "(2,5)(3,4)"], 5);
        let chain = StabilizerChain::with_transversals(5, vec![(1, r1), (2, r2)]).unwrap();
        assert_eq!(chain.order(), &BigUint::from(10u32));
        let g = parse_cycles("(1,2,4,5)", 5).unwrap();
        let (siftee, stop) = chain.sift(&g, 0).unwrap();
        assert_eq!(siftee, parse_cycles("(2,4,3,5)", 5).unwrap());
        assert_eq!(stop, 1);
        assert!(!chain.is_member(&parse_cycles("(2,4,3,5)", 5).unwrap()));

        let r1 = perms(
            &[
                "()",
                "(1,5,4,3,2)",
                "(1,4,2,5,3)",
                "(1,2,3,4,5)",
                "(1,3,5,2,4)",
            ],
            5,
        );
        let r2 = perms(&["()", "(2,5)(3,4)"], 5);
        let chain = StabilizerChain::with_transversals(5, vec![(1, r1), (2, r2)]).unwrap();
        let (siftee, _) = chain.sift(&g, 0).unwrap();
        assert_eq!(siftee, parse_cycles("(2,3)", 5).unwrap());
    }

    #[test]
    fn sift_past_the_last_orbit_boundary() {
        let handle = GroupHandle::orbit_ordered(&running_example(), 12).unwrap();
        let level = handle.pointwise_stabilizer_level(3).unwrap();
        assert_eq!(level, handle.chain().len());
        assert_eq!(handle.chain().level_order(level), BigUint::one());
        let x3 = parse_cycles("(5,6)(8,9)(11,12)", 12).unwrap();
        let (siftee, stop) = handle.chain().sift(&x3, level).unwrap();
        assert_eq!(siftee, x3);
        assert_eq!(stop, level);
    }

    #[test]
    fn membership() {
        let handle = GroupHandle::orbit_ordered(&running_example(), 12).unwrap();
        let x = running_example();
        assert!(handle.contains(&Permutation::identity(12)));
        assert!(handle.contains(&(&(&x[0] * &x[1]) * &x[2])));
        assert!(!handle.contains(&parse_cycles("(1,2)", 12).unwrap()));
        assert!(!handle.contains(&Permutation::identity(11)));
    }

    #[test]
    fn pointwise_stabilizer_levels() {
        let handle = GroupHandle::orbit_ordered(&running_example(), 12).unwrap();
        assert_eq!(handle.pointwise_stabilizer_level(0).unwrap(), 0);
        assert_eq!(handle.pointwise_stabilizer_level(2).unwrap(), 3);
        assert_eq!(handle.pointwise_stabilizer_level(3).unwrap(), 4);
        assert!(handle.pointwise_stabilizer_level(5).is_err());
        let plain = GroupHandle::new(&running_example(), 12).unwrap();
        assert_eq!(
            plain.pointwise_stabilizer_level(1),
            Err(Error::NotOrbitOrdered)
        );
    }

    #[test]
    fn selector_must_cover_support() {
        struct Short;
        impl BaseSelector for Short {
            fn candidates(&self, _: usize, _: &[Permutation]) -> Vec<Point> {
                vec![1]
            }
        }
        let err = build_chain(&d10(), 5, &Short).unwrap_err();
        assert_eq!(err, Error::BaseCandidates { point: 2 });
    }

    #[test]
    fn random_elements_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trivial = build_chain(&[], 3, &SmallestMoved).unwrap();
        assert!(trivial.random_element(&mut rng).is_identity());

        let c3 = build_chain(&perms(&["(1,2,3)"], 3), 3, &SmallestMoved).unwrap();
        let mut counts: HashMap<Permutation, usize> = HashMap::new();
        for _ in 0..3000 {
            *counts.entry(c3.random_element(&mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        assert!(counts.values().all(|&c| (850..1150).contains(&c)));

        let elements = closure(&d10(), 5);
        let d10 = build_chain(&d10(), 5, &SmallestMoved).unwrap();
        let draws = 10_000;
        let mut counts: HashMap<Permutation, usize> = HashMap::new();
        for _ in 0..draws {
            let g = d10.random_element(&mut rng);
            assert!(elements.contains(&g));
            *counts.entry(g).or_default() += 1;
        }
        assert_eq!(counts.len(), 10);
        let expected = draws as f64 / 10.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 9 degrees of freedom, 99.9th percentile.
        assert!(chi2 < 27.88, "chi2 = {chi2}");
    }

    #[test]
    fn element_indexing_is_a_bijection() {
        let chain = build_chain(&d10(), 5, &SmallestMoved).unwrap();
        let mut seen = HashSet::new();
        for i in 0..10 {
            let g = chain.element_at(i);
            assert_eq!(chain.element_index(&g), Some(i));
            seen.insert(g);
        }
        assert_eq!(seen, closure(&d10(), 5));
        assert_eq!(
            chain.element_index(&parse_cycles("(1,2)", 5).unwrap()),
            None
        );
    }

    #[test]
    fn redundant_and_duplicate_generators() {
        let mut gens = d10();
        gens.push(Permutation::identity(5));
        gens.push(gens[0].clone());
        let handle = GroupHandle::new(&gens, 5).unwrap();
        assert_eq!(handle.generators().len(), 2);
        assert_eq!(handle.order(), &BigUint::from(10u32));
    }

    #[test]
    fn symmetric_group_order() {
        // S_7 = <(1,2), (1,...,7)> has order 5040.
        let gens = perms(&["(1,2)", "(1,2,3,4,5,6,7)"], 7);
        let chain = build_chain(&gens, 7, &SmallestMoved).unwrap();
        assert_eq!(chain.order(), &BigUint::from(5040u32));
        assert_eq!(closure(&gens, 7).len(), 5040);
    }
}
