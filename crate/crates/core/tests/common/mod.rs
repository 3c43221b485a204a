//! Test-side reference computations that share no code with the library's
//! chains: groups are enumerated element by element, and a projection order
//! is the number of distinct restrictions.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use ddpd_core::{parse_cycles, Permutation, PointSet};

pub fn perms(texts: &[&str], n: usize) -> Vec<Permutation> {
    texts.iter().map(|t| parse_cycles(t, n).unwrap()).collect()
}

pub fn running_example() -> Vec<Permutation> {
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

/// All elements of a permutation group, each as its image list on `1..=n`
/// (index `p - 1` holds the image of `p`).
pub struct Enumerated {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    pub elements: Vec<Vec<usize>>,
}

impl Enumerated {
    /// Closure of the identity under right multiplication by the
    /// generators; `None` if more than `limit` elements turn up.
    pub fn new(gens: &[Permutation], degree: usize, limit: usize) -> Option<Self> {
        let gens: Vec<Vec<usize>> = gens.iter().map(|g| g.images().collect()).collect();
        let identity: Vec<usize> = (1..=degree).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        let mut elements = Vec::new();
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let next: Vec<usize> = e.iter().map(|&q| g[q - 1]).collect();
                if seen.insert(next.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push_back(next);
                }
            }
            elements.push(e);
        }
        Some(Self {
            degree,
            generators: gens,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn projection_order(&self, points: &PointSet) -> usize {
        self.elements
            .iter()
            .map(|e| points.iter().map(|&p| e[p - 1]).collect::<Vec<_>>())
            .collect::<HashSet<_>>()
            .len()
    }

    /// Orbits of length at least two.
    pub fn orbits(&self) -> Vec<PointSet> {
        let mut out: Vec<PointSet> = Vec::new();
        let mut done = vec![false; self.degree + 1];
        for p in 1..=self.degree {
            if done[p] {
                continue;
            }
            let orbit: PointSet = self.elements.iter().map(|e| e[p - 1]).collect();
            for &q in &orbit {
                done[q] = true;
            }
            if orbit.len() > 1 {
                out.push(orbit);
            }
        }
        out
    }

    /// Whether the supports are the finest decomposition: orders multiply
    /// to `|H|`, and no support splits along orbits into two parts whose
    /// projection orders multiply to the projection order of the whole.
    pub fn is_finest_decomposition(&self, supports: &BTreeSet<PointSet>) -> bool {
        let product: usize = supports.iter().map(|s| self.projection_order(s)).product();
        if product != self.order() {
            return false;
        }
        let orbits = self.orbits();
        supports.iter().all(|support| {
            let inside: Vec<&PointSet> = orbits.iter().filter(|o| o.is_subset(support)).collect();
            let whole = self.projection_order(support);
            let k = inside.len();
            // Masks containing orbit 0 and not everything.
            (0..(1u64 << k.saturating_sub(1)) - 1).all(|mask| {
                let mut left = inside[0].clone();
                let mut right = PointSet::new();
                for (bit, o) in inside[1..].iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        left.extend(o.iter());
                    } else {
                        right.extend(o.iter());
                    }
                }
                self.projection_order(&left) * self.projection_order(&right) != whole
            })
        })
    }

    /// Number of conjugacy classes: orbits of the conjugation action of
    /// the generators on the element list.
    pub fn class_count(&self) -> usize {
        let index: HashMap<&Vec<usize>, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let n = self.degree;
        let inverses: Vec<Vec<usize>> = self
            .generators
            .iter()
            .map(|g| {
                let mut inv = vec![0; n];
                for (p, &q) in g.iter().enumerate() {
                    inv[q - 1] = p + 1;
                }
                inv
            })
            .collect();
        let mut seen = vec![false; self.elements.len()];
        let mut count = 0;
        for start in 0..self.elements.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let x = &self.elements[i];
                for (g, gi) in self.generators.iter().zip(&inverses) {
                    // g^-1 x g: p -> (p^g^-1)^x^g
                    let c: Vec<usize> = (0..n).map(|p| g[x[gi[p] - 1] - 1]).collect();
                    let j = index[&c];
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        count
    }

    /// Order of the derived subgroup, by closing the set of all
    /// commutators. Quadratic in `|H|`.
    pub fn derived_order(&self) -> usize {
        let n = self.degree;
        let mul = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> {
            a.iter().map(|&q| b[q - 1]).collect()
        };
        let inverse = |g: &Vec<usize>| {
            let mut inv = vec![0; n];
            for (p, &q) in g.iter().enumerate() {
                inv[q - 1] = p + 1;
            }
            inv
        };
        let mut commutators: HashSet<Vec<usize>> = HashSet::new();
        for a in &self.elements {
            let ai = inverse(a);
            for b in &self.elements {
                commutators.insert(mul(&mul(&ai, &inverse(b)), &mul(a, b)));
            }
        }
        let gens: Vec<Vec<usize>> = commutators.iter().cloned().collect();
        let mut seen = commutators;
        let mut queue: VecDeque<Vec<usize>> = seen.iter().cloned().collect();
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let next = mul(&e, g);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen.len()
    }
}
