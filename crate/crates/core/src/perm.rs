//! Permutations of the points `1..=degree`.
//!
//! Points act on the right: `p^(gh) = (p^g)^h`, so `g * h` applies `g` first.
//! Every permutation carries its degree and mixing degrees is an error, never
//! a silent extension.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Mul, MulAssign};

use crate::error::{Error, Result};

/// A point of the ambient set `1..=degree`.
pub type Point = usize;

/// A sorted, duplicate-free set of points.
pub type PointSet = BTreeSet<Point>;

/// A permutation stored as an image table.
///
/// `images[p]` is `p^g` for `1 <= p <= degree`; slot 0 is unused and always 0,
/// which lets the hot loops index by point directly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..=degree as u32).collect(),
        }
    }

    /// Builds a permutation from the images of `1, 2, ..., n` in order.
    pub fn from_images(images: &[Point]) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree + 1];
        let mut table = Vec::with_capacity(degree + 1);
        table.push(0);
        for &q in images {
            if q == 0 || q > degree {
                return Err(Error::PointOutOfRange { point: q, degree });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::Parse {
                    offset: 0,
                    message: format!("image {q} repeated"),
                });
            }
            table.push(q as u32);
        }
        Ok(Self { images: table })
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles<C: AsRef<[Point]>>(degree: usize, cycles: &[C]) -> Result<Self> {
        let mut images: Vec<u32> = (0..=degree as u32).collect();
        let mut used = vec![false; degree + 1];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if std::mem::replace(&mut used[p], true) {
                    return Err(Error::Parse {
                        offset: 0,
                        message: format!("point {p} repeated"),
                    });
                }
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(i + 1) % cycle.len()] as u32;
            }
        }
        Ok(Self { images })
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)` or `()`.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        parse_cycles(text, degree)
    }

    pub fn degree(&self) -> usize {
        self.images.len() - 1
    }

    /// `p^g`, panicking if `p` is out of range.
    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        debug_assert!(p >= 1 && p <= self.degree());
        self.images[p] as Point
    }

    /// `p^g`, checked.
    pub fn image(&self, p: Point) -> Result<Point> {
        if p == 0 || p > self.degree() {
            return Err(Error::PointOutOfRange {
                point: p,
                degree: self.degree(),
            });
        }
        Ok(self.images[p] as Point)
    }

    /// Images of `1..=degree` in order.
    pub fn images(&self) -> impl Iterator<Item = Point> + '_ {
        self.images[1..].iter().map(|&q| q as Point)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(p, &q)| p == q as usize)
    }

    #[inline]
    pub fn moves(&self, p: Point) -> bool {
        self.images[p] as Point != p
    }

    pub fn moves_any<'a, I: IntoIterator<Item = &'a Point>>(&self, points: I) -> bool {
        points.into_iter().any(|&p| self.moves(p))
    }

    pub fn support(&self) -> PointSet {
        (1..=self.degree()).filter(|&p| self.moves(p)).collect()
    }

    /// `self * other`, i.e. `self` first, then `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        Ok(self * other)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u32; self.images.len()];
        for (p, &q) in self.images.iter().enumerate() {
            images[q as usize] = p as u32;
        }
        Self { images }
    }

    /// `s^-1 * self * s`: relabels every point `p` as `p^s`.
    pub fn conjugate(&self, s: &Self) -> Result<Self> {
        self.check_degree(s)?;
        Ok(self.conjugate_by(s))
    }

    pub(crate) fn conjugate_by(&self, s: &Self) -> Self {
        let mut images = vec![0u32; self.images.len()];
        for (p, &q) in self.images.iter().enumerate() {
            images[s.images[p] as usize] = s.images[q as usize];
        }
        Self { images }
    }

    /// `self^-1 * other^-1 * self * other`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        Ok(&(&self.inverse() * &other.inverse()) * &(self * other))
    }

    /// Agrees with `self` on `delta` and fixes everything else. The degree is
    /// kept, so the result lives in the same symmetric group.
    pub fn restrict(&self, delta: &PointSet) -> Result<Self> {
        for &p in delta {
            let q = self.image(p)?;
            if !delta.contains(&q) {
                return Err(Error::NotInvariant { point: p });
            }
        }
        Ok(self.restrict_to(delta.iter().copied()))
    }

    /// Restriction without the invariance check. The caller guarantees the
    /// points form a union of cycles of `self`.
    pub(crate) fn restrict_to<I: IntoIterator<Item = Point>>(&self, points: I) -> Self {
        let mut images: Vec<u32> = (0..self.images.len() as u32).collect();
        for p in points {
            images[p] = self.images[p];
        }
        Self { images }
    }

    /// Disjoint cycles of length at least two, each starting at its smallest
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = Vec::new();
        for start in 1..self.images.len() {
            if seen[start] || !self.moves(start) {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Same permutation acting on `degree` points, which must not be smaller
    /// than the largest moved point.
    pub fn with_degree(&self, degree: usize) -> Result<Self> {
        if let Some(&p) = self.support().iter().next_back() {
            if p > degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
        }
        let mut images: Vec<u32> = (0..=degree as u32).collect();
        let keep = degree.min(self.degree());
        images[..=keep].copy_from_slice(&self.images[..=keep]);
        Ok(Self { images })
    }

    /// Moves every point up by `offset`, growing the degree to `degree`.
    pub(crate) fn shifted(&self, offset: usize, degree: usize) -> Self {
        debug_assert!(self.degree() + offset <= degree);
        let mut images: Vec<u32> = (0..=degree as u32).collect();
        for p in 1..=self.degree() {
            images[p + offset] = (self.apply(p) + offset) as u32;
        }
        Self { images }
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Panics on a degree mismatch; use [`Permutation::compose`] for a checked product.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.images.len(), rhs.images.len(), "degree mismatch");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&q| rhs.images[q as usize])
                .collect(),
        }
    }
}

impl MulAssign<&Permutation> for Permutation {
    fn mul_assign(&mut self, rhs: &Permutation) {
        assert_eq!(self.images.len(), rhs.images.len(), "degree mismatch");
        for q in self.images.iter_mut() {
            *q = rhs.images[*q as usize];
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_cycles(self))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", format_cycles(self), self.degree())
    }
}

/// Canonical cycle notation: `()` for the identity, otherwise cycles ordered by
/// smallest moved point with each cycle rotated to start there.
pub fn format_cycles(g: &Permutation) -> String {
    let cycles = g.cycles();
    if cycles.is_empty() {
        return "()".to_string();
    }
    let mut out = String::new();
    for cycle in cycles {
        out.push('(');
        for (i, p) in cycle.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&p.to_string());
        }
        out.push(')');
    }
    out
}

/// Parses `perm := "()" | cycle+`, `cycle := "(" int ("," int)+ ")"`.
/// Whitespace between tokens is ignored; cycles must be disjoint.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    let tokens = tokenize(text)?;
    let err = |offset: usize, message: &str| Error::Parse {
        offset,
        message: message.to_string(),
    };
    if tokens.is_empty() {
        return Err(err(0, "empty permutation"));
    }
    if let [(Token::Open, _), (Token::Close, _)] = tokens.as_slice() {
        return Ok(Permutation::identity(degree));
    }

    let mut images: Vec<u32> = (0..=degree as u32).collect();
    let mut used = vec![false; degree + 1];
    let mut pos = 0;
    while pos < tokens.len() {
        let (tok, off) = tokens[pos];
        if tok != Token::Open {
            return Err(err(off, "expected '('"));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            match tokens.get(pos) {
                Some(&(Token::Int(p), off)) => {
                    if p == 0 || p > degree {
                        return Err(Error::PointOutOfRange { point: p, degree });
                    }
                    if std::mem::replace(&mut used[p], true) {
                        return Err(err(off, &format!("point {p} repeated")));
                    }
                    cycle.push(p);
                    pos += 1;
                }
                Some(&(_, off)) => return Err(err(off, "expected a point")),
                None => return Err(err(text.len(), "unterminated cycle")),
            }
            match tokens.get(pos) {
                Some(&(Token::Comma, _)) => pos += 1,
                Some(&(Token::Close, off)) => {
                    if cycle.len() < 2 {
                        return Err(err(off, "a cycle needs at least two points"));
                    }
                    pos += 1;
                    break;
                }
                Some(&(_, off)) => return Err(err(off, "expected ',' or ')'")),
                None => return Err(err(text.len(), "unterminated cycle")),
            }
        }
        for (i, &p) in cycle.iter().enumerate() {
            images[p] = cycle[(i + 1) % cycle.len()] as u32;
        }
    }
    Ok(Permutation { images })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Comma,
    Int(usize),
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'(' => tokens.push((Token::Open, i)),
            b')' => tokens.push((Token::Close, i)),
            b',' => tokens.push((Token::Comma, i)),
            c if c.is_ascii_whitespace() => {}
            c if c.is_ascii_digit() => {
                let start = i;
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let value = text[start..=i].parse::<usize>().map_err(|_| Error::Parse {
                    offset: start,
                    message: "point too large".into(),
                })?;
                tokens.push((Token::Int(value), start));
            }
            _ => {
                return Err(Error::Parse {
                    offset: i,
                    message: format!(
                        "unexpected character {:?}",
                        text[i..].chars().next().unwrap()
                    ),
                })
            }
        }
        i += 1;
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, n: usize) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    fn set(points: &[Point]) -> PointSet {
        points.iter().copied().collect()
    }

    // Image-table product straight from the definition p^(gh) = (p^g)^h.
    fn table_product(g: &[Point], h: &[Point]) -> Vec<Point> {
        g.iter().map(|&q| h[q - 1]).collect()
    }

    #[test]
    fn compose_examples() {
        let c = p("(1,2,3)", 3);
        assert_eq!(c.compose(&Permutation::identity(3)).unwrap(), c);
        assert!(c.compose(&p("(1,3,2)", 3)).unwrap().is_identity());

        let x1 = p("(1,2,3)(7,9,8)(10,12,11)", 12);
        let x2 = p("(4,5,6)(7,8,9)(10,11,12)", 12);
        let g: Vec<_> = x1.images().collect();
        let h: Vec<_> = x2.images().collect();
        let expected = Permutation::from_images(&table_product(&g, &h)).unwrap();
        assert_eq!(expected, p("(1,2,3)(4,5,6)", 12));
        assert_eq!(x1.compose(&x2).unwrap(), expected);
    }

    #[test]
    fn compose_degree_mismatch() {
        let err = p("(1,2)", 2).compose(&p("(1,2)", 3)).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { left: 2, right: 3 });
    }

    #[test]
    fn inverse_examples() {
        assert!(Permutation::identity(4).inverse().is_identity());
        assert_eq!(p("(1,2,3)", 3).inverse(), p("(1,3,2)", 3));
        assert_eq!(p("(2,5)(3,4)", 5).inverse(), p("(2,5)(3,4)", 5));
    }

    #[test]
    fn image_examples() {
        assert_eq!(p("(1,2,4,5)", 5).image(1).unwrap(), 2);
        assert_eq!(Permutation::identity(7).image(7).unwrap(), 7);
        assert_eq!(p("(1,2,3)(7,9,8)(10,12,11)", 12).image(7).unwrap(), 9);
        assert!(matches!(
            Permutation::identity(3).image(4),
            Err(Error::PointOutOfRange {
                point: 4,
                degree: 3
            })
        ));
    }

    #[test]
    fn support_examples() {
        assert!(Permutation::identity(5).support().is_empty());
        assert_eq!(
            p("(5,6)(8,9)(11,12)", 12).support(),
            set(&[5, 6, 8, 9, 11, 12])
        );
        assert_eq!(
            p("(7,8,9)(10,11,12)", 12).support(),
            set(&[7, 8, 9, 10, 11, 12])
        );
    }

    #[test]
    fn restrict_examples() {
        let x1 = p("(1,2,3)(7,9,8)(10,12,11)", 12);
        let x2 = p("(4,5,6)(7,8,9)(10,11,12)", 12);
        assert_eq!(x1.restrict(&set(&[1, 2, 3])).unwrap(), p("(1,2,3)", 12));
        assert_eq!(x2.restrict(&set(&[7, 8, 9])).unwrap(), p("(7,8,9)", 12));
        assert!(Permutation::identity(6)
            .restrict(&set(&[2, 3]))
            .unwrap()
            .is_identity());
        assert_eq!(
            x1.restrict(&set(&[1, 2])).unwrap_err(),
            Error::NotInvariant { point: 2 }
        );
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(
            p("(1,2)", 3).conjugate(&p("(1,3)", 3)).unwrap(),
            p("(2,3)", 3)
        );
        let g = p("(1,4)(2,3,5)", 5);
        assert_eq!(g.conjugate(&Permutation::identity(5)).unwrap(), g);

        // Oracle: s^-1 g s as an image-table product.
        let g = p("(1,2,3)", 3);
        let s = p("(1,2)", 3);
        let tab = |x: &Permutation| x.images().collect::<Vec<_>>();
        let expected = table_product(&table_product(&tab(&s.inverse()), &tab(&g)), &tab(&s));
        assert_eq!(expected, vec![3, 1, 2]);
        assert_eq!(g.conjugate(&s).unwrap(), p("(1,3,2)", 3));
    }

    #[test]
    fn parse_and_format() {
        let x1 = Permutation::from_cycles(12, &[vec![1, 2, 3], vec![7, 9, 8], vec![10, 12, 11]])
            .unwrap();
        assert_eq!(p("(1,2,3)(7,9,8)(10,12,11)", 12), x1);
        assert!(p("()", 5).is_identity());
        assert_eq!(format_cycles(&p("(3,1,2)", 3)), "(1,2,3)");
        assert_eq!(format_cycles(&Permutation::identity(4)), "()");
        assert_eq!(format_cycles(&p(" ( 9 ,8)(2, 4 ,3) ", 9)), "(2,4,3)(8,9)");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_cycles("(1,2", 3), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_cycles("(1,2)(2,3)", 3),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_cycles("(1,1)", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("(1)", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("(1 2)", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("(a,b)", 3), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_cycles("(0,1)", 3),
            Err(Error::PointOutOfRange { .. })
        ));
        assert!(matches!(
            parse_cycles("(1,4)", 3),
            Err(Error::PointOutOfRange {
                point: 4,
                degree: 3
            })
        ));
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((1..=n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(&v).unwrap())
    }

    proptest! {
        #[test]
        fn associativity(a in arb_perm(9), b in arb_perm(9), c in arb_perm(9)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn inverse_cancels(g in arb_perm(12)) {
            prop_assert!((&g * &g.inverse()).is_identity());
            prop_assert!((&g.inverse() * &g).is_identity());
        }

        #[test]
        fn conjugation_moves_support(g in arb_perm(10), s in arb_perm(10)) {
            let c = g.conjugate(&s).unwrap();
            let mapped: PointSet = g.support().iter().map(|&q| s.apply(q)).collect();
            prop_assert_eq!(c.support(), mapped);
            prop_assert_eq!(c, &(&s.inverse() * &g) * &s);
        }

        #[test]
        fn split_restrictions_recompose(g in arb_perm(10), mask in proptest::collection::vec(any::<bool>(), 10)) {
            // Choose whole cycles so both halves are invariant.
            let mut delta = PointSet::new();
            for (cycle, pick) in g.cycles().into_iter().zip(mask.iter().cycle()) {
                if *pick {
                    delta.extend(cycle);
                }
            }
            let rest: PointSet = g.support().difference(&delta).copied().collect();
            let a = g.restrict(&delta).unwrap();
            let b = g.restrict(&rest).unwrap();
            prop_assert_eq!(&a * &b, g);
        }

        #[test]
        fn format_round_trip(g in arb_perm(15)) {
            let text = format_cycles(&g);
            prop_assert_eq!(parse_cycles(&text, 15).unwrap(), g);
        }
    }
}
