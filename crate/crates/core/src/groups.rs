//! Built-in transitive groups used as inner groups for random instances.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::stabchain::GroupHandle;

fn cycle(degree: usize, points: impl IntoIterator<Item = usize>) -> Permutation {
    let points: Vec<usize> = points.into_iter().collect();
    if points.len() < 2 {
        return Permutation::identity(degree);
    }
    Permutation::from_cycles(degree, &[points]).expect("valid cycle")
}

/// Cyclic group `C_n` on `n` points.
pub fn cyclic(n: usize) -> Result<GroupHandle> {
    check_degree(n, 2)?;
    GroupHandle::new(&[cycle(n, 1..=n)], n)
}

/// Dihedral group of order `2n` acting on `n` points (`D8` acts on 4 points).
pub fn dihedral(n: usize) -> Result<GroupHandle> {
    check_degree(n, 3)?;
    let rotation = cycle(n, 1..=n);
    let pairs: Vec<Vec<usize>> = (2..=n)
        .zip((2..=n).rev())
        .take_while(|(a, b)| a < b)
        .map(|(a, b)| vec![a, b])
        .collect();
    let reflection = Permutation::from_cycles(n, &pairs)?;
    GroupHandle::new(&[rotation, reflection], n)
}

/// Alternating group `A_n`.
pub fn alternating(n: usize) -> Result<GroupHandle> {
    check_degree(n, 3)?;
    let three = cycle(n, [1, 2, 3]);
    let long = if n % 2 == 1 {
        cycle(n, 1..=n)
    } else {
        cycle(n, 2..=n)
    };
    GroupHandle::new(&[three, long], n)
}

/// Symmetric group `S_n`.
pub fn symmetric(n: usize) -> Result<GroupHandle> {
    check_degree(n, 2)?;
    GroupHandle::new(&[cycle(n, [1, 2]), cycle(n, 1..=n)], n)
}

/// Parses names such as `C3`, `D8` (order 8, degree 4), `A4` or `S4`.
pub fn named(name: &str) -> Result<GroupHandle> {
    let bad = || Error::InvalidInstance(format!("unknown group name {name:?}"));
    let mut chars = name.chars();
    let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    match family {
        'C' => cyclic(n),
        'D' if n.is_multiple_of(2) => dihedral(n / 2),
        'A' => alternating(n),
        'S' => symmetric(n),
        _ => Err(bad()),
    }
}

fn check_degree(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidInstance(format!("degree {n} is below {min}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn order(name: &str) -> BigUint {
        named(name).unwrap().order().clone()
    }

    #[test]
    fn orders() {
        assert_eq!(order("C3"), BigUint::from(3u32));
        assert_eq!(order("D8"), BigUint::from(8u32));
        assert_eq!(order("D10"), BigUint::from(10u32));
        assert_eq!(order("D32"), BigUint::from(32u32));
        assert_eq!(order("A3"), BigUint::from(3u32));
        assert_eq!(order("A4"), BigUint::from(12u32));
        assert_eq!(order("A5"), BigUint::from(60u32));
        assert_eq!(order("A6"), BigUint::from(360u32));
        assert_eq!(order("S4"), BigUint::from(24u32));
        assert_eq!(order("S5"), BigUint::from(120u32));
    }

    #[test]
    fn transitive() {
        for name in ["C5", "D8", "A4", "S4", "A7"] {
            assert!(named(name).unwrap().is_transitive_on_support());
        }
    }

    #[test]
    fn bad_names() {
        assert!(named("D7").is_err());
        assert!(named("Q8").is_err());
        assert!(named("S").is_err());
        assert!(named("C1").is_err());
    }
}
