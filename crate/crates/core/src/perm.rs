//! Permutations of {1,2,3} (line rotations, orbit-data permutations) and
//! cycle-notation parsing for larger symmetric groups.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("cannot parse permutation {0:?}")]
    Syntax(String),
    #[error("index {index} outside 1..={degree}")]
    OutOfRange { index: usize, degree: usize },
    #[error("index {0} repeated")]
    RepeatedIndex(usize),
}

/// Element of S_3 stored by images of 0, 1, 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Perm3([u8; 3]);

impl Ord for Perm3 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index().cmp(&other.index())
    }
}

impl PartialOrd for Perm3 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Perm3 {
    pub const ID: Perm3 = Perm3([0, 1, 2]);

    /// The six elements in the order id, (12), (13), (23), (123), (132).
    pub fn all() -> [Perm3; 6] {
        [
            Perm3([0, 1, 2]),
            Perm3([1, 0, 2]),
            Perm3([2, 1, 0]),
            Perm3([0, 2, 1]),
            Perm3([1, 2, 0]),
            Perm3([2, 0, 1]),
        ]
    }

    pub fn from_images(images: [u8; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if i > 2 || std::mem::replace(&mut seen[i as usize], true) {
                return None;
            }
        }
        Some(Perm3(images))
    }

    /// Image of a 1-based index.
    pub fn apply(self, i: usize) -> usize {
        self.0[i - 1] as usize + 1
    }

    /// Image of a 0-based index.
    pub fn apply0(self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm3) -> Perm3 {
        Perm3([0, 1, 2].map(|i| self.0[other.0[i] as usize]))
    }

    pub fn inverse(self) -> Perm3 {
        let mut out = [0u8; 3];
        for i in 0..3 {
            out[self.0[i] as usize] = i as u8;
        }
        Perm3(out)
    }

    pub fn pow(self, k: i64) -> Perm3 {
        let base = if k < 0 { self.inverse() } else { self };
        (0..k.unsigned_abs() % 6).fold(Perm3::ID, |acc, _| acc.compose(base))
    }

    pub fn order(self) -> usize {
        (1..=6).find(|&k| self.pow(k as i64) == Perm3::ID).unwrap()
    }

    pub fn is_identity(self) -> bool {
        self == Perm3::ID
    }

    pub fn is_transposition(self) -> bool {
        self.order() == 2
    }

    pub fn is_cyclic(self) -> bool {
        self.order() == 3
    }

    /// Index of this element in [`Perm3::all`].
    pub fn index(self) -> usize {
        Perm3::all().iter().position(|&p| p == self).unwrap()
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.index() {
            0 => "id",
            1 => "(12)",
            2 => "(13)",
            3 => "(23)",
            4 => "(123)",
            _ => "(132)",
        };
        f.write_str(s)
    }
}

impl FromStr for Perm3 {
    type Err = PermError;
    fn from_str(s: &str) -> Result<Self, PermError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("id") || t.is_empty() {
            return Ok(Perm3::ID);
        }
        let perm = cycles_to_images(&parse_cycles(t)?, 3)?;
        Ok(Perm3([perm[0] as u8, perm[1] as u8, perm[2] as u8]))
    }
}

impl Serialize for Perm3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Perm3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse cycle notation such as `(5 4 3 2 1)(10 9 8)`, `(12)` or
/// `(1,2,3)`. Inside a cycle, whitespace or commas separate entries; with
/// neither, every digit is its own entry.
pub fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let err = || PermError::Syntax(s.to_string());
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body_start = rest.strip_prefix('(').ok_or_else(err)?;
        let close = body_start.find(')').ok_or_else(err)?;
        let body = body_start[..close].trim();
        let entries: Vec<usize> = if body.contains(|c: char| c.is_whitespace() || c == ',') {
            body.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| err()))
                .collect::<Result<_, _>>()?
        } else {
            body.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(err))
                .collect::<Result<_, _>>()?
        };
        cycles.push(entries);
        rest = body_start[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// 0-based image vector of the product of disjoint cycles on `1..=degree`.
pub fn cycles_to_images(cycles: &[Vec<usize>], degree: usize) -> Result<Vec<usize>, PermError> {
    let mut images: Vec<usize> = (0..degree).collect();
    let mut seen = vec![false; degree + 1];
    for cyc in cycles {
        for (k, &a) in cyc.iter().enumerate() {
            if a == 0 || a > degree {
                return Err(PermError::OutOfRange { index: a, degree });
            }
            if std::mem::replace(&mut seen[a], true) {
                return Err(PermError::RepeatedIndex(a));
            }
            let b = cyc[(k + 1) % cyc.len()];
            images[a - 1] = b - 1;
        }
    }
    Ok(images)
}

/// Disjoint-cycle notation of a 0-based image vector, 1-based labels,
/// fixed points omitted.
pub fn images_to_cycles(images: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; images.len()];
    let mut out = Vec::new();
    for start in 0..images.len() {
        if seen[start] || images[start] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i + 1);
            i = images[i];
        }
        out.push(cyc);
    }
    out
}

pub fn format_cycles(cycles: &[Vec<usize>]) -> String {
    if cycles.is_empty() {
        return "id".into();
    }
    cycles
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(ToString::to_string).collect();
            format!("({})", inner.join(" "))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for p in Perm3::all() {
            assert_eq!(p.to_string().parse::<Perm3>().unwrap(), p);
        }
        assert_eq!("(1 2 3)".parse::<Perm3>().unwrap(), "(123)".parse().unwrap());
        assert_eq!("(1,3)".parse::<Perm3>().unwrap().apply(1), 3);
        assert!("(12".parse::<Perm3>().is_err());
        assert!("(14)".parse::<Perm3>().is_err());
    }

    #[test]
    fn group_laws() {
        let c: Perm3 = "(123)".parse().unwrap();
        assert_eq!(c.apply(1), 2);
        assert_eq!(c.pow(2), "(132)".parse().unwrap());
        assert_eq!(c.pow(5), c.pow(2));
        assert_eq!(c.inverse(), c.pow(-1));
        for a in Perm3::all() {
            assert_eq!(a.compose(a.inverse()), Perm3::ID);
            for b in Perm3::all() {
                assert_eq!(a.compose(b).inverse(), b.inverse().compose(a.inverse()));
            }
        }
    }

    #[test]
    fn big_cycles() {
        let c = parse_cycles("(5 4 3 2 1) (10 9 8 7 6)").unwrap();
        let img = cycles_to_images(&c, 15).unwrap();
        assert_eq!(img[4], 3);
        assert_eq!(img[0], 4);
        assert_eq!(format_cycles(&images_to_cycles(&img)), "(1 5 4 3 2)(6 10 9 8 7)");
        let bad = parse_cycles("(5 9 3 7 1 10 9 8 7 6)").unwrap();
        assert_eq!(cycles_to_images(&bad, 15), Err(PermError::RepeatedIndex(9)));
    }
}
