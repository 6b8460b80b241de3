use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported vertex label.
pub const MAX_VERTEX: u32 = 63;

/// A set of vertices in `[1, 63]`, stored as a bitmask (bit `v - 1` is vertex `v`).
///
/// Iteration always yields vertices in increasing order, so a face is the
/// strictly increasing sequence `(i_1, ..., i_k)`. The empty face is
/// representable and is a member of every complex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    /// Builds a face from vertex labels. Order and repetition in the input are irrelevant.
    pub fn new<I: IntoIterator<Item = u32>>(vertices: I) -> Result<Face> {
        let mut bits = 0u64;
        for v in vertices {
            if v == 0 || v > MAX_VERTEX {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    m: MAX_VERTEX as usize,
                });
            }
            bits |= 1 << (v - 1);
        }
        Ok(Face(bits))
    }

    /// Builds a face and checks that every vertex lies in `[1, m]`.
    pub fn within<I: IntoIterator<Item = u32>>(vertices: I, m: usize) -> Result<Face> {
        let face = Face::new(vertices)?;
        face.check_range(m)?;
        Ok(face)
    }

    pub const fn from_bits(bits: u64) -> Face {
        Face(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The face `{1, ..., m}`.
    pub fn full(m: usize) -> Face {
        debug_assert!(m <= MAX_VERTEX as usize);
        Face((1u64 << m) - 1)
    }

    pub fn singleton(v: u32) -> Face {
        debug_assert!((1..=MAX_VERTEX).contains(&v));
        Face(1 << (v - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: u32) -> bool {
        (1..=MAX_VERTEX).contains(&v) && self.0 & (1 << (v - 1)) != 0
    }

    pub fn is_subset(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Face) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn difference(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn with(self, v: u32) -> Face {
        self.union(Face::singleton(v))
    }

    pub fn without(self, v: u32) -> Face {
        self.difference(Face::singleton(v))
    }

    /// Largest vertex label, or 0 for the empty face.
    pub fn max_vertex(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    pub fn min_vertex(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    pub fn check_range(self, m: usize) -> Result<()> {
        let top = self.max_vertex();
        if top as usize > m {
            return Err(Error::VertexOutOfRange { vertex: top, m });
        }
        Ok(())
    }

    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.vertices().collect()
    }

    /// Every subset of this face, the empty face included.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// The codimension-one faces `self \ {v}`.
    pub fn facets(self) -> impl Iterator<Item = Face> {
        self.vertices().map(move |v| self.without(v))
    }

    /// Orders by cardinality first, then lexicographically.
    pub fn graded_cmp(&self, other: &Face) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
    }
}

impl Ord for Face {
    /// Lexicographic order on the increasing vertex sequences, so `{1,2,3} < {1,3} < {2}`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.vertices())
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let vs = Vec::<u32>::deserialize(deserializer)?;
        Face::new(vs).map_err(serde::de::Error::custom)
    }
}

/// Increasing iterator over the vertices of a face.
#[derive(Clone)]
pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(v + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Vertices {}

/// Iterator over all submasks of a mask, in increasing numeric order.
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = Face;

    fn next(&mut self) -> Option<Face> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(Face(cur))
    }
}

/// All `k`-element subsets of `ground`, in increasing numeric order of bitmask.
pub fn combinations(ground: Face, k: usize) -> Vec<Face> {
    let verts = ground.to_vec();
    let n = verts.len();
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Face(idx.iter().fold(0u64, |b, &i| b | 1 << (verts[i] - 1))));
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(vs: &[u32]) -> Face {
        Face::new(vs.iter().copied()).unwrap()
    }

    #[test]
    fn vertices_are_sorted_and_deduplicated() {
        assert_eq!(f(&[3, 1, 3, 2]).to_vec(), vec![1, 2, 3]);
        assert_eq!(f(&[63]).to_vec(), vec![63]);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Face::new([0]).is_err());
        assert!(Face::new([64]).is_err());
        assert!(Face::within([1, 4], 3).is_err());
    }

    #[test]
    fn lexicographic_and_graded_order() {
        let mut v = vec![f(&[2]), f(&[1, 3]), f(&[1, 2, 3])];
        v.sort();
        assert_eq!(v, vec![f(&[1, 2, 3]), f(&[1, 3]), f(&[2])]);
        v.sort_by(Face::graded_cmp);
        assert_eq!(v, vec![f(&[2]), f(&[1, 3]), f(&[1, 2, 3])]);
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s: Vec<Face> = f(&[1, 3, 4]).subsets().collect();
        assert_eq!(s.len(), 8);
        assert!(s.contains(&Face::EMPTY));
        assert!(s.contains(&f(&[1, 4])));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(Face::full(5), 2).len(), 10);
        assert_eq!(combinations(Face::full(5), 0), vec![Face::EMPTY]);
        assert!(combinations(Face::full(2), 3).is_empty());
        assert_eq!(combinations(f(&[2, 5, 7]), 3), vec![f(&[2, 5, 7])]);
    }

    #[test]
    fn display_and_serde() {
        assert_eq!(f(&[1, 2, 4]).to_string(), "{1,2,4}");
        assert_eq!(serde_json::to_string(&f(&[4, 1])).unwrap(), "[1,4]");
        let back: Face = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(back, f(&[1, 2]));
    }
}
