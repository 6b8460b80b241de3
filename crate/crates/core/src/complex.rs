use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face::{Face, MAX_VERTEX};

/// A simplicial complex on the vertex set `[m]`, stored by its facets.
///
/// Facets are kept maximal and sorted lexicographically, so two complexes are
/// equal exactly when they have the same face set on the same `m`. The empty
/// face is always implicitly present. Vertices `v` with `{v}` not a face are
/// ghost vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    m: usize,
    facets: Vec<Face>,
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_VERTEX as usize {
        return Err(Error::InvalidVertexCount(m));
    }
    Ok(())
}

/// Keeps the inclusion-maximal nonempty faces, sorted lexicographically.
fn maximal(mut faces: Vec<Face>) -> Vec<Face> {
    faces.retain(|f| !f.is_empty());
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    faces.dedup();
    let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
    for f in faces {
        if !kept.iter().any(|k| f.is_subset(*k)) {
            kept.push(f);
        }
    }
    kept.sort();
    kept
}

impl SimplicialComplex {
    /// Downward closure of `facets` on `[m]`. Non-maximal or repeated facets are absorbed.
    pub fn from_facets<I: IntoIterator<Item = Face>>(m: usize, facets: I) -> Result<Self> {
        check_m(m)?;
        let facets: Vec<Face> = facets.into_iter().collect();
        for f in &facets {
            f.check_range(m)?;
        }
        Ok(Self::from_raw(m, facets))
    }

    /// Convenience form of [`from_facets`](Self::from_facets) taking vertex lists.
    pub fn from_lists(m: usize, facets: &[&[u32]]) -> Result<Self> {
        let faces = facets
            .iter()
            .map(|f| Face::within(f.iter().copied(), m))
            .collect::<Result<Vec<_>>>()?;
        Self::from_facets(m, faces)
    }

    pub(crate) fn from_raw(m: usize, facets: Vec<Face>) -> Self {
        SimplicialComplex {
            m,
            facets: maximal(facets),
        }
    }

    /// The full simplex `Δ^{m-1}` on `[m]`.
    pub fn simplex(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Self::from_raw(m, vec![Face::full(m)]))
    }

    /// The boundary `∂σ` as a complex on `[m]`; vertices outside `σ` are ghosts.
    ///
    /// For a single vertex the boundary has no nonempty faces, so the result
    /// is the complex consisting of the empty face only.
    pub fn boundary_of_simplex(sigma: Face, m: usize) -> Result<Self> {
        check_m(m)?;
        sigma.check_range(m)?;
        if sigma.is_empty() {
            return Err(Error::Precondition("boundary of the empty face".into()));
        }
        Ok(Self::from_raw(m, sigma.facets().collect()))
    }

    /// The complex with no nonempty faces.
    pub fn void(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(SimplicialComplex {
            m,
            facets: Vec::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    /// True when the complex has no nonempty face.
    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// Vertices whose singleton is a face.
    pub fn vertex_set(&self) -> Face {
        self.facets.iter().fold(Face::EMPTY, |acc, f| acc.union(*f))
    }

    pub fn ghosts(&self) -> Face {
        Face::full(self.m).difference(self.vertex_set())
    }

    pub fn has_ghosts(&self) -> bool {
        !self.ghosts().is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    /// Membership test without range checking; faces outside `[m]` are never members.
    pub fn contains(&self, sigma: Face) -> bool {
        sigma.is_empty() || self.facets.iter().any(|f| sigma.is_subset(*f))
    }

    pub fn is_face(&self, sigma: Face) -> Result<bool> {
        sigma.check_range(self.m)?;
        Ok(self.contains(sigma))
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v as usize > self.m {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                m: self.m,
            });
        }
        Ok(())
    }

    fn check_present(&self, v: u32) -> Result<()> {
        self.check_vertex(v)?;
        if !self.contains(Face::singleton(v)) {
            return Err(Error::GhostVertex(v));
        }
        Ok(())
    }

    /// `star_K(v) = {τ ∈ K : τ ∪ {v} ∈ K}`.
    pub fn star(&self, v: u32) -> Result<Self> {
        self.check_present(v)?;
        let facets = self
            .facets
            .iter()
            .copied()
            .filter(|f| f.contains(v))
            .collect();
        Ok(Self::from_raw(self.m, facets))
    }

    /// `K \ v = {τ ∈ K : v ∉ τ}`; `v` becomes a ghost.
    pub fn deletion(&self, v: u32) -> Result<Self> {
        self.check_vertex(v)?;
        let facets = self.facets.iter().map(|f| f.without(v)).collect();
        Ok(Self::from_raw(self.m, facets))
    }

    /// `link_K(v) = star_K(v) ∩ (K \ v)`.
    pub fn link(&self, v: u32) -> Result<Self> {
        self.check_present(v)?;
        let facets = self
            .facets
            .iter()
            .filter(|f| f.contains(v))
            .map(|f| f.without(v))
            .collect();
        Ok(Self::from_raw(self.m, facets))
    }

    /// The join of two complexes on disjoint vertex sets of a common `[m]`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::VertexCountMismatch(self.m, other.m));
        }
        let shared = self.vertex_set().intersection(other.vertex_set());
        if !shared.is_empty() {
            return Err(Error::OverlappingJoin(shared.to_string()));
        }
        if self.is_void() {
            return Ok(other.clone());
        }
        if other.is_void() {
            return Ok(self.clone());
        }
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                facets.push(a.union(*b));
            }
        }
        Ok(Self::from_raw(self.m, facets))
    }

    /// Faces of `K` lying inside `vertices`, kept on the same `[m]`.
    pub fn restrict(&self, vertices: Face) -> Self {
        let facets = self
            .facets
            .iter()
            .map(|f| f.intersection(vertices))
            .collect();
        Self::from_raw(self.m, facets)
    }

    /// The full subcomplex `K_I`, relabeled order-preservingly onto `[|I|]`.
    ///
    /// The second component maps new labels to old ones: entry `j - 1` is the
    /// original vertex carrying new label `j`.
    pub fn full_subcomplex(&self, vertices: Face) -> Result<(Self, Vec<u32>)> {
        vertices.check_range(self.m)?;
        let map = vertices.to_vec();
        check_m(map.len())?;
        let facets = self
            .facets
            .iter()
            .map(|f| relabel_into(f.intersection(vertices), &map))
            .collect();
        Ok((Self::from_raw(map.len(), facets), map))
    }

    /// Faces present in either complex.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::VertexCountMismatch(self.m, other.m));
        }
        let facets = self.facets.iter().chain(&other.facets).copied().collect();
        Ok(Self::from_raw(self.m, facets))
    }

    /// Faces present in both complexes.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::VertexCountMismatch(self.m, other.m));
        }
        let mut facets = Vec::new();
        for a in &self.facets {
            for b in &other.facets {
                facets.push(a.intersection(*b));
            }
        }
        Ok(Self::from_raw(self.m, facets))
    }

    /// Same complex viewed on a larger vertex set `[m]`, new vertices being ghosts.
    pub fn widen(&self, m: usize) -> Result<Self> {
        check_m(m)?;
        if m < self.m {
            return Err(Error::Precondition(format!(
                "cannot widen from {} to {m} vertices",
                self.m
            )));
        }
        Ok(SimplicialComplex {
            m,
            facets: self.facets.clone(),
        })
    }

    /// Moves vertex `j` to `map[j - 1]` on the target vertex set `[m]`.
    pub fn relabel(&self, map: &[u32], m: usize) -> Result<Self> {
        check_m(m)?;
        if map.len() != self.m {
            return Err(Error::Precondition(format!(
                "relabeling map has {} entries for {} vertices",
                map.len(),
                self.m
            )));
        }
        let image = Face::new(map.iter().copied())?;
        image.check_range(m)?;
        if image.len() != map.len() {
            return Err(Error::Precondition(
                "relabeling map is not injective".into(),
            ));
        }
        let facets = self.facets.iter().map(|f| relabel_out(*f, map)).collect();
        Ok(Self::from_raw(m, facets))
    }

    /// True iff the complex has exactly one facet.
    ///
    /// Ghost vertices are ignored; relabel onto the vertex set first to also
    /// demand that the facet covers `[m]`.
    pub fn is_simplex(&self) -> bool {
        self.facets.len() == 1
    }

    /// All nonempty faces in graded order. Exponential in facet size.
    pub fn faces(&self) -> Vec<Face> {
        self.face_set()
            .into_iter()
            .filter(|f| !f.is_empty())
            .collect_graded()
    }

    /// All faces including the empty face, as a set.
    pub fn face_set(&self) -> BTreeSet<Face> {
        let mut out = BTreeSet::new();
        out.insert(Face::EMPTY);
        for f in &self.facets {
            out.extend(f.subsets());
        }
        out
    }

    /// Faces as raw bitmasks, for fast membership during enumeration.
    pub(crate) fn face_bits(&self) -> std::collections::HashSet<u64> {
        let mut out = std::collections::HashSet::new();
        out.insert(0);
        for f in &self.facets {
            for s in f.subsets() {
                out.insert(s.bits());
            }
        }
        out
    }
}

trait CollectGraded {
    fn collect_graded(self) -> Vec<Face>;
}

impl<I: Iterator<Item = Face>> CollectGraded for I {
    fn collect_graded(self) -> Vec<Face> {
        let mut v: Vec<Face> = self.collect();
        v.sort_by(Face::graded_cmp);
        v
    }
}

fn relabel_into(face: Face, map: &[u32]) -> Face {
    let mut bits = 0u64;
    for (j, old) in map.iter().enumerate() {
        if face.contains(*old) {
            bits |= 1 << j;
        }
    }
    Face::from_bits(bits)
}

fn relabel_out(face: Face, map: &[u32]) -> Face {
    face.vertices()
        .fold(Face::EMPTY, |acc, v| acc.with(map[v as usize - 1]))
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K[m={}](", self.m)?;
        for (i, facet) in self.facets.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{facet}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// On-disk form: `{"m": <int>, "facets": [[v, ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    facets: Vec<Vec<u32>>,
    m: usize,
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexDoc {
            facets: self.facets.iter().map(|f| f.to_vec()).collect(),
            m: self.m,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ComplexDoc::deserialize(d)?;
        let facets = doc
            .facets
            .into_iter()
            .map(Face::new)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SimplicialComplex::from_facets(doc.m, facets).map_err(serde::de::Error::custom)
    }
}
