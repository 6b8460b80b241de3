//! Missing and minimal missing faces, the two-face complex `K̄`, and the join
//! decomposition of complexes whose minimal missing faces are disjoint.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::{combinations, Face};

/// The minimal missing faces of a complex, in graded order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MmfSet {
    pub faces: Vec<Face>,
    pub disjoint: bool,
}

impl MmfSet {
    pub fn new(mut faces: Vec<Face>) -> Self {
        faces.sort_by(Face::graded_cmp);
        faces.dedup();
        let disjoint = mutually_disjoint(&faces);
        MmfSet { faces, disjoint }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Union of the vertex sets of all minimal missing faces.
    pub fn support(&self) -> Face {
        self.faces.iter().fold(Face::EMPTY, |a, f| a.union(*f))
    }

    /// The lexicographically first pair `(σ1, σ2)`, `σ1 < σ2`, with `σ1 ∩ σ2 ≠ ∅`.
    pub fn first_intersecting_pair(&self) -> Option<(Face, Face)> {
        let mut sorted = self.faces.clone();
        sorted.sort();
        for (i, a) in sorted.iter().enumerate() {
            for b in &sorted[i + 1..] {
                if !a.is_disjoint(*b) {
                    return Some((*a, *b));
                }
            }
        }
        None
    }
}

/// True iff the faces are pairwise vertex-disjoint.
pub fn mutually_disjoint(faces: &[Face]) -> bool {
    let mut seen = Face::EMPTY;
    for f in faces {
        if !seen.is_disjoint(*f) {
            return false;
        }
        seen = seen.union(*f);
    }
    true
}

/// All non-faces of cardinality at most `max_card` on the non-ghost vertices, graded order.
pub fn missing_faces(k: &SimplicialComplex, max_card: usize) -> Vec<Face> {
    let ground = k.vertex_set();
    let mut out = Vec::new();
    for card in 1..=max_card.min(ground.len()) {
        out.extend(
            combinations(ground, card)
                .into_iter()
                .filter(|s| !k.contains(*s)),
        );
    }
    out.sort_by(Face::graded_cmp);
    out
}

fn mmf_over(k: &SimplicialComplex, ground: Face) -> MmfSet {
    let faces = k.face_bits();
    let mut found = BTreeSet::new();
    for &tau in &faces {
        for v in ground.difference(Face::from_bits(tau)).vertices() {
            let cand = Face::from_bits(tau).with(v);
            if faces.contains(&cand.bits()) {
                continue;
            }
            if cand.facets().all(|f| faces.contains(&f.bits())) {
                found.insert(cand);
            }
        }
    }
    MmfSet::new(found.into_iter().collect())
}

/// Minimal missing faces over the non-ghost vertices.
///
/// Candidates are `τ ∪ {v}` for faces `τ` (the empty face included) and
/// vertices `v ∉ τ`; a candidate qualifies when it is not a face but all its
/// codimension-one faces are. Ghost singletons are not reported; use
/// [`mmf_including_ghosts`] for that.
pub fn mmf(k: &SimplicialComplex) -> MmfSet {
    mmf_over(k, k.vertex_set())
}

/// Minimal missing faces over all of `[m]`; ghost vertices appear as singletons.
pub fn mmf_including_ghosts(k: &SimplicialComplex) -> MmfSet {
    mmf_over(k, Face::full(k.m()))
}

/// Reference enumeration over all `2^m` subsets. Intended for `m <= 12`.
pub fn mmf_brute_force(k: &SimplicialComplex, include_ghosts: bool) -> MmfSet {
    let ground = if include_ghosts {
        Face::full(k.m())
    } else {
        k.vertex_set()
    };
    let found = ground
        .subsets()
        .filter(|s| !s.is_empty() && !k.contains(*s))
        .filter(|s| s.facets().all(|t| k.contains(t)))
        .collect();
    MmfSet::new(found)
}

/// The complex on `[m]` whose faces are the subsets containing no element of `mmf`.
///
/// Facets are computed by splitting: every facet that contains a forbidden
/// face is replaced by its codimension-one faces avoiding one vertex of it.
pub fn complex_from_mmf(m: usize, mmf: &[Face]) -> Result<SimplicialComplex> {
    let mut facets = SimplicialComplex::simplex(m)?.facets().to_vec();
    for (i, a) in mmf.iter().enumerate() {
        a.check_range(m)?;
        if a.is_empty() {
            return Err(Error::Precondition(
                "the empty face cannot be a missing face".into(),
            ));
        }
        for b in &mmf[i + 1..] {
            if a.is_subset(*b) || b.is_subset(*a) {
                return Err(Error::ComparableFaces(a.to_string(), b.to_string()));
            }
        }
    }
    for sigma in mmf {
        let mut next = Vec::with_capacity(facets.len());
        for f in facets {
            if sigma.is_subset(f) {
                next.extend(sigma.vertices().map(|v| f.without(v)));
            } else {
                next.push(f);
            }
        }
        facets = SimplicialComplex::from_raw(m, next).facets().to_vec();
    }
    SimplicialComplex::from_facets(m, facets)
}

/// The complex on `[m]` whose minimal missing faces are exactly `sigma1` and `sigma2`.
///
/// Requires `I ≠ J`, `I ∪ J = [m]`, `I ∩ J ≠ ∅` for the vertex sets `I`, `J`,
/// and that neither contains the other. Every violated condition is reported.
pub fn build_kbar(m: usize, sigma1: Face, sigma2: Face) -> Result<SimplicialComplex> {
    SimplicialComplex::simplex(m)?;
    let mut problems = Vec::new();
    for (name, s) in [("sigma1", sigma1), ("sigma2", sigma2)] {
        if s.check_range(m).is_err() {
            problems.push(format!("{name} = {s} has vertices outside [1, {m}]"));
        }
    }
    if sigma1 == sigma2 {
        problems.push(format!("I = J = {sigma1}"));
    } else if sigma1.is_subset(sigma2) || sigma2.is_subset(sigma1) {
        problems.push(format!("{sigma1} and {sigma2} are comparable"));
    }
    if sigma1.union(sigma2) != Face::full(m) {
        problems.push(format!("I ∪ J = {} is not [1, {m}]", sigma1.union(sigma2)));
    }
    if sigma1.is_disjoint(sigma2) {
        problems.push("I ∩ J is empty".into());
    }
    if !problems.is_empty() {
        return Err(Error::InvalidKbar(problems));
    }
    complex_from_mmf(m, &[sigma1, sigma2])
}

/// `K = Δ(k0_vertices) ∗ ∂σ_1 ∗ ... ∗ ∂σ_n` for a complex with disjoint minimal missing faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JoinDecomposition {
    pub k0_vertices: Face,
    pub boundary_factors: Vec<Face>,
}

impl JoinDecomposition {
    /// Rebuilds the complex on `[m]` as an iterated join.
    pub fn reassemble(&self, m: usize) -> Result<SimplicialComplex> {
        let mut acc = if self.k0_vertices.is_empty() {
            SimplicialComplex::void(m)?
        } else {
            SimplicialComplex::from_facets(m, [self.k0_vertices])?
        };
        for sigma in &self.boundary_factors {
            acc = acc.join(&SimplicialComplex::boundary_of_simplex(*sigma, m)?)?;
        }
        Ok(acc)
    }
}

/// Splits `K` into a simplex on the vertices in no minimal missing face and
/// one boundary factor per minimal missing face.
pub fn join_decomposition(k: &SimplicialComplex) -> Result<JoinDecomposition> {
    if let Some(v) = k.ghosts().min_vertex() {
        return Err(Error::GhostVertex(v));
    }
    let set = mmf(k);
    if let Some((a, b)) = set.first_intersecting_pair() {
        return Err(Error::NotDisjoint(a.to_string(), b.to_string()));
    }
    let dec = JoinDecomposition {
        k0_vertices: Face::full(k.m()).difference(set.support()),
        boundary_factors: set.faces.clone(),
    };
    let rebuilt = dec.reassemble(k.m())?;
    if &rebuilt != k {
        return Err(Error::Invariant(format!(
            "join decomposition of {k} reassembles to {rebuilt}"
        )));
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(vs: &[u32]) -> Face {
        Face::new(vs.iter().copied()).unwrap()
    }

    fn k(m: usize, facets: &[&[u32]]) -> SimplicialComplex {
        SimplicialComplex::from_lists(m, facets).unwrap()
    }

    fn chorded_square() -> SimplicialComplex {
        k(4, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4], &[1, 3]])
    }

    #[test]
    fn missing_faces_cases() {
        let b = SimplicialComplex::boundary_of_simplex(f(&[1, 2, 3]), 3).unwrap();
        assert_eq!(missing_faces(&b, 3), vec![f(&[1, 2, 3])]);
        assert!(missing_faces(&SimplicialComplex::simplex(4).unwrap(), 4).is_empty());
        let path = k(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(missing_faces(&path, 3), vec![f(&[1, 3]), f(&[1, 2, 3])]);
        assert_eq!(missing_faces(&path, 2), vec![f(&[1, 3])]);
    }

    #[test]
    fn mmf_cases() {
        for m in 2..=6 {
            let b = SimplicialComplex::boundary_of_simplex(Face::full(m), m).unwrap();
            let s = mmf(&b);
            assert_eq!(s.faces, vec![Face::full(m)]);
            assert!(s.disjoint);
        }
        let s = mmf(&SimplicialComplex::simplex(5).unwrap());
        assert!(s.is_empty() && s.disjoint);

        let c = chorded_square();
        let s = mmf(&c);
        assert_eq!(s.faces, vec![f(&[2, 4]), f(&[1, 2, 3]), f(&[1, 3, 4])]);
        assert!(!s.disjoint);
        assert_eq!(s, mmf_brute_force(&c, false));
    }

    #[test]
    fn ghosts_only_with_opt_in() {
        let c = k(4, &[&[1, 2]]);
        assert!(mmf(&c).is_empty());
        assert_eq!(mmf_including_ghosts(&c).faces, vec![f(&[3]), f(&[4])]);
        assert_eq!(mmf_including_ghosts(&c), mmf_brute_force(&c, true));
    }

    #[test]
    fn disjointness() {
        assert!(mutually_disjoint(&[]));
        assert!(mutually_disjoint(&[f(&[1, 2]), f(&[3, 4])]));
        assert!(!mutually_disjoint(&[f(&[1, 2, 3]), f(&[3, 4])]));
    }

    #[test]
    fn complex_from_mmf_cases() {
        let b = complex_from_mmf(3, &[f(&[1, 2, 3])]).unwrap();
        assert_eq!(
            b,
            SimplicialComplex::boundary_of_simplex(f(&[1, 2, 3]), 3).unwrap()
        );
        assert_eq!(
            complex_from_mmf(4, &[]).unwrap(),
            SimplicialComplex::simplex(4).unwrap()
        );
        let given = vec![f(&[3, 4]), f(&[1, 2, 3])];
        let c = complex_from_mmf(4, &given).unwrap();
        assert_eq!(mmf(&c).faces, given);
        assert!(matches!(
            complex_from_mmf(4, &[f(&[1, 2]), f(&[1, 2, 3])]),
            Err(Error::ComparableFaces(_, _))
        ));
        let g = complex_from_mmf(3, &[f(&[3])]).unwrap();
        assert_eq!(g.ghosts(), f(&[3]));
    }

    #[test]
    fn kbar_cases() {
        let c = build_kbar(3, f(&[1, 2]), f(&[2, 3])).unwrap();
        assert_eq!(c.facets(), &[f(&[1, 3]), f(&[2])]);
        assert_eq!(mmf(&c).faces, vec![f(&[1, 2]), f(&[2, 3])]);

        let c = build_kbar(4, f(&[1, 2, 3]), f(&[3, 4])).unwrap();
        assert_eq!(c.facets(), &[f(&[1, 2, 4]), f(&[1, 3]), f(&[2, 3])]);
        // brute force over subsets of [4]
        let brute: BTreeSet<Face> = Face::full(4)
            .subsets()
            .filter(|s| !f(&[1, 2, 3]).is_subset(*s) && !f(&[3, 4]).is_subset(*s))
            .collect();
        assert_eq!(c.face_set(), brute);

        assert!(matches!(
            build_kbar(3, f(&[1, 2]), f(&[1, 2])),
            Err(Error::InvalidKbar(_))
        ));
        match build_kbar(5, f(&[1, 2]), f(&[3, 4])) {
            Err(Error::InvalidKbar(p)) => assert_eq!(p.len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(build_kbar(3, f(&[1, 2]), f(&[1, 2, 3])).is_err());
    }

    #[test]
    fn join_decomposition_cases() {
        let b = SimplicialComplex::boundary_of_simplex(Face::full(4), 4).unwrap();
        let d = join_decomposition(&b).unwrap();
        assert_eq!(d.k0_vertices, Face::EMPTY);
        assert_eq!(d.boundary_factors, vec![Face::full(4)]);

        let d = join_decomposition(&SimplicialComplex::simplex(4).unwrap()).unwrap();
        assert_eq!(d.k0_vertices, Face::full(4));
        assert!(d.boundary_factors.is_empty());

        let c = complex_from_mmf(5, &[f(&[1, 2]), f(&[3, 4])]).unwrap();
        let d = join_decomposition(&c).unwrap();
        assert_eq!(d.k0_vertices, f(&[5]));
        assert_eq!(d.boundary_factors, vec![f(&[1, 2]), f(&[3, 4])]);

        assert!(matches!(
            join_decomposition(&chorded_square()),
            Err(Error::NotDisjoint(_, _))
        ));
        assert!(matches!(
            join_decomposition(&k(3, &[&[1, 2]])),
            Err(Error::GhostVertex(3))
        ));
    }
}
