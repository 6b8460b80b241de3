//! Formal homotopy types and the elliptic/hyperbolic classifier.
//!
//! Spaces are symbolic trees. The only simplifications applied are
//! suspension of a sphere, smash products of spheres, flattening of nested
//! products/wedges/smashes, and removal of contractible factors from products
//! and summands from wedges.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::mmf::{self, build_kbar, MmfSet};

/// Rational type of the homotopy fibre `Y_i` of `A_i → X_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FibreType {
    /// Rationally contractible. Not admissible for classification.
    Trivial,
    /// Rationally a sphere `S^d`.
    Sphere(u32),
    /// Rational homotopy of total rank at least the given bound (at least 2).
    Big(u32),
}

/// Rational description of the pair `(X_i, A_i)` at one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexPair {
    /// `(D^n, S^{n-1})` with `n >= 2`.
    DiskSphere(u32),
    General {
        x_elliptic: bool,
        /// Degrees `q` with `π_q(X_i) ⊗ Q ≠ 0`, repeated by rank.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x_rational_degrees: Option<Vec<u32>>,
        y_rational: FibreType,
    },
}

impl VertexPair {
    /// The fibre `Y`; for `(D^n, S^{n-1})` this is `S^{n-1}`.
    pub fn fibre(&self) -> FibreType {
        match self {
            VertexPair::DiskSphere(n) => FibreType::Sphere(n - 1),
            VertexPair::General { y_rational, .. } => *y_rational,
        }
    }

    pub fn x_elliptic(&self) -> bool {
        match self {
            VertexPair::DiskSphere(_) => true,
            VertexPair::General { x_elliptic, .. } => *x_elliptic,
        }
    }

    /// Whether `ΩX` contributes a factor: false for disks and for rationally trivial `X`.
    fn x_nontrivial(&self) -> bool {
        match self {
            VertexPair::DiskSphere(_) => false,
            VertexPair::General {
                x_elliptic,
                x_rational_degrees,
                ..
            } => !x_elliptic || x_rational_degrees.as_ref().is_none_or(|d| !d.is_empty()),
        }
    }

    fn validate(&self, v: u32) -> Result<()> {
        match self {
            VertexPair::DiskSphere(n) if *n < 2 => Err(Error::InvalidPairs(format!(
                "vertex {v}: disk-sphere pair needs n >= 2, got {n}"
            ))),
            VertexPair::DiskSphere(_) => Ok(()),
            VertexPair::General {
                x_elliptic,
                x_rational_degrees,
                y_rational,
            } => {
                if *x_elliptic && x_rational_degrees.is_none() {
                    return Err(Error::InvalidPairs(format!(
                        "vertex {v}: elliptic X needs x_rational_degrees"
                    )));
                }
                if x_rational_degrees.iter().flatten().any(|d| *d == 0) {
                    return Err(Error::InvalidPairs(format!(
                        "vertex {v}: rational degrees of X must be positive"
                    )));
                }
                match y_rational {
                    FibreType::Sphere(0) => Err(Error::InvalidPairs(format!(
                        "vertex {v}: fibre sphere dimension must be at least 1"
                    ))),
                    FibreType::Big(b) if *b < 2 => Err(Error::InvalidPairs(format!(
                        "vertex {v}: big fibre needs a rank bound of at least 2"
                    ))),
                    _ => Ok(()),
                }
            }
        }
    }
}

/// Per-vertex pair data for vertices `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSpec {
    pub pairs: Vec<VertexPair>,
}

impl PairSpec {
    pub fn new(pairs: Vec<VertexPair>) -> Self {
        PairSpec { pairs }
    }

    /// `(D^n, S^{n-1})` at every one of `m` vertices.
    pub fn disk_sphere(n: u32, m: usize) -> Self {
        PairSpec {
            pairs: vec![VertexPair::DiskSphere(n); m],
        }
    }

    /// Expands a single entry to `m` vertices and checks the count and each entry.
    pub fn resolve(&self, m: usize) -> Result<PairSpec> {
        let pairs = match self.pairs.len() {
            1 if m != 1 => vec![self.pairs[0].clone(); m],
            n if n == m => self.pairs.clone(),
            n => {
                return Err(Error::InvalidPairs(format!(
                    "{n} pair entries for {m} vertices"
                )))
            }
        };
        for (i, p) in pairs.iter().enumerate() {
            p.validate(i as u32 + 1)?;
        }
        Ok(PairSpec { pairs })
    }

    pub fn get(&self, v: u32) -> Result<&VertexPair> {
        self.pairs
            .get((v as usize).wrapping_sub(1))
            .ok_or(Error::VertexOutOfRange {
                vertex: v,
                m: self.pairs.len(),
            })
    }

    pub fn all_disk_sphere(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| matches!(p, VertexPair::DiskSphere(_)))
    }
}

/// Symbolic homotopy type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormalSpace {
    Sphere(u32),
    Contractible,
    Wedge(Vec<FormalSpace>),
    Product(Vec<FormalSpace>),
    LoopOf(Box<FormalSpace>),
    /// The space `X_i` of the pair at vertex `i`.
    ExternalX(u32),
    /// The fibre `Y_i` at vertex `i`.
    ExternalY(u32),
    Suspension {
        times: u32,
        space: Box<FormalSpace>,
    },
    Smash(Vec<FormalSpace>),
}

impl FormalSpace {
    pub fn loop_of(inner: FormalSpace) -> FormalSpace {
        FormalSpace::LoopOf(Box::new(inner))
    }

    pub fn suspension(times: u32, inner: FormalSpace) -> FormalSpace {
        FormalSpace::Suspension {
            times,
            space: Box::new(inner),
        }
    }

    pub fn sphere_dim(&self) -> Option<u32> {
        match self {
            FormalSpace::Sphere(d) => Some(*d),
            _ => None,
        }
    }

    /// Applies the simplification rules bottom-up. Idempotent.
    pub fn normalize(&self) -> FormalSpace {
        use FormalSpace::*;
        match self {
            Sphere(_) | Contractible | ExternalX(_) | ExternalY(_) => self.clone(),
            LoopOf(inner) => match inner.normalize() {
                Contractible => Contractible,
                n => LoopOf(Box::new(n)),
            },
            Suspension { times, space } => match (space.normalize(), *times) {
                (n, 0) => n,
                (Sphere(d), t) => Sphere(d + t),
                (Suspension { times: t2, space }, t) => Suspension {
                    times: t + t2,
                    space,
                },
                (n, t) => Suspension {
                    times: t,
                    space: Box::new(n),
                },
            },
            Smash(children) => {
                let flat = flatten(children, |s| match s {
                    Smash(c) => Some(c),
                    _ => None,
                });
                if flat.len() == 1 {
                    return flat.into_iter().next().unwrap();
                }
                if !flat.is_empty() && flat.iter().all(|c| c.sphere_dim().is_some()) {
                    return Sphere(flat.iter().filter_map(FormalSpace::sphere_dim).sum());
                }
                Smash(flat)
            }
            Wedge(children) | Product(children) => {
                let is_wedge = matches!(self, Wedge(_));
                let mut flat = flatten(children, |s| match (s, is_wedge) {
                    (Wedge(c), true) | (Product(c), false) => Some(c),
                    _ => None,
                });
                flat.retain(|c| *c != Contractible);
                match flat.len() {
                    0 => Contractible,
                    1 => flat.into_iter().next().unwrap(),
                    _ if is_wedge => Wedge(flat),
                    _ => Product(flat),
                }
            }
        }
    }

    /// Number of factors of a normalized product (0 for a contractible space).
    pub fn factor_count(&self) -> usize {
        match self {
            FormalSpace::Contractible => 0,
            FormalSpace::Product(c) => c.len(),
            _ => 1,
        }
    }
}

fn flatten<F>(children: &[FormalSpace], same: F) -> Vec<FormalSpace>
where
    F: Fn(&FormalSpace) -> Option<&Vec<FormalSpace>> + Copy,
{
    let mut out = Vec::new();
    for c in children {
        let n = c.normalize();
        match same(&n) {
            Some(grand) => out.extend(grand.iter().cloned()),
            None => out.push(n),
        }
    }
    out
}

impl fmt::Display for FormalSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, cs: &[FormalSpace], sep: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")
        }
        match self {
            FormalSpace::Sphere(d) => write!(f, "S^{d}"),
            FormalSpace::Contractible => f.write_str("*"),
            FormalSpace::Wedge(c) => join(f, c, " ∨ "),
            FormalSpace::Product(c) => join(f, c, " × "),
            FormalSpace::Smash(c) => join(f, c, " ∧ "),
            FormalSpace::LoopOf(c) => write!(f, "Ω{c}"),
            FormalSpace::ExternalX(i) => write!(f, "X_{i}"),
            FormalSpace::ExternalY(i) => write!(f, "Y_{i}"),
            FormalSpace::Suspension { times, space } => write!(f, "Σ^{times}({space})"),
        }
    }
}

fn fibre_space(pairs: &PairSpec, v: u32) -> Result<FormalSpace> {
    Ok(match pairs.get(v)?.fibre() {
        FibreType::Sphere(d) => FormalSpace::Sphere(d),
        _ => FormalSpace::ExternalY(v),
    })
}

/// `(CY, Y)^σ` for the full simplex on `σ`: a product of cones.
pub fn eval_cy_simplex(_pairs: &PairSpec, _sigma: Face) -> FormalSpace {
    FormalSpace::Contractible
}

/// `(CY, Y)^{∂σ} ≃ Σ^{|σ|-1} Y_{i_1} ∧ ... ∧ Y_{i_k}`.
///
/// With sphere fibres `S^{d_i}` this is the sphere of dimension
/// `|σ| - 1 + Σ d_i`; otherwise the normalized suspension/smash tree is
/// returned. A single vertex gives `Y_i` itself.
pub fn eval_cy_boundary(pairs: &PairSpec, sigma: Face) -> Result<FormalSpace> {
    if sigma.is_empty() {
        return Err(Error::Precondition("boundary of the empty face".into()));
    }
    let smash = sigma
        .vertices()
        .map(|v| fibre_space(pairs, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalSpace::suspension(sigma.len() as u32 - 1, FormalSpace::Smash(smash)).normalize())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Elliptic,
    Hyperbolic,
}

/// Condition (i): every `X_i` is elliptic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllipticXCondition {
    pub pass: bool,
    pub non_elliptic_vertices: Vec<u32>,
}

/// Condition (ii): the minimal missing faces are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointMmfCondition {
    pub pass: bool,
    pub mmf: Vec<Face>,
    pub intersecting_pair: Option<(Face, Face)>,
}

/// Condition (iii): fibres over vertices of minimal missing faces are rational spheres.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SphereFibreCondition {
    pub pass: bool,
    pub mmf_vertices: Vec<u32>,
    pub non_sphere_vertices: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub i: EllipticXCondition,
    pub ii: DisjointMmfCondition,
    pub iii: SphereFibreCondition,
}

impl Conditions {
    pub fn all_pass(&self) -> bool {
        self.i.pass && self.ii.pass && self.iii.pass
    }
}

/// Two intersecting minimal missing faces and the wedge `(CY,Y)^{∂σ1} ∨ (CY,Y)^{∂σ2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sigma1: Face,
    pub sigma2: Face,
    pub wedge: FormalSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MooreNote {
    #[serde(rename = "finite homotopy exponent at every prime")]
    FiniteExponentEveryPrime,
    #[serde(rename = "no exponent at any prime")]
    NoExponentAnyPrime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub conditions: Conditions,
    pub decomposition: Option<FormalSpace>,
    pub witness: Option<Witness>,
    /// Only set for all disk-sphere input.
    pub moore_note: Option<MooreNote>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClassifyOptions {
    /// Classify the complex on its non-ghost vertices instead of rejecting ghosts.
    pub allow_ghosts: bool,
}

/// Decides ellipticity of `(X, A)^K` from the minimal missing faces of `K` and the pair data.
pub fn classify(
    k: &SimplicialComplex,
    pairs: &PairSpec,
    opts: ClassifyOptions,
) -> Result<Classification> {
    let pairs = pairs.resolve(k.m())?;
    for (i, p) in pairs.pairs.iter().enumerate() {
        if p.fibre() == FibreType::Trivial {
            return Err(Error::TrivialFibre(i as u32 + 1));
        }
    }
    if k.is_void() {
        return Err(Error::Precondition("complex has no nonempty faces".into()));
    }
    let mut warnings = Vec::new();
    let ghosts = k.ghosts();
    if let Some(v) = ghosts.min_vertex() {
        if !opts.allow_ghosts {
            return Err(Error::GhostVertex(v));
        }
        warnings.push(format!(
            "ghost vertices {ghosts} contribute factors A_i that are not modeled; \
             classification is of the complex on its remaining vertices"
        ));
    }

    let set = mmf::mmf(k);
    let conditions = conditions(k, &pairs, &set);
    let verdict = if conditions.all_pass() {
        Verdict::Elliptic
    } else {
        Verdict::Hyperbolic
    };
    let decomposition = match verdict {
        Verdict::Elliptic => Some(decompose_from(k, &pairs, &set)?),
        Verdict::Hyperbolic => None,
    };
    let witness = match conditions.ii.intersecting_pair {
        Some((a, b)) => Some(witness_for(&pairs, a, b)?),
        None => None,
    };
    let moore_note = pairs.all_disk_sphere().then_some(match verdict {
        Verdict::Elliptic => MooreNote::FiniteExponentEveryPrime,
        Verdict::Hyperbolic => MooreNote::NoExponentAnyPrime,
    });
    Ok(Classification {
        verdict,
        conditions,
        decomposition,
        witness,
        moore_note,
        warnings,
    })
}

fn conditions(k: &SimplicialComplex, pairs: &PairSpec, set: &MmfSet) -> Conditions {
    let vertices = k.vertex_set();
    let non_elliptic: Vec<u32> = vertices
        .vertices()
        .filter(|v| !pairs.pairs[*v as usize - 1].x_elliptic())
        .collect();
    let support = set.support();
    let non_sphere: Vec<u32> = support
        .vertices()
        .filter(|v| !matches!(pairs.pairs[*v as usize - 1].fibre(), FibreType::Sphere(_)))
        .collect();
    let pair = set.first_intersecting_pair();
    Conditions {
        i: EllipticXCondition {
            pass: non_elliptic.is_empty(),
            non_elliptic_vertices: non_elliptic,
        },
        ii: DisjointMmfCondition {
            pass: pair.is_none(),
            mmf: set.faces.clone(),
            intersecting_pair: pair,
        },
        iii: SphereFibreCondition {
            pass: non_sphere.is_empty(),
            mmf_vertices: support.to_vec(),
            non_sphere_vertices: non_sphere,
        },
    }
}

fn decompose_from(k: &SimplicialComplex, pairs: &PairSpec, set: &MmfSet) -> Result<FormalSpace> {
    if let Some((a, b)) = set.first_intersecting_pair() {
        return Err(Error::NotDisjoint(a.to_string(), b.to_string()));
    }
    let mut factors = Vec::new();
    for v in k.vertex_set().vertices() {
        if pairs.pairs[v as usize - 1].x_nontrivial() {
            factors.push(FormalSpace::loop_of(FormalSpace::ExternalX(v)));
        }
    }
    for sigma in &set.faces {
        let cy = eval_cy_boundary(pairs, *sigma)?;
        if cy.sphere_dim().is_none() {
            let v = sigma
                .vertices()
                .find(|v| !matches!(pairs.pairs[*v as usize - 1].fibre(), FibreType::Sphere(_)))
                .unwrap_or(0);
            return Err(Error::Precondition(format!(
                "vertex {v} of minimal missing face {sigma} has no sphere fibre"
            )));
        }
        factors.push(FormalSpace::loop_of(cy));
    }
    Ok(FormalSpace::Product(factors).normalize())
}

/// `ΩK`-level decomposition `(Π ΩX_i) × (Π_j Ω(CY,Y)^{∂σ_j})` for disjoint minimal missing faces.
pub fn decompose_loops(k: &SimplicialComplex, pairs: &PairSpec) -> Result<FormalSpace> {
    let pairs = pairs.resolve(k.m())?;
    decompose_from(k, &pairs, &mmf::mmf(k))
}

fn witness_for(pairs: &PairSpec, sigma1: Face, sigma2: Face) -> Result<Witness> {
    let wedge = FormalSpace::Wedge(vec![
        eval_cy_boundary(pairs, sigma1)?,
        eval_cy_boundary(pairs, sigma2)?,
    ])
    .normalize();
    Ok(Witness {
        sigma1,
        sigma2,
        wedge,
    })
}

/// The lexicographically first intersecting pair of minimal missing faces and its wedge.
pub fn hyperbolic_witness(k: &SimplicialComplex, pairs: &PairSpec) -> Result<Witness> {
    let pairs = pairs.resolve(k.m())?;
    let (a, b) = mmf::mmf(k)
        .first_intersecting_pair()
        .ok_or(Error::NoIntersectingPair)?;
    witness_for(&pairs, a, b)
}

/// Sphere dimensions on both sides of `(CX,X)^{∂σ} ≃ Σ (CX,X)^{∂σ̄} ∧ X_w`, one entry per face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkJoinDegrees {
    /// `dim (CX,X)^{∂σ_j}`, evaluated on the full subcomplex `K̄_I` (resp. `K̄_J`).
    pub lhs: [u32; 2],
    /// `1 + dim (CX,X)^{∂σ̄_j} + dim X_w`, with `∂σ̄_j` read off the link of `w`.
    pub rhs: [u32; 2],
    /// The combinatorial identifications `K̄_I = ∂σ_1`, `(link w)_{Ī} = ∂σ̄_1` (and for `J`) held.
    pub structure_ok: bool,
}

impl LinkJoinDegrees {
    pub fn agrees(&self) -> bool {
        self.structure_ok && self.lhs == self.rhs
    }
}

/// Computes the degree bookkeeping of the link-join equivalence on `K̄`.
pub fn linkjoin_degrees(
    m: usize,
    sigma1: Face,
    sigma2: Face,
    w: u32,
    pairs: &PairSpec,
) -> Result<LinkJoinDegrees> {
    let kbar = build_kbar(m, sigma1, sigma2)?;
    if !sigma1.intersection(sigma2).contains(w) {
        return Err(Error::Precondition(format!(
            "vertex {w} is not in {sigma1} ∩ {sigma2}"
        )));
    }
    let pairs = pairs.resolve(m)?;
    if !pairs.all_disk_sphere() {
        return Err(Error::Precondition(
            "link-join check needs disk-sphere pairs".into(),
        ));
    }
    let link = kbar.link(w)?;
    let x_w = fibre_space(&pairs, w)?;
    let mut lhs = [0; 2];
    let mut rhs = [0; 2];
    let mut structure_ok = true;
    for (j, sigma) in [sigma1, sigma2].into_iter().enumerate() {
        let reduced = sigma.without(w);
        structure_ok &= kbar.restrict(sigma) == SimplicialComplex::boundary_of_simplex(sigma, m)?;
        structure_ok &=
            link.restrict(reduced) == SimplicialComplex::boundary_of_simplex(reduced, m)?;
        let whole = eval_cy_boundary(&pairs, sigma)?;
        let side = FormalSpace::suspension(
            1,
            FormalSpace::Smash(vec![eval_cy_boundary(&pairs, reduced)?, x_w.clone()]),
        )
        .normalize();
        match (whole.sphere_dim(), side.sphere_dim()) {
            (Some(a), Some(b)) => {
                lhs[j] = a;
                rhs[j] = b;
            }
            _ => {
                return Err(Error::Invariant(
                    "disk-sphere evaluation is not a sphere".into(),
                ))
            }
        }
    }
    Ok(LinkJoinDegrees {
        lhs,
        rhs,
        structure_ok,
    })
}

/// True when both sides of the link-join equivalence have matching sphere dimensions.
pub fn linkjoin_check(
    m: usize,
    sigma1: Face,
    sigma2: Face,
    w: u32,
    pairs: &PairSpec,
) -> Result<bool> {
    Ok(linkjoin_degrees(m, sigma1, sigma2, w, pairs)?.agrees())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mmf::complex_from_mmf;
    use FormalSpace::*;

    fn f(vs: &[u32]) -> Face {
        Face::new(vs.iter().copied()).unwrap()
    }

    fn ds(n: u32, m: usize) -> PairSpec {
        PairSpec::disk_sphere(n, m)
    }

    fn general(ell: bool, degs: &[u32], y: FibreType) -> VertexPair {
        VertexPair::General {
            x_elliptic: ell,
            x_rational_degrees: Some(degs.to_vec()),
            y_rational: y,
        }
    }

    #[test]
    fn simplex_evaluation_is_contractible() {
        assert_eq!(eval_cy_simplex(&ds(2, 3), f(&[1, 2, 3])), Contractible);
        assert_eq!(eval_cy_simplex(&ds(2, 1), f(&[1])), Contractible);
        assert_eq!(eval_cy_simplex(&ds(3, 5), Face::full(5)), Contractible);
    }

    #[test]
    fn boundary_evaluation_dimensions() {
        for m in 2..=6u32 {
            let s = eval_cy_boundary(&ds(2, m as usize), Face::full(m as usize)).unwrap();
            assert_eq!(s, Sphere(2 * m - 1));
        }
        assert_eq!(eval_cy_boundary(&ds(3, 2), f(&[1, 2])).unwrap(), Sphere(5));
        let mixed = PairSpec::new(vec![VertexPair::DiskSphere(2), VertexPair::DiskSphere(4)]);
        assert_eq!(eval_cy_boundary(&mixed, f(&[1, 2])).unwrap(), Sphere(5));
        assert_eq!(eval_cy_boundary(&ds(3, 2), f(&[2])).unwrap(), Sphere(2));
    }

    #[test]
    fn boundary_evaluation_symbolic_for_non_spheres() {
        let p = PairSpec::new(vec![
            VertexPair::DiskSphere(2),
            general(true, &[3], FibreType::Big(2)),
        ]);
        let s = eval_cy_boundary(&p, f(&[1, 2])).unwrap();
        assert_eq!(
            s,
            FormalSpace::suspension(1, Smash(vec![Sphere(1), ExternalY(2)]))
        );
    }

    #[test]
    fn normalize_rules() {
        let messy = Product(vec![
            Contractible,
            Product(vec![FormalSpace::loop_of(Sphere(3)), Contractible]),
            FormalSpace::loop_of(Wedge(vec![Contractible, Sphere(3)])),
        ]);
        let n = messy.normalize();
        assert_eq!(
            n,
            Product(vec![
                FormalSpace::loop_of(Sphere(3)),
                FormalSpace::loop_of(Sphere(3))
            ])
        );
        assert_eq!(n.normalize(), n);
        assert_eq!(Product(vec![]).normalize(), Contractible);
        assert_eq!(FormalSpace::loop_of(Contractible).normalize(), Contractible);
        let s = FormalSpace::suspension(2, FormalSpace::suspension(1, ExternalY(1)));
        assert_eq!(s.normalize(), FormalSpace::suspension(3, ExternalY(1)));
        assert_eq!(
            Smash(vec![Sphere(2), Smash(vec![Sphere(1), Sphere(4)])]).normalize(),
            Sphere(7)
        );
    }

    #[test]
    fn display() {
        let w = Wedge(vec![Sphere(3), Sphere(5)]);
        assert_eq!(FormalSpace::loop_of(w).to_string(), "Ω(S^3 ∨ S^5)");
    }

    #[test]
    fn classify_boundary_is_elliptic_sphere_loop() {
        let k = SimplicialComplex::boundary_of_simplex(Face::full(3), 3).unwrap();
        let c = classify(&k, &ds(2, 1), ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Elliptic);
        assert_eq!(c.decomposition, Some(FormalSpace::loop_of(Sphere(5))));
        assert_eq!(c.moore_note, Some(MooreNote::FiniteExponentEveryPrime));
        assert!(c.witness.is_none());
    }

    #[test]
    fn classify_kbar_is_hyperbolic_with_witness() {
        let k = build_kbar(3, f(&[1, 2]), f(&[2, 3])).unwrap();
        let c = classify(&k, &ds(2, 3), ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Hyperbolic);
        let w = c.witness.unwrap();
        assert_eq!((w.sigma1, w.sigma2), (f(&[1, 2]), f(&[2, 3])));
        assert_eq!(w.wedge, Wedge(vec![Sphere(3), Sphere(3)]));
        assert_eq!(c.moore_note, Some(MooreNote::NoExponentAnyPrime));
    }

    #[test]
    fn classify_big_fibre_on_mmf_vertex_fails_iii() {
        let k = complex_from_mmf(5, &[f(&[1, 2]), f(&[3, 4])]).unwrap();
        let mut pairs = vec![VertexPair::DiskSphere(2); 5];
        pairs[2] = general(true, &[], FibreType::Big(2));
        let c = classify(&k, &PairSpec::new(pairs), ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Hyperbolic);
        assert!(c.conditions.i.pass && c.conditions.ii.pass && !c.conditions.iii.pass);
        assert_eq!(c.conditions.iii.non_sphere_vertices, vec![3]);
        assert!(c.witness.is_none());
        assert!(c.moore_note.is_none());
    }

    #[test]
    fn classify_errors() {
        let k = SimplicialComplex::boundary_of_simplex(Face::full(3), 3).unwrap();
        let mut pairs = vec![VertexPair::DiskSphere(2); 3];
        pairs[1] = general(true, &[3], FibreType::Trivial);
        assert_eq!(
            classify(&k, &PairSpec::new(pairs), ClassifyOptions::default()),
            Err(Error::TrivialFibre(2))
        );
        let ghost = SimplicialComplex::from_lists(3, &[&[1, 2]]).unwrap();
        assert_eq!(
            classify(&ghost, &ds(2, 1), ClassifyOptions::default()),
            Err(Error::GhostVertex(3))
        );
        let c = classify(&ghost, &ds(2, 1), ClassifyOptions { allow_ghosts: true }).unwrap();
        assert_eq!(c.verdict, Verdict::Elliptic);
        assert_eq!(c.warnings.len(), 1);
        assert!(classify(&k, &ds(1, 3), ClassifyOptions::default()).is_err());
        assert!(classify(&k, &PairSpec::new(vec![]), ClassifyOptions::default()).is_err());
        let void = SimplicialComplex::void(2).unwrap();
        assert!(classify(&void, &ds(2, 2), ClassifyOptions { allow_ghosts: true }).is_err());
    }

    #[test]
    fn decompose_cases() {
        let d = decompose_loops(&SimplicialComplex::simplex(4).unwrap(), &ds(2, 4)).unwrap();
        assert_eq!(d, Contractible);
        let k = complex_from_mmf(5, &[f(&[1, 2]), f(&[3, 4])]).unwrap();
        let d = decompose_loops(&k, &ds(2, 5)).unwrap();
        let l3 = FormalSpace::loop_of(Sphere(3));
        assert_eq!(d, Product(vec![l3.clone(), l3]));
        let b = SimplicialComplex::boundary_of_simplex(Face::full(4), 4).unwrap();
        assert_eq!(
            decompose_loops(&b, &ds(2, 4)).unwrap(),
            FormalSpace::loop_of(Sphere(7))
        );
        let kb = build_kbar(3, f(&[1, 2]), f(&[2, 3])).unwrap();
        assert!(matches!(
            decompose_loops(&kb, &ds(2, 3)),
            Err(Error::NotDisjoint(_, _))
        ));
    }

    #[test]
    fn decompose_includes_external_x() {
        let k = SimplicialComplex::boundary_of_simplex(f(&[1, 2]), 3)
            .unwrap()
            .join(&SimplicialComplex::from_lists(3, &[&[3]]).unwrap())
            .unwrap();
        let pairs = PairSpec::new(vec![
            VertexPair::DiskSphere(2),
            general(true, &[], FibreType::Sphere(2)),
            general(true, &[2, 3], FibreType::Big(3)),
        ]);
        let d = decompose_loops(&k, &pairs).unwrap();
        assert_eq!(
            d,
            Product(vec![
                FormalSpace::loop_of(ExternalX(3)),
                FormalSpace::loop_of(Sphere(4))
            ])
        );
    }

    #[test]
    fn witness_cases() {
        let k = build_kbar(3, f(&[1, 2]), f(&[2, 3])).unwrap();
        let w = hyperbolic_witness(&k, &ds(2, 3)).unwrap();
        assert_eq!(w.wedge, Wedge(vec![Sphere(3), Sphere(3)]));
        let k = build_kbar(4, f(&[1, 2, 3]), f(&[3, 4])).unwrap();
        let w = hyperbolic_witness(&k, &ds(2, 4)).unwrap();
        assert_eq!((w.sigma1, w.sigma2), (f(&[1, 2, 3]), f(&[3, 4])));
        assert_eq!(w.wedge, Wedge(vec![Sphere(5), Sphere(3)]));
        let b = SimplicialComplex::boundary_of_simplex(Face::full(3), 3).unwrap();
        assert_eq!(
            hyperbolic_witness(&b, &ds(2, 3)),
            Err(Error::NoIntersectingPair)
        );
    }

    #[test]
    fn linkjoin_cases() {
        assert!(linkjoin_check(3, f(&[1, 2]), f(&[2, 3]), 2, &ds(2, 3)).unwrap());
        assert!(linkjoin_check(4, f(&[1, 2, 3]), f(&[3, 4]), 3, &ds(2, 4)).unwrap());
        let mut d = linkjoin_degrees(4, f(&[1, 2, 3]), f(&[3, 4]), 3, &ds(2, 4)).unwrap();
        assert_eq!(d.lhs, [5, 3]);
        d.rhs[0] += 1;
        assert!(!d.agrees());
        assert!(linkjoin_check(4, f(&[1, 2, 3]), f(&[3, 4]), 1, &ds(2, 4)).is_err());
        assert!(linkjoin_check(3, f(&[1, 2]), f(&[1, 2]), 1, &ds(2, 3)).is_err());
    }

    #[test]
    fn pair_json_schema() {
        let p: PairSpec = serde_json::from_str(
            r#"{"pairs": [{"disk_sphere": 2},
                {"general": {"x_elliptic": true, "x_rational_degrees": [3], "y_rational": {"sphere": 2}}},
                {"general": {"x_elliptic": false, "y_rational": "trivial"}},
                {"general": {"x_elliptic": true, "x_rational_degrees": [], "y_rational": {"big": 2}}}]}"#,
        )
        .unwrap();
        assert_eq!(p.pairs[0], VertexPair::DiskSphere(2));
        assert_eq!(p.pairs[1].fibre(), FibreType::Sphere(2));
        assert_eq!(p.pairs[2].fibre(), FibreType::Trivial);
        assert_eq!(p.pairs[3].fibre(), FibreType::Big(2));
        let s = serde_json::to_string(&FormalSpace::loop_of(Wedge(vec![Sphere(3), Contractible])))
            .unwrap();
        assert_eq!(s, r#"{"loop_of":{"wedge":[{"sphere":3},"contractible"]}}"#);
    }
}
