//! Seeded property checks over random complexes, with greedy shrinking.
//!
//! Every instance is generated from its own ChaCha stream, selected by
//! property and instance index, so the report depends only on the
//! configuration and never on scheduling.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::homotopy::{
    classify, decompose_loops, eval_cy_boundary, hyperbolic_witness, linkjoin_check,
    ClassifyOptions, FibreType, FormalSpace, PairSpec, Verdict, VertexPair,
};
use crate::mmf::{
    build_kbar, complex_from_mmf, join_decomposition, mmf, mmf_brute_force, mmf_including_ghosts,
};
use crate::ranks::{
    is_nonnegative, lie_dimensions, lie_ranks, pbw_product, ranks_of_formal, sphere_ranks,
};
use crate::IntegerSeries;

/// Largest `m` for properties checked against exhaustive enumeration.
pub const ORACLE_MAX_M: usize = 12;
/// Largest `m` for identity properties.
pub const IDENTITY_MAX_M: usize = 20;
/// Largest `m` for the two-face complex properties.
pub const KBAR_MAX_M: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub iterations: usize,
    pub max_m: usize,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(3..=IDENTITY_MAX_M).contains(&self.max_m) {
            return Err(Error::Precondition(format!(
                "max_m must lie in 3..={IDENTITY_MAX_M}, got {}",
                self.max_m
            )));
        }
        Ok(())
    }

    fn oracle_m(&self) -> usize {
        self.max_m.min(ORACLE_MAX_M)
    }

    fn kbar_m(&self) -> usize {
        self.max_m.min(KBAR_MAX_M)
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            iterations: 200,
            max_m: 10,
        }
    }
}

pub type StarFn = fn(&SimplicialComplex, u32) -> Result<SimplicialComplex>;

/// Operations under test. Swapping one out lets a test confirm that the
/// properties notice a broken implementation.
#[derive(Clone, Copy)]
pub struct Ops {
    pub star: StarFn,
}

impl Default for Ops {
    fn default() -> Self {
        Ops {
            star: SimplicialComplex::star,
        }
    }
}

/// A generated test case; serializes to a self-describing, re-runnable document.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Complex {
        complex: SimplicialComplex,
    },
    Restriction {
        complex: SimplicialComplex,
        subset: Face,
        inner: Face,
    },
    Joinable {
        parts: Vec<SimplicialComplex>,
    },
    Antichain {
        m: usize,
        faces: Vec<Face>,
    },
    Kbar {
        m: usize,
        sigma1: Face,
        sigma2: Face,
        w: u32,
        disk_sphere: Vec<u32>,
    },
    Pairs {
        complex: SimplicialComplex,
        pairs: PairSpec,
    },
    Generators {
        degrees: Vec<u32>,
        max_degree: u32,
    },
    Space {
        space: FormalSpace,
    },
    Factors {
        factors: Vec<FormalSpace>,
        max_degree: u32,
    },
}

/// Result of checking one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail(String),
    /// The instance does not satisfy the property's hypotheses (only produced while shrinking).
    Invalid,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Check::Pass
    } else {
        Check::Fail(msg())
    }
}

macro_rules! check_all {
    ($($c:expr),+ $(,)?) => {{
        let mut out = Check::Pass;
        $(
            if out == Check::Pass {
                out = $c;
            }
        )+
        out
    }};
}

fn op<T>(r: Result<T>) -> std::result::Result<T, Check> {
    r.map_err(|e| Check::Fail(format!("operation failed: {e}")))
}

macro_rules! tryop {
    ($e:expr) => {
        match op($e) {
            Ok(v) => v,
            Err(c) => return c,
        }
    };
}

type Generate = fn(&mut ChaCha8Rng, &VerifyConfig) -> Instance;
type CheckFn = fn(&Instance, &Ops) -> Check;

pub struct Property {
    pub name: &'static str,
    generate: Generate,
    check: CheckFn,
}

/// The generator for instance stream `stream` under `seed`.
pub fn instance_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

impl Property {
    pub fn generate(&self, cfg: &VerifyConfig, stream: u64) -> Instance {
        (self.generate)(&mut instance_rng(cfg.seed, stream), cfg)
    }

    pub fn check(&self, inst: &Instance, ops: &Ops) -> Check {
        (self.check)(inst, ops)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub index: usize,
    pub message: String,
    pub counterexample: Instance,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub instances: usize,
    pub passed: bool,
    pub failures: Vec<Failure>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: VerifyConfig,
    pub passed: bool,
    pub properties: Vec<PropertyReport>,
}

// ---------------------------------------------------------------------------
// generators

fn random_subset(rng: &mut ChaCha8Rng, ground: Face, size: usize) -> Face {
    let verts = ground.to_vec();
    verts
        .choose_multiple(rng, size)
        .fold(Face::EMPTY, |f, v| f.with(*v))
}

fn nonempty_subset(rng: &mut ChaCha8Rng, ground: Face) -> Face {
    let size = rng.gen_range(1..=ground.len());
    random_subset(rng, ground, size)
}

/// Adds `{v}` for every vertex of `ground` that is not already a face.
fn fill_ghosts(m: usize, mut facets: Vec<Face>, ground: Face) -> SimplicialComplex {
    let present = facets.iter().fold(Face::EMPTY, |a, f| a.union(*f));
    facets.extend(ground.difference(present).vertices().map(Face::singleton));
    SimplicialComplex::from_raw(m, facets)
}

/// Random ghost-free complex on `ground` inside `[m]`: between 1 and `2|ground|`
/// facets, each a random subset of uniformly chosen size.
fn random_complex_on(rng: &mut ChaCha8Rng, m: usize, ground: Face) -> SimplicialComplex {
    let n = ground.len();
    let count = rng.gen_range(1..=2 * n);
    let facets = (0..count).map(|_| nonempty_subset(rng, ground)).collect();
    fill_ghosts(m, facets, ground)
}

/// Random ghost-free complex with `m` uniform in `[3, max_m]`.
pub fn random_complex(rng: &mut ChaCha8Rng, max_m: usize) -> SimplicialComplex {
    let m = rng.gen_range(3..=max_m);
    random_complex_on(rng, m, Face::full(m))
}

fn gen_oracle_complex(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    Instance::Complex {
        complex: random_complex(rng, cfg.oracle_m()),
    }
}

fn gen_identity_complex(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    Instance::Complex {
        complex: random_complex(rng, cfg.max_m),
    }
}

fn gen_restriction(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    let complex = random_complex(rng, cfg.oracle_m());
    let subset = nonempty_subset(rng, Face::full(complex.m()));
    let inner = nonempty_subset(rng, Face::full(subset.len()));
    Instance::Restriction {
        complex,
        subset,
        inner,
    }
}

fn random_partition(rng: &mut ChaCha8Rng, m: usize, parts: usize) -> Vec<Face> {
    loop {
        let mut out = vec![Face::EMPTY; parts];
        for v in 1..=m as u32 {
            let p = rng.gen_range(0..parts);
            out[p] = out[p].with(v);
        }
        if out.iter().all(|f| !f.is_empty()) {
            return out;
        }
    }
}

fn gen_joinable(rng: &mut ChaCha8Rng, cfg: &VerifyConfig, parts: usize) -> Instance {
    let m = rng.gen_range(parts.max(3)..=cfg.oracle_m());
    let ground = random_partition(rng, m, parts);
    let parts = ground
        .into_iter()
        .map(|g| random_complex_on(rng, m, g))
        .collect();
    Instance::Joinable { parts }
}

fn gen_triple(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    gen_joinable(rng, cfg, 3)
}

fn gen_pair(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    gen_joinable(rng, cfg, 2)
}

fn gen_antichain(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    let m = rng.gen_range(3..=cfg.oracle_m());
    let count = rng.gen_range(0..=4);
    let mut faces: Vec<Face> = Vec::new();
    for _ in 0..count {
        let f = nonempty_subset(rng, Face::full(m));
        if faces.iter().all(|g| !f.is_subset(*g) && !g.is_subset(f)) {
            faces.push(f);
        }
    }
    Instance::Antichain { m, faces }
}

/// Complex built from 1-3 disjoint minimal missing faces of size at least 2.
pub fn gen_disjoint_mmf(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    let count = rng.gen_range(1..=3usize);
    let m = rng.gen_range((2 * count).max(3)..=cfg.oracle_m().max(2 * count));
    let mut free = Face::full(m);
    let mut faces = Vec::new();
    for left in (0..count).rev() {
        let room = free.len() - 2 * left;
        let size = rng.gen_range(2..=room);
        let f = random_subset(rng, free, size);
        free = free.difference(f);
        faces.push(f);
    }
    Instance::Antichain { m, faces }
}

/// Valid `(m, σ1, σ2, w)` for the two-face complex, with random disk dimensions.
pub fn gen_kbar(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    let m = rng.gen_range(3..=cfg.kbar_m());
    let parts = random_partition(rng, m, 3);
    let (only_i, only_j, both) = (parts[0], parts[1], parts[2]);
    let both_v = both.to_vec();
    let w = *both_v.choose(rng).expect("partition parts are nonempty");
    let disk_sphere = (0..m).map(|_| rng.gen_range(2..=5)).collect();
    Instance::Kbar {
        m,
        sigma1: only_i.union(both),
        sigma2: only_j.union(both),
        w,
        disk_sphere,
    }
}

fn random_vertex_pair(rng: &mut ChaCha8Rng) -> VertexPair {
    if rng.gen_bool(0.4) {
        return VertexPair::DiskSphere(rng.gen_range(2..=4));
    }
    let x_elliptic = rng.gen_bool(0.85);
    let degrees = (0..rng.gen_range(0..=2))
        .map(|_| rng.gen_range(2..=6))
        .collect();
    let y_rational = if rng.gen_bool(0.75) {
        FibreType::Sphere(rng.gen_range(1..=3))
    } else {
        FibreType::Big(rng.gen_range(2..=3))
    };
    VertexPair::General {
        x_elliptic,
        x_rational_degrees: Some(degrees),
        y_rational,
    }
}

fn gen_general_pairs(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    let complex = random_complex(rng, cfg.kbar_m());
    let pairs = (0..complex.m()).map(|_| random_vertex_pair(rng)).collect();
    Instance::Pairs {
        complex,
        pairs: PairSpec::new(pairs),
    }
}

fn gen_disk_pairs(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> Instance {
    let complex = random_complex(rng, cfg.kbar_m());
    let pairs = (0..complex.m())
        .map(|_| VertexPair::DiskSphere(rng.gen_range(2..=4)))
        .collect();
    Instance::Pairs {
        complex,
        pairs: PairSpec::new(pairs),
    }
}

fn random_space(rng: &mut ChaCha8Rng, depth: u32) -> FormalSpace {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..4) {
            0 => FormalSpace::Sphere(rng.gen_range(1..=6)),
            1 => FormalSpace::Contractible,
            2 => FormalSpace::ExternalX(rng.gen_range(1..=4)),
            _ => FormalSpace::ExternalY(rng.gen_range(1..=4)),
        };
    }
    let kids = |rng: &mut ChaCha8Rng| -> Vec<FormalSpace> {
        (0..rng.gen_range(1..=3))
            .map(|_| random_space(rng, depth - 1))
            .collect()
    };
    match rng.gen_range(0..5) {
        0 => FormalSpace::Wedge(kids(rng)),
        1 => FormalSpace::Product(kids(rng)),
        2 => FormalSpace::Smash(kids(rng)),
        3 => FormalSpace::suspension(rng.gen_range(0..=2), random_space(rng, depth - 1)),
        _ => FormalSpace::loop_of(random_space(rng, depth - 1)),
    }
}

fn gen_space(rng: &mut ChaCha8Rng, _cfg: &VerifyConfig) -> Instance {
    Instance::Space {
        space: random_space(rng, 4),
    }
}

fn gen_generators(rng: &mut ChaCha8Rng, _cfg: &VerifyConfig) -> Instance {
    let count = rng.gen_range(1..=3);
    let degrees = (0..count).map(|_| rng.gen_range(1..=5)).collect();
    Instance::Generators {
        degrees,
        max_degree: rng.gen_range(12..=40),
    }
}

fn gen_witt(rng: &mut ChaCha8Rng, _cfg: &VerifyConfig) -> Instance {
    let g = 2 * rng.gen_range(1..=3);
    let k = rng.gen_range(1..=3);
    Instance::Generators {
        degrees: vec![g; k],
        max_degree: rng.gen_range(12..=40),
    }
}

fn gen_sphere(rng: &mut ChaCha8Rng, _cfg: &VerifyConfig) -> Instance {
    let d: u32 = rng.gen_range(2..=12);
    Instance::Generators {
        degrees: vec![d - 1],
        max_degree: 2 * d + 2,
    }
}

fn gen_multi_generators(rng: &mut ChaCha8Rng, _cfg: &VerifyConfig) -> Instance {
    let count = rng.gen_range(2..=3);
    let degrees = (0..count).map(|_| rng.gen_range(1..=4)).collect();
    Instance::Generators {
        degrees,
        max_degree: rng.gen_range(24..=40),
    }
}

fn gen_factors(rng: &mut ChaCha8Rng, _cfg: &VerifyConfig) -> Instance {
    let factors = (0..rng.gen_range(1..=3))
        .map(|_| {
            if rng.gen_bool(0.6) {
                FormalSpace::loop_of(FormalSpace::Sphere(rng.gen_range(2..=8)))
            } else {
                let a = FormalSpace::Sphere(rng.gen_range(3..=5));
                let b = FormalSpace::Sphere(rng.gen_range(3..=5));
                FormalSpace::loop_of(FormalSpace::Wedge(vec![a, b]))
            }
        })
        .collect();
    Instance::Factors {
        factors,
        max_degree: rng.gen_range(10..=30),
    }
}

// ---------------------------------------------------------------------------
// checks

fn as_complex(inst: &Instance) -> Option<&SimplicialComplex> {
    match inst {
        Instance::Complex { complex } => Some(complex),
        _ => None,
    }
}

fn closed_downward(k: &SimplicialComplex) -> bool {
    if k.m() <= ORACLE_MAX_M {
        let faces = k.face_set();
        faces.iter().all(|f| f.facets().all(|g| faces.contains(&g)))
    } else {
        k.facets().iter().all(|f| f.facets().all(|g| k.contains(g)))
            && k.facets().iter().enumerate().all(|(i, a)| {
                k.facets()
                    .iter()
                    .enumerate()
                    .all(|(j, b)| i == j || !a.is_subset(*b))
            })
    }
}

fn check_downward_closure(inst: &Instance, ops: &Ops) -> Check {
    let Some(k) = as_complex(inst) else {
        return Check::Invalid;
    };
    for v in k.vertex_set().vertices() {
        let produced = [
            tryop!((ops.star)(k, v)),
            tryop!(k.link(v)),
            tryop!(k.deletion(v)),
            tryop!(k.full_subcomplex(Face::full(k.m()).without(v).union(Face::singleton(1)))).0,
        ];
        for r in &produced {
            if !closed_downward(r) {
                return Check::Fail(format!("{r} (from vertex {v}) is not closed downward"));
            }
        }
    }
    Check::Pass
}

fn check_pushout(inst: &Instance, ops: &Ops) -> Check {
    let Some(k) = as_complex(inst) else {
        return Check::Invalid;
    };
    for v in k.vertex_set().vertices() {
        let star = tryop!((ops.star)(k, v));
        let del = tryop!(k.deletion(v));
        let link = tryop!(k.link(v));
        let union = tryop!(star.union(&del));
        let inter = tryop!(star.intersection(&del));
        if union != *k {
            return Check::Fail(format!("star ∪ deletion at {v} is {union}, not K"));
        }
        if inter != link {
            return Check::Fail(format!("star ∩ deletion at {v} is {inter}, link is {link}"));
        }
        if k.m() <= ORACLE_MAX_M {
            let s = star.face_set();
            let d = del.face_set();
            let all: BTreeSet<Face> = s.union(&d).copied().collect();
            let both: BTreeSet<Face> = s.intersection(&d).copied().collect();
            if all != k.face_set() || both != link.face_set() {
                return Check::Fail(format!("face-set pushout fails at {v}"));
            }
        }
    }
    Check::Pass
}

fn check_star_join(inst: &Instance, ops: &Ops) -> Check {
    let Some(k) = as_complex(inst) else {
        return Check::Invalid;
    };
    for v in k.vertex_set().vertices() {
        let star = tryop!((ops.star)(k, v));
        let cone = tryop!(SimplicialComplex::from_facets(k.m(), [Face::singleton(v)]));
        let joined = tryop!(cone.join(&tryop!(k.link(v))));
        if star != joined {
            return Check::Fail(format!("star at {v} is {star}, {{v}} * link is {joined}"));
        }
    }
    Check::Pass
}

fn check_full_subcomplex_composition(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Restriction {
        complex,
        subset,
        inner,
    } = inst
    else {
        return Check::Invalid;
    };
    let (outer, map) = tryop!(complex.full_subcomplex(*subset));
    let (twice, inner_map) = tryop!(outer.full_subcomplex(*inner));
    let preimage = inner
        .vertices()
        .fold(Face::EMPTY, |f, j| f.with(map[j as usize - 1]));
    let (direct, direct_map) = tryop!(complex.full_subcomplex(preimage));
    let composed: Vec<u32> = inner_map.iter().map(|j| map[*j as usize - 1]).collect();
    check_all!(
        ensure(twice == direct, || format!(
            "(K_I)_J = {twice} but K_(I∘J) = {direct}"
        )),
        ensure(composed == direct_map, || "relabeling maps do not compose"
            .into()),
    )
}

fn check_join_laws(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Joinable { parts } = inst else {
        return Check::Invalid;
    };
    let [a, b, c] = parts.as_slice() else {
        return Check::Invalid;
    };
    let left = tryop!(tryop!(a.join(b)).join(c));
    let right = tryop!(a.join(&tryop!(b.join(c))));
    let ab = tryop!(a.join(b));
    let ba = tryop!(b.join(a));
    check_all!(
        ensure(left == right, || format!(
            "(A*B)*C = {left} but A*(B*C) = {right}"
        )),
        ensure(ab == ba, || format!("A*B = {ab} but B*A = {ba}")),
    )
}

fn check_mmf_round_trip(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Antichain { m, faces } = inst else {
        return Check::Invalid;
    };
    let k = tryop!(complex_from_mmf(*m, faces));
    let mut want = faces.clone();
    want.sort_by(Face::graded_cmp);
    let got = mmf_including_ghosts(&k).faces;
    ensure(got == want, || {
        format!("mmf(complex_from_mmf(M)) = {got:?}, M = {want:?}")
    })
}

fn check_mmf_oracle(inst: &Instance, _ops: &Ops) -> Check {
    let Some(k) = as_complex(inst) else {
        return Check::Invalid;
    };
    let fast = mmf(k);
    let brute = mmf_brute_force(k, false);
    let fast_g = mmf_including_ghosts(k);
    let brute_g = mmf_brute_force(k, true);
    check_all!(
        ensure(fast == brute, || format!(
            "fast {:?} vs brute force {:?}",
            fast.faces, brute.faces
        )),
        ensure(fast_g == brute_g, || {
            "ghost-inclusive enumeration disagrees".into()
        }),
    )
}

fn check_restriction_law(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Restriction {
        complex, subset, ..
    } = inst
    else {
        return Check::Invalid;
    };
    if complex.has_ghosts() {
        return Check::Invalid;
    }
    let (sub, map) = tryop!(complex.full_subcomplex(*subset));
    let lifted: Vec<Face> = mmf(&sub)
        .faces
        .iter()
        .map(|f| {
            f.vertices()
                .fold(Face::EMPTY, |a, j| a.with(map[j as usize - 1]))
        })
        .collect();
    let mut lifted = lifted;
    lifted.sort_by(Face::graded_cmp);
    let expected: Vec<Face> = mmf(complex)
        .faces
        .into_iter()
        .filter(|f| f.is_subset(*subset))
        .collect();
    ensure(lifted == expected, || {
        format!("MMF(K_I) = {lifted:?}, expected {expected:?}")
    })
}

fn kbar_parts(inst: &Instance) -> Option<(usize, Face, Face, u32, &[u32])> {
    match inst {
        Instance::Kbar {
            m,
            sigma1,
            sigma2,
            w,
            disk_sphere,
        } => Some((*m, *sigma1, *sigma2, *w, disk_sphere)),
        _ => None,
    }
}

fn check_star_mmf(inst: &Instance, ops: &Ops) -> Check {
    let Some((m, s1, s2, w, _)) = kbar_parts(inst) else {
        return Check::Invalid;
    };
    let kbar = tryop!(build_kbar(m, s1, s2));
    let star = tryop!((ops.star)(&kbar, w));
    let found = mmf_including_ghosts(&star).faces;
    for reduced in [s1.without(w), s2.without(w)] {
        if !found.contains(&reduced) {
            return Check::Fail(format!(
                "{reduced} is not a minimal missing face of star({w}) = {star}; found {found:?}"
            ));
        }
    }
    Check::Pass
}

fn check_link_boundaries(inst: &Instance, _ops: &Ops) -> Check {
    let Some((m, s1, s2, w, _)) = kbar_parts(inst) else {
        return Check::Invalid;
    };
    let kbar = tryop!(build_kbar(m, s1, s2));
    let link = tryop!(kbar.link(w));
    for reduced in [s1.without(w), s2.without(w)] {
        if link.contains(reduced) {
            return Check::Fail(format!("{reduced} lies in link({w}) = {link}"));
        }
        if let Some(t) = reduced.facets().find(|t| !link.contains(*t)) {
            return Check::Fail(format!(
                "boundary face {t} of {reduced} missing from {link}"
            ));
        }
    }
    Check::Pass
}

fn check_deletion_simplex(inst: &Instance, _ops: &Ops) -> Check {
    let Some((m, s1, s2, w, _)) = kbar_parts(inst) else {
        return Check::Invalid;
    };
    let kbar = tryop!(build_kbar(m, s1, s2));
    let del = tryop!(kbar.deletion(w));
    let (rel, _) = tryop!(del.full_subcomplex(Face::full(m).without(w)));
    check_all!(
        ensure(rel.is_simplex(), || format!(
            "K̄ \\ {w} relabels to {rel}, not a simplex"
        )),
        ensure(rel.facets() == [Face::full(m - 1)], || format!(
            "{rel} misses vertices"
        )),
    )
}

fn check_join_mmf(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Joinable { parts } = inst else {
        return Check::Invalid;
    };
    let [a, b] = parts.as_slice() else {
        return Check::Invalid;
    };
    let joined = tryop!(a.join(b));
    let mut expected: Vec<Face> = mmf(a).faces;
    expected.extend(mmf(b).faces);
    expected.sort_by(Face::graded_cmp);
    let got = mmf(&joined).faces;
    ensure(got == expected, || {
        format!("MMF(K1*K2) = {got:?}, expected {expected:?}")
    })
}

/// Reassembly of `complex_from_mmf` output through its join decomposition.
pub fn check_join_decomposition(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Antichain { m, faces } = inst else {
        return Check::Invalid;
    };
    let k = tryop!(complex_from_mmf(*m, faces));
    let dec = tryop!(join_decomposition(&k));
    let rebuilt = tryop!(dec.reassemble(*m));
    let mut want = faces.clone();
    want.sort_by(Face::graded_cmp);
    check_all!(
        ensure(rebuilt == k, || format!(
            "reassembled {rebuilt}, expected {k}"
        )),
        ensure(dec.boundary_factors == want, || {
            "boundary factors differ from input".into()
        }),
    )
}

fn is_trivial_x(p: &VertexPair) -> bool {
    match p {
        VertexPair::DiskSphere(_) => true,
        VertexPair::General {
            x_elliptic,
            x_rational_degrees,
            ..
        } => *x_elliptic && x_rational_degrees.as_ref().is_some_and(|d| d.is_empty()),
    }
}

fn check_classifier_soundness(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Pairs { complex, pairs } = inst else {
        return Check::Invalid;
    };
    let c = tryop!(classify(complex, pairs, ClassifyOptions::default()));
    match c.verdict {
        Verdict::Elliptic => {
            let d = tryop!(decompose_loops(complex, pairs));
            let external = pairs.pairs.iter().filter(|p| !is_trivial_x(p)).count();
            let expected = mmf(complex).len() + external;
            check_all!(
                ensure(Some(&d) == c.decomposition.as_ref(), || {
                    "decomposition mismatch".into()
                }),
                ensure(d.factor_count() == expected, || format!(
                    "{d} has {} factors, expected {expected}",
                    d.factor_count()
                )),
            )
        }
        Verdict::Hyperbolic if !c.conditions.ii.pass => {
            let w = tryop!(hyperbolic_witness(complex, pairs));
            ensure(Some(&w) == c.witness.as_ref(), || "witness mismatch".into())
        }
        Verdict::Hyperbolic => ensure(c.witness.is_none(), || "unexpected witness".into()),
    }
}

fn disk_dims(pairs: &PairSpec) -> Vec<u32> {
    pairs
        .pairs
        .iter()
        .map(|p| match p {
            VertexPair::DiskSphere(n) => *n,
            _ => 0,
        })
        .collect()
}

fn check_sphere_dimension(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Pairs { complex, pairs } = inst else {
        return Check::Invalid;
    };
    let n = disk_dims(pairs);
    for sigma in mmf(complex).faces {
        let expected: u32 = sigma.vertices().map(|v| n[v as usize - 1]).sum::<u32>() - 1;
        let got = tryop!(eval_cy_boundary(pairs, sigma));
        if got != FormalSpace::Sphere(expected) || expected < 3 {
            return Check::Fail(format!("{sigma}: evaluated {got}, expected S^{expected}"));
        }
    }
    Check::Pass
}

fn check_disk_sphere_dichotomy(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Pairs { complex, pairs } = inst else {
        return Check::Invalid;
    };
    let c = tryop!(classify(complex, pairs, ClassifyOptions::default()));
    let disjoint = mmf(complex).disjoint;
    ensure((c.verdict == Verdict::Elliptic) == disjoint, || {
        format!("verdict {:?} but mutually_disjoint = {disjoint}", c.verdict)
    })
}

fn check_normal_form(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Space { space } = inst else {
        return Check::Invalid;
    };
    let once = space.normalize();
    let twice = once.normalize();
    ensure(once == twice, || {
        format!("normalize({space}) = {once}, again {twice}")
    })
}

fn check_linkjoin(inst: &Instance, _ops: &Ops) -> Check {
    let Some((m, s1, s2, w, n)) = kbar_parts(inst) else {
        return Check::Invalid;
    };
    let pairs = PairSpec::new(n.iter().map(|d| VertexPair::DiskSphere(*d)).collect());
    let ok = tryop!(linkjoin_check(m, s1, s2, w, &pairs));
    ensure(ok, || {
        "sphere dimensions disagree across the link-join equivalence".into()
    })
}

fn check_pbw(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Generators {
        degrees,
        max_degree,
    } = inst
    else {
        return Check::Invalid;
    };
    let dims = tryop!(lie_dimensions::<BigInt>(degrees, *max_degree));
    let top = *max_degree as usize - 1;
    let exps: Vec<usize> = degrees.iter().map(|g| *g as usize).collect();
    let rebuilt = pbw_product(&dims, top);
    let target = IntegerSeries::geometric(&exps, top);
    check_all!(
        ensure(dims.iter().all(is_nonnegative), || "negative Lie rank"
            .into()),
        ensure(rebuilt == target, || {
            let k = (0..=top)
                .find(|k| rebuilt.coeff(*k) != target.coeff(*k))
                .unwrap_or(0);
            format!(
                "coefficient {k}: {} vs {}",
                rebuilt.coeff(k),
                target.coeff(k)
            )
        }),
    )
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

/// `W(k, n) = (1/n) Σ_{d | n} μ(d) k^{n/d}`, the dimension of the degree-`n`
/// part of the free Lie algebra on `k` generators.
pub fn witt_number(k: u64, n: u32) -> BigUint {
    let mut total = BigInt::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let term = num_traits::pow(BigInt::from(k), (n / d) as usize);
        total += term * mobius(d);
    }
    (total / BigInt::from(n))
        .to_biguint()
        .expect("Witt numbers are nonnegative")
}

fn check_witt(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Generators {
        degrees,
        max_degree,
    } = inst
    else {
        return Check::Invalid;
    };
    let g = degrees[0];
    if g % 2 == 1 || degrees.iter().any(|d| *d != g) {
        return Check::Invalid;
    }
    let r = tryop!(lie_ranks(degrees, *max_degree));
    for q in 2..=*max_degree {
        let want = if (q - 1) % g == 0 {
            witt_number(degrees.len() as u64, (q - 1) / g)
        } else {
            BigUint::zero()
        };
        if r.get(q) != want {
            return Check::Fail(format!(
                "degree {q}: rank {} but Witt gives {want}",
                r.get(q)
            ));
        }
    }
    Check::Pass
}

fn check_sphere_agreement(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Generators {
        degrees,
        max_degree,
    } = inst
    else {
        return Check::Invalid;
    };
    let d = degrees[0] + 1;
    let via_lie = tryop!(lie_ranks(degrees, *max_degree));
    let direct = tryop!(sphere_ranks(d, *max_degree));
    ensure(via_lie.ranks == direct.ranks, || {
        format!(
            "S^{d}: deflation {:?}, classical {:?}",
            via_lie.ranks, direct.ranks
        )
    })
}

fn check_additivity(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Factors {
        factors,
        max_degree,
    } = inst
    else {
        return Check::Invalid;
    };
    let pairs = PairSpec::disk_sphere(2, 1);
    let product = FormalSpace::Product(factors.clone()).normalize();
    let whole = tryop!(ranks_of_formal(&product, &pairs, *max_degree));
    let mut sum: Option<crate::ranks::RankSeries> = None;
    for f in factors {
        let r = tryop!(ranks_of_formal(&f.normalize(), &pairs, *max_degree));
        sum = Some(match sum {
            None => r,
            Some(acc) => acc.sum(&r),
        });
    }
    let sum = sum.expect("at least one factor");
    ensure(whole == sum, || {
        format!("product {:?} vs sum {:?}", whole.ranks, sum.ranks)
    })
}

fn check_monotone_growth(inst: &Instance, _ops: &Ops) -> Check {
    let Instance::Generators {
        degrees,
        max_degree,
    } = inst
    else {
        return Check::Invalid;
    };
    if degrees.len() < 2 {
        return Check::Invalid;
    }
    let r = tryop!(lie_ranks(degrees, *max_degree));
    let cum = r.cumulative();
    let top = *degrees.iter().max().expect("nonempty");
    let step = top.max(2) as usize;
    let mut c = 2 * top as usize + 2;
    while c + step <= *max_degree as usize {
        if cum[c + step] <= cum[c] {
            return Check::Fail(format!(
                "cumulative rank stalls between {c} and {}",
                c + step
            ));
        }
        c += step;
    }
    Check::Pass
}

/// The full property suite, in report order.
pub fn properties() -> Vec<Property> {
    vec![
        Property {
            name: "downward_closure",
            generate: gen_identity_complex,
            check: check_downward_closure,
        },
        Property {
            name: "star_link_deletion_pushout",
            generate: gen_identity_complex,
            check: check_pushout,
        },
        Property {
            name: "star_is_cone_on_link",
            generate: gen_identity_complex,
            check: check_star_join,
        },
        Property {
            name: "full_subcomplex_composition",
            generate: gen_restriction,
            check: check_full_subcomplex_composition,
        },
        Property {
            name: "join_associative_commutative",
            generate: gen_triple,
            check: check_join_laws,
        },
        Property {
            name: "mmf_round_trip",
            generate: gen_antichain,
            check: check_mmf_round_trip,
        },
        Property {
            name: "mmf_matches_brute_force",
            generate: gen_oracle_complex,
            check: check_mmf_oracle,
        },
        Property {
            name: "mmf_restriction_law",
            generate: gen_restriction,
            check: check_restriction_law,
        },
        Property {
            name: "kbar_reduced_faces_are_mmf_of_star",
            generate: gen_kbar,
            check: check_star_mmf,
        },
        Property {
            name: "kbar_reduced_boundaries_in_link",
            generate: gen_kbar,
            check: check_link_boundaries,
        },
        Property {
            name: "kbar_deletion_is_simplex",
            generate: gen_kbar,
            check: check_deletion_simplex,
        },
        Property {
            name: "join_mmf_is_disjoint_union",
            generate: gen_pair,
            check: check_join_mmf,
        },
        Property {
            name: "join_decomposition_reassembles",
            generate: gen_disjoint_mmf,
            check: check_join_decomposition,
        },
        Property {
            name: "classifier_matches_decomposition",
            generate: gen_general_pairs,
            check: check_classifier_soundness,
        },
        Property {
            name: "boundary_sphere_dimension",
            generate: gen_disk_pairs,
            check: check_sphere_dimension,
        },
        Property {
            name: "disk_sphere_elliptic_iff_disjoint",
            generate: gen_disk_pairs,
            check: check_disk_sphere_dichotomy,
        },
        Property {
            name: "normal_form_idempotent",
            generate: gen_space,
            check: check_normal_form,
        },
        Property {
            name: "linkjoin_degrees_agree",
            generate: gen_kbar,
            check: check_linkjoin,
        },
        Property {
            name: "pbw_reconstruction",
            generate: gen_generators,
            check: check_pbw,
        },
        Property {
            name: "witt_agreement",
            generate: gen_witt,
            check: check_witt,
        },
        Property {
            name: "sphere_agreement",
            generate: gen_sphere,
            check: check_sphere_agreement,
        },
        Property {
            name: "rank_additivity",
            generate: gen_factors,
            check: check_additivity,
        },
        Property {
            name: "hyperbolic_growth_monotone",
            generate: gen_multi_generators,
            check: check_monotone_growth,
        },
    ]
}

// ---------------------------------------------------------------------------
// shrinking

/// Drops vertex `v` from a complex, relabeling the rest; returns the kept old labels.
fn drop_vertex(k: &SimplicialComplex, v: u32) -> Option<(SimplicialComplex, Vec<u32>)> {
    if k.m() <= 1 {
        return None;
    }
    k.full_subcomplex(Face::full(k.m()).without(v)).ok()
}

fn complex_candidates(k: &SimplicialComplex) -> Vec<(SimplicialComplex, Vec<u32>)> {
    let mut out = Vec::new();
    let identity: Vec<u32> = (1..=k.m() as u32).collect();
    for i in 0..k.facets().len() {
        let facets: Vec<Face> = k
            .facets()
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, f)| *f)
            .collect();
        let smaller = fill_ghosts(k.m(), facets, k.vertex_set());
        if &smaller != k {
            out.push((smaller, identity.clone()));
        }
    }
    for v in 1..=k.m() as u32 {
        out.extend(drop_vertex(k, v));
    }
    out
}

fn candidates(inst: &Instance) -> Vec<Instance> {
    match inst {
        Instance::Complex { complex } => complex_candidates(complex)
            .into_iter()
            .map(|(complex, _)| Instance::Complex { complex })
            .collect(),
        Instance::Pairs { complex, pairs } => complex_candidates(complex)
            .into_iter()
            .map(|(complex, kept)| {
                let pairs = kept
                    .iter()
                    .map(|v| pairs.pairs[*v as usize - 1].clone())
                    .collect();
                Instance::Pairs {
                    complex,
                    pairs: PairSpec::new(pairs),
                }
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// Greedy shrinking: take the first smaller candidate that still fails, until none does.
pub fn shrink(prop: &Property, ops: &Ops, inst: Instance, message: String) -> (Instance, String) {
    let mut current = (inst, message);
    'outer: loop {
        for cand in candidates(&current.0) {
            if let Check::Fail(msg) = prop.check(&cand, ops) {
                current = (cand, msg);
                continue 'outer;
            }
        }
        return current;
    }
}

fn stream_id(prop_index: usize, instance: usize) -> u64 {
    ((prop_index as u64) << 32) | instance as u64
}

pub fn run_property(
    prop_index: usize,
    prop: &Property,
    cfg: &VerifyConfig,
    ops: &Ops,
) -> PropertyReport {
    let start = Instant::now();
    let mut failures: Vec<Failure> = (0..cfg.iterations)
        .into_par_iter()
        .filter_map(|i| {
            let inst = prop.generate(cfg, stream_id(prop_index, i));
            match prop.check(&inst, ops) {
                Check::Fail(msg) => {
                    let (counterexample, message) = shrink(prop, ops, inst, msg);
                    Some(Failure {
                        index: i,
                        message,
                        counterexample,
                    })
                }
                Check::Pass => None,
                Check::Invalid => Some(Failure {
                    index: i,
                    message: "generator produced an instance outside the property's hypotheses"
                        .into(),
                    counterexample: inst,
                }),
            }
        })
        .collect();
    failures.sort_by_key(|f| f.index);
    PropertyReport {
        name: prop.name,
        instances: cfg.iterations,
        passed: failures.is_empty(),
        failures,
        wall_ms: start.elapsed().as_millis() as u64,
    }
}

/// Runs every property; with zero iterations the report is empty.
pub fn run(cfg: &VerifyConfig, ops: &Ops) -> Result<Report> {
    cfg.validate()?;
    let properties: Vec<PropertyReport> = if cfg.iterations == 0 {
        Vec::new()
    } else {
        properties()
            .iter()
            .enumerate()
            .map(|(i, p)| run_property(i, p, cfg, ops))
            .collect()
    };
    Ok(Report {
        config: *cfg,
        passed: properties.iter().all(|p| p.passed),
        properties,
    })
}

/// Looks up a property by name.
pub fn property(name: &str) -> Option<(usize, Property)> {
    properties()
        .into_iter()
        .enumerate()
        .find(|(_, p)| p.name == name)
}

/// `Σ_{n <= up_to} W(k, n)`.
pub fn witt_cumulative(k: u64, up_to: u32) -> BigUint {
    (1..=up_to).map(|n| witt_number(k, n)).sum()
}
