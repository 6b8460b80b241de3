//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use polyprod::ranks::{cumulative_ratio, lie_dimensions, pbw_product};
use polyprod::verify::{self, Check, Instance, Ops, VerifyConfig};
use polyprod::{
    classify, growth_report, lie_ranks, mmf, mmf_brute_force, mutually_disjoint, ranks_of_formal,
    ClassifyOptions, Face, FibreType, FormalSpace, Growth, IntegerSeries, PairSpec, Ratio,
    SimplicialComplex, Verdict, VertexPair,
};

const SEED: u64 = 20240501;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn criterion(id: u32, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let took = start.elapsed();
    let in_time = took < limit;
    let ok = out.ok && in_time;
    let timing = if in_time {
        String::new()
    } else {
        format!("; over the {limit:?} limit")
    };
    println!(
        "{} [{id}] {name}: {} ({:.1} ms{timing})",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64() * 1e3
    );
    ok
}

fn dichotomy_on_random_complexes() -> Outcome {
    let mut elliptic = 0;
    for i in 0..500u64 {
        let k = verify::random_complex(&mut verify::instance_rng(SEED, i), 10);
        let c = match classify(
            &k,
            &PairSpec::disk_sphere(2, k.m()),
            ClassifyOptions::default(),
        ) {
            Ok(c) => c,
            Err(e) => return fail(format!("instance {i}: {e}")),
        };
        let disjoint = mutually_disjoint(&mmf(&k).faces);
        if (c.verdict == Verdict::Elliptic) != disjoint {
            return fail(format!("instance {i}: {k} classified {:?}", c.verdict));
        }
        elliptic += disjoint as usize;
    }
    pass(format!(
        "500/500 agree ({elliptic} elliptic, {} hyperbolic)",
        500 - elliptic
    ))
}

fn mmf_oracle() -> Outcome {
    let mut faces = 0;
    for i in 0..300u64 {
        let k = verify::random_complex(&mut verify::instance_rng(SEED ^ 0x2, i), 12);
        let fast = mmf(&k);
        if fast != mmf_brute_force(&k, false) {
            return fail(format!("instance {i}: {k}"));
        }
        faces += fast.len();
    }
    pass(format!(
        "300/300 agree ({faces} minimal missing faces in total)"
    ))
}

fn run_property(name: &str, count: usize, cfg: &VerifyConfig) -> Result<(), String> {
    let (index, prop) = verify::property(name).ok_or(format!("no property {name}"))?;
    for i in 0..count {
        let inst = prop.generate(cfg, ((index as u64) << 32) | i as u64);
        match prop.check(&inst, &Ops::default()) {
            Check::Pass => {}
            other => {
                let doc = serde_json::to_string(&inst).unwrap();
                return Err(format!("{name} instance {i}: {other:?} on {doc}"));
            }
        }
    }
    Ok(())
}

fn kbar_lemmas() -> Outcome {
    let cfg = VerifyConfig {
        seed: SEED,
        iterations: 200,
        max_m: 10,
    };
    for name in [
        "kbar_reduced_faces_are_mmf_of_star",
        "kbar_reduced_boundaries_in_link",
        "kbar_deletion_is_simplex",
    ] {
        if let Err(e) = run_property(name, 200, &cfg) {
            return fail(e);
        }
    }
    pass("3 x 200 instances, zero failures")
}

fn join_reassembly() -> Outcome {
    let cfg = VerifyConfig {
        seed: SEED,
        iterations: 200,
        max_m: 12,
    };
    let mut sizes = [0usize; 4];
    for i in 0..200u64 {
        let inst = verify::gen_disjoint_mmf(&mut verify::instance_rng(SEED ^ 0x4, i), &cfg);
        if let Instance::Antichain { faces, .. } = &inst {
            sizes[faces.len()] += 1;
        }
        if let Check::Fail(msg) = verify::check_join_decomposition(&inst, &Ops::default()) {
            return fail(format!("instance {i}: {msg}"));
        }
    }
    pass(format!(
        "200/200 reassemble exactly (1/2/3 faces: {}/{}/{})",
        sizes[1], sizes[2], sizes[3]
    ))
}

fn moment_angle_spheres() -> Outcome {
    for m in 2..=8usize {
        let k = SimplicialComplex::boundary_of_simplex(Face::full(m), m).unwrap();
        let c = classify(&k, &PairSpec::disk_sphere(2, m), ClassifyOptions::default()).unwrap();
        let want = FormalSpace::loop_of(FormalSpace::Sphere(2 * m as u32 - 1));
        if c.verdict != Verdict::Elliptic || c.decomposition.as_ref() != Some(&want) {
            return fail(format!("m = {m}: {:?} {:?}", c.verdict, c.decomposition));
        }
    }
    pass("m = 2..8 give ΩS^3, ΩS^5, ..., ΩS^15")
}

fn rank_engine() -> Outcome {
    let r = lie_ranks(&[2, 2], 40).unwrap();
    for q in 1..=40u32 {
        let want = if q % 2 == 1 && q >= 3 {
            verify::witt_number(2, (q - 1) / 2)
        } else {
            BigUint::zero()
        };
        if r.get(q) != want {
            return fail(format!("degree {q}: {} vs Witt {want}", r.get(q)));
        }
    }
    let dims = lie_dimensions::<BigInt>(&[2, 2], 40).unwrap();
    if pbw_product(&dims, 39) != IntegerSeries::geometric(&[2, 2], 39) {
        return fail("PBW reconstruction differs below degree 40");
    }
    let head: Vec<String> = (1..=8).map(|n| r.get(2 * n + 1).to_string()).collect();
    pass(format!(
        "Witt match at every degree (W(2,1..8) = {}), PBW exact to 39",
        head.join(", ")
    ))
}

fn growth_dichotomy() -> Outcome {
    let pairs = PairSpec::disk_sphere(2, 1);
    let l3 = FormalSpace::loop_of(FormalSpace::Sphere(3));
    let prod = FormalSpace::Product(vec![l3.clone(), l3]).normalize();
    let r = ranks_of_formal(&prod, &pairs, 40).unwrap();
    let g = growth_report(&r).unwrap();
    let support: Vec<(u32, String)> = r.ranks.iter().map(|(q, n)| (*q, n.to_string())).collect();
    if g.verdict != Growth::PolynomialLike || !r.exact_finite || support != [(2, "2".into())] {
        return fail(format!("product: {:?} {support:?}", g.verdict));
    }
    let wedge = FormalSpace::loop_of(FormalSpace::Wedge(vec![
        FormalSpace::Sphere(3),
        FormalSpace::Sphere(3),
    ]));
    let r = ranks_of_formal(&wedge, &pairs, 40).unwrap();
    let g = growth_report(&r).unwrap();
    let ratio = cumulative_ratio(&g.cumulative, 40, 20).unwrap();
    let oracle: BigUint = (1..=20).map(|n| verify::witt_number(2, n)).sum();
    if g.verdict != Growth::ExponentialLike
        || ratio < Ratio::from_integer(4.into())
        || g.cumulative[40] != oracle
    {
        return fail(format!("wedge: {:?}, ratio {ratio}", g.verdict));
    }
    pass(format!(
        "product polynomial {{2: 2}}; wedge exponential, cumulative[40]/cumulative[20] = {ratio} (about {:.1})",
        ratio.to_f64().unwrap_or(f64::NAN)
    ))
}

fn general(x_elliptic: bool, y: FibreType) -> VertexPair {
    VertexPair::General {
        x_elliptic,
        x_rational_degrees: Some(Vec::new()),
        y_rational: y,
    }
}

fn truth_table() -> Outcome {
    let disjoint =
        polyprod::complex_from_mmf(5, &[Face::new([1, 2]).unwrap(), Face::new([3, 4]).unwrap()])
            .unwrap();
    let crossing =
        polyprod::complex_from_mmf(5, &[Face::new([1, 2]).unwrap(), Face::new([2, 3]).unwrap()])
            .unwrap();
    let mut cases = Vec::new();
    for fail_i in [false, true] {
        for fail_ii in [false, true] {
            for fail_iii in [false, true] {
                let y1 = if fail_iii {
                    FibreType::Big(2)
                } else {
                    FibreType::Sphere(1)
                };
                let mut pairs = vec![general(true, FibreType::Sphere(1)); 5];
                pairs[0] = general(!fail_i, y1);
                let k = if fail_ii { &crossing } else { &disjoint };
                cases.push((k.clone(), pairs, [fail_i, fail_ii, fail_iii]));
            }
        }
    }
    // a non-sphere fibre away from every minimal missing face is harmless
    let mut pairs = vec![general(true, FibreType::Sphere(1)); 5];
    pairs[4] = general(true, FibreType::Big(3));
    cases.push((disjoint.clone(), pairs, [false, false, false]));

    for (n, (k, pairs, fails)) in cases.iter().enumerate() {
        let c = match classify(k, &PairSpec::new(pairs.clone()), ClassifyOptions::default()) {
            Ok(c) => c,
            Err(e) => return fail(format!("case {n}: {e}")),
        };
        let want = if fails.iter().any(|f| *f) {
            Verdict::Hyperbolic
        } else {
            Verdict::Elliptic
        };
        let got = [
            !c.conditions.i.pass,
            !c.conditions.ii.pass,
            !c.conditions.iii.pass,
        ];
        let evidence_ok = (c.conditions.i.non_elliptic_vertices
            == if fails[0] { vec![1] } else { vec![] })
            && (c.conditions.ii.intersecting_pair.is_some() == fails[1])
            && (c.conditions.iii.non_sphere_vertices == if fails[2] { vec![1] } else { vec![] })
            && (c.witness.is_some() == fails[1])
            && (c.decomposition.is_some() == (want == Verdict::Elliptic));
        if c.verdict != want || got != *fails || !evidence_ok {
            return fail(format!(
                "case {n} {fails:?}: got {:?} with conditions {got:?}",
                c.verdict
            ));
        }
    }
    pass("9/9 cases give the expected verdict and evidence")
}

fn main() -> ExitCode {
    let results = [
        criterion(
            1,
            "disk-sphere verdict equals MMF disjointness",
            Duration::from_secs(10),
            dichotomy_on_random_complexes,
        ),
        criterion(
            2,
            "fast MMF enumeration equals brute force",
            Duration::from_secs(30),
            mmf_oracle,
        ),
        criterion(
            3,
            "two-face complex lemmas (star, link, deletion)",
            Duration::from_secs(10),
            kbar_lemmas,
        ),
        criterion(
            4,
            "join decomposition reassembly",
            Duration::from_secs(10),
            join_reassembly,
        ),
        criterion(
            5,
            "moment-angle complexes of simplex boundaries",
            Duration::from_secs(1),
            moment_angle_spheres,
        ),
        criterion(
            6,
            "rank engine exactness",
            Duration::from_secs(5),
            rank_engine,
        ),
        criterion(
            7,
            "growth dichotomy at desk scale",
            Duration::from_secs(5),
            growth_dichotomy,
        ),
        criterion(
            8,
            "condition truth table",
            Duration::from_secs(1),
            truth_table,
        ),
    ];
    let passed = results.iter().filter(|r| **r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
