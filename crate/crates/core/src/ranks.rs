//! Rational homotopy rank series.
//!
//! Ranks of free graded Lie algebras are extracted from the tensor-algebra
//! Hilbert series `1 / (1 - Σ_j t^{g_j})` by deflation: an odd-degree
//! generator contributes an exterior factor `(1 + t^i)`, an even-degree one a
//! polynomial factor `1 / (1 - t^i)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homotopy::{FormalSpace, PairSpec, VertexPair};
use crate::series::{Coeff, PowerSeries};
use crate::{IntegerSeries, Ratio, MAX_DEGREE_CAP};

/// Ranks of `π_q ⊗ Q` for `q <= max_degree`.
///
/// Only nonzero ranks are stored. When `exact_finite` is set the support is
/// complete, even if some of it lies above `max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSeries {
    pub ranks: BTreeMap<u32, BigUint>,
    pub max_degree: u32,
    pub exact_finite: bool,
}

impl RankSeries {
    pub fn zero(max_degree: u32) -> Self {
        RankSeries {
            ranks: BTreeMap::new(),
            max_degree,
            exact_finite: true,
        }
    }

    pub fn get(&self, q: u32) -> BigUint {
        self.ranks.get(&q).cloned().unwrap_or_default()
    }

    fn add_at(&mut self, q: u32, r: BigUint) {
        if r.is_zero() {
            return;
        }
        *self.ranks.entry(q).or_default() += r;
    }

    /// Coefficientwise sum. Exact-finite only if both are.
    pub fn sum(&self, other: &RankSeries) -> RankSeries {
        let mut out = RankSeries {
            ranks: self.ranks.clone(),
            max_degree: self.max_degree.min(other.max_degree),
            exact_finite: self.exact_finite && other.exact_finite,
        };
        for (q, r) in &other.ranks {
            out.add_at(*q, r.clone());
        }
        if !out.exact_finite {
            let cap = out.max_degree;
            out.ranks.retain(|q, _| *q <= cap);
        }
        out
    }

    /// Ranks of the loop space: `π_q(ΩX) = π_{q+1}(X)`. Degree 0 terms are dropped.
    fn looped(&self, max_degree: u32) -> RankSeries {
        let ranks = self
            .ranks
            .iter()
            .filter(|(q, _)| **q >= 1)
            .map(|(q, r)| (q - 1, r.clone()))
            .filter(|(q, _)| self.exact_finite || *q <= max_degree)
            .collect();
        RankSeries {
            ranks,
            max_degree,
            exact_finite: self.exact_finite,
        }
    }

    /// Running totals `Σ_{q <= n} rank_q` for `n = 0..=max_degree`.
    pub fn cumulative(&self) -> Vec<BigUint> {
        let mut acc = BigUint::zero();
        (0..=self.max_degree)
            .map(|n| {
                acc += self.get(n);
                acc.clone()
            })
            .collect()
    }
}

fn check_degree(n: u32) -> Result<()> {
    if n > MAX_DEGREE_CAP {
        return Err(Error::Precondition(format!(
            "max degree {n} exceeds the cap of {MAX_DEGREE_CAP}"
        )));
    }
    Ok(())
}

/// Ranks of `π_*(S^d) ⊗ Q`: degree `d` for odd `d`, degrees `d` and `2d - 1` for even `d`.
pub fn sphere_ranks(d: u32, max_degree: u32) -> Result<RankSeries> {
    if d < 2 {
        return Err(Error::Precondition(format!(
            "sphere dimension {d} is below 2"
        )));
    }
    check_degree(max_degree)?;
    let mut out = RankSeries::zero(max_degree);
    out.add_at(d, BigUint::one());
    if d.is_multiple_of(2) {
        out.add_at(2 * d - 1, BigUint::one());
    }
    Ok(out)
}

/// Deflation over any coefficient ring. Returns `r_1, ..., r_{N-1}` where
/// `r_i` is the dimension of the degree-`i` part of the free graded Lie algebra.
pub fn lie_dimensions<T: Coeff>(generator_degrees: &[u32], max_degree: u32) -> Result<Vec<T>> {
    if let Some(top) = generator_degrees.iter().max() {
        if *top > max_degree {
            return Err(Error::Precondition(format!(
                "max degree {max_degree} is below generator degree {top}"
            )));
        }
    }
    deflate(generator_degrees, max_degree)
}

/// Deflation without requiring every generator to lie inside the range.
fn deflate<T: Coeff>(generator_degrees: &[u32], max_degree: u32) -> Result<Vec<T>> {
    if generator_degrees.contains(&0) {
        return Err(Error::Precondition("generator of degree 0".into()));
    }
    if max_degree < 2 {
        return Err(Error::Precondition("max degree must be at least 2".into()));
    }
    check_degree(max_degree)?;
    let n = max_degree as usize - 1;
    let exps: Vec<usize> = generator_degrees.iter().map(|g| *g as usize).collect();
    let mut s = PowerSeries::<T>::geometric(&exps, n);
    let one = T::one();
    let minus_one = -T::one();
    let mut dims = Vec::with_capacity(n);
    for i in 1..=n {
        let r = s.coeff(i).clone();
        if r < T::zero() {
            return Err(Error::Invariant(format!(
                "negative Lie rank {r:?} in degree {i}"
            )));
        }
        if !r.is_zero() {
            if i % 2 == 1 {
                s.mul_binomial_power(i, &one, &-r.clone());
            } else {
                s.mul_binomial_power(i, &minus_one, &r);
            }
        }
        dims.push(r);
    }
    Ok(dims)
}

fn to_biguint(x: &BigInt) -> Result<BigUint> {
    match x.sign() {
        Sign::Minus => Err(Error::Invariant(format!("negative rank {x}"))),
        _ => Ok(x.magnitude().clone()),
    }
}

/// Ranks of `π_*(∨_j S^{g_j + 1}) ⊗ Q`: `ranks[q] = dim L_{q-1}` for the free
/// graded Lie algebra `L` on generators of the given degrees.
pub fn lie_ranks(generator_degrees: &[u32], max_degree: u32) -> Result<RankSeries> {
    let dims = lie_dimensions::<BigInt>(generator_degrees, max_degree)?;
    dims_to_ranks(&dims, max_degree)
}

fn dims_to_ranks(dims: &[BigInt], max_degree: u32) -> Result<RankSeries> {
    let mut out = RankSeries::zero(max_degree);
    out.exact_finite = false;
    for (i, r) in dims.iter().enumerate() {
        out.add_at(i as u32 + 2, to_biguint(r)?);
    }
    Ok(out)
}

/// `Π_{i odd} (1 + t^i)^{r_i} · Π_{i even} (1 - t^i)^{-r_i}` through degree `degree`,
/// with `dims[i - 1] = r_i`.
pub fn pbw_product(dims: &[BigInt], degree: usize) -> IntegerSeries {
    let mut s = IntegerSeries::one(degree);
    for (idx, r) in dims.iter().enumerate() {
        let i = idx + 1;
        if r.is_zero() || i > degree {
            continue;
        }
        if i % 2 == 1 {
            s.mul_binomial_power(i, &BigInt::one(), r);
        } else {
            s.mul_binomial_power(i, &-BigInt::one(), &-r.clone());
        }
    }
    s
}

fn x_ranks(pairs: &PairSpec, v: u32, max_degree: u32) -> Result<RankSeries> {
    match pairs.get(v)? {
        VertexPair::General {
            x_elliptic: true,
            x_rational_degrees: Some(degs),
            ..
        } => {
            let mut out = RankSeries::zero(max_degree);
            for d in degs {
                out.add_at(*d, BigUint::one());
            }
            Ok(out)
        }
        VertexPair::DiskSphere(_) => Ok(RankSeries::zero(max_degree)),
        _ => Err(Error::UnsupportedSpace(format!(
            "X_{v} has no finite rational data"
        ))),
    }
}

fn wedge_sphere_dims(children: &[FormalSpace]) -> Result<Vec<u32>> {
    children
        .iter()
        .map(|c| match c {
            FormalSpace::Sphere(a) if *a >= 2 => Ok(a - 1),
            other => Err(Error::UnsupportedSpace(format!(
                "wedge summand {other} is not a simply connected sphere"
            ))),
        })
        .collect()
}

fn space_ranks(space: &FormalSpace, pairs: &PairSpec, max_degree: u32) -> Result<RankSeries> {
    match space {
        FormalSpace::Contractible => Ok(RankSeries::zero(max_degree)),
        FormalSpace::Sphere(d) => sphere_ranks(*d, max_degree),
        FormalSpace::ExternalX(v) => x_ranks(pairs, *v, max_degree),
        FormalSpace::Wedge(children) => {
            let gens = wedge_sphere_dims(children)?;
            if max_degree < 2 {
                return Ok(RankSeries {
                    exact_finite: false,
                    ..RankSeries::zero(max_degree)
                });
            }
            dims_to_ranks(&deflate::<BigInt>(&gens, max_degree)?, max_degree)
        }
        FormalSpace::Product(children) => {
            let mut acc = RankSeries::zero(max_degree);
            for c in children {
                acc = acc.sum(&space_ranks(c, pairs, max_degree)?);
            }
            Ok(acc)
        }
        FormalSpace::LoopOf(inner) => {
            if let FormalSpace::Sphere(1) = **inner {
                return Err(Error::UnsupportedSpace("loops on S^1".into()));
            }
            Ok(space_ranks(inner, pairs, max_degree + 1)?.looped(max_degree))
        }
        other => Err(Error::UnsupportedSpace(other.to_string())),
    }
}

/// Rank series of a normalized product of loop spaces of spheres, of `X_i`,
/// and of wedges of spheres. Bare spheres and wedges are also accepted.
pub fn ranks_of_formal(
    space: &FormalSpace,
    pairs: &PairSpec,
    max_degree: u32,
) -> Result<RankSeries> {
    check_degree(max_degree)?;
    if &space.normalize() != space {
        return Err(Error::UnsupportedSpace(format!(
            "{space} is not normalized"
        )));
    }
    space_ranks(space, pairs, max_degree)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Growth {
    #[serde(rename = "polynomial")]
    PolynomialLike,
    #[serde(rename = "exponential")]
    ExponentialLike,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub cumulative: Vec<BigUint>,
    pub verdict: Growth,
    /// `cumulative[N] / cumulative[N-2]`, or 1 when undefined.
    pub ratio_tail: Ratio,
}

/// Smallest truncation degree for which the growth test on a truncated series is meaningful.
pub const MIN_GROWTH_DEGREE: u32 = 24;

/// Heuristic growth classification of a rank series.
///
/// Finite support is polynomial. A truncated series is exponential when the
/// cumulative rank at least quadruples over the upper half of the range and
/// still increases within the last four degrees.
pub fn growth_report(r: &RankSeries) -> Result<GrowthReport> {
    let n = r.max_degree as usize;
    if !r.exact_finite && r.max_degree < MIN_GROWTH_DEGREE {
        return Err(Error::Precondition(format!(
            "growth report needs max degree >= {MIN_GROWTH_DEGREE}, got {n}"
        )));
    }
    let cumulative = r.cumulative();
    let ratio_tail = if n >= 2 && !cumulative[n - 2].is_zero() {
        Ratio::new(
            BigInt::from(cumulative[n].clone()),
            BigInt::from(cumulative[n - 2].clone()),
        )
    } else {
        Ratio::one()
    };
    let verdict = if r.exact_finite {
        Growth::PolynomialLike
    } else {
        let half = &cumulative[n.div_ceil(2)];
        let top = &cumulative[n];
        let quadruples = if half.is_zero() {
            !top.is_zero()
        } else {
            top >= &(half * 4u32)
        };
        let still_growing = top > &cumulative[n - 4];
        if quadruples && still_growing {
            Growth::ExponentialLike
        } else {
            Growth::PolynomialLike
        }
    };
    Ok(GrowthReport {
        cumulative,
        verdict,
        ratio_tail,
    })
}

/// Exact ratio `cumulative[a] / cumulative[b]`; `None` when the denominator vanishes.
pub fn cumulative_ratio(cumulative: &[BigUint], a: usize, b: usize) -> Option<Ratio> {
    let den = cumulative.get(b)?;
    if den.is_zero() {
        return None;
    }
    Some(Ratio::new(
        BigInt::from(cumulative.get(a)?.clone()),
        BigInt::from(den.clone()),
    ))
}

pub(crate) fn is_nonnegative(x: &BigInt) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use FormalSpace::*;

    fn map(pairs: &[(u32, u64)]) -> BTreeMap<u32, BigUint> {
        pairs.iter().map(|(q, r)| (*q, BigUint::from(*r))).collect()
    }

    /// Witt numbers `(1/n) Σ_{d | n} μ(d) k^{n/d}`, computed without the deflation loop.
    fn witt(k: u128, n: u32) -> u128 {
        fn mobius(mut n: u32) -> i128 {
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
                sign = -sign;
            }
            sign
        }
        let mut total: i128 = 0;
        for d in 1..=n {
            if n.is_multiple_of(d) {
                total += mobius(d) * (k as i128).pow(n / d);
            }
        }
        (total / n as i128) as u128
    }

    #[test]
    fn sphere_ranks_cases() {
        assert_eq!(sphere_ranks(3, 20).unwrap().ranks, map(&[(3, 1)]));
        assert_eq!(sphere_ranks(2, 20).unwrap().ranks, map(&[(2, 1), (3, 1)]));
        assert_eq!(sphere_ranks(6, 20).unwrap().ranks, map(&[(6, 1), (11, 1)]));
        assert!(sphere_ranks(1, 20).is_err());
    }

    #[test]
    fn lie_ranks_cases() {
        assert_eq!(lie_ranks(&[2], 12).unwrap().ranks, map(&[(3, 1)]));
        assert_eq!(lie_ranks(&[1], 12).unwrap().ranks, map(&[(2, 1), (3, 1)]));
        let expected: Vec<(u32, u64)> = (1..=5).map(|n| (2 * n + 1, witt(2, n) as u64)).collect();
        assert_eq!(expected, vec![(3, 2), (5, 1), (7, 2), (9, 3), (11, 6)]);
        assert_eq!(lie_ranks(&[2, 2], 12).unwrap().ranks, map(&expected));
    }

    #[test]
    fn lie_ranks_errors() {
        assert!(lie_ranks(&[0], 12).is_err());
        assert!(lie_ranks(&[13], 12).is_err());
        assert!(lie_ranks(&[2], 1).is_err());
        assert!(lie_ranks(&[2], 201).is_err());
    }

    #[test]
    fn machine_words_agree_with_big_integers_at_small_degree() {
        let small = lie_dimensions::<i64>(&[1, 2, 3], 20).unwrap();
        let big = lie_dimensions::<BigInt>(&[1, 2, 3], 20).unwrap();
        assert_eq!(
            small.iter().map(|x| BigInt::from(*x)).collect::<Vec<_>>(),
            big
        );
    }

    #[test]
    fn pbw_reconstruction_small() {
        let dims = lie_dimensions::<BigInt>(&[1, 3], 16).unwrap();
        let lhs = pbw_product(&dims, 15);
        assert_eq!(lhs, IntegerSeries::geometric(&[1, 3], 15));
        assert!(dims.iter().all(is_nonnegative));
    }

    #[test]
    fn ranks_of_formal_cases() {
        let p = PairSpec::disk_sphere(2, 5);
        let z = ranks_of_formal(&Contractible, &p, 20).unwrap();
        assert!(z.ranks.is_empty() && z.exact_finite);

        let l3 = FormalSpace::loop_of(Sphere(3));
        let prod = Product(vec![l3.clone(), l3]);
        let r = ranks_of_formal(&prod, &p, 40).unwrap();
        assert_eq!(r.ranks, map(&[(2, 2)]));
        assert!(r.exact_finite);

        let w = FormalSpace::loop_of(Wedge(vec![Sphere(3), Sphere(3)]));
        let r = ranks_of_formal(&w, &p, 11).unwrap();
        assert_eq!(r.ranks, map(&[(2, 2), (4, 1), (6, 2), (8, 3), (10, 6)]));
        assert!(!r.exact_finite);

        let unnormalized = Product(vec![Contractible, Sphere(3)]);
        assert!(ranks_of_formal(&unnormalized, &p, 10).is_err());
        assert!(ranks_of_formal(&ExternalY(1), &p, 10).is_err());
    }

    #[test]
    fn elliptic_support_is_complete_beyond_max_degree() {
        let p = PairSpec::disk_sphere(2, 1);
        let r = ranks_of_formal(&FormalSpace::loop_of(Sphere(8)), &p, 5).unwrap();
        assert_eq!(r.ranks, map(&[(7, 1), (14, 1)]));
    }

    #[test]
    fn external_x_uses_supplied_degrees() {
        let p = PairSpec::new(vec![VertexPair::General {
            x_elliptic: true,
            x_rational_degrees: Some(vec![2, 3]),
            y_rational: crate::homotopy::FibreType::Sphere(1),
        }]);
        let r = ranks_of_formal(&FormalSpace::loop_of(ExternalX(1)), &p, 10).unwrap();
        assert_eq!(r.ranks, map(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn growth_cases() {
        let p = PairSpec::disk_sphere(2, 5);
        let l3 = FormalSpace::loop_of(Sphere(3));
        let r = ranks_of_formal(&Product(vec![l3.clone(), l3]), &p, 40).unwrap();
        assert_eq!(growth_report(&r).unwrap().verdict, Growth::PolynomialLike);

        let w = FormalSpace::loop_of(Wedge(vec![Sphere(3), Sphere(3)]));
        let r = ranks_of_formal(&w, &p, 30).unwrap();
        let g = growth_report(&r).unwrap();
        assert_eq!(g.verdict, Growth::ExponentialLike);
        // Witt oracle: cumulative[30] = Σ_{n <= 15} W(2, n)
        let expected: u128 = (1..=15).map(|n| witt(2, n)).sum();
        assert_eq!(g.cumulative[30], BigUint::from(expected));

        let zero = RankSeries::zero(30);
        let g = growth_report(&zero).unwrap();
        assert_eq!(g.verdict, Growth::PolynomialLike);
        assert_eq!(g.ratio_tail, Ratio::one());

        let short = ranks_of_formal(&w, &p, 20).unwrap();
        assert!(growth_report(&short).is_err());
    }
}
