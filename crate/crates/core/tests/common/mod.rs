//! Strategies and property bodies shared by the property suite and the
//! acceptance gate.

#![allow(dead_code)]

use modp_fgl::fp::{FpMatrix, Prime, SparseEchelon};
use modp_fgl::graded::{GradedPolynomial, Ring, RingDescriptor};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const PRIMES: [u64; 4] = [3, 5, 7, 11];

/// Mixed parities so that Koszul signs actually show up.
pub const VARS: [(&str, u32); 4] = [("a", 1), ("b", 2), ("c", 1), ("d", 3)];
pub const TARGET_VARS: [(&str, u32); 3] = [("u", 1), ("v", 2), ("w", 1)];

pub fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| Prime::new(p).unwrap())
}

pub fn ring(p: Prime, vars: &[(&str, u32)], truncation: u32) -> Ring {
    RingDescriptor::plain(p, vars, truncation).unwrap()
}

/// Random polynomial with up to `max_terms` terms.
pub fn poly(ring: Ring, max_terms: usize) -> BoxedStrategy<GradedPolynomial> {
    let p = ring.prime().get() as i64;
    let exps: Vec<BoxedStrategy<u16>> = (0..ring.len())
        .map(|i| {
            if ring.generator(i).is_odd() {
                (0u16..2).boxed()
            } else {
                (0u16..4).boxed()
            }
        })
        .collect();
    prop::collection::vec((1..p, exps), 0..=max_terms)
        .prop_map(move |terms| {
            let mut f = GradedPolynomial::zero(&ring);
            for (c, e) in terms {
                if let Some(m) = ring.monomial(e).unwrap() {
                    f = f
                        .add(&GradedPolynomial::from_monomial(&ring, c, m))
                        .unwrap();
                }
            }
            f
        })
        .boxed()
}

pub fn keep_terms(f: &GradedPolynomial, keep: impl Fn(u32, u32) -> bool) -> GradedPolynomial {
    let ring = f.ring();
    let mut out = GradedPolynomial::zero(ring);
    for (m, c) in f.terms() {
        if keep(m.degree(), m.weight()) {
            let t = GradedPolynomial::from_monomial(ring, c as i64, m.clone());
            out = out.add(&t).unwrap();
        }
    }
    out
}

/// Degree-`d` part of `f`.
pub fn homogeneous_part(f: &GradedPolynomial, d: u32) -> GradedPolynomial {
    keep_terms(f, |deg, _| deg == d)
}

pub fn without_constant(f: &GradedPolynomial) -> GradedPolynomial {
    keep_terms(f, |_, w| w > 0)
}

/// `(f, g, df, dg)` with `f`, `g` random in the test ring at truncation 10
/// and `df`, `dg` degrees to cut them to.
pub fn sign_law_case() -> impl Strategy<Value = (GradedPolynomial, GradedPolynomial, u32, u32)> {
    prime().prop_flat_map(|p| {
        let r = ring(p, &VARS, 10);
        (poly(r.clone(), 6), poly(r, 6), 0u32..=6, 0u32..=6)
    })
}

/// For homogeneous `a`, `b`: `a*b = (-1)^{|a||b|} b*a`.
pub fn sign_law(
    (f, g, df, dg): (GradedPolynomial, GradedPolynomial, u32, u32),
) -> Result<(), TestCaseError> {
    let a = homogeneous_part(&f, df);
    let b = homogeneous_part(&g, dg);
    let ab = a.mul(&b).unwrap();
    let ba = b.mul(&a).unwrap();
    let expected = if df % 2 == 1 && dg % 2 == 1 {
        ba.neg()
    } else {
        ba
    };
    prop_assert_eq!(ab, expected);
    Ok(())
}

/// Images of the source variables: terms of matching parity and of
/// truncation degree at least the variable's degree, so that no dropped
/// term can come back after substitution.
fn images(target: Ring, n: usize) -> impl Strategy<Value = Vec<GradedPolynomial>> {
    prop::collection::vec(poly(target, 4), n).prop_map(|raw| {
        raw.iter()
            .zip(VARS)
            .map(|(f, (_, deg))| keep_terms(f, |d, w| d % 2 == deg % 2 && w >= deg))
            .collect()
    })
}

pub fn substitution_case() -> impl Strategy<
    Value = (
        GradedPolynomial,
        GradedPolynomial,
        Ring,
        Vec<GradedPolynomial>,
    ),
> {
    (prime(), 4u32..=9).prop_flat_map(|(p, d)| {
        let src = ring(p, &VARS, d);
        let tgt = ring(p, &TARGET_VARS, d);
        (
            poly(src.clone(), 5),
            poly(src, 5),
            Just(tgt.clone()),
            images(tgt, VARS.len()),
        )
    })
}

/// `φ(f*g) = φ(f)*φ(g)` and `φ(f+g) = φ(f)+φ(g)`.
pub fn substitution_homomorphism(
    (f, g, tgt, imgs): (
        GradedPolynomial,
        GradedPolynomial,
        Ring,
        Vec<GradedPolynomial>,
    ),
) -> Result<(), TestCaseError> {
    let phi = |h: &GradedPolynomial| h.substitute(&tgt, &imgs).unwrap();
    let fg = f.mul(&g).unwrap();
    prop_assert_eq!(phi(&fg), phi(&f).mul(&phi(&g)).unwrap());
    prop_assert_eq!(phi(&f.add(&g).unwrap()), phi(&f).add(&phi(&g)).unwrap());
    Ok(())
}

pub fn truncation_case() -> impl Strategy<Value = (GradedPolynomial, GradedPolynomial, u32)> {
    prime().prop_flat_map(|p| {
        let r = ring(p, &VARS, 14);
        (poly(r.clone(), 6), poly(r, 6), 1u32..=10)
    })
}

/// Cutting the inputs at `d` before multiplying agrees with cutting the
/// product, both with `truncated` and by moving to a ring truncated at `d`.
pub fn truncation_coherence(
    (f, g, d): (GradedPolynomial, GradedPolynomial, u32),
) -> Result<(), TestCaseError> {
    let f = without_constant(&f);
    let g = without_constant(&g);
    let full = f.mul(&g).unwrap();
    let cut = f.truncated(d).mul(&g.truncated(d)).unwrap().truncated(d);
    prop_assert_eq!(&cut, &full.truncated(d));
    // a ring cannot be truncated below the degree of one of its variables
    if d < 3 {
        return Ok(());
    }
    let small = f.ring().with_truncation(d).unwrap();
    let fs = f.embed(&small).unwrap();
    let gs = g.embed(&small).unwrap();
    prop_assert_eq!(fs.mul(&gs).unwrap(), full.embed(&small).unwrap());
    Ok(())
}

pub fn matrix() -> impl Strategy<Value = FpMatrix> {
    (prime(), 1usize..=6, 1usize..=6).prop_flat_map(|(p, r, c)| {
        let q = p.get() as i64;
        // bias towards small entries so that rank deficiency is common
        let entry = prop_oneof![3 => 0i64..2, 1 => 0..q];
        prop::collection::vec(prop::collection::vec(entry, c), r)
            .prop_map(move |rows| FpMatrix::from_integers(p, &rows).unwrap())
    })
}

pub fn rank_case() -> impl Strategy<Value = (FpMatrix, usize, usize, i64)> {
    matrix().prop_flat_map(|m| {
        let r = m.rows();
        let q = m.prime().get() as i64;
        (Just(m), 0..r, 0..r, 1..q)
    })
}

/// Rank survives transposition, row swaps and nonzero row scaling; rref is
/// idempotent and rank-preserving; sparse elimination agrees with dense.
pub fn rank_invariances((m, i, j, s): (FpMatrix, usize, usize, i64)) -> Result<(), TestCaseError> {
    let p = m.prime();
    let rank = m.rank();
    prop_assert_eq!(m.transpose().rank(), rank);
    let rref = m.rref();
    prop_assert_eq!(rref.rank(), rank);
    prop_assert_eq!(rref.rref(), rref.clone());
    let mut swapped = m.clone();
    swapped.swap_rows(i, j);
    prop_assert_eq!(swapped.rank(), rank);
    let mut scaled = m.clone();
    scaled.scale_row(i, p.element(s));
    prop_assert_eq!(scaled.rank(), rank);
    let mut sparse = SparseEchelon::new(p);
    for r in 0..m.rows() {
        let row = m
            .row(r)
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(c, &v)| (c, v))
            .collect();
        sparse.insert(row);
    }
    prop_assert_eq!(sparse.rank(), rank);
    Ok(())
}
