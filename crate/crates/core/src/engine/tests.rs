use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::arith::{int, rat};

fn lat(rows: &[&[i64]]) -> Lattice {
    Lattice::from_int_rows(rows[0].len(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn thin_box() -> ConvexBody {
    ConvexBody::new_box(vec![int(1), rat(2, 25)]).unwrap()
}

fn congruences() -> Vec<Lattice> {
    vec![lat(&[&[1, 0], &[0, 2]]), lat(&[&[5, 0], &[0, 1]])]
}

fn s() -> EngineSettings {
    EngineSettings::default()
}

fn ivec(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

/// Brute force over a coordinate box, independent of the gauge-form walk.
fn brute_points(body: &ConvexBody, lattice: &Lattice, radius: &Rational, reach: i64) -> Vec<Vec<Rational>> {
    let r = lattice.rank();
    let mut out = Vec::new();
    let mut z = vec![-reach; r];
    loop {
        let coords: Vec<BigInt> = z.iter().map(|&v| BigInt::from(v)).collect();
        let x = lattice.point(&coords);
        if !z.iter().all(|&v| v == 0) && body.gauge(&x) <= *radius {
            out.push(x);
        }
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            if z[i] < reach {
                z[i] += 1;
                break;
            }
            z[i] = -reach;
            i += 1;
        }
    }
}

#[test]
fn enumerate_examples() {
    let pts = enumerate_points(&ConvexBody::cube(2), &Lattice::integer(2), &int(1), &s()).unwrap();
    assert_eq!(pts.len(), 8);
    let pts = enumerate_points(&thin_box(), &Lattice::integer(2), &int(1), &s()).unwrap();
    let mut v: Vec<_> = pts.iter().map(|p| p.vector.clone()).collect();
    v.sort();
    assert_eq!(v, vec![ivec(&[-1, 0]), ivec(&[1, 0])]);
    let two = lat(&[&[2, 0], &[0, 2]]);
    assert!(enumerate_points(&ConvexBody::cube(2), &two, &int(1), &s()).unwrap().is_empty());
    assert!(enumerate_points(&ConvexBody::cube(2), &two, &int(0), &s()).unwrap().is_empty());
}

#[test]
fn enumerate_matches_brute_force() {
    let l = lat(&[&[2, 1, 0], &[0, 3, 1], &[1, 0, 2]]);
    let k = ConvexBody::new_box(vec![rat(3, 2), int(2), rat(5, 4)]).unwrap();
    let r = rat(7, 3);
    let mut fast: Vec<_> = enumerate_points(&k, &l, &r, &s()).unwrap().into_iter().map(|p| p.vector).collect();
    let mut slow = brute_points(&k, &l, &r, 6);
    fast.sort();
    slow.sort();
    assert_eq!(fast, slow);

    let cross = ConvexBody::cross_polytope(2).unwrap();
    let l2 = lat(&[&[1, 2], &[3, -1]]);
    let mut fast: Vec<_> = enumerate_points(&cross, &l2, &int(5), &s()).unwrap().into_iter().map(|p| p.vector).collect();
    let mut slow = brute_points(&cross, &l2, &int(5), 8);
    fast.sort();
    slow.sort();
    assert_eq!(fast, slow);
}

#[test]
fn budget_is_enforced() {
    let tight = EngineSettings::default().with_budget(10);
    assert!(matches!(
        enumerate_points(&ConvexBody::cube(2), &Lattice::integer(2), &int(10), &tight),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn minima_examples() {
    let r = successive_minima(&ConvexBody::cube(2), &Lattice::integer(2), 2, &s()).unwrap();
    assert_eq!(r.values, vec![int(1), int(1)]);
    assert_eq!(r.witnesses, vec![ivec(&[1, 0]), ivec(&[0, 1])]);
    assert_eq!(r.certificate.kind, CertificateKind::Minkowski);

    let bar = lat(&[&[5, 0], &[0, 2]]);
    let r = successive_minima(&thin_box(), &bar, 1, &s()).unwrap();
    assert_eq!(r.values, vec![int(5)]);
    assert_eq!(r.witnesses, vec![ivec(&[5, 0])]);

    let d = lat(&[&[1, 0], &[0, 3]]);
    let r = successive_minima(&ConvexBody::cube(2), &d, 2, &s()).unwrap();
    assert_eq!(r.values, vec![int(1), int(3)]);

    assert!(successive_minima(&ConvexBody::cube(2), &d, 3, &s()).is_err());
    assert!(successive_minima(&ConvexBody::cube(2), &d, 0, &s()).is_err());
}

#[test]
fn minima_of_lower_rank_lattice() {
    let line = lat(&[&[2, 3, 0]]);
    let r = successive_minima(&ConvexBody::cube(3), &line, 1, &s()).unwrap();
    assert_eq!(r.values, vec![int(3)]);
    assert_eq!(r.certificate.kind, CertificateKind::Doubling);
    let plane = lat(&[&[1, 1, 0], &[0, 1, 1]]);
    let r = successive_minima(&ConvexBody::cube(3), &plane, 2, &s()).unwrap();
    assert_eq!(r.values, vec![int(1), int(1)]);
}

#[test]
fn restricted_examples() {
    let z2 = Lattice::integer(2);
    let f = ForbiddenCollection::new(&z2, congruences()).unwrap();
    assert_eq!(f.kind(), ForbiddenKind::Full);
    let r = restricted_minima(&thin_box(), &z2, &f, 1, &s()).unwrap();
    assert_eq!(r.values, vec![rat(25, 2)]);
    assert_eq!(r.witnesses, vec![ivec(&[1, 1])]);
    assert_eq!(r.certificate.kind, CertificateKind::AvoidFullRank);
    assert_eq!(r.certificate.radius, int(20));
    assert!(witnesses_consistent(&thin_box(), &z2, &f, &r));

    let r2 = restricted_minima(&thin_box(), &z2, &f, 2, &s()).unwrap();
    assert_eq!(r2.values, vec![rat(25, 2), rat(25, 2)]);
    assert_eq!(r2.certificate.kind, CertificateKind::AvoidFullRankHigher);

    let axis = ForbiddenCollection::new(&z2, vec![lat(&[&[1, 0]])]).unwrap();
    assert_eq!(axis.kind(), ForbiddenKind::Lower);
    let r = restricted_minima(&ConvexBody::cube(2), &z2, &axis, 1, &s()).unwrap();
    assert_eq!(r.values, vec![int(1)]);
    assert_eq!(r.witnesses, vec![ivec(&[0, 1])]);
    assert_eq!(r.certificate.kind, CertificateKind::AvoidLowerRank);

    let two = ForbiddenCollection::new(&z2, vec![lat(&[&[2, 0], &[0, 2]])]).unwrap();
    let r = restricted_minima(&ConvexBody::cube(2), &z2, &two, 2, &s()).unwrap();
    assert_eq!(r.values, vec![int(1), int(1)]);
    assert_eq!(r.witnesses, vec![ivec(&[1, 0]), ivec(&[0, 1])]);
}

#[test]
fn restricted_rejections() {
    let z2 = Lattice::integer(2);
    let cover = vec![lat(&[&[1, 0], &[0, 2]]), lat(&[&[2, 0], &[0, 1]]), lat(&[&[1, 1], &[0, 2]])];
    let f = ForbiddenCollection::new(&z2, cover).unwrap();
    assert!(matches!(restricted_minima(&ConvexBody::cube(2), &z2, &f, 1, &s()), Err(Error::EmptyAdmissibleSet)));
    assert!(matches!(
        restricted_minima_doubling(&ConvexBody::cube(2), &z2, &f, 1, &s()),
        Err(Error::EmptyAdmissibleSet)
    ));
    let half = lat(&[&[1, 0], &[0, 1]]).scaled(&rat(1, 2)).unwrap();
    assert!(matches!(ForbiddenCollection::new(&z2, vec![half]), Err(Error::NotSublattice)));
}

#[test]
fn mixed_collections_use_doubling() {
    let z2 = Lattice::integer(2);
    let f = ForbiddenCollection::new(&z2, vec![lat(&[&[1, 0]]), lat(&[&[2, 0], &[0, 2]])]).unwrap();
    assert_eq!(f.kind(), ForbiddenKind::Mixed);
    let r = restricted_minima(&ConvexBody::cube(2), &z2, &f, 2, &s()).unwrap();
    assert_eq!(r.certificate.kind, CertificateKind::Doubling);
    assert_eq!(r.values, vec![int(1), int(1)]);
    assert_eq!(r.witnesses, vec![ivec(&[0, 1]), ivec(&[1, 1])]);
}

#[test]
fn zero_rank_part_forbids_only_origin() {
    let z2 = Lattice::integer(2);
    let f = ForbiddenCollection::new(&z2, vec![Lattice::zero(2)]).unwrap();
    let r = restricted_minima(&ConvexBody::cube(2), &z2, &f, 2, &s()).unwrap();
    assert_eq!(r.values, vec![int(1), int(1)]);
}

#[test]
fn count_examples() {
    let z2 = Lattice::integer(2);
    assert_eq!(count_points(&ConvexBody::cube(2), &z2, &int(1), &s()).unwrap(), BigInt::from(9));
    assert_eq!(count_points(&ConvexBody::cube(2), &z2, &int(2), &s()).unwrap(), BigInt::from(25));
    assert_eq!(count_points(&thin_box(), &z2, &rat(25, 2), &s()).unwrap(), BigInt::from(75));
    assert_eq!(count_points(&thin_box(), &z2, &int(0), &s()).unwrap(), BigInt::from(1));
    assert!(count_points(&thin_box(), &z2, &int(-1), &s()).is_err());
}

#[test]
fn coset_examples() {
    let z2 = Lattice::integer(2);
    let two = lat(&[&[2, 0], &[0, 2]]);
    assert_eq!(distinct_cosets_in_body(&ConvexBody::cube(2), &z2, &two, &int(1), &s()).unwrap(), 4);
    assert_eq!(distinct_cosets_in_body(&ConvexBody::cube(2), &z2, &two, &int(0), &s()).unwrap(), 1);
    // 0 and (±1, 0) meet three distinct classes modulo 5Z x 2Z
    let bar = lat(&[&[5, 0], &[0, 2]]);
    assert_eq!(distinct_cosets_in_body(&thin_box(), &z2, &bar, &int(1), &s()).unwrap(), 3);
}

#[test]
fn covering_examples() {
    let z2 = Lattice::integer(2);
    assert_eq!(covering_radius_diagonal(&ConvexBody::cube(2), &z2).unwrap(), rat(1, 2));
    assert_eq!(covering_radius_diagonal(&ConvexBody::cube(2), &lat(&[&[2, 0], &[0, 2]])).unwrap(), int(1));
    assert_eq!(covering_radius_diagonal(&thin_box(), &z2).unwrap(), rat(25, 4));
    assert!(matches!(
        covering_radius_diagonal(&ConvexBody::cube(2), &lat(&[&[1, 1], &[0, 2]])),
        Err(Error::Unsupported(_))
    ));
    assert!(covering_radius_diagonal(&ConvexBody::cross_polytope(2).unwrap(), &z2).is_err());
}

#[test]
fn torus_examples() {
    let three = lat(&[&[3, 0], &[0, 3]]);
    let k = ConvexBody::cube(2);
    assert_eq!(torus_packing_volume(&k, &three, &rat(3, 2), &s()).unwrap(), int(9));
    assert_eq!(torus_packing_volume(&k, &three, &int(1), &s()).unwrap(), int(4));
    assert_eq!(torus_packing_volume(&k, &Lattice::integer(2), &rat(1, 2), &s()).unwrap(), int(1));
    assert!(matches!(torus_packing_volume(&k, &three, &int(2), &s()), Err(Error::PackingViolated(_))));
}

#[test]
fn torus_estimate_is_reproducible() {
    let three = lat(&[&[3, 0], &[0, 3]]);
    let k = ConvexBody::cube(2);
    let a = torus_volume_estimate(&k, &three, &int(1), 20_000, 7).unwrap();
    let b = torus_volume_estimate(&k, &three, &int(1), 20_000, 7).unwrap();
    assert_eq!(a, b);
    assert!((a.mean - 4.0).abs() < 4.0 * a.std_error + 1e-9);
    let full = torus_volume_estimate(&k, &three, &int(3), 1000, 1).unwrap();
    assert_eq!(full.mean, 9.0);
}

#[test]
fn result_json_shape() {
    let r = successive_minima(&thin_box(), &lat(&[&[5, 0], &[0, 2]]), 1, &s()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["values"][0], "5");
    assert_eq!(v["witnesses"][0][0], "5");
    assert_eq!(v["certificate"]["kind"], "minkowski");
    let back: MinimaResult = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

fn small_rational(max_num: i64) -> impl Strategy<Value = Rational> {
    (1..=max_num, 1..=4i64).prop_map(|(p, q)| rat(p, q))
}

fn instance(n: usize) -> impl Strategy<Value = (ConvexBody, Lattice)> {
    let widths = proptest::collection::vec(small_rational(8), n);
    let entries = proptest::collection::vec(-2..=2i64, n * n);
    let diag = proptest::collection::vec(1..=3i64, n);
    (widths, entries, diag).prop_map(move |(w, e, d)| {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { d[i] } else if j > i { e[i * n + j] } else { 0 }).collect())
            .collect();
        (ConvexBody::new_box(w).unwrap(), Lattice::from_int_rows(n, &rows).unwrap())
    })
}

/// A full-rank congruence sublattice `{x : c.x = 0 mod q}` of `Z^n`.
fn congruence(n: usize, c: &[i64], q: i64) -> Lattice {
    let mut gens: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { q } else { 0 }).collect())
        .collect();
    let pivot = c.iter().position(|&x| x.rem_euclid(q) != 0);
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = 1;
        if let Some(p) = pivot {
            if p != i {
                // solve c_p t + c_i = 0 mod q by search
                if let Some(t) = (0..q).find(|t| (c[p] * t + c[i]).rem_euclid(q) == 0) {
                    v[p] = t;
                    gens.push(v);
                }
                continue;
            }
        } else {
            gens.push(v);
        }
    }
    let rows: Vec<Vec<Rational>> = gens.iter().map(|r| ivec(r)).collect();
    Lattice::from_generators(n, rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dilation_rescales_minima((k, l) in instance(2), p in 1..=5i64, q in 1..=5i64) {
        let mu = rat(p, q);
        let base = successive_minima(&k, &l, 2, &s()).unwrap();
        let scaled = successive_minima(&k.dilate(&mu).unwrap(), &l, 2, &s()).unwrap();
        prop_assert_eq!(scaled.values, dilate_values(&base.values, &mu));
    }

    #[test]
    fn minima_are_monotone_and_bounded((k, l) in instance(3)) {
        let r = successive_minima(&k, &l, 3, &s()).unwrap();
        prop_assert!(r.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(witnesses_consistent(&k, &l, &ForbiddenCollection::empty(), &r));
        // lambda_1^n vol <= 2^n det
        let n = 3u32;
        let lhs = rational::pow(&r.values[0], n) * k.volume();
        prop_assert!(lhs <= rational::pow2(n) * l.det().unwrap());
        // lambda_1 ... lambda_n vol <= 2^n det
        let prod: Rational = r.values.iter().product();
        prop_assert!(prod * k.volume() <= rational::pow2(n) * l.det().unwrap());
    }

    #[test]
    fn restricted_dominate_unrestricted((k, _l) in instance(2), c0 in 0..4i64, c1 in 0..4i64, q in 2..=4i64) {
        let z2 = Lattice::integer(2);
        let part = congruence(2, &[c0, c1], q);
        prop_assume!(part.index_of(&part).is_ok() && z2.index_of(&part).unwrap() > BigInt::from(1));
        let f = ForbiddenCollection::new(&z2, vec![part]).unwrap();
        let plain = successive_minima(&k, &z2, 2, &s()).unwrap();
        let restricted = restricted_minima(&k, &z2, &f, 2, &s()).unwrap();
        for (a, b) in plain.values.iter().zip(&restricted.values) {
            prop_assert!(a <= b);
        }
        prop_assert!(witnesses_consistent(&k, &z2, &f, &restricted));
    }

    #[test]
    fn certified_matches_doubling(
        (k, l) in instance(2),
        kind in 0..3usize,
        c0 in 0..4i64,
        c1 in 0..4i64,
        q in 2..=3i64,
        j in 1..=2usize,
    ) {
        let z2 = Lattice::integer(2);
        let parts = match kind {
            0 => vec![lat(&[&[c0.max(1), c1]])],
            1 => vec![congruence(2, &[c0, c1], q)],
            _ => vec![congruence(2, &[c0, c1], q), congruence(2, &[c1, c0 + 1], 5 - q)],
        };
        let _ = l;
        prop_assume!(parts.iter().all(|p| p.is_sublattice_of(&z2)));
        let f = ForbiddenCollection::new(&z2, parts).unwrap();
        let certified = restricted_minima(&k, &z2, &f, j, &s());
        let doubling = restricted_minima_doubling(&k, &z2, &f, j, &s());
        match (certified, doubling) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a.values, &b.values);
                prop_assert!(a.values[j - 1] <= a.certificate.radius);
            }
            (Err(Error::EmptyAdmissibleSet), Err(Error::EmptyAdmissibleSet)) => {}
            (a, b) => prop_assert!(false, "mismatch: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn enlarging_forbidden_never_decreases((k, _l) in instance(2), q in 2..=4i64) {
        let z2 = Lattice::integer(2);
        let small = ForbiddenCollection::new(&z2, vec![lat(&[&[1, 0]])]).unwrap();
        let big = ForbiddenCollection::new(&z2, vec![lat(&[&[1, 0]]), congruence(2, &[1, 1], q)]).unwrap();
        let a = restricted_minima(&k, &z2, &small, 2, &s()).unwrap();
        let b = restricted_minima(&k, &z2, &big, 2, &s()).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!(x <= y);
        }
    }

    #[test]
    fn counts_are_consistent_with_enumeration((k, l) in instance(2), p in 0..=6i64) {
        let lambda = rat(p, 2);
        let c = count_points(&k, &l, &lambda, &s()).unwrap();
        let pts = enumerate_points(&k, &l, &lambda, &s()).unwrap();
        prop_assert_eq!(c, BigInt::from(pts.len() + 1));
        prop_assert!(pts.iter().all(|pt| pt.gauge <= lambda && !pt.vector.iter().all(Zero::is_zero)));
    }
}
