mod common;

use dehnvol_core::commensurability::{gap_bounds_check, Division};
use dehnvol_core::dimgroup::{conjugate_by, mat2, minkowski_product, Spectrum};
use dehnvol_core::quadratic::Mat2;
use dehnvol_core::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn radicand() -> impl Strategy<Value = i64> {
    (2i64..=97).prop_filter("square-free", |d| common::square_free(*d as u64))
}

fn irrational() -> impl Strategy<Value = QuadraticIrrational> {
    (
        -50i64..=50,
        prop_oneof![-50i64..=-1, 1i64..=50],
        1i64..=50,
        radicand(),
    )
        .prop_map(|(a, b, c, d)| QuadraticIrrational::new(a, b, c, d).unwrap())
}

fn period() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=7, 1..=5)
}

/// Surgery periods whose fields stay small enough to build.
fn short_period() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=5, 1..=3)
}

/// Words of length <= 3 in the elementary generators of GL(2, Z).
fn unimodular_words() -> Vec<Mat2> {
    let gens = [
        mat2(1, 1, 0, 1),
        mat2(1, -1, 0, 1),
        mat2(1, 0, 1, 1),
        mat2(1, 0, -1, 1),
        mat2(0, 1, 1, 0),
        mat2(-1, 0, 0, 1),
    ];
    let mul = |x: &Mat2, y: &Mat2| -> Mat2 {
        let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let mut words = vec![mat2(1, 0, 0, 1)];
    let mut frontier = words.clone();
    for _ in 0..3 {
        frontier = frontier
            .iter()
            .flat_map(|w| gens.iter().map(move |g| mul(w, g)))
            .collect();
        words.extend(frontier.iter().cloned());
    }
    words
}

fn minimal_block(p: &[i64]) -> Vec<i64> {
    let n = p.len();
    (1..=n)
        .find(|&k| n.is_multiple_of(k) && (k..n).all(|i| p[i] == p[i - k]))
        .map(|k| p[..k].to_vec())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cf_round_trip(x in irrational()) {
        prop_assert_eq!(cf_value(&cf_expand(&x)).unwrap(), x);
    }

    #[test]
    fn surgery_slope_is_purely_periodic(p in period()) {
        let theta = surgery_slope(&p).unwrap();
        prop_assert!(theta.is_reduced());
        let cf = cf_expand(&theta);
        prop_assert!(cf.is_purely_periodic());
        let block: Vec<BigInt> = minimal_block(&p).into_iter().map(BigInt::from).collect();
        prop_assert_eq!(cf.period, block);
    }

    #[test]
    fn mobius_images_are_equivalent(x in irrational(), w in 0usize..259) {
        let u = &unimodular_words()[w];
        if let Ok(y) = x.mobius(&u[0][0], &u[0][1], &u[1][0], &u[1][1]) {
            prop_assert!(modular_equivalent(&x, &y));
            prop_assert!(modular_equivalent(&y, &x));
        }
    }

    #[test]
    fn equivalence_is_transitive(ps in prop::collection::vec(period(), 3)) {
        let t: Vec<_> = ps.iter().map(|p| surgery_slope(p).unwrap()).collect();
        prop_assert!(modular_equivalent(&t[0], &t[0]));
        prop_assert_eq!(modular_equivalent(&t[0], &t[1]), modular_equivalent(&t[1], &t[0]));
        if modular_equivalent(&t[0], &t[1]) && modular_equivalent(&t[1], &t[2]) {
            prop_assert!(modular_equivalent(&t[0], &t[2]));
        }
    }

    #[test]
    fn powers_keep_the_rotation_number(p in period(), k in 2u32..=4) {
        let g = StationaryGroup::from_surgery(&p).unwrap();
        let gk = g.power(k).unwrap();
        prop_assert_eq!(gk.rotation_number().unwrap(), g.rotation_number().unwrap());
    }

    #[test]
    fn minkowski_round_trip(digits in prop::collection::vec(1i64..=9, 1..=8)) {
        let digits: Vec<BigInt> = digits.into_iter().map(BigInt::from).collect();
        let m = minkowski_product(&digits);
        prop_assert_eq!(minkowski_decompose(&m).unwrap(), digits);
    }

    #[test]
    fn conjugates_are_equivalent(p in period()) {
        let g = StationaryGroup::from_surgery(&p).unwrap();
        let a = g.as_mat2().unwrap();
        let mut tried = 0;
        for u in unimodular_words() {
            let c = conjugate_by(&a, &u).unwrap();
            if let Ok(h) = StationaryGroup::from_mat2(&c) {
                prop_assert!(morita_equivalent(&g, &h).unwrap(), "{:?} ~ {:?}", a, c);
                tried += 1;
            }
        }
        prop_assert!(tried >= 1);
    }

    #[test]
    fn pairs_agree_three_ways(p in period(), q in period()) {
        let (g, h) = (StationaryGroup::from_surgery(&p).unwrap(), StationaryGroup::from_surgery(&q).unwrap());
        let cycles = |x: &[i64]| cf_expand(&surgery_slope(x).unwrap()).canonical_cycle();
        let same_cycle = cycles(&p) == cycles(&q);
        prop_assert_eq!(morita_equivalent(&g, &h).unwrap(), same_cycle);
        prop_assert_eq!(dehnvol_core::dimgroup::ideal_classes_equal(&g, &h).unwrap(), same_cycle);
    }

    #[test]
    fn rank_three_certificates_bracket_the_estimate(
        entries in prop::collection::vec(0i64..=4, 9).prop_filter("positive diagonal", |v| v[0] > 0 && v[4] > 0 && v[8] > 0 && v[1] > 0 && v[5] > 0 && v[6] > 0)
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let Ok(g) = validate_stationary(&rows) else { return Ok(()) };
        match g.spectrum() {
            Spectrum::Certified(cert) => {
                let (lo, hi) = cert.bracket();
                prop_assert!(lo <= g.pf_estimate() && g.pf_estimate() <= hi);
                prop_assert!(hi - lo < 1e-6 * hi);
            }
            other => prop_assert!(false, "rank 3 gave {:?}", other),
        }
    }
}

fn field() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![2i64, 3, 5, 6, 10, 15, 26, 79])
}

fn ideal_in(disc: i64) -> impl Strategy<Value = QuadIdeal> {
    (1i64..=40, 1i64..=3, any::<prop::sample::Index>()).prop_filter_map(
        "no roots",
        move |(a, m, ix)| {
            let roots: Vec<i64> = (0..2 * a)
                .filter(|b| (b * b - disc).rem_euclid(4 * a) == 0)
                .collect();
            (!roots.is_empty())
                .then(|| QuadIdeal::new(disc, m, a, roots[ix.index(roots.len())]).unwrap())
        },
    )
}

fn ideal_pair() -> impl Strategy<Value = (QuadIdeal, QuadIdeal)> {
    field().prop_flat_map(|d| {
        let disc = common::field_disc(d);
        (ideal_in(disc), ideal_in(disc))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norms_multiply((i, j) in ideal_pair()) {
        let ij = i.mul(&j).unwrap();
        prop_assert_eq!(ij.norm(), i.norm() * j.norm());
        prop_assert_eq!(ij, j.mul(&i).unwrap());
    }

    #[test]
    fn factorizations_multiply_back((i, _) in ideal_pair()) {
        let mut acc = QuadIdeal::unit(i.disc());
        for (p, e) in factor_ideal(&i).unwrap() {
            acc = acc.mul(&p.pow(e).unwrap()).unwrap();
        }
        prop_assert_eq!(acc, i);
    }

    #[test]
    fn divide_then_multiply((i, j) in ideal_pair()) {
        let m = i.mul(&j).unwrap();
        match divide(&ManifoldIdeal::of(m), &ManifoldIdeal::of(j)).unwrap() {
            Division::Quotient(q) => prop_assert_eq!(q.ideal.mul(&j).unwrap(), m),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn covering_degree_of_powers((i, _) in ideal_pair(), p in 1u32..=6) {
        prop_assume!(!i.is_unit_ideal());
        let m = ManifoldIdeal::of(i.pow(p).unwrap());
        prop_assert_eq!(covering_degree(&m, &ManifoldIdeal::of(i)).unwrap(), p);
    }

    #[test]
    fn exact_multiples_pass_with_equal_constants(v0 in 0.01f64..100.0, n in 2usize..20) {
        let volumes: Vec<f64> = (0..n).map(|j| v0 * (1 + j) as f64).collect();
        let check = gap_bounds_check(&volumes, &GapBounds::new(v0, v0).unwrap()).unwrap();
        prop_assert!(check.passed(), "{:?}", check);
    }

    #[test]
    fn predictions_are_linear_in_c(p in short_period(), c1 in 0.1f64..10.0, c2 in 0.1f64..10.0) {
        let (c1, c2) = (Real::from_f64(c1), Real::from_f64(c2));
        let sum = predict_volume(&p, &c1.add(&c2)).unwrap().value;
        let parts = predict_volume(&p, &c1).unwrap().value.add(&predict_volume(&p, &c2).unwrap().value);
        prop_assert!(sum.sub(&parts).to_f64().abs() < 1e-60);
        prop_assert_eq!(predict_volume(&p, &c1).unwrap().value, predict_volume(&p, &c1).unwrap().value);
    }

    #[test]
    fn calibration_scales(ps in prop::collection::vec(short_period(), 1..6), c in 0.5f64..5.0, s in 0.5f64..3.0) {
        let obs = |k: f64| -> Vec<VolumeObservation> {
            ps.iter().map(|p| VolumeObservation::new(p.clone(), k * common::volume_oracle(p), "x").unwrap()).collect()
        };
        let (a, b) = (calibrate_c(&obs(c)).unwrap(), calibrate_c(&obs(c * s)).unwrap());
        prop_assert!((a.c - c).abs() < 1e-9 * c);
        prop_assert!((b.c / a.c - s).abs() < 1e-9 * s);
    }
}

#[test]
fn next_prime_never_repeats() {
    for d in [5, 10, 79] {
        let field = RealQuadraticField::new(d).unwrap();
        let mut exclude = Vec::new();
        let mut last = 0;
        for _ in 0..15 {
            let choice = next_prime_manifold(&field, &exclude, 10_000).unwrap();
            let p = choice.manifold.ideal;
            assert!(!exclude.contains(&p));
            assert!(choice.principal);
            assert!(p.norm() >= last, "d = {d}: {p} after norm {last}");
            last = p.norm();
            exclude.push(p);
        }
    }
}

#[test]
fn fiber_count_is_the_class_number() {
    for d in (2..=150).filter(|&d| common::square_free(d as u64)) {
        let field = RealQuadraticField::new(d).unwrap();
        assert_eq!(
            fiber_count(&field).unwrap(),
            common::class_number_oracle(d),
            "d = {d}"
        );
    }
}

#[test]
fn principal_ideals_match_a_generator_search() {
    for d in [10, 15, 26, 79, 82] {
        let field = RealQuadraticField::new(d).unwrap();
        let disc = field.discriminant();
        for a in 1..=30i64 {
            for b in (0..2 * a).filter(|b| (b * b - disc).rem_euclid(4 * a) == 0) {
                let ideal = QuadIdeal::primitive(disc, a, b).unwrap();
                assert_eq!(
                    field.is_principal(&ideal).unwrap(),
                    common::principal_oracle(d, 1, a, b),
                    "d = {d}: {ideal}"
                );
            }
        }
    }
}
