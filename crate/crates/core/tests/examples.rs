//! Worked examples, each checked against an oracle value computed here.

mod common;

use common::*;
use dehnvol_core::commensurability::{synthetic_chain, Division};
use dehnvol_core::dimgroup::mat2;
use dehnvol_core::*;
use num_bigint::BigInt;

fn irr(a: i64, b: i64, c: i64, d: i64) -> QuadraticIrrational {
    QuadraticIrrational::new(a, b, c, d).unwrap()
}

fn k(d: i64) -> RealQuadraticField {
    RealQuadraticField::new(d).unwrap()
}

/// Root `x > 0` of `x^2 = p x + q` style equations, via the quadratic formula.
fn positive_root(a: f64, b: f64, c: f64) -> f64 {
    (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a)
}

#[test]
fn slopes_solve_their_fixed_point_equations() {
    // x = 1 + 1/x, x = 2 + 1/x, x = 1 + 1/(2 + 1/x)
    let cases: [(&[i64], f64, QuadraticIrrational); 3] = [
        (&[1], positive_root(1.0, -1.0, -1.0), irr(1, 1, 2, 5)),
        (&[2], positive_root(1.0, -2.0, -1.0), irr(1, 1, 1, 2)),
        (&[1, 2], positive_root(2.0, -2.0, -1.0), irr(1, 1, 2, 3)),
    ];
    for (p, root, exact) in cases {
        let theta = surgery_slope(p).unwrap();
        assert_eq!(theta, exact);
        assert!((theta.to_f64() - root).abs() < 1e-14);
        let (disc, d) = periodic_cf_radicand(p);
        assert_eq!(
            theta.d(),
            &BigInt::from(d as i64),
            "{p:?}: discriminant {disc}"
        );
    }
}

/// Digits by iterating `x -> 1/(x - floor x)` in floating point.
fn float_digits(mut x: f64, n: usize) -> Vec<i64> {
    let mut out = Vec::new();
    for _ in 0..n {
        let a = x.floor();
        out.push(a as i64);
        x = 1.0 / (x - a);
    }
    out
}

#[test]
fn expansions_match_direct_iteration() {
    for (x, pre, per) in [
        (irr(1, 1, 2, 5), vec![], vec![1]),
        (irr(0, 1, 1, 2), vec![1], vec![2]),
        (irr(0, 1, 1, 10), vec![3], vec![6]),
    ] {
        let cf = cf_expand(&x);
        assert_eq!(cf, ContinuedFraction::from_digits(&pre, &per).unwrap());
        let digits: Vec<i64> = pre
            .iter()
            .chain(per.iter().cycle())
            .take(8)
            .copied()
            .collect();
        assert_eq!(float_digits(x.to_f64(), 8), digits);
        assert_eq!(cf_value(&cf).unwrap(), x);
    }
    assert!(!modular_equivalent(&irr(1, 1, 2, 5), &irr(0, 1, 1, 5)));
}

#[test]
fn field_invariants_match_the_pell_and_forms_oracles() {
    for d in [5, 2, 10, 79] {
        let field = k(d);
        let (x, y, sign) = unit_oracle(d);
        assert_eq!(
            field.fundamental_unit(),
            &QuadraticIrrational::from_surd(x as i64, y as i64, 2, field_disc(d)).unwrap()
        );
        assert_eq!(field.unit_norm(), sign);
        assert_eq!(field.class_number(), class_number_oracle(d));
        assert_eq!(field.discriminant(), field_disc(d));
    }
    assert_eq!(fundamental_unit(79).unwrap(), irr(80, 9, 1, 79));
    assert_eq!(unit_oracle(79), (160, 9, 1));
    assert_eq!(field_of(&irr(3, 1, 1, 10)).unwrap().class_number(), 2);
}

#[test]
fn splitting_follows_the_character() {
    for (d, p) in [(5, 11), (5, 2), (10, 3), (10, 2), (79, 7)] {
        let disc = field_disc(d);
        let chi = character_table(disc, p as usize)[p as usize];
        let s = prime_splitting(disc, p).unwrap();
        let expected = match chi {
            1 => matches!(s, Splitting::Split(..)),
            -1 => matches!(s, Splitting::Inert(..)),
            _ => matches!(s, Splitting::Ramified(..)),
        };
        assert!(expected, "d = {d}, p = {p}: {s:?}");
    }
}

#[test]
fn ideal_examples() {
    let k10 = k(10);
    let p2 = k10.ideal(1, 2, 0).unwrap();
    assert_eq!(p2.mul(&p2).unwrap(), k10.integer_ideal(2).unwrap());
    assert!(!k10.is_principal(&p2).unwrap());
    assert!(!principal_oracle(10, 1, 2, 0));
    let sq = p2.mul(&p2).unwrap();
    assert!(k10.is_principal(&sq).unwrap());
    let p3 = k10.prime_splitting(3).unwrap().primes()[0];
    assert!(k10.equivalent(&p2, &p3).unwrap());
    assert!(!k10.equivalent(&p2, &k10.unit_ideal()).unwrap());

    let k5 = k(5);
    let six = factor_ideal(&k5.integer_ideal(6).unwrap()).unwrap();
    assert_eq!(
        six,
        vec![
            (k5.integer_ideal(2).unwrap(), 1),
            (k5.integer_ideal(3).unwrap(), 1)
        ]
    );
    let eleven = factor_ideal(&k5.integer_ideal(11).unwrap()).unwrap();
    assert_eq!(eleven.len(), 2);
    assert!(eleven.iter().all(|(p, e)| p.norm() == 11 && *e == 1));
}

#[test]
fn counts_match_the_character_sum() {
    let k5 = k(5);
    assert_eq!(
        k5.count_ideals_in_class(&k5.principal_class(), 10),
        total_ideals_oracle(5, 10)
    );
    assert_eq!(total_ideals_oracle(5, 10), 4);
    let k10 = k(10);
    let classes = k10.classes();
    let sum: u64 = classes
        .iter()
        .map(|c| k10.count_ideals_in_class(c, 3))
        .sum();
    assert_eq!(sum, total_ideals_oracle(40, 3));
}

#[test]
fn analytic_quantities_match_floating_point() {
    for d in [5, 2, 10] {
        let field = k(d);
        let rho = density_oracle(d);
        assert!((field.dirichlet_density().to_f64() - rho).abs() < 1e-14);
        let h = class_number_oracle(d) as f64;
        assert!((field.zeta_residue().to_f64() - h * rho).abs() < 1e-14);
    }
    for d in [-3i64, -4] {
        let chi = character_table(d, 200_000);
        let l: f64 = (1..chi.len())
            .rev()
            .map(|n| chi[n] as f64 / (n as f64 * n as f64))
            .sum();
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        let want = (d.abs() as f64).powf(1.5) / (4.0 * std::f64::consts::PI.powi(2)) * zeta2 * l;
        let got = humbert_volume(d, 1_000_000).unwrap();
        assert!(
            (got.value - want).abs() < 1e-9,
            "d = {d}: {} vs {want}",
            got.value
        );
        assert!(got.error_bound < 1e-9);
    }
}

#[test]
fn group_examples() {
    let golden = StationaryGroup::from_mat2(&mat2(1, 1, 1, 0)).unwrap();
    let square = StationaryGroup::from_mat2(&mat2(2, 1, 1, 1)).unwrap();
    let silver = StationaryGroup::from_mat2(&mat2(2, 1, 1, 0)).unwrap();
    assert_eq!(golden.pf_eigenvalue().unwrap(), &irr(1, 1, 2, 5));
    assert_eq!(square.pf_eigenvalue().unwrap(), &irr(3, 1, 2, 5));
    assert_eq!(silver.rotation_number().unwrap(), &irr(1, 1, 1, 2));
    assert!(morita_equivalent(&golden, &square).unwrap());
    assert!(!morita_equivalent(&golden, &silver).unwrap());
    assert!(validate_stationary(&[vec![1, 0], vec![0, 1]]).is_err());

    let digits = |m| -> Vec<i64> {
        minkowski_decompose(&m)
            .unwrap()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    };
    assert_eq!(digits(mat2(3, 2, 1, 1)), vec![2, 1]);
    assert_eq!(digits(mat2(5, 2, 2, 1)), vec![2, 2]);

    for (m, d) in [
        (mat2(1, 1, 1, 0), 5),
        (mat2(2, 1, 1, 0), 2),
        (mat2(6, 1, 1, 0), 10),
    ] {
        let a = associated_ideal(&StationaryGroup::from_mat2(&m).unwrap()).unwrap();
        assert_eq!(a.field.radicand(), d);
        assert!(a.ideal.is_unit_ideal());
        assert_eq!(a.order_conductor, BigInt::from(1));
    }
    for d in [5, 2, 10] {
        let groups = groups_for_field(&k(d)).unwrap();
        assert_eq!(groups.len(), class_number_oracle(d));
    }
}

#[test]
fn commensurability_examples() {
    let k10 = k(10);
    let p2 = ManifoldIdeal::of(k10.ideal(1, 2, 0).unwrap());
    let two = ManifoldIdeal::of(k10.integer_ideal(2).unwrap());
    assert!(matches!(divide(&two, &p2).unwrap(), Division::Quotient(q) if q.ideal == p2.ideal));
    let k5 = k(5);
    let m = |n| ManifoldIdeal::of(k5.integer_ideal(n).unwrap());
    assert_eq!(divide(&m(6), &m(5)).unwrap(), Division::RelativelyPrime);
    assert_eq!(covering_degree(&m(6), &m(7)).unwrap(), 0);
    assert_eq!(covering_degree(&m(8), &m(2)).unwrap(), 3);

    let none = next_prime_manifold(&k5, &[], 100).unwrap();
    assert_eq!(none.manifold.ideal, k5.integer_ideal(2).unwrap());
    let root5 = k5.prime_splitting(5).unwrap().primes()[0];
    let next = next_prime_manifold(&k5, &[root5, k5.integer_ideal(2).unwrap()], 100).unwrap();
    assert_eq!(next.manifold.ideal, k5.integer_ideal(3).unwrap());

    let chain = synthetic_chain(&k5, &k5.principal_class(), 11, 0.5).unwrap();
    assert_eq!(chain.members().len() as u64, total_ideals_oracle(5, 11) + 1);
    assert!(
        telescoping_check(&chain, 11, &GapBounds::new(0.5, 1.5).unwrap())
            .unwrap()
            .passed
    );
}

#[test]
fn volume_examples() {
    let one = Real::from_int(1);
    for p in [&[1i64][..], &[2], &[1, 2], &[3, 1, 1]] {
        let v = predict_volume(p, &one).unwrap();
        assert!((v.value.to_f64() - volume_oracle(p)).abs() < 1e-14, "{p:?}");
    }
    let (lo, hi) = volume_bounds(&k(5), &GapBounds::new(1.0, 2.0).unwrap());
    assert!((lo.to_f64() - volume_oracle(&[1])).abs() < 1e-14);
    assert!((hi.to_f64() - 2.0 * volume_oracle(&[1])).abs() < 1e-14);
    for d in [5, 10, 79] {
        assert_eq!(fiber_count(&k(d)).unwrap(), class_number_oracle(d));
    }
    let r = comparison_report(&k(10), Some(-3)).unwrap();
    assert!((r.residue_over_density.to_f64() - class_number_oracle(10) as f64).abs() < 1e-30);
}
