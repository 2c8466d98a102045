use kottsep_core::normed::{
    auerbach_basis, coefficient_map, enumerate_unit_ternary, lp, parse_rational, plus_separated_points,
    separated_points, separated_points_with_basis, verify_auerbach, verify_separation, AuerbachBasis, Norm, NormSpec,
    PValue, Scalar, Vector, Q,
};
use kottsep_core::Budgets;
use proptest::prelude::*;

fn q(s: &str) -> Q {
    parse_rational(s).unwrap()
}

fn unit(n: usize, k: usize) -> Vec<Q> {
    (0..n).map(|j| q(if j == k { "1" } else { "0" })).collect()
}

/// Cube cut by `|<(2/3)1, x>| <= 1`.
fn cut_cube(n: usize) -> NormSpec {
    let mut rows: Vec<Vec<Q>> = (0..n).map(|k| unit(n, k)).collect();
    rows.push(vec![q("2/3"); n]);
    NormSpec::facets(n, rows).unwrap()
}

/// Cross-polytope with the extra vertices `±(2/3)1`.
fn capped_cross(n: usize) -> NormSpec {
    let mut pts: Vec<Vec<Q>> = (0..n).map(|k| unit(n, k)).collect();
    pts.push(vec![q("2/3"); n]);
    NormSpec::vertices(n, pts).unwrap()
}

fn exact_specs(n: usize) -> Vec<NormSpec> {
    vec![NormSpec::l1(n).unwrap(), NormSpec::linf(n).unwrap(), cut_cube(n), capped_cross(n)]
}

fn compiled(spec: NormSpec) -> Norm {
    Norm::new(spec, &Budgets::default()).unwrap()
}

fn exact_vec(v: &[i64], den: i64) -> Vector {
    Vector::Exact(v.iter().map(|x| q(&format!("{x}/{den}"))).collect())
}

fn scale(v: &Vector, lambda: &Q) -> Vector {
    Vector::Exact(v.as_exact().unwrap().iter().map(|x| x * lambda).collect())
}

fn exact(s: Scalar) -> Q {
    s.as_exact().expect("exact norm").clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn exact_norm_axioms(u in prop::collection::vec(-6i64..=6, 3), v in prop::collection::vec(-6i64..=6, 3), den in 1i64..5) {
        for spec in exact_specs(3) {
            let nm = compiled(spec);
            let (u, v) = (exact_vec(&u, den), exact_vec(&v, den));
            let nu = exact(nm.eval(&u).unwrap());
            for lambda in ["-2", "-1", "1/2", "3"] {
                let l = q(lambda);
                prop_assert_eq!(exact(nm.eval(&scale(&u, &l)).unwrap()), nu.clone() * num_traits::Signed::abs(&l));
            }
            let nv = exact(nm.eval(&v).unwrap());
            prop_assert!(exact(nm.eval(&u.combine(&v, 1)).unwrap()) <= nu.clone() + nv);
            prop_assert_eq!(num_traits::Zero::is_zero(&nu), u.is_zero());
        }
    }

    #[test]
    fn float_norm_axioms(u in prop::collection::vec(-1.0f64..1.0, 4), v in prop::collection::vec(-1.0f64..1.0, 4)) {
        let tau = Budgets::default().tau;
        for p in [PValue::Finite(q("3/2")), PValue::Finite(q("2")), PValue::Finite(q("5"))] {
            for nm in [compiled(NormSpec::lp(4, p.clone()).unwrap()), compiled(NormSpec::complex_lp(4, p.clone()).unwrap())] {
                let (x, y) = (Vector::Float(u.clone()), Vector::Float(v.clone()));
                let nx = nm.eval(&x).unwrap().approx();
                for lambda in [-2.0, -1.0, 0.5, 3.0] {
                    let lx = Vector::Float(u.iter().map(|a| a * lambda).collect());
                    prop_assert!((nm.eval(&lx).unwrap().approx() - lambda.abs() * nx).abs() <= 4.0 * tau);
                }
                let ny = nm.eval(&y).unwrap().approx();
                prop_assert!(nm.eval(&x.combine(&y, 1)).unwrap().approx() <= nx + ny + 4.0 * tau);
            }
        }
    }

    #[test]
    fn dual_matches_vertex_brute_force(phi in prop::collection::vec(-5i64..=5, 3)) {
        for spec in exact_specs(3) {
            let nm = compiled(spec);
            let f = exact_vec(&phi, 1);
            let brute = nm
                .ball_vertices(u64::MAX)
                .unwrap()
                .iter()
                .map(|x| num_traits::Signed::abs(&x.iter().zip(f.as_exact().unwrap()).map(|(a, b)| a * b).sum::<Q>()))
                .max()
                .unwrap();
            prop_assert_eq!(exact(nm.dual(&f).unwrap()), brute);
        }
    }

    #[test]
    fn polytopes_agree_with_the_simplex(v in prop::collection::vec(-4i64..=4, 3)) {
        for spec in [cut_cube(3), capped_cross(3)] {
            let nm = compiled(spec);
            let x = exact_vec(&v, 1);
            prop_assert_eq!(exact(nm.eval(&x).unwrap()), lp::norm_by_lp(&nm, x.as_exact().unwrap()).unwrap());
            prop_assert_eq!(exact(nm.dual(&x).unwrap()), lp::dual_by_lp(&nm, x.as_exact().unwrap()).unwrap());
        }
    }

    #[test]
    fn coefficient_map_is_a_contraction_into_sup_norm(v in prop::collection::vec(-6i64..=6, 3), den in 1i64..4) {
        let b = Budgets::default();
        for spec in exact_specs(3) {
            let nm = compiled(spec);
            let basis = auerbach_basis(&nm, &b).unwrap();
            let x = exact_vec(&v, den);
            let t = coefficient_map(&basis, &x).unwrap();
            let sup = t.as_exact().unwrap().iter().map(num_traits::Signed::abs).max().unwrap();
            prop_assert!(sup <= exact(nm.eval(&x).unwrap()));
        }
    }
}

#[test]
fn coefficient_map_recovers_basis_coordinates() {
    let b = Budgets::default();
    for spec in exact_specs(3) {
        let nm = compiled(spec);
        let basis = auerbach_basis(&nm, &b).unwrap();
        for (k, x) in basis.vectors.iter().enumerate() {
            let mut e = vec![0i64; 3];
            e[k] = 1;
            assert_eq!(coefficient_map(&basis, x).unwrap(), Vector::exact_from_i64(&e));
        }
    }
}

#[test]
fn unit_combinations_are_closed_under_short_differences() {
    let b = Budgets::default();
    for n in 2..=3 {
        for spec in exact_specs(n) {
            let nm = compiled(spec);
            let basis = auerbach_basis(&nm, &b).unwrap();
            let e = enumerate_unit_ternary(&basis, &nm, &b).unwrap();
            let set = e.to_cube_set().unwrap();
            assert!(set.is_admissible());
            for a in &e.members {
                for c in &e.members {
                    if a == c {
                        continue;
                    }
                    let raw = a.raw_difference(c).unwrap();
                    let coeffs = raw.coords().to_vec();
                    let z = basis.combine_real(&coeffs);
                    if exact(nm.eval(&z).unwrap()) <= q("1") {
                        let d = raw.to_ternary().expect("short differences stay in the cube");
                        assert!(set.contains(&d));
                    }
                }
            }
        }
    }
}

#[test]
fn pipelines_are_sound_on_the_spec_matrix() {
    let b = Budgets::default();
    for n in 2..=4 {
        let mut specs = exact_specs(n);
        specs.push(NormSpec::l2(n).unwrap());
        specs.push(NormSpec::lp(n, PValue::Finite(q("3"))).unwrap());
        for spec in specs {
            let label = spec.label();
            let nm = compiled(spec);
            let basis = auerbach_basis(&nm, &b).unwrap();
            assert!(verify_auerbach(&basis, &nm).unwrap().passed, "{label}");
            let f = separated_points(&nm, &b).unwrap();
            let r = verify_separation(&f, &nm, &b).unwrap();
            assert!(r.passed && f.len() == n + 1, "{label}: {r:?}");
            let f = plus_separated_points(&nm, &b).unwrap();
            let r = verify_separation(&f, &nm, &b).unwrap();
            assert!(r.passed && f.len() == n, "{label}: {r:?}");
        }
    }
}

#[test]
fn supplied_bases_feed_the_pipeline() {
    let b = Budgets::default();
    let nm = compiled(NormSpec::l1(3).unwrap());
    let flipped = AuerbachBasis::from_vectors(vec![
        Vector::exact_from_i64(&[0, -1, 0]),
        Vector::exact_from_i64(&[1, 0, 0]),
        Vector::exact_from_i64(&[0, 0, 1]),
    ])
    .unwrap();
    assert!(verify_auerbach(&flipped, &nm).unwrap().passed);
    let f = separated_points_with_basis(&nm, flipped, &b).unwrap();
    assert_eq!(f.len(), 4);
    assert_eq!(f.margin, Some(Scalar::Exact(q("1"))));

    let nm = compiled(NormSpec::linf(3).unwrap());
    let id = AuerbachBasis::identity(&nm).unwrap();
    let f = separated_points_with_basis(&nm, id, &b).unwrap();
    assert!(verify_separation(&f, &nm, &b).unwrap().passed);

    // not Auerbach for the sup norm: the dual of (1/2)(e1 + e2) pairing fails
    let skew =
        AuerbachBasis::from_vectors(vec![Vector::exact_from_i64(&[1, 1]), Vector::exact_from_i64(&[0, 1])]).unwrap();
    let nm = compiled(NormSpec::linf(2).unwrap());
    assert!(!verify_auerbach(&skew, &nm).unwrap().passed);
    assert!(separated_points_with_basis(&nm, skew, &b).is_err());
}
