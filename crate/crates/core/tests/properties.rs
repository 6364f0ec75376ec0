//! Property-based invariants: field axioms and derivation laws for scalars,
//! Lie-derivative and commutator identities for tensors, antisymmetry and
//! Leibniz laws for the free bracket. Everything is checked exactly.

use proptest::prelude::*;

use falg_core::{Chart, Flavor, Scalar, TensorField, TensorType};

fn chart_xy() -> Chart {
    Chart::coordinates(&["x", "y"]).unwrap()
}

fn chart_gen() -> Chart {
    Chart::new(&["x", "y"], &[("chi", &[("x", "2*chi/x^3")])]).unwrap()
}

/// Sparse integer polynomial data: up to three terms of small degree.
fn poly_strategy(nvars: usize) -> impl Strategy<Value = Vec<(i64, Vec<u32>)>> {
    prop::collection::vec(
        (
            -4i64..=4,
            prop::collection::vec(0u32..=2, nvars),
        ),
        0..3,
    )
}

fn build_poly(chart: &Chart, data: &[(i64, Vec<u32>)]) -> Scalar {
    let names = chart.symbol_names();
    let mut acc = chart.zero();
    for (c, exps) in data {
        let mut term = chart.from_int(*c);
        for (vi, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let v = chart.var(&names[vi]).unwrap();
            term = term.mul(&v.int_pow(e as i64).unwrap());
        }
        acc = acc.add(&term);
    }
    acc
}

/// Rational scalar with a guaranteed-nonzero denominator 1 + q^2.
fn build_rational(chart: &Chart, num: &[(i64, Vec<u32>)], den: &[(i64, Vec<u32>)]) -> Scalar {
    let p = build_poly(chart, num);
    let q = build_poly(chart, den);
    let d = chart.one().add(&q.mul(&q));
    p.div(&d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(
        a in (poly_strategy(2), poly_strategy(2)),
        b in (poly_strategy(2), poly_strategy(2)),
        c in (poly_strategy(2), poly_strategy(2)),
    ) {
        let chart = chart_xy();
        let a = build_rational(&chart, &a.0, &a.1);
        let b = build_rational(&chart, &b.0, &b.1);
        let c = build_rational(&chart, &c.0, &c.1);
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.div(&a).unwrap().is_one());
        }
    }

    #[test]
    fn leibniz_rule(
        f in (poly_strategy(2), poly_strategy(2)),
        g in (poly_strategy(2), poly_strategy(2)),
    ) {
        let chart = chart_xy();
        let f = build_rational(&chart, &f.0, &f.1);
        let g = build_rational(&chart, &g.0, &g.1);
        let lhs = f.mul(&g).differentiate("x").unwrap();
        let rhs = f
            .differentiate("x")
            .unwrap()
            .mul(&g)
            .add(&f.mul(&g.differentiate("x").unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute_with_generator_rules(
        f in (poly_strategy(3), poly_strategy(3)),
    ) {
        let chart = chart_gen();
        let f = build_rational(&chart, &f.0, &f.1);
        let xy = f.differentiate("x").unwrap().differentiate("y").unwrap();
        let yx = f.differentiate("y").unwrap().differentiate("x").unwrap();
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn render_parse_round_trip(
        f in (poly_strategy(3), poly_strategy(3)),
    ) {
        let chart = chart_gen();
        let f = build_rational(&chart, &f.0, &f.1);
        let reparsed = chart.parse(&f.render()).unwrap();
        prop_assert_eq!(reparsed, f);
    }
}

fn vector_field(chart: &Chart, data: &[Vec<(i64, Vec<u32>)>]) -> TensorField {
    let comps = data.iter().map(|d| build_poly(chart, d)).collect();
    TensorField::vector(chart, comps).unwrap()
}

fn vf_strategy() -> impl Strategy<Value = Vec<Vec<(i64, Vec<u32>)>>> {
    prop::collection::vec(poly_strategy(2), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_antisymmetric_and_jacobi(
        u in vf_strategy(),
        v in vf_strategy(),
        w in vf_strategy(),
    ) {
        let chart = chart_xy();
        let u = vector_field(&chart, &u);
        let v = vector_field(&chart, &v);
        let w = vector_field(&chart, &w);
        let uv = u.commutator(&v).unwrap();
        prop_assert_eq!(uv.clone(), v.commutator(&u).unwrap().neg());
        // Vector fields form an honest Lie algebra.
        let jac = u
            .commutator(&v.commutator(&w).unwrap())
            .unwrap()
            .add(&v.commutator(&w.commutator(&u).unwrap()).unwrap())
            .unwrap()
            .add(&w.commutator(&uv).unwrap())
            .unwrap();
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn lie_derivative_represents_the_bracket(
        v in vf_strategy(),
        w in vf_strategy(),
        t in poly_strategy(2),
    ) {
        let chart = chart_xy();
        let v = vector_field(&chart, &v);
        let w = vector_field(&chart, &w);
        // Sample tensors of types (1,0), (0,1), (0,2).
        let t10 = vector_field(&chart, &[t.clone(), t.clone()]);
        let mut t01 = TensorField::zero(&chart, TensorType::new(0, 1));
        t01.set(&[0], build_poly(&chart, &t));
        t01.set(&[1], chart.var("y").unwrap());
        let mut t02 = TensorField::zero(&chart, TensorType::new(0, 2));
        t02.set(&[0, 1], build_poly(&chart, &t));
        t02.set(&[1, 0], chart.var("x").unwrap());
        for tensor in [t10, t01, t02] {
            let lhs = v.commutator(&w).unwrap().lie_derivative(&tensor).unwrap();
            let rhs = v
                .lie_derivative(&w.lie_derivative(&tensor).unwrap())
                .unwrap()
                .sub(&w.lie_derivative(&v.lie_derivative(&tensor).unwrap()).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn lie_derivative_is_a_derivation_over_products(
        v in vf_strategy(),
        a in poly_strategy(2),
        b in poly_strategy(2),
    ) {
        let chart = chart_xy();
        let v = vector_field(&chart, &v);
        let mut t1 = TensorField::zero(&chart, TensorType::new(0, 1));
        t1.set(&[0], build_poly(&chart, &a));
        t1.set(&[1], chart.one());
        let t2 = vector_field(&chart, &[b.clone(), a.clone()]);
        let lhs = v.lie_derivative(&t1.tensor_product(&t2).unwrap()).unwrap();
        let rhs = v
            .lie_derivative(&t1)
            .unwrap()
            .tensor_product(&t2)
            .unwrap()
            .add(&t1.tensor_product(&v.lie_derivative(&t2).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Degree-3 Jacobi sums: zero after lie normalization, nonzero in the free
/// almost flavor for distinct generators.
#[test]
fn jacobi_sums_of_generators() {
    use falg_core::{normalize, SignedCombination, TreeMonomial};
    let m = 3;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let node = |x: TreeMonomial, y: TreeMonomial| TreeMonomial::node(x, y);
                let leaf = TreeMonomial::leaf;
                let terms = [
                    node(leaf(a), node(leaf(b), leaf(c))),
                    node(leaf(b), node(leaf(c), leaf(a))),
                    node(leaf(c), node(leaf(a), leaf(b))),
                ];
                let mut lie_sum = SignedCombination::zero();
                let mut almost_sum = SignedCombination::zero();
                for t in &terms {
                    lie_sum = lie_sum.add(&normalize(t, m, Flavor::Lie).unwrap());
                    almost_sum = almost_sum.add(&normalize(t, m, Flavor::Almost).unwrap());
                }
                assert!(lie_sum.is_zero(), "jacobi must vanish in the lie flavor");
                let distinct = a != b && b != c && a != c;
                assert_eq!(
                    !almost_sum.is_zero(),
                    distinct,
                    "freeness of the almost flavor on ({a},{b},{c})"
                );
            }
        }
    }
}

/// Normalization outputs only canonical monomials of the requested flavor.
#[test]
fn normalization_outputs_are_canonical() {
    use falg_core::{is_canonical, normalize, TreeMonomial};
    let m = 2;
    // Every tree of degree <= 4 over two generators.
    fn all_trees(d: usize, m: usize) -> Vec<TreeMonomial> {
        if d == 1 {
            return (0..m).map(TreeMonomial::leaf).collect();
        }
        let mut out = Vec::new();
        for i in 1..d {
            for l in all_trees(i, m) {
                for r in all_trees(d - i, m) {
                    out.push(TreeMonomial::node(l.clone(), r.clone()));
                }
            }
        }
        out
    }
    for d in 1..=4 {
        for t in all_trees(d, m) {
            for flavor in [Flavor::Almost, Flavor::Lie] {
                let out = normalize(&t, m, flavor).unwrap();
                for (mono, _) in out.iter() {
                    assert!(is_canonical(mono, flavor), "{mono} from {t} ({flavor})");
                }
            }
        }
    }
}
