//! Randomized property tests for the exact-arithmetic core: polynomial ring
//! axioms, calculus rules, rational-function field laws, linear solving, and
//! the group-invariant rewriting machinery.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbitfold::chart::Chart;
use orbitfold::invariants::{
    apply_group, elementary_invariants, is_invariant, random_regular_p_point, rewrite_in_u,
    u_point_from_p, GroupElement,
};
use orbitfold::matrix::{solve_linear, LinearSolution};
use orbitfold::poly::MultiPoly;
use orbitfold::ratfun::RatFun;
use orbitfold::scalar::{q, qi, ExactScalar};

const N: usize = 3;

fn scalar_strat() -> impl Strategy<Value = ExactScalar> {
    (-9i64..=9, 1i64..=4).prop_map(|(num, den)| q(num, den))
}

/// A random polynomial on the given chart with small exponents and
/// small rational coefficients.
fn poly_on(chart: Arc<Chart>, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    let dim = chart.dim();
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, dim), scalar_strat()),
        0..5,
    )
    .prop_map(move |terms| {
        let mut acc = MultiPoly::zero(&chart);
        for (exps, c) in terms {
            let mut term = MultiPoly::constant(&chart, c);
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = &term * &MultiPoly::var(&chart, i);
                }
            }
            acc = &acc + &term;
        }
        acc
    })
}

fn p_poly() -> impl Strategy<Value = MultiPoly> {
    poly_on(Chart::p_chart(N), 3)
}

fn u_poly() -> impl Strategy<Value = MultiPoly> {
    poly_on(Chart::u_chart(N), 2)
}

fn point_strat(dim: usize) -> impl Strategy<Value = Vec<ExactScalar>> {
    prop::collection::vec(scalar_strat(), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // --- commutative-ring axioms -------------------------------------------

    #[test]
    fn add_is_commutative_and_associative(a in p_poly(), b in p_poly(), c in p_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn mul_is_commutative_and_associative(a in p_poly(), b in p_poly(), c in p_poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn mul_distributes_over_add(a in p_poly(), b in p_poly(), c in p_poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn additive_inverse_cancels(a in p_poly()) {
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert!((&a - &a).is_zero());
    }

    // --- calculus ----------------------------------------------------------

    #[test]
    fn derivative_satisfies_leibniz(a in p_poly(), b in p_poly(), i in 0usize..N) {
        let lhs = (&a * &b).derivative(i);
        let rhs = &(&a.derivative(i) * &b) + &(&a * &b.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_is_linear(a in p_poly(), b in p_poly(), i in 0usize..N) {
        prop_assert_eq!((&a + &b).derivative(i), &a.derivative(i) + &b.derivative(i));
    }

    // --- evaluation and substitution are ring homomorphisms ----------------

    #[test]
    fn eval_is_ring_hom(a in p_poly(), b in p_poly(), pt in point_strat(N)) {
        prop_assert_eq!((&a + &b).eval(&pt), a.eval(&pt) + b.eval(&pt));
        prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
    }

    #[test]
    fn substitution_is_ring_hom(
        a in u_poly(),
        b in u_poly(),
        images in prop::collection::vec(poly_on(Chart::p_chart(N), 2), N),
    ) {
        let sum = (&a + &b).substitute_full(&images).unwrap();
        let sum_parts = &a.substitute_full(&images).unwrap() + &b.substitute_full(&images).unwrap();
        prop_assert_eq!(sum, sum_parts);

        let prod = (&a * &b).substitute_full(&images).unwrap();
        let prod_parts = &a.substitute_full(&images).unwrap() * &b.substitute_full(&images).unwrap();
        prop_assert_eq!(prod, prod_parts);
    }

    #[test]
    fn substitute_then_eval_composes(
        a in u_poly(),
        images in prop::collection::vec(poly_on(Chart::p_chart(N), 2), N),
        pt in point_strat(N),
    ) {
        let composed = a.substitute_full(&images).unwrap().eval(&pt);
        let image_pt: Vec<ExactScalar> = images.iter().map(|f| f.eval(&pt)).collect();
        prop_assert_eq!(composed, a.eval(&image_pt));
    }

    // --- rational-function field laws --------------------------------------

    #[test]
    fn ratfun_inverse_and_division(a in p_poly(), b in p_poly()) {
        let f = RatFun::from_poly(a.clone());
        let g = RatFun::from_poly(b.clone());
        if !g.is_zero() {
            let one = RatFun::constant(&a.chart, qi(1));
            prop_assert_eq!(&(&g * &g.inverse().unwrap()), &one);
            // (f*g)/g recovers f.
            let back = (&(&f * &g) / &g).unwrap();
            prop_assert_eq!(back, f.clone());
        }
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn ratfun_add_matches_cross_multiplication(
        a in p_poly(), b in p_poly(), c in p_poly(), d in p_poly(),
    ) {
        let bf = RatFun::from_poly(b.clone());
        let df = RatFun::from_poly(d.clone());
        if !bf.is_zero() && !df.is_zero() {
            let lhs = &(&RatFun::from_poly(a.clone()) / &bf).unwrap()
                + &(&RatFun::from_poly(c.clone()) / &df).unwrap();
            let num = &(&a * &d) + &(&c * &b);
            let den = &b * &d;
            let rhs = (&RatFun::from_poly(num) / &RatFun::from_poly(den)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // --- exact linear solving ----------------------------------------------

    #[test]
    fn solve_linear_round_trip(
        rows in 1usize..=4,
        cols in 1usize..=4,
        entries in prop::collection::vec(scalar_strat(), 16),
        x in prop::collection::vec(scalar_strat(), 4),
    ) {
        let a: Vec<Vec<ExactScalar>> = (0..rows)
            .map(|i| (0..cols).map(|j| entries[i * 4 + j].clone()).collect())
            .collect();
        let b: Vec<ExactScalar> = (0..rows)
            .map(|i| (0..cols).map(|j| &a[i][j] * &x[j]).sum())
            .collect();
        // b lies in the column space by construction, so a solution exists.
        let sol = match solve_linear(&a, &b) {
            LinearSolution::Unique(s) => s,
            LinearSolution::Parametric { particular, .. } => particular,
            LinearSolution::Inconsistent => {
                prop_assert!(false, "consistent system reported inconsistent");
                unreachable!()
            }
        };
        for i in 0..rows {
            let lhs: ExactScalar = (0..cols).map(|j| &a[i][j] * &sol[j]).sum();
            prop_assert_eq!(lhs, b[i].clone());
        }
    }

    // --- group action and invariant rewriting ------------------------------

    #[test]
    fn group_action_is_ring_hom_and_fixes_invariants(
        a in p_poly(), b in p_poly(), seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GroupElement::random(N, &mut rng);
        prop_assert_eq!(apply_group(&(&a * &b), &g), &apply_group(&a, &g) * &apply_group(&b, &g));
        prop_assert_eq!(apply_group(&(&a + &b), &g), &apply_group(&a, &g) + &apply_group(&b, &g));
        for e in elementary_invariants(N) {
            prop_assert!(is_invariant(&e));
            prop_assert_eq!(apply_group(&e, &g), e);
        }
    }

    #[test]
    fn rewrite_in_u_round_trip(quan in u_poly(), seed in any::<u64>()) {
        // Push a polynomial in the basic invariants down to the p-chart and
        // recover it by rewriting; also check values at a random sample point.
        let basics = elementary_invariants(N);
        let p = quan.substitute_full(&basics).unwrap();
        prop_assert!(is_invariant(&p));
        let back = rewrite_in_u(&p).unwrap();
        prop_assert_eq!(&back, &quan);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p_pt = random_regular_p_point(N, &mut rng);
        let u_pt = u_point_from_p(&p_pt);
        prop_assert_eq!(p.eval(&p_pt), quan.eval(&u_pt));
    }
}
