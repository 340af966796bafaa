use dblint_core::quad::{self, gauss_rule, integrate};
use dblint_testkit::golub_welsch;
use proptest::prelude::*;

fn ok(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> dblint_core::Result<f64> {
    move |x| Ok(f(x))
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn nodes_agree_with_eigenvalue_construction() {
    for n in [2, 5, 10, 20, 33, 64] {
        let r = gauss_rule(n).unwrap();
        let (x, w) = golub_welsch(n);
        for i in 0..n {
            assert!((r.nodes[i] - x[i]).abs() < 1e-14, "order {n} node {i}");
            assert!((r.weights[i] - w[i]).abs() < 1e-14, "order {n} weight {i}");
        }
    }
}

#[test]
fn single_panel_exact_through_degree_2n_minus_1() {
    for n in quad::MIN_ORDER..=quad::MAX_ORDER {
        let r = gauss_rule(n).unwrap();
        let single = |deg: usize| -> f64 {
            r.nodes
                .iter()
                .zip(&r.weights)
                .map(|(x, w)| w * x.powi(deg as i32))
                .sum()
        };
        for deg in 0..2 * n {
            // x^deg on [-1, 1]
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            let got = single(deg);
            assert!(
                (got - exact).abs() < 1e-14,
                "order {n}, degree {deg}: {got} vs {exact}"
            );
        }
        // Degree 2n is the first one the rule misses; the miss shrinks like
        // 4^-n, so only check it where it is above rounding.
        if n <= 16 {
            let exact = 2.0 / (2.0 * n as f64 + 1.0);
            let got = single(2 * n);
            assert!(
                (got - exact).abs() > 1e-13,
                "order {n} should not be exact at degree {}",
                2 * n
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composite_exact_for_polynomials(
        order in quad::MIN_ORDER..=24usize,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..48),
        ends in (-1.0f64..1.0, -1.0f64..1.0),
    ) {
        let deg = (coeffs.len() - 1).min(2 * order - 1);
        let c = &coeffs[..=deg];
        let (a, b) = ends;
        let poly = |x: f64| c.iter().rev().fold(0.0, |acc, k| acc * x + k);
        let anti = |x: f64| c.iter().enumerate().rev().fold(0.0, |acc, (j, k)| acc * x + k / (j as f64 + 1.0)) * x;
        let exact = anti(b) - anti(a);
        let got = gauss_rule(order).unwrap().integrate(ok(poly), a, b).unwrap();
        prop_assert!((got - exact).abs() < 1e-13, "{} vs {}", got, exact);
    }

    #[test]
    fn linear_in_the_integrand(
        alpha in -5.0f64..5.0,
        beta in -5.0f64..5.0,
        a in -10.0f64..10.0,
        len in 0.0f64..20.0,
    ) {
        let b = a + len;
        let g1 = |x: f64| (1.3 * x).sin() + 0.2 * x;
        let g2 = |x: f64| (-0.1 * x * x).exp();
        let lhs = integrate(ok(|x| alpha * g1(x) + beta * g2(x)), a, b).unwrap();
        let rhs = alpha * integrate(ok(g1), a, b).unwrap() + beta * integrate(ok(g2), a, b).unwrap();
        prop_assert!(rel_close(lhs, rhs, 1e-13), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn additive_over_intervals(a in -10.0f64..10.0, l1 in 0.0f64..10.0, l2 in 0.0f64..10.0) {
        let (b, c) = (a + l1, a + l1 + l2);
        let g = |x: f64| (0.7 * x).cos() * (1.0 + 0.01 * x * x);
        let whole = integrate(ok(g), a, c).unwrap();
        let parts = integrate(ok(g), a, b).unwrap() + integrate(ok(g), b, c).unwrap();
        prop_assert!(rel_close(whole, parts, 1e-13), "{} vs {}", whole, parts);
    }

    #[test]
    fn trig_against_antiderivatives(a in -15.0f64..15.0, len in 0.0f64..30.0, k in 0.1f64..3.0) {
        let b = a + len;
        let s = integrate(ok(|x| (k * x).sin()), a, b).unwrap();
        let c = integrate(ok(|x| (k * x).cos()), a, b).unwrap();
        prop_assert!((s - ((k * a).cos() - (k * b).cos()) / k).abs() <= 1e-13);
        prop_assert!((c - ((k * b).sin() - (k * a).sin()) / k).abs() <= 1e-13);
    }

    #[test]
    fn exp_against_antiderivative(a in -30.0f64..0.0, len in 0.0f64..30.0) {
        // Keep exp(b) of order one so that an absolute bound is meaningful.
        let b = (a + len).min(0.5);
        let v = integrate(ok(f64::exp), a, b).unwrap();
        prop_assert!((v - (b.exp() - a.exp())).abs() <= 1e-13);
    }

    #[test]
    fn cubic_against_antiderivative(a in -15.0f64..15.0, len in 0.0f64..30.0) {
        // Scaled so the integrand stays within [-1, 1] on [-15, 45].
        let b = a + len;
        let g = |x: f64| 1e-5 * (x * x * x - 3.0 * x) + 0.1;
        let anti = |x: f64| 1e-5 * (x.powi(4) / 4.0 - 1.5 * x * x) + 0.1 * x;
        let v = integrate(ok(g), a, b).unwrap();
        prop_assert!((v - (anti(b) - anti(a))).abs() <= 1e-13, "{} vs {}", v, anti(b) - anti(a));
    }

    #[test]
    fn reversing_limits_negates(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let g = |x: f64| x.sin() + 2.0;
        let fwd = integrate(ok(g), a, b).unwrap();
        let back = integrate(ok(g), b, a).unwrap();
        prop_assert_eq!(fwd, -back);
    }
}
