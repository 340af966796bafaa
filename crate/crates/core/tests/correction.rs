use dblint_core::control::steps_for;
use dblint_core::{corrected_problem, extrapolate, simpson_rule, CubatureRule, Ladder, Problem};
use proptest::prelude::*;

fn example() -> Problem {
    Problem::sin_xt_example()
}

/// Q(x) for the sin(x t) example as printed in closed form.
fn simpson_closed_form(x: f64) -> f64 {
    let m = x / 2.0 + 0.5;
    (x - 1.0) / 360.0 * (18.0 * 2f64.sin() + 18.0 * 0.2f64.sin() + 72.0 * 1.1f64.sin())
        + (x - 1.0) / 36.0
            * (x * x - x / 5.0 + 1.0)
            * ((x * (x * x + 1.0)).sin()
                + (x * x / 5.0).sin()
                + 4.0 * (x * (x * x / 2.0 + x / 10.0 + 0.5)).sin())
        + (x - 1.0) / 36.0
            * (m * m - x / 10.0 + 0.9)
            * (16.0 * (m * (x / 20.0 + m * m / 2.0 + 11.0 / 20.0)).sin()
                + 4.0 * (m * (x / 10.0 + 0.1)).sin()
                + 4.0 * (m * (m * m + 1.0)).sin())
}

#[test]
fn generic_simpson_matches_closed_form() {
    let q = simpson_rule(&example());
    for x in [1.0, 1.5, 2.0, 3.0, 3.7, 4.0, 5.0] {
        let got = q.eval(x).unwrap().v;
        let want = simpson_closed_form(x);
        assert!((got - want).abs() < 1e-12, "x = {x}: {got} vs {want}");
    }
}

#[test]
fn zero_rule_is_the_identity() {
    let p = example();
    let cp = corrected_problem(&p, CubatureRule::zero()).unwrap();
    let (a, b) = (
        extrapolate(&p, 200, 3).unwrap(),
        extrapolate(&cp, 200, 3).unwrap(),
    );
    for i in 0..a.xs.len() {
        assert_eq!(a.ms[i].to_bits(), b.ms[i].to_bits());
        assert_eq!(a.zs[i].to_bits(), b.zs[i].to_bits());
    }
}

#[test]
fn rule_can_only_be_attached_once() {
    let p = example();
    let cp = corrected_problem(&p, simpson_rule(&p)).unwrap();
    assert!(corrected_problem(&cp, simpson_rule(&p)).is_err());
}

/// `max_i |M_m - M_{m+1}|`: the ladder's own error estimate for `M_m`.
fn estimate(p: &Problem, n: usize, m: usize) -> (Vec<f64>, f64) {
    let ladder = Ladder::run(p, n, m + 1).unwrap();
    let (lo, hi) = (ladder.table(m).unwrap(), ladder.table(m + 1).unwrap());
    let est = lo
        .ms
        .iter()
        .zip(&hi.ms)
        .fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
    (lo.ms, est)
}

#[test]
fn corrected_curve_plus_rule_recovers_the_integral() {
    let p = example();
    let q = simpson_rule(&p);
    let cp = corrected_problem(&p, q.clone()).unwrap();
    let n = steps_for(p.x0, p.x_end, 4e-3);
    for m in [3, 4] {
        let (plain, plain_est) = estimate(&p, n, m);
        let (corr, corr_est) = estimate(&cp, n, m);
        let tol = 10.0 * (plain_est + corr_est);
        for i in 0..=n {
            let x = p.x0 + (p.x_end - p.x0) * i as f64 / n as f64;
            let sum = q.eval(x).unwrap().v + corr[i];
            assert!(
                (sum - plain[i]).abs() <= tol,
                "m = {m}, x = {x}: {sum} vs {}",
                plain[i]
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rule_jets_match_differences(x in 1.1f64..4.9) {
        let q = simpson_rule(&example());
        let val = |u: f64| q.eval(u).unwrap().v;
        let j = q.eval(x).unwrap();
        let h = 1e-4;
        let d1 = (val(x - 2.0 * h) - 8.0 * val(x - h) + 8.0 * val(x + h) - val(x + 2.0 * h)) / (12.0 * h);
        let d2 = (-val(x - 2.0 * h) + 16.0 * val(x - h) - 30.0 * val(x) + 16.0 * val(x + h) - val(x + 2.0 * h))
            / (12.0 * h * h);
        prop_assert!((j.d1 - d1).abs() <= 1e-6 * j.d1.abs().max(1.0), "{} vs {}", j.d1, d1);
        prop_assert!((j.d2 - d2).abs() <= 1e-6 * j.d2.abs().max(1.0), "{} vs {}", j.d2, d2);
    }
}
