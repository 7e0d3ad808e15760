use marshak::series::AnalyticSeries;
use marshak::{linspace, planar, spherical, DimensionlessProblem, SQRT3};
use proptest::prelude::*;

fn problem() -> impl Strategy<Value = DimensionlessProblem> {
    prop_oneof![
        (0.3f64..3.0, 0.01f64..1.0).prop_map(|(b, eps)| DimensionlessProblem::slab(b, eps).unwrap()),
        (0.5f64..4.0, 0.3f64..2.0, 0.01f64..1.0)
            .prop_map(|(x1, l, eps)| DimensionlessProblem::shell(x1, x1 + l, eps).unwrap()),
    ]
}

fn steady(problem: &DimensionlessProblem, x: f64) -> f64 {
    match problem.geometry {
        marshak::Geometry::Slab { b } => planar::steady_profile(x, b).unwrap().0,
        marshak::Geometry::Shell { x1, x2 } => spherical::steady_profile(x, x1, x2).unwrap().0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn densities_are_bounded_and_ordered(p in problem(), tau in 0.01f64..5.0) {
        let series = AnalyticSeries::new(&p, 30).unwrap();
        let (lo, hi) = p.geometry.bounds();
        for x in linspace(lo, hi, 9) {
            let f = series.fields(x, tau).unwrap();
            let slack = f.u.tol + f.v.tol + 1e-12;
            prop_assert!(f.v.value >= -slack);
            prop_assert!(f.v.value <= f.u.value + slack, "v {} > u {} at x={x}", f.v.value, f.u.value);
            prop_assert!(f.u.value <= steady(&p, x) + slack);
        }
    }

    #[test]
    fn marshak_conditions_hold(p in problem(), tau in 0.01f64..5.0) {
        let series = AnalyticSeries::new(&p, 30).unwrap();
        let (lo, hi) = p.geometry.bounds();
        let k = 2.0 / SQRT3;
        let (f, g) = (series.fields(lo, tau).unwrap(), series.gradients(lo, tau).unwrap());
        prop_assert!((f.u.value - k * g.u.value - 1.0).abs() <= f.u.tol + k * g.u.tol + 1e-12);
        let (f, g) = (series.fields(hi, tau).unwrap(), series.gradients(hi, tau).unwrap());
        prop_assert!((f.u.value + k * g.u.value).abs() <= f.u.tol + k * g.u.tol + 1e-12);
    }

    #[test]
    fn late_time_reaches_the_steady_profile(p in problem()) {
        let series = AnalyticSeries::new(&p, 20).unwrap();
        let (lo, hi) = p.geometry.bounds();
        for x in linspace(lo, hi, 5) {
            let f = series.fields(x, 200.0).unwrap();
            prop_assert!((f.u.value - steady(&p, x)).abs() < 1e-8);
            prop_assert!((f.v.value - steady(&p, x)).abs() < 1e-8);
        }
    }

    #[test]
    fn energy_balance_closes(p in problem(), tau in 0.05f64..5.0) {
        let series = AnalyticSeries::new(&p, 30).unwrap();
        prop_assert!(series.energy_balance_residual(tau).unwrap() < 1e-10);
    }
}
