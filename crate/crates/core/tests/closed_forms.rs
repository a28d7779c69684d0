use djet_core::bm4::{Bm4Input, Bm4Model};
use djet_core::objects::inverse_defect;
use djet_core::PhasePoint;
use proptest::prelude::*;

fn model(sigma: &str, h11: &str, kappa: f64) -> Bm4Model {
    Bm4Model::new(Bm4Input::new(sigma.parse().unwrap(), h11.parse().unwrap()).with_einstein_constant(kappa)).unwrap()
}

fn point() -> impl Strategy<Value = PhasePoint> {
    (-1.0..1.0f64, prop::array::uniform4(-1.0..1.0f64), prop::array::uniform4(-2.3..2.3f64))
        .prop_map(|(t, x, lp)| PhasePoint::new(t, x, lp.map(f64::exp)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metrics_are_exact_inverses(pt in point()) {
        let m = model("exp(x1+x3)/4", "1+t^2", 1.0).metric(&pt).unwrap();
        prop_assert!(inverse_defect(&m.upper, &m.lower) < 1e-12);
    }

    #[test]
    fn metrics_are_scale_invariant_in_momenta(pt in point()) {
        let m = model("x1*x2", "exp(t)", 1.0);
        let base = m.metric(&pt).unwrap();
        for lambda in [0.5, 3.0] {
            let scaled = PhasePoint::new(pt.t(), pt.x(), pt.p().map(|p| lambda * p)).unwrap();
            let s = m.metric(&scaled).unwrap();
            for (a, b) in base.upper.iter().flatten().zip(s.upper.iter().flatten()) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
            for (a, b) in base.lower.iter().flatten().zip(s.lower.iter().flatten()) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn einstein_blocks_reproduce_their_sources(pt in point(), kappa in 0.5..4.0f64) {
        let f = model("sin(x2)", "1+t^2", kappa).einstein_cf(&pt).unwrap();
        prop_assert!((f.einstein_11 - kappa * f.t11).abs() <= 1e-15 * f.einstein_11.abs().max(1.0));
        for (l, t) in f.einstein_x.iter().flatten().zip(f.t_x.iter().flatten()) {
            prop_assert!((l - kappa * t).abs() <= 1e-15 * l.abs().max(1.0));
        }
        for (l, t) in f.einstein_p.iter().flatten().zip(f.t_p.iter().flatten()) {
            prop_assert!((l - kappa * t).abs() <= 1e-15 * l.abs().max(1.0));
        }
        prop_assert!(f.zero_blocks.iter().flatten().flatten().all(|v| *v == 0.0));
    }
}

#[test]
fn conformal_factor_scales_the_lower_metric() {
    let pt = PhasePoint::new(0.0, [1.0, 0.0, 0.0, 0.0], [1.0, 2.0, 3.0, 4.0]).unwrap();
    let deformed = model("x1", "1", 1.0).metric_lower(&pt).unwrap();
    let flat = model("0", "1", 1.0).metric_lower(&pt).unwrap();
    let e2 = 1f64.exp().powi(2);
    for (d, f) in deformed.iter().flatten().zip(flat.iter().flatten()) {
        assert!((d - e2 * f).abs() < 1e-13 * d.abs());
    }
    assert!((flat[0][1] - 1.0 / 24f64.sqrt()).abs() < 1e-15);
}

#[test]
fn vertical_ricci_at_unit_momenta() {
    let r = model("x1", "1", 1.0).ricci_cf(&PhasePoint::unit()).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let expected = if i == j { -0.375 } else { 0.125 };
            assert_eq!(r.s[i][j], expected, "S[{i}][{j}]");
        }
    }
}

#[test]
fn nonlinear_connection_is_diagonal() {
    let pt = PhasePoint::new(0.3, [0.1, 0.2, -0.4, 0.7], [0.5, 1.5, 2.5, 3.5]).unwrap();
    let n = model("exp(x1+x3)/4 + x2*x4", "1+t^2", 1.0).nonlinear_connection_cf(&pt).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                assert_eq!(n.n2[i][j], 0.0);
            }
        }
        assert!((n.n1[i] - 0.3 / (1.0 + 0.09) * pt.p()[i]).abs() < 1e-15);
    }
}
