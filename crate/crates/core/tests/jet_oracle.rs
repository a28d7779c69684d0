use djet_core::geometry::GeometryInput;
use djet_core::jet::{finite_difference, jet_evaluate, FdError, JetEngine, MultiIndex};
use djet_core::{Expression, PhasePoint, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng) -> PhasePoint {
    let t = rng.gen_range(-1.0..1.0);
    let x = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let p = std::array::from_fn(|_| rng.gen_range(0.1f64.ln()..10f64.ln()).exp());
    PhasePoint::new(t, x, p).unwrap()
}

fn agrees(jet: f64, fd: f64) -> bool {
    (jet - fd).abs() <= 1e-7f64.max(1e-5 * jet.abs())
}

fn check_field(field: &Expression, points: usize, seed: u64) {
    let wanted = MultiIndex::all_up_to(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..points {
        let pt = random_point(&mut rng);
        let table = jet_evaluate(field, &pt, &wanted).unwrap();
        for idx in &wanted {
            let jet = table.get(idx).unwrap();
            let fd = finite_difference(field, &pt, idx).unwrap();
            assert!(agrees(jet, fd), "{field}: {idx} at {pt}: jet {jet} fd {fd}");
        }
    }
}

#[test]
fn berwald_moor_hamiltonian_matches_finite_differences() {
    for (sigma, h11) in [("x1*x2", "1+t^2"), ("exp(x1+x3)/4", "exp(t)")] {
        let input = GeometryInput::berwald_moor(sigma.parse().unwrap(), h11.parse().unwrap()).unwrap();
        check_field(&input.hamiltonian, 50, 1);
    }
}

#[test]
fn polynomial_exponential_fields_match_finite_differences() {
    let fields = [
        "exp(0.5*x1 - 0.3*p2)*(1 + x2*p1^2) + t^2*p3*p4",
        "(1.3*p1 + 0.2*x3)^3*exp(0.4*t*x4) - p2*p3^2",
        "p1*p2*p3*p4*exp(-0.2*(x1 + x2 + x3 + x4)) + sin(x2)*cos(t)*p4^2",
    ];
    for (i, f) in fields.iter().enumerate() {
        check_field(&f.parse().unwrap(), 10, 10 + i as u64);
    }
}

#[test]
fn known_derivatives() {
    let root: Expression = "(p1*p2*p3*p4)^(1/2)".parse().unwrap();
    let all = MultiIndex::of(&[Var::p(0), Var::p(1), Var::p(2), Var::p(3)]).unwrap();
    let table = jet_evaluate(&root, &PhasePoint::unit(), &[all]).unwrap();
    assert!((table.get(&all).unwrap() - 1.0 / 16.0).abs() < 1e-15);

    let flat = GeometryInput::berwald_moor("0".parse().unwrap(), "1".parse().unwrap()).unwrap();
    let mixed = MultiIndex::of(&[Var::p(0), Var::p(1)]).unwrap();
    let h = jet_evaluate(&flat.hamiltonian, &PhasePoint::unit(), &[mixed]).unwrap();
    assert!((h.get(&mixed).unwrap() - 1.0).abs() < 1e-14);
    assert!((finite_difference(&flat.hamiltonian, &PhasePoint::unit(), &mixed).unwrap() - 1.0).abs() < 1e-9);

    let pp = MultiIndex::of(&[Var::p(0), Var::p(0)]).unwrap();
    assert!((finite_difference(&root, &PhasePoint::unit(), &pp).unwrap() + 0.25).abs() < 1e-6);
    let xx = MultiIndex::of(&[Var::x(0), Var::x(0)]).unwrap();
    let sq: Expression = "x1^2".parse().unwrap();
    let pt = PhasePoint::new(0.0, [0.3, 0.0, 0.0, 0.0], [1.0; 4]).unwrap();
    assert!((finite_difference(&sq, &pt, &xx).unwrap() - 2.0).abs() < 1e-7);
}

#[test]
fn permuted_requests_return_identical_values() {
    let f: Expression = "exp(x1*p2)*p1^3*t^2".parse().unwrap();
    let pt = PhasePoint::new(0.4, [0.2, -0.1, 0.0, 0.5], [1.5, 0.7, 2.0, 3.0]).unwrap();
    let a = MultiIndex::of(&[Var::x(0), Var::p(1), Var::p(0), Var::T]).unwrap();
    let b = MultiIndex::of(&[Var::T, Var::p(0), Var::x(0), Var::p(1)]).unwrap();
    let engine = JetEngine::new();
    let va = engine.evaluate(&f, &pt, &[a]).unwrap().get(&a).unwrap();
    let vb = jet_evaluate(&f, &pt, &[b]).unwrap().get(&b).unwrap();
    assert_eq!(va.to_bits(), vb.to_bits());
}

#[test]
fn oracle_preconditions() {
    let f: Expression = "p1^2".parse().unwrap();
    let too_high = MultiIndex::of(&[Var::T, Var::T, Var::x(0), Var::p(0), Var::p(1)]).unwrap();
    assert_eq!(finite_difference(&f, &PhasePoint::unit(), &too_high), Err(FdError::OrderTooHigh(5)));
    let near = PhasePoint::new(0.0, [0.0; 4], [0.07, 1.0, 1.0, 1.0]).unwrap();
    let quartic = MultiIndex::of(&[Var::p(0); 4]).unwrap();
    assert!(matches!(finite_difference(&f, &near, &quartic), Err(FdError::TooCloseToBoundary { .. })));
}
