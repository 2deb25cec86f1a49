//! Randomized invariants of each module.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use separable_poisson::casimir::CasimirSet;
use separable_poisson::charts::ChartFunction;
use separable_poisson::darboux::DarbouxTransform;
use separable_poisson::dynamics::PoissonSystem;
use separable_poisson::expr::{self, Expr, Func, Node};
use separable_poisson::linalg::{
    canonical_form, kernel_basis, skew_canonical_congruence, CoefficientMatrix, Rational,
    RationalMatrix,
};
use separable_poisson::models::zoo_models;
use separable_poisson::structure::{jacobi_residual_fd, numerical_rank, skew_defect};

fn skew_matrix(max_n: usize, bound: i64) -> impl Strategy<Value = CoefficientMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * (n - 1) / 2).prop_map(move |v| {
            let upper: Vec<Rational> = v.into_iter().map(Rational::from).collect();
            CoefficientMatrix::from_upper(n, &upper).unwrap()
        })
    })
}

fn invertible(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-3i64..=3, n * n)
        .prop_map(move |v| {
            let rows: Vec<Vec<Rational>> = v
                .chunks(n)
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect();
            RationalMatrix::from_rows(rows).unwrap()
        })
        .prop_filter("singular", |m| !m.determinant().unwrap().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn congruence_is_exact(a in skew_matrix(8, 5)) {
        let n = a.dim();
        let c = skew_canonical_congruence(&a);
        prop_assert_eq!(c.rank % 2, 0);
        prop_assert_eq!(c.rank, a.rank());
        let pap = c.p.mul(a.as_matrix()).unwrap().mul(&c.p.transpose()).unwrap();
        prop_assert_eq!(&pap, &canonical_form(n, c.rank));
        prop_assert_eq!(&pap, &c.canonical);
        prop_assert!(!c.p.determinant().unwrap().is_zero());
        // same input, same output
        prop_assert_eq!(skew_canonical_congruence(&a.clone()), c);
    }

    #[test]
    fn kernel_complements_rank(a in skew_matrix(8, 5)) {
        let k = kernel_basis(&a);
        prop_assert_eq!(k.len() + a.rank(), a.dim());
        for v in k.vectors() {
            prop_assert!(a.as_matrix().mul_vec(v).unwrap().iter().all(Rational::is_zero));
        }
        prop_assert_eq!(kernel_basis(&a), k);
    }

    #[test]
    fn rank_is_a_congruence_invariant((a, q) in (1usize..=6).prop_flat_map(|n| (skew_matrix_n(n), invertible(n)))) {
        let b = q.mul(a.as_matrix()).unwrap().mul(&q.transpose()).unwrap();
        let b = CoefficientMatrix::new(b).unwrap();
        prop_assert_eq!(b.rank(), a.rank());
        prop_assert_eq!(CasimirSet::new(&structure_with_unit_charts(&b)).len(), a.dim() - a.rank());
    }
}

fn skew_matrix_n(n: usize) -> impl Strategy<Value = CoefficientMatrix> {
    prop::collection::vec(-5i64..=5, n * (n - 1) / 2).prop_map(move |v| {
        let upper: Vec<Rational> = v.into_iter().map(Rational::from).collect();
        CoefficientMatrix::from_upper(n, &upper).unwrap()
    })
}

fn structure_with_unit_charts(
    a: &CoefficientMatrix,
) -> separable_poisson::structure::SeparableStructure {
    separable_poisson::structure::SeparableStructure::with_chart_domains(
        a.clone(),
        vec![ChartFunction::unit(); a.dim()],
    )
    .unwrap()
}

// ------------------------------------------------------------ expressions

// Constructors that fold constants the same way the parser does, so every
// generated tree is one the parser can produce.
fn neg(a: Node) -> Node {
    match a {
        Node::Const(c) => Node::Const(-c),
        a => Node::Neg(Box::new(a)),
    }
}

fn div(a: Node, b: Node) -> Node {
    match (a, b) {
        (Node::Const(a), Node::Const(b)) if !b.is_zero() => Node::Const(a / b),
        (a, b) => Node::Div(Box::new(a), Box::new(b)),
    }
}

fn node() -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Node::Const(Rational::new(p, q).unwrap())),
        (0usize..3).prop_map(Node::Var),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| div(a, b)),
            (inner.clone(), -3i32..=4).prop_map(|(a, k)| Node::Pow(Box::new(a), k)),
            inner.clone().prop_map(neg),
            inner
                .clone()
                .prop_map(|a| Node::Call(Func::Ln, Box::new(a))),
            inner.prop_map(|a| Node::Call(Func::Exp, Box::new(a))),
        ]
    })
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.5f64..2.0, 3)
}

const CORPUS: &[&str] = &[
    "x1*x2 - ln(x3)",
    "exp(-x1/2)*x2^3",
    "(x1 + x2)/(1 + x3^2)",
    "-ln(x1) - ln(1 - x1/3) + x2*x3",
    "(2 - 1/x1)^2 + (2 - 1/x3)^2",
    "x1^(-2)*exp(x2 - x3) + 3/4*x2",
    "ln(exp(x1) + exp(x2)) - x3^4/5",
];

/// Central difference of `e` in direction `i`, step relative to `x[i]`.
fn central(e: &Expr, x: &[f64], i: usize) -> Option<f64> {
    let h = 1e-6 * x[i].abs().max(1.0);
    let mut p = x.to_vec();
    p[i] = x[i] + h;
    let plus = e.evaluate(&p).ok()?;
    p[i] = x[i] - h;
    let minus = e.evaluate(&p).ok()?;
    Some((plus - minus) / (2.0 * h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_round_trip(root in node()) {
        let e = Expr::new(root, 3).unwrap();
        let text = e.to_string();
        let back = expr::parse(&text, 3).unwrap();
        prop_assert_eq!(back.root(), e.root(), "{}", text);
    }

    #[test]
    fn derivative_matches_differences(root in node(), x in point()) {
        let e = Expr::new(root, 3).unwrap();
        let Ok(value) = e.evaluate(&x) else { return Ok(()) };
        prop_assume!(value.is_finite() && value.abs() < 1e6);
        for (i, d) in e.gradient().iter().enumerate() {
            let (Ok(exact), Some(fd)) = (d.evaluate(&x), central(&e, &x, i)) else { continue };
            prop_assume!(exact.is_finite() && exact.abs() < 1e6 && fd.is_finite());
            // rounding in the difference grows with |value| / h
            let scale = exact.abs().max(1.0) + 1e-4 * value.abs();
            prop_assert!((exact - fd).abs() <= 1e-6 * scale, "{} d/dx{}: {} vs {}", e, i + 1, exact, fd);
        }
    }

    #[test]
    fn corpus_derivatives(x in point()) {
        for src in CORPUS {
            let e = expr::parse(src, 3).unwrap();
            for (i, d) in e.gradient().iter().enumerate() {
                let exact = d.evaluate(&x).unwrap();
                let fd = central(&e, &x, i).unwrap();
                prop_assert!((exact - fd).abs() <= 1e-6 * exact.abs().max(1.0), "{} d/dx{}", src, i + 1);
            }
        }
    }

    #[test]
    fn differentiation_is_linear(
        f in 0..CORPUS.len(),
        g in 0..CORPUS.len(),
        (p, q) in (-5i64..=5, 1i64..=3),
        x in point(),
    ) {
        let a = Rational::new(p, q).unwrap();
        let b = Rational::new(q, 2).unwrap();
        let combined = expr::parse(&format!("({a})*({}) + ({b})*({})", CORPUS[f], CORPUS[g]), 3).unwrap();
        let (fe, ge) = (expr::parse(CORPUS[f], 3).unwrap(), expr::parse(CORPUS[g], 3).unwrap());
        for i in 0..3 {
            let lhs = combined.differentiate(i).evaluate(&x).unwrap();
            let rhs = a.to_f64() * fe.differentiate(i).evaluate(&x).unwrap()
                + b.to_f64() * ge.differentiate(i).evaluate(&x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
        }
    }
}

// ------------------------------------------------------------ charts

fn chart_and_points() -> impl Strategy<Value = (ChartFunction, Vec<f64>)> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = common::random_chart(&mut rng);
        let w = chart.interval().window(10.0);
        let m = 1e-3 * (w.hi - w.lo);
        let grid = (0..64)
            .map(|i| w.lo + m + (w.hi - w.lo - 2.0 * m) * i as f64 / 63.0)
            .collect();
        (chart, grid)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn chart_invariants((chart, grid) in chart_and_points()) {
        let name = chart.family().name();
        let mut previous: Option<f64> = None;
        let mut direction = 0.0;
        for &x in &grid {
            let phi = chart.phi(x).unwrap();
            prop_assert!(phi != 0.0 && phi.is_finite(), "{} phi({}) = {}", name, x, phi);
            let f = chart.forward(x).unwrap();
            prop_assert!((chart.inverse(f).unwrap() - x).abs() <= 1e-10, "{} round trip at {}", name, x);
            if let Some(p) = previous {
                let step = (f - p).signum();
                prop_assert!(step != 0.0 && (direction == 0.0 || step == direction), "{} not monotone at {}", name, x);
                direction = step;
            }
            previous = Some(f);
            // dF/dx = 1/phi
            let h = 1e-6 * x.abs().max(1e-2);
            let fd = (chart.forward(x + h).unwrap() - chart.forward(x - h).unwrap()) / (2.0 * h);
            prop_assert!((fd * phi - 1.0).abs() <= 1e-6, "{} dF/dx at {}: {} vs {}", name, x, fd, 1.0 / phi);
        }
    }
}

// ------------------------------------------------------------ structures

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn structure_invariants(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = common::random_structure(&mut rng, n, 2.0);
        let rank = s.rank();
        for x in s.domain().sampler().sample(20, seed) {
            let j = s.matrix(&x).unwrap();
            prop_assert!(skew_defect(&j) <= 1e-14);
            prop_assert_eq!(numerical_rank(&j, 1e-10), rank);
            prop_assert!(s.jacobi_residual(&x).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn difference_residual_is_small(seed in any::<u64>(), n in 2usize..=6) {
        // unit-width boxes keep |J| of order one, where the h^2 truncation
        // and the eps/h rounding of the differences both stay below 1e-7
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = common::random_structure(&mut rng, n, 1.0);
        for x in s.domain().sampler().sample(10, seed) {
            let fd = jacobi_residual_fd(&s, &x, 1e-5).unwrap();
            prop_assert!(fd <= 1e-7 * s.matrix(&x).unwrap().amax().max(1.0).powi(2), "{}", fd);
        }
    }

    #[test]
    fn casimirs_are_independent_and_central(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = common::random_structure(&mut rng, n, 2.0);
        let set = CasimirSet::new(&s);
        prop_assert_eq!(set.len(), n - s.rank());
        for x in s.domain().sampler().sample(10, seed) {
            prop_assert!(set.is_empty() || set.independent_at(&s, &x).unwrap());
            for c in set.iter() {
                let scale = s.matrix(&x).unwrap().amax().max(1.0);
                prop_assert!(c.gradient_check(&s, &x).unwrap() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn darboux_round_trip(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = common::random_structure(&mut rng, n, 2.0);
        let t = DarbouxTransform::new(&s);
        for x in s.domain().sampler().sample(10, seed) {
            let z = t.forward(&x).unwrap();
            let back = t.forward(&t.inverse(&z).unwrap()).unwrap();
            for (a, b) in back.iter().zip(&z) {
                prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{} vs {}", a, b);
            }
        }
    }
}

#[test]
fn zoo_difference_residuals() {
    for m in zoo_models() {
        let s = m.structure().unwrap();
        let sampler = s
            .domain()
            .sampler()
            .restrict(separable_poisson::charts::Interval::new(-2.0, 2.0).unwrap());
        for x in sampler.sample(20, 3) {
            let fd = jacobi_residual_fd(s, &x, 1e-5).unwrap();
            assert!(fd <= 1e-7, "{} at {x:?}: {fd:.2e}", m.name);
            assert!(s.jacobi_residual(&x).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn casimir_coordinates_stay_fixed() {
    for m in zoo_models() {
        let s = m.structure().unwrap().clone();
        let h = expr::parse(m.hamiltonian.as_deref().unwrap(), m.dim()).unwrap();
        let t = DarbouxTransform::new(&s);
        let sys = PoissonSystem::new(s, h).unwrap();
        let traj = sys
            .integrate(m.initial_point.as_ref().unwrap(), 5.0, 1e-3)
            .unwrap();
        let z0 = t.forward(&traj.states[0]).unwrap();
        for x in &traj.states {
            let z = t.forward(x).unwrap();
            for i in t.casimir_coordinates() {
                // same bound as the Casimir drift of the integrator
                assert!(
                    (z[i] - z0[i]).abs() <= 1e-8,
                    "{}: z{} drifts",
                    m.name,
                    i + 1
                );
            }
        }
    }
}
