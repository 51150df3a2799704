use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torsionknot::asymptotics::{torsion_closed_form, torsion_closed_form_linear};
use torsionknot::knot::TorusKnot;
use torsionknot::matrix::Matrix;
use torsionknot::scalar::MpComplex;
use torsionknot::sl2::{group_relation_holds, Mat2, Sl2Rep};
use torsionknot::sympower::{character, sym_power, weights};
use torsionknot::twisted::{
    build_complex_at, estimated_bits, torsion_generic, torsion_generic_adaptive,
    torsion_with_columns, torsion_with_lift, PrecisionPolicy,
};
use torsionknot::Error;

pub const TRIALS: u32 = 100;

/// `(module, property, check)`; each check runs [`TRIALS`] random cases.
#[allow(dead_code)]
pub type Suite = (&'static str, &'static str, fn(bool) -> Result<(), String>);

fn runner(deterministic: bool) -> TestRunner {
    let config = Config {
        cases: TRIALS,
        failure_persistence: None,
        ..Config::default()
    };
    if deterministic {
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    } else {
        TestRunner::new(config)
    }
}

fn check<S: Strategy>(
    deterministic: bool,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(deterministic)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn c64() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// A random element of SL(2,C) with entries of modest size.
fn sl2() -> impl Strategy<Value = Mat2> {
    (c64(), c64(), c64(), c64())
        .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
        .prop_filter("det bounded away from 0", |m| m.det().norm() > 0.2)
        .prop_map(|m| m.scale(m.det().sqrt().inv()))
}

fn to_na(m: &Matrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Small torus knots with a component and a parameter, `(p, q, a, b)`.
fn odd_component() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    prop_oneof![
        Just((2, 3, 1, 1)),
        Just((2, 5, 1, 1)),
        Just((2, 5, 1, 3)),
        Just((3, 4, 1, 1)),
        Just((3, 4, 1, 3)),
        Just((3, 5, 1, 1)),
        Just((3, 5, 1, 3)),
        Just((3, 7, 1, 5)),
    ]
}

fn rep_strategy() -> impl Strategy<Value = Sl2Rep> {
    (odd_component(), c64()).prop_filter_map(
        "t must give an irreducible representation",
        |((p, q, a, b), t)| {
            let c = TorusKnot::new(p, q).ok()?.component(a, b).ok()?;
            if (t - 1.0).norm() < 0.05 || t.norm() < 0.05 {
                return None;
            }
            Sl2Rep::build(&c, t).ok()
        },
    )
}

/// `U_{n-1}(x)`, the Chebyshev polynomial of the second kind.
fn chebyshev_u(n: usize, x: Complex64) -> Complex64 {
    let (mut u0, mut u1) = (Complex64::new(1.0, 0.0), 2.0 * x);
    for _ in 1..n {
        let u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u0
}

fn polar_relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

pub fn sym_power_is_a_homomorphism(deterministic: bool) -> Result<(), String> {
    check(deterministic, (sl2(), sl2(), 1usize..=10), |(a, b, n)| {
        let lhs = to_na(&sym_power(&(a * b), n).unwrap());
        let rhs = to_na(&sym_power(&a, n).unwrap()) * to_na(&sym_power(&b, n).unwrap());
        let scale = lhs.norm().max(rhs.norm());
        prop_assert!(
            (&lhs - &rhs).norm() <= 1e-10 * scale,
            "n = {n}: {:e}",
            (&lhs - &rhs).norm() / scale
        );
        Ok(())
    })
}

pub fn sym_power_is_unimodular(deterministic: bool) -> Result<(), String> {
    check(deterministic, (sl2(), 1usize..=10), |(a, n)| {
        let det = to_na(&sym_power(&a, n).unwrap()).determinant();
        let scale = a.norm().powi(2 * n as i32).max(1.0);
        prop_assert!((det - 1.0).norm() <= 1e-11 * scale, "det = {det}");
        Ok(())
    })
}

pub fn character_is_chebyshev(deterministic: bool) -> Result<(), String> {
    check(deterministic, (sl2(), 1usize..=12), |(a, n)| {
        let ch = character(&a, n).unwrap();
        let u = chebyshev_u(n, a.trace() / 2.0);
        let scale = a.norm().powi(n as i32 - 1).max(1.0);
        prop_assert!((ch - u).norm() <= 1e-11 * scale, "{ch} vs {u}");
        Ok(())
    })
}

pub fn eigenvalues_follow_the_weights(deterministic: bool) -> Result<(), String> {
    check(deterministic, (sl2(), 1usize..=8), |(a, n)| {
        // Eigenvalues of sigma_n(A) are mu^w over the weights w, mu an
        // eigenvalue of A.
        let tr = a.trace();
        let mu = (tr + (tr * tr - 4.0).sqrt()) / 2.0;
        prop_assume!((mu * mu - 1.0).norm() > 0.1);
        let m = to_na(&sym_power(&a, n).unwrap());
        let mut eig: Vec<Complex64> = m
            .eigenvalues()
            .expect("eigenvalues of a complex matrix")
            .iter()
            .copied()
            .collect();
        for w in weights(n) {
            let target = mu.powi(w as i32);
            let (k, d) = eig
                .iter()
                .enumerate()
                .map(|(k, e)| (k, polar_relative(*e, target)))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            prop_assert!(d < 1e-6, "weight {w}: nearest eigenvalue off by {d:e}");
            eig.swap_remove(k);
        }
        Ok(())
    })
}

pub fn components_count_and_classify(deterministic: bool) -> Result<(), String> {
    check(deterministic, (2i64..=25, 2i64..=25), |(p, q)| {
        match TorusKnot::new(p, q) {
            Ok(k) => {
                prop_assert_eq!(k.p() * k.s() - k.q() * k.r(), 1);
                prop_assert!(0 < k.s() && k.s() < k.q());
                let comps = k.components();
                prop_assert_eq!(comps.len() as i64, (p - 1) * (q - 1) / 2);
                for c in comps {
                    prop_assert_eq!(c.is_acyclic(), c.central_sign() == -1);
                    prop_assert_eq!(c.is_acyclic(), c.a() % 2 == 1);
                }
            }
            Err(e) => prop_assert!(matches!(e, Error::NonCoprime { .. }), "{e}"),
        }
        Ok(())
    })
}

pub fn representations_satisfy_the_relation(deterministic: bool) -> Result<(), String> {
    check(deterministic, rep_strategy(), |rep| {
        prop_assert!(group_relation_holds(rep.knot(), rep.rho_x(), rep.rho_y()));
        prop_assert!(rep.rho_x().is_unimodular() && rep.rho_y().is_unimodular());
        Ok(())
    })
}

pub fn torsion_is_independent_of_t(deterministic: bool) -> Result<(), String> {
    check(
        deterministic,
        (rep_strategy(), c64(), 1usize..=4),
        |(rep, t2, n)| {
            let other = Sl2Rep::build(rep.component(), t2);
            prop_assume!(other.is_ok() && (t2 - 1.0).norm() > 0.05 && t2.norm() > 0.05);
            let policy = PrecisionPolicy::default();
            let a = torsion_generic_adaptive(&rep, n, &policy).unwrap().value;
            let b = torsion_generic_adaptive(&other.unwrap(), n, &policy)
                .unwrap()
                .value;
            prop_assert!(a.relative_difference(b) <= 1e-8, "{a} vs {b}");
            let closed = torsion_closed_form(rep.component(), n).unwrap().log_value();
            prop_assert!(
                a.relative_difference(closed) <= 1e-8,
                "{a} vs closed form {closed}"
            );
            Ok(())
        },
    )
}

pub fn torsion_is_independent_of_the_column_lift(deterministic: bool) -> Result<(), String> {
    check(
        deterministic,
        (rep_strategy(), 1usize..=3, any::<u64>()),
        |(rep, n, seed)| {
            let bits = estimated_bits(&rep, n) + 64;
            let cx = build_complex_at::<MpComplex>(&rep, n, bits).unwrap();
            let base = torsion_generic(&cx).unwrap().value;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let columns = rand::seq::index::sample(&mut rng, 4 * n, 2 * n).into_vec();
            match torsion_with_columns(&cx, &columns) {
                Ok(v) => prop_assert!(
                    v.value.relative_difference(base) <= 1e-8,
                    "columns {columns:?}: {} vs {base}",
                    v.value
                ),
                Err(Error::SingularDenominator { .. }) | Err(Error::IllConditioned { .. }) => {}
                Err(e) => prop_assert!(false, "columns {columns:?}: {e}"),
            }
            Ok(())
        },
    )
}

pub fn torsion_is_independent_of_a_dense_lift(deterministic: bool) -> Result<(), String> {
    check(
        deterministic,
        (
            rep_strategy(),
            1usize..=3,
            proptest::collection::vec(c64(), 72),
        ),
        |(rep, n, entries)| {
            let bits = estimated_bits(&rep, n) + 64;
            let cx = build_complex_at::<MpComplex>(&rep, n, bits).unwrap();
            let base = torsion_generic(&cx).unwrap().value;
            let lift: Matrix<MpComplex> =
                Matrix::from_c64(4 * n, 2 * n, &entries[..8 * n * n], bits);
            let v = torsion_with_lift(&cx, &lift).unwrap();
            prop_assert!(v.relative_difference(base) <= 1e-8, "{v} vs {base}");
            Ok(())
        },
    )
}

pub fn torsion_is_invariant_under_conjugation(deterministic: bool) -> Result<(), String> {
    check(
        deterministic,
        (rep_strategy(), sl2(), 1usize..=4),
        |(rep, h, n)| {
            let policy = PrecisionPolicy::default();
            let conj = rep.conjugate(&h).unwrap();
            let a = torsion_generic_adaptive(&rep, n, &policy).unwrap().value;
            let b = torsion_generic_adaptive(&conj, n, &policy).unwrap().value;
            prop_assert!(a.relative_difference(b) <= 1e-8, "{a} vs {b}");
            Ok(())
        },
    )
}

pub fn closed_form_log_and_linear_agree(deterministic: bool) -> Result<(), String> {
    check(deterministic, (odd_component(), 1usize..=200), |(k, n)| {
        let c = TorusKnot::new(k.0, k.1)
            .unwrap()
            .component(k.2, k.3)
            .unwrap();
        let log = torsion_closed_form(&c, n).unwrap().log_abs;
        if let Some(lin) = torsion_closed_form_linear(&c, n).unwrap() {
            prop_assert!(lin > 0.0);
            prop_assert!((lin.ln() - log).abs() <= 1e-9 * log.abs().max(1.0));
        }
        Ok(())
    })
}

#[allow(dead_code)]
pub const SUITES: &[Suite] = &[
    (
        "sym-power",
        "sym_power_is_a_homomorphism",
        sym_power_is_a_homomorphism,
    ),
    (
        "sym-power",
        "sym_power_is_unimodular",
        sym_power_is_unimodular,
    ),
    (
        "sym-power",
        "character_is_chebyshev",
        character_is_chebyshev,
    ),
    (
        "sym-power",
        "eigenvalues_follow_the_weights",
        eigenvalues_follow_the_weights,
    ),
    (
        "knot-core",
        "components_count_and_classify",
        components_count_and_classify,
    ),
    (
        "sl2-rep",
        "representations_satisfy_the_relation",
        representations_satisfy_the_relation,
    ),
    (
        "twisted-complex",
        "torsion_is_independent_of_t",
        torsion_is_independent_of_t,
    ),
    (
        "twisted-complex",
        "torsion_is_independent_of_the_column_lift",
        torsion_is_independent_of_the_column_lift,
    ),
    (
        "twisted-complex",
        "torsion_is_independent_of_a_dense_lift",
        torsion_is_independent_of_a_dense_lift,
    ),
    (
        "twisted-complex",
        "torsion_is_invariant_under_conjugation",
        torsion_is_invariant_under_conjugation,
    ),
    (
        "torsion-asymptotics",
        "closed_form_log_and_linear_agree",
        closed_form_log_and_linear_agree,
    ),
];
