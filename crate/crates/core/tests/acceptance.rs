//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. All comparisons are exact.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use beauville_core::catalog::{builtin_catalog, verify_row};
use beauville_core::fujiki::FujikiStructure;
use beauville_core::lattice::lambda_gram;
use beauville_core::ledger::{derive_b2_og10, leray_product_bound, BettiProfile};
use beauville_core::monodromy::{
    closed_form_invariant_dimension, invariant_dimension, wedge_determinant,
};
use beauville_core::rational::int;
use beauville_core::solver::{
    evaluation_matrix, hilb2_cross_check, saturation_certificate, solve, SolverInput,
};
use beauville_core::{BigRational, ExactMatrix, LatticeExpr};
use common::*;
use proptest::strategy::{Just, Strategy};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_reproduction() -> Outcome {
    let rows = builtin_catalog();
    let expected = [
        ("X^[2]", 23usize, "3", 2i64),
        ("K^2(T)", 7, "9", 6),
        ("OG6", 8, "60", 4),
        ("OG10", 24, "945", 3),
        ("X^[5]", 23, "945", 8),
    ];
    ensure(rows.len() == expected.len(), || {
        format!("{} rows", rows.len())
    })?;
    for (row, (name, b2, c, disc)) in rows.iter().zip(expected) {
        let report = verify_row(row);
        ensure(report.passed(), || format!("{name}: {:?}", report.checks))?;
        let lattice = row.lattice.realize();
        ensure(row.name == name, || format!("row {} vs {name}", row.name))?;
        ensure(lattice.rank() == b2, || {
            format!("{name}: rank {}", lattice.rank())
        })?;
        let sig = lattice.signature();
        ensure(
            (sig.positive, sig.negative, sig.zero) == (3, b2 - 3, 0),
            || format!("{name}: signature {sig}"),
        )?;
        ensure(lattice.is_even(), || format!("{name}: odd"))?;
        ensure(
            num_traits::Signed::abs(&lattice.discriminant()) == disc.into(),
            || format!("{name}: discriminant {}", lattice.discriminant()),
        )?;
        ensure(row.fujiki.to_string() == c, || {
            format!("{name}: fujiki {}", row.fujiki)
        })?;
    }
    Ok("ranks 23/7/8/24, signatures (3, b2-3), even, |disc| 2/6/4/3, c 3/9/60/945".into())
}

fn beauville_recovery() -> Outcome {
    let sol = solve(&SolverInput::og10()).map_err(|e| e.to_string())?;
    ensure(sol.a == int(1), || format!("a = {}", sol.a))?;
    ensure(sol.c == int(945), || format!("c = {}", sol.c))?;
    ensure(sol.exceptional_gram == lambda_gram(), || {
        format!("exceptional gram {}", sol.exceptional_gram)
    })?;
    Ok(format!(
        "a = 1, c = 945, exceptional gram {}",
        sol.exceptional_gram
    ))
}

fn forward_consistency() -> Outcome {
    let sol = solve(&SolverInput::og10()).map_err(|e| e.to_string())?;
    for (pattern, value) in [
        ([("mu", 8), ("Sigma", 1), ("B", 1)].as_slice(), 315),
        (&[("mu", 8), ("Sigma", 2)], -630),
        (&[("mu", 8), ("B", 2)], -210),
    ] {
        let named: BTreeMap<String, u32> =
            pattern.iter().map(|&(k, e)| (k.to_string(), e)).collect();
        let got = sol.predict_integral(&named).map_err(|e| e.to_string())?;
        ensure(got == int(value), || {
            format!("{pattern:?}: {got} vs {value}")
        })?;
    }
    let h = hilb2_cross_check();
    ensure(h == int(630), || format!("hilb2 cross-check {h}"))?;
    Ok("315, -630, -210; hilb2 cross-check 630".into())
}

fn saturation() -> Outcome {
    // α_i(β_j): unitriangular with arbitrary integers above the diagonal
    let mut upper = ExactMatrix::identity(22);
    for i in 0..22 {
        for j in i + 1..22 {
            upper = upper.with_entry(i, j, int(((i * 7 + j * 3) % 11) as i64 - 5));
        }
    }
    let corner = ExactMatrix::from_ints(&[[-2, 1], [3, -2]]).map_err(|e| e.to_string())?;
    let lower_rows: Vec<Vec<i64>> = (0..2)
        .map(|i| (0..22).map(|j| ((i * 5 + j * 2) % 9) as i64 - 4).collect())
        .collect();
    let lower = ExactMatrix::from_ints(&lower_rows).map_err(|e| e.to_string())?;
    let m = evaluation_matrix(&upper, &corner, Some(&lower));
    ensure(m.rows() == 24 && m.cols() == 24, || "not 24x24".into())?;
    let cert = saturation_certificate(&m).map_err(|e| e.to_string())?;
    ensure(cert.determinant == int(1), || {
        format!("det {}", cert.determinant)
    })?;
    ensure(block_determinant_check(&m), || {
        "independent determinant disagrees".into()
    })?;

    let u5 = LatticeExpr::parse("U^5")
        .map_err(|e| e.to_string())?
        .realize();
    let fs = FujikiStructure::new(5, int(945), u5.gram().clone()).map_err(|e| e.to_string())?;
    let v = fs
        .polarized_integral(&(0..10).collect::<Vec<_>>())
        .map_err(|e| e.to_string())?;
    ensure(v == int(1), || format!("hyperbolic integral {v}"))?;
    Ok("det M = 1, hyperbolic-basis integral = 1".into())
}

/// Recomputes det M blockwise: zero upper-right block, SNF of the upper
/// block and cofactor expansion of the corner.
fn block_determinant_check(m: &ExactMatrix) -> bool {
    let upper = m.submatrix(&(0..22).collect::<Vec<_>>(), &(0..22).collect::<Vec<_>>());
    let corner = m.submatrix(&[22, 23], &[22, 23]);
    let zero_block = m
        .submatrix(&(0..22).collect::<Vec<_>>(), &[22, 23])
        .is_zero();
    let snf_det = |a: &ExactMatrix| -> BigRational {
        a.smith_normal_form()
            .map(|s| BigRational::from_integer(s.d.iter().product()))
            .unwrap_or_else(|_| int(0))
    };
    zero_block && snf_det(&upper) == int(1) && cofactor_det(&corner) == int(1)
}

fn monodromy() -> Outcome {
    for p in 1..=8u32 {
        let q1 = invariant_dimension(p, 1).map_err(|e| e.to_string())?;
        let q2 = invariant_dimension(p, 2).map_err(|e| e.to_string())?;
        let p_ = p as usize;
        ensure(q1 == 2 * p_ - 1, || format!("p={p}, q=1: {q1}"))?;
        ensure(q2 == 2 * p_ * p_ + 2 - 3 * p_, || {
            format!("p={p}, q=2: {q2}")
        })?;
        for q in 0..=2 * p_ {
            let det = wedge_determinant(p, q).map_err(|e| e.to_string())?;
            ensure(det == int(1), || format!("p={p}, q={q}: det {det}"))?;
        }
    }
    Ok("2p-1 and 2p^2-3p+2 for p = 1..8; det of every wedge power = 1".into())
}

fn leray_coincidence() -> Outcome {
    let fiber = BettiProfile::pinched_sphere();
    for p in 2..=8u32 {
        let base = BettiProfile::complex_torus(p - 1);
        for q in 1..=2 {
            let bound = leray_product_bound(&fiber, &base, q);
            let closed = closed_form_invariant_dimension(p, q).map_err(|e| e.to_string())?;
            let brute = invariant_dimension(p, q).map_err(|e| e.to_string())?;
            ensure(bound == closed as u64 && closed == brute, || {
                format!("p={p}, q={q}: leray {bound}, closed {closed}, brute {brute}")
            })?;
        }
    }
    Ok("Leray bound = invariant dimension for q = 1, 2 and p = 2..8".into())
}

fn betti_derivation() -> Outcome {
    let d = derive_b2_og10().map_err(|e| e.to_string())?;
    ensure(d.value == Some(24), || format!("value {:?}", d.value))?;
    let lines: Vec<String> = d.trace.iter().map(ToString::to_string).collect();
    let has = |needle: &str| lines.iter().any(|l| l.contains(needle));
    for needle in [
        "b2 of the ambient moduli space = 23] H2(Phi^-1(U) + V) = 23",
        "H2(Phi^-1(U)) = 22",
        "has 2 irreducible components] H2(M~ - Y, Psi^-1(U)) = 2",
        "[rule: exactness at H2(M~ - Y)] H2(M~ - Y) = [0, 24]",
        "[imported: previously known lower bound b2(M) >= 24] H2(M) = 24",
    ] {
        ensure(has(needle), || format!("trace lacks {needle:?}"))?;
    }
    Ok("b2 = 24 via 23 -> 22, 2 components, upper bound 24, lower bound 24".into())
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn oracle_equivalence() -> Outcome {
    for n in 1..=3u32 {
        let strategy = (1usize..=4).prop_flat_map(move |k| {
            (
                symmetric_rational(k),
                proptest::collection::vec(0..k, 2 * n as usize),
                rational().prop_filter("positive", |c| c > &int(0)),
                Just(n),
            )
        });
        runner(50)
            .run(&strategy, |(gram, classes, c, n)| {
                let fs = FujikiStructure::new(n, c.clone(), gram.clone()).unwrap();
                let fast = fs.polarized_integral(&classes).unwrap();
                let slow = naive_polarized(&c, &gram, &classes);
                proptest::prop_assert_eq!(fast, slow);
                Ok(())
            })
            .map_err(|e| format!("2n = {}: {e}", 2 * n))?;
    }
    runner(100)
        .run(&integer_matrix(6, 20), |a| {
            proptest::prop_assert_eq!(check_snf(&a), Ok(()));
            Ok(())
        })
        .map_err(|e| format!("SNF: {e}"))?;
    runner(100)
        .run(&square_integer_matrix(6, 20), |a| {
            proptest::prop_assert_eq!(det_matches_snf(&a), Ok(()));
            Ok(())
        })
        .map_err(|e| format!("det vs SNF: {e}"))?;
    Ok("matchings = S_2n sum (3 x 50 Grams), SNF u*A*v = diag(d) (100), det = prod d (100)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 table reproduction", table_reproduction),
        ("2 Beauville recovery", beauville_recovery),
        ("3 forward consistency", forward_consistency),
        ("4 saturation", saturation),
        ("5 monodromy", monodromy),
        ("6 Leray coincidence", leray_coincidence),
        ("7 Betti derivation", betti_derivation),
        ("8 oracle equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
