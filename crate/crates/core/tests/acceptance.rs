//! Acceptance run: one pass/fail line per criterion, with timing against its budget.

mod common;

use std::time::{Duration, Instant};

use common::{cofactor_det, props, seed};
use paraunitary::catalog::{self, EntryResult};
use paraunitary::constructors::{monomial_sum, tangle, MonomialAssignment, TangleVariant};
use paraunitary::idempotents::{
    diagonal_set, factor_rank1, from_orthogonal_basis, group_set, verify_set, GroupTable, IdempotentSet,
};
use paraunitary::pipeline::Value;
use paraunitary::random;
use paraunitary::{parse_poly, Error, LaurentPoly, PolyMatrix, Ring, Scalar, VarSet};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = std::result::Result<String, String>;
/// Title, runtime budget and body of one criterion.
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, what: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn run_entries(ids: &[&str]) -> std::result::Result<Vec<EntryResult>, String> {
    let entries = ids
        .iter()
        .map(|id| catalog::entry(id).map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let results = catalog::run_all(&entries);
    for r in &results {
        ensure(r.passed(), format!("{}: {}", r.id, r.problems.join("; ")))?;
    }
    Ok(results)
}

fn rows(ring: &Ring, grid: &[&[&str]]) -> PolyMatrix {
    PolyMatrix::parse_rows(ring, grid).unwrap()
}

/// Printed matrices reproduced byte for byte.
fn reproduction() -> Check {
    let ids = [
        "onb-r3",
        "c2-idempotents",
        "c2-paraunitary",
        "s3-idempotents",
        "f5-set",
        "f7-set-a",
        "f7-set-b",
        "pseudo",
    ];
    let results = run_entries(&ids)?;
    // a few literal renderings, independent of the expectation parser
    let onb = match results[ids.iter().position(|&i| i == "onb-r3").unwrap()].outcome.as_ref().unwrap().get("S") {
        Some(Value::Set(s)) => s.clone(),
        _ => return Err("onb-r3 has no set S".into()),
    };
    ensure(
        onb.member(0).to_string() == "[(4/9), (2/9), (4/9)]\n[(2/9), (1/9), (2/9)]\n[(4/9), (2/9), (4/9)]",
        format!("P1 renders as {}", onb.member(0)),
    )?;
    let f5 = match results[ids.iter().position(|&i| i == "f5-set").unwrap()].outcome.as_ref().unwrap().get("S") {
        Some(Value::Set(s)) => s.clone(),
        _ => return Err("f5-set has no set S".into()),
    };
    ensure(f5.member(1).to_string() == "[4, 3, 2]\n[3, 1, 4]\n[2, 4, 1]", format!("F5 P2 renders as {}", f5.member(1)))?;
    Ok(format!("{} catalog entries byte-exact", results.len()))
}

/// Every matrix and set produced by the catalog verifies exactly.
fn verification_suite() -> Check {
    let entries = catalog::entries().map_err(|e| e.to_string())?;
    let results = catalog::run_all(&entries);
    let (mut matrices, mut sets) = (0, 0);
    for (entry, r) in entries.iter().zip(&results) {
        ensure(r.passed(), format!("{}: {}", r.id, r.problems.join("; ")))?;
        let outcome = r.outcome.as_ref().unwrap();
        for step in &entry.pipeline.steps {
            let what = format!("{} {}", entry.id, step.bind);
            match outcome.get(&step.bind) {
                // scalar combinations and single members are not claimed to be paraunitary
                Some(Value::Matrix(m)) if !matches!(step.op.as_str(), "combine" | "member" | "factor_rank1") => {
                    let ok = m.is_paraunitary().map_err(|e| e.to_string())?.passed
                        || m.is_pseudo_paraunitary().map_err(|e| e.to_string())?.is_some();
                    ensure(ok, format!("{what} is neither paraunitary nor pseudo-paraunitary"))?;
                    matrices += 1;
                }
                Some(Value::Set(s)) => {
                    ensure(verify_set(s).map_err(|e| e.to_string())?.passed, format!("{what} fails verify_set"))?;
                    sets += 1;
                }
                _ => {}
            }
        }
    }
    let pseudo = catalog::entry("pseudo").map_err(|e| e.to_string())?.run();
    let cleared = match pseudo.outcome.as_ref().and_then(|o| o.get("C")) {
        Some(Value::Cleared(c)) => c.clone(),
        _ => return Err("pseudo has no cleared matrix".into()),
    };
    let q = Ring::rational();
    let gram = parse_poly("x^2*y^2", &q, None).unwrap();
    let target = PolyMatrix::identity(&q, cleared.matrix.vars(), 2).scale_poly(&gram).unwrap();
    ensure(cleared.matrix.try_mul(&cleared.cleared_adjoint).unwrap() == target, "Q Q^* != x^2 y^2 I")?;
    Ok(format!("{} entries, {matrices} matrices, {sets} sets; Q Q^* = x^2 y^2 I", entries.len()))
}

fn builtin_sets(rng: &mut random::SeededRng) -> Vec<(String, IdempotentSet)> {
    let q = Ring::rational();
    let mut out = Vec::new();
    for k in 1..=9usize {
        let ring = if k <= 2 { q.clone() } else { Ring::cyclotomic(k as u32).unwrap() };
        out.push((format!("C{k}"), group_set(&GroupTable::cyclic(k).unwrap(), &ring).unwrap()));
        out.push((format!("diag{k}"), diagonal_set(&q, k).unwrap()));
        let basis = random::orthogonal(&q, k, rng).unwrap();
        out.push((format!("basis{k}"), paraunitary::idempotents::from_orthonormal_basis(&basis, None).unwrap()));
    }
    for r in 2..=3 {
        out.push((format!("C2^{r}"), group_set(&GroupTable::elementary_abelian_2(r).unwrap(), &q).unwrap()));
    }
    for (order, conductor) in [(4, 2), (6, 3), (8, 4)] {
        let ring = if conductor == 2 { q.clone() } else { Ring::cyclotomic(conductor).unwrap() };
        out.push((format!("D{order}"), group_set(&GroupTable::dihedral(order).unwrap(), &ring).unwrap()));
    }
    out.push(("S3".into(), group_set(&GroupTable::symmetric_3().unwrap(), &q).unwrap()));
    out
}

/// Rank from trace and the determinant of a combination, against the cofactor oracle.
fn rank_and_determinant() -> Check {
    let q = Ring::rational();
    let s3 = group_set(&GroupTable::symmetric_3().unwrap(), &q).unwrap();
    ensure(s3.ranks().unwrap() == vec![1, 1, 4], "S3 ranks are not (1, 1, 4)")?;
    let coeffs: Vec<Scalar> = [2, 3, 5].iter().map(|&c| q.from_int(c)).collect();
    let a = s3
        .members()
        .iter()
        .zip(&coeffs)
        .map(|(m, c)| m.scale(c).unwrap())
        .reduce(|x, y| x.try_add(&y).unwrap())
        .unwrap();
    let d = a.determinant().unwrap();
    ensure(d == parse_poly("3750", &q, None).unwrap(), format!("det = {d}"))?;
    ensure(props::product_of_powers(&s3, &coeffs) == q.from_int(2 * 3 * 5i64.pow(4)), "2 * 3 * 5^4 mismatch")?;
    ensure(cofactor_det(&a) == d, "cofactor oracle disagrees on the S3 combination")?;

    let mut rng = random::rng(seed());
    let sets = builtin_sets(&mut rng);
    for trial in 0..50 {
        let (name, set) = sets.choose(&mut rng).unwrap();
        let ring = set.ring();
        let coeffs: Vec<Scalar> = (0..set.len()).map(|_| random::nonzero(ring, &mut rng).unwrap()).collect();
        let mut a = PolyMatrix::zeros(ring, &VarSet::empty(), set.n(), set.n());
        for (c, m) in coeffs.iter().zip(set.members()) {
            a = a.try_add(&m.scale(c).unwrap()).unwrap();
        }
        let expected = LaurentPoly::constant(props::product_of_powers(set, &coeffs), &VarSet::empty());
        let d = a.determinant().unwrap();
        ensure(d == expected, format!("trial {trial} on {name}: det {d} != {expected}"))?;
        ensure(cofactor_det(&a) == d, format!("trial {trial} on {name}: cofactor oracle disagrees"))?;
    }
    Ok(format!("S3 ranks (1, 1, 4), det 3750; 50 random pairs over {} built-in sets", sets.len()))
}

/// Hadamard specializations.
fn hadamard() -> Check {
    let results = run_entries(&["butson-c3", "block-c2", "block-complex-q"])?;
    let report = match results[0].outcome.as_ref().unwrap().get("H") {
        Some(Value::Hadamard(h)) => h.clone(),
        _ => return Err("butson-c3 has no Hadamard report".into()),
    };
    let ring = report.hadamard.ring().clone();
    let nine = PolyMatrix::identity(&ring, report.hadamard.vars(), 9).scale(&ring.from_int(9)).unwrap();
    ensure(report.hadamard.gram().unwrap() == nine, "H' H'^* != 9 I")?;
    ensure(report.butson == Some(3), format!("Butson order {:?}", report.butson))?;
    Ok("H(3, 9) with H' H'^* = 9 I; real and complex 4x4 reproduced".into())
}

/// Tangles over F7.
fn tangles_over_f7() -> Check {
    let f7 = Ring::prime_field(7).unwrap();
    ensure(f7.sqrt2().unwrap() == f7.from_int(3), "sqrt 2 is not 3 in F7")?;
    run_entries(&["tangle-f7"])?;
    let variants = TangleVariant::all();
    ensure(variants.len() == 2 * 3 * 2 * 2, "variant count")?;
    let vars_a = VarSet::new(["x", "y"]).unwrap();
    let vars_b = VarSet::new(["z"]).unwrap();
    let mut count = 0;
    for s in 0..20u64 {
        let mut rng = random::rng(seed().wrapping_add(s));
        let n = rng.gen_range(1..=4);
        let a = random::paraunitary(&f7, n, &vars_a, &mut rng).unwrap();
        let b = random::paraunitary(&f7, n, &vars_b, &mut rng).unwrap();
        for v in &variants {
            let w = tangle(&a, &b, *v).map_err(|e| format!("seed {s} {v}: {e}"))?;
            ensure(w.is_paraunitary().unwrap().passed, format!("seed {s} {v}: not paraunitary"))?;
            count += 1;
        }
    }
    Ok(format!("sqrt 2 = 3; catalog tangle verified; {count} random variant tangles paraunitary"))
}

/// The shared property bodies, 200 seeds each, run concurrently.
fn property_suites() -> Check {
    let base = seed();
    let failures: Vec<String> = std::thread::scope(|scope| {
        let handles: Vec<_> = props::ALL
            .iter()
            .map(|(name, property)| {
                scope.spawn(move || {
                    (0..200u64).find_map(|i| {
                        let s = base.wrapping_mul(0x9e37_79b9).wrapping_add(i);
                        property(s).err().map(|e| format!("{name} at seed {s}: {e}"))
                    })
                })
            })
            .collect();
        handles.into_iter().filter_map(|h| h.join().unwrap_or(Some("panicked".into()))).collect()
    });
    ensure(failures.is_empty(), failures.join("; "))?;
    Ok(format!("{} properties x 200 cases", props::ALL.len()))
}

/// Inputs that must be rejected.
fn negative_cases() -> Check {
    let q = Ring::rational();
    let c2 = group_set(&GroupTable::cyclic(2).unwrap(), &q).unwrap();
    // a non-unit coefficient breaks paraunitarity
    let non_unit = c2
        .member(0)
        .scale(&q.from_int(2))
        .unwrap()
        .try_add(&c2.member(1).scale_poly(&parse_poly("z", &q, None).unwrap()).unwrap())
        .unwrap();
    ensure(!non_unit.is_paraunitary().unwrap().passed, "2 E0 + z E1 passed as paraunitary")?;
    let half = c2
        .member(0)
        .try_add(&c2.member(1).scale_poly(&parse_poly("(1+z)/2", &q, None).unwrap()).unwrap())
        .unwrap();
    ensure(!half.is_paraunitary().unwrap().passed, "E0 + (1+z)/2 E1 passed as paraunitary")?;
    let two = MonomialAssignment::parse(&q, &["2", "z"]).and_then(|w| monomial_sum(&c2, &w));
    ensure(two == Err(Error::NotUnitModulus { index: 0 }), format!("weight 2 gave {two:?}"))?;
    let sum = MonomialAssignment::parse(&q, &["1", "1+z"]);
    ensure(sum == Err(Error::NotMonomial { index: 1 }), format!("weight 1+z gave {sum:?}"))?;

    let f3 = Ring::prime_field(3).unwrap();
    let p = rows(&f3, &[&["2", "1"], &["1", "2"]]);
    ensure(
        matches!(factor_rank1(&p), Err(Error::NoSquareRoot { .. })),
        format!("F3 factorization gave {:?}", factor_rank1(&p)),
    )?;

    let x = rows(&q, &[&["x"]]);
    let y = rows(&q, &[&["y"]]);
    let t = tangle(&x, &y, TangleVariant::BASE);
    ensure(matches!(t, Err(Error::NoSquareRoot { .. })), format!("tangle over Q gave {t:?}"))?;

    let f5 = Ring::prime_field(5).unwrap();
    let isotropic = from_orthogonal_basis(&rows(&f5, &[&["1", "2"], &["2", "-1"]]), None);
    ensure(
        isotropic.as_ref().err() == Some(&Error::IsotropicVector { index: 0 }),
        format!("isotropic basis gave {isotropic:?}"),
    )?;
    Ok("non-unit coefficients, F3 factorization, tangle over Q, isotropic F5 basis all rejected".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("reproduction of printed matrices", Duration::from_secs(1), reproduction),
        ("verification suite", Duration::from_secs(5), verification_suite),
        ("rank and determinant theorems", Duration::from_secs(30), rank_and_determinant),
        ("Hadamard specializations", Duration::from_secs(2), hadamard),
        ("tangles over F7", Duration::from_secs(30), tangles_over_f7),
        ("property suites", Duration::from_secs(120), property_suites),
        ("negative cases", Duration::from_secs(1), negative_cases),
    ];
    println!("acceptance (seed {})", seed());
    let mut failed = 0;
    for (i, (title, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {budget:?} budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {status} {title} [{:.2?} / {budget:?}] {detail}", i + 1, elapsed);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
