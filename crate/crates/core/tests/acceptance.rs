//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use lvrough_core::approx::{Builtin, Direction, Operator};
use lvrough_core::axiom::{check_axiom, reconstruct_relation, AxiomId, Mode};
use lvrough_core::fixtures::{self, EXAMPLES, INSTANCES};
use lvrough_core::lattice::{verify_laws, FiniteResiduatedLattice, LawStatus};
use lvrough_core::oracle::{
    classical_degeneracy, verify_completeness_exhaustive, verify_completeness_sampled,
    verify_soundness, MatrixRow,
};
use lvrough_core::product::{inner_product, lower_inverse, outer_product, upper_inverse};
use lvrough_core::universe::{enumerate_powerset, verify_subset_laws, Universe};
use lvrough_core::{Label, LValuedRelation, LSubset};

type Check = Result<String, String>;

fn example_parts(name: &str) -> (Arc<Universe>, Option<LSubset>, Option<LSubset>, Option<LValuedRelation>) {
    let ex = fixtures::example(name).expect("example fixture");
    let lat = ex.lattice.build().unwrap();
    let u = ex.universe.build(&lat).unwrap();
    let m = ex.m.map(|s| s.build(&u).unwrap());
    let q = ex.q.map(|s| s.build(&u).unwrap());
    let r = ex.relation.map(|r| r.build(&u).unwrap());
    (u, m, q, r)
}

fn label(u: &Universe, e: lvrough_core::Elem) -> Label {
    *u.lattice().label(e)
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    match out {
        Ok(msg) if took > limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
        Ok(msg) => Ok(format!("{msg}; {took:.2?}")),
        Err(e) => Err(format!("{e}; {took:.2?}")),
    }
}

fn criterion_1() -> Check {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (name, expected) in [("inner-example-godel", Label::new(1, 2)), ("inner-example-luk", Label::new(3, 10))] {
        let r = timed(Duration::from_secs(1), || {
            let (u, m, q, _) = example_parts(name);
            let (m, q) = (m.unwrap(), q.unwrap());
            let v = label(&u, inner_product(&m, &q).unwrap());
            let id = Operator::builtin(&u, Builtin::Identity, Direction::Upper).unwrap();
            let inv = upper_inverse(&id).unwrap().apply(&q).unwrap();
            if v != expected {
                return Err(format!("{name}: I(M,Q) = {v}, expected {expected}"));
            }
            if inv != q {
                return Err(format!("{name}: H^-1(Q) differs from Q"));
            }
            Ok(format!("{name}: I(M,Q) = {v}, H^-1(Q) = Q"))
        });
        match r {
            Ok(s) => notes.push(s),
            Err(e) => failures.push(e),
        }
    }
    let r = timed(Duration::from_secs(1), || {
        let (u, m, q, _) = example_parts("outer-example");
        let (m, q) = (m.unwrap(), q.unwrap());
        let v = label(&u, outer_product(&m, &q).unwrap());
        let id = Operator::builtin(&u, Builtin::Identity, Direction::Lower).unwrap();
        let inv = lower_inverse(&id).unwrap().apply(&q).unwrap();
        let fifth = Label::new(1, 5);
        if v != fifth {
            return Err(format!("outer-example: O(M,Q) = {v}, expected 0.2"));
        }
        if !inv.values().iter().all(|&e| label(&u, e) == fifth) {
            return Err("outer-example: L~(Q) is not constant 0.2".into());
        }
        Ok(format!("outer-example: O(M,Q) = {v}, L~(Q) = constant 0.2"))
    });
    match r {
        Ok(s) => notes.push(s),
        Err(e) => failures.push(e),
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_2() -> Check {
    timed(Duration::from_secs(1), || {
        let (_, _, _, e) = example_parts("euclidean-example");
        let (_, _, _, m) = example_parts("mediate-example");
        let (e, m) = (e.unwrap(), m.unwrap());
        let verdicts = [
            ("euclidean-example is_euclidean", e.is_euclidean()),
            ("euclidean-example is_symmetric", e.is_symmetric()),
            ("mediate-example is_mediate", m.is_mediate()),
        ];
        let text = verdicts
            .iter()
            .map(|(n, v)| format!("{n} = {v}"))
            .collect::<Vec<_>>()
            .join(", ");
        if verdicts.iter().all(|(_, v)| *v) {
            Ok(text)
        } else {
            Err(text)
        }
    })
}

/// Universes of every shipped fixture, instances first.
fn fixture_universes() -> Vec<(String, Arc<Universe>)> {
    let mut out = Vec::new();
    for name in INSTANCES {
        let inst = fixtures::instance(name).unwrap().build().unwrap();
        out.push((name.to_string(), inst.universe));
    }
    for name in EXAMPLES {
        let (u, ..) = example_parts(name);
        if !out.iter().any(|(_, v)| v.lattice().labels() == u.lattice().labels() && v.points() == u.points() && v.membership_values() == u.membership_values()) {
            out.push((name.to_string(), u));
        }
    }
    out
}

fn criterion_3() -> Check {
    let mut failures = Vec::new();
    let mut count = 0;
    for (name, u) in fixture_universes() {
        let r = timed(Duration::from_secs(10), || {
            let lat = u.lattice();
            let n = u.len();
            let diag = |a: usize, b: usize| if a == b { u.membership(a) } else { lat.bot() };
            let full = |a: usize, b: usize| lat.meet(u.membership(a), u.membership(b));
            let mut cases: Vec<(Builtin, Direction, &str, &dyn Fn(usize, usize) -> lvrough_core::Elem)> = vec![
                (Builtin::Identity, Direction::Upper, "HRTS", &diag),
                (Builtin::H1Largest, Direction::Upper, "HRTS", &full),
            ];
            let lower = lat.caps().mv_algebra && u.is_constant();
            if lower {
                cases.push((Builtin::Identity, Direction::Lower, "LRTS", &diag));
                cases.push((Builtin::L1Least, Direction::Lower, "LRTS", &full));
            }
            for (b, dir, axiom, expected) in cases {
                let op = Operator::builtin(&u, b, dir).unwrap();
                let rep = check_axiom(&op, AxiomId::parse(axiom).unwrap(), Mode::Exhaustive).unwrap();
                if !rep.holds || rep.checked_count != rep.space_size {
                    return Err(format!("{name}: {} fails {axiom}", b.name()));
                }
                let r = reconstruct_relation(&op).unwrap();
                for a in 0..n {
                    for c in 0..n {
                        if r.get(a, c) != expected(a, c) {
                            return Err(format!("{name}: {} reconstructs wrongly at ({a},{c})", b.name()));
                        }
                    }
                }
            }
            Ok(format!("{name}{}", if lower { " (upper+lower)" } else { " (upper)" }))
        });
        count += 1;
        if let Err(e) = r {
            failures.push(e);
        }
    }
    if failures.is_empty() {
        Ok(format!("{count} fixtures"))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_4() -> Check {
    timed(Duration::from_secs(30), || {
        let mut checked = 0usize;
        let lats = [
            ("lukasiewicz-11", FiniteResiduatedLattice::lukasiewicz(10).unwrap()),
            ("goedel-11", FiniteResiduatedLattice::goedel(10).unwrap()),
            ("boolean", FiniteResiduatedLattice::boolean()),
        ];
        for (name, lat) in &lats {
            let rep = verify_laws(lat);
            if !rep.all_pass() {
                let bad = rep
                    .laws
                    .iter()
                    .find(|l| matches!(l.status, LawStatus::Fail { .. }))
                    .map(|l| l.name.clone());
                return Err(format!("{name}: law {bad:?} fails"));
            }
            checked += rep.laws.len();
        }
        let mut universes = 0;
        for (name, u) in fixture_universes() {
            if u.powerset_size() > 200 {
                continue;
            }
            let ps = enumerate_powerset(&u).unwrap();
            let rep = verify_subset_laws(&ps);
            if !rep.all_pass() {
                return Err(format!("{name}: subset laws fail"));
            }
            if rep.get("decompose.join").is_none() || rep.get("decompose.meet").is_none() {
                return Err(format!("{name}: decomposition laws missing"));
            }
            checked += rep.laws.len();
            universes += 1;
        }
        Ok(format!("{checked} law entries, 3 lattices, {universes} fixture universes"))
    })
}

fn matrix_summary(rows: &[MatrixRow]) -> Check {
    let refuted: Vec<&MatrixRow> = rows.iter().filter(|r| r.is_refuted()).collect();
    let cases: u64 = rows.iter().map(|r| r.cases_checked).sum();
    if refuted.is_empty() {
        Ok(format!("{} rows, {cases} cases, 0 refutations", rows.len()))
    } else {
        Err(format!(
            "{} refutations, first: {}",
            refuted.len(),
            serde_json::to_string(refuted[0]).unwrap()
        ))
    }
}

fn criterion_5() -> Check {
    timed(Duration::from_secs(300), || {
        let mut rows = Vec::new();
        for name in ["boolean2x", "luk2x2", "goedel2x2"] {
            let inst = fixtures::instance(name).unwrap().build().unwrap();
            let r = verify_soundness(&inst).map_err(|e| format!("{name}: {e}"))?;
            let live = r.iter().filter(|x| x.cases_checked > 0).count();
            let expected = if name == "goedel2x2" { 15 } else { 30 };
            if live != expected {
                return Err(format!("{name}: {live} theorems exercised, expected {expected}"));
            }
            rows.extend(r);
        }
        matrix_summary(&rows)
    })
}

fn criterion_6() -> Check {
    timed(Duration::from_secs(120), || {
        let mut rows = Vec::new();
        for (name, tables) in [("boolean2x", 256), ("luk2x1", 27)] {
            let inst = fixtures::instance(name).unwrap().build().unwrap();
            let r = verify_completeness_exhaustive(&inst).map_err(|e| format!("{name}: {e}"))?;
            if r.iter().any(|x| x.cases_checked != tables) {
                return Err(format!("{name}: expected {tables} tables per theorem"));
            }
            rows.extend(r);
        }
        matrix_summary(&rows)
    })
}

fn criterion_7() -> Check {
    timed(Duration::from_secs(600), || {
        let spec = fixtures::instance("luk2x2").unwrap();
        let trials = spec.budget.sample_trials;
        if trials < 100_000 {
            return Err(format!("only {trials} samples"));
        }
        let inst = spec.build().unwrap();
        let rows = verify_completeness_sampled(&inst, 42, trials).map_err(|e| e.to_string())?;
        let accepted: u64 = rows.iter().map(|r| r.accepted).sum();
        matrix_summary(&rows).map(|s| format!("{trials} samples, seed 42, {accepted} acceptances, {s}"))
    })
}

fn criterion_8() -> Check {
    timed(Duration::from_secs(60), || {
        let cases = [
            ("boolean |X|=3", FiniteResiduatedLattice::boolean(), 3),
            ("lukasiewicz-4 |X|=2", FiniteResiduatedLattice::lukasiewicz(4).unwrap(), 2),
            ("goedel-4 |X|=2", FiniteResiduatedLattice::goedel(4).unwrap(), 2),
        ];
        let mut total = 0;
        for (name, lat, n) in cases {
            let lat = Arc::new(lat);
            let points = ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect();
            let u = Universe::constant(lat.clone(), points, lat.top()).unwrap();
            let rep = classical_degeneracy(&u, 1_000_000).map_err(|e| e.to_string())?;
            if rep.mismatches() > 0 {
                let first = rep.checks.iter().find_map(|c| c.first_mismatch.clone());
                return Err(format!("{name}: {} mismatches, first {first:?}", rep.mismatches()));
            }
            total += rep.cases();
        }
        Ok(format!("{total} cases, 0 mismatches"))
    })
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("worked numerics", criterion_1),
        ("example relation tables", criterion_2),
        ("least and largest equivalent operators", criterion_3),
        ("algebraic law suites", criterion_4),
        ("soundness matrix", criterion_5),
        ("exhaustive completeness", criterion_6),
        ("sampled completeness", criterion_7),
        ("classical degeneracy", criterion_8),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {} PASS {title}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {title}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
