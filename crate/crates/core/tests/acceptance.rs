//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use setasp::gz::{self, GzProblem};
use setasp::ht::{check_equilibrium, find_stable_models};
use setasp::interp::{Assignment, HtInterpretation};
use setasp::props::{self, SuiteReport};
use setasp::syntax::{parse_program, print_term, Term, Theory};
use setasp::{Atom, AtomSet, DomainBounds, Value};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn load(name: &str) -> Theory {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("programs")
        .join(format!("{name}.lp"));
    parse_program(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn ints(xs: &[i64]) -> Value {
    Value::set(xs.iter().map(|&n| Value::Int(n))).unwrap()
}

fn atom(p: &str, arg: Value) -> Atom {
    Atom::new(p, vec![arg])
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn suite(r: &SuiteReport) -> Result<(), String> {
    ensure(r.ok(), || {
        format!("{}: {} violations, first: {}", r.name, r.violations.len(), r.violations[0])
    })
}

fn both(name: &str, bounds: &DomainBounds) -> Result<(Vec<AtomSet>, GzProblem), String> {
    let th = load(name);
    ensure(gz::is_gz_theory(&th).ok, || format!("{name} rejected by the fragment check"))?;
    let eq = find_stable_models(&th, bounds).map_err(|e| e.to_string())?.atom_sets();
    let problem = GzProblem::new(&th, bounds).map_err(|e| e.to_string())?;
    let g = problem.stable_models();
    ensure(eq == g, || format!("{name}: equilibrium {eq:?} vs gz {g:?}"))?;
    Ok((eq, problem))
}

fn first_example() -> Outcome {
    let th = load("example1");
    let bounds = DomainBounds::with_ints(1, 2);
    let report = find_stable_models(&th, &bounds).map_err(|e| e.to_string())?;
    ensure(report.models.len() == 1, || format!("{} models", report.models.len()))?;
    let m = &report.models[0];
    let expected: AtomSet = [
        atom("q", Value::Int(1)),
        atom("p", ints(&[1])),
        atom("r", Value::Int(1)),
        atom("r", Value::Int(2)),
    ]
    .into();
    ensure(m.atoms == expected, || format!("model {:?}", m.atoms))?;
    let sets: BTreeSet<(String, Value)> = m
        .interpretation
        .sigma_t
        .sets
        .iter()
        .map(|(s, v)| (print_term(&Term::IntSet(Box::new(s.clone()))), v.clone()))
        .collect();
    for (label, v) in [("{X : q(X)}", ints(&[1])), ("{X : r(X)}", ints(&[1, 2]))] {
        ensure(sets.contains(&(label.to_string(), v.clone())), || {
            format!("σ({label}) should be {v}, have {sets:?}")
        })?;
    }

    // The larger candidate with q(2) and p({1,2}) is a model but not minimal.
    let mut larger = expected.clone();
    larger.remove(&atom("p", ints(&[1])));
    larger.insert(atom("q", Value::Int(2)));
    larger.insert(atom("p", ints(&[1, 2])));
    let candidate = HtInterpretation::total(Assignment::default(), larger.clone());
    let check = check_equilibrium(&th, &bounds, &candidate).map_err(|e| e.to_string())?;
    ensure(check.is_model, || "larger candidate is not a model".into())?;
    let cm = check.countermodel.ok_or("larger candidate has no countermodel")?;
    let mut h = larger;
    h.remove(&atom("q", Value::Int(2)));
    h.remove(&atom("p", ints(&[1, 2])));
    ensure(cm.atoms_h == h, || format!("countermodel H = {:?}", cm.atoms_h))?;
    Ok("one model, larger candidate refuted".into())
}

fn p2() -> Outcome {
    let (models, _) = both("p2", &props::gz_bounds())?;
    ensure(models.is_empty(), || format!("{models:?}"))?;
    Ok("no models in either semantics".into())
}

fn p3() -> Outcome {
    let (models, _) = both("p3", &DomainBounds::with_ints(0, 6))?;
    let expected = AtomSet::from([
        atom("p", Value::Int(2)),
        atom("p", Value::Int(3)),
        atom("q", Value::Int(5)),
    ]);
    ensure(models == vec![expected], || format!("{models:?}"))?;
    Ok("{p(2), p(3), q(5)}".into())
}

fn p4() -> Outcome {
    let (models, problem) = both("p4", &props::gz_bounds())?;
    let expected = AtomSet::from([atom("p", Value::constant("a")), atom("p", Value::constant("b"))]);
    ensure(models == vec![expected.clone()], || format!("{models:?}"))?;
    let lines: BTreeSet<String> = gz::render_reduct(&problem.formulas, &expected).into_iter().collect();
    let want: BTreeSet<String> = ["p(a) :- p(b).", "p(b)."].map(String::from).into();
    ensure(lines == want, || format!("reduct {lines:?}"))?;
    Ok("{p(a), p(b)} with reduct {p(a) :- p(b). p(b).}".into())
}

fn n0() -> Outcome {
    let (models, _) = both("n0", &props::gz_bounds())?;
    ensure(models.is_empty(), || format!("{models:?}"))?;
    Ok("no models in either semantics".into())
}

fn cross_check() -> Outcome {
    let report = props::random_cross_check(200, 7).map_err(|e| e.to_string())?;
    ensure(report.disagreements.is_empty(), || {
        format!("{} disagreements, first:\n{}", report.disagreements.len(), report.disagreements[0].program)
    })?;
    Ok(format!("{}/{} agree", report.agreements, report.trials))
}

fn existential() -> Outcome {
    let mut programs = vec![("p2".to_string(), load("p2")), ("p4".to_string(), load("p4"))];
    programs.extend(props::random_gz_theories(50, 5).map_err(|e| e.to_string())?);
    let r = props::existential_suite(&programs, &props::gz_bounds()).map_err(|e| e.to_string())?;
    suite(&r)?;
    Ok(format!("{} rewrites", r.checked))
}

fn worlds() -> Outcome {
    let reports = props::world_suite(2000, 13);
    for r in &reports {
        suite(r)?;
    }
    Ok(format!("{} pairs", reports[0].checked))
}

fn definitional() -> Outcome {
    let r = props::definitional_suite();
    suite(&r)?;
    Ok(format!("{} checks", r.checked))
}

fn conservativity() -> Outcome {
    let r = props::conservativity_suite(50, 17).map_err(|e| e.to_string())?;
    suite(&r)?;
    Ok(format!("{} programs", r.checked))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: Vec<Criterion> = vec![
        ("1 first example", first_example, Some(secs(5))),
        ("2 strict count program", p2, Some(secs(1))),
        ("3 sum program", p3, Some(secs(2))),
        ("4 not-equal program and reduct", p4, Some(secs(1))),
        ("5 empty set atom bound", n0, Some(secs(1))),
        ("6 random cross-check", cross_check, Some(secs(60))),
        ("7 existential introduction", existential, None),
        ("8 persistence and negation", worlds, None),
        ("9 aggregate definitions", definitional, None),
        ("10 conservativity", conservativity, None),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} ({took:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
