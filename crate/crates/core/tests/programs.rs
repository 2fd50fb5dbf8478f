//! The small example programs, checked through the library.

use setasp::gz::{cl_satisfies, cross_check, gz_ground, gz_stable_models, is_gz_theory, reduct, GzFormula};
use setasp::ht::{check_equilibrium, find_stable_models};
use setasp::interp::{Assignment, HtInterpretation};
use setasp::syntax::{parse_program, print_statement, Theory};
use setasp::transform::{eligible_positions, existential_intro_transform, AtomSelector};
use setasp::{domain::build_active_domain, Atom, AtomSet, DomainBounds, Value};

fn load(name: &str) -> Theory {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("programs")
        .join(format!("{name}.lp"));
    parse_program(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn int_atom(p: &str, n: i64) -> Atom {
    Atom::new(p, vec![Value::Int(n)])
}

fn con_atom(p: &str, c: &str) -> Atom {
    Atom::new(p, vec![Value::constant(c)])
}

fn int_set(xs: &[i64]) -> Value {
    Value::set(xs.iter().map(|&n| Value::Int(n))).unwrap()
}

#[test]
fn fragment_membership() {
    assert!(is_gz_theory(&load("p2")).ok);
    assert!(is_gz_theory(&load("p3")).ok);
    assert!(is_gz_theory(&load("p4")).ok);
    assert!(!is_gz_theory(&load("example1")).ok);
}

#[test]
fn first_example_has_one_model_and_rejects_the_larger_one() {
    let th = load("example1");
    let bounds = DomainBounds::with_ints(1, 2);
    let report = find_stable_models(&th, &bounds).unwrap();
    assert_eq!(report.models.len(), 1);
    let m = &report.models[0];
    let expected: AtomSet = [
        int_atom("q", 1),
        Atom::new("p", vec![int_set(&[1])]),
        int_atom("r", 1),
        int_atom("r", 2),
    ]
    .into();
    assert_eq!(m.atoms, expected);
    let sets: Vec<(String, Value)> = m
        .interpretation
        .sigma_t
        .sets
        .iter()
        .map(|(s, v)| {
            (setasp::syntax::print_term(&setasp::syntax::Term::IntSet(Box::new(s.clone()))), v.clone())
        })
        .collect();
    assert!(sets.contains(&("{X : r(X)}".into(), int_set(&[1, 2]))));
    assert!(sets.contains(&("{X : q(X)}".into(), int_set(&[1]))));

    let mut larger = expected.clone();
    larger.remove(&Atom::new("p", vec![int_set(&[1])]));
    larger.insert(int_atom("q", 2));
    larger.insert(Atom::new("p", vec![int_set(&[1, 2])]));
    let candidate = HtInterpretation::total(Assignment::default(), larger.clone());
    let check = check_equilibrium(&th, &bounds, &candidate).unwrap();
    assert!(check.is_model);
    assert!(!check.holds());
    let mut h = larger;
    h.remove(&int_atom("q", 2));
    h.remove(&Atom::new("p", vec![int_set(&[1, 2])]));
    assert_eq!(check.countermodel.unwrap().atoms_h, h);
}

#[test]
fn classical_satisfaction_of_set_atoms() {
    let th = parse_program("c1 :- count{X : p(X)} >= 1. c0 :- count{X : p(X)} >= 0. p(b) :- d.").unwrap();
    let bounds = DomainBounds::with_ints(0, 3);
    let d = build_active_domain(&th, &bounds).unwrap();
    let g = gz_ground(&th, &d, 1000).unwrap();
    let body = |i: usize| match &g[i] {
        GzFormula::Implies(b, _) => (**b).clone(),
        other => panic!("{other}"),
    };
    let pb: AtomSet = [con_atom("p", "b")].into();
    let empty = AtomSet::new();
    assert!(cl_satisfies(&pb, &body(0)));
    assert!(!cl_satisfies(&empty, &body(0)));
    assert!(cl_satisfies(&empty, &body(1)));
    // An unsatisfied formula reduces to falsity.
    assert_eq!(reduct(&body(0), &empty), GzFormula::Bot);
}

#[test]
fn both_engines_on_small_programs() {
    let bounds = DomainBounds::with_ints(0, 3);
    for (name, expected) in [
        ("p2", vec![]),
        ("p4", vec![AtomSet::from([con_atom("p", "a"), con_atom("p", "b")])]),
        ("n0", vec![]),
    ] {
        let result = cross_check(&load(name), &bounds).unwrap();
        assert!(result.agree(), "{name}");
        assert_eq!(result.gz, expected, "{name}");
    }
    let p3 = gz_stable_models(&load("p3"), &DomainBounds::with_ints(0, 6)).unwrap();
    assert_eq!(
        p3,
        vec![AtomSet::from([int_atom("p", 2), int_atom("p", 3), int_atom("q", 5)])]
    );
}

#[test]
fn sum_out_of_range_is_undefined() {
    // With integers only up to 4 the sum 5 does not exist, so q gets nothing.
    let p3 = find_stable_models(&load("p3"), &DomainBounds::with_ints(0, 4)).unwrap();
    assert_eq!(p3.atom_sets(), vec![AtomSet::from([int_atom("p", 2), int_atom("p", 3)])]);
}

#[test]
fn existential_rewrites_of_small_programs() {
    let bounds = DomainBounds::with_ints(0, 3);
    for name in ["p2", "p4", "n0"] {
        let th = load(name);
        let expected = find_stable_models(&th, &bounds).unwrap().atom_sets();
        let positions = eligible_positions(&th);
        assert!(!positions.is_empty());
        for sel in positions {
            let rewritten = existential_intro_transform(&th, sel).unwrap();
            let got = find_stable_models(&rewritten, &bounds).unwrap().atom_sets();
            assert_eq!(got, expected, "{name} at {sel}");
        }
    }
    let fact = parse_program("p(b).").unwrap();
    let sel = AtomSelector { formula: 0, atom: 0, arg: 0 };
    let out = existential_intro_transform(&fact, sel).unwrap();
    assert_eq!(print_statement(&out.formulas[0]), "#exists V1 (V1 = b, p(V1)).");
}

#[test]
fn recursive_definitions_match_the_builtins() {
    let th = load("count_rec");
    let report = find_stable_models(&th, &DomainBounds::with_ints(0, 3)).unwrap();
    assert_eq!(report.models.len(), 1);
    let facts = &report.models[0].interpretation.sigma_t.facts;
    assert_eq!(facts.len(), 8);
    for ((_, args), v) in facts {
        let expected = setasp::builtins::aggregate_eval(setasp::builtins::Aggregate::Count, &args[0]);
        assert_eq!(Some(v.clone()), expected);
    }
}
