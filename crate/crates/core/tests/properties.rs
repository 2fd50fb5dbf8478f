use setasp::props;

#[test]
fn engines_agree_on_random_aggregate_programs() {
    let report = props::random_cross_check(60, 11).unwrap();
    assert!(
        report.disagreements.is_empty(),
        "{}",
        serde_json::to_string_pretty(&report.disagreements).unwrap()
    );
    assert_eq!(report.agreements, 60);
}

#[test]
fn worlds_behave_on_random_pairs() {
    for report in props::world_suite(1500, 5) {
        assert!(report.ok(), "{report}");
        assert_eq!(report.checked, 1500);
    }
}

#[test]
fn builtin_aggregates_match_their_definitions() {
    let report = props::definitional_suite();
    assert!(report.ok(), "{report}");
    assert!(report.checked > 100);
}

#[test]
fn existential_rewrites_keep_stable_models() {
    let programs = props::random_gz_theories(15, 23).unwrap();
    let report = props::existential_suite(&programs, &props::gz_bounds()).unwrap();
    assert!(report.ok(), "{report}");
}

#[test]
fn functional_solver_agrees_without_comprehensions() {
    let report = props::conservativity_suite(30, 31).unwrap();
    assert!(report.ok(), "{report}");
}
