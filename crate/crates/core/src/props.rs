//! Property suites over generated instances, shared by the `check-props`
//! command and the test targets.

use std::fmt;

use serde::Serialize;

use crate::builtins::{aggregate_eval, Aggregate};
use crate::domain::{AtomSet, DomainBounds, Value};
use crate::error::Result;
use crate::functional::functional_stable_models;
use crate::generate::{self, GzParams};
use crate::gz::cross_check;
use crate::ht::{find_stable_models, satisfies};
use crate::interp::{HtInterpretation, World};
use crate::syntax::{parse_program, print_formula, Formula, Theory};
use crate::transform::{eligible_positions, existential_intro_transform};

/// Number of checks and the failures found, with a short witness each.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.violations.len() < 20 {
            self.violations.push(witness());
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} checks, {} violations",
            self.name,
            self.checked,
            self.violations.len()
        )?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Bounds used for random aggregate programs.
pub fn gz_bounds() -> DomainBounds {
    DomainBounds::with_ints(0, 3)
}

/// Bounds used for random programs without comprehensions.
pub fn zero_bounds() -> DomainBounds {
    DomainBounds::with_ints(0, 2)
}

/// One program on which the two engines differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Disagreement {
    pub program: String,
    pub gz_models: serde_json::Value,
    pub eq_models: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub trials: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
}

fn models_json(models: &[AtomSet]) -> serde_json::Value {
    serde_json::Value::Array(models.iter().map(crate::json::atoms).collect())
}

/// Runs both engines on `trials` seeded random aggregate programs.
pub fn random_cross_check(trials: usize, seed: u64) -> Result<CrossCheckReport> {
    let mut rng = generate::rng(seed);
    let mut report = CrossCheckReport {
        trials,
        agreements: 0,
        disagreements: Vec::new(),
    };
    for _ in 0..trials {
        let program = generate::gz_program(&mut rng, &GzParams::default());
        let theory = parse_program(&program)?;
        let result = cross_check(&theory, &gz_bounds())?;
        if result.agree() {
            report.agreements += 1;
        } else {
            report.disagreements.push(Disagreement {
                program,
                gz_models: models_json(&result.gz),
                eq_models: models_json(&result.equilibrium),
            });
        }
    }
    Ok(report)
}

/// Persistence, the negation clause and the collapse of the two worlds on
/// total interpretations, over `n` random (interpretation, formula) pairs.
pub fn world_suite(n: usize, seed: u64) -> Vec<SuiteReport> {
    let domain = generate::pair_domain();
    let mut rng = generate::rng(seed);
    let mut persistence = SuiteReport::new("persistence");
    let mut negation = SuiteReport::new("negation");
    let mut collapse = SuiteReport::new("total collapse");
    for _ in 0..n {
        let (interp, f) = generate::interpretation_and_formula(&mut rng);
        let h = satisfies(&domain, &interp, World::Here, &f);
        let t = satisfies(&domain, &interp, World::There, &f);
        let witness = || format!("{} under {}", print_formula(&f), interp);
        persistence.check(!h || t, witness);
        let not_h = satisfies(&domain, &interp, World::Here, &Formula::not(f.clone()));
        negation.check(not_h == !t, witness);

        let total = HtInterpretation {
            sigma_h: interp.sigma_t.clone(),
            sigma_t: interp.sigma_t.clone(),
            atoms_h: interp.atoms_t.clone(),
            atoms_t: interp.atoms_t.clone(),
        };
        let th = satisfies(&domain, &total, World::Here, &f);
        let tt = satisfies(&domain, &total, World::There, &f);
        collapse.check(th == tt, witness);
    }
    vec![persistence, negation, collapse]
}

/// The builtin aggregates against their recursive definitions, on every set
/// of at most four integers from [0, 5].
pub fn definitional_suite() -> SuiteReport {
    let mut report = SuiteReport::new("aggregate definitions");
    let universe: Vec<i64> = (0..=5).collect();
    let eval = |agg: Aggregate, s: &[i64]| {
        aggregate_eval(agg, &Value::set(s.iter().map(|&n| Value::Int(n))).unwrap())
            .and_then(|v| v.as_int())
    };
    for mask in 0u32..(1 << universe.len()) {
        let s: Vec<i64> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &n)| n)
            .collect();
        if s.len() > 4 {
            continue;
        }
        let show = || format!("{s:?}");
        if s.is_empty() {
            report.check(eval(Aggregate::Count, &s) == Some(0), || "count({}) != 0".into());
            report.check(eval(Aggregate::Sum, &s) == Some(0), || "sum({}) != 0".into());
            report.check(eval(Aggregate::Max, &s).is_none(), || "max({}) defined".into());
            report.check(eval(Aggregate::Min, &s).is_none(), || "min({}) defined".into());
            continue;
        }
        for &y in &s {
            let rest: Vec<i64> = s.iter().copied().filter(|&x| x != y).collect();
            let count_rest = eval(Aggregate::Count, &rest);
            report.check(
                eval(Aggregate::Count, &s) == count_rest.map(|c| c + 1),
                || format!("count{} recursion via {y}", show()),
            );
            let sum_rest = eval(Aggregate::Sum, &rest);
            report.check(
                eval(Aggregate::Sum, &s) == sum_rest.map(|c| c + y),
                || format!("sum{} recursion via {y}", show()),
            );
        }
        // max(S) is the member with no larger member; min symmetrically.
        let maxima: Vec<i64> = s
            .iter()
            .copied()
            .filter(|&x| !s.iter().any(|&y| y > x))
            .collect();
        let minima: Vec<i64> = s
            .iter()
            .copied()
            .filter(|&x| !s.iter().any(|&y| y < x))
            .collect();
        report.check(
            maxima.len() == 1 && eval(Aggregate::Max, &s) == Some(maxima[0]),
            || format!("max{}", show()),
        );
        report.check(
            minima.len() == 1 && eval(Aggregate::Min, &s) == Some(minima[0]),
            || format!("min{}", show()),
        );
    }
    report
}

/// Rewrites every eligible position of each theory, one at a time, and
/// compares stable models with the original.
pub fn existential_suite(
    programs: &[(String, Theory)],
    bounds: &DomainBounds,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("existential introduction");
    for (name, theory) in programs {
        let expected = find_stable_models(theory, bounds)?.atom_sets();
        for sel in eligible_positions(theory) {
            let rewritten = existential_intro_transform(theory, sel)?;
            let got = find_stable_models(&rewritten, bounds)?.atom_sets();
            report.check(got == expected, || format!("{name} at {sel}"));
        }
    }
    Ok(report)
}

/// `n` seeded random aggregate programs, named by their index.
pub fn random_gz_theories(n: usize, seed: u64) -> Result<Vec<(String, Theory)>> {
    let mut rng = generate::rng(seed);
    (0..n)
        .map(|i| {
            let src = generate::gz_program(&mut rng, &GzParams::default());
            Ok((format!("random program {i}:\n{src}"), parse_program(&src)?))
        })
        .collect()
}

/// Compares the main solver with the functional solver on `n` random
/// programs without comprehensions.
pub fn conservativity_suite(n: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("conservativity");
    let mut rng = generate::rng(seed);
    let bounds = zero_bounds();
    for _ in 0..n {
        let src = generate::zero_program(&mut rng);
        let theory = parse_program(&src)?;
        let main: Vec<_> = find_stable_models(&theory, &bounds)?
            .models
            .into_iter()
            .map(|m| (m.interpretation.sigma_t.facts, m.atoms))
            .collect();
        let mut main = main;
        main.sort();
        let other = functional_stable_models(&theory, &bounds)?;
        report.check(main == other, || src.clone());
    }
    Ok(report)
}
