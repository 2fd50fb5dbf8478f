use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use setasp::domain::show_atoms;
use setasp::gz::{self, GzProblem};
use setasp::ht::{find_stable_models, StableModel};
use setasp::syntax::{parse_program, print_term, print_theory, Term, Theory};
use setasp::transform::{eligible_positions, existential_intro_transform, AtomSelector};
use setasp::{json as js, props, AtomSet, DomainBounds, Error};

#[derive(Parser)]
#[command(name = "setasp", version, about = "Stable models for programs with partial functions and set comprehensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the stable models of a program.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Equilibrium)]
        mode: Mode,
        /// Also print function and comprehension values.
        #[arg(long)]
        show_sigma: bool,
        /// Print the reduct of each gz model.
        #[arg(long)]
        show_reduct: bool,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the ground instantiation of a program.
    Ground {
        file: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Compare both semantics on a program, or on seeded random programs.
    CrossCheck {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: bool,
    },
    /// Introduce an existential variable for one atom argument.
    Transform {
        file: PathBuf,
        /// STATEMENT:ATOM:ARG, all zero-based; lists the positions if absent.
        #[arg(long)]
        position: Option<AtomSelector>,
    },
    /// Run the property suites over generated instances.
    CheckProps {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Equilibrium,
    Gz,
    Both,
}

#[derive(Args)]
struct BoundArgs {
    /// Smallest integer in the universe.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    min_int: i64,
    /// Largest integer in the universe.
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    max_int: i64,
    /// Nesting depth of constructor terms.
    #[arg(long, default_value_t = 2)]
    max_depth: u32,
    /// Nesting depth of sets.
    #[arg(long, default_value_t = 1)]
    max_set_rank: u32,
    /// Largest set built when enumerating sets.
    #[arg(long, default_value_t = 4)]
    max_set_card: usize,
    /// Largest tuple arity of set elements.
    #[arg(long, default_value_t = 2)]
    max_arity: usize,
    /// Range over the whole bounded universe, not the active domain.
    #[arg(long)]
    full_domain: bool,
}

impl BoundArgs {
    fn bounds(&self) -> Result<DomainBounds, Error> {
        let b = DomainBounds {
            max_depth: self.max_depth,
            int_lo: self.min_int,
            int_hi: self.max_int,
            max_set_rank: self.max_set_rank,
            max_set_card: self.max_set_card,
            max_arity: self.max_arity,
            full_domain: self.full_domain,
            ..Default::default()
        };
        b.validate()?;
        Ok(b)
    }
}

enum Failure {
    Input(String),
    Disagree,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Disagree) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Theory, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_program(&src).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Solve {
            file,
            mode,
            show_sigma,
            show_reduct,
            bounds,
            json,
        } => solve(&load(&file)?, mode, &bounds.bounds()?, show_sigma, show_reduct, json),
        Command::Ground { file, bounds } => {
            let theory = load(&file)?;
            let bounds = bounds.bounds()?;
            let domain = setasp::domain::build_active_domain(&theory, &bounds)?;
            let ground = setasp::ground::ground_theory(&theory, &domain, bounds.cap)?;
            Ok(setasp::ground::render(&ground))
        }
        Command::CrossCheck {
            file: Some(file),
            bounds,
            json,
            ..
        } => solve(&load(&file)?, Mode::Both, &bounds.bounds()?, false, false, json),
        Command::CrossCheck {
            file: None,
            trials,
            seed,
            ..
        } => {
            let report = props::random_cross_check(trials, seed)?;
            let mut out = serde_json::to_string_pretty(&report).expect("serializable");
            out.push('\n');
            if report.disagreements.is_empty() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Disagree)
            }
        }
        Command::Transform { file, position } => {
            let theory = load(&file)?;
            match position {
                Some(sel) => Ok(print_theory(&existential_intro_transform(&theory, sel)?)),
                None => {
                    let mut out = String::new();
                    for sel in eligible_positions(&theory) {
                        writeln!(out, "{sel}").unwrap();
                    }
                    Ok(out)
                }
            }
        }
        Command::CheckProps { trials, seed, json } => check_props(trials, seed, json),
    }
}

fn solve(
    theory: &Theory,
    mode: Mode,
    bounds: &DomainBounds,
    show_sigma: bool,
    show_reduct: bool,
    as_json: bool,
) -> Result<String, Failure> {
    if mode != Mode::Equilibrium {
        let check = gz::is_gz_theory(theory);
        if !check.ok {
            return Err(Failure::Input(format!(
                "gz mode needs a theory in the aggregate fragment: {}",
                check.diagnostic.unwrap_or_default()
            )));
        }
    }
    let eq = match mode {
        Mode::Gz => None,
        _ => Some(find_stable_models(theory, bounds)?.models),
    };
    let gz_problem = match mode {
        Mode::Equilibrium => None,
        _ => Some(GzProblem::new(theory, bounds)?),
    };
    let gz_models = gz_problem.as_ref().map(GzProblem::stable_models);

    let agree = match (&eq, &gz_models) {
        (Some(e), Some(g)) => {
            let e: Vec<AtomSet> = e.iter().map(|m| m.atoms.clone()).collect();
            Some(&e == g)
        }
        _ => None,
    };

    let out = if as_json {
        let mut obj = serde_json::Map::new();
        if let Some(models) = &eq {
            let list: Vec<_> = models
                .iter()
                .map(|m| {
                    let mut o = json!({ "atoms": js::atoms(&m.atoms) });
                    if show_sigma {
                        o["sigma"] = js::assignment(&m.interpretation.sigma_t);
                    }
                    o
                })
                .collect();
            obj.insert("equilibrium".into(), json!(list));
        }
        if let (Some(models), Some(p)) = (&gz_models, &gz_problem) {
            let list: Vec<_> = models
                .iter()
                .map(|t| {
                    let mut o = json!({ "atoms": js::atoms(t) });
                    if show_reduct {
                        o["reduct"] = json!(gz::render_reduct(&p.formulas, t));
                    }
                    o
                })
                .collect();
            obj.insert("gz".into(), json!(list));
        }
        if let Some(a) = agree {
            obj.insert("agree".into(), json!(a));
        }
        serde_json::to_string_pretty(&obj).expect("serializable") + "\n"
    } else {
        let mut out = String::new();
        let labelled = mode == Mode::Both;
        if let Some(models) = &eq {
            if labelled {
                out.push_str("% equilibrium\n");
            }
            for (i, m) in models.iter().enumerate() {
                writeln!(out, "Answer: {}", i + 1).unwrap();
                writeln!(out, "{}", show_atoms(&m.atoms)).unwrap();
                if show_sigma {
                    write_sigma(&mut out, m);
                }
            }
            writeln!(out, "Models: {}", models.len()).unwrap();
        }
        if let (Some(models), Some(p)) = (&gz_models, &gz_problem) {
            if labelled {
                out.push_str("% gz\n");
            }
            for (i, t) in models.iter().enumerate() {
                writeln!(out, "Answer: {}", i + 1).unwrap();
                writeln!(out, "{}", show_atoms(t)).unwrap();
                if show_reduct {
                    for line in gz::render_reduct(&p.formulas, t) {
                        writeln!(out, "  reduct: {line}").unwrap();
                    }
                }
            }
            writeln!(out, "Models: {}", models.len()).unwrap();
        }
        match agree {
            Some(true) => out.push_str("AGREE\n"),
            Some(false) => out.push_str("DISAGREE\n"),
            None => {}
        }
        out
    };
    if agree == Some(false) {
        print!("{out}");
        return Err(Failure::Disagree);
    }
    Ok(out)
}

fn write_sigma(out: &mut String, m: &StableModel) {
    let sigma = &m.interpretation.sigma_t;
    for ((f, args), v) in &sigma.facts {
        let call = if args.is_empty() {
            f.to_string()
        } else {
            let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
            format!("{f}({})", args.join(", "))
        };
        writeln!(out, "  σ({call}) = {v}").unwrap();
    }
    for (s, v) in &sigma.sets {
        writeln!(out, "  σ({}) = {v}", print_term(&Term::IntSet(Box::new(s.clone())))).unwrap();
    }
}

fn check_props(trials: usize, seed: u64, as_json: bool) -> Result<String, Failure> {
    let mut reports = props::world_suite(trials, seed);
    reports.push(props::definitional_suite());
    let programs = props::random_gz_theories(trials.div_ceil(20).max(1), seed)?;
    reports.push(props::existential_suite(&programs, &props::gz_bounds())?);
    reports.push(props::conservativity_suite(trials.div_ceil(20).max(1), seed)?);
    let cross = props::random_cross_check(trials.div_ceil(5).max(1), seed)?;
    let mut cross_report = props::SuiteReport {
        name: "gz vs equilibrium".into(),
        checked: cross.trials,
        violations: Vec::new(),
    };
    cross_report.violations = cross
        .disagreements
        .iter()
        .map(|d| d.program.clone())
        .collect();
    reports.push(cross_report);

    let ok = reports.iter().all(|r| r.ok());
    let out = if as_json {
        serde_json::to_string_pretty(&reports).expect("serializable") + "\n"
    } else {
        let mut s = String::new();
        for r in &reports {
            writeln!(s, "{} {r}", if r.ok() { "ok  " } else { "FAIL" }).unwrap();
        }
        s
    };
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Disagree)
    }
}
