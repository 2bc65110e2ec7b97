use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use torslat::bricks;
use torslat::cambrian::{self, Orientation};
use torslat::congruence::{self, Congruence};
use torslat::io::{self, fixtures, Loaded};
use torslat::suite;
use torslat::{BitSet, Error, Lattice, Limits, WeakOrder};

/// Finite lattices, weak orders, congruences and Cambrian quotients.
#[derive(Parser)]
#[command(name = "torslat", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// On a validation failure print the difference as JSON on stdout.
    #[arg(long, global = true)]
    json_diff: bool,
    /// Raise the element guardrail for cubic checks and enumeration.
    #[arg(long, global = true, value_name = "N")]
    max_elements: Option<usize>,
    /// Raise the weak-order rank guardrail.
    #[arg(long, global = true, value_name = "N")]
    max_rank: Option<usize>,
    /// Lift all guardrails.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build the weak order on S_{n+1}.
    WeakOrder {
        /// Rank; the lattice has (n+1)! elements.
        n: usize,
        /// Include brick labels on the arrows.
        #[arg(long)]
        labels: bool,
        /// Print DOT instead of the summary.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// Print the lattice file JSON.
        #[arg(long)]
        json: bool,
    },
    /// Congruence generated by arrows, labels or join-irreducibles.
    Congruence {
        /// A lattice file, a fixture name, or `weak-order:N`.
        lattice: String,
        /// Comma-separated `upper->lower` arrows, label names, or
        /// join-irreducible element names.
        #[arg(long, required = true)]
        contract: String,
        /// Print the quotient lattice as JSON.
        #[arg(long)]
        quotient: bool,
        /// Print the forcing report.
        #[arg(long)]
        report: bool,
        /// Print the lattice as DOT with contracted arrows doubled.
        #[arg(long)]
        dot: bool,
    },
    /// Cambrian congruence of an orientation of the type A diagram.
    Cambrian {
        /// Rank of the type A diagram.
        n: usize,
        /// n-1 binary digits, last digit for edge 1; 1 means i <- i+1.
        #[arg(long, allow_hyphen_values = true)]
        orientation: String,
        /// Use the meet with the opposite orientation.
        #[arg(long)]
        bicambrian: bool,
        /// List the class minima.
        #[arg(long)]
        bottoms: bool,
        /// Check that the class minima form a sublattice.
        #[arg(long)]
        verify: bool,
    },
    /// Strings (bricks) of rank n.
    Bricks {
        /// Rank of the type A diagram.
        n: usize,
        /// Print the forcing quiver, cross-checked in the weak order.
        #[arg(long)]
        forcing: bool,
    },
    /// Algebraic congruences via ideals of oriented paths.
    Algcon {
        /// Rank of the type A diagram.
        n: usize,
    },
    /// Structural report for a lattice.
    Check {
        /// A lattice file, a fixture name, or `weak-order:N`.
        lattice: String,
        /// Run every check. This is also the default.
        #[arg(long)]
        all: bool,
    },
    /// Shipped figure transcriptions.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    /// Check every fixture against the engine.
    Verify,
    /// List fixture names.
    List,
}

/// Failure classes with their exit codes.
enum Failure {
    Usage(String),
    Validation(Error),
    Report(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::InvalidOrientation(_)
            | Error::InvalidPermutation(_)
            | Error::SizeLimit { .. } => Failure::Usage(e.to_string()),
            other => Failure::Validation(other),
        }
    }
}

type Run = Result<(), Failure>;

fn limits(g: &Global) -> Limits {
    let mut l = if g.force {
        Limits::unbounded()
    } else {
        Limits::from_env()
    };
    if let Some(n) = g.max_elements {
        l.cubic_elements = n;
        l.enumeration_elements = n;
    }
    if let Some(r) = g.max_rank {
        l.weak_order_rank = r;
        l.labelled_rank = r;
    }
    l
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

/// Resolves a lattice argument: `weak-order:N`, an existing path, or a
/// fixture name.
fn resolve(source: &str, limits: &Limits) -> Result<Loaded, Failure> {
    if let Some(n) = source.strip_prefix("weak-order:") {
        let n: usize = n
            .parse()
            .map_err(|_| Failure::Usage(format!("bad rank in {source}")))?;
        let wo = WeakOrder::build(n, limits)?;
        return Ok(Loaded::Labelled(wo.labelled().clone()));
    }
    if Path::new(source).exists() {
        return Ok(io::load_lattice(source)?);
    }
    match fixtures::lattice(source) {
        Some(loaded) => Ok(loaded?),
        None => Err(Failure::Usage(format!(
            "{source} is neither a file, a fixture name, nor weak-order:N"
        ))),
    }
}

/// Turns `--contract` items into seed pairs.
fn seeds(loaded: &Loaded, items: &str) -> Result<Vec<(usize, usize)>, Failure> {
    let l = loaded.lattice();
    let element = |name: &str| {
        l.find_name(name.trim())
            .ok_or_else(|| Failure::Usage(format!("no element named {name}")))
    };
    let mut out = Vec::new();
    for item in items.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((u, d)) = item.split_once("->") {
            out.push((element(u)?, element(d)?));
        } else if let Some(label) = loaded.labelled().and_then(|lh| lh.label_id(item)) {
            let lh = loaded.labelled().unwrap();
            out.extend(lh.arrows_with_label(label).map(|c| {
                let a = l.covers()[c];
                (a.upper, a.lower)
            }));
        } else {
            let j = element(item)?;
            let star = l
                .j_star(j)
                .ok_or_else(|| Failure::Usage(format!("{item} is not join-irreducible")))?;
            out.push((j, star));
        }
    }
    Ok(out)
}

fn arrow_names(l: &Lattice, set: &BitSet) -> Vec<String> {
    set.iter()
        .map(|c| {
            let a = l.covers()[c];
            format!("{}->{}", l.name(a.upper), l.name(a.lower))
        })
        .collect()
}

fn weak_order_cmd(n: usize, labels: bool, dot: bool, json: bool, limits: &Limits) -> Run {
    if labels && n > limits.labelled_rank {
        return Err(Failure::Usage(format!(
            "labelled weak order of rank {n} exceeds the limit {}",
            limits.labelled_rank
        )));
    }
    let wo = WeakOrder::build(n, limits)?;
    let l = wo.lattice();
    let lh = labels.then(|| wo.labelled());
    if dot {
        print!("{}", io::emit_dot(l, lh, &BitSet::new(l.covers().len())));
    } else if json {
        print!("{}", io::emit_json(l, lh));
    } else {
        println!(
            "S_{}: {} elements, {} arrows",
            n + 1,
            l.len(),
            l.covers().len()
        );
        println!("join-irreducibles: {}", l.join_irreducibles().len());
        println!("distinct labels: {}", wo.labelled().used_labels().len());
    }
    Ok(())
}

fn congruence_cmd(
    source: &str,
    contract: &str,
    show_quotient: bool,
    report: bool,
    dot: bool,
    limits: &Limits,
) -> Run {
    let loaded = resolve(source, limits)?;
    let l = loaded.lattice();
    let pairs = seeds(&loaded, contract)?;
    let theta = congruence::congruence_closure(l, &pairs);
    if dot {
        print!("{}", io::emit_dot(l, loaded.labelled(), theta.contracted()));
        return Ok(());
    }
    let mut out = json!({
        "elements": l.len(),
        "classes": theta.class_count(),
        "contracted": arrow_names(l, theta.contracted()),
    });
    let non_covers = congruence::non_cover_seeds(l, &pairs);
    if !non_covers.is_empty() {
        out["non_cover_seeds"] = json!(non_covers
            .iter()
            .map(|&(a, b)| format!("{}->{}", l.name(a), l.name(b)))
            .collect::<Vec<_>>());
    }
    if show_quotient {
        let q = congruence::quotient(l, &theta)?;
        let file: Value = serde_json::from_str(&io::emit_json(&q.lattice, None)).expect("json");
        out["quotient"] = file;
    }
    if report {
        let f = congruence::forcing(l);
        let classes = f.classes();
        let mut groups = vec![Vec::new(); f.class_count()];
        for (c, &k) in classes.iter().enumerate() {
            groups[k].push(c);
        }
        let forced_classes: BTreeSet<usize> =
            theta.contracted().iter().map(|c| classes[c]).collect();
        out["forcing_classes"] = json!(groups
            .iter()
            .enumerate()
            .map(|(k, g)| json!({
                "arrows": arrow_names(l, &BitSet::from_indices(l.covers().len(), g.iter().copied())),
                "contracted": forced_classes.contains(&k),
            }))
            .collect::<Vec<_>>());
    }
    print_json(&out);
    Ok(())
}

fn cambrian_cmd(
    n: usize,
    orientation: &str,
    bicambrian: bool,
    bottoms: bool,
    verify: bool,
    limits: &Limits,
) -> Run {
    let q = Orientation::parse(n, orientation)?;
    let wo = WeakOrder::build(n, limits)?;
    let theta: Congruence = if bicambrian {
        cambrian::bicambrian(&wo, &q)?
    } else {
        cambrian::cambrian_congruence(&wo, &q)?
    };
    let quotient = congruence::quotient(wo.lattice(), &theta)?;
    println!("coxeter element: {}", cambrian::coxeter_word_string(&q));
    println!(
        "classes: {} (contracted arrows: {})",
        theta.class_count(),
        theta.contracted().count()
    );
    match quotient.lattice.hasse_regular_degree() {
        Some(d) => println!("quotient Hasse-regular of degree {d}"),
        None => println!("quotient not Hasse-regular"),
    }
    if bottoms {
        let list: Vec<String> = if bicambrian {
            theta
                .bottoms()
                .iter()
                .map(|&x| wo.perm(x).to_string())
                .collect()
        } else {
            cambrian::sortable_bottoms(&wo, &q)?
                .iter()
                .map(|p| p.to_string())
                .collect()
        };
        println!("bottoms:");
        for p in list {
            println!("{p}");
        }
    }
    if verify {
        match cambrian::closure_failure(wo.lattice(), &theta.bottoms()) {
            None => println!("bottoms form a sublattice"),
            Some(w) => {
                return Err(Failure::Report(json!({
                    "check": "bottoms form a sublattice",
                    "x": wo.perm(w.x).to_string(),
                    "y": wo.perm(w.y).to_string(),
                    "bound": w.bound.to_string(),
                    "result": wo.perm(w.result).to_string(),
                })))
            }
        }
    }
    Ok(())
}

fn bricks_cmd(n: usize, forcing: bool, limits: &Limits) -> Run {
    if n == 0 {
        return Err(Failure::Usage("rank must be at least 1".into()));
    }
    if !forcing {
        for s in bricks::enumerate_strings(n) {
            println!("{s}");
        }
        return Ok(());
    }
    if n > limits.labelled_rank {
        return Err(Failure::Usage(format!(
            "forcing needs the labelled weak order; rank {n} exceeds {}",
            limits.labelled_rank
        )));
    }
    let wo = WeakOrder::build(n, limits)?;
    let poset = bricks::brick_forcing_poset(&wo)?;
    print_json(&json!({
        "strings": poset.strings,
        "arrows": poset
            .arrows
            .iter()
            .map(|&(a, b)| [poset.strings[a].to_string(), poset.strings[b].to_string()])
            .collect::<Vec<_>>(),
    }));
    Ok(())
}

fn algcon_cmd(n: usize, limits: &Limits) -> Run {
    if n > limits.labelled_rank {
        return Err(Failure::Usage(format!(
            "rank {n} exceeds the labelled limit {}",
            limits.labelled_rank
        )));
    }
    let wo = WeakOrder::build(n, limits)?;
    let count = bricks::count_algebraic_congruences(&wo)?;
    print_json(&serde_json::to_value(&count).expect("json"));
    if count.injective {
        Ok(())
    } else {
        Err(Failure::Validation(Error::Injectivity {
            first: format!("{:?}", count.collision.as_ref().map(|c| &c.0)),
            second: format!("{:?}", count.collision.as_ref().map(|c| &c.1)),
        }))
    }
}

fn check_cmd(source: &str, limits: &Limits) -> Run {
    let loaded = resolve(source, limits)?;
    let l = loaded.lattice();
    let f = congruence::forcing(l);
    let semi = l.semidistributivity(limits)?;
    let polygonal = l.polygonality();
    let uniform = congruence::congruence_uniformity(l, &f, limits)?;
    let mut checks = vec![
        ("semidistributive", semi.is_none(), json!(semi)),
        (
            "polygonal",
            polygonal.is_ok(),
            match &polygonal {
                Ok(p) => json!({ "polygons": p.len() }),
                Err((b, t)) => json!({ "interval": [l.name(*b), l.name(*t)] }),
            },
        ),
        ("congruence_uniform", uniform.uniform, json!(uniform)),
    ];
    let regular = l.hasse_regular_degree();
    let mut out = json!({
        "elements": l.len(),
        "arrows": l.covers().len(),
        "hasse_regular": regular,
    });
    if let Some(lh) = loaded.labelled() {
        let mismatch = congruence::label_forcing_mismatch(lh, &f);
        checks.push(("label_consistent", mismatch.is_none(), json!(mismatch)));
        out["boundary"] = json!(congruence::boundary_labels(lh, &f));
    }
    let mut ok = true;
    for (name, passed, detail) in &checks {
        println!("{} {name}", if *passed { "ok  " } else { "FAIL" });
        out[*name] = json!({ "passed": passed, "detail": detail });
        ok &= *passed;
    }
    match regular {
        Some(d) => println!("info Hasse-regular of degree {d}"),
        None => println!("info not Hasse-regular"),
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Report(out))
    }
}

fn fixtures_cmd(action: &FixtureAction, limits: &Limits) -> Run {
    match action {
        FixtureAction::List => {
            for (name, _) in fixtures::LATTICES {
                println!("{name}");
            }
            println!("exforc_a3 (quiver)");
            println!("cambrian_s4_contracted (quiver)");
            Ok(())
        }
        FixtureAction::Verify => {
            let results = suite::verify_fixtures(limits);
            for r in &results {
                println!(
                    "{} {}: {}",
                    if r.passed { "ok  " } else { "FAIL" },
                    r.name,
                    r.detail
                );
            }
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(Failure::Report(json!(results
                    .iter()
                    .filter(|r| !r.passed)
                    .collect::<Vec<_>>())))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = limits(&cli.global);
    let result = match &cli.command {
        Command::WeakOrder {
            n,
            labels,
            dot,
            json,
        } => weak_order_cmd(*n, *labels, *dot, *json, &limits),
        Command::Congruence {
            lattice,
            contract,
            quotient,
            report,
            dot,
        } => congruence_cmd(lattice, contract, *quotient, *report, *dot, &limits),
        Command::Cambrian {
            n,
            orientation,
            bicambrian,
            bottoms,
            verify,
        } => cambrian_cmd(*n, orientation, *bicambrian, *bottoms, *verify, &limits),
        Command::Bricks { n, forcing } => bricks_cmd(*n, *forcing, &limits),
        Command::Algcon { n } => algcon_cmd(*n, &limits),
        Command::Check { lattice, .. } => check_cmd(lattice, &limits),
        Command::Fixtures { action } => fixtures_cmd(action, &limits),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Validation(err)) => {
            eprintln!("validation failed: {err}");
            if cli.global.json_diff {
                let v = match &err {
                    Error::CrossValidation { check, diff } => {
                        json!({ "check": check, "diff": diff })
                    }
                    other => json!({ "error": other.to_string() }),
                };
                print_json(&v);
            }
            ExitCode::from(1)
        }
        Err(Failure::Report(v)) => {
            eprintln!("validation failed");
            if cli.global.json_diff {
                print_json(&v);
            }
            ExitCode::from(1)
        }
    }
}
