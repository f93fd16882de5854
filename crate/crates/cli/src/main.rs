use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sdkit::cat::{budget_from_env, enumerate_presheaves, fundamental_category, twisted_arrow};
use sdkit::checkers::{self, Verdict};
use sdkit::corpus::{self, Item};
use sdkit::elements::{el_upto, lambda, nel, xi};
use sdkit::factorization::{
    comprehensive_factorize_functor, culf_reflection, is_ambifinal, rfib_from_presheaf, rfib_reflection, untwist,
};
use sdkit::io;
use sdkit::ordinal::Convention;
use sdkit::sset::{find_isomorphism_over, sd_of_map_with, sd_with, SMap, TruncSSet};
use sdkit::suite;
use sdkit::Error;

#[derive(Parser)]
#[command(name = "sdkit", version, about = "Edgewise subdivision, culf maps and right fibrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Culf,
    RightFibration,
    LeftFibration,
    Segal,
    Decomposition,
    RezkComplete,
    Culfy,
    Righteous,
    Final,
    DiscreteFibration,
    DkEquivalence,
    RelativeComplete,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conv {
    Q,
    Qprime,
}

impl From<Conv> for Convention {
    fn from(c: Conv) -> Self {
        match c {
            Conv::Q => Convention::Q,
            Conv::Qprime => Convention::QPrime,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    /// (final, discrete fibration) for functors
    Comprehensive,
    /// (final, right fibration) for simplicial maps
    Rfib,
    /// (ambifinal, culf) for simplicial maps
    Culf,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property; exits 1 when it fails.
    Check {
        property: Property,
        /// An instance file or a `corpus:` name.
        input: String,
        #[arg(long)]
        dim: Option<usize>,
        /// Decide culf and decomposition through the subdivision taken with
        /// this convention.
        #[arg(long)]
        convention: Option<Conv>,
    },
    /// Edgewise subdivision of a simplicial set or map.
    Sd {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value = "q")]
        convention: Conv,
    },
    /// Twisted arrow category.
    Tw {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Category of elements, up to the given degree.
    El {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Nerve of the category of elements.
    Nel {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// The last-vertex map ξ.
    Xi {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// The middle-segments map λ.
    Lambda {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Factor a functor or simplicial map; writes `<prefix>.left.json` and
    /// `<prefix>.right.json` when `-o` is given.
    Factor {
        system: System,
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Turn a right fibration over Sd X into a culf map over X.
    Untwist {
        rfib: String,
        base: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Check both untwisting roundtrips over a base, or for one culf map.
    Roundtrip {
        input: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_fiber: usize,
    },
    /// The built-in examples.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Run the acceptance criteria and the invariant suite.
    VerifyAll {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = suite::Config::default().seed)]
        seed: u64,
        #[arg(long)]
        dim: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Emit {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
    },
}

enum Failure {
    Fails(Value),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Outcome = std::result::Result<Value, Failure>;

const DEFAULT_DIM: usize = 7;

fn load(input: &str, dim: Option<usize>) -> Result<Item, Error> {
    if input.starts_with("corpus:") {
        return corpus::lookup(input, dim.unwrap_or(DEFAULT_DIM));
    }
    let text = std::fs::read_to_string(input).map_err(|e| Error::InvalidInput(format!("{input}: {e}")))?;
    let item = io::item_from_json(&io::parse(&text)?)?;
    Ok(match (item, dim) {
        (Item::SSet(x), Some(d)) if d < x.dim() => Item::SSet(Arc::new(x.truncate(d))),
        (Item::Map(f), Some(d)) if d < f.dim() => Item::Map(f.truncate(d)),
        (item, _) => item,
    })
}

fn kind(item: &Item) -> &'static str {
    match item {
        Item::Category(_) => "fincat",
        Item::Functor(_) => "functor",
        Item::SSet(_) => "trunc_sset",
        Item::Map(_) => "smap",
        Item::Presheaf(_) => "presheaf",
    }
}

fn wrong(item: &Item, wanted: &str) -> Error {
    Error::InvalidInput(format!("expected {wanted}, got a {}", kind(item)))
}

fn load_sset(input: &str, dim: Option<usize>) -> Result<Arc<TruncSSet>, Error> {
    match load(input, dim)? {
        Item::SSet(x) => Ok(x),
        other => Err(wrong(&other, "a trunc_sset")),
    }
}

fn load_smap(input: &str, dim: Option<usize>) -> Result<SMap, Error> {
    match load(input, dim)? {
        Item::Map(f) => Ok(f),
        other => Err(wrong(&other, "an smap")),
    }
}

fn emit(inst: io::Instance, output: &Option<PathBuf>) -> Outcome {
    let text = io::to_string(&inst);
    match output {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            Ok(json!({ "written": path.display().to_string() }))
        }
        None => Ok(serde_json::from_str(&text).expect("valid json")),
    }
}

fn verdict(v: Verdict) -> Outcome {
    let value = serde_json::to_value(&v).expect("verdicts serialize");
    if v.holds {
        Ok(value)
    } else {
        Err(Failure::Fails(value))
    }
}

fn check(property: Property, input: &str, dim: Option<usize>, convention: Option<Conv>) -> Outcome {
    use Property::*;
    let item = load(input, dim)?;
    let v = match (property, &item) {
        (Culf, Item::Map(p)) => match convention {
            None => checkers::is_culf(p)?,
            Some(Conv::Q) => {
                let mut v = checkers::is_right_fibration(&sd_of_map_with(p, Convention::Q)?)?;
                v.route = format!("right fibration after subdivision: {}", v.route);
                v
            }
            Some(Conv::Qprime) => {
                let mut v = checkers::is_left_fibration(&sd_of_map_with(p, Convention::QPrime)?)?;
                v.route = format!("left fibration after primed subdivision: {}", v.route);
                v
            }
        },
        (RightFibration, Item::Map(p)) => checkers::is_right_fibration(p)?,
        (LeftFibration, Item::Map(p)) => checkers::is_left_fibration(p)?,
        (Culfy, Item::Map(p)) => checkers::is_culfy_smap(p)?,
        (Righteous, Item::Map(p)) => checkers::is_righteous_smap(p)?,
        (Segal, Item::SSet(x)) => checkers::is_segal(x)?,
        (Decomposition, Item::SSet(x)) => match convention {
            None => checkers::is_decomposition(x)?,
            Some(c) => {
                let mut v = checkers::is_segal(&sd_with(x, c.into())?)?;
                v.route = format!("Segal after subdivision: {}", v.route);
                v
            }
        },
        (RezkComplete, Item::SSet(x)) => checkers::is_rezk_complete(x)?,
        (Final, Item::Functor(f)) => checkers::is_final_functor(f),
        (Final, Item::Map(f)) => {
            let r = rfib_reflection(f, budget_from_env())?;
            let holds = r.projection.is_levelwise_bijective();
            if holds {
                Verdict::pass("right fibration part of the reflection is invertible", f.dim())
            } else {
                Verdict::fail(
                    "right fibration part of the reflection is invertible",
                    f.dim(),
                    checkers::Witness::note(format!("reflection has levels {:?}", r.total().level_sizes())),
                )
            }
        }
        (DiscreteFibration, Item::Functor(f)) => match f.discrete_fibration_failure() {
            None => Verdict::pass("unique lifts", 1),
            Some(w) => Verdict::fail("unique lifts", 1, checkers::Witness::note(w)),
        },
        (DkEquivalence, Item::Functor(f)) => checkers::is_dk_equivalence(f),
        (RelativeComplete, Item::Functor(f)) => checkers::is_relative_complete(f),
        _ => return Err(Error::InvalidInput(format!("the property does not apply to a {}", kind(&item))).into()),
    };
    verdict(v)
}

fn factor(system: System, input: &str, output: &Option<PathBuf>, dim: Option<usize>) -> Outcome {
    let (left, right, report) = match system {
        System::Comprehensive => {
            let f = match load(input, dim)? {
                Item::Functor(f) => f,
                other => return Err(wrong(&other, "a functor").into()),
            };
            let fa = comprehensive_factorize_functor(&f)?;
            let report = json!({
                "system": "comprehensive",
                "middle_objects": fa.middle().num_objects(),
                "composes": fa.composes_to(&f),
                "left_final": checkers::is_final_functor(&fa.left).holds,
                "right_discrete_fibration": fa.right.is_discrete_fibration(),
            });
            (io::functor_to_json(&fa.left), io::functor_to_json(&fa.right), report)
        }
        System::Rfib => {
            let f = load_smap(input, dim)?;
            let r = rfib_reflection(&f, budget_from_env())?;
            let fa = r.factorization();
            let report = json!({
                "system": "rfib",
                "middle_levels": fa.middle().level_sizes(),
                "composes": fa.composes_to(&f),
                "right_fibration": checkers::is_right_fibration(&fa.right)?.holds,
            });
            (io::smap_to_json(&fa.left), io::smap_to_json(&fa.right), report)
        }
        System::Culf => {
            let f = load_smap(input, dim)?;
            let fa = culf_reflection(&f, budget_from_env())?;
            let report = json!({
                "system": "culf",
                "middle_levels": fa.middle().level_sizes(),
                "composes": fa.composes_to(&f),
                "left_ambifinal": is_ambifinal(&fa.left, budget_from_env())?,
                "right_culf": checkers::is_culf(&fa.right)?.holds,
            });
            (io::smap_to_json(&fa.left), io::smap_to_json(&fa.right), report)
        }
    };
    let Some(prefix) = output else {
        return Ok(json!({ "report": report, "left": left, "right": right }));
    };
    let mut files = Vec::new();
    for (part, inst) in [("left", left), ("right", right)] {
        let path = PathBuf::from(format!("{}.{part}.json", prefix.display()));
        emit(inst, &Some(path.clone()))?;
        files.push(path.display().to_string());
    }
    Ok(json!({ "report": report, "files": files }))
}

fn roundtrip(input: &str, dim: Option<usize>, max_fiber: usize) -> Outcome {
    let item = load(input, Some(dim.unwrap_or(DEFAULT_DIM)))?;
    let (rfib_cases, rfib_found, culf_cases, culf_found, failures) = match item {
        Item::SSet(x) => {
            let sx = Arc::new(sd_with(&x, Convention::Q)?);
            let fc = fundamental_category(&sx, budget_from_env())?;
            let (mut n, mut ok, mut failures) = (0, 0, Vec::new());
            for (i, p) in enumerate_presheaves(&Arc::new(fc.cat.clone()), max_fiber).iter().enumerate() {
                let (_, proj) = rfib_from_presheaf(&sx, &fc, p)?;
                let (_, q) = untwist(&proj, &x)?;
                n += 1;
                if find_isomorphism_over(&sd_of_map_with(&q, Convention::Q)?, &proj).is_some() {
                    ok += 1;
                } else {
                    failures.push(format!("presheaf {i}"));
                }
            }
            let (mut m, mut mok) = (0, 0);
            if input.starts_with("corpus:") {
                for c in corpus::maps(x.dim())? {
                    if *c.value.target() != x || !checkers::is_culf(&c.value)?.holds {
                        continue;
                    }
                    m += 1;
                    let (_, q) = untwist(&sd_of_map_with(&c.value, Convention::Q)?, &x)?;
                    if find_isomorphism_over(&q, &c.value).is_some() {
                        mok += 1;
                    } else {
                        failures.push(c.name.clone());
                    }
                }
            }
            (n, ok, m, mok, failures)
        }
        Item::Map(q) => {
            if !checkers::is_culf(&q)?.holds {
                return Err(Error::InvalidInput("roundtrip needs a culf map".into()).into());
            }
            let x = q.target().clone();
            let p = sd_of_map_with(&q, Convention::Q)?;
            let (_, back) = untwist(&p, &x)?;
            let culf = find_isomorphism_over(&back, &q).is_some();
            let rfib = find_isomorphism_over(&sd_of_map_with(&back, Convention::Q)?, &p).is_some();
            let failures = [(!culf).then(|| "untwist(Sd q) vs q".to_string()), (!rfib).then(|| "Sd untwist(Sd q) vs Sd q".to_string())];
            (1, rfib as usize, 1, culf as usize, failures.into_iter().flatten().collect())
        }
        other => return Err(wrong(&other, "a trunc_sset or an smap").into()),
    };
    let report = json!({
        "right_fibrations": rfib_cases,
        "right_fibration_roundtrips": rfib_found,
        "culf_maps": culf_cases,
        "culf_roundtrips": culf_found,
        "failures": failures,
    });
    if failures.is_empty() {
        Ok(report)
    } else {
        Err(Failure::Fails(report))
    }
}

fn verify_all(quick: bool, seed: u64, dim: Option<usize>) -> Outcome {
    let cfg = suite::Config { dim: dim.unwrap_or(DEFAULT_DIM), quick, seed, budget: budget_from_env() };
    let checks: Vec<suite::Check> = suite::criteria().into_iter().chain(suite::invariants()).collect();
    let outcomes: Vec<suite::Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = checks.iter().map(|c| s.spawn(|| c.run(&cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("check panicked")).collect()
    });
    for o in &outcomes {
        eprintln!("{} {}: {} ({} cases)", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title, o.cases);
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let report = json!({ "passed": passed, "seed": seed, "quick": quick, "checks": outcomes });
    if passed {
        Ok(report)
    } else {
        Err(Failure::Fails(report))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { property, input, dim, convention } => check(property, &input, dim, convention),
        Command::Sd { input, output, dim, convention } => match load(&input, dim)? {
            Item::SSet(x) => emit(io::sset_to_json(&sd_with(&x, convention.into())?), &output),
            Item::Map(f) => emit(io::smap_to_json(&sd_of_map_with(&f, convention.into())?), &output),
            other => Err(wrong(&other, "a trunc_sset or an smap").into()),
        },
        Command::Tw { input, output } => match load(&input, None)? {
            Item::Category(c) => emit(io::cat_to_json(&twisted_arrow(&c)), &output),
            other => Err(wrong(&other, "a fincat").into()),
        },
        Command::El { input, output, dim, degree } => {
            let x = load_sset(&input, dim)?;
            emit(io::cat_to_json(el_upto(&x, degree)?.cat()), &output)
        }
        Command::Nel { input, output, dim, degree } => {
            let x = load_sset(&input, dim)?;
            if degree > x.dim() {
                return Err(Error::OutOfTruncation(format!("Nel in degree {degree} needs X_{degree}")).into());
            }
            emit(io::sset_to_json(&nel(&x, degree)), &output)
        }
        Command::Xi { input, output, dim, degree } => emit(io::smap_to_json(&xi(&load_sset(&input, dim)?, degree)?), &output),
        Command::Lambda { input, output, dim, degree } => {
            emit(io::smap_to_json(&lambda(&load_sset(&input, dim)?, degree)?), &output)
        }
        Command::Factor { system, input, output, dim } => factor(system, &input, &output, dim),
        Command::Untwist { rfib, base, output, dim } => {
            let p = load_smap(&rfib, None)?;
            let x = load_sset(&base, dim)?;
            let (_, q) = untwist(&p, &x)?;
            let culf = checkers::is_culf(&q)?;
            let written = emit(io::smap_to_json(&q), &output)?;
            Ok(json!({ "culf": culf, "result": written }))
        }
        Command::Roundtrip { input, dim, max_fiber } => roundtrip(&input, dim, max_fiber),
        Command::Corpus { action: CorpusAction::List } => {
            Ok(Value::Array(corpus::list().into_iter().map(|(n, k)| json!({ "name": n, "kind": k })).collect()))
        }
        Command::Corpus { action: CorpusAction::Emit { name, output, dim } } => {
            let name = name.strip_prefix("corpus:").unwrap_or(&name).to_string();
            let item = corpus::lookup(&name, dim.unwrap_or(DEFAULT_DIM))?;
            emit(io::item_to_json(&item).with_name(name, Some("built-in example".into())), &output)
        }
        Command::VerifyAll { quick, seed, dim } => verify_all(quick, seed, dim),
    }
}

fn print(v: &Value) {
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(v) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Fails(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } | Error::OutOfTruncation(_) => 3,
                _ => 2,
            })
        }
    }
}
