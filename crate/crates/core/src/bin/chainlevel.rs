use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chainlevel::canonical::{degree_spectrum, ideal_slice, DegreeSpectrum, SpectrumMethod};
use chainlevel::catalog;
use chainlevel::construct::build_with_trace;
use chainlevel::level::{is_level_with, PolytopeKind, Variant};
use chainlevel::oracle::hilbert_compare;
use chainlevel::poset::DEFAULT_MAX_ELEMENTS;
use chainlevel::sequences::{dmax_with_witness, enumerate_sequences};
use chainlevel::symbolic::verify_power_equality;
use chainlevel::{canonical, Budget, Condition, Epsilon, Error, Poset};

#[derive(Parser)]
#[command(name = "chainlevel", version, about = "Level and anticanonical-level analysis of chain and order polytope rings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Global {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of search steps before giving up.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    budget: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Show the step-by-step construction of generators.
    #[arg(long, global = true)]
    trace: bool,
    /// Largest poset accepted from a file.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Level verdicts and generator degrees of a poset.
    Analyze {
        file: PathBuf,
        /// Also compute the spectrum by exhaustive search.
        #[arg(long)]
        verify: bool,
    },
    /// Run the theorem checks; nonzero exit if any fails.
    Verify {
        file: PathBuf,
        /// Check that symbolic powers of this order split.
        #[arg(long)]
        power: Option<i64>,
        #[arg(long, default_value_t = 10)]
        degree_cap: i64,
        #[arg(long, default_value_t = 6)]
        entry_cap: i64,
        /// Compare lattice point counts up to this dilation.
        #[arg(long)]
        hilbert: Option<i64>,
        /// Compare the three generator tests on every ideal member up to the top degree.
        #[arg(long)]
        generators: bool,
    },
    /// List zigzag sequences with their q-values.
    Sequences {
        file: PathBuf,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        eps: i64,
        #[arg(long, value_enum, default_value_t = VariantArg::Nprime)]
        variant: VariantArg,
        #[arg(long)]
        reduced_only: bool,
    },
    /// Print one of the built-in posets as JSON.
    Examples {
        #[arg(value_parser = catalog::NAMES)]
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m1: Option<usize>,
        #[arg(long)]
        m2: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "N")]
    N,
    #[value(name = "Nprime")]
    Nprime,
}

enum Failure {
    Check(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn load(path: &Path, g: &Global) -> Result<Poset, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(Poset::from_json_str(&text, g.max_elements)?)
}

fn interval(s: &DegreeSpectrum) -> String {
    if s.is_interval() {
        format!("[{}, {}]", s.d0, s.dmax)
    } else {
        format!("{:?}", s.degrees)
    }
}

fn analyze(g: &Global, file: &Path, verify: bool) -> Result<(), Failure> {
    let p = load(file, g)?;
    let budget = Budget::new(g.budget);
    let mut reports = Vec::new();
    for k in PolytopeKind::BOTH {
        for v in Variant::BOTH {
            reports.push(is_level_with(&p, k, v, &budget)?);
        }
    }
    let mut spectra = Vec::new();
    let mut mismatch = Vec::new();
    for eps in Epsilon::BOTH {
        let f = degree_spectrum(&p, eps, SpectrumMethod::Formula, &budget)?;
        let b = if verify {
            let b = degree_spectrum(&p, eps, SpectrumMethod::BruteForce, &budget)?;
            if b.degrees != f.degrees {
                mismatch.push(format!("eps {eps}: formula {:?}, brute force {:?}", f.degrees, b.degrees));
            }
            Some(b)
        } else {
            None
        };
        spectra.push((eps, f, b));
    }
    let mut traces = Vec::new();
    if g.trace {
        for eps in Epsilon::BOTH {
            let top = dmax_with_witness(&p, eps, Condition::NPrime, &budget)?;
            traces.push(build_with_trace(&p, eps, &top.seq, true)?);
        }
    }

    if g.json {
        let out = json!({
            "elements": p.len(),
            "level": reports.iter().map(|r| r.to_json(&p)).collect::<Vec<_>>(),
            "spectra": spectra.iter().map(|(_, f, b)| json!({
                "formula": f.to_json(&p),
                "brute_force": b.as_ref().map(|b| b.to_json(&p)),
            })).collect::<Vec<_>>(),
            "traces": traces.iter().map(|t| t.to_json(&p)).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for r in &reports {
            println!("{}", r.line(&p));
        }
        for (eps, f, b) in &spectra {
            let name = if eps.value() > 0 { "canonical" } else { "anticanonical" };
            println!("{name} generator degrees: {} (d0 = {}, dmax = {})", interval(f), f.d0, f.dmax);
            if let Some(b) = b {
                println!("{name} generator degrees by search: {}", interval(b));
            }
            if let Some(w) = f.witnesses.get(&f.dmax) {
                println!("  top-degree generator: {}", w.display(&p));
            }
        }
        for t in &traces {
            println!("construction for eps {} from {}:", t.eps, t.seq.display(&p));
            println!("  d = {}, mu' = {:?}, mu'' = {:?}", t.mu.d, t.mu.mu_prime, t.mu.mu_dprime);
            for s in &t.steps {
                println!("  step {}: {} {} -> {}", s.k, p.name(s.element), s.old, s.new);
            }
            println!("  result: {}", t.xi_final.display(&p));
        }
    }
    if mismatch.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(mismatch.join("; ")))
    }
}

struct CheckLine {
    name: String,
    pass: bool,
    detail: Value,
}

fn three_way(p: &Poset, budget: &Budget) -> Result<CheckLine, Failure> {
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for eps in Epsilon::BOTH {
        let d0 = canonical::min_degree(p, eps);
        let top = dmax_with_witness(p, eps, Condition::NPrime, budget)?.q;
        for d in d0..=top + 1 {
            for xi in ideal_slice(p, eps, d, budget)? {
                budget.spend(1, "generator agreement")?;
                let a = canonical::is_generator_antichain(p, eps, &xi)?.is_generator;
                let b = canonical::is_generator_decomposition(p, eps, &xi)?.is_generator;
                let c = canonical::generator_witness_sequence(p, eps, &xi)?.is_generator;
                if !(a == b && b == c) {
                    bad.push(xi.display(p));
                }
                checked += 1;
            }
        }
    }
    Ok(CheckLine {
        name: "generator tests agree".into(),
        pass: bad.is_empty(),
        detail: json!({ "checked": checked, "disagreements": bad }),
    })
}

#[allow(clippy::too_many_arguments)]
fn verify(
    g: &Global,
    file: &Path,
    power: Option<i64>,
    degree_cap: i64,
    entry_cap: i64,
    hilbert: Option<i64>,
    generators: bool,
) -> Result<(), Failure> {
    let p = load(file, g)?;
    let budget = Budget::new(g.budget);
    let run_all = power.is_none() && hilbert.is_none() && !generators;
    let mut lines = Vec::new();
    if let Some(n) = power.or(run_all.then_some(2)) {
        for eps in Epsilon::BOTH {
            let r = verify_power_equality(&p, eps, n, degree_cap, entry_cap, &budget)?;
            lines.push(CheckLine {
                name: format!("symbolic power n={n} eps={eps}"),
                pass: r.passed(),
                detail: serde_json::to_value(&r).unwrap(),
            });
        }
    }
    if let Some(n) = hilbert.or(run_all.then_some(3)) {
        let r = hilbert_compare(&p, n, &budget)?;
        lines.push(CheckLine {
            name: format!("Hilbert functions agree up to {n}"),
            pass: r.equal,
            detail: serde_json::to_value(&r).unwrap(),
        });
    }
    if generators || run_all {
        lines.push(three_way(&p, &budget)?);
    }
    if g.json {
        let out: Vec<Value> = lines
            .iter()
            .map(|l| json!({ "check": l.name, "pass": l.pass, "detail": l.detail }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for l in &lines {
            println!("{}: {}", l.name, if l.pass { "PASS" } else { "FAIL" });
        }
    }
    match lines.iter().filter(|l| !l.pass).count() {
        0 => Ok(()),
        k => Err(Failure::Check(format!("{k} check(s) failed"))),
    }
}

fn sequences(g: &Global, file: &Path, eps: i64, variant: VariantArg, reduced_only: bool) -> Result<(), Failure> {
    let p = load(file, g)?;
    let eps = Epsilon::from_i64(eps)?;
    let cond = match variant {
        VariantArg::N => Condition::N,
        VariantArg::Nprime => Condition::NPrime,
    };
    let all = enumerate_sequences(&p, eps, cond, reduced_only, &Budget::new(g.budget))?;
    if g.json {
        let out: Vec<Value> = all
            .iter()
            .map(|s| json!({ "sequence": s.seq.to_json(&p), "q": s.q }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for s in &all {
            println!("{:>4}  {}", s.q, s.seq.display(&p));
        }
    }
    Ok(())
}

fn examples(name: &str, n: Option<usize>, m1: Option<usize>, m2: Option<usize>) -> Result<(), Failure> {
    let p = catalog::by_name(name, n, m1, m2)?;
    println!("{}", serde_json::to_string_pretty(&p.to_json()).unwrap());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let g = &cli.global;
    if let Some(k) = g.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.cmd {
        Command::Analyze { file, verify: v } => analyze(g, file, *v),
        Command::Verify {
            file,
            power,
            degree_cap,
            entry_cap,
            hilbert,
            generators,
        } => verify(g, file, *power, *degree_cap, *entry_cap, *hilbert, *generators),
        Command::Sequences {
            file,
            eps,
            variant,
            reduced_only,
        } => sequences(g, file, *eps, *variant, *reduced_only),
        Command::Examples { name, n, m1, m2 } => examples(name, *n, *m1, *m2),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if let Error::TooManyElements { .. } = e {
                eprintln!("hint: raise the bound with --max-elements (at most 64)");
            }
            ExitCode::from(match e {
                Error::BoxTooLarge { .. } => 3,
                Error::ConstructionInvariantViolated(_) => 1,
                _ => 2,
            })
        }
    }
}
