use clap::{Args, Parser, Subcommand};
use fm_alba::alba::{run_alba, AlbaOutput};
use fm_alba::fo::correspondent;
use fm_alba::harness::{
    adequacy_suite, algebra_suite, crosscheck, enumerate_frames, inductive_corpus, rule_soundness_suite,
    EnumerationOptions, SuiteOptions,
};
use fm_alba::inductive::classify_inductive;
use fm_alba::semantics::{CompiledAssertion, FmFrame, RoAlgebra, DEFAULT_BUDGET};
use fm_alba::{parse_formula, Formula};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fm-alba", version, about = "Correspondence for intuitionistic modal logic on FM frames")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for corpus and frame sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Valuations allowed per validity check.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Keep one labelling of each frame up to isomorphism.
    #[arg(long, global = true)]
    canonical: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its syntax tree.
    Parse { formula: String },
    /// Search for a dependence order making the formula inductive.
    Classify { formula: String },
    /// Run ALBA and print the pure quasi-inequalities.
    Alba {
        formula: String,
        /// Also print every rule application.
        #[arg(long)]
        trace: bool,
    },
    /// Print the first-order frame correspondent.
    Translate { formula: String },
    /// Decide validity of the formula on one frame file.
    Check {
        #[arg(long)]
        frame: PathBuf,
        formula: String,
    },
    /// Compare validity with the correspondent on all small frames.
    Verify {
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// List or count the frames with a given number of worlds.
    Frames {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        count: bool,
    },
    /// Run every verification suite on the seeded corpus.
    Selftest {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Number of generated corpus formulas.
        #[arg(long, default_value_t = 20)]
        corpus: usize,
        /// Random frames one size above the bound for the algebra suite.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// A failed run: exit code 1 for a negative verdict, 2 for usage or I/O.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn failed(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

fn parse(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(usage)
}

fn print(common: &Common, value: Value, text: impl FnOnce() -> String) {
    if common.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize"));
    } else {
        print!("{}", text());
    }
}

fn ast_json(f: &Formula) -> Value {
    let node = |op: &str, args: Vec<&Formula>| json!({ "op": op, "args": args.into_iter().map(ast_json).collect::<Vec<_>>() });
    match f {
        Formula::Var(p) => json!({ "op": "var", "name": p }),
        Formula::Nominal(i) => json!({ "op": "nominal", "name": i }),
        Formula::Top => json!({ "op": "top" }),
        Formula::Bot => json!({ "op": "bot" }),
        Formula::And(a, b) => node("and", vec![a, b]),
        Formula::Or(a, b) => node("or", vec![a, b]),
        Formula::Implies(a, b) => node("implies", vec![a, b]),
        Formula::Box(a) => node("box", vec![a]),
        Formula::BlackDiamond(a) => node("black_diamond", vec![a]),
    }
}

fn ast_text(f: &Formula, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let (label, kids): (String, Vec<&Formula>) = match f {
        Formula::Var(p) => (format!("Var {p}"), vec![]),
        Formula::Nominal(i) => (format!("Nominal {i}"), vec![]),
        Formula::Top => ("Top".into(), vec![]),
        Formula::Bot => ("Bot".into(), vec![]),
        Formula::And(a, b) => ("And".into(), vec![a, b]),
        Formula::Or(a, b) => ("Or".into(), vec![a, b]),
        Formula::Implies(a, b) => ("Implies".into(), vec![a, b]),
        Formula::Box(a) => ("Box".into(), vec![a]),
        Formula::BlackDiamond(a) => ("BlackDiamond".into(), vec![a]),
    };
    out.push_str(&format!("{pad}{label}\n"));
    for k in kids {
        ast_text(k, depth + 1, out);
    }
}

fn alba(f: &Formula) -> Result<AlbaOutput, Failure> {
    run_alba(f).map_err(|e| failed(format!("ALBA failed: {e}")))
}

fn suite_options(common: &Common) -> SuiteOptions {
    SuiteOptions { enumeration: EnumerationOptions { canonical: common.canonical }, budget: common.budget }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = &cli.common;
    match cli.command {
        Command::Parse { formula } => {
            let f = parse(&formula)?;
            print(common, json!({ "formula": f.to_string(), "ast": ast_json(&f) }), || {
                let mut s = format!("{f}\n");
                ast_text(&f, 0, &mut s);
                s
            });
        }
        Command::Classify { formula } => {
            let f = parse(&formula)?;
            match classify_inductive(&f).map_err(usage)? {
                Some(order) => print(
                    common,
                    json!({ "formula": f.to_string(), "inductive": true, "order": order.to_string(), "pairs": order.pairs() }),
                    || format!("inductive with {order}\n"),
                ),
                None => {
                    print(common, json!({ "formula": f.to_string(), "inductive": false }), || "not inductive\n".into());
                    return Err(failed(""));
                }
            }
        }
        Command::Alba { formula, trace } => {
            let f = parse(&formula)?;
            let out = alba(&f)?;
            let systems: Vec<String> = out.systems.iter().map(ToString::to_string).collect();
            let mut value = json!({
                "formula": f.to_string(),
                "order": out.order.as_ref().map(ToString::to_string),
                "systems": systems,
            });
            if trace {
                value["trace"] = serde_json::to_value(&out.trace).expect("trace serializes");
            }
            print(common, value, || {
                let mut s = String::new();
                if trace {
                    s.push_str(&out.trace.to_string());
                    s.push('\n');
                }
                for q in &systems {
                    s.push_str(&format!("{q}\n"));
                }
                s
            });
        }
        Command::Translate { formula } => {
            let f = parse(&formula)?;
            let out = alba(&f)?;
            let sentence = correspondent(&out.systems).map_err(failed)?;
            print(common, json!({ "formula": f.to_string(), "correspondent": sentence.to_string() }), || {
                format!("{sentence}\n")
            });
        }
        Command::Check { frame, formula } => {
            let f = parse(&formula)?;
            let text = std::fs::read_to_string(&frame).map_err(|e| usage(format!("{}: {e}", frame.display())))?;
            let fr = FmFrame::from_json(&text).map_err(|e| usage(format!("{}: {e}", frame.display())))?;
            let alg = RoAlgebra::new(&fr);
            let counterexample = CompiledAssertion::new((&f).into()).counterexample(&alg, common.budget).map_err(usage)?;
            let refuting = counterexample.as_ref().map(|v| {
                let props: serde_json::Map<String, Value> =
                    v.props.iter().map(|(p, y)| (p.clone(), json!(fr.set_names(*y)))).collect();
                let noms: serde_json::Map<String, Value> =
                    v.nominals.iter().map(|(i, &w)| (i.clone(), json!(fr.names()[w]))).collect();
                json!({ "props": props, "nominals": noms })
            });
            let valid = counterexample.is_none();
            print(common, json!({ "formula": f.to_string(), "valid": valid, "counterexample": refuting }), || {
                match &refuting {
                    None => "valid\n".into(),
                    Some(v) => format!("not valid; refuted by {v}\n"),
                }
            });
            if !valid {
                return Err(failed(""));
            }
        }
        Command::Verify { formula, max_size } => {
            let f = parse(&formula)?;
            alba(&f)?;
            let report = crosscheck(&f, max_size, suite_options(common)).map_err(usage)?;
            print(common, serde_json::to_value(&report).expect("report serializes"), || {
                let mut s = format!(
                    "{}\ncorrespondent: {}\nframes: {} by size {:?}, valid on {}\nmismatches: {}\nover budget: {}\n",
                    report.formula,
                    report.correspondent,
                    report.frames_checked,
                    report.frames_by_size,
                    report.frames_valid,
                    report.mismatches.len(),
                    report.over_budget.len(),
                );
                for m in &report.mismatches {
                    s.push_str(&format!("  frame {}: modal {} vs first-order {}\n", m.frame_index, m.modal_valid, m.correspondent_true));
                }
                s.push_str(if report.passed() { "PASS\n" } else { "FAIL\n" });
                s
            });
            if !report.passed() {
                return Err(failed(""));
            }
        }
        Command::Frames { size, count } => {
            let opts = EnumerationOptions { canonical: common.canonical };
            let frames = enumerate_frames(size, opts).map_err(usage)?;
            if count {
                let n = frames.count();
                print(common, json!({ "size": size, "count": n }), || format!("{n}\n"));
            } else if common.json {
                let files: Vec<_> = frames.map(|f| f.to_file()).collect();
                println!("{}", serde_json::to_string(&files).expect("frames serialize"));
            } else {
                for f in frames {
                    println!("{}", serde_json::to_string(&f.to_file()).expect("frames serialize"));
                }
            }
        }
        Command::Selftest { max_size, corpus, samples } => {
            let options = suite_options(common);
            let formulas = inductive_corpus(common.seed, corpus);
            let mut reports = Vec::new();
            let mut lines = Vec::new();
            let mut all_pass = true;
            for f in &formulas {
                let r = crosscheck(f, max_size, options).map_err(|e| failed(format!("{f}: {e}")))?;
                all_pass &= r.passed();
                lines.push(format!("{} crosscheck {f}: {} frames", verdict(r.passed()), r.frames_checked));
                reports.push(serde_json::to_value(&r).expect("report serializes"));
            }
            let rules = rule_soundness_suite(&formulas, max_size, options).map_err(usage)?;
            all_pass &= rules.passed();
            lines.push(format!(
                "{} rule soundness: {} steps, {} violations",
                verdict(rules.passed()),
                rules.steps_by_rule.values().sum::<usize>(),
                rules.violations.len()
            ));
            let algebra = algebra_suite(max_size, samples, 40, common.seed, options).map_err(usage)?;
            all_pass &= algebra.passed();
            lines.push(format!(
                "{} algebra: {} frames plus {} sampled",
                verdict(algebra.passed()),
                algebra.exhaustive_frames,
                algebra.sampled_frames
            ));
            let adequacy = adequacy_suite(200, 3, max_size.max(1) + 1, common.seed).map_err(usage)?;
            all_pass &= adequacy.passed();
            lines.push(format!("{} translation: {} pointwise checks", verdict(adequacy.passed()), adequacy.pointwise_checks));
            print(
                common,
                json!({ "passed": all_pass, "crosscheck": reports, "rules": rules, "algebra": algebra, "adequacy": adequacy }),
                || lines.iter().map(|l| format!("{l}\n")).collect(),
            );
            if !all_pass {
                return Err(failed(""));
            }
        }
    }
    Ok(())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
