//! Command-line front end. [`run`] is the whole program minus process I/O.

use std::io::Read;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use crate::decide::{decide_valid, Engine};
use crate::error::Error;
use crate::formula::Formula;
use crate::laws::{self, LawConfig};
use crate::parser::{parse, to_interchange};
use crate::reduce::{normalize, recursive_reduce, reduce_to_uce, to_cnf, to_dnf, Strategy};
use crate::semantics::{classify_oracle, eval, ValuationFrame, VerdictClass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_VALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_TOO_LARGE: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "gradual", about = "Gradual classical logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and pretty-print a formula
    Parse {
        /// Print the JSON interchange tree instead
        #[arg(long)]
        ast: bool,
        input: String,
    },
    /// Reduce to unit chain expansion
    Reduce {
        #[arg(long)]
        trace: bool,
        /// `deterministic` or `random:<seed>`
        #[arg(long, default_value = "deterministic", value_parser = parse_order)]
        order: Strategy,
        input: String,
    },
    /// Negation of the reduct, via recursiveReduce
    Negate { input: String },
    /// Evaluate under a frame file
    Eval {
        #[arg(long)]
        frame: String,
        input: String,
    },
    /// Decide validity
    Decide {
        #[arg(long, value_enum, default_value_t = EngineArg::Levelwise)]
        engine: EngineArg,
        #[arg(long)]
        witness: bool,
        input: String,
    },
    /// Disjunctive normal form of the reduct
    Dnf { input: String },
    /// Conjunctive normal form of the reduct
    Cnf { input: String },
    /// Run the randomized law suites
    CheckLaws {
        #[arg(long, default_value_t = LawConfig::default().iters)]
        iters: usize,
        #[arg(long, default_value_t = LawConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = LawConfig::default().max_atoms)]
        max_atoms: usize,
        #[arg(long, default_value_t = LawConfig::default().max_depth)]
        max_depth: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Levelwise,
    Faithful,
    Oracle,
}

fn parse_order(s: &str) -> Result<Strategy, String> {
    if s == "deterministic" {
        return Ok(Strategy::Deterministic);
    }
    s.strip_prefix("random:")
        .and_then(|seed| seed.parse().ok())
        .map(Strategy::Random)
        .ok_or_else(|| format!("expected `deterministic` or `random:<seed>`, got `{s}`"))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        Output { code, stdout: String::new(), stderr: stderr.into() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }
}

/// Runs one command; `argv[0]` is the program name. `-` reads the formula from `stdin`.
pub fn run<S: AsRef<str>>(argv: &[S], stdin: &mut dyn Read) -> Output {
    let cli = match Cli::try_parse_from(argv.iter().map(AsRef::as_ref)) {
        Ok(c) => c,
        Err(e) => {
            let mut text = e.render().to_string();
            if !e.use_stderr() {
                return Output::ok(text);
            }
            if !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            return Output::fail(EXIT_USAGE, text);
        }
    };
    match cli.command {
        Command::Parse { ast, input } => with_formula(&input, stdin, |f| {
            Output::ok(format!("{}\n", if ast { to_interchange(&f) } else { f.to_string() }))
        }),
        Command::Reduce { trace, order, input } => with_formula(&input, stdin, |f| {
            let t = reduce_to_uce(&f, order);
            let mut out = Output::default();
            if trace {
                for l in t.render() {
                    out.line(l);
                }
            }
            out.line(t.final_formula.to_string());
            out
        }),
        Command::Negate { input } => with_formula(&input, stdin, |f| {
            let n = recursive_reduce(&normalize(&f)).expect("reduct is UCE");
            Output::ok(format!("{n}\n"))
        }),
        Command::Eval { frame, input } => with_formula(&input, stdin, |f| eval_command(&f, &frame)),
        Command::Decide { engine, witness, input } => {
            with_formula(&input, stdin, |f| decide_command(&f, engine, witness))
        }
        Command::Dnf { input } => {
            with_formula(&input, stdin, |f| Output::ok(format!("{}\n", to_dnf(&normalize(&f)).expect("UCE"))))
        }
        Command::Cnf { input } => {
            with_formula(&input, stdin, |f| Output::ok(format!("{}\n", to_cnf(&normalize(&f)).expect("UCE"))))
        }
        Command::CheckLaws { iters, seed, max_atoms, max_depth } => {
            check_laws(&LawConfig { iters, seed, max_atoms, max_depth })
        }
    }
}

fn read_input(input: &str, stdin: &mut dyn Read) -> Result<String, String> {
    if input == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else if let Some(path) = input.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    } else {
        Ok(input.to_string())
    }
}

fn with_formula(input: &str, stdin: &mut dyn Read, body: impl FnOnce(Formula) -> Output) -> Output {
    let text = match read_input(input, stdin) {
        Ok(t) => t,
        Err(e) => return Output::fail(EXIT_PARSE, format!("{e}\n")),
    };
    match parse(text.trim_end_matches(['\n', '\r'])) {
        Ok(f) => body(f),
        Err(e) => Output::fail(EXIT_PARSE, format!("{e}\n")),
    }
}

fn eval_command(f: &Formula, frame_path: &str) -> Output {
    let frame = std::fs::read_to_string(frame_path)
        .map_err(|e| Error::FrameFormat(format!("reading {frame_path}: {e}")))
        .and_then(|text| ValuationFrame::from_json(&text));
    match frame.and_then(|m| eval(&m, &normalize(f))) {
        Ok(v) => Output::ok(format!("{}\n", u8::from(v))),
        Err(e) => Output::fail(EXIT_EVAL, format!("{e}\n")),
    }
}

fn decide_command(f: &Formula, engine: EngineArg, witness: bool) -> Output {
    let engine = match engine {
        EngineArg::Levelwise => Engine::Levelwise,
        EngineArg::Faithful => Engine::Faithful,
        EngineArg::Oracle => return oracle_command(f, witness),
    };
    let report = decide_valid(f, engine);
    let mut out = Output::default();
    out.line(if report.result { "valid" } else { "invalid" });
    out.code = if report.result { EXIT_OK } else { EXIT_NOT_VALID };
    if witness && !report.result {
        // engines report no frame; the oracle supplies one when it can
        match classify_oracle(f) {
            Ok(v) => {
                if let Some(m) = v.witness_false {
                    out.line(format!("witness_false {}", m.to_json()));
                }
            }
            Err(e) => out.stderr.push_str(&format!("no witness: {e}\n")),
        }
    }
    out
}

fn oracle_command(f: &Formula, witness: bool) -> Output {
    let v = match classify_oracle(f) {
        Ok(v) => v,
        Err(e) => return Output::fail(EXIT_TOO_LARGE, format!("{e}\n")),
    };
    let mut out = Output::default();
    out.line(v.class.as_str());
    out.code = if v.class == VerdictClass::Valid { EXIT_OK } else { EXIT_NOT_VALID };
    if witness {
        if let Some(m) = &v.witness_true {
            out.line(format!("witness_true {}", m.to_json()));
        }
        if let Some(m) = &v.witness_false {
            out.line(format!("witness_false {}", m.to_json()));
        }
    }
    out
}

fn check_laws(cfg: &LawConfig) -> Output {
    let results = laws::run_all(cfg);
    let mut out = Output::default();
    let (mut pass, mut fail) = (0, 0);
    for r in &results {
        out.line(format!("{:<28} pass {:>6}  fail {:>6}", r.name, r.passed, r.failed));
        if let Some(first) = &r.first_failure {
            out.line(format!("  first failure: {first}"));
        }
        pass += r.passed;
        fail += r.failed;
    }
    out.line(format!("{:<28} pass {pass:>6}  fail {fail:>6}", "total"));
    out.code = if fail == 0 { EXIT_OK } else { EXIT_NOT_VALID };
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Output {
        let mut argv = vec!["gradual"];
        argv.extend_from_slice(args);
        run(&argv, &mut std::io::empty())
    }

    #[test]
    fn spec_examples() {
        let o = go(&["decide", "hat > yellow"]);
        assert_eq!((o.code, o.stdout.as_str()), (1, "invalid\n"));
        assert_eq!(go(&["negate", "hat > yellow"]).stdout, "hat' | (hat > yellow')\n");
        assert_eq!(go(&["decide", "--engine", "faithful", "top | (b > c)"]).stdout, "invalid\n");
        assert_eq!(go(&["decide", "--engine", "oracle", "top | (b > c)"]).stdout, "valid\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["parse", "a & b | c"]).code, EXIT_PARSE);
        assert_eq!(go(&["parse", "--bogus", "a"]).code, EXIT_USAGE);
        assert_eq!(go(&["reduce", "--order", "sideways", "a"]).code, EXIT_USAGE);
        assert_eq!(go(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(go(&["decide", "a | a'"]).code, EXIT_OK);
        assert_eq!(go(&["eval", "--frame", "/nonexistent/frame.json", "a"]).code, EXIT_EVAL);
    }

    #[test]
    fn stdin_input() {
        let o = run(&["gradual", "parse", "-"], &mut "!(a & b)\n".as_bytes());
        assert_eq!(o.stdout, "!(a & b)\n");
    }
}
