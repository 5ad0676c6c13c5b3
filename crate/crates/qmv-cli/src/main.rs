//! Command-line frontend: exact fidelity optimisation, majority tables,
//! Choi-matrix synthesis, and the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 unsupported size.

mod checks;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qmv::exact::{format_rat, rat_to_f64};
use qmv::fidopt::{majority_fidelity_recursive, solve_lp, BoolFn};
use qmv::golden;
use qmv::synth::{ideal_choi, synthesize_choi, MAX_SYNTH_BITS};

const EXIT_VERIFY_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSUPPORTED_SIZE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qmv",
    about = "Optimal unitary-equivariant channels for symmetric self-dual Boolean functions",
    version
)]
struct Cli {
    /// Seed for every randomised check; fixed default keeps runs reproducible.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the exact fidelity linear program for a truth table.
    ///
    /// The table lists the function on Hamming weights 0..floor(n/2),
    /// e.g. "00" is 3-bit majority and "0101" is 7-bit parity.
    Fidelity {
        /// Half truth table as a bitstring; its length fixes n = 2 len - 1.
        table: String,
        /// Restrict the worst case to these input weights, e.g. "0,1,2".
        #[arg(long)]
        promise_weights: Option<String>,
        /// Emit a JSON object instead of text.
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit a CSV row instead of text.
        #[arg(long)]
        csv: bool,
    },
    /// Exact majority fidelities as CSV: recursion, linear program, and
    /// their agreement, for odd n up to the bound.
    MajorityTable {
        /// Largest (odd) bit count to include.
        n_max: usize,
    },
    /// Synthesize the exact Choi matrix of the optimal or the ideal
    /// channel for a truth table (n <= 5) and print it as JSON.
    Choi {
        /// Half truth table as a bitstring.
        table: String,
        /// Optimal physical channel (fidelities from the linear program).
        #[arg(long, conflicts_with = "ideal")]
        optimal: bool,
        /// Ideal fidelity-one extension (generally not a channel).
        #[arg(long)]
        ideal: bool,
        /// Compare against the embedded reference matrix instead of printing.
        #[arg(long)]
        golden: bool,
    },
    /// Simulate the optimal channel for a truth table (n <= 7) and emit a
    /// CSV comparing simulated against exact per-weight fidelities.
    Simulate {
        /// Half truth table as a bitstring.
        table: String,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Corrupt one reference value to prove failures are caught.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Fidelity {
            table,
            promise_weights,
            json,
            csv,
        } => cmd_fidelity(&table, promise_weights.as_deref(), json, csv),
        Command::MajorityTable { n_max } => cmd_majority_table(n_max),
        Command::Simulate { table } => cmd_simulate(&table),
        Command::Choi {
            table,
            optimal,
            ideal,
            golden,
        } => cmd_choi(&table, optimal, ideal, golden),
        Command::Verify {
            level,
            inject_fault,
        } => cmd_verify(level, cli.seed, inject_fault),
    }
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn cmd_fidelity(table: &str, promise: Option<&str>, json: bool, csv: bool) -> ExitCode {
    let f = match BoolFn::parse(table) {
        Ok(f) => f,
        Err(e) => return usage_error(&e.to_string()),
    };
    let weights: Option<Vec<usize>> = match promise {
        None => None,
        Some(list) => {
            let parsed: Result<Vec<usize>, _> =
                list.split(',').map(|s| s.trim().parse::<usize>()).collect();
            match parsed {
                Ok(w) => Some(w),
                Err(_) => return usage_error("promise weights must be a comma-separated list of integers"),
            }
        }
    };
    let solution = match solve_lp(&f, weights.as_deref()) {
        Ok(s) => s,
        Err(e) => return usage_error(&e.to_string()),
    };
    let decimal = rat_to_f64(&solution.fidelity);
    if json {
        let value = serde_json::json!({
            "table": f.table_string(),
            "n": f.n(),
            "fidelity": format_rat(&solution.fidelity),
            "fidelity_decimal": decimal,
            "t": solution.t.iter().map(format_rat).collect::<Vec<_>>(),
            "c": solution.per_weight.iter().map(format_rat).collect::<Vec<_>>(),
        });
        println!("{value}");
    } else if csv {
        println!(
            "{},{},{:.6},\"{}\",\"{}\"",
            f.table_string(),
            format_rat(&solution.fidelity),
            decimal,
            solution.t.iter().map(format_rat).collect::<Vec<_>>().join(" "),
            solution.per_weight.iter().map(format_rat).collect::<Vec<_>>().join(" "),
        );
    } else {
        println!("function: {} (n = {})", f.table_string(), f.n());
        println!("F = {} \u{2248} {:.6}", format_rat(&solution.fidelity), decimal);
        println!(
            "t = [{}]",
            solution.t.iter().map(format_rat).collect::<Vec<_>>().join(", ")
        );
        println!(
            "c = [{}]",
            solution.per_weight.iter().map(format_rat).collect::<Vec<_>>().join(", ")
        );
    }
    ExitCode::SUCCESS
}

fn cmd_majority_table(n_max: usize) -> ExitCode {
    if n_max.is_multiple_of(2) || n_max == 0 {
        return usage_error("the bound must be odd");
    }
    println!("n,fidelity,decimal,methods_agree");
    for n in (1..=n_max).step_by(2) {
        let recursion = match majority_fidelity_recursive(n) {
            Ok(r) => r,
            Err(e) => return usage_error(&e.to_string()),
        };
        let lp = match BoolFn::majority(n).and_then(|f| solve_lp(&f, None)) {
            Ok(s) => s.fidelity,
            Err(e) => return usage_error(&e.to_string()),
        };
        println!(
            "{n},{},{:.6},{}",
            format_rat(&recursion),
            rat_to_f64(&recursion),
            recursion == lp
        );
    }
    ExitCode::SUCCESS
}

fn cmd_simulate(table: &str) -> ExitCode {
    let f = match BoolFn::parse(table) {
        Ok(f) => f,
        Err(e) => return usage_error(&e.to_string()),
    };
    if f.n() > qmv::schur::MAX_QUBITS {
        eprintln!("error: simulation supports up to {} qubits", qmv::schur::MAX_QUBITS);
        return ExitCode::from(EXIT_UNSUPPORTED_SIZE);
    }
    let solution = match solve_lp(&f, None) {
        Ok(s) => s,
        Err(e) => return usage_error(&e.to_string()),
    };
    let basis = match qmv::schur::build_schur_basis(f.n()) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_UNSUPPORTED_SIZE);
        }
    };
    match qmv::sim::fidelity_comparison_csv(&basis, &f, &solution.t, &solution.per_weight) {
        Ok(csv) => {
            print!("{csv}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VERIFY_FAILURE)
        }
    }
}

fn cmd_choi(table: &str, optimal: bool, ideal: bool, compare_golden: bool) -> ExitCode {
    if optimal == ideal {
        return usage_error("choose exactly one of --optimal or --ideal");
    }
    let f = match BoolFn::parse(table) {
        Ok(f) => f,
        Err(e) => return usage_error(&e.to_string()),
    };
    if f.n() > MAX_SYNTH_BITS {
        eprintln!(
            "error: synthesis supports up to {MAX_SYNTH_BITS} bits, table {table:?} means n = {}",
            f.n()
        );
        return ExitCode::from(EXIT_UNSUPPORTED_SIZE);
    }
    let result = if ideal {
        ideal_choi(f.n(), &f)
    } else {
        match solve_lp(&f, None) {
            Ok(s) => synthesize_choi(f.n(), &f, &s.per_weight),
            Err(e) => return usage_error(&e.to_string()),
        }
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VERIFY_FAILURE);
        }
    };
    if compare_golden {
        let name = match reference_name(table) {
            Some(name) => name,
            None => return usage_error(&format!("no reference matrix for table {table:?}")),
        };
        let reference = if ideal { golden::ideal_choi() } else { golden::optimal_choi() };
        let reference = match reference {
            Ok(map) => map,
            Err(e) => return usage_error(&e.to_string()),
        };
        if result.matrix == reference[name] {
            println!(
                "golden match: {name} ({})",
                if ideal { "ideal" } else { "optimal" }
            );
            return ExitCode::SUCCESS;
        }
        eprintln!("FAIL golden comparison: synthesized matrix deviates from reference {name}");
        return ExitCode::from(EXIT_VERIFY_FAILURE);
    }
    let mut value = result.matrix.to_json();
    value["is_cp"] = serde_json::json!(result.is_cp);
    value["fidelities"] = serde_json::json!(
        result.fidelities.iter().map(format_rat).collect::<Vec<_>>()
    );
    println!("{value}");
    ExitCode::SUCCESS
}

fn reference_name(table: &str) -> Option<&'static str> {
    ["ID", "NOT", "MAJ3", "PAR3", "NPAR3", "NMAJ3"]
        .into_iter()
        .find(|name| golden::function_table(name) == Some(table))
}

fn cmd_verify(level: LevelArg, seed: u64, inject_fault: bool) -> ExitCode {
    let level = match level {
        LevelArg::Quick => checks::Level::Quick,
        LevelArg::Full => checks::Level::Full,
    };
    let started = std::time::Instant::now();
    let mut failures = 0usize;
    let all = checks::all_checks();
    let enabled: Vec<_> = all.iter().filter(|c| checks::enabled(c, level)).collect();

    // Fault injection reroutes the first check through a corrupted table.
    let mut results: Vec<(String, bool, Result<(), String>)> = Vec::new();
    if inject_fault {
        results.push((
            "table3".into(),
            false,
            checks::check_table3_inner(true),
        ));
    }

    // Fan the independent checks across threads.
    let outcomes: Vec<(String, bool, Result<(), String>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = enabled
            .iter()
            .filter(|c| !(inject_fault && c.name == "table3"))
            .map(|check| {
                let name = check.name.to_string();
                let conjecture = check.conjecture;
                let run = check.run;
                scope.spawn(move || (name, conjecture, run(level, seed)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check panicked")).collect()
    });
    results.extend(outcomes);

    for (name, conjecture, outcome) in &results {
        match (conjecture, outcome) {
            (false, Ok(())) => println!("PASS {name}"),
            (false, Err(e)) => {
                println!("FAIL {name}: {e}");
                failures += 1;
            }
            (true, Ok(())) => println!("CONJECTURE {name}: holds"),
            (true, Err(e)) => println!("CONJECTURE {name}: VIOLATED ({e})"),
        }
    }
    let elapsed = started.elapsed();
    if failures == 0 {
        println!("verify: all {} checks passed in {elapsed:.2?}", results.len());
        ExitCode::SUCCESS
    } else {
        println!("verify: {failures} of {} checks FAILED in {elapsed:.2?}", results.len());
        ExitCode::from(EXIT_VERIFY_FAILURE)
    }
}
