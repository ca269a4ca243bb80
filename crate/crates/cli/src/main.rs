use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod demo;

/// Context-chain ledger: scenario runner, replica verifier and demo.
#[derive(Parser)]
#[command(name = "erasable-ledger", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file through the deterministic network simulator.
    Run {
        /// Path to the scenario JSON file.
        scenario: PathBuf,
        /// Write the run's trace as line-delimited JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write each node's final replica under this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Load a replica directory and verify its integrity.
    Verify {
        /// Replica directory written by `run --out`.
        replica_dir: PathBuf,
    },
    /// Walk through the two-organization / two-person example.
    Demo {
        /// Restrict the walk-through to one endorsement policy.
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
    },
    /// Print the branch-count upper bound for k organizations and m persons.
    Branches { k: u32, m: u32 },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    /// Non-response counts as a veto.
    SilenceVeto,
    /// Non-response past the timeout counts as agreement.
    SilenceAgree,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::default().filter_or("ERASABLE_LEDGER_LOG", "warn"),
    )
    .init();

    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            trace,
            out,
            seed,
        } => cmd_run(&scenario, trace.as_deref(), out.as_deref(), seed),
        Command::Verify { replica_dir } => cmd_verify(&replica_dir),
        Command::Demo { policy } => demo::cmd_demo(policy),
        Command::Branches { k, m } => cmd_branches(k, m),
    }
}

fn cmd_run(
    scenario_path: &std::path::Path,
    trace_out: Option<&std::path::Path>,
    replica_out: Option<&std::path::Path>,
    seed: Option<u64>,
) -> ExitCode {
    use erasable_ledger::scenario::Scenario;
    use erasable_ledger::simnet::{check_convergence, run_scenario_with_seed};
    use erasable_ledger::verify_tree;

    let json = match std::fs::read_to_string(scenario_path) {
        Ok(json) => json,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", scenario_path.display());
            return ExitCode::from(2);
        }
    };
    let scenario = match Scenario::from_json(&json) {
        Ok(scenario) => scenario,
        Err(e) => {
            eprintln!("error: {}: {e}", scenario_path.display());
            return ExitCode::from(2);
        }
    };
    let seed = seed.unwrap_or(scenario.seed);
    log::info!("running {} with seed {seed}", scenario_path.display());

    let outcome = match run_scenario_with_seed(&scenario, seed) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: simulation failed: {e}");
            return ExitCode::from(2);
        }
    };

    if let Some(path) = trace_out {
        if let Err(e) = std::fs::write(path, outcome.trace.to_jsonl()) {
            eprintln!("error: cannot write trace {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Some(dir) = replica_out {
        for node in &outcome.nodes {
            let node_dir = dir.join(&node.node_id);
            if let Err(e) =
                erasable_ledger::storage::save_replica(&node.replica, &node.journal, &node_dir)
            {
                eprintln!("error: cannot write replica {}: {e}", node_dir.display());
                return ExitCode::from(2);
            }
        }
    }

    let convergent = check_convergence(&outcome.nodes);
    let mut all_valid = true;
    for node in &outcome.nodes {
        let report = verify_tree(&node.replica);
        if !report.ok {
            all_valid = false;
            eprintln!("replica {} fails verification:", node.node_id);
            for violation in &report.violations {
                eprintln!("  {violation}");
            }
        }
    }

    println!(
        "events traced: {}; nodes: {}; convergent: {}; all replicas valid: {}",
        outcome.trace.records.len(),
        outcome.nodes.len(),
        convergent,
        all_valid
    );
    for node in &outcome.nodes {
        println!(
            "  {}: {} chains, {} journal entries",
            node.node_id,
            node.replica.chains.len(),
            node.journal.len()
        );
    }

    if convergent && all_valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_verify(replica_dir: &std::path::Path) -> ExitCode {
    use erasable_ledger::storage::load_replica;
    use erasable_ledger::LedgerError;

    match load_replica(replica_dir) {
        Ok((tree, journal)) => {
            println!(
                "ok: network {}, {} chains, {} journal entries",
                tree.network_id,
                tree.chains.len(),
                journal.len()
            );
            ExitCode::SUCCESS
        }
        Err(LedgerError::IntegrityFailure { report }) => {
            eprintln!(
                "integrity failure: {} violation(s)",
                report.violations.len()
            );
            for violation in &report.violations {
                eprintln!("  {violation}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_branches(k: u32, m: u32) -> ExitCode {
    match erasable_ledger::placement::max_branch_count(k, m) {
        Ok(count) => {
            println!("{count}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
