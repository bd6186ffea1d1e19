//! External SAT solver bridge.
//!
//! Solvers are invoked through a command template containing a `{cnf}`
//! placeholder, never linked, so any DIMACS-speaking solver works. The
//! bridge enforces a wall-clock timeout and parses the standard
//! `s SATISFIABLE` / `s UNSATISFIABLE` verdict, `v` model lines, and
//! conflict/decision counters from recognizable statistics lines.

use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SolverStatus {
    Sat,
    Unsat,
    Unknown,
    Timeout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOutcome {
    pub status: SolverStatus,
    pub model: Option<Vec<bool>>,
    pub conflicts: Option<u64>,
    pub decisions: Option<u64>,
    pub wall_ms: u64,
}

/// True when the template names the input file somewhere.
pub fn template_is_valid(template: &str) -> bool {
    template.contains("{cnf}")
}

/// Runs the templated command on a DIMACS file. Spawn failures and
/// non-conforming output degrade to `Unknown`, timeouts to `Timeout`; this
/// never panics on solver misbehavior.
pub fn run_solver(
    dimacs: &Path,
    template: &str,
    timeout: Duration,
    num_vars: u32,
) -> SolverOutcome {
    let started = Instant::now();
    let path = dimacs.to_string_lossy();
    let tokens: Vec<String> = template
        .split_whitespace()
        .map(|t| t.replace("{cnf}", &path))
        .collect();
    let unknown = |wall_ms| SolverOutcome {
        status: SolverStatus::Unknown,
        model: None,
        conflicts: None,
        decisions: None,
        wall_ms,
    };
    let Some((program, args)) = tokens.split_first() else {
        return unknown(0);
    };
    let child = Command::new(program)
        .args(args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(_) => return unknown(elapsed_ms(started)),
    };

    // Drain stdout on a separate thread so a chatty solver cannot fill the
    // pipe and deadlock against the timeout poll.
    let mut stdout = child.stdout.take().expect("stdout piped");
    let reader = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stdout.read_to_string(&mut buf);
        buf
    });

    let finished = wait_with_timeout(&mut child, timeout);
    let wall_ms = elapsed_ms(started);
    if !finished {
        let _ = child.kill();
        let _ = child.wait();
        let _ = reader.join();
        return SolverOutcome {
            status: SolverStatus::Timeout,
            model: None,
            conflicts: None,
            decisions: None,
            wall_ms,
        };
    }
    let output = reader.join().unwrap_or_default();
    let parsed = parse_output(&output, num_vars);
    SolverOutcome {
        status: parsed.0,
        model: parsed.1,
        conflicts: parsed.2,
        decisions: parsed.3,
        wall_ms,
    }
}

fn elapsed_ms(started: Instant) -> u64 {
    started.elapsed().as_millis() as u64
}

fn wait_with_timeout(child: &mut Child, timeout: Duration) -> bool {
    let deadline = Instant::now() + timeout;
    loop {
        match child.try_wait() {
            Ok(Some(_)) => return true,
            Ok(None) => {
                if Instant::now() >= deadline {
                    return false;
                }
                std::thread::sleep(Duration::from_millis(10));
            }
            Err(_) => return true,
        }
    }
}

type Parsed = (SolverStatus, Option<Vec<bool>>, Option<u64>, Option<u64>);

fn parse_output(text: &str, num_vars: u32) -> Parsed {
    let mut status = SolverStatus::Unknown;
    let mut lits: Vec<i64> = Vec::new();
    let mut conflicts = None;
    let mut decisions = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            if rest.contains("UNSATISFIABLE") {
                status = SolverStatus::Unsat;
            } else if rest.contains("SATISFIABLE") {
                status = SolverStatus::Sat;
            }
        } else if line == "v" || line.starts_with("v ") {
            lits.extend(
                line[1..]
                    .split_whitespace()
                    .filter_map(|t| t.parse::<i64>().ok()),
            );
        } else {
            let lower = line.to_lowercase();
            if lower.contains("conflicts") {
                conflicts = first_integer(line).or(conflicts);
            }
            if lower.contains("decisions") {
                decisions = first_integer(line).or(decisions);
            }
        }
    }
    let model = if status == SolverStatus::Sat {
        let mut assignment = vec![false; num_vars as usize];
        for &lit in &lits {
            let var = lit.unsigned_abs();
            if lit != 0 && var <= num_vars as u64 {
                assignment[var as usize - 1] = lit > 0;
            }
        }
        Some(assignment)
    } else {
        None
    };
    (status, model, conflicts, decisions)
}

fn first_integer(line: &str) -> Option<u64> {
    line.split_whitespace().find_map(|t| t.parse::<u64>().ok())
}
