//! End-to-end acceptance suite: one line per criterion, with a pinned time
//! budget each.  Run with `--nocapture` to see per-criterion timing.

use std::time::Instant;

use sslevel::verify::checks;

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    for c in checks() {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        match (&result, in_budget) {
            (Ok(()), true) => {
                println!(
                    "PASS {:<12} {:>8.2?} (budget {:?}) - {}",
                    c.name, elapsed, c.budget, c.description
                );
            }
            (Ok(()), false) => {
                println!(
                    "FAIL {:<12} {:>8.2?} exceeded budget {:?} - {}",
                    c.name, elapsed, c.budget, c.description
                );
                failures.push(format!("{}: over budget ({elapsed:?})", c.name));
            }
            (Err(msg), _) => {
                println!("FAIL {:<12} {:>8.2?} - {}", c.name, elapsed, msg);
                failures.push(format!("{}: {msg}", c.name));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
