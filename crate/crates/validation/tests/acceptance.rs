//! Runs every acceptance criterion, printing one PASS or FAIL line each.
//! The process fails if any criterion fails.
//!
//! Arguments that parse as numbers select criteria by number.

use std::process::ExitCode;

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut ran = 0;
    let mut failed = 0;
    for c in sidur_validation::criteria() {
        if !wanted.is_empty() && !wanted.contains(&c.id) {
            continue;
        }
        let report = c.evaluate();
        println!("{report}");
        ran += 1;
        if !report.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
