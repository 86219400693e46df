use std::process::ExitCode;
use std::time::Instant;

use convrep::suite::{run_all, Lab};

fn main() -> ExitCode {
    let start = Instant::now();
    let lab = Lab::standard().expect("standard setup");
    let outcomes = run_all(&lab);
    for o in &outcomes {
        println!(
            "[{}] criterion {:>2} {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail
        );
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        outcomes.len() - failed.len(),
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
