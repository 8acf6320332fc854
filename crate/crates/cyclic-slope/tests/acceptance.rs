use std::process::ExitCode;

use cyclic_slope::suite::{run, SuiteConfig};
use cyclic_slope::with_thread_pool;

fn main() -> ExitCode {
    let config = SuiteConfig::default();
    let report = with_thread_pool(|| run(&config));
    println!(
        "acceptance sweep: orders {:?}, up to {} nodes, contacts up to order {}, {} germs, {} models",
        config.orders, config.max_nodes, config.max_contact, report.germs, report.models
    );
    for c in &report.criteria {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2}: {status}  {} ({} checks, {} failures)", c.id, c.title, c.checked, c.failure_count);
        for f in &c.failures {
            println!("    {f}");
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
