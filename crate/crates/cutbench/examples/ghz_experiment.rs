//! Runs a small version of the GHZ cutting benchmark: three reconstruction
//! strategies at two shot budgets, Hellinger distance to the ideal
//! distribution averaged over repetitions, everything derived from one
//! master seed.

use cutbench::bench::{records_to_csv, run_ghz_experiment, GhzConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = GhzConfig::new(42);
    config.budgets = vec![2_000, 20_000];
    config.reps = 5;

    let records = run_ghz_experiment(&config)?;
    println!("mean hellinger over {} repetitions:", config.reps);
    for record in records.iter().filter(|r| r.rep == -1) {
        if let Some(mean) = record.metric("hellinger_mean") {
            println!(
                "  {:<8} at budget {:>6}: {mean:.4} (stderr {:.4})",
                record.method,
                record.budget,
                record.metric("hellinger_stderr").unwrap_or(0.0)
            );
        }
    }

    let csv = records_to_csv(&records);
    println!("\nfirst rows of the CSV report:");
    for line in csv.lines().take(6) {
        println!("  {line}");
    }
    println!("  ... {} rows total", csv.lines().count() - 1);
    Ok(())
}
