//! Runs a small version of the QAOA benchmark on graph A: uncut against
//! cut-and-stitched execution, reporting how often each lands on the best
//! answer.

use cutbench::bench::{run_qaoa_experiment, QaoaExperimentConfig};
use cutbench::default_graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = QaoaExperimentConfig::new(42, default_graph("A")?, "A");
    config.budgets = vec![2_000];
    config.reps_uncut = 4;
    config.reps_cut = 4;
    config.max_iter = 20;

    let records = run_qaoa_experiment(&config)?;
    for record in records.iter().filter(|r| r.rep == -1) {
        println!(
            "{:<12} budget {}: best {:.2}, second {:.2}, third {:.2}, wrong {:.2}, \
             mean expected cost {:.3}",
            record.method,
            record.budget,
            record.metric("best_fraction").unwrap_or(0.0),
            record.metric("second_fraction").unwrap_or(0.0),
            record.metric("third_fraction").unwrap_or(0.0),
            record.metric("wrong_fraction").unwrap_or(0.0),
            record.metric("expected_cost_mean").unwrap_or(0.0),
        );
    }

    println!("\nper-repetition ranks (1 = best answer found):");
    for record in records.iter().filter(|r| r.rep >= 0) {
        println!(
            "  {:<12} rep {}: rank {}, seed {}",
            record.method,
            record.rep,
            record.metric("rank").unwrap_or(0.0),
            record.seed
        );
    }
    Ok(())
}
