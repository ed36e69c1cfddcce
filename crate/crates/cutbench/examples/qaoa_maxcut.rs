//! Solves MaxCut on the smallest layered graph with QAOA, once on the full
//! circuit and once on a cut circuit stitched by channel sampling, and
//! checks both answers against brute force.

use cutbench::{brute_force_maxcut, default_graph, run_qaoa, QaoaMethod, QaoaRunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = default_graph("A")?;
    let (optimum, maximizers) = brute_force_maxcut(&graph)?;
    println!(
        "graph A: {} vertices, optimum {} (for example {})\n",
        graph.num_vertices(),
        optimum,
        maximizers[0]
    );

    for method in [QaoaMethod::Uncut, QaoaMethod::CliffordCut] {
        let mut config = QaoaRunConfig::new(method, 3_000, 42);
        config.spsa.max_iter = 30;
        config.device_limit = Some(5);
        let outcome = run_qaoa(&graph, &config)?;
        println!("{}:", method.name());
        println!(
            "  {} optimizer evaluations, best angles {:?}",
            outcome.evaluations,
            outcome
                .theta
                .iter()
                .map(|t| (t * 100.0).round() / 100.0)
                .collect::<Vec<_>>()
        );
        println!(
            "  answer {} (cut value {}, ranked {})",
            outcome.answer,
            cutbench::cut_value(&graph, &outcome.answer)?,
            outcome.rank.name()
        );
        println!("  expected cut value of final run: {:.3}", outcome.expected);
        if let Some(mass) = outcome.quasi_mass {
            println!("  raw reconstruction mass: {mass:+.3}");
        }
        println!();
    }
    Ok(())
}
