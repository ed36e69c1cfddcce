//! Samples the same circuit with and without the stochastic Pauli noise
//! model and measures how far noise pushes the histogram from the ideal
//! distribution.

use cutbench::{
    exact_distribution, ghz_benchmark_circuit_zeroed, hellinger, sample, NoiseModel,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let circuit = ghz_benchmark_circuit_zeroed(5)?;
    let ideal = exact_distribution(&circuit)?;
    let shots = 50_000;

    let clean = sample(&circuit, shots, 1, None)?.to_distribution()?;
    println!(
        "ideal sampling:    hellinger {:.4} (pure shot noise)",
        hellinger(&clean, &ideal)?
    );

    let preset = NoiseModel::brisbane_like();
    let noisy = sample(&circuit, shots, 1, Some(&preset))?.to_distribution()?;
    println!(
        "{}:     hellinger {:.4}",
        preset.label,
        hellinger(&noisy, &ideal)?
    );

    let rough = NoiseModel::custom(3e-3, 8e-2, 5e-2);
    let rougher = sample(&circuit, shots, 1, Some(&rough))?.to_distribution()?;
    println!(
        "10x stronger:      hellinger {:.4}",
        hellinger(&rougher, &ideal)?
    );

    println!("\nnoisy histogram of the plain GHZ state at preset rates:");
    let mut top: Vec<_> = noisy.probs().iter().collect();
    top.sort_by(|a, b| b.1.total_cmp(a.1));
    for (key, p) in top.iter().take(6) {
        println!("  {key}  {p:.4}");
    }
    Ok(())
}
