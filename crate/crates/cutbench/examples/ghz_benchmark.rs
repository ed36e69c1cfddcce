//! Builds the dressed 5-qubit GHZ benchmark circuit, shows where its cut
//! variant splits, and compares the fragment shapes to the uncut circuit.

use cutbench::{exact_distribution, fragment, ghz_benchmark_circuit, ghz_cut_circuit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = 11;
    let uncut = ghz_benchmark_circuit(5, seed)?;
    let cut = ghz_cut_circuit(5, seed)?;

    println!(
        "uncut: {} qubits, {} operations",
        uncut.num_qubits(),
        uncut.ops().len()
    );
    println!("cut version carries {} cut marker(s)", cut.num_cuts());

    let exact = exact_distribution(&uncut)?;
    let mut top: Vec<_> = exact.probs().iter().collect();
    top.sort_by(|a, b| b.1.total_cmp(a.1));
    println!("\nheaviest outcomes of the uncut circuit:");
    for (key, p) in top.iter().take(5) {
        println!("  {key}  {p:.4}");
    }

    let frags = fragment(&cut, None)?;
    println!("\nfragments after cutting:");
    for (i, f) in frags.fragments.iter().enumerate() {
        println!(
            "  fragment {i}: {} qubits, measures out {} boundary wire(s), \
             prepares in {} boundary wire(s)",
            f.num_qubits(),
            f.out_boundaries.len(),
            f.in_boundaries.len()
        );
    }
    println!(
        "qubit totals: uncut {}, fragments {} (one extra wire per cut)",
        uncut.num_qubits(),
        frags.fragments.iter().map(|f| f.num_qubits()).sum::<usize>()
    );
    Ok(())
}
