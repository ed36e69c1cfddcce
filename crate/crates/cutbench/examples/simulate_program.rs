//! Parses a circuit from the `.qcut` text format, prints its exact output
//! distribution and a sampled histogram, and round-trips it back to text.

use cutbench::{exact_distribution, parse_program, sample};

const PROGRAM: &str = "\
qreg q[3];
creg c[3];
h q[0];
cx q[0],q[1];
rz(pi/4) q[1];
cx q[1],q[2];
measure q[0] -> c[0];
measure q[1] -> c[1];
measure q[2] -> c[2];
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let circuit = parse_program(PROGRAM)?;
    println!(
        "parsed {} qubits, {} operations",
        circuit.num_qubits(),
        circuit.ops().len()
    );

    let exact = exact_distribution(&circuit)?;
    println!("\nexact distribution:");
    for (key, p) in exact.probs() {
        println!("  {key}  {p:.6}");
    }

    let counts = sample(&circuit, 10_000, 7, None)?;
    println!("\n10000 shots, seed 7:");
    for (key, n) in counts.counts() {
        println!("  {key}  {n}");
    }

    let text = cutbench::emit_program(&circuit);
    assert_eq!(parse_program(&text)?, circuit);
    println!("\ncanonical form round-trips:\n{text}");
    Ok(())
}
