//! Shows how the QAOA circuit builder fits a layered graph onto a small
//! device: hub vertices are cut so every fragment stays within the qubit
//! limit, and the number of cuts grows with the graph.

use cutbench::{build_qaoa_circuit, default_graph, fragment, QaoaParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = QaoaParams::new(vec![0.4], vec![0.9])?;
    let limit = 5;

    for name in ["A", "B", "C"] {
        let graph = default_graph(name)?;
        let circuit = build_qaoa_circuit(&graph, &params, Some(limit))?;
        let frags = fragment(&circuit, Some(limit))?;
        let sizes: Vec<usize> = frags.fragments.iter().map(|f| f.num_qubits()).collect();
        println!(
            "graph {name}: {} vertices, {} edges -> {} cut(s), fragment sizes {:?}",
            graph.num_vertices(),
            graph.num_edges(),
            circuit.num_cuts(),
            sizes
        );
    }

    println!("\nwithout a device limit the same builder emits no cuts:");
    let graph = default_graph("C")?;
    let uncut = build_qaoa_circuit(&graph, &params, None)?;
    println!(
        "graph C uncut: {} qubits, {} cuts",
        uncut.num_qubits(),
        uncut.num_cuts()
    );

    let too_small = build_qaoa_circuit(&graph, &params, Some(3));
    println!("forcing a 3-qubit device fails: {}", too_small.unwrap_err());
    Ok(())
}
