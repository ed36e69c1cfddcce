//! Long-format CSV serialization of experiment records.
//!
//! One row per metric, fixed nine-column schema. Every field the harness
//! writes is a plain token (names, labels, numbers), so no quoting is
//! needed; apart from wall-time metrics the bytes are a pure function of
//! the records.

use super::RunRecord;

/// Column header, also the first line of every report.
pub const CSV_HEADER: &str = "experiment,method,graph,budget,noise,rep,seed,metric_name,metric_value";

fn record_key<'a>(r: &'a RunRecord) -> (&'a str, &'a str, &'a str, u64, i64) {
    (&r.experiment, &r.graph, &r.method, r.budget, r.rep)
}

/// Serializes records to CSV text, sorted by experiment, graph, method,
/// budget, and repetition (aggregates, with `rep = -1`, lead each cell).
/// Metrics keep the order their record listed them in.
pub fn records_to_csv(records: &[RunRecord]) -> String {
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by(|a, b| record_key(a).cmp(&record_key(b)));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted {
        for (name, value) in &r.metrics {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.experiment, r.method, r.graph, r.budget, r.noise, r.rep, r.seed, name, value
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(method: &str, budget: u64, rep: i64, metrics: &[(&str, f64)]) -> RunRecord {
        RunRecord {
            experiment: "ghz".to_string(),
            method: method.to_string(),
            graph: "-".to_string(),
            budget,
            noise: "none".to_string(),
            rep,
            seed: 42,
            metrics: metrics
                .iter()
                .map(|&(n, v)| (n.to_string(), v))
                .collect(),
        }
    }

    #[test]
    fn rows_follow_the_schema_and_sort_order() {
        let records = vec![
            record("pauli", 2000, 1, &[("hellinger", 0.25)]),
            record("clifford", 1000, 0, &[("hellinger", 0.5), ("quasi_mass", 1.02)]),
            record("clifford", 1000, -1, &[("hellinger_mean", 0.5)]),
        ];
        let csv = records_to_csv(&records);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        // Sorted: clifford summary first, then its rep 0 rows, then pauli.
        assert_eq!(lines[1], "ghz,clifford,-,1000,none,-1,42,hellinger_mean,0.5");
        assert_eq!(lines[2], "ghz,clifford,-,1000,none,0,42,hellinger,0.5");
        assert_eq!(lines[3], "ghz,clifford,-,1000,none,0,42,quasi_mass,1.02");
        assert_eq!(lines[4], "ghz,pauli,-,2000,none,1,42,hellinger,0.25");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn serialization_is_stable() {
        let records = vec![
            record("pauli", 1000, 0, &[("hellinger", 0.123456789012345)]),
            record("pauli", 1000, 1, &[("hellinger", 1.0 / 3.0)]),
        ];
        assert_eq!(records_to_csv(&records), records_to_csv(&records));
        // Input order does not matter.
        let reversed: Vec<RunRecord> = records.iter().rev().cloned().collect();
        assert_eq!(records_to_csv(&records), records_to_csv(&reversed));
    }
}
