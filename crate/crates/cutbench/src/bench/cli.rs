//! Command-line front end.
//!
//! Four subcommands: `ghz` and `qaoa` run the two experiments and emit CSV,
//! `cut` fragments a circuit file and reconstructs it with one cutting
//! method, `simulate` runs a circuit file directly. Global flags can also
//! come from a `key=value` config file via `--config`; explicit flags win
//! over file entries. The master seed in effect is echoed to stderr so any
//! report can be reproduced.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime failure.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::qaoa::{default_graph, Graph, QaoaMethod};
use crate::qcut::parse_program;
use crate::sim::{exact_distribution_with, sample_with, NoiseModel, SimOptions};
use crate::wirecut::{
    execute_pauli_configs_sampled, fragment, pauli_config_count, reconstruct_pauli,
    run_randomized_cut, CutVariant, FragmentSet, QuasiDistribution,
};

use super::{
    allocate_shots, records_to_csv, run_ghz_experiment, run_qaoa_experiment, GhzConfig,
    QaoaExperimentConfig,
};

/// Seed used when neither the command line nor the config file names one.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "cutbench",
    version,
    about = "Wire-cutting workbench: cut, reconstruct, and benchmark circuits"
)]
struct Cli {
    /// Master seed; every random choice derives from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write CSV output to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Noise preset: none or brisbane-like.
    #[arg(long, global = true, value_name = "PRESET")]
    noise: Option<String>,
    /// Repetitions per method-and-budget cell.
    #[arg(long, global = true, value_name = "N")]
    reps: Option<usize>,
    /// Comma-separated shot budgets.
    #[arg(long, global = true, value_name = "N,N,...")]
    budgets: Option<String>,
    /// Qubit capacity a single fragment must fit in.
    #[arg(long, global = true, value_name = "N")]
    device_limit: Option<usize>,
    /// key=value file supplying defaults for any flag.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// GHZ reconstruction accuracy for all three cutting methods.
    Ghz,
    /// End-to-end QAOA MaxCut comparison on one graph.
    Qaoa {
        /// Built-in graph name (A, B, C) or an edge-list file.
        #[arg(long, value_name = "NAME|FILE")]
        graph: Option<String>,
        /// Repetitions for cut methods; defaults to --reps, or fewer under
        /// noise.
        #[arg(long, value_name = "N")]
        cut_reps: Option<usize>,
        /// Comma-separated methods: uncut, pauli_cut, clifford_cut.
        #[arg(long, value_name = "M,M")]
        methods: Option<String>,
        /// Optimizer iterations per run.
        #[arg(long, value_name = "N")]
        max_iter: Option<usize>,
        /// Circuit depth (layers of cost plus mixer).
        #[arg(long, value_name = "N")]
        p: Option<usize>,
    },
    /// Fragment a circuit file and reconstruct it with one cutting method.
    Cut {
        /// Circuit file in the qcut text format.
        file: PathBuf,
        /// pauli, clifford, or rotation.
        #[arg(long, value_name = "METHOD")]
        method: Option<String>,
        /// Shot budget for the reconstruction.
        #[arg(long, value_name = "N")]
        shots: Option<u64>,
    },
    /// Run a circuit file on the simulator.
    Simulate {
        /// Circuit file in the qcut text format.
        file: PathBuf,
        /// Samples to draw; omit for the exact distribution.
        #[arg(long, value_name = "N")]
        shots: Option<u64>,
    },
}

enum CliError {
    Usage(String),
    Runtime(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn runtime(err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(err.to_string())
}

/// Parses arguments, runs the command, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = std::io::stdout();
    match execute(cli, &mut stdout) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

const CONFIG_KEYS: [&str; 13] = [
    "seed",
    "out",
    "noise",
    "reps",
    "budgets",
    "device_limit",
    "graph",
    "cut_reps",
    "methods",
    "max_iter",
    "p",
    "method",
    "shots",
];

/// Parses a `key=value` config file. Blank lines and `#` comments are
/// skipped; keys must be known flag names.
fn parse_config_file(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim().to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(usage(format!("config line {}: unknown key `{key}`", i + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

/// Flag and config-file settings merged, command line first.
struct Settings {
    file: HashMap<String, String>,
}

impl Settings {
    fn string(&self, key: &str, cli: Option<String>) -> Option<String> {
        cli.or_else(|| self.file.get(key).cloned())
    }

    fn parsed<V: std::str::FromStr>(&self, key: &str, cli: Option<V>) -> Result<Option<V>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => match self.file.get(key) {
                None => Ok(None),
                Some(raw) => raw
                    .parse()
                    .map(Some)
                    .map_err(|_| usage(format!("config key `{key}`: bad value `{raw}`"))),
            },
        }
    }
}

fn parse_noise(raw: &str) -> Result<Option<NoiseModel>, CliError> {
    match raw.trim() {
        "none" | "ideal" => Ok(None),
        "brisbane-like" | "brisbane_like" => Ok(Some(NoiseModel::brisbane_like())),
        other => Err(usage(format!(
            "unknown noise preset `{other}` (expected none or brisbane-like)"
        ))),
    }
}

fn parse_budgets(raw: &str) -> Result<Vec<u64>, CliError> {
    let budgets: Result<Vec<u64>, _> = raw
        .split(',')
        .map(|part| part.trim().parse::<u64>())
        .collect();
    match budgets {
        Ok(b) if !b.is_empty() && b.iter().all(|&x| x > 0) => Ok(b),
        _ => Err(usage(format!(
            "bad budget list `{raw}` (expected comma-separated positive integers)"
        ))),
    }
}

fn parse_methods(raw: &str) -> Result<Vec<QaoaMethod>, CliError> {
    raw.split(',')
        .map(|part| match part.trim().replace('-', "_").as_str() {
            "uncut" => Ok(QaoaMethod::Uncut),
            "pauli_cut" => Ok(QaoaMethod::PauliCut),
            "clifford_cut" => Ok(QaoaMethod::CliffordCut),
            other => Err(usage(format!(
                "unknown method `{other}` (expected uncut, pauli_cut, or clifford_cut)"
            ))),
        })
        .collect()
}

fn parse_cut_variant(raw: &str) -> Result<CutVariant, CliError> {
    match raw.trim() {
        "clifford" => Ok(CutVariant::Clifford),
        "rotation" => Ok(CutVariant::Rotation),
        other => Err(usage(format!(
            "unknown cutting method `{other}` (expected pauli, clifford, or rotation)"
        ))),
    }
}

/// Resolves a graph argument: a built-in name or an edge-list file path.
/// Returns the graph and its CSV label.
fn resolve_graph(raw: &str) -> Result<(Graph, String), CliError> {
    if let Ok(graph) = default_graph(raw) {
        return Ok((graph, raw.trim().to_uppercase()));
    }
    let path = Path::new(raw);
    if !path.exists() {
        return Err(usage(format!(
            "`{raw}` is neither a built-in graph (A, B, C) nor an existing file"
        )));
    }
    let graph = Graph::load(path).map_err(runtime)?;
    let label: String = path
        .file_stem()
        .map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned())
        .chars()
        .map(|c| if c == ',' { '_' } else { c })
        .collect();
    Ok((graph, label))
}

fn load_circuit(path: &Path) -> Result<crate::circuit::Circuit, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))?;
    parse_program(&text).map_err(runtime)
}

fn emit_report(
    records: &[super::RunRecord],
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let csv = records_to_csv(records);
    match out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
            writeln!(stdout, "wrote {} rows to {}", csv.lines().count() - 1, path.display())
                .map_err(runtime)?;
        }
        None => {
            stdout.write_all(csv.as_bytes()).map_err(runtime)?;
        }
    }
    Ok(())
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))?;
            parse_config_file(&text)?
        }
        None => HashMap::new(),
    };
    let settings = Settings { file };

    let seed = settings.parsed("seed", cli.seed)?.unwrap_or(DEFAULT_SEED);
    eprintln!("master seed: {seed}");
    let noise = match settings.string("noise", cli.noise) {
        Some(raw) => parse_noise(&raw)?,
        None => None,
    };
    let out = cli.out.or_else(|| settings.file.get("out").map(PathBuf::from));
    let budgets = settings
        .string("budgets", cli.budgets)
        .map(|raw| parse_budgets(&raw))
        .transpose()?;
    let reps = settings.parsed("reps", cli.reps)?;
    let device_limit = settings.parsed("device_limit", cli.device_limit)?;

    match cli.command {
        Command::Ghz => {
            let config = GhzConfig {
                master_seed: seed,
                budgets: budgets.unwrap_or_else(|| vec![1000, 10_000, 100_000]),
                reps: reps.unwrap_or(60),
                noise,
            };
            let records = run_ghz_experiment(&config).map_err(runtime)?;
            emit_report(&records, &out, stdout)
        }
        Command::Qaoa {
            graph,
            cut_reps,
            methods,
            max_iter,
            p,
        } => {
            let graph_arg = settings
                .string("graph", graph)
                .unwrap_or_else(|| "A".to_string());
            let (graph, graph_label) = resolve_graph(&graph_arg)?;
            let noisy = noise.is_some();
            let reps_uncut = reps.unwrap_or(if noisy { 20 } else { 60 });
            let reps_cut = settings
                .parsed("cut_reps", cut_reps)?
                .unwrap_or(if noisy { 10 } else { reps_uncut });
            let methods = match settings.string("methods", methods) {
                Some(raw) => parse_methods(&raw)?,
                None => vec![QaoaMethod::Uncut, QaoaMethod::CliffordCut],
            };
            let mut config = QaoaExperimentConfig::new(seed, graph, graph_label);
            if let Some(budgets) = budgets {
                config.budgets = budgets;
            }
            config.methods = methods;
            config.reps_uncut = reps_uncut;
            config.reps_cut = reps_cut;
            config.noise = noise;
            if let Some(limit) = device_limit {
                config.device_limit = limit;
            }
            if let Some(max_iter) = settings.parsed("max_iter", max_iter)? {
                config.max_iter = max_iter;
            }
            if let Some(p) = settings.parsed("p", p)? {
                config.p = p;
            }
            let records = run_qaoa_experiment(&config).map_err(runtime)?;
            emit_report(&records, &out, stdout)
        }
        Command::Cut {
            file,
            method,
            shots,
        } => {
            let mut circuit = load_circuit(&file)?;
            if !circuit.all_qubits_measured() {
                eprintln!("note: adding terminal measurements to unmeasured qubits");
                circuit.measure_all();
            }
            let frags = fragment(&circuit, device_limit).map_err(runtime)?;
            let sizes: Vec<String> = frags
                .fragments
                .iter()
                .map(|f| f.num_qubits().to_string())
                .collect();
            writeln!(
                stdout,
                "fragments: {} (sizes {}); cuts: {}",
                frags.fragments.len(),
                sizes.join(", "),
                frags.num_cuts()
            )
            .map_err(runtime)?;

            let method = settings
                .string("method", method)
                .unwrap_or_else(|| "clifford".to_string());
            let shots = settings.parsed("shots", shots)?.unwrap_or(10_000);
            let quasi = reconstruct_with_method(&frags, &method, shots, seed, &noise)?;
            writeln!(stdout, "method {method}, budget {shots}").map_err(runtime)?;
            writeln!(stdout, "raw mass: {:.6}", quasi.mass()).map_err(runtime)?;
            writeln!(stdout, "top outcomes:").map_err(runtime)?;
            let mut entries: Vec<(&String, f64)> =
                quasi.weights().iter().map(|(k, &w)| (k, w)).collect();
            entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            for (key, weight) in entries.into_iter().take(10) {
                writeln!(stdout, "  {key}  {weight:+.6}").map_err(runtime)?;
            }
            Ok(())
        }
        Command::Simulate { file, shots } => {
            let circuit = load_circuit(&file)?;
            let options = SimOptions {
                measure_all_missing: true,
                ..SimOptions::default()
            };
            match settings.parsed("shots", shots)? {
                Some(shots) => {
                    let counts = sample_with(&circuit, shots, seed, noise.as_ref(), &options)
                        .map_err(runtime)?;
                    for (key, count) in counts.counts() {
                        writeln!(stdout, "{key}  {count}").map_err(runtime)?;
                    }
                    writeln!(stdout, "total: {}", counts.total()).map_err(runtime)?;
                }
                None => {
                    if noise.is_some() {
                        return Err(usage(
                            "noise needs sampling; pass --shots to draw noisy samples",
                        ));
                    }
                    let dist = exact_distribution_with(&circuit, &options).map_err(runtime)?;
                    for (key, prob) in dist.probs() {
                        writeln!(stdout, "{key}  {prob:.6}").map_err(runtime)?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn reconstruct_with_method(
    frags: &FragmentSet,
    method: &str,
    shots: u64,
    seed: u64,
    noise: &Option<NoiseModel>,
) -> Result<QuasiDistribution, CliError> {
    if method.trim() == "pauli" {
        let plan = allocate_shots(shots, pauli_config_count(frags)).map_err(runtime)?;
        let results =
            execute_pauli_configs_sampled(frags, &plan, seed, noise.as_ref()).map_err(runtime)?;
        return reconstruct_pauli(frags, &results).map_err(runtime);
    }
    let variant = parse_cut_variant(method)?;
    run_randomized_cut(frags, shots, seed, variant, noise.as_ref()).map_err(runtime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{insert_cut, Circuit};
    use crate::qcut::emit_program;
    use std::sync::atomic::{AtomicU64, Ordering};

    static FILE_COUNTER: AtomicU64 = AtomicU64::new(0);

    fn temp_path(name: &str) -> PathBuf {
        let id = FILE_COUNTER.fetch_add(1, Ordering::Relaxed);
        std::env::temp_dir().join(format!(
            "cutbench-cli-{}-{id}-{name}",
            std::process::id()
        ))
    }

    fn bell_file() -> PathBuf {
        let mut c = Circuit::new(2, 2);
        c.h(0).cx(0, 1).measure_all();
        let path = temp_path("bell.qcut");
        std::fs::write(&path, emit_program(&c)).unwrap();
        path
    }

    fn run_capture(args: &[&str]) -> (Result<(), String>, String) {
        let cli = Cli::try_parse_from(args.iter().copied()).expect("args should parse");
        let mut buf = Vec::new();
        let result = execute(cli, &mut buf).map_err(|e| match e {
            CliError::Usage(m) => format!("usage: {m}"),
            CliError::Runtime(m) => format!("runtime: {m}"),
        });
        (result, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn simulate_counts_total_the_requested_shots() {
        let path = bell_file();
        let (result, output) = run_capture(&[
            "cutbench",
            "simulate",
            path.to_str().unwrap(),
            "--shots",
            "100",
            "--seed",
            "1",
        ]);
        result.unwrap();
        assert!(output.contains("total: 100"), "{output}");
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn simulate_without_shots_prints_exact_probabilities() {
        let path = bell_file();
        let (result, output) = run_capture(&["cutbench", "simulate", path.to_str().unwrap()]);
        result.unwrap();
        assert!(output.contains("00  0.500000"), "{output}");
        assert!(output.contains("11  0.500000"), "{output}");
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn cut_subcommand_reports_fragments_and_mass() {
        let mut c = Circuit::new(2, 2);
        c.h(0);
        let c = insert_cut(&c, 0, 1).unwrap();
        let mut c = c;
        c.cx(0, 1).measure_all();
        let path = temp_path("cuttable.qcut");
        std::fs::write(&path, emit_program(&c)).unwrap();

        let (result, output) = run_capture(&[
            "cutbench",
            "cut",
            path.to_str().unwrap(),
            "--method",
            "clifford",
            "--shots",
            "4000",
            "--seed",
            "3",
        ]);
        result.unwrap();
        assert!(output.contains("fragments: 2 (sizes 1, 2); cuts: 1"), "{output}");
        assert!(output.contains("raw mass:"), "{output}");
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn ghz_subcommand_emits_schema_csv() {
        let (result, output) = run_capture(&[
            "cutbench",
            "ghz",
            "--budgets",
            "700",
            "--reps",
            "2",
            "--seed",
            "6",
        ]);
        result.unwrap();
        let lines: Vec<&str> = output.lines().collect();
        assert_eq!(lines[0], super::super::CSV_HEADER);
        // 3 methods x 1 budget x 2 reps x 3 metrics + 3 summaries x 2 metrics.
        assert_eq!(lines.len(), 1 + 18 + 6);
        assert!(lines.iter().any(|l| l.starts_with("ghz,pauli,-,700,none,-1,6,hellinger_mean,")));
    }

    #[test]
    fn qaoa_subcommand_respects_out_file() {
        let out = temp_path("qaoa.csv");
        let (result, output) = run_capture(&[
            "cutbench",
            "qaoa",
            "--graph",
            "A",
            "--budgets",
            "300",
            "--reps",
            "1",
            "--cut-reps",
            "1",
            "--max-iter",
            "0",
            "--seed",
            "2",
            "--out",
            out.to_str().unwrap(),
        ]);
        result.unwrap();
        assert!(output.contains("wrote"), "{output}");
        let csv = std::fs::read_to_string(&out).unwrap();
        assert!(csv.starts_with(super::super::CSV_HEADER));
        assert!(csv.contains("qaoa,uncut,A,300,none,"), "{csv}");
        assert!(csv.contains("qaoa,clifford_cut,A,300,none,"), "{csv}");
        std::fs::remove_file(out).unwrap();
    }

    #[test]
    fn config_file_supplies_defaults_and_flags_override() {
        let config = temp_path("settings.conf");
        std::fs::write(&config, "seed=5\nbudgets=900\nreps=2\n# comment\n").unwrap();
        let (result, output) = run_capture(&[
            "cutbench",
            "ghz",
            "--config",
            config.to_str().unwrap(),
            "--reps",
            "1",
        ]);
        result.unwrap();
        // Seed and budgets from the file, reps overridden to 1 on the line.
        assert!(output.contains(",900,none,-1,5,hellinger_mean,"), "{output}");
        let runs = output
            .lines()
            .filter(|l| l.contains(",900,none,0,"))
            .count();
        assert_eq!(runs, 9, "3 methods x 1 rep x 3 metrics:\n{output}");
        assert!(!output.contains(",900,none,1,"), "{output}");
        std::fs::remove_file(config).unwrap();
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let config = temp_path("bad.conf");
        std::fs::write(&config, "sed=5\n").unwrap();
        let (result, _) = run_capture(&[
            "cutbench",
            "ghz",
            "--config",
            config.to_str().unwrap(),
        ]);
        let err = result.unwrap_err();
        assert!(err.starts_with("usage:"), "{err}");
        assert!(err.contains("unknown key `sed`"), "{err}");
        std::fs::remove_file(config).unwrap();
    }

    #[test]
    fn bad_flag_values_are_usage_errors() {
        assert_eq!(run(["cutbench", "ghz", "--budgets", "12,x", "--reps", "1"]), 1);
        assert_eq!(run(["cutbench", "qaoa", "--graph", "Z", "--reps", "1"]), 1);
        assert_eq!(
            run(["cutbench", "simulate", "/nonexistent.qcut", "--noise", "warm"]),
            1
        );
    }

    #[test]
    fn missing_files_are_runtime_errors() {
        assert_eq!(run(["cutbench", "simulate", "/nonexistent.qcut"]), 2);
        assert_eq!(run(["cutbench", "cut", "/nonexistent.qcut"]), 2);
    }

    #[test]
    fn help_and_bad_flags_exit_cleanly() {
        assert_eq!(run(["cutbench", "--help"]), 0);
        assert_eq!(run(["cutbench", "--definitely-not-a-flag"]), 1);
        assert_eq!(run(["cutbench"]), 1);
    }
}
