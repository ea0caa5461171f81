//! End-to-end harness checks: the artifact contract of batch runs,
//! byte-identical reruns, and corruption detection.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use mstlbo::harness::{
    export_plot_data, path_file, read_traces_in_dir, run_batch, trace_file, validate_dir,
    PathRecord, RunConfig, RunSummary, SeedSpec,
};
use mstlbo::{Scenario, Variant};

const CANONICAL_JSON: &str = include_str!("../../../scenarios/canonical.json");

fn write_scenario(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("scenario.json");
    fs::write(&path, CANONICAL_JSON).unwrap();
    path
}

fn small_config(dir: &Path) -> RunConfig {
    let scenario = write_scenario(dir);
    let text = format!(
        r#"{{
            "scenario": {scenario:?},
            "variants": ["tlbo", "mstlbo", "random_search"],
            "seeds": "0..2",
            "population": 8,
            "max_fes": 400,
            "output_dir": {out:?}
        }}"#,
        scenario = scenario,
        out = dir.join("out"),
    );
    serde_json::from_str(&text).unwrap()
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_str().unwrap().to_string();
            (name, fs::read(&path).unwrap())
        })
        .collect()
}

#[test]
fn batch_writes_the_full_artifact_set() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let summary = run_batch(&config).unwrap();

    assert_eq!(summary.runs.len(), 9);
    assert_eq!(summary.variants.len(), 3);
    for variant in [Variant::Tlbo, Variant::MsTlbo, Variant::RandomSearch] {
        for seed in 0..3 {
            assert!(trace_file(&config.output_dir, variant.token(), seed).exists());
            assert!(path_file(&config.output_dir, variant, seed).exists());
        }
    }
    assert!(config.output_dir.join("summary.json").exists());

    let report = validate_dir(&config.output_dir).unwrap();
    assert!(report.is_ok(), "problems: {:?}", report.problems);
    assert_eq!(report.files_checked, 9 + 9 + 1);
}

#[test]
fn rerunning_a_batch_is_byte_identical_up_to_timing() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let first_summary = run_batch(&config).unwrap();
    let first = snapshot(&config.output_dir);
    fs::remove_dir_all(&config.output_dir).unwrap();
    let second_summary = run_batch(&config).unwrap();
    let second = snapshot(&config.output_dir);

    // Traces and path records carry no timing, so they must not move a byte.
    assert_eq!(first.len(), second.len());
    for (name, bytes) in &first {
        if name == "summary.json" {
            continue;
        }
        assert_eq!(Some(bytes), second.get(name), "{name} differs across reruns");
    }

    // The summary is identical except for wall-clock fields.
    assert_eq!(first_summary.variants, second_summary.variants);
    assert_eq!(first_summary.runs.len(), second_summary.runs.len());
    for (a, b) in first_summary.runs.iter().zip(&second_summary.runs) {
        assert_eq!((a.variant, a.seed), (b.variant, b.seed));
        assert_eq!(a.final_cost, b.final_cost);
        assert_eq!((a.j1, a.j2, a.j3), (b.j1, b.j2, b.j3));
        assert_eq!(a.violated, b.violated);
        assert_eq!(a.collision_free, b.collision_free);
        assert_eq!((a.iterations, a.fes), (b.iterations, b.fes));
    }
}

#[test]
fn summary_records_are_consistent_with_path_records() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let summary = run_batch(&config).unwrap();
    let scenario = Scenario::canonical();
    for run in &summary.runs {
        let text =
            fs::read_to_string(path_file(&config.output_dir, run.variant, run.seed)).unwrap();
        let record: PathRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(record.variant, run.variant);
        assert_eq!(record.seed, run.seed);
        assert_eq!(record.cost.total, run.final_cost);
        assert_eq!(record.path.len(), scenario.num_interior_waypoints() + 2);
        assert_eq!(record.path[0], <[f64; 3]>::from(scenario.start()));
        assert_eq!(
            record.path[record.path.len() - 1],
            <[f64; 3]>::from(scenario.goal())
        );
        assert_eq!(run.fes, 400);
        assert_eq!(run.collision_free, run.j2 == 0.0);
    }
}

#[test]
fn export_covers_every_trace_in_the_directory() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    run_batch(&config).unwrap();
    let traces = read_traces_in_dir(&config.output_dir).unwrap();
    assert_eq!(traces.len(), 9);
    let csv_path = dir.path().join("aligned.csv");
    let aligned = export_plot_data(&traces, &csv_path).unwrap();
    assert_eq!(aligned.columns.len(), 9);
    let text = fs::read_to_string(&csv_path).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("fes,"));
    assert_eq!(header.split(',').count(), 10);
    assert_eq!(text.lines().count(), aligned.fes.len() + 1);
    for label in ["tlbo_0", "mstlbo_2", "random_search_1"] {
        assert!(header.contains(label), "missing column {label}");
    }
}

#[test]
fn validation_catches_each_kind_of_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    run_batch(&config).unwrap();
    let out = &config.output_dir;

    // Baseline is clean.
    assert!(validate_dir(out).unwrap().is_ok());

    // A tampered summary median.
    let summary_path = out.join("summary.json");
    let pristine = fs::read_to_string(&summary_path).unwrap();
    let mut summary: RunSummary = serde_json::from_str(&pristine).unwrap();
    summary.variants[0].median_final_cost += 1.0;
    fs::write(&summary_path, serde_json::to_string_pretty(&summary).unwrap()).unwrap();
    let report = validate_dir(out).unwrap();
    assert!(report.problems.iter().any(|p| p.contains("median")));
    fs::write(&summary_path, &pristine).unwrap();

    // A truncated path record.
    let path_record = path_file(out, Variant::Tlbo, 0);
    let pristine_record = fs::read_to_string(&path_record).unwrap();
    fs::write(&path_record, &pristine_record[..40]).unwrap();
    assert!(!validate_dir(out).unwrap().is_ok());
    fs::write(&path_record, &pristine_record).unwrap();

    // A trace with a decreasing fes column.
    let trace_path = trace_file(out, "tlbo", 1);
    let pristine_trace = fs::read_to_string(&trace_path).unwrap();
    let mut lines: Vec<&str> = pristine_trace.lines().collect();
    let moved = lines.remove(2);
    lines.push(moved);
    fs::write(&trace_path, lines.join("\n") + "\n").unwrap();
    let report = validate_dir(out).unwrap();
    assert!(report.problems.iter().any(|p| p.contains("fes")));
    fs::write(&trace_path, &pristine_trace).unwrap();

    assert!(validate_dir(out).unwrap().is_ok());
}

#[test]
fn missing_scenario_fails_before_any_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig {
        scenario: dir.path().join("nope.json"),
        variants: vec![Variant::Tlbo],
        seeds: SeedSpec::List(vec![0]),
        population: 8,
        max_fes: 100,
        weights: Default::default(),
        scalar_r: false,
        subject_layout: Default::default(),
        number_of_subject: None,
        mutation_scale: 0.1,
        learner_style: Default::default(),
        output_dir: dir.path().join("out"),
    };
    assert!(run_batch(&config).is_err());
    assert!(!config.output_dir.exists());
}

#[test]
fn invalid_optimizer_parameters_fail_before_any_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_config(dir.path());
    config.population = 2;
    assert!(run_batch(&config).is_err());
    assert!(!config.output_dir.exists());
}
