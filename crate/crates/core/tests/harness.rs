use std::path::Path;

use cnea_core::engines::run;
use cnea_core::harness::{
    find_cells, read_runs, read_trace, run_matrix, ttest_cells, Budget, ExperimentMatrix,
};
use cnea_core::{Algorithm, BenchmarkFn, RngStream};

fn matrix(dir: &Path, text: &str) -> ExperimentMatrix {
    let mut m = ExperimentMatrix::parse(text).unwrap();
    m.output_dir = dir.to_path_buf();
    m
}

const SMALL: &str = "algos = sea\nfunctions = ellipsoid\ndims = 3\nruns = 3\ngenerations = 10\npopulation = 20\n";

#[test]
fn one_cell_writes_three_traces_and_one_summary() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix(dir.path(), SMALL);
    let out = run_matrix(&m).unwrap();
    assert_eq!(out.len(), 1);
    let cell = out[0].result.as_ref().unwrap();
    let mut names: Vec<String> = std::fs::read_dir(&cell.dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["run_000.csv", "run_001.csv", "run_002.csv", "runs.csv", "summary.csv"]);
    assert_eq!(cell.summary.runs, 3);
    assert_eq!(read_trace(&cell.dir.join("run_000.csv")).unwrap().len(), 11);
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let text = "algos = cnea, dgea\nfunctions = rastrigin\ndims = 3\nruns = 3\ngenerations = 15\npopulation = 20\nworkers = 3\n";
    run_matrix(&matrix(a.path(), text)).unwrap();
    let mut m = matrix(b.path(), text);
    m.workers = 1;
    run_matrix(&m).unwrap();
    for cell in ["cnea_rastrigin_3", "dgea_rastrigin_3"] {
        for file in ["summary.csv", "runs.csv", "run_002.csv"] {
            let x = std::fs::read(a.path().join(cell).join(file)).unwrap();
            let y = std::fs::read(b.path().join(cell).join(file)).unwrap();
            assert_eq!(x, y, "{cell}/{file}");
        }
    }
    assert_eq!(
        std::fs::read(a.path().join("summary.csv")).unwrap(),
        std::fs::read(b.path().join("summary.csv")).unwrap()
    );
}

#[test]
fn unknown_function_fails_only_its_cell() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix(
        dir.path(),
        "algos = sea\nfunctions = nosuch, ellipsoid\ndims = 2\nruns = 2\ngenerations = 3\npopulation = 10\n",
    );
    let out = run_matrix(&m).unwrap();
    assert!(out[0].result.is_err());
    assert!(out[1].result.is_ok());
    assert_eq!(find_cells(dir.path()).unwrap().len(), 1);
}

#[test]
fn matrix_runs_match_direct_runs() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix(dir.path(), SMALL);
    let out = run_matrix(&m).unwrap();
    let cell = out[0].result.as_ref().unwrap();
    let f = BenchmarkFn::make("ellipsoid", 3).unwrap();
    for row in &cell.runs {
        let cfg = m.engine_config(&cell.key).unwrap().with_seed(row.seed);
        let t = run(&cfg, &f, &mut RngStream::new(row.seed)).unwrap();
        assert_eq!(t.final_best(), row.final_best);
    }
    assert_eq!(cell.runs.iter().map(|r| r.seed).collect::<Vec<_>>(), [0, 1, 2]);
}

#[test]
fn stagnation_budget_marks_termination() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix(
        dir.path(),
        "algos = sea\nfunctions = ellipsoid\ndims = 2\nruns = 2\npopulation = 10\nbudget = stagnation\nstagnation_window = 5\nstagnation_cap = 40\n",
    );
    assert_eq!(m.budget, Budget::Stagnation);
    let out = run_matrix(&m).unwrap();
    let cell = out[0].result.as_ref().unwrap();
    for r in &cell.runs {
        match r.termination.as_str() {
            "stagnation" => assert_eq!(r.stagnation_gen, Some(r.generations)),
            "cap" => assert_eq!(r.generations, 40),
            other => panic!("unexpected termination {other}"),
        }
    }
    assert!(cell.summary.stagnation_gen_mean.is_some());
}

#[test]
fn ttest_pairs_cells_by_seed() {
    let dir = tempfile::tempdir().unwrap();
    let m = matrix(
        dir.path(),
        "algos = cnea, sea\nfunctions = rastrigin\ndims = 3\nruns = 4\ngenerations = 10\npopulation = 20\n",
    );
    run_matrix(&m).unwrap();
    let a = dir.path().join("cnea_rastrigin_3");
    let b = dir.path().join("sea_rastrigin_3");
    let r = ttest_cells(&a, &b).unwrap();
    assert_eq!(r.df, 3);
    assert_eq!(ttest_cells(&a, &a).unwrap().p, 1.0);
    let runs = read_runs(&a.join("runs.csv")).unwrap();
    assert_eq!(runs.len(), 4);

    let other = tempfile::tempdir().unwrap();
    let mut m = matrix(
        other.path(),
        "algos = sea\nfunctions = rastrigin\ndims = 3\nruns = 3\ngenerations = 10\npopulation = 20\n",
    );
    m.algos = vec![Algorithm::Sea];
    run_matrix(&m).unwrap();
    assert!(ttest_cells(&a, &other.path().join("sea_rastrigin_3")).is_err());
}
