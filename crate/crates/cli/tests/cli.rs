use std::process::{Command as Process, Output};

use advknow_cli::{run, Command, Format, ProblemSource, RunConfig, Table};
use advknow_core::problem::{make_grover, write_problem};

fn advknow(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_advknow"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn verify_exit_codes() {
    let ok = advknow(&["verify"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.matches(" PASS").count(), 9);
    assert!(text.contains("(adv)   t1"));

    let mirrored = advknow(&["verify", "--mirrored"]);
    assert_eq!(mirrored.status.code(), Some(0));
    assert!(String::from_utf8(mirrored.stdout).unwrap().contains("settings={00,01} PASS"));

    let broken = advknow(&["verify", "--inject-fault", "missing-hadamard"]);
    assert_eq!(broken.status.code(), Some(1));
    let err = String::from_utf8(broken.stderr).unwrap();
    assert!(err.lines().all(|l| l.starts_with("FAIL (")), "{err}");
    assert!(err.contains("FAIL (fi)"));
}

#[test]
fn bad_arguments_are_errors() {
    assert_eq!(advknow(&["simulate", "--problem", "grover"]).status.code(), Some(2));
    assert_eq!(advknow(&["simulate", "--problem", "grover:2", "--bc", "0101"]).status.code(), Some(2));
    assert_ne!(advknow(&["complexity", "--problem", "dj:2", "--trials", "0"]).status.code(), Some(0));
    assert_eq!(advknow(&["advknow", "--problem", "simon:4"]).status.code(), Some(2));
    assert_eq!(advknow(&["simulate", "--problem", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        &["complexity", "--problem", "simon:2", "--seed", "9", "--trials", "200"][..],
        &["complexity", "--problem", "dj", "--n", "2", "--seed", "9", "--trials", "200", "--format", "delim"][..],
        &["simulate", "--problem", "simon:2", "--seed", "3", "--shots", "50"][..],
    ] {
        let a = advknow(args);
        let b = advknow(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = advknow(&["simulate", "--problem", "simon:2", "--seed", "3", "--shots", "50"]);
    let b = advknow(&["simulate", "--problem", "simon:2", "--seed", "4", "--shots", "50"]);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn delimited_output_round_trips() {
    let out = advknow(&["complexity", "--problem", "grover:2", "--seed", "5", "--trials", "100", "--format", "delim"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# advknow "));
    assert!(text.contains("# seed=5\n"));
    let table = Table::read_delimited(text.as_bytes()).unwrap();
    assert_eq!(table.seed, 5);
    assert_eq!(
        table.header,
        ["name", "b_c", "instances", "N_max", "N_min", "k_n", "baseline", "avg_ii", "avg_iii", "seed", "avg_ii_se", "avg_iii_se"]
    );
    assert_eq!(table.rows.len(), 4);
    for row in &table.rows {
        assert_eq!(row[3], "1");
        assert_eq!(row[5], "1");
        assert_eq!(row[6], "3");
    }
    assert_eq!(table.to_delimited(), text);
}

#[test]
fn every_command_table_round_trips() {
    let mut configs = vec![RunConfig::new(Command::Verify)];
    for (cmd, sel) in [
        (Command::Simulate, "dj:2"),
        (Command::Advknow, "simon:2"),
        (Command::Complexity, "grover:2"),
    ] {
        let mut c = RunConfig::new(cmd).with_problem(sel);
        c.trials = 50;
        c.shots = 20;
        configs.push(c);
    }
    for c in configs {
        let out = run(&c).unwrap();
        assert!(out.passed(), "{:?}: {:?}", c.command, out.failures);
        for t in &out.tables {
            let back = Table::read_delimited(t.to_delimited().as_bytes()).unwrap();
            assert_eq!(&back, t);
        }
        assert_eq!(out.render(Format::Delim), out.tables[0].to_delimited());
    }
}

#[test]
fn out_directory_gets_every_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tables");
    let o = advknow(&[
        "advknow", "--problem", "dj:2", "--bc", "0011", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<_> = std::fs::read_dir(&path)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["advknow_dj2.tsv", "crosscheck_dj2.tsv"]);
    let t = Table::read_delimited(std::fs::File::open(path.join("advknow_dj2.tsv")).unwrap()).unwrap();
    let verdict = t.column("verdict").unwrap();
    assert_eq!(t.rows.iter().filter(|r| r[verdict] == "accepted").count(), 1);
}

#[test]
fn problems_load_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("grover2.txt");
    std::fs::write(&file, write_problem(&make_grover(2).unwrap())).unwrap();
    let source = ProblemSource::parse(file.to_str().unwrap(), None).unwrap();
    assert_eq!(source, ProblemSource::File(file.clone()));
    let o = advknow(&["simulate", "--problem", file.to_str().unwrap(), "--bc", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().contains("b_c=10 solution=10 p_success=1.000000"));
}

#[test]
fn selectors() {
    assert_eq!(
        ProblemSource::parse("dj", Some(3)).unwrap(),
        ProblemSource::Builtin("dj:3".into())
    );
    assert_eq!(
        ProblemSource::parse("simon:2", None).unwrap(),
        ProblemSource::Builtin("simon:2".into())
    );
    assert!(ProblemSource::parse("simon:2", Some(2)).is_err());
    assert!(ProblemSource::parse("grover", None).is_err());
}
