use std::process::{Command, Output};

fn rfloors(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfloors")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cubic_invariant() {
    let o = rfloors(&["invariant", "triangle:3", "-g", "0", "-s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1*q^1 + 6*q^0 + 1*q^-1\n");
}

#[test]
fn exit_codes() {
    assert_eq!(rfloors(&["invariant", "triangle:3", "-g", "0", "-s", "7"]).status.code(), Some(1));
    assert_eq!(rfloors(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(rfloors(&["polydata", "vertices:0,0;1,1;2,2"]).status.code(), Some(1));
    let bad =
        rfloors(&["check", "lattice-invariance", "rect:2,3", "rect:2,3", "--transform", "0,-1,1,0,0,0", "-g", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("status=fail"));
    assert_eq!(rfloors(&["check", "ab-formula", "-a", "2", "-b", "1", "-g", "1", "-s", "1"]).status.code(), Some(0));
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["table", "rect:3,2", "-g", "0"];
    let one = rfloors(&[&["--jobs", "1"][..], &args].concat());
    let four = rfloors(&[&["--jobs", "4"][..], &args].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn rect_three_by_two_genus_one_table() {
    let o = stdout(&rfloors(&["--format", "records", "table", "rect:3,2", "-g", "1", "--smax", "1"]));
    assert!(o.contains("total[s=0]\t2*q^1 + 16*q^0 + 2*q^-1\n"), "{o}");
    assert!(o.contains("total[s=1]\t2*q^1 + 14*q^0 + 2*q^-1\n"), "{o}");
    assert!(o.lines().all(|l| l.matches('\t').count() == 1));
}

#[test]
fn table_totals_match_single_invariants() {
    let table = stdout(&rfloors(&["--format", "records", "table", "trapezoid:2,2,1", "-g", "1"]));
    for line in table.lines().filter(|l| l.starts_with("total[s=")) {
        let (key, value) = line.split_once('\t').unwrap();
        let s = key.trim_start_matches("total[s=").trim_end_matches(']');
        let single = stdout(&rfloors(&["invariant", "trapezoid:2,2,1", "-g", "1", "-s", s]));
        assert_eq!(single.trim_end(), value);
    }
}

#[test]
fn diagrams_listing() {
    let o = stdout(&rfloors(&["diagrams", "triangle:3", "-g", "1"]));
    assert!(o.starts_with("# triangle:3 g=1: 1 floor diagrams\n"), "{o}");
    assert!(o.contains("deg=0  codeg=0  nu=1"), "{o}");
}
