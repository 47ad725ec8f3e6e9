use std::path::PathBuf;
use std::process::{Command, Output};

use tropgw::brokenlines::potential_w_k0;
use tropgw::coeffring::Series;
use tropgw::geometry::Arrangement;
use tropgw::scattering::build_diagram;

fn tropgw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropgw")).args(args).env_remove("TROPGW_OUT_DIR").output().unwrap()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tropgw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn oracle_primary_count() {
    let v = stdout_json(&tropgw(&["oracle", "--d", "3", "--ins", "T2*8"]));
    assert_eq!(v["value"], "12");
}

#[test]
fn invariant_line_through_two_points() {
    let v = stdout_json(&tropgw(&["invariant", "--d", "1", "--r", "1,0"]));
    assert_eq!(v["value"], "1");
    // Three marked points on a line through two of them is overdetermined.
    let v = stdout_json(&tropgw(&["invariant", "--d", "1", "--r", "1,1"]));
    assert_eq!(v["value"], "0");
}

#[test]
fn arrangement_generation_is_reproducible() {
    let args = ["gen-arrangement", "--k", "3", "--seed", "17"];
    let a = tropgw(&args);
    let b = tropgw(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let parsed = Arrangement::from_json(&serde_json::from_slice(&a.stdout).unwrap()).unwrap();
    assert_eq!(parsed.k(), 3);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&a.stdout).unwrap(), parsed.to_json());
}

#[test]
fn potential_round_trips_through_json() {
    let arr = tropgw(&["gen-arrangement", "--k", "2", "--seed", "5"]);
    let path = scratch("arr.json", std::str::from_utf8(&arr.stdout).unwrap());
    let v = stdout_json(&tropgw(&["potential", "--arr", path.to_str().unwrap(), "--dmax", "2"]));
    let a = Arrangement::from_json(&serde_json::from_slice(&arr.stdout).unwrap()).unwrap();
    let d = build_diagram(&a, 2).unwrap();
    let w = potential_w_k0(&d, &a.q).unwrap();
    assert_eq!(Series::from_json(d.cfg, &v["series"]).unwrap(), w);
}

#[test]
fn exit_codes() {
    assert_eq!(tropgw(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(tropgw(&["oracle", "--d", "1", "--ins", "T7"]).status.code(), Some(2));
    assert_eq!(tropgw(&["invariant", "--d", "1", "--r", "x"]).status.code(), Some(2));
    assert_eq!(tropgw(&["scatter", "--arr", "/nonexistent/arr.json", "--dmax", "1"]).status.code(), Some(2));
    assert_eq!(tropgw(&["--help"]).status.code(), Some(0));
    // P2 sits on the horizontal line through P1, so scattering is not general.
    let bad = scratch("bad.json", r#"{"P": [["0","0"],["1","0"]], "Q": ["1/3","7/5"], "k": 2, "seed": 0}"#);
    let o = tropgw(&["scatter", "--arr", bad.to_str().unwrap(), "--dmax", "2"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn identities_subcommand_passes() {
    let o = tropgw(&["oracle", "verify-identities", "--nmax", "10", "--grid", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn table_writes_csv_and_json() {
    let dir = std::env::temp_dir().join(format!("tropgw-table-{}", std::process::id()));
    let o = tropgw(&[
        "table", "--dmax", "1", "--kmax", "2", "--psi-max", "2", "--m-max", "1", "--with-oracle", "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.join("table.csv")).unwrap();
    assert!(csv.lines().count() > 2);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("table.json")).unwrap()).unwrap();
    assert!(json.is_object() || json.is_array());
}
