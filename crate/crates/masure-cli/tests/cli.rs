use serde_json::Value;
use std::process::{Command, Output};

fn masure(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_masure")).args(args).env_remove("MASURE_HEIGHT").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("masure-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn coxeter_info_of_a2() {
    let out = masure(&["coxeter-info", "--datum", "A2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["positive_real_roots"], 3);
    assert_eq!(v["spherical"], true);
    assert_eq!(v["kind"], "finite");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn affine_datum_is_not_spherical() {
    let v = json(&masure(&["coxeter-info", "--datum", "~A2", "--height", "2"]));
    assert_eq!(v["spherical"], false);
    assert_eq!(v["coxeter"][0][0], 1);
    assert_eq!(v["height"], 2);
    let inf = json(&masure(&["coxeter-info", "--datum", "~A1"]));
    assert_eq!(inf["coxeter"][0][1], "inf");
}

#[test]
fn height_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_masure")).args(["roots", "--datum", "~A1"]).env("MASURE_HEIGHT", "3").output().unwrap();
    let v = json(&out);
    assert_eq!(v["height"], 3);
    assert_eq!(v["real"].as_array().unwrap().len(), 4);
}

#[test]
fn locate_the_origin() {
    let v = json(&masure(&["locate", "--datum", "A2", "--vector", "0,0"]));
    assert_eq!(v["location"]["w"].as_array().unwrap().len(), 0);
    assert_eq!(v["location"]["j"].as_array().unwrap().len(), 2);
    // finite type: every vector lies in the positive cone, here in w_0 C_f
    let v = json(&masure(&["locate", "--datum", "A2", "--vector", "-1,-1"]));
    assert_eq!(v["location"]["sign"], "+");
    assert_eq!(v["location"]["w"].as_array().unwrap().len(), 3);
    let v = json(&masure(&["locate", "--datum", "~A1", "--vector", "-1,0,0"]));
    assert_eq!(v["location"]["sign"], "-");
}

#[test]
fn enclosure_levels_are_exact_strings() {
    let v = json(&masure(&["enclose", "--datum", "A1", "--point", "1/3", "--point", "5/2"]));
    let levels: Vec<&str> = v["half_spaces"].as_array().unwrap().iter().map(|h| h["level"].as_str().unwrap()).collect();
    // α ≥ 1/3 rounds to α ≥ 0, and α ≤ 5/2 to α ≤ 3
    assert_eq!(levels, ["0", "3"]);
    let v = json(&masure(&["enclose", "--datum", "A1", "--point", "1/3", "--point", "5/2", "--exact"]));
    assert_eq!(v["half_spaces"][0]["level"], "-1/3");
}

#[test]
fn mao_on_the_depth_four_tree() {
    let out = masure(&["atlas-check", "--axioms", "mao", "--tree", "q=2", "depth=4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["bounds"]["window"][0]["depth"], 4);
    assert_eq!(v["reports"][0]["checked"], v["reports"][0]["verified"]);
}

#[test]
fn infinity_checkers_pass() {
    let out = masure(&["atlas-check", "--axioms", "twinning,wdistance,opposite,thickness", "--product", "q=2", "depth=1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn glued_round_trip_and_broken_cocycle() {
    let text = masure(&["atlas-build", "--tree", "q=2", "depth=2", "--format", "text"]).stdout;
    let path = temp("tree.atlas", &String::from_utf8(text).unwrap());
    let out = masure(&["atlas-check", "--glued", &path, "--radius", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bad = temp("bad.atlas", "[generators]\ns\n[coxeter]\n1\n[charts]\nA B C\n[gluings]\nglue A B\nglue B C\nglue C A\nlinear s\n");
    let out = masure(&["atlas-check", "--glued", &bad, "--radius", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["reports"][0]["bounds"]["height"], 4);
}

#[test]
fn syntax_errors_exit_two_with_a_position() {
    let bad = temp("syntax.atlas", "[generators]\ns\n[coxeter]\n1\n[charts]\nA\n[gluings]\nglue A Z\n");
    let out = masure(&["atlas-check", "--glued", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 8, column 8"));
    let data = temp("datum.txt", "[generators]\na b\n[coxeter]\n1 3\n3 x\n");
    let out = masure(&["coxeter-info", "--file", &data]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 5"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(masure(&["locate", "--datum", "A2", "--vector", "1"]).status.code(), Some(2));
    assert_eq!(masure(&["locate", "--datum", "Q7", "--vector", "1"]).status.code(), Some(2));
    assert_eq!(masure(&["residue", "--tree", "q=2", "depth=2", "--point", "999:0"]).status.code(), Some(2));
    assert_eq!(masure(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn data_file_with_apartment_section() {
    let data = temp("b2.txt", "[generators]\na b\n[coxeter]\n1 4\n4 1\n[cartan]\n2 -2\n-1 2\n[apartment]\nimaginary none\n");
    let v = json(&masure(&["coxeter-info", "--file", &data, "--height", "4"]));
    assert_eq!(v["positive_real_roots"], 4);
    assert_eq!(v["labels"][1], "b");
}

#[test]
fn residue_at_an_interior_vertex() {
    // chart 0 of the depth-3 tree joins sibling leaves at -3 and -1 through their parent
    let out = masure(&["residue", "--tree", "q=2", "depth=3", "--point", "0:-2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["residue"]["chambers"].as_array().unwrap().len(), 3);
    assert_eq!(v["residue"]["s_x"][0], "1");
    let nr = json(&masure(&["residue", "--tree", "q=2", "depth=3", "--point", "0:-1/2", "--nonrestricted"]));
    assert_eq!(nr["residue"]["chambers"].as_array().unwrap().len(), 2);
    assert_eq!(nr["residue"]["s_x"].as_array().unwrap().len(), 0);
}

#[test]
fn retraction_fold_and_preorder() {
    let v = json(&masure(&["retract", "--tree", "q=2", "depth=3", "--center", "0:a", "--point", "5:-3"]));
    assert_eq!(v["image"]["chart"], 0);
    let v = json(&masure(&["fold", "--product", "q=2", "depth=2", "--center", "0:a", "--from", "0:-2,-2", "--to", "35:2,2"]));
    assert_eq!(v["positively_folded"], true);
    let v = json(&masure(&["leq", "--product", "q=2", "depth=2", "--from", "0:-2,-2", "--to", "0:2,1"]));
    assert_eq!(v["leq"], true);
    // the Tits cone of A1xA1 is everything
    let v = json(&masure(&["leq", "--product", "q=2", "depth=2", "--from", "0:-2,2", "--to", "9:2,1"]));
    assert_eq!(v["leq"], true);
}

#[test]
fn infinity_distance_and_codistance() {
    let v = json(&masure(&["infinity-dist", "--tree", "q=2", "depth=2", "--first", "+0", "--second", "+3"]));
    assert_eq!((v["kind"].as_str(), v["length"].as_u64()), (Some("distance"), Some(1)));
    let v = json(&masure(&["infinity-dist", "--tree", "q=2", "depth=2", "--first", "+0", "--second", "-3"]));
    assert_eq!((v["kind"].as_str(), v["length"].as_u64()), (Some("codistance"), Some(0)));
}

#[test]
fn facade_dot_and_json() {
    let out = masure(&["facade", "--product", "q=2", "depth=2", "--ends", "0,*"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph facade {"));
    assert_eq!(dot.matches(" -- ").count(), 9);
    let v = json(&masure(&["facade", "--product", "q=2", "depth=2", "--ends", "0,*", "--format", "json"]));
    assert_eq!(v["factor_window"]["isomorphic"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["atlas-check", "--axioms", "ma2,ma4,cocycle", "--product", "q=2", "depth=1"];
    assert_eq!(masure(&args).stdout, masure(&args).stdout);
    let args = ["residue", "--product", "q=2", "depth=2", "--point", "7:0,1"];
    assert_eq!(masure(&args).stdout, masure(&args).stdout);
}
