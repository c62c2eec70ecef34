use std::io::Write;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn sublo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublo")).args(args).output().unwrap()
}

fn sublo_stdin(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sublo"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn m3_is_rejected() {
    let o = sublo(&["member", "--variety", "sub-lo", &data("M3.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("rejected"));
}

#[test]
fn co4_satisfies_e() {
    let o = sublo(&["check", "--identity", "E", &data("Co4.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn m3_fails_hs_with_witness() {
    let o = sublo(&["check", "--identity", "HS", &data("M3.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("assignment"));
}

#[test]
fn catalog_round_trips_through_classify() {
    let cat = sublo(&["catalog", "lmn", "1", "1"]);
    assert!(cat.status.success());
    let o = sublo_stdin(&["classify", "-"], &cat.stdout);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Lmn(1,1)"));
}

#[test]
fn dot_chain_and_pentagon() {
    let chain = stdout(&sublo(&["dot", &data("chain3.json")]));
    assert_eq!(chain.matches("->").count(), 2);
    let n5 = stdout(&sublo(&["dot", &data("N5.json")]));
    assert_eq!(n5.matches("[label=").count(), 5);
    assert_eq!(n5.matches("->").count(), 5);
    let svg = stdout(&sublo(&["dot", "--svg", &data("N5.json")]));
    assert_eq!(svg.matches("<circle").count(), 5);
}

#[test]
fn empty_input_is_a_usage_error() {
    let o = sublo_stdin(&["dot", "-"], b"");
    assert_eq!(o.status.code(), Some(2));
    let o = sublo(&["member", "/nonexistent/lattice.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sub_n_uses_least_chain_length() {
    let co4 = data("Co4.json");
    assert_eq!(sublo(&["member", "--variety", "sub-n", "--n", "4", &co4]).status.code(), Some(0));
    assert_eq!(sublo(&["member", "--variety", "sub-n", "--n", "3", &co4]).status.code(), Some(1));
}

#[test]
fn embed_then_verify() {
    let cert = sublo(&["embed", &data("N5.json")]);
    assert!(cert.status.success());
    let path = std::env::temp_dir().join(format!("sublo-cert-{}.json", std::process::id()));
    std::fs::write(&path, &cert.stdout).unwrap();
    let o = sublo(&["verify-cert", &data("N5.json"), path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_reports_are_reproducible() {
    let run = |w: &str| stdout(&sublo(&["--json", "--workers", w, "member", &data("Co4.json")]));
    let a = run("1");
    assert_eq!(a, run("4"));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["verdict"], "accepted");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("elapsed").is_none());
}

#[test]
fn identity_section_of_a_catalog_lattice() {
    let o = sublo(&["retract", &data("L11.json"), "--pi", "[0,1,2,3,4]", "--target", "lmn:1,1"]);
    // --pi is read as a path; a literal array is not a file
    assert_eq!(o.status.code(), Some(2));
    let path = std::env::temp_dir().join(format!("sublo-pi-{}.json", std::process::id()));
    std::fs::write(&path, "[0,1,2,3,4]").unwrap();
    let o = sublo(&["retract", &data("L11.json"), "--pi", path.to_str().unwrap(), "--target", "lmn:1,1"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn shipped_star_pair_separates() {
    let fx = format!("{}/../core/fixtures", env!("CARGO_MANIFEST_DIR"));
    let o = sublo(&["verify-separation", &format!("{fx}/star_p.json"), &format!("{fx}/star_q.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("separated"));
}

#[test]
fn placeholder_identities_are_refused() {
    for f in ["S", "U", "B", "Ht_n", "Ht_mn"] {
        let path = format!("{}/../../identities/{f}.sexp", env!("CARGO_MANIFEST_DIR"));
        let o = sublo(&["check", "--identity-file", &path, &data("M3.json")]);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains("placeholder"));
    }
}

#[test]
fn sexp_identity_file() {
    let path = std::env::temp_dir().join(format!("sublo-mod-{}.sexp", std::process::id()));
    // modularity, which M3 satisfies and the pentagon does not
    std::fs::write(&path, "(= (v (^ x y) (^ x z)) (^ x (v y (^ x z))))\n").unwrap();
    let p = path.to_str().unwrap();
    let m3 = sublo(&["check", "--identity-file", p, &data("M3.json")]).status.code();
    let n5 = sublo(&["check", "--identity-file", p, &data("N5.json")]).status.code();
    std::fs::remove_file(&path).ok();
    assert_eq!((m3, n5), (Some(0), Some(1)));
}
