use std::io::Write;
use std::process::{Command, Output};

use faf_cli::gadgets::build_gadget;
use faf_cli::{cmd_tree, gadget_document, parse_apx, Format, Target, TreeConfig};
use finitary_af::trees::TreeKind;
use tempfile::NamedTempFile;

fn faf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faf")).args(args).env_remove("FAF_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const F1: &str = "arg(a0).\narg(a1).\narg(a2).\natt(a0,a1).\natt(a1,a2).\n";
const F2: &str = "arg(a).\natt(a,a).\n";
const F3: &str = "arg(a). arg(b).\natt(a,b). att(b,a).\n";

#[test]
fn solve_examples() {
    let f1 = file(F1);
    let o = faf(&["solve", f1.path().to_str().unwrap(), "-s", "stb", "-p", "exists", "-f", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"semantics\":\"stb\",\"problem\":\"exists\",\"answer\":true,\"extensions\":[[\"a0\",\"a2\"]]}\n"
    );

    let f2 = file(F2);
    let o = faf(&["solve", f2.path().to_str().unwrap(), "-s", "cf", "-p", "ne", "-f", "json"]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["answer"], false);

    let f3 = file(F3);
    let o = faf(&["solve", f3.path().to_str().unwrap(), "-s", "stb", "-p", "uni", "-f", "csv"]);
    assert_eq!(stdout(&o), "semantics,problem,answer,extension\nstb,uni,false,{a}\nstb,uni,false,{b}\n");

    let o = faf(&["solve", f1.path().to_str().unwrap(), "-s", "ad", "-p", "cred", "-a", "a2"]);
    assert!(stdout(&o).contains("answer: true"));
}

#[test]
fn exit_codes() {
    let f1 = file(F1);
    let p = f1.path().to_str().unwrap();
    assert_eq!(faf(&["solve", "/nonexistent/x.apx", "-s", "ad"]).status.code(), Some(1));
    assert_eq!(faf(&["solve", p, "-s", "pr"]).status.code(), Some(1));
    assert_eq!(faf(&["solve", p, "-s", "ad", "-p", "cred", "-a", "zz"]).status.code(), Some(1));
    assert_eq!(faf(&["solve", p, "-s", "ad", "-p", "cred"]).status.code(), Some(1));
    assert_eq!(faf(&["gadget", "nope", "-n", "3"]).status.code(), Some(1));
    assert_eq!(faf(&["gadget", "fig2", "-P", "1={3}", "-n", "3"]).status.code(), Some(1));
    assert_eq!(faf(&["trace", "fig1", "-s", "ad", "-p", "ne", "--stages", "0"]).status.code(), Some(1));

    let bad = file("arg(a).\narg(a).\n");
    let o = faf(&["solve", bad.path().to_str().unwrap(), "-s", "ad"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    // the powerset scan cap and the node budget are exhaustion, not bad input
    let big = file(&(0..30).map(|i| format!("arg(x{i}).\n")).collect::<String>());
    assert_eq!(faf(&["solve", big.path().to_str().unwrap(), "-s", "stb"]).status.code(), Some(2));
    let o = faf(&["trace", "fig1", "-P", "{1,2}", "-s", "ad", "-p", "cred", "-a", "a_6", "--stages", "30", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_faf"))
        .args(["tree", "fig1", "-P", "all", "-s", "ad", "-d", "30"])
        .env("FAF_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(faf(&["--help"]).status.code(), Some(0));
}

#[test]
fn gadget_examples() {
    let o = faf(&["gadget", "fig1", "-P", "{1}", "-n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in ["att(b_1,a_2).", "att(b_1,a_3).", "att(b_1,b_1)."] {
        assert!(text.lines().any(|l| l == line), "{line} missing from\n{text}");
    }
    assert!(text.contains("%   b_1 -> b_1"));

    let doc = parse_apx(&stdout(&faf(&["gadget", "stars", "-P", "count=2", "-n", "6"]))).unwrap();
    let centers: Vec<_> = (0..6).filter(|&i| doc.af.attackers_of(i).is_empty()).collect();
    assert_eq!(centers.len(), 2);
    assert!((0..6).filter(|i| !centers.contains(i)).all(|i| doc.af.attackers_of(i).len() == 1));

    let text = stdout(&faf(&["gadget", "fig2", "-P", "1={0,5}", "-n", "10"]));
    assert!(text.contains("%   d^1_0 -> d_1_0") && text.contains("%   d^1_1 -> d_1_1"));
    assert!(text.lines().any(|l| l == "att(d_1_1,d_1_1)."));

    let a = stdout(&faf(&["gadget", "random", "-P", "7:0.4", "--seed", "5", "-n", "7"]));
    assert_eq!(a, stdout(&faf(&["gadget", "random", "-P", "7:0.4", "--seed", "5", "-n", "7"])));
    assert_ne!(a, stdout(&faf(&["gadget", "random", "-P", "7:0.4", "--seed", "6", "-n", "7"])));
}

#[test]
fn trace_examples() {
    let o = faf(&["trace", "fig1", "-P", "{1,2}", "-s", "ad", "-p", "cred", "-a", "a_6", "--stages", "100", "-f", "json", "--expect", "accept"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 101);
    assert!(lines[..100].iter().enumerate().all(|(k, v)| v["answer"] == "accept" && v["stage"] == k));
    assert_eq!(lines[100]["summary"]["matched"], true);

    let o = faf(&["trace", "fig1", "-P", "all", "-s", "ad", "-p", "ne", "--stages", "100", "-f", "json"]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines[14..100].iter().all(|v| v["answer"] == "reject" && v["class"] == "sigma2"));

    let o = faf(&["trace", "stars", "-P", "all", "-s", "inf-stb", "-p", "exists", "--stages", "100", "-f", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("stage,answer,class,evidence"));
    assert!(text.lines().skip(4).all(|l| l.split(',').nth(1) == Some("accept")));

    let o = faf(&["trace", "stars", "-P", "all", "-s", "inf-stb", "-p", "exists", "--stages", "5", "--expect", "reject"]);
    assert!(stdout(&o).contains("MISMATCH"));

    let f3 = file(F3);
    let o = faf(&["trace", f3.path().to_str().unwrap(), "-s", "stb", "-p", "cred", "-a", "b", "--stages", "6"]);
    assert!(stdout(&o).contains("final: accept"));
}

#[test]
fn tree_examples() {
    let f3 = Target::Apx(parse_apx(F3).unwrap());
    let cfg = |kind, depth, format| TreeConfig { kind, with: &[], without: &[], depth, budget: 10_000, label_cap: None, format };
    let out = cmd_tree(&f3, &cfg(TreeKind::Stb, 2, Format::Json)).unwrap().stdout;
    let nodes: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let roots: Vec<_> = nodes.iter().filter(|n| n["code"].as_array().unwrap().len() == 1).map(|n| n["code"].clone()).collect();
    assert_eq!(roots, [serde_json::json!([0]), serde_json::json!([2])]);
    assert_eq!(nodes.iter().filter(|n| n["code"].as_array().unwrap().len() == 2).count(), 2);

    let f2 = Target::Apx(parse_apx(F2).unwrap());
    let out = cmd_tree(&f2, &cfg(TreeKind::Stb, 1, Format::Text)).unwrap().stdout;
    assert!(out.ends_with("# 1 nodes, 0 at depth 1\n"), "{out}");

    let free = Target::Apx(parse_apx("arg(x). arg(y). arg(z).").unwrap());
    let out = cmd_tree(&free, &cfg(TreeKind::Stb, 3, Format::Dot)).unwrap().stdout;
    assert!(out.starts_with("digraph tree {") && out.ends_with("}\n"));
    assert!(out.contains("[0,0,0]\\nin={x,y,z} out={}"));
    assert_eq!(out.matches(" -> ").count(), 3);

    let o = faf(&["tree", "attack_free", "-s", "inf-na", "-d", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = faf(&["tree", "fig1", "-P", "{1}", "-s", "ad", "-d", "4", "--with", "a_0", "--without", "a_1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# T_ad over fig1"));
}

#[test]
fn gadget_documents_rename_consistently() {
    let g = build_gadget("chain_w", Some("{1}"), 0).unwrap();
    let (doc, pairs) = gadget_document(&g, 12).unwrap();
    assert_eq!(parse_apx(&doc.emit()).unwrap(), doc);
    assert!(pairs.iter().any(|(p, e)| p == "a_{1,0}" && e == "a_1_0"));
}
