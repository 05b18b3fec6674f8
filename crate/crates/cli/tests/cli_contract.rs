use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use bvkit::dsl::{parse, print_script};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn bvkit(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bvkit"))
        .args(args)
        .current_dir(root())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn documented_examples() {
    assert_eq!(bvkit(&["jacobi", "fixtures/pi2d.bv"], None).0, 0);
    assert_eq!(bvkit(&["star-assoc", "--order", "4", "fixtures/moyal.bv"], None).0, 0);
    let (code, out, _) = bvkit(&["mc", "fixtures/non_poisson.bv"], None);
    assert_eq!(code, 1);
    assert!(out.contains("witness x, y, z"), "{out}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(bvkit(&["jacobi", "fixtures/missing.bv"], None).0, 2);
    assert_eq!(bvkit(&["frobnicate", "fixtures/pi2d.bv"], None).0, 2);
    assert_eq!(bvkit(&["jacobi"], None).0, 2);
    assert_eq!(bvkit(&["--cap", "many", "linf", "fixtures/pi2d.bv"], None).0, 2);
    // no binding named S
    let (code, _, err) = bvkit(&["cme", "fixtures/pi2d.bv"], None);
    assert_eq!(code, 2);
    assert!(err.contains("'S'"), "{err}");
}

#[test]
fn diagnostics_carry_positions() {
    let src = "context { th: deg 1; }\nlet g = th^2;\n";
    let (code, _, err) = bvkit(&["eval", "-"], Some(src));
    assert_eq!(code, 2);
    assert_eq!(err.trim(), "<stdin>:2:9: error: odd variable squared [th^2]");
    let (code, out, _) = bvkit(&["--json", "eval", "-"], Some("let f = (1 + ;"));
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["diagnostics"][0]["line"], 1);
    assert_eq!(v["diagnostics"][0]["col"], 14);
    let (code, _, err) = bvkit(&["eval", "-"], Some("context { x: deg 0; }\nlet f = x + q;"));
    assert_eq!(code, 2);
    assert!(err.contains("<stdin>:2:13: error: unknown identifier 'q'"), "{err}");
}

#[test]
fn failed_checks_exit_with_one() {
    let src = "context { x: deg 0; t: deg 1; }\ncheck x*t == t*x;\ncheck t*t == x;\n";
    let (code, out, _) = bvkit(&["eval", "-"], Some(src));
    assert_eq!(code, 1);
    assert!(out.contains("check 2:1 x*t == t*x: pass"), "{out}");
    assert!(out.contains("check 3:1 t*t == x: FAIL (residual -x)"), "{out}");
}

#[test]
fn config_defaults_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("bvkit-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bvkit.conf");
    std::fs::write(&cfg, "cap = 2\nprobes = 3\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (code, out, _) = bvkit(&["--config", c, "linf", "fixtures/non_poisson.bv"], None);
    // arity three is where the failure lives; the file caps the sweep below it
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 2);
    let (code, _, _) = bvkit(&["--config", c, "--cap", "3", "linf", "fixtures/non_poisson.bv"], None);
    assert_eq!(code, 1);
    let (_, out, _) = bvkit(&["--config", c, "star-assoc", "fixtures/moyal.bv"], None);
    assert!(out.contains("(219 triples)"), "{out}");
    std::fs::write(&cfg, "colour = 3\n").unwrap();
    assert_eq!(bvkit(&["--config", c, "jacobi", "fixtures/pi2d.bv"], None).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn order_flag_truncates_parameters() {
    let src = "context { x: deg 0; param eps trunc 1; }\ncheck eps^2 == 0;\n";
    assert_eq!(bvkit(&["eval", "-"], Some(src)).0, 0);
    assert_eq!(bvkit(&["--order", "2", "eval", "-"], Some(src)).0, 1);
}

#[test]
fn corpus_round_trips_through_the_printer() {
    let mut n = 0;
    for entry in std::fs::read_dir(root().join("fixtures")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("bv") {
            continue;
        }
        let src = std::fs::read_to_string(&path).unwrap();
        let script = parse(&src).unwrap();
        let printed = print_script(&script);
        assert_eq!(parse(&printed).unwrap(), script, "{}", path.display());
        assert_eq!(print_script(&parse(&printed).unwrap()), printed);
        n += 1;
    }
    assert!(n >= 10);
}
