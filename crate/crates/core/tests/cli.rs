use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn factedit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_factedit")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const DATASET: &str = concat!(
    r#"{"id":"d1","dialogue":"Derek: I'll come alone.","original":"Derek and Phil will come .","reference":"Derek will come .","hypothesis":"Derek will come ."}"#,
    "\n",
    r#"{"id":"d2","dialogue":"Ola: I'll be on time.","original":"Ola will be late .","reference":"Ola won't be late .","hypothesis":"Ola will be late ."}"#,
    "\n",
    r#"{"id":"d3","dialogue":"","original":"Ola will be late .","reference":"Ola will be late .","hypothesis":"Ola may be late ."}"#,
    "\n",
);

const ANNOTATIONS: &str = "\
# id = d1.orig
1\tDerek\tderek\tPROPN\t_\t_
2\tand\tand\tCCONJ\t_\t_
3\tPhil\tphil\tPROPN\t_\t_
4\twill\twill\tAUX\t_\t_
5\tcome\tcome\tVERB\t_\t_
6\t.\t.\tPUNCT\t_\t_

# id = d1.ref
1\tDerek\tderek\tPROPN\t_\t_
2\twill\twill\tAUX\t_\t_
3\tcome\tcome\tVERB\t_\t_
4\t.\t.\tPUNCT\t_\t_

# id = d1.hyp
1\tDerek\tderek\tPROPN\t_\t_
2\twill\twill\tAUX\t_\t_
3\tcome\tcome\tVERB\t_\t_
4\t.\t.\tPUNCT\t_\t_

# id = d2.orig
1\tOla\tola\tPROPN\t_\t_
2\twill\twill\tAUX\t_\t_
3\tbe\tbe\tAUX\t_\t_
4\tlate\tlate\tADJ\t_\t_
5\t.\t.\tPUNCT\t_\t_

# id = d2.ref
1\tOla\tola\tPROPN\t_\t_
2\twon't\twill\tAUX\t_\t_
3\tbe\tbe\tAUX\t_\t_
4\tlate\tlate\tADJ\t_\t_
5\t.\t.\tPUNCT\t_\t_

# id = d2.hyp
1\tOla\tola\tPROPN\t_\t_
2\twill\twill\tAUX\t_\t_
3\tbe\tbe\tAUX\t_\t_
4\tlate\tlate\tADJ\t_\t_
5\t.\t.\tPUNCT\t_\t_

# id = d3.orig
1\tOla\tola\tPROPN\t_\t_
2\twill\twill\tAUX\t_\t_
3\tbe\tbe\tAUX\t_\t_
4\tlate\tlate\tADJ\t_\t_
5\t.\t.\tPUNCT\t_\t_

# id = d3.ref
1\tOla\tola\tPROPN\t_\t_
2\twill\twill\tAUX\t_\t_
3\tbe\tbe\tAUX\t_\t_
4\tlate\tlate\tADJ\t_\t_
5\t.\t.\tPUNCT\t_\t_

# id = d3.hyp
1\tOla\tola\tPROPN\t_\t_
2\tmay\tmay\tAUX\t_\t_
3\tbe\tbe\tAUX\t_\t_
4\tlate\tlate\tADJ\t_\t_
5\t.\t.\tPUNCT\t_\t_

";

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let fixture = Fixture { dir: tempfile::tempdir().unwrap() };
        fixture.write("data.jsonl", DATASET);
        fixture.write("ann.conllu", ANNOTATIONS);
        fixture
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.path(name);
        fs::write(&path, text).unwrap();
        arg(&path)
    }

    fn data(&self) -> String {
        arg(&self.path("data.jsonl"))
    }

    fn ann(&self) -> String {
        arg(&self.path("ann.conllu"))
    }
}

fn arg(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn extract_writes_one_block_per_item() {
    let fx = Fixture::new();
    let out = factedit(&["extract", "--dataset", &fx.data(), "--annotations", &fx.ann()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "# id = d1\nS Derek and Phil will come .\nA 1 3|||U:Ent:ObjE||||||REQUIRED|||-NONE-|||0\n\n\
         # id = d2\nS Ola will be late .\nA 1 2|||R:Pred:NegE|||won't|||REQUIRED|||-NONE-|||0\n\n\
         # id = d3\nS Ola will be late .\n\n"
    );
}

#[test]
fn extract_without_classification_writes_na() {
    let fx = Fixture::new();
    let out = factedit(&["extract", "--dataset", &fx.data(), "--annotations", &fx.ann(), "--no-classify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("A 1 3|||U:NA|||"));
}

#[test]
fn evaluate_equals_extract_then_compare() {
    let fx = Fixture::new();
    let base = ["--dataset".to_string(), fx.data(), "--annotations".to_string(), fx.ann()];
    let base: Vec<&str> = base.iter().map(String::as_str).collect();
    let reference = fx.path("ref.m2");
    let hyp = fx.path("hyp.m2");
    let (reference, hyp) = (arg(&reference), arg(&hyp));
    assert_eq!(factedit(&[&["extract"], &base[..], &["-o", &reference]].concat()).status.code(), Some(0));
    assert_eq!(
        factedit(&[&["extract"], &base[..], &["--target", "hypothesis", "-o", &hyp]].concat()).status.code(),
        Some(0)
    );
    for axis in ["form", "content", "combined", "total"] {
        for format in ["json", "tsv"] {
            let scoring = ["--axis", axis, "--format", format];
            let composed = factedit(&[&["compare", "--hyp", &hyp, "--ref", &reference], &scoring[..]].concat());
            let direct = factedit(&[&["evaluate"], &base[..], &scoring[..]].concat());
            assert_eq!(composed.status.code(), Some(0), "{}", stderr(&composed));
            assert_eq!(stdout(&composed), stdout(&direct), "{axis} {format}");
        }
    }
}

#[test]
fn evaluate_reports_counts_in_tsv() {
    let fx = Fixture::new();
    let out = factedit(&["evaluate", "--dataset", &fx.data(), "--annotations", &fx.ann(), "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    // d1 agrees, d2 misses the negation, d3 over-corrects.
    assert_eq!(
        stdout(&out),
        "category\ttp\tfp\tfn\tP\tR\tF0.5\n\
         M\t0\t0\t0\t-\t-\t-\n\
         R\t0\t1\t1\t0.00\t0.00\t0.00\n\
         U\t1\t0\t0\t100.00\t100.00\t100.00\n\
         Total\t1\t1\t1\t50.00\t50.00\t50.00\n"
    );
}

#[test]
fn evaluate_json_schema() {
    let fx = Fixture::new();
    let out = factedit(&["evaluate", "--dataset", &fx.data(), "--annotations", &fx.ann(), "--axis", "content"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["axis"], "content");
    assert_eq!(v["beta"], 0.5);
    assert_eq!(v["categories"]["Ent:ObjE"]["tp"], 1);
    assert_eq!(v["categories"]["Pred:NegE"]["fn"], 1);
    assert_eq!(v["categories"]["Pred:ModE"]["fp"], 1);
    assert!(v["categories"]["CircE"]["p"].is_null());
    assert_eq!(v["total"]["tp"], 1);
}

#[test]
fn hypothesis_equal_to_original_scores_no_recall() {
    let fx = Fixture::new();
    let data = fx.write(
        "unchanged.jsonl",
        &DATASET
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v["hypothesis"] = v["original"].clone();
                v.to_string() + "\n"
            })
            .collect::<String>(),
    );
    let out =
        factedit(&["evaluate", "--dataset", &data, "--annotator", "builtin", "--format", "tsv", "--axis", "total"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).ends_with("Total\t0\t0\t2\t100.00\t0.00\t0.00\n"), "{}", stdout(&out));
}

#[test]
fn hypothesis_equal_to_reference_scores_full_marks() {
    let fx = Fixture::new();
    let data = fx.write(
        "perfect.jsonl",
        &DATASET
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v["hypothesis"] = v["reference"].clone();
                v.to_string() + "\n"
            })
            .collect::<String>(),
    );
    let out =
        factedit(&["evaluate", "--dataset", &data, "--annotator", "builtin", "--format", "tsv", "--axis", "combined"]);
    let text = stdout(&out);
    for row in text.lines().skip(1) {
        assert!(row.ends_with("\t100.00\t100.00\t100.00"), "{row}");
    }
}

#[test]
fn compare_identical_files() {
    let fx = Fixture::new();
    let edits = fx.path("ref.m2");
    let edits = arg(&edits);
    factedit(&["extract", "--dataset", &fx.data(), "--annotations", &fx.ann(), "-o", &edits]);
    let out = factedit(&["compare", "--hyp", &edits, "--ref", &edits, "--format", "tsv", "--axis", "content"]);
    for row in stdout(&out).lines().skip(1) {
        assert!(row.ends_with("\t100.00\t100.00\t100.00") || row.ends_with("\t-\t-\t-"), "{row}");
    }
}

#[test]
fn compare_rejects_mismatched_sentences() {
    let fx = Fixture::new();
    let a = fx.write("a.m2", "# id = s1\nS a b\n\n# id = s2\nS c d\n\n");
    let b = fx.write("b.m2", "# id = s1\nS a b\n\n# id = s2\nS c e\n\n");
    let out = factedit(&["compare", "--hyp", &a, "--ref", &b]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("s2"), "{}", stderr(&out));
}

#[test]
fn compare_rejects_malformed_edit_file() {
    let fx = Fixture::new();
    let a = fx.write("a.m2", "# id = s1\nS a b\nA 0 9|||R:OthE|||x|||REQUIRED|||-NONE-|||0\n\n");
    let out = factedit(&["compare", "--hyp", &a, "--ref", &a]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn missing_annotation_names_the_id() {
    let fx = Fixture::new();
    let partial = fx.write("partial.conllu", ANNOTATIONS.split("# id = d2.orig").next().unwrap());
    let out = factedit(&["extract", "--dataset", &fx.data(), "--annotations", &partial]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("d2.orig"), "{}", stderr(&out));
}

#[test]
fn malformed_dataset_is_a_data_error() {
    let fx = Fixture::new();
    let data = fx.write("bad.jsonl", "{\"id\":1}\n");
    let out = factedit(&["extract", "--dataset", &data, "--annotator", "builtin"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_one() {
    let fx = Fixture::new();
    let cases: Vec<Vec<String>> = vec![
        vec![],
        vec!["bogus".into()],
        vec!["extract".into()],
        vec![
            "evaluate".into(),
            "--dataset".into(),
            fx.data(),
            "--annotator".into(),
            "builtin".into(),
            "--beta".into(),
            "0".into(),
        ],
        vec![
            "evaluate".into(),
            "--dataset".into(),
            fx.data(),
            "--annotator".into(),
            "builtin".into(),
            "--axis".into(),
            "diagonal".into(),
        ],
        vec!["evaluate".into(), "--dataset".into(), fx.data()],
        vec![
            "evaluate".into(),
            "--dataset".into(),
            fx.data(),
            "--annotator".into(),
            "builtin".into(),
            "--annotations".into(),
            fx.ann(),
        ],
    ];
    for case in cases {
        let args: Vec<&str> = case.iter().map(String::as_str).collect();
        let out = factedit(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn help_exits_zero() {
    let out = factedit(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("evaluate"));
}

#[test]
fn beta_changes_f() {
    let fx = Fixture::new();
    let run = |beta: &str| {
        let out = factedit(&["evaluate", "--dataset", &fx.data(), "--annotations", &fx.ann(), "--beta", beta]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        (v["beta"].as_f64().unwrap(), v["total"]["f"].as_f64().unwrap())
    };
    assert_eq!(run("1"), (1.0, 0.5));
    assert_eq!(run("2").0, 2.0);
}

#[test]
fn stats_tsv_and_json() {
    let fx = Fixture::new();
    let out = factedit(&["stats", "--dataset", &fx.data(), "--annotations", &fx.ann()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2, "{text}");
    let json = factedit(&["stats", "--dataset", &fx.data(), "--annotations", &fx.ann(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let group = &v.as_array().unwrap()[0];
    assert_eq!(group["items"], 3);
    // Two of the three references differ from their original.
    assert!((group["error_rate"].as_f64().unwrap() - 200.0 / 3.0).abs() < 1e-9, "{group}");
}

#[test]
fn output_flag_writes_file() {
    let fx = Fixture::new();
    let target = fx.path("report.json");
    let out = factedit(&["evaluate", "--dataset", &fx.data(), "--annotations", &fx.ann(), "-o", &arg(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(target).unwrap().contains("\"total\""));
}
