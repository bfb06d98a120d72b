use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use neron::exact_linalg::IntMatrix;
use neron::{BigInt, BigRational, Complex64};
use neron_cli::family::{emit_family, parse_family, FamilySpec, NormalFunctionSpec};
use proptest::prelude::*;
use serde_json::Value;

fn neron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neron"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn family(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "families", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn component_group_of_elliptic_family() {
    let out = neron(&["component-group", "--family", &family("elliptic_r5.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["command"], "component-group");
    assert_eq!(report["tolerance"], "1e-9");
    assert_eq!(report["result"]["monodromies"][0]["torsion"], serde_json::json!(["5"]));
}

#[test]
fn probe_csv_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("probe.csv");
    let out = neron(&[
        "probe-hausdorff",
        "--p",
        "2",
        "--alpha",
        "1,0",
        "--beta",
        "0.5,0",
        "--samples",
        "16",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["result"]["verdict"], "TwoLimitWitness");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,t1_re,t1_im,t2_re,t2_im,chart0_re,chart0_im,shift_k"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r[5] == "2.0" && r[6] == "0.0"));
}

#[test]
fn probe_embeds_csv_without_flag() {
    let out = neron(&["probe-hausdorff", "--p", "-1", "--alpha", "1,0", "--beta", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["verdict"], "NoChart0Accumulation");
    assert!(report["result"]["csv"].as_str().unwrap().starts_with("j,t1_re"));
}

#[test]
fn exit_codes() {
    let unknown = neron(&["component-group", "--family", &family("elliptic_r5.json"), "--frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert_eq!(neron(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(neron(&["fiber"]).status.code(), Some(2));
    let bad_tol = neron(&["fiber", "--family", &family("elliptic_r5.json"), "--tol", "-1"]);
    assert_eq!(bad_tol.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let det2 = dir.path().join("det2.json");
    std::fs::write(&det2, r#"{"monodromy": [[["2", "0"], ["0", "1"]]]}"#).unwrap();
    let out = neron(&["component-group", "--family", det2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not unimodular"));

    let missing = dir.path().join("missing.json");
    assert_eq!(neron(&["analyze", "--family", missing.to_str().unwrap()]).status.code(), Some(1));
    let single = neron(&["link-cohomology", "--family", &family("elliptic_r5.json")]);
    assert_eq!(single.status.code(), Some(1));
    let short = neron(&["probe-hausdorff", "--p", "2", "--alpha", "1,0", "--beta", "0.5,0", "--samples", "3"]);
    assert_eq!(short.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["analyze", "--family", &family("elliptic_r5.json")],
        vec!["analyze", "--family", &family("bidisk.json"), "--tol", "1e-8"],
        vec!["probe-hausdorff", "--p", "3", "--alpha", "0.5,0.25", "--beta", "2,0"],
    ] {
        let a = neron(&args);
        let b = neron(&args);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = neron(&["nf-extend", "--family", &family("elliptic_r5.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["result"]["zucker"]["extends"], false);
    assert_eq!(report["result"]["clemens"]["component"]["coords"][0], "1");
}

#[test]
fn analyze_covers_the_bidisk_family() {
    let report = json(&neron(&["analyze", "--family", &family("bidisk.json")]));
    let result = &report["result"];
    assert_eq!(result["link_cohomology"]["admissible"]["group"]["display"], "Z");
    assert_eq!(result["fiber"]["ggk"]["discrete"], true);
    assert_eq!(result["limit_filtration"]["hypothesis_c"], true);
}

fn unitriangular(n: usize, entries: &[i64]) -> IntMatrix {
    let mut rows = vec![vec![BigInt::from(0); n]; n];
    let mut it = entries.iter();
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
        for x in row.iter_mut().skip(i + 1) {
            *x = BigInt::from(*it.next().unwrap_or(&0));
        }
    }
    IntMatrix::from_rows_vec(&rows).unwrap()
}

fn spec_strategy() -> impl Strategy<Value = FamilySpec> {
    (1usize..=3).prop_flat_map(|n| {
        let finite = -1e6f64..1e6;
        (
            prop::option::of("[a-z0-9 =]{0,12}"),
            prop::collection::vec(-9i64..=9, 3),
            prop::option::of(0u32..=3),
            prop::option::of(prop::collection::vec((finite.clone(), finite.clone()), n)),
            prop::option::of((
                prop::collection::btree_map(-2i64..=3, prop::collection::vec((finite.clone(), finite), n), 0..3),
                prop::collection::vec((-50i64..=50, 1i64..=12), n),
            )),
        )
            .prop_map(move |(label, entries, power, f0, nf)| {
                let t = unitriangular(n, &entries);
                let mut monodromy = vec![t.clone()];
                if let Some(k) = power {
                    monodromy.push(t.pow(k));
                }
                let f0 = f0.map(|col| {
                    let mut col: Vec<Complex64> = col.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
                    col[0] += Complex64::new(1e7, 0.0);
                    vec![col]
                });
                let normal_function = nf.map(|(sigma, ell)| NormalFunctionSpec {
                    sigma: sigma
                        .into_iter()
                        .map(|(k, v)| (k, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
                        .collect::<BTreeMap<_, _>>(),
                    ell: ell.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())).collect(),
                });
                FamilySpec {
                    label,
                    monodromy,
                    f0,
                    weight: -1,
                    normal_function,
                }
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn family_files_round_trip(spec in spec_strategy()) {
        let text = emit_family(&spec);
        let parsed = parse_family(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(emit_family(&parsed), text);
    }
}
