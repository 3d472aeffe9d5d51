use std::process::{Command, Output};

use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::Value;

use qcensus::asymptotics::{estimate_class_count, estimate_qbinom, estimate_s, star_classify, DimensionFamily};
use qcensus::census::{census, CensusConfig, Method};
use qcensus::combinatorics::{qbinom, sum_qbinom};
use qcensus::constants::{euler_kq, inverse_nome, theta3, Precision};
use qcensus::interval::{render_bounds, to_decimal, Rounding};
use qcensus::theta::{
    convergence_report, format_half, shifted_distribution, tv_distance, DiscreteThetaDistribution, Parity, Sampler,
    ThetaVariant,
};
use qcensus::{FieldSpec, GroupKind};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcensus")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).expect("valid JSON")
}

fn error(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    (out.status.code().unwrap(), serde_json::from_str(&err).expect("error is JSON"))
}

fn p(digits: u32) -> Precision {
    Precision::new(digits)
}

#[test]
fn qbinom_and_sum() {
    assert_eq!(stdout(&["qbinom", "--n", "4", "--k", "2", "--q", "2"]), "35\n");
    assert_eq!(stdout(&["qbinom", "--n", "4", "--k", "-1", "--q", "2"]), "0\n");
    let big = stdout(&["qbinom", "--n", "40", "--k", "17", "--q", "9"]);
    assert_eq!(big.trim(), qbinom(40, 17, 9).unwrap().to_string());
    assert_eq!(stdout(&["sum", "--n", "6", "--q", "3"]).trim(), sum_qbinom(6, 3).unwrap().to_string());
    let v = json(&["qbinom", "--n", "5", "--k", "2", "--q", "4"]);
    assert_eq!(v["command"], "qbinom");
    assert_eq!(v["rows"][0]["value"], Value::from(qbinom(5, 2, 4).unwrap().to_string()));
    assert_eq!(v["rows"][0]["n"], 5);
}

#[test]
fn census_both_methods() {
    let v = json(&["census", "--group", "perm", "--n", "3", "--k", "1", "--q", "2", "--method", "both"]);
    let row = &v["rows"][0];
    assert_eq!(row["count"], "3");
    assert_eq!(row["burnside_count"], "3");
    assert_eq!(row["orbit_count"], "3");
    assert_eq!(row["agreement"], true);
    assert_eq!(row["group_order"], "6");
    assert_eq!(row["elapsed_ms"], Value::Null);
}

#[test]
fn census_matches_library() {
    let config = CensusConfig::default();
    for (group, kind, q, n, k) in [
        ("perm", GroupKind::Permutation, 2u64, 5usize, Some(2usize)),
        ("mono", GroupKind::Monomial, 3, 4, None),
        ("semi", GroupKind::Semilinear, 4, 4, Some(2)),
    ] {
        let (ns, qs) = (n.to_string(), q.to_string());
        let ks = k.map(|k| k.to_string());
        let mut args = vec!["census", "--group", group, "--n", &ns, "--q", &qs, "--format", "csv"];
        if let Some(ks) = &ks {
            args.extend(["--k", ks]);
        }
        let lib = census(kind, &FieldSpec::of_order(q).unwrap(), n, k, Method::Burnside, &config).unwrap();
        let k_text = ks.clone().unwrap_or_else(|| "all".into());
        let expected = format!("group,n,k,q,method,count,elapsed_ms\n{group},{n},{k_text},{q},burnside,{},\n", lib.count);
        assert_eq!(stdout(&args), expected);
    }
}

#[test]
fn census_profile_and_timing() {
    let v = json(&["census", "--group", "mono", "--n", "3", "--k", "1", "--q", "3", "--profile", "--timing"]);
    let row = &v["rows"][0];
    assert!(row["elapsed_ms"].is_i64());
    let profile = row["fix_profile"].as_object().unwrap();
    assert!(!profile.is_empty());
    let fix_sum: u64 = row["fix_sum"].as_str().unwrap().parse().unwrap();
    assert_eq!(profile.len(), 48);
    let listed: u64 = profile.values().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(listed, fix_sum);
    let csv = stdout(&["census", "--group", "perm", "--n", "3", "--q", "2", "--timing", "--format", "csv"]);
    let last = csv.lines().nth(1).unwrap().rsplit(',').next().unwrap();
    assert!(last.parse::<u64>().is_ok(), "{csv}");
}

#[test]
fn census_threads_do_not_change_counts() {
    let base = ["census", "--group", "semi", "--n", "4", "--q", "4", "--method", "both", "--format", "csv"];
    let one = stdout(&base);
    for t in ["2", "8"] {
        let mut args = base.to_vec();
        args.extend(["--threads", t]);
        assert_eq!(stdout(&args), one);
    }
}

#[test]
fn constants_match_library() {
    let v = json(&["constants", "--q", "2", "--precision", "25", "--k", "4"]);
    let rows = v["rows"].as_array().unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["K_2", "K_2(4)", "theta2(1/2)", "theta3(1/2)", "d1", "d2"]);
    assert_eq!(v["digits"], 25);
    let kq = euler_kq(2, p(25).finest_tolerance(), p(25)).unwrap();
    let (lo, hi) = render_bounds(&kq.interval, 25);
    assert_eq!((rows[0]["lo"].as_str().unwrap(), rows[0]["hi"].as_str().unwrap()), (lo.as_str(), hi.as_str()));
    let t3 = theta3(&inverse_nome(2), p(25).finest_tolerance(), p(25)).unwrap();
    let (lo, hi) = render_bounds(&t3.interval, 25);
    assert_eq!((rows[3]["lo"].as_str().unwrap(), rows[3]["hi"].as_str().unwrap()), (lo.as_str(), hi.as_str()));

    let v = json(&["constants", "--nome", "0.3"]);
    let names: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["theta2(3/10)", "theta3(3/10)"]);
    let table = stdout(&["constants", "--q", "3", "--precision", "12"]);
    assert!(table.starts_with("name"), "{table}");
}

#[test]
fn estimates_match_library() {
    let v = json(&["estimate", "--what", "qbinom", "--n", "10", "--k", "5", "--q", "2", "--precision", "15"]);
    let row = &v["rows"][0];
    let e = estimate_qbinom(10, 5, 2, p(15)).unwrap();
    assert_eq!(row["estimate"], Value::from(e.render(15)));
    assert_eq!(row["exact"], "109221651");
    let ratio = to_decimal(&e.ratio_from(&BigUint::from(109221651u32)).mid(), 15, Rounding::Nearest);
    assert_eq!(row["ratio"], Value::from(ratio));

    let v = json(&["estimate", "--what", "class", "--group", "mono", "--n", "8", "--k", "4", "--q", "3"]);
    let e = estimate_class_count(GroupKind::Monomial, 8, 4, 3, 1, p(50)).unwrap();
    assert_eq!(v["rows"][0]["estimate"], Value::from(e.render(50)));

    let v = json(&["estimate", "--what", "s", "--n", "6", "--q", "2", "--precision", "12"]);
    let e = estimate_s(6, 2, p(12)).unwrap().estimate;
    assert_eq!(v["rows"][0]["estimate"], Value::from(e.render(12)));
    assert_eq!(v["rows"][0]["exact"], "2825");

    for what in ["central", "central-power", "total"] {
        let v = json(&["estimate", "--what", what, "--n", "9", "--k", "3", "--group", "semi", "--q", "4"]);
        assert_eq!(v["rows"][0]["quantity"], what);
    }
    let (code, _) = error(&["estimate", "--what", "class", "--n", "8", "--k", "4", "--q", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn convergence_report_schema_and_values() {
    let csv = stdout(&["converge", "--parity", "even", "--q", "2", "--m-max", "3", "--precision", "15", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("m,exact_gap,tv_lo,tv_hi"));
    let rows = convergence_report(Parity::Even, 2, 1..=3, u64::MAX, p(15)).unwrap();
    for (line, row) in lines.zip(&rows) {
        let (lo, hi) = render_bounds(&row.tv, 15);
        let gap = to_decimal(&row.exact_gap.hi(), 15, Rounding::Up);
        assert_eq!(line, format!("{},{gap},{lo},{hi}", row.m));
    }
    let (code, v) = error(&["converge", "--parity", "odd", "--q", "2", "--m-max", "400", "--work-ceiling", "1000"]);
    assert_eq!((code, v["error"].as_str()), (2, Some("ceiling")));
}

#[test]
fn theta_pmf() {
    let out = stdout(&["dist", "--variant", "theta3", "--nome", "0.5", "--op", "pmf", "--k", "0", "--precision", "12"]);
    assert_eq!(out, "0.469718024141\n");
    let law = DiscreteThetaDistribution::new(ThetaVariant::Theta2, BigRational::new(1.into(), 3.into()), p(20)).unwrap();
    let v = json(&["dist", "--variant", "theta2", "--nome", "1/3", "--op", "pmf", "--k", "-3/2", "--precision", "20"]);
    let (lo, hi) = render_bounds(&law.pmf(-3).unwrap(), 20);
    assert_eq!(v["rows"][0]["lo"], Value::from(lo));
    assert_eq!(v["rows"][0]["hi"], Value::from(hi));
    assert_eq!(v["rows"][0]["k"], "-3/2");
    let (code, _) = error(&["dist", "--variant", "theta2", "--nome", "0.5", "--op", "pmf", "--k", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn sampling_matches_library_and_seed() {
    let args = ["dist", "--op", "sample", "--variant", "theta3", "--q", "2", "--count", "50", "--seed", "9"];
    let law = DiscreteThetaDistribution::for_parity(Parity::Even, 2, p(50)).unwrap();
    let mut s = Sampler::new(&law, 9);
    let v = json(&args);
    for (i, row) in v["rows"].as_array().unwrap().iter().enumerate() {
        assert_eq!(row["index"], i as i64);
        assert_eq!(row["value"], Value::from(format_half(s.sample())));
    }
    let mut other = args.to_vec();
    other[10] = "10";
    assert_ne!(stdout(&args), stdout(&other));
}

#[test]
fn shifted_and_tv_match_library() {
    let csv = stdout(&["dist", "--op", "shifted", "--parity", "odd", "--m", "2", "--q", "3", "--format", "csv"]);
    let d = shifted_distribution(Parity::Odd, 2, 3).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,p"));
    for (line, (t, p)) in lines.zip(d.support.iter().zip(&d.pmf)) {
        assert_eq!(line, format!("{},{}/{}", format_half(*t), p.numer(), p.denom()));
    }
    let v = json(&["dist", "--op", "tv", "--parity", "even", "--m", "4", "--q", "2", "--precision", "20"]);
    let law = DiscreteThetaDistribution::for_parity(Parity::Even, 2, p(20)).unwrap();
    let tv = tv_distance(&shifted_distribution(Parity::Even, 4, 2).unwrap(), &law).unwrap();
    let (lo, hi) = render_bounds(&tv, 20);
    assert_eq!((v["rows"][0]["tv_lo"].clone(), v["rows"][0]["tv_hi"].clone()), (Value::from(lo), Value::from(hi)));
    let (code, v) = error(&["dist", "--op", "tv", "--parity", "even", "--variant", "theta2", "--m", "4", "--q", "2"]);
    assert_eq!((code, v["error"].as_str()), (1, Some("validation")));
}

#[test]
fn asymptotic_proportion() {
    let v = json(&["dist", "--op", "asymptotic", "--parity", "even", "--k", "30", "--m", "30", "--q", "2"]);
    let value: f64 = v["rows"][0]["value"].as_str().unwrap().parse().unwrap();
    assert!((value - 0.469718024141).abs() < 1e-9, "{value}");
}

#[test]
fn star_classifications() {
    let cases: [(&[&str], DimensionFamily); 4] = [
        (&["--family", "half-floor-minus-const", "--r", "2"], DimensionFamily::HalfFloorMinusConst { r: 2 }),
        (&["--family", "constant-dim", "--alpha", "3"], DimensionFamily::ConstantDim { alpha: 3 }),
        (&["--family", "linear-fraction", "--lambda", "0.3"], DimensionFamily::LinearFraction { lambda: 0.3 }),
        (
            &["--family", "half-minus-power-log", "--alpha", "0.5", "--beta", "1"],
            DimensionFamily::HalfMinusPowerLog { alpha: 0.5, beta: 1.0 },
        ),
    ];
    for (flags, family) in cases {
        let mut args = vec!["star"];
        args.extend(flags);
        let v = json(&args);
        assert_eq!(v["rows"][0]["classification"], star_classify(&family).unwrap().name());
    }
    let (code, _) = error(&["star", "--family", "linear-fraction", "--lambda", "0.7"]);
    assert_eq!(code, 1);
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        &["qbinom", "--n", "4", "--k", "2", "--q", "6"][..],
        &["qbinom", "--n", "4", "--k", "2"],
        &["frobnicate"],
        &["sum", "--n", "3", "--q", "2", "--precision", "9"],
        &["census", "--group", "perm", "--n", "3", "--q", "2", "--threads", "0"],
        &["dist", "--op", "pmf", "--variant", "theta3", "--nome", "1.5", "--k", "0"],
    ] {
        let (code, v) = error(args);
        assert_eq!(code, 1, "{args:?}");
        assert_eq!(v["exit"], 1);
        assert!(v["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
}

#[test]
fn ceilings_exit_two() {
    let (code, v) = error(&["census", "--group", "semi", "--n", "9", "--k", "4", "--q", "4"]);
    assert_eq!((code, v["error"].as_str()), (2, Some("ceiling")));
    let (code, _) = error(&["census", "--group", "perm", "--n", "6", "--q", "2", "--work-ceiling", "100"]);
    assert_eq!(code, 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("qcensus-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["sum", "--n", "4", "--q", "2", "--format", "csv", "--out", p]), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n,q,value\n4,2,67\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn json_round_trip_is_stable() {
    let args = ["census", "--group", "mono", "--n", "4", "--k", "2", "--q", "3", "--profile", "--format", "json"];
    let text = stdout(&args);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    assert_eq!(text, stdout(&args));
}
