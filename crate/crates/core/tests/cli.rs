use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plane-traces"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (Output, String) {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--out", &p]);
    let out = run(&full);
    let text = fs::read_to_string(&path).unwrap_or_default();
    (out, text)
}

/// Data rows (no comment, no header) split into cells.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(csv: &str) -> &str {
    csv.lines().find(|l| !l.starts_with('#')).unwrap()
}

#[test]
fn census_cubics_over_f2() {
    let out = run(&["census", "--q", "2", "--d", "3", "--mode", "exhaustive"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("# plane-traces census --q 2 --d 3 --mode exhaustive\n"));
    assert_eq!(
        header(&csv),
        "q,d,mode,smooth_only,seed,samples,total,t,x,count,density,ks_density,v_value,std_error"
    );
    let rows = rows(&csv);
    let total: u64 = rows.iter().map(|r| r[9].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 1024);
    for r in &rows {
        assert_eq!(r[6], "1024");
        assert_eq!((r[4].as_str(), r[5].as_str(), r[11].as_str(), r[13].as_str()), ("", "", "", ""));
    }
    let ts: Vec<i64> = rows.iter().map(|r| r[7].parse().unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn census_is_shard_independent() {
    let dir = tempfile::tempdir().unwrap();
    for (tag, args) in [
        ("ex", vec!["census", "--q", "2", "--d", "4", "--smooth-only"]),
        ("mc", vec!["census", "--q", "7", "--d", "4", "--mode", "mc", "--samples", "3000", "--seed", "9", "--smooth-only"]),
        ("raw", vec!["census", "--q", "4", "--d", "2"]),
    ] {
        let mut one = args.clone();
        one.extend(["--shards", "1"]);
        let mut eight = args.clone();
        eight.extend(["--shards", "8"]);
        let (a, ta) = run_to(dir.path(), &format!("{tag}1.csv"), &one);
        let (b, tb) = run_to(dir.path(), &format!("{tag}8.csv"), &eight);
        assert!(a.status.success() && b.status.success(), "{tag}");
        assert!(!ta.is_empty());
        assert_eq!(ta, tb, "{tag}");
    }
}

#[test]
fn census_svg_and_ks_columns() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = run_to(
        dir.path(),
        "mc.csv",
        &["census", "--q", "5", "--d", "4", "--mode", "mc", "--samples", "2000", "--seed", "1", "--smooth-only", "--svg"],
    );
    assert!(out.status.success());
    for r in rows(&csv) {
        assert_eq!(r[2], "mc");
        assert_eq!(r[4], "1");
        assert_eq!(r[5], "2000");
        assert!(!r[11].is_empty() && !r[13].is_empty());
    }
    let svg = fs::read_to_string(dir.path().join("mc.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("B2"));
}

#[test]
fn evalmap_checks() {
    let dir = tempfile::tempdir().unwrap();
    let dist = dir.path().join("dist.csv");
    let (out, csv) = run_to(
        dir.path(),
        "e.csv",
        &["evalmap", "--q", "2", "--d", "2-8", "--dist-out", dist.to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(header(&csv), "q,d,dim_Rd,N,rank,nullity,dim_Jd,kernel_is_J");
    let rows_e = rows(&csv);
    assert_eq!(rows_e.len(), 7);
    assert!(rows_e.iter().all(|r| r[7] == "true"));
    let d3 = rows_e.iter().find(|r| r[1] == "3").unwrap();
    assert_eq!(&d3[2..7], ["10", "7", "7", "3", "3"]);
    let dist = fs::read_to_string(dist).unwrap();
    let d3: Vec<_> = rows(&dist).into_iter().filter(|r| r[1] == "3").collect();
    assert_eq!(d3.len(), 8);
    assert!(d3.iter().all(|r| r[3] == r[4] && !r[3].is_empty()));

    let out = run(&["evalmap", "--q", "2,3,4,5,7", "--d", "3,5,7,9,13"]);
    assert!(out.status.success());
}

#[test]
fn models_grid() {
    let out = run(&["models", "--q", "53", "--grid", "-6:6:0.05"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(header(&csv), "x,gauss,psi,B1,B2,B3,V1,V2,V3");
    let rows = rows(&csv);
    assert_eq!(rows.len(), 241);
    let x: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    let psi: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(psi[120], 0.0);
    let root = 3f64.sqrt();
    let i = x.iter().position(|&v| v > root).unwrap();
    assert!(psi[i - 1] > 0.0 && psi[i] < 0.0);
    for r in &rows {
        let b: Vec<f64> = r[3..6].iter().map(|s| s.parse().unwrap()).collect();
        let xv: f64 = r[0].parse().unwrap();
        if xv.abs() <= 3.0 {
            assert!((b[0] - b[1]).abs() < 0.01 && (b[1] - b[2]).abs() < 0.01 && (b[0] - b[2]).abs() < 0.01);
        }
    }
}

#[test]
fn models_domain_violation_aborts() {
    let out = run(&["models", "--q", "3", "--grid", "-6:6:0.5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("row x="));
}

#[test]
fn residuals_runs() {
    let out = run(&["residuals", "--family", "F2", "--check-decay"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(header(&csv), "family,q,sigma,x,b,r1,r2,r3");
    assert_eq!(rows(&csv).len(), 48);

    let out = run(&["residuals", "--family", "symmetric", "--check-decay"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(rows(&csv).iter().all(|r| r[7].parse::<f64>().unwrap() == 0.0));

    let out = run(&["residuals", "--family", "F1", "--q", "53"]);
    assert_eq!(rows(&String::from_utf8(out.stdout).unwrap()).len(), 12);
    assert!(!run(&["residuals", "--family", "F9"]).status.success());
}

#[test]
fn mass_check_over_f2() {
    let out = run(&["mass-check", "--q", "2"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(header(&csv), "q,t,form_count,orbit_form_count,form_count_over_gl3,orbit_sum,equal");
    let rows = rows(&csv);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[6] == "true" && r[4] == r[5] && r[2] == r[3]));
    assert!(!run(&["mass-check", "--q", "5"]).status.success());
}

#[test]
fn other_commands_are_shard_independent() {
    let dir = tempfile::tempdir().unwrap();
    for (tag, args) in [
        ("evalmap", vec!["evalmap", "--q", "2,3", "--d", "2-6"]),
        ("mass", vec!["mass-check", "--q", "2"]),
    ] {
        let mut one = args.clone();
        one.extend(["--shards", "1"]);
        let mut eight = args.clone();
        eight.extend(["--shards", "8"]);
        let (_, a) = run_to(dir.path(), &format!("{tag}1.csv"), &one);
        let (_, b) = run_to(dir.path(), &format!("{tag}8.csv"), &eight);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{tag}");
    }
}

#[test]
fn invalid_flags_fail() {
    for args in [
        vec!["census", "--q", "6", "--d", "3"],
        vec!["census", "--q", "2", "--samples", "0", "--mode", "mc"],
        vec!["census", "--q", "2", "--shards", "0"],
        vec!["census", "--q", "7", "--d", "4"],
        vec!["models", "--grid", "1:0:0.1"],
        vec!["models", "--grid", "0:1:-0.1"],
        vec!["bogus"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
