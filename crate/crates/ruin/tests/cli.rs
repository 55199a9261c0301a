use std::process::Command;

use ruin::{parse_canonical, FixtureSet, FormulaDocument};

fn ruin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ruin"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fixture_path() -> String {
    format!(
        "{}/fixtures/reference_moments.json",
        env!("CARGO_MANIFEST_DIR")
    )
}

#[test]
fn derive_prints_one_formula_per_line() {
    let (code, out, _) = ruin(&[
        "derive",
        "--players",
        "3",
        "--max-order",
        "2",
        "--kind",
        "raw",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "E[D] = 3*A*B*C/(A+B+C)^1");
    let second = lines[1].strip_prefix("E[D^2] = ").unwrap();
    assert!(parse_canonical(second).is_ok());
}

#[test]
fn central_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let (code, out, _) = ruin(&[
        "derive",
        "--players",
        "2",
        "--max-order",
        "4",
        "--kind",
        "central",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let set = FixtureSet::load(&path).unwrap();
    let orders: Vec<usize> = set.entries.iter().map(|d| d.order).collect();
    assert_eq!(orders, [1, 2, 3, 4]);
    let reference = FixtureSet::load(fixture_path()).unwrap();
    for doc in set.entries.iter().skip(1) {
        let want: &FormulaDocument = reference
            .for_players(2)
            .find(|r| r.kind == doc.kind && r.order == doc.order)
            .unwrap();
        assert_eq!(doc.to_formula().unwrap(), want.to_formula().unwrap());
    }
}

#[test]
fn verify_two_players_matches() {
    let (code, out, _) = ruin(&["verify", "--players", "2", "--fixtures", &fixture_path()]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("match")).count(), 5);
}

#[test]
fn verify_reports_the_scaled_three_player_entry() {
    let (code, out, err) = ruin(&["verify", "--players", "3", "--fixtures", &fixture_path()]);
    assert_eq!(code, 1);
    assert!(out.contains("MISMATCH m_3: fixture = 3 * derived"), "{out}");
    assert!(out.contains("match m_2") && out.contains("match m_4") && out.contains("match E[D]"));
    assert!(err.contains("1 fixture"));
}

#[test]
fn verify_rejects_a_missing_file() {
    let (code, _, err) = ruin(&[
        "verify",
        "--players",
        "2",
        "--fixtures",
        "/nonexistent/x.json",
    ]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn unknown_flag_prints_usage_and_exits_two() {
    let (code, out, err) = ruin(&[
        "oracle",
        "--capitals",
        "1,2",
        "--max-order",
        "1",
        "--frobnicate",
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn oracle_prints_exact_rationals() {
    let (code, out, _) = ruin(&["oracle", "--capitals", "1,1,2", "--max-order", "2"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("f_1 = 3/2\n") && out.contains("f_2 = 3/4\n"),
        "{out}"
    );
    let (code, out, _) = ruin(&["oracle", "--capitals", "3,7", "--max-order", "1"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("f_1 = 21\n") && out.contains("P_win_1 = 3/10\n"),
        "{out}"
    );
}

#[test]
fn limits_print_exact_and_decimal_forms() {
    let (code, out, _) = ruin(&[
        "limits",
        "--players",
        "3",
        "--max-order",
        "4",
        "--digits",
        "20",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("L_3^2 = 169/50\n"));
    assert!(out.contains("L_3 ~ 1.8384776310850235634\n"));
    assert!(out.contains("L_4 = 579/70\n"));
    assert!(out.contains("L_4 ~ 8.2714285714285714286\n"));
}

#[test]
fn simulate_is_deterministic_across_processes() {
    let args = [
        "simulate",
        "--capitals",
        "2,2,2",
        "--trials",
        "2000",
        "--seed",
        "5",
        "--stop-rule",
        "first-ruin",
    ];
    let (c1, a, _) = ruin(&args);
    let (c2, b, _) = ruin(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.contains("reference_mean = 4\n"));
    let (_, other, _) = ruin(&[
        "simulate",
        "--capitals",
        "2,2,2",
        "--trials",
        "2000",
        "--seed",
        "6",
        "--stop-rule",
        "first-ruin",
    ]);
    assert_ne!(a, other);
}

#[test]
fn one_step_games_have_mean_one() {
    let (code, out, _) = ruin(&[
        "simulate",
        "--capitals",
        "1,1",
        "--trials",
        "100",
        "--seed",
        "7",
        "--stop-rule",
        "first-ruin",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("mean = 1.0\n"));
    assert!(out.contains("variance = 0.0\n"));
}
