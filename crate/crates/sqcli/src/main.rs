//! `sq`: command-line front end for the steenrod crate.
//!
//! Subcommands: `norm` (admissible normal forms), `tables` (tabulated
//! basis rows with golden-dimension comparison), `em-basis` (one degree of
//! a mod-2 Eilenberg-MacLane space), `verify` (the verification suites,
//! emitting a digest-stamped report), and `wu` (the Wu and
//! Stiefel-Whitney profile of an algebra description).
//!
//! Exit codes: 0 success, 2 invalid input, 3 check failure.
//! Output is byte-stable for identical inputs; the only volatile field is
//! the opt-in `--timestamp` sidecar, which is excluded from the digest.
//! Configuration precedence: flags, then `--config` file, then defaults.
//! Environment variables are never consulted.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Value, json};

use steenrod::algebra::{normalize, parse_element};
use steenrod::em::{self, DEFAULT_WINDOW};
use steenrod::error::Error;
use steenrod::pd::{self, PDAlgebra};
use steenrod::report::{Check, Report};
use steenrod::window::cofiber::relation_suite;
use steenrod::window::smash::verify_fxi;
use steenrod::window::thom;

const EXIT_INVALID: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "sq", version, about = "Steenrod-algebra computations and verifications")]
struct Cli {
    /// JSON config file; flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite a composite of squares into its admissible normal form.
    Norm {
        /// Element text, e.g. "Sq4 Sq2" or "1".
        expr: String,
    },
    /// Emit tabulated basis rows; exit 3 on a golden-dimension mismatch.
    Tables {
        /// Stable-range parameter (tables 1-3); must be at least 2.
        #[arg(long)]
        m: Option<u32>,
        /// Table number 1-4; omitted = all four.
        #[arg(long)]
        which: Option<u8>,
        /// Count the top-degree cube class at m = 2.
        #[arg(long)]
        include_cube: bool,
        /// Highest row to emit (at most 9).
        #[arg(long)]
        window: Option<u32>,
    },
    /// List one degree of the mod-2 cohomology of K(Z/2, n).
    EmBasis {
        #[arg(long)]
        n: u32,
        /// Total degree (the fundamental class sits in degree n).
        #[arg(long)]
        deg: u32,
    },
    /// Run a verification suite and emit its report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Stable-range parameters to run at (repeatable); default 3.
        #[arg(long)]
        m: Vec<u32>,
        /// Count the top-degree cube class at m = 2.
        #[arg(long)]
        include_cube: bool,
        /// Algebra description to check alongside the wu suite.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Stamp the report with the current time (excluded from the digest).
        #[arg(long)]
        timestamp: bool,
    },
    /// Compute the Wu and Stiefel-Whitney profile of an algebra description.
    Wu {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Suite {
    Relations,
    Fxi,
    Wu,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Fxi => "fxi",
            Suite::Wu => "wu",
            Suite::All => "all",
        }
    }
}

/// Values an optional config file may supply; every flag wins over it.
#[derive(Debug, Default)]
struct FileConfig {
    m: Vec<u32>,
    include_cube: Option<bool>,
    json: Option<bool>,
    window: Option<u32>,
    output: Option<PathBuf>,
}

fn load_config(path: &PathBuf) -> Result<FileConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: malformed JSON: {e}", path.display()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| format!("{}: config must be a JSON object", path.display()))?;
    let mut cfg = FileConfig::default();
    for (key, val) in obj {
        match key.as_str() {
            "m" => match val {
                Value::Number(n) => cfg.m = vec![n.as_u64().unwrap_or(0) as u32],
                Value::Array(a) => {
                    cfg.m = a
                        .iter()
                        .filter_map(Value::as_u64)
                        .map(|n| n as u32)
                        .collect();
                }
                _ => return Err(format!("config key `m` must be a number or array")),
            },
            "include_cube" => cfg.include_cube = val.as_bool(),
            "json" => cfg.json = val.as_bool(),
            "window" => cfg.window = val.as_u64().map(|n| n as u32),
            "output" => cfg.output = val.as_str().map(PathBuf::from),
            other => return Err(format!("config key `{other}` is not recognized")),
        }
    }
    Ok(cfg)
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: msg.into(),
    }
}

fn failed(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAILED,
        message: msg.into(),
    }
}

fn lib_invalid(e: Error) -> Failure {
    invalid(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file_cfg = match &cli.config {
        Some(p) => load_config(p).map_err(invalid)?,
        None => FileConfig::default(),
    };
    let json = cli.json || file_cfg.json.unwrap_or(false);
    let output = cli.output.clone().or_else(|| file_cfg.output.clone());

    // Verify emits its report even when a check fails; the failure is
    // deferred until after the body is written.
    let mut deferred: Option<Failure> = None;
    let body = match cli.cmd {
        Cmd::Norm { ref expr } => cmd_norm(expr, json)?,
        Cmd::Tables {
            m,
            which,
            include_cube,
            window,
        } => {
            let m = m.or_else(|| file_cfg.m.first().copied()).unwrap_or(3);
            let cube = include_cube || file_cfg.include_cube.unwrap_or(false);
            let window = window.or(file_cfg.window).unwrap_or(DEFAULT_WINDOW);
            cmd_tables(m, which, cube, window, json)?
        }
        Cmd::EmBasis { n, deg } => cmd_em_basis(n, deg, json)?,
        Cmd::Verify {
            suite,
            ref m,
            include_cube,
            ref input,
            timestamp,
        } => {
            let ms = if !m.is_empty() {
                m.clone()
            } else if !file_cfg.m.is_empty() {
                file_cfg.m.clone()
            } else {
                vec![3]
            };
            let cube = include_cube || file_cfg.include_cube.unwrap_or(false);
            let (body, failure) = cmd_verify(suite, &ms, cube, input.as_ref(), timestamp, json)?;
            deferred = failure;
            body
        }
        Cmd::Wu { ref input } => cmd_wu(input, json)?,
    };

    match output {
        None => {
            // Tolerate the reader closing early (`sq tables | head`): that is
            // not an error on our side, so leave quietly instead of panicking.
            if let Err(e) = writeln!(io::stdout().lock(), "{body}") {
                if e.kind() == io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                return Err(invalid(format!("stdout: {e}")));
            }
        }
        Some(path) => {
            fs::write(&path, body + "\n").map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        }
    }
    match deferred {
        None => Ok(()),
        Some(f) => Err(f),
    }
}

// ---------------------------------------------------------------------------
// norm

fn cmd_norm(expr: &str, json: bool) -> Result<String, Failure> {
    let element = parse_element(expr).map_err(lib_invalid)?;
    let normal = normalize(&element).to_string();
    Ok(if json {
        pretty(&json!({"input": expr, "normal_form": normal}))
    } else {
        normal
    })
}

// ---------------------------------------------------------------------------
// tables

/// Golden row dimensions.  Tables 1-3 start at row 1 (table 2 at row 2);
/// table 4 starts at row 0.
fn golden_dims(table: u8, m: u32, include_cube: bool) -> Vec<(u32, usize)> {
    match table {
        1 => (1..=9).zip([1, 1, 2, 2, 3, 3, 5, 5, 7]).collect(),
        2 => {
            let mut dims = vec![1, 1, 3, 4, 6, 8, 13, 16];
            if m == 2 {
                dims[7] = if include_cube { 16 } else { 15 };
            }
            (2..=9).zip(dims).collect()
        }
        3 => {
            let mut dims = vec![1, 2, 3, 5, 7, 9, 13, 18, 23];
            if m == 2 {
                dims[8] = if include_cube { 23 } else { 22 };
            }
            (1..=9).zip(dims).collect()
        }
        4 => (0..=8).zip([1, 0, 1, 0, 2, 0, 3, 1, 5]).collect(),
        _ => unreachable!("table numbers are validated before lookup"),
    }
}

fn table_rows(table: u8, m: u32, include_cube: bool, window: u32) -> Result<Vec<Value>, Failure> {
    let mut rows = Vec::new();
    match table {
        1 => {
            for j in 1..=window {
                let basis: Vec<String> = em::kernel_basis(m, j)
                    .map_err(lib_invalid)?
                    .iter()
                    .map(|kb| kb.monomial.to_string())
                    .collect();
                rows.push(json!({"j": j, "dim": basis.len(), "basis": basis}));
            }
        }
        2 => {
            for j in 2..=window {
                let basis: Vec<String> = em::coker_basis(m, j, include_cube)
                    .map_err(lib_invalid)?
                    .iter()
                    .map(|cb| cb.label())
                    .collect();
                rows.push(json!({"j": j, "dim": basis.len(), "basis": basis}));
            }
        }
        3 => {
            for j in 1..=window {
                let mut basis: Vec<String> = em::kernel_basis(m, j)
                    .map_err(lib_invalid)?
                    .iter()
                    .map(|kb| kb.monomial.to_string())
                    .collect();
                basis.extend(
                    em::coker_basis(m, j, include_cube)
                        .map_err(lib_invalid)?
                        .iter()
                        .map(|cb| cb.label()),
                );
                rows.push(json!({"j": j, "dim": basis.len(), "basis": basis}));
            }
        }
        4 => {
            for (j, entries) in thom::tabulated_rows() {
                if j > window.min(thom::WINDOW) {
                    continue;
                }
                let basis: Vec<String> = entries
                    .iter()
                    .map(|(word, gen)| thom::tabulated_label(word, *gen))
                    .collect();
                rows.push(json!({"j": j, "dim": basis.len(), "basis": basis}));
            }
        }
        _ => unreachable!(),
    }
    Ok(rows)
}

fn check_golden(table: u8, m: u32, include_cube: bool, window: u32, rows: &[Value]) -> Result<(), Failure> {
    let golden = golden_dims(table, m, include_cube);
    for row in rows {
        let j = row["j"].as_u64().expect("row shape") as u32;
        let dim = row["dim"].as_u64().expect("row shape") as usize;
        if let Some((_, want)) = golden.iter().find(|(gj, _)| *gj == j) {
            if dim != *want {
                return Err(failed(format!(
                    "table {table} row {j}: dimension {dim}, golden {want}"
                )));
            }
        }
    }
    // Rows inside the window must all be present.
    let expected_rows = golden.iter().filter(|(j, _)| *j <= window).count();
    if rows.len() != expected_rows {
        return Err(failed(format!(
            "table {table}: {} rows emitted, expected {expected_rows}",
            rows.len()
        )));
    }
    Ok(())
}

fn cmd_tables(
    m: u32,
    which: Option<u8>,
    include_cube: bool,
    window: u32,
    json_out: bool,
) -> Result<String, Failure> {
    if m < 2 {
        return Err(invalid(format!("m must be at least 2, got {m}")));
    }
    if window > DEFAULT_WINDOW {
        return Err(invalid(format!(
            "window {window} exceeds the supported ceiling {DEFAULT_WINDOW}"
        )));
    }
    if let Some(w) = which {
        if !(1..=4).contains(&w) {
            return Err(invalid(format!("table number must be 1-4, got {w}")));
        }
    }
    let tables: Vec<u8> = match which {
        Some(w) => vec![w],
        None => vec![1, 2, 3, 4],
    };
    let mut payloads = Vec::new();
    for t in &tables {
        // Table 4 rows live in a window capped at 8.
        let rows = table_rows(*t, m, include_cube, window)?;
        check_golden(*t, m, include_cube, window, &rows)?;
        payloads.push((*t, rows));
    }
    let body = if let Some(w) = which {
        let rows = &payloads[0].1;
        if json_out {
            pretty(&json!({"m": m, "table": w, "rows": rows}))
        } else {
            render_table_text(w, m, rows)
        }
    } else if json_out {
        let entries: Vec<Value> = payloads
            .iter()
            .map(|(t, rows)| json!({"table": t, "rows": rows}))
            .collect();
        pretty(&json!({"m": m, "tables": entries}))
    } else {
        payloads
            .iter()
            .map(|(t, rows)| render_table_text(*t, m, rows))
            .collect::<Vec<_>>()
            .join("\n\n")
    };
    Ok(body)
}

fn render_table_text(table: u8, m: u32, rows: &[Value]) -> String {
    let mut out = vec![format!("table {table} (m = {m})")];
    for row in rows {
        let basis: Vec<&str> = row["basis"]
            .as_array()
            .expect("row shape")
            .iter()
            .filter_map(Value::as_str)
            .collect();
        out.push(format!(
            "  j = {}: dim {} | {}",
            row["j"], row["dim"],
            basis.join(", ")
        ));
    }
    out.join("\n")
}

// ---------------------------------------------------------------------------
// em-basis

fn cmd_em_basis(n: u32, deg: u32, json_out: bool) -> Result<String, Failure> {
    let basis = em::em_basis(n, deg).map_err(lib_invalid)?;
    let labels: Vec<String> = basis.iter().map(|b| b.to_string()).collect();
    Ok(if json_out {
        pretty(&json!({"n": n, "deg": deg, "dim": labels.len(), "basis": labels}))
    } else {
        format!(
            "H^{deg} of K(Z/2, {n}): dim {}\n  {}",
            labels.len(),
            labels.join(", ")
        )
    })
}

// ---------------------------------------------------------------------------
// verify

fn prefix_checks(prefix: &str, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|c| {
            let mut out = Check::new(format!("{prefix}.{}", c.id), c.anchor, c.pass, c.detail);
            out.parameter_independent = c.parameter_independent;
            out
        })
        .collect()
}

/// Checks for one user-supplied algebra description: structural
/// validation, the spin^c Wu consequences, and — when the ring is a
/// truncated polynomial algebra on one generator of degree 1 or 2 — the
/// closed-form Wu oracle.
fn input_checks(alg: &PDAlgebra) -> Result<Vec<Check>, Failure> {
    let mut checks = alg.validate();
    match alg.check_v2k() {
        Ok(more) => checks.extend(more),
        Err(e) => checks.push(Check::new(
            "v2k.solvable",
            "Sq^i: H^{d-i} -> H^d is dual to multiplication by v_i",
            false,
            e.to_string(),
        )),
    }

    let gens = alg.generators();
    if gens.len() == 1 && (gens[0].1 == 1 || gens[0].1 == 2) && alg.top % gens[0].1 == 0 {
        let gdeg = gens[0].1;
        let n = alg.top / gdeg;
        let anchor = "v_{gk} = C(n-k, k) x^k on a height-(n+1) truncated polynomial ring";
        let check = match alg.wu_classes() {
            Err(e) => Check::new("input.wu_oracle", anchor, false, e.to_string()),
            Ok(wu) => {
                let x = alg
                    .parse_el(&gens[0].0)
                    .expect("the generator is an element");
                let mut pass = true;
                let mut detail = format!("n = {n}");
                for k in 0..=n {
                    let mut want = pd::El::new();
                    if pd::pascal_parity((n - k) as u64, k as u64) {
                        want = alg.parse_el("1").expect("unit parses");
                        for _ in 0..k {
                            want = alg.mul(&want, &x);
                        }
                    }
                    if wu.v[(gdeg * k) as usize] != want {
                        pass = false;
                        detail = format!("v_{} differs from the closed form", gdeg * k);
                        break;
                    }
                }
                Check::new("input.wu_oracle", anchor, pass, detail)
            }
        };
        checks.push(check);
    }
    Ok(checks)
}

fn cmd_verify(
    suite: Suite,
    ms: &[u32],
    include_cube: bool,
    input: Option<&PathBuf>,
    timestamp: bool,
    json_out: bool,
) -> Result<(String, Option<Failure>), Failure> {
    for &m in ms {
        if m < 2 {
            return Err(invalid(format!("m must be at least 2, got {m}")));
        }
    }
    let mut checks: Vec<Check> = Vec::new();
    let mut digest_parts: Vec<Vec<u8>> = vec![
        format!("verify:{}", suite.name()).into_bytes(),
        format!("m={ms:?}").into_bytes(),
        format!("include_cube={include_cube}").into_bytes(),
    ];

    if matches!(suite, Suite::Relations | Suite::All) {
        for &m in ms {
            checks.extend(prefix_checks(
                &format!("m{m}"),
                relation_suite(m, include_cube).map_err(lib_invalid)?,
            ));
        }
    }
    if matches!(suite, Suite::Fxi | Suite::All) {
        for &m in ms {
            checks.extend(prefix_checks(
                &format!("m{m}"),
                verify_fxi(m, include_cube).map_err(lib_invalid)?,
            ));
        }
    }
    if matches!(suite, Suite::Wu | Suite::All) {
        checks.extend(pd::wu_suite().map_err(lib_invalid)?);
        checks.extend(pd::v2k_suite().map_err(lib_invalid)?);
    }
    if let Some(path) = input {
        let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        let alg = PDAlgebra::from_json(&text).map_err(lib_invalid)?;
        digest_parts.push(text.into_bytes());
        checks.extend(prefix_checks(&alg.name.clone(), input_checks(&alg)?));
    }

    let parts: Vec<&[u8]> = digest_parts.iter().map(Vec::as_slice).collect();
    let mut report = Report::new(&parts, checks);
    if timestamp {
        report = report.with_timestamp();
    }
    let all_pass = report.all_pass();

    let body = if json_out {
        report.to_json()
    } else {
        render_report_text(&report)
    };
    let failure = if all_pass {
        None
    } else {
        let first = report
            .checks
            .iter()
            .find(|c| !c.pass)
            .expect("some check failed");
        Some(failed(format!("check {} failed: {}", first.id, first.detail)))
    };
    Ok((body, failure))
}

fn render_report_text(report: &Report) -> String {
    let mut out = Vec::new();
    let mut warned = 0usize;
    for c in &report.checks {
        let mark = match (c.pass, c.parameter_independent) {
            (true, Some(false)) => {
                warned += 1;
                "PASS*"
            }
            (true, _) => "PASS ",
            (false, _) => "FAIL ",
        };
        out.push(format!("{mark} {}  [{}]", c.id, c.anchor));
        if !c.pass {
            out.push(format!("      {}", c.detail));
        }
    }
    let total = report.checks.len();
    let passed = report.checks.iter().filter(|c| c.pass).count();
    out.push(format!(
        "{passed}/{total} checks passed{}",
        if warned > 0 {
            format!(" ({warned} parameter-dependent, marked PASS*)")
        } else {
            String::new()
        }
    ));
    out.push(format!("input digest: {}", report.input_digest));
    out.join("\n")
}

// ---------------------------------------------------------------------------
// wu

fn cmd_wu(input: &PathBuf, json_out: bool) -> Result<String, Failure> {
    let text = fs::read_to_string(input).map_err(|e| invalid(format!("{}: {e}", input.display())))?;
    let alg = PDAlgebra::from_json(&text).map_err(lib_invalid)?;
    let wu = alg.wu_classes().map_err(lib_invalid)?;
    let v: Vec<String> = wu.v.iter().map(|e| alg.show_el(e)).collect();
    let w: Vec<String> = wu.w.iter().map(|e| alg.show_el(e)).collect();
    let theta = wu.theta.as_ref().map(|e| alg.show_el(e));
    Ok(if json_out {
        pretty(&json!({
            "name": alg.name,
            "top": alg.top,
            "spinc": alg.spinc,
            "v": v,
            "w": w,
            "theta": theta,
        }))
    } else {
        let mut out = vec![format!("{} (top {}, spin^c: {})", alg.name, alg.top, alg.spinc)];
        for (k, (vk, wk)) in v.iter().zip(&w).enumerate() {
            if vk != "0" || wk != "0" {
                out.push(format!("  degree {k}: v = {vk}, w = {wk}"));
            }
        }
        if let Some(t) = theta {
            out.push(format!("  Sq^2 of the middle Wu class: {t}"));
        }
        out.join("\n")
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(name: &str, contents: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!("sqcli-unit-{}-{name}", std::process::id()));
        fs::write(&path, contents).expect("temp file writes");
        path
    }

    #[test]
    fn golden_dimensions_are_total_and_follow_the_cube_convention() {
        assert_eq!(
            golden_dims(1, 3, false),
            (1..=9).zip([1, 1, 2, 2, 3, 3, 5, 5, 7]).collect::<Vec<_>>()
        );
        // Row 9 of tables 2 and 3 is the only place the cube flag matters,
        // and only in the even case.
        assert_eq!(golden_dims(2, 2, false).last(), Some(&(9, 15)));
        assert_eq!(golden_dims(2, 2, true).last(), Some(&(9, 16)));
        assert_eq!(golden_dims(2, 3, false).last(), Some(&(9, 16)));
        assert_eq!(golden_dims(3, 2, false).last(), Some(&(9, 22)));
        assert_eq!(golden_dims(3, 2, true).last(), Some(&(9, 23)));
        for m in [3, 4, 5] {
            assert_eq!(golden_dims(2, m, false), golden_dims(2, m, true));
            assert_eq!(golden_dims(3, m, false), golden_dims(3, m, true));
        }
        // Table 4 is independent of everything and starts at row 0.
        assert_eq!(
            golden_dims(4, 2, false),
            (0..=8).zip([1, 0, 1, 0, 2, 0, 3, 1, 5]).collect::<Vec<_>>()
        );
    }

    #[test]
    fn check_golden_flags_the_first_bad_row() {
        let rows: Vec<Value> = golden_dims(1, 3, false)
            .iter()
            .map(|(j, dim)| {
                let dim = if *j == 4 { dim + 1 } else { *dim };
                json!({"j": j, "dim": dim, "basis": []})
            })
            .collect();
        let err = check_golden(1, 3, false, 9, &rows).expect_err("row 4 is off by one");
        assert_eq!(err.code, EXIT_FAILED);
        assert!(err.message.contains("table 1 row 4"), "{}", err.message);

        let good: Vec<Value> = golden_dims(1, 3, false)
            .iter()
            .map(|(j, dim)| json!({"j": j, "dim": dim, "basis": []}))
            .collect();
        let err = check_golden(1, 3, false, 9, &good[..5]).expect_err("rows are missing");
        assert!(err.message.contains("5 rows emitted"), "{}", err.message);
    }

    #[test]
    fn config_accepts_known_keys_in_both_shapes() {
        let path = write_temp(
            "full.json",
            r#"{"m": [3, 4], "include_cube": true, "json": false, "window": 7, "output": "r.json"}"#,
        );
        let cfg = load_config(&path).expect("full config parses");
        assert_eq!(cfg.m, vec![3, 4]);
        assert_eq!(cfg.include_cube, Some(true));
        assert_eq!(cfg.json, Some(false));
        assert_eq!(cfg.window, Some(7));
        assert_eq!(cfg.output, Some(PathBuf::from("r.json")));

        let path = write_temp("scalar-m.json", r#"{"m": 5}"#);
        let cfg = load_config(&path).expect("scalar m parses");
        assert_eq!(cfg.m, vec![5]);
        assert_eq!(cfg.include_cube, None);
    }

    #[test]
    fn config_rejects_unknown_keys_and_non_objects() {
        let path = write_temp("unknown.json", r#"{"m": 3, "mm": 4}"#);
        let err = load_config(&path).expect_err("unknown key is fatal");
        assert!(err.contains("`mm`"), "{err}");

        let path = write_temp("array.json", r#"[3, 4]"#);
        let err = load_config(&path).expect_err("top level must be an object");
        assert!(err.contains("object"), "{err}");

        let path = write_temp("broken.json", r#"{"m": "#);
        let err = load_config(&path).expect_err("malformed JSON is fatal");
        assert!(err.contains("malformed"), "{err}");
    }

    #[test]
    fn table_rows_honor_the_window_cut() {
        let rows = table_rows(1, 3, false, 4).expect("table 1 builds");
        assert_eq!(rows.len(), 4);
        // Table 4 is capped at its own window even when asked for more.
        let rows = table_rows(4, 3, false, 9).expect("table 4 builds");
        assert_eq!(rows.len(), 9); // rows 0..=8
        assert_eq!(rows.last().unwrap()["j"].as_u64(), Some(8));
    }
}
