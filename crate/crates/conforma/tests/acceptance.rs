//! Acceptance criterion 10: every module example that maps onto a
//! subcommand is reproduced through the binary, checked against the
//! library value, compared byte-for-byte against the committed golden
//! file, and run twice to prove deterministic output.
//!
//! Regenerate the golden file with `CONFORMA_BLESS=1 cargo test -p
//! conforma --test acceptance` after an intentional output change.

use std::process::Command;

const E2: f64 = 7.38905609893065;
const TWO_E4: f64 = 109.19630006628847;

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    /// Expected final CSV value and absolute tolerance.
    expect: Option<(f64, f64)>,
}

#[rustfmt::skip]
fn cases() -> Vec<Case> {
    vec![
        // conformable-diff: basic left derivative
        Case { name: "deriv-power", args: &["deriv", "--f", "t^2", "--alpha", "0.5", "--a", "0", "--t", "4", "--format", "csv"], expect: Some((16.0, 1e-9)) },
        Case { name: "deriv-constant", args: &["deriv", "--f", "5", "--alpha", "0.3", "--a", "0", "--t", "2", "--format", "csv"], expect: Some((0.0, 1e-9)) },
        Case { name: "deriv-frac-exp-eigen", args: &["deriv", "--f", "fexp(2,0.5,0)", "--alpha", "0.5", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((TWO_E4, 1e-6)) },
        Case { name: "deriv-scaled-power", args: &["deriv", "--f", "t^0.5/0.5", "--alpha", "0.5", "--a", "0", "--t", "4", "--format", "csv"], expect: Some((1.0, 1e-9)) },
        // conformable-diff: right derivative
        Case { name: "rderiv-linear-classical", args: &["rderiv", "--f", "1-t", "--alpha", "1", "--b", "1", "--t", "0.3", "--format", "csv"], expect: Some((1.0, 1e-12)) },
        Case { name: "rderiv-scaled-power", args: &["rderiv", "--f", "(1-t)^0.5/0.5", "--alpha", "0.5", "--b", "1", "--t", "-3", "--format", "csv"], expect: Some((1.0, 1e-9)) },
        Case { name: "rderiv-constant", args: &["rderiv", "--f", "3", "--alpha", "0.7", "--b", "2", "--t", "1", "--format", "csv"], expect: Some((0.0, 1e-9)) },
        // conformable-diff: higher orders
        Case { name: "deriv-order-1p5", args: &["deriv", "--f", "t^2", "--alpha", "1.5", "--a", "0", "--t", "4", "--format", "csv"], expect: Some((4.0, 1e-9)) },
        Case { name: "deriv-order-2", args: &["deriv", "--f", "t^2", "--alpha", "2", "--a", "0", "--t", "7", "--format", "csv"], expect: Some((2.0, 1e-9)) },
        Case { name: "deriv-endpoint-vanishes", args: &["deriv", "--f", "sin(t)", "--alpha", "1.5", "--a", "0", "--t", "0", "--format", "csv"], expect: Some((0.0, 1e-6)) },
        Case { name: "rderiv-order-1p5", args: &["rderiv", "--f", "(2-t)^2", "--alpha", "1.5", "--b", "2", "--t", "-2", "--format", "csv"], expect: Some((4.0, 1e-9)) },
        Case { name: "rderiv-order-2-sign", args: &["rderiv", "--f", "(2-t)^2", "--alpha", "2", "--b", "2", "--t", "0", "--format", "csv"], expect: Some((2.0, 1e-9)) },
        // conformable-diff: sequential derivatives
        Case { name: "deriv-sequential-closed-form", args: &["deriv", "--f", "t^2", "--alpha", "0.4", "--count", "2", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((3.2, 1e-9)) },
        Case { name: "deriv-sequential-classical", args: &["deriv", "--f", "t^3", "--alpha", "1", "--count", "2", "--a", "0", "--t", "2", "--format", "csv"], expect: Some((12.0, 1e-8)) },
        Case { name: "deriv-sequential-hits-constant", args: &["deriv", "--f", "t^0.5/0.5", "--alpha", "0.5", "--count", "2", "--a", "0", "--t", "2", "--format", "csv"], expect: Some((0.0, 1e-9)) },
        // conformable-integ: left integral
        Case { name: "integ-one", args: &["integ", "--f", "1", "--alpha", "0.5", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((2.0, 1e-9)) },
        Case { name: "integ-t", args: &["integ", "--f", "t", "--alpha", "0.5", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((2.0 / 3.0, 1e-9)) },
        Case { name: "integ-order-2", args: &["integ", "--f", "1", "--alpha", "2", "--a", "0", "--t", "2", "--format", "csv"], expect: Some((2.0, 1e-9)) },
        // conformable-integ: Riemann–Liouville comparison
        Case { name: "integ-rl-classical", args: &["integ", "--f", "1", "--alpha", "1", "--riemann-liouville", "--a", "0", "--t", "3", "--format", "csv"], expect: Some((3.0, 1e-9)) },
        Case { name: "integ-rl-power", args: &["integ", "--f", "t", "--alpha", "0.5", "--riemann-liouville", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((0.7522527780636751, 1e-9)) },
        // exact value 99/64: iterated integral of t^2+1 twice over [0, 1.5]
        Case { name: "integ-rl-matches-conformable", args: &["integ", "--f", "t^2+1", "--alpha", "2", "--riemann-liouville", "--a", "0", "--t", "1.5", "--format", "csv"], expect: Some((1.546875, 1e-9)) },
        // conformable-integ: right integral
        Case { name: "rinteg-one", args: &["rinteg", "--f", "1", "--alpha", "0.5", "--b", "1", "--t", "0", "--format", "csv"], expect: Some((2.0, 1e-9)) },
        Case { name: "rinteg-power", args: &["rinteg", "--f", "1-t", "--alpha", "0.5", "--b", "1", "--t", "0", "--format", "csv"], expect: Some((2.0 / 3.0, 1e-9)) },
        Case { name: "rinteg-classical", args: &["rinteg", "--f", "t", "--alpha", "1", "--b", "2", "--t", "1", "--format", "csv"], expect: Some((1.5, 1e-9)) },
        // frac-series: builtin expansions and evaluation
        Case { name: "series-cos-at-base", args: &["series", "--kind", "fcos", "--alpha", "0.3", "--terms", "8", "--t", "0", "--format", "csv"], expect: Some((1.0, 1e-12)) },
        Case { name: "series-sin-at-base", args: &["series", "--kind", "fsin", "--alpha", "0.3", "--terms", "9", "--t", "0", "--format", "csv"], expect: Some((0.0, 1e-12)) },
        Case { name: "series-geom-partial", args: &["series", "--kind", "fgeom", "--alpha", "0.5", "--terms", "3", "--t", "0.04", "--format", "csv"], expect: Some((1.624, 1e-12)) },
        Case { name: "series-geom-limit", args: &["series", "--kind", "fgeom", "--alpha", "0.5", "--terms", "60", "--t", "0.09", "--format", "csv"], expect: Some((2.5, 1e-9)) },
        Case { name: "series-sin-quarter-pi", args: &["series", "--kind", "fsin", "--alpha", "0.5", "--terms", "41", "--t", "0.61685027506808491", "--format", "csv"], expect: Some((1.0, 1e-9)) },
        Case { name: "series-exp-at-base", args: &["series", "--kind", "fexp", "--alpha", "0.5", "--terms", "12", "--t", "0", "--format", "csv"], expect: Some((1.0, 1e-12)) },
        Case { name: "series-text-form", args: &["series", "--kind", "fexp", "--alpha", "0.5", "--terms", "5"], expect: None },
        Case { name: "series-text-geom-radius", args: &["series", "--kind", "fgeom", "--alpha", "0.5", "--terms", "4"], expect: None },
        // frac-laplace: numeric transform and table
        Case { name: "laplace-one", args: &["laplace", "--f", "1", "--alpha", "0.5", "--s", "2", "--format", "csv"], expect: Some((0.5, 1e-8)) },
        Case { name: "laplace-frac-exp", args: &["laplace", "--f", "fexp(1,0.5,0)", "--alpha", "0.5", "--s", "3", "--tail-bound", "1", "--format", "csv"], expect: Some((0.5, 1e-8)) },
        Case { name: "laplace-t", args: &["laplace", "--f", "t", "--alpha", "0.5", "--s", "1", "--format", "csv"], expect: Some((0.5, 1e-8)) },
        Case { name: "table-one", args: &["table", "--kind", "one", "--alpha", "0.5", "--s", "4", "--format", "csv"], expect: Some((0.25, 1e-14)) },
        Case { name: "table-t", args: &["table", "--kind", "t", "--alpha", "0.5", "--s", "1", "--format", "csv"], expect: Some((0.5, 1e-12)) },
        Case { name: "table-tpow", args: &["table", "--kind", "tpow", "--p", "1", "--alpha", "0.5", "--s", "1", "--format", "csv"], expect: Some((0.5, 1e-12)) },
        Case { name: "table-fexp", args: &["table", "--kind", "fexp", "--lambda", "1", "--alpha", "0.5", "--s", "3", "--format", "csv"], expect: Some((0.5, 1e-14)) },
        Case { name: "table-fsin", args: &["table", "--kind", "fsin", "--omega", "2", "--alpha", "0.5", "--s", "1", "--format", "csv"], expect: Some((0.4, 1e-14)) },
        Case { name: "table-fcos", args: &["table", "--kind", "fcos", "--omega", "2", "--alpha", "0.5", "--s", "1", "--format", "csv"], expect: Some((0.2, 1e-14)) },
        Case { name: "table-damped-sine", args: &["table", "--kind", "damped", "--k", "1", "--inner", "fsin", "--omega", "1", "--alpha", "0.5", "--s", "0", "--format", "csv"], expect: Some((0.5, 1e-14)) },
        // frac-ode: scalar solution and Picard iterates
        Case { name: "solve-exp", args: &["solve", "--lambda", "1", "--y0", "1", "--alpha", "0.5", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((E2, 1e-9)) },
        Case { name: "solve-at-base", args: &["solve", "--lambda", "1", "--y0", "1", "--alpha", "0.5", "--a", "0", "--t", "0", "--format", "csv"], expect: Some((1.0, 0.0)) },
        Case { name: "solve-lambda-zero", args: &["solve", "--lambda", "0", "--y0", "1", "--alpha", "0.5", "--a", "0", "--t", "5", "--format", "csv"], expect: Some((1.0, 0.0)) },
        Case { name: "solve-picard-1", args: &["solve", "--lambda", "1", "--y0", "1", "--alpha", "0.5", "--picard", "1", "--t", "1", "--format", "csv"], expect: Some((3.0, 1e-12)) },
        Case { name: "solve-picard-2", args: &["solve", "--lambda", "1", "--y0", "1", "--alpha", "0.5", "--picard", "2", "--t", "1", "--format", "csv"], expect: Some((5.0, 1e-12)) },
        Case { name: "solve-picard-25", args: &["solve", "--lambda", "1", "--y0", "1", "--alpha", "0.5", "--picard", "25", "--t", "1", "--format", "csv"], expect: Some((E2, 1e-7)) },
        // frac-ode: systems
        Case { name: "system-forced", args: &["system", "--file", "tests/fixtures/forced.sys", "--f", "1", "--alpha", "0.5", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((2.0, 1e-8)) },
        Case { name: "system-scalar-reduction", args: &["system", "--file", "tests/fixtures/scalar.sys", "--alpha", "0.5", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((E2, 1e-9)) },
        Case { name: "system-diagonal", args: &["system", "--file", "tests/fixtures/diag.sys", "--alpha", "0.5", "--a", "0", "--t", "1", "--format", "csv"], expect: Some(((-2f64).exp(), 1e-9)) },
        Case { name: "system-zero-matrix-identity", args: &["system", "--file", "tests/fixtures/zero.sys", "--alpha", "0.5", "--a", "0", "--t", "1", "--format", "csv"], expect: Some((1.0, 1e-12)) },
        Case { name: "system-at-base", args: &["system", "--file", "tests/fixtures/diag.sys", "--alpha", "0.5", "--a", "0", "--t", "0", "--format", "csv"], expect: Some((1.0, 0.0)) },
        // frac-ode: Gronwall reports
        Case { name: "gronwall-equality", args: &["gronwall", "--r", "2*fexp(1,0.5,0)", "--delta", "2", "--k", "1", "--alpha", "0.5", "--a", "0", "--b", "2", "--points", "5", "--format", "csv"], expect: None },
        Case { name: "gronwall-constant", args: &["gronwall", "--r", "1", "--delta", "2", "--k", "1", "--alpha", "0.5", "--a", "0", "--b", "1", "--points", "5", "--format", "csv"], expect: None },
        Case { name: "gronwall-hypothesis-fails", args: &["gronwall", "--r", "exp(5*t)", "--delta", "0.5", "--k", "0.1", "--alpha", "0.5", "--a", "0", "--b", "2", "--points", "5", "--format", "csv"], expect: None },
        // CSV trajectory export
        Case { name: "export-scalar", args: &["export", "--lambda", "1", "--y0", "1", "--alpha", "0.5", "--grid", "0:1:5"], expect: None },
        Case { name: "export-system", args: &["export", "--file", "tests/fixtures/diag.sys", "--alpha", "0.5", "--grid", "0:1:3"], expect: None },
    ]
}

fn run_once(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_conforma"))
        .args(args)
        .env_remove("CONFORMA_TOL")
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        out.status.code().unwrap_or(-1),
    )
}

fn last_value(csv: &str) -> f64 {
    csv.lines()
        .last()
        .and_then(|l| l.split(',').next_back())
        .and_then(|v| v.parse().ok())
        .expect("numeric last cell")
}

#[test]
fn criterion_10_cli_golden() {
    let mut violations: Vec<String> = Vec::new();
    let mut golden = String::new();

    for case in cases() {
        let (out1, code1) = run_once(case.args);
        let (out2, code2) = run_once(case.args);
        if code1 != 0 || code2 != 0 {
            violations.push(format!("{}: exit codes {code1}/{code2}", case.name));
            continue;
        }
        if out1 != out2 {
            violations.push(format!("{}: output differs between runs", case.name));
            continue;
        }
        if let Some((want, tol)) = case.expect {
            let got = last_value(&out1);
            if (got - want).abs() > tol {
                violations.push(format!(
                    "{}: value {got} differs from library value {want} beyond {tol:e}",
                    case.name
                ));
            }
        }
        golden.push_str(&format!(
            "### {}: conforma {}\n",
            case.name,
            case.args.join(" ")
        ));
        golden.push_str(&out1);
    }

    let golden_path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/examples.golden");
    if std::env::var_os("CONFORMA_BLESS").is_some() {
        std::fs::write(golden_path, &golden).expect("write golden file");
        println!("blessed {golden_path}");
    } else {
        match std::fs::read_to_string(golden_path) {
            Ok(committed) => {
                if committed != golden {
                    violations.push(
                        "golden file mismatch (regenerate with CONFORMA_BLESS=1 if intentional)"
                            .to_string(),
                    );
                }
            }
            Err(e) => violations.push(format!("cannot read golden file: {e}")),
        }
    }

    if violations.is_empty() {
        println!("ACCEPTANCE 10 PASS — CLI reproduces module examples, byte-identical across runs");
    } else {
        println!(
            "ACCEPTANCE 10 FAIL — CLI golden test: {} violations, first: {}",
            violations.len(),
            violations[0]
        );
        panic!("criterion 10 failed:\n{}", violations.join("\n"));
    }
}
