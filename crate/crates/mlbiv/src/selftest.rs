//! The built-in verification battery behind `mlbiv selftest`.
//!
//! Five suites, each exercising one pillar: the gamma oracle pair, the
//! series reduction/collapse identities, contour-parameter invariance,
//! series/contour cross-agreement, and the asymptotic residual decay order.

use num_complex::Complex64;

use crate::asymptotic::{self, TruncationOrders};
use crate::contour::HankelPath;
use crate::error::{MlbivError, Result};
use crate::evaluate::{self, MethodChoice};
use crate::gamma::{recip_gamma, recip_gamma_hankel};
use crate::integral_rep;
use crate::series::{self, Params};
use crate::sweep::{AxisSpec, OutputFormat, SweepSpec};

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub const SUITES: [&str; 5] = ["gamma", "identities", "contour", "crossval", "decay"];

/// Run all suites, or just the named one. Unknown names error with the list
/// of available suites.
pub fn run(filter: Option<&str>) -> Result<Vec<SuiteResult>> {
    if let Some(name) = filter {
        if !SUITES.contains(&name) {
            return Err(MlbivError::InvalidInput(format!(
                "unknown suite '{name}'; available: {}",
                SUITES.join(", ")
            )));
        }
    }
    let mut results = Vec::new();
    for &name in &SUITES {
        if filter.is_some_and(|f| f != name) {
            continue;
        }
        results.push(match name {
            "gamma" => gamma_suite(),
            "identities" => identities_suite(),
            "contour" => contour_suite(),
            "crossval" => crossval_suite(),
            "decay" => decay_suite(),
            _ => unreachable!(),
        });
    }
    Ok(results)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Hankel-quadrature reciprocal gamma vs the direct kernel on a coarse grid,
/// for three distinct admissible paths, plus reflection spot checks.
fn gamma_suite() -> SuiteResult {
    let paths = [
        HankelPath::new(1.0, 0.75 * PI, 60.0, 1e-12).unwrap(),
        HankelPath::new(0.5, 2.8, 70.0, 1e-12).unwrap(),
        HankelPath::new(2.0, PI, 80.0, 1e-12).unwrap(),
    ];
    let mut worst = 0.0_f64;
    for path in &paths {
        for i in 0..5 {
            for j in 0..5 {
                let s = c(-5.0 + 2.5 * i as f64, -5.0 + 2.5 * j as f64);
                let want = recip_gamma(s);
                match recip_gamma_hankel(s, path, 1e-10) {
                    Ok(got) => worst = worst.max((got - want).norm()),
                    Err(e) => {
                        return SuiteResult {
                            name: "gamma",
                            passed: false,
                            detail: format!("quadrature failed at s={s}: {e}"),
                        }
                    }
                }
            }
        }
    }
    let mut reflection_worst = 0.0_f64;
    for &(re, im) in &[(0.3, 0.0), (2.7, 1.1), (-5.4, 3.2), (8.5, -6.5)] {
        let z = c(re, im);
        let lhs = recip_gamma(z) * recip_gamma(1.0 - z);
        let rhs = (PI * z).sin() / PI;
        reflection_worst = reflection_worst.max(rel(lhs, rhs));
    }
    let passed = worst <= 1e-9 && reflection_worst <= 1e-12;
    SuiteResult {
        name: "gamma",
        passed,
        detail: format!(
            "max |hankel - direct| = {worst:.3e} over 75 points, 3 paths; \
             reflection deviation {reflection_worst:.3e}"
        ),
    }
}

/// Collapse identity at α = β and the one-variable reduction rows.
fn identities_suite() -> SuiteResult {
    let mut worst = 0.0_f64;
    for &a in &[0.7, 1.0, 1.5] {
        let p = Params::new(a, a, c(1.0, 0.0)).unwrap();
        for &(xr, yr) in &[(1.0, 0.5), (2.5, -1.5), (-3.0, 2.0)] {
            let x = c(xr, 0.0);
            let y = c(yr, 0.0);
            let (e, _) = match series::ml_two_var_series(x, y, &p, 1e-13) {
                Ok(v) => v,
                Err(e) => {
                    return SuiteResult {
                        name: "identities",
                        passed: false,
                        detail: format!("series failed: {e}"),
                    }
                }
            };
            let ex = series::ml_one_var(x, a, c(1.0, 0.0), 1e-14).unwrap();
            let ey = series::ml_one_var(y, a, c(1.0, 0.0), 1e-14).unwrap();
            let closed = (x * ex - y * ey) / (x - y);
            worst = worst.max(rel(e, closed));
        }
    }
    for &a in &[0.6, 0.9, 1.3, 1.8] {
        let p = Params::new(a, 1.1, c(0.5, 0.0)).unwrap();
        for &xr in &[-4.0, -1.0, 2.0, 4.0] {
            let x = c(xr, 0.0);
            let (two, _) = series::ml_two_var_series(x, c(0.0, 0.0), &p, 1e-13).unwrap();
            let one = series::ml_one_var(x, a, c(0.5, 0.0), 1e-14).unwrap();
            worst = worst.max(rel(two, one));
        }
    }
    SuiteResult {
        name: "identities",
        passed: worst <= 1e-9,
        detail: format!("max relative deviation {worst:.3e}"),
    }
}

/// The same value from two different admissible contours, including
/// selections that change the representation case.
fn contour_suite() -> SuiteResult {
    let p = Params::new(0.9, 0.9, c(1.0, 0.0)).unwrap();
    let eta = match integral_rep::default_eta(&p) {
        Ok(v) => v,
        Err(e) => {
            return SuiteResult {
                name: "contour",
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let tol = 1e-9;
    let mut worst = 0.0_f64;
    let mut flips = 0;
    for &(xr, yr) in &[(1.5, 0.4), (0.7, 1.9), (2.4, 2.9), (-2.0, 1.2)] {
        let x = c(xr, 0.1);
        let y = c(yr, -0.2);
        let s1 = integral_rep::selection_for(x, y, &p, 0.6, eta);
        let s2 = integral_rep::selection_for(x, y, &p, 2.4, eta);
        let (Ok(s1), Ok(s2)) = (s1, s2) else {
            return SuiteResult {
                name: "contour",
                passed: false,
                detail: format!("selection failed at ({x}, {y})"),
            };
        };
        if s1.case != s2.case {
            flips += 1;
        }
        let v1 = integral_rep::eval_contour_with(x, y, &p, &s1, tol);
        let v2 = integral_rep::eval_contour_with(x, y, &p, &s2, tol);
        match (v1, v2) {
            (Ok(v1), Ok(v2)) => worst = worst.max(rel(v1.value, v2.value)),
            (e1, e2) => {
                return SuiteResult {
                    name: "contour",
                    passed: false,
                    detail: format!("evaluation failed: {e1:?} / {e2:?}"),
                }
            }
        }
    }
    let passed = worst <= 2e-8 && flips > 0;
    SuiteResult {
        name: "contour",
        passed,
        detail: format!(
            "max deviation between contours {worst:.3e}, {flips} case flips exercised"
        ),
    }
}

/// Series vs contour on a small grid through the auto evaluator.
fn crossval_suite() -> SuiteResult {
    let p = Params::new(0.9, 0.9, c(1.0, 0.0)).unwrap();
    let spec = SweepSpec {
        x_axis: AxisSpec::Line {
            start: 0.5,
            stop: 3.0,
            count: 3,
        },
        y_axis: AxisSpec::Line {
            start: 0.6,
            stop: 2.8,
            count: 3,
        },
        params: p,
        method: MethodChoice::Auto,
        format: OutputFormat::Csv,
        tol: 1e-7,
    };
    match evaluate::cross_validate(&spec, &p, 1e-7) {
        Ok(report) => SuiteResult {
            name: "crossval",
            passed: report.pass,
            detail: format!(
                "max pairwise deviation {:.3e} (median {:.3e}) over {} points",
                report.max_rel,
                report.median_rel,
                report.points.len()
            ),
        },
        Err(e) => SuiteResult {
            name: "crossval",
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Residual decay order along one admissible ray per asymptotic case.
fn decay_suite() -> SuiteResult {
    let p = Params::new(0.9, 0.8, c(1.0, 0.0)).unwrap();
    let tau = asymptotic::default_tau(&p).unwrap();
    let orders = TruncationOrders::new(1, 1).unwrap();
    let radii = [10.0, 18.0, 32.0, 56.0, 100.0];
    let rays = [
        ("case1", c(1.0, 0.0), Complex64::from_polar(1.2, 0.1)),
        ("case2", c(1.0, 0.0), c(-1.1, 0.0)),
        ("case3", c(-1.0, 0.0), c(1.15, 0.0)),
        ("case4", c(-1.0, 0.0), c(-1.2, 0.0)),
    ];
    let mut details = Vec::new();
    let mut passed = true;
    for (label, dx, dy) in rays {
        match asymptotic::verify_decay(dx, dy, &p, tau, &orders, &radii) {
            Ok(rep) => {
                let ok = rep.slope <= rep.target_slope + 0.5 && rep.monotone_last3;
                passed &= ok;
                details.push(format!(
                    "{label}: slope {:.2} (target {:.1}), monotone {}",
                    rep.slope, rep.target_slope, rep.monotone_last3
                ));
            }
            Err(e) => {
                passed = false;
                details.push(format!("{label}: {e}"));
            }
        }
    }
    SuiteResult {
        name: "decay",
        passed,
        detail: details.join("; "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected_with_list() {
        let err = run(Some("nonexistent")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gamma") && msg.contains("decay"), "{msg}");
    }

    #[test]
    fn single_suite_filter() {
        let results = run(Some("identities")).unwrap();
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].name, "identities");
        assert!(results[0].passed, "{}", results[0].detail);
    }
}
