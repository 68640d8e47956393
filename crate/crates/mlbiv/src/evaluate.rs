//! Method dispatch, fallbacks, and cross-validation.
//!
//! The auto policy: series at desk scale (max modulus ≤ `r_series`) while its
//! cancellation stays trustworthy; the contour representation in the middle;
//! the asymptotic expansion once both moduli are past `r_asym`, where running
//! the contour quadrature would be slower than its value warrants. Every
//! attempt (including the reason an earlier method was skipped or rejected)
//! lands in the result's attempt log.

use num_complex::Complex64;

use crate::asymptotic::{self, SectorCase, TruncationOrders};
use crate::error::{MlbivError, Result, Warning};
use crate::gamma::recip_gamma;
use crate::integral_rep::{self, ContourEvaluation, RepCase};
use crate::series::{self, Params, SeriesDiagnostics, CANCELLATION_LIMIT};
use crate::sweep::SweepSpec;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The method that actually produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    Contour,
    Asymptotic,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::Contour => "contour",
            Method::Asymptotic => "asymptotic",
        })
    }
}

/// What the caller asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Series,
    Contour,
    Asymptotic,
}

impl std::str::FromStr for MethodChoice {
    type Err = MlbivError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "series" => Ok(MethodChoice::Series),
            "contour" => Ok(MethodChoice::Contour),
            "asym" | "asymptotic" => Ok(MethodChoice::Asymptotic),
            other => Err(MlbivError::InvalidInput(format!(
                "unknown method '{other}' (expected auto|series|contour|asym)"
            ))),
        }
    }
}

/// Case or sector the producing method operated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    Rep(RepCase),
    Sector(SectorCase),
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseTag::Rep(c) => write!(f, "{c}"),
            CaseTag::Sector(s) => write!(f, "{s}"),
        }
    }
}

/// One entry in the attempt log.
#[derive(Debug, Clone)]
pub struct Attempt {
    pub method: Method,
    pub outcome: String,
}

/// Method-specific diagnostics.
#[derive(Debug, Clone)]
pub enum Diagnostics {
    Series(SeriesDiagnostics),
    Contour {
        case: RepCase,
        quad_error: f64,
        evaluations: usize,
    },
    Asymptotic {
        sector: SectorCase,
        orders: TruncationOrders,
    },
}

/// The result envelope: the value, which method produced it, where it
/// operated, and how much to trust it.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: Complex64,
    pub method: Method,
    pub case: Option<CaseTag>,
    /// Absolute error estimate.
    pub error_estimate: f64,
    pub diagnostics: Diagnostics,
    /// Every method tried (or deliberately skipped) on the way here.
    pub attempts: Vec<Attempt>,
    pub warnings: Vec<Warning>,
}

/// Dispatch thresholds and knobs.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    /// Series is preferred while max(|x|, |y|) ≤ r_series.
    pub r_series: f64,
    /// Asymptotics are preferred once min(|x|, |y|) ≥ r_asym.
    pub r_asym: f64,
    pub tol: f64,
    /// Tail truncation orders; picked from tol and the moduli when None.
    pub orders: Option<TruncationOrders>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            r_series: 8.0,
            r_asym: 30.0,
            tol: 1e-9,
            orders: None,
        }
    }
}

fn series_error_estimate(d: &SeriesDiagnostics, value: Complex64, tol: f64) -> f64 {
    d.last_increment_magnitude.max(tol * value.norm())
        + f64::EPSILON * d.cancellation_ratio * value.norm()
}

fn contour_error_estimate(e: &ContourEvaluation) -> f64 {
    let residue_mag = e.residue_x_term.map_or(0.0, |r| r.norm())
        + e.residue_y_term.map_or(0.0, |r| r.norm());
    e.quad_error + 4.0 * f64::EPSILON * residue_mag
}

fn asym_orders_for(x: Complex64, y: Complex64, tol: f64) -> TruncationOrders {
    let rmin = x.norm().min(y.norm()).max(1.5);
    let need = (-(tol.ln()) - 2.0 * rmin.ln()) / rmin.ln();
    let n = need.ceil().clamp(1.0, 8.0) as u32;
    TruncationOrders::new(n, n).expect("orders >= 1 by clamp")
}

fn asym_error_estimate(
    x: Complex64,
    y: Complex64,
    p: &Params,
    orders: &TruncationOrders,
) -> f64 {
    let n = orders.n_max as f64;
    let m = orders.m_max as f64;
    let rx = x.norm();
    let ry = y.norm();
    let next_x = recip_gamma(p.mu - ((n + 1.0) * p.alpha + p.beta)).norm()
        * rx.powf(-(n + 1.0))
        * ry.recip();
    let next_y = recip_gamma(p.mu - (p.alpha + (m + 1.0) * p.beta)).norm()
        * rx.recip()
        * ry.powf(-(m + 1.0));
    let qualitative = 0.1 * (rx * ry).recip() * (rx.powf(-n) + ry.powf(-m));
    (next_x + next_y).max(qualitative)
}

fn series_result(
    x: Complex64,
    y: Complex64,
    p: &Params,
    tol: f64,
    attempts: Vec<Attempt>,
) -> Result<(EvalResult, SeriesDiagnostics)> {
    let (value, diag) = series::ml_two_var_series(x, y, p, tol)?;
    Ok((
        EvalResult {
            value,
            method: Method::Series,
            case: None,
            error_estimate: series_error_estimate(&diag, value, tol),
            diagnostics: Diagnostics::Series(diag),
            attempts,
            warnings: diag.warnings(),
        },
        diag,
    ))
}

fn contour_capable(p: &Params) -> bool {
    p.supports_contour() || p.supports_contour_edge()
}

fn contour_attempt(x: Complex64, y: Complex64, p: &Params, tol: f64) -> Result<ContourEvaluation> {
    if p.supports_contour() {
        integral_rep::eval_contour_detailed(x, y, p, tol)
    } else if p.supports_contour_edge() {
        let sel = integral_rep::select_contour(x, y, p, None)?;
        integral_rep::eval_contour_with(x, y, p, &sel, tol)
    } else {
        Err(MlbivError::ParameterOutOfRange(format!(
            "contour method requires 0 < alpha, beta < 2 and alpha*beta < 2 \
             (alpha = 2 or beta = 2 admissible when Re(mu) > 0 and alpha*beta <= 2); \
             got alpha={}, beta={}, mu={}",
            p.alpha, p.beta, p.mu
        )))
    }
}

fn contour_result(e: ContourEvaluation, attempts: Vec<Attempt>) -> EvalResult {
    EvalResult {
        value: e.value,
        method: Method::Contour,
        case: Some(CaseTag::Rep(e.case)),
        error_estimate: contour_error_estimate(&e),
        diagnostics: Diagnostics::Contour {
            case: e.case,
            quad_error: e.quad_error,
            evaluations: e.evaluations,
        },
        attempts,
        warnings: Vec::new(),
    }
}

fn asym_attempt(
    x: Complex64,
    y: Complex64,
    p: &Params,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    let orders = opts.orders.unwrap_or_else(|| asym_orders_for(x, y, opts.tol));
    let tau = asymptotic::default_tau(p)?;
    let e = asymptotic::asym_eval(x, y, p, tau, &orders)?;
    Ok(EvalResult {
        value: e.value,
        method: Method::Asymptotic,
        case: Some(CaseTag::Sector(e.sector)),
        error_estimate: asym_error_estimate(x, y, p, &orders),
        diagnostics: Diagnostics::Asymptotic {
            sector: e.sector,
            orders,
        },
        attempts: Vec::new(),
        warnings: e.warnings,
    })
}

/// Evaluate E_{α,β}(x, y; μ) with the requested method (or automatic
/// dispatch) at the given tolerance.
pub fn evaluate(
    x: Complex64,
    y: Complex64,
    p: &Params,
    choice: MethodChoice,
    tol: f64,
) -> Result<EvalResult> {
    let opts = EvalOptions {
        tol,
        ..EvalOptions::default()
    };
    evaluate_with(x, y, p, choice, &opts)
}

/// As [`evaluate`] with explicit thresholds.
pub fn evaluate_with(
    x: Complex64,
    y: Complex64,
    p: &Params,
    choice: MethodChoice,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(MlbivError::ParameterOutOfRange(
            "x and y must be finite".into(),
        ));
    }
    if !(opts.tol > 0.0) {
        return Err(MlbivError::ParameterOutOfRange(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    match choice {
        MethodChoice::Series => {
            let (res, _) = series_result(x, y, p, opts.tol, Vec::new())?;
            Ok(res)
        }
        MethodChoice::Contour => {
            let e = contour_attempt(x, y, p, opts.tol)?;
            Ok(contour_result(e, Vec::new()))
        }
        MethodChoice::Asymptotic => asym_attempt(x, y, p, opts),
        MethodChoice::Auto => auto_dispatch(x, y, p, opts),
    }
}

fn auto_dispatch(
    x: Complex64,
    y: Complex64,
    p: &Params,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    let mut attempts: Vec<Attempt> = Vec::new();
    let mut causes: Vec<String> = Vec::new();
    let max_mod = x.norm().max(y.norm());
    let min_mod = x.norm().min(y.norm());

    // Desk scale: the series is the reference method.
    if max_mod <= opts.r_series {
        match series_result(x, y, p, opts.tol, Vec::new()) {
            Ok((mut res, diag)) => {
                if diag.cancellation_ratio < CANCELLATION_LIMIT {
                    res.attempts = attempts;
                    return Ok(res);
                }
                let note = format!(
                    "rejected: cancellation ratio {:.3e}",
                    diag.cancellation_ratio
                );
                attempts.push(Attempt {
                    method: Method::Series,
                    outcome: note.clone(),
                });
                causes.push(format!("series: {note}"));
            }
            Err(e) => {
                attempts.push(Attempt {
                    method: Method::Series,
                    outcome: format!("failed: {e}"),
                });
                causes.push(format!("series: {e}"));
            }
        }
    } else {
        attempts.push(Attempt {
            method: Method::Series,
            outcome: format!("skipped: max modulus {max_mod:.3} > r_series {}", opts.r_series),
        });
    }

    let asym_applicable = p.supports_asymptotic() && x != ZERO && y != ZERO;

    // Far field: the expansion is preferred, the contour quadrature is
    // treated as over budget.
    if asym_applicable && min_mod >= opts.r_asym {
        attempts.push(Attempt {
            method: Method::Contour,
            outcome: format!(
                "skipped: min modulus {min_mod:.3} >= r_asym {} (over budget)",
                opts.r_asym
            ),
        });
        match asym_attempt(x, y, p, opts) {
            Ok(mut res) => {
                res.attempts = attempts;
                return Ok(res);
            }
            Err(e) => {
                attempts.push(Attempt {
                    method: Method::Asymptotic,
                    outcome: format!("failed: {e}"),
                });
                causes.push(format!("asymptotic: {e}"));
            }
        }
    }

    // Middle ground: the contour representation.
    if contour_capable(p) {
        match contour_attempt(x, y, p, opts.tol) {
            Ok(e) => return Ok(contour_result(e, attempts)),
            Err(e) => {
                let degenerate = matches!(e, MlbivError::DegenerateDenominator(_));
                attempts.push(Attempt {
                    method: Method::Contour,
                    outcome: format!("failed: {e}"),
                });
                causes.push(format!("contour: {e}"));
                if degenerate {
                    // The representation-side singularity is artificial (the
                    // function is entire); the series is the fallback
                    // regardless of modulus.
                    match series_result(x, y, p, opts.tol, Vec::new()) {
                        Ok((mut res, diag)) => {
                            res.attempts = attempts;
                            if diag.cancellation_ratio >= CANCELLATION_LIMIT
                                && !res
                                    .warnings
                                    .iter()
                                    .any(|w| matches!(w, Warning::CancellationLoss { .. }))
                            {
                                res.warnings.push(Warning::CancellationLoss {
                                    ratio: diag.cancellation_ratio,
                                });
                            }
                            return Ok(res);
                        }
                        Err(se) => {
                            attempts.push(Attempt {
                                method: Method::Series,
                                outcome: format!("fallback failed: {se}"),
                            });
                            causes.push(format!("series fallback: {se}"));
                        }
                    }
                }
            }
        }
    } else {
        let note = format!(
            "skipped: hypotheses not met (alpha={}, beta={}, mu={})",
            p.alpha, p.beta, p.mu
        );
        attempts.push(Attempt {
            method: Method::Contour,
            outcome: note.clone(),
        });
        causes.push(format!("contour: {note}"));
    }

    // Last resorts: the expansion above its validity floor, then the series
    // even past r_series.
    if asym_applicable && min_mod < opts.r_asym && min_mod >= asymptotic::VALIDITY_FLOOR {
        match asym_attempt(x, y, p, opts) {
            Ok(mut res) => {
                res.attempts = attempts;
                return Ok(res);
            }
            Err(e) => {
                attempts.push(Attempt {
                    method: Method::Asymptotic,
                    outcome: format!("failed: {e}"),
                });
                causes.push(format!("asymptotic: {e}"));
            }
        }
    }
    if max_mod > opts.r_series {
        if let Ok((mut res, diag)) = series_result(x, y, p, opts.tol, Vec::new()) {
            if diag.cancellation_ratio < CANCELLATION_LIMIT {
                res.attempts = attempts;
                return Ok(res);
            }
            causes.push(format!(
                "series: rejected: cancellation ratio {:.3e}",
                diag.cancellation_ratio
            ));
        }
    }

    Err(MlbivError::AllMethodsFailed(causes))
}

/// One grid point of a cross-validation run.
#[derive(Debug, Clone)]
pub struct PointRecord {
    pub x: Complex64,
    pub y: Complex64,
    /// Successful methods with values and error estimates.
    pub values: Vec<(Method, Complex64, f64)>,
    pub failures: Vec<(Method, String)>,
    /// Max pairwise relative deviation among successful methods (None when
    /// fewer than two succeeded).
    pub max_pairwise_rel: Option<f64>,
}

impl PointRecord {
    /// Fewer than two methods produced a value here: recorded, not a failure.
    pub fn no_pair(&self) -> bool {
        self.values.len() < 2
    }
}

/// Summary of a cross-validation sweep.
#[derive(Debug, Clone)]
pub struct CrossReport {
    pub points: Vec<PointRecord>,
    pub max_rel: f64,
    pub median_rel: f64,
    pub threshold: f64,
    /// False when any pairwise deviation exceeded the threshold: the
    /// nonzero-exit signal for the CLI.
    pub pass: bool,
}

/// Evaluate every grid point with every applicable method and compare them
/// pairwise. Per-point failures are recorded, never fatal.
pub fn cross_validate(grid: &SweepSpec, p: &Params, tol: f64) -> Result<CrossReport> {
    let xs = grid.x_axis.points()?;
    let ys = grid.y_axis.points()?;
    if xs.is_empty() || ys.is_empty() {
        return Err(MlbivError::InvalidInput("empty cross-validation grid".into()));
    }

    let mut points = Vec::with_capacity(xs.len() * ys.len());
    let mut deviations: Vec<f64> = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let mut values: Vec<(Method, Complex64, f64)> = Vec::new();
            let mut failures: Vec<(Method, String)> = Vec::new();

            match series::ml_two_var_series(x, y, p, tol) {
                Ok((v, diag)) => {
                    if diag.cancellation_ratio < CANCELLATION_LIMIT {
                        values.push((
                            Method::Series,
                            v,
                            series_error_estimate(&diag, v, tol),
                        ));
                    } else {
                        failures.push((
                            Method::Series,
                            format!("cancellation ratio {:.3e}", diag.cancellation_ratio),
                        ));
                    }
                }
                Err(e) => failures.push((Method::Series, e.to_string())),
            }

            if contour_capable(p) {
                match contour_attempt(x, y, p, tol) {
                    Ok(e) => values.push((Method::Contour, e.value, contour_error_estimate(&e))),
                    Err(e) => failures.push((Method::Contour, e.to_string())),
                }
            }

            if p.supports_asymptotic()
                && x != ZERO
                && y != ZERO
                && x.norm().min(y.norm()) >= asymptotic::VALIDITY_FLOOR
            {
                let opts = EvalOptions {
                    tol,
                    ..EvalOptions::default()
                };
                match asym_attempt(x, y, p, &opts) {
                    Ok(r) => values.push((Method::Asymptotic, r.value, r.error_estimate)),
                    Err(e) => failures.push((Method::Asymptotic, e.to_string())),
                }
            }

            let mut max_rel: Option<f64> = None;
            for i in 0..values.len() {
                for j in (i + 1)..values.len() {
                    let (_, a, _) = values[i];
                    let (_, b, _) = values[j];
                    let rel = (a - b).norm() / a.norm().max(b.norm()).max(1e-300);
                    max_rel = Some(max_rel.map_or(rel, |m: f64| m.max(rel)));
                }
            }
            if let Some(r) = max_rel {
                deviations.push(r);
            }
            points.push(PointRecord {
                x,
                y,
                values,
                failures,
                max_pairwise_rel: max_rel,
            });
        }
    }

    deviations.sort_by(f64::total_cmp);
    let max_rel = deviations.last().copied().unwrap_or(0.0);
    let median_rel = if deviations.is_empty() {
        0.0
    } else {
        deviations[deviations.len() / 2]
    };
    Ok(CrossReport {
        points,
        max_rel,
        median_rel,
        threshold: tol,
        pass: max_rel <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{AxisSpec, OutputFormat};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(alpha: f64, beta: f64, mu: f64) -> Params {
        Params::new(alpha, beta, c(mu, 0.0)).unwrap()
    }

    #[test]
    fn small_arguments_use_series() {
        let res = evaluate(c(0.5, 0.0), c(0.5, 0.0), &p(0.9, 0.9, 1.0), MethodChoice::Auto, 1e-10)
            .unwrap();
        assert_eq!(res.method, Method::Series);
    }

    #[test]
    fn far_field_uses_asymptotics_case4() {
        let res = evaluate(
            c(-80.0, 0.0),
            c(-90.0, 0.0),
            &p(0.9, 0.7, 1.0),
            MethodChoice::Auto,
            1e-9,
        )
        .unwrap();
        assert_eq!(res.method, Method::Asymptotic);
        assert_eq!(res.case, Some(CaseTag::Sector(SectorCase::Case4)));
        // The dispatch recorded why the contour was not run.
        assert!(res
            .attempts
            .iter()
            .any(|a| a.method == Method::Contour && a.outcome.contains("skipped")));
    }

    #[test]
    fn explicit_contour_with_bad_alpha_cites_hypothesis() {
        let params = Params::new(2.5, 0.9, c(1.0, 0.0)).unwrap();
        let err = evaluate(c(1.0, 0.0), c(1.0, 0.0), &params, MethodChoice::Contour, 1e-9)
            .unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("0 < alpha, beta < 2"),
            "message should cite the hypothesis: {msg}"
        );
    }

    #[test]
    fn degenerate_denominator_falls_back_to_series() {
        // x = y with alpha = beta puts the contour in its degenerate spot at
        // a modulus past r_series.
        let params = p(0.9, 0.9, 1.0);
        let res = evaluate(c(12.0, 0.0), c(12.0, 0.0), &params, MethodChoice::Auto, 1e-9)
            .unwrap();
        assert_eq!(res.method, Method::Series);
        assert!(res
            .attempts
            .iter()
            .any(|a| a.method == Method::Contour && a.outcome.contains("degenerate")));
    }

    #[test]
    fn middle_band_uses_contour() {
        let res = evaluate(
            c(12.0, 0.0),
            c(3.0, 0.0),
            &p(0.8, 0.9, 1.0),
            MethodChoice::Auto,
            1e-9,
        )
        .unwrap();
        assert_eq!(res.method, Method::Contour);
        let (series, _) =
            series::ml_two_var_series(c(12.0, 0.0), c(3.0, 0.0), &p(0.8, 0.9, 1.0), 1e-13)
                .unwrap();
        assert!((res.value - series).norm() <= 1e-7 * series.norm());
    }

    #[test]
    fn dispatch_is_deterministic_bitwise() {
        let params = p(0.8, 1.1, 1.5);
        let x = c(2.3, -0.7);
        let y = c(-1.1, 0.4);
        let a = evaluate(x, y, &params, MethodChoice::Auto, 1e-10).unwrap();
        let b = evaluate(x, y, &params, MethodChoice::Auto, 1e-10).unwrap();
        assert_eq!(a.method, b.method);
        assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
    }

    #[test]
    fn envelope_honesty_on_grid() {
        // |series − contour| within the sum of the two self-reported
        // estimates on at least 95% of the grid.
        let params = p(0.9, 0.9, 1.0);
        let tol = 1e-10;
        let grid: Vec<f64> = vec![0.5, 1.25, 2.0, 2.75, 3.5];
        let mut ok = 0;
        let mut total = 0;
        for &xr in &grid {
            for &yr in &grid {
                let x = c(xr, 0.0);
                let y = c(yr * 0.93, 0.0);
                let (sv, sd) = series::ml_two_var_series(x, y, &params, tol).unwrap();
                let ce = match contour_attempt(x, y, &params, tol) {
                    Ok(e) => e,
                    Err(_) => continue,
                };
                total += 1;
                let gap = (sv - ce.value).norm();
                if gap <= series_error_estimate(&sd, sv, tol) + contour_error_estimate(&ce) {
                    ok += 1;
                }
            }
        }
        assert!(total >= 20);
        assert!(
            ok as f64 >= 0.95 * total as f64,
            "envelope honesty: {ok}/{total}"
        );
    }

    #[test]
    fn cross_validation_desk_grid() {
        let params = p(0.9, 0.9, 1.0);
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
            params,
            method: MethodChoice::Auto,
            format: OutputFormat::Csv,
            tol: 1e-7,
        };
        let report = cross_validate(&spec, &params, 1e-7).unwrap();
        assert!(report.pass, "max pairwise deviation {:.3e}", report.max_rel);
        assert!(report.max_rel <= 1e-7);
        assert!(report.points.iter().all(|pt| !pt.no_pair()));
    }

    #[test]
    fn cross_validation_origin_grid() {
        let params = p(0.9, 0.9, 2.0);
        let spec = SweepSpec {
            x_axis: AxisSpec::Line {
                start: 0.0,
                stop: 0.0,
                count: 1,
            },
            y_axis: AxisSpec::Line {
                start: 0.0,
                stop: 0.0,
                count: 1,
            },
            params,
            method: MethodChoice::Auto,
            format: OutputFormat::Csv,
            tol: 1e-10,
        };
        let report = cross_validate(&spec, &params, 1e-10).unwrap();
        // Both series and contour accept (0,0) and must hit 1/Γ(2) = 1.
        let pt = &report.points[0];
        assert!(pt.values.len() >= 2);
        for (_, v, _) in &pt.values {
            assert!((v - c(1.0, 0.0)).norm() <= 1e-10);
        }
    }
}
