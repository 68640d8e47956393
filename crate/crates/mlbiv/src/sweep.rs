//! Grid sweeps: axis specifications, CSV/JSON emission, and the flat
//! key=value configuration format.
//!
//! Output schema is fixed: the CSV header and the JSON field names are
//! identical across methods and never reordered. Numbers are printed with 17
//! significant digits so a printed double re-parses bit-identically.

use std::collections::HashMap;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{MlbivError, Result};
use crate::evaluate::{self, MethodChoice};
use crate::series::Params;

/// One sweep axis: either a real interval or a ray at fixed argument with the
/// modulus swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisSpec {
    Line {
        start: f64,
        stop: f64,
        count: usize,
    },
    Ray {
        mod_start: f64,
        mod_stop: f64,
        count: usize,
        arg: f64,
    },
}

impl AxisSpec {
    pub fn points(&self) -> Result<Vec<Complex64>> {
        let (start, stop, count, arg) = match *self {
            AxisSpec::Line { start, stop, count } => (start, stop, count, None),
            AxisSpec::Ray {
                mod_start,
                mod_stop,
                count,
                arg,
            } => (mod_start, mod_stop, count, Some(arg)),
        };
        if count < 1 {
            return Err(MlbivError::InvalidInput("axis count must be >= 1".into()));
        }
        if start > stop {
            return Err(MlbivError::InvalidInput(format!(
                "axis start {start} exceeds stop {stop}"
            )));
        }
        let mut pts = Vec::with_capacity(count);
        for i in 0..count {
            let t = if count == 1 {
                start
            } else {
                start + (stop - start) * i as f64 / (count - 1) as f64
            };
            pts.push(match arg {
                None => Complex64::new(t, 0.0),
                Some(theta) => Complex64::from_polar(t, theta),
            });
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = MlbivError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(MlbivError::InvalidInput(format!(
                "unknown output format '{other}' (expected csv|json)"
            ))),
        }
    }
}

/// A full sweep description: grid, parameters, method, output format.
#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    pub x_axis: AxisSpec,
    pub y_axis: AxisSpec,
    pub params: Params,
    pub method: MethodChoice,
    pub format: OutputFormat,
    pub tol: f64,
}

/// Fixed CSV header; field names shared with the JSON output.
pub const CSV_HEADER: &str = "x_re,x_im,y_re,y_im,value_re,value_im,method,err_est,warnings";

/// 17-significant-digit rendering: lossless for f64 round-trips.
pub fn fmt_sig17(v: f64) -> String {
    format!("{v:.16e}")
}

fn sanitize(s: &str) -> String {
    s.replace([',', '\n', '"'], ";")
}

fn json_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Run the sweep, emitting one record per grid point (x outer, y inner) in
/// deterministic order. Evaluation failures become records with NaN/null
/// values and the cause in the warnings column.
pub fn run_sweep<W: Write>(spec: &SweepSpec, out: &mut W) -> Result<usize> {
    let xs = spec.x_axis.points()?;
    let ys = spec.y_axis.points()?;
    let mut rows = 0usize;

    struct Row {
        x: Complex64,
        y: Complex64,
        value: Option<Complex64>,
        method: String,
        err_est: Option<f64>,
        warnings: Vec<String>,
    }

    let mut records = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            let row = match evaluate::evaluate(x, y, &spec.params, spec.method, spec.tol) {
                Ok(res) => Row {
                    x,
                    y,
                    value: Some(res.value),
                    method: res.method.to_string(),
                    err_est: Some(res.error_estimate),
                    warnings: res.warnings.iter().map(|w| w.to_string()).collect(),
                },
                Err(e) => Row {
                    x,
                    y,
                    value: None,
                    method: "error".into(),
                    err_est: None,
                    warnings: vec![e.to_string()],
                },
            };
            records.push(row);
        }
    }

    let io_err = |e: std::io::Error| MlbivError::InvalidInput(format!("write failed: {e}"));
    match spec.format {
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}").map_err(io_err)?;
            for r in &records {
                let (vre, vim) = match r.value {
                    Some(v) => (fmt_sig17(v.re), fmt_sig17(v.im)),
                    None => ("nan".into(), "nan".into()),
                };
                let err = match r.err_est {
                    Some(e) => fmt_sig17(e),
                    None => "nan".into(),
                };
                let warn = sanitize(&r.warnings.join("; "));
                writeln!(
                    out,
                    "{},{},{},{},{vre},{vim},{},{err},{warn}",
                    fmt_sig17(r.x.re),
                    fmt_sig17(r.x.im),
                    fmt_sig17(r.y.re),
                    fmt_sig17(r.y.im),
                    r.method
                )
                .map_err(io_err)?;
                rows += 1;
            }
        }
        OutputFormat::Json => {
            writeln!(out, "[").map_err(io_err)?;
            for (i, r) in records.iter().enumerate() {
                let (vre, vim) = match r.value {
                    Some(v) => (fmt_sig17(v.re), fmt_sig17(v.im)),
                    None => ("null".into(), "null".into()),
                };
                let err = match r.err_est {
                    Some(e) => fmt_sig17(e),
                    None => "null".into(),
                };
                let warns: Vec<String> = r
                    .warnings
                    .iter()
                    .map(|w| format!("\"{}\"", json_escape(w)))
                    .collect();
                let comma = if i + 1 < records.len() { "," } else { "" };
                writeln!(
                    out,
                    "  {{\"x_re\": {}, \"x_im\": {}, \"y_re\": {}, \"y_im\": {}, \
                     \"value_re\": {vre}, \"value_im\": {vim}, \"method\": \"{}\", \
                     \"err_est\": {err}, \"warnings\": [{}]}}{comma}",
                    fmt_sig17(r.x.re),
                    fmt_sig17(r.x.im),
                    fmt_sig17(r.y.re),
                    fmt_sig17(r.y.im),
                    r.method,
                    warns.join(", ")
                )
                .map_err(io_err)?;
                rows += 1;
            }
            writeln!(out, "]").map_err(io_err)?;
        }
    }
    Ok(rows)
}

/// Parse a flat key=value configuration (one pair per line, '#' comments).
pub fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(MlbivError::InvalidInput(format!(
                "config line {}: expected key=value, got '{line}'",
                lineno + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn get_f64(map: &HashMap<String, String>, key: &str) -> Result<Option<f64>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v.parse::<f64>().map(Some).map_err(|_| {
            MlbivError::InvalidInput(format!("key '{key}': not a number: '{v}'"))
        }),
    }
}

fn get_usize(map: &HashMap<String, String>, key: &str) -> Result<Option<usize>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v.parse::<usize>().map(Some).map_err(|_| {
            MlbivError::InvalidInput(format!("key '{key}': not a count: '{v}'"))
        }),
    }
}

fn axis_from_map(map: &HashMap<String, String>, prefix: &str) -> Result<AxisSpec> {
    let start = get_f64(map, &format!("{prefix}_start"))?.ok_or_else(|| {
        MlbivError::InvalidInput(format!("missing key '{prefix}_start'"))
    })?;
    let stop = get_f64(map, &format!("{prefix}_stop"))?.unwrap_or(start);
    let count = get_usize(map, &format!("{prefix}_count"))?.unwrap_or(1);
    Ok(match get_f64(map, &format!("{prefix}_arg"))? {
        Some(arg) => AxisSpec::Ray {
            mod_start: start,
            mod_stop: stop,
            count,
            arg,
        },
        None => AxisSpec::Line { start, stop, count },
    })
}

/// Assemble a sweep from key=value pairs. Keys mirror the CLI flag names:
/// alpha, beta, mu_re, mu_im, x_start, x_stop, x_count, x_arg, y_start,
/// y_stop, y_count, y_arg, method, format, tol.
pub fn spec_from_map(map: &HashMap<String, String>, default_tol: f64) -> Result<SweepSpec> {
    let alpha = get_f64(map, "alpha")?
        .ok_or_else(|| MlbivError::InvalidInput("missing key 'alpha'".into()))?;
    let beta = get_f64(map, "beta")?
        .ok_or_else(|| MlbivError::InvalidInput("missing key 'beta'".into()))?;
    let mu_re = get_f64(map, "mu_re")?
        .ok_or_else(|| MlbivError::InvalidInput("missing key 'mu_re'".into()))?;
    let mu_im = get_f64(map, "mu_im")?.unwrap_or(0.0);
    let params = Params::new(alpha, beta, Complex64::new(mu_re, mu_im))?;

    let method = match map.get("method") {
        Some(m) => m.parse()?,
        None => MethodChoice::Auto,
    };
    let format = match map.get("format") {
        Some(f) => f.parse()?,
        None => OutputFormat::Csv,
    };
    let tol = get_f64(map, "tol")?.unwrap_or(default_tol);

    Ok(SweepSpec {
        x_axis: axis_from_map(map, "x")?,
        y_axis: axis_from_map(map, "y")?,
        params,
        method,
        format,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips() {
        for &v in &[
            std::f64::consts::PI,
            -2.718281828459045e-7,
            1.0,
            0.1 + 0.2,
            6.02e23,
            -0.0,
        ] {
            let printed = fmt_sig17(v);
            let back: f64 = printed.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{printed}");
        }
    }

    #[test]
    fn axis_points() {
        let line = AxisSpec::Line {
            start: -1.0,
            stop: 1.0,
            count: 5,
        };
        let pts = line.points().unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0], Complex64::new(-1.0, 0.0));
        assert_eq!(pts[4], Complex64::new(1.0, 0.0));

        let ray = AxisSpec::Ray {
            mod_start: 10.0,
            mod_stop: 100.0,
            count: 3,
            arg: std::f64::consts::PI,
        };
        let pts = ray.points().unwrap();
        assert_eq!(pts.len(), 3);
        assert!((pts[2].norm() - 100.0).abs() < 1e-12);
        assert!((pts[0].arg() - std::f64::consts::PI).abs() < 1e-12);

        assert!(AxisSpec::Line {
            start: 2.0,
            stop: 1.0,
            count: 2
        }
        .points()
        .is_err());
    }

    #[test]
    fn csv_row_count_and_header() {
        let params = Params::new(0.9, 0.9, Complex64::new(2.0, 0.0)).unwrap();
        let spec = SweepSpec {
            x_axis: AxisSpec::Line {
                start: 0.0,
                stop: 2.0,
                count: 3,
            },
            y_axis: AxisSpec::Line {
                start: 0.0,
                stop: 1.0,
                count: 3,
            },
            params,
            method: MethodChoice::Auto,
            format: OutputFormat::Csv,
            tol: 1e-9,
        };
        let mut buf = Vec::new();
        let rows = run_sweep(&spec, &mut buf).unwrap();
        assert_eq!(rows, 9);
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], CSV_HEADER);
        // single-point sweep at the origin: value is 1/Γ(2) = 1
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first.len(), 9);
        let v: f64 = first[4].parse().unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let params = Params::new(1.0, 1.0, Complex64::new(1.0, 0.0)).unwrap();
        let spec = SweepSpec {
            x_axis: AxisSpec::Line {
                start: 0.5,
                stop: 0.5,
                count: 1,
            },
            y_axis: AxisSpec::Line {
                start: 0.25,
                stop: 0.25,
                count: 1,
            },
            params,
            method: MethodChoice::Series,
            format: OutputFormat::Json,
            tol: 1e-10,
        };
        let mut buf = Vec::new();
        let rows = run_sweep(&spec, &mut buf).unwrap();
        assert_eq!(rows, 1);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.trim_start().starts_with('['));
        assert!(text.contains("\"value_re\""));
        assert!(text.contains("\"method\": \"series\""));
        assert!(text.trim_end().ends_with(']'));
    }

    #[test]
    fn config_parsing() {
        let text = "# sweep over the negative axis\nalpha = 0.9\nbeta=0.9\nmu_re=1\n\
                    x_start=10\nx_stop=100\nx_count=4\nx_arg=3.141592653589793\n\
                    y_start=10\ny_stop=100\ny_count=4\ny_arg=3.141592653589793\n\
                    format=csv\n";
        let map = parse_config(text).unwrap();
        let spec = spec_from_map(&map, 1e-9).unwrap();
        assert!(matches!(spec.x_axis, AxisSpec::Ray { count: 4, .. }));
        assert_eq!(spec.tol, 1e-9);
        assert!(parse_config("nonsense without equals\n").is_err());
    }
}
