//! The Hankel contour γ(ε;η): region classification and adaptive quadrature.
//!
//! The path consists of the circular arc C_η(0;ε) = {|ζ| = ε, −η ≤ arg ζ ≤ η}
//! and the two rays S_{±η} = {arg ζ = ±η, |ζ| ≥ ε}, oriented by non-decreasing
//! argument: inbound along S_{−η}, counterclockwise around the arc, outbound
//! along S_{+η}. At η = π it degenerates into the keyhole: a two-way path
//! along the negative real axis plus the full circle, with integrand values on
//! the upper/lower edges taken at arg = +π / −π.
//!
//! Quadrature is adaptive Gauss–Kronrod (15-point) with a shared panel heap
//! across all path segments. Beyond the truncation radius the ray tails are
//! summed in panels sized to the oscillation of an e^ζ-type factor; when the
//! panel series decays too slowly it is accelerated with Wynn's ε-algorithm,
//! and if that also fails to stabilize the integral is rejected as having a
//! non-negligible tail.

use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{MlbivError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const PI: f64 = std::f64::consts::PI;
const EPS: f64 = f64::EPSILON;

/// The contour γ(ε;η) plus the numerical knobs used to integrate along it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelPath {
    /// Arc radius ε > 0.
    pub epsilon: f64,
    /// Opening angle η ∈ (0, π], radians.
    pub eta: f64,
    /// Ray cutoff R > ε for the main quadrature pass; tails beyond are summed
    /// separately.
    pub truncation_radius: f64,
    /// Relative quadrature target.
    pub rel_tol: f64,
}

impl HankelPath {
    pub fn new(epsilon: f64, eta: f64, truncation_radius: f64, rel_tol: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(MlbivError::ParameterOutOfRange(format!(
                "path arc radius must be positive, got {epsilon}"
            )));
        }
        if !(eta > 0.0 && eta <= PI) {
            return Err(MlbivError::ParameterOutOfRange(format!(
                "path opening angle must lie in (0, pi], got {eta}"
            )));
        }
        if !(truncation_radius > epsilon && truncation_radius.is_finite()) {
            return Err(MlbivError::ParameterOutOfRange(format!(
                "truncation radius must exceed the arc radius, got {truncation_radius}"
            )));
        }
        if !(rel_tol > 0.0) {
            return Err(MlbivError::ParameterOutOfRange(format!(
                "relative tolerance must be positive, got {rel_tol}"
            )));
        }
        Ok(Self {
            epsilon,
            eta,
            truncation_radius,
            rel_tol,
        })
    }

    /// Euclidean distance from `w` to the (infinite-ray) path.
    pub fn distance_to(&self, w: Complex64) -> f64 {
        distance_raw(w, self.epsilon, self.eta)
    }
}

pub(crate) fn distance_raw(w: Complex64, epsilon: f64, eta: f64) -> f64 {
    let arc = if w.arg().abs() <= eta {
        (w.norm() - epsilon).abs()
    } else {
        let a = (w - Complex64::from_polar(epsilon, eta)).norm();
        let b = (w - Complex64::from_polar(epsilon, -eta)).norm();
        a.min(b)
    };
    let ray = |theta: f64| {
        let v = w * Complex64::from_polar(1.0, -theta);
        if v.re >= epsilon {
            v.im.abs()
        } else {
            (v - epsilon).norm()
        }
    };
    arc.min(ray(eta)).min(ray(-eta))
}

/// Which side of the contour a point lies on, by orientation: Ω^(−) is to the
/// left (inside the arc or beyond the opening angle), Ω^(+) to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    LeftOfContour,
    RightOfContour,
    OnContour,
}

/// Classify `w` against the path with an on-contour guard band of width
/// `delta`. Uses the principal argument in (−π, π].
pub fn classify(w: Complex64, path: &HankelPath, delta: f64) -> RegionLabel {
    classify_raw(w, path.epsilon, path.eta, delta)
}

pub(crate) fn classify_raw(w: Complex64, epsilon: f64, eta: f64, delta: f64) -> RegionLabel {
    debug_assert!(delta >= 0.0);
    if distance_raw(w, epsilon, eta) <= delta {
        return RegionLabel::OnContour;
    }
    if w.arg().abs() < eta && w.norm() > epsilon {
        RegionLabel::RightOfContour
    } else {
        RegionLabel::LeftOfContour
    }
}

/// Default on-contour guard band for a point of modulus |w|.
pub fn default_delta(w: Complex64) -> f64 {
    1e-8 * w.norm().max(1.0)
}

// ---------------------------------------------------------------------------
// 15-point Gauss–Kronrod rule (QUADPACK abscissae/weights).
// ---------------------------------------------------------------------------

#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WG15: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * EPS) {
        let min_err = 50.0 * EPS * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One GK15 application to a complex-valued integrand on [a, b].
/// Returns (kronrod estimate, error estimate, integral of |f|).
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_center = f(center);
    let mut fv1 = [ZERO; 8];
    let mut fv2 = [ZERO; 8];

    let mut res_g = f_center * WG15[3];
    let mut res_k = f_center * WGK15[7];
    let mut res_abs = res_k.norm();

    for j in 0..3 {
        let jtw = j * 2 + 1;
        let x = half * XGK15[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let fsum = f1 + f2;
        res_g += WG15[j] * fsum;
        res_k += WGK15[jtw] * fsum;
        res_abs += WGK15[jtw] * (f1.norm() + f2.norm());
    }
    for j in 0..4 {
        let jtwm1 = j * 2;
        let x = half * XGK15[jtwm1];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK15[jtwm1] * (f1 + f2);
        res_abs += WGK15[jtwm1] * (f1.norm() + f2.norm());
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK15[7] * (f_center - mean).norm();
    for j in 0..7 {
        res_asc += WGK15[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }

    let err = ((res_k - res_g) * half).norm();
    (
        res_k * half,
        rescale_error(err, res_abs * abs_half, res_asc * abs_half),
        res_abs * abs_half,
    )
}

// ---------------------------------------------------------------------------
// Adaptive driver.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Segment {
    Arc,
    RayUp,
    RayDown,
}

struct Panel {
    err: f64,
    seg: Segment,
    a: f64,
    b: f64,
    value: Complex64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of one contour integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOutcome {
    pub value: Complex64,
    /// Absolute error estimate (panel estimates plus tail estimate).
    pub error_estimate: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

const MAX_PANELS: usize = 20_000;
const MAX_TAIL_PANELS: usize = 240;
const TAIL_SEGMENT_PANELS: usize = 160;

/// ∫_{γ(ε;η)} f(ζ) dζ with the path's own relative tolerance.
pub fn integrate<F: Fn(Complex64) -> Complex64>(
    path: &HankelPath,
    f: F,
) -> Result<QuadratureOutcome> {
    integrate_with_tol(path, &f, path.rel_tol, 0.0)
}

/// As [`integrate`], with explicit relative and absolute targets (the looser
/// of the two applies).
pub fn integrate_with_tol<F: Fn(Complex64) -> Complex64>(
    path: &HankelPath,
    f: &F,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureOutcome> {
    let eps = path.epsilon;
    let eta = path.eta;
    let r_max = path.truncation_radius;

    let evals = std::cell::Cell::new(0usize);
    let point = |seg: Segment, t: f64| -> Complex64 {
        evals.set(evals.get() + 1);
        match seg {
            Segment::Arc => {
                let u = Complex64::from_polar(eps, t);
                f(u) * Complex64::new(0.0, 1.0) * u
            }
            Segment::RayUp => f(Complex64::from_polar(t, eta)) * Complex64::from_polar(1.0, eta),
            // Lower ray is traversed inbound; bake the minus sign in.
            Segment::RayDown => {
                -(f(Complex64::from_polar(t, -eta)) * Complex64::from_polar(1.0, -eta))
            }
        }
    };

    // Initial panels: a handful over the arc, ray panels sized to the
    // oscillation scale of an e^zeta factor (period 2π/sin η in radius).
    let mut heap = BinaryHeap::new();
    let mut total = ZERO;
    let mut err_total = 0.0;
    let mut resabs_total = 0.0;

    let push = |heap: &mut BinaryHeap<Panel>,
                    seg: Segment,
                    a: f64,
                    b: f64,
                    total: &mut Complex64,
                    err_total: &mut f64,
                    resabs_total: &mut f64|
     -> Result<()> {
        let g = |t: f64| point(seg, t);
        let (v, e, ra) = gk15(&g, a, b);
        if !v.is_finite() {
            return Err(MlbivError::QuadratureNoConvergence(format!(
                "non-finite integrand value on {seg:?} segment near [{a}, {b}]"
            )));
        }
        *total += v;
        *err_total += e;
        *resabs_total += ra;
        heap.push(Panel {
            err: e,
            seg,
            a,
            b,
            value: v,
            resabs: ra,
        });
        Ok(())
    };

    let arc_panels = 4.max((2.0 * eta / 0.8).ceil() as usize);
    for i in 0..arc_panels {
        let a = -eta + 2.0 * eta * i as f64 / arc_panels as f64;
        let b = -eta + 2.0 * eta * (i + 1) as f64 / arc_panels as f64;
        push(&mut heap, Segment::Arc, a, b, &mut total, &mut err_total, &mut resabs_total)?;
    }

    let sin_eta = eta.sin();
    let h_osc = if sin_eta > 1e-3 { PI / sin_eta } else { f64::INFINITY };
    let width = h_osc.min((r_max - eps) / 6.0).min(50.0).max(1e-12);
    let ray_panels = (((r_max - eps) / width).ceil() as usize).clamp(6, 512);
    for seg in [Segment::RayUp, Segment::RayDown] {
        for i in 0..ray_panels {
            let a = eps + (r_max - eps) * i as f64 / ray_panels as f64;
            let b = eps + (r_max - eps) * (i + 1) as f64 / ray_panels as f64;
            push(&mut heap, seg, a, b, &mut total, &mut err_total, &mut resabs_total)?;
        }
    }

    let mut panels = arc_panels + 2 * ray_panels;
    loop {
        // The per-panel error estimates are floored at ~50 eps · resabs, so
        // the achievable total is bounded below by the same scale; treat
        // reaching that floor as convergence to machine precision.
        let floor = 100.0 * EPS * resabs_total;
        let target = abs_tol.max(rel_tol * total.norm()).max(floor);
        if err_total <= target {
            break;
        }
        if panels >= MAX_PANELS {
            if err_total <= 4.0 * floor {
                break;
            }
            return Err(MlbivError::QuadratureNoConvergence(format!(
                "panel budget {MAX_PANELS} exhausted (err {err_total:.3e}, target {target:.3e})"
            )));
        }
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel no longer splittable; accept what we have.
            heap.push(worst);
            break;
        }
        total -= worst.value;
        err_total -= worst.err;
        resabs_total -= worst.resabs;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            push(&mut heap, worst.seg, a, b, &mut total, &mut err_total, &mut resabs_total)?;
        }
        panels += 2;
    }

    // Ray tails beyond the truncation radius.
    let tail_tol = abs_tol.max(rel_tol * total.norm()).max(1e3 * EPS * resabs_total) * 0.5;
    let tail_h = if sin_eta > 0.02 {
        (PI / sin_eta).min(50.0)
    } else {
        // No oscillation to speak of; size panels to the decay scale instead.
        (8.0 / eta.cos().abs().max(0.02)).clamp(5.0, 50.0)
    };
    let mut tail_value = ZERO;
    let mut tail_err = 0.0;
    for seg in [Segment::RayUp, Segment::RayDown] {
        let g = |t: f64| point(seg, t);
        let (v, e) = ray_tail(&g, r_max, tail_h, tail_tol)?;
        tail_value += v;
        tail_err += e;
    }

    Ok(QuadratureOutcome {
        value: total + tail_value,
        error_estimate: err_total + tail_err,
        evaluations: evals.get(),
    })
}

/// Adaptive GK over a single finite interval (used for tail panels).
fn adaptive_segment<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<(Complex64, f64)> {
    let mut heap = BinaryHeap::new();
    let (v, e, ra) = gk15(f, a, b);
    if !v.is_finite() {
        return Err(MlbivError::QuadratureNoConvergence(
            "non-finite integrand value in tail panel".into(),
        ));
    }
    let mut total = v;
    let mut err_total = e;
    let mut resabs_total = ra;
    heap.push(Panel {
        err: e,
        seg: Segment::RayUp,
        a,
        b,
        value: v,
        resabs: ra,
    });
    let mut panels = 1;
    loop {
        let target = abs_tol.max(50.0 * EPS * resabs_total);
        if err_total <= target || panels >= max_panels {
            break;
        }
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        total -= worst.value;
        err_total -= worst.err;
        resabs_total -= worst.resabs;
        for (aa, bb) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e, ra) = gk15(f, aa, bb);
            if !v.is_finite() {
                return Err(MlbivError::QuadratureNoConvergence(
                    "non-finite integrand value in tail panel".into(),
                ));
            }
            total += v;
            err_total += e;
            resabs_total += ra;
            heap.push(Panel {
                err: e,
                seg: Segment::RayUp,
                a: aa,
                b: bb,
                value: v,
                resabs: ra,
            });
        }
        panels += 2;
    }
    Ok((total, err_total))
}

/// Sum one ray tail from `start` outward in panels of width `h`. Converges
/// either by plain decay or, when decay is slow, through Wynn acceleration of
/// the partial-sum sequence. Growing panel magnitudes are rejected.
fn ray_tail<F: Fn(f64) -> Complex64>(
    f: &F,
    start: f64,
    h: f64,
    abs_tol: f64,
) -> Result<(Complex64, f64)> {
    let mut partials: Vec<Complex64> = Vec::new();
    let mut magnitudes: Vec<f64> = Vec::new();
    let mut total = ZERO;
    let mut err_acc = 0.0;
    let mut small_run = 0;
    let mut last_wynn: Option<Complex64> = None;

    for k in 0..MAX_TAIL_PANELS {
        let a = start + h * k as f64;
        let b = a + h;
        let (v, e) = adaptive_segment(f, a, b, abs_tol * 0.1, TAIL_SEGMENT_PANELS)?;
        total += v;
        err_acc += e;
        partials.push(total);
        magnitudes.push(v.norm());

        if v.norm() <= 0.25 * abs_tol {
            small_run += 1;
            if small_run >= 2 {
                return Ok((total, err_acc + v.norm()));
            }
        } else {
            small_run = 0;
        }

        // Growth over three consecutive panels means no decay at this radius.
        if k >= 3 {
            let m = &magnitudes[k - 3..=k];
            if m[0] > abs_tol && m[1] > m[0] && m[2] > m[1] && m[3] > m[2] {
                return Err(MlbivError::TailNotNegligible(format!(
                    "ray panel magnitudes grow past r = {b:.3e}"
                )));
            }
        }

        if k >= 10 && k % 2 == 0 {
            let w = wynn_epsilon(&partials);
            if let Some(prev) = last_wynn {
                let delta = (w - prev).norm();
                if delta <= 0.25 * abs_tol {
                    return Ok((w, err_acc + delta));
                }
            }
            last_wynn = Some(w);
        }
    }
    Err(MlbivError::TailNotNegligible(format!(
        "tail did not stabilize within {MAX_TAIL_PANELS} panels of width {h:.3}"
    )))
}

/// Wynn's ε-algorithm on a sequence of partial sums; returns the deepest
/// even-column estimate that stays finite.
fn wynn_epsilon(s: &[Complex64]) -> Complex64 {
    let n = s.len();
    if n == 1 {
        return s[0];
    }
    let mut prev: Vec<Complex64> = vec![ZERO; n + 1]; // ε_{-1}
    let mut cur: Vec<Complex64> = s.to_vec(); // ε_0
    let mut best = *s.last().unwrap();
    let max_cols = 2 * 12.min(n / 2);
    for col in 1..=max_cols {
        if cur.len() < 2 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff.norm() < 1e-280 {
                // Converged to machine level; the current entry is as good
                // as it gets.
                return cur[i + 1];
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        prev = std::mem::take(&mut cur);
        cur = next;
        if col % 2 == 0 {
            if let Some(&last) = cur.last() {
                if last.is_finite() {
                    best = last;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

    #[test]
    fn path_invariants_enforced() {
        assert!(HankelPath::new(1.0, PI, 30.0, 1e-10).is_ok());
        assert!(HankelPath::new(0.0, PI, 30.0, 1e-10).is_err());
        assert!(HankelPath::new(1.0, 3.5, 30.0, 1e-10).is_err());
        assert!(HankelPath::new(1.0, PI, 0.5, 1e-10).is_err());
        assert!(HankelPath::new(1.0, PI, 30.0, 0.0).is_err());
    }

    #[test]
    fn classify_examples() {
        let path = HankelPath::new(1.0, 0.75 * PI, 30.0, 1e-10).unwrap();
        let eps = path.epsilon;
        assert_eq!(
            classify(Complex64::new(eps / 2.0, 0.0), &path, 0.0),
            RegionLabel::LeftOfContour
        );
        assert_eq!(
            classify(Complex64::new(2.0 * eps, 0.0), &path, 0.0),
            RegionLabel::RightOfContour
        );
        assert_eq!(
            classify(Complex64::from_polar(2.0 * eps, PI), &path, 1e-9),
            RegionLabel::LeftOfContour
        );
        // On the upper ray itself.
        assert_eq!(
            classify(Complex64::from_polar(5.0, 0.75 * PI), &path, 1e-9),
            RegionLabel::OnContour
        );
    }

    #[test]
    fn classify_conjugation_invariant() {
        let path = HankelPath::new(0.7, 2.0, 30.0, 1e-10).unwrap();
        for &(re, im) in &[(0.3, 0.1), (-2.0, 1.5), (1.4, -3.2), (-0.1, -0.05)] {
            let w = Complex64::new(re, im);
            assert_eq!(
                classify(w, &path, 1e-10),
                classify(w.conj(), &path, 1e-10),
                "conjugation changed label at {w}"
            );
        }
    }

    #[test]
    fn keyhole_reciprocal_gamma_at_one() {
        // f = e^ζ ζ^{−1} over the keyhole equals 2πi · 1/Γ(1) = 2πi.
        let path = HankelPath::new(1.0, PI, 40.0, 1e-12).unwrap();
        let out = integrate(&path, |z| z.exp() / z).unwrap();
        let want = TWO_PI_I;
        assert!(
            (out.value - want).norm() <= 1e-10,
            "got {}, want {want}",
            out.value
        );
    }

    #[test]
    fn open_contour_reciprocal_gamma_at_three() {
        // f = e^ζ ζ^{−3}, η = 3π/4 equals 2πi/Γ(3) = πi.
        let path = HankelPath::new(1.0, 0.75 * PI, 40.0, 1e-12).unwrap();
        let out = integrate(&path, |z| z.exp() * z.powi(-3)).unwrap();
        let want = Complex64::new(0.0, PI);
        assert!(
            (out.value - want).norm() <= 1e-10,
            "got {}, want {want}",
            out.value
        );
    }

    #[test]
    fn growing_integrand_is_rejected() {
        let path = HankelPath::new(1.0, 0.75 * PI, 20.0, 1e-10).unwrap();
        let res = integrate(&path, |z| z);
        assert!(
            matches!(res, Err(MlbivError::TailNotNegligible(_))),
            "expected tail rejection, got {res:?}"
        );
    }

    #[test]
    fn path_independence_for_analytic_decaying_integrand() {
        let f = |z: Complex64| z.exp() * z.powc(Complex64::new(-2.5, 0.4));
        let p1 = HankelPath::new(1.0, 0.75 * PI, 45.0, 1e-11).unwrap();
        let p2 = HankelPath::new(2.3, 0.95 * PI, 55.0, 1e-11).unwrap();
        let v1 = integrate(&p1, f).unwrap();
        let v2 = integrate(&p2, f).unwrap();
        assert!(
            (v1.value - v2.value).norm() <= 2.0 * 1e-10 * v1.value.norm().max(1.0),
            "path dependence: {} vs {}",
            v1.value,
            v2.value
        );
    }

    #[test]
    fn conjugate_symmetric_integrand_gives_real_normalized_value() {
        // For f(conj ζ) = conj f(ζ), the integral over the symmetric path is
        // 2πi times a real number.
        let f = |z: Complex64| z.exp() * z.powf(-1.5);
        let path = HankelPath::new(1.0, 0.8 * PI, 45.0, 1e-12).unwrap();
        let out = integrate(&path, f).unwrap();
        let normalized = out.value / TWO_PI_I;
        assert!(
            normalized.im.abs() <= 1e-12 * normalized.re.abs().max(1.0),
            "normalized value not real: {normalized}"
        );
    }

    #[test]
    fn oscillatory_tail_is_accelerated() {
        // αβ = 2 analogue: pure oscillation on vertical rays with slow
        // algebraic decay; e^u u^{-1.25} over η = π/2 path equals
        // 2πi/Γ(1.25).
        let path = HankelPath::new(0.8, 0.5 * PI, 40.0, 1e-10).unwrap();
        let out = integrate(&path, |z| z.exp() * z.powf(-1.25)).unwrap();
        let want = TWO_PI_I * crate::gamma::recip_gamma(Complex64::new(1.25, 0.0));
        assert!(
            (out.value - want).norm() <= 1e-8 * want.norm(),
            "got {}, want {want}",
            out.value
        );
    }
}
