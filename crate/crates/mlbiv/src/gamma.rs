//! Complex log-gamma and reciprocal-gamma kernels.
//!
//! The reciprocal 1/Γ is the primitive everywhere in this crate: it is entire,
//! so series terms and asymptotic tail terms never need pole special-casing.
//! `recip_gamma_hankel` computes the same quantity by contour quadrature and
//! serves as an independent oracle for the quadrature machinery itself.

use num_complex::Complex64;

use crate::contour::{self, HankelPath};
use crate::error::{MlbivError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Lanczos parameter g = 607/128, paired with the 15-term coefficient set
/// below (Godfrey's fit; ~15 significant digits for Re z > 0).
const LANCZOS_G: f64 = 4.7421875;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

const HALF_LN_TWO_PI: f64 = 0.918938533204672741780329736406;
const LN_PI: f64 = 1.144729885849400174143427351353;
const LN_2: f64 = std::f64::consts::LN_2;

/// sin(πx) and cos(πx) with argument reduction done on x itself, so large
/// real parts do not degrade accuracy.
fn sin_cos_pi(x: f64) -> (f64, f64) {
    let xr = x - 2.0 * (x / 2.0).round();
    if xr > 0.5 {
        let t = PI * (1.0 - xr);
        (t.sin(), -t.cos())
    } else if xr < -0.5 {
        let t = PI * (xr + 1.0);
        (-t.sin(), -t.cos())
    } else {
        let t = PI * xr;
        (t.sin(), t.cos())
    }
}

/// sin(πz) for complex z via sin(πx)cosh(πy) + i cos(πx)sinh(πy).
fn sin_pi(z: Complex64) -> Complex64 {
    let (s, c) = sin_cos_pi(z.re);
    let (sh, ch) = ((PI * z.im).sinh(), (PI * z.im).cosh());
    Complex64::new(s * ch, c * sh)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Compensated Σ aᵢ·bᵢ + Σ cⱼ.
fn comp_dot(prods: &[(f64, f64)], adds: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut comp = 0.0;
    for &(a, b) in prods {
        let (p, pe) = two_prod(a, b);
        let (t, te) = two_sum(s, p);
        s = t;
        comp += pe + te;
    }
    for &c in adds {
        let (t, te) = two_sum(s, c);
        s = t;
        comp += te;
    }
    s + comp
}

/// ln(t) for real t > 0 as an unevaluated double-double, sharpened by one
/// Newton step: ln t = hi + ln(t·e^{−hi}) ≈ hi + (t·e^{−hi} − 1).
fn ln_dd(t: f64) -> (f64, f64) {
    let hi = t.ln();
    let lo = (-hi).exp() * t - 1.0;
    (hi, lo)
}

/// Principal log Γ(z) by the Lanczos formula; valid for Re z ≥ 0.5.
///
/// The spine (w + 1/2)·ln t − t reaches magnitude ~700 at the top of the
/// supported range, so it is accumulated with error-free transforms (and a
/// refined logarithm on the real axis) to keep exp(log Γ) within 1e-13
/// relative.
fn lanczos_log(z: Complex64) -> Complex64 {
    let w = z - 1.0;
    let mut a = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (w + i as f64);
    }
    let t = w + (LANCZOS_G + 0.5);
    if z.im == 0.0 {
        let (lh, ll) = ln_dd(t.re);
        let re = comp_dot(
            &[(w.re, lh), (0.5, lh), (w.re, ll), (0.5, ll)],
            &[-t.re, HALF_LN_TWO_PI, a.re.ln()],
        );
        return Complex64::new(re, z.im);
    }
    let l = t.ln();
    let re = comp_dot(
        &[(w.re, l.re), (0.5, l.re), (-w.im, l.im)],
        &[-t.re, HALF_LN_TWO_PI],
    );
    let im = comp_dot(&[(w.re, l.im), (0.5, l.im), (w.im, l.re)], &[-t.im]);
    Complex64::new(re, im) + a.ln()
}

/// log sin(πz) continued so that the reflection formula below yields the
/// principal branch of log Γ. Requires Im z ≥ 0, where |e^{2πiz}| ≤ 1.
fn log_sin_pi_upper(z: Complex64) -> Complex64 {
    let e = (Complex64::new(0.0, TWO_PI) * z).exp();
    Complex64::new(-LN_2, 0.5 * PI) - Complex64::new(0.0, PI) * z + (1.0 - e).ln()
}

/// Principal branch of log Γ(z).
///
/// Errors with [`MlbivError::PoleAtZ`] when z is within 1e-12 of a
/// non-positive integer. Arguments with |z| beyond ~170 leave the range where
/// exp(log Γ) is representable in f64; that overflow regime is not handled.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(MlbivError::ParameterOutOfRange(format!(
            "log_gamma requires finite z, got {z}"
        )));
    }
    let n = z.re.round();
    if n <= 0.0 && (z - n).norm() < 1e-12 {
        return Err(MlbivError::PoleAtZ(z));
    }
    if z.re >= 0.5 {
        Ok(lanczos_log(z))
    } else if z.im >= 0.0 {
        Ok(LN_PI - log_sin_pi_upper(z) - lanczos_log(1.0 - z))
    } else {
        Ok(log_gamma(z.conj())?.conj())
    }
}

/// 1/Γ(z), entire: exactly zero (bitwise) at the non-positive integers and
/// defined for every finite complex z.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return ZERO;
    }
    if z.re >= 0.5 {
        (-lanczos_log(z)).exp()
    } else {
        // 1/Γ(z) = sin(πz)/π · Γ(1−z); 1−z has Re ≥ 0.5.
        sin_pi(z) / PI * lanczos_log(1.0 - z).exp()
    }
}

/// 1/Γ(s) by quadrature of e^u u^{−s} over the given Hankel path, divided by
/// 2πi. Used as an independent oracle for `recip_gamma`.
///
/// The path must open past the imaginary axis (η ∈ (π/2, π]) so the integrand
/// decays on the rays; `tol` is an absolute target.
pub fn recip_gamma_hankel(s: Complex64, path: &HankelPath, tol: f64) -> Result<Complex64> {
    if path.eta <= 0.5 * PI {
        return Err(MlbivError::ParameterOutOfRange(format!(
            "reciprocal-gamma path needs eta in (pi/2, pi], got {}",
            path.eta
        )));
    }
    if !(tol > 0.0) {
        return Err(MlbivError::ParameterOutOfRange(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let f = |u: Complex64| u.exp() * u.powc(-s);
    let outcome = contour::integrate_with_tol(path, &f, 0.0, TWO_PI * tol * 0.5)?;
    Ok(outcome.value / Complex64::new(0.0, TWO_PI))
}
