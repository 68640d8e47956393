//! Direct summation of the defining double power series
//! Σ_{n,m≥0} x^n y^m / Γ(nα + mβ + μ) and of the one-variable series it
//! reduces to. This is the ground-truth method at desk scale; it reports its
//! own cancellation trouble honestly instead of attempting extended
//! precision.

use num_complex::Complex64;

use crate::error::{MlbivError, Result, Warning};
use crate::gamma::recip_gamma;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Maximum number of anti-diagonals (or rows/terms) before giving up.
const MAX_DIAGONALS: usize = 10_000;

/// Cancellation ratio beyond which a result is flagged as untrustworthy.
pub const CANCELLATION_LIMIT: f64 = 1e6;

/// The parameter triple (α, β, μ). α, β must be positive reals; μ is any
/// complex number. The contour and asymptotic methods need more (capability
/// flags below), which is not a construction failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    pub mu: Complex64,
}

impl Params {
    pub fn new(alpha: f64, beta: f64, mu: Complex64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(MlbivError::ParameterOutOfRange(format!(
                "alpha and beta must be positive reals, got alpha={alpha}, beta={beta}"
            )));
        }
        if !mu.is_finite() {
            return Err(MlbivError::ParameterOutOfRange(format!(
                "mu must be finite, got {mu}"
            )));
        }
        Ok(Self { alpha, beta, mu })
    }

    /// Hypotheses of the contour representations and the asymptotic theorem:
    /// 0 < α, β < 2 and αβ < 2.
    pub fn supports_contour(&self) -> bool {
        self.alpha < 2.0 && self.beta < 2.0 && self.alpha * self.beta < 2.0
    }

    /// The α = 2 / β = 2 edge of the representations, valid for Re(μ) > 0
    /// (and αβ ≤ 2 so an admissible opening angle exists, possibly only the
    /// degenerate keyhole).
    pub fn supports_contour_edge(&self) -> bool {
        (self.alpha == 2.0 || self.beta == 2.0)
            && self.alpha * self.beta <= 2.0
            && self.mu.re > 0.0
    }

    pub fn supports_asymptotic(&self) -> bool {
        self.supports_contour()
    }
}

/// Compensated (Kahan) accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: Complex64,
    compensation: Complex64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self {
            sum: ZERO,
            compensation: ZERO,
        }
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

/// Convergence bookkeeping for a series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesDiagnostics {
    pub diagonals_summed: usize,
    pub last_increment_magnitude: f64,
    /// Max partial-sum magnitude over result magnitude; ≥ 1.
    pub cancellation_ratio: f64,
}

impl SeriesDiagnostics {
    pub fn warnings(&self) -> Vec<Warning> {
        if self.cancellation_ratio > CANCELLATION_LIMIT {
            vec![Warning::CancellationLoss {
                ratio: self.cancellation_ratio,
            }]
        } else {
            Vec::new()
        }
    }
}

fn cancellation_ratio(max_partial: f64, result: f64) -> f64 {
    if result > 0.0 {
        (max_partial / result).max(1.0)
    } else if max_partial > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// One-variable Mittag-Leffler series Σ_k z^k / Γ(αk + ν), with diagnostics.
pub fn ml_one_var_diag(
    z: Complex64,
    alpha: f64,
    nu: Complex64,
    tol: f64,
) -> Result<(Complex64, SeriesDiagnostics)> {
    if !(alpha > 0.0 && tol > 0.0) {
        return Err(MlbivError::ParameterOutOfRange(format!(
            "ml_one_var requires alpha > 0 and tol > 0, got alpha={alpha}, tol={tol}"
        )));
    }
    let mut acc = KahanSum::new();
    let mut powers = PowerTrack::new(z);
    let mut max_partial = 0.0_f64;
    let mut small_run = 0;
    for k in 0..MAX_DIAGONALS {
        let arg = nu + alpha * k as f64;
        let rg = recip_gamma(arg);
        let term = powers.gamma_term(k, arg, rg);
        if !term.is_finite() {
            return Err(MlbivError::SeriesNoConvergence(k));
        }
        acc.add(term);
        max_partial = max_partial.max(acc.value().norm());
        let last_increment = term.norm();

        if last_increment < tol * acc.value().norm().max(f64::MIN_POSITIVE) && k > 0 {
            small_run += 1;
            if small_run >= 3 {
                let value = acc.value();
                let diag = SeriesDiagnostics {
                    diagonals_summed: k + 1,
                    last_increment_magnitude: last_increment,
                    cancellation_ratio: cancellation_ratio(max_partial, value.norm()),
                };
                return Ok((value, diag));
            }
        } else {
            small_run = 0;
        }
        powers.extend_to(k + 1);
    }
    Err(MlbivError::SeriesNoConvergence(MAX_DIAGONALS))
}

/// Iterated powers of a fixed base with an overflow-safe fallback: once
/// |base^n| leaves the directly representable range, series terms
/// base^n · (1/Γ) are assembled in log space instead, so huge powers paired
/// with tiny (even underflowed) reciprocal-gamma factors still yield their
/// finite product.
struct PowerTrack {
    base: Complex64,
    log_base: Complex64,
    pows: Vec<Complex64>,
    /// Indices < cap can be used directly.
    cap: usize,
}

const POW_DIRECT_LIMIT: f64 = 1e150;
const EXP_UNDERFLOW: f64 = -746.0;

/// ln of the reciprocal gamma at `arg`, robust down to (and past) the f64
/// underflow threshold. Returns None when the term is an exact gamma pole.
fn ln_recip_gamma(arg: Complex64, rg: Complex64) -> Option<Complex64> {
    match crate::gamma::log_gamma(arg) {
        Ok(lg) => Some(-lg),
        Err(_) => {
            // Within the pole guard band: rg is exactly zero at the pole,
            // tiny but meaningful right next to it.
            if rg == ZERO {
                None
            } else {
                let m = rg.re.abs().max(rg.im.abs());
                Some(Complex64::new((rg / m).norm().ln() + m.ln(), rg.arg()))
            }
        }
    }
}

impl PowerTrack {
    fn new(base: Complex64) -> Self {
        let log_base = if base == ZERO { ZERO } else { base.ln() };
        Self {
            base,
            log_base,
            pows: vec![ONE],
            cap: usize::MAX,
        }
    }

    fn extend_to(&mut self, n: usize) {
        while self.pows.len() <= n {
            let next = *self.pows.last().unwrap() * self.base;
            if self.cap == usize::MAX && (!next.is_finite() || next.norm() > POW_DIRECT_LIMIT) {
                self.cap = self.pows.len();
            }
            self.pows.push(next);
        }
    }

    /// base^n / Γ(arg), where `rg` is the precomputed reciprocal gamma.
    fn gamma_term(&mut self, n: usize, arg: Complex64, rg: Complex64) -> Complex64 {
        if self.base == ZERO && n > 0 {
            return ZERO;
        }
        self.extend_to(n);
        if n < self.cap {
            if rg == ZERO {
                return ZERO;
            }
            let direct = self.pows[n] * rg;
            if direct.is_finite() {
                return direct;
            }
        }
        match ln_recip_gamma(arg, rg) {
            Some(lr) => exp_guarded(n as f64 * self.log_base + lr),
            None => ZERO,
        }
    }

    /// base^n · other^m / Γ(arg) assembled overflow-safely.
    fn gamma_term2(
        &mut self,
        n: usize,
        other: &mut PowerTrack,
        m: usize,
        arg: Complex64,
        rg: Complex64,
    ) -> Complex64 {
        if (self.base == ZERO && n > 0) || (other.base == ZERO && m > 0) {
            return ZERO;
        }
        self.extend_to(n);
        other.extend_to(m);
        if n < self.cap && m < other.cap {
            if rg == ZERO {
                return ZERO;
            }
            let direct = self.pows[n] * other.pows[m] * rg;
            if direct.is_finite() {
                return direct;
            }
        }
        match ln_recip_gamma(arg, rg) {
            Some(lr) => {
                exp_guarded(n as f64 * self.log_base + m as f64 * other.log_base + lr)
            }
            None => ZERO,
        }
    }
}

impl PowerTrack {
    /// base^n · w for a generic finite weight (no pole bookkeeping).
    fn times(&mut self, n: usize, w: Complex64) -> Complex64 {
        if w == ZERO || (self.base == ZERO && n > 0) {
            return ZERO;
        }
        self.extend_to(n);
        if n < self.cap {
            let direct = self.pows[n] * w;
            if direct.is_finite() {
                return direct;
            }
        }
        let m = w.re.abs().max(w.im.abs());
        let lw = Complex64::new((w / m).norm().ln() + m.ln(), w.arg());
        exp_guarded(n as f64 * self.log_base + lw)
    }
}

fn exp_guarded(s: Complex64) -> Complex64 {
    if s.re < EXP_UNDERFLOW {
        ZERO
    } else {
        s.exp()
    }
}

/// One-variable Mittag-Leffler series Σ_k z^k / Γ(αk + ν).
pub fn ml_one_var(z: Complex64, alpha: f64, nu: Complex64, tol: f64) -> Result<Complex64> {
    ml_one_var_diag(z, alpha, nu, tol).map(|(v, _)| v)
}

/// The double power series summed by anti-diagonals n + m = k, with
/// compensated accumulation. Stops once three consecutive diagonals fall
/// below tol times the running partial sum.
pub fn ml_two_var_series(
    x: Complex64,
    y: Complex64,
    p: &Params,
    tol: f64,
) -> Result<(Complex64, SeriesDiagnostics)> {
    if !(tol > 0.0) {
        return Err(MlbivError::ParameterOutOfRange(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut xpow = PowerTrack::new(x);
    let mut ypow = PowerTrack::new(y);
    let mut acc = KahanSum::new();
    let mut max_partial = 0.0_f64;
    let mut small_run = 0;

    for k in 0..MAX_DIAGONALS {
        let mut diag = KahanSum::new();
        for n in 0..=k {
            let m = k - n;
            let arg = p.mu + n as f64 * p.alpha + m as f64 * p.beta;
            let rg = recip_gamma(arg);
            let term = xpow.gamma_term2(n, &mut ypow, m, arg, rg);
            if !term.is_finite() {
                return Err(MlbivError::SeriesNoConvergence(k));
            }
            if term != ZERO {
                diag.add(term);
            }
        }
        acc.add(diag.value());
        max_partial = max_partial.max(acc.value().norm());
        let last_diag = diag.value().norm();

        if last_diag < tol * acc.value().norm().max(f64::MIN_POSITIVE) && k > 0 {
            small_run += 1;
            if small_run >= 3 {
                let value = acc.value();
                let diag = SeriesDiagnostics {
                    diagonals_summed: k + 1,
                    last_increment_magnitude: last_diag,
                    cancellation_ratio: cancellation_ratio(max_partial, value.norm()),
                };
                return Ok((value, diag));
            }
        } else {
            small_run = 0;
        }
    }
    Err(MlbivError::SeriesNoConvergence(MAX_DIAGONALS))
}

/// The same double series summed row-wise: Σ_n x^n E_β(y; nα + μ). An
/// independent summation order used to cross-check `ml_two_var_series`.
pub fn ml_reduction_row(x: Complex64, y: Complex64, p: &Params, tol: f64) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(MlbivError::ParameterOutOfRange(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let inner_tol = (tol * 0.1).max(1e-16);
    let mut acc = KahanSum::new();
    let mut xpow = PowerTrack::new(x);
    let mut small_run = 0;
    for n in 0..MAX_DIAGONALS {
        let row_tail = ml_one_var(y, p.beta, p.mu + n as f64 * p.alpha, inner_tol)?;
        let row = xpow.times(n, row_tail);
        if !row.is_finite() {
            return Err(MlbivError::SeriesNoConvergence(n));
        }
        acc.add(row);
        if row.norm() < tol * acc.value().norm().max(f64::MIN_POSITIVE) && n > 0 {
            small_run += 1;
            if small_run >= 3 {
                return Ok(acc.value());
            }
        } else {
            small_run = 0;
        }
    }
    Err(MlbivError::SeriesNoConvergence(MAX_DIAGONALS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(alpha: f64, beta: f64, mu: f64) -> Params {
        Params::new(alpha, beta, c(mu, 0.0)).unwrap()
    }

    #[test]
    fn one_var_anchors() {
        let e = ml_one_var(ONE, 1.0, ONE, 1e-14).unwrap();
        assert!((e.re - std::f64::consts::E).abs() < 1e-13 && e.im == 0.0);

        let cosh1 = ml_one_var(ONE, 2.0, ONE, 1e-14).unwrap();
        assert!((cosh1.re - 1.5430806348152437785).abs() < 1e-13);

        // z = 0: only k = 0 survives.
        let mu = c(0.8, 0.3);
        let v = ml_one_var(ZERO, 0.7, mu, 1e-14).unwrap();
        assert!((v - recip_gamma(mu)).norm() < 1e-15);
    }

    #[test]
    fn one_var_reference_values() {
        // mpmath at 30 digits.
        let v = ml_one_var(c(2.5, 0.0), 0.7, c(1.3, 0.0), 1e-14).unwrap();
        assert!((v.re - 38.86165637199785341).abs() < 1e-12 * 38.9);
        let v = ml_one_var(c(-3.0, 0.0), 0.9, c(0.5, 0.0), 1e-14).unwrap();
        assert!((v.re + 0.10025244677360001751).abs() < 1e-12);
    }

    #[test]
    fn two_var_anchors() {
        let (v, d) = ml_two_var_series(ZERO, ZERO, &p(0.9, 0.9, 3.0), 1e-13).unwrap();
        assert!((v.re - 0.5).abs() < 1e-15 && v.im == 0.0);
        assert!(d.cancellation_ratio >= 1.0);

        // y = 0 reduces to the one-variable series.
        let x = c(2.0, 0.7);
        let (v, _) = ml_two_var_series(x, ZERO, &p(0.9, 1.3, 1.0), 1e-13).unwrap();
        let one = ml_one_var(x, 0.9, ONE, 1e-14).unwrap();
        assert!((v - one).norm() < 1e-12 * one.norm());
    }

    #[test]
    fn two_var_collapse_identity_value() {
        // alpha = beta = 1, mu = 1: closed form (x e^x − y e^y)/(x − y),
        // re-derived by independent summation: 2e − sqrt(e).
        let (v, _) = ml_two_var_series(ONE, c(0.5, 0.0), &p(1.0, 1.0, 1.0), 1e-14).unwrap();
        assert!(
            (v.re - 3.7878423862179623239).abs() < 1e-12,
            "got {}",
            v.re
        );
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn two_var_reference_values() {
        let cases = [
            (c(3.0, 0.0), c(0.2, 0.0), 0.8, 0.9, 1.0, 68.652337969898800991),
            (c(2.2, 0.0), c(-1.5, 0.0), 0.6, 1.3, 2.0, 14.395066511381377929),
            (c(-4.0, 0.0), c(2.0, 0.0), 0.8, 0.9, 1.0, 3.0743273568500120186),
        ];
        for (x, y, a, b, mu, want) in cases {
            let (v, _) = ml_two_var_series(x, y, &p(a, b, mu), 1e-14).unwrap();
            assert!(
                (v.re - want).abs() < 1e-11 * want.abs().max(1.0),
                "E({x},{y};{a},{b},{mu}) = {v}, want {want}"
            );
        }
    }

    #[test]
    fn reduction_row_boundary_cases() {
        let params = p(0.8, 1.1, 0.7);
        let y = c(1.2, -0.4);
        let rows = ml_reduction_row(ZERO, y, &params, 1e-12).unwrap();
        let one = ml_one_var(y, 1.1, c(0.7, 0.0), 1e-13).unwrap();
        assert!((rows - one).norm() < 1e-11 * one.norm());

        let x = c(-2.0, 0.3);
        let rows = ml_reduction_row(x, ZERO, &params, 1e-12).unwrap();
        let one = ml_one_var(x, 0.8, c(0.7, 0.0), 1e-13).unwrap();
        assert!((rows - one).norm() < 1e-11 * one.norm().max(1.0));
    }

    #[test]
    fn summation_orders_agree() {
        let params = p(0.7, 1.2, 1.5);
        let tol = 1e-12;
        for &(xr, xi, yr, yi) in &[
            (1.0, 0.5, -2.0, 0.3),
            (-3.0, 0.0, 2.5, -1.0),
            (0.1, 2.9, 0.4, 0.2),
        ] {
            let x = c(xr, xi);
            let y = c(yr, yi);
            let (diag, _) = ml_two_var_series(x, y, &params, tol).unwrap();
            let rows = ml_reduction_row(x, y, &params, tol).unwrap();
            assert!(
                (diag - rows).norm() <= 10.0 * tol * diag.norm().max(1.0),
                "orders disagree at ({x}, {y}): {diag} vs {rows}"
            );
        }
    }

    #[test]
    fn positive_terms_dominate_partials() {
        // For x, y, mu real positive every term is positive, so the result
        // bounds every partial sum and the cancellation ratio is 1.
        let (v, d) = ml_two_var_series(c(2.0, 0.0), c(1.5, 0.0), &p(0.8, 0.6, 1.2), 1e-13).unwrap();
        assert!(v.re > 0.0);
        assert!(d.cancellation_ratio <= 1.0 + 1e-12);
    }

    #[test]
    fn cancellation_is_reported() {
        // Negative arguments at small alpha: huge alternating diagonals.
        let (_, d) =
            ml_two_var_series(c(-12.0, 0.0), c(-9.0, 0.0), &p(0.5, 0.5, 1.0), 1e-12).unwrap();
        assert!(
            d.cancellation_ratio > CANCELLATION_LIMIT,
            "expected large cancellation ratio, got {}",
            d.cancellation_ratio
        );
        assert!(!d.warnings().is_empty());
    }

    #[test]
    fn unrepresentable_intermediates_fail_honestly() {
        // Partial sums exceed f64 range long before the gamma decay wins;
        // the series reports no-convergence instead of returning garbage.
        let res = ml_two_var_series(c(-30.0, 0.0), c(-25.0, 0.0), &p(0.5, 0.5, 1.0), 1e-12);
        assert!(matches!(res, Err(MlbivError::SeriesNoConvergence(_))));
    }

    #[test]
    fn conjugate_symmetry() {
        let params = p(0.9, 1.4, 2.0);
        let x = c(1.7, 0.9);
        let y = c(-0.8, 2.1);
        let (v, _) = ml_two_var_series(x, y, &params, 1e-13).unwrap();
        let (vc, _) = ml_two_var_series(x.conj(), y.conj(), &params, 1e-13).unwrap();
        assert!((vc - v.conj()).norm() <= 1e-13 * v.norm().max(1.0));
    }
}
