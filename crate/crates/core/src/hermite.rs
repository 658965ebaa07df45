//! Orthonormal Hermite functions and Hermite partial sums.
//!
//! The k-th Hermite function is `h_k(x) = gamma_k H_k(x) exp(-x^2/2)` with
//! `gamma_k = pi^{-1/4} 2^{-k/2} (k!)^{-1/2}`, so that `int h_j h_k = delta_jk`.
//! Values are produced by the uniformly stable three-term recurrence
//!
//! ```text
//! h_{k+1}(x) = x sqrt(2/(k+1)) h_k(x) - sqrt(k/(k+1)) h_{k-1}(x)
//! ```
//!
//! seeded with `h_0 = pi^{-1/4} exp(-x^2/2)`; the Rodrigues form overflows
//! past k ~ 30.  For `x^2/2` beyond the range of `exp` the recurrence runs
//! on mantissas with a separate log-scale accumulator.
//!
//! Partial sums of the Hermite series of `f` are available through two
//! independent routes: coefficient summation ([`expand`] + [`partial_sum`])
//! and the Christoffel-Darboux kernel ([`partial_sum_via_kernel`]).

use crate::error::{Error, Result};
use crate::gridfn::{gauss_legendre, DomainKind, GridFunction, QuadratureSpec};
use statrs::function::gamma::ln_gamma;

const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_6; // pi^(-1/4)

/// Hermite coefficients `c_0..c_n` together with the truncation window used
/// to compute them (`None` means the integrals ran over the full support).
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    coeffs: Vec<f64>,
    truncation: Option<f64>,
}

impl HermiteExpansion {
    pub fn new(coeffs: Vec<f64>, truncation: Option<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::input("expansion needs at least c_0"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("expansion coefficients must be finite"));
        }
        if let Some(t) = truncation {
            if !(t > 0.0) {
                return Err(Error::input("truncation window must be positive"));
            }
        }
        Ok(HermiteExpansion { coeffs, truncation })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
    pub fn truncation(&self) -> Option<f64> {
        self.truncation
    }

    pub fn to_json(&self) -> String {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| format!("{:.16e}", c))
            .collect::<Vec<_>>()
            .join(",");
        let t = match self.truncation {
            Some(t) => format!("{:.16e}", t),
            None => "null".to_string(),
        };
        format!("{{\"n\":{},\"T\":{},\"coeffs\":[{}]}}", self.degree(), t, coeffs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::input(format!("expansion json: {e}")))?;
        let coeffs: Vec<f64> = v["coeffs"]
            .as_array()
            .ok_or_else(|| Error::input("missing coeffs"))?
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| Error::input("non-numeric coefficient")))
            .collect::<Result<_>>()?;
        let truncation = v["T"].as_f64();
        Self::new(coeffs, truncation)
    }
}

/// The window growth law `T_n = scale * n^exponent` with exponent strictly
/// below 1/34.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSchedule {
    scale: f64,
    exponent: f64,
}

impl TruncationSchedule {
    pub fn new(scale: f64, exponent: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::input("schedule scale must be positive"));
        }
        if !(exponent > 0.0 && exponent < 1.0 / 34.0) {
            return Err(Error::input("schedule exponent must lie in (0, 1/34)"));
        }
        Ok(TruncationSchedule { scale, exponent })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn window(&self, n: usize) -> f64 {
        self.scale * (n as f64).powf(self.exponent)
    }
}

impl Default for TruncationSchedule {
    /// Exponent 1/40, scale 1: strictly below the 1/34 threshold, giving
    /// windows around 1.2 at n = 4096.
    fn default() -> Self {
        TruncationSchedule {
            scale: 1.0,
            exponent: 1.0 / 40.0,
        }
    }
}

const MAX_DEGREE: usize = 1_000_000;
const MAX_ABSCISSA: f64 = 200.0;

/// Values `h_0(x) .. h_nmax(x)` of the orthonormal Hermite functions.
pub fn hermite_values(n_max: usize, x: f64) -> Result<Vec<f64>> {
    if n_max > MAX_DEGREE {
        return Err(Error::input("degree beyond 10^6 not supported"));
    }
    if !(x.abs() <= MAX_ABSCISSA) {
        return Err(Error::input("|x| beyond 200 exceeds the underflow guard"));
    }
    let mut out = vec![0.0; n_max + 1];
    if 0.5 * x * x < 600.0 {
        // plain recurrence; h_k values are uniformly bounded
        let h0 = PI_POW_NEG_QUARTER * (-0.5 * x * x).exp();
        out[0] = h0;
        if n_max == 0 {
            return Ok(out);
        }
        out[1] = std::f64::consts::SQRT_2 * x * h0;
        for k in 1..n_max {
            let kf = k as f64;
            out[k + 1] = x * (2.0 / (kf + 1.0)).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        }
        return Ok(out);
    }
    // log-scaled recurrence for deep Gaussian tails
    let mut ln_scale = -0.5 * x * x;
    let mut m_prev = PI_POW_NEG_QUARTER;
    let mut m_curr = std::f64::consts::SQRT_2 * x * PI_POW_NEG_QUARTER;
    let emit = |m: f64, ln_scale: f64| -> f64 {
        if m == 0.0 {
            return 0.0;
        }
        let e = ln_scale + m.abs().ln();
        if e < -745.0 {
            0.0
        } else {
            m.signum() * e.exp()
        }
    };
    out[0] = emit(m_prev, ln_scale);
    if n_max == 0 {
        return Ok(out);
    }
    out[1] = emit(m_curr, ln_scale);
    for k in 1..n_max {
        let kf = k as f64;
        let mut m_next = x * (2.0 / (kf + 1.0)).sqrt() * m_curr - (kf / (kf + 1.0)).sqrt() * m_prev;
        if m_next.abs() > 1e250 {
            let (s, dl) = (2f64.powi(-500), 500.0 * std::f64::consts::LN_2);
            m_next *= s;
            m_curr *= s;
            ln_scale += dl;
        }
        m_prev = m_curr;
        m_curr = m_next;
        out[k + 1] = emit(m_curr, ln_scale);
    }
    Ok(out)
}

/// Single value `h_n(x)`.
pub fn hermite_value(n: usize, x: f64) -> Result<f64> {
    Ok(*hermite_values(n, x)?.last().unwrap())
}

/// Derivative values `h'_k(x)` for `k = 0..n_max`, via
/// `h'_k = sqrt(2k) h_{k-1} - x h_k`.
pub fn hermite_derivative_values(n_max: usize, x: f64) -> Result<Vec<f64>> {
    let h = hermite_values(n_max, x)?;
    let mut out = vec![0.0; n_max + 1];
    out[0] = -x * h[0];
    for k in 1..=n_max {
        out[k] = (2.0 * k as f64).sqrt() * h[k - 1] - x * h[k];
    }
    Ok(out)
}

/// Sign and natural log of `|h_n(0)|` and `|h'_n(0)|` in closed form.
///
/// For even n: `h_n(0) = gamma_n (-1)^{n/2} n! / (n/2)!`, `h'_n(0) = 0`.
/// For odd n: `h_n(0) = 0`, `h'_n(0) = 2n gamma_n (-1)^{(n-1)/2} (n-1)! / ((n-1)/2)!`
/// (from `H'_n(0) = 2n H_{n-1}(0)`).
pub(crate) fn hermite_zero_log(n: usize) -> (f64, f64, f64, f64) {
    let nf = n as f64;
    let ln_gamma_n = -0.25 * std::f64::consts::PI.ln() - 0.5 * nf * std::f64::consts::LN_2
        - 0.5 * ln_gamma(nf + 1.0);
    if n % 2 == 0 {
        let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let ln_abs = ln_gamma_n + ln_gamma(nf + 1.0) - ln_gamma(nf / 2.0 + 1.0);
        (sign, ln_abs, 0.0, f64::NEG_INFINITY)
    } else {
        let dsign = if ((n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let ln_abs_d = (2.0 * nf).ln() + ln_gamma_n + ln_gamma(nf) - ln_gamma((nf + 1.0) / 2.0);
        (0.0, f64::NEG_INFINITY, dsign, ln_abs_d)
    }
}

/// `(h_n(0), h'_n(0))` by the closed forms above.
pub fn hermite_zero_values(n: usize) -> (f64, f64) {
    let (s, l, ds, dl) = hermite_zero_log(n);
    let v = if s == 0.0 { 0.0 } else { s * l.exp() };
    let dv = if ds == 0.0 { 0.0 } else { ds * dl.exp() };
    (v, dv)
}

fn expansion_freq(n: usize) -> f64 {
    (2.0 * n as f64 + 3.0).sqrt()
}

/// Hermite coefficients of `f chi_{(-T,T)}`: `c_k = int_{-T}^{T} f h_k`.
///
/// Quadrature panels are aligned to the cells of `f` and subdivided to the
/// quarter wavelength of `sqrt(2n+3)`.
pub fn expand(f: &GridFunction, n: usize, t: f64) -> Result<HermiteExpansion> {
    expand_with(f, n, t, &QuadratureSpec::sized_for(expansion_freq(n)))
}

/// [`expand`] with an explicit quadrature spec; the spec must be sized to at
/// least the oscillation frequency `sqrt(2n+3)` of `h_n`.
pub fn expand_with(f: &GridFunction, n: usize, t: f64, spec: &QuadratureSpec) -> Result<HermiteExpansion> {
    if !(t > 0.0) {
        return Err(Error::input("truncation window T must be positive"));
    }
    let freq = expansion_freq(n);
    if spec.oscillation_freq < freq {
        return Err(Error::config(format!(
            "quadrature undersized: oscillation_freq {} below required {}",
            spec.oscillation_freq, freq
        )));
    }
    let mut coeffs = vec![0.0; n + 1];
    let (lo, hi) = clip(f, (-t, t));
    if hi > lo {
        for (y, w) in panel_nodes(f, (lo, hi), freq, spec.points_per_panel) {
            let fy = f.eval(y);
            if fy == 0.0 {
                continue;
            }
            let h = hermite_values(n, y)?;
            let wf = w * fy;
            for k in 0..=n {
                coeffs[k] += wf * h[k];
            }
        }
    }
    HermiteExpansion::new(coeffs, Some(t))
}

/// Hermite coefficients over the full support of `f` (`T = none`).
pub fn expand_full(f: &GridFunction, n: usize) -> Result<HermiteExpansion> {
    let (a, b) = f.support();
    let radius = a.abs().max(b.abs()).max(1e-9);
    let e = expand_with(f, n, radius * (1.0 + 1e-12), &QuadratureSpec::sized_for(expansion_freq(n)))?;
    HermiteExpansion::new(e.coeffs().to_vec(), None)
}

/// Quadrature nodes and weights covering `window`, aligned to the cells of
/// `f` and subdivided to the quarter wavelength of `freq`.
fn panel_nodes(f: &GridFunction, window: (f64, f64), freq: f64, points: usize) -> Vec<(f64, f64)> {
    let (gx, gw) = gauss_legendre(points);
    let quarter_wave = if freq > 0.0 {
        0.25 * (2.0 * std::f64::consts::PI / freq)
    } else {
        f64::INFINITY
    };
    let mut out = Vec::new();
    let nodes = f.nodes();
    for i in 0..nodes.len() - 1 {
        let clo = nodes[i].max(window.0);
        let chi = nodes[i + 1].min(window.1);
        if chi <= clo {
            continue;
        }
        let sub = if quarter_wave.is_finite() {
            ((chi - clo) / quarter_wave).ceil().max(1.0) as usize
        } else {
            1
        };
        let h = (chi - clo) / sub as f64;
        for p in 0..sub {
            let plo = clo + h * p as f64;
            let c = plo + 0.5 * h;
            let hw = 0.5 * h;
            for (&x, &w) in gx.iter().zip(gw.iter()) {
                out.push((c + hw * x, w * hw));
            }
        }
    }
    out
}

fn clip(f: &GridFunction, window: (f64, f64)) -> (f64, f64) {
    let (s0, s1) = f.support();
    (window.0.max(s0), window.1.min(s1))
}

/// `S_n f(x) = sum c_k h_k(x)` from a coefficient vector.
pub fn partial_sum(e: &HermiteExpansion, x: f64) -> Result<f64> {
    let h = hermite_values(e.degree(), x)?;
    Ok(e.coeffs().iter().zip(h.iter()).map(|(c, v)| c * v).sum())
}

const KERNEL_DIAGONAL_TOL: f64 = 1e-6;

/// Christoffel-Darboux kernel
/// `k_n(x,y) = (h_{n+1}(x) h_n(y) - h_n(x) h_{n+1}(y)) / (x - y)`,
/// so that `sum_{k<=n} h_k(x) h_k(y) = sqrt((n+1)/2) k_n(x,y)`.
///
/// Near the diagonal (`|x-y| < 1e-6 (1+|x|)`) the 0/0 cancellation is
/// removed by the derivative form
/// `h'_{n+1}(u) h_n(u) - h'_n(u) h_{n+1}(u)` evaluated at the midpoint.
pub fn cd_kernel(n: usize, x: f64, y: f64) -> Result<f64> {
    if (x - y).abs() < KERNEL_DIAGONAL_TOL * (1.0 + x.abs()) {
        let u = 0.5 * (x + y);
        let h = hermite_values(n + 1, u)?;
        let dh = hermite_derivative_values(n + 1, u)?;
        Ok(dh[n + 1] * h[n] - dh[n] * h[n + 1])
    } else {
        let hx = hermite_values(n + 1, x)?;
        let hy = hermite_values(n + 1, y)?;
        Ok((hx[n + 1] * hy[n] - hx[n] * hy[n + 1]) / (x - y))
    }
}

/// `S_n(f chi_T)(x)` by the kernel route:
/// `sqrt((n+1)/2) int_{-T}^{T} k_n(x,y) f(y) dy`.
pub fn partial_sum_via_kernel(f: &GridFunction, t: f64, n: usize, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::input("truncation window T must be positive"));
    }
    let freq = expansion_freq(n);
    let (lo, hi) = clip(f, (-t, t));
    if hi <= lo {
        return Ok(0.0);
    }
    let hx = hermite_values(n + 1, x)?;
    let (hxn, hxn1) = (hx[n], hx[n + 1]);
    let mut acc = 0.0;
    for (y, w) in panel_nodes(f, (lo, hi), freq, 8) {
        let fy = f.eval(y);
        if fy == 0.0 {
            continue;
        }
        let k = if (x - y).abs() < KERNEL_DIAGONAL_TOL * (1.0 + x.abs()) {
            cd_kernel(n, x, y)?
        } else {
            let hy = hermite_values(n + 1, y)?;
            (hxn1 * hy[n] - hxn * hy[n + 1]) / (x - y)
        };
        acc += w * fy * k;
    }
    Ok((0.5 * (n as f64 + 1.0)).sqrt() * acc)
}

/// Output grid density: 32 points per wavelength of the fastest oscillation
/// `sqrt(2n+3)` of `S_n`, at least 65 nodes.
fn output_grid(t: f64, n: usize) -> Vec<f64> {
    let freq = expansion_freq(n);
    let wavelength = 2.0 * std::f64::consts::PI / freq;
    let spacing = wavelength / 32.0;
    let count = ((2.0 * t / spacing).ceil() as usize).max(64);
    (0..=count).map(|i| -t + 2.0 * t * i as f64 / count as f64).collect()
}

/// The truncated partial sum `chi_n S_n(f chi_n)` as a grid function
/// sampled on a grid resolving the oscillation of `S_n`.
pub fn truncated_partial_sum(f: &GridFunction, n: usize, sched: &TruncationSchedule) -> Result<GridFunction> {
    let t = sched.window(n);
    if !(t > 0.0) || f.is_zero() {
        return Ok(GridFunction::zero(DomainKind::RealLine));
    }
    let e = expand(f, n, t)?;
    let nodes = output_grid(t, n);
    let mut values = Vec::with_capacity(nodes.len());
    for &x in &nodes {
        values.push(partial_sum(&e, x)?);
    }
    GridFunction::piecewise_linear(DomainKind::RealLine, nodes, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfn::{DomainKind, GridFunction};
    use approx::assert_abs_diff_eq;

    // Physicists' Hermite polynomial coefficients H_0..H_10, lowest degree
    // first; the independent route to h_k for small k.
    fn hermite_poly_coeffs(k: usize) -> Vec<f64> {
        let mut polys: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 2.0]];
        for m in 1..k.max(1) {
            let prev = &polys[m];
            let prev2 = &polys[m - 1];
            let mut next = vec![0.0; m + 2];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 1] += 2.0 * c;
            }
            for (i, &c) in prev2.iter().enumerate() {
                next[i] -= 2.0 * m as f64 * c;
            }
            polys.push(next);
        }
        polys[k].clone()
    }

    fn hermite_oracle(k: usize, x: f64) -> f64 {
        let coeffs = hermite_poly_coeffs(k);
        let hk: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * x.powi(i as i32))
            .sum();
        let mut ln_gamma_k = -0.25 * std::f64::consts::PI.ln();
        for j in 1..=k {
            ln_gamma_k -= 0.5 * (2.0 * j as f64).ln();
        }
        hk * ln_gamma_k.exp() * (-0.5 * x * x).exp()
    }

    #[test]
    fn h0_at_origin() {
        let h = hermite_values(0, 0.0).unwrap();
        assert_abs_diff_eq!(h[0], 0.75112554, epsilon = 1e-8);
    }

    #[test]
    fn h1_vanishes_at_origin() {
        let h = hermite_values(1, 0.0).unwrap();
        assert_eq!(h[1], 0.0);
    }

    #[test]
    fn recurrence_matches_rodrigues_oracle() {
        for k in 0..=10 {
            for &x in &[0.0, 0.3, 1.3, -2.1, 3.7] {
                let got = hermite_value(k, x).unwrap();
                let want = hermite_oracle(k, x);
                assert!(
                    (got - want).abs() <= 1e-10 * (1.0 + want.abs()),
                    "k={k} x={x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn parity() {
        let xs: Vec<f64> = (0..100).map(|i| -5.0 + 10.0 * i as f64 / 99.0).collect();
        for &x in &xs {
            let hp = hermite_values(200, x).unwrap();
            let hm = hermite_values(200, -x).unwrap();
            for n in 0..=200 {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!(
                    (hm[n] - sign * hp[n]).abs() <= 1e-12 * (1.0 + hp[n].abs()),
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn guards_reject_out_of_range() {
        assert!(hermite_values(0, 201.0).is_err());
        assert!(hermite_values(0, f64::NAN).is_err());
        assert!(hermite_values(MAX_DEGREE + 1, 0.0).is_err());
    }

    #[test]
    fn deep_tail_evaluation_is_finite() {
        // far beyond the naive exp underflow; the log-scaled path
        let h = hermite_values(20000, 150.0).unwrap();
        assert!(h.iter().all(|v| v.is_finite()));
        // oscillatory region for k > x^2/2: values come back to ~n^{-1/4} size
        assert!(h[15000].abs() > 1e-30, "h[15000] = {}", h[15000]);
    }

    #[test]
    fn zero_values_small_n() {
        let (h0, d0) = hermite_zero_values(0);
        assert_abs_diff_eq!(h0, PI_POW_NEG_QUARTER, epsilon = 1e-14);
        assert_eq!(d0, 0.0);
        let (h1, d1) = hermite_zero_values(1);
        assert_eq!(h1, 0.0);
        assert_abs_diff_eq!(d1, std::f64::consts::SQRT_2 * PI_POW_NEG_QUARTER, epsilon = 1e-14);
    }

    #[test]
    fn zero_values_match_recurrence_at_large_even_n() {
        let n = 2000;
        let (hn, _) = hermite_zero_values(n);
        let rec = hermite_values(n, 0.0).unwrap();
        assert!(hn.is_finite());
        assert!(
            (hn - rec[n]).abs() <= 1e-10 * rec[n].abs(),
            "closed form {hn} vs recurrence {}",
            rec[n]
        );
    }

    #[test]
    fn schedule_validation_and_monotonicity() {
        assert!(TruncationSchedule::new(1.0, 1.0 / 34.0).is_err());
        assert!(TruncationSchedule::new(0.0, 0.01).is_err());
        let s = TruncationSchedule::default();
        let mut last = 0.0;
        for n in 1..100 {
            let t = s.window(n);
            assert!(t > last);
            last = t;
        }
    }

    #[test]
    fn expand_zero_function() {
        let f = GridFunction::zero(DomainKind::RealLine);
        let e = expand(&f, 8, 4.0).unwrap();
        assert!(e.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn expand_even_function_kills_odd_coefficients() {
        let f = GridFunction::indicator(DomainKind::RealLine, -1.0, 1.0).unwrap();
        let e = expand(&f, 6, 4.0).unwrap();
        assert!(e.coeffs()[1].abs() <= 1e-12);
        assert!(e.coeffs()[3].abs() <= 1e-12);
    }

    #[test]
    fn expand_rejects_undersized_quadrature() {
        let f = GridFunction::indicator(DomainKind::RealLine, -1.0, 1.0).unwrap();
        let spec = QuadratureSpec::sized_for(1.0);
        assert!(expand_with(&f, 32, 4.0, &spec).is_err());
    }

    #[test]
    fn expansion_of_sampled_hermite_function_is_delta() {
        // f = h_3 sampled densely; c_k should be delta_{k3}
        let m = 400_000usize;
        let nodes: Vec<f64> = (0..=m).map(|i| -8.0 + 16.0 * i as f64 / m as f64).collect();
        let f = GridFunction::sample(DomainKind::RealLine, nodes, |x| hermite_oracle(3, x)).unwrap();
        let e = expand(&f, 5, 8.0).unwrap();
        for k in 0..=5 {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!(
                (e.coeffs()[k] - want).abs() <= 1e-8,
                "c_{k} = {}",
                e.coeffs()[k]
            );
        }
    }

    #[test]
    fn partial_sum_reproduces_single_mode() {
        let mut coeffs = vec![0.0; 6];
        coeffs[0] = 1.0;
        let e = HermiteExpansion::new(coeffs, None).unwrap();
        assert_abs_diff_eq!(partial_sum(&e, 0.0).unwrap(), PI_POW_NEG_QUARTER, epsilon = 1e-14);
    }

    #[test]
    fn partial_sum_of_expanded_h5() {
        let m = 200_000usize;
        let nodes: Vec<f64> = (0..=m).map(|i| -8.0 + 16.0 * i as f64 / m as f64).collect();
        let f = GridFunction::sample(DomainKind::RealLine, nodes, |x| hermite_oracle(5, x)).unwrap();
        let e = expand(&f, 8, 8.0).unwrap();
        for &x in &[0.0, 0.7, -1.9, 2.5] {
            let got = partial_sum(&e, x).unwrap();
            let want = hermite_oracle(5, x);
            assert!((got - want).abs() <= 1e-7, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn kernel_symmetry() {
        for &(x, y) in &[(0.3, -1.2), (1.7, 1.9), (-0.4, 2.2)] {
            let a = cd_kernel(12, x, y).unwrap();
            let b = cd_kernel(12, y, x).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn kernel_n0_closed_form() {
        // k_0(x,y) = sqrt(2) pi^{-1/2} exp(-(x^2+y^2)/2)
        for &(x, y) in &[(0.5, -0.25), (1.0, 2.0), (-1.5, 0.75)] {
            let got = cd_kernel(0, x, y).unwrap();
            let want =
                std::f64::consts::SQRT_2 / std::f64::consts::PI.sqrt() * (-0.5 * (x * x + y * y)).exp();
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn kernel_diagonal_is_smooth() {
        // the derivative-form path must join the direct path without a jump:
        // compare both computation routes at the same separation, and check
        // continuity across the switch threshold
        for n in [4usize, 17, 40] {
            for &x in &[0.0, 0.6, -1.8] {
                let y = x + 1e-4;
                let direct = cd_kernel(n, x, y).unwrap();
                let u = 0.5 * (x + y);
                let h = hermite_values(n + 1, u).unwrap();
                let dh = hermite_derivative_values(n + 1, u).unwrap();
                let deriv_form = dh[n + 1] * h[n] - dh[n] * h[n + 1];
                assert!(
                    (direct - deriv_form).abs() <= 1e-6,
                    "n={n} x={x}: {direct} vs {deriv_form}"
                );
                let tol = KERNEL_DIAGONAL_TOL * (1.0 + x.abs());
                let below = cd_kernel(n, x, x + 0.999 * tol).unwrap();
                let above = cd_kernel(n, x, x + 1.001 * tol).unwrap();
                assert!((below - above).abs() <= 1e-6, "switch jump at n={n} x={x}");
            }
        }
    }

    #[test]
    fn kernel_diagonal_is_positive() {
        // sqrt((n+1)/2) k_n(x,x) = sum h_k(x)^2 > 0
        for n in [0usize, 5, 32] {
            for &x in &[0.0, 1.0, -2.5] {
                assert!(cd_kernel(n, x, x).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn kernel_route_zero_function() {
        let f = GridFunction::zero(DomainKind::RealLine);
        assert_eq!(partial_sum_via_kernel(&f, 2.0, 16, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn kernel_route_decays_far_from_window() {
        let f = GridFunction::indicator(DomainKind::RealLine, -1.0, 1.0).unwrap();
        let t = 1.5;
        let at_zero = partial_sum_via_kernel(&f, t, 16, 0.0).unwrap().abs();
        let far = partial_sum_via_kernel(&f, t, 16, t + 6.0).unwrap().abs();
        assert!(far < at_zero, "far {far} vs center {at_zero}");
    }

    #[test]
    fn truncated_sum_support_within_window() {
        let f = GridFunction::indicator(DomainKind::RealLine, -1.0, 1.0).unwrap();
        let sched = TruncationSchedule::default();
        let g = truncated_partial_sum(&f, 64, &sched).unwrap();
        let t = sched.window(64);
        let (a, b) = g.support();
        assert!(a >= -t - 1e-12 && b <= t + 1e-12);
    }

    #[test]
    fn truncated_sum_of_zero_is_zero() {
        let f = GridFunction::zero(DomainKind::RealLine);
        let g = truncated_partial_sum(&f, 64, &TruncationSchedule::default()).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn expansion_json_round_trip() {
        let e = HermiteExpansion::new(vec![1.0, -0.25, 1e-17], Some(2.5)).unwrap();
        let e2 = HermiteExpansion::from_json(&e.to_json()).unwrap();
        assert_eq!(e, e2);
    }
}
