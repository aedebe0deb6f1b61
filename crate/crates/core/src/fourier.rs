//! Partial Fourier representation on T^n x T^N and coefficient-decay fits.
//!
//! A `SpectralField` stores, per lattice frequency xi, the x-Fourier
//! coefficient slice u_hat(t, xi) on the t-grid. The x-variable is never
//! sampled: xi is an index, so witness sequences may carry frequencies far
//! beyond any grid's Nyquist limit. Only `partial_fourier` (which ingests a
//! sampled function of (t, x)) is Nyquist-constrained.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freq::{norm_sup, norm_sup_int, shell_index, Freq};
use crate::grid::{bin_of_mode, TGrid};
use crate::model::FreqWindow;

/// Partial-Fourier representation: per-frequency slices on the t-grid.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: TGrid,
    pub n_x: usize,
    slices: BTreeMap<Freq, Vec<Complex64>>,
}

impl SpectralField {
    pub fn new(grid: TGrid, n_x: usize) -> Self {
        SpectralField {
            grid,
            n_x,
            slices: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, xi: Freq, slice: Vec<Complex64>) -> Result<()> {
        if xi.len() != self.n_x {
            return Err(Error::GridMismatch(format!(
                "frequency has {} components, field expects {}",
                xi.len(),
                self.n_x
            )));
        }
        if slice.len() != self.grid.len() {
            return Err(Error::GridMismatch(format!(
                "slice has {} entries, grid needs {}",
                slice.len(),
                self.grid.len()
            )));
        }
        self.slices.insert(xi, slice);
        Ok(())
    }

    pub fn slice(&self, xi: &[i128]) -> Option<&[Complex64]> {
        self.slices.get(xi).map(|v| v.as_slice())
    }

    pub fn active_frequencies(&self) -> impl Iterator<Item = &Freq> {
        self.slices.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Freq, &Vec<Complex64>)> {
        self.slices.iter()
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Map every slice through `f`.
    pub fn map_slices(
        &self,
        mut f: impl FnMut(&Freq, &[Complex64]) -> Result<Vec<Complex64>>,
    ) -> Result<SpectralField> {
        let mut out = SpectralField::new(self.grid, self.n_x);
        for (xi, slice) in &self.slices {
            out.insert(xi.clone(), f(xi, slice)?)?;
        }
        Ok(out)
    }

    /// Per-frequency sup over the t-grid.
    pub fn sup_per_frequency(&self) -> Vec<(Freq, f64)> {
        self.slices
            .iter()
            .map(|(xi, s)| (xi.clone(), self.grid.sup_norm(s)))
            .collect()
    }

    /// Grid l2 norm squared of the represented function (Parseval side).
    pub fn mode_energy(&self) -> f64 {
        let scale = 1.0 / self.grid.len() as f64;
        self.slices
            .values()
            .map(|s| s.iter().map(|c| c.norm_sqr()).sum::<f64>() * scale)
            .sum()
    }

    pub fn linear_combination(&self, other: &SpectralField, a: Complex64, b: Complex64) -> Result<SpectralField> {
        if self.grid != other.grid || self.n_x != other.n_x {
            return Err(Error::GridMismatch("field shapes differ".into()));
        }
        let mut out = SpectralField::new(self.grid, self.n_x);
        let keys: std::collections::BTreeSet<_> = self
            .slices
            .keys()
            .chain(other.slices.keys())
            .cloned()
            .collect();
        let zero = vec![Complex64::zero(); self.grid.len()];
        for xi in keys {
            let x = self.slices.get(&xi).unwrap_or(&zero);
            let y = other.slices.get(&xi).unwrap_or(&zero);
            let slice = x
                .iter()
                .zip(y.iter())
                .map(|(u, v)| a * u + b * v)
                .collect();
            out.insert(xi, slice)?;
        }
        Ok(out)
    }
}

/// A sampled function on the full grid of T^{n+N} (t-axes first).
#[derive(Debug, Clone)]
pub struct FullGridFn {
    pub n_t: usize,
    pub n_x: usize,
    pub g: usize,
    /// Row-major values with shape [g; n_t + n_x].
    pub values: Vec<Complex64>,
}

impl FullGridFn {
    pub fn new(n_t: usize, n_x: usize, g: usize, values: Vec<Complex64>) -> Result<Self> {
        let expect = g.pow((n_t + n_x) as u32);
        if values.len() != expect {
            return Err(Error::GridMismatch(format!(
                "expected {expect} samples, got {}",
                values.len()
            )));
        }
        Ok(FullGridFn { n_t, n_x, g, values })
    }
}

/// x-direction partial Fourier transform of a sampled function.
pub fn partial_fourier(samples: &FullGridFn, window: &FreqWindow) -> Result<SpectralField> {
    let g = samples.g;
    if window.xi_max as usize >= g / 2 {
        return Err(Error::NyquistViolation {
            xi_max: window.xi_max,
            grid: g,
        });
    }
    let total_axes = samples.n_t + samples.n_x;
    let full = TGrid::new(total_axes, g);
    // FFT along each x-axis (normalized: coefficients, not sums).
    let mut data = samples.values.clone();
    let mut planner = rustfft::FftPlanner::new();
    let fft = planner.plan_fft_forward(g);
    let mut line = vec![Complex64::zero(); g];
    for axis in samples.n_t..total_axes {
        full.for_each_line(axis, |idxs| {
            for (i, &flat) in idxs.iter().enumerate() {
                line[i] = data[flat];
            }
            fft.process(&mut line);
            for (i, &flat) in idxs.iter().enumerate() {
                data[flat] = line[i] / g as f64;
            }
        });
    }

    // Extract windowed slices.
    let t_grid = TGrid::new(samples.n_t, g);
    let mut field = SpectralField::new(t_grid, samples.n_x);
    let x_strides: Vec<usize> = (samples.n_t..total_axes).map(|a| full.stride(a)).collect();
    for xi in crate::freq::window_points(samples.n_x, window.xi_max) {
        let mut offset = 0usize;
        for (axis, &c) in xi.iter().enumerate() {
            offset += bin_of_mode(c as i64, g) * x_strides[axis];
        }
        let mut slice = vec![Complex64::zero(); t_grid.len()];
        for (t_flat, v) in slice.iter_mut().enumerate() {
            // flat index of (t, x-bin): t-axes are the leading axes, so
            // scale the t index by g^{n_x} and add the x offset
            let flat = t_flat * g.pow(samples.n_x as u32) + offset;
            *v = data[flat];
        }
        field.insert(xi, slice)?;
    }
    Ok(field)
}

/// Inverse of `partial_fourier`: rebuild samples from the active slices.
pub fn inverse_partial_fourier(field: &SpectralField, n_x: usize, g: usize) -> Result<FullGridFn> {
    let n_t = field.grid.n;
    if field.grid.g != g {
        return Err(Error::GridMismatch("t-grid size differs".into()));
    }
    for xi in field.active_frequencies() {
        if norm_sup_int(xi) >= (g / 2) as i128 {
            return Err(Error::NyquistViolation {
                xi_max: norm_sup_int(xi) as i64,
                grid: g,
            });
        }
    }
    let total_axes = n_t + n_x;
    let full = TGrid::new(total_axes, g);
    let mut hat = vec![Complex64::zero(); full.len()];
    let x_strides: Vec<usize> = (n_t..total_axes).map(|a| full.stride(a)).collect();
    for (xi, slice) in field.iter() {
        let mut offset = 0usize;
        for (axis, &c) in xi.iter().enumerate() {
            offset += bin_of_mode(c as i64, g) * x_strides[axis];
        }
        for (t_flat, v) in slice.iter().enumerate() {
            hat[t_flat * g.pow(n_x as u32) + offset] = *v;
        }
    }
    // inverse FFT along x-axes (undo the 1/g normalization)
    let mut planner = rustfft::FftPlanner::new();
    let ifft = planner.plan_fft_inverse(g);
    let mut line = vec![Complex64::zero(); g];
    for axis in n_t..total_axes {
        full.for_each_line(axis, |idxs| {
            for (i, &flat) in idxs.iter().enumerate() {
                line[i] = hat[flat];
            }
            ifft.process(&mut line);
            for (i, &flat) in idxs.iter().enumerate() {
                hat[flat] = line[i];
            }
        });
    }
    FullGridFn::new(n_t, n_x, g, hat)
}

/// Build a field supported exactly on the given frequencies.
pub fn synthesize_lacunary(
    grid: TGrid,
    n_x: usize,
    frequencies: &[Freq],
    amplitudes: &[Vec<Complex64>],
) -> Result<SpectralField> {
    if frequencies.len() != amplitudes.len() {
        return Err(Error::LengthMismatch(format!(
            "{} frequencies vs {} amplitude slices",
            frequencies.len(),
            amplitudes.len()
        )));
    }
    for w in frequencies.windows(2) {
        if norm_sup_int(&w[0]) >= norm_sup_int(&w[1]) {
            return Err(Error::PreconditionFailed(
                "frequencies must be strictly increasing in norm".into(),
            ));
        }
    }
    let mut field = SpectralField::new(grid, n_x);
    for (xi, amp) in frequencies.iter().zip(amplitudes.iter()) {
        field.insert(xi.clone(), amp.clone())?;
    }
    Ok(field)
}

// ---------------------------------------------------------------------------
// Decay fits
// ---------------------------------------------------------------------------

/// Outcome of the coefficient-decay classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DecayClass {
    /// Consistent with smooth data: decay faster than any polynomial, as far
    /// as the window can tell.
    SmoothTrend,
    /// Polynomially bounded (possibly growing): distribution-consistent.
    DistributionTrend,
    /// The log-log fit is too poor to classify.
    GrowthViolation,
}

/// Decay-rate report for a spectral field.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DecayReport {
    /// Least-squares slope of log sup_t |u_hat| against log ||xi||.
    pub fitted_exponent: f64,
    /// Exponents of the t-derivative fields, keyed by multi-index.
    pub per_derivative_exponents: Vec<(Vec<u32>, f64)>,
    pub classification: DecayClass,
    /// RMS residual of the global log-log fit.
    pub residual: f64,
    /// Highest derivative order the checks covered (finite truncation of
    /// the smoothness criterion).
    pub derivative_truncation: u32,
}

/// Data point (ln ||xi||, ln value) for the dyadic probe.
#[derive(Debug, Clone, Copy)]
pub struct ProbePoint {
    pub ln_norm: f64,
    pub ln_value: f64,
}

/// Desk-scale probe for "decays faster than any polynomial": aggregate per
/// dyadic shell, keep strict value records, then extract a chain whose
/// log-log slopes steepen by at least one per step. Two cascading slopes
/// (three chain points) count as a trend; a constant slope never does.
pub fn super_polynomial_trend(points: &[ProbePoint]) -> bool {
    steepening_chain_len(points) >= 3
}

/// Length of the steepest-descent chain described above.
pub fn steepening_chain_len(points: &[ProbePoint]) -> usize {
    // shell aggregation: keep the minimum value per dyadic shell of ln_norm
    let mut shells: BTreeMap<i64, ProbePoint> = BTreeMap::new();
    for p in points {
        if !p.ln_value.is_finite() || p.ln_norm <= 0.0 {
            continue;
        }
        let shell = (p.ln_norm / std::f64::consts::LN_2).floor() as i64;
        shells
            .entry(shell)
            .and_modify(|cur| {
                if p.ln_value < cur.ln_value {
                    *cur = *p;
                }
            })
            .or_insert(*p);
    }
    // strict value records across shells
    let mut records: Vec<ProbePoint> = Vec::new();
    for (_, p) in shells {
        if records.last().map_or(true, |r| p.ln_value < r.ln_value) {
            records.push(p);
        }
    }
    if records.len() < 3 {
        return records.len();
    }
    // greedy chain with slopes dropping by >= 1 each step
    let mut best_len = 0usize;
    for start in 0..records.len() - 1 {
        let mut chain = vec![records[start]];
        let mut last_slope = f64::INFINITY;
        let mut i = start;
        while i + 1 < records.len() {
            let mut found = None;
            for j in i + 1..records.len() {
                let dx = records[j].ln_norm - chain.last().unwrap().ln_norm;
                if dx <= 0.0 {
                    continue;
                }
                let slope = (records[j].ln_value - chain.last().unwrap().ln_value) / dx;
                let need = if last_slope.is_infinite() {
                    0.0
                } else {
                    last_slope - 1.0
                };
                if slope <= need {
                    found = Some((j, slope));
                    break;
                }
            }
            match found {
                Some((j, slope)) => {
                    chain.push(records[j]);
                    last_slope = slope;
                    i = j;
                }
                None => break,
            }
        }
        best_len = best_len.max(chain.len());
    }
    best_len
}

/// Least-squares slope and residual of ln value against ln norm.
fn log_log_fit(points: &[ProbePoint]) -> Option<(f64, f64)> {
    let pts: Vec<&ProbePoint> = points
        .iter()
        .filter(|p| p.ln_value.is_finite() && p.ln_norm > 0.0)
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.ln_norm).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.ln_value).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.ln_norm - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts
        .iter()
        .map(|p| (p.ln_norm - mx) * (p.ln_value - my))
        .sum();
    let slope = sxy / sxx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.ln_value - my - slope * (p.ln_norm - mx)).powi(2))
        .sum();
    Some((slope, (rss / n).sqrt()))
}

/// Number of distinct non-empty dyadic shells among the active frequencies.
fn populated_shells(field: &SpectralField) -> usize {
    let mut shells = std::collections::BTreeSet::new();
    for xi in field.active_frequencies() {
        if let Some(s) = shell_index(xi) {
            shells.insert(s);
        }
    }
    shells.len()
}

fn probe_points_of(values: &[(Freq, f64)]) -> Vec<ProbePoint> {
    values
        .iter()
        .filter(|(xi, v)| norm_sup_int(xi) >= 1 && *v > 0.0)
        .map(|(xi, v)| ProbePoint {
            ln_norm: norm_sup(xi).ln(),
            ln_value: v.ln(),
        })
        .collect()
}

/// Fit the decay rate of a spectral field and classify it.
///
/// The classification mirrors the partial-Fourier smoothness criterion as
/// far as finite data permits: `SmoothTrend` needs the super-polynomial
/// probe to fire for the field and for every checked t-derivative.
pub fn decay_fit(field: &SpectralField, window: &FreqWindow, deriv_order: u32, fit_tol: f64) -> Result<DecayReport> {
    if populated_shells(field) < 2 {
        return Err(Error::InsufficientData(
            "need at least two populated dyadic shells".into(),
        ));
    }
    if (populated_shells(field) as u32) < window.dyadic_levels.min(2) {
        return Err(Error::InsufficientData(format!(
            "need {} populated shells",
            window.dyadic_levels
        )));
    }

    let mut per_derivative = Vec::new();
    let mut smooth = true;
    let base_points = probe_points_of(&field.sup_per_frequency());
    let (fitted_exponent, residual) = log_log_fit(&base_points)
        .ok_or_else(|| Error::InsufficientData("not enough finite samples".into()))?;

    // multi-indices |alpha| <= deriv_order over the t-axes
    let alphas = multi_indices(field.grid.n, deriv_order);
    for alpha in &alphas {
        let data = derivative_sups(field, alpha)?;
        let points = probe_points_of(&data);
        let exp = log_log_fit(&points).map(|(s, _)| s).unwrap_or(f64::NAN);
        per_derivative.push((alpha.clone(), exp));
        if !super_polynomial_trend(&points) {
            smooth = false;
        }
    }

    let classification = if smooth && super_polynomial_trend(&base_points) {
        DecayClass::SmoothTrend
    } else if residual > fit_tol && fitted_exponent.abs() > fit_tol {
        DecayClass::GrowthViolation
    } else {
        DecayClass::DistributionTrend
    };

    Ok(DecayReport {
        fitted_exponent,
        per_derivative_exponents: per_derivative,
        classification,
        residual,
        derivative_truncation: deriv_order,
    })
}

fn multi_indices(n: usize, max_order: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    for _ in 0..max_order {
        let mut next = Vec::new();
        for base in &out {
            for axis in 0..n {
                let mut a = base.clone();
                a[axis] += 1;
                if !next.contains(&a) && !out.contains(&a) {
                    next.push(a);
                }
            }
        }
        out.extend(next);
    }
    out.sort();
    out.dedup();
    out.retain(|a| a.iter().sum::<u32>() <= max_order);
    out
}

fn derivative_sups(field: &SpectralField, alpha: &[u32]) -> Result<Vec<(Freq, f64)>> {
    let mut out = Vec::new();
    for (xi, slice) in field.iter() {
        let mut cur = slice.clone();
        for (axis, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                cur = field.grid.spectral_derivative(&cur, axis);
            }
        }
        out.push((xi.clone(), field.grid.sup_norm(&cur)));
    }
    Ok(out)
}

/// CSV rows (||xi||, sup_t |u_hat|, shell exponent) for external plotting.
pub fn decay_csv(field: &SpectralField) -> String {
    let mut rows = String::from("norm,sup,shell_exponent\n");
    let sups = field.sup_per_frequency();
    let points = probe_points_of(&sups);
    // per-shell local slopes between consecutive shell minima
    let mut shells: BTreeMap<i64, ProbePoint> = BTreeMap::new();
    for p in &points {
        let shell = (p.ln_norm / std::f64::consts::LN_2).floor() as i64;
        shells
            .entry(shell)
            .and_modify(|cur| {
                if p.ln_value < cur.ln_value {
                    *cur = *p;
                }
            })
            .or_insert(*p);
    }
    let shell_pts: Vec<ProbePoint> = shells.into_values().collect();
    for (xi, sup) in &sups {
        let ln_norm = norm_sup(xi).max(1.0).ln();
        let mut local = f64::NAN;
        for w in shell_pts.windows(2) {
            if ln_norm >= w[0].ln_norm && ln_norm <= w[1].ln_norm {
                local = (w[1].ln_value - w[0].ln_value) / (w[1].ln_norm - w[0].ln_norm);
            }
        }
        rows.push_str(&format!("{},{:e},{}\n", norm_sup(xi), sup, local));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FreqWindow;
    use rand::Rng;
    use rand::SeedableRng;

    fn grid1() -> TGrid {
        TGrid::new(1, 64)
    }

    fn field_with_sups(values: &[(i128, f64)]) -> SpectralField {
        let grid = grid1();
        let mut f = SpectralField::new(grid, 1);
        for (xi, v) in values {
            f.insert(vec![*xi], vec![Complex64::new(*v, 0.0); grid.len()])
                .unwrap();
        }
        f
    }

    fn window() -> FreqWindow {
        FreqWindow::with_xi_max(2048)
    }

    #[test]
    fn single_mode_partial_fourier() {
        // u(t, x) = e^{i 3 x} on T^1 x T^1
        let g = 32;
        let full = TGrid::new(2, g);
        let mut vals = vec![Complex64::zero(); full.len()];
        for (flat, v) in vals.iter_mut().enumerate() {
            let c = full.coords(flat);
            let x = full.point(c[1]);
            *v = Complex64::from_polar(1.0, 3.0 * x);
        }
        let f = FullGridFn::new(1, 1, g, vals).unwrap();
        let field = partial_fourier(&f, &FreqWindow::with_xi_max(10)).unwrap();
        let s3 = field.slice(&[3]).unwrap();
        for v in s3 {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        for (xi, slice) in field.iter() {
            if xi != &vec![3i128] {
                for v in slice {
                    assert!(v.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn separable_mode_slice_is_sin_t() {
        let g = 32;
        let full = TGrid::new(2, g);
        let mut vals = vec![Complex64::zero(); full.len()];
        for (flat, v) in vals.iter_mut().enumerate() {
            let c = full.coords(flat);
            let (t, x) = (full.point(c[0]), full.point(c[1]));
            *v = Complex64::new(t.sin(), 0.0) * Complex64::from_polar(1.0, 2.0 * x);
        }
        let f = FullGridFn::new(1, 1, g, vals).unwrap();
        let field = partial_fourier(&f, &FreqWindow::with_xi_max(10)).unwrap();
        let s = field.slice(&[2]).unwrap();
        let tg = TGrid::new(1, g);
        for (i, v) in s.iter().enumerate() {
            assert!((v.re - tg.point(i).sin()).abs() < 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_band_limited() {
        let g = 32;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let full = TGrid::new(2, g);
        // random band-limited field: modes |k|,|xi| <= 5
        let mut vals = vec![Complex64::zero(); full.len()];
        for _ in 0..12 {
            let k = rng.gen_range(-5i64..=5);
            let xi = rng.gen_range(-5i64..=5);
            let amp = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for (flat, v) in vals.iter_mut().enumerate() {
                let c = full.coords(flat);
                let (t, x) = (full.point(c[0]), full.point(c[1]));
                *v += amp * Complex64::from_polar(1.0, k as f64 * t + xi as f64 * x);
            }
        }
        let f = FullGridFn::new(1, 1, g, vals.clone()).unwrap();
        let field = partial_fourier(&f, &FreqWindow::with_xi_max(10)).unwrap();
        let back = inverse_partial_fourier(&field, 1, g).unwrap();
        for (a, b) in vals.iter().zip(back.values.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
        // Parseval at grid level: the grid mean of |u|^2 equals the summed
        // per-mode t-mean energies for band-limited data
        let grid_mean: f64 = vals.iter().map(|c| c.norm_sqr()).sum::<f64>() / full.len() as f64;
        let mode_energy = field.mode_energy();
        assert!((grid_mean - mode_energy).abs() / mode_energy < 1e-10);
    }

    #[test]
    fn nyquist_guard() {
        let g = 16;
        let vals = vec![Complex64::zero(); g * g];
        let f = FullGridFn::new(1, 1, g, vals).unwrap();
        let err = partial_fourier(&f, &FreqWindow::with_xi_max(8)).unwrap_err();
        assert!(matches!(err, Error::NyquistViolation { .. }));
    }

    #[test]
    fn exponential_decay_is_smooth_trend() {
        let values: Vec<(i128, f64)> = (1..=1024).map(|x| (x, (-(x as f64)).exp())).collect();
        let f = field_with_sups(&values);
        let report = decay_fit(&f, &window(), 2, 0.15).unwrap();
        assert_eq!(report.classification, DecayClass::SmoothTrend);
    }

    #[test]
    fn constant_lacunary_is_distribution_trend() {
        let values: Vec<(i128, f64)> = (0..10).map(|k| (1i128 << k, 1.0)).collect();
        let f = field_with_sups(&values);
        let report = decay_fit(&f, &window(), 2, 0.15).unwrap();
        assert_eq!(report.classification, DecayClass::DistributionTrend);
        assert!(report.fitted_exponent.abs() < 0.15);
    }

    #[test]
    fn quadratic_growth_recovers_exponent_two() {
        let values: Vec<(i128, f64)> = (1..=512).map(|x| (x, (x as f64).powi(2))).collect();
        let f = field_with_sups(&values);
        let report = decay_fit(&f, &window(), 2, 0.15).unwrap();
        assert_eq!(report.classification, DecayClass::DistributionTrend);
        assert!((report.fitted_exponent - 2.0).abs() < 0.15);
    }

    #[test]
    fn scaling_shifts_fitted_exponent() {
        let base: Vec<(i128, f64)> = (1..=512).map(|x| (x, (x as f64).powf(-3.0))).collect();
        let f = field_with_sups(&base);
        let r0 = decay_fit(&f, &window(), 0, 0.15).unwrap();
        let shifted: Vec<(i128, f64)> = base
            .iter()
            .map(|(x, v)| (*x, v * (*x as f64).powi(2)))
            .collect();
        let f2 = field_with_sups(&shifted);
        let r2 = decay_fit(&f2, &window(), 0, 0.15).unwrap();
        assert!((r2.fitted_exponent - r0.fitted_exponent - 2.0).abs() < 0.15);
    }

    #[test]
    fn empty_field_errors() {
        let f = SpectralField::new(grid1(), 1);
        assert!(matches!(
            decay_fit(&f, &window(), 2, 0.15),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn lacunary_synthesis_validates() {
        let grid = grid1();
        let err = synthesize_lacunary(
            grid,
            1,
            &[vec![4], vec![2]],
            &[vec![Complex64::zero(); 64], vec![Complex64::zero(); 64]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));

        let err = synthesize_lacunary(grid, 1, &[vec![2]], &[]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch(_)));
    }

    #[test]
    fn linearity_of_partial_fourier() {
        let g = 16;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let full = TGrid::new(1 + 1, g);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let vals: Vec<Complex64> = (0..full.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            FullGridFn::new(1, 1, g, vals).unwrap()
        };
        let u = mk(&mut rng);
        let v = mk(&mut rng);
        let w = FreqWindow::with_xi_max(6);
        let fu = partial_fourier(&u, &w).unwrap();
        let fv = partial_fourier(&v, &w).unwrap();
        let sum_vals: Vec<Complex64> = u
            .values
            .iter()
            .zip(v.values.iter())
            .map(|(a, b)| a + b)
            .collect();
        let fsum = partial_fourier(&FullGridFn::new(1, 1, g, sum_vals).unwrap(), &w).unwrap();
        let lin = fu
            .linear_combination(&fv, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
            .unwrap();
        for (xi, slice) in fsum.iter() {
            let other = lin.slice(xi).unwrap();
            for (a, b) in slice.iter().zip(other.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
