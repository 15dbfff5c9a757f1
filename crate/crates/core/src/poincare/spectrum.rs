//! Per-level weight spectra and the growth-rate exponent estimator.
//!
//! A spectrum is the distribution of Birkhoff weights S_ω over the words of
//! one length that land in the target set: a sorted list of (S, multiplicity)
//! pairs. Level sums a_m(p) = Σ mult · exp(-p S) are then evaluable at any
//! exponent from a single sweep, which is what makes bisection on p cheap.

use crate::error::{Error, Result};

/// Distribution of Birkhoff weights at one level, sorted by weight.
#[derive(Clone, Debug, Default)]
pub struct Spectrum {
    entries: Vec<(f64, f64)>,
}

impl Spectrum {
    pub fn singleton(s: f64, mult: f64) -> Self {
        Spectrum {
            entries: vec![(s, mult)],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn add(&mut self, s: f64, mult: f64) {
        match self.entries.binary_search_by(|e| e.0.total_cmp(&s)) {
            Ok(i) => self.entries[i].1 += mult,
            Err(i) => self.entries.insert(i, (s, mult)),
        }
    }

    /// All weights shifted by `dw` (order is preserved).
    pub fn shifted(&self, dw: f64) -> Spectrum {
        Spectrum {
            entries: self.entries.iter().map(|&(s, m)| (s + dw, m)).collect(),
        }
    }

    /// Shift in place.
    pub fn shift(&mut self, dw: f64) {
        for e in &mut self.entries {
            e.0 += dw;
        }
    }

    /// Merges another spectrum into this one (sorted two-pointer union).
    pub fn absorb(&mut self, other: &Spectrum) {
        if other.entries.is_empty() {
            return;
        }
        if self.entries.is_empty() {
            self.entries = other.entries.clone();
            return;
        }
        let mut merged = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (self.entries[i], other.entries[j]);
            match a.0.total_cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    merged.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    merged.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&self.entries[i..]);
        merged.extend_from_slice(&other.entries[j..]);
        self.entries = merged;
    }

    /// Rounds weights onto a grid, merging collided entries. Used only when
    /// an entry cap is exceeded; the relative evaluation error is at most
    /// p · grid / 2.
    pub fn coarsen(&mut self, grid: f64) {
        for e in &mut self.entries {
            e.0 = (e.0 / grid).round() * grid;
        }
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.entries.len());
        for &(s, m) in &self.entries {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += m,
                _ => out.push((s, m)),
            }
        }
        self.entries = out;
    }

    /// Σ mult · exp(-p S), summed in weight order.
    pub fn eval(&self, p: f64) -> f64 {
        self.entries.iter().map(|&(s, m)| m * (-p * s).exp()).sum()
    }

    /// Total multiplicity (the p = 0 evaluation).
    pub fn total_multiplicity(&self) -> f64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Weighted mean of S under the exp(-p S) tilt; used for sensitivities.
    pub fn mean_weight(&self, p: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(s, m) in &self.entries {
            let w = m * (-p * s).exp();
            num += s * w;
            den += w;
        }
        num / den
    }
}

/// Per-level spectra for one series target.
#[derive(Clone, Debug, Default)]
pub struct LevelSpectra {
    levels: Vec<Spectrum>,
}

impl LevelSpectra {
    pub fn new(levels: Vec<Spectrum>) -> Self {
        LevelSpectra { levels }
    }

    pub fn levels(&self) -> &[Spectrum] {
        &self.levels
    }

    pub fn max_level(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    /// a_m(p).
    pub fn level_sum(&self, m: usize, p: f64) -> f64 {
        self.levels.get(m).map_or(0.0, |s| s.eval(p))
    }

    /// All level sums at exponent p.
    pub fn level_sums(&self, p: f64) -> Vec<f64> {
        self.levels.iter().map(|s| s.eval(p)).collect()
    }

    /// Truncated series value Σ_{m<=n} a_m(p).
    pub fn total(&self, p: f64) -> f64 {
        self.levels.iter().map(|s| s.eval(p)).sum()
    }

    /// Levels m >= 1 carrying mass.
    pub fn mass_levels(&self) -> Vec<usize> {
        (1..self.levels.len()).filter(|&m| !self.levels[m].is_empty()).collect()
    }

    /// The length lattice: gcd of gaps between mass-carrying levels
    /// (1 when mass sits at consecutive lengths; 0 when fewer than two
    /// levels carry mass).
    pub fn lattice(&self) -> usize {
        let levels = self.mass_levels();
        if levels.len() < 2 {
            return 0;
        }
        let mut g = 0usize;
        for w in levels.windows(2) {
            g = gcd(g, w[1] - w[0]);
        }
        g
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

/// A critical-exponent estimate from level-sum growth rates.
#[derive(Clone, Debug)]
pub struct ExponentEstimate {
    /// δ̂: the exponent where the regressed growth rate changes sign.
    pub value: f64,
    /// Heuristic half-width combining regression error and window
    /// sensitivity; not a certified bound.
    pub ci_width: f64,
    /// Regression window (level range) actually used.
    pub window: (usize, usize),
    /// Length lattice carrying the mass.
    pub lattice: usize,
    /// Growth factors a_{m+lattice}(δ̂)/a_m(δ̂) across the window.
    pub diagnostics: Vec<f64>,
}

/// Knobs for the exponent estimator.
#[derive(Clone, Debug)]
pub struct EstimateOptions {
    /// Bisection tolerance on p.
    pub tol: f64,
    /// Regression window override; defaults to the top half of levels.
    pub window: Option<(usize, usize)>,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            tol: 1e-3,
            window: None,
        }
    }
}

/// Least-squares slope of log a_m(p) against m over the lattice points of
/// the window. Strictly decreasing in p since the potential is positive.
pub fn growth_rate(spectra: &LevelSpectra, window: (usize, usize), lattice: usize, p: f64) -> Result<f64> {
    let pts = window_points(spectra, window, lattice)?;
    let xs: Vec<f64> = pts.iter().map(|&m| m as f64).collect();
    let ys: Vec<f64> = pts.iter().map(|&m| spectra.level_sum(m, p).ln()).collect();
    Ok(slope(&xs, &ys))
}

fn window_points(spectra: &LevelSpectra, window: (usize, usize), lattice: usize) -> Result<Vec<usize>> {
    let mass = spectra.mass_levels();
    let pts: Vec<usize> = mass
        .iter()
        .copied()
        .filter(|&m| m >= window.0 && m <= window.1)
        .collect();
    if pts.len() < 2 {
        return Err(Error::NoData(format!(
            "fewer than two mass-carrying levels in window {window:?} (lattice {lattice})"
        )));
    }
    Ok(pts)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

fn slope_stderr(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    if n < 3 {
        return 0.0;
    }
    let b = slope(xs, ys);
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let a = my - b * mx;
    let mut ss_res = 0.0;
    let mut ss_x = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let r = y - (a + b * x);
        ss_res += r * r;
        ss_x += (x - mx) * (x - mx);
    }
    (ss_res / ((n - 2) as f64 * ss_x)).sqrt()
}

/// Bisection of the growth rate γ(p) to the exponent where it vanishes,
/// with a heuristic confidence width from regression residuals and a
/// split-window sensitivity probe.
pub fn estimate_exponent(
    spectra: &LevelSpectra,
    bracket: Option<(f64, f64)>,
    opts: &EstimateOptions,
) -> Result<ExponentEstimate> {
    let n_max = spectra.max_level();
    let lattice = spectra.lattice();
    if lattice == 0 {
        return Err(Error::NoData("all level sums vanish; nothing to regress".into()));
    }
    let window = opts.window.unwrap_or((n_max / 2, n_max));
    let gamma = |p: f64| growth_rate(spectra, window, lattice, p);

    // establish a sign-change bracket
    let (mut lo, mut hi) = bracket.unwrap_or((0.0, 1.0));
    let mut glo = gamma(lo)?;
    let mut ghi = gamma(hi)?;
    let mut guard = 0;
    while glo <= 0.0 && guard < 64 {
        lo -= (hi - lo).max(1.0);
        glo = gamma(lo)?;
        guard += 1;
    }
    while ghi >= 0.0 && guard < 128 {
        hi += (hi - lo).max(1.0);
        ghi = gamma(hi)?;
        guard += 1;
    }
    if glo <= 0.0 || ghi >= 0.0 {
        return Err(Error::NoData("no growth-rate sign change in any bracket".into()));
    }
    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        if gamma(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);

    // statistical half-width: slope stderr propagated through dγ/dp
    let pts = window_points(spectra, window, lattice)?;
    let xs: Vec<f64> = pts.iter().map(|&m| m as f64).collect();
    let ys: Vec<f64> = pts.iter().map(|&m| spectra.level_sum(m, value).ln()).collect();
    let se = slope_stderr(&xs, &ys);
    let h = opts.tol.max(1e-4);
    let dgdp = (gamma(value + h)? - gamma(value - h)?) / (2.0 * h);
    let stat = if dgdp.abs() > 0.0 { 2.0 * se / dgdp.abs() } else { f64::INFINITY };

    // window sensitivity: re-estimate on the two half-windows when possible
    let mut sens = 0.0;
    let mid = (window.0 + window.1) / 2;
    for sub in [(window.0, mid), (mid, window.1)] {
        if window_points(spectra, sub, lattice).map_or(false, |p| p.len() >= 2) {
            let sub_gamma = |p: f64| growth_rate(spectra, sub, lattice, p);
            if let Ok(delta_sub) = bisect_root(&sub_gamma, lo - 2.0, hi + 2.0, opts.tol) {
                sens = f64::max(sens, (delta_sub - value).abs());
            }
        }
    }
    let ci_width = stat.max(sens).max(opts.tol);

    let diagnostics: Vec<f64> = pts
        .windows(2)
        .map(|w| spectra.level_sum(w[1], value) / spectra.level_sum(w[0], value))
        .collect();

    Ok(ExponentEstimate {
        value,
        ci_width,
        window,
        lattice,
        diagnostics,
    })
}

fn bisect_root(f: &dyn Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo <= 0.0 || fhi >= 0.0 {
        return Err(Error::NoData("no sign change".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm > 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let _ = flo;
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_merge_and_eval() {
        let mut a = Spectrum::singleton(1.0, 2.0);
        a.add(3.0, 1.0);
        let b = Spectrum::singleton(1.0, 1.0);
        a.absorb(&b);
        assert_eq!(a.len(), 2);
        assert_eq!(a.total_multiplicity(), 4.0);
        let p: f64 = 0.7;
        let expect = 3.0 * (-p).exp() + (-3.0 * p).exp();
        assert!((a.eval(p) - expect).abs() < 1e-15);
        let sh = a.shifted(2.0);
        assert!((sh.eval(p) - expect * (-2.0 * p).exp()).abs() < 1e-15);
    }

    #[test]
    fn coarsen_merges_near_entries() {
        let mut s = Spectrum::singleton(1.0, 1.0);
        s.add(1.0 + 1e-12, 1.0);
        s.coarsen(1e-9);
        assert_eq!(s.len(), 1);
        assert_eq!(s.total_multiplicity(), 2.0);
    }

    #[test]
    fn estimator_recovers_pure_geometric_growth() {
        // a_m = 3^m exp(-p m): exact exponent log 3
        let levels: Vec<Spectrum> = (0..=20)
            .map(|m| Spectrum::singleton(m as f64, 3f64.powi(m as i32)))
            .collect();
        let spectra = LevelSpectra::new(levels);
        assert_eq!(spectra.lattice(), 1);
        let est = estimate_exponent(&spectra, None, &EstimateOptions::default()).unwrap();
        assert!((est.value - 3f64.ln()).abs() < 2e-3, "{}", est.value);
        assert!(est.ci_width < 0.05);
    }

    #[test]
    fn estimator_detects_even_lattice() {
        // mass only at even lengths, growth 12 per two steps
        let levels: Vec<Spectrum> = (0..=20)
            .map(|m| {
                if m % 2 == 0 {
                    Spectrum::singleton(m as f64, 12f64.powi(m as i32 / 2))
                } else {
                    Spectrum::default()
                }
            })
            .collect();
        let spectra = LevelSpectra::new(levels);
        assert_eq!(spectra.lattice(), 2);
        let est = estimate_exponent(&spectra, None, &EstimateOptions::default()).unwrap();
        assert!((est.value - 0.5 * 12f64.ln()).abs() < 2e-3);
    }

    #[test]
    fn estimator_errors_without_mass() {
        let spectra = LevelSpectra::new(vec![Spectrum::singleton(0.0, 1.0)]);
        assert!(matches!(
            estimate_exponent(&spectra, None, &EstimateOptions::default()),
            Err(Error::NoData(_))
        ));
    }
}
