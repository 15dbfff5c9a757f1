//! Truncated restricted Poincaré series, critical-exponent estimation, and
//! numerical verification of the series' structural properties
//! (supermultiplicativity, termwise decay, boundary-ray convergence).

pub mod dp;
pub mod spectrum;

pub use dp::EngineOptions;
pub use spectrum::{estimate_exponent, EstimateOptions, ExponentEstimate, LevelSpectra, Spectrum};

use crate::error::{Error, Result};
use crate::extension::Projection;
use crate::freegroup::{BoundaryPoint, GroupElement};
use crate::symbolic::SftSystem;

/// A truncated restricted series Z_n(p|g) with its per-length contributions
/// a_m = Σ_{|ω|=m, χ(ω)=g} exp(-p S_ω u).
#[derive(Clone, Debug)]
pub struct SeriesProfile {
    pub target: GroupElement,
    pub exponent: f64,
    pub max_length: usize,
    pub level_sums: Vec<f64>,
    pub total: f64,
}

/// Exact level sums for m <= n by the pruned context/group DP; identical to
/// brute-force enumeration up to floating reassociation.
pub fn truncated_series(
    system: &SftSystem,
    chi: &Projection,
    g: &GroupElement,
    p: f64,
    n: usize,
    opts: &EngineOptions,
) -> Result<SeriesProfile> {
    let level_sums = match isotropic_radial_profile(system, chi, g.len(), p, n) {
        Some(sums) => sums,
        None => dp::fiber_weights(system, chi, g, p, n, opts)?,
    };
    let total = level_sums.iter().sum();
    Ok(SeriesProfile {
        target: g.clone(),
        exponent: p,
        max_length: n,
        level_sums,
        total,
    })
}

/// r_m = #{ω : |ω| = m, χ(ω) = 1_Γ}, exactly.
pub fn kernel_counts(
    system: &SftSystem,
    chi: &Projection,
    n: usize,
    opts: &EngineOptions,
) -> Result<Vec<u128>> {
    dp::fiber_counts(system, chi, &GroupElement::identity(), n, opts)
}

/// Level spectra of Z(·|g); all exponents evaluable afterwards.
pub fn series_spectra(
    system: &SftSystem,
    chi: &Projection,
    g: &GroupElement,
    n: usize,
    opts: &EngineOptions,
) -> Result<LevelSpectra> {
    dp::fiber_spectra(system, chi, g, n, opts)
}

/// Critical-exponent estimate δ̂(g) by bisection of the regressed growth
/// rate of log a_m(p) over the mass-carrying length lattice.
pub fn exponent_estimate(
    system: &SftSystem,
    chi: &Projection,
    g: &GroupElement,
    n_max: usize,
    bracket: Option<(f64, f64)>,
    opts: &EngineOptions,
    est: &EstimateOptions,
) -> Result<ExponentEstimate> {
    if n_max < 8 {
        return Err(Error::NoData(format!("n_max = {n_max} < 8 leaves no regression window")));
    }
    let spectra = series_spectra(system, chi, g, n_max, opts)?;
    estimate_exponent(&spectra, bracket, est)
}

/// One pair's sweep in the supermultiplicativity report.
#[derive(Clone, Debug)]
pub struct SupermultRow {
    pub g: GroupElement,
    pub g2: GroupElement,
    /// (n, Z_n(p|g) Z_n(p|g') / Z_{2n+L}(p|gg')).
    pub ratios: Vec<(usize, f64)>,
}

/// Sweep of Z(p|g) Z(p|g') / Z(p|gg') ratios over pairs and truncations;
/// a stabilizing running maximum is the executable shadow of the finite
/// supermultiplicativity constant.
#[derive(Clone, Debug)]
pub struct SupermultiplicativityReport {
    pub p: f64,
    pub connector_bound: usize,
    pub rows: Vec<SupermultRow>,
    /// Per truncation n, the maximum ratio over all pairs.
    pub running_max: Vec<(usize, f64)>,
}

impl SupermultiplicativityReport {
    /// Relative change of the running maximum over the last `k` truncations.
    pub fn tail_variation(&self, k: usize) -> f64 {
        if self.running_max.len() < k || k < 2 {
            return f64::INFINITY;
        }
        let tail = &self.running_max[self.running_max.len() - k..];
        let lo = tail.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
        let hi = tail.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / hi
    }
}

pub fn supermultiplicativity_report(
    system: &SftSystem,
    chi: &Projection,
    p: f64,
    pairs: &[(GroupElement, GroupElement)],
    truncations: &[usize],
    connector_bound: usize,
    opts: &EngineOptions,
) -> Result<SupermultiplicativityReport> {
    let mut rows = Vec::with_capacity(pairs.len());
    let mut per_n_max: Vec<(usize, f64)> = truncations.iter().map(|&n| (n, 0.0)).collect();
    // profile cache keyed by (|g| under isotropy or exact g, truncation)
    let mut totals: std::collections::BTreeMap<(Vec<i16>, usize), f64> = std::collections::BTreeMap::new();
    let mut total_of = |g: &GroupElement, n: usize| -> Result<f64> {
        let key = (g.letters().to_vec(), n);
        if let Some(&t) = totals.get(&key) {
            return Ok(t);
        }
        let t = truncated_series(system, chi, g, p, n, opts)?.total;
        totals.insert(key, t);
        Ok(t)
    };
    for (g, g2) in pairs {
        let prod = g.multiply(g2);
        let mut ratios = Vec::with_capacity(truncations.len());
        for (idx, &n) in truncations.iter().enumerate() {
            let num = total_of(g, n)? * total_of(g2, n)?;
            let den = total_of(&prod, 2 * n + connector_bound)?;
            let ratio = num / den;
            ratios.push((n, ratio));
            if ratio > per_n_max[idx].1 {
                per_n_max[idx].1 = ratio;
            }
        }
        rows.push(SupermultRow {
            g: g.clone(),
            g2: g2.clone(),
            ratios,
        });
    }
    Ok(SupermultiplicativityReport {
        p,
        connector_bound,
        rows,
        running_max: per_n_max,
    })
}

/// Per-prefix findings of the termwise decay check.
#[derive(Clone, Debug)]
pub struct TermwisePrefix {
    pub m: usize,
    /// Z_n(p | x_0..x_{m-1}).
    pub z_lo: f64,
    /// Z_n(p' | x_0..x_{m-1}).
    pub z_hi: f64,
    pub ratio: f64,
    /// max over truncations n' <= n of Z_{n'}(p') / (C_m Z_{n'}(p)) - 1;
    /// nonpositive up to floating slack when the termwise bound holds.
    pub worst_slack: f64,
}

/// Verification of the termwise comparison
/// Z(p'|g) <= exp((p'-p)V_u + (p-p')|g| min u / λ_1) Z(p|g) along a
/// boundary ray, with the decay fit of the ratio series.
#[derive(Clone, Debug)]
pub struct TermwiseDecayReport {
    pub p: f64,
    pub p_hi: f64,
    pub v_u: f64,
    pub min_u: f64,
    pub lambda1: usize,
    pub per_prefix: Vec<TermwisePrefix>,
    /// Partial sums of Σ_m Z(p'|x_0..x_{m-1}) / Z(p|x_0..x_{m-1}).
    pub partial_sums: Vec<f64>,
    /// Least-squares slope of log ratio_m over the top half of m.
    pub fitted_rate: f64,
    /// The proof's rate (p - p') min u / λ_1 (negative).
    pub bound_rate: f64,
}

pub fn termwise_decay_check(
    system: &SftSystem,
    chi: &Projection,
    x: &BoundaryPoint,
    p: f64,
    p_hi: f64,
    m_max: usize,
    n: usize,
    opts: &EngineOptions,
) -> Result<TermwiseDecayReport> {
    if p_hi < p {
        return Err(Error::Config("termwise check needs p' >= p".into()));
    }
    let v_u = system.distortion_constant();
    let min_u = system.potential().min();
    let lambda1 = chi.lambda1();
    let mut per_prefix = Vec::with_capacity(m_max);
    let mut partial_sums = Vec::with_capacity(m_max);
    let mut running = 0.0;
    for m in 1..=m_max {
        let g = x.prefix(m);
        let spectra = series_spectra(system, chi, &g, n, opts)?;
        let c_m = ((p_hi - p) * v_u + (p - p_hi) * m as f64 * min_u / lambda1 as f64).exp();
        let mut worst = f64::NEG_INFINITY;
        let mut acc_lo = 0.0;
        let mut acc_hi = 0.0;
        for lvl in 0..=n {
            acc_lo += spectra.level_sum(lvl, p);
            acc_hi += spectra.level_sum(lvl, p_hi);
            if acc_lo > 0.0 {
                worst = worst.max(acc_hi / (c_m * acc_lo) - 1.0);
            }
        }
        if worst > 1e-12 {
            return Err(Error::CheckFailed {
                check: "termwise series comparison".into(),
                details: format!("prefix length {m}: relative violation {worst:.3e}"),
            });
        }
        let (z_lo, z_hi) = (acc_lo, acc_hi);
        let ratio = if z_lo > 0.0 { z_hi / z_lo } else { f64::NAN };
        running += ratio;
        partial_sums.push(running);
        per_prefix.push(TermwisePrefix {
            m,
            z_lo,
            z_hi,
            ratio,
            worst_slack: worst,
        });
    }
    // decay fit over the top half of the prefixes
    let half = (m_max / 2).max(1);
    let xs: Vec<f64> = (half..=m_max).map(|m| m as f64).collect();
    let ys: Vec<f64> = per_prefix[half - 1..].iter().map(|r| r.ratio.ln()).collect();
    let fitted_rate = regression_slope(&xs, &ys);
    let bound_rate = (p - p_hi) * min_u / lambda1 as f64;
    Ok(TermwiseDecayReport {
        p,
        p_hi,
        v_u,
        min_u,
        lambda1,
        per_prefix,
        partial_sums,
        fitted_rate,
        bound_rate,
    })
}

fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Partial sums S_M = Σ_{m<=M} Z_n(p|x_0..x_{m-1}) along a boundary ray,
/// plus the running sup of the fiber totals (the proof-level quantity
/// sup_g Z(p'|g) probed along the ray).
#[derive(Clone, Debug)]
pub struct BoundarySeriesReport {
    pub p: f64,
    pub n: usize,
    pub fiber_totals: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub running_sup: Vec<f64>,
}

pub fn boundary_series(
    system: &SftSystem,
    chi: &Projection,
    x: &BoundaryPoint,
    p: f64,
    m_max: usize,
    n: usize,
    opts: &EngineOptions,
) -> Result<BoundarySeriesReport> {
    let mut fiber_totals = Vec::with_capacity(m_max);
    let mut partial_sums = Vec::with_capacity(m_max);
    let mut running_sup = Vec::with_capacity(m_max);
    let mut acc = 0.0;
    let mut sup = 0.0f64;
    for m in 1..=m_max {
        let g = x.prefix(m);
        let z = truncated_series(system, chi, &g, p, n, opts)?.total;
        acc += z;
        sup = sup.max(z);
        fiber_totals.push(z);
        partial_sums.push(acc);
        running_sup.push(sup);
    }
    Ok(BoundarySeriesReport {
        p,
        n,
        fiber_totals,
        partial_sums,
        running_sup,
    })
}

/// Exact radial fast path for isotropic balanced-step systems: a full shift
/// whose symbol images biject onto the balanced generating set, with a
/// constant potential. The fiber level sums then depend on the target only
/// through |g|, and column counts over the radius collapse the state space.
fn isotropic_radial_profile(
    system: &SftSystem,
    chi: &Projection,
    g_len: usize,
    p: f64,
    n: usize,
) -> Option<Vec<f64>> {
    let a = system.alphabet_len();
    let rank = chi.rank();
    if a != 2 * rank {
        return None;
    }
    for i in 0..a {
        for j in 0..a {
            if !system.admissible_pair(i as u8, j as u8) {
                return None;
            }
        }
    }
    let pot = system.potential();
    if pot.depth() != 1 {
        return None;
    }
    let c0 = pot.value(&[0])?;
    for s in 0..a {
        if pot.value(&[s as u8]) != Some(c0) {
            return None;
        }
    }
    let mut seen = vec![false; a];
    for s in 0..a {
        let img = chi.image(s as u8);
        if img.len() != 1 {
            return None;
        }
        let l = img.letters()[0];
        let idx = (l.unsigned_abs() as usize - 1) * 2 + usize::from(l < 0);
        if seen[idx] {
            return None;
        }
        seen[idx] = true;
    }

    // column counts M_m(r) of the radial walk; division by the sphere size
    // recovers the per-element count N_m(|g|)
    let steps = a as u128;
    let mut col = vec![0u128; n + 2];
    col[0] = 1;
    let mut out = Vec::with_capacity(n + 1);
    let sphere = |r: usize| -> u128 {
        if r == 0 {
            1
        } else {
            steps * (steps - 1).pow(r as u32 - 1)
        }
    };
    for m in 0..=n {
        let a_m = if g_len <= n && col[g_len] > 0 {
            let per_elt = col[g_len] / sphere(g_len);
            debug_assert_eq!(col[g_len] % sphere(g_len), 0);
            per_elt as f64 * (-p * c0 * m as f64).exp()
        } else {
            0.0
        };
        out.push(a_m);
        if m == n {
            break;
        }
        let mut next = vec![0u128; n + 2];
        for r in 0..=n {
            let v = col[r];
            if v == 0 {
                continue;
            }
            if r == 0 {
                next[1] += v * steps;
            } else {
                next[r - 1] += v;
                if r + 1 <= n + 1 {
                    next[r + 1] += v * (steps - 1);
                }
            }
        }
        col = next;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::PotentialSpec;
    use std::collections::HashMap;

    fn f2_srw() -> (SftSystem, Projection) {
        let system = SftSystem::full_shift(
            vec!["a".into(), "A".into(), "b".into(), "B".into()],
            PotentialSpec::constant(4, 1.0),
        )
        .unwrap();
        let chi = Projection::new(
            2,
            vec![
                GroupElement::parse("e1").unwrap(),
                GroupElement::parse("E1").unwrap(),
                GroupElement::parse("e2").unwrap(),
                GroupElement::parse("E2").unwrap(),
            ],
        )
        .unwrap();
        (system, chi)
    }

    /// Non-full-shift fixture: {a, A, b, B} with aa and bB forbidden, and an
    /// asymmetric depth-2 potential.
    pub(crate) fn thin_fixture() -> (SftSystem, Projection) {
        let names = vec!["a".to_string(), "A".into(), "b".into(), "B".into()];
        let forbidden = [(0usize, 0usize), (2, 3)];
        let mut table = HashMap::new();
        let vals = [0.7, 1.3, 0.9, 1.1];
        for i in 0..4u8 {
            for j in 0..4u8 {
                if !forbidden.contains(&(i as usize, j as usize)) {
                    table.insert(vec![i, j], vals[i as usize] + 0.25 * vals[j as usize]);
                }
            }
        }
        let system = SftSystem::new(
            names,
            &forbidden,
            false,
            PotentialSpec::new(2, table).unwrap(),
        )
        .unwrap();
        let chi = Projection::new(
            2,
            vec![
                GroupElement::parse("e1").unwrap(),
                GroupElement::parse("E1").unwrap(),
                GroupElement::parse("e2").unwrap(),
                GroupElement::parse("E2").unwrap(),
            ],
        )
        .unwrap();
        (system, chi)
    }

    /// Brute-force fiber level sums by full enumeration.
    fn brute_levels(
        system: &SftSystem,
        chi: &Projection,
        g: &GroupElement,
        p: f64,
        n: usize,
    ) -> Vec<f64> {
        let mut out = vec![0.0; n + 1];
        for m in 0..=n {
            system.for_each_word(m, None, None, &mut |w| {
                if &chi.project_symbols(w) == g {
                    let word = system.word(w).unwrap();
                    out[m] += (-p * system.birkhoff_sup(&word)).exp();
                }
            });
        }
        out
    }

    #[test]
    fn truncated_series_matches_brute_force_f2() {
        let (sys, chi) = f2_srw();
        let opts = EngineOptions::default();
        for (g, p) in [
            (GroupElement::identity(), 1.0),
            (GroupElement::parse("e1").unwrap(), 0.7),
            (GroupElement::parse("e1 e2").unwrap(), 1.3),
        ] {
            let profile = truncated_series(&sys, &chi, &g, p, 6, &opts).unwrap();
            let brute = brute_levels(&sys, &chi, &g, p, 6);
            for (a, b) in profile.level_sums.iter().zip(&brute) {
                let denom = b.abs().max(1e-300);
                assert!((a - b).abs() / denom <= 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn truncated_series_matches_brute_force_thin() {
        let (sys, chi) = thin_fixture();
        let opts = EngineOptions::default();
        for (g, p) in [
            (GroupElement::identity(), 0.9),
            (GroupElement::parse("E2 e1").unwrap(), 1.1),
        ] {
            let profile = truncated_series(&sys, &chi, &g, p, 7, &opts).unwrap();
            let brute = brute_levels(&sys, &chi, &g, p, 7);
            for (a, b) in profile.level_sums.iter().zip(&brute) {
                let denom = b.abs().max(1e-300);
                assert!((a - b).abs() / denom <= 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn f2_kernel_profile_values() {
        let (sys, chi) = f2_srw();
        let opts = EngineOptions::default();
        let profile =
            truncated_series(&sys, &chi, &GroupElement::identity(), 1.0, 4, &opts).unwrap();
        assert!((profile.level_sums[0] - 1.0).abs() < 1e-15);
        assert!((profile.level_sums[2] - 4.0 * (-2.0f64).exp()).abs() < 1e-14);
        assert!((profile.level_sums[4] - 28.0 * (-4.0f64).exp()).abs() < 1e-14);
        let expect = 1.0 + 4.0 * (-2.0f64).exp() + 28.0 * (-4.0f64).exp();
        assert!((profile.total - expect).abs() < 1e-13);

        let single = truncated_series(
            &sys,
            &chi,
            &GroupElement::parse("e1").unwrap(),
            0.8,
            1,
            &opts,
        )
        .unwrap();
        assert!((single.level_sums[1] - (-0.8f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn kernel_counts_match_brute_force() {
        let (sys, chi) = f2_srw();
        let counts = kernel_counts(&sys, &chi, 6, &EngineOptions::default()).unwrap();
        assert_eq!(&counts[..], &[1, 0, 4, 0, 28, 0, 232]);
        // brute-force oracle over all 4^m words
        for m in 0..=6 {
            let mut r = 0u128;
            sys.for_each_word(m, None, None, &mut |w| {
                if chi.project_symbols(w).is_identity() {
                    r += 1;
                }
            });
            assert_eq!(counts[m], r);
        }
    }

    #[test]
    fn radial_fast_path_agrees_with_dp() {
        let (sys, chi) = f2_srw();
        let opts = EngineOptions::default();
        for g in [
            GroupElement::identity(),
            GroupElement::parse("e1").unwrap(),
            GroupElement::parse("e1 e2").unwrap(),
        ] {
            let fast = isotropic_radial_profile(&sys, &chi, g.len(), 1.2, 10).unwrap();
            let slow = dp::fiber_weights(&sys, &chi, &g, 1.2, 10, &opts).unwrap();
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
        // the thin fixture must not take the fast path
        let (thin_sys, thin_chi) = thin_fixture();
        assert!(isotropic_radial_profile(&thin_sys, &thin_chi, 0, 1.0, 6).is_none());
    }

    #[test]
    fn exponent_estimate_recovers_f2_growth() {
        let (sys, chi) = f2_srw();
        let est = exponent_estimate(
            &sys,
            &chi,
            &GroupElement::identity(),
            16,
            None,
            &EngineOptions::default(),
            &EstimateOptions::default(),
        )
        .unwrap();
        assert_eq!(est.lattice, 2);
        let target = 0.5 * 12f64.ln();
        assert!((est.value - target).abs() < 0.15, "δ̂ = {}", est.value);
    }

    #[test]
    fn scaling_identity() {
        // Z_{c u, n}(p|g) = Z_{u, n}(c p|g) exactly
        let (sys, chi) = f2_srw();
        let scaled = sys.with_potential(sys.potential().scaled(2.0)).unwrap();
        let opts = EngineOptions::default();
        let g = GroupElement::parse("e1").unwrap();
        let a = truncated_series(&scaled, &chi, &g, 0.9, 8, &opts).unwrap();
        let b = truncated_series(&sys, &chi, &g, 1.8, 8, &opts).unwrap();
        for (x, y) in a.level_sums.iter().zip(&b.level_sums) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-300));
        }
    }

    #[test]
    fn monotone_in_p() {
        let (sys, chi) = thin_fixture();
        let opts = EngineOptions::default();
        let g = GroupElement::identity();
        let lo = truncated_series(&sys, &chi, &g, 0.8, 8, &opts).unwrap();
        let hi = truncated_series(&sys, &chi, &g, 1.0, 8, &opts).unwrap();
        // strict decrease holds for every level with positive Birkhoff mass;
        // the ε contribution a_0 = exp(0) is exponent-independent
        for (a, b) in lo.level_sums.iter().zip(&hi.level_sums).skip(1) {
            if *a > 0.0 {
                assert!(b < a);
            }
        }
    }

    #[test]
    fn supermultiplicativity_small_cases() {
        let (sys, chi) = f2_srw();
        let opts = EngineOptions::default();
        let e1 = GroupElement::parse("e1").unwrap();
        let report = supermultiplicativity_report(
            &sys,
            &chi,
            1.5,
            &[(e1.clone(), e1.inverse())],
            &[1, 2],
            0,
            &opts,
        )
        .unwrap();
        // Z_1(p|e1) Z_1(p|e1^{-1}) = e^{-2p} against Z_2(p|1) = 1 + 4 e^{-2p}
        let z1 = (-1.5f64).exp();
        let z2 = 1.0 + 4.0 * (-3.0f64).exp();
        let expect = z1 * z1 / z2;
        let got = report.rows[0].ratios[0].1;
        assert!((got - expect).abs() < 1e-14);
        assert!(got < 1.0);
    }

    #[test]
    fn termwise_decay_on_f2() {
        let (sys, chi) = f2_srw();
        let x = BoundaryPoint::parse("", "e1 e2").unwrap();
        let report =
            termwise_decay_check(&sys, &chi, &x, 1.3, 1.6, 8, 14, &EngineOptions::default())
                .unwrap();
        // degenerate bound when p' = p: ratios exactly one
        let degenerate =
            termwise_decay_check(&sys, &chi, &x, 1.3, 1.3, 5, 10, &EngineOptions::default())
                .unwrap();
        for (i, r) in degenerate.per_prefix.iter().enumerate() {
            assert!((r.ratio - 1.0).abs() < 1e-12);
            assert!((degenerate.partial_sums[i] - (i + 1) as f64).abs() < 1e-11);
        }
        // decay rate at most (p - p') min u / λ1 up to regression noise
        assert!(report.fitted_rate <= report.bound_rate + 0.05);
        for w in report.per_prefix.windows(2) {
            assert!(w[1].ratio < w[0].ratio);
        }
    }

    #[test]
    fn boundary_series_regimes() {
        let (sys, chi) = f2_srw();
        let x = BoundaryPoint::parse("", "e1 e2").unwrap();
        let opts = EngineOptions::default();
        // p = 1.5 > δ̂: increments decay geometrically
        let conv = boundary_series(&sys, &chi, &x, 1.5, 8, 14, &opts).unwrap();
        let incr: Vec<f64> = conv.fiber_totals.clone();
        for w in incr.windows(2) {
            assert!(w[1] < w[0]);
        }
        // m_max = 1: S_1 = Z_n(p|x_0)
        assert!((conv.partial_sums[0] - conv.fiber_totals[0]).abs() < 1e-15);
        // p = 0: the increments are exact fiber word counts, so the partial
        // sums keep growing by at least one per prefix — the counting-case
        // divergence
        let div = boundary_series(&sys, &chi, &x, 0.0, 6, 10, &opts).unwrap();
        for t in &div.fiber_totals {
            assert!(*t >= 1.0);
            assert_eq!(t.fract(), 0.0);
        }
        for w in div.partial_sums.windows(2) {
            assert!(w[1] >= w[0] + 1.0);
        }
    }
}
