//! Orbit enumeration over reduced words: per-level distance histograms for
//! the unrestricted series (critical exponent of the group), the
//! kernel-restricted series (exponent of the normal subgroup), and the
//! coset-band covering sums.
//!
//! Weights here are word-specific (the orbital distance d_h(0, ω·0) is not
//! locally constant), so no state merging is possible; instead one depth-
//! first sweep bins the distances per level and every exponent is evaluated
//! from the histograms afterwards. Bin counts are exact integers, so
//! parallel subtree results merge associatively and the output is identical
//! for any thread count.
//!
//! Rotationally symmetric groups are enumerated with the first symbol
//! pinned (conjugation by the rotation preserves distances exactly), and a
//! conjugation-reflection symmetry additionally collapses mirror-image
//! second-symbol subtrees; both reductions are bit-exact.

use rayon::prelude::*;

use super::{LimitCoding, Mobius, SchottkyGroup};
use crate::error::{Error, Result};
use crate::extension::Projection;
use crate::freegroup::{BoundaryPoint, GroupElement, Letter};
use crate::poincare::spectrum::{LevelSpectra, Spectrum};
use crate::symbolic::Sym;

/// Knobs for the orbit sweeps.
#[derive(Clone, Debug)]
pub struct OrbitOptions {
    /// Histogram bin width in distance units; evaluation error is at most
    /// p · bin / 2 relative.
    pub bin_width: f64,
    /// Hard cap on visited nodes (per sweep).
    pub node_cap: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            bin_width: 1e-3,
            node_cap: 20_000_000_000,
        }
    }
}

/// Per-level flat bin counts; bump is a plain array increment.
struct FlatHist {
    bins: Vec<u64>,
    per_level: usize,
}

impl FlatHist {
    fn new(levels: usize, per_level: usize) -> Self {
        FlatHist {
            bins: vec![0; levels * per_level],
            per_level,
        }
    }

    #[inline]
    fn bump(&mut self, level: usize, value: f64, inv_bin: f64) {
        let bin = ((value * inv_bin).round() as usize).min(self.per_level - 1);
        self.bins[level * self.per_level + bin] += 1;
    }

    fn merge_scaled(&mut self, other: &FlatHist, scale: u64) {
        for (a, &b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b * scale;
        }
    }

    fn to_spectra(&self, levels: usize, bin_width: f64, mult_from_level1: u64) -> LevelSpectra {
        let out = (0..levels)
            .map(|m| {
                let scale = if m == 0 { 1 } else { mult_from_level1 };
                let mut s = Spectrum::default();
                let row = &self.bins[m * self.per_level..(m + 1) * self.per_level];
                for (bin, &count) in row.iter().enumerate() {
                    if count > 0 {
                        s.add(bin as f64 * bin_width, (count * scale) as f64);
                    }
                }
                s
            })
            .collect();
        LevelSpectra::new(out)
    }
}

fn per_level_bins(group: &SchottkyGroup, n_max: usize, bin_width: f64) -> usize {
    let max_step = (0..group.len())
        .map(|a| group.generator(a as Sym).origin_distance())
        .fold(0.0, f64::max);
    // slack for the geometric weight's bounded deviation from the distance
    ((n_max as f64 * max_step + 24.0) / bin_width).ceil() as usize + 2
}

/// Rotation-by-one symbol symmetry: circles equally spaced with equal radii
/// and a shift-equivariant pairing. Conjugating a word by the rotation
/// preserves the orbital distance exactly, so enumeration may fix the first
/// symbol and scale multiplicities by the alphabet size.
fn full_rotation_symmetry(group: &SchottkyGroup) -> bool {
    let n = group.len();
    let phi = 2.0 * std::f64::consts::PI / n as f64;
    let rot = num_complex::Complex64::from_polar(1.0, phi);
    for j in 0..n {
        let jn = (j + 1) % n;
        let a = group.circle(j as Sym);
        let b = group.circle(jn as Sym);
        if (b.center - a.center * rot).norm() > 1e-12 || (b.radius - a.radius).abs() > 1e-12 {
            return false;
        }
        if group.pair(jn as Sym) as usize != (group.pair(j as Sym) as usize + 1) % n {
            return false;
        }
    }
    true
}

/// Complex-conjugation symmetry j ↦ (n - j) mod n: mirror-image words have
/// bit-identical distances, so one of each mirror pair of subtrees suffices.
fn reflection_symmetry(group: &SchottkyGroup) -> bool {
    let n = group.len();
    for j in 0..n {
        let sj = (n - j) % n;
        let a = group.circle(j as Sym);
        let b = group.circle(sj as Sym);
        if (b.center - a.center.conj()).norm() > 1e-12 || (b.radius - a.radius).abs() > 1e-12 {
            return false;
        }
        if group.pair(sj as Sym) as usize != (n - group.pair(j as Sym) as usize) % n {
            return false;
        }
    }
    true
}

struct UnrestrictedSweep<'a> {
    group: &'a SchottkyGroup,
    coding: &'a LimitCoding,
    n_max: usize,
    inv_bin: f64,
}

impl UnrestrictedSweep<'_> {
    fn descend(
        &self,
        prev: Sym,
        m: &Mobius,
        level: usize,
        orb: &mut FlatHist,
        geo: &mut FlatHist,
        nodes: &mut u64,
    ) {
        if level == self.n_max {
            return;
        }
        let forbidden = self.group.pair(prev);
        for s in 0..self.group.len() as Sym {
            if s == forbidden {
                continue;
            }
            let g = self.coding.geometric_step(m, s);
            let m2 = m.compose_fast(self.group.generator(s));
            *nodes += 1;
            orb.bump(level + 1, m2.origin_distance(), self.inv_bin);
            geo.bump(level + 1, g, self.inv_bin);
            self.descend(s, &m2, level + 1, orb, geo, nodes);
        }
    }
}

/// Per-level histograms of the unrestricted series Σ_{ω reduced}: returns
/// (orbital, geometric) spectra so the exponents from both potentials come
/// from one sweep.
pub fn unrestricted_spectra(
    coding: &LimitCoding,
    n_max: usize,
    opts: &OrbitOptions,
) -> Result<(LevelSpectra, LevelSpectra)> {
    let group = coding.group();
    let n = group.len();
    let rotational = full_rotation_symmetry(group);
    let reflective = rotational && reflection_symmetry(group);
    let firsts: Vec<Sym> = if rotational {
        vec![0]
    } else {
        (0..n as Sym).collect()
    };
    let multiplier = if rotational { n as u64 } else { 1 };
    let per_level = per_level_bins(group, n_max, opts.bin_width);
    let inv_bin = 1.0 / opts.bin_width;
    let sweep = UnrestrictedSweep {
        group,
        coding,
        n_max,
        inv_bin,
    };

    let mut orb = FlatHist::new(n_max + 1, per_level);
    let mut geo = FlatHist::new(n_max + 1, per_level);
    orb.bump(0, 0.0, inv_bin);
    geo.bump(0, 0.0, inv_bin);
    // (second symbol, matrix, subtree multiplicity)
    let mut tasks: Vec<(Sym, Mobius, u64)> = Vec::new();
    for &f in &firsts {
        let m1 = *group.generator(f);
        orb.bump(1, m1.origin_distance(), inv_bin);
        geo.bump(1, coding.geometric_birkhoff(&[f])?, inv_bin);
        if n_max < 2 {
            continue;
        }
        for s in 0..n as Sym {
            if s == group.pair(f) {
                continue;
            }
            // mirror subtrees contribute identical histograms
            let mirror = ((n - s as usize) % n) as Sym;
            let mult = if reflective && f == 0 {
                if mirror < s {
                    continue;
                } else if mirror > s {
                    2
                } else {
                    1
                }
            } else {
                1
            };
            let m2 = m1.compose(group.generator(s));
            for _ in 0..mult {
                orb.bump(2, m2.origin_distance(), inv_bin);
                geo.bump(2, coding.geometric_birkhoff(&[f, s])?, inv_bin);
            }
            tasks.push((s, m2, mult));
        }
    }

    let results: Vec<(FlatHist, FlatHist, u64)> = tasks
        .par_iter()
        .map(|(prev, m, _)| {
            let mut o = FlatHist::new(n_max + 1, per_level);
            let mut g = FlatHist::new(n_max + 1, per_level);
            let mut nodes = 0u64;
            sweep.descend(*prev, m, 2, &mut o, &mut g, &mut nodes);
            (o, g, nodes)
        })
        .collect();
    let mut total_nodes = 0u64;
    for ((o, g, nodes), (_, _, mult)) in results.iter().zip(&tasks) {
        orb.merge_scaled(o, *mult);
        geo.merge_scaled(g, *mult);
        total_nodes += nodes;
        if total_nodes > opts.node_cap {
            return Err(Error::Inconclusive(format!(
                "orbit sweep exceeded the node cap {}",
                opts.node_cap
            )));
        }
    }
    Ok((
        orb.to_spectra(n_max + 1, opts.bin_width, multiplier),
        geo.to_spectra(n_max + 1, opts.bin_width, multiplier),
    ))
}

/// Reduced-word stack for the Γ-image with O(1) undo.
struct ImageStack {
    letters: Vec<Letter>,
}

struct ImageUndo {
    cancelled: Vec<Letter>,
    appended: usize,
}

impl ImageStack {
    fn push_image(&mut self, img: &[Letter]) -> ImageUndo {
        let mut cancelled = Vec::new();
        let mut appended = 0usize;
        for &l in img {
            if appended == 0 && self.letters.last() == Some(&-l) {
                cancelled.push(-l);
                self.letters.pop();
            } else {
                self.letters.push(l);
                appended += 1;
            }
        }
        ImageUndo { cancelled, appended }
    }

    fn pop_image(&mut self, undo: ImageUndo) {
        self.letters.truncate(self.letters.len() - undo.appended);
        for l in undo.cancelled.into_iter().rev() {
            self.letters.push(l);
        }
    }

    fn distance_to(&self, target: &[Letter]) -> usize {
        let common = self
            .letters
            .iter()
            .zip(target)
            .take_while(|(a, b)| a == b)
            .count();
        self.letters.len() + target.len() - 2 * common
    }
}

struct RestrictedSweep<'a> {
    group: &'a SchottkyGroup,
    images: Vec<&'a [Letter]>,
    target: &'a [Letter],
    lambda: usize,
    n_max: usize,
    inv_bin: f64,
}

impl RestrictedSweep<'_> {
    fn descend(
        &self,
        prev: Sym,
        m: &Mobius,
        h: &mut ImageStack,
        level: usize,
        hist: &mut FlatHist,
        nodes: &mut u64,
    ) {
        if level == self.n_max {
            return;
        }
        let forbidden = self.group.pair(prev);
        for s in 0..self.group.len() as Sym {
            if s == forbidden {
                continue;
            }
            let undo = h.push_image(self.images[s as usize]);
            let dist = h.distance_to(self.target);
            if dist > self.lambda * (self.n_max - level - 1) {
                h.pop_image(undo);
                continue;
            }
            let m2 = m.compose_fast(self.group.generator(s));
            *nodes += 1;
            if dist == 0 {
                hist.bump(level + 1, m2.origin_distance(), self.inv_bin);
            }
            self.descend(s, &m2, h, level + 1, hist, nodes);
            h.pop_image(undo);
        }
    }
}

/// Per-level orbital histograms of the restricted series over the fiber
/// χ^{-1}(g) of the coding projection.
pub fn restricted_spectra(
    group: &SchottkyGroup,
    chi: &Projection,
    target: &GroupElement,
    n_max: usize,
    opts: &OrbitOptions,
) -> Result<LevelSpectra> {
    let images: Vec<&[Letter]> = (0..group.len()).map(|a| chi.image(a as Sym).letters()).collect();
    let per_level = per_level_bins(group, n_max, opts.bin_width);
    let inv_bin = 1.0 / opts.bin_width;
    let sweep = RestrictedSweep {
        group,
        images: images.clone(),
        target: target.letters(),
        lambda: chi.lambda1(),
        n_max,
        inv_bin,
    };

    let mut hist = FlatHist::new(n_max + 1, per_level);
    if target.is_identity() {
        hist.bump(0, 0.0, inv_bin);
    }
    let mut tasks: Vec<(Sym, Mobius, Vec<Letter>)> = Vec::new();
    for f in 0..group.len() as Sym {
        let m1 = *group.generator(f);
        let mut h1 = ImageStack { letters: Vec::new() };
        h1.push_image(images[f as usize]);
        if h1.distance_to(target.letters()) > chi.lambda1() * n_max.saturating_sub(1) {
            continue;
        }
        if h1.distance_to(target.letters()) == 0 {
            hist.bump(1, m1.origin_distance(), inv_bin);
        }
        if n_max < 2 {
            continue;
        }
        for s in 0..group.len() as Sym {
            if s == group.pair(f) {
                continue;
            }
            let m2 = m1.compose(group.generator(s));
            let mut h2 = ImageStack {
                letters: h1.letters.clone(),
            };
            h2.push_image(images[s as usize]);
            if h2.distance_to(target.letters()) > chi.lambda1() * n_max.saturating_sub(2) {
                continue;
            }
            if h2.distance_to(target.letters()) == 0 {
                hist.bump(2, m2.origin_distance(), inv_bin);
            }
            tasks.push((s, m2, h2.letters));
        }
    }
    let results: Vec<(FlatHist, u64)> = tasks
        .par_iter()
        .map(|(prev, m, letters)| {
            let mut h = ImageStack {
                letters: letters.clone(),
            };
            let mut local = FlatHist::new(n_max + 1, per_level);
            let mut nodes = 0u64;
            sweep.descend(*prev, m, &mut h, 2, &mut local, &mut nodes);
            (local, nodes)
        })
        .collect();
    let mut total_nodes = 0u64;
    for (local, nodes) in results {
        hist.merge_scaled(&local, 1);
        total_nodes += nodes;
        if total_nodes > opts.node_cap {
            return Err(Error::Inconclusive(format!(
                "restricted sweep exceeded the node cap {}",
                opts.node_cap
            )));
        }
    }
    Ok(hist.to_spectra(n_max + 1, opts.bin_width, 1))
}

struct BandSweep<'a> {
    group: &'a SchottkyGroup,
    images: Vec<&'a [Letter]>,
    x: &'a BoundaryPoint,
    r: usize,
    lambda: usize,
    n_max: usize,
    inv_bin: f64,
}

impl BandSweep<'_> {
    fn deviation(&self, h: &ImageStack) -> usize {
        let matched = h
            .letters
            .iter()
            .enumerate()
            .take_while(|(j, &l)| self.x.letter(*j) == l)
            .count();
        h.letters.len() - matched
    }

    fn descend(
        &self,
        prev: Sym,
        m: &Mobius,
        h: &mut ImageStack,
        level: usize,
        hist: &mut FlatHist,
        nodes: &mut u64,
    ) {
        if level == self.n_max {
            return;
        }
        let forbidden = self.group.pair(prev);
        for s in 0..self.group.len() as Sym {
            if s == forbidden {
                continue;
            }
            let undo = h.push_image(self.images[s as usize]);
            let dev = self.deviation(h);
            // the deviation drops by at most λ1 per appended symbol
            if dev > self.r + self.lambda * (self.n_max - level - 1) {
                h.pop_image(undo);
                continue;
            }
            let m2 = m.compose_fast(self.group.generator(s));
            *nodes += 1;
            if dev <= self.r {
                hist.bump(level + 1, m2.origin_distance(), self.inv_bin);
            }
            self.descend(s, &m2, h, level + 1, hist, nodes);
            h.pop_image(undo);
        }
    }
}

/// Per-level orbital histograms of the covering band 𝒮(x, r) over the
/// coding shift.
pub fn band_spectra(
    group: &SchottkyGroup,
    chi: &Projection,
    x: &BoundaryPoint,
    r: usize,
    n_max: usize,
    opts: &OrbitOptions,
) -> Result<LevelSpectra> {
    let images: Vec<&[Letter]> = (0..group.len()).map(|a| chi.image(a as Sym).letters()).collect();
    let per_level = per_level_bins(group, n_max, opts.bin_width);
    let inv_bin = 1.0 / opts.bin_width;
    let sweep = BandSweep {
        group,
        images: images.clone(),
        x,
        r,
        lambda: chi.lambda1(),
        n_max,
        inv_bin,
    };
    let mut hist = FlatHist::new(n_max + 1, per_level);
    hist.bump(0, 0.0, inv_bin); // ε deviates by zero
    let mut tasks: Vec<(Sym, Mobius, Vec<Letter>)> = Vec::new();
    for f in 0..group.len() as Sym {
        let m1 = *group.generator(f);
        let mut h1 = ImageStack { letters: Vec::new() };
        h1.push_image(images[f as usize]);
        let dev = sweep.deviation(&h1);
        if dev > r + chi.lambda1() * n_max.saturating_sub(1) {
            continue;
        }
        if dev <= r {
            hist.bump(1, m1.origin_distance(), inv_bin);
        }
        if n_max < 2 {
            continue;
        }
        for s in 0..group.len() as Sym {
            if s == group.pair(f) {
                continue;
            }
            let m2 = m1.compose(group.generator(s));
            let mut h2 = ImageStack {
                letters: h1.letters.clone(),
            };
            h2.push_image(images[s as usize]);
            let dev2 = sweep.deviation(&h2);
            if dev2 > r + chi.lambda1() * n_max.saturating_sub(2) {
                continue;
            }
            if dev2 <= r {
                hist.bump(2, m2.origin_distance(), inv_bin);
            }
            tasks.push((s, m2, h2.letters));
        }
    }
    let results: Vec<FlatHist> = tasks
        .par_iter()
        .map(|(prev, m, letters)| {
            let mut h = ImageStack {
                letters: letters.clone(),
            };
            let mut local = FlatHist::new(n_max + 1, per_level);
            let mut nodes = 0u64;
            sweep.descend(*prev, m, &mut h, 2, &mut local, &mut nodes);
            local
        })
        .collect();
    for local in results {
        hist.merge_scaled(&local, 1);
    }
    Ok(hist.to_spectra(n_max + 1, opts.bin_width, 1))
}
