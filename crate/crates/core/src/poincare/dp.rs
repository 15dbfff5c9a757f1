//! The pruned dynamic program over (potential context, reduced group
//! element) states.
//!
//! A state at level m holds everything the future of a word needs: the last
//! min(m, k-1) symbols (to finish evaluating windows of the depth-k
//! potential) and the reduced image h = χ(ω). Appending a symbol completes
//! exactly one potential window once m >= k-1, so weights accumulate
//! exactly; the supremum over the cylinder is restored at read-out time by
//! adding the precomputed tail maximum of the context.
//!
//! Pruning is lossless. In fiber mode a state is dropped when
//! |h^{-1} g| > λ_1(χ) · (n - m): it cannot reach the target fiber within
//! the remaining budget. In band mode the deviation |h| - |h ∧ x| can drop
//! by at most λ_1 per step, so states beyond r + λ_1 (n - m) are dropped.
//!
//! All hash maps use a fixed-key hasher so that iteration order, and hence
//! floating-point accumulation order, is reproducible run to run.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use super::spectrum::{LevelSpectra, Spectrum};
use crate::error::{Error, Result};
use crate::extension::Projection;
use crate::freegroup::{BoundaryPoint, GroupElement};
use crate::symbolic::{SftSystem, Sym};

/// FNV-1a with a fixed key: deterministic across processes, unlike the
/// standard library's randomly seeded hasher.
#[derive(Default)]
pub struct FixedHasher(u64);

impl Hasher for FixedHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        let mut h = if self.0 == 0 { 0xcbf2_9ce4_8422_2325 } else { self.0 };
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        self.0 = h;
    }
}

pub type FixedState = BuildHasherDefault<FixedHasher>;
pub type FixedMap<K, V> = HashMap<K, V, FixedState>;

const MAX_PACKED_LETTERS: usize = 24;
const MAX_PACKED_RANK: usize = 15;
const MAX_PACKED_CTX: usize = 7;

/// Packs a reduced word of up to 24 letters over a rank <= 15 group into a
/// u128 state key (5 bits per letter, length in the top byte).
fn pack_group(g: &GroupElement) -> Result<u128> {
    let letters = g.letters();
    if letters.len() > MAX_PACKED_LETTERS {
        return Err(Error::InvalidGroup(format!(
            "group state of length {} exceeds the packed-key capacity {MAX_PACKED_LETTERS}",
            letters.len()
        )));
    }
    let mut key: u128 = (letters.len() as u128) << 120;
    for (i, &l) in letters.iter().enumerate() {
        let idx = (l.unsigned_abs() as u128 - 1) * 2 + u128::from(l < 0);
        key |= (idx + 1) << (5 * i);
    }
    Ok(key)
}

fn pack_ctx(ctx: &[Sym]) -> u64 {
    debug_assert!(ctx.len() <= MAX_PACKED_CTX);
    let mut key = (ctx.len() as u64) << 56;
    for (i, &s) in ctx.iter().enumerate() {
        key |= (s as u64) << (8 * i);
    }
    key
}

/// Per-state payload carried through the levels.
pub trait Acc: Clone {
    /// Weight of the empty word.
    fn unit() -> Self;
    /// A completed potential window of value `w` was appended.
    fn window(&mut self, w: f64);
    /// Merge a sibling contribution into this state.
    fn absorb(&mut self, other: &Self);
    /// Read-out with the cylinder tail maximum applied.
    fn contribution(&self, tail: f64) -> Self;
    /// Total scalar mass (used for partial results in error reports).
    fn scalar(&self) -> f64;
    /// Bound internal size; called after merges.
    fn compact(&mut self, _cap: usize, _grid: f64) {}
}

/// Fixed-exponent weights Σ exp(-p S_fixed).
#[derive(Clone, Debug)]
pub struct WeightAcc {
    pub value: f64,
    p: f64,
}

impl WeightAcc {
    pub fn with_exponent(p: f64) -> impl Fn() -> WeightAcc {
        move || WeightAcc { value: 1.0, p }
    }
}

impl Acc for WeightAcc {
    fn unit() -> Self {
        WeightAcc { value: 1.0, p: 0.0 }
    }

    fn window(&mut self, w: f64) {
        self.value *= (-self.p * w).exp();
    }

    fn absorb(&mut self, other: &Self) {
        self.value += other.value;
    }

    fn contribution(&self, tail: f64) -> Self {
        WeightAcc {
            value: self.value * (-self.p * tail).exp(),
            p: self.p,
        }
    }

    fn scalar(&self) -> f64 {
        self.value
    }
}

/// Exact word counts.
#[derive(Clone, Debug, Default)]
pub struct CountAcc {
    pub count: u128,
}

impl Acc for CountAcc {
    fn unit() -> Self {
        CountAcc { count: 1 }
    }

    fn window(&mut self, _w: f64) {}

    fn absorb(&mut self, other: &Self) {
        self.count += other.count;
    }

    fn contribution(&self, _tail: f64) -> Self {
        self.clone()
    }

    fn scalar(&self) -> f64 {
        self.count as f64
    }
}

/// Full weight spectra (exponent-free).
#[derive(Clone, Debug, Default)]
pub struct SpectrumAcc {
    pub spectrum: Spectrum,
}

impl Acc for SpectrumAcc {
    fn unit() -> Self {
        SpectrumAcc {
            spectrum: Spectrum::singleton(0.0, 1.0),
        }
    }

    fn window(&mut self, w: f64) {
        self.spectrum.shift(w);
    }

    fn absorb(&mut self, other: &Self) {
        self.spectrum.absorb(&other.spectrum);
    }

    fn contribution(&self, tail: f64) -> Self {
        SpectrumAcc {
            spectrum: self.spectrum.shifted(tail),
        }
    }

    fn scalar(&self) -> f64 {
        self.spectrum.total_multiplicity()
    }

    fn compact(&mut self, cap: usize, grid: f64) {
        if self.spectrum.len() > cap {
            self.spectrum.coarsen(grid);
        }
    }
}

/// Which states survive and which states contribute to level sums.
pub enum Prune<'a> {
    /// Restricted series Z(p|g): contribute when h = g, prune when the
    /// target is out of reach.
    Fiber(&'a GroupElement),
    /// Coset band 𝒮(x, r): contribute when |h| - |h ∧ x| <= r, prune when
    /// the band cannot be re-entered.
    Band { x: &'a BoundaryPoint, r: usize },
}

/// Resource knobs for the level sweep.
#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Maximum live states per level.
    pub state_cap: usize,
    /// Spectrum entries per state before coarsening kicks in.
    pub spectrum_cap: usize,
    /// Coarsening grid (weight units).
    pub spectrum_grid: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            state_cap: 8_000_000,
            spectrum_cap: 1 << 16,
            spectrum_grid: 1e-9,
        }
    }
}

struct State<A> {
    h: GroupElement,
    ctx: Vec<Sym>,
    acc: A,
}

/// Runs the level sweep to horizon `n`, returning one merged read-out per
/// level (empty levels yield `None`).
pub fn run<A: Acc>(
    system: &SftSystem,
    chi: &Projection,
    prune: &Prune<'_>,
    n: usize,
    opts: &EngineOptions,
    make_unit: impl Fn() -> A,
) -> Result<Vec<Option<A>>> {
    if chi.rank() > MAX_PACKED_RANK {
        return Err(Error::InvalidGroup(format!(
            "rank {} exceeds packed-key capacity {MAX_PACKED_RANK}",
            chi.rank()
        )));
    }
    let k = system.potential().depth();
    if k > MAX_PACKED_CTX + 1 {
        return Err(Error::InvalidSystem(format!(
            "potential depth {k} exceeds the DP context capacity {}",
            MAX_PACKED_CTX + 1
        )));
    }
    let lambda = chi.lambda1();
    let ctx_keep = k.max(2) - 1; // last min(m, max(k-1, 1)) symbols

    let keep = |h: &GroupElement, m: usize| -> bool {
        let budget = lambda * (n - m);
        match prune {
            Prune::Fiber(g) => h.distance(g) <= budget,
            Prune::Band { x, r } => {
                let dev = h.len() - x.common_prefix_len(h);
                dev <= r + budget
            }
        }
    };
    let contributes = |h: &GroupElement| -> bool {
        match prune {
            Prune::Fiber(g) => h == *g,
            Prune::Band { x, r } => h.len() - x.common_prefix_len(h) <= *r,
        }
    };

    let mut tail_cache: FixedMap<u64, f64> = FixedMap::default();
    let mut tail_of = |ctx: &[Sym]| -> f64 {
        let key = pack_ctx(ctx);
        if let Some(&t) = tail_cache.get(&key) {
            return t;
        }
        let t = system.tail_sup(ctx);
        tail_cache.insert(key, t);
        t
    };

    let mut out: Vec<Option<A>> = Vec::with_capacity(n + 1);
    let mut states: FixedMap<(u64, u128), State<A>> = FixedMap::default();
    states.insert(
        (pack_ctx(&[]), pack_group(&GroupElement::identity())?),
        State {
            h: GroupElement::identity(),
            ctx: Vec::new(),
            acc: make_unit(),
        },
    );

    let mut partial: Vec<f64> = Vec::new();
    for m in 0..=n {
        // read out level m
        let mut level: Option<A> = None;
        for state in states.values() {
            if contributes(&state.h) {
                let c = state.acc.contribution(tail_of(&state.ctx));
                match &mut level {
                    Some(acc) => acc.absorb(&c),
                    None => level = Some(c),
                }
            }
        }
        partial.push(level.as_ref().map_or(0.0, A::scalar));
        out.push(level);
        if m == n {
            break;
        }

        // expand to level m + 1
        let mut next: FixedMap<(u64, u128), State<A>> = FixedMap::default();
        for state in states.values() {
            let candidates: &[Sym] = match state.ctx.last() {
                Some(&last) => system.successors(last),
                None => &[],
            };
            let free: Vec<Sym>;
            let candidates = if state.ctx.is_empty() {
                free = (0..system.alphabet_len() as Sym).collect();
                &free[..]
            } else {
                candidates
            };
            for &s in candidates {
                let h2 = state.h.multiply(chi.image(s));
                if !keep(&h2, m + 1) {
                    continue;
                }
                let mut acc = state.acc.clone();
                if m + 1 >= k {
                    // the window ending at the appended symbol is complete
                    let mut window: Vec<Sym> = Vec::with_capacity(k);
                    window.extend_from_slice(&state.ctx[state.ctx.len() + 1 - k..]);
                    window.push(s);
                    let w = system
                        .potential()
                        .value(&window)
                        .expect("window admissible by construction");
                    acc.window(w);
                }
                let mut ctx2 = state.ctx.clone();
                ctx2.push(s);
                if ctx2.len() > ctx_keep {
                    ctx2.remove(0);
                }
                let key = (pack_ctx(&ctx2), pack_group(&h2)?);
                match next.get_mut(&key) {
                    Some(existing) => {
                        existing.acc.absorb(&acc);
                        existing.acc.compact(opts.spectrum_cap, opts.spectrum_grid);
                    }
                    None => {
                        next.insert(key, State { h: h2, ctx: ctx2, acc });
                    }
                }
            }
            if next.len() > opts.state_cap {
                return Err(Error::ResourceExhausted {
                    level: m + 1,
                    states: next.len(),
                    cap: opts.state_cap,
                    partial,
                });
            }
        }
        states = next;
    }
    Ok(out)
}

/// Level spectra of the restricted series for target fiber `g`.
pub fn fiber_spectra(
    system: &SftSystem,
    chi: &Projection,
    g: &GroupElement,
    n: usize,
    opts: &EngineOptions,
) -> Result<LevelSpectra> {
    let levels = run::<SpectrumAcc>(system, chi, &Prune::Fiber(g), n, opts, SpectrumAcc::unit)?;
    Ok(LevelSpectra::new(
        levels
            .into_iter()
            .map(|l| l.map_or_else(Spectrum::default, |a| a.spectrum))
            .collect(),
    ))
}

/// Level spectra of the coset-band sums for 𝒮(x, r).
pub fn band_spectra(
    system: &SftSystem,
    chi: &Projection,
    x: &BoundaryPoint,
    r: usize,
    n: usize,
    opts: &EngineOptions,
) -> Result<LevelSpectra> {
    let levels = run::<SpectrumAcc>(system, chi, &Prune::Band { x, r }, n, opts, SpectrumAcc::unit)?;
    Ok(LevelSpectra::new(
        levels
            .into_iter()
            .map(|l| l.map_or_else(Spectrum::default, |a| a.spectrum))
            .collect(),
    ))
}

/// Exact per-level weights at a fixed exponent.
pub fn fiber_weights(
    system: &SftSystem,
    chi: &Projection,
    g: &GroupElement,
    p: f64,
    n: usize,
    opts: &EngineOptions,
) -> Result<Vec<f64>> {
    let levels = run::<WeightAcc>(system, chi, &Prune::Fiber(g), n, opts, WeightAcc::with_exponent(p))?;
    Ok(levels.into_iter().map(|l| l.map_or(0.0, |a| a.value)).collect())
}

/// Exact fiber word counts r_m = #{ω : |ω| = m, χ(ω) = g}.
pub fn fiber_counts(
    system: &SftSystem,
    chi: &Projection,
    g: &GroupElement,
    n: usize,
    opts: &EngineOptions,
) -> Result<Vec<u128>> {
    let levels = run::<CountAcc>(system, chi, &Prune::Fiber(g), n, opts, CountAcc::unit)?;
    Ok(levels.into_iter().map(|l| l.map_or(0, |a| a.count)).collect())
}
