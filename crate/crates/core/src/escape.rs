//! Executable forms of the two dimension-bracket arguments: the escape
//! measure with its mass-distribution bound (lower bound for the uniformly
//! escaping set) and the coset-band covering sums (upper bound for the
//! accumulation set).
//!
//! The measure construction follows the proof shape exactly: pairwise
//! prefix-incomparable fiber words τ^{(sj)} for the generators, a prefix-free
//! transitive kernel set 𝓘, a kernel word set 𝒲 grown until
//! log Σ_{τ∈𝒲} exp(-p S_τ) > p ‖u‖_∞ (max|τ^{(sj)}| + 2 max_{ρ∈𝓘}|ρ|) + 3 p V_u,
//! and block sets 𝒜(e_j^s, a) = {τ^{(sj)} ρ τ ρ' admissible, seam into a}.
//! The measure then assigns cylinder masses by per-level normalization, and
//! the mass-ratio profile max μ([·])/exp(-p S_· u) is nonincreasing in depth.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::extension::{Projection, TransitivityCertificate};
use crate::freegroup::{BoundaryPoint, GroupElement, Letter};
use crate::poincare::dp;
use crate::poincare::{EngineOptions, LevelSpectra};
use crate::symbolic::{SftSystem, Sym, Word};

/// Birkhoff-weight functional used by the construction: exact cylinder sups
/// for locally constant potentials, or the orbital surrogate d_h(0, ω·0) in
/// the geometric application.
pub trait BirkhoffWeight {
    /// S_ω (admissibility of `word` is the caller's obligation).
    fn weight(&self, word: &[Sym]) -> f64;
    /// Per-symbol upper bound (‖u‖_∞ or the maximal orbital step).
    fn sup_step(&self) -> f64;
    /// Distortion allowance V_u; zero when the functional is exactly
    /// subadditive, as the orbital surrogate is.
    fn distortion(&self) -> f64;
}

impl BirkhoffWeight for SftSystem {
    fn weight(&self, word: &[Sym]) -> f64 {
        self.birkhoff_sup_raw(word)
    }

    fn sup_step(&self) -> f64 {
        self.potential().sup()
    }

    fn distortion(&self) -> f64 {
        self.distortion_constant()
    }
}

/// Caps for the construction searches.
#[derive(Clone, Debug)]
pub struct EscapeOptions {
    /// Longest generator-fiber word τ^{(sj)} to try.
    pub tau_len_cap: usize,
    /// Longest kernel word admitted into 𝒲.
    pub kernel_len_cap: usize,
    /// Largest |𝒲| before giving up on the threshold.
    pub kernel_count_cap: usize,
    /// Largest materialized block set per (generator letter, symbol).
    pub block_cap: usize,
    /// Use this prefix-free transitive kernel set instead of deriving one.
    pub transitive_override: Option<Vec<Word>>,
}

impl Default for EscapeOptions {
    fn default() -> Self {
        EscapeOptions {
            tau_len_cap: 12,
            kernel_len_cap: 24,
            kernel_count_cap: 2_000_000,
            block_cap: 1_000_000,
            transitive_override: None,
        }
    }
}

/// The materialized measure construction for one boundary point and
/// exponent.
#[derive(Clone, Debug)]
pub struct EscapeConstruction {
    pub x: BoundaryPoint,
    pub p: f64,
    /// τ^{(sj)} indexed by letter code (generator index, sign).
    pub tau: Vec<(Letter, Word)>,
    /// 𝓘: prefix-free transitive kernel set.
    pub transitive_set: Vec<Word>,
    /// 𝒲, in the order grown.
    pub kernel_words: Vec<Word>,
    /// log Σ_{τ∈𝒲} exp(-p S_τ).
    pub threshold_lhs: f64,
    pub threshold_rhs: f64,
    /// lhs - rhs; strictly positive on success.
    pub margin: f64,
    /// 𝒜(e_j^s, a) per (letter, next symbol).
    blocks: HashMap<(Letter, Sym), Vec<Word>>,
    max_block_len: usize,
}

impl EscapeConstruction {
    pub fn blocks(&self, letter: Letter, next: Sym) -> &[Word] {
        self.blocks.get(&(letter, next)).map_or(&[], Vec::as_slice)
    }

    pub fn max_block_len(&self) -> usize {
        self.max_block_len
    }

    /// The letter x_k of the target ray.
    pub fn ray_letter(&self, k: usize) -> Letter {
        self.x.letter(k)
    }

    /// a_k: the shared first symbol of the step-k blocks, which is the first
    /// symbol of τ^{(x_k)}.
    pub fn block_first_symbol(&self, k: usize) -> Sym {
        let letter = self.ray_letter(k);
        let tau = &self
            .tau
            .iter()
            .find(|(l, _)| *l == letter)
            .expect("letter covered")
            .1;
        tau.symbols()[0]
    }
}

/// Streams the prefix-minimal nonempty kernel words in (length, lex) order
/// to `f` until it returns `false`.
///
/// Growing 𝒲 greedily by (length, lex) while skipping words that extend an
/// already-chosen one selects exactly the kernel words with no proper
/// nonempty kernel prefix, and those are the branches whose group state
/// never revisits the identity — so the skip becomes a subtree prune.
fn stream_minimal_kernel_words(
    system: &SftSystem,
    chi: &Projection,
    max_len: usize,
    f: &mut dyn FnMut(&[Sym]) -> bool,
) {
    let lambda = chi.lambda1();
    let one = GroupElement::identity();
    for len in 1..=max_len {
        let mut buf = Vec::with_capacity(len);
        if !first_return_dfs(system, chi, &one, len, lambda, &mut buf, &GroupElement::identity(), f) {
            return;
        }
    }
}

fn first_return_dfs(
    system: &SftSystem,
    chi: &Projection,
    target: &GroupElement,
    len: usize,
    lambda: usize,
    buf: &mut Vec<Sym>,
    h: &GroupElement,
    f: &mut dyn FnMut(&[Sym]) -> bool,
) -> bool {
    if buf.len() == len {
        return if h == target { f(buf) } else { true };
    }
    let budget = len - buf.len() - 1;
    let candidates: Vec<Sym> = match buf.last() {
        Some(&prev) => system.successors(prev).to_vec(),
        None => (0..system.alphabet_len() as Sym).collect(),
    };
    for s in candidates {
        let h2 = h.multiply(chi.image(s));
        if h2.distance(target) > lambda * budget {
            continue;
        }
        // an intermediate identity means a proper kernel prefix
        if h2.is_identity() && buf.len() + 1 < len {
            continue;
        }
        buf.push(s);
        let go_on = first_return_dfs(system, chi, target, len, lambda, buf, &h2, f);
        buf.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// Lexicographic fixed-length fiber enumeration with reachability pruning;
/// returns false when the visitor stops the stream.
fn fiber_dfs(
    system: &SftSystem,
    chi: &Projection,
    target: &GroupElement,
    len: usize,
    lambda: usize,
    buf: &mut Vec<Sym>,
    h: &GroupElement,
    f: &mut dyn FnMut(&[Sym]) -> bool,
) -> bool {
    if buf.len() == len {
        return if h == target { f(buf) } else { true };
    }
    let budget = len - buf.len() - 1;
    let candidates: Vec<Sym> = match buf.last() {
        Some(&prev) => system.successors(prev).to_vec(),
        None => (0..system.alphabet_len() as Sym).collect(),
    };
    for s in candidates {
        let h2 = h.multiply(chi.image(s));
        if h2.distance(target) > lambda * budget {
            continue;
        }
        buf.push(s);
        let go_on = fiber_dfs(system, chi, target, len, lambda, buf, &h2, f);
        buf.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// First fiber word for `target` in (length, lex) order that is
/// prefix-incomparable with everything in `chosen`.
fn first_fiber_word_avoiding(
    system: &SftSystem,
    chi: &Projection,
    target: &GroupElement,
    max_len: usize,
    chosen: &[Word],
) -> Option<Word> {
    let lambda = chi.lambda1();
    for len in 1..=max_len {
        let mut found = None;
        let mut buf = Vec::with_capacity(len);
        let mut visit = |w: &[Sym]| -> bool {
            let ok = chosen.iter().all(|c| {
                let cs = c.symbols();
                let k = cs.len().min(w.len());
                cs[..k] != w[..k]
            });
            if ok {
                found = Some(system.word(w).expect("admissible"));
                false
            } else {
                true
            }
        };
        fiber_dfs(system, chi, target, len, lambda, &mut buf, &GroupElement::identity(), &mut visit);
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Is the empty word alone a transitive kernel set (every symbol pair
/// directly admissible)?
fn epsilon_transitive(system: &SftSystem) -> bool {
    let n = system.alphabet_len();
    (0..n).all(|a| (0..n).all(|b| system.admissible_pair(a as Sym, b as Sym)))
}

/// Builds the full measure construction: generator words, transitive set,
/// kernel set with the threshold inequality, and block sets. Fails with
/// `Inconclusive` when a cap is reached first (expected when p is at or
/// above the restricted critical exponent, where the kernel mass needed for
/// the threshold is unreachable).
pub fn build_escape_construction(
    system: &SftSystem,
    chi: &Projection,
    cert: &TransitivityCertificate,
    x: &BoundaryPoint,
    p: f64,
    weight: &dyn BirkhoffWeight,
    opts: &EscapeOptions,
) -> Result<EscapeConstruction> {
    if p <= 0.0 {
        return Err(Error::Config("escape construction needs p > 0".into()));
    }
    // τ^{(sj)}: one fiber word per generator letter, pairwise
    // prefix-incomparable so the cylinders are disjoint
    let mut tau: Vec<(Letter, Word)> = Vec::with_capacity(2 * chi.rank());
    let mut chosen: Vec<Word> = Vec::new();
    for i in 1..=chi.rank() as u16 {
        for inv in [false, true] {
            let letter: Letter = if inv { -(i as Letter) } else { i as Letter };
            let g = GroupElement::generator(i, inv);
            let w = first_fiber_word_avoiding(system, chi, &g, opts.tau_len_cap, &chosen)
                .ok_or_else(|| {
                    Error::Inconclusive(format!(
                        "no disjoint fiber word for `{g}` within length {}",
                        opts.tau_len_cap
                    ))
                })?;
            chosen.push(w.clone());
            tau.push((letter, w));
        }
    }
    let max_tau_len = tau.iter().map(|(_, w)| w.len()).max().unwrap_or(0);

    // 𝓘: the smallest valid prefix-free transitive kernel set we can
    // certify. {ε} qualifies exactly when every symbol pair is admissible;
    // otherwise fall back to the greedy pool construction.
    let transitive_set: Vec<Word> = match &opts.transitive_override {
        Some(set) => {
            validate_transitive_set(system, chi, set)?;
            set.clone()
        }
        None if epsilon_transitive(system) => vec![Word::empty()],
        None => crate::extension::build_disjoint_transitive_set(system, chi, cert, 16)?.words_vec(),
    };
    let max_i_len = transitive_set.iter().map(Word::len).max().unwrap_or(0);

    // 𝒲: prefix-free kernel words in (length, lex) order until the
    // threshold inequality becomes strict
    let rhs = p * weight.sup_step() * (max_tau_len as f64 + 2.0 * max_i_len as f64)
        + 3.0 * p * weight.distortion();
    let mut kernel_words: Vec<Word> = Vec::new();
    let mut mass = 0.0f64;
    let mut reached = false;
    stream_minimal_kernel_words(system, chi, opts.kernel_len_cap, &mut |w| {
        kernel_words.push(system.word(w).expect("admissible"));
        mass += (-p * weight.weight(w)).exp();
        if mass.ln() > rhs {
            reached = true;
            return false;
        }
        kernel_words.len() < opts.kernel_count_cap
    });
    if !reached {
        return Err(Error::Inconclusive(format!(
            "kernel mass log {:.4} did not exceed threshold {:.4} within {} words of length <= {} \
             (expected when p is not below the restricted exponent)",
            mass.ln(),
            rhs,
            kernel_words.len(),
            opts.kernel_len_cap
        )));
    }
    let threshold_lhs = mass.ln();

    // block sets 𝒜(e_j^s, a): τ^{(sj)} ρ τ ρ', admissible, with an
    // admissible seam into the next symbol a (the ρ'a ∈ Σ* condition stated
    // on the block's last symbol so that ρ' = ε is handled)
    let mut blocks: HashMap<(Letter, Sym), Vec<Word>> = HashMap::new();
    let mut max_block_len = 0usize;
    for (letter, tau_w) in &tau {
        for a in 0..system.alphabet_len() as Sym {
            let mut list = Vec::new();
            for rho in &transitive_set {
                for body in &kernel_words {
                    for rho2 in &transitive_set {
                        let mut seq = tau_w.symbols().to_vec();
                        seq.extend_from_slice(rho.symbols());
                        seq.extend_from_slice(body.symbols());
                        seq.extend_from_slice(rho2.symbols());
                        if !system.is_admissible(&seq) {
                            continue;
                        }
                        let last = *seq.last().expect("nonempty block");
                        if !system.admissible_pair(last, a) {
                            continue;
                        }
                        list.push(system.word(&seq).expect("checked admissible"));
                        if list.len() > opts.block_cap {
                            return Err(Error::Inconclusive(format!(
                                "block set for ({letter}, {a}) exceeds cap {}",
                                opts.block_cap
                            )));
                        }
                    }
                }
            }
            max_block_len = max_block_len.max(list.iter().map(Word::len).max().unwrap_or(0));
            blocks.insert((*letter, a), list);
        }
    }

    Ok(EscapeConstruction {
        x: x.clone(),
        p,
        tau,
        transitive_set,
        kernel_words,
        threshold_lhs,
        threshold_rhs: rhs,
        margin: threshold_lhs - rhs,
        blocks,
        max_block_len,
    })
}

fn validate_transitive_set(system: &SftSystem, chi: &Projection, set: &[Word]) -> Result<()> {
    for w in set {
        if !chi.project(w).is_identity() {
            return Err(Error::InvalidGroup(format!(
                "transitive-set word `{}` is not a kernel word",
                system.format_word(w)
            )));
        }
    }
    for (i, w) in set.iter().enumerate() {
        for (j, v) in set.iter().enumerate() {
            if i != j && w.is_prefix_of(v) {
                return Err(Error::InvalidGroup("transitive set is not prefix-free".into()));
            }
        }
    }
    let n = system.alphabet_len() as Sym;
    for a in 0..n {
        for b in 0..n {
            let ok = set.iter().any(|rho| {
                let mut seq = vec![a];
                seq.extend_from_slice(rho.symbols());
                seq.push(b);
                system.is_admissible(&seq)
            });
            if !ok {
                return Err(Error::InvalidGroup(format!(
                    "transitive set misses the pair ({}, {})",
                    system.symbol_name(a),
                    system.symbol_name(b)
                )));
            }
        }
    }
    Ok(())
}

/// Aggregates for one tree depth.
#[derive(Clone, Debug)]
pub struct DepthStats {
    pub nodes: u64,
    pub total_mass: f64,
    /// M_k = max over depth-k nodes of μ(node) / exp(-p S_node).
    pub max_mass_ratio: f64,
    pub min_local_dim: f64,
    pub median_local_dim: f64,
    /// max over parents at this depth of |Σ children - parent| / parent.
    pub max_child_gap: f64,
}

/// A stored node (shallow depths only).
#[derive(Clone, Debug)]
pub struct NodeRecord {
    pub word: Word,
    pub mass: f64,
    pub weight: f64,
}

/// The escape measure explored to a fixed depth: per-depth aggregates plus
/// stored nodes for the shallow depths.
#[derive(Clone, Debug)]
pub struct MeasureTree {
    pub p: f64,
    pub depth: usize,
    pub store_depth: usize,
    pub depths: Vec<DepthStats>,
    pub stored: Vec<Vec<NodeRecord>>,
}

impl MeasureTree {
    /// M_k per depth.
    pub fn mass_ratio_profile(&self) -> Vec<f64> {
        self.depths.iter().map(|d| d.max_mass_ratio).collect()
    }

    /// min local dimension per depth.
    pub fn min_local_dims(&self) -> Vec<f64> {
        self.depths.iter().map(|d| d.min_local_dim).collect()
    }
}

struct DepthAcc {
    nodes: u64,
    total_mass: f64,
    max_mass_ratio: f64,
    min_local_dim: f64,
    dim_hist: Vec<u64>,
    max_child_gap: f64,
}

const DIM_HIST_SCALE: f64 = 1e-3;
const DIM_HIST_BINS: usize = 4000;

impl DepthAcc {
    fn new() -> Self {
        DepthAcc {
            nodes: 0,
            total_mass: 0.0,
            max_mass_ratio: 0.0,
            min_local_dim: f64::INFINITY,
            dim_hist: vec![0; DIM_HIST_BINS],
            max_child_gap: 0.0,
        }
    }

    fn record(&mut self, mass: f64, weight: f64, p: f64) {
        self.nodes += 1;
        self.total_mass += mass;
        let ratio = mass / (-p * weight).exp();
        if ratio > self.max_mass_ratio {
            self.max_mass_ratio = ratio;
        }
        let dim = -mass.ln() / weight;
        if dim < self.min_local_dim {
            self.min_local_dim = dim;
        }
        let bin = ((dim / DIM_HIST_SCALE) as usize).min(DIM_HIST_BINS - 1);
        self.dim_hist[bin] += 1;
    }

    fn finish(self) -> DepthStats {
        let half = self.nodes.div_ceil(2).max(1);
        let mut seen = 0u64;
        let mut median = 0.0;
        for (i, &c) in self.dim_hist.iter().enumerate() {
            seen += c;
            if seen >= half {
                median = (i as f64 + 0.5) * DIM_HIST_SCALE;
                break;
            }
        }
        DepthStats {
            nodes: self.nodes,
            total_mass: self.total_mass,
            max_mass_ratio: self.max_mass_ratio,
            min_local_dim: self.min_local_dim,
            median_local_dim: median,
            max_child_gap: self.max_child_gap,
        }
    }
}

struct TreeWalk<'a> {
    system: &'a SftSystem,
    weight: &'a dyn BirkhoffWeight,
    p: f64,
    block_lists: Vec<&'a [Word]>,
    accs: Vec<DepthAcc>,
    stored: Vec<Vec<NodeRecord>>,
    levels: usize,
}

impl TreeWalk<'_> {
    fn visit(&mut self, k: usize, path: &mut Vec<Sym>, mass: f64, s_node: f64) {
        self.accs[k].record(mass, s_node, self.p);
        if k < self.stored.len() {
            self.stored[k].push(NodeRecord {
                word: self.system.word(path).expect("admissible path"),
                mass,
                weight: s_node,
            });
        }
        if k + 1 == self.levels {
            return;
        }
        let blocks = self.block_lists[k + 1];
        let base = path.len();
        let mut child_data = Vec::with_capacity(blocks.len());
        for b in blocks {
            path.extend_from_slice(b.symbols());
            let s = self.weight.weight(path);
            child_data.push((s, (-self.p * s).exp()));
            path.truncate(base);
        }
        let z: f64 = child_data.iter().map(|&(_, w)| w).sum();
        let mut child_sum = 0.0;
        for (b, &(s_child, w)) in blocks.iter().zip(&child_data) {
            let child_mass = mass * w / z;
            child_sum += child_mass;
            path.extend_from_slice(b.symbols());
            self.visit(k + 1, path, child_mass, s_child);
            path.truncate(base);
        }
        let gap = (child_sum - mass).abs() / mass;
        if gap > self.accs[k].max_child_gap {
            self.accs[k].max_child_gap = gap;
        }
    }
}

/// Walks the measure to `depth` block levels, assigning cylinder masses by
/// the inductive normalized-weight formula; children of every node sum back
/// to the node mass up to floating error, recorded per depth.
pub fn build_measure_tree(
    system: &SftSystem,
    construction: &EscapeConstruction,
    weight: &dyn BirkhoffWeight,
    depth: usize,
    store_depth: usize,
) -> Result<MeasureTree> {
    if depth == 0 {
        return Err(Error::Config("measure tree depth must be >= 1".into()));
    }
    let levels = depth + 1; // block levels 0..=depth
    let block_lists: Vec<&[Word]> = (0..levels)
        .map(|k| {
            let letter = construction.ray_letter(k);
            let a_next = construction.block_first_symbol(k + 1);
            construction.blocks(letter, a_next)
        })
        .collect();
    for (k, list) in block_lists.iter().enumerate() {
        if list.is_empty() {
            return Err(Error::Inconclusive(format!("empty block set at tree level {k}")));
        }
    }

    let mut walk = TreeWalk {
        system,
        weight,
        p: construction.p,
        block_lists,
        accs: (0..levels).map(|_| DepthAcc::new()).collect(),
        stored: (0..levels.min(store_depth + 1)).map(|_| Vec::new()).collect(),
        levels,
    };

    // level 0: masses proportional to exp(-p S) over the level-0 blocks
    let first = walk.block_lists[0];
    let weights: Vec<f64> = first
        .iter()
        .map(|b| (-construction.p * weight.weight(b.symbols())).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let pairs: Vec<(&Word, f64)> = first.iter().zip(weights.iter().copied()).collect();
    for (b, w) in pairs {
        let mut path = b.symbols().to_vec();
        let s = weight.weight(&path);
        walk.visit(0, &mut path, w / z, s);
    }

    Ok(MeasureTree {
        p: construction.p,
        depth,
        store_depth,
        depths: walk.accs.into_iter().map(DepthAcc::finish).collect(),
        stored: walk.stored,
    })
}

/// M_k per depth; the proof's chain makes this nonincreasing in k.
pub fn mass_ratio_profile(tree: &MeasureTree) -> Vec<f64> {
    tree.mass_ratio_profile()
}

/// Per-depth (min, median) of the local dimensions log μ / (-S); the
/// mass-distribution bound predicts min >= p - o(1).
pub fn local_dimension_estimates(tree: &MeasureTree) -> Vec<(f64, f64)> {
    tree.depths
        .iter()
        .map(|d| (d.min_local_dim, d.median_local_dim))
        .collect()
}

/// Level sums of the covering family 𝒮(x, r) = {ω : |χ(ω)| - |χ(ω) ∧ x| <= r}.
#[derive(Clone, Debug)]
pub struct CoveringProfile {
    pub r: usize,
    pub p: f64,
    pub level_sums: Vec<f64>,
    spectra: LevelSpectra,
}

impl CoveringProfile {
    /// Least-squares slope of log c_m over the window (decay evidence when
    /// negative).
    pub fn log_slope(&self, window: (usize, usize)) -> Result<f64> {
        let pts: Vec<usize> = (window.0..=window.1)
            .filter(|&m| m < self.level_sums.len() && self.level_sums[m] > 0.0)
            .collect();
        if pts.len() < 2 {
            return Err(Error::NoData("covering slope needs two positive levels".into()));
        }
        let xs: Vec<f64> = pts.iter().map(|&m| m as f64).collect();
        let ys: Vec<f64> = pts.iter().map(|&m| self.level_sums[m].ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let mut num = 0.0;
        let mut den = 0.0;
        for (x, y) in xs.iter().zip(&ys) {
            num += (x - mx) * (y - my);
            den += (x - mx) * (x - mx);
        }
        Ok(num / den)
    }

    /// The same covering evaluated at another exponent.
    pub fn at_exponent(&self, p: f64) -> CoveringProfile {
        CoveringProfile {
            r: self.r,
            p,
            level_sums: self.spectra.level_sums(p),
            spectra: self.spectra.clone(),
        }
    }
}

/// Covering level sums c_m by the band-pruned DP.
pub fn covering_sum(
    system: &SftSystem,
    chi: &Projection,
    x: &BoundaryPoint,
    r: usize,
    p: f64,
    n: usize,
    opts: &EngineOptions,
) -> Result<CoveringProfile> {
    let spectra = dp::band_spectra(system, chi, x, r, n, opts)?;
    Ok(CoveringProfile {
        r,
        p,
        level_sums: spectra.level_sums(p),
        spectra,
    })
}

/// The finite-horizon membership diagnostic: per prefix length m, the word
/// norm |χ(ω_0..ω_{m-1})|, the matched length |χ(..) ∧ x|, and their
/// difference (the deviation from the ray).
#[derive(Clone, Debug)]
pub struct TrajectoryProfile {
    pub norms: Vec<usize>,
    pub matches: Vec<usize>,
    pub deviations: Vec<usize>,
}

pub fn classify_trajectory(chi: &Projection, word: &Word, x: &BoundaryPoint) -> TrajectoryProfile {
    let mut norms = Vec::with_capacity(word.len() + 1);
    let mut matches = Vec::with_capacity(word.len() + 1);
    let mut deviations = Vec::with_capacity(word.len() + 1);
    let mut h = GroupElement::identity();
    for m in 0..=word.len() {
        if m > 0 {
            h = h.multiply(chi.image(word.symbols()[m - 1]));
        }
        let matched = x.common_prefix_len(&h);
        norms.push(h.len());
        matches.push(matched);
        deviations.push(h.len() - matched);
    }
    TrajectoryProfile {
        norms,
        matches,
        deviations,
    }
}

/// Exact band check for the tree support: every prefix of every stored path
/// deviates from the ray by at most max-block-length · λ_1 beyond the seam
/// slack — the executable content of "the support escapes uniformly".
pub fn support_band_check(
    chi: &Projection,
    construction: &EscapeConstruction,
    tree: &MeasureTree,
) -> (usize, usize) {
    let bound = 2 * construction.max_block_len() * chi.lambda1() + chi.lambda1();
    let mut max_dev = 0usize;
    for level in &tree.stored {
        for node in level {
            let profile = classify_trajectory(chi, &node.word, &construction.x);
            for d in profile.deviations {
                max_dev = max_dev.max(d);
            }
        }
    }
    (max_dev, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{verify_kernel_transitivity, TransitivityOutcome};
    use crate::symbolic::PotentialSpec;

    fn f2_setup() -> (SftSystem, Projection, TransitivityCertificate) {
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
        let cert = match verify_kernel_transitivity(&system, &chi, 4) {
            TransitivityOutcome::Certified(c) => c,
            _ => unreachable!(),
        };
        (system, chi, cert)
    }

    fn x_ray() -> BoundaryPoint {
        BoundaryPoint::parse("", "e1 e2").unwrap()
    }

    #[test]
    fn construction_succeeds_at_low_exponent() {
        let (sys, chi, cert) = f2_setup();
        let c =
            build_escape_construction(&sys, &chi, &cert, &x_ray(), 0.6, &sys, &EscapeOptions::default())
                .unwrap();
        assert!(c.margin > 0.0, "margin {}", c.margin);
        // ε is a valid transitive set on a full shift
        assert_eq!(c.transitive_set.len(), 1);
        assert!(c.transitive_set[0].is_empty());
        // every block projects to the prescribed generator letter
        for (letter, _) in &c.tau {
            for a in 0..4u8 {
                for b in c.blocks(*letter, a) {
                    assert_eq!(chi.project(b).letters(), &[*letter]);
                }
            }
        }
        // blocks for one step share the first symbol
        for k in 0..4 {
            let letter = c.ray_letter(k);
            let a = c.block_first_symbol(k + 1);
            let first = c.blocks(letter, a)[0].symbols()[0];
            assert!(c.blocks(letter, a).iter().all(|w| w.symbols()[0] == first));
        }
    }

    #[test]
    fn construction_inconclusive_far_above_exponent() {
        let (sys, chi, cert) = f2_setup();
        let opts = EscapeOptions {
            kernel_len_cap: 16,
            kernel_count_cap: 200_000,
            ..EscapeOptions::default()
        };
        let err =
            build_escape_construction(&sys, &chi, &cert, &x_ray(), 3.0, &sys, &opts).unwrap_err();
        assert!(err.is_inconclusive(), "{err}");
    }

    #[test]
    fn measure_tree_consistency() {
        let (sys, chi, cert) = f2_setup();
        let c =
            build_escape_construction(&sys, &chi, &cert, &x_ray(), 0.6, &sys, &EscapeOptions::default())
                .unwrap();
        let tree = build_measure_tree(&sys, &c, &sys, 5, 2).unwrap();
        for d in &tree.depths {
            assert!((d.total_mass - 1.0).abs() <= 1e-10, "mass {}", d.total_mass);
            assert!(d.max_child_gap <= 1e-12);
        }
        let ratios = mass_ratio_profile(&tree);
        for w in ratios.windows(2) {
            assert!(w[1] <= w[0] + 1e-10, "mass ratio increased: {w:?}");
        }
        let dims = local_dimension_estimates(&tree);
        assert!(dims[5].0 >= 0.55, "min local dim {}", dims[5].0);
        assert!(dims[5].0 >= dims[2].0 - 0.05);
        // depth-0 masses proportional to exp(-p S)
        let level0 = &tree.stored[0];
        let z: f64 = level0.iter().map(|n| (-0.6 * n.weight).exp()).sum();
        for n in level0 {
            assert!((n.mass - (-0.6 * n.weight).exp() / z).abs() < 1e-12);
        }
        // support stays in the uniform band
        let (max_dev, bound) = support_band_check(&chi, &c, &tree);
        assert!(max_dev <= bound, "{max_dev} > {bound}");
    }

    #[test]
    fn covering_profiles_bracket_the_exponent() {
        let (sys, chi, _) = f2_setup();
        let x = x_ray();
        let opts = EngineOptions::default();
        let cover = covering_sum(&sys, &chi, &x, 1, 1.5, 16, &opts).unwrap();
        assert!(cover.log_slope((8, 16)).unwrap() < 0.0);
        let grow = cover.at_exponent(0.8);
        assert!(grow.log_slope((8, 16)).unwrap() > 0.0);
        // r = 0 at m = 0: ε is in the band
        let r0 = covering_sum(&sys, &chi, &x, 0, 1.0, 4, &opts).unwrap();
        assert_eq!(r0.level_sums[0], 1.0);
    }

    #[test]
    fn covering_r0_matches_prefix_fibers() {
        // with r = 0 the band is exactly the prefixes of x: c_m equals the
        // sum over prefixes g of the fiber level sums at m
        let (sys, chi, _) = f2_setup();
        let x = x_ray();
        let opts = EngineOptions::default();
        let p = 1.1;
        let c = covering_sum(&sys, &chi, &x, 0, p, 8, &opts).unwrap();
        for m in 0..=8usize {
            let mut expect = 0.0;
            for l in 0..=m {
                let g = x.prefix(l);
                let prof = crate::poincare::truncated_series(&sys, &chi, &g, p, 8, &opts).unwrap();
                expect += prof.level_sums[m];
            }
            let got = c.level_sums[m];
            assert!(
                (got - expect).abs() <= 1e-12 * expect.max(1.0),
                "m={m}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn trajectory_profiles() {
        let (sys, chi, _) = f2_setup();
        let x = x_ray();
        let w = sys.parse_word("ababab").unwrap();
        let t = classify_trajectory(&chi, &w, &x);
        assert!(t.deviations.iter().all(|&d| d == 0));
        assert_eq!(t.norms, vec![0, 1, 2, 3, 4, 5, 6]);

        let w = sys.parse_word("aAaAaA").unwrap();
        let t = classify_trajectory(&chi, &w, &x);
        assert_eq!(t.norms, vec![0, 1, 0, 1, 0, 1, 0]);
    }
}
