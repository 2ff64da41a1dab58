//! Homology of surface-graph cycle codes over GF(2).
//!
//! For an incidence pair `(J, K)` the cycle code has `k = n - rank J - rank K`
//! logical qubits. Nontrivial cycles are vectors in `ker J` outside the row
//! space of `K`; `d_Z` is their minimum weight, and `d_X` is the same
//! quantity with `J` and `K` exchanged.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitmatrix::{get_bit, is_zero, words_for, xor_into, BitMatrix, EchelonBasis};
use crate::error::{Error, Result};
use crate::graph::{incidence_matrices, IncidencePair, SurfaceGraph};
use crate::math;

/// Rank over GF(2).
pub fn gf2_rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Rank of the code `m` shortened to `subset`: the dimension of the part of
/// the row space supported inside `subset`.
///
/// Computed by elimination with the complement's columns first, so it does
/// not go through the puncturing identity it is used to check.
pub fn shortened_rank(m: &BitMatrix, subset: &[usize]) -> usize {
    let inside = membership(m.cols(), subset);
    let mut order: Vec<usize> = (0..m.cols()).filter(|&c| !inside[c]).collect();
    let outside = order.len();
    order.extend((0..m.cols()).filter(|&c| inside[c]));
    let mut work = m.select_columns(&order);
    let pivots = work.reduce_in_place();
    pivots.iter().filter(|&&p| p >= outside).count()
}

fn membership(n: usize, subset: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; n];
    for &e in subset {
        inside[e] = true;
    }
    inside
}

fn complement(n: usize, subset: &[usize]) -> Vec<usize> {
    let inside = membership(n, subset);
    (0..n).filter(|&c| !inside[c]).collect()
}

fn check_pair(pair: &IncidencePair) -> Result<()> {
    let (j, k) = (&pair.j, &pair.k);
    if j.cols() != k.cols() {
        return Err(Error::IncompatibleMatrices {
            left: (j.rows(), j.cols()),
            right: (k.rows(), k.cols()),
        });
    }
    Ok(())
}

/// `k = n - rank J - rank K`.
pub fn homology_rank(pair: &IncidencePair) -> usize {
    let n = pair.num_edges();
    n - pair.j.rank() - pair.k.rank()
}

/// Rank of the first homology group restricted to the open edges `open`:
/// `|I| - rank K - rank J[I] + rank K[Ī]`.
pub fn restricted_rank(pair: &IncidencePair, open: &[usize]) -> usize {
    let n = pair.num_edges();
    let closed = complement(n, open);
    let total = open.len() + pair.k.select_columns(&closed).rank();
    total - pair.k.rank() - pair.j.select_columns(open).rank()
}

/// Same quantity via the shortened form `|I| - rank J[I] - rank K_I`.
pub fn restricted_rank_shortened(pair: &IncidencePair, open: &[usize]) -> usize {
    open.len() - pair.j.select_columns(open).rank() - shortened_rank(&pair.k, open)
}

/// `k'_I + k̃'_Ī == k`, with the dual pair's ranks on the closed edges.
pub fn duality_check(pair: &IncidencePair, dual_pair: &IncidencePair, open: &[usize]) -> bool {
    let n = pair.num_edges();
    let closed = complement(n, open);
    restricted_rank(pair, open) + restricted_rank(dual_pair, &closed) == homology_rank(pair)
}

/// Checks membership in `ker(checks)` and nontriviality modulo
/// `rowspace(stabilizers)` from per-column syndromes, so the cost of a test
/// scales with the weight of the candidate.
#[derive(Clone, Debug)]
pub(crate) struct LogicalTester {
    n: usize,
    check_words: usize,
    logical_words: usize,
    /// Column `c` of the check matrix, bit-packed.
    check_cols: Vec<u64>,
    /// Parities of column `c` against each logical co-representative.
    logical_cols: Vec<u64>,
    k: usize,
}

impl LogicalTester {
    /// `checks` plays the role of `J` and `stabilizers` of `K`.
    pub(crate) fn new(checks: &BitMatrix, stabilizers: &BitMatrix) -> Self {
        let n = checks.cols();
        // Co-representatives: vectors in ker(stabilizers) independent of
        // rowspace(checks). A cycle c in ker(checks) lies in
        // rowspace(stabilizers) iff it is orthogonal to all of them.
        let mut basis = EchelonBasis::new(n);
        for r in 0..checks.rows() {
            basis.insert(checks.row(r));
        }
        let kernel = stabilizers.kernel();
        let mut logicals: Vec<Vec<u64>> = Vec::new();
        for r in 0..kernel.rows() {
            if basis.insert(kernel.row(r)) {
                logicals.push(kernel.row(r).to_vec());
            }
        }
        let k = logicals.len();
        let check_t = checks.transpose();
        let check_words = words_for(checks.rows());
        let logical_words = words_for(k);
        let mut check_cols = vec![0u64; n * check_words];
        for c in 0..n {
            check_cols[c * check_words..(c + 1) * check_words].copy_from_slice(check_t.row(c));
        }
        let mut logical_cols = vec![0u64; n * logical_words];
        for (i, l) in logicals.iter().enumerate() {
            for c in 0..n {
                if get_bit(l, c) {
                    logical_cols[c * logical_words + i / 64] ^= 1 << (i % 64);
                }
            }
        }
        LogicalTester {
            n,
            check_words,
            logical_words,
            check_cols,
            logical_cols,
            k,
        }
    }

    pub(crate) fn k(&self) -> usize {
        self.k
    }

    fn check_col(&self, c: usize) -> &[u64] {
        &self.check_cols[c * self.check_words..(c + 1) * self.check_words]
    }

    fn logical_col(&self, c: usize) -> &[u64] {
        &self.logical_cols[c * self.logical_words..(c + 1) * self.logical_words]
    }

    /// Whether the vector with this support is a homologically nontrivial
    /// cycle (assumes it lies in the kernel of the checks).
    pub(crate) fn is_nontrivial(&self, support: &[usize], scratch: &mut Vec<u64>) -> bool {
        scratch.clear();
        scratch.resize(self.logical_words, 0);
        for &c in support {
            xor_into(scratch, self.logical_col(c));
        }
        !is_zero(scratch)
    }

    /// Minimum weight of a nontrivial cycle by enumeration in order of
    /// increasing weight. Returns `None` if more than `work_limit` subsets
    /// would have to be visited.
    pub(crate) fn brute_force_distance(&self, work_limit: u64) -> Option<usize> {
        if self.k == 0 {
            return None;
        }
        let mut work = 0u64;
        for w in 1..=self.n {
            let mut search = Search {
                tester: self,
                weight: w,
                work: &mut work,
                limit: work_limit,
                syndromes: vec![0; (w + 1) * self.check_words],
                logicals: vec![0; (w + 1) * self.logical_words],
                aborted: false,
            };
            let found = search.descend(0, 0);
            if search.aborted {
                return None;
            }
            if found {
                return Some(w);
            }
        }
        None
    }
}

struct Search<'a> {
    tester: &'a LogicalTester,
    weight: usize,
    work: &'a mut u64,
    limit: u64,
    syndromes: Vec<u64>,
    logicals: Vec<u64>,
    aborted: bool,
}

impl Search<'_> {
    /// Depth-first over increasing index tuples; level `depth` holds the
    /// running syndromes of the first `depth` chosen columns.
    fn descend(&mut self, depth: usize, start: usize) -> bool {
        let (cw, lw) = (self.tester.check_words, self.tester.logical_words);
        if depth == self.weight {
            let syn = &self.syndromes[depth * cw..(depth + 1) * cw];
            let log = &self.logicals[depth * lw..(depth + 1) * lw];
            return is_zero(syn) && !is_zero(log);
        }
        let remaining = self.weight - depth;
        for c in start..=self.tester.n - remaining {
            *self.work += 1;
            if *self.work > self.limit {
                self.aborted = true;
                return false;
            }
            let (lo, hi) = self.syndromes.split_at_mut((depth + 1) * cw);
            hi[..cw].copy_from_slice(&lo[depth * cw..]);
            xor_into(&mut hi[..cw], self.tester.check_col(c));
            let (lo, hi) = self.logicals.split_at_mut((depth + 1) * lw);
            hi[..lw].copy_from_slice(&lo[depth * lw..]);
            xor_into(&mut hi[..lw], self.tester.logical_col(c));
            if self.descend(depth + 1, c + 1) {
                return true;
            }
            if self.aborted {
                return false;
            }
        }
        false
    }
}

/// Outcome of a randomized information-set search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoveringReport {
    /// Lightest nontrivial cycle seen, or `None` if nothing was found.
    pub weight: Option<usize>,
    pub trials: usize,
    /// Number of trials in which the final minimum weight was seen.
    pub confirmations: usize,
}

/// Random stream for trial `trial` of a search seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One information-set round: random column order, reduced row echelon
/// form of the checks, and every kernel vector with a single free column.
/// Returns the lightest nontrivial cycle found in the round.
pub(crate) fn covering_trial(
    checks: &BitMatrix,
    tester: &LogicalTester,
    rng: &mut ChaCha8Rng,
) -> Option<usize> {
    let n = checks.cols();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut rref = checks.select_columns(&order);
    let pivots = rref.reduce_in_place();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // Column-major view of the reduced rows restricted to free columns.
    let rows = pivots.len();
    let mut best: Option<usize> = None;
    let mut support = Vec::new();
    let mut scratch = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        support.clear();
        support.push(order[f]);
        for (r, &p) in pivots.iter().enumerate().take(rows) {
            if get_bit(rref.row(r), f) {
                support.push(order[p]);
            }
        }
        if best.is_some_and(|b| support.len() >= b) {
            continue;
        }
        if tester.is_nontrivial(&support, &mut scratch) {
            best = Some(support.len());
        }
    }
    best
}

/// Randomized covering-set (information-set) estimate of `d_Z`.
///
/// An upper bound on the true distance that is exact with high probability
/// when the distance is small. Trial `t` draws from `trial_rng(seed, t)`.
pub fn covering_set_distance(pair: &IncidencePair, trials: usize, seed: u64) -> CoveringReport {
    let tester = LogicalTester::new(&pair.j, &pair.k);
    covering_search(&pair.j, &tester, 0..trials as u64, seed)
}

pub(crate) fn covering_search(
    checks: &BitMatrix,
    tester: &LogicalTester,
    trials: core::ops::Range<u64>,
    seed: u64,
) -> CoveringReport {
    let count = (trials.end - trials.start) as usize;
    if tester.k() == 0 {
        return CoveringReport {
            weight: None,
            trials: count,
            confirmations: 0,
        };
    }
    let outcomes: Vec<Option<usize>> = trials
        .map(|t| covering_trial(checks, tester, &mut trial_rng(seed, t)))
        .collect();
    summarize_trials(&outcomes)
}

/// Reusable covering-set search for one side of a code; shareable across
/// threads so disjoint trial ranges can run concurrently.
#[derive(Clone, Debug)]
pub struct CoveringSearch {
    checks: BitMatrix,
    tester: LogicalTester,
}

impl CoveringSearch {
    /// Search for `d_Z` of `pair`; use `pair.dual()` for `d_X`.
    pub fn new(pair: &IncidencePair) -> Self {
        CoveringSearch {
            checks: pair.j.clone(),
            tester: LogicalTester::new(&pair.j, &pair.k),
        }
    }

    pub fn k(&self) -> usize {
        self.tester.k()
    }

    /// Per-trial minima for trials `range`, trial `t` drawing from
    /// `trial_rng(seed, t)`.
    pub fn run(&self, range: core::ops::Range<u64>, seed: u64) -> Vec<Option<usize>> {
        if self.tester.k() == 0 {
            return range.map(|_| None).collect();
        }
        range
            .map(|t| covering_trial(&self.checks, &self.tester, &mut trial_rng(seed, t)))
            .collect()
    }
}

/// Folds per-trial minima into a report.
pub fn summarize_trials(outcomes: &[Option<usize>]) -> CoveringReport {
    let weight = outcomes.iter().flatten().copied().min();
    let confirmations = match weight {
        Some(w) => outcomes.iter().filter(|&&o| o == Some(w)).count(),
        None => 0,
    };
    CoveringReport {
        weight,
        trials: outcomes.len(),
        confirmations,
    }
}

/// Search settings for [`code_params`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceOptions {
    /// Budget of subsets visited by the exact enumeration.
    pub exact_limit: u64,
    /// Information-set rounds used when enumeration is over budget.
    pub trials: usize,
    pub seed: u64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            exact_limit: 1 << 24,
            trials: 200,
            seed: 0,
        }
    }
}

/// Parameters `[[n, k, (d_X, d_Z)]]` of the cycle code of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub dz: Option<usize>,
    pub dx: Option<usize>,
    pub dz_exact: bool,
    pub dx_exact: bool,
    /// Covering-set rediscoveries of each minimum (0 when exact).
    pub dz_confirmations: usize,
    pub dx_confirmations: usize,
}

impl CodeParams {
    /// Integer brackets `r` with `2r + 1 <= d_Z <= 2r + 3`, `r >= 1`.
    pub fn injectivity_bracket(&self) -> Option<(usize, usize)> {
        self.dz.and_then(injectivity_bracket)
    }
}

/// Range of injectivity radii compatible with a distance:
/// `2r + 1 <= d <= 2r + 3`, `r >= 1`. `None` if no such `r` exists.
pub fn injectivity_bracket(d: usize) -> Option<(usize, usize)> {
    if d < 3 {
        return None;
    }
    let hi = (d - 1) / 2;
    let lo = d.saturating_sub(3).div_ceil(2).max(1);
    (lo <= hi).then_some((lo, hi))
}

struct SideDistance {
    weight: Option<usize>,
    exact: bool,
    confirmations: usize,
}

fn side_distance(
    checks: &BitMatrix,
    stabilizers: &BitMatrix,
    opts: &DistanceOptions,
) -> SideDistance {
    let tester = LogicalTester::new(checks, stabilizers);
    if tester.k() == 0 {
        return SideDistance {
            weight: None,
            exact: true,
            confirmations: 0,
        };
    }
    if let Some(w) = tester.brute_force_distance(opts.exact_limit) {
        return SideDistance {
            weight: Some(w),
            exact: true,
            confirmations: 0,
        };
    }
    let report = covering_search(checks, &tester, 0..opts.trials as u64, opts.seed);
    SideDistance {
        weight: report.weight,
        exact: false,
        confirmations: report.confirmations,
    }
}

/// Homology rank and both distances. Exact enumeration is used while it
/// fits in `exact_limit`; otherwise the covering-set search supplies a
/// flagged, non-exact estimate.
pub fn code_params(pair: &IncidencePair, opts: &DistanceOptions) -> Result<CodeParams> {
    check_pair(pair)?;
    if !pair.j.mul_transpose(&pair.k).is_some_and(|m| m.is_zero()) {
        return Err(Error::InvalidParameter("J K^T != 0".into()));
    }
    let k = homology_rank(pair);
    let z = side_distance(&pair.j, &pair.k, opts);
    let x = side_distance(&pair.k, &pair.j, opts);
    Ok(CodeParams {
        n: pair.num_edges(),
        k,
        dz: z.weight,
        dx: x.weight,
        dz_exact: z.exact,
        dx_exact: x.exact,
        dz_confirmations: z.confirmations,
        dx_confirmations: x.confirmations,
    })
}

/// Exact `d_Z` by enumeration, or `None` if `k = 0` or over budget.
pub fn brute_force_distance(pair: &IncidencePair, work_limit: u64) -> Option<usize> {
    LogicalTester::new(&pair.j, &pair.k).brute_force_distance(work_limit)
}

/// Exact `d_Z` of a graph's cycle code as the length of its shortest
/// homologically nontrivial cycle.
///
/// Nontrivial cycles satisfy the three-path condition, so the shortest one
/// is a fundamental cycle of a breadth-first tree rooted at one of its
/// vertices. Each root costs one BFS plus a syndrome check per non-tree
/// edge. Returns `None` when `k = 0`.
pub fn cycle_distance(g: &SurfaceGraph) -> Option<usize> {
    let pair = incidence_matrices(g);
    let tester = LogicalTester::new(&pair.j, &pair.k);
    if tester.k() == 0 {
        return None;
    }
    let nv = g.num_vertices();
    let lw = tester.logical_words;
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (e, &[u, v]) in g.edges().iter().enumerate() {
        adjacency[u].push((v, e));
        adjacency[v].push((u, e));
    }
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; nv];
    let mut prefix = vec![0u64; nv * lw];
    let mut queue = Vec::with_capacity(nv);
    let mut scratch = vec![0u64; lw];
    for root in 0..nv {
        dist.fill(usize::MAX);
        queue.clear();
        dist[root] = 0;
        prefix[root * lw..(root + 1) * lw].fill(0);
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            // every cycle found from here on has length >= 2 dist[u] + 1
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &(v, e) in &adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    let (src, dst) = if u < v {
                        let (a, b) = prefix.split_at_mut(v * lw);
                        (&a[u * lw..(u + 1) * lw], &mut b[..lw])
                    } else {
                        let (a, b) = prefix.split_at_mut(u * lw);
                        (&b[..lw], &mut a[v * lw..(v + 1) * lw])
                    };
                    dst.copy_from_slice(src);
                    xor_into(dst, tester.logical_col(e));
                    queue.push(v);
                } else {
                    // tree edges close trivial walks and drop out by syndrome
                    let len = dist[u] + dist[v] + 1;
                    if len >= best {
                        continue;
                    }
                    scratch.copy_from_slice(&prefix[u * lw..(u + 1) * lw]);
                    xor_into(&mut scratch, &prefix[v * lw..(v + 1) * lw]);
                    xor_into(&mut scratch, tester.logical_col(e));
                    if !is_zero(&scratch) {
                        best = len;
                    }
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// Lower bound `e^{-1/(2A)} / (Δ_max - 1)` on the cycle erasure threshold
/// when the injectivity radius grows as `A ln n`.
pub fn peierls_bound(delta_max: f64, a: f64) -> Result<f64> {
    if !(delta_max >= 2.0) || !(a > 0.0) {
        return Err(Error::InvalidParameter(
            "need delta_max >= 2 and A > 0".into(),
        ));
    }
    Ok(math::exp(-1.0 / (2.0 * a)) / (delta_max - 1.0))
}

/// Same bound written in terms of a distance `d = A ln n`, as used for the
/// anisotropic torus: `e^{-1/A} / (Δ_max - 1)`.
pub fn peierls_bound_distance_form(delta_max: f64, a: f64) -> Result<f64> {
    peierls_bound(delta_max, a / 2.0)
}

/// Lower bound `e^{-1/A'} / (ω - 1)` on `1 - p_E^1` when the co-cycle
/// distance grows as `A' ln n` and cycles of weight `≤ ω` generate the
/// cycle group of the cover.
pub fn peierls_bound_dual(omega: f64, a_prime: f64) -> Result<f64> {
    if !(omega >= 2.0) || !(a_prime > 0.0) {
        return Err(Error::InvalidParameter("need omega >= 2 and A' > 0".into()));
    }
    Ok(math::exp(-1.0 / a_prime) / (omega - 1.0))
}
