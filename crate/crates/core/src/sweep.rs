//! Dual-pair Newman-Ziff sweeps.
//!
//! One sweep opens the edges of a graph one at a time in a uniformly random
//! order. The homology rank of the open subgraph with `x` open edges is
//!
//! ```text
//! k'(x) = x - |V| + K_open(x) - K_dual_closed(x) + 1
//! ```
//!
//! where `K_open` counts components of the open primal subgraph and
//! `K_dual_closed` counts components of the dual subgraph formed by the
//! still-closed edges. Union-find cannot delete edges, so the dual counts
//! come from a first pass that adds dual edges in reverse order.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::DualPair;
use crate::math;
use crate::unionfind::UnionFind;

/// Per-`x` trajectory of one sweep, `x = 0..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepRecord {
    pub kprime: Vec<u32>,
    pub s1: Vec<u32>,
    pub s2: Vec<u32>,
    pub s3: Vec<u32>,
    pub k_open: Vec<u32>,
    pub k_dual_closed: Vec<u32>,
}

/// Random stream of sweep `sweep` under `master_seed`: ChaCha8 keyed by the
/// master seed, with the sweep index as the stream id. Every permutation is
/// a Fisher-Yates shuffle drawn from this stream.
pub fn sweep_rng(master_seed: u64, sweep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(sweep);
    rng
}

/// Reusable sweep state for one dual pair.
#[derive(Clone, Debug)]
pub struct Sweeper<'a> {
    pair: &'a DualPair,
    order: Vec<usize>,
    primal: UnionFind,
    dual: UnionFind,
    record: SweepRecord,
}

impl<'a> Sweeper<'a> {
    pub fn new(pair: &'a DualPair) -> Self {
        let n = pair.primal().num_edges();
        let len = n + 1;
        Sweeper {
            pair,
            order: (0..n).collect(),
            primal: UnionFind::new(pair.primal().num_vertices()),
            dual: UnionFind::new(pair.dual().num_vertices()),
            record: SweepRecord {
                kprime: vec![0; len],
                s1: vec![0; len],
                s2: vec![0; len],
                s3: vec![0; len],
                k_open: vec![0; len],
                k_dual_closed: vec![0; len],
            },
        }
    }

    /// Runs one sweep with a fresh permutation drawn from `rng`.
    pub fn run(&mut self, rng: &mut ChaCha8Rng) -> &SweepRecord {
        for (i, slot) in self.order.iter_mut().enumerate() {
            *slot = i;
        }
        self.order.shuffle(rng);
        self.run_order()
    }

    /// Runs one sweep opening edges in the current order.
    fn run_order(&mut self) -> &SweepRecord {
        let primal = self.pair.primal();
        let dual = self.pair.dual();
        let n = self.order.len();
        let nv = primal.num_vertices();
        let rec = &mut self.record;

        // Pass 1: dual subgraph on edges order[x..n], built from x = n down.
        self.dual.reset(dual.num_vertices());
        rec.k_dual_closed[n] = self.dual.components() as u32;
        for x in (0..n).rev() {
            let [u, v] = dual.edge(self.order[x]);
            self.dual.union(u, v);
            rec.k_dual_closed[x] = self.dual.components() as u32;
        }

        // Pass 2: open primal subgraph on edges order[0..x].
        self.primal.reset(nv);
        let record_at = |x: usize, uf: &UnionFind, rec: &mut SweepRecord| {
            let [a, b, c] = uf.top3();
            rec.k_open[x] = uf.components() as u32;
            rec.s1[x] = a;
            rec.s2[x] = b;
            rec.s3[x] = c;
            let k = x as i64 - nv as i64 + rec.k_open[x] as i64 - rec.k_dual_closed[x] as i64 + 1;
            debug_assert!(k >= 0);
            rec.kprime[x] = k as u32;
        };
        record_at(0, &self.primal, rec);
        for x in 1..=n {
            let [u, v] = primal.edge(self.order[x - 1]);
            self.primal.union(u, v);
            record_at(x, &self.primal, rec);
        }
        rec
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// One sweep on `pair` drawing its permutation from `rng`.
pub fn run_sweep(pair: &DualPair, rng: &mut ChaCha8Rng) -> SweepRecord {
    Sweeper::new(pair).run(rng).clone()
}

/// Integer running sums over sweeps; exact, so merging order never
/// changes the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Accumulator {
    k: u32,
    sweeps: u64,
    kprime: Vec<[u64; 2]>,
    erased: Vec<u64>,
    incomplete: Vec<u64>,
    clusters: [Vec<[u64; 2]>; 3],
}

impl Accumulator {
    pub fn new(n: usize, k: usize) -> Self {
        let len = n + 1;
        Accumulator {
            k: k as u32,
            sweeps: 0,
            kprime: vec![[0; 2]; len],
            erased: vec![0; len],
            incomplete: vec![0; len],
            clusters: [vec![[0; 2]; len], vec![[0; 2]; len], vec![[0; 2]; len]],
        }
    }

    pub fn sweeps(&self) -> u64 {
        self.sweeps
    }

    pub fn add(&mut self, rec: &SweepRecord) {
        self.sweeps += 1;
        for x in 0..self.kprime.len() {
            let kp = rec.kprime[x] as u64;
            self.kprime[x][0] += kp;
            self.kprime[x][1] += kp * kp;
            self.erased[x] += (kp > 0) as u64;
            self.incomplete[x] += (kp < self.k as u64) as u64;
            for (acc, s) in self.clusters.iter_mut().zip([&rec.s1, &rec.s2, &rec.s3]) {
                let v = s[x] as u64;
                acc[x][0] += v;
                acc[x][1] += v * v;
            }
        }
    }

    pub fn merge(&mut self, other: &Accumulator) {
        assert_eq!(
            self.kprime.len(),
            other.kprime.len(),
            "accumulators of different graphs"
        );
        self.sweeps += other.sweeps;
        for x in 0..self.kprime.len() {
            for i in 0..2 {
                self.kprime[x][i] += other.kprime[x][i];
                for c in 0..3 {
                    self.clusters[c][x][i] += other.clusters[c][x][i];
                }
            }
            self.erased[x] += other.erased[x];
            self.incomplete[x] += other.incomplete[x];
        }
    }

    pub fn finish(&self, num_vertices: usize) -> CanonicalSeries {
        let n = self.kprime.len() - 1;
        let count = self.sweeps;
        let from_sums = |sums: &[[u64; 2]]| {
            let mut s = Observable::with_len(sums.len());
            for (x, &[a, b]) in sums.iter().enumerate() {
                let (m, e) = mean_se(a as f64, b as f64, count);
                s.mean[x] = m;
                s.se[x] = e;
            }
            s
        };
        let from_indicator = |hits: &[u64]| {
            let sums: Vec<[u64; 2]> = hits.iter().map(|&h| [h, h]).collect();
            from_sums(&sums)
        };
        CanonicalSeries {
            n,
            k: self.k as usize,
            num_vertices,
            sweeps: count,
            kprime: from_sums(&self.kprime),
            erased: from_indicator(&self.erased),
            incomplete: from_indicator(&self.incomplete),
            s1: from_sums(&self.clusters[0]),
            s2: from_sums(&self.clusters[1]),
            s3: from_sums(&self.clusters[2]),
        }
    }
}

/// Mean and standard error of the mean from a sum and a sum of squares.
fn mean_se(sum: f64, sum_sq: f64, count: u64) -> (f64, f64) {
    if count == 0 {
        return (f64::NAN, f64::NAN);
    }
    let c = count as f64;
    let mean = sum / c;
    if count == 1 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - sum * mean) / (c - 1.0)).max(0.0);
    (mean, math::sqrt(var / c))
}

/// Mean and standard error per index.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
}

impl Observable {
    pub fn with_len(len: usize) -> Self {
        Observable {
            mean: vec![0.0; len],
            se: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }
}

/// Canonical-ensemble averages over sweeps, indexed by open-edge count.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalSeries {
    pub n: usize,
    pub k: usize,
    pub num_vertices: usize,
    pub sweeps: u64,
    pub kprime: Observable,
    /// Indicator `k' > 0`: a nontrivial cycle is open.
    pub erased: Observable,
    /// Indicator `k' < k`: some homology class is not yet covered.
    pub incomplete: Observable,
    pub s1: Observable,
    pub s2: Observable,
    pub s3: Observable,
}

/// Runs sweeps `range` under `master_seed` into a fresh accumulator.
pub fn accumulate(
    pair: &DualPair,
    k: usize,
    range: core::ops::Range<u64>,
    master_seed: u64,
) -> Accumulator {
    let mut acc = Accumulator::new(pair.primal().num_edges(), k);
    let mut sweeper = Sweeper::new(pair);
    for s in range {
        let rec = sweeper.run(&mut sweep_rng(master_seed, s));
        acc.add(rec);
    }
    acc
}

/// Runs `sweeps` sweeps on one thread; sweep `i` uses `sweep_rng(seed, i)`.
pub fn aggregate(pair: &DualPair, k: usize, sweeps: u64, master_seed: u64) -> CanonicalSeries {
    accumulate(pair, k, 0..sweeps, master_seed).finish(pair.primal().num_vertices())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_torus;

    #[test]
    fn torus_endpoints() {
        let pair = build_torus(3, 3).unwrap();
        for seed in 0..20 {
            let rec = run_sweep(&pair, &mut sweep_rng(seed, 0));
            assert_eq!(rec.kprime[0], 0);
            assert_eq!(rec.kprime[18], 2);
            assert_eq!(rec.k_open[0], 9);
            assert_eq!(rec.k_dual_closed[18], 9);
            assert_eq!(rec.k_dual_closed[0], 1);
            assert_eq!(rec.s1[18], 9);
            assert!(rec
                .kprime
                .windows(2)
                .all(|w| w[1] == w[0] || w[1] == w[0] + 1));
            let first = rec.kprime.iter().position(|&k| k > 0).unwrap();
            assert!(first >= 3);
        }
    }

    #[test]
    fn single_sweep_has_zero_error() {
        let pair = build_torus(3, 3).unwrap();
        let s = aggregate(&pair, 2, 1, 9);
        assert_eq!(s.sweeps, 1);
        assert!(s.kprime.se.iter().all(|&e| e == 0.0));
        assert_eq!(s.kprime.mean[18], 2.0);
    }

    #[test]
    fn split_accumulation_is_identical() {
        let pair = build_torus(4, 4).unwrap();
        let whole = accumulate(&pair, 2, 0..50, 3);
        let mut parts = accumulate(&pair, 2, 30..50, 3);
        parts.merge(&accumulate(&pair, 2, 0..30, 3));
        assert_eq!(whole, parts);
    }

    #[test]
    fn indicator_means_are_monotone() {
        let pair = build_torus(4, 4).unwrap();
        let s = aggregate(&pair, 2, 200, 1);
        assert!(s.erased.mean.windows(2).all(|w| w[0] <= w[1]));
        assert!(s.incomplete.mean.windows(2).all(|w| w[0] >= w[1]));
        assert!(s.erased.mean.iter().all(|&p| (0.0..=1.0).contains(&p)));
    }
}
