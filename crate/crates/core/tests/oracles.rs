//! Sweeps and convolutions checked against exhaustive enumeration on the
//! 3x3 torus, with ranks computed by a separate bitmask eliminator.

use homperc_core::{aggregate, build_torus, convolve, incidence_matrices, BitMatrix, PGrid};

/// Rows of `m` as bitmasks over its columns (at most 32).
fn row_masks(m: &BitMatrix) -> Vec<u32> {
    assert!(m.cols() <= 32);
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .filter(|&c| m.get(r, c))
                .fold(0u32, |acc, c| acc | 1 << c)
        })
        .collect()
}

fn rank(rows: impl Iterator<Item = u32>) -> usize {
    let mut basis = [0u32; 32];
    let mut r = 0;
    for mut v in rows {
        while v != 0 {
            let top = 31 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                r += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    r
}

/// `k'(I) = |I| - rank K + rank K[Ī] - rank J[I]`, by brute force over masks.
struct Oracle {
    n: usize,
    j: Vec<u32>,
    k: Vec<u32>,
    rank_k: usize,
}

impl Oracle {
    fn torus(l: usize) -> Self {
        let pair = build_torus(l, l).unwrap();
        let inc = incidence_matrices(pair.primal());
        let (j, k) = (row_masks(&inc.j), row_masks(&inc.k));
        let rank_k = rank(k.iter().copied());
        Oracle {
            n: inc.j.cols(),
            j,
            k,
            rank_k,
        }
    }

    fn kprime(&self, open: u32) -> usize {
        let closed = !open & ((1u32 << self.n) - 1);
        open.count_ones() as usize + rank(self.k.iter().map(|r| r & closed))
            - self.rank_k
            - rank(self.j.iter().map(|r| r & open))
    }
}

fn subsets_of_size(n: usize, x: usize) -> impl Iterator<Item = u32> {
    (0u32..1 << n).filter(move |s| s.count_ones() as usize == x)
}

#[test]
fn canonical_means_match_enumeration() {
    let oracle = Oracle::torus(3);
    let pair = build_torus(3, 3).unwrap();
    let series = aggregate(&pair, 2, 100_000, 2024);
    for x in 0..=6 {
        let (mut sum, mut erased, mut count) = (0.0, 0.0, 0.0);
        for s in subsets_of_size(18, x) {
            let k = oracle.kprime(s);
            sum += k as f64;
            erased += (k > 0) as u8 as f64;
            count += 1.0;
        }
        let (exact, exact_pe) = (sum / count, erased / count);
        let (mean, se) = (series.kprime.mean[x], series.kprime.se[x]);
        if se == 0.0 {
            assert_eq!(mean, exact, "x = {x}");
        } else {
            assert!(
                (mean - exact).abs() <= 4.0 * se,
                "x = {x}: {mean} +- {se} vs {exact}"
            );
        }
        let (pe, pe_se) = (series.erased.mean[x], series.erased.se[x]);
        assert!(
            (pe - exact_pe).abs() <= 4.0 * pe_se.max(1e-12),
            "x = {x}: {pe} vs {exact_pe}"
        );
    }
    // Shortest nontrivial cycles have length 3; six straight lines exist.
    let exact3 = subsets_of_size(18, 3)
        .filter(|&s| oracle.kprime(s) > 0)
        .count();
    assert_eq!(exact3, 6);
}

#[test]
fn grand_canonical_matches_all_subsets_at_half() {
    let oracle = Oracle::torus(3);
    let n = 18;
    // At p = 1/2 every subset is equally likely.
    let mut sums = vec![0u64; n + 1];
    let mut hits = vec![0u64; n + 1];
    let mut counts = vec![0u64; n + 1];
    for s in 0u32..1 << n {
        let x = s.count_ones() as usize;
        let k = oracle.kprime(s) as u64;
        sums[x] += k;
        hits[x] += (k > 0) as u64;
        counts[x] += 1;
    }
    let total = (1u64 << n) as f64;
    let exact_pe = hits.iter().sum::<u64>() as f64 / total;
    let exact_re = sums.iter().sum::<u64>() as f64 / total / n as f64;

    let pair = build_torus(3, 3).unwrap();
    let grid = PGrid::new(0.5, 0.001, 1).unwrap();

    // Exact canonical data convolved must reproduce the subset average.
    let mut exact = aggregate(&pair, 2, 1, 0);
    for x in 0..=n {
        exact.kprime.mean[x] = sums[x] as f64 / counts[x] as f64;
        exact.erased.mean[x] = hits[x] as f64 / counts[x] as f64;
    }
    let curve = convolve(&exact, &grid, 100.0).unwrap();
    assert!((curve.pe.mean[0] - exact_pe).abs() < 1e-12);
    assert!((curve.re.mean[0] - exact_re).abs() < 1e-12);

    // Monte Carlo canonical data lands within its (independence-assumed)
    // error bars, inflated since all x share the same sweeps.
    let mc = aggregate(&pair, 2, 100_000, 77);
    let curve = convolve(&mc, &grid, 100.0).unwrap();
    let (pe, se) = (curve.pe.mean[0], curve.pe.se[0]);
    assert!(
        (pe - exact_pe).abs() <= 4.0 * se * (n as f64).sqrt(),
        "{pe} +- {se} vs {exact_pe}"
    );
}
