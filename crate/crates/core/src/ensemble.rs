//! Canonical to grand-canonical conversion by binomial convolution.
//!
//! `A(p) = Σ_x C(n,x) p^x (1-p)^(n-x) A_x`, truncated to the window
//! `|x - pn| < M √(np(1-p))`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::sweep::{CanonicalSeries, Observable};

pub const DEFAULT_M: f64 = 100.0;

/// Uniform grid `p_min + i·dp`, `i < count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PGrid {
    pub p_min: f64,
    pub dp: f64,
    pub count: usize,
}

impl Default for PGrid {
    fn default() -> Self {
        PGrid {
            p_min: 0.001,
            dp: 0.001,
            count: 1000,
        }
    }
}

impl PGrid {
    pub fn new(p_min: f64, dp: f64, count: usize) -> Result<Self> {
        let grid = PGrid { p_min, dp, count };
        grid.check()?;
        Ok(grid)
    }

    /// Grid from `p_min` to `p_max` inclusive (rounded to whole steps).
    pub fn span(p_min: f64, p_max: f64, dp: f64) -> Result<Self> {
        if !(dp > 0.0) || !(p_max >= p_min) {
            return Err(Error::InvalidParameter(format!(
                "bad grid {p_min}..{p_max} step {dp}"
            )));
        }
        let count = math::floor((p_max - p_min) / dp + 1e-9) as usize + 1;
        PGrid::new(p_min, dp, count)
    }

    pub fn p(&self, i: usize) -> f64 {
        let p = self.p_min + i as f64 * self.dp;
        // absorb rounding at the ends of [0, 1]
        p.clamp(0.0, 1.0)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.p(i))
    }

    pub fn p_max(&self) -> f64 {
        self.p_min + (self.count.saturating_sub(1)) as f64 * self.dp
    }

    fn check(&self) -> Result<()> {
        const SLACK: f64 = 1e-9;
        if self.count == 0 || !(self.dp > 0.0) && self.count > 1 {
            return Err(Error::InvalidParameter(format!(
                "bad grid step {} or count {}",
                self.dp, self.count
            )));
        }
        for p in [self.p_min, self.p_max()] {
            if !(-SLACK..=1.0 + SLACK).contains(&p) {
                return Err(Error::GridOutOfRange { p });
            }
        }
        Ok(())
    }
}

/// Binomial weights on `x = start .. start + weights.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialWindow {
    pub start: usize,
    pub weights: Vec<f64>,
}

impl BinomialWindow {
    pub fn end(&self) -> usize {
        self.start + self.weights.len()
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ w(x) a[x]` over the window.
    pub fn apply(&self, a: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(&a[self.start..self.end()])
            .map(|(w, v)| w * v)
            .sum()
    }

    /// `√(Σ w(x)² se[x]²)`.
    pub fn apply_se(&self, se: &[f64]) -> f64 {
        let s: f64 = self
            .weights
            .iter()
            .zip(&se[self.start..self.end()])
            .map(|(w, e)| (w * e) * (w * e))
            .sum();
        math::sqrt(s)
    }
}

/// Binomial(n, p) probabilities over the truncation window of width `m`
/// standard deviations, clipped to `[0, n]`.
pub fn binomial_weights(n: usize, p: f64, m: f64) -> BinomialWindow {
    assert!((0.0..=1.0).contains(&p), "p = {p} outside [0, 1]");
    assert!(m > 0.0, "M must be positive");
    if p == 0.0 {
        return BinomialWindow {
            start: 0,
            weights: alloc::vec![1.0],
        };
    }
    if p == 1.0 {
        return BinomialWindow {
            start: n,
            weights: alloc::vec![1.0],
        };
    }
    let nf = n as f64;
    let q = 1.0 - p;
    let mean = nf * p;
    let half = m * math::sqrt(nf * p * q);
    // strict inequality |x - pn| < half
    let mut lo = math::ceil(mean - half).max(0.0);
    if lo > 0.0 && mean - lo >= half {
        lo += 1.0;
    }
    let mut hi = math::floor(mean + half).min(nf);
    if hi < nf && hi - mean >= half {
        hi -= 1.0;
    }
    let mode = (math::floor((nf + 1.0) * p) as usize).min(n);
    let (lo, hi) = if lo > hi {
        (mode, mode)
    } else {
        (lo as usize, hi as usize)
    };
    let center = mode.clamp(lo, hi);

    let ln_ratio = math::ln(p) - math::ln(q);
    let mut weights = alloc::vec![0.0; hi - lo + 1];
    let ln_center = ln_binomial_pmf(n, center, p);
    weights[center - lo] = math::exp(ln_center);
    let mut lw = ln_center;
    for x in center..hi {
        // w(x+1) / w(x) = (n-x)/(x+1) · p/q
        lw += math::ln((n - x) as f64 / (x + 1) as f64) + ln_ratio;
        weights[x + 1 - lo] = math::exp(lw);
    }
    lw = ln_center;
    for x in (lo + 1..=center).rev() {
        // w(x-1) / w(x) = x/(n-x+1) · q/p
        lw += math::ln(x as f64 / (n - x + 1) as f64) - ln_ratio;
        weights[x - 1 - lo] = math::exp(lw);
    }
    BinomialWindow { start: lo, weights }
}

/// `ln P(X = x)` for `X ~ Binomial(n, p)`, `0 < p < 1`, by the saddle-point
/// expansion (Loader's `stirlerr`/`bd0`), accurate to a few ulps at any `n`.
pub fn ln_binomial_pmf(n: usize, x: usize, p: f64) -> f64 {
    let q = 1.0 - p;
    if x == 0 {
        return n as f64 * math::ln_1p(-p);
    }
    if x == n {
        return n as f64 * math::ln(p);
    }
    let (nf, xf) = (n as f64, x as f64);
    let yf = nf - xf;
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(xf, nf * p) - bd0(yf, nf * q);
    let lf = math::ln(2.0 * core::f64::consts::PI) + math::ln(xf) + math::ln_1p(-xf / nf);
    lc - 0.5 * lf
}

/// `ln n! - ((n + ½) ln n - n + ½ ln 2π)`.
fn stirlerr(n: usize) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    let nf = n as f64;
    if n <= 15 {
        if n == 0 {
            return 0.0;
        }
        let ln_fact: f64 = (2..=n).map(|i| math::ln(i as f64)).sum();
        return ln_fact - (nf + 0.5) * math::ln(nf) + nf
            - 0.5 * math::ln(2.0 * core::f64::consts::PI);
    }
    let nn = nf * nf;
    if n > 500 {
        (S0 - S1 / nn) / nf
    } else if n > 80 {
        (S0 - (S1 - S2 / nn) / nn) / nf
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / nf
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / nf
    }
}

/// Deviance term `x ln(x/np) + np - x`, computed stably near `x = np`.
fn bd0(x: f64, np: f64) -> f64 {
    if math::abs(x - np) < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * math::ln(x / np) + np - x
    }
}

/// Grand-canonical curves of one graph on a `p` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GrandCanonicalCurve {
    pub id: String,
    pub n: usize,
    pub k: usize,
    pub grid: PGrid,
    pub m: f64,
    /// Probability that some nontrivial cycle is open.
    pub pe: Observable,
    /// Probability that some homology class is not covered.
    pub pa: Observable,
    /// Mean `k'` divided by `n`.
    pub re: Observable,
    pub s1: Observable,
    pub s2: Observable,
    pub s3: Observable,
}

impl GrandCanonicalCurve {
    pub fn p(&self, i: usize) -> f64 {
        self.grid.p(i)
    }

    pub fn len(&self) -> usize {
        self.grid.count
    }

    pub fn is_empty(&self) -> bool {
        self.grid.count == 0
    }

    /// Largest violation of `P_E` nondecreasing or `P_A` nonincreasing.
    pub fn monotonicity_defect(&self) -> f64 {
        let up = self.pe.mean.windows(2).map(|w| w[0] - w[1]);
        let down = self.pa.mean.windows(2).map(|w| w[1] - w[0]);
        up.chain(down).fold(0.0, f64::max)
    }
}

/// Convolves every observable of `series` over `grid`.
pub fn convolve(series: &CanonicalSeries, grid: &PGrid, m: f64) -> Result<GrandCanonicalCurve> {
    grid.check()?;
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "M must be positive (got {m})"
        )));
    }
    let n = series.n;
    if series.kprime.len() != n + 1 {
        return Err(Error::InvalidParameter(format!(
            "series has {} points, expected n + 1 = {}",
            series.kprime.len(),
            n + 1
        )));
    }
    let mut re_series = series.kprime.clone();
    let scale = if n > 0 { 1.0 / n as f64 } else { 0.0 };
    for v in re_series.mean.iter_mut().chain(re_series.se.iter_mut()) {
        *v *= scale;
    }
    let sources = [
        &series.erased,
        &series.incomplete,
        &re_series,
        &series.s1,
        &series.s2,
        &series.s3,
    ];
    let mut outs: [Observable; 6] = core::array::from_fn(|_| Observable::with_len(grid.count));
    for i in 0..grid.count {
        let w = binomial_weights(n, grid.p(i), m);
        for (src, out) in sources.iter().zip(outs.iter_mut()) {
            out.mean[i] = w.apply(&src.mean);
            out.se[i] = w.apply_se(&src.se);
        }
    }
    let [pe, pa, re, s1, s2, s3] = outs;
    Ok(GrandCanonicalCurve {
        id: String::new(),
        n,
        k: series.k,
        grid: *grid,
        m,
        pe,
        pa,
        re,
        s1,
        s2,
        s3,
    })
}
