//! Threshold estimators on grand-canonical curves.
//!
//! * [`crossing_fit`]: collective polynomial fit of several curves that share
//!   their value at an unknown abscissa `p0`, optionally with a size-dependent
//!   vertical shift `B ln(n)/d`.
//! * [`slope_scaling`]: power law of the linear coefficients in `n`.
//! * [`size_scaling_extrapolate`]: `S1(p) = ω n^(2/3)` solved per graph and
//!   extrapolated in `n^(-1/3)`.
//! * [`rate_deviation_report`]: first crossings of the erased rate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ensemble::GrandCanonicalCurve;
use crate::error::{Error, Result};
use crate::linalg::{least_squares, Dense};
use crate::math;

/// One observable of one graph sampled on a `p` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FitCurve {
    pub n: usize,
    /// Code distance; enters only the shift regressor `ln(n)/d`.
    pub distance: usize,
    pub p: Vec<f64>,
    pub value: Vec<f64>,
    pub se: Vec<f64>,
}

impl FitCurve {
    pub fn pe(curve: &GrandCanonicalCurve, distance: usize) -> Self {
        FitCurve {
            n: curve.n,
            distance,
            p: curve.grid.points().collect(),
            value: curve.pe.mean.clone(),
            se: curve.pe.se.clone(),
        }
    }

    pub fn s1(curve: &GrandCanonicalCurve) -> Self {
        FitCurve {
            n: curve.n,
            distance: 0,
            p: curve.grid.points().collect(),
            value: curve.s1.mean.clone(),
            se: curve.s1.se.clone(),
        }
    }

    pub fn re(curve: &GrandCanonicalCurve) -> Self {
        FitCurve {
            n: curve.n,
            distance: 0,
            p: curve.grid.points().collect(),
            value: curve.re.mean.clone(),
            se: curve.re.se.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ShiftMode {
    #[default]
    Off,
    On,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub p0: f64,
    /// Final uncertainty of `p0`; after [`combine_replicates`] the larger of
    /// the fit and replicate estimates.
    pub sigma: f64,
    /// Uncertainty from the curvature of the profile residual.
    pub sigma_fit: f64,
    pub a0: f64,
    pub b: Option<f64>,
    /// `coefficients[g][i-1] = A_{i,g}` in input order.
    pub coefficients: Vec<Vec<f64>>,
    pub n: Vec<usize>,
    pub distance: Vec<usize>,
    /// Weighted residual sum of squares at `p0`.
    pub residual: f64,
    pub dof: usize,
    pub degree: usize,
    pub window: (f64, f64),
    pub shift: ShiftMode,
    /// Whether weights were `1/se²` (otherwise uniform).
    pub weighted: bool,
    pub warnings: Vec<String>,
}

impl FitResult {
    /// `(n_g, A_{1,g})` pairs.
    pub fn slopes(&self) -> Vec<(usize, f64)> {
        self.n
            .iter()
            .zip(&self.coefficients)
            .map(|(&n, c)| (n, c[0]))
            .collect()
    }
}

struct CrossingProblem<'a> {
    curves: &'a [FitCurve],
    points: Vec<Vec<usize>>,
    weights: Vec<Vec<f64>>,
    degree: usize,
    shift: ShiftMode,
    rows: usize,
    cols: usize,
}

struct InnerFit {
    coef: Vec<f64>,
    residual: f64,
}

impl CrossingProblem<'_> {
    fn offset(&self) -> usize {
        1 + (self.shift == ShiftMode::On) as usize
    }

    fn inner(&self, p0: f64) -> Result<InnerFit> {
        let mut a = Dense::zeros(self.rows, self.cols);
        let mut rhs = Vec::with_capacity(self.rows);
        let off = self.offset();
        let mut row = 0;
        for (g, curve) in self.curves.iter().enumerate() {
            let shift = if self.shift == ShiftMode::On {
                math::ln(curve.n as f64) / curve.distance as f64
            } else {
                0.0
            };
            for (&i, &w) in self.points[g].iter().zip(&self.weights[g]) {
                let sw = math::sqrt(w);
                let xi = curve.p[i] - p0;
                *a.at_mut(row, 0) = sw;
                if off == 2 {
                    *a.at_mut(row, 1) = sw * shift;
                }
                let mut pw = sw;
                for j in 0..self.degree {
                    pw *= xi;
                    *a.at_mut(row, off + g * self.degree + j) = pw;
                }
                rhs.push(sw * curve.value[i]);
                row += 1;
            }
        }
        let ls = least_squares(&a, &rhs)?;
        Ok(InnerFit {
            coef: ls.coef,
            residual: ls.residual,
        })
    }

    fn chi2(&self, p0: f64) -> f64 {
        self.inner(p0).map(|f| f.residual).unwrap_or(f64::INFINITY)
    }
}

/// Collective crossing-point fit of `P^{(g)}(p) = A0 + Σ_i A_{i,g} ξ^i
/// [+ B ln(n_g)/d_g]`, `ξ = p - p0`, over `window`.
///
/// `p0` is found by a 200-point scan of the window refined with Brent's
/// method; the remaining parameters by weighted linear least squares.
pub fn crossing_fit(
    curves: &[FitCurve],
    degree: usize,
    window: (f64, f64),
    shift: ShiftMode,
) -> Result<FitResult> {
    const SCAN: usize = 200;
    const SLACK: f64 = 1e-9;
    let (lo, hi) = window;
    if curves.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "crossing fit needs at least 2 curves (got {})",
            curves.len()
        )));
    }
    if degree == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "empty window [{lo}, {hi}]"
        )));
    }
    let mut warnings = Vec::new();
    let mut points = Vec::with_capacity(curves.len());
    for (g, c) in curves.iter().enumerate() {
        if c.p.len() != c.value.len() || c.p.len() != c.se.len() {
            return Err(Error::InvalidParameter(format!(
                "curve {g}: column lengths differ"
            )));
        }
        let (first, last) = (
            c.p.first().copied().unwrap_or(f64::NAN),
            c.p.last().copied().unwrap_or(f64::NAN),
        );
        if !(first <= lo + SLACK && last >= hi - SLACK) {
            return Err(Error::InvalidParameter(format!(
                "window [{lo}, {hi}] not inside the grid [{first}, {last}] of curve {g} (n = {})",
                c.n
            )));
        }
        if shift == ShiftMode::On && c.distance == 0 {
            return Err(Error::InvalidParameter(format!(
                "curve {g}: shift needs a distance"
            )));
        }
        let idx: Vec<usize> = (0..c.p.len())
            .filter(|&i| c.p[i] >= lo - SLACK && c.p[i] <= hi + SLACK)
            .collect();
        points.push(idx);
    }
    let weighted = points
        .iter()
        .zip(curves)
        .all(|(idx, c)| idx.iter().all(|&i| c.se[i] > 0.0));
    let weights: Vec<Vec<f64>> = points
        .iter()
        .zip(curves)
        .map(|(idx, c)| {
            idx.iter()
                .map(|&i| {
                    if weighted {
                        1.0 / (c.se[i] * c.se[i])
                    } else {
                        1.0
                    }
                })
                .collect()
        })
        .collect();
    let rows: usize = points.iter().map(Vec::len).sum();
    let cols = 1 + (shift == ShiftMode::On) as usize + curves.len() * degree;
    if rows <= cols {
        return Err(Error::InvalidParameter(format!(
            "{rows} points in the window for {cols} parameters"
        )));
    }
    let problem = CrossingProblem {
        curves,
        points,
        weights,
        degree,
        shift,
        rows,
        cols,
    };

    let scan: Vec<(f64, f64)> = (0..SCAN)
        .map(|j| {
            let p = lo + (hi - lo) * j as f64 / (SCAN - 1) as f64;
            (p, problem.chi2(p))
        })
        .collect();
    if scan.iter().all(|(_, c)| !c.is_finite()) {
        return Err(Error::SingularSystem);
    }
    let local_minima: Vec<usize> = (0..SCAN)
        .filter(|&j| {
            let c = scan[j].1;
            c.is_finite() && (j == 0 || c < scan[j - 1].1) && (j + 1 == SCAN || c <= scan[j + 1].1)
        })
        .collect();
    let best = (0..SCAN)
        .min_by(|&a, &b| scan[a].1.total_cmp(&scan[b].1))
        .unwrap_or(0);
    if local_minima.len() > 1 {
        let other = local_minima
            .iter()
            .copied()
            .filter(|&j| j != best)
            .min_by(|&a, &b| scan[a].1.total_cmp(&scan[b].1))
            .unwrap_or(best);
        warnings.push(format!(
            "residual is not unimodal in p0: minima near {:.6} (chi2 {:.6e}) and {:.6} (chi2 {:.6e})",
            scan[best].0, scan[best].1, scan[other].0, scan[other].1
        ));
    }
    let a = scan[best.saturating_sub(1)].0;
    let b = scan[(best + 1).min(SCAN - 1)].0;
    let p0 = brent_min(|p| problem.chi2(p), a, b, scan[best].0, 1e-12 * (hi - lo));
    let fit = problem.inner(p0)?;

    let dof = rows - cols - 1;
    let h = (hi - lo) * 1e-3;
    let curvature = (problem.chi2(p0 + h) - 2.0 * fit.residual + problem.chi2(p0 - h)) / (h * h);
    let reduced = if dof > 0 {
        fit.residual / dof as f64
    } else {
        f64::NAN
    };
    let inflate = if weighted { reduced.max(1.0) } else { reduced };
    let sigma_fit = if curvature > 0.0 && curvature.is_finite() {
        math::sqrt(2.0 / curvature * inflate)
    } else {
        warnings.push(format!(
            "profile residual has no positive curvature at p0 = {p0}"
        ));
        f64::NAN
    };
    if !(p0 > lo && p0 < hi) {
        warnings.push(format!("p0 = {p0} at the window edge"));
    }

    let off = problem.offset();
    let b_coef = (shift == ShiftMode::On).then(|| fit.coef[1]);
    if shift == ShiftMode::On {
        let xs: Vec<f64> = curves
            .iter()
            .map(|c| math::ln(c.n as f64) / c.distance as f64)
            .collect();
        let (mean, sd) = mean_sd(&xs);
        warnings.push(format!(
            "ln(n)/d over the curves: mean {mean:.4}, spread {sd:.4}"
        ));
    }
    let coefficients = (0..curves.len())
        .map(|g| fit.coef[off + g * degree..off + (g + 1) * degree].to_vec())
        .collect();
    Ok(FitResult {
        p0,
        sigma: sigma_fit,
        sigma_fit,
        a0: fit.coef[0],
        b: b_coef,
        coefficients,
        n: curves.iter().map(|c| c.n).collect(),
        distance: curves.iter().map(|c| c.distance).collect(),
        residual: fit.residual,
        dof,
        degree,
        window,
        shift,
        weighted,
        warnings,
    })
}

/// Residual and `p0` for each fit degree, to choose a degree with evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeRow {
    pub degree: usize,
    pub p0: f64,
    pub residual: f64,
    pub dof: usize,
}

pub fn degree_scan(
    curves: &[FitCurve],
    degrees: core::ops::RangeInclusive<usize>,
    window: (f64, f64),
    shift: ShiftMode,
) -> Vec<DegreeRow> {
    degrees
        .filter_map(|degree| {
            crossing_fit(curves, degree, window, shift)
                .ok()
                .map(|f| DegreeRow {
                    degree,
                    p0: f.p0,
                    residual: f.residual,
                    dof: f.dof,
                })
        })
        .collect()
}

/// Replicate fits of the same family under different seeds.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicateSummary {
    pub p0: f64,
    pub sigma: f64,
    /// Root mean square of the per-replicate fit uncertainties.
    pub sigma_fit: f64,
    /// Sample standard deviation of the replicate `p0` (0 for one replicate).
    pub spread: f64,
    pub replicates: Vec<f64>,
}

/// Mean `p0` with uncertainty `max(fit σ, replicate spread)`.
pub fn combine_replicates(fits: &[FitResult]) -> Result<ReplicateSummary> {
    if fits.is_empty() {
        return Err(Error::InvalidParameter("no replicates".into()));
    }
    let p: Vec<f64> = fits.iter().map(|f| f.p0).collect();
    let (mean, spread) = mean_sd(&p);
    let sigma_fit =
        math::sqrt(fits.iter().map(|f| f.sigma_fit * f.sigma_fit).sum::<f64>() / fits.len() as f64);
    let sigma = if sigma_fit.is_nan() {
        spread
    } else {
        sigma_fit.max(spread)
    };
    Ok(ReplicateSummary {
        p0: mean,
        sigma,
        sigma_fit,
        spread,
        replicates: p,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeScaling {
    pub alpha: f64,
    /// Standard error of `alpha`; infinite for a two-point fit.
    pub sigma: f64,
    /// Prefactor `b` in `A_{1,n} = b n^α`.
    pub b: f64,
    pub warnings: Vec<String>,
}

/// Fits `ln A_{1,n} = ln b + α ln n` to the linear coefficients of a
/// crossing fit.
pub fn slope_scaling(fit: &FitResult) -> Result<SlopeScaling> {
    slope_scaling_points(&fit.slopes())
}

pub fn slope_scaling_points(points: &[(usize, f64)]) -> Result<SlopeScaling> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "slope scaling needs 2 sizes (got {})",
            points.len()
        )));
    }
    if let Some(&(n, a)) = points.iter().find(|(_, a)| !(*a > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "nonpositive slope {a} at n = {n}"
        )));
    }
    let mut warnings = Vec::new();
    let mut design = Dense::zeros(points.len(), 2);
    let mut rhs = Vec::new();
    for (r, &(n, a)) in points.iter().enumerate() {
        *design.at_mut(r, 0) = 1.0;
        *design.at_mut(r, 1) = math::ln(n as f64);
        rhs.push(math::ln(a));
    }
    let ls = least_squares(&design, &rhs)?;
    let sigma = if points.len() == 2 {
        warnings.push("two-point fit: alpha has no error estimate".into());
        f64::INFINITY
    } else {
        math::sqrt(ls.cov[3] * ls.residual / (points.len() - 2) as f64)
    };
    Ok(SlopeScaling {
        alpha: ls.coef[1],
        sigma,
        b: math::exp(ls.coef[0]),
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaFit {
    pub omega: f64,
    /// `(n, n^(-1/3), p)` where `S1(p) = ω n^(2/3)`.
    pub points: Vec<(usize, f64, f64)>,
    pub intercept: f64,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingResult {
    pub pc: f64,
    /// Spread of the per-ω intercepts; infinite when the data cannot be
    /// extrapolated.
    pub sigma: f64,
    pub infinite_uncertainty: bool,
    pub per_omega: Vec<OmegaFit>,
    pub warnings: Vec<String>,
}

/// First `p` where `values` reaches `target`, by linear interpolation between
/// grid points.
fn first_reach(p: &[f64], values: &[f64], target: f64) -> Option<f64> {
    let i = values.iter().position(|&v| v >= target)?;
    if i == 0 {
        return None;
    }
    let (v0, v1) = (values[i - 1], values[i]);
    Some(p[i - 1] + (p[i] - p[i - 1]) * (target - v0) / (v1 - v0))
}

/// Solves `S1(p) = ω n^(2/3)` for each curve (values are `S1` means) and
/// extrapolates `p` to `n^(-1/3) = 0` with a polynomial of `degree`.
pub fn size_scaling_extrapolate(
    curves: &[FitCurve],
    omegas: &[f64],
    degree: usize,
) -> Result<ScalingResult> {
    if curves.is_empty() || omegas.is_empty() {
        return Err(Error::InvalidParameter("need curves and omegas".into()));
    }
    let mut warnings = Vec::new();
    let mut per_omega = Vec::new();
    let mut single = false;
    for &omega in omegas {
        let mut points = Vec::new();
        for c in curves {
            let nf = c.n as f64;
            let target = omega * math::pow(nf, 2.0 / 3.0);
            match first_reach(&c.p, &c.value, target) {
                Some(p) => points.push((c.n, math::pow(nf, -1.0 / 3.0), p)),
                None => warnings.push(format!(
                    "n = {}: S1 does not reach {omega} n^(2/3) inside the grid",
                    c.n
                )),
            }
        }
        if points.is_empty() {
            warnings.push(format!("omega = {omega}: no graph reaches the target"));
            continue;
        }
        if points.len() == 1 {
            single = true;
            per_omega.push(OmegaFit {
                omega,
                intercept: points[0].2,
                points,
                degree: 0,
            });
            continue;
        }
        let deg = degree.min(points.len() - 1);
        if deg < degree {
            warnings.push(format!(
                "omega = {omega}: degree lowered to {deg} for {} sizes",
                points.len()
            ));
        }
        let mut design = Dense::zeros(points.len(), deg + 1);
        let mut rhs = Vec::new();
        for (r, &(_, x, p)) in points.iter().enumerate() {
            for c in 0..=deg {
                *design.at_mut(r, c) = math::powi(x, c as u32);
            }
            rhs.push(p);
        }
        let ls = least_squares(&design, &rhs)?;
        per_omega.push(OmegaFit {
            omega,
            intercept: ls.coef[0],
            points,
            degree: deg,
        });
    }
    if per_omega.is_empty() {
        return Err(Error::InvalidParameter(
            "no omega produced an estimate".into(),
        ));
    }
    let intercepts: Vec<f64> = per_omega.iter().map(|o| o.intercept).collect();
    let (pc, spread) = mean_sd(&intercepts);
    let infinite_uncertainty = single;
    let sigma = if infinite_uncertainty {
        f64::INFINITY
    } else {
        spread
    };
    if infinite_uncertainty {
        warnings.push("a single graph size cannot be extrapolated".into());
    }
    Ok(ScalingResult {
        pc,
        sigma,
        infinite_uncertainty,
        per_omega,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateReport {
    pub n: usize,
    /// First `p` where the erased rate exceeds `ε`.
    pub lower: Option<f64>,
    /// First `p` where it exceeds `R - ε`; only sought when `R - ε > ε`.
    pub upper: Option<f64>,
}

/// Per-graph first crossings of the erased rate (values are `R_E` means)
/// against `ε` and `rate - ε`, where `rate` is the asymptotic rate of the
/// family. Graphs with no crossing at all are left out.
pub fn rate_deviation_report(
    curves: &[FitCurve],
    rate: f64,
    epsilon: f64,
) -> Result<Vec<RateReport>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive (got {epsilon})"
        )));
    }
    let crossing = |c: &FitCurve, t: f64| {
        let i = c.value.iter().position(|&v| v > t)?;
        if i == 0 {
            return Some(c.p[0]);
        }
        let (v0, v1) = (c.value[i - 1], c.value[i]);
        Some(c.p[i - 1] + (c.p[i] - c.p[i - 1]) * (t - v0) / (v1 - v0))
    };
    Ok(curves
        .iter()
        .filter_map(|c| {
            let lower = crossing(c, epsilon);
            let upper = if rate - epsilon > epsilon {
                crossing(c, rate - epsilon)
            } else {
                None
            };
            (lower.is_some() || upper.is_some()).then_some(RateReport {
                n: c.n,
                lower,
                upper,
            })
        })
        .collect())
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, math::sqrt(v))
}

/// Brent's minimizer on `[a, b]` starting from `x0`.
fn brent_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, x0: f64, tol: f64) -> f64 {
    const GOLD: f64 = 0.381_966_011_250_105_1;
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut e) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let tol1 = tol + 1e-12 * math::abs(x);
        let tol2 = 2.0 * tol1;
        if math::abs(x - m) <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if math::abs(e) > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = math::abs(q);
            if math::abs(p) < math::abs(0.5 * q * e) && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLD * e;
        }
        let u = if math::abs(d) >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            (v, fv, w, fw, x, fx) = (w, fw, x, fx, u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv, w, fw) = (w, fw, u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect()
    }

    fn curve(n: usize, d: usize, p: &[f64], f: impl Fn(f64) -> f64) -> FitCurve {
        FitCurve {
            n,
            distance: d,
            p: p.to_vec(),
            value: p.iter().map(|&x| f(x)).collect(),
            se: vec![0.0; p.len()],
        }
    }

    #[test]
    fn brent_finds_parabola_minimum() {
        let x = brent_min(
            |x| (x - 0.123_456_7) * (x - 0.123_456_7) + 3.0,
            0.0,
            1.0,
            0.5,
            1e-12,
        );
        assert!((x - 0.123_456_7).abs() < 1e-9);
    }

    #[test]
    fn constructed_crossing() {
        let p = grid(0.2, 0.4, 201);
        let curves: Vec<FitCurve> = [(100, 1.0), (400, 2.0), (1600, 4.0)]
            .iter()
            .map(|&(n, s)| {
                curve(n, 0, &p, |x| {
                    0.5 + s * (x - 0.3) + 0.7 * (x - 0.3) * (x - 0.3)
                })
            })
            .collect();
        let fit = crossing_fit(&curves, 2, (0.25, 0.35), ShiftMode::Off).unwrap();
        assert!((fit.p0 - 0.3).abs() < 1e-6, "{}", fit.p0);
        assert!((fit.a0 - 0.5).abs() < 1e-9);
        assert!((fit.coefficients[2][0] - 4.0).abs() < 1e-6);
        let mut reversed = curves.clone();
        reversed.reverse();
        let back = crossing_fit(&reversed, 2, (0.25, 0.35), ShiftMode::Off).unwrap();
        assert!((back.p0 - fit.p0).abs() < 1e-9);
    }

    #[test]
    fn shift_is_recovered() {
        let p = grid(0.2, 0.3, 101);
        let b = -0.05;
        let curves: Vec<FitCurve> = [
            (60usize, 3usize, 1.0),
            (360, 5, 1.5),
            (1200, 6, 2.5),
            (4800, 8, 3.0),
        ]
        .iter()
        .map(|&(n, d, s)| {
            let shift = b * (n as f64).ln() / d as f64;
            curve(n, d, &p, move |x| 0.4 + shift + s * (x - 0.25))
        })
        .collect();
        let fit = crossing_fit(&curves, 1, (0.21, 0.29), ShiftMode::On).unwrap();
        assert!((fit.p0 - 0.25).abs() < 1e-6, "{}", fit.p0);
        assert!((fit.b.unwrap() - b).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_input() {
        let p = grid(0.0, 1.0, 11);
        let c = curve(10, 0, &p, |x| x);
        assert!(crossing_fit(core::slice::from_ref(&c), 1, (0.2, 0.8), ShiftMode::Off).is_err());
        assert!(crossing_fit(&[c.clone(), c.clone()], 1, (0.2, 1.5), ShiftMode::Off).is_err());
        assert!(crossing_fit(&[c.clone(), c], 1, (0.5, 0.5), ShiftMode::Off).is_err());
    }

    #[test]
    fn slope_power_law() {
        let pts: Vec<(usize, f64)> = [16usize, 64, 256, 1024]
            .iter()
            .map(|&n| (n, (n as f64).sqrt()))
            .collect();
        let s = slope_scaling_points(&pts).unwrap();
        assert!((s.alpha - 0.5).abs() < 1e-12);
        assert!((s.b - 1.0).abs() < 1e-10);
        let two = slope_scaling_points(&pts[..2]).unwrap();
        assert!(!two.warnings.is_empty() && two.sigma.is_infinite());
    }

    #[test]
    fn scaling_extrapolation_recovers_intercept() {
        let pc = 0.254;
        let p = grid(0.0, 1.0, 1001);
        let curves: Vec<FitCurve> = [500usize, 1000, 2000, 4000]
            .iter()
            .map(|&n| {
                let nf = n as f64;
                let x = nf.powf(-1.0 / 3.0);
                curve(n, 0, &p, move |q| {
                    nf.powf(2.0 / 3.0) * (0.5 + (q - pc) / (0.3 * x))
                })
            })
            .collect();
        let r = size_scaling_extrapolate(&curves, &[0.25, 0.5, 1.0], 1).unwrap();
        assert!((r.pc - pc).abs() < 1e-9, "{}", r.pc);
        assert!(!r.infinite_uncertainty);
        let single = size_scaling_extrapolate(&curves[..1], &[0.5], 1).unwrap();
        assert!(single.infinite_uncertainty && single.sigma.is_infinite());
    }

    #[test]
    fn rate_report() {
        let p = grid(0.0, 1.0, 101);
        let c = curve(100, 0, &p, |x| 0.2 * x);
        assert!(rate_deviation_report(core::slice::from_ref(&c), 0.0, 0.5)
            .unwrap()
            .is_empty());
        let r = rate_deviation_report(core::slice::from_ref(&c), 0.0, 0.01).unwrap();
        assert!((r[0].lower.unwrap() - 0.05).abs() < 1e-12 && r[0].upper.is_none());
        let r = rate_deviation_report(&[c], 0.2, 0.01).unwrap();
        let (lo, up) = (r[0].lower.unwrap(), r[0].upper.unwrap());
        assert!(lo < up && (up - 0.95).abs() < 1e-12);
    }

    #[test]
    fn replicate_spread_dominates() {
        let p = grid(0.2, 0.4, 201);
        let curves: Vec<FitCurve> = [1.0, 3.0]
            .iter()
            .map(|&s| curve(10, 0, &p, move |x| 0.5 + s * (x - 0.3)))
            .collect();
        let mut a = crossing_fit(&curves, 1, (0.25, 0.35), ShiftMode::Off).unwrap();
        let mut b = a.clone();
        a.p0 = 0.30;
        b.p0 = 0.31;
        a.sigma_fit = 1e-4;
        b.sigma_fit = 1e-4;
        let s = combine_replicates(&[a, b]).unwrap();
        assert!((s.p0 - 0.305).abs() < 1e-12);
        assert!((s.sigma - 0.01f64 / 2f64.sqrt()).abs() < 1e-12);
    }
}
