//! Convex-combination structure of moment curves: decompose the origin into
//! few curve points, check convex position, and build cyclic-group orbits.
//!
//! For a circle spectrum with s frequencies the curve lives in R^{2s}, so a
//! generic reduction stops at 2s+1 support points. The curve's rotational
//! symmetry allows s+1: dropping a point and re-solving the node positions
//! (coordinate descent on the parameters, weights re-optimized by LP) walks
//! the support down, and equispaced orbits give exact small decompositions
//! whenever no frequency is divisible by the orbit size.

use crate::error::{Error, Result};
use crate::linprog::{
    caratheodory_reduce, hull_membership, min_linf_combination, origin_in_hull, HullCertificate,
};
use crate::trig::{curve_points_circle, Spectrum};
use serde::{Deserialize, Serialize};

/// Convex combination of curve points reproducing the origin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveDecomposition {
    /// Circle parameters of the support, ascending.
    pub params: Vec<f64>,
    pub weights: Vec<f64>,
    /// `||sum_i w_i gamma(t_i)||_inf`.
    pub residual: f64,
    /// Length of the shortest closed arc containing the support.
    pub span_length: f64,
}

impl CurveDecomposition {
    pub fn support_size(&self) -> usize {
        self.params.len()
    }

    pub fn residual_for(&self, s: &Spectrum) -> Result<f64> {
        let pts = curve_points_circle(s, &self.params)?;
        Ok(combo_residual(&pts, &self.weights))
    }
}

fn combo_residual(points: &[Vec<f64>], weights: &[f64]) -> f64 {
    if points.is_empty() {
        return f64::INFINITY;
    }
    let d = points[0].len();
    let mut acc = vec![0.0; d];
    for (p, &w) in points.iter().zip(weights) {
        for (a, &v) in acc.iter_mut().zip(p) {
            *a += w * v;
        }
    }
    acc.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
}

/// Shortest closed arc covering a parameter set: one minus the largest
/// cyclic gap.
pub fn span_length(params: &[f64]) -> f64 {
    if params.len() <= 1 {
        return 0.0;
    }
    let mut sorted: Vec<f64> = params.iter().map(|t| t.rem_euclid(1.0)).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap = 0.0f64;
    for i in 0..sorted.len() {
        let next = if i + 1 == sorted.len() {
            sorted[0] + 1.0
        } else {
            sorted[i + 1]
        };
        max_gap = max_gap.max(next - sorted[i]);
    }
    1.0 - max_gap
}

const REFINE_ROUNDS: usize = 3;
const GOLDEN_ITERS: usize = 50;
const GOLDEN_WINDOW: f64 = 0.02;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Residual of the best simplex weights for fixed parameters.
fn best_residual(s: &Spectrum, params: &[f64]) -> Result<(Vec<f64>, f64)> {
    let pts = curve_points_circle(s, params)?;
    let (w, v) = min_linf_combination(&pts)?;
    Ok((w, v))
}

/// Golden-section descent of one parameter; returns the refined value.
fn golden_refine_coord(s: &Spectrum, params: &mut Vec<f64>, i: usize) -> Result<()> {
    let center = params[i];
    let mut lo = center - GOLDEN_WINDOW;
    let mut hi = center + GOLDEN_WINDOW;
    let eval = |params: &mut Vec<f64>, t: f64, s: &Spectrum| -> Result<f64> {
        params[i] = t;
        Ok(best_residual(s, params)?.1)
    };
    let mut a = hi - (hi - lo) * INV_PHI;
    let mut b = lo + (hi - lo) * INV_PHI;
    let mut fa = eval(params, a, s)?;
    let mut fb = eval(params, b, s)?;
    for _ in 0..GOLDEN_ITERS {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - (hi - lo) * INV_PHI;
            fa = eval(params, a, s)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + (hi - lo) * INV_PHI;
            fb = eval(params, b, s)?;
        }
    }
    let best = if fa <= fb { a } else { b };
    let center_res = eval(params, center, s)?;
    let best_res = if fa <= fb { fa } else { fb };
    params[i] = if best_res < center_res { best } else { center };
    Ok(())
}

fn refine(s: &Spectrum, params: &mut Vec<f64>) -> Result<(Vec<f64>, f64)> {
    for _ in 0..REFINE_ROUNDS {
        for i in 0..params.len() {
            golden_refine_coord(s, params, i)?;
        }
    }
    best_residual(s, params)
}

/// Decompose the origin as a convex combination of curve points.
///
/// Pipeline: uniform sample, hull LP, Caratheodory reduction, parameter
/// refinement, drop-and-repair support reduction, and an equispaced-orbit
/// fallback. For the spectrum {1,...,d} the support target d+1 is asserted.
pub fn decompose_origin(s: &Spectrum, sample_size: usize) -> Result<CurveDecomposition> {
    if s.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: s.n(),
        });
    }
    let min_size = 4 * s.len() + 4;
    if sample_size < min_size {
        return Err(Error::InvalidInput(format!(
            "sample_size {sample_size} below required {min_size}"
        )));
    }
    // The uniform m-grid only has exact zero mean when no frequency is a
    // multiple of m.
    let mut m = sample_size;
    while s
        .freqs()
        .iter()
        .any(|f| (f.entries()[0] as usize).is_multiple_of(m))
    {
        m += 1;
    }
    let grid: Vec<f64> = (0..m).map(|j| j as f64 / m as f64).collect();
    let pts = curve_points_circle(s, &grid)?;
    let cert = origin_in_hull(&pts, 1e-9)?;
    let HullCertificate::Inside { weights, .. } = cert else {
        return Err(Error::InvalidInput(
            "origin not in the hull of the curve sample".into(),
        ));
    };
    let (idx, _) = caratheodory_reduce(&pts, &weights, None)?;
    let mut params: Vec<f64> = idx.iter().map(|&i| grid[i]).collect();

    let target = s.len() + 1;
    let (mut weights, mut residual) = refine(s, &mut params)?;

    // Drop-and-repair: remove the lightest point, re-refine the rest, keep
    // the removal when the residual stays essentially zero.
    while params.len() > target {
        let mut order: Vec<usize> = (0..params.len()).collect();
        order.sort_by(|&a, &b| weights[a].partial_cmp(&weights[b]).unwrap());
        let mut improved = false;
        for &cand in &order {
            let mut trial: Vec<f64> = params
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != cand)
                .map(|(_, &t)| t)
                .collect();
            let (tw, tres) = refine(s, &mut trial)?;
            if tres <= 1e-10 {
                params = trial;
                weights = tw;
                residual = tres;
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }

    // Second reduction pass on the refined support.
    let pts = curve_points_circle(s, &params)?;
    if combo_residual(&pts, &weights) <= 1e-9 {
        if let Ok((idx, w)) = caratheodory_reduce(&pts, &weights, None) {
            params = idx.iter().map(|&i| params[i]).collect();
            weights = w;
            residual = {
                let pts = curve_points_circle(s, &params)?;
                combo_residual(&pts, &weights)
            };
        }
    }

    // Equispaced orbits kill every frequency not divisible by the orbit
    // size; use the smallest valid orbit if it beats the search.
    for orbit in 2..=(2 * s.len() + 1) {
        if orbit >= params.len() {
            break;
        }
        let valid = s
            .freqs()
            .iter()
            .all(|f| !(f.entries()[0] as usize).is_multiple_of(orbit));
        if valid {
            let cand: Vec<f64> = (0..orbit).map(|j| j as f64 / orbit as f64).collect();
            let cand_pts = curve_points_circle(s, &cand)?;
            let w = vec![1.0 / orbit as f64; orbit];
            let res = combo_residual(&cand_pts, &w);
            if res <= 1e-10 {
                params = cand;
                weights = w;
                residual = res;
                break;
            }
        }
    }

    if s.is_initial_segment() && params.len() > target {
        return Err(Error::ReductionStalled {
            support: params.len(),
            target,
        });
    }
    if residual > 1e-8 {
        return Err(Error::ResidualTooLarge {
            residual,
            bound: 1e-8,
        });
    }

    // Sort support ascending, weights aligned.
    let mut pairs: Vec<(f64, f64)> = params
        .iter()
        .map(|t| t.rem_euclid(1.0))
        .zip(weights.iter().copied())
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let params: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();

    Ok(CurveDecomposition {
        span_length: span_length(&params),
        residual,
        params,
        weights,
    })
}

/// Convex-position report: every point strictly separated from the hull of
/// the others, or the index of the first point inside.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexPositionReport {
    pub convex: bool,
    pub violating_index: Option<usize>,
}

/// One hull LP per point.
pub fn convex_position_check(points: &[Vec<f64>]) -> Result<ConvexPositionReport> {
    if points.len() < 2 {
        return Err(Error::InvalidInput(
            "convex position needs at least 2 points".into(),
        ));
    }
    for i in 0..points.len() {
        let others: Vec<Vec<f64>> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        if hull_membership(&others, Some(&points[i]), 1e-9)?.is_inside() {
            return Ok(ConvexPositionReport {
                convex: false,
                violating_index: Some(i),
            });
        }
    }
    Ok(ConvexPositionReport {
        convex: true,
        violating_index: None,
    })
}

/// A cyclic orbit on the moment curve of {1, ..., d}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitPoints {
    /// `gamma_d(j/p)` for j = 0..p-1, each in R^{2d}.
    pub points: Vec<Vec<f64>>,
    /// Max distance from a dense curve sample to the nearest orbit point.
    pub epsilon: f64,
    /// Set when p is below the recommended 4d+1.
    pub below_recommended_p: bool,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The p-point orbit of the rotation t -> t + 1/p on the moment curve of
/// {1, ..., d}, with its covering radius of the curve.
///
/// Asserts convex position and freeness (no point fixed by the rotation).
pub fn zp_orbit_points(d: u32, p: u64) -> Result<OrbitPoints> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let s = Spectrum::initial_segment(d)?;
    let params: Vec<f64> = (0..p).map(|j| j as f64 / p as f64).collect();
    let points = curve_points_circle(&s, &params)?;

    // Freeness shadow: the rotation moves every orbit point.
    for j in 0..p as usize {
        let next = (j + 1) % p as usize;
        let dist: f64 = points[j]
            .iter()
            .zip(&points[next])
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dist <= 1e-12 {
            return Err(Error::InvalidInput(format!(
                "rotation fixes orbit point {j}: p={p} collapses a frequency"
            )));
        }
    }
    if p >= 2 {
        let report = convex_position_check(&points)?;
        if !report.convex {
            return Err(Error::InvalidInput(format!(
                "orbit points not in convex position (index {:?})",
                report.violating_index
            )));
        }
    }

    // Covering radius over a dense curve sample.
    let dense = 4096usize;
    let mut epsilon = 0.0f64;
    for i in 0..dense {
        let t = i as f64 / dense as f64;
        let g = curve_points_circle(&s, &[t])?.remove(0);
        let mut best = f64::INFINITY;
        for q in &points {
            let dist: f64 = g
                .iter()
                .zip(q)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            best = best.min(dist);
        }
        epsilon = epsilon.max(best);
    }

    Ok(OrbitPoints {
        points,
        epsilon,
        below_recommended_p: p < 4 * d as u64 + 1,
    })
}
