//! Search and verification for the zero-distribution phenomena: positivity
//! witnesses on intervals and balls, the phase-transition interval length,
//! minimum-diameter sign-change sets, and direct root finding.
//!
//! Grid positivity over-approximates true positivity: a function positive on
//! a region is positive on any finite sample of it, so thresholds measured
//! on grids carry a one-sided +O(1/grid) bias. Witnesses are therefore
//! re-verified on a finer grid, and the constructions escalate resolution
//! before giving up.

use crate::error::{Error, Result};
use crate::linprog::{self, caratheodory_reduce, origin_in_hull, HullCertificate};
use crate::trig::{
    circle_distance, curve_point, curve_points_circle, GeodesicBall, Interval, Region, Spectrum,
    TorusPoint, TrigPoly,
};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Coefficients positive on a region, with the margin re-measured on a
/// verification grid at least 4x finer than the construction grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositivityWitness {
    pub coeffs: Vec<f64>,
    pub region: Region,
    /// Minimum of the witness over the verification grid.
    pub margin: f64,
    pub grid_resolution: usize,
    pub verification_resolution: usize,
}

/// Finite support certifying that every function in the space changes sign:
/// nonnegative weights summing to 1 whose weighted curve points cancel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignChangeCertificate {
    pub support: Vec<TorusPoint>,
    pub weights: Vec<f64>,
    pub diameter: f64,
    pub residual: f64,
}

impl SignChangeCertificate {
    /// Recompute the cancellation residual for a given spectrum.
    pub fn residual_for(&self, s: &Spectrum) -> Result<f64> {
        let pts = self
            .support
            .iter()
            .map(|x| curve_point(s, x))
            .collect::<Result<Vec<_>>>()?;
        let d = s.ambient_dim();
        let mut acc = vec![0.0; d];
        for (p, &w) in pts.iter().zip(&self.weights) {
            for (a, &v) in acc.iter_mut().zip(p) {
                *a += w * v;
            }
        }
        Ok(acc.iter().fold(0.0f64, |m, &v| m.max(v.abs())))
    }

    pub fn max_pairwise_distance(&self) -> Result<f64> {
        let mut best = 0.0f64;
        for i in 0..self.support.len() {
            for j in (i + 1)..self.support.len() {
                best = best.max(crate::trig::torus_distance(
                    &self.support[i],
                    &self.support[j],
                )?);
            }
        }
        Ok(best)
    }
}

/// Result of a positivity search on a region.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum PositivityOutcome {
    Feasible {
        witness: PositivityWitness,
    },
    /// No witness at the requested margin; the certificate relayed from the
    /// hull LP (weights are indexed by the construction sample, which is
    /// reconstructible from the region and grid resolution).
    Infeasible {
        certificate: HullCertificate,
        region: Region,
        grid_resolution: usize,
    },
    /// Witness found on the construction grid but never survived
    /// verification, even after escalating resolution.
    Indeterminate {
        attempts: usize,
        last_margin: f64,
    },
}

impl PositivityOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PositivityOutcome::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, PositivityOutcome::Infeasible { .. })
    }
}

/// Tunables for the witness searches.
#[derive(Debug, Clone)]
pub struct WitnessOptions {
    /// Requested LP margin. Acts as the guard band against weakly-positive
    /// functions whose tangential zeros leak O(1/grid^2) positives through a
    /// finite sample; must stay well above that leak and well below the
    /// margins of honestly-feasible instances.
    pub margin: f64,
    /// Construction grid: points per unit length (n = 1) or per axis.
    pub grid_resolution: usize,
    /// Verification grid refinement factor.
    pub verification_factor: usize,
    /// Resolution doublings before reporting Indeterminate.
    pub max_retries: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self {
            margin: 1e-3,
            grid_resolution: 2048,
            verification_factor: 4,
            max_retries: 3,
        }
    }
}

impl WitnessOptions {
    /// Defaults for per-axis grids on the torus.
    pub fn torus_default() -> Self {
        Self {
            grid_resolution: 64,
            ..Self::default()
        }
    }
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Sign-scan an interval grid and bisect each bracketing pair to 1e-12.
/// Exact grid zeros are included; tangential zeros that do not change sign
/// at the given resolution may be missed.
pub fn find_zeros(f: &TrigPoly, region: &Interval, resolution: usize) -> Result<Vec<f64>> {
    if f.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: f.n(),
        });
    }
    if resolution == 0 {
        return Err(Error::InvalidInput("resolution must be positive".into()));
    }
    let full_circle = region.length >= 1.0 - 1e-15;
    // Unreduced parameters so the scan is monotone across the seam.
    let mut params: Vec<f64> = if full_circle {
        (0..resolution)
            .map(|j| region.start + j as f64 / resolution as f64)
            .collect()
    } else {
        (0..=resolution)
            .map(|j| region.start + region.length * j as f64 / resolution as f64)
            .collect()
    };
    if full_circle {
        params.push(region.start + 1.0);
    }
    let eval = |t: f64| f.evaluate(&TorusPoint::circle(t));
    let values = params
        .iter()
        .map(|&t| eval(t))
        .collect::<Result<Vec<f64>>>()?;

    let mut zeros: Vec<f64> = Vec::new();
    for (&t, &v) in params.iter().zip(&values) {
        if v == 0.0 {
            zeros.push(t);
        }
    }
    for w in 0..params.len() - 1 {
        let (a, b) = (params[w], params[w + 1]);
        let (fa, fb) = (values[w], values[w + 1]);
        if fa == 0.0 || fb == 0.0 {
            continue;
        }
        if fa.signum() * fb.signum() < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let fm = eval(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
    }
    let mut zeros: Vec<f64> = zeros.into_iter().map(|t| t.rem_euclid(1.0)).collect();
    zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
    zeros.dedup_by(|a, b| circle_distance(*a, *b) < 1e-9);
    // Seam duplicates (0 vs 1-eps) may survive the linear dedup.
    if zeros.len() > 1 && circle_distance(zeros[0], *zeros.last().unwrap()) < 1e-9 {
        zeros.pop();
    }
    Ok(zeros)
}

// ---------------------------------------------------------------------------
// Region positivity
// ---------------------------------------------------------------------------

/// The deterministic construction sample for a region at a resolution;
/// used by certificate re-validation to rebuild LP samples.
pub fn region_sample(region: &Region, resolution: usize) -> Result<Vec<TorusPoint>> {
    match region {
        Region::Interval(iv) => Ok(interval_sample(iv, resolution)),
        Region::Ball(ball) => ball_sample(ball, resolution),
    }
}

fn interval_sample(interval: &Interval, resolution: usize) -> Vec<TorusPoint> {
    interval
        .grid(resolution)
        .into_iter()
        .map(TorusPoint::circle)
        .collect()
}

fn ball_sample(ball: &GeodesicBall, per_axis: usize) -> Result<Vec<TorusPoint>> {
    let n = ball.center.dim();
    let total = (per_axis as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > 20_000_000 {
        return Err(Error::SizeCap {
            got: total,
            cap: 20_000_000,
        });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let x = TorusPoint::new(idx.iter().map(|&j| j as f64 / per_axis as f64).collect());
        if ball.contains(&x)? {
            out.push(x);
        }
        let mut carry = true;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < per_axis {
                carry = false;
                break;
            }
            *slot = 0;
        }
        if carry {
            break;
        }
    }
    Ok(out)
}

fn positivity_on_sample(
    s: &Spectrum,
    region: &Region,
    sample: &[TorusPoint],
    fine: &[TorusPoint],
    margin: f64,
    resolution: usize,
    fine_resolution: usize,
) -> Result<PositivityStep> {
    let points = sample
        .iter()
        .map(|x| curve_point(s, x))
        .collect::<Result<Vec<_>>>()?;
    let (pos, hull) = linprog::strict_positivity_full(&points, margin)?;
    match pos.witness {
        None => Ok(PositivityStep::Done(PositivityOutcome::Infeasible {
            certificate: hull,
            region: region.clone(),
            grid_resolution: resolution,
        })),
        Some(coeffs) => {
            let mut vmin = f64::INFINITY;
            for x in fine {
                let g = curve_point(s, x)?;
                let v: f64 = g.iter().zip(&coeffs).map(|(&a, &b)| a * b).sum();
                vmin = vmin.min(v);
            }
            if vmin > 0.0 {
                Ok(PositivityStep::Done(PositivityOutcome::Feasible {
                    witness: PositivityWitness {
                        coeffs,
                        region: region.clone(),
                        margin: vmin,
                        grid_resolution: resolution,
                        verification_resolution: fine_resolution,
                    },
                }))
            } else {
                Ok(PositivityStep::VerificationFailed { last_margin: vmin })
            }
        }
    }
}

enum PositivityStep {
    Done(PositivityOutcome),
    VerificationFailed { last_margin: f64 },
}

/// Positivity witness search on a closed interval (circle spectra only).
pub fn interval_positivity(
    s: &Spectrum,
    interval: &Interval,
    grid_resolution: usize,
    margin: f64,
) -> Result<PositivityOutcome> {
    interval_positivity_with(
        s,
        interval,
        &WitnessOptions {
            grid_resolution,
            margin,
            ..WitnessOptions::default()
        },
    )
}

pub fn interval_positivity_with(
    s: &Spectrum,
    interval: &Interval,
    opts: &WitnessOptions,
) -> Result<PositivityOutcome> {
    if s.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: s.n(),
        });
    }
    let mut res = opts.grid_resolution.max(2);
    for attempt in 0..=opts.max_retries {
        let sample = interval_sample(interval, res);
        let fine = interval_sample(interval, res * opts.verification_factor);
        match positivity_on_sample(
            s,
            &Region::Interval(*interval),
            &sample,
            &fine,
            opts.margin,
            res,
            res * opts.verification_factor,
        )? {
            PositivityStep::Done(out) => return Ok(out),
            PositivityStep::VerificationFailed { last_margin } => {
                if attempt == opts.max_retries {
                    return Ok(PositivityOutcome::Indeterminate {
                        attempts: attempt + 1,
                        last_margin,
                    });
                }
                res *= 2;
            }
        }
    }
    unreachable!()
}

/// Positivity witness search on a closed geodesic ball, sampled by rejection
/// from the per-axis product grid.
pub fn ball_positivity(
    s: &Spectrum,
    ball: &GeodesicBall,
    grid_resolution_per_axis: usize,
    margin: f64,
) -> Result<PositivityOutcome> {
    ball_positivity_with(
        s,
        ball,
        &WitnessOptions {
            grid_resolution: grid_resolution_per_axis,
            margin,
            ..WitnessOptions::torus_default()
        },
    )
}

pub fn ball_positivity_with(
    s: &Spectrum,
    ball: &GeodesicBall,
    opts: &WitnessOptions,
) -> Result<PositivityOutcome> {
    if s.n() != ball.center.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            got: ball.center.dim(),
        });
    }
    let mut res = opts.grid_resolution.max(2);
    for attempt in 0..=opts.max_retries {
        let sample = ball_sample(ball, res)?;
        if sample.is_empty() {
            return Err(Error::EmptySample(format!(
                "ball of radius {} captures no grid point at resolution {res}",
                ball.radius
            )));
        }
        let fine = ball_sample(ball, res * opts.verification_factor)?;
        match positivity_on_sample(
            s,
            &Region::Ball(ball.clone()),
            &sample,
            &fine,
            opts.margin,
            res,
            res * opts.verification_factor,
        )? {
            PositivityStep::Done(out) => return Ok(out),
            PositivityStep::VerificationFailed { last_margin } => {
                if attempt == opts.max_retries {
                    return Ok(PositivityOutcome::Indeterminate {
                        attempts: attempt + 1,
                        last_margin,
                    });
                }
                res *= 2;
            }
        }
    }
    unreachable!()
}

// ---------------------------------------------------------------------------
// Phase transition over interval length
// ---------------------------------------------------------------------------

/// One bisection probe (timing is reported for sweep CSVs only and is not
/// part of the serialized record).
#[derive(Debug, Clone)]
pub struct ThresholdProbe {
    pub length: f64,
    pub verdict: String,
    pub margin_or_residual: f64,
    pub wall_ms: u64,
}

/// Bisection record for the critical interval length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdRecord {
    /// Midpoint of the final bracket.
    pub length: f64,
    /// Largest length with a verified witness.
    pub feasible_below: f64,
    /// Smallest length certified infeasible on the grid.
    pub infeasible_above: f64,
    pub tol: f64,
    pub grid_resolution: usize,
    pub margin: f64,
    /// One-sided discretization bias: grid feasibility over-approximates
    /// true feasibility, so the transition can sit up to this much below
    /// the reported value.
    pub grid_bias: f64,
    /// Probes that came back Indeterminate and were counted infeasible.
    pub indeterminate_probes: usize,
    /// Bisection trace, in probe order.
    #[serde(skip)]
    pub probes: Vec<ThresholdProbe>,
}

/// Locate the phase-transition interval length for a circle spectrum by
/// bisection of `interval_positivity` on the base interval `[0, L]`.
/// For orbit spectra all intervals of a given length are equivalent up to
/// rotation, so the base interval suffices; for other spectra the result
/// describes the base position only (see `rotation sweeps` for the rest).
pub fn babenko_threshold(s: &Spectrum, tol: f64) -> Result<ThresholdRecord> {
    babenko_threshold_with(s, tol, &WitnessOptions::default())
}

pub fn babenko_threshold_with(
    s: &Spectrum,
    tol: f64,
    opts: &WitnessOptions,
) -> Result<ThresholdRecord> {
    if s.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: s.n(),
        });
    }
    let grid = opts.grid_resolution;
    if tol < 2.0 / grid as f64 {
        return Err(Error::InvalidInput(format!(
            "tol {tol} below grid quantum {}",
            2.0 / grid as f64
        )));
    }
    let mut indeterminate = 0usize;
    let mut probes: Vec<ThresholdProbe> = Vec::new();
    let mut probe = |length: f64| -> Result<bool> {
        let t0 = std::time::Instant::now();
        let iv = Interval::new(0.0, length)?;
        let out = interval_positivity_with(s, &iv, opts)?;
        let wall_ms = t0.elapsed().as_millis() as u64;
        let (feasible, verdict, value) = match &out {
            PositivityOutcome::Feasible { witness } => (true, "feasible", witness.margin),
            PositivityOutcome::Infeasible { certificate, .. } => {
                (false, "infeasible", certificate.residual())
            }
            PositivityOutcome::Indeterminate { last_margin, .. } => {
                indeterminate += 1;
                (false, "indeterminate", *last_margin)
            }
        };
        probes.push(ThresholdProbe {
            length,
            verdict: verdict.to_string(),
            margin_or_residual: value,
            wall_ms,
        });
        Ok(feasible)
    };
    if probe(1.0)? {
        return Err(Error::NoTransition);
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdRecord {
        length: 0.5 * (lo + hi),
        feasible_below: lo,
        infeasible_above: hi,
        tol,
        grid_resolution: grid,
        margin: opts.margin,
        grid_bias: 2.0 / grid as f64,
        indeterminate_probes: indeterminate,
        probes,
    })
}

// ---------------------------------------------------------------------------
// Minimum-diameter sign-change sets
// ---------------------------------------------------------------------------

/// Search result for the smallest diameter admitting a sign-change set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiameterSearch {
    pub certificate: SignChangeCertificate,
    /// Smallest grid diameter admitting a certificate.
    pub feasible_diameter: f64,
    /// Largest grid diameter proven infeasible (every maximal clique of the
    /// distance graph is strictly separated).
    pub infeasible_diameter: f64,
    pub grid_size: usize,
    /// True when a search budget was exhausted and the bracket is only
    /// best-known.
    pub indeterminate: bool,
}

struct CliqueSearch<'a> {
    n: usize,
    adj: Vec<u128>,
    curve: &'a [Vec<f64>],
    node_budget: usize,
    nodes: usize,
    truncated: bool,
    seen: HashSet<Vec<u16>>,
    found: Option<(Vec<usize>, Vec<f64>)>,
    lp_tol: f64,
}

impl<'a> CliqueSearch<'a> {
    fn hop_dist(n: usize, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        d.min(n - d)
    }

    fn new(n: usize, w: usize, curve: &'a [Vec<f64>], node_budget: usize) -> Self {
        let mut adj = vec![0u128; n];
        for a in 0..n {
            for b in 0..n {
                if a != b && Self::hop_dist(n, a, b) <= w {
                    adj[a] |= 1u128 << b;
                }
            }
        }
        Self {
            n,
            adj,
            curve,
            node_budget,
            nodes: 0,
            truncated: false,
            seen: HashSet::new(),
            found: None,
            lp_tol: 1e-9,
        }
    }

    fn vertices(mask: u128) -> Vec<usize> {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            out.push(v);
            m &= m - 1;
        }
        out
    }

    /// Lexicographically minimal rotation of the cyclic gap sequence, which
    /// identifies the rotation class of a vertex set.
    fn canonical_key(&self, verts: &[usize]) -> Vec<u16> {
        let m = verts.len();
        if m == 1 {
            return vec![self.n as u16];
        }
        let mut gaps: Vec<u16> = (0..m)
            .map(|i| {
                let a = verts[i];
                let b = verts[(i + 1) % m];
                (((b + self.n) - a) % self.n) as u16
            })
            .collect();
        let mut best = gaps.clone();
        for _ in 1..m {
            gaps.rotate_left(1);
            if gaps < best {
                best = gaps.clone();
            }
        }
        best
    }

    /// LP membership test; populates `found` on success and returns true.
    fn test_clique(&mut self, verts: &[usize]) -> Result<bool> {
        let pts: Vec<Vec<f64>> = verts.iter().map(|&v| self.curve[v].clone()).collect();
        match origin_in_hull(&pts, self.lp_tol)? {
            HullCertificate::Inside { weights, .. } => {
                self.found = Some((verts.to_vec(), weights));
                Ok(true)
            }
            HullCertificate::Separated { .. } => Ok(false),
        }
    }

    fn visit(&mut self, mask: u128) -> Result<bool> {
        let verts = Self::vertices(mask);
        let key = self.canonical_key(&verts);
        if !self.seen.insert(key) {
            return Ok(false);
        }
        self.test_clique(&verts)
    }

    /// Bron-Kerbosch with pivoting over the maximal cliques containing
    /// vertex 0 (every rotation class of maximal cliques has such a member,
    /// and hull membership is invariant under grid rotations because the
    /// curve transforms by a linear isomorphism fixing the origin).
    fn search(&mut self) -> Result<()> {
        let p = self.adj[0];
        self.bk(1u128, p, 0u128)?;
        Ok(())
    }

    fn bk(&mut self, r: u128, p: u128, x: u128) -> Result<bool> {
        if self.found.is_some() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.truncated = true;
            return Ok(true);
        }
        if p == 0 && x == 0 {
            return self.visit(r);
        }
        // Pivot: maximize |P & N(u)| over P | X, ties to the lowest index.
        let pux = p | x;
        let mut pivot = usize::MAX;
        let mut best = -1i64;
        let mut m = pux;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            let c = (p & self.adj[u]).count_ones() as i64;
            if c > best {
                best = c;
                pivot = u;
            }
            m &= m - 1;
        }
        let mut p = p;
        let mut x = x;
        let mut cand = p & !self.adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let vbit = 1u128 << v;
            cand &= cand - 1;
            if self.bk(r | vbit, p & self.adj[v], x & self.adj[v])? {
                return Ok(true);
            }
            p &= !vbit;
            x |= vbit;
            cand &= p;
        }
        Ok(false)
    }

    fn is_clique(&self, verts: &[usize]) -> bool {
        for (i, &a) in verts.iter().enumerate() {
            for &b in &verts[i + 1..] {
                if self.adj[a] & (1u128 << b) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Greedy maximal extension in ascending vertex order.
    fn extend_to_maximal(&self, verts: &[usize]) -> Vec<usize> {
        let mut mask: u128 = 0;
        for &v in verts {
            mask |= 1u128 << v;
        }
        let mut common: u128 = !0;
        for &v in verts {
            common &= self.adj[v];
        }
        common &= (1u128 << self.n) - 1;
        common &= !mask;
        while common != 0 {
            let v = common.trailing_zeros() as usize;
            mask |= 1u128 << v;
            common &= self.adj[v];
        }
        Self::vertices(mask)
    }
}

/// Regular m-gon vertex sets snapped to the grid; the known optimum for
/// raked spectra has this shape, so they are tried before enumeration.
fn polygon_seeds(n: usize, max_m: usize) -> Vec<Vec<usize>> {
    let mut seeds = Vec::new();
    for m in 2..=max_m.min(n) {
        let mut verts: Vec<usize> = (0..m)
            .map(|j| ((j * n) as f64 / m as f64).round() as usize % n)
            .collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() >= 2 {
            seeds.push(verts);
        }
    }
    seeds
}

/// Bisect the diameter of uniform-grid subsets on which the whole function
/// space changes sign. For each candidate diameter the inclusion-maximal
/// cliques of the circular distance graph are enumerated and tested with
/// the hull LP; monotonicity in the diameter drives the bisection.
pub fn min_diameter_sign_change(
    s: &Spectrum,
    tol: f64,
    grid_size: usize,
) -> Result<DiameterSearch> {
    min_diameter_sign_change_with(s, tol, grid_size, 3_000_000)
}

pub fn min_diameter_sign_change_with(
    s: &Spectrum,
    tol: f64,
    grid_size: usize,
    node_budget: usize,
) -> Result<DiameterSearch> {
    if s.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: s.n(),
        });
    }
    if !(3..=120).contains(&grid_size) {
        return Err(Error::InvalidInput(format!(
            "grid_size {grid_size} outside the supported range 3..=120"
        )));
    }
    for f in s.freqs() {
        if (f.entries()[0] as usize).is_multiple_of(grid_size) {
            return Err(Error::InvalidInput(format!(
                "frequency {} collapses on a grid of size {grid_size}",
                f.entries()[0]
            )));
        }
    }
    let n = grid_size;
    let params: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
    let curve = curve_points_circle(s, &params)?;
    let seeds = polygon_seeds(n, s.ambient_dim() + 3);

    let mut truncated_any = false;
    let mut level = |w: usize| -> Result<Option<(Vec<usize>, Vec<f64>)>> {
        let mut search = CliqueSearch::new(n, w, &curve, node_budget);
        for seed in &seeds {
            if search.is_clique(seed) {
                let maximal = search.extend_to_maximal(seed);
                if search.test_clique(&maximal)? {
                    return Ok(search.found);
                }
            }
        }
        search.search()?;
        if search.truncated {
            truncated_any = true;
        }
        Ok(search.found)
    };

    let mut w_hi = n / 2;
    let mut best = match level(w_hi)? {
        Some(hit) => hit,
        None => return Err(Error::NoTransition),
    };
    let mut w_lo = 0usize;
    debug_assert!(level(0)?.is_none());
    while w_hi - w_lo > 1 && (w_hi - w_lo) as f64 / n as f64 > tol.max(0.0) {
        let mid = (w_lo + w_hi) / 2;
        match level(mid)? {
            Some(hit) => {
                best = hit;
                w_hi = mid;
            }
            None => {
                w_lo = mid;
            }
        }
    }

    let (verts, raw_weights) = best;
    let support_params: Vec<f64> = verts.iter().map(|&v| params[v]).collect();
    let pts = curve_points_circle(s, &support_params)?;
    let (keep, weights) = caratheodory_reduce(&pts, &raw_weights, None)?;
    let support: Vec<TorusPoint> = keep
        .iter()
        .map(|&i| TorusPoint::circle(support_params[i]))
        .collect();
    let mut cert = SignChangeCertificate {
        support,
        weights,
        diameter: 0.0,
        residual: 0.0,
    };
    cert.diameter = cert.max_pairwise_distance()?;
    cert.residual = cert.residual_for(s)?;
    if cert.residual > 1e-8 {
        return Err(Error::ResidualTooLarge {
            residual: cert.residual,
            bound: 1e-8,
        });
    }

    Ok(DiameterSearch {
        certificate: cert,
        feasible_diameter: w_hi as f64 / n as f64,
        infeasible_diameter: w_lo as f64 / n as f64,
        grid_size: n,
        indeterminate: truncated_any,
    })
}

/// Sign-change view of an Inside certificate over a known sample: keeps the
/// supported points and renormalizes.
pub fn sign_change_from_inside(
    s: &Spectrum,
    sample: &[TorusPoint],
    cert: &HullCertificate,
) -> Result<SignChangeCertificate> {
    let HullCertificate::Inside { weights, .. } = cert else {
        return Err(Error::InvalidInput("expected an inside certificate".into()));
    };
    if weights.len() != sample.len() {
        return Err(Error::DimensionMismatch {
            expected: sample.len(),
            got: weights.len(),
        });
    }
    let mut support = Vec::new();
    let mut w = Vec::new();
    for (x, &wi) in sample.iter().zip(weights) {
        if wi > 1e-14 {
            support.push(x.clone());
            w.push(wi);
        }
    }
    let sum: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= sum;
    }
    let mut cert = SignChangeCertificate {
        support,
        weights: w,
        diameter: 0.0,
        residual: 0.0,
    };
    cert.diameter = cert.max_pairwise_distance()?;
    cert.residual = cert.residual_for(s)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::Frequency;

    fn sine() -> TrigPoly {
        TrigPoly::new(1, vec![(Frequency::new(vec![1]).unwrap(), 0.0, 1.0)]).unwrap()
    }

    #[test]
    fn zeros_of_sine_on_circle() {
        let z = find_zeros(&sine(), &Interval::new(0.0, 1.0).unwrap(), 64).unwrap();
        assert_eq!(z.len(), 2, "{z:?}");
        assert!(z[0].abs() < 1e-9);
        assert!((z[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zeros_of_cos_two_t() {
        let f = TrigPoly::new(1, vec![(Frequency::new(vec![2]).unwrap(), 1.0, 0.0)]).unwrap();
        let z = find_zeros(&f, &Interval::new(0.0, 0.5).unwrap(), 64).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] - 0.125).abs() < 1e-9);
        assert!((z[1] - 0.375).abs() < 1e-9);
    }

    #[test]
    fn zero_at_half_with_harmonic() {
        let f = TrigPoly::new(
            1,
            vec![
                (Frequency::new(vec![1]).unwrap(), 0.0, 1.0),
                (Frequency::new(vec![3]).unwrap(), 0.0, 0.1),
            ],
        )
        .unwrap();
        let z = find_zeros(&f, &Interval::new(0.4, 0.2).unwrap(), 64).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn sine_positive_on_open_half() {
        let s = Spectrum::circle(&[1]).unwrap();
        let iv = Interval::new(0.05, 0.4).unwrap();
        let out = interval_positivity(&s, &iv, 100, 1e-3).unwrap();
        let PositivityOutcome::Feasible { witness } = out else {
            panic!("expected feasible");
        };
        assert!(witness.margin > 0.0);
        // Dense re-check of the returned coefficients.
        let f = TrigPoly::from_curve_coeffs(&s, &witness.coeffs).unwrap();
        for j in 0..=2000 {
            let t = 0.05 + 0.4 * j as f64 / 2000.0;
            assert!(f.evaluate(&TorusPoint::circle(t)).unwrap() > 0.0);
        }
    }

    #[test]
    fn closed_half_circle_infeasible() {
        let s = Spectrum::circle(&[1]).unwrap();
        let iv = Interval::new(0.0, 0.5).unwrap();
        let out = interval_positivity(&s, &iv, 100, 1e-6).unwrap();
        assert!(out.is_infeasible());
    }

    #[test]
    fn whole_torus_infeasible() {
        let s = Spectrum::new(
            2,
            vec![
                Frequency::new(vec![1, 0]).unwrap(),
                Frequency::new(vec![0, 1]).unwrap(),
            ],
        )
        .unwrap();
        let ball = GeodesicBall::new(
            TorusPoint::new(vec![0.5, 0.5]),
            crate::trig::torus_diameter(2),
        )
        .unwrap();
        let out = ball_positivity(&s, &ball, 32, 1e-6).unwrap();
        assert!(out.is_infeasible());
    }
}
