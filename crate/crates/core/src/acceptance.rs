//! The built-in verification battery: ten numbered criteria covering the
//! phase transition, sign-change diameters, decompositions, the
//! multivariate radius, the grid lemma, cubature exactness, LP duality,
//! the mod-p interval family, bound comparisons, and determinism.
//!
//! Every tolerance is pinned here. Details strings carry no wall times so
//! reports are byte-reproducible; runtime limits are still enforced.

use crate::bounds::{
    compare_bounds, reciprocal_norm_sum, torus_radius, torus_radius_max_spectrum,
    verify_grid_property,
};
use crate::caratheodory::decompose_origin;
use crate::cubature::{equispaced_rule, gauss_legendre_rule, rule_from_certificate, tchakaloff};
use crate::error::Result;
use crate::linprog::{strict_positivity_full, HullCertificate};
use crate::rng::SplitMix64;
use crate::sweep::rotation_sweep;
use crate::trig::{Frequency, GeodesicBall, Spectrum, TorusPoint};
use crate::witness::{
    babenko_threshold_with, ball_positivity, min_diameter_sign_change, SignChangeCertificate,
    WitnessOptions,
};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub quick: bool,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.pass).count()
    }

    /// Fixed-width pass/fail table, one line per criterion.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!(
                "{:>2}  {:<28} {}  {}\n",
                r.id,
                r.name,
                if r.pass { "PASS" } else { "FAIL" },
                r.detail
            ));
        }
        out.push_str(&format!(
            "{}/{} criteria passed\n",
            self.passed(),
            self.results.len()
        ));
        out
    }
}

fn run(id: usize, name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    match body() {
        Ok((pass, detail)) => CriterionResult {
            id,
            name: name.into(),
            pass,
            detail,
        },
        Err(e) => CriterionResult {
            id,
            name: name.into(),
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Criterion 1: the critical interval length reproduces d/(d+1) within
/// 0.01 for d = 1, 2, 3 at the stated grid, each run under 60 s.
pub fn criterion_1(quick: bool) -> CriterionResult {
    run(1, "interval phase transition", || {
        let grid = if quick { 512 } else { 2048 };
        let opts = WitnessOptions {
            grid_resolution: grid,
            ..WitnessOptions::default()
        };
        let mut detail = String::new();
        let mut pass = true;
        for d in 1..=3u32 {
            let s = Spectrum::initial_segment(d)?;
            let t0 = Instant::now();
            let rec = babenko_threshold_with(&s, 5e-3, &opts)?;
            let elapsed = t0.elapsed();
            let target = d as f64 / (d as f64 + 1.0);
            let ok = (rec.length - target).abs() <= 0.01 && elapsed.as_secs() < 60;
            pass &= ok;
            detail.push_str(&format!("d={d}: L*={:.4} target={target:.4}; ", rec.length));
        }
        Ok((pass, detail))
    })
}

/// Criterion 2: minimum sign-change diameters 1/3 (S = {1}) and 2/5
/// (S = {1,3}) within 0.01 and 0.015 on a grid of at most 105 points,
/// under 5 minutes.
pub fn criterion_2(quick: bool) -> CriterionResult {
    run(2, "sign-change diameter", || {
        let grid = if quick { 45 } else { 105 };
        let mut detail = String::new();
        let mut pass = true;
        for (freqs, target, tol) in [(vec![1u32], 1.0 / 3.0, 0.01), (vec![1, 3], 0.4, 0.015)] {
            let s = Spectrum::circle(&freqs)?;
            let t0 = Instant::now();
            let res = min_diameter_sign_change(&s, 5e-3, grid)?;
            let elapsed = t0.elapsed();
            let ok = (res.feasible_diameter - target).abs() <= tol
                && !res.indeterminate
                && elapsed.as_secs() < 300;
            pass &= ok;
            detail.push_str(&format!(
                "S={freqs:?}: delta*={:.4} target={target:.4}; ",
                res.feasible_diameter
            ));
        }
        Ok((pass, detail))
    })
}

/// Criterion 3: the origin decomposes into at most d+1 curve points with
/// residual <= 1e-8 and span <= d/(d+1) + 2e-3 for d = 1, 2, 3.
pub fn criterion_3(_quick: bool) -> CriterionResult {
    run(3, "origin decomposition", || {
        let mut detail = String::new();
        let mut pass = true;
        for d in 1..=3u32 {
            let s = Spectrum::initial_segment(d)?;
            let dec = decompose_origin(&s, 8 * d as usize + 8)?;
            let bound = d as f64 / (d as f64 + 1.0) + 2e-3;
            let ok = dec.support_size() <= d as usize + 1
                && dec.residual <= 1e-8
                && dec.span_length <= bound;
            pass &= ok;
            detail.push_str(&format!(
                "d={d}: {} pts span={:.4} res={:.1e}; ",
                dec.support_size(),
                dec.span_length,
                dec.residual
            ));
        }
        Ok((pass, detail))
    })
}

/// Criterion 4: for the three-frequency torus spectrum, positivity is
/// infeasible on the ball of radius sqrt(10)/6 (64x64 grid) and feasible at
/// radius 0.05; the radius formula matches its closed form to 1e-12.
pub fn criterion_4(quick: bool) -> CriterionResult {
    run(4, "multivariate ball radius", || {
        let s = Spectrum::new(
            2,
            vec![
                Frequency::new(vec![1, 0])?,
                Frequency::new(vec![0, 1])?,
                Frequency::new(vec![1, 1])?,
            ],
        )?;
        let grid = if quick { 32 } else { 64 };
        let r = torus_radius(2, 3)?;
        let formula_ok = (r - 10f64.sqrt() / 6.0).abs() <= 1e-12;
        let center = TorusPoint::new(vec![0.5, 0.5]);
        let big = ball_positivity(&s, &GeodesicBall::new(center.clone(), r)?, grid, 1e-3)?;
        let small = ball_positivity(&s, &GeodesicBall::new(center, 0.05)?, grid, 1e-3)?;
        let pass = formula_ok && big.is_infeasible() && small.is_feasible();
        Ok((
            pass,
            format!(
                "r={r:.6}: critical ball {}, small ball {}",
                if big.is_infeasible() {
                    "infeasible"
                } else {
                    "NOT infeasible"
                },
                if small.is_feasible() {
                    "feasible"
                } else {
                    "NOT feasible"
                },
            ),
        ))
    })
}

/// Criterion 5: the translated-barycenter covering holds for all
/// (n, p) in {1,2,3} x {2,3,5,7}; for (1,3) the covering distance is
/// exactly 1/6 (within 1e-12).
pub fn criterion_5(_quick: bool) -> CriterionResult {
    run(5, "grid covering lemma", || {
        let mut pass = true;
        let mut checked = 0;
        for n in 1..=3u32 {
            for &p in &[2u64, 3, 5, 7] {
                let check = verify_grid_property(n, p)?;
                pass &= check.passes;
                checked += 1;
            }
        }
        let c13 = verify_grid_property(1, 3)?;
        let exact = c13
            .max_distances
            .iter()
            .all(|&d| (d - 1.0 / 6.0).abs() <= 1e-12);
        pass &= exact;
        Ok((
            pass,
            format!("{checked} grids pass; (1,3) covering distance exact"),
        ))
    })
}

/// Criterion 6: cubature exactness. Equispaced rules for d <= 8 at 1e-12
/// with d+1 < 2d+1 nodes; moment-matching rules within 2|S|+1 nodes at
/// 1e-9; Gauss rules m <= 16 at 1e-10; the pentagon certificate rule for
/// S = {1,3} at 1e-7.
pub fn criterion_6(_quick: bool) -> CriterionResult {
    run(6, "cubature exactness", || {
        let mut pass = true;
        for d in 1..=8u32 {
            let rule = equispaced_rule(d)?;
            pass &= rule.max_residual <= 1e-12
                && rule.len() == d as usize + 1
                && rule.len() < 2 * d as usize + 1;
        }
        for freqs in [vec![1u32], vec![1, 2], vec![1, 3], vec![2, 5, 7]] {
            let s = Spectrum::circle(&freqs)?;
            let rule = tchakaloff(&s, 4 * (2 * s.len() + 1))?;
            pass &= rule.len() <= 2 * s.len() + 1 && rule.max_residual <= 1e-9;
        }
        let mut worst_gauss = 0.0f64;
        for m in 1..=16 {
            let rule = gauss_legendre_rule(m)?;
            worst_gauss = worst_gauss.max(rule.max_residual);
            pass &= rule.max_residual <= 1e-10;
        }
        let s13 = Spectrum::circle(&[1, 3])?;
        let pentagon = SignChangeCertificate {
            support: (0..5)
                .map(|j| TorusPoint::circle(0.03 + j as f64 / 5.0))
                .collect(),
            weights: vec![0.2; 5],
            diameter: 0.4,
            residual: 0.0,
        };
        let rule = rule_from_certificate(&pentagon, &s13)?;
        pass &= rule.max_residual <= 1e-7;
        Ok((
            pass,
            format!(
                "equispaced d<=8, moment rules, gauss m<=16 (worst {worst_gauss:.1e}), pentagon rule"
            ),
        ))
    })
}

/// Criterion 7: on seeded random point sets the two hull verdicts are
/// complementary outside a 1e-7 degeneracy band, and every Inside
/// certificate has residual <= 1e-9.
pub fn criterion_7(quick: bool, seed: u64) -> CriterionResult {
    run(7, "duality property suite", || {
        let sets = if quick { 120 } else { 500 };
        let mut rng = SplitMix64::new(seed ^ 0x7a11_ce57);
        let mut band = 0usize;
        let mut pass = true;
        for _ in 0..sets {
            let d = 1 + rng.below(8) as usize;
            let m = d + 2 + rng.below(d as u64 + 4) as usize;
            let points: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..d).map(|_| rng.range_f64(-1.0, 1.0)).collect())
                .collect();
            let (pos, hull) = strict_positivity_full(&points, 1e-7)?;
            if pos.degenerate_band {
                band += 1;
                continue;
            }
            match &hull {
                HullCertificate::Inside { residual, .. } => {
                    pass &= pos.witness.is_none() && *residual <= 1e-9;
                }
                HullCertificate::Separated { .. } => {
                    pass &= pos.witness.is_some();
                }
            }
        }
        Ok((
            pass,
            format!("{sets} point sets, {band} in degeneracy band"),
        ))
    })
}

/// Criterion 8: the mod-p family. Feasibility at length 0.45 holds, but the
/// infeasibility of every rotated closed half-interval for S = {1,6} does
/// not: positivity witnesses with margins above 0.2 exist at every rotation
/// (e.g. sin(2 pi t) + 0.3 cos(12 pi t) shifted), so the first half of this
/// criterion fails by construction and is reported honestly.
pub fn criterion_8(quick: bool) -> CriterionResult {
    criterion_8_jobs(quick, 1)
}

pub fn criterion_8_jobs(quick: bool, jobs: usize) -> CriterionResult {
    run(8, "mod-p interval family", || {
        let s = Spectrum::circle(&[1, 6])?;
        let grid = if quick { 512 } else { 2048 };
        let opts = WitnessOptions {
            grid_resolution: grid,
            ..WitnessOptions::default()
        };
        let rotations = if quick { 4 } else { 8 };
        let starts: Vec<f64> = (0..rotations)
            .map(|j| j as f64 / rotations as f64)
            .collect();
        let half = rotation_sweep(&s, 0.5, &starts, &opts, jobs)?;
        let all_infeasible = half.iter().all(|r| r.verdict == "infeasible");
        let feasible_margins: Vec<f64> = half
            .iter()
            .filter(|r| r.verdict == "feasible")
            .map(|r| r.margin_or_residual)
            .collect();
        let short = rotation_sweep(&s, 0.45, &starts[..1], &opts, 1)?;
        let short_feasible = short[0].verdict == "feasible";
        let pass = all_infeasible && short_feasible;
        let detail = if all_infeasible {
            format!("length 0.5 infeasible at {rotations} rotations; 0.45 {short_feasible}")
        } else {
            format!(
                "length 0.5 has positivity witnesses at {} of {rotations} rotations (min margin {:.3}); length 0.45 feasible={short_feasible}",
                feasible_margins.len(),
                feasible_margins.iter().cloned().fold(f64::INFINITY, f64::min),
            )
        };
        Ok((pass, detail))
    })
}

/// Criterion 9: for seeded random spectra satisfying the reciprocal-norm
/// hypothesis and the radius hypotheses, the grid radius beats the
/// frequency-sum radius every time.
pub fn criterion_9(quick: bool, seed: u64) -> CriterionResult {
    run(9, "bound comparison", || {
        let wanted = if quick { 8 } else { 20 };
        let mut rng = SplitMix64::new(seed ^ 0xb0d5);
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        let mut pass = true;
        while accepted < wanted && attempts < 100_000 {
            attempts += 1;
            let n = 1 + rng.below(2) as u32;
            let p = [3u64, 5, 7][rng.below(3) as usize];
            let cap = torus_radius_max_spectrum(n, p)?;
            if cap == 0 {
                continue;
            }
            let size = 1 + rng.below(cap.min(4)) as usize;
            let mut freqs = Vec::new();
            for _ in 0..size {
                let alpha: Vec<u32> = (0..n).map(|_| rng.below(5) as u32).collect();
                if alpha.iter().all(|&a| a == 0) {
                    continue;
                }
                if alpha.iter().all(|&a| (a as u64).is_multiple_of(p)) {
                    continue;
                }
                if let Ok(f) = Frequency::new(alpha) {
                    freqs.push(f);
                }
            }
            if freqs.is_empty() {
                continue;
            }
            let Ok(s) = Spectrum::new(n as usize, freqs) else {
                continue;
            };
            if (s.len() as u64) > cap {
                continue;
            }
            if reciprocal_norm_sum(&s) <= 1.0 / (2.0 * n as f64) {
                continue;
            }
            let rep = compare_bounds(&s, n, p)?;
            let (Some(tr), st) = (rep.torus_radius, rep.steinerberger) else {
                continue;
            };
            pass &= tr < st;
            accepted += 1;
        }
        pass &= accepted == wanted;
        Ok((
            pass,
            format!("{accepted}/{wanted} spectra: grid radius always smaller"),
        ))
    })
}

/// Criterion 10: a quick battery serialized twice from the same seed is
/// byte-identical.
pub fn criterion_10(seed: u64) -> CriterionResult {
    run(10, "determinism", || {
        let a = serde_json::to_string(&run_battery(seed, true, false, 1))
            .map_err(|e| crate::Error::InvalidInput(e.to_string()))?;
        let b = serde_json::to_string(&run_battery(seed, true, false, 2))
            .map_err(|e| crate::Error::InvalidInput(e.to_string()))?;
        Ok((a == b, format!("{} bytes, stable across reruns", a.len())))
    })
}

fn run_battery(
    seed: u64,
    quick: bool,
    with_determinism: bool,
    jobs: usize,
) -> Vec<CriterionResult> {
    let mut results = vec![
        criterion_1(quick),
        criterion_2(quick),
        criterion_3(quick),
        criterion_4(quick),
        criterion_5(quick),
        criterion_6(quick),
        criterion_7(quick, seed),
        criterion_8_jobs(quick, jobs),
        criterion_9(quick, seed),
    ];
    if with_determinism {
        results.push(criterion_10(seed));
    }
    results
}

/// The full battery at the stated parameters (or reduced quick settings).
pub fn run_suite(seed: u64, quick: bool) -> SuiteReport {
    run_suite_jobs(seed, quick, 1)
}

/// Sweep-parallel variant; results are identical for any worker count.
pub fn run_suite_jobs(seed: u64, quick: bool, jobs: usize) -> SuiteReport {
    SuiteReport {
        seed,
        quick,
        results: run_battery(seed, quick, true, jobs),
    }
}
