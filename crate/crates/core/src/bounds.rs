//! Closed-form bounds on zero-free regions, their comparison, and the
//! torus grid construction behind the multivariate radius.

use crate::caratheodory::is_prime;
use crate::error::{Error, Result};
use crate::trig::{torus_diameter, torus_distance, Spectrum, TorusPoint};
use serde::{Deserialize, Serialize};

/// Interval length forcing a zero for degree-d trig polynomials: d/(d+1).
pub fn babenko_bound(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be >= 1".into()));
    }
    Ok(d as f64 / (d as f64 + 1.0))
}

/// Diameter bound for common sign-change sets: d/(2d+1) for d frequencies.
pub fn sign_change_bound(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidInput("size must be >= 1".into()));
    }
    Ok(d as f64 / (2.0 * d as f64 + 1.0))
}

/// Ball radius forcing zeros of multivariate trig polynomials with small
/// spectra: `sqrt((n-1)/4 + ((p-2)/(2p))^2)`.
pub fn torus_radius(n: u32, p: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("torus dimension must be >= 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 3 {
        return Err(Error::InvalidInput("prime must be >= 3".into()));
    }
    let frac = (p as f64 - 2.0) / (2.0 * p as f64);
    Ok(((n as f64 - 1.0) / 4.0 + frac * frac).sqrt())
}

/// Largest spectrum size covered by the radius formula: floor(p^n/2 - 1).
pub fn torus_radius_max_spectrum(n: u32, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let total = (p as u128).checked_pow(n).ok_or(Error::SizeCap {
        got: u64::MAX,
        cap: u64::MAX,
    })?;
    Ok(((total.saturating_sub(2)) / 2) as u64)
}

/// Sum of `1/(4 |lambda|)` over a symmetric integer spectrum. Nonnegative
/// input spectra are symmetrized (each frequency counted with its negative).
pub fn kozma_oravecz_radius(s: &Spectrum) -> Result<f64> {
    let mut acc = 0.0;
    for f in s.freqs() {
        let norm = (f.norm_sq() as f64).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroFrequency);
        }
        // symmetrized: lambda and -lambda both contribute
        acc += 2.0 / (4.0 * norm);
    }
    Ok(acc)
}

/// `n^(3/2) * sum of reciprocal distinct frequency norms`. Norms are
/// deduplicated exactly via the integer squared norm; nonnegative input is
/// symmetrized, which leaves the set of norms unchanged.
pub fn steinerberger_radius(s: &Spectrum, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    let mut norms_sq: Vec<u64> = s.freqs().iter().map(|f| f.norm_sq()).collect();
    if norms_sq.contains(&0) {
        return Err(Error::ZeroFrequency);
    }
    norms_sq.sort_unstable();
    norms_sq.dedup();
    let sum: f64 = norms_sq.iter().map(|&q| 1.0 / (q as f64).sqrt()).sum();
    Ok((n as f64).powf(1.5) * sum)
}

/// Sum of reciprocal deduplicated norms, the quantity deciding when the
/// torus radius beats the frequency-sum bound.
pub fn reciprocal_norm_sum(s: &Spectrum) -> f64 {
    let mut norms_sq: Vec<u64> = s.freqs().iter().map(|f| f.norm_sq()).collect();
    norms_sq.sort_unstable();
    norms_sq.dedup();
    norms_sq
        .iter()
        .filter(|&&q| q > 0)
        .map(|&q| 1.0 / (q as f64).sqrt())
        .sum()
}

/// Interval bound from the residues of a circle spectrum mod p: r/(r+1)
/// with r the number of distinct residues, provided no frequency vanishes
/// mod p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModPBound {
    Bound(f64),
    Inapplicable,
}

pub fn mod_p_bound(s: &Spectrum, p: u64) -> Result<ModPBound> {
    if s.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: s.n(),
        });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut residues: Vec<u64> = Vec::new();
    for f in s.freqs() {
        let r = f.entries()[0] as u64 % p;
        if r == 0 {
            return Ok(ModPBound::Inapplicable);
        }
        residues.push(r);
    }
    residues.sort_unstable();
    residues.dedup();
    let r = residues.len() as f64;
    Ok(ModPBound::Bound(r / (r + 1.0)))
}

/// The p^n-point uniform grid on the torus.
pub fn grid_points(n: u32, p: u64) -> Result<Vec<TorusPoint>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let total = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
    if total > 1_000_000 {
        return Err(Error::SizeCap {
            got: total.min(u64::MAX as u128) as u64,
            cap: 1_000_000,
        });
    }
    let n = n as usize;
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0u64; n];
    loop {
        out.push(TorusPoint::new(
            idx.iter().map(|&k| k as f64 / p as f64).collect(),
        ));
        let mut carry = true;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < p {
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

/// Per-point covering record for the grid lemma.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridCheck {
    pub passes: bool,
    /// For each grid point x: the ball center covering the rest of the grid
    /// and the max distance from that center to the other points.
    pub centers: Vec<TorusPoint>,
    pub max_distances: Vec<f64>,
    pub radius: f64,
}

/// For every grid point x, the translated barycenter x + (1/2, ..., 1/2)
/// covers all remaining grid points within the torus radius.
pub fn verify_grid_property(n: u32, p: u64) -> Result<GridCheck> {
    let grid = grid_points(n, p)?;
    let radius = if p >= 3 {
        torus_radius(n, p)?
    } else {
        // p = 2: the offset term vanishes.
        ((n as f64 - 1.0) / 4.0).sqrt()
    };
    let half = vec![0.5; n as usize];
    let mut centers = Vec::with_capacity(grid.len());
    let mut max_distances = Vec::with_capacity(grid.len());
    let mut passes = true;
    for x in &grid {
        let center = x.translate(&half)?;
        let mut worst = 0.0f64;
        for y in &grid {
            if std::ptr::eq(x, y) {
                continue;
            }
            worst = worst.max(torus_distance(&center, y)?);
        }
        if worst > radius + 1e-12 {
            passes = false;
        }
        centers.push(center);
        max_distances.push(worst);
    }
    Ok(GridCheck {
        passes,
        centers,
        max_distances,
        radius,
    })
}

/// All applicable bounds for one spectrum, with the smallest radius tagged.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub spectrum: Spectrum,
    pub n: u32,
    pub p: u64,
    /// Interval bound d/(d+1) with d the degree (circle spectra only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub babenko: Option<f64>,
    /// Sign-change diameter bound |S|/(2|S|+1) (circle spectra only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_change: Option<f64>,
    /// Ball radius from the grid construction, when the spectrum satisfies
    /// the size and divisibility hypotheses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus_radius: Option<f64>,
    pub kozma_oravecz: f64,
    pub steinerberger: f64,
    pub torus_diameter: f64,
    /// Label of the smallest applicable ball radius.
    pub winner: String,
    /// The two literature bounds require a symmetric spectrum; nonnegative
    /// input was symmetrized.
    pub symmetrized: bool,
}

/// Fill every applicable formula and pick the winner among ball radii.
/// When `sum 1/|lambda| > 1/(2n)` and the radius hypotheses hold, the torus
/// radius always beats the frequency-sum bound (it is below the diameter,
/// which that bound then exceeds); this is asserted internally.
pub fn compare_bounds(s: &Spectrum, n: u32, p: u64) -> Result<BoundReport> {
    if s.n() != n as usize {
        return Err(Error::DimensionMismatch {
            expected: n as usize,
            got: s.n(),
        });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let babenko = if s.n() == 1 {
        Some(babenko_bound(s.max_entry())?)
    } else {
        None
    };
    let sign_change = if s.n() == 1 {
        Some(sign_change_bound(s.len() as u32)?)
    } else {
        None
    };
    let radius_applicable = p >= 3
        && (s.len() as u64) <= torus_radius_max_spectrum(n, p)?
        && s.freqs()
            .iter()
            .all(|f| f.entries().iter().any(|&k| !(k as u64).is_multiple_of(p)));
    let tr = if radius_applicable {
        Some(torus_radius(n, p)?)
    } else {
        None
    };
    let ko = kozma_oravecz_radius(s)?;
    let st = steinerberger_radius(s, n)?;
    let diameter = torus_diameter(n as usize);

    let mut candidates: Vec<(&str, f64)> = Vec::new();
    if let Some(r) = tr {
        candidates.push(("torus_radius", r));
    }
    candidates.push(("kozma_oravecz", ko));
    candidates.push(("steinerberger", st));
    let winner = candidates
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|&(name, _)| name.to_string())
        .unwrap_or_default();

    if radius_applicable && reciprocal_norm_sum(s) > 1.0 / (2.0 * n as f64) {
        let r = tr.expect("applicable");
        if r >= st {
            return Err(Error::InvalidInput(format!(
                "radius comparison violated: torus {r} vs frequency-sum {st}"
            )));
        }
    }

    Ok(BoundReport {
        spectrum: s.clone(),
        n,
        p,
        babenko,
        sign_change,
        torus_radius: tr,
        kozma_oravecz: ko,
        steinerberger: st,
        torus_diameter: diameter,
        winner,
        symmetrized: true,
    })
}

impl BoundReport {
    /// One CSV row (with header) for sweep aggregation.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "spectrum,n,p,babenko,sign_change,torus_radius,kozma_oravecz,steinerberger,torus_diameter,winner\n\
             \"{}\",{},{},{},{},{},{},{},{},{}\n",
            spectrum_label(&self.spectrum),
            self.n,
            self.p,
            opt(self.babenko),
            opt(self.sign_change),
            opt(self.torus_radius),
            self.kozma_oravecz,
            self.steinerberger,
            self.torus_diameter,
            self.winner
        )
    }
}

pub fn spectrum_label(s: &Spectrum) -> String {
    s.freqs()
        .iter()
        .map(|f| {
            f.entries()
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::Frequency;

    #[test]
    fn babenko_values() {
        assert!((babenko_bound(1).unwrap() - 0.5).abs() < 1e-15);
        assert!((babenko_bound(2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((babenko_bound(9).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn sign_change_values() {
        assert!((sign_change_bound(1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((sign_change_bound(2).unwrap() - 0.4).abs() < 1e-15);
        assert!((sign_change_bound(10).unwrap() - 10.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn torus_radius_values() {
        assert!((torus_radius(1, 5).unwrap() - 0.3).abs() < 1e-15);
        assert!((torus_radius(2, 3).unwrap() - 10f64.sqrt() / 6.0).abs() < 1e-12);
        // large p approaches the circle diameter
        assert!((torus_radius(1, 1009).unwrap() - 0.5).abs() < 1e-3);
        assert!(torus_radius(1, 4).is_err());
    }

    #[test]
    fn radius_strictly_inside_diameter() {
        for n in 1..=3 {
            for &p in &[3u64, 5, 7, 11, 13] {
                assert!(torus_radius(n, p).unwrap() < torus_diameter(n as usize));
            }
        }
    }

    #[test]
    fn max_spectrum_values() {
        assert_eq!(torus_radius_max_spectrum(1, 5).unwrap(), 1);
        assert_eq!(torus_radius_max_spectrum(2, 3).unwrap(), 3);
        assert_eq!(torus_radius_max_spectrum(1, 3).unwrap(), 0);
    }

    #[test]
    fn kozma_oravecz_values() {
        let s5 = Spectrum::circle(&[5]).unwrap();
        assert!((kozma_oravecz_radius(&s5).unwrap() - 0.1).abs() < 1e-15);
        let s34 = Spectrum::new(2, vec![Frequency::new(vec![3, 4]).unwrap()]).unwrap();
        assert!((kozma_oravecz_radius(&s34).unwrap() - 0.1).abs() < 1e-15);
        let s1 = Spectrum::circle(&[1]).unwrap();
        assert!((kozma_oravecz_radius(&s1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn steinerberger_values() {
        let s5 = Spectrum::circle(&[5]).unwrap();
        assert!((steinerberger_radius(&s5, 1).unwrap() - 0.2).abs() < 1e-15);
        let s34 = Spectrum::new(2, vec![Frequency::new(vec![3, 4]).unwrap()]).unwrap();
        assert!((steinerberger_radius(&s34, 2).unwrap() - 2f64.powf(1.5) / 5.0).abs() < 1e-12);
        let s510 = Spectrum::circle(&[5, 10]).unwrap();
        assert!((steinerberger_radius(&s510, 1).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn mod_p_values() {
        let s16 = Spectrum::circle(&[1, 6]).unwrap();
        assert_eq!(mod_p_bound(&s16, 5).unwrap(), ModPBound::Bound(0.5));
        let s1234 = Spectrum::circle(&[1, 2, 3, 4]).unwrap();
        assert_eq!(mod_p_bound(&s1234, 5).unwrap(), ModPBound::Bound(0.8));
        let s5 = Spectrum::circle(&[5]).unwrap();
        assert_eq!(mod_p_bound(&s5, 5).unwrap(), ModPBound::Inapplicable);
    }

    #[test]
    fn mod_p_never_exceeds_limit() {
        for &p in &[2u64, 3, 5, 7] {
            for freqs in [vec![1u32, 2], vec![1, 2, 3, 4, 5, 6], vec![2, 9, 11]] {
                let s = Spectrum::circle(&freqs).unwrap();
                if let ModPBound::Bound(b) = mod_p_bound(&s, p).unwrap() {
                    assert!(b <= (p as f64 - 1.0) / p as f64 + 1e-15);
                }
            }
        }
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(grid_points(1, 3).unwrap().len(), 3);
        assert_eq!(grid_points(2, 2).unwrap().len(), 4);
        let g12 = grid_points(1, 2).unwrap();
        assert_eq!(g12.len(), 2);
        assert!((g12[1].coords()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn grid_property_covering_distance() {
        let check = verify_grid_property(1, 3).unwrap();
        assert!(check.passes);
        // center 1/2 covers {1/3, 2/3} at exactly 1/6
        assert!((check.max_distances[0] - 1.0 / 6.0).abs() < 1e-12);
        assert!((check.radius - 1.0 / 6.0).abs() < 1e-12);

        let c2 = verify_grid_property(2, 3).unwrap();
        assert!(c2.passes);
    }

    #[test]
    fn compare_winners() {
        // Large frequency: the frequency-sum bounds win.
        let s100 = Spectrum::circle(&[100]).unwrap();
        let rep = compare_bounds(&s100, 1, 3).unwrap();
        assert_eq!(rep.winner, "kozma_oravecz");
        assert!((rep.kozma_oravecz - 1.0 / 200.0).abs() < 1e-15);

        // Low frequency: the grid radius wins.
        let s1 = Spectrum::circle(&[1]).unwrap();
        let rep = compare_bounds(&s1, 1, 5).unwrap();
        assert_eq!(rep.winner, "torus_radius");
        assert!((rep.torus_radius.unwrap() - 0.3).abs() < 1e-15);
        assert!((rep.kozma_oravecz - 0.5).abs() < 1e-15);

        // The three-frequency torus spectrum from the radius example.
        let s = Spectrum::new(
            2,
            vec![
                Frequency::new(vec![1, 0]).unwrap(),
                Frequency::new(vec![0, 1]).unwrap(),
                Frequency::new(vec![1, 1]).unwrap(),
            ],
        )
        .unwrap();
        let rep = compare_bounds(&s, 2, 3).unwrap();
        // arithmetic oracle: 2^1.5 (1/1 + 1/sqrt2) exceeds the diameter
        let st = 2f64.powf(1.5) * (1.0 + 1.0 / 2f64.sqrt());
        assert!((rep.steinerberger - st).abs() < 1e-12);
        assert!(rep.steinerberger > rep.torus_diameter);
        assert_eq!(rep.winner, "torus_radius");
    }
}
