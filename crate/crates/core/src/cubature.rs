//! Exact integration rules with nonnegative weights summing to one.
//!
//! Every exactness check compares against closed-form integrals: trig
//! monomials integrate to 0 over the torus, the constant to 1, and `t^j`
//! to `1/(j+1)` on the unit interval. No rule is ever validated against
//! another numerical quadrature.

use crate::error::{Error, Result};
use crate::linprog::{caratheodory_reduce, origin_in_hull, HullCertificate};
use crate::trig::{curve_point, Frequency, Spectrum, TorusPoint, TWO_PI};
use crate::witness::SignChangeCertificate;
use serde::{Deserialize, Serialize};

/// Residual of one basis function under a rule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactnessEntry {
    pub basis: String,
    pub residual: f64,
}

/// Nodes with nonnegative weights summing to 1, together with the space the
/// rule integrates exactly and the worst residual over its basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubatureRule {
    /// Node coordinates; length-1 vectors for circle or unit-interval rules.
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub exact_space: String,
    pub max_residual: f64,
    #[serde(skip)]
    pub report: Vec<ExactnessEntry>,
}

/// Nodes closer than this are merged, summing their weights.
const NODE_MERGE_TOL: f64 = 1e-10;

impl CubatureRule {
    fn assemble(
        mut nodes: Vec<Vec<f64>>,
        mut weights: Vec<f64>,
        exact_space: String,
        report: Vec<ExactnessEntry>,
    ) -> Result<Self> {
        // Deduplicate nodes.
        let mut i = 0;
        while i < nodes.len() {
            let mut j = i + 1;
            while j < nodes.len() {
                let close = nodes[i]
                    .iter()
                    .zip(&nodes[j])
                    .all(|(&a, &b)| (a - b).abs() <= NODE_MERGE_TOL);
                if close {
                    weights[i] += weights[j];
                    nodes.remove(j);
                    weights.remove(j);
                } else {
                    j += 1;
                }
            }
            i += 1;
        }
        for w in &weights {
            if *w < -1e-12 {
                return Err(Error::InvalidInput(format!("negative weight {w}")));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("weights sum to {sum}")));
        }
        let max_residual = report.iter().fold(0.0f64, |m, e| m.max(e.residual));
        Ok(Self {
            nodes,
            weights,
            exact_space,
            max_residual,
            report,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(x_i)`.
    pub fn apply(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, &w)| w * f(x))
            .sum()
    }
}

/// Exactness report over the trig basis of a spectrum plus the constant.
fn trig_exactness(nodes: &[Vec<f64>], weights: &[f64], s: &Spectrum) -> Vec<ExactnessEntry> {
    let mut report = Vec::with_capacity(2 * s.len() + 1);
    let const_residual = (weights.iter().sum::<f64>() - 1.0).abs();
    report.push(ExactnessEntry {
        basis: "1".to_string(),
        residual: const_residual,
    });
    for f in s.freqs() {
        let mut cos_acc = 0.0;
        let mut sin_acc = 0.0;
        for (x, &w) in nodes.iter().zip(weights) {
            let theta: f64 = TWO_PI
                * f.entries()
                    .iter()
                    .zip(x)
                    .map(|(&k, &t)| k as f64 * t)
                    .sum::<f64>();
            cos_acc += w * theta.cos();
            sin_acc += w * theta.sin();
        }
        let alpha = format!("{:?}", f.entries().to_vec());
        report.push(ExactnessEntry {
            basis: format!("cos 2pi<{alpha},x>"),
            residual: cos_acc.abs(),
        });
        report.push(ExactnessEntry {
            basis: format!("sin 2pi<{alpha},x>"),
            residual: sin_acc.abs(),
        });
    }
    report
}

/// The d+1 equispaced nodes integrate every trig polynomial of degree at
/// most d exactly: half the nodes the dimension count suggests.
pub fn equispaced_rule(d: u32) -> Result<CubatureRule> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be >= 1".into()));
    }
    let m = d as usize + 1;
    let nodes: Vec<Vec<f64>> = (0..m).map(|j| vec![j as f64 / m as f64]).collect();
    let weights = vec![1.0 / m as f64; m];
    let s = Spectrum::initial_segment(d)?;
    let report = trig_exactness(&nodes, &weights, &s);
    CubatureRule::assemble(nodes, weights, format!("T_{d}"), report)
}

/// Moment-matching rule over a uniform sample: hull LP for the weights,
/// Caratheodory reduction down to at most 2|S|+1 nodes.
pub fn tchakaloff(s: &Spectrum, sample_size: usize) -> Result<CubatureRule> {
    let min_size = 4 * (2 * s.len() + 1);
    if sample_size < min_size {
        return Err(Error::InvalidInput(format!(
            "sample_size {sample_size} below required {min_size}"
        )));
    }
    // Exact zero moments on the grid need every frequency alive mod the
    // per-axis resolution.
    let mut m = sample_size;
    'bump: loop {
        for f in s.freqs() {
            if f.entries().iter().all(|&k| (k as usize).is_multiple_of(m)) {
                m += 1;
                continue 'bump;
            }
        }
        break;
    }
    let n = s.n();
    let total = (m as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > 2_000_000 {
        return Err(Error::SizeCap {
            got: total,
            cap: 2_000_000,
        });
    }
    let mut sample = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; n];
    loop {
        sample.push(TorusPoint::new(
            idx.iter().map(|&j| j as f64 / m as f64).collect(),
        ));
        let mut carry = true;
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < m {
                carry = false;
                break;
            }
            *slot = 0;
        }
        if carry {
            break;
        }
    }
    let points = sample
        .iter()
        .map(|x| curve_point(s, x))
        .collect::<Result<Vec<_>>>()?;
    let cert = origin_in_hull(&points, 1e-9)?;
    let HullCertificate::Inside { weights, .. } = cert else {
        return Err(Error::InvalidInput(
            "sample too coarse: moments not reproducible".into(),
        ));
    };
    let (keep, w) = caratheodory_reduce(&points, &weights, None)?;
    let nodes: Vec<Vec<f64>> = keep.iter().map(|&i| sample[i].coords().to_vec()).collect();
    let report = trig_exactness(&nodes, &w, s);
    CubatureRule::assemble(
        nodes,
        w,
        format!("span(trig basis of {} frequencies) + constants", s.len()),
        report,
    )
}

/// Reinterpret a sign-change certificate as a cubature rule for the span of
/// the spectrum's trig basis plus constants.
pub fn rule_from_certificate(cert: &SignChangeCertificate, s: &Spectrum) -> Result<CubatureRule> {
    let residual = cert.residual_for(s)?;
    if residual > 1e-8 {
        return Err(Error::ResidualTooLarge {
            residual,
            bound: 1e-8,
        });
    }
    let nodes: Vec<Vec<f64>> = cert.support.iter().map(|x| x.coords().to_vec()).collect();
    let report = trig_exactness(&nodes, &cert.weights, s);
    let rule = CubatureRule::assemble(
        nodes,
        cert.weights.clone(),
        format!("span(trig basis of {} frequencies) + constants", s.len()),
        report,
    )?;
    if rule.max_residual > 1e-7 {
        return Err(Error::ResidualTooLarge {
            residual: rule.max_residual,
            bound: 1e-7,
        });
    }
    Ok(rule)
}

/// Legendre polynomial value and derivative by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let mut p1 = 1.0f64;
    let mut p2 = 0.0f64;
    for k in 1..=m {
        let kf = k as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * kf - 1.0) * x * p2 - (kf - 1.0) * p3) / kf;
    }
    // dP_m/dx = m (x P_m - P_{m-1}) / (x^2 - 1), valid away from |x| = 1.
    let dp = m as f64 * (x * p1 - p2) / (x * x - 1.0);
    (p1, dp)
}

const NEWTON_CAP: usize = 100;

/// Gauss-Legendre rule on [0, 1] with unit total mass: m nodes integrate
/// all polynomials of degree at most 2m-1.
pub fn gauss_legendre_rule(m: usize) -> Result<CubatureRule> {
    if m == 0 || m > 64 {
        return Err(Error::InvalidInput(format!(
            "node count {m} outside 1..=64"
        )));
    }
    let mut nodes_sym = Vec::with_capacity(m);
    let mut weights_sym = Vec::with_capacity(m);
    let half = m.div_ceil(2);
    for i in 0..half {
        // Chebyshev initial guess for the i-th positive-side root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_CAP {
            let (p, dp) = legendre(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NewtonDivergence(NEWTON_CAP));
        }
        let (_, dp) = legendre(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_sym.push(x);
        weights_sym.push(w);
    }
    // Assemble on [-1, 1] by symmetry, then map to [0, 1] ascending.
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(m);
    for i in 0..half {
        let (x, w) = (nodes_sym[i], weights_sym[i]);
        if x.abs() < 1e-14 {
            pairs.push((0.0, w));
        } else {
            pairs.push((x, w));
            pairs.push((-x, w));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if pairs.len() != m {
        return Err(Error::NewtonDivergence(NEWTON_CAP));
    }
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let nodes: Vec<Vec<f64>> = pairs.iter().map(|&(x, _)| vec![(x + 1.0) / 2.0]).collect();
    let weights: Vec<f64> = pairs.iter().map(|&(_, w)| w / total).collect();

    let mut report = Vec::with_capacity(2 * m);
    for j in 0..2 * m {
        let acc: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, &w)| w * x[0].powi(j as i32))
            .sum();
        let exact = 1.0 / (j as f64 + 1.0);
        report.push(ExactnessEntry {
            basis: format!("t^{j}"),
            residual: (acc - exact).abs(),
        });
    }
    CubatureRule::assemble(nodes, weights, format!("P_{}[0,1]", 2 * m - 1), report)
}

/// Closed-form integrals used by the exactness reports: a trig monomial
/// integrates to zero, the constant to one.
pub fn trig_monomial_integral(_f: &Frequency) -> f64 {
    0.0
}

/// `integral of t^j over [0,1]`.
pub fn monomial_integral(j: u32) -> f64 {
    1.0 / (j as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::Frequency;

    #[test]
    fn equispaced_two_nodes() {
        let rule = equispaced_rule(1).unwrap();
        assert_eq!(rule.len(), 2);
        assert!((rule.nodes[1][0] - 0.5).abs() < 1e-15);
        assert!(rule.max_residual <= 1e-12);
    }

    #[test]
    fn equispaced_beats_dimension_count() {
        for d in 1..=8u32 {
            let rule = equispaced_rule(d).unwrap();
            assert_eq!(rule.len(), d as usize + 1);
            assert!(rule.max_residual <= 1e-12, "d={d}: {}", rule.max_residual);
            // dimension of the exact space is 2d+1 > d+1 nodes
            assert!(rule.len() < 2 * d as usize + 1);
        }
    }

    #[test]
    fn tchakaloff_node_counts() {
        let s1 = Spectrum::circle(&[1]).unwrap();
        let r1 = tchakaloff(&s1, 12).unwrap();
        assert!(r1.len() <= 3);
        assert!(r1.max_residual <= 1e-9);

        let s12 = Spectrum::circle(&[1, 2]).unwrap();
        let r12 = tchakaloff(&s12, 20).unwrap();
        assert!(r12.len() <= 5);
        assert!(r12.max_residual <= 1e-9);

        let s2 = Spectrum::new(
            2,
            vec![
                Frequency::new(vec![1, 0]).unwrap(),
                Frequency::new(vec![0, 1]).unwrap(),
            ],
        )
        .unwrap();
        let r2 = tchakaloff(&s2, 20).unwrap();
        assert!(r2.len() <= 5);
        assert!(r2.max_residual <= 1e-9);
    }

    #[test]
    fn certificate_to_rule_triangle() {
        let s = Spectrum::circle(&[1]).unwrap();
        let cert = SignChangeCertificate {
            support: vec![
                TorusPoint::circle(0.0),
                TorusPoint::circle(1.0 / 3.0),
                TorusPoint::circle(2.0 / 3.0),
            ],
            weights: vec![1.0 / 3.0; 3],
            diameter: 1.0 / 3.0,
            residual: 0.0,
        };
        let rule = rule_from_certificate(&cert, &s).unwrap();
        assert_eq!(rule.len(), 3);
        assert!(rule.max_residual <= 1e-7);
        // The same nodes are exact on T_2 as well.
        let s2 = Spectrum::circle(&[1, 2]).unwrap();
        let rule2 = rule_from_certificate(&cert, &s2).unwrap();
        assert!(rule2.max_residual <= 1e-7);
    }

    #[test]
    fn certificate_to_rule_antipodal() {
        let s = Spectrum::circle(&[1]).unwrap();
        let cert = SignChangeCertificate {
            support: vec![TorusPoint::circle(0.1), TorusPoint::circle(0.6)],
            weights: vec![0.5, 0.5],
            diameter: 0.5,
            residual: 0.0,
        };
        let rule = rule_from_certificate(&cert, &s).unwrap();
        assert_eq!(rule.len(), 2);
        assert!(rule.max_residual <= 1e-7);
    }

    #[test]
    fn rejects_bad_certificate() {
        let s = Spectrum::circle(&[1]).unwrap();
        let cert = SignChangeCertificate {
            support: vec![TorusPoint::circle(0.0), TorusPoint::circle(0.1)],
            weights: vec![0.5, 0.5],
            diameter: 0.1,
            residual: 0.0,
        };
        assert!(matches!(
            rule_from_certificate(&cert, &s),
            Err(Error::ResidualTooLarge { .. })
        ));
    }

    #[test]
    fn gauss_midpoint() {
        let rule = gauss_legendre_rule(1).unwrap();
        assert_eq!(rule.len(), 1);
        assert!((rule.nodes[0][0] - 0.5).abs() < 1e-15);
        assert!((rule.weights[0] - 1.0).abs() < 1e-15);
        assert!(rule.max_residual <= 1e-10);
    }

    #[test]
    fn gauss_two_points() {
        let rule = gauss_legendre_rule(2).unwrap();
        let offset = 1.0 / (2.0 * 3f64.sqrt());
        assert!((rule.nodes[0][0] - (0.5 - offset)).abs() < 1e-12);
        assert!((rule.nodes[1][0] - (0.5 + offset)).abs() < 1e-12);
        assert!((rule.weights[0] - 0.5).abs() < 1e-12);
        assert!(rule.max_residual <= 1e-10);
    }

    #[test]
    fn gauss_quartic_integral() {
        let rule = gauss_legendre_rule(3).unwrap();
        let quartic = rule.apply(|x| x[0].powi(4));
        assert!((quartic - 0.2).abs() <= 1e-12);
    }

    #[test]
    fn gauss_double_precision_range() {
        for m in 1..=16 {
            let rule = gauss_legendre_rule(m).unwrap();
            assert_eq!(rule.len(), m);
            assert!(
                rule.max_residual <= 1e-10,
                "m={m}: residual {}",
                rule.max_residual
            );
        }
    }

    #[test]
    fn node_merge() {
        let rule = CubatureRule::assemble(
            vec![vec![0.25], vec![0.25 + 1e-12], vec![0.75]],
            vec![0.25, 0.25, 0.5],
            "test".into(),
            vec![],
        )
        .unwrap();
        assert_eq!(rule.len(), 2);
        assert!((rule.weights[0] - 0.5).abs() < 1e-12);
    }
}
