//! Re-validation of emitted artifacts from their serialized form alone:
//! residuals and invariants are recomputed from the file contents (plus the
//! spectrum context of the run), never trusted from the stored numbers.

use zeromean::bounds::{
    kozma_oravecz_radius, steinerberger_radius, torus_radius, verify_grid_property, BoundReport,
};
use zeromean::caratheodory::{span_length, CurveDecomposition};
use zeromean::cubature::CubatureRule;
use zeromean::linprog::HullCertificate;
use zeromean::trig::{curve_point, Spectrum};
use zeromean::witness::{
    region_sample, DiameterSearch, PositivityOutcome, SignChangeCertificate, ThresholdRecord,
};
use zeromean::{Error, Result};

fn parse<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("parse {what}: {e}")))
}

pub fn threshold(text: &str) -> Result<String> {
    let rec: ThresholdRecord = parse(text, "threshold record")?;
    if rec.infeasible_above - rec.feasible_below > rec.tol * (1.0 + 1e-9) {
        return Err(Error::InvalidInput(format!(
            "bracket wider than tol: [{}, {}]",
            rec.feasible_below, rec.infeasible_above
        )));
    }
    let mid = 0.5 * (rec.feasible_below + rec.infeasible_above);
    if (rec.length - mid).abs() > 1e-12 {
        return Err(Error::InvalidInput(
            "length is not the bracket midpoint".into(),
        ));
    }
    Ok(format!(
        "bracket width {:.2e} within tol",
        rec.infeasible_above - rec.feasible_below
    ))
}

pub fn witness(text: &str, s: &Spectrum) -> Result<String> {
    let outcome: PositivityOutcome = parse(text, "positivity outcome")?;
    match outcome {
        PositivityOutcome::Feasible { witness } => {
            let sample = region_sample(&witness.region, witness.verification_resolution)?;
            let mut min = f64::INFINITY;
            for x in &sample {
                let g = curve_point(s, x)?;
                let v: f64 = g.iter().zip(&witness.coeffs).map(|(&a, &b)| a * b).sum();
                min = min.min(v);
            }
            if min <= 0.0 {
                return Err(Error::ResidualTooLarge {
                    residual: -min,
                    bound: 0.0,
                });
            }
            Ok(format!("recomputed witness margin {min:.3e} > 0"))
        }
        PositivityOutcome::Infeasible {
            certificate,
            region,
            grid_resolution,
        } => {
            let sample = region_sample(&region, grid_resolution)?;
            match certificate {
                HullCertificate::Inside { weights, .. } => {
                    if weights.len() != sample.len() {
                        return Err(Error::DimensionMismatch {
                            expected: sample.len(),
                            got: weights.len(),
                        });
                    }
                    let mut acc = vec![0.0; s.ambient_dim()];
                    for (x, &w) in sample.iter().zip(&weights) {
                        for (a, v) in acc.iter_mut().zip(curve_point(s, x)?) {
                            *a += w * v;
                        }
                    }
                    let residual = acc.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
                    if residual > 1e-8 {
                        return Err(Error::ResidualTooLarge {
                            residual,
                            bound: 1e-8,
                        });
                    }
                    Ok(format!("recomputed inside residual {residual:.3e}"))
                }
                HullCertificate::Separated { functional, .. } => {
                    let mut min = f64::INFINITY;
                    for x in &sample {
                        let g = curve_point(s, x)?;
                        let v: f64 = g.iter().zip(&functional).map(|(&a, &b)| a * b).sum();
                        min = min.min(v);
                    }
                    if min <= 0.0 {
                        return Err(Error::ResidualTooLarge {
                            residual: -min,
                            bound: 0.0,
                        });
                    }
                    Ok(format!("recomputed separation margin {min:.3e} > 0"))
                }
            }
        }
        PositivityOutcome::Indeterminate { .. } => Ok("indeterminate record".into()),
    }
}

fn check_certificate(cert: &SignChangeCertificate, s: &Spectrum) -> Result<(f64, f64)> {
    let residual = cert.residual_for(s)?;
    if residual > 1e-8 {
        return Err(Error::ResidualTooLarge {
            residual,
            bound: 1e-8,
        });
    }
    let diameter = cert.max_pairwise_distance()?;
    if (diameter - cert.diameter).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "stored diameter {} differs from recomputed {diameter}",
            cert.diameter
        )));
    }
    if cert.weights.iter().any(|&w| w < -1e-12) {
        return Err(Error::InvalidInput("negative certificate weight".into()));
    }
    Ok((residual, diameter))
}

pub fn signset(text: &str, s: &Spectrum) -> Result<String> {
    let search: DiameterSearch = parse(text, "diameter search")?;
    let (residual, diameter) = check_certificate(&search.certificate, s)?;
    Ok(format!(
        "recomputed certificate residual {residual:.3e}, diameter {diameter:.6}"
    ))
}

pub fn decomposition(text: &str, s: &Spectrum) -> Result<String> {
    let dec: CurveDecomposition = parse(text, "decomposition")?;
    let residual = dec.residual_for(s)?;
    if residual > 1e-8 {
        return Err(Error::ResidualTooLarge {
            residual,
            bound: 1e-8,
        });
    }
    let span = span_length(&dec.params);
    if (span - dec.span_length).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "stored span {} differs from recomputed {span}",
            dec.span_length
        )));
    }
    Ok(format!(
        "recomputed residual {residual:.3e}, span {span:.6}"
    ))
}

pub fn rule(text: &str, spectrum: Option<&Spectrum>) -> Result<String> {
    let rule: CubatureRule = parse(text, "cubature rule")?;
    let sum: f64 = rule.weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || rule.weights.iter().any(|&w| w < -1e-12) {
        return Err(Error::InvalidInput(
            "weights not a probability vector".into(),
        ));
    }
    let max_residual = if let Some(degree) = rule.exact_space.strip_prefix("T_") {
        let d: u32 = degree
            .parse()
            .map_err(|_| Error::InvalidInput("bad exact space".into()))?;
        let s = Spectrum::initial_segment(d)?;
        recompute_trig(&rule, &s)?
    } else if let Some(rest) = rule.exact_space.strip_prefix("P_") {
        let degree: u32 = rest
            .trim_end_matches("[0,1]")
            .parse()
            .map_err(|_| Error::InvalidInput("bad exact space".into()))?;
        let mut worst = 0.0f64;
        for j in 0..=degree {
            let acc: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, &w)| w * x[0].powi(j as i32))
                .sum();
            worst = worst.max((acc - 1.0 / (j as f64 + 1.0)).abs());
        }
        worst
    } else {
        let s = spectrum.ok_or_else(|| {
            Error::InvalidInput("a --spectrum is needed to re-check this rule".into())
        })?;
        recompute_trig(&rule, s)?
    };
    if max_residual > rule.max_residual + 1e-12 {
        return Err(Error::ResidualTooLarge {
            residual: max_residual,
            bound: rule.max_residual,
        });
    }
    Ok(format!("recomputed max residual {max_residual:.3e}"))
}

fn recompute_trig(rule: &CubatureRule, s: &Spectrum) -> Result<f64> {
    let mut worst = (rule.weights.iter().sum::<f64>() - 1.0).abs();
    for f in s.freqs() {
        let mut cos_acc = 0.0;
        let mut sin_acc = 0.0;
        for (x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let theta: f64 = zeromean::trig::TWO_PI
                * f.entries()
                    .iter()
                    .zip(x)
                    .map(|(&k, &t)| k as f64 * t)
                    .sum::<f64>();
            cos_acc += w * theta.cos();
            sin_acc += w * theta.sin();
        }
        worst = worst.max(cos_acc.abs()).max(sin_acc.abs());
    }
    Ok(worst)
}

pub fn bounds(text: &str) -> Result<String> {
    let rep: BoundReport = parse(text, "bound report")?;
    let ko = kozma_oravecz_radius(&rep.spectrum)?;
    let st = steinerberger_radius(&rep.spectrum, rep.n)?;
    if (ko - rep.kozma_oravecz).abs() > 1e-12 || (st - rep.steinerberger).abs() > 1e-12 {
        return Err(Error::InvalidInput(
            "stored radii differ from formulas".into(),
        ));
    }
    if let Some(tr) = rep.torus_radius {
        let expect = torus_radius(rep.n, rep.p)?;
        if (tr - expect).abs() > 1e-12 {
            return Err(Error::InvalidInput("stored grid radius differs".into()));
        }
    }
    Ok("bound formulas reproduce".into())
}

pub fn gridcheck(text: &str, n: u32, p: u64) -> Result<String> {
    let stored: zeromean::bounds::GridCheck = parse(text, "grid check")?;
    let fresh = verify_grid_property(n, p)?;
    if stored.passes != fresh.passes || (stored.radius - fresh.radius).abs() > 1e-12 {
        return Err(Error::InvalidInput("stored grid check differs".into()));
    }
    Ok(format!(
        "grid covering reproduces (radius {:.6})",
        fresh.radius
    ))
}
