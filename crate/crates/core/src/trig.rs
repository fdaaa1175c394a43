//! Trigonometric polynomials, their moment curves, and the flat geometry of
//! the circle and torus.
//!
//! The circle has circumference 1 (diameter 1/2); the n-torus is the unit
//! cube with opposite facets glued, carrying the l2 metric of
//! per-coordinate circle distances, hence diameter `sqrt(n)/2`.
//!
//! A polynomial is a finite sum of `a_alpha cos(2 pi <alpha,x>) +
//! b_alpha sin(2 pi <alpha,x>)` over a spectrum of nonzero nonnegative
//! integer frequency vectors. There is no constant term, so every such
//! function has zero mean over the torus.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Boundary tolerance for closed-region containment tests.
pub const CONTAINMENT_TOL: f64 = 1e-12;

/// A frequency multi-index: n nonnegative integers, not all zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frequency(Vec<u32>);

impl Frequency {
    pub fn new(alpha: Vec<u32>) -> Result<Self> {
        if alpha.is_empty() || alpha.iter().all(|&a| a == 0) {
            return Err(Error::ZeroFrequency);
        }
        Ok(Self(alpha))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn max_entry(&self) -> u32 {
        *self.0.iter().max().expect("nonempty")
    }

    /// Squared Euclidean norm as an exact integer.
    pub fn norm_sq(&self) -> u64 {
        self.0.iter().map(|&a| a as u64 * a as u64).sum()
    }

    /// `<alpha, x>` for a torus point of matching dimension.
    pub fn dot(&self, x: &TorusPoint) -> f64 {
        self.0
            .iter()
            .zip(x.coords())
            .map(|(&a, &t)| a as f64 * t)
            .sum()
    }
}

/// A finite duplicate-free set of frequencies in canonical (lexicographic)
/// order. Determines the curve `gamma` and the function space spanned by the
/// corresponding cosines and sines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    n: usize,
    freqs: Vec<Frequency>,
}

impl Spectrum {
    pub fn new(n: usize, mut freqs: Vec<Frequency>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("torus dimension must be >= 1".into()));
        }
        if freqs.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        for f in &freqs {
            if f.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: f.dim(),
                });
            }
        }
        freqs.sort();
        if freqs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateFrequency);
        }
        Ok(Self { n, freqs })
    }

    /// Circle spectrum from a list of positive integer frequencies.
    pub fn circle(freqs: &[u32]) -> Result<Self> {
        let fs = freqs
            .iter()
            .map(|&k| Frequency::new(vec![k]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(1, fs)
    }

    /// The initial segment {1, ..., d} on the circle.
    pub fn initial_segment(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptySpectrum);
        }
        Self::circle(&(1..=d).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn freqs(&self) -> &[Frequency] {
        &self.freqs
    }

    /// Ambient dimension of the curve: two coordinates per frequency.
    pub fn ambient_dim(&self) -> usize {
        2 * self.freqs.len()
    }

    pub fn max_entry(&self) -> u32 {
        self.freqs.iter().map(|f| f.max_entry()).max().unwrap_or(0)
    }

    /// True when the spectrum is exactly {1, ..., d} on the circle.
    pub fn is_initial_segment(&self) -> bool {
        self.n == 1
            && self
                .freqs
                .iter()
                .enumerate()
                .all(|(i, f)| f.entries() == [i as u32 + 1])
    }
}

/// A point on the n-torus, coordinates reduced mod 1 into [0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusPoint(Vec<f64>);

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords.into_iter().map(reduce_mod_1).collect())
    }

    pub fn circle(t: f64) -> Self {
        Self::new(vec![t])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Coordinate-wise translation, reduced mod 1.
    pub fn translate(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: shift.len(),
            });
        }
        Ok(Self::new(
            self.0.iter().zip(shift).map(|(&c, &s)| c + s).collect(),
        ))
    }
}

fn reduce_mod_1(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on the circle of circumference 1; always in [0, 1/2].
pub fn circle_distance(s: f64, t: f64) -> f64 {
    let d = (s - t).abs().rem_euclid(1.0);
    d.min(1.0 - d)
}

/// l2 distance on the flat torus (per-coordinate circle distances).
pub fn torus_distance(x: &TorusPoint, y: &TorusPoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    let sq: f64 = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(&a, &b)| {
            let d = circle_distance(a, b);
            d * d
        })
        .sum();
    Ok(sq.sqrt())
}

/// Diameter of the n-torus, `sqrt(n)/2`.
pub fn torus_diameter(n: usize) -> f64 {
    0.5 * (n as f64).sqrt()
}

/// A closed arc {start + s mod 1 : 0 <= s <= length} on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub length: f64,
}

impl Interval {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&length) {
            return Err(Error::InvalidInput(format!(
                "interval length {length} outside [0, 1]"
            )));
        }
        Ok(Self {
            start: reduce_mod_1(start),
            length,
        })
    }

    /// Closed containment with a symmetric boundary tolerance.
    pub fn contains(&self, t: f64) -> bool {
        let offset = (t - self.start).rem_euclid(1.0);
        offset <= self.length + CONTAINMENT_TOL || offset >= 1.0 - CONTAINMENT_TOL
    }

    /// Near-uniform sample with both endpoints included; `resolution` is the
    /// target point count per unit length. A full circle wraps instead of
    /// duplicating the seam.
    pub fn grid(&self, resolution: usize) -> Vec<f64> {
        let resolution = resolution.max(1);
        if self.length >= 1.0 - 1e-15 {
            return (0..resolution)
                .map(|j| reduce_mod_1(self.start + j as f64 / resolution as f64))
                .collect();
        }
        let m = ((self.length * resolution as f64).ceil() as usize).max(1);
        (0..=m)
            .map(|j| reduce_mod_1(self.start + self.length * j as f64 / m as f64))
            .collect()
    }
}

/// A closed metric ball in the flat torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicBall {
    pub center: TorusPoint,
    pub radius: f64,
}

impl GeodesicBall {
    pub fn new(center: TorusPoint, radius: f64) -> Result<Self> {
        if radius < 0.0 {
            return Err(Error::InvalidInput(format!("negative radius {radius}")));
        }
        let diam = torus_diameter(center.dim());
        if radius > diam + CONTAINMENT_TOL {
            return Err(Error::InvalidInput(format!(
                "radius {radius} exceeds torus diameter {diam}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, x: &TorusPoint) -> Result<bool> {
        Ok(torus_distance(&self.center, x)? <= self.radius + CONTAINMENT_TOL)
    }
}

/// Region on the circle/torus: an arc (n = 1 only) or a geodesic ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Interval(Interval),
    Ball(GeodesicBall),
}

impl Region {
    pub fn contains(&self, x: &TorusPoint) -> Result<bool> {
        match self {
            Region::Interval(iv) => {
                if x.dim() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: x.dim(),
                    });
                }
                Ok(iv.contains(x.coords()[0]))
            }
            Region::Ball(b) => b.contains(x),
        }
    }
}

/// Real trigonometric polynomial with cosine coefficient `a` and sine
/// coefficient `b` per frequency, index-aligned with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    spectrum: Spectrum,
    coeffs: Vec<(f64, f64)>,
}

impl TrigPoly {
    /// `coeffs[i]` pairs with `spectrum.freqs()[i]` *after* canonical
    /// ordering, so callers must supply frequencies and pairs together.
    pub fn new(n: usize, terms: Vec<(Frequency, f64, f64)>) -> Result<Self> {
        let mut terms = terms;
        terms.sort_by(|x, y| x.0.cmp(&y.0));
        let freqs: Vec<Frequency> = terms.iter().map(|t| t.0.clone()).collect();
        let spectrum = Spectrum::new(n, freqs)?;
        let coeffs = terms.into_iter().map(|t| (t.1, t.2)).collect();
        Ok(Self { spectrum, coeffs })
    }

    /// Build from a spectrum plus aligned coefficient pairs.
    pub fn from_spectrum(spectrum: Spectrum, coeffs: Vec<(f64, f64)>) -> Result<Self> {
        if coeffs.len() != spectrum.len() {
            return Err(Error::DimensionMismatch {
                expected: spectrum.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { spectrum, coeffs })
    }

    /// Build from a flat coefficient vector in curve coordinate order
    /// (cosine then sine per frequency), e.g. an LP positivity witness.
    pub fn from_curve_coeffs(spectrum: &Spectrum, flat: &[f64]) -> Result<Self> {
        if flat.len() != spectrum.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: spectrum.ambient_dim(),
                got: flat.len(),
            });
        }
        let coeffs = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        Ok(Self {
            spectrum: spectrum.clone(),
            coeffs,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn coeffs(&self) -> &[(f64, f64)] {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.spectrum.n()
    }

    /// Evaluate at a torus point. Terms are summed in canonical spectrum
    /// order so results are bit-stable.
    pub fn evaluate(&self, x: &TorusPoint) -> Result<f64> {
        if x.dim() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.dim(),
            });
        }
        let mut acc = 0.0;
        for (f, &(a, b)) in self.spectrum.freqs().iter().zip(&self.coeffs) {
            let theta = TWO_PI * f.dot(x);
            acc += a * theta.cos() + b * theta.sin();
        }
        Ok(acc)
    }

    /// The polynomial `t -> f(t + shift)`, realized as a per-frequency
    /// coefficient rotation by `2 pi <alpha, shift>`.
    pub fn rotate(&self, shift: &[f64]) -> Result<TrigPoly> {
        if shift.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: shift.len(),
            });
        }
        let coeffs = self
            .spectrum
            .freqs()
            .iter()
            .zip(&self.coeffs)
            .map(|(f, &(a, b))| {
                let theta: f64 = TWO_PI
                    * f.entries()
                        .iter()
                        .zip(shift)
                        .map(|(&k, &s)| k as f64 * s)
                        .sum::<f64>();
                let (sin, cos) = theta.sin_cos();
                (a * cos + b * sin, -a * sin + b * cos)
            })
            .collect();
        Ok(TrigPoly {
            spectrum: self.spectrum.clone(),
            coeffs,
        })
    }

    /// Mean over the torus by equispaced product-grid quadrature, which is
    /// exact below the Nyquist limit; the result is |.| <= 1e-12 for every
    /// valid polynomial.
    pub fn mean(&self, resolution: usize) -> Result<f64> {
        let required = 2 * self.spectrum.max_entry() as usize + 1;
        if resolution < required {
            return Err(Error::ResolutionTooSmall {
                required,
                got: resolution,
            });
        }
        let n = self.n();
        let total = (resolution as u64)
            .checked_pow(n as u32)
            .unwrap_or(u64::MAX);
        if total > 100_000_000 {
            return Err(Error::SizeCap {
                got: total,
                cap: 100_000_000,
            });
        }
        let mut acc = 0.0;
        let mut idx = vec![0usize; n];
        loop {
            let x = TorusPoint::new(idx.iter().map(|&j| j as f64 / resolution as f64).collect());
            acc += self.evaluate(&x)?;
            // odometer increment
            let mut carry = true;
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < resolution {
                    carry = false;
                    break;
                }
                *slot = 0;
            }
            if carry {
                break;
            }
        }
        Ok(acc / total as f64)
    }
}

/// Evaluate the curve `gamma(x) = (cos(2 pi <alpha,x>), sin(2 pi <alpha,x>))`
/// per frequency, in canonical spectrum order with cosine first.
///
/// For the circle spectrum {1, ..., d} this is a coordinate permutation of
/// the classical trigonometric moment curve.
pub fn curve_point(s: &Spectrum, x: &TorusPoint) -> Result<Vec<f64>> {
    if x.dim() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            got: x.dim(),
        });
    }
    let mut out = Vec::with_capacity(s.ambient_dim());
    for f in s.freqs() {
        let theta = TWO_PI * f.dot(x);
        let (sin, cos) = theta.sin_cos();
        out.push(cos);
        out.push(sin);
    }
    Ok(out)
}

/// Curve points over a parameter list on the circle.
pub fn curve_points_circle(s: &Spectrum, params: &[f64]) -> Result<Vec<Vec<f64>>> {
    params
        .iter()
        .map(|&t| curve_point(s, &TorusPoint::circle(t)))
        .collect()
}

// ---------------------------------------------------------------------------
// JSON document shared by the whole toolkit:
// {"n": int, "terms": [{"alpha": [ints], "a": float, "b": float}]}
// A bare spectrum omits the coefficient fields.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermDoc {
    alpha: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    n: usize,
    terms: Vec<TermDoc>,
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = PolyDoc {
            n: self.n,
            terms: self
                .freqs
                .iter()
                .map(|f| TermDoc {
                    alpha: f.entries().to_vec(),
                    a: None,
                    b: None,
                })
                .collect(),
        };
        doc.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let doc = PolyDoc::deserialize(de)?;
        let freqs = doc
            .terms
            .into_iter()
            .map(|t| Frequency::new(t.alpha))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Spectrum::new(doc.n, freqs).map_err(D::Error::custom)
    }
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = PolyDoc {
            n: self.n(),
            terms: self
                .spectrum
                .freqs()
                .iter()
                .zip(&self.coeffs)
                .map(|(f, &(a, b))| TermDoc {
                    alpha: f.entries().to_vec(),
                    a: Some(a),
                    b: Some(b),
                })
                .collect(),
        };
        doc.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let doc = PolyDoc::deserialize(de)?;
        let terms = doc
            .terms
            .into_iter()
            .map(|t| Frequency::new(t.alpha).map(|f| (f, t.a.unwrap_or(0.0), t.b.unwrap_or(0.0))))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        TrigPoly::new(doc.n, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_1d(terms: &[(u32, f64, f64)]) -> TrigPoly {
        TrigPoly::new(
            1,
            terms
                .iter()
                .map(|&(k, a, b)| (Frequency::new(vec![k]).unwrap(), a, b))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_pure_sine() {
        // f = sin(2 pi t) at t = 1/4.
        let f = poly_1d(&[(1, 0.0, 1.0)]);
        assert!((f.evaluate(&TorusPoint::circle(0.25)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_pure_cosine() {
        let f = poly_1d(&[(1, 1.0, 0.0)]);
        assert!((f.evaluate(&TorusPoint::circle(0.5)).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_multivariate() {
        // cos(2 pi (2 t1 + t2)) at (1/4, 1/2): the argument is an integer.
        let f = TrigPoly::new(2, vec![(Frequency::new(vec![2, 1]).unwrap(), 1.0, 0.0)]).unwrap();
        let v = f.evaluate(&TorusPoint::new(vec![0.25, 0.5])).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let f = poly_1d(&[(1, 0.0, 1.0)]);
        assert!(f.evaluate(&TorusPoint::new(vec![0.1, 0.2])).is_err());
    }

    #[test]
    fn curve_values() {
        let s = Spectrum::circle(&[1]).unwrap();
        assert_eq!(
            curve_point(&s, &TorusPoint::circle(0.0)).unwrap(),
            vec![1.0, 0.0]
        );

        let s12 = Spectrum::circle(&[1, 2]).unwrap();
        let v = curve_point(&s12, &TorusPoint::circle(0.5)).unwrap();
        let expect = [-1.0, 0.0, 1.0, 0.0];
        for (a, e) in v.iter().zip(expect) {
            assert!((a - e).abs() < 1e-15, "{v:?}");
        }

        let s2 = Spectrum::new(2, vec![Frequency::new(vec![1, 1]).unwrap()]).unwrap();
        let v = curve_point(&s2, &TorusPoint::new(vec![0.25, 0.25])).unwrap();
        assert!((v[0] + 1.0).abs() < 1e-15 && v[1].abs() < 1e-12);
    }

    #[test]
    fn circle_distance_cases() {
        assert!((circle_distance(0.1, 0.9) - 0.2).abs() < 1e-15);
        assert!((circle_distance(0.0, 0.5) - 0.5).abs() < 1e-15);
        assert_eq!(circle_distance(0.37, 0.37), 0.0);
    }

    #[test]
    fn torus_distance_cases() {
        let d = torus_distance(
            &TorusPoint::new(vec![0.0, 0.0]),
            &TorusPoint::new(vec![0.5, 0.5]),
        )
        .unwrap();
        assert!((d - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-12);

        let d1 = torus_distance(&TorusPoint::circle(0.1), &TorusPoint::circle(0.9)).unwrap();
        assert!((d1 - 0.2).abs() < 1e-15);

        let d2 = torus_distance(
            &TorusPoint::new(vec![0.0, 0.0]),
            &TorusPoint::new(vec![1.0 / 3.0, 0.0]),
        )
        .unwrap();
        assert!((d2 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mean_vanishes() {
        let f = poly_1d(&[(1, 1.0, 0.0)]);
        assert!(f.mean(8).unwrap().abs() < 1e-15);

        let f5 = poly_1d(&[(5, 0.0, 3.0)]);
        assert!(f5.mean(16).unwrap().abs() < 1e-15);

        let f2 = TrigPoly::new(2, vec![(Frequency::new(vec![1, 2]).unwrap(), 1.0, 0.0)]).unwrap();
        assert!(f2.mean(8).unwrap().abs() < 1e-15);
    }

    #[test]
    fn mean_rejects_coarse_grid() {
        let f = poly_1d(&[(5, 0.0, 3.0)]);
        assert!(matches!(
            f.mean(10),
            Err(Error::ResolutionTooSmall { required: 11, .. })
        ));
    }

    #[test]
    fn containment() {
        let arc = Interval::new(0.9, 0.2).unwrap();
        assert!(arc.contains(0.05));
        assert!(!Interval::new(0.0, 0.5).unwrap().contains(0.75));

        let ball = GeodesicBall::new(TorusPoint::new(vec![0.5, 0.5]), 1.0 / 6.0).unwrap();
        assert!(ball
            .contains(&TorusPoint::new(vec![1.0 / 3.0, 0.5]))
            .unwrap());
    }

    #[test]
    fn ball_radius_capped_by_diameter() {
        assert!(GeodesicBall::new(TorusPoint::new(vec![0.0, 0.0]), 0.72).is_err());
    }

    #[test]
    fn rotation_identity() {
        let f = poly_1d(&[(1, 0.3, -0.7), (3, 1.1, 0.2)]);
        let s = 0.137;
        let g = f.rotate(&[s]).unwrap();
        for j in 0..50 {
            let t = j as f64 / 50.0;
            let lhs = f.evaluate(&TorusPoint::circle(t + s)).unwrap();
            let rhs = g.evaluate(&TorusPoint::circle(t)).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_canonical_order_and_dups() {
        let s = Spectrum::circle(&[3, 1, 2]).unwrap();
        let ks: Vec<u32> = s.freqs().iter().map(|f| f.entries()[0]).collect();
        assert_eq!(ks, vec![1, 2, 3]);
        assert!(Spectrum::circle(&[1, 1]).is_err());
        assert!(Spectrum::circle(&[]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = poly_1d(&[(1, 0.5, -1.25), (4, 0.0, 2.0)]);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"alpha\":[1]"));
        let back: TrigPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);

        let sp = Spectrum::circle(&[1, 6]).unwrap();
        let js = serde_json::to_string(&sp).unwrap();
        assert!(!js.contains("\"a\""));
        let back: Spectrum = serde_json::from_str(&js).unwrap();
        assert_eq!(sp, back);
    }

    #[test]
    fn interval_grid_includes_endpoints() {
        let iv = Interval::new(0.0, 0.5).unwrap();
        let g = iv.grid(100);
        assert_eq!(g[0], 0.0);
        assert!((g.last().unwrap() - 0.5).abs() < 1e-15);
        // full circle: no duplicate seam point
        let full = Interval::new(0.0, 1.0).unwrap().grid(64);
        assert_eq!(full.len(), 64);
    }
}
