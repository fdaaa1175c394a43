#![allow(clippy::needless_range_loop)]

//! Independent oracles for the search results: explicit positive
//! functionals, brute-force subset enumeration, determinant criteria, and
//! a vertex-enumeration LP solver. None of these share code with the
//! implementation paths they check.

use zeromean::caratheodory::{convex_position_check, decompose_origin, zp_orbit_points};
use zeromean::linprog::{
    caratheodory_reduce, origin_in_hull, solve_lp, HullCertificate, LpOutcome, LpProblem, Sense,
    SolverOptions,
};
use zeromean::trig::{curve_points_circle, Frequency, Interval, Spectrum, TorusPoint, TrigPoly};
use zeromean::witness::{interval_positivity, min_diameter_sign_change, PositivityOutcome};

// ---------------------------------------------------------------------------
// Arc separation for S = {1,2}: an explicit positive functional certifies
// the Separated verdict with no LP involved.
// ---------------------------------------------------------------------------

/// Product of two cosine arches centered at 0.3, expanded over {1,2} with
/// zero constant term; strictly positive exactly for |t - 0.3| < 0.3018.
fn arch_product_witness() -> TrigPoly {
    let base = TrigPoly::new(
        1,
        vec![
            (Frequency::new(vec![1]).unwrap(), 1.2425, 0.0),
            (Frequency::new(vec![2]).unwrap(), -0.5, 0.0),
        ],
    )
    .unwrap();
    base.rotate(&[-0.3]).unwrap()
}

#[test]
fn arc_samples_of_degree_two_curve_are_separated() {
    let s = Spectrum::circle(&[1, 2]).unwrap();
    let witness = arch_product_witness();
    // Oracle: the explicit functional is positive on a dense refinement of
    // the arc, so no sample of the arc can contain the origin in its hull.
    let mut min = f64::INFINITY;
    for j in 0..=2000 {
        let t = 0.6 * j as f64 / 2000.0;
        min = min.min(witness.evaluate(&TorusPoint::circle(t)).unwrap());
    }
    assert!(min > 0.02, "oracle functional min {min}");

    for samples in [50usize, 2000] {
        let params: Vec<f64> = (0..=samples)
            .map(|j| 0.6 * j as f64 / samples as f64)
            .collect();
        let pts = curve_points_circle(&s, &params).unwrap();
        let cert = origin_in_hull(&pts, 1e-9).unwrap();
        assert!(
            matches!(cert, HullCertificate::Separated { .. }),
            "{samples} samples"
        );
    }
}

#[test]
fn degree_two_interval_transition_across_two_thirds() {
    let s = Spectrum::circle(&[1, 2]).unwrap();
    let below = interval_positivity(&s, &Interval::new(0.0, 0.60).unwrap(), 2048, 1e-3).unwrap();
    let PositivityOutcome::Feasible { witness } = below else {
        panic!("expected a witness at length 0.60");
    };
    // Dense re-check of the returned coefficients.
    let f = TrigPoly::from_curve_coeffs(&s, &witness.coeffs).unwrap();
    for j in 0..=5000 {
        let t = 0.60 * j as f64 / 5000.0;
        assert!(f.evaluate(&TorusPoint::circle(t)).unwrap() > 0.0);
    }
    let above = interval_positivity(&s, &Interval::new(0.0, 0.70).unwrap(), 2048, 1e-3).unwrap();
    assert!(above.is_infeasible());
}

// ---------------------------------------------------------------------------
// Caratheodory reduction against brute-force subset enumeration.
// ---------------------------------------------------------------------------

/// Least-squares weights for `sum w_i v_i = 0, sum w_i = 1` over a fixed
/// support; reports the combination and its worst-coordinate residual.
fn solve_support(points: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let k = points.len();
    let d = points[0].len();
    let rows = d + 1;
    // normal equations for the (d+1) x k system
    let m = |r: usize, c: usize| -> f64 {
        if r < d {
            points[c][r]
        } else {
            1.0
        }
    };
    let mut ata = vec![vec![0.0; k]; k];
    let mut atb = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            for r in 0..rows {
                ata[i][j] += m(r, i) * m(r, j);
            }
        }
        atb[i] = m(d, i); // only the sum row of e is nonzero
    }
    // Gaussian elimination with partial pivoting.
    let mut a = ata;
    let mut b = atb;
    for col in 0..k {
        let piv =
            (col..k).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in 0..k {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let w: Vec<f64> = (0..k).map(|i| b[i] / a[i][i]).collect();
    let mut worst = 0.0f64;
    for r in 0..rows {
        let acc: f64 = (0..k).map(|c| m(r, c) * w[c]).sum();
        let target = if r < d { 0.0 } else { 1.0 };
        worst = worst.max((acc - target).abs());
    }
    Some((w, worst))
}

#[test]
fn reduction_matches_subset_enumeration() {
    let pts = vec![
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.0, 1.0],
        vec![0.0, -1.0],
    ];
    // Oracle: all subsets of size <= 3 admitting valid convex weights.
    let mut valid: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..16 {
        let idx: Vec<usize> = (0..4).filter(|&i| mask & (1 << i) != 0).collect();
        if idx.len() > 3 {
            continue;
        }
        let support: Vec<&[f64]> = idx.iter().map(|&i| pts[i].as_slice()).collect();
        if let Some((w, res)) = solve_support(&support) {
            if res <= 1e-9 && w.iter().all(|&x| x >= -1e-9) {
                valid.push(idx);
            }
        }
    }
    assert!(
        valid.contains(&vec![0, 1]),
        "oracle must find the horizontal pair"
    );

    let (idx, w) = caratheodory_reduce(&pts, &[0.25; 4], None).unwrap();
    assert!(
        valid.contains(&idx),
        "reduction output {idx:?} not in oracle set {valid:?}"
    );
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

// ---------------------------------------------------------------------------
// Origin decompositions against a 720-grid brute force.
// ---------------------------------------------------------------------------

#[test]
fn decomposition_of_degree_two_matches_720_grid_enumeration() {
    let s = Spectrum::initial_segment(2).unwrap();
    let n = 720usize;
    let curve: Vec<Vec<f64>> =
        curve_points_circle(&s, &(0..n).map(|j| j as f64 / n as f64).collect::<Vec<_>>()).unwrap();
    // Anchored triples (0, a, b): rotation maps the grid to itself, so this
    // covers every grid triple up to rotation.
    let mut feasible: Vec<(usize, usize)> = Vec::new();
    for a in 1..n {
        for b in (a + 1)..n {
            let support = [
                curve[0].as_slice(),
                curve[a].as_slice(),
                curve[b].as_slice(),
            ];
            if let Some((w, res)) = solve_support(&support) {
                if res <= 1e-8 && w.iter().all(|&x| x >= -1e-9) {
                    feasible.push((a, b));
                }
            }
        }
    }
    // Exactly the equispaced thirds survive at this tolerance.
    assert_eq!(feasible, vec![(240, 480)]);

    let dec = decompose_origin(&s, 24).unwrap();
    assert_eq!(dec.support_size(), 3);
    // Rotate the computed support to anchor 0 and compare with the oracle.
    let g1 = (dec.params[1] - dec.params[0]).rem_euclid(1.0);
    let g2 = (dec.params[2] - dec.params[0]).rem_euclid(1.0);
    assert!((g1 - 240.0 / 720.0).abs() < 1e-6, "gap {g1}");
    assert!((g2 - 480.0 / 720.0).abs() < 1e-6, "gap {g2}");
}

#[test]
fn raked_spectrum_admits_two_point_decomposition_on_720_grid() {
    let s = Spectrum::circle(&[1, 3]).unwrap();
    let n = 720usize;
    let curve: Vec<Vec<f64>> =
        curve_points_circle(&s, &(0..n).map(|j| j as f64 / n as f64).collect::<Vec<_>>()).unwrap();
    let mut pairs: Vec<usize> = Vec::new();
    for b in 1..n {
        let support = [curve[0].as_slice(), curve[b].as_slice()];
        if let Some((w, res)) = solve_support(&support) {
            if res <= 1e-8 && w.iter().all(|&x| x >= -1e-9) {
                pairs.push(b);
            }
        }
    }
    assert_eq!(pairs, vec![360], "odd spectra cancel exactly at antipodes");

    let dec = decompose_origin(&s, 24).unwrap();
    assert!(dec.support_size() <= 3);
    assert!(dec.residual <= 1e-8);
}

// ---------------------------------------------------------------------------
// Convex position against the moment-curve determinant criterion.
// ---------------------------------------------------------------------------

fn det_n(cols: &[Vec<f64>]) -> f64 {
    let n = cols.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())
            .unwrap();
        if m[piv][col].abs() < 1e-14 {
            return 0.0;
        }
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= m[col][col];
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (a, b) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *a -= f * b;
                }
            }
        }
    }
    det
}

/// Homogeneous coordinates `[1; gamma(x)]`: on a closed convex curve the
/// determinants over ordered (2d+1)-subsets form a circular Vandermonde and
/// share one sign, which certifies the cyclic-polytope vertex structure.
fn homogeneous(p: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(p.len() + 1);
    v.push(1.0);
    v.extend_from_slice(p);
    v
}

#[test]
fn orbit_points_pass_determinant_criterion() {
    let orb = zp_orbit_points(2, 11).unwrap();
    assert_eq!(orb.points.len(), 11);
    // Oracle: ordered 5-subsets in homogeneous coordinates keep one sign.
    let mut sign = 0.0f64;
    let mut subsets = 0usize;
    for i in 0..11 {
        for j in (i + 1)..11 {
            for k in (j + 1)..11 {
                for l in (k + 1)..11 {
                    for q in (l + 1)..11 {
                        let cols: Vec<Vec<f64>> = [i, j, k, l, q]
                            .iter()
                            .map(|&v| homogeneous(&orb.points[v]))
                            .collect();
                        let d = det_n(&cols);
                        assert!(d.abs() > 1e-9, "degenerate subset {i},{j},{k},{l},{q}");
                        if sign == 0.0 {
                            sign = d.signum();
                        } else {
                            assert_eq!(d.signum(), sign, "subset {i},{j},{k},{l},{q}");
                        }
                        subsets += 1;
                    }
                }
            }
        }
    }
    assert_eq!(subsets, 462);
    // The LP-based report agrees.
    let rep = convex_position_check(&orb.points).unwrap();
    assert!(rep.convex);
}

#[test]
fn equispaced_degree_two_points_in_convex_position() {
    let s = Spectrum::initial_segment(2).unwrap();
    let params: Vec<f64> = (0..7).map(|j| j as f64 / 7.0).collect();
    let pts = curve_points_circle(&s, &params).unwrap();
    assert!(convex_position_check(&pts).unwrap().convex);
}

// ---------------------------------------------------------------------------
// Simplex against vertex enumeration on small problems.
// ---------------------------------------------------------------------------

/// Exhaustive vertex enumeration for bounded LPs with <= 3 variables:
/// every choice of n active constraints (rows or bounds) is solved and
/// checked for feasibility; the best feasible vertex is the optimum.
fn vertex_oracle(p: &LpProblem) -> Option<f64> {
    let nv = p.objective.len();
    // Each constraint as (coefs, rhs): rows plus active variable bounds.
    let mut cons: Vec<(Vec<f64>, f64)> = Vec::new();
    for (row, &b) in p.rows.iter().zip(&p.rhs) {
        cons.push((row.clone(), b));
    }
    for (j, &(lo, up)) in p.bounds.iter().enumerate() {
        for bound in [lo, up].into_iter().flatten() {
            let mut r = vec![0.0; nv];
            r[j] = 1.0;
            cons.push((r, bound));
        }
    }
    let feasible = |x: &[f64]| -> bool {
        for ((row, &b), sense) in p.rows.iter().zip(&p.rhs).zip(&p.senses) {
            let v: f64 = row.iter().zip(x).map(|(&a, &t)| a * t).sum();
            let ok = match sense {
                Sense::Le => v <= b + 1e-9,
                Sense::Ge => v >= b - 1e-9,
                Sense::Eq => (v - b).abs() <= 1e-9,
            };
            if !ok {
                return false;
            }
        }
        for (j, &(lo, up)) in p.bounds.iter().enumerate() {
            if let Some(l) = lo {
                if x[j] < l - 1e-9 {
                    return false;
                }
            }
            if let Some(u) = up {
                if x[j] > u + 1e-9 {
                    return false;
                }
            }
        }
        true
    };
    let mut best: Option<f64> = None;
    let m = cons.len();
    let mut pick = vec![0usize; nv];
    fn combos(
        m: usize,
        k: usize,
        start: usize,
        pick: &mut Vec<usize>,
        depth: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == k {
            out.push(pick[..k].to_vec());
            return;
        }
        for i in start..m {
            pick[depth] = i;
            combos(m, k, i + 1, pick, depth + 1, out);
        }
    }
    let mut all = Vec::new();
    combos(m, nv, 0, &mut pick, 0, &mut all);
    for subset in all {
        // Solve the square system of active constraints.
        let mut a: Vec<Vec<f64>> = subset.iter().map(|&i| cons[i].0.clone()).collect();
        let mut b: Vec<f64> = subset.iter().map(|&i| cons[i].1).collect();
        let mut ok = true;
        for col in 0..nv {
            let piv = (col..nv)
                .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
                .unwrap();
            if a[piv][col].abs() < 1e-10 {
                ok = false;
                break;
            }
            a.swap(col, piv);
            b.swap(col, piv);
            for r in 0..nv {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    for c in 0..nv {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
        if !ok {
            continue;
        }
        let x: Vec<f64> = (0..nv).map(|i| b[i] / a[i][i]).collect();
        if feasible(&x) {
            let obj: f64 = p.objective.iter().zip(&x).map(|(&c, &t)| c * t).sum();
            best = Some(best.map_or(obj, |cur: f64| cur.max(obj)));
        }
    }
    best
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let corpus: Vec<LpProblem> = vec![
        LpProblem::with_nonneg_vars(vec![1.0], vec![vec![1.0]], vec![Sense::Le], vec![3.0]),
        LpProblem::with_nonneg_vars(
            vec![1.0, 1.0],
            vec![vec![1.0, 1.0]],
            vec![Sense::Le],
            vec![1.0],
        ),
        LpProblem::with_nonneg_vars(
            vec![2.0, 3.0],
            vec![vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![Sense::Le, Sense::Le, Sense::Le],
            vec![4.0, 2.0, 3.0],
        ),
        LpProblem::with_nonneg_vars(
            vec![1.0, -1.0],
            vec![vec![1.0, 2.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![Sense::Ge, Sense::Le, Sense::Le],
            vec![2.0, 3.0, 5.0],
        ),
        LpProblem::with_nonneg_vars(
            vec![0.0, 1.0],
            vec![vec![-1.0, 1.0], vec![1.0, 1.0], vec![0.0, 1.0]],
            vec![Sense::Le, Sense::Le, Sense::Le],
            vec![0.0, 2.0, 0.8],
        ),
        LpProblem::with_nonneg_vars(
            vec![1.0, 1.0],
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            vec![Sense::Eq, Sense::Eq],
            vec![2.0, 0.0],
        ),
        LpProblem::with_nonneg_vars(
            vec![1.0, 1.0, 1.0],
            vec![
                vec![1.0, 1.0, 0.0],
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
            ],
            vec![Sense::Le, Sense::Le, Sense::Le],
            vec![1.0, 1.0, 1.0],
        ),
        LpProblem {
            objective: vec![-1.0, -1.0],
            rows: vec![vec![1.0, 1.0]],
            senses: vec![Sense::Ge],
            rhs: vec![-4.0],
            bounds: vec![(Some(-2.0), None), (Some(-3.0), None)],
        },
    ];
    for (i, p) in corpus.iter().enumerate() {
        let oracle = vertex_oracle(p).unwrap_or_else(|| panic!("case {i}: oracle infeasible"));
        match solve_lp(p, &SolverOptions::default()).unwrap() {
            LpOutcome::Optimal { objective, .. } => {
                assert!(
                    (objective - oracle).abs() <= 1e-9,
                    "case {i}: simplex {objective} vs oracle {oracle}"
                );
            }
            other => panic!("case {i}: unexpected {other:?}"),
        }
        // Both pivot rules agree.
        match solve_lp(p, &SolverOptions::dantzig()).unwrap() {
            LpOutcome::Optimal { objective, .. } => {
                assert!((objective - oracle).abs() <= 1e-9, "case {i} (dantzig)");
            }
            other => panic!("case {i} (dantzig): unexpected {other:?}"),
        }
    }
}

#[test]
fn simplex_detects_infeasible_and_unbounded() {
    let infeasible = LpProblem::with_nonneg_vars(
        vec![1.0],
        vec![vec![1.0], vec![1.0]],
        vec![Sense::Ge, Sense::Le],
        vec![1.0, 0.0],
    );
    assert!(vertex_oracle(&infeasible).is_none());
    assert!(matches!(
        solve_lp(&infeasible, &SolverOptions::default()).unwrap(),
        LpOutcome::Infeasible { .. }
    ));

    let unbounded =
        LpProblem::with_nonneg_vars(vec![1.0], vec![vec![1.0]], vec![Sense::Ge], vec![1.0]);
    assert!(matches!(
        solve_lp(&unbounded, &SolverOptions::default()).unwrap(),
        LpOutcome::Unbounded
    ));
}

// ---------------------------------------------------------------------------
// Interval and ball verdicts at the documented regimes.
// ---------------------------------------------------------------------------

#[test]
fn circle_ball_of_radius_three_tenths_infeasible() {
    // An n = 1 ball of radius 0.3 is a closed interval of length 0.6 >= 1/2.
    let s = Spectrum::circle(&[1]).unwrap();
    let ball = zeromean::trig::GeodesicBall::new(TorusPoint::circle(0.25), 0.3).unwrap();
    let out = zeromean::witness::ball_positivity(&s, &ball, 512, 1e-3).unwrap();
    assert!(out.is_infeasible());
}

#[test]
fn degree_two_diameter_bounded_by_raked_value() {
    let s = Spectrum::circle(&[1, 2]).unwrap();
    let res = min_diameter_sign_change(&s, 5e-3, 105).unwrap();
    assert!(
        res.feasible_diameter <= 0.4 + 0.01,
        "{}",
        res.feasible_diameter
    );
    assert!(res.certificate.residual <= 1e-8);
}

/// The gapped spectrum {1, 6} has its interval transition strictly above
/// the collapsed-residue value 1/2 (positive witnesses exist on closed
/// half-circles) and below the degree bound 6/7.
#[test]
fn gapped_spectrum_threshold_sits_between_residue_and_degree_bounds() {
    let s = Spectrum::circle(&[1, 6]).unwrap();
    let rec = zeromean::witness::babenko_threshold(&s, 5e-3).unwrap();
    assert!(rec.length > 0.52, "measured {}", rec.length);
    assert!(rec.length < 6.0 / 7.0 + 0.01, "measured {}", rec.length);
    // Feasible strictly below the transition.
    let out = interval_positivity(&s, &Interval::new(0.0, 0.45).unwrap(), 2048, 1e-3).unwrap();
    assert!(out.is_feasible());
}
