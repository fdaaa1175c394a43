//! Dense two-phase simplex and the convexity certificates built on it.
//!
//! The solver is a textbook full-tableau simplex: slacks for inequalities,
//! artificials where no unit column is available, Bland's rule by default
//! (optional Dantzig mode for speed). Feasibility tolerance is 1e-9.
//!
//! On top of it sit the two dual certificates for a finite point set:
//! convex-combination weights exhibiting `0 in conv(points)`, or a strictly
//! separating functional. The separating functional of an infeasible hull LP
//! is read from the phase-one dual (a Farkas certificate). The max-margin
//! functional over the sup-norm ball is obtained from the dual of
//! `min ||sum_i w_i v_i||_1` over the probability simplex, which equals
//! `max_{||a||_inf <= 1} min_i <a, v_i>` by LP duality.

use crate::error::{Error, Result};
use crate::trig::{curve_point, Spectrum, TorusPoint};
use serde::{Deserialize, Serialize};

/// Row sense of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// A dense LP: maximize `objective . x` subject to rows and variable bounds.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<f64>,
    /// Per-variable (lower, upper); `None` means unbounded on that side.
    pub bounds: Vec<(Option<f64>, Option<f64>)>,
}

impl LpProblem {
    /// All variables nonnegative, no upper bounds.
    pub fn with_nonneg_vars(
        objective: Vec<f64>,
        rows: Vec<Vec<f64>>,
        senses: Vec<Sense>,
        rhs: Vec<f64>,
    ) -> Self {
        let nv = objective.len();
        Self {
            objective,
            rows,
            senses,
            rhs,
            bounds: vec![(Some(0.0), None); nv],
        }
    }

    fn validate(&self) -> Result<()> {
        let nv = self.objective.len();
        if self.rows.len() != self.senses.len() || self.rows.len() != self.rhs.len() {
            return Err(Error::InvalidInput("row/sense/rhs length mismatch".into()));
        }
        if self.bounds.len() != nv {
            return Err(Error::InvalidInput("bounds length mismatch".into()));
        }
        for r in &self.rows {
            if r.len() != nv {
                return Err(Error::InvalidInput("row width mismatch".into()));
            }
        }
        let finite = |v: &f64| v.is_finite();
        if !self.objective.iter().all(finite)
            || !self.rhs.iter().all(finite)
            || !self.rows.iter().all(|r| r.iter().all(finite))
        {
            return Err(Error::InvalidInput("non-finite entry in LP data".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Bland's anti-cycling rule: guaranteed termination.
    Bland,
    /// Most-negative reduced cost; faster in practice.
    Dantzig,
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub pivot: PivotRule,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            pivot: PivotRule::Bland,
            max_iter: 100_000,
            tol: 1e-9,
        }
    }
}

impl SolverOptions {
    pub fn dantzig() -> Self {
        Self {
            pivot: PivotRule::Dantzig,
            ..Self::default()
        }
    }
}

/// Solver outcome. Duals are reported per original row, with the sign
/// convention `y . b` bounds the objective (equality rows have free sign).
#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        objective: f64,
        duals: Vec<f64>,
    },
    /// Phase-one dual `y`: `y . rhs > 0` while `y . A_j <= 0` for every
    /// variable column feasible direction, certifying infeasibility.
    Infeasible {
        farkas: Vec<f64>,
        infeasibility: f64,
    },
    Unbounded,
}

// ---------------------------------------------------------------------------
// Standardization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = lower + z_k
    Shift { col: usize, lower: f64 },
    /// x = upper - z_k
    Mirror { col: usize, upper: f64 },
    /// x = z_plus - z_minus
    Split { plus: usize, minus: usize },
}

struct Standardized {
    ncols: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    /// +1 or -1: whether the original row was negated to make rhs >= 0.
    flip: Vec<f64>,
    /// Index of original row, or None for an appended bound row.
    origin: Vec<Option<usize>>,
    slack_of_row: Vec<Option<usize>>,
    art_of_row: Vec<Option<usize>>,
    first_art: usize,
    var_map: Vec<VarMap>,
    /// Phase-2 cost over standardized columns (min convention).
    cost2: Vec<f64>,
}

fn standardize(p: &LpProblem) -> Standardized {
    let nv = p.objective.len();
    let mut var_map = Vec::with_capacity(nv);
    let mut n_struct = 0usize;
    // Extra rows for doubly-bounded variables.
    let mut bound_rows: Vec<(usize, f64)> = Vec::new(); // (column, ub in shifted coords)
    for &(lo, up) in p.bounds.iter() {
        match (lo, up) {
            (Some(l), None) => {
                var_map.push(VarMap::Shift {
                    col: n_struct,
                    lower: l,
                });
                n_struct += 1;
            }
            (Some(l), Some(u)) => {
                var_map.push(VarMap::Shift {
                    col: n_struct,
                    lower: l,
                });
                bound_rows.push((n_struct, u - l));
                n_struct += 1;
            }
            (None, Some(u)) => {
                var_map.push(VarMap::Mirror {
                    col: n_struct,
                    upper: u,
                });
                n_struct += 1;
            }
            (None, None) => {
                var_map.push(VarMap::Split {
                    plus: n_struct,
                    minus: n_struct + 1,
                });
                n_struct += 2;
            }
        }
    }

    let m = p.rows.len() + bound_rows.len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut senses = Vec::with_capacity(m);
    let mut origin = Vec::with_capacity(m);

    // Structural part of each row, with variable substitutions applied.
    for (i, row) in p.rows.iter().enumerate() {
        let mut r = vec![0.0; n_struct];
        let mut b = p.rhs[i];
        for (j, &c) in row.iter().enumerate() {
            match var_map[j] {
                VarMap::Shift { col, lower } => {
                    r[col] += c;
                    b -= c * lower;
                }
                VarMap::Mirror { col, upper } => {
                    r[col] -= c;
                    b -= c * upper;
                }
                VarMap::Split { plus, minus } => {
                    r[plus] += c;
                    r[minus] -= c;
                }
            }
        }
        rows.push(r);
        rhs.push(b);
        senses.push(p.senses[i]);
        origin.push(Some(i));
    }
    for &(col, ub) in &bound_rows {
        let mut r = vec![0.0; n_struct];
        r[col] = 1.0;
        rows.push(r);
        rhs.push(ub);
        senses.push(Sense::Le);
        origin.push(None);
    }

    // Normalize rhs >= 0, then append slack and artificial columns.
    let mut flip = vec![1.0; m];
    for i in 0..m {
        if rhs[i] < 0.0 {
            flip[i] = -1.0;
            rhs[i] = -rhs[i];
            for v in rows[i].iter_mut() {
                *v = -*v;
            }
            senses[i] = match senses[i] {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    let mut slack_of_row = vec![None; m];
    let mut next = n_struct;
    for i in 0..m {
        match senses[i] {
            Sense::Le => {
                slack_of_row[i] = Some(next);
                next += 1;
            }
            Sense::Ge => {
                slack_of_row[i] = Some(next);
                next += 1;
            }
            Sense::Eq => {}
        }
    }
    let first_art = next;
    let mut art_of_row = vec![None; m];
    for i in 0..m {
        // A +1 slack on a row with rhs >= 0 can start in the basis.
        let has_unit = matches!(senses[i], Sense::Le);
        if !has_unit {
            art_of_row[i] = Some(next);
            next += 1;
        }
    }
    let ncols = next;

    let mut full_rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut r = vec![0.0; ncols];
        r[..n_struct].copy_from_slice(&rows[i]);
        if let Some(s) = slack_of_row[i] {
            r[s] = match senses[i] {
                Sense::Le => 1.0,
                Sense::Ge => -1.0,
                Sense::Eq => unreachable!(),
            };
        }
        if let Some(a) = art_of_row[i] {
            r[a] = 1.0;
        }
        full_rows.push(r);
    }

    // Phase-2 cost (min convention): minimize -objective.
    let mut cost2 = vec![0.0; ncols];
    for (j, &c) in p.objective.iter().enumerate() {
        match var_map[j] {
            VarMap::Shift { col, .. } => cost2[col] += -c,
            VarMap::Mirror { col, .. } => cost2[col] += c,
            VarMap::Split { plus, minus } => {
                cost2[plus] += -c;
                cost2[minus] += c;
            }
        }
    }

    Standardized {
        ncols,
        rows: full_rows,
        rhs,
        flip,
        origin,
        slack_of_row,
        art_of_row,
        first_art,
        var_map,
        cost2,
    }
}

// ---------------------------------------------------------------------------
// Tableau simplex
// ---------------------------------------------------------------------------

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
    first_art: usize,
    /// Reduced-cost row for the active objective.
    cost: Vec<f64>,
    iterations: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let piv = self.rows[r][col];
        let inv = 1.0 / piv;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        self.rhs[r] *= inv;
        // Re-normalize the pivot entry exactly.
        self.rows[r][col] = 1.0;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][col];
            if f != 0.0 {
                let (pr, rest) = split_row(&mut self.rows, r, i);
                for (a, b) in rest.iter_mut().zip(pr.iter()) {
                    *a -= f * *b;
                }
                self.rows[i][col] = 0.0;
                self.rhs[i] -= f * self.rhs[r];
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (a, b) in self.cost.iter_mut().zip(self.rows[r].iter()) {
                *a -= f * *b;
            }
            self.cost[col] = 0.0;
        }
        self.basis[r] = col;
    }

    /// Rebuild the reduced-cost row from the original costs and the current
    /// tableau, clearing accumulated elimination error.
    fn refresh_cost(&mut self, orig_cost: &[f64]) {
        self.cost.copy_from_slice(orig_cost);
        for (i, row) in self.rows.iter().enumerate() {
            let cb = orig_cost[self.basis[i]];
            if cb != 0.0 {
                for (cj, rj) in self.cost.iter_mut().zip(row) {
                    *cj -= cb * rj;
                }
            }
        }
        for &b in &self.basis {
            self.cost[b] = 0.0;
        }
    }

    /// Run simplex iterations on the current cost row.
    /// `allow` filters entering columns.
    fn run(
        &mut self,
        rule: PivotRule,
        tol: f64,
        max_iter: usize,
        orig_cost: &[f64],
        allow: impl Fn(usize) -> bool,
    ) -> Result<RunEnd> {
        let mut banned = vec![false; self.ncols];
        let mut since_refresh = 0usize;
        loop {
            if self.iterations >= max_iter {
                return Err(Error::IterationCap(max_iter));
            }
            if since_refresh >= 256 {
                self.refresh_cost(orig_cost);
                since_refresh = 0;
            }
            let entering = match rule {
                PivotRule::Bland => {
                    (0..self.ncols).find(|&j| !banned[j] && allow(j) && self.cost[j] < -tol)
                }
                PivotRule::Dantzig => {
                    let mut best: Option<(usize, f64)> = None;
                    for j in 0..self.ncols {
                        if !banned[j]
                            && allow(j)
                            && self.cost[j] < -tol
                            && best.is_none_or(|(_, c)| self.cost[j] < c)
                        {
                            best = Some((j, self.cost[j]));
                        }
                    }
                    best.map(|(j, _)| j)
                }
            };
            let Some(col) = entering else {
                return Ok(RunEnd::Optimal);
            };
            // Ratio test; ties broken by the lowest basic variable index.
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][col];
                if a > tol {
                    let ratio = (self.rhs[r] / a).max(0.0);
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((lr, lraw)) => {
                            if ratio < lraw - 1e-12
                                || ((ratio - lraw).abs() <= 1e-12 && self.basis[r] < self.basis[lr])
                            {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = leave else {
                // No leaving row: either a genuine unbounded ray, or a
                // numerically null column whose reduced cost is rounding
                // debris. Rebuild the cost row and re-judge.
                self.refresh_cost(orig_cost);
                since_refresh = 0;
                if self.cost[col] >= -tol {
                    continue;
                }
                let colmax = self
                    .rows
                    .iter()
                    .map(|row| row[col])
                    .fold(f64::NEG_INFINITY, f64::max);
                if self.cost[col] >= -1e-6 && colmax <= tol {
                    banned[col] = true;
                    continue;
                }
                return Ok(RunEnd::Unbounded);
            };
            if self.rows[r][col].abs() < 1e-11 {
                return Err(Error::LpBreakdown(format!(
                    "pivot magnitude {:.3e} at iteration {} (row {r}, col {col})",
                    self.rows[r][col], self.iterations
                )));
            }
            self.pivot(r, col);
            self.iterations += 1;
        }
    }

    fn objective_value(&self, orig_cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, &v)| orig_cost[b] * v)
            .sum()
    }

    /// Row duals w.r.t. the active objective, read off unit columns.
    fn duals(&self, orig_cost: &[f64], std: &Standardized, kept: &[usize]) -> Vec<f64> {
        let mut y = vec![0.0; kept.len()];
        for (slot, &std_row) in kept.iter().enumerate() {
            let col = std.art_of_row[std_row].or(std.slack_of_row[std_row]);
            if let Some(c) = col {
                let sign = if std.art_of_row[std_row].is_some() {
                    1.0
                } else {
                    match std.slack_of_row[std_row] {
                        Some(_) if self_slack_sign(std, std_row) < 0.0 => -1.0,
                        _ => 1.0,
                    }
                };
                y[slot] = sign * (orig_cost[c] - self.cost[c]);
            }
        }
        y
    }
}

fn self_slack_sign(std: &Standardized, row: usize) -> f64 {
    // Slack coefficient was +1 for Le rows, -1 for Ge rows (post-negation).
    if let Some(s) = std.slack_of_row[row] {
        std.rows[row][s]
    } else {
        1.0
    }
}

enum RunEnd {
    Optimal,
    Unbounded,
}

fn split_row(rows: &mut [Vec<f64>], pivot: usize, other: usize) -> (&[f64], &mut [f64]) {
    debug_assert_ne!(pivot, other);
    if pivot < other {
        let (a, b) = rows.split_at_mut(other);
        (&a[pivot], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(pivot);
        (&b[0], &mut a[other])
    }
}

/// Two-phase dense simplex.
pub fn solve_lp(p: &LpProblem, opt: &SolverOptions) -> Result<LpOutcome> {
    p.validate()?;
    let std = standardize(p);
    let m = std.rows.len();

    let mut tab = Tableau {
        rows: std.rows.clone(),
        rhs: std.rhs.clone(),
        basis: Vec::with_capacity(m),
        ncols: std.ncols,
        first_art: std.first_art,
        cost: vec![0.0; std.ncols],
        iterations: 0,
    };
    for i in 0..m {
        let b = std.art_of_row[i]
            .or(std.slack_of_row[i])
            .expect("every row has a unit start column");
        tab.basis.push(b);
    }

    // Phase 1: minimize the sum of artificials.
    let mut c1 = vec![0.0; std.ncols];
    for a in std.art_of_row.iter().flatten() {
        c1[*a] = 1.0;
    }
    tab.cost = c1.clone();
    for i in 0..m {
        let b = tab.basis[i];
        if c1[b] != 0.0 {
            let f = c1[b];
            let row = tab.rows[i].clone();
            for (cj, rj) in tab.cost.iter_mut().zip(&row) {
                *cj -= f * rj;
            }
        }
    }
    if std.first_art < std.ncols {
        match tab.run(opt.pivot, opt.tol, opt.max_iter, &c1, |_| true)? {
            RunEnd::Optimal => {}
            RunEnd::Unbounded => return Err(Error::LpBreakdown("phase-1 unbounded".into())),
        }
        let infeas = tab.objective_value(&c1);
        if infeas > opt.tol {
            // Farkas certificate from the phase-1 dual.
            let kept: Vec<usize> = (0..m).collect();
            let y_std = tab.duals(&c1, &std, &kept);
            let mut farkas = vec![0.0; p.rows.len()];
            for (i, o) in std.origin.iter().enumerate() {
                if let Some(orig) = o {
                    farkas[*orig] = std.flip[i] * y_std[i];
                }
            }
            return Ok(LpOutcome::Infeasible {
                farkas,
                infeasibility: infeas,
            });
        }
    }

    // Drive basic artificials out (largest available pivot keeps the basic
    // values near zero); delete redundant rows.
    let mut keep = vec![true; m];
    for r in 0..m {
        if tab.basis[r] >= std.first_art {
            let col = (0..std.first_art)
                .filter(|&j| tab.rows[r][j].abs() > 1e-9)
                .max_by(|&a, &b| {
                    tab.rows[r][a]
                        .abs()
                        .partial_cmp(&tab.rows[r][b].abs())
                        .unwrap()
                });
            match col {
                Some(j) => {
                    tab.pivot(r, j);
                }
                None => keep[r] = false,
            }
        }
    }
    if keep.iter().any(|k| !k) {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut basis = Vec::new();
        for r in 0..m {
            if keep[r] {
                rows.push(tab.rows[r].clone());
                rhs.push(tab.rhs[r]);
                basis.push(tab.basis[r]);
            }
        }
        tab.rows = rows;
        tab.rhs = rhs;
        tab.basis = basis;
    }
    let kept: Vec<usize> = (0..m).filter(|&r| keep[r]).collect();

    // Phase 2: artificials are barred from entering.
    tab.cost = std.cost2.clone();
    for i in 0..tab.basis.len() {
        let b = tab.basis[i];
        if std.cost2[b] != 0.0 {
            let f = std.cost2[b];
            let row = tab.rows[i].clone();
            for (cj, rj) in tab.cost.iter_mut().zip(&row) {
                *cj -= f * rj;
            }
        }
    }
    let first_art = tab.first_art;
    match tab.run(opt.pivot, opt.tol, opt.max_iter, &std.cost2, |j| {
        j < first_art
    })? {
        RunEnd::Optimal => {}
        RunEnd::Unbounded => return Ok(LpOutcome::Unbounded),
    }

    // Recover the original variables.
    let mut z = vec![0.0; std.ncols];
    for (r, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs[r].max(0.0);
    }
    let mut x = vec![0.0; p.objective.len()];
    for (j, vm) in std.var_map.iter().enumerate() {
        x[j] = match *vm {
            VarMap::Shift { col, lower } => lower + z[col],
            VarMap::Mirror { col, upper } => upper - z[col],
            VarMap::Split { plus, minus } => z[plus] - z[minus],
        };
    }
    let objective = p
        .objective
        .iter()
        .zip(&x)
        .map(|(&c, &v)| c * v)
        .sum::<f64>();

    let y_std = tab.duals(&std.cost2, &std, &kept);
    let mut duals = vec![0.0; p.rows.len()];
    for (slot, &std_row) in kept.iter().enumerate() {
        if let Some(orig) = std.origin[std_row] {
            // cost2 is the min form of a max problem: flip back.
            duals[orig] = -std.flip[std_row] * y_std[slot];
        }
    }

    Ok(LpOutcome::Optimal {
        x,
        objective,
        duals,
    })
}

// ---------------------------------------------------------------------------
// Hull certificates
// ---------------------------------------------------------------------------

/// Exactly one side of the alternative for `0 in conv(points)`: convex
/// weights with small residual, or a strictly separating functional with
/// `||a||_inf = 1` whose achieved margin is stored as the residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum HullCertificate {
    Inside { weights: Vec<f64>, residual: f64 },
    Separated { functional: Vec<f64>, residual: f64 },
}

impl HullCertificate {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullCertificate::Inside { .. })
    }

    pub fn residual(&self) -> f64 {
        match self {
            HullCertificate::Inside { residual, .. } => *residual,
            HullCertificate::Separated { residual, .. } => *residual,
        }
    }
}

fn point_dim(points: &[Vec<f64>]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::EmptySample("empty point list".into()));
    };
    let d = first.len();
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: points
                .iter()
                .map(|p| p.len())
                .find(|&l| l != d)
                .unwrap_or(0),
        });
    }
    if points.iter().any(|p| p.iter().any(|v| !v.is_finite())) {
        return Err(Error::InvalidInput("non-finite point coordinate".into()));
    }
    Ok(d)
}

/// Feasibility LP `{sum w_i v_i = 0, sum w_i = 1, w >= 0}` with phase-one
/// artificials; the separating functional of the infeasible case is read
/// from the phase-one dual.
pub fn origin_in_hull(points: &[Vec<f64>], tol: f64) -> Result<HullCertificate> {
    hull_membership(points, None, tol)
}

/// Membership of `target` (origin when `None`) in the hull, via the same LP
/// on translated points.
pub fn hull_membership(
    points: &[Vec<f64>],
    target: Option<&[f64]>,
    tol: f64,
) -> Result<HullCertificate> {
    let d = point_dim(points)?;
    if let Some(t) = target {
        if t.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: t.len(),
            });
        }
    }
    let m = points.len();
    let shifted: Vec<Vec<f64>> = match target {
        None => points.to_vec(),
        Some(t) => points
            .iter()
            .map(|p| p.iter().zip(t).map(|(&a, &b)| a - b).collect())
            .collect(),
    };

    // Rows: d moment rows = 0, plus the normalization row sum w = 1.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    for k in 0..d {
        rows.push(shifted.iter().map(|p| p[k]).collect());
    }
    rows.push(vec![1.0; m]);
    let mut rhs = vec![0.0; d];
    rhs.push(1.0);
    let senses = vec![Sense::Eq; d + 1];
    let problem = LpProblem::with_nonneg_vars(vec![0.0; m], rows, senses, rhs);

    let opts = SolverOptions {
        tol,
        ..SolverOptions::dantzig()
    };
    let outcome = match solve_lp(&problem, &opts) {
        Ok(o) => o,
        Err(Error::IterationCap(_)) => solve_lp(
            &problem,
            &SolverOptions {
                tol,
                ..SolverOptions::default()
            },
        )?,
        Err(e) => return Err(e),
    };

    match outcome {
        LpOutcome::Optimal { x, .. } => {
            let weights: Vec<f64> = x.iter().map(|&w| w.max(0.0)).collect();
            let residual = combination_residual(&shifted, &weights);
            Ok(HullCertificate::Inside { weights, residual })
        }
        LpOutcome::Infeasible { farkas, .. } => {
            // y . (v_j; 1) <= 0 for all j and y_last > 0, so a = -y[..d]
            // strictly separates: <a, v_j> >= y_last > 0.
            let mut a: Vec<f64> = farkas[..d].iter().map(|&v| -v).collect();
            let norm = a.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
            if norm <= 0.0 {
                return Err(Error::LpBreakdown(
                    "degenerate separating functional".into(),
                ));
            }
            for v in a.iter_mut() {
                *v /= norm;
            }
            let margin = min_inner_product(&shifted, &a);
            if margin <= 0.0 {
                // Fall back to the max-margin dual, which is optimal.
                let comb = min_l1_combination(&shifted)?;
                let margin2 = min_inner_product(&shifted, &comb.functional);
                if margin2 <= 0.0 {
                    return Err(Error::LpBreakdown(format!(
                        "separating functional has nonpositive margin {margin2:.3e}"
                    )));
                }
                return Ok(HullCertificate::Separated {
                    functional: comb.functional,
                    residual: margin2,
                });
            }
            Ok(HullCertificate::Separated {
                functional: a,
                residual: margin,
            })
        }
        LpOutcome::Unbounded => Err(Error::LpBreakdown(
            "hull feasibility LP cannot be unbounded".into(),
        )),
    }
}

fn combination_residual(points: &[Vec<f64>], weights: &[f64]) -> f64 {
    let d = points[0].len();
    let mut acc = vec![0.0; d];
    for (p, &w) in points.iter().zip(weights) {
        for (s, &v) in acc.iter_mut().zip(p) {
            *s += w * v;
        }
    }
    acc.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
}

fn min_inner_product(points: &[Vec<f64>], a: &[f64]) -> f64 {
    points
        .iter()
        .map(|p| p.iter().zip(a).map(|(&x, &y)| x * y).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Result of the max-margin LP over the sup-norm ball.
#[derive(Debug, Clone)]
pub struct MinCombination {
    /// Simplex weights minimizing `||sum w_i v_i||_1`.
    pub weights: Vec<f64>,
    /// The minimum value, equal to the best achievable margin
    /// `max_{||a||_inf <= 1} min_i <a, v_i>`.
    pub value: f64,
    /// A functional attaining that margin, `||a||_inf <= 1`.
    pub functional: Vec<f64>,
}

/// Minimize `||sum_i w_i v_i||_1` over the probability simplex. The dual
/// solution yields the max-margin separating functional.
pub fn min_l1_combination(points: &[Vec<f64>]) -> Result<MinCombination> {
    let d = point_dim(points)?;
    let m = points.len();
    // Variables: w (m), u (d). Minimize sum u subject to
    //   +sum w_i v_i - u <= 0,  -sum w_i v_i - u <= 0,  sum w = 1.
    let nv = m + d;
    let mut objective = vec![0.0; nv];
    for k in 0..d {
        objective[m + k] = -1.0; // maximize convention: maximize -sum u
    }
    let mut rows = Vec::with_capacity(2 * d + 1);
    let mut senses = Vec::with_capacity(2 * d + 1);
    let mut rhs = Vec::with_capacity(2 * d + 1);
    for k in 0..d {
        let mut r = vec![0.0; nv];
        for (j, p) in points.iter().enumerate() {
            r[j] = p[k];
        }
        r[m + k] = -1.0;
        rows.push(r);
        senses.push(Sense::Le);
        rhs.push(0.0);
    }
    for k in 0..d {
        let mut r = vec![0.0; nv];
        for (j, p) in points.iter().enumerate() {
            r[j] = -p[k];
        }
        r[m + k] = -1.0;
        rows.push(r);
        senses.push(Sense::Le);
        rhs.push(0.0);
    }
    let mut sum_row = vec![0.0; nv];
    for slot in sum_row.iter_mut().take(m) {
        *slot = 1.0;
    }
    rows.push(sum_row);
    senses.push(Sense::Eq);
    rhs.push(1.0);

    let problem = LpProblem::with_nonneg_vars(objective, rows, senses, rhs);
    let outcome = match solve_lp(&problem, &SolverOptions::dantzig()) {
        Ok(o) => o,
        Err(Error::IterationCap(_)) => solve_lp(&problem, &SolverOptions::default())?,
        Err(e) => return Err(e),
    };
    let LpOutcome::Optimal {
        x,
        objective,
        duals,
    } = outcome
    else {
        return Err(Error::LpBreakdown(
            "l1-minimization LP must be feasible and bounded".into(),
        ));
    };
    let weights: Vec<f64> = x[..m].iter().map(|&w| w.max(0.0)).collect();
    let value = -objective;
    // Functional from the row duals: a_k = -(y_plus_k - y_minus_k) in the
    // internal min convention; `duals` already carries the max-form sign.
    let mut functional: Vec<f64> = (0..d).map(|k| duals[k] - duals[d + k]).collect();
    // Clamp into the sup-norm ball against rounding.
    let norm = functional.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    if norm > 1.0 {
        for v in functional.iter_mut() {
            *v /= norm;
        }
    }
    Ok(MinCombination {
        weights,
        value,
        functional,
    })
}

/// Minimize `||sum_i w_i v_i||_inf` over the probability simplex.
pub fn min_linf_combination(points: &[Vec<f64>]) -> Result<(Vec<f64>, f64)> {
    let d = point_dim(points)?;
    let m = points.len();
    // Variables: w (m), z (1). Maximize -z subject to
    //   +/- sum w_i v_i - z <= 0 per coordinate, sum w = 1.
    let nv = m + 1;
    let mut objective = vec![0.0; nv];
    objective[m] = -1.0;
    let mut rows = Vec::with_capacity(2 * d + 1);
    let mut senses = Vec::with_capacity(2 * d + 1);
    let mut rhs = Vec::with_capacity(2 * d + 1);
    for sign in [1.0, -1.0] {
        for k in 0..d {
            let mut r = vec![0.0; nv];
            for (j, p) in points.iter().enumerate() {
                r[j] = sign * p[k];
            }
            r[m] = -1.0;
            rows.push(r);
            senses.push(Sense::Le);
            rhs.push(0.0);
        }
    }
    let mut sum_row = vec![0.0; nv];
    for slot in sum_row.iter_mut().take(m) {
        *slot = 1.0;
    }
    rows.push(sum_row);
    senses.push(Sense::Eq);
    rhs.push(1.0);

    let problem = LpProblem::with_nonneg_vars(objective, rows, senses, rhs);
    let outcome = match solve_lp(&problem, &SolverOptions::dantzig()) {
        Ok(o) => o,
        Err(Error::IterationCap(_)) => solve_lp(&problem, &SolverOptions::default())?,
        Err(e) => return Err(e),
    };
    let LpOutcome::Optimal { x, objective, .. } = outcome else {
        return Err(Error::LpBreakdown(
            "linf-minimization LP must be feasible and bounded".into(),
        ));
    };
    Ok((x[..m].iter().map(|&w| w.max(0.0)).collect(), -objective))
}

/// Outcome of the strict positivity LP on a finite point set.
#[derive(Debug, Clone)]
pub struct PositivityResult {
    /// Functional with `||a||_inf <= 1` and `<a, v_i> >= margin`, when one exists.
    pub witness: Option<Vec<f64>>,
    /// Best achievable margin over the sup-norm ball.
    pub max_margin: f64,
    /// True when the instance fell in the degeneracy band where the two dual
    /// verdicts may disagree (0 < max_margin < requested margin).
    pub degenerate_band: bool,
}

/// Find `a` with `||a||_inf <= 1` and `<a, v_i> >= margin` for all points,
/// or report infeasibility. Cross-checked against `origin_in_hull` (the two
/// verdicts must be complementary outside the degeneracy band).
pub fn strict_positivity(points: &[Vec<f64>], margin: f64) -> Result<PositivityResult> {
    strict_positivity_full(points, margin).map(|(r, _)| r)
}

/// As `strict_positivity`, also returning the hull certificate computed for
/// the mandatory duality cross-check.
pub fn strict_positivity_full(
    points: &[Vec<f64>],
    margin: f64,
) -> Result<(PositivityResult, HullCertificate)> {
    let tol = SolverOptions::default().tol;
    if margin < tol {
        return Err(Error::MarginTooSmall { margin, tol });
    }
    let comb = min_l1_combination(points)?;
    let witness = if comb.value >= margin {
        let achieved = min_inner_product(points, &comb.functional);
        if achieved + tol < margin {
            return Err(Error::LpBreakdown(format!(
                "dual functional margin {achieved:.3e} below LP value {:.3e}",
                comb.value
            )));
        }
        Some(comb.functional.clone())
    } else {
        None
    };

    // Mandatory duality cross-check (Hahn-Banach alternative).
    let hull = origin_in_hull(points, tol)?;
    let mut degenerate_band = false;
    match &hull {
        HullCertificate::Inside { residual, .. } => {
            if witness.is_some() {
                return Err(Error::LpBreakdown(format!(
                    "duality violation: positive witness with hull residual {residual:.3e}"
                )));
            }
            // Hull feasible yet max margin above tolerance: borderline case.
            if comb.value > tol {
                degenerate_band = true;
            }
        }
        HullCertificate::Separated { .. } => {
            if witness.is_none() {
                // Separated but below the requested margin: the logged band.
                if comb.value > tol {
                    degenerate_band = true;
                } else {
                    return Err(Error::LpBreakdown(
                        "duality violation: separated with nonpositive max margin".into(),
                    ));
                }
            }
        }
    }

    Ok((
        PositivityResult {
            witness,
            max_margin: comb.value,
            degenerate_band,
        },
        hull,
    ))
}

/// Spectrum-level positivity: find coefficients `a` with
/// `<a, gamma(x)> >= margin` on the whole sample, `||a||_inf <= 1`.
pub fn positivity_feasible(
    s: &Spectrum,
    sample: &[TorusPoint],
    margin: f64,
) -> Result<Option<Vec<f64>>> {
    if sample.is_empty() {
        return Err(Error::EmptySample("positivity sample".into()));
    }
    let points = sample
        .iter()
        .map(|x| curve_point(s, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(strict_positivity(&points, margin)?.witness)
}

// ---------------------------------------------------------------------------
// Caratheodory reduction
// ---------------------------------------------------------------------------

/// Reduce a convex combination reproducing `target` to at most d+1 support
/// points by repeatedly shifting weight along affine dependencies.
///
/// Returns indices into the input list together with the surviving weights.
/// Zero-weight inputs are pruned up front.
pub fn caratheodory_reduce(
    points: &[Vec<f64>],
    weights: &[f64],
    target: Option<&[f64]>,
) -> Result<(Vec<usize>, Vec<f64>)> {
    let d = point_dim(points)?;
    if weights.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: weights.len(),
        });
    }
    if weights.iter().any(|&w| w < -1e-12) {
        return Err(Error::InvalidInput("negative input weight".into()));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "weights sum to {sum}, expected 1"
        )));
    }
    let zero = vec![0.0; d];
    let tgt = target.unwrap_or(&zero);
    if tgt.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: tgt.len(),
        });
    }
    let shifted: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(tgt).map(|(&a, &b)| a - b).collect())
        .collect();
    let pre_residual = combination_residual(&shifted, weights);
    if pre_residual > 1e-7 {
        return Err(Error::InvalidInput(format!(
            "weights do not reproduce the target: residual {pre_residual:.3e}"
        )));
    }

    let mut active: Vec<usize> = (0..points.len()).filter(|&i| weights[i] > 1e-14).collect();
    let mut w: Vec<f64> = active.iter().map(|&i| weights[i]).collect();

    while active.len() > d + 1 {
        let cols: Vec<&[f64]> = active.iter().map(|&i| shifted[i].as_slice()).collect();
        let mu = affine_dependence(&cols, d)?;
        // Orient so that some mu_i is positive, then shift until a weight hits 0.
        let mut mu = mu;
        if !mu.iter().any(|&v| v > 1e-14) {
            for v in mu.iter_mut() {
                *v = -*v;
            }
        }
        let mut t_best = f64::INFINITY;
        let mut drop_pos = usize::MAX;
        for (pos, (&wi, &mi)) in w.iter().zip(&mu).enumerate() {
            if mi > 1e-14 {
                let t = wi / mi;
                if t < t_best - 1e-15 {
                    t_best = t;
                    drop_pos = pos;
                }
            }
        }
        if drop_pos == usize::MAX {
            return Err(Error::DependenceSolve(
                "no positive direction in dependence vector".into(),
            ));
        }
        for (wi, &mi) in w.iter_mut().zip(&mu) {
            *wi -= t_best * mi;
            if wi.abs() < 1e-15 {
                *wi = 0.0;
            }
        }
        w[drop_pos] = 0.0;
        let mut na = Vec::with_capacity(active.len() - 1);
        let mut nw = Vec::with_capacity(active.len() - 1);
        for (pos, &idx) in active.iter().enumerate() {
            if w[pos] > 0.0 {
                na.push(idx);
                nw.push(w[pos]);
            }
        }
        if na.len() >= active.len() {
            return Err(Error::DependenceSolve("reduction made no progress".into()));
        }
        active = na;
        w = nw;
    }

    // Renormalize (the shifts preserve the sum up to rounding).
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::DependenceSolve(format!("weight sum drifted to {s}")));
    }
    for v in w.iter_mut() {
        *v /= s;
    }
    let out_pts: Vec<Vec<f64>> = active.iter().map(|&i| shifted[i].clone()).collect();
    let residual = combination_residual(&out_pts, &w);
    if residual > 1e-9 {
        return Err(Error::DependenceSolve(format!(
            "reduced combination residual {residual:.3e} exceeds 1e-9"
        )));
    }
    Ok((active, w))
}

/// Nontrivial `mu` with `sum mu_i v_i = 0` and `sum mu_i = 0` for more than
/// d+1 points in dimension d, by RREF nullspace extraction with partial
/// pivoting; falls back to a perturbed pivot threshold on failure.
fn affine_dependence(cols: &[&[f64]], d: usize) -> Result<Vec<f64>> {
    let k = cols.len();
    debug_assert!(k > d + 1);
    let rows = d + 1;
    let build = || -> Vec<Vec<f64>> {
        (0..rows)
            .map(|r| {
                (0..k)
                    .map(|c| if r < d { cols[c][r] } else { 1.0 })
                    .collect()
            })
            .collect()
    };
    let orig = build();

    for pivot_tol in [1e-11, 1e-14] {
        let mut m = build();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut row = 0usize;
        for col in 0..k {
            if row >= rows {
                break;
            }
            let (mut best_r, mut best) = (row, m[row][col].abs());
            for (r, mr) in m.iter().enumerate().skip(row + 1) {
                if mr[col].abs() > best {
                    best = mr[col].abs();
                    best_r = r;
                }
            }
            if best <= pivot_tol {
                continue;
            }
            m.swap(row, best_r);
            let inv = 1.0 / m[row][col];
            for v in m[row].iter_mut() {
                *v *= inv;
            }
            for r in 0..rows {
                if r != row {
                    let f = m[r][col];
                    if f != 0.0 {
                        let pr = m[row].clone();
                        for (a, b) in m[r].iter_mut().zip(&pr) {
                            *a -= f * b;
                        }
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        for free in (0..k).filter(|c| !pivot_cols.contains(c)) {
            let mut mu = vec![0.0; k];
            mu[free] = 1.0;
            for &(pr, pc) in &pivots {
                mu[pc] = -m[pr][free];
            }
            let scale = mu.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            let mut worst = 0.0f64;
            for r in orig.iter() {
                let dot: f64 = r.iter().zip(&mu).map(|(&a, &b)| a * b).sum();
                worst = worst.max(dot.abs());
            }
            if worst <= 1e-8 * scale.max(1.0) {
                return Ok(mu);
            }
        }
    }
    Err(Error::DependenceSolve(
        "no numerically valid dependence vector found".into(),
    ))
}
