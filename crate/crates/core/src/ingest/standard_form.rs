//! Conversion of an MPS model to `min c⊤x, Ax = b, x ≥ 0`.
//!
//! Inequalities get slack columns, finite lower bounds are shifted to zero,
//! upper-bounded-only variables are negated, free variables are split, finite
//! upper bounds become an extra equality row with a slack, and fixed
//! variables are substituted out.

use serde::{Deserialize, Serialize};

use super::mps::{BoundKind, MpsModel, ObjectiveSense, RowSense};
use crate::error::{Error, Result};
use crate::problem::StandardFormLp;
use crate::sparse::SparseMatrix;

/// Magnitude at or above which an MPS value is read as infinite.
pub const MPS_INFINITY: f64 = 1e30;

/// How an original variable is expressed in standard-form columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VarTransform {
    /// `x = shift + x'[col]`
    Shifted { col: usize, shift: f64 },
    /// `x = shift − x'[col]`
    Negated { col: usize, shift: f64 },
    /// `x = x'[pos] − x'[neg]`
    Split { pos: usize, neg: usize },
    /// `x = value`
    Fixed { value: f64 },
}

/// Maps standard-form solutions back to the original variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableMap {
    pub names: Vec<String>,
    pub transforms: Vec<VarTransform>,
    /// `+1` for minimization, `−1` when the original model maximizes.
    pub objective_sign: f64,
}

impl VariableMap {
    pub fn recover(&self, x_std: &[f64]) -> Vec<f64> {
        self.transforms
            .iter()
            .map(|t| match *t {
                VarTransform::Shifted { col, shift } => shift + x_std[col],
                VarTransform::Negated { col, shift } => shift - x_std[col],
                VarTransform::Split { pos, neg } => x_std[pos] - x_std[neg],
                VarTransform::Fixed { value } => value,
            })
            .collect()
    }

    /// Original objective value from the standard-form objective value
    /// (including the offset).
    pub fn original_objective(&self, std_objective: f64) -> f64 {
        self.objective_sign * std_objective
    }
}

/// Effective `[lower, upper]` bounds per column after applying BOUNDS.
pub fn column_bounds(model: &MpsModel) -> Result<Vec<(f64, f64)>> {
    let n = model.columns.len();
    let mut bounds = vec![(0.0, f64::INFINITY); n];
    let mut lower_set = vec![false; n];
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    let inf = |v: f64| {
        if v >= MPS_INFINITY {
            f64::INFINITY
        } else if v <= -MPS_INFINITY {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    for e in &model.bounds {
        let j = e.column;
        let v = inf(e.value);
        let name = &model.columns[j].name;
        match e.kind {
            BoundKind::Lo => {
                bounds[j].0 = v;
                lower_set[j] = true;
            }
            BoundKind::Up => {
                bounds[j].1 = v;
                if v < 0.0 && !lower_set[j] && bounds[j].0 == 0.0 {
                    log::warn!("negative upper bound on {name} with default lower bound; lower bound set to -inf");
                    bounds[j].0 = f64::NEG_INFINITY;
                }
            }
            BoundKind::Fx => {
                if let Some(prev) = fixed[j] {
                    if prev != v {
                        return Err(Error::InfeasibleBounds {
                            name: name.clone(),
                            lower: prev.max(v),
                            upper: prev.min(v),
                        });
                    }
                }
                fixed[j] = Some(v);
                bounds[j] = (v, v);
                lower_set[j] = true;
            }
            BoundKind::Fr => bounds[j] = (f64::NEG_INFINITY, f64::INFINITY),
            BoundKind::Mi => bounds[j].0 = f64::NEG_INFINITY,
            BoundKind::Pl => bounds[j].1 = f64::INFINITY,
        }
    }
    for (j, &(lo, up)) in bounds.iter().enumerate() {
        if lo > up || lo == f64::INFINITY || up == f64::NEG_INFINITY {
            return Err(Error::InfeasibleBounds {
                name: model.columns[j].name.clone(),
                lower: lo,
                upper: up,
            });
        }
    }
    Ok(bounds)
}

/// Effective `[lower, upper]` activity interval per constraint row
/// (N rows excluded, in declaration order) as `(row index, lower, upper)`.
pub fn row_intervals(model: &MpsModel) -> Vec<(usize, f64, f64)> {
    let mut rhs = vec![0.0; model.rows.len()];
    for &(r, v) in &model.rhs {
        rhs[r] = v;
    }
    let mut range: Vec<Option<f64>> = vec![None; model.rows.len()];
    for &(r, v) in &model.ranges {
        range[r] = Some(v);
    }
    let mut out = Vec::new();
    for (i, row) in model.rows.iter().enumerate() {
        let r = rhs[i];
        let (lo, up) = match (row.sense, range[i]) {
            (RowSense::N, _) => continue,
            (RowSense::E, None) => (r, r),
            (RowSense::L, None) => (f64::NEG_INFINITY, r),
            (RowSense::G, None) => (r, f64::INFINITY),
            (RowSense::L, Some(q)) => (r - q.abs(), r),
            (RowSense::G, Some(q)) => (r, r + q.abs()),
            (RowSense::E, Some(q)) if q >= 0.0 => (r, r + q),
            (RowSense::E, Some(q)) => (r + q, r),
        };
        out.push((i, lo, up));
    }
    out
}

impl MpsModel {
    /// Original objective `c⊤x + constant` in the model's own sense.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        let obj = self.objective_row;
        let mut v = 0.0;
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, a) in &col.entries {
                if r == obj {
                    v += a * x[j];
                }
            }
        }
        let constant: f64 = self.rhs.iter().filter(|e| e.0 == obj).map(|e| -e.1).sum();
        v + constant
    }

    /// Largest violation of any row interval or column bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> Result<f64> {
        let bounds = column_bounds(self)?;
        let mut act = vec![0.0; self.rows.len()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, a) in &col.entries {
                act[r] += a * x[j];
            }
        }
        let mut worst: f64 = 0.0;
        for (i, lo, up) in row_intervals(self) {
            worst = worst.max(lo - act[i]).max(act[i] - up);
        }
        for (j, &(lo, up)) in bounds.iter().enumerate() {
            worst = worst.max(lo - x[j]).max(x[j] - up);
        }
        Ok(worst)
    }
}

/// Standard-form LP together with the map back to original variables.
#[derive(Debug, Clone)]
pub struct StandardFormConversion {
    pub lp: StandardFormLp,
    pub map: VariableMap,
}

/// Converts an MPS model into standard form.
pub fn to_standard_form(model: &MpsModel) -> Result<StandardFormConversion> {
    if let Some(&(r, _)) = model.ranges.iter().find(|e| model.rows[e.0].sense == RowSense::N) {
        return Err(Error::InvalidParameter(format!(
            "RANGES entry on free row `{}`",
            model.rows[r].name
        )));
    }
    let bounds = column_bounds(model)?;
    let intervals = row_intervals(model);
    let mut row_of = vec![usize::MAX; model.rows.len()];
    for (k, &(i, _, _)) in intervals.iter().enumerate() {
        row_of[i] = k;
    }
    let sign = match model.sense {
        ObjectiveSense::Minimize => 1.0,
        ObjectiveSense::Maximize => -1.0,
    };

    let mut ncols = 0usize;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut b: Vec<f64> = intervals.iter().map(|_| 0.0).collect();
    let mut c: Vec<f64> = Vec::new();
    let mut offset: f64 = model
        .rhs
        .iter()
        .filter(|e| e.0 == model.objective_row)
        .map(|e| -e.1)
        .sum::<f64>()
        * sign;
    let mut extra_rows = 0usize;
    let base_rows = intervals.len();
    let mut transforms = Vec::with_capacity(model.columns.len());

    let mut new_col = |c: &mut Vec<f64>, cost: f64| {
        c.push(cost);
        ncols += 1;
        ncols - 1
    };

    for (j, col) in model.columns.iter().enumerate() {
        let (lo, up) = bounds[j];
        let cost: f64 = sign
            * col
                .entries
                .iter()
                .filter(|e| e.0 == model.objective_row)
                .map(|e| e.1)
                .sum::<f64>();
        let rows: Vec<(usize, f64)> = col
            .entries
            .iter()
            .filter(|e| row_of[e.0] != usize::MAX)
            .map(|&(r, a)| (row_of[r], a))
            .collect();
        let transform = if lo == up {
            for &(r, a) in &rows {
                b[r] -= a * lo;
            }
            offset += cost * lo;
            VarTransform::Fixed { value: lo }
        } else if lo.is_finite() {
            let k = new_col(&mut c, cost);
            for &(r, a) in &rows {
                triplets.push((r, k, a));
                b[r] -= a * lo;
            }
            offset += cost * lo;
            if up.is_finite() {
                let row = base_rows + extra_rows;
                extra_rows += 1;
                let s = new_col(&mut c, 0.0);
                triplets.push((row, k, 1.0));
                triplets.push((row, s, 1.0));
                b.push(up - lo);
            }
            VarTransform::Shifted { col: k, shift: lo }
        } else if up.is_finite() {
            let k = new_col(&mut c, -cost);
            for &(r, a) in &rows {
                triplets.push((r, k, -a));
                b[r] -= a * up;
            }
            offset += cost * up;
            VarTransform::Negated { col: k, shift: up }
        } else {
            let p = new_col(&mut c, cost);
            let q = new_col(&mut c, -cost);
            for &(r, a) in &rows {
                triplets.push((r, p, a));
                triplets.push((r, q, -a));
            }
            VarTransform::Split { pos: p, neg: q }
        };
        transforms.push(transform);
    }

    for (k, &(_, lo, up)) in intervals.iter().enumerate() {
        if lo == up {
            b[k] += lo;
        } else if lo == f64::NEG_INFINITY {
            let s = new_col(&mut c, 0.0);
            triplets.push((k, s, 1.0));
            b[k] += up;
        } else if up == f64::INFINITY {
            let s = new_col(&mut c, 0.0);
            triplets.push((k, s, -1.0));
            b[k] += lo;
        } else {
            // a⊤x − s = lo, s + t = up − lo
            let s = new_col(&mut c, 0.0);
            let t = new_col(&mut c, 0.0);
            let row = base_rows + extra_rows;
            extra_rows += 1;
            triplets.push((k, s, -1.0));
            triplets.push((row, s, 1.0));
            triplets.push((row, t, 1.0));
            b[k] += lo;
            b.push(up - lo);
        }
    }

    let a = SparseMatrix::from_triplets(base_rows + extra_rows, ncols, &triplets)?;
    let mut lp = StandardFormLp::new(a, b, c)?;
    lp.objective_offset = offset;
    Ok(StandardFormConversion {
        lp,
        map: VariableMap {
            names: model.columns.iter().map(|c| c.name.clone()).collect(),
            transforms,
            objective_sign: sign,
        },
    })
}
