//! Parameter sweeps over the polynomial and binomial loss families and the
//! pairwise-comparison analytics built on them.
//!
//! A pairwise trace plots the loss of method A (x) against method B (y) as
//! the parameter grows. Points above the diagonal favor A. The curvature
//! summary is the signed area between the trace and the chord joining its
//! endpoints: negative when the trace bulges below the chord (convex, A
//! gains relative to B as the loss demands more dependence-awareness),
//! positive when it bulges above (concave, B gains).

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{PredictionSet, ResultRow};
use crate::error::{Error, Result};
use crate::losses::LossSpec;
use crate::numeric::ordered_sum;

/// Upper end of the polynomial exponent range.
pub const MAX_ALPHA: f64 = 1000.0;

/// Points in the default log-spaced exponent grid.
pub const DEFAULT_ALPHA_POINTS: usize = 50;

/// Loss differences at or below this are treated as ties on the diagonal.
pub const DEFAULT_CROSSING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Binomial,
    Polynomial,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Binomial => "binom",
            Family::Polynomial => "poly",
        })
    }
}

/// The family and the ascending parameter values to evaluate it at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    family: Family,
    parameters: Vec<f64>,
}

impl SweepSpec {
    /// Binomial orders `from..=to`.
    pub fn binomial(from: usize, to: usize) -> Result<Self> {
        if from == 0 || from > to {
            return Err(Error::InvalidParameter(format!(
                "binomial range {from}..{to} must satisfy 1 <= from <= to"
            )));
        }
        Ok(SweepSpec {
            family: Family::Binomial,
            parameters: (from..=to).map(|k| k as f64).collect(),
        })
    }

    /// Exponents in [1, 1000], strictly ascending.
    pub fn polynomial(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidParameter("empty exponent grid".into()));
        }
        if let Some(a) = alphas
            .iter()
            .find(|a| !(a.is_finite() && (1.0..=MAX_ALPHA).contains(*a)))
        {
            return Err(Error::InvalidParameter(format!(
                "exponent {a} outside [1, {MAX_ALPHA}]"
            )));
        }
        if alphas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "exponents must be strictly ascending".into(),
            ));
        }
        Ok(SweepSpec {
            family: Family::Polynomial,
            parameters: alphas,
        })
    }

    /// `points` log-spaced exponents from 1 to 1000 inclusive.
    pub fn polynomial_log_grid(points: usize) -> Result<Self> {
        Self::polynomial(log_grid(points)?)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn parameters(&self) -> &[f64] {
        &self.parameters
    }

    pub fn loss_at(&self, parameter: f64) -> LossSpec {
        match self.family {
            Family::Binomial => LossSpec::Binomial(parameter as usize),
            Family::Polynomial => LossSpec::Polynomial(parameter),
        }
    }
}

fn log_grid(points: usize) -> Result<Vec<f64>> {
    match points {
        0 => Err(Error::InvalidParameter(
            "exponent grid needs at least 1 point".into(),
        )),
        1 => Ok(vec![1.0]),
        n => {
            let top = MAX_ALPHA.log10();
            let mut grid: Vec<f64> = (0..n)
                .map(|i| 10f64.powf(top * i as f64 / (n - 1) as f64))
                .collect();
            grid[0] = 1.0;
            grid[n - 1] = MAX_ALPHA;
            Ok(grid)
        }
    }
}

/// (1/N) Σ_n loss(y_n, s_n), summed in instance order.
pub fn mean_loss(ps: &PredictionSet, spec: &LossSpec) -> Result<f64> {
    if ps.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{}: no instances to average over",
            ps.method
        )));
    }
    let loss = spec.resolve(ps.k())?;
    let per_instance = ps
        .instances()
        .map(|(y, s)| loss.eval(y, s))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ordered_sum(per_instance) / ps.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub dataset: String,
    pub family: Family,
    /// Ordered by (parameter, method).
    pub rows: Vec<ResultRow>,
}

impl SweepResult {
    pub fn methods(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.rows.iter().map(|r| r.method.as_str()).collect();
        set.into_iter().collect()
    }

    pub fn parameters(&self) -> Vec<f64> {
        let mut params: Vec<f64> = Vec::new();
        for r in &self.rows {
            if params.last() != Some(&r.parameter) {
                params.push(r.parameter);
            }
        }
        params
    }

    /// (parameter, mean loss) for one method, by ascending parameter.
    pub fn curve(&self, method: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| (r.parameter, r.mean_loss))
            .collect()
    }
}

/// Mean loss of every method at every parameter. Cells are evaluated in
/// parallel; the output order and values do not depend on the thread count.
pub fn run_sweep(sets: &[PredictionSet], spec: &SweepSpec) -> Result<SweepResult> {
    let first = sets
        .first()
        .ok_or_else(|| Error::InvalidInput("no prediction sets to sweep".into()))?;
    let k = first.k();
    let mut names = BTreeSet::new();
    for ps in sets {
        if ps.k() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: ps.k(),
            });
        }
        if ps.dataset != first.dataset {
            return Err(Error::InvalidInput(format!(
                "prediction sets mix datasets {:?} and {:?}",
                first.dataset, ps.dataset
            )));
        }
        if !names.insert(ps.method.as_str()) {
            return Err(Error::InvalidInput(format!(
                "method {:?} given twice",
                ps.method
            )));
        }
    }
    if spec.family == Family::Binomial {
        if let Some(&top) = spec.parameters.last() {
            if top as usize > k {
                return Err(Error::InvalidParameter(format!(
                    "binomial order {top} exceeds K={k}"
                )));
            }
        }
    }

    let mut order: Vec<&PredictionSet> = sets.iter().collect();
    order.sort_by(|a, b| a.method.cmp(&b.method));
    let cells: Vec<(f64, &PredictionSet)> = spec
        .parameters
        .iter()
        .flat_map(|&p| order.iter().map(move |&ps| (p, ps)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(parameter, ps)| {
            Ok(ResultRow {
                parameter,
                method: ps.method.clone(),
                dataset: ps.dataset.clone(),
                mean_loss: mean_loss(ps, &spec.loss_at(parameter))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        dataset: first.dataset.clone(),
        family: spec.family,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub parameter: f64,
    pub loss_a: f64,
    pub loss_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTrace {
    pub method_a: String,
    pub method_b: String,
    pub dataset: String,
    pub points: Vec<TracePoint>,
}

impl PairwiseTrace {
    pub fn as_tuples(&self) -> Vec<(f64, f64, f64)> {
        self.points
            .iter()
            .map(|p| (p.parameter, p.loss_a, p.loss_b))
            .collect()
    }
}

/// Aligns the curves of two methods by parameter.
pub fn pairwise_trace(
    result: &SweepResult,
    method_a: &str,
    method_b: &str,
) -> Result<PairwiseTrace> {
    let a = result.curve(method_a);
    let b = result.curve(method_b);
    for (name, curve) in [(method_a, &a), (method_b, &b)] {
        if curve.is_empty() {
            return Err(Error::InvalidInput(format!(
                "method {name:?} not in sweep result"
            )));
        }
    }
    if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| x.0 != y.0) {
        return Err(Error::InvalidInput(format!(
            "methods {method_a:?} and {method_b:?} were evaluated at different parameters"
        )));
    }
    Ok(PairwiseTrace {
        method_a: method_a.to_string(),
        method_b: method_b.to_string(),
        dataset: result.dataset.clone(),
        points: a
            .iter()
            .zip(&b)
            .map(|(&(parameter, loss_a), &(_, loss_b))| TracePoint {
                parameter,
                loss_a,
                loss_b,
            })
            .collect(),
    })
}

/// A parameter interval within which the trace crosses the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub from: f64,
    pub to: f64,
}

/// Maximal parameter intervals over which the sign of `loss_a − loss_b`
/// flips. Points with |loss_a − loss_b| ≤ `tol` carry no sign.
pub fn diagonal_crossings(trace: &PairwiseTrace, tol: f64) -> Vec<Crossing> {
    let mut crossings = Vec::new();
    let mut last: Option<(f64, bool)> = None;
    for p in &trace.points {
        let diff = p.loss_a - p.loss_b;
        if diff.abs() <= tol {
            continue;
        }
        let positive = diff > 0.0;
        if let Some((from, was_positive)) = last {
            if was_positive != positive {
                crossings.push(Crossing {
                    from,
                    to: p.parameter,
                });
            }
        }
        last = Some((p.parameter, positive));
    }
    crossings
}

/// Signed area between the trace and its endpoint chord (shoelace formula
/// over the polygon closed by the chord). Negative: trace below the chord
/// (convex toward A). Positive: above (concave, toward B).
pub fn curvature_summary(trace: &PairwiseTrace) -> Result<f64> {
    if trace.points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "curvature needs at least 3 points, got {}",
            trace.points.len()
        )));
    }
    let origin = trace.points[0];
    let twice_area: f64 = trace
        .points
        .windows(2)
        .map(|w| {
            let (x1, y1) = (w[0].loss_a - origin.loss_a, w[0].loss_b - origin.loss_b);
            let (x2, y2) = (w[1].loss_a - origin.loss_a, w[1].loss_b - origin.loss_b);
            x1 * y2 - x2 * y1
        })
        .sum();
    // counter-clockwise (positive shoelace) means the trace runs below the chord
    Ok(-0.5 * twice_area)
}

/// Human reading of a curvature value.
pub fn curvature_reading(curvature: f64, tol: f64) -> &'static str {
    if curvature < -tol {
        "convex: first method gains as the parameter grows"
    } else if curvature > tol {
        "concave: second method gains as the parameter grows"
    } else {
        "flat"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotCurve {
    pub method: String,
    pub mean_loss: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPairwise {
    pub method_a: String,
    pub method_b: String,
    /// (parameter, loss_a, loss_b)
    pub points: Vec<(f64, f64, f64)>,
    pub crossings: Vec<Crossing>,
    pub curvature: Option<f64>,
}

/// Plot data for external tools, versioned by `format`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotData {
    pub format: u32,
    pub dataset: String,
    pub family: Family,
    pub parameters: Vec<f64>,
    pub curves: Vec<PlotCurve>,
    pub pairwise: Vec<PlotPairwise>,
}

impl PlotData {
    pub fn new(result: &SweepResult, traces: &[PairwiseTrace], tol: f64) -> Self {
        PlotData {
            format: 1,
            dataset: result.dataset.clone(),
            family: result.family,
            parameters: result.parameters(),
            curves: result
                .methods()
                .into_iter()
                .map(|m| PlotCurve {
                    method: m.to_string(),
                    mean_loss: result.curve(m).into_iter().map(|(_, l)| l).collect(),
                })
                .collect(),
            pairwise: traces
                .iter()
                .map(|t| PlotPairwise {
                    method_a: t.method_a.clone(),
                    method_b: t.method_b.clone(),
                    points: t.as_tuples(),
                    crossings: diagonal_crossings(t, tol),
                    curvature: curvature_summary(t).ok(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
