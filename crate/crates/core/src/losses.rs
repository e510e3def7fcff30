//! Multi-label losses: the measure-based loss 1 − Choquet(correctness) and
//! its classic special cases.
//!
//! A [`LossSpec`] is resolved against a label count into a [`Loss`], which
//! picks the cheapest evaluation route that is consistent with the measure:
//! counting measures use the OWA form (with the uniform and full-set
//! profiles evaluated label-wise as Hamming and maximum error), dense
//! capacities the sorted form, and Möbius representations the Möbius form.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::choquet::{choquet_moebius, choquet_owa_levels, choquet_sorted, ValueVector};
use crate::error::{check_dims, Error, Result};
use crate::labelset::LabelSet;
use crate::measures::{
    read_measure_file, Capacity, CountingProfile, MeasureSource, MoebiusRepresentation, OwaWeights,
};
use crate::numeric::ordered_sum;

/// Scores may overshoot [0, 1] by this much before they are rejected.
pub const SCORE_SLACK: f64 = 1e-12;

/// Ground-truth or predicted relevance of each label, in {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelVector(Vec<u8>);

impl LabelVector {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if let Some(i) = values.iter().position(|&v| v > 1) {
            return Err(Error::InvalidInput(format!(
                "label {} has value {}, expected 0 or 1",
                i + 1,
                values[i]
            )));
        }
        Ok(LabelVector(values))
    }

    /// Label `i` (1-based) is relevant iff bit `i-1` of `mask` is set.
    pub fn from_mask(k: usize, mask: u64) -> Self {
        LabelVector((0..k).map(|i| ((mask >> i) & 1) as u8).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &v)| acc | (v as u64) << i)
    }

    pub fn relevant(&self) -> LabelSet {
        LabelSet(self.to_mask())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn count_relevant(&self) -> usize {
        self.0.iter().filter(|&&v| v == 1).count()
    }

    pub fn to_scores(&self) -> ScoreVector {
        ScoreVector(self.0.iter().map(|&v| v as f64).collect())
    }
}

impl fmt::Display for LabelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Predicted relevance scores in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    /// Rejects scores outside [0, 1] by more than [`SCORE_SLACK`] and clamps
    /// the rest into range.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut values = values;
        for (i, s) in values.iter_mut().enumerate() {
            if !s.is_finite() || *s < -SCORE_SLACK || *s > 1.0 + SCORE_SLACK {
                return Err(Error::InvalidInput(format!(
                    "score {} for label {} is outside [0, 1]",
                    s,
                    i + 1
                )));
            }
            *s = s.clamp(0.0, 1.0);
        }
        Ok(ScoreVector(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The scores as a label vector, if every score is exactly 0 or 1.
    pub fn as_binary(&self) -> Option<LabelVector> {
        self.0
            .iter()
            .map(|&s| {
                if s == 0.0 {
                    Some(0)
                } else if s == 1.0 {
                    Some(1)
                } else {
                    None
                }
            })
            .collect::<Option<Vec<u8>>>()
            .map(LabelVector)
    }
}

/// Which loss to evaluate. Polynomial and binomial parameters are resolved
/// against the label count at evaluation time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LossSpec {
    Hamming,
    Subset01,
    FMeasure,
    Capacity(Capacity),
    Moebius(MoebiusRepresentation),
    Counting(CountingProfile),
    Polynomial(f64),
    Binomial(usize),
}

impl LossSpec {
    /// Parses `hamming`, `subset01`, `fmeasure`, `poly:<alpha>`,
    /// `binom:<k>`, `counting:@<file>` or `measure:@<file>`, reading any
    /// referenced measure file.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::InvalidParameter(format!("unrecognized loss spec {text:?}"));
        match text {
            "hamming" => return Ok(LossSpec::Hamming),
            "subset01" => return Ok(LossSpec::Subset01),
            "fmeasure" => return Ok(LossSpec::FMeasure),
            _ => {}
        }
        let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
        match kind {
            "poly" => {
                let alpha: f64 = arg
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad exponent {arg:?}")))?;
                if !(alpha.is_finite() && alpha >= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "polynomial exponent must be >= 1, got {alpha}"
                    )));
                }
                Ok(LossSpec::Polynomial(alpha))
            }
            "binom" => {
                let k: usize = arg
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad binomial order {arg:?}")))?;
                if k == 0 {
                    return Err(Error::InvalidParameter(
                        "binomial order must be >= 1".into(),
                    ));
                }
                Ok(LossSpec::Binomial(k))
            }
            "counting" | "measure" => {
                let path = arg.strip_prefix('@').ok_or_else(bad)?;
                let source = read_measure_file(Path::new(path))?;
                match (kind, source) {
                    (_, MeasureSource::Counting(p)) => Ok(LossSpec::Counting(p)),
                    ("counting", other) => Err(Error::InvalidParameter(format!(
                        "{path}: counting spec needs a counting-form file, found {} form",
                        other.form_name()
                    ))),
                    (_, MeasureSource::Capacity(c)) => Ok(LossSpec::Capacity(c)),
                    (_, MeasureSource::Moebius(m)) => Ok(LossSpec::Moebius(m)),
                }
            }
            _ => Err(bad()),
        }
    }

    /// Fixes the label count, choosing the evaluation route.
    pub fn resolve(&self, k: usize) -> Result<Loss> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        let route = match self {
            LossSpec::Hamming => Route::Hamming,
            LossSpec::Subset01 => Route::MaxError,
            LossSpec::FMeasure => Route::FMeasure,
            LossSpec::Polynomial(alpha) => {
                Route::from_profile(CountingProfile::polynomial(k, *alpha)?)
            }
            LossSpec::Binomial(order) => Route::from_profile(CountingProfile::binomial(k, *order)?),
            LossSpec::Counting(p) => {
                check_dims(p.k(), k)?;
                Route::from_profile(p.clone())
            }
            LossSpec::Capacity(c) => {
                check_dims(c.k(), k)?;
                Route::Sorted(c.clone())
            }
            LossSpec::Moebius(m) => {
                check_dims(m.k(), k)?;
                Route::Moebius(m.clone())
            }
        };
        Ok(Loss { k, route })
    }

    /// True for losses that treat all labels alike.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, LossSpec::Capacity(_) | LossSpec::Moebius(_))
    }
}

impl FromStr for LossSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LossSpec::parse(s)
    }
}

impl fmt::Display for LossSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossSpec::Hamming => f.write_str("hamming"),
            LossSpec::Subset01 => f.write_str("subset01"),
            LossSpec::FMeasure => f.write_str("fmeasure"),
            LossSpec::Polynomial(alpha) => write!(f, "poly:{alpha}"),
            LossSpec::Binomial(k) => write!(f, "binom:{k}"),
            LossSpec::Counting(p) => write!(f, "counting(K={})", p.k()),
            LossSpec::Capacity(c) => write!(f, "measure(K={})", c.k()),
            LossSpec::Moebius(m) => write!(f, "measure(K={}, {} masses)", m.k(), m.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Route {
    Hamming,
    MaxError,
    FMeasure,
    Owa(OwaWeights),
    Sorted(Capacity),
    Moebius(MoebiusRepresentation),
}

impl Route {
    fn from_profile(profile: CountingProfile) -> Route {
        if profile.is_hamming() {
            Route::Hamming
        } else if profile.is_subset01() {
            Route::MaxError
        } else {
            Route::Owa(profile.owa_weights())
        }
    }
}

/// A loss bound to a label count, ready for repeated evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Loss {
    k: usize,
    route: Route,
}

impl Loss {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eval(&self, y: &LabelVector, s: &ScoreVector) -> Result<f64> {
        check_dims(self.k, y.len())?;
        check_dims(self.k, s.len())?;
        match &self.route {
            Route::Hamming => loss_hamming(y, s),
            Route::MaxError => loss_subset01(y, s),
            Route::FMeasure => {
                let yhat = s.as_binary().ok_or_else(|| {
                    Error::InvalidInput("the F-measure loss needs binary predictions".into())
                })?;
                loss_fmeasure(y, &yhat)
            }
            Route::Owa(weights) => Ok(complement(choquet_owa_levels(
                &correctness(y, s)?,
                weights,
            )?)),
            Route::Sorted(cap) => Ok(complement(choquet_sorted(&correctness(y, s)?, cap)?)),
            Route::Moebius(moeb) => Ok(complement(choquet_moebius(&correctness(y, s)?, moeb)?)),
        }
    }

    /// Loss of the binary prediction `pred` against `truth` (both bitmasks).
    pub fn eval_binary(&self, truth: u64, pred: u64) -> f64 {
        let full = LabelSet::full(self.k).bits();
        let wrong = (truth ^ pred) & full;
        let errors = wrong.count_ones() as usize;
        match &self.route {
            Route::Hamming => errors as f64 / self.k as f64,
            Route::MaxError => {
                if errors > 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Route::FMeasure => fmeasure_from_counts(
                (truth & pred & full).count_ones() as usize,
                (truth & full).count_ones() as usize + (pred & full).count_ones() as usize,
            ),
            Route::Owa(weights) => 1.0 - weights.profile_values()[self.k - errors],
            Route::Sorted(cap) => complement(cap.value(LabelSet(!wrong & full))),
            Route::Moebius(moeb) => {
                let agree = LabelSet(!wrong & full);
                let terms: Vec<f64> = moeb
                    .masses()
                    .iter()
                    .map(|(set, &m)| m * (set.is_subset_of(agree) as u8 as f64))
                    .collect();
                complement(ordered_sum(terms))
            }
        }
    }

    /// For losses that depend on a binary prediction only through its number
    /// of wrong labels: the loss for 0..=K errors.
    pub fn error_count_table(&self) -> Option<Vec<f64>> {
        let table = match &self.route {
            Route::Hamming => (0..=self.k).map(|e| e as f64 / self.k as f64).collect(),
            Route::MaxError => (0..=self.k)
                .map(|e| if e > 0 { 1.0 } else { 0.0 })
                .collect(),
            Route::Owa(weights) => (0..=self.k)
                .map(|e| 1.0 - weights.profile_values()[self.k - e])
                .collect(),
            _ => return None,
        };
        Some(table)
    }
}

fn complement(choquet: f64) -> f64 {
    (1.0 - choquet).clamp(0.0, 1.0)
}

/// u_i = 1 − |s_i − y_i|.
pub fn correctness(y: &LabelVector, s: &ScoreVector) -> Result<ValueVector> {
    check_dims(y.len(), s.len())?;
    Ok(ValueVector::new_unchecked(
        y.0.iter()
            .zip(&s.0)
            .map(|(&yi, &si)| 1.0 - (si - yi as f64).abs())
            .collect(),
    ))
}

/// 1 − Choquet_μ(correctness(y, s)) for the measure described by `spec`.
pub fn loss_measure(y: &LabelVector, s: &ScoreVector, spec: &LossSpec) -> Result<f64> {
    spec.resolve(y.len())?.eval(y, s)
}

/// Mean absolute error over labels.
pub fn loss_hamming(y: &LabelVector, s: &ScoreVector) -> Result<f64> {
    check_dims(y.len(), s.len())?;
    if y.is_empty() {
        return Err(Error::InvalidInput("empty label vector".into()));
    }
    let total = ordered_sum(
        y.0.iter()
            .zip(&s.0)
            .map(|(&yi, &si)| (si - yi as f64).abs())
            .collect::<Vec<_>>(),
    );
    Ok(total / y.len() as f64)
}

/// Largest absolute error over labels.
pub fn loss_subset01(y: &LabelVector, s: &ScoreVector) -> Result<f64> {
    check_dims(y.len(), s.len())?;
    if y.is_empty() {
        return Err(Error::InvalidInput("empty label vector".into()));
    }
    Ok(y.0
        .iter()
        .zip(&s.0)
        .map(|(&yi, &si)| (si - yi as f64).abs())
        .fold(0.0, f64::max))
}

/// 1 − 2|y ∧ ŷ| / (|y| + |ŷ|); 0 when both are empty.
pub fn loss_fmeasure(y: &LabelVector, yhat: &LabelVector) -> Result<f64> {
    check_dims(y.len(), yhat.len())?;
    let both =
        y.0.iter()
            .zip(&yhat.0)
            .filter(|(&a, &b)| a == 1 && b == 1)
            .count();
    Ok(fmeasure_from_counts(
        both,
        y.count_relevant() + yhat.count_relevant(),
    ))
}

fn fmeasure_from_counts(both: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        1.0 - 2.0 * both as f64 / total as f64
    }
}

/// Loss of a binary prediction with `errors` wrong labels: the weights on
/// the `errors` largest errors, i.e. 1 − v[K − errors].
pub fn loss_binary_shortcut(errors: usize, weights: &OwaWeights) -> Result<f64> {
    let k = weights.k();
    if errors > k {
        return Err(Error::InvalidParameter(format!(
            "error count {errors} exceeds K={k}"
        )));
    }
    Ok(1.0 - weights.profile_values()[k - errors])
}
