//! Exact Bayes-optimal prediction by enumerating all 2^K binary label
//! vectors.
//!
//! Cost is O(2^K · |support|) for losses that depend only on the number of
//! wrong labels (Hamming, subset 0/1, every counting measure) and
//! O(2^K · |support| · c) otherwise, where c is the cost of one binary loss
//! evaluation (constant for dense capacities, O(#masses) for Möbius form).
//! Soft score vectors are not searched.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::labelset::LabelSet;
use crate::losses::{LabelVector, Loss, LossSpec};

/// Largest label count accepted for enumeration.
pub const ENUMERATION_CAP: usize = 20;

/// Allowed deviation of the total mass from 1 in strict mode.
pub const MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Reject distributions whose mass deviates from 1 by more than [`MASS_TOL`].
    Strict,
    /// Rescale to unit mass, logging a warning when the deviation is noticeable.
    #[default]
    Lenient,
}

/// A probability mass function over labelings, stored sparsely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelDistribution {
    k: usize,
    // sorted by mask; zero-mass labelings are omitted
    support: Vec<(u64, f64)>,
}

impl LabelDistribution {
    pub fn new(
        k: usize,
        entries: impl IntoIterator<Item = (LabelVector, f64)>,
        mode: Normalization,
    ) -> Result<Self> {
        let mut masks = Vec::new();
        for (y, p) in entries {
            check_dims(k, y.len())?;
            masks.push((y.to_mask(), p));
        }
        Self::from_masks(k, masks, mode)
    }

    /// Like [`LabelDistribution::new`] with labelings given as bitmasks.
    pub fn from_masks(
        k: usize,
        entries: impl IntoIterator<Item = (u64, f64)>,
        mode: Normalization,
    ) -> Result<Self> {
        if k == 0 || k > ENUMERATION_CAP {
            return Err(Error::TooManyLabels {
                k,
                cap: ENUMERATION_CAP,
                what: "label distributions",
            });
        }
        let mut support: Vec<(u64, f64)> = entries.into_iter().collect();
        for &(mask, p) in &support {
            if !LabelSet(mask).fits(k) {
                return Err(Error::InvalidDistribution(format!(
                    "labeling {mask:#x} exceeds K={k}"
                )));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {p} of {} must be finite and non-negative",
                    LabelVector::from_mask(k, mask)
                )));
            }
        }
        support.sort_by_key(|&(mask, _)| mask);
        if let Some(w) = support.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution(format!(
                "labeling {} listed twice",
                LabelVector::from_mask(k, w[0].0)
            )));
        }
        support.retain(|&(_, p)| p > 0.0);
        let total: f64 = support.iter().map(|&(_, p)| p).sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution(
                "total probability is zero".into(),
            ));
        }
        if (total - 1.0).abs() > MASS_TOL {
            match mode {
                Normalization::Strict => {
                    return Err(Error::InvalidDistribution(format!(
                        "probabilities sum to {total}, expected 1"
                    )))
                }
                Normalization::Lenient => {
                    log::warn!("renormalizing label distribution with total mass {total}");
                }
            }
        }
        if mode == Normalization::Lenient && total != 1.0 {
            for entry in &mut support {
                entry.1 /= total;
            }
        }
        Ok(LabelDistribution { k, support })
    }

    pub fn point_mass(y: &LabelVector) -> Result<Self> {
        Self::from_masks(y.len(), [(y.to_mask(), 1.0)], Normalization::Strict)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// (labeling bitmask, probability) pairs with positive mass, by mask.
    pub fn support(&self) -> &[(u64, f64)] {
        &self.support
    }

    pub fn probability(&self, y: &LabelVector) -> f64 {
        let mask = y.to_mask();
        self.support
            .binary_search_by_key(&mask, |&(m, _)| m)
            .map_or(0.0, |i| self.support[i].1)
    }
}

/// p_i = Σ_{y : y_i = 1} p(y).
pub fn marginals(dist: &LabelDistribution) -> Vec<f64> {
    (0..dist.k)
        .map(|i| {
            dist.support
                .iter()
                .filter(|&&(mask, _)| mask >> i & 1 == 1)
                .map(|&(_, p)| p)
                .sum()
        })
        .collect()
}

/// Joint mode of the distribution; ties go to the lexicographically
/// smallest labeling.
pub fn joint_mode(dist: &LabelDistribution) -> LabelVector {
    let k = dist.k;
    let best = dist
        .support
        .iter()
        .min_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then(lex_rank(k, a.0).cmp(&lex_rank(k, b.0)))
        })
        .map_or(0, |&(mask, _)| mask);
    LabelVector::from_mask(k, best)
}

/// Marginals thresholded at 1/2, with exact ties mapped to 0.
pub fn marginal_mode(dist: &LabelDistribution) -> LabelVector {
    LabelVector::new(marginals(dist).iter().map(|&p| (p > 0.5) as u8).collect())
        .expect("binary by construction")
}

/// Σ_y p(y) · loss(y, ŷ).
pub fn expected_loss(dist: &LabelDistribution, yhat: &LabelVector, spec: &LossSpec) -> Result<f64> {
    check_dims(dist.k, yhat.len())?;
    let evaluator = Evaluator::new(dist, spec)?;
    Ok(evaluator.expected(yhat.to_mask()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesOptimum {
    pub prediction: LabelVector,
    pub expected_loss: f64,
}

/// Minimizes the expected loss over all binary predictions. Among exact
/// ties the lexicographically smallest vector wins (label 1 most
/// significant), so the result does not depend on thread scheduling.
pub fn bayes_optimal(dist: &LabelDistribution, spec: &LossSpec) -> Result<BayesOptimum> {
    let k = dist.k;
    let evaluator = Evaluator::new(dist, spec)?;
    let (rank, loss) = (0..1usize << k)
        .into_par_iter()
        .with_min_len(64)
        .map(|rank| {
            (
                rank as u64,
                evaluator.expected(mask_of_rank(k, rank as u64)),
            )
        })
        .reduce_with(|a, b| match a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)) {
            std::cmp::Ordering::Greater => b,
            _ => a,
        })
        .expect("at least two candidates");
    Ok(BayesOptimum {
        prediction: LabelVector::from_mask(k, mask_of_rank(k, rank)),
        expected_loss: loss,
    })
}

/// Position of a labeling in lexicographic order with label 1 most significant.
fn lex_rank(k: usize, mask: u64) -> u64 {
    (0..k).fold(0, |acc, i| acc << 1 | (mask >> i & 1))
}

/// Inverse of [`lex_rank`].
fn mask_of_rank(k: usize, rank: u64) -> u64 {
    lex_rank(k, rank)
}

struct Evaluator<'a> {
    dist: &'a LabelDistribution,
    loss: Loss,
    table: Option<Vec<f64>>,
}

impl<'a> Evaluator<'a> {
    fn new(dist: &'a LabelDistribution, spec: &LossSpec) -> Result<Self> {
        let loss = spec.resolve(dist.k)?;
        let table = loss.error_count_table();
        Ok(Evaluator { dist, loss, table })
    }

    fn expected(&self, pred: u64) -> f64 {
        match &self.table {
            Some(table) => self
                .dist
                .support
                .iter()
                .map(|&(truth, p)| p * table[(truth ^ pred).count_ones() as usize])
                .sum(),
            None => self
                .dist
                .support
                .iter()
                .map(|&(truth, p)| p * self.loss.eval_binary(truth, pred))
                .sum(),
        }
    }
}

/// Reads a distribution file:
///
/// ```text
/// format=1          (optional)
/// K=<int>
/// <y_1> ... <y_K> <probability>
/// ```
///
/// Columns may be separated by whitespace or `&`, and a trailing `\\` is
/// ignored, so LaTeX table rows can be pasted as they are. Labelings not
/// listed have probability 0.
pub fn read_distribution_file(
    path: impl AsRef<Path>,
    mode: Normalization,
) -> Result<LabelDistribution> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_distribution(&text, &path.display().to_string(), mode)
}

pub fn parse_distribution(
    text: &str,
    origin: &str,
    mode: Normalization,
) -> Result<LabelDistribution> {
    let err = |line: usize, msg: String| Error::parse(origin, line, msg);
    let mut k: Option<usize> = None;
    let mut entries: Vec<(u64, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let line = line.strip_suffix("\\\\").unwrap_or(line).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("format=") {
            if rest.trim() != "1" {
                return Err(err(line_no, format!("unsupported format version {rest:?}")));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("K=") {
            if k.is_some() {
                return Err(err(line_no, "duplicate K= header".into()));
            }
            let value: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("bad label count {rest:?}")))?;
            if value == 0 || value > ENUMERATION_CAP {
                return Err(err(line_no, format!("K must lie in 1..={ENUMERATION_CAP}")));
            }
            k = Some(value);
            continue;
        }
        let k = k.ok_or_else(|| err(line_no, "missing K= header before data".into()))?;
        let toks: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == '&')
            .filter(|t| !t.is_empty())
            .collect();
        if toks.len() != k + 1 {
            return Err(err(
                line_no,
                format!(
                    "expected {} label columns and a probability, got {} fields",
                    k,
                    toks.len()
                ),
            ));
        }
        let mut mask = 0u64;
        for (i, tok) in toks[..k].iter().enumerate() {
            match *tok {
                "0" => {}
                "1" => mask |= 1 << i,
                other => return Err(err(line_no, format!("label value {other:?} is not 0 or 1"))),
            }
        }
        let p: f64 = toks[k]
            .parse()
            .map_err(|_| err(line_no, format!("bad probability {:?}", toks[k])))?;
        if entries.iter().any(|&(m, _)| m == mask) {
            return Err(err(line_no, "labeling listed twice".into()));
        }
        entries.push((mask, p));
    }
    let k = k.ok_or_else(|| err(1, "missing K= header".into()))?;
    LabelDistribution::from_masks(k, entries, mode)
}

/// Serializes a distribution in the file format read by [`parse_distribution`].
pub fn format_distribution(dist: &LabelDistribution) -> String {
    let mut out = format!("format=1\nK={}\n", dist.k);
    for &(mask, p) in &dist.support {
        out.push_str(&format!("{} {p}\n", LabelVector::from_mask(dist.k, mask)));
    }
    out
}
