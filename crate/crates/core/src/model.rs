//! Edge-weighted QBAFs, strength vectors, interpretations and solve reports.
//!
//! A [`Qbaf`] can only be obtained through [`QbafBuilder::build`], so every
//! value of the type satisfies the well-formedness rules: base scores in
//! `[0,1]`, finite non-zero weights, at most one edge per ordered pair and no
//! dangling endpoints. Self-loops are allowed.

use std::collections::{BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;

use crate::error::{Error, Result, ValidationErrors, Violation};

/// Dense argument index. Arguments of a QBAF with `n` arguments are
/// numbered `0..n` internally; [`ArgumentId::number`] gives the 1-based name.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArgumentId(usize);

impl ArgumentId {
    pub const fn new(index: usize) -> Self {
        ArgumentId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }

    pub const fn number(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Edge {
    pub src: ArgumentId,
    pub dst: ArgumentId,
    pub weight: f64,
}

impl Edge {
    pub fn is_attack(&self) -> bool {
        self.weight < 0.0
    }

    pub fn is_support(&self) -> bool {
        self.weight > 0.0
    }
}

/// Unvalidated QBAF description keyed by argument labels.
#[derive(Clone, Debug, Default)]
pub struct QbafBuilder {
    arguments: Vec<(String, f64)>,
    edges: Vec<(String, String, f64)>,
}

impl QbafBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn argument(&mut self, label: impl Into<String>, base_score: f64) -> &mut Self {
        self.arguments.push((label.into(), base_score));
        self
    }

    pub fn edge(&mut self, src: impl Into<String>, dst: impl Into<String>, weight: f64) -> &mut Self {
        self.edges.push((src.into(), dst.into(), weight));
        self
    }

    pub fn arguments(&self) -> &[(String, f64)] {
        &self.arguments
    }

    pub fn edges(&self) -> &[(String, String, f64)] {
        &self.edges
    }

    /// Checks every well-formedness rule and reports all violations at once.
    pub fn validate(&self) -> std::result::Result<(), ValidationErrors> {
        self.resolve().map(|_| ())
    }

    pub fn build(&self) -> Result<Qbaf> {
        let (labels, base, edges) = self.resolve().map_err(Error::Validation)?;
        Ok(Qbaf::assemble(labels, base, edges))
    }

    #[allow(clippy::type_complexity)]
    fn resolve(
        &self,
    ) -> std::result::Result<(Vec<String>, Vec<f64>, Vec<Edge>), ValidationErrors> {
        let mut violations = Vec::new();
        let mut index: HashMap<&str, usize> = HashMap::with_capacity(self.arguments.len());
        let mut labels = Vec::with_capacity(self.arguments.len());
        let mut base = Vec::with_capacity(self.arguments.len());

        for (label, score) in &self.arguments {
            if index.contains_key(label.as_str()) {
                violations.push(Violation::DuplicateArgument {
                    argument: label.clone(),
                });
                continue;
            }
            if !(0.0..=1.0).contains(score) {
                violations.push(Violation::BaseScoreOutOfRange {
                    argument: label.clone(),
                    value: *score,
                });
            }
            index.insert(label.as_str(), labels.len());
            labels.push(label.clone());
            base.push(*score);
        }

        let mut seen = HashMap::with_capacity(self.edges.len());
        let mut edges = Vec::with_capacity(self.edges.len());
        for (src, dst, weight) in &self.edges {
            let endpoints = (index.get(src.as_str()), index.get(dst.as_str()));
            let (s, d) = match endpoints {
                (Some(&s), Some(&d)) => (s, d),
                (s, _) => {
                    violations.push(Violation::DanglingEndpoint {
                        src: src.clone(),
                        dst: dst.clone(),
                        missing: if s.is_none() { src.clone() } else { dst.clone() },
                    });
                    continue;
                }
            };
            if !weight.is_finite() {
                violations.push(Violation::NonFiniteWeight {
                    src: src.clone(),
                    dst: dst.clone(),
                    value: *weight,
                });
            } else if *weight == 0.0 {
                violations.push(Violation::ZeroWeightEdge {
                    src: src.clone(),
                    dst: dst.clone(),
                });
            }
            if seen.insert((s, d), ()).is_some() {
                violations.push(Violation::DuplicateEdge {
                    src: src.clone(),
                    dst: dst.clone(),
                });
                continue;
            }
            edges.push(Edge {
                src: ArgumentId(s),
                dst: ArgumentId(d),
                weight: *weight,
            });
        }

        if violations.is_empty() {
            Ok((labels, base, edges))
        } else {
            Err(ValidationErrors(violations))
        }
    }
}

/// A validated edge-weighted QBAF.
///
/// Incoming edges are stored in compressed rows per target so that the
/// aggregation step is a contiguous scan.
#[derive(Clone, Debug)]
pub struct Qbaf {
    labels: Vec<String>,
    base: Vec<f64>,
    log_odds: Vec<f64>,
    edges: Vec<Edge>,
    in_start: Vec<usize>,
    in_src: Vec<usize>,
    in_weight: Vec<f64>,
    out_start: Vec<usize>,
    out_dst: Vec<usize>,
}

impl PartialEq for Qbaf {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.base.iter().map(|b| b.to_bits()).eq(other.base.iter().map(|b| b.to_bits()))
            && self.edges.len() == other.edges.len()
            && self.edges.iter().zip(&other.edges).all(|(a, b)| {
                a.src == b.src && a.dst == b.dst && a.weight.to_bits() == b.weight.to_bits()
            })
    }
}

impl Qbaf {
    /// Builds a QBAF whose arguments are labelled `1..=n`.
    pub fn from_parts(base_scores: &[f64], edges: &[(usize, usize, f64)]) -> Result<Qbaf> {
        let mut b = QbafBuilder::new();
        for (i, &score) in base_scores.iter().enumerate() {
            b.argument((i + 1).to_string(), score);
        }
        for &(s, d, w) in edges {
            b.edge((s + 1).to_string(), (d + 1).to_string(), w);
        }
        b.build()
    }

    fn assemble(labels: Vec<String>, base: Vec<f64>, mut edges: Vec<Edge>) -> Qbaf {
        let n = labels.len();
        edges.sort_by_key(|e| (e.src, e.dst));

        let mut in_start = vec![0usize; n + 1];
        let mut out_start = vec![0usize; n + 1];
        for e in &edges {
            in_start[e.dst.0 + 1] += 1;
            out_start[e.src.0 + 1] += 1;
        }
        for i in 0..n {
            in_start[i + 1] += in_start[i];
            out_start[i + 1] += out_start[i];
        }
        let mut in_fill = in_start.clone();
        let mut out_fill = out_start.clone();
        let mut in_src = vec![0usize; edges.len()];
        let mut in_weight = vec![0.0; edges.len()];
        let mut out_dst = vec![0usize; edges.len()];
        for e in &edges {
            let slot = &mut in_fill[e.dst.0];
            in_src[*slot] = e.src.0;
            in_weight[*slot] = e.weight;
            *slot += 1;
            let slot = &mut out_fill[e.src.0];
            out_dst[*slot] = e.dst.0;
            *slot += 1;
        }

        let log_odds = base.iter().map(|&b| (b / (1.0 - b)).ln()).collect();
        Qbaf {
            labels,
            base,
            log_odds,
            edges,
            in_start,
            in_src,
            in_weight,
            out_start,
            out_dst,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = ArgumentId> + Clone {
        (0..self.len()).map(ArgumentId)
    }

    pub fn label(&self, a: ArgumentId) -> &str {
        &self.labels[a.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<ArgumentId> {
        self.labels.iter().position(|l| l == label).map(ArgumentId)
    }

    pub fn base_score(&self, a: ArgumentId) -> f64 {
        self.base[a.0]
    }

    pub fn base_scores(&self) -> &[f64] {
        &self.base
    }

    /// `ln(β/(1−β))`, which is `−∞` for β = 0 and `+∞` for β = 1.
    pub(crate) fn log_odds(&self) -> &[f64] {
        &self.log_odds
    }

    /// Edges sorted by `(src, dst)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, src: ArgumentId, dst: ArgumentId) -> Option<f64> {
        self.parents(dst).find(|(p, _)| *p == src).map(|(_, w)| w)
    }

    /// Incoming edges of `a` as `(parent, weight)` pairs, ordered by parent.
    pub fn parents(&self, a: ArgumentId) -> impl ExactSizeIterator<Item = (ArgumentId, f64)> + '_ {
        let range = self.in_start[a.0]..self.in_start[a.0 + 1];
        self.in_src[range.clone()]
            .iter()
            .zip(&self.in_weight[range])
            .map(|(&s, &w)| (ArgumentId(s), w))
    }

    pub(crate) fn parent_slices(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.in_start[i]..self.in_start[i + 1];
        (&self.in_src[range.clone()], &self.in_weight[range])
    }

    pub fn children(&self, a: ArgumentId) -> impl ExactSizeIterator<Item = ArgumentId> + '_ {
        self.out_dst[self.out_start[a.0]..self.out_start[a.0 + 1]]
            .iter()
            .map(|&d| ArgumentId(d))
    }

    pub fn in_degree(&self, a: ArgumentId) -> usize {
        self.in_start[a.0 + 1] - self.in_start[a.0]
    }

    fn check(&self, a: ArgumentId) -> Result<()> {
        if a.0 < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownArgument(a.to_string()))
        }
    }

    /// Parents of `a` connected by a negative-weight edge.
    pub fn attackers(&self, a: ArgumentId) -> Result<Vec<ArgumentId>> {
        self.check(a)?;
        Ok(self.parents(a).filter(|(_, w)| *w < 0.0).map(|(p, _)| p).collect())
    }

    /// Parents of `a` connected by a positive-weight edge.
    pub fn supporters(&self, a: ArgumentId) -> Result<Vec<ArgumentId>> {
        self.check(a)?;
        Ok(self.parents(a).filter(|(_, w)| *w > 0.0).map(|(p, _)| p).collect())
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Kahn's algorithm, breaking ties by smallest index so the order is
    /// deterministic.
    pub fn topological_order(&self) -> Result<Vec<ArgumentId>> {
        let n = self.len();
        let mut pending: Vec<usize> = (0..n).map(|i| self.in_start[i + 1] - self.in_start[i]).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| pending[i] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            order.push(ArgumentId(i));
            for &d in &self.out_dst[self.out_start[i]..self.out_start[i + 1]] {
                pending[d] -= 1;
                if pending[d] == 0 {
                    ready.push(Reverse(d));
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(Error::CyclicGraph)
        }
    }

    /// Longest-path distance from a source for every argument.
    pub fn levels(&self) -> Result<Vec<usize>> {
        let order = self.topological_order()?;
        let mut level = vec![0usize; self.len()];
        for a in order {
            for c in self.children(a) {
                level[c.0] = level[c.0].max(level[a.0] + 1);
            }
        }
        Ok(level)
    }

    /// Length (in edges) of the longest path; `None` for cyclic graphs.
    pub fn depth(&self) -> Option<usize> {
        self.levels().ok().map(|l| l.into_iter().max().unwrap_or(0))
    }

    /// Arguments reachable from `a` by a non-empty directed path.
    pub fn descendants(&self, a: ArgumentId) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<ArgumentId> = self.children(a).collect();
        while let Some(c) = stack.pop() {
            if !seen[c.0] {
                seen[c.0] = true;
                stack.extend(self.children(c));
            }
        }
        seen
    }

    pub fn to_builder(&self) -> QbafBuilder {
        let mut b = QbafBuilder::new();
        for (label, &score) in self.labels.iter().zip(&self.base) {
            b.argument(label.clone(), score);
        }
        for e in &self.edges {
            b.edge(self.labels[e.src.0].clone(), self.labels[e.dst.0].clone(), e.weight);
        }
        b
    }
}

/// One strength value per argument.
#[derive(Clone, Debug, PartialEq)]
pub struct StrengthVector(pub Vec<f64>);

impl StrengthVector {
    pub fn get(&self, a: ArgumentId) -> f64 {
        self.0[a.0]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `‖self − other‖_∞`.
    pub fn max_abs_diff(&self, other: &StrengthVector) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Final strengths; `None` marks an undefined (⊥) value.
#[derive(Clone, Debug, PartialEq)]
pub struct Interpretation(pub Vec<Option<f64>>);

impl Interpretation {
    pub fn undefined(n: usize) -> Self {
        Interpretation(vec![None; n])
    }

    pub fn get(&self, a: ArgumentId) -> Option<f64> {
        self.0[a.0]
    }

    pub fn is_fully_defined(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn strengths(&self) -> Option<StrengthVector> {
        self.0.iter().copied().collect::<Option<Vec<_>>>().map(StrengthVector)
    }
}

impl From<StrengthVector> for Interpretation {
    fn from(s: StrengthVector) -> Self {
        Interpretation(s.0.into_iter().map(Some).collect())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    Oscillating,
    MaxIterationsExceeded,
    MaxTimeExceeded,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Converged => "Converged",
            SolveStatus::Oscillating => "Oscillating",
            SolveStatus::MaxIterationsExceeded => "MaxIterationsExceeded",
            SolveStatus::MaxTimeExceeded => "MaxTimeExceeded",
        })
    }
}

/// Recorded states of a solve. Point `k` is the state after `k` steps; for
/// continuous runs it sits at time `k · step_size`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub step_size: Option<f64>,
    pub points: Vec<StrengthVector>,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub interpretation: Interpretation,
    pub steps: usize,
    pub residual: f64,
    pub trajectory: Option<Trajectory>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}
