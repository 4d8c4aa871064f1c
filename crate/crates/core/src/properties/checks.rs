use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{injection_feasible, plus_sets, CheckConfig, PropertyId, PropertyVerdict, VerdictStatus};
use crate::discrete::logistic;
use crate::generate::{random_qbaf, RandomQbafParams, WeightMode};
use crate::model::{ArgumentId, Qbaf, QbafBuilder};

struct Tally {
    property: PropertyId,
    checked: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new(property: PropertyId) -> Self {
        Tally {
            property,
            checked: 0,
            counterexample: None,
        }
    }

    fn witness(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn finish(self) -> PropertyVerdict {
        let status = if self.counterexample.is_some() {
            VerdictStatus::Violated
        } else if self.checked == 0 {
            VerdictStatus::VacuouslyHolds
        } else {
            VerdictStatus::Holds
        };
        PropertyVerdict {
            property: self.property,
            status,
            witnesses_checked: self.checked,
            counterexample: self.counterexample,
        }
    }
}

pub(super) struct Context<'a> {
    q: &'a Qbaf,
    s: &'a [f64],
    cfg: &'a CheckConfig,
    att: Vec<Vec<usize>>,
    sup: Vec<Vec<usize>>,
}

fn sorted_strengths(s: &[f64], ids: &[usize]) -> Vec<f64> {
    let mut v: Vec<f64> = ids.iter().map(|&i| s[i]).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Elementwise distances of two sorted lists of equal length, or `None`
/// when some pair is further apart than `tol`.
fn matched_slack(x: &[f64], y: &[f64], tol: f64) -> Option<f64> {
    if x.len() != y.len() {
        return None;
    }
    let mut slack = 0.0;
    for (a, b) in x.iter().zip(y) {
        let d = (a - b).abs();
        if d > tol {
            return None;
        }
        slack += d;
    }
    Some(slack)
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| !b.contains(x)).collect()
}

fn logit(beta: f64) -> f64 {
    (beta / (1.0 - beta)).ln()
}

fn fresh(taken: &HashSet<&str>, stem: &str, k: usize) -> String {
    let mut label = format!("{stem}{k}");
    while taken.contains(label.as_str()) {
        label.push('_');
    }
    label
}

impl<'a> Context<'a> {
    pub(super) fn new(q: &'a Qbaf, s: &'a [f64], cfg: &'a CheckConfig) -> Self {
        let mut att = vec![Vec::new(); q.len()];
        let mut sup = vec![Vec::new(); q.len()];
        for e in q.edges() {
            if e.weight < 0.0 {
                att[e.dst.index()].push(e.src.index());
            } else {
                sup[e.dst.index()].push(e.src.index());
            }
        }
        Context { q, s, cfg, att, sup }
    }

    pub(super) fn check(&self, prop: PropertyId) -> PropertyVerdict {
        let mut t = Tally::new(prop);
        match prop {
            PropertyId::Anonymity => self.anonymity(&mut t),
            PropertyId::Independence => self.independence(&mut t),
            PropertyId::Directionality => self.directionality(&mut t),
            PropertyId::Equivalence => self.equivalence(&mut t),
            PropertyId::Stability => self.stability(&mut t),
            PropertyId::Neutrality => self.neutrality(&mut t),
            PropertyId::Monotony => self.monotony(&mut t),
            PropertyId::Reinforcement => self.reinforcement(&mut t),
            PropertyId::Resilience => self.resilience(&mut t),
            PropertyId::Franklin => self.franklin(&mut t),
            PropertyId::Weakening => self.weakening(&mut t, false),
            PropertyId::Strengthening => self.weakening(&mut t, true),
            PropertyId::Duality => self.duality(&mut t),
            PropertyId::AlmostOpenMindedness => self.open_mindedness(&mut t),
        }
        t.finish()
    }

    fn eq(&self) -> f64 {
        self.cfg.eq_tolerance
    }

    fn beta(&self, i: usize) -> f64 {
        self.q.base_scores()[i]
    }

    fn name(&self, i: usize) -> &str {
        self.q.labels()[i].as_str()
    }

    fn rng(&self, prop: PropertyId) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(prop as u64);
        rng
    }

    fn solve(&self, q: &Qbaf) -> Option<Vec<f64>> {
        let report = self.cfg.semantics.solve(q).ok()?;
        report.interpretation.strengths().map(|s| s.0)
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.q.len();
        (0..n).flat_map(move |a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
    }

    fn stability(&self, t: &mut Tally) {
        for a in 0..self.q.len() {
            if self.att[a].is_empty() && self.sup[a].is_empty() {
                let (beta, sigma) = (self.beta(a), self.s[a]);
                t.witness((sigma - beta).abs() <= self.eq(), || {
                    format!("`{}` has no parents and β={beta} but σ={sigma}", self.name(a))
                });
            }
        }
    }

    fn resilience(&self, t: &mut Tally) {
        for a in 0..self.q.len() {
            let beta = self.beta(a);
            if beta > 0.0 && beta < 1.0 {
                let sigma = self.s[a];
                t.witness(sigma > 0.0 && sigma < 1.0, || {
                    format!("`{}` has β={beta} but σ={sigma}", self.name(a))
                });
            }
        }
    }

    fn equivalence(&self, t: &mut Tally) {
        let eq = self.eq();
        for (a, b) in self.pairs().filter(|(a, b)| a < b) {
            if self.beta(a) != self.beta(b) {
                continue;
            }
            let att = matched_slack(
                &sorted_strengths(self.s, &self.att[a]),
                &sorted_strengths(self.s, &self.att[b]),
                eq,
            );
            let sup = matched_slack(
                &sorted_strengths(self.s, &self.sup[a]),
                &sorted_strengths(self.s, &self.sup[b]),
                eq,
            );
            if let (Some(x), Some(y)) = (att, sup) {
                let d = (self.s[a] - self.s[b]).abs();
                t.witness(d <= eq + (x + y) / 4.0, || {
                    format!(
                        "`{}` and `{}` have matching parents but σ={} vs σ={}",
                        self.name(a),
                        self.name(b),
                        self.s[a],
                        self.s[b]
                    )
                });
            }
        }
    }

    /// `b` has the parents of `a` plus one extra parent `d` of strength ≈ 0.
    fn neutrality(&self, t: &mut Tally) {
        let eq = self.eq();
        for (a, b) in self.pairs() {
            if self.beta(a) != self.beta(b)
                || self.att[a].len() + self.sup[a].len() + 1 != self.att[b].len() + self.sup[b].len()
                || !is_subset(&self.att[a], &self.att[b])
                || !is_subset(&self.sup[a], &self.sup[b])
            {
                continue;
            }
            let mut extra = minus(&self.att[b], &self.att[a]);
            extra.extend(minus(&self.sup[b], &self.sup[a]));
            let d = extra[0];
            if self.s[d] > eq {
                continue;
            }
            let diff = (self.s[a] - self.s[b]).abs();
            t.witness(diff <= eq + self.s[d] / 4.0, || {
                format!(
                    "`{}` differs from `{}` only by `{}` with σ={}, yet σ={} vs σ={}",
                    self.name(b),
                    self.name(a),
                    self.name(d),
                    self.s[d],
                    self.s[b],
                    self.s[a]
                )
            });
        }
    }

    fn franklin(&self, t: &mut Tally) {
        let eq = self.eq();
        for (a, b) in self.pairs() {
            if self.beta(a) != self.beta(b)
                || self.att[a].len() != self.att[b].len() + 1
                || self.sup[a].len() != self.sup[b].len() + 1
                || !is_subset(&self.att[b], &self.att[a])
                || !is_subset(&self.sup[b], &self.sup[a])
            {
                continue;
            }
            let x = minus(&self.att[a], &self.att[b])[0];
            let y = minus(&self.sup[a], &self.sup[b])[0];
            let gap = (self.s[x] - self.s[y]).abs();
            if gap > eq {
                continue;
            }
            let diff = (self.s[a] - self.s[b]).abs();
            t.witness(diff <= eq + gap / 4.0, || {
                format!(
                    "attacker `{}` and supporter `{}` of `{}` should cancel, yet σ={} vs σ({})={}",
                    self.name(x),
                    self.name(y),
                    self.name(a),
                    self.s[a],
                    self.name(b),
                    self.s[b]
                )
            });
        }
    }

    fn monotony(&self, t: &mut Tally) {
        let eq = self.eq();
        for (a, b) in self.pairs() {
            let beta = self.beta(a);
            if !(beta > 0.0 && beta < 1.0 && beta == self.beta(b))
                || !is_subset(&self.att[a], &self.att[b])
                || !is_subset(&self.sup[b], &self.sup[a])
            {
                continue;
            }
            let (sa, sb) = (self.s[a], self.s[b]);
            t.witness(sa >= sb - eq, || {
                format!(
                    "`{}` has fewer attackers and more supporters than `{}` but σ={sa} < σ={sb}",
                    self.name(a),
                    self.name(b)
                )
            });
            let pa = plus_sets(self.q, self.s, ArgumentId::new(a), eq);
            let pb = plus_sets(self.q, self.s, ArgumentId::new(b), eq);
            let strict = pa.att_plus.len() < pb.att_plus.len() || pa.sup_plus.len() > pb.sup_plus.len();
            if strict && (sa > 0.0 || sb < 1.0) {
                t.witness(sa > sb, || {
                    format!(
                        "strict: `{}` vs `{}` differ by a non-zero parent but σ={sa} <= σ={sb}",
                        self.name(a),
                        self.name(b)
                    )
                });
            }
        }
    }

    /// Differences of one parent list against another: either identical, or
    /// exactly one swapped element.
    fn swap(&self, mine: &[usize], theirs: &[usize]) -> Option<Option<(usize, usize)>> {
        let x = minus(mine, theirs);
        let y = minus(theirs, mine);
        match (x.len(), y.len()) {
            (0, 0) => Some(None),
            (1, 1) => Some(Some((x[0], y[0]))),
            _ => None,
        }
    }

    fn reinforcement(&self, t: &mut Tally) {
        let eq = self.eq();
        for (a, b) in self.pairs() {
            let beta = self.beta(a);
            if !(beta > 0.0 && beta < 1.0 && beta == self.beta(b)) {
                continue;
            }
            let (Some(att), Some(sup)) = (self.swap(&self.att[a], &self.att[b]), self.swap(&self.sup[a], &self.sup[b]))
            else {
                continue;
            };
            // a's attacker is weaker by d1, a's supporter stronger by d2
            let d1 = att.map_or(0.0, |(x, y)| self.s[y] - self.s[x]);
            let d2 = sup.map_or(0.0, |(x, y)| self.s[x] - self.s[y]);
            if d1 < -eq || d2 < -eq {
                continue;
            }
            let (sa, sb) = (self.s[a], self.s[b]);
            let slack = ((-d1).max(0.0) + (-d2).max(0.0)) / 4.0;
            let describe = |what: &str| {
                format!(
                    "{what}: `{}` has weaker attackers / stronger supporters than `{}` but σ={sa} vs σ={sb}",
                    self.name(a),
                    self.name(b)
                )
            };
            t.witness(sa >= sb - eq - slack, || describe("reinforcement"));
            if d1 >= 0.0 && d2 >= 0.0 && (d1 > eq || d2 > eq) && (sa > 0.0 || sb < 1.0) {
                t.witness(sa > sb, || describe("strict reinforcement"));
            }
        }
    }

    /// Weakening, or strengthening when `strengthen` is set. Only base
    /// scores strictly inside (0,1) are considered.
    fn weakening(&self, t: &mut Tally, strengthen: bool) {
        let eq = self.eq();
        for a in 0..self.q.len() {
            let beta = self.beta(a);
            if !(beta > 0.0 && beta < 1.0) {
                continue;
            }
            let att: Vec<f64> = self.att[a].iter().map(|&i| self.s[i]).collect();
            let sup: Vec<f64> = self.sup[a].iter().map(|&i| self.s[i]).collect();
            let (weak, strong) = if strengthen { (&att, &sup) } else { (&sup, &att) };
            let surplus = strong.iter().sum::<f64>() - weak.iter().sum::<f64>();
            if !injection_feasible(weak, strong) || surplus <= eq {
                continue;
            }
            let sigma = self.s[a];
            let ok = if strengthen { sigma > beta } else { sigma < beta };
            t.witness(ok, || {
                format!(
                    "`{}` is dominated by its {} (surplus {surplus}) but σ={sigma} vs β={beta}",
                    self.name(a),
                    if strengthen { "supporters" } else { "attackers" }
                )
            });
        }
    }

    fn duality(&self, t: &mut Tally) {
        let eq = self.eq();
        let n = self.q.len();
        for a in 0..n {
            for b in 0..n {
                let (ba, bb) = (self.beta(a), self.beta(b));
                if ba < 0.5 || (ba + bb - 1.0).abs() > 1e-12 {
                    continue;
                }
                let x = matched_slack(
                    &sorted_strengths(self.s, &self.att[a]),
                    &sorted_strengths(self.s, &self.sup[b]),
                    eq,
                );
                let y = matched_slack(
                    &sorted_strengths(self.s, &self.sup[a]),
                    &sorted_strengths(self.s, &self.att[b]),
                    eq,
                );
                if let (Some(x), Some(y)) = (x, y) {
                    let (sa, sb) = (self.s[a], self.s[b]);
                    t.witness((sa + sb - ba - bb).abs() <= eq + (x + y) / 4.0, || {
                        format!(
                            "`{}` (β={ba}) and `{}` (β={bb}) are mirrored but σ sum {}",
                            self.name(a),
                            self.name(b),
                            sa + sb
                        )
                    });
                }
            }
        }
    }

    fn anonymity(&self, t: &mut Tally) {
        let n = self.q.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut self.rng(PropertyId::Anonymity));
        let mut base = vec![0.0; n];
        for i in 0..n {
            base[perm[i]] = self.beta(i);
        }
        let edges: Vec<_> = self
            .q
            .edges()
            .iter()
            .map(|e| (perm[e.src.index()], perm[e.dst.index()], e.weight))
            .collect();
        let Ok(image) = Qbaf::from_parts(&base, &edges) else {
            return;
        };
        let Some(s2) = self.solve(&image) else {
            return;
        };
        for i in 0..n {
            let (x, y) = (self.s[i], s2[perm[i]]);
            t.witness((x - y).abs() <= self.eq(), || {
                format!("`{}` has σ={x} but its relabelled copy has σ={y}", self.name(i))
            });
        }
    }

    fn independence(&self, t: &mut Tally) {
        let mut rng = self.rng(PropertyId::Independence);
        let other = random_qbaf(&RandomQbafParams {
            n_args: rng.gen_range(1..=self.cfg.independence_size.max(1)),
            edge_density: 0.5,
            acyclic: true,
            weight_mode: WeightMode::UnitSigned,
            base_score_range: (0.0, 1.0),
            seed: rng.gen(),
            max_in_degree: None,
            base_score_levels: Some(11),
        });
        let Ok(other) = other else {
            return;
        };
        let taken: HashSet<&str> = self.q.labels().iter().map(String::as_str).collect();
        let names: Vec<String> = (0..other.len()).map(|k| fresh(&taken, "ind", k)).collect();
        let mut b = self.q.to_builder();
        for a in other.ids() {
            b.argument(names[a.index()].clone(), other.base_score(a));
        }
        for e in other.edges() {
            b.edge(names[e.src.index()].clone(), names[e.dst.index()].clone(), e.weight);
        }
        let Ok(union) = b.build() else {
            return;
        };
        let Some(s_other) = self.solve(&other) else {
            return;
        };
        let Some(s_union) = self.solve(&union) else {
            t.witness(false, || "the disjoint union has no fixed point".to_string());
            return;
        };
        let n = self.q.len();
        for i in 0..n {
            let (x, y) = (self.s[i], s_union[i]);
            t.witness((x - y).abs() <= self.eq(), || {
                format!("`{}` has σ={x} alone but σ={y} in a disjoint union", self.name(i))
            });
        }
        for (k, &x) in s_other.iter().enumerate() {
            let y = s_union[n + k];
            t.witness((x - y).abs() <= self.eq(), || {
                format!("added argument `{}` has σ={x} alone but σ={y} in the union", names[k])
            });
        }
    }

    fn directionality(&self, t: &mut Tally) {
        let mut edges: Vec<_> = self.q.edges().to_vec();
        edges.shuffle(&mut self.rng(PropertyId::Directionality));
        edges.truncate(self.cfg.directionality_edges);
        for removed in edges {
            let mut b = QbafBuilder::new();
            for i in 0..self.q.len() {
                b.argument(self.name(i), self.beta(i));
            }
            for e in self.q.edges().iter().filter(|e| **e != removed) {
                b.edge(self.name(e.src.index()), self.name(e.dst.index()), e.weight);
            }
            let Ok(reduced) = b.build() else {
                continue;
            };
            let Some(s2) = self.solve(&reduced) else {
                continue;
            };
            let target = removed.dst;
            let downstream = self.q.descendants(target);
            for c in 0..self.q.len() {
                if c == target.index() || downstream[c] {
                    continue;
                }
                let (x, y) = (self.s[c], s2[c]);
                t.witness((x - y).abs() <= self.eq(), || {
                    format!(
                        "removing {} -> {} moved unreachable `{}` from σ={x} to σ={y}",
                        self.name(removed.src.index()),
                        self.name(target.index()),
                        self.name(c)
                    )
                });
            }
        }
    }

    /// Adds `k` parents of base score 1 and checks the strength against the
    /// bound obtained when all other parents are as unfavourable as possible:
    /// with `k` attackers `σ ≤ φ(logit β + |Sup| − k)`, with `k` supporters
    /// `σ ≥ φ(logit β − |Att| + k)`. Both bounds tend to the extremes as
    /// `k` grows.
    fn open_mindedness(&self, t: &mut Tally) {
        let mut targets: Vec<usize> = (0..self.q.len())
            .filter(|&a| self.beta(a) > 0.0 && self.beta(a) < 1.0)
            .collect();
        targets.shuffle(&mut self.rng(PropertyId::AlmostOpenMindedness));
        targets.truncate(self.cfg.open_mindedness_targets);
        let taken: HashSet<&str> = self.q.labels().iter().map(String::as_str).collect();
        for a in targets {
            let lo = logit(self.beta(a));
            for &k in &self.cfg.open_mindedness_ks {
                for p in [-1.0, 1.0] {
                    let mut b = self.q.to_builder();
                    for j in 0..k {
                        let label = fresh(&taken, "om", j);
                        b.argument(label.clone(), 1.0);
                        b.edge(label, self.name(a), p);
                    }
                    let Ok(extended) = b.build() else {
                        continue;
                    };
                    let Some(s2) = self.solve(&extended) else {
                        continue;
                    };
                    let sigma = s2[a];
                    let (ok, bound) = if p < 0.0 {
                        let bound = logistic(lo + self.sup[a].len() as f64 - k as f64);
                        (sigma <= bound + self.eq(), bound)
                    } else {
                        let bound = logistic(lo - self.att[a].len() as f64 + k as f64);
                        (sigma >= bound - self.eq(), bound)
                    };
                    t.witness(ok, || {
                        format!(
                            "`{}` with {k} added {} has σ={sigma}, beyond the bound {bound}",
                            self.name(a),
                            if p < 0.0 { "attackers" } else { "supporters" }
                        )
                    });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{check_all, check_property};
    use super::*;
    use crate::model::{Interpretation, StrengthVector};
    use crate::semantics::Semantics;

    fn solved(q: &Qbaf) -> Interpretation {
        Semantics::discrete()
            .with_tolerance(1e-13)
            .solve(q)
            .unwrap()
            .interpretation
    }

    fn status(prop: PropertyId, q: &Qbaf, sigma: &Interpretation) -> PropertyVerdict {
        check_property(prop, q, sigma, &CheckConfig::default()).unwrap()
    }

    fn perturbed(sigma: &Interpretation, i: usize, delta: f64) -> Interpretation {
        let mut s = sigma.clone();
        s.0[i] = Some(s.0[i].unwrap() + delta);
        s
    }

    #[test]
    fn stability_holds_and_catches_perturbation() {
        let q = Qbaf::from_parts(&[0.42], &[]).unwrap();
        let sigma = solved(&q);
        assert_eq!(sigma.0[0], Some(0.42));
        let v = status(PropertyId::Stability, &q, &sigma);
        assert_eq!((v.status, v.witnesses_checked), (VerdictStatus::Holds, 1));
        let v = status(PropertyId::Stability, &q, &perturbed(&sigma, 0, 0.1));
        assert_eq!(v.status, VerdictStatus::Violated);
        assert!(v.counterexample.unwrap().contains("σ=0.52"));
    }

    #[test]
    fn single_argument_is_all_holds_or_vacuous() {
        let q = Qbaf::from_parts(&[0.5], &[]).unwrap();
        for v in check_all(&q, &solved(&q), &CheckConfig::default()).unwrap() {
            assert_ne!(v.status, VerdictStatus::Violated, "{v:?}");
        }
    }

    fn franklin_instance() -> Qbaf {
        let mut b = QbafBuilder::new();
        b.argument("a", 0.6)
            .argument("b", 0.6)
            .argument("x", 0.7)
            .argument("y", 0.7)
            .edge("x", "a", -1.0)
            .edge("y", "a", 1.0);
        b.build().unwrap()
    }

    #[test]
    fn franklin_cancels() {
        let q = franklin_instance();
        let sigma = solved(&q);
        assert!((sigma.0[0].unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(sigma.0[1], Some(0.6));
        let v = status(PropertyId::Franklin, &q, &sigma);
        assert_eq!(v.status, VerdictStatus::Holds);
        assert_eq!(v.witnesses_checked, 1);
        let v = status(PropertyId::Franklin, &q, &perturbed(&sigma, 0, 0.01));
        assert_eq!(v.status, VerdictStatus::Violated);
    }

    #[test]
    fn duality_mirror() {
        let mut b = QbafBuilder::new();
        b.argument("a", 0.7)
            .argument("b", 0.3)
            .argument("x", 0.4)
            .argument("y", 0.4)
            .argument("z", 0.9)
            .argument("w", 0.9)
            .edge("x", "a", -1.0)
            .edge("z", "a", 1.0)
            .edge("y", "b", 1.0)
            .edge("w", "b", -1.0);
        let q = b.build().unwrap();
        let sigma = solved(&q);
        let sum = sigma.0[0].unwrap() + sigma.0[1].unwrap();
        assert!((sum - 1.0).abs() < 1e-12);
        assert_eq!(status(PropertyId::Duality, &q, &sigma).status, VerdictStatus::Holds);
        assert_eq!(
            status(PropertyId::Duality, &q, &perturbed(&sigma, 1, -0.05)).status,
            VerdictStatus::Violated
        );
    }

    #[test]
    fn open_mindedness_closed_form() {
        let q = Qbaf::from_parts(&[0.5], &[]).unwrap();
        let cfg = CheckConfig {
            open_mindedness_ks: vec![5],
            ..Default::default()
        };
        let v = check_property(PropertyId::AlmostOpenMindedness, &q, &solved(&q), &cfg).unwrap();
        assert_eq!((v.status, v.witnesses_checked), (VerdictStatus::Holds, 2));
    }

    #[test]
    fn monotony_and_strictness() {
        let mut b = QbafBuilder::new();
        b.argument("a", 0.5)
            .argument("b", 0.5)
            .argument("x", 0.8)
            .argument("d", 0.0)
            .edge("x", "b", -1.0)
            .edge("d", "b", -1.0);
        let q = b.build().unwrap();
        let sigma = solved(&q);
        let v = status(PropertyId::Monotony, &q, &sigma);
        // (a,b) non-strict + strict
        assert_eq!(v.status, VerdictStatus::Holds);
        assert!(v.witnesses_checked >= 2);
        // swapping the two strengths breaks the strict conclusion
        let mut bad = sigma.clone();
        bad.0.swap(0, 1);
        assert_eq!(status(PropertyId::Monotony, &q, &bad).status, VerdictStatus::Violated);
    }

    #[test]
    fn neutrality_ignores_zero_parent() {
        let mut b = QbafBuilder::new();
        b.argument("a", 0.5)
            .argument("b", 0.5)
            .argument("x", 0.8)
            .argument("d", 0.0)
            .edge("x", "a", 1.0)
            .edge("x", "b", 1.0)
            .edge("d", "b", -1.0);
        let q = b.build().unwrap();
        let sigma = solved(&q);
        let v = status(PropertyId::Neutrality, &q, &sigma);
        assert_eq!((v.status, v.witnesses_checked), (VerdictStatus::Holds, 1));
        assert_eq!(
            status(PropertyId::Neutrality, &q, &perturbed(&sigma, 1, 0.01)).status,
            VerdictStatus::Violated
        );
    }

    #[test]
    fn weakening_and_strengthening() {
        let mut b = QbafBuilder::new();
        b.argument("a", 0.5)
            .argument("s", 0.3)
            .argument("t", 0.6)
            .argument("u", 0.2)
            .edge("s", "a", 1.0)
            .edge("t", "a", -1.0)
            .edge("u", "a", -1.0);
        let q = b.build().unwrap();
        let sigma = solved(&q);
        assert_eq!(status(PropertyId::Weakening, &q, &sigma).status, VerdictStatus::Holds);
        assert_eq!(
            status(PropertyId::Strengthening, &q, &sigma).status,
            VerdictStatus::VacuouslyHolds
        );
        assert_eq!(
            status(PropertyId::Weakening, &q, &perturbed(&sigma, 0, 0.2)).status,
            VerdictStatus::Violated
        );
    }

    #[test]
    fn reinforcement_swapped_attacker() {
        let mut b = QbafBuilder::new();
        b.argument("a", 0.5)
            .argument("b", 0.5)
            .argument("x", 0.2)
            .argument("y", 0.9)
            .edge("x", "a", -1.0)
            .edge("y", "b", -1.0);
        let q = b.build().unwrap();
        let sigma = solved(&q);
        let v = status(PropertyId::Reinforcement, &q, &sigma);
        assert_eq!(v.status, VerdictStatus::Holds);
        let mut bad = sigma.clone();
        bad.0.swap(0, 1);
        assert_eq!(status(PropertyId::Reinforcement, &q, &bad).status, VerdictStatus::Violated);
    }

    #[test]
    fn companion_properties_catch_any_perturbation() {
        let q = crate::generate::stock_example(1.0, &[]).unwrap();
        let sigma = solved(&q);
        for v in check_all(&q, &sigma, &CheckConfig::default()).unwrap() {
            assert_ne!(v.status, VerdictStatus::Violated, "{v:?}");
        }
        for i in 0..q.len() {
            let bad = perturbed(&sigma, i, if sigma.0[i].unwrap() > 0.5 { -0.1 } else { 0.1 });
            let v = check_property(PropertyId::Anonymity, &q, &bad, &CheckConfig::default()).unwrap();
            assert_eq!(v.status, VerdictStatus::Violated);
        }
    }

    #[test]
    fn resilience_compares_exactly() {
        let q = Qbaf::from_parts(&[0.5, 1.0], &[(1, 0, -1.0)]).unwrap();
        let sigma = solved(&q);
        assert_eq!(status(PropertyId::Resilience, &q, &sigma).status, VerdictStatus::Holds);
        let bad = Interpretation::from(StrengthVector(vec![0.0, 1.0]));
        assert_eq!(status(PropertyId::Resilience, &q, &bad).status, VerdictStatus::Violated);
    }

    #[test]
    fn continuous_companions() {
        let q = crate::generate::stock_example(1.0, &[]).unwrap();
        let sem = Semantics::continuous().with_tolerance(1e-12);
        let sigma = sem.solve(&q).unwrap().interpretation;
        let cfg = CheckConfig {
            semantics: sem,
            ..Default::default()
        };
        for v in check_all(&q, &sigma, &cfg).unwrap() {
            assert_ne!(v.status, VerdictStatus::Violated, "{v:?}");
        }
    }
}
