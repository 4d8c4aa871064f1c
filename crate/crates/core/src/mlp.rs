//! Logistic multilayer perceptrons and their translation to and from acyclic
//! QBAFs.
//!
//! Edges only join consecutive layers. A QBAF edge that skips layers is
//! threaded through *relay* nodes: a relay has no bias, exactly one incoming
//! edge (annotated `relay`, weight 1) and simply copies its parent's value.
//! The last hop of a relay chain carries the original weight.
//!
//! Text format:
//!
//! ```text
//! layer <k> <node ids...>
//! bias <node> <value>
//! edge <src> <dst> <weight> [relay]
//! input <node> <value>
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discrete::logistic;
use crate::error::{Error, Result};
use crate::io::{expect_arity, format_float, parse_float, parse_id, syntax, tokenize};
use crate::model::{Qbaf, QbafBuilder};

/// Values of the input nodes, keyed by node id.
pub type InputAssignment = BTreeMap<String, f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct MlpEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
    pub relay: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    labels: Vec<String>,
    layers: Vec<Vec<usize>>,
    layer_of: Vec<usize>,
    bias: Vec<Option<f64>>,
    relay: Vec<bool>,
    edges: Vec<MlpEdge>,
    incoming: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub struct MlpBuilder {
    layers: Vec<Vec<String>>,
    biases: Vec<(String, f64)>,
    edges: Vec<(String, String, f64, bool)>,
}

impl MlpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the next layer.
    pub fn layer<S: Into<String>>(&mut self, nodes: impl IntoIterator<Item = S>) -> &mut Self {
        self.layers.push(nodes.into_iter().map(Into::into).collect());
        self
    }

    pub fn bias(&mut self, node: impl Into<String>, value: f64) -> &mut Self {
        self.biases.push((node.into(), value));
        self
    }

    pub fn edge(&mut self, src: impl Into<String>, dst: impl Into<String>, weight: f64) -> &mut Self {
        self.edges.push((src.into(), dst.into(), weight, false));
        self
    }

    pub fn relay_edge(&mut self, src: impl Into<String>, dst: impl Into<String>) -> &mut Self {
        self.edges.push((src.into(), dst.into(), 1.0, true));
        self
    }

    pub fn build(&self) -> Result<Mlp> {
        let bad = |msg: String| Err(Error::InvalidMlp(msg));
        if self.layers.len() < 2 {
            return bad("at least an input and an output layer are required".into());
        }
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        let mut layer_of = Vec::new();
        let mut layers = Vec::new();
        for (k, layer) in self.layers.iter().enumerate() {
            if layer.is_empty() {
                return bad(format!("layer {k} is empty"));
            }
            let mut ids = Vec::new();
            for label in layer {
                if index.insert(label.clone(), labels.len()).is_some() {
                    return bad(format!("node `{label}` declared twice"));
                }
                ids.push(labels.len());
                labels.push(label.clone());
                layer_of.push(k);
            }
            layers.push(ids);
        }
        let n = labels.len();
        let lookup = |l: &str| index.get(l).copied().ok_or_else(|| Error::UnknownArgument(l.to_string()));

        let mut relay = vec![false; n];
        let mut edges = Vec::new();
        let mut seen = HashSet::new();
        for (s, d, w, is_relay) in &self.edges {
            let (src, dst) = (lookup(s)?, lookup(d)?);
            if layer_of[dst] != layer_of[src] + 1 {
                return bad(format!("edge {s} -> {d} does not join consecutive layers"));
            }
            if !w.is_finite() {
                return bad(format!("edge {s} -> {d} has non-finite weight"));
            }
            if !seen.insert((src, dst)) {
                return bad(format!("duplicate edge {s} -> {d}"));
            }
            if *is_relay {
                if *w != 1.0 {
                    return bad(format!("relay edge {s} -> {d} must have weight 1"));
                }
                relay[dst] = true;
            }
            edges.push(MlpEdge {
                src,
                dst,
                weight: *w,
                relay: *is_relay,
            });
        }
        edges.sort_by_key(|e| (layer_of[e.dst], e.dst, e.src));
        let mut incoming = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            incoming[e.dst].push(i);
        }
        let last = layers.len() - 1;
        for v in 0..n {
            if relay[v] {
                if incoming[v].len() != 1 {
                    return bad(format!("relay `{}` must have exactly one incoming edge", labels[v]));
                }
                if layer_of[v] == last {
                    return bad(format!("relay `{}` is in the output layer", labels[v]));
                }
            }
        }

        let mut bias = vec![None; n];
        for (node, value) in &self.biases {
            let v = lookup(node)?;
            if layer_of[v] == 0 || relay[v] {
                return bad(format!("node `{node}` cannot carry a bias"));
            }
            if !value.is_finite() {
                return bad(format!("bias of `{node}` is not finite"));
            }
            if bias[v].replace(*value).is_some() {
                return bad(format!("bias of `{node}` given twice"));
            }
        }
        for v in 0..n {
            if layer_of[v] > 0 && !relay[v] && bias[v].is_none() {
                return bad(format!("node `{}` has no bias", labels[v]));
            }
        }

        Ok(Mlp {
            labels,
            layers,
            layer_of,
            bias,
            relay,
            edges,
            incoming,
        })
    }
}

impl Mlp {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_id(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer_of(&self, node: usize) -> usize {
        self.layer_of[node]
    }

    /// `None` for input and relay nodes.
    pub fn bias(&self, node: usize) -> Option<f64> {
        self.bias[node]
    }

    pub fn is_relay(&self, node: usize) -> bool {
        self.relay[node]
    }

    pub fn is_input(&self, node: usize) -> bool {
        self.layer_of[node] == 0
    }

    pub fn edges(&self) -> &[MlpEdge] {
        &self.edges
    }

    pub fn relay_count(&self) -> usize {
        self.relay.iter().filter(|&&r| r).count()
    }

    fn input_values(&self, x: &InputAssignment) -> Result<Vec<f64>> {
        for key in x.keys() {
            match self.node_id(key) {
                Some(v) if self.is_input(v) => {}
                _ => return Err(Error::UnknownArgument(key.clone())),
            }
        }
        let mut values = vec![0.0; self.len()];
        for &v in &self.layers[0] {
            let label = &self.labels[v];
            values[v] = *x.get(label).ok_or_else(|| Error::MissingInput(label.clone()))?;
        }
        Ok(values)
    }

    /// Forward propagation; returns one activation per node in id order.
    pub fn forward(&self, x: &InputAssignment) -> Result<Vec<f64>> {
        let mut values = self.input_values(x)?;
        for layer in &self.layers[1..] {
            for &v in layer {
                values[v] = if self.relay[v] {
                    values[self.edges[self.incoming[v][0]].src]
                } else {
                    let z: f64 = self.incoming[v]
                        .iter()
                        .map(|&e| self.edges[e].weight * values[self.edges[e].src])
                        .sum();
                    logistic(self.bias[v].unwrap_or(0.0) + z)
                };
            }
        }
        Ok(values)
    }

    /// The node a relay chain ending at `v` copies.
    fn relay_origin(&self, mut v: usize) -> usize {
        while self.relay[v] {
            v = self.edges[self.incoming[v][0]].src;
        }
        v
    }
}

pub fn base_to_bias(beta: f64) -> Result<f64> {
    if beta > 0.0 && beta < 1.0 {
        Ok((beta / (1.0 - beta)).ln())
    } else {
        Err(Error::ExtremeBaseScore(beta))
    }
}

pub fn bias_to_base(theta: f64) -> f64 {
    logistic(theta)
}

/// Reads an MLP with an input assignment as a layered acyclic QBAF.
///
/// Relay chains are contracted back into a single edge, and zero-weight
/// edges are dropped since they have no effect on either side.
pub fn mlp_to_qbaf(mlp: &Mlp, x: &InputAssignment) -> Result<Qbaf> {
    let inputs = mlp.input_values(x)?;
    let mut b = QbafBuilder::new();
    for v in 0..mlp.len() {
        if mlp.relay[v] {
            continue;
        }
        let beta = if mlp.is_input(v) {
            let value = inputs[v];
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InputOutOfRange {
                    node: mlp.labels[v].clone(),
                    value,
                });
            }
            value
        } else {
            bias_to_base(mlp.bias[v].unwrap_or(0.0))
        };
        b.argument(mlp.labels[v].clone(), beta);
    }
    for e in &mlp.edges {
        if e.relay || e.weight == 0.0 {
            continue;
        }
        let origin = mlp.relay_origin(e.src);
        b.edge(mlp.labels[origin].clone(), mlp.labels[e.dst].clone(), e.weight);
    }
    b.build().map_err(|e| match e {
        Error::Validation(v) => Error::InvalidMlp(v.to_string()),
        other => other,
    })
}

fn fresh_label(taken: &mut HashSet<String>, base: String) -> String {
    let mut label = base;
    while taken.contains(&label) {
        label.push('_');
    }
    taken.insert(label.clone());
    label
}

/// Translates an acyclic QBAF into an MLP. Sources become inputs; every
/// other argument sits in the layer given by its longest distance from a
/// source.
pub fn qbaf_to_mlp(qbaf: &Qbaf) -> Result<(Mlp, InputAssignment)> {
    let level = qbaf.levels()?;
    let mut x = InputAssignment::new();
    let mut b = MlpBuilder::new();
    let depth = level.iter().copied().max().unwrap_or(0);
    if depth == 0 {
        return Err(Error::InvalidMlp("the QBAF has no non-source arguments".into()));
    }
    let mut layers: Vec<Vec<String>> = vec![Vec::new(); depth + 1];
    for a in qbaf.ids() {
        let label = qbaf.label(a).to_string();
        let beta = qbaf.base_score(a);
        if level[a.index()] == 0 && qbaf.in_degree(a) == 0 {
            x.insert(label.clone(), beta);
        } else {
            b.bias(label.clone(), base_to_bias(beta)?);
        }
        layers[level[a.index()]].push(label);
    }

    let mut taken: HashSet<String> = qbaf.labels().iter().cloned().collect();
    for e in qbaf.edges() {
        let (from, to) = (level[e.src.index()], level[e.dst.index()]);
        let (src, dst) = (qbaf.label(e.src), qbaf.label(e.dst));
        let mut prev = src.to_string();
        for k in from + 1..to {
            let relay = fresh_label(&mut taken, format!("relay_{src}_{dst}_{k}"));
            layers[k].push(relay.clone());
            b.relay_edge(prev, relay.clone());
            prev = relay;
        }
        b.edge(prev, dst, e.weight);
    }
    for layer in layers {
        b.layer(layer);
    }
    Ok((b.build()?, x))
}

/// Parses the `.mlp` text format.
pub fn parse_mlp(text: &str) -> Result<(Mlp, InputAssignment)> {
    let mut b = MlpBuilder::new();
    let mut x = InputAssignment::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let toks = tokenize(raw);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "layer" => {
                if toks.len() < 3 {
                    return Err(syntax(line, col, "expected `layer <k> <node ids...>`"));
                }
                let (kcol, ktok) = toks[1];
                let expected = b.layers.len();
                if ktok.parse::<usize>().ok() != Some(expected) {
                    return Err(syntax(line, kcol, format!("expected layer index {expected}")));
                }
                let ids = toks[2..].iter().map(|&t| parse_id(line, t)).collect::<Result<Vec<_>>>()?;
                b.layer(ids);
            }
            "bias" => {
                expect_arity(line, &toks, 3, "bias <node> <value>")?;
                b.bias(parse_id(line, toks[1])?, parse_float(line, toks[2])?);
            }
            "edge" => {
                if toks.len() == 5 {
                    if toks[4].1 != "relay" {
                        return Err(syntax(line, toks[4].0, "expected `relay`"));
                    }
                } else {
                    expect_arity(line, &toks, 4, "edge <src> <dst> <weight> [relay]")?;
                }
                let src = parse_id(line, toks[1])?;
                let dst = parse_id(line, toks[2])?;
                let w = parse_float(line, toks[3])?;
                b.edges.push((src, dst, w, toks.len() == 5));
            }
            "input" => {
                expect_arity(line, &toks, 3, "input <node> <value>")?;
                let node = parse_id(line, toks[1])?;
                if x.insert(node.clone(), parse_float(line, toks[2])?).is_some() {
                    return Err(syntax(line, toks[1].0, format!("input `{node}` given twice")));
                }
            }
            other => return Err(syntax(line, col, format!("unknown record `{other}`"))),
        }
    }
    Ok((b.build()?, x))
}

/// Canonical text form: layers, biases, edges (by target), then inputs.
pub fn serialize_mlp(mlp: &Mlp, x: &InputAssignment) -> String {
    let mut out = String::new();
    for (k, layer) in mlp.layers.iter().enumerate() {
        out.push_str(&format!("layer {k}"));
        for &v in layer {
            out.push(' ');
            out.push_str(&mlp.labels[v]);
        }
        out.push('\n');
    }
    for v in 0..mlp.len() {
        if let Some(theta) = mlp.bias[v] {
            out.push_str(&format!("bias {} {}\n", mlp.labels[v], format_float(theta)));
        }
    }
    for e in &mlp.edges {
        out.push_str(&format!(
            "edge {} {} {}{}\n",
            mlp.labels[e.src],
            mlp.labels[e.dst],
            format_float(e.weight),
            if e.relay { " relay" } else { "" }
        ));
    }
    for (node, value) in x {
        out.push_str(&format!("input {node} {}\n", format_float(*value)));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomMlpParams {
    /// Total layer count including input and output, at least 2.
    pub max_layers: usize,
    pub max_width: usize,
    pub edge_density: f64,
    /// Weights are drawn from `±(0, weight_scale]`.
    pub weight_scale: f64,
    pub bias_scale: f64,
    pub seed: u64,
}

impl Default for RandomMlpParams {
    fn default() -> Self {
        RandomMlpParams {
            max_layers: 4,
            max_width: 8,
            edge_density: 0.6,
            weight_scale: 3.0,
            bias_scale: 2.0,
            seed: 0,
        }
    }
}

/// Random layered MLP with inputs drawn uniformly from `[0,1]`.
pub fn random_mlp(params: &RandomMlpParams) -> Result<(Mlp, InputAssignment)> {
    if params.max_layers < 2 || params.max_width == 0 {
        return Err(Error::InvalidConfig("need at least 2 layers of width 1".into()));
    }
    if !(0.0..=1.0).contains(&params.edge_density) {
        return Err(Error::InvalidConfig(format!("edge density {} outside [0,1]", params.edge_density)));
    }
    if !(params.weight_scale > 0.0 && params.bias_scale >= 0.0) {
        return Err(Error::InvalidConfig("scales must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let depth = rng.gen_range(2..=params.max_layers);
    let layers: Vec<Vec<String>> = (0..depth)
        .map(|k| (0..rng.gen_range(1..=params.max_width)).map(|j| format!("n{k}_{j}")).collect())
        .collect();
    let mut b = MlpBuilder::new();
    for layer in &layers {
        b.layer(layer.iter().cloned());
    }
    for layer in &layers[1..] {
        for v in layer {
            b.bias(v.clone(), rng.gen_range(-params.bias_scale..=params.bias_scale));
        }
    }
    for pair in layers.windows(2) {
        for u in &pair[0] {
            for v in &pair[1] {
                if rng.gen_bool(params.edge_density) {
                    let magnitude = params.weight_scale * (1.0 - rng.gen::<f64>());
                    let w = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
                    b.edge(u.clone(), v.clone(), w);
                }
            }
        }
    }
    let x = layers[0].iter().map(|v| (v.clone(), rng.gen::<f64>())).collect();
    Ok((b.build()?, x))
}
