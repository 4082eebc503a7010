//! Circuit IR over the plain, majority, and oracle circuit vocabularies:
//! validation, Boolean evaluation, proof-tree counting, alternation
//! normalization, and explicit tree unfolding.

mod count;
mod eval;
mod normalize;
mod text;

pub use count::{count_proof_trees, enumerate_proof_trees, proof_tree_upper_bound};
pub use eval::{evaluate_circuit, OracleFunction};
pub use normalize::{normalize_alternating, unfold_to_tree};
pub use text::{parse_circuit, write_circuit};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which gate vocabulary a circuit is allowed to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// AND/OR over (possibly negated) inputs.
    Circ,
    /// Adds MAJORITY gates.
    MajCirc,
    /// Adds oracle gates with ordered children.
    OCirc,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Circ => write!(f, "circ"),
            Flavor::MajCirc => write!(f, "maj-circ"),
            Flavor::OCirc => write!(f, "o-circ"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateKind {
    And,
    Or,
    Maj,
    /// Reads input bit `i`.
    Input(usize),
    /// Reads the negation of input bit `i`; circuits are in negation
    /// normal form, so this is the only place negation occurs.
    NegInput(usize),
    /// Outputs bit `b` of the oracle applied to the ordered child values.
    Oracle(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    /// Child gate ids. Order is semantically relevant only for oracle
    /// gates; duplicates are permitted.
    pub children: Vec<String>,
}

/// A rooted circuit DAG.
#[derive(Debug, Clone)]
pub struct Circuit {
    input_len: usize,
    flavor: Flavor,
    gates: Vec<Gate>,
    root: String,
    index: HashMap<String, usize>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.input_len == other.input_len
            && self.flavor == other.flavor
            && self.gates == other.gates
            && self.root == other.root
    }
}
impl Eq for Circuit {}

/// A validation finding: the offending gate (when one can be named) and
/// the violated rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub gate: Option<String>,
    pub rule: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.gate {
            Some(g) => write!(f, "gate `{g}`: {}", self.rule),
            None => write!(f, "{}", self.rule),
        }
    }
}

impl Circuit {
    /// Builds a circuit. Duplicate gate ids are rejected here because the
    /// id index would be ambiguous; everything else is left to
    /// [`Circuit::validate`].
    pub fn new(
        input_len: usize,
        flavor: Flavor,
        gates: Vec<Gate>,
        root: impl Into<String>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, g) in gates.iter().enumerate() {
            if index.insert(g.id.clone(), i).is_some() {
                return Err(Error::InvalidCircuit(format!(
                    "duplicate gate id `{}`",
                    g.id
                )));
            }
        }
        Ok(Circuit {
            input_len,
            flavor,
            gates,
            root: root.into(),
            index,
        })
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn root_id(&self) -> &str {
        &self.root
    }

    pub fn gate(&self, id: &str) -> Option<&Gate> {
        self.index.get(id).map(|&i| &self.gates[i])
    }

    pub(crate) fn gate_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn root_gate(&self) -> Result<&Gate> {
        self.gate(&self.root)
            .ok_or_else(|| Error::InvalidCircuit(format!("root `{}` not found", self.root)))
    }

    /// Length of the longest path from the root to any leaf.
    pub fn depth(&self) -> Result<usize> {
        let order = self.topo_order()?;
        let mut depth = vec![0usize; self.gates.len()];
        for &i in order.iter().rev() {
            let g = &self.gates[i];
            depth[i] = g
                .children
                .iter()
                .map(|c| depth[self.gate_index(c).unwrap()] + 1)
                .max()
                .unwrap_or(0);
        }
        let root = self
            .gate_index(&self.root)
            .ok_or_else(|| Error::InvalidCircuit(format!("root `{}` not found", self.root)))?;
        Ok(depth[root])
    }

    /// Gate indices in an order where every gate precedes its children.
    /// Fails on unknown children or cycles.
    pub(crate) fn topo_order(&self) -> Result<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Grey,
            Black,
        }
        let mut marks = vec![Mark::White; self.gates.len()];
        let mut order = Vec::with_capacity(self.gates.len());
        // Iterative DFS; post-order reversed gives parents-first.
        for start in 0..self.gates.len() {
            if marks[start] != Mark::White {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            marks[start] = Mark::Grey;
            while let Some(&mut (g, ref mut next)) = stack.last_mut() {
                let gate = &self.gates[g];
                if *next < gate.children.len() {
                    let cid = &gate.children[*next];
                    *next += 1;
                    let c = self.gate_index(cid).ok_or_else(|| {
                        Error::InvalidCircuit(format!(
                            "gate `{}` references unknown child `{cid}`",
                            gate.id
                        ))
                    })?;
                    match marks[c] {
                        Mark::White => {
                            marks[c] = Mark::Grey;
                            stack.push((c, 0));
                        }
                        Mark::Grey => {
                            return Err(Error::InvalidCircuit(format!(
                                "cycle through gate `{}`",
                                self.gates[c].id
                            )));
                        }
                        Mark::Black => {}
                    }
                } else {
                    marks[g] = Mark::Black;
                    order.push(g);
                    stack.pop();
                }
            }
        }
        order.reverse();
        Ok(order)
    }

    /// Checks every structural invariant and returns one diagnostic per
    /// violation; an empty list means the circuit is well-formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let diag = |gate: Option<&str>, rule: String| Diagnostic {
            gate: gate.map(|s| s.to_string()),
            rule,
        };

        if self.gate(&self.root).is_none() {
            out.push(diag(None, format!("root `{}` names no gate", self.root)));
        }
        for g in &self.gates {
            for c in &g.children {
                if self.gate(c).is_none() {
                    out.push(diag(Some(&g.id), format!("unknown child `{c}`")));
                }
            }
            match g.kind {
                GateKind::Input(i) | GateKind::NegInput(i) => {
                    if !g.children.is_empty() {
                        out.push(diag(Some(&g.id), "input gates must be leaves".into()));
                    }
                    if i >= self.input_len {
                        out.push(diag(
                            Some(&g.id),
                            format!(
                                "input index {i} out of range for input length {}",
                                self.input_len
                            ),
                        ));
                    }
                }
                GateKind::Maj => {
                    if self.flavor != Flavor::MajCirc {
                        out.push(diag(
                            Some(&g.id),
                            format!("majority gate not allowed in flavor {}", self.flavor),
                        ));
                    }
                }
                GateKind::Oracle(_) => {
                    if self.flavor != Flavor::OCirc {
                        out.push(diag(
                            Some(&g.id),
                            format!("oracle gate not allowed in flavor {}", self.flavor),
                        ));
                    }
                }
                GateKind::And | GateKind::Or => {}
            }
        }
        // Cycle detection only makes sense once all children resolve.
        if out.is_empty() {
            if let Err(Error::InvalidCircuit(msg)) = self.topo_order() {
                out.push(diag(None, msg));
            }
        }
        out
    }

    /// True if every root-to-leaf path has the same length, gate kinds
    /// strictly alternate AND (even depth) / OR (odd depth), the root is
    /// an AND, and the circuit is a tree.
    pub fn is_alternating_leveled_tree(&self) -> Result<bool> {
        let order = self.topo_order()?;
        let mut parents = vec![0usize; self.gates.len()];
        for &i in &order {
            for c in &self.gates[i].children {
                parents[self.gate_index(c).unwrap()] += 1;
            }
        }
        let root = match self.gate_index(&self.root) {
            Some(r) => r,
            None => return Ok(false),
        };
        if parents[root] != 0 || parents.iter().enumerate().any(|(i, &p)| i != root && p != 1)
        {
            return Ok(false);
        }
        // BFS depths from the root; literals must share one depth.
        let mut depth = vec![usize::MAX; self.gates.len()];
        depth[root] = 0;
        let mut literal_depths = std::collections::BTreeSet::new();
        for &i in &order {
            if depth[i] == usize::MAX {
                return Ok(false); // unreachable gate
            }
            let g = &self.gates[i];
            match g.kind {
                GateKind::And => {
                    if depth[i] % 2 != 0 {
                        return Ok(false);
                    }
                }
                GateKind::Or => {
                    if depth[i] % 2 != 1 {
                        return Ok(false);
                    }
                }
                GateKind::Input(_) | GateKind::NegInput(_) => {
                    literal_depths.insert(depth[i]);
                }
                _ => return Ok(false),
            }
            for c in &g.children {
                depth[self.gate_index(c).unwrap()] = depth[i] + 1;
            }
        }
        if self.gates[root].kind != GateKind::And && !matches!(self.gates[root].kind, GateKind::Input(_) | GateKind::NegInput(_)) {
            return Ok(false);
        }
        if matches!(self.gates[root].kind, GateKind::Input(_) | GateKind::NegInput(_)) {
            return Ok(false);
        }
        Ok(literal_depths.len() <= 1)
    }
}

/// A family of circuits, one per input length.
#[derive(Clone)]
pub struct CircuitFamily {
    gen: Arc<dyn Fn(usize) -> Result<Circuit> + Send + Sync>,
}

impl CircuitFamily {
    pub fn from_fn(gen: impl Fn(usize) -> Result<Circuit> + Send + Sync + 'static) -> Self {
        CircuitFamily { gen: Arc::new(gen) }
    }

    pub fn from_circuit(c: Circuit) -> Self {
        CircuitFamily::from_fn(move |n| {
            if n == c.input_len() {
                Ok(c.clone())
            } else {
                Err(Error::Domain(format!(
                    "family only defined for input length {}, got {n}",
                    c.input_len()
                )))
            }
        })
    }

    /// The circuit for input length `n`; input indices are checked.
    pub fn circuit_for(&self, n: usize) -> Result<Circuit> {
        let c = (self.gen)(n)?;
        if c.input_len() != n {
            return Err(Error::Domain(format!(
                "family produced input length {} for size {n}",
                c.input_len()
            )));
        }
        for g in c.gates() {
            if let GateKind::Input(i) | GateKind::NegInput(i) = g.kind {
                if i >= n {
                    return Err(Error::InvalidCircuit(format!(
                        "gate `{}` reads input {i} beyond length {n}",
                        g.id
                    )));
                }
            }
        }
        Ok(c)
    }
}

impl fmt::Debug for CircuitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircuitFamily").finish_non_exhaustive()
    }
}
