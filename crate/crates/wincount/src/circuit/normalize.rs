use crate::circuit::{Circuit, Flavor, Gate, GateKind};
use crate::error::{Error, Result};

fn require_and_or(c: &Circuit) -> Result<()> {
    for g in c.gates() {
        if matches!(g.kind, GateKind::Maj | GateKind::Oracle(_)) {
            return Err(Error::Domain(format!(
                "gate `{}`: only AND/OR circuits can be normalized",
                g.id
            )));
        }
    }
    Ok(())
}

struct Builder {
    gates: Vec<Gate>,
    max_gates: usize,
    counter: usize,
}

impl Builder {
    fn push(&mut self, kind: GateKind, children: Vec<String>) -> Result<String> {
        if self.gates.len() >= self.max_gates {
            return Err(Error::GuardExceeded(format!(
                "expansion guard of {} gates exceeded",
                self.max_gates
            )));
        }
        let id = format!("n{}", self.counter);
        self.counter += 1;
        self.gates.push(Gate {
            id: id.clone(),
            kind,
            children,
        });
        Ok(id)
    }
}

/// Duplicates shared subcircuits so the result is tree-shaped, preserving
/// the Boolean function and the proof-tree count.
pub fn unfold_to_tree(c: &Circuit, max_gates: usize) -> Result<Circuit> {
    c.topo_order()?; // reject cycles and unknown children up front
    let mut b = Builder {
        gates: Vec::new(),
        max_gates,
        counter: 0,
    };
    fn copy(c: &Circuit, id: &str, b: &mut Builder) -> Result<String> {
        let g = c.gate(id).unwrap();
        let children: Result<Vec<String>> =
            g.children.iter().map(|cid| copy(c, cid, b)).collect();
        b.push(g.kind.clone(), children?)
    }
    let root = copy(c, c.root_id(), &mut b)?;
    Circuit::new(c.input_len(), c.flavor(), b.gates, root)
}

fn height(c: &Circuit, id: &str, memo: &mut std::collections::HashMap<String, usize>) -> usize {
    if let Some(&h) = memo.get(id) {
        return h;
    }
    let g = c.gate(id).unwrap();
    let h = g
        .children
        .iter()
        .map(|cid| height(c, cid, memo) + 1)
        .max()
        .unwrap_or(0);
    memo.insert(id.to_string(), h);
    h
}

/// Rebuilds an AND/OR circuit as a leveled alternating tree: the root is
/// an AND, gate kinds alternate AND (even depth) / OR (odd depth), every
/// literal sits at depth twice the leveled original depth, and both the
/// Boolean function and the proof-tree count are preserved on every
/// input. Constant gates (AND/OR with no children) are re-emitted at a
/// depth whose parity matches their kind.
pub fn normalize_alternating(c: &Circuit, max_gates: usize) -> Result<Circuit> {
    require_and_or(c)?;
    c.topo_order()?;
    let root_gate = c.root_gate()?;

    let mut memo = std::collections::HashMap::new();
    let mut h = height(c, c.root_id(), &mut memo);
    if matches!(root_gate.kind, GateKind::Input(_) | GateKind::NegInput(_)) {
        h = 1;
    }
    let target = 2 * h;

    let mut b = Builder {
        gates: Vec::new(),
        max_gates,
        counter: 0,
    };

    fn constant(value: bool, depth: usize, b: &mut Builder) -> Result<String> {
        match (value, depth % 2 == 0) {
            (true, true) => b.push(GateKind::And, vec![]),
            (true, false) => {
                let inner = b.push(GateKind::And, vec![])?;
                b.push(GateKind::Or, vec![inner])
            }
            (false, false) => b.push(GateKind::Or, vec![]),
            (false, true) => {
                let inner = b.push(GateKind::Or, vec![])?;
                b.push(GateKind::And, vec![inner])
            }
        }
    }

    fn build(
        c: &Circuit,
        id: &str,
        depth: usize,
        target: usize,
        b: &mut Builder,
    ) -> Result<String> {
        let g = c.gate(id).unwrap();
        match &g.kind {
            GateKind::Input(_) | GateKind::NegInput(_) => {
                // Pad with neutral unary gates down to the literal level.
                let mut top = b.push(g.kind.clone(), vec![])?;
                for d in (depth..target).rev() {
                    let kind = if d % 2 == 0 {
                        GateKind::And
                    } else {
                        GateKind::Or
                    };
                    top = b.push(kind, vec![top])?;
                }
                Ok(top)
            }
            GateKind::And if g.children.is_empty() => constant(true, depth, b),
            GateKind::Or if g.children.is_empty() => constant(false, depth, b),
            GateKind::And => {
                let mut wrapped = Vec::new();
                for cid in &g.children {
                    let sub = build(c, cid, depth + 2, target, b)?;
                    wrapped.push(b.push(GateKind::Or, vec![sub])?);
                }
                b.push(GateKind::And, wrapped)
            }
            GateKind::Or => {
                let subs: Result<Vec<String>> = g
                    .children
                    .iter()
                    .map(|cid| build(c, cid, depth + 2, target, b))
                    .collect();
                let inner = b.push(GateKind::Or, subs?)?;
                b.push(GateKind::And, vec![inner])
            }
            GateKind::Maj | GateKind::Oracle(_) => unreachable!("checked above"),
        }
    }

    let root = build(c, c.root_id(), 0, target, &mut b)?;
    Circuit::new(c.input_len(), Flavor::Circ, b.gates, root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{count_proof_trees, enumerate_proof_trees, evaluate_circuit};

    fn gate(id: &str, kind: GateKind, children: &[&str]) -> Gate {
        Gate {
            id: id.into(),
            kind,
            children: children.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn all_inputs(n: usize) -> Vec<Vec<bool>> {
        (0..1usize << n)
            .map(|m| (0..n).map(|i| (m >> i) & 1 == 1).collect())
            .collect()
    }

    fn diamond() -> Circuit {
        // Root AND reaches a shared OR through two paths.
        Circuit::new(
            2,
            Flavor::Circ,
            vec![
                gate("r", GateKind::And, &["p", "q"]),
                gate("p", GateKind::Or, &["shared", "x0"]),
                gate("q", GateKind::Or, &["shared"]),
                gate("shared", GateKind::Or, &["x0", "x1"]),
                gate("x0", GateKind::Input(0), &[]),
                gate("x1", GateKind::Input(1), &[]),
            ],
            "r",
        )
        .unwrap()
    }

    #[test]
    fn unfold_duplicates_shared_gates() {
        let c = diamond();
        let t = unfold_to_tree(&c, 1000).unwrap();
        assert!(t.gates().len() > c.gates().len());
        for w in all_inputs(2) {
            assert_eq!(
                count_proof_trees(&c, &w).unwrap(),
                count_proof_trees(&t, &w).unwrap()
            );
            assert_eq!(
                count_proof_trees(&t, &w).unwrap(),
                enumerate_proof_trees(&t, &w, 10_000).unwrap()
            );
        }
    }

    #[test]
    fn unfold_of_tree_is_isomorphic() {
        let c = Circuit::new(
            1,
            Flavor::Circ,
            vec![
                gate("r", GateKind::Or, &["a", "b"]),
                gate("a", GateKind::Input(0), &[]),
                gate("b", GateKind::NegInput(0), &[]),
            ],
            "r",
        )
        .unwrap();
        let t = unfold_to_tree(&c, 100).unwrap();
        assert_eq!(t.gates().len(), c.gates().len());
    }

    #[test]
    fn unfold_guard() {
        let c = diamond();
        assert!(matches!(
            unfold_to_tree(&c, 3),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn normalize_single_or_becomes_and_rooted_depth_two() {
        let c = Circuit::new(
            2,
            Flavor::Circ,
            vec![
                gate("r", GateKind::Or, &["a", "b"]),
                gate("a", GateKind::Input(0), &[]),
                gate("b", GateKind::Input(1), &[]),
            ],
            "r",
        )
        .unwrap();
        let norm = normalize_alternating(&c, 1000).unwrap();
        assert_eq!(norm.root_gate().unwrap().kind, GateKind::And);
        assert_eq!(norm.depth().unwrap(), 2);
        assert!(norm.is_alternating_leveled_tree().unwrap());
        for w in all_inputs(2) {
            assert_eq!(
                count_proof_trees(&c, &w).unwrap(),
                count_proof_trees(&norm, &w).unwrap()
            );
        }
    }

    #[test]
    fn normalize_preserves_counts_and_values() {
        let c = diamond();
        let norm = normalize_alternating(&c, 10_000).unwrap();
        assert!(norm.is_alternating_leveled_tree().unwrap());
        assert_eq!(norm.depth().unwrap() % 2, 0);
        for w in all_inputs(2) {
            assert_eq!(
                count_proof_trees(&c, &w).unwrap(),
                count_proof_trees(&norm, &w).unwrap()
            );
            assert_eq!(
                evaluate_circuit(&c, &w, None).unwrap(),
                evaluate_circuit(&norm, &w, None).unwrap()
            );
        }
    }

    #[test]
    fn normalize_handles_constants() {
        let c = Circuit::new(
            1,
            Flavor::Circ,
            vec![
                gate("r", GateKind::And, &["one", "o"]),
                gate("one", GateKind::And, &[]),
                gate("o", GateKind::Or, &["x", "zero"]),
                gate("zero", GateKind::Or, &[]),
                gate("x", GateKind::Input(0), &[]),
            ],
            "r",
        )
        .unwrap();
        let norm = normalize_alternating(&c, 1000).unwrap();
        for w in all_inputs(1) {
            assert_eq!(
                count_proof_trees(&c, &w).unwrap(),
                count_proof_trees(&norm, &w).unwrap()
            );
        }
    }

    #[test]
    fn normalize_already_alternating_is_count_neutral() {
        let c = Circuit::new(
            2,
            Flavor::Circ,
            vec![
                gate("r", GateKind::And, &["o1", "o2"]),
                gate("o1", GateKind::Or, &["a", "b"]),
                gate("o2", GateKind::Or, &["a2", "b2"]),
                gate("a", GateKind::Input(0), &[]),
                gate("b", GateKind::Input(1), &[]),
                gate("a2", GateKind::NegInput(0), &[]),
                gate("b2", GateKind::NegInput(1), &[]),
            ],
            "r",
        )
        .unwrap();
        let norm = normalize_alternating(&c, 1000).unwrap();
        for w in all_inputs(2) {
            assert_eq!(
                count_proof_trees(&c, &w).unwrap(),
                count_proof_trees(&norm, &w).unwrap()
            );
        }
    }
}
