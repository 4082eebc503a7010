use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::circuit::{Circuit, GateKind};
use crate::counting::Count;
use crate::error::{Error, Result};

fn literal_value(kind: &GateKind, input: &[bool]) -> Option<bool> {
    match kind {
        GateKind::Input(i) => Some(input[*i]),
        GateKind::NegInput(i) => Some(!input[*i]),
        _ => None,
    }
}

fn arithmetize(c: &Circuit, leaf: impl Fn(&GateKind) -> Result<Count>) -> Result<Count> {
    let order = c.topo_order()?;
    let mut val: Vec<Count> = vec![Count::zero(); c.gates().len()];
    for &i in order.iter().rev() {
        let g = &c.gates()[i];
        val[i] = match &g.kind {
            GateKind::Input(_) | GateKind::NegInput(_) => leaf(&g.kind)?,
            GateKind::Or => g
                .children
                .iter()
                .map(|cid| val[c.gate_index(cid).unwrap()].clone())
                .sum(),
            GateKind::And => g
                .children
                .iter()
                .map(|cid| val[c.gate_index(cid).unwrap()].clone())
                .product(),
            GateKind::Maj | GateKind::Oracle(_) => {
                return Err(Error::Domain(format!(
                    "proof trees are only defined for AND/OR circuits; gate `{}` is not",
                    g.id
                )))
            }
        };
    }
    let root = c
        .gate_index(c.root_id())
        .ok_or_else(|| Error::InvalidCircuit(format!("root `{}` not found", c.root_id())))?;
    Ok(val[root].clone())
}

/// The number of proof trees of the unfolding of `c` on `input`: computed
/// by memoized arithmetization on the DAG (true literal 1, false literal
/// 0, OR sums, AND multiplies), which coincides with counting subtree
/// choices on the unfolded tree.
pub fn count_proof_trees(c: &Circuit, input: &[bool]) -> Result<Count> {
    if input.len() != c.input_len() {
        return Err(Error::Domain(format!(
            "input length {} does not match declared length {}",
            input.len(),
            c.input_len()
        )));
    }
    arithmetize(c, |kind| {
        Ok(if literal_value(kind, input).unwrap() {
            Count::one()
        } else {
            Count::zero()
        })
    })
}

/// The arithmetization value with every literal forced true: an upper
/// bound on the proof-tree count over all inputs.
pub fn proof_tree_upper_bound(c: &Circuit) -> Result<Count> {
    arithmetize(c, |_| Ok(Count::one()))
}

/// Explicitly enumerates proof trees of a tree-shaped circuit by choosing
/// one child at every reached OR gate and all children at every AND gate,
/// and counting the choice functions whose reached leaves are all true.
///
/// This materializes each proof tree, so it only runs within `max_trees`;
/// it exists as an independent oracle for [`count_proof_trees`].
pub fn enumerate_proof_trees(c: &Circuit, input: &[bool], max_trees: u64) -> Result<Count> {
    if input.len() != c.input_len() {
        return Err(Error::Domain(format!(
            "input length {} does not match declared length {}",
            input.len(),
            c.input_len()
        )));
    }
    // Require a tree: every non-root gate has exactly one parent.
    let order = c.topo_order()?;
    let mut parents = vec![0usize; c.gates().len()];
    for &i in &order {
        for cid in &c.gates()[i].children {
            parents[c.gate_index(cid).unwrap()] += 1;
        }
    }
    let root = c
        .gate_index(c.root_id())
        .ok_or_else(|| Error::InvalidCircuit(format!("root `{}` not found", c.root_id())))?;
    for (i, &p) in parents.iter().enumerate() {
        let expected = usize::from(i != root);
        if p != expected {
            return Err(Error::Domain(
                "proof-tree enumeration requires a tree-shaped circuit".into(),
            ));
        }
    }

    /// Each proof tree is the set of (or-gate index, chosen child) pairs.
    fn trees(
        c: &Circuit,
        gate: usize,
        input: &[bool],
        budget: u64,
    ) -> Result<Vec<Vec<(usize, usize)>>> {
        let g = &c.gates()[gate];
        match &g.kind {
            GateKind::Input(_) | GateKind::NegInput(_) => {
                Ok(if literal_value(&g.kind, input).unwrap() {
                    vec![Vec::new()]
                } else {
                    Vec::new()
                })
            }
            GateKind::Or => {
                let mut out = Vec::new();
                for (k, cid) in g.children.iter().enumerate() {
                    let sub = trees(c, c.gate_index(cid).unwrap(), input, budget)?;
                    for mut t in sub {
                        t.push((gate, k));
                        out.push(t);
                        if out.len() as u64 > budget {
                            return Err(Error::GuardExceeded(
                                "proof-tree enumeration budget exhausted".into(),
                            ));
                        }
                    }
                }
                Ok(out)
            }
            GateKind::And => {
                let mut acc: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
                for cid in &g.children {
                    let sub = trees(c, c.gate_index(cid).unwrap(), input, budget)?;
                    let mut next = Vec::new();
                    for left in &acc {
                        for right in &sub {
                            let mut t = left.clone();
                            t.extend(right.iter().cloned());
                            next.push(t);
                            if next.len() as u64 > budget {
                                return Err(Error::GuardExceeded(
                                    "proof-tree enumeration budget exhausted".into(),
                                ));
                            }
                        }
                    }
                    acc = next;
                }
                Ok(acc)
            }
            GateKind::Maj | GateKind::Oracle(_) => Err(Error::Domain(format!(
                "proof trees are only defined for AND/OR circuits; gate `{}` is not",
                g.id
            ))),
        }
    }

    let all = trees(c, root, input, max_trees)?;
    // Distinct choice functions are distinct proof trees.
    let distinct: std::collections::BTreeSet<_> = all.iter().cloned().collect();
    if distinct.len() != all.len() {
        return Err(Error::Inconsistency(
            "enumerated proof trees are not pairwise distinct".into(),
        ));
    }
    Ok(BigUint::from(all.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Flavor, Gate};

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

    #[test]
    fn or_over_two_true_literals_has_two_proof_trees() {
        let c = Circuit::new(
            1,
            Flavor::Circ,
            vec![
                gate("r", GateKind::Or, &["a", "b"]),
                gate("a", GateKind::Input(0), &[]),
                gate("b", GateKind::Input(0), &[]),
            ],
            "r",
        )
        .unwrap();
        assert_eq!(count_proof_trees(&c, &bits("1")).unwrap(), 2u32.into());
        assert_eq!(
            enumerate_proof_trees(&c, &bits("1"), 100).unwrap(),
            2u32.into()
        );
    }

    #[test]
    fn and_over_two_ors_multiplies() {
        let c = Circuit::new(
            2,
            Flavor::Circ,
            vec![
                gate("r", GateKind::And, &["o1", "o2"]),
                gate("o1", GateKind::Or, &["a1", "b1"]),
                gate("o2", GateKind::Or, &["a2", "b2"]),
                gate("a1", GateKind::Input(0), &[]),
                gate("b1", GateKind::Input(1), &[]),
                gate("a2", GateKind::Input(0), &[]),
                gate("b2", GateKind::Input(1), &[]),
            ],
            "r",
        )
        .unwrap();
        assert_eq!(count_proof_trees(&c, &bits("11")).unwrap(), 4u32.into());
        assert_eq!(
            enumerate_proof_trees(&c, &bits("11"), 100).unwrap(),
            4u32.into()
        );
        // Annihilation by one false literal under the AND.
        assert_eq!(count_proof_trees(&c, &bits("00")).unwrap(), 0u32.into());
    }

    #[test]
    fn false_literal_under_and_annihilates() {
        let c = Circuit::new(
            2,
            Flavor::Circ,
            vec![
                gate("r", GateKind::And, &["a", "b"]),
                gate("a", GateKind::Input(0), &[]),
                gate("b", GateKind::NegInput(0), &[]),
            ],
            "r",
        )
        .unwrap();
        assert_eq!(count_proof_trees(&c, &bits("10")).unwrap(), 0u32.into());
    }

    #[test]
    fn maj_gate_rejected() {
        let c = Circuit::new(
            1,
            Flavor::MajCirc,
            vec![
                gate("r", GateKind::Maj, &["a"]),
                gate("a", GateKind::Input(0), &[]),
            ],
            "r",
        )
        .unwrap();
        assert!(count_proof_trees(&c, &bits("1")).is_err());
    }

    #[test]
    fn upper_bound_dominates() {
        let c = Circuit::new(
            2,
            Flavor::Circ,
            vec![
                gate("r", GateKind::Or, &["a", "b"]),
                gate("a", GateKind::Input(0), &[]),
                gate("b", GateKind::NegInput(1), &[]),
            ],
            "r",
        )
        .unwrap();
        let bound = proof_tree_upper_bound(&c).unwrap();
        for w in ["00", "01", "10", "11"] {
            assert!(count_proof_trees(&c, &bits(w)).unwrap() <= bound);
        }
    }
}
