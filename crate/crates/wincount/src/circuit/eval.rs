use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};

/// A deterministic function from bit strings to unbounded nonnegative
/// integers, queried one bit at a time by oracle gates.
#[derive(Clone)]
pub struct OracleFunction {
    f: Arc<dyn Fn(&[bool]) -> Result<BigUint> + Send + Sync>,
}

impl OracleFunction {
    pub fn from_fn(f: impl Fn(&[bool]) -> Result<BigUint> + Send + Sync + 'static) -> Self {
        OracleFunction { f: Arc::new(f) }
    }

    /// A fixed value regardless of the queried string.
    pub fn constant(v: BigUint) -> Self {
        OracleFunction::from_fn(move |_| Ok(v.clone()))
    }

    pub fn value(&self, input: &[bool]) -> Result<BigUint> {
        (self.f)(input)
    }

    pub fn bit(&self, b: u64, input: &[bool]) -> Result<bool> {
        Ok(self.value(input)?.bit(b))
    }
}

impl fmt::Debug for OracleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleFunction").finish_non_exhaustive()
    }
}

/// Evaluates a circuit on an input string.
///
/// AND is the conjunction of the children (true when empty), OR the
/// disjunction (false when empty), MAJORITY is true iff at least
/// ceil(fan-in / 2) children are true, and an oracle gate yields bit `b`
/// of the oracle applied to its ordered child values.
pub fn evaluate_circuit(
    c: &Circuit,
    input: &[bool],
    oracle: Option<&OracleFunction>,
) -> Result<bool> {
    if input.len() != c.input_len() {
        return Err(Error::Domain(format!(
            "input length {} does not match declared length {}",
            input.len(),
            c.input_len()
        )));
    }
    let has_oracle = c
        .gates()
        .iter()
        .any(|g| matches!(g.kind, GateKind::Oracle(_)));
    if has_oracle && oracle.is_none() {
        return Err(Error::Domain(
            "circuit has oracle gates but no oracle was supplied".into(),
        ));
    }
    let order = c.topo_order()?;
    let mut value = vec![false; c.gates().len()];
    for &i in order.iter().rev() {
        let g = &c.gates()[i];
        value[i] = match g.kind {
            GateKind::Input(k) => input[k],
            GateKind::NegInput(k) => !input[k],
            GateKind::And => g
                .children
                .iter()
                .all(|cid| value[c.gate_index(cid).unwrap()]),
            GateKind::Or => g
                .children
                .iter()
                .any(|cid| value[c.gate_index(cid).unwrap()]),
            GateKind::Maj => {
                let fanin = g.children.len();
                let trues = g
                    .children
                    .iter()
                    .filter(|cid| value[c.gate_index(cid).unwrap()])
                    .count();
                trues >= fanin.div_ceil(2)
            }
            GateKind::Oracle(b) => {
                let bits: Vec<bool> = g
                    .children
                    .iter()
                    .map(|cid| value[c.gate_index(cid).unwrap()])
                    .collect();
                oracle.unwrap().bit(b, &bits)?
            }
        };
    }
    let root = c
        .gate_index(c.root_id())
        .ok_or_else(|| Error::InvalidCircuit(format!("root `{}` not found", c.root_id())))?;
    Ok(value[root])
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
    fn or_of_inputs() {
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
        assert!(evaluate_circuit(&c, &bits("10"), None).unwrap());
        assert!(!evaluate_circuit(&c, &bits("00"), None).unwrap());
    }

    #[test]
    fn majority_threshold() {
        let c = Circuit::new(
            3,
            Flavor::MajCirc,
            vec![
                gate("r", GateKind::Maj, &["a", "b", "c"]),
                gate("a", GateKind::Input(0), &[]),
                gate("b", GateKind::Input(1), &[]),
                gate("c", GateKind::Input(2), &[]),
            ],
            "r",
        )
        .unwrap();
        assert!(evaluate_circuit(&c, &bits("110"), None).unwrap());
        assert!(!evaluate_circuit(&c, &bits("100"), None).unwrap());
    }

    #[test]
    fn oracle_gate_reads_designated_bit() {
        // Oracle: the numeric value of its input read MSB-first.
        let oracle = OracleFunction::from_fn(|bits| {
            let mut v = BigUint::from(0u32);
            for &b in bits {
                v = (v << 1) + BigUint::from(u8::from(b));
            }
            Ok(v)
        });
        let c = Circuit::new(
            3,
            Flavor::OCirc,
            vec![
                gate("r", GateKind::Oracle(0), &["a", "b", "c"]),
                gate("a", GateKind::Input(0), &[]),
                gate("b", GateKind::Input(1), &[]),
                gate("c", GateKind::Input(2), &[]),
            ],
            "r",
        )
        .unwrap();
        // Children "101" -> value 5 -> bit 0 is 1.
        assert!(evaluate_circuit(&c, &bits("101"), Some(&oracle)).unwrap());
        // Children "110" -> value 6 -> bit 0 is 0.
        assert!(!evaluate_circuit(&c, &bits("110"), Some(&oracle)).unwrap());
    }

    #[test]
    fn missing_oracle_and_length_mismatch() {
        let c = Circuit::new(
            1,
            Flavor::OCirc,
            vec![
                gate("r", GateKind::Oracle(0), &["a"]),
                gate("a", GateKind::Input(0), &[]),
            ],
            "r",
        )
        .unwrap();
        assert!(evaluate_circuit(&c, &bits("1"), None).is_err());
        let oracle = OracleFunction::constant(BigUint::from(1u32));
        assert!(evaluate_circuit(&c, &bits("11"), Some(&oracle)).is_err());
    }
}
