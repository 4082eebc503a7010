use std::fmt::Write as _;

use crate::circuit::{Circuit, Flavor, Gate, GateKind};
use crate::error::{Error, Result};

/// Writes a circuit in the text schema: a header with input length and
/// flavor, one `gate` record per gate sorted by id, and the root id.
pub fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("circuit\n");
    writeln!(out, "input_length {}", c.input_len()).unwrap();
    writeln!(out, "flavor {}", c.flavor()).unwrap();
    let mut gates: Vec<&Gate> = c.gates().iter().collect();
    gates.sort_by(|a, b| a.id.cmp(&b.id));
    for g in gates {
        let children = g.children.join(" ");
        match &g.kind {
            GateKind::And => writeln!(out, "gate {} and {}", g.id, children),
            GateKind::Or => writeln!(out, "gate {} or {}", g.id, children),
            GateKind::Maj => writeln!(out, "gate {} maj {}", g.id, children),
            GateKind::Input(i) => writeln!(out, "gate {} input {i}", g.id),
            GateKind::NegInput(i) => writeln!(out, "gate {} neg-input {i}", g.id),
            GateKind::Oracle(b) => writeln!(out, "gate {} oracle {b} {}", g.id, children),
        }
        .unwrap();
    }
    writeln!(out, "root {}", c.root_id()).unwrap();
    out.push_str("end\n");
    // Normalize double spaces from empty child lists.
    out.lines()
        .map(|l| l.trim_end())
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut input_len: Option<usize> = None;
    let mut flavor: Option<Flavor> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut root: Option<String> = None;
    let mut saw_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let mut words = line.split_whitespace();
        match words.next().unwrap() {
            "circuit" => saw_header = true,
            "input_length" => {
                let n = words
                    .next()
                    .ok_or_else(|| err("input_length needs a value".into()))?
                    .parse()
                    .map_err(|_| err("invalid input length".into()))?;
                input_len = Some(n);
            }
            "flavor" => {
                flavor = Some(match words.next() {
                    Some("circ") => Flavor::Circ,
                    Some("maj-circ") => Flavor::MajCirc,
                    Some("o-circ") => Flavor::OCirc,
                    other => return Err(err(format!("unknown flavor {other:?}"))),
                });
            }
            "gate" => {
                let id = words
                    .next()
                    .ok_or_else(|| err("gate needs an id".into()))?
                    .to_string();
                let kind_word = words.next().ok_or_else(|| err("gate needs a kind".into()))?;
                let rest: Vec<String> = words.map(|s| s.to_string()).collect();
                let (kind, children) = match kind_word {
                    "and" => (GateKind::And, rest),
                    "or" => (GateKind::Or, rest),
                    "maj" => (GateKind::Maj, rest),
                    "input" | "neg-input" => {
                        if rest.len() != 1 {
                            return Err(err(format!(
                                "`{kind_word}` takes exactly one input index"
                            )));
                        }
                        let i: usize = rest[0]
                            .parse()
                            .map_err(|_| err("invalid input index".into()))?;
                        let kind = if kind_word == "input" {
                            GateKind::Input(i)
                        } else {
                            GateKind::NegInput(i)
                        };
                        (kind, Vec::new())
                    }
                    "oracle" => {
                        if rest.is_empty() {
                            return Err(err("`oracle` needs a bit index".into()));
                        }
                        let b: u64 = rest[0]
                            .parse()
                            .map_err(|_| err("invalid oracle bit index".into()))?;
                        (GateKind::Oracle(b), rest[1..].to_vec())
                    }
                    other => return Err(err(format!("unknown gate kind `{other}`"))),
                };
                gates.push(Gate { id, kind, children });
            }
            "root" => {
                let id = words
                    .next()
                    .ok_or_else(|| err("root needs a gate id".into()))?
                    .to_string();
                if let Some(prev) = &root {
                    return Err(err(format!(
                        "gate `{id}` marked as root but `{prev}` already is"
                    )));
                }
                root = Some(id);
            }
            "end" => {}
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    if !saw_header {
        return Err(Error::Parse("missing `circuit` header".into()));
    }
    let input_len = input_len.ok_or_else(|| Error::Parse("missing input_length".into()))?;
    let flavor = flavor.ok_or_else(|| Error::Parse("missing flavor".into()))?;
    let root = root.ok_or_else(|| Error::Parse("missing root".into()))?;
    Circuit::new(input_len, flavor, gates, root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let text = "circuit\ninput_length 2\nflavor circ\ngate a input 0\ngate b neg-input 1\ngate r or a b\nroot r\nend\n";
        let c = parse_circuit(text).unwrap();
        let written = write_circuit(&c);
        let c2 = parse_circuit(&written).unwrap();
        assert_eq!(c, c2);
        assert_eq!(write_circuit(&c2), written);
    }

    #[test]
    fn duplicate_root_marker_is_an_error() {
        let text =
            "circuit\ninput_length 1\nflavor circ\ngate a input 0\nroot a\nroot a\nend\n";
        let err = parse_circuit(text).unwrap_err();
        assert!(err.to_string().contains("already is"));
    }

    #[test]
    fn oracle_gates_round_trip_with_ordered_children() {
        let text = "circuit\ninput_length 2\nflavor o-circ\ngate a input 0\ngate b input 1\ngate r oracle 3 b a b\nroot r\nend\n";
        let c = parse_circuit(text).unwrap();
        let g = c.gate("r").unwrap();
        assert_eq!(g.kind, GateKind::Oracle(3));
        assert_eq!(g.children, vec!["b", "a", "b"]);
        assert_eq!(parse_circuit(&write_circuit(&c)).unwrap(), c);
    }
}
