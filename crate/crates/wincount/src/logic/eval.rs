use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logic::structure::Structure;
use crate::logic::syntax::{Atom, Fo, Quant};

/// A variable assignment for the free variables of a formula.
pub type Assignment = BTreeMap<String, usize>;

fn bit_of(i: usize, j: usize) -> bool {
    i < usize::BITS as usize && (j >> i) & 1 == 1
}

struct Env<'a> {
    a: &'a Structure,
    aux: Option<&'a Structure>,
    vars: HashMap<String, Vec<usize>>,
}

impl<'a> Env<'a> {
    fn value(&self, v: &str) -> Result<usize> {
        self.vars
            .get(v)
            .and_then(|stack| stack.last().copied())
            .ok_or_else(|| Error::UnboundVariable(v.to_string()))
    }

    fn push(&mut self, v: &str, x: usize) {
        self.vars.entry(v.to_string()).or_default().push(x);
    }

    fn pop(&mut self, v: &str) {
        if let Some(stack) = self.vars.get_mut(v) {
            stack.pop();
        }
    }

    fn holds_atom(&self, atom: &Atom) -> Result<bool> {
        Ok(match atom {
            Atom::Eq(a, b) => self.value(a)? == self.value(b)?,
            Atom::Le(a, b) => self.value(a)? <= self.value(b)?,
            Atom::Plus(a, b, c) => self.value(a)? + self.value(b)? == self.value(c)?,
            Atom::Times(a, b, c) => self.value(a)? * self.value(b)? == self.value(c)?,
            Atom::Bit(a, b) => bit_of(self.value(a)?, self.value(b)?),
            Atom::Rel { symbol, args } => {
                let vals: Result<Vec<usize>> = args.iter().map(|v| self.value(v)).collect();
                let vals = vals?;
                let (rel, declared) = lookup_relation(self.a, self.aux, symbol)?;
                if declared != vals.len() {
                    return Err(Error::ArityMismatch {
                        symbol: symbol.clone(),
                        declared,
                        used: vals.len(),
                    });
                }
                rel.contains(vals.as_slice())
            }
        })
    }
}

fn lookup_relation<'a>(
    a: &'a Structure,
    aux: Option<&'a Structure>,
    symbol: &str,
) -> Result<(&'a std::collections::HashSet<Vec<usize>>, usize)> {
    if let Some(arity) = a.vocabulary().arity_of(symbol) {
        return Ok((a.relation(symbol).unwrap(), arity));
    }
    if let Some(aux) = aux {
        if let Some(arity) = aux.vocabulary().arity_of(symbol) {
            return Ok((aux.relation(symbol).unwrap(), arity));
        }
    }
    Err(Error::UnknownRelation(symbol.to_string()))
}

/// Standard Tarskian evaluation. Input-structure symbols are looked up in
/// `a`, auxiliary symbols in `aux`; the numerical atom kinds always carry
/// their intended meaning on `{0..n-1}`. Quantifiers over an empty
/// universe follow the usual convention: `forall` holds, `exists` fails.
pub fn evaluate(
    f: &Fo,
    a: &Structure,
    aux: Option<&Structure>,
    assignment: &Assignment,
) -> Result<bool> {
    if let Some(aux) = aux {
        if aux.universe_size() != a.universe_size() {
            return Err(Error::Domain(format!(
                "auxiliary structure has universe {} but input has {}",
                aux.universe_size(),
                a.universe_size()
            )));
        }
    }
    let mut env = Env {
        a,
        aux,
        vars: assignment
            .iter()
            .map(|(k, v)| (k.clone(), vec![*v]))
            .collect(),
    };
    eval_rec(f, &mut env)
}

fn eval_rec(f: &Fo, env: &mut Env) -> Result<bool> {
    Ok(match f {
        Fo::Atom(atom) => env.holds_atom(atom)?,
        Fo::Not(g) => !eval_rec(g, env)?,
        Fo::And(a, b) => eval_rec(a, env)? && eval_rec(b, env)?,
        Fo::Or(a, b) => eval_rec(a, env)? || eval_rec(b, env)?,
        Fo::Quant(q, v, body) => {
            let n = env.a.universe_size();
            let mut result = *q == Quant::Forall;
            for x in 0..n {
                env.push(v, x);
                let r = eval_rec(body, env);
                env.pop(v);
                let r = r?;
                match q {
                    Quant::Exists if r => {
                        result = true;
                        break;
                    }
                    Quant::Forall if !r => {
                        result = false;
                        break;
                    }
                    _ => {}
                }
            }
            result
        }
    })
}

/// A quantifier-free matrix with every variable occurrence resolved to a
/// slot index, for tight inner loops over full assignments.
pub(crate) enum Resolved {
    Eq(usize, usize),
    Le(usize, usize),
    Plus(usize, usize, usize),
    Times(usize, usize, usize),
    Bit(usize, usize),
    Rel { rel: usize, in_aux: bool, slots: Vec<usize> },
    Not(Box<Resolved>),
    And(Box<Resolved>, Box<Resolved>),
    Or(Box<Resolved>, Box<Resolved>),
}

pub(crate) struct ResolvedMatrix {
    root: Resolved,
}

impl ResolvedMatrix {
    /// Resolves a quantifier-free formula against an ordered variable list.
    pub(crate) fn build(
        matrix: &Fo,
        vars: &[String],
        a: &Structure,
        aux: Option<&Structure>,
    ) -> Result<ResolvedMatrix> {
        let slot_of = |v: &str| -> Result<usize> {
            vars.iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::UnboundVariable(v.to_string()))
        };
        fn go(
            f: &Fo,
            slot_of: &dyn Fn(&str) -> Result<usize>,
            a: &Structure,
            aux: Option<&Structure>,
        ) -> Result<Resolved> {
            Ok(match f {
                Fo::Quant(..) => {
                    return Err(Error::NotPrenex("matrix contains a quantifier".into()))
                }
                Fo::Not(g) => Resolved::Not(Box::new(go(g, slot_of, a, aux)?)),
                Fo::And(x, y) => Resolved::And(
                    Box::new(go(x, slot_of, a, aux)?),
                    Box::new(go(y, slot_of, a, aux)?),
                ),
                Fo::Or(x, y) => Resolved::Or(
                    Box::new(go(x, slot_of, a, aux)?),
                    Box::new(go(y, slot_of, a, aux)?),
                ),
                Fo::Atom(atom) => match atom {
                    Atom::Eq(x, y) => Resolved::Eq(slot_of(x)?, slot_of(y)?),
                    Atom::Le(x, y) => Resolved::Le(slot_of(x)?, slot_of(y)?),
                    Atom::Plus(x, y, z) => {
                        Resolved::Plus(slot_of(x)?, slot_of(y)?, slot_of(z)?)
                    }
                    Atom::Times(x, y, z) => {
                        Resolved::Times(slot_of(x)?, slot_of(y)?, slot_of(z)?)
                    }
                    Atom::Bit(x, y) => Resolved::Bit(slot_of(x)?, slot_of(y)?),
                    Atom::Rel { symbol, args } => {
                        let slots: Result<Vec<usize>> =
                            args.iter().map(|v| slot_of(v)).collect();
                        let slots = slots?;
                        let (in_aux, rel, declared) =
                            if let Some(i) = a.vocabulary().index_of(symbol) {
                                (false, i, a.vocabulary().symbols()[i].1)
                            } else if let Some(aux) = aux {
                                match aux.vocabulary().index_of(symbol) {
                                    Some(i) => (true, i, aux.vocabulary().symbols()[i].1),
                                    None => {
                                        return Err(Error::UnknownRelation(symbol.clone()))
                                    }
                                }
                            } else {
                                return Err(Error::UnknownRelation(symbol.clone()));
                            };
                        if declared != slots.len() {
                            return Err(Error::ArityMismatch {
                                symbol: symbol.clone(),
                                declared,
                                used: slots.len(),
                            });
                        }
                        Resolved::Rel {
                            rel,
                            in_aux,
                            slots,
                        }
                    }
                },
            })
        }
        Ok(ResolvedMatrix {
            root: go(matrix, &slot_of, a, aux)?,
        })
    }

    pub(crate) fn holds(
        &self,
        assignment: &[usize],
        a: &Structure,
        aux: Option<&Structure>,
        scratch: &mut Vec<usize>,
    ) -> bool {
        fn go(
            r: &Resolved,
            asg: &[usize],
            a: &Structure,
            aux: Option<&Structure>,
            scratch: &mut Vec<usize>,
        ) -> bool {
            match r {
                Resolved::Eq(x, y) => asg[*x] == asg[*y],
                Resolved::Le(x, y) => asg[*x] <= asg[*y],
                Resolved::Plus(x, y, z) => asg[*x] + asg[*y] == asg[*z],
                Resolved::Times(x, y, z) => asg[*x] * asg[*y] == asg[*z],
                Resolved::Bit(x, y) => bit_of(asg[*x], asg[*y]),
                Resolved::Rel { rel, in_aux, slots } => {
                    scratch.clear();
                    scratch.extend(slots.iter().map(|&s| asg[s]));
                    let set = if *in_aux {
                        aux.unwrap().relation_by_index(*rel)
                    } else {
                        a.relation_by_index(*rel)
                    };
                    set.contains(scratch.as_slice())
                }
                Resolved::Not(g) => !go(g, asg, a, aux, scratch),
                Resolved::And(x, y) => {
                    go(x, asg, a, aux, scratch) && go(y, asg, a, aux, scratch)
                }
                Resolved::Or(x, y) => {
                    go(x, asg, a, aux, scratch) || go(y, asg, a, aux, scratch)
                }
            }
        }
        go(&self.root, assignment, a, aux, scratch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::structure::word_model_str;
    use crate::logic::syntax::to_prenex;

    fn s(v: &str) -> Fo {
        Fo::Atom(Atom::Rel {
            symbol: "S".into(),
            args: vec![v.into()],
        })
    }

    #[test]
    fn evaluate_examples() {
        let a = word_model_str("10").unwrap();
        let empty = Assignment::new();
        assert!(evaluate(&Fo::exists("x", s("x")), &a, None, &empty).unwrap());
        assert!(!evaluate(&Fo::forall("x", s("x")), &a, None, &empty).unwrap());
        let le = Fo::forall(
            "x",
            Fo::exists("y", Fo::Atom(Atom::Le("x".into(), "y".into()))),
        );
        for w in ["1", "10", "0101"] {
            let a = word_model_str(w).unwrap();
            assert!(evaluate(&le, &a, None, &empty).unwrap());
        }
    }

    #[test]
    fn empty_universe_quantifiers() {
        let a = word_model_str("").unwrap();
        let empty = Assignment::new();
        assert!(evaluate(&Fo::forall("x", s("x")), &a, None, &empty).unwrap());
        assert!(!evaluate(&Fo::exists("x", s("x")), &a, None, &empty).unwrap());
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let a = word_model_str("1").unwrap();
        let err = evaluate(&s("x"), &a, None, &Assignment::new()).unwrap_err();
        assert!(matches!(err, Error::UnboundVariable(_)));
    }

    #[test]
    fn unknown_relation_is_an_error() {
        let a = word_model_str("1").unwrap();
        let f = Fo::exists(
            "x",
            Fo::Atom(Atom::Rel {
                symbol: "T".into(),
                args: vec!["x".into()],
            }),
        );
        let err = evaluate(&f, &a, None, &Assignment::new()).unwrap_err();
        assert!(matches!(err, Error::UnknownRelation(_)));
    }

    #[test]
    fn prenexing_preserves_evaluation() {
        let candidates = vec![
            Fo::not(Fo::exists("x", s("x"))),
            Fo::and(Fo::exists("x", s("x")), Fo::exists("x", Fo::not(s("x")))),
            Fo::or(
                Fo::forall("x", s("x")),
                Fo::not(Fo::forall("y", Fo::not(s("y")))),
            ),
            Fo::exists(
                "x",
                Fo::and(
                    s("x"),
                    Fo::not(Fo::exists("y", Fo::Atom(Atom::Le("y".into(), "x".into())))),
                ),
            ),
        ];
        for f in candidates {
            let p = to_prenex(&f);
            for w in ["", "0", "1", "01", "10", "110", "0101", "1010"] {
                let a = word_model_str(w).unwrap();
                let lhs = evaluate(&f, &a, None, &Assignment::new()).unwrap();
                let rhs = evaluate(&p.to_fo(), &a, None, &Assignment::new()).unwrap();
                assert_eq!(lhs, rhs, "formula {f} on {w:?}");
            }
        }
    }
}
