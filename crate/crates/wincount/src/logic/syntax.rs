use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// First-order quantifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

/// An atomic formula.
///
/// `Rel` covers the input-structure symbols (`S`, `<=` is special-cased
/// below) and any auxiliary symbols supplied by an interpretation. The
/// remaining kinds are numerical predicates with a fixed meaning on the
/// universe `{0..n-1}`: `Le` is the natural order, `Plus`/`Times` are the
/// graphs of addition and multiplication, and `Bit(i, j)` holds iff bit `i`
/// (LSB = bit 0) of `j` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Rel { symbol: String, args: Vec<String> },
    Eq(String, String),
    Le(String, String),
    Plus(String, String, String),
    Times(String, String, String),
    Bit(String, String),
}

impl Atom {
    pub fn vars(&self) -> Vec<&str> {
        match self {
            Atom::Rel { args, .. } => args.iter().map(|s| s.as_str()).collect(),
            Atom::Eq(a, b) | Atom::Le(a, b) | Atom::Bit(a, b) => vec![a, b],
            Atom::Plus(a, b, c) | Atom::Times(a, b, c) => vec![a, b, c],
        }
    }

    pub fn rename_var(&self, from: &str, to: &str) -> Atom {
        let r = |s: &String| {
            if s == from {
                to.to_string()
            } else {
                s.clone()
            }
        };
        match self {
            Atom::Rel { symbol, args } => Atom::Rel {
                symbol: symbol.clone(),
                args: args.iter().map(r).collect(),
            },
            Atom::Eq(a, b) => Atom::Eq(r(a), r(b)),
            Atom::Le(a, b) => Atom::Le(r(a), r(b)),
            Atom::Plus(a, b, c) => Atom::Plus(r(a), r(b), r(c)),
            Atom::Times(a, b, c) => Atom::Times(r(a), r(b), r(c)),
            Atom::Bit(a, b) => Atom::Bit(r(a), r(b)),
        }
    }
}

/// A first-order formula, not necessarily prenex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fo {
    Atom(Atom),
    Not(Box<Fo>),
    And(Box<Fo>, Box<Fo>),
    Or(Box<Fo>, Box<Fo>),
    Quant(Quant, String, Box<Fo>),
}

impl Fo {
    pub fn not(f: Fo) -> Fo {
        Fo::Not(Box::new(f))
    }

    pub fn and(a: Fo, b: Fo) -> Fo {
        Fo::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Fo, b: Fo) -> Fo {
        Fo::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, f: Fo) -> Fo {
        Fo::Quant(Quant::Exists, v.into(), Box::new(f))
    }

    pub fn forall(v: impl Into<String>, f: Fo) -> Fo {
        Fo::Quant(Quant::Forall, v.into(), Box::new(f))
    }

    /// Conjunction of a non-empty list.
    pub fn and_all(mut fs: Vec<Fo>) -> Fo {
        assert!(!fs.is_empty(), "and_all needs at least one conjunct");
        let mut acc = fs.remove(0);
        for f in fs {
            acc = Fo::and(acc, f);
        }
        acc
    }

    /// Disjunction of a non-empty list.
    pub fn or_all(mut fs: Vec<Fo>) -> Fo {
        assert!(!fs.is_empty(), "or_all needs at least one disjunct");
        let mut acc = fs.remove(0);
        for f in fs {
            acc = Fo::or(acc, f);
        }
        acc
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Fo::Atom(_) => true,
            Fo::Not(f) => f.is_quantifier_free(),
            Fo::And(a, b) | Fo::Or(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Fo::Quant(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Fo, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Fo::Atom(a) => {
                    for v in a.vars() {
                        if !bound.iter().any(|b| b == v) {
                            out.insert(v.to_string());
                        }
                    }
                }
                Fo::Not(g) => go(g, bound, out),
                Fo::And(a, b) | Fo::Or(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Fo::Quant(_, v, g) => {
                    bound.push(v.clone());
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(f: &Fo, out: &mut BTreeSet<String>) {
            match f {
                Fo::Atom(a) => {
                    for v in a.vars() {
                        out.insert(v.to_string());
                    }
                }
                Fo::Not(g) => go(g, out),
                Fo::And(a, b) | Fo::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Fo::Quant(_, v, g) => {
                    out.insert(v.clone());
                    go(g, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// Renames free occurrences of `from` to `to`. `to` must not be
    /// captured: callers pass globally fresh names.
    pub fn rename_free(&self, from: &str, to: &str) -> Fo {
        match self {
            Fo::Atom(a) => Fo::Atom(a.rename_var(from, to)),
            Fo::Not(f) => Fo::not(f.rename_free(from, to)),
            Fo::And(a, b) => Fo::and(a.rename_free(from, to), b.rename_free(from, to)),
            Fo::Or(a, b) => Fo::or(a.rename_free(from, to), b.rename_free(from, to)),
            Fo::Quant(q, v, f) => {
                if v == from {
                    self.clone()
                } else {
                    Fo::Quant(*q, v.clone(), Box::new(f.rename_free(from, to)))
                }
            }
        }
    }

    /// Negation normal form: negations pushed down to atoms, double
    /// negations cancelled, quantifiers flipped.
    pub fn nnf(&self) -> Fo {
        fn pos(f: &Fo) -> Fo {
            match f {
                Fo::Atom(_) => f.clone(),
                Fo::Not(g) => neg(g),
                Fo::And(a, b) => Fo::and(pos(a), pos(b)),
                Fo::Or(a, b) => Fo::or(pos(a), pos(b)),
                Fo::Quant(q, v, g) => Fo::Quant(*q, v.clone(), Box::new(pos(g))),
            }
        }
        fn neg(f: &Fo) -> Fo {
            match f {
                Fo::Atom(_) => Fo::not(f.clone()),
                Fo::Not(g) => pos(g),
                Fo::And(a, b) => Fo::or(neg(a), neg(b)),
                Fo::Or(a, b) => Fo::and(neg(a), neg(b)),
                Fo::Quant(q, v, g) => Fo::Quant(q.dual(), v.clone(), Box::new(neg(g))),
            }
        }
        pos(self)
    }

    /// Relation symbols used, with observed arities.
    pub fn rel_symbols(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        fn go(f: &Fo, out: &mut BTreeSet<(String, usize)>) {
            match f {
                Fo::Atom(Atom::Rel { symbol, args }) => {
                    out.insert((symbol.clone(), args.len()));
                }
                Fo::Atom(_) => {}
                Fo::Not(g) => go(g, out),
                Fo::And(a, b) | Fo::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Fo::Quant(_, _, g) => go(g, out),
            }
        }
        go(self, &mut out);
        out
    }
}

/// A prenex sentence: quantifier prefix followed by a quantifier-free
/// matrix, with no free variables and pairwise distinct prefix names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrenexFormula {
    prefix: Vec<(Quant, String)>,
    matrix: Fo,
}

impl PrenexFormula {
    pub fn new(prefix: Vec<(Quant, String)>, matrix: Fo) -> Result<Self> {
        if !matrix.is_quantifier_free() {
            return Err(Error::NotPrenex("matrix contains quantifiers".into()));
        }
        let mut seen = BTreeSet::new();
        for (_, v) in &prefix {
            if !seen.insert(v.clone()) {
                return Err(Error::NotPrenex(format!(
                    "prefix variable `{v}` bound twice"
                )));
            }
        }
        for v in matrix.free_vars() {
            if !seen.contains(&v) {
                return Err(Error::UnboundVariable(v));
            }
        }
        Ok(PrenexFormula { prefix, matrix })
    }

    pub fn prefix(&self) -> &[(Quant, String)] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Fo {
        &self.matrix
    }

    pub fn to_fo(&self) -> Fo {
        let mut f = self.matrix.clone();
        for (q, v) in self.prefix.iter().rev() {
            f = Fo::Quant(*q, v.clone(), Box::new(f));
        }
        f
    }

    /// The same sentence with its matrix replaced by a tautology; its
    /// strategy count is the all-true upper bound.
    pub fn with_true_matrix(&self) -> Result<PrenexFormula> {
        let v = match self.prefix.first() {
            Some((_, v)) => v.clone(),
            None => {
                return Err(Error::Domain(
                    "with_true_matrix needs a non-empty prefix".into(),
                ))
            }
        };
        PrenexFormula::new(self.prefix.clone(), Fo::Atom(Atom::Eq(v.clone(), v)))
    }
}

impl TryFrom<Fo> for PrenexFormula {
    type Error = Error;

    fn try_from(f: Fo) -> Result<Self> {
        let mut prefix = Vec::new();
        let mut cur = f;
        loop {
            match cur {
                Fo::Quant(q, v, body) => {
                    prefix.push((q, v));
                    cur = *body;
                }
                other => {
                    return PrenexFormula::new(prefix, other);
                }
            }
        }
    }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut k = 1usize;
    loop {
        let cand = format!("{base}{k}");
        if !taken.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// Converts an arbitrary formula to a logically equivalent prenex one.
///
/// Quantifiers already in prefix position keep their order and names;
/// hoisted quantifiers that would collide are renamed with a suffix
/// counter, so the output is reproducible byte-for-byte.
pub fn to_prenex(f: &Fo) -> PrenexFormula {
    if let Ok(p) = PrenexFormula::try_from(f.clone()) {
        return p;
    }
    let mut taken: BTreeSet<String> = f.free_vars();
    let mut everything = f.all_names();

    fn hoist(
        f: &Fo,
        taken: &mut BTreeSet<String>,
        everything: &mut BTreeSet<String>,
    ) -> (Vec<(Quant, String)>, Fo) {
        match f {
            Fo::Atom(_) => (Vec::new(), f.clone()),
            Fo::Not(g) => {
                let (pre, m) = hoist(g, taken, everything);
                let flipped = pre.into_iter().map(|(q, v)| (q.dual(), v)).collect();
                (flipped, Fo::not(m))
            }
            Fo::And(a, b) | Fo::Or(a, b) => {
                let (p1, m1) = hoist(a, taken, everything);
                let (p2, m2) = hoist(b, taken, everything);
                let mut pre = p1;
                pre.extend(p2);
                let m = match f {
                    Fo::And(..) => Fo::and(m1, m2),
                    _ => Fo::or(m1, m2),
                };
                (pre, m)
            }
            Fo::Quant(q, v, body) => {
                let (name, body) = if taken.contains(v) {
                    let mut avoid = taken.clone();
                    avoid.extend(everything.iter().cloned());
                    let fresh = fresh_name(v, &avoid);
                    everything.insert(fresh.clone());
                    (fresh.clone(), body.rename_free(v, &fresh))
                } else {
                    (v.clone(), (**body).clone())
                };
                taken.insert(name.clone());
                let (mut pre, m) = hoist(&body, taken, everything);
                pre.insert(0, (*q, name));
                (pre, m)
            }
        }
    }

    let (prefix, matrix) = hoist(f, &mut taken, &mut everything);
    PrenexFormula::new(prefix, matrix).expect("prenexing produced a malformed formula")
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel { symbol, args } => {
                write!(f, "({symbol}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Atom::Eq(a, b) => write!(f, "(= {a} {b})"),
            Atom::Le(a, b) => write!(f, "(<= {a} {b})"),
            Atom::Plus(a, b, c) => write!(f, "(+ {a} {b} {c})"),
            Atom::Times(a, b, c) => write!(f, "(* {a} {b} {c})"),
            Atom::Bit(a, b) => write!(f, "(bit {a} {b})"),
        }
    }
}

impl fmt::Display for Fo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fo::Atom(a) => write!(f, "{a}"),
            Fo::Not(g) => write!(f, "(not {g})"),
            Fo::And(a, b) => write!(f, "(and {a} {b})"),
            Fo::Or(a, b) => write!(f, "(or {a} {b})"),
            Fo::Quant(Quant::Exists, v, g) => write!(f, "(exists {v} {g})"),
            Fo::Quant(Quant::Forall, v, g) => write!(f, "(forall {v} {g})"),
        }
    }
}

impl fmt::Display for PrenexFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_fo())
    }
}
