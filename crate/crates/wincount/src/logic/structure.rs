use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A relational vocabulary: an ordered list of symbols with arities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: Vec<(String, usize)>,
}

impl Vocabulary {
    pub fn new(symbols: Vec<(String, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (name, arity) in &symbols {
            if *arity == 0 {
                return Err(Error::Domain(format!("symbol `{name}` has arity 0")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Domain(format!("duplicate symbol `{name}`")));
            }
        }
        Ok(Vocabulary { symbols })
    }

    /// The vocabulary of binary strings: an order plus a unary bit predicate.
    pub fn tau_string() -> Vocabulary {
        Vocabulary::new(vec![("<=".into(), 2), ("S".into(), 1)]).unwrap()
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.symbols
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }
}

/// A finite structure with universe `{0..n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    vocab: Vocabulary,
    universe: usize,
    relations: Vec<HashSet<Vec<usize>>>,
}

impl Structure {
    pub fn new(
        vocab: Vocabulary,
        universe: usize,
        relations: Vec<(String, Vec<Vec<usize>>)>,
    ) -> Result<Self> {
        let mut sets: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); vocab.symbols().len()];
        for (name, tuples) in relations {
            let idx = vocab
                .index_of(&name)
                .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
            let arity = vocab.symbols()[idx].1;
            for t in tuples {
                if t.len() != arity {
                    return Err(Error::ArityMismatch {
                        symbol: name.clone(),
                        declared: arity,
                        used: t.len(),
                    });
                }
                if t.iter().any(|&x| x >= universe) {
                    return Err(Error::Domain(format!(
                        "tuple {t:?} of `{name}` outside universe 0..{universe}"
                    )));
                }
                sets[idx].insert(t);
            }
        }
        Ok(Structure {
            vocab,
            universe,
            relations: sets,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn relation(&self, name: &str) -> Option<&HashSet<Vec<usize>>> {
        self.vocab.index_of(name).map(|i| &self.relations[i])
    }

    pub(crate) fn relation_by_index(&self, idx: usize) -> &HashSet<Vec<usize>> {
        &self.relations[idx]
    }
}

/// Builds the word model of a bit string: universe `{0..n-1}`, the full
/// non-strict order, and `x` in `S` iff bit `x` (0-indexed from the left)
/// is set.
pub fn word_model(bits: &[bool]) -> Structure {
    let n = bits.len();
    let mut le = Vec::new();
    for i in 0..n {
        for j in i..n {
            le.push(vec![i, j]);
        }
    }
    let s: Vec<Vec<usize>> = bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| vec![i])
        .collect();
    Structure::new(
        Vocabulary::tau_string(),
        n,
        vec![("<=".into(), le), ("S".into(), s)],
    )
    .expect("word model construction is always valid")
}

/// Parses a `{0,1}` string into bits.
pub fn parse_word(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("invalid bit `{other}` in word"))),
        })
        .collect()
}

pub fn word_model_str(s: &str) -> Result<Structure> {
    Ok(word_model(&parse_word(s)?))
}

fn tuples_lex(arity: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; arity];
    if n == 0 {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = arity;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Deterministic binary encoding of a structure.
///
/// Word models encode as the string itself (universe and order are
/// implicit). For any other vocabulary the encoding is the concatenation,
/// in vocabulary order, of each relation's characteristic string over
/// arity-length tuples enumerated lexicographically.
pub fn encode_structure(a: &Structure) -> String {
    if a.vocabulary() == &Vocabulary::tau_string() {
        let s = a.relation("S").unwrap();
        return (0..a.universe_size())
            .map(|i| if s.contains([i].as_slice()) { '1' } else { '0' })
            .collect();
    }
    let mut out = String::new();
    for (name, arity) in a.vocabulary().symbols() {
        let rel = a.relation(name).unwrap();
        for t in tuples_lex(*arity, a.universe_size()) {
            out.push(if rel.contains(t.as_slice()) { '1' } else { '0' });
        }
    }
    out
}

/// The intended arithmetic structure on `{0..n-1}`: the graphs of `+` and
/// `*` restricted to the universe, and `bit(i, j)` with LSB = bit 0.
pub fn builtin_arithmetic(n: usize) -> Structure {
    let vocab = Vocabulary::new(vec![("+".into(), 3), ("*".into(), 3), ("bit".into(), 2)])
        .unwrap();
    let mut plus = Vec::new();
    let mut times = Vec::new();
    let mut bit = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                plus.push(vec![i, j, i + j]);
            }
            if i * j < n {
                times.push(vec![i, j, i * j]);
            }
            if i < usize::BITS as usize && (j >> i) & 1 == 1 {
                bit.push(vec![i, j]);
            }
        }
    }
    Structure::new(
        vocab,
        n,
        vec![("+".into(), plus), ("*".into(), times), ("bit".into(), bit)],
    )
    .unwrap()
}

/// Writes a structure in the text format: `universe` header, then each
/// relation with its tuples, sorted for deterministic output.
pub fn write_structure(a: &Structure) -> String {
    let mut out = String::new();
    writeln!(out, "universe {}", a.universe_size()).unwrap();
    for (name, arity) in a.vocabulary().symbols() {
        writeln!(out, "relation {name} {arity}").unwrap();
        let mut tuples: Vec<&Vec<usize>> = a.relation(name).unwrap().iter().collect();
        tuples.sort();
        for t in tuples {
            let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            writeln!(out, "tuple {}", parts.join(" ")).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut universe: Option<usize> = None;
    let mut symbols: Vec<(String, usize)> = Vec::new();
    let mut relations: HashMap<String, Vec<Vec<usize>>> = HashMap::new();
    let mut current: Option<String> = None;
    let mut ended = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if ended {
            return Err(Error::Parse(format!(
                "line {}: content after `end`",
                lineno + 1
            )));
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("universe") => {
                let n: usize = words
                    .next()
                    .ok_or_else(|| Error::Parse("universe needs a size".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("invalid universe size".into()))?;
                universe = Some(n);
            }
            Some("relation") => {
                let name = words
                    .next()
                    .ok_or_else(|| Error::Parse("relation needs a name".into()))?
                    .to_string();
                let arity: usize = words
                    .next()
                    .ok_or_else(|| Error::Parse("relation needs an arity".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("invalid arity".into()))?;
                symbols.push((name.clone(), arity));
                relations.entry(name.clone()).or_default();
                current = Some(name);
            }
            Some("tuple") => {
                let name = current
                    .clone()
                    .ok_or_else(|| Error::Parse("tuple before any relation".into()))?;
                let t: std::result::Result<Vec<usize>, _> =
                    words.map(|w| w.parse::<usize>()).collect();
                let t = t.map_err(|_| {
                    Error::Parse(format!("line {}: invalid tuple", lineno + 1))
                })?;
                relations.get_mut(&name).unwrap().push(t);
            }
            Some("end") => ended = true,
            Some(other) => {
                return Err(Error::Parse(format!(
                    "line {}: unknown directive `{other}`",
                    lineno + 1
                )));
            }
            None => unreachable!(),
        }
    }
    let universe =
        universe.ok_or_else(|| Error::Parse("missing `universe` declaration".into()))?;
    let vocab = Vocabulary::new(symbols)?;
    let rels = vocab
        .symbols()
        .iter()
        .map(|(name, _)| (name.clone(), relations.remove(name).unwrap_or_default()))
        .collect();
    Structure::new(vocab, universe, rels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_model_examples() {
        let a = word_model_str("101").unwrap();
        assert_eq!(a.universe_size(), 3);
        let s = a.relation("S").unwrap();
        assert!(s.contains([0usize].as_slice()));
        assert!(!s.contains([1usize].as_slice()));
        assert!(s.contains([2usize].as_slice()));
        let le = a.relation("<=").unwrap();
        assert_eq!(le.len(), 6);

        let empty = word_model_str("").unwrap();
        assert_eq!(empty.universe_size(), 0);
        assert!(empty.relation("S").unwrap().is_empty());

        let b = word_model_str("0110").unwrap();
        let s = b.relation("S").unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains([1usize].as_slice()));
        assert!(s.contains([2usize].as_slice()));
    }

    #[test]
    fn encode_round_trips_word_models() {
        for w in ["", "0", "1", "101", "0110", "1111"] {
            let a = word_model_str(w).unwrap();
            assert_eq!(encode_structure(&a), w);
        }
    }

    #[test]
    fn encode_generic_vocabulary_row_major() {
        let vocab = Vocabulary::new(vec![("R".into(), 2)]).unwrap();
        let a = Structure::new(vocab, 2, vec![("R".into(), vec![vec![0, 1]])]).unwrap();
        assert_eq!(encode_structure(&a), "0100");
    }

    #[test]
    fn builtin_arithmetic_examples() {
        let a = builtin_arithmetic(4);
        let plus = a.relation("+").unwrap();
        assert!(plus.contains([1usize, 2, 3].as_slice()));
        assert!(!plus.contains([2usize, 3, 1].as_slice()));
        let times = a.relation("*").unwrap();
        assert!(!times.iter().any(|t| t[0] == 2 && t[1] == 2));
        let bit = a.relation("bit").unwrap();
        assert!(bit.contains([1usize, 2].as_slice()));
        assert!(!bit.contains([0usize, 2].as_slice()));
    }

    #[test]
    fn builtin_relations_functional_in_last_argument() {
        for n in 0..=5 {
            let a = builtin_arithmetic(n);
            for name in ["+", "*"] {
                let rel = a.relation(name).unwrap();
                let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
                for t in rel {
                    if let Some(prev) = seen.insert((t[0], t[1]), t[2]) {
                        panic!("{name} not functional: {prev} vs {}", t[2]);
                    }
                }
            }
        }
    }

    #[test]
    fn structure_text_round_trip() {
        let a = word_model_str("0110").unwrap();
        let text = write_structure(&a);
        let b = parse_structure(&text).unwrap();
        assert_eq!(a, b);
    }
}
