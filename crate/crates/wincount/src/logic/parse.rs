use crate::error::{Error, Result};
use crate::logic::syntax::{Atom, Fo, PrenexFormula, Quant};

/// S-expression used by the textual formula grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Sexpr {
    Sym(String),
    List(Vec<Sexpr>),
}

impl Sexpr {
    pub(crate) fn sym(&self) -> Option<&str> {
        match self {
            Sexpr::Sym(s) => Some(s),
            Sexpr::List(_) => None,
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    if tokens.is_empty() {
        return Err(Error::Parse("empty formula".into()));
    }
    Ok(tokens)
}

pub(crate) fn read_sexpr(text: &str) -> Result<Sexpr> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let expr = read_one(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after formula: `{}`",
            tokens[pos..].join(" ")
        )));
    }
    Ok(expr)
}

fn read_one(tokens: &[String], pos: &mut usize) -> Result<Sexpr> {
    match tokens.get(*pos) {
        None => Err(Error::Parse("unexpected end of input".into())),
        Some(t) if t == "(" => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(Error::Parse("unbalanced parenthesis".into())),
                    Some(t) if t == ")" => {
                        *pos += 1;
                        return Ok(Sexpr::List(items));
                    }
                    Some(_) => items.push(read_one(tokens, pos)?),
                }
            }
        }
        Some(t) if t == ")" => Err(Error::Parse("unexpected `)`".into())),
        Some(t) => {
            *pos += 1;
            Ok(Sexpr::Sym(t.clone()))
        }
    }
}

fn expect_var(e: &Sexpr) -> Result<String> {
    match e {
        Sexpr::Sym(s) => Ok(s.clone()),
        Sexpr::List(_) => Err(Error::Parse("expected a variable name".into())),
    }
}

fn fo_from_sexpr(e: &Sexpr) -> Result<Fo> {
    let items = match e {
        Sexpr::Sym(s) => {
            return Err(Error::Parse(format!("bare symbol `{s}` is not a formula")))
        }
        Sexpr::List(items) => items,
    };
    let head = items
        .first()
        .and_then(|h| h.sym())
        .ok_or_else(|| Error::Parse("formula must start with an operator or symbol".into()))?;
    match head {
        "exists" | "forall" => {
            if items.len() != 3 {
                return Err(Error::Parse(format!("`{head}` takes a variable and a body")));
            }
            let v = expect_var(&items[1])?;
            let body = fo_from_sexpr(&items[2])?;
            let q = if head == "exists" {
                Quant::Exists
            } else {
                Quant::Forall
            };
            Ok(Fo::Quant(q, v, Box::new(body)))
        }
        "and" | "or" => {
            if items.len() != 3 {
                return Err(Error::Parse(format!("`{head}` takes exactly two operands")));
            }
            let a = fo_from_sexpr(&items[1])?;
            let b = fo_from_sexpr(&items[2])?;
            Ok(if head == "and" {
                Fo::and(a, b)
            } else {
                Fo::or(a, b)
            })
        }
        "not" => {
            if items.len() != 2 {
                return Err(Error::Parse("`not` takes one operand".into()));
            }
            Ok(Fo::not(fo_from_sexpr(&items[1])?))
        }
        _ => atom_from_sexpr(items).map(Fo::Atom),
    }
}

fn atom_from_sexpr(items: &[Sexpr]) -> Result<Atom> {
    let head = items[0].sym().unwrap();
    let args: Result<Vec<String>> = items[1..].iter().map(expect_var).collect();
    let args = args?;
    let want = |k: usize| -> Result<()> {
        if args.len() != k {
            Err(Error::Parse(format!("`{head}` takes {k} arguments")))
        } else {
            Ok(())
        }
    };
    match head {
        "=" => {
            want(2)?;
            Ok(Atom::Eq(args[0].clone(), args[1].clone()))
        }
        "<=" => {
            want(2)?;
            Ok(Atom::Le(args[0].clone(), args[1].clone()))
        }
        "+" => {
            want(3)?;
            Ok(Atom::Plus(args[0].clone(), args[1].clone(), args[2].clone()))
        }
        "*" => {
            want(3)?;
            Ok(Atom::Times(args[0].clone(), args[1].clone(), args[2].clone()))
        }
        "bit" => {
            want(2)?;
            Ok(Atom::Bit(args[0].clone(), args[1].clone()))
        }
        _ => {
            if args.is_empty() {
                return Err(Error::Parse(format!(
                    "relation `{head}` needs at least one argument"
                )));
            }
            Ok(Atom::Rel {
                symbol: head.to_string(),
                args,
            })
        }
    }
}

/// Parses a formula in the textual grammar. Whitespace-insensitive.
pub fn parse_formula(text: &str) -> Result<Fo> {
    fo_from_sexpr(&read_sexpr(text)?)
}

/// Parses a formula and requires it to be a prenex sentence.
pub fn parse_prenex(text: &str) -> Result<PrenexFormula> {
    PrenexFormula::try_from(parse_formula(text)?)
}
