//! Vocabularies, finite structures, word models, prenex formulas, and
//! standard Boolean model-checking semantics.

mod eval;
mod family;
mod parse;
mod structure;
mod syntax;

pub use eval::{evaluate, Assignment};
pub(crate) use eval::ResolvedMatrix;
pub use family::InterpretationFamily;
pub use parse::{parse_formula, parse_prenex};
pub(crate) use parse::{read_sexpr, Sexpr};
pub use structure::{
    builtin_arithmetic, encode_structure, parse_structure, parse_word, word_model,
    word_model_str, write_structure, Structure, Vocabulary,
};
pub use syntax::{to_prenex, Atom, Fo, PrenexFormula, Quant};
