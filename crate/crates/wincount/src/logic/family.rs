use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::structure::{Structure, Vocabulary};

/// A family of auxiliary interpretations, one structure per universe size.
///
/// Word-model symbols always come from the input structure; everything
/// else a formula mentions is looked up in the structure this family
/// yields for the input's size.
#[derive(Clone)]
pub struct InterpretationFamily {
    vocab: Vocabulary,
    gen: Arc<dyn Fn(usize) -> Result<Structure> + Send + Sync>,
}

impl InterpretationFamily {
    pub fn from_fn(
        vocab: Vocabulary,
        gen: impl Fn(usize) -> Result<Structure> + Send + Sync + 'static,
    ) -> Self {
        InterpretationFamily {
            vocab,
            gen: Arc::new(gen),
        }
    }

    pub fn from_table(vocab: Vocabulary, table: BTreeMap<usize, Structure>) -> Self {
        InterpretationFamily::from_fn(vocab, move |n| {
            table
                .get(&n)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("no interpretation for size {n}")))
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    /// The structure for universe size `n`; its universe size is checked.
    pub fn structure_for(&self, n: usize) -> Result<Structure> {
        let s = (self.gen)(n)?;
        if s.universe_size() != n {
            return Err(Error::Domain(format!(
                "interpretation family produced universe {} for size {n}",
                s.universe_size()
            )));
        }
        Ok(s)
    }
}

impl std::fmt::Debug for InterpretationFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InterpretationFamily")
            .field("vocab", &self.vocab)
            .finish_non_exhaustive()
    }
}
