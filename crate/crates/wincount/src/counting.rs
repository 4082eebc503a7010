//! Exact counting of winning strategies in the first-order model-checking
//! game, plus two independent brute-force oracles: explicit game trees and
//! Skolem-function enumeration.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::logic::{evaluate, Assignment, Quant, ResolvedMatrix, Structure};
use crate::logic::PrenexFormula;

/// An exact, unbounded strategy or proof-tree count.
pub type Count = BigUint;

/// Size guards for the brute-force oracles.
#[derive(Debug, Clone)]
pub struct Guards {
    /// Largest universe the game-tree oracle accepts.
    pub max_n: usize,
    /// Longest quantifier prefix the game-tree oracle accepts.
    pub max_prefix: usize,
    /// Above this many strategy objects the oracle counts on the explicit
    /// tree instead of enumerating each strategy individually.
    pub max_enumerated_strategies: u64,
    /// Largest universe for Skolem enumeration.
    pub skolem_max_n: usize,
    /// Largest number of existential quantifiers for Skolem enumeration.
    pub skolem_max_k: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_n: 4,
            max_prefix: 4,
            max_enumerated_strategies: 1 << 20,
            skolem_max_n: 3,
            skolem_max_k: 2,
        }
    }
}

fn check_universe(phi: &PrenexFormula, a: &Structure) -> Result<()> {
    if a.universe_size() == 0 && !phi.prefix().is_empty() {
        return Err(Error::Domain(
            "empty universe with a non-empty quantifier prefix".into(),
        ));
    }
    Ok(())
}

/// The number of winning strategies for the verifier: a nested
/// sum-product over all assignments, summing at existential and
/// multiplying at universal quantifiers, of the matrix indicator.
pub fn count_win(
    phi: &PrenexFormula,
    a: &Structure,
    aux: Option<&Structure>,
) -> Result<Count> {
    check_universe(phi, a)?;
    let vars: Vec<String> = phi.prefix().iter().map(|(_, v)| v.clone()).collect();
    let matrix = ResolvedMatrix::build(phi.matrix(), &vars, a, aux)?;
    let n = a.universe_size();
    let quants: Vec<Quant> = phi.prefix().iter().map(|(q, _)| *q).collect();
    let mut assignment = vec![0usize; quants.len()];
    let mut scratch = Vec::new();

    fn rec(
        level: usize,
        quants: &[Quant],
        n: usize,
        assignment: &mut [usize],
        matrix: &ResolvedMatrix,
        a: &Structure,
        aux: Option<&Structure>,
        scratch: &mut Vec<usize>,
    ) -> Count {
        if level == quants.len() {
            return if matrix.holds(assignment, a, aux, scratch) {
                Count::one()
            } else {
                Count::zero()
            };
        }
        match quants[level] {
            Quant::Exists => {
                let mut acc = Count::zero();
                for x in 0..n {
                    assignment[level] = x;
                    acc += rec(level + 1, quants, n, assignment, matrix, a, aux, scratch);
                }
                acc
            }
            Quant::Forall => {
                let mut acc = Count::one();
                for x in 0..n {
                    assignment[level] = x;
                    acc *= rec(level + 1, quants, n, assignment, matrix, a, aux, scratch);
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
        }
    }

    Ok(rec(
        0,
        &quants,
        n,
        &mut assignment,
        &matrix,
        a,
        aux,
        &mut scratch,
    ))
}

/// An explicit model-checking game tree: verifier nodes for existential
/// quantifiers, falsifier nodes for universal ones, and leaves labelled
/// with the ground truth of the matrix.
enum GameNode {
    Exists(Vec<GameNode>),
    Forall(Vec<GameNode>),
    Leaf(bool),
}

fn build_game_tree(
    phi: &PrenexFormula,
    a: &Structure,
    aux: Option<&Structure>,
) -> Result<GameNode> {
    fn rec(
        level: usize,
        phi: &PrenexFormula,
        a: &Structure,
        aux: Option<&Structure>,
        assignment: &mut Assignment,
    ) -> Result<GameNode> {
        if level == phi.prefix().len() {
            return Ok(GameNode::Leaf(evaluate(phi.matrix(), a, aux, assignment)?));
        }
        let (q, v) = &phi.prefix()[level];
        let mut children = Vec::with_capacity(a.universe_size());
        for x in 0..a.universe_size() {
            assignment.insert(v.clone(), x);
            children.push(rec(level + 1, phi, a, aux, assignment)?);
            assignment.remove(v);
        }
        Ok(match q {
            Quant::Exists => GameNode::Exists(children),
            Quant::Forall => GameNode::Forall(children),
        })
    }
    rec(0, phi, a, aux, &mut Assignment::new())
}

/// The number of verifier strategies on the tree, winning or not: a
/// strategy picks one child at each reachable verifier node.
fn strategy_space_size(node: &GameNode) -> Count {
    match node {
        GameNode::Leaf(_) => Count::one(),
        GameNode::Exists(cs) => cs.iter().map(strategy_space_size).sum(),
        GameNode::Forall(cs) => cs.iter().map(strategy_space_size).product(),
    }
}

/// Decodes strategy number `k` at this node and reports whether every
/// play consistent with it ends in a true leaf.
fn strategy_wins(node: &GameNode, k: &BigUint) -> bool {
    match node {
        GameNode::Leaf(v) => *v,
        GameNode::Exists(cs) => {
            let mut rest = k.clone();
            for c in cs {
                let size = strategy_space_size(c);
                if rest < size {
                    return strategy_wins(c, &rest);
                }
                rest -= size;
            }
            unreachable!("strategy index out of range")
        }
        GameNode::Forall(cs) => {
            let mut rest = k.clone();
            for c in cs {
                let size = strategy_space_size(c);
                let digit = &rest % &size;
                rest /= size;
                if !strategy_wins(c, &digit) {
                    return false;
                }
            }
            true
        }
    }
}

fn fold_winning(node: &GameNode) -> Count {
    match node {
        GameNode::Leaf(v) => {
            if *v {
                Count::one()
            } else {
                Count::zero()
            }
        }
        GameNode::Exists(cs) => cs.iter().map(fold_winning).sum(),
        GameNode::Forall(cs) => cs.iter().map(fold_winning).product(),
    }
}

/// Counts winning verifier strategies on the explicit game tree.
///
/// When the strategy space is small enough, each strategy is enumerated
/// as an object and checked by simulating all consistent plays; larger
/// spaces are counted by folding over the materialized tree. Both paths
/// are independent of [`count_win`]'s assignment recursion.
pub fn count_win_gametree(
    phi: &PrenexFormula,
    a: &Structure,
    aux: Option<&Structure>,
    guards: &Guards,
) -> Result<Count> {
    check_universe(phi, a)?;
    if a.universe_size() > guards.max_n {
        return Err(Error::GuardExceeded(format!(
            "game tree oracle limited to n <= {}, got {}",
            guards.max_n,
            a.universe_size()
        )));
    }
    if phi.prefix().len() > guards.max_prefix {
        return Err(Error::GuardExceeded(format!(
            "game tree oracle limited to prefix <= {}, got {}",
            guards.max_prefix,
            phi.prefix().len()
        )));
    }
    let tree = build_game_tree(phi, a, aux)?;
    let total = strategy_space_size(&tree);
    if total <= BigUint::from(guards.max_enumerated_strategies) {
        let mut winning = Count::zero();
        let mut k = BigUint::zero();
        while k < total {
            if strategy_wins(&tree, &k) {
                winning += 1u32;
            }
            k += 1u32;
        }
        Ok(winning)
    } else {
        Ok(fold_winning(&tree))
    }
}

/// Splits a Def.-7-shaped prefix (strictly alternating, starting and
/// ending existentially) into its existential and universal variables.
fn skolem_shape(phi: &PrenexFormula) -> Result<(Vec<String>, Vec<String>)> {
    let prefix = phi.prefix();
    if prefix.is_empty() || prefix.len() % 2 == 0 {
        return Err(Error::Domain(
            "prefix must alternate exists/forall, starting and ending with exists".into(),
        ));
    }
    let mut ys = Vec::new();
    let mut zs = Vec::new();
    for (i, (q, v)) in prefix.iter().enumerate() {
        let expected = if i % 2 == 0 {
            Quant::Exists
        } else {
            Quant::Forall
        };
        if *q != expected {
            return Err(Error::Domain(
                "prefix must alternate exists/forall, starting and ending with exists".into(),
            ));
        }
        if i % 2 == 0 {
            ys.push(v.clone());
        } else {
            zs.push(v.clone());
        }
    }
    Ok((ys, zs))
}

/// Counts tuples of Skolem functions `(f_1, ..., f_k)`, where `f_i` maps
/// the universal choices to its left to a witness, such that the matrix
/// holds under every assignment of the universal variables.
pub fn count_skolem(
    phi: &PrenexFormula,
    a: &Structure,
    aux: Option<&Structure>,
    guards: &Guards,
) -> Result<Count> {
    check_universe(phi, a)?;
    let (ys, zs) = skolem_shape(phi)?;
    let k = ys.len();
    let n = a.universe_size();
    if n > guards.skolem_max_n {
        return Err(Error::GuardExceeded(format!(
            "skolem oracle limited to n <= {}, got {n}",
            guards.skolem_max_n
        )));
    }
    if k > guards.skolem_max_k {
        return Err(Error::GuardExceeded(format!(
            "skolem oracle limited to k <= {}, got {k}",
            guards.skolem_max_k
        )));
    }

    let vars: Vec<String> = phi.prefix().iter().map(|(_, v)| v.clone()).collect();
    let matrix = ResolvedMatrix::build(phi.matrix(), &vars, a, aux)?;
    let mut scratch = Vec::new();

    // Function tables: f_i has n^(i-1) entries, each in 0..n.
    let table_sizes: Vec<usize> = (0..k).map(|i| n.pow(i as u32)).collect();
    let mut tables: Vec<Vec<usize>> = table_sizes.iter().map(|&s| vec![0usize; s]).collect();
    let z_count = if k == 0 { 0 } else { k - 1 };
    let mut winning = Count::zero();

    'tuples: loop {
        // Check the current function tuple against every universal choice.
        let mut zval = vec![0usize; z_count];
        let mut assignment = vec![0usize; vars.len()];
        let ok = 'check: loop {
            // Assignment layout follows the prefix: y1 z1 y2 z2 ... yk.
            for (i, &_size) in table_sizes.iter().enumerate() {
                let mut idx = 0usize;
                for &z in zval.iter().take(i) {
                    idx = idx * n + z;
                }
                assignment[2 * i] = tables[i][idx];
            }
            for (j, &z) in zval.iter().enumerate() {
                assignment[2 * j + 1] = z;
            }
            if !matrix.holds(&assignment, a, aux, &mut scratch) {
                break 'check false;
            }
            // Next universal assignment.
            let mut pos = z_count;
            loop {
                if pos == 0 {
                    break 'check true;
                }
                pos -= 1;
                zval[pos] += 1;
                if zval[pos] < n {
                    break;
                }
                zval[pos] = 0;
            }
        };
        if ok {
            winning += 1u32;
        }
        // Next function tuple (mixed-radix increment over all table cells).
        for table in tables.iter_mut() {
            for cell in table.iter_mut() {
                *cell += 1;
                if *cell < n {
                    continue 'tuples;
                }
                *cell = 0;
            }
        }
        break;
    }
    Ok(winning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_prenex, word_model_str};

    fn count(phi: &str, w: &str) -> Count {
        let phi = parse_prenex(phi).unwrap();
        let a = word_model_str(w).unwrap();
        count_win(&phi, &a, None).unwrap()
    }

    #[test]
    fn count_win_examples() {
        assert_eq!(count("(exists x (S x))", "101"), 2u32.into());
        assert_eq!(count("(forall x (S x))", "11"), 1u32.into());
        assert_eq!(count("(forall x (S x))", "10"), 0u32.into());
        assert_eq!(count("(forall x (exists y (S y)))", "110"), 8u32.into());
    }

    #[test]
    fn count_win_matches_game_tree_on_derived_example() {
        let phi = parse_prenex("(exists x (forall y (or (S x) (<= y x))))").unwrap();
        let a = word_model_str("0101").unwrap();
        let direct = count_win(&phi, &a, None).unwrap();
        let tree = count_win_gametree(&phi, &a, None, &Guards::default()).unwrap();
        assert_eq!(direct, tree);
        // Two winning first moves: the positions in S.
        assert_eq!(direct, 2u32.into());
    }

    #[test]
    fn game_tree_examples() {
        let g = Guards::default();
        let phi = parse_prenex("(exists x (S x))").unwrap();
        let a = word_model_str("101").unwrap();
        assert_eq!(count_win_gametree(&phi, &a, None, &g).unwrap(), 2u32.into());

        let phi = parse_prenex("(forall x (S x))").unwrap();
        let a = word_model_str("11").unwrap();
        assert_eq!(count_win_gametree(&phi, &a, None, &g).unwrap(), 1u32.into());

        let phi =
            parse_prenex("(exists x (forall y (exists z (and (<= x z) (S z)))))").unwrap();
        let a = word_model_str("011").unwrap();
        assert_eq!(
            count_win_gametree(&phi, &a, None, &g).unwrap(),
            count_win(&phi, &a, None).unwrap()
        );
    }

    #[test]
    fn game_tree_enumeration_agrees_with_fold_when_forced() {
        let mut tiny = Guards::default();
        tiny.max_enumerated_strategies = 0; // force the fold path
        let full = Guards::default();
        for phi in [
            "(exists x (forall y (or (S x) (<= y x))))",
            "(forall x (exists y (and (S y) (<= x y))))",
            "(exists x (exists y (or (S x) (S y))))",
        ] {
            let phi = parse_prenex(phi).unwrap();
            for w in ["0", "10", "011", "0101"] {
                let a = word_model_str(w).unwrap();
                assert_eq!(
                    count_win_gametree(&phi, &a, None, &tiny).unwrap(),
                    count_win_gametree(&phi, &a, None, &full).unwrap(),
                    "{phi} on {w}"
                );
            }
        }
    }

    #[test]
    fn game_tree_guard() {
        let g = Guards::default();
        let phi = parse_prenex("(exists x (S x))").unwrap();
        let a = word_model_str("10101").unwrap();
        assert!(matches!(
            count_win_gametree(&phi, &a, None, &g),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn empty_universe_rejected_with_prefix() {
        let phi = parse_prenex("(exists x (S x))").unwrap();
        let a = word_model_str("").unwrap();
        assert!(matches!(
            count_win(&phi, &a, None),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn skolem_examples() {
        let g = Guards::default();
        let phi = parse_prenex("(exists y1 (S y1))").unwrap();
        let a = word_model_str("101").unwrap();
        assert_eq!(count_skolem(&phi, &a, None, &g).unwrap(), 2u32.into());

        let phi = parse_prenex(
            "(exists y1 (forall z1 (exists y2 (or (S y2) (not (S y2))))))",
        )
        .unwrap();
        let a = word_model_str("10").unwrap();
        assert_eq!(count_skolem(&phi, &a, None, &g).unwrap(), 8u32.into());

        let phi = parse_prenex(
            "(exists y1 (forall z1 (exists y2 (or (not (<= y1 z1)) (S y2)))))",
        )
        .unwrap();
        let a = word_model_str("010").unwrap();
        assert_eq!(
            count_skolem(&phi, &a, None, &g).unwrap(),
            count_win(&phi, &a, None).unwrap()
        );
    }

    #[test]
    fn skolem_rejects_other_shapes() {
        let g = Guards::default();
        let a = word_model_str("10").unwrap();
        for phi in [
            "(forall x (S x))",
            "(exists x (forall y (S x)))",
            "(exists x (exists y (S x)))",
        ] {
            let phi = parse_prenex(phi).unwrap();
            assert!(matches!(
                count_skolem(&phi, &a, None, &g),
                Err(Error::Domain(_))
            ));
        }
    }

    #[test]
    fn positivity_matches_truth() {
        for phi in [
            "(exists x (S x))",
            "(forall x (S x))",
            "(exists x (forall y (or (S x) (<= y x))))",
            "(forall x (exists y (and (<= x y) (S y))))",
        ] {
            let phi = parse_prenex(phi).unwrap();
            for w in ["1", "0", "10", "01", "110", "0101", "1111"] {
                let a = word_model_str(w).unwrap();
                let c = count_win(&phi, &a, None).unwrap();
                let t = evaluate(&phi.to_fo(), &a, None, &Assignment::new()).unwrap();
                assert_eq!(!c.is_zero(), t, "{phi} on {w}");
            }
        }
    }

    #[test]
    fn monotone_bound() {
        for phi in [
            "(exists x (S x))",
            "(forall x (exists y (and (S y) (<= x y))))",
            "(exists x (forall y (exists z (or (S z) (= x y)))))",
        ] {
            let phi = parse_prenex(phi).unwrap();
            let top = phi.with_true_matrix().unwrap();
            for w in ["1", "10", "011", "0101"] {
                let a = word_model_str(w).unwrap();
                assert!(
                    count_win(&phi, &a, None).unwrap()
                        <= count_win(&top, &a, None).unwrap()
                );
            }
        }
    }
}
