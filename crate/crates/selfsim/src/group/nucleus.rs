//! Nucleus computation for contracting automaton groups.
//!
//! The nucleus is the smallest set N of group elements such that for every
//! product of two elements of N, all sufficiently deep sections lie in N.
//! We compute it by a closure iteration: starting from the generators, their
//! inverses and the identity, repeatedly replace the candidate set by the
//! eventual sections of all pairwise products, closed under sections and
//! inverses, until the set stabilizes.  Non-contracting automata make the
//! candidate set grow without bound; the iteration then stops with a
//! diagnostic once the set exceeds the candidate bound.

use super::automaton::MealyAutomaton;
use super::element::{Gen, GroupElement};
use super::wordproblem::Canon;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

/// A successfully computed nucleus.
#[derive(Debug, Clone)]
pub struct Nucleus {
    /// Canonical representatives, sorted by word.
    pub elements: Vec<GroupElement>,
    /// Closure rounds needed to stabilize.
    pub rounds: usize,
}

/// All sections of `g` at depths `>= |section graph of g|` together with
/// everything reachable from them — the "eventual" sections of `g`.
fn eventual_sections(
    g: &GroupElement,
    canon: &mut Canon,
    node_cap: usize,
) -> Result<BTreeSet<Vec<Gen>>> {
    let aut = canon.automaton().clone();
    let d = aut.alphabet_size();

    // Build the section graph on canonical representatives.
    let root = canon.canon(g);
    let mut children: BTreeMap<Vec<Gen>, Vec<Vec<Gen>>> = BTreeMap::new();
    let mut queue: VecDeque<GroupElement> = VecDeque::new();
    queue.push_back(root.clone());
    children.insert(root.word().to_vec(), Vec::new());
    while let Some(node) = queue.pop_front() {
        let mut kids = Vec::with_capacity(d as usize);
        for x in 0..d {
            let sec = canon.canon(&node.section(&[x]).expect("letter in alphabet"));
            if !children.contains_key(sec.word()) {
                if children.len() >= node_cap {
                    return Err(Error::Budget(format!(
                        "section graph of `{g}` exceeded {node_cap} nodes"
                    )));
                }
                children.insert(sec.word().to_vec(), Vec::new());
                queue.push_back(sec.clone());
            }
            kids.push(sec.word().to_vec());
        }
        children.insert(node.word().to_vec(), kids);
    }

    // Push the frontier |V| levels deep; by then every path sits on or past
    // a cycle, so the forward closure of the frontier is exactly the set of
    // sections at all sufficiently deep levels.
    let order = children.len();
    let mut frontier: BTreeSet<Vec<Gen>> = BTreeSet::new();
    frontier.insert(root.word().to_vec());
    for _ in 0..order {
        let mut next = BTreeSet::new();
        for word in &frontier {
            for kid in &children[word] {
                next.insert(kid.clone());
            }
        }
        frontier = next;
    }
    let mut eventual = frontier.clone();
    let mut queue: VecDeque<Vec<Gen>> = frontier.into_iter().collect();
    while let Some(word) = queue.pop_front() {
        for kid in &children[&word] {
            if eventual.insert(kid.clone()) {
                queue.push_back(kid.clone());
            }
        }
    }
    Ok(eventual)
}

/// Close a set of canonical words under sections and inverses.
fn close_set(
    set: &mut BTreeSet<Vec<Gen>>,
    canon: &mut Canon,
    bound: usize,
    round: usize,
) -> Result<()> {
    let aut = canon.automaton().clone();
    let d = aut.alphabet_size();
    let mut queue: VecDeque<Vec<Gen>> = set.iter().cloned().collect();
    while let Some(word) = queue.pop_front() {
        let g = GroupElement::from_word(aut.clone(), word);
        let mut adds: Vec<GroupElement> = Vec::with_capacity(d as usize + 1);
        for x in 0..d {
            adds.push(g.section(&[x]).expect("letter in alphabet"));
        }
        adds.push(g.inverse());
        for h in adds {
            let rep = canon.canon(&h);
            if set.insert(rep.word().to_vec()) {
                if set.len() > bound {
                    return Err(overflow(canon, set.len(), round, &rep));
                }
                queue.push_back(rep.word().to_vec());
            }
        }
    }
    Ok(())
}

fn overflow(canon: &Canon, candidates: usize, round: usize, witness: &GroupElement) -> Error {
    let _ = canon;
    Error::NucleusOverflow {
        bound: 0, // patched by caller
        candidates,
        round,
        witness: witness.to_string(),
    }
}

/// Compute the nucleus of the group generated by all states of `aut`.
///
/// * `max_rounds` — maximum closure iterations before giving up.
/// * `depth_bound` — tree depth budget handed to every equality check.
/// * `candidate_bound` — the iteration stops with
///   [`Error::NucleusOverflow`] as soon as the candidate set grows past
///   this bound (the signature of a non-contracting automaton).
pub fn compute_nucleus(
    aut: &Arc<MealyAutomaton>,
    max_rounds: usize,
    depth_bound: usize,
    candidate_bound: usize,
) -> Result<Nucleus> {
    let mut canon = Canon::new(aut.clone(), depth_bound);
    let patch_bound = |e: Error| match e {
        Error::NucleusOverflow {
            candidates,
            round,
            witness,
            ..
        } => Error::NucleusOverflow {
            bound: candidate_bound,
            candidates,
            round,
            witness,
        },
        other => other,
    };

    // Seed: identity, generators, inverses.
    let mut set: BTreeSet<Vec<Gen>> = BTreeSet::new();
    set.insert(Vec::new());
    for id in aut.generators() {
        let g = GroupElement::generator(aut.clone(), id);
        set.insert(canon.canon(&g).word().to_vec());
        set.insert(canon.canon(&g.inverse()).word().to_vec());
    }
    close_set(&mut set, &mut canon, candidate_bound, 0).map_err(patch_bound)?;

    for round in 1..=max_rounds {
        // Eventual sections of every pairwise product.
        let mut next: BTreeSet<Vec<Gen>> = BTreeSet::new();
        next.insert(Vec::new());
        let members: Vec<GroupElement> = set
            .iter()
            .map(|w| GroupElement::from_word(aut.clone(), w.clone()))
            .collect();
        for g in &members {
            for h in &members {
                let p = g.mul(h).expect("same automaton");
                let ev = eventual_sections(&p, &mut canon, candidate_bound.saturating_mul(4))
                    .map_err(|e| match e {
                        Error::Budget(_) => Error::NucleusOverflow {
                            bound: candidate_bound,
                            candidates: candidate_bound.saturating_mul(4),
                            round,
                            witness: p.to_string(),
                        },
                        other => other,
                    })?;
                for w in ev {
                    if next.insert(w.clone()) && next.len() > candidate_bound {
                        return Err(Error::NucleusOverflow {
                            bound: candidate_bound,
                            candidates: next.len(),
                            round,
                            witness: p.to_string(),
                        });
                    }
                }
            }
        }
        close_set(&mut next, &mut canon, candidate_bound, round).map_err(patch_bound)?;

        if next == set {
            let elements = set
                .iter()
                .map(|w| GroupElement::from_word(aut.clone(), w.clone()))
                .collect();
            return Ok(Nucleus {
                elements,
                rounds: round,
            });
        }
        set = next;
    }

    Err(Error::Budget(format!(
        "nucleus iteration did not stabilize within {max_rounds} rounds ({} candidates)",
        set.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    #[test]
    fn adding_machine_nucleus_has_three_elements() {
        let aut = catalog::load("adding-machine").unwrap();
        let nuc = compute_nucleus(&aut, 8, 64, 64).unwrap();
        let names: Vec<String> = nuc.elements.iter().map(|g| g.to_string()).collect();
        assert_eq!(nuc.elements.len(), 3, "nucleus {names:?}");
        assert!(names.contains(&"e".to_string()));
        assert!(names.contains(&"a".to_string()));
        assert!(names.contains(&"a'".to_string()));
    }

    #[test]
    fn grigorchuk_nucleus_is_the_generating_set() {
        let aut = catalog::load("grigorchuk").unwrap();
        let nuc = compute_nucleus(&aut, 8, 64, 64).unwrap();
        let mut names: Vec<String> = nuc.elements.iter().map(|g| g.to_string()).collect();
        names.sort();
        assert_eq!(names, vec!["a", "b", "c", "d", "e"]);
    }

    #[test]
    fn basilica_nucleus_has_seven_elements() {
        let aut = catalog::load("basilica").unwrap();
        let nuc = compute_nucleus(&aut, 8, 64, 64).unwrap();
        assert_eq!(nuc.elements.len(), 7);
    }

    #[test]
    fn sidki_automaton_overflows_the_bound() {
        let aut = catalog::load("sidki-free").unwrap();
        match compute_nucleus(&aut, 8, 24, 64) {
            Err(Error::NucleusOverflow {
                bound, candidates, ..
            }) => {
                assert_eq!(bound, 64);
                assert!(candidates >= 50, "got only {candidates} candidates");
            }
            other => panic!("expected NucleusOverflow, got {other:?}"),
        }
    }

    #[test]
    fn nucleus_is_section_and_inverse_closed() {
        let aut = catalog::load("grigorchuk").unwrap();
        let nuc = compute_nucleus(&aut, 8, 64, 64).unwrap();
        let words: BTreeSet<Vec<Gen>> =
            nuc.elements.iter().map(|g| g.word().to_vec()).collect();
        let mut canon = Canon::new(aut.clone(), 64);
        // Seed the interner with the nucleus representatives so closure
        // checks resolve to those exact words.
        for g in &nuc.elements {
            canon.canon(g);
        }
        for g in &nuc.elements {
            for x in 0..aut.alphabet_size() {
                let sec = canon.canon(&g.section(&[x]).unwrap());
                assert!(words.contains(sec.word()), "section {sec} of {g} escapes");
            }
            let inv = canon.canon(&g.inverse());
            assert!(words.contains(inv.word()), "inverse of {g} escapes");
        }
    }
}
