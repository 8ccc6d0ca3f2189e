//! Deciding triviality and equality of tree automorphisms.
//!
//! An element is the identity automorphism iff every section reachable from
//! it (itself included) has a trivial root permutation.  Because sections of
//! a word are words of no greater length over the same finite state set, the
//! closure under sections is finite and a breadth-first search with a
//! visited set decides the question exactly — the only way to get an
//! `Unknown` verdict is to exhaust the explicit depth/size budget first.

use super::automaton::{Letter, MealyAutomaton};
use super::element::{Gen, GroupElement};
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

/// Hard cap on distinct sections visited by one triviality search.
const SECTION_VISIT_CAP: usize = 200_000;

/// Outcome of a word-problem query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The element is the identity automorphism.
    Trivial,
    /// The element moves the witness word.
    Nontrivial { witness: Vec<Letter> },
    /// Budget exhausted before the search closed.
    Unknown { explored: usize },
}

impl Verdict {
    /// True for `Trivial`.
    pub fn is_trivial(&self) -> bool {
        matches!(self, Verdict::Trivial)
    }
}

/// Decide whether `g` is the identity automorphism, exploring sections down
/// to tree depth `depth_bound`.
///
/// The search is exact whenever it closes (which it always does for
/// contracting automata and short words); `Unknown` is returned only when
/// the depth bound or the internal visit cap is hit first.
pub fn is_trivial(g: &GroupElement, depth_bound: usize) -> Verdict {
    let aut = g.automaton().clone();
    let d = aut.alphabet_size();
    let mut visited: HashSet<Vec<Gen>> = HashSet::new();
    // Queue holds (section word, input path to that section, depth).
    let mut queue: VecDeque<(Vec<Gen>, Vec<Letter>, usize)> = VecDeque::new();
    visited.insert(g.word().to_vec());
    queue.push_back((g.word().to_vec(), Vec::new(), 0));
    let mut truncated = false;

    while let Some((word, path, depth)) = queue.pop_front() {
        if word.is_empty() {
            continue; // identity word: all sections trivial
        }
        // Check the root permutation of this section.
        let mut children: Vec<(Letter, Vec<Gen>)> = Vec::with_capacity(d as usize);
        for x in 0..d {
            let (y, sec) = GroupElement::act_one_level(&aut, &word, x);
            if y != x {
                let mut witness = path;
                witness.push(x);
                return Verdict::Nontrivial { witness };
            }
            children.push((x, sec));
        }
        if depth + 1 > depth_bound {
            truncated = true;
            continue;
        }
        for (x, sec) in children {
            if visited.len() >= SECTION_VISIT_CAP {
                truncated = true;
                break;
            }
            if visited.insert(sec.clone()) {
                let mut child_path = path.clone();
                child_path.push(x);
                queue.push_back((sec, child_path, depth + 1));
            }
        }
    }

    if truncated {
        Verdict::Unknown {
            explored: visited.len(),
        }
    } else {
        Verdict::Trivial
    }
}

/// Decide whether `u` and `v` are the same automorphism (via `u · v⁻¹`).
pub fn is_equal(u: &GroupElement, v: &GroupElement, depth_bound: usize) -> Verdict {
    let uv = u
        .mul(&v.inverse())
        .expect("is_equal requires elements over the same automaton");
    is_trivial(&uv, depth_bound)
}

/// Interning table mapping group elements to canonical representatives.
///
/// The representative of a class is the word under which the class was first
/// seen, so interning order is deterministic.  Candidate equalities are
/// pre-filtered by hashing the action on a fixed probe depth and then
/// confirmed with [`is_equal`].
pub struct Canon {
    aut: Arc<MealyAutomaton>,
    depth_bound: usize,
    probe_depth: usize,
    buckets: HashMap<u64, Vec<usize>>,
    reps: Vec<GroupElement>,
    unknown_comparisons: usize,
}

impl Canon {
    /// New interner.  `depth_bound` is passed to every equality check.
    pub fn new(aut: Arc<MealyAutomaton>, depth_bound: usize) -> Self {
        // Probe deep enough that d^probe_depth >= 32 (cheap near-perfect hash).
        let d = aut.alphabet_size() as usize;
        let mut probe_depth = 1;
        let mut count = d;
        while count < 32 {
            probe_depth += 1;
            count *= d;
        }
        Self {
            aut,
            depth_bound,
            probe_depth,
            buckets: HashMap::new(),
            reps: Vec::new(),
            unknown_comparisons: 0,
        }
    }

    /// The automaton this interner works over.
    pub fn automaton(&self) -> &Arc<MealyAutomaton> {
        &self.aut
    }

    /// Number of distinct classes interned so far.
    pub fn classes(&self) -> usize {
        self.reps.len()
    }

    /// Number of equality checks that returned `Unknown` (such pairs are
    /// conservatively treated as distinct).
    pub fn unknown_comparisons(&self) -> usize {
        self.unknown_comparisons
    }

    fn action_key(&self, g: &GroupElement) -> u64 {
        // FNV-1a over the images of all probe words of exact probe depth.
        let d = self.aut.alphabet_size();
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        let total = (d as u64).pow(self.probe_depth as u32);
        let mut word = vec![0u8; self.probe_depth];
        for idx in 0..total {
            let mut rem = idx;
            for slot in word.iter_mut() {
                *slot = (rem % d as u64) as u8;
                rem /= d as u64;
            }
            let image = g.act(&word).expect("probe letters are in-alphabet");
            for &y in &image {
                hash ^= y as u64;
                hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        hash
    }

    /// Canonical representative of the class of `g` (interning it if new).
    pub fn canon(&mut self, g: &GroupElement) -> GroupElement {
        let key = self.action_key(g);
        if let Some(bucket) = self.buckets.get(&key) {
            for &idx in bucket {
                match is_equal(g, &self.reps[idx], self.depth_bound) {
                    Verdict::Trivial => return self.reps[idx].clone(),
                    Verdict::Nontrivial { .. } => {}
                    Verdict::Unknown { .. } => {
                        self.unknown_comparisons += 1;
                    }
                }
            }
        }
        self.reps.push(g.clone());
        self.buckets
            .entry(key)
            .or_default()
            .push(self.reps.len() - 1);
        g.clone()
    }
}

/// Enumerate the subgroup generated by `generators`: breadth-first closure
/// under right multiplication by the generators and their inverses, with
/// canonicalization through [`Canon`].  The result lists one canonical
/// representative per element, identity first, in discovery order (so it is
/// deterministic).  Exceeding `budget` distinct elements aborts with
/// [`Error::InfiniteComplementGroup`]: the callers are block-elimination
/// paths that require the eliminated block's support to generate a finite
/// group.
pub fn enumerate_subgroup(
    aut: &Arc<MealyAutomaton>,
    generators: &[GroupElement],
    depth_bound: usize,
    budget: usize,
) -> crate::error::Result<Vec<GroupElement>> {
    let mut canon = Canon::new(aut.clone(), depth_bound);
    let mut steps: Vec<GroupElement> = Vec::new();
    for g in generators {
        steps.push(g.clone());
        steps.push(g.inverse());
    }
    let identity = GroupElement::identity(aut.clone());
    let mut seen: HashSet<Vec<Gen>> = HashSet::new();
    let mut elements: Vec<GroupElement> = Vec::new();
    let mut queue: VecDeque<GroupElement> = VecDeque::new();

    let rep = canon.canon(&identity);
    seen.insert(rep.word().to_vec());
    elements.push(rep.clone());
    queue.push_back(rep);

    while let Some(current) = queue.pop_front() {
        for step in &steps {
            let next = current
                .mul(step)
                .expect("subgroup closure stays over one automaton");
            let rep = canon.canon(&next);
            if seen.insert(rep.word().to_vec()) {
                if elements.len() >= budget {
                    return Err(crate::error::Error::InfiniteComplementGroup { bound: budget });
                }
                elements.push(rep.clone());
                queue.push_back(rep);
            }
        }
    }
    Ok(elements)
}
