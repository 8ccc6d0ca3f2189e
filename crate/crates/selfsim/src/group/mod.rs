//! Groups generated by finite invertible Mealy automata acting on the
//! rooted d-ary tree: definitions, tree actions, the word problem, and
//! nucleus computation.

pub mod automaton;
pub mod catalog;
pub mod element;
pub mod nucleus;
pub mod wordproblem;

pub use automaton::{
    parse_automaton, same_automaton, Letter, MealyAutomaton, StateDef, StateId, IDENTITY_STATE,
};
pub use element::{render_word, Gen, GroupElement};
pub use nucleus::{compute_nucleus, Nucleus};
pub use wordproblem::{enumerate_subgroup, is_equal, is_trivial, Canon, Verdict};
