//! Finite invertible Mealy automata over a d-letter alphabet.
//!
//! An automaton is a finite set of states; each state carries a permutation
//! of the alphabet (its root action) and one successor state per letter (its
//! sections).  Every state generates an automorphism of the rooted d-ary
//! tree, and words in the states generate a self-similar group.
//!
//! # Definition text format
//!
//! ```text
//! name: grigorchuk
//! alphabet_size: 2
//! states:
//!   a: output [1, 0] sections [e, e]
//!   b: output [0, 1] sections [a, c]
//!   c: output [0, 1] sections [a, d]
//!   d: output [0, 1] sections [e, b]
//! ```
//!
//! * `name` is optional (defaults to `custom`).
//! * `alphabet_size` is the arity d, between 2 and 16.
//! * Each state line gives the output permutation (`output[x]` is the image
//!   of letter `x`) and the section state per letter.  The reserved name `e`
//!   denotes the identity and may be referenced but never defined.
//! * `#` starts a comment; blank lines are ignored.
//!
//! Serialization is canonical: fixed field order, states sorted by name,
//! single-space separators.  `parse -> serialize -> parse` round-trips to
//! byte-identical text.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::sync::Arc;

/// Index of a state inside a [`MealyAutomaton`].  Index 0 is always the
/// implicit identity state `e`.
pub type StateId = u16;

/// The identity state present in every automaton.
pub const IDENTITY_STATE: StateId = 0;

/// Alphabet letter (0-based).
pub type Letter = u8;

/// One automaton state: output permutation plus section per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDef {
    pub name: String,
    /// `output[x]` = image of input letter `x` under the root permutation.
    pub output: Vec<Letter>,
    /// `inverse_output[y]` = the letter `x` with `output[x] == y`.
    pub inverse_output: Vec<Letter>,
    /// `sections[x]` = state reached after consuming input letter `x`.
    pub sections: Vec<StateId>,
}

/// A finite invertible Mealy automaton together with a display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyAutomaton {
    name: String,
    alphabet: u8,
    /// `states[0]` is the identity state `e`; user states follow in
    /// lexicographic name order.
    states: Vec<StateDef>,
}

impl MealyAutomaton {
    /// The display name from the definition text.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Alphabet size d.
    pub fn alphabet_size(&self) -> u8 {
        self.alphabet
    }

    /// Total number of states, identity included.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// The state record behind `id`.
    pub fn state(&self, id: StateId) -> &StateDef {
        &self.states[id as usize]
    }

    /// Resolve a state name (including `"e"`).
    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as StateId)
    }

    /// All non-identity states, in canonical (name-sorted) order.
    pub fn generators(&self) -> impl Iterator<Item = StateId> + '_ {
        (1..self.states.len()).map(|i| i as StateId)
    }

    /// Image of `letter` under the root permutation of `state`.
    pub fn output(&self, state: StateId, letter: Letter) -> Letter {
        self.states[state as usize].output[letter as usize]
    }

    /// Preimage of `letter` under the root permutation of `state`.
    pub fn inverse_output(&self, state: StateId, letter: Letter) -> Letter {
        self.states[state as usize].inverse_output[letter as usize]
    }

    /// Section of `state` at input letter `letter`.
    pub fn section_state(&self, state: StateId, letter: Letter) -> StateId {
        self.states[state as usize].sections[letter as usize]
    }

    /// Canonical definition text (stable field order, states sorted by name).
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "name: {}", self.name).unwrap();
        writeln!(out, "alphabet_size: {}", self.alphabet).unwrap();
        writeln!(out, "states:").unwrap();
        for s in &self.states[1..] {
            let output = s
                .output
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let sections = s
                .sections
                .iter()
                .map(|&id| self.states[id as usize].name.clone())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(out, "  {}: output [{}] sections [{}]", s.name, output, sections).unwrap();
        }
        out
    }
}

/// Check two automata are the same object (pointer or structural equality).
pub fn same_automaton(a: &Arc<MealyAutomaton>, b: &Arc<MealyAutomaton>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

struct RawState {
    line: usize,
    name: String,
    output: Vec<Letter>,
    sections: Vec<String>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parse a bracketed comma-separated list: `[x, y, z]` -> items as strings.
fn parse_bracket_list(line: usize, text: &str) -> Result<(Vec<String>, &str)> {
    let text = text.trim_start();
    let Some(rest) = text.strip_prefix('[') else {
        return Err(parse_err(line, format!("expected `[` near `{text}`")));
    };
    let Some(close) = rest.find(']') else {
        return Err(parse_err(line, "unterminated `[...]` list"));
    };
    let inner = &rest[..close];
    let items = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|s| s.trim().to_string()).collect()
    };
    Ok((items, &rest[close + 1..]))
}

/// Parse automaton definition text.  See the module docs for the format.
pub fn parse_automaton(text: &str) -> Result<MealyAutomaton> {
    let mut name: Option<String> = None;
    let mut alphabet: Option<u8> = None;
    let mut raw_states: Vec<RawState> = Vec::new();
    let mut in_states = false;

    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }

        if !in_states {
            let Some((key, value)) = line.split_once(':') else {
                return Err(parse_err(lineno, format!("expected `key: value`, got `{line}`")));
            };
            let key = key.trim();
            let value = value.trim();
            match key {
                "name" => {
                    if !valid_ident(value) {
                        return Err(parse_err(lineno, format!("invalid name `{value}`")));
                    }
                    name = Some(value.to_string());
                }
                "alphabet_size" => {
                    let d: u32 = value
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("invalid alphabet_size `{value}`")))?;
                    if !(2..=16).contains(&d) {
                        return Err(parse_err(lineno, format!("alphabet_size {d} outside 2..=16")));
                    }
                    alphabet = Some(d as u8);
                }
                "states" => {
                    if !value.is_empty() {
                        return Err(parse_err(lineno, "`states:` takes no inline value"));
                    }
                    in_states = true;
                }
                other => {
                    return Err(parse_err(lineno, format!("unknown field `{other}`")));
                }
            }
        } else {
            // State line: `<name>: output [..] sections [..]`
            let Some((state_name, rest)) = line.split_once(':') else {
                return Err(parse_err(lineno, format!("expected `state: ...`, got `{line}`")));
            };
            let state_name = state_name.trim();
            if state_name == "e" {
                return Err(parse_err(lineno, "state name `e` is reserved for the identity"));
            }
            if !valid_ident(state_name) {
                return Err(parse_err(lineno, format!("invalid state name `{state_name}`")));
            }
            let rest = rest.trim();
            let Some(rest) = rest.strip_prefix("output") else {
                return Err(parse_err(lineno, format!("expected `output [...]` near `{rest}`")));
            };
            let (output_items, rest) = parse_bracket_list(lineno, rest)?;
            let rest = rest.trim_start();
            let Some(rest) = rest.strip_prefix("sections") else {
                return Err(parse_err(lineno, format!("expected `sections [...]` near `{rest}`")));
            };
            let (section_items, rest) = parse_bracket_list(lineno, rest)?;
            if !rest.trim().is_empty() {
                return Err(parse_err(lineno, format!("trailing text `{}`", rest.trim())));
            }
            let mut output = Vec::with_capacity(output_items.len());
            for item in &output_items {
                let letter: u8 = item
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("invalid output letter `{item}`")))?;
                output.push(letter);
            }
            raw_states.push(RawState {
                line: lineno,
                name: state_name.to_string(),
                output,
                sections: section_items,
            });
        }
    }

    let Some(alphabet) = alphabet else {
        return Err(parse_err(0, "missing required field `alphabet_size`"));
    };
    let name = name.unwrap_or_else(|| "custom".to_string());
    let d = alphabet as usize;

    // Sort user states by name for the canonical order; reject duplicates.
    raw_states.sort_by(|a, b| a.name.cmp(&b.name));
    for pair in raw_states.windows(2) {
        if pair[0].name == pair[1].name {
            return Err(parse_err(
                pair[1].line,
                format!("duplicate state `{}`", pair[1].name),
            ));
        }
    }
    if raw_states.len() >= StateId::MAX as usize {
        return Err(parse_err(0, "too many states"));
    }

    // Identity state at index 0.
    let identity = StateDef {
        name: "e".to_string(),
        output: (0..alphabet).collect(),
        inverse_output: (0..alphabet).collect(),
        sections: vec![IDENTITY_STATE; d],
    };
    let mut states = vec![identity];

    // Resolve names: e -> 0, user states -> 1.. in sorted order.
    let resolve = |line: usize, owner: &str, name: &str| -> Result<StateId> {
        if name == "e" {
            return Ok(IDENTITY_STATE);
        }
        match raw_states.binary_search_by(|s| s.name.as_str().cmp(name)) {
            Ok(i) => Ok((i + 1) as StateId),
            Err(_) => {
                let _ = line;
                Err(Error::UnknownState {
                    state: owner.to_string(),
                    name: name.to_string(),
                })
            }
        }
    };

    for raw in &raw_states {
        if raw.output.len() != d || raw.sections.len() != d {
            return Err(parse_err(
                raw.line,
                format!(
                    "state `{}` needs exactly {d} outputs and {d} sections (got {} and {})",
                    raw.name,
                    raw.output.len(),
                    raw.sections.len()
                ),
            ));
        }
        // Output row must be a permutation of 0..d.
        let mut seen = vec![false; d];
        for &y in &raw.output {
            if (y as usize) >= d || seen[y as usize] {
                return Err(Error::NotAPermutation {
                    state: raw.name.clone(),
                    row: raw.output.clone(),
                    alphabet,
                });
            }
            seen[y as usize] = true;
        }
        let mut inverse_output = vec![0u8; d];
        for (x, &y) in raw.output.iter().enumerate() {
            inverse_output[y as usize] = x as u8;
        }
        let mut sections = Vec::with_capacity(d);
        for sec in &raw.sections {
            sections.push(resolve(raw.line, &raw.name, sec)?);
        }
        states.push(StateDef {
            name: raw.name.clone(),
            output: raw.output.clone(),
            inverse_output,
            sections,
        });
    }

    Ok(MealyAutomaton {
        name,
        alphabet,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRIG: &str = "\
name: grigorchuk
alphabet_size: 2
states:
  a: output [1, 0] sections [e, e]
  b: output [0, 1] sections [a, c]
  c: output [0, 1] sections [a, d]
  d: output [0, 1] sections [e, b]
";

    #[test]
    fn parses_five_states_including_identity() {
        let aut = parse_automaton(GRIG).unwrap();
        assert_eq!(aut.num_states(), 5);
        assert_eq!(aut.alphabet_size(), 2);
        assert_eq!(aut.state(IDENTITY_STATE).name, "e");
        assert_eq!(aut.state_id("b"), Some(2));
        assert_eq!(aut.output(1, 0), 1, "state a swaps the two letters");
        assert_eq!(aut.section_state(2, 1), aut.state_id("c").unwrap());
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let aut = parse_automaton(GRIG).unwrap();
        let text = aut.canonical_text();
        let reparsed = parse_automaton(&text).unwrap();
        assert_eq!(text, reparsed.canonical_text());
        assert_eq!(aut, reparsed);
    }

    #[test]
    fn comments_blanks_and_order_are_normalized() {
        let messy = "\
# a messy version
alphabet_size: 2

name: grigorchuk
states:
  d: output [0,1] sections [e,b]   # trailing comment
  b: output [0, 1] sections [a, c]
  c: output [0,1] sections [a,d]
  a: output [1,0] sections [e,e]
";
        let aut = parse_automaton(messy).unwrap();
        let clean = parse_automaton(GRIG).unwrap();
        assert_eq!(aut.canonical_text(), clean.canonical_text());
    }

    #[test]
    fn rejects_non_permutation_output() {
        let bad = "\
alphabet_size: 2
states:
  a: output [0, 0] sections [e, e]
";
        match parse_automaton(bad) {
            Err(Error::NotAPermutation { state, .. }) => assert_eq!(state, "a"),
            other => panic!("expected NotAPermutation, got {other:?}"),
        }
    }

    #[test]
    fn rejects_dangling_section_name() {
        let bad = "\
alphabet_size: 2
states:
  a: output [1, 0] sections [e, z]
";
        match parse_automaton(bad) {
            Err(Error::UnknownState { state, name }) => {
                assert_eq!(state, "a");
                assert_eq!(name, "z");
            }
            other => panic!("expected UnknownState, got {other:?}"),
        }
    }

    #[test]
    fn rejects_defining_the_identity() {
        let bad = "\
alphabet_size: 2
states:
  e: output [0, 1] sections [e, e]
";
        assert!(parse_automaton(bad).is_err());
    }

    #[test]
    fn empty_state_list_gives_identity_only() {
        let aut = parse_automaton("alphabet_size: 2\nstates:\n").unwrap();
        assert_eq!(aut.num_states(), 1);
    }
}
