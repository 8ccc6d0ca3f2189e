//! Built-in automaton catalog.
//!
//! Each entry is stored as definition text in the same format accepted by
//! [`parse_automaton`](super::automaton::parse_automaton), so loading a
//! catalog group exercises exactly the same code path as a user file.

use super::automaton::{parse_automaton, MealyAutomaton};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// First Grigorchuk group: a swaps; b, c, d cycle through their sections.
pub const GRIGORCHUK: &str = "\
name: grigorchuk
alphabet_size: 2
states:
  a: output [1, 0] sections [e, e]
  b: output [0, 1] sections [a, c]
  c: output [0, 1] sections [a, d]
  d: output [0, 1] sections [e, b]
";

/// Binary adding machine (odometer): acts on binary words least bit first.
pub const ADDING_MACHINE: &str = "\
name: adding-machine
alphabet_size: 2
states:
  a: output [1, 0] sections [e, a]
";

/// Basilica group: iterated monodromy group of z^2 - 1.
pub const BASILICA: &str = "\
name: basilica
alphabet_size: 2
states:
  a: output [0, 1] sections [e, b]
  b: output [1, 0] sections [e, a]
";

/// Hanoi towers group on three pegs: each generator is a legal move.
pub const HANOI: &str = "\
name: hanoi
alphabet_size: 3
states:
  a: output [1, 0, 2] sections [e, e, a]
  b: output [2, 1, 0] sections [e, b, e]
  c: output [0, 2, 1] sections [c, e, e]
";

/// Sidki's bireversible automaton generating a free group of rank 3;
/// not contracting (sections never shorten words).
pub const SIDKI_FREE: &str = "\
name: sidki-free
alphabet_size: 2
states:
  a: output [0, 1] sections [b, b]
  b: output [1, 0] sections [a, c]
  c: output [1, 0] sections [c, a]
";

/// Free product C2 * C2 * C2 realized by a 3-state automaton over 2 letters.
pub const C2C2C2: &str = "\
name: c2c2c2
alphabet_size: 2
states:
  a: output [1, 0] sections [b, b]
  b: output [0, 1] sections [a, c]
  c: output [0, 1] sections [c, a]
";

/// Grigorchuk-type group G_w for the periodic defining sequence used in the
/// worked kernel example; satisfies the relation bc = cb and b + c - bc = 1
/// in the group algebra's expansions.
pub const GW: &str = "\
name: gw
alphabet_size: 2
states:
  a: output [1, 0] sections [e, e]
  b: output [0, 1] sections [a, c]
  c: output [0, 1] sections [e, b]
";

/// Iterated monodromy group of z^2 + i.
pub const IMG_ZSQI: &str = "\
name: img-zsqi
alphabet_size: 2
states:
  a: output [1, 0] sections [e, e]
  b: output [0, 1] sections [a, c]
  c: output [0, 1] sections [b, e]
";

/// The trivial group (identity state only).
pub const TRIVIAL: &str = "\
name: trivial
alphabet_size: 2
states:
";

const ENTRIES: &[(&str, &str)] = &[
    ("grigorchuk", GRIGORCHUK),
    ("adding-machine", ADDING_MACHINE),
    ("basilica", BASILICA),
    ("hanoi", HANOI),
    ("sidki-free", SIDKI_FREE),
    ("c2c2c2", C2C2C2),
    ("gw", GW),
    ("img-zsqi", IMG_ZSQI),
    ("trivial", TRIVIAL),
];

/// Names of all catalog groups.
pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// Definition text of a catalog group.
pub fn text(name: &str) -> Result<&'static str> {
    ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownName {
            kind: "group",
            name: name.to_string(),
        })
}

fn cache() -> &'static BTreeMap<&'static str, Arc<MealyAutomaton>> {
    static CACHE: OnceLock<BTreeMap<&'static str, Arc<MealyAutomaton>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        ENTRIES
            .iter()
            .map(|(name, text)| {
                let aut = parse_automaton(text)
                    .unwrap_or_else(|e| panic!("catalog entry `{name}` must parse: {e}"));
                (*name, Arc::new(aut))
            })
            .collect()
    })
}

/// Load a catalog group (shared instance).
pub fn load(name: &str) -> Result<Arc<MealyAutomaton>> {
    cache()
        .get(name)
        .cloned()
        .ok_or_else(|| Error::UnknownName {
            kind: "group",
            name: name.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses_and_round_trips() {
        for (name, text) in ENTRIES {
            let aut = parse_automaton(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(aut.name(), *name);
            let canon = aut.canonical_text();
            let reparsed = parse_automaton(&canon).unwrap();
            assert_eq!(canon, reparsed.canonical_text(), "{name} round-trip");
        }
    }

    #[test]
    fn load_caches_shared_instances() {
        let a = load("grigorchuk").unwrap();
        let b = load("grigorchuk").unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn unknown_name_errors() {
        assert!(load("no-such-group").is_err());
    }
}
