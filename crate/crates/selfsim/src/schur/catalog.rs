//! Catalog of operator pencils and their verified renormalization
//! directions.
//!
//! Each [`Direction`] packages everything needed to check one
//! self-similarity law numerically or exactly: the pencil, the block kept
//! by the Schur complement, the parameter map applied on the small side,
//! and the scalar prefactor relating the two.  Directions whose eliminated
//! block generates an infinite subgroup are rejected with a computed
//! [`Error::InfiniteComplementGroup`] rather than being silently absent.

use super::partition::BlockSplit;
use super::pencil::{Pencil, PencilTerm};
use crate::dynamics::{catalog as maps, MultiPoly, RationalFunction, RationalMapND};
use crate::error::{Error, Result};
use crate::group::{catalog as groups, Gen, Letter, MealyAutomaton};
use std::sync::Arc;

/// Canonical names of the catalog pencils.
pub const PENCIL_NAMES: [&str; 5] = [
    "grigorchuk-r",
    "grigorchuk-m5",
    "basilica-r",
    "hanoi-delta",
    "img-m",
];

/// One verified renormalization direction of a catalog pencil.
#[derive(Debug, Clone)]
pub struct Direction {
    pencil: Pencil,
    block: Letter,
    split: BlockSplit,
    map: RationalMapND,
    scale: RationalFunction,
}

impl Direction {
    /// The pencil being renormalized.
    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    /// Kept block index (`i` in `S_i`).
    pub fn block(&self) -> Letter {
        self.block
    }

    /// Index partition family used at each level.
    pub fn split(&self) -> &BlockSplit {
        &self.split
    }

    /// Parameter map applied on the coarse side.
    pub fn map(&self) -> &RationalMapND {
        &self.map
    }

    /// Scalar prefactor: the complement of the level-(n+1) pencil equals
    /// `scale(point)` times the level-n pencil at the mapped point.
    pub fn scale(&self) -> &RationalFunction {
        &self.scale
    }

    /// One-line description.
    pub fn describe(&self) -> String {
        format!(
            "S_{} of `{}` [{}] -> `{}`, prefactor {}",
            self.block,
            self.pencil.name(),
            self.split.label(),
            self.map.name(),
            self.scale
                .render(&self.param_names().iter().map(String::as_str).collect::<Vec<_>>()),
        )
    }

    fn param_names(&self) -> Vec<String> {
        self.pencil.params().to_vec()
    }
}

fn gen(aut: &Arc<MealyAutomaton>, name: &str) -> Result<Gen> {
    let id = aut.state_id(name).ok_or_else(|| Error::UnknownState {
        state: aut.name().to_string(),
        name: name.to_string(),
    })?;
    Ok((id, false))
}

fn term(coefficient: RationalFunction, word: Vec<Gen>) -> PencilTerm {
    PencilTerm { coefficient, word }
}

fn int_c(arity: usize, value: i64) -> RationalFunction {
    RationalFunction::from_poly(MultiPoly::int(arity, value))
}

fn var_c(arity: usize, index: usize) -> RationalFunction {
    RationalFunction::from_poly(MultiPoly::var(arity, index))
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| (*s).to_string()).collect()
}

/// Build a catalog pencil by canonical name.
pub fn pencil(name: &str) -> Result<Pencil> {
    match name {
        "grigorchuk-r" => {
            let aut = groups::load("grigorchuk")?;
            let (a, b, c, d) = (
                gen(&aut, "a")?,
                gen(&aut, "b")?,
                gen(&aut, "c")?,
                gen(&aut, "d")?,
            );
            let la = MultiPoly::var(2, 0);
            let mu = MultiPoly::var(2, 1);
            Pencil::scalar(
                name,
                aut,
                names(&["la", "mu"]),
                vec![
                    term(RationalFunction::from_poly(la.neg()), vec![a]),
                    term(int_c(2, 1), vec![b]),
                    term(int_c(2, 1), vec![c]),
                    term(int_c(2, 1), vec![d]),
                    term(
                        RationalFunction::from_poly(mu.add(&MultiPoly::int(2, 1)).neg()),
                        vec![],
                    ),
                ],
            )
        }
        "grigorchuk-m5" => {
            let aut = groups::load("grigorchuk")?;
            let (a, b, c, d) = (
                gen(&aut, "a")?,
                gen(&aut, "b")?,
                gen(&aut, "c")?,
                gen(&aut, "d")?,
            );
            Pencil::scalar(
                name,
                aut,
                names(&["x", "y", "z", "u", "v"]),
                vec![
                    term(var_c(5, 0), vec![a]),
                    term(var_c(5, 1), vec![b]),
                    term(var_c(5, 2), vec![c]),
                    term(var_c(5, 3), vec![d]),
                    term(var_c(5, 4), vec![]),
                ],
            )
        }
        "basilica-r" => {
            let aut = groups::load("basilica")?;
            let a = gen(&aut, "a")?;
            let b = gen(&aut, "b")?;
            let a_inv = (a.0, true);
            let b_inv = (b.0, true);
            let la = var_c(2, 0);
            Pencil::scalar(
                name,
                aut,
                names(&["la", "mu"]),
                vec![
                    term(int_c(2, 1), vec![a]),
                    term(int_c(2, 1), vec![a_inv]),
                    term(la.clone(), vec![b]),
                    term(la, vec![b_inv]),
                    term(
                        RationalFunction::from_poly(MultiPoly::var(2, 1).neg()),
                        vec![],
                    ),
                ],
            )
        }
        "hanoi-delta" => {
            let aut = groups::load("hanoi")?;
            let (a, b, c) = (gen(&aut, "a")?, gen(&aut, "b")?, gen(&aut, "c")?);
            let neg_x = RationalFunction::from_poly(MultiPoly::var(2, 0).neg());
            let y = var_c(2, 1);
            let diag = |g: Gen| vec![term(int_c(2, 1), vec![g]), term(neg_x.clone(), vec![])];
            let off = || vec![term(y.clone(), vec![])];
            // Row/column i holds the generator fixing letter i, so the
            // grid's level-n expansion equals the level-(n+1) matrix of
            // a + b + c with -x on the diagonal and y on the couplings.
            let cells = vec![
                vec![diag(c), off(), off()],
                vec![off(), diag(b), off()],
                vec![off(), off(), diag(a)],
            ];
            Pencil::grid(name, aut, names(&["x", "y"]), cells)
        }
        "img-m" => {
            let aut = groups::load("img-zsqi")?;
            let (a, b, c) = (gen(&aut, "a")?, gen(&aut, "b")?, gen(&aut, "c")?);
            Pencil::scalar(
                name,
                aut,
                names(&["y", "z", "la"]),
                vec![
                    term(int_c(3, 1), vec![a]),
                    term(var_c(3, 0), vec![b]),
                    term(var_c(3, 1), vec![c]),
                    term(
                        RationalFunction::from_poly(MultiPoly::var(3, 2).neg()),
                        vec![],
                    ),
                ],
            )
        }
        _ => Err(Error::UnknownName {
            kind: "pencil",
            name: name.to_string(),
        }),
    }
}

/// Resolve a user-facing pencil alias (`R2`, `M5`, …) to a canonical name.
///
/// `group` narrows single-letter aliases shared between families; canonical
/// names always resolve to themselves.
pub fn resolve_pencil(group: Option<&str>, alias: &str) -> Result<String> {
    let lower = alias.to_ascii_lowercase();
    if PENCIL_NAMES.contains(&lower.as_str()) {
        return Ok(lower);
    }
    let resolved = match lower.as_str() {
        "r2" => Some("grigorchuk-r"),
        "m5" => Some("grigorchuk-m5"),
        "delta" => Some("hanoi-delta"),
        "r" => match group {
            Some("grigorchuk") => Some("grigorchuk-r"),
            Some("basilica") => Some("basilica-r"),
            _ => None,
        },
        "m" => match group {
            Some("img-zsqi") => Some("img-m"),
            Some("grigorchuk") => Some("grigorchuk-m5"),
            _ => None,
        },
        _ => None,
    };
    resolved.map(str::to_string).ok_or_else(|| Error::UnknownName {
        kind: "pencil",
        name: alias.to_string(),
    })
}

/// Build the verified renormalization direction `S_block` of the named
/// pencil.
///
/// For block choices whose eliminated support generates an infinite
/// subgroup (so no finite-level law exists), the classification is run and
/// its [`Error::InfiniteComplementGroup`] is returned.
pub fn direction(pencil_name: &str, block: Letter) -> Result<Direction> {
    let p = pencil(pencil_name)?;
    let two = MultiPoly::int(2, 2);
    match (pencil_name, block) {
        ("grigorchuk-r", 0) => {
            let la = MultiPoly::var(2, 0);
            let mu = MultiPoly::var(2, 1);
            // -la^2 / (4 - mu^2)
            let scale = RationalFunction::new(
                la.pow(2).neg(),
                MultiPoly::int(2, 4).sub(&mu.pow(2)),
            );
            finish(p, 0, BlockSplit::FirstLetter(0), maps::map("grigorchuk-f")?, scale)
        }
        ("grigorchuk-r", 1) => finish(
            p,
            1,
            BlockSplit::FirstLetter(1),
            maps::map("grigorchuk-g")?,
            int_c(2, 1),
        ),
        ("grigorchuk-m5", 0) => finish(
            p,
            0,
            BlockSplit::FirstLetter(0),
            maps::map("schur1-5param")?,
            int_c(5, 1),
        ),
        ("grigorchuk-m5", 1) => finish(
            p,
            1,
            BlockSplit::FirstLetter(1),
            maps::map("schur2-5param")?,
            int_c(5, 1),
        ),
        ("basilica-r", 1) => {
            let la = MultiPoly::var(2, 0);
            let mu = MultiPoly::var(2, 1);
            // la^2 / (mu - 2)
            let scale = RationalFunction::new(la.pow(2), mu.sub(&two));
            finish(p, 1, BlockSplit::FirstLetter(1), maps::map("basilica")?, scale)
        }
        ("hanoi-delta", 0) => finish(
            p,
            0,
            BlockSplit::LetterMatch,
            maps::map("hanoi")?,
            int_c(2, 1),
        ),
        ("img-m", 0) => finish(
            p,
            0,
            BlockSplit::FirstLetter(0),
            maps::map("img-phi")?,
            var_c(3, 0),
        ),
        ("basilica-r", 0) => {
            // No finite-level law in this direction: the eliminated block's
            // support generates an infinite subgroup.  Prove it by running
            // the classification, which reports the budget overflow.
            p.complement_group_order(&BlockSplit::FirstLetter(block))?;
            Err(Error::Mismatch(format!(
                "pencil `{pencil_name}` block {block}: eliminated support unexpectedly finite"
            )))
        }
        _ => Err(Error::UnknownName {
            kind: "direction",
            name: format!("{pencil_name}[{block}]"),
        }),
    }
}

fn finish(
    pencil: Pencil,
    block: Letter,
    split: BlockSplit,
    map: RationalMapND,
    scale: RationalFunction,
) -> Result<Direction> {
    let arity = pencil.params().len();
    if map.arity() != arity || scale.arity() != arity {
        return Err(Error::Mismatch(format!(
            "direction for `{}`: map arity {} / scale arity {} vs {} pencil parameters",
            pencil.name(),
            map.arity(),
            scale.arity(),
            arity
        )));
    }
    Ok(Direction {
        pencil,
        block,
        split,
        map,
        scale,
    })
}

/// Every supported `(pencil, block)` direction, in catalog order.
pub const DIRECTIONS: [(&str, Letter); 7] = [
    ("grigorchuk-r", 0),
    ("grigorchuk-r", 1),
    ("grigorchuk-m5", 0),
    ("grigorchuk-m5", 1),
    ("basilica-r", 1),
    ("hanoi-delta", 0),
    ("img-m", 0),
];

/// One-line-per-direction description of the catalog.
pub fn describe_all() -> String {
    let mut out = String::new();
    for (name, block) in DIRECTIONS {
        if let Ok(dir) = direction(name, block) {
            out.push_str(&dir.describe());
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational_from_str;
    use crate::schur::complement::{compose_schur, schur_complement};
    use num_rational::BigRational;

    fn rat(s: &str) -> BigRational {
        rational_from_str(s).unwrap()
    }

    /// Exact check of one direction at a rational point: the Schur
    /// complement of the level-(n+1) matrix must equal the prefactor times
    /// the level-n matrix at the mapped point, with zero tolerance.
    fn assert_exact_law(name: &str, block: Letter, point: &[BigRational], levels: &[u32]) {
        let dir = direction(name, block).unwrap();
        let margin = 1e-9;
        let image: Vec<BigRational> = dir.map().eval(point, margin).unwrap();
        let kappa: BigRational = dir.scale().eval(point, margin).unwrap();
        for &n in levels {
            let big = dir.pencil().level_matrix(point, n + 1, margin).unwrap();
            let small = dir
                .pencil()
                .level_matrix(&image, n, margin)
                .unwrap()
                .scale(&kappa);
            let complement = schur_complement(&big, dir.split()).unwrap();
            assert_eq!(
                complement.max_diff(&small).unwrap(),
                0.0,
                "direction {name}[{block}] at level {n}"
            );
        }
    }

    #[test]
    fn grigorchuk_first_block_law_is_exact_over_rationals() {
        let point = [rat("3/7"), rat("-5/9")];
        assert_exact_law("grigorchuk-r", 0, &point, &[1, 2, 3]);
    }

    #[test]
    fn grigorchuk_second_block_law_is_exact_over_rationals() {
        let point = [rat("4/5"), rat("1/3")];
        assert_exact_law("grigorchuk-r", 1, &point, &[1, 2, 3]);
    }

    #[test]
    fn five_parameter_laws_are_exact_over_rationals() {
        let point = [rat("2/3"), rat("-1/2"), rat("3/5"), rat("1/7"), rat("-2/9")];
        assert_exact_law("grigorchuk-m5", 0, &point, &[1, 2]);
        assert_exact_law("grigorchuk-m5", 1, &point, &[1, 2]);
    }

    #[test]
    fn basilica_law_is_exact_over_rationals() {
        let point = [rat("5/8"), rat("-3/4")];
        assert_exact_law("basilica-r", 1, &point, &[1, 2, 3]);
    }

    #[test]
    fn hanoi_law_is_exact_over_rationals() {
        let point = [rat("1/5"), rat("2/7")];
        assert_exact_law("hanoi-delta", 0, &point, &[1, 2, 3]);
    }

    #[test]
    fn img_law_is_exact_over_rationals() {
        let point = [rat("3/8"), rat("-5/7"), rat("2/5")];
        assert_exact_law("img-m", 0, &point, &[1, 2, 3]);
    }

    #[test]
    fn basilica_zero_block_reports_an_infinite_complement_group() {
        match direction("basilica-r", 0) {
            Err(Error::InfiniteComplementGroup { bound }) => {
                assert_eq!(bound, crate::schur::pencil::SUPPORT_GROUP_BUDGET)
            }
            other => panic!("expected infinite-complement error, got {other:?}"),
        }
    }

    #[test]
    fn img_second_block_has_a_finite_support_group_but_no_cataloged_law() {
        // The eliminated support {a, b} generates a dihedral group of
        // order 16 (ab has order 8), so the block is generically
        // invertible — but no renormalization law within the
        // three-parameter family is cataloged for it.
        let p = pencil("img-m").unwrap();
        let order = p
            .complement_group_order(&BlockSplit::FirstLetter(1))
            .unwrap();
        assert_eq!(order, 16);
        assert!(matches!(
            direction("img-m", 1),
            Err(Error::UnknownName { kind: "direction", .. })
        ));
    }

    #[test]
    fn supported_directions_have_small_support_groups() {
        let expect = [
            ("grigorchuk-r", 0u8, 4usize), // {e, b|1, c|1, d|1} closes to the Klein group
            ("grigorchuk-r", 1, 2),        // sections at 0 give {e, a}
            ("grigorchuk-m5", 0, 4),
            ("grigorchuk-m5", 1, 2),
            ("basilica-r", 1, 1),
            ("hanoi-delta", 0, 1),
            ("img-m", 0, 2), // {e, c}
        ];
        for (name, block, order) in expect {
            let dir = direction(name, block).unwrap();
            let got = dir.pencil().complement_group_order(dir.split()).unwrap();
            assert_eq!(got, order, "support group order for {name}[{block}]");
        }
    }

    #[test]
    fn composed_elimination_matches_the_twice_mapped_pencil() {
        // Two first-letter-0 eliminations in a row: the prefactors multiply
        // (the second one evaluated at the mapped point).
        let dir = direction("grigorchuk-r", 0).unwrap();
        let margin = 1e-9;
        let point = [rat("3/7"), rat("-5/9")];
        let once: Vec<BigRational> = dir.map().eval(&point, margin).unwrap();
        let twice: Vec<BigRational> = dir.map().eval(&once, margin).unwrap();
        let kappa: BigRational = dir.scale().eval(&point, margin).unwrap();
        let kappa2: BigRational = dir.scale().eval(&once, margin).unwrap();
        let big = dir.pencil().level_matrix(&point, 3, margin).unwrap();
        let reduced = compose_schur(&big, &[0, 0]).unwrap();
        let small = dir
            .pencil()
            .level_matrix(&twice, 1, margin)
            .unwrap()
            .scale(&(kappa * kappa2));
        assert_eq!(reduced.max_diff(&small).unwrap(), 0.0);
    }

    #[test]
    fn aliases_resolve_to_canonical_names() {
        assert_eq!(resolve_pencil(None, "R2").unwrap(), "grigorchuk-r");
        assert_eq!(resolve_pencil(None, "M5").unwrap(), "grigorchuk-m5");
        assert_eq!(
            resolve_pencil(Some("basilica"), "r").unwrap(),
            "basilica-r"
        );
        assert_eq!(resolve_pencil(Some("img-zsqi"), "m").unwrap(), "img-m");
        assert_eq!(
            resolve_pencil(None, "hanoi-delta").unwrap(),
            "hanoi-delta"
        );
        assert!(resolve_pencil(None, "nope").is_err());
    }

    #[test]
    fn grid_pencil_matches_markov_operator_at_unit_coupling() {
        // At (x, y) = (0, 1) the grid expansion is the plain level matrix
        // of a + b + c.
        let p = pencil("hanoi-delta").unwrap();
        let aut = groups::load("hanoi").unwrap();
        let point = [rat("0"), rat("1")];
        for level in 1..=3u32 {
            let grid = p.level_matrix(&point, level, 1e-9).unwrap();
            let mut sum = crate::algebra::AlgebraElement::<BigRational>::zero(aut.clone());
            for g in ["a", "b", "c"] {
                let e = crate::group::GroupElement::generator_by_name(&aut, g).unwrap();
                sum.add_term(e.word().to_vec(), &rat("1"));
            }
            let direct = crate::algebra::expand_combination(&sum, level).unwrap();
            assert_eq!(grid.max_diff(&direct).unwrap(), 0.0, "level {level}");
        }
    }
}
