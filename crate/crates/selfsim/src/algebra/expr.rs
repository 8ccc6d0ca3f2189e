//! A small expression grammar for group-algebra combinations.
//!
//! The grammar accepted by [`parse_combination`]:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*        (juxtaposition multiplies)
//! unary   := ('-' | '+')* postfix
//! postfix := atom ('^' number | '\'')*
//! atom    := number | name | '(' expr ')'
//! number  := digits ['.' digits]                (exact rational literals)
//! ```
//!
//! Names resolve in order: bound parameter, the identity `e`, an exact
//! generator name, then a juxtaposed string of single-letter generator
//! names (so `bc` is the product b·c).  A trailing `'` inverts the last
//! generator letter; `^` raises to a nonnegative integer power; `/`
//! divides by a combination that must reduce to a nonzero scalar.
//!
//! The result is a formal combination of freely reduced words — group
//! relations beyond free cancellation are *not* applied here; they become
//! visible only under matrix expansion.

use super::element::AlgebraElement;
use super::scalar::{rational_from_str, Scalar};
use crate::error::{Error, Result};
use crate::group::{Gen, GroupElement, MealyAutomaton};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Quote,
    LParen,
    RParen,
}

fn err(at: usize, message: impl Into<String>) -> Error {
    Error::Expr {
        at,
        message: message.into(),
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>> {
    let mut toks = Vec::new();
    let mut i = 0;
    while i < input.len() {
        let at = i;
        let c = input[i..].chars().next().unwrap();
        i += c.len_utf8();
        match c {
            c if c.is_whitespace() => {}
            '+' => toks.push((Tok::Plus, at)),
            '-' | '−' => toks.push((Tok::Minus, at)),
            '*' | '·' => toks.push((Tok::Star, at)),
            '/' => toks.push((Tok::Slash, at)),
            '^' => toks.push((Tok::Caret, at)),
            '\'' => toks.push((Tok::Quote, at)),
            '(' => toks.push((Tok::LParen, at)),
            ')' => toks.push((Tok::RParen, at)),
            '0'..='9' => {
                let mut seen_dot = false;
                while i < input.len() {
                    let d = input.as_bytes()[i] as char;
                    if d.is_ascii_digit() || (d == '.' && !seen_dot) {
                        seen_dot |= d == '.';
                        i += 1;
                    } else {
                        break;
                    }
                }
                let text = &input[at..i];
                let value = rational_from_str(text)
                    .ok_or_else(|| err(at, format!("bad numeric literal `{text}`")))?;
                toks.push((Tok::Num(value), at));
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < input.len() {
                    let d = input.as_bytes()[i] as char;
                    if d.is_ascii_alphanumeric() || d == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Name(input[at..i].to_string()), at));
            }
            _ => {
                return Err(err(at, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(toks)
}

/// A parsed value: a combination, plus the generator word when the value
/// is a single bare word (the only shape `'` may invert).
struct Value<S: Scalar> {
    combo: AlgebraElement<S>,
    bare_word: Option<Vec<Gen>>,
}

struct Parser<'a, S: Scalar> {
    aut: &'a Arc<MealyAutomaton>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    params: &'a BTreeMap<String, S>,
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn at(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, at)| at)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<AlgebraElement<S>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement<S>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?)?;
                }
                Some(Tok::Slash) => {
                    let at = self.at();
                    self.bump();
                    let divisor = self.unary()?;
                    acc = divide(acc, &divisor, at)?;
                }
                // Juxtaposition: a following atom multiplies.
                Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<AlgebraElement<S>> {
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    negate = !negate;
                    self.bump();
                }
                Some(Tok::Plus) => {
                    self.bump();
                }
                _ => break,
            }
        }
        let value = self.postfix()?;
        Ok(if negate {
            value.scale(&S::zero().sub(&S::one()))
        } else {
            value
        })
    }

    fn postfix(&mut self) -> Result<AlgebraElement<S>> {
        let mut value = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Quote) => {
                    let at = self.at();
                    self.bump();
                    let Some(mut word) = value.bare_word.take() else {
                        return Err(err(
                            at,
                            "`'` inverts a generator letter, not a sum or scalar",
                        ));
                    };
                    // The quote binds to the last letter only, matching the
                    // rendered-word convention (ab' is a·b⁻¹); invert a whole
                    // word by quoting letterwise in reverse (b'a').
                    if let Some(last) = word.last_mut() {
                        last.1 = !last.1;
                    }
                    let g = GroupElement::from_word(self.aut.clone(), word);
                    value = Value {
                        combo: AlgebraElement::from_element(&g, S::one()),
                        bare_word: Some(g.word().to_vec()),
                    };
                }
                Some(Tok::Caret) => {
                    let at = self.at();
                    self.bump();
                    let exp_at = self.at();
                    let Some(Tok::Num(n)) = self.bump() else {
                        return Err(err(at, "`^` needs a nonnegative integer exponent"));
                    };
                    if !n.is_integer() {
                        return Err(err(exp_at, "exponent must be an integer"));
                    }
                    let exp = n.to_integer().to_u32().ok_or_else(|| {
                        err(exp_at, "exponent out of range (must fit in u32, ≥ 0)")
                    })?;
                    value = Value {
                        combo: value.combo.pow(exp)?,
                        bare_word: None,
                    };
                }
                _ => return Ok(value.combo),
            }
        }
    }

    fn atom(&mut self) -> Result<Value<S>> {
        let at = self.at();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Value {
                combo: AlgebraElement::one(self.aut.clone()).scale(&S::from_rational(&n)),
                bare_word: None,
            }),
            Some(Tok::Name(name)) => self.resolve(&name, at),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(Value {
                        combo: inner,
                        bare_word: None,
                    }),
                    _ => Err(err(at, "unclosed `(`")),
                }
            }
            Some(other) => Err(err(at, format!("unexpected token {other:?}"))),
            None => Err(err(at, "expected an expression, found end of input")),
        }
    }

    fn resolve(&mut self, name: &str, at: usize) -> Result<Value<S>> {
        if let Some(value) = self.params.get(name) {
            return Ok(Value {
                combo: AlgebraElement::one(self.aut.clone()).scale(value),
                bare_word: None,
            });
        }
        if name == "e" {
            return Ok(Value {
                combo: AlgebraElement::one(self.aut.clone()),
                bare_word: Some(Vec::new()),
            });
        }
        if let Some(id) = self.aut.state_id(name) {
            let word = vec![(id, false)];
            return Ok(Value {
                combo: AlgebraElement::from_element(
                    &GroupElement::from_word(self.aut.clone(), word.clone()),
                    S::one(),
                ),
                bare_word: Some(word),
            });
        }
        // A run of single-letter generator names multiplies out: `bc` is
        // the product b·c.
        let mut word: Vec<Gen> = Vec::new();
        for ch in name.chars() {
            let letter = ch.to_string();
            match self.aut.state_id(&letter) {
                Some(id) => word.push((id, false)),
                None => {
                    let generators: Vec<&str> = self
                        .aut
                        .generators()
                        .map(|id| self.aut.state(id).name.as_str())
                        .collect();
                    let params: Vec<&str> =
                        self.params.keys().map(|k| k.as_str()).collect();
                    return Err(err(
                        at,
                        format!(
                            "unknown name `{name}`: not a parameter {params:?}, not `e`, \
                             and `{letter}` is not a generator of {} {generators:?}",
                            self.aut.name()
                        ),
                    ));
                }
            }
        }
        let g = GroupElement::from_word(self.aut.clone(), word);
        Ok(Value {
            combo: AlgebraElement::from_element(&g, S::one()),
            bare_word: Some(g.word().to_vec()),
        })
    }
}

fn divide<S: Scalar>(
    lhs: AlgebraElement<S>,
    divisor: &AlgebraElement<S>,
    at: usize,
) -> Result<AlgebraElement<S>> {
    let mut terms = divisor.terms();
    let scalar = match (terms.next(), terms.next()) {
        (Some((word, coeff)), None) if word.is_empty() => coeff.clone(),
        _ => {
            return Err(err(
                at,
                "`/` divides by a scalar only (a combination reducing to a \
                 multiple of the identity)",
            ))
        }
    };
    let inv = S::one()
        .div(&scalar)
        .ok_or_else(|| err(at, "division by zero"))?;
    Ok(lhs.scale(&inv))
}

/// Parse `input` over the automaton's generators into a group-algebra
/// combination, with `params` binding free names to scalar values.
pub fn parse_combination<S: Scalar>(
    aut: &Arc<MealyAutomaton>,
    input: &str,
    params: &BTreeMap<String, S>,
) -> Result<AlgebraElement<S>> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut parser = Parser {
        aut,
        toks,
        pos: 0,
        end: input.len(),
        params,
    };
    let value = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(err(
            parser.at(),
            "unexpected trailing input after the expression",
        ));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    type Rat = BigRational;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    fn no_params() -> BTreeMap<String, Rat> {
        BTreeMap::new()
    }

    fn parse(input: &str) -> AlgebraElement<Rat> {
        let aut = catalog::load("grigorchuk").unwrap();
        parse_combination(&aut, input, &no_params()).unwrap()
    }

    #[test]
    fn sums_and_words_match_api_construction() {
        let aut = catalog::load("grigorchuk").unwrap();
        let a = GroupElement::generator_by_name(&aut, "a").unwrap();
        let b = GroupElement::generator_by_name(&aut, "b").unwrap();
        let c = GroupElement::generator_by_name(&aut, "c").unwrap();
        let d = GroupElement::generator_by_name(&aut, "d").unwrap();
        let sum = AlgebraElement::from_element(&a, rat(1, 1))
            .add(&AlgebraElement::from_element(&b, rat(1, 1)))
            .unwrap()
            .add(&AlgebraElement::from_element(&c, rat(1, 1)))
            .unwrap()
            .add(&AlgebraElement::from_element(&d, rat(1, 1)))
            .unwrap();
        assert_eq!(parse("a+b+c+d"), sum);
        let word = AlgebraElement::from_element(&b.mul(&c).unwrap(), rat(2, 1));
        assert_eq!(parse("2bc"), word);
        assert_eq!(parse("2*b*c"), word);
        assert_eq!(parse("bc+bc"), word);
    }

    #[test]
    fn quotes_invert_the_last_letter() {
        let aut = catalog::load("basilica").unwrap();
        let a = GroupElement::generator_by_name(&aut, "a").unwrap();
        let b = GroupElement::generator_by_name(&aut, "b").unwrap();
        let expect = AlgebraElement::from_element(&a.mul(&b.inverse()).unwrap(), rat(1, 1));
        assert_eq!(
            parse_combination(&aut, "ab'", &no_params()).unwrap(),
            expect
        );
        // Double quote cancels.
        assert_eq!(
            parse_combination(&aut, "a''", &no_params()).unwrap(),
            AlgebraElement::from_element(&a, rat(1, 1))
        );
        // Quoting the identity is a no-op.
        assert_eq!(
            parse_combination::<Rat>(&aut, "e'", &no_params()).unwrap(),
            AlgebraElement::one(aut.clone())
        );
    }

    #[test]
    fn scalars_division_and_powers() {
        let aut = catalog::load("grigorchuk").unwrap();
        // α = (b + c + d − 1)/2, the paper-style half-sum.
        let alpha = parse("(b+c+d-e)/2");
        let by_hand = parse("b+c+d")
            .sub(&AlgebraElement::one(aut.clone()))
            .unwrap()
            .scale(&rat(1, 2));
        assert_eq!(alpha, by_hand);
        // 1/2 as a literal is division of scalars.
        assert_eq!(parse("1/2 e"), AlgebraElement::one(aut.clone()).scale(&rat(1, 2)));
        // Powers square combinations.
        assert_eq!(parse("(a+e)^2"), parse("(a+e)(a+e)"));
        assert_eq!(parse("a^0"), AlgebraElement::one(aut));
        // Decimals are exact rationals.
        assert_eq!(parse("0.25a"), parse("a/4"));
    }

    #[test]
    fn unary_signs_fold() {
        assert_eq!(parse("-a"), parse("a").scale(&rat(-1, 1)));
        assert_eq!(parse("--a"), parse("a"));
        assert_eq!(parse("3-+2e"), parse("e"));
        assert_eq!(parse("-(a+b)"), parse("a+b").scale(&rat(-1, 1)));
    }

    #[test]
    fn parameters_bind_scalars() {
        let aut = catalog::load("grigorchuk").unwrap();
        let mut params = BTreeMap::new();
        params.insert("lambda".to_string(), rat(-3, 2));
        params.insert("mu".to_string(), rat(1, 3));
        let got = parse_combination(&aut, "lambda*a - (mu+1)e", &params).unwrap();
        let want = parse("a").scale(&rat(-3, 2)).sub(
            &AlgebraElement::one(aut.clone()).scale(&rat(4, 3)),
        )
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn free_reduction_happens_but_relations_do_not() {
        // a·a⁻¹ cancels freely, while the group relation a² = e is not
        // applied to the word aa: the two stay distinct combinations.
        let aut = catalog::load("grigorchuk").unwrap();
        let cancel = parse_combination::<Rat>(&aut, "aa'", &no_params()).unwrap();
        assert_eq!(cancel, AlgebraElement::one(aut.clone()));
        let square = parse_combination::<Rat>(&aut, "aa", &no_params()).unwrap();
        assert_ne!(square, AlgebraElement::one(aut));
        assert_eq!(square.num_terms(), 1);
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        let aut = catalog::load("grigorchuk").unwrap();
        let at = |input: &str| -> usize {
            match parse_combination::<Rat>(&aut, input, &no_params()) {
                Err(Error::Expr { at, .. }) => at,
                other => panic!("expected Expr error for `{input}`, got {other:?}"),
            }
        };
        assert_eq!(at("a + q"), 4);
        assert_eq!(at("(a+b"), 0);
        assert_eq!(at("a )"), 2);
        assert_eq!(at("(a+b)'"), 5);
        assert_eq!(at("a^b"), 1);
        assert_eq!(at("a/(b+c)"), 1);
        assert_eq!(at("a/0"), 1);
        assert_eq!(at(""), 0);
        assert_eq!(at("a ? b"), 2);
    }

    #[test]
    fn works_over_floating_scalars() {
        let aut = catalog::load("hanoi").unwrap();
        let got =
            parse_combination::<f64>(&aut, "a+b+c-3e", &BTreeMap::new()).unwrap();
        let sum = parse_combination::<f64>(&aut, "a+b+c", &BTreeMap::new()).unwrap();
        let want = sum
            .sub(&AlgebraElement::one(aut.clone()).scale(&3.0))
            .unwrap();
        assert_eq!(got, want);
    }
}
