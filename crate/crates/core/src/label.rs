//! Text syntax for standard objects and for character expressions.
//!
//! Labels:
//!
//! ```text
//! label  := kind "(" arg ")" | pkind "(" parabolic "," arg ")"
//! kind   := "L" | "Delta" | "Δ" | "Nabla" | "∇" | "P" | "I"
//! pkind  := "DeltaP" | "NablaP"
//! arg    := word | "[" int ("," int)* "]"
//! word   := "e" | ("s" | "t")+            weight is word . 0
//! parabolic := "alpha" | "beta" | "all" | "none"
//! ```
//!
//! The display forms `Δ^{p_β}(s)` and `∇^{p_α}(e)` are accepted as well.
//!
//! Expressions combine labels with `+` (also `⊕`), `*` (also `⊗`, `·`),
//! non-negative integers and parentheses. `0` is the zero module.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::category::CategoryO;
use crate::charlat::Character;
use crate::root_data::{RootSystem, Weight};
use crate::standard_chars::{StandardKind, StandardLabel, VermaExpansion};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

/// Orbit name (`st`) for weights in the dot-orbit of 0, coordinates otherwise.
pub fn weight_name(rs: &RootSystem, w: Weight) -> String {
    rs.orbit_name(w).unwrap_or_else(|| w.to_string())
}

pub(crate) fn weight_json(rs: &RootSystem, w: Weight) -> Value {
    match rs.orbit_name(w) {
        Some(name) => json!(name),
        None => json!(w.coords()),
    }
}

/// Display form of a label, e.g. `L(st)`, `Δ(e)`, `Δ^{p_β}(s)`.
pub fn label_name(rs: &RootSystem, label: &StandardLabel) -> String {
    let arg = weight_name(rs, label.weight);
    let parabolic = |sym: &str| {
        let p = label.parabolic.as_ref().expect("parabolic label");
        format!("{sym}^{{p_{}}}({arg})", p.symbol())
    };
    match label.kind {
        StandardKind::Simple => format!("L({arg})"),
        StandardKind::Verma => format!("Δ({arg})"),
        StandardKind::DualVerma => format!("∇({arg})"),
        StandardKind::Projective => format!("P({arg})"),
        StandardKind::Injective => format!("I({arg})"),
        StandardKind::ParabolicVerma => parabolic("Δ"),
        StandardKind::ParabolicDualVerma => parabolic("∇"),
    }
}

/// Sum with multiplicities in display form, e.g. `L(st)+L(ts)+2·L(sts)`;
/// `0` when empty.
pub fn render_sum<I: IntoIterator<Item = (String, u64)>>(terms: I) -> String {
    let parts: Vec<String> = terms
        .into_iter()
        .filter(|(_, m)| *m > 0)
        .map(|(name, m)| if m == 1 { name } else { format!("{m}·{name}") })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Parsed character expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Label(StandardLabel),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
}

impl Expr {
    pub fn character(&self, o: &CategoryO) -> Result<Character, ExprError> {
        let rs = o.root_system().clone();
        Ok(match self {
            Expr::Int(n) => Character::finite(
                rs.clone(),
                [(rs.zero(), *n)]
                    .into_iter()
                    .filter(|(_, n)| *n > 0)
                    .collect(),
            ),
            Expr::Label(l) => o.character_of(l)?,
            Expr::Sum(terms) => {
                let chars = terms
                    .iter()
                    .map(|t| t.character(o))
                    .collect::<Result<Vec<_>, _>>()?;
                Character::sum(rs, chars.iter().map(|c| (1, c)))
            }
            Expr::Product(factors) => {
                let mut acc = Expr::Int(1).character(o)?;
                let mut scalar = 1;
                for f in factors {
                    match f {
                        Expr::Int(n) => scalar *= n,
                        other => acc = acc.tensor(&other.character(o)?),
                    }
                }
                if scalar == 1 {
                    acc
                } else {
                    acc.scale(scalar)
                }
            }
        })
    }

    /// Verma expansion of a sum of (scaled) labels. Tensor products of
    /// non-scalars have no finite expansion and are rejected.
    pub fn expansion(&self, o: &CategoryO) -> Result<VermaExpansion, ExprError> {
        match self {
            Expr::Int(0) => Ok(VermaExpansion::new()),
            Expr::Int(_) => Err(ExprError::NotExpandable),
            Expr::Label(l) => Ok(o.expansion_of(l)?),
            Expr::Sum(terms) => {
                let mut acc = VermaExpansion::new();
                for t in terms {
                    acc.add_scaled(&t.expansion(o)?, 1);
                }
                Ok(acc)
            }
            Expr::Product(factors) => {
                let mut scalar = 1i64;
                let mut inner = None;
                for f in factors {
                    match f {
                        Expr::Int(n) => scalar *= *n as i64,
                        other if inner.is_none() => inner = Some(other.expansion(o)?),
                        _ => return Err(ExprError::NotExpandable),
                    }
                }
                let mut acc = VermaExpansion::new();
                if let Some(e) = inner {
                    acc.add_scaled(&e, scalar);
                }
                Ok(acc)
            }
        }
    }

    /// Labels with multiplicities for a sum of (scaled) labels.
    pub fn terms(&self) -> Result<Vec<(StandardLabel, u64)>, ExprError> {
        match self {
            Expr::Int(0) => Ok(vec![]),
            Expr::Int(_) => Err(ExprError::NotExpandable),
            Expr::Label(l) => Ok(vec![(l.clone(), 1)]),
            Expr::Sum(terms) => {
                let mut out = Vec::new();
                for t in terms {
                    out.extend(t.terms()?);
                }
                Ok(out)
            }
            Expr::Product(factors) => {
                let mut scalar = 1;
                let mut inner = None;
                for f in factors {
                    match f {
                        Expr::Int(n) => scalar *= n,
                        other if inner.is_none() => inner = Some(other.terms()?),
                        _ => return Err(ExprError::NotExpandable),
                    }
                }
                Ok(inner
                    .unwrap_or_default()
                    .into_iter()
                    .map(|(l, m)| (l, m * scalar))
                    .collect())
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error(transparent)]
    Standard(#[from] crate::standard_chars::StandardError),
    #[error("expression is not a sum of standard objects")]
    NotExpandable,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Label(l) => write!(f, "{:?}({})", l.kind, l.weight),
            Expr::Sum(t) => {
                let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Expr::Product(t) => {
                let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                write!(f, "({})", parts.join(" * "))
            }
        }
    }
}

struct Parser<'a> {
    rs: &'a RootSystem,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(rs: &'a RootSystem, input: &str) -> Self {
        Parser {
            rs,
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected `{c}`"))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let want: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&want) {
            self.pos += want.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .or_else(|_| err(start, format!("expected an integer, found `{text}`")))
    }

    fn weight_arg(&mut self) -> Result<Weight, ParseError> {
        let start = self.pos;
        if self.eat('[') {
            let mut coords = vec![self.int()?];
            while self.eat(',') {
                coords.push(self.int()?);
            }
            self.expect(']')?;
            return self
                .rs
                .weight(&coords)
                .or_else(|e| err(start, e.to_string()));
        }
        let word = self.ident();
        if word.is_empty() {
            return err(self.pos, "expected a Weyl group word or a weight");
        }
        let w = self
            .rs
            .weyl()
            .from_word(&word)
            .or_else(|e| err(start, e.to_string()))?;
        Ok(self.rs.dot_action(w, self.rs.zero()))
    }

    fn parabolic_symbol(&mut self) -> Result<crate::root_data::ParabolicData, ParseError> {
        let start = self.pos;
        let name = match self.peek() {
            Some('α') => {
                self.pos += 1;
                "alpha".to_string()
            }
            Some('β') => {
                self.pos += 1;
                "beta".to_string()
            }
            _ => self.ident(),
        };
        self.rs
            .parabolic_by_name(&name)
            .or_else(|e| err(start, e.to_string()))
    }

    fn label(&mut self) -> Result<StandardLabel, ParseError> {
        let start = self.pos;
        let (kind, mut parabolic) = if self.eat('Δ') || self.eat('∇') {
            let dual = self.chars[self.pos - 1] == '∇';
            if self.eat_str("^{p_") {
                let p = self.parabolic_symbol()?;
                self.expect('}')?;
                let kind = if dual {
                    StandardKind::ParabolicDualVerma
                } else {
                    StandardKind::ParabolicVerma
                };
                (kind, Some(p))
            } else if dual {
                (StandardKind::DualVerma, None)
            } else {
                (StandardKind::Verma, None)
            }
        } else {
            let name = self.ident();
            let kind = match name.as_str() {
                "L" => StandardKind::Simple,
                "Delta" => StandardKind::Verma,
                "Nabla" => StandardKind::DualVerma,
                "P" => StandardKind::Projective,
                "I" => StandardKind::Injective,
                "DeltaP" => StandardKind::ParabolicVerma,
                "NablaP" => StandardKind::ParabolicDualVerma,
                "" => return err(start, "expected a label"),
                other => return err(start, format!("unknown module kind `{other}`")),
            };
            (kind, None)
        };
        self.expect('(')?;
        if kind.is_parabolic() && parabolic.is_none() {
            parabolic = Some(self.parabolic_symbol()?);
            self.expect(',')?;
        }
        self.skip_ws();
        let arg_pos = self.pos;
        let weight = self.weight_arg()?;
        self.expect(')')?;
        StandardLabel::new(self.rs, kind, weight, parabolic)
            .or_else(|e| err(arg_pos, e.to_string()))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.int()?;
                u64::try_from(n)
                    .map(Expr::Int)
                    .or_else(|_| err(start, "negative multiplicity"))
            }
            None => err(self.pos, "unexpected end of input"),
            _ => self.label().map(Expr::Label),
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.eat('*') || self.eat('⊗') || self.eat('·') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Expr::Product(factors)
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.eat('+') || self.eat('⊕') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Expr::Sum(terms)
        })
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => err(self.pos, format!("unexpected `{c}`")),
        }
    }
}

pub fn parse_label(rs: &RootSystem, input: &str) -> Result<StandardLabel, ParseError> {
    let mut p = Parser::new(rs, input);
    let l = p.label()?;
    p.finish()?;
    Ok(l)
}

pub fn parse_expr(rs: &RootSystem, input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(rs, input);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::RootType;

    #[test]
    fn labels_round_trip_through_display() {
        let o = CategoryO::new(RootType::A2);
        let rs = o.root_system();
        for text in [
            "L(e)",
            "L(s)",
            "Delta(st)",
            "Nabla(sts)",
            "P(t)",
            "I(ts)",
            "DeltaP(beta, s)",
            "NablaP(alpha,t)",
            "L([2,1])",
        ] {
            let l = parse_label(rs, text).unwrap();
            let shown = label_name(rs, &l);
            assert_eq!(parse_label(rs, &shown).unwrap(), l, "{text} -> {shown}");
        }
        let l = parse_label(rs, "DeltaP(beta, s)").unwrap();
        assert_eq!(label_name(rs, &l), "Δ^{p_β}(s)");
        assert_eq!(l.weight, o.w0("s"));
    }

    #[test]
    fn label_errors_have_positions() {
        let o = CategoryO::new(RootType::A2);
        let rs = o.root_system();
        assert_eq!(parse_label(rs, "Q(s)").unwrap_err().pos, 0);
        assert_eq!(parse_label(rs, "L(sx)").unwrap_err().pos, 2);
        assert_eq!(parse_label(rs, "L(s").unwrap_err().pos, 3);
        // t.0 is not beta-dominant
        let e = parse_label(rs, "DeltaP(beta, t)").unwrap_err();
        assert_eq!(e.pos, 13);
        assert!(parse_label(rs, "L([1])").is_err());
        assert!(parse_label(rs, "P([-1,1])").is_err());
    }

    #[test]
    fn expressions() {
        let o = CategoryO::new(RootType::A2);
        let rs = o.root_system();
        let e = parse_expr(rs, "L(s)*L(t)").unwrap();
        assert!(matches!(e, Expr::Product(ref f) if f.len() == 2));
        let e = parse_expr(rs, "Delta(ts)+P(t)").unwrap();
        let exp = e.expansion(&o).unwrap();
        assert_eq!(exp.coefficients().len(), 3);
        let e = parse_expr(rs, "L(st)+L(ts)+2·L(sts)").unwrap();
        let terms = e.terms().unwrap();
        assert_eq!(terms[2].1, 2);
        assert!(parse_expr(rs, "0")
            .unwrap()
            .expansion(&o)
            .unwrap()
            .is_zero());
        assert!(parse_expr(rs, "L(s)*L(t)").unwrap().expansion(&o).is_err());
        assert_eq!(parse_expr(rs, "L(s) +").unwrap_err().pos, 6);
    }

    #[test]
    fn rendering() {
        assert_eq!(
            render_sum([
                ("L(st)".into(), 1),
                ("L(ts)".into(), 1),
                ("L(sts)".into(), 2)
            ]),
            "L(st)+L(ts)+2·L(sts)"
        );
        assert_eq!(render_sum(Vec::<(String, u64)>::new()), "0");
    }
}
