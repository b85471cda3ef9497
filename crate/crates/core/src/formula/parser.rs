//! Recursive-descent parser over a byte-offset token stream.

use super::{mk_named, Formula, FormulaError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Arrow,
    Bar,
    Amp,
    Tilde,
    Dia,
    Box,
    Exists,
    Forall,
    LParen,
    RParen,
    True,
    False,
    Atom(String),
    Name(String),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Atom(a) => format!("atom `{a}`"),
        Tok::Name(n) => format!("`{n}`"),
        Tok::End => "end of input".into(),
        other => format!("{other:?}"),
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Dia
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 2;
                Tok::Box
            }
            b'|' | b'&' | b'~' | b'E' | b'A' | b'(' | b')' => {
                i += 1;
                match c {
                    b'|' => Tok::Bar,
                    b'&' => Tok::Amp,
                    b'~' => Tok::Tilde,
                    b'E' => Tok::Exists,
                    b'A' => Tok::Forall,
                    b'(' => Tok::LParen,
                    _ => Tok::RParen,
                }
            }
            b'p' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Atom(text[start..i].to_string())
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    word => Tok::Name(word.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    named: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Tok::Tilde => Formula::not,
            Tok::Dia => Formula::dia,
            Tok::Box => Formula::boxed,
            Tok::Exists => Formula::exists,
            Tok::Forall => Formula::forall,
            _ => return self.primary(),
        };
        self.bump();
        Ok(wrap(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        let at = self.offset();
        match self.bump() {
            Tok::Atom(a) => Ok(Formula::Var(a)),
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::LParen => {
                let inner = self.implication()?;
                let close = self.offset();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    other => Err(syntax(close, format!("expected `)`, found {}", describe(&other)))),
                }
            }
            Tok::Name(n) if self.named => mk_named(&n).map_err(|e| syntax(at, e.to_string())),
            other => Err(syntax(at, format!("expected a formula, found {}", describe(&other)))),
        }
    }
}

fn run(text: &str, named: bool) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        named,
    };
    let f = p.implication()?;
    match p.peek() {
        Tok::End => Ok(f),
        other => Err(syntax(p.offset(), format!("unexpected {}", describe(other)))),
    }
}

/// Parses the core grammar: atoms `p`, `p1`, ..., `true`, `false`,
/// unaries `~ <> [] E A`, then `&`, `|`, and right-associative `->`.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    run(text, false)
}

/// Like [`parse`], also accepting `com_l`, `com_r`, `casari` and `bd_N`
/// wherever an atom may appear.
pub fn parse_extended(text: &str) -> Result<Formula, FormulaError> {
    run(text, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::var("p")
    }

    #[test]
    fn spec_examples() {
        assert_eq!(
            parse("<>Ep -> E<>p").unwrap(),
            Formula::implies(Formula::dia(Formula::exists(p())), Formula::exists(Formula::dia(p())))
        );
        assert_eq!(parse("p").unwrap(), p());
        assert_eq!(
            parse("[] A ([] ([] p -> [] A p) -> [] A p) -> [] A p").unwrap(),
            mk_named("casari").unwrap()
        );
    }

    #[test]
    fn associativity_and_precedence() {
        let (a, b, c) = (Formula::var("p1"), Formula::var("p2"), Formula::var("p3"));
        assert_eq!(
            parse("p1 -> p2 -> p3").unwrap(),
            Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone()))
        );
        assert_eq!(
            parse("p1 | p2 & p3").unwrap(),
            Formula::or(a.clone(), Formula::and(b.clone(), c.clone()))
        );
        assert_eq!(
            parse("p1 & p2 & p3").unwrap(),
            Formula::and(Formula::and(a.clone(), b.clone()), c)
        );
        assert_eq!(parse("~p1 & p2").unwrap(), Formula::and(Formula::not(a), b));
        assert_eq!(parse("EAtrue").unwrap(), Formula::exists(Formula::forall(Formula::True)));
    }

    #[test]
    fn errors_carry_offsets() {
        let off = |s: &str| match parse(s) {
            Err(FormulaError::Syntax { offset, .. }) => offset,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(off(""), 0);
        assert_eq!(off("p &"), 3);
        assert_eq!(off("(p"), 2);
        assert_eq!(off("p q"), 2);
        assert_eq!(off("p)"), 1);
        assert_eq!(off("casari"), 0);
        assert_eq!(off("p -> #"), 5);
    }

    #[test]
    fn extended_names() {
        assert_eq!(parse_extended("casari").unwrap(), mk_named("casari").unwrap());
        assert_eq!(
            parse_extended("~bd_2 & com_r").unwrap(),
            Formula::and(Formula::not(mk_named("bd_2").unwrap()), mk_named("com_r").unwrap())
        );
        assert!(parse_extended("bd_0").is_err());
        assert!(parse_extended("foo").is_err());
    }
}
