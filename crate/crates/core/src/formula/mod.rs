//! The object language: Booleans, `<>`/`[]` for `R` and `E`/`A` for the
//! equivalence.

mod parser;

pub use parser::{parse, parse_extended};

use indexmap::IndexSet;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("bd_n needs n >= 1")]
    BdZero,
    #[error("unknown named formula `{0}`")]
    UnknownName(String),
}

/// Owned child pointer; `Box` is taken by the modal variant.
type Child = std::boxed::Box<Formula>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    True,
    False,
    Not(Child),
    And(Child, Child),
    Or(Child, Child),
    Implies(Child, Child),
    Dia(Child),
    Box(Child),
    Exists(Child),
    Forall(Child),
}

use Formula::*;

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Var(name.into())
    }
    pub fn not(a: Formula) -> Self {
        Not(Child::new(a))
    }
    pub fn and(a: Formula, b: Formula) -> Self {
        And(Child::new(a), Child::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Self {
        Or(Child::new(a), Child::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Self {
        Implies(Child::new(a), Child::new(b))
    }
    pub fn dia(a: Formula) -> Self {
        Dia(Child::new(a))
    }
    pub fn boxed(a: Formula) -> Self {
        Box(Child::new(a))
    }
    pub fn exists(a: Formula) -> Self {
        Exists(Child::new(a))
    }
    pub fn forall(a: Formula) -> Self {
        Forall(Child::new(a))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Var(_) | True | False => vec![],
            Not(a) | Dia(a) | Box(a) | Exists(a) | Forall(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) => vec![a, b],
        }
    }

    /// Sorted variable names.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(f: &Formula, out: &mut BTreeSet<String>) {
            if let Var(p) = f {
                out.insert(p.clone());
            }
            for c in f.children() {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    /// Height of the syntax tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Node count.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Rewrites `[]` as `~<>~` and `A` as `~E~`; nothing else.
    pub fn desugar(&self) -> Formula {
        match self {
            Var(_) | True | False => self.clone(),
            Not(a) => Formula::not(a.desugar()),
            And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Implies(a, b) => Formula::implies(a.desugar(), b.desugar()),
            Dia(a) => Formula::dia(a.desugar()),
            Exists(a) => Formula::exists(a.desugar()),
            Box(a) => Formula::not(Formula::dia(Formula::not(a.desugar()))),
            Forall(a) => Formula::not(Formula::exists(Formula::not(a.desugar()))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Implies(..) => 1,
            Or(..) => 2,
            And(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Formula {
    /// Minimal parentheses; `|`, `&` group to the left and `->` to the
    /// right, so printing then parsing gives back the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, x: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        let p = self.precedence();
        match self {
            Var(v) => f.write_str(v),
            True => f.write_str("true"),
            False => f.write_str("false"),
            Not(a) | Dia(a) | Box(a) | Exists(a) | Forall(a) => {
                f.write_str(match self {
                    Not(_) => "~",
                    Dia(_) => "<>",
                    Box(_) => "[]",
                    Exists(_) => "E",
                    _ => "A",
                })?;
                wrap(f, a, a.precedence() < 4)
            }
            And(a, b) | Or(a, b) => {
                wrap(f, a, a.precedence() < p)?;
                f.write_str(if matches!(self, And(..)) { " & " } else { " | " })?;
                wrap(f, b, b.precedence() <= p)
            }
            Implies(a, b) => {
                wrap(f, a, a.precedence() <= p)?;
                f.write_str(" -> ")?;
                wrap(f, b, false)
            }
        }
    }
}

/// Subformulas in post-order, each listed once at its first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubformulaSet {
    items: IndexSet<Formula>,
}

impl SubformulaSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.items.contains(f)
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.items.get_index_of(f)
    }

    pub fn get(&self, i: usize) -> Option<&Formula> {
        self.items.get_index(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.items.iter()
    }
}

impl<'a> IntoIterator for &'a SubformulaSet {
    type Item = &'a Formula;
    type IntoIter = indexmap::set::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

pub fn subformulas(phi: &Formula) -> SubformulaSet {
    fn go(f: &Formula, out: &mut IndexSet<Formula>) {
        for c in f.children() {
            go(c, out);
        }
        out.insert(f.clone());
    }
    let mut items = IndexSet::new();
    go(phi, &mut items);
    SubformulaSet { items }
}

/// `[]a` becomes `a & []a`, `<>a` becomes `a | <>a`; every other
/// connective is kept.
pub fn boxplus_translate(phi: &Formula) -> Formula {
    match phi {
        Var(_) | True | False => phi.clone(),
        Not(a) => Formula::not(boxplus_translate(a)),
        And(a, b) => Formula::and(boxplus_translate(a), boxplus_translate(b)),
        Or(a, b) => Formula::or(boxplus_translate(a), boxplus_translate(b)),
        Implies(a, b) => Formula::implies(boxplus_translate(a), boxplus_translate(b)),
        Exists(a) => Formula::exists(boxplus_translate(a)),
        Forall(a) => Formula::forall(boxplus_translate(a)),
        Box(a) => {
            let t = boxplus_translate(a);
            Formula::and(t.clone(), Formula::boxed(t))
        }
        Dia(a) => {
            let t = boxplus_translate(a);
            Formula::or(t.clone(), Formula::dia(t))
        }
    }
}

/// The depth-`n` formula over fresh variables `p1..pn`.
pub fn mk_bd(n: usize) -> Result<Formula, FormulaError> {
    if n == 0 {
        return Err(FormulaError::BdZero);
    }
    let p = |i: usize| Formula::var(format!("p{i}"));
    let mut bd = Formula::implies(Formula::dia(Formula::boxed(p(1))), p(1));
    for i in 2..=n {
        bd = Formula::implies(
            Formula::dia(Formula::and(Formula::boxed(p(i)), Formula::not(bd))),
            p(i),
        );
    }
    Ok(bd)
}

/// `com_l`, `com_r`, `casari`, or `bd_N`.
pub fn mk_named(name: &str) -> Result<Formula, FormulaError> {
    let p = || Formula::var("p");
    let box_all_p = || Formula::boxed(Formula::forall(p()));
    match name {
        "com_l" => Ok(Formula::implies(Formula::exists(Formula::dia(p())), Formula::dia(Formula::exists(p())))),
        "com_r" => Ok(Formula::implies(Formula::dia(Formula::exists(p())), Formula::exists(Formula::dia(p())))),
        "casari" => {
            let inner = Formula::implies(Formula::boxed(Formula::implies(Formula::boxed(p()), box_all_p())), box_all_p());
            Ok(Formula::implies(Formula::boxed(Formula::forall(inner)), box_all_p()))
        }
        _ => match name.strip_prefix("bd_").map(str::parse::<usize>) {
            Some(Ok(n)) => mk_bd(n),
            _ => Err(FormulaError::UnknownName(name.to_string())),
        },
    }
}
