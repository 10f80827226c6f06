//! Unit-free MLL formulas over a single atom.
//!
//! The text syntax used by the structure file format is fully parenthesized:
//! `p`, `~p`, `(A * B)` for tensor and `(A # B)` for par.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// Subformulas are shared, so building `A * B` from existing `A` and `B` is
/// constant time and a structure's formulas take linear space even when
/// they nest deeply. Equality short-cuts on shared subterms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Pos,
    Neg,
    Tensor(Arc<Formula>, Arc<Formula>),
    Par(Arc<Formula>, Arc<Formula>),
}

fn leaf() -> Arc<Formula> {
    static LEAF: OnceLock<Arc<Formula>> = OnceLock::new();
    LEAF.get_or_init(|| Arc::new(Formula::Pos)).clone()
}

// Deep formulas (long par chains) would overflow the stack with the
// default recursive drop.
impl Drop for Formula {
    fn drop(&mut self) {
        let mut stack = Vec::new();
        if let Formula::Tensor(a, b) | Formula::Par(a, b) = self {
            stack.push(std::mem::replace(a, leaf()));
            stack.push(std::mem::replace(b, leaf()));
        }
        while let Some(child) = stack.pop() {
            if let Ok(Formula::Tensor(a, b) | Formula::Par(a, b)) = Arc::try_unwrap(child).as_mut()
            {
                stack.push(std::mem::replace(a, leaf()));
                stack.push(std::mem::replace(b, leaf()));
            }
        }
    }
}

impl Formula {
    pub fn tensor(left: Formula, right: Formula) -> Formula {
        Formula::Tensor(Arc::new(left), Arc::new(right))
    }

    pub fn par(left: Formula, right: Formula) -> Formula {
        Formula::Par(Arc::new(left), Arc::new(right))
    }

    /// Linear negation. Binary connectives swap and reverse their operands:
    /// `(A * B)^ = B^ # A^`.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Pos => Formula::Neg,
            Formula::Neg => Formula::Pos,
            Formula::Tensor(a, b) => Formula::par(b.negate(), a.negate()),
            Formula::Par(a, b) => Formula::tensor(b.negate(), a.negate()),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Pos | Formula::Neg)
    }

    /// Number of connectives plus atoms.
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            n += 1;
            if let Formula::Tensor(a, b) | Formula::Par(a, b) = f {
                stack.push(b);
                stack.push(a);
            }
        }
        n
    }

    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        Parser::new(text, AtomNames::Strict).parse_all()
    }

    /// Like [`Formula::parse`], but any identifier is accepted as an atom and
    /// its name is dropped. Checking correctness only depends on polarity.
    pub fn parse_erasing_names(text: &str) -> Result<Formula, FormulaError> {
        Parser::new(text, AtomNames::Erase).parse_all()
    }
}

enum Piece<'a> {
    Sub(&'a Formula),
    Text(&'static str),
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut stack = vec![Piece::Sub(self)];
        while let Some(piece) = stack.pop() {
            match piece {
                Piece::Text(t) => f.write_str(t)?,
                Piece::Sub(Formula::Pos) => f.write_str("p")?,
                Piece::Sub(Formula::Neg) => f.write_str("~p")?,
                Piece::Sub(Formula::Tensor(a, b) | Formula::Par(a, b)) => {
                    let op = if matches!(piece, Piece::Sub(Formula::Tensor(..))) {
                        " * "
                    } else {
                        " # "
                    };
                    stack.extend([
                        Piece::Text(")"),
                        Piece::Sub(b),
                        Piece::Text(op),
                        Piece::Sub(a),
                    ]);
                    f.write_str("(")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("unexpected end of formula")]
    UnexpectedEnd,
    #[error("unexpected character {found:?} at offset {offset}")]
    Unexpected { found: char, offset: usize },
    #[error("unknown atom {name:?} at offset {offset} (only `p` is allowed)")]
    UnknownAtom { name: String, offset: usize },
    #[error("trailing input at offset {offset}")]
    Trailing { offset: usize },
    #[error("formula nested deeper than {MAX_DEPTH}")]
    TooDeep,
}

/// Nesting limit for parsed formulas; the parser is recursive.
pub const MAX_DEPTH: usize = 4096;

#[derive(Clone, Copy, PartialEq, Eq)]
enum AtomNames {
    Strict,
    Erase,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: AtomNames,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, names: AtomNames) -> Self {
        Parser { src, pos: 0, names }
    }

    fn parse_all(mut self) -> Result<Formula, FormulaError> {
        let f = self.formula(0)?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(FormulaError::Trailing { offset: self.pos });
        }
        Ok(f)
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<(), FormulaError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(FormulaError::Unexpected {
                found: c,
                offset: self.pos,
            }),
            None => Err(FormulaError::UnexpectedEnd),
        }
    }

    fn formula(&mut self, depth: usize) -> Result<Formula, FormulaError> {
        if depth > MAX_DEPTH {
            return Err(FormulaError::TooDeep);
        }
        self.skip_ws();
        match self.peek() {
            None => Err(FormulaError::UnexpectedEnd),
            Some('(') => {
                self.pos += 1;
                let left = self.formula(depth + 1)?;
                self.skip_ws();
                let op = match self.peek() {
                    Some(c @ ('*' | '#')) => {
                        self.pos += 1;
                        c
                    }
                    Some(c) => {
                        return Err(FormulaError::Unexpected {
                            found: c,
                            offset: self.pos,
                        })
                    }
                    None => return Err(FormulaError::UnexpectedEnd),
                };
                let right = self.formula(depth + 1)?;
                self.expect(')')?;
                Ok(if op == '*' {
                    Formula::tensor(left, right)
                } else {
                    Formula::par(left, right)
                })
            }
            Some('~') => {
                self.pos += 1;
                self.atom().map(|()| Formula::Neg)
            }
            Some(_) => self.atom().map(|()| Formula::Pos),
        }
    }

    fn atom(&mut self) -> Result<(), FormulaError> {
        let start = self.pos;
        let len = self.src[start..]
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
            .map_or(self.src.len() - start, |(i, _)| i);
        if len == 0 {
            return match self.peek() {
                Some(c) => Err(FormulaError::Unexpected {
                    found: c,
                    offset: start,
                }),
                None => Err(FormulaError::UnexpectedEnd),
            };
        }
        let name = &self.src[start..start + len];
        if self.names == AtomNames::Strict && name != "p" {
            return Err(FormulaError::UnknownAtom {
                name: name.to_string(),
                offset: start,
            });
        }
        self.pos += len;
        Ok(())
    }
}
