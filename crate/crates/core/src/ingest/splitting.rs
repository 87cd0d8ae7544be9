//! The appendix notation for Jordan splittings, e.g. `[2A]+[(58/3)+(38/29)]`.
//!
//! Brackets group constituents of equal scale. `qA` stands for the block
//! `[[q, q/2], [q/2, q]]` and `qB` for `[[0, q/2], [q/2, 0]]`; a parenthesised
//! rational is a one-dimensional diagonal entry.

use std::fmt;

use num_traits::Zero;

use crate::arith::{fmt_rational, parse_rational, rat, RatMatrix, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvenLetter {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SplitItem {
    Even {
        letter: EvenLetter,
        scale: Rational,
        token: String,
    },
    Diagonal {
        value: Rational,
        token: String,
    },
}

impl SplitItem {
    pub fn even(letter: EvenLetter, scale: Rational) -> Self {
        let l = match letter {
            EvenLetter::A => 'A',
            EvenLetter::B => 'B',
        };
        let token = if scale.denom() == &1.into() {
            format!("{}{l}", fmt_rational(&scale))
        } else {
            format!("({}){l}", fmt_rational(&scale))
        };
        SplitItem::Even {
            letter,
            scale,
            token,
        }
    }

    pub fn diagonal(value: Rational) -> Self {
        let token = format!("({})", fmt_rational(&value));
        SplitItem::Diagonal { value, token }
    }

    pub fn token(&self) -> &str {
        match self {
            SplitItem::Even { token, .. } | SplitItem::Diagonal { token, .. } => token,
        }
    }

    pub fn matrix(&self) -> RatMatrix {
        match self {
            SplitItem::Diagonal { value, .. } => RatMatrix::diagonal(std::slice::from_ref(value)),
            SplitItem::Even { letter, scale, .. } => {
                let half = scale * rat(1, 2);
                let d = match letter {
                    EvenLetter::A => scale.clone(),
                    EvenLetter::B => Rational::zero(),
                };
                RatMatrix::from_rows(vec![vec![d.clone(), half.clone()], vec![half, d]])
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitGroup {
    pub bracketed: bool,
    pub items: Vec<SplitItem>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SplittingExpr {
    pub groups: Vec<SplitGroup>,
}

impl SplittingExpr {
    pub fn items(&self) -> impl Iterator<Item = &SplitItem> {
        self.groups.iter().flat_map(|g| g.items.iter())
    }

    pub fn dim(&self) -> usize {
        self.items()
            .map(|i| match i {
                SplitItem::Even { .. } => 2,
                SplitItem::Diagonal { .. } => 1,
            })
            .sum()
    }

    /// The block matrices, in order.
    pub fn blocks(&self) -> Vec<RatMatrix> {
        self.items().map(SplitItem::matrix).collect()
    }

    /// Block-diagonal Gram matrix of the expression.
    pub fn to_gram(&self) -> RatMatrix {
        RatMatrix::block_diag(&self.blocks())
    }
}

impl fmt::Display for SplittingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (gi, g) in self.groups.iter().enumerate() {
            if gi > 0 {
                write!(f, "+")?;
            }
            if g.bracketed {
                write!(f, "[")?;
            }
            for (ii, item) in g.items.iter().enumerate() {
                if ii > 0 {
                    write!(f, "+")?;
                }
                write!(f, "{}", item.token())?;
            }
            if g.bracketed {
                write!(f, "]")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or(self.src.len())
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Splitting {
            input: self.src.to_string(),
            position: self.offset(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Option<String> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            // a sign only belongs to a number when digits follow
            if !self
                .chars
                .get(self.pos + 1)
                .is_some_and(|(_, c)| c.is_ascii_digit())
            {
                return None;
            }
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        Some(self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn rational(&mut self) -> Result<Option<Rational>> {
        let at = self.pos;
        match self.number() {
            None => Ok(None),
            Some(text) => match parse_rational(&text) {
                Some(r) => Ok(Some(r)),
                None => {
                    self.pos = at;
                    Err(self.err(format!("bad rational {text:?}")))
                }
            },
        }
    }

    fn letter(&mut self) -> Option<EvenLetter> {
        let l = match self.peek()? {
            'A' => EvenLetter::A,
            'B' => EvenLetter::B,
            _ => return None,
        };
        self.pos += 1;
        Some(l)
    }

    fn text_since(&self, start: usize) -> String {
        self.chars[start..self.pos].iter().map(|&(_, c)| c).collect()
    }

    fn item(&mut self) -> Result<SplitItem> {
        let start = self.pos;
        if self.eat('(') {
            let value = self.rational()?;
            let letter = self.letter();
            self.expect(')')?;
            // "(q)A" puts the parenthesised scale in front of the letter
            let letter = letter.or_else(|| self.letter());
            let token = self.text_since(start);
            return match (value, letter) {
                (Some(value), None) => Ok(SplitItem::Diagonal { value, token }),
                (scale, Some(letter)) => Ok(SplitItem::Even {
                    letter,
                    scale: scale.unwrap_or_else(|| rat(1, 1)),
                    token,
                }),
                (None, None) => Err(self.err("empty parentheses")),
            };
        }
        let value = self.rational()?;
        let token_letter = self.letter();
        let token = self.text_since(start);
        match (value, token_letter) {
            (Some(value), None) => Ok(SplitItem::Diagonal { value, token }),
            (scale, Some(letter)) => Ok(SplitItem::Even {
                letter,
                scale: scale.unwrap_or_else(|| rat(1, 1)),
                token,
            }),
            (None, None) => Err(self.err("unknown token")),
        }
    }

    fn group(&mut self) -> Result<SplitGroup> {
        if self.eat('[') {
            let mut items = vec![self.item()?];
            while self.eat('+') {
                items.push(self.item()?);
            }
            self.expect(']')?;
            Ok(SplitGroup {
                bracketed: true,
                items,
            })
        } else {
            Ok(SplitGroup {
                bracketed: false,
                items: vec![self.item()?],
            })
        }
    }

    fn expr(&mut self) -> Result<SplittingExpr> {
        let mut groups = Vec::new();
        if self.peek().is_none() {
            return Ok(SplittingExpr { groups });
        }
        groups.push(self.group()?);
        while self.eat('+') {
            groups.push(self.group()?);
        }
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(SplittingExpr { groups })
    }
}

/// Parse a splitting in appendix notation; at `p = 2` every diagonal entry
/// must be nonzero with odd denominator.
pub fn parse_splitting_expr(text: &str, p: u64) -> Result<SplittingExpr> {
    let expr = Parser::new(text).expr()?;
    for item in expr.items() {
        let (value, token) = match item {
            SplitItem::Diagonal { value, token } => (value, token),
            SplitItem::Even { scale, token, .. } => (scale, token),
        };
        if value.is_zero() {
            return Err(Error::Splitting {
                input: text.to_string(),
                position: text.find(token.as_str()).unwrap_or(0),
                message: "zero entry".into(),
            });
        }
        if p == 2 && matches!(item, SplitItem::Diagonal { .. }) && value.denom() % 2u32 == 0u32.into()
        {
            return Err(Error::Splitting {
                input: text.to_string(),
                position: text.find(token.as_str()).unwrap_or(0),
                message: "diagonal entry with even denominator at p = 2".into(),
            });
        }
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn worked_example() {
        let e = parse_splitting_expr("[2A]+[(58/3)+(38/29)]", 2).unwrap();
        assert_eq!(e.groups.len(), 2);
        assert_eq!(
            e.items().cloned().collect::<Vec<_>>(),
            vec![
                SplitItem::Even {
                    letter: EvenLetter::A,
                    scale: int(2),
                    token: "2A".into()
                },
                SplitItem::Diagonal {
                    value: rat(58, 3),
                    token: "(58/3)".into()
                },
                SplitItem::Diagonal {
                    value: rat(38, 29),
                    token: "(38/29)".into()
                },
            ]
        );
        let m = e.to_gram();
        let expect = RatMatrix::block_diag(&[
            RatMatrix::from_i64(&[&[2, 1], &[1, 2]]),
            RatMatrix::diagonal(&[rat(58, 3), rat(38, 29)]),
        ]);
        assert_eq!(m, expect);
        assert_eq!(m.det(), int(76));
        assert_eq!(e.to_string(), "[2A]+[(58/3)+(38/29)]");
        assert_eq!(e.dim(), 4);
    }

    #[test]
    fn small_items() {
        let e = parse_splitting_expr("(5)", 5).unwrap();
        assert_eq!(
            e.items().cloned().collect::<Vec<_>>(),
            vec![SplitItem::Diagonal {
                value: int(5),
                token: "(5)".into()
            }]
        );
        let b = parse_splitting_expr("[2B]", 2).unwrap();
        assert_eq!(b.to_gram(), RatMatrix::from_i64(&[&[0, 1], &[1, 0]]));
        let a = parse_splitting_expr("[A]", 2).unwrap();
        assert_eq!(a.to_gram(), RatMatrix::from_rows(vec![
            vec![int(1), rat(1, 2)],
            vec![rat(1, 2), int(1)]
        ]));
        let e = parse_splitting_expr("[ (1/2)A + (3) ]", 2).unwrap();
        assert_eq!(e.to_string(), "[(1/2)A+(3)]");
        assert!(parse_splitting_expr("", 2).unwrap().groups.is_empty());
    }

    #[test]
    fn errors_carry_position() {
        match parse_splitting_expr("[2A]+[(58/3)+X]", 2) {
            Err(Error::Splitting { position, .. }) => assert_eq!(position, 13),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_splitting_expr("[2A", 2).is_err());
        assert!(parse_splitting_expr("(1/2)", 2).is_err());
        assert!(parse_splitting_expr("(1/2)", 3).is_ok());
        assert!(parse_splitting_expr("(0)", 3).is_err());
        assert!(parse_splitting_expr("(1/0)", 3).is_err());
    }
}
