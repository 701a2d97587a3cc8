//! The lattice expression language.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := atom ('^' INT)?
//! atom   := 'U' | 'H' | '-E8' | 'E8' | 'Lambda' | '(' SIGNED_INT ')' | 'gram[' row (';' row)* ']'
//! row    := SIGNED_INT (',' SIGNED_INT)*
//! ```
//!
//! `+` is the orthogonal direct sum and `^k` the k-fold orthogonal power.
//! Whitespace between tokens is ignored. `H` is accepted as a synonym of `U`;
//! the printer always emits `U`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{e8_gram, lambda_gram, Lattice};
use crate::error::LatticeError;
use crate::linalg::ExactMatrix;

/// Largest accepted orthogonal power.
pub const MAX_POWER: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    /// The hyperbolic plane `[[0,1],[1,0]]`.
    Hyperbolic,
    /// E8 (positive definite) or its negation.
    E8 { negative: bool },
    /// The rank-2 lattice `[[-6,3],[3,-2]]`.
    Lambda,
    /// Rank-1 lattice generated by a vector of nonzero square `i`.
    RankOne(BigInt),
    /// Explicit symmetric integer Gram matrix.
    Gram(ExactMatrix),
}

impl Atom {
    pub fn gram(&self) -> ExactMatrix {
        match self {
            Atom::Hyperbolic => ExactMatrix::from_ints(&[[0, 1], [1, 0]]).expect("2x2"),
            Atom::E8 { negative: false } => e8_gram(),
            Atom::E8 { negative: true } => e8_gram().scale(&(-BigInt::one()).into()),
            Atom::Lambda => lambda_gram(),
            Atom::RankOne(i) => ExactMatrix::diagonal(&[i.clone().into()]),
            Atom::Gram(m) => m.clone(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Hyperbolic => f.write_str("U"),
            Atom::E8 { negative: false } => f.write_str("E8"),
            Atom::E8 { negative: true } => f.write_str("-E8"),
            Atom::Lambda => f.write_str("Lambda"),
            Atom::RankOne(i) => write!(f, "({i})"),
            Atom::Gram(m) => {
                f.write_str("gram[")?;
                for i in 0..m.rows() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    let row: Vec<String> = m.row(i).iter().map(|q| q.numer().to_string()).collect();
                    f.write_str(&row.join(","))?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub atom: Atom,
    pub power: u32,
}

/// An orthogonal sum of atoms with powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeExpr {
    pub terms: Vec<Term>,
}

impl LatticeExpr {
    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        Parser { src: text, pos: 0 }.expr()
    }

    pub fn atom(atom: Atom) -> Self {
        Self {
            terms: vec![Term { atom, power: 1 }],
        }
    }

    /// Orthogonal sum `self + other`.
    pub fn plus(mut self, other: LatticeExpr) -> Self {
        self.terms.extend(other.terms);
        self
    }

    /// Block-diagonal Gram matrix in term order, each term repeated `power` times.
    pub fn realize(&self) -> Lattice {
        let blocks: Vec<ExactMatrix> = self
            .terms
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.atom.gram(), t.power as usize))
            .collect();
        Lattice::from_validated(ExactMatrix::direct_sum(&blocks))
    }

    pub fn rank(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.atom.gram().rows() * t.power as usize)
            .sum()
    }
}

impl fmt::Display for LatticeExpr {
    /// Canonical form: `atom^k` joined by `" + "`, powers always explicit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}^{}", t.atom, t.power)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for LatticeExpr {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, LatticeError> {
        Err(LatticeError::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), LatticeError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{token}'"))
        }
    }

    fn expr(mut self) -> Result<LatticeExpr, LatticeError> {
        let mut terms = vec![self.term()?];
        while self.eat("+") {
            terms.push(self.term()?);
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err(self.pos, "unexpected trailing input");
        }
        Ok(LatticeExpr { terms })
    }

    fn term(&mut self) -> Result<Term, LatticeError> {
        let atom = self.atom()?;
        let power = if self.eat("^") {
            self.skip_ws();
            let at = self.pos;
            let value = self.unsigned()?;
            if value.is_zero() {
                return self.err(at, "power must be a positive integer");
            }
            match u32::try_from(&value) {
                Ok(p) if p <= MAX_POWER => p,
                _ => return self.err(at, format!("power exceeds {MAX_POWER}")),
            }
        } else {
            1
        };
        Ok(Term { atom, power })
    }

    fn atom(&mut self) -> Result<Atom, LatticeError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("gram[") {
            return self.gram(start);
        }
        if self.eat("Lambda") {
            return Ok(Atom::Lambda);
        }
        if self.eat("U") || self.eat("H") {
            return Ok(Atom::Hyperbolic);
        }
        if self.eat("E8") {
            return Ok(Atom::E8 { negative: false });
        }
        if self.eat("-") {
            if self.eat("E8") {
                return Ok(Atom::E8 { negative: true });
            }
            return self.err(start, "expected 'E8' after '-'");
        }
        if self.eat("(") {
            self.skip_ws();
            let at = self.pos;
            let value = self.signed()?;
            if value.is_zero() {
                return self.err(at, "rank-1 lattice (0) is degenerate");
            }
            self.expect(")")?;
            return Ok(Atom::RankOne(value));
        }
        if self.rest().is_empty() {
            self.err(start, "unexpected end of input, expected a lattice atom")
        } else {
            self.err(start, "expected a lattice atom")
        }
    }

    fn gram(&mut self, start: usize) -> Result<Atom, LatticeError> {
        let mut rows = vec![self.row()?];
        while self.eat(";") {
            rows.push(self.row()?);
        }
        self.expect("]")?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return self.err(start, format!("gram matrix must be square ({n} rows)"));
        }
        let m = ExactMatrix::from_bigints(&rows)?;
        if !m.is_symmetric() {
            return self.err(start, "gram matrix must be symmetric");
        }
        Ok(Atom::Gram(m))
    }

    fn row(&mut self) -> Result<Vec<BigInt>, LatticeError> {
        self.skip_ws();
        let mut row = vec![self.signed()?];
        while self.eat(",") {
            self.skip_ws();
            row.push(self.signed()?);
        }
        Ok(row)
    }

    fn signed(&mut self) -> Result<BigInt, LatticeError> {
        let negative = self.rest().starts_with('-');
        if negative || self.rest().starts_with('+') {
            self.pos += 1;
        }
        let v = self.unsigned()?;
        Ok(if negative { -v } else { v })
    }

    fn unsigned(&mut self) -> Result<BigInt, LatticeError> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err(self.pos, "expected an integer");
        }
        let value = self.src[self.pos..self.pos + digits]
            .parse()
            .expect("ascii digits");
        self.pos += digits;
        Ok(value)
    }
}
