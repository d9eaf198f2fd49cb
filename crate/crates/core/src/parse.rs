//! Text syntax for operators.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | atom ('^' signedInt)? | '(' expr ')'
//! atom     := 'x' IDX | 'd' IDX | 'E' '[' IDX ',' IDX ']' | 'ID'
//! rational := INT ('/' INT)?
//! ```
//!
//! Whitespace is insignificant and indices are 1-based. A symbol expression
//! such as `x1^2*d1` denotes `Id ⊗ x₁²∂₁`; `E[i,j]` is `E_{ij} ⊗ 1` and
//! `ID` is `Id ⊗ 1`, so `E[1,2]*(x1)` is `E₁₂ ⊗ x₁`. Products are normal
//! ordered during lowering: `d1*x1` becomes `1 + x1*d1`.
//!
//! ```
//! use liftcoc::parse::parse_operator;
//! let a = parse_operator("d1*x1", 1, 6).unwrap();
//! assert_eq!(a.to_string(), "ID*(1 + x1*d1)");
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::AugmentedOp;
use crate::rational::Rational;
use crate::symbol::{Monomial, PsiSymbol};

/// Parsed expression before lowering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Number(Rational),
    X { var: usize, exp: i32 },
    D { var: usize, exp: i32 },
    Entry { row: usize, col: usize, exp: i32 },
    Id { exp: i32 },
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
}

impl Expr {
    /// Largest variable index (1-based) used, 0 if none.
    pub fn max_variable(&self) -> usize {
        match self {
            Expr::X { var, .. } | Expr::D { var, .. } => *var,
            Expr::Sum(ts) => ts.iter().map(|(_, e)| e.max_variable()).max().unwrap_or(0),
            Expr::Product(fs) => fs.iter().map(Expr::max_variable).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Normal-ordered operator over `nvars` variables, cut at `depth`.
    pub fn lower(&self, nvars: usize, depth: u32) -> Result<AugmentedOp> {
        let scalar = |c: Rational| AugmentedOp::identity(PsiSymbol::constant(nvars, depth, c));
        Ok(match self {
            Expr::Number(c) => scalar(c.clone()),
            Expr::X { var, exp } | Expr::D { var, exp } => {
                if *var > nvars {
                    return Err(Error::IndexOutOfRange { index: *var, nvars });
                }
                let (xe, de) = if matches!(self, Expr::X { .. }) {
                    (*exp, 0)
                } else {
                    (0, *exp)
                };
                let m = Monomial::single(nvars, var - 1, xe, de);
                AugmentedOp::identity(PsiSymbol::monomial(m, Rational::one(), depth))
            }
            Expr::Entry { row, col, exp } => {
                AugmentedOp::elementary(*row, *col, PsiSymbol::one(nvars, depth)).pow(*exp as u32)
            }
            Expr::Id { .. } => scalar(Rational::one()),
            Expr::Sum(ts) => {
                let mut acc = AugmentedOp::zero(nvars, depth);
                for (neg, t) in ts {
                    let v = t.lower(nvars, depth)?;
                    acc = if *neg { &acc - &v } else { &acc + &v };
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = scalar(Rational::one());
                for f in fs {
                    acc = acc.product(&f.lower(nvars, depth)?);
                }
                acc
            }
        })
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses and lowers an operator over `nvars` variables.
pub fn parse_operator(text: &str, nvars: usize, depth: u32) -> Result<AugmentedOp> {
    parse_expr(text)?.lower(nvars, depth)
}

/// Parses a pure symbol expression (no `E[i,j]`).
pub fn parse_symbol(text: &str, nvars: usize, depth: u32) -> Result<PsiSymbol> {
    let op = parse_operator(text, nvars, depth)?;
    if !op.finite().is_zero() {
        return Err(Error::Parse {
            position: 0,
            message: "expected a symbol, found a matrix expression".into(),
        });
    }
    Ok(op.id_part().clone())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![(false, self.term()?)];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push((false, self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 && !terms[0].0 {
            terms.pop().expect("one term").1
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Expr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.eat(b'/') {
                    let at = self.pos;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(Error::Parse {
                            position: at,
                            message: "zero denominator".into(),
                        });
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(Expr::Number(Rational::new(n, d)))
            }
            Some(b'x') | Some(b'd') => {
                let c = self.src[self.pos];
                self.pos += 1;
                let var = self.index()?;
                let exp = self.exponent()?;
                Ok(if c == b'x' {
                    Expr::X { var, exp }
                } else {
                    Expr::D { var, exp }
                })
            }
            Some(b'E') => {
                self.pos += 1;
                self.expect(b'[')?;
                let row = self.index()?;
                self.expect(b',')?;
                let col = self.index()?;
                self.expect(b']')?;
                let exp = self.nonnegative_exponent()?;
                Ok(Expr::Entry { row, col, exp })
            }
            Some(b'I') => {
                self.pos += 1;
                if self.src.get(self.pos) != Some(&b'D') {
                    return Err(self.error("expected 'ID'"));
                }
                self.pos += 1;
                let exp = self.nonnegative_exponent()?;
                Ok(Expr::Id { exp })
            }
            Some(_) => Err(self.error("expected a number, x, d, E[i,j], ID or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn small(&mut self, what: &str) -> Result<i64> {
        let at = self.pos;
        let n = self.integer()?;
        i64::try_from(n)
            .ok()
            .filter(|v| *v <= i32::MAX as i64)
            .ok_or(Error::Parse {
                position: at,
                message: format!("{what} too large"),
            })
    }

    fn index(&mut self) -> Result<usize> {
        self.skip_ws();
        let at = self.pos;
        let n = self.small("index")?;
        if n == 0 {
            return Err(Error::Parse {
                position: at,
                message: "indices are 1-based".into(),
            });
        }
        Ok(n as usize)
    }

    fn exponent(&mut self) -> Result<i32> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        let neg = self.eat(b'-');
        let v = self.small("exponent")? as i32;
        Ok(if neg { -v } else { v })
    }

    fn nonnegative_exponent(&mut self) -> Result<i32> {
        self.skip_ws();
        let at = self.pos;
        let e = self.exponent()?;
        if e < 0 {
            return Err(Error::Parse {
                position: at,
                message: "matrix units have no negative powers".into(),
            });
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    const N: u32 = 6;

    fn sym(text: &str) -> PsiSymbol {
        parse_symbol(text, 1, N).unwrap()
    }

    #[test]
    fn elementary_matrix() {
        let a = parse_operator("E[1,1]*(1)", 1, N).unwrap();
        assert_eq!(a, AugmentedOp::elementary(1, 1, PsiSymbol::one(1, N)));
    }

    #[test]
    fn identity_wrapper() {
        let a = parse_operator("ID*(x1^2*d1 - 3*x1)", 1, N).unwrap();
        let expected = &(&PsiSymbol::x(1, 0, N) * &PsiSymbol::x(1, 0, N)) * &PsiSymbol::d(1, 0, N);
        let expected = &expected - &PsiSymbol::x(1, 0, N).scale(&int(3));
        assert_eq!(a, AugmentedOp::identity(expected));
    }

    #[test]
    fn products_are_normal_ordered() {
        assert_eq!(
            sym("d1*x1"),
            &(&PsiSymbol::x(1, 0, N) * &PsiSymbol::d(1, 0, N)) + &PsiSymbol::one(1, N)
        );
    }

    #[test]
    fn rationals_and_negative_powers() {
        let s = sym("1/2*x1^-1*d1^-1");
        assert_eq!(s.residue(), crate::rational::ratio(1, 2));
        assert_eq!(sym(" 3 / 6 "), PsiSymbol::constant(1, N, crate::rational::ratio(1, 2)));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_expr("x1 +"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_expr("x1 ) "), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse_expr("E[1 2]"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_expr("x0"), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_expr("1/0"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_expr("-x1"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_expr("IX"), Err(Error::Parse { position: 1, .. })));
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            parse_operator("x3*d1", 2, N),
            Err(Error::IndexOutOfRange { index: 3, nvars: 2 })
        ));
        assert_eq!(parse_expr("x3*d1 + E[4,1]").unwrap().max_variable(), 3);
    }

    #[test]
    fn printed_forms_reparse() {
        for text in ["E[1,2]*(x1) + ID", "ID*(0 - x1)", "ID*(x1^2*d1 - 2*x1)", "0"] {
            let a = parse_operator(text, 1, N).unwrap();
            assert_eq!(a.to_string(), text);
            assert_eq!(parse_operator(&a.to_string(), 1, N).unwrap(), a);
        }
    }
}
