//! AST, recursive-descent parser, and a printer whose output reparses to an
//! equal tree.
//!
//! Grammar:
//! ```text
//! expr   := mult (('+' | '-') mult)*
//! mult   := unary (('*' | '/') unary)*
//! unary  := '-' unary | caret
//! caret  := primary ('^' primary)*
//! primary:= INT | IDENT | OP '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//! Operator arity is fixed and checked at parse time; degree and kind
//! errors are evaluation-time concerns.

use std::fmt;

use num_bigint::BigInt;

use super::lex::{lex, Tok, Token};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    D,
    Delta,
    Star,
    StarInv,
    Box_,
    Wedge,
    Ip,
    Jp,
    Lie,
    Sn,
    Theta,
    Inner,
    Sharp,
    Flat,
    Div,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::D => "d",
            OpKind::Delta => "delta",
            OpKind::Star => "star",
            OpKind::StarInv => "starinv",
            OpKind::Box_ => "box",
            OpKind::Wedge => "wedge",
            OpKind::Ip => "ip",
            OpKind::Jp => "jp",
            OpKind::Lie => "lie",
            OpKind::Sn => "sn",
            OpKind::Theta => "theta",
            OpKind::Inner => "inner",
            OpKind::Sharp => "sharp",
            OpKind::Flat => "flat",
            OpKind::Div => "div",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            OpKind::D
            | OpKind::Delta
            | OpKind::Star
            | OpKind::StarInv
            | OpKind::Box_
            | OpKind::Sharp
            | OpKind::Flat
            | OpKind::Div => 1,
            OpKind::Wedge
            | OpKind::Ip
            | OpKind::Jp
            | OpKind::Lie
            | OpKind::Sn
            | OpKind::Theta
            | OpKind::Inner => 2,
        }
    }

    pub fn from_name(name: &str) -> Option<OpKind> {
        Some(match name {
            "d" => OpKind::D,
            "delta" => OpKind::Delta,
            "star" => OpKind::Star,
            "starinv" => OpKind::StarInv,
            "box" => OpKind::Box_,
            "wedge" => OpKind::Wedge,
            "ip" => OpKind::Ip,
            "jp" => OpKind::Jp,
            "lie" => OpKind::Lie,
            "sn" => OpKind::Sn,
            "theta" => OpKind::Theta,
            "inner" => OpKind::Inner,
            "sharp" => OpKind::Sharp,
            "flat" => OpKind::Flat,
            "div" => OpKind::Div,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Caret,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Int(BigInt),
    Ident(String),
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
    Call(OpKind, Vec<Ast>),
}

pub fn parse(src: &str) -> Result<Ast> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(err_at(t, "trailing input"));
    }
    Ok(ast)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn err_at(t: &Token, msg: impl Into<String>) -> Error {
    Error::Parse { line: t.line, col: t.col, msg: msg.into() }
}

fn err_eof(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, col: 0, msg: format!("unexpected end of input: {}", msg.into()) }
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, want: &Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if &t.tok == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(err_at(t, format!("expected {what}"))),
            None => Err(err_eof(format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.mult()?;
        while let Some(t) = self.peek() {
            let op = match t.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.mult()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn mult(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek() {
            let op = match t.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast> {
        if let Some(t) = self.peek() {
            if t.tok == Tok::Minus {
                self.pos += 1;
                let inner = self.unary()?;
                return Ok(Ast::Neg(Box::new(inner)));
            }
        }
        self.caret()
    }

    fn caret(&mut self) -> Result<Ast> {
        let mut lhs = self.primary()?;
        while let Some(t) = self.peek() {
            if t.tok != Tok::Caret {
                break;
            }
            self.pos += 1;
            let rhs = self.primary()?;
            lhs = Ast::Bin(BinOp::Caret, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Ast> {
        let t = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(err_eof("expected an expression")),
        };
        match t.tok {
            Tok::Int(ref n) => {
                self.pos += 1;
                Ok(Ast::Int(n.clone()))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.eat(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(ref name) => {
                self.pos += 1;
                let is_call =
                    matches!(self.peek(), Some(nt) if nt.tok == Tok::LParen);
                if !is_call {
                    return Ok(Ast::Ident(name.clone()));
                }
                let op = OpKind::from_name(name)
                    .ok_or_else(|| err_at(&t, format!("unknown operator `{name}`")))?;
                self.eat(&Tok::LParen, "`(`")?;
                let mut args = vec![self.expr()?];
                while matches!(self.peek(), Some(nt) if nt.tok == Tok::Comma) {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.eat(&Tok::RParen, "`)`")?;
                if args.len() != op.arity() {
                    return Err(err_at(
                        &t,
                        format!(
                            "operator `{}` takes {} argument(s), got {}",
                            op.name(),
                            op.arity(),
                            args.len()
                        ),
                    ));
                }
                Ok(Ast::Call(op, args))
            }
            _ => Err(err_at(&t, "expected an expression")),
        }
    }
}

// Precedence levels used by the printer; parenthesization is chosen so the
// printed string reparses to the identical tree.
fn prec(ast: &Ast) -> u8 {
    match ast {
        Ast::Int(_) | Ast::Ident(_) | Ast::Call(..) => 5,
        Ast::Bin(BinOp::Caret, ..) => 4,
        Ast::Neg(_) => 3,
        Ast::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Ast::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, child: &Ast, min: u8) -> fmt::Result {
    if prec(child) < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Int(n) => write!(f, "{n}"),
            Ast::Ident(s) => write!(f, "{s}"),
            Ast::Neg(c) => {
                write!(f, "-")?;
                fmt_child(f, c, 3)
            }
            Ast::Bin(BinOp::Caret, l, r) => {
                fmt_child(f, l, 4)?;
                write!(f, "^")?;
                fmt_child(f, r, 5)
            }
            Ast::Bin(op, l, r) => {
                let (sym, lvl) = match op {
                    BinOp::Add => (" + ", 1),
                    BinOp::Sub => (" - ", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Caret => unreachable!(),
                };
                fmt_child(f, l, lvl)?;
                write!(f, "{sym}")?;
                // Right operand needs strictly higher precedence for the
                // non-associative cases (a - (b + c), a/(b*c)).
                fmt_child(f, r, lvl + 1)
            }
            Ast::Call(op, args) => {
                write!(f, "{}(", op.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bracket_call() {
        let ast = parse("sn(x*dx, y*dy)").unwrap();
        match ast {
            Ast::Call(OpKind::Sn, args) => assert_eq!(args.len(), 2),
            other => panic!("unexpected ast: {other:?}"),
        }
    }

    #[test]
    fn nested_d_parses() {
        assert!(parse("d(d(f))").is_ok());
    }

    #[test]
    fn wedge_arity_error_at_parse() {
        let err = parse("wedge(dx)").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("takes 2 argument(s)"), "{msg}");
    }

    #[test]
    fn unknown_operator_is_rejected() {
        assert!(parse("frob(x)").is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        for src in [
            "x + y*z",
            "x - (y - z)",
            "-x^2*y",
            "(x + 1)^3/(y + 2)",
            "sn(x*dx, dy)",
            "d(x*y)^dz",
            "1/2*x",
            "-(x + y)",
            "x/y/z",
            "x/(y*z)",
        ] {
            let a = parse(src).unwrap();
            let printed = a.to_string();
            let b = parse(&printed).unwrap();
            assert_eq!(a, b, "{src} -> {printed}");
        }
    }
}
