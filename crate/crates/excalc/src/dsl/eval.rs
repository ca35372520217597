//! Evaluators: scalar context (fixture literals) and the full operator
//! context (CLI expressions). Degree and kind checks happen here, before
//! anything reaches the kernel.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ast::{parse, Ast, BinOp, OpKind};
use crate::error::{Error, Result};
use crate::exterior::{Basis, Form, Multivector};
use crate::manifold::Space;
use crate::rat::{Rational, RationalFn};

/// Evaluate a scalar expression (polynomial / rational function) over the
/// given coordinate names. Operators and form atoms are rejected.
pub fn eval_scalar(names: &[String], src: &str) -> Result<RationalFn> {
    let ast = parse(src)?;
    scalar_value(names, &ast)
}

fn scalar_value(names: &[String], ast: &Ast) -> Result<RationalFn> {
    let n = names.len();
    match ast {
        Ast::Int(k) => Ok(RationalFn::constant(n, big_to_rational(k))),
        Ast::Ident(name) => match names.iter().position(|c| c == name) {
            Some(v) => Ok(RationalFn::var(n, v)),
            None => Err(Error::UnknownIdent(name.clone())),
        },
        Ast::Neg(c) => Ok(-&scalar_value(names, c)?),
        Ast::Bin(BinOp::Add, l, r) => Ok(&scalar_value(names, l)? + &scalar_value(names, r)?),
        Ast::Bin(BinOp::Sub, l, r) => Ok(&scalar_value(names, l)? - &scalar_value(names, r)?),
        Ast::Bin(BinOp::Mul, l, r) => Ok(&scalar_value(names, l)? * &scalar_value(names, r)?),
        Ast::Bin(BinOp::Div, l, r) => {
            let rhs = scalar_value(names, r)?;
            scalar_value(names, l)?
                .checked_div(&rhs)
                .ok_or(Error::DivisionByZero)
        }
        Ast::Bin(BinOp::Caret, l, r) => {
            let base = scalar_value(names, l)?;
            let e = int_exponent(r)?;
            Ok(base.pow(e))
        }
        Ast::Call(op, _) => Err(Error::Eval(format!(
            "operator `{}` is not allowed in a scalar literal",
            op.name()
        ))),
    }
}

fn int_exponent(ast: &Ast) -> Result<u32> {
    match ast {
        Ast::Int(k) if !k.is_negative() => k
            .to_u32()
            .ok_or_else(|| Error::Eval("exponent too large".into())),
        _ => Err(Error::Eval(
            "exponent must be a nonnegative integer literal".into(),
        )),
    }
}

fn big_to_rational(k: &BigInt) -> Rational {
    Rational::from_integer(k.clone())
}

/// A value produced by the full evaluator: a form (scalars are 0-forms) or
/// a multivector (from `sharp`).
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Form(Form),
    Multi(Multivector),
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Form(f) => f.to_string(),
            Value::Multi(m) => m.to_string(),
        }
    }
}

pub type Bindings = BTreeMap<String, Value>;

/// Evaluate a full DSL expression against a fixture space.
pub fn eval_expr(space: &Space, bindings: &Bindings, src: &str) -> Result<Value> {
    let ast = parse(src)?;
    eval_ast(space, bindings, &ast)
}

fn eval_ast(space: &Space, bindings: &Bindings, ast: &Ast) -> Result<Value> {
    let chart = space.chart();
    match ast {
        Ast::Int(k) => Ok(Value::Form(Form::scalar(
            chart.clone(),
            RationalFn::constant(chart.dim(), big_to_rational(k)),
        ))),
        Ast::Ident(name) => resolve_ident(space, bindings, name),
        Ast::Neg(c) => match eval_ast(space, bindings, c)? {
            Value::Form(f) => Ok(Value::Form(-&f)),
            Value::Multi(m) => Ok(Value::Multi(-&m)),
        },
        Ast::Bin(op, l, r) => {
            let lv = eval_ast(space, bindings, l)?;
            let rv = eval_ast(space, bindings, r)?;
            eval_bin(space, *op, lv, rv, r)
        }
        Ast::Call(op, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_ast(space, bindings, a)?);
            }
            eval_call(space, *op, vals)
        }
    }
}

fn resolve_ident(space: &Space, bindings: &Bindings, name: &str) -> Result<Value> {
    if let Some(v) = bindings.get(name) {
        return Ok(v.clone());
    }
    let chart = space.chart();
    if let Some(v) = chart.coord_index(name) {
        return Ok(Value::Form(Form::scalar(
            chart.clone(),
            RationalFn::var(chart.dim(), v),
        )));
    }
    // Coordinate differential `d<name>`.
    if let Some(rest) = name.strip_prefix('d') {
        if let Some(v) = chart.coord_index(rest) {
            return Ok(Value::Form(Form::basis_one_form(
                chart.clone(),
                Basis::Coordinate,
                v,
            )));
        }
    }
    // Frame coframe element `e<k>`, 1-based.
    if let Some(rest) = name.strip_prefix('e') {
        if let Ok(k) = rest.parse::<usize>() {
            if k >= 1 && k <= chart.dim() {
                let frame_form =
                    Form::basis_one_form(chart.clone(), Basis::Frame, k - 1);
                return Ok(Value::Form(space.to_basis(&frame_form, Basis::Coordinate)));
            }
        }
    }
    Err(Error::UnknownIdent(name.to_string()))
}

fn eval_bin(space: &Space, op: BinOp, lv: Value, rv: Value, rhs_ast: &Ast) -> Result<Value> {
    match op {
        BinOp::Add | BinOp::Sub => {
            let (Value::Form(a), Value::Form(b)) = (&lv, &rv) else {
                return Err(Error::Eval("`+`/`-` expects two forms".into()));
            };
            let b = if op == BinOp::Sub { -b } else { b.clone() };
            if a.is_zero() {
                return Ok(Value::Form(b));
            }
            if b.is_zero() {
                return Ok(Value::Form(a.clone()));
            }
            if a.degree() != b.degree() {
                return Err(Error::Eval(format!(
                    "degree mismatch in `{}`: {} vs {}",
                    if op == BinOp::Sub { "-" } else { "+" },
                    a.degree(),
                    b.degree()
                )));
            }
            Ok(Value::Form(a + &b))
        }
        BinOp::Mul => match (&lv, &rv) {
            (Value::Form(a), Value::Form(b)) => {
                if a.degree() == 0 || b.degree() == 0 {
                    Ok(Value::Form(a.wedge(b)))
                } else {
                    Err(Error::Eval(
                        "`*` needs a scalar operand; use `^` to wedge forms".into(),
                    ))
                }
            }
            (Value::Form(a), Value::Multi(m)) if a.degree() == 0 => {
                Ok(Value::Multi(m.scale(&a.scalar_part())))
            }
            (Value::Multi(m), Value::Form(a)) if a.degree() == 0 => {
                Ok(Value::Multi(m.scale(&a.scalar_part())))
            }
            _ => Err(Error::Eval("`*` expects scalar and form operands".into())),
        },
        BinOp::Div => {
            let (Value::Form(a), Value::Form(b)) = (&lv, &rv) else {
                return Err(Error::Eval("`/` expects forms".into()));
            };
            if b.degree() != 0 {
                return Err(Error::Eval("division by a form of degree > 0".into()));
            }
            let den = b.scalar_part();
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let inv = RationalFn::one(den.nvars())
                .checked_div(&den)
                .ok_or(Error::DivisionByZero)?;
            Ok(Value::Form(a.scale(&inv)))
        }
        BinOp::Caret => {
            // Power when the base is a scalar and the exponent is a literal
            // nonnegative integer; wedge otherwise.
            if let (Value::Form(a), Ast::Int(k)) = (&lv, rhs_ast) {
                if a.degree() == 0 && !k.is_negative() {
                    let e = k
                        .to_u32()
                        .ok_or_else(|| Error::Eval("exponent too large".into()))?;
                    return Ok(Value::Form(Form::scalar(
                        a.chart().clone(),
                        a.scalar_part().pow(e),
                    )));
                }
            }
            let (Value::Form(a), Value::Form(b)) = (&lv, &rv) else {
                return Err(Error::Eval("`^` expects two forms".into()));
            };
            Ok(Value::Form(a.wedge(b)))
        }
    }
}

fn eval_call(space: &Space, op: OpKind, mut vals: Vec<Value>) -> Result<Value> {
    fn form(v: Value, what: &str) -> Result<Form> {
        match v {
            Value::Form(f) => Ok(f),
            Value::Multi(_) => Err(Error::Eval(format!(
                "{what} expects a form, got a multivector (apply `flat` first)"
            ))),
        }
    }
    fn vector(v: Value, what: &str) -> Result<Multivector> {
        match v {
            Value::Multi(m) if m.degree() == 1 => Ok(m),
            Value::Multi(m) => Err(Error::Eval(format!(
                "{what} expects a vector (degree-1 multivector), got degree {}",
                m.degree()
            ))),
            Value::Form(_) => Err(Error::Eval(format!(
                "{what} expects a vector; apply `sharp` to a 1-form first"
            ))),
        }
    }

    match op {
        OpKind::D => Ok(Value::Form(space.ext_d(&form(vals.remove(0), "d")?))),
        OpKind::Delta => Ok(Value::Form(
            space.codifferential(&form(vals.remove(0), "delta")?),
        )),
        OpKind::Star => Ok(Value::Form(space.star(&form(vals.remove(0), "star")?))),
        OpKind::StarInv => Ok(Value::Form(
            space.star_inv(&form(vals.remove(0), "starinv")?),
        )),
        OpKind::Box_ => Ok(Value::Form(
            space.laplace_de_rham(&form(vals.remove(0), "box")?),
        )),
        OpKind::Wedge => {
            let a = form(vals.remove(0), "wedge")?;
            let b = form(vals.remove(0), "wedge")?;
            Ok(Value::Form(a.wedge(&b)))
        }
        OpKind::Ip => {
            let a = form(vals.remove(0), "ip")?;
            let b = form(vals.remove(0), "ip")?;
            Ok(Value::Form(space.gen_interior(&a, &b)))
        }
        OpKind::Jp => {
            let v = vector(vals.remove(0), "jp")?;
            let b = form(vals.remove(0), "jp")?;
            Ok(Value::Form(space.j_product(&v.as_vector_field(), &b)))
        }
        OpKind::Lie => {
            let v = vector(vals.remove(0), "lie")?;
            let b = form(vals.remove(0), "lie")?;
            Ok(Value::Form(space.lie_cartan(&v.as_vector_field(), &b)))
        }
        OpKind::Sn => {
            let a = form(vals.remove(0), "sn")?;
            let b = form(vals.remove(0), "sn")?;
            Ok(Value::Form(space.sn_bracket(&a, &b)))
        }
        OpKind::Theta => {
            let a = form(vals.remove(0), "theta")?;
            let b = form(vals.remove(0), "theta")?;
            Ok(Value::Form(space.theta(&a, &b)))
        }
        OpKind::Inner => {
            let a = form(vals.remove(0), "inner")?;
            let b = form(vals.remove(0), "inner")?;
            if a.degree() != b.degree() {
                return Err(Error::Eval(format!(
                    "inner product needs equal degrees, got {} and {}",
                    a.degree(),
                    b.degree()
                )));
            }
            Ok(Value::Form(Form::scalar(
                a.chart().clone(),
                space.form_inner(&a, &b),
            )))
        }
        OpKind::Sharp => {
            let a = form(vals.remove(0), "sharp")?;
            Ok(Value::Multi(space.sharp(&a)))
        }
        OpKind::Flat => {
            let m = match vals.remove(0) {
                Value::Multi(m) => m,
                Value::Form(_) => {
                    return Err(Error::Eval("flat expects a multivector".into()))
                }
            };
            Ok(Value::Form(space.flat(&m)))
        }
        OpKind::Div => {
            let v = vector(vals.remove(0), "div")?;
            Ok(Value::Form(Form::scalar(
                space.chart().clone(),
                space.divergence(&v.as_vector_field()),
            )))
        }
    }
}
