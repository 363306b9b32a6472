//! Expression language for structural functions.
//!
//! Operators: `!` `&` `|` over truth values, `+ - *` and integer powers over
//! exact numbers, comparisons, and `if c then a else b`. There is no
//! division, so evaluation over a finite parent domain is total except for
//! type errors (checked at validation time) and `i64` overflow.

use std::collections::BTreeSet;
use std::fmt;

use num::traits::{CheckedAdd, CheckedMul, CheckedSub};
use thiserror::Error;

use crate::value::{NodeId, Rational, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "|",
            BinOp::And => "&",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 3,
            BinOp::Add | BinOp::Sub => 4,
            BinOp::Mul => 5,
        }
    }

    fn is_comparison(self) -> bool {
        self.precedence() == 3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    Neg,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Value),
    Ref(NodeId),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("operator `{op}` cannot be applied to {found}")]
    Type { op: &'static str, found: String },
    #[error("integer overflow in `{op}`")]
    Overflow { op: &'static str },
    #[error("reference to unbound node `{0}`")]
    Unbound(NodeId),
}

fn type_err(op: &'static str, vals: &[&Value]) -> EvalError {
    let found = vals
        .iter()
        .map(|v| format!("{} {v}", v.tag()))
        .collect::<Vec<_>>()
        .join(" and ");
    EvalError::Type { op, found }
}

impl Expr {
    pub fn lit(v: impl Into<Value>) -> Expr {
        Expr::Lit(v.into())
    }

    pub fn var(n: impl Into<NodeId>) -> Expr {
        Expr::Ref(n.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Unary(UnOp::Not, Box::new(e))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::Unary(UnOp::Neg, Box::new(e))
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn and(l: Expr, r: Expr) -> Expr {
        Expr::bin(BinOp::And, l, r)
    }

    pub fn or(l: Expr, r: Expr) -> Expr {
        Expr::bin(BinOp::Or, l, r)
    }

    pub fn pow(base: Expr, exp: u32) -> Expr {
        Expr::Pow(Box::new(base), exp)
    }

    pub fn ite(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::If(Box::new(c), Box::new(t), Box::new(e))
    }

    /// Nodes referenced anywhere in the expression.
    pub fn refs(&self) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut BTreeSet<NodeId>) {
        match self {
            Expr::Lit(_) => {}
            Expr::Ref(n) => {
                out.insert(n.clone());
            }
            Expr::Unary(_, e) | Expr::Pow(e, _) => e.collect_refs(out),
            Expr::Binary(_, l, r) => {
                l.collect_refs(out);
                r.collect_refs(out);
            }
            Expr::If(c, t, e) => {
                c.collect_refs(out);
                t.collect_refs(out);
                e.collect_refs(out);
            }
        }
    }

    /// Evaluates with `lookup` resolving node references.
    pub fn eval<'a, F>(&self, lookup: &F) -> Result<Value, EvalError>
    where
        F: Fn(&NodeId) -> Option<&'a Value>,
    {
        match self {
            Expr::Lit(v) => Ok(v.clone()),
            Expr::Ref(n) => lookup(n)
                .cloned()
                .ok_or_else(|| EvalError::Unbound(n.clone())),
            Expr::Unary(op, e) => {
                let v = e.eval(lookup)?;
                match op {
                    UnOp::Not => match v {
                        Value::Bool(b) => Ok(Value::Bool(!b)),
                        Value::Int(n) => Ok(Value::Int((n == 0) as i64)),
                        _ => Err(type_err("!", &[&v])),
                    },
                    UnOp::Neg => match v {
                        Value::Int(n) => n
                            .checked_neg()
                            .map(Value::Int)
                            .ok_or(EvalError::Overflow { op: "-" }),
                        Value::Rational(r) => Ok(Value::rational(-r)),
                        _ => Err(type_err("-", &[&v])),
                    },
                }
            }
            Expr::Binary(op, l, r) => {
                let lv = l.eval(lookup)?;
                let rv = r.eval(lookup)?;
                eval_binary(*op, &lv, &rv)
            }
            Expr::Pow(base, exp) => {
                let b = base.eval(lookup)?;
                match b {
                    Value::Int(n) => n
                        .checked_pow(*exp)
                        .map(Value::Int)
                        .ok_or(EvalError::Overflow { op: "^" }),
                    Value::Rational(r) => {
                        let num = r.numer().checked_pow(*exp);
                        let den = r.denom().checked_pow(*exp);
                        match (num, den) {
                            (Some(n), Some(d)) => Ok(Value::rational(Rational::new(n, d))),
                            _ => Err(EvalError::Overflow { op: "^" }),
                        }
                    }
                    _ => Err(type_err("^", &[&b])),
                }
            }
            Expr::If(c, t, e) => {
                let cv = c.eval(lookup)?;
                match cv.truthiness() {
                    Some(true) => t.eval(lookup),
                    Some(false) => e.eval(lookup),
                    None => Err(type_err("if", &[&cv])),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::If(..) => 0,
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Unary(..) => 6,
            Expr::Lit(v)
                if v.as_rational()
                    .is_some_and(|r| r < Rational::from_integer(0)) =>
            {
                6
            }
            Expr::Pow(..) => 7,
            Expr::Lit(_) | Expr::Ref(_) => 8,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Lit(Value::Symbol(s)) => f.write_str(&crate::value::quote_symbol(s))?,
            Expr::Lit(v) => write!(f, "{v}")?,
            Expr::Ref(n) => write!(f, "{n}")?,
            Expr::Unary(op, e) => {
                f.write_str(match op {
                    UnOp::Not => "!",
                    UnOp::Neg => "-",
                })?;
                e.write_prec(f, 6)?;
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                if op.is_comparison() {
                    l.write_prec(f, p + 1)?;
                    write!(f, " {} ", op.symbol())?;
                    r.write_prec(f, p + 1)?;
                } else {
                    l.write_prec(f, p)?;
                    write!(f, " {} ", op.symbol())?;
                    r.write_prec(f, p + 1)?;
                }
            }
            Expr::Pow(b, e) => {
                b.write_prec(f, 8)?;
                write!(f, "^{e}")?;
            }
            Expr::If(c, t, e) => {
                f.write_str("if ")?;
                c.write_prec(f, 1)?;
                f.write_str(" then ")?;
                t.write_prec(f, 1)?;
                f.write_str(" else ")?;
                e.write_prec(f, 0)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Canonical text form; parses back to a structurally equal expression.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

fn logical(op: BinOp, l: &Value, r: &Value) -> Result<Value, EvalError> {
    let (Some(a), Some(b)) = (bool_like(l), bool_like(r)) else {
        return Err(type_err(op.symbol(), &[l, r]));
    };
    let out = match op {
        BinOp::And => a && b,
        _ => a || b,
    };
    // Booleans in, boolean out; 0/1 integers otherwise.
    if matches!((l, r), (Value::Bool(_), Value::Bool(_))) {
        Ok(Value::Bool(out))
    } else {
        Ok(Value::Int(out as i64))
    }
}

fn bool_like(v: &Value) -> Option<bool> {
    match v {
        Value::Bool(b) => Some(*b),
        Value::Int(n) => Some(*n != 0),
        _ => None,
    }
}

fn arith(op: BinOp, l: &Value, r: &Value) -> Result<Value, EvalError> {
    let sym = op.symbol();
    if let (Value::Int(a), Value::Int(b)) = (l, r) {
        let out = match op {
            BinOp::Add => i64::checked_add(*a, *b),
            BinOp::Sub => i64::checked_sub(*a, *b),
            _ => i64::checked_mul(*a, *b),
        };
        return out.map(Value::Int).ok_or(EvalError::Overflow { op: sym });
    }
    let (Some(a), Some(b)) = (l.as_rational(), r.as_rational()) else {
        return Err(type_err(sym, &[l, r]));
    };
    let out = match op {
        BinOp::Add => a.checked_add(&b),
        BinOp::Sub => a.checked_sub(&b),
        _ => a.checked_mul(&b),
    };
    out.map(Value::rational)
        .ok_or(EvalError::Overflow { op: sym })
}

fn compare(op: BinOp, l: &Value, r: &Value) -> Result<Value, EvalError> {
    use std::cmp::Ordering;
    let ord = match (l.as_rational(), r.as_rational()) {
        (Some(a), Some(b)) => Some(a.cmp(&b)),
        _ => None,
    };
    let out = match op {
        BinOp::Eq => ord.map_or(l == r, |o| o == Ordering::Equal),
        BinOp::Ne => ord.map_or(l != r, |o| o != Ordering::Equal),
        _ => {
            let Some(o) = ord else {
                return Err(type_err(op.symbol(), &[l, r]));
            };
            match op {
                BinOp::Lt => o == Ordering::Less,
                BinOp::Le => o != Ordering::Greater,
                BinOp::Gt => o == Ordering::Greater,
                _ => o != Ordering::Less,
            }
        }
    };
    Ok(Value::Bool(out))
}

fn eval_binary(op: BinOp, l: &Value, r: &Value) -> Result<Value, EvalError> {
    match op {
        BinOp::And | BinOp::Or => logical(op, l, r),
        BinOp::Add | BinOp::Sub | BinOp::Mul => arith(op, l, r),
        _ => compare(op, l, r),
    }
}
