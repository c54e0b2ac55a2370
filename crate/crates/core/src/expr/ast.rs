use std::collections::BTreeSet;
use std::fmt;

use crate::error::{EvalError, EvalResult};
use crate::numeric::Scalar;

/// Coordinate namespace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ns {
    /// Base of M.
    X,
    /// Base of N.
    Chi,
    /// Fiber of E.
    Y,
    /// Fiber of E*.
    P,
}

impl Ns {
    pub fn prefix(self) -> &'static str {
        match self {
            Ns::X => "x",
            Ns::Chi => "chi",
            Ns::Y => "y",
            Ns::P => "p",
        }
    }
}

/// A coordinate symbol. Indices are stored 0-based and written 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Coord(Ns, usize),
    /// Identifier that is not a coordinate name; rejected by validation.
    Other(String),
}

impl Sym {
    pub fn x(i: usize) -> Self {
        Sym::Coord(Ns::X, i)
    }
    pub fn chi(i: usize) -> Self {
        Sym::Coord(Ns::Chi, i)
    }
    pub fn y(i: usize) -> Self {
        Sym::Coord(Ns::Y, i)
    }
    pub fn p(i: usize) -> Self {
        Sym::Coord(Ns::P, i)
    }

    /// Parses `x3`, `chi1`, ...; anything else becomes [`Sym::Other`].
    pub fn from_name(name: &str) -> Self {
        for ns in [Ns::Chi, Ns::X, Ns::Y, Ns::P] {
            if let Some(digits) = name.strip_prefix(ns.prefix()) {
                if !digits.is_empty() && !digits.starts_with('0') && digits.bytes().all(|b| b.is_ascii_digit()) {
                    if let Ok(k) = digits.parse::<usize>() {
                        return Sym::Coord(ns, k - 1);
                    }
                }
            }
        }
        Sym::Other(name.to_string())
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Coord(ns, i) => write!(f, "{}{}", ns.prefix(), i + 1),
            Sym::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Pow,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sqrt, Func::Pow];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        if self == Func::Pow {
            2
        } else {
            1
        }
    }

    pub fn lookup(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Sym(Sym),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// Variable lookup for evaluation, one slice per namespace.
#[derive(Debug, Clone, Copy)]
pub struct Env<'a, S> {
    pub x: &'a [S],
    pub chi: &'a [S],
    pub y: &'a [S],
    pub p: &'a [S],
}

impl<'a, S> Env<'a, S> {
    pub fn empty() -> Self {
        Env { x: &[], chi: &[], y: &[], p: &[] }
    }

    pub fn get(&self, s: &Sym) -> Option<&'a S> {
        match s {
            Sym::Coord(Ns::X, i) => self.x.get(*i),
            Sym::Coord(Ns::Chi, i) => self.chi.get(*i),
            Sym::Coord(Ns::Y, i) => self.y.get(*i),
            Sym::Coord(Ns::P, i) => self.p.get(*i),
            Sym::Other(_) => None,
        }
    }
}

/// Exponents that are small integers are evaluated with `powi`.
const MAX_INT_EXPONENT: f64 = 1024.0;

fn power<S: Scalar>(base: S, exponent: &Expr, env: &Env<S>) -> EvalResult<S> {
    if exponent.is_constant() {
        let c = exponent.eval::<f64>(&Env::empty())?;
        if c.fract() == 0.0 && c.abs() <= MAX_INT_EXPONENT {
            if c < 0.0 && base.re() == 0.0 {
                return Err(EvalError::domain("zero raised to a negative power"));
            }
            return Ok(base.powi(c as i32));
        }
        if base.re() <= 0.0 {
            return Err(EvalError::domain(format!("non-positive base {} raised to non-integer power {c}", base.re())));
        }
        return Ok(base.powf(c));
    }
    if base.re() <= 0.0 {
        return Err(EvalError::domain(format!("non-positive base {} raised to a variable power", base.re())));
    }
    let e = exponent.eval(env)?;
    Ok((e * base.ln()).exp())
}

impl Expr {
    pub fn num(v: f64) -> Self {
        Expr::Num(v)
    }

    pub fn sym(s: Sym) -> Self {
        Expr::Sym(s)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Sym(_) => false,
            Expr::Neg(a) => a.is_constant(),
            Expr::Bin(_, a, b) => a.is_constant() && b.is_constant(),
            Expr::Call(_, args) => args.iter().all(Expr::is_constant),
        }
    }

    /// Literal zero, possibly negated.
    pub fn is_zero_literal(&self) -> bool {
        match self {
            Expr::Num(v) => *v == 0.0,
            Expr::Neg(a) => a.is_zero_literal(),
            _ => false,
        }
    }

    pub fn collect_symbols(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Neg(a) => a.collect_symbols(out),
            Expr::Bin(_, a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.collect_symbols(out)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Sym(_) => 1,
            Expr::Neg(a) => 1 + a.depth(),
            Expr::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
            Expr::Call(_, args) => 1 + args.iter().map(Expr::depth).max().unwrap_or(0),
        }
    }

    pub fn eval<S: Scalar>(&self, env: &Env<S>) -> EvalResult<S> {
        match self {
            Expr::Num(v) => Ok(S::from_f64(*v)),
            Expr::Sym(s) => env.get(s).cloned().ok_or_else(|| EvalError::UnknownSymbol(s.to_string())),
            Expr::Neg(a) => Ok(-a.eval(env)?),
            Expr::Bin(op, a, b) => {
                let l = a.eval(env)?;
                match op {
                    BinOp::Add => Ok(l + b.eval(env)?),
                    BinOp::Sub => Ok(l - b.eval(env)?),
                    BinOp::Mul => Ok(l * b.eval(env)?),
                    BinOp::Div => {
                        let r = b.eval(env)?;
                        if r.re() == 0.0 {
                            return Err(EvalError::domain("division by zero"));
                        }
                        Ok(l / r)
                    }
                    BinOp::Pow => power(l, b, env),
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(env)?;
                match f {
                    Func::Exp => Ok(a.exp()),
                    Func::Log => {
                        if a.re() <= 0.0 {
                            return Err(EvalError::domain(format!("log of non-positive value {}", a.re())));
                        }
                        Ok(a.ln())
                    }
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                    Func::Sqrt => {
                        if a.re() < 0.0 || (a.re() == 0.0 && S::ORDER > 0) {
                            return Err(EvalError::domain(format!("sqrt of {}", a.re())));
                        }
                        Ok(a.sqrt())
                    }
                    Func::Pow => power(a, &args[1], env),
                }
            }
        }
    }
}

// Pretty printing with the minimal parentheses that re-parse to the same tree.
// Levels: 0 sum, 1 product, 2 unary, 3 power, 4 primary.

fn bin_level(op: BinOp) -> u8 {
    match op {
        BinOp::Add | BinOp::Sub => 0,
        BinOp::Mul | BinOp::Div => 1,
        BinOp::Pow => 3,
    }
}

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Num(_) | Expr::Sym(_) | Expr::Call(..) => 4,
        Expr::Neg(_) => 2,
        Expr::Bin(op, ..) => bin_level(*op),
    }
}

fn write_at(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_num(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        // Only produced by hand-built trees; the parser never yields negative literals.
        write!(f, "({v:?})")
    } else {
        write!(f, "{v:?}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write_num(*v, f),
            Expr::Sym(s) => write!(f, "{s}"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(a, 2, f)
            }
            Expr::Bin(op, a, b) => {
                let lv = bin_level(*op);
                if *op == BinOp::Pow {
                    write_at(a, 4, f)?;
                    f.write_str("^")?;
                    write_at(b, 2, f)
                } else {
                    write_at(a, lv, f)?;
                    write!(f, "{}", op.symbol())?;
                    write_at(b, lv + 1, f)
                }
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
