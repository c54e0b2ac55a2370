use std::collections::BTreeSet;
use std::fmt;

use crate::error::{EvalError, EvalResult};
use crate::numeric::{Jet2, Scalar};

use super::ast::{Env, Expr, Ns, Sym};
use super::parse::{parse_expr, ParseError};

/// Parsed expression together with its free symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    ast: Expr,
    free: BTreeSet<Sym>,
}

impl ScalarField {
    pub fn new(ast: Expr) -> Self {
        let mut free = BTreeSet::new();
        ast.collect_symbols(&mut free);
        ScalarField { ast, free }
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        Ok(Self::new(parse_expr(src)?))
    }

    pub fn constant(v: f64) -> Self {
        Self::new(Expr::Num(v))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn free_symbols(&self) -> &BTreeSet<Sym> {
        &self.free
    }

    pub fn uses(&self, ns: Ns) -> bool {
        self.free.iter().any(|s| matches!(s, Sym::Coord(n, _) if *n == ns))
    }

    pub fn is_zero_literal(&self) -> bool {
        self.ast.is_zero_literal()
    }

    pub fn eval<S: Scalar>(&self, env: &Env<S>) -> EvalResult<S> {
        self.ast.eval(env)
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ast)
    }
}

/// Named coordinate values of a point, one vector per namespace.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Point {
    pub x: Vec<f64>,
    pub chi: Vec<f64>,
    pub y: Vec<f64>,
    pub p: Vec<f64>,
}

impl Point {
    fn slot(&self, s: &Sym) -> Option<f64> {
        Env { x: &self.x, chi: &self.chi, y: &self.y, p: &self.p }.get(s).copied()
    }
}

/// Value, gradient and Hessian of `field` at `point` with respect to `active`,
/// in the order given; other coordinates are held constant.
pub fn eval_jet2(field: &ScalarField, point: &Point, active: &[Sym]) -> EvalResult<Jet2<f64>> {
    let n = active.len();
    let lift = |ns: Ns, vals: &[f64]| -> Vec<Jet2<f64>> {
        vals.iter()
            .enumerate()
            .map(|(i, &v)| match active.iter().position(|s| *s == Sym::Coord(ns, i)) {
                Some(k) => Jet2::variable(v, k, n),
                None => Jet2::constant(v),
            })
            .collect()
    };
    for s in active {
        if point.slot(s).is_none() {
            return Err(EvalError::UnknownSymbol(s.to_string()));
        }
    }
    let (x, chi, y, p) = (lift(Ns::X, &point.x), lift(Ns::Chi, &point.chi), lift(Ns::Y, &point.y), lift(Ns::P, &point.p));
    let out = field.eval(&Env { x: &x, chi: &chi, y: &y, p: &p })?;
    // constants come back with an empty gradient
    if out.g.is_empty() && n > 0 {
        return Ok(Jet2 { v: out.v, g: vec![0.0; n], h: vec![0.0; n * (n + 1) / 2] });
    }
    Ok(out)
}
