//! Numeric evaluation of expression trees at complex points.
//!
//! `sqrt`, `ln` and non-integer powers use the principal branch. Exact
//! integer exponents are evaluated by repeated multiplication so that
//! polynomial values carry no transcendental round-off.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::expr::{CoordSym, Expr, Sym, UnaryFn};
use crate::scalar::Real;

/// Assignment of complex numbers to the free symbols of an expression.
#[derive(Clone, Debug, Default)]
pub struct NumPoint<R: Real> {
    entries: BTreeMap<Sym, Complex<R>>,
}

impl<R: Real> NumPoint<R> {
    pub fn new() -> Self {
        NumPoint {
            entries: BTreeMap::new(),
        }
    }

    pub fn set(mut self, sym: Sym, value: Complex<R>) -> Self {
        self.entries.insert(sym, value);
        self
    }

    pub fn set_coord(self, coord: CoordSym, value: Complex<R>) -> Self {
        self.set(Sym::Coord(coord), value)
    }

    pub fn set_param(self, name: impl Into<String>, value: Complex<R>) -> Self {
        self.set(Sym::Param(name.into()), value)
    }

    pub fn set_time(self, value: Complex<R>) -> Self {
        self.set(Sym::Time, value)
    }

    pub fn get(&self, sym: &Sym) -> Option<Complex<R>> {
        self.entries.get(sym).copied()
    }

    pub fn insert(&mut self, sym: Sym, value: Complex<R>) {
        self.entries.insert(sym, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Complex<R>)> {
        self.entries.iter()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    DomainError(&'static str),
}

/// Evaluates `e` at `point` with standard complex arithmetic.
pub fn eval<R: Real>(e: &Expr, point: &NumPoint<R>) -> Result<Complex<R>, EvalError> {
    match e {
        Expr::Const(c) => Ok(c.to_complex()),
        Expr::ImagUnit => Ok(Complex::new(R::zero(), R::one())),
        Expr::Param(name) => point
            .get(&Sym::Param(name.clone()))
            .ok_or_else(|| EvalError::UnboundSymbol(name.clone())),
        Expr::Coord(c) => point
            .get(&Sym::Coord(*c))
            .ok_or_else(|| EvalError::UnboundSymbol(c.to_string())),
        Expr::Time => point
            .get(&Sym::Time)
            .ok_or_else(|| EvalError::UnboundSymbol("t".into())),
        Expr::Pow(base, exp) => {
            let b = eval(base, point)?;
            match classify_exponent(exp) {
                ExpKind::Int(k) => pow_int(b, k),
                ExpKind::Half => Ok(b.sqrt()),
                ExpKind::General => {
                    let x = eval(exp, point)?;
                    pow_complex(b, x)
                }
            }
        }
        Expr::Product(fs) => {
            let mut acc = Complex::new(R::one(), R::zero());
            for f in fs {
                acc = acc * eval(f, point)?;
            }
            Ok(acc)
        }
        Expr::Sum(ts) => {
            let mut acc = Complex::new(R::zero(), R::zero());
            for t in ts {
                acc = acc + eval(t, point)?;
            }
            Ok(acc)
        }
        Expr::Quotient(num, den) => {
            let d = eval(den, point)?;
            if d.is_zero() {
                return Err(EvalError::DivisionByZero);
            }
            Ok(eval(num, point)? / d)
        }
        Expr::Neg(x) => Ok(-eval(x, point)?),
        Expr::Func(f, x) => {
            let v = eval(x, point)?;
            match f {
                UnaryFn::Sqrt => Ok(v.sqrt()),
                UnaryFn::Sin => Ok(v.sin()),
                UnaryFn::Cos => Ok(v.cos()),
                UnaryFn::Exp => Ok(v.exp()),
                UnaryFn::Ln => {
                    if v.is_zero() {
                        return Err(EvalError::DomainError("ln of 0"));
                    }
                    Ok(v.ln())
                }
            }
        }
        Expr::Conj(x) => Ok(eval(x, point)?.conj()),
    }
}

enum ExpKind {
    Int(i64),
    Half,
    General,
}

fn classify_exponent(exp: &Expr) -> ExpKind {
    if let Expr::Const(c) = exp {
        if let Some(k) = c.to_i64() {
            return ExpKind::Int(k);
        }
        if *c == crate::scalar::CRational::ratio(1, 2) {
            return ExpKind::Half;
        }
    }
    ExpKind::General
}

/// Integer power by repeated squaring.
pub(crate) fn pow_int<R: Real>(base: Complex<R>, k: i64) -> Result<Complex<R>, EvalError> {
    if k == 0 {
        return Ok(Complex::new(R::one(), R::zero()));
    }
    if base.is_zero() {
        if k > 0 {
            return Ok(Complex::zero());
        }
        return Err(EvalError::DivisionByZero);
    }
    let mut b = if k < 0 { base.inv() } else { base };
    let mut e = k.unsigned_abs();
    let mut acc = Complex::new(R::one(), R::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b;
        }
        b = b * b;
        e >>= 1;
    }
    Ok(acc)
}

/// Principal-branch complex power.
pub(crate) fn pow_complex<R: Real>(
    base: Complex<R>,
    exp: Complex<R>,
) -> Result<Complex<R>, EvalError> {
    if base.is_zero() {
        if exp.is_zero() {
            return Ok(Complex::new(R::one(), R::zero()));
        }
        if exp.re > R::zero() && exp.im.is_zero() {
            return Ok(Complex::zero());
        }
        return Err(EvalError::DivisionByZero);
    }
    Ok((exp * base.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::CoordRole;
    use crate::simplify::simplify;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn i_squared_is_minus_one() {
        let e = Expr::pow(Expr::i(), Expr::int(2));
        assert_eq!(eval(&e, &NumPoint::<f64>::new()).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn momentum_value_matches() {
        // (1/2)*m*zbd1 at m=1, zbd1 = 2-2i
        let e = Expr::ratio(1, 2) * Expr::param("m") * Expr::zbd(1);
        let p = NumPoint::new()
            .set_param("m", c(1.0, 0.0))
            .set_coord(CoordSym::new(CoordRole::ZBarDot, 1), c(2.0, -2.0));
        assert_eq!(eval(&e, &p).unwrap(), c(1.0, -1.0));
    }

    #[test]
    fn rod_constraint_factor_value() {
        // 4*l^2 - (z1+zb1)^2 at l=1, z1 = 0.1+0.3i, zb1 = conj
        let e = Expr::int(4) * Expr::pow(Expr::param("l"), Expr::int(2))
            - Expr::pow(Expr::z(1) + Expr::zb(1), Expr::int(2));
        let p = NumPoint::new()
            .set_param("l", c(1.0, 0.0))
            .set_coord(CoordSym::new(CoordRole::Z, 1), c(0.1, 0.3))
            .set_coord(CoordSym::new(CoordRole::ZBar, 1), c(0.1, -0.3));
        let v = eval(&e, &p).unwrap();
        assert!((v - c(3.96, 0.0)).norm() < 1e-15, "got {}", v);
        // value is preserved by simplification
        let vs = eval(&simplify(&e), &p).unwrap();
        assert!((vs - c(3.96, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unbound_symbol_is_reported() {
        let err = eval(&Expr::param("mass"), &NumPoint::<f64>::new()).unwrap_err();
        assert_eq!(err, EvalError::UnboundSymbol("mass".into()));
    }

    #[test]
    fn division_by_zero_and_ln_zero() {
        let q = Expr::one() / Expr::zero();
        assert_eq!(
            eval(&q, &NumPoint::<f64>::new()).unwrap_err(),
            EvalError::DivisionByZero
        );
        let l = Expr::ln(Expr::zero());
        assert!(matches!(
            eval(&l, &NumPoint::<f64>::new()).unwrap_err(),
            EvalError::DomainError(_)
        ));
    }

    #[test]
    fn principal_branch_sqrt() {
        let e = Expr::sqrt(Expr::int(-4));
        let v = eval(&e, &NumPoint::<f64>::new()).unwrap();
        assert!((v - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let e = Expr::ratio(1, 4) * Expr::z(1);
        let p: NumPoint<f32> = NumPoint::new().set_coord(
            CoordSym::new(CoordRole::Z, 1),
            Complex::new(2.0f32, 0.0f32),
        );
        assert_eq!(eval(&e, &p).unwrap(), Complex::new(0.5f32, 0.0));
    }
}
