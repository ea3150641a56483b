//! Symbol-to-expression bindings and substitution.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::expr::{Expr, Sym};
use crate::scalar::CRational;
use crate::simplify::simplify;

/// Map from symbols to replacement expressions. Values may be any
/// expression; numbers are just constant expressions.
#[derive(Clone, Debug, Default)]
pub struct Binding {
    entries: BTreeMap<Sym, Expr>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BindingError {
    #[error("cyclic binding: value bound to `{0}` mentions `{0}` itself")]
    CyclicBinding(Sym),
}

impl Binding {
    pub fn new() -> Self {
        Binding::default()
    }

    pub fn bind(mut self, sym: Sym, value: Expr) -> Self {
        self.entries.insert(sym, value);
        self
    }

    pub fn bind_param(self, name: impl Into<String>, value: Expr) -> Self {
        self.bind(Sym::Param(name.into()), value)
    }

    pub fn bind_rational(self, name: impl Into<String>, value: CRational) -> Self {
        self.bind(Sym::Param(name.into()), Expr::Const(value))
    }

    pub fn get(&self, sym: &Sym) -> Option<&Expr> {
        self.entries.get(sym)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Expr)> {
        self.entries.iter()
    }

    /// Fails iff some bound value mentions its own key.
    pub fn check_acyclic(&self) -> Result<(), BindingError> {
        for (sym, value) in &self.entries {
            if value.contains_symbol(sym) {
                return Err(BindingError::CyclicBinding(sym.clone()));
            }
        }
        Ok(())
    }
}

/// Replaces every occurrence of each bound symbol simultaneously, leaving
/// unbound symbols untouched, and returns the simplified result.
pub fn substitute(e: &Expr, binding: &Binding) -> Result<Expr, BindingError> {
    binding.check_acyclic()?;
    Ok(simplify(&replace(e, binding)))
}

fn replace(e: &Expr, b: &Binding) -> Expr {
    let lookup = |sym: Sym, orig: &Expr| b.get(&sym).cloned().unwrap_or_else(|| orig.clone());
    match e {
        Expr::Param(name) => lookup(Sym::Param(name.clone()), e),
        Expr::Coord(c) => lookup(Sym::Coord(*c), e),
        Expr::Time => lookup(Sym::Time, e),
        Expr::Const(_) | Expr::ImagUnit => e.clone(),
        Expr::Pow(base, exp) => Expr::pow(replace(base, b), replace(exp, b)),
        Expr::Product(fs) => Expr::Product(fs.iter().map(|f| replace(f, b)).collect()),
        Expr::Sum(ts) => Expr::Sum(ts.iter().map(|t| replace(t, b)).collect()),
        Expr::Quotient(x, y) => Expr::Quotient(Box::new(replace(x, b)), Box::new(replace(y, b))),
        Expr::Neg(x) => Expr::Neg(Box::new(replace(x, b))),
        Expr::Func(f, x) => Expr::func(*f, replace(x, b)),
        Expr::Conj(x) => Expr::conj(replace(x, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{CoordRole, CoordSym};

    #[test]
    fn substitutes_simple_values() {
        let e = Expr::pow(Expr::z(1), Expr::int(2));
        let b = Binding::new().bind(Sym::Coord(CoordSym::new(CoordRole::Z, 1)), Expr::int(2));
        assert_eq!(substitute(&e, &b).unwrap(), Expr::int(4));
    }

    #[test]
    fn unbound_symbols_pass_through() {
        let e = Expr::zd(1);
        let b = Binding::new().bind(
            Sym::Coord(CoordSym::new(CoordRole::ZDot, 1)),
            Expr::zdd(1) * Expr::Time,
        );
        let out = substitute(&e, &b).unwrap();
        assert_eq!(out, simplify(&(Expr::zdd(1) * Expr::Time)));
        let untouched = substitute(&Expr::zb(3), &b).unwrap();
        assert_eq!(untouched, Expr::zb(3));
    }

    #[test]
    fn cyclic_binding_is_rejected() {
        let b = Binding::new().bind(
            Sym::Coord(CoordSym::new(CoordRole::Z, 1)),
            Expr::z(1) + Expr::one(),
        );
        let err = substitute(&Expr::z(1), &b).unwrap_err();
        assert!(matches!(err, BindingError::CyclicBinding(_)));
    }

    #[test]
    fn simultaneous_swap_is_allowed() {
        let b = Binding::new()
            .bind(Sym::Coord(CoordSym::new(CoordRole::Z, 1)), Expr::zb(1))
            .bind(Sym::Coord(CoordSym::new(CoordRole::ZBar, 1)), Expr::z(1));
        let e = Expr::z(1) + Expr::int(2) * Expr::zb(1);
        let out = substitute(&e, &b).unwrap();
        assert_eq!(out, simplify(&(Expr::zb(1) + Expr::int(2) * Expr::z(1))));
    }
}
