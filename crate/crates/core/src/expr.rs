//! Immutable expression trees over complex coordinates, velocities,
//! parameters and exact complex-rational constants.
//!
//! Structural equality of canonical forms relies on a fixed total order on
//! nodes. The order used throughout is the derived one on [`Expr`]:
//! constants < imaginary unit < parameters (lexicographic) < coordinates
//! (by role, then index) < time < power < product < sum < quotient <
//! negation < function < conjugation. Canonical trees produced by
//! [`crate::simplify::simplify`] never contain the last six composite kinds
//! except `Pow`, `Product`, `Sum` and `Func`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::CRational;

/// Which member of the coordinate family a symbol denotes.
///
/// `Z`/`ZBar` are positions, `ZDot`/`ZBarDot` velocities and
/// `ZDdot`/`ZBarDdot` accelerations; barred roles are the conjugate
/// channel.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CoordRole {
    Z,
    ZBar,
    ZDot,
    ZBarDot,
    ZDdot,
    ZBarDdot,
}

impl CoordRole {
    /// The role produced by complex conjugation.
    pub fn conjugate(self) -> CoordRole {
        match self {
            CoordRole::Z => CoordRole::ZBar,
            CoordRole::ZBar => CoordRole::Z,
            CoordRole::ZDot => CoordRole::ZBarDot,
            CoordRole::ZBarDot => CoordRole::ZDot,
            CoordRole::ZDdot => CoordRole::ZBarDdot,
            CoordRole::ZBarDdot => CoordRole::ZDdot,
        }
    }

    /// The role one time-derivative up, if it is still representable.
    pub fn dotted(self) -> Option<CoordRole> {
        match self {
            CoordRole::Z => Some(CoordRole::ZDot),
            CoordRole::ZBar => Some(CoordRole::ZBarDot),
            CoordRole::ZDot => Some(CoordRole::ZDdot),
            CoordRole::ZBarDot => Some(CoordRole::ZBarDdot),
            CoordRole::ZDdot | CoordRole::ZBarDdot => None,
        }
    }

    pub fn is_acceleration(self) -> bool {
        matches!(self, CoordRole::ZDdot | CoordRole::ZBarDdot)
    }

    /// Surface-syntax prefix (`z`, `zb`, `zd`, `zbd`, `zdd`, `zbdd`).
    pub fn prefix(self) -> &'static str {
        match self {
            CoordRole::Z => "z",
            CoordRole::ZBar => "zb",
            CoordRole::ZDot => "zd",
            CoordRole::ZBarDot => "zbd",
            CoordRole::ZDdot => "zdd",
            CoordRole::ZBarDdot => "zbdd",
        }
    }
}

/// A coordinate symbol: role plus 1-based index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoordSym {
    pub role: CoordRole,
    pub index: u32,
}

impl CoordSym {
    pub fn new(role: CoordRole, index: u32) -> Self {
        debug_assert!(index >= 1, "coordinate indices are 1-based");
        CoordSym { role, index }
    }
}

impl fmt::Display for CoordSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.role.prefix(), self.index)
    }
}

/// Any symbol a binding may target.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    Param(String),
    Coord(CoordSym),
    Time,
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Param(name) => write!(f, "{}", name),
            Sym::Coord(c) => write!(f, "{}", c),
            Sym::Time => write!(f, "t"),
        }
    }
}

/// Unary function heads recognised by the kernel.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum UnaryFn {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Ln,
}

impl UnaryFn {
    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Ln => "ln",
        }
    }
}

/// Immutable symbolic expression tree.
///
/// All transformations return fresh trees; sharing is by clone. Constants
/// are exact complex rationals. Variant order defines the canonical total
/// order (see module docs), so keep it stable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Expr {
    /// Exact complex-rational constant.
    Const(CRational),
    /// The imaginary unit literal; canonicalised to `Const(i)` by simplify.
    ImagUnit,
    /// Named real parameter.
    Param(String),
    /// Coordinate-family symbol.
    Coord(CoordSym),
    /// Explicit time.
    Time,
    /// Power with arbitrary base and exponent.
    Pow(Box<Expr>, Box<Expr>),
    /// n-ary product; canonical form is flattened, constant-folded, sorted.
    Product(Vec<Expr>),
    /// n-ary sum; canonical form is flattened, like-term-collected, sorted.
    Sum(Vec<Expr>),
    /// Quotient; canonicalised to `num * den^-1`.
    Quotient(Box<Expr>, Box<Expr>),
    /// Negation; canonicalised to `-1 * x`.
    Neg(Box<Expr>),
    /// Unary function application.
    Func(UnaryFn, Box<Expr>),
    /// Conjugation wrapper; canonicalised away structurally.
    Conj(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(CRational::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::Const(CRational::ratio(num, den))
    }

    pub fn i() -> Expr {
        Expr::ImagUnit
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    pub fn coord(role: CoordRole, index: u32) -> Expr {
        Expr::Coord(CoordSym::new(role, index))
    }

    pub fn z(i: u32) -> Expr {
        Expr::coord(CoordRole::Z, i)
    }

    pub fn zb(i: u32) -> Expr {
        Expr::coord(CoordRole::ZBar, i)
    }

    pub fn zd(i: u32) -> Expr {
        Expr::coord(CoordRole::ZDot, i)
    }

    pub fn zbd(i: u32) -> Expr {
        Expr::coord(CoordRole::ZBarDot, i)
    }

    pub fn zdd(i: u32) -> Expr {
        Expr::coord(CoordRole::ZDdot, i)
    }

    pub fn zbdd(i: u32) -> Expr {
        Expr::coord(CoordRole::ZBarDdot, i)
    }

    pub fn pow(base: Expr, exp: Expr) -> Expr {
        Expr::Pow(Box::new(base), Box::new(exp))
    }

    pub fn sum(terms: Vec<Expr>) -> Expr {
        Expr::Sum(terms)
    }

    pub fn product(factors: Vec<Expr>) -> Expr {
        Expr::Product(factors)
    }

    pub fn func(f: UnaryFn, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn sqrt(arg: Expr) -> Expr {
        Expr::func(UnaryFn::Sqrt, arg)
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::func(UnaryFn::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::func(UnaryFn::Cos, arg)
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::func(UnaryFn::Exp, arg)
    }

    pub fn ln(arg: Expr) -> Expr {
        Expr::func(UnaryFn::Ln, arg)
    }

    pub fn conj(arg: Expr) -> Expr {
        Expr::Conj(Box::new(arg))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    /// Child expressions, in structural order.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const(_) | Expr::ImagUnit | Expr::Param(_) | Expr::Coord(_) | Expr::Time => {
                vec![]
            }
            Expr::Pow(b, e) => vec![b, e],
            Expr::Product(xs) | Expr::Sum(xs) => xs.iter().collect(),
            Expr::Quotient(a, b) => vec![a, b],
            Expr::Neg(x) | Expr::Func(_, x) | Expr::Conj(x) => vec![x],
        }
    }

    /// Walks the tree applying `f` to every node (pre-order).
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Free symbols of the expression.
    pub fn free_symbols(&self) -> std::collections::BTreeSet<Sym> {
        let mut out = std::collections::BTreeSet::new();
        self.visit(&mut |e| match e {
            Expr::Param(name) => {
                out.insert(Sym::Param(name.clone()));
            }
            Expr::Coord(c) => {
                out.insert(Sym::Coord(*c));
            }
            Expr::Time => {
                out.insert(Sym::Time);
            }
            _ => {}
        });
        out
    }

    /// True iff `sym` occurs anywhere in the tree.
    pub fn contains_symbol(&self, sym: &Sym) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            found |= match (e, sym) {
                (Expr::Param(a), Sym::Param(b)) => a == b,
                (Expr::Coord(a), Sym::Coord(b)) => a == b,
                (Expr::Time, Sym::Time) => true,
                _ => false,
            };
        });
        found
    }

    /// True iff the tree mentions any acceleration symbol.
    pub fn contains_acceleration(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if let Expr::Coord(c) = e {
                found |= c.role.is_acceleration();
            }
        });
        found
    }

    /// Largest coordinate index mentioned, if any.
    pub fn max_coord_index(&self) -> Option<u32> {
        let mut max = None;
        self.visit(&mut |e| {
            if let Expr::Coord(c) = e {
                max = Some(max.map_or(c.index, |m: u32| m.max(c.index)));
            }
        });
        max
    }
}

// Operator sugar builds raw (uncanonicalised) nodes; run `simplify` for
// canonical forms.
impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Sum(vec![self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sum(vec![self, Expr::Neg(Box::new(rhs))])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Product(vec![self, rhs])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Quotient(Box::new(self), Box::new(rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::printer::print_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_order_follows_variant_order() {
        let c = Expr::int(3);
        let i = Expr::ImagUnit;
        let p = Expr::param("m");
        let z = Expr::z(1);
        assert!(c < i && i < p && p < z && z < Expr::Time);
        assert!(Expr::param("a") < Expr::param("b"));
        assert!(Expr::z(1) < Expr::z(2));
        assert!(Expr::z(2) < Expr::zb(1));
    }

    #[test]
    fn free_symbols_are_collected() {
        let e = Expr::param("m") * Expr::zd(1) + Expr::z(2) * Expr::Time;
        let syms = e.free_symbols();
        assert!(syms.contains(&Sym::Param("m".into())));
        assert!(syms.contains(&Sym::Coord(CoordSym::new(CoordRole::ZDot, 1))));
        assert!(syms.contains(&Sym::Time));
        assert_eq!(syms.len(), 4);
    }

    #[test]
    fn acceleration_detection() {
        assert!(Expr::zbdd(1).contains_acceleration());
        assert!(!(Expr::z(1) * Expr::zd(1)).contains_acceleration());
    }
}
