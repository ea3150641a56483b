//! Canonical-form simplification.
//!
//! Canonical trees satisfy:
//! - no `ImagUnit`, `Neg`, `Quotient` or `Conj` nodes (rewritten to
//!   constants, `-1 *`, `* den^-1` and structural conjugation);
//! - `sqrt(x)` is `x^(1/2)`;
//! - sums and products are flattened and sorted under the node order, with
//!   constants folded, like terms collected and like bases merged by adding
//!   exponents (sound for principal-branch powers);
//! - a product carries at most one constant factor, in front, and never
//!   both a constant factor and a sum factor (the constant is pushed into
//!   the first sum);
//! - integer powers of products and of powers are flattened.
//!
//! Simplification is value-preserving wherever the input is defined and
//! idempotent; unrecognised patterns pass through untouched.

use std::collections::BTreeMap;

use crate::expr::{Expr, UnaryFn};
use crate::scalar::CRational;

/// Largest integer exponent folded into an exact constant.
const MAX_CONST_POW: i64 = 4096;

/// Returns the canonical form of `e`.
pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Param(_) | Expr::Coord(_) | Expr::Time => e.clone(),
        Expr::ImagUnit => Expr::Const(CRational::i()),
        Expr::Pow(b, x) => norm_pow(simplify(b), simplify(x)),
        Expr::Product(fs) => norm_product(fs.iter().map(simplify).collect()),
        Expr::Sum(ts) => norm_sum(ts.iter().map(simplify).collect()),
        Expr::Quotient(a, b) => {
            let num = simplify(a);
            let den = norm_pow(simplify(b), Expr::int(-1));
            norm_product(vec![num, den])
        }
        Expr::Neg(x) => norm_product(vec![Expr::int(-1), simplify(x)]),
        Expr::Func(f, x) => norm_func(*f, simplify(x)),
        Expr::Conj(x) => conj_canonical(&simplify(x)),
    }
}

/// Structural complex conjugation: swaps barred and unbarred coordinate
/// roles, conjugates constants, and leaves parameters and time fixed
/// (they are declared real). Returns a canonical tree; involutive on
/// canonical input.
pub fn conjugate(e: &Expr) -> Expr {
    conj_canonical(&simplify(e))
}

fn conj_canonical(e: &Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(c.conj()),
        Expr::ImagUnit => Expr::Const(CRational::i().conj()),
        Expr::Param(_) | Expr::Time => e.clone(),
        Expr::Coord(c) => Expr::coord(c.role.conjugate(), c.index),
        Expr::Pow(b, x) => norm_pow(conj_canonical(b), conj_canonical(x)),
        Expr::Product(fs) => norm_product(fs.iter().map(conj_canonical).collect()),
        Expr::Sum(ts) => norm_sum(ts.iter().map(conj_canonical).collect()),
        Expr::Quotient(a, b) => norm_product(vec![
            conj_canonical(a),
            norm_pow(conj_canonical(b), Expr::int(-1)),
        ]),
        Expr::Neg(x) => norm_product(vec![Expr::int(-1), conj_canonical(x)]),
        Expr::Func(f, x) => norm_func(*f, conj_canonical(x)),
        Expr::Conj(x) => simplify(x),
    }
}

/// Exponent value when `e` is a real integer constant.
fn as_integer_const(e: &Expr) -> Option<i64> {
    match e {
        Expr::Const(c) => c.to_i64(),
        _ => None,
    }
}

/// Canonical power of canonical operands.
pub(crate) fn norm_pow(base: Expr, exp: Expr) -> Expr {
    if exp.is_zero() {
        return Expr::one();
    }
    if exp.is_one() {
        return base;
    }
    if base.is_one() {
        return Expr::one();
    }
    if base.is_zero() {
        if let Expr::Const(c) = &exp {
            if c.is_real() && c.re > num_traits::Zero::zero() {
                return Expr::zero();
            }
        }
        return Expr::pow(base, exp);
    }
    if let Some(k) = as_integer_const(&exp) {
        if let Expr::Const(c) = &base {
            if k.abs() <= MAX_CONST_POW {
                return Expr::Const(c.powi(k));
            }
        }
        match base {
            // (b^p)^k = b^(p*k) for integer k.
            Expr::Pow(b2, e2) => {
                let merged = norm_product(vec![*e2, Expr::int(k)]);
                return norm_pow(*b2, merged);
            }
            // (a*b)^k = a^k * b^k for integer k.
            Expr::Product(fs) => {
                let powered = fs.into_iter().map(|f| norm_pow(f, Expr::int(k))).collect();
                return norm_product(powered);
            }
            _ => return Expr::pow(base, exp),
        }
    }
    Expr::pow(base, exp)
}

/// Canonical product of canonical factors.
pub(crate) fn norm_product(factors: Vec<Expr>) -> Expr {
    let mut coeff = CRational::one();
    let mut flat: Vec<Expr> = Vec::new();
    let mut stack: Vec<Expr> = factors;
    stack.reverse();
    while let Some(f) = stack.pop() {
        match f {
            Expr::Product(children) => stack.extend(children.into_iter().rev()),
            Expr::Const(c) => coeff = &coeff * &c,
            other => flat.push(other),
        }
    }
    if coeff.is_zero() {
        return Expr::zero();
    }

    // Merge like bases by summing exponents.
    let mut by_base: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
    for f in flat {
        let (b, e) = match f {
            Expr::Pow(b, e) => (*b, *e),
            other => (other, Expr::one()),
        };
        by_base.entry(b).or_default().push(e);
    }

    let mut rebuilt: Vec<Expr> = Vec::new();
    let mut needs_repass = false;
    for (b, exps) in by_base {
        let e = norm_sum(exps);
        let r = norm_pow(b, e);
        if matches!(r, Expr::Const(_) | Expr::Product(_)) {
            needs_repass = true;
        }
        rebuilt.push(r);
    }
    if needs_repass {
        rebuilt.push(Expr::Const(coeff));
        return norm_product(rebuilt);
    }

    // Push a nontrivial coefficient into the first sum factor, if any, so
    // that conjugation and like-term collection see one normal form.
    if !coeff.is_one() {
        rebuilt.sort();
        if let Some(pos) = rebuilt.iter().position(|f| matches!(f, Expr::Sum(_))) {
            let sum = rebuilt.remove(pos);
            rebuilt.push(scale_sum(sum, &coeff));
            return norm_product(rebuilt);
        }
    }

    rebuilt.sort();
    match (coeff.is_one(), rebuilt.len()) {
        (_, 0) => Expr::Const(coeff),
        (true, 1) => rebuilt.pop().unwrap(),
        (true, _) => Expr::Product(rebuilt),
        (false, _) => {
            let mut out = Vec::with_capacity(rebuilt.len() + 1);
            out.push(Expr::Const(coeff));
            out.extend(rebuilt);
            Expr::Product(out)
        }
    }
}

/// Multiplies every term of a canonical sum by a nonzero constant.
fn scale_sum(sum: Expr, c: &CRational) -> Expr {
    let terms = match sum {
        Expr::Sum(ts) => ts,
        other => vec![other],
    };
    let scaled = terms
        .into_iter()
        .map(|t| {
            let (tc, fs) = split_coeff(t);
            term_from(&tc * c, fs)
        })
        .collect();
    norm_sum(scaled)
}

/// Canonical sum of canonical terms.
pub(crate) fn norm_sum(terms: Vec<Expr>) -> Expr {
    let mut const_acc = CRational::zero();
    let mut by_rest: BTreeMap<Vec<Expr>, CRational> = BTreeMap::new();
    let mut stack: Vec<Expr> = terms;
    stack.reverse();
    while let Some(t) = stack.pop() {
        match t {
            Expr::Sum(children) => stack.extend(children.into_iter().rev()),
            other => {
                let (c, fs) = split_coeff(other);
                if fs.is_empty() {
                    const_acc = &const_acc + &c;
                } else {
                    let entry = by_rest.entry(fs).or_insert_with(CRational::zero);
                    *entry = &*entry + &c;
                }
            }
        }
    }

    let mut out: Vec<Expr> = Vec::new();
    if !const_acc.is_zero() {
        out.push(Expr::Const(const_acc));
    }
    for (fs, c) in by_rest {
        if c.is_zero() {
            continue;
        }
        out.push(term_from(c, fs));
    }
    out.sort();
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Sum(out),
    }
}

/// Splits a canonical non-sum term into (constant coefficient, remaining
/// factors). The factor list is empty for pure constants.
fn split_coeff(term: Expr) -> (CRational, Vec<Expr>) {
    match term {
        Expr::Const(c) => (c, vec![]),
        Expr::Product(fs) => {
            let mut coeff = CRational::one();
            let mut rest = Vec::with_capacity(fs.len());
            for f in fs {
                match f {
                    Expr::Const(c) => coeff = &coeff * &c,
                    other => rest.push(other),
                }
            }
            (coeff, rest)
        }
        other => (CRational::one(), vec![other]),
    }
}

/// Rebuilds a term from a coefficient and sorted constant-free factors.
fn term_from(coeff: CRational, mut factors: Vec<Expr>) -> Expr {
    if coeff.is_zero() {
        return Expr::zero();
    }
    if factors.is_empty() {
        return Expr::Const(coeff);
    }
    if coeff.is_one() {
        if factors.len() == 1 {
            return factors.pop().unwrap();
        }
        return Expr::Product(factors);
    }
    if factors.iter().any(|f| matches!(f, Expr::Sum(_))) {
        // Keep the no-constant-next-to-sum invariant.
        factors.push(Expr::Const(coeff));
        return norm_product(factors);
    }
    let mut out = Vec::with_capacity(factors.len() + 1);
    out.push(Expr::Const(coeff));
    out.extend(factors);
    Expr::Product(out)
}

/// Canonical unary function application.
pub(crate) fn norm_func(f: UnaryFn, arg: Expr) -> Expr {
    match f {
        UnaryFn::Sqrt => return norm_pow(arg, Expr::ratio(1, 2)),
        UnaryFn::Sin if arg.is_zero() => return Expr::zero(),
        UnaryFn::Cos if arg.is_zero() => return Expr::one(),
        UnaryFn::Exp if arg.is_zero() => return Expr::one(),
        UnaryFn::Ln if arg.is_one() => return Expr::zero(),
        _ => {}
    }
    Expr::func(f, arg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let e = Expr::i() * Expr::i();
        assert_eq!(simplify(&e), Expr::int(-1));
    }

    #[test]
    fn like_terms_collect() {
        let e = Expr::z(1) + Expr::z(1);
        assert_eq!(simplify(&e), simplify(&(Expr::int(2) * Expr::z(1))));
    }

    #[test]
    fn cancelling_terms_vanish() {
        let e = Expr::z(1) - Expr::z(1);
        assert_eq!(simplify(&e), Expr::zero());
        let q = Expr::z(1) / Expr::z(1);
        assert_eq!(simplify(&q), Expr::one());
    }

    #[test]
    fn constants_fold_exactly() {
        let e = Expr::ratio(1, 2) * Expr::ratio(1, 2) + Expr::ratio(3, 4);
        assert_eq!(simplify(&e), Expr::int(1));
        let p = Expr::pow(Expr::ratio(1, 2), Expr::int(-2));
        assert_eq!(simplify(&p), Expr::int(4));
    }

    #[test]
    fn sqrt_becomes_half_power_and_squares_back() {
        let e = Expr::pow(Expr::sqrt(Expr::z(1) * Expr::zb(1)), Expr::int(2));
        assert_eq!(simplify(&e), simplify(&(Expr::z(1) * Expr::zb(1))));
    }

    #[test]
    fn non_integer_outer_power_does_not_flatten() {
        // (z^2)^(1/2) must stay as-is (branch cuts).
        let e = Expr::pow(Expr::pow(Expr::z(1), Expr::int(2)), Expr::ratio(1, 2));
        let s = simplify(&e);
        assert_eq!(
            s,
            Expr::pow(Expr::pow(Expr::z(1), Expr::int(2)), Expr::ratio(1, 2))
        );
    }

    #[test]
    fn integer_power_distributes_over_products() {
        let e = Expr::pow(Expr::int(2) * Expr::z(1), Expr::int(2));
        assert_eq!(
            simplify(&e),
            simplify(&(Expr::int(4) * Expr::pow(Expr::z(1), Expr::int(2))))
        );
    }

    #[test]
    fn same_base_powers_merge() {
        let half = Expr::pow(Expr::z(1) * Expr::zb(1), Expr::ratio(1, 2));
        let e = half.clone() * half;
        assert_eq!(simplify(&e), simplify(&(Expr::z(1) * Expr::zb(1))));
    }

    #[test]
    fn conjugate_swaps_roles_and_negates_i() {
        assert_eq!(conjugate(&Expr::z(1)), Expr::zb(1));
        assert_eq!(conjugate(&Expr::zbd(2)), Expr::zd(2));
        assert_eq!(
            conjugate(&Expr::i()),
            Expr::Const(&CRational::zero() - &CRational::i())
        );
        assert_eq!(conjugate(&Expr::param("m")), Expr::param("m"));
        assert_eq!(conjugate(&Expr::Time), Expr::Time);
    }

    #[test]
    fn real_combination_is_self_conjugate() {
        // I*(z1 - zb1) is real-valued on the physical slice.
        let e = Expr::i() * (Expr::z(1) - Expr::zb(1));
        let s = simplify(&e);
        assert_eq!(conjugate(&s), s);
    }

    #[test]
    fn conjugation_is_involutive_on_samples() {
        let samples = vec![
            Expr::i() * Expr::z(1) + Expr::param("m") * Expr::zbd(2),
            Expr::pow(Expr::z(1), Expr::param("alpha")) * Expr::ln(Expr::zb(1)),
            Expr::sin(Expr::Time) - Expr::i(),
        ];
        for e in samples {
            let s = simplify(&e);
            assert_eq!(conjugate(&conjugate(&s)), s, "not involutive on {:?}", s);
        }
    }

    #[test]
    fn conj_node_is_eliminated() {
        let e = Expr::conj(Expr::z(1) * Expr::i());
        let s = simplify(&e);
        assert!(!format!("{:?}", s).contains("Conj"));
        assert_eq!(
            s,
            simplify(&(Expr::Const(&CRational::zero() - &CRational::i()) * Expr::zb(1)))
        );
    }

    #[test]
    fn quotient_and_neg_normalise() {
        let e = -(Expr::z(1) / Expr::zb(1));
        let s = simplify(&e);
        assert_eq!(
            s,
            simplify(&(Expr::int(-1) * Expr::z(1) * Expr::pow(Expr::zb(1), Expr::int(-1))))
        );
    }

    #[test]
    fn function_special_values_fold() {
        assert_eq!(simplify(&Expr::sin(Expr::zero())), Expr::zero());
        assert_eq!(simplify(&Expr::cos(Expr::zero())), Expr::one());
        assert_eq!(simplify(&Expr::exp(Expr::zero())), Expr::one());
        assert_eq!(simplify(&Expr::ln(Expr::one())), Expr::zero());
    }

    #[test]
    fn zero_power_conventions() {
        assert_eq!(simplify(&Expr::pow(Expr::z(1), Expr::zero())), Expr::one());
        assert_eq!(
            simplify(&Expr::pow(Expr::zero(), Expr::ratio(3, 2))),
            Expr::zero()
        );
        // 0^(-1) stays symbolic; evaluation reports the division by zero.
        let e = simplify(&Expr::pow(Expr::zero(), Expr::int(-1)));
        assert!(matches!(e, Expr::Pow(_, _)));
    }
}
