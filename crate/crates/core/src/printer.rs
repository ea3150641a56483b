//! Plain-text rendering of expressions.
//!
//! The output re-parses to the same canonical form: for any `e`,
//! `simplify(parse(print_expr(e))) == simplify(e)`. Parentheses are only
//! emitted where precedence demands. Negative-exponent powers inside
//! products render as fractions, and `x^(1/2)` renders as `sqrt(x)`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::expr::{Expr, UnaryFn};
use crate::scalar::CRational;

/// Precedence bands: 1 sums and anything with a leading minus, 2 products
/// and quotients, 3 powers, 4 atoms and function calls.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Const(c) => const_prec(c),
        Expr::ImagUnit | Expr::Param(_) | Expr::Coord(_) | Expr::Time => 4,
        Expr::Func(_, _) | Expr::Conj(_) => 4,
        Expr::Pow(_, exp) => {
            if is_half(exp) {
                4 // renders as sqrt(..)
            } else if negative_real_exponent(exp).is_some() {
                2 // renders as 1/..
            } else {
                3
            }
        }
        Expr::Product(fs) => {
            if product_coeff(fs).map_or(false, |c| is_negative_const(&c)) {
                1
            } else {
                2
            }
        }
        Expr::Quotient(_, _) => 2,
        Expr::Sum(_) | Expr::Neg(_) => 1,
    }
}

fn const_prec(c: &CRational) -> u8 {
    if is_negative_const(c) {
        return 1;
    }
    if c.is_real() {
        if c.re.is_integer() {
            4
        } else {
            2
        }
    } else if c.re.is_zero() {
        if c.im.is_one() {
            4
        } else {
            2
        }
    } else {
        1 // a + b*I
    }
}

/// True for constants whose rendering starts with a minus sign.
fn is_negative_const(c: &CRational) -> bool {
    if c.is_real() {
        c.re.is_negative()
    } else if c.re.is_zero() {
        c.im.is_negative()
    } else {
        c.re.is_negative()
    }
}

fn is_half(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == CRational::ratio(1, 2))
}

/// For a pure-real negative constant exponent, its absolute value.
fn negative_real_exponent(e: &Expr) -> Option<BigRational> {
    match e {
        Expr::Const(c) if c.is_real() && c.re.is_negative() => Some(-c.re.clone()),
        _ => None,
    }
}

fn product_coeff(fs: &[Expr]) -> Option<CRational> {
    fs.iter().find_map(|f| match f {
        Expr::Const(c) => Some(c.clone()),
        _ => None,
    })
}

/// Renders `e` as parseable text.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, 0, &mut out);
    out
}

fn write_expr(e: &Expr, min_prec: u8, out: &mut String) {
    let own = prec(e);
    let parens = own < min_prec;
    if parens {
        out.push('(');
    }
    match e {
        Expr::Const(c) => write_const(c, out),
        Expr::ImagUnit => out.push('I'),
        Expr::Param(name) => out.push_str(name),
        Expr::Coord(c) => out.push_str(&c.to_string()),
        Expr::Time => out.push('t'),
        Expr::Func(f, x) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(x, 0, out);
            out.push(')');
        }
        Expr::Conj(x) => {
            out.push_str("conj(");
            write_expr(x, 0, out);
            out.push(')');
        }
        Expr::Pow(b, x) => write_pow(b, x, out),
        Expr::Product(fs) => write_product(fs, out),
        Expr::Quotient(a, b) => {
            write_expr(a, 2, out);
            out.push('/');
            write_expr(b, 3, out);
        }
        Expr::Neg(x) => {
            out.push('-');
            write_expr(x, 2, out);
        }
        Expr::Sum(ts) => write_sum(ts, out),
    }
    if parens {
        out.push(')');
    }
}

fn write_rational(q: &BigRational, out: &mut String) {
    out.push_str(&q.to_string());
}

fn write_const(c: &CRational, out: &mut String) {
    if c.is_real() {
        write_rational(&c.re, out);
    } else if c.re.is_zero() {
        if c.im.is_one() {
            out.push('I');
        } else if (-c.im.clone()).is_one() {
            out.push_str("-I");
        } else {
            write_rational(&c.im, out);
            out.push_str("*I");
        }
    } else {
        write_rational(&c.re, out);
        let im_abs = c.im.abs();
        out.push_str(if c.im.is_negative() { " - " } else { " + " });
        if im_abs.is_one() {
            out.push('I');
        } else {
            write_rational(&im_abs, out);
            out.push_str("*I");
        }
    }
}

fn write_pow(base: &Expr, exp: &Expr, out: &mut String) {
    if is_half(exp) {
        out.push_str("sqrt(");
        write_expr(base, 0, out);
        out.push(')');
        return;
    }
    if let Some(abs_exp) = negative_real_exponent(exp) {
        // b^(-k) renders as 1/b^k
        out.push('1');
        out.push('/');
        let positive = Expr::Pow(
            Box::new(base.clone()),
            Box::new(Expr::Const(CRational::from_real(abs_exp))),
        );
        // exponent 1 collapses to the bare base
        if positive_exponent_is_one(&positive) {
            write_expr(base, 3, out);
        } else {
            write_expr(&positive, 3, out);
        }
        return;
    }
    write_expr(base, 4, out);
    out.push('^');
    write_expr(exp, 4, out);
}

fn positive_exponent_is_one(e: &Expr) -> bool {
    matches!(e, Expr::Pow(_, exp) if exp.is_one())
}

fn write_product(fs: &[Expr], out: &mut String) {
    let mut numer: Vec<String> = Vec::new();
    let mut denom: Vec<String> = Vec::new();
    let mut negative = false;

    for f in fs {
        match f {
            Expr::Const(c) => {
                let mut c = c.clone();
                if is_negative_const(&c) {
                    negative = !negative;
                    c = &CRational::zero() - &c;
                }
                if c.is_one() {
                    continue;
                }
                let mut s = String::new();
                if c.is_real() {
                    write_rational(&c.re, &mut s);
                } else if c.re.is_zero() {
                    if !c.im.is_one() {
                        write_rational(&c.im, &mut s);
                        s.push('*');
                    }
                    s.push('I');
                } else {
                    s.push('(');
                    write_const(&c, &mut s);
                    s.push(')');
                }
                numer.push(s);
            }
            Expr::Pow(b, x) => {
                if let Some(abs_exp) = negative_real_exponent(x) {
                    let mut s = String::new();
                    if abs_exp.is_one() {
                        write_expr(b, 3, &mut s);
                    } else {
                        let positive = Expr::Pow(
                            Box::new((**b).clone()),
                            Box::new(Expr::Const(CRational::from_real(abs_exp))),
                        );
                        write_expr(&positive, 3, &mut s);
                    }
                    denom.push(s);
                } else {
                    let mut s = String::new();
                    write_expr(f, 2, &mut s);
                    numer.push(s);
                }
            }
            other => {
                let mut s = String::new();
                write_expr(other, 2, &mut s);
                numer.push(s);
            }
        }
    }

    if negative {
        out.push('-');
    }
    if numer.is_empty() {
        out.push('1');
    } else {
        out.push_str(&numer.join("*"));
    }
    for d in denom {
        out.push('/');
        out.push_str(&d);
    }
}

fn write_sum(ts: &[Expr], out: &mut String) {
    if ts.is_empty() {
        out.push('0');
        return;
    }
    for (k, t) in ts.iter().enumerate() {
        if k == 0 {
            write_expr(t, 2.min(prec(t)), out);
            continue;
        }
        if let Some(pos) = printable_negation(t) {
            out.push_str(" - ");
            write_expr(&pos, 2, out);
        } else {
            out.push_str(" + ");
            write_expr(t, 2, out);
        }
    }
}

/// If `t` renders with a leading minus, its sign-flipped counterpart.
fn printable_negation(t: &Expr) -> Option<Expr> {
    match t {
        Expr::Neg(x) => Some((**x).clone()),
        Expr::Const(c) if is_negative_const(c) => Some(Expr::Const(&CRational::zero() - c)),
        Expr::Product(fs) => {
            let coeff = product_coeff(fs)?;
            if !is_negative_const(&coeff) {
                return None;
            }
            let flipped: Vec<Expr> = fs
                .iter()
                .map(|f| match f {
                    Expr::Const(c) => Expr::Const(&CRational::zero() - c),
                    other => other.clone(),
                })
                .collect();
            Some(Expr::Product(flipped))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::simplify::simplify;

    #[test]
    fn momentum_prints_as_expected() {
        let e = simplify(&(Expr::ratio(1, 2) * Expr::param("m") * Expr::zbd(1)));
        assert_eq!(print_expr(&e), "1/2*m*zbd1");
    }

    #[test]
    fn sums_use_minus_signs() {
        let e = simplify(&(Expr::z(1) - Expr::zb(1)));
        assert_eq!(print_expr(&e), "z1 - zb1");
    }

    #[test]
    fn negative_powers_render_as_fractions() {
        let e = simplify(&(Expr::z(1) / Expr::param("A")));
        assert_eq!(print_expr(&e), "z1/A");
        let e2 = simplify(&(Expr::one() / Expr::pow(Expr::param("A"), Expr::int(2))));
        assert_eq!(print_expr(&e2), "1/A^2");
    }

    #[test]
    fn sqrt_sugar_round_trips_textually() {
        let e = simplify(&Expr::sqrt(Expr::z(1) * Expr::zb(1)));
        assert_eq!(print_expr(&e), "sqrt(z1*zb1)");
    }

    #[test]
    fn imaginary_coefficients() {
        let e = simplify(&(Expr::i() * Expr::z(1)));
        assert_eq!(print_expr(&e), "I*z1");
        let e2 = simplify(&(Expr::int(2) * Expr::i()));
        assert_eq!(print_expr(&e2), "2*I");
        let e3 = simplify(&(Expr::i() + Expr::one()));
        assert_eq!(print_expr(&e3), "1 + I");
    }

    #[test]
    fn power_parenthesisation() {
        let e = Expr::pow(Expr::z(1) + Expr::zb(1), Expr::int(2));
        assert_eq!(print_expr(&simplify(&e)), "(z1 + zb1)^2");
        let nested = Expr::pow(Expr::pow(Expr::z(1), Expr::param("a")), Expr::param("b"));
        assert_eq!(print_expr(&nested), "(z1^a)^b");
        let frac = simplify(&Expr::pow(Expr::z(1), Expr::ratio(3, 2)));
        assert_eq!(print_expr(&frac), "z1^(3/2)");
    }
}
