//! Printing raw expressions and normal forms back into the identity language.

use num_traits::{One, Signed as _};

use super::{RawExpr, RawTerm, Vars};
use crate::normal::{MPoly, Monomial};
use crate::scalar::format_rational;
use crate::Rational;

fn twist_wrap(mut inner: String, mut k: u32) -> String {
    while k >= 2 {
        inner = format!("a2({inner})");
        k -= 2;
    }
    if k == 1 {
        inner = format!("a({inner})");
    }
    inner
}

fn raw_term(t: &RawTerm, vars: &Vars) -> String {
    match t {
        RawTerm::Leaf(v) => vars.name(*v).to_string(),
        RawTerm::Twist(a) => format!("a({})", raw_term(a, vars)),
        RawTerm::Prod(l, r) => format!("{}*{}", raw_child(l, vars), raw_child(r, vars)),
    }
}

fn raw_child(t: &RawTerm, vars: &Vars) -> String {
    match t {
        RawTerm::Prod(..) => format!("({})", raw_term(t, vars)),
        _ => raw_term(t, vars),
    }
}

/// Canonical monomial in DSL syntax, e.g. `(x*y)*a2(z)`.
pub fn format_monomial(m: &Monomial, vars: &Vars) -> String {
    match m {
        Monomial::Leaf(l) => twist_wrap(vars.name(l.var).to_string(), l.alpha),
        Monomial::Prod(_) => {
            let (l, r) = m.children().expect("product node");
            let child = |c: &Monomial| match c {
                Monomial::Prod(_) => format!("({})", format_monomial(c, vars)),
                Monomial::Leaf(_) => format_monomial(c, vars),
            };
            format!("{}*{}", child(l), child(r))
        }
    }
}

fn join_terms<'a>(terms: impl Iterator<Item = (&'a Rational, String)>) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let negative = c.is_negative();
        let magnitude = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !magnitude.is_one() {
            out.push_str(&format_rational(&magnitude));
            out.push('*');
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Prints a raw expression term by term, without simplification.
pub fn format_expr(expr: &RawExpr<Rational>, vars: &Vars) -> String {
    join_terms(expr.terms().iter().map(|(c, t)| (c, raw_term(t, vars))))
}

/// Prints a normal form in monomial order. The zero polynomial prints as `0`.
pub fn format_poly(p: &MPoly<Rational>, vars: &Vars) -> String {
    join_terms(p.terms().map(|(m, c)| (c, format_monomial(m, vars))))
}

/// Prints `vars ...; expr`, which re-parses with the same variable order.
pub fn format_identity(p: &MPoly<Rational>, vars: &Vars) -> String {
    if vars.is_empty() {
        return format_poly(p, vars);
    }
    format!("vars {}; {}", vars.names().join(","), format_poly(p, vars))
}
