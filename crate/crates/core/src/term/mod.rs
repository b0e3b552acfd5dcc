//! Raw (pre-normalization) terms and the textual identity language.

mod format;
mod parser;

pub use format::{format_expr, format_identity, format_monomial, format_poly};
pub use parser::{parse_expr, parse_expr_in, ParseError, ParseErrorKind, Parsed};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::Scalar;

/// Dense ordinal of a variable inside a [`Vars`] table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered variable table. The position of a name is its [`VarId`], and that
/// order drives the canonical sign of every normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, N>(names: I) -> Self
    where
        I: IntoIterator<Item = N>,
        N: Into<String>,
    {
        let mut vars = Self::new();
        for name in names {
            vars.intern(&name.into());
        }
        vars
    }

    /// Returns the id of `name`, registering it at the end if it is new.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(id) = self.get(name) {
            return id;
        }
        self.names.push(name.to_string());
        VarId((self.names.len() - 1) as u32)
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(|i| VarId(i as u32))
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.names.len()).map(|i| VarId(i as u32))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(","))
    }
}

/// A word of the free Hom-algebra before any rewriting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawTerm {
    Leaf(VarId),
    Prod(Box<RawTerm>, Box<RawTerm>),
    Twist(Box<RawTerm>),
}

impl RawTerm {
    pub fn leaf(v: VarId) -> Self {
        RawTerm::Leaf(v)
    }

    pub fn prod(left: RawTerm, right: RawTerm) -> Self {
        RawTerm::Prod(Box::new(left), Box::new(right))
    }

    pub fn twist(arg: RawTerm) -> Self {
        RawTerm::Twist(Box::new(arg))
    }

    /// `α^k(self)`.
    pub fn twist_n(self, k: u32) -> Self {
        (0..k).fold(self, |t, _| RawTerm::twist(t))
    }

    /// Replaces every leaf through `f`.
    pub fn substitute(&self, f: &impl Fn(VarId) -> RawTerm) -> RawTerm {
        match self {
            RawTerm::Leaf(v) => f(*v),
            RawTerm::Prod(l, r) => RawTerm::prod(l.substitute(f), r.substitute(f)),
            RawTerm::Twist(t) => RawTerm::twist(t.substitute(f)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            RawTerm::Leaf(_) => 1,
            RawTerm::Prod(l, r) => l.leaf_count() + r.leaf_count(),
            RawTerm::Twist(t) => t.leaf_count(),
        }
    }
}

/// Linear combination of raw terms. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct RawExpr<S> {
    terms: Vec<(S, RawTerm)>,
}

impl<S: Scalar> Default for RawExpr<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> RawExpr<S> {
    pub fn zero() -> Self {
        RawExpr { terms: Vec::new() }
    }

    pub fn term(t: RawTerm) -> Self {
        RawExpr { terms: vec![(S::one(), t)] }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (S, RawTerm)>) -> Self {
        RawExpr { terms: terms.into_iter().filter(|(c, _)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(S, RawTerm)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(S, RawTerm)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, c: S, t: RawTerm) {
        if !c.is_zero() {
            self.terms.push((c, t));
        }
    }

    pub fn scale(self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RawExpr { terms: self.terms.into_iter().map(|(k, t)| (k * c.clone(), t)).collect() }
    }

    /// Bilinear product: every pair of terms, left operand outermost.
    pub fn mul(&self, other: &RawExpr<S>) -> Self {
        let mut out = Self::zero();
        for (a, s) in &self.terms {
            for (b, t) in &other.terms {
                out.push(a.clone() * b.clone(), RawTerm::prod(s.clone(), t.clone()));
            }
        }
        out
    }

    /// Applies α to every term.
    pub fn twist(self) -> Self {
        RawExpr { terms: self.terms.into_iter().map(|(c, t)| (c, RawTerm::twist(t))).collect() }
    }

    /// Replaces each variable by a raw expression and expands multilinearly.
    pub fn substitute(&self, f: &impl Fn(VarId) -> RawExpr<S>) -> RawExpr<S> {
        fn go<S: Scalar>(t: &RawTerm, f: &impl Fn(VarId) -> RawExpr<S>) -> RawExpr<S> {
            match t {
                RawTerm::Leaf(v) => f(*v),
                RawTerm::Prod(l, r) => go(l, f).mul(&go(r, f)),
                RawTerm::Twist(a) => go(a, f).twist(),
            }
        }
        let mut out = Self::zero();
        for (c, t) in &self.terms {
            out = out.add(go(t, f).scale(c));
        }
        out
    }
}

/// Concatenation of term lists; like terms are not merged.
impl<S: Scalar> Add for RawExpr<S> {
    type Output = Self;

    fn add(mut self, other: Self) -> Self {
        self.terms.extend(other.terms);
        self
    }
}

impl<S: Scalar> Sub for RawExpr<S> {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        self + -other
    }
}

impl<S: Scalar> Neg for RawExpr<S> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(&-S::one())
    }
}

/// The two built-in macros of the identity language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Macro {
    /// Hom-Jacobian, three arguments.
    J,
    /// Four-argument function built from three Hom-Jacobians.
    G,
}

impl Macro {
    pub fn arity(self) -> usize {
        match self {
            Macro::J => 3,
            Macro::G => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Macro::J => "J",
            Macro::G => "G",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{name} expects {expected} arguments, got {got}")]
pub struct ArityError {
    pub name: &'static str,
    pub expected: usize,
    pub got: usize,
}

/// Expands `J(t,u,v) = tu·α(v) + uv·α(t) + vt·α(u)` and
/// `G(w,x,y,z) = J(wx, α(y), α(z)) − α²(x)·J(w,y,z) − J(x,y,z)·α²(w)`.
///
/// Arguments may themselves be linear combinations; the result is expanded
/// multilinearly but never simplified.
pub fn expand_macros<S: Scalar>(call: Macro, args: &[RawExpr<S>]) -> Result<RawExpr<S>, ArityError> {
    if args.len() != call.arity() {
        return Err(ArityError { name: call.name(), expected: call.arity(), got: args.len() });
    }
    Ok(match call {
        Macro::J => jacobian(&args[0], &args[1], &args[2]),
        Macro::G => {
            let (w, x, y, z) = (&args[0], &args[1], &args[2], &args[3]);
            let a2 = |e: &RawExpr<S>| e.clone().twist().twist();
            jacobian(&w.mul(x), &y.clone().twist(), &z.clone().twist())
                .sub(a2(x).mul(&jacobian(w, y, z)))
                .sub(jacobian(x, y, z).mul(&a2(w)))
        }
    })
}

fn jacobian<S: Scalar>(t: &RawExpr<S>, u: &RawExpr<S>, v: &RawExpr<S>) -> RawExpr<S> {
    t.mul(u)
        .mul(&v.clone().twist())
        .add(u.mul(v).mul(&t.clone().twist()))
        .add(v.mul(t).mul(&u.clone().twist()))
}
