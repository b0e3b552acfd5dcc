//! Canonical forms in the free anticommutative multiplicative Hom-algebra.
//!
//! A [`Monomial`] is a binary product tree whose leaves are `α^k(x)`. Two
//! rewrite families bring any raw word to this shape:
//!
//! * multiplicativity, `α(u·v) → α(u)·α(v)`, pushes every twist to the leaves;
//! * anticommutativity, `u·v → −v·u` when `u > v` and `u·u → 0`.
//!
//! With the total order of [`Monomial::cmp`] every product node satisfies
//! `left < right`, so two polynomials are equal iff their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::term::{RawExpr, RawTerm, VarId};
use crate::Scalar;

/// `α^alpha(var)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leaf {
    pub var: VarId,
    pub alpha: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProdNode {
    left: Monomial,
    right: Monomial,
    leaves: usize,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Monomial {
    Leaf(Leaf),
    Prod(Arc<ProdNode>),
}

/// Result of multiplying two canonical monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Signed {
    Zero,
    Plus(Monomial),
    Minus(Monomial),
}

impl Signed {
    pub fn monomial(&self) -> Option<&Monomial> {
        match self {
            Signed::Zero => None,
            Signed::Plus(m) | Signed::Minus(m) => Some(m),
        }
    }

    pub fn into_parts(self) -> Option<(bool, Monomial)> {
        match self {
            Signed::Zero => None,
            Signed::Plus(m) => Some((false, m)),
            Signed::Minus(m) => Some((true, m)),
        }
    }

    fn flip(self) -> Self {
        match self {
            Signed::Zero => Signed::Zero,
            Signed::Plus(m) => Signed::Minus(m),
            Signed::Minus(m) => Signed::Plus(m),
        }
    }
}

impl Monomial {
    pub fn leaf(var: VarId, alpha: u32) -> Self {
        Monomial::Leaf(Leaf { var, alpha })
    }

    /// Canonical product `a·b`: swapped (with a sign) if `a > b`, zero if equal.
    pub fn product(a: Monomial, b: Monomial) -> Signed {
        match a.cmp(&b) {
            Ordering::Equal => Signed::Zero,
            Ordering::Less => Signed::Plus(Monomial::node(a, b)),
            Ordering::Greater => Signed::Minus(Monomial::node(b, a)),
        }
    }

    /// Builds a product node without reordering. Callers must guarantee
    /// `left < right`.
    fn node(left: Monomial, right: Monomial) -> Self {
        debug_assert!(left < right);
        let leaves = left.leaf_count() + right.leaf_count();
        Monomial::Prod(Arc::new(ProdNode { left, right, leaves }))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Monomial::Leaf(_) => 1,
            Monomial::Prod(p) => p.leaves,
        }
    }

    pub fn children(&self) -> Option<(&Monomial, &Monomial)> {
        match self {
            Monomial::Leaf(_) => None,
            Monomial::Prod(p) => Some((&p.left, &p.right)),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<Leaf> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Leaf>) {
        match self {
            Monomial::Leaf(l) => out.push(*l),
            Monomial::Prod(p) => {
                p.left.collect_leaves(out);
                p.right.collect_leaves(out);
            }
        }
    }

    /// `α^k` applied to the monomial. Adding `k` to every leaf preserves the
    /// order of siblings, so the result is still canonical.
    pub fn twist(&self, k: u32) -> Monomial {
        if k == 0 {
            return self.clone();
        }
        match self {
            Monomial::Leaf(l) => Monomial::leaf(l.var, l.alpha + k),
            Monomial::Prod(p) => Monomial::node(p.left.twist(k), p.right.twist(k)),
        }
    }

    pub fn max_alpha(&self) -> u32 {
        self.leaves().iter().map(|l| l.alpha).max().unwrap_or(0)
    }

    /// Rebuilds the tree after replacing each leaf by `f(leaf)`, restoring
    /// canonical order with the accumulated sign.
    pub fn rebuild(&self, f: &mut impl FnMut(&Leaf) -> Monomial) -> Signed {
        match self {
            Monomial::Leaf(l) => Signed::Plus(f(l)),
            Monomial::Prod(p) => {
                let (sl, ml) = match p.left.rebuild(f).into_parts() {
                    Some(x) => x,
                    None => return Signed::Zero,
                };
                let (sr, mr) = match p.right.rebuild(f).into_parts() {
                    Some(x) => x,
                    None => return Signed::Zero,
                };
                let out = Monomial::product(ml, mr);
                if sl != sr {
                    out.flip()
                } else {
                    out
                }
            }
        }
    }

    /// The same word as a raw term, with twists expanded at the leaves.
    pub fn to_raw(&self) -> RawTerm {
        match self {
            Monomial::Leaf(l) => RawTerm::Leaf(l.var).twist_n(l.alpha),
            Monomial::Prod(p) => RawTerm::prod(p.left.to_raw(), p.right.to_raw()),
        }
    }
}

impl Ord for Monomial {
    /// Leaf count first; then a leaf precedes a product; leaves compare by
    /// `(var, alpha)`, products by `(left, right)` lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.leaf_count().cmp(&other.leaf_count()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self, other) {
            (Monomial::Leaf(a), Monomial::Leaf(b)) => a.cmp(b),
            (Monomial::Leaf(_), Monomial::Prod(_)) => Ordering::Less,
            (Monomial::Prod(_), Monomial::Leaf(_)) => Ordering::Greater,
            (Monomial::Prod(a), Monomial::Prod(b)) => {
                if Arc::ptr_eq(a, b) {
                    return Ordering::Equal;
                }
                a.left.cmp(&b.left).then_with(|| a.right.cmp(&b.right))
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Leaf(l) if l.alpha == 0 => write!(f, "v{}", l.var.0),
            Monomial::Leaf(l) => write!(f, "a^{}(v{})", l.alpha, l.var.0),
            Monomial::Prod(p) => write!(f, "({:?}*{:?})", p.left, p.right),
        }
    }
}

/// `compare_monomials` in free-function form.
pub fn compare_monomials(a: &Monomial, b: &Monomial) -> Ordering {
    a.cmp(b)
}

/// Normalizes a single raw word: `None` if it vanishes.
pub fn normalize_term(t: &RawTerm) -> Signed {
    fn go(t: &RawTerm, shift: u32) -> Signed {
        match t {
            RawTerm::Leaf(v) => Signed::Plus(Monomial::leaf(*v, shift)),
            RawTerm::Twist(a) => go(a, shift + 1),
            RawTerm::Prod(l, r) => {
                let Some((sl, ml)) = go(l, shift).into_parts() else { return Signed::Zero };
                let Some((sr, mr)) = go(r, shift).into_parts() else { return Signed::Zero };
                let out = Monomial::product(ml, mr);
                if sl != sr {
                    out.flip()
                } else {
                    out
                }
            }
        }
    }
    go(t, 0)
}

/// Element of the free anticommutative multiplicative Hom-algebra: a finite
/// map from canonical monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for MPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> MPoly<S> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, S::one());
        p
    }

    pub fn from_signed(s: Signed) -> Self {
        let mut p = Self::zero();
        match s {
            Signed::Zero => {}
            Signed::Plus(m) => p.add_term(m, S::one()),
            Signed::Minus(m) => p.add_term(m, -S::one()),
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&S> {
        self.terms.get(m)
    }

    /// Smallest monomial in the order, with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let sum = v.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_signed(&mut self, s: Signed, c: S) {
        match s {
            Signed::Zero => {}
            Signed::Plus(m) => self.add_term(m, c),
            Signed::Minus(m) => self.add_term(m, -c),
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &MPoly<S>, c: &S) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &S) -> MPoly<S> {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> MPoly<S> {
        self.scale(&-S::one())
    }

    pub fn sub(&self, other: &MPoly<S>) -> MPoly<S> {
        let mut out = self.clone();
        out.add_scaled(other, &-S::one());
        out
    }

    pub fn add(&self, other: &MPoly<S>) -> MPoly<S> {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    /// Bilinear product in the free algebra.
    pub fn mul(&self, other: &MPoly<S>) -> MPoly<S> {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_signed(Monomial::product(a.clone(), b.clone()), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// `α^k` applied to every monomial.
    pub fn twist(&self, k: u32) -> MPoly<S> {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.twist(k), c.clone())).collect() }
    }

    /// Replaces each leaf through `f` and renormalizes.
    pub fn map_leaves(&self, mut f: impl FnMut(&Leaf) -> Monomial) -> MPoly<S> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_signed(m.rebuild(&mut f), c.clone());
        }
        out
    }

    /// The same element with every twist erased (the `α = Id` reading).
    pub fn untwisted(&self) -> MPoly<S> {
        self.map_leaves(|l| Monomial::leaf(l.var, 0))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MPoly<T> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn max_alpha(&self) -> u32 {
        self.terms.keys().map(Monomial::max_alpha).max().unwrap_or(0)
    }

    pub fn to_raw(&self) -> RawExpr<S> {
        RawExpr::from_terms(self.terms.iter().map(|(m, c)| (c.clone(), m.to_raw())))
    }
}

impl<S: fmt::Debug> fmt::Debug for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c:?}·{m:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Brings a raw expression to canonical form.
pub fn normalize<S: Scalar>(expr: &RawExpr<S>) -> MPoly<S> {
    let mut out = MPoly::zero();
    for (c, t) in expr.terms() {
        out.add_signed(normalize_term(t), c.clone());
    }
    out
}

/// Exact linear combination `Σ cᵢ·Pᵢ`.
pub fn poly_combine<'a, S: Scalar + 'a>(parts: impl IntoIterator<Item = (S, &'a MPoly<S>)>) -> MPoly<S> {
    let mut out = MPoly::zero();
    for (c, p) in parts {
        out.add_scaled(p, &c);
    }
    out
}

/// Per-variable degree of a polynomial, if all its monomials agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Multidegree {
    Homogeneous(BTreeMap<VarId, usize>),
    NonHomogeneous,
}

impl Multidegree {
    pub fn degrees(&self) -> Option<&BTreeMap<VarId, usize>> {
        match self {
            Multidegree::Homogeneous(d) => Some(d),
            Multidegree::NonHomogeneous => None,
        }
    }

    pub fn is_multilinear(&self) -> bool {
        matches!(self, Multidegree::Homogeneous(d) if d.values().all(|&k| k == 1))
    }
}

pub fn monomial_degrees(m: &Monomial) -> BTreeMap<VarId, usize> {
    let mut d = BTreeMap::new();
    for l in m.leaves() {
        *d.entry(l.var).or_insert(0) += 1;
    }
    d
}

/// Leaf counts per variable; twists do not contribute. The zero polynomial is
/// homogeneous of empty degree.
pub fn multidegree<S: Scalar>(p: &MPoly<S>) -> Multidegree {
    let mut seen: Option<BTreeMap<VarId, usize>> = None;
    for m in p.terms.keys() {
        let d = monomial_degrees(m);
        match &seen {
            None => seen = Some(d),
            Some(s) if *s != d => return Multidegree::NonHomogeneous,
            Some(_) => {}
        }
    }
    Multidegree::Homogeneous(seen.unwrap_or_default())
}

/// Splits a polynomial into its multihomogeneous components.
pub fn homogeneous_components<S: Scalar>(p: &MPoly<S>) -> Vec<MPoly<S>> {
    let mut parts: BTreeMap<Vec<(VarId, usize)>, MPoly<S>> = BTreeMap::new();
    for (m, c) in &p.terms {
        let key: Vec<_> = monomial_degrees(m).into_iter().collect();
        parts.entry(key).or_default().add_term(m.clone(), c.clone());
    }
    parts.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_expr_in;
    use crate::term::Vars;
    use crate::Rational;

    fn norm(vars: &mut Vars, text: &str) -> MPoly<Rational> {
        normalize(&parse_expr_in(text, vars).unwrap())
    }

    fn xyz() -> Vars {
        Vars::from_names(["x", "y", "z"])
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mono(vars: &mut Vars, text: &str) -> Monomial {
        let p = norm(vars, text);
        assert_eq!(p.len(), 1, "{text}");
        let (m, c) = p.leading().unwrap();
        assert_eq!(*c, q(1), "{text} is not in canonical orientation");
        m.clone()
    }

    #[test]
    fn twist_pushes_to_leaves() {
        let mut v = xyz();
        let p = norm(&mut v, "a(x*y)");
        assert_eq!(p, norm(&mut v, "a(x)*a(y)"));
        let (m, c) = p.leading().unwrap();
        assert_eq!(*c, q(1));
        assert_eq!(m.leaves(), vec![Leaf { var: VarId(0), alpha: 1 }, Leaf { var: VarId(1), alpha: 1 }]);
    }

    #[test]
    fn anticommutativity() {
        let mut v = xyz();
        let p = norm(&mut v, "y*x");
        assert_eq!(p, norm(&mut v, "x*y").neg());
        assert!(norm(&mut v, "x*x").is_zero());
        assert!(norm(&mut v, "a(x*y)*(a(x)*a(y))").is_zero());
        assert!(norm(&mut v, "J(x,x,y)").is_zero());
    }

    #[test]
    fn order_examples() {
        let mut v = xyz();
        assert_eq!(compare_monomials(&mono(&mut v, "x"), &mono(&mut v, "a(x)")), Ordering::Less);
        assert_eq!(compare_monomials(&mono(&mut v, "a2(y)"), &mono(&mut v, "x*y")), Ordering::Less);
        // Literal trees (x·y)·z and (x·z)·y: the left children decide, y < z.
        let leaf = |i| Monomial::leaf(VarId(i), 0);
        let raw = |l: Monomial, r: Monomial| {
            let leaves = l.leaf_count() + r.leaf_count();
            Monomial::Prod(Arc::new(ProdNode { left: l, right: r, leaves }))
        };
        let xy_z = raw(raw(leaf(0), leaf(1)), leaf(2));
        let xz_y = raw(raw(leaf(0), leaf(2)), leaf(1));
        assert_eq!(compare_monomials(&xy_z, &xz_y), Ordering::Less);
        // Their canonical orientations z·(x·y) and y·(x·z) compare the other way.
        assert_eq!(compare_monomials(&mono(&mut v, "z*(x*y)"), &mono(&mut v, "y*(x*z)")), Ordering::Greater);
        assert_eq!(compare_monomials(&mono(&mut v, "x*y"), &mono(&mut v, "x*y")), Ordering::Equal);
    }

    #[test]
    fn canonical_orientation_puts_smaller_child_left() {
        let mut v = xyz();
        // z < x·y because a leaf has fewer leaves than a product.
        let m = mono(&mut v, "z*(x*y)");
        let (l, r) = m.children().unwrap();
        assert!(l < r);
        assert_eq!(l.leaf_count(), 1);
        assert_eq!(norm(&mut v, "x*y*z"), norm(&mut v, "z*(x*y)").neg());
    }

    #[test]
    fn combine_examples() {
        let mut v = xyz();
        let p = norm(&mut v, "x*y + a(z)*x");
        assert!(poly_combine([(q(1), &p), (q(-1), &p)]).is_zero());
        let xy = norm(&mut v, "x*y");
        let two = poly_combine([(q(2), &xy)]);
        assert_eq!(two.coeff(xy.leading().unwrap().0), Some(&q(2)));
        let j1 = norm(&mut v, "J(x,y,z)");
        let j2 = norm(&mut v, "J(y,x,z)");
        assert!(poly_combine([(q(1), &j1), (q(1), &j2)]).is_zero());
    }

    #[test]
    fn multidegree_examples() {
        let mut v = xyz();
        let j = norm(&mut v, "J(x,y,z)");
        let expect: BTreeMap<_, _> = [(VarId(0), 1), (VarId(1), 1), (VarId(2), 1)].into();
        assert_eq!(multidegree(&j), Multidegree::Homogeneous(expect));
        let lhs = norm(&mut v, "J(a(x),a(y),x*z)");
        let expect: BTreeMap<_, _> = [(VarId(0), 2), (VarId(1), 1), (VarId(2), 1)].into();
        assert_eq!(multidegree(&lhs), Multidegree::Homogeneous(expect));
        assert_eq!(multidegree(&norm(&mut v, "x*y + x")), Multidegree::NonHomogeneous);
        assert_eq!(homogeneous_components(&norm(&mut v, "x*y + x + a(y)*x")).len(), 2);
    }

    #[test]
    fn jacobian_is_alternating() {
        let mut v = xyz();
        let j = norm(&mut v, "J(x,y,z)");
        assert_eq!(j.len(), 3);
        for (text, sign) in [("J(y,z,x)", 1), ("J(z,x,y)", 1), ("J(y,x,z)", -1), ("J(x,z,y)", -1), ("J(z,y,x)", -1)] {
            assert_eq!(norm(&mut v, text), j.scale(&q(sign)), "{text}");
        }
    }

    #[test]
    fn untwisting_and_twisting() {
        let mut v = xyz();
        let p = norm(&mut v, "a(x)*a2(y) - a(x*z)");
        assert_eq!(p.untwisted(), norm(&mut v, "x*y - x*z"));
        assert_eq!(p.twist(1), norm(&mut v, "a(a(x)*a2(y) - a(x*z))"));
        assert_eq!(p.max_alpha(), 2);
    }
}
