//! Finite-dimensional anticommutative Hom-algebras given by structure
//! constants and a twist matrix, with exact evaluation of identities.

mod json;

/// Example algebras shipped with the crate, as `(file name, JSON)`.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("cross3.json", include_str!("../../../../algebras/cross3.json")),
    ("cross3_rot.json", include_str!("../../../../algebras/cross3_rot.json")),
    ("m7.json", include_str!("../../../../algebras/m7.json")),
    ("m7_auto.json", include_str!("../../../../algebras/m7_auto.json")),
    ("sl2.json", include_str!("../../../../algebras/sl2.json")),
    ("skew3.json", include_str!("../../../../algebras/skew3.json")),
];

pub use json::{load_algebra, to_json, AlgebraDoc, ProductDoc};

use rayon::prelude::*;

use crate::identity::{polarize, Identity};
use crate::normal::{homogeneous_components, MPoly, Monomial};
use crate::term::{RawExpr, RawTerm, VarId};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("invalid algebra document: {0}")]
    Schema(String),
    #[error("twist is not multiplicative on the pair (e{i}, e{j})")]
    NotMultiplicative { i: usize, j: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A vector in the basis `e_1..e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Element<S>(pub Vec<S>);

impl<S: Scalar> Element<S> {
    pub fn zero(n: usize) -> Self {
        Element(vec![S::zero(); n])
    }

    /// `e_i`, 0-based.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        Element(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add_scaled(&mut self, other: &Element<S>, c: &S) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a = a.clone() + b.clone() * c.clone();
            }
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Element<T> {
        Element(self.0.iter().map(f).collect())
    }
}

/// `(A, ·, α)` on `Q^n` (or any [`Scalar`] field). Only products `e_i·e_j`
/// with `i < j` are stored in the source document; the table here is the full
/// antisymmetric one.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec<S> {
    basis: Vec<String>,
    /// `table[i][j]` = sparse `e_i·e_j`.
    table: Vec<Vec<Vec<(usize, S)>>>,
    /// Row-major; column `j` is `α(e_j)`.
    twist: Vec<Vec<S>>,
    pub require_multiplicative: bool,
    pub comment: Vec<String>,
}

impl<S: Scalar> AlgebraSpec<S> {
    /// `products` lists `(i, j, e_i·e_j)` with 0-based `i < j`; omitted pairs
    /// multiply to zero.
    pub fn new(
        basis: Vec<String>,
        products: &[(usize, usize, Element<S>)],
        twist: Vec<Vec<S>>,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        if n == 0 {
            return Err(AlgebraError::Schema("dimension must be positive".into()));
        }
        if twist.len() != n || twist.iter().any(|row| row.len() != n) {
            return Err(AlgebraError::Schema(format!("twist must be a {n}x{n} matrix")));
        }
        let mut table = vec![vec![Vec::new(); n]; n];
        let mut defined = vec![vec![false; n]; n];
        for (i, j, out) in products {
            let (i, j) = (*i, *j);
            if i >= j || j >= n {
                return Err(AlgebraError::Schema(format!(
                    "product entry ({}, {}) must satisfy 1 <= i < j <= {n}",
                    i + 1,
                    j + 1
                )));
            }
            if out.dim() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, got: out.dim() });
            }
            if defined[i][j] {
                return Err(AlgebraError::Schema(format!("product ({}, {}) given twice", i + 1, j + 1)));
            }
            defined[i][j] = true;
            let sparse: Vec<(usize, S)> =
                out.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect();
            table[j][i] = sparse.iter().map(|(k, c)| (*k, -c.clone())).collect();
            table[i][j] = sparse;
        }
        Ok(AlgebraSpec { basis, table, twist, require_multiplicative: false, comment: Vec::new() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn twist_matrix(&self) -> &[Vec<S>] {
        &self.twist
    }

    /// `e_i·e_j` (0-based).
    pub fn basis_product(&self, i: usize, j: usize) -> Element<S> {
        let mut out = Element::<S>::zero(self.dim());
        for (k, c) in &self.table[i][j] {
            out.0[*k] = c.clone();
        }
        out
    }

    /// Stored products `(i, j, e_i·e_j)` with `i < j`, nonzero only.
    pub fn products(&self) -> Vec<(usize, usize, Element<S>)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.table[i][j].is_empty() {
                    out.push((i, j, self.basis_product(i, j)));
                }
            }
        }
        out
    }

    fn check_dim(&self, u: &Element<S>) -> Result<(), AlgebraError> {
        if u.dim() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim(), got: u.dim() });
        }
        Ok(())
    }

    pub fn multiply(&self, u: &Element<S>, v: &Element<S>) -> Result<Element<S>, AlgebraError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.mul(u, v))
    }

    pub fn apply_twist(&self, u: &Element<S>) -> Result<Element<S>, AlgebraError> {
        self.check_dim(u)?;
        Ok(self.twist_of(u))
    }

    fn mul(&self, u: &Element<S>, v: &Element<S>) -> Element<S> {
        let mut out = Element::<S>::zero(self.dim());
        for (i, a) in u.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.0.iter().enumerate() {
                if b.is_zero() || i == j {
                    continue;
                }
                let ab = a.clone() * b.clone();
                for (k, c) in &self.table[i][j] {
                    out.0[*k] = out.0[*k].clone() + ab.clone() * c.clone();
                }
            }
        }
        out
    }

    fn twist_of(&self, u: &Element<S>) -> Element<S> {
        let mut out = Element::<S>::zero(self.dim());
        for (j, a) in u.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (i, row) in self.twist.iter().enumerate() {
                if !row[j].is_zero() {
                    out.0[i] = out.0[i].clone() + row[j].clone() * a.clone();
                }
            }
        }
        out
    }

    /// Checks `α(e_i·e_j) = α(e_i)·α(e_j)` for all `i < j`; reports the first
    /// failing pair (1-based).
    pub fn check_multiplicative(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let images: Vec<Element<S>> = (0..n).map(|i| self.twist_of(&Element::basis(n, i))).collect();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.twist_of(&self.basis_product(i, j));
                let rhs = self.mul(&images[i], &images[j]);
                if lhs != rhs {
                    return Err(AlgebraError::NotMultiplicative { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(())
    }

    pub fn twist_is_identity(&self) -> bool {
        self.twist
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() }))
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AlgebraSpec<T> {
        AlgebraSpec {
            basis: self.basis.clone(),
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(|e| e.iter().map(|(k, c)| (*k, f(c))).collect()).collect())
                .collect(),
            twist: self.twist.iter().map(|row| row.iter().map(&f).collect()).collect(),
            require_multiplicative: self.require_multiplicative,
            comment: self.comment.clone(),
        }
    }
}

/// Evaluates symbolic expressions under a fixed assignment of variables.
pub struct Evaluator<'a, S> {
    spec: &'a AlgebraSpec<S>,
    /// `twisted[v][k] = α^k(value of v)`, grown on demand.
    twisted: Vec<Vec<Element<S>>>,
}

impl<'a, S: Scalar> Evaluator<'a, S> {
    /// `values[v]` is the element assigned to `VarId(v)`.
    pub fn new(spec: &'a AlgebraSpec<S>, values: Vec<Element<S>>) -> Result<Self, AlgebraError> {
        for v in &values {
            spec.check_dim(v)?;
        }
        Ok(Evaluator { spec, twisted: values.into_iter().map(|v| vec![v]).collect() })
    }

    fn leaf(&mut self, var: VarId, alpha: u32) -> Element<S> {
        let powers = &mut self.twisted[var.index()];
        while powers.len() <= alpha as usize {
            let next = self.spec.twist_of(powers.last().expect("nonempty"));
            powers.push(next);
        }
        powers[alpha as usize].clone()
    }

    pub fn monomial(&mut self, m: &Monomial) -> Element<S> {
        match m {
            Monomial::Leaf(l) => self.leaf(l.var, l.alpha),
            Monomial::Prod(_) => {
                let (l, r) = m.children().expect("product");
                let a = self.monomial(l);
                if a.is_zero() {
                    return a;
                }
                let b = self.monomial(r);
                self.spec.mul(&a, &b)
            }
        }
    }

    pub fn poly(&mut self, p: &MPoly<S>) -> Element<S> {
        let mut out = Element::zero(self.spec.dim());
        for (m, c) in p.terms() {
            let v = self.monomial(m);
            out.add_scaled(&v, c);
        }
        out
    }

    /// Direct evaluation of a raw term: twists are applied where they occur.
    pub fn raw_term(&mut self, t: &RawTerm) -> Element<S> {
        match t {
            RawTerm::Leaf(v) => self.leaf(*v, 0),
            RawTerm::Twist(a) => {
                let inner = self.raw_term(a);
                self.spec.twist_of(&inner)
            }
            RawTerm::Prod(l, r) => {
                let a = self.raw_term(l);
                let b = self.raw_term(r);
                self.spec.mul(&a, &b)
            }
        }
    }

    pub fn raw(&mut self, e: &RawExpr<S>) -> Element<S> {
        let mut out = Element::zero(self.spec.dim());
        for (c, t) in e.terms() {
            let v = self.raw_term(t);
            out.add_scaled(&v, c);
        }
        out
    }
}

/// A basis assignment on which an identity fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample<S> {
    /// `(variable name, basis name)` for the polarized identity.
    pub assignment: Vec<(String, String)>,
    pub residual: Element<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<S> {
    Holds { tuples: usize },
    Counterexample(Counterexample<S>),
}

impl<S> Verdict<S> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }
}

/// Checks an identity on a concrete algebra.
///
/// Each multihomogeneous component is fully polarized and evaluated on every
/// tuple of basis vectors; by multilinearity that is a complete check. The
/// reported counterexample is the first failing tuple in lexicographic order
/// (first variable slowest), independent of thread scheduling.
pub fn check_identity_concrete<S: Scalar>(spec: &AlgebraSpec<S>, id: &Identity<S>) -> Verdict<S> {
    let n = spec.dim();
    let mut tuples = 0;
    for component in homogeneous_components(&id.poly) {
        let polarized = polarize(&Identity::new(component, id.vars.clone())).expect("homogeneous component");
        let vars = polarized.occurring_vars();
        let count = n.pow(vars.len() as u32);
        tuples += count;
        let failure = (0..count).into_par_iter().find_map_first(|mut code| {
            let mut values = vec![Element::zero(n); polarized.vars.len()];
            let mut digits = vec![0; vars.len()];
            for slot in (0..vars.len()).rev() {
                digits[slot] = code % n;
                code /= n;
            }
            for (slot, v) in vars.iter().enumerate() {
                values[v.index()] = Element::basis(n, digits[slot]);
            }
            let mut eval = Evaluator::new(spec, values).expect("basis vectors");
            let residual = eval.poly(&polarized.poly);
            if residual.is_zero() {
                return None;
            }
            let assignment = vars
                .iter()
                .zip(&digits)
                .map(|(v, &d)| (polarized.vars.name(*v).to_string(), spec.basis[d].clone()))
                .collect();
            Some(Counterexample { assignment, residual })
        });
        if let Some(cx) = failure {
            return Verdict::Counterexample(cx);
        }
    }
    Verdict::Holds { tuples }
}

/// Yau twist: from `(A, ·, α)` with `α` an endomorphism of `·`, builds
/// `(A, α∘·, α)`. The new structure constants are `α(e_i·e_j)`.
pub fn yau_twist<S: Scalar>(spec: &AlgebraSpec<S>) -> Result<AlgebraSpec<S>, AlgebraError> {
    spec.check_multiplicative()?;
    let products: Vec<_> = spec.products().into_iter().map(|(i, j, e)| (i, j, spec.twist_of(&e))).collect();
    let mut out = AlgebraSpec::new(spec.basis.clone(), &products, spec.twist.clone())?;
    out.require_multiplicative = true;
    out.comment = spec.comment.clone();
    out.comment.push("Yau twist: product replaced by twist composed with the original product.".into());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn cross3(twist: Vec<Vec<Rational>>) -> AlgebraSpec<Rational> {
        let e = |k: usize| Element::basis(3, k);
        let mut neg = e(1);
        neg.0[1] = q(-1);
        AlgebraSpec::new(
            vec!["e1".into(), "e2".into(), "e3".into()],
            &[(0, 1, e(2)), (0, 2, neg), (1, 2, e(0))],
            twist,
        )
        .unwrap()
    }

    fn identity3() -> Vec<Vec<Rational>> {
        (0..3).map(|i| (0..3).map(|j| q((i == j) as i64)).collect()).collect()
    }

    #[test]
    fn cross_product_table() {
        let a = cross3(identity3());
        let e = |k: usize| Element::basis(3, k);
        assert_eq!(a.multiply(&e(0), &e(1)).unwrap(), e(2));
        assert_eq!(a.multiply(&e(1), &e(0)).unwrap(), e(2).map(|c| -c.clone()));
        let u = Element(vec![q(1), q(-2), Rational::new(1.into(), 3.into())]);
        assert!(a.multiply(&u, &u).unwrap().is_zero());
        assert_eq!(a.apply_twist(&u).unwrap(), u);
        assert_eq!(
            a.multiply(&u, &Element::zero(2)),
            Err(AlgebraError::DimensionMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn broken_twist_is_rejected() {
        let mut t = identity3();
        // α(e3) = 2 e3 while α(e1)α(e2) = e3
        t[2][2] = q(2);
        let a = cross3(t);
        assert_eq!(a.check_multiplicative(), Err(AlgebraError::NotMultiplicative { i: 1, j: 2 }));
        assert!(yau_twist(&a).is_err());
    }

    #[test]
    fn yau_twist_with_identity_is_a_no_op() {
        let a = cross3(identity3());
        let t = yau_twist(&a).unwrap();
        assert_eq!(t.products(), a.products());
        assert_eq!(t.twist_matrix(), a.twist_matrix());
    }

    #[test]
    fn bad_tables_are_rejected() {
        let e = Element::<Rational>::basis(2, 0);
        let names = vec!["a".to_string(), "b".to_string()];
        let id2 = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        assert!(AlgebraSpec::new(names.clone(), &[(1, 0, e.clone())], id2.clone()).is_err());
        assert!(AlgebraSpec::new(names.clone(), &[(0, 1, e.clone()), (0, 1, e.clone())], id2.clone()).is_err());
        assert!(AlgebraSpec::new(names.clone(), &[(0, 1, Element::basis(3, 0))], id2).is_err());
        assert!(AlgebraSpec::new(names, &[], vec![vec![q(1)]]).is_err());
    }
}
