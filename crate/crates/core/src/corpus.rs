//! Seeded random inputs for property checks: raw expressions, multiplicative
//! algebras and element assignments. Same seed, same corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element, Evaluator};
use crate::identity::{polarization_factor, polarize, reidentify, Identity};
use crate::normal::normalize;
use crate::term::{format_poly, parse_expr_in, RawExpr, RawTerm, VarId, Vars};
use crate::Rational;

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let n: i64 = rng.random_range(-4..=4);
    let d: i64 = rng.random_range(1..=3);
    Rational::new(n.into(), d.into())
}

fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let q = small_rational(rng);
        if q != Rational::from_integer(0.into()) {
            return q;
        }
    }
}

/// Variables `x0, x1, ...`.
pub fn corpus_vars(n: usize) -> Vars {
    Vars::from_names((0..n).map(|i| format!("x{i}")))
}

pub fn random_term(rng: &mut impl Rng, nvars: usize, leaves: usize) -> RawTerm {
    let t = if leaves <= 1 {
        RawTerm::Leaf(VarId(rng.random_range(0..nvars) as u32))
    } else {
        let left = rng.random_range(1..leaves);
        RawTerm::prod(random_term(rng, nvars, left), random_term(rng, nvars, leaves - left))
    };
    let twists = match rng.random_range(0..10) {
        0..=5 => 0,
        6..=8 => 1,
        _ => 2,
    };
    t.twist_n(twists)
}

/// Up to `max_terms` words of 1..=`max_leaves` leaves over `nvars` variables.
pub fn random_expr(rng: &mut impl Rng, nvars: usize, max_terms: usize, max_leaves: usize) -> RawExpr<Rational> {
    let count = rng.random_range(1..=max_terms);
    RawExpr::from_terms((0..count).map(|_| {
        let leaves = rng.random_range(1..=max_leaves);
        (nonzero_rational(rng), random_term(rng, nvars, leaves))
    }))
}

pub fn random_element(rng: &mut impl Rng, dim: usize) -> Element<Rational> {
    Element((0..dim).map(|_| small_rational(rng)).collect())
}

/// A random anticommutative algebra with a multiplicative twist.
///
/// Basis vectors get degrees in `{-1, 0, 1}`, products only land in the
/// degree given by the sum, and `α = diag(t^deg)` is then an automorphism for
/// any nonzero `t`. A unipotent change of basis spreads the twist out so it
/// is not diagonal.
pub fn random_multiplicative_algebra(rng: &mut impl Rng) -> AlgebraSpec<Rational> {
    let n = rng.random_range(2..=4);
    let degree: Vec<i32> = (0..n).map(|_| rng.random_range(-1..=1)).collect();
    let mut products = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut out = Element::zero(n);
            for k in 0..n {
                if degree[k] == degree[i] + degree[j] && rng.random_bool(0.7) {
                    out.0[k] = small_rational(rng);
                }
            }
            if !out.is_zero() {
                products.push((i, j, out));
            }
        }
    }
    let t = [
        Rational::from_integer(2.into()),
        Rational::from_integer((-1).into()),
        Rational::new(1.into(), 2.into()),
        Rational::new((-2).into(), 3.into()),
        Rational::from_integer(1.into()),
    ][rng.random_range(0..5)]
    .clone();
    let power = |d: i32| {
        let mut r = Rational::from_integer(1.into());
        for _ in 0..d.abs() {
            r = if d > 0 { r * t.clone() } else { r / t.clone() };
        }
        r
    };
    let twist: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { power(degree[i]) } else { Rational::from_integer(0.into()) }).collect())
        .collect();
    let names = (1..=n).map(|i| format!("e{i}")).collect();
    let diag = AlgebraSpec::new(names, &products, twist).expect("well-formed");

    let mut p = vec![vec![Rational::from_integer(0.into()); n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = Rational::from_integer(1.into());
        for c in row.iter_mut().skip(i + 1) {
            *c = Rational::from_integer(rng.random_range(-1..=1).into());
        }
    }
    let mut spec = conjugate(&diag, &p);
    spec.require_multiplicative = true;
    spec
}

/// Transports `(A, ·, α)` along the linear isomorphism `p` (which must be
/// invertible): `u ·' v = p(p⁻¹u · p⁻¹v)`, `α' = p α p⁻¹`.
pub fn conjugate(spec: &AlgebraSpec<Rational>, p: &[Vec<Rational>]) -> AlgebraSpec<Rational> {
    let n = spec.dim();
    let inv = invert(p).expect("invertible change of basis");
    let apply = |m: &[Vec<Rational>], v: &Element<Rational>| {
        Element((0..n).map(|i| (0..n).fold(Rational::from_integer(0.into()), |acc, j| acc + m[i][j].clone() * v.0[j].clone())).collect())
    };
    let pre: Vec<Element<Rational>> = (0..n).map(|i| apply(&inv, &Element::basis(n, i))).collect();
    let mut products = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let prod = spec.multiply(&pre[i], &pre[j]).expect("dims");
            let out = apply(p, &prod);
            if !out.is_zero() {
                products.push((i, j, out));
            }
        }
    }
    let twist_cols: Vec<Element<Rational>> =
        pre.iter().map(|u| apply(p, &spec.apply_twist(u).expect("dims"))).collect();
    let twist = (0..n).map(|i| (0..n).map(|j| twist_cols[j].0[i].clone()).collect()).collect();
    let mut out = AlgebraSpec::new(spec.basis_names().to_vec(), &products, twist).expect("well-formed");
    out.comment = spec.comment.clone();
    out
}

/// Gauss-Jordan inverse over the rationals.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let zero = Rational::from_integer(0.into());
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational::from_integer(((i == j) as i64).into())));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != zero)?;
        a.swap(col, pivot);
        let inv = Rational::from_integer(1.into()) / a[col][col].clone();
        for c in a[col].iter_mut() {
            *c = c.clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && a[r][col] != zero {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (c, p) in a[r].iter_mut().zip(pivot_row) {
                    *c = c.clone() - f.clone() * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Outcome of one property over a seeded corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Index of the first failing case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<usize>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Property = (&'static str, fn(&mut CorpusRng) -> bool);

const PROPERTIES: [Property; 4] = [
    ("normalization idempotence", |r| {
        let p = normalize(&random_expr(r, 3, 4, 5));
        normalize(&p.to_raw()) == p
    }),
    ("format/parse round-trip", |r| {
        let vars = corpus_vars(3);
        let p = normalize(&random_expr(r, 3, 4, 5));
        let mut again = vars.clone();
        match parse_expr_in(&format_poly(&p, &vars), &mut again) {
            Ok(e) => again == vars && normalize(&e) == p,
            Err(_) => false,
        }
    }),
    ("symbolic vs concrete evaluation", |r| {
        let spec = random_multiplicative_algebra(r);
        let e = random_expr(r, 3, 3, 4);
        let values: Vec<_> = (0..3).map(|_| random_element(r, spec.dim())).collect();
        let raw = Evaluator::new(&spec, values.clone()).map(|mut ev| ev.raw(&e));
        let normal = Evaluator::new(&spec, values).map(|mut ev| ev.poly(&normalize(&e)));
        raw.is_ok() && raw == normal
    }),
    ("polarization re-identification factor", |r| {
        let e = random_expr(r, 2, 1, 5);
        let id = Identity::new(normalize(&e), corpus_vars(2));
        let (Ok(pol), Some(factor)) = (polarize(&id), polarization_factor(&id)) else { return false };
        pol.is_multilinear() && reidentify(&pol, &id).is_ok_and(|back| back.poly == id.poly.scale(&factor))
    }),
];

/// Runs every built-in property on `cases` inputs. Case `i` of each property
/// draws from its own generator seeded from `seed`, so results do not depend
/// on evaluation order.
pub fn selfcheck(seed: u64, cases: usize) -> Vec<PropertyOutcome> {
    use rayon::prelude::*;
    PROPERTIES
        .iter()
        .enumerate()
        .map(|(k, (name, check))| {
            let failed: Vec<usize> = (0..cases)
                .into_par_iter()
                .filter(|&i| {
                    let mut r = rng(case_seed(seed, k, i));
                    !check(&mut r)
                })
                .collect();
            PropertyOutcome { name, cases, failures: failed.len(), first_failure: failed.first().copied() }
        })
        .collect()
}

fn case_seed(seed: u64, property: usize, case: usize) -> u64 {
    let mut r = rng(seed ^ ((property as u64) << 48));
    r.set_stream(case as u64);
    r.random()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_corpus() {
        let a: Vec<_> = (0..5).map(|_| ()).scan(rng(7), |r, _| Some(random_expr(r, 3, 4, 4))).collect();
        let b: Vec<_> = (0..5).map(|_| ()).scan(rng(7), |r, _| Some(random_expr(r, 3, 4, 4))).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn random_algebras_are_multiplicative() {
        let mut r = rng(1);
        for _ in 0..50 {
            let spec = random_multiplicative_algebra(&mut r);
            assert_eq!(spec.check_multiplicative(), Ok(()));
        }
    }

    #[test]
    fn selfcheck_small_corpus() {
        let out = selfcheck(5, 40);
        assert_eq!(out.len(), 4);
        assert!(out.iter().all(PropertyOutcome::passed), "{out:?}");
        assert_eq!(out, selfcheck(5, 40));
    }

    #[test]
    fn inverse_roundtrip() {
        let q = |n: i64| Rational::from_integer(n.into());
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert!(invert(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }
}
