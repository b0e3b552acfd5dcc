//! Identities (polynomials asserted to vanish), substitution and full
//! polarization.

mod catalog;

pub use catalog::{catalog, catalog_names, CatalogEntry, CATALOG};

use std::collections::BTreeMap;

use crate::normal::{multidegree, MPoly, Monomial, Multidegree};
use crate::scalar::factorial;
use crate::term::{format_identity, format_monomial, VarId, Vars};
use crate::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdentityError {
    #[error("substitution does not map variable {0:?}")]
    UnmappedVariable(String),
    #[error("identity is not multihomogeneous")]
    NonHomogeneous,
    #[error("unknown catalog identity {0:?}")]
    UnknownName(String),
    #[error("fresh variable {0:?} clashes with an existing variable")]
    NameClash(String),
}

/// A polynomial asserted to vanish under every substitution, together with
/// the variable table its monomials refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct Identity<S> {
    pub poly: MPoly<S>,
    pub vars: Vars,
}

impl<S: Scalar> Identity<S> {
    pub fn new(poly: MPoly<S>, vars: Vars) -> Self {
        Identity { poly, vars }
    }

    pub fn degrees(&self) -> Multidegree {
        multidegree(&self.poly)
    }

    pub fn is_multilinear(&self) -> bool {
        self.degrees().is_multilinear()
    }

    /// Variables that actually occur, in table order.
    pub fn occurring_vars(&self) -> Vec<VarId> {
        let mut seen = vec![false; self.vars.len()];
        for (m, _) in self.poly.terms() {
            for l in m.leaves() {
                seen[l.var.index()] = true;
            }
        }
        self.vars.ids().filter(|v| seen[v.index()]).collect()
    }

    /// The same identity with every twist power set to zero.
    pub fn untwisted(&self) -> Self {
        Identity { poly: self.poly.untwisted(), vars: self.vars.clone() }
    }
}

impl Identity<Rational> {
    pub fn to_dsl(&self) -> String {
        format_identity(&self.poly, &self.vars)
    }
}

/// Maps variables of a source identity to canonical monomials over `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Substitution {
    pub map: BTreeMap<VarId, Monomial>,
    pub target: Vars,
}

impl Substitution {
    pub fn new(target: Vars) -> Self {
        Substitution { map: BTreeMap::new(), target }
    }

    pub fn with(mut self, from: VarId, to: Monomial) -> Self {
        self.map.insert(from, to);
        self
    }

    /// Each source variable to the same-named target variable.
    pub fn identity_on(vars: &Vars) -> Self {
        let mut s = Substitution::new(vars.clone());
        for v in vars.ids() {
            s.map.insert(v, Monomial::leaf(v, 0));
        }
        s
    }

    /// Builds a substitution from `(source name, target name)` pairs; names
    /// missing from `target` are appended to it.
    pub fn by_names(source: &Vars, target: &Vars, pairs: &[(&str, &str)]) -> Self {
        let mut target = target.clone();
        let mut s = BTreeMap::new();
        for (from, to) in pairs {
            let from = source.get(from).expect("source variable");
            let to = target.intern(to);
            s.insert(from, Monomial::leaf(to, 0));
        }
        Substitution { map: s, target }
    }

    /// `{source var: monomial}` with names, for certificates.
    pub fn describe(&self, source: &Vars) -> BTreeMap<String, String> {
        self.map
            .iter()
            .map(|(v, m)| (source.name(*v).to_string(), format_monomial(m, &self.target)))
            .collect()
    }
}

/// Replaces each leaf `α^k(u)` by `α^k(s(u))` and renormalizes.
pub fn substitute<S: Scalar>(id: &Identity<S>, s: &Substitution) -> Result<Identity<S>, IdentityError> {
    for v in id.occurring_vars() {
        if !s.map.contains_key(&v) {
            return Err(IdentityError::UnmappedVariable(id.vars.name(v).to_string()));
        }
    }
    let poly = id.poly.map_leaves(|l| s.map[&l.var].twist(l.alpha));
    Ok(Identity { poly, vars: s.target.clone() })
}

/// Name of the `i`-th fresh variable replacing `base` (1-based).
pub fn fresh_name(base: &str, i: usize) -> String {
    format!("{base}#{i}")
}

/// Full polarization. Every variable `u` of degree `d > 1` is replaced by
/// `u#1 + ... + u#d` and only the component linear in each `u#i` is kept.
/// Fresh variables come after all remaining user variables, in the order of
/// the variables they replace. Already multilinear identities are returned
/// unchanged apart from dropping unused variables from the table.
///
/// Identifying `u#i → u` again yields `d!` times the original polynomial.
pub fn polarize<S: Scalar>(id: &Identity<S>) -> Result<Identity<S>, IdentityError> {
    let degrees = match id.degrees() {
        Multidegree::Homogeneous(d) => d,
        Multidegree::NonHomogeneous => return Err(IdentityError::NonHomogeneous),
    };
    let mut vars = Vars::new();
    let mut kept = BTreeMap::new();
    for v in id.vars.ids() {
        if degrees.get(&v) == Some(&1) {
            kept.insert(v, vars.intern(id.vars.name(v)));
        }
    }
    // fresh[v] = new ids of v#1..v#d
    let mut fresh: BTreeMap<VarId, Vec<VarId>> = BTreeMap::new();
    for v in id.vars.ids() {
        if let Some(&d) = degrees.get(&v) {
            if d > 1 {
                let mut ids = Vec::with_capacity(d);
                for i in 1..=d {
                    let name = fresh_name(id.vars.name(v), i);
                    if id.vars.get(&name).is_some() {
                        return Err(IdentityError::NameClash(name));
                    }
                    ids.push(vars.intern(&name));
                }
                fresh.insert(v, ids);
            }
        }
    }

    let expanded: Vec<VarId> = fresh.keys().copied().collect();
    let perms: Vec<Vec<Vec<usize>>> = expanded.iter().map(|v| permutations(fresh[v].len())).collect();
    let mut poly = MPoly::zero();
    for (m, c) in id.poly.terms() {
        for_each_choice(&perms.iter().map(Vec::len).collect::<Vec<_>>(), |choice| {
            let mut seen: BTreeMap<VarId, usize> = BTreeMap::new();
            let signed = m.rebuild(&mut |l| {
                if let Some(&nv) = kept.get(&l.var) {
                    return Monomial::leaf(nv, l.alpha);
                }
                let slot = expanded.iter().position(|v| *v == l.var).expect("repeated variable");
                let k = seen.entry(l.var).or_insert(0);
                let copy = perms[slot][choice[slot]][*k];
                *k += 1;
                Monomial::leaf(fresh[&l.var][copy], l.alpha)
            });
            poly.add_signed(signed, c.clone());
        });
    }
    Ok(Identity { poly, vars })
}

/// Calls `f` on every tuple `(c_0, ..)` with `c_i < sizes[i]`, last index fastest.
fn for_each_choice(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut choice = vec![0; sizes.len()];
    loop {
        f(&choice);
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < sizes[i] {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Substitutes every fresh `u#i` back to `u`; the result equals `d!` times
/// the original for each polarized variable.
pub fn reidentify<S: Scalar>(polarized: &Identity<S>, original: &Identity<S>) -> Result<Identity<S>, IdentityError> {
    let mut s = Substitution::new(original.vars.clone());
    for v in polarized.vars.ids() {
        let name = polarized.vars.name(v);
        let base = name.rsplit_once('#').map(|(b, _)| b).unwrap_or(name);
        let target = original.vars.get(name).or_else(|| original.vars.get(base)).ok_or_else(|| IdentityError::UnmappedVariable(name.to_string()))?;
        s.map.insert(v, Monomial::leaf(target, 0));
    }
    substitute(polarized, &s)
}

/// Product of `d!` over the degrees of an identity.
pub fn polarization_factor<S: Scalar>(id: &Identity<S>) -> Option<S> {
    let d = id.degrees();
    let degrees = d.degrees()?;
    Some(degrees.values().fold(S::one(), |acc, &k| acc * factorial::<S>(k)))
}
