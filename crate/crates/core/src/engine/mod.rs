//! Bounded consequence search.
//!
//! A target identity is a consequence of axiom identities when it is a
//! rational linear combination of substitution instances of the axioms. With
//! multilinear axioms it suffices to substitute single monomials for
//! variables: a substitution by a sum expands into a combination of monomial
//! substitutions, and applying `α` to a whole instance equals substituting
//! `α(u)` for every variable. The search space is therefore finite once the
//! twist power per leaf is bounded.
//!
//! Membership is decided by exact Gaussian elimination over the monomial
//! basis; a positive answer comes with a [`Certificate`] that replays to the
//! target with zero residual. A negative answer only means "not within these
//! bounds".

mod replay;

pub use replay::{verify_paper, CheckReport, Report, StepReport, STEP_COUNT};

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::identity::{polarize, substitute, Identity, IdentityError, Substitution};
use crate::normal::{MPoly, Monomial};
use crate::scalar::format_rational;
use crate::term::{VarId, Vars};
use crate::{ExactScalar, Rational};

pub const DEFAULT_MAX_ALPHA: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error("cannot enumerate monomials over an empty variable set")]
    EmptyVarSet,
    #[error("axiom has {axiom} variables but the target only {target}")]
    TooManyAxiomVars { axiom: usize, target: usize },
    #[error("axiom is not multilinear; polarize it first")]
    NotMultilinear,
}

/// Limits of the instance search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest twist power substituted at a single leaf.
    pub max_alpha_power: u32,
    /// Variables of the (multilinear) target; every instance uses each once.
    pub target_vars: Vars,
}

impl SearchBounds {
    pub fn new(max_alpha_power: u32, target_vars: Vars) -> Self {
        SearchBounds { max_alpha_power, target_vars }
    }
}

/// All canonical monomials using each of `vars` exactly once, with leaf twist
/// powers in `0..=k`, sorted in monomial order.
pub fn enumerate_monomials(vars: &[VarId], k: u32) -> Result<Vec<Monomial>, EngineError> {
    if vars.is_empty() {
        return Err(EngineError::EmptyVarSet);
    }
    let mut sorted = vars.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut memo = HashMap::new();
    let mut out = enumerate_rec(&sorted, k, &mut memo);
    out.sort();
    Ok(out)
}

fn enumerate_rec(vars: &[VarId], k: u32, memo: &mut HashMap<Vec<VarId>, Vec<Monomial>>) -> Vec<Monomial> {
    if let Some(hit) = memo.get(vars) {
        return hit.clone();
    }
    let out = if vars.len() == 1 {
        (0..=k).map(|a| Monomial::leaf(vars[0], a)).collect()
    } else {
        let mut out = Vec::new();
        let rest = &vars[1..];
        // Unordered splits {A, B}: A always holds vars[0], B is nonempty.
        for mask in 0..(1u64 << rest.len()) - 1 {
            let mut a = vec![vars[0]];
            let mut b = Vec::new();
            for (i, v) in rest.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.push(*v);
                } else {
                    b.push(*v);
                }
            }
            let left = enumerate_rec(&a, k, memo);
            let right = enumerate_rec(&b, k, memo);
            for l in &left {
                for r in &right {
                    if let Some(m) = Monomial::product(l.clone(), r.clone()).monomial() {
                        out.push(m.clone());
                    }
                }
            }
        }
        out
    };
    memo.insert(vars.to_vec(), out.clone());
    out
}

/// Set partitions of `0..n` into exactly `blocks` nonempty blocks, via
/// restricted growth strings.
pub fn set_partitions(n: usize, blocks: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: usize, used: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if n - i < blocks - used {
            return;
        }
        if i == n {
            let mut parts = vec![Vec::new(); blocks];
            for (elem, &b) in rgs.iter().enumerate() {
                parts[b].push(elem);
            }
            out.push(parts);
            return;
        }
        let limit = (used + 1).min(blocks);
        for b in 0..limit {
            rgs.push(b);
            go(i + 1, n, blocks, used.max(b + 1), rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if blocks == 0 || blocks > n {
        return out;
    }
    go(0, n, blocks, 0, &mut Vec::new(), &mut out);
    out
}

/// One substitution instance of an axiom.
#[derive(Debug, Clone)]
pub struct Instance<S> {
    pub axiom: usize,
    pub substitution: Substitution,
    pub poly: MPoly<S>,
}

/// Every instance of a multilinear `axiom` obtained by partitioning the
/// target variables into one block per axiom variable and substituting a
/// monomial over each block. Instances equal up to a nonzero scalar are
/// reported once, keeping the first in enumeration order.
pub fn generate_instances<S: ExactScalar>(
    axiom_index: usize,
    axiom: &Identity<S>,
    bounds: &SearchBounds,
) -> Result<Vec<Instance<S>>, EngineError> {
    if !axiom.is_multilinear() {
        return Err(EngineError::NotMultilinear);
    }
    let axiom_vars = axiom.occurring_vars();
    let target: Vec<VarId> = bounds.target_vars.ids().collect();
    if axiom_vars.len() > target.len() {
        return Err(EngineError::TooManyAxiomVars { axiom: axiom_vars.len(), target: target.len() });
    }
    if axiom_vars.is_empty() {
        return Ok(Vec::new());
    }
    let k = bounds.max_alpha_power;
    let mut block_cache: HashMap<Vec<usize>, Vec<Monomial>> = HashMap::new();
    let perms = crate::identity::permutations(axiom_vars.len());
    let mut substitutions = Vec::new();
    for partition in set_partitions(target.len(), axiom_vars.len()) {
        let choices: Vec<Vec<Monomial>> = partition
            .iter()
            .map(|block| {
                block_cache
                    .entry(block.clone())
                    .or_insert_with(|| {
                        let vs: Vec<VarId> = block.iter().map(|&i| target[i]).collect();
                        enumerate_monomials(&vs, k).expect("blocks are nonempty")
                    })
                    .clone()
            })
            .collect();
        for perm in &perms {
            let mut idx = vec![0usize; choices.len()];
            loop {
                let mut s = Substitution::new(bounds.target_vars.clone());
                for (block, &axiom_slot) in perm.iter().enumerate() {
                    s.map.insert(axiom_vars[axiom_slot], choices[block][idx[block]].clone());
                }
                substitutions.push(s);
                // odometer, last block fastest
                let mut i = choices.len();
                let done = loop {
                    if i == 0 {
                        break true;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < choices[i].len() {
                        break false;
                    }
                    idx[i] = 0;
                };
                if done {
                    break;
                }
            }
        }
    }

    let polys: Vec<MPoly<S>> = substitutions
        .par_iter()
        .map(|s| substitute(axiom, s).map(|id| id.poly))
        .collect::<Result<_, _>>()?;

    let mut seen: HashSet<MPoly<S>> = HashSet::new();
    let mut out = Vec::new();
    for (s, p) in substitutions.into_iter().zip(polys) {
        let Some((_, lead)) = p.leading() else { continue };
        let key = p.scale(&(S::one() / lead.clone()));
        if seen.insert(key) {
            out.push(Instance { axiom: axiom_index, substitution: s, poly: p });
        }
    }
    Ok(out)
}

/// Outcome of [`span_membership`].
#[derive(Debug, Clone, PartialEq)]
pub enum SpanResult<S> {
    /// `target = Σ c·instances[i]` over the listed `(i, c)`, in index order.
    InSpan(Vec<(usize, S)>),
    /// Reduced remainder of the target; nonzero.
    NotInSpan { residual: MPoly<S> },
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Instances that share a connected support component with the target.
/// Instances outside those components can never contribute.
fn relevant_instances<S: ExactScalar>(target: &MPoly<S>, instances: &[MPoly<S>]) -> Vec<usize> {
    let mut ids: HashMap<&Monomial, usize> = HashMap::new();
    for p in instances.iter().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            let n = ids.len();
            ids.entry(m).or_insert(n);
        }
    }
    let mut uf = UnionFind::new(ids.len());
    for p in instances {
        let mut it = p.terms().map(|(m, _)| ids[m]);
        if let Some(first) = it.next() {
            for other in it {
                uf.union(first, other);
            }
        }
    }
    let roots: HashSet<usize> = target.terms().map(|(m, _)| uf.find(ids[m])).collect();
    instances
        .iter()
        .enumerate()
        .filter(|(_, p)| p.leading().is_some_and(|(m, _)| roots.contains(&uf.find(ids[m]))))
        .map(|(i, _)| i)
        .collect()
}

type Combo<S> = BTreeMap<usize, S>;

fn combo_add<S: ExactScalar>(acc: &mut Combo<S>, other: &Combo<S>, c: &S) {
    for (i, v) in other {
        let entry = acc.entry(*i).or_insert_with(S::zero);
        *entry = entry.clone() + v.clone() * c.clone();
        if entry.is_zero() {
            acc.remove(i);
        }
    }
}

/// Decides whether `target` lies in the rational span of `instances`.
///
/// Rows are reduced in instance order; each new row is pivoted on its
/// smallest monomial. No tolerance is involved, so the result and the
/// coefficients are reproducible.
pub fn span_membership<S: ExactScalar>(target: &MPoly<S>, instances: &[MPoly<S>]) -> SpanResult<S> {
    let mut basis: BTreeMap<Monomial, (MPoly<S>, Combo<S>)> = BTreeMap::new();
    for i in relevant_instances(target, instances) {
        let mut row = instances[i].clone();
        let mut combo: Combo<S> = [(i, S::one())].into();
        while let Some((m, c)) = row.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match basis.get(&m) {
                Some((brow, bcombo)) => {
                    let f = -c;
                    row.add_scaled(brow, &f);
                    combo_add(&mut combo, bcombo, &f);
                }
                None => {
                    let inv = S::one() / c;
                    let row = row.scale(&inv);
                    let mut scaled = Combo::new();
                    combo_add(&mut scaled, &combo, &inv);
                    basis.insert(m, (row, scaled));
                    break;
                }
            }
        }
    }

    let mut residual = target.clone();
    let mut combo = Combo::new();
    let mut cursor: Option<Monomial> = None;
    loop {
        let next = match &cursor {
            None => residual.terms().next(),
            Some(cur) => residual.terms().find(|(m, _)| *m > cur),
        }
        .map(|(m, c)| (m.clone(), c.clone()));
        let Some((m, c)) = next else { break };
        match basis.get(&m) {
            Some((brow, bcombo)) => {
                residual.add_scaled(brow, &-c.clone());
                combo_add(&mut combo, bcombo, &c);
            }
            None => cursor = Some(m),
        }
    }
    if residual.is_zero() {
        SpanResult::InSpan(combo.into_iter().collect())
    } else {
        SpanResult::NotInSpan { residual }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertRow<S> {
    /// Index into [`Certificate::axioms`].
    pub axiom: usize,
    pub substitution: Substitution,
    pub coeff: S,
}

/// Witness that `target` is a linear combination of axiom instances.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<S> {
    pub target: Identity<S>,
    /// Axioms by name, in the multilinear form the substitutions refer to.
    pub axioms: Vec<(String, Identity<S>)>,
    pub rows: Vec<CertRow<S>>,
}

impl<S: ExactScalar> Certificate<S> {
    /// `Σ coeff · substitute(axiom, substitution)`.
    pub fn replay(&self) -> Result<MPoly<S>, IdentityError> {
        let mut out = MPoly::zero();
        for row in &self.rows {
            let inst = substitute(&self.axioms[row.axiom].1, &row.substitution)?;
            out.add_scaled(&inst.poly, &row.coeff);
        }
        Ok(out)
    }

    /// `replay() - target.poly`; zero for a valid certificate.
    pub fn residual(&self) -> Result<MPoly<S>, IdentityError> {
        Ok(self.replay()?.sub(&self.target.poly))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl Certificate<Rational> {
    /// `[{axiom, substitution: {var: monomial}, coeff: "p/q"}, ...]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let (name, axiom) = &self.axioms[row.axiom];
                    json!({
                        "axiom": name,
                        "substitution": row.substitution.describe(&axiom.vars),
                        "coeff": format_rational(&row.coeff),
                    })
                })
                .collect(),
        )
    }
}

/// A target that could not be reached within the bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Unreached<S> {
    pub target: Identity<S>,
    pub residual: MPoly<S>,
    pub instances: usize,
    /// Axioms that contributed no instances because they have more variables
    /// than the target.
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Derivation<S> {
    Proved(Certificate<S>),
    NotInSpan(Unreached<S>),
}

impl<S> Derivation<S> {
    pub fn certificate(&self) -> Option<&Certificate<S>> {
        match self {
            Derivation::Proved(c) => Some(c),
            Derivation::NotInSpan(_) => None,
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, Derivation::Proved(_))
    }
}

/// Polarizes target and axioms, generates all instances within
/// `max_alpha_power` and runs [`span_membership`].
pub fn derive<S: ExactScalar>(
    target: &Identity<S>,
    axioms: &[(String, Identity<S>)],
    max_alpha_power: u32,
) -> Result<Derivation<S>, EngineError> {
    let target = polarize(target)?;
    let axioms: Vec<(String, Identity<S>)> = axioms
        .iter()
        .map(|(name, id)| Ok((name.clone(), polarize(id)?)))
        .collect::<Result<_, IdentityError>>()?;
    let bounds = SearchBounds::new(max_alpha_power, target.vars.clone());

    let mut instances = Vec::new();
    let mut skipped = Vec::new();
    for (i, (name, axiom)) in axioms.iter().enumerate() {
        match generate_instances(i, axiom, &bounds) {
            Ok(mut found) => instances.append(&mut found),
            Err(EngineError::TooManyAxiomVars { .. }) => skipped.push(name.clone()),
            Err(e) => return Err(e),
        }
    }
    let polys: Vec<MPoly<S>> = instances.iter().map(|inst| inst.poly.clone()).collect();
    Ok(match span_membership(&target.poly, &polys) {
        SpanResult::InSpan(combo) => {
            let rows = combo
                .into_iter()
                .map(|(i, coeff)| CertRow {
                    axiom: instances[i].axiom,
                    substitution: instances[i].substitution.clone(),
                    coeff,
                })
                .collect();
            Derivation::Proved(Certificate { target, axioms, rows })
        }
        SpanResult::NotInSpan { residual } => {
            Derivation::NotInSpan(Unreached { target, residual, instances: polys.len(), skipped })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::catalog;
    use crate::normal::normalize;
    use crate::term::parse_expr_in;

    fn ids(n: u32) -> Vec<VarId> {
        (0..n).map(VarId).collect()
    }

    #[test]
    fn monomial_enumeration_counts() {
        let one = enumerate_monomials(&ids(1), 2).unwrap();
        assert_eq!(one, vec![Monomial::leaf(VarId(0), 0), Monomial::leaf(VarId(0), 1), Monomial::leaf(VarId(0), 2)]);
        assert_eq!(enumerate_monomials(&ids(2), 0).unwrap().len(), 1);
        assert_eq!(enumerate_monomials(&ids(3), 0).unwrap().len(), 3);
        // (2n-3)!! shapes times (k+1)^n decorations
        assert_eq!(enumerate_monomials(&ids(4), 0).unwrap().len(), 15);
        assert_eq!(enumerate_monomials(&ids(3), 1).unwrap().len(), 3 * 8);
        assert_eq!(enumerate_monomials(&[], 1), Err(EngineError::EmptyVarSet));
    }

    /// Independent count: all 12 bracketed orderings of three letters,
    /// normalized through the raw-term path, give 3 monomials up to sign.
    #[test]
    fn three_letter_brackets_oracle() {
        let mut vars = Vars::from_names(["x", "y", "z"]);
        let mut found = HashSet::new();
        for p in crate::identity::permutations(3) {
            let n: Vec<&str> = p.iter().map(|&i| ["x", "y", "z"][i]).collect();
            for text in [format!("({}*{})*{}", n[0], n[1], n[2]), format!("{}*({}*{})", n[0], n[1], n[2])] {
                let poly = normalize(&parse_expr_in(&text, &mut vars).unwrap());
                found.insert(poly.leading().unwrap().0.clone());
            }
        }
        let enumerated: HashSet<_> = enumerate_monomials(&ids(3), 0).unwrap().into_iter().collect();
        assert_eq!(found, enumerated);
    }

    #[test]
    fn stirling_counts() {
        assert_eq!(set_partitions(4, 4).len(), 1);
        assert_eq!(set_partitions(4, 3).len(), 6);
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(4, 1).len(), 1);
        assert_eq!(set_partitions(5, 3).len(), 25);
        assert!(set_partitions(2, 3).is_empty());
    }

    #[test]
    fn jacobi_instances_include_twisted_leaf() {
        let axiom = catalog("hom_jacobi").unwrap();
        let bounds = SearchBounds::new(1, axiom.vars.clone());
        let inst = generate_instances(0, &axiom, &bounds).unwrap();
        let mut vars = axiom.vars.clone();
        let wanted = normalize(&parse_expr_in("J(a(x),y,z)", &mut vars).unwrap());
        assert!(inst.iter().any(|i| i.poly == wanted || i.poly == wanted.neg()));
        // 6 permutations of an alternating function collapse to one up to sign
        let plain = generate_instances(0, &axiom, &SearchBounds::new(0, axiom.vars.clone())).unwrap();
        assert_eq!(plain.len(), 1);
    }

    #[test]
    fn too_many_axiom_vars() {
        let axiom = catalog("hom_jacobi").unwrap();
        let bounds = SearchBounds::new(0, Vars::from_names(["x", "y"]));
        assert_eq!(
            generate_instances(0, &axiom, &bounds).unwrap_err(),
            EngineError::TooManyAxiomVars { axiom: 3, target: 2 }
        );
        let malcev = catalog("hom_malcev").unwrap();
        let bounds = SearchBounds::new(0, malcev.vars.clone());
        assert_eq!(generate_instances(0, &malcev, &bounds).unwrap_err(), EngineError::NotMultilinear);
    }

    #[test]
    fn empty_instance_list_is_not_in_span() {
        let mut vars = Vars::new();
        let target = normalize(&parse_expr_in("x*y", &mut vars).unwrap());
        match span_membership::<Rational>(&target, &[]) {
            SpanResult::NotInSpan { residual } => assert_eq!(residual, target),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn span_membership_small_system() {
        let mut vars = Vars::from_names(["x", "y", "z"]);
        let mut p = |t: &str| normalize(&parse_expr_in(t, &mut vars).unwrap());
        let a = p("x*y + a(x)*y");
        let b = p("a(x)*y - x*z");
        let target = p("2*x*y + 5*a(x)*y - 3*x*z");
        match span_membership(&target, &[a.clone(), b.clone()]) {
            SpanResult::InSpan(c) => {
                let two = Rational::from_integer(2.into());
                let three = Rational::from_integer(3.into());
                assert_eq!(c, vec![(0, two), (1, three)]);
            }
            other => panic!("{other:?}"),
        }
        let outside = p("x*y + x*z + a(x)*y");
        assert!(matches!(span_membership(&outside, &[a, b]), SpanResult::NotInSpan { .. }));
    }

    #[test]
    fn jacobi_is_not_a_consequence_of_malcev() {
        let target = catalog("hom_jacobi").unwrap();
        let axioms = vec![("hom_malcev".to_string(), catalog("hom_malcev").unwrap())];
        match derive(&target, &axioms, DEFAULT_MAX_ALPHA).unwrap() {
            Derivation::NotInSpan(u) => {
                assert_eq!(u.skipped, vec!["hom_malcev".to_string()]);
                assert_eq!(u.residual.len(), 3);
            }
            Derivation::Proved(_) => panic!("jacobi derived from malcev"),
        }
    }

    #[test]
    fn jacobi_implies_its_twisted_copies() {
        let mut vars = Vars::from_names(["x", "y", "z"]);
        let target = Identity::new(normalize(&parse_expr_in("J(a(x),a2(y),z) - 3*J(x,a(z),y)", &mut vars).unwrap()), vars);
        let axioms = vec![("hom_jacobi".to_string(), catalog("hom_jacobi").unwrap())];
        let d = derive(&target, &axioms, 2).unwrap();
        let cert = d.certificate().expect("derivable");
        assert!(cert.residual().unwrap().is_zero());
        assert_eq!(cert.len(), 2);
    }
}
