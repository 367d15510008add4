//! Constant fusion over the canonical form.
//!
//! Within an n-ary sum every constant term joins one cluster, within an
//! n-ary product every constant factor (reciprocals included) joins one
//! cluster, and a wholly constant subexpression is a single cluster. A
//! cluster becomes a group when it contains at least one empirical
//! constant; groups are identified by their member set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::canonical::{canonicalize, Atom, Canonical, CanonicalStatement, Factor, Head, Term};
use crate::ontology::BoundStatement;

/// A maximal cluster of algebraically combinable constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FusedConstantGroup {
    /// Empirical-constant concept ids, never empty.
    pub members: BTreeSet<String>,
    /// First subexpression (in left-to-right traversal) that produced it.
    pub witness: Canonical,
}

impl fmt::Display for FusedConstantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<&str> = self.members.iter().map(String::as_str).collect();
        write!(f, "{{{}}}", members.join(", "))
    }
}

#[derive(Default)]
struct GroupSet {
    groups: BTreeMap<BTreeSet<String>, Canonical>,
}

impl GroupSet {
    fn add(&mut self, members: BTreeSet<String>, witness: Canonical) {
        if !members.is_empty() {
            self.groups.entry(members).or_insert(witness);
        }
    }

    fn collect(&mut self, node: &Canonical) {
        if node.is_constant() {
            self.add(node.members(), node.clone());
            return;
        }
        match node {
            Canonical::Leaf(_) => {}
            Canonical::Sum(terms) => {
                let (constant, rest): (Vec<&Term>, Vec<&Term>) =
                    terms.iter().partition(|t| t.node.is_constant());
                if !constant.is_empty() {
                    let cluster = Canonical::from_terms(constant.into_iter().cloned().collect());
                    self.add(cluster.members(), cluster);
                }
                rest.into_iter().for_each(|t| self.collect(&t.node));
            }
            Canonical::Product(factors) => {
                let (constant, rest): (Vec<&Factor>, Vec<&Factor>) =
                    factors.iter().partition(|f| f.node.is_constant());
                if !constant.is_empty() {
                    let cluster = Canonical::from_factors(constant.into_iter().cloned().collect());
                    self.add(cluster.members(), cluster);
                }
                rest.into_iter().for_each(|f| self.collect(&f.node));
            }
            Canonical::Power(base, exp) => {
                self.collect(base);
                self.collect(exp);
            }
            Canonical::Apply { head, args } => {
                if let Head::Concept(atom) = head {
                    if atom.is_constant() {
                        let leaf = Canonical::Leaf(atom.clone());
                        self.add(leaf.members(), leaf);
                    }
                }
                args.iter().for_each(|a| self.collect(a));
            }
        }
    }

    fn into_groups(self) -> Vec<FusedConstantGroup> {
        self.groups
            .into_iter()
            .map(|(members, witness)| FusedConstantGroup { members, witness })
            .collect()
    }
}

/// Fused groups of a canonical statement, sorted by member set.
pub fn groups_of(canonical: &CanonicalStatement) -> Vec<FusedConstantGroup> {
    let mut set = GroupSet::default();
    for side in canonical.sides() {
        set.collect(side);
    }
    set.into_groups()
}

/// Fused constant groups of a bound, auxiliary-free statement.
pub fn fuse_constants(bound: &BoundStatement) -> Vec<FusedConstantGroup> {
    groups_of(&canonicalize(bound))
}

/// Replaces every fused cluster by a single placeholder leaf.
pub fn fold_constants(node: &Canonical) -> Canonical {
    if node.is_constant() {
        return Canonical::Leaf(Atom::Fused(node.members()));
    }
    match node {
        Canonical::Leaf(_) => node.clone(),
        Canonical::Sum(terms) => {
            let (constant, rest): (Vec<&Term>, Vec<&Term>) =
                terms.iter().partition(|t| t.node.is_constant());
            let mut out = Vec::with_capacity(rest.len() + 1);
            if !constant.is_empty() {
                let members = constant.iter().flat_map(|t| t.node.members()).collect();
                out.push(Term {
                    negative: false,
                    node: Canonical::Leaf(Atom::Fused(members)),
                });
            }
            out.extend(rest.into_iter().map(|t| Term {
                negative: t.negative,
                node: fold_constants(&t.node),
            }));
            Canonical::Sum(out)
        }
        Canonical::Product(factors) => {
            let (constant, rest): (Vec<&Factor>, Vec<&Factor>) =
                factors.iter().partition(|f| f.node.is_constant());
            let mut out = Vec::with_capacity(rest.len() + 1);
            if !constant.is_empty() {
                let members = constant.iter().flat_map(|f| f.node.members()).collect();
                out.push(Factor {
                    reciprocal: false,
                    node: Canonical::Leaf(Atom::Fused(members)),
                });
            }
            out.extend(rest.into_iter().map(|f| Factor {
                reciprocal: f.reciprocal,
                node: fold_constants(&f.node),
            }));
            Canonical::Product(out)
        }
        Canonical::Power(base, exp) => Canonical::Power(
            Box::new(fold_constants(base)),
            Box::new(fold_constants(exp)),
        ),
        Canonical::Apply { head, args } => Canonical::Apply {
            head: head.clone(),
            args: args.iter().map(fold_constants).collect(),
        },
    }
}

pub fn fold_statement(canonical: &CanonicalStatement) -> CanonicalStatement {
    CanonicalStatement {
        left: fold_constants(&canonical.left),
        right: fold_constants(&canonical.right),
    }
}

/// Groups split into those that add a free parameter and those whose value
/// is already fixed by the others.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupBasis {
    pub independent: Vec<FusedConstantGroup>,
    pub dependent: Vec<FusedConstantGroup>,
}

/// Selects a maximal set of groups that can each be assigned a distinct
/// member constant (a maximum group–constant matching). The size of the
/// selection is the number of free constant parameters of the statement.
///
/// Groups are offered smallest first, ties broken by member set, so the
/// dependent groups reported are the most composite ones.
pub fn independent_groups(groups: Vec<FusedConstantGroup>) -> GroupBasis {
    let mut order = groups;
    order.sort_by(|a, b| (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members)));

    let mut owner: BTreeMap<String, usize> = BTreeMap::new();
    let mut basis = GroupBasis::default();
    let mut accepted: Vec<FusedConstantGroup> = Vec::new();

    fn augment(
        group: &BTreeSet<String>,
        index: usize,
        accepted: &[&BTreeSet<String>],
        owner: &mut BTreeMap<String, usize>,
        visited: &mut BTreeSet<String>,
    ) -> bool {
        for constant in group {
            if !visited.insert(constant.clone()) {
                continue;
            }
            let free = match owner.get(constant) {
                None => true,
                Some(&other) => augment(accepted[other], other, accepted, owner, visited),
            };
            if free {
                owner.insert(constant.clone(), index);
                return true;
            }
        }
        false
    }

    for group in order {
        let index = accepted.len();
        let mut trial = owner.clone();
        let mut refs: Vec<&BTreeSet<String>> = accepted.iter().map(|g| &g.members).collect();
        refs.push(&group.members);
        if augment(
            &group.members,
            index,
            &refs,
            &mut trial,
            &mut BTreeSet::new(),
        ) {
            owner = trial;
            accepted.push(group);
        } else {
            basis.dependent.push(group);
        }
    }
    accepted.sort_by(|a, b| a.members.cmp(&b.members));
    basis.independent = accepted;
    basis
}
