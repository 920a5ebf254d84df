//! Relevant, KE and hke checks.
//!
//! Three independent checkers decide the hke property: the definition
//! (every non-empty subcollection Γ has |⋃Γ|+|⋂Γ| = 2α), the pairwise form
//! (|⋂Γ₁−⋃Γ₂| = |⋂Γ₂−⋃Γ₁| for all disjoint non-empty Γ₁, Γ₂) and the
//! partition form (the same equality, restricted to Γ₁ ∪ Γ₂ = F). Each
//! reports the smallest failing selector as a witness.
//!
//! [`is_hke`] evaluates the partition form on the Venn atoms of F instead of
//! enumerating partitions: an element lies in ⋂Γ₁−⋃Γ₂ exactly when the set
//! of members containing it is Γ₁. It has no size limit and backs the
//! preconditions of the constructive modules.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::{
    check_enumerable, ElementSet, MemberMask, SetFamily, SubcollectionSelector, SubsetTables,
    ENUMERATION_CAP,
};

/// Member limit for the pairwise checker (3^|F| ordered pairs).
pub const PAIRWISE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Ke,
    Definition,
    Pairwise,
    Partition,
}

impl std::str::FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ke" => Ok(CheckMode::Ke),
            "definition" => Ok(CheckMode::Definition),
            "pairwise" => Ok(CheckMode::Pairwise),
            "partition" => Ok(CheckMode::Partition),
            other => Err(Error::PreconditionFailed(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    /// Two disjoint subcollections violating |⋂Γ₁−⋃Γ₂| = |⋂Γ₂−⋃Γ₁|.
    Pair {
        gamma1: SubcollectionSelector,
        gamma2: SubcollectionSelector,
    },
    /// A subcollection violating |⋃Γ|+|⋂Γ| = 2α.
    Subcollection { gamma: SubcollectionSelector },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkeVerdict {
    pub holds: bool,
    pub alpha: Option<usize>,
    pub mode: CheckMode,
    pub witness: Option<Witness>,
}

impl HkeVerdict {
    fn pass(mode: CheckMode, alpha: usize) -> Self {
        HkeVerdict {
            holds: true,
            alpha: Some(alpha),
            mode,
            witness: None,
        }
    }

    fn fail(mode: CheckMode, alpha: Option<usize>, witness: Witness) -> Self {
        HkeVerdict {
            holds: false,
            alpha,
            mode,
            witness: Some(witness),
        }
    }

    /// Re-evaluates the witness against `family`. Returns true when it
    /// reproduces a violated equality, and also for a passing verdict
    /// (which carries no witness).
    pub fn replay(&self, family: &SetFamily) -> Result<bool> {
        match (self.holds, self.witness) {
            (true, None) => Ok(true),
            (false, Some(Witness::Subcollection { gamma })) => {
                let alpha = self.alpha.ok_or(Error::PreconditionFailed(
                    "subcollection witness without alpha".into(),
                ))?;
                let u = family.union_of(gamma)?.len();
                let i = family.intersection_of(gamma)?.len();
                Ok(u + i != 2 * alpha)
            }
            (false, Some(Witness::Pair { gamma1, gamma2 })) => {
                Ok(!pair_equality_holds(family, gamma1, gamma2)?)
            }
            _ => Ok(false),
        }
    }
}

/// The non-hereditary KE equality on the whole family: |⋃F|+|⋂F| = 2α.
pub fn check_ke(family: &SetFamily) -> Result<HkeVerdict> {
    let alpha = family.alpha_of()?;
    let u = family.union_all().len();
    let i = family.intersection_all().len();
    if u + i == 2 * alpha {
        Ok(HkeVerdict::pass(CheckMode::Ke, alpha))
    } else {
        let gamma = SubcollectionSelector::from_indices(0..family.len());
        Ok(HkeVerdict::fail(
            CheckMode::Ke,
            Some(alpha),
            Witness::Subcollection { gamma },
        ))
    }
}

/// Checks |⋃Γ|+|⋂Γ| = 2α for every non-empty Γ, in increasing mask order.
pub fn check_hke_definition(family: &SetFamily) -> Result<HkeVerdict> {
    let alpha = family.alpha_of()?;
    check_enumerable(family.len(), ENUMERATION_CAP)?;
    let tables = SubsetTables::new(family.members());
    let end = 1u32 << family.len();
    for mask in 1..end {
        if tables.union(mask).len() + tables.inter(mask).len() != 2 * alpha {
            return Ok(HkeVerdict::fail(
                CheckMode::Definition,
                Some(alpha),
                Witness::Subcollection {
                    gamma: SubcollectionSelector::from_mask(mask),
                },
            ));
        }
    }
    Ok(HkeVerdict::pass(CheckMode::Definition, alpha))
}

/// |⋂Γ₁−⋃Γ₂| = |⋂Γ₂−⋃Γ₁| for two disjoint non-empty subcollections.
pub fn pair_equality_holds(
    family: &SetFamily,
    g1: SubcollectionSelector,
    g2: SubcollectionSelector,
) -> Result<bool> {
    if g1.is_empty() || g2.is_empty() {
        return Err(Error::EmptySelector);
    }
    if !g1.is_disjoint(g2) {
        let shared = SubcollectionSelector::from_mask(g1.mask() & g2.mask());
        return Err(Error::OverlappingSelectors(shared.indices()[0]));
    }
    let (i1, u1) = (family.intersection_of(g1)?, family.union_of(g1)?);
    let (i2, u2) = (family.intersection_of(g2)?, family.union_of(g2)?);
    Ok((i1 - u2).len() == (i2 - u1).len())
}

#[inline]
fn pair_equality(tables: &SubsetTables, g1: u32, g2: u32) -> bool {
    (tables.inter(g1) - tables.union(g2)).len() == (tables.inter(g2) - tables.union(g1)).len()
}

/// The pair equality |⋂Γ₁−⋃Γ₂| = |⋂Γ₂−⋃Γ₁| over every ordered pair of disjoint non-empty subcollections.
pub fn check_hke_pairwise(family: &SetFamily) -> Result<HkeVerdict> {
    let alpha = family.alpha_of()?;
    check_enumerable(family.len(), PAIRWISE_CAP)?;
    let tables = SubsetTables::new(family.members());
    let full = (1u32 << family.len()) - 1;
    for g1 in 1..=full {
        let rest = full & !g1;
        // ascending non-empty submasks of `rest`
        let mut g2 = rest.wrapping_neg() & rest;
        while g2 != 0 {
            if !pair_equality(&tables, g1, g2) {
                return Ok(HkeVerdict::fail(
                    CheckMode::Pairwise,
                    Some(alpha),
                    Witness::Pair {
                        gamma1: SubcollectionSelector::from_mask(g1),
                        gamma2: SubcollectionSelector::from_mask(g2),
                    },
                ));
            }
            if g2 == rest {
                break;
            }
            g2 = g2.wrapping_sub(rest) & rest;
        }
    }
    Ok(HkeVerdict::pass(CheckMode::Pairwise, alpha))
}

/// The pair equality |⋂Γ₁−⋃Γ₂| = |⋂Γ₂−⋃Γ₁| over every two-block partition of F. Does not require the
/// family to be relevant; relevance is derived when every partition passes.
pub fn check_hke_partition(family: &SetFamily) -> Result<HkeVerdict> {
    check_enumerable(family.len(), ENUMERATION_CAP)?;
    let tables = SubsetTables::new(family.members());
    let full = (1u32 << family.len()) - 1;
    for g1 in 1..full {
        let g2 = full & !g1;
        if !pair_equality(&tables, g1, g2) {
            return Ok(HkeVerdict::fail(
                CheckMode::Partition,
                family.alpha_of().ok(),
                Witness::Pair {
                    gamma1: SubcollectionSelector::from_mask(g1),
                    gamma2: SubcollectionSelector::from_mask(g2),
                },
            ));
        }
    }
    let u = family.union_all().len();
    let i = family.intersection_all().len();
    let alpha = family.alpha_of().map_err(|_| {
        Error::TheoremViolation(
            "every partition satisfies the pair equality but the family is not relevant".into(),
        )
    })?;
    if u + i != 2 * alpha {
        return Err(Error::TheoremViolation(format!(
            "partition form holds but |⋃F|+|⋂F| = {} ≠ 2α = {}",
            u + i,
            2 * alpha
        )));
    }
    Ok(HkeVerdict::pass(CheckMode::Partition, alpha))
}

/// Number of elements of ⋃F per membership pattern.
fn atom_counts(family: &SetFamily) -> HashMap<MemberMask, usize> {
    let mut counts = HashMap::new();
    for p in family.element_patterns() {
        if !p.is_empty() {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    counts
}

/// hke test on Venn atoms: every membership pattern Γ ≠ F occurs exactly as
/// often as its complement F−Γ. No size limit.
pub fn is_hke(family: &SetFamily) -> bool {
    let m = family.len();
    let counts = atom_counts(family);
    let full = MemberMask::full(m);
    counts
        .iter()
        .all(|(p, &c)| *p == full || counts.get(&p.complement(m)).copied().unwrap_or(0) == c)
}

/// Whether F ∪ {D} is hke, given that F is hke and A = member `base`:
/// |D| = α and, for every partition {Γ₁, Γ₂} of F−{A} with Γ₂ ≠ ∅,
/// |A∩D∩⋂Γ₁−⋃Γ₂| = |⋂Γ₂−⋃Γ₁−A−D| (⋂∅ read as the whole universe).
pub fn can_add(family: &SetFamily, base: usize, d: ElementSet) -> Result<bool> {
    family.member(base)?;
    if !is_hke(family) {
        return Err(Error::NotHke);
    }
    can_add_unchecked(family, base, d)
}

/// [`can_add`] without re-verifying that `family` is hke.
pub(crate) fn can_add_unchecked(family: &SetFamily, base: usize, d: ElementSet) -> Result<bool> {
    let a = family.member(base)?;
    if d.len() != a.len() {
        return Ok(false);
    }
    let m = family.len();
    // membership patterns over F−{A}; only non-zero counts can break the equality
    let rest = MemberMask::full(m).without(base);
    let mut left: HashMap<MemberMask, usize> = HashMap::new();
    let mut right: HashMap<MemberMask, usize> = HashMap::new();
    for (x, p) in family.element_patterns().into_iter().enumerate() {
        let p = p.without(base);
        if a.contains(x) && d.contains(x) {
            *left.entry(p).or_insert(0) += 1;
        } else if !a.contains(x) && !d.contains(x) && !p.is_empty() {
            *right.entry(p).or_insert(0) += 1;
        }
    }
    let complement = |p: &MemberMask| {
        let mut c = p.complement(m);
        if c.contains(base) {
            c = c.without(base);
        }
        c
    };
    let left_ok = left
        .iter()
        .filter(|(p, _)| **p != rest)
        .all(|(p, &c)| right.get(&complement(p)).copied().unwrap_or(0) == c);
    let right_ok = right
        .iter()
        .all(|(q, &c)| left.get(&complement(q)).copied().unwrap_or(0) == c);
    Ok(left_ok && right_ok)
}

/// |A−B−C| = |B∩C−A| for all ordered triples of distinct members, and
/// |A∩B−C−D| = |C∩D−A−B| for all ordered quadruples.
pub fn small_subcollection_identities(family: &SetFamily) -> Result<bool> {
    if family.len() < 3 {
        return Err(Error::TooSmall {
            len: family.len(),
            min: 3,
        });
    }
    if !is_hke(family) {
        return Err(Error::NotHke);
    }
    let f = family.members();
    let n = f.len();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for c in (0..n).filter(|&c| c != a && c != b) {
                if (f[a] - f[b] - f[c]).len() != ((f[b] & f[c]) - f[a]).len() {
                    return Ok(false);
                }
                for d in (0..n).filter(|&d| d != a && d != b && d != c) {
                    if ((f[a] & f[b]) - f[c] - f[d]).len() != ((f[c] & f[d]) - f[a] - f[b]).len() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
