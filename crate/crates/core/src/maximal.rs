//! Typical collections, restriction maps, the dual relation, one-set
//! extension and completion to a maximal hke collection.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::{label_cmp, ElementSet, ElementTable, MemberMask, SetFamily};
use crate::verify::{can_add_unchecked, is_hke};

/// Largest α accepted by [`typical_collection`] and [`complete_to_maximal`].
pub const MAX_TYPICAL_ALPHA: usize = 7;

/// The typical collection for α: all S ⊆ [2α] with i ∈ S ⇔ i+α ∉ S,
/// in lexicographic order.
pub fn typical_collection(alpha: usize) -> Result<SetFamily> {
    if !(1..=MAX_TYPICAL_ALPHA).contains(&alpha) {
        return Err(Error::AlphaOutOfRange {
            alpha,
            min: 1,
            max: MAX_TYPICAL_ALPHA,
        });
    }
    let table = ElementTable::from_labels((1..=2 * alpha).map(|i| i.to_string()))?;
    let mut members: Vec<ElementSet> = (0u32..1 << alpha)
        .map(|choice| {
            (0..alpha)
                .map(|i| if choice >> i & 1 == 1 { i + alpha } else { i })
                .collect()
        })
        .collect();
    members.sort_by(|a, b| a.lex_cmp(*b));
    SetFamily::from_parts(table, members)
}

/// 2^α as a member count, saturating for α beyond the word size.
pub(crate) fn pow2(alpha: usize) -> u128 {
    1u128.checked_shl(alpha as u32).unwrap_or(u128::MAX)
}

fn require_hke(family: &SetFamily) -> Result<()> {
    if is_hke(family) {
        Ok(())
    } else {
        Err(Error::NotHke)
    }
}

/// f_A : D ↦ A∩D over every member D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionMap {
    pub base: usize,
    pub values: Vec<ElementSet>,
    pub injective: bool,
    pub surjective: bool,
}

pub fn restriction_map(family: &SetFamily, base: usize) -> Result<RestrictionMap> {
    let a = family.member(base)?;
    require_hke(family)?;
    let values: Vec<ElementSet> = family.members().iter().map(|&d| a & d).collect();
    let distinct: HashSet<ElementSet> = values.iter().copied().collect();
    let injective = distinct.len() == values.len();
    let surjective = distinct.len() as u128 == pow2(a.len());
    Ok(RestrictionMap {
        base,
        values,
        injective,
        surjective,
    })
}

fn sorted_pair(table: &ElementTable, x: usize, y: usize) -> [String; 2] {
    let (a, b) = (table.label(x), table.label(y));
    if label_cmp(a, b).is_le() {
        [a.to_owned(), b.to_owned()]
    } else {
        [b.to_owned(), a.to_owned()]
    }
}

fn sort_pairs(pairs: &mut [[String; 2]]) {
    pairs.sort_by(|p, q| label_cmp(&p[0], &q[0]).then_with(|| label_cmp(&p[1], &q[1])));
}

/// Index pairs (x, y), x < y, with A−D = {x} and D−A = {y} for some members.
fn dual_index_pairs(family: &SetFamily) -> BTreeSet<(usize, usize)> {
    let f = family.members();
    let mut out = BTreeSet::new();
    for &a in f {
        for &d in f {
            let (ad, da) = (a - d, d - a);
            if ad.len() == 1 && da.len() == 1 {
                let (x, y) = (ad.min_index().unwrap(), da.min_index().unwrap());
                out.insert((x.min(y), x.max(y)));
            }
        }
    }
    out
}

/// All non-reflexive pairs of the dual relation ≈, as sorted label pairs.
pub fn dual_relation(family: &SetFamily) -> Result<Vec<[String; 2]>> {
    require_hke(family)?;
    let table = family.table();
    let mut pairs: Vec<[String; 2]> = dual_index_pairs(family)
        .into_iter()
        .map(|(x, y)| sorted_pair(table, x, y))
        .collect();
    sort_pairs(&mut pairs);
    Ok(pairs)
}

/// The ≈-classes of a maximal hke collection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPairing {
    pub alpha: usize,
    pub classes: Vec<[String; 2]>,
}

/// Whether `pairs` split `ground` into exactly `alpha` disjoint two-element classes.
fn is_perfect_pairing(pairs: &BTreeSet<(usize, usize)>, ground: ElementSet, alpha: usize) -> bool {
    let mut covered = ElementSet::EMPTY;
    for &(x, y) in pairs {
        if covered.contains(x) || covered.contains(y) {
            return false;
        }
        covered.insert(x);
        covered.insert(y);
    }
    pairs.len() == alpha && covered == ground
}

pub fn as_dual_pairing(family: &SetFamily) -> Result<DualPairing> {
    require_hke(family)?;
    let alpha = family.alpha_of()?;
    if family.len() as u128 != pow2(alpha) {
        return Err(Error::NotMaximal);
    }
    let pairs = dual_index_pairs(family);
    if !is_perfect_pairing(&pairs, family.union_all(), alpha) {
        return Err(Error::NotMaximal);
    }
    let mut classes: Vec<[String; 2]> = pairs
        .into_iter()
        .map(|(x, y)| sorted_pair(family.table(), x, y))
        .collect();
    sort_pairs(&mut classes);
    Ok(DualPairing { alpha, classes })
}

/// A set D produced by [`extend`], over the family's universe grown by
/// `fresh` labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    /// The input family over the grown universe (D not yet added).
    pub family: SetFamily,
    pub d: ElementSet,
    pub fresh: Vec<String>,
}

impl Extension {
    /// F ∪ {D} and the position of D in it.
    pub fn extended(&self) -> Result<(SetFamily, usize)> {
        self.family.with_member(self.d)
    }

    pub fn d_labels(&self) -> Vec<String> {
        self.family.table().sorted_labels(self.d)
    }
}

/// Builds D with A∩D = E such that F ∪ {D} is hke and |D−⋃F| = |⋂F−E|.
pub fn extend(family: &SetFamily, base: usize, e: ElementSet) -> Result<Extension> {
    let a = family.member(base)?;
    require_hke(family)?;
    if !e.is_subset(a) {
        return Err(Error::NotASubset);
    }
    extend_unchecked(family, base, e)
}

pub(crate) fn extend_unchecked(
    family: &SetFamily,
    base: usize,
    e: ElementSet,
) -> Result<Extension> {
    let a = family.members()[base];
    let m = family.len();
    let full = MemberMask::full(m);
    let patterns = family.element_patterns();
    let table = family.table();

    // e_Γ for A ∈ Γ ⊊ F: elements of E whose member pattern is exactly Γ
    let mut e_count: HashMap<&MemberMask, usize> = HashMap::new();
    for x in e.iter() {
        if patterns[x] != full {
            *e_count.entry(&patterns[x]).or_insert(0) += 1;
        }
    }
    // E_Γ: the e_Γ lowest elements of ⋂(F−Γ)−⋃Γ, i.e. with pattern F−Γ
    let mut by_pattern: HashMap<MemberMask, ElementSet> = HashMap::new();
    for (x, p) in patterns.iter().enumerate() {
        if !p.is_empty() {
            by_pattern.entry(p.clone()).or_default().insert(x);
        }
    }
    let mut taken = ElementSet::EMPTY;
    for (gamma, &count) in &e_count {
        let pool = by_pattern
            .get(&gamma.complement(m))
            .copied()
            .unwrap_or_default();
        if pool.len() < count {
            return Err(Error::TheoremViolation(format!(
                "extension needs {count} elements of a Venn atom holding {}",
                pool.len()
            )));
        }
        taken = taken | table.lowest(pool, count);
    }

    let core = family.intersection_all();
    let fresh = table.fresh_integer_labels((core - e).len());
    let grown = family.with_extra_labels(&fresh)?;
    let c: ElementSet = fresh
        .iter()
        .map(|l| grown.table().require(l))
        .collect::<Result<ElementSet>>()?;
    let d = e | (family.union_all() - a - taken) | c;
    Ok(Extension {
        family: grown,
        d,
        fresh,
    })
}

/// Result of [`complete_to_maximal`]: the first `original` members are the
/// input members in their input order, followed by the added sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub family: SetFamily,
    pub original: usize,
    /// Labels outside the input universe introduced while emptying ⋂F.
    pub fresh: Vec<String>,
}

impl Completion {
    pub fn added(&self) -> &[ElementSet] {
        &self.family.members()[self.original..]
    }
}

/// Grows an hke family to a maximal one with 2^α members.
pub fn complete_to_maximal(family: &SetFamily) -> Result<Completion> {
    require_hke(family)?;
    let alpha = family.alpha_of()?;
    if !(1..=MAX_TYPICAL_ALPHA).contains(&alpha) {
        return Err(Error::AlphaOutOfRange {
            alpha,
            min: 1,
            max: MAX_TYPICAL_ALPHA,
        });
    }
    let original = family.len();
    let mut current = family.clone();
    let mut fresh = Vec::new();

    // ⋂F ≠ ∅: add B = A ∪ C − ⋂F with |C| = |⋂F| fresh; afterwards ⋂ = ⋂F ∩ B = ∅
    let core = current.intersection_all();
    if !core.is_empty() {
        let labels = current.table().fresh_integer_labels(core.len());
        let grown = current.with_extra_labels(&labels)?;
        let c = grown.table().set_from_labels(&labels)?;
        let b = (grown.members()[0] | c) - core;
        if !can_add_unchecked(&grown, 0, b)? {
            return Err(Error::TheoremViolation(
                "core removal set is not addable".into(),
            ));
        }
        current = grown.with_member(b)?.0;
        fresh = labels;
    }

    let target = pow2(alpha);
    while (current.len() as u128) < target {
        let a = current.members()[0];
        let image: HashSet<ElementSet> = current.members().iter().map(|&d| a & d).collect();
        let e = a
            .subsets()
            .find(|s| !image.contains(s))
            .ok_or_else(|| Error::TheoremViolation("f_A is onto but |F| < 2^α".into()))?;
        let ext = extend_unchecked(&current, 0, e)?;
        if !ext.fresh.is_empty() {
            return Err(Error::TheoremViolation(
                "extension of a core-free family needed fresh labels".into(),
            ));
        }
        let (next, pos) = ext.extended()?;
        if pos != current.len() {
            return Err(Error::TheoremViolation(
                "extension returned an existing member".into(),
            ));
        }
        current = next;
    }
    Ok(Completion {
        family: current,
        original,
        fresh,
    })
}

/// |F| = 2^α, for an hke family.
pub fn is_maximal(family: &SetFamily) -> Result<bool> {
    require_hke(family)?;
    Ok(family.len() as u128 == pow2(family.alpha_of()?))
}

/// |⋃F| = 2α, ≈ splits ⋃F into α pairs, and F is exactly the set of
/// α-subsets of ⋃F meeting every pair.
pub fn characterize_maximal(family: &SetFamily) -> Result<bool> {
    let alpha = family.alpha_of()?;
    let ground = family.union_all();
    if ground.len() != 2 * alpha {
        return Ok(false);
    }
    let pairs = dual_index_pairs(family);
    if !is_perfect_pairing(&pairs, ground, alpha) {
        return Ok(false);
    }
    let hits_all = family
        .members()
        .iter()
        .all(|&s| pairs.iter().all(|&(x, y)| s.contains(x) != s.contains(y)));
    Ok(hits_all && family.len() as u128 == pow2(alpha))
}

/// x ≈ y in a maximal hke family, cross-checked against "every member meets
/// {x, y}" and "no member contains both".
pub fn dual_membership_test(family: &SetFamily, x: &str, y: &str) -> Result<bool> {
    if !is_maximal(family)? {
        return Err(Error::NotMaximal);
    }
    let xi = family.table().require(x)?;
    let yi = family.table().require(y)?;
    if xi == yi {
        return Err(Error::PreconditionFailed("x and y must differ".into()));
    }
    let ground = family.union_all();
    if !ground.contains(xi) || !ground.contains(yi) {
        return Err(Error::PreconditionFailed(
            "x and y must lie in the union of the family".into(),
        ));
    }
    let related = dual_index_pairs(family).contains(&(xi.min(yi), xi.max(yi)));
    let f = family.members();
    let meets = f.iter().all(|s| s.contains(xi) || s.contains(yi));
    let never_both = f.iter().all(|s| !(s.contains(xi) && s.contains(yi)));
    if related != meets || related != never_both {
        return Err(Error::TheoremViolation(format!(
            "dual test disagrees for {x}, {y}: ≈ {related}, meets {meets}, disjoint {never_both}"
        )));
    }
    Ok(related)
}
