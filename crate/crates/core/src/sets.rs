//! Ground universes, element sets, set families and subcollection selectors.
//!
//! Elements are interned into an [`ElementTable`] and represented by dense
//! indices, so an [`ElementSet`] is a plain `u128` bitmask. A [`SetFamily`]
//! is an ordered list of distinct, non-empty element sets over one table.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum number of ground elements in one universe.
pub const UNIVERSE_CAP: usize = 128;

/// Maximum family size for which subcollections are enumerated.
pub const ENUMERATION_CAP: usize = 24;

/// Canonical label order: integers first, compared numerically, then all
/// other tokens lexicographically.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i128>(), b.parse::<i128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Bijection between element labels and dense indices `0..n`, in insertion order.
#[derive(Debug, Clone, Default)]
pub struct ElementTable {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl ElementTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = Self::new();
        for label in labels {
            table.intern(label.as_ref())?;
        }
        Ok(table)
    }

    /// Returns the index of `label`, adding it if unseen.
    pub fn intern(&mut self, label: &str) -> Result<usize> {
        if let Some(&i) = self.index.get(label) {
            return Ok(i);
        }
        if self.labels.len() >= UNIVERSE_CAP {
            return Err(Error::UniverseTooLarge { cap: UNIVERSE_CAP });
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        Ok(i)
    }

    pub fn get(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Every index of the table as one set.
    pub fn full_set(&self) -> ElementSet {
        ElementSet::prefix(self.len())
    }

    /// The `count` smallest non-negative integers not yet used as labels.
    pub fn fresh_integer_labels(&self, count: usize) -> Vec<String> {
        let used: HashSet<i128> = self
            .labels
            .iter()
            .filter_map(|l| l.parse::<i128>().ok())
            .collect();
        (0i128..)
            .filter(|k| !used.contains(k) && !self.index.contains_key(&k.to_string()))
            .take(count)
            .map(|k| k.to_string())
            .collect()
    }

    /// Indices of `set`, sorted by canonical label order.
    pub fn sorted_indices(&self, set: ElementSet) -> Vec<usize> {
        let mut v: Vec<usize> = set.iter().collect();
        v.sort_by(|&a, &b| label_cmp(self.label(a), self.label(b)));
        v
    }

    /// Labels of `set`, sorted by canonical label order.
    pub fn sorted_labels(&self, set: ElementSet) -> Vec<String> {
        self.sorted_indices(set)
            .into_iter()
            .map(|i| self.labels[i].clone())
            .collect()
    }

    /// The `count` elements of `set` that come first in canonical label order.
    pub fn lowest(&self, set: ElementSet, count: usize) -> ElementSet {
        self.sorted_indices(set).into_iter().take(count).collect()
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<ElementSet> {
        labels
            .iter()
            .map(|l| self.require(l.as_ref()))
            .collect::<Result<ElementSet>>()
    }
}

impl PartialEq for ElementTable {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for ElementTable {}

/// A subset of a table's universe, as a bitmask over dense indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u128);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);
    pub const ALL: ElementSet = ElementSet(u128::MAX);

    pub fn from_bits(bits: u128) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        ElementSet(1u128 << index)
    }

    /// The set `{0, .., n-1}`.
    pub fn prefix(n: usize) -> Self {
        if n >= 128 {
            ElementSet(u128::MAX)
        } else {
            ElementSet((1u128 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 128 && self.0 >> index & 1 == 1
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1u128 << index;
    }

    pub fn remove(&mut self, index: usize) {
        self.0 &= !(1u128 << index);
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ElementSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_index(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Lexicographic comparison of the sorted index sequences.
    pub fn lex_cmp(self, other: ElementSet) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }

    /// All subsets of `self` in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let full = self.0;
        let mut next = Some(0u128);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some(cur.wrapping_sub(full) & full)
            };
            Some(ElementSet(cur))
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = ElementSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl BitOr for ElementSet {
    type Output = ElementSet;
    fn bitor(self, rhs: Self) -> Self {
        ElementSet(self.0 | rhs.0)
    }
}

impl BitAnd for ElementSet {
    type Output = ElementSet;
    fn bitand(self, rhs: Self) -> Self {
        ElementSet(self.0 & rhs.0)
    }
}

impl Sub for ElementSet {
    type Output = ElementSet;
    fn sub(self, rhs: Self) -> Self {
        ElementSet(self.0 & !rhs.0)
    }
}

impl Not for ElementSet {
    type Output = ElementSet;
    fn not(self) -> Self {
        ElementSet(!self.0)
    }
}

/// A subcollection of a family, as a bitmask over member positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubcollectionSelector(u32);

impl SubcollectionSelector {
    pub fn from_mask(mask: u32) -> Self {
        SubcollectionSelector(mask)
    }

    /// Selector over the first `len` members.
    pub fn all(len: usize) -> Self {
        assert!(len <= 32, "selectors address at most 32 members");
        if len == 32 {
            SubcollectionSelector(u32::MAX)
        } else {
            SubcollectionSelector((1u32 << len) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        SubcollectionSelector(indices.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 >> index & 1 == 1
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }
}

impl Serialize for SubcollectionSelector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SubcollectionSelector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = indices.iter().find(|&&i| i >= 32) {
            return Err(serde::de::Error::custom(format!(
                "selector index {bad} out of range"
            )));
        }
        Ok(SubcollectionSelector::from_indices(indices))
    }
}

/// Bitset over member positions, for families of any size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemberMask(Vec<u64>);

impl MemberMask {
    pub fn empty(len: usize) -> Self {
        MemberMask(vec![0; len.div_ceil(64)])
    }

    pub fn full(len: usize) -> Self {
        let mut m = Self::empty(len);
        for i in 0..len {
            m.insert(i);
        }
        m
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Complement within the first `len` positions.
    pub fn complement(&self, len: usize) -> Self {
        let mut out = Self::empty(len);
        for i in 0..len {
            if !self.contains(i) {
                out.insert(i);
            }
        }
        out
    }

    pub fn without(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.0[i / 64] &= !(1 << (i % 64));
        out
    }
}

/// An ordered collection of distinct non-empty element sets over one universe.
#[derive(Clone, Debug)]
pub struct SetFamily {
    table: ElementTable,
    members: Vec<ElementSet>,
}

impl SetFamily {
    /// Builds a family over `table`; rejects empty, duplicate or out-of-table members.
    pub fn from_parts(table: ElementTable, members: Vec<ElementSet>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let full = table.full_set();
        let mut seen = HashSet::new();
        for (i, &m) in members.iter().enumerate() {
            if m.is_empty() {
                return Err(Error::EmptySet);
            }
            if !m.is_subset(full) {
                return Err(Error::PreconditionFailed(format!(
                    "member {i} uses indices outside the element table"
                )));
            }
            if !seen.insert(m) {
                return Err(Error::DuplicateSet { line: i + 1 });
            }
        }
        Ok(SetFamily { table, members })
    }

    /// Builds a family from label lists, interning labels in first-appearance order.
    pub fn from_label_sets<I, J, S>(sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = ElementTable::new();
        let mut members = Vec::new();
        for set in sets {
            let mut m = ElementSet::EMPTY;
            for label in set {
                m.insert(table.intern(label.as_ref())?);
            }
            members.push(m);
        }
        Self::from_parts(table, members)
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn members(&self) -> &[ElementSet] {
        &self.members
    }

    pub fn member(&self, index: usize) -> Result<ElementSet> {
        self.members
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.members.len(),
            })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, set: ElementSet) -> Option<usize> {
        self.members.iter().position(|&m| m == set)
    }

    pub fn contains_set(&self, set: ElementSet) -> bool {
        self.position(set).is_some()
    }

    /// ⋃F.
    pub fn union_all(&self) -> ElementSet {
        self.members.iter().fold(ElementSet::EMPTY, |a, &m| a | m)
    }

    /// ⋂F.
    pub fn intersection_all(&self) -> ElementSet {
        self.members.iter().fold(ElementSet::ALL, |a, &m| a & m)
    }

    /// Declared labels that belong to no member.
    pub fn extras(&self) -> ElementSet {
        self.table.full_set() - self.union_all()
    }

    fn check_selector(&self, sel: SubcollectionSelector) -> Result<()> {
        if sel.is_empty() {
            return Err(Error::EmptySelector);
        }
        if let Some(&bad) = sel.indices().iter().find(|&&i| i >= self.len()) {
            return Err(Error::SelectorOutOfRange {
                index: bad,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// ⋃Γ for the selected subcollection Γ.
    pub fn union_of(&self, sel: SubcollectionSelector) -> Result<ElementSet> {
        self.check_selector(sel)?;
        Ok(sel
            .indices()
            .into_iter()
            .fold(ElementSet::EMPTY, |a, i| a | self.members[i]))
    }

    /// ⋂Γ for the selected subcollection Γ.
    pub fn intersection_of(&self, sel: SubcollectionSelector) -> Result<ElementSet> {
        self.check_selector(sel)?;
        Ok(sel
            .indices()
            .into_iter()
            .fold(ElementSet::ALL, |a, i| a & self.members[i]))
    }

    /// The common member cardinality α(F).
    pub fn alpha_of(&self) -> Result<usize> {
        let first = self.members.first().ok_or(Error::EmptyFamily)?.len();
        match self.members.iter().position(|m| m.len() != first) {
            None => Ok(first),
            Some(j) => Err(Error::NotRelevant {
                first: 0,
                first_len: first,
                second: j,
                second_len: self.members[j].len(),
            }),
        }
    }

    pub fn is_relevant(&self) -> bool {
        self.alpha_of().is_ok()
    }

    /// Sorted labels of member `index`.
    pub fn member_labels(&self, index: usize) -> Vec<String> {
        self.table.sorted_labels(self.members[index])
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<ElementSet> {
        self.table.set_from_labels(labels)
    }

    pub fn label_sets(&self) -> Vec<BTreeSet<String>> {
        self.members
            .iter()
            .map(|&m| m.iter().map(|i| self.table.label(i).to_owned()).collect())
            .collect()
    }

    /// The same family with `labels` added to the universe.
    pub fn with_extra_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        let mut table = self.table.clone();
        for l in labels {
            table.intern(l.as_ref())?;
        }
        Ok(SetFamily {
            table,
            members: self.members.clone(),
        })
    }

    /// Appends `set` unless it is already a member; returns the family and its position.
    pub fn with_member(&self, set: ElementSet) -> Result<(Self, usize)> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        if !set.is_subset(self.table.full_set()) {
            return Err(Error::PreconditionFailed(
                "set uses indices outside the element table".into(),
            ));
        }
        if let Some(p) = self.position(set) {
            return Ok((self.clone(), p));
        }
        let mut members = self.members.clone();
        members.push(set);
        Ok((
            SetFamily {
                table: self.table.clone(),
                members,
            },
            self.members.len(),
        ))
    }

    /// The subfamily picked by `sel`, over the same table.
    pub fn subfamily(&self, sel: SubcollectionSelector) -> Result<Self> {
        self.check_selector(sel)?;
        Ok(SetFamily {
            table: self.table.clone(),
            members: sel.indices().into_iter().map(|i| self.members[i]).collect(),
        })
    }

    /// The family with every label renamed through `f`, keeping table order.
    pub fn relabel<F: FnMut(&str) -> String>(&self, mut f: F) -> Result<Self> {
        let table = ElementTable::from_labels(self.table.labels().iter().map(|l| f(l)))?;
        if table.len() != self.table.len() {
            return Err(Error::PreconditionFailed(
                "relabeling is not injective".into(),
            ));
        }
        Ok(SetFamily {
            table,
            members: self.members.clone(),
        })
    }

    /// For every element index, the positions of the members containing it.
    pub fn element_patterns(&self) -> Vec<MemberMask> {
        let mut out = vec![MemberMask::empty(self.len()); self.table.len()];
        for (j, &m) in self.members.iter().enumerate() {
            for x in m.iter() {
                out[x].insert(j);
            }
        }
        out
    }

    /// Order-insensitive comparison of members and universes, by label.
    pub fn same_members(&self, other: &SetFamily) -> bool {
        let a: BTreeSet<_> = self.label_sets().into_iter().collect();
        let b: BTreeSet<_> = other.label_sets().into_iter().collect();
        a == b && self.len() == other.len() && self.universe_labels() == other.universe_labels()
    }

    fn universe_labels(&self) -> BTreeSet<&str> {
        self.table.labels().iter().map(String::as_str).collect()
    }

    pub fn parse(text: &[u8]) -> Result<Self> {
        parse_family(text)
    }

    pub fn render(&self) -> String {
        render_family(self)
    }
}

/// Equality by label: same members in the same order over the same universe.
impl PartialEq for SetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self.label_sets() == other.label_sets()
            && self.universe_labels() == other.universe_labels()
    }
}

impl Eq for SetFamily {}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_family(self))
    }
}

fn utf8(text: &[u8]) -> Result<&str> {
    std::str::from_utf8(text).map_err(|e| {
        let ok = &text[..e.valid_up_to()];
        let line = ok.iter().filter(|&&b| b == b'\n').count() + 1;
        let line_start = ok.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
        let column = String::from_utf8_lossy(&ok[line_start..]).chars().count() + 1;
        Error::Parse {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })
}

/// Whitespace-separated tokens of a line with their 1-based character columns,
/// stopping at a `#` comment.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    };
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut col = 0;
    let mut start_col = 0;
    for (byte, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((start_col, &line[s..byte]));
            }
        } else if start.is_none() {
            start = Some(byte);
            start_col = col;
        }
    }
    if let Some(s) = start {
        out.push((start_col, &line[s..]));
    }
    out
}

/// Reads the family file format: one member per line, `#` comments, and an
/// optional leading `universe:` header declaring extra ground elements.
pub fn parse_family(text: &[u8]) -> Result<SetFamily> {
    let text = utf8(text)?;
    let mut table = ElementTable::new();
    let mut members = Vec::new();
    let mut seen: HashMap<ElementSet, usize> = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        let toks = tokens(line);
        let Some(&(first_col, first)) = toks.first() else {
            continue;
        };
        if let Some(rest) = first.strip_prefix("universe:") {
            if !members.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    column: first_col,
                    message: "universe header must precede member lines".into(),
                });
            }
            let declared = std::iter::once((first_col + 9, rest))
                .filter(|(_, t)| !t.is_empty())
                .chain(toks[1..].iter().copied());
            for (col, tok) in declared {
                check_label(tok, lineno, col)?;
                table.intern(tok)?;
            }
            continue;
        }
        let mut set = ElementSet::EMPTY;
        for &(col, tok) in &toks {
            check_label(tok, lineno, col)?;
            let i = table.intern(tok)?;
            if set.contains(i) {
                return Err(Error::Parse {
                    line: lineno,
                    column: col,
                    message: format!("label `{tok}` repeated within one set"),
                });
            }
            set.insert(i);
        }
        if seen.insert(set, lineno).is_some() {
            return Err(Error::DuplicateSet { line: lineno });
        }
        members.push(set);
    }
    if members.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(SetFamily { table, members })
}

fn check_label(tok: &str, line: usize, column: usize) -> Result<()> {
    if tok.ends_with(':') {
        return Err(Error::Parse {
            line,
            column,
            message: format!("unexpected directive `{tok}`"),
        });
    }
    Ok(())
}

/// Canonical text: an optional `universe:` header for extra labels, then one
/// line per member with labels in canonical order.
pub fn render_family(family: &SetFamily) -> String {
    let mut out = String::new();
    let extras = family.extras();
    if !extras.is_empty() {
        out.push_str("universe:");
        for l in family.table.sorted_labels(extras) {
            out.push(' ');
            out.push_str(&l);
        }
        out.push('\n');
    }
    for &m in &family.members {
        out.push_str(&family.table.sorted_labels(m).join(" "));
        out.push('\n');
    }
    out
}

/// Selectors over `family` in increasing mask order.
pub fn enumerate_subcollections(
    family: &SetFamily,
    require_nonempty: bool,
) -> Result<impl Iterator<Item = SubcollectionSelector>> {
    check_enumerable(family.len(), ENUMERATION_CAP)?;
    let end = 1u32 << family.len();
    let start = u32::from(require_nonempty);
    Ok((start..end).map(SubcollectionSelector))
}

pub(crate) fn check_enumerable(len: usize, limit: usize) -> Result<()> {
    if len > limit {
        return Err(Error::TooLarge {
            what: "family",
            size: len,
            limit,
        });
    }
    Ok(())
}

/// Precomputed unions and intersections for every subcollection of up to 32
/// sets, split into two half tables so lookups cost two array reads.
pub(crate) struct SubsetTables {
    low_bits: u32,
    union_lo: Vec<ElementSet>,
    inter_lo: Vec<ElementSet>,
    union_hi: Vec<ElementSet>,
    inter_hi: Vec<ElementSet>,
}

impl SubsetTables {
    pub fn new(sets: &[ElementSet]) -> Self {
        assert!(sets.len() <= 32);
        let (lo, hi) = sets.split_at(sets.len().div_ceil(2));
        let (union_lo, inter_lo) = Self::half(lo);
        let (union_hi, inter_hi) = Self::half(hi);
        SubsetTables {
            low_bits: lo.len() as u32,
            union_lo,
            inter_lo,
            union_hi,
            inter_hi,
        }
    }

    fn half(sets: &[ElementSet]) -> (Vec<ElementSet>, Vec<ElementSet>) {
        let size = 1usize << sets.len();
        let mut unions = vec![ElementSet::EMPTY; size];
        let mut inters = vec![ElementSet::ALL; size];
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            unions[mask] = unions[rest] | sets[low];
            inters[mask] = inters[rest] & sets[low];
        }
        (unions, inters)
    }

    #[inline]
    pub fn union(&self, mask: u32) -> ElementSet {
        let lo = (mask & ((1u32 << self.low_bits) - 1)) as usize;
        let hi = mask.checked_shr(self.low_bits).unwrap_or(0) as usize;
        self.union_lo[lo] | self.union_hi[hi]
    }

    /// Intersection; the empty selection yields [`ElementSet::ALL`].
    #[inline]
    pub fn inter(&self, mask: u32) -> ElementSet {
        let lo = (mask & ((1u32 << self.low_bits) - 1)) as usize;
        let hi = mask.checked_shr(self.low_bits).unwrap_or(0) as usize;
        self.inter_lo[lo] & self.inter_hi[hi]
    }
}
