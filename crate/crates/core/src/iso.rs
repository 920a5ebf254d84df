//! Isomorphism of set collections.
//!
//! Two families are isomorphic when a bijection between their unions maps
//! members onto members. [`are_isomorphic`] searches for one by backtracking,
//! [`maximal_iso`] builds one directly for maximal hke families from the dual
//! pairing, and [`canonical_form`] gives a relabeling-invariant text for small
//! universes.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maximal::{as_dual_pairing, is_maximal};
use crate::sets::{ElementSet, SetFamily};

/// Universe limit for [`canonical_form`].
pub const CANONICAL_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyBijection {
    pub forward: BTreeMap<String, String>,
}

impl FamilyBijection {
    /// Whether this maps ⋃F1 bijectively onto ⋃F2 and F1 onto F2.
    pub fn validate(&self, f1: &SetFamily, f2: &SetFamily) -> bool {
        let (t1, t2) = (f1.table(), f2.table());
        let (u1, u2) = (f1.union_all(), f2.union_all());
        if f1.len() != f2.len() || self.forward.len() != u1.len() || u1.len() != u2.len() {
            return false;
        }
        let mut map = vec![usize::MAX; t1.len()];
        let mut image = ElementSet::EMPTY;
        for (from, to) in &self.forward {
            let (Some(x), Some(y)) = (t1.get(from), t2.get(to)) else {
                return false;
            };
            if !u1.contains(x) || !u2.contains(y) || image.contains(y) {
                return false;
            }
            map[x] = y;
            image.insert(y);
        }
        if image != u2 {
            return false;
        }
        // |F1| = |F2| and the map is injective on members, so images in F2 suffice
        f1.members()
            .iter()
            .all(|s| f2.contains_set(s.iter().map(|x| map[x]).collect()))
    }

    fn from_indices(
        f1: &SetFamily,
        f2: &SetFamily,
        pairs: impl Iterator<Item = (usize, usize)>,
    ) -> Self {
        FamilyBijection {
            forward: pairs
                .map(|(x, y)| {
                    (
                        f1.table().label(x).to_owned(),
                        f2.table().label(y).to_owned(),
                    )
                })
                .collect(),
        }
    }
}

/// Relabeling-invariant element signature: degree and the multiset of the
/// sizes of the members containing the element.
fn signatures(f: &SetFamily) -> Vec<(usize, Vec<usize>)> {
    let mut sig = vec![(0, Vec::new()); f.table().len()];
    for s in f.members() {
        for x in s.iter() {
            sig[x].0 += 1;
            sig[x].1.push(s.len());
        }
    }
    for s in &mut sig {
        s.1.sort_unstable();
    }
    sig
}

struct Search<'a> {
    xs: Vec<usize>,
    ys: Vec<usize>,
    m1: &'a [ElementSet],
    m2: &'a [ElementSet],
    compatible: Vec<Vec<usize>>,
    used: Vec<bool>,
    image: Vec<usize>,
}

impl Search<'_> {
    /// Compares the multisets of member projections onto the mapped prefix.
    fn consistent(&self, depth: usize) -> bool {
        let project = |members: &[ElementSet], elems: &mut dyn Iterator<Item = usize>| {
            let elems: Vec<usize> = elems.collect();
            let mut v: Vec<u128> = members
                .iter()
                .map(|s| {
                    elems
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| s.contains(e))
                        .fold(0u128, |acc, (j, _)| acc | 1 << j)
                })
                .collect();
            v.sort_unstable();
            v
        };
        let a = project(self.m1, &mut self.xs[..=depth].iter().copied());
        let b = project(
            self.m2,
            &mut self.image[..=depth].iter().map(|&j| self.ys[j]),
        );
        a == b
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.xs.len() {
            return true;
        }
        for ci in 0..self.compatible[depth].len() {
            let j = self.compatible[depth][ci];
            if self.used[j] {
                continue;
            }
            self.used[j] = true;
            self.image.push(j);
            if self.consistent(depth) && self.run(depth + 1) {
                return true;
            }
            self.image.pop();
            self.used[j] = false;
        }
        false
    }
}

/// The first bijection witnessing F1 ≅ F2 in canonical backtracking order.
pub fn are_isomorphic(f1: &SetFamily, f2: &SetFamily) -> Option<FamilyBijection> {
    let (u1, u2) = (f1.union_all(), f2.union_all());
    if f1.len() != f2.len() || u1.len() != u2.len() {
        return None;
    }
    let mut sizes1: Vec<usize> = f1.members().iter().map(|s| s.len()).collect();
    let mut sizes2: Vec<usize> = f2.members().iter().map(|s| s.len()).collect();
    sizes1.sort_unstable();
    sizes2.sort_unstable();
    if sizes1 != sizes2 {
        return None;
    }
    let xs = f1.table().sorted_indices(u1);
    let ys = f2.table().sorted_indices(u2);
    let (sig1, sig2) = (signatures(f1), signatures(f2));
    let compatible: Vec<Vec<usize>> = xs
        .iter()
        .map(|&x| (0..ys.len()).filter(|&j| sig2[ys[j]] == sig1[x]).collect())
        .collect();
    if compatible.iter().any(Vec::is_empty) {
        return None;
    }
    let mut search = Search {
        used: vec![false; ys.len()],
        image: Vec::with_capacity(xs.len()),
        xs,
        ys,
        m1: f1.members(),
        m2: f2.members(),
        compatible,
    };
    if !search.run(0) {
        return None;
    }
    let pairs: Vec<(usize, usize)> = search
        .xs
        .iter()
        .zip(&search.image)
        .map(|(&x, &j)| (x, search.ys[j]))
        .collect();
    Some(FamilyBijection::from_indices(f1, f2, pairs.into_iter()))
}

/// The bijection for two maximal hke families of equal α: the first member
/// of F1 onto the first member of F2 in canonical order, and each dual
/// partner onto the matching dual partner.
pub fn maximal_iso(f1: &SetFamily, f2: &SetFamily) -> Result<FamilyBijection> {
    for f in [f1, f2] {
        if !matches!(is_maximal(f), Ok(true)) {
            return Err(Error::NotMaximal);
        }
    }
    let (a1, a2) = (f1.alpha_of()?, f2.alpha_of()?);
    if a1 != a2 {
        return Err(Error::AlphaMismatch(a1, a2));
    }
    let partner = |f: &SetFamily| -> Result<HashMap<usize, usize>> {
        let t = f.table();
        let mut p = HashMap::new();
        for [x, y] in as_dual_pairing(f)?.classes {
            let (x, y) = (t.require(&x)?, t.require(&y)?);
            p.insert(x, y);
            p.insert(y, x);
        }
        Ok(p)
    };
    let (p1, p2) = (partner(f1)?, partner(f2)?);
    let base1 = f1.table().sorted_indices(f1.members()[0]);
    let base2 = f2.table().sorted_indices(f2.members()[0]);
    let pairs = base1
        .iter()
        .zip(&base2)
        .flat_map(|(&x, &y)| [(x, y), (p1[&x], p2[&y])]);
    let bij = FamilyBijection::from_indices(f1, f2, pairs);
    if !bij.validate(f1, f2) {
        return Err(Error::TheoremViolation(
            "dual-pairing map between maximal families is not an isomorphism".into(),
        ));
    }
    Ok(bij)
}

/// Dense ranks of `keys`. Callers lead each key with the old colour so that
/// cells only ever split.
fn rerank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn cell_count(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Equitable refinement of element colours against the member incidence.
fn refine(members: &[Vec<usize>], n: usize, mut colours: Vec<u32>) -> Vec<u32> {
    let mut cells = cell_count(&colours);
    loop {
        let member_col: Vec<Vec<u32>> = members
            .iter()
            .map(|m| {
                let mut v: Vec<u32> = m.iter().map(|&x| colours[x]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let member_rank = rerank(&member_col);
        let mut keys: Vec<(u32, Vec<u32>)> = colours.iter().map(|&c| (c, Vec::new())).collect();
        for (m, &r) in members.iter().zip(&member_rank) {
            for &x in m {
                keys[x].1.push(r);
            }
        }
        for k in &mut keys {
            k.1.sort_unstable();
        }
        debug_assert_eq!(keys.len(), n);
        colours = rerank(&keys);
        let next = cell_count(&colours);
        if next == cells {
            return colours;
        }
        cells = next;
    }
}

struct Canon<'a> {
    members: &'a [Vec<usize>],
    n: usize,
    /// Automorphisms found so far, as element permutations.
    gens: Vec<Vec<usize>>,
    prefix: Vec<usize>,
}

impl Canon<'_> {
    fn leaf_code(&self, colours: &[u32]) -> Vec<u16> {
        let mut code: Vec<u16> = self
            .members
            .iter()
            .map(|m| m.iter().fold(0u16, |acc, &x| acc | 1 << colours[x]))
            .collect();
        code.sort_unstable();
        code
    }

    /// Orbit representatives of the group generated by the automorphisms
    /// that fix the current prefix pointwise.
    fn orbits(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for g in &self.gens {
            if self.prefix.iter().all(|&p| g[p] == p) {
                for x in 0..self.n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..self.n).map(|x| find(&mut parent, x)).collect()
    }

    /// Minimum leaf code below a node and the leaf colouring attaining it.
    fn search(&mut self, colours: Vec<u32>) -> (Vec<u16>, Vec<u32>) {
        let n = self.n;
        let colours = refine(self.members, n, colours);
        let mut counts = vec![0usize; n];
        for &c in &colours {
            counts[c as usize] += 1;
        }
        // first non-singleton cell, by colour
        let Some(target) = (0..n).find(|&c| counts[c] > 1) else {
            return (self.leaf_code(&colours), colours);
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colours[v] as usize == target).collect();
        let mut best: Option<(Vec<u16>, Vec<u32>)> = None;
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() {
                let roots = self.orbits();
                if explored.iter().any(|&w| roots[w] == roots[v]) {
                    continue;
                }
            }
            explored.push(v);
            let keys: Vec<(u32, bool)> = colours
                .iter()
                .enumerate()
                .map(|(u, &c)| (c, u != v))
                .collect();
            self.prefix.push(v);
            let (code, leaf) = self.search(rerank(&keys));
            self.prefix.pop();
            match &best {
                Some((b, _)) if code > *b => {}
                Some((b, b_leaf)) if code == *b => {
                    // equal codes: leaf_b ↦ leaf is an automorphism
                    let mut at_rank = vec![0usize; n];
                    for (y, &r) in leaf.iter().enumerate() {
                        at_rank[r as usize] = y;
                    }
                    let g: Vec<usize> = (0..n).map(|x| at_rank[b_leaf[x] as usize]).collect();
                    if g.iter().enumerate().any(|(x, &y)| x != y) {
                        self.gens.push(g);
                    }
                }
                _ => best = Some((code, leaf)),
            }
        }
        best.expect("a non-singleton cell has at least one child")
    }
}

/// A text form shared exactly by isomorphic families: the minimum, over
/// individualize-and-refine leaves, of the sorted member bitmasks, rendered
/// with labels `1..=k`. Elements outside every member are ignored.
pub fn canonical_form(family: &SetFamily) -> Result<String> {
    let union = family.union_all();
    let n = union.len();
    if n > CANONICAL_CAP {
        return Err(Error::TooLarge {
            what: "universe",
            size: n,
            limit: CANONICAL_CAP,
        });
    }
    let dense: HashMap<usize, usize> = union.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let members: Vec<Vec<usize>> = family
        .members()
        .iter()
        .map(|s| s.iter().map(|x| dense[&x]).collect())
        .collect();
    let mut canon = Canon {
        members: &members,
        n,
        gens: Vec::new(),
        prefix: Vec::new(),
    };
    let (code, _) = canon.search(vec![0; n]);
    let mut out = String::new();
    for mask in code {
        let labels: Vec<String> = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| (i + 1).to_string())
            .collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximal::{complete_to_maximal, typical_collection};
    use crate::sets::parse_family;

    fn fam(text: &str) -> SetFamily {
        parse_family(text.as_bytes()).unwrap()
    }

    #[test]
    fn identity_first() {
        let f = fam("1 3 5\n1 4 6\n2 3 5\n2 4 5\n2 4 6\n");
        let b = are_isomorphic(&f, &f).unwrap();
        assert!(b.forward.iter().all(|(k, v)| k == v));
        assert!(b.validate(&f, &f));
    }

    #[test]
    fn typical_relabeled() {
        let t = typical_collection(2).unwrap();
        let g = fam("a b\na d\nb c\nc d\n");
        let b = are_isomorphic(&t, &g).unwrap();
        assert!(b.validate(&t, &g));
        let s5 = fam("1 3 5\n1 4 6\n2 3 5\n2 4 5\n2 4 6\n");
        assert!(are_isomorphic(&t, &s5).is_none());
    }

    #[test]
    fn non_isomorphic_same_shape() {
        let a = fam("1 2\n3 4\n");
        let b = fam("1 2\n2 3\n");
        assert!(are_isomorphic(&a, &b).is_none());
        assert_ne!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn maximal_iso_examples() {
        let t = typical_collection(3).unwrap();
        assert!(maximal_iso(&t, &t).unwrap().validate(&t, &t));
        let c = complete_to_maximal(&fam("1 2\n")).unwrap().family;
        let t2 = typical_collection(2).unwrap();
        assert!(maximal_iso(&c, &t2).unwrap().validate(&c, &t2));
        assert_eq!(
            maximal_iso(&t2, &t).unwrap_err(),
            Error::AlphaMismatch(2, 3)
        );
        let s5 = fam("1 3 5\n1 4 6\n2 3 5\n2 4 5\n2 4 6\n");
        assert_eq!(maximal_iso(&s5, &t).unwrap_err(), Error::NotMaximal);
    }

    #[test]
    fn canonical_examples() {
        let t = typical_collection(2).unwrap();
        let mirror = t
            .relabel(|l| (5 - l.parse::<i32>().unwrap()).to_string())
            .unwrap();
        assert_eq!(
            canonical_form(&t).unwrap(),
            canonical_form(&mirror).unwrap()
        );
        let t6 = typical_collection(6).unwrap();
        assert_eq!(canonical_form(&t6).unwrap().lines().count(), 64);
        let big: String = (0..13).map(|i| format!("{i}\n")).collect();
        assert!(matches!(
            canonical_form(&fam(&big)),
            Err(Error::TooLarge { limit: 12, .. })
        ));
    }

    #[test]
    fn bijection_json() {
        let f = fam("1 2\n");
        let b = are_isomorphic(&f, &fam("x y\n")).unwrap();
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, r#"{"forward":{"1":"x","2":"y"}}"#);
        assert_eq!(serde_json::from_str::<FamilyBijection>(&json).unwrap(), b);
    }
}
