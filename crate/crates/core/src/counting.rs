//! a(α, n) and c(n): exact search, closed forms, and the core padding and
//! stripping constructions relating them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maximal::typical_collection;
use crate::sets::{ElementSet, ElementTable, SetFamily};
use crate::verify::{can_add_unchecked, is_hke};

/// Largest n accepted by [`a_search`].
pub const SEARCH_MAX_N: usize = 8;
/// Largest target size 2^(n−α) accepted by [`a_search`].
pub const SEARCH_MAX_SIZE: u128 = 16;
/// Largest n accepted by [`c_search`].
pub const C_SEARCH_MAX_N: usize = 7;

/// Explains the integral-value convention used by [`c_of`].
pub const C_NOTE: &str = "c(n) = 2^floor(n/2): the maximum is attained at alpha = ceil(n/2), where n - alpha = floor(n/2)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub alpha: usize,
    pub n: usize,
    pub max_size: usize,
    pub witness: SetFamily,
    pub formula_value: u128,
}

/// JSON shape of a [`CountResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub alpha: usize,
    pub n: usize,
    pub max_size: usize,
    pub formula_value: u128,
    pub witness: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CountResult {
    pub fn report(&self) -> CountReport {
        let t = self.witness.table();
        CountReport {
            alpha: self.alpha,
            n: self.n,
            max_size: self.max_size,
            formula_value: self.formula_value,
            witness: self
                .witness
                .members()
                .iter()
                .map(|&s| t.sorted_labels(s))
                .collect(),
            note: None,
        }
    }
}

fn check_range(alpha: usize, n: usize) -> Result<()> {
    if alpha == 0 || n < alpha || n > 2 * alpha {
        return Err(Error::Range(format!(
            "need 1 <= alpha <= n <= 2 alpha, got alpha = {alpha}, n = {n}"
        )));
    }
    Ok(())
}

/// a(α, n) = 2^(n−α).
pub fn a_formula(alpha: usize, n: usize) -> Result<u128> {
    check_range(alpha, n)?;
    1u128
        .checked_shl((n - alpha) as u32)
        .filter(|_| n - alpha < 128)
        .ok_or_else(|| Error::Range(format!("2^{} does not fit in 128 bits", n - alpha)))
}

/// All α-subsets of {0..n−1} in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<ElementSet> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().copied().collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

struct ASearch {
    n: usize,
    cap: usize,
    candidates: Vec<ElementSet>,
    best: Option<SetFamily>,
}

impl ASearch {
    fn best_len(&self) -> usize {
        self.best.as_ref().map_or(0, SetFamily::len)
    }

    fn run(&mut self, family: SetFamily, next: usize) {
        if family.union_all().len() == self.n && family.len() > self.best_len() {
            self.best = Some(family.clone());
        }
        if self.best_len() == self.cap {
            return;
        }
        for j in next..self.candidates.len() {
            let remaining = self.candidates.len() - j;
            if (family.len() + remaining).min(self.cap) <= self.best_len() {
                return;
            }
            let c = self.candidates[j];
            if can_add_unchecked(&family, 0, c).unwrap_or(false) {
                let grown = family
                    .with_member(c)
                    .expect("candidate is new and non-empty")
                    .0;
                self.run(grown, j + 1);
                if self.best_len() == self.cap {
                    return;
                }
            }
        }
    }
}

/// Exact a(α, n) by branch and bound over α-subsets of [n], first set fixed to [α].
pub fn a_search(alpha: usize, n: usize) -> Result<CountResult> {
    let formula_value = a_formula(alpha, n)?;
    if n > SEARCH_MAX_N || formula_value > SEARCH_MAX_SIZE {
        return Err(Error::BudgetExceeded(format!(
            "a_search supports n <= {SEARCH_MAX_N} and 2^(n-alpha) <= {SEARCH_MAX_SIZE}"
        )));
    }
    let table = ElementTable::from_labels((1..=n).map(|i| i.to_string()))?;
    let candidates = k_subsets(n, alpha);
    let start = SetFamily::from_parts(table, vec![candidates[0]])?;
    let mut search = ASearch {
        n,
        cap: 1usize << alpha.min(20),
        candidates,
        best: None,
    };
    search.run(start, 1);
    let witness = search.best.ok_or_else(|| {
        Error::TheoremViolation(format!(
            "no hke family with alpha {alpha} covers {n} elements"
        ))
    })?;
    Ok(CountResult {
        alpha,
        n,
        max_size: witness.len(),
        witness,
        formula_value,
    })
}

/// {A ∪ C : A ∈ F} for d fresh labels C.
pub fn pad_with_core(family: &SetFamily, d: usize) -> Result<SetFamily> {
    if d == 0 {
        return Err(Error::PreconditionFailed(
            "core padding needs d >= 1".into(),
        ));
    }
    if !is_hke(family) {
        return Err(Error::NotHke);
    }
    let fresh = family.table().fresh_integer_labels(d);
    let grown = family.with_extra_labels(&fresh)?;
    let c = grown.table().set_from_labels(&fresh)?;
    SetFamily::from_parts(
        grown.table().clone(),
        grown.members().iter().map(|&a| a | c).collect(),
    )
}

/// {A − C : A ∈ F} for the d lowest elements C of ⋂F, dropped from the universe.
pub fn strip_core(family: &SetFamily, d: usize) -> Result<SetFamily> {
    if !is_hke(family) {
        return Err(Error::NotHke);
    }
    let core = family.intersection_all();
    if d > core.len() {
        return Err(Error::CoreTooSmall {
            requested: d,
            available: core.len(),
        });
    }
    let c = family.table().lowest(core, d);
    let old = family.table();
    let keep: Vec<usize> = (0..old.len()).filter(|&i| !c.contains(i)).collect();
    let table = ElementTable::from_labels(keep.iter().map(|&i| old.label(i)))?;
    let mut new_index = vec![usize::MAX; old.len()];
    for (j, &i) in keep.iter().enumerate() {
        new_index[i] = j;
    }
    let members = family
        .members()
        .iter()
        .map(|&a| (a - c).iter().map(|i| new_index[i]).collect())
        .collect();
    SetFamily::from_parts(table, members)
}

/// The constructive witness for a(α, n): typical(n−α) padded with 2α−n
/// core elements (the single set [α] when n = α).
pub fn padded_typical(alpha: usize, n: usize) -> Result<SetFamily> {
    check_range(alpha, n)?;
    if n == alpha {
        return SetFamily::from_label_sets([(1..=alpha).map(|i| i.to_string())]);
    }
    let base = typical_collection(n - alpha)?;
    if 2 * alpha == n {
        Ok(base)
    } else {
        pad_with_core(&base, 2 * alpha - n)
    }
}

/// c(n) = 2^⌊n/2⌋.
pub fn c_of(n: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::Range("c(n) needs n >= 1".into()));
    }
    if n / 2 >= 128 {
        return Err(Error::Range(format!(
            "2^{} does not fit in 128 bits",
            n / 2
        )));
    }
    Ok(1u128 << (n / 2))
}

/// max over α of a_search(α, n), checked against [`c_of`].
pub fn c_search(n: usize) -> Result<CountResult> {
    let expected = c_of(n)?;
    if n > C_SEARCH_MAX_N {
        return Err(Error::BudgetExceeded(format!(
            "c_search supports n <= {C_SEARCH_MAX_N}"
        )));
    }
    let mut best: Option<CountResult> = None;
    for alpha in n.div_ceil(2)..=n {
        let r = a_search(alpha, n)?;
        if best.as_ref().is_none_or(|b| r.max_size > b.max_size) {
            best = Some(r);
        }
    }
    let mut best = best.expect("the alpha range is non-empty for n >= 1");
    if best.max_size as u128 != expected {
        return Err(Error::TheoremViolation(format!(
            "c({n}) search found {} but the closed form gives {expected}",
            best.max_size
        )));
    }
    best.formula_value = expected;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic;
    use crate::sets::parse_family;
    use crate::verify::check_hke_definition;

    #[test]
    fn formula_examples() {
        assert_eq!(a_formula(2, 4).unwrap(), 4);
        assert_eq!(a_formula(5, 5).unwrap(), 1);
        assert_eq!(a_formula(3, 5).unwrap(), 4);
        assert!(matches!(a_formula(2, 5), Err(Error::Range(_))));
        assert!(matches!(a_formula(3, 2), Err(Error::Range(_))));
        assert!(matches!(a_formula(0, 0), Err(Error::Range(_))));
    }

    #[test]
    fn subsets_in_lex_order() {
        let s = k_subsets(4, 2);
        let v: Vec<Vec<usize>> = s.iter().map(|x| x.iter().collect()).collect();
        assert_eq!(
            v,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(k_subsets(5, 5).len(), 1);
    }

    #[test]
    fn search_examples() {
        let r = a_search(2, 4).unwrap();
        assert_eq!(r.max_size, 4);
        assert!(are_isomorphic(&r.witness, &typical_collection(2).unwrap()).is_some());
        assert_eq!(a_search(2, 3).unwrap().max_size, 2);
        assert_eq!(a_search(3, 4).unwrap().max_size, 2);
        assert!(matches!(a_search(5, 10), Err(Error::BudgetExceeded(_))));
        assert!(matches!(a_search(6, 9), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn pad_and_strip() {
        let t = typical_collection(2).unwrap();
        let p = pad_with_core(&t, 1).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.alpha_of().unwrap(), 3);
        assert_eq!(p.union_all().len(), 5);
        assert!(check_hke_definition(&p).unwrap().holds);
        let back = strip_core(&p, 1).unwrap();
        assert!(are_isomorphic(&back, &t).is_some());
        assert!(back.same_members(&t));
        assert!(matches!(
            pad_with_core(&t, 0),
            Err(Error::PreconditionFailed(_))
        ));
        assert_eq!(
            strip_core(&t, 1).unwrap_err(),
            Error::CoreTooSmall {
                requested: 1,
                available: 0
            }
        );
        let f = parse_family(b"1 2 3 4\n1 2 3 5\n").unwrap();
        let s = strip_core(&f, 2).unwrap();
        assert_eq!(s.render(), "3 4\n3 5\n");
        let all = strip_core(&f, 3).unwrap();
        assert!(all.intersection_all().is_empty());
        assert_eq!(all.union_all().len(), 2 * all.alpha_of().unwrap());
    }

    #[test]
    fn padded_witness_values() {
        for n in 1usize..=8 {
            for alpha in n.div_ceil(2)..=n {
                let w = padded_typical(alpha, n).unwrap();
                assert_eq!(w.alpha_of().unwrap(), alpha);
                assert_eq!(w.union_all().len(), n);
                assert_eq!(w.len() as u128, a_formula(alpha, n).unwrap());
                assert!(is_hke(&w));
            }
        }
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_of(4).unwrap(), 4);
        assert_eq!(c_of(5).unwrap(), 4);
        assert_eq!(c_of(1).unwrap(), 1);
        assert!(matches!(c_of(0), Err(Error::Range(_))));
        let r = c_search(5).unwrap();
        assert_eq!((r.alpha, r.max_size), (3, 4));
        assert_eq!(c_search(1).unwrap().max_size, 1);
        assert!(matches!(c_search(8), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn report_json() {
        let r = a_search(1, 2).unwrap();
        let json = serde_json::to_string(&r.report()).unwrap();
        assert_eq!(
            json,
            r#"{"alpha":1,"n":2,"max_size":2,"formula_value":2,"witness":[["1"],["2"]]}"#
        );
        assert_eq!(
            serde_json::from_str::<CountReport>(&json).unwrap(),
            r.report()
        );
    }
}
