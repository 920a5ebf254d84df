//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or exceeds its time bound.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hke::counting::{a_search, c_search, padded_typical};
use hke::graph::{
    bipartite_check_and_theorem, corona, graph_of, independence_number, max_independent_sets,
    typical_ke_graph,
};
use hke::iso::{are_isomorphic, maximal_iso};
use hke::maximal::{complete_to_maximal, extend, restriction_map, typical_collection};
use hke::sweep::{all_graphs, run_sweep};
use hke::verify::{
    check_hke_definition, check_hke_pairwise, check_hke_partition, check_ke, Witness,
};
use hke::{ElementSet, ElementTable, Graph, SetFamily, SubcollectionSelector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn fam(text: &str) -> SetFamily {
    SetFamily::parse(text.as_bytes()).unwrap()
}

fn label_set(f: &SetFamily) -> BTreeSet<BTreeSet<String>> {
    f.label_sets().into_iter().collect()
}

fn k_subsets(n: usize, k: usize) -> Vec<ElementSet> {
    (0u128..1 << n)
        .map(ElementSet::from_bits)
        .filter(|s| s.len() == k)
        .collect()
}

fn universe(n: usize) -> ElementTable {
    ElementTable::from_labels((1..=n).map(|i| i.to_string())).unwrap()
}

fn worked_example() -> Check {
    let f = fam("1 3 5\n1 4 6\n2 3 5\n2 4 5\n2 4 6\n");
    let v = check_hke_definition(&f).map_err(|e| e.to_string())?;
    ensure(v.holds && v.alpha == Some(3), || format!("verdict {v:?}"))?;
    let g = graph_of(&f).map_err(|e| e.to_string())?;
    let edges: BTreeSet<[String; 2]> = g.edge_labels().into_iter().collect();
    let expected: BTreeSet<[String; 2]> = [("1", "2"), ("3", "4"), ("3", "6"), ("5", "6")]
        .iter()
        .map(|(u, v)| [u.to_string(), v.to_string()])
        .collect();
    ensure(edges == expected, || format!("edges {edges:?}"))?;
    let omega = max_independent_sets(&g).map_err(|e| e.to_string())?;
    let mut want = label_set(&f);
    want.insert(["1", "4", "5"].iter().map(|s| s.to_string()).collect());
    ensure(label_set(&omega) == want && omega.len() == 6, || {
        format!("Ω(G) = {:?}", omega.label_sets())
    })
}

fn non_hke_example() -> Check {
    let f = fam("1 2\n1 3\n2 3\n1 4\n");
    let v = check_hke_definition(&f).map_err(|e| e.to_string())?;
    let gamma = SubcollectionSelector::from_indices([0, 1, 2]);
    ensure(!v.holds, || "reported hke".into())?;
    ensure(v.witness == Some(Witness::Subcollection { gamma }), || {
        format!("witness {:?}", v.witness)
    })?;
    let ke = check_ke(&f).map_err(|e| e.to_string())?;
    ensure(ke.holds, || "KE equality fails on the full family".into())
}

fn checker_agreement() -> Check {
    let mut families = 0usize;
    for n in 1..=5 {
        for k in 1..=n {
            let sets = k_subsets(n, k);
            let m = sets.len();
            for mask in 1u32..1 << m {
                if mask.count_ones() > 4 {
                    continue;
                }
                let members: Vec<ElementSet> = (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| sets[i])
                    .collect();
                let f = SetFamily::from_parts(universe(n), members).unwrap();
                let d = check_hke_definition(&f).map_err(|e| e.to_string())?.holds;
                let p = check_hke_pairwise(&f).map_err(|e| e.to_string())?.holds;
                let q = check_hke_partition(&f).map_err(|e| e.to_string())?.holds;
                ensure(d == p && p == q, || {
                    format!(
                        "{}: definition {d}, pairwise {p}, partition {q}",
                        f.render()
                    )
                })?;
                families += 1;
            }
        }
    }
    println!("    {families} families checked");
    Ok(())
}

fn completion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for alpha in 1..=3 {
        let typical = typical_collection(alpha).unwrap();
        for trial in 0..20 {
            let mut names: Vec<String> =
                (0..2 * alpha).map(|i| format!("v{}", 10 + i * 3)).collect();
            names.shuffle(&mut rng);
            let relabeled = typical
                .relabel(|l| names[l.parse::<usize>().unwrap() - 1].clone())
                .unwrap();
            let mask = loop {
                let m = rng.gen_range(0u32..1 << typical.len());
                if m != 0 {
                    break m;
                }
            };
            let sub = relabeled
                .subfamily(SubcollectionSelector::from_mask(mask))
                .unwrap();
            let c = complete_to_maximal(&sub).map_err(|e| format!("α={alpha} #{trial}: {e}"))?;
            let f = &c.family;
            let ctx = || format!("α={alpha} #{trial}: {}", sub.render().replace('\n', "; "));
            ensure(f.len() == 1 << alpha, || {
                format!("{} has {} members", ctx(), f.len())
            })?;
            ensure(f.intersection_all().is_empty(), || {
                format!("{}: ⋂ ≠ ∅", ctx())
            })?;
            for a in 0..f.len() {
                let r = restriction_map(f, a).map_err(|e| e.to_string())?;
                ensure(r.injective && r.surjective, || {
                    format!("{}: f_A not bijective for A = {a}", ctx())
                })?;
            }
            ensure(
                check_hke_definition(f).map_err(|e| e.to_string())?.holds,
                || format!("{}: completion not hke", ctx()),
            )?;
            let b = maximal_iso(f, &typical).map_err(|e| format!("{}: {e}", ctx()))?;
            ensure(b.validate(f, &typical), || {
                format!("{}: invalid isomorphism", ctx())
            })?;
            ensure(are_isomorphic(f, &typical).is_some(), || {
                format!("{}: not isomorphic", ctx())
            })?;
        }
    }
    Ok(())
}

fn extension_oracle() -> Check {
    let mut cases = 0usize;
    for n in 1..=5 {
        for k in 1..=n {
            let sets = k_subsets(n, k);
            let m = sets.len();
            for mask in 1u32..1 << m {
                let members: Vec<ElementSet> = (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| sets[i])
                    .collect();
                let f = SetFamily::from_parts(universe(n), members).unwrap();
                if !check_hke_definition(&f).map_err(|e| e.to_string())?.holds {
                    continue;
                }
                for (base, &a) in f.members().iter().enumerate() {
                    for e in a.subsets() {
                        let ctx = || {
                            format!(
                                "{} A = #{base}, E = {:?}",
                                f.render().replace('\n', "; "),
                                f.table().sorted_labels(e)
                            )
                        };
                        let ext = extend(&f, base, e).map_err(|err| format!("{}: {err}", ctx()))?;
                        ensure(a & ext.d == e, || format!("{}: A∩D ≠ E", ctx()))?;
                        ensure(
                            (ext.d - f.union_all()).len() == (f.intersection_all() - e).len(),
                            || format!("{}: |D−⋃F| ≠ |⋂F−E|", ctx()),
                        )?;
                        let (grown, _) = ext.extended().map_err(|e| e.to_string())?;
                        ensure(
                            check_hke_definition(&grown)
                                .map_err(|e| e.to_string())?
                                .holds,
                            || format!("{}: F∪{{D}} not hke", ctx()),
                        )?;
                        cases += 1;
                    }
                }
            }
        }
    }
    println!("    {cases} (F, A, E) cases checked");
    Ok(())
}

fn counting() -> Check {
    for n in 1..=6usize {
        for alpha in n.div_ceil(2)..=n {
            let expected = 1usize << (n - alpha);
            let r = a_search(alpha, n).map_err(|e| format!("a({alpha},{n}): {e}"))?;
            ensure(r.max_size == expected, || {
                format!("a({alpha},{n}) searched {} expected {expected}", r.max_size)
            })?;
            let w = &r.witness;
            ensure(
                w.len() == expected
                    && w.union_all().len() <= n
                    && w.alpha_of().ok() == Some(alpha)
                    && check_hke_definition(w).map_err(|e| e.to_string())?.holds,
                || format!("a({alpha},{n}) witness invalid: {}", w.render()),
            )?;
            let p = padded_typical(alpha, n).map_err(|e| e.to_string())?;
            ensure(
                p.len() == expected
                    && p.union_all().len() <= n
                    && p.alpha_of().ok() == Some(alpha)
                    && check_hke_definition(&p).map_err(|e| e.to_string())?.holds,
                || format!("padded typical({alpha},{n}) invalid: {}", p.render()),
            )?;
        }
        let c = c_search(n).map_err(|e| format!("c({n}): {e}"))?;
        ensure(c.max_size == 1 << (n / 2), || {
            format!("c({n}) searched {}", c.max_size)
        })?;
    }
    Ok(())
}

fn graph_sweep() -> Check {
    let r = run_sweep(5, 500, 6, 8, 0).map_err(|e| e.to_string())?;
    println!(
        "    {} exhaustive + {} sampled graphs, {} KE, {} round trips",
        r.exhaustive_graphs, r.sampled_graphs, r.ke_graphs, r.roundtrips_checked
    );
    ensure(r.exhaustive_graphs == 1 + 2 + 8 + 64 + 1024, || {
        format!("{} exhaustive graphs", r.exhaustive_graphs)
    })?;
    ensure(r.sampled_graphs >= 500, || {
        format!("{} sampled graphs", r.sampled_graphs)
    })?;
    ensure(r.holds, || r.failures.join("\n"))
}

fn bipartite() -> Check {
    for alpha in 1..=4 {
        let omega = max_independent_sets(&typical_ke_graph(alpha).unwrap()).unwrap();
        let typical = typical_collection(alpha).unwrap();
        ensure(label_set(&omega) == label_set(&typical), || {
            format!("Ω(typical KE graph {alpha}) ≠ typical({alpha})")
        })?;
    }
    let mut checked = 0usize;
    for n in 1..=6 {
        for g in all_graphs(n) {
            if corona(&g).unwrap() != g.vertices() {
                continue;
            }
            let matching = perfect_matching_graph(&g);
            let got =
                bipartite_check_and_theorem(&g).map_err(|e| format!("{}: {e}", g.render()))?;
            ensure(got == matching, || format!("{}: got {got}", g.render()))?;
            checked += 1;
        }
    }
    println!("    {checked} graphs with V = corona checked");
    Ok(())
}

fn perfect_matching_graph(g: &Graph) -> bool {
    g.vertices().iter().all(|v| g.degree(v) == 1)
}

fn alpha_gaps() -> Check {
    for (text, alpha, graph_alpha) in [
        ("1 2\n1 3\n2 3\n", 2, 3),
        ("0 1 2 3 4 8\n0 3 4 5 6 7\n0 1 2 5 6 9\n", 6, 7),
    ] {
        let f = fam(text);
        let a = f.alpha_of().map_err(|e| e.to_string())?;
        let b = independence_number(&graph_of(&f).unwrap()).unwrap();
        ensure(a == alpha && b == graph_alpha, || {
            format!("α(F) = {a}, α(G(F)) = {b}")
        })?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 9] = [
        ("1 worked example", Duration::from_secs(1), worked_example),
        ("2 non-hke example", Duration::from_secs(1), non_hke_example),
        (
            "3 three-way checker agreement",
            Duration::from_secs(300),
            checker_agreement,
        ),
        (
            "4 completion to maximal",
            Duration::from_secs(60),
            completion,
        ),
        (
            "5 extension oracle",
            Duration::from_secs(300),
            extension_oracle,
        ),
        ("6 counting", Duration::from_secs(600), counting),
        (
            "7 graph theorem sweep",
            Duration::from_secs(600),
            graph_sweep,
        ),
        (
            "8 perfect matching graphs",
            Duration::from_secs(120),
            bipartite,
        ),
        ("9 independence gaps", Duration::from_secs(1), alpha_gaps),
    ];
    let mut failed = 0;
    for (name, bound, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(()) if elapsed <= bound => Ok(()),
            Ok(()) => Err(format!("took {elapsed:?}, bound {bound:?}")),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({elapsed:.2?})"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
