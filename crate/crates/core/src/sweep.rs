//! Cross-validation sweep of the graph theorems over exhaustive and random graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{
    corona, graph_of, independence_number, is_ke, is_ke_via_theorem, is_well_covered,
    max_independent_sets, omega_is_hke, wellcovered_roundtrip, Graph,
};

/// Largest vertex count enumerated exhaustively.
pub const EXHAUSTIVE_CAP: usize = 5;

/// Every labeled graph on vertices `1..=n`, in increasing edge-mask order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges((1..=n).map(|i| i.to_string()), &edges).expect("edges are distinct pairs")
    })
}

/// Erdős–Rényi graph on `1..=n` with edge probability 1/2.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    Graph::from_edges((1..=n).map(|i| i.to_string()), &edges).expect("edges are distinct pairs")
}

/// `count` seeded random graphs with vertex counts drawn from `min_n..=max_n`.
pub fn random_graphs(seed: u64, count: usize, min_n: usize, max_n: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(min_n..=max_n);
            random_graph(&mut rng, n)
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub holds: bool,
    pub seed: u64,
    pub exhaustive_graphs: usize,
    pub sampled_graphs: usize,
    pub ke_graphs: usize,
    pub roundtrips_checked: usize,
    pub failures: Vec<String>,
}

/// Checks one graph: both KE tests agree, KE implies Ω(G) hke,
/// α(Ω(G)) ≤ α(G(Ω(G))), and the well-covered round trip where it applies.
/// Returns whether the graph was KE and whether a round trip was checked.
pub fn check_graph(g: &Graph, failures: &mut Vec<String>) -> Result<(bool, bool)> {
    let mut fail =
        |what: &str| failures.push(format!("{what}: {}", g.render().replace('\n', "; ")));
    let ke = is_ke(g)?;
    if ke != is_ke_via_theorem(g)?.holds {
        fail("KE tests disagree");
    }
    if ke && !omega_is_hke(g)? {
        fail("KE graph with Ω(G) not hke");
    }
    let omega = max_independent_sets(g)?;
    if omega.alpha_of()? > independence_number(&graph_of(&omega)?)? {
        fail("α(Ω(G)) exceeds α(G(Ω(G)))");
    }
    let mut roundtrip = false;
    if is_well_covered(g)? && corona(g)? == g.vertices() {
        roundtrip = true;
        if !wellcovered_roundtrip(g)? {
            fail("well-covered round trip failed");
        }
    }
    Ok((ke, roundtrip))
}

/// Exhaustive over 1..=`exhaustive_max` vertices (capped at 5), plus
/// `samples` random graphs on `sample_min..=sample_max` vertices.
pub fn run_sweep(
    exhaustive_max: usize,
    samples: usize,
    sample_min: usize,
    sample_max: usize,
    seed: u64,
) -> Result<SweepReport> {
    let mut report = SweepReport {
        seed,
        ..SweepReport::default()
    };
    let tally = |g: &Graph, report: &mut SweepReport| -> Result<()> {
        let (ke, rt) = check_graph(g, &mut report.failures)?;
        report.ke_graphs += usize::from(ke);
        report.roundtrips_checked += usize::from(rt);
        Ok(())
    };
    for n in 1..=exhaustive_max.min(EXHAUSTIVE_CAP) {
        for g in all_graphs(n) {
            tally(&g, &mut report)?;
            report.exhaustive_graphs += 1;
        }
    }
    if samples > 0 {
        for g in random_graphs(
            seed,
            samples,
            sample_min.max(1),
            sample_max.max(sample_min.max(1)),
        ) {
            tally(&g, &mut report)?;
            report.sampled_graphs += 1;
        }
    }
    report.holds = report.failures.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        assert_eq!(all_graphs(1).count(), 1);
        assert_eq!(all_graphs(3).count(), 8);
        assert_eq!(all_graphs(4).count(), 64);
    }

    #[test]
    fn seeded_samples_are_reproducible() {
        let a = random_graphs(7, 20, 4, 8);
        let b = random_graphs(7, 20, 4, 8);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| (4..=8).contains(&g.len())));
        assert_ne!(a, random_graphs(8, 20, 4, 8));
    }

    #[test]
    fn small_sweep_passes() {
        let r = run_sweep(4, 20, 4, 6, 0).unwrap();
        assert!(r.holds, "{:?}", r.failures);
        assert_eq!(r.exhaustive_graphs, 1 + 2 + 8 + 64);
        assert_eq!(r.sampled_graphs, 20);
    }
}
