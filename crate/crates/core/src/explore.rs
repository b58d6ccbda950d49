//! Single mutations of presented algebras and breadth-first exploration of
//! the mutation class.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::endo::{endo_algebra, present, PresentedAlgebra};
use crate::equivalence::{invariants, iso_search, EquivalenceVerdict, IsoBudget};
use crate::error::Result;
use crate::field::Field;
use crate::mutation::iterate;
use crate::presentation::AlgebraPresentation;

/// `μ_i^k(Λ)` as a presented algebra; arrow names are reused from `Λ` where
/// the quivers agree. `k = 0` re-presents `Λ` itself.
pub fn mutate<F: Field>(
    alg: &Algebra<F>,
    vertex: usize,
    steps: usize,
) -> Result<PresentedAlgebra<F>> {
    alg.check_vertex(vertex)?;
    let state = iterate(alg, vertex, steps)?;
    let endo = endo_algebra(alg.blocks(), state.summands(alg)?)?;
    present(endo.blocks(), Some(alg.quiver()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreOptions {
    pub depth: usize,
    /// 0-based vertices to mutate at; `None` means all
    pub vertices: Option<Vec<usize>>,
    pub node_cap: usize,
    pub budget: IsoBudget,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            depth: 1,
            vertices: None,
            node_cap: 64,
            budget: IsoBudget::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MutationNode<F: Field> {
    /// vertices mutated at, in order, 0-based
    pub word: Vec<usize>,
    pub algebra: Algebra<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationEdge {
    pub from: usize,
    pub to: usize,
    pub vertex: usize,
}

#[derive(Clone, Debug)]
pub struct MutationGraph<F: Field> {
    pub nodes: Vec<MutationNode<F>>,
    pub edges: Vec<MutationEdge>,
    pub truncated: bool,
    /// node pairs that iso search could neither identify nor separate
    pub unresolved: Vec<(usize, usize)>,
}

fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        return "Λ".into();
    }
    let mut s = String::new();
    for v in word.iter().rev() {
        write!(s, "μ{} ", v + 1).expect("string write");
    }
    s.push('Λ');
    s
}

impl<F: Field> MutationGraph<F> {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph mutation_class {\n");
        for (k, node) in self.nodes.iter().enumerate() {
            let label = format!("{}\\ndim {}", word_label(&node.word), node.algebra.dim());
            writeln!(out, "  n{k} [label=\"{label}\"];").expect("string write");
        }
        for e in &self.edges {
            writeln!(
                out,
                "  n{} -> n{} [label=\"{}\"];",
                e.from,
                e.to,
                e.vertex + 1
            )
            .expect("string write");
        }
        if self.truncated {
            out.push_str("  truncated [shape=plaintext, label=\"truncated at node cap\"];\n");
        }
        out.push_str("}\n");
        out
    }

    pub fn node_table(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(k, node)| {
                let inv = invariants(&node.algebra);
                json!({
                    "node": k,
                    "word": node.word.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    "label": word_label(&node.word),
                    "dim": inv.dim,
                    "loewy_length": inv.loewy_length,
                    "cartan": node.algebra.cartan(),
                    "center_dim": inv.center_dim,
                    "arrows": node.algebra.quiver().arrows().len(),
                    "relations": node.algebra.presentation().relations.len(),
                })
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| json!({ "from": e.from, "to": e.to, "vertex": e.vertex + 1 }))
            .collect();
        json!({
            "nodes": nodes,
            "edges": edges,
            "truncated": self.truncated,
            "unresolved": self.unresolved,
        })
    }
}

/// Breadth-first search over mutation words up to `depth`. A new algebra is
/// merged with the first earlier node that iso search proves isomorphic to it.
/// Mutations within one layer run in parallel; merging is sequential in a
/// fixed order, so the graph does not depend on the thread count.
pub fn explore_mutation_class<F: Field>(
    alg: &Algebra<F>,
    opts: &ExploreOptions,
) -> Result<MutationGraph<F>> {
    let vertices: Vec<usize> = match &opts.vertices {
        Some(vs) => {
            for &v in vs {
                alg.check_vertex(v)?;
            }
            vs.clone()
        }
        None => (0..alg.vertex_count()).collect(),
    };
    let mut graph = MutationGraph {
        nodes: vec![MutationNode {
            word: Vec::new(),
            algebra: alg.clone(),
        }],
        edges: Vec::new(),
        truncated: false,
        unresolved: Vec::new(),
    };
    let mut frontier = vec![0usize];
    for _ in 0..opts.depth {
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&n| vertices.iter().map(move |&v| (n, v)))
            .collect();
        let mutated: Vec<Result<Algebra<F>>> = jobs
            .par_iter()
            .map(|&(n, v)| mutate(&graph.nodes[n].algebra, v, 1).map(|p| p.algebra))
            .collect();
        let mut next = Vec::new();
        for (&(n, v), m) in jobs.iter().zip(mutated) {
            let m = m?;
            let verdicts: Vec<EquivalenceVerdict<F::Elem>> = graph
                .nodes
                .par_iter()
                .map(|node| iso_search(&m, &node.algebra, &opts.budget))
                .collect();
            if let Some(to) = verdicts.iter().position(|v| v.is_isomorphic()) {
                graph.edges.push(MutationEdge {
                    from: n,
                    to,
                    vertex: v,
                });
                continue;
            }
            if graph.nodes.len() >= opts.node_cap {
                graph.truncated = true;
                continue;
            }
            let id = graph.nodes.len();
            for (k, verdict) in verdicts.iter().enumerate() {
                if matches!(verdict, EquivalenceVerdict::Inconclusive(_)) {
                    graph.unresolved.push((k, id));
                }
            }
            let mut word = graph.nodes[n].word.clone();
            word.push(v);
            graph.nodes.push(MutationNode { word, algebra: m });
            graph.edges.push(MutationEdge {
                from: n,
                to: id,
                vertex: v,
            });
            next.push(id);
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(graph)
}

/// Graphviz rendering of a quiver with its arrow names.
pub fn quiver_dot<F: Field>(pres: &AlgebraPresentation<F>) -> String {
    let q = &pres.quiver;
    let mut out = String::from("digraph quiver {\n");
    for v in 0..q.vertex_count() {
        writeln!(out, "  v{} [label=\"{}\"];", v + 1, v + 1).expect("string write");
    }
    for a in q.arrows() {
        writeln!(
            out,
            "  v{} -> v{} [label=\"{}\"];",
            a.source + 1,
            a.target + 1,
            a.id.replace('"', "\\\"")
        )
        .expect("string write");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::symmetric_nakayama;
    use crate::field::Fp;

    fn nakayama(n: usize, l: usize) -> Algebra<Fp> {
        let f = Fp::new(5).unwrap();
        Algebra::build(&symmetric_nakayama(&f, n, l).unwrap(), 12).unwrap()
    }

    #[test]
    fn depth_zero_is_one_node() {
        let g = explore_mutation_class(
            &nakayama(2, 3),
            &ExploreOptions {
                depth: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
        assert!(g
            .to_dot()
            .starts_with("digraph mutation_class {\n  n0 [label=\"Λ\\ndim 6\"];"));
    }

    #[test]
    fn nakayama_class_collapses() {
        let g = explore_mutation_class(
            &nakayama(2, 3),
            &ExploreOptions {
                depth: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert_eq!(g.edges.len(), 2);
        assert!(g.edges.iter().all(|e| e.to == 0));
    }

    #[test]
    fn node_cap_truncates() {
        let alg = nakayama(3, 4);
        let full = explore_mutation_class(
            &alg,
            &ExploreOptions {
                depth: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let capped = explore_mutation_class(
            &alg,
            &ExploreOptions {
                depth: 1,
                node_cap: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(capped.nodes.len(), 1);
        assert_eq!(capped.truncated, full.nodes.len() > 1);
        assert!(!capped.truncated || capped.to_dot().contains("truncated"));
    }

    #[test]
    fn mutate_zero_steps_reproduces_the_algebra() {
        let alg = nakayama(2, 3);
        let p = mutate(&alg, 0, 0).unwrap();
        assert!(iso_search(&p.algebra, &alg, &IsoBudget::default()).is_isomorphic());
        assert_eq!(p.algebra.quiver(), alg.quiver());
    }

    #[test]
    fn quiver_dot_lists_arrows() {
        let alg = nakayama(2, 3);
        let dot = quiver_dot(alg.presentation());
        assert!(dot.contains("v1 -> v2"));
        assert!(dot.contains("v2 -> v1"));
    }
}
