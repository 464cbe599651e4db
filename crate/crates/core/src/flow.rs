//! Exact maximum flow (Edmonds-Karp) over rational capacities.

use std::collections::VecDeque;

use crate::numeric::Rational;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    /// `None` is an unbounded capacity.
    cap: Option<Rational>,
    flow: Rational,
}

#[derive(Debug, Clone)]
pub(crate) struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    pub fn new(nodes: usize) -> Network {
        Network {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds `u -> v` and its reverse residual edge; returns the edge id.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: Option<Rational>) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge {
            to: v,
            cap,
            flow: Rational::zero(),
        });
        self.edges.push(Edge {
            to: u,
            cap: Some(Rational::zero()),
            flow: Rational::zero(),
        });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }

    #[cfg(test)]
    pub fn flow(&self, id: usize) -> &Rational {
        &self.edges[id].flow
    }

    /// Residual capacity; `None` when unbounded.
    fn residual(&self, id: usize) -> Option<Rational> {
        let e = &self.edges[id];
        e.cap.as_ref().map(|c| c - &e.flow)
    }

    fn has_residual(&self, id: usize) -> bool {
        self.residual(id).map_or(true, |r| r.is_positive())
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> Rational {
        let mut total = Rational::zero();
        loop {
            let mut via: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &id in &self.adj[u] {
                    let v = self.edges[id].to;
                    if !seen[v] && self.has_residual(id) {
                        seen[v] = true;
                        via[v] = Some(id);
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut path = Vec::new();
            let mut v = t;
            while let Some(id) = via[v] {
                path.push(id);
                v = self.edges[id ^ 1].to;
            }
            let push = path
                .iter()
                .filter_map(|&id| self.residual(id))
                .min()
                .expect("every augmenting path crosses a bounded edge");
            for &id in &path {
                self.edges[id].flow += &push;
                self.edges[id ^ 1].flow -= &push;
            }
            total += push;
        }
    }

    /// Nodes reachable from `s` in the residual graph.
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &id in &self.adj[u] {
                let v = self.edges[id].to;
                if !seen[v] && self.has_residual(id) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Nodes from which `t` is reachable in the residual graph.
    pub fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            // Incoming residual edges of v are the reverses of its adjacency.
            for &id in &self.adj[v] {
                let back = id ^ 1;
                let u = self.edges[id].to;
                if !seen[u] && self.has_residual(back) {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}
