use std::collections::HashMap;

use super::decode::route_from_walks;
use super::spec::ProblemSpec;
use crate::error::{Error, Result};
use crate::graph::{Arc, EdgeRef};
use crate::qubo::StepMode;
use crate::route::{RouteSolution, RouteStep};
use crate::scalar::Scalar;

/// Default node budget of [`exact_walk_oracle`].
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

struct Search<'a, S> {
    spec: &'a ProblemSpec<S>,
    moves: Vec<(Arc<S>, StepMode, S, Option<usize>)>,
    out: Vec<Vec<usize>>,
    /// Lower bound on the cost of finishing required edge `k`.
    min_cost: Vec<S>,
    /// Bits that must be serviced before required edge `k`.
    pred: Vec<u64>,
    full: u64,
    i_max: usize,
    use_turns: bool,
    budget: u64,
    nodes: u64,
    path: Vec<usize>,
    best: Option<(S, Vec<usize>)>,
    seen: HashMap<(usize, u64, usize), Vec<(usize, S)>>,
}

impl<S: Scalar> Search<'_, S> {
    fn bound(&self, mask: u64) -> S {
        (0..self.min_cost.len())
            .filter(|k| mask >> k & 1 == 0)
            .fold(S::zero(), |acc, k| acc + self.min_cost[k])
    }

    fn dominated(&mut self, key: (usize, u64, usize), depth: usize, cost: S) -> bool {
        let entry = self.seen.entry(key).or_default();
        if entry.iter().any(|&(d, c)| d <= depth && c <= cost) {
            return true;
        }
        entry.retain(|&(d, c)| !(depth <= d && cost <= c));
        entry.push((depth, cost));
        false
    }

    fn dfs(&mut self, vertex: usize, mask: u64, last: usize, cost: S) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudgetExceeded(self.budget));
        }
        if let Some((best, _)) = &self.best {
            if cost + self.bound(mask) >= *best {
                return Ok(());
            }
        }
        let depth = self.path.len();
        let key = (vertex, mask, if self.use_turns { last } else { usize::MAX });
        if depth > 0 && self.dominated(key, depth, cost) {
            return Ok(());
        }
        if depth > 0 && mask == self.full && self.spec.stop.map_or(true, |t| t == vertex) {
            self.best = Some((cost, self.path.clone()));
            return Ok(());
        }
        if depth == self.i_max {
            return Ok(());
        }
        for k in 0..self.out[vertex].len() {
            let m = self.out[vertex][k];
            let (arc, mode, w, bit) = self.moves[m];
            let mut next_mask = mask;
            if let Some(b) = bit {
                if mode == StepMode::Service {
                    if mask >> b & 1 == 1 || mask & self.pred[b] != self.pred[b] {
                        continue;
                    }
                }
                next_mask |= 1 << b;
            }
            let mut step_cost = cost + w;
            if self.use_turns && last != usize::MAX {
                let prev = self.moves[last].0;
                step_cost += self.spec.turn_bonus(prev.from, prev.to, arc.to);
            }
            self.path.push(m);
            let r = self.dfs(arc.to, next_mask, m, step_cost);
            self.path.pop();
            r?;
        }
        Ok(())
    }

}

/// Cheapest route of at most `i_max` steps for a single postman, found by
/// depth-first branch and bound.
///
/// Handles endpoints, turn bonuses, service weights and hierarchies. The
/// search explores start vertices and arcs in index order and keeps the
/// first optimum found.
pub fn exact_walk_oracle<S: Scalar>(spec: &ProblemSpec<S>, node_budget: u64) -> Result<RouteSolution<S>> {
    spec.validate()?;
    if spec.uses_rest_encoding() {
        return Err(Error::UnsupportedCombination("the walk oracle handles a single postman".into()));
    }
    let required = spec.required_edges();
    if required.len() > 63 {
        return Err(Error::TooLarge { n: required.len(), max: 63 });
    }
    if required.is_empty() && spec.start.zip(spec.stop).map_or(true, |(s, t)| s == t) {
        return route_from_walks(spec, vec![Vec::new()]);
    }

    let n = spec.graph.num_vertices();
    let mut moves = Vec::new();
    for arc in spec.graph.arcs() {
        let bit = required.iter().position(|e| *e == arc.edge);
        if spec.service_mode {
            if bit.is_some() {
                moves.push((arc, StepMode::Service, spec.step_weight(0, &arc, StepMode::Service), bit));
            }
            moves.push((arc, StepMode::Traverse, spec.step_weight(0, &arc, StepMode::Traverse), None));
        } else {
            moves.push((arc, StepMode::Plain, spec.step_weight(0, &arc, StepMode::Plain), bit));
        }
    }
    let mut out = vec![Vec::new(); n];
    for (m, mv) in moves.iter().enumerate() {
        out[mv.0.from].push(m);
    }
    let min_cost = (0..required.len())
        .map(|k| {
            moves
                .iter()
                .filter(|mv| mv.3 == Some(k))
                .map(|mv| mv.2)
                .fold(None, |acc: Option<S>, w| Some(acc.map_or(w, |a| if w < a { w } else { a })))
                .unwrap_or_else(S::zero)
        })
        .collect();

    let bit_of = |e: &EdgeRef| required.iter().position(|r| r == e).expect("hierarchy edges are required");
    let mut pred = vec![0u64; required.len()];
    for (a, b) in spec.hierarchy_closure() {
        pred[bit_of(&b)] |= 1 << bit_of(&a);
    }
    let mut search = Search {
        spec,
        moves,
        out,
        min_cost,
        pred,
        full: if required.is_empty() { 0 } else { u64::MAX >> (64 - required.len()) },
        i_max: spec.i_max(),
        use_turns: !spec.turns.is_empty(),
        budget: node_budget,
        nodes: 0,
        path: Vec::new(),
        best: None,
        seen: HashMap::new(),
    };
    let starts: Vec<usize> = match spec.start {
        Some(s) => vec![s],
        None => (0..n).collect(),
    };
    for s in starts {
        search.dfs(s, 0, usize::MAX, S::zero())?;
    }
    let (_, path) = search.best.ok_or(Error::NoFeasibleWalk)?;
    let walk = path
        .iter()
        .map(|&m| {
            let (arc, mode, _, _) = search.moves[m];
            RouteStep { from: arc.from, to: arc.to, mode, edge: arc.edge }
        })
        .collect();
    route_from_walks(spec, vec![walk])
}
