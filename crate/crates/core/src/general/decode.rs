use std::collections::BTreeMap;

use super::layout::{Encoding, VariableLayout};
use super::spec::ProblemSpec;
use crate::error::{Error, Result};
use crate::graph::EdgeRef;
use crate::qubo::{Assignment, StepMode};
use crate::route::{RouteSolution, RouteStep, Validity};
use crate::scalar::Scalar;

/// Reads a route out of an assignment.
///
/// The validity flags are computed on the raw assignment so that they agree
/// with the hard penalty families: every flag holds exactly when every hard
/// family evaluates to zero.
pub fn decode_walk<S: Scalar>(
    spec: &ProblemSpec<S>,
    layout: &VariableLayout<S>,
    x: &[bool],
) -> Result<RouteSolution<S>> {
    if x.len() != layout.num_vars() {
        return Err(Error::LengthMismatch { expected: layout.num_vars(), got: x.len() });
    }
    let mut v = Validity::all_true();
    let mut walks = Vec::with_capacity(layout.postmen);
    let mut objective = S::zero();
    let mut turn_extra = S::zero();
    let mut visits: BTreeMap<EdgeRef, usize> = BTreeMap::new();

    for p in 0..layout.postmen {
        let sel: Vec<Vec<usize>> = layout.steps[p]
            .iter()
            .map(|step| step.iter().filter(|sv| x[sv.index]).map(|sv| sv.mv).collect())
            .collect();
        let resting: Vec<bool> = layout.rest[p].iter().map(|r| r.is_some_and(|i| x[i])).collect();

        let mut raw_weight = S::zero();
        for i in 0..layout.i_max {
            if sel[i].len() + usize::from(resting[i]) != 1 {
                v.one_edge_per_step = false;
            }
            for &m in &sel[i] {
                let mv = &layout.moves[m];
                raw_weight += spec.step_weight(p, &mv.arc, mv.mode);
                let counts = if spec.service_mode { mv.mode == StepMode::Service } else { !mv.is_terminal() };
                if counts {
                    *visits.entry(mv.arc.edge).or_default() += 1;
                }
            }
            if i + 1 < layout.i_max {
                if resting[i] && !sel[i + 1].is_empty() {
                    v.contiguous = false;
                }
                for &a in &sel[i] {
                    for &b in &sel[i + 1] {
                        if !layout.legal(a, b) {
                            v.contiguous = false;
                        }
                        let (ma, mb) = (&layout.moves[a].arc, &layout.moves[b].arc);
                        if ma.edge != EdgeRef::Terminal && mb.edge != EdgeRef::Terminal && ma.to == mb.from {
                            turn_extra += spec.turn_bonus(ma.from, ma.to, mb.to);
                        }
                    }
                }
            }
        }

        let mut walk = Vec::new();
        let mut prev: Option<usize> = None;
        for step in &sel {
            let Some(&m) = step.first() else {
                prev = None;
                continue;
            };
            let repeat = prev == Some(m) && layout.repeatable(m);
            prev = Some(m);
            let mv = &layout.moves[m];
            if repeat || mv.is_terminal() {
                continue;
            }
            objective += spec.step_weight(p, &mv.arc, mv.mode);
            walk.push(RouteStep { from: mv.arc.from, to: mv.arc.to, mode: mv.mode, edge: mv.arc.edge });
        }
        if !endpoints_ok(spec, &walk) {
            v.endpoints = false;
        }

        if let Some(c) = spec.capacity(p) {
            let slack = layout
                .capacity_slack
                .iter()
                .filter(|&&(q, _, i)| q == p && x[i])
                .fold(S::zero(), |acc, &(_, bit, _)| acc + S::from_f64_lossy((1u64 << bit) as f64));
            if raw_weight > c {
                v.capacity = false;
            }
            if !(c - raw_weight - slack).is_negligible() {
                v.slack_consistent = false;
            }
        }
        walks.push(walk);
    }

    for e in spec.required_edges() {
        let count = visits.get(&e).copied().unwrap_or(0);
        if spec.service_mode {
            if count != 1 {
                v.required_covered = false;
            }
        } else {
            let slack: u64 = layout
                .required_slack
                .iter()
                .filter(|&&(edge, _, _, i)| edge == e && x[i])
                .map(|&(_, _, bit, _)| 1u64 << bit)
                .sum();
            if count == 0 {
                v.required_covered = false;
            }
            if count as u64 != slack + 1 {
                v.slack_consistent = false;
            }
        }
    }

    if spec.service_mode {
        let serviced_at = |e: EdgeRef| -> Vec<usize> {
            (0..layout.i_max)
                .filter(|&i| {
                    layout.steps[0][i].iter().any(|sv| {
                        let mv = &layout.moves[sv.mv];
                        x[sv.index] && mv.mode == StepMode::Service && mv.arc.edge == e
                    })
                })
                .collect()
        };
        for (first, later) in spec.hierarchy_closure() {
            let (fa, la) = (serviced_at(first), serviced_at(later));
            if fa.iter().any(|&i0| la.iter().any(|&i1| i1 < i0)) {
                v.hierarchy = false;
            }
        }
    }

    if layout.encoding == Encoding::Rest && spec.forbid_edge_collisions {
        for a in 0..layout.postmen {
            for b in a + 1..layout.postmen {
                for i in 0..layout.i_max {
                    for sv in &layout.steps[a][i] {
                        if x[sv.index] && layout.step_var(b, i, sv.mv).is_some_and(|j| x[j]) {
                            v.collisions = false;
                        }
                    }
                }
            }
        }
    }

    Ok(RouteSolution { walks, objective_weight: objective, turn_extra, validity: v })
}

fn endpoints_ok<S: Scalar>(spec: &ProblemSpec<S>, walk: &[RouteStep]) -> bool {
    match (walk.first(), walk.last()) {
        (Some(first), Some(last)) => {
            spec.start.map_or(true, |s| first.from == s) && spec.stop.map_or(true, |t| last.to == t)
        }
        _ => match (spec.start, spec.stop) {
            (Some(s), Some(t)) => s == t,
            _ => true,
        },
    }
}

/// Checks a route directly against the problem definition, without any QUBO.
///
/// Returns the validity report, the summed step weight and the matched turn
/// bonuses. Walk length is checked against the step budget and reported
/// through `one_edge_per_step`.
pub fn validate_route<S: Scalar>(spec: &ProblemSpec<S>, walks: &[Vec<RouteStep>]) -> Result<(Validity, S, S)> {
    if walks.len() != spec.postmen {
        return Err(Error::InvalidSpec(format!("expected {} walks, got {}", spec.postmen, walks.len())));
    }
    let mut v = Validity::all_true();
    let mut weight = S::zero();
    let mut turns = S::zero();
    let mut visits: BTreeMap<EdgeRef, usize> = BTreeMap::new();
    let mut service_pos: BTreeMap<EdgeRef, Vec<usize>> = BTreeMap::new();

    for (p, walk) in walks.iter().enumerate() {
        if walk.len() > spec.i_max() {
            v.one_edge_per_step = false;
        }
        let mut own = S::zero();
        for (k, s) in walk.iter().enumerate() {
            let Some(arc) = spec.graph.arc(s.edge, s.from, s.to) else {
                v.contiguous = false;
                continue;
            };
            let mode_ok = match s.mode {
                StepMode::Plain => !spec.service_mode,
                StepMode::Traverse => spec.service_mode,
                StepMode::Service => spec.service_mode && spec.is_required(s.edge),
            };
            if !mode_ok {
                v.contiguous = false;
            }
            own += spec.step_weight(p, &arc, s.mode);
            if !spec.service_mode || s.mode == StepMode::Service {
                *visits.entry(s.edge).or_default() += 1;
            }
            if s.mode == StepMode::Service {
                service_pos.entry(s.edge).or_default().push(k);
            }
            if let Some(next) = walk.get(k + 1) {
                if next.from != s.to {
                    v.contiguous = false;
                } else {
                    turns += spec.turn_bonus(s.from, s.to, next.to);
                }
            }
        }
        if !endpoints_ok(spec, walk) {
            v.endpoints = false;
        }
        if spec.capacity(p).is_some_and(|c| own > c) {
            v.capacity = false;
        }
        weight += own;
    }

    for e in spec.required_edges() {
        let count = visits.get(&e).copied().unwrap_or(0);
        let ok = if spec.service_mode { count == 1 } else { count >= 1 };
        if !ok {
            v.required_covered = false;
        }
    }
    for (first, later) in spec.hierarchy_closure() {
        let empty = Vec::new();
        let fa = service_pos.get(&first).unwrap_or(&empty);
        let la = service_pos.get(&later).unwrap_or(&empty);
        if fa.iter().any(|&i0| la.iter().any(|&i1| i1 < i0)) {
            v.hierarchy = false;
        }
    }
    if spec.forbid_edge_collisions {
        for a in 0..walks.len() {
            for b in a + 1..walks.len() {
                let clash = walks[a]
                    .iter()
                    .zip(&walks[b])
                    .any(|(s, t)| s.edge == t.edge && s.from == t.from && s.to == t.to);
                if clash {
                    v.collisions = false;
                }
            }
        }
    }
    Ok((v, weight, turns))
}

/// Builds a route solution from walks using [`validate_route`].
pub fn route_from_walks<S: Scalar>(spec: &ProblemSpec<S>, walks: Vec<Vec<RouteStep>>) -> Result<RouteSolution<S>> {
    let (validity, objective_weight, turn_extra) = validate_route(spec, &walks)?;
    Ok(RouteSolution { walks, objective_weight, turn_extra, validity })
}

/// Writes walks into an assignment of `layout`, padding and filling slack
/// bits. Fails when a step has no variable (for example a pruned one) or the
/// walk cannot be padded in this encoding.
pub fn encode_walk<S: Scalar>(
    spec: &ProblemSpec<S>,
    layout: &VariableLayout<S>,
    walks: &[Vec<RouteStep>],
) -> Result<Assignment> {
    if walks.len() != layout.postmen {
        return Err(Error::InvalidSpec(format!("expected {} walks, got {}", layout.postmen, walks.len())));
    }
    let unrepresentable = |m: &str| Error::InvalidSpec(format!("walk not representable: {m}"));
    let find_move = |from: usize, to: usize, edge: EdgeRef, mode: StepMode| {
        layout
            .moves
            .iter()
            .position(|m| m.arc.from == from && m.arc.to == to && m.arc.edge == edge && m.mode == mode)
    };
    let mut x = vec![false; layout.num_vars()];
    let mut visits: BTreeMap<(EdgeRef, usize), usize> = BTreeMap::new();
    for (p, walk) in walks.iter().enumerate() {
        if walk.len() > layout.i_max {
            return Err(unrepresentable("longer than the step budget"));
        }
        let mut plan: Vec<Option<usize>> = Vec::with_capacity(layout.i_max);
        for s in walk {
            plan.push(Some(find_move(s.from, s.to, s.edge, s.mode).ok_or_else(|| unrepresentable("unknown step"))?));
        }
        while plan.len() < layout.i_max {
            let pad = match layout.encoding {
                Encoding::Rest => None,
                Encoding::Repetition => {
                    let last = plan.last().copied().flatten().ok_or_else(|| unrepresentable("empty walk"))?;
                    if !layout.repeatable(last) {
                        return Err(unrepresentable("last step cannot be repeated"));
                    }
                    Some(last)
                }
                Encoding::Terminal => {
                    let t = layout.terminal;
                    let from = match walk.last() {
                        Some(s) if plan.len() == walk.len() => s.to,
                        _ => t,
                    };
                    Some(find_move(from, t, EdgeRef::Terminal, StepMode::Plain).ok_or_else(|| unrepresentable("no terminal arc"))?)
                }
            };
            plan.push(pad);
        }
        let mut weight = S::zero();
        for (i, choice) in plan.iter().enumerate() {
            match choice {
                Some(m) => {
                    let idx = layout.step_var(p, i, *m).ok_or_else(|| unrepresentable("step variable pruned"))?;
                    x[idx] = true;
                    let mv = &layout.moves[*m];
                    weight += spec.step_weight(p, &mv.arc, mv.mode);
                    let counts = if spec.service_mode { mv.mode == StepMode::Service } else { !mv.is_terminal() };
                    if counts {
                        *visits.entry((mv.arc.edge, p)).or_default() += 1;
                    }
                }
                None => {
                    let r = layout.rest[p][i].ok_or_else(|| unrepresentable("no rest variable"))?;
                    x[r] = true;
                }
            }
        }
        if let Some(c) = spec.capacity(p) {
            let spare = (c - weight).to_f64_lossy().round();
            if spare < 0.0 {
                return Err(unrepresentable("capacity exceeded"));
            }
            let spare = spare as u64;
            for &(q, bit, idx) in &layout.capacity_slack {
                if q == p && spare >> bit & 1 == 1 {
                    x[idx] = true;
                }
            }
        }
    }
    if !spec.service_mode {
        for e in spec.required_edges() {
            let total: usize = (0..layout.postmen).map(|p| visits.get(&(e, p)).copied().unwrap_or(0)).sum();
            let mut remaining = total.saturating_sub(1) as u64;
            for p in 0..layout.postmen {
                let bits: Vec<(usize, usize)> = layout
                    .required_slack
                    .iter()
                    .filter(|&&(edge, q, _, _)| edge == e && q == p)
                    .map(|&(_, _, bit, idx)| (bit, idx))
                    .collect();
                let cap = bits.iter().map(|(b, _)| 1u64 << b).sum::<u64>();
                let take = remaining.min(cap);
                remaining -= take;
                for (bit, idx) in bits {
                    if take >> bit & 1 == 1 {
                        x[idx] = true;
                    }
                }
            }
        }
    }
    Ok(x)
}
