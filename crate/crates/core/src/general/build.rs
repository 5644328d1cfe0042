use super::layout::{enumerate_variables, Encoding, VariableLayout};
use super::spec::ProblemSpec;
use crate::error::Result;
use crate::graph::EdgeRef;
use crate::qubo::{CompiledQubo, ConstraintFamily, PenaltyConfig, Qubo, StepMode};
use crate::scalar::Scalar;

/// Chooses an encoding and compiles the instance.
pub fn build_general_qubo<S: Scalar>(
    spec: &ProblemSpec<S>,
    penalties: &PenaltyConfig<S>,
) -> Result<(CompiledQubo<S>, VariableLayout<S>)> {
    let layout = enumerate_variables(spec)?;
    let compiled = build_from_layout(spec, &layout, penalties)?;
    Ok((compiled, layout))
}

fn pow2<S: Scalar>(bit: usize) -> S {
    S::from_f64_lossy((1u64 << bit) as f64)
}

/// Compiles the objective and every applicable constraint family over a
/// prepared layout.
pub fn build_from_layout<S: Scalar>(
    spec: &ProblemSpec<S>,
    layout: &VariableLayout<S>,
    penalties: &PenaltyConfig<S>,
) -> Result<CompiledQubo<S>> {
    penalties.validate()?;
    let n = layout.num_vars();
    let one = S::one();
    let mut constraints = Vec::new();

    let mut objective = Qubo::new(n);
    for p in 0..layout.postmen {
        for i in 0..layout.i_max {
            for v in &layout.steps[p][i] {
                let mv = &layout.moves[v.mv];
                let w = spec.step_weight(p, &mv.arc, mv.mode);
                objective.add_linear(v.index, w);
                if i > 0 && layout.repeatable(v.mv) {
                    if let Some(prev) = layout.step_var(p, i - 1, v.mv) {
                        objective.add_quadratic(prev, v.index, -w);
                    }
                }
            }
        }
    }

    let mut one_edge = Qubo::new(n);
    for p in 0..layout.postmen {
        for i in 0..layout.i_max {
            let mut terms: Vec<(usize, S)> = layout.steps[p][i].iter().map(|v| (v.index, -one)).collect();
            if let Some(r) = layout.rest[p][i] {
                terms.push((r, -one));
            }
            one_edge.add_square_penalty(&terms, one, one);
        }
    }
    constraints.push((ConstraintFamily::OneEdge, one_edge));

    let mut adjacency = Qubo::new(n);
    for p in 0..layout.postmen {
        for i in 0..layout.i_max.saturating_sub(1) {
            for u in &layout.steps[p][i] {
                for v in &layout.steps[p][i + 1] {
                    if !layout.legal(u.mv, v.mv) {
                        adjacency.add_quadratic(u.index, v.index, one);
                    }
                }
            }
            if let Some(r) = layout.rest[p][i] {
                for v in &layout.steps[p][i + 1] {
                    adjacency.add_quadratic(r, v.index, one);
                }
            }
        }
    }
    constraints.push((ConstraintFamily::Adjacency, adjacency));

    let mut required = Qubo::new(n);
    for e in spec.required_edges() {
        let mut terms = Vec::new();
        for p in 0..layout.postmen {
            for step in &layout.steps[p] {
                for v in step {
                    let mv = &layout.moves[v.mv];
                    let counts = if spec.service_mode { mv.mode == StepMode::Service } else { true };
                    if mv.arc.edge == e && counts {
                        terms.push((v.index, one));
                    }
                }
            }
        }
        for &(edge, _, bit, index) in &layout.required_slack {
            if edge == e {
                terms.push((index, -pow2::<S>(bit)));
            }
        }
        required.add_square_penalty(&terms, -one, one);
    }
    constraints.push((ConstraintFamily::Required, required));

    if !spec.turns.is_empty() {
        let mut turn = Qubo::new(n);
        for p in 0..layout.postmen {
            for i in 0..layout.i_max.saturating_sub(1) {
                for u in &layout.steps[p][i] {
                    let a = &layout.moves[u.mv].arc;
                    if a.edge == EdgeRef::Terminal {
                        continue;
                    }
                    for v in &layout.steps[p][i + 1] {
                        let b = &layout.moves[v.mv].arc;
                        if b.edge == EdgeRef::Terminal || a.to != b.from {
                            continue;
                        }
                        let bonus = spec.turn_bonus(a.from, a.to, b.to);
                        if !bonus.is_negligible() {
                            turn.add_quadratic(u.index, v.index, bonus);
                        }
                    }
                }
            }
        }
        constraints.push((ConstraintFamily::Turn, turn));
    }

    if spec.service_mode && !spec.hierarchy.is_empty() {
        let mut hierarchy = Qubo::new(n);
        let service_at = |e: EdgeRef, i: usize| {
            layout.steps[0][i]
                .iter()
                .filter(move |v| layout.moves[v.mv].mode == StepMode::Service && layout.moves[v.mv].arc.edge == e)
                .map(|v| v.index)
        };
        for (first, later) in spec.hierarchy_closure() {
            for i0 in 0..layout.i_max {
                for i1 in 0..i0 {
                    for a in service_at(first, i0) {
                        for b in service_at(later, i1) {
                            hierarchy.add_quadratic(a, b, one);
                        }
                    }
                }
            }
        }
        constraints.push((ConstraintFamily::Hierarchy, hierarchy));
    }

    if layout.encoding == Encoding::Rest && spec.forbid_edge_collisions && layout.postmen > 1 {
        let mut collision = Qubo::new(n);
        for a in 0..layout.postmen {
            for b in a + 1..layout.postmen {
                for i in 0..layout.i_max {
                    for u in &layout.steps[a][i] {
                        if let Some(v) = layout.step_var(b, i, u.mv) {
                            collision.add_quadratic(u.index, v, one);
                        }
                    }
                }
            }
        }
        constraints.push((ConstraintFamily::Collision, collision));
    }

    if spec.capacities.iter().any(Option::is_some) {
        let mut capacity = Qubo::new(n);
        for p in 0..layout.postmen {
            let Some(c) = spec.capacity(p) else { continue };
            let mut terms = Vec::new();
            for step in &layout.steps[p] {
                for v in step {
                    let mv = &layout.moves[v.mv];
                    terms.push((v.index, spec.step_weight(p, &mv.arc, mv.mode)));
                }
            }
            for &(q, bit, index) in &layout.capacity_slack {
                if q == p {
                    terms.push((index, pow2::<S>(bit)));
                }
            }
            capacity.add_square_penalty(&terms, -c, one);
        }
        constraints.push((ConstraintFamily::Capacity, capacity));
    }

    Ok(CompiledQubo::assemble(layout.registry.clone(), objective, constraints, penalties.clone()))
}
