use std::fs;
use std::path::{Path, PathBuf};

use postman_core::format::{parse_graph_json, parse_spec_json, VertexLabels};
use postman_core::qubo::ConstraintFamily;
use postman_core::solvers::{SaParams, Sampler, TabuParams};
use postman_core::{Graph, PenaltyConfig, ProblemSpec};
use serde::Deserialize;

use crate::{Failure, PipelineKind, RunArgs};

pub const DEFAULT_MAX_RETUNES: usize = 5;

/// Run options read from `--config`. Command-line flags override them.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub pipeline: Option<PipelineKind>,
    pub solver: Option<String>,
    pub seed: Option<u64>,
    pub i_max: Option<usize>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub dot: bool,
    #[serde(default)]
    pub force_qubo: bool,
    pub max_retunes: Option<usize>,
    #[serde(default)]
    pub timing: bool,
    pub reads: Option<usize>,
    pub sweeps: Option<usize>,
    pub restarts: Option<usize>,
    #[serde(default)]
    pub penalties: PenaltyOverrides,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyOverrides {
    pub one_edge: Option<f64>,
    pub adjacency: Option<f64>,
    pub required: Option<f64>,
    pub turn: Option<f64>,
    pub hierarchy: Option<f64>,
    pub collision: Option<f64>,
    pub capacity: Option<f64>,
    pub pairing: Option<f64>,
}

impl PenaltyOverrides {
    fn get(&self, f: ConstraintFamily) -> Option<f64> {
        match f {
            ConstraintFamily::OneEdge => self.one_edge,
            ConstraintFamily::Adjacency => self.adjacency,
            ConstraintFamily::Required => self.required,
            ConstraintFamily::Turn => self.turn,
            ConstraintFamily::Hierarchy => self.hierarchy,
            ConstraintFamily::Collision => self.collision,
            ConstraintFamily::Capacity => self.capacity,
            ConstraintFamily::Pairing => self.pairing,
        }
    }
}

/// Fully resolved options of one command invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub pipeline: Option<PipelineKind>,
    pub sampler: Sampler,
    pub sampler_params: (Option<usize>, Option<usize>, Option<usize>),
    pub seed: u64,
    pub i_max: Option<usize>,
    pub out: Option<PathBuf>,
    pub dot: bool,
    pub force_qubo: bool,
    pub max_retunes: usize,
    pub timing: bool,
    pub penalties: Vec<(ConstraintFamily, f64)>,
}

impl Settings {
    pub fn resolve(args: &RunArgs) -> Result<Self, Failure> {
        let cfg = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| input_err(path, e))?;
                serde_json::from_str::<RunConfig>(&text)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        let solver = args.solver.clone().or(cfg.solver).unwrap_or_else(|| "sa+greedy".into());
        let sampler_params = (args.reads.or(cfg.reads), args.sweeps.or(cfg.sweeps), args.restarts.or(cfg.restarts));
        let sampler = sampler_with(&solver, sampler_params)?;
        let flags = [
            (ConstraintFamily::OneEdge, args.p_one_edge),
            (ConstraintFamily::Adjacency, args.p_adjacency),
            (ConstraintFamily::Required, args.p_required),
            (ConstraintFamily::Turn, args.p_turn),
            (ConstraintFamily::Hierarchy, args.p_hierarchy),
            (ConstraintFamily::Collision, args.p_collision),
            (ConstraintFamily::Capacity, args.p_capacity),
            (ConstraintFamily::Pairing, args.p_pairing),
        ];
        let penalties = flags
            .into_iter()
            .filter_map(|(f, v)| v.or(cfg.penalties.get(f)).map(|v| (f, v)))
            .collect();
        Ok(Self {
            pipeline: args.pipeline.or(cfg.pipeline),
            sampler,
            sampler_params,
            seed: args.seed.or(cfg.seed).unwrap_or(0),
            i_max: args.i_max.or(cfg.i_max),
            out: args.out.clone().or(cfg.out),
            dot: args.dot || cfg.dot,
            force_qubo: args.force_qubo || cfg.force_qubo,
            max_retunes: args.max_retunes.or(cfg.max_retunes).unwrap_or(DEFAULT_MAX_RETUNES),
            timing: args.timing || cfg.timing,
            penalties,
        })
    }

    pub fn penalties_over(&self, mut base: PenaltyConfig) -> PenaltyConfig {
        for &(f, v) in &self.penalties {
            base.set(f, v);
        }
        base
    }
}

/// Named sampler with optional `(reads, sweeps, restarts)` overrides.
pub fn sampler_with(
    name: &str,
    (reads, sweeps, restarts): (Option<usize>, Option<usize>, Option<usize>),
) -> Result<Sampler, Failure> {
    let mut sampler = Sampler::from_name(name).ok_or_else(|| {
        Failure::Input(format!(
            "unknown solver `{name}` (expected brute, greedy, sa, tabu, sa+greedy or tabu+greedy)"
        ))
    })?;
    let sa = |p: &mut SaParams| {
        if let Some(r) = reads {
            p.reads = r;
        }
        if let Some(s) = sweeps {
            p.sweeps = s;
        }
    };
    let tabu = |p: &mut TabuParams| {
        if let Some(r) = restarts {
            p.restarts = r;
        }
    };
    match &mut sampler {
        Sampler::Brute => {}
        Sampler::Greedy { starts } => {
            if let Some(r) = reads {
                *starts = r;
            }
        }
        Sampler::Sa(p) | Sampler::SaGreedy(p) => sa(p),
        Sampler::Tabu(p) | Sampler::TabuGreedy(p) => tabu(p),
    }
    Ok(sampler)
}

pub fn input_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// A loaded instance in the shape its pipeline needs.
#[derive(Debug, Clone)]
pub enum Instance {
    Pairing { graph: Graph, labels: VertexLabels },
    General { spec: ProblemSpec, labels: VertexLabels },
}

impl Instance {
    pub fn labels(&self) -> &VertexLabels {
        match self {
            Instance::Pairing { labels, .. } | Instance::General { labels, .. } => labels,
        }
    }

    pub fn graph(&self) -> &Graph {
        match self {
            Instance::Pairing { graph, .. } => graph,
            Instance::General { spec, .. } => &spec.graph,
        }
    }
}

/// Reads a graph or spec file. Spec files are recognised by a top-level
/// `graph` key; without `--pipeline` they run the general formulation and
/// plain graph files run the pairing one. A graph file under the general
/// pipeline becomes a closed route over every edge.
pub fn load_instance(path: &Path, settings: &Settings) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_err(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| input_err(path, e))?;
    let is_spec = value.get("graph").is_some();
    let kind = settings.pipeline.unwrap_or(if is_spec { PipelineKind::General } else { PipelineKind::Pairing });
    let (spec, labels) = if is_spec {
        parse_spec_json(&text).map_err(|e| input_err(path, e))?
    } else {
        let (g, labels) = parse_graph_json(&text).map_err(|e| input_err(path, e))?;
        (ProblemSpec::new(g), labels)
    };
    match kind {
        PipelineKind::Pairing => {
            if is_spec && !is_plain_closed(&spec) {
                return Err(Failure::Input(format!(
                    "{}: the pairing pipeline takes a plain graph; this spec uses general-only options",
                    path.display()
                )));
            }
            Ok(Instance::Pairing { graph: spec.graph, labels })
        }
        PipelineKind::General => {
            let spec = match settings.i_max {
                Some(i) => spec.with_i_max(i),
                None => spec,
            };
            Ok(Instance::General { spec, labels })
        }
    }
}

fn is_plain_closed(spec: &ProblemSpec) -> bool {
    spec.required.is_none()
        && spec.turns.is_empty()
        && !spec.service_mode
        && spec.hierarchy.is_empty()
        && spec.postmen == 1
        && spec.capacities.is_empty()
        && spec.postman_weights.is_empty()
        && spec.start == spec.stop
}
