use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use postman_core::format::{parse_route_json, to_json_pretty, OracleFile, RouteFile};
use postman_core::general::{euler_shortcut, exact_walk_oracle, validate_route, DEFAULT_NODE_BUDGET};
use postman_core::pairing::PairingProblem;
use postman_core::qubo::{registry_to_text, to_text};
use postman_core::route::RouteStep;
use postman_core::solvers::{solve_with_retune, GeneralPipeline, PairingPipeline, Pipeline, Sampler, SolveReport};
use postman_core::{CompiledQubo, Error, PenaltyConfig, ProblemSpec, RouteSolution};
use serde_json::json;

use crate::config::{input_err, load_instance, Instance, Settings};
use crate::{dot, Failure, RunArgs};

/// Outcome of solving one instance.
pub struct Solved {
    pub route: RouteSolution,
    /// `None` when the route came straight from an Euler circuit.
    pub report: Option<SolveReport<f64>>,
    pub penalties: Option<PenaltyConfig>,
}

pub fn solve_instance(inst: &Instance, settings: &Settings, sampler: &Sampler, seed: u64) -> Result<Solved, Error> {
    let run = |pipe: &dyn Pipeline<f64>| -> Result<Solved, Error> {
        let pen = settings.penalties_over(pipe.default_penalties());
        let out = solve_with_retune(pipe, pen, sampler, seed, settings.max_retunes)?;
        Ok(Solved { route: out.route, report: Some(out.report), penalties: Some(out.penalties) })
    };
    match inst {
        Instance::Pairing { graph, .. } => {
            let pipe = PairingPipeline::new(graph.clone())?;
            if pipe.problem.odd.is_empty() {
                return Ok(Solved { route: pipe.problem.euler_route()?, report: None, penalties: None });
            }
            run(&pipe)
        }
        Instance::General { spec, .. } => {
            spec.validate()?;
            if !settings.force_qubo {
                if let Some(route) = euler_shortcut(spec) {
                    return Ok(Solved { route, report: None, penalties: None });
                }
            }
            run(&GeneralPipeline::new(spec.clone())?)
        }
    }
}

fn compile(inst: &Instance, settings: &Settings) -> Result<CompiledQubo, Failure> {
    match inst {
        Instance::Pairing { graph, .. } => {
            let pipe = PairingPipeline::new(graph.clone())?;
            if pipe.problem.odd.is_empty() && !settings.force_qubo {
                return Err(Error::ShortcutApplies.into());
            }
            Ok(pipe.compile(&settings.penalties_over(pipe.default_penalties()))?)
        }
        Instance::General { spec, .. } => {
            spec.validate()?;
            if !settings.force_qubo && euler_shortcut(spec).is_some() {
                return Err(Error::ShortcutApplies.into());
            }
            let pipe = GeneralPipeline::new(spec.clone())?;
            Ok(pipe.compile(&settings.penalties_over(pipe.default_penalties()))?)
        }
    }
}

fn pipeline_name(inst: &Instance) -> &'static str {
    match inst {
        Instance::Pairing { .. } => "pairing",
        Instance::General { .. } => "general",
    }
}

fn summary(inst: &Instance, solved: &Solved, settings: &Settings) -> String {
    let labels = inst.labels();
    let route = &solved.route;
    let mut s = String::new();
    writeln!(s, "pipeline: {}", pipeline_name(inst)).unwrap();
    match &solved.report {
        Some(r) => {
            writeln!(s, "solver: {} (seed {})", r.solver_name, r.seed).unwrap();
            writeln!(s, "energy: {}", r.best_energy).unwrap();
            writeln!(s, "retunes: {}", r.retunes).unwrap();
            if settings.timing {
                writeln!(s, "wall time: {:.3} s", r.wall_time).unwrap();
            }
        }
        None => writeln!(s, "solver: none (Euler circuit of the required edges)").unwrap(),
    }
    writeln!(s, "weight: {}", route.objective_weight).unwrap();
    if route.turn_extra != 0.0 {
        writeln!(s, "turn extra: {}", route.turn_extra).unwrap();
    }
    let failures = route.validity.failures();
    if failures.is_empty() {
        writeln!(s, "valid: yes").unwrap();
    } else {
        writeln!(s, "valid: no ({})", failures.join(", ")).unwrap();
    }
    for p in 0..route.walks.len() {
        let order: Vec<String> = route.vertex_order(p).into_iter().map(|v| labels.label(v).to_string()).collect();
        writeln!(s, "postman {p}: {}", if order.is_empty() { "(stays put)".to_string() } else { order.join(" -> ") })
            .unwrap();
    }
    s
}

fn report_json(solved: &Solved, settings: &Settings) -> String {
    let value = match &solved.report {
        Some(r) => {
            let bits: String = r.best_assignment.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let mut v = json!({
                "solver": r.solver_name,
                "seed": r.seed,
                "best_energy": r.best_energy,
                "best_assignment": bits,
                "samples_evaluated": r.samples_evaluated,
                "retunes": r.retunes,
                "penalties": solved.penalties,
            });
            if settings.timing {
                v["wall_time"] = json!(r.wall_time);
            }
            v
        }
        None => json!({ "solver": null, "shortcut": "euler" }),
    };
    to_json_pretty(&value)
}

/// Writes `files` under `dir`, or prints `stdout_text` when there is none.
fn emit(dir: Option<&Path>, files: &[(&str, String)], stdout_text: &str) -> Result<(), Failure> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| input_err(dir, e))?;
            for (name, body) in files {
                let path = dir.join(name);
                fs::write(&path, body).map_err(|e| input_err(&path, e))?;
            }
        }
        None => print!("{stdout_text}"),
    }
    Ok(())
}

pub fn solve(input: &Path, args: &RunArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(args)?;
    let inst = load_instance(input, &settings)?;
    let solved = solve_instance(&inst, &settings, &settings.sampler, settings.seed)?;
    let route_json = to_json_pretty(&RouteFile::from_route(inst.labels(), &solved.route));
    let text = summary(&inst, &solved, &settings);
    let mut files = vec![
        ("route.json", route_json.clone()),
        ("summary.txt", text.clone()),
        ("report.json", report_json(&solved, &settings)),
    ];
    if settings.dot {
        files.push(("route.dot", dot::render(inst.graph(), inst.labels(), Some(&solved.route))));
    }
    if settings.out.is_none() {
        eprint!("{text}");
    }
    emit(settings.out.as_deref(), &files, &route_json)?;
    if solved.route.is_valid() {
        Ok(())
    } else {
        Err(Failure::NoValidSolution("decoded route is invalid".into()))
    }
}

pub fn export_qubo(input: &Path, args: &RunArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(args)?;
    let inst = load_instance(input, &settings)?;
    let compiled = compile(&inst, &settings)?;
    let qubo = to_text(&compiled.qubo);
    let mut files = vec![("qubo.txt", qubo.clone()), ("registry.txt", registry_to_text(&compiled.registry))];
    if settings.dot {
        files.push(("graph.dot", dot::render(inst.graph(), inst.labels(), None)));
    }
    emit(settings.out.as_deref(), &files, &qubo)
}

fn oracle_file(inst: &Instance, budget: u64) -> Result<OracleFile, Failure> {
    let labels = inst.labels();
    match inst {
        Instance::Pairing { graph, .. } => {
            let problem = PairingProblem::new(graph.clone())?;
            let (pairing, added) = problem.oracle()?;
            let route = problem.route(&pairing)?;
            Ok(OracleFile {
                pipeline: "pairing".into(),
                weight: route.objective_weight,
                pairing: Some(
                    pairing.pairs.iter().map(|&(a, b)| (labels.label(a).clone(), labels.label(b).clone())).collect(),
                ),
                added_weight: Some(added),
                route: RouteFile::from_route(labels, &route),
            })
        }
        Instance::General { spec, .. } => {
            spec.validate()?;
            let route = exact_walk_oracle(spec, budget)?;
            Ok(OracleFile {
                pipeline: "general".into(),
                weight: route.total_cost(),
                pairing: None,
                added_weight: None,
                route: RouteFile::from_route(labels, &route),
            })
        }
    }
}

/// Instance files of a suite directory in name order; oracle outputs are
/// skipped.
pub fn suite_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| input_err(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            p.is_file() && name.ends_with(".json") && !name.ends_with(".oracle.json")
        })
        .collect();
    files.sort();
    Ok(files)
}

pub fn oracle_path(dir: &Path, instance: &Path) -> PathBuf {
    let stem = instance.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
    dir.join(format!("{stem}.oracle.json"))
}

pub fn oracle(input: &Path, args: &RunArgs, node_budget: Option<u64>) -> Result<(), Failure> {
    let settings = Settings::resolve(args)?;
    let budget = node_budget.unwrap_or(DEFAULT_NODE_BUDGET);
    if input.is_dir() {
        let files = suite_files(input)?;
        if files.is_empty() {
            return Err(Failure::Input(format!("{}: no instance files", input.display())));
        }
        let out = settings.out.clone().unwrap_or_else(|| input.to_path_buf());
        fs::create_dir_all(&out).map_err(|e| input_err(&out, e))?;
        for file in files {
            let inst = load_instance(&file, &settings)?;
            let result = oracle_file(&inst, budget).map_err(|f| prefix(&file, f))?;
            let path = oracle_path(&out, &file);
            fs::write(&path, to_json_pretty(&result)).map_err(|e| input_err(&path, e))?;
            println!("{}: {}", file.display(), result.weight);
        }
        return Ok(());
    }
    let inst = load_instance(input, &settings)?;
    let body = to_json_pretty(&oracle_file(&inst, budget)?);
    match &settings.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| input_err(dir, e))?;
            let path = oracle_path(dir, input);
            fs::write(&path, body).map_err(|e| input_err(&path, e))?;
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn prefix(path: &Path, f: Failure) -> Failure {
    let p = path.display();
    match f {
        Failure::Input(m) => Failure::Input(format!("{p}: {m}")),
        Failure::NoValidSolution(m) => Failure::NoValidSolution(format!("{p}: {m}")),
        Failure::TooLarge(m) => Failure::TooLarge(format!("{p}: {m}")),
    }
}

/// Re-checks walks against the instance from scratch. For the pairing
/// pipeline the route must be one closed walk over every edge.
pub fn check_walks(inst: &Instance, walks: &[Vec<RouteStep>]) -> Result<RouteSolution, Error> {
    match inst {
        Instance::Pairing { graph, .. } => {
            let steps = walks.iter().map(Vec::len).sum::<usize>().max(1);
            let mut spec = ProblemSpec::new(graph.clone()).with_i_max(steps);
            if let Some(first) = walks.first().and_then(|w| w.first()) {
                spec = spec.closed_at(first.from);
            }
            let (mut validity, weight, turn_extra) = validate_route(&spec, walks)?;
            if walks.len() != 1 {
                validity.contiguous = false;
            }
            Ok(RouteSolution { walks: walks.to_vec(), objective_weight: weight, turn_extra, validity })
        }
        Instance::General { spec, .. } => {
            spec.validate()?;
            let (validity, weight, turn_extra) = validate_route(spec, walks)?;
            Ok(RouteSolution { walks: walks.to_vec(), objective_weight: weight, turn_extra, validity })
        }
    }
}

pub fn validate(input: &Path, route_path: &Path, args: &RunArgs) -> Result<(), Failure> {
    let settings = Settings::resolve(args)?;
    let inst = load_instance(input, &settings)?;
    let text = fs::read_to_string(route_path).map_err(|e| input_err(route_path, e))?;
    let file = parse_route_json(&text).map_err(|e| input_err(route_path, e))?;
    let walks = file.walks(inst.graph(), inst.labels()).map_err(|e| input_err(route_path, e))?;
    let route = check_walks(&inst, &walks)?;
    let mut problems: Vec<String> = route.validity.failures().into_iter().map(str::to_string).collect();
    if (route.objective_weight - file.weight).abs() > 1e-9 * route.objective_weight.abs().max(1.0) {
        problems.push(format!("stated weight {} differs from recomputed {}", file.weight, route.objective_weight));
    }
    println!("weight: {}", route.objective_weight);
    if route.turn_extra != 0.0 {
        println!("turn extra: {}", route.turn_extra);
    }
    if problems.is_empty() {
        println!("valid: yes");
        Ok(())
    } else {
        println!("valid: no");
        Err(Failure::NoValidSolution(format!("route is invalid: {}", problems.join("; "))))
    }
}
