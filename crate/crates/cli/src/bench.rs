use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use postman_core::format::parse_oracle_json;
use postman_core::solvers::Sampler;
use postman_core::Error;
use rayon::prelude::*;

use crate::commands::{oracle_path, solve_instance, suite_files};
use crate::config::{input_err, load_instance, sampler_with, Settings};
use crate::{Failure, RunArgs};

#[derive(Debug, Default, serde::Serialize)]
struct Row {
    instance: String,
    solver: String,
    seed: u64,
    valid: bool,
    energy: Option<f64>,
    weight: Option<f64>,
    gap_vs_oracle: Option<f64>,
    wall_time: Option<f64>,
    error: Option<String>,
}

fn run_row(file: &Path, settings: &Settings, sampler: &Sampler, seed: u64) -> Row {
    let mut row = Row {
        instance: file.file_stem().and_then(|s| s.to_str()).unwrap_or("").to_string(),
        solver: sampler.name().to_string(),
        seed,
        ..Row::default()
    };
    let inst = match load_instance(file, settings) {
        Ok(i) => i,
        Err(f) => {
            row.error = Some(message(f));
            return row;
        }
    };
    let started = Instant::now();
    let result = solve_instance(&inst, settings, sampler, seed);
    if settings.timing {
        row.wall_time = Some(started.elapsed().as_secs_f64());
    }
    match result {
        Ok(solved) => {
            row.valid = solved.route.is_valid();
            row.energy = solved.report.map(|r| r.best_energy);
            let weight = solved.route.total_cost();
            row.weight = Some(weight);
            let oracle = fs::read_to_string(oracle_path(file.parent().unwrap_or(Path::new(".")), file))
                .ok()
                .and_then(|t| parse_oracle_json(&t).ok());
            row.gap_vs_oracle = oracle.map(|o| weight - o.weight);
        }
        Err(Error::NoValidSolution { retunes }) => {
            row.error = Some(format!("no valid solution after {retunes} retunes"));
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

fn message(f: Failure) -> String {
    match f {
        Failure::Input(m) | Failure::NoValidSolution(m) | Failure::TooLarge(m) => m,
    }
}

/// One row per (instance, solver, seed), in that nesting order. Rows are
/// computed in parallel but each depends only on its own inputs, so the
/// table is identical across runs unless `--timing` is set.
pub fn bench(
    suite: &Path,
    args: &RunArgs,
    solvers: Option<Vec<String>>,
    seeds: Option<Vec<u64>>,
) -> Result<(), Failure> {
    let settings = Settings::resolve(args)?;
    let files = suite_files(suite)?;
    if files.is_empty() {
        return Err(Failure::Input(format!("{}: suite has no instance files", suite.display())));
    }
    let names = solvers.unwrap_or_else(|| vec![settings.sampler.name().to_string()]);
    let samplers = names
        .iter()
        .map(|n| sampler_with(n, settings.sampler_params))
        .collect::<Result<Vec<_>, _>>()?;
    let seeds = seeds.unwrap_or_else(|| vec![settings.seed]);
    let mut jobs: Vec<(&PathBuf, &Sampler, u64)> = Vec::new();
    for f in &files {
        for s in &samplers {
            jobs.extend(seeds.iter().map(|&seed| (f, s, seed)));
        }
    }
    let rows: Vec<Row> = jobs.par_iter().map(|&(f, s, seed)| run_row(f, &settings, s, seed)).collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).map_err(|e| Failure::Input(e.to_string()))?;
    }
    let table = w.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
    match &settings.out {
        Some(path) => fs::write(path, &table).map_err(|e| input_err(path, e))?,
        None => print!("{}", String::from_utf8_lossy(&table)),
    }
    if rows.iter().any(|r| r.error.is_none()) {
        Ok(())
    } else {
        Err(Failure::Input("every benchmark row failed".into()))
    }
}
