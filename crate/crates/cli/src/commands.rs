use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Value};

use hisgraph::curvature::{graph_curvature, subgraph_curvature, Pooling};
use hisgraph::graph::{generate_ba, load_edge_list, load_features, LoadOptions};
use hisgraph::io::{self as hio, EdgeValueRow, TidyRow};
use hisgraph::metrics::{aggregation_variance, chain_preservation_rate, ChainSet, ForwardConfig};
use hisgraph::partition::{partition_auto, partition_stats};
use hisgraph::sampling::{accumulate_frequencies, compute_norm_coefficients, SampleSize, Sampler, SamplerConfig};
use hisgraph::{Graph, Subgraph};

use crate::error::{CliError, CliResult};
use crate::manifest::{cpu_seconds, sha256_file, Run, RunManifest, MANIFEST_FILE};
use crate::{
    ChainsArgs, Cli, Command, CurvatureArgs, GenerateArgs, GraphArgs, Model, PartitionArgs, PoolingArg, ReplayArgs,
    SampleArgs, Scope, VarianceArgs,
};

pub fn dispatch(cli: &Cli, argv: Vec<String>) -> CliResult<Value> {
    if let Command::Replay(args) = &cli.command {
        return replay(cli, args);
    }
    let name = cli.command.name();
    let dir = cli
        .global
        .out_dir
        .clone()
        .unwrap_or_else(|| Path::new("hisgraph-out").join(name));
    // Outermost directory this run creates, removed again on failure.
    let fresh = dir
        .ancestors()
        .take_while(|d| !d.as_os_str().is_empty() && !d.exists())
        .last()
        .map(Path::to_owned);
    let mut run = Run::start(&dir, name, argv, cli.global.seed)?;
    let seed = cli.global.seed;
    let outcome = match &cli.command {
        Command::Generate(a) => generate(&mut run, a, seed),
        Command::Partition(a) => partition(&mut run, a),
        Command::Sample(a) => sample(&mut run, a, seed),
        Command::Curvature(a) => curvature(&mut run, a),
        Command::Chains(a) => chains(&mut run, a, seed),
        Command::Variance(a) => variance(&mut run, a),
        Command::Replay(_) => unreachable!(),
    };
    let (config, summary) = match outcome {
        Ok(done) => done,
        Err(e) => {
            if let Some(d) = fresh {
                let _ = std::fs::remove_dir_all(d);
            }
            return Err(e);
        }
    };
    run.finish(config, summary.clone())?;
    Ok(summary)
}

type Outcome = CliResult<(Value, Value)>;

fn to_value<T: serde::Serialize>(v: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(v).map_err(hisgraph::Error::from)?)
}

/// A parent graph as named on the command line or recovered from the
/// manifest of a `sample` run.
struct GraphSource {
    path: PathBuf,
    keep_isolated: bool,
    features: Option<PathBuf>,
}

impl GraphSource {
    fn resolve(args: &GraphArgs, subgraphs: Option<&Path>) -> CliResult<Self> {
        if let Some(path) = &args.graph {
            return Ok(Self {
                path: path.clone(),
                keep_isolated: args.keep_isolated,
                features: args.features.clone(),
            });
        }
        let Some(dir) = subgraphs else {
            return Err(CliError::usage("--graph is required"));
        };
        let manifest = RunManifest::load(&dir.join(MANIFEST_FILE))?;
        if manifest.command != "sample" {
            return Err(CliError::usage(format!(
                "{} holds `{}` output, not subgraphs",
                dir.display(),
                manifest.command
            )));
        }
        let graph = manifest
            .input("graph")
            .ok_or_else(|| CliError::io(format!("{}: manifest names no graph", dir.display())))?;
        Ok(Self {
            path: graph.path.clone(),
            keep_isolated: manifest.config["keep_isolated"].as_bool().unwrap_or(false),
            features: args
                .features
                .clone()
                .or_else(|| manifest.input("features").map(|f| f.path.clone())),
        })
    }

    fn load(&self, run: &mut Run) -> CliResult<Graph> {
        let options = LoadOptions {
            drop_isolated: !self.keep_isolated,
        };
        let mut graph = load_edge_list(&self.path, options)?;
        run.input("graph", &self.path)?;
        if let Some(f) = &self.features {
            graph = load_features(f, graph)?;
            run.input("features", f)?;
        }
        Ok(graph)
    }

    fn config(&self) -> Value {
        json!({
            "graph": self.path,
            "keep_isolated": self.keep_isolated,
            "features": self.features,
        })
    }
}

fn load_subgraphs(run: &mut Run, dir: &Path, graph: &Graph) -> CliResult<Vec<Subgraph>> {
    let subs = hio::read_subgraphs(dir, graph)?;
    if subs.is_empty() {
        return Err(CliError::io(format!("{}: no subgraph files", dir.display())));
    }
    let manifest = dir.join(MANIFEST_FILE);
    if manifest.exists() {
        run.input("subgraphs", &manifest)?;
    }
    Ok(subs)
}

fn generate(run: &mut Run, a: &GenerateArgs, seed: u64) -> Outcome {
    let graph = match a.model {
        Model::Ba => generate_ba(a.nodes, a.m, seed)?,
    };
    hio::write_edge_list(run.output("graph.txt"), &graph)?;
    let config = json!({"model": "ba", "nodes": a.nodes, "m": a.m});
    let summary = json!({"nodes": graph.node_count(), "edges": graph.edge_count()});
    Ok((config, summary))
}

fn partition(run: &mut Run, a: &PartitionArgs) -> Outcome {
    let source = GraphSource::resolve(&a.graph, None)?;
    let graph = source.load(run)?;
    let start = cpu_seconds();
    let part = partition_auto(&graph)?;
    let report = partition_stats(&part, &graph, Duration::from_secs_f64((cpu_seconds() - start).max(0.0)));
    hio::write_json(run.output("partition.json"), &report)?;
    hio::write_id_map(run.output("id_map.csv"), &graph)?;
    if a.membership {
        hio::write_membership(run.output("membership.csv"), &graph, &part)?;
    }
    let mut config = source.config();
    config["membership"] = json!(a.membership);
    Ok((config, to_value(&report)?))
}

fn sample(run: &mut Run, a: &SampleArgs, seed: u64) -> Outcome {
    let source = GraphSource::resolve(&a.graph, None)?;
    let graph = source.load(run)?;
    let mut cfg = match (&a.preset, a.size, a.rate) {
        (Some(p), _, _) => SamplerConfig::preset(a.method, p, seed)?,
        (None, Some(k), _) => SamplerConfig::new(a.method, SampleSize::Nodes(k), seed),
        (None, None, Some(r)) => SamplerConfig::new(a.method, SampleSize::Rate(r), seed),
        (None, None, None) => return Err(CliError::usage("one of --rate, --size or --preset is required")),
    };
    if a.gamma.is_some() {
        cfg.gamma = a.gamma;
    }
    if let Some(w) = a.walk_length {
        cfg.walk_length = w;
    }
    if let Some(p) = a.geometric_p {
        cfg.geometric_p = p;
    }
    if a.roots.is_some() {
        cfg.roots = a.roots;
    }
    if a.edge_budget.is_some() {
        cfg.edge_budget = a.edge_budget;
    }
    if a.count == 0 {
        return Err(CliError::usage("--count must be >= 1"));
    }
    let part = partition_auto(&graph)?;
    let sampler = Sampler::new(&graph, &part, &cfg)?;
    let outcomes = sampler.sample_many(a.count)?;
    let mut per_subgraph = Vec::with_capacity(outcomes.len());
    for (i, o) in outcomes.iter().enumerate() {
        let [nodes, edges] = hio::write_subgraph(&run.dir, i, &o.subgraph)?;
        for p in [nodes, edges] {
            run.output(&p.file_name().expect("file name").to_string_lossy());
        }
        per_subgraph.push(json!({
            "index": i,
            "nodes": o.subgraph.node_count(),
            "edges": o.subgraph.edge_count(),
            "truncated": o.truncated,
        }));
    }
    hio::write_id_map(run.output("id_map.csv"), &graph)?;
    let mut unseen = Value::Null;
    if !a.no_counters {
        let counters = accumulate_frequencies(&graph, outcomes.iter().map(|o| &o.subgraph))?;
        let coeffs = compute_norm_coefficients(&graph, &counters)?;
        hio::write_node_counters(run.output("node_counters.csv"), &counters, &coeffs)?;
        hio::write_edge_counters(run.output("edge_counters.csv"), &graph, &counters, &coeffs)?;
        unseen = json!(coeffs.unseen_nodes());
    }
    let resolved = sampler.config();
    let mut config = source.config();
    config["sampler"] = to_value(&cfg)?;
    config["count"] = json!(a.count);
    config["counters"] = json!(!a.no_counters);
    let summary = json!({
        "method": resolved.method,
        "target": resolved.target,
        "gamma": resolved.gamma,
        "d_th": part.d_th,
        "count": outcomes.len(),
        "truncated": outcomes.iter().filter(|o| o.truncated).count(),
        "unseen_nodes": unseen,
        "subgraphs": per_subgraph,
    });
    Ok((config, summary))
}

fn curvature(run: &mut Run, a: &CurvatureArgs) -> Outcome {
    let source = GraphSource::resolve(&a.graph, a.subgraphs.as_deref())?;
    let graph = source.load(run)?;
    let pooling = match a.pooling {
        PoolingArg::Occurrences => Pooling::Occurrences,
        PoolingArg::PerSubgraph => Pooling::PerSubgraphMean,
    };
    let (summary, edges) = match a.scope {
        Scope::Graph => graph_curvature(&graph, a.mode, a.force)?,
        Scope::Subgraphs => {
            let dir = a
                .subgraphs
                .as_deref()
                .ok_or_else(|| CliError::usage("--scope subgraphs needs --subgraphs DIR"))?;
            let subs = load_subgraphs(run, dir, &graph)?;
            subgraph_curvature(&graph, &subs, a.mode, pooling, a.force)?
        }
    };
    let rows: Vec<EdgeValueRow> = edges
        .iter()
        .map(|e| EdgeValueRow {
            u: e.u,
            v: e.v,
            value: e.value(a.mode),
        })
        .collect();
    hio::write_edge_values(run.output("curvature_edges.csv"), &rows)?;
    hio::write_json(run.output("curvature_summary.json"), &summary)?;
    hio::write_id_map(run.output("id_map.csv"), &graph)?;
    let mut config = source.config();
    config["mode"] = json!(a.mode);
    config["scope"] = json!(match a.scope {
        Scope::Graph => "graph",
        Scope::Subgraphs => "subgraphs",
    });
    config["subgraphs"] = json!(a.subgraphs);
    config["pooling"] = json!(pooling);
    config["force"] = json!(a.force);
    Ok((config, to_value(&summary)?))
}

fn chains(run: &mut Run, a: &ChainsArgs, seed: u64) -> Outcome {
    let source = GraphSource::resolve(&a.graph, Some(&a.subgraphs))?;
    let graph = source.load(run)?;
    let subs = load_subgraphs(run, &a.subgraphs, &graph)?;
    let mut reports = Vec::with_capacity(a.k.len());
    let mut curve = Vec::new();
    for &k in &a.k {
        let set = ChainSet::build(&graph, k, a.cap, seed)?;
        let report = chain_preservation_rate(&graph, &set, &subs)?;
        let series = format!("k={k}");
        curve.extend(report.curve.iter().enumerate().map(|(i, &r)| TidyRow {
            x: (i + 1) as f64,
            series: series.clone(),
            value: r,
        }));
        reports.push(report);
    }
    hio::write_json(run.output("chains.json"), &reports)?;
    hio::write_tidy_csv(run.output("chains_curve.csv"), &curve)?;
    let mut config = source.config();
    config["subgraphs"] = json!(a.subgraphs);
    config["k"] = json!(a.k);
    config["cap"] = json!(a.cap);
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "n": r.n,
                "rate": r.rate,
                "total_chains": r.total_chains,
                "evaluated_chains": r.evaluated_chains,
                "sampled": r.sampled,
            })
        })
        .collect();
    Ok((config, json!({ "chains": summary })))
}

fn variance(run: &mut Run, a: &VarianceArgs) -> Outcome {
    let source = GraphSource::resolve(&a.graph, Some(&a.subgraphs))?;
    let graph = source.load(run)?;
    let subs = load_subgraphs(run, &a.subgraphs, &graph)?;
    let fc = ForwardConfig {
        layers: a.layers,
        hidden_dim: a.hidden,
        weight_seed: a.weight_seed,
    };
    let report = aggregation_variance(&graph, &subs, &fc)?;
    hio::write_json(run.output("variance.json"), &report)?;
    let curve: Vec<TidyRow> = report
        .curve
        .iter()
        .enumerate()
        .map(|(i, &v)| TidyRow {
            x: (i + 1) as f64,
            series: "var_avg".into(),
            value: v,
        })
        .collect();
    hio::write_tidy_csv(run.output("variance_curve.csv"), &curve)?;
    let mut config = source.config();
    config["subgraphs"] = json!(a.subgraphs);
    config["forward"] = to_value(&fc)?;
    let summary = json!({
        "var_avg": report.var_avg,
        "n_subgraphs": report.n_subgraphs,
        "unseen_nodes": report.unseen_nodes(),
    });
    Ok((config, summary))
}

/// Drops timing fields so reports compare on content alone.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| k != "cpu_seconds" && k != "wall_seconds");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn same_output(a: &Path, b: &Path) -> CliResult<bool> {
    if a.extension().is_some_and(|e| e == "json") {
        let mut x: Value = hio::read_json(a)?;
        let mut y: Value = hio::read_json(b)?;
        strip_timing(&mut x);
        strip_timing(&mut y);
        return Ok(x == y);
    }
    Ok(sha256_file(a)? == sha256_file(b)?)
}

fn absolute(p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_owned()
    } else {
        std::env::current_dir().unwrap_or_default().join(p)
    }
}

fn replay(cli: &Cli, a: &ReplayArgs) -> CliResult<Value> {
    let manifest_path = absolute(&a.manifest);
    let original = RunManifest::load(&manifest_path)?;
    for input in &original.inputs {
        if sha256_file(&input.path)? != input.sha256 {
            return Err(CliError::io(format!(
                "{}: contents changed since the recorded run",
                input.path.display()
            )));
        }
    }
    let src = manifest_path.parent().map(Path::to_owned).unwrap_or_default();
    let out = match &cli.global.out_dir {
        Some(d) => absolute(d),
        None => {
            let mut name = src.file_name().unwrap_or_default().to_owned();
            name.push("-replay");
            src.with_file_name(name)
        }
    };
    if out == src {
        return Err(CliError::usage("replay needs an --out-dir other than the original"));
    }
    if original.cwd.is_dir() {
        std::env::set_current_dir(&original.cwd)
            .map_err(|e| CliError::io(format!("{}: {e}", original.cwd.display())))?;
    }
    let mut argv = original.argv.clone();
    argv.push("--out-dir".into());
    argv.push(out.to_string_lossy().into_owned());
    let again = <Cli as clap::Parser>::try_parse_from(std::iter::once("hisgraph".to_owned()).chain(argv.iter().cloned()))
        .map_err(|e| CliError::usage(format!("stored arguments no longer parse: {e}")))?;
    if matches!(again.command, Command::Replay(_)) {
        return Err(CliError::usage("cannot replay a replay"));
    }
    dispatch(&again, argv)?;
    let mut differing = Vec::new();
    for name in &original.outputs {
        if !same_output(&src.join(name), &out.join(name))? {
            differing.push(name.clone());
        }
    }
    if !differing.is_empty() {
        return Err(CliError {
            code: crate::error::EXIT_NUMERIC,
            message: format!("replay differs in {}", differing.join(", ")),
        });
    }
    Ok(json!({
        "command": original.command,
        "out_dir": out,
        "outputs_compared": original.outputs.len(),
        "identical": true,
    }))
}
