//! `mvcd synth`: generate a planted-partition multi-view instance, export
//! it, and optionally sweep it against the ground truth.

use std::fs;
use std::path::Path;

use mvcd_core::detect::{sweep_detect, write_partition};
use mvcd_core::fusion::alpha_grid;
use mvcd_core::synth::{generate, partition_similarity, PlantedSpec};
use mvcd_core::Detector;

use crate::args::SynthArgs;
use crate::common::{print_table, write_output, CliError};

#[derive(Default)]
struct SpecDraft {
    n: Option<usize>,
    communities: Option<usize>,
    p_in: Option<f64>,
    p_out: Option<f64>,
    views: Option<usize>,
    inactive: Option<Vec<f64>>,
    complementary: Option<bool>,
    seed: Option<u64>,
}

fn parse_spec_file(path: &Path) -> Result<SpecDraft, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut draft = SpecDraft::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| {
            CliError::Config(format!(
                "{}:{}: {what} in `{raw}`",
                path.display(),
                idx + 1
            ))
        };
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "n" => draft.n = Some(value.parse().map_err(|_| bad("invalid integer"))?),
            "communities" => {
                draft.communities = Some(value.parse().map_err(|_| bad("invalid integer"))?)
            }
            "p_in" => draft.p_in = Some(value.parse().map_err(|_| bad("invalid number"))?),
            "p_out" => draft.p_out = Some(value.parse().map_err(|_| bad("invalid number"))?),
            "views" => draft.views = Some(value.parse().map_err(|_| bad("invalid integer"))?),
            "inactive" => {
                let fractions: Result<Vec<f64>, _> =
                    value.split(',').map(|v| v.trim().parse()).collect();
                draft.inactive = Some(fractions.map_err(|_| bad("invalid fraction list"))?);
            }
            "complementary" => {
                draft.complementary = Some(value.parse().map_err(|_| bad("invalid bool"))?)
            }
            "seed" => draft.seed = Some(value.parse().map_err(|_| bad("invalid integer"))?),
            _ => return Err(bad("unknown key")),
        }
    }
    Ok(draft)
}

fn resolve_spec(args: &SynthArgs) -> Result<PlantedSpec, CliError> {
    let file = match &args.spec_file {
        Some(path) => parse_spec_file(path)?,
        None => SpecDraft::default(),
    };
    let n = args
        .n
        .or(file.n)
        .ok_or_else(|| CliError::Config("missing node count: pass --n or set n= in --spec-file".into()))?;
    let views = args.num_views.or(file.views).unwrap_or(2);
    let inactive = args
        .inactive
        .clone()
        .or(file.inactive)
        .unwrap_or_else(|| vec![0.0; views]);
    Ok(PlantedSpec {
        n,
        k_communities: args.communities.or(file.communities).unwrap_or(2),
        p_in: args.p_in.or(file.p_in).unwrap_or(0.1),
        p_out: args.p_out.or(file.p_out).unwrap_or(0.01),
        inactive_fraction: inactive,
        views,
        complementary_inactive: args.complementary || file.complementary.unwrap_or(false),
        seed: if args.seed != 0 {
            args.seed
        } else {
            file.seed.unwrap_or(0)
        },
    })
}

pub fn run(args: &SynthArgs) -> Result<(), CliError> {
    let spec = resolve_spec(args)?;
    for warning in spec.validate().map_err(CliError::config)? {
        eprintln!("warning: {warning}");
    }
    let (vs, truth) = generate(&spec).map_err(CliError::config)?;

    for (i, view) in vs.views().iter().enumerate() {
        let mut edges = Vec::new();
        view.write_edge_list(&mut edges).map_err(CliError::internal)?;
        write_output(&args.out, &format!("view{}.tsv", i + 1), &edges)?;
    }
    let mut truth_file = Vec::new();
    write_partition(&vs.views()[0], &truth, &mut truth_file).map_err(CliError::internal)?;
    write_output(&args.out, "ground_truth.tsv", &truth_file)?;
    println!(
        "generated {} nodes, {} views, {} planted communities (seed {})",
        spec.n,
        spec.views,
        spec.k_communities,
        spec.seed
    );
    for (i, view) in vs.views().iter().enumerate() {
        println!(
            "view{}: {} edges, {} isolates",
            i + 1,
            view.edge_count(),
            view.isolate_count()
        );
    }

    if !args.evaluate {
        return Ok(());
    }
    let grid =
        alpha_grid(vs.k(), args.grid_step, args.include_endpoints).map_err(CliError::config)?;
    if grid.is_empty() {
        return Err(CliError::Config(
            "the grid is empty; loosen --grid-step or allow --include-endpoints true".into(),
        ));
    }
    let detector: Detector = args.detector.into();
    let result = sweep_detect(&vs, &grid, detector, spec.seed).map_err(CliError::internal)?;

    let mut report = String::from("#alphas\tQ\tclusters\tisolates\tnmi\n");
    let headers: Vec<String> = ["Alpha", "Q", "Clusters", "Isolates", "NMI"]
        .map(String::from)
        .to_vec();
    let mut rows = Vec::new();
    for entry in &result.entries {
        let nmi = partition_similarity(&entry.partition, &truth).map_err(CliError::internal)?;
        report.push_str(&format!(
            "{}\t{:.9}\t{}\t{}\t{:.6}\n",
            entry.weights.display(),
            entry.modularity,
            entry.clusters,
            entry.isolates,
            nmi
        ));
        rows.push(vec![
            entry.weights.display(),
            format!("{:.4}", entry.modularity),
            entry.clusters.to_string(),
            entry.isolates.to_string(),
            format!("{nmi:.4}"),
        ]);
    }
    report.push_str(&format!("selected={}\n", result.selected));
    write_output(&args.out, "evaluation.tsv", report.as_bytes())?;

    let mut partition_file = Vec::new();
    write_partition(
        &vs.views()[0],
        &result.selected_entry().partition,
        &mut partition_file,
    )
    .map_err(CliError::internal)?;
    write_output(&args.out, "partition.tsv", &partition_file)?;

    print_table(&headers, &rows);
    println!(
        "selected = {} (alpha {})",
        result.selected,
        result.selected_entry().weights.display()
    );
    Ok(())
}
