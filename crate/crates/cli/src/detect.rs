//! `mvcd detect`: fuse the views at one alpha, run the detector on every
//! view and on the merged graph, and mirror the per-column statistics
//! table (Users / Edges / Clusters / Isolates / Modularity).

use std::fs::File;
use std::io::BufReader;

use mvcd_core::detect::{read_partition, write_partition};
use mvcd_core::fusion::{fuse, WeightVector};
use mvcd_core::graph::Graph;
use mvcd_core::{cluster_stats, ClusterStats, Detector};

use crate::args::DetectArgs;
use crate::common::{build_views, load_selected, print_table, write_output, CliError};

struct Column {
    name: String,
    users: usize,
    edges: usize,
    stats: ClusterStats,
}

fn analyze(name: &str, g: &Graph, detector: Detector, seed: u64) -> Result<Column, CliError> {
    let partition = detector.run(g, seed);
    let stats = cluster_stats(g, &partition).map_err(CliError::internal)?;
    Ok(Column {
        name: name.to_string(),
        users: g.node_count(),
        edges: g.edge_count(),
        stats,
    })
}

pub fn run(args: &DetectArgs) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.alpha) || !args.alpha.is_finite() {
        return Err(CliError::Config(format!(
            "--alpha {} outside [0, 1]",
            args.alpha
        )));
    }
    let datasets = load_selected(&args.input)?;
    let vs = build_views(&datasets, &args.view, &args.filter)?;
    let weights = WeightVector::pair(args.alpha).map_err(CliError::config)?;
    let fused = fuse(&vs, &weights).map_err(CliError::internal)?;
    let detector: Detector = args.detector.into();

    let mut columns = Vec::with_capacity(vs.k() + 1);
    for (i, view) in vs.views().iter().enumerate() {
        columns.push(analyze(&format!("View {}", i + 1), view, detector, args.seed)?);
    }
    let merged = detector.run(&fused, args.seed);
    let merged_stats = cluster_stats(&fused, &merged).map_err(CliError::internal)?;
    columns.push(Column {
        name: "Merged".into(),
        users: fused.node_count(),
        edges: fused.edge_count(),
        stats: merged_stats,
    });

    for (i, label) in vs.labels().iter().enumerate() {
        println!("# View {} = {label}", i + 1);
    }
    println!("# alpha = {}", weights.display());
    let mut headers = vec!["Category".to_string()];
    headers.extend(columns.iter().map(|c| c.name.clone()));
    let row = |name: &str, f: &dyn Fn(&Column) -> String| {
        let mut r = vec![name.to_string()];
        r.extend(columns.iter().map(f));
        r
    };
    let rows = vec![
        row("Users", &|c| c.users.to_string()),
        row("Edges", &|c| c.edges.to_string()),
        row("Clusters", &|c| c.stats.clusters.to_string()),
        row("Isolates", &|c| c.stats.isolates.to_string()),
        row("Modularity", &|c| format!("{:.4}", c.stats.modularity)),
    ];
    print_table(&headers, &rows);

    let mut partition_file = Vec::new();
    write_partition(&fused, &merged, &mut partition_file).map_err(CliError::internal)?;
    write_output(&args.out, "partition.tsv", &partition_file)?;

    let mut summary = String::from("category");
    for c in &columns {
        summary.push('\t');
        summary.push_str(&c.name);
    }
    summary.push('\n');
    let mut push_row = |name: &str, values: Vec<String>| {
        summary.push_str(name);
        for v in values {
            summary.push('\t');
            summary.push_str(&v);
        }
        summary.push('\n');
    };
    push_row("users", columns.iter().map(|c| c.users.to_string()).collect());
    push_row("edges", columns.iter().map(|c| c.edges.to_string()).collect());
    push_row(
        "clusters",
        columns.iter().map(|c| c.stats.clusters.to_string()).collect(),
    );
    push_row(
        "isolates",
        columns.iter().map(|c| c.stats.isolates.to_string()).collect(),
    );
    push_row(
        "modularity",
        columns
            .iter()
            .map(|c| format!("{:.9}", c.stats.modularity))
            .collect(),
    );
    write_output(&args.out, "summary.tsv", summary.as_bytes())?;

    if let Some(path) = &args.score_partition {
        let file = File::open(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let external = read_partition(&fused, BufReader::new(file)).map_err(CliError::config)?;
        let stats = cluster_stats(&fused, &external).map_err(CliError::internal)?;
        println!(
            "External partition: clusters={} isolates={} modularity={:.4}",
            stats.clusters, stats.isolates, stats.modularity
        );
        let body = format!(
            "clusters\tisolates\tmodularity\n{}\t{}\t{:.9}\n",
            stats.clusters, stats.isolates, stats.modularity
        );
        write_output(&args.out, "external_score.tsv", body.as_bytes())?;
    }
    Ok(())
}
