//! `mvcd sweep`: run the detector across the whole weight grid and keep
//! the partition with the largest modularity.

use mvcd_core::detect::{sweep_detect, write_partition};
use mvcd_core::fusion::alpha_grid;
use mvcd_core::Detector;

use crate::args::SweepArgs;
use crate::common::{build_views, load_selected, print_table, write_output, CliError};

pub fn run(args: &SweepArgs) -> Result<(), CliError> {
    let datasets = load_selected(&args.input)?;
    let vs = build_views(&datasets, &args.view, &args.filter)?;
    let grid =
        alpha_grid(vs.k(), args.grid_step, args.include_endpoints).map_err(CliError::config)?;
    if grid.is_empty() {
        return Err(CliError::Config(
            "the grid is empty; loosen --grid-step or allow --include-endpoints true".into(),
        ));
    }
    let detector: Detector = args.detector.into();
    let result = sweep_detect(&vs, &grid, detector, args.seed).map_err(CliError::internal)?;

    for (i, label) in vs.labels().iter().enumerate() {
        println!("# View {} = {label}", i + 1);
    }
    let headers: Vec<String> = ["Alpha", "Q", "Clusters", "Isolates"]
        .map(String::from)
        .to_vec();
    let rows: Vec<Vec<String>> = result
        .entries
        .iter()
        .map(|e| {
            vec![
                e.weights.display(),
                format!("{:.4}", e.modularity),
                e.clusters.to_string(),
                e.isolates.to_string(),
            ]
        })
        .collect();
    print_table(&headers, &rows);
    println!(
        "selected = {} (alpha {}, Q {:.4})",
        result.selected,
        result.selected_entry().weights.display(),
        result.selected_entry().modularity
    );

    let mut report = Vec::new();
    result.write_report(&mut report).map_err(CliError::internal)?;
    write_output(&args.out, "sweep.tsv", &report)?;

    // the views share the fused graph's node map, so any of them can
    // supply the user ids
    let mut partition_file = Vec::new();
    write_partition(
        &vs.views()[0],
        &result.selected_entry().partition,
        &mut partition_file,
    )
    .map_err(CliError::internal)?;
    write_output(&args.out, "partition.tsv", &partition_file)?;
    Ok(())
}
