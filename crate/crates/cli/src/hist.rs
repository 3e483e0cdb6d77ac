//! `mvcd hist`: per-user activity histograms as `value<TAB>count` files,
//! pooled over the selected pages.

use std::collections::BTreeMap;

use mvcd_core::ingest::{EventKind, PageDataset};

use crate::args::HistArgs;
use crate::common::{load_selected, print_table, write_output, CliError};

fn per_user_counts(datasets: &[PageDataset], kind: EventKind) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for d in datasets {
        for ev in d.events() {
            if ev.kind == kind {
                *counts.entry(ev.actor_id.clone()).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Buckets users by activity count; users with zero activity in the
/// category do not appear.
fn histogram(counts: &BTreeMap<String, u64>) -> BTreeMap<u64, usize> {
    let mut hist = BTreeMap::new();
    for &c in counts.values() {
        *hist.entry(c).or_insert(0) += 1;
    }
    hist
}

fn render(hist: &BTreeMap<u64, usize>) -> String {
    let mut out = String::from("#value\tcount\n");
    for (value, count) in hist {
        out.push_str(&format!("{value}\t{count}\n"));
    }
    out
}

pub fn run(args: &HistArgs) -> Result<(), CliError> {
    let datasets = load_selected(&args.input)?;
    let specs = [
        ("hist_post_likes.tsv", EventKind::PostLike, "post likes"),
        ("hist_comment_likes.tsv", EventKind::CommentLike, "comment likes"),
        ("hist_comments.tsv", EventKind::Comment, "comments"),
    ];
    let headers: Vec<String> = ["Histogram", "Users", "File"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for (name, kind, label) in specs {
        let counts = per_user_counts(&datasets, kind);
        let hist = histogram(&counts);
        write_output(&args.out, name, render(&hist).as_bytes())?;
        rows.push(vec![
            label.to_string(),
            counts.len().to_string(),
            name.to_string(),
        ]);
    }
    print_table(&headers, &rows);
    Ok(())
}
