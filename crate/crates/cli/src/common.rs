//! Shared plumbing: error-to-exit-code mapping, input loading, view
//! assembly, and table rendering.

use std::collections::BTreeSet;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use mvcd_core::ingest::{self, Diagnostic, PageDataset};
use mvcd_core::views::{
    build_colike_view_with, build_comment_view_with, build_post_view_with,
    build_mutual_comment_like_view, make_viewset, ViewBuildOptions, ViewBuildReport, ViewSet,
};
use mvcd_core::{active_users, common_users, ActivityFilterConfig};

use crate::args::{FilterArgsGroup, FilterMode, InputArgs, ViewArgs, ViewMode};

/// Exit code 2 for configuration/usage problems, 1 for runtime failures.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn config(e: impl fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn internal(e: impl fmt::Display) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Internal(msg) => f.write_str(msg),
        }
    }
}

/// Where an event came from, for diagnostics spanning multiple inputs.
struct EventLocation {
    file: PathBuf,
    line: usize,
}

/// Reads every input file, pools the events, and groups them into per-page
/// datasets. Diagnostics go to stderr (lenient) or fail the run (strict).
pub fn load_datasets(args: &InputArgs) -> Result<Vec<PageDataset>, CliError> {
    let mut events = Vec::new();
    let mut locations: Vec<EventLocation> = Vec::new();
    let mut diagnostics: Vec<(Option<EventLocation>, Diagnostic)> = Vec::new();
    for path in &args.input {
        let file = File::open(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line =
                line.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            match ingest::parse_line(&line) {
                Ok(Some(ev)) => {
                    locations.push(EventLocation {
                        file: path.clone(),
                        line: idx + 1,
                    });
                    events.push((locations.len() - 1, ev));
                }
                Ok(None) => {}
                Err(message) => diagnostics.push((
                    Some(EventLocation {
                        file: path.clone(),
                        line: idx + 1,
                    }),
                    Diagnostic {
                        kind: ingest::DiagnosticKind::Malformed,
                        line: Some(idx + 1),
                        message,
                    },
                )),
            }
        }
    }
    let empty = events.is_empty();
    let outcome = ingest::build_datasets(events);
    for d in outcome.diagnostics {
        let loc = d.line.map(|seq| EventLocation {
            file: locations[seq].file.clone(),
            line: locations[seq].line,
        });
        diagnostics.push((loc, d));
    }
    for (loc, d) in &diagnostics {
        let rendered = match loc {
            Some(l) => format!("{}:{}: {}", l.file.display(), l.line, d.message),
            None => d.message.clone(),
        };
        if args.strict && d.is_corruption() {
            return Err(CliError::Config(format!("strict mode: {rendered}")));
        }
        eprintln!("warning: {rendered}");
    }
    if empty {
        eprintln!("warning: input contains no events");
    }
    Ok(outcome.datasets)
}

/// Applies the `--pages` selection, keeping the requested order.
pub fn select_pages(
    datasets: Vec<PageDataset>,
    pages: &[String],
) -> Result<Vec<PageDataset>, CliError> {
    if pages.is_empty() {
        return Ok(datasets);
    }
    let mut by_id: std::collections::BTreeMap<String, PageDataset> = datasets
        .into_iter()
        .map(|d| (d.page_id().to_string(), d))
        .collect();
    let mut selected = Vec::with_capacity(pages.len());
    for page in pages {
        match by_id.remove(page) {
            Some(d) => selected.push(d),
            None => {
                return Err(CliError::Config(format!(
                    "page `{page}` not present in the input"
                )))
            }
        }
    }
    Ok(selected)
}

pub fn load_selected(args: &InputArgs) -> Result<Vec<PageDataset>, CliError> {
    select_pages(load_datasets(args)?, &args.pages)
}

fn filter_config(filter: &FilterArgsGroup) -> ActivityFilterConfig {
    ActivityFilterConfig {
        min_post_likers: filter.min_post_likers,
        min_comment_likers: filter.min_comment_likers,
    }
}

fn report_skipped(report: &ViewBuildReport, view: &str) {
    for item in &report.skipped {
        eprintln!(
            "warning: view {view}: skipped `{}` on page `{}` ({} likers over cap)",
            item.item_id, item.page_id, item.likers
        );
    }
}

/// Assembles the two-view ViewSet a detect/sweep run works on.
pub fn build_views(
    datasets: &[PageDataset],
    view: &ViewArgs,
    filter: &FilterArgsGroup,
) -> Result<ViewSet, CliError> {
    let cfg = filter_config(filter);
    let opts = ViewBuildOptions {
        max_likers_per_item: view.max_likers,
    };
    match view.views {
        ViewMode::Page => {
            let d = match datasets {
                [d] => d,
                [] => return Err(CliError::Config("no pages in the input".into())),
                many => {
                    return Err(CliError::Config(format!(
                        "--views page needs exactly one page, found {} (use --pages to pick one, or --views multipage)",
                        many.len()
                    )))
                }
            };
            let restriction = match filter.filter {
                FilterMode::None => None,
                FilterMode::Active => Some(active_users(d, &cfg)),
            };
            if matches!(&restriction, Some(r) if r.is_empty()) {
                return Err(CliError::Config(format!(
                    "no active users on page `{}` under the current thresholds",
                    d.page_id()
                )));
            }
            let (post, rp) = build_post_view_with(d, restriction.as_ref(), &opts);
            let (comment, rc) = build_comment_view_with(d, restriction.as_ref(), &opts);
            report_skipped(&rp, "post");
            report_skipped(&rc, "comment");
            make_viewset(vec![post, comment], vec!["post".into(), "comment".into()])
                .map_err(CliError::internal)
        }
        ViewMode::Multipage => {
            if datasets.len() < 2 {
                return Err(CliError::Config(format!(
                    "--views multipage needs at least two pages, found {}",
                    datasets.len()
                )));
            }
            let users: BTreeSet<String> = match filter.filter {
                FilterMode::None => common_users(datasets).map_err(CliError::config)?,
                FilterMode::Active => {
                    let mut sets = datasets.iter().map(|d| active_users(d, &cfg));
                    let first = sets.next().expect("len checked");
                    sets.fold(first, |acc, s| acc.intersection(&s).cloned().collect())
                }
            };
            if users.is_empty() {
                return Err(CliError::Config(
                    "the selected pages share no qualifying users".into(),
                ));
            }
            let (colike, rc) =
                build_colike_view_with(datasets, &users, &opts).map_err(CliError::config)?;
            report_skipped(&rc, "colike");
            let mutual =
                build_mutual_comment_like_view(datasets, &users).map_err(CliError::config)?;
            make_viewset(
                vec![colike, mutual],
                vec!["colike".into(), "mutual-comment-like".into()],
            )
            .map_err(CliError::internal)
        }
    }
}

/// Creates the output directory and writes `name` inside it.
pub fn write_output(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut f = File::create(&path)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(contents)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Left-aligned columns with a two-space gutter.
pub fn print_table(headers: &[String], rows: &[Vec<String>]) {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(String::len).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let render = |cells: &[String]| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate().take(cols) {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<width$}", width = widths[i]));
        }
        println!("{}", line.trim_end());
    };
    render(headers);
    for row in rows {
        render(row);
    }
}
