//! `mvcd filter`: apply the popular-content / active-user rules per page
//! and export the qualifying users, content, and filtered event log.

use mvcd_core::ingest::format_event;
use mvcd_core::{active_users, popular_content, ActivityFilterConfig};

use crate::args::FilterArgs;
use crate::common::{load_selected, print_table, write_output, CliError};

pub fn run(args: &FilterArgs) -> Result<(), CliError> {
    let datasets = load_selected(&args.input)?;
    if datasets.is_empty() {
        return Err(CliError::Config("no pages in the input".into()));
    }
    let cfg = ActivityFilterConfig {
        min_post_likers: args.min_post_likers,
        min_comment_likers: args.min_comment_likers,
    };
    let headers: Vec<String> = [
        "Page",
        "ActiveUsers",
        "PopularPosts",
        "PopularComments",
        "FilteredEvents",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = Vec::new();
    for d in &datasets {
        let popular = popular_content(d, &cfg);
        let active = active_users(d, &cfg);
        let page = d.page_id();

        let list = |items: &std::collections::BTreeSet<String>| {
            items.iter().fold(String::new(), |mut acc, it| {
                acc.push_str(it);
                acc.push('\n');
                acc
            })
        };
        write_output(&args.out, &format!("{page}.active_users.tsv"), list(&active).as_bytes())?;
        write_output(
            &args.out,
            &format!("{page}.popular_posts.tsv"),
            list(&popular.posts).as_bytes(),
        )?;
        write_output(
            &args.out,
            &format!("{page}.popular_comments.tsv"),
            list(&popular.comments).as_bytes(),
        )?;

        // events by active actors, original order, original format
        let mut log = String::new();
        let mut kept = 0usize;
        for ev in d.events() {
            if active.contains(&ev.actor_id) {
                log.push_str(&format_event(ev));
                log.push('\n');
                kept += 1;
            }
        }
        write_output(&args.out, &format!("{page}.events.tsv"), log.as_bytes())?;

        rows.push(vec![
            page.to_string(),
            active.len().to_string(),
            popular.posts.len().to_string(),
            popular.comments.len().to_string(),
            kept.to_string(),
        ]);
    }
    print_table(&headers, &rows);
    Ok(())
}
