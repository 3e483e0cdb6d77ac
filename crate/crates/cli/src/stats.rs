//! `mvcd stats`: one table row per page.

use mvcd_core::dataset_stats;

use crate::args::StatsArgs;
use crate::common::{load_selected, print_table, CliError};

pub fn run(args: &StatsArgs) -> Result<(), CliError> {
    let datasets = load_selected(&args.input)?;
    let headers: Vec<String> = ["Page", "Users", "Posts", "Comments", "Likes"]
        .map(String::from)
        .to_vec();
    let mut rows = Vec::new();
    if datasets.is_empty() {
        rows.push(vec!["-".into(), "0".into(), "0".into(), "0".into(), "0".into()]);
    }
    for d in &datasets {
        let s = dataset_stats(d);
        rows.push(vec![
            d.page_id().to_string(),
            s.users.to_string(),
            s.posts.to_string(),
            s.comments.to_string(),
            s.likes.to_string(),
        ]);
    }
    print_table(&headers, &rows);
    Ok(())
}
