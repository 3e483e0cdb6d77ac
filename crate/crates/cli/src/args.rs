//! Command-line surface: one subcommand per pipeline stage.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "mvcd",
    version,
    about = "Multi-view community detection over social-page interaction logs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-page dataset statistics (users, posts, comments, likes)
    Stats(StatsArgs),
    /// Build views, fuse at one alpha, detect communities, report per-view
    /// and merged statistics
    Detect(DetectArgs),
    /// Sweep the fusion weight grid and keep the best-modularity partition
    Sweep(SweepArgs),
    /// Per-user activity histograms (plot-ready value/count files)
    Hist(HistArgs),
    /// Generate a planted-partition multi-view benchmark and optionally
    /// evaluate detection on it
    Synth(SynthArgs),
    /// Apply the popular-content / active-user filters and export the
    /// filtered data
    Filter(FilterArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Event log file (tab-separated, 7 columns); repeatable
    #[arg(long = "input", value_name = "PATH", required = true)]
    pub input: Vec<PathBuf>,
    /// Only analyze these page ids
    #[arg(long, value_name = "ID,...", value_delimiter = ',')]
    pub pages: Vec<String>,
    /// Treat malformed lines and broken references as fatal
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct FilterArgsGroup {
    /// Which users enter the graphs
    #[arg(long, value_enum, default_value_t = FilterMode::None)]
    pub filter: FilterMode,
    /// Distinct likers for a post to count as popular
    #[arg(long, value_name = "N", default_value_t = 2)]
    pub min_post_likers: usize,
    /// Distinct likers for a comment to count as popular
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub min_comment_likers: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterMode {
    None,
    Active,
}

#[derive(Args, Debug)]
pub struct ViewArgs {
    /// page: post + comment views of one page; multipage: co-like +
    /// mutual-comment-like views over the pages' common users
    #[arg(long, value_enum, default_value_t = ViewMode::Page)]
    pub views: ViewMode,
    /// Skip posts/comments with more distinct likers than this
    #[arg(long, value_name = "N")]
    pub max_likers: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViewMode {
    Page,
    Multipage,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectorArg {
    Multilevel,
    Lpa,
}

impl From<DetectorArg> for mvcd_core::Detector {
    fn from(d: DetectorArg) -> Self {
        match d {
            DetectorArg::Multilevel => mvcd_core::Detector::MultiLevel,
            DetectorArg::Lpa => mvcd_core::Detector::Lpa,
        }
    }
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub filter: FilterArgsGroup,
    #[command(flatten)]
    pub view: ViewArgs,
    /// Weight of view 1; view 2 gets 1 - alpha
    #[arg(long, value_name = "F", default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = DetectorArg::Multilevel)]
    pub detector: DetectorArg,
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Output directory for the partition and summary files
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Score an externally computed partition on the same fused graph
    #[arg(long, value_name = "PATH")]
    pub score_partition: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub filter: FilterArgsGroup,
    #[command(flatten)]
    pub view: ViewArgs,
    /// Grid resolution; candidate alphas are multiples of this
    #[arg(long, value_name = "F", default_value_t = 0.2)]
    pub grid_step: f64,
    /// Keep the pure single-view endpoints in the grid
    #[arg(long, value_name = "BOOL", default_value_t = true, action = clap::ArgAction::Set)]
    pub include_endpoints: bool,
    #[arg(long, value_enum, default_value_t = DetectorArg::Multilevel)]
    pub detector: DetectorArg,
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Output directory for the sweep report and selected partition
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct HistArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory for the histogram files
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Node count (or set `n` in --spec-file)
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,
    /// Planted community count
    #[arg(long, value_name = "K")]
    pub communities: Option<usize>,
    /// Within-community edge probability
    #[arg(long, value_name = "F")]
    pub p_in: Option<f64>,
    /// Across-community edge probability
    #[arg(long, value_name = "F")]
    pub p_out: Option<f64>,
    /// Number of views
    #[arg(long, value_name = "V")]
    pub num_views: Option<usize>,
    /// Per-view inactive fractions, e.g. 0.3,0.3
    #[arg(long, value_name = "F,...", value_delimiter = ',', num_args = 1..)]
    pub inactive: Option<Vec<f64>>,
    /// Draw the per-view inactive sets disjointly
    #[arg(long)]
    pub complementary: bool,
    /// Key-value file with the same parameters (flags override it)
    #[arg(long, value_name = "PATH")]
    pub spec_file: Option<PathBuf>,
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Output directory for views, ground truth, and evaluation
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Run the weight sweep on the generated instance and report NMI
    #[arg(long)]
    pub evaluate: bool,
    #[arg(long, value_name = "F", default_value_t = 0.2)]
    pub grid_step: f64,
    #[arg(long, value_name = "BOOL", default_value_t = true, action = clap::ArgAction::Set)]
    pub include_endpoints: bool,
    #[arg(long, value_enum, default_value_t = DetectorArg::Multilevel)]
    pub detector: DetectorArg,
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Distinct likers for a post to count as popular
    #[arg(long, value_name = "N", default_value_t = 2)]
    pub min_post_likers: usize,
    /// Distinct likers for a comment to count as popular
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub min_comment_likers: usize,
    /// Output directory for the per-page filter artifacts
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}
