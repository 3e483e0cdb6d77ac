//! Interaction-event log parsing, dataset statistics, and the
//! popular-content / active-user filters.
//!
//! The event log is line-delimited UTF-8 with 7 tab-separated columns:
//!
//! ```text
//! kind<TAB>page_id<TAB>post_id<TAB>comment_id<TAB>actor_id<TAB>author_id<TAB>timestamp
//! ```
//!
//! `kind` is one of `POST_LIKE`, `COMMENT`, `COMMENT_LIKE`; inapplicable
//! optional fields carry a literal `-`. Lines starting with `#` and blank
//! lines are ignored. Malformed lines become diagnostics, not errors,
//! unless strict mode is requested.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, BufRead};

use thiserror::Error;

/// One user action on a page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionEvent {
    pub kind: EventKind,
    pub page_id: String,
    pub post_id: String,
    /// Required for COMMENT and COMMENT_LIKE.
    pub comment_id: Option<String>,
    /// The acting user.
    pub actor_id: String,
    /// Comment author. Equals `actor_id` on COMMENT events; optionally names
    /// the liked comment's author on COMMENT_LIKE events.
    pub author_id: Option<String>,
    /// Seconds since epoch.
    pub timestamp: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    PostLike,
    Comment,
    CommentLike,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::PostLike => "POST_LIKE",
            EventKind::Comment => "COMMENT",
            EventKind::CommentLike => "COMMENT_LIKE",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a diagnostic is about; only data corruption upgrades to an error
/// in strict mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// Line could not be parsed and was skipped.
    Malformed,
    /// Event kept, but it references data absent from the ingested set.
    ReferentialIntegrity,
    /// Input contained no events at all.
    EmptyInput,
}

/// Non-fatal parse or validation finding, with the 1-based source line
/// when one applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn malformed(line: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            kind: DiagnosticKind::Malformed,
            line: Some(line),
            message: message.into(),
        }
    }

    /// True for the kinds strict mode refuses to accept.
    pub fn is_corruption(&self) -> bool {
        matches!(
            self.kind,
            DiagnosticKind::Malformed | DiagnosticKind::ReferentialIntegrity
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("strict mode: {0}")]
    Strict(Diagnostic),
    #[error("common_users needs at least 2 datasets, got {0}")]
    TooFewDatasets(usize),
    #[error("event page_id `{found}` does not match dataset page `{expected}`")]
    PageMismatch { expected: String, found: String },
}

/// Distinct-liker thresholds of the popularity filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActivityFilterConfig {
    /// A post is popular when at least this many distinct users liked it.
    pub min_post_likers: usize,
    /// A comment is popular when at least this many distinct users liked it.
    pub min_comment_likers: usize,
}

impl Default for ActivityFilterConfig {
    fn default() -> Self {
        ActivityFilterConfig {
            min_post_likers: 2,
            min_comment_likers: 1,
        }
    }
}

/// All events of one page plus the indexes the view builders consume.
#[derive(Debug, Clone, Default)]
pub struct PageDataset {
    page_id: String,
    events: Vec<InteractionEvent>,
    actors: BTreeSet<String>,
    posts: BTreeSet<String>,
    post_likers: BTreeMap<String, BTreeSet<String>>,
    comment_likers: BTreeMap<String, BTreeSet<String>>,
    comment_authors: BTreeMap<String, String>,
    comment_count: usize,
    like_count: usize,
}

impl PageDataset {
    /// Builds a dataset from pre-parsed events. Every event must belong to
    /// `page_id`. Referential findings are silently tolerated here; use
    /// [`parse_events`] to collect them as diagnostics.
    pub fn from_events(
        page_id: impl Into<String>,
        events: Vec<InteractionEvent>,
    ) -> Result<Self, IngestError> {
        let page_id = page_id.into();
        let mut d = PageDataset {
            page_id: page_id.clone(),
            ..Default::default()
        };
        for ev in events {
            if ev.page_id != page_id {
                return Err(IngestError::PageMismatch {
                    expected: page_id,
                    found: ev.page_id,
                });
            }
            d.index_event(&ev);
            d.events.push(ev);
        }
        Ok(d)
    }

    fn index_event(&mut self, ev: &InteractionEvent) {
        self.actors.insert(ev.actor_id.clone());
        self.posts.insert(ev.post_id.clone());
        match ev.kind {
            EventKind::PostLike => {
                self.like_count += 1;
                self.post_likers
                    .entry(ev.post_id.clone())
                    .or_default()
                    .insert(ev.actor_id.clone());
            }
            EventKind::Comment => {
                self.comment_count += 1;
                let cid = ev.comment_id.clone().expect("validated at parse");
                self.comment_authors
                    .entry(cid)
                    .or_insert_with(|| ev.actor_id.clone());
            }
            EventKind::CommentLike => {
                self.like_count += 1;
                let cid = ev.comment_id.clone().expect("validated at parse");
                self.comment_likers
                    .entry(cid.clone())
                    .or_default()
                    .insert(ev.actor_id.clone());
                // A like may name the comment's author; use it when the
                // COMMENT event itself is missing from the ingested window.
                if let Some(author) = &ev.author_id {
                    self.comment_authors
                        .entry(cid)
                        .or_insert_with(|| author.clone());
                }
            }
        }
    }

    pub fn page_id(&self) -> &str {
        &self.page_id
    }

    pub fn events(&self) -> &[InteractionEvent] {
        &self.events
    }

    /// Distinct acting users.
    pub fn actors(&self) -> &BTreeSet<String> {
        &self.actors
    }

    /// post id -> distinct likers.
    pub fn post_likers(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.post_likers
    }

    /// comment id -> distinct likers.
    pub fn comment_likers(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.comment_likers
    }

    /// comment id -> author.
    pub fn comment_authors(&self) -> &BTreeMap<String, String> {
        &self.comment_authors
    }
}

/// Counts mirroring the per-page statistics table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetStats {
    pub users: usize,
    pub posts: usize,
    pub comments: usize,
    pub likes: usize,
}

/// Users = distinct actors, posts = distinct post ids, comments = COMMENT
/// events, likes = POST_LIKE + COMMENT_LIKE events.
pub fn dataset_stats(d: &PageDataset) -> DatasetStats {
    DatasetStats {
        users: d.actors.len(),
        posts: d.posts.len(),
        comments: d.comment_count,
        likes: d.like_count,
    }
}

/// Content passing the distinct-liker thresholds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PopularContent {
    pub posts: BTreeSet<String>,
    pub comments: BTreeSet<String>,
}

/// Posts liked by at least `min_post_likers` distinct users and comments
/// liked by at least `min_comment_likers` distinct users.
pub fn popular_content(d: &PageDataset, cfg: &ActivityFilterConfig) -> PopularContent {
    PopularContent {
        posts: d
            .post_likers
            .iter()
            .filter(|(_, likers)| likers.len() >= cfg.min_post_likers)
            .map(|(id, _)| id.clone())
            .collect(),
        comments: d
            .comment_likers
            .iter()
            .filter(|(_, likers)| likers.len() >= cfg.min_comment_likers)
            .map(|(id, _)| id.clone())
            .collect(),
    }
}

/// Users who liked a popular post, authored a popular comment, or liked a
/// popular comment (any of the three).
pub fn active_users(d: &PageDataset, cfg: &ActivityFilterConfig) -> BTreeSet<String> {
    let popular = popular_content(d, cfg);
    let mut active = BTreeSet::new();
    for post in &popular.posts {
        if let Some(likers) = d.post_likers.get(post) {
            active.extend(likers.iter().cloned());
        }
    }
    for comment in &popular.comments {
        if let Some(author) = d.comment_authors.get(comment) {
            active.insert(author.clone());
        }
        if let Some(likers) = d.comment_likers.get(comment) {
            active.extend(likers.iter().cloned());
        }
    }
    active
}

/// Intersection of the datasets' distinct actors. Requires at least two
/// datasets.
pub fn common_users(datasets: &[PageDataset]) -> Result<BTreeSet<String>, IngestError> {
    if datasets.len() < 2 {
        return Err(IngestError::TooFewDatasets(datasets.len()));
    }
    let mut common = datasets[0].actors.clone();
    for d in &datasets[1..] {
        common = common.intersection(&d.actors).cloned().collect();
    }
    Ok(common)
}

/// Result of a lenient parse: per-page datasets plus everything worth
/// reporting about the input.
#[derive(Debug, Default)]
pub struct ParseOutcome {
    pub datasets: Vec<PageDataset>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses one event line. Returns `Ok(None)` for `#` comment lines and
/// blank lines, and a message describing the defect otherwise.
pub fn parse_line(line: &str) -> Result<Option<InteractionEvent>, String> {
    let line = line.trim_end_matches(['\r', '\n']);
    if line.is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 7 {
        return Err(format!("expected 7 tab-separated columns, got {}", cols.len()));
    }
    let kind = match cols[0] {
        "POST_LIKE" => EventKind::PostLike,
        "COMMENT" => EventKind::Comment,
        "COMMENT_LIKE" => EventKind::CommentLike,
        other => return Err(format!("unknown event kind `{other}`")),
    };
    let opt = |s: &str| {
        if s == "-" {
            None
        } else {
            Some(s.to_string())
        }
    };
    let required = |s: &str, name: &str| -> Result<String, String> {
        if s == "-" || s.is_empty() {
            Err(format!("missing required field `{name}`"))
        } else {
            Ok(s.to_string())
        }
    };
    let page_id = required(cols[1], "page_id")?;
    let post_id = required(cols[2], "post_id")?;
    let comment_id = opt(cols[3]);
    let actor_id = required(cols[4], "actor_id")?;
    let author_id = opt(cols[5]);
    let timestamp: i64 = cols[6]
        .parse()
        .map_err(|_| format!("invalid timestamp `{}`", cols[6]))?;

    match kind {
        EventKind::PostLike => {
            if comment_id.is_some() {
                return Err("POST_LIKE must not carry a comment_id".into());
            }
            if author_id.is_some() {
                return Err("POST_LIKE must not carry an author_id".into());
            }
        }
        EventKind::Comment => {
            if comment_id.is_none() {
                return Err("COMMENT requires a comment_id".into());
            }
            // On a COMMENT the actor is the author; a differing author
            // column means the record is inconsistent.
            if let Some(a) = &author_id {
                if *a != actor_id {
                    return Err(format!(
                        "COMMENT author_id `{a}` does not match actor_id `{actor_id}`"
                    ));
                }
            }
        }
        EventKind::CommentLike => {
            if comment_id.is_none() {
                return Err("COMMENT_LIKE requires a comment_id".into());
            }
        }
    }
    let author_id = match kind {
        EventKind::Comment => Some(actor_id.clone()),
        _ => author_id,
    };
    Ok(Some(InteractionEvent {
        kind,
        page_id,
        post_id,
        comment_id,
        actor_id,
        author_id,
        timestamp,
    }))
}

/// Groups parsed events into per-page datasets (sorted by page id) and runs
/// the referential checks. `lines` pairs each event with its source line.
pub fn build_datasets(events: Vec<(usize, InteractionEvent)>) -> ParseOutcome {
    let mut diagnostics = Vec::new();
    let mut by_page: BTreeMap<String, Vec<(usize, InteractionEvent)>> = BTreeMap::new();
    for (line, ev) in events {
        by_page.entry(ev.page_id.clone()).or_default().push((line, ev));
    }
    let mut datasets = Vec::with_capacity(by_page.len());
    for (page, evs) in by_page {
        let known_comments: BTreeSet<&str> = evs
            .iter()
            .filter(|(_, e)| e.kind == EventKind::Comment)
            .filter_map(|(_, e)| e.comment_id.as_deref())
            .collect();
        for (line, ev) in &evs {
            if ev.kind == EventKind::CommentLike {
                let cid = ev.comment_id.as_deref().expect("validated at parse");
                if !known_comments.contains(cid) {
                    diagnostics.push(Diagnostic {
                        kind: DiagnosticKind::ReferentialIntegrity,
                        line: Some(*line),
                        message: format!(
                            "COMMENT_LIKE on page `{page}` references unknown comment `{cid}`"
                        ),
                    });
                }
            }
        }
        let dataset =
            PageDataset::from_events(page, evs.into_iter().map(|(_, e)| e).collect())
                .expect("events grouped by page");
        datasets.push(dataset);
    }
    ParseOutcome {
        datasets,
        diagnostics,
    }
}

/// Lenient parse of one event-log stream. Malformed lines and referential
/// violations become diagnostics; only I/O failures are errors.
pub fn parse_events<R: BufRead>(reader: R) -> Result<ParseOutcome, IngestError> {
    let mut events = Vec::new();
    let mut diagnostics = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        match parse_line(&line) {
            Ok(Some(ev)) => events.push((idx + 1, ev)),
            Ok(None) => {}
            Err(msg) => diagnostics.push(Diagnostic::malformed(idx + 1, msg)),
        }
    }
    let empty = events.is_empty();
    let mut outcome = build_datasets(events);
    let mut all = diagnostics;
    all.append(&mut outcome.diagnostics);
    all.sort_by_key(|d| d.line);
    if empty {
        all.push(Diagnostic {
            kind: DiagnosticKind::EmptyInput,
            line: None,
            message: "input contains no events".into(),
        });
    }
    outcome.diagnostics = all;
    Ok(outcome)
}

/// Renders an event back into the 7-column log line it parses from.
pub fn format_event(ev: &InteractionEvent) -> String {
    let opt = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
        ev.kind,
        ev.page_id,
        ev.post_id,
        opt(&ev.comment_id),
        ev.actor_id,
        match ev.kind {
            // POST_LIKE carries no author column by format
            EventKind::PostLike => "-".into(),
            _ => opt(&ev.author_id),
        },
        ev.timestamp
    )
}

/// Strict parse: the first corruption diagnostic (malformed line or broken
/// reference) becomes an error.
pub fn parse_events_strict<R: BufRead>(reader: R) -> Result<Vec<PageDataset>, IngestError> {
    let outcome = parse_events(reader)?;
    if let Some(d) = outcome.diagnostics.iter().find(|d| d.is_corruption()) {
        return Err(IngestError::Strict(d.clone()));
    }
    Ok(outcome.datasets)
}
