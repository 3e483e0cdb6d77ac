//! Acceptance suite: every release-gating property of the toolkit, one
//! test per criterion. Run with `--nocapture` to see the per-criterion
//! PASS lines and measured numbers.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use mvcd_core::detect::{
    brute_force_best_partition, louvain_with_phases, sweep_detect, Detector,
};
use mvcd_core::fusion::{alpha_grid, fuse, WeightVector};
use mvcd_core::graph::Graph;
use mvcd_core::ingest::PageDataset;
use mvcd_core::synth::{generate, partition_similarity, PlantedSpec};
use mvcd_core::views::{make_viewset, ViewSet};
use mvcd_core::{
    active_users, louvain, lpa, modularity, popular_content, ActivityFilterConfig, Partition,
};

fn pass(criterion: &str, detail: String) {
    println!("[acceptance] {criterion}: PASS ({detail})");
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, weighted: bool) -> Graph {
    let mut g = Graph::with_users((0..n).map(|i| format!("u{i:02}"))).unwrap();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                let w = if weighted { rng.random_range(0.05..3.0) } else { 1.0 };
                g.add_edge_between(i, j, w).unwrap();
            }
        }
    }
    g
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Partition {
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n.max(1))).collect();
    Partition::from_labels(&labels)
}

/// Dense, from-scratch evaluation of the modularity definition: ordered
/// double loop over the full matrix. Kept independent of the library path.
fn dense_modularity(g: &Graph, p: &Partition) -> f64 {
    let n = g.node_count();
    let mut w = vec![vec![0.0f64; n]; n];
    for (a, b, weight) in g.edge_triples() {
        let i = g.node_id(&a).unwrap();
        let j = g.node_id(&b).unwrap();
        w[i][j] = weight;
        w[j][i] = weight;
    }
    let d: Vec<f64> = (0..n).map(|i| w[i].iter().sum()).collect();
    let two_m: f64 = d.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if p.label(i) == p.label(j) {
                q += w[i][j] - d[i] * d[j] / two_m;
            }
        }
    }
    q / two_m
}

fn barbell() -> Graph {
    let mut g = Graph::new();
    for (u, v) in [
        ("a", "b"), ("b", "c"), ("a", "c"),
        ("d", "e"), ("e", "f"), ("d", "f"),
        ("c", "d"),
    ] {
        g.add_edge(u, v, 1.0).unwrap();
    }
    g
}

fn triangle() -> Graph {
    let mut g = Graph::new();
    g.add_edge("a", "b", 1.0).unwrap();
    g.add_edge("b", "c", 1.0).unwrap();
    g.add_edge("a", "c", 1.0).unwrap();
    g
}

fn random_viewset(rng: &mut ChaCha8Rng, n: usize) -> ViewSet {
    let g1 = random_graph(rng, n, 0.3, false);
    let g2 = random_graph(rng, n, 0.3, false);
    make_viewset(vec![g1, g2], vec!["v1".into(), "v2".into()]).unwrap()
}

#[test]
fn c1_modularity_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0usize;
    for case in 0..200u64 {
        let n = 2 + (case as usize % 7); // n in 2..=8
        let p = [0.2, 0.5, 0.8][case as usize % 3];
        let g = random_graph(&mut rng, n, p, case % 2 == 0);
        for _ in 0..50 {
            let part = random_partition(&mut rng, n);
            let fast = modularity(&g, &part).unwrap();
            let dense = dense_modularity(&g, &part);
            assert!(
                (fast - dense).abs() < 1e-12,
                "case {case}: {fast} vs dense {dense}"
            );
            checked += 1;
        }
    }
    let (_, q) = brute_force_best_partition(&barbell()).unwrap();
    assert!((q - 5.0 / 14.0).abs() < 1e-12, "barbell optimum {q}");
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    pass(
        "criterion 1 (modularity oracle equivalence)",
        format!("{checked} evaluations, barbell Q = {q:.12}, {elapsed:?}"),
    );
}

#[test]
fn c2_analytic_anchors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut nonempty = 0usize;
    while nonempty < 100 {
        let n = 2 + rng.random_range(0..10);
        let g = random_graph(&mut rng, n, 0.4, true);
        if g.total_weight() == 0.0 {
            continue;
        }
        nonempty += 1;
        let q = modularity(&g, &Partition::all_in_one(n)).unwrap();
        assert_eq!(q, 0.0, "all-in-one must score exactly zero");
    }
    let q_tri = modularity(&triangle(), &Partition::singletons(3)).unwrap();
    assert!((q_tri - (-1.0 / 3.0)).abs() < 1e-12);
    let mut fuzzed = 0usize;
    for _ in 0..300 {
        let n = 1 + rng.random_range(0..12);
        let density = rng.random_range(0.0..1.0);
        let g = random_graph(&mut rng, n, density, true);
        let p = random_partition(&mut rng, n);
        let q = modularity(&g, &p).unwrap();
        assert!(
            (-1.0 - 1e-12..=1.0 + 1e-12).contains(&q),
            "Q out of range: {q}"
        );
        fuzzed += 1;
    }
    pass(
        "criterion 2 (analytic anchors)",
        format!("100 all-in-one graphs, triangle Q = {q_tri:.12}, {fuzzed} range checks"),
    );
}

#[test]
fn c3_fusion_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..100 {
        let n = 3 + (case % 8);
        let vs = random_viewset(&mut rng, n);
        let alpha = rng.random_range(0.05..0.95);
        let w = WeightVector::pair(alpha).unwrap();
        let fused = fuse(&vs, &w).unwrap();

        let iso_expected: BTreeSet<String> = vs.views()[0]
            .isolates()
            .intersection(&vs.views()[1].isolates())
            .cloned()
            .collect();
        assert_eq!(fused.isolates(), iso_expected, "case {case}");

        let union: BTreeSet<(String, String)> = vs
            .views()
            .iter()
            .flat_map(|v| v.edge_triples().into_iter().map(|(a, b, _)| (a, b)))
            .collect();
        let got: BTreeSet<(String, String)> = fused
            .edge_triples()
            .into_iter()
            .map(|(a, b, _)| (a, b))
            .collect();
        assert_eq!(got, union, "case {case}");

        for (endpoint, view) in [(1.0, 0), (0.0, 1)] {
            let w = WeightVector::pair(endpoint).unwrap();
            let single = fuse(&vs, &w).unwrap();
            assert_eq!(
                single.edge_triples(),
                vs.views()[view].edge_triples(),
                "endpoint {endpoint} must reproduce view {view} bit-exactly"
            );
        }
    }
    pass(
        "criterion 3 (fusion algebra)",
        "100 two-view sets: isolate intersection, edge union, exact endpoints".into(),
    );
}

#[test]
fn c4_scale_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..50 {
        let n = 3 + (case % 7);
        let g = random_graph(&mut rng, n, 0.5, true);
        let p = random_partition(&mut rng, n);
        let q = modularity(&g, &p).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let mut scaled = Graph::with_users(g.users().map(str::to_string)).unwrap();
            for (a, b, w) in g.edge_triples() {
                scaled.add_edge(&a, &b, w * c).unwrap();
            }
            let qs = modularity(&scaled, &p).unwrap();
            assert!((q - qs).abs() < 1e-12, "case {case} c={c}: {q} vs {qs}");
        }
    }
    // sweeping identical views is alpha-independent
    let mut rng2 = ChaCha8Rng::seed_from_u64(44);
    let g = random_graph(&mut rng2, 12, 0.4, false);
    let vs = make_viewset(vec![g.clone(), g], vec!["a".into(), "b".into()]).unwrap();
    let grid = alpha_grid(2, 0.2, true).unwrap();
    let result = sweep_detect(&vs, &grid, Detector::MultiLevel, 0).unwrap();
    let q0 = result.entries[0].modularity;
    for e in &result.entries {
        assert!((e.modularity - q0).abs() < 1e-12);
    }
    pass(
        "criterion 4 (scale invariance)",
        format!("50 graphs x 3 scales; identical-view sweep flat at Q = {q0:.6}"),
    );
}

#[test]
fn c5_isolate_reduction_and_nmi() {
    let started = Instant::now();
    let seeds = 20u64;
    let mut isolate_wins = 0usize;
    let mut nmi_wins = 0usize;
    for seed in 0..seeds {
        let spec = PlantedSpec {
            n: 1000,
            k_communities: 4,
            p_in: 0.05,
            p_out: 0.002,
            inactive_fraction: vec![0.3, 0.3],
            views: 2,
            complementary_inactive: true,
            seed,
        };
        let (vs, truth) = generate(&spec).unwrap();
        let fused = fuse(&vs, &WeightVector::uniform(2).unwrap()).unwrap();

        let view_isolates: Vec<usize> = vs.views().iter().map(|v| v.isolate_count()).collect();
        let smaller = *view_isolates.iter().min().unwrap();
        if fused.isolate_count() as f64 <= 0.10 * smaller as f64 {
            isolate_wins += 1;
        }

        let merged_nmi =
            partition_similarity(&louvain(&fused, seed), &truth).unwrap();
        let view_nmi: Vec<f64> = vs
            .views()
            .iter()
            .map(|v| partition_similarity(&louvain(v, seed), &truth).unwrap())
            .collect();
        let best_view = view_nmi.iter().cloned().fold(f64::MIN, f64::max);
        if merged_nmi >= best_view {
            nmi_wins += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        isolate_wins >= 19,
        "isolate reduction held in only {isolate_wins}/20 seeds"
    );
    assert!(nmi_wins >= 16, "merged NMI won in only {nmi_wins}/20 seeds");
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    pass(
        "criterion 5 (isolate reduction)",
        format!("isolates {isolate_wins}/20, NMI {nmi_wins}/20, {elapsed:?}"),
    );
}

#[test]
fn c6_multilevel_sanity() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for run in 0..50u64 {
        let n = 10 + (run as usize % 30);
        let g = random_graph(&mut rng, n, 0.25, run % 2 == 0);
        let trace = louvain_with_phases(&g, run).phase_modularity;
        for pair in trace.windows(2) {
            assert!(
                pair[1] >= pair[0] - 1e-9,
                "run {run}: phase Q dropped {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }
    for (name, g) in [("barbell", barbell()), ("triangle", triangle())] {
        let (best, best_q) = brute_force_best_partition(&g).unwrap();
        let p = louvain(&g, 0);
        assert!(p.same_grouping(&best), "{name} grouping");
        let q = modularity(&g, &p).unwrap();
        assert!((q - best_q).abs() < 1e-15, "{name}: {q} vs {best_q}");
    }
    pass(
        "criterion 6 (multi-level sanity)",
        "50 monotone phase traces; barbell and triangle match the oracle".into(),
    );
}

fn mvcd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvcd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn dir_snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    entries.sort();
    entries
}

#[test]
fn c7_determinism() {
    // detectors
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = random_graph(&mut rng, 60, 0.15, true);
    assert_eq!(louvain(&g, 9).labels(), louvain(&g, 9).labels());
    assert_eq!(lpa(&g, 9).labels(), lpa(&g, 9).labels());

    // subcommands, byte-for-byte
    let work = TempDir::new().unwrap();
    let log = work.path().join("log.tsv");
    fs::write(
        &log,
        "POST_LIKE\tcbs\tP1\t-\tu1\t-\t1\nPOST_LIKE\tcbs\tP1\t-\tu2\t-\t2\n\
         POST_LIKE\tcbs\tP1\t-\tu3\t-\t3\nPOST_LIKE\tcbs\tP2\t-\tu4\t-\t4\n\
         POST_LIKE\tcbs\tP2\t-\tu5\t-\t5\nCOMMENT\tcbs\tP1\tc1\tu4\tu4\t6\n\
         COMMENT_LIKE\tcbs\tP1\tc1\tu5\t-\t7\nCOMMENT_LIKE\tcbs\tP1\tc1\tu1\t-\t8\n",
    )
    .unwrap();
    let log = log.to_str().unwrap().to_string();
    let runs: Vec<(&str, Vec<String>)> = vec![
        ("stats", vec!["stats".into(), "--input".into(), log.clone()]),
        (
            "detect",
            vec!["detect".into(), "--input".into(), log.clone(), "--seed".into(), "1".into()],
        ),
        (
            "sweep",
            vec!["sweep".into(), "--input".into(), log.clone(), "--seed".into(), "1".into()],
        ),
        ("hist", vec!["hist".into(), "--input".into(), log.clone()]),
        (
            "synth",
            vec![
                "synth".into(), "--n".into(), "80".into(), "--communities".into(), "3".into(),
                "--p-in".into(), "0.3".into(), "--p-out".into(), "0.02".into(),
                "--inactive".into(), "0.2,0.2".into(), "--complementary".into(),
                "--evaluate".into(), "--seed".into(), "5".into(),
            ],
        ),
        ("filter", vec!["filter".into(), "--input".into(), log.clone()]),
    ];
    for (name, base_args) in runs {
        let needs_out = name != "stats";
        let mut snapshots = Vec::new();
        let mut stdouts = Vec::new();
        for attempt in 0..2 {
            let out_dir = work.path().join(format!("{name}{attempt}"));
            let mut args: Vec<String> = base_args.clone();
            if needs_out {
                args.push("--out".into());
                args.push(out_dir.to_str().unwrap().into());
            }
            let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
            let out = mvcd(&arg_refs);
            assert!(
                out.status.success(),
                "{name}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            stdouts.push(out.stdout.clone());
            if needs_out {
                // artifact bytes, ignoring the differing directory names
                snapshots.push(dir_snapshot(&out_dir));
            }
        }
        assert_eq!(stdouts[0], stdouts[1], "{name}: stdout differs");
        if needs_out {
            assert_eq!(snapshots[0], snapshots[1], "{name}: artifacts differ");
        }
    }
    pass(
        "criterion 7 (determinism)",
        "both detectors and all six subcommands byte-identical across reruns".into(),
    );
}

#[test]
fn c8_sweep_scales_linearly_in_edges() {
    let spec = |p_in: f64, p_out: f64| PlantedSpec {
        n: 2000,
        k_communities: 4,
        p_in,
        p_out,
        inactive_fraction: vec![0.0, 0.0],
        views: 2,
        complementary_inactive: false,
        seed: 8,
    };
    let (small_vs, _) = generate(&spec(0.01, 0.0005)).unwrap();
    let (big_vs, _) = generate(&spec(0.1, 0.005)).unwrap();
    let edges = |vs: &ViewSet| {
        fuse(vs, &WeightVector::uniform(2).unwrap())
            .unwrap()
            .edge_count()
    };
    let (small_m, big_m) = (edges(&small_vs), edges(&big_vs));
    let grid = alpha_grid(2, 0.2, true).unwrap();
    let time_sweep = |vs: &ViewSet| {
        let t = Instant::now();
        let r = sweep_detect(vs, &grid, Detector::MultiLevel, 0).unwrap();
        let el = t.elapsed();
        assert!(!r.entries.is_empty());
        el
    };
    // interleave the measurements so load drift hits both sides
    let mut small_times = Vec::new();
    let mut big_times = Vec::new();
    for _ in 0..3 {
        small_times.push(time_sweep(&small_vs));
        big_times.push(time_sweep(&big_vs));
    }
    small_times.sort();
    big_times.sort();
    let (t_small, t_big) = (small_times[1], big_times[1]);
    let ratio = t_big.as_secs_f64() / t_small.as_secs_f64().max(1e-9);
    assert!(
        ratio <= 30.0,
        "sweep time ratio {ratio:.1} for {small_m} -> {big_m} edges"
    );
    pass(
        "criterion 8 (near-linear sweep)",
        format!(
            "{small_m} edges: {t_small:?} median, {big_m} edges: {t_big:?} median, ratio {ratio:.1} <= 30"
        ),
    );
}

#[test]
fn c9_definition_fidelity() {
    // 8 users covering every qualification branch:
    //   P1 liked by u1,u2 (at threshold) / P2, P3 liked once (below)
    //   C1 authored by u4, liked by u5 (at threshold) / C2, C4 unliked
    let rows = [
        ("POST_LIKE", "P1", None, "u1"),
        ("POST_LIKE", "P1", None, "u2"),
        ("POST_LIKE", "P2", None, "u3"),
        ("COMMENT", "P1", Some("c1"), "u4"),
        ("COMMENT_LIKE", "P1", Some("c1"), "u5"),
        ("COMMENT", "P2", Some("c2"), "u6"),
        ("POST_LIKE", "P3", None, "u7"),
        ("COMMENT", "P1", Some("c4"), "u8"),
    ];
    let log: String = rows
        .iter()
        .enumerate()
        .map(|(i, (kind, post, cid, actor))| {
            let author = if *kind == "COMMENT" { actor } else { &"-" };
            format!(
                "{kind}\tp\t{post}\t{}\t{actor}\t{author}\t{i}\n",
                cid.unwrap_or("-")
            )
        })
        .collect();
    let outcome = mvcd_core::parse_events(log.as_bytes()).unwrap();
    assert!(outcome.diagnostics.is_empty());
    let d: &PageDataset = &outcome.datasets[0];
    let cfg = ActivityFilterConfig::default();

    let popular = popular_content(d, &cfg);
    let expect_set = |items: &[&str]| -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    };
    assert_eq!(popular.posts, expect_set(&["P1"]), "only P1 meets 2 likers");
    assert_eq!(popular.comments, expect_set(&["c1"]), "only c1 is liked");

    let active = active_users(d, &cfg);
    assert_eq!(
        active,
        expect_set(&["u1", "u2", "u4", "u5"]),
        "u1,u2 via popular post; u4 via authored popular comment; u5 via liked popular comment"
    );
    for excluded in ["u3", "u6", "u7", "u8"] {
        assert!(!active.contains(excluded), "{excluded} must not qualify");
    }
    pass(
        "criterion 9 (definition fidelity)",
        "popular = {P1, c1}; active = {u1, u2, u4, u5}; all branches covered".into(),
    );
}
