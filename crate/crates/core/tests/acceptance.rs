//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p steiner-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{apsp_mst_weight, brute_force_steiner, instance, voronoi_oracle, within_bound, Instance};
use steiner_core::engine::EngineMetrics;
use steiner_core::generate::barabasi_albert;
use steiner_core::graph::synthesize_weights;
use steiner_core::seedsel::{select_seeds, SeedSpec, SeedStrategy};
use steiner_core::{
    apsp_seeds, compute_voronoi_cells, exact_steiner, kmb_steiner, mehlhorn_steiner, phase, solve_steiner,
    validate_tree, EngineConfig, ExactLimits, Graph, Lanes, QueueDiscipline, Tree, VertexId,
};

const BOUND_INSTANCES: u64 = 500;
const BOUND_TIME_LIMIT: Duration = Duration::from_secs(120);
const MEAN_RATIO_LIMIT: f64 = 1.30;
const ORACLE_INSTANCES: u64 = 200;
const MST_INSTANCES: u64 = 200;
const INVARIANCE_INSTANCES: u64 = 50;
const AGREEMENT_INSTANCES: u64 = 1000;
const LARGE_VERTICES: usize = 50_000;
const LARGE_ATTACH: usize = 8;
const LARGE_W_MAX: u64 = 5000;
const LARGE_SEEDS: usize = 100;
const LARGE_RUNS: u64 = 10;
const LARGE_TIME_LIMIT: Duration = Duration::from_secs(300);
const SELF_CHECK_INSTANCES: u64 = 100;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

/// Trees collected for the validity criterion.
#[derive(Default)]
struct Produced {
    checked: usize,
    failures: Vec<String>,
}

impl Produced {
    fn check(&mut self, label: &str, tree: &Tree, seeds: &[VertexId], graph: &Graph) {
        self.checked += 1;
        let report = validate_tree(tree, seeds, graph);
        if !report.all_passed() {
            self.failures.push(format!("{label}: {report}"));
        }
    }
}

fn median(values: &mut [u64]) -> u64 {
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2
    }
}

fn bound_instance(i: u64) -> Instance {
    instance(0xb0_0000 + i, 8..=30, 3..=8, 20)
}

fn approximation(produced: &mut Produced) -> (Outcome, Outcome) {
    let started = Instant::now();
    let mut violations = Vec::new();
    let mut ratio_sum = 0.0;
    let mut worst: f64 = 1.0;
    for i in 0..BOUND_INSTANCES {
        let inst = bound_instance(i);
        let k = inst.seeds.len();
        let (d_min, optimal) = exact_steiner(&inst.graph, &inst.seeds, ExactLimits::default()).expect("exact oracle");
        produced.check(&format!("exact #{i}"), &optimal, &inst.seeds, &inst.graph);
        let voronoi = solve_steiner(&inst.graph, &inst.seeds, &EngineConfig::default()).expect("voronoi").tree;
        let kmb = kmb_steiner(&inst.graph, &inst.seeds).expect("kmb");
        let mehlhorn = mehlhorn_steiner(&inst.graph, &inst.seeds).expect("mehlhorn");
        for (name, tree) in [("voronoi", &voronoi), ("kmb", &kmb), ("mehlhorn", &mehlhorn)] {
            produced.check(&format!("{name} #{i}"), tree, &inst.seeds, &inst.graph);
            let d = tree.total_distance();
            if d < d_min || !within_bound(d, d_min, k) {
                violations.push(format!("{name} #{i}: D={d} D_min={d_min} |S|={k}"));
            }
        }
        let ratio = voronoi.total_distance() as f64 / d_min as f64;
        ratio_sum += ratio;
        worst = worst.max(ratio);
    }
    let elapsed = started.elapsed();
    let mean = ratio_sum / BOUND_INSTANCES as f64;
    let bound = Outcome {
        id: 1,
        title: "approximation bound",
        passed: violations.is_empty() && elapsed <= BOUND_TIME_LIMIT,
        detail: format!(
            "{} violations over {} trees; {:.1}s (limit {}s){}",
            violations.len(),
            3 * BOUND_INSTANCES,
            elapsed.as_secs_f64(),
            BOUND_TIME_LIMIT.as_secs(),
            violations.first().map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    };
    let quality = Outcome {
        id: 2,
        title: "approximation quality",
        passed: mean <= MEAN_RATIO_LIMIT,
        detail: format!("mean D/D_min = {mean:.4} (limit {MEAN_RATIO_LIMIT}), max {worst:.4}"),
    };
    (bound, quality)
}

fn oracle_equivalence() -> Outcome {
    let configs = [
        EngineConfig::new(1, QueueDiscipline::Fifo, Lanes::Single),
        EngineConfig::new(1, QueueDiscipline::MinPriority, Lanes::Single),
        EngineConfig::new(4, QueueDiscipline::Fifo, Lanes::Single),
        EngineConfig::new(4, QueueDiscipline::MinPriority, Lanes::Single),
        EngineConfig::new(4, QueueDiscipline::Fifo, Lanes::PerPartition),
        EngineConfig::new(4, QueueDiscipline::MinPriority, Lanes::PerPartition),
    ];
    let mut mismatches = Vec::new();
    for i in 0..ORACLE_INSTANCES {
        let inst = instance(0x0c_0000 + i, 8..=200, 1..=12, 100);
        let expected = voronoi_oracle(&inst.graph, &inst.seeds);
        for config in &configs {
            let states = compute_voronoi_cells(&inst.graph, &inst.seeds, config, &mut EngineMetrics::new())
                .expect("voronoi");
            let bad = states.iter().enumerate().filter(|&(v, s)| Some((s.dist, s.src, s.pred)) != expected[v]).count();
            if bad > 0 {
                mismatches.push(format!("#{i} P={} {}: {bad} vertices", config.partition_count, config.discipline.name()));
            }
        }
    }
    Outcome {
        id: 3,
        title: "voronoi labels equal multi-source Dijkstra",
        passed: mismatches.is_empty(),
        detail: format!(
            "{} mismatching runs of {}{}",
            mismatches.len(),
            ORACLE_INSTANCES as usize * configs.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    }
}

fn mst_weight_theorem(produced: &mut Produced) -> Outcome {
    let mut mismatches = Vec::new();
    for i in 0..MST_INSTANCES {
        let inst = instance(0x4d_0000 + i, 8..=120, 2..=20, 50);
        let sol = solve_steiner(&inst.graph, &inst.seeds, &EngineConfig::default()).expect("voronoi");
        produced.check(&format!("mst #{i}"), &sol.tree, &inst.seeds, &inst.graph);
        let (got, want) = (sol.mst_weight(), apsp_mst_weight(&inst.graph, &inst.seeds));
        if got != want {
            mismatches.push(format!("#{i}: {got} vs {want}"));
        }
    }
    Outcome {
        id: 4,
        title: "MST of bridged seed graph equals MST of APSP seed graph",
        passed: mismatches.is_empty(),
        detail: format!(
            "{} mismatches over {MST_INSTANCES} instances{}",
            mismatches.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    }
}

fn scheduling_invariance(produced: &mut Produced) -> Outcome {
    let mut differing = Vec::new();
    for i in 0..INVARIANCE_INSTANCES {
        let inst = instance(0x5c_0000 + i, 20..=300, 2..=25, 100);
        let k = inst.seeds.len();
        let mut reference: Option<String> = None;
        for p in [1, 2, 4, 8] {
            for d in [QueueDiscipline::Fifo, QueueDiscipline::MinPriority] {
                let tree = solve_steiner(&inst.graph, &inst.seeds, &EngineConfig::new(p, d, Lanes::PerPartition))
                    .expect("voronoi")
                    .tree;
                produced.check(&format!("invariance #{i} P={p} {}", d.name()), &tree, &inst.seeds, &inst.graph);
                let text = tree.to_text(k);
                match &reference {
                    None => reference = Some(text),
                    Some(r) if *r != text => differing.push(format!("#{i} P={p} {}", d.name())),
                    Some(_) => {}
                }
            }
        }
    }
    Outcome {
        id: 5,
        title: "scheduling invariance",
        passed: differing.is_empty(),
        detail: format!(
            "{} differing trees over {} runs{}",
            differing.len(),
            INVARIANCE_INSTANCES * 8,
            differing.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    }
}

fn sequential_agreement(produced: &mut Produced) -> Outcome {
    let mut mismatches = Vec::new();
    for i in 0..AGREEMENT_INSTANCES {
        let inst = instance(0x6a_0000 + i, 4..=40, 1..=10, 20);
        let parallel = solve_steiner(&inst.graph, &inst.seeds, &EngineConfig::new(2, QueueDiscipline::Fifo, Lanes::Single))
            .expect("voronoi")
            .tree;
        let sequential = mehlhorn_steiner(&inst.graph, &inst.seeds).expect("mehlhorn");
        produced.check(&format!("agreement voronoi #{i}"), &parallel, &inst.seeds, &inst.graph);
        produced.check(&format!("agreement mehlhorn #{i}"), &sequential, &inst.seeds, &inst.graph);
        if parallel.total_distance() != sequential.total_distance() {
            mismatches.push(format!("#{i}: {} vs {}", parallel.total_distance(), sequential.total_distance()));
        }
    }
    Outcome {
        id: 6,
        title: "sequential Mehlhorn agrees with the pipeline",
        passed: mismatches.is_empty(),
        detail: format!(
            "{} mismatches over {AGREEMENT_INSTANCES} instances{}",
            mismatches.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    }
}

fn large_graph() -> Graph {
    let topology = barabasi_albert::<u32>(LARGE_VERTICES, LARGE_ATTACH, 0x5ca1e).expect("generator");
    synthesize_weights(&topology, 1, LARGE_W_MAX, 0x5ca1e).expect("weights")
}

fn large_seeds(graph: &Graph, run: u64) -> Vec<VertexId> {
    let spec = SeedSpec { strategy: SeedStrategy::UniformRandom, count: LARGE_SEEDS, rng_seed: run };
    select_seeds(graph, &spec).expect("seeds")
}

fn message_efficiency(graph: &Graph, produced: &mut Produced) -> Outcome {
    let started = Instant::now();
    let mut fifo = Vec::new();
    let mut priority = Vec::new();
    for run in 0..LARGE_RUNS {
        let seeds = large_seeds(graph, run);
        for (discipline, sink) in [(QueueDiscipline::Fifo, &mut fifo), (QueueDiscipline::MinPriority, &mut priority)] {
            let sol = solve_steiner(graph, &seeds, &EngineConfig::new(4, discipline, Lanes::PerPartition))
                .expect("voronoi");
            produced.check(&format!("large run {run} {}", discipline.name()), &sol.tree, &seeds, graph);
            sink.push(sol.metrics.phase(phase::VORONOI_CELL).expect("phase recorded").messages_sent);
        }
    }
    let elapsed = started.elapsed();
    let (fifo_median, priority_median) = (median(&mut fifo), median(&mut priority));
    let ratio = fifo_median as f64 / priority_median as f64;
    Outcome {
        id: 7,
        title: "priority scheduling sends no more messages than FIFO",
        passed: priority_median <= fifo_median && elapsed <= LARGE_TIME_LIMIT,
        detail: format!(
            "median voronoi messages fifo={fifo_median} priority={priority_median}, fifo/priority = {ratio:.2}x; \
             |V|={} |E|={} {LARGE_RUNS} runs in {:.1}s (limit {}s)",
            graph.vertex_count(),
            graph.edge_count(),
            elapsed.as_secs_f64(),
            LARGE_TIME_LIMIT.as_secs()
        ),
    }
}

fn voronoi_vs_apsp(graph: &Graph) -> Outcome {
    let seeds = large_seeds(graph, 0);
    let config = EngineConfig::new(1, QueueDiscipline::MinPriority, Lanes::Single);
    let started = Instant::now();
    compute_voronoi_cells(graph, &seeds, &config, &mut EngineMetrics::new()).expect("voronoi");
    let voronoi = started.elapsed();
    let started = Instant::now();
    apsp_seeds(graph, &seeds).expect("apsp");
    let apsp = started.elapsed();
    Outcome {
        id: 8,
        title: "voronoi labelling is faster than seed APSP",
        passed: voronoi < apsp,
        detail: format!(
            "voronoi {:.1} ms, apsp {:.1} ms ({:.1}x)",
            voronoi.as_secs_f64() * 1e3,
            apsp.as_secs_f64() * 1e3,
            apsp.as_secs_f64() / voronoi.as_secs_f64()
        ),
    }
}

fn exact_self_check() -> Outcome {
    let mut mismatches = Vec::new();
    for i in 0..SELF_CHECK_INSTANCES {
        let inst = instance(0xe0_0000 + i, 2..=9, 1..=4, 20);
        let (d, _) = exact_steiner(&inst.graph, &inst.seeds, ExactLimits::default()).expect("exact oracle");
        let brute = brute_force_steiner(&inst.graph, &inst.seeds);
        if d != brute {
            mismatches.push(format!("#{i}: {d} vs {brute}"));
        }
    }
    Outcome {
        id: 10,
        title: "exact oracle equals brute force",
        passed: mismatches.is_empty(),
        detail: format!(
            "{} mismatches over {SELF_CHECK_INSTANCES} instances{}",
            mismatches.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    }
}

fn main() -> ExitCode {
    let mut produced = Produced::default();
    let mut outcomes = Vec::new();
    let (bound, quality) = approximation(&mut produced);
    outcomes.extend([bound, quality]);
    outcomes.push(oracle_equivalence());
    outcomes.push(mst_weight_theorem(&mut produced));
    outcomes.push(scheduling_invariance(&mut produced));
    outcomes.push(sequential_agreement(&mut produced));
    let graph = large_graph();
    outcomes.push(message_efficiency(&graph, &mut produced));
    outcomes.push(voronoi_vs_apsp(&graph));
    outcomes.push(Outcome {
        id: 9,
        title: "every produced tree is valid",
        passed: produced.failures.is_empty(),
        detail: format!(
            "{} invalid of {} trees{}",
            produced.failures.len(),
            produced.checked,
            produced.failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    });
    outcomes.push(exact_self_check());
    outcomes.sort_by_key(|o| o.id);

    for o in &outcomes {
        println!("[{}] {:>2} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
