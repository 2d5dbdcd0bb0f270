//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any failed.

use std::collections::HashMap;
use std::io::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use alwabp_core::bounds::{preprocess, LpModelStats};
use alwabp_core::constructive::{assemble, run_all_96, score_worker, solve, station_load_tasks};
use alwabp_core::hga::{decode, evolve, seed_population, Decoder, Fitness};
use alwabp_core::instance::{
    generate, BaseInstance, GeneratorConfig, InfeasibilityDensity, Variability,
};
use alwabp_core::solution::validate_solution;
use alwabp_core::{
    BoundsReport, Direction, HgaParams, Instance, PriorityMatrix, PrioritySource, RuleConfig,
    SearchOptions, Solution, Station, TaskRule, Time, WorkerRule,
};
use alwabp_testkit::{
    line_is_feasible, lp, optimum, random_base, small_instances, tiny_a, OracleResult,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

const SMALL_COUNT: usize = 200;
const SMALL_SEED: u64 = 2024;

/// The oracle-sized instances with their optima, shared by criteria 1, 2, 6.
fn small() -> &'static [(Instance, OracleResult)] {
    static SMALL: OnceLock<Vec<(Instance, OracleResult)>> = OnceLock::new();
    SMALL.get_or_init(|| {
        small_instances(SMALL_COUNT, SMALL_SEED)
            .into_iter()
            .map(|inst| {
                let best = optimum(&inst).expect("builder keeps only feasible instances");
                (inst, best)
            })
            .collect()
    })
}

fn lines(sol: &Solution) -> Vec<(usize, Vec<usize>)> {
    sol.stations
        .iter()
        .map(|s| (s.worker, s.tasks.clone()))
        .collect()
}

fn check_line(inst: &Instance, sol: &Solution) -> Result<(), String> {
    line_is_feasible(inst, &lines(sol), sol.cycle).map_err(|e| format!("{}: {e}", inst.name()))?;
    ensure!(
        validate_solution(inst, sol).is_feasible(),
        "{}: checker rejects {sol}",
        inst.name()
    );
    Ok(())
}

fn generated(name: &str, n: usize, m: usize, seed: u64) -> Instance {
    let base = random_base(name, n, 30, seed);
    let cfg = GeneratorConfig {
        n_workers: m,
        variability: Variability::Low,
        density: InfeasibilityDensity::Low,
        seed,
    };
    generate(&base, &cfg).expect("low density is always reachable")
}

fn alwabp(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_alwabp"))
        .args(args)
        .output()
        .map_err(|e| format!("spawning alwabp: {e}"))?;
    ensure!(
        out.status.success(),
        "alwabp {} failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

/// CSV cells with timing columns (headers ending in `_s`) removed.
fn untimed(path: &Path) -> Result<Vec<Vec<String>>, String> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let keep: Vec<usize> = (0..headers.len())
        .filter(|&k| !headers[k].ends_with("_s"))
        .collect();
    let mut out = vec![keep.iter().map(|&k| headers[k].to_string()).collect()];
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        out.push(keep.iter().map(|&k| record[k].to_string()).collect());
    }
    Ok(out)
}

fn same_reports(a: &Path, b: &Path) -> Result<usize, String> {
    let mut names: Vec<_> = std::fs::read_dir(a)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for name in &names {
        ensure!(
            untimed(&a.join(name))? == untimed(&b.join(name))?,
            "{} differs between runs",
            name.to_string_lossy()
        );
    }
    Ok(names.len())
}

fn oracle_equivalence() -> Outcome {
    let data = small();
    let started = Instant::now();
    let mut hits = 0;
    for (inst, best) in data {
        for run in run_all_96(inst, &SearchOptions::default()).runs {
            let sol = run
                .solution
                .ok_or_else(|| format!("{}: {} found no line", inst.name(), run.config))?;
            ensure!(
                sol.cycle >= best.cycle,
                "{}: {} beats the optimum",
                inst.name(),
                run.config
            );
            check_line(inst, &sol)?;
        }
        let mut found = Time::MAX;
        for seed in 0..3 {
            let run = evolve(
                inst,
                &HgaParams {
                    seed,
                    ..HgaParams::default()
                },
            )
            .map_err(|e| e.to_string())?;
            let sol = run.solution();
            ensure!(
                sol.cycle >= best.cycle,
                "{}: HGA beats the optimum",
                inst.name()
            );
            check_line(inst, sol)?;
            found = found.min(sol.cycle);
        }
        hits += usize::from(found == best.cycle);
    }
    let secs = started.elapsed().as_secs_f64();
    ensure!(
        hits * 100 >= 95 * data.len(),
        "HGA optimal on only {hits}/{}",
        data.len()
    );
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!(
        "HGA optimal on {hits}/{}, no result below the optimum, {secs:.1}s",
        data.len()
    ))
}

fn bound_sandwich() -> Outcome {
    let data = small();
    let mut tight = 0;
    for (inst, best) in data {
        let report = BoundsReport::compute(inst, None);
        let lb = report.lc1.max(report.lc2).max(report.lc3);
        ensure!(
            lb <= best.cycle,
            "{}: bound {lb} above optimum {}",
            inst.name(),
            best.cycle
        );
        tight += usize::from(lb == best.cycle);
        ensure!(
            preprocess(inst, best.cycle).is_ok(),
            "{}: preprocessing rejects the optimum {}",
            inst.name(),
            best.cycle
        );
    }
    Ok(format!(
        "0 violations on {}, bound tight on {tight}",
        data.len()
    ))
}

fn hand_traces() -> Outcome {
    let inst = tiny_a();
    let report = BoundsReport::compute(&inst, None);
    ensure!(
        (report.lc1, report.lc2, report.lc3) == (2, 2, 2),
        "bounds {:?}",
        (report.lc1, report.lc2, report.lc3)
    );

    let source = PrioritySource::Rule(TaskRule::MaxPwMin);
    let sol = assemble(&inst, 2, source, WorkerRule::MinRlb, Direction::Forward)
        .map_err(|e| e.to_string())?;
    let expected = vec![Station::new(0, vec![0]), Station::new(1, vec![1, 2])];
    ensure!(
        sol.stations == expected && sol.cycle == 2,
        "trace gave {sol}"
    );

    let all = [0, 1, 2];
    let workers = [0, 1];
    let t1 = station_load_tasks(&inst, &all, &workers, 0, 2, source);
    let t2 = station_load_tasks(&inst, &all, &workers, 1, 2, source);
    let rlb = (
        score_worker(&inst, &all, &workers, 0, &t1, WorkerRule::MinRlb),
        score_worker(&inst, &all, &workers, 1, &t2, WorkerRule::MinRlb),
    );
    ensure!(rlb == (2.0, 9.0), "MinRLB scores {rlb:?}");
    let bwa = score_worker(&inst, &all, &workers, 0, &t1, WorkerRule::MinBwa);
    ensure!(bwa == 2.0, "BWA {bwa}");

    let fit = Fitness::of(&inst, &sol);
    ensure!(
        fit == Fitness {
            cycle: 2,
            norm_load: 1.0
        },
        "fitness {fit:?}"
    );
    let (_, decoded) =
        decode(&inst, &PriorityMatrix::constant(2, 3, 0.5), None).map_err(|e| e.to_string())?;
    ensure!(decoded.cycle == 2, "decode gave {decoded:?}");
    Ok("bounds 2/2/2, w1 then w2 at c=2, MinRLB 2 vs 9, BWA 2, l=1.0".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let inputs = dir.path().join("in");
    std::fs::create_dir(&inputs).map_err(|e| e.to_string())?;
    let mut bkv = String::from("instance,cycle\n");
    let mut instances = vec![tiny_a()];
    instances.extend((0..2).map(|k| generated(&format!("det{k}"), 12, 3, k)));
    instances.extend(small()[..3].iter().map(|(i, _)| i.clone()));
    for inst in &instances {
        inst.save(inputs.join(format!("{}.alwabp", inst.name())))
            .map_err(|e| e.to_string())?;
        let small_enough = inst.n_tasks() <= 8 && inst.n_workers() <= 4;
        let cycle = match small_enough.then(|| optimum(inst)).flatten() {
            Some(best) => best.cycle,
            None => BoundsReport::compute(inst, None).best,
        };
        bkv.push_str(&format!("{},{cycle}\n", inst.name()));
    }
    let bkv_path = dir.path().join("bkv.csv");
    std::fs::write(&bkv_path, bkv).map_err(|e| e.to_string())?;
    let input = inputs.to_str().unwrap();
    let bkv = bkv_path.to_str().unwrap();

    let mut compared = 0;
    for (cmd, extra) in [
        ("construct", &["--all-96"][..]),
        ("hga", &["--seeds", "3", "--seed", "42"][..]),
    ] {
        let outs: Vec<_> = (0..2)
            .map(|k| dir.path().join(format!("{cmd}{k}")))
            .collect();
        for out in &outs {
            let mut args = vec![cmd, input, "--bkv", bkv, "--out", out.to_str().unwrap()];
            args.extend_from_slice(extra);
            alwabp(&args)?;
        }
        compared += same_reports(&outs[0], &outs[1])?;
    }
    Ok(format!(
        "{compared} CSV files identical across two runs, timing columns excluded"
    ))
}

fn combinatorics() -> Outcome {
    ensure!(
        TaskRule::ALL.len() == 16,
        "{} task rules",
        TaskRule::ALL.len()
    );
    ensure!(
        WorkerRule::ALL.len() == 3,
        "{} worker rules",
        WorkerRule::ALL.len()
    );
    let mut configs: Vec<String> = RuleConfig::all().iter().map(ToString::to_string).collect();
    configs.sort();
    configs.dedup();
    ensure!(
        configs.len() == 96,
        "{} distinct configurations",
        configs.len()
    );

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("tiny-A.alwabp");
    tiny_a().save(&path).map_err(|e| e.to_string())?;
    let out = dir.path().join("out");
    alwabp(&[
        "construct",
        path.to_str().unwrap(),
        "--all-96",
        "--out",
        out.to_str().unwrap(),
    ])?;
    let rows = untimed(&out.join("construct.csv"))?;
    let per_config = rows[1..].iter().filter(|r| r[1] != "best-over-all").count();
    let best = rows.len() - 1 - per_config;
    ensure!(
        per_config == 96 && best == 1,
        "{per_config} rows and {best} best rows"
    );
    Ok("16 task rules, 3 worker rules, 96 configurations, 96 + 1 rows".into())
}

fn hga_dynamics() -> Outcome {
    let mut instances = vec![tiny_a()];
    instances.extend(small()[..30].iter().map(|(i, _)| i.clone()));
    for inst in &instances {
        let params = HgaParams::default();
        let run = evolve(inst, &params).map_err(|e| e.to_string())?;
        ensure!(
            run.log.windows(2).all(|w| w[1].fitness <= w[0].fitness),
            "{}: incumbent worsened",
            inst.name()
        );
        ensure!(
            run.log.iter().all(|e| e.population == params.p),
            "{}: population size drifted",
            inst.name()
        );
    }

    let params = HgaParams::with_population(10);
    for inst in &instances {
        let decoder = Decoder::new(inst, None);
        let pop = seed_population(&decoder, &params, &mut ChaCha8Rng::seed_from_u64(0))
            .map_err(|e| e.to_string())?;
        let mut rules: Vec<(Fitness, PriorityMatrix)> = TaskRule::ALL
            .iter()
            .map(|&rule| {
                let chrom = alwabp_core::constructive::rule_matrix(inst, rule, decoder.start());
                (decoder.decode(&chrom).expect("rule seed decodes").1, chrom)
            })
            .collect();
        rules.sort_by_key(|r| r.0);
        let kept: Vec<Fitness> = pop.iter().map(|i| i.fitness).collect();
        let best10: Vec<Fitness> = rules[..10].iter().map(|r| r.0).collect();
        ensure!(
            kept == best10,
            "{}: initial population is not the 10 best rule seeds",
            inst.name()
        );
        ensure!(
            pop.iter()
                .all(|i| rules.iter().any(|r| r.1 == i.chromosome)),
            "{}: non-rule individual in the initial population",
            inst.name()
        );
    }
    Ok(format!(
        "{} instances: non-worsening logs, constant population, p=10 keeps best rule seeds",
        instances.len()
    ))
}

fn speed_envelope() -> Outcome {
    let inst = generated("speed", 75, 19, 7);
    let config = RuleConfig::new(TaskRule::MaxPwMin, WorkerRule::MinRlb, Direction::Forward);
    let started = Instant::now();
    let sol = solve(&inst, config, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let secs = started.elapsed().as_secs_f64();
    check_line(&inst, &sol)?;
    ensure!(secs < 1.0, "took {secs:.3}s");
    Ok(format!(
        "75 tasks, 19 workers: cycle {} in {secs:.3}s",
        sol.cycle
    ))
}

fn rule_ordering() -> Outcome {
    let configs = RuleConfig::all();
    let mut sums = vec![0u64; configs.len()];
    let mut best_sum = 0u64;
    let count = 100;
    for k in 0..count {
        let inst = generated(&format!("order{k}"), 70, 10, 1000 + k as u64);
        let runs = run_all_96(&inst, &SearchOptions::default());
        for (sum, run) in sums.iter_mut().zip(&runs.runs) {
            *sum += run
                .cycle()
                .ok_or_else(|| format!("{}: {} failed", inst.name(), run.config))?;
        }
        best_sum += runs.best_overall().expect("some rule succeeds");
    }
    let avg = |s: u64| s as f64 / count as f64;
    let index = |t| {
        configs
            .iter()
            .position(|c| *c == RuleConfig::new(t, WorkerRule::MinRlb, Direction::Forward))
            .unwrap()
    };
    let pw = avg(sums[index(TaskRule::MaxPwMin)]);
    let time_min = avg(sums[index(TaskRule::MinTimeMin)]);
    ensure!(
        pw <= time_min,
        "MaxPW- average {pw} above MinTime- average {time_min}"
    );
    let best = avg(best_sum);
    let worst_gap = sums
        .iter()
        .map(|&s| avg(s) - best)
        .fold(f64::INFINITY, f64::min);
    ensure!(
        worst_gap >= 0.0,
        "best-over-all average {best} above some rule average"
    );
    Ok(format!(
        "MaxPW- {pw:.2} <= MinTime- {time_min:.2}; best-over-all {best:.2}"
    ))
}

fn generator_statistics() -> Outcome {
    let base = BaseInstance::new("flat", vec![30; 100], vec![]).map_err(|e| e.to_string())?;
    let cfg = GeneratorConfig {
        n_workers: 100,
        variability: Variability::Low,
        density: InfeasibilityDensity::None,
        seed: 9,
    };
    let inst = generate(&base, &cfg).map_err(|e| e.to_string())?;
    let draws: Vec<f64> = (0..100)
        .flat_map(|w| {
            inst.row(w)
                .iter()
                .map(|t| t.expect("no infeasible cells") as f64)
        })
        .collect();
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    let sigma = ((30.0f64 * 30.0 - 1.0) / 12.0 / draws.len() as f64).sqrt();
    ensure!(
        (mean - 15.5).abs() <= 3.0 * sigma,
        "mean {mean} outside 15.5 +- {:.3}",
        3.0 * sigma
    );
    ensure!(
        draws.iter().all(|&t| (1.0..=30.0).contains(&t)),
        "draw outside [1, 30]"
    );

    let mut checked = 0;
    for (n, m) in [(7, 3), (25, 4), (70, 10), (75, 19)] {
        let base = random_base("dens", n, 20, n as u64);
        for density in [InfeasibilityDensity::Low, InfeasibilityDensity::High] {
            for seed in 0..5 {
                let cfg = GeneratorConfig {
                    n_workers: m,
                    variability: Variability::High,
                    density,
                    seed,
                };
                let inst = generate(&base, &cfg).map_err(|e| e.to_string())?;
                let wanted = (density.percent() as f64 / 100.0 * (n * m) as f64).round() as usize;
                ensure!(
                    inst.infeasible_count() == wanted,
                    "{n}x{m} {density}: {} infeasible, expected {wanted}",
                    inst.infeasible_count()
                );
                checked += 1;
            }
        }
    }
    Ok(format!(
        "mean {mean:.3} within 3 sigma ({:.3}); {checked} density counts exact",
        3.0 * sigma
    ))
}

fn lp_export() -> Outcome {
    let inst = tiny_a();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("tiny-A.alwabp");
    inst.save(&path).map_err(|e| e.to_string())?;
    let milp = dir.path().join("tiny-A.lp");
    let relaxed = dir.path().join("tiny-A.relaxed.lp");
    alwabp(&[
        "export-lp",
        path.to_str().unwrap(),
        "--out",
        milp.to_str().unwrap(),
    ])?;
    alwabp(&[
        "export-lp",
        path.to_str().unwrap(),
        "--relaxed",
        "--out",
        relaxed.to_str().unwrap(),
    ])?;
    let read = |p: &Path| lp::parse(&std::fs::read_to_string(p).map_err(|e| e.to_string())?);
    let model = read(&milp)?;
    let relax = read(&relaxed)?;

    // Closed form: one x per station and capable pair, m^2 y, plus c.
    let (n, m) = (inst.n_tasks(), inst.n_workers());
    let capable_pairs: usize = (0..n).map(|i| inst.capable_workers(i).count()).sum();
    let expected = LpModelStats {
        x_vars: m * capable_pairs,
        y_vars: m * m,
        task_rows: n,
        worker_rows: m,
        station_rows: m,
        precedence_rows: inst.edges().len(),
        load_rows: m,
        link_rows: m * m,
    };
    ensure!(
        expected.variables() == 17 && expected.rows() == 15,
        "closed form {expected:?}"
    );
    let count_rows = |prefix: &str| {
        model
            .rows
            .iter()
            .filter(|r| r.name.starts_with(prefix))
            .count()
    };
    let found = LpModelStats {
        x_vars: model
            .variables()
            .iter()
            .filter(|v| v.starts_with("x_"))
            .count(),
        y_vars: model
            .variables()
            .iter()
            .filter(|v| v.starts_with("y_"))
            .count(),
        task_rows: count_rows("task_"),
        worker_rows: count_rows("worker_"),
        station_rows: count_rows("station_"),
        precedence_rows: count_rows("prec_"),
        load_rows: count_rows("load_"),
        link_rows: count_rows("link_"),
    };
    ensure!(found == expected, "file has {found:?}");
    ensure!(
        model.rows.len() == expected.rows(),
        "{} rows",
        model.rows.len()
    );
    ensure!(
        model.variables().len() == expected.variables(),
        "{} variables",
        model.variables().len()
    );
    ensure!(
        model.binaries.len() == 16 && relax.binaries.is_empty(),
        "binary section mismatch"
    );
    ensure!(
        relax
            .bounds
            .iter()
            .filter(|b| (b.1, b.2) == (0.0, 1.0))
            .count()
            == 16,
        "relaxation lacks [0, 1] bounds"
    );
    ensure!(relax.rows == model.rows, "relaxation changes the rows");

    // The optimal line is a feasible point with c = 2; LC1 = 2 bounds
    // every feasible point from below, so the MILP optimum is 2 and the
    // relaxation optimum is at most 2.
    let best = optimum(&inst).ok_or("oracle found no line")?;
    let mut point: HashMap<String, f64> = HashMap::new();
    for (s, (w, tasks)) in best.stations().into_iter().enumerate() {
        point.insert(format!("y_s{}_w{}", s + 1, w + 1), 1.0);
        for i in tasks {
            point.insert(format!("x_s{}_w{}_i{}", s + 1, w + 1, i + 1), 1.0);
        }
    }
    point.insert("c".into(), best.cycle as f64);
    let violated = model.violated_rows(&point, 1e-9);
    ensure!(violated.is_empty(), "optimal line violates {violated:?}");
    ensure!(
        model.objective_value(&point) == 2.0,
        "objective {}",
        model.objective_value(&point)
    );
    ensure!(BoundsReport::compute(&inst, None).lc1 == 2, "LC1 is not 2");
    point.insert("c".into(), 1.0);
    ensure!(
        !model.violated_rows(&point, 1e-9).is_empty(),
        "c = 1 accepted"
    );
    Ok(
        "LP files parse; 17 variables and 15 rows as closed form; MILP optimum 2, relaxation <= 2"
            .into(),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("bound sandwich", bound_sandwich),
        ("hand-trace fixtures", hand_traces),
        ("determinism", determinism),
        ("rule count and combinatorics", combinatorics),
        ("HGA dynamics", hga_dynamics),
        ("speed envelope", speed_envelope),
        ("qualitative rule ordering", rule_ordering),
        ("generator statistics", generator_statistics),
        ("LP export", lp_export),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut stdout = std::io::stdout().lock();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        failed += usize::from(outcome.is_err());
        let _ = writeln!(
            stdout,
            "criterion {:>2} {status}: {name} [{secs:.1}s] {detail}",
            k + 1
        );
        let _ = stdout.flush();
    }
    let _ = writeln!(
        stdout,
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
