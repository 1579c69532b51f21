//! The acceptance criteria, one line per criterion.

mod common;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::explicit::{decode, explore, random_bnet, random_pnet};
use common::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use xbdd::checker::{reachable_states, task_deadlock, task_reachability, task_scc, TaskOptions};
use xbdd::models::{build_symbolic, Model, ModelFormat, Ordering, PartitionKind, SymbolicModel};
use xbdd::quantify::{and_exists, exists, forall, relnext, relprev};
use xbdd::substitution::{attach_shift, materialize, replace_naive};
use xbdd::sweeps::{apply, reduce, transpose_diagram};
use xbdd::{AffineShift, BooleanOp, Engine, Level, MonotoneSubst, OptTier, ReducedDiagram, VarSet};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bundled_models() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn load(e: &Engine, path: &Path, ordering: Ordering) -> SymbolicModel {
    let model = Model::load(path, None).unwrap();
    build_symbolic(e, &model, &model.order(ordering), PartitionKind::Joint).unwrap()
}

fn two_state_end_to_end() -> Outcome {
    let e = engine();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models/two_state.pnet");
    let m = load(&e, &path, Ordering::Input);
    let next = relnext(&e, &m.initial, &m.relation, OptTier::default()).map_err(|x| x.to_string())?;
    let want = ReducedDiagram::cube(&e, &[(0, false), (2, true)]).unwrap();
    ensure(bytes(&e, &next) == bytes(&e, &want), || {
        "relnext(S_I) is not ¬x1 ∧ x2".into()
    })?;
    let opts = TaskOptions::default();
    let reach = task_reachability(&e, "two_state", &m, opts).unwrap();
    ensure(reach.report.state_count == "2", || {
        format!("state count {}", reach.report.state_count)
    })?;
    let dead = task_deadlock(&e, "two_state", &m, opts).unwrap();
    ensure(dead.result.is_false(), || "deadlock set is not empty".into())?;
    let scc = task_scc(&e, "two_state", &m, opts).unwrap();
    ensure(scc.report.scc_count.as_deref() == Some("1"), || {
        format!("{:?} SCCs", scc.report.scc_count)
    })?;
    Ok("next = ¬x1∧x2, 2 states, no deadlock, 1 SCC".into())
}

fn replace_io_exactness() -> Outcome {
    let mut checked = 0;
    for b in [8, 64] {
        for n in [64usize, 1000, 100_000] {
            let e = engine_with(b, 4096);
            let lits: Vec<(Level, bool)> = (0..n as Level).map(|l| (l, l % 2 == 0)).collect();
            let d = ReducedDiagram::cube(&e, &lits).unwrap();
            ensure(d.node_count() == n as u64, || "wrong node count".into())?;
            let s = MonotoneSubst::from_pairs((0..n as Level).map(|l| (l, l + 7))).unwrap();
            let before = e.counters();
            replace_naive(&e, &d, &s).unwrap();
            let delta = e.counters().since(&before);
            let blocks = n.div_ceil(b) as u64;
            ensure(delta.blocks_read == blocks && delta.blocks_written == blocks, || {
                format!(
                    "N={n} B={b}: {} reads, {} writes, expected {blocks}",
                    delta.blocks_read, delta.blocks_written
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (N, B) pairs read and write exactly ceil(N/B) blocks"
    ))
}

fn reduce_subst_no_extra_io() -> Outcome {
    let e = engine();
    let mut rng = StdRng::seed_from_u64(3);
    for round in 0..100 {
        let n = rng.gen_range(1..=12);
        let (arcs, _, _) = random_arcs(&e, &mut rng, n);
        let stride = rng.gen_range(1..=3);
        let offset = rng.gen_range(0..=5);
        let subst = MonotoneSubst::from_pairs((0..n as Level).map(|l| (l, stride * l + offset))).unwrap();
        let t0 = e.counters();
        reduce(&e, arcs.clone(), None).unwrap();
        let t1 = e.counters();
        reduce(&e, arcs, Some(&subst)).unwrap();
        let t2 = e.counters();
        let (a, b) = (t1.since(&t0), t2.since(&t1));
        ensure(
            a.blocks_read == b.blocks_read && a.blocks_written == b.blocks_written,
            || format!("round {round}: {a:?} vs {b:?}"),
        )?;
    }
    Ok("100 inputs, identical block reads and writes".into())
}

fn attach_is_free() -> Outcome {
    let e = engine();
    let mut rng = StdRng::seed_from_u64(4);
    for round in 0..200 {
        let n = rng.gen_range(0..=8);
        let f = from_table(&e, &labels(n), &random_table(&mut rng, n));
        let shift = AffineShift::new(rng.gen_range(1..=4), rng.gen_range(0..=10)).unwrap();
        let before = e.counters();
        let view = attach_shift(&f, shift).unwrap();
        let delta = e.counters().since(&before);
        ensure(delta.blocks() == 0, || {
            format!("round {round}: attach touched {} blocks", delta.blocks())
        })?;
        let subst = shift.to_subst(f.level_labels()).unwrap();
        let naive = bytes(&e, &replace_naive(&e, &f, &subst).unwrap());
        let in_reduce = bytes(
            &e,
            &reduce(&e, transpose_diagram(&e, &f).unwrap(), Some(&subst)).unwrap(),
        );
        let shifted = bytes(&e, &materialize(&e, &view).unwrap());
        ensure(naive == in_reduce && naive == shifted, || {
            format!("round {round}: tiers differ")
        })?;
    }
    Ok("200 cases, 0 blocks per attach, identical bytes".into())
}

fn tier_invariance() -> Outcome {
    let e = engine();
    let mut rng = StdRng::seed_from_u64(5);
    for round in 0..200 {
        let n = rng.gen_range(1..=12);
        let ls = labels(n);
        let f = from_table(&e, &ls, &random_table(&mut rng, n));
        let g = from_table(&e, &ls, &random_table(&mut rng, n));
        let vs = VarSet::new((0..n as Level).filter(|_| rng.gen_bool(0.5)));
        let subst = rng
            .gen_bool(0.5)
            .then(|| MonotoneSubst::from_pairs((0..n as Level).map(|l| (l, 2 * l + 1))).unwrap());
        let results: Vec<Vec<u8>> = OptTier::ALL
            .iter()
            .map(|&t| bytes(&e, &and_exists(&e, &f, &g, &vs, t, subst.as_ref()).unwrap()))
            .collect();
        ensure(results.windows(2).all(|w| w[0] == w[1]), || {
            format!("and_exists round {round}")
        })?;
    }
    let models = bundled_models();
    for path in &models {
        let m = load(&e, path, Ordering::Sloan);
        let mut seen: Option<Vec<Vec<u8>>> = None;
        for tier in OptTier::ALL {
            let opts = TaskOptions {
                tier,
                ..TaskOptions::default()
            };
            let reach = task_reachability(&e, "m", &m, opts).unwrap().result;
            let got = vec![
                bytes(&e, &reach),
                bytes(&e, &task_deadlock(&e, "m", &m, opts).unwrap().result),
                task_scc(&e, "m", &m, opts)
                    .unwrap()
                    .report
                    .scc_count
                    .unwrap()
                    .into_bytes(),
                bytes(&e, &relnext(&e, &reach, &m.relation, tier).unwrap()),
                bytes(&e, &relprev(&e, &reach, &m.relation, tier).unwrap()),
            ];
            match &seen {
                None => seen = Some(got),
                Some(s) => ensure(*s == got, || format!("{} differs at {tier}", path.display()))?,
            }
        }
    }
    Ok(format!(
        "200 and_exists instances and {} models agree across 5 tiers",
        models.len()
    ))
}

fn pruning_effect() -> Outcome {
    let mut strict = Vec::new();
    for path in bundled_models() {
        let mut records = Vec::new();
        for tier in [OptTier::SkipTranspose, OptTier::PruningAnd] {
            let e = engine();
            let m = load(&e, &path, Ordering::Sloan);
            e.reset_counters();
            let opts = TaskOptions {
                tier,
                ..TaskOptions::default()
            };
            let (reach, _) = reachable_states(&e, &m, opts).unwrap();
            relprev(&e, &reach, &m.relation, tier).unwrap();
            records.push(e.intermediate_records());
        }
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        ensure(records[1] <= records[0], || {
            format!("{name}: {} > {}", records[1], records[0])
        })?;
        if records[1] < records[0] {
            strict.push(format!("{name} {}→{}", records[0], records[1]));
        }
    }
    ensure(!strict.is_empty(), || "no strict decrease on any bundled model".into())?;
    Ok(format!("never larger; strictly smaller on {}", strict.join(", ")))
}

fn formula_oracles(rng: &mut StdRng) -> Result<(), String> {
    let e = engine();
    for round in 0..1000 {
        let n = rng.gen_range(1..=14);
        let ls = labels(n);
        let (tf, tg) = (random_table(rng, n), random_table(rng, n));
        let f = from_table(&e, &ls, &tf);
        let g = from_table(&e, &ls, &tg);
        let op = BooleanOp::ALL[round % BooleanOp::ALL.len()];
        let h = reduce(&e, apply(&e, &f, &g, op).unwrap(), None).unwrap();
        let want: Vec<bool> = tf.iter().zip(&tg).map(|(&a, &b)| op.eval(a, b)).collect();
        ensure(table(&e, &h, &ls) == want, || format!("apply {op:?} round {round}"))?;
        let qs: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        let vs = VarSet::new(qs.iter().map(|&q| q as Level));
        ensure(
            table(&e, &exists(&e, &f, &vs, None).unwrap(), &ls) == quantify_table(&tf, n, &qs, false),
            || format!("exists round {round}"),
        )?;
        ensure(
            table(&e, &forall(&e, &f, &vs).unwrap(), &ls) == quantify_table(&tf, n, &qs, true),
            || format!("forall round {round}"),
        )?;
        let s = MonotoneSubst::from_pairs((0..n as Level).map(|l| (l, l + 3))).unwrap();
        let shifted: Vec<Level> = ls.iter().map(|l| l + 3).collect();
        ensure(table(&e, &replace_naive(&e, &f, &s).unwrap(), &shifted) == tf, || {
            format!("replace round {round}")
        })?;
    }
    Ok(())
}

fn model_oracles(rng: &mut StdRng) -> Result<(), String> {
    let e = engine();
    for round in 0..50 {
        let (text, format) = if round % 2 == 0 {
            let n = rng.gen_range(2..=14);
            (random_pnet(rng, n), ModelFormat::Pnet)
        } else {
            let n = rng.gen_range(2..=10);
            (random_bnet(rng, n), ModelFormat::Bnet)
        };
        let model = Model::parse(&text, format).unwrap();
        let oracle = explore(&model);
        let m = build_symbolic(&e, &model, &model.order(Ordering::Sloan), PartitionKind::Joint).unwrap();
        let opts = TaskOptions::default();
        let reach = task_reachability(&e, "r", &m, opts).unwrap();
        let got: Vec<u64> = decode(&e, &m, &reach.result).into_iter().collect();
        ensure(got == oracle.states, || format!("model {round}: reachable set"))?;
        let dead = task_deadlock(&e, "r", &m, opts).unwrap();
        ensure(dead.report.state_count == oracle.deadlocks().to_string(), || {
            format!("model {round}: deadlocks")
        })?;
        let scc = task_scc(&e, "r", &m, opts).unwrap();
        ensure(scc.report.scc_count == Some(oracle.scc_count().to_string()), || {
            format!(
                "model {round}: {:?} SCCs, oracle {}",
                scc.report.scc_count,
                oracle.scc_count()
            )
        })?;
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    formula_oracles(&mut rng)?;
    model_oracles(&mut rng)?;
    Ok("1000 formula pairs and 50 models match the explicit oracles".into())
}

fn memory_independence() -> Outcome {
    let mut runs = 0;
    for path in bundled_models() {
        let mut seen: Option<Vec<Vec<u8>>> = None;
        for m_records in [256, 4096, 65536] {
            let e = engine_with(8, m_records);
            let m = load(&e, &path, Ordering::Sloan);
            let opts = TaskOptions::default();
            let reach = task_reachability(&e, "m", &m, opts).map_err(|x| format!("{}: {x}", path.display()))?;
            let dead = task_deadlock(&e, "m", &m, opts).map_err(|x| x.to_string())?;
            let scc = task_scc(&e, "m", &m, opts).map_err(|x| x.to_string())?;
            for r in [&reach.report, &dead.report, &scc.report] {
                ensure(r.peak_resident_records <= m_records as u64, || {
                    format!("{}: peak {} > M = {m_records}", path.display(), r.peak_resident_records)
                })?;
            }
            let got = vec![
                bytes(&e, &reach.result),
                bytes(&e, &dead.result),
                scc.report.scc_count.unwrap().into_bytes(),
            ];
            match &seen {
                None => seen = Some(got),
                Some(s) => ensure(*s == got, || format!("{} differs at M = {m_records}", path.display()))?,
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, identical results, peak residency within M"))
}

fn canonicity() -> Outcome {
    let e = engine();
    let mut rng = StdRng::seed_from_u64(9);
    for round in 0..500 {
        let n = rng.gen_range(1..=10);
        let clauses: Vec<Vec<(Level, bool)>> = (0..rng.gen_range(1..=6))
            .map(|_| {
                let mut lits = Vec::new();
                for l in 0..n as Level {
                    if rng.gen_bool(0.4) {
                        lits.push((l, rng.gen_bool(0.5)));
                    }
                }
                lits
            })
            .collect();
        let build = |order: &[usize]| {
            let mut acc = ReducedDiagram::constant(false);
            for &i in order {
                let c = ReducedDiagram::cube(&e, &clauses[i]).unwrap();
                acc = e.or(&c, &acc).unwrap();
            }
            acc
        };
        let forward: Vec<usize> = (0..clauses.len()).collect();
        let mut shuffled = forward.clone();
        shuffled.shuffle(&mut rng);
        shuffled.reverse();
        let (a, b) = (build(&forward), build(&shuffled));
        ensure(bytes(&e, &a) == bytes(&e, &b), || {
            format!("round {round}: different bytes")
        })?;
        let tree = from_table(&e, &labels(n), &table(&e, &a, &labels(n)));
        ensure(bytes(&e, &tree) == bytes(&e, &a), || {
            format!("round {round}: tree differs")
        })?;
    }
    Ok("500 functions, two clause orders and a decision tree give one encoding".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 two-state example", Duration::from_secs(1), two_state_end_to_end),
        ("2 replace_naive I/O", Duration::from_secs(10), replace_io_exactness),
        ("3 subst in reduce", Duration::from_secs(60), reduce_subst_no_extra_io),
        ("4 attach_shift", Duration::from_secs(60), attach_is_free),
        ("5 tier invariance", Duration::from_secs(300), tier_invariance),
        ("6 pruning effect", Duration::from_secs(120), pruning_effect),
        ("7 oracle equivalence", Duration::from_secs(600), oracle_equivalence),
        ("8 memory budget", Duration::from_secs(600), memory_independence),
        ("9 canonicity", Duration::from_secs(120), canonicity),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = started.elapsed();
        let outcome = match outcome {
            Ok(_) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} ({took:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
