mod common;

use std::path::PathBuf;

use common::explicit::{decode, explore, random_bnet, random_pnet};
use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use xbdd::checker::{
    deadlock_states, reachable_states, scc_decomposition, state_count, task_deadlock, task_reachability, task_scc,
    TaskOptions,
};
use xbdd::models::{build_symbolic, Model, ModelFormat, Ordering, PartitionKind, SymbolicModel};
use xbdd::{Engine, OptTier, ReducedDiagram};

fn bundled(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(name)
}

fn bundled_models() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(bundled(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    v.sort();
    v
}

fn encode(e: &Engine, model: &Model, partition: PartitionKind) -> SymbolicModel {
    build_symbolic(e, model, &model.order(Ordering::Sloan), partition).unwrap()
}

fn check_against_oracle(e: &Engine, model: &Model, what: &str) {
    let oracle = explore(model);
    for partition in [PartitionKind::Joint, PartitionKind::Disjoint] {
        let m = encode(e, model, partition);
        let (reach, _) = reachable_states(e, &m, TaskOptions::default()).unwrap();
        let got = decode(e, &m, &reach);
        assert_eq!(
            got.into_iter().collect::<Vec<_>>(),
            oracle.states,
            "{what}: reachable set"
        );
        let dead = deadlock_states(e, &reach, &m.relation, OptTier::default()).unwrap();
        assert_eq!(decode(e, &m, &dead).len(), oracle.deadlocks(), "{what}: deadlocks");
        let scc = scc_decomposition(e, &m, &reach, OptTier::default()).unwrap();
        assert_eq!(scc.count, oracle.scc_count() as u128, "{what}: scc count");
        // The components and the deadlock states partition the reachable set.
        let mut union = scc.deadlocks.clone();
        for c in &scc.components {
            assert!(e.and(&union, c).unwrap().is_false(), "{what}: overlapping components");
            union = e.or(&union, c).unwrap();
        }
        assert_eq!(bytes(e, &union), bytes(e, &reach), "{what}: components miss states");
    }
}

#[test]
fn two_state_tasks() {
    let e = engine();
    let model = Model::load(&bundled("two_state.pnet"), None).unwrap();
    let m = encode(&e, &model, PartitionKind::Joint);
    let opts = TaskOptions::default();
    let reach = task_reachability(&e, "two_state", &m, opts).unwrap();
    assert_eq!(reach.report.state_count, "2");
    assert_eq!(reach.report.iterations, 2);
    let dead = task_deadlock(&e, "two_state", &m, opts).unwrap();
    assert!(dead.result.is_false());
    assert_eq!(dead.report.state_count, "0");
    let scc = task_scc(&e, "two_state", &m, opts).unwrap();
    assert_eq!(scc.report.scc_count.as_deref(), Some("1"));
}

#[test]
fn no_enabled_transition_stops_after_one_step() {
    let e = engine();
    let model = Model::parse(
        "places: a b\ninitial: b\ntransition t: in a ; out b\n",
        ModelFormat::Pnet,
    )
    .unwrap();
    let m = encode(&e, &model, PartitionKind::Joint);
    let (reach, iterations) = reachable_states(&e, &m, TaskOptions::default()).unwrap();
    assert_eq!(iterations, 1);
    assert_eq!(bytes(&e, &reach), bytes(&e, &m.initial));
    assert_eq!(state_count(&e, &reach, m.vars()).unwrap(), 1);
}

#[test]
fn line_has_three_singleton_components() {
    let e = engine();
    let model = Model::load(&bundled("line3.pnet"), None).unwrap();
    let m = encode(&e, &model, PartitionKind::Joint);
    let (reach, _) = reachable_states(&e, &m, TaskOptions::default()).unwrap();
    let scc = scc_decomposition(&e, &m, &reach, OptTier::default()).unwrap();
    assert_eq!(scc.count, 3);
    assert_eq!(state_count(&e, &scc.deadlocks, m.vars()).unwrap(), 1);
}

#[test]
fn empty_reachable_set_has_no_deadlocks() {
    let e = engine();
    let model = Model::load(&bundled("two_state.pnet"), None).unwrap();
    let m = encode(&e, &model, PartitionKind::Joint);
    let none = ReducedDiagram::constant(false);
    assert!(deadlock_states(&e, &none, &m.relation, OptTier::Naive)
        .unwrap()
        .is_false());
}

#[test]
fn bundled_models_match_explicit_exploration() {
    let e = engine();
    for path in bundled_models() {
        let model = Model::load(&path, None).unwrap();
        check_against_oracle(&e, &model, &path.display().to_string());
    }
}

#[test]
fn random_models_match_explicit_exploration() {
    let e = engine();
    let mut rng = StdRng::seed_from_u64(404);
    for round in 0..30 {
        let (text, format) = if round % 2 == 0 {
            let n = rng.gen_range(2..=8);
            (random_pnet(&mut rng, n), ModelFormat::Pnet)
        } else {
            let n = rng.gen_range(1..=6);
            (random_bnet(&mut rng, n), ModelFormat::Bnet)
        };
        let model = Model::parse(&text, format).unwrap();
        check_against_oracle(&e, &model, &format!("round {round}:\n{text}"));
    }
}

#[test]
fn results_do_not_depend_on_tier_or_strategy() {
    let e = engine();
    for path in bundled_models() {
        let model = Model::load(&path, None).unwrap();
        let m = encode(&e, &model, PartitionKind::Joint);
        let mut seen: Option<(Vec<u8>, Vec<u8>, String)> = None;
        for tier in OptTier::ALL {
            for full_set in [false, true] {
                let opts = TaskOptions {
                    tier,
                    full_set,
                    check_monotone: true,
                };
                let reach = task_reachability(&e, "m", &m, opts).unwrap();
                let dead = task_deadlock(&e, "m", &m, opts).unwrap();
                let scc = task_scc(&e, "m", &m, opts).unwrap();
                let got = (
                    bytes(&e, &reach.result),
                    bytes(&e, &dead.result),
                    scc.report.scc_count.clone().unwrap(),
                );
                match &seen {
                    None => seen = Some(got),
                    Some(s) => assert_eq!(s, &got, "{} at {tier}", path.display()),
                }
            }
        }
    }
}

#[test]
fn joint_relation_is_the_disjunction_of_parts() {
    let e = engine();
    for path in bundled_models() {
        let model = Model::load(&path, None).unwrap();
        let joint = encode(&e, &model, PartitionKind::Joint);
        let parts = encode(&e, &model, PartitionKind::Disjoint);
        let mut acc = ReducedDiagram::constant(false);
        for p in parts.relation.parts() {
            acc = e.or(&acc, p).unwrap();
        }
        assert_eq!(
            bytes(&e, &acc),
            bytes(&e, &joint.relation.parts()[0]),
            "{}",
            path.display()
        );
    }
}

#[test]
fn reports_stay_within_the_memory_budget() {
    let e = engine_with(8, 512);
    let model = Model::load(&bundled("philosophers3.pnet"), None).unwrap();
    let m = encode(&e, &model, PartitionKind::Joint);
    let r = task_scc(&e, "philosophers3", &m, TaskOptions::default()).unwrap();
    assert!(r.report.peak_resident_records <= 512);
    let json: serde_json::Value = serde_json::from_str(&r.report.to_json()).unwrap();
    for key in ["blocks_read", "blocks_written", "records_streamed", "sorts"] {
        assert!(json["io"][key].is_u64(), "{key}");
    }
    assert_eq!(json["state_count"], "14");
}
