use praag_core::fans::{contains_subfan, measure_exp_growth, preset_exp, search_exp_substitute, Direction, FanEngine, ExpPreset};
use praag_core::log::{endpoint_four_cycle, search_exp_log, validate_exp_log};

const RIMS: [u64; 18] = [
    3, 7, 13, 22, 36, 58, 93, 149, 239, 384, 618, 996, 1607, 2595, 4193, 6778, 10960, 17726,
];

#[test]
fn shipped_preset_revalidates() {
    let p = preset_exp().unwrap();
    let v = validate_exp_log(&p.log, &p.src, &p.dst).unwrap();
    assert!(v.desc_tree && v.asc_tree);
    assert!(v.quadruple_edges.is_empty());
    assert_eq!((v.dist_src, v.dist_dst, v.dist_src_dst), (Some(2), Some(2), Some(2)));
    // the one unmet condition, with its witness
    assert_eq!(v.girth, Some(4));
    assert_eq!(v.failures.len(), 1);
    assert!(endpoint_four_cycle(&p.log).is_some());

    let g = measure_exp_growth(&p.log, &p.src, &p.dst, 18).unwrap();
    assert_eq!(g.rims, RIMS);
    assert_eq!(g.c, 4);
    assert!(g.rim_bound_ok && g.area_bound_ok);
}

#[test]
fn shipped_preset_round_trips() {
    let p = preset_exp().unwrap();
    let again = ExpPreset::from_json(&p.to_json()).unwrap();
    assert_eq!(again.log, p.log);
    assert_eq!((again.anchor.as_str(), again.end.as_str()), ("t", "a5"));
}

#[test]
fn anchor_fans_contain_the_pair_fans() {
    let p = preset_exp().unwrap();
    let engine = FanEngine::new(&p.log, Direction::Descending).unwrap();
    for n in 2..=9 {
        let offsets = contains_subfan(&engine, p.anchor_pair(), p.pair(), n).unwrap();
        assert!(offsets.is_some(), "n = {n}");
    }
}

#[test]
fn search_reproduces_the_shipped_preset() {
    let found = search_exp_substitute(6).unwrap().expect("substitute exists on six vertices");
    assert_eq!(found.log, preset_exp().unwrap().log);
}

#[test]
fn girth_five_search_is_empty() {
    for k in 3..=6 {
        assert!(search_exp_log(k).unwrap().is_none(), "k = {k}");
    }
}
