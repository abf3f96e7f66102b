use std::fs;
use std::path::PathBuf;

use dppc::model::{parse_set_system, parse_vacc_instance, write_set_system, write_vacc_instance};
use dppc::oracle::{gen_random_set_system, gen_star_lower_bound, gen_two_cluster_line};

fn read(name: &str) -> Vec<u8> {
    fs::read(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("fixtures/v1")
            .join(name),
    )
    .unwrap()
}

#[test]
fn star_golden_matches_generator() {
    let text = read("star_10.txt");
    assert_eq!(
        String::from_utf8(text.clone()).unwrap(),
        write_set_system(&gen_star_lower_bound(10).unwrap())
    );
    assert_eq!(
        parse_set_system(&text).unwrap(),
        gen_star_lower_bound(10).unwrap()
    );
}

#[test]
fn two_cluster_golden_matches_generator() {
    let text = read("two_cluster.vacc");
    assert_eq!(
        String::from_utf8(text.clone()).unwrap(),
        write_vacc_instance(&gen_two_cluster_line())
    );
    let inst = parse_vacc_instance(&text).unwrap();
    assert_eq!((inst.num_people(), inst.num_locations()), (24, 6));
}

#[test]
fn reduction_fixtures_are_coverable() {
    for m in 1..=10 {
        let s = parse_set_system(&read(&format!("psc_m{m:02}.txt"))).unwrap();
        assert_eq!(s.m(), m);
        assert!(s.is_coverable());
        assert_eq!(s, gen_random_set_system(10 + m, m, 0.25, m as u64).unwrap());
    }
}
