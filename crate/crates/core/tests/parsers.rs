use std::path::PathBuf;

use patchwork_core::complex::FaceId;
use patchwork_core::instance::parse_instance_bytes;
use patchwork_core::phase::SignDistribution;
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    out
}

fn exercise_instance(bytes: &[u8]) {
    if let Ok(inst) = parse_instance_bytes(bytes) {
        for id in inst.complex.all_ids() {
            assert!(inst.complex.face_index(id).is_ok());
        }
    }
}

fn exercise_face_id(s: &str) {
    if let Ok(id) = s.parse::<FaceId>() {
        assert_eq!(id.to_string().parse::<FaceId>().unwrap(), id);
    }
}

#[test]
fn seeds_are_handled() {
    let seeds = corpus("parse_instance");
    assert!(seeds.len() >= 5);
    let parsed = seeds
        .iter()
        .filter(|s| parse_instance_bytes(s).is_ok())
        .count();
    assert_eq!(parsed, seeds.len() - 1);
    for s in corpus("face_id") {
        exercise_face_id(std::str::from_utf8(&s).unwrap());
    }
    let signs: Vec<bool> = corpus("signs")
        .iter()
        .map(|s| {
            let text = std::str::from_utf8(s).unwrap();
            SignDistribution::parse(&text.split(',').map(str::trim).collect::<Vec<_>>()).is_ok()
        })
        .collect();
    assert_eq!(signs.iter().filter(|&&ok| ok).count(), 2);
}

#[test]
fn face_id_grammar() {
    let id: FaceId = "sed{2,0}/cell{3,1}".parse().unwrap();
    assert_eq!(id.to_string(), "sed{0,2}/cell{1,3}");
    for bad in [
        "",
        "sed{}",
        "sed{}/cell{}",
        "sed{1,1}/cell{0}",
        "sed{}/cell{0,0}",
        "sed{a}/cell{0}",
        "cell{0}/sed{}",
    ] {
        assert!(bad.parse::<FaceId>().is_err(), "{bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mutated_instances_never_panic(seed in 0usize..6, edits in proptest::collection::vec((any::<usize>(), any::<u8>()), 0..4)) {
        let seeds = corpus("parse_instance");
        let mut bytes = seeds[seed % seeds.len()].clone();
        for (at, b) in edits {
            let i = at % bytes.len();
            bytes[i] = b;
        }
        exercise_instance(&bytes);
    }

    #[test]
    fn digit_edits_never_panic(seed in 0usize..6, edits in proptest::collection::vec((any::<usize>(), 0u8..10), 1..4)) {
        let seeds = corpus("parse_instance");
        let mut bytes = seeds[seed % seeds.len()].clone();
        let digits: Vec<usize> = (0..bytes.len()).filter(|&i| bytes[i].is_ascii_digit()).collect();
        for (at, d) in edits {
            bytes[digits[at % digits.len()]] = b'0' + d;
        }
        exercise_instance(&bytes);
    }

    #[test]
    fn arbitrary_face_ids_never_panic(s in "(sed\\{[0-9,]{0,6}\\}/cell\\{[0-9,]{0,8}\\})|.{0,24}") {
        exercise_face_id(&s);
    }

    #[test]
    fn arbitrary_signs_never_panic(tokens in proptest::collection::vec("[+\\- x]{0,2}", 0..8)) {
        if let Ok(s) = SignDistribution::parse(&tokens) {
            prop_assert_eq!(s.minus.len(), tokens.len());
        }
    }
}
