use std::collections::HashSet;

use ffsym_core::datasets::{
    make_coeff_from_key, make_mixed_loop, make_strikeout, make_zero_nonzero, Dataset, Representation, SplitSpec,
    StrikeDistance, StrikeVariant, TargetKind, ZeroPolicy,
};
use ffsym_core::io::{read_ids, read_predictions, read_truth};
use ffsym_core::testing::{size_standin, RelationKernel};
use ffsym_core::tokens::format_tokens;
use ffsym_core::{builtin_symbol, decode_coefficient, is_trivial_zero, score_predictions, Key, SignPosition, Symbol};

fn l3() -> Symbol {
    RelationKernel::new(3).unwrap().random_symbol(5).unwrap()
}

fn files(d: &Dataset) -> Vec<(String, Vec<u8>)> {
    let dir = tempfile::tempdir().unwrap();
    let mut out: Vec<(String, Vec<u8>)> = d
        .write(dir.path(), "set")
        .unwrap()
        .iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn zero_nonzero_is_balanced_and_reproducible() {
    let s = l3();
    for policy in [ZeroPolicy::Uniform, ZeroPolicy::NontrivialBiased] {
        let d = make_zero_nonzero(&s, policy, SplitSpec::new(None, 100), 3).unwrap();
        assert_eq!(d.len(), 2 * s.len());
        assert_eq!(d.test.len(), 100);
        let nonzero = d.train.iter().chain(&d.test).filter(|e| !e.value.is_zero()).count();
        assert_eq!(nonzero, s.len());
        let test_nonzero = d.test.iter().filter(|e| !e.value.is_zero()).count();
        assert_eq!(test_nonzero, 50);
        let ids: HashSet<&str> = d.train.iter().chain(&d.test).map(|e| e.id.as_str()).collect();
        assert_eq!(ids.len(), d.len());
        for e in d.train.iter().chain(&d.test) {
            let k: Key = e.id.parse().unwrap();
            assert_eq!(e.value.is_zero(), !s.contains(&k));
        }
        if policy == ZeroPolicy::NontrivialBiased {
            let trivial = d
                .train
                .iter()
                .chain(&d.test)
                .filter(|e| is_trivial_zero(&e.id.parse().unwrap()))
                .count();
            assert_eq!(trivial, s.len() * 5 / 100);
        }
        let again = make_zero_nonzero(&s, policy, SplitSpec::new(None, 100), 3).unwrap();
        assert_eq!(files(&d), files(&again));
        let other = make_zero_nonzero(&s, policy, SplitSpec::new(None, 100), 4).unwrap();
        assert_ne!(files(&d), files(&other));
    }
}

#[test]
fn coefficient_datasets_decode_to_truth() {
    let s = l3();
    for (repr, target, pos) in [
        (Representation::Full, TargetKind::Coefficient, SignPosition::First),
        (Representation::Full, TargetKind::Coefficient, SignPosition::Last),
        (Representation::Quad, TargetKind::Coefficient, SignPosition::First),
    ] {
        let d = make_coeff_from_key(&s, repr, target, pos, SplitSpec::new(Some(40), 15), 8).unwrap();
        assert_eq!((d.train.len(), d.test.len()), (40, 15));
        for e in d.train.iter().chain(&d.test) {
            assert_eq!(decode_coefficient(&e.target).unwrap(), e.value);
        }
    }
}

#[test]
fn written_files_feed_the_scorer() {
    let s = l3();
    let d = make_coeff_from_key(
        &s,
        Representation::Full,
        TargetKind::Coefficient,
        SignPosition::First,
        SplitSpec::new(None, 40),
        1,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    d.write(dir.path(), "coeff.l3").unwrap();
    let tsv = std::fs::read_to_string(dir.path().join("coeff.l3.test.tsv")).unwrap();
    assert_eq!(tsv.lines().next().unwrap(), d.header());
    let ids = read_ids(std::fs::read(dir.path().join("coeff.l3.test.ids")).unwrap().as_slice()).unwrap();
    let truth = read_truth(std::fs::read(dir.path().join("coeff.l3.test.truth")).unwrap().as_slice()).unwrap();
    let pred_text: String = d
        .test
        .iter()
        .zip(tsv.lines().skip(1))
        .map(|(e, line)| format!("{}\t{}\n", e.id, line.split('\t').nth(1).unwrap()))
        .collect();
    let preds = read_predictions(pred_text.as_bytes()).unwrap();
    let m = score_predictions(&truth, &preds, &ids).unwrap();
    assert_eq!((m.element, m.coverage, m.n), (1.0, 1.0, 40));
    assert!(format_tokens(&d.test[0].target).starts_with(['+', '-']));
}

#[test]
fn strikeout_dedups_after_transform() {
    let child = l3();
    let parent = builtin_symbol(2).unwrap();
    let mut sizes = Vec::new();
    for variant in ["plain", "shuffled", "sorted", "sorted-unique", "signs-only", "zero-nonzero"] {
        let v: StrikeVariant = variant.parse().unwrap();
        let d = make_strikeout(&child, &parent, StrikeDistance::Full, v, SplitSpec::new(None, 10), 2).unwrap();
        assert!(d.len() <= child.len());
        let pairs: HashSet<(String, String)> = d
            .train
            .iter()
            .chain(&d.test)
            .map(|e| (format_tokens(&e.input), format_tokens(&e.target)))
            .collect();
        assert_eq!(pairs.len(), d.len(), "{variant}");
        sizes.push((variant, d.len()));
    }
    let size = |name: &str| sizes.iter().find(|(v, _)| *v == name).unwrap().1;
    assert!(size("sorted-unique") <= size("sorted"));
    assert!(size("sorted") <= size("plain"));
    let d = make_strikeout(&child, &parent, StrikeDistance::Max(1), StrikeVariant::default(), SplitSpec::new(None, 10), 2)
        .unwrap();
    assert_eq!(d.train[0].input.iter().filter(|t| matches!(t, ffsym_core::Token::Plus | ffsym_core::Token::Minus)).count(), 5);
}

#[test]
fn mixed_loop_sizes_follow_counts() {
    let lower = size_standin(3, 300, 1).unwrap();
    let upper = size_standin(4, 2000, 2).unwrap();
    let m = make_mixed_loop(&lower, &upper, 20, 6).unwrap();
    assert_eq!((m.lower.train.len(), m.lower.test.len()), (580, 20));
    assert_eq!((m.upper.train.len(), m.upper.test.len()), (580, 20));
    assert_eq!((m.merged.train.len(), m.merged.test.len()), (1160, 40));
    assert_eq!((m.control.train.len(), m.control.test.len()), (1160, 20));
    let held: HashSet<&str> = m.upper.test.iter().map(|e| e.id.as_str()).collect();
    assert!(m.control.train.iter().all(|e| !held.contains(e.id.as_str())));
    assert_eq!(m.control.test, m.upper.test);
    assert!(make_mixed_loop(&upper, &lower, 20, 6).is_err());
}
