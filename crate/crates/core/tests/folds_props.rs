use std::collections::HashSet;

use newsgauge_core::eval::{stratified_kfold, FoldSpec};
use newsgauge_core::Class;
use proptest::prelude::*;

fn labels_strategy(n: usize) -> impl Strategy<Value = Vec<Class>> {
    prop::collection::vec(prop_oneof![Just(Class::Low), Just(Class::High)], n)
        .prop_filter("each class needs k rows", |v| {
            let high = v.iter().filter(|c| **c == Class::High).count();
            high >= 5 && v.len() - high >= 5
        })
}

fn check(labels: &[Class], seed: u64) -> Result<(), TestCaseError> {
    let k = 5;
    let spec = stratified_kfold(labels, k, seed).unwrap();
    prop_assert_eq!(spec.len(), labels.len());
    let mut seen = HashSet::new();
    for f in 0..k {
        let (train, test) = spec.split(f);
        prop_assert_eq!(train.len() + test.len(), labels.len());
        for i in &test {
            prop_assert!(seen.insert(*i));
        }
        let train_set: HashSet<_> = train.iter().collect();
        prop_assert!(test.iter().all(|i| !train_set.contains(i)));
    }
    prop_assert_eq!(seen.len(), labels.len());
    let n = labels.len() as f64;
    for (f, counts) in spec.class_counts(labels).iter().enumerate() {
        let fold_n: usize = counts.iter().sum();
        for c in Class::ALL {
            let total = labels.iter().filter(|l| **l == c).count() as f64;
            let ideal = total / k as f64;
            let dev = (counts[c.index()] as f64 - ideal).abs();
            prop_assert!(dev < 1.0 + 1e-9, "fold {} class {:?}: {} vs {}", f, c, counts[c.index()], ideal);
        }
        prop_assert!((fold_n as f64 - n / k as f64).abs() < 1.0 + 1e-9);
    }
    let again = stratified_kfold(labels, k, seed).unwrap();
    prop_assert_eq!(&again.assignment, &spec.assignment);
    prop_assert_eq!(again.hash(), spec.hash());
    let back = FoldSpec::from_json(&spec.to_json()).unwrap();
    prop_assert_eq!(back.hash(), spec.hash());
    Ok(())
}

proptest! {
    #[test]
    fn partition_20(labels in labels_strategy(20), seed in any::<u64>()) { check(&labels, seed)?; }

    #[test]
    fn partition_101(labels in labels_strategy(101), seed in any::<u64>()) { check(&labels, seed)?; }

    #[test]
    fn partition_1000(labels in labels_strategy(1000), seed in any::<u64>()) { check(&labels, seed)?; }
}

#[test]
fn seed_changes_assignment() {
    let labels: Vec<Class> = (0..200).map(|i| Class::from_index(i % 3 % 2)).collect();
    let a = stratified_kfold(&labels, 5, 42).unwrap();
    let b = stratified_kfold(&labels, 5, 43).unwrap();
    assert_ne!(a.assignment, b.assignment);
    assert_ne!(a.hash(), b.hash());
}

#[test]
fn hash_excludes_doc_ids() {
    let labels: Vec<Class> = (0..20).map(|i| Class::from_index(i % 2)).collect();
    let a = stratified_kfold(&labels, 5, 42).unwrap();
    let b = a.clone().with_doc_ids((0..20).map(|i| format!("d{i}")).collect());
    assert_eq!(a.hash(), b.hash());
}
