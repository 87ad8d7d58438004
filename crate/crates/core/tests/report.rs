use stringc_core::catalog::catalog_enumerate;
use stringc_core::report::{classify, ClassificationReport};

#[test]
fn classification_round_trips_and_summarizes_its_records() {
    let groups = catalog_enumerate(7).unwrap();
    let report = classify(7, &groups);
    let text = serde_json::to_string(&report).unwrap();
    let back: ClassificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);

    let s = &report.summary;
    assert_eq!(s.groups, report.records.len());
    assert_eq!(s.generated_by_involutions, report.records.iter().filter(|r| r.generated_by_involutions).count());
    let winners = report.records.iter().filter(|r| r.certificates > 0).count();
    assert_eq!(s.winners.len(), winners);
    assert!(report.records.iter().all(|r| r.violations.is_some() == r.generated_by_involutions));
    assert!(report.records.iter().all(|r| r.phi.is_some() != r.generated_by_involutions));
    assert!(s.matches_expected);
}
