use multiwinner::fixtures;

#[test]
fn every_fixture_expectation_holds() {
    let mut failed = Vec::new();
    for f in fixtures::all() {
        for c in fixtures::check(&f) {
            if !c.passed {
                failed.push(format!("{} {}: got {}", c.fixture, c.what, c.detail));
            }
        }
    }
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
