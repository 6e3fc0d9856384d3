use paraunitary::catalog::{entries, run_all};

#[test]
fn every_entry_matches() {
    let all = entries().unwrap();
    assert!(all.len() >= 20);
    let mut failures = Vec::new();
    for r in run_all(&all) {
        if !r.passed() {
            failures.push(format!("{}:\n  {}", r.id, r.problems.join("\n  ")));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
