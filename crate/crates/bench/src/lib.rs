//! Workloads shared by the benchmarks.

use subst_core::{named, RuleTable, WolframCode, Word};

/// A named rule, its seed and a step count deep enough to be interesting.
pub struct Workload {
    pub name: &'static str,
    pub rule: RuleTable,
    pub seed: Word,
    pub steps: usize,
}

pub fn workloads() -> Vec<Workload> {
    let heptad = WolframCode::new(74330023345u64.into(), 3, 7)
        .expect("code in range")
        .decode();
    vec![
        Workload {
            name: "cantor",
            rule: named::cantor(),
            seed: Word::parse(2, "1").expect("seed"),
            steps: 9,
        },
        Workload {
            name: "fibonacci",
            rule: named::fibonacci(),
            seed: Word::parse(3, "1").expect("seed"),
            steps: 18,
        },
        Workload {
            name: "thue-morse",
            rule: named::thue_morse(),
            seed: Word::parse(2, "0").expect("seed"),
            steps: 14,
        },
        Workload {
            name: "74330023345",
            rule: heptad,
            seed: Word::parse(7, "1").expect("seed"),
            steps: 8,
        },
    ]
}
