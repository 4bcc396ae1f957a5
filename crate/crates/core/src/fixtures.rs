//! Small frameworks and belief assignments used throughout the docs, tests
//! and the acceptance suite.

use crate::af::ArgumentationFramework;

/// Six arguments: `a1 <-> a2`, `a2 -> a3`, `a3 -> a4`, `a4 <-> a5`,
/// `a5 -> a3`, `a6 -> a5`.
pub const SIX_ARGS_APX: &str = "arg(a1). arg(a2). arg(a3). arg(a4). arg(a5). arg(a6).
att(a1,a2). att(a2,a1). att(a2,a3). att(a3,a4). att(a4,a5). att(a5,a4). att(a5,a3). att(a6,a5).
";

/// Five belief assignments over [`six_args`], one row per assignment,
/// columns `a1 .. a6`.
pub const SIX_ARGS_BELIEFS: [[f64; 6]; 5] = [
    [0.2, 0.7, 0.6, 0.3, 0.6, 1.0],
    [0.7, 0.3, 0.5, 0.5, 0.2, 0.4],
    [0.7, 0.3, 0.7, 0.3, 0.0, 1.0],
    [0.7, 0.8, 0.9, 0.8, 0.7, 1.0],
    [0.5, 0.5, 0.5, 0.5, 0.5, 0.5],
];

pub fn six_args() -> ArgumentationFramework {
    ArgumentationFramework::parse_apx(SIX_ARGS_APX).expect("fixture parses")
}

/// `A -> B -> C -> A`.
pub fn three_cycle() -> ArgumentationFramework {
    ArgumentationFramework::new(&["A", "B", "C"], &[("A", "B"), ("B", "C"), ("C", "A")])
        .expect("fixture builds")
}

/// `A -> B`.
pub fn single_attack() -> ArgumentationFramework {
    ArgumentationFramework::new(&["A", "B"], &[("A", "B")]).expect("fixture builds")
}

/// `A -> B`, `A -> C`, `B -> C`.
pub fn transitive_triangle() -> ArgumentationFramework {
    ArgumentationFramework::new(&["A", "B", "C"], &[("A", "B"), ("A", "C"), ("B", "C")])
        .expect("fixture builds")
}

/// One argument with no attacks.
pub fn lone_argument() -> ArgumentationFramework {
    ArgumentationFramework::new::<&str>(&["A"], &[]).expect("fixture builds")
}

/// One argument attacking itself.
pub fn self_attacker() -> ArgumentationFramework {
    ArgumentationFramework::new(&["A"], &[("A", "A")]).expect("fixture builds")
}
