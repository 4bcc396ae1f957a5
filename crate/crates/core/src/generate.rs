//! Seeded random frameworks and assignments for property tests and the
//! verification suite.

use rand::Rng;

use crate::af::ArgumentationFramework;

/// Each ordered pair, self-pairs included, becomes an attack with
/// probability `density`.
pub fn random_af<R: Rng>(rng: &mut R, n: usize, density: f64) -> ArgumentationFramework {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let p = if a == b { density / 3.0 } else { density };
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    ArgumentationFramework::from_edges(n, &edges)
}

/// Size drawn from `1..=max_n`, density from `[0.1, 0.5]`.
pub fn random_small_af<R: Rng>(rng: &mut R, max_n: usize) -> ArgumentationFramework {
    let n = rng.gen_range(1..=max_n);
    let density = rng.gen_range(0.1..=0.5);
    random_af(rng, n, density)
}

/// Uniform on `[0, 1]`, with a share of values snapped to `{0, 0.5, 1}` or
/// to a coarse grid so that boundary cases come up.
pub fn random_values<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let style = rng.gen_range(0..4);
    (0..n)
        .map(|_| match style {
            0 => rng.gen::<f64>(),
            1 => [0.0, 0.5, 1.0][rng.gen_range(0..3)],
            2 => rng.gen_range(0..=10) as f64 / 10.0,
            _ => {
                if rng.gen_bool(0.5) {
                    [0.0, 0.5, 1.0][rng.gen_range(0..3)]
                } else {
                    rng.gen::<f64>()
                }
            }
        })
        .collect()
}
