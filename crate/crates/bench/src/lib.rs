//! Fixtures shared by the benchmarks.

use arrcensus_core::{random_normal_system, DiscriminantalArrangement, NormalSystem};

/// Deterministic integer normal system with entries in `[-9, 9]`.
pub fn system(n: usize, m: usize) -> NormalSystem {
    random_normal_system(n, m, 1, 9).expect("sampling succeeds").system
}

pub fn arrangement(n: usize, m: usize) -> (NormalSystem, DiscriminantalArrangement) {
    let ns = system(n, m);
    let da = DiscriminantalArrangement::build(&ns);
    (ns, da)
}
