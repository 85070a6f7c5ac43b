//! Fixed workloads shared by the benchmarks.

use cayden::{CayleyDigraph, IntMatrix};

/// `Cay(Z_3 ⊕ Z_24, {(0,1),(-1,3)})`.
pub fn gamma2() -> CayleyDigraph {
    CayleyDigraph::from_parts(&[3, 24], &[&[0, 1], &[-1, 3]]).expect("valid digraph")
}

/// `Cay(Z_16, {1, 4, 5})` in lifted form.
pub fn cubic16() -> CayleyDigraph {
    CayleyDigraph::from_parts(&[1, 1, 16], &[&[0, 0, 1], &[0, 1, -12], &[1, 0, -11]])
        .expect("valid digraph")
}

pub fn snf_input() -> IntMatrix {
    IntMatrix::from_rows(&[vec![-1i64, -1, 0], vec![-1, 0, -4], vec![1, -3, 0]]).expect("3x3")
}
