//! Text forms shared by the CLI and the file formats.
//!
//! Groups are `[1,1,16]`, elements `(0,1,-12)`, matrices `[[2,-1],[-1,2]]`
//! and digraphs `{"moduli":[3,24],"gens":[[0,1],[-1,3]]}`.

use crate::abelian::InvariantFactors;
use crate::cayley::{CayleyDigraph, DigraphLiteral};
use crate::error::{Error, Result};
use crate::zmatrix::IntMatrix;

fn json<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T> {
    serde_json::from_str(s.trim()).map_err(|e| Error::Parse(format!("{what} {s:?}: {e}")))
}

pub fn parse_group(s: &str) -> Result<InvariantFactors> {
    InvariantFactors::new(json::<Vec<u64>>(s, "group")?)
}

/// Integer vector in either `(a,b,c)` or `[a,b,c]` form.
pub fn parse_element(s: &str) -> Result<Vec<i64>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .map(|r| format!("[{r}]"))
        .unwrap_or_else(|| t.to_string());
    json(&inner, "element")
}

pub fn parse_matrix(s: &str) -> Result<IntMatrix> {
    IntMatrix::from_rows(&json::<Vec<Vec<i64>>>(s, "matrix")?)
}

pub fn parse_digraph(s: &str) -> Result<CayleyDigraph> {
    CayleyDigraph::try_from(json::<DigraphLiteral>(s, "digraph")?)
}
