//! Named algebras used by tests and the command line.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::Algebra;
use crate::linalg::{format_scalar, int, parse_scalar, Matrix, Scalar};
use crate::structure::{build_from_construction, ConstructionData, StructureError};

/// Small Lie algebras, used as inputs to the construction.
pub const LIE_NAMES: [&str; 6] = ["abelian-1", "abelian-2", "abelian-3", "nonabelian-2", "heisenberg", "sl2"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog entry `{name}` (available: {})", available.join(", "))]
    Unknown { name: String, available: Vec<String> },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

type Product<'a> = (&'a str, &'a str, &'a [(i64, &'a str)]);

fn build(name: &str, basis: &str, products: &[Product]) -> Algebra {
    let names: Vec<String> = basis.split_whitespace().map(String::from).collect();
    let idx = |s: &str| names.iter().position(|n| n == s).expect("catalog basis name");
    let rows = products
        .iter()
        .map(|(x, y, combo)| {
            let mut v = vec![int(0); names.len()];
            for (c, z) in combo.iter() {
                v[idx(z)] += int(*c);
            }
            (idx(x), idx(y), v)
        })
        .collect();
    Algebra::new(name, names.clone(), rows).expect("catalog tables are anticommutative")
}

/// `L` on `a, b, c, d` with `bc = d`, `da = d`: a binary-Lie algebra in `w` that is not Malcev.
pub fn four_dim_l() -> Algebra {
    build("paper-L", "a b c d", &[("b", "c", &[(1, "d")]), ("d", "a", &[(1, "d")])])
}

/// Construction data of `B(α₁,α₂,α₃)`: `L = kc`, `P = span{t,a,b}`, `ψ(t) = id`, `ψ(a) = ψ(b) = 0`,
/// `λ(t,a) = α₁c`, `λ(t,b) = α₂c`, `λ(a,b) = α₃c`.
pub fn example_construction(a1: &Scalar, a2: &Scalar, a3: &Scalar) -> ConstructionData {
    let lie = lie_algebra("abelian-1").expect("builtin");
    let mut lambda = BTreeMap::new();
    for (key, alpha) in [((0, 1), a1), ((0, 2), a2), ((1, 2), a3)] {
        if *alpha != int(0) {
            lambda.insert(key, vec![alpha.clone()]);
        }
    }
    ConstructionData {
        name: example_name(a1, a2, a3),
        l0: ConstructionData::canonical_l0(&lie),
        lie,
        p_names: vec!["t".into(), "a".into(), "b".into()],
        psi: vec![Matrix::identity(1), Matrix::zeros(1, 1), Matrix::zeros(1, 1)],
        lambda,
    }
}

fn example_name(a1: &Scalar, a2: &Scalar, a3: &Scalar) -> String {
    format!("B({},{},{})", format_scalar(a1), format_scalar(a2), format_scalar(a3))
}

/// `B(α₁,α₂,α₃)`, built through the construction.
pub fn example_b(a1: &Scalar, a2: &Scalar, a3: &Scalar) -> Result<Algebra, StructureError> {
    build_from_construction(&example_construction(a1, a2, a3))
}

pub fn lie_algebra(name: &str) -> Option<Algebra> {
    Some(match name {
        "abelian-1" => Algebra::zero_algebra(name, vec!["c".into()]),
        "abelian-2" => Algebra::zero_algebra(name, vec!["x".into(), "y".into()]),
        "abelian-3" => Algebra::zero_algebra(name, vec!["x".into(), "y".into(), "z".into()]),
        "nonabelian-2" => build(name, "x y", &[("x", "y", &[(1, "y")])]),
        "heisenberg" => build(name, "x y z", &[("x", "y", &[(1, "z")])]),
        "sl2" => build(name, "h e f", &[("h", "e", &[(2, "e")]), ("h", "f", &[(-2, "f")]), ("e", "f", &[(1, "h")])]),
        _ => return None,
    })
}

/// Four-dimensional Malcev algebra that is not Lie.
pub fn malcev4() -> Algebra {
    build(
        "malcev-4",
        "e1 e2 e3 e4",
        &[
            ("e1", "e2", &[(-1, "e2")]),
            ("e1", "e3", &[(-1, "e3")]),
            ("e1", "e4", &[(1, "e4")]),
            ("e2", "e3", &[(2, "e4")]),
        ],
    )
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
}

pub const ENTRIES: [CatalogEntry; 10] = [
    CatalogEntry { name: "paper-L", summary: "4-dim binary-Lie algebra in w, not Malcev" },
    CatalogEntry { name: "B", summary: "B(a1,a2,a3) on t,a,b,c; pass --alpha (default 0,0,1)" },
    CatalogEntry { name: "abelian-1", summary: "1-dim Lie algebra kc" },
    CatalogEntry { name: "abelian-2", summary: "2-dim abelian Lie algebra" },
    CatalogEntry { name: "abelian-3", summary: "3-dim abelian Lie algebra" },
    CatalogEntry { name: "nonabelian-2", summary: "2-dim Lie algebra with xy = y" },
    CatalogEntry { name: "heisenberg", summary: "3-dim Heisenberg Lie algebra" },
    CatalogEntry { name: "sl2", summary: "sl(2) in the basis h, e, f" },
    CatalogEntry { name: "malcev-4", summary: "4-dim Malcev algebra that is not Lie" },
    CatalogEntry { name: "zero-3", summary: "3-dim algebra with zero product" },
];

/// Parses `a1,a2,a3` into three rationals.
pub fn parse_alpha(text: &str) -> Result<[Scalar; 3], CatalogError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CatalogError::Parameters(format!("expected three comma-separated rationals, got `{text}`")));
    }
    let mut out = [int(0), int(0), int(0)];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = parse_scalar(p).map_err(|e| CatalogError::Parameters(e.to_string()))?;
    }
    Ok(out)
}

/// Looks up a catalog entry; `alpha` applies to `B` only.
pub fn lookup(name: &str, alpha: Option<&[Scalar; 3]>) -> Result<Algebra, CatalogError> {
    if alpha.is_some() && name != "B" {
        return Err(CatalogError::Parameters("--alpha applies to B only".into()));
    }
    match name {
        "paper-L" => Ok(four_dim_l()),
        "B" => {
            let default = [int(0), int(0), int(1)];
            let [a1, a2, a3] = alpha.unwrap_or(&default);
            Ok(example_b(a1, a2, a3)?)
        }
        "malcev-4" => Ok(malcev4()),
        "zero-3" => Ok(Algebra::zero_algebra(name, vec!["u".into(), "v".into(), "w".into()])),
        _ => lie_algebra(name).ok_or_else(|| CatalogError::Unknown {
            name: name.to_string(),
            available: ENTRIES.iter().map(|e| e.name.to_string()).collect(),
        }),
    }
}
