use super::{check_identity_with, parse_identity, CheckOptions, IdentityDef, IdentityError, Witness};
use crate::algebra::Algebra;

/// Names accepted by [`variety`], in report order.
pub const VARIETY_NAMES: [&str; 7] = ["lie", "malcev", "binary-lie", "w", "v", "lam", "alam"];

const DEFINITIONS: [(&str, &str, &[&str]); 7] = [
    ("lie", "Lie algebras", &["x*x = 0", "J(x,y,z) = 0"]),
    ("malcev", "Malcev algebras", &["x*x = 0", "J(x,y,x*z) = J(x,y,z)*x"]),
    ("binary-lie", "binary-Lie algebras", &["x*x = 0", "J(x,y,x*y) = 0"]),
    ("w", "binary-Lie algebras with J(x,y,zu) = 0", &["x*x = 0", "J(x,y,z*u) = 0"]),
    ("v", "binary-Lie algebras with J(x,y,xz) = 0", &["x*x = 0", "J(x,y,x*z) = 0"]),
    ("lam", "tangent algebras of left-automorphic Moufang loops", &["x*x = 0", "J(x,y,z*t) = 0", "J(x,y,z)*t = 0"]),
    (
        "alam",
        "tangent algebras of almost left-automorphic Moufang loops",
        &["x*x = 0", "J(x,y,x*z) = 0", "J(x,y,z)*x = 0"],
    ),
];

/// A variety presented by a finite set of identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variety {
    pub name: String,
    pub description: String,
    pub identities: Vec<IdentityDef>,
}

impl Variety {
    pub fn from_identities(name: impl Into<String>, identities: Vec<IdentityDef>) -> Self {
        Variety { name: name.into(), description: String::new(), identities }
    }
}

pub fn builtin_varieties() -> Vec<Variety> {
    VARIETY_NAMES.iter().map(|n| variety(n).expect("builtin name")).collect()
}

pub fn variety(name: &str) -> Result<Variety, IdentityError> {
    let (_, description, texts) =
        DEFINITIONS.iter().find(|(n, _, _)| *n == name).ok_or_else(|| IdentityError::UnknownVariety {
            name: name.to_string(),
            available: VARIETY_NAMES.iter().map(|s| s.to_string()).collect(),
        })?;
    let identities = texts.iter().map(|t| parse_identity(t).expect("builtin identities parse")).collect();
    Ok(Variety { name: name.to_string(), description: description.to_string(), identities })
}

/// Outcome of checking all identities of one variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub variety: String,
    pub holds: bool,
    /// First failing identity and its witness.
    pub failure: Option<(IdentityDef, Witness)>,
}

pub fn membership(alg: &Algebra, v: &Variety, opts: CheckOptions) -> Result<Membership, IdentityError> {
    for id in &v.identities {
        let out = check_identity_with(alg, id, opts)?;
        if !out.holds {
            let witness = out.witness.expect("failing checks carry a witness");
            return Ok(Membership { variety: v.name.clone(), holds: false, failure: Some((id.clone(), witness)) });
        }
    }
    Ok(Membership { variety: v.name.clone(), holds: true, failure: None })
}

/// Membership in every built-in variety.
pub fn classify(alg: &Algebra) -> Result<Vec<Membership>, IdentityError> {
    classify_with(alg, CheckOptions::default())
}

pub fn classify_with(alg: &Algebra, opts: CheckOptions) -> Result<Vec<Membership>, IdentityError> {
    builtin_varieties().iter().map(|v| membership(alg, v, opts)).collect()
}
