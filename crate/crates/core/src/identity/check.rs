use super::{IdentityDef, IdentityError, Poly};
use crate::algebra::{Algebra, Element};
use crate::linalg::{to_dense, to_sparse, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Maximum number of basis-tuple evaluations a single check may perform.
    pub tuple_budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { tuple_budget: 10_000_000 }
    }
}

/// A failing basis assignment for one polarized component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub component: usize,
    pub variables: Vec<String>,
    /// Basis index assigned to each variable.
    pub assignment: Vec<usize>,
    pub value: Element,
}

impl Witness {
    pub fn describe(&self, alg: &Algebra) -> String {
        let parts: Vec<String> = self
            .variables
            .iter()
            .zip(&self.assignment)
            .map(|(v, &i)| format!("{v}={}", alg.basis_names()[i]))
            .collect();
        format!("{}; value {}", parts.join(", "), alg.format_element(&self.value))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    pub witness: Option<Witness>,
}

pub fn check_identity(alg: &Algebra, id: &IdentityDef) -> Result<CheckOutcome, IdentityError> {
    check_identity_with(alg, id, CheckOptions::default())
}

/// Evaluates every polarized component on all basis tuples, in lexicographic
/// order, stopping at the first nonzero value.
pub fn check_identity_with(alg: &Algebra, id: &IdentityDef, opts: CheckOptions) -> Result<CheckOutcome, IdentityError> {
    let system = id.polarize();
    let n = alg.dim();
    let k = system.variables.len();
    let per_component = (n as u128).pow(k as u32);
    let needed = per_component * system.components.len() as u128;
    if needed > opts.tuple_budget as u128 {
        return Err(IdentityError::TupleBudget { needed, budget: opts.tuple_budget });
    }
    let basis: Vec<SparseVec> = (0..n).map(|i| to_sparse(alg.basis_element(i).coords())).collect();
    for (ci, component) in system.components.iter().enumerate() {
        if let Some((assignment, value)) = first_failure(alg, component, k, &basis) {
            return Ok(CheckOutcome {
                holds: false,
                witness: Some(Witness {
                    component: ci,
                    variables: system.variables.clone(),
                    assignment,
                    value: Element::from_coords(to_dense(&value, n)),
                }),
            });
        }
    }
    Ok(CheckOutcome { holds: true, witness: None })
}

fn first_failure(alg: &Algebra, poly: &Poly, k: usize, basis: &[SparseVec]) -> Option<(Vec<usize>, SparseVec)> {
    let n = basis.len();
    if poly.is_zero() || (n == 0 && k > 0) {
        return None;
    }
    let mut tuple = vec![0usize; k];
    let mut values: Vec<SparseVec> = vec![Vec::new(); k];
    loop {
        for (v, &i) in values.iter_mut().zip(&tuple) {
            v.clone_from(&basis[i]);
        }
        let value = poly.evaluate(alg, &values);
        if !value.is_empty() {
            return Some((tuple, value));
        }
        // odometer, last variable fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Value of `lhs − rhs` at an assignment of the identity's own (unpolarized) variables.
pub fn evaluate_identity(alg: &Algebra, id: &IdentityDef, assignment: &[Element]) -> Result<Element, IdentityError> {
    if assignment.len() != id.variables.len() {
        return Err(IdentityError::Arity { expected: id.variables.len(), found: assignment.len() });
    }
    let mut values = Vec::with_capacity(assignment.len());
    for x in assignment {
        if x.dim() != alg.dim() {
            return Err(crate::algebra::AlgebraError::DimensionMismatch { expected: alg.dim(), found: x.dim() }.into());
        }
        values.push(to_sparse(x.coords()));
    }
    Ok(Element::from_coords(to_dense(&id.poly().evaluate(alg, &values), alg.dim())))
}

/// First basis assignment (lexicographic) on which the unpolarized identity fails.
///
/// Can be `None` even when the identity fails, since a non-multilinear identity
/// may vanish on all basis tuples but not on their sums.
pub fn find_direct_failure(
    alg: &Algebra,
    id: &IdentityDef,
    opts: CheckOptions,
) -> Result<Option<(Vec<usize>, Element)>, IdentityError> {
    let n = alg.dim();
    let k = id.variables.len();
    let needed = (n as u128).pow(k as u32);
    if needed > opts.tuple_budget as u128 {
        return Err(IdentityError::TupleBudget { needed, budget: opts.tuple_budget });
    }
    let basis: Vec<SparseVec> = (0..n).map(|i| to_sparse(alg.basis_element(i).coords())).collect();
    Ok(first_failure(alg, id.poly(), k, &basis).map(|(a, v)| (a, Element::from_coords(to_dense(&v, n)))))
}
