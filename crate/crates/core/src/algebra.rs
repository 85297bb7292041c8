//! Finite-dimensional anticommutative algebras given by structure constants.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::identity::Magma;
use crate::linalg::{
    self, is_zero_vec, to_dense, to_sparse, LinalgError, Matrix, Scalar, SparseAccumulator, SparseVec,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("element has {found} coordinates but the algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("product e{0}·e{0} must vanish in an anticommutative algebra")]
    NonzeroSquare(usize),
    #[error("product of basis pair ({0}, {1}) specified twice")]
    DuplicatePair(usize, usize),
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("subspace is not closed under multiplication")]
    NotClosed,
    #[error("change of basis matrix is singular")]
    SingularBasis,
    #[error("structure constants are not anticommutative")]
    NotAnticommutative,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Coordinate vector relative to an algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    coords: Vec<Scalar>,
}

impl Element {
    pub fn zero(dim: usize) -> Self {
        Element { coords: vec![Scalar::zero(); dim] }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coords[i] = Scalar::one();
        e
    }

    pub fn from_coords(coords: Vec<Scalar>) -> Self {
        Element { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Element { coords: linalg::ints(coords) }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element { coords: self.coords.iter().map(|x| x * c).collect() }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        Element { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        Element { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

/// A linear subspace of ℚⁿ stored as the nonzero rows of its reduced echelon form.
///
/// Canonical: two subspaces are equal iff their `Subspace` values are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| Element::basis(ambient, i).coords).collect())
            .expect("unit vectors have the ambient length")
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self, AlgebraError> {
        let m = Matrix::from_rows_with_cols(vectors, ambient)?;
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Subspace { ambient, basis, pivots })
    }

    pub fn span_elements(ambient: usize, elements: &[Element]) -> Result<Self, AlgebraError> {
        Self::span(ambient, elements.iter().map(|e| e.coords.clone()).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        self.basis.iter().cloned().map(Element::from_coords).collect()
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Coordinates of `v` in this subspace's basis, if `v` lies in it.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient {
            return None;
        }
        // rref rows have a unit at their pivot and zeros at other pivots
        let coeffs: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(row) {
                *r -= c * x;
            }
        }
        is_zero_vec(&residual).then_some(coeffs)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, AlgebraError> {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, vs)
    }

    /// Unit vectors on the non-pivot coordinates: the canonical complement.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        (0..self.ambient).filter(|i| !self.pivots.contains(i)).collect()
    }
}

/// An anticommutative algebra `eᵢ·eⱼ = Σₖ c[i][j][k] eₖ` over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    name: String,
    basis_names: Vec<String>,
    // table[i * n + j] = eᵢ·eⱼ
    table: Vec<SparseVec>,
}

impl Algebra {
    /// Builds an algebra from products `eᵢ·eⱼ` for distinct pairs; the opposite
    /// products are filled in by anticommutativity and unlisted pairs are zero.
    pub fn new(
        name: impl Into<String>,
        basis_names: Vec<String>,
        products: Vec<(usize, usize, Vec<Scalar>)>,
    ) -> Result<Self, AlgebraError> {
        let n = basis_names.len();
        for (k, name) in basis_names.iter().enumerate() {
            if basis_names[..k].contains(name) {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        let mut table = vec![Vec::new(); n * n];
        let mut seen = vec![false; n * n];
        for (i, j, v) in products {
            if i >= n || j >= n {
                return Err(AlgebraError::IndexOutOfRange(i.max(j)));
            }
            if v.len() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, found: v.len() });
            }
            if i == j {
                if is_zero_vec(&v) {
                    continue;
                }
                return Err(AlgebraError::NonzeroSquare(i));
            }
            if seen[i * n + j] {
                return Err(AlgebraError::DuplicatePair(i.min(j), i.max(j)));
            }
            seen[i * n + j] = true;
            seen[j * n + i] = true;
            table[j * n + i] = to_sparse(&v.iter().map(|x| -x).collect::<Vec<_>>());
            table[i * n + j] = to_sparse(&v);
        }
        Ok(Algebra { name: name.into(), basis_names, table })
    }

    /// Builds from a full table `c[i][j][k]`, flattened as `(i·n + j)·n + k`;
    /// the table must already be anticommutative.
    pub fn from_table(name: impl Into<String>, basis_names: Vec<String>, c: &[Scalar]) -> Result<Self, AlgebraError> {
        let n = basis_names.len();
        if c.len() != n * n * n {
            return Err(AlgebraError::DimensionMismatch { expected: n * n * n, found: c.len() });
        }
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = &c[(i * n + j) * n..(i * n + j + 1) * n];
                let w = &c[(j * n + i) * n..(j * n + i + 1) * n];
                if v.iter().zip(w).any(|(a, b)| !(a + b).is_zero()) {
                    return Err(AlgebraError::NotAnticommutative);
                }
                if i < j {
                    products.push((i, j, v.to_vec()));
                }
                if i == j && !is_zero_vec(v) {
                    return Err(AlgebraError::NotAnticommutative);
                }
            }
        }
        Self::new(name, basis_names, products)
    }

    pub fn zero_algebra(name: impl Into<String>, basis_names: Vec<String>) -> Self {
        Self::new(name, basis_names, Vec::new()).expect("zero table is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::basis(self.dim(), i)
    }

    /// Basis element by name; panics on an unknown name (test and fixture helper).
    pub fn e(&self, name: &str) -> Element {
        let i = self.basis_index(name).unwrap_or_else(|| panic!("no basis element `{name}`"));
        self.basis_element(i)
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        let n = self.dim();
        self.table[i * n + j].iter().find(|(idx, _)| *idx == k).map_or_else(Scalar::zero, |(_, x)| x.clone())
    }

    /// Product of basis elements as a sparse vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    /// Full table flattened as `(i·n + j)·n + k`.
    pub fn table(&self) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n * n);
        for slot in &self.table {
            out.extend(to_dense(slot, n));
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    fn check(&self, x: &Element) -> Result<(), AlgebraError> {
        if x.dim() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(())
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        let p = self.mul_sparse(&to_sparse(&x.coords), &to_sparse(&y.coords));
        Ok(Element::from_coords(to_dense(&p, self.dim())))
    }

    pub(crate) fn mul_sparse(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let n = self.dim();
        let mut acc = SparseAccumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                let prod = &self.table[i * n + j];
                if !prod.is_empty() {
                    acc.add_scaled(&(a * b), prod);
                }
            }
        }
        acc.finish()
    }

    /// `J(x,y,z) = (xy)z + (yz)x + (zx)y`.
    pub fn jacobian(&self, x: &Element, y: &Element, z: &Element) -> Result<Element, AlgebraError> {
        let xy_z = self.multiply(&self.multiply(x, y)?, z)?;
        let yz_x = self.multiply(&self.multiply(y, z)?, x)?;
        let zx_y = self.multiply(&self.multiply(z, x)?, y)?;
        Ok(&(&xy_z + &yz_x) + &zx_y)
    }

    /// Matrix of `v ↦ v·x` (column j is `eⱼ·x`).
    pub fn right_multiplication(&self, x: &Element) -> Result<Matrix, AlgebraError> {
        let cols = (0..self.dim())
            .map(|j| Ok(self.multiply(&self.basis_element(j), x)?.coords))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Ok(Matrix::from_columns(&cols, self.dim())?)
    }

    /// Matrix of `v ↦ x·v` (column j is `x·eⱼ`).
    pub fn left_multiplication(&self, x: &Element) -> Result<Matrix, AlgebraError> {
        let cols = (0..self.dim())
            .map(|j| Ok(self.multiply(x, &self.basis_element(j))?.coords))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Ok(Matrix::from_columns(&cols, self.dim())?)
    }

    /// Span of all products `u·v` with `u ∈ s`, `v ∈ t`.
    pub fn product_of(&self, s: &Subspace, t: &Subspace) -> Result<Subspace, AlgebraError> {
        let mut vs = Vec::new();
        for u in s.basis() {
            for v in t.basis() {
                let p = self.mul_sparse(&to_sparse(u), &to_sparse(v));
                if !p.is_empty() {
                    vs.push(to_dense(&p, self.dim()));
                }
            }
        }
        Subspace::span(self.dim(), vs)
    }

    pub fn subalgebra_generated(&self, gens: &[Element]) -> Result<Subspace, AlgebraError> {
        if gens.is_empty() {
            return Err(AlgebraError::EmptyGenerators);
        }
        for g in gens {
            self.check(g)?;
        }
        let mut current = Subspace::span_elements(self.dim(), gens)?;
        for _ in 0..=self.dim() {
            let next = current.sum(&self.product_of(&current, &current)?)?;
            if next == current {
                break;
            }
            current = next;
        }
        Ok(current)
    }

    /// Smallest two-sided ideal containing `gens`; right multiples suffice by anticommutativity.
    pub fn ideal_generated(&self, gens: &[Element]) -> Result<Subspace, AlgebraError> {
        if gens.is_empty() {
            return Err(AlgebraError::EmptyGenerators);
        }
        for g in gens {
            self.check(g)?;
        }
        let whole = Subspace::whole(self.dim());
        let mut current = Subspace::span_elements(self.dim(), gens)?;
        for _ in 0..=self.dim() {
            let next = current.sum(&self.product_of(&current, &whole)?)?;
            if next == current {
                break;
            }
            current = next;
        }
        Ok(current)
    }

    /// `A² = span{eᵢ·eⱼ}`.
    pub fn product_space(&self) -> Subspace {
        let whole = Subspace::whole(self.dim());
        self.product_of(&whole, &whole).expect("same ambient dimension")
    }

    /// `Z(A) = {x : x·A = 0}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        // rows: coordinate k of x·eᵢ, as a linear form in x
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|l| self.structure_constant(l, i, k)).collect());
            }
        }
        self.kernel(rows)
    }

    /// `Lie(A) = {x : J(x, y, z) = 0 for all y, z}`.
    pub fn lie_center(&self) -> Subspace {
        let n = self.dim();
        let basis: Vec<Element> = (0..n).map(|i| self.basis_element(i)).collect();
        let mut rows = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let columns: Vec<Vec<Scalar>> = (0..n)
                    .map(|l| self.jacobian(&basis[l], &basis[i], &basis[j]).expect("basis elements").coords)
                    .collect();
                for k in 0..n {
                    rows.push(columns.iter().map(|c| c[k].clone()).collect());
                }
            }
        }
        self.kernel(rows)
    }

    fn kernel(&self, rows: Vec<Vec<Scalar>>) -> Subspace {
        let n = self.dim();
        let m = Matrix::from_rows_with_cols(rows, n).expect("rows built with n columns");
        Subspace::span(n, m.null_space()).expect("null space vectors have length n")
    }

    /// Ideal generated by all Jacobians `J(eᵢ,eⱼ,eₖ)`, `i<j<k`.
    pub fn jacobian_ideal(&self) -> Subspace {
        let n = self.dim();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let jac = self
                        .jacobian(&self.basis_element(i), &self.basis_element(j), &self.basis_element(k))
                        .expect("basis elements");
                    if !jac.is_zero() {
                        gens.push(jac);
                    }
                }
            }
        }
        if gens.is_empty() {
            return Subspace::zero(n);
        }
        self.ideal_generated(&gens).expect("nonempty generators")
    }

    /// `A⁽⁰⁾ = A`, `A⁽ᵏ⁺¹⁾ = A⁽ᵏ⁾·A⁽ᵏ⁾`, until the chain stabilizes.
    pub fn derived_series(&self) -> Vec<Subspace> {
        self.series(|s| self.product_of(s, s).expect("same ambient"))
    }

    /// `A¹ = A`, `Aᵏ⁺¹ = Aᵏ·A`, until the chain stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let whole = Subspace::whole(self.dim());
        self.series(|s| self.product_of(s, &whole).expect("same ambient"))
    }

    fn series(&self, step: impl Fn(&Subspace) -> Subspace) -> Vec<Subspace> {
        let mut out = vec![Subspace::whole(self.dim())];
        for _ in 0..=self.dim() {
            let last = out.last().expect("nonempty");
            let next = step(last);
            if &next == last {
                break;
            }
            let done = next.is_zero();
            out.push(next);
            if done {
                break;
            }
        }
        out
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(Subspace::is_zero)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(Subspace::is_zero)
    }

    /// Whether every `J(eᵢ,eⱼ,eₖ)` with `i<j<k` vanishes.
    pub fn satisfies_jacobi(&self) -> bool {
        self.jacobi_failure().is_none()
    }

    /// First basis triple `i<j<k` with nonzero Jacobian.
    pub fn jacobi_failure(&self) -> Option<(usize, usize, usize, Element)> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let jac = self
                        .jacobian(&self.basis_element(i), &self.basis_element(j), &self.basis_element(k))
                        .expect("basis elements");
                    if !jac.is_zero() {
                        return Some((i, j, k, jac));
                    }
                }
            }
        }
        None
    }

    /// The subalgebra `s` as a standalone algebra on its echelon basis.
    pub fn restrict(&self, s: &Subspace) -> Result<Algebra, AlgebraError> {
        if s.ambient_dim() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim(), found: s.ambient_dim() });
        }
        let m = s.dim();
        let names = self.names_for(s.basis());
        let mut products = Vec::new();
        for a in 0..m {
            for b in (a + 1)..m {
                let p = to_dense(&self.mul_sparse(&to_sparse(&s.basis()[a]), &to_sparse(&s.basis()[b])), self.dim());
                let coords = s.coordinates(&p).ok_or(AlgebraError::NotClosed)?;
                products.push((a, b, coords));
            }
        }
        Algebra::new(format!("{}|sub", self.name), names, products)
    }

    // Keep a basis name when the vector is exactly that basis element.
    fn names_for(&self, vectors: &[Vec<Scalar>]) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for (k, v) in vectors.iter().enumerate() {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            let candidate = match nz.as_slice() {
                [i] if v[*i].is_one() => self.basis_names[*i].clone(),
                _ => format!("u{}", k + 1),
            };
            let candidate = if names.contains(&candidate) { format!("u{}_{}", k + 1, k) } else { candidate };
            names.push(candidate);
        }
        names
    }

    /// Re-expresses the algebra in a new basis given in old coordinates.
    pub fn change_basis(&self, new_basis: &[Vec<Scalar>], names: Vec<String>) -> Result<Algebra, AlgebraError> {
        let n = self.dim();
        if new_basis.len() != n || names.len() != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, found: new_basis.len() });
        }
        let m = Matrix::from_columns(new_basis, n)?;
        let inv = m.inverse().ok_or(AlgebraError::SingularBasis)?;
        let mut products = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                let p = to_dense(&self.mul_sparse(&to_sparse(&new_basis[a]), &to_sparse(&new_basis[b])), n);
                products.push((a, b, inv.mul_vec(&p)?));
            }
        }
        Algebra::new(self.name.clone(), names, products)
    }

    /// Human-readable combination of basis names, e.g. `2*a - 1/2*d`.
    pub fn format_element(&self, x: &Element) -> String {
        format_combination(&self.basis_names, x.coords())
    }

    pub fn format_subspace(&self, s: &Subspace) -> String {
        if s.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = s.basis().iter().map(|v| format_combination(&self.basis_names, v)).collect();
        format!("span{{{}}}", parts.join(", "))
    }
}

/// Renders `Σ cᵢ·nameᵢ` with unit coefficients elided.
pub fn format_combination(names: &[String], coords: &[Scalar]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        let negative = c < &Scalar::zero();
        let abs = if negative { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&linalg::format_scalar(&abs));
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim())
    }
}

impl Magma for Algebra {
    type Elem = SparseVec;

    fn zero(&self) -> SparseVec {
        Vec::new()
    }

    fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.mul_sparse(x, y)
    }

    fn add_scaled(&self, acc: &mut SparseVec, c: &Scalar, x: &SparseVec) {
        *acc = linalg::sparse_axpy(acc, c, x);
    }

    fn is_zero(&self, x: &SparseVec) -> bool {
        x.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::int;

    fn names(list: &str) -> Vec<String> {
        list.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn four_dim_algebra_products() {
        let l = catalog::four_dim_l();
        assert_eq!(l.multiply(&l.e("b"), &l.e("c")).unwrap(), l.e("d"));
        assert_eq!(l.multiply(&l.e("d"), &l.e("a")).unwrap(), l.e("d"));
        assert_eq!(l.multiply(&l.e("a"), &l.e("d")).unwrap(), -&l.e("d"));
        assert!(l.multiply(&l.e("a"), &Element::zero(4)).unwrap().is_zero());
        assert_eq!(l.jacobian(&l.e("a"), &l.e("b"), &l.e("c")).unwrap(), l.e("d"));
        assert!(l.jacobian(&l.e("a"), &l.e("b"), &l.e("b")).unwrap().is_zero());
    }

    #[test]
    fn example_b_jacobian() {
        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        assert_eq!(b.jacobian(&b.e("t"), &b.e("a"), &b.e("b")).unwrap(), b.e("c"));
    }

    #[test]
    fn rejects_bad_tables() {
        let v = linalg::ints(&[0, 1]);
        assert_eq!(Algebra::new("x", names("p q"), vec![(0, 0, v.clone())]), Err(AlgebraError::NonzeroSquare(0)));
        assert_eq!(
            Algebra::new("x", names("p q"), vec![(0, 1, v.clone()), (1, 0, v)]),
            Err(AlgebraError::DuplicatePair(0, 1))
        );
        assert!(matches!(Algebra::new("x", names("p p"), vec![]), Err(AlgebraError::DuplicateName(_))));
        let l = catalog::four_dim_l();
        assert!(matches!(
            l.multiply(&Element::zero(3), &l.e("a")),
            Err(AlgebraError::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn generated_subalgebras() {
        let l = catalog::four_dim_l();
        let s = l.subalgebra_generated(&[l.e("a"), l.e("b"), l.e("c")]).unwrap();
        assert!(s.is_whole());
        let d = l.subalgebra_generated(&[l.e("d")]).unwrap();
        assert_eq!(d, Subspace::span_elements(4, &[l.e("d")]).unwrap());
        assert_eq!(l.subalgebra_generated(&[]), Err(AlgebraError::EmptyGenerators));

        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        let s = b.subalgebra_generated(&[b.e("a"), b.e("b")]).unwrap();
        assert_eq!(s, Subspace::span_elements(4, &[b.e("a"), b.e("b"), b.e("c")]).unwrap());
    }

    #[test]
    fn generated_ideals() {
        let l = catalog::four_dim_l();
        let d = Subspace::span_elements(4, &[l.e("d")]).unwrap();
        assert_eq!(l.ideal_generated(&[l.e("d")]).unwrap(), d);
        assert!(l.ideal_generated(&[Element::zero(4)]).unwrap().is_zero());
        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        assert_eq!(b.ideal_generated(&[b.e("c")]).unwrap(), Subspace::span_elements(4, &[b.e("c")]).unwrap());
    }

    #[test]
    fn centers_and_product_spaces() {
        let l = catalog::four_dim_l();
        let kd = Subspace::span_elements(4, &[l.e("d")]).unwrap();
        assert_eq!(l.product_space(), kd);
        assert!(l.center().is_zero());
        assert_eq!(l.lie_center(), kd);
        assert_eq!(l.jacobian_ideal(), kd);

        let ab = Algebra::zero_algebra("ab", names("x y z"));
        assert!(ab.product_space().is_zero());
        assert!(ab.center().is_whole());
        assert!(ab.lie_center().is_whole());

        let kc = catalog::lie_algebra("abelian-1").unwrap();
        assert!(kc.center().is_whole());

        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        let kc = Subspace::span_elements(4, &[b.e("c")]).unwrap();
        assert_eq!(b.product_space(), kc);
        assert_eq!(b.lie_center(), kc);
        assert_eq!(b.jacobian_ideal(), kc);

        let h = catalog::lie_algebra("heisenberg").unwrap();
        assert!(h.lie_center().is_whole());
        assert!(h.jacobian_ideal().is_zero());
    }

    #[test]
    fn series_of_four_dim_algebra() {
        let l = catalog::four_dim_l();
        let kd = Subspace::span_elements(4, &[l.e("d")]).unwrap();
        assert!(l.is_solvable());
        assert!(!l.is_nilpotent());
        let lcs = l.lower_central_series();
        assert_eq!(lcs.len(), 2);
        assert_eq!(lcs[1], kd);
        let ab = Algebra::zero_algebra("ab", names("x y"));
        assert!(ab.is_solvable() && ab.is_nilpotent());
    }

    #[test]
    fn restriction() {
        let l = catalog::four_dim_l();
        let kd = Subspace::span_elements(4, &[l.e("d")]).unwrap();
        let r = l.restrict(&kd).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.is_abelian());

        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        let s = Subspace::span_elements(4, &[b.e("a"), b.e("b"), b.e("c")]).unwrap();
        let r = b.restrict(&s).unwrap();
        assert_eq!(r.basis_names(), &names("a b c")[..]);
        assert_eq!(r.multiply(&r.e("a"), &r.e("b")).unwrap(), r.e("c"));
        assert!(r.multiply(&r.e("a"), &r.e("c")).unwrap().is_zero());
        assert!(r.multiply(&r.e("b"), &r.e("c")).unwrap().is_zero());

        let whole = l.restrict(&Subspace::whole(4)).unwrap();
        assert_eq!(whole.table(), l.table());

        let not_closed = Subspace::span_elements(4, &[l.e("b"), l.e("c")]).unwrap();
        assert_eq!(l.restrict(&not_closed), Err(AlgebraError::NotClosed));
    }

    #[test]
    fn combination_formatting() {
        let n = names("a b c");
        assert_eq!(format_combination(&n, &[int(2), int(0), linalg::ratio(-1, 2)]), "2*a - 1/2*c");
        assert_eq!(format_combination(&n, &[int(0), int(-1), int(1)]), "-b + c");
        assert_eq!(format_combination(&n, &[int(0), int(0), int(0)]), "0");
    }
}
