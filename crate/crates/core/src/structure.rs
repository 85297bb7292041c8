//! Derivations, inner derivations, and the semidirect-style construction of
//! algebras in the variety `w` (`x² = 0`, `J(x,y,zu) = 0`) from a Lie algebra.
//!
//! Operators act on the right, as in `l^D`: the inner derivation of `x` is
//! `ad x : a ↦ a·x`, and the bracket of two operators is
//! `[D₁, D₂] = D₁D₂ − D₂D₁` read left to right, which as matrices acting on
//! column vectors is `M₂M₁ − M₁M₂`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, Subspace};
use crate::identity::{self, IdentityError};
use crate::linalg::{is_zero_vec, span_membership, LinalgError, Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("`{0}` is not a Lie algebra")]
    NotLie(String),
    #[error("psi({0}) is not a derivation of L")]
    NotDerivation(String),
    #[error("psi({0}) has shape {1}x{2}, expected the dimension of L")]
    PsiShape(String, usize, usize),
    #[error("expected {expected} psi matrices, found {found}")]
    PsiCount { expected: usize, found: usize },
    #[error("[psi({0}), psi({1})] is not an inner derivation of L")]
    BracketNotInner(String, String),
    #[error("lambda({0}, {1}) does not lie in the center of L")]
    LambdaNotCentral(String, String),
    #[error("lambda key ({0}, {1}) is not an ordered pair of P indices")]
    LambdaKey(usize, usize),
    #[error("L0 is not a complement of Z(L) in L")]
    BadComplement,
    #[error("basis name `{0}` used in both P and L")]
    NameClash(String),
    #[error("algebra is not in the variety w: {0}")]
    NotInW(String),
    #[error("isomorphism matrix is singular")]
    Singular,
    #[error("isomorphism matrix is {rows}x{cols} but the algebras have dimensions {source_dim} and {target_dim}")]
    Shape { rows: usize, cols: usize, source_dim: usize, target_dim: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Right multiplication `a ↦ a·x`.
pub fn ad(alg: &Algebra, x: &Element) -> Result<Matrix, AlgebraError> {
    alg.right_multiplication(x)
}

/// Operator bracket in right-action order: `M₂M₁ − M₁M₂`.
pub fn bracket(d1: &Matrix, d2: &Matrix) -> Matrix {
    let a = d2.mul(d1).expect("square matrices of equal size");
    let b = d1.mul(d2).expect("square matrices of equal size");
    a.sub(&b).expect("same shape")
}

/// Checks `D(xy) = D(x)y + xD(y)` on all basis pairs.
pub fn is_derivation(alg: &Algebra, d: &Matrix) -> bool {
    let n = alg.dim();
    if d.rows() != n || d.cols() != n {
        return false;
    }
    let image = |i: usize| Element::from_coords(d.column(i));
    for i in 0..n {
        for j in (i + 1)..n {
            let (ei, ej) = (alg.basis_element(i), alg.basis_element(j));
            let lhs = d.mul_vec(alg.multiply(&ei, &ej).expect("basis").coords()).expect("square");
            let r1 = alg.multiply(&image(i), &ej).expect("basis");
            let r2 = alg.multiply(&ei, &image(j)).expect("basis");
            let rhs = &r1 + &r2;
            if lhs != rhs.coords() {
                return false;
            }
        }
    }
    true
}

/// Basis of the derivation algebra, each a matrix acting on column vectors.
pub fn derivations(alg: &Algebra) -> Vec<Matrix> {
    let n = alg.dim();
    if n == 0 {
        return Vec::new();
    }
    let c = alg.table();
    let sc = |i: usize, j: usize, k: usize| &c[(i * n + j) * n + k];
    let var = |r: usize, col: usize| r * n + col;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                for l in 0..n {
                    row[var(k, l)] += sc(i, j, l);
                    row[var(l, i)] -= sc(l, j, k);
                    row[var(l, j)] -= sc(i, l, k);
                }
                if !is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let system = Matrix::from_rows_with_cols(rows, n * n).expect("rows of length n²");
    let basis: Vec<Matrix> =
        system.null_space().into_iter().map(|v| Matrix::from_flat(n, n, v).expect("n² entries")).collect();
    debug_assert!(basis.iter().all(|d| is_derivation(alg, d)));
    basis
}

/// Basis of `Inn L = span{ad eᵢ}`; requires the Jacobi identity.
pub fn inner_derivations(alg: &Algebra) -> Result<Vec<Matrix>, StructureError> {
    if !alg.satisfies_jacobi() {
        return Err(StructureError::NotLie(alg.name().to_string()));
    }
    let n = alg.dim();
    let flat: Vec<Vec<Scalar>> =
        (0..n).map(|i| Ok(ad(alg, &alg.basis_element(i))?.as_slice().to_vec())).collect::<Result<_, AlgebraError>>()?;
    let span = Subspace::span(n * n, flat)?;
    Ok(span.basis().iter().map(|v| Matrix::from_flat(n, n, v.clone()).expect("n² entries")).collect())
}

fn flatten(ms: &[Matrix]) -> Vec<Vec<Scalar>> {
    ms.iter().map(|m| m.as_slice().to_vec()).collect()
}

/// Input data of the construction `B = P ⊕ L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionData {
    pub name: String,
    pub lie: Algebra,
    pub p_names: Vec<String>,
    /// `psi[i]` is the derivation attached to the i-th basis vector of P.
    pub psi: Vec<Matrix>,
    /// `λ(pᵢ, pⱼ)` for `i < j`, in L coordinates; missing pairs are zero.
    pub lambda: BTreeMap<(usize, usize), Vec<Scalar>>,
    /// Basis of a complement L₀ of Z(L) in L.
    pub l0: Vec<Vec<Scalar>>,
}

impl ConstructionData {
    /// The complement of `Z(L)` spanned by the non-pivot unit vectors of its echelon basis.
    pub fn canonical_l0(lie: &Algebra) -> Vec<Vec<Scalar>> {
        lie.center().complement_coordinates().into_iter().map(|i| lie.basis_element(i).into_coords()).collect()
    }

    pub fn p_dim(&self) -> usize {
        self.p_names.len()
    }

    pub fn lambda_value(&self, i: usize, j: usize) -> Vec<Scalar> {
        let n = self.lie.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.lambda.get(&(i, j)).cloned().unwrap_or_else(|| vec![Scalar::zero(); n]),
            std::cmp::Ordering::Greater => self.lambda_value(j, i).iter().map(|x| -x).collect(),
            std::cmp::Ordering::Equal => vec![Scalar::zero(); n],
        }
    }

    /// Checks every requirement on `(L, ψ, λ, L₀)`.
    pub fn validate(&self) -> Result<(), StructureError> {
        let lie = &self.lie;
        let n = lie.dim();
        if !lie.satisfies_jacobi() {
            return Err(StructureError::NotLie(lie.name().to_string()));
        }
        if let Some(clash) = self.p_names.iter().find(|p| lie.basis_names().contains(p)) {
            return Err(StructureError::NameClash(clash.clone()));
        }
        for (k, p) in self.p_names.iter().enumerate() {
            if self.p_names[..k].contains(p) {
                return Err(StructureError::NameClash(p.clone()));
            }
        }
        if self.psi.len() != self.p_dim() {
            return Err(StructureError::PsiCount { expected: self.p_dim(), found: self.psi.len() });
        }
        for (d, name) in self.psi.iter().zip(&self.p_names) {
            if d.rows() != n || d.cols() != n {
                return Err(StructureError::PsiShape(name.clone(), d.rows(), d.cols()));
            }
            if !is_derivation(lie, d) {
                return Err(StructureError::NotDerivation(name.clone()));
            }
        }
        let inner = flatten(&inner_derivations(lie)?);
        for i in 0..self.p_dim() {
            for j in (i + 1)..self.p_dim() {
                let b = bracket(&self.psi[i], &self.psi[j]);
                if span_membership(&inner, b.as_slice())?.is_none() {
                    return Err(StructureError::BracketNotInner(self.p_names[i].clone(), self.p_names[j].clone()));
                }
            }
        }
        let center = lie.center();
        for (&(i, j), v) in &self.lambda {
            if i >= j || j >= self.p_dim() {
                return Err(StructureError::LambdaKey(i, j));
            }
            if v.len() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, found: v.len() }.into());
            }
            if !center.contains(v) {
                return Err(StructureError::LambdaNotCentral(self.p_names[i].clone(), self.p_names[j].clone()));
            }
        }
        if self.l0.iter().any(|v| v.len() != n) || self.l0.len() + center.dim() != n {
            return Err(StructureError::BadComplement);
        }
        let together = Subspace::span(n, self.l0.clone())?.sum(&center)?;
        if !together.is_whole() {
            return Err(StructureError::BadComplement);
        }
        Ok(())
    }

    /// The unique `l₀ ∈ L₀` with `ad l₀ = target`, if any.
    fn preimage_in_l0(&self, target: &Matrix) -> Result<Option<Vec<Scalar>>, StructureError> {
        let n = self.lie.dim();
        let ads: Vec<Vec<Scalar>> = self
            .l0
            .iter()
            .map(|v| Ok(ad(&self.lie, &Element::from_coords(v.clone()))?.as_slice().to_vec()))
            .collect::<Result<_, AlgebraError>>()?;
        let Some(beta) = span_membership(&ads, target.as_slice())? else {
            return Ok(None);
        };
        let mut out = vec![Scalar::zero(); n];
        for (b, v) in beta.iter().zip(&self.l0) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += b * x;
            }
        }
        Ok(Some(out))
    }
}

/// The algebra on `P ⊕ L` with
/// `(p₁,l₁)·(p₂,l₂) = (0, [p₁ψ,p₂ψ] + λ(p₁,p₂) + l₁^{p₂ψ} − l₂^{p₁ψ} + [l₁,l₂])`,
/// where the bracket of derivations is read back in `L₀` through `ad`.
///
/// Basis order: the P basis followed by the L basis.
pub fn build_from_construction(data: &ConstructionData) -> Result<Algebra, StructureError> {
    data.validate()?;
    let lie = &data.lie;
    let (p, n) = (data.p_dim(), lie.dim());
    let total = p + n;
    let embed = |v: &[Scalar]| {
        let mut out = vec![Scalar::zero(); total];
        out[p..].clone_from_slice(v);
        out
    };
    let mut products = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            let target = bracket(&data.psi[i], &data.psi[j]);
            let l0 = data
                .preimage_in_l0(&target)?
                .ok_or_else(|| StructureError::BracketNotInner(data.p_names[i].clone(), data.p_names[j].clone()))?;
            let lambda = data.lambda_value(i, j);
            let v: Vec<Scalar> = l0.iter().zip(&lambda).map(|(a, b)| a + b).collect();
            products.push((i, j, embed(&v)));
        }
        for k in 0..n {
            // p·l = −l^{pψ}
            let v: Vec<Scalar> = data.psi[i].column(k).iter().map(|x| -x).collect();
            products.push((i, p + k, embed(&v)));
        }
    }
    for k in 0..n {
        for m in (k + 1)..n {
            let v = lie.multiply(&lie.basis_element(k), &lie.basis_element(m))?;
            products.push((p + k, p + m, embed(v.coords())));
        }
    }
    let mut names = data.p_names.clone();
    names.extend(lie.basis_names().iter().cloned());
    Ok(Algebra::new(data.name.clone(), names, products)?)
}

/// Output of [`decompose`]: construction data plus the basis it is expressed in.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub data: ConstructionData,
    /// P basis then L basis, in the input algebra's coordinates.
    pub adapted_basis: Vec<Vec<Scalar>>,
    /// The input algebra rewritten in the adapted basis.
    pub adapted: Algebra,
}

/// Recovers `(L, ψ, λ)` from an algebra in `w`, with `L = Lie(B)` and P the
/// canonical complement of L.
pub fn decompose(b: &Algebra) -> Result<Decomposition, StructureError> {
    let w = identity::variety("w")?;
    let m = identity::membership(b, &w, identity::CheckOptions::default())?;
    if let Some((id, witness)) = m.failure {
        return Err(StructureError::NotInW(format!("{} fails at {}", id.name, witness.describe(b))));
    }
    let lie_center = b.lie_center();
    let p_coords = lie_center.complement_coordinates();
    let p = p_coords.len();
    let n = lie_center.dim();
    let lie = b.restrict(&lie_center)?.with_name(format!("Lie({})", b.name()));

    let mut adapted_basis: Vec<Vec<Scalar>> = p_coords.iter().map(|&i| b.basis_element(i).into_coords()).collect();
    adapted_basis.extend(lie_center.basis().iter().cloned());
    let p_names: Vec<String> = p_coords.iter().map(|&i| b.basis_names()[i].clone()).collect();
    let mut names = p_names.clone();
    names.extend(lie.basis_names().iter().cloned());
    let adapted = b.change_basis(&adapted_basis, names)?;

    // L-part of a product in the adapted basis; the P-part must vanish since B² ⊆ L.
    let l_part = |x: usize, y: usize| -> Result<Vec<Scalar>, StructureError> {
        let v = adapted.multiply(&adapted.basis_element(x), &adapted.basis_element(y))?.into_coords();
        if !is_zero_vec(&v[..p]) {
            return Err(StructureError::Internal("product leaves the Lie center".into()));
        }
        Ok(v[p..].to_vec())
    };

    let mut psi = Vec::with_capacity(p);
    for i in 0..p {
        // l^{pψ} = l·p
        let cols = (0..n).map(|k| l_part(p + k, i)).collect::<Result<Vec<_>, _>>()?;
        psi.push(Matrix::from_columns(&cols, n)?);
    }

    let center = lie.center();
    let l0 = ConstructionData::canonical_l0(&lie);
    let mut split_basis = l0.clone();
    split_basis.extend(center.basis().iter().cloned());
    let mut data = ConstructionData { name: b.name().to_string(), lie, p_names, psi, lambda: BTreeMap::new(), l0 };
    for i in 0..p {
        for j in (i + 1)..p {
            let v = l_part(i, j)?;
            let coeffs = span_membership(&split_basis, &v)?
                .ok_or_else(|| StructureError::Internal("L0 ⊕ Z(L) does not span L".into()))?;
            let k0 = data.l0.len();
            let mut z = vec![Scalar::zero(); n];
            for (c, basis_vec) in coeffs[k0..].iter().zip(center.basis()) {
                for (o, x) in z.iter_mut().zip(basis_vec) {
                    *o += c * x;
                }
            }
            let l0_part: Vec<Scalar> = v.iter().zip(&z).map(|(a, b)| a - b).collect();
            let expected = bracket(&data.psi[i], &data.psi[j]);
            if ad(&data.lie, &Element::from_coords(l0_part))? != expected {
                return Err(StructureError::Internal(format!(
                    "ad of the L0-part of {}·{} differs from the derivation bracket",
                    data.p_names[i], data.p_names[j]
                )));
            }
            if !is_zero_vec(&z) {
                data.lambda.insert((i, j), z);
            }
        }
    }
    data.validate()?;
    Ok(Decomposition { data, adapted_basis, adapted })
}

/// Checks that the linear map with matrix `m` (columns are images of the
/// source basis in target coordinates) is a bijective homomorphism.
pub fn verify_isomorphism(source: &Algebra, target: &Algebra, m: &Matrix) -> Result<bool, StructureError> {
    if m.rows() != m.cols() || m.rows() != target.dim() || m.cols() != source.dim() {
        return Err(StructureError::Shape {
            rows: m.rows(),
            cols: m.cols(),
            source_dim: source.dim(),
            target_dim: target.dim(),
        });
    }
    if m.rank() < m.rows() {
        return Err(StructureError::Singular);
    }
    let image = |x: &Element| Element::from_coords(m.mul_vec(x.coords()).expect("shape checked"));
    let n = source.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            let (ei, ej) = (source.basis_element(i), source.basis_element(j));
            let lhs = image(&source.multiply(&ei, &ej)?);
            let rhs = target.multiply(&image(&ei), &image(&ej))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

const REJECTION_ATTEMPTS: usize = 16;

fn small(rng: &mut ChaCha8Rng) -> Scalar {
    crate::linalg::int(rng.gen_range(-2..=2))
}

fn combination(rng: &mut ChaCha8Rng, basis: &[Matrix], n: usize) -> Matrix {
    let mut out = Matrix::zeros(n, n);
    for b in basis {
        let c = small(rng);
        if !c.is_zero() {
            out = crate::linalg::Matrix::from_flat(
                n,
                n,
                out.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x + &c * y).collect(),
            )
            .expect("same shape");
        }
    }
    out
}

/// Seeded random construction data over `lie` with `p_dim` outer generators.
///
/// ψ is first rejection-sampled from Der L; when no sample satisfies the
/// bracket condition, it falls back to multiples of a single derivation plus
/// inner derivations, which always does since Inn L is an ideal of Der L.
pub fn random_w_construction(seed: u64, lie: &Algebra, p_dim: usize) -> Result<ConstructionData, StructureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = lie.dim();
    let der = derivations(lie);
    let inner = inner_derivations(lie)?;
    let inner_flat = flatten(&inner);
    let brackets_inner = |psi: &[Matrix]| -> Result<bool, StructureError> {
        for i in 0..psi.len() {
            for j in (i + 1)..psi.len() {
                if span_membership(&inner_flat, bracket(&psi[i], &psi[j]).as_slice())?.is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    let mut psi = None;
    for _ in 0..REJECTION_ATTEMPTS {
        let candidate: Vec<Matrix> = (0..p_dim).map(|_| combination(&mut rng, &der, n)).collect();
        if brackets_inner(&candidate)? {
            psi = Some(candidate);
            break;
        }
    }
    let psi = match psi {
        Some(psi) => psi,
        None => {
            let d = combination(&mut rng, &der, n);
            (0..p_dim)
                .map(|_| {
                    let c = small(&mut rng);
                    let inner_part = combination(&mut rng, &inner, n);
                    inner_part.sub(&d.scale(&-c)).expect("same shape")
                })
                .collect()
        }
    };
    let center = lie.center();
    let mut lambda = BTreeMap::new();
    for i in 0..p_dim {
        for j in (i + 1)..p_dim {
            let mut v = vec![Scalar::zero(); n];
            for z in center.basis() {
                let c = small(&mut rng);
                for (o, x) in v.iter_mut().zip(z) {
                    *o += &c * x;
                }
            }
            if !is_zero_vec(&v) {
                lambda.insert((i, j), v);
            }
        }
    }
    Ok(ConstructionData {
        name: format!("w-random-{seed}"),
        lie: lie.clone(),
        p_names: (1..=p_dim).map(|k| format!("p{k}")).collect(),
        psi,
        lambda,
        l0: ConstructionData::canonical_l0(lie),
    })
}

/// Seeded random algebra in `w`, built from [`random_w_construction`].
pub fn random_w_algebra(seed: u64, lie: &Algebra, p_dim: usize) -> Result<Algebra, StructureError> {
    build_from_construction(&random_w_construction(seed, lie, p_dim)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::{int, ints};

    #[test]
    fn derivation_dimensions() {
        let kc = catalog::lie_algebra("abelian-1").unwrap();
        let der = derivations(&kc);
        assert_eq!(der.len(), 1);
        assert!(is_derivation(&kc, &Matrix::from_i64(&[&[1]]).unwrap()));

        assert_eq!(derivations(&catalog::lie_algebra("abelian-2").unwrap()).len(), 4);

        // [x,y] = y: D(y) = D(x)y + xD(y) forces D = [[0,0],[β,α]]
        let na = catalog::lie_algebra("nonabelian-2").unwrap();
        let der = derivations(&na);
        assert_eq!(der.len(), 2);
        assert!(is_derivation(&na, &Matrix::from_i64(&[&[0, 0], &[1, 0]]).unwrap()));
        assert!(is_derivation(&na, &Matrix::from_i64(&[&[0, 0], &[0, 1]]).unwrap()));
        assert!(!is_derivation(&na, &Matrix::from_i64(&[&[1, 0], &[0, 0]]).unwrap()));
    }

    #[test]
    fn inner_derivation_dimensions() {
        let ab = catalog::lie_algebra("abelian-3").unwrap();
        assert!(inner_derivations(&ab).unwrap().is_empty());
        let kc = catalog::lie_algebra("abelian-1").unwrap();
        assert!(inner_derivations(&kc).unwrap().is_empty());
        let h = catalog::lie_algebra("heisenberg").unwrap();
        assert_eq!(inner_derivations(&h).unwrap().len(), 2);
        assert!(matches!(inner_derivations(&catalog::four_dim_l()), Err(StructureError::NotLie(_))));
    }

    #[test]
    fn example_table_from_construction() {
        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        assert_eq!(b.basis_names(), ["t", "a", "b", "c"]);
        let prod = |x: &str, y: &str| b.multiply(&b.e(x), &b.e(y)).unwrap();
        assert!(prod("a", "t").is_zero());
        assert!(prod("b", "t").is_zero());
        assert_eq!(prod("a", "b"), b.e("c"));
        assert!(prod("a", "c").is_zero());
        assert!(prod("b", "c").is_zero());
        assert_eq!(prod("c", "t"), b.e("c"));
    }

    #[test]
    fn general_example_table() {
        let (a1, a2, a3) = (int(2), crate::linalg::ratio(1, 3), int(-5));
        let b = catalog::example_b(&a1, &a2, &a3).unwrap();
        let prod = |x: &str, y: &str| b.multiply(&b.e(x), &b.e(y)).unwrap();
        assert_eq!(prod("t", "a"), b.e("c").scale(&a1));
        assert_eq!(prod("t", "b"), b.e("c").scale(&a2));
        assert_eq!(prod("a", "b"), b.e("c").scale(&a3));
        assert_eq!(prod("t", "c"), -&b.e("c"));
    }

    #[test]
    fn zero_data_gives_zero_algebra() {
        let ab = catalog::lie_algebra("abelian-2").unwrap();
        let data = ConstructionData {
            name: "z".into(),
            lie: ab.clone(),
            p_names: vec!["p".into(), "q".into()],
            psi: vec![Matrix::zeros(2, 2), Matrix::zeros(2, 2)],
            lambda: BTreeMap::new(),
            l0: ConstructionData::canonical_l0(&ab),
        };
        assert!(build_from_construction(&data).unwrap().is_abelian());
    }

    #[test]
    fn invalid_data_is_rejected() {
        let na = catalog::lie_algebra("nonabelian-2").unwrap();
        let mut data = ConstructionData {
            name: "bad".into(),
            lie: na.clone(),
            p_names: vec!["p".into()],
            psi: vec![Matrix::from_i64(&[&[1, 0], &[0, 0]]).unwrap()],
            lambda: BTreeMap::new(),
            l0: ConstructionData::canonical_l0(&na),
        };
        assert_eq!(build_from_construction(&data), Err(StructureError::NotDerivation("p".into())));
        data.psi = vec![Matrix::zeros(2, 2)];
        data.p_names = vec!["x".into()];
        assert_eq!(build_from_construction(&data), Err(StructureError::NameClash("x".into())));

        let kc = catalog::lie_algebra("abelian-1").unwrap();
        let mut ex = catalog::example_construction(&int(0), &int(0), &int(1));
        ex.l0 = vec![ints(&[1])];
        assert_eq!(build_from_construction(&ex), Err(StructureError::BadComplement));
        let _ = kc;
    }

    #[test]
    fn decompose_example_and_four_dim_algebra() {
        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        let dec = decompose(&b).unwrap();
        assert_eq!(dec.data.lie.dim(), 1);
        assert_eq!(dec.data.p_names, ["t", "a", "b"]);
        assert_eq!(dec.data.psi[0], Matrix::from_i64(&[&[1]]).unwrap());
        assert!(dec.data.psi[1].is_zero() && dec.data.psi[2].is_zero());
        assert_eq!(dec.data.lambda_value(1, 2), ints(&[1]));
        assert_eq!(build_from_construction(&dec.data).unwrap(), dec.adapted);

        let l = catalog::four_dim_l();
        let dec = decompose(&l).unwrap();
        assert_eq!(dec.data.p_names, ["a", "b", "c"]);
        assert_eq!(dec.data.lie.basis_names(), ["d"]);
        assert_eq!(dec.data.psi[0], Matrix::from_i64(&[&[1]]).unwrap());
        // L = kd is abelian, so Z(L) = L and L0 = 0: λ(b,c) carries all of d
        assert_eq!(dec.data.lambda_value(1, 2), ints(&[1]));
        assert_eq!(build_from_construction(&dec.data).unwrap(), dec.adapted);

        let zero = Algebra::zero_algebra("zero", vec!["u".into(), "v".into()]);
        let dec = decompose(&zero).unwrap();
        assert_eq!(dec.data.p_dim(), 0);
        assert_eq!(dec.data.lie.dim(), 2);

        assert!(matches!(decompose(&catalog::malcev4()), Err(StructureError::NotInW(_))));
    }

    #[test]
    fn isomorphism_checker() {
        let l = catalog::four_dim_l();
        assert!(verify_isomorphism(&l, &l, &Matrix::identity(4)).unwrap());
        let m = Matrix::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap();
        assert!(!verify_isomorphism(&l, &l, &m).unwrap());
        assert_eq!(verify_isomorphism(&l, &l, &Matrix::zeros(4, 4)), Err(StructureError::Singular));
        assert!(matches!(verify_isomorphism(&l, &l, &Matrix::identity(3)), Err(StructureError::Shape { .. })));
    }

    #[test]
    fn random_algebras_are_deterministic_and_in_w() {
        let h = catalog::lie_algebra("heisenberg").unwrap();
        let a = random_w_algebra(7, &h, 2).unwrap();
        let b = random_w_algebra(7, &h, 2).unwrap();
        assert_eq!(a.table(), b.table());
        let w = identity::variety("w").unwrap();
        assert!(identity::membership(&a, &w, Default::default()).unwrap().holds);
        let same = random_w_algebra(3, &h, 0).unwrap();
        assert_eq!(same.table(), h.table());
    }

    #[test]
    fn inner_within_derivations() {
        for name in catalog::LIE_NAMES {
            let g = catalog::lie_algebra(name).unwrap();
            let der = Subspace::span(g.dim() * g.dim(), flatten(&derivations(&g))).unwrap();
            let inner = inner_derivations(&g).unwrap();
            assert!(inner.iter().all(|m| der.contains(m.as_slice())), "{name}");
            assert_eq!(inner.len(), g.dim() - g.center().dim(), "{name}");
        }
    }
}
