//! Moufang-type checks on concrete algebras and the driver for the
//! free `v`-algebra computation.

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, Subspace};
use crate::free::{self, BuildOptions, Certificate, FreeError, FreeQuotient};
use crate::identity::{self, IdentityError, Magma, Membership};
use crate::linalg::{Matrix, SparseVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoufangError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Free(#[from] FreeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoufangReport {
    pub triple: [Element; 3],
    pub jacobian: Element,
    pub hypothesis_holds: bool,
    /// Generated subalgebra, computed only when the hypothesis holds.
    pub subalgebra: Option<Subspace>,
    pub restricted: Option<Algebra>,
    pub conclusion_holds: Option<bool>,
    /// First failing basis triple of the restricted algebra.
    pub jacobi_failure: Option<(usize, usize, usize, Element)>,
    pub memberships: Vec<Membership>,
}

/// Classifies the ambient algebra once and checks many triples against it.
pub struct MoufangChecker<'a> {
    alg: &'a Algebra,
    memberships: Vec<Membership>,
}

impl<'a> MoufangChecker<'a> {
    pub fn new(alg: &'a Algebra) -> Result<Self, MoufangError> {
        Ok(MoufangChecker { alg, memberships: identity::classify(alg)? })
    }

    pub fn memberships(&self) -> &[Membership] {
        &self.memberships
    }

    pub fn check(&self, x1: &Element, x2: &Element, x3: &Element) -> Result<MoufangReport, MoufangError> {
        let alg = self.alg;
        let jacobian = alg.jacobian(x1, x2, x3)?;
        let hypothesis_holds = jacobian.is_zero();
        let mut report = MoufangReport {
            triple: [x1.clone(), x2.clone(), x3.clone()],
            jacobian,
            hypothesis_holds,
            subalgebra: None,
            restricted: None,
            conclusion_holds: None,
            jacobi_failure: None,
            memberships: self.memberships.clone(),
        };
        if hypothesis_holds {
            let sub = alg.subalgebra_generated(&[x1.clone(), x2.clone(), x3.clone()])?;
            let restricted = alg.restrict(&sub)?.with_name(format!("<x1,x2,x3> in {}", alg.name()));
            let failure = restricted.jacobi_failure();
            report.conclusion_holds = Some(failure.is_none());
            report.jacobi_failure = failure;
            report.subalgebra = Some(sub);
            report.restricted = Some(restricted);
        }
        Ok(report)
    }
}

pub fn moufang_check(alg: &Algebra, x1: &Element, x2: &Element, x3: &Element) -> Result<MoufangReport, MoufangError> {
    MoufangChecker::new(alg)?.check(x1, x2, x3)
}

/// `{x₃ : J(x₁,x₂,x₃) = 0}`.
pub fn solve_null_triples(alg: &Algebra, x1: &Element, x2: &Element) -> Result<Subspace, AlgebraError> {
    let n = alg.dim();
    let columns = (0..n)
        .map(|k| Ok(alg.jacobian(x1, x2, &alg.basis_element(k))?.into_coords()))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let m = Matrix::from_columns(&columns, n)?;
    Subspace::span(n, m.null_space())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjectureOptions {
    pub generators: usize,
    pub max_degree: usize,
    pub relation_budget: u64,
    /// Also examine the subalgebra generated by `a, b, a*c`.
    pub variant: bool,
}

impl Default for ConjectureOptions {
    fn default() -> Self {
        ConjectureOptions {
            generators: 3,
            max_degree: 6,
            relation_budget: free::DEFAULT_RELATION_BUDGET,
            variant: false,
        }
    }
}

pub struct CrossCheck {
    pub dims: Vec<usize>,
    pub certificate: Certificate,
    pub valid: bool,
}

pub struct VariantResult {
    pub generators: Vec<String>,
    pub dims: Vec<usize>,
    pub word_in_subalgebra: bool,
    pub word_zero: bool,
    /// First basis triple of the subalgebra (labels) with nonzero Jacobian, within the truncation.
    pub jacobi_failure: Option<([String; 3], String)>,
}

pub enum Contrast {
    /// Triple `(a, b, a*c)` with zero Jacobian whose generated subalgebra is not Lie.
    Witness {
        triple: [String; 3],
        element: String,
        value: String,
    },
    Skipped(String),
}

pub struct ConjectureReport {
    pub main: free::ConjectureCertificate,
    pub cross_check: CrossCheck,
    pub variant: Option<VariantResult>,
    pub contrast: Contrast,
}

fn jacobian<M: Magma>(m: &M, x: &M::Elem, y: &M::Elem, z: &M::Elem) -> M::Elem {
    let mut acc = m.zero();
    let one = crate::linalg::int(1);
    m.add_scaled(&mut acc, &one, &m.mul(&m.mul(x, y), z));
    m.add_scaled(&mut acc, &one, &m.mul(&m.mul(y, z), x));
    m.add_scaled(&mut acc, &one, &m.mul(&m.mul(z, x), y));
    acc
}

fn variant(fq: &FreeQuotient, word: &SparseVec) -> Result<VariantResult, MoufangError> {
    let names = fq.generators().to_vec();
    let texts = ["a", "b", "a*c"];
    let gens =
        texts.iter().map(|t| fq.evaluate(&identity::parse_word(t, &names)?)).collect::<Result<Vec<_>, FreeError>>()?;
    let layers = fq.generated_subalgebra(&gens);
    let dims = layers.iter().map(Vec::len).collect();
    let d = word.first().map_or(0, |(i, _)| fq.degree_of(*i));
    let word_in_subalgebra = word.is_empty() || {
        let basis: Vec<Vec<crate::linalg::Scalar>> =
            layers[d - 1].iter().map(|v| crate::linalg::to_dense(v, fq.total_dim())).collect();
        crate::linalg::span_membership(&basis, &crate::linalg::to_dense(word, fq.total_dim()))
            .map_err(AlgebraError::from)?
            .is_some()
    };
    let flat: Vec<(usize, &SparseVec)> =
        layers.iter().enumerate().flat_map(|(k, l)| l.iter().map(move |v| (k + 1, v))).collect();
    let mut jacobi_failure = None;
    'outer: for i in 0..flat.len() {
        for j in (i + 1)..flat.len() {
            for k in (j + 1)..flat.len() {
                if flat[i].0 + flat[j].0 + flat[k].0 > fq.max_degree() {
                    continue;
                }
                let v = jacobian(fq, flat[i].1, flat[j].1, flat[k].1);
                if !v.is_empty() {
                    let label = |x: &SparseVec| fq.format_vector(x);
                    jacobi_failure =
                        Some(([label(flat[i].1), label(flat[j].1), label(flat[k].1)], fq.format_vector(&v)));
                    break 'outer;
                }
            }
        }
    }
    Ok(VariantResult {
        generators: texts.iter().map(|s| s.to_string()).collect(),
        dims,
        word_in_subalgebra,
        word_zero: word.is_empty(),
        jacobi_failure,
    })
}

/// Certifies `J(a,b,(ab)(ac))` in the free `v`-algebra, cross-checks it in
/// the free `w`-algebra, and optionally runs the variant mode.
pub fn run_conjecture(opts: ConjectureOptions) -> Result<ConjectureReport, MoufangError> {
    let main = free::conjecture_certificate(opts.generators, opts.max_degree, opts.relation_budget)?;
    let w = identity::variety("w")?;
    let build =
        BuildOptions { relation_budget: opts.relation_budget, certificate_degree: Some(6), relation_order_seed: None };
    let wq = free::build_free_quotient(&w, main.quotient.generators().len(), main.quotient.max_degree(), &[], build)?;
    let w_word = identity::parse_word(free::CONJECTURE_WORD, wq.generators())?;
    let w_cert = wq.certify(&w_word)?;
    let cross_check =
        CrossCheck { dims: wq.dims(), valid: wq.verify_certificate(&w_word, &w_cert)?, certificate: w_cert };

    let word_value = main.quotient.evaluate(&main.word)?;
    let variant = if opts.variant { Some(variant(&main.quotient, &word_value)?) } else { None };
    let contrast = if !word_value.is_empty() {
        Contrast::Witness {
            triple: ["a".into(), "b".into(), "(a*c)".into()],
            element: "((a*b)*(a*c))".into(),
            value: main.quotient.format_vector(&word_value),
        }
    } else if let Some((triple, value)) = variant.as_ref().and_then(|v| v.jacobi_failure.clone()) {
        Contrast::Witness { triple, element: "(generated subalgebra)".into(), value }
    } else {
        Contrast::Skipped(format!("{} vanishes in the truncated free v-algebra", free::CONJECTURE_WORD))
    };
    Ok(ConjectureReport { main, cross_check, variant, contrast })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::int;

    #[test]
    fn four_dim_algebra_triple_fails_hypothesis() {
        let l = catalog::four_dim_l();
        let r = moufang_check(&l, &l.e("a"), &l.e("b"), &l.e("c")).unwrap();
        assert!(!r.hypothesis_holds);
        assert_eq!(r.jacobian, l.e("d"));
        assert_eq!(r.conclusion_holds, None);
    }

    #[test]
    fn repeated_argument_gives_two_generated_subalgebra() {
        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        let (t, a) = (b.e("t"), b.e("a"));
        let r = moufang_check(&b, &t, &a, &a).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!(r.subalgebra.unwrap(), b.subalgebra_generated(&[t, a]).unwrap());
        assert_eq!(r.conclusion_holds, Some(true));
    }

    #[test]
    fn null_triples() {
        let l = catalog::four_dim_l();
        let s = solve_null_triples(&l, &l.e("a"), &l.e("b")).unwrap();
        assert!(!s.contains(l.e("c").coords()));
        assert!(s.contains(l.e("a").coords()) && s.contains(l.e("d").coords()));

        let b = catalog::example_b(&int(0), &int(0), &int(1)).unwrap();
        let s = solve_null_triples(&b, &b.e("a"), &b.e("b")).unwrap();
        for x in ["a", "b", "c"] {
            assert!(s.contains(b.e(x).coords()), "{x}");
        }
        assert!(!s.contains(b.e("t").coords()));

        let h = catalog::lie_algebra("heisenberg").unwrap();
        assert!(solve_null_triples(&h, &h.e("x"), &h.e("y")).unwrap().is_whole());
    }

    #[test]
    fn checker_in_w_algebra() {
        let h = catalog::lie_algebra("nonabelian-2").unwrap();
        let alg = crate::structure::random_w_algebra(11, &h, 2).unwrap();
        let checker = MoufangChecker::new(&alg).unwrap();
        assert!(checker.memberships().iter().find(|m| m.variety == "w").unwrap().holds);
        let (x1, x2) = (alg.basis_element(0), alg.basis_element(1));
        for x3 in solve_null_triples(&alg, &x1, &x2).unwrap().basis_elements() {
            assert_eq!(checker.check(&x1, &x2, &x3).unwrap().conclusion_holds, Some(true));
        }
    }
}
