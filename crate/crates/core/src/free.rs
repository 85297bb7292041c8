//! Degree-truncated relatively free algebras.
//!
//! The degree-`d` component is spanned by canonical products `u·v` of
//! quotient basis monomials of lower degrees, modulo every substitution
//! instance of the polarized defining identities (and any adjoined
//! relations). Because lower-degree relations are already zero in the
//! quotient, products with them vanish without extra rows.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::identity::{IdentityDef, IdentityError, Magma, MultilinearSystem, Poly, Variety, Word};
use crate::linalg::{format_scalar, sparse_axpy, sparse_scale, Scalar, SparseAccumulator, SparseEchelon, SparseVec};

pub const DEFAULT_RELATION_BUDGET: u64 = 5_000_000;
const MAX_GENERATORS: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeError {
    #[error("need between 1 and {MAX_GENERATORS} generators, got {0}")]
    Generators(usize),
    #[error("max degree must be at least 1")]
    MaxDegree,
    #[error("variety `{0}` does not contain x*x = 0; only anticommutative varieties are supported")]
    NotAnticommutative(String),
    #[error("`{text}` has degree {degree}; identities and relations must have degree at least 2")]
    LowDegree { text: String, degree: usize },
    #[error("`{0}` is not homogeneous in total degree")]
    NonHomogeneous(String),
    #[error("relation budget exceeded: {needed} rows needed, budget {budget}")]
    RelationBudget { needed: u128, budget: u64 },
    #[error("degree {degree} exceeds the truncation degree {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("no certificate data recorded for degree {0}")]
    CertificateUnavailable(usize),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Sorts children at every node; `None` when some node has equal children.
/// The flag is true when an odd number of swaps was made.
pub fn canonicalize(w: &Word) -> Option<(bool, Word)> {
    match w {
        Word::Leaf(_) => Some((false, w.clone())),
        Word::Node { left, right, .. } => {
            let (sl, l) = canonicalize(left)?;
            let (sr, r) = canonicalize(right)?;
            let negated = sl ^ sr;
            match l.cmp(&r) {
                Ordering::Equal => None,
                Ordering::Less => Some((negated, Word::node(l, r))),
                Ordering::Greater => Some((!negated, Word::node(r, l))),
            }
        }
    }
}

/// All canonical monomials on `g` generators, by degree (`result[d-1]`), sorted.
pub fn enumerate_monomials(g: usize, max_degree: usize) -> Vec<Vec<Word>> {
    let mut by_degree: Vec<Vec<Word>> = Vec::new();
    for d in 1..=max_degree {
        let mut out = Vec::new();
        if d == 1 {
            out.extend((0..g).map(Word::leaf));
        }
        for du in 1..=d / 2 {
            let dv = d - du;
            for (i, u) in by_degree[du - 1].iter().enumerate() {
                for (j, v) in by_degree[dv - 1].iter().enumerate() {
                    if du < dv || i < j {
                        out.push(Word::node(u.clone(), v.clone()));
                    }
                }
            }
        }
        out.sort();
        by_degree.push(out);
    }
    by_degree
}

pub fn generator_names(g: usize) -> Vec<String> {
    (0..g).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Maximum number of relation rows generated over all degrees.
    pub relation_budget: u64,
    /// Degree at which row provenance is kept for zero certificates.
    pub certificate_degree: Option<usize>,
    /// Shuffles each degree's relation rows before elimination.
    pub relation_order_seed: Option<u64>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { relation_budget: DEFAULT_RELATION_BUDGET, certificate_degree: None, relation_order_seed: None }
    }
}

/// Where a relation row came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationSource {
    /// Polarized identity under a substitution of quotient basis monomials.
    Identity {
        identity: usize,
        component: usize,
        substitution: Vec<usize>,
    },
    Extra {
        index: usize,
    },
}

struct Tracked {
    degree: usize,
    echelon: SparseEchelon,
    sources: Vec<RelationSource>,
}

/// A relatively free algebra truncated above `max_degree`.
pub struct FreeQuotient {
    variety: String,
    identities: Vec<IdentityDef>,
    systems: Vec<(usize, MultilinearSystem)>,
    extra: Vec<(String, Poly)>,
    generators: Vec<String>,
    max_degree: usize,
    built: usize,
    words: Vec<Word>,
    degree_of: Vec<usize>,
    /// Raw column of each basis element of degree ≥ 2.
    basis_column: Vec<Option<usize>>,
    offsets: Vec<usize>,
    columns: Vec<Vec<(usize, usize)>>,
    column_index: HashMap<(usize, usize), usize>,
    rewrite: Vec<Vec<SparseVec>>,
    relation_counts: Vec<usize>,
    ranks: Vec<usize>,
    tracked: Option<Tracked>,
}

impl fmt::Debug for FreeQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeQuotient")
            .field("variety", &self.variety)
            .field("generators", &self.generators)
            .field("dims", &self.dims())
            .finish()
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn unit(i: usize) -> SparseVec {
    vec![(i, Scalar::one())]
}

/// Homogeneous degree of a polynomial over generators.
fn poly_degree(text: &str, p: &Poly) -> Result<usize, FreeError> {
    let mut degree = None;
    for (w, _) in p.terms() {
        match degree {
            None => degree = Some(w.degree()),
            Some(d) if d != w.degree() => return Err(FreeError::NonHomogeneous(text.to_string())),
            _ => {}
        }
    }
    Ok(degree.unwrap_or(0))
}

/// Builds the truncated free algebra of `variety` on `g` generators.
pub fn build_free_quotient(
    variety: &Variety,
    g: usize,
    max_degree: usize,
    extra: &[(String, Poly)],
    opts: BuildOptions,
) -> Result<FreeQuotient, FreeError> {
    if g == 0 || g > MAX_GENERATORS {
        return Err(FreeError::Generators(g));
    }
    if max_degree == 0 {
        return Err(FreeError::MaxDegree);
    }
    if !variety.identities.iter().any(IdentityDef::is_anticommutativity) {
        return Err(FreeError::NotAnticommutative(variety.name.clone()));
    }
    let mut systems = Vec::new();
    for (i, id) in variety.identities.iter().enumerate() {
        if id.total_degree() < 2 {
            return Err(FreeError::LowDegree { text: id.name.clone(), degree: id.total_degree() });
        }
        // anticommutativity is built into the monomials
        if !id.is_anticommutativity() {
            systems.push((i, id.polarize()));
        }
    }
    for (text, p) in extra {
        let d = poly_degree(text, p)?;
        if !p.is_zero() && d < 2 {
            return Err(FreeError::LowDegree { text: text.clone(), degree: d });
        }
        if d > max_degree {
            return Err(FreeError::DegreeOverflow { degree: d, max: max_degree });
        }
    }
    let mut fq = FreeQuotient {
        variety: variety.name.clone(),
        identities: variety.identities.clone(),
        systems,
        extra: extra.to_vec(),
        generators: generator_names(g),
        max_degree,
        built: 1,
        words: (0..g).map(Word::leaf).collect(),
        degree_of: vec![1; g],
        basis_column: vec![None; g],
        offsets: vec![0, 0, g],
        columns: vec![Vec::new(), Vec::new()],
        column_index: HashMap::new(),
        rewrite: vec![Vec::new(), Vec::new()],
        relation_counts: vec![0, 0],
        ranks: vec![0, 0],
        tracked: None,
    };
    let mut total_rows: u128 = 0;
    for d in 2..=max_degree {
        fq.build_degree(d, opts, &mut total_rows)?;
    }
    fq.self_check()?;
    Ok(fq)
}

impl FreeQuotient {
    pub fn variety(&self) -> &str {
        &self.variety
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Quotient dimension per degree, starting at degree 1.
    pub fn dims(&self) -> Vec<usize> {
        (1..=self.built).map(|d| self.offsets[d + 1] - self.offsets[d]).collect()
    }

    /// Number of raw monomials per degree, starting at degree 1.
    pub fn column_counts(&self) -> Vec<usize> {
        (1..=self.built).map(|d| if d == 1 { self.generators.len() } else { self.columns[d].len() }).collect()
    }

    pub fn relation_counts(&self) -> &[usize] {
        &self.relation_counts[1..]
    }

    pub fn total_dim(&self) -> usize {
        self.words.len()
    }

    pub fn basis_words(&self) -> &[Word] {
        &self.words
    }

    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        if d == 0 || d > self.built {
            return 0..0;
        }
        self.offsets[d]..self.offsets[d + 1]
    }

    pub fn basis_label(&self, i: usize) -> String {
        self.words[i].render(&self.generators)
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.degree_of[i]
    }

    fn build_degree(&mut self, d: usize, opts: BuildOptions, total_rows: &mut u128) -> Result<(), FreeError> {
        let mut columns = Vec::new();
        for du in 1..=d / 2 {
            let dv = d - du;
            for i in self.degree_range(du) {
                for j in self.degree_range(dv) {
                    if du < dv || i < j {
                        self.column_index.insert((i, j), columns.len());
                        columns.push((i, j));
                    }
                }
            }
        }
        self.columns.push(columns);

        let dims = self.dims();
        let mut needed: u128 = 0;
        for (_, sys) in &self.systems {
            let k = sys.variables.len();
            for comp in compositions(d, k) {
                let tuples: u128 = comp.iter().map(|&p| if p < d { dims[p - 1] as u128 } else { 0 }).product();
                needed += tuples * sys.components.len() as u128;
            }
        }
        needed += self.extra.iter().filter(|(t, p)| poly_degree(t, p).ok() == Some(d)).count() as u128;
        *total_rows += needed;
        if *total_rows > opts.relation_budget as u128 {
            return Err(FreeError::RelationBudget { needed: *total_rows, budget: opts.relation_budget });
        }

        let mut rows = self.relation_rows(d);
        self.relation_counts.push(rows.len());
        if let Some(seed) = opts.relation_order_seed {
            rows.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(d as u64)));
        }
        let ncols = self.columns[d].len();
        let track = opts.certificate_degree == Some(d);
        let mut echelon = if track { SparseEchelon::with_provenance(ncols) } else { SparseEchelon::new(ncols) };
        let mut sources = Vec::new();
        for (src, row) in rows {
            if echelon.insert(row).is_some() && track {
                sources.push(src);
            }
        }
        let rref = echelon.to_rref();
        let mut pivot_row: HashMap<usize, &SparseVec> = HashMap::new();
        for (p, r) in &rref {
            pivot_row.insert(*p, r);
        }
        let offset = self.offsets[d];
        let mut global = vec![None; ncols];
        let mut next = offset;
        for (c, slot) in global.iter_mut().enumerate() {
            if !pivot_row.contains_key(&c) {
                *slot = Some(next);
                let (i, j) = self.columns[d][c];
                self.words.push(Word::node(self.words[i].clone(), self.words[j].clone()));
                self.degree_of.push(d);
                self.basis_column.push(Some(c));
                next += 1;
            }
        }
        let rewrite: Vec<SparseVec> = (0..ncols)
            .map(|c| match global[c] {
                Some(g) => unit(g),
                None => pivot_row[&c]
                    .iter()
                    .filter(|(q, _)| *q != c)
                    .map(|(q, v)| (global[*q].expect("reduced rows have one pivot entry"), -v.clone()))
                    .collect(),
            })
            .collect();
        self.rewrite.push(rewrite);
        self.offsets.push(next);
        self.ranks.push(echelon.rank());
        if track {
            self.tracked = Some(Tracked { degree: d, echelon, sources });
        }
        self.built = d;
        Ok(())
    }

    /// Every relation row of degree `d`, in deterministic order.
    fn relation_rows(&self, d: usize) -> Vec<(RelationSource, SparseVec)> {
        let mut rows = Vec::new();
        for (identity, sys) in &self.systems {
            let k = sys.variables.len();
            for comp in compositions(d, k) {
                if comp.iter().any(|&p| p >= d) {
                    continue;
                }
                let ranges: Vec<std::ops::Range<usize>> = comp.iter().map(|&p| self.degree_range(p)).collect();
                if ranges.iter().any(|r| r.is_empty()) {
                    continue;
                }
                let mut tuple: Vec<usize> = ranges.iter().map(|r| r.start).collect();
                'tuples: loop {
                    let assignment: Vec<SparseVec> = tuple.iter().map(|&i| unit(i)).collect();
                    for (ci, component) in sys.components.iter().enumerate() {
                        let row = self.evaluate_raw(component, &assignment);
                        if !row.is_empty() {
                            rows.push((
                                RelationSource::Identity {
                                    identity: *identity,
                                    component: ci,
                                    substitution: tuple.clone(),
                                },
                                row,
                            ));
                        }
                    }
                    let mut pos = k;
                    loop {
                        if pos == 0 {
                            break 'tuples;
                        }
                        pos -= 1;
                        tuple[pos] += 1;
                        if tuple[pos] < ranges[pos].end {
                            break;
                        }
                        tuple[pos] = ranges[pos].start;
                    }
                }
            }
        }
        for (index, (text, p)) in self.extra.iter().enumerate() {
            if poly_degree(text, p).ok() == Some(d) {
                let row = self.evaluate_raw(p, &self.generator_units());
                if !row.is_empty() {
                    rows.push((RelationSource::Extra { index }, row));
                }
            }
        }
        rows
    }

    fn generator_units(&self) -> Vec<SparseVec> {
        (0..self.generators.len()).map(unit).collect()
    }

    /// Evaluates a homogeneous degree-`d` polynomial, keeping the top product
    /// in raw monomial coordinates.
    fn evaluate_raw(&self, poly: &Poly, assignment: &[SparseVec]) -> SparseVec {
        let mut acc = SparseAccumulator::new();
        for (w, c) in poly.terms() {
            let Word::Node { left, right, .. } = w else { continue };
            let l = left.evaluate(self, assignment);
            if l.is_empty() {
                continue;
            }
            let r = right.evaluate(self, assignment);
            if r.is_empty() {
                continue;
            }
            for (i, ci) in &l {
                for (j, cj) in &r {
                    let (key, negate) = match i.cmp(j) {
                        Ordering::Equal => continue,
                        Ordering::Less => ((*i, *j), false),
                        Ordering::Greater => ((*j, *i), true),
                    };
                    let Some(&col) = self.column_index.get(&key) else { continue };
                    let v = c * ci * cj;
                    acc.add(col, if negate { -v } else { v });
                }
            }
        }
        acc.finish()
    }

    /// Raw coordinates of the basis element with global index `g`.
    fn raw_unit(&self, g: usize) -> SparseVec {
        unit(self.basis_column[g].expect("degree ≥ 2 basis element"))
    }

    fn self_check(&self) -> Result<(), FreeError> {
        for (identity, sys) in &self.systems {
            let k = sys.variables.len();
            for d in 2..=self.max_degree {
                for comp in compositions(d, k) {
                    let ranges: Vec<std::ops::Range<usize>> = comp.iter().map(|&p| self.degree_range(p)).collect();
                    if ranges.iter().any(|r| r.is_empty()) {
                        continue;
                    }
                    let mut tuple: Vec<usize> = ranges.iter().map(|r| r.start).collect();
                    'tuples: loop {
                        let assignment: Vec<SparseVec> = tuple.iter().map(|&i| unit(i)).collect();
                        for component in &sys.components {
                            if !component.evaluate(self, &assignment).is_empty() {
                                let subst: Vec<String> = tuple.iter().map(|&i| self.basis_label(i)).collect();
                                return Err(FreeError::SelfCheck(format!(
                                    "`{}` does not vanish at ({})",
                                    self.identities[*identity].name,
                                    subst.join(", ")
                                )));
                            }
                        }
                        let mut pos = k;
                        loop {
                            if pos == 0 {
                                break 'tuples;
                            }
                            pos -= 1;
                            tuple[pos] += 1;
                            if tuple[pos] < ranges[pos].end {
                                break;
                            }
                            tuple[pos] = ranges[pos].start;
                        }
                    }
                }
            }
        }
        for (text, p) in &self.extra {
            if !p.evaluate(self, &self.generator_units()).is_empty() {
                return Err(FreeError::SelfCheck(format!("relation `{text}` does not vanish")));
            }
        }
        Ok(())
    }

    /// Global sparse coordinates of a generator polynomial.
    pub fn evaluate(&self, poly: &Poly) -> Result<SparseVec, FreeError> {
        let d = poly.max_degree();
        if d > self.max_degree {
            return Err(FreeError::DegreeOverflow { degree: d, max: self.max_degree });
        }
        Ok(poly.evaluate(self, &self.generator_units()))
    }

    /// Coordinates of a canonical (or any) monomial.
    pub fn rewrite_monomial(&self, w: &Word) -> Result<SparseVec, FreeError> {
        self.evaluate(&Poly::word(w.clone()))
    }

    pub fn format_vector(&self, v: &SparseVec) -> String {
        let names: Vec<String> = v.iter().map(|(i, _)| self.basis_label(*i)).collect();
        let coords: Vec<Scalar> = v.iter().map(|(_, c)| c.clone()).collect();
        crate::algebra::format_combination(&names, &coords)
    }

    /// Quotient basis elements occurring in a homogeneous word of degree `d`
    /// are exactly the raw columns left after elimination; this returns
    /// `raw(word)` for certificate checks.
    pub fn raw_value(&self, poly: &Poly) -> Result<(usize, SparseVec), FreeError> {
        let d = poly_degree("word", poly)?;
        if d > self.max_degree {
            return Err(FreeError::DegreeOverflow { degree: d, max: self.max_degree });
        }
        if d < 2 {
            return Err(FreeError::LowDegree { text: poly.render(&self.generators), degree: d });
        }
        Ok((d, self.evaluate_raw(poly, &self.generator_units())))
    }

    /// Re-derives a relation row from its description.
    pub fn relation_row(&self, source: &RelationSource) -> SparseVec {
        match source {
            RelationSource::Identity { identity, component, substitution } => {
                let sys =
                    &self.systems.iter().find(|(i, _)| i == identity).expect("source names a polarized identity").1;
                let assignment: Vec<SparseVec> = substitution.iter().map(|&i| unit(i)).collect();
                self.evaluate_raw(&sys.components[*component], &assignment)
            }
            RelationSource::Extra { index } => self.evaluate_raw(&self.extra[*index].1, &self.generator_units()),
        }
    }

    pub fn describe_source(&self, source: &RelationSource) -> String {
        match source {
            RelationSource::Identity { identity, component, substitution } => {
                let sys = &self.systems.iter().find(|(i, _)| i == identity).expect("known identity").1;
                let parts: Vec<String> = sys
                    .variables
                    .iter()
                    .zip(substitution)
                    .map(|(v, &i)| format!("{v}={}", self.basis_label(i)))
                    .collect();
                format!("[{}]#{} {}", self.identities[*identity].name, component, parts.join(" "))
            }
            RelationSource::Extra { index } => format!("[extra] {}", self.extra[*index].0),
        }
    }

    /// Verdict on a homogeneous word with a certificate.
    ///
    /// Zero certificates need provenance at the word's degree
    /// ([`BuildOptions::certificate_degree`]).
    pub fn certify(&self, poly: &Poly) -> Result<Certificate, FreeError> {
        let (d, raw) = self.raw_value(poly)?;
        let coords = self.evaluate(poly)?;
        if !coords.is_empty() {
            let terms = coords.iter().map(|(i, c)| (self.basis_label(*i), c.clone())).collect();
            return Ok(Certificate::Nonzero { degree: d, coords, terms });
        }
        let tracked = self.tracked.as_ref().filter(|t| t.degree == d).ok_or(FreeError::CertificateUnavailable(d))?;
        let (residual, combo) = tracked.echelon.reduce_with_certificate(raw);
        if !residual.is_empty() {
            return Err(FreeError::SelfCheck("rewrite map and row space disagree".into()));
        }
        let relations =
            combo.expect("provenance tracked").into_iter().map(|(tag, c)| (c, tracked.sources[tag].clone())).collect();
        Ok(Certificate::Zero { degree: d, relations })
    }

    /// Independent check of a certificate for `poly`.
    ///
    /// Zero: the listed relation rows, recomputed from their descriptions,
    /// sum to the raw value. Nonzero: the coordinates are nonzero and the raw
    /// value minus their raw monomials lies in the row space.
    pub fn verify_certificate(&self, poly: &Poly, cert: &Certificate) -> Result<bool, FreeError> {
        let (d, raw) = self.raw_value(poly)?;
        match cert {
            Certificate::Zero { degree, relations } => {
                if *degree != d {
                    return Ok(false);
                }
                let mut sum: SparseVec = Vec::new();
                for (c, src) in relations {
                    sum = sparse_axpy(&sum, c, &self.relation_row(src));
                }
                Ok(sum == raw)
            }
            Certificate::Nonzero { degree, coords, .. } => {
                if *degree != d || coords.is_empty() || coords.iter().any(|(i, _)| self.degree_of[*i] != d) {
                    return Ok(false);
                }
                let mut diff = raw;
                for (i, c) in coords {
                    diff = sparse_axpy(&diff, &-c.clone(), &self.raw_unit(*i));
                }
                // the difference must be a consequence of the relations: its rewrite is zero
                let mut acc = SparseAccumulator::new();
                for (col, c) in &diff {
                    acc.add_scaled(c, &self.rewrite[d][*col]);
                }
                Ok(acc.finish().is_empty())
            }
        }
    }

    /// Graded subalgebra generated by homogeneous elements, as per-degree echelon bases.
    pub fn generated_subalgebra(&self, gens: &[SparseVec]) -> Vec<Vec<SparseVec>> {
        let mut layers: Vec<Vec<SparseVec>> = vec![Vec::new(); self.built + 1];
        let degree_of_vec = |v: &SparseVec| v.first().map(|(i, _)| self.degree_of[*i]);
        for d in 1..=self.built {
            let range = self.degree_range(d);
            let mut ech = SparseEchelon::new(range.len());
            let shift = |v: &SparseVec| -> SparseVec { v.iter().map(|(i, c)| (i - range.start, c.clone())).collect() };
            for g in gens {
                if degree_of_vec(g) == Some(d) {
                    ech.insert(shift(g));
                }
            }
            for du in 1..=d / 2 {
                let dv = d - du;
                for (a, x) in layers[du].iter().enumerate() {
                    for (b, y) in layers[dv].iter().enumerate() {
                        if du == dv && a >= b {
                            continue;
                        }
                        let p = self.mul(x, y);
                        if !p.is_empty() {
                            ech.insert(shift(&p));
                        }
                    }
                }
            }
            layers[d] = ech
                .to_rref()
                .into_iter()
                .map(|(_, r)| r.into_iter().map(|(i, c)| (i + range.start, c)).collect())
                .collect();
        }
        layers.remove(0);
        layers
    }

    /// The truncated quotient as a finite-dimensional algebra with basis labels.
    pub fn to_algebra(&self) -> Result<Algebra, FreeError> {
        let n = self.total_dim();
        let mut products = Vec::new();
        for (&(i, j), &col) in &self.column_index {
            let d = self.degree_of[i] + self.degree_of[j];
            let mut v = vec![Scalar::zero(); n];
            for (k, c) in &self.rewrite[d][col] {
                v[*k] = c.clone();
            }
            products.push((i, j, v));
        }
        products.sort_by_key(|(i, j, _)| (*i, *j));
        let names = (0..n).map(|i| self.basis_label(i)).collect();
        Ok(Algebra::new(
            format!("free-{}({},{})", self.variety, self.generators.len(), self.max_degree),
            names,
            products,
        )?)
    }
}

impl Magma for FreeQuotient {
    type Elem = SparseVec;

    fn zero(&self) -> SparseVec {
        Vec::new()
    }

    fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = SparseAccumulator::new();
        for (i, ci) in x {
            for (j, cj) in y {
                let d = self.degree_of[*i] + self.degree_of[*j];
                if d > self.built {
                    continue;
                }
                let (key, negate) = match i.cmp(j) {
                    Ordering::Equal => continue,
                    Ordering::Less => ((*i, *j), false),
                    Ordering::Greater => ((*j, *i), true),
                };
                let col = self.column_index[&key];
                let c = ci * cj;
                acc.add_scaled(&if negate { -c } else { c }, &self.rewrite[d][col]);
            }
        }
        acc.finish()
    }

    fn add_scaled(&self, acc: &mut SparseVec, c: &Scalar, x: &SparseVec) {
        *acc = sparse_axpy(acc, c, x);
    }

    fn is_zero(&self, x: &SparseVec) -> bool {
        x.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Coordinates in the quotient basis of the word's degree.
    Nonzero { degree: usize, coords: SparseVec, terms: Vec<(String, Scalar)> },
    /// `raw(word) = Σ cᵢ·rowᵢ` over the listed relation rows.
    Zero { degree: usize, relations: Vec<(Scalar, RelationSource)> },
}

impl Certificate {
    pub fn is_zero(&self) -> bool {
        matches!(self, Certificate::Zero { .. })
    }

    pub fn render(&self, fq: &FreeQuotient) -> Vec<String> {
        match self {
            Certificate::Nonzero { degree, terms, .. } => {
                let mut out = vec![format!("degree: {degree}"), "verdict: nonzero".into()];
                out.push(format!("terms: {}", terms.len()));
                for (label, c) in terms {
                    out.push(format!("coord: {} {}", format_scalar(c), label));
                }
                out
            }
            Certificate::Zero { degree, relations } => {
                let mut out = vec![format!("degree: {degree}"), "verdict: zero".into()];
                out.push(format!("relations: {}", relations.len()));
                for (c, src) in relations {
                    out.push(format!("relation: {} {}", format_scalar(c), fq.describe_source(src)));
                }
                out
            }
        }
    }
}

/// `J(a,b,(a*b)*(a*c))`, the word certified by `conjecture_certificate`.
pub const CONJECTURE_WORD: &str = "J(a,b,(a*b)*(a*c))";
/// `J(a,b,a*c)`, which vanishes in the free `v`-algebra.
pub const SANITY_WORD: &str = "J(a,b,a*c)";

pub struct ConjectureCertificate {
    pub quotient: FreeQuotient,
    pub sanity_zero: bool,
    pub word: Poly,
    pub certificate: Certificate,
    pub valid: bool,
}

/// Builds the free `v`-algebra on `g ≥ 3` generators to degree `max_degree`
/// and certifies the value of [`CONJECTURE_WORD`].
pub fn conjecture_certificate(
    g: usize,
    max_degree: usize,
    relation_budget: u64,
) -> Result<ConjectureCertificate, FreeError> {
    let v = crate::identity::variety("v")?;
    let opts = BuildOptions { relation_budget, certificate_degree: Some(6), relation_order_seed: None };
    let quotient = build_free_quotient(&v, g.max(3), max_degree.max(6), &[], opts)?;
    let gens = quotient.generators().to_vec();
    let sanity = crate::identity::parse_word(SANITY_WORD, &gens)?;
    let sanity_zero = quotient.evaluate(&sanity)?.is_empty();
    let word = crate::identity::parse_word(CONJECTURE_WORD, &gens)?;
    let certificate = quotient.certify(&word)?;
    let valid = quotient.verify_certificate(&word, &certificate)?;
    Ok(ConjectureCertificate { quotient, sanity_zero, word, certificate, valid })
}

/// Rescales a sparse vector so its first coefficient is 1.
pub fn normalize(v: &SparseVec) -> SparseVec {
    match v.first() {
        Some((_, c)) => sparse_scale(v, &c.recip()),
        None => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::{parse_identity, parse_word, variety};

    fn anticommutative() -> Variety {
        Variety::from_identities("anticommutative", vec![parse_identity("x*x = 0").unwrap()])
    }

    #[test]
    fn canonical_forms() {
        let (a, b, c) = (Word::leaf(0), Word::leaf(1), Word::leaf(2));
        let ba = Word::node(b.clone(), a.clone());
        assert_eq!(canonicalize(&ba), Some((true, Word::node(a.clone(), b.clone()))));
        assert_eq!(canonicalize(&Word::node(a.clone(), a.clone())), None);
        let ac = Word::node(a.clone(), c.clone());
        let ab = Word::node(a.clone(), b.clone());
        assert_eq!(canonicalize(&Word::node(ac.clone(), ab.clone())), Some((true, Word::node(ab.clone(), ac.clone()))));
        // both children swapped and the root kept: even number of swaps
        let w = Word::node(Word::node(b.clone(), a.clone()), Word::node(c.clone(), a.clone()));
        assert_eq!(canonicalize(&w), Some((false, Word::node(ab, ac))));
    }

    #[test]
    fn monomial_counts() {
        let counts: Vec<usize> = enumerate_monomials(3, 4).iter().map(Vec::len).collect();
        assert_eq!(counts, [3, 3, 9, 30]);
        assert_eq!(enumerate_monomials(1, 2)[1].len(), 0);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(2, 3).len(), 0);
        assert_eq!(compositions(6, 4).len(), 10);
    }

    #[test]
    fn free_anticommutative_has_no_collapse() {
        let fq = build_free_quotient(&anticommutative(), 3, 4, &[], BuildOptions::default()).unwrap();
        assert_eq!(fq.dims(), [3, 3, 9, 30]);
    }

    #[test]
    fn free_lie_small_degrees() {
        let fq = build_free_quotient(&variety("lie").unwrap(), 2, 4, &[], BuildOptions::default()).unwrap();
        assert_eq!(fq.dims(), [2, 1, 2, 3]);
        let fq = build_free_quotient(&variety("lie").unwrap(), 3, 3, &[], BuildOptions::default()).unwrap();
        assert_eq!(fq.dims(), [3, 3, 8]);
    }

    #[test]
    fn v_has_no_low_degree_consequences() {
        let fq = build_free_quotient(&variety("v").unwrap(), 3, 2, &[], BuildOptions::default()).unwrap();
        assert_eq!(fq.dims(), [3, 3]);
    }

    #[test]
    fn evaluation_and_rewrite() {
        let fq = build_free_quotient(&variety("v").unwrap(), 3, 4, &[], BuildOptions::default()).unwrap();
        let gens = fq.generators().to_vec();
        let ab = fq.evaluate(&parse_word("a*b", &gens).unwrap()).unwrap();
        assert_eq!(ab.len(), 1);
        assert_eq!(ab[0].1, Scalar::one());
        assert_eq!(fq.basis_label(ab[0].0), "(a*b)");
        let ba = fq.evaluate(&parse_word("b*a", &gens).unwrap()).unwrap();
        assert_eq!(ba, sparse_scale(&ab, &-Scalar::one()));
        assert!(fq.evaluate(&parse_word(SANITY_WORD, &gens).unwrap()).unwrap().is_empty());
        assert!(matches!(
            fq.evaluate(&parse_word("a*b*c*a*b", &gens).unwrap()),
            Err(FreeError::DegreeOverflow { degree: 5, max: 4 })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        let lonely = Variety::from_identities("j", vec![parse_identity("J(x,y,z) = 0").unwrap()]);
        assert!(matches!(
            build_free_quotient(&lonely, 2, 3, &[], BuildOptions::default()),
            Err(FreeError::NotAnticommutative(_))
        ));
        assert!(matches!(
            build_free_quotient(&anticommutative(), 0, 3, &[], BuildOptions::default()),
            Err(FreeError::Generators(0))
        ));
        let gens = generator_names(2);
        let rel = ("a".to_string(), parse_word("a", &gens).unwrap());
        assert!(matches!(
            build_free_quotient(&anticommutative(), 2, 3, &[rel], BuildOptions::default()),
            Err(FreeError::LowDegree { .. })
        ));
        let opts = BuildOptions { relation_budget: 10, ..Default::default() };
        assert!(matches!(
            build_free_quotient(&variety("lie").unwrap(), 3, 4, &[], opts),
            Err(FreeError::RelationBudget { .. })
        ));
    }

    #[test]
    fn zero_and_nonzero_certificates() {
        let lie = variety("lie").unwrap();
        let opts = BuildOptions { certificate_degree: Some(3), ..Default::default() };
        let fq = build_free_quotient(&lie, 3, 3, &[], opts).unwrap();
        let gens = fq.generators().to_vec();
        let jac = parse_word("J(a,b,c)", &gens).unwrap();
        let cert = fq.certify(&jac).unwrap();
        assert!(cert.is_zero());
        assert!(fq.verify_certificate(&jac, &cert).unwrap());

        let w = parse_word("(a*b)*c", &gens).unwrap();
        let cert = fq.certify(&w).unwrap();
        assert!(!cert.is_zero());
        assert!(fq.verify_certificate(&w, &cert).unwrap());
        // tampered coordinates are rejected
        if let Certificate::Nonzero { degree, coords, terms } = cert {
            let bad = Certificate::Nonzero { degree, coords: sparse_scale(&coords, &crate::linalg::int(2)), terms };
            assert!(!fq.verify_certificate(&w, &bad).unwrap());
        }
    }

    #[test]
    fn extra_relation_collapses() {
        let gens = generator_names(3);
        let rel = ("J(a,b,c)".to_string(), parse_word("J(a,b,c)", &gens).unwrap());
        let plain = build_free_quotient(&variety("w").unwrap(), 3, 3, &[], BuildOptions::default()).unwrap();
        let with = build_free_quotient(&variety("w").unwrap(), 3, 3, &[rel], BuildOptions::default()).unwrap();
        assert_eq!(plain.dims()[2], 9);
        assert_eq!(with.dims()[2], 8);
    }

    #[test]
    fn shuffled_relations_give_same_quotient() {
        let v = variety("v").unwrap();
        let a = build_free_quotient(&v, 3, 5, &[], BuildOptions::default()).unwrap();
        let opts = BuildOptions { relation_order_seed: Some(99), ..Default::default() };
        let b = build_free_quotient(&v, 3, 5, &[], opts).unwrap();
        assert_eq!(a.dims(), b.dims());
        assert_eq!(a.basis_words(), b.basis_words());
    }

    #[test]
    fn generated_subalgebra_layers() {
        let fq = build_free_quotient(&anticommutative(), 3, 3, &[], BuildOptions::default()).unwrap();
        let gens = fq.generators().to_vec();
        let a = fq.evaluate(&parse_word("a", &gens).unwrap()).unwrap();
        let b = fq.evaluate(&parse_word("b", &gens).unwrap()).unwrap();
        let dims: Vec<usize> = fq.generated_subalgebra(&[a, b]).iter().map(Vec::len).collect();
        assert_eq!(dims, [2, 1, 2]);
    }

    #[test]
    fn quotient_as_algebra() {
        let fq = build_free_quotient(&variety("lie").unwrap(), 2, 3, &[], BuildOptions::default()).unwrap();
        let alg = fq.to_algebra().unwrap();
        assert_eq!(alg.dim(), 5);
        assert!(alg.satisfies_jacobi());
    }
}
