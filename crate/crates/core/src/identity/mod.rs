//! Nonassociative polynomial identities: syntax, normal form, polarization,
//! and evaluation in any [`Magma`].

mod check;
mod parse;
mod varieties;

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{format_scalar, Scalar};

pub use check::{
    check_identity, check_identity_with, evaluate_identity, find_direct_failure, CheckOptions, CheckOutcome, Witness,
};
pub use parse::{parse_identity, parse_word};
pub use varieties::{
    builtin_varieties, classify, classify_with, membership, variety, Membership, Variety, VARIETY_NAMES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("identity is not homogeneous in `{0}`")]
    NonHomogeneous(String),
    #[error("unknown variety `{name}` (available: {})", available.join(", "))]
    UnknownVariety { name: String, available: Vec<String> },
    #[error("check needs {needed} evaluations, over the budget of {budget}")]
    TupleBudget { needed: u128, budget: u64 },
    #[error("assignment has {found} values for {expected} variables")]
    Arity { expected: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// Anything identities can be evaluated in: a bilinear product plus linear structure.
pub trait Magma {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn add_scaled(&self, acc: &mut Self::Elem, c: &Scalar, x: &Self::Elem);
    fn is_zero(&self, x: &Self::Elem) -> bool;
}

/// A nonassociative word: a binary tree whose leaves are variable (or generator) indices.
///
/// Ordered by degree first, then leaf index for leaves and (left, right)
/// lexicographically for products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Word {
    Leaf(usize),
    Node { degree: usize, left: Box<Word>, right: Box<Word> },
}

impl Word {
    pub fn leaf(i: usize) -> Word {
        Word::Leaf(i)
    }

    pub fn node(left: Word, right: Word) -> Word {
        Word::Node { degree: left.degree() + right.degree(), left: Box::new(left), right: Box::new(right) }
    }

    pub fn degree(&self) -> usize {
        match self {
            Word::Leaf(_) => 1,
            Word::Node { degree, .. } => *degree,
        }
    }

    /// Leaf indices in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Word::Leaf(i) => out.push(*i),
            Word::Node { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// Replaces leaves in left-to-right order.
    pub fn map_leaves(&self, f: &mut impl FnMut(usize) -> usize) -> Word {
        match self {
            Word::Leaf(i) => Word::Leaf(f(*i)),
            Word::Node { left, right, .. } => {
                let l = left.map_leaves(f);
                let r = right.map_leaves(f);
                Word::node(l, r)
            }
        }
    }

    /// Substitutes a word for every leaf.
    pub fn substitute(&self, images: &[Word]) -> Word {
        match self {
            Word::Leaf(i) => images[*i].clone(),
            Word::Node { left, right, .. } => Word::node(left.substitute(images), right.substitute(images)),
        }
    }

    pub fn evaluate<M: Magma>(&self, m: &M, assignment: &[M::Elem]) -> M::Elem {
        match self {
            Word::Leaf(i) => assignment[*i].clone(),
            Word::Node { left, right, .. } => {
                let l = left.evaluate(m, assignment);
                if m.is_zero(&l) {
                    return l;
                }
                let r = right.evaluate(m, assignment);
                if m.is_zero(&r) {
                    return r;
                }
                m.mul(&l, &r)
            }
        }
    }

    /// Fully parenthesized rendering, e.g. `((a*b)*(a*c))`.
    pub fn render(&self, names: &[String]) -> String {
        match self {
            Word::Leaf(i) => names.get(*i).cloned().unwrap_or_else(|| format!("#{i}")),
            Word::Node { left, right, .. } => format!("({}*{})", left.render(names), right.render(names)),
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| match (self, other) {
            (Word::Leaf(a), Word::Leaf(b)) => a.cmp(b),
            (Word::Node { left: l1, right: r1, .. }, Word::Node { left: l2, right: r2, .. }) => {
                l1.cmp(l2).then_with(|| r1.cmp(r2))
            }
            // equal degree means both are leaves or both are products
            (Word::Leaf(_), Word::Node { .. }) => Ordering::Less,
            (Word::Node { .. }, Word::Leaf(_)) => Ordering::Greater,
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A linear combination of words with rational coefficients (no zero terms).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Word, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, Scalar::one());
        p
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Poly) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), c * x);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Poly {
        let mut p = Poly::zero();
        p.add_scaled(c, self);
        p
    }

    /// Bilinear product of two combinations.
    pub fn product(&self, other: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                p.add_term(Word::node(u.clone(), v.clone()), a * b);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    /// Occurrence counts of each of `vars` leaves, if every term agrees.
    pub fn multidegree(&self, vars: usize) -> Result<Vec<usize>, usize> {
        let mut profile: Option<Vec<usize>> = None;
        for w in self.terms.keys() {
            let mut counts = vec![0; vars];
            for leaf in w.leaves() {
                counts[leaf] += 1;
            }
            match &profile {
                None => profile = Some(counts),
                Some(p) => {
                    if let Some(v) = (0..vars).find(|&v| p[v] != counts[v]) {
                        return Err(v);
                    }
                }
            }
        }
        Ok(profile.unwrap_or_else(|| vec![0; vars]))
    }

    pub fn evaluate<M: Magma>(&self, m: &M, assignment: &[M::Elem]) -> M::Elem {
        let mut acc = m.zero();
        for (w, c) in &self.terms {
            let v = w.evaluate(m, assignment);
            if !m.is_zero(&v) {
                m.add_scaled(&mut acc, c, &v);
            }
        }
        acc
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (w, c) in &self.terms {
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
                out.push_str(&format_scalar(&abs));
                out.push('*');
            }
            out.push_str(&w.render(names));
        }
        out
    }
}

/// Syntax tree of one side of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Product(Box<Term>, Box<Term>),
    Sum(Vec<(Scalar, Term)>),
    /// `J(t₁,t₂,t₃) = (t₁t₂)t₃ + (t₂t₃)t₁ + (t₃t₁)t₂`
    Jac(Box<Term>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn zero() -> Term {
        Term::Sum(Vec::new())
    }

    pub fn product(a: Term, b: Term) -> Term {
        Term::Product(Box::new(a), Box::new(b))
    }

    /// Rewrites every `J` node into its three-term expansion.
    pub fn expand(&self) -> Term {
        match self {
            Term::Var(i) => Term::Var(*i),
            Term::Product(a, b) => Term::product(a.expand(), b.expand()),
            Term::Sum(items) => Term::Sum(items.iter().map(|(c, t)| (c.clone(), t.expand())).collect()),
            Term::Jac(a, b, c) => {
                let (a, b, c) = (a.expand(), b.expand(), c.expand());
                let one = Scalar::one;
                Term::Sum(vec![
                    (one(), Term::product(Term::product(a.clone(), b.clone()), c.clone())),
                    (one(), Term::product(Term::product(b.clone(), c.clone()), a.clone())),
                    (one(), Term::product(Term::product(c, a), b)),
                ])
            }
        }
    }

    /// Normal form as a linear combination of words.
    pub fn to_poly(&self) -> Poly {
        match self {
            Term::Var(i) => Poly::word(Word::leaf(*i)),
            Term::Product(a, b) => a.to_poly().product(&b.to_poly()),
            Term::Sum(items) => {
                let mut p = Poly::zero();
                for (c, t) in items {
                    p.add_scaled(c, &t.to_poly());
                }
                p
            }
            Term::Jac(..) => self.expand().to_poly(),
        }
    }
}

/// A homogeneous identity `lhs = rhs`, stored with the normal form of `lhs − rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityDef {
    pub name: String,
    pub variables: Vec<String>,
    pub lhs: Term,
    pub rhs: Term,
    poly: Poly,
    degree_profile: Vec<usize>,
}

impl IdentityDef {
    pub fn new(name: String, variables: Vec<String>, lhs: Term, rhs: Term) -> Result<Self, IdentityError> {
        let lhs = lhs.expand();
        let rhs = rhs.expand();
        let mut poly = lhs.to_poly();
        poly.add_scaled(&-Scalar::one(), &rhs.to_poly());
        let degree_profile =
            poly.multidegree(variables.len()).map_err(|v| IdentityError::NonHomogeneous(variables[v].clone()))?;
        Ok(IdentityDef { name, variables, lhs, rhs, poly, degree_profile })
    }

    /// Normal form of `lhs − rhs`.
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree_profile(&self) -> &[usize] {
        &self.degree_profile
    }

    pub fn total_degree(&self) -> usize {
        self.degree_profile.iter().sum()
    }

    /// True for `c·(x*x) = 0` with `c ≠ 0`, i.e. the identity forcing anticommutativity.
    pub fn is_anticommutativity(&self) -> bool {
        let used: Vec<usize> = (0..self.variables.len()).filter(|&v| self.degree_profile[v] > 0).collect();
        let [v] = used.as_slice() else { return false };
        self.poly.len() == 1
            && self.degree_profile[*v] == 2
            && self.poly.terms().all(|(w, _)| *w == Word::node(Word::leaf(*v), Word::leaf(*v)))
    }

    /// Full polarization: each variable of degree m becomes m fresh copies and
    /// the part multilinear in all copies is kept.
    pub fn polarize(&self) -> MultilinearSystem {
        let mut labels = Vec::new();
        let mut first_copy = Vec::with_capacity(self.variables.len());
        let mut source = Vec::new();
        for (v, name) in self.variables.iter().enumerate() {
            first_copy.push(labels.len());
            let m = self.degree_profile[v];
            for k in 0..m {
                labels.push(if m == 1 { name.clone() } else { format!("{name}{}", k + 1) });
                source.push(v);
            }
        }
        let mut component = Poly::zero();
        for (w, c) in self.poly.terms() {
            let choices: Vec<Vec<Vec<usize>>> = self.degree_profile.iter().map(|&m| permutations(m)).collect();
            let mut pick = vec![0usize; choices.len()];
            loop {
                let mut seen = vec![0usize; self.variables.len()];
                let polarized = w.map_leaves(&mut |v| {
                    let k = seen[v];
                    seen[v] += 1;
                    first_copy[v] + choices[v][pick[v]][k]
                });
                component.add_term(polarized, c.clone());
                // odometer over the per-variable permutation choices
                let mut idx = 0;
                loop {
                    if idx == pick.len() {
                        break;
                    }
                    pick[idx] += 1;
                    if pick[idx] < choices[idx].len() {
                        break;
                    }
                    pick[idx] = 0;
                    idx += 1;
                }
                if idx == pick.len() {
                    break;
                }
            }
        }
        MultilinearSystem { parent: self.name.clone(), variables: labels, source, components: vec![component] }
    }
}

impl fmt::Display for IdentityDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, m - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Multilinear components equivalent (over ℚ) to a parent identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearSystem {
    pub parent: String,
    /// Copy labels, e.g. `x1, x2, y, z`.
    pub variables: Vec<String>,
    /// Index of the parent variable each copy came from.
    pub source: Vec<usize>,
    pub components: Vec<Poly>,
}

impl MultilinearSystem {
    pub fn render(&self) -> Vec<String> {
        self.components.iter().map(|c| format!("{} = 0", c.render(&self.variables))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &str) -> Vec<String> {
        list.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn square_polarizes_to_symmetric_sum() {
        let id = parse_identity("x*x = 0").unwrap();
        assert_eq!(id.degree_profile(), &[2]);
        assert!(id.is_anticommutativity());
        let sys = id.polarize();
        assert_eq!(sys.variables, names("x1 x2"));
        assert_eq!(sys.render(), vec!["(x1*x2) + (x2*x1) = 0"]);
    }

    #[test]
    fn multilinear_identity_polarizes_to_itself() {
        let id = parse_identity("J(x,y,z*u) = 0").unwrap();
        assert_eq!(id.degree_profile(), &[1, 1, 1, 1]);
        let sys = id.polarize();
        assert_eq!(sys.variables, names("x y z u"));
        assert_eq!(sys.components, vec![id.poly().clone()]);
    }

    #[test]
    fn malcev_polarization_matches_hand_expansion() {
        let id = parse_identity("J(x,y,x*z) = J(x,y,z)*x").unwrap();
        assert_eq!(id.degree_profile(), &[2, 1, 1]);
        let sys = id.polarize();
        assert_eq!(sys.variables, names("x1 x2 y z"));
        // J(x1,y,x2z) + J(x2,y,x1z) − J(x1,y,z)x2 − J(x2,y,z)x1, built independently
        let expected = parse_identity("J(p,y,q*z) + J(q,y,p*z) = J(p,y,z)*q + J(q,y,z)*p").unwrap();
        // expected's variables are p, y, q, z; remap to x1=0, x2=1, y=2, z=3
        let remap = [0usize, 2, 1, 3];
        let mut want = Poly::zero();
        for (w, c) in expected.poly().terms() {
            want.add_term(w.map_leaves(&mut |v| remap[v]), c.clone());
        }
        assert_eq!(sys.components[0], want);
    }

    #[test]
    fn word_order_is_degree_then_lexicographic() {
        let a = Word::leaf(0);
        let b = Word::leaf(1);
        let c = Word::leaf(2);
        let ab = Word::node(a.clone(), b.clone());
        let ac = Word::node(a.clone(), c.clone());
        assert!(c < ab);
        assert!(ab < ac);
        assert!(Word::node(a.clone(), ab.clone()) < Word::node(ab.clone(), a.clone()));
        assert_eq!(ac.render(&names("a b c")), "(a*c)");
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
    }
}
