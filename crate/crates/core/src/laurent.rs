//! Sparse Laurent polynomials over cyclotomic fields and the scaled
//! monomial maps that act on them by pullback.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded-lex
//! order, so iteration, equality, and rendering are deterministic. A scaled
//! monomial map sends each variable to a root of unity times a Laurent
//! monomial; every group element handled by this crate acts through such a
//! map.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, RootOfUnity};
use crate::intlattice::{self, IntMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("value is not an invertible monomial")]
    NotInvertible,
    #[error("exponent matrix is not unimodular, the map has no monomial inverse")]
    NotUnimodular,
    #[error("evaluation hit 0 raised to a negative exponent")]
    ZeroToNegativePower,
    #[error("restriction to x_{var} = 0 undefined, a term has a pole there")]
    PoleAtHyperplane { var: usize },
}

/// Error with byte position for the expression grammar.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Integer exponent vector, ordered graded-lexicographically: total degree
/// first, then the leftmost differing entry decides.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }

    pub fn zero(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.dim(), other.dim());
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Variable name table used by the parser and renderer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

impl VarNames {
    /// The default table `x0, x1, ..., x{d-1}`.
    pub fn x(d: usize) -> Self {
        VarNames { names: (0..d).map(|i| format!("x{i}")).collect() }
    }

    pub fn custom<S: Into<String>>(names: Vec<S>) -> Self {
        VarNames { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Sparse Laurent polynomial with cyclotomic coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    dim: usize,
    terms: BTreeMap<ExponentVector, Cyclotomic>,
}

impl LaurentPolynomial {
    pub fn zero(dim: usize) -> Self {
        LaurentPolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Cyclotomic::one())
    }

    pub fn constant(dim: usize, c: Cyclotomic) -> Self {
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(ExponentVector::zero(dim), c);
        }
        p
    }

    pub fn monomial(dim: usize, expts: &[i64], coeff: Cyclotomic) -> Self {
        assert_eq!(expts.len(), dim);
        let mut p = Self::zero(dim);
        if !coeff.is_zero() {
            p.terms.insert(ExponentVector::new(expts.to_vec()), coeff);
        }
        p
    }

    pub fn variable(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        Self::monomial(dim, ExponentVector::unit(dim, i).as_slice(), Cyclotomic::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Cyclotomic {
        self.terms.get(e).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    /// Add `c * x^e` into the polynomial, merging with an existing term.
    pub fn insert_term(&mut self, e: ExponentVector, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        LaurentPolynomial { dim: self.dim, terms }
    }

    /// If the value is a single term, return it.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &Cyclotomic)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Inverse of an invertible single-term value.
    pub fn try_inv(&self) -> Result<Self, LaurentError> {
        let (e, c) = self.as_monomial().ok_or(LaurentError::NotInvertible)?;
        let ci = c.inv().map_err(|_| LaurentError::NotInvertible)?;
        Ok(Self::monomial(self.dim, e.neg().as_slice(), ci))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.dim);
        let mut sq = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents require an invertible monomial.
    pub fn pow_i(&self, e: i64) -> Result<Self, LaurentError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.try_inv()?.pow((-e) as u64))
        }
    }

    /// Common total degree of all terms, if one exists. The zero polynomial
    /// has no degree by convention, avoiding vacuous-degree ambiguity in
    /// linear-system checks.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let d = first.total_degree();
        if it.all(|e| e.total_degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    /// Restrict to the hyperplane `x_i = 0`: every term containing `x_i`
    /// is deleted. A negative exponent in `x_i` anywhere in `f` makes the
    /// restriction undefined (a Laurent pole along the hyperplane).
    pub fn substitute_zero(&self, i: usize) -> Result<Self, LaurentError> {
        assert!(i < self.dim);
        if self.terms.keys().any(|e| e.get(i) < 0) {
            return Err(LaurentError::PoleAtHyperplane { var: i });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.get(i) == 0)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Ok(LaurentPolynomial { dim: self.dim, terms })
    }

    /// True when every exponent is nonnegative (an ordinary polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.as_slice().iter().all(|&x| x >= 0))
    }

    /// Evaluate at a point; negative exponents demand nonzero coordinates.
    pub fn eval(&self, point: &[Cyclotomic]) -> Result<Cyclotomic, LaurentError> {
        assert_eq!(point.len(), self.dim);
        let mut acc = Cyclotomic::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if point[i].is_zero() {
                    if k < 0 {
                        return Err(LaurentError::ZeroToNegativePower);
                    }
                    term = Cyclotomic::zero();
                    break;
                }
                let p = point[i].pow(k).expect("nonzero base");
                term = &term * &p;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Render with the given variable names; terms appear leading-first.
    pub fn render(&self, vars: &VarNames) -> String {
        assert_eq!(vars.len(), self.dim, "name table must match dimension");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let term = render_term(e, c, vars);
            if out.is_empty() {
                out = term;
            } else if let Some(stripped) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

fn render_term(e: &ExponentVector, c: &Cyclotomic, vars: &VarNames) -> String {
    let mut factors: Vec<String> = Vec::new();
    for (i, &k) in e.as_slice().iter().enumerate() {
        if k == 0 {
            continue;
        }
        if k == 1 {
            factors.push(vars.name(i).to_string());
        } else {
            factors.push(format!("{}^{}", vars.name(i), k));
        }
    }
    let coeff = c.render();
    if factors.is_empty() {
        return if coeff.contains(' ') { format!("({coeff})") } else { coeff };
    }
    let vars_part = factors.join("*");
    match coeff.as_str() {
        "1" => vars_part,
        "-1" => format!("-{vars_part}"),
        _ if coeff.contains(' ') => format!("({coeff})*{vars_part}"),
        _ => format!("{coeff}*{vars_part}"),
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&VarNames::x(self.dim)))
    }
}

impl std::ops::Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = LaurentPolynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.insert_term(ea.add(eb), ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        LaurentPolynomial { dim: self.dim, terms }
    }
}

/// An invertible-by-design substitution `x_j -> scalar_j * x^(column j of
/// matrix)`: each variable is sent to a root of unity times a Laurent
/// monomial. Composition, inverses, and pullbacks stay exact.
#[derive(Clone, PartialEq, Eq)]
pub struct ScaledMonomialMap {
    dim: usize,
    /// `matrix[i][j]` is the exponent of `x_i` in the image of `x_j`.
    matrix: Vec<Vec<i64>>,
    scalars: Vec<RootOfUnity>,
}

impl ScaledMonomialMap {
    /// Build from per-variable images: `images[j]` is the exponent vector
    /// and scalar of the image of `x_j`.
    pub fn from_images(images: &[(Vec<i64>, RootOfUnity)]) -> Self {
        let dim = images.len();
        assert!(images.iter().all(|(e, _)| e.len() == dim), "image exponents must have length dim");
        let mut matrix = vec![vec![0i64; dim]; dim];
        for (j, (e, _)) in images.iter().enumerate() {
            for i in 0..dim {
                matrix[i][j] = e[i];
            }
        }
        ScaledMonomialMap { dim, matrix, scalars: images.iter().map(|(_, s)| *s).collect() }
    }

    pub fn identity(dim: usize) -> Self {
        let images: Vec<(Vec<i64>, RootOfUnity)> = (0..dim)
            .map(|j| (ExponentVector::unit(dim, j).as_slice().to_vec(), RootOfUnity::one()))
            .collect();
        Self::from_images(&images)
    }

    /// Diagonal scaling `x_j -> scalars[j] * x_j`.
    pub fn diagonal(scalars: &[RootOfUnity]) -> Self {
        let dim = scalars.len();
        let images: Vec<(Vec<i64>, RootOfUnity)> = scalars
            .iter()
            .enumerate()
            .map(|(j, s)| (ExponentVector::unit(dim, j).as_slice().to_vec(), *s))
            .collect();
        Self::from_images(&images)
    }

    /// Scaled permutation `x_j -> scalars[j] * x_perm[j]`.
    pub fn scaled_permutation(perm: &[usize], scalars: &[RootOfUnity]) -> Self {
        let dim = perm.len();
        assert_eq!(scalars.len(), dim);
        let mut seen = vec![false; dim];
        for &p in perm {
            assert!(p < dim && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let images: Vec<(Vec<i64>, RootOfUnity)> = perm
            .iter()
            .zip(scalars)
            .map(|(&p, s)| (ExponentVector::unit(dim, p).as_slice().to_vec(), *s))
            .collect();
        Self::from_images(&images)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exponent vector of the image of `x_j` (column `j`).
    pub fn image_exponent(&self, j: usize) -> ExponentVector {
        ExponentVector::new((0..self.dim).map(|i| self.matrix[i][j]).collect())
    }

    pub fn scalar(&self, j: usize) -> RootOfUnity {
        self.scalars[j]
    }

    pub fn scalars(&self) -> &[RootOfUnity] {
        &self.scalars
    }

    /// The image of `x_j` as a one-term Laurent polynomial.
    pub fn image(&self, j: usize) -> LaurentPolynomial {
        LaurentPolynomial::monomial(
            self.dim,
            self.image_exponent(j).as_slice(),
            self.scalars[j].as_cyclotomic(),
        )
    }

    /// Substitute the map into `f`: each monomial `x^e` becomes
    /// `(prod_j scalar_j^(e_j)) * x^(matrix . e)`.
    pub fn pullback(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, f.dim(), "dimension mismatch");
        let mut out = LaurentPolynomial::zero(self.dim);
        for (e, c) in f.terms() {
            let mut img = vec![0i64; self.dim];
            let mut s = RootOfUnity::one();
            for (j, &ej) in e.as_slice().iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                for (i, img_i) in img.iter_mut().enumerate() {
                    *img_i += self.matrix[i][j] * ej;
                }
                s = s * self.scalars[j].pow(ej);
            }
            out.insert_term(ExponentVector::new(img), c * &s.as_cyclotomic());
        }
        out
    }

    /// The substitution satisfying
    /// `pullback(f, compose(a, b)) = pullback(pullback(f, a), b)`:
    /// apply `a` symbolically, then substitute `b` into the result.
    pub fn compose(a: &ScaledMonomialMap, b: &ScaledMonomialMap) -> ScaledMonomialMap {
        assert_eq!(a.dim, b.dim, "dimension mismatch");
        let dim = a.dim;
        // exponent part: matrix = b.matrix * a.matrix
        let mut matrix = vec![vec![0i64; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = 0i64;
                for k in 0..dim {
                    acc += b.matrix[i][k] * a.matrix[k][j];
                }
                matrix[i][j] = acc;
            }
        }
        let mut scalars = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut s = a.scalars[j];
            for (i, b_s) in b.scalars.iter().enumerate() {
                s = s * b_s.pow(a.matrix[i][j]);
            }
            scalars.push(s);
        }
        ScaledMonomialMap { dim, matrix, scalars }
    }

    /// Monomial inverse; the exponent matrix must be unimodular.
    pub fn inverse(&self) -> Result<ScaledMonomialMap, LaurentError> {
        let m = IntMatrix::from_rows(&self.matrix);
        let inv = intlattice::inverse_unimodular(&m).map_err(|_| LaurentError::NotUnimodular)?;
        let inv_rows = inv.to_i64_rows().expect("unimodular inverse entries stay within i64 for map sizes");
        let mut scalars = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut s = RootOfUnity::one();
            for (i, self_s) in self.scalars.iter().enumerate() {
                s = s * self_s.pow(-inv_rows[i][j]);
            }
            scalars.push(s);
        }
        Ok(ScaledMonomialMap { dim: self.dim, matrix: inv_rows, scalars })
    }

    /// Iterated self-composition; negative powers go through the inverse.
    pub fn pow(&self, e: i64) -> Result<ScaledMonomialMap, LaurentError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = ScaledMonomialMap::identity(self.dim);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = ScaledMonomialMap::compose(&acc, &sq);
            }
            sq = ScaledMonomialMap::compose(&sq, &sq);
            k >>= 1;
        }
        Ok(acc)
    }

    /// If every image is a single scaled variable, return the permutation
    /// `p` (image of `x_j` is `scalar_j * x_p[j]`) and the scalars.
    pub fn as_scaled_permutation(&self) -> Option<(Vec<usize>, Vec<RootOfUnity>)> {
        let mut perm = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let col: Vec<i64> = (0..self.dim).map(|i| self.matrix[i][j]).collect();
            let nonzero: Vec<usize> = (0..self.dim).filter(|&i| col[i] != 0).collect();
            if nonzero.len() != 1 || col[nonzero[0]] != 1 {
                return None;
            }
            perm.push(nonzero[0]);
        }
        let mut seen = vec![false; self.dim];
        for &p in &perm {
            if seen[p] {
                return None;
            }
            seen[p] = true;
        }
        Some((perm, self.scalars.clone()))
    }

    /// Apply as a point map: coordinate `j` of the image is the image of
    /// `x_j` evaluated at the point, so `f(apply_point(p)) =
    /// pullback(f)(p)` for every `f`.
    pub fn apply_point(&self, point: &[Cyclotomic]) -> Result<Vec<Cyclotomic>, LaurentError> {
        assert_eq!(point.len(), self.dim);
        (0..self.dim).map(|j| self.image(j).eval(point)).collect()
    }

    /// The exponent matrix as an integer matrix (rows indexed by target
    /// variable, columns by source variable).
    pub fn exponent_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.matrix)
    }

    pub fn render(&self, vars: &VarNames) -> String {
        (0..self.dim)
            .map(|j| format!("{} -> {}", vars.name(j), self.image(j).render(vars)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Debug for ScaledMonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&VarNames::x(self.dim)))
    }
}

// ---------------------------------------------------------------------------
// Expression grammar
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            b'/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                let v: BigInt = text.parse().expect("digits parse as BigInt");
                out.push((start, Tok::Int(v)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(ParseError { pos: i, msg: format!("unexpected character {:?}", b as char) });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a VarNames,
    /// Order of the ambient root of unity bound to the literal `w`.
    ambient_root: Option<u64>,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.src_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError { pos: self.here(), msg: format!("expected {t:?}") })
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.here(), msg: msg.into() }
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.pos += 1;
                    let f = self.factor()?;
                    let inv = f.try_inv().map_err(|_| ParseError {
                        pos: at,
                        msg: "division requires an invertible monomial divisor".to_string(),
                    })?;
                    acc = &acc * &inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPolynomial, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(-&f);
        }
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            let at = self.here();
            self.pos += 1;
            let e = self.signed_int()?;
            return base.pow_i(e).map_err(|_| ParseError {
                pos: at,
                msg: "negative exponent requires an invertible monomial base".to_string(),
            });
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let mut neg = false;
        let mut parens = false;
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            parens = true;
        }
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            neg = true;
        }
        let at = self.here();
        let Some(Tok::Int(v)) = self.bump() else {
            return Err(ParseError { pos: at, msg: "expected an integer exponent".to_string() });
        };
        if parens {
            self.expect(&Tok::RParen)?;
        }
        let v = i64::try_from(&v)
            .map_err(|_| ParseError { pos: at, msg: "exponent out of range".to_string() })?;
        Ok(if neg { -v } else { v })
    }

    fn base(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(LaurentPolynomial::constant(
                self.vars.len(),
                Cyclotomic::from_rational(BigRational::from_integer(v)),
            )),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.atom_from_ident(&name, at),
            other => Err(ParseError { pos: at, msg: format!("unexpected token {other:?}") }),
        }
    }

    /// Identifier resolution order: declared variable, the ambient root
    /// literal `w`, then a root-of-unity literal `z{N}`.
    fn atom_from_ident(&mut self, name: &str, at: usize) -> Result<LaurentPolynomial, ParseError> {
        let d = self.vars.len();
        if let Some(i) = self.vars.index_of(name) {
            return Ok(LaurentPolynomial::variable(d, i));
        }
        if name == "w" {
            let n = self.ambient_root.ok_or_else(|| ParseError {
                pos: at,
                msg: "literal w needs an ambient root order in this context".to_string(),
            })?;
            return Ok(LaurentPolynomial::constant(d, Cyclotomic::root_of_unity(n, 1)));
        }
        if let Some(rest) = name.strip_prefix('z') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let n: u64 = rest.parse().map_err(|_| ParseError {
                    pos: at,
                    msg: "root order out of range".to_string(),
                })?;
                if n == 0 {
                    return Err(ParseError { pos: at, msg: "root order must be positive".to_string() });
                }
                return Ok(LaurentPolynomial::constant(d, Cyclotomic::root_of_unity(n, 1)));
            }
        }
        Err(ParseError { pos: at, msg: format!("unknown symbol {name:?}") })
    }
}

/// Parse an expression over the given variables. `ambient_root` binds the
/// literal `w` to `zeta_n`; `z{N}` literals are always available unless the
/// name is shadowed by a declared variable.
pub fn parse_laurent(
    src: &str,
    vars: &VarNames,
    ambient_root: Option<u64>,
) -> Result<LaurentPolynomial, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, vars, ambient_root, src_len: src.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xvars(d: usize) -> VarNames {
        VarNames::x(d)
    }

    fn eta(n: usize) -> ScaledMonomialMap {
        let perm: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
        ScaledMonomialMap::scaled_permutation(&perm, &vec![RootOfUnity::one(); n])
    }

    fn xi(n: usize) -> ScaledMonomialMap {
        let scalars: Vec<RootOfUnity> =
            (0..n).map(|i| RootOfUnity::new(n as u64, -(i as i64))).collect();
        ScaledMonomialMap::diagonal(&scalars)
    }

    #[test]
    fn graded_lex_order() {
        let a = ExponentVector::new(vec![1, 0]);
        let b = ExponentVector::new(vec![0, 1]);
        let c = ExponentVector::new(vec![0, 2]);
        assert!(a > b);
        assert!(c > a);
        assert!(ExponentVector::new(vec![2, -1]) > ExponentVector::new(vec![1, 0]));
    }

    #[test]
    fn arithmetic_collects_terms() {
        let d = 2;
        let x0 = LaurentPolynomial::variable(d, 0);
        let x1 = LaurentPolynomial::variable(d, 1);
        let s = &(&x0 + &x1) * &(&x0 - &x1);
        let expect = &(&x0 * &x0) - &(&x1 * &x1);
        assert_eq!(s, expect);
        assert!((&s - &expect).is_zero());
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn homogeneity_detection() {
        let vars = xvars(2);
        let h = parse_laurent("x0^2 + 3*x0*x1", &vars, None).unwrap();
        assert_eq!(h.homogeneous_degree(), Some(2));
        let nh = parse_laurent("x0^2 + x1", &vars, None).unwrap();
        assert!(!nh.is_homogeneous());
        let laurent = parse_laurent("x0*x1^-1", &vars, None).unwrap();
        assert_eq!(laurent.homogeneous_degree(), Some(0));
        // the zero polynomial has no degree at all
        assert_eq!(LaurentPolynomial::zero(2).homogeneous_degree(), None);
        assert!(!LaurentPolynomial::zero(2).is_homogeneous());
    }

    #[test]
    fn hyperplane_restriction() {
        let vars = xvars(3);
        // sum over the 3-cycle of x_i x_{i+1}^2; killing x0 leaves one term
        let f = parse_laurent("x0*x1^2 + x1*x2^2 + x2*x0^2", &vars, None).unwrap();
        let r = f.substitute_zero(0).unwrap();
        assert_eq!(r, parse_laurent("x1*x2^2", &vars, None).unwrap());
        // a monomial divisible by x0 restricts to zero
        let m = parse_laurent("(x0*x1*x2)^3", &vars, None).unwrap();
        assert!(m.substitute_zero(0).unwrap().is_zero());
        // poles along the hyperplane are rejected
        let pole = parse_laurent("x0*x1^-1", &vars, None).unwrap();
        assert_eq!(
            pole.substitute_zero(1),
            Err(LaurentError::PoleAtHyperplane { var: 1 })
        );
        // restriction in a different variable is fine
        assert_eq!(pole.substitute_zero(2).unwrap(), pole);
    }

    #[test]
    fn pullback_under_cycle_and_diagonal() {
        let n = 3;
        let f = LaurentPolynomial::variable(n, 0);
        // eta sends x0 to x1
        assert_eq!(eta(n).pullback(&f), LaurentPolynomial::variable(n, 1));
        // xi scales x_i by zeta_3^(-i)
        let g = LaurentPolynomial::variable(n, 2);
        let img = xi(n).pullback(&g);
        let expect = LaurentPolynomial::monomial(n, &[0, 0, 1], Cyclotomic::root_of_unity(3, -2));
        assert_eq!(img, expect);
    }

    #[test]
    fn compose_respects_pullback_contravariance() {
        let n = 3;
        let a = xi(n);
        let b = eta(n);
        let f = parse_laurent("x0^2*x1 + 5*x2", &xvars(n), None).unwrap();
        let ab = ScaledMonomialMap::compose(&a, &b);
        assert_eq!(ab.pullback(&f), b.pullback(&a.pullback(&f)));
        // iterating the cycle twice moves x0 to x2
        let ee = ScaledMonomialMap::compose(&eta(n), &eta(n));
        assert_eq!(
            ee.pullback(&LaurentPolynomial::variable(n, 0)),
            LaurentPolynomial::variable(n, 2)
        );
    }

    #[test]
    fn known_commutation_discrepancy_between_orders() {
        // compose(xi, eta) and compose(eta, xi) differ exactly by a scalar.
        let n = 3;
        let ab = ScaledMonomialMap::compose(&xi(n), &eta(n));
        let ba = ScaledMonomialMap::compose(&eta(n), &xi(n));
        assert_ne!(ab, ba);
        assert_eq!(ab.exponent_matrix(), ba.exponent_matrix());
        // scalar(ab)_j = zeta^(-j), scalar(ba)_j = zeta^(-(j+1)): the ratio
        // is the central scalar the group layer calls the commutator.
        for j in 0..n {
            let ratio = ab.scalar(j) * ba.scalar(j).inv();
            assert_eq!(ratio, RootOfUnity::new(3, 1));
        }
    }

    #[test]
    fn inverse_round_trips() {
        let n = 4;
        let m = ScaledMonomialMap::compose(&xi(n), &eta(n));
        let inv = m.inverse().unwrap();
        assert_eq!(ScaledMonomialMap::compose(&m, &inv), ScaledMonomialMap::identity(n));
        assert_eq!(ScaledMonomialMap::compose(&inv, &m), ScaledMonomialMap::identity(n));

        // a non-unimodular exponent matrix has no monomial inverse
        let sq = ScaledMonomialMap::from_images(&[(vec![2, 0], RootOfUnity::one()), (vec![0, 1], RootOfUnity::one())]);
        assert_eq!(sq.inverse(), Err(LaurentError::NotUnimodular));
    }

    #[test]
    fn map_powers_and_permutation_view() {
        let n = 5;
        let e = eta(n);
        assert_eq!(e.pow(n as i64).unwrap(), ScaledMonomialMap::identity(n));
        assert_eq!(e.pow(-1).unwrap(), e.pow(n as i64 - 1).unwrap());
        let (perm, scalars) = e.as_scaled_permutation().unwrap();
        assert_eq!(perm, vec![1, 2, 3, 4, 0]);
        assert!(scalars.iter().all(|s| s.is_one()));
        let twist = ScaledMonomialMap::from_images(&[(vec![1, 1], RootOfUnity::one()), (vec![0, 1], RootOfUnity::one())]);
        assert!(twist.as_scaled_permutation().is_none());
    }

    #[test]
    fn point_action_matches_pullback() {
        let n = 3;
        let m = ScaledMonomialMap::compose(&eta(n), &xi(n));
        let f = parse_laurent("x0*x1 + x2^2", &xvars(n), None).unwrap();
        let p = vec![
            Cyclotomic::root_of_unity(3, 1),
            Cyclotomic::from_integer(2),
            Cyclotomic::from_integer(-1),
        ];
        let lhs = f.eval(&m.apply_point(&p).unwrap()).unwrap();
        let rhs = m.pullback(&f).eval(&p).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_guards_negative_exponents_at_zero() {
        let f = parse_laurent("x0^-1", &xvars(1), None).unwrap();
        assert_eq!(f.eval(&[Cyclotomic::zero()]), Err(LaurentError::ZeroToNegativePower));
        assert_eq!(
            f.eval(&[Cyclotomic::from_integer(2)]),
            Ok(Cyclotomic::from_rational(BigRational::new(1.into(), 2.into())))
        );
    }

    #[test]
    fn parser_handles_roots_rationals_and_precedence() {
        let vars = xvars(2);
        let f = parse_laurent("1/2*x0^2 - z3^2*x1 + w*x0*x1", &vars, Some(4)).unwrap();
        let half = Cyclotomic::from_rational(BigRational::new(1.into(), 2.into()));
        let mut expect = LaurentPolynomial::monomial(2, &[2, 0], half);
        expect = &expect - &LaurentPolynomial::monomial(2, &[0, 1], Cyclotomic::root_of_unity(3, 2));
        expect = &expect + &LaurentPolynomial::monomial(2, &[1, 1], Cyclotomic::root_of_unity(4, 1));
        assert_eq!(f, expect);

        // precedence: ^ binds tighter than unary minus and *
        let g = parse_laurent("-x0^2", &vars, None).unwrap();
        assert_eq!(g, -&LaurentPolynomial::monomial(2, &[2, 0], Cyclotomic::one()));
        let h = parse_laurent("2*x0^-2", &vars, None).unwrap();
        assert_eq!(h, LaurentPolynomial::monomial(2, &[-2, 0], Cyclotomic::from_integer(2)));
    }

    #[test]
    fn parser_rejects_bad_input() {
        let vars = xvars(2);
        assert!(parse_laurent("x0 +", &vars, None).is_err());
        assert!(parse_laurent("q3", &vars, None).is_err());
        assert!(parse_laurent("w", &vars, None).is_err());
        assert!(parse_laurent("x0 / (x0 + x1)", &vars, None).is_err());
        assert!(parse_laurent("(x0 + x1)^-1", &vars, None).is_err());
        assert!(parse_laurent("x0 x1", &vars, None).is_err());
    }

    #[test]
    fn variable_names_shadow_root_literals() {
        let vars = VarNames::custom(vec!["z1", "z2"]);
        let f = parse_laurent("z1*z2", &vars, None).unwrap();
        assert_eq!(f, LaurentPolynomial::monomial(2, &[1, 1], Cyclotomic::one()));
        // unshadowed z-literals still work
        let g = parse_laurent("z4^1", &xvars(1), None).unwrap();
        assert_eq!(g, LaurentPolynomial::constant(1, Cyclotomic::root_of_unity(4, 1)));
    }

    #[test]
    fn render_then_parse_round_trips() {
        let vars = xvars(3);
        let samples = [
            "0",
            "1",
            "-x0",
            "x0^2*x1 - x2",
            "1/2 + x0^-3*x1",
            "z3^1*x0 + 7",
        ];
        for s in samples {
            let f = parse_laurent(s, &vars, None).unwrap();
            let r = f.render(&vars);
            let g = parse_laurent(&r, &vars, None).unwrap();
            assert_eq!(f, g, "roundtrip failed for {s} rendered as {r}");
        }
    }
}
