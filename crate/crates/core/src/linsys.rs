//! Semi-invariant linear systems and Groebner-based basepoint-freeness
//! certificates.
//!
//! Everything in this module has integer coefficients, so the Groebner
//! engine works over the rationals and never touches cyclotomic
//! arithmetic. The engine is a plain Buchberger loop with the two
//! classical pair-elimination criteria and a hard budget: running out of
//! budget is a distinct `Inconclusive` outcome, never a wrong answer, and
//! every completed basis re-checks its own postconditions before it is
//! returned.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::Cyclotomic;
use crate::heisenberg::{all_realizations, eta_map, molien_dimensions, xi_map};
use crate::laurent::{LaurentPolynomial, ScaledMonomialMap, VarNames};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinsysError {
    #[error("k = {k} out of range, need 1 <= k <= {max}")]
    KOutOfRange { k: u64, max: u64 },
    #[error("m = {m} out of range, need m >= n = {n}")]
    MOutOfRange { m: u64, n: u64 },
    #[error("not a polynomial: negative exponent in variable {var}")]
    NegativeExponent { var: usize },
    #[error("not a rational polynomial: coefficient outside the rationals")]
    IrrationalCoefficient,
}

// ---------------------------------------------------------------------------
// Monomials and term orders
// ---------------------------------------------------------------------------

/// Exponent vector of a (non-Laurent) monomial.
pub type Mono = Vec<u32>;

fn mono_total(a: &[u32]) -> u64 {
    a.iter().map(|&x| x as u64).sum()
}

fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x <= y)
}

fn mono_div(b: &[u32], a: &[u32]) -> Mono {
    b.iter()
        .zip(a)
        .map(|(&x, &y)| {
            debug_assert!(x >= y);
            x - y
        })
        .collect()
}

fn mono_lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A monomial total order compatible with multiplication, with 1 minimal.
/// `priority[0]` is the most significant variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl TermOrder {
    pub fn grevlex(dim: usize) -> Self {
        TermOrder { kind: OrderKind::Grevlex, priority: (0..dim).collect() }
    }

    pub fn lex(dim: usize) -> Self {
        TermOrder { kind: OrderKind::Lex, priority: (0..dim).collect() }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Self {
        let mut seen = vec![false; priority.len()];
        for &p in &priority {
            assert!(p < priority.len() && !seen[p], "priority must be a permutation");
            seen[p] = true;
        }
        TermOrder { kind, priority }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.priority.len()
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        debug_assert_eq!(a.len(), self.priority.len());
        debug_assert_eq!(b.len(), self.priority.len());
        match self.kind {
            OrderKind::Grevlex => {
                match mono_total(a).cmp(&mono_total(b)) {
                    Ordering::Equal => {}
                    other => return other,
                }
                // ties: the last differing variable with the smaller
                // exponent belongs to the larger monomial
                for &i in self.priority.iter().rev() {
                    if a[i] != b[i] {
                        return b[i].cmp(&a[i]);
                    }
                }
                Ordering::Equal
            }
            OrderKind::Lex => {
                for &i in &self.priority {
                    if a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomials over the rationals
// ---------------------------------------------------------------------------

/// A polynomial with arbitrary-precision rational coefficients and
/// nonnegative exponents. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    dim: usize,
    terms: BTreeMap<Mono, BigRational>,
}

impl RationalPolynomial {
    pub fn zero(dim: usize) -> Self {
        RationalPolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    pub fn variable(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(dim, e, BigRational::one())
    }

    pub fn monomial(dim: usize, exponents: Mono, c: BigRational) -> Self {
        assert_eq!(exponents.len(), dim);
        let mut p = Self::zero(dim);
        p.add_term(exponents, c);
        p
    }

    /// Add `c * x^e` into the polynomial, merging with an existing term.
    pub fn add_term(&mut self, e: Mono, c: BigRational) {
        assert_eq!(e.len(), self.dim);
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

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&x| x == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| mono_total(e)).max()
    }

    /// `Some(d)` when every term has total degree `d`; `None` for zero or
    /// inhomogeneous polynomials.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys();
        let d = mono_total(it.next()?);
        if it.all(|e| mono_total(e) == d) {
            Some(d)
        } else {
            None
        }
    }

    /// The largest term under `order`.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Mono, &BigRational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        RationalPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, q)| (e.clone(), q * c)).collect(),
        }
    }

    /// Multiply by the single term `c * x^e`.
    pub fn mul_term(&self, e: &[u32], c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        RationalPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, q)| (mono_mul(m, e), q * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.dim);
        let mut sq = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Substitute `x_i = 0`: drop every term with a positive exponent
    /// there. Total on polynomials, unlike the Laurent-side restriction.
    pub fn substitute_zero(&self, i: usize) -> Self {
        assert!(i < self.dim);
        RationalPolynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == 0)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterpret in `dim + 1` variables, the new one last with exponent 0.
    fn extend_by_one(&self) -> Self {
        RationalPolynomial {
            dim: self.dim + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.push(0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    pub fn to_laurent(&self) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero(self.dim);
        for (e, c) in &self.terms {
            let ie: Vec<i64> = e.iter().map(|&x| x as i64).collect();
            out.insert_term(
                crate::laurent::ExponentVector::new(ie),
                Cyclotomic::from_rational(c.clone()),
            );
        }
        out
    }

    pub fn from_laurent(f: &LaurentPolynomial) -> Result<Self, LinsysError> {
        let mut out = Self::zero(f.dim());
        for (e, c) in f.terms() {
            let mut mono = Vec::with_capacity(f.dim());
            for (i, &x) in e.as_slice().iter().enumerate() {
                if x < 0 {
                    return Err(LinsysError::NegativeExponent { var: i });
                }
                mono.push(x as u32);
            }
            let q = c.as_rational().ok_or(LinsysError::IrrationalCoefficient)?;
            out.add_term(mono, q);
        }
        Ok(out)
    }

    pub fn render(&self, vars: &VarNames) -> String {
        assert_eq!(vars.len(), self.dim);
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

fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn render_term(e: &[u32], c: &BigRational, vars: &VarNames) -> String {
    let mut factors: Vec<String> = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if k == 1 {
            factors.push(vars.name(i).to_string());
        } else {
            factors.push(format!("{}^{}", vars.name(i), k));
        }
    }
    if factors.is_empty() {
        return render_rational(c);
    }
    let vars_part = factors.join("*");
    if c.is_one() {
        vars_part
    } else if (-c).is_one() {
        format!("-{vars_part}")
    } else {
        format!("{}*{vars_part}", render_rational(c))
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&VarNames::x(self.dim)))
    }
}

impl std::ops::Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        assert_eq!(self.dim, rhs.dim);
        let mut out = RationalPolynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(mono_mul(e1, e2), c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Division and Buchberger
// ---------------------------------------------------------------------------

/// Remainder of multivariate division of `f` by `basis` under `order`:
/// no remainder term is divisible by any basis leading term. Unique when
/// the basis is a Groebner basis.
pub fn normal_form(
    f: &RationalPolynomial,
    basis: &[RationalPolynomial],
    order: &TermOrder,
) -> RationalPolynomial {
    let leads: Vec<(Mono, BigRational)> = basis
        .iter()
        .map(|g| {
            let (e, c) = g.leading_term(order).expect("basis elements are nonzero");
            (e.clone(), c.clone())
        })
        .collect();
    let mut p = f.clone();
    let mut r = RationalPolynomial::zero(f.dim);
    while let Some((lm, lc)) = p.leading_term(order).map(|(e, c)| (e.clone(), c.clone())) {
        match leads.iter().position(|(ge, _)| mono_divides(ge, &lm)) {
            Some(i) => {
                let q = &lc / &leads[i].1;
                let shift = mono_div(&lm, &leads[i].0);
                p = &p - &basis[i].mul_term(&shift, &q);
            }
            None => {
                r.add_term(lm.clone(), lc.clone());
                p.add_term(lm, -lc);
            }
        }
    }
    r
}

/// The S-polynomial of `f` and `g`.
pub fn s_polynomial(
    f: &RationalPolynomial,
    g: &RationalPolynomial,
    order: &TermOrder,
) -> RationalPolynomial {
    let (fe, fc) = f.leading_term(order).expect("nonzero");
    let (ge, gc) = g.leading_term(order).expect("nonzero");
    let l = mono_lcm(fe, ge);
    let a = f.mul_term(&mono_div(&l, fe), &fc.recip());
    let b = g.mul_term(&mono_div(&l, ge), &gc.recip());
    &a - &b
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    polys: Vec<RationalPolynomial>,
    order: TermOrder,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn polys(&self) -> &[RationalPolynomial] {
        &self.polys
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Whether the ideal is the whole ring.
    pub fn contains_one(&self) -> bool {
        self.polys.iter().any(|p| p.as_constant().map(|c| !c.is_zero()).unwrap_or(false))
    }
}

/// Outcome of a budgeted basis computation: either a finished reduced
/// basis, or a statement that the budget ran out first.
#[derive(Debug, Clone)]
pub enum GbOutcome {
    Complete(GroebnerBasis),
    Inconclusive { pairs_processed: u64, budget: u64 },
}

impl GbOutcome {
    pub fn basis(&self) -> Option<&GroebnerBasis> {
        match self {
            GbOutcome::Complete(b) => Some(b),
            GbOutcome::Inconclusive { .. } => None,
        }
    }
}

pub const DEFAULT_PAIR_BUDGET: u64 = 50_000;

pub fn buchberger(gens: &[RationalPolynomial], order: &TermOrder) -> GbOutcome {
    buchberger_with_budget(gens, order, DEFAULT_PAIR_BUDGET)
}

/// Buchberger's algorithm with the coprimality and chain criteria, normal
/// pair selection, an early exit as soon as a constant enters the ideal,
/// and a hard S-pair budget. Postconditions are checked on every
/// completed run, not trusted.
pub fn buchberger_with_budget(
    gens: &[RationalPolynomial],
    order: &TermOrder,
    budget: u64,
) -> GbOutcome {
    let dim = order.dim();
    let inputs: Vec<RationalPolynomial> =
        gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    assert!(!inputs.is_empty(), "need at least one nonzero generator");
    for g in &inputs {
        assert_eq!(g.dim(), dim, "generator dimension must match the order");
    }

    let monic = |p: &RationalPolynomial| {
        let (_, c) = p.leading_term(order).expect("nonzero");
        p.scale(&c.recip())
    };

    let unit_basis = || {
        let basis = GroebnerBasis {
            polys: vec![RationalPolynomial::one(dim)],
            order: order.clone(),
            reduced: true,
        };
        check_postconditions(&inputs, &basis);
        GbOutcome::Complete(basis)
    };

    let mut g: Vec<RationalPolynomial> = Vec::new();
    for p in &inputs {
        if p.as_constant().is_some() {
            // nonzero constants were kept, zero dropped above
            return unit_basis();
        }
        g.push(monic(p));
    }

    // pending and handled pairs, both kept sorted for determinism
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut handled: Vec<(usize, usize)> = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            pending.push((i, j));
        }
    }

    let lead = |g: &[RationalPolynomial], i: usize| -> Mono {
        g[i].leading_term(order).expect("nonzero").0.clone()
    };

    let mut pairs_processed: u64 = 0;
    while !pending.is_empty() {
        if pairs_processed >= budget {
            return GbOutcome::Inconclusive { pairs_processed, budget };
        }
        pairs_processed += 1;

        // normal selection: smallest lcm under the order, then smallest ids
        let mut best = 0usize;
        let mut best_lcm = mono_lcm(&lead(&g, pending[0].0), &lead(&g, pending[0].1));
        for (idx, &(i, j)) in pending.iter().enumerate().skip(1) {
            let l = mono_lcm(&lead(&g, i), &lead(&g, j));
            if order.cmp(&l, &best_lcm) == std::cmp::Ordering::Less {
                best = idx;
                best_lcm = l;
            }
        }
        let (i, j) = pending.remove(best);
        handled.push((i, j));

        let li = lead(&g, i);
        let lj = lead(&g, j);
        // coprime leading monomials: S-polynomial reduces to zero
        if mono_lcm(&li, &lj) == mono_mul(&li, &lj) {
            continue;
        }
        // chain criterion: some g_k divides the lcm and both smaller pairs
        // are already handled
        let lcm_ij = mono_lcm(&li, &lj);
        let chain = (0..g.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            if !mono_divides(&lead(&g, k), &lcm_ij) {
                return false;
            }
            let a = (i.min(k), i.max(k));
            let b = (j.min(k), j.max(k));
            handled.contains(&a) && handled.contains(&b)
        });
        if chain {
            continue;
        }

        let s = s_polynomial(&g[i], &g[j], order);
        let r = normal_form(&s, &g, order);
        if r.is_zero() {
            continue;
        }
        if r.as_constant().is_some() {
            return unit_basis();
        }
        let t = g.len();
        g.push(monic(&r));
        for k in 0..t {
            pending.push((k, t));
        }
    }

    // minimize: drop elements whose leading term another's divides
    let mut keep = vec![true; g.len()];
    for i in 0..g.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..g.len() {
            if i == j || !keep[j] {
                continue;
            }
            let li = lead(&g, i);
            let lj = lead(&g, j);
            if mono_divides(&lj, &li) && (lj != li || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<RationalPolynomial> = g
        .into_iter()
        .zip(&keep)
        .filter_map(|(p, &k)| k.then_some(p))
        .collect();

    // autoreduce to the unique reduced basis
    let mut reduced = minimal;
    loop {
        let mut changed = false;
        for i in 0..reduced.len() {
            let others: Vec<RationalPolynomial> = reduced
                .iter()
                .enumerate()
                .filter_map(|(j, p)| (j != i).then(|| p.clone()))
                .collect();
            let r = monic(&normal_form(&reduced[i], &others, order));
            if r != reduced[i] {
                reduced[i] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    reduced.sort_by(|a, b| {
        let (ea, _) = a.leading_term(order).expect("nonzero");
        let (eb, _) = b.leading_term(order).expect("nonzero");
        order.cmp(ea, eb)
    });

    let basis = GroebnerBasis { polys: reduced, order: order.clone(), reduced: true };
    check_postconditions(&inputs, &basis);
    GbOutcome::Complete(basis)
}

/// Hard postconditions of every completed run: all inputs and all
/// S-polynomials reduce to zero, and the basis has the reduced shape.
fn check_postconditions(inputs: &[RationalPolynomial], basis: &GroebnerBasis) {
    let order = &basis.order;
    let polys = &basis.polys;
    for (idx, f) in inputs.iter().enumerate() {
        assert!(
            normal_form(f, polys, order).is_zero(),
            "postcondition: input {idx} does not reduce to zero"
        );
    }
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let s = s_polynomial(&polys[i], &polys[j], order);
            assert!(
                normal_form(&s, polys, order).is_zero(),
                "postcondition: S({i}, {j}) does not reduce to zero"
            );
        }
    }
    for (i, p) in polys.iter().enumerate() {
        let (_, lc) = p.leading_term(order).expect("nonzero");
        assert!(lc.is_one(), "postcondition: element {i} is not monic");
        for (j, q) in polys.iter().enumerate() {
            if i == j {
                continue;
            }
            let (lq, _) = q.leading_term(order).expect("nonzero");
            assert!(
                p.terms().all(|(e, _)| !mono_divides(lq, e)),
                "postcondition: element {i} has a term divisible by the lead of {j}"
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Radical membership and basepoint freeness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadicalOutcome {
    InRadical,
    NotInRadical,
    Inconclusive,
}

/// Rabinowitsch test: `x_i` lies in the radical of the ideal iff the
/// ideal extended by `1 - u x_i` is the whole ring. The fresh variable
/// `u` goes last in the order priority.
pub fn variable_in_radical(
    gens: &[RationalPolynomial],
    i: usize,
    budget: u64,
) -> RadicalOutcome {
    assert!(!gens.is_empty());
    let dim = gens[0].dim();
    assert!(i < dim);
    let mut extended: Vec<RationalPolynomial> =
        gens.iter().map(RationalPolynomial::extend_by_one).collect();
    let mut e = vec![0u32; dim + 1];
    e[i] = 1;
    e[dim] = 1;
    let mut witness = RationalPolynomial::one(dim + 1);
    witness.add_term(e, -BigRational::one());
    extended.push(witness);
    let order = TermOrder::grevlex(dim + 1);
    match buchberger_with_budget(&extended, &order, budget) {
        GbOutcome::Inconclusive { .. } => RadicalOutcome::Inconclusive,
        GbOutcome::Complete(basis) => {
            if basis.contains_one() {
                RadicalOutcome::InRadical
            } else {
                RadicalOutcome::NotInRadical
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VariableOutcome {
    pub variable: usize,
    pub outcome: RadicalOutcome,
    pub millis: u64,
}

/// Per-variable radical membership for the degree-n system
/// `{f_1, ..., f_n, x_0...x_(n-1)}`: all `InRadical` means the system has
/// no basepoints, even at the cone level.
#[derive(Debug, Clone, Serialize)]
pub struct BasepointReport {
    pub n: u64,
    pub budget: u64,
    pub outcomes: Vec<VariableOutcome>,
}

impl BasepointReport {
    pub fn all_in_radical(&self) -> bool {
        self.outcomes.iter().all(|o| o.outcome == RadicalOutcome::InRadical)
    }

    pub fn any_inconclusive(&self) -> bool {
        self.outcomes.iter().any(|o| o.outcome == RadicalOutcome::Inconclusive)
    }
}

pub fn basepoint_free_certificate(n: u64, budget: u64) -> BasepointReport {
    assert!(n >= 2);
    let gens = system_l_degree_n(n);
    let mut outcomes = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        let start = Instant::now();
        let outcome = variable_in_radical(&gens, i, budget);
        outcomes.push(VariableOutcome {
            variable: i,
            outcome,
            millis: start.elapsed().as_millis() as u64,
        });
    }
    BasepointReport { n, budget, outcomes }
}

// ---------------------------------------------------------------------------
// The semi-invariant systems
// ---------------------------------------------------------------------------

/// `f_k = sum_i x_i^k x_(i+1)^(n-k)`, indices cyclic mod n. Homogeneous
/// of degree n; cyclically colliding terms merge (n = 2, k = 1 gives
/// `2 x_0 x_1`).
pub fn f_poly(n: u64, k: u64) -> Result<RationalPolynomial, LinsysError> {
    if k < 1 || k > n {
        return Err(LinsysError::KOutOfRange { k, max: n });
    }
    f_poly_m(n, k, n)
}

/// `f_k^(m) = sum_i x_i^k x_(i+1)^(m-k)`, the degree-m companion family.
pub fn f_poly_m(n: u64, k: u64, m: u64) -> Result<RationalPolynomial, LinsysError> {
    if m < n {
        return Err(LinsysError::MOutOfRange { m, n });
    }
    if k < 1 || k > m {
        return Err(LinsysError::KOutOfRange { k, max: m });
    }
    let d = n as usize;
    let mut f = RationalPolynomial::zero(d);
    for i in 0..d {
        let mut e = vec![0u32; d];
        e[i] += k as u32;
        e[(i + 1) % d] += (m - k) as u32;
        f.add_term(e, BigRational::one());
    }
    Ok(f)
}

/// The degree-n reduction of the invariant system:
/// `{f_1, ..., f_n, x_0 x_1 ... x_(n-1)}`.
pub fn system_l_degree_n(n: u64) -> Vec<RationalPolynomial> {
    assert!(n >= 2);
    let d = n as usize;
    let mut out: Vec<RationalPolynomial> = (1..=n)
        .map(|k| f_poly(n, k).expect("k is in range"))
        .collect();
    out.push(RationalPolynomial::monomial(d, vec![1; d], BigRational::one()));
    out
}

/// The invariant linear system itself: `{f_1^n, ..., f_n^n,
/// (x_0...x_(n-1))^n}`, each member homogeneous of degree n^2.
pub fn system_l(n: u64) -> Vec<RationalPolynomial> {
    system_l_degree_n(n).iter().map(|f| f.pow(n as u32)).collect()
}

/// Substitute `x_i = 0` in every member and drop the ones that vanish.
pub fn restrict_system_to_hyperplane(
    system: &[RationalPolynomial],
    i: usize,
) -> Vec<RationalPolynomial> {
    system
        .iter()
        .map(|f| f.substitute_zero(i))
        .filter(|f| !f.is_zero())
        .collect()
}

/// For even n >= 4 the degree-n system has an honest basepoint:
/// `(1, 0, t, 0, ..., 0)` with `t = zeta_2n`. Zeros at every odd position
/// kill each cross term `x_i^k x_(i+1)^(n-k)` (both exponents positive,
/// adjacent support), and the surviving power sum is `1 + t^n = 0`. The
/// point is returned only after every member evaluates to zero exactly.
pub fn even_basepoint_witness(n: u64) -> Option<Vec<Cyclotomic>> {
    if n < 4 || n % 2 != 0 {
        return None;
    }
    let d = n as usize;
    let mut point = vec![Cyclotomic::zero(); d];
    point[0] = Cyclotomic::one();
    point[2] = Cyclotomic::root_of_unity(2 * n, 1);
    let all_vanish = system_l_degree_n(n).iter().all(|f| {
        f.to_laurent()
            .eval(&point)
            .expect("system members are polynomials")
            .is_zero()
    });
    all_vanish.then_some(point)
}

// ---------------------------------------------------------------------------
// The n = 3 showcase
// ---------------------------------------------------------------------------

/// Exact rank of the span of a family, by fraction-free row reduction on
/// the exponent-indexed coefficient matrix.
pub fn polynomial_rank(polys: &[RationalPolynomial]) -> usize {
    let mut rows: Vec<BTreeMap<Mono, BigRational>> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.terms.clone())
        .collect();
    let mut rank = 0;
    while let Some(best) = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .max_by(|(_, a), (_, b)| {
            a.last_key_value().unwrap().0.cmp(b.last_key_value().unwrap().0)
        })
        .map(|(i, _)| i)
    {
        let row = rows.swap_remove(best);
        let (pivot, pc) = row.last_key_value().unwrap();
        for other in &mut rows {
            if let Some(c) = other.get(pivot).cloned() {
                let factor = &c / pc;
                for (e, v) in &row {
                    let updated = match other.get(e) {
                        Some(w) => w - &(&factor * v),
                        None => -(&factor * v),
                    };
                    if updated.is_zero() {
                        other.remove(e);
                    } else {
                        other.insert(e.clone(), updated);
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, Serialize)]
pub struct ShowcaseDegree {
    pub degree: usize,
    pub span_dimension: usize,
    pub molien_dimension: usize,
}

/// The four classical degree-3, -3, -6, -9 invariants of the n = 3
/// action, checked for invariance, for preserving the pencil spanned by
/// the cubics, and for filling the whole invariant ring degree by degree.
#[derive(Debug, Clone, Serialize)]
pub struct ShowcaseReport {
    pub generator_invariant: Vec<bool>,
    pub xi_fixes_cubic: bool,
    pub eta_fixes_cubic: bool,
    pub xi_fixes_product: bool,
    pub eta_fixes_product: bool,
    pub degrees: Vec<ShowcaseDegree>,
    pub mismatched_degrees: Vec<usize>,
}

impl ShowcaseReport {
    pub fn passed(&self) -> bool {
        self.generator_invariant.iter().all(|&b| b)
            && self.xi_fixes_cubic
            && self.eta_fixes_cubic
            && self.xi_fixes_product
            && self.eta_fixes_product
            && self.mismatched_degrees.is_empty()
    }
}

/// The four generators: `xyz`, `x^3+y^3+z^3`, `x^3y^3+y^3z^3+z^3x^3`,
/// `x^3y^6+y^3z^6+z^3x^6`.
pub fn showcase_generators() -> Vec<RationalPolynomial> {
    let cyclic = |rows: &[[u32; 3]]| {
        let mut f = RationalPolynomial::zero(3);
        for r in rows {
            f.add_term(r.to_vec(), BigRational::one());
        }
        f
    };
    vec![
        cyclic(&[[1, 1, 1]]),
        cyclic(&[[3, 0, 0], [0, 3, 0], [0, 0, 3]]),
        cyclic(&[[3, 3, 0], [0, 3, 3], [3, 0, 3]]),
        cyclic(&[[3, 6, 0], [0, 3, 6], [6, 0, 3]]),
    ]
}

pub fn n3_showcase() -> ShowcaseReport {
    let n = 3u64;
    let generators = showcase_generators();
    let laurents: Vec<LaurentPolynomial> =
        generators.iter().map(RationalPolynomial::to_laurent).collect();

    let realizations = all_realizations(n);
    let generator_invariant: Vec<bool> = laurents
        .iter()
        .map(|f| realizations.iter().all(|(_, m)| &m.pullback(f) == f))
        .collect();

    let fixes = |m: &ScaledMonomialMap, f: &LaurentPolynomial| &m.pullback(f) == f;
    let xi = xi_map(n);
    let eta = eta_map(n);
    let xi_fixes_product = fixes(&xi, &laurents[0]);
    let eta_fixes_product = fixes(&eta, &laurents[0]);
    let xi_fixes_cubic = fixes(&xi, &laurents[1]);
    let eta_fixes_cubic = fixes(&eta, &laurents[1]);

    let max_degree = 9usize;
    let molien = molien_dimensions(n, max_degree).expect("n = 3 is within range");
    let gen_degrees = [3usize, 3, 6, 9];
    let mut degrees = Vec::new();
    let mut mismatched = Vec::new();
    for d in 0..=max_degree {
        let mut products: Vec<RationalPolynomial> = Vec::new();
        // all monomials g1^a g2^b g3^c g4^e of total degree d
        for a in 0..=d / gen_degrees[0] {
            for b in 0..=d / gen_degrees[1] {
                for c in 0..=d / gen_degrees[2] {
                    for e in 0..=d / gen_degrees[3] {
                        let total = a * gen_degrees[0]
                            + b * gen_degrees[1]
                            + c * gen_degrees[2]
                            + e * gen_degrees[3];
                        if total != d {
                            continue;
                        }
                        let p = &(&generators[0].pow(a as u32)
                            * &generators[1].pow(b as u32))
                            * &(&generators[2].pow(c as u32) * &generators[3].pow(e as u32));
                        products.push(p);
                    }
                }
            }
        }
        let span_dimension = polynomial_rank(&products);
        let molien_dimension = molien[d];
        if span_dimension != molien_dimension {
            mismatched.push(d);
        }
        degrees.push(ShowcaseDegree { degree: d, span_dimension, molien_dimension });
    }

    ShowcaseReport {
        generator_invariant,
        xi_fixes_cubic,
        eta_fixes_cubic,
        xi_fixes_product,
        eta_fixes_product,
        degrees,
        mismatched_degrees: mismatched,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn parse(src: &str, dim: usize) -> RationalPolynomial {
        let f = crate::laurent::parse_laurent(src, &VarNames::x(dim), None).unwrap();
        RationalPolynomial::from_laurent(&f).unwrap()
    }

    #[test]
    fn term_orders_compare_classically() {
        use std::cmp::Ordering::*;
        let gr = TermOrder::grevlex(3);
        // x1^2 > x0 x2 in grevlex, the other way in lex
        assert_eq!(gr.cmp(&[0, 2, 0], &[1, 0, 1]), Greater);
        let lex = TermOrder::lex(3);
        assert_eq!(lex.cmp(&[0, 2, 0], &[1, 0, 1]), Less);
        // degree dominates in grevlex
        assert_eq!(gr.cmp(&[0, 0, 3], &[1, 1, 0]), Greater);
        assert_eq!(gr.cmp(&[1, 1, 0], &[1, 1, 0]), Equal);
    }

    #[test]
    fn f_poly_matches_the_definition() {
        assert_eq!(f_poly(3, 1).unwrap(), parse("x0*x1^2 + x1*x2^2 + x2*x0^2", 3));
        assert_eq!(f_poly(3, 3).unwrap(), parse("x0^3 + x1^3 + x2^3", 3));
        // cyclic collision at n = 2: one term with coefficient 2
        let f = f_poly(2, 1).unwrap();
        assert_eq!(f, parse("2*x0*x1", 2));
        assert_eq!(f.len(), 1);
        assert_eq!(f.coefficient(&[1, 1]), q(2));
        assert_eq!(f_poly(3, 0).unwrap_err(), LinsysError::KOutOfRange { k: 0, max: 3 });
        assert_eq!(f_poly(3, 4).unwrap_err(), LinsysError::KOutOfRange { k: 4, max: 3 });
    }

    #[test]
    fn f_poly_m_extends_f_poly() {
        assert_eq!(f_poly_m(3, 2, 3).unwrap(), f_poly(3, 2).unwrap());
        assert_eq!(
            f_poly_m(3, 2, 4).unwrap(),
            parse("x0^2*x1^2 + x1^2*x2^2 + x2^2*x0^2", 3)
        );
        for (n, k, m) in [(3u64, 1u64, 5u64), (4, 3, 7), (2, 2, 2)] {
            assert_eq!(f_poly_m(n, k, m).unwrap().homogeneous_degree(), Some(m));
        }
        assert_eq!(f_poly_m(3, 1, 2).unwrap_err(), LinsysError::MOutOfRange { m: 2, n: 3 });
    }

    #[test]
    fn systems_have_the_advertised_members() {
        let l2 = system_l(2);
        assert_eq!(l2.len(), 3);
        assert_eq!(l2[0], parse("4*x0^2*x1^2", 2));
        assert_eq!(l2[1], parse("x0^4 + 2*x0^2*x1^2 + x1^4", 2));
        assert_eq!(l2[2], parse("x0^2*x1^2", 2));
        for n in 2..=4u64 {
            for f in system_l(n) {
                assert_eq!(f.homogeneous_degree(), Some(n * n));
            }
            for f in system_l_degree_n(n) {
                assert_eq!(f.homogeneous_degree(), Some(n));
            }
        }
    }

    #[test]
    fn normal_form_divides_out_leading_terms() {
        let order = TermOrder::grevlex(1);
        let x = RationalPolynomial::variable(1, 0);
        let basis = [x.clone()];
        assert!(normal_form(&x, &basis, &order).is_zero());
        let x_plus_1 = &x + &RationalPolynomial::one(1);
        assert_eq!(normal_form(&x_plus_1, &basis, &order), RationalPolynomial::one(1));
    }

    #[test]
    fn buchberger_on_known_ideals() {
        let order = TermOrder::grevlex(2);
        // single generator is its own reduced basis
        let f = parse("x0^2 - 1", 2);
        let gb = buchberger(&[f.clone()], &order);
        let basis = gb.basis().unwrap();
        assert_eq!(basis.polys(), &[f]);
        assert!(basis.is_reduced());

        // the classical pair: picks up x1^3
        let gens = [parse("x0*x1", 2), parse("x0^2 + x1^2", 2)];
        let gb = buchberger(&gens, &order);
        let basis = gb.basis().unwrap();
        let cube = parse("x1^3", 2);
        assert!(basis.polys().iter().any(|p| p == &cube), "{:?}", basis.polys());
        assert!(!basis.contains_one());

        // unit ideal collapses immediately
        let gb = buchberger(&[RationalPolynomial::one(2)], &order);
        let basis = gb.basis().unwrap();
        assert_eq!(basis.polys(), &[RationalPolynomial::one(2)]);
        assert!(basis.contains_one());
    }

    #[test]
    fn normal_form_is_idempotent_modulo_computed_bases() {
        let order = TermOrder::grevlex(3);
        let gens = [f_poly(3, 1).unwrap(), f_poly(3, 2).unwrap()];
        let basis = buchberger(&gens, &order);
        let basis = basis.basis().unwrap();
        let probe = parse("x0^4 + x1*x2 - 1/2", 3);
        let r1 = normal_form(&probe, basis.polys(), &order);
        let r2 = normal_form(&r1, basis.polys(), &order);
        assert_eq!(r1, r2);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive_not_wrong() {
        let order = TermOrder::grevlex(3);
        let gens = [f_poly(3, 1).unwrap(), f_poly(3, 2).unwrap(), f_poly(3, 3).unwrap()];
        match buchberger_with_budget(&gens, &order, 1) {
            GbOutcome::Inconclusive { pairs_processed, budget } => {
                assert_eq!(budget, 1);
                assert!(pairs_processed >= 1);
            }
            GbOutcome::Complete(_) => panic!("a one-pair budget cannot finish this ideal"),
        }
    }

    #[test]
    fn radical_membership_by_rabinowitsch() {
        let gens = [parse("x0*x1", 2), parse("x0^2 + x1^2", 2)];
        assert_eq!(
            variable_in_radical(&gens, 0, DEFAULT_PAIR_BUDGET),
            RadicalOutcome::InRadical
        );
        assert_eq!(
            variable_in_radical(&gens, 1, DEFAULT_PAIR_BUDGET),
            RadicalOutcome::InRadical
        );
        // zero locus {x0 = 1} u {x0 = -1} does not meet the origin only
        let hyperbola = [parse("x0^2 - 1", 2)];
        assert_eq!(
            variable_in_radical(&hyperbola, 0, DEFAULT_PAIR_BUDGET),
            RadicalOutcome::NotInRadical
        );
        let line = [RationalPolynomial::variable(2, 0)];
        assert_eq!(
            variable_in_radical(&line, 0, DEFAULT_PAIR_BUDGET),
            RadicalOutcome::InRadical
        );
    }

    #[test]
    fn basepoint_freeness_for_small_n() {
        for n in [2u64, 3] {
            let report = basepoint_free_certificate(n, DEFAULT_PAIR_BUDGET);
            assert!(report.all_in_radical(), "n = {n}: {:?}", report.outcomes);
            assert_eq!(report.outcomes.len(), n as usize);
        }
    }

    #[test]
    fn hyperplane_restriction_bookkeeping() {
        // f_3 at n = 3 restricted to x_0 = 0 keeps the two terms off x_0
        let f3 = f_poly(3, 3).unwrap();
        assert_eq!(f3.substitute_zero(0), parse("x1^3 + x2^3", 3));
        // the product member vanishes on every hyperplane
        let sys = system_l_degree_n(3);
        let restricted = restrict_system_to_hyperplane(&sys, 1);
        assert_eq!(restricted.len(), sys.len() - 1);
        // f_k^(m) loses exactly the two cyclic terms indexed i-1 and i
        for (n, k, m, i) in [(4u64, 2u64, 5u64, 1usize), (5, 3, 7, 0)] {
            let f = f_poly_m(n, k, m).unwrap();
            let r = f.substitute_zero(i);
            assert_eq!(r.len(), f.len() - 2);
        }
    }

    #[test]
    fn even_basepoints_exist_exactly_for_even_n_at_least_4() {
        // the witness is only returned after exact evaluation, so Some is
        // a machine-checked counterexample to basepoint-freeness
        for n in [4u64, 6, 8] {
            let point = even_basepoint_witness(n).expect("even n >= 4 has a basepoint");
            assert!(point.iter().any(|c| !c.is_zero()));
        }
        for n in [2u64, 3, 5, 7] {
            assert_eq!(even_basepoint_witness(n), None, "n = {n}");
        }
    }

    #[test]
    fn showcase_passes_and_matches_molien() {
        let report = n3_showcase();
        assert!(report.passed(), "{report:?}");
        let dims: Vec<usize> = report.degrees.iter().map(|d| d.span_dimension).collect();
        assert_eq!(dims, vec![1, 0, 0, 2, 0, 0, 4, 0, 0, 7]);
    }

    #[test]
    fn rank_counts_independent_polynomials() {
        let a = parse("x0 + x1", 2);
        let b = parse("x0 - x1", 2);
        let c = parse("2*x0", 2);
        assert_eq!(polynomial_rank(&[a.clone(), b.clone(), c.clone()]), 2);
        assert_eq!(polynomial_rank(&[a.clone(), a.clone()]), 1);
        assert_eq!(polynomial_rank(&[]), 0);
        assert_eq!(polynomial_rank(&[RationalPolynomial::zero(2)]), 0);
        assert_eq!(polynomial_rank(&[a, b, RationalPolynomial::variable(2, 0)]), 2);
    }

    #[test]
    fn laurent_bridge_round_trips() {
        let f = f_poly(4, 2).unwrap();
        let g = RationalPolynomial::from_laurent(&f.to_laurent()).unwrap();
        assert_eq!(f, g);
        // the heisenberg-side definition agrees term for term
        for n in 2..=6u64 {
            for k in 1..=n {
                let ours = f_poly(n, k).unwrap().to_laurent();
                assert_eq!(ours, crate::heisenberg::semi_invariant_f(n, k));
            }
        }
        let laurent = crate::laurent::parse_laurent(
            "x0^-1",
            &VarNames::x(1),
            None,
        )
        .unwrap();
        assert_eq!(
            RationalPolynomial::from_laurent(&laurent).unwrap_err(),
            LinsysError::NegativeExponent { var: 0 }
        );
    }
}
