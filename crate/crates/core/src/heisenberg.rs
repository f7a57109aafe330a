//! The finite Heisenberg group of order `n^3` acting on `n` variables by
//! scaled monomial maps, with exact spectra, fixed points, Reynolds
//! averaging, and Molien dimension counts.
//!
//! The representation sends the diagonal generator to `x_i -> w^(-i) x_i`
//! and the cyclic generator to `x_i -> x_(i+1 mod n)`, where `w = zeta_n`.
//! Group elements are kept in the normal form `w^c xi^a eta^b`; the product
//! of two elements is computed by composing their realizations and reading
//! the normal form back off the composite map, so the group law is whatever
//! the representation does, not a transcribed formula. In this composition
//! order the commutator `xi eta xi^-1 eta^-1` realizes as `w^(+1)` times the
//! identity; see `commutator`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, RootOfUnity};
use crate::laurent::{ExponentVector, LaurentPolynomial, ScaledMonomialMap};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeisenbergError {
    #[error("map is not a scaled permutation of the variables")]
    NotScaledPermutation,
    #[error("map does not normalize to w^c xi^a eta^b: {0}")]
    NotInGroup(String),
    #[error("spectrum has a repeated eigenvalue, fixed points are not isolated")]
    RepeatedEigenvalue,
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

/// The map `x_j -> w^(-j) x_j` with `w = zeta_n`.
pub fn xi_map(n: u64) -> ScaledMonomialMap {
    let scalars: Vec<RootOfUnity> =
        (0..n).map(|j| RootOfUnity::new(n, -(j as i64))).collect();
    ScaledMonomialMap::diagonal(&scalars)
}

/// The cyclic shift `x_j -> x_(j+1 mod n)`.
pub fn eta_map(n: u64) -> ScaledMonomialMap {
    let d = n as usize;
    let perm: Vec<usize> = (0..d).map(|j| (j + 1) % d).collect();
    ScaledMonomialMap::scaled_permutation(&perm, &vec![RootOfUnity::one(); d])
}

/// The central scalar `x_j -> w^c x_j`.
pub fn omega_map(n: u64, c: i64) -> ScaledMonomialMap {
    ScaledMonomialMap::diagonal(&vec![RootOfUnity::new(n, c); n as usize])
}

/// The two generators of the representation, bundled for callers that walk
/// the group abstractly.
#[derive(Clone)]
pub struct GroupAction {
    pub n: u64,
    pub xi: ScaledMonomialMap,
    pub eta: ScaledMonomialMap,
}

pub fn schrodinger(n: u64) -> GroupAction {
    assert!(n >= 1);
    GroupAction { n, xi: xi_map(n), eta: eta_map(n) }
}

/// Normal form `w^c xi^a eta^b` with `0 <= c, a, b < n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeisenbergElement {
    n: u64,
    c: u64,
    a: u64,
    b: u64,
}

impl std::fmt::Debug for HeisenbergElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "w^{} xi^{} eta^{} (n={})", self.c, self.a, self.b, self.n)
    }
}

impl HeisenbergElement {
    pub fn new(n: u64, c: i64, a: i64, b: i64) -> Self {
        assert!(n >= 1);
        let m = n as i64;
        HeisenbergElement {
            n,
            c: c.rem_euclid(m) as u64,
            a: a.rem_euclid(m) as u64,
            b: b.rem_euclid(m) as u64,
        }
    }

    pub fn identity(n: u64) -> Self {
        Self::new(n, 0, 0, 0)
    }

    pub fn xi(n: u64) -> Self {
        Self::new(n, 0, 1, 0)
    }

    pub fn eta(n: u64) -> Self {
        Self::new(n, 0, 0, 1)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Exponents `(c, a, b)` of the normal form.
    pub fn exponents(&self) -> (u64, u64, u64) {
        (self.c, self.a, self.b)
    }

    pub fn is_identity(&self) -> bool {
        self.c == 0 && self.a == 0 && self.b == 0
    }

    /// Central elements are exactly the pure scalars `w^c`.
    pub fn is_central(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// The composite map `w^c xi^a eta^b` built literally from the
    /// generator realizations.
    pub fn realize(&self) -> ScaledMonomialMap {
        let xi_a = xi_map(self.n).pow(self.a as i64).expect("generator powers are invertible");
        let eta_b = eta_map(self.n).pow(self.b as i64).expect("generator powers are invertible");
        let scaled = ScaledMonomialMap::compose(&omega_map(self.n, self.c as i64), &xi_a);
        ScaledMonomialMap::compose(&scaled, &eta_b)
    }

    /// Read a normal form back off a realized map. The permutation must be
    /// a cyclic shift and the scalars an arithmetic progression of powers
    /// of `zeta_n`; anything else is rejected.
    pub fn decompose(m: &ScaledMonomialMap, n: u64) -> Result<Self, HeisenbergError> {
        assert!(n >= 1);
        assert_eq!(m.dim(), n as usize, "map dimension must equal n");
        let (perm, scalars) =
            m.as_scaled_permutation().ok_or(HeisenbergError::NotScaledPermutation)?;
        let d = n as usize;
        let b = perm[0] as u64;
        for (j, &p) in perm.iter().enumerate() {
            if p != (j + b as usize) % d {
                return Err(HeisenbergError::NotInGroup(
                    "permutation is not a cyclic shift".into(),
                ));
            }
        }
        // scalar of the image of x_j, written as w^(e_j)
        let mut e = Vec::with_capacity(d);
        for s in &scalars {
            if n % s.order() != 0 {
                return Err(HeisenbergError::NotInGroup(format!(
                    "scalar {s} is not an n-th root of unity"
                )));
            }
            e.push(s.exp() * (n / s.order()) % n);
        }
        let c = e[0];
        let a = if d >= 2 { (e[0] + n - e[1]) % n } else { 0 };
        for (j, &ej) in e.iter().enumerate() {
            let expect = (c + (n - a) * (j as u64 % n)) % n;
            if ej != expect {
                return Err(HeisenbergError::NotInGroup(
                    "scalars are not an arithmetic progression in the exponent".into(),
                ));
            }
        }
        Ok(HeisenbergElement { n, c, a, b })
    }

    /// Group law: compose the realizations, then renormalize. No cocycle
    /// formula is consulted.
    pub fn multiply(x: &Self, y: &Self) -> Self {
        assert_eq!(x.n, y.n, "elements live in different groups");
        let m = ScaledMonomialMap::compose(&x.realize(), &y.realize());
        Self::decompose(&m, x.n).expect("product of group realizations stays in the group")
    }

    pub fn inverse(&self) -> Self {
        let m = self.realize().inverse().expect("group realizations are invertible");
        Self::decompose(&m, self.n).expect("inverse of a group realization stays in the group")
    }

    pub fn pow(&self, k: i64) -> Self {
        let m = self.realize().pow(k).expect("group realizations are invertible");
        Self::decompose(&m, self.n).expect("powers of a group realization stay in the group")
    }

    /// Multiplicative order; divides `n^2`.
    pub fn order(&self) -> u64 {
        let mut acc = *self;
        for k in 1..=self.n * self.n {
            if acc.is_identity() {
                return k;
            }
            acc = Self::multiply(&acc, self);
        }
        unreachable!("element order must divide n^2")
    }
}

/// `xi eta xi^-1 eta^-1`, computed through the realization. With this
/// composition convention it is the central scalar `w^(+1)`.
pub fn commutator(n: u64) -> HeisenbergElement {
    let x = HeisenbergElement::xi(n);
    let h = HeisenbergElement::eta(n);
    let m = HeisenbergElement::multiply(&HeisenbergElement::multiply(&x, &h), &HeisenbergElement::multiply(&x.inverse(), &h.inverse()));
    m
}

/// Breadth-first closure of `{xi, eta}` under the group law, sorted by
/// normal form. The closure is exactly the `n^3` normal forms.
pub fn enumerate_group(n: u64) -> Vec<HeisenbergElement> {
    let gens = [HeisenbergElement::xi(n), HeisenbergElement::eta(n)];
    let mut seen = BTreeSet::new();
    let mut frontier = vec![HeisenbergElement::identity(n)];
    seen.insert(HeisenbergElement::identity(n));
    while let Some(e) = frontier.pop() {
        for g in &gens {
            let next = HeisenbergElement::multiply(&e, g);
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// Every element together with its realized map, in normal-form order.
pub fn all_realizations(n: u64) -> Vec<(HeisenbergElement, ScaledMonomialMap)> {
    enumerate_group(n).into_iter().map(|e| { let m = e.realize(); (e, m) }).collect()
}

/// Structure facts checked directly on the realization.
#[derive(Debug, Clone)]
pub struct GroupCheckReport {
    pub n: u64,
    pub group_order: usize,
    pub closure_is_all_normal_forms: bool,
    pub realize_injective: bool,
    pub homomorphism_pairs_checked: usize,
    pub homomorphism_ok: bool,
    pub generator_orders_ok: bool,
    pub commutator: HeisenbergElement,
    pub commutator_scalar: RootOfUnity,
    pub commutator_scalar_order_is_n: bool,
    pub center_order: usize,
    pub center_generated_by_commutator: bool,
    pub notes: Vec<String>,
}

impl GroupCheckReport {
    pub fn passed(&self) -> bool {
        self.group_order == (self.n * self.n * self.n) as usize
            && self.closure_is_all_normal_forms
            && self.realize_injective
            && self.homomorphism_ok
            && self.generator_orders_ok
            && self.commutator_scalar_order_is_n
            && self.center_order == self.n as usize
            && self.center_generated_by_commutator
    }
}

/// Enumerate the group and verify its advertised structure: order `n^3`,
/// center of order `n` generated by the commutator scalar, and that
/// normal-form multiplication agrees with map composition. Pairs are
/// checked exhaustively when `exhaustive` is set (quadratic in the group
/// order), otherwise on a deterministic stride sample.
pub fn group_check(n: u64, exhaustive: bool) -> GroupCheckReport {
    let elements = enumerate_group(n);
    let group_order = elements.len();
    let closure_is_all_normal_forms = {
        let mut all = BTreeSet::new();
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    all.insert(HeisenbergElement::new(n, c as i64, a as i64, b as i64));
                }
            }
        }
        elements.iter().copied().collect::<BTreeSet<_>>() == all
    };

    let realized: Vec<(HeisenbergElement, ScaledMonomialMap)> =
        elements.iter().map(|e| (*e, e.realize())).collect();
    let realize_injective = realized
        .iter()
        .all(|(e, m)| HeisenbergElement::decompose(m, n).as_ref() == Ok(e));

    let sample: Vec<&(HeisenbergElement, ScaledMonomialMap)> = if exhaustive {
        realized.iter().collect()
    } else {
        // deterministic stride sample, always including both generators
        let stride = (realized.len() / 12).max(1);
        let mut picked: Vec<&(HeisenbergElement, ScaledMonomialMap)> =
            realized.iter().step_by(stride).collect();
        for gen in [HeisenbergElement::xi(n), HeisenbergElement::eta(n)] {
            if let Some(pair) = realized.iter().find(|(e, _)| *e == gen) {
                picked.push(pair);
            }
        }
        picked
    };
    let mut homomorphism_pairs_checked = 0;
    let mut homomorphism_ok = true;
    for (x, mx) in &sample {
        for (y, my) in &sample {
            homomorphism_pairs_checked += 1;
            let lhs = HeisenbergElement::multiply(x, y).realize();
            let rhs = ScaledMonomialMap::compose(mx, my);
            if lhs != rhs {
                homomorphism_ok = false;
            }
        }
    }

    let generator_orders_ok = HeisenbergElement::xi(n).order() == n
        && HeisenbergElement::eta(n).order() == n
        && xi_map(n).pow(n as i64).unwrap() == ScaledMonomialMap::identity(n as usize)
        && eta_map(n).pow(n as i64).unwrap() == ScaledMonomialMap::identity(n as usize);

    let comm = commutator(n);
    let commutator_scalar = if n == 1 {
        RootOfUnity::one()
    } else {
        comm.realize().scalar(0)
    };
    let commutator_scalar_order_is_n = comm.is_central() && commutator_scalar.order() == n;

    let center: Vec<HeisenbergElement> = elements
        .iter()
        .copied()
        .filter(|z| {
            realized.iter().all(|(_, m)| {
                ScaledMonomialMap::compose(&z.realize(), m)
                    == ScaledMonomialMap::compose(m, &z.realize())
            })
        })
        .collect();
    let center_order = center.len();
    let center_generated_by_commutator = {
        let mut powers = BTreeSet::new();
        let mut acc = HeisenbergElement::identity(n);
        for _ in 0..n {
            powers.insert(acc);
            acc = HeisenbergElement::multiply(&acc, &comm);
        }
        center.iter().copied().collect::<BTreeSet<_>>() == powers
    };

    let notes = vec![format!(
        "commutator xi eta xi^-1 eta^-1 realizes as {} times the identity; \
         the opposite composition convention would give its inverse",
        commutator_scalar
    )];

    GroupCheckReport {
        n,
        group_order,
        closure_is_all_normal_forms,
        realize_injective,
        homomorphism_pairs_checked,
        homomorphism_ok,
        generator_orders_ok,
        commutator: comm,
        commutator_scalar,
        commutator_scalar_order_is_n,
        center_order,
        center_generated_by_commutator,
        notes,
    }
}

/// Cycles of the underlying permutation, each starting at its minimal
/// index and listed in traversal order, with the product of the scalars
/// along the cycle.
fn cycles_of(
    m: &ScaledMonomialMap,
) -> Result<Vec<(Vec<usize>, RootOfUnity)>, HeisenbergError> {
    let (perm, scalars) =
        m.as_scaled_permutation().ok_or(HeisenbergError::NotScaledPermutation)?;
    let d = m.dim();
    let mut seen = vec![false; d];
    let mut cycles = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut product = RootOfUnity::one();
        let mut j = start;
        loop {
            seen[j] = true;
            cycle.push(j);
            product = product * scalars[j];
            j = perm[j];
            if j == start {
                break;
            }
        }
        cycles.push((cycle, product));
    }
    Ok(cycles)
}

/// Exact eigenvalue multiset of a scaled permutation, sorted. Each cycle of
/// length `L` with scalar product `S` contributes the `L` roots of
/// `mu^L = S`.
pub fn spectrum(m: &ScaledMonomialMap) -> Result<Vec<RootOfUnity>, HeisenbergError> {
    let mut eigenvalues = Vec::with_capacity(m.dim());
    for (cycle, product) in cycles_of(m)? {
        eigenvalues.extend(product.nth_roots(cycle.len() as u64));
    }
    eigenvalues.sort();
    Ok(eigenvalues)
}

pub fn has_simple_spectrum(m: &ScaledMonomialMap) -> Result<bool, HeisenbergError> {
    let eig = spectrum(m)?;
    Ok(eig.windows(2).all(|w| w[0] != w[1]))
}

/// Eigenvalues with multiplicities, sorted by eigenvalue.
pub fn eigenvalue_multiplicities(
    m: &ScaledMonomialMap,
) -> Result<Vec<(RootOfUnity, usize)>, HeisenbergError> {
    let mut counts: BTreeMap<RootOfUnity, usize> = BTreeMap::new();
    for mu in spectrum(m)? {
        *counts.entry(mu).or_insert(0) += 1;
    }
    Ok(counts.into_iter().collect())
}

/// The isolated projective fixed points of a scaled permutation with
/// simple spectrum: one eigenvector per eigenvalue, supported on a single
/// cycle and normalized so its first nonzero coordinate is 1.
///
/// On the cycle `j_0 -> j_1 -> ...` (minimal index first) the eigenvector
/// for `mu` has `v[j_t] = mu^t / (s[j_0] ... s[j_(t-1)])`, which follows
/// from reading the point map `q -> (s_j q_perm[j])_j` along the cycle.
pub fn fixed_points_projective(
    m: &ScaledMonomialMap,
) -> Result<Vec<(RootOfUnity, Vec<Cyclotomic>)>, HeisenbergError> {
    if !has_simple_spectrum(m)? {
        return Err(HeisenbergError::RepeatedEigenvalue);
    }
    let (_, scalars) = m.as_scaled_permutation().expect("checked by spectrum");
    let d = m.dim();
    let mut points = Vec::with_capacity(d);
    for (cycle, product) in cycles_of(m)? {
        for mu in product.nth_roots(cycle.len() as u64) {
            let mut v = vec![Cyclotomic::zero(); d];
            let mut coord = RootOfUnity::one();
            for (t, &j) in cycle.iter().enumerate() {
                v[j] = coord.as_cyclotomic();
                if t + 1 < cycle.len() {
                    coord = coord * mu * scalars[j].inv();
                }
            }
            points.push((mu, v));
        }
    }
    points.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(points)
}

/// Scale a projective point so its first nonzero coordinate is 1.
pub fn normalize_projective(point: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let Some(lead) = point.iter().find(|c| !c.is_zero()) else {
        return point.to_vec();
    };
    let inv = lead.inv().expect("nonzero cyclotomic is invertible");
    point.iter().map(|c| c * &inv).collect()
}

fn point_key(point: &[Cyclotomic]) -> String {
    point.iter().map(Cyclotomic::render).collect::<Vec<_>>().join("|")
}

/// Orbit of points with a common stabilizer order under the projective
/// `(Z/n)^2` action.
#[derive(Debug, Clone)]
pub struct OrbitClass {
    pub size: usize,
    pub stabilizer_order: usize,
    pub points: Vec<Vec<Cyclotomic>>,
}

/// Isolated points of projective `(n-1)`-space with nontrivial stabilizer
/// under the induced `(Z/n)^2` action, grouped into orbits.
#[derive(Debug, Clone)]
pub struct StabilizerReport {
    pub n: u64,
    pub orbits: Vec<OrbitClass>,
    pub total_points: usize,
    /// Classes `(a, b)` whose map has repeated eigenvalues; their fixed
    /// loci are positive-dimensional, so they contribute no isolated
    /// points. Nonempty only for composite `n`.
    pub nonsimple_classes: Vec<(u64, u64)>,
}

/// Collect every isolated fixed point of the nonidentity classes, compute
/// stabilizer orders, and partition into orbits. Costs grow like `n^4`
/// point comparisons, hence the small-`n` guard.
pub fn stabilizer_orbit_report(n: u64) -> Result<StabilizerReport, HeisenbergError> {
    if n > 5 {
        return Err(HeisenbergError::ResourceLimit(format!(
            "orbit report is exhaustive and capped at n <= 5, got n = {n}"
        )));
    }
    // the center acts trivially on projective space, so the effective
    // group is (Z/n)^2 through the classes xi^a eta^b
    let mut classes = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != 0 || b != 0 {
                classes.push(((a, b), HeisenbergElement::new(n, 0, a as i64, b as i64).realize()));
            }
        }
    }

    let mut points: BTreeMap<String, Vec<Cyclotomic>> = BTreeMap::new();
    let mut nonsimple_classes = Vec::new();
    for ((a, b), m) in &classes {
        if has_simple_spectrum(m)? {
            for (_, v) in fixed_points_projective(m)? {
                let v = normalize_projective(&v);
                points.insert(point_key(&v), v);
            }
        } else {
            nonsimple_classes.push((*a, *b));
        }
    }

    let stabilizer_order = |p: &[Cyclotomic]| -> usize {
        1 + classes
            .iter()
            .filter(|(_, m)| {
                let image = m.apply_point(p).expect("projective points have no pole");
                normalize_projective(&image) == p
            })
            .count()
    };

    let mut remaining: BTreeMap<String, Vec<Cyclotomic>> = points
        .into_iter()
        .filter(|(_, p)| stabilizer_order(p) > 1)
        .collect();
    let total_points = remaining.len();

    let mut orbits = Vec::new();
    while let Some((key, rep)) = remaining.iter().next().map(|(k, p)| (k.clone(), p.clone())) {
        remaining.remove(&key);
        let mut orbit: BTreeMap<String, Vec<Cyclotomic>> = BTreeMap::new();
        orbit.insert(key, rep.clone());
        let mut frontier = vec![rep.clone()];
        while let Some(p) = frontier.pop() {
            for (_, m) in &classes {
                let image =
                    normalize_projective(&m.apply_point(&p).expect("projective points have no pole"));
                let k = point_key(&image);
                if !orbit.contains_key(&k) {
                    remaining.remove(&k);
                    orbit.insert(k, image.clone());
                    frontier.push(image);
                }
            }
        }
        let stab = stabilizer_order(&rep);
        debug_assert!(orbit.values().all(|p| stabilizer_order(p) == stab));
        orbits.push(OrbitClass {
            size: orbit.len(),
            stabilizer_order: stab,
            points: orbit.into_values().collect(),
        });
    }
    orbits.sort_by_key(|o| (o.size, point_key(&o.points[0])));

    Ok(StabilizerReport { n, orbits, total_points, nonsimple_classes })
}

/// Average the pullbacks of `f` over the whole group: the exact projection
/// onto the invariant subspace.
pub fn reynolds(f: &LaurentPolynomial, realizations: &[(HeisenbergElement, ScaledMonomialMap)]) -> LaurentPolynomial {
    let mut sum = LaurentPolynomial::zero(f.dim());
    for (_, m) in realizations {
        sum = &sum + &m.pullback(f);
    }
    let scale = Cyclotomic::from_rational(BigRational::new(
        1.into(),
        (realizations.len() as i64).into(),
    ));
    sum.scale(&scale)
}

fn monomials_of_degree(dim: usize, degree: i64) -> Vec<ExponentVector> {
    fn rec(dim: usize, degree: i64, prefix: &mut Vec<i64>, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == dim {
            prefix.push(degree);
            out.push(ExponentVector::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=degree {
            prefix.push(e);
            rec(dim, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, degree, &mut Vec::new(), &mut out);
    out
}

/// Rank of a set of Laurent polynomials over the cyclotomic field, by
/// sparse row echelon on their coefficient vectors.
fn polynomial_rank(rows: Vec<LaurentPolynomial>) -> usize {
    let mut pivots: Vec<(ExponentVector, BTreeMap<ExponentVector, Cyclotomic>)> = Vec::new();
    for row in rows {
        let mut r: BTreeMap<ExponentVector, Cyclotomic> =
            row.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        loop {
            let Some((lead, coeff)) = r.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))
            else {
                break;
            };
            if let Some((_, pivot)) = pivots.iter().find(|(p, _)| *p == lead) {
                // r -= coeff * pivot (pivot is monic at lead)
                let pivot = pivot.clone();
                for (e, c) in pivot {
                    let cur = r.remove(&e).unwrap_or_else(Cyclotomic::zero);
                    let next = &cur - &(&c * &coeff);
                    if !next.is_zero() {
                        r.insert(e, next);
                    }
                }
            } else {
                let inv = coeff.inv().expect("leading coefficient is nonzero");
                let monic: BTreeMap<ExponentVector, Cyclotomic> =
                    r.iter().map(|(e, c)| (e.clone(), c * &inv)).collect();
                pivots.push((lead, monic));
                break;
            }
        }
    }
    pivots.len()
}

/// Dimension of the degree-`d` invariants by explicit projection: apply
/// the Reynolds operator to every degree-`d` monomial and take the rank of
/// the images. Exact and slow; serves as the oracle for `molien_dimensions`.
pub fn invariant_dimension_bruteforce(n: u64, degree: i64) -> usize {
    let realizations = all_realizations(n);
    let rows: Vec<LaurentPolynomial> = monomials_of_degree(n as usize, degree)
        .into_iter()
        .map(|e| {
            reynolds(
                &LaurentPolynomial::monomial(n as usize, e.as_slice(), Cyclotomic::one()),
                &realizations,
            )
        })
        .filter(|f| !f.is_zero())
        .collect();
    polynomial_rank(rows)
}

/// Invariant dimensions in degrees `0..=max_degree` from the Molien series
/// `(1/|G|) sum_g 1/det(1 - t g)`, with each determinant factored along
/// the cycles of `g` as `prod (1 - S_c t^(L_c))`.
pub fn molien_dimensions(n: u64, max_degree: usize) -> Result<Vec<usize>, HeisenbergError> {
    let realizations = all_realizations(n);
    let mut total = vec![Cyclotomic::zero(); max_degree + 1];
    for (_, m) in &realizations {
        // expand prod_c 1/(1 - S_c t^L_c) as truncated geometric series
        let mut series = vec![Cyclotomic::zero(); max_degree + 1];
        series[0] = Cyclotomic::one();
        for (cycle, product) in cycles_of(m)? {
            let step = cycle.len();
            let mut next = vec![Cyclotomic::zero(); max_degree + 1];
            for d in 0..=max_degree {
                if series[d].is_zero() {
                    continue;
                }
                let mut power = Cyclotomic::one();
                let mut offset = 0usize;
                while d + offset <= max_degree {
                    next[d + offset] = &next[d + offset] + &(&series[d] * &power);
                    offset += step;
                    power = &power * &product.as_cyclotomic();
                }
            }
            series = next;
        }
        for (t, s) in total.iter_mut().zip(series) {
            *t = &*t + &s;
        }
    }
    let order = BigRational::new((realizations.len() as i64).into(), 1.into());
    let mut dims = Vec::with_capacity(max_degree + 1);
    for coeff in total {
        let q = coeff
            .as_rational()
            .expect("Molien coefficients are rational after summing over the group")
            / &order;
        assert!(q.is_integer() && q >= BigRational::zero(), "Molien coefficient must be a nonnegative integer");
        dims.push(q.to_integer().to_usize().expect("dimension fits in usize"));
    }
    Ok(dims)
}

/// If `f` is a simultaneous semi-invariant, the pair of characters
/// `(k_xi, k_eta)` with `xi . f = w^(k_xi) f` and `eta . f = w^(k_eta) f`.
pub fn character_of_semiinvariant(f: &LaurentPolynomial, n: u64) -> Option<(u64, u64)> {
    let k_xi = character_under(f, &xi_map(n), n)?;
    let k_eta = character_under(f, &eta_map(n), n)?;
    Some((k_xi, k_eta))
}

fn character_under(f: &LaurentPolynomial, m: &ScaledMonomialMap, n: u64) -> Option<u64> {
    let (e, c) = f.terms().next()?;
    let image = m.pullback(f);
    let ratio = &image.coefficient(e) * &c.inv().ok()?;
    if ratio.is_zero() || image != f.scale(&ratio) {
        return None;
    }
    let root = RootOfUnity::try_from_cyclotomic(&ratio)?;
    if n % root.order() != 0 {
        return None;
    }
    Some(root.exp() * (n / root.order()) % n)
}

/// The degree-`n` semi-invariant `f_k = sum_i x_i^k x_(i+1)^(n-k)` for
/// `1 <= k <= n`. Terms can collide (at `n = 2`, `k = 1` the two summands
/// are both `x_0 x_1`); the sum is taken literally.
pub fn semi_invariant_f(n: u64, k: u64) -> LaurentPolynomial {
    assert!(n >= 1 && k >= 1 && k <= n);
    let d = n as usize;
    let mut f = LaurentPolynomial::zero(d);
    for i in 0..d {
        let mut e = vec![0i64; d];
        e[i] += k as i64;
        e[(i + 1) % d] += (n - k) as i64;
        f.insert_term(ExponentVector::new(e), Cyclotomic::one());
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle for the group law, derived once from the
    /// realization by hand: with maps composed left-to-right as point
    /// maps, `(c1,a1,b1) * (c2,a2,b2) = (c1+c2-a2*b1, a1+a2, b1+b2)`.
    fn cocycle_multiply(x: (u64, u64, u64), y: (u64, u64, u64), n: u64) -> (u64, u64, u64) {
        let m = n as i64;
        let (c1, a1, b1) = (x.0 as i64, x.1 as i64, x.2 as i64);
        let (c2, a2, b2) = (y.0 as i64, y.1 as i64, y.2 as i64);
        (
            (c1 + c2 - a2 * b1).rem_euclid(m) as u64,
            (a1 + a2).rem_euclid(m) as u64,
            (b1 + b2).rem_euclid(m) as u64,
        )
    }

    #[test]
    fn multiply_matches_cocycle_oracle() {
        for n in 2..=4u64 {
            let elements = enumerate_group(n);
            for x in &elements {
                for y in &elements {
                    let got = HeisenbergElement::multiply(x, y).exponents();
                    let want = cocycle_multiply(x.exponents(), y.exponents(), n);
                    assert_eq!(got, want, "n={n} x={x:?} y={y:?}");
                }
            }
        }
        // spot checks at a larger composite order
        let n = 8;
        let x = HeisenbergElement::new(n, 3, 5, 2);
        let y = HeisenbergElement::new(n, 1, 7, 6);
        assert_eq!(
            HeisenbergElement::multiply(&x, &y).exponents(),
            cocycle_multiply(x.exponents(), y.exponents(), n)
        );
    }

    #[test]
    fn commutator_is_omega_plus_one() {
        for n in 1..=6u64 {
            let comm = commutator(n);
            assert_eq!(comm.exponents(), (1 % n, 0, 0), "n={n}");
            assert!(comm.is_central());
        }
        // the commutator scalar generates exactly the n-th roots of unity
        assert_eq!(commutator(5).realize().scalar(0), RootOfUnity::new(5, 1));
    }

    #[test]
    fn realize_closed_form() {
        // w^c xi^a eta^b sends x_j to w^(c - j a) x_(j+b)
        for n in [3u64, 4] {
            for e in enumerate_group(n) {
                let (c, a, b) = e.exponents();
                let d = n as usize;
                let perm: Vec<usize> = (0..d).map(|j| (j + b as usize) % d).collect();
                let scalars: Vec<RootOfUnity> = (0..d)
                    .map(|j| RootOfUnity::new(n, c as i64 - (j as i64) * a as i64))
                    .collect();
                assert_eq!(e.realize(), ScaledMonomialMap::scaled_permutation(&perm, &scalars));
            }
        }
    }

    #[test]
    fn decompose_round_trips_and_rejects_outsiders() {
        for n in [1u64, 2, 3, 4] {
            for e in enumerate_group(n) {
                assert_eq!(HeisenbergElement::decompose(&e.realize(), n), Ok(e));
            }
        }
        // a non-cyclic permutation is rejected
        let swap = ScaledMonomialMap::scaled_permutation(&[1, 0, 2], &[RootOfUnity::one(); 3]);
        assert!(matches!(
            HeisenbergElement::decompose(&swap, 3),
            Err(HeisenbergError::NotInGroup(_))
        ));
        // a scalar outside mu_n is rejected
        let off = ScaledMonomialMap::diagonal(&[
            RootOfUnity::new(9, 1),
            RootOfUnity::one(),
            RootOfUnity::one(),
        ]);
        assert!(matches!(
            HeisenbergElement::decompose(&off, 3),
            Err(HeisenbergError::NotInGroup(_))
        ));
        // a genuinely monomial but non-permutation map is not in the image
        let squares = ScaledMonomialMap::from_images(&[
            (vec![2, 0, 0], RootOfUnity::one()),
            (vec![0, 1, 0], RootOfUnity::one()),
            (vec![0, 0, 1], RootOfUnity::one()),
        ]);
        assert_eq!(
            HeisenbergElement::decompose(&squares, 3),
            Err(HeisenbergError::NotScaledPermutation)
        );
    }

    #[test]
    fn inverse_and_pow_agree_with_multiplication() {
        let n = 4;
        for e in enumerate_group(n) {
            let inv = e.inverse();
            assert!(HeisenbergElement::multiply(&e, &inv).is_identity());
            assert!(HeisenbergElement::multiply(&inv, &e).is_identity());
            // pow by repeated multiplication
            let mut acc = HeisenbergElement::identity(n);
            for k in 0..=5 {
                assert_eq!(e.pow(k), acc, "e={e:?} k={k}");
                acc = HeisenbergElement::multiply(&acc, &e);
            }
            assert_eq!(e.pow(-1), inv);
        }
    }

    #[test]
    fn element_orders() {
        assert_eq!(HeisenbergElement::xi(3).order(), 3);
        assert_eq!(HeisenbergElement::eta(3).order(), 3);
        assert_eq!(commutator(3).order(), 3);
        // xi.eta at n=2 squares to the central -1, so it has order 4
        let s = HeisenbergElement::multiply(&HeisenbergElement::xi(2), &HeisenbergElement::eta(2));
        assert_eq!(s.order(), 4);
        let t = HeisenbergElement::multiply(&HeisenbergElement::xi(3), &HeisenbergElement::eta(3));
        assert_eq!(t.order(), 3);
    }

    #[test]
    fn enumeration_is_the_full_normal_form_set() {
        for n in 1..=5u64 {
            let elements = enumerate_group(n);
            assert_eq!(elements.len(), (n * n * n) as usize);
        }
    }

    #[test]
    fn group_check_passes_small_orders() {
        for n in 1..=4u64 {
            let report = group_check(n, true);
            assert!(report.passed(), "n={n}: {report:?}");
            assert_eq!(
                report.homomorphism_pairs_checked,
                (n * n * n * n * n * n) as usize
            );
        }
        let report = group_check(5, false);
        assert!(report.passed());
        assert!(report.homomorphism_pairs_checked < 125 * 125);
    }

    #[test]
    fn eta_spectrum_and_fixed_points_match_the_cube_roots() {
        let m = eta_map(3);
        let eig = spectrum(&m).unwrap();
        let mut expect: Vec<RootOfUnity> = RootOfUnity::one().nth_roots(3);
        expect.sort();
        assert_eq!(eig, expect);
        // fixed points are (1 : t : t^2) for each cube root t
        let points = fixed_points_projective(&m).unwrap();
        assert_eq!(points.len(), 3);
        for (mu, v) in points {
            assert_eq!(v[0], Cyclotomic::one());
            assert_eq!(v[1], mu.as_cyclotomic());
            assert_eq!(v[2], mu.pow(2).as_cyclotomic());
        }
    }

    #[test]
    fn fixed_points_are_fixed() {
        for n in [2u64, 3, 5] {
            for a in 0..n {
                for b in 0..n {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let m = HeisenbergElement::new(n, 0, a as i64, b as i64).realize();
                    let points = fixed_points_projective(&m).unwrap();
                    assert_eq!(points.len(), n as usize);
                    // pairwise distinct after normalization
                    let keys: BTreeSet<String> = points
                        .iter()
                        .map(|(_, v)| point_key(&normalize_projective(v)))
                        .collect();
                    assert_eq!(keys.len(), n as usize);
                    for (_, v) in points {
                        let image = m.apply_point(&v).unwrap();
                        assert_eq!(
                            normalize_projective(&image),
                            normalize_projective(&v)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn simple_spectrum_iff_class_is_primitive() {
        // the noncentral element w^c xi^a eta^b has n distinct eigenvalues
        // exactly when gcd(a, b, n) = 1; at composite n the classes with
        // gcd > 1 are honest counterexamples to "every noncentral element"
        for n in 2..=6u64 {
            for e in enumerate_group(n) {
                let (_, a, b) = e.exponents();
                if e.is_central() {
                    continue;
                }
                let g = gcd3(a, b, n);
                let simple = has_simple_spectrum(&e.realize()).unwrap();
                assert_eq!(simple, g == 1, "n={n} e={e:?}");
            }
        }
        // the smallest counterexample, recorded explicitly: xi^2 at n=4 is
        // noncentral with spectrum {1, 1, -1, -1}
        let m = HeisenbergElement::new(4, 0, 2, 0).realize();
        let mult = eigenvalue_multiplicities(&m).unwrap();
        assert_eq!(
            mult,
            vec![(RootOfUnity::one(), 2), (RootOfUnity::new(2, 1), 2)]
        );
        assert_eq!(
            fixed_points_projective(&m),
            Err(HeisenbergError::RepeatedEigenvalue)
        );
    }

    fn gcd3(a: u64, b: u64, n: u64) -> u64 {
        use num_integer::Integer;
        a.gcd(&b).gcd(&n)
    }

    #[test]
    fn eigenvalue_multiplicity_stays_small_enough() {
        // supports the codimension >= 2 fixed-locus argument for n >= 3:
        // no noncentral element has an eigenvalue of multiplicity > n/2
        for n in 3..=8u64 {
            for e in enumerate_group(n) {
                if e.is_central() {
                    continue;
                }
                let worst = eigenvalue_multiplicities(&e.realize())
                    .unwrap()
                    .into_iter()
                    .map(|(_, k)| k)
                    .max()
                    .unwrap();
                assert!(worst as u64 <= n / 2, "n={n} e={e:?} multiplicity {worst}");
            }
        }
    }

    #[test]
    fn stabilizer_orbits_n3() {
        let report = stabilizer_orbit_report(3).unwrap();
        assert_eq!(report.total_points, 12);
        assert_eq!(report.orbits.len(), 4);
        for orbit in &report.orbits {
            assert_eq!(orbit.size, 3);
            assert_eq!(orbit.stabilizer_order, 3);
        }
        assert!(report.nonsimple_classes.is_empty());
    }

    #[test]
    fn stabilizer_orbits_n2() {
        // the three projective involutions have two fixed points each
        let report = stabilizer_orbit_report(2).unwrap();
        assert_eq!(report.total_points, 6);
        assert_eq!(report.orbits.len(), 3);
        for orbit in &report.orbits {
            assert_eq!(orbit.size, 2);
            assert_eq!(orbit.stabilizer_order, 2);
        }
    }

    #[test]
    fn stabilizer_report_flags_nonsimple_classes_at_composite_n() {
        let report = stabilizer_orbit_report(4).unwrap();
        assert_eq!(report.nonsimple_classes, vec![(0, 2), (2, 0), (2, 2)]);
        assert!(stabilizer_orbit_report(6).is_err());
    }

    #[test]
    fn reynolds_projects_onto_invariants() {
        let n = 3u64;
        let realizations = all_realizations(n);
        let vars = crate::laurent::VarNames::x(3);
        let product = crate::laurent::parse_laurent("x0*x1*x2", &vars, None).unwrap();
        assert_eq!(reynolds(&product, &realizations), product);
        // a non-invariant monomial with nontrivial xi-character averages to zero
        let skew = crate::laurent::parse_laurent("x0^2*x1", &vars, None).unwrap();
        assert!(reynolds(&skew, &realizations).is_zero());
        // idempotence and invariance of the image
        let f = crate::laurent::parse_laurent("x0^3 + 2*x0*x1*x2", &vars, None).unwrap();
        let p = reynolds(&f, &realizations);
        assert_eq!(reynolds(&p, &realizations), p);
        for (_, m) in &realizations {
            assert_eq!(m.pullback(&p), p);
        }
    }

    #[test]
    fn molien_small_table_and_vanishing_off_multiples() {
        assert_eq!(molien_dimensions(3, 3).unwrap(), vec![1, 0, 0, 2]);
        for (n, maxd) in [(2u64, 8usize), (3, 9), (4, 8)] {
            let dims = molien_dimensions(n, maxd).unwrap();
            for (d, &dim) in dims.iter().enumerate() {
                if d as u64 % n != 0 {
                    assert_eq!(dim, 0, "n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn molien_agrees_with_bruteforce_projection() {
        for (n, maxd) in [(2u64, 6i64), (3, 6)] {
            let dims = molien_dimensions(n, maxd as usize).unwrap();
            for d in 0..=maxd {
                assert_eq!(
                    dims[d as usize],
                    invariant_dimension_bruteforce(n, d),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn f_k_characters() {
        for n in 2..=6u64 {
            for k in 1..=n {
                let f = semi_invariant_f(n, k);
                assert_eq!(f.homogeneous_degree(), Some(n as i64));
                assert_eq!(
                    character_of_semiinvariant(&f, n),
                    Some((k % n, 0)),
                    "n={n} k={k}"
                );
            }
        }
        // n = 2, k = 1 collides into a single doubled term
        let f = semi_invariant_f(2, 1);
        assert_eq!(f.num_terms(), 1);
        assert_eq!(
            f.coefficient(&ExponentVector::new(vec![1, 1])),
            Cyclotomic::from_integer(2.into())
        );
    }

    #[test]
    fn non_semiinvariants_have_no_character() {
        let vars = crate::laurent::VarNames::x(3);
        let f = crate::laurent::parse_laurent("x0 + x1^2", &vars, None).unwrap();
        assert_eq!(character_of_semiinvariant(&f, 3), None);
        // x0^3 is a xi-eigenvector but not an eta-eigenvector
        let g = crate::laurent::parse_laurent("x0^3", &vars, None).unwrap();
        assert_eq!(character_under(&g, &xi_map(3), 3), Some(0));
        assert_eq!(character_under(&g, &eta_map(3), 3), None);
        assert_eq!(character_of_semiinvariant(&g, 3), None);
    }

    #[test]
    fn schrodinger_action_matches_element_realizations() {
        let action = schrodinger(4);
        assert_eq!(action.xi, HeisenbergElement::xi(4).realize());
        assert_eq!(action.eta, HeisenbergElement::eta(4).realize());
    }
}
