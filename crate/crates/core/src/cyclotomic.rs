//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! An element is stored as its unique representative of degree below
//! `phi(N)`: the coefficient vector of the residue modulo the N-th
//! cyclotomic polynomial. Reduction happens on every construction, so
//! structural equality at a fixed order is semantic equality. Mixed-order
//! operands are promoted to the lcm order first.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycError {
    #[error("division by zero in Q(zeta_{order})")]
    DivisionByZero { order: u64 },
}

/// Euler's totient function.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "totient of 0 is undefined");
    let mut phi = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            phi -= phi / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Exact quotient of integer polynomials; the divisor must be monic and the
/// division must leave no remainder. Coefficients are lowest degree first.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd);
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quo = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = std::mem::replace(&mut rem[i], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate().take(dd) {
            rem[i - dd + j] -= &c * d;
        }
        quo[i - dd] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quo
}

/// Coefficients of the N-th cyclotomic polynomial, lowest degree first.
///
/// Computed by dividing `t^n - 1` by the cyclotomic polynomials of the
/// proper divisors of `n`; results are cached for the life of the process.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Vec<BigInt>>>> = OnceLock::new();
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = vec![BigInt::zero(); (n + 1) as usize];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            p = poly_div_exact(&p, &phi_d);
        }
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn rat(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

/// Reduce a coefficient vector modulo `Phi_n`, returning exactly `phi(n)`
/// coefficients (the canonical representative).
fn reduce_mod_phi(mut v: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if v.len() > deg {
        for i in (deg..v.len()).rev() {
            let c = std::mem::replace(&mut v[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            // subtract c * t^(i-deg) * Phi_n; the leading term cancels
            for (j, pj) in phi.iter().enumerate().take(deg) {
                let delta = &c * BigRational::from_integer(pj.clone());
                v[i - deg + j] -= delta;
            }
        }
    }
    v.resize(deg, BigRational::zero());
    v
}

/// An element of `Q(zeta_N)`, reduced modulo the N-th cyclotomic polynomial.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

/// Equality is semantic: operands carried at different orders are promoted
/// to the lcm order, where canonical reduction makes comparison structural.
impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclotomic::lift_pair(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Cyclotomic {
    /// The zero element, carried at order 1.
    pub fn zero() -> Self {
        Cyclotomic { order: 1, coeffs: vec![BigRational::zero()] }
    }

    /// The unit element, carried at order 1.
    pub fn one() -> Self {
        Cyclotomic { order: 1, coeffs: vec![BigRational::one()] }
    }

    /// Embed a rational number.
    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![q] }
    }

    /// Embed an integer.
    pub fn from_integer(i: i64) -> Self {
        Self::from_rational(rat(i))
    }

    /// `zeta_n^k` with `k` taken modulo `n`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Cyclotomic { order: n, coeffs: reduce_mod_phi(v, n) }
    }

    /// Build from explicit basis coefficients at the given order; the vector
    /// may have any length and is reduced.
    pub fn from_coeffs(order: u64, coeffs: Vec<BigRational>) -> Self {
        assert!(order >= 1);
        Cyclotomic { order, coeffs: reduce_mod_phi(coeffs, order) }
    }

    /// The order `N` of the ambient field `Q(zeta_N)` this value is carried in.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical coefficients over the power basis `1, zeta, ..., zeta^(phi(N)-1)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// If the value lies in `Q`, return it.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express the value in `Q(zeta_m)` where the current order divides `m`.
    pub fn promote(&self, m: u64) -> Self {
        assert!(m % self.order == 0, "promotion target must be a multiple of the order");
        if m == self.order {
            return self.clone();
        }
        let q = (m / self.order) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * q] = c.clone();
        }
        Cyclotomic { order: m, coeffs: reduce_mod_phi(v, m) }
    }

    /// Promote both operands into the lcm of their orders.
    fn lift_pair(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = a.order.lcm(&b.order);
        (a.promote(m), b.promote(m))
    }

    /// Multiplicative inverse; zero is a domain error.
    pub fn inv(&self) -> Result<Cyclotomic, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero { order: self.order });
        }
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let (g, s) = poly_half_ext_gcd(&self.coeffs, &phi);
        // Phi_N is irreducible, so gcd(f, Phi_N) is a nonzero constant.
        assert!(g.len() == 1 && !g[0].is_zero(), "gcd with the cyclotomic polynomial must be constant");
        let scale = g[0].recip();
        let coeffs = s.into_iter().map(|c| c * &scale).collect();
        Ok(Cyclotomic { order: self.order, coeffs: reduce_mod_phi(coeffs, self.order) })
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Cyclotomic, CycError> {
        let (base, mut k) = if e < 0 { (self.inv()?, (-e) as u64) } else { (self.clone(), e as u64) };
        let mut acc = Cyclotomic::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        Ok(acc)
    }

    /// If the value is a root of unity, return `(m, k)` with the value equal
    /// to `zeta_m^k`, `m` minimal and `gcd(k, m) = 1` (or `(1, 0)` for 1).
    ///
    /// The torsion units of `Q(zeta_N)` all lie in the group generated by
    /// `zeta_lcm(2,N)`, so a scan over that cyclic group is exhaustive.
    pub fn try_as_root_of_unity(&self) -> Option<(u64, u64)> {
        if self.is_zero() {
            return None;
        }
        let m = self.order.lcm(&2);
        let target = self.promote(m);
        let zeta = Cyclotomic::root_of_unity(m, 1);
        let mut pw = Cyclotomic::one().promote(m);
        for k in 0..m {
            if pw == target {
                let g = k.gcd(&m);
                return Some((m / g, k / g));
            }
            pw = &pw * &zeta;
        }
        None
    }

    /// Canonical text form: rationals verbatim, roots of unity as
    /// `z{m}^{k}`, all other values as coefficient sums over the power basis.
    pub fn render(&self) -> String {
        if let Some(q) = self.as_rational() {
            return render_rational(&q);
        }
        if let Some((m, k)) = self.try_as_root_of_unity() {
            return format!("z{m}^{k}");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_one = mag.is_one();
            if i == 0 {
                out.push_str(&render_rational(&mag));
            } else {
                if !coeff_one {
                    out.push_str(&render_rational(&mag));
                    out.push('*');
                }
                out.push_str(&format!("z{}^{}", self.order, i));
            }
        }
        out
    }
}

fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.order, self.render())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Half-extended gcd in `Q[t]`: returns `(g, s)` with `s*a = g (mod b)` and
/// `g` the gcd of `a` and `b`. Vectors are lowest degree first, untrimmed
/// zeros allowed.
fn poly_half_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0: Vec<BigRational> = trim(a.to_vec());
    let mut r1: Vec<BigRational> = trim(b.to_vec());
    let mut s0 = vec![BigRational::one()];
    let mut s1: Vec<BigRational> = vec![];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = trim(den.to_vec());
    assert!(!den.is_empty(), "polynomial division by zero");
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - den.len() + 1];
    let lead = den.last().unwrap().clone();
    for i in (den.len() - 1..rem.len()).rev() {
        let c = &rem[i] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            let delta = &c * d;
            rem[i - (den.len() - 1) + j] -= delta;
        }
        quo[i - (den.len() - 1)] = c;
    }
    (trim(quo), trim(rem))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigRational::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

impl std::ops::Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::lift_pair(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }
}

impl std::ops::Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::lift_pair(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }
}

impl std::ops::Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::lift_pair(self, rhs);
        let mut v = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        Cyclotomic { order: a.order, coeffs: reduce_mod_phi(v, a.order) }
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -c.clone();
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl std::ops::$tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// A root of unity in lowest terms: `zeta_order^exp` with `gcd(exp, order) = 1`
/// (the unit is `(1, 0)`). The compact form keeps map scalars and spectra
/// exact without touching cyclotomic coefficient vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u64,
    exp: u64,
}

impl RootOfUnity {
    pub fn one() -> Self {
        RootOfUnity { order: 1, exp: 0 }
    }

    /// `zeta_order^exp`, normalized to lowest terms.
    pub fn new(order: u64, exp: i64) -> Self {
        assert!(order >= 1);
        let e = exp.rem_euclid(order as i64) as u64;
        let g = e.gcd(&order);
        if e == 0 {
            RootOfUnity { order: 1, exp: 0 }
        } else {
            RootOfUnity { order: order / g, exp: e / g }
        }
    }

    /// Minimal multiplicative order.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent in lowest terms, `0 <= exp < order`.
    pub fn exp(&self) -> u64 {
        self.exp
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn inv(self) -> Self {
        Self::new(self.order, -(self.exp as i64))
    }

    pub fn pow(self, e: i64) -> Self {
        let k = (self.exp as i128 * e as i128).rem_euclid(self.order as i128) as i64;
        Self::new(self.order, k)
    }

    pub fn as_cyclotomic(self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.order, self.exp as i64)
    }

    pub fn try_from_cyclotomic(c: &Cyclotomic) -> Option<Self> {
        let (m, k) = c.try_as_root_of_unity()?;
        Some(RootOfUnity { order: m, exp: k })
    }

    /// All `l` distinct `l`-th roots of this value: `zeta_(l*m)^(k + j*m)`.
    pub fn nth_roots(self, l: u64) -> Vec<RootOfUnity> {
        assert!(l >= 1);
        (0..l)
            .map(|j| Self::new(l * self.order, (self.exp + j * self.order) as i64))
            .collect()
    }
}

impl std::ops::Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let m = self.order.lcm(&rhs.order);
        let e = (self.exp as i128 * (m / self.order) as i128
            + rhs.exp as i128 * (m / rhs.order) as i128)
            .rem_euclid(m as i128) as i64;
        RootOfUnity::new(m, e)
    }
}

impl fmt::Debug for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exp) {
            (1, _) => f.write_str("1"),
            (2, _) => f.write_str("-1"),
            (m, k) => write!(f, "z{m}^{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn totient_small_values() {
        let expected = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(euler_phi(i as u64 + 1), *e);
        }
    }

    #[test]
    fn cyclotomic_polynomials_match_known_tables() {
        let as_i64 = |n: u64| -> Vec<i64> {
            cyclotomic_polynomial(n).iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        // First index with a coefficient outside {-1, 0, 1}.
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105[7], BigInt::from(-2));
        assert_eq!(p105.len() as u64 - 1, euler_phi(105));
    }

    #[test]
    fn zeta3_satisfies_its_minimal_polynomial() {
        let z = Cyclotomic::root_of_unity(3, 1);
        let lhs = &(&z * &z) + &z;
        assert_eq!(lhs, Cyclotomic::from_integer(-1));
    }

    #[test]
    fn high_powers_wrap_around() {
        let z = Cyclotomic::root_of_unity(5, 1);
        assert_eq!(z.pow(5).unwrap(), Cyclotomic::one());
        assert_eq!(z.pow(7).unwrap(), Cyclotomic::root_of_unity(5, 2));
        assert_eq!(z.pow(-1).unwrap(), Cyclotomic::root_of_unity(5, 4));
    }

    #[test]
    fn mixed_order_sum_lands_in_lcm_field() {
        // zeta_4 + zeta_6 lives in Q(zeta_12); frozen from an independent
        // expansion over the power basis of zeta_12:
        // i = z12^3 and z6 = z12^2 = z12^4 - ... reduced form below.
        let a = Cyclotomic::root_of_unity(4, 1);
        let b = Cyclotomic::root_of_unity(6, 1);
        let s = &a + &b;
        assert_eq!(s.order(), 12);
        let t = &(&Cyclotomic::root_of_unity(12, 3) + &Cyclotomic::root_of_unity(12, 2)) - &s;
        assert!(t.is_zero());
    }

    #[test]
    fn inverse_is_exact() {
        let v = &Cyclotomic::root_of_unity(7, 3) + &Cyclotomic::from_rational(brat(2, 5));
        let inv = v.inv().unwrap();
        assert!((&v * &inv).is_one());
        assert_eq!(Cyclotomic::zero().inv(), Err(CycError::DivisionByZero { order: 1 }));
    }

    #[test]
    fn root_detection_scans_torsion_units() {
        // -zeta_9^5 = zeta_18^9 * zeta_18^10 = zeta_18^19 = zeta_18.
        let v = -&Cyclotomic::root_of_unity(9, 5);
        assert_eq!(v.try_as_root_of_unity(), Some((18, 1)));
        assert_eq!(Cyclotomic::one().try_as_root_of_unity(), Some((1, 0)));
        assert_eq!(Cyclotomic::from_integer(-1).try_as_root_of_unity(), Some((2, 1)));
        assert_eq!(Cyclotomic::from_integer(2).try_as_root_of_unity(), None);
        let not_a_root = &Cyclotomic::root_of_unity(5, 1) + &Cyclotomic::one();
        assert_eq!(not_a_root.try_as_root_of_unity(), None);
    }

    #[test]
    fn render_forms() {
        assert_eq!(Cyclotomic::from_rational(brat(-3, 2)).render(), "-3/2");
        assert_eq!(Cyclotomic::root_of_unity(8, 3).render(), "z8^3");
        let v = &Cyclotomic::root_of_unity(5, 1) + &Cyclotomic::from_rational(brat(1, 2));
        assert_eq!(v.render(), "1/2 + z5^1");
    }

    #[test]
    fn root_of_unity_normalizes() {
        assert_eq!(RootOfUnity::new(6, 2), RootOfUnity::new(3, 1));
        assert_eq!(RootOfUnity::new(6, -1), RootOfUnity::new(6, 5));
        assert_eq!(RootOfUnity::new(4, 0), RootOfUnity::one());
        let a = RootOfUnity::new(4, 1);
        let b = RootOfUnity::new(6, 1);
        assert_eq!(a * b, RootOfUnity::new(12, 5));
        assert!( (a * a.inv()).is_one());
        assert_eq!(a.pow(-3), RootOfUnity::new(4, 1));
    }

    #[test]
    fn nth_roots_enumerate_all_preimages() {
        let s = RootOfUnity::new(3, 1);
        let roots = s.nth_roots(3);
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert_eq!(r.pow(3), s);
        }
        let set: std::collections::BTreeSet<_> = roots.iter().collect();
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn roundtrip_with_cyclotomic() {
        let r = RootOfUnity::new(12, 7);
        assert_eq!(RootOfUnity::try_from_cyclotomic(&r.as_cyclotomic()), Some(r));
    }
}
