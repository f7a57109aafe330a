//! Integer matrices and lattices of exponent vectors.
//!
//! The canonical shape for a lattice basis is the row-style lower Hermite
//! normal form: pivots are the last nonzero entry of each row, pivot columns
//! strictly increase downward, pivots are positive, entries below a pivot
//! are reduced into `[0, pivot)`, and zero rows sit at the bottom. Two
//! lattices are equal exactly when their canonical bases are structurally
//! equal, so no further normalization is ever needed at comparison sites.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("vector or basis row is not contained in the target lattice")]
    NotASublattice,
    #[error("sublattice has strictly lower rank, the index is infinite")]
    InfiniteIndex,
    #[error("matrix is singular")]
    Singular,
}

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|v| v.iter().map(|&x| BigInt::from(x))).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(i64::try_from(self.at(i, j)).ok()?);
            }
            out.push(row);
        }
        Some(out)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j) + a * rhs.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(dst, j) + q * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.at(i, dst) + q * self.at(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn reverse_cols(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, self.cols - 1 - j, self.at(i, j).clone());
            }
        }
        out
    }

    fn permute_rows(&self, perm: &[usize]) -> IntMatrix {
        assert_eq!(perm.len(), self.rows);
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for (dst, &src) in perm.iter().enumerate() {
            for j in 0..self.cols {
                out.set(dst, j, self.at(src, j).clone());
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Upper (classical) HNF with first-nonzero pivots; returns `(H, U)` with
/// `H = U * A` and `U` unimodular.
fn hnf_upper(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut pivot_row = 0;
    for col in 0..a.cols {
        if pivot_row == a.rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..a.rows {
                if !h.at(r, col).is_zero()
                    && best
                        .map(|b| h.at(r, col).magnitude() < h.at(b, col).magnitude())
                        .unwrap_or(true)
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pivot_row, b);
            u.swap_rows(pivot_row, b);
            let mut leftover = false;
            for r in pivot_row + 1..a.rows {
                if h.at(r, col).is_zero() {
                    continue;
                }
                let q = -h.at(r, col).div_floor(h.at(pivot_row, col));
                h.add_row_multiple(r, pivot_row, &q);
                u.add_row_multiple(r, pivot_row, &q);
                leftover |= !h.at(r, col).is_zero();
            }
            if !leftover {
                if h.at(pivot_row, col).is_negative() {
                    h.negate_row(pivot_row);
                    u.negate_row(pivot_row);
                }
                for r in 0..pivot_row {
                    let q = -h.at(r, col).div_floor(h.at(pivot_row, col));
                    h.add_row_multiple(r, pivot_row, &q);
                    u.add_row_multiple(r, pivot_row, &q);
                }
                pivot_row += 1;
                break;
            }
        }
    }
    (h, u)
}

/// Lower Hermite normal form, the canonical basis shape: returns `(H, U)`
/// with `H = U * A`, `U` unimodular, pivots at the last nonzero entry of
/// each row with strictly increasing pivot columns, positive pivots,
/// entries below each pivot in `[0, pivot)`, zero rows at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h1, u1) = hnf_upper(&a.reverse_cols());
    let rank = (0..h1.rows).take_while(|&i| !h1.row_is_zero(i)).count();
    let h2 = h1.reverse_cols();
    let perm: Vec<usize> = (0..rank).rev().chain(rank..a.rows).collect();
    (h2.permute_rows(&perm), u1.permute_rows(&perm))
}

/// The nonzero rows of the lower HNF.
pub fn hnf_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(a);
    let rank = (0..h.rows).take_while(|&i| !h.row_is_zero(i)).count();
    let rows: Vec<Vec<BigInt>> = (0..rank).map(|i| h.row(i).to_vec()).collect();
    IntMatrix::from_bigint_rows(rows)
}

/// Smith normal form: returns `(D, U, V)` with `D = U * A * V`, `U` and `V`
/// unimodular, `D` diagonal with nonnegative entries and `D[i][i]` dividing
/// `D[i+1][i+1]`.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let steps = a.rows.min(a.cols);
    for t in 0..steps {
        'pivot: loop {
            // smallest nonzero entry in the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if !d.at(i, j).is_zero()
                        && best
                            .map(|(bi, bj)| d.at(i, j).magnitude() < d.at(bi, bj).magnitude())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break 'pivot };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let mut leftover = false;
            for r in t + 1..d.rows {
                if d.at(r, t).is_zero() {
                    continue;
                }
                let q = -d.at(r, t).div_floor(d.at(t, t));
                d.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                leftover |= !d.at(r, t).is_zero();
            }
            for c in t + 1..d.cols {
                if d.at(t, c).is_zero() {
                    continue;
                }
                let q = -d.at(t, c).div_floor(d.at(t, t));
                d.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                leftover |= !d.at(t, c).is_zero();
            }
            if leftover {
                continue 'pivot;
            }
            // enforce the divisibility chain: fold any bad entry into row t
            for i in t + 1..d.rows {
                for j in t + 1..d.cols {
                    if !d.at(i, j).mod_floor(d.at(t, t)).is_zero() {
                        d.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                        continue 'pivot;
                    }
                }
            }
            if d.at(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            break 'pivot;
        }
    }
    (d, u, v)
}

/// Exact determinant by the Bareiss fraction-free algorithm.
pub fn det(a: &IntMatrix) -> Result<BigInt, LatticeError> {
    if a.rows != a.cols {
        return Err(LatticeError::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.at(k, k).is_zero() {
            let swap = (k + 1..n).find(|&r| !m.at(r, k).is_zero());
            match swap {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m.set(i, j, q);
            }
            m.set(i, k, BigInt::zero());
        }
        prev = m.at(k, k).clone();
    }
    Ok(sign * m.at(n - 1, n - 1).clone())
}

pub fn is_unimodular(a: &IntMatrix) -> Result<bool, LatticeError> {
    Ok(det(a)?.magnitude() == &BigInt::one().into_parts().1)
}

/// Exact inverse scaled by the determinant: returns `(B, d)` with
/// `A * B = d * I` and `d = det(A)`; `Err(Singular)` when `d = 0`.
pub fn inverse_scaled(a: &IntMatrix) -> Result<(IntMatrix, BigInt), LatticeError> {
    let d = det(a)?;
    if d.is_zero() {
        return Err(LatticeError::Singular);
    }
    let n = a.rows;
    let mut adj = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            // minor with row i and column j removed, cofactor into (j, i)
            let rows: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| a.at(r, c).clone()).collect())
                .collect();
            let minor = det(&IntMatrix::from_bigint_rows(rows)).expect("minor is square");
            let c = if (i + j) % 2 == 0 { minor } else { -minor };
            adj.set(j, i, c);
        }
    }
    Ok((adj, d))
}

/// Integer inverse of a unimodular matrix.
pub fn inverse_unimodular(a: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let (adj, d) = inverse_scaled(a)?;
    if d.magnitude() != &BigInt::one().into_parts().1 {
        return Err(LatticeError::Singular);
    }
    let mut out = adj;
    if d.is_negative() {
        for i in 0..out.rows {
            out.negate_row(i);
        }
    }
    Ok(out)
}

/// A full or partial rank sublattice of `Z^ambient`, stored by its canonical
/// lower-HNF basis. Structural equality is lattice equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// Span of the given rows inside `Z^ambient`.
    pub fn from_rows(ambient: usize, rows: &IntMatrix) -> Lattice {
        assert_eq!(rows.cols(), ambient, "row length must match the ambient dimension");
        Lattice { ambient, basis: hnf_basis(rows) }
    }

    pub fn from_i64_rows(ambient: usize, rows: &[Vec<i64>]) -> Lattice {
        Self::from_rows(ambient, &IntMatrix::from_rows(rows))
    }

    pub fn standard(d: usize) -> Lattice {
        Lattice { ambient: d, basis: IntMatrix::identity(d) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// The canonical lower-HNF basis, one generator per row.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    fn pivot_col(&self, i: usize) -> usize {
        (0..self.ambient).rev().find(|&j| !self.basis.at(i, j).is_zero()).expect("nonzero row")
    }

    /// Coordinates of `v` over the basis rows, when `v` lies in the lattice.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient);
        let mut rem = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.rank()];
        for i in (0..self.rank()).rev() {
            let p = self.pivot_col(i);
            let (q, r) = rem[p].div_rem(self.basis.at(i, p));
            if !r.is_zero() {
                return None;
            }
            for j in 0..self.ambient {
                let delta = &q * self.basis.at(i, j);
                rem[j] -= delta;
            }
            coeffs[i] = q;
        }
        if rem.iter().all(|x| x.is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some()
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.contains(&w)
    }

    /// Index `[sup : self]` as a positive integer; requires containment and
    /// equal rank.
    pub fn index_in(&self, sup: &Lattice) -> Result<BigInt, LatticeError> {
        assert_eq!(self.ambient, sup.ambient, "lattices live in different ambient spaces");
        let mut coeff_rows = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let c = sup.solve(self.basis.row(i)).ok_or(LatticeError::NotASublattice)?;
            coeff_rows.push(c);
        }
        if self.rank() < sup.rank() {
            return Err(LatticeError::InfiniteIndex);
        }
        let c = IntMatrix::from_bigint_rows(coeff_rows);
        Ok(det(&c)?.abs())
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(ambient={}, basis={:?})", self.ambient, self.basis)
    }
}

/// Lattice equality; bases are canonical, so this is structural.
pub fn lattice_equal(a: &Lattice, b: &Lattice) -> bool {
    a == b
}

/// Index `[sup : sub]`.
pub fn lattice_index(sub: &Lattice, sup: &Lattice) -> Result<BigInt, LatticeError> {
    sub.index_in(sup)
}

/// The sublattice of `Z^d` cut out by congruences `sum_j C[i][j] * e[j] = 0
/// (mod moduli[i])`, one row per congruence.
///
/// Computed from the Smith normal form of the block matrix `[C | diag(m)]`:
/// its kernel consists of pairs `(e, k)` with `C e + diag(m) k = 0`, and the
/// projection to the first `d` coordinates is injective on that kernel, so
/// the last `d` columns of `V` project onto a basis.
pub fn kernel_of_congruence(c: &IntMatrix, moduli: &[u64]) -> Lattice {
    let r = c.rows();
    let d = c.cols();
    assert_eq!(moduli.len(), r, "one modulus per congruence row");
    assert!(moduli.iter().all(|&m| m >= 1), "moduli must be positive");
    let mut b = IntMatrix::zero(r, d + r);
    for i in 0..r {
        for j in 0..d {
            b.set(i, j, c.at(i, j).clone());
        }
        b.set(i, d + i, BigInt::from(moduli[i]));
    }
    let (dd, _u, v) = snf(&b);
    // diag(m) is invertible over Q, so B has full row rank r
    for i in 0..r {
        assert!(!dd.at(i, i).is_zero(), "congruence block must have full row rank");
    }
    let rows: Vec<Vec<BigInt>> = (r..d + r)
        .map(|col| (0..d).map(|i| v.at(i, col).clone()).collect())
        .collect();
    let lat = Lattice::from_rows(d, &IntMatrix::from_bigint_rows(rows));
    assert_eq!(lat.rank(), d, "congruence kernel is always full rank");
    lat
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_hnf_matches_frozen_example() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![-1, 1]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, IntMatrix::from_rows(&[vec![2, 0], vec![1, 1]]));
        assert!(is_unimodular(&u).unwrap());
        assert_eq!(u.mul(&a), h);
    }

    #[test]
    fn lower_hnf_shape_and_idempotence() {
        let a = IntMatrix::from_rows(&[vec![4, 6, 2], vec![6, 9, 3], vec![2, 3, 1], vec![0, 4, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        assert!(is_unimodular(&u).unwrap());
        // zero rows at the bottom
        let rank = (0..h.rows()).take_while(|&i| !h.row_is_zero(i)).count();
        for i in rank..h.rows() {
            assert!(h.row_is_zero(i));
        }
        // pivots: last nonzero per row, strictly increasing, positive,
        // entries below reduced
        let mut last_pivot: Option<usize> = None;
        for i in 0..rank {
            let p = (0..h.cols()).rev().find(|&j| !h.at(i, j).is_zero()).unwrap();
            if let Some(lp) = last_pivot {
                assert!(p > lp);
            }
            last_pivot = Some(p);
            assert!(h.at(i, p).is_positive());
            for r in i + 1..rank {
                assert!(!h.at(r, p).is_negative() && h.at(r, p) < h.at(i, p));
            }
        }
        let (h2, _) = hnf(&h);
        assert_eq!(h2, h);
    }

    #[test]
    fn hnf_is_a_lattice_invariant() {
        let a = IntMatrix::from_rows(&[vec![3, 1, -2], vec![0, 5, 7]]);
        // left-multiplying by a unimodular matrix preserves the row span
        let g = IntMatrix::from_rows(&[vec![1, 4], vec![1, 5]]);
        assert!(is_unimodular(&g).unwrap());
        let b = g.mul(&a);
        assert_eq!(hnf_basis(&a), hnf_basis(&b));
    }

    #[test]
    fn snf_small_example() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let (d, u, v) = snf(&a);
        assert_eq!(d, IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
        assert!(is_unimodular(&u).unwrap());
        assert!(is_unimodular(&v).unwrap());
        assert_eq!(u.mul(&a).mul(&v), d);
    }

    #[test]
    fn snf_divisibility_chain() {
        let a = IntMatrix::from_rows(&[vec![6, 10, 15], vec![10, 15, 6], vec![15, 6, 10]]);
        let (d, u, v) = snf(&a);
        assert_eq!(u.mul(&a).mul(&v), d);
        let mut prev = d.at(0, 0).clone();
        for t in 1..3 {
            let cur = d.at(t, t).clone();
            if !cur.is_zero() {
                assert!(cur.mod_floor(&prev).is_zero(), "chain broken: {prev} !| {cur}");
            }
            prev = cur;
        }
    }

    #[test]
    fn bareiss_determinant() {
        let a = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 4]]);
        assert_eq!(det(&a).unwrap(), BigInt::from(11));
        let s = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(det(&s).unwrap(), BigInt::zero());
        let ns = IntMatrix::from_rows(&[vec![1, 2, 3]]);
        assert_eq!(det(&ns), Err(LatticeError::NotSquare { rows: 1, cols: 3 }));
    }

    #[test]
    fn scaled_inverse_and_unimodular_inverse() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = inverse_unimodular(&a).unwrap();
        assert_eq!(a.mul(&inv), IntMatrix::identity(2));
        assert_eq!(inv.mul(&a), IntMatrix::identity(2));

        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let (adj, d) = inverse_scaled(&b).unwrap();
        assert_eq!(d, BigInt::from(6));
        let mut scaled = IntMatrix::identity(2);
        scaled.set(0, 0, BigInt::from(6));
        scaled.set(1, 1, BigInt::from(6));
        assert_eq!(b.mul(&adj), scaled);
    }

    #[test]
    fn lattice_membership_and_solve() {
        let l = Lattice::from_i64_rows(2, &[vec![2, 0], vec![1, 1]]);
        assert!(l.contains_i64(&[3, 1]));
        assert!(!l.contains_i64(&[0, 1]));
        let coeffs = l.solve(&[BigInt::from(3), BigInt::from(1)]).unwrap();
        // 3*e0 + e1 = 1*(2,0) + 1*(1,1)
        assert_eq!(coeffs, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn lattice_index_counts_cosets() {
        let sub = Lattice::from_i64_rows(2, &[vec![2, 0], vec![0, 2]]);
        let sup = Lattice::standard(2);
        assert_eq!(lattice_index(&sub, &sup).unwrap(), BigInt::from(4));
        assert_eq!(lattice_index(&sup, &sup).unwrap(), BigInt::from(1));

        let skew = Lattice::from_i64_rows(2, &[vec![1, 3]]);
        assert_eq!(skew.index_in(&sup), Err(LatticeError::InfiniteIndex));
        let off = Lattice::from_i64_rows(2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(off.index_in(&sub), Err(LatticeError::NotASublattice));
    }

    #[test]
    fn congruence_kernel_parity() {
        // a + b = 0 (mod 2) inside Z^2
        let c = IntMatrix::from_rows(&[vec![1, 1]]);
        let k = kernel_of_congruence(&c, &[2]);
        assert_eq!(k.basis(), &IntMatrix::from_rows(&[vec![2, 0], vec![1, 1]]));
        assert_eq!(k.index_in(&Lattice::standard(2)).unwrap(), BigInt::from(2));
    }

    #[test]
    fn congruence_kernel_two_conditions() {
        // e0 = 0 (mod 3) and e0 + 2 e1 = 0 (mod 4)
        let c = IntMatrix::from_rows(&[vec![1, 0], vec![1, 2]]);
        let k = kernel_of_congruence(&c, &[3, 4]);
        for e0 in -12i64..=12 {
            for e1 in -12i64..=12 {
                let expected = e0.rem_euclid(3) == 0 && (e0 + 2 * e1).rem_euclid(4) == 0;
                assert_eq!(k.contains_i64(&[e0, e1]), expected, "at ({e0}, {e1})");
            }
        }
    }
}
