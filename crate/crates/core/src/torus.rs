//! Invariants of diagonal finite-abelian actions on tori, decided purely on
//! character lattices: the invariant monomials of a diagonal action form the
//! kernel of a congruence system, an HNF basis of that kernel generates the
//! invariant subfield (Fischer's theorem, cited rather than re-proven), and
//! residual actions in new monomial coordinates are computed by exact
//! conjugation through the coordinate change.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, RootOfUnity};
use crate::intlattice::{self, IntMatrix, Lattice};
use crate::laurent::{LaurentPolynomial, ScaledMonomialMap, VarNames};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("sublattice not stable under the action")]
    SublatticeNotStable,
    #[error("matrix is singular")]
    Singular,
}

/// A diagonal action of a finite abelian group, one generator per row:
/// generator `j` has order `m_j` and scales variable `i` by
/// `zeta_(m_j)^(chi_j[i])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalAction {
    d: usize,
    generators: Vec<(u64, Vec<u64>)>,
}

impl DiagonalAction {
    pub fn new(d: usize, generators: &[(u64, Vec<i64>)]) -> Self {
        let generators = generators
            .iter()
            .map(|(m, chi)| {
                assert!(*m >= 1, "generator order must be positive");
                assert_eq!(chi.len(), d, "character vector must have length d");
                (*m, chi.iter().map(|&x| x.rem_euclid(*m as i64) as u64).collect())
            })
            .collect();
        DiagonalAction { d, generators }
    }

    pub fn trivial(d: usize) -> Self {
        DiagonalAction { d, generators: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[(u64, Vec<u64>)] {
        &self.generators
    }

    /// Generator `j` as an explicit diagonal monomial map.
    pub fn scaling_map(&self, j: usize) -> ScaledMonomialMap {
        let (m, chi) = &self.generators[j];
        let scalars: Vec<RootOfUnity> =
            chi.iter().map(|&x| RootOfUnity::new(*m, x as i64)).collect();
        ScaledMonomialMap::diagonal(&scalars)
    }

    /// Whether the monomial `x^row` is fixed by every generator.
    pub fn fixes_row(&self, row: &[i64]) -> bool {
        assert_eq!(row.len(), self.d);
        self.generators.iter().all(|(m, chi)| {
            let sum: i128 = chi
                .iter()
                .zip(row)
                .map(|(&x, &e)| x as i128 * e as i128)
                .sum();
            sum.rem_euclid(*m as i128) == 0
        })
    }
}

/// The lattice of exponent vectors fixed by the whole action:
/// `{e : sum_i chi_j[i] e_i = 0 mod m_j for all j}`. Always full rank.
pub fn invariant_character_lattice(a: &DiagonalAction) -> Lattice {
    if a.generators.is_empty() {
        return Lattice::standard(a.d);
    }
    let rows: Vec<Vec<i64>> = a
        .generators
        .iter()
        .map(|(_, chi)| chi.iter().map(|&x| x as i64).collect())
        .collect();
    let moduli: Vec<u64> = a.generators.iter().map(|(m, _)| *m).collect();
    intlattice::kernel_of_congruence(&IntMatrix::from_rows(&rows), &moduli)
}

/// An HNF basis of an invariant character lattice, read as Laurent
/// monomials. By Fischer's theorem these generate the invariant subfield.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantGenerators {
    rows: Vec<Vec<i64>>,
}

impl InvariantGenerators {
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn monomial(&self, j: usize) -> LaurentPolynomial {
        LaurentPolynomial::monomial(self.rows[j].len(), &self.rows[j], Cyclotomic::one())
    }

    pub fn render(&self, vars: &VarNames) -> Vec<String> {
        (0..self.rows.len()).map(|j| self.monomial(j).render(vars)).collect()
    }
}

/// HNF basis rows of the invariant character lattice.
pub fn fischer_generators(a: &DiagonalAction) -> InvariantGenerators {
    let lattice = invariant_character_lattice(a);
    let rows = lattice
        .basis()
        .to_i64_rows()
        .expect("invariant lattice entries stay within i64 for supported orders");
    InvariantGenerators { rows }
}

/// Outcome of checking a candidate set of invariant monomials against the
/// full invariant lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratingVerdict {
    Generates,
    /// The candidate spans a proper sublattice; `index` is `None` when the
    /// rank already falls short (infinite index).
    ProperSublattice { index: Option<BigInt> },
    NotInvariant { row: usize },
}

/// Compare the lattice spanned by candidate exponent rows with the
/// invariant lattice of the action.
pub fn verify_generating_set(a: &DiagonalAction, candidate: &[Vec<i64>]) -> GeneratingVerdict {
    for (i, row) in candidate.iter().enumerate() {
        if !a.fixes_row(row) {
            return GeneratingVerdict::NotInvariant { row: i };
        }
    }
    let span = Lattice::from_i64_rows(a.d, candidate);
    let invariant = invariant_character_lattice(a);
    if span.rank() < invariant.rank() {
        return GeneratingVerdict::ProperSublattice { index: None };
    }
    let index = span
        .index_in(&invariant)
        .expect("invariant rows span a sublattice of the invariant lattice");
    if index == BigInt::from(1) {
        GeneratingVerdict::Generates
    } else {
        GeneratingVerdict::ProperSublattice { index: Some(index) }
    }
}

/// Solve `v * rows = target` over the integers, coordinates taken in the
/// given rows (not an HNF of them).
fn solve_in_rows(rows: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let a = IntMatrix::from_rows(rows);
    let (h, u) = intlattice::hnf(&a);
    let rank = (0..h.rows()).take_while(|&i| !h.row_is_zero(i)).count();
    let mut f: Vec<BigInt> = target.iter().map(|&x| BigInt::from(x)).collect();
    let mut w = vec![BigInt::zero(); h.rows()];
    // pivots sit at the last nonzero entry per row with strictly increasing
    // pivot columns, so eliminate from the bottom rank row upward
    for i in (0..rank).rev() {
        let pivot_col = (0..h.cols()).rev().find(|&j| !h.at(i, j).is_zero()).unwrap();
        let (q, r) = num_integer::Integer::div_rem(&f[pivot_col], h.at(i, pivot_col));
        if !r.is_zero() {
            return None;
        }
        for j in 0..h.cols() {
            let delta = &q * h.at(i, j);
            f[j] -= delta;
        }
        w[i] = q;
    }
    if f.iter().any(|x| !x.is_zero()) {
        return None;
    }
    // translate from HNF coordinates back through the transform: H = U * A
    let mut v = vec![BigInt::zero(); rows.len()];
    for (i, wi) in w.iter().enumerate() {
        if wi.is_zero() {
            continue;
        }
        for (k, vk) in v.iter_mut().enumerate() {
            *vk += wi * u.at(i, k);
        }
    }
    v.into_iter().map(|x| x.to_i64()).collect()
}

/// Rewrite the action of `m` in the monomial coordinates `t_j = x^rows[j]`.
/// The rows must be independent; the result is the map with
/// `t_j -> scalar_j * t^(v_j)` where `pullback(x^rows[j], m) =
/// scalar_j * x^(sum_i v_j[i] rows[i])`. Errors when some image exponent
/// leaves the row span, which means the tower step is wrong.
pub fn induced_action(
    m: &ScaledMonomialMap,
    rows: &[Vec<i64>],
) -> Result<ScaledMonomialMap, TorusError> {
    let d = m.dim();
    assert!(rows.iter().all(|r| r.len() == d), "rows must match the ambient dimension");
    assert_eq!(
        Lattice::from_i64_rows(d, rows).rank(),
        rows.len(),
        "rows must be independent"
    );
    let mut images = Vec::with_capacity(rows.len());
    for row in rows {
        let mono = LaurentPolynomial::monomial(d, row, Cyclotomic::one());
        let image = m.pullback(&mono);
        let (exponent, coeff) = image.as_monomial().expect("pullback of a monomial is a monomial");
        let scalar = RootOfUnity::try_from_cyclotomic(coeff)
            .expect("pullback scalars of scaled monomial maps are roots of unity");
        let v = solve_in_rows(rows, exponent.as_slice()).ok_or(TorusError::SublatticeNotStable)?;
        images.push((v, scalar));
    }
    Ok(ScaledMonomialMap::from_images(&images))
}

/// An exact invertible matrix over the cyclotomics; the inverse is
/// computed at construction so it always exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChange {
    matrix: Vec<Vec<Cyclotomic>>,
    inverse: Vec<Vec<Cyclotomic>>,
}

impl LinearChange {
    pub fn new(matrix: Vec<Vec<Cyclotomic>>) -> Result<Self, TorusError> {
        let inverse = cyc_inverse(&matrix).ok_or(TorusError::Singular)?;
        Ok(LinearChange { matrix, inverse })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Cyclotomic>] {
        &self.matrix
    }

    pub fn inverse(&self) -> &[Vec<Cyclotomic>] {
        &self.inverse
    }
}

pub fn cyc_mul(a: &[Vec<Cyclotomic>], b: &[Vec<Cyclotomic>]) -> Vec<Vec<Cyclotomic>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Cyclotomic::zero(); m]; n];
    for i in 0..n {
        assert_eq!(a[i].len(), k, "inner dimensions must agree");
        for (t, b_row) in b.iter().enumerate() {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &(&a[i][t] * &b_row[j]);
            }
        }
    }
    out
}

/// Gauss-Jordan inverse over the cyclotomic field; `None` if singular.
fn cyc_inverse(a: &[Vec<Cyclotomic>]) -> Option<Vec<Vec<Cyclotomic>>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    let mut work = a.to_vec();
    let mut inv: Vec<Vec<Cyclotomic>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let scale = work[col][col].inv().expect("pivot is nonzero");
        for j in 0..n {
            work[col][j] = &work[col][j] * &scale;
            inv[col][j] = &inv[col][j] * &scale;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for j in 0..n {
                let w = &work[col][j] * &factor;
                work[r][j] = &work[r][j] - &w;
                let v = &inv[col][j] * &factor;
                inv[r][j] = &inv[r][j] - &v;
            }
        }
    }
    Some(inv)
}

/// Diagonalize the cyclic shift `W_1 -> W_2 -> ... -> W_n -> W_1` by the
/// discrete Fourier change `u_j = sum_i zeta_n^(ij) W_(i+1)`, on which the
/// shift acts as `u_j -> zeta_n^(-j) u_j`. The conjugation identity
/// `change^-1 * shift * change = diag(zeta^(-j))` is checked exactly.
pub fn diagonalize_cyclic_permutation(n: u64) -> (LinearChange, DiagonalAction) {
    assert!(n >= 1);
    let d = n as usize;
    let change_matrix: Vec<Vec<Cyclotomic>> = (0..d)
        .map(|r| (0..d).map(|j| Cyclotomic::root_of_unity(n, (r * j) as i64)).collect())
        .collect();
    let change = LinearChange::new(change_matrix).expect("the Fourier matrix is invertible");
    let shift: Vec<Vec<Cyclotomic>> = (0..d)
        .map(|r| {
            (0..d)
                .map(|c| if r == (c + 1) % d { Cyclotomic::one() } else { Cyclotomic::zero() })
                .collect()
        })
        .collect();
    let conjugated = cyc_mul(&cyc_mul(change.inverse(), &shift), change.matrix());
    for (i, row) in conjugated.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let expect = if i == j {
                Cyclotomic::root_of_unity(n, -(i as i64))
            } else {
                Cyclotomic::zero()
            };
            assert_eq!(*entry, expect, "conjugation identity failed at ({i}, {j})");
        }
    }
    let characters: Vec<i64> = (0..d).map(|j| -(j as i64)).collect();
    (change, DiagonalAction::new(d, &[(n, characters)]))
}

/// Independent count of the invariant lattice index: the order of the
/// image of `Z^d` under the character congruence map, from the SNF of the
/// block matrix `[C | diag(m)]`.
pub fn character_image_order(a: &DiagonalAction) -> BigInt {
    if a.generators.is_empty() {
        return BigInt::from(1);
    }
    let g = a.generators.len();
    let d = a.d;
    let mut block = IntMatrix::zero(g, d + g);
    for (j, (m, chi)) in a.generators.iter().enumerate() {
        for (i, &x) in chi.iter().enumerate() {
            block.set(j, i, BigInt::from(x));
        }
        block.set(j, d + j, BigInt::from(*m));
    }
    let (dd, _, _) = intlattice::snf(&block);
    let mut cokernel = BigInt::from(1);
    for t in 0..g {
        cokernel *= dd.at(t, t);
    }
    let full: BigInt = a.generators.iter().map(|(m, _)| BigInt::from(*m)).product();
    let quotient = full / &cokernel;
    quotient.abs()
}
