//! The rationalization tower for the quotient of the torus function field
//! by the Heisenberg action, emitted as an auditable certificate.
//!
//! Stages: pass to the scalar invariants `y_0 = x_0^n, y_i = x_i/x_(i-1)`;
//! drop to the tail `y_1..y_(n-1)` (sufficiency cited to chu-kang Thm 4.1);
//! pass to the xi-invariants `z_1 = y_1^n, z_i = y_i/y_(i-1)`; change to the
//! cycled coordinates `w_i = eta^(i-1)(z_2)` (n >= 3); linearize the residual
//! cyclic action by adjoining a cocycle variable and Fourier-diagonalizing
//! (equivalence cited to chu-kang p. 687); finish with Fischer's theorem on
//! the terminal diagonal action (cited). Every monomial identity, lattice
//! equality, unimodularity, and order claim along the way is re-checked
//! exactly; only the three named citations are taken on faith.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::RootOfUnity;
use crate::heisenberg::{eta_map, omega_map, xi_map};
use crate::intlattice::{self, lattice_index, IntMatrix, Lattice};
use crate::laurent::{LaurentPolynomial, ScaledMonomialMap, VarNames};
use crate::torus::{
    character_image_order, diagonalize_cyclic_permutation, fischer_generators, induced_action,
    verify_generating_set, DiagonalAction, GeneratingVerdict,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalizeError {
    #[error("step {step} failed: {reason}")]
    Step { step: String, reason: String },
}

fn fail(step: &str, reason: impl Into<String>) -> RationalizeError {
    RationalizeError::Step { step: step.into(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    MonomialChange,
    Restriction,
    FieldExtension,
    Citation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "source", rename_all = "snake_case")]
pub enum StepStatus {
    Verified,
    Cited(String),
}

/// One stage of the tower: what changed, whether the claim was machine
/// checked or cited, and the exact data backing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerStep {
    pub name: String,
    pub kind: StepKind,
    pub status: StepStatus,
    pub witness: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl TowerStep {
    pub fn citation(&self) -> Option<&str> {
        match &self.status {
            StepStatus::Verified => None,
            StepStatus::Cited(source) => Some(source),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "step", rename_all = "snake_case")]
pub enum Verdict {
    AllVerifiedOrCited,
    Failed(String),
}

/// The full audit trail for one `n`. Serialization is deterministic: field
/// order is fixed and every map is ordered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalityCertificate {
    pub version: String,
    pub n: u64,
    pub steps: Vec<TowerStep>,
    pub discrepancies: Vec<String>,
    pub verdict: Verdict,
}

impl RationalityCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::AllVerifiedOrCited
    }

    pub fn step(&self, name: &str) -> Option<&TowerStep> {
        self.steps.iter().find(|s| s.name == name)
    }

    /// Citation sources in step order.
    pub fn cited_sources(&self) -> Vec<&str> {
        self.steps.iter().filter_map(|s| s.citation()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }
}

/// Internal carrier between stages: the current coordinates as x-exponent
/// rows plus the residual actions in those coordinates.
struct Stage {
    rows_on_x: Vec<Vec<i64>>,
    eta: ScaledMonomialMap,
    xi: Option<ScaledMonomialMap>,
}

fn y_rows(n: u64) -> Vec<Vec<i64>> {
    let d = n as usize;
    let mut rows = vec![vec![0i64; d]; d];
    rows[0][0] = n as i64;
    for i in 1..d {
        rows[i][i] = 1;
        rows[i][i - 1] = -1;
    }
    rows
}

/// Rows of `new` coordinates written over `old` ones, pushed down to the
/// `x`-exponents of the old coordinates.
fn compose_rows(new_in_old: &[Vec<i64>], old_on_x: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let ambient = old_on_x.first().map_or(0, Vec::len);
    new_in_old
        .iter()
        .map(|row| {
            let mut out = vec![0i64; ambient];
            for (c, old) in row.iter().zip(old_on_x) {
                for (o, &e) in out.iter_mut().zip(old) {
                    *o += c * e;
                }
            }
            out
        })
        .collect()
}

/// Exact multiplicative order, capped; `None` if the cap is exceeded.
fn map_order(m: &ScaledMonomialMap, cap: u64) -> Option<u64> {
    let id = ScaledMonomialMap::identity(m.dim());
    let mut acc = m.clone();
    for k in 1..=cap {
        if acc == id {
            return Some(k);
        }
        acc = ScaledMonomialMap::compose(&acc, m);
    }
    None
}

fn rows_string(rows: &[Vec<i64>]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", body.join(","))
}

fn names(prefix: &str, start: usize, count: usize) -> VarNames {
    VarNames::custom((0..count).map(|i| format!("{prefix}{}", start + i)).collect())
}

/// Verify that the residual actions recorded in a stage agree with pushing
/// the original generators through the composed coordinate change.
fn recheck_from_x(n: u64, stage: &Stage, step: &str) -> Result<(), RationalizeError> {
    let eta_direct = induced_action(&eta_map(n), &stage.rows_on_x)
        .map_err(|e| fail(step, format!("eta does not descend to the composed rows: {e}")))?;
    if eta_direct != stage.eta {
        return Err(fail(step, "residual eta differs from the direct induction from x"));
    }
    let xi_direct = induced_action(&xi_map(n), &stage.rows_on_x)
        .map_err(|e| fail(step, format!("xi does not descend to the composed rows: {e}")))?;
    match &stage.xi {
        Some(xi) => {
            if &xi_direct != xi {
                return Err(fail(step, "residual xi differs from the direct induction from x"));
            }
        }
        None => {
            // past the xi-invariants, xi must act trivially
            if xi_direct != ScaledMonomialMap::identity(stage.rows_on_x.len()) {
                return Err(fail(step, "xi is not trivial on the xi-invariant coordinates"));
            }
        }
    }
    Ok(())
}

fn lambda_stage(n: u64) -> Result<(TowerStep, Stage), RationalizeError> {
    assert!(n >= 2, "the tower starts at n = 2");
    let d = n as usize;
    let action = DiagonalAction::new(d, &[(n, vec![1; d])]);
    let rows = y_rows(n);
    match verify_generating_set(&action, &rows) {
        GeneratingVerdict::Generates => {}
        other => {
            return Err(fail("lambda", format!("candidate rows do not generate: {other:?}")))
        }
    }
    let span = Lattice::from_i64_rows(d, &rows);
    let index = lattice_index(&span, &Lattice::standard(d))
        .expect("the invariant span sits inside the standard lattice");
    if index != BigInt::from(n) {
        return Err(fail("lambda", format!("scalar-invariant lattice has index {index}, not {n}")));
    }
    let eta = induced_action(&eta_map(n), &rows)
        .map_err(|e| fail("lambda", format!("eta does not stabilize the y-lattice: {e}")))?;
    let xi = induced_action(&xi_map(n), &rows)
        .map_err(|e| fail("lambda", format!("xi does not stabilize the y-lattice: {e}")))?;
    if ScaledMonomialMap::compose(&xi, &eta) != ScaledMonomialMap::compose(&eta, &xi) {
        return Err(fail("lambda", "residual xi and eta fail to commute on y"));
    }
    let eta_order = map_order(&eta, n * n).ok_or_else(|| fail("lambda", "eta order overflow"))?;
    let xi_order = map_order(&xi, n * n).ok_or_else(|| fail("lambda", "xi order overflow"))?;
    if eta_order != n || xi_order != n {
        return Err(fail(
            "lambda",
            format!("residual orders (xi, eta) = ({xi_order}, {eta_order}), expected ({n}, {n})"),
        ));
    }
    let vars = names("y", 0, d);
    let mut witness = BTreeMap::new();
    witness.insert("index".into(), index.to_string());
    witness.insert("rows".into(), rows_string(&rows));
    witness.insert("residual_eta".into(), eta.render(&vars));
    witness.insert("residual_xi".into(), xi.render(&vars));
    witness.insert("eta_order".into(), eta_order.to_string());
    witness.insert("xi_order".into(), xi_order.to_string());
    witness.insert("commute".into(), "true".into());
    let step = TowerStep {
        name: "lambda".into(),
        kind: StepKind::MonomialChange,
        status: StepStatus::Verified,
        witness,
        notes: vec![
            "the commutator scalar acts trivially on every y, so the residual group is abelian"
                .into(),
        ],
    };
    let stage = Stage { rows_on_x: rows, eta, xi: Some(xi) };
    recheck_from_x(n, &stage, "lambda")?;
    Ok((step, stage))
}

fn tail_stage(n: u64) -> Result<(TowerStep, Stage), RationalizeError> {
    let (_, y) = lambda_stage(n)?;
    let d = n as usize;
    let xi_y = y.xi.as_ref().expect("lambda stage keeps xi");
    // images of the tail coordinates must not involve y_0
    for j in 1..d {
        for m in [&y.eta, xi_y] {
            if m.image_exponent(j).get(0) != 0 {
                return Err(fail("tail", format!("image of y_{j} involves y_0")));
            }
        }
    }
    let y0_involved = y.eta.image_exponent(0).get(0) != 0;
    if !y0_involved {
        return Err(fail("tail", "expected eta(y_0) to involve y_0"));
    }
    let restrict = |m: &ScaledMonomialMap| {
        let images: Vec<(Vec<i64>, RootOfUnity)> = (1..d)
            .map(|j| {
                let e = m.image_exponent(j);
                ((1..d).map(|i| e.get(i)).collect(), m.scalar(j))
            })
            .collect();
        ScaledMonomialMap::from_images(&images)
    };
    let eta = restrict(&y.eta);
    let xi = restrict(xi_y);
    let eta_order = map_order(&eta, n * n).ok_or_else(|| fail("tail", "eta order overflow"))?;
    if eta_order != n {
        return Err(fail("tail", format!("tail eta has order {eta_order}, expected {n}")));
    }
    let vars = names("y", 1, d - 1);
    let mut witness = BTreeMap::new();
    witness.insert("tail_rows".into(), rows_string(&y.rows_on_x[1..]));
    witness.insert("residual_eta".into(), eta.render(&vars));
    witness.insert("residual_xi".into(), xi.render(&vars));
    witness.insert("eta_order".into(), eta_order.to_string());
    witness.insert("y0_in_tail_images".into(), "none".into());
    let step = TowerStep {
        name: "tail".into(),
        kind: StepKind::Restriction,
        status: StepStatus::Cited("chu-kang Thm 4.1".into()),
        witness,
        notes: vec![
            "stability of the tail coordinates is machine checked; the sufficiency of the \
             tail subfield for rationality is the cited statement"
                .into(),
        ],
    };
    let stage =
        Stage { rows_on_x: y.rows_on_x[1..].to_vec(), eta, xi: Some(xi) };
    recheck_from_x(n, &stage, "tail")?;
    Ok((step, stage))
}

fn xi_stage(n: u64) -> Result<(TowerStep, Stage), RationalizeError> {
    let (_, tail) = tail_stage(n)?;
    let d = n as usize - 1;
    let xi_tail = tail.xi.as_ref().expect("tail stage keeps xi");
    // the tail xi-action is diagonal; read its characters off the map
    let characters: Vec<i64> = (0..d)
        .map(|j| {
            let s = xi_tail.scalar(j);
            assert_eq!(n % s.order(), 0, "tail scalars are n-th roots");
            (s.exp() * (n / s.order())) as i64
        })
        .collect();
    for j in 0..d {
        let unit: Vec<i64> = (0..d).map(|i| i64::from(i == j)).collect();
        if xi_tail.image_exponent(j).as_slice() != unit {
            return Err(fail("xi", "tail xi-action is not diagonal"));
        }
    }
    let action = DiagonalAction::new(d, &[(n, characters.clone())]);
    let mut z_rows = vec![vec![0i64; d]; d];
    z_rows[0][0] = n as i64;
    for i in 1..d {
        z_rows[i][i] = 1;
        z_rows[i][i - 1] = -1;
    }
    match verify_generating_set(&action, &z_rows) {
        GeneratingVerdict::Generates => {}
        other => return Err(fail("xi", format!("z-rows do not generate: {other:?}"))),
    }
    let span = Lattice::from_i64_rows(d, &z_rows);
    let index = lattice_index(&span, &Lattice::standard(d))
        .expect("the invariant span sits inside the standard lattice");
    if index != BigInt::from(n) {
        return Err(fail("xi", format!("xi-invariant lattice has index {index}, not {n}")));
    }
    let eta = induced_action(&tail.eta, &z_rows)
        .map_err(|e| fail("xi", format!("eta does not stabilize the z-lattice: {e}")))?;
    let xi_on_z = induced_action(xi_tail, &z_rows)
        .map_err(|e| fail("xi", format!("xi does not stabilize its own invariants: {e}")))?;
    if xi_on_z != ScaledMonomialMap::identity(d) {
        return Err(fail("xi", "xi does not act trivially on z"));
    }
    let eta_order = map_order(&eta, n * n).ok_or_else(|| fail("xi", "eta order overflow"))?;
    if eta_order != n {
        return Err(fail("xi", format!("z-level eta has order {eta_order}, expected {n}")));
    }
    let vars = names("z", 1, d);
    let mut witness = BTreeMap::new();
    witness.insert("index".into(), index.to_string());
    witness.insert("z_rows".into(), rows_string(&z_rows));
    witness.insert("residual_eta".into(), eta.render(&vars));
    witness.insert("xi_on_z".into(), "identity".into());
    witness.insert("eta_order".into(), eta_order.to_string());
    witness.insert(
        "character_image_order".into(),
        character_image_order(&action).to_string(),
    );
    let step = TowerStep {
        name: "xi".into(),
        kind: StepKind::MonomialChange,
        status: StepStatus::Verified,
        witness,
        notes: vec![
            "the residual eta-action on z matches the shape of tau in chu-kang p. 686; \
             recorded as a remark, not machine checked"
                .into(),
        ],
    };
    let stage = Stage {
        rows_on_x: compose_rows(&z_rows, &tail.rows_on_x),
        eta,
        xi: None,
    };
    recheck_from_x(n, &stage, "xi")?;
    Ok((step, stage))
}

fn w_stage(n: u64) -> Result<(TowerStep, Stage), RationalizeError> {
    if n < 3 {
        return Err(fail("w", "w_1 = z_2 needs a second z-coordinate, so n >= 3"));
    }
    let (_, z) = xi_stage(n)?;
    let d = n as usize - 1;
    // w_1 = z_2 and w_(i+1) = eta(w_i)
    let mut w_rows: Vec<Vec<i64>> = Vec::with_capacity(d);
    let mut current = LaurentPolynomial::variable(d, 1);
    for _ in 0..d {
        let (e, c) = current.as_monomial().expect("eta images of monomials are monomials");
        if !c.is_one() {
            return Err(fail("w", "unexpected scalar while cycling z_2"));
        }
        w_rows.push(e.as_slice().to_vec());
        current = z.eta.pullback(&current);
    }
    let det = intlattice::det(&IntMatrix::from_rows(&w_rows))
        .expect("w-rows form a square matrix");
    if det != BigInt::from(1) && det != BigInt::from(-1) {
        return Err(fail("w", format!("w-change over z is not unimodular, det = {det}")));
    }
    let eta = induced_action(&z.eta, &w_rows)
        .map_err(|e| fail("w", format!("eta does not stabilize the w-lattice: {e}")))?;
    // expected cycle: w_i -> w_(i+1) for i < n-1, w_(n-1) -> (w_1...w_(n-1))^(-1)
    let mut expected: Vec<(Vec<i64>, RootOfUnity)> = Vec::with_capacity(d);
    for j in 0..d - 1 {
        let mut e = vec![0i64; d];
        e[j + 1] = 1;
        expected.push((e, RootOfUnity::one()));
    }
    expected.push((vec![-1; d], RootOfUnity::one()));
    if eta != ScaledMonomialMap::from_images(&expected) {
        return Err(fail("w", "residual eta is not the expected cycle"));
    }
    let eta_order = map_order(&eta, n * n).ok_or_else(|| fail("w", "eta order overflow"))?;
    if eta_order != n {
        return Err(fail("w", format!("w-level eta has order {eta_order}, expected {n}")));
    }
    let vars = names("w", 1, d);
    let mut witness = BTreeMap::new();
    witness.insert("w_rows".into(), rows_string(&w_rows));
    witness.insert("det".into(), det.to_string());
    witness.insert("residual_eta".into(), eta.render(&vars));
    witness.insert(
        "cycle".into(),
        format!("eta(w_i) = w_(i+1) for i < {d}; eta(w_{d}) = (w_1...w_{d})^(-1)"),
    );
    witness.insert("eta_order".into(), eta_order.to_string());
    let step = TowerStep {
        name: "w".into(),
        kind: StepKind::MonomialChange,
        status: StepStatus::Verified,
        witness,
        notes: Vec::new(),
    };
    let stage = Stage {
        rows_on_x: compose_rows(&w_rows, &z.rows_on_x),
        eta,
        xi: None,
    };
    recheck_from_x(n, &stage, "w")?;
    Ok((step, stage))
}

fn linearize_stage(n: u64) -> Result<(TowerStep, DiagonalAction), RationalizeError> {
    let (_, w) = w_stage(n)?;
    let d = n as usize - 1;
    // adjoin u with eta(u) = u w_1; coordinates (u, w_1, ..., w_(n-1))
    let mut images: Vec<(Vec<i64>, RootOfUnity)> = Vec::with_capacity(d + 1);
    let mut u_image = vec![0i64; d + 1];
    u_image[0] = 1;
    u_image[1] = 1;
    images.push((u_image, RootOfUnity::one()));
    for j in 0..d {
        let e = w.eta.image_exponent(j);
        let mut shifted = vec![0i64; d + 1];
        for i in 0..d {
            shifted[i + 1] = e.get(i);
        }
        images.push((shifted, w.eta.scalar(j)));
    }
    let eta_ext = ScaledMonomialMap::from_images(&images);
    let eta_order =
        map_order(&eta_ext, n * n).ok_or_else(|| fail("linearize", "eta order overflow"))?;
    if eta_order != n {
        return Err(fail(
            "linearize",
            format!("extended eta has order {eta_order}, expected {n}: the cocycle is off"),
        ));
    }
    // W_i = u w_1 ... w_(i-1), a unimodular triangular system over (u, w)
    let mut cap_rows: Vec<Vec<i64>> = Vec::with_capacity(d + 1);
    for i in 1..=d + 1 {
        let mut row = vec![0i64; d + 1];
        for r in row.iter_mut().take(i) {
            *r = 1;
        }
        cap_rows.push(row);
    }
    let cap_det = intlattice::det(&IntMatrix::from_rows(&cap_rows)).expect("square");
    if cap_det != BigInt::from(1) {
        return Err(fail("linearize", "W-system is not unimodular over (u, w)"));
    }
    // eta(W_i) = W_(i+1) and eta(W_n) = W_1, checked symbolically
    for i in 0..=d {
        let mono = LaurentPolynomial::monomial(d + 1, &cap_rows[i], crate::cyclotomic::Cyclotomic::one());
        let image = eta_ext.pullback(&mono);
        let target = LaurentPolynomial::monomial(
            d + 1,
            &cap_rows[(i + 1) % (d + 1)],
            crate::cyclotomic::Cyclotomic::one(),
        );
        if image != target {
            return Err(fail("linearize", format!("eta(W_{}) is not W_{}", i + 1, (i + 1) % (d + 1) + 1)));
        }
    }
    // in W-coordinates the action is the plain cyclic shift
    let induced = induced_action(&eta_ext, &cap_rows)
        .map_err(|e| fail("linearize", format!("eta does not stabilize the W-lattice: {e}")))?;
    let shift_perm: Vec<usize> = (0..=d).map(|i| (i + 1) % (d + 1)).collect();
    let shift =
        ScaledMonomialMap::scaled_permutation(&shift_perm, &vec![RootOfUnity::one(); d + 1]);
    if induced != shift {
        return Err(fail("linearize", "induced action on W is not the cyclic shift"));
    }
    let (_, diagonal) = diagonalize_cyclic_permutation(n);
    let characters = &diagonal.generators()[0].1;
    let vars = names("W", 1, d + 1);
    let mut witness = BTreeMap::new();
    witness.insert("eta_u".into(), "u -> u*w1".into());
    witness.insert("cap_w_rows".into(), rows_string(&cap_rows));
    witness.insert(
        "shift".into(),
        format!("eta(W_i) = W_(i+1) for i < {}; eta(W_{}) = W_1", d + 1, d + 1),
    );
    witness.insert("shift_map".into(), induced.render(&vars));
    witness.insert("eta_order".into(), eta_order.to_string());
    witness.insert(
        "diagonal_characters".into(),
        format!(
            "[{}]",
            characters.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        ),
    );
    let step = TowerStep {
        name: "linearize".into(),
        kind: StepKind::FieldExtension,
        status: StepStatus::Cited("chu-kang p. 687".into()),
        witness,
        notes: vec![
            "the cocycle extension, the shift identity, and the Fourier diagonalization are \
             machine checked; the equivalence with the cited linearization and the descent \
             from the extended field are the cited statement"
                .into(),
        ],
    };
    Ok((step, diagonal))
}

fn fischer_stage(n: u64) -> Result<TowerStep, RationalizeError> {
    let (_, diagonal) = linearize_stage(n)?;
    let generators = fischer_generators(&diagonal);
    for row in generators.rows() {
        if !diagonal.fixes_row(row) {
            return Err(fail("fischer", "generator row is not fixed by the terminal action"));
        }
    }
    let span = Lattice::from_i64_rows(diagonal.dim(), generators.rows());
    let index = lattice_index(&span, &Lattice::standard(diagonal.dim()))
        .expect("invariant rows sit inside the standard lattice");
    let image_order = character_image_order(&diagonal);
    if index != image_order {
        return Err(fail(
            "fischer",
            format!("lattice index {index} disagrees with character image order {image_order}"),
        ));
    }
    let vars = names("u", 0, diagonal.dim());
    let mut witness = BTreeMap::new();
    witness.insert("generators".into(), generators.render(&vars).join("; "));
    witness.insert("rows".into(), rows_string(generators.rows()));
    witness.insert("index".into(), index.to_string());
    witness.insert("character_image_order".into(), image_order.to_string());
    Ok(TowerStep {
        name: "fischer".into(),
        kind: StepKind::MonomialChange,
        status: StepStatus::Cited("Fischer".into()),
        witness,
        notes: vec![
            "the invariant lattice and its index are machine checked; that its monomials \
             generate the full invariant field is the cited theorem"
                .into(),
        ],
    })
}

fn trivial_step() -> TowerStep {
    let mut witness = BTreeMap::new();
    witness.insert("reason".into(), "low-dimensional quotients of rational surfaces".into());
    TowerStep {
        name: "trivial".into(),
        kind: StepKind::Citation,
        status: StepStatus::Cited("evident when n <= 3".into()),
        witness,
        notes: Vec::new(),
    }
}

/// Public step views; each rebuilds the chain up to its stage so the
/// advertised precondition (the previous step succeeded) is enforced.
pub fn lambda_step(n: u64) -> Result<TowerStep, RationalizeError> {
    lambda_stage(n).map(|(s, _)| s)
}

pub fn tail_reduction(n: u64) -> Result<TowerStep, RationalizeError> {
    tail_stage(n).map(|(s, _)| s)
}

pub fn xi_step(n: u64) -> Result<TowerStep, RationalizeError> {
    xi_stage(n).map(|(s, _)| s)
}

pub fn w_step(n: u64) -> Result<TowerStep, RationalizeError> {
    w_stage(n).map(|(s, _)| s)
}

pub fn linearize_step(n: u64) -> Result<TowerStep, RationalizeError> {
    linearize_stage(n).map(|(s, _)| s)
}

pub fn fischer_step(n: u64) -> Result<TowerStep, RationalizeError> {
    fischer_stage(n)
}

/// Convention discrepancies that are recorded on every certificate where
/// they are detected.
fn discrepancies(n: u64) -> Vec<String> {
    let mut out = Vec::new();
    // the computed xi-character on the ratio coordinates versus the stated one
    if let Ok((_, y)) = lambda_stage(n) {
        if let Some(xi) = &y.xi {
            let computed = xi.scalar(1);
            let stated = RootOfUnity::new(n, 1);
            if computed != stated {
                out.push(format!(
                    "xi scales each ratio y_i by {computed} in this composition convention; \
                     accounts writing this action with the character {stated} use the inverse \
                     convention; both are primitive so every lattice below is unchanged"
                ));
            }
        }
    }
    out.push(
        "the commutator xi eta xi^-1 eta^-1 realizes as the scalar zeta_n^(+1); composing \
         maps in the opposite order yields its inverse"
            .into(),
    );
    out
}

/// Build the whole tower for one `n`. Any failed check turns into a
/// `Failed` verdict carrying the failing step; nothing panics on
/// mathematical grounds.
pub fn build_certificate(n: u64) -> RationalityCertificate {
    assert!(n >= 2, "certificates start at n = 2");
    let version = "1".to_string();
    let mut steps = Vec::new();
    let mut failed: Option<RationalizeError> = None;

    let push = |result: Result<TowerStep, RationalizeError>,
                    steps: &mut Vec<TowerStep>,
                    failed: &mut Option<RationalizeError>| {
        if failed.is_some() {
            return;
        }
        match result {
            Ok(step) => steps.push(step),
            Err(e) => *failed = Some(e),
        }
    };

    push(lambda_step(n), &mut steps, &mut failed);
    push(tail_reduction(n), &mut steps, &mut failed);
    push(xi_step(n), &mut steps, &mut failed);
    if n >= 3 {
        push(w_step(n), &mut steps, &mut failed);
        push(linearize_step(n), &mut steps, &mut failed);
        push(fischer_step(n), &mut steps, &mut failed);
    } else {
        // n = 2: w_1 = z_2 does not exist; the remaining involution quotient
        // is covered by the trivial-case citation
        if failed.is_none() {
            steps.push(trivial_step());
        }
    }

    let mut discrepancy_list = discrepancies(n);
    if n == 3 {
        discrepancy_list.push(
            "n = 3 also falls under the remark \"evident when n <= 3\"; the full tower is \
             built anyway and the remark is recorded here rather than as an extra citation"
                .into(),
        );
    }

    let verdict = match failed {
        None => Verdict::AllVerifiedOrCited,
        Some(RationalizeError::Step { step, reason }) => {
            discrepancy_list.push(format!("failure witness: {reason}"));
            Verdict::Failed(step)
        }
    };

    RationalityCertificate { version, n, steps, discrepancies: discrepancy_list, verdict }
}

/// Degree-zero shadow of the projective factorization: on the lattice of
/// ratios `t_i = x_i/x_0`, the center acts trivially, xi acts diagonally
/// with an invariant sublattice of index exactly `n`, and eta descends to
/// that sublattice with exact order `n`.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectiveTowerReport {
    pub n: u64,
    pub lambda_trivial: bool,
    pub xi_characters: Vec<u64>,
    pub invariant_index: String,
    pub invariant_index_is_n: bool,
    pub character_image_order: String,
    pub eta_descends: bool,
    pub eta_exact_order: Option<u64>,
}

impl ProjectiveTowerReport {
    pub fn passed(&self) -> bool {
        self.lambda_trivial
            && self.invariant_index_is_n
            && self.invariant_index == self.character_image_order
            && self.eta_descends
            && self.eta_exact_order == Some(self.n)
    }
}

pub fn projective_tower(n: u64) -> ProjectiveTowerReport {
    assert!(n >= 2);
    let d = n as usize;
    // rows of t_i = x_i / x_0
    let t_rows: Vec<Vec<i64>> = (1..d)
        .map(|i| {
            let mut row = vec![0i64; d];
            row[0] = -1;
            row[i] = 1;
            row
        })
        .collect();
    let lambda_trivial = induced_action(&omega_map(n, 1), &t_rows)
        .map(|m| m == ScaledMonomialMap::identity(d - 1))
        .unwrap_or(false);
    let xi_t = induced_action(&xi_map(n), &t_rows).expect("ratios are xi-stable");
    let xi_characters: Vec<u64> = (0..d - 1)
        .map(|j| {
            let s = xi_t.scalar(j);
            s.exp() * (n / s.order()) % n
        })
        .collect();
    let action = DiagonalAction::new(
        d - 1,
        &[(n, xi_characters.iter().map(|&x| x as i64).collect())],
    );
    let invariant = fischer_generators(&action);
    let span = Lattice::from_i64_rows(d - 1, invariant.rows());
    let index = lattice_index(&span, &Lattice::standard(d - 1))
        .expect("invariant rows sit inside the standard lattice");
    let image_order = character_image_order(&action);
    let eta_t = induced_action(&eta_map(n), &t_rows).expect("ratios are eta-stable");
    let eta_inv = induced_action(&eta_t, invariant.rows());
    let (eta_descends, eta_exact_order) = match eta_inv {
        Ok(m) => (true, map_order(&m, n * n).filter(|&k| k == n)),
        Err(_) => (false, None),
    };
    ProjectiveTowerReport {
        n,
        lambda_trivial,
        xi_characters,
        invariant_index: index.to_string(),
        invariant_index_is_n: index == BigInt::from(n),
        character_image_order: image_order.to_string(),
        eta_descends,
        eta_exact_order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_and_tail_shapes() {
        let step = lambda_step(3).unwrap();
        assert_eq!(step.status, StepStatus::Verified);
        assert_eq!(step.witness["index"], "3");
        assert_eq!(
            step.witness["residual_eta"],
            "y0 -> y0*y1^3; y1 -> y2; y2 -> y1^-1*y2^-1"
        );
        let tail = tail_reduction(3).unwrap();
        assert_eq!(tail.citation(), Some("chu-kang Thm 4.1"));
        assert_eq!(tail.witness["residual_eta"], "y1 -> y2; y2 -> y1^-1*y2^-1");
        // the engine's composition convention gives the inverse character
        assert_eq!(tail.witness["residual_xi"], "y1 -> z3^2*y1; y2 -> z3^2*y2");
    }

    #[test]
    fn xi_step_matches_frozen_z_actions() {
        // n = 3: eta(z1) = z1 z2^3, eta(z2) = z1^-1 z2^-2
        let step = xi_step(3).unwrap();
        assert_eq!(step.status, StepStatus::Verified);
        assert_eq!(step.witness["index"], "3");
        assert_eq!(step.witness["residual_eta"], "z1 -> z1*z2^3; z2 -> z1^-1*z2^-2");
        // n = 4: eta(z3) = z1^-1 z2^-3 z3^-2
        let step4 = xi_step(4).unwrap();
        assert_eq!(
            step4.witness["residual_eta"],
            "z1 -> z1*z2^4; z2 -> z3; z3 -> z1^-1*z2^-3*z3^-2"
        );
    }

    #[test]
    fn w_step_matches_frozen_changes() {
        let step = w_step(3).unwrap();
        assert_eq!(step.witness["w_rows"], "[[0,1],[-1,-2]]");
        assert_eq!(step.witness["det"], "1");
        assert_eq!(step.witness["residual_eta"], "w1 -> w2; w2 -> w1^-1*w2^-1");
        let step4 = w_step(4).unwrap();
        assert_eq!(step4.witness["w_rows"], "[[0,1,0],[0,0,1],[-1,-3,-2]]");
        assert_eq!(step4.witness["det"], "-1");
        assert_eq!(
            step4.witness["residual_eta"],
            "w1 -> w2; w2 -> w3; w3 -> w1^-1*w2^-1*w3^-1"
        );
        // too small: no second z-coordinate
        assert!(w_step(2).is_err());
    }

    #[test]
    fn linearize_step_carries_the_shift_witness() {
        for n in [3u64, 4, 5] {
            let step = linearize_step(n).unwrap();
            assert_eq!(step.citation(), Some("chu-kang p. 687"));
            assert_eq!(step.witness["eta_u"], "u -> u*w1");
            assert_eq!(step.witness["eta_order"], n.to_string());
            let d = n as usize;
            assert_eq!(
                step.witness["shift"],
                format!("eta(W_i) = W_(i+1) for i < {d}; eta(W_{d}) = W_1")
            );
        }
    }

    #[test]
    fn fischer_step_index_matches_image_order() {
        for n in [3u64, 4, 6] {
            let step = fischer_step(n).unwrap();
            assert_eq!(step.citation(), Some("Fischer"));
            assert_eq!(step.witness["index"], n.to_string());
            assert_eq!(step.witness["character_image_order"], n.to_string());
        }
    }

    #[test]
    fn certificate_shape_for_full_tower() {
        for n in [3u64, 5] {
            let cert = build_certificate(n);
            assert!(cert.passed(), "n={n}: {:?}", cert.verdict);
            let step_names: Vec<&str> = cert.steps.iter().map(|s| s.name.as_str()).collect();
            assert_eq!(step_names, ["lambda", "tail", "xi", "w", "linearize", "fischer"]);
            assert_eq!(
                cert.cited_sources(),
                ["chu-kang Thm 4.1", "chu-kang p. 687", "Fischer"]
            );
        }
    }

    #[test]
    fn certificate_for_n2_is_the_trivial_case() {
        let cert = build_certificate(2);
        assert!(cert.passed());
        let step_names: Vec<&str> = cert.steps.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(step_names, ["lambda", "tail", "xi", "trivial"]);
        assert!(cert.cited_sources().contains(&"evident when n <= 3"));
        // at n = 2 the stated and computed xi-characters coincide (-1 = -1),
        // so only the composition-convention note remains
        assert_eq!(cert.discrepancies.len(), 1);
    }

    #[test]
    fn omega_sign_discrepancy_is_always_recorded_for_n_at_least_3() {
        for n in [3u64, 4, 7] {
            let cert = build_certificate(n);
            assert!(
                cert.discrepancies.iter().any(|d| d.contains("inverse convention")),
                "n={n}"
            );
        }
    }

    #[test]
    fn serialization_is_deterministic_and_schema_complete() {
        let a = build_certificate(3).to_json();
        let b = build_certificate(3).to_json();
        assert_eq!(a, b);
        for key in ["\"version\"", "\"n\"", "\"steps\"", "\"name\"", "\"kind\"", "\"status\"", "\"witness\"", "\"notes\"", "\"discrepancies\"", "\"verdict\""] {
            assert!(a.contains(key), "missing {key}");
        }
        assert!(a.contains("all_verified_or_cited"));
    }

    #[test]
    fn projective_tower_reports() {
        let report = projective_tower(3);
        assert!(report.passed());
        // engine characters on (t_1, t_2) are (-1, -2) mod 3
        assert_eq!(report.xi_characters, vec![2, 1]);
        assert_eq!(report.invariant_index, "3");
        for n in 2..=6u64 {
            assert!(projective_tower(n).passed(), "n={n}");
        }
    }
}
