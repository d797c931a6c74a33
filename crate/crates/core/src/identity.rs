//! Exact residual checks for the Desnanot-Jacobi identity and its companions.
//!
//! Notation: `M(R; C)` is the determinant of `A` with the rows in `R` and the
//! columns in `C` deleted. For `1 <= k < l <= n`,
//!
//! ```text
//! det A * M(k,l; k,l) = M(l; l) * M(k; k) - M(l; k) * M(k; l)
//! ```
//!
//! with `P = M(l; l) M(k; k)` and `Q = M(l; k) M(k; l)`. Every check returns a
//! [`ResidualReport`] whose residual is an exact scalar; a check passes iff the
//! residual is zero. All determinants go through [`Matrix::det_bareiss`].

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::matrix::{random_matrix, random_scalar, Matrix, MatrixError};
use crate::scalar::{RingDomain, Scalar, ScalarError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("need k < l, got k = {k}, l = {l}")]
    IndexOrder { k: usize, l: usize },
    #[error("the interior M(n-1,n; n-1,n) is not singular")]
    InteriorNotSingular,
    #[error("invalid dependent-interior spec: {0}")]
    InvalidSpec(String),
    #[error("invalid campaign: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl From<ScalarError> for IdentityError {
    fn from(e: ScalarError) -> Self {
        IdentityError::Matrix(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    DesnanotJacobi,
    Corner,
    GammaLambdaDigamma,
    SingularInterior,
    AkVanishing,
    AkExpansion,
    BlVanishing,
    BlExpansion,
}

impl IdentityId {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::DesnanotJacobi => "desnanot_jacobi",
            IdentityId::Corner => "corner",
            IdentityId::GammaLambdaDigamma => "gamma_lambda_digamma",
            IdentityId::SingularInterior => "singular_interior",
            IdentityId::AkVanishing => "a_k_vanishing",
            IdentityId::AkExpansion => "a_k_expansion",
            IdentityId::BlVanishing => "b_l_vanishing",
            IdentityId::BlExpansion => "b_l_expansion",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Term values of the determinant identity for one `(k, l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityTerms {
    pub full_det: Scalar,
    pub double_minor_det: Scalar,
    pub p: Scalar,
    pub q: Scalar,
    pub gamma: Option<Scalar>,
    pub lambda: Option<Scalar>,
    pub digamma: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    pub identity: IdentityId,
    pub n: usize,
    pub domain: RingDomain,
    /// Generator seed of the checked matrix, when it came from one.
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub residual: Scalar,
    pub passed: bool,
    pub terms: Option<IdentityTerms>,
    pub matrix_digest: String,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    identity_id: &'a str,
    n: usize,
    domain: String,
    seed: Option<u64>,
    k: Option<usize>,
    l: Option<usize>,
    residual: String,
    passed: bool,
}

impl ResidualReport {
    fn new(identity: IdentityId, a: &Matrix, lhs: Scalar, rhs: Scalar) -> Result<Self, IdentityError> {
        let residual = lhs.sub(&rhs)?;
        Ok(ResidualReport {
            identity,
            n: a.rows(),
            domain: a.domain(),
            seed: None,
            k: None,
            l: None,
            passed: residual.is_zero(),
            lhs,
            rhs,
            residual,
            terms: None,
            matrix_digest: a.digest(),
        })
    }

    fn indices(mut self, k: Option<usize>, l: Option<usize>) -> Self {
        self.k = k;
        self.l = l;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        let record = ReportRecord {
            identity_id: self.identity.as_str(),
            n: self.n,
            domain: self.domain.to_string(),
            seed: self.seed,
            k: self.k,
            l: self.l,
            residual: self.residual.to_string(),
            passed: self.passed,
        };
        serde_json::to_string(&record).expect("record is plain data")
    }
}

/// `M(rows; cols)`.
fn m(a: &Matrix, rows: &[usize], cols: &[usize]) -> Result<Scalar, IdentityError> {
    Ok(a.delete(rows, cols)?.det_bareiss()?)
}

fn require_order(a: &Matrix, min: usize) -> Result<usize, IdentityError> {
    let n = a.order()?;
    if n < min {
        return Err(MatrixError::OrderTooSmall { n, min }.into());
    }
    Ok(n)
}

fn identity_terms(a: &Matrix, k: usize, l: usize) -> Result<IdentityTerms, IdentityError> {
    let full_det = a.det_bareiss()?;
    let double_minor_det = m(a, &[k, l], &[k, l])?;
    let p = m(a, &[l], &[l])?.mul(&m(a, &[k], &[k])?)?;
    let q = m(a, &[l], &[k])?.mul(&m(a, &[k], &[l])?)?;
    Ok(IdentityTerms {
        full_det,
        double_minor_det,
        p,
        q,
        gamma: None,
        lambda: None,
        digamma: None,
    })
}

fn check_terms(
    id: IdentityId,
    a: &Matrix,
    k: usize,
    l: usize,
    terms: IdentityTerms,
) -> Result<ResidualReport, IdentityError> {
    let lhs = terms.full_det.mul(&terms.double_minor_det)?;
    let rhs = terms.p.sub(&terms.q)?;
    let mut report = ResidualReport::new(id, a, lhs, rhs)?.indices(Some(k), Some(l));
    report.terms = Some(terms);
    Ok(report)
}

/// `det A * M(k,l; k,l) - (P - Q)` for `1 <= k < l <= n`, `n >= 3`.
pub fn desnanot_jacobi_check(a: &Matrix, k: usize, l: usize) -> Result<ResidualReport, IdentityError> {
    let n = require_order(a, 3)?;
    if k >= l {
        return Err(IdentityError::IndexOrder { k, l });
    }
    if l > n || k == 0 {
        return Err(MatrixError::IndexOutOfRange { index: if k == 0 { k } else { l }, bound: n }.into());
    }
    check_terms(IdentityId::DesnanotJacobi, a, k, l, identity_terms(a, k, l)?)
}

/// The `(k, l) = (n-1, n)` case: `P - Q = det A * det(interior)`, where the
/// interior drops rows and columns `n-1` and `n`.
pub fn corner_identity_check(a: &Matrix) -> Result<ResidualReport, IdentityError> {
    let n = require_order(a, 3)?;
    check_terms(IdentityId::Corner, a, n - 1, n, identity_terms(a, n - 1, n)?)
}

/// Evaluates Gamma, Lambda and digamma as 2x2 combinations of minors and
/// compares each with its closed form `M(n; c) * M(n,n-1,n-2; n,n-1,n-2)`,
/// for `c = n, n-1, n-2` respectively. Requires `n >= 4`.
pub fn gamma_lambda_digamma_check(a: &Matrix) -> Result<ResidualReport, IdentityError> {
    let n = require_order(a, 4)?;
    let (n1, n2) = (n - 1, n - 2);
    let mm = |rows: &[usize], cols: &[usize]| m(a, rows, cols);

    let gamma = mm(&[n, n2], &[n, n2])?.cross(
        &mm(&[n, n1], &[n, n1])?,
        &mm(&[n, n1], &[n, n2])?,
        &mm(&[n, n2], &[n, n1])?,
    )?;
    let lambda = mm(&[n, n2], &[n1, n2])?.cross(
        &mm(&[n, n1], &[n, n1])?,
        &mm(&[n, n1], &[n1, n2])?,
        &mm(&[n, n2], &[n, n1])?,
    )?;
    let digamma = mm(&[n, n2], &[n1, n2])?.cross(
        &mm(&[n, n1], &[n, n2])?,
        &mm(&[n, n2], &[n, n2])?,
        &mm(&[n, n1], &[n1, n2])?,
    )?;

    let core = mm(&[n, n1, n2], &[n, n1, n2])?;
    let closed = [
        mm(&[n], &[n])?.mul(&core)?,
        mm(&[n], &[n1])?.mul(&core)?,
        mm(&[n], &[n2])?.mul(&core)?,
    ];
    let computed = [gamma.clone(), lambda.clone(), digamma.clone()];
    let pick = (0..3).find(|&i| computed[i] != closed[i]).unwrap_or(0);

    let mut terms = identity_terms(a, n1, n)?;
    terms.gamma = Some(gamma);
    terms.lambda = Some(lambda);
    terms.digamma = Some(digamma);
    let (lhs, rhs) = (computed[pick].clone(), closed[pick].clone());
    let mut report = ResidualReport::new(IdentityId::GammaLambdaDigamma, a, lhs, rhs)?;
    report.terms = Some(terms);
    Ok(report)
}

/// When `M(n-1,n; n-1,n) = 0`, the corner combination `P - Q` vanishes.
/// Errors if the interior is not singular.
pub fn singular_interior_check(a: &Matrix) -> Result<ResidualReport, IdentityError> {
    let n = require_order(a, 3)?;
    let terms = identity_terms(a, n - 1, n)?;
    if !terms.double_minor_det.is_zero() {
        return Err(IdentityError::InteriorNotSingular);
    }
    let (lhs, rhs) = (terms.p.clone(), terms.q.clone());
    let mut report = ResidualReport::new(IdentityId::SingularInterior, a, lhs, rhs)?.indices(Some(n - 1), Some(n));
    report.terms = Some(terms);
    Ok(report)
}

/// Shape of a generated linear dependence among the first `n - 2` rows,
/// restricted to the first `n - 2` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependentInteriorSpec {
    /// One coefficient per interior row; the entry for `replaced_row` is ignored.
    pub lambda: Vec<Scalar>,
    /// 1-based, in `1..=n-2`.
    pub replaced_row: usize,
}

impl DependentInteriorSpec {
    pub fn validate(&self, n: usize, domain: RingDomain) -> Result<(), IdentityError> {
        let bad = |msg: String| Err(IdentityError::InvalidSpec(msg));
        if n < 3 {
            return bad(format!("order {n} below 3"));
        }
        if self.lambda.len() != n - 2 {
            return bad(format!("expected {} coefficients, got {}", n - 2, self.lambda.len()));
        }
        if !(1..=n - 2).contains(&self.replaced_row) {
            return bad(format!("replaced row {} outside 1..={}", self.replaced_row, n - 2));
        }
        if self.lambda.iter().any(|x| x.domain() != domain) {
            return bad(format!("coefficients must lie in {domain}"));
        }
        if self.lambda.iter().all(Scalar::is_zero) {
            return bad("all coefficients are zero".into());
        }
        Ok(())
    }

    /// Random coefficients and replaced row; never all zero.
    pub fn random<R: Rng>(rng: &mut R, n: usize, domain: RingDomain, entry_bound: u32) -> Self {
        let size = n.saturating_sub(2).max(1);
        let mut lambda: Vec<Scalar> = (0..size).map(|_| random_scalar(rng, domain, entry_bound)).collect();
        if lambda.iter().all(Scalar::is_zero) {
            lambda[0] = Scalar::one(domain);
        }
        let replaced_row = rng.gen_range(1..=size);
        DependentInteriorSpec { lambda, replaced_row }
    }
}

/// Random `n x n` matrix whose row `replaced_row`, on columns `1..=n-2`,
/// equals `sum_{i != replaced_row} lambda_i * row_i` on those columns, so
/// `M(n-1,n; n-1,n) = 0` by construction.
pub fn make_singular_interior(
    n: usize,
    spec: &DependentInteriorSpec,
    domain: RingDomain,
    entry_bound: u32,
    seed: u64,
) -> Result<Matrix, IdentityError> {
    spec.validate(n, domain)?;
    let a = random_matrix(domain, n, entry_bound, seed);
    let target = spec.replaced_row;
    let mut combo = vec![Scalar::zero(domain); n - 2];
    for i in (1..=n - 2).filter(|&i| i != target) {
        let coeff = &spec.lambda[i - 1];
        for (j, slot) in combo.iter_mut().enumerate() {
            *slot = slot.add(&coeff.mul(a.get(i, j + 1))?)?;
        }
    }
    Ok(Matrix::from_fn(domain, n, n, |i, j| {
        if i == target && j <= n - 2 {
            combo[j - 1].clone()
        } else {
            a.get(i, j).clone()
        }
    }))
}

/// Moves row and column `k` to position `n - 1` and `l` to position `n`,
/// keeping every other row and column in its relative order. The same
/// permutation acts on rows and columns, so the determinant is unchanged.
pub fn relocate_to_corner(a: &Matrix, k: usize, l: usize) -> Result<Matrix, IdentityError> {
    let n = a.order()?;
    if k >= l {
        return Err(IdentityError::IndexOrder { k, l });
    }
    if l > n || k == 0 {
        return Err(MatrixError::IndexOutOfRange { index: l, bound: n }.into());
    }
    let order: Vec<usize> = (1..=n).filter(|&i| i != k && i != l).chain([k, l]).collect();
    Ok(a.select(&order, &order))
}

/// `det A(k) = 0` for each `k` in `3..=n-1`.
pub fn a_k_vanishing_check(a: &Matrix) -> Result<Vec<ResidualReport>, IdentityError> {
    let n = require_order(a, 4)?;
    (3..n)
        .map(|k| {
            let lhs = a.build_a_k(k)?.det_bareiss()?;
            Ok(ResidualReport::new(IdentityId::AkVanishing, a, lhs, Scalar::zero(a.domain()))?.indices(Some(k), None))
        })
        .collect()
}

/// `det A(k)` against its expansion along the last column:
///
/// ```text
/// a_{n,n-k} M(n,n-1,n-2; n,n-1,n-2) + sum_{l=3}^{n-1} (-1)^l a_{n-l,n-k} M(n-1,n-2,n-l; n,n-1,n-2)
/// ```
pub fn a_k_expansion_check(a: &Matrix, k: usize) -> Result<ResidualReport, IdentityError> {
    let n = require_order(a, 4)?;
    let lhs = a.build_a_k(k)?.det_bareiss()?;
    let corner = [n, n - 1, n - 2];
    let mut rhs = a.get(n, n - k).mul(&m(a, &corner, &corner)?)?;
    for l in 3..n {
        let term = a.get(n - l, n - k).mul(&m(a, &[n - 1, n - 2, n - l], &corner)?)?;
        rhs = if l % 2 == 0 { rhs.add(&term)? } else { rhs.sub(&term)? };
    }
    Ok(ResidualReport::new(IdentityId::AkExpansion, a, lhs, rhs)?.indices(Some(k), None))
}

/// `det B(l) = 0` for each `l` in `1..=n-1`.
pub fn b_l_vanishing_check(a: &Matrix) -> Result<Vec<ResidualReport>, IdentityError> {
    let n = require_order(a, 2)?;
    (1..n)
        .map(|l| {
            let lhs = a.build_b_l(l)?.det_bareiss()?;
            Ok(ResidualReport::new(IdentityId::BlVanishing, a, lhs, Scalar::zero(a.domain()))?.indices(None, Some(l)))
        })
        .collect()
}

/// `det B(l)` against its expansion along the last row:
/// `sum_{k=0}^{n-1} (-1)^k a_{n-l,n-k} M(n; n-k)`.
pub fn b_l_expansion_check(a: &Matrix, l: usize) -> Result<ResidualReport, IdentityError> {
    let n = require_order(a, 2)?;
    let lhs = a.build_b_l(l)?.det_bareiss()?;
    let mut rhs = Scalar::zero(a.domain());
    for k in 0..n {
        let term = a.get(n - l, n - k).mul(&m(a, &[n], &[n - k])?)?;
        rhs = if k % 2 == 0 { rhs.add(&term)? } else { rhs.sub(&term)? };
    }
    Ok(ResidualReport::new(IdentityId::BlExpansion, a, lhs, rhs)?.indices(None, Some(l)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub domain: RingDomain,
    pub n_min: usize,
    pub n_max: usize,
    pub entry_bound: u32,
    pub trials: usize,
    pub seed: u64,
    /// Harness self-test: adds one to the right-hand side of every
    /// Desnanot-Jacobi check so that it must fail.
    pub corrupt_desnanot_jacobi: bool,
}

impl FuzzConfig {
    pub fn new(domain: RingDomain, n_min: usize, n_max: usize, entry_bound: u32, trials: usize, seed: u64) -> Self {
        FuzzConfig {
            domain,
            n_min,
            n_max,
            entry_bound,
            trials,
            seed,
            corrupt_desnanot_jacobi: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub tallies: BTreeMap<IdentityId, Tally>,
    /// Every report, ordered by trial and then by check.
    pub reports: Vec<ResidualReport>,
}

impl FuzzSummary {
    pub fn failures(&self) -> usize {
        self.tallies.values().map(|t| t.failed).sum()
    }

    pub fn first_failure(&self) -> Option<&ResidualReport> {
        self.reports.iter().find(|r| !r.passed)
    }

    pub fn render_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "domain: {}\nn: {}..={}\nentry bound: {}\ntrials: {}\nseed: {}\n",
            c.domain, c.n_min, c.n_max, c.entry_bound, c.trials, c.seed
        );
        for (id, t) in &self.tallies {
            out.push_str(&format!("{:<22} passed {:>7}  failed {:>5}\n", id.as_str(), t.passed, t.failed));
        }
        out.push_str(&format!("failures: {}\n", self.failures()));
        if let Some(r) = self.first_failure() {
            out.push_str(&format!("first failure: {}\n", r.to_json_line()));
        }
        out
    }
}

const MAX_ALL_PAIRS_ORDER: usize = 5;
const SAMPLED_PAIRS: usize = 5;

fn pairs_for<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    let all: Vec<(usize, usize)> = (1..=n).flat_map(|k| (k + 1..=n).map(move |l| (k, l))).collect();
    if n <= MAX_ALL_PAIRS_ORDER {
        return all;
    }
    let mut picked: Vec<usize> = sample(rng, all.len(), SAMPLED_PAIRS).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| all[i]).collect()
}

fn run_trial(config: &FuzzConfig, trial: usize) -> Result<Vec<ResidualReport>, IdentityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64);
    let n = rng.gen_range(config.n_min..=config.n_max);
    let matrix_seed: u64 = rng.gen();
    let a = random_matrix(config.domain, n, config.entry_bound, matrix_seed);

    let mut out = Vec::new();
    for (k, l) in pairs_for(&mut rng, n) {
        let mut terms = identity_terms(&a, k, l)?;
        if config.corrupt_desnanot_jacobi {
            terms.p = terms.p.add(&Scalar::one(a.domain()))?;
        }
        out.push(check_terms(IdentityId::DesnanotJacobi, &a, k, l, terms)?);
    }
    out.push(corner_identity_check(&a)?);
    if n >= 4 {
        out.push(gamma_lambda_digamma_check(&a)?);
        out.extend(a_k_vanishing_check(&a)?);
        for k in 0..n {
            out.push(a_k_expansion_check(&a, k)?);
        }
    }
    out.extend(b_l_vanishing_check(&a)?);
    for l in 0..n {
        out.push(b_l_expansion_check(&a, l)?);
    }
    for r in &mut out {
        r.seed = Some(matrix_seed);
    }

    let spec = DependentInteriorSpec::random(&mut rng, n, config.domain, config.entry_bound);
    let singular_seed: u64 = rng.gen();
    let s = make_singular_interior(n, &spec, config.domain, config.entry_bound, singular_seed)?;
    out.push(singular_interior_check(&s)?.with_seed(singular_seed));
    Ok(out)
}

/// Seeded campaign over random matrices.
///
/// Trial `t` draws everything from a ChaCha stream selected by `t`, so trials
/// run in parallel and are merged by index; the summary does not depend on
/// scheduling.
pub fn fuzz_identities(config: &FuzzConfig) -> Result<FuzzSummary, IdentityError> {
    if config.n_min < 3 || config.n_min > config.n_max {
        return Err(IdentityError::InvalidConfig(format!(
            "order range {}..={} must be non-empty and start at 3 or above",
            config.n_min, config.n_max
        )));
    }
    if config.trials == 0 {
        return Err(IdentityError::InvalidConfig("trials must be at least 1".into()));
    }
    let per_trial: Vec<Vec<ResidualReport>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<_, _>>()?;
    let reports: Vec<ResidualReport> = per_trial.into_iter().flatten().collect();
    let mut tallies: BTreeMap<IdentityId, Tally> = BTreeMap::new();
    for r in &reports {
        let t = tallies.entry(r.identity).or_default();
        if r.passed {
            t.passed += 1;
        } else {
            t.failed += 1;
        }
    }
    Ok(FuzzSummary {
        config: config.clone(),
        tallies,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: RingDomain = RingDomain::Integers;

    #[test]
    fn identity_matrix_terms() {
        let id4 = Matrix::identity(Z, 4);
        let r = desnanot_jacobi_check(&id4, 1, 2).unwrap();
        assert!(r.passed);
        let t = r.terms.unwrap();
        assert!(t.full_det.is_one() && t.double_minor_det.is_one());
        assert!(t.p.is_one() && t.q.is_zero());

        let c = corner_identity_check(&Matrix::identity(Z, 6)).unwrap();
        let t = c.terms.unwrap();
        assert!(t.p.is_one() && t.q.is_zero() && t.full_det.is_one() && t.double_minor_det.is_one());
    }

    #[test]
    fn argument_validation() {
        let a = Matrix::identity(Z, 4);
        assert_eq!(desnanot_jacobi_check(&a, 2, 2), Err(IdentityError::IndexOrder { k: 2, l: 2 }));
        assert!(desnanot_jacobi_check(&a, 1, 5).is_err());
        assert!(desnanot_jacobi_check(&a, 0, 2).is_err());
        assert!(corner_identity_check(&Matrix::identity(Z, 2)).is_err());
        assert!(gamma_lambda_digamma_check(&Matrix::identity(Z, 3)).is_err());
        assert_eq!(singular_interior_check(&a), Err(IdentityError::InteriorNotSingular));
    }

    #[test]
    fn gamma_on_identity() {
        let r = gamma_lambda_digamma_check(&Matrix::identity(Z, 5)).unwrap();
        assert!(r.passed);
        let t = r.terms.unwrap();
        assert!(t.gamma.unwrap().is_one());
        assert!(t.lambda.unwrap().is_zero());
        assert!(t.digamma.unwrap().is_zero());
    }

    #[test]
    fn spec_validation() {
        let one = Scalar::one(Z);
        let zero = Scalar::zero(Z);
        let ok = DependentInteriorSpec { lambda: vec![one.clone(), zero.clone()], replaced_row: 2 };
        assert!(ok.validate(4, Z).is_ok());
        let all_zero = DependentInteriorSpec { lambda: vec![zero.clone(), zero.clone()], replaced_row: 2 };
        assert!(all_zero.validate(4, Z).is_err());
        let bad_row = DependentInteriorSpec { lambda: vec![one.clone(), zero], replaced_row: 3 };
        assert!(bad_row.validate(4, Z).is_err());
        assert!(ok.validate(5, Z).is_err());
        assert!(ok.validate(4, RingDomain::Rationals).is_err());
    }

    #[test]
    fn duplicate_row_generator() {
        let n = 5;
        let mut lambda = vec![Scalar::zero(Z); n - 2];
        lambda[0] = Scalar::one(Z);
        let spec = DependentInteriorSpec { lambda, replaced_row: 3 };
        let a = make_singular_interior(n, &spec, Z, 9, 8).unwrap();
        assert_eq!(a.row(3)[..n - 2], a.row(1)[..n - 2]);
        assert!(singular_interior_check(&a).unwrap().passed);
    }

    #[test]
    fn relocation_keeps_terms() {
        let a = random_matrix(Z, 6, 9, 12);
        for (k, l) in [(1, 2), (2, 5), (4, 6), (5, 6)] {
            let direct = desnanot_jacobi_check(&a, k, l).unwrap();
            let moved = relocate_to_corner(&a, k, l).unwrap();
            let corner = corner_identity_check(&moved).unwrap();
            assert_eq!(direct.terms, corner.terms, "(k, l) = ({k}, {l})");
            assert_eq!(direct.residual, corner.residual);
        }
    }

    #[test]
    fn corrupted_campaign_fails() {
        let mut config = FuzzConfig::new(Z, 3, 4, 9, 3, 1);
        config.corrupt_desnanot_jacobi = true;
        let s = fuzz_identities(&config).unwrap();
        assert!(s.failures() > 0);
        assert_eq!(s.first_failure().unwrap().identity, IdentityId::DesnanotJacobi);
        assert!(s.render_text().contains("first failure: {"));
    }

    #[test]
    fn json_record_fields() {
        let r = corner_identity_check(&Matrix::identity(Z, 3)).unwrap().with_seed(9);
        assert_eq!(
            r.to_json_line(),
            r#"{"identity_id":"corner","n":3,"domain":"integers","seed":9,"k":2,"l":3,"residual":"0","passed":true}"#
        );
    }
}
