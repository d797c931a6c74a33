//! Dodgson condensation.
//!
//! Level 1 is the input matrix. Level `L + 1` holds the connected 2x2 minors
//! of level `L`, each divided by the matching entry of the interior of level
//! `L - 1` (the first step divides by one). Entry `(r, c)` of level `L` is
//! therefore the determinant of the contiguous `L x L` block of the input
//! starting at `(r, c)`, and level `n` is the 1x1 determinant.
//!
//! A zero divisor breaks the quotient. [`ZeroPolicy`] decides what happens:
//! abort, restart after a row swap, or compute the affected entry directly
//! from its block with Bareiss elimination.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::io::render_body;
use crate::matrix::{Matrix, MatrixError};
use crate::scalar::{RingDomain, Scalar, ScalarError};

/// Levels with at least this many entries are computed in parallel.
const PARALLEL_LEVEL_ENTRIES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroPolicy {
    Fail,
    RowSwap { max_restarts: usize },
    #[default]
    BareissFallback,
}

impl fmt::Display for ZeroPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroPolicy::Fail => f.write_str("fail"),
            ZeroPolicy::RowSwap { max_restarts } => write!(f, "row_swap:{max_restarts}"),
            ZeroPolicy::BareissFallback => f.write_str("bareiss_fallback"),
        }
    }
}

/// `fail`, `bareiss_fallback`, `row_swap` (4 restarts) or `row_swap:<n>` with `n >= 1`.
impl FromStr for ZeroPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        match (name, arg) {
            ("fail", None) => Ok(ZeroPolicy::Fail),
            ("bareiss_fallback", None) => Ok(ZeroPolicy::BareissFallback),
            ("row_swap", None) => Ok(ZeroPolicy::RowSwap { max_restarts: 4 }),
            ("row_swap", Some(n)) => match n.parse::<usize>() {
                Ok(max_restarts) if max_restarts >= 1 => Ok(ZeroPolicy::RowSwap { max_restarts }),
                _ => Err(format!("row_swap restarts must be a count >= 1, got {n:?}")),
            },
            _ => Err(format!(
                "unknown zero policy {s:?} (expected fail, row_swap[:N] or bareiss_fallback)"
            )),
        }
    }
}

/// Where a zero divisor sat: entry `(row, col)` of the interior of `level`.
///
/// The same `(row, col)` is the entry of level `level + 2` that could not be
/// formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroPosition {
    pub level: usize,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for ZeroPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {} pos ({},{})", self.level, self.row, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolicyAction {
    /// Rows of the (current) input matrix that were exchanged before a restart.
    RowSwap { rows: (usize, usize) },
    BareissFallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolicyEvent {
    pub at: ZeroPosition,
    pub action: PolicyAction,
}

impl fmt::Display for PolicyEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.action {
            PolicyAction::RowSwap { .. } => "row_swap",
            PolicyAction::BareissFallback => "bareiss_fallback",
        };
        write!(f, "# policy {name} at {}", self.at)?;
        if let PolicyAction::RowSwap { rows: (a, b) } = self.action {
            write!(f, " rows ({a},{b})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("zero divisor at ({row},{col})")]
    ZeroDivisor { row: usize, col: usize },
    #[error("inexact division at ({row},{col}): {source}")]
    InexactDivision { row: usize, col: usize, source: ScalarError },
    #[error("divisor is {got}x{got}, expected {expected}x{expected}")]
    DivisorShape { expected: usize, got: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CondensationError {
    #[error("zero divisor at {0}")]
    ZeroDivisor(ZeroPosition),
    #[error("row swapping gave up after {max_restarts} restarts; last zero at {last}")]
    RestartsExhausted { max_restarts: usize, last: ZeroPosition },
    #[error("row swap for zero at {0} revisits an earlier matrix")]
    SwapCycle(ZeroPosition),
    /// Over the integers a nonzero divisor always divides exactly, so this
    /// signals a bug in the engine rather than a property of the input.
    #[error("inexact division at {at}: {source}")]
    InexactDivision { at: ZeroPosition, source: ScalarError },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl CondensationError {
    /// True for the outcomes a zero policy is allowed to produce.
    pub fn is_policy_abort(&self) -> bool {
        matches!(
            self,
            CondensationError::ZeroDivisor(_)
                | CondensationError::RestartsExhausted { .. }
                | CondensationError::SwapCycle(_)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondensationTrace {
    /// From the (possibly row-swapped) `n x n` input down to `1 x 1`.
    pub levels: Vec<Matrix>,
    /// `-1` after an odd number of row swaps, else `1`.
    pub sign: i8,
    pub policy_events: Vec<PolicyEvent>,
    pub final_det: Scalar,
}

impl CondensationTrace {
    pub fn domain(&self) -> RingDomain {
        self.final_det.domain()
    }

    /// Events, then each level as `@level i @sign ±1` followed by the matrix
    /// body in file format.
    pub fn render(&self) -> String {
        let mut out = format!("@domain {}\n", self.domain());
        for e in &self.policy_events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        let sign = if self.sign < 0 { "-1" } else { "+1" };
        for (i, level) in self.levels.iter().enumerate() {
            out.push_str(&format!("@level {} @sign {sign}\n", i + 1));
            out.push_str(&render_body(level));
        }
        out
    }
}

enum Cell {
    Value(Scalar),
    Zero,
}

/// One condensation step: entry `(i, j)` of the result is the connected 2x2
/// minor of `current` at `(i, j)` divided by `divisor(i, j)`.
///
/// `divisor` is the interior of the previous level, `(m-1) x (m-1)` for an
/// `m x m` `current`; `None` stands for the all-ones divisor of the first
/// step. The first zero divisor in row-major order is reported.
pub fn condense_step(current: &Matrix, divisor: Option<&Matrix>) -> Result<Matrix, StepError> {
    let cells = step_cells(current, divisor)?;
    let size = current.rows() - 1;
    let mut entries = Vec::with_capacity(cells.len());
    for (idx, cell) in cells.into_iter().enumerate() {
        match cell {
            Cell::Value(v) => entries.push(v),
            Cell::Zero => {
                return Err(StepError::ZeroDivisor {
                    row: idx / size + 1,
                    col: idx % size + 1,
                })
            }
        }
    }
    Ok(Matrix::new(current.domain(), size, size, entries)?)
}

fn step_cells(current: &Matrix, divisor: Option<&Matrix>) -> Result<Vec<Cell>, StepError> {
    let m = current.order()?;
    if m < 2 {
        return Err(MatrixError::OrderTooSmall { n: m, min: 2 }.into());
    }
    let size = m - 1;
    if let Some(d) = divisor {
        let got = d.order()?;
        if got != size {
            return Err(StepError::DivisorShape { expected: size, got });
        }
    }
    let cell = |idx: usize| -> Result<Cell, StepError> {
        let (r, c) = (idx / size, idx % size);
        let minor = current
            .at(r, c)
            .cross(current.at(r + 1, c + 1), current.at(r, c + 1), current.at(r + 1, c))
            .map_err(MatrixError::from)?;
        let Some(d) = divisor else {
            return Ok(Cell::Value(minor));
        };
        let den = d.at(r, c);
        if den.is_zero() {
            return Ok(Cell::Zero);
        }
        minor.div_exact(den).map(Cell::Value).map_err(|source| StepError::InexactDivision {
            row: r + 1,
            col: c + 1,
            source,
        })
    };
    if size * size >= PARALLEL_LEVEL_ENTRIES {
        (0..size * size).into_par_iter().map(cell).collect()
    } else {
        (0..size * size).map(cell).collect()
    }
}

/// Interior of a square matrix: first and last row and column removed.
fn interior(a: &Matrix) -> Matrix {
    let n = a.rows();
    let inner: Vec<usize> = (2..n).collect();
    a.select(&inner, &inner)
}

/// Builds the full pyramid of `a`. A zero divisor is either filled in by
/// Bareiss (when `fallback`) or returned as the first failing position.
fn pyramid(
    a: &Matrix,
    fallback: bool,
    events: &mut Vec<PolicyEvent>,
) -> Result<Vec<Matrix>, CondensationError> {
    let n = a.order()?;
    let mut levels = vec![a.clone()];
    for level in 1..n {
        let current = &levels[level - 1];
        let divisor = (level >= 2).then(|| interior(&levels[level - 2]));
        let at = |row, col| ZeroPosition {
            level: level - 1,
            row,
            col,
        };
        let cells = step_cells(current, divisor.as_ref()).map_err(|e| match e {
            StepError::InexactDivision { row, col, source } => {
                CondensationError::InexactDivision { at: at(row, col), source }
            }
            StepError::Matrix(m) => CondensationError::Matrix(m),
            other => unreachable!("shapes are consistent by construction: {other}"),
        })?;
        let size = n - level;
        let mut entries = Vec::with_capacity(size * size);
        for (idx, cell) in cells.into_iter().enumerate() {
            match cell {
                Cell::Value(v) => entries.push(v),
                Cell::Zero => {
                    let (row, col) = (idx / size + 1, idx % size + 1);
                    if !fallback {
                        return Err(CondensationError::ZeroDivisor(at(row, col)));
                    }
                    // Entry (row, col) of level `level + 1` is the determinant
                    // of the (level + 1)-square block of the input at (row, col).
                    let block: Vec<usize> = (0..=level).collect();
                    let rows: Vec<usize> = block.iter().map(|o| row + o).collect();
                    let cols: Vec<usize> = block.iter().map(|o| col + o).collect();
                    entries.push(a.select(&rows, &cols).det_bareiss()?);
                    events.push(PolicyEvent {
                        at: at(row, col),
                        action: PolicyAction::BareissFallback,
                    });
                }
            }
        }
        levels.push(Matrix::new(a.domain(), size, size, entries)?);
    }
    Ok(levels)
}

/// Row swap applied after a zero divisor at `zero`.
///
/// The divisor entry is the determinant of the block of the input spanning
/// rows `row+1 ..= row+level`; the bottom row of that block is exchanged with
/// the row just below it, which always exists. Every swap flips the sign of
/// the determinant. Returns the swapped matrix and the exchanged row pair.
pub fn apply_row_swap_policy(
    a: &Matrix,
    zero: ZeroPosition,
) -> Result<(Matrix, (usize, usize)), CondensationError> {
    let n = a.order()?;
    let upper = zero.row + zero.level;
    let lower = upper + 1;
    if zero.level == 0 || lower > n {
        return Err(MatrixError::IndexOutOfRange { index: lower, bound: n }.into());
    }
    Ok((a.with_rows_swapped(upper, lower)?, (upper, lower)))
}

/// Determinant by Dodgson condensation.
///
/// The result always equals [`Matrix::det_bareiss`]; only the way zero
/// divisors are handled depends on `policy`.
pub fn dodgson_det(a: &Matrix, policy: ZeroPolicy) -> Result<(Scalar, CondensationTrace), CondensationError> {
    let n = a.order()?;
    if n == 0 {
        return Err(MatrixError::OrderTooSmall { n, min: 1 }.into());
    }
    let mut events = Vec::new();
    let mut work = a.clone();
    let mut negate = false;
    let mut restarts = 0;
    let mut seen = HashSet::from([work.digest()]);
    let levels = loop {
        let fallback = policy == ZeroPolicy::BareissFallback;
        match pyramid(&work, fallback, &mut events) {
            Ok(levels) => break levels,
            Err(CondensationError::ZeroDivisor(at)) => match policy {
                ZeroPolicy::RowSwap { max_restarts } => {
                    if restarts >= max_restarts {
                        return Err(CondensationError::RestartsExhausted { max_restarts, last: at });
                    }
                    let (next, rows) = apply_row_swap_policy(&work, at)?;
                    if !seen.insert(next.digest()) {
                        return Err(CondensationError::SwapCycle(at));
                    }
                    events.push(PolicyEvent {
                        at,
                        action: PolicyAction::RowSwap { rows },
                    });
                    restarts += 1;
                    negate = !negate;
                    work = next;
                }
                _ => return Err(CondensationError::ZeroDivisor(at)),
            },
            Err(other) => return Err(other),
        }
    };
    let top = levels.last().expect("n >= 1 gives at least one level").get(1, 1).clone();
    let final_det = if negate { top.neg() } else { top };
    let trace = CondensationTrace {
        levels,
        sign: if negate { -1 } else { 1 },
        policy_events: events,
        final_det: final_det.clone(),
    };
    Ok((final_det, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random_matrix;

    const Z: RingDomain = RingDomain::Integers;

    fn int(v: i64) -> Scalar {
        Scalar::from_i64(Z, v)
    }

    #[test]
    fn worked_example() {
        let a = Matrix::from_rows(Z, &[[1, 2, 3], [4, 5, 6], [7, 8, 10]]);
        let second = condense_step(&a, None).unwrap();
        assert_eq!(second, Matrix::from_rows(Z, &[[-3, -3], [-3, 2]]));
        let third = condense_step(&second, Some(&Matrix::from_rows(Z, &[[5]]))).unwrap();
        assert_eq!(third, Matrix::from_rows(Z, &[[-3]]));

        let (det, trace) = dodgson_det(&a, ZeroPolicy::Fail).unwrap();
        assert_eq!(det, int(-3));
        assert_eq!(trace.levels.len(), 3);
        assert!(trace.policy_events.is_empty());
        assert_eq!(trace.sign, 1);
    }

    #[test]
    fn all_ones_condenses_to_zero() {
        let ones = Matrix::from_rows(Z, &[[1; 3]; 3]);
        let next = condense_step(&ones, None).unwrap();
        assert!(next.entries().iter().all(Scalar::is_zero));
    }

    #[test]
    fn step_rejects_bad_divisor() {
        let a = Matrix::identity(Z, 3);
        assert!(matches!(
            condense_step(&a, Some(&Matrix::identity(Z, 1))),
            Err(StepError::DivisorShape { expected: 2, got: 1 })
        ));
        assert!(matches!(
            condense_step(&a, Some(&Matrix::from_rows(Z, &[[1, 1], [0, 1]]))),
            Err(StepError::ZeroDivisor { row: 2, col: 1 })
        ));
    }

    #[test]
    fn fail_policy_reports_position() {
        let a = Matrix::from_rows(Z, &[[1, 2, 3], [4, 0, 6], [7, 8, 9]]);
        let err = dodgson_det(&a, ZeroPolicy::Fail).unwrap_err();
        assert_eq!(err, CondensationError::ZeroDivisor(ZeroPosition { level: 1, row: 1, col: 1 }));
        assert!(err.is_policy_abort());
    }

    #[test]
    fn fallback_fills_single_entry() {
        let a = Matrix::from_rows(Z, &[[1, 2, 3], [4, 0, 6], [7, 8, 9]]);
        let (det, trace) = dodgson_det(&a, ZeroPolicy::BareissFallback).unwrap();
        assert_eq!(det, a.det_bareiss().unwrap());
        assert_eq!(trace.policy_events.len(), 1);
        assert_eq!(trace.policy_events[0].action, PolicyAction::BareissFallback);
    }

    #[test]
    fn row_swap_rule() {
        let a = random_matrix(Z, 4, 9, 5);
        let (swapped, rows) = apply_row_swap_policy(&a, ZeroPosition { level: 1, row: 1, col: 1 }).unwrap();
        assert_eq!(rows, (2, 3));
        assert_eq!(swapped, a.with_rows_swapped(2, 3).unwrap());
        assert_eq!(swapped.det_bareiss().unwrap(), a.det_bareiss().unwrap().neg());
    }

    #[test]
    fn row_swap_recovers_isolated_zero() {
        let a = Matrix::from_rows(Z, &[[2, 1, 3, 1], [1, 0, 2, 5], [4, 3, 1, 2], [1, 2, 2, 3]]);
        assert!(dodgson_det(&a, ZeroPolicy::Fail).is_err());
        let (det, trace) = dodgson_det(&a, ZeroPolicy::RowSwap { max_restarts: 4 }).unwrap();
        assert_eq!(det, a.det_bareiss().unwrap());
        let swaps = trace
            .policy_events
            .iter()
            .filter(|e| matches!(e.action, PolicyAction::RowSwap { .. }))
            .count();
        assert!(swaps >= 1);
        assert_eq!(trace.sign, if swaps % 2 == 1 { -1 } else { 1 });
        assert_eq!(trace.levels.last().unwrap().get(1, 1), &trace.levels[0].det_bareiss().unwrap());
    }

    #[test]
    fn zero_matrix_cycles() {
        let zero = Matrix::from_rows(Z, &[[0; 4]; 4]);
        let err = dodgson_det(&zero, ZeroPolicy::RowSwap { max_restarts: 10 }).unwrap_err();
        assert!(matches!(err, CondensationError::SwapCycle(_)), "{err}");
        let (det, _) = dodgson_det(&zero, ZeroPolicy::BareissFallback).unwrap();
        assert!(det.is_zero());
    }

    #[test]
    fn restart_budget_enforced() {
        let zero = Matrix::from_rows(Z, &[[1, 1, 1, 1], [1, 0, 0, 1], [1, 0, 0, 1], [1, 1, 1, 1]]);
        let err = dodgson_det(&zero, ZeroPolicy::RowSwap { max_restarts: 1 }).unwrap_err();
        assert!(err.is_policy_abort(), "{err}");
    }

    #[test]
    fn single_entry_matrix() {
        let a = Matrix::from_rows(Z, &[[-7]]);
        let (det, trace) = dodgson_det(&a, ZeroPolicy::Fail).unwrap();
        assert_eq!(det, int(-7));
        assert_eq!(trace.levels.len(), 1);
    }

    #[test]
    fn policy_names() {
        for p in [ZeroPolicy::Fail, ZeroPolicy::BareissFallback, ZeroPolicy::RowSwap { max_restarts: 3 }] {
            assert_eq!(p.to_string().parse::<ZeroPolicy>().unwrap(), p);
        }
        assert_eq!("row_swap".parse::<ZeroPolicy>().unwrap(), ZeroPolicy::RowSwap { max_restarts: 4 });
        assert!("row_swap:0".parse::<ZeroPolicy>().is_err());
        assert!("retry".parse::<ZeroPolicy>().is_err());
    }

    #[test]
    fn render_lists_levels_and_events() {
        let a = Matrix::from_rows(Z, &[[1, 2, 3], [4, 0, 6], [7, 8, 9]]);
        let (_, trace) = dodgson_det(&a, ZeroPolicy::BareissFallback).unwrap();
        let text = trace.render();
        assert!(text.contains("# policy bareiss_fallback at level 1 pos (1,1)"), "{text}");
        assert_eq!(text.matches("@level").count(), 3);
        assert!(text.contains("@level 3 @sign +1\n1\n"), "{text}");
    }
}
