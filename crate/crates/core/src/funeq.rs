//! The functional-equation checking engine.
//!
//! Each equation is checked at every tuple of free variables drawn from the
//! grid: pairs for the two-variable equations, triples for the associative
//! equation, single points for the periodicity laws. Inner compound
//! arguments such as `f*(x) + f(y)` may leave the grid; the grid constrains
//! only the free variables.
//!
//! Grid checks of claims quantified over all of ℝ can only refute, so a
//! clean pass is reported `Unknown` with a "no counterexample found" note;
//! `Verified` is reserved for claims whose domain was fully enumerated (the
//! grid-scoped integer-intersection probe, for instance). Refutations carry
//! the first failing tuple in lexicographic enumeration order, independent
//! of how the tuple space was partitioned across threads.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::grid::GridSpec;
use crate::partfn::{EvalError, FunctionSpec};
use crate::rational::{int, Rational};
use crate::report::{CheckReport, Witness};
use crate::setalg::SymbolicSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("evaluation failed at {vars}: {source}")]
    Eval { vars: String, source: EvalError },
    #[error("{set} is not a transversal of ℤ in ℚ: {why}")]
    NotATransversal { set: String, why: String },
    #[error("parameter set for {0} must be nonempty")]
    EmptyParamSet(&'static str),
    #[error("parameter set for {0} must contain positive integers")]
    NonPositiveParam(&'static str),
}

/// The functional equations and side conditions the checker knows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationKind {
    /// f(f*(x) + f(y)) = f(y)
    Decomposer,
    /// f(f*(x) + y) = f(y)
    StrongDecomposer,
    /// f(f(x) + y) = f(x + y)
    Canceler,
    /// f(f(x+y) + z) = f(f(x) + f(y+z))
    Associative,
    /// f(f(x) + y) = f(x + f(y))
    MultiplicativeSymmetric,
    /// f(x + 1) = f(x)
    Periodic1,
    /// f(x + 1) = f(x) + 1
    Coperiodic1,
    /// f(x + k) = f(x) + k over a finite set of integers k
    EisenbergShift(Vec<i64>),
    /// f(f(n·x)/n) = f(x) over a finite set of positive integers n
    EisenbergDivision(Vec<u32>),
}

impl EquationKind {
    pub fn eisenberg_shift(mut ks: Vec<i64>) -> Result<Self, CheckError> {
        if ks.is_empty() {
            return Err(CheckError::EmptyParamSet("eisenberg_shift"));
        }
        ks.sort_unstable();
        ks.dedup();
        Ok(EquationKind::EisenbergShift(ks))
    }

    pub fn eisenberg_division(mut ns: Vec<u32>) -> Result<Self, CheckError> {
        if ns.is_empty() {
            return Err(CheckError::EmptyParamSet("eisenberg_div"));
        }
        if ns.contains(&0) {
            return Err(CheckError::NonPositiveParam("eisenberg_div"));
        }
        ns.sort_unstable();
        ns.dedup();
        Ok(EquationKind::EisenbergDivision(ns))
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationKind::Decomposer => write!(f, "decomposer"),
            EquationKind::StrongDecomposer => write!(f, "strong_decomposer"),
            EquationKind::Canceler => write!(f, "canceler"),
            EquationKind::Associative => write!(f, "associative"),
            EquationKind::MultiplicativeSymmetric => write!(f, "mult_symmetric"),
            EquationKind::Periodic1 => write!(f, "periodic1"),
            EquationKind::Coperiodic1 => write!(f, "coperiodic1"),
            EquationKind::EisenbergShift(ks) => {
                write!(f, "eisenberg_shift{{")?;
                for (i, k) in ks.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, "}}")
            }
            EquationKind::EisenbergDivision(ns) => {
                write!(f, "eisenberg_div{{")?;
                for (i, n) in ns.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Which map a range condition speaks about: `f` itself or `f*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapSide {
    Direct,
    Star,
}

impl MapSide {
    fn apply(&self, f: &FunctionSpec, x: &Rational) -> Result<Rational, EvalError> {
        let value = f.eval(x)?;
        Ok(match self {
            MapSide::Direct => value,
            MapSide::Star => x - &value,
        })
    }
}

impl fmt::Display for MapSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSide::Direct => write!(f, "f"),
            MapSide::Star => write!(f, "fstar"),
        }
    }
}

/// A condition a uniqueness scan can filter on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Equation(EquationKind),
    /// Image of the chosen map is contained in the target (refutable on the
    /// grid; containment passes stay unknown).
    RangeContained { side: MapSide, target: SymbolicSet },
    /// Containment plus a coverage probe: every dyadic point of the target
    /// within the grid bounds must have a grid preimage. Together these are
    /// the grid-scoped reading of "the range equals the target".
    RangeEquals { side: MapSide, target: SymbolicSet },
    /// The image meets ℤ somewhere on the grid. A hit verifies the claim
    /// outright; a miss refutes the grid-scoped claim.
    MeetsIntegers { side: MapSide },
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Equation(eq) => write!(f, "{eq}"),
            Condition::RangeContained { side, target } => write!(f, "range_in({side},{target})"),
            Condition::RangeEquals { side, target } => write!(f, "range_eq({side},{target})"),
            Condition::MeetsIntegers { side } => write!(f, "meets_z({side})"),
        }
    }
}

/// One tuple's outcome inside the parallel scan.
enum Anomaly {
    Mismatch(Witness),
    Eval(Vec<(String, Rational)>, EvalError),
}

fn vars_string(vars: &[(String, Rational)]) -> String {
    vars.iter()
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Scans ranks `0..total` in parallel and returns the lexicographically
/// first anomaly; partitioning is arbitrary but the winner is rank-minimal,
/// so output is independent of scheduling.
fn first_anomaly<F>(total: u64, tuple_fn: F) -> Option<(u64, Anomaly)>
where
    F: Fn(u64) -> Option<Anomaly> + Sync,
{
    let total = usize::try_from(total).expect("tuple space too large");
    (0..total)
        .into_par_iter()
        .with_min_len(2048)
        .find_map_first(|rank| tuple_fn(rank as u64).map(|a| (rank as u64, a)))
}

fn finish(
    report: CheckReport,
    total: u64,
    outcome: Option<(u64, Anomaly)>,
) -> Result<CheckReport, CheckError> {
    match outcome {
        None => Ok(report.no_counterexample(total)),
        Some((rank, Anomaly::Mismatch(witness))) => Ok(report.refuted(witness, rank + 1)),
        Some((_, Anomaly::Eval(vars, source))) => Err(CheckError::Eval {
            vars: vars_string(&vars),
            source,
        }),
    }
}

fn eval_all(f: &FunctionSpec, points: &[Rational]) -> Result<Vec<Rational>, CheckError> {
    points
        .iter()
        .map(|x| {
            f.eval(x).map_err(|source| CheckError::Eval {
                vars: format!("x={x}"),
                source,
            })
        })
        .collect()
}

/// Both sides of a two-variable equation, given the values of `f` at the
/// free variables.
fn pair_sides(
    eq: &EquationKind,
    f: &FunctionSpec,
    x: &Rational,
    y: &Rational,
    fx: &Rational,
    fy: &Rational,
) -> Result<(Rational, Rational), EvalError> {
    Ok(match eq {
        EquationKind::Decomposer => (f.eval(&(&(x - fx) + fy))?, fy.clone()),
        EquationKind::StrongDecomposer => (f.eval(&(&(x - fx) + y))?, fy.clone()),
        EquationKind::Canceler => (f.eval(&(fx + y))?, f.eval(&(x + y))?),
        EquationKind::MultiplicativeSymmetric => (f.eval(&(fx + y))?, f.eval(&(x + fy))?),
        _ => unreachable!("not a two-variable equation"),
    })
}

fn triple_sides(
    f: &FunctionSpec,
    x: &Rational,
    y: &Rational,
    z: &Rational,
    fx: &Rational,
) -> Result<(Rational, Rational), EvalError> {
    let lhs = f.eval(&(&f.eval(&(x + y))? + z))?;
    let rhs = f.eval(&(fx + &f.eval(&(y + z))?))?;
    Ok((lhs, rhs))
}

fn single_sides(
    eq: &EquationKind,
    f: &FunctionSpec,
    x: &Rational,
    fx: &Rational,
) -> Result<(Rational, Rational), EvalError> {
    let shifted = f.eval(&(x + &int(1)))?;
    Ok(match eq {
        EquationKind::Periodic1 => (shifted, fx.clone()),
        EquationKind::Coperiodic1 => (shifted, fx + &int(1)),
        _ => unreachable!("not a one-variable equation"),
    })
}

fn mismatch(vars: Vec<(&str, Rational)>, lhs: Rational, rhs: Rational) -> Option<Anomaly> {
    if lhs == rhs {
        None
    } else {
        Some(Anomaly::Mismatch(Witness::equation(vars, lhs, rhs)))
    }
}

fn anomaly_of(
    vars: Vec<(&str, Rational)>,
    result: Result<(Rational, Rational), EvalError>,
) -> Option<Anomaly> {
    match result {
        Ok((lhs, rhs)) => mismatch(vars, lhs, rhs),
        Err(source) => Some(Anomaly::Eval(
            vars.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
            source,
        )),
    }
}

/// Checks one equation for one function over the grid.
pub fn check_equation(
    eq: &EquationKind,
    f: &FunctionSpec,
    grid: &GridSpec,
) -> Result<CheckReport, CheckError> {
    let report = CheckReport::new(eq.to_string(), f.to_string()).with_grid(grid.summary());
    match eq {
        EquationKind::Decomposer
        | EquationKind::StrongDecomposer
        | EquationKind::Canceler
        | EquationKind::MultiplicativeSymmetric => {
            if let Some(rows) = grid.sample_tuples(2) {
                let total = rows.len() as u64;
                let outcome = first_anomaly(total, |rank| {
                    let row = &rows[rank as usize];
                    let (x, y) = (&row[0], &row[1]);
                    let sides = f
                        .eval(x)
                        .and_then(|fx| Ok((fx, f.eval(y)?)))
                        .and_then(|(fx, fy)| pair_sides(eq, f, x, y, &fx, &fy));
                    anomaly_of(vec![("x", x.clone()), ("y", y.clone())], sides)
                });
                return finish(report, total, outcome);
            }
            let points = grid.points();
            let fvals = eval_all(f, &points)?;
            let n = points.len() as u64;
            let total = n * n;
            let outcome = first_anomaly(total, |rank| {
                let (i, j) = ((rank / n) as usize, (rank % n) as usize);
                let (x, y) = (&points[i], &points[j]);
                let sides = pair_sides(eq, f, x, y, &fvals[i], &fvals[j]);
                anomaly_of(vec![("x", x.clone()), ("y", y.clone())], sides)
            });
            finish(report, total, outcome)
        }
        EquationKind::Associative => {
            if let Some(rows) = grid.sample_tuples(3) {
                let total = rows.len() as u64;
                let outcome = first_anomaly(total, |rank| {
                    let row = &rows[rank as usize];
                    let (x, y, z) = (&row[0], &row[1], &row[2]);
                    let sides = f
                        .eval(x)
                        .and_then(|fx| triple_sides(f, x, y, z, &fx));
                    anomaly_of(
                        vec![("x", x.clone()), ("y", y.clone()), ("z", z.clone())],
                        sides,
                    )
                });
                return finish(report, total, outcome);
            }
            let points = grid.points();
            let fvals = eval_all(f, &points)?;
            let n = points.len() as u64;
            let total = n * n * n;
            let outcome = first_anomaly(total, |rank| {
                let i = (rank / (n * n)) as usize;
                let j = ((rank / n) % n) as usize;
                let k = (rank % n) as usize;
                let (x, y, z) = (&points[i], &points[j], &points[k]);
                let sides = triple_sides(f, x, y, z, &fvals[i]);
                anomaly_of(
                    vec![("x", x.clone()), ("y", y.clone()), ("z", z.clone())],
                    sides,
                )
            });
            finish(report, total, outcome)
        }
        EquationKind::Periodic1 | EquationKind::Coperiodic1 => {
            let points = grid.points();
            let total = points.len() as u64;
            let outcome = first_anomaly(total, |rank| {
                let x = &points[rank as usize];
                let sides = f.eval(x).and_then(|fx| single_sides(eq, f, x, &fx));
                anomaly_of(vec![("x", x.clone())], sides)
            });
            finish(report, total, outcome)
        }
        EquationKind::EisenbergShift(ks) => {
            let points = grid.points();
            let params: Vec<Rational> = ks.iter().map(|k| int(*k)).collect();
            let m = params.len() as u64;
            let total = points.len() as u64 * m;
            let outcome = first_anomaly(total, |rank| {
                let x = &points[(rank / m) as usize];
                let k = &params[(rank % m) as usize];
                let sides = f
                    .eval(x)
                    .and_then(|fx| Ok((f.eval(&(x + k))?, &fx + k)));
                anomaly_of(vec![("x", x.clone()), ("k", k.clone())], sides)
            });
            finish(report, total, outcome)
        }
        EquationKind::EisenbergDivision(ns) => {
            let points = grid.points();
            let params: Vec<Rational> = ns.iter().map(|n| int(i64::from(*n))).collect();
            let m = params.len() as u64;
            let total = points.len() as u64 * m;
            let outcome = first_anomaly(total, |rank| {
                let x = &points[(rank / m) as usize];
                let n_val = &params[(rank % m) as usize];
                let sides = (|| {
                    let inner = f.eval(&(x * n_val))?;
                    let lhs = f.eval(&(&inner / n_val))?;
                    Ok((lhs, f.eval(x)?))
                })();
                anomaly_of(vec![("x", x.clone()), ("n", n_val.clone())], sides)
            });
            finish(report, total, outcome)
        }
    }
}

/// Containment of the image of `f` (or `f*`) in a target set.
///
/// Containment violations refute; a clean pass stays `Unknown` because
/// surjectivity onto the target is not decidable on a grid. The note also
/// records whether the image meets ℤ anywhere on the grid.
pub fn check_range_condition(
    f: &FunctionSpec,
    grid: &GridSpec,
    target: &SymbolicSet,
    side: MapSide,
) -> Result<CheckReport, CheckError> {
    let report = CheckReport::new(
        Condition::RangeContained {
            side,
            target: target.clone(),
        }
        .to_string(),
        f.to_string(),
    )
    .with_grid(grid.summary());
    let points = grid.points();
    let mut integer_hit: Option<Rational> = None;
    for (idx, x) in points.iter().enumerate() {
        let fx = f.eval(x).map_err(|source| CheckError::Eval {
            vars: format!("x={x}"),
            source,
        })?;
        if integer_hit.is_none() && fx.is_integer() {
            integer_hit = Some(x.clone());
        }
        let value = match side {
            MapSide::Direct => fx,
            MapSide::Star => x - &fx,
        };
        if !target.contains(&value) {
            return Ok(report
                .refuted(
                    Witness::membership(vec![("x", x.clone())], value),
                    (idx + 1) as u64,
                )
                .with_note("image point outside the target".to_string()));
        }
    }
    let meets = match &integer_hit {
        Some(x) => format!("image meets ℤ on the grid (first at x={x})"),
        None => "image ∩ ℤ = ∅ on the grid".to_string(),
    };
    Ok(report.no_counterexample(points.len() as u64).with_note(format!(
        "containment holds at every grid point; surjectivity onto the target is not decided on a grid; {meets}"
    )))
}

/// Dyadic probe points of the target inside the grid bounds: `k/2^j` with
/// `2^j ≤ D` and `|k/2^j| ≤ R`, filtered by membership.
fn dyadic_probes(target: &SymbolicSet, grid: &GridSpec) -> Vec<Rational> {
    let mut probes = std::collections::BTreeSet::new();
    let mut den: i64 = 1;
    while den <= i64::from(grid.denom_bound()) {
        let bound = (grid.range_bound() * int(den)).floor();
        let mut k = -bound.clone();
        while k <= bound {
            let candidate = &k / &int(den);
            if target.contains(&candidate) {
                probes.insert(candidate);
            }
            k = k + int(1);
        }
        den *= 2;
    }
    probes.into_iter().collect()
}

fn check_condition_inner(
    cond: &Condition,
    f: &FunctionSpec,
    grid: &GridSpec,
) -> Result<CheckReport, CheckError> {
    match cond {
        Condition::Equation(eq) => check_equation(eq, f, grid),
        Condition::RangeContained { side, target } => {
            check_range_condition(f, grid, target, *side)
        }
        Condition::RangeEquals { side, target } => {
            let contained = check_range_condition(f, grid, target, *side)?;
            if contained.is_refuted() {
                let mut report = contained;
                report.condition = cond.to_string();
                return Ok(report);
            }
            let report =
                CheckReport::new(cond.to_string(), f.to_string()).with_grid(grid.summary());
            let points = grid.points();
            let mut image = std::collections::BTreeSet::new();
            for x in &points {
                image.insert(side.apply(f, x).map_err(|source| CheckError::Eval {
                    vars: format!("x={x}"),
                    source,
                })?);
            }
            let probes = dyadic_probes(target, grid);
            let checked = points.len() as u64;
            for (idx, t) in probes.iter().enumerate() {
                if !image.contains(t) {
                    return Ok(report
                        .refuted(
                            Witness::membership(vec![("target_point", t.clone())], t.clone()),
                            checked + (idx + 1) as u64,
                        )
                        .with_note(
                            "target point has no preimage on the grid; the image cannot equal the target"
                                .to_string(),
                        ));
                }
            }
            Ok(report
                .no_counterexample(checked + probes.len() as u64)
                .with_note(format!(
                    "containment holds and all {} dyadic target probes have grid preimages; range equality is not decided on a grid",
                    probes.len()
                )))
        }
        Condition::MeetsIntegers { side } => {
            let report = CheckReport::new(cond.to_string(), f.to_string()).with_grid(grid.summary());
            let points = grid.points();
            for (idx, x) in points.iter().enumerate() {
                let value = side.apply(f, x).map_err(|source| CheckError::Eval {
                    vars: format!("x={x}"),
                    source,
                })?;
                if value.is_integer() {
                    return Ok(report
                        .verified((idx + 1) as u64)
                        .with_note(format!("image meets ℤ: value {value} attained at x={x}")));
                }
            }
            Ok(report
                .refuted(
                    Witness::membership(vec![("points_scanned", int(points.len() as i64))], int(0)),
                    points.len() as u64,
                )
                .with_note("no integer value attained at any grid point".to_string()))
        }
    }
}

/// Checks a single scan condition.
pub fn check_condition(
    cond: &Condition,
    f: &FunctionSpec,
    grid: &GridSpec,
) -> Result<CheckReport, CheckError> {
    check_condition_inner(cond, f, grid)
}

/// A candidate's scan outcome: all condition reports plus whether it
/// survived (zero refutations).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ScanEntry {
    pub candidate: FunctionSpec,
    pub survives: bool,
    pub reports: Vec<CheckReport>,
}

/// Filters candidates to those with zero refutations across all conditions.
/// Every condition is run for every candidate so the reports tell the whole
/// story; an empty condition list keeps every candidate.
pub fn uniqueness_scan(
    candidates: &[FunctionSpec],
    conditions: &[Condition],
    grid: &GridSpec,
) -> Result<Vec<ScanEntry>, CheckError> {
    candidates
        .iter()
        .map(|candidate| {
            let reports = conditions
                .iter()
                .map(|cond| check_condition(cond, candidate, grid))
                .collect::<Result<Vec<_>, _>>()?;
            let survives = reports.iter().all(|r| !r.is_refuted());
            Ok(ScanEntry {
                candidate: candidate.clone(),
                survives,
                reports,
            })
        })
        .collect()
}

/// The integer-valued shift/division characterization: `f` must be
/// integer-valued on the grid (checked first; a non-integer value refutes
/// the premise), then `f(x+k) = f(x)+k` and `f(f(n·x)/n) = f(x)` are checked
/// over the grid against both parameter sets.
pub fn eisenberg_check(
    f: &FunctionSpec,
    grid: &GridSpec,
    ks: &[i64],
    ns: &[u32],
) -> Result<CheckReport, CheckError> {
    let shift = EquationKind::eisenberg_shift(ks.to_vec())?;
    let division = EquationKind::eisenberg_division(ns.to_vec())?;
    let condition = format!("eisenberg({shift}, {division})");
    let report = CheckReport::new(condition, f.to_string()).with_grid(grid.summary());

    let points = grid.points();
    for (idx, x) in points.iter().enumerate() {
        let value = f.eval(x).map_err(|source| CheckError::Eval {
            vars: format!("x={x}"),
            source,
        })?;
        if !value.is_integer() {
            return Ok(report
                .refuted(
                    Witness::membership(vec![("x", x.clone())], value),
                    (idx + 1) as u64,
                )
                .with_note("premise violated: f is not integer-valued on the grid".to_string()));
        }
    }
    let premise_count = points.len() as u64;

    let shift_report = check_equation(&shift, f, grid)?;
    if shift_report.is_refuted() {
        return Ok(report
            .refuted(
                shift_report.witness.expect("refuted reports carry witnesses"),
                premise_count + shift_report.points_checked,
            )
            .with_note("shift condition fails".to_string()));
    }
    let division_report = check_equation(&division, f, grid)?;
    if division_report.is_refuted() {
        return Ok(report
            .refuted(
                division_report
                    .witness
                    .expect("refuted reports carry witnesses"),
                premise_count + shift_report.points_checked + division_report.points_checked,
            )
            .with_note("division condition fails".to_string()));
    }
    Ok(report.no_counterexample(
        premise_count + shift_report.points_checked + division_report.points_checked,
    ))
}

/// The projection division-compatibility harness for `ℚ = ℤ ∔ A`.
///
/// `A` must be a unit-length half-open rational interval — those are exactly
/// the sets of the recognized transversal family — and the identity
/// `P(P(x)/n) = P(x/n)` is checked for the integer projection `P` of the
/// factorization, over grid × ns.
pub fn division_projection_check(
    a: &SymbolicSet,
    grid: &GridSpec,
    ns: &[u32],
) -> Result<CheckReport, CheckError> {
    let division = EquationKind::eisenberg_division(ns.to_vec())?;
    let not_transversal = |why: &str| CheckError::NotATransversal {
        set: a.to_string(),
        why: why.to_string(),
    };
    let SymbolicSet::Interval(i) = a else {
        return Err(not_transversal("only rational intervals are recognized"));
    };
    if !i.is_bounded() {
        return Err(not_transversal("interval is unbounded"));
    }
    if i.length() != Some(int(1)) {
        return Err(not_transversal("interval length is not 1"));
    }
    if !i.is_half_open() {
        return Err(not_transversal(
            "interval must be half-open to give unique representations",
        ));
    }
    let alpha = i.lo().expect("bounded").clone();
    // P_ℤ for ℚ = ℤ ∔ [α, α+1) is ⌊x − α⌋; for ℚ = ℤ ∔ (α, α+1] it is
    // ⌈x − α⌉ − 1.
    let lo_closed = i.lo_closed();
    let project = move |x: &Rational| -> Rational {
        if lo_closed {
            (x - &alpha).floor()
        } else {
            (x - &alpha).ceil() - int(1)
        }
    };

    let condition = format!("projection_division({division})");
    let report = CheckReport::new(condition, a.to_string()).with_grid(grid.summary());
    let points = grid.points();
    let params: Vec<Rational> = match &division {
        EquationKind::EisenbergDivision(ns) => ns.iter().map(|n| int(i64::from(*n))).collect(),
        _ => unreachable!(),
    };
    let m = params.len() as u64;
    let total = points.len() as u64 * m;
    let outcome = first_anomaly(total, |rank| {
        let x = &points[(rank / m) as usize];
        let n_val = &params[(rank % m) as usize];
        let lhs = project(&(&project(x) / n_val));
        let rhs = project(&(x / n_val));
        mismatch(vec![("x", x.clone()), ("n", n_val.clone())], lhs, rhs)
    });
    finish(report, total, outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partfn::MuTable;
    use crate::rational::rat;
    use crate::report::Verdict;
    use crate::setalg::RatInterval;

    fn small_grid() -> GridSpec {
        GridSpec::exhaustive(int(2), 4).unwrap()
    }

    fn check(eq: EquationKind, f: &FunctionSpec) -> CheckReport {
        check_equation(&eq, f, &small_grid()).unwrap()
    }

    #[test]
    fn decomposer_families_have_no_counterexamples() {
        let decomposers = [
            FunctionSpec::Floor,
            FunctionSpec::Ceil,
            FunctionSpec::Frac,
            FunctionSpec::ShiftedFloor(rat(1, 2)),
            FunctionSpec::ShiftedCeil(rat(-2, 3)),
            FunctionSpec::ShiftedFrac(rat(1, 4)),
            FunctionSpec::bfloor(rat(3, 2)).unwrap(),
            FunctionSpec::bceil(int(-2)).unwrap(),
            FunctionSpec::shifted_bfloor(rat(3, 2), rat(1, 3)).unwrap(),
            FunctionSpec::FloorPlus(rat(5, 3)),
        ];
        for f in &decomposers {
            let report = check(EquationKind::Decomposer, f);
            assert_eq!(report.verdict, Verdict::Unknown, "f={f}");
            assert!(report.witness.is_none(), "f={f}");
        }
    }

    #[test]
    fn linear_half_is_refuted_with_replaying_witness() {
        let f = FunctionSpec::Linear(rat(1, 2));
        let grid = GridSpec::exhaustive(int(2), 1).unwrap();
        let report = check_equation(&EquationKind::Decomposer, &f, &grid).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        let w = report.witness.unwrap();
        // First failing pair in lexicographic order over {-2,-1,0,1,2}².
        assert_eq!(w.vars[0].1, int(-2));
        assert_eq!(w.vars[1].1, int(-1));
        // The witness replays: recompute both sides from the spec.
        let x = &w.vars[0].1;
        let y = &w.vars[1].1;
        let fx = f.eval(x).unwrap();
        let fy = f.eval(y).unwrap();
        let lhs = f.eval(&(&(x - &fx) + &fy)).unwrap();
        assert_eq!(lhs, w.lhs);
        assert_eq!(fy, w.rhs.unwrap());
        assert_ne!(w.lhs, fy);

        // The expository pair (2, 0) fails the same way.
        let lhs = f.eval(&(&(int(2) - f.eval(&int(2)).unwrap()) + f.eval(&int(0)).unwrap()));
        assert_eq!(lhs.unwrap(), rat(1, 2));
        assert_eq!(f.eval(&int(0)).unwrap(), int(0));
    }

    #[test]
    fn floor_equation_profile() {
        // Floor is a decomposer and multiplicative-symmetric, but its star
        // range [0,1) is not a subgroup: the strong, canceler, and
        // associative equations all fail at carry points.
        assert_eq!(
            check(EquationKind::Decomposer, &FunctionSpec::Floor).verdict,
            Verdict::Unknown
        );
        assert_eq!(
            check(EquationKind::MultiplicativeSymmetric, &FunctionSpec::Floor).verdict,
            Verdict::Unknown
        );
        let strong = check(EquationKind::StrongDecomposer, &FunctionSpec::Floor);
        assert_eq!(strong.verdict, Verdict::Refuted);
        let canceler = check(EquationKind::Canceler, &FunctionSpec::Floor);
        assert_eq!(canceler.verdict, Verdict::Refuted);
        // ⌊⌊x⌋+y⌋ = −1 ≠ 0 = ⌊x+y⌋ at the witness: replay it.
        let w = canceler.witness.unwrap();
        let (x, y) = (&w.vars[0].1, &w.vars[1].1);
        let lhs = (x.floor() + y.clone()).floor();
        let rhs = (x + y).floor();
        assert_eq!((lhs.clone(), rhs.clone()), (w.lhs, w.rhs.unwrap()));
        assert_ne!(lhs, rhs);
        let associative = check(EquationKind::Associative, &FunctionSpec::Floor);
        assert_eq!(associative.verdict, Verdict::Refuted);
        // Explicit associative counterexample inside the default bounds.
        let f = FunctionSpec::Floor;
        let (x, y, z) = (rat(15, 16), rat(1, 8), rat(1, 16));
        let lhs = f.eval(&(f.eval(&(&x + &y)).unwrap() + z.clone())).unwrap();
        let rhs = f
            .eval(&(f.eval(&x).unwrap() + f.eval(&(&y + &z)).unwrap()))
            .unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn frac_satisfies_the_whole_bundle() {
        for eq in [
            EquationKind::Decomposer,
            EquationKind::StrongDecomposer,
            EquationKind::Canceler,
            EquationKind::Associative,
            EquationKind::MultiplicativeSymmetric,
            EquationKind::Periodic1,
        ] {
            let report = check(eq.clone(), &FunctionSpec::Frac);
            assert_eq!(report.verdict, Verdict::Unknown, "eq={eq}");
        }
    }

    #[test]
    fn equivalence_bundle_agrees_for_subgroup_star_ranges() {
        // Functions whose star range is verified to lie in a lattice bℤ:
        // the decomposer, strong decomposer, and canceler checks must agree.
        let members: Vec<(FunctionSpec, Rational)> = vec![
            (FunctionSpec::Frac, int(1)),
            (FunctionSpec::bfrac(rat(3, 2)).unwrap(), rat(3, 2)),
            (FunctionSpec::bfrac(int(-2)).unwrap(), int(-2)),
            (FunctionSpec::Linear(rat(1, 2)), rat(1, 1)),
        ];
        let grid = small_grid();
        for (f, step) in &members {
            let lattice = SymbolicSet::lattice(int(0), step.clone()).unwrap();
            let contained = check_range_condition(f, &grid, &lattice, MapSide::Star).unwrap();
            if f == &FunctionSpec::Linear(rat(1, 2)) {
                // x/2 is its own star; its range is not inside ℤ, so this
                // member exercises the refuted-agreement case instead.
                assert_eq!(contained.verdict, Verdict::Refuted);
            } else {
                assert!(!contained.is_refuted());
            }
            let verdicts: Vec<Verdict> = [
                EquationKind::Decomposer,
                EquationKind::StrongDecomposer,
                EquationKind::Canceler,
            ]
            .iter()
            .map(|eq| check_equation(eq, f, &grid).unwrap().verdict)
            .collect();
            assert_eq!(verdicts[0], verdicts[1], "f={f}");
            assert_eq!(verdicts[1], verdicts[2], "f={f}");
        }
    }

    #[test]
    fn periodicity_checks() {
        let table = MuTable::new(vec![(int(0), int(0))], Some(int(1))).unwrap();
        let coperiodic = FunctionSpec::MuCoperiodic(table.clone());
        let report = check(EquationKind::Coperiodic1, &coperiodic);
        assert_eq!(report.verdict, Verdict::Unknown);

        let periodic = FunctionSpec::MuPeriodic(table);
        let report = check(EquationKind::Periodic1, &periodic);
        assert_eq!(report.verdict, Verdict::Unknown);

        // Integer-valued coperiodic functions are decomposers.
        let report = check(EquationKind::Decomposer, &coperiodic);
        assert_eq!(report.verdict, Verdict::Unknown);

        let report = check(EquationKind::Periodic1, &FunctionSpec::Floor);
        assert_eq!(report.verdict, Verdict::Refuted);
    }

    #[test]
    fn mu_gap_propagates_with_the_offending_point() {
        let table = MuTable::new(vec![(int(0), int(0))], None).unwrap();
        let f = FunctionSpec::MuPeriodic(table);
        let err = check_equation(&EquationKind::Decomposer, &f, &small_grid()).unwrap_err();
        match err {
            CheckError::Eval { vars, source } => {
                assert!(!vars.is_empty());
                assert!(matches!(source, EvalError::MuUndefined(_)));
            }
            other => panic!("expected eval error, got {other}"),
        }
    }

    #[test]
    fn range_condition_examples() {
        let grid = small_grid();
        let unit = SymbolicSet::Interval(RatInterval::unit());

        let report =
            check_range_condition(&FunctionSpec::Floor, &grid, &unit, MapSide::Star).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);
        assert!(report.note.as_deref().unwrap().contains("meets ℤ"));

        let shifted = FunctionSpec::ShiftedFloor(rat(1, 2));
        let report = check_range_condition(&shifted, &grid, &unit, MapSide::Star).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);
        assert!(report.note.as_deref().unwrap().contains("∅"));

        let linear = FunctionSpec::Linear(rat(1, 2));
        let wide = GridSpec::default_exhaustive();
        let report = check_range_condition(&linear, &wide, &unit, MapSide::Star).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        let w = report.witness.unwrap();
        // x − x/2 = x/2 leaves [0,1) first at the most negative grid point.
        assert_eq!(w.vars[0].1, int(-4));
        assert_eq!(w.lhs, int(-2));
        // The expository witness x = 4 also violates.
        assert!(!unit.contains(&(int(4) - linear.eval(&int(4)).unwrap())));
    }

    #[test]
    fn range_equality_filters_the_identity() {
        // The identity has star range {0} ⊆ [0,1), so containment passes,
        // but the probe 1/2 has no preimage.
        let unit = SymbolicSet::Interval(RatInterval::unit());
        let cond = Condition::RangeEquals {
            side: MapSide::Star,
            target: unit,
        };
        let report = check_condition(&cond, &FunctionSpec::Identity, &small_grid()).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        assert!(report.note.as_deref().unwrap().contains("no preimage"));

        let report = check_condition(&cond, &FunctionSpec::Floor, &small_grid()).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);
    }

    #[test]
    fn meets_integers_condition() {
        let cond = Condition::MeetsIntegers {
            side: MapSide::Direct,
        };
        let report = check_condition(&cond, &FunctionSpec::Floor, &small_grid()).unwrap();
        assert_eq!(report.verdict, Verdict::Verified);

        let shifted = FunctionSpec::ShiftedFloor(rat(1, 2));
        let report = check_condition(&cond, &shifted, &small_grid()).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
    }

    #[test]
    fn scan_with_no_conditions_keeps_everyone() {
        let candidates = vec![FunctionSpec::Floor, FunctionSpec::Linear(int(1))];
        let entries = uniqueness_scan(&candidates, &[], &small_grid()).unwrap();
        assert!(entries.iter().all(|e| e.survives));
    }

    #[test]
    fn eisenberg_examples() {
        let grid = small_grid();
        let ks: Vec<i64> = (-2..=2).collect();
        let ns = [1u32, 2, 3];

        let report = eisenberg_check(&FunctionSpec::Floor, &grid, &ks, &ns).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);
        let report = eisenberg_check(&FunctionSpec::Ceil, &grid, &ks, &ns).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);

        let perturbed = FunctionSpec::FloorPlus(int(1));
        let report = eisenberg_check(&perturbed, &grid, &ks, &ns).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        let w = report.witness.unwrap();
        // Witness replays through the division condition.
        let x = &w.vars[0].1;
        let n = &w.vars[1].1;
        let lhs = perturbed
            .eval(&(perturbed.eval(&(x * n)).unwrap() / n.clone()))
            .unwrap();
        assert_eq!(lhs, w.lhs);
        assert_ne!(w.lhs, w.rhs.unwrap());

        // Non-integer-valued functions refute the premise.
        let report = eisenberg_check(&FunctionSpec::ShiftedFloor(rat(1, 2)), &grid, &ks, &ns)
            .unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        assert!(report.note.as_deref().unwrap().contains("premise"));

        assert!(matches!(
            eisenberg_check(&FunctionSpec::Floor, &grid, &[], &ns),
            Err(CheckError::EmptyParamSet(_))
        ));
        assert!(matches!(
            eisenberg_check(&FunctionSpec::Floor, &grid, &ks, &[0]),
            Err(CheckError::NonPositiveParam(_))
        ));
    }

    #[test]
    fn division_projection_examples() {
        let grid = small_grid();
        let ns = [1u32, 2, 3, 4];

        let unit = SymbolicSet::Interval(RatInterval::unit());
        let report = division_projection_check(&unit, &grid, &ns).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);

        let neg_unit =
            SymbolicSet::Interval(RatInterval::half_open_upper(int(-1), int(0)).unwrap());
        let report = division_projection_check(&neg_unit, &grid, &ns).unwrap();
        assert_eq!(report.verdict, Verdict::Unknown);

        let shifted =
            SymbolicSet::Interval(RatInterval::half_open(rat(1, 2), rat(3, 2)).unwrap());
        let report = division_projection_check(&shifted, &grid, &ns).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        let w = report.witness.unwrap();
        // Replay: P(x) = ⌊x − 1/2⌋ breaks the identity at the witness.
        let p = |x: &Rational| (x - &rat(1, 2)).floor();
        let (x, n) = (&w.vars[0].1, &w.vars[1].1);
        assert_ne!(p(&(p(x) / n.clone())), p(&(x / n.clone())));

        let too_long =
            SymbolicSet::Interval(RatInterval::half_open(int(0), int(2)).unwrap());
        assert!(matches!(
            division_projection_check(&too_long, &grid, &ns),
            Err(CheckError::NotATransversal { .. })
        ));
        let closed = SymbolicSet::Interval(RatInterval::closed(int(0), int(1)).unwrap());
        assert!(matches!(
            division_projection_check(&closed, &grid, &ns),
            Err(CheckError::NotATransversal { .. })
        ));
    }

    #[test]
    fn reports_are_deterministic_across_runs() {
        let f = FunctionSpec::Linear(rat(1, 3));
        let grid = GridSpec::exhaustive(int(2), 6).unwrap();
        let a = check_equation(&EquationKind::Decomposer, &f, &grid).unwrap();
        let b = check_equation(&EquationKind::Decomposer, &f, &grid).unwrap();
        assert_eq!(a, b);

        let sampled = GridSpec::sampled(int(4), 16, 300, 99).unwrap();
        let a = check_equation(&EquationKind::Canceler, &FunctionSpec::Floor, &sampled).unwrap();
        let b = check_equation(&EquationKind::Canceler, &FunctionSpec::Floor, &sampled).unwrap();
        assert_eq!(a, b);
    }
}
