//! Symbolic subsets of ℝ with exact rational membership, direct-sum
//! verification, parting projections, and the interval-factor classifier.
//!
//! Direct sums are verified on three tiers, recorded in the verdict:
//!
//! * finite × finite pairs are checked exhaustively against the
//!   no-common-nonzero-difference condition;
//! * a small analytic rule table certifies the factorizations that hold for
//!   structural reasons (a lattice with a matching half-open interval or
//!   b-segment, a singleton with the full line);
//! * everything else is searched for a violation over grid differences and
//!   otherwise left `Unknown`.
//!
//! A refutation always carries an element with two distinct representations
//! that can be replayed through [`SymbolicSet::contains`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::grid::GridSpec;
use crate::partfn::FunctionSpec;
use crate::rational::{int, ExactError, NonZeroRational, Rational};
use crate::report::{CheckReport, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetalgError {
    #[error("interval bounds out of order")]
    InvalidBounds,
    #[error("infinite endpoints must be open")]
    ClosedInfiniteEndpoint,
    #[error("periodic offset {0} outside [0, 1)")]
    OffsetOutOfRange(Rational),
    #[error("no constructive projection for the pair ({0}, {1})")]
    NoConstructiveProjection(String, String),
    #[error("{0} is not in the sum set")]
    NotInSumSet(Rational),
    #[error("{0} has more than one representation; projection undefined")]
    AmbiguousRepresentation(Rational),
    #[error(transparent)]
    Scale(#[from] ExactError),
}

/// A rational interval, possibly unbounded; membership is restricted to ℚ.
/// `None` endpoints are infinite and always open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    lo: Option<Rational>,
    hi: Option<Rational>,
    lo_closed: bool,
    hi_closed: bool,
}

impl RatInterval {
    pub fn new(
        lo: Option<Rational>,
        lo_closed: bool,
        hi: Option<Rational>,
        hi_closed: bool,
    ) -> Result<Self, SetalgError> {
        if (lo.is_none() && lo_closed) || (hi.is_none() && hi_closed) {
            return Err(SetalgError::ClosedInfiniteEndpoint);
        }
        if let (Some(lo), Some(hi)) = (&lo, &hi) {
            if lo > hi {
                return Err(SetalgError::InvalidBounds);
            }
        }
        Ok(RatInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    /// `[lo, hi)`.
    pub fn half_open(lo: Rational, hi: Rational) -> Result<Self, SetalgError> {
        Self::new(Some(lo), true, Some(hi), false)
    }

    /// `(lo, hi]`.
    pub fn half_open_upper(lo: Rational, hi: Rational) -> Result<Self, SetalgError> {
        Self::new(Some(lo), false, Some(hi), true)
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self, SetalgError> {
        Self::new(Some(lo), true, Some(hi), true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self, SetalgError> {
        Self::new(Some(lo), false, Some(hi), false)
    }

    pub fn full_line() -> Self {
        RatInterval {
            lo: None,
            hi: None,
            lo_closed: false,
            hi_closed: false,
        }
    }

    /// The unit half-open interval `[0, 1)`.
    pub fn unit() -> Self {
        Self::half_open(int(0), int(1)).expect("0 < 1")
    }

    pub fn lo(&self) -> Option<&Rational> {
        self.lo.as_ref()
    }

    pub fn hi(&self) -> Option<&Rational> {
        self.hi.as_ref()
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn is_full_line(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    pub fn length(&self) -> Option<Rational> {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => Some(hi - lo),
            _ => None,
        }
    }

    /// Bounded with exactly one closed endpoint.
    pub fn is_half_open(&self) -> bool {
        self.is_bounded() && (self.lo_closed ^ self.hi_closed)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            None => true,
            Some(lo) => {
                if self.lo_closed {
                    x >= lo
                } else {
                    x > lo
                }
            }
        };
        let below = match &self.hi {
            None => true,
            Some(hi) => {
                if self.hi_closed {
                    x <= hi
                } else {
                    x < hi
                }
            }
        };
        above && below
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        let lo = match &self.lo {
            Some(r) => r.to_string(),
            None => "-inf".to_string(),
        };
        let hi = match &self.hi {
            Some(r) => r.to_string(),
            None => "inf".to_string(),
        };
        write!(f, "interval{open}{lo},{hi}{close}")
    }
}

/// A symbolic subset of ℝ with exact, decidable membership over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolicSet {
    /// A finite set of rationals.
    Finite(BTreeSet<Rational>),
    /// `offset + step·ℤ`, canonical with `step > 0` and `0 ≤ offset < step`.
    Lattice { offset: Rational, step: Rational },
    /// A rational interval.
    Interval(RatInterval),
    /// `scale·[0,1) ∩ ℚ`; for negative scale this is `(scale, 0]`.
    BSegment(NonZeroRational),
    /// `D ∔ ℤ` for a finite `D ⊆ [0,1)`: the 1-periodic sets.
    Periodic(BTreeSet<Rational>),
}

impl SymbolicSet {
    pub fn finite(elements: impl IntoIterator<Item = Rational>) -> Self {
        SymbolicSet::Finite(elements.into_iter().collect())
    }

    /// `c + bℤ`, canonicalized so equality of lattices is structural.
    pub fn lattice(c: Rational, b: Rational) -> Result<Self, SetalgError> {
        let step = NonZeroRational::new(b)?.into_inner().abs();
        let offset = &c - &(&step * &(&c / &step).floor());
        Ok(SymbolicSet::Lattice { offset, step })
    }

    pub fn integers() -> Self {
        SymbolicSet::lattice(int(0), int(1)).expect("nonzero step")
    }

    pub fn interval(i: RatInterval) -> Self {
        SymbolicSet::Interval(i)
    }

    pub fn bsegment(b: Rational) -> Result<Self, SetalgError> {
        Ok(SymbolicSet::BSegment(NonZeroRational::new(b)?))
    }

    pub fn periodic(offsets: impl IntoIterator<Item = Rational>) -> Result<Self, SetalgError> {
        let set: BTreeSet<Rational> = offsets.into_iter().collect();
        for d in &set {
            if d.is_negative() || *d >= Rational::one() {
                return Err(SetalgError::OffsetOutOfRange(d.clone()));
            }
        }
        Ok(SymbolicSet::Periodic(set))
    }

    /// Exact membership test.
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            SymbolicSet::Finite(elements) => elements.contains(x),
            SymbolicSet::Lattice { offset, step } => ((x - offset) / step).is_integer(),
            SymbolicSet::Interval(i) => i.contains(x),
            SymbolicSet::BSegment(b) => {
                let ratio = x / b.get();
                !ratio.is_negative() && ratio < Rational::one()
            }
            SymbolicSet::Periodic(offsets) => offsets.contains(&x.frac()),
        }
    }
}

impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicSet::Finite(elements) => {
                write!(f, "finite{{")?;
                for (i, e) in elements.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
            SymbolicSet::Lattice { offset, step } => write!(f, "lattice({offset},{step})"),
            SymbolicSet::Interval(i) => write!(f, "{i}"),
            SymbolicSet::BSegment(b) => write!(f, "bsegment({b})"),
            SymbolicSet::Periodic(offsets) => {
                write!(f, "periodic{{")?;
                for (i, e) in offsets.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl Serialize for SymbolicSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// How a direct-sum verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DsumStatus {
    VerifiedAnalytic,
    VerifiedExhaustive,
    Refuted,
    Unknown,
}

/// An element of `A + B` with two distinct representations; replays through
/// membership and addition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleRep {
    pub sum: Rational,
    pub first: (Rational, Rational),
    pub second: (Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DsumVerdict {
    pub status: DsumStatus,
    pub witness: Option<DoubleRep>,
    /// Name of the analytic rule applied, when any.
    pub rule: Option<&'static str>,
    pub note: Option<String>,
}

impl DsumVerdict {
    fn analytic(rule: &'static str, note: String) -> Self {
        DsumVerdict {
            status: DsumStatus::VerifiedAnalytic,
            witness: None,
            rule: Some(rule),
            note: Some(note),
        }
    }

    pub fn is_direct(&self) -> Option<bool> {
        match self.status {
            DsumStatus::VerifiedAnalytic | DsumStatus::VerifiedExhaustive => Some(true),
            DsumStatus::Refuted => Some(false),
            DsumStatus::Unknown => None,
        }
    }

    pub fn render_text(&self, a: &SymbolicSet, b: &SymbolicSet) -> String {
        let mut out = String::new();
        out.push_str(&format!("A:        {a}\n"));
        out.push_str(&format!("B:        {b}\n"));
        let status = match self.status {
            DsumStatus::VerifiedAnalytic => "direct (verified analytically)",
            DsumStatus::VerifiedExhaustive => "direct (verified exhaustively)",
            DsumStatus::Refuted => "NOT DIRECT",
            DsumStatus::Unknown => "unknown",
        };
        out.push_str(&format!("verdict:  {status}\n"));
        if let Some(rule) = self.rule {
            out.push_str(&format!("rule:     {rule}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!(
                "witness:  {} = {} + {} = {} + {}\n",
                w.sum, w.first.0, w.first.1, w.second.0, w.second.1
            ));
        }
        if let Some(note) = &self.note {
            out.push_str(&format!("note:     {note}\n"));
        }
        out
    }
}

/// Complete enumeration of the representations `x = a + b` of every element
/// of `A + B` for finite sets: the ground-truth oracle for directness.
pub fn brute_force_representations(
    a: &BTreeSet<Rational>,
    b: &BTreeSet<Rational>,
) -> BTreeMap<Rational, Vec<(Rational, Rational)>> {
    let mut map: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
    for x in a {
        for y in b {
            map.entry(x + y).or_default().push((x.clone(), y.clone()));
        }
    }
    map
}

/// Condition: the translates `a + B` over distinct `a ∈ A` are pairwise
/// disjoint. Checked directly, as an independent route to directness.
pub fn disjoint_translates_direct(a: &BTreeSet<Rational>, b: &BTreeSet<Rational>) -> bool {
    let translates: Vec<BTreeSet<Rational>> = a
        .iter()
        .map(|x| b.iter().map(|y| x + y).collect())
        .collect();
    for i in 0..translates.len() {
        for j in (i + 1)..translates.len() {
            if translates[i].intersection(&translates[j]).next().is_some() {
                return false;
            }
        }
    }
    true
}

/// Difference-set route: the sum is direct iff `A − A` and `B − B` share no
/// nonzero element. Returns the replayable double representation built from
/// the smallest positive common difference, if any.
fn common_difference_witness(
    a_points: &BTreeSet<Rational>,
    b_points: &BTreeSet<Rational>,
) -> Option<DoubleRep> {
    let diffs = |points: &BTreeSet<Rational>| -> BTreeMap<Rational, (Rational, Rational)> {
        let mut map = BTreeMap::new();
        for x in points {
            for y in points {
                let d = x - y;
                if d.is_positive() {
                    map.entry(d).or_insert_with(|| (x.clone(), y.clone()));
                }
            }
        }
        map
    };
    let a_diffs = diffs(a_points);
    let b_diffs = diffs(b_points);
    for (d, (a1, a2)) in &a_diffs {
        if let Some((b2, b1)) = b_diffs.get(d) {
            // a1 − a2 = b2 − b1 = d > 0, so a1 + b1 = a2 + b2.
            return Some(DoubleRep {
                sum: a1 + b1,
                first: (a2.clone(), b2.clone()),
                second: (a1.clone(), b1.clone()),
            });
        }
    }
    None
}

fn grid_members(s: &SymbolicSet, grid: &GridSpec) -> BTreeSet<Rational> {
    grid.points().into_iter().filter(|x| s.contains(x)).collect()
}

/// Matches the pair against the analytic rule table. Only factorizations
/// that hold for structural reasons are certified; order-insensitive.
fn analytic_rule(a: &SymbolicSet, b: &SymbolicSet) -> Option<(&'static str, String)> {
    fn one_way(a: &SymbolicSet, b: &SymbolicSet) -> Option<(&'static str, String)> {
        if let SymbolicSet::Lattice { step, .. } = a {
            match b {
                SymbolicSet::BSegment(scale) => {
                    if &scale.get().abs() == step {
                        return Some((
                            "lattice-with-matching-b-segment",
                            format!("ℝ = {a} ∔ {b}: half-open segment of length {step} against a step-{step} lattice"),
                        ));
                    }
                }
                SymbolicSet::Interval(i) => {
                    if i.is_half_open() && i.length().as_ref() == Some(step) {
                        return Some((
                            "lattice-with-matching-half-open-interval",
                            format!("ℝ = {a} ∔ {b}: half-open interval of length {step} against a step-{step} lattice"),
                        ));
                    }
                }
                _ => {}
            }
        }
        if let (SymbolicSet::Finite(elements), SymbolicSet::Interval(i)) = (a, b) {
            if elements.len() == 1 && i.is_full_line() {
                return Some((
                    "singleton-with-full-line",
                    format!("ℝ = {a} ∔ {b}: a single translate of the full line"),
                ));
            }
        }
        None
    }
    one_way(a, b).or_else(|| one_way(b, a))
}

/// Three-tier direct-sum check; see the module doc. The verdict records
/// which tier decided.
pub fn direct_sum_check(a: &SymbolicSet, b: &SymbolicSet, grid: &GridSpec) -> DsumVerdict {
    if let (SymbolicSet::Finite(fa), SymbolicSet::Finite(fb)) = (a, b) {
        return match common_difference_witness(fa, fb) {
            Some(witness) => DsumVerdict {
                status: DsumStatus::Refuted,
                witness: Some(witness),
                rule: None,
                note: None,
            },
            None => DsumVerdict {
                status: DsumStatus::VerifiedExhaustive,
                witness: None,
                rule: None,
                note: Some("no common nonzero difference; all representations unique".to_string()),
            },
        };
    }
    if let Some((rule, note)) = analytic_rule(a, b) {
        return DsumVerdict::analytic(rule, note);
    }
    let a_points = grid_members(a, grid);
    let b_points = grid_members(b, grid);
    let pairs = (a_points.len() * a_points.len() + b_points.len() * b_points.len()) as u64;
    match common_difference_witness(&a_points, &b_points) {
        Some(witness) => DsumVerdict {
            status: DsumStatus::Refuted,
            witness: Some(witness),
            rule: None,
            note: Some("violation found among grid differences".to_string()),
        },
        None => DsumVerdict {
            status: DsumStatus::Unknown,
            witness: None,
            rule: None,
            note: Some(format!(
                "no violation among {pairs} grid difference pairs; directness not decided"
            )),
        },
    }
}

fn bfloor_of(u: &Rational, b: &Rational) -> Rational {
    b * (u / b).floor()
}

/// The parting projections `(P_A(x), P_B(x))` for a recognized factorization
/// pair. `P_A(x) + P_B(x) = x`, `P_A(x) ∈ A`, `P_B(x) ∈ B`.
pub fn projection(
    a: &SymbolicSet,
    b: &SymbolicSet,
    x: &Rational,
) -> Result<(Rational, Rational), SetalgError> {
    if let Some((pa, pb)) = projection_one_way(a, b, x)? {
        return Ok((pa, pb));
    }
    if let Some((pb, pa)) = projection_one_way(b, a, x)? {
        return Ok((pa, pb));
    }
    Err(SetalgError::NoConstructiveProjection(
        a.to_string(),
        b.to_string(),
    ))
}

fn projection_one_way(
    a: &SymbolicSet,
    b: &SymbolicSet,
    x: &Rational,
) -> Result<Option<(Rational, Rational)>, SetalgError> {
    match (a, b) {
        // Lattice against its matching b-segment: P_A(x) = ⌊x−c⌋_b + c.
        (SymbolicSet::Lattice { offset, step }, SymbolicSet::BSegment(scale))
            if &scale.get().abs() == step =>
        {
            let pa = bfloor_of(&(x - offset), scale.get()) + offset.clone();
            let pb = x - &pa;
            Ok(Some((pa, pb)))
        }
        // Lattice against a matching half-open interval translate.
        (SymbolicSet::Lattice { offset, step }, SymbolicSet::Interval(i))
            if i.is_half_open() && i.length().as_ref() == Some(step) =>
        {
            let u;
            let pb;
            if i.lo_closed() {
                // B = [t, t+b): P_B(x) = {x−c−t}_b + t.
                let t = i.lo().expect("bounded");
                u = x - offset - t;
                pb = &u - &bfloor_of(&u, step) + t.clone();
            } else {
                // B = (t, t+b]: P_B(x) = t + (u − b⌈u/b⌉ + b).
                let t = i.lo().expect("bounded");
                u = x - offset - t;
                let ceil_part = step * (&u / step).ceil();
                pb = &u - &ceil_part + step.clone() + t.clone();
            }
            let pa = x - &pb;
            Ok(Some((pa, pb)))
        }
        // Finite pairs: representation lookup.
        (SymbolicSet::Finite(fa), SymbolicSet::Finite(fb)) => {
            let reps = brute_force_representations(fa, fb);
            match reps.get(x) {
                None => Err(SetalgError::NotInSumSet(x.clone())),
                Some(list) if list.len() == 1 => Ok(Some(list[0].clone())),
                Some(_) => Err(SetalgError::AmbiguousRepresentation(x.clone())),
            }
        }
        // A singleton translate of any set: P = (a₀, x − a₀) when it lands.
        (SymbolicSet::Finite(fa), other) if fa.len() == 1 => {
            let a0 = fa.iter().next().expect("singleton");
            let rest = x - a0;
            if other.contains(&rest) {
                Ok(Some((a0.clone(), rest)))
            } else {
                Err(SetalgError::NotInSumSet(x.clone()))
            }
        }
        _ => Ok(None),
    }
}

/// Why an interval is or is not a factor of (ℝ, +).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FactorReason {
    HalfOpenBounded,
    FullLine,
    ClosedOrOpenBounded,
    UnboundedProper,
    Degenerate,
}

/// The classification of an interval: whether it factors ℝ, a complement
/// when it does, and the projection pair `(P_complement, P_interval)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorClassification {
    pub is_factor: bool,
    pub complement: Option<SymbolicSet>,
    pub projection_pair: Option<(FunctionSpec, FunctionSpec)>,
    pub reason: FactorReason,
}

impl FactorClassification {
    fn non_factor(reason: FactorReason) -> Self {
        FactorClassification {
            is_factor: false,
            complement: None,
            projection_pair: None,
            reason,
        }
    }

    pub fn render_text(&self, interval: &RatInterval) -> String {
        let mut out = String::new();
        out.push_str(&format!("interval:   {interval}\n"));
        out.push_str(&format!(
            "factor:     {}\n",
            if self.is_factor { "yes" } else { "no" }
        ));
        out.push_str(&format!("reason:     {:?}\n", self.reason));
        if let Some(c) = &self.complement {
            out.push_str(&format!("complement: {c}\n"));
        }
        if let Some((pa, pb)) = &self.projection_pair {
            out.push_str(&format!("P_A:        {pa}\n"));
            out.push_str(&format!("P_B:        {pb}\n"));
        }
        out
    }
}

/// Classifies an interval as a factor of (ℝ, +) or not.
///
/// The bounded half-open intervals and the full line are factors; bounded
/// closed or open intervals with distinct endpoints and proper unbounded
/// intervals are not. Degenerate intervals (empty, singleton) are classified
/// totally but flagged `Degenerate`. For factors the emitted complement is a
/// lattice through the lower endpoint and the projection pair is exact.
pub fn classify_interval(i: &RatInterval) -> FactorClassification {
    if i.is_full_line() {
        let projection_pair = (FunctionSpec::Linear(int(0)), FunctionSpec::Identity);
        return FactorClassification {
            is_factor: true,
            complement: Some(SymbolicSet::finite([int(0)])),
            projection_pair: Some(projection_pair),
            reason: FactorReason::FullLine,
        };
    }
    if !i.is_bounded() {
        return FactorClassification::non_factor(FactorReason::UnboundedProper);
    }
    let alpha = i.lo().expect("bounded").clone();
    let length = i.length().expect("bounded");
    if length.is_zero() {
        if i.lo_closed() && i.hi_closed() {
            // The singleton {α}: ℝ = {α} ∔ (full line − α), trivially.
            let constant = FunctionSpec::conjugate(
                FunctionSpec::Linear(int(0)),
                int(0),
                int(1),
                alpha,
            )
            .expect("unit scale");
            return FactorClassification {
                is_factor: true,
                complement: Some(SymbolicSet::Interval(RatInterval::full_line())),
                projection_pair: Some((constant.star(), constant)),
                reason: FactorReason::Degenerate,
            };
        }
        // Empty interval: cannot cover ℝ.
        return FactorClassification::non_factor(FactorReason::Degenerate);
    }
    if !i.is_half_open() {
        return FactorClassification::non_factor(FactorReason::ClosedOrOpenBounded);
    }
    let complement = SymbolicSet::lattice(alpha.clone(), length.clone()).expect("nonzero length");
    let two_alpha = &alpha + &alpha;
    let shift = -(&two_alpha / &length);
    let projection_pair = if i.lo_closed() {
        // [α, β): P_interval(x) = {x − 2α}_b + α, landing in [α, α+b) with
        // P_lattice(x) = x − P_interval(x) ∈ α + bℤ.
        let p_interval =
            FunctionSpec::conjugate(FunctionSpec::Frac, shift, length, alpha)
                .expect("nonzero length");
        (p_interval.star(), p_interval)
    } else {
        // (α, β]: P_lattice(x) = b⌈(x − 2α)/b⌉ + (α − b) ∈ α + bℤ, and the
        // interval projection is its star companion.
        let offset = &alpha - &length;
        let p_lattice =
            FunctionSpec::conjugate(FunctionSpec::Ceil, shift, length, offset)
                .expect("nonzero length");
        let p_interval = p_lattice.star();
        (p_lattice, p_interval)
    };
    FactorClassification {
        is_factor: true,
        complement: Some(complement),
        projection_pair: Some(projection_pair),
        reason: FactorReason::HalfOpenBounded,
    }
}

/// Concrete evidence that a bounded closed or open interval fails to factor
/// ℝ against its natural lattice candidate: either one element with two
/// representations, or a rational no sum reaches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IntervalCounterexample {
    DoubleRepresentation(DoubleRep),
    CoverageGap {
        point: Rational,
        complement: SymbolicSet,
    },
}

/// Bounded search for a non-factor witness; `None` for intervals the
/// classifier accepts or for shapes with no canonical candidate complement.
pub fn nonfactor_witness(i: &RatInterval) -> Option<IntervalCounterexample> {
    if !i.is_bounded() || i.is_half_open() {
        return None;
    }
    let alpha = i.lo()?.clone();
    let length = i.length()?;
    if length.is_zero() {
        return None;
    }
    let lattice = SymbolicSet::lattice(alpha.clone(), length.clone()).ok()?;
    if i.lo_closed() && i.hi_closed() {
        // Closed interval: search small lattice multiples against endpoint
        // sums for a collision.
        let mut sums: BTreeMap<Rational, (Rational, Rational)> = BTreeMap::new();
        for k in -2..=2i64 {
            let a = &alpha + &(&length * &int(k));
            for j in 0..=4i64 {
                let t = &alpha + &(&length * &(Rational::new(j, 4).expect("4 != 0")));
                if !i.contains(&t) {
                    continue;
                }
                let sum = &a + &t;
                if let Some((a0, t0)) = sums.get(&sum) {
                    if a0 != &a {
                        return Some(IntervalCounterexample::DoubleRepresentation(DoubleRep {
                            sum,
                            first: (a0.clone(), t0.clone()),
                            second: (a.clone(), t),
                        }));
                    }
                } else {
                    sums.insert(sum, (a.clone(), t.clone()));
                }
            }
        }
        None
    } else {
        // Open interval: search lattice translates for a point no sum
        // reaches. The candidates x = α + (lattice point) leave only
        // excluded endpoints as representations.
        for k in -2..=2i64 {
            let x = &(&alpha + &alpha) + &(&length * &int(k));
            let lo_k = (&(&x - i.hi().expect("bounded")) - &alpha) / length.clone();
            let hi_k = (&(&x - i.lo().expect("bounded")) - &alpha) / length.clone();
            let mut covered = false;
            let mut m = lo_k.floor();
            while m <= hi_k.ceil() {
                let a = &alpha + &(&length * &m);
                if i.contains(&(&x - &a)) {
                    covered = true;
                    break;
                }
                m = m + int(1);
            }
            if !covered {
                return Some(IntervalCounterexample::CoverageGap {
                    point: x,
                    complement: lattice,
                });
            }
        }
        None
    }
}

/// Checks that a set is 1-periodic: membership is invariant under adding 1.
///
/// Periodic sets are 1-periodic by construction (their offsets are a direct
/// system of coset representatives); the grid pass corroborates. For other
/// sets the grid either refutes or leaves the claim unknown.
pub fn coperiodic_closure_check(s: &SymbolicSet, grid: &GridSpec) -> CheckReport {
    let report = CheckReport::new("1-periodicity (1 + A = A)", s.to_string())
        .with_grid(grid.summary());
    let one = int(1);
    let points = grid.points();
    for (idx, x) in points.iter().enumerate() {
        let here = s.contains(x);
        let there = s.contains(&(x + &one));
        if here != there {
            let (inside, outside) = if here {
                (x.clone(), x + &one)
            } else {
                (x + &one, x.clone())
            };
            return report
                .refuted(
                    Witness::membership(vec![("x", x.clone())], inside.clone()),
                    (idx + 1) as u64,
                )
                .with_note(format!("{inside} is in the set but {outside} is not"));
        }
    }
    let checked = points.len() as u64;
    match s {
        SymbolicSet::Periodic(offsets) => report.verified(checked).with_note(format!(
            "1-periodic by construction; {} distinct offsets in [0,1); grid corroborates",
            offsets.len()
        )),
        _ => report.no_counterexample(checked),
    }
}
