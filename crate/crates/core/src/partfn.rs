//! Symbolic function families and their exact evaluator.
//!
//! Every function this crate can talk about is a [`FunctionSpec`]: a named
//! family member carrying its rational parameters, evaluated exactly over ℚ.
//! The catalog covers the part functions (`floor`, `ceil`, `frac`), their
//! shifted forms `⌊x−c⌋+c`, `⌈x−c⌉+c`, `{x−c}`, the `b`-part functions
//! `b⌊x/b⌋`, `b⌈x/b⌉`, `b{x/b}`, table-driven periodic and coperiodic
//! families `μ({x})` and `⌊x⌋+μ({x})`, the star companion `x − f(x)`, affine
//! conjugates `b·f(x/b + a) + c`, reflections `−f(−x)`, and the linear
//! non-solutions `k·x` used to exercise refutation paths.
//!
//! Keeping functions symbolic (rather than as closures) keeps reports
//! serializable and reproducible: a spec renders to DSL text and parses back
//! to a structurally equal value.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::grid::GridSpec;
use crate::rational::{int, rat, ExactError, NonZeroRational, Rational};
use crate::report::{CheckReport, Verdict, Witness};

/// Evaluation failure: a μ-family was asked for a point its table does not
/// cover. Evaluation never silently substitutes a value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("mu table undefined at fractional part {0}")]
    MuUndefined(Rational),
}

/// Errors constructing a μ table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MuTableError {
    #[error("mu table key {0} outside [0, 1)")]
    KeyOutOfRange(Rational),
    #[error("duplicate mu table key {0}")]
    DuplicateKey(Rational),
}

/// A finitely-described map μ: [0,1) → ℚ — explicit entries plus an optional
/// default for unlisted points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTable {
    entries: BTreeMap<Rational, Rational>,
    default: Option<Rational>,
}

impl MuTable {
    pub fn new(
        entries: Vec<(Rational, Rational)>,
        default: Option<Rational>,
    ) -> Result<Self, MuTableError> {
        let mut map = BTreeMap::new();
        for (key, value) in entries {
            if key.is_negative() || key >= Rational::one() {
                return Err(MuTableError::KeyOutOfRange(key));
            }
            if map.insert(key.clone(), value).is_some() {
                return Err(MuTableError::DuplicateKey(key));
            }
        }
        Ok(MuTable {
            entries: map,
            default,
        })
    }

    /// μ at a point already known to be in [0,1).
    pub fn lookup(&self, point: &Rational) -> Result<Rational, EvalError> {
        self.entries
            .get(point)
            .or(self.default.as_ref())
            .cloned()
            .ok_or_else(|| EvalError::MuUndefined(point.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.entries.iter()
    }

    pub fn default_value(&self) -> Option<&Rational> {
        self.default.as_ref()
    }

    /// Parses the table text format: one `point value` pair per line, plus an
    /// optional `default value` line. Blank lines and `#` comments are
    /// skipped.
    pub fn parse_table(text: &str) -> Result<Self, String> {
        let mut entries = Vec::new();
        let mut default = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let first = fields.next().unwrap();
            let second = fields
                .next()
                .ok_or_else(|| format!("line {}: expected two fields", lineno + 1))?;
            if fields.next().is_some() {
                return Err(format!("line {}: expected two fields", lineno + 1));
            }
            let value: Rational = second
                .parse()
                .map_err(|_| format!("line {}: malformed rational `{second}`", lineno + 1))?;
            if first == "default" {
                if default.replace(value).is_some() {
                    return Err(format!("line {}: duplicate default", lineno + 1));
                }
            } else {
                let point: Rational = first
                    .parse()
                    .map_err(|_| format!("line {}: malformed rational `{first}`", lineno + 1))?;
                entries.push((point, value));
            }
        }
        MuTable::new(entries, default).map_err(|e| e.to_string())
    }
}

impl fmt::Display for MuTable {
    /// Inline DSL form: `0:0,1/2:1,default:1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{k}:{v}")?;
            first = false;
        }
        if let Some(d) = &self.default {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "default:{d}")?;
        }
        Ok(())
    }
}

/// A symbolic member of one of the function families; see the module doc for
/// the catalog. All parameters are exact rationals and every scale parameter
/// is nonzero by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionSpec {
    /// x
    Identity,
    /// ⌊x⌋
    Floor,
    /// ⌈x⌉
    Ceil,
    /// {x}
    Frac,
    /// ⌊x−c⌋+c
    ShiftedFloor(Rational),
    /// ⌈x−c⌉+c
    ShiftedCeil(Rational),
    /// {x−c}
    ShiftedFrac(Rational),
    /// b⌊x/b⌋
    BFloor(NonZeroRational),
    /// b⌈x/b⌉
    BCeil(NonZeroRational),
    /// b{x/b}
    BFrac(NonZeroRational),
    /// ⌊x−c⌋_b + c
    ShiftedBFloor(NonZeroRational, Rational),
    /// ⌊x⌋+c
    FloorPlus(Rational),
    /// μ({x})
    MuPeriodic(MuTable),
    /// ⌊x⌋+μ({x})
    MuCoperiodic(MuTable),
    /// x − f(x)
    Star(Box<FunctionSpec>),
    /// scale·f(x/scale + shift) + offset
    AffineConjugate {
        inner: Box<FunctionSpec>,
        shift: Rational,
        scale: NonZeroRational,
        offset: Rational,
    },
    /// −f(−x)
    Negated(Box<FunctionSpec>),
    /// k·x
    Linear(Rational),
}

impl FunctionSpec {
    pub fn bfloor(b: Rational) -> Result<Self, ExactError> {
        Ok(FunctionSpec::BFloor(NonZeroRational::new(b)?))
    }

    pub fn bceil(b: Rational) -> Result<Self, ExactError> {
        Ok(FunctionSpec::BCeil(NonZeroRational::new(b)?))
    }

    pub fn bfrac(b: Rational) -> Result<Self, ExactError> {
        Ok(FunctionSpec::BFrac(NonZeroRational::new(b)?))
    }

    pub fn shifted_bfloor(b: Rational, c: Rational) -> Result<Self, ExactError> {
        Ok(FunctionSpec::ShiftedBFloor(NonZeroRational::new(b)?, c))
    }

    pub fn conjugate(
        inner: FunctionSpec,
        shift: Rational,
        scale: Rational,
        offset: Rational,
    ) -> Result<Self, ExactError> {
        Ok(FunctionSpec::AffineConjugate {
            inner: Box::new(inner),
            shift,
            scale: NonZeroRational::new(scale)?,
            offset,
        })
    }

    /// The star companion `x − f(x)`. Starring twice returns the original
    /// spec structurally; no other simplification is applied.
    pub fn star(&self) -> FunctionSpec {
        match self {
            FunctionSpec::Star(inner) => (**inner).clone(),
            other => FunctionSpec::Star(Box::new(other.clone())),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &Rational) -> Result<Rational, EvalError> {
        use FunctionSpec::*;
        Ok(match self {
            Identity => x.clone(),
            Floor => x.floor(),
            Ceil => x.ceil(),
            Frac => x.frac(),
            ShiftedFloor(c) => (x - c).floor() + c.clone(),
            ShiftedCeil(c) => (x - c).ceil() + c.clone(),
            ShiftedFrac(c) => (x - c).frac(),
            BFloor(b) => b.get() * &(x / b.get()).floor(),
            BCeil(b) => b.get() * &(x / b.get()).ceil(),
            BFrac(b) => b.get() * &(x / b.get()).frac(),
            ShiftedBFloor(b, c) => {
                let u = x - c;
                b.get() * &(&u / b.get()).floor() + c.clone()
            }
            FloorPlus(c) => x.floor() + c.clone(),
            MuPeriodic(table) => table.lookup(&x.frac())?,
            MuCoperiodic(table) => x.floor() + table.lookup(&x.frac())?,
            Star(inner) => x - &inner.eval(x)?,
            AffineConjugate {
                inner,
                shift,
                scale,
                offset,
            } => {
                let arg = &(x / scale.get()) + shift;
                scale.get() * &inner.eval(&arg)? + offset.clone()
            }
            Negated(inner) => -inner.eval(&-x)?,
            Linear(k) => k * x,
        })
    }

    /// f(x) together with f*(x) = x − f(x).
    pub fn eval_with_star(&self, x: &Rational) -> Result<(Rational, Rational), EvalError> {
        let value = self.eval(x)?;
        let star = x - &value;
        Ok((value, star))
    }
}

impl serde::Serialize for FunctionSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl fmt::Display for FunctionSpec {
    /// Canonical DSL form; parsing the output reproduces the spec.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FunctionSpec::*;
        match self {
            Identity => write!(f, "id"),
            Floor => write!(f, "floor"),
            Ceil => write!(f, "ceil"),
            Frac => write!(f, "frac"),
            ShiftedFloor(c) => write!(f, "shifted_floor({c})"),
            ShiftedCeil(c) => write!(f, "shifted_ceil({c})"),
            ShiftedFrac(c) => write!(f, "shifted_frac({c})"),
            BFloor(b) => write!(f, "bfloor({b})"),
            BCeil(b) => write!(f, "bceil({b})"),
            BFrac(b) => write!(f, "bfrac({b})"),
            ShiftedBFloor(b, c) => write!(f, "shifted_bfloor({b},{c})"),
            FloorPlus(c) => write!(f, "floor_plus({c})"),
            MuPeriodic(t) => write!(f, "mu_periodic({t})"),
            MuCoperiodic(t) => write!(f, "mu_coperiodic({t})"),
            Star(inner) => write!(f, "star({inner})"),
            AffineConjugate {
                inner,
                shift,
                scale,
                offset,
            } => write!(f, "conj({inner},{shift},{scale},{offset})"),
            Negated(inner) => write!(f, "neg({inner})"),
            Linear(k) => write!(f, "linear({k})"),
        }
    }
}

/// The dual pair `b·f(x/b + a) + c` and `x − b·f(x/b + a) + c`.
///
/// The second component is expressed through the star companion: it equals
/// `star(g)` conjugated so that both members stay in the symbolic catalog.
/// Both are decomposer functions whenever `f` is; the checkers test that
/// rather than assume it.
pub fn transform(
    f: &FunctionSpec,
    a: &Rational,
    b: &Rational,
    c: &Rational,
) -> Result<(FunctionSpec, FunctionSpec), ExactError> {
    let scale = NonZeroRational::new(b.clone())?;
    let first = FunctionSpec::AffineConjugate {
        inner: Box::new(f.clone()),
        shift: a.clone(),
        scale: scale.clone(),
        offset: c.clone(),
    };
    // x − b·f(x/b + a) + c  =  b·f*(x/b + a) + (c − a·b)
    let second = FunctionSpec::AffineConjugate {
        inner: Box::new(f.star()),
        shift: a.clone(),
        scale,
        offset: c - &(a * b),
    };
    Ok((first, second))
}

/// Extensional comparison of two specs over a grid.
///
/// The claim is equality on the grid itself, so an exhaustive pass is
/// `Verified`; sampled passes stay `Unknown`. The first differing point in
/// enumeration order refutes.
pub fn equal_on_grid(
    f: &FunctionSpec,
    g: &FunctionSpec,
    grid: &GridSpec,
) -> Result<CheckReport, EvalError> {
    let report = CheckReport::new(
        format!("extensional equality with {g}"),
        f.to_string(),
    )
    .with_grid(grid.summary());
    let points = grid.points();
    for (i, x) in points.iter().enumerate() {
        let fx = f.eval(x)?;
        let gx = g.eval(x)?;
        if fx != gx {
            return Ok(report.refuted(
                Witness::equation(vec![("x", x.clone())], fx, gx),
                (i + 1) as u64,
            ));
        }
    }
    let checked = points.len() as u64;
    Ok(if grid.is_exhaustive() {
        report
            .verified(checked)
            .with_note("equal at every grid point")
    } else {
        report.no_counterexample(checked)
    })
}

/// Convenience used by tests and harnesses: panic-free check that a report
/// found nothing.
pub fn passed(report: &CheckReport) -> bool {
    report.verdict != Verdict::Refuted
}

/// A representative member of every family, instantiated with the given
/// scale parameters. Used by the verification harnesses to sweep identities
/// across the whole catalog.
pub fn family_catalog(scales: &[Rational]) -> Vec<FunctionSpec> {
    let mu_int = MuTable::new(vec![(int(0), int(0))], Some(int(1))).expect("valid table");
    let mu_frac = MuTable::new(
        vec![(int(0), int(0)), (rat(1, 2), rat(1, 3))],
        Some(rat(1, 5)),
    )
    .expect("valid table");

    let mut catalog = vec![
        FunctionSpec::Identity,
        FunctionSpec::Floor,
        FunctionSpec::Ceil,
        FunctionSpec::Frac,
        FunctionSpec::ShiftedFloor(rat(1, 2)),
        FunctionSpec::ShiftedFloor(rat(-3, 4)),
        FunctionSpec::ShiftedCeil(rat(1, 2)),
        FunctionSpec::ShiftedFrac(rat(2, 3)),
        FunctionSpec::FloorPlus(rat(5, 2)),
        FunctionSpec::MuPeriodic(mu_frac.clone()),
        FunctionSpec::MuCoperiodic(mu_int),
        FunctionSpec::MuCoperiodic(mu_frac),
        FunctionSpec::Star(Box::new(FunctionSpec::Floor)),
        FunctionSpec::Negated(Box::new(FunctionSpec::Ceil)),
        FunctionSpec::conjugate(FunctionSpec::Floor, rat(1, 2), rat(3, 2), rat(-1, 3))
            .expect("nonzero scale"),
        FunctionSpec::Linear(int(1)),
        FunctionSpec::Linear(rat(1, 2)),
    ];
    for b in scales {
        catalog.push(FunctionSpec::bfloor(b.clone()).expect("nonzero scale"));
        catalog.push(FunctionSpec::bceil(b.clone()).expect("nonzero scale"));
        catalog.push(FunctionSpec::bfrac(b.clone()).expect("nonzero scale"));
        catalog.push(
            FunctionSpec::shifted_bfloor(b.clone(), rat(1, 3)).expect("nonzero scale"),
        );
    }
    catalog
}
