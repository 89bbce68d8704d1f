//! Interestingness measures over 2x2 contingency tables.
//!
//! Every measure is a pure function of one [`ContingencyTable`]. Results are
//! extended reals: divisions by zero yield +/- infinity when the numerator
//! has a sign and `Undefined` when it is zero too, which matches IEEE
//! arithmetic with NaN mapped to `Undefined`. The handful of places where
//! that mapping would be wrong (zero-weight log terms, min/max over an
//! undefined operand) are handled explicitly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::mining::ContingencyTable;

/// Identifier of one measure in the catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureId {
    Support,
    Confidence,
    Coverage,
    Prevalence,
    Recall,
    Specificity1,
    Accuracy,
    Lift,
    Leverage1,
    AddedValue,
    RelativeRisk,
    Jaccard,
    CertaintyFactor,
    OddsRatio,
    YuleQ,
    YuleY,
    Klosgen,
    Conviction,
    CollectiveStrength,
    LaplaceCorrection,
    GiniIndex,
    PhiCoefficient,
    JMeasure,
    PiatetskyShapiro,
    Cosine,
    Loevinger,
    InformationGain,
    SebagSchoenauer,
    LeastContradiction,
    OddMultiplier,
    ExampleCounterexampleRate,
    Zhang,
    Correlation,
    Leverage2,
    Coherence,
    Specificity2,
    AllConfidence,
    MaxConfidence,
    Kulczynski,
    ChiSquare,
    Wra,
}

impl MeasureId {
    pub const ALL: [MeasureId; 41] = [
        MeasureId::Support,
        MeasureId::Confidence,
        MeasureId::Coverage,
        MeasureId::Prevalence,
        MeasureId::Recall,
        MeasureId::Specificity1,
        MeasureId::Accuracy,
        MeasureId::Lift,
        MeasureId::Leverage1,
        MeasureId::AddedValue,
        MeasureId::RelativeRisk,
        MeasureId::Jaccard,
        MeasureId::CertaintyFactor,
        MeasureId::OddsRatio,
        MeasureId::YuleQ,
        MeasureId::YuleY,
        MeasureId::Klosgen,
        MeasureId::Conviction,
        MeasureId::CollectiveStrength,
        MeasureId::LaplaceCorrection,
        MeasureId::GiniIndex,
        MeasureId::PhiCoefficient,
        MeasureId::JMeasure,
        MeasureId::PiatetskyShapiro,
        MeasureId::Cosine,
        MeasureId::Loevinger,
        MeasureId::InformationGain,
        MeasureId::SebagSchoenauer,
        MeasureId::LeastContradiction,
        MeasureId::OddMultiplier,
        MeasureId::ExampleCounterexampleRate,
        MeasureId::Zhang,
        MeasureId::Correlation,
        MeasureId::Leverage2,
        MeasureId::Coherence,
        MeasureId::Specificity2,
        MeasureId::AllConfidence,
        MeasureId::MaxConfidence,
        MeasureId::Kulczynski,
        MeasureId::ChiSquare,
        MeasureId::Wra,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MeasureId::Support => "Support",
            MeasureId::Confidence => "Confidence",
            MeasureId::Coverage => "Coverage",
            MeasureId::Prevalence => "Prevalence",
            MeasureId::Recall => "Recall",
            MeasureId::Specificity1 => "Specificity1",
            MeasureId::Accuracy => "Accuracy",
            MeasureId::Lift => "Lift",
            MeasureId::Leverage1 => "Leverage1",
            MeasureId::AddedValue => "AddedValue",
            MeasureId::RelativeRisk => "RelativeRisk",
            MeasureId::Jaccard => "Jaccard",
            MeasureId::CertaintyFactor => "CertaintyFactor",
            MeasureId::OddsRatio => "OddsRatio",
            MeasureId::YuleQ => "YuleQ",
            MeasureId::YuleY => "YuleY",
            MeasureId::Klosgen => "Klosgen",
            MeasureId::Conviction => "Conviction",
            MeasureId::CollectiveStrength => "CollectiveStrength",
            MeasureId::LaplaceCorrection => "LaplaceCorrection",
            MeasureId::GiniIndex => "GiniIndex",
            MeasureId::PhiCoefficient => "PhiCoefficient",
            MeasureId::JMeasure => "JMeasure",
            MeasureId::PiatetskyShapiro => "PiatetskyShapiro",
            MeasureId::Cosine => "Cosine",
            MeasureId::Loevinger => "Loevinger",
            MeasureId::InformationGain => "InformationGain",
            MeasureId::SebagSchoenauer => "SebagSchoenauer",
            MeasureId::LeastContradiction => "LeastContradiction",
            MeasureId::OddMultiplier => "OddMultiplier",
            MeasureId::ExampleCounterexampleRate => "ExampleCounterexampleRate",
            MeasureId::Zhang => "Zhang",
            MeasureId::Correlation => "Correlation",
            MeasureId::Leverage2 => "Leverage2",
            MeasureId::Coherence => "Coherence",
            MeasureId::Specificity2 => "Specificity2",
            MeasureId::AllConfidence => "AllConfidence",
            MeasureId::MaxConfidence => "MaxConfidence",
            MeasureId::Kulczynski => "Kulczynski",
            MeasureId::ChiSquare => "ChiSquare",
            MeasureId::Wra => "WRA",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    /// Case-insensitive match against the identifier names.
    fn from_str(s: &str) -> Result<Self, Error> {
        MeasureId::ALL
            .iter()
            .copied()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown measure '{}'", s)))
    }
}

/// Extended-real measure result.
///
/// Total order: `Undefined < NegInf < Finite(_) < PosInf`, finite values by
/// numeric comparison. `Finite` never holds NaN, infinity, or negative zero;
/// construct through [`MeasureValue::from_f64`].
#[derive(Debug, Clone, Copy)]
pub enum MeasureValue {
    Undefined,
    NegInf,
    Finite(f64),
    PosInf,
}

impl MeasureValue {
    /// Classifies a raw float: NaN becomes `Undefined`, infinities map to
    /// the signed variants, negative zero is normalized to zero.
    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            MeasureValue::Undefined
        } else if x == f64::INFINITY {
            MeasureValue::PosInf
        } else if x == f64::NEG_INFINITY {
            MeasureValue::NegInf
        } else if x == 0.0 {
            MeasureValue::Finite(0.0)
        } else {
            MeasureValue::Finite(x)
        }
    }

    pub fn is_defined(&self) -> bool {
        !matches!(self, MeasureValue::Undefined)
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            MeasureValue::Finite(x) => Some(*x),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            MeasureValue::Undefined => 0,
            MeasureValue::NegInf => 1,
            MeasureValue::Finite(_) => 2,
            MeasureValue::PosInf => 3,
        }
    }
}

impl PartialEq for MeasureValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MeasureValue {}

impl PartialOrd for MeasureValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeasureValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MeasureValue::Finite(a), MeasureValue::Finite(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Undefined => f.write_str("undefined"),
            MeasureValue::NegInf => f.write_str("-inf"),
            MeasureValue::Finite(x) => write!(f, "{}", x),
            MeasureValue::PosInf => f.write_str("+inf"),
        }
    }
}

/// Klosgen comes in two shapes; the weighted added-value form is the default
/// everywhere, the max-difference form sits behind this switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KlosgenVariant {
    /// sqrt(P(XY)) * (P(Y|X) - P(Y))
    #[default]
    WeightedAddedValue,
    /// sqrt(P(XY)) * max(P(Y|X) - P(Y), P(X|Y) - P(X))
    MaxDifference,
}

/// Cell and marginal probabilities of a table, plus raw counts where a
/// formula wants them.
struct Probs {
    p11: f64,
    p10: f64,
    p01: f64,
    p00: f64,
    px: f64,
    py: f64,
    pnx: f64,
    pny: f64,
    n: f64,
}

impl Probs {
    fn of(t: &ContingencyTable) -> Self {
        let n = t.total() as f64;
        let p11 = t.n11 as f64 / n;
        let p10 = t.n10 as f64 / n;
        let p01 = t.n01 as f64 / n;
        let p00 = t.n00 as f64 / n;
        let px = t.antecedent_count() as f64 / n;
        let py = t.consequent_count() as f64 / n;
        Probs {
            p11,
            p10,
            p01,
            p00,
            px,
            py,
            pnx: 1.0 - px,
            pny: 1.0 - py,
            n,
        }
    }
}

/// Evaluates one measure on a table.
pub fn evaluate(m: MeasureId, t: &ContingencyTable) -> MeasureValue {
    let p = Probs::of(t);
    // simple conditionals come from one division of the exact counts, so
    // equal ratios evaluate to equal floats regardless of dataset size
    let conf = t.n11 as f64 / t.antecedent_count() as f64;
    let recall = t.n11 as f64 / t.consequent_count() as f64;
    let v = match m {
        MeasureId::Support => p.p11,
        MeasureId::Confidence => conf,
        MeasureId::Coverage => p.px,
        MeasureId::Prevalence => p.py,
        MeasureId::Recall => recall,
        MeasureId::Specificity1 => t.n00 as f64 / (t.total() - t.antecedent_count()) as f64,
        MeasureId::Accuracy => p.p11 + p.p00,
        MeasureId::Lift => p.p11 / (p.px * p.py),
        MeasureId::Leverage1 => p.p11 / p.px - p.px * p.py,
        MeasureId::AddedValue => p.p11 / p.px - p.py,
        MeasureId::RelativeRisk => (p.p11 / p.px) / (p.p01 / p.pnx),
        MeasureId::Jaccard | MeasureId::Coherence => jaccard(&p),
        MeasureId::CertaintyFactor => (p.p11 / p.px - p.py) / p.pny,
        MeasureId::OddsRatio => (p.p11 * p.p00) / (p.p10 * p.p01),
        MeasureId::YuleQ => (p.p11 * p.p00 - p.p10 * p.p01) / (p.p11 * p.p00 + p.p10 * p.p01),
        MeasureId::YuleY => {
            let concord = (p.p11 * p.p00).sqrt();
            let discord = (p.p10 * p.p01).sqrt();
            (concord - discord) / (concord + discord)
        }
        MeasureId::Klosgen => return evaluate_klosgen(t, KlosgenVariant::WeightedAddedValue),
        MeasureId::Conviction => (p.px * p.pny) / p.p10,
        MeasureId::CollectiveStrength => {
            // second factor uses P(not-Y | not-X), same as Specificity1
            let s = p.p00 / p.pnx;
            let expected = p.px * p.py + p.pnx * p.pny;
            ((p.p11 + s) / expected) * ((1.0 - expected) / (1.0 - p.p11 - s))
        }
        MeasureId::LaplaceCorrection => (t.n11 as f64 + 1.0) / (t.antecedent_count() as f64 + 2.0),
        MeasureId::GiniIndex => {
            let cy_x = p.p11 / p.px;
            let cny_x = p.p10 / p.px;
            let cy_nx = p.p01 / p.pnx;
            let cny_nx = p.p00 / p.pnx;
            p.px * (cy_x * cy_x + cny_x * cny_x) + p.pnx * (cy_nx * cy_nx + cny_nx * cny_nx)
                - p.py * p.py
                - p.pny * p.pny
        }
        MeasureId::PhiCoefficient => (p.p11 - p.px * p.py) / (p.px * p.py * p.pnx * p.pny).sqrt(),
        MeasureId::JMeasure => {
            // terms with zero weight contribute nothing
            let t1 = if t.n11 == 0 {
                0.0
            } else {
                p.p11 * ((p.p11 / p.px) / p.py).ln()
            };
            let t2 = if t.n10 == 0 {
                0.0
            } else {
                p.p10 * ((p.p10 / p.px) / p.pny).ln()
            };
            t1 + t2
        }
        MeasureId::PiatetskyShapiro | MeasureId::Leverage2 | MeasureId::Wra => leverage(&p),
        MeasureId::Cosine => p.p11 / (p.px * p.py).sqrt(),
        MeasureId::Loevinger => 1.0 - (p.px * p.pny) / p.p10,
        MeasureId::InformationGain => (p.p11 / (p.px * p.py)).ln(),
        MeasureId::SebagSchoenauer => p.p11 / p.p10,
        MeasureId::LeastContradiction => (p.p11 - p.p10) / p.py,
        MeasureId::OddMultiplier => (p.p11 * p.pny) / (p.py * p.p10),
        MeasureId::ExampleCounterexampleRate => 1.0 - p.p10 / p.p11,
        MeasureId::Zhang => (p.p11 - p.px * p.py) / f64::max(p.p11 * p.pny, p.py * p.p10),
        MeasureId::Correlation => {
            // printed without the square root; PhiCoefficient has it
            (p.p11 - p.px * p.py) / (p.px * p.py * p.pnx * p.pny)
        }
        MeasureId::Specificity2 => p.p00,
        MeasureId::AllConfidence => {
            if t.antecedent_count() == 0 || t.consequent_count() == 0 {
                return MeasureValue::Undefined;
            }
            f64::min(recall, conf)
        }
        MeasureId::MaxConfidence => {
            if t.antecedent_count() == 0 || t.consequent_count() == 0 {
                return MeasureValue::Undefined;
            }
            f64::max(recall, conf)
        }
        MeasureId::Kulczynski => {
            if t.antecedent_count() == 0 || t.consequent_count() == 0 {
                return MeasureValue::Undefined;
            }
            (recall + conf) / 2.0
        }
        MeasureId::ChiSquare => return chi_square(t),
    };
    MeasureValue::from_f64(v)
}

/// Klosgen with an explicit variant choice.
pub fn evaluate_klosgen(t: &ContingencyTable, variant: KlosgenVariant) -> MeasureValue {
    let p = Probs::of(t);
    let v = match variant {
        KlosgenVariant::WeightedAddedValue => p.p11.sqrt() * (p.p11 / p.px - p.py),
        KlosgenVariant::MaxDifference => {
            if t.antecedent_count() == 0 || t.consequent_count() == 0 {
                return MeasureValue::Undefined;
            }
            p.p11.sqrt() * f64::max(p.p11 / p.px - p.py, p.p11 / p.py - p.px)
        }
    };
    MeasureValue::from_f64(v)
}

/// Pearson chi-square of the 2x2 table; undefined when any marginal is zero.
pub fn chi_square(t: &ContingencyTable) -> MeasureValue {
    if degenerate_marginals(t) {
        return MeasureValue::Undefined;
    }
    let p = Probs::of(t);
    let cells = [
        (p.p11, p.px, p.py),
        (p.p10, p.px, p.pny),
        (p.p01, p.pnx, p.py),
        (p.p00, p.pnx, p.pny),
    ];
    let sum: f64 = cells
        .iter()
        .map(|(pab, pa, pb)| {
            let e = pa * pb;
            let d = pab - e;
            d * d / e
        })
        .sum();
    MeasureValue::from_f64(p.n * sum)
}

/// Largest chi-square attainable with this table's margins, from the count
/// form of the bound: `(min(nX, nY) - nX*nY/N)^2 * N * e` with
/// `e = 1/(nX nY) + 1/(nX (N-nY)) + 1/((N-nX) nY) + 1/((N-nX)(N-nY))`.
/// Undefined when any marginal is zero.
pub fn max_chi_square(t: &ContingencyTable) -> MeasureValue {
    if degenerate_marginals(t) {
        return MeasureValue::Undefined;
    }
    let n = t.total() as f64;
    let nx = t.antecedent_count() as f64;
    let ny = t.consequent_count() as f64;
    let e = 1.0 / (nx * ny)
        + 1.0 / (nx * (n - ny))
        + 1.0 / ((n - nx) * ny)
        + 1.0 / ((n - nx) * (n - ny));
    let gap = f64::min(nx, ny) - nx * ny / n;
    MeasureValue::from_f64(gap * gap * n * e)
}

fn degenerate_marginals(t: &ContingencyTable) -> bool {
    let nx = t.antecedent_count();
    let ny = t.consequent_count();
    let n = t.total();
    nx == 0 || ny == 0 || nx == n || ny == n
}

fn jaccard(p: &Probs) -> f64 {
    p.p11 / (p.px + p.py - p.p11)
}

// Shared by PiatetskyShapiro, Leverage2, and WRA so the three sort
// identically bit for bit. WRA's P(X)*(P(Y|X) - P(Y)) expands to exactly
// this, with the X-free case going to zero along with P(X).
fn leverage(p: &Probs) -> f64 {
    p.p11 - p.px * p.py
}
