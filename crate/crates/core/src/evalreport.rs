//! Accuracy by context monotonicity: upward stratum, downward stratum and
//! the micro-averaged total, with an optional difference against a baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::dataset::{extract_context, read_jsonl, DatasetError, ExtractError, HelpRecord};
use crate::labeler::{label, EntailmentLabel, Monotonicity};
use crate::taxonomy::TaxonomyGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("no prediction for gold id {0:?}")]
    MissingPrediction(String),
    #[error("more than one prediction for id {0:?}")]
    DuplicatePrediction(String),
    #[error("prediction for id {0:?} has no gold record")]
    UnexpectedPrediction(String),
    #[error("gold id {0:?} appears more than once")]
    DuplicateGold(String),
    #[error("record {id:?}: unknown {field} {value:?}")]
    UnknownLabel {
        id: String,
        field: &'static str,
        value: String,
    },
    #[error(transparent)]
    Read(#[from] DatasetError),
}

/// A percentage held exactly in hundredths, so 82.31 is `Percent(8231)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percent(pub i64);

impl Percent {
    /// `correct / total` as a percentage, rounded half-up to two decimals.
    /// `None` for an empty stratum.
    pub fn from_ratio(correct: u64, total: u64) -> Option<Self> {
        if total == 0 {
            return None;
        }
        let (c, t) = (correct as i128, total as i128);
        Some(Self(((20_000 * c + t) / (2 * t)) as i64))
    }

    pub fn hundredths(self) -> i64 {
        self.0
    }
}

impl std::ops::Sub for Percent {
    type Output = Percent;

    fn sub(self, rhs: Percent) -> Percent {
        Percent(self.0 - rhs.0)
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

impl FromStr for Percent {
    type Err = String;

    /// Accepts at most two decimals; `93.14`, `-10.8`, `100`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad percentage {s:?}");
        let t = s.trim();
        let (negative, digits) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
        if int.is_empty() || frac.len() > 2 {
            return Err(bad());
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: i64 = int.parse().map_err(|_| bad())?;
        let frac: i64 = format!("{frac:0<2}").parse().map_err(|_| bad())?;
        let value = int.checked_mul(100).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        Ok(Percent(if negative { -value } else { value }))
    }
}

impl Serialize for Percent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0 as f64 / 100.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldRecord {
    pub id: String,
    pub gold_label: EntailmentLabel,
    pub monotonicity: Monotonicity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub predicted: EntailmentLabel,
}

#[derive(Deserialize)]
struct RawGold {
    id: String,
    gold_label: String,
    monotonicity: String,
}

impl TryFrom<RawGold> for GoldRecord {
    type Error = EvalError;

    fn try_from(r: RawGold) -> Result<Self, EvalError> {
        let unknown = |field, value: &str| EvalError::UnknownLabel {
            id: r.id.clone(),
            field,
            value: value.to_string(),
        };
        let gold_label = r
            .gold_label
            .parse()
            .map_err(|_| unknown("gold_label", &r.gold_label))?;
        let monotonicity = match r.monotonicity.as_str() {
            "upward_monotone" => Monotonicity::Upward,
            "downward_monotone" => Monotonicity::Downward,
            other => return Err(unknown("monotonicity", other)),
        };
        Ok(GoldRecord {
            id: r.id,
            gold_label,
            monotonicity,
        })
    }
}

/// Gold file: JSON Lines with at least `id`, `gold_label` and
/// `monotonicity`, so NLI split files can be used directly.
pub fn read_gold(path: impl AsRef<Path>) -> Result<Vec<GoldRecord>, EvalError> {
    read_jsonl::<RawGold>(path)?
        .into_iter()
        .map(GoldRecord::try_from)
        .collect()
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<Vec<PredictionRecord>, EvalError> {
    Ok(read_jsonl(path)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub correct: u64,
    pub total: u64,
    /// `None` when the stratum is empty.
    pub accuracy: Option<Percent>,
}

impl Stratum {
    fn new(correct: u64, total: u64) -> Self {
        Self {
            correct,
            total,
            accuracy: Percent::from_ratio(correct, total),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratifiedReport {
    pub upward: Stratum,
    pub downward: Stratum,
    pub all: Stratum,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<Percent>,
    /// `all − baseline`, computed on the rounded values as printed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Percent>,
}

impl StratifiedReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let cell = |p: Option<Percent>| p.map_or_else(|| "n/a".to_string(), |p| p.to_string());
        let mut out = format!("{:<10} {:>8} {:>8} {:>9}\n", "stratum", "correct", "total", "accuracy");
        for (name, s) in [
            ("upward", &self.upward),
            ("downward", &self.downward),
            ("all", &self.all),
        ] {
            out += &format!(
                "{:<10} {:>8} {:>8} {:>9}\n",
                name,
                s.correct,
                s.total,
                cell(s.accuracy)
            );
        }
        if let Some(b) = self.baseline {
            out += &format!("{:<10} {:>27}\n", "baseline", b.to_string());
            out += &format!("{:<10} {:>27}\n", "delta", cell(self.delta));
        }
        out
    }
}

/// Score predictions against gold, stratified by monotonicity.
///
/// Input order does not matter. When several ids are at fault the
/// lexicographically smallest one is reported.
pub fn score(
    gold: &[GoldRecord],
    preds: &[PredictionRecord],
    baseline: Option<Percent>,
) -> Result<StratifiedReport, EvalError> {
    let mut gold_by_id: BTreeMap<&str, &GoldRecord> = BTreeMap::new();
    let mut dup_gold = BTreeSet::new();
    for g in gold {
        if gold_by_id.insert(&g.id, g).is_some() {
            dup_gold.insert(g.id.as_str());
        }
    }
    if let Some(id) = dup_gold.first() {
        return Err(EvalError::DuplicateGold(id.to_string()));
    }

    let mut pred_by_id: BTreeMap<&str, EntailmentLabel> = BTreeMap::new();
    let mut dup_pred = BTreeSet::new();
    for p in preds {
        if pred_by_id.insert(&p.id, p.predicted).is_some() {
            dup_pred.insert(p.id.as_str());
        }
    }
    if let Some(id) = dup_pred.first() {
        return Err(EvalError::DuplicatePrediction(id.to_string()));
    }
    if let Some(id) = gold_by_id.keys().find(|id| !pred_by_id.contains_key(*id)) {
        return Err(EvalError::MissingPrediction(id.to_string()));
    }
    if let Some(id) = pred_by_id.keys().find(|id| !gold_by_id.contains_key(*id)) {
        return Err(EvalError::UnexpectedPrediction(id.to_string()));
    }

    let (mut up, mut down) = ((0u64, 0u64), (0u64, 0u64));
    for (id, g) in &gold_by_id {
        let hit = u64::from(pred_by_id[id] == g.gold_label);
        let slot = match g.monotonicity {
            Monotonicity::Upward => &mut up,
            Monotonicity::Downward => &mut down,
        };
        slot.0 += hit;
        slot.1 += 1;
    }
    let all = Stratum::new(up.0 + down.0, up.1 + down.1);
    Ok(StratifiedReport {
        upward: Stratum::new(up.0, up.1),
        downward: Stratum::new(down.0, down.1),
        delta: baseline.zip(all.accuracy).map(|(b, a)| a - b),
        all,
        baseline,
    })
}

/// The gold fields of NLI records, for scoring directly against them.
pub fn gold_from_help(records: &[HelpRecord]) -> Vec<GoldRecord> {
    records
        .iter()
        .filter_map(|r| {
            Some(GoldRecord {
                id: r.id.clone(),
                gold_label: r.gold_label,
                monotonicity: r.monotonicity.binary()?,
            })
        })
        .collect()
}

/// A predictor that treats every context as upward monotone: it labels each
/// pair by the upward row of the labeling matrix, whatever the context.
pub fn predict_assuming_upward(records: &[HelpRecord], g: &TaxonomyGraph) -> Vec<PredictionRecord> {
    records
        .iter()
        .map(|r| {
            let predicted = match extract_context(&r.premise, &r.hypothesis) {
                Ok((_, a, b)) => label(Monotonicity::Upward, g.relate(&a, &b)),
                Err(ExtractError::IdenticalSentences) => EntailmentLabel::Entailment,
                Err(_) => EntailmentLabel::Neutral,
            };
            PredictionRecord {
                id: r.id.clone(),
                predicted,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use EntailmentLabel::*;
    use Monotonicity::*;

    fn gold(id: &str, l: EntailmentLabel, m: Monotonicity) -> GoldRecord {
        GoldRecord {
            id: id.into(),
            gold_label: l,
            monotonicity: m,
        }
    }

    fn pred(id: &str, l: EntailmentLabel) -> PredictionRecord {
        PredictionRecord {
            id: id.into(),
            predicted: l,
        }
    }

    fn accuracies(r: &StratifiedReport) -> (String, String, String) {
        let s = |x: &Stratum| x.accuracy.unwrap().to_string();
        (s(&r.upward), s(&r.downward), s(&r.all))
    }

    #[test]
    fn perfect_predictor() {
        let g = vec![gold("1", Entailment, Upward), gold("2", Neutral, Downward)];
        let p = vec![pred("2", Neutral), pred("1", Entailment)];
        let r = score(&g, &p, None).unwrap();
        assert_eq!(accuracies(&r), ("100.00".into(), "100.00".into(), "100.00".into()));
    }

    #[test]
    fn always_entailment() {
        let g = vec![
            gold("1", Entailment, Upward),
            gold("2", Neutral, Upward),
            gold("3", Entailment, Downward),
            gold("4", Neutral, Downward),
        ];
        let p: Vec<_> = g.iter().map(|x| pred(&x.id, Entailment)).collect();
        let r = score(&g, &p, None).unwrap();
        assert_eq!(accuracies(&r), ("50.00".into(), "50.00".into(), "50.00".into()));
    }

    #[test]
    fn delta_against_baseline() {
        let all: Percent = "82.31".parse().unwrap();
        let base: Percent = "93.14".parse().unwrap();
        assert_eq!((all - base).to_string(), "-10.83");
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(Percent::from_ratio(1, 3).unwrap().to_string(), "33.33");
        assert_eq!(Percent::from_ratio(2, 3).unwrap().to_string(), "66.67");
        // 1/8 = 12.5% exactly; 1/16 = 6.25%; 1/32 = 3.125% → 3.13
        assert_eq!(Percent::from_ratio(1, 32).unwrap().to_string(), "3.13");
        assert_eq!(Percent::from_ratio(1, 0), None);
    }

    #[test]
    fn percent_parsing() {
        assert_eq!("93.14".parse::<Percent>(), Ok(Percent(9314)));
        assert_eq!("-10.8".parse::<Percent>(), Ok(Percent(-1080)));
        assert_eq!("100".parse::<Percent>(), Ok(Percent(10000)));
        assert!("1.234".parse::<Percent>().is_err());
        assert!("abc".parse::<Percent>().is_err());
        assert!(".5".parse::<Percent>().is_err());
    }

    #[test]
    fn id_errors() {
        let g = vec![gold("1", Entailment, Upward), gold("2", Neutral, Upward)];
        assert_eq!(
            score(&g, &[pred("1", Entailment)], None),
            Err(EvalError::MissingPrediction("2".into()))
        );
        assert_eq!(
            score(&g, &[pred("1", Entailment), pred("2", Neutral), pred("1", Neutral)], None),
            Err(EvalError::DuplicatePrediction("1".into()))
        );
        assert_eq!(
            score(&g, &[pred("1", Entailment), pred("2", Neutral), pred("9", Neutral)], None),
            Err(EvalError::UnexpectedPrediction("9".into()))
        );
    }

    #[test]
    fn empty_stratum_has_no_accuracy() {
        let r = score(&[gold("1", Entailment, Upward)], &[pred("1", Neutral)], None).unwrap();
        assert_eq!(r.downward.accuracy, None);
        assert!(r.render_table().contains("n/a"));
        assert_eq!(r.all.accuracy, Some(Percent(0)));
    }

    #[test]
    fn non_monotone_gold_is_unknown() {
        let raw = RawGold {
            id: "7".into(),
            gold_label: "entailment".into(),
            monotonicity: "non_monotone".into(),
        };
        assert!(matches!(
            GoldRecord::try_from(raw),
            Err(EvalError::UnknownLabel { field: "monotonicity", .. })
        ));
    }

    #[test]
    fn table_and_json() {
        let g = vec![gold("1", Entailment, Upward), gold("2", Neutral, Downward)];
        let p = vec![pred("1", Entailment), pred("2", Entailment)];
        let r = score(&g, &p, Some(Percent(9314))).unwrap();
        assert_eq!(r.delta, Some(Percent(5000 - 9314)));
        let table = r.render_table();
        assert!(table.contains("-43.14"), "{table}");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["all"]["accuracy"], serde_json::json!(50.0));
        assert_eq!(json["delta"], serde_json::json!(-43.14));
    }
}
