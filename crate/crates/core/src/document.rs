//! JSON interchange format for fixed-point data.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpdata::{FixedPoint, FixedPointData, Sign, ValidationReport};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("dim must be a positive even integer, got {0}")]
    Dimension(usize),
    #[error("invalid data: {0}")]
    Invalid(#[from] ValidationReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub sign: Sign,
    pub weights: Vec<u64>,
}

/// `{"dim": 2n, "points": [{"sign": 1|-1, "weights": [...]}, ...]}` with
/// weights written in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointDataDocument {
    pub dim: usize,
    pub points: Vec<PointEntry>,
}

impl FixedPointDataDocument {
    pub fn from_data(data: &FixedPointData) -> Self {
        Self {
            dim: data.dim(),
            points: data
                .points()
                .iter()
                .map(|p| PointEntry {
                    sign: p.sign,
                    weights: p.weights().to_vec(),
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Converts and validates.
    pub fn to_data(&self) -> Result<FixedPointData, DocumentError> {
        if self.dim == 0 || self.dim % 2 != 0 {
            return Err(DocumentError::Dimension(self.dim));
        }
        let data = FixedPointData::new(
            self.dim / 2,
            self.points
                .iter()
                .map(|p| FixedPoint::new(p.sign, p.weights.clone()))
                .collect(),
        );
        data.validate()?;
        Ok(data)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

pub fn parse_data(text: &str) -> Result<FixedPointData, DocumentError> {
    FixedPointDataDocument::parse(text)?.to_data()
}

pub fn data_to_json(data: &FixedPointData) -> String {
    FixedPointDataDocument::from_data(data).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpdata::hp2_family;
    use proptest::prelude::*;

    #[test]
    fn hp2_document() {
        let doc = FixedPointDataDocument::from_data(&hp2_family(1, 1, 1).unwrap());
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"dim": 8, "points": [
                {"sign": 1, "weights": [1, 2, 2, 3]},
                {"sign": 1, "weights": [1, 1, 2, 2]},
                {"sign": -1, "weights": [1, 1, 1, 3]}
            ]})
        );
    }

    #[test]
    fn weights_are_sorted_on_output() {
        let d = parse_data(r#"{"dim": 4, "points": [{"sign": 1, "weights": [2, 1]}, {"sign": -1, "weights": [1, 2]}]}"#).unwrap();
        assert!(data_to_json(&d).contains("\"weights\": [\n        1,\n        2\n      ]"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_data("{"), Err(DocumentError::Json(_))));
        assert!(matches!(
            parse_data(r#"{"dim": 4, "points": [{"sign": 2, "weights": [1, 1]}]}"#),
            Err(DocumentError::Json(_))
        ));
        assert!(matches!(
            parse_data(r#"{"dim": 3, "points": [{"sign": 1, "weights": [1]}]}"#),
            Err(DocumentError::Dimension(3))
        ));
        assert!(matches!(
            parse_data(r#"{"dim": 4, "points": [{"sign": 1, "weights": [1]}]}"#),
            Err(DocumentError::Invalid(_))
        ));
        assert!(matches!(
            parse_data(r#"{"dim": 4, "points": [{"sign": 1, "weights": [0, 1]}]}"#),
            Err(DocumentError::Invalid(_))
        ));
    }

    fn arb_data() -> impl Strategy<Value = FixedPointData> {
        (1usize..5).prop_flat_map(|n| {
            prop::collection::vec(
                (any::<bool>(), prop::collection::vec(1u64..50, n)),
                1..6,
            )
            .prop_map(move |pts| {
                FixedPointData::new(
                    n,
                    pts.into_iter()
                        .map(|(s, w)| FixedPoint::new(if s { Sign::Plus } else { Sign::Minus }, w))
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(d in arb_data()) {
            let text = data_to_json(&d);
            let back = parse_data(&text).unwrap();
            prop_assert_eq!(&back, &d);
            prop_assert_eq!(data_to_json(&back), text);
        }
    }
}
