//! JSON records emitted by `classify --json` and `limits --json`.

use coxeter_limits::limits::{Classification, Cluster, LimitPoint, PosEstimate};
use serde::{Deserialize, Serialize};

/// Flat view of a [`LimitPoint`].
///
/// `host` is set for affine limit roots and `weights` for convex
/// combinations; the full classification is kept alongside so the record
/// converts back without loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub coords: Vec<f64>,
    pub classification: Classification,
    pub host: Option<Vec<usize>>,
    pub weights: Option<Vec<f64>>,
    pub pos_count: usize,
    pub stabilized: bool,
}

impl From<&LimitPoint> for ClassificationRecord {
    fn from(p: &LimitPoint) -> Self {
        let (host, weights) = match &p.classification {
            Classification::AffineLimit { host, .. } => (Some(host.members().to_vec()), None),
            Classification::AffTypeSum { weights, .. } => (None, Some(weights.clone())),
            _ => (None, None),
        };
        ClassificationRecord {
            coords: p.coords.clone(),
            classification: p.classification.clone(),
            host,
            weights,
            pos_count: p.pos_estimate.count,
            stabilized: p.pos_estimate.stabilized,
        }
    }
}

impl From<ClassificationRecord> for LimitPoint {
    fn from(r: ClassificationRecord) -> Self {
        LimitPoint {
            coords: r.coords,
            classification: r.classification,
            pos_estimate: PosEstimate {
                count: r.pos_count,
                stabilized: r.stabilized,
            },
        }
    }
}

/// A cluster together with the classification of its center, when the
/// center is isotropic enough to classify.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub center: Vec<f64>,
    pub size: usize,
    pub radius: f64,
    pub isotropy_defect: f64,
    pub classification: Option<ClassificationRecord>,
}

impl ClusterRecord {
    pub fn new(c: &Cluster, classification: Option<&LimitPoint>) -> Self {
        ClusterRecord {
            center: c.center.clone(),
            size: c.members.len(),
            radius: c.radius,
            isotropy_defect: c.isotropy_defect,
            classification: classification.map(ClassificationRecord::from),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxeter_limits::{SimpleSubset, Word};

    #[test]
    fn record_round_trips() {
        let p = LimitPoint {
            coords: vec![0.25, 0.25, 0.0, 0.25, 0.25],
            classification: Classification::AffTypeSum {
                components: vec![SimpleSubset::from([0, 1]), SimpleSubset::from([3, 4])],
                weights: vec![0.5, 0.5],
                reducer: Word::identity(),
            },
            pos_estimate: PosEstimate { count: 0, stabilized: true },
        };
        let rec = ClassificationRecord::from(&p);
        assert_eq!(rec.weights.as_deref(), Some(&[0.5, 0.5][..]));
        let text = serde_json::to_string(&rec).unwrap();
        let back: ClassificationRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(LimitPoint::from(back), p);
    }

    #[test]
    fn host_only_for_affine_limits() {
        let p = LimitPoint {
            coords: vec![0.5, 0.5],
            classification: Classification::AffineLimit {
                host: SimpleSubset::from([0, 1]),
                reducer: Word::new(vec![1]),
            },
            pos_estimate: PosEstimate { count: 0, stabilized: true },
        };
        let rec = ClassificationRecord::from(&p);
        assert_eq!(rec.host, Some(vec![0, 1]));
        assert_eq!(rec.weights, None);
    }
}
