use std::ops::Deref;

use crate::error::{Error, Result};

/// Fitness tuple; every entry is minimised.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(pub Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        ObjectiveVector(values)
    }

    /// Sentinel for a penalty-killed individual: dominated by every finite
    /// vector of the same arity.
    pub fn worst(arity: usize) -> Self {
        ObjectiveVector(vec![f64::INFINITY; arity])
    }

    pub fn is_worst(&self) -> bool {
        self.0.iter().all(|v| *v == f64::INFINITY)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `self` is no worse anywhere and strictly better somewhere.
    pub(crate) fn dominates_unchecked(&self, other: &Self) -> bool {
        let mut strictly = false;
        for (a, b) in self.0.iter().zip(&other.0) {
            if a > b {
                return false;
            }
            if a < b {
                strictly = true;
            }
        }
        strictly
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        ObjectiveVector(v)
    }
}

/// Pareto domination under minimisation.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Usage(format!(
            "cannot compare objective vectors of arity {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.dominates_unchecked(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector(v.to_vec())
    }

    #[test]
    fn domination_cases() {
        assert!(!dominates(&ov(&[1.0, 2.0]), &ov(&[1.0, 2.0])).unwrap());
        assert!(dominates(&ov(&[1.0, 2.0]), &ov(&[2.0, 2.0])).unwrap());
        assert!(!dominates(&ov(&[1.0, 3.0]), &ov(&[2.0, 2.0])).unwrap());
        assert!(!dominates(&ov(&[2.0, 2.0]), &ov(&[1.0, 3.0])).unwrap());
    }

    #[test]
    fn arity_mismatch_is_usage_error() {
        assert!(matches!(
            dominates(&ov(&[1.0]), &ov(&[1.0, 2.0])),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn worst_is_dominated_by_any_finite_vector() {
        let w = ObjectiveVector::worst(2);
        assert!(dominates(&ov(&[1e300, -5.0]), &w).unwrap());
        assert!(!dominates(&w, &w).unwrap());
        assert!(w.is_worst());
    }
}
