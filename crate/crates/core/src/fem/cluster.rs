use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative gap for grouping nearly equal eigenvalues.
pub const DEFAULT_REL_TOL: f64 = 1e-2;

/// A run of nearly equal eigenvalues. `value` is the smallest member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

/// Greedy single-linkage clustering of a sorted list: a value joins the
/// current cluster when its gap to the previous value is at most
/// `rel_tol · max(1, |value|)`.
pub fn cluster_multiplicities(values: &[f64], rel_tol: f64) -> Result<Vec<Cluster>> {
    if !(rel_tol.is_finite() && rel_tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("rel_tol must be non-negative, got {rel_tol}")));
    }
    if let Some(i) = values.windows(2).position(|w| !(w[1] >= w[0])) {
        return Err(Error::Unsorted(i + 1));
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if v - values[i - 1] <= rel_tol * v.abs().max(1.0) => c.multiplicity += 1,
            _ => clusters.push(Cluster { value: v, multiplicity: 1 }),
        }
    }
    Ok(clusters)
}

/// Index of the cluster holding the `k`-th value, if any.
pub(crate) fn cluster_of(clusters: &[Cluster], k: usize) -> Option<usize> {
    let mut end = 0;
    for (c, cl) in clusters.iter().enumerate() {
        end += cl.multiplicity;
        if k < end {
            return Some(c);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rule_application() {
        let c = cluster_multiplicities(&[0.0, 1.0, 1.0004, 2.0], 1e-3).unwrap();
        assert_eq!(
            c,
            vec![
                Cluster { value: 0.0, multiplicity: 1 },
                Cluster { value: 1.0, multiplicity: 2 },
                Cluster { value: 2.0, multiplicity: 1 },
            ]
        );
        assert_eq!(cluster_of(&c, 2), Some(1));
        assert_eq!(cluster_of(&c, 4), None);
    }

    #[test]
    fn empty_and_unsorted() {
        assert!(cluster_multiplicities(&[], 1e-2).unwrap().is_empty());
        assert!(matches!(cluster_multiplicities(&[1.0, 0.5], 1e-2), Err(Error::Unsorted(1))));
        assert!(cluster_multiplicities(&[0.0, f64::NAN], 1e-2).is_err());
    }

    proptest! {
        #[test]
        fn multiplicities_partition_the_input(mut v in proptest::collection::vec(0.0f64..10.0, 0..40), tol in 0.0f64..0.5) {
            v.sort_by(f64::total_cmp);
            let c = cluster_multiplicities(&v, tol).unwrap();
            prop_assert_eq!(c.iter().map(|c| c.multiplicity).sum::<usize>(), v.len());
            prop_assert!(c.iter().all(|c| c.multiplicity >= 1));
        }
    }
}
