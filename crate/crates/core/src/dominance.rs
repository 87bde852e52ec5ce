//! The Pareto dominance relation (minimization) and non-dominated filtering.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::space::ObjectiveVector;

/// `true` iff `a` Pareto-dominates `b` under minimization: `a <= b`
/// componentwise with at least one strict inequality.
///
/// ```
/// use domsearch::{dominates, ObjectiveVector};
///
/// let a = ObjectiveVector::new(vec![0.0, 1.0]);
/// let b = ObjectiveVector::new(vec![1.0, 1.0]);
/// assert!(dominates(&a, &b).unwrap());
/// assert!(!dominates(&b, &a).unwrap());
/// assert!(!dominates(&a, &a).unwrap());
/// ```
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if a.len() != b.len() {
        return Err(invalid(format!(
            "objective vectors have lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dominates_slice(a.as_slice(), b.as_slice()))
}

/// Slice form of [`dominates`]; lengths must already agree.
#[inline]
pub fn dominates_slice(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

pub(crate) fn common_len(objectives: &[ObjectiveVector]) -> Result<usize> {
    let n = objectives.first().map_or(0, ObjectiveVector::len);
    if let Some((i, v)) = objectives.iter().enumerate().find(|(_, v)| v.len() != n) {
        return Err(invalid(format!(
            "objective vector {i} has length {} but expected {n}",
            v.len()
        )));
    }
    Ok(n)
}

/// Indices (ascending) of the vectors not dominated by any other vector in
/// the list. Identical vectors do not dominate each other, so duplicates of a
/// non-dominated vector are all retained.
///
/// Two- and three-objective inputs use sort-and-sweep filters in
/// `O(N log N)`; higher counts fall back to pairwise comparison.
pub fn non_dominated_indices(objectives: &[ObjectiveVector]) -> Result<Vec<usize>> {
    let n = common_len(objectives)?;
    if objectives.iter().any(|v| !v.is_finite()) {
        return Err(invalid("non-dominated filter requires finite objectives"));
    }
    let mut keep = match n {
        0 => (0..objectives.len()).collect(),
        1..=3 => sweep(objectives, n),
        _ => pairwise(objectives),
    };
    keep.sort_unstable();
    Ok(keep)
}

/// Convenience wrapper returning the non-dominated vectors themselves.
pub fn non_dominated(objectives: &[ObjectiveVector]) -> Result<Vec<ObjectiveVector>> {
    Ok(non_dominated_indices(objectives)?
        .into_iter()
        .map(|i| objectives[i].clone())
        .collect())
}

fn pairwise(objectives: &[ObjectiveVector]) -> Vec<usize> {
    (0..objectives.len())
        .filter(|&i| {
            !objectives
                .iter()
                .any(|q| dominates_slice(q.as_slice(), objectives[i].as_slice()))
        })
        .collect()
}

/// Total-order key; callers normalize `-0.0` to `0.0` first.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Any dominator of `p` precedes it in lexicographic order, so a single pass
/// over groups of identical vectors suffices. For three objectives the
/// processed groups are summarized by a staircase over `(f2, f3)`.
fn sweep(objectives: &[ObjectiveVector], n: usize) -> Vec<usize> {
    let norm: Vec<Vec<f64>> = objectives
        .iter()
        .map(|v| v.as_slice().iter().map(|x| x + 0.0).collect())
        .collect();
    let mut order: Vec<usize> = (0..norm.len()).collect();
    order.sort_by(|&a, &b| lex(&norm[a], &norm[b]).then(a.cmp(&b)));

    let mut keep = Vec::new();
    let mut best_f2 = f64::INFINITY;
    // f2 -> f3 with f3 strictly decreasing as f2 increases
    let mut stairs: BTreeMap<Key, f64> = BTreeMap::new();
    let mut seen_any = false;

    let mut start = 0;
    while start < order.len() {
        let head = &norm[order[start]];
        let mut end = start + 1;
        while end < order.len() && lex(&norm[order[end]], head) == Ordering::Equal {
            end += 1;
        }
        let dominated = match n {
            1 => seen_any,
            2 => best_f2 <= head[1],
            _ => stairs
                .range(..=Key(head[1]))
                .next_back()
                .is_some_and(|(_, &f3)| f3 <= head[2]),
        };
        if !dominated {
            keep.extend_from_slice(&order[start..end]);
            match n {
                1 => {}
                2 => best_f2 = best_f2.min(head[1]),
                _ => {
                    let redundant: Vec<Key> = stairs
                        .range(Key(head[1])..)
                        .take_while(|(_, &f3)| f3 >= head[2])
                        .map(|(k, _)| *k)
                        .collect();
                    for k in redundant {
                        stairs.remove(&k);
                    }
                    stairs.insert(Key(head[1]), head[2]);
                }
            }
        }
        seen_any = true;
        start = end;
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(v.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(!dominates(&ov(&[1.0, 2.0]), &ov(&[1.0, 2.0])).unwrap());
        assert!(dominates(&ov(&[0.0, 1.0]), &ov(&[1.0, 1.0])).unwrap());
        assert!(!dominates(&ov(&[1.0, 1.0]), &ov(&[0.0, 1.0])).unwrap());
        assert!(!dominates(&ov(&[0.0, 2.0]), &ov(&[1.0, 1.0])).unwrap());
        assert!(!dominates(&ov(&[1.0, 1.0]), &ov(&[0.0, 2.0])).unwrap());
        assert!(dominates(&ov(&[0.0]), &ov(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn signed_zero_is_equal() {
        let v = vec![ov(&[-0.0, 1.0, 0.0]), ov(&[0.0, 1.0, -0.0]), ov(&[0.0, 0.5, 0.0])];
        assert_eq!(non_dominated_indices(&v).unwrap(), vec![2]);
        let w = vec![ov(&[1.0, -0.0]), ov(&[1.0, 0.0])];
        assert_eq!(non_dominated_indices(&w).unwrap(), vec![0, 1]);
    }

    #[test]
    fn filter_rejects_ragged_or_nan() {
        assert!(non_dominated_indices(&[ov(&[0.0, 1.0]), ov(&[0.0])]).is_err());
        assert!(non_dominated_indices(&[ov(&[f64::NAN, 1.0])]).is_err());
        assert!(non_dominated_indices(&[]).unwrap().is_empty());
    }

    fn small_vectors(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec((0i32..6).prop_map(f64::from), n), 0..40)
    }

    proptest! {
        #[test]
        fn irreflexive_asymmetric_transitive(
            a in prop::collection::vec(-3i32..3, 3),
            b in prop::collection::vec(-3i32..3, 3),
            c in prop::collection::vec(-3i32..3, 3),
        ) {
            let f = |v: &Vec<i32>| v.iter().map(|&x| f64::from(x)).collect::<Vec<_>>();
            let (a, b, c) = (f(&a), f(&b), f(&c));
            prop_assert!(!dominates_slice(&a, &a));
            if dominates_slice(&a, &b) {
                prop_assert!(!dominates_slice(&b, &a));
                if dominates_slice(&b, &c) {
                    prop_assert!(dominates_slice(&a, &c));
                }
            }
        }

        #[test]
        fn sweep_matches_pairwise_2(v in small_vectors(2)) {
            let v: Vec<_> = v.into_iter().map(ObjectiveVector::new).collect();
            prop_assert_eq!(non_dominated_indices(&v).unwrap(), pairwise(&v));
        }

        #[test]
        fn sweep_matches_pairwise_3(v in small_vectors(3)) {
            let v: Vec<_> = v.into_iter().map(ObjectiveVector::new).collect();
            prop_assert_eq!(non_dominated_indices(&v).unwrap(), pairwise(&v));
        }

        #[test]
        fn sweep_matches_pairwise_1(v in small_vectors(1)) {
            let v: Vec<_> = v.into_iter().map(ObjectiveVector::new).collect();
            prop_assert_eq!(non_dominated_indices(&v).unwrap(), pairwise(&v));
        }
    }
}
