//! Linear algebra over the field with two elements.

/// Solves `M e = t` over F₂ for a matrix given as rows of bits. Returns one
/// solution (free variables set to zero) or `None` if inconsistent.
pub(crate) fn solve(rows: &[Vec<bool>], target: &[bool]) -> Option<Vec<bool>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<bool>> = rows
        .iter()
        .zip(target)
        .map(|(r, &t)| {
            let mut r = r.clone();
            r.push(t);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..aug.len()).find(|&r| aug[r][col]) else {
            continue;
        };
        aug.swap(row, pr);
        for r in 0..aug.len() {
            if r != row && aug[r][col] {
                let pivot_row = aug[row].clone();
                for (x, y) in aug[r].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| r[ncols]) {
        return None;
    }
    let mut e = vec![false; ncols];
    for (r, &col) in pivots.iter().enumerate() {
        e[col] = aug[r][ncols];
    }
    Some(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(rows: &[Vec<bool>], e: &[bool]) -> Vec<bool> {
        rows.iter()
            .map(|r| r.iter().zip(e).filter(|(a, b)| **a && **b).count() % 2 == 1)
            .collect()
    }

    #[test]
    fn small_systems() {
        let rows = vec![vec![true, true], vec![false, true]];
        assert_eq!(solve(&rows, &[true, false]), Some(vec![true, false]));
        let rows = vec![vec![true, true], vec![true, true]];
        assert_eq!(solve(&rows, &[true, false]), None);
        assert_eq!(solve(&[], &[]), Some(vec![]));
    }

    proptest! {
        #[test]
        fn solutions_satisfy_and_brute_force_agrees(
            rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 5), 1..7),
            target in prop::collection::vec(any::<bool>(), 7),
        ) {
            let target = &target[..rows.len()];
            let brute = (0u32..32).any(|m| {
                let e: Vec<bool> = (0..5).map(|i| m >> i & 1 == 1).collect();
                apply(&rows, &e) == target
            });
            match solve(&rows, target) {
                Some(e) => prop_assert_eq!(apply(&rows, &e), target.to_vec()),
                None => prop_assert!(!brute),
            }
        }
    }
}
