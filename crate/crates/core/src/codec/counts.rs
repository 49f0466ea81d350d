//! Closed-form residual check counts for the natural-visibility decoder.

/// Remaining checks charged to a node at height `h` of a perfectly balanced
/// tree: `2^(h+1) - 1 - 2h`.
///
/// Panics when the result does not fit in `u64` (`h > 62`).
pub fn per_node_residual_count(h: u32) -> u64 {
    assert!(h <= 62, "height {h} too large");
    (1u64 << (h + 1)) - 1 - 2 * u64::from(h)
}

/// `sum_{h=2}^{h_max} 2^(h_max - h) * (2^(h+1) - 2h - 1)`: the per-node count
/// weighted by the number of nodes at each height, skipping the bottom two
/// levels. Zero for `h_max < 2` (empty sum).
pub fn residual_check_formula_balanced(h_max: u32) -> u64 {
    (2..=h_max)
        .map(|h| (1u64 << (h_max - h)) * per_node_residual_count(h))
        .sum()
}

/// Checks the decoder actually performs on a perfect tree of height `h_max`:
/// a node at height `h` has `2^(h+1) - 2` descendants, `2h` of them settled
/// by the branch rules.
pub fn balanced_tree_residual_checks(h_max: u32) -> u64 {
    assert!(h_max <= 61, "height {h_max} too large");
    (0..=h_max)
        .map(|h| (1u64 << (h_max - h)) * ((1u64 << (h + 1)) - 2 - 2 * u64::from(h)))
        .sum()
}

/// Checks on a tree degenerated into a line of `n` nodes: `(n-1)(n-2)/2`.
pub fn line_residual_checks(n: u64) -> u64 {
    if n < 2 {
        0
    } else {
        (n - 1) * (n - 2) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_node_values() {
        assert_eq!(per_node_residual_count(0), 1);
        assert_eq!(per_node_residual_count(1), 1);
        assert_eq!(per_node_residual_count(2), 3);
        assert_eq!(per_node_residual_count(3), 9);
    }

    #[test]
    fn balanced_formula_values() {
        assert_eq!(residual_check_formula_balanced(0), 0);
        assert_eq!(residual_check_formula_balanced(1), 0);
        assert_eq!(residual_check_formula_balanced(2), 3);
        assert_eq!(residual_check_formula_balanced(3), 15);
    }

    /// The expanded form `2^hm [2(hm-1) - sum h 2^(1-h) - sum 2^(-h)]`, evaluated in floats.
    #[test]
    fn balanced_formula_matches_expanded_form() {
        for hm in 2..=30u32 {
            let tail: f64 = (2..=hm)
                .map(|h| f64::from(h) * 2f64.powi(1 - h as i32))
                .sum::<f64>()
                + (2..=hm).map(|h| 2f64.powi(-(h as i32))).sum::<f64>();
            let expanded = 2f64.powi(hm as i32) * (2.0 * f64::from(hm - 1) - tail);
            assert_eq!(
                expanded.round() as u64,
                residual_check_formula_balanced(hm),
                "h_max={hm}"
            );
        }
    }

    #[test]
    fn actual_balanced_count_is_one_less_per_upper_node() {
        assert_eq!(balanced_tree_residual_checks(0), 0);
        assert_eq!(balanced_tree_residual_checks(1), 0);
        assert_eq!(balanced_tree_residual_checks(2), 2);
        assert_eq!(balanced_tree_residual_checks(3), 12);
        for hm in 2..=20u32 {
            let upper_nodes = (1u64 << (hm - 1)) - 1;
            assert_eq!(
                balanced_tree_residual_checks(hm) + upper_nodes,
                residual_check_formula_balanced(hm)
            );
        }
    }

    #[test]
    fn line_values() {
        assert_eq!(line_residual_checks(0), 0);
        assert_eq!(line_residual_checks(1), 0);
        assert_eq!(line_residual_checks(2), 0);
        assert_eq!(line_residual_checks(5), 6);
    }
}
