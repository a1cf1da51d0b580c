//! Exhaustive two-coloring search for tiny instances, used as ground truth.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const DEFAULT_ORACLE_LIMIT: u32 = 24;
const HARD_LIMIT: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub colorable: bool,
    /// Number of proper colorings in the enumerated family. Both orientations
    /// of a coloring are counted.
    pub count: u64,
}

pub fn brute_force_oracle(h: &Hypergraph, equitable_only: bool) -> Result<OracleResult> {
    brute_force_oracle_with_limit(h, equitable_only, DEFAULT_ORACLE_LIMIT)
}

/// Enumerates all `2^n` colorings, or all `C(n, n/2)` equitable ones, and
/// counts the proper ones. Rejects `n > limit`.
pub fn brute_force_oracle_with_limit(
    h: &Hypergraph,
    equitable_only: bool,
    limit: u32,
) -> Result<OracleResult> {
    let n = h.n();
    let limit = limit.min(HARD_LIMIT);
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let masks: Vec<u64> = h
        .edges()
        .map(|e| e.iter().fold(0u64, |acc, &v| acc | (1u64 << v)))
        .collect();
    let proper = |red: u64| {
        masks.iter().all(|&e| {
            let r = e & red;
            r != 0 && r != e
        })
    };

    let mut count = 0u64;
    if equitable_only {
        if n % 2 == 1 {
            return Ok(OracleResult { colorable: false, count: 0 });
        }
        let half = n / 2;
        let end = 1u64 << n;
        // Gosper's hack walks every n-bit word with exactly n/2 bits set.
        let mut set = (1u64 << half) - 1;
        while set < end {
            if proper(set) {
                count += 1;
            }
            if set == 0 {
                break;
            }
            let c = set & set.wrapping_neg();
            let r = set + c;
            set = (((r ^ set) >> 2) / c) | r;
        }
    } else {
        for red in 0..(1u64 << n) {
            if proper(red) {
                count += 1;
            }
        }
    }
    Ok(OracleResult { colorable: count > 0, count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn fano() -> Hypergraph {
        let lines = [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]];
        Hypergraph::new(7, 3, lines.iter().map(|l| l.iter().map(|v| v - 1).collect()).collect())
            .unwrap()
    }

    fn complete(n: u32) -> Hypergraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push(vec![a, b]);
            }
        }
        Hypergraph::new(n, 2, edges).unwrap()
    }

    #[test]
    fn fano_plane_is_not_two_colorable() {
        let r = brute_force_oracle(&fano(), false).unwrap();
        assert!(!r.colorable);
        assert_eq!(r.count, 0);
    }

    #[test]
    fn k4_is_not_two_colorable() {
        assert!(!brute_force_oracle(&complete(4), false).unwrap().colorable);
        assert!(!brute_force_oracle(&complete(4), true).unwrap().colorable);
    }

    #[test]
    fn even_cycle() {
        let c6 = Hypergraph::new(6, 2, (0..6).map(|i| vec![i, (i + 1) % 6]).collect()).unwrap();
        let all = brute_force_oracle(&c6, false).unwrap();
        assert!(all.colorable);
        assert_eq!(all.count, 2);
        let eq = brute_force_oracle(&c6, true).unwrap();
        assert!(eq.colorable);
        assert!(eq.count >= 2);
    }

    #[test]
    fn counts_match_closed_forms() {
        // No edges: every coloring is proper.
        let h = Hypergraph::empty(6, 3).unwrap();
        assert_eq!(brute_force_oracle(&h, false).unwrap().count, 64);
        assert_eq!(brute_force_oracle(&h, true).unwrap().count, 20);
        // One 2-edge on four vertices: 16 - 8 monochromatic, and 6 - 2 equitable.
        let h = Hypergraph::new(4, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(brute_force_oracle(&h, false).unwrap().count, 8);
        assert_eq!(brute_force_oracle(&h, true).unwrap().count, 4);
    }

    #[test]
    fn rejects_large_instances() {
        let h = Hypergraph::empty(25, 3).unwrap();
        assert!(matches!(brute_force_oracle(&h, false), Err(Error::TooLarge { n: 25, limit: 24 })));
        assert!(brute_force_oracle_with_limit(&Hypergraph::empty(10, 3).unwrap(), true, 8).is_err());
    }
}
