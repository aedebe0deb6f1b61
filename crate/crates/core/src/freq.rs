//! Lattice frequencies xi in Z^N.
//!
//! Frequencies are kept as i128 vectors: witness sequences reach
//! denominators near 10^24, far beyond i64.

pub type Freq = Vec<i128>;

/// Sup norm as an integer.
pub fn norm_sup_int(xi: &[i128]) -> i128 {
    xi.iter().map(|c| c.abs()).max().unwrap_or(0)
}

/// Sup norm as f64 (exact for the ranges in use).
pub fn norm_sup(xi: &[i128]) -> f64 {
    norm_sup_int(xi) as f64
}

/// Dyadic shell index: k with 2^k <= ||xi|| < 2^{k+1}; None for ||xi|| = 0.
pub fn shell_index(xi: &[i128]) -> Option<u32> {
    let n = norm_sup_int(xi);
    if n == 0 {
        None
    } else {
        Some(127 - n.leading_zeros())
    }
}

/// All lattice points of Z^N with sup norm <= xi_max.
pub fn window_points(n_dim: usize, xi_max: i64) -> Vec<Freq> {
    let mut out = Vec::new();
    let mut cur = vec![-(xi_max as i128); n_dim];
    loop {
        out.push(cur.clone());
        let mut axis = n_dim;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if cur[axis] < xi_max as i128 {
                cur[axis] += 1;
                for c in cur.iter_mut().skip(axis + 1) {
                    *c = -(xi_max as i128);
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells() {
        assert_eq!(shell_index(&[0]), None);
        assert_eq!(shell_index(&[1]), Some(0));
        assert_eq!(shell_index(&[-2]), Some(1));
        assert_eq!(shell_index(&[1023]), Some(9));
        assert_eq!(shell_index(&[1024]), Some(10));
    }

    #[test]
    fn window_enumeration() {
        let pts = window_points(2, 1);
        assert_eq!(pts.len(), 9);
        assert!(pts.contains(&vec![0, 0]));
        assert!(pts.contains(&vec![-1, 1]));
    }
}
