//! Constrained counts by division with remainder: the count on a gadget-expanded
//! graph is q·2^{d|J|} + r, and the quotient q is the count with J forced and J′ excluded.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::balanced::count_balanced;
use super::tw2::count_sc;
use crate::error::{Error, Result};
use crate::gadgets::{marginal_graph, w_marginal_graph};
use crate::graph::{EdgeSet, MultiGraph};

/// 4⌈(n² + log₂ n² + 1)²⌉, which is at most 36n⁴.
pub fn default_d_cycles(n: usize) -> u64 {
    let n2 = (n.max(1) * n.max(1)) as f64;
    let x = n2 + n2.log2() + 1.0;
    4 * (x * x).ceil() as u64
}

/// n² + 1.
pub fn default_d_balanced(n: usize) -> u64 {
    (n * n + 1) as u64
}

fn pow2(bits: u64) -> BigUint {
    BigUint::one() << bits
}

/// b_{J,J′} = |{C ∈ SC(g) : J ⊆ C, C ∩ J′ = ∅}| from |SC(G_{J,J′}(d))|. The remainder
/// is bounded by |SC(g − J′)|·2^{d(|J|−1)} + d|J| and must fall below 2^{d|J|}.
pub fn sc_count_remainder(g: &MultiGraph, j: &EdgeSet, j2: &EdgeSet, d: Option<u64>) -> Result<BigUint> {
    if !j.is_disjoint(j2) {
        return Err(Error::InvalidInput("J and J′ must be disjoint".into()));
    }
    let (minus, _) = g.delete_edges(j2);
    if j.is_empty() {
        return count_sc(&minus);
    }
    let d = d.unwrap_or_else(|| default_d_cycles(g.node_count()));
    if d == 0 {
        return Err(Error::InsufficientD { d });
    }
    let jn = j.count() as u64;
    let c0 = count_sc(&minus)?;
    let bound = c0 * pow2(d * (jn - 1)) + BigUint::from(d * jn);
    let modulus = pow2(d * jn);
    if bound >= modulus {
        return Err(Error::InsufficientD { d });
    }
    let expanded = marginal_graph(g, j, j2, d as usize)?;
    let total = count_sc(&expanded.derived)?;
    Ok(total >> (d * jn))
}

/// a_{J,J′} = |{X ∈ P₂⁰(g, w) : J ⊆ cut(X), cut(X) ∩ J′ = ∅}| from |P₂⁰(W^{J,J′}(g, w)(d))|.
/// The remainder is bounded by |P₂⁰(g/J′)|·2^{d(|J|−1)}, certified below 2^{d|J|}.
pub fn balanced_count_remainder(g: &MultiGraph, w: &[u64], j: &EdgeSet, j2: &EdgeSet, d: Option<u64>) -> Result<BigUint> {
    if w.len() != g.node_count() {
        return Err(Error::InvalidInput("one weight per node required".into()));
    }
    let total: u64 = w.iter().sum();
    if total == 0 {
        return Err(Error::InvalidInput("remainder extraction needs positive total weight".into()));
    }
    if total % 2 == 1 {
        return Ok(BigUint::zero());
    }
    let mut weighted = g.clone();
    weighted.set_weights(Some(w.to_vec()));
    let (quotient, _, _) = weighted.contract_edges(j2);
    let c0 = count_balanced(&quotient, None)?;
    if j.is_empty() {
        return Ok(c0);
    }
    let d = d.unwrap_or_else(|| default_d_balanced(g.node_count()));
    if d == 0 || c0 >= pow2(d) {
        return Err(Error::InsufficientD { d });
    }
    let expanded = w_marginal_graph(g, w, j, j2, d as usize)?;
    let n = count_balanced(&expanded.derived, None)?;
    Ok(n >> (d * j.count() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        assert_eq!(default_d_balanced(4), 17);
        for n in 1..20 {
            assert!(default_d_cycles(n) <= 36 * (n as u64).pow(4));
        }
        assert_eq!(default_d_cycles(1), 16);
    }

    #[test]
    fn theta_cycles_through_an_edge() {
        let g = MultiGraph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]);
        let none = g.empty_edge_set();
        assert_eq!(sc_count_remainder(&g, &none, &none, None).unwrap(), BigUint::from(3u32));
        let j = EdgeSet::from_ids(6, [0]);
        assert_eq!(sc_count_remainder(&g, &j, &none, Some(4)).unwrap(), BigUint::from(2u32));
        assert!(matches!(sc_count_remainder(&g, &j, &none, Some(1)), Err(Error::InsufficientD { .. })));
    }

    #[test]
    fn balanced_path_with_forced_cut() {
        let p4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let w = [1, 1, 1, 1];
        let none = p4.empty_edge_set();
        assert_eq!(balanced_count_remainder(&p4, &w, &EdgeSet::from_ids(3, [1]), &none, None).unwrap(), BigUint::one());
        assert_eq!(balanced_count_remainder(&p4, &w, &EdgeSet::from_ids(3, [0]), &none, None).unwrap(), BigUint::zero());
        assert_eq!(balanced_count_remainder(&p4, &w, &none, &EdgeSet::from_ids(3, [1]), None).unwrap(), BigUint::zero());
    }
}
