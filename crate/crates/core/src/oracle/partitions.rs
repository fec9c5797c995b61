//! Exhaustive enumeration of connected k-partitions.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::partition::{is_connected_partition, is_eps_balanced, Partition};

#[derive(Clone, Debug)]
pub struct EnumOptions {
    pub ordered: bool,
    pub allow_empty: bool,
    pub eps: Option<BigRational>,
    pub weights: Option<Vec<u64>>,
    pub state_guard: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { ordered: true, allow_empty: false, eps: None, weights: None, state_guard: super::DEFAULT_STATE_GUARD }
    }
}

impl EnumOptions {
    pub fn ordered(allow_empty: bool) -> Self {
        EnumOptions { ordered: true, allow_empty, ..Default::default() }
    }

    pub fn unordered(allow_empty: bool) -> Self {
        EnumOptions { ordered: false, allow_empty, ..Default::default() }
    }
}

/// All members of P_k (ordered) or the unordered P_k, in lexicographic order of the
/// assignment vector. Unordered partitions are returned in canonical form.
pub fn enum_connected_partitions(g: &MultiGraph, k: usize, opts: &EnumOptions) -> Result<Vec<Partition>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let n = g.node_count();
    let states = (k as f64).powi(n as i32);
    if states > opts.state_guard as f64 {
        return Err(Error::GuardExceeded {
            what: "block assignments".into(),
            size: states.min(usize::MAX as f64) as usize,
            limit: opts.state_guard,
        });
    }
    if opts.eps.is_some() && k != 2 {
        return Err(Error::InvalidInput("balance filter requires k = 2".into()));
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    loop {
        if admissible(g, k, &assign, opts)? {
            out.push(Partition::from_assign(k, assign.clone()));
        }
        // odometer increment, last node fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
        }
    }
}

fn admissible(g: &MultiGraph, k: usize, assign: &[usize], opts: &EnumOptions) -> Result<bool> {
    let p = Partition::from_assign(k, assign.to_vec());
    if !opts.allow_empty && p.has_empty_block() {
        return Ok(false);
    }
    if !opts.ordered && p.canonical() != p {
        return Ok(false);
    }
    if !is_connected_partition(g, &p) {
        return Ok(false);
    }
    if let Some(eps) = &opts.eps {
        let w = opts.weights.as_deref().or(g.weights());
        return is_eps_balanced(&p, eps, w);
    }
    Ok(true)
}
