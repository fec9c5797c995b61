//! Two-party vote overlays and district seat counts.

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartyMode {
    /// Party 1 holds the nodes with the smallest x coordinates.
    Left,
    /// Party 1 holds the nodes with the smallest y coordinates.
    Bottom,
}

/// Party 1 on the nodes strictly below a coordinate threshold. The threshold is
/// the one whose node count is closest to fraction·n, ties going to the smaller count.
pub fn assign_party(layout: &[(f64, f64)], mode: PartyMode, fraction: f64) -> Result<Vec<u8>> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidInput(format!("party fraction {fraction} outside (0, 1)")));
    }
    let coord = |i: usize| match mode {
        PartyMode::Left => layout[i].0,
        PartyMode::Bottom => layout[i].1,
    };
    let n = layout.len();
    let mut values: Vec<f64> = (0..n).map(coord).collect();
    values.sort_by(f64::total_cmp);
    let target = fraction * n as f64;
    let mut best: Option<(f64, usize, f64)> = None;
    let mut consider = |count: usize, threshold: f64| {
        let dist = (count as f64 - target).abs();
        if best.is_none_or(|(d, c, _)| dist < d || (dist == d && count < c)) {
            best = Some((dist, count, threshold));
        }
    };
    for (i, &v) in values.iter().enumerate() {
        if i == 0 || values[i - 1] < v {
            consider(i, v);
        }
    }
    consider(n, f64::INFINITY);
    let threshold = best.map_or(f64::NEG_INFINITY, |b| b.2);
    Ok((0..n).map(|i| u8::from(coord(i) < threshold)).collect())
}

/// Number of blocks in which party 1 holds a strict majority of nodes.
pub fn seat_count(p: &Partition, party: &[u8]) -> Result<usize> {
    if party.len() != p.node_count() {
        return Err(Error::InvalidInput("one party label per node required".into()));
    }
    let mut votes = vec![(0usize, 0usize); p.k()];
    for (v, &b) in p.assign().iter().enumerate() {
        if party[v] == 1 {
            votes[b].1 += 1;
        } else {
            votes[b].0 += 1;
        }
    }
    Ok(votes.iter().filter(|(zero, one)| one > zero).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_layout(n: usize) -> Vec<(f64, f64)> {
        (0..n).flat_map(|y| (0..n).map(move |x| (x as f64, y as f64))).collect()
    }

    #[test]
    fn left_sixty_percent_on_a_small_grid() {
        let layout = grid_layout(4);
        let party = assign_party(&layout, PartyMode::Left, 0.6).unwrap();
        // 9.6 of 16 nodes: two columns give 8, three give 12, so two columns win.
        assert_eq!(party.iter().filter(|&&x| x == 1).count(), 8);
        assert!((0..16).all(|v| (party[v] == 1) == (layout[v].0 < 2.0)));
        let halves = Partition::from_assign(2, (0..16).map(|v| usize::from(layout[v].0 >= 2.0)).collect());
        assert_eq!(seat_count(&halves, &party).unwrap(), 1);
        let rows = Partition::from_assign(2, (0..16).map(|v| usize::from(layout[v].1 >= 2.0)).collect());
        assert_eq!(seat_count(&rows, &party).unwrap(), 0);
        let bottom = assign_party(&layout, PartyMode::Bottom, 0.6).unwrap();
        assert_eq!(seat_count(&rows, &bottom).unwrap(), 1);
    }

    #[test]
    fn extremes() {
        let p = Partition::from_assign(3, vec![0, 1, 2, 2]);
        assert_eq!(seat_count(&p, &[1, 1, 1, 1]).unwrap(), 3);
        assert_eq!(seat_count(&p, &[0, 0, 0, 0]).unwrap(), 0);
        assert_eq!(seat_count(&p, &[1, 1, 1, 0]).unwrap(), 2);
        assert!(assign_party(&grid_layout(2), PartyMode::Left, 1.0).is_err());
    }

    #[test]
    fn gate_fraction_rounds_to_columns() {
        let layout = grid_layout(36);
        let party = assign_party(&layout, PartyMode::Left, 0.6).unwrap();
        assert_eq!(party.iter().filter(|&&x| x == 1).count(), 22 * 36);
    }
}
