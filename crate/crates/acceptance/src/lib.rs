//! Brute-force reference oracles. They read only the node count and edge list of a
//! graph and use none of the library's algorithms.

use connpart::MultiGraph;

/// Neighbour lists as (edge, other end), self-loops skipped.
fn adjacency(g: &MultiGraph) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); g.node_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if u != v {
            adj[u].push((e, v));
            adj[v].push((e, u));
        }
    }
    adj
}

/// Whether the nodes with `member[v]` induce a nonempty connected subgraph.
pub fn induces_connected(g: &MultiGraph, member: &[bool]) -> bool {
    connected_with(&adjacency(g), member)
}

/// Simple cycles as sorted edge lists, by scanning every edge subset (m ≤ 24).
pub fn cycles_by_subsets(g: &MultiGraph) -> Vec<Vec<usize>> {
    let m = g.edge_count();
    assert!(m <= 24, "subset scan limited to 24 edges");
    let edges = g.edges();
    let mut out = Vec::new();
    let mut deg = vec![0u32; g.node_count()];
    for mask in 1u32..(1u32 << m) {
        let ids: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        if ids.iter().any(|&e| edges[e].0 == edges[e].1) {
            continue;
        }
        deg.iter_mut().for_each(|d| *d = 0);
        for &e in &ids {
            deg[edges[e].0] += 1;
            deg[edges[e].1] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        let touched: Vec<bool> = deg.iter().map(|&d| d == 2).collect();
        let sub = MultiGraph::from_edges(g.node_count(), &ids.iter().map(|&e| edges[e]).collect::<Vec<_>>());
        if induces_connected(&sub, &touched) {
            out.push(ids);
        }
    }
    out
}

/// Simple cycles as sorted edge lists, by path search: every cycle is found once,
/// from its smallest edge.
pub fn cycles_by_search(g: &MultiGraph) -> Vec<Vec<usize>> {
    let adj = adjacency(g);
    let mut out = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if u == v {
            continue;
        }
        let mut on_path = vec![false; g.node_count()];
        on_path[v] = true;
        let mut path = vec![e];
        extend(&adj, e, v, u, &mut on_path, &mut path, &mut out);
    }
    out
}

fn extend(
    adj: &[Vec<(usize, usize)>],
    min_edge: usize,
    at: usize,
    goal: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for &(f, w) in &adj[at] {
        if f <= min_edge {
            continue;
        }
        if w == goal {
            let mut c = path.clone();
            c.push(f);
            c.sort_unstable();
            out.push(c);
        } else if !on_path[w] {
            on_path[w] = true;
            path.push(f);
            extend(adj, min_edge, w, goal, on_path, path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Number of simple paths from `s` to `t`.
pub fn count_paths(g: &MultiGraph, s: usize, t: usize) -> u64 {
    fn walk(adj: &[Vec<(usize, usize)>], at: usize, t: usize, seen: &mut [bool]) -> u64 {
        if at == t {
            return 1;
        }
        let mut total = 0;
        for &(_, w) in &adj[at] {
            if !seen[w] {
                seen[w] = true;
                total += walk(adj, w, t, seen);
                seen[w] = false;
            }
        }
        total
    }
    let adj = adjacency(g);
    let mut seen = vec![false; g.node_count()];
    seen[s] = true;
    walk(&adj, s, t, &mut seen)
}

/// Connected 2-partitions with both blocks nonempty, as 0/1 assignments. Unordered
/// listings keep node 0 in block 0.
pub fn two_partitions(g: &MultiGraph, ordered: bool) -> Vec<Vec<u8>> {
    let n = g.node_count();
    assert!((2..=26).contains(&n), "assignment scan limited to 2..=26 nodes");
    let adj = adjacency(g);
    let mut out = Vec::new();
    let masks = if ordered { 1..(1u64 << n) - 1 } else { 1..1u64 << (n - 1) };
    let mut block = vec![false; n];
    let mut other = vec![false; n];
    for mask in masks {
        let bits = if ordered { mask } else { mask << 1 };
        for v in 0..n {
            block[v] = bits >> v & 1 == 1;
            other[v] = !block[v];
        }
        if connected_with(&adj, &block) && connected_with(&adj, &other) {
            out.push(block.iter().map(|&b| b as u8).collect());
        }
    }
    out
}

fn connected_with(adj: &[Vec<(usize, usize)>], member: &[bool]) -> bool {
    let Some(start) = member.iter().position(|&m| m) else { return false };
    let mut seen = vec![false; member.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &(_, u) in &adj[v] {
            if member[u] && !seen[u] {
                seen[u] = true;
                reached += 1;
                stack.push(u);
            }
        }
    }
    reached == member.iter().filter(|&&m| m).count()
}

/// Edges whose endpoints lie in different blocks.
pub fn cut_of(g: &MultiGraph, assign: &[u8]) -> Vec<usize> {
    g.edges().iter().enumerate().filter(|(_, &(u, v))| assign[u] != assign[v]).map(|(e, _)| e).collect()
}

/// Unordered connected 2-partitions with equal block weight.
pub fn balanced_partitions(g: &MultiGraph, w: &[u64]) -> Vec<Vec<u8>> {
    two_partitions(g, false)
        .into_iter()
        .filter(|a| {
            let one: u64 = a.iter().zip(w).filter(|(&b, _)| b == 1).map(|(_, &x)| x).sum();
            2 * one == w.iter().sum::<u64>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> MultiGraph {
        MultiGraph::from_edges(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)])
    }

    #[test]
    fn the_two_cycle_scans_agree() {
        let g = theta();
        let mut a = cycles_by_subsets(&g);
        let mut b = cycles_by_search(&g);
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        let bigon = MultiGraph::from_edges(2, &[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(cycles_by_subsets(&bigon), vec![vec![0, 1]]);
        assert_eq!(cycles_by_search(&bigon), vec![vec![0, 1]]);
    }

    #[test]
    fn small_partition_counts() {
        let c4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(two_partitions(&c4, true).len(), 12);
        assert_eq!(two_partitions(&c4, false).len(), 6);
        assert_eq!(balanced_partitions(&c4, &[1, 1, 1, 1]).len(), 2);
        assert_eq!(count_paths(&theta(), 0, 1), 3);
        assert_eq!(cut_of(&c4, &[0, 0, 1, 1]), vec![1, 3]);
    }
}
