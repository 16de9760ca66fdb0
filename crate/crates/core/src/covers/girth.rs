use std::collections::VecDeque;

/// Girth of a simple undirected graph on `0..n` and a shortest cycle as a
/// vertex sequence, or `None` for a forest.
pub fn graph_girth(n: usize, edges: &[(u32, u32)]) -> Option<(usize, Vec<u32>)> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a != b {
            adj[a as usize].push(b as usize);
            adj[b as usize].push(a as usize);
        }
    }
    let mut best: Option<Vec<u32>> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if best.as_ref().is_some_and(|b| 2 * dist[x] >= b.len()) {
                break;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y && dist[x] + dist[y] + 1 < best.as_ref().map_or(usize::MAX, Vec::len) {
                    let cycle = close_cycle(&parent, x, y);
                    if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    best.map(|c| (c.len(), c))
}

/// Tree paths from `x` and `y` up to their meeting point, joined into a cycle.
fn close_cycle(parent: &[usize], x: usize, y: usize) -> Vec<u32> {
    let path = |mut v: usize| {
        let mut p = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            p.push(v);
        }
        p
    };
    let (px, py) = (path(x), path(y));
    let common = px.iter().rev().zip(py.iter().rev()).take_while(|(a, b)| a == b).count();
    let mut cycle: Vec<u32> = px[..=px.len() - common].iter().map(|&v| v as u32).collect();
    cycle.extend(py[..py.len() - common].iter().rev().map(|&v| v as u32));
    cycle
}
