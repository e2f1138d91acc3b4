//! Integral max-flow (Dinic) and feasible circulations with lower bounds.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
}

#[derive(Debug, Clone)]
pub struct Dinic {
    graph: Vec<Vec<Arc>>,
    level: Vec<usize>,
    iter: Vec<usize>,
}

/// Handle to an arc added with [`Dinic::add_arc`].
#[derive(Debug, Clone, Copy)]
pub struct ArcId {
    from: usize,
    idx: usize,
    cap: i64,
}

impl Dinic {
    pub fn new(n: usize) -> Self {
        Self {
            graph: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> ArcId {
        debug_assert!(cap >= 0);
        let idx = self.graph[from].len();
        let rev = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Arc { to, rev, cap });
        self.graph[to].push(Arc { to: from, rev: idx, cap: 0 });
        ArcId { from, idx, cap }
    }

    /// Flow currently carried by `id`.
    pub fn flow(&self, id: ArcId) -> i64 {
        id.cap - self.graph[id.from][id.idx].cap
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = usize::MAX);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for a in &self.graph[u] {
                if a.cap > 0 && self.level[a.to] == usize::MAX {
                    self.level[a.to] = self.level[u] + 1;
                    q.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.graph[u].len() {
            let i = self.iter[u];
            let Arc { to, rev, cap } = self.graph[u][i];
            if cap > 0 && self.level[u] < self.level[to] {
                let d = self.dfs(to, t, limit.min(cap));
                if d > 0 {
                    self.graph[u][i].cap -= d;
                    self.graph[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            self.bfs(s);
            if self.level[t] == usize::MAX {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }
}

/// Network whose arcs carry `[lower, upper]` bounds; solved for any feasible
/// circulation by the excess/deficit reduction to a single max-flow.
#[derive(Debug, Clone)]
pub struct Circulation {
    n: usize,
    arcs: Vec<(usize, usize, i64, i64)>,
}

impl Circulation {
    pub fn new(n: usize) -> Self {
        Self { n, arcs: Vec::new() }
    }

    /// Returns the arc's index into the solution vector.
    pub fn add_arc(&mut self, from: usize, to: usize, lower: i64, upper: i64) -> usize {
        assert!(0 <= lower && lower <= upper, "bad bounds [{lower}, {upper}]");
        self.arcs.push((from, to, lower, upper));
        self.arcs.len() - 1
    }

    /// A feasible integral circulation (flow per arc, in insertion order), or
    /// `None` if none exists. Deterministic for a fixed arc sequence.
    pub fn solve(&self) -> Option<Vec<i64>> {
        let (src, snk) = (self.n, self.n + 1);
        let mut net = Dinic::new(self.n + 2);
        let mut excess = vec![0i64; self.n];
        let ids: Vec<ArcId> = self
            .arcs
            .iter()
            .map(|&(u, v, lo, hi)| {
                excess[v] += lo;
                excess[u] -= lo;
                net.add_arc(u, v, hi - lo)
            })
            .collect();
        let mut need = 0;
        for (v, &e) in excess.iter().enumerate() {
            if e > 0 {
                net.add_arc(src, v, e);
                need += e;
            } else if e < 0 {
                net.add_arc(v, snk, -e);
            }
        }
        if net.max_flow(src, snk) != need {
            return None;
        }
        Some(
            ids.iter()
                .zip(&self.arcs)
                .map(|(&id, &(_, _, lo, _))| lo + net.flow(id))
                .collect(),
        )
    }
}
