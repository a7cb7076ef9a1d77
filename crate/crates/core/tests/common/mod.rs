#![allow(dead_code)]

use pdfa_bench::enumeration::TargetTable;
use pdfa_bench::pdfa::{Pdfa, ProcessSummary};

/// Exhaustive search over two-state channels `p(r = 1 | σ)` on a
/// `steps × steps` grid (endpoints included), answering "least rate among
/// channels at least this accurate".
pub struct ChannelGrid {
    accuracy: Vec<f64>,
    suffix_min_rate: Vec<f64>,
    hull: Vec<(f64, f64)>,
}

fn kl_bernoulli(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| if a > 0.0 { a * (a / b).ln() } else { 0.0 };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

impl ChannelGrid {
    pub fn new(pdfa: &Pdfa, steps: usize) -> Self {
        assert_eq!(pdfa.n_states(), 2);
        let pi = ProcessSummary::compute(pdfa).unwrap().pi;
        let e1 = [pdfa.emission(0, 1), pdfa.emission(1, 1)];
        let mut points: Vec<(f64, f64)> = Vec::with_capacity(steps * steps);
        for i in 0..steps {
            let a = i as f64 / (steps - 1) as f64;
            for j in 0..steps {
                let b = j as f64 / (steps - 1) as f64;
                let q = pi[0] * a + pi[1] * b;
                let rate = pi[0] * kl_bernoulli(a, q) + pi[1] * kl_bernoulli(b, q);
                let acc = pi[0] * ((1.0 - a) * (1.0 - e1[0]) + a * e1[0]) + pi[1] * ((1.0 - b) * (1.0 - e1[1]) + b * e1[1]);
                points.push((acc, rate.max(0.0)));
            }
        }
        points.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut suffix_min_rate = vec![0.0; points.len()];
        let mut best = f64::INFINITY;
        for k in (0..points.len()).rev() {
            best = best.min(points[k].1);
            suffix_min_rate[k] = best;
        }
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for &p in &points {
            while hull.len() >= 2 {
                let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        ChannelGrid {
            accuracy: points.into_iter().map(|p| p.0).collect(),
            suffix_min_rate,
            hull,
        }
    }

    /// `min { I : accuracy ≥ target }` over the grid.
    pub fn min_rate_at(&self, target: f64) -> f64 {
        let k = self.accuracy.partition_point(|&a| a < target - 1e-12);
        self.suffix_min_rate.get(k).copied().unwrap_or(f64::INFINITY)
    }

    /// The same question answered on the lower convex hull of the grid's
    /// (accuracy, rate) points, i.e. allowing time-sharing between two grid
    /// channels. Never below the true curve, and tighter than
    /// [`ChannelGrid::min_rate_at`] where the optimal channel falls between
    /// grid lines.
    pub fn hull_rate_at(&self, target: f64) -> f64 {
        let lowest = self.hull.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).expect("nonempty grid");
        let a = target.max(lowest.0);
        let k = self.hull.partition_point(|p| p.0 < a);
        if k == 0 {
            return self.hull[0].1;
        }
        match self.hull.get(k) {
            None => f64::INFINITY,
            Some(&(x1, r1)) => {
                let (x0, r0) = self.hull[k - 1];
                r0 + (a - x0) / (x1 - x0) * (r1 - r0)
            }
        }
    }
}

/// A two-state Markov chain on symbols: state = last symbol.
pub fn markov_order_one(p1_after0: f64, p1_after1: f64) -> Pdfa {
    use pdfa_bench::pdfa::Edge;
    Pdfa::from_edges(
        "markov-1",
        2,
        &[
            Edge { from: 0, symbol: 0, to: 0, prob: 1.0 - p1_after0 },
            Edge { from: 0, symbol: 1, to: 1, prob: p1_after0 },
            Edge { from: 1, symbol: 0, to: 0, prob: 1.0 - p1_after1 },
            Edge { from: 1, symbol: 1, to: 1, prob: p1_after1 },
        ],
    )
    .unwrap()
}

/// Period-two process whose symbol flips with probability `eps`, keeping
/// the phase.
pub fn noisy_period_two(eps: f64) -> Pdfa {
    use pdfa_bench::pdfa::Edge;
    Pdfa::from_edges(
        "noisy-period-2",
        2,
        &[
            Edge { from: 0, symbol: 1, to: 1, prob: 1.0 - eps },
            Edge { from: 0, symbol: 0, to: 1, prob: eps },
            Edge { from: 1, symbol: 0, to: 0, prob: 1.0 - eps },
            Edge { from: 1, symbol: 1, to: 0, prob: eps },
        ],
    )
    .unwrap()
}

// Independent topology enumeration: brute-force validity filter from
// transitive closure and pairwise language equivalence, and Burnside orbit
// counting in place of canonical-key deduplication.

pub fn all_tables(n: usize) -> Vec<TargetTable> {
    let opts: Vec<Option<usize>> = std::iter::once(None).chain((0..n).map(Some)).collect();
    let rows: Vec<[Option<usize>; 2]> = opts
        .iter()
        .flat_map(|&a| opts.iter().map(move |&b| [a, b]))
        .filter(|r| r[0].is_some() || r[1].is_some())
        .collect();
    let mut tables = vec![Vec::new()];
    for _ in 0..n {
        tables = tables
            .into_iter()
            .flat_map(|t: TargetTable| {
                rows.iter().map(move |r| {
                    let mut t = t.clone();
                    t.push(*r);
                    t
                })
            })
            .collect();
    }
    tables
}

pub fn closure_connected(t: &TargetTable) -> bool {
    let n = t.len();
    let mut reach = vec![vec![false; n]; n];
    for (s, row) in t.iter().enumerate() {
        reach[s][s] = true;
        for d in row.iter().flatten() {
            reach[s][*d] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach.iter().all(|r| r.iter().all(|&x| x))
}

/// Two states emit the same set of finite words iff no pair reachable from
/// them along a common word disagrees on which symbols are allowed.
pub fn same_language(t: &TargetTable, p: usize, q: usize) -> bool {
    let n = t.len();
    let mut seen = vec![vec![false; n]; n];
    let mut stack = vec![(p, q)];
    while let Some((a, b)) = stack.pop() {
        if seen[a][b] {
            continue;
        }
        seen[a][b] = true;
        for x in 0..2 {
            match (t[a][x], t[b][x]) {
                (Some(a2), Some(b2)) => stack.push((a2, b2)),
                (None, None) => {}
                _ => return false,
            }
        }
    }
    true
}

pub fn language_minimal(t: &TargetTable) -> bool {
    (0..t.len()).all(|p| (p + 1..t.len()).all(|q| !same_language(t, p, q)))
}

pub fn relabel(t: &TargetTable, perm: &[usize]) -> TargetTable {
    let mut out = vec![[None, None]; t.len()];
    for (s, row) in t.iter().enumerate() {
        out[perm[s]] = [row[0].map(|d| perm[d]), row[1].map(|d| perm[d])];
    }
    out
}

pub fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of isomorphism classes of valid tables, by Burnside's lemma.
pub fn burnside_count(n: usize) -> usize {
    let valid: Vec<TargetTable> = all_tables(n)
        .into_iter()
        .filter(|t| closure_connected(t) && language_minimal(t))
        .collect();
    let group = perms(n);
    let fixed: usize = group
        .iter()
        .map(|p| valid.iter().filter(|t| relabel(t, p) == **t).count())
        .sum();
    assert_eq!(fixed % group.len(), 0);
    fixed / group.len()
}
