//! Maximum s-t flow value with edge weights as capacities: Dinitz and FIFO
//! push-relabel. `s == t` has flow 0.

use std::collections::VecDeque;

use super::{ExecCtx, ImplId, TargetInput, TargetOutput};

/// Residual network. Edge `i` owns arcs `2i` (forward, capacity `w`) and
/// `2i + 1` (reverse, capacity 0); `arc ^ 1` is the partner arc.
struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl Residual {
    fn new(input: &TargetInput) -> Self {
        let g = &input.graph;
        let mut r = Residual {
            head: Vec::with_capacity(2 * g.num_edges()),
            cap: Vec::with_capacity(2 * g.num_edges()),
            out: vec![Vec::new(); g.num_vertices()],
        };
        for e in g.edges() {
            let (u, v) = (e.u as usize, e.v as usize);
            r.out[u].push(r.head.len());
            r.head.push(v);
            r.cap.push(e.w);
            r.out[v].push(r.head.len());
            r.head.push(u);
            r.cap.push(0);
        }
        r
    }

    fn push(&mut self, arc: usize, amount: i64) {
        self.cap[arc] -= amount;
        self.cap[arc ^ 1] += amount;
    }
}

pub(super) fn dinitz(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    const P: u16 = ImplId::Dinitz.probe_base();
    let (s, t) = (input.endpoints.s as usize, input.endpoints.t as usize);
    if s == t {
        ctx.probe(P);
        return TargetOutput::Mfv(0);
    }
    let mut r = Residual::new(input);
    let n = r.out.len();
    let mut level = vec![usize::MAX; n];
    let mut it = vec![0usize; n];
    let mut flow = 0;
    loop {
        ctx.probe(P + 1);
        level.iter_mut().for_each(|l| *l = usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            ctx.tick();
            for &a in &r.out[u] {
                let v = r.head[a];
                if r.cap[a] > 0 && level[v] == usize::MAX {
                    ctx.probe(P + 2);
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level[t] == usize::MAX {
            ctx.probe(P + 3);
            break;
        }
        it.iter_mut().for_each(|i| *i = 0);
        loop {
            let pushed = blocking_path(&mut r, &level, &mut it, s, t, ctx);
            if pushed == 0 {
                break;
            }
            ctx.probe(P + 4);
            flow += pushed;
        }
    }
    TargetOutput::Mfv(flow)
}

/// Finds one s-t path in the level graph with an explicit stack, advancing
/// per-vertex arc iterators past dead ends, and pushes its bottleneck.
fn blocking_path(r: &mut Residual, level: &[usize], it: &mut [usize], s: usize, t: usize, ctx: &mut ExecCtx<'_>) -> i64 {
    const P: u16 = ImplId::Dinitz.probe_base() + 16;
    let mut path: Vec<usize> = Vec::new();
    let mut u = s;
    loop {
        ctx.tick();
        if u == t {
            let bottleneck = path.iter().map(|&a| r.cap[a]).min().unwrap_or(0);
            for &a in &path {
                r.push(a, bottleneck);
            }
            ctx.probe(P);
            return bottleneck;
        }
        let mut advanced = false;
        while it[u] < r.out[u].len() {
            let a = r.out[u][it[u]];
            let v = r.head[a];
            if r.cap[a] > 0 && level[v] == level[u] + 1 {
                path.push(a);
                u = v;
                advanced = true;
                break;
            }
            it[u] += 1;
        }
        if advanced {
            continue;
        }
        ctx.probe(P + 1);
        // Dead end: retreat one arc and skip it from now on.
        match path.pop() {
            None => return 0,
            Some(a) => {
                u = r.head[a ^ 1];
                it[u] += 1;
            }
        }
    }
}

pub(super) fn push_relabel(input: &TargetInput, ctx: &mut ExecCtx<'_>) -> TargetOutput {
    push_relabel_with(input, ctx, false)
}

/// FIFO push-relabel.
///
/// `skip_twin_arcs` makes relabel ignore both arcs of any edge `(u, v)` for
/// which the antiparallel edge `(v, u)` exists with the same capacity. A
/// vertex whose only residual arcs are such twins then never gains height
/// and is discharged forever.
pub(crate) fn push_relabel_with(input: &TargetInput, ctx: &mut ExecCtx<'_>, skip_twin_arcs: bool) -> TargetOutput {
    const P: u16 = ImplId::PushRelabel.probe_base();
    let g = &input.graph;
    let (s, t) = (input.endpoints.s as usize, input.endpoints.t as usize);
    if s == t {
        ctx.probe(P);
        return TargetOutput::Mfv(0);
    }
    let twin: Vec<bool> = g
        .edges()
        .iter()
        .map(|e| skip_twin_arcs && g.find_edge(e.v, e.u).is_some_and(|j| g.edges()[j].w == e.w))
        .collect();
    let mut r = Residual::new(input);
    let n = r.out.len();
    let mut height = vec![0usize; n];
    let mut excess = vec![0i64; n];
    let mut current = vec![0usize; n];
    let mut active = VecDeque::new();
    height[s] = n;
    for i in 0..r.out[s].len() {
        let a = r.out[s][i];
        let c = r.cap[a];
        if c > 0 {
            r.push(a, c);
            let v = r.head[a];
            excess[v] += c;
            excess[s] -= c;
            if v != t && excess[v] == c {
                active.push_back(v);
            }
        }
    }
    while let Some(u) = active.pop_front() {
        ctx.probe(P + 1);
        // Discharge u completely.
        while excess[u] > 0 {
            ctx.tick();
            if current[u] == r.out[u].len() {
                ctx.probe(P + 2);
                let mut min_h = usize::MAX;
                for &a in &r.out[u] {
                    if twin[a / 2] {
                        ctx.probe(P + 3);
                        continue;
                    }
                    if r.cap[a] > 0 {
                        min_h = min_h.min(height[r.head[a]]);
                    }
                }
                if min_h != usize::MAX {
                    height[u] = min_h + 1;
                }
                current[u] = 0;
                continue;
            }
            let a = r.out[u][current[u]];
            let v = r.head[a];
            if r.cap[a] > 0 && height[u] == height[v] + 1 {
                ctx.probe(P + 4);
                let amount = excess[u].min(r.cap[a]);
                r.push(a, amount);
                excess[u] -= amount;
                excess[v] += amount;
                if v != s && v != t && excess[v] == amount {
                    ctx.probe(P + 5);
                    active.push_back(v);
                }
            } else {
                current[u] += 1;
            }
        }
    }
    TargetOutput::Mfv(excess[t])
}
