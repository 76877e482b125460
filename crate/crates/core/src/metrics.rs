//! Desk-scale measurements: exact circuit complexity, Cayley and Schreier
//! balls, and tabulated distortion functions.
//!
//! Every profile is a lower-bound estimate of a supremum over an infinite
//! set; entries that depend on data outside the explored region are marked
//! unresolved rather than extrapolated.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::circuits::{Circuit, GateKind, TruthTable, Wire};
use crate::codes::Word;
use crate::compiler::zero_half_identity;
use crate::error::{Error, Result};
use crate::generators::{act, Gen};
use crate::par::{self, Exec};
use crate::thompson::{embed0, invert, reduce, restrict_half, Element, Table};

pub const DEFAULT_FRONTIER_LIMIT: usize = 1_000_000;

/// Gate basis used for α̂ unless another one is given.
pub const DEFAULT_BASIS: [GateKind; 5] = [GateKind::And, GateKind::Or, GateKind::Not, GateKind::Fork, GateKind::Swap];

// ---------------------------------------------------------------------------
// exact circuit complexity

#[derive(Clone, Debug)]
pub struct MinCircuit {
    /// Gates plus input and output ports.
    pub size: usize,
    pub witness: Circuit,
}

/// (gate, input values) of one search step.
type Move = (GateKind, Vec<u64>);

struct Search {
    basis: Vec<GateKind>,
    mask: u64,
    target: Vec<u64>,
}

impl Search {
    /// Target wires not yet present, counted as a multiset.
    fn missing(&self, state: &[u64]) -> usize {
        let (mut i, mut j, mut miss) = (0, 0, 0);
        while i < self.target.len() {
            if j >= state.len() || self.target[i] < state[j] {
                miss += 1;
                i += 1;
            } else if self.target[i] == state[j] {
                i += 1;
                j += 1;
            } else {
                j += 1;
            }
        }
        miss
    }

    /// A gate covers at most two missing wires and adds at most one live wire.
    fn lower_bound(&self, state: &[u64]) -> usize {
        self.missing(state).div_ceil(2).max(self.target.len().saturating_sub(state.len()))
    }

    fn moves(&self, state: &[u64]) -> Vec<(Move, Vec<u64>)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let k = state.len();
        let mut push = |kind: GateKind, idx: &[usize]| {
            let ins: Vec<u64> = idx.iter().map(|&i| state[i]).collect();
            let r = kind.eval_packed(&ins, self.mask);
            let mut next: Vec<u64> = state
                .iter()
                .enumerate()
                .filter(|(i, _)| !idx.contains(i))
                .map(|(_, &v)| v)
                .collect();
            next.extend_from_slice(&r[..kind.arity().1]);
            next.sort_unstable();
            if seen.insert(next.clone()) {
                out.push(((kind, ins), next));
            }
        };
        for &kind in &self.basis {
            match kind.arity().0 {
                1 => (0..k).for_each(|i| push(kind, &[i])),
                2 => {
                    for i in 0..k {
                        for j in 0..k {
                            if i != j {
                                push(kind, &[i, j]);
                            }
                        }
                    }
                }
                _ => {
                    for i in 0..k {
                        for j in 0..k {
                            for l in 0..k {
                                if i != j && j != l && i != l {
                                    push(kind, &[i, j, l]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn dfs(&self, state: &[u64], budget: usize, memo: &mut HashMap<Vec<u64>, usize>, path: &mut Vec<Move>) -> bool {
        if self.missing(state) == 0 {
            return true;
        }
        if budget == 0 || self.lower_bound(state) > budget {
            return false;
        }
        match memo.get(state) {
            Some(&b) if b >= budget => return false,
            _ => {
                memo.insert(state.to_vec(), budget);
            }
        }
        for (mv, next) in self.moves(state) {
            path.push(mv);
            if self.dfs(&next, budget - 1, memo, path) {
                return true;
            }
            path.pop();
        }
        false
    }
}

fn input_vectors(m: usize) -> Vec<u64> {
    (0..m)
        .map(|i| (0..1u64 << m).filter(|r| (r >> (m - 1 - i)) & 1 == 1).fold(0, |acc, r| acc | (1 << r)))
        .collect()
}

fn output_vectors(f: &TruthTable) -> Vec<u64> {
    let n = f.n();
    (0..n)
        .map(|j| f.rows().iter().enumerate().filter(|(_, &y)| (y >> (n - 1 - j)) & 1 == 1).fold(0, |acc, (r, _)| acc | (1 << r)))
        .collect()
}

fn replay(m: usize, mask: u64, path: &[Move], outputs: &[u64]) -> Circuit {
    let mut c = Circuit::new(m);
    let mut live: Vec<(u64, Wire)> = input_vectors(m).into_iter().zip((0..m).map(Wire::In)).collect();
    let take = |live: &mut Vec<(u64, Wire)>, v: u64| {
        let p = live.iter().position(|(x, _)| *x == v).expect("value is live");
        live.remove(p).1
    };
    for (kind, ins) in path {
        let wires: Vec<Wire> = ins.iter().map(|&v| take(&mut live, v)).collect();
        let r = kind.eval_packed(ins, mask);
        let outs = c.add_gate(*kind, wires).expect("fresh wires");
        live.extend(r.iter().copied().zip(outs));
    }
    let outs: Vec<Wire> = outputs.iter().map(|&v| take(&mut live, v)).collect();
    c.set_outputs(outs).expect("fresh wires");
    c
}

/// Exact minimum circuit size (ports included) over the basis, searching
/// circuits of size ≤ `cap` by iterative deepening on the number of gates.
/// `None` if no circuit fits under the cap.
pub fn min_circuit_size(f: &TruthTable, basis: &[GateKind], cap: usize) -> Option<MinCircuit> {
    min_circuit_size_with(f, basis, cap, Exec::Auto)
}

pub fn min_circuit_size_with(f: &TruthTable, basis: &[GateKind], cap: usize, exec: Exec) -> Option<MinCircuit> {
    let (m, n) = (f.m(), f.n());
    if m == 0 || n == 0 || m > 6 {
        return None;
    }
    let rows = 1u64 << m;
    let mask = if rows == 64 { u64::MAX } else { (1u64 << rows) - 1 };
    // ID and SWAP never shorten a circuit: outputs may be listed in any order
    let basis: Vec<GateKind> = basis.iter().copied().filter(|k| !matches!(k, GateKind::Id | GateKind::Swap)).collect();
    let targets = output_vectors(f);
    let mut target = targets.clone();
    target.sort_unstable();
    let s = Search { basis, mask, target };
    let mut start = input_vectors(m);
    start.sort_unstable();
    let max_gates = cap.checked_sub(m + n)?;
    for g in 0..=max_gates {
        if g == 0 {
            if s.missing(&start) == 0 {
                return Some(MinCircuit { size: m + n, witness: replay(m, mask, &[], &targets) });
            }
            continue;
        }
        if s.lower_bound(&start) > g {
            continue;
        }
        let roots = s.moves(&start);
        let found = par::map(exec, &roots, |(mv, next)| {
            let mut memo = HashMap::new();
            let mut path = vec![mv.clone()];
            s.dfs(next, g - 1, &mut memo, &mut path).then_some(path)
        });
        if let Some(path) = found.into_iter().flatten().next() {
            return Some(MinCircuit { size: m + n + path.len(), witness: replay(m, mask, &path, &targets) });
        }
    }
    None
}

/// All permutations of `{0,1}^m` as truth tables, in lexicographic order.
pub fn all_permutations(m: usize) -> Vec<TruthTable> {
    let size = 1usize << m;
    let mut out = Vec::new();
    let mut perm: Vec<u64> = (0..size as u64).collect();
    loop {
        out.push(TruthTable::new(m, m, perm.clone()).expect("valid rows"));
        // next lexicographic permutation
        let Some(i) = (1..size).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..size).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

// ---------------------------------------------------------------------------
// distortion profiles

/// Tabulated `n ↦ max{ℓ₁(g) : ℓ₂(g) ≤ n}` for `n = 0..values.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionProfile {
    pub l1: String,
    pub l2: String,
    pub values: Vec<usize>,
    /// False where some element with `ℓ₂ ≤ n` has unknown `ℓ₁`.
    pub resolved: Vec<bool>,
    pub unresolved: usize,
}

impl DistortionProfile {
    /// Tabulates from `(ℓ₂, ℓ₁)` points up to `max_n`; `None` for unknown ℓ₁.
    pub fn tabulate(
        l1: &str,
        l2: &str,
        points: impl IntoIterator<Item = (usize, Option<usize>)>,
        max_n: usize,
    ) -> DistortionProfile {
        let mut best = vec![0usize; max_n + 1];
        let mut open = vec![false; max_n + 1];
        let mut unresolved = 0;
        for (x, y) in points {
            if x > max_n {
                continue;
            }
            match y {
                Some(y) => best[x] = best[x].max(y),
                None => {
                    open[x] = true;
                    unresolved += 1;
                }
            }
        }
        let mut values = Vec::with_capacity(max_n + 1);
        let mut resolved = Vec::with_capacity(max_n + 1);
        let (mut v, mut r) = (0, true);
        for n in 0..=max_n {
            v = v.max(best[n]);
            r &= !open[n];
            values.push(v);
            resolved.push(r);
        }
        DistortionProfile { l1: l1.into(), l2: l2.into(), values, resolved, unresolved }
    }

    /// Value at `n`, constant past the tabulated range.
    pub fn value(&self, n: usize) -> usize {
        self.values.get(n).or(self.values.last()).copied().unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,value,resolved\n");
        for (n, (v, r)) in self.values.iter().zip(&self.resolved).enumerate() {
            let _ = writeln!(s, "{n},{v},{r}");
        }
        s
    }
}

/// `δ(n) = max{ℓ₁(g) : g ∈ domain, ℓ₂(g) ≤ n}` for `n` up to the largest ℓ₂.
pub fn distortion_of<K, F1, F2>(l1: F1, l2: F2, domain: &[K]) -> Result<DistortionProfile>
where
    K: std::fmt::Debug,
    F1: Fn(&K) -> Option<usize>,
    F2: Fn(&K) -> Option<usize>,
{
    let mut points = Vec::with_capacity(domain.len());
    for g in domain {
        match (l1(g), l2(g)) {
            (Some(a), Some(b)) => points.push((b, Some(a))),
            _ => return Err(Error::DomainNotCovered(format!("{g:?}"))),
        }
    }
    let max_n = points.iter().map(|p| p.0).max().unwrap_or(0);
    Ok(DistortionProfile::tabulate("l1", "l2", points, max_n))
}

/// Indices `n` at which `δ₁₃(n) ≤ δ₁₂(δ₂₃(n))` fails.
pub fn composition_violations(d13: &DistortionProfile, d12: &DistortionProfile, d23: &DistortionProfile) -> Vec<usize> {
    (0..d13.values.len()).filter(|&n| d13.value(n) > d12.value(d23.value(n))).collect()
}

#[derive(Clone, Debug)]
pub struct AlphaReport {
    pub profile: DistortionProfile,
    /// `(f, C(f), C(f⁻¹))` for every enumerated permutation.
    pub sizes: Vec<(TruthTable, usize, usize)>,
}

/// Restricted α̂ over all permutations of `{0,1}^m`, `1 ≤ m ≤ m_max`. A lower
/// bound of the true α.
pub fn alpha_profile(m_max: usize, cap: usize, basis: &[GateKind], exec: Exec) -> Result<AlphaReport> {
    if m_max > 3 {
        return Err(Error::CapExceeded { needed: m_max, cap: 3 });
    }
    let mut perms = Vec::new();
    for m in 1..=m_max {
        perms.extend(all_permutations(m));
    }
    let found = par::map(exec, &perms, |f| min_circuit_size_with(f, basis, cap, Exec::Sequential).map(|c| c.size));
    let mut size_of: HashMap<Vec<u64>, usize> = HashMap::new();
    for (f, s) in perms.iter().zip(&found) {
        match s {
            Some(s) => {
                size_of.insert(f.rows().to_vec(), *s);
            }
            None => return Err(Error::CapTooSmall { cap, what: format!("{f}") }),
        }
    }
    let sizes: Vec<(TruthTable, usize, usize)> = perms
        .iter()
        .map(|f| {
            let inv = f.inverse().expect("permutation");
            (f.clone(), size_of[f.rows()], size_of[inv.rows()])
        })
        .collect();
    let mut by_size: Vec<(usize, usize)> = sizes.iter().map(|(_, c, ci)| (*c, *ci)).collect();
    by_size.sort_unstable();
    let points = by_size.into_iter().map(|(c, ci)| (c, Some(ci)));
    let profile = DistortionProfile::tabulate("C(f^-1)", "C(f)", points, cap);
    Ok(AlphaReport { profile, sizes })
}

// ---------------------------------------------------------------------------
// Cayley and Schreier balls

#[derive(Clone, Copy, Debug)]
pub struct BallOptions {
    pub limit: usize,
    /// Stop at the last complete layer instead of failing at the limit.
    pub truncate: bool,
    pub exec: Exec,
}

impl Default for BallOptions {
    fn default() -> BallOptions {
        BallOptions { limit: DEFAULT_FRONTIER_LIMIT, truncate: false, exec: Exec::Auto }
    }
}

/// Word lengths of everything within the explored radius, with BFS parent
/// edges `(parent index, generator index)`.
#[derive(Clone, Debug)]
pub struct LengthProfile {
    pub gens: Vec<Gen>,
    /// Largest radius that was fully explored.
    pub radius: usize,
    pub truncated: bool,
    nodes: Vec<Element>,
    dist: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    index: HashMap<Element, usize>,
}

impl LengthProfile {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.nodes
    }

    pub fn distances(&self) -> &[usize] {
        &self.dist
    }

    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parent[i]
    }

    pub fn distance(&self, e: &Element) -> Option<usize> {
        self.index.get(e).map(|&i| self.dist[i])
    }

    pub fn gens_id(&self) -> String {
        self.gens.iter().map(Gen::to_string).collect::<Vec<_>>().join(",")
    }

    /// Number of elements at each distance, as `n,value,resolved` rows.
    pub fn to_csv(&self) -> String {
        let mut counts = vec![0usize; self.radius + 1];
        for &d in &self.dist {
            counts[d] += 1;
        }
        let mut s = String::from("n,value,resolved\n");
        for (n, c) in counts.iter().enumerate() {
            if *c > 0 {
                let _ = writeln!(s, "{n},{c},true");
            }
        }
        s
    }

    /// One line per element: distance, a tab, the one-line table.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (e, d) in self.nodes.iter().zip(&self.dist) {
            let _ = writeln!(s, "{d}\t{:?}", e.table());
        }
        s
    }
}

/// Parses the one-line `{x->y, ...}` form of a table over `{0,1}`.
pub fn parse_table_inline(s: &str) -> Result<Table> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("bad inline table `{s}`")))?;
    let mut entries = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, y) = part.split_once("->").ok_or_else(|| Error::Parse(format!("bad entry `{part}`")))?;
        entries.push((Word::parse(x.trim(), 2)?, Word::parse(y.trim(), 2)?));
    }
    Table::new(2, entries)
}

/// Reads a ball dump back as `(distance, element)` pairs.
pub fn parse_ball_dump(text: &str) -> Result<Vec<(usize, Element)>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (d, t) = l.split_once('\t').ok_or_else(|| Error::Parse(format!("bad dump line `{l}`")))?;
            let d = d.trim().parse().map_err(|_| Error::Parse(format!("bad distance `{d}`")))?;
            Ok((d, reduce(&parse_table_inline(t)?)))
        })
        .collect()
}

/// Breadth-first search along `x → γx` from `start`. Layers are expanded in
/// parallel and merged in (node, generator) order, so the result does not
/// depend on the worker count. Stops early once `stop_at` is reached.
fn bfs(gens: &[Gen], start: Element, radius: usize, opts: BallOptions, stop_at: Option<&Element>) -> Result<LengthProfile> {
    let mut p = LengthProfile {
        gens: gens.to_vec(),
        radius: 0,
        truncated: false,
        nodes: vec![start.clone()],
        dist: vec![0],
        parent: vec![None],
        index: HashMap::from([(start, 0)]),
    };
    let mut frontier = vec![0usize];
    for d in 1..=radius {
        if frontier.is_empty() || stop_at.is_some_and(|t| p.index.contains_key(t)) {
            p.radius = radius;
            return Ok(p);
        }
        let pairs: Vec<(usize, usize)> =
            frontier.iter().flat_map(|&i| (0..gens.len()).map(move |g| (i, g))).collect();
        let images = par::map(opts.exec, &pairs, |&(i, g)| act(&gens[g], &p.nodes[i]));
        let before = p.nodes.len();
        let mut next = Vec::new();
        for (&(i, g), img) in pairs.iter().zip(images) {
            let e = img?;
            if p.index.contains_key(&e) {
                continue;
            }
            if p.nodes.len() >= opts.limit {
                if !opts.truncate {
                    return Err(Error::FrontierLimit(opts.limit));
                }
                for e in p.nodes.drain(before..) {
                    p.index.remove(&e);
                }
                p.dist.truncate(before);
                p.parent.truncate(before);
                p.radius = d - 1;
                p.truncated = true;
                return Ok(p);
            }
            p.index.insert(e.clone(), p.nodes.len());
            next.push(p.nodes.len());
            p.nodes.push(e);
            p.dist.push(d);
            p.parent.push(Some((i, g)));
        }
        frontier = next;
        p.radius = d;
    }
    p.radius = radius;
    Ok(p)
}

/// Word lengths over `gens` up to `radius`, from the identity.
pub fn cayley_ball(gens: &[Gen], radius: usize, opts: BallOptions) -> Result<LengthProfile> {
    bfs(gens, Element::identity(2), radius, opts, None)
}

/// Directed distance `d(from, to)` in the Cayley graph, if at most `radius`.
pub fn directed_distance(gens: &[Gen], from: &Element, to: &Element, radius: usize, opts: BallOptions) -> Result<Option<usize>> {
    Ok(bfs(gens, from.clone(), radius, opts, Some(to))?.distance(to))
}

/// λ̂ from a ball: `|g⁻¹|` against `|g|` over the group elements of the ball.
/// Elements whose inverse lies outside the ball are unresolved.
pub fn wordlength_asym_profile(ball: &LengthProfile) -> DistortionProfile {
    let points = ball.nodes.iter().zip(&ball.dist).filter(|(e, _)| e.flags().in_g).map(|(e, &d)| {
        let inv = invert(e).expect("group element");
        (d, ball.distance(&inv))
    });
    DistortionProfile::tabulate("|g^-1|", "|g|", points, ball.radius)
}

/// Pairs `(|g⁻¹|, d(g, 1))` for every group element of the ball whose
/// inverse is in the ball, the second found by a separate search from `g`.
pub fn cayley_symmetry_pairs(ball: &LengthProfile, opts: BallOptions) -> Result<Vec<(usize, Option<usize>)>> {
    let one = Element::identity(2);
    let mut out = Vec::new();
    for e in ball.nodes.iter().filter(|e| e.flags().in_g) {
        let Some(d_inv) = ball.distance(&invert(e)?) else {
            continue;
        };
        out.push((d_inv, directed_distance(&ball.gens, e, &one, d_inv, opts)?));
    }
    Ok(out)
}

/// Canonical form of the coset `g·Fix(0)`: `g` restricted to `0A*`.
pub fn schreier_coset(g: &Element) -> Element {
    reduce(&restrict_half(g.table(), 0))
}

/// BFS over cosets of Fix(0) from the trivial coset along `hF → γhF`.
pub fn schreier_ball(gens: &[Gen], radius: usize, opts: BallOptions) -> Result<LengthProfile> {
    bfs(gens, zero_half_identity(), radius, opts, None)
}

/// `D(1, g)`: distance of the coset of `embed0(g)`; `None` if unresolved.
pub fn schreier_d(g: &Element, ball: &LengthProfile) -> Result<Option<usize>> {
    Ok(ball.distance(&schreier_coset(&embed0(g)?)))
}

/// Default Schreier generators: the group catalog and adjacent τ's.
pub fn schreier_gens() -> Vec<Gen> {
    let mut g = crate::generators::gamma_g_set();
    g.extend([Gen::Tau(1, 2), Gen::Tau(2, 3), Gen::Tau(3, 4)]);
    g
}

/// Monotone basis: γ_and, γ_or, γ_fork and adjacent τ's.
pub fn monotone_gens() -> Vec<Gen> {
    vec![Gen::GammaAnd, Gen::GammaOr, Gen::GammaFork, Gen::Tau(1, 2), Gen::Tau(2, 3)]
}

pub fn monotone_wordlength(radius: usize, opts: BallOptions) -> Result<LengthProfile> {
    cayley_ball(&monotone_gens(), radius, opts)
}

/// (Δ̂, δ̂): resolved `D(1,g)` against lepM word length and against monoid
/// word length, over the lp group elements of each ball.
pub fn delta_profiles(
    ball_m: &LengthProfile,
    ball_lep: &LengthProfile,
    schreier: &LengthProfile,
) -> Result<(DistortionProfile, DistortionProfile)> {
    let points = |ball: &LengthProfile| -> Result<Vec<(usize, Option<usize>)>> {
        let mut v = Vec::new();
        for (e, &d) in ball.nodes.iter().zip(&ball.dist) {
            let f = e.flags();
            if f.in_g && f.is_lp {
                v.push((d, schreier_d(e, schreier)?));
            }
        }
        Ok(v)
    };
    Ok((
        DistortionProfile::tabulate("D(1,g)", "|g|_lepM", points(ball_lep)?, ball_lep.radius),
        DistortionProfile::tabulate("D(1,g)", "|g|_M", points(ball_m)?, ball_m.radius),
    ))
}

/// Distortion between the word lengths of two balls, on the elements of the
/// first whose length in the second is known.
pub fn ball_distortion(l1: &LengthProfile, l2: &LengthProfile) -> Result<DistortionProfile> {
    let domain: Vec<&Element> = l1.nodes.iter().filter(|e| l2.distance(e).is_some()).collect();
    distortion_of(|e: &&Element| l1.distance(e), |e: &&Element| l2.distance(e), &domain)
}
