//! Random machines and networks plus naive reference semantics.
#![allow(dead_code)]

use std::collections::BTreeSet;

use critnet::{Fsm, Network};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const SHARED: [&str; 4] = ["a", "b", "c", "d"];

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_states: usize,
    pub max_labels: usize,
    /// Probability that a (state, label) pair has at least one successor.
    pub p_edge: f64,
    /// Probability of a second successor.
    pub p_branch: f64,
    pub p_critical: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_states: 5,
            max_labels: 4,
            p_edge: 0.6,
            p_branch: 0.25,
            p_critical: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NetShape {
    pub min_members: usize,
    pub max_members: usize,
    /// Number of labels any member may share.
    pub shared: usize,
    /// Probability that an alphabet slot draws from the shared pool.
    pub p_shared: f64,
    pub fsm: Shape,
}

impl Default for NetShape {
    fn default() -> Self {
        NetShape {
            min_members: 1,
            max_members: 4,
            shared: 3,
            p_shared: 0.6,
            fsm: Shape::default(),
        }
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Builds an FSM from index data; names are `s0`, `s1`, ...
pub fn fsm_from(
    n: usize,
    alphabet: &[String],
    initial: &[usize],
    critical: &[bool],
    edges: &[(usize, usize, usize)],
) -> Fsm {
    let name = |i: usize| format!("s{i}");
    let mut b = Fsm::builder()
        .states((0..n).map(name))
        .initial(initial.iter().map(|&i| name(i)))
        .alphabet(alphabet)
        .critical((0..n).filter(|&i| critical[i]).map(name));
    for &(f, l, t) in edges {
        b = b.transition(name(f), &alphabet[l], name(t));
    }
    b.build().expect("generated machine is valid")
}

pub fn random_fsm_over(rng: &mut impl Rng, alphabet: &[String], shape: &Shape) -> Fsm {
    let n = rng.gen_range(1..=shape.max_states);
    let mut edges = Vec::new();
    for s in 0..n {
        for l in 0..alphabet.len() {
            if !rng.gen_bool(shape.p_edge) {
                continue;
            }
            let t = rng.gen_range(0..n);
            edges.push((s, l, t));
            if n > 1 && rng.gen_bool(shape.p_branch) {
                let u = (t + rng.gen_range(1..n)) % n;
                edges.push((s, l, u));
            }
        }
    }
    let mut initial = vec![rng.gen_range(0..n)];
    if n > 1 && rng.gen_bool(0.2) {
        initial.push((initial[0] + rng.gen_range(1..n)) % n);
    }
    let mut critical: Vec<bool> = (0..n).map(|_| rng.gen_bool(shape.p_critical)).collect();
    let c0 = critical[initial[0]];
    for &i in &initial {
        critical[i] = c0;
    }
    fsm_from(n, alphabet, &initial, &critical, &edges)
}

pub fn random_alphabet(rng: &mut impl Rng, member: usize, shape: &NetShape) -> Vec<String> {
    let k = rng.gen_range(1..=shape.fsm.max_labels);
    let mut labels = BTreeSet::new();
    for j in 0..k {
        if shape.shared > 0 && rng.gen_bool(shape.p_shared) {
            labels.insert(SHARED[rng.gen_range(0..shape.shared)].to_string());
        } else {
            labels.insert(format!("m{member}x{j}"));
        }
    }
    labels.into_iter().collect()
}

pub fn random_fsm(rng: &mut impl Rng, shape: &Shape) -> Fsm {
    let k = rng.gen_range(1..=shape.max_labels);
    let alphabet: Vec<String> = SHARED[..k.min(SHARED.len())]
        .iter()
        .map(|s| s.to_string())
        .collect();
    random_fsm_over(rng, &alphabet, shape)
}

pub fn random_network(rng: &mut impl Rng, shape: &NetShape) -> Network {
    let n = rng.gen_range(shape.min_members..=shape.max_members);
    let members = (0..n)
        .map(|i| {
            let alphabet = random_alphabet(rng, i, shape);
            (format!("M{i}"), random_fsm_over(rng, &alphabet, &shape.fsm))
        })
        .collect();
    Network::new(members).unwrap()
}

/// Parts of an FSM by index, for rebuilding variants.
pub struct Parts {
    pub alphabet: Vec<String>,
    pub n: usize,
    pub initial: Vec<usize>,
    pub critical: Vec<bool>,
    pub edges: Vec<(usize, usize, usize)>,
}

pub fn parts(m: &Fsm) -> Parts {
    Parts {
        alphabet: m.alphabet().iter().map(|l| l.to_string()).collect(),
        n: m.state_count(),
        initial: m.initial().to_vec(),
        critical: m.critical_flags().to_vec(),
        edges: m.transitions().collect(),
    }
}

/// A randomly permuted, renamed copy of `m`.
pub fn isomorphic_variant(rng: &mut impl Rng, m: &Fsm) -> Fsm {
    let p = parts(m);
    let mut perm: Vec<usize> = (0..p.n).collect();
    perm.shuffle(rng);
    let mut critical = vec![false; p.n];
    for s in 0..p.n {
        critical[perm[s]] = p.critical[s];
    }
    let initial: Vec<usize> = p.initial.iter().map(|&s| perm[s]).collect();
    let edges: Vec<_> = p.edges.iter().map(|&(f, l, t)| (perm[f], l, perm[t])).collect();
    fsm_from(p.n, &p.alphabet, &initial, &critical, &edges)
}

/// A bisimilar but generally non-isomorphic copy of `m`: one state is split
/// into two with identical futures, and incoming edges are spread over both.
pub fn bisimilar_variant(rng: &mut impl Rng, m: &Fsm) -> Fsm {
    let mut p = parts(m);
    let x = rng.gen_range(0..p.n);
    let twin = p.n;
    p.n += 1;
    p.critical.push(p.critical[x]);
    let outgoing: Vec<_> = p.edges.iter().filter(|e| e.0 == x).copied().collect();
    p.edges.extend(outgoing.iter().map(|&(_, l, t)| (twin, l, if t == x { twin } else { t })));
    let mut extra = Vec::new();
    for e in p.edges.iter_mut() {
        if e.2 == x && rng.gen_bool(0.5) {
            if rng.gen_bool(0.5) {
                e.2 = twin;
            } else {
                extra.push((e.0, e.1, twin));
            }
        }
    }
    p.edges.extend(extra);
    p.edges.sort();
    p.edges.dedup();
    if p.initial.contains(&x) {
        p.initial.push(twin);
    }
    let v = fsm_from(p.n, &p.alphabet, &p.initial, &p.critical, &p.edges);
    isomorphic_variant(rng, &v)
}

/// `n` with `extra` bisimilar duplicates of randomly chosen members
/// appended.
pub fn with_duplicates(rng: &mut impl Rng, n: &Network, extra: usize) -> Network {
    let mut members = n.members().to_vec();
    for k in 0..extra {
        let (_, m) = &n.members()[rng.gen_range(0..n.len())];
        members.push((format!("D{k}"), bisimilar_variant(rng, m)));
    }
    members.shuffle(rng);
    Network::new(members).unwrap()
}

// ---- naive semantics -------------------------------------------------------

/// Successors by scanning the transition list.
pub fn naive_post(m: &Fsm, set: &BTreeSet<usize>, label: &str) -> BTreeSet<usize> {
    m.transitions()
        .filter(|&(f, l, _)| set.contains(&f) && m.alphabet()[l].as_str() == label)
        .map(|(_, _, t)| t)
        .collect()
}

pub fn naive_delta(m: &Fsm, word: &[String]) -> BTreeSet<usize> {
    let mut cur: BTreeSet<usize> = m.initial().iter().copied().collect();
    for l in word {
        cur = naive_post(m, &cur, l);
    }
    cur
}

pub fn names(m: &Fsm, set: &BTreeSet<usize>) -> BTreeSet<String> {
    set.iter().map(|&s| m.state_name(s).to_string()).collect()
}

/// All words of length at most `max_len` over the machine's alphabet that
/// are in its language, with the state set each one reaches. Stops early
/// and returns `None` once more than `limit` words have been found.
pub fn language_upto(
    m: &Fsm,
    max_len: usize,
    limit: usize,
) -> Option<Vec<(Vec<String>, BTreeSet<usize>)>> {
    let labels: Vec<String> = m.alphabet().iter().map(|l| l.to_string()).collect();
    let mut out = vec![(Vec::new(), m.initial().iter().copied().collect::<BTreeSet<_>>())];
    let mut frontier = 0;
    for _ in 0..max_len {
        let end = out.len();
        for i in frontier..end {
            for l in &labels {
                let next = naive_post(m, &out[i].1, l);
                if next.is_empty() {
                    continue;
                }
                let mut w = out[i].0.clone();
                w.push(l.clone());
                out.push((w, next));
                if out.len() > limit {
                    return None;
                }
            }
        }
        frontier = end;
    }
    Some(out)
}

/// A random run of `m` of length at most `max_len`: states and trace.
pub fn random_run(rng: &mut impl Rng, m: &Fsm, max_len: usize) -> (Vec<usize>, Vec<String>) {
    let mut states = vec![*m.initial().choose(rng).unwrap()];
    let mut trace = Vec::new();
    let len = rng.gen_range(0..=max_len);
    for _ in 0..len {
        let x = *states.last().unwrap();
        let moves: Vec<(usize, usize)> = m
            .transitions()
            .filter(|&(f, _, _)| f == x)
            .map(|(_, l, t)| (l, t))
            .collect();
        let Some(&(l, t)) = moves.choose(rng) else {
            break;
        };
        trace.push(m.alphabet()[l].to_string());
        states.push(t);
    }
    (states, trace)
}

/// Observability by definition: no reachable state set mixes critical and
/// non-critical states. Reachable sets are explored level by level up to
/// `bound` steps.
pub fn observable_by_definition(m: &Fsm, bound: usize) -> bool {
    let labels: Vec<String> = m.alphabet().iter().map(|l| l.to_string()).collect();
    let mixed = |s: &BTreeSet<usize>| {
        s.iter().any(|&x| m.is_critical(x)) && s.iter().any(|&x| !m.is_critical(x))
    };
    let mut level: BTreeSet<BTreeSet<usize>> =
        BTreeSet::from([m.initial().iter().copied().collect()]);
    for _ in 0..=bound {
        if level.iter().any(mixed) {
            return false;
        }
        level = level
            .iter()
            .flat_map(|s| labels.iter().map(move |l| naive_post(m, s, l)))
            .filter(|s| !s.is_empty())
            .collect();
    }
    true
}

/// Tuple-enumeration straddle oracle over per-member critical flags.
pub fn straddle_by_tuples(agg: &[Vec<usize>], critical: &[Vec<bool>]) -> bool {
    let mut any_critical = false;
    let mut any_plain = false;
    let mut idx = vec![0usize; agg.len()];
    if agg.iter().any(Vec::is_empty) {
        return false;
    }
    loop {
        let crit = idx
            .iter()
            .enumerate()
            .any(|(i, &k)| critical[i][agg[i][k]]);
        any_critical |= crit;
        any_plain |= !crit;
        let mut i = 0;
        loop {
            if i == agg.len() {
                return any_critical && any_plain;
            }
            idx[i] += 1;
            if idx[i] < agg[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
