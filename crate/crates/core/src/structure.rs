use std::collections::{BTreeSet, VecDeque};

use crate::chain::TransitionMatrix;

/// Transition probabilities above this count as edges.
pub const EDGE_TOL: f64 = 1e-12;
/// `P_ii ≥ 1 − ABSORBING_TOL` marks an absorbing state.
pub const ABSORBING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    Aperiodic,
    Periodic(u32),
    /// Classes disagree on their period.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFlags {
    pub irreducible: bool,
    /// Every state is recurrent.
    pub recurrent: bool,
    pub absorbing: bool,
    pub periodicity: Periodicity,
    pub ergodic: bool,
    pub absorbing_states: Vec<usize>,
}

/// Strongly connected components of the positive-entry digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunicatingClasses {
    /// Each class sorted; classes ordered by their smallest state.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Deduplicated, sorted edges between distinct classes.
    pub condensation_edges: Vec<(usize, usize)>,
}

impl CommunicatingClasses {
    /// Whether state `j` is reachable from state `i` (in zero or more steps).
    pub fn accessible(&self, i: usize, j: usize) -> bool {
        let (from, to) = (self.class_of[i], self.class_of[j]);
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.classes.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(c) = stack.pop() {
            for &(a, b) in &self.condensation_edges {
                if a == c && !seen[b] {
                    if b == to {
                        return true;
                    }
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        false
    }

    /// A class with no outgoing condensation edge.
    pub fn is_closed(&self, class: usize) -> bool {
        !self.condensation_edges.iter().any(|&(a, _)| a == class)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassStructure {
    pub communication: CommunicatingClasses,
    pub recurrent: Vec<bool>,
    /// `None` for a class without any internal edge (a lone transient state
    /// that cannot return to itself).
    pub period: Vec<Option<u32>>,
    pub flags: ChainFlags,
}

impl ClassStructure {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.communication.classes
    }

    pub fn class_of(&self, state: usize) -> usize {
        self.communication.class_of[state]
    }

    pub fn recurrent_classes(&self) -> Vec<usize> {
        (0..self.recurrent.len()).filter(|&c| self.recurrent[c]).collect()
    }

    pub fn recurrent_states(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .recurrent_classes()
            .into_iter()
            .flat_map(|c| self.communication.classes[c].iter().copied())
            .collect();
        s.sort_unstable();
        s
    }

    pub fn transient_states(&self) -> Vec<usize> {
        (0..self.communication.class_of.len())
            .filter(|&i| !self.recurrent[self.class_of(i)])
            .collect()
    }

    pub fn is_state_recurrent(&self, i: usize) -> bool {
        self.recurrent[self.class_of(i)]
    }
}

pub(crate) fn adjacency(chain: &TransitionMatrix) -> Vec<Vec<usize>> {
    let p = chain.p();
    (0..chain.n())
        .map(|i| (0..chain.n()).filter(|&j| p[(i, j)] > EDGE_TOL).collect())
        .collect()
}

pub fn communicating_classes(chain: &TransitionMatrix) -> CommunicatingClasses {
    let adj = adjacency(chain);
    let n = adj.len();
    let raw = tarjan(&adj);

    let mut classes: Vec<Vec<usize>> = raw
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    classes.sort_by_key(|c| c[0]);
    let mut class_of = vec![0; n];
    for (k, c) in classes.iter().enumerate() {
        for &i in c {
            class_of[i] = k;
        }
    }
    let mut edges = BTreeSet::new();
    for (i, targets) in adj.iter().enumerate() {
        for &j in targets {
            if class_of[i] != class_of[j] {
                edges.insert((class_of[i], class_of[j]));
            }
        }
    }
    CommunicatingClasses {
        classes,
        class_of,
        condensation_edges: edges.into_iter().collect(),
    }
}

/// Iterative Tarjan; components come out in reverse topological order.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, next neighbour position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd of `level(u) + 1 − level(v)` over the class's internal edges.
fn class_period(adj: &[Vec<usize>], class: &[usize], class_of: &[usize]) -> Option<u32> {
    let id = class_of[class[0]];
    let mut level = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([class[0]]);
    level[class[0]] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if class_of[v] == id && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0u64;
    let mut any = false;
    for &u in class {
        for &v in &adj[u] {
            if class_of[v] == id {
                any = true;
                let diff = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs();
                g = gcd(g, diff);
            }
        }
    }
    any.then_some(g as u32)
}

pub fn classify(chain: &TransitionMatrix) -> ClassStructure {
    let communication = communicating_classes(chain);
    let adj = adjacency(chain);
    let n = chain.n();
    let k = communication.classes.len();

    let recurrent: Vec<bool> = (0..k).map(|c| communication.is_closed(c)).collect();
    let period: Vec<Option<u32>> = communication
        .classes
        .iter()
        .map(|c| class_period(&adj, c, &communication.class_of))
        .collect();

    let defined: BTreeSet<u32> = period.iter().flatten().copied().collect();
    let periodicity = match defined.len() {
        0 => Periodicity::Aperiodic,
        1 => match defined.into_iter().next() {
            Some(1) | None => Periodicity::Aperiodic,
            Some(d) => Periodicity::Periodic(d),
        },
        _ => Periodicity::Mixed,
    };

    let p = chain.p();
    let absorbing_states: Vec<usize> = (0..n).filter(|&i| p[(i, i)] >= 1.0 - ABSORBING_TOL).collect();
    let absorbing = !absorbing_states.is_empty() && reaches_all(&adj, &absorbing_states);

    let irreducible = k == 1;
    let flags = ChainFlags {
        irreducible,
        recurrent: recurrent.iter().all(|&r| r),
        absorbing,
        periodicity,
        ergodic: irreducible && periodicity == Periodicity::Aperiodic,
        absorbing_states,
    };
    ClassStructure {
        communication,
        recurrent,
        period,
        flags,
    }
}

/// Whether every vertex can reach some vertex of `targets`.
fn reaches_all(adj: &[Vec<usize>], targets: &[usize]) -> bool {
    let n = adj.len();
    let mut rev = vec![Vec::new(); n];
    for (i, out) in adj.iter().enumerate() {
        for &j in out {
            rev[j].push(i);
        }
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = targets.to_vec();
    for &t in targets {
        seen[t] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in &rev[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::DenseMatrix;

    fn chain(rows: &[&[f64]]) -> TransitionMatrix {
        TransitionMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn four_state_chain_is_ergodic() {
        let s = classify(&chain(&[
            &[0.5, 0.1, 0.2, 0.2],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.5, 0.5],
            &[1.0, 0.0, 0.0, 0.0],
        ]));
        assert_eq!(s.classes().len(), 1);
        assert!(s.flags.irreducible && s.flags.recurrent && s.flags.ergodic);
        assert_eq!(s.period, vec![Some(1)]);
    }

    #[test]
    fn identity_has_singleton_classes() {
        let c = TransitionMatrix::from_matrix(DenseMatrix::identity(3)).unwrap();
        let s = classify(&c);
        assert_eq!(s.classes(), &[vec![0], vec![1], vec![2]]);
        assert!(s.communication.condensation_edges.is_empty());
        assert!(s.flags.absorbing && s.flags.recurrent && !s.flags.irreducible);
    }

    #[test]
    fn swap_chain_has_period_two() {
        let s = classify(&chain(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert!(s.flags.irreducible && s.flags.recurrent && !s.flags.ergodic);
        assert_eq!(s.flags.periodicity, Periodicity::Periodic(2));
    }

    #[test]
    fn source_state_feeds_recurrent_class() {
        let p4 = chain(&[
            &[0.0, 0.75, 0.0, 0.25],
            &[0.25, 0.0, 0.0, 0.75],
            &[0.6, 0.0, 0.0, 0.4],
            &[0.5, 0.5, 0.0, 0.0],
        ]);
        let s = classify(&p4);
        assert_eq!(s.classes(), &[vec![0, 1, 3], vec![2]]);
        assert_eq!(s.communication.condensation_edges, vec![(1, 0)]);
        assert_eq!(s.recurrent, vec![true, false]);
        assert_eq!(s.period[1], None);
        assert!(s.communication.accessible(2, 0));
        assert!(!s.communication.accessible(0, 2));
    }

    #[test]
    fn absorbing_detection() {
        let s = classify(&chain(&[
            &[0.2, 0.4, 0.4, 0.0],
            &[0.3, 0.0, 0.5, 0.2],
            &[0.3, 0.5, 0.0, 0.2],
            &[0.0, 0.0, 0.0, 1.0],
        ]));
        assert!(s.flags.absorbing);
        assert_eq!(s.flags.absorbing_states, vec![3]);
        assert_eq!(s.transient_states(), vec![0, 1, 2]);
        // a closed 2-cycle never reaches the absorbing state
        let s = classify(&chain(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]));
        assert!(!s.flags.absorbing);
        assert_eq!(s.flags.periodicity, Periodicity::Mixed);
    }
}
