//! 2-SAT over an implication graph, solved with Tarjan's strongly connected
//! components in linear time.

/// A 2-SAT formula: one boolean variable per label, clauses of exactly two
/// literals.
#[derive(Debug, Clone)]
pub struct TwoSatFormula {
    vars: usize,
    /// Clauses as ((var, polarity), (var, polarity)).
    clauses: Vec<((usize, bool), (usize, bool))>,
}

impl TwoSatFormula {
    pub fn new(vars: usize) -> Self {
        TwoSatFormula {
            vars,
            clauses: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Adds the clause `(a or b)` where each literal is (variable, polarity).
    pub fn add_clause(&mut self, a: (usize, bool), b: (usize, bool)) {
        debug_assert!(a.0 < self.vars && b.0 < self.vars);
        self.clauses.push((a, b));
    }

    /// Node index of a literal in the implication graph.
    fn node(&self, (var, positive): (usize, bool)) -> usize {
        if positive {
            var
        } else {
            var + self.vars
        }
    }

    /// Returns a satisfying assignment, or `None` when unsatisfiable.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let n = 2 * self.vars;
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.clauses {
            // (a or b) gives the implications !a -> b and !b -> a.
            let not_a = (a.0, !a.1);
            let not_b = (b.0, !b.1);
            adj[self.node(not_a)].push(self.node(b));
            adj[self.node(not_b)].push(self.node(a));
        }
        let comp = tarjan_scc(&adj);
        let mut assignment = vec![false; self.vars];
        for v in 0..self.vars {
            if comp[v] == comp[v + self.vars] {
                return None;
            }
            // Tarjan numbers components in reverse topological order, so the
            // literal whose component is closer to a sink is safe to satisfy.
            assignment[v] = comp[v] < comp[v + self.vars];
        }
        Some(assignment)
    }
}

/// Iterative Tarjan SCC; returns the component index of each node.
/// Components are numbered in reverse topological order.
fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut comp_count = 0usize;
    // Explicit DFS frames: (node, next child position).
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for start in 0..n {
        if index[start] != UNSET {
            continue;
        }
        frames.push((start, 0));
        while let Some(&mut (v, ref mut ci)) = frames.last_mut() {
            if *ci == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ci < adj[v].len() {
                let w = adj[v][*ci];
                *ci += 1;
                if index[w] == UNSET {
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_inequality_chain() {
        // x0 != x1, x1 != x2: satisfiable with alternating values.
        let mut f = TwoSatFormula::new(3);
        for (a, b) in [(0, 1), (1, 2)] {
            f.add_clause((a, true), (b, true));
            f.add_clause((a, false), (b, false));
        }
        let assignment = f.solve().unwrap();
        assert_ne!(assignment[0], assignment[1]);
        assert_ne!(assignment[1], assignment[2]);
    }

    #[test]
    fn odd_inequality_cycle_unsatisfiable() {
        // Pairwise inequality over three variables has no 2-coloring.
        let mut f = TwoSatFormula::new(3);
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            f.add_clause((a, true), (b, true));
            f.add_clause((a, false), (b, false));
        }
        assert!(f.solve().is_none());
    }

    #[test]
    fn unit_clauses_force_values() {
        let mut f = TwoSatFormula::new(2);
        f.add_clause((0, true), (0, true)); // x0
        f.add_clause((1, false), (1, false)); // !x1
        let assignment = f.solve().unwrap();
        assert!(assignment[0]);
        assert!(!assignment[1]);
    }

    #[test]
    fn contradictory_units_unsatisfiable() {
        let mut f = TwoSatFormula::new(1);
        f.add_clause((0, true), (0, true));
        f.add_clause((0, false), (0, false));
        assert!(f.solve().is_none());
    }

    #[test]
    fn random_formulas_match_exhaustive_search() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let vars = rng.gen_range(1..=6);
            let mut f = TwoSatFormula::new(vars);
            for _ in 0..rng.gen_range(0..=10) {
                let a = (rng.gen_range(0..vars), rng.gen());
                let b = (rng.gen_range(0..vars), rng.gen());
                f.add_clause(a, b);
            }
            let brute = (0u32..1 << vars).find(|mask| {
                f.clauses.iter().all(|&(a, b)| {
                    let lit = |(v, p): (usize, bool)| (mask >> v & 1 == 1) == p;
                    lit(a) || lit(b)
                })
            });
            match f.solve() {
                Some(assignment) => {
                    assert!(brute.is_some(), "solver found assignment where none exists");
                    for &(a, b) in &f.clauses {
                        let lit = |(v, p): (usize, bool)| assignment[v] == p;
                        assert!(lit(a) || lit(b), "returned assignment violates a clause");
                    }
                }
                None => assert!(brute.is_none(), "solver missed a satisfying assignment"),
            }
        }
    }
}
