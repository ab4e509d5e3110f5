//! Exact maximum family of pairwise compatible items (maximum independent
//! set in a conflict graph), by include-first branch and bound.

use alloc::vec::Vec;

use crate::bitset::BitSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct NodeBudgetExceeded;

pub(crate) struct FamilyProblem<'a> {
    /// `conflicts[i]` holds every item incompatible with item `i`.
    pub conflicts: &'a [BitSet],
    /// Items sharing a class are assumed to conflict; the number of distinct
    /// remaining classes bounds how many more items fit.
    pub classes: Option<&'a [usize]>,
    /// Stop as soon as a family of this size is found.
    pub upper_bound: Option<usize>,
    pub max_nodes: u64,
}

/// Returns the lexicographically least maximum family, as ascending indices.
pub(crate) fn max_compatible_family(p: &FamilyProblem<'_>) -> Result<Vec<usize>, NodeBudgetExceeded> {
    let n = p.conflicts.len();
    let mut st = State {
        p,
        best: Vec::new(),
        chosen: Vec::new(),
        nodes: 0,
        class_seen: Vec::new(),
        done: false,
    };
    if let Some(classes) = p.classes {
        let k = classes.iter().copied().max().map_or(0, |m| m + 1);
        st.class_seen = alloc::vec![false; k];
    }
    st.dfs(0, BitSet::full(n))?;
    Ok(st.best)
}

struct State<'a, 'b> {
    p: &'b FamilyProblem<'a>,
    best: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    class_seen: Vec<bool>,
    done: bool,
}

impl State<'_, '_> {
    fn remaining_bound(&mut self, start: usize, allowed: &BitSet) -> usize {
        match self.p.classes {
            None => allowed.count_from(start),
            Some(classes) => {
                let mut k = 0;
                let mut i = allowed.next_from(start);
                while let Some(x) = i {
                    if !self.class_seen[classes[x]] {
                        self.class_seen[classes[x]] = true;
                        k += 1;
                    }
                    i = allowed.next_from(x + 1);
                }
                let mut i = allowed.next_from(start);
                while let Some(x) = i {
                    self.class_seen[classes[x]] = false;
                    i = allowed.next_from(x + 1);
                }
                k
            }
        }
    }

    fn dfs(&mut self, start: usize, allowed: BitSet) -> Result<(), NodeBudgetExceeded> {
        if self.done {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.p.max_nodes {
            return Err(NodeBudgetExceeded);
        }
        let Some(i) = allowed.next_from(start) else {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
                if Some(self.best.len()) == self.p.upper_bound {
                    self.done = true;
                }
            }
            return Ok(());
        };
        if self.chosen.len() + self.remaining_bound(start, &allowed) <= self.best.len() {
            return Ok(());
        }
        let mut with = allowed.clone();
        with.difference_with(&self.p.conflicts[i]);
        with.remove(i);
        self.chosen.push(i);
        self.dfs(i + 1, with)?;
        self.chosen.pop();
        let mut without = allowed;
        without.remove(i);
        self.dfs(i + 1, without)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn conflicts(n: usize, pairs: &[(usize, usize)]) -> Vec<BitSet> {
        let mut c = vec![BitSet::new(n); n];
        for &(a, b) in pairs {
            c[a].insert(b);
            c[b].insert(a);
        }
        c
    }

    fn solve(c: &[BitSet]) -> Vec<usize> {
        max_compatible_family(&FamilyProblem {
            conflicts: c,
            classes: None,
            upper_bound: None,
            max_nodes: u64::MAX,
        })
        .unwrap()
    }

    #[test]
    fn path_conflict_graph() {
        // conflict path 0-1-2-3-4: best is {0,2,4}
        let c = conflicts(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(solve(&c), vec![0, 2, 4]);
    }

    #[test]
    fn lexicographically_least_maximum() {
        // conflict 4-cycle 0-1-2-3: maxima {0,2} and {1,3}
        let c = conflicts(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(solve(&c), vec![0, 2]);
    }

    #[test]
    fn budget_is_reported() {
        let c = conflicts(6, &[]);
        let r = max_compatible_family(&FamilyProblem {
            conflicts: &c,
            classes: None,
            upper_bound: None,
            max_nodes: 2,
        });
        assert_eq!(r, Err(NodeBudgetExceeded));
    }
}
