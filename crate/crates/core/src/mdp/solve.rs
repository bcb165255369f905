//! Exact evaluation of a fixed policy: `V = r + P·V` with `V = 0` on the
//! target, solved one strongly connected component at a time.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Strongly connected components of the graph `succ`, restricted to nodes
/// with `active[v]`. Components come out in reverse topological order (a
/// component is emitted after every component it can reach).
pub(crate) fn tarjan(succ: &[Vec<usize>], active: &[bool]) -> Vec<Vec<usize>> {
    let n = succ.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = alloc::vec![UNSEEN; n];
    let mut low = alloc::vec![0; n];
    let mut on_stack = alloc::vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    // explicit call stack of (node, next edge position)
    let mut calls: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if !active[root] || index[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if !active[w] {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
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
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Solves `V(s) = r(s) + Σ p·V(t)` for the states with `solve[s]`, where
/// every other state has its value fixed in `values`. `policy[s]` is the
/// distribution used at `s`. The system must be non-singular (every solved
/// state reaches a fixed state with probability 1 under the policy).
pub(crate) fn evaluate_policy(
    policy: &[&[(usize, Rational)]],
    rewards: &[Rational],
    solve: &[bool],
    values: &mut [Rational],
) {
    let succ: Vec<Vec<usize>> = policy.iter().map(|d| d.iter().map(|(t, _)| *t).collect()).collect();
    for comp in tarjan(&succ, solve) {
        if comp.len() == 1 && !succ[comp[0]].contains(&comp[0]) {
            let s = comp[0];
            let v = policy[s].iter().fold(rewards[s].clone(), |acc, (t, p)| acc + p * &values[*t]);
            values[s] = v;
            continue;
        }
        let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut rows: Vec<BTreeMap<usize, Rational>> = Vec::with_capacity(comp.len());
        let mut rhs: Vec<Rational> = Vec::with_capacity(comp.len());
        for &s in &comp {
            let mut row = BTreeMap::new();
            row.insert(local[&s], Rational::one());
            let mut b = rewards[s].clone();
            for (t, p) in policy[s] {
                match local.get(t) {
                    Some(&j) => {
                        let e = row.entry(j).or_insert_with(Rational::zero);
                        *e -= p;
                    }
                    None => b += p * &values[*t],
                }
            }
            row.retain(|_, v| !v.is_zero());
            rows.push(row);
            rhs.push(b);
        }
        let x = gauss(rows, rhs);
        for (i, &s) in comp.iter().enumerate() {
            values[s] = x[i].clone();
        }
    }
}

/// Sparse Gaussian elimination with row `i` pivoting on column `i`. The
/// systems here are diagonally dominant M-matrices, so no pivot vanishes.
fn gauss(mut rows: Vec<BTreeMap<usize, Rational>>, mut rhs: Vec<Rational>) -> Vec<Rational> {
    let n = rows.len();
    // column index -> rows (below the diagonal so far) with a non-zero there
    let mut col_rows: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].push(i);
        }
    }
    for k in 0..n {
        let pivot_row = core::mem::take(&mut rows[k]);
        let pivot = pivot_row.get(&k).cloned().expect("non-singular policy system");
        let pivot_rhs = rhs[k].clone();
        let targets = core::mem::take(&mut col_rows[k]);
        for i in targets {
            if i <= k {
                continue;
            }
            let Some(factor) = rows[i].remove(&k) else { continue };
            let factor = factor / &pivot;
            for (&j, v) in pivot_row.range(k + 1..) {
                let e = rows[i].entry(j).or_insert_with(|| {
                    col_rows[j].push(i);
                    Rational::zero()
                });
                *e -= &factor * v;
                if e.is_zero() {
                    rows[i].remove(&j);
                }
            }
            rhs[i] -= &factor * &pivot_rhs;
        }
        rows[k] = pivot_row;
    }
    let mut x = alloc::vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let row = &rows[k];
        let mut acc = rhs[k].clone();
        for (&j, v) in row.range(k + 1..) {
            acc -= v * &x[j];
        }
        x[k] = acc / &row[&k];
    }
    x
}
