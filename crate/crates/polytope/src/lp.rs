//! Exact linear programming over the rationals.
//!
//! Dense two-phase tableau simplex with Bland's rule, so it terminates on
//! degenerate problems. Variables are free; constraints are `A x <= b`.

use num_traits::{Signed, Zero};

use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Rat, point: Vec<Rat> },
    Unbounded,
    Infeasible,
}

impl LpResult {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// A feasible basis for `A x <= b`, reusable across objectives.
#[derive(Clone, Debug)]
pub struct Lp {
    dim: usize,
    // rows of the constraint tableau, last entry is the right-hand side
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    feasible: bool,
}

fn pivot(rows: &mut [Vec<Rat>], r: usize, e: usize) {
    let piv = rows[r][e].clone();
    for v in rows[r].iter_mut() {
        if !v.is_zero() {
            *v /= &piv;
        }
    }
    let prow = rows[r].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in rows.iter_mut().enumerate() {
        if i == r || row[e].is_zero() {
            continue;
        }
        let f = row[e].clone();
        for &j in &nz {
            let v = &f * &prow[j];
            row[j] -= v;
        }
    }
}

/// Runs the simplex loop on `rows` (constraints followed by one reduced-cost
/// row). Only columns `< allowed` may enter. Returns false when unbounded.
fn run(rows: &mut Vec<Vec<Rat>>, basis: &mut [usize], allowed: usize) -> bool {
    let m = basis.len();
    let rhs = rows[0].len() - 1;
    loop {
        let Some(e) = (0..allowed).find(|&j| rows[m][j].is_positive()) else {
            return true;
        };
        let mut best: Option<(usize, Rat)> = None;
        for i in 0..m {
            if !rows[i][e].is_positive() {
                continue;
            }
            let ratio = &rows[i][rhs] / &rows[i][e];
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        let Some((r, _)) = best else {
            return false;
        };
        pivot(rows, r, e);
        basis[r] = e;
    }
}

impl Lp {
    /// Phase one for the system `a_i . x <= b_i`.
    pub fn new(dim: usize, constraints: &[(Vec<Rat>, Rat)]) -> Lp {
        let m = constraints.len();
        let n_struct = 2 * dim + m;
        let n_art = constraints.iter().filter(|(_, b)| b.is_negative()).count();
        let width = n_struct + n_art + 1;
        let mut rows = Vec::with_capacity(m + 1);
        let mut basis = Vec::with_capacity(m);
        let mut art = n_struct;
        for (i, (a, b)) in constraints.iter().enumerate() {
            let mut row = vec![Rat::zero(); width];
            let neg = b.is_negative();
            for k in 0..dim {
                let v = if neg { -&a[k] } else { a[k].clone() };
                row[dim + k] = -&v;
                row[k] = v;
            }
            row[2 * dim + i] = if neg { Rat::from_integer((-1).into()) } else { Rat::from_integer(1.into()) };
            row[width - 1] = if neg { -b } else { b.clone() };
            if neg {
                row[art] = Rat::from_integer(1.into());
                basis.push(art);
                art += 1;
            } else {
                basis.push(2 * dim + i);
            }
            rows.push(row);
        }
        // Phase one objective: maximize -sum(artificials); reduced costs are
        // the column sums over artificial rows.
        let mut cost = vec![Rat::zero(); width];
        for (i, &bv) in basis.iter().enumerate() {
            if bv >= n_struct {
                for j in 0..width {
                    if j < n_struct {
                        cost[j] += &rows[i][j];
                    }
                }
                cost[width - 1] += &rows[i][width - 1];
            }
        }
        rows.push(cost);
        if n_art > 0 {
            run(&mut rows, &mut basis, n_struct);
        }
        let residual = rows[m][width - 1].clone();
        let feasible = residual.is_zero();
        rows.pop();
        if feasible {
            // Drive remaining artificials out of the basis.
            let mut i = 0;
            while i < rows.len() {
                if basis[i] >= n_struct {
                    match (0..n_struct).find(|&j| !rows[i][j].is_zero()) {
                        Some(j) => {
                            pivot(&mut rows, i, j);
                            basis[i] = j;
                            i += 1;
                        }
                        None => {
                            rows.remove(i);
                            basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        for row in rows.iter_mut() {
            let r = row[width - 1].clone();
            row.truncate(n_struct);
            row.push(r);
        }
        Lp { dim, rows, basis, feasible }
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    /// Maximize `c . x` over the feasible region.
    pub fn maximize(&self, c: &[Rat]) -> LpResult {
        if !self.feasible {
            return LpResult::Infeasible;
        }
        let d = self.dim;
        let width = self.rows.first().map_or(2 * d + 1, |r| r.len());
        let n = width - 1;
        let col_cost = |j: usize| -> Rat {
            if j < d {
                c[j].clone()
            } else if j < 2 * d {
                -&c[j - d]
            } else {
                Rat::zero()
            }
        };
        let mut rows = self.rows.clone();
        let mut basis = self.basis.clone();
        let mut red: Vec<Rat> = (0..n).map(col_cost).collect();
        red.push(Rat::zero());
        for (i, &bv) in basis.iter().enumerate() {
            let cb = col_cost(bv);
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !rows[i][j].is_zero() {
                    let v = &cb * &rows[i][j];
                    red[j] -= v;
                }
            }
        }
        rows.push(red);
        if !run(&mut rows, &mut basis, n) {
            return LpResult::Unbounded;
        }
        let mut point = vec![Rat::zero(); d];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < d {
                point[bv] += &rows[i][n];
            } else if bv < 2 * d {
                point[bv - d] -= &rows[i][n];
            }
        }
        let value = crate::linalg::dot(c, &point);
        LpResult::Optimal { value, point }
    }

    pub fn minimize(&self, c: &[Rat]) -> LpResult {
        let neg: Vec<Rat> = c.iter().map(|x| -x).collect();
        match self.maximize(&neg) {
            LpResult::Optimal { value, point } => LpResult::Optimal { value: -value, point },
            other => other,
        }
    }
}

/// One-shot maximization of `c . x` subject to `a_i . x <= b_i`.
pub fn maximize(c: &[Rat], constraints: &[(Vec<Rat>, Rat)]) -> LpResult {
    Lp::new(c.len(), constraints).maximize(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn cons(rows: &[(&[i64], i64)]) -> Vec<(Vec<Rat>, Rat)> {
        rows.iter().map(|(a, b)| (a.iter().map(|&x| int(x)).collect(), int(*b))).collect()
    }

    #[test]
    fn textbook_maximum() {
        let c = cons(&[(&[2, 1], 18), (&[6, 5], 60), (&[2, 5], 40), (&[-1, 0], 0), (&[0, -1], 0)]);
        let r = maximize(&[int(2), int(3)], &c);
        assert_eq!(r, LpResult::Optimal { value: int(28), point: vec![int(5), int(6)] });
    }

    #[test]
    fn infeasible_and_unbounded() {
        let c = cons(&[(&[1], -1), (&[-1], -1)]);
        assert_eq!(maximize(&[int(1)], &c), LpResult::Infeasible);
        let c = cons(&[(&[-1, 0], 0), (&[0, -1], 0)]);
        assert_eq!(maximize(&[int(1), int(1)], &c), LpResult::Unbounded);
    }

    #[test]
    fn negative_bounds_need_phase_one() {
        // x >= 3, y >= 2, x + y <= 10: min x + 2y = 7
        let c = cons(&[(&[-1, 0], -3), (&[0, -1], -2), (&[1, 1], 10)]);
        let lp = Lp::new(2, &c);
        assert_eq!(lp.minimize(&[int(1), int(2)]).value(), Some(&int(7)));
        assert_eq!(lp.maximize(&[int(1), int(0)]).value(), Some(&int(8)));
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // many constraints tight at the origin
        let c = cons(&[(&[1, 1], 0), (&[1, -1], 0), (&[-1, 0], 0), (&[2, 1], 0), (&[1, 2], 0), (&[-1, -1], 1)]);
        assert_eq!(maximize(&[int(0), int(1)], &c).value(), Some(&int(0)));
    }
}
