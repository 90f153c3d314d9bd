//! Exact bounded-variable primal simplex over rationals.
//!
//! Every structural variable has finite bounds. Rows are turned into
//! equalities with one slack each (inequalities) and an artificial where the
//! starting point violates the row. Phase one drives the artificials to
//! zero, phase two optimises. Bland's rule picks entering and leaving
//! variables, which rules out cycling.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Minimise `objective · x` subject to `rows` and `lo <= x <= hi`.
#[derive(Clone, Debug, Default)]
pub struct Lp {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
    pub rows: Vec<Row>,
    pub objective: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
}

struct Tableau {
    /// `rows[i]` expresses basic variable `basis[i]` with coefficient one.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    x: Vec<Rational>,
    lo: Vec<Rational>,
    hi: Vec<Option<Rational>>,
    reduced: Vec<Rational>,
}

impl Tableau {
    fn set_costs(&mut self, costs: &[Rational]) {
        let mut d = costs.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, t) in self.rows[i].iter().enumerate() {
                if !t.is_zero() {
                    d[j] -= cb * t;
                }
            }
        }
        self.reduced = d;
    }

    fn at_upper(&self, j: usize) -> bool {
        matches!(&self.hi[j], Some(h) if &self.x[j] >= h)
    }

    fn entering(&self) -> Option<(usize, bool)> {
        (0..self.x.len()).find_map(|j| {
            if self.is_basic[j] {
                return None;
            }
            let d = &self.reduced[j];
            if d.is_negative() && !self.at_upper(j) {
                Some((j, true))
            } else if d.is_positive() && self.x[j] > self.lo[j] {
                Some((j, false))
            } else {
                None
            }
        })
    }

    /// Runs simplex iterations until no improving variable remains.
    fn optimise(&mut self) {
        while let Some((j, up)) = self.entering() {
            self.step(j, up);
        }
    }

    fn step(&mut self, j: usize, up: bool) {
        // Moving x_j by theta changes basic i by -rows[i][j] * dir * theta.
        let mut best: Option<(Rational, Option<usize>)> =
            self.hi[j].as_ref().map(|h| (h - &self.lo[j], None));
        for i in 0..self.rows.len() {
            let t = &self.rows[i][j];
            if t.is_zero() {
                continue;
            }
            let b = self.basis[i];
            let decreases = t.is_positive() == up;
            let limit = if decreases {
                (&self.x[b] - &self.lo[b]) / t.abs()
            } else {
                match &self.hi[b] {
                    Some(h) => (h - &self.x[b]) / t.abs(),
                    None => continue,
                }
            };
            let better = match &best {
                None => true,
                Some((theta, None)) => &limit < theta,
                Some((theta, Some(r))) => &limit < theta || (&limit == theta && b < self.basis[*r]),
            };
            if better {
                best = Some((limit, Some(i)));
            }
        }
        let (theta, leave) = best.expect("objective bounded over a bounded region");
        if !theta.is_zero() {
            let delta = if up { theta.clone() } else { -theta.clone() };
            for i in 0..self.rows.len() {
                let t = &self.rows[i][j];
                if !t.is_zero() {
                    let b = self.basis[i];
                    self.x[b] -= t * &delta;
                }
            }
            self.x[j] += &delta;
        }
        let Some(r) = leave else { return };
        let out = self.basis[r];
        // Snap the leaving variable onto the bound it reached.
        self.x[out] = if self.x[out] <= self.lo[out] {
            self.lo[out].clone()
        } else {
            self.hi[out].clone().expect("left at an upper bound")
        };
        self.pivot(r, j);
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for t in self.rows[r].iter_mut() {
                if !t.is_zero() {
                    *t /= &p;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&k| !pivot_row[k].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for &k in &nz {
                row[k] -= &f * &pivot_row[k];
            }
        }
        if !self.reduced[j].is_zero() {
            let f = self.reduced[j].clone();
            for &k in &nz {
                self.reduced[k] -= &f * &pivot_row[k];
            }
        }
        self.rows[r] = pivot_row;
        self.is_basic[self.basis[r]] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
    }
}

pub fn solve(lp: &Lp) -> LpOutcome {
    let n = lp.lo.len();
    if (0..n).any(|j| lp.lo[j] > lp.hi[j]) {
        return LpOutcome::Infeasible;
    }
    let m = lp.rows.len();
    let n_slack = lp.rows.iter().filter(|r| r.sense != Sense::Eq).count();

    // Residuals at the starting point x = lo decide which rows need an
    // artificial variable.
    let residual: Vec<Rational> = lp
        .rows
        .iter()
        .map(|row| {
            let mut r = row.rhs.clone();
            for (j, a) in &row.coeffs {
                r -= a * &lp.lo[*j];
            }
            r
        })
        .collect();
    let needs_art: Vec<bool> = lp
        .rows
        .iter()
        .zip(&residual)
        .map(|(row, r)| match row.sense {
            Sense::Le => r.is_negative(),
            Sense::Ge => r.is_positive(),
            Sense::Eq => true,
        })
        .collect();
    let n_art = needs_art.iter().filter(|b| **b).count();
    let total = n + n_slack + n_art;

    let mut rows = vec![vec![Rational::zero(); total]; m];
    let mut basis = vec![0; m];
    let mut x: Vec<Rational> = lp.lo.clone();
    x.resize(total, Rational::zero());
    let mut lo: Vec<Rational> = lp.lo.clone();
    lo.resize(total, Rational::zero());
    let mut hi: Vec<Option<Rational>> = lp.hi.iter().cloned().map(Some).collect();
    hi.resize(total, None);

    let (mut next_slack, mut next_art) = (n, n + n_slack);
    for (i, row) in lp.rows.iter().enumerate() {
        for (j, a) in &row.coeffs {
            rows[i][*j] += a;
        }
        let mut basic = None;
        if row.sense != Sense::Eq {
            let s = next_slack;
            next_slack += 1;
            let sign = if row.sense == Sense::Le { Rational::one() } else { -Rational::one() };
            rows[i][s] = sign.clone();
            if !needs_art[i] {
                x[s] = &residual[i] * &sign;
                basic = Some(s);
            }
        }
        let b = basic.unwrap_or_else(|| {
            let a = next_art;
            next_art += 1;
            let sign = if residual[i].is_negative() { -Rational::one() } else { Rational::one() };
            rows[i][a] = sign.clone();
            x[a] = residual[i].abs();
            a
        });
        let c = rows[i][b].clone();
        if !c.is_one() {
            for t in rows[i].iter_mut() {
                if !t.is_zero() {
                    *t /= &c;
                }
            }
        }
        basis[i] = b;
    }
    let mut is_basic = vec![false; total];
    for &b in &basis {
        is_basic[b] = true;
    }
    let mut tab = Tableau { rows, basis, is_basic, x, lo, hi, reduced: Vec::new() };

    if n_art > 0 {
        let mut costs = vec![Rational::zero(); total];
        for c in costs.iter_mut().skip(n + n_slack) {
            *c = Rational::one();
        }
        tab.set_costs(&costs);
        tab.optimise();
        if tab.x[n + n_slack..].iter().any(|v| !v.is_zero()) {
            return LpOutcome::Infeasible;
        }
        for j in n + n_slack..total {
            tab.hi[j] = Some(Rational::zero());
        }
    }

    let mut costs = vec![Rational::zero(); total];
    for (j, c) in &lp.objective {
        costs[*j] += c;
    }
    tab.set_costs(&costs);
    tab.optimise();

    let mut value = Rational::zero();
    for (j, c) in &lp.objective {
        value += c * &tab.x[*j];
    }
    tab.x.truncate(n);
    LpOutcome::Optimal { value, x: tab.x }
}
