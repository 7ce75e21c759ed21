//! Block-frontal sparse Householder QR for matrices whose columns split into
//! consecutive groups (one per mesh interval).
//!
//! Rows are assigned to the group of their first nonzero column. The front of
//! group `g` is a dense panel over the group's columns `G` followed by the
//! later columns `T` its rows touch. Exact constraint rows are eliminated
//! first (pivoted QR on `G`, then direct elimination of the pivot columns
//! from the least-squares rows), the least-squares rows are then reduced by
//! pivoted QR on the remaining `G` columns, and what is left over `T` is
//! compressed and carried to the front of its first column.
//!
//! The factorization only records transformations; [`FrontalQr::solve`]
//! replays them on any right-hand side.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{factor_pivoted, factor_plain, Mat, Reflector};

/// A sparse row with increasing column indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseRow {
    /// Column indices.
    pub cols: Vec<usize>,
    /// Values.
    pub vals: Vec<f64>,
}

impl SparseRow {
    /// Row from parallel slices (columns must be increasing).
    pub fn new(cols: Vec<usize>, vals: Vec<f64>) -> Self {
        debug_assert!(cols.windows(2).all(|w| w[0] < w[1]));
        Self { cols, vals }
    }

    /// Copy with every value multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self { cols: self.cols.clone(), vals: self.vals.iter().map(|v| v * s).collect() }
    }
}

#[derive(Clone, Debug)]
struct Front {
    /// First global column of the group and its width.
    g0: usize,
    n_g: usize,
    /// Global columns of the `T` part.
    t_cols: Vec<usize>,
    c_slots: Vec<usize>,
    ls_slots: Vec<usize>,
    c_refl: Vec<Reflector>,
    c_rank: usize,
    /// Panel position → local column after the constraint step.
    c_cols: Vec<usize>,
    /// Upper-triangular constraint rows (`c_rank × panel width`).
    rc: Mat,
    /// `(local constraint row, slot)` carried to later fronts.
    c_out: Vec<(usize, usize)>,
    /// Elimination multipliers (`ls rows × c_rank`).
    elim: Mat,
    ls_refl: Vec<Reflector>,
    ls_rank: usize,
    /// Panel position → local column after the least-squares step.
    ls_cols: Vec<usize>,
    rl: Mat,
    comp_refl: Vec<Reflector>,
    ls_out: Vec<(usize, usize)>,
}

/// Recorded frontal factorization.
#[derive(Clone, Debug)]
pub struct FrontalQr {
    ncols: usize,
    n_ls: usize,
    n_c: usize,
    n_slots: usize,
    fronts: Vec<Front>,
    ls_rank: usize,
    c_rank: usize,
}

fn group_of(starts: &[usize], col: usize) -> usize {
    starts.partition_point(|&s| s <= col) - 1
}

impl FrontalQr {
    /// Factors the least-squares rows `ls` subject to the exact constraint
    /// rows `cons`.
    ///
    /// `starts` holds the first column of each group followed by `ncols`.
    /// Pivot candidates whose remaining norm is at most `tol_ls` (resp.
    /// `tol_c`) are treated as dependent.
    pub fn factor(
        ls: &[SparseRow],
        cons: &[SparseRow],
        starts: &[usize],
        tol_ls: f64,
        tol_c: f64,
    ) -> Self {
        let ngroups = starts.len() - 1;
        let ncols = starts[ngroups];
        let (n_ls, n_c) = (ls.len(), cons.len());
        let mut next_slot = n_ls + n_c;
        let mut rows: Vec<SparseRow> = Vec::with_capacity(n_ls + n_c);
        rows.extend(ls.iter().cloned());
        rows.extend(cons.iter().cloned());
        let mut b_ls: Vec<Vec<usize>> = vec![Vec::new(); ngroups];
        let mut b_c: Vec<Vec<usize>> = vec![Vec::new(); ngroups];
        for (slot, r) in rows.iter().enumerate() {
            if let Some(&c0) = r.cols.first() {
                let g = group_of(starts, c0);
                if slot < n_ls {
                    b_ls[g].push(slot);
                } else {
                    b_c[g].push(slot);
                }
            }
        }
        let mut fronts = Vec::with_capacity(ngroups);
        let (mut ls_rank, mut c_rank) = (0, 0);
        for g in 0..ngroups {
            let (g0, g1) = (starts[g], starts[g + 1]);
            let n_g = g1 - g0;
            let ls_slots = core::mem::take(&mut b_ls[g]);
            let c_slots = core::mem::take(&mut b_c[g]);
            let mut t_cols: Vec<usize> = ls_slots
                .iter()
                .chain(&c_slots)
                .flat_map(|&s| rows[s].cols.iter().copied().filter(|&c| c >= g1))
                .collect();
            t_cols.sort_unstable();
            t_cols.dedup();
            let width = n_g + t_cols.len();
            let local = |c: usize| {
                if c < g1 {
                    c - g0
                } else {
                    n_g + t_cols.binary_search(&c).expect("column collected above")
                }
            };
            let mut perm: Vec<usize> = (0..width).collect();

            // constraint rows: pivoted QR on G
            let mut mc = Mat::zeros(c_slots.len(), width);
            for (i, &s) in c_slots.iter().enumerate() {
                for (&c, &v) in rows[s].cols.iter().zip(&rows[s].vals) {
                    mc[(i, local(c))] += v;
                }
            }
            let mut c_refl = Vec::new();
            let rc_rank = if c_slots.is_empty() {
                0
            } else {
                factor_pivoted(&mut mc, 0, 0, n_g, tol_c, &mut perm, &mut c_refl)
            };
            let c_cols = perm.clone();
            let rc = Mat::from_fn(rc_rank, width, |i, p| if p >= i { mc[(i, p)] } else { 0.0 });
            let mut c_out = Vec::new();
            for i in rc_rank..c_slots.len() {
                let (cols, vals): (Vec<usize>, Vec<f64>) = (0..t_cols.len())
                    .filter(|&t| mc[(i, n_g + t)] != 0.0)
                    .map(|t| (t_cols[t], mc[(i, n_g + t)]))
                    .unzip();
                if let Some(&c0) = cols.first() {
                    b_c[group_of(starts, c0)].push(next_slot);
                    c_out.push((i, next_slot));
                    rows.push(SparseRow::new(cols, vals));
                    next_slot += 1;
                }
            }

            // least-squares rows in the column order left by the constraint step
            let mut inv = vec![0usize; width];
            for (p, &l) in perm.iter().enumerate() {
                inv[l] = p;
            }
            let mut ml = Mat::zeros(ls_slots.len(), width);
            for (i, &s) in ls_slots.iter().enumerate() {
                for (&c, &v) in rows[s].cols.iter().zip(&rows[s].vals) {
                    ml[(i, inv[local(c)])] += v;
                }
            }
            // direct elimination of the constraint pivot columns
            let mut elim = Mat::zeros(ls_slots.len(), rc_rank);
            if rc_rank > 0 {
                for i in 0..ls_slots.len() {
                    for p in 0..rc_rank {
                        let mut e = ml[(i, p)];
                        for q in 0..p {
                            e -= elim[(i, q)] * rc[(q, p)];
                        }
                        elim[(i, p)] = e / rc[(p, p)];
                    }
                    for p in 0..rc_rank {
                        let e = elim[(i, p)];
                        if e != 0.0 {
                            for col in rc_rank..width {
                                ml[(i, col)] -= e * rc[(p, col)];
                            }
                        }
                        ml[(i, p)] = 0.0;
                    }
                }
            }
            let mut ls_refl = Vec::new();
            let rl_rank = factor_pivoted(&mut ml, 0, rc_rank, n_g, tol_ls, &mut perm, &mut ls_refl);
            let ls_cols = perm;
            let rl = Mat::from_fn(rl_rank, width, |i, p| if p >= rc_rank + i { ml[(i, p)] } else { 0.0 });
            // what remains of G below the rank is treated as zero
            for i in rl_rank..ls_slots.len() {
                for p in 0..n_g {
                    ml[(i, p)] = 0.0;
                }
            }
            let mut comp_refl = Vec::new();
            let steps = if rl_rank < ls_slots.len() && !t_cols.is_empty() {
                factor_plain(&mut ml, rl_rank, n_g, width, &mut comp_refl)
            } else {
                0
            };
            let mut ls_out = Vec::new();
            for i in rl_rank..rl_rank + steps {
                let (cols, vals): (Vec<usize>, Vec<f64>) = (0..t_cols.len())
                    .filter(|&t| ml[(i, n_g + t)] != 0.0)
                    .map(|t| (t_cols[t], ml[(i, n_g + t)]))
                    .unzip();
                if let Some(&c0) = cols.first() {
                    b_ls[group_of(starts, c0)].push(next_slot);
                    ls_out.push((i, next_slot));
                    rows.push(SparseRow::new(cols, vals));
                    next_slot += 1;
                }
            }
            ls_rank += rl_rank;
            c_rank += rc_rank;
            fronts.push(Front {
                g0,
                n_g,
                t_cols,
                c_slots,
                ls_slots,
                c_refl,
                c_rank: rc_rank,
                c_cols,
                rc,
                c_out,
                elim,
                ls_refl,
                ls_rank: rl_rank,
                ls_cols,
                rl,
                comp_refl,
                ls_out,
            });
        }
        Self { ncols, n_ls, n_c, n_slots: next_slot, fronts, ls_rank, c_rank }
    }

    /// Total rank found among the least-squares pivots.
    pub fn ls_rank(&self) -> usize {
        self.ls_rank
    }

    /// Total rank of the constraints.
    pub fn c_rank(&self) -> usize {
        self.c_rank
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Solution for right-hand sides `b_ls` (least-squares rows) and `b_c`
    /// (constraints). Dependent columns get the value zero.
    pub fn solve(&self, b_ls: &[f64], b_c: &[f64]) -> Vec<f64> {
        assert_eq!(b_ls.len(), self.n_ls);
        assert_eq!(b_c.len(), self.n_c);
        let mut slots = vec![0.0; self.n_slots];
        slots[..self.n_ls].copy_from_slice(b_ls);
        slots[self.n_ls..self.n_ls + self.n_c].copy_from_slice(b_c);
        let mut ys: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(self.fronts.len());
        for f in &self.fronts {
            let mut yc: Vec<f64> = f.c_slots.iter().map(|&s| slots[s]).collect();
            for h in &f.c_refl {
                h.apply(&mut yc);
            }
            for &(i, s) in &f.c_out {
                slots[s] = yc[i];
            }
            let mut yl: Vec<f64> = f.ls_slots.iter().map(|&s| slots[s]).collect();
            for (i, y) in yl.iter_mut().enumerate() {
                for p in 0..f.c_rank {
                    *y -= f.elim[(i, p)] * yc[p];
                }
            }
            for h in f.ls_refl.iter().chain(&f.comp_refl) {
                h.apply(&mut yl);
            }
            for &(i, s) in &f.ls_out {
                slots[s] = yl[i];
            }
            yc.truncate(f.c_rank);
            yl.truncate(f.ls_rank);
            ys.push((yc, yl));
        }
        let mut x = vec![0.0; self.ncols];
        for (f, (yc, yl)) in self.fronts.iter().zip(ys).rev() {
            let width = f.n_g + f.t_cols.len();
            // local values: G unknown (zero until solved), T known
            let mut xl = vec![0.0; width];
            for (t, &c) in f.t_cols.iter().enumerate() {
                xl[f.n_g + t] = x[c];
            }
            for i in (0..f.ls_rank).rev() {
                let p0 = f.c_rank + i;
                let mut s = yl[i];
                for p in p0 + 1..width {
                    s -= f.rl[(i, p)] * xl[f.ls_cols[p]];
                }
                xl[f.ls_cols[p0]] = s / f.rl[(i, p0)];
            }
            for i in (0..f.c_rank).rev() {
                let mut s = yc[i];
                for p in i + 1..width {
                    s -= f.rc[(i, p)] * xl[f.c_cols[p]];
                }
                xl[f.c_cols[i]] = s / f.rc[(i, i)];
            }
            x[f.g0..f.g0 + f.n_g].copy_from_slice(&xl[..f.n_g]);
        }
        x
    }
}
