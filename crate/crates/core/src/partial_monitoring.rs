//! Feedback graphs with binary losses as partial-monitoring games.
//!
//! Outcomes `y` range over all `2^K` loss vectors in `{0,1}^K`; column `y`
//! gives vertex `k` the loss bit `(y >> (K - 1 - k)) & 1`, so the columns
//! run lexicographically with vertex 1 most significant. Playing `i`
//! against `y` yields a symbol `H(i, y)` that identifies the losses of
//! `N^out(i)` and nothing more.

use std::io::Write;


use crate::error::{Error, Result};
use crate::graph::FeedbackGraph;

/// Largest `K` accepted by [`encode`].
pub const PM_MAX_VERTICES: usize = 12;

/// Residual below which a vector counts as inside a row space.
pub const SPAN_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PmInstance {
    num_actions: usize,
    /// `K x 2^K`, row-major.
    loss: Vec<u8>,
    /// `K x 2^K`, row-major; symbols of row `i` are `0..num_symbols[i]`.
    symbols: Vec<usize>,
    num_symbols: Vec<usize>,
    out_neighbors: Vec<Vec<usize>>,
}

pub fn encode(g: &FeedbackGraph) -> Result<PmInstance> {
    let k = g.num_vertices();
    if k > PM_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "partial-monitoring",
            num_vertices: k,
            cap: PM_MAX_VERTICES,
        });
    }
    let m = 1usize << k;
    let bit = |v: usize| 1usize << (k - 1 - v);
    let mut loss = Vec::with_capacity(k * m);
    for v in 0..k {
        loss.extend((0..m).map(|y| u8::from(y & bit(v) != 0)));
    }
    let mut symbols = Vec::with_capacity(k * m);
    let mut num_symbols = Vec::with_capacity(k);
    for i in 0..k {
        let mask: usize = g.out_neighbors(i).iter().map(|&v| bit(v)).sum();
        // Signatures are sub-masks of `mask`; index them densely by first
        // occurrence.
        let mut table = vec![usize::MAX; m];
        let mut next = 0;
        for y in 0..m {
            let sig = y & mask;
            if table[sig] == usize::MAX {
                table[sig] = next;
                next += 1;
            }
            symbols.push(table[sig]);
        }
        num_symbols.push(next);
    }
    Ok(PmInstance {
        num_actions: k,
        loss,
        symbols,
        num_symbols,
        out_neighbors: (0..k).map(|i| g.out_neighbors(i).to_vec()).collect(),
    })
}

impl PmInstance {
    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    /// `2^K`.
    pub fn num_outcomes(&self) -> usize {
        1 << self.num_actions
    }

    /// `L(i, .)`.
    pub fn loss_row(&self, i: usize) -> &[u8] {
        let m = self.num_outcomes();
        &self.loss[i * m..(i + 1) * m]
    }

    /// `H(i, .)`.
    pub fn symbol_row(&self, i: usize) -> &[usize] {
        let m = self.num_outcomes();
        &self.symbols[i * m..(i + 1) * m]
    }

    pub fn num_symbols(&self, i: usize) -> usize {
        self.num_symbols[i]
    }

    /// `S_i(sigma, y) = 1{H(i, y) = sigma}`, one row per symbol.
    pub fn signal_matrix(&self, i: usize) -> Vec<Vec<u8>> {
        let mut rows = vec![vec![0u8; self.num_outcomes()]; self.num_symbols[i]];
        for (y, &s) in self.symbol_row(i).iter().enumerate() {
            rows[s][y] = 1;
        }
        rows
    }

    /// Vertices whose loss is a function of `H(i, .)`: recovers `N^out(i)`.
    pub fn decode_observed(&self, i: usize) -> Vec<usize> {
        let h = self.symbol_row(i);
        (0..self.num_actions)
            .filter(|&v| {
                let l = self.loss_row(v);
                let mut seen = vec![None; self.num_symbols[i]];
                h.iter().zip(l).all(|(&s, &b)| match seen[s] {
                    None => {
                        seen[s] = Some(b);
                        true
                    }
                    Some(prev) => prev == b,
                })
            })
            .collect()
    }

    pub fn write_loss_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for i in 0..self.num_actions {
            w.write_record(self.loss_row(i).iter().map(u8::to_string))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_symbols_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for i in 0..self.num_actions {
            w.write_record(self.symbol_row(i).iter().map(usize::to_string))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// For an edge `(i, j)`: `L(j, .)` is exactly the sum of the rows of `S_i`
/// for the symbols that occur together with `L(j, y) = 1`.
pub fn claim_c1_check(inst: &PmInstance, i: usize, j: usize) -> Result<bool> {
    let k = inst.num_actions;
    for v in [i, j] {
        if v >= k {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                num_vertices: k,
            });
        }
    }
    if !inst.out_neighbors[i].contains(&j) {
        return Err(Error::invalid(format!("no edge ({}, {})", i + 1, j + 1)));
    }
    let h = inst.symbol_row(i);
    let l = inst.loss_row(j);
    let mut chosen = vec![false; inst.num_symbols[i]];
    for (&s, &b) in h.iter().zip(l) {
        if b == 1 {
            chosen[s] = true;
        }
    }
    let s = inst.signal_matrix(i);
    Ok((0..inst.num_outcomes()).all(|y| {
        let sum: u32 = (0..s.len())
            .filter(|&sigma| chosen[sigma])
            .map(|sigma| u32::from(s[sigma][y]))
            .sum();
        sum == u32::from(l[y])
    }))
}

/// [`claim_c1_check`] over every edge of the encoded graph.
pub fn claim_c1_all(inst: &PmInstance) -> bool {
    (0..inst.num_actions).all(|i| {
        inst.out_neighbors[i]
            .iter()
            .all(|&j| claim_c1_check(inst, i, j).unwrap_or(false))
    })
}

/// Orthonormal basis of the span of `rows`, by modified Gram-Schmidt with
/// one reorthogonalization pass.
struct RowSpace {
    basis: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RowSpace {
    fn of(rows: &[Vec<u8>]) -> Self {
        let mut uniq: Vec<&Vec<u8>> = rows.iter().collect();
        uniq.sort();
        uniq.dedup();
        let mut space = Self { basis: Vec::new() };
        for row in uniq {
            let v: Vec<f64> = row.iter().map(|&x| f64::from(x)).collect();
            let scale = dot(&v, &v).sqrt();
            if scale == 0.0 {
                continue;
            }
            let r = space.project_out(space.project_out(v));
            let norm = dot(&r, &r).sqrt();
            if norm > 1e-9 * scale {
                space.basis.push(r.into_iter().map(|x| x / norm).collect());
            }
        }
        space
    }

    fn project_out(&self, mut r: Vec<f64>) -> Vec<f64> {
        for b in &self.basis {
            let c = dot(b, &r);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        r
    }

    fn residual(&self, d: Vec<f64>) -> f64 {
        let r = self.project_out(self.project_out(d));
        dot(&r, &r).sqrt()
    }
}

fn difference(inst: &PmInstance, i: usize, j: usize) -> Vec<f64> {
    let (a, b) = (inst.loss_row(i), inst.loss_row(j));
    a.iter().zip(b).map(|(&x, &y)| f64::from(x) - f64::from(y)).collect()
}

/// Every `L(i, .) - L(j, .)` lies in the span of the rows of all `S_k`.
pub fn check_global_observability(inst: &PmInstance) -> bool {
    let k = inst.num_actions;
    let rows: Vec<Vec<u8>> = (0..k).flat_map(|v| inst.signal_matrix(v)).collect();
    let space = RowSpace::of(&rows);
    (0..k).all(|i| (i + 1..k).all(|j| space.residual(difference(inst, i, j)) < SPAN_TOLERANCE))
}

/// Every `L(i, .) - L(j, .)` lies in `rowsp(S_i) + rowsp(S_j)`.
pub fn check_local_observability(inst: &PmInstance) -> bool {
    let k = inst.num_actions;
    let signals: Vec<Vec<Vec<u8>>> = (0..k).map(|v| inst.signal_matrix(v)).collect();
    (0..k).all(|i| {
        (i + 1..k).all(|j| {
            let rows: Vec<Vec<u8>> = signals[i].iter().chain(&signals[j]).cloned().collect();
            RowSpace::of(&rows).residual(difference(inst, i, j))
                < SPAN_TOLERANCE
        })
    })
}
