//! Groebner bases modulo a prime by sparse linear algebra: all critical pairs
//! of the lowest degree are reduced together as the rows of one matrix.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::exact::Monomial;

use super::groebner::{GbLimits, MonomialOrder};
use super::modp::{Fp, GbMod, MPoly};

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn divmask(m: &Monomial) -> u64 {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |acc, (i, _)| acc | 1 << (i % 64))
}

struct Row {
    cols: Vec<u32>,
    vals: Vec<u64>,
}

/// Rows of one reduction step before the columns are ordered.
struct Layout {
    mons: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    has_pivot: Vec<bool>,
    pivots: Vec<(Vec<u32>, usize)>,
    targets: Vec<(Vec<u32>, usize)>,
}

impl Layout {
    fn new() -> Self {
        Layout {
            mons: Vec::new(),
            index: HashMap::new(),
            has_pivot: Vec::new(),
            pivots: Vec::new(),
            targets: Vec::new(),
        }
    }

    fn intern(&mut self, m: Monomial, todo: &mut Vec<u32>) -> u32 {
        if let Some(&id) = self.index.get(&m) {
            return id;
        }
        let id = self.mons.len() as u32;
        self.mons.push(m.clone());
        self.index.insert(m, id);
        self.has_pivot.push(false);
        todo.push(id);
        id
    }

    fn row_ids(&mut self, shift: &Monomial, poly: &MPoly, todo: &mut Vec<u32>) -> Vec<u32> {
        poly.iter().map(|(m, _)| self.intern(m.mul(shift), todo)).collect()
    }
}

struct Engine<'a> {
    f: Fp,
    order: MonomialOrder,
    polys: Vec<MPoly>,
    masks: Vec<u64>,
    active: Vec<usize>,
    limits: &'a GbLimits,
    steps: usize,
}

impl Engine<'_> {
    fn reducer_for(&self, m: &Monomial, candidates: &[usize]) -> Option<usize> {
        let mask = divmask(m);
        candidates
            .iter()
            .copied()
            .filter(|&g| self.masks[g] & !mask == 0 && self.polys[g][0].0.divides(m))
            .min_by_key(|&g| self.polys[g].len())
    }

    /// Adds reducer rows for every monomial that some element of `candidates`
    /// can cancel.
    fn preprocess(&self, layout: &mut Layout, mut todo: Vec<u32>, candidates: &[usize]) {
        while let Some(id) = todo.pop() {
            if layout.has_pivot[id as usize] {
                continue;
            }
            let m = layout.mons[id as usize].clone();
            if let Some(g) = self.reducer_for(&m, candidates) {
                layout.has_pivot[id as usize] = true;
                let shift = m.div(&self.polys[g][0].0);
                let ids = layout.row_ids(&shift, &self.polys[g], &mut todo);
                layout.pivots.push((ids, g));
            }
        }
    }

    /// Orders the columns decreasingly and reduces every target row by the
    /// pivots and by the earlier targets. Returns the reduced targets whose
    /// leading column carried no pivot, along with the column monomials.
    fn eliminate(&mut self, layout: Layout, keep_lead: bool) -> Result<(Vec<Monomial>, Vec<Option<Row>>)> {
        let f = self.f;
        let order = self.order;
        let n = layout.mons.len();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.sort_by(|&a, &b| order.cmp(&layout.mons[b as usize], &layout.mons[a as usize]));
        let mut col_of = vec![0u32; n];
        for (c, &id) in perm.iter().enumerate() {
            col_of[id as usize] = c as u32;
        }
        let build = |ids: &[u32], poly: &MPoly| Row {
            cols: ids.iter().map(|&id| col_of[id as usize]).collect(),
            vals: poly.iter().map(|&(_, c)| c).collect(),
        };

        let mut store: Vec<Row> = layout.pivots.iter().map(|(ids, g)| build(ids, &self.polys[*g])).collect();
        let mut pivot_at: Vec<u32> = vec![u32::MAX; n];
        for (k, r) in store.iter().enumerate() {
            pivot_at[r.cols[0] as usize] = k as u32;
        }
        let mut targets: Vec<Row> = layout.targets.iter().map(|(ids, g)| build(ids, &self.polys[*g])).collect();
        targets.sort_by_key(|r| r.cols[0]);

        let mut dense = vec![0u64; n];
        let mut out = Vec::with_capacity(targets.len());
        for row in targets {
            let start = row.cols[0] as usize;
            for (&c, &v) in row.cols.iter().zip(&row.vals) {
                dense[c as usize] = v;
            }
            let mut cols = Vec::new();
            let mut vals = Vec::new();
            if keep_lead {
                cols.push(start as u32);
                vals.push(dense[start]);
                dense[start] = 0;
            }
            for c in start..n {
                let v = dense[c];
                if v == 0 {
                    continue;
                }
                dense[c] = 0;
                let k = pivot_at[c];
                if k == u32::MAX {
                    cols.push(c as u32);
                    vals.push(v);
                    continue;
                }
                self.steps += 1;
                let piv = &store[k as usize];
                let neg = f.p - v;
                for (&pc, &pv) in piv.cols[1..].iter().zip(&piv.vals[1..]) {
                    let slot = &mut dense[pc as usize];
                    *slot = (*slot + neg * pv) % f.p;
                }
            }
            if self.steps > self.limits.max_reductions {
                return Err(Error::Resource(format!("more than {} reduction steps", self.limits.max_reductions)));
            }
            if cols.is_empty() {
                out.push(None);
                continue;
            }
            if !keep_lead {
                let inv = f.inv(vals[0]);
                for v in vals.iter_mut() {
                    *v = f.mul(*v, inv);
                }
                pivot_at[cols[0] as usize] = store.len() as u32;
                store.push(Row {
                    cols: cols.clone(),
                    vals: vals.clone(),
                });
            }
            out.push(Some(Row { cols, vals }));
        }
        let mons = perm.into_iter().map(|id| layout.mons[id as usize].clone()).collect();
        Ok((mons, out))
    }

    fn push(&mut self, h: MPoly, pairs: &mut Vec<Pair>) -> Result<()> {
        let hm = h[0].0.clone();
        if hm.degree() > self.limits.max_degree {
            return Err(Error::Resource(format!(
                "basis element of degree {} exceeds {}",
                hm.degree(),
                self.limits.max_degree
            )));
        }
        let hi = self.polys.len();
        self.masks.push(divmask(&hm));
        self.polys.push(h);
        let polys = &self.polys;

        let mut candidates: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair {
                i: g,
                j: hi,
                lcm: polys[g][0].0.lcm(&hm),
            })
            .collect();
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = candidates.pop() {
            let coprime = polys[p.i][0].0.is_coprime(&hm);
            let dominated = candidates.iter().chain(kept.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            }
        }
        kept.retain(|p| !polys[p.i][0].0.is_coprime(&hm));
        pairs.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            polys[p.i][0].0.lcm(&hm) == p.lcm || polys[p.j][0].0.lcm(&hm) == p.lcm
        });
        pairs.extend(kept);
        self.active.retain(|&g| !hm.divides(&polys[g][0].0));
        self.active.push(hi);
        if self.active.len() > self.limits.max_basis {
            return Err(Error::Resource(format!("basis grew beyond {} elements", self.limits.max_basis)));
        }
        Ok(())
    }

    fn to_poly(mons: &[Monomial], row: Row) -> MPoly {
        row.cols.into_iter().map(|c| mons[c as usize].clone()).zip(row.vals).collect()
    }

    /// Inserts new elements by decreasing leading monomial, so that any later
    /// one whose lead divides an earlier one retires it from the active set.
    fn absorb(&mut self, mut news: Vec<MPoly>, pairs: &mut Vec<Pair>) -> Result<bool> {
        news.sort_by(|a, b| self.order.cmp(&b[0].0, &a[0].0));
        for h in news {
            if h[0].0.is_one() {
                return Ok(true);
            }
            self.push(h, pairs)?;
        }
        Ok(false)
    }

    fn run(&mut self, inputs: Vec<MPoly>) -> Result<bool> {
        let mut pairs: Vec<Pair> = Vec::new();

        // The inputs are echelonized once against each other first.
        let mut layout = Layout::new();
        let mut todo = Vec::new();
        let base = self.polys.len();
        for (k, p) in inputs.into_iter().enumerate() {
            self.masks.push(divmask(&p[0].0));
            self.polys.push(p);
            let ids = layout.row_ids(&Monomial::one(self.polys[base + k][0].0.nvars()), &self.polys[base + k], &mut todo);
            layout.targets.push((ids, base + k));
        }
        let (mons, rows) = self.eliminate(layout, false)?;
        let news = rows.into_iter().flatten().map(|r| Self::to_poly(&mons, r)).collect();
        if self.absorb(news, &mut pairs)? {
            return Ok(true);
        }

        while !pairs.is_empty() {
            let d = pairs.iter().map(|p| p.lcm.degree()).min().unwrap();
            let (now, later): (Vec<Pair>, Vec<Pair>) = pairs.into_iter().partition(|p| p.lcm.degree() == d);
            pairs = later;

            let mut layout = Layout::new();
            let mut todo = Vec::new();
            let mut seen: HashSet<(Monomial, usize)> = HashSet::new();
            for p in &now {
                for g in [p.i, p.j] {
                    let shift = p.lcm.div(&self.polys[g][0].0);
                    if seen.insert((shift.clone(), g)) {
                        let ids = layout.row_ids(&shift, &self.polys[g], &mut todo);
                        layout.has_pivot[ids[0] as usize] = true;
                        layout.targets.push((ids, g));
                    }
                }
            }
            let active = self.active.clone();
            self.preprocess(&mut layout, todo, &active);
            let (mons, rows) = self.eliminate(layout, false)?;
            let news: Vec<MPoly> = rows
                .into_iter()
                .flatten()
                .map(|r| Self::to_poly(&mons, r))
                .filter(|h| self.reducer_for(&h[0].0, &self.active).is_none())
                .collect();
            if self.absorb(news, &mut pairs)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Reduces the tails of the active elements against each other.
    fn interreduce(&mut self) -> Result<Vec<MPoly>> {
        let active = self.active.clone();
        let mut layout = Layout::new();
        let mut todo = Vec::new();
        for &g in &active {
            let one = Monomial::one(self.polys[g][0].0.nvars());
            let ids = layout.row_ids(&one, &self.polys[g], &mut todo);
            layout.has_pivot[ids[0] as usize] = true;
            layout.pivots.push((ids.clone(), g));
            layout.targets.push((ids, g));
        }
        self.preprocess(&mut layout, todo, &active);
        let (mons, rows) = self.eliminate(layout, true)?;
        let mut basis: Vec<MPoly> = rows.into_iter().flatten().map(|r| Self::to_poly(&mons, r)).collect();
        basis.sort_by(|a, b| self.order.cmp(&a[0].0, &b[0].0));
        Ok(basis)
    }
}

/// Reduced Groebner basis of `system` modulo `f.p`.
pub(crate) fn groebner_mod(f: Fp, system: &[MPoly], nvars: usize, order: MonomialOrder, limits: &GbLimits) -> Result<GbMod> {
    let inputs: Vec<MPoly> = system.iter().filter(|p| !p.is_empty()).cloned().collect();
    let mut engine = Engine {
        f,
        order,
        polys: Vec::new(),
        masks: Vec::new(),
        active: Vec::new(),
        limits,
        steps: 0,
    };
    let unit = engine.run(inputs)?;
    let basis = if unit {
        vec![vec![(Monomial::one(nvars), 1)]]
    } else {
        engine.interreduce()?
    };
    Ok(GbMod { f, order, nvars, basis })
}
