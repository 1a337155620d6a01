//! Flat multi-factor tensor products of graded spaces.
//!
//! A basis vector of `V_1 ⊗ ... ⊗ V_n` is a tuple `[(deg_1, idx_1), ...]`.
//! Within each total degree the tuples are ordered lexicographically by
//! `(deg_1, idx_1, deg_2, idx_2, ...)`. For two factors this is the order
//! `(i, index of v, index of w)`. Total degrees above the cap are dropped.
//!
//! Signs follow the Koszul rule: moving a map of degree `s` past an element
//! of degree `e` costs `(-1)^(s e)`, and swapping elements of degrees `a`,
//! `b` costs `(-1)^(a b)`.

use std::collections::HashMap;

use super::field::Field;
use super::graded::{GradedLinearMap, GradedVectorSpace};
use crate::error::{Error, Result};

/// One basis tuple: `(degree, index)` per factor.
pub type Tuple = Vec<(usize, usize)>;

#[derive(Clone, Debug)]
pub struct TensorSpace<F: Field> {
    factors: Vec<GradedVectorSpace<F>>,
    cap: usize,
    basis: Vec<Vec<Tuple>>,
    index: Vec<HashMap<Tuple, usize>>,
    space: GradedVectorSpace<F>,
}

fn enumerate<F: Field>(factors: &[GradedVectorSpace<F>], cap: usize, prefix: &mut Tuple, total: usize, out: &mut Vec<Vec<Tuple>>) {
    let pos = prefix.len();
    if pos == factors.len() {
        out[total].push(prefix.clone());
        return;
    }
    let fac = &factors[pos];
    for d in 0..=fac.max_degree().min(cap - total) {
        for i in 0..fac.dim(d) {
            prefix.push((d, i));
            enumerate(factors, cap, prefix, total + d, out);
            prefix.pop();
        }
    }
}

impl<F: Field> TensorSpace<F> {
    /// Tensor product of `factors` truncated at total degree `cap`.
    pub fn new(field: &F, factors: Vec<GradedVectorSpace<F>>, cap: usize) -> Self {
        let mut basis = vec![Vec::new(); cap + 1];
        enumerate(&factors, cap, &mut Vec::new(), 0, &mut basis);
        let index = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        let space = GradedVectorSpace::new(field, basis.iter().map(Vec::len).collect());
        TensorSpace {
            factors,
            cap,
            basis,
            index,
            space,
        }
    }

    /// Untruncated product: the cap is the sum of the factors' max degrees.
    pub fn full(field: &F, factors: Vec<GradedVectorSpace<F>>) -> Self {
        let cap = factors.iter().map(|f| f.max_degree()).sum();
        Self::new(field, factors, cap)
    }

    pub fn field(&self) -> &F {
        self.space.field()
    }
    pub fn factors(&self) -> &[GradedVectorSpace<F>] {
        &self.factors
    }
    pub fn cap(&self) -> usize {
        self.cap
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        &self.space
    }

    pub fn basis(&self, k: usize) -> &[Tuple] {
        self.basis.get(k).map_or(&[], |b| b.as_slice())
    }

    pub fn index_of(&self, t: &[(usize, usize)]) -> Option<(usize, usize)> {
        let k: usize = t.iter().map(|p| p.0).sum();
        self.index.get(k)?.get(t).map(|&i| (k, i))
    }

    fn check_factors(&self, other: &[GradedVectorSpace<F>], what: &str) -> Result<()> {
        if self.factors.len() != other.len() {
            return Err(Error::Shape(format!(
                "{what}: {} factors vs {}",
                self.factors.len(),
                other.len()
            )));
        }
        for (i, (a, b)) in self.factors.iter().zip(other).enumerate() {
            if let Some(k) = a.first_dim_difference(b) {
                return Err(Error::DimensionMismatch {
                    degree: k,
                    detail: format!("{what}: factor {i} differs"),
                });
            }
        }
        Ok(())
    }

    /// Apply `map` to the factors `pos .. pos + arity`, whose outputs are read
    /// as a tensor of `out_factors`, landing in `target`. The map's source
    /// must be the flat tensor of the consumed factors (for `arity = 1`, the
    /// factor itself; for `arity = 0`, the unit), and its target the flat
    /// tensor of `out_factors`.
    pub fn apply(
        &self,
        pos: usize,
        arity: usize,
        map: &GradedLinearMap<F>,
        out_factors: &[GradedVectorSpace<F>],
        target: &TensorSpace<F>,
    ) -> Result<GradedLinearMap<F>> {
        let f = self.field();
        if pos + arity > self.factors.len() {
            return Err(Error::Shape("map position out of range".into()));
        }
        let mut expect: Vec<GradedVectorSpace<F>> = self.factors[..pos].to_vec();
        expect.extend(out_factors.iter().cloned());
        expect.extend(self.factors[pos + arity..].iter().cloned());
        target.check_factors(&expect, "apply target")?;

        let mid = TensorSpace::new(f, self.factors[pos..pos + arity].to_vec(), map.source().max_degree());
        if let Some(k) = mid.space.first_dim_difference(map.source()) {
            return Err(Error::DimensionMismatch {
                degree: k,
                detail: "map source is not the tensor of the consumed factors".into(),
            });
        }
        let out = TensorSpace::new(f, out_factors.to_vec(), map.target().max_degree());
        if let Some(k) = out.space.first_dim_difference(map.target()) {
            return Err(Error::DimensionMismatch {
                degree: k,
                detail: "map target is not the tensor of the output factors".into(),
            });
        }
        let shift = map.shift();
        let odd_shift = shift.rem_euclid(2) == 1;
        let mut tuple = Vec::new();
        Ok(GradedLinearMap::from_columns(&self.space, &target.space, shift, |k, j| {
            let t = &self.basis[k][j];
            let (pre, rest) = t.split_at(pos);
            let (m, post) = rest.split_at(arity);
            let Some((md, mi)) = mid.index_of(m) else {
                return vec![];
            };
            let pre_deg: usize = pre.iter().map(|p| p.0).sum();
            let neg = odd_shift && pre_deg % 2 == 1;
            let Some(od) = map.target_degree(md) else {
                return vec![];
            };
            let col = map.column(md, mi);
            let mut img = Vec::new();
            for (oi, c) in col.into_iter().enumerate() {
                if f.is_zero(&c) {
                    continue;
                }
                tuple.clear();
                tuple.extend_from_slice(pre);
                tuple.extend_from_slice(&out.basis(od)[oi]);
                tuple.extend_from_slice(post);
                if let Some((_, ti)) = target.index_of(&tuple) {
                    img.push((ti, if neg { f.neg(&c) } else { c }));
                }
            }
            img
        }))
    }

    /// The factor list obtained by replacing `arity` factors at `pos`.
    pub fn replaced(&self, pos: usize, arity: usize, out_factors: &[GradedVectorSpace<F>], cap: usize) -> TensorSpace<F> {
        let mut fs: Vec<GradedVectorSpace<F>> = self.factors[..pos].to_vec();
        fs.extend(out_factors.iter().cloned());
        fs.extend(self.factors[pos + arity..].iter().cloned());
        TensorSpace::new(self.field(), fs, cap)
    }

    /// Convenience for a degree-preserving endomorphism-style application of
    /// a one-factor map `V_pos -> W` into the space with `W` in place of `V_pos`.
    pub fn apply_one(&self, pos: usize, map: &GradedLinearMap<F>) -> Result<(TensorSpace<F>, GradedLinearMap<F>)> {
        let cap = (self.cap as i64 + map.shift()).max(0) as usize;
        let target = self.replaced(pos, 1, std::slice::from_ref(map.target()), cap);
        let m = self.apply(pos, 1, map, std::slice::from_ref(map.target()), &target)?;
        Ok((target, m))
    }

    /// `f_1 ⊗ ... ⊗ f_n`, with `(f_1 ⊗ ... ⊗ f_n)(v_1 ⊗ ... ⊗ v_n) =
    /// (-1)^(Σ_{i<j} |f_j| |v_i|) f_1(v_1) ⊗ ... ⊗ f_n(v_n)`.
    pub fn tensor_maps(maps: &[&GradedLinearMap<F>], source: &TensorSpace<F>, target: &TensorSpace<F>) -> Result<GradedLinearMap<F>> {
        let f = source.field();
        let srcs: Vec<_> = maps.iter().map(|m| m.source().clone()).collect();
        let tgts: Vec<_> = maps.iter().map(|m| m.target().clone()).collect();
        source.check_factors(&srcs, "tensor source")?;
        target.check_factors(&tgts, "tensor target")?;
        let shift: i64 = maps.iter().map(|m| m.shift()).sum();
        Ok(GradedLinearMap::from_columns(&source.space, &target.space, shift, |k, j| {
            let t = &source.basis[k][j];
            let mut sign_exp = 0i64;
            let mut deg_before = 0i64;
            let mut partial: Vec<(Tuple, F::Elem)> = vec![(Vec::new(), f.one())];
            for (m, &(d, i)) in maps.iter().zip(t) {
                sign_exp += m.shift() * deg_before;
                deg_before += d as i64;
                let Some(od) = m.target_degree(d) else { return vec![] };
                let col = m.column(d, i);
                let mut next = Vec::new();
                for (tt, c) in &partial {
                    for (oi, e) in col.iter().enumerate() {
                        if f.is_zero(e) {
                            continue;
                        }
                        let mut nt = tt.clone();
                        nt.push((od, oi));
                        next.push((nt, f.mul(c, e)));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    return vec![];
                }
            }
            let neg = sign_exp.rem_euclid(2) == 1;
            partial
                .into_iter()
                .filter_map(|(tt, c)| {
                    let (_, ti) = target.index_of(&tt)?;
                    Some((ti, if neg { f.neg(&c) } else { c }))
                })
                .collect()
        }))
    }

    /// The symmetry isomorphism onto the factors reordered by `perm`
    /// (new factor `i` is old factor `perm[i]`), with Koszul signs.
    pub fn permute(&self, perm: &[usize]) -> Result<(TensorSpace<F>, GradedLinearMap<F>)> {
        let n = self.factors.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Shape("not a permutation of the factors".into()));
        }
        let f = self.field();
        let target = TensorSpace::new(f, perm.iter().map(|&p| self.factors[p].clone()).collect(), self.cap);
        let m = GradedLinearMap::from_columns(&self.space, &target.space, 0, |k, j| {
            let t = &self.basis[k][j];
            let nt: Tuple = perm.iter().map(|&p| t[p]).collect();
            let mut odd = 0usize;
            for a in 0..n {
                for b in a + 1..n {
                    if perm[a] > perm[b] {
                        odd += t[perm[a]].0 * t[perm[b]].0;
                    }
                }
            }
            let (_, ti) = target.index_of(&nt).expect("permuted tuple present");
            vec![(ti, f.sign(odd))]
        });
        Ok((target, m))
    }

    /// Regroup consecutive factors: `groups` lists group sizes summing to the
    /// number of factors. Returns the grouped space (whose factors are the flat
    /// tensors of each group, each capped at `self.cap`) and the isomorphism
    /// from the flat space to it.
    pub fn regroup(&self, groups: &[usize]) -> Result<Regrouped<F>> {
        if groups.iter().sum::<usize>() != self.factors.len() {
            return Err(Error::Shape("group sizes do not cover the factors".into()));
        }
        let f = self.field();
        let mut inner = Vec::new();
        let mut at = 0;
        for &g in groups {
            inner.push(TensorSpace::new(f, self.factors[at..at + g].to_vec(), self.cap));
            at += g;
        }
        let outer = TensorSpace::new(f, inner.iter().map(|t| t.space.clone()).collect(), self.cap);
        let to_grouped = GradedLinearMap::from_columns(&self.space, &outer.space, 0, |k, j| {
            let t = &self.basis[k][j];
            let mut at = 0;
            let mut nt = Vec::new();
            for (g, ts) in groups.iter().zip(&inner) {
                nt.push(ts.index_of(&t[at..at + g]).expect("group tuple present"));
                at += g;
            }
            let (_, ti) = outer.index_of(&nt).expect("grouped tuple present");
            vec![(ti, f.one())]
        });
        let from_grouped = to_grouped.inverse()?;
        Ok(Regrouped {
            outer,
            inner,
            to_grouped,
            from_grouped,
        })
    }

    /// The tensor differential `Σ_i 1 ⊗ .. ⊗ d_i ⊗ .. ⊗ 1` with Koszul signs.
    pub fn differential(&self, ds: &[&GradedLinearMap<F>]) -> Result<GradedLinearMap<F>> {
        if ds.len() != self.factors.len() {
            return Err(Error::Shape("one differential per factor required".into()));
        }
        let mut total = GradedLinearMap::zero(&self.space, &self.space, -1);
        for (i, d) in ds.iter().enumerate() {
            if d.shift() != -1 {
                return Err(Error::Shape("differentials have degree -1".into()));
            }
            let term = self.apply(i, 1, d, std::slice::from_ref(&self.factors[i]), self)?;
            total = total.add(&term)?;
        }
        Ok(total)
    }
}

/// A regrouped tensor product and the comparison isomorphisms.
#[derive(Clone, Debug)]
pub struct Regrouped<F: Field> {
    pub outer: TensorSpace<F>,
    pub inner: Vec<TensorSpace<F>>,
    pub to_grouped: GradedLinearMap<F>,
    pub from_grouped: GradedLinearMap<F>,
}

/// Binary tensor product of maps, capped at the sum of the max degrees.
pub fn tensor<F: Field>(f: &GradedLinearMap<F>, g: &GradedLinearMap<F>) -> Result<GradedLinearMap<F>> {
    let field = f.field();
    let src = TensorSpace::full(field, vec![f.source().clone(), g.source().clone()]);
    let tgt = TensorSpace::full(field, vec![f.target().clone(), g.target().clone()]);
    TensorSpace::tensor_maps(&[f, g], &src, &tgt)
}
