//! The two-sided cobar construction `Ω(M; C; N)`.
//!
//! Basis: `x ⊗ [c_1 | ... | c_q] ⊗ y` with `c_i` in the positive-degree part
//! of `C`. A letter `[c]` has degree `|c| - 1`. Within each degree, basis
//! elements are ordered by word length, then `x`, then the word
//! lexicographically in `(|c|, index)`, then `y`.
//!
//! Differential, with `w` a word, `ρ(x) = Σ x_i ⊗ a_i`, `λ(y) = Σ b_j ⊗ y_j`
//! (only components with `a_i`, `b_j` of positive degree contribute) and
//! `Δ̄` the reduced diagonal:
//!
//! ```text
//! D(x⊗w⊗y) = dx⊗w⊗y − Σ (−1)^|x_i| x_i⊗[a_i|w]⊗y + (−1)^|x| x⊗d_Ω(w)⊗y
//!          + (−1)^(|x|+|w|) x⊗w⊗dy + (−1)^(|x|+|w|) Σ x⊗[w|b_j]⊗y_j
//! d_Ω[c] = −[dc] + Σ (−1)^|c'| [c'|c'']   over Δ̄ c = Σ c' ⊗ c''
//! ```
//!
//! and `d_Ω` extended to words as a derivation. `D ∘ D = 0` is checked on
//! construction.

use std::collections::HashMap;

use crate::algstruct::{power, ChainAlgebra, ChainCoalgebra, Side};
use crate::chain::{ChainComplex, ChainMap, HomologyReport};
use crate::comod::{coinvariants, Comodule, ComoduleMap};
use crate::error::{Error, Result, Violation};
use crate::linalg::{Field, GradedLinearMap, GradedVectorSpace, TensorSpace};

type Gen = (usize, usize);

/// A basis element `x ⊗ [c_1|...|c_q] ⊗ y`; letters are basis elements of `C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CobarBasis {
    pub x: Gen,
    pub word: Vec<Gen>,
    pub y: Gen,
}

impl CobarBasis {
    pub fn word_degree(&self) -> usize {
        self.word.iter().map(|c| c.0 - 1).sum()
    }

    pub fn degree(&self) -> usize {
        self.x.0 + self.word_degree() + self.y.0
    }

    fn sort_key(&self) -> (usize, Gen, &[Gen], Gen) {
        (self.word.len(), self.x, &self.word, self.y)
    }
}

#[derive(Clone, Debug)]
pub struct CobarComplex<F: Field> {
    complex: ChainComplex<F>,
    basis: Vec<Vec<CobarBasis>>,
    index: Vec<HashMap<CobarBasis, usize>>,
    left: Comodule<F>,
    coalgebra: ChainCoalgebra<F>,
    right: Comodule<F>,
}

/// Sparse column of a map, read as `(target generator, coefficient)`.
fn column_terms<F: Field>(m: &GradedLinearMap<F>, k: usize, j: usize) -> Vec<(usize, F::Elem)> {
    let f = m.field();
    m.column(k, j)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(c))
        .collect()
}

/// Components `(first, second, coefficient)` of a map into a two-factor tensor.
fn split_terms<F: Field>(m: &GradedLinearMap<F>, ts: &TensorSpace<F>, g: Gen) -> Vec<(Gen, Gen, F::Elem)> {
    let Some(t) = m.target_degree(g.0) else { return vec![] };
    column_terms(m, g.0, g.1)
        .into_iter()
        .map(|(i, c)| {
            let tup = &ts.basis(t)[i];
            (tup[0], tup[1], c)
        })
        .collect()
}

fn enumerate_words(letters: &[Gen], budget: usize, prefix: &mut Vec<Gen>, out: &mut Vec<Vec<Gen>>) {
    out.push(prefix.clone());
    for &l in letters {
        let ld = l.0 - 1;
        if ld <= budget {
            prefix.push(l);
            enumerate_words(letters, budget - ld, prefix, out);
            prefix.pop();
        }
    }
}

fn generators<F: Field>(s: &GradedVectorSpace<F>, upto: usize) -> Vec<Gen> {
    (0..=s.max_degree().min(upto))
        .flat_map(|k| (0..s.dim(k)).map(move |i| (k, i)))
        .collect()
}

impl<F: Field> CobarComplex<F> {
    /// `Ω(M; C; N)` truncated at `max_degree`. `M` is a right and `N` a left
    /// comodule over the 1-connected coaugmented coalgebra `C`.
    pub fn new(m: &Comodule<F>, c: &ChainCoalgebra<F>, n: &Comodule<F>, max_degree: usize) -> Result<Self> {
        if !c.one_connected() {
            return Err(Error::NotOneConnected);
        }
        let eta = c.coaug().ok_or(Error::NotCoaugmented)?;
        if m.side() != Side::Right || n.side() != Side::Left {
            return Err(Error::Precondition("cobar needs a right and a left comodule".into()));
        }
        if !crate::comod::same_coalgebra(m.coalgebra(), c) || !crate::comod::same_coalgebra(n.coalgebra(), c) {
            return Err(Error::Precondition("comodules over a different coalgebra".into()));
        }
        let f = c.field();
        if f.is_zero(&eta.column(0, 0)[0]) {
            return Err(Error::NotCoaugmented);
        }
        let top = max_degree;

        let letters: Vec<Gen> = generators(c.space(), top + 1).into_iter().filter(|g| g.0 >= 2).collect();
        let mut words = Vec::new();
        enumerate_words(&letters, top, &mut Vec::new(), &mut words);
        let xs = generators(m.space(), top);
        let ys = generators(n.space(), top);

        let mut basis: Vec<Vec<CobarBasis>> = vec![Vec::new(); top + 1];
        for w in &words {
            let wd: usize = w.iter().map(|c| c.0 - 1).sum();
            for &x in &xs {
                for &y in &ys {
                    let deg = x.0 + wd + y.0;
                    if deg <= top {
                        basis[deg].push(CobarBasis { x, word: w.clone(), y });
                    }
                }
            }
        }
        for b in &mut basis {
            b.sort_by(|p, q| p.sort_key().cmp(&q.sort_key()));
        }
        let index: Vec<HashMap<CobarBasis, usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect())
            .collect();
        let space = GradedVectorSpace::new(f, basis.iter().map(Vec::len).collect());

        let mc = m.coaction_space();
        let cn = n.coaction_space();
        let cc = c.pair_space();
        let d_m = m.complex().d();
        let d_n = n.complex().d();
        let d_c = c.complex().d();

        let sign = |e: usize, v: &F::Elem| if e % 2 == 1 { f.neg(v) } else { v.clone() };
        let d = GradedLinearMap::from_columns(&space, &space, -1, |k, j| {
            let b = &basis[k][j];
            let mut out: Vec<(CobarBasis, F::Elem)> = Vec::new();
            let xd = b.x.0;
            let wd = b.word_degree();

            for (i, v) in column_terms(d_m, b.x.0, b.x.1) {
                out.push((CobarBasis { x: (xd - 1, i), word: b.word.clone(), y: b.y }, v));
            }
            for (xi, a, v) in split_terms(m.coaction(), &mc, b.x) {
                if a.0 == 0 {
                    continue;
                }
                let mut word = vec![a];
                word.extend_from_slice(&b.word);
                out.push((CobarBasis { x: xi, word, y: b.y }, f.neg(&sign(xi.0, &v))));
            }
            let mut before = 0;
            for p in 0..b.word.len() {
                let cp = b.word[p];
                let s = xd + before;
                for (i, v) in column_terms(d_c, cp.0, cp.1) {
                    let mut word = b.word.clone();
                    word[p] = (cp.0 - 1, i);
                    out.push((CobarBasis { x: b.x, word, y: b.y }, f.neg(&sign(s, &v))));
                }
                for (c1, c2, v) in split_terms(c.comul(), &cc, cp) {
                    if c1.0 == 0 || c2.0 == 0 {
                        continue;
                    }
                    let mut word = b.word[..p].to_vec();
                    word.push(c1);
                    word.push(c2);
                    word.extend_from_slice(&b.word[p + 1..]);
                    out.push((CobarBasis { x: b.x, word, y: b.y }, sign(s + c1.0, &v)));
                }
                before += cp.0 - 1;
            }
            for (i, v) in column_terms(d_n, b.y.0, b.y.1) {
                out.push((CobarBasis { x: b.x, word: b.word.clone(), y: (b.y.0 - 1, i) }, sign(xd + wd, &v)));
            }
            for (bj, yj, v) in split_terms(n.coaction(), &cn, b.y) {
                if bj.0 == 0 {
                    continue;
                }
                let mut word = b.word.clone();
                word.push(bj);
                out.push((CobarBasis { x: b.x, word, y: yj }, sign(xd + wd, &v)));
            }
            out.into_iter()
                .map(|(e, v)| {
                    let i = *index[k - 1].get(&e).expect("image basis element enumerated");
                    (i, v)
                })
                .collect()
        });

        let complex = ChainComplex::new(space, d)?;
        let cobar = CobarComplex {
            complex,
            basis,
            index,
            left: m.clone(),
            coalgebra: c.clone(),
            right: n.clone(),
        };
        if let Err(v) = cobar.complex.validate() {
            let col = v.entry.map_or(0, |e| e.1);
            let elem = &cobar.basis[v.degree][col];
            return Err(Error::Invalid(Violation {
                detail: format!("D∘D ≠ 0 on {elem:?}"),
                ..v
            }));
        }
        Ok(cobar)
    }

    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.complex.space()
    }
    pub fn field(&self) -> &F {
        self.complex.field()
    }
    pub fn max_degree(&self) -> usize {
        self.complex.max_degree()
    }
    pub fn coalgebra(&self) -> &ChainCoalgebra<F> {
        &self.coalgebra
    }
    pub fn left(&self) -> &Comodule<F> {
        &self.left
    }
    pub fn right(&self) -> &Comodule<F> {
        &self.right
    }

    pub fn basis(&self, k: usize) -> &[CobarBasis] {
        self.basis.get(k).map_or(&[], |b| b.as_slice())
    }

    pub fn index_of(&self, e: &CobarBasis) -> Option<usize> {
        self.index.get(e.degree())?.get(e).copied()
    }

    /// First nonzero entry of `D` joining basis elements whose word lengths
    /// differ by more than one.
    pub fn word_length_violation(&self) -> Option<(usize, usize, usize)> {
        let d = self.complex.d();
        for (&k, m) in d.blocks() {
            for r in 0..m.rows() {
                for col in 0..m.cols() {
                    if self.field().is_zero(m.get(r, col)) {
                        continue;
                    }
                    let a = self.basis[k][col].word.len();
                    let b = self.basis[k - 1][r].word.len();
                    if a.abs_diff(b) > 1 {
                        return Some((k, r, col));
                    }
                }
            }
        }
        None
    }

    /// The map `m ↦ g(m) ⊗ [] ⊗ y_0` from a complex into word length 0,
    /// where `g` lands in `M` and `y_0` is the coaugmentation-like generator
    /// given by `y_coeffs` over `N_0`.
    pub fn word_zero_map(&self, g: &GradedLinearMap<F>, y_coeffs: &[F::Elem]) -> Result<GradedLinearMap<F>> {
        let f = self.field().clone();
        if g.shift() != 0 {
            return Err(Error::Shape("degree-0 map expected".into()));
        }
        Ok(GradedLinearMap::from_columns(g.source(), self.space(), 0, |k, j| {
            let mut img = Vec::new();
            if k > self.max_degree() {
                return img;
            }
            for (i, v) in column_terms(g, k, j) {
                for (yi, yc) in y_coeffs.iter().enumerate() {
                    if f.is_zero(yc) {
                        continue;
                    }
                    let e = CobarBasis { x: (k, i), word: vec![], y: (0, yi) };
                    if let Some(t) = self.index_of(&e) {
                        img.push((t, f.mul(&v, yc)));
                    }
                }
            }
            img
        }))
    }
}

/// `Ω(M; C; N)`.
pub fn two_sided_cobar<F: Field>(
    m: &Comodule<F>,
    c: &ChainCoalgebra<F>,
    n: &Comodule<F>,
    max_degree: usize,
) -> Result<CobarComplex<F>> {
    CobarComplex::new(m, c, n, max_degree)
}

/// `ΩC = Ω(k; C; k)` with concatenation of words as product.
pub fn reduced_cobar_algebra<F: Field>(c: &ChainCoalgebra<F>, max_degree: usize) -> Result<(CobarComplex<F>, ChainAlgebra<F>)> {
    let m = Comodule::trivial(c, Side::Right)?;
    let n = Comodule::trivial(c, Side::Left)?;
    let om = CobarComplex::new(&m, c, &n, max_degree)?;
    let f = c.field();
    let s = om.space().clone();
    let pair = power(&s, 2);
    let mul = GradedLinearMap::from_columns(pair.space(), &s, 0, |k, j| {
        let t = &pair.basis(k)[j];
        let a = &om.basis(t[0].0)[t[0].1];
        let b = &om.basis(t[1].0)[t[1].1];
        let mut word = a.word.clone();
        word.extend_from_slice(&b.word);
        let e = CobarBasis { x: (0, 0), word, y: (0, 0) };
        om.index_of(&e).map(|i| vec![(i, f.one())]).unwrap_or_default()
    });
    let u = GradedVectorSpace::unit(f);
    let unit = GradedLinearMap::from_columns(&u, &s, 0, |_, _| {
        let e = CobarBasis { x: (0, 0), word: vec![], y: (0, 0) };
        vec![(om.index_of(&e).expect("empty word"), f.one())]
    });
    let alg = ChainAlgebra::new(om.complex().clone(), mul, unit)?;
    Ok((om, alg))
}

/// `Ω(M; C; C)` as a right comodule by `x ⊗ w ⊗ c ↦ Σ x ⊗ w ⊗ c' ⊗ c''`.
pub fn cofree_cobar_comodule<F: Field>(om: &CobarComplex<F>) -> Result<Comodule<F>> {
    let c = om.coalgebra();
    let f = c.field();
    let s = om.space();
    let ts = TensorSpace::new(f, vec![s.clone(), c.space().clone()], s.max_degree());
    let cc = c.pair_space();
    let rho = GradedLinearMap::from_columns(s, ts.space(), 0, |k, j| {
        let b = &om.basis(k)[j];
        split_terms(c.comul(), &cc, b.y)
            .into_iter()
            .filter_map(|(c1, c2, v)| {
                let e = CobarBasis { x: b.x, word: b.word.clone(), y: c1 };
                let i = om.index_of(&e)?;
                let (_, t) = ts.index_of(&[(e.degree(), i), c2])?;
                Some((t, v))
            })
            .collect()
    });
    Comodule::new(Side::Right, c.clone(), om.complex().clone(), rho)
}

/// The fibrant replacement `j : M -> Ω(M; C; C)`, `x ↦ Σ x_i ⊗ [] ⊗ c_i`.
#[derive(Clone, Debug)]
pub struct CobarResolution<F: Field> {
    pub cobar: CobarComplex<F>,
    pub comodule: Comodule<F>,
    pub j: ComoduleMap<F>,
}

pub fn cobar_inclusion_j<F: Field>(m: &Comodule<F>, c: &ChainCoalgebra<F>, max_degree: usize) -> Result<CobarResolution<F>> {
    let right = Comodule::regular(c, Side::Left);
    let om = CobarComplex::new(m, c, &right, max_degree)?;
    let comodule = cofree_cobar_comodule(&om)?;
    let mc = m.coaction_space();
    let src = m.with_max_degree(max_degree)?;
    let jmap = GradedLinearMap::from_columns(src.space(), om.space(), 0, |k, j| {
        split_terms(m.coaction(), &mc, (k, j))
            .into_iter()
            .filter_map(|(xi, ci, v)| {
                let e = CobarBasis { x: xi, word: vec![], y: ci };
                om.index_of(&e).map(|t| (t, v))
            })
            .collect()
    });
    let j = ComoduleMap::new(src, comodule.clone(), jmap)?;
    j.validate().map_err(|v| Error::Invalid(v.within("j")))?;
    if let Some(top) = j.chain_map().reliable_up_to() {
        j.chain_map().is_quasi_iso(top)?.map_err(|v| Error::Invalid(v.within("j")))?;
    }
    Ok(CobarResolution {
        cobar: om,
        comodule,
        j,
    })
}

/// `M^{hco C} = Ω(M; C; k)`, together with the verified identification with
/// the coinvariants of `Ω(M; C; C)`.
#[derive(Clone, Debug)]
pub struct HomotopyCoinvariants<F: Field> {
    pub cobar: CobarComplex<F>,
    /// `ι : Ω(M; C; k) -> Ω(M; C; C)`, `x ⊗ w ↦ x ⊗ w ⊗ 1`.
    pub iota: ChainMap<F>,
}

pub fn homotopy_coinvariants<F: Field>(m: &Comodule<F>, c: &ChainCoalgebra<F>, max_degree: usize) -> Result<HomotopyCoinvariants<F>> {
    let k = Comodule::trivial(c, Side::Left)?;
    let omk = CobarComplex::new(m, c, &k, max_degree)?;
    let omc = CobarComplex::new(m, c, &Comodule::regular(c, Side::Left), max_degree)?;
    let rc = cofree_cobar_comodule(&omc)?;
    let (coinv, incl) = coinvariants(&rc)?;
    let eta = c.coaug().ok_or(Error::NotCoaugmented)?.column(0, 0);
    let f = c.field();
    let iota = GradedLinearMap::from_columns(omk.space(), omc.space(), 0, |d, j| {
        let b = &omk.basis(d)[j];
        eta.iter()
            .enumerate()
            .filter(|(_, v)| !f.is_zero(v))
            .filter_map(|(i, v)| {
                let e = CobarBasis { x: b.x, word: b.word.clone(), y: (0, i) };
                omc.index_of(&e).map(|t| (t, v.clone()))
            })
            .collect()
    });
    let iota = ChainMap::new(omk.complex().clone(), omc.complex().clone(), iota)?;
    iota.validate().map_err(|v| Error::Invalid(v.within("ι")))?;
    if let Some(k) = coinv.space().first_dim_difference(omk.space()) {
        return Err(Error::Invalid(Violation::new(
            "coinvariants of Ω(M;C;C) ≅ Ω(M;C;k)",
            k,
            format!("dims {} vs {}", coinv.dim(k), omk.space().dim(k)),
        )));
    }
    let lifted = iota.map().factor_through(&incl).map_err(|e| {
        Error::Invalid(Violation::new("ι lands in the coinvariants", 0, e.to_string()))
    })?;
    if lifted.inverse().is_err() {
        return Err(Error::Invalid(Violation::new(
            "ι is onto the coinvariants",
            0,
            "induced map is not invertible",
        )));
    }
    Ok(HomotopyCoinvariants { cobar: omk, iota })
}

/// `Cotor^C(M, k)` up to `max_degree - 1`.
pub fn cotor<F: Field>(m: &Comodule<F>, c: &ChainCoalgebra<F>, max_degree: usize) -> Result<HomologyReport<F>> {
    let k = Comodule::trivial(c, Side::Left)?;
    let om = CobarComplex::new(m, c, &k, max_degree)?;
    let top = om
        .complex()
        .reliable_up_to()
        .ok_or_else(|| crate::error::range_error(0, None))?;
    om.complex().homology(top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::{PrimeField, Rationals};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn trivial_pair<F: Field>(c: &ChainCoalgebra<F>) -> (Comodule<F>, Comodule<F>) {
        (
            Comodule::trivial(c, Side::Right).unwrap(),
            Comodule::trivial(c, Side::Left).unwrap(),
        )
    }

    #[test]
    fn unit_coalgebra_gives_unit_complex() {
        let c = ChainCoalgebra::unit(&Rationals, 4);
        let (m, n) = trivial_pair(&c);
        let om = two_sided_cobar(&m, &c, &n, 4).unwrap();
        assert_eq!(om.space().dims(), &[1, 0, 0, 0, 0]);
    }

    #[test]
    fn sphere_cobar_is_tensor_algebra() {
        let c = corpus::sphere_coalgebra(&f2(), 2, 10);
        let (m, n) = trivial_pair(&c);
        let om = two_sided_cobar(&m, &c, &n, 10).unwrap();
        assert_eq!(om.space().dims(), &[1; 11]);
        assert!(om.complex().d().is_zero());
        let h = cotor(&m, &c, 10).unwrap();
        assert_eq!(h.dims, vec![1; 10]);
    }

    #[test]
    fn cp2_cobar_dims_and_differential() {
        let f = f2();
        let c = corpus::cp2_coalgebra(&f, 4);
        let (m, n) = trivial_pair(&c);
        let om = two_sided_cobar(&m, &c, &n, 5).unwrap();
        assert_eq!(&om.space().dims()[..5], &[1, 1, 1, 2, 3]);
        let y = CobarBasis { x: (0, 0), word: vec![(4, 0)], y: (0, 0) };
        let xx = CobarBasis { x: (0, 0), word: vec![(2, 0), (2, 0)], y: (0, 0) };
        let col = om.complex().d().column(3, om.index_of(&y).unwrap());
        assert_eq!(col[om.index_of(&xx).unwrap()], 1);
        assert_eq!(cotor(&m, &c, 5).unwrap().dims, vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn cotor_of_exterior_with_itself() {
        let h = corpus::exterior_bimonoid(&f2(), 2, 8);
        let c = h.coalgebra();
        let m = Comodule::regular(c, Side::Right);
        let r = cotor(&m, c, 8).unwrap();
        assert_eq!(r.dims, vec![1, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn reduced_cobar_is_an_algebra() {
        let c = corpus::cp2_coalgebra(&Rationals, 4);
        let (_, alg) = reduced_cobar_algebra(&c, 8).unwrap();
        assert!(alg.validate().is_ok());
        let s = corpus::sphere_coalgebra(&f2(), 2, 4);
        let (om, alg) = reduced_cobar_algebra(&s, 6).unwrap();
        assert!(alg.validate().is_ok());
        assert!(om.complex().d().is_zero());
    }

    #[test]
    fn j_is_a_quasi_iso_comodule_map() {
        let f = f2();
        let c = corpus::sphere_coalgebra(&f, 2, 6);
        let m = Comodule::regular(&c, Side::Right);
        let r = cobar_inclusion_j(&m, &c, 6).unwrap();
        let x = r.j.map().column(2, 0);
        let a = r.cobar.index_of(&CobarBasis { x: (2, 0), word: vec![], y: (0, 0) }).unwrap();
        let b = r.cobar.index_of(&CobarBasis { x: (0, 0), word: vec![], y: (2, 0) }).unwrap();
        assert_eq!(x[a], 1);
        assert_eq!(x[b], 1);
        assert_eq!(x.iter().filter(|v| **v != 0).count(), 2);
        let k = Comodule::trivial(&c, Side::Right).unwrap();
        assert!(cobar_inclusion_j(&k, &c, 6).is_ok());
    }

    #[test]
    fn homotopy_coinvariants_identification() {
        let q = Rationals;
        let c = corpus::cp2_coalgebra(&q, 6);
        let m = Comodule::regular(&c, Side::Right);
        let hc = homotopy_coinvariants(&m, &c, 6).unwrap();
        assert_eq!(hc.cobar.complex().homology(5).unwrap().dims, vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn rejects_non_simply_connected() {
        let q = Rationals;
        let c = corpus::sphere_coalgebra(&q, 1, 4);
        let (m, n) = trivial_pair(&c);
        assert!(matches!(two_sided_cobar(&m, &c, &n, 4), Err(Error::NotOneConnected)));
    }

    #[test]
    fn word_length_moves_by_at_most_one() {
        let q = Rationals;
        let c = corpus::cp2_coalgebra(&q, 8);
        let m = Comodule::regular(&c, Side::Right);
        let n = Comodule::regular(&c, Side::Left);
        let om = two_sided_cobar(&m, &c, &n, 8).unwrap();
        assert_eq!(om.word_length_violation(), None);
    }
}
