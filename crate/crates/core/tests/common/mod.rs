//! Test-side helpers: an independent row reduction, an independent
//! enumeration of flat tensor bases, and random inputs.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use hgx_core::algstruct::{ChainAlgebra, DgModule, Side};
use hgx_core::chain::ChainComplex;
use hgx_core::linalg::{Field, GradedLinearMap, GradedVectorSpace, Matrix};
use rand::rngs::StdRng;
use rand::Rng;

/// Rank by plain Gaussian elimination on a list of rows.
pub fn rank<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).unwrap();
        let pivot: Vec<F::Elem> = rows[r].iter().map(|x| f.mul(x, &inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !f.is_zero(&row[c]) {
                let t = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(x, &f.mul(&t, y));
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

pub type Tuple = Vec<(usize, usize)>;

/// All tuples `((deg_1, idx_1), ...)` of total degree `k`, lexicographic.
pub fn tuples(dims: &[&[usize]], k: usize) -> Vec<Tuple> {
    fn go(dims: &[&[usize]], k: usize, acc: &mut Tuple, out: &mut Vec<Tuple>) {
        if dims.is_empty() {
            if k == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for d in 0..=k.min(dims[0].len().saturating_sub(1)) {
            for i in 0..dims[0][d] {
                acc.push((d, i));
                go(&dims[1..], k - d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(dims, k, &mut Vec::new(), &mut out);
    out
}

/// Indexing of a flat tensor basis in one degree.
pub struct Basis {
    pub list: Vec<Tuple>,
    pub index: HashMap<Tuple, usize>,
}

impl Basis {
    pub fn new(dims: &[&[usize]], k: usize) -> Self {
        let list = tuples(dims, k);
        let index = list.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Basis { list, index }
    }
}

/// Sparse column of a degree-0 map at `(deg, idx)`, read as a list of
/// `(target index, coefficient)`.
pub fn column<F: Field>(map: &GradedLinearMap<F>, deg: usize, idx: usize) -> Vec<(usize, F::Elem)> {
    if deg > map.source().max_degree() || map.source().dim(deg) == 0 {
        return vec![];
    }
    let f = map.field();
    map.column(deg, idx)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(c))
        .collect()
}

/// The flat basis of `V_1 ⊗ ... ⊗ V_n` in degree `k` for a list of spaces.
pub fn flat_tuples<F: Field>(spaces: &[&GradedVectorSpace<F>], k: usize) -> Vec<Tuple> {
    let dims: Vec<&[usize]> = spaces.iter().map(|s| s.dims()).collect();
    tuples(&dims, k)
}

pub fn dims_of<F: Field>(spaces: &[&GradedVectorSpace<F>]) -> Vec<Vec<usize>> {
    spaces.iter().map(|s| s.dims().to_vec()).collect()
}

/// Rows of a matrix given by sparse columns.
pub fn dense<F: Field>(f: &F, rows: usize, cols: &[Vec<(usize, F::Elem)>]) -> Vec<Vec<F::Elem>> {
    let mut m = vec![vec![f.zero(); cols.len()]; rows];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            m[*i][j] = f.add(&m[*i][j], c);
        }
    }
    m
}

pub fn random_elem<F: Field>(f: &F, rng: &mut StdRng) -> F::Elem {
    f.from_i64(rng.gen_range(-2..=2))
}

pub fn random_matrix<F: Field>(f: &F, rng: &mut StdRng, rows: usize, cols: usize) -> Matrix<F> {
    Matrix::from_fn(f, rows, cols, |_, _| random_elem(f, rng))
}

/// A random complex with `dims[k] <= max_dim`, built so that `d ∘ d = 0`.
pub fn random_complex<F: Field>(f: &F, rng: &mut StdRng, n: usize, max_dim: usize) -> ChainComplex<F> {
    let dims: Vec<usize> = (0..=n).map(|_| rng.gen_range(0..=max_dim)).collect();
    random_complex_with_dims(f, rng, dims)
}

pub fn random_complex_with_dims<F: Field>(f: &F, rng: &mut StdRng, dims: Vec<usize>) -> ChainComplex<F> {
    let space = GradedVectorSpace::new(f, dims.clone());
    let mut blocks: BTreeMap<usize, Matrix<F>> = BTreeMap::new();
    for k in 1..dims.len() {
        let m = match blocks.get(&(k - 1)) {
            Some(prev) => {
                let ker = prev.kernel_basis();
                let r = random_matrix(f, rng, ker.cols(), dims[k]);
                ker.mul(&r)
            }
            None => random_matrix(f, rng, dims[0], dims[1]),
        };
        blocks.insert(k, m);
    }
    let d = GradedLinearMap::new(space.clone(), space.clone(), -1, blocks).unwrap();
    ChainComplex::new(space, d).unwrap()
}

/// The free module `X ⊗ B` (right) or `B ⊗ X` (left) on a complex `X`.
pub fn free_module<F: Field>(b: &ChainAlgebra<F>, x: &ChainComplex<F>, side: Side) -> DgModule<F> {
    use hgx_core::linalg::TensorSpace;
    let f = b.field();
    let n = x.max_degree();
    let bs = b.space().clone();
    let xs = x.space().clone();
    match side {
        Side::Right => {
            let xb = TensorSpace::new(f, vec![xs.clone(), bs.clone()], n);
            let complex = ChainComplex::on_tensor(&xb, &[x, b.complex()]).unwrap();
            let xbb = TensorSpace::new(f, vec![xs.clone(), bs.clone(), bs.clone()], n);
            let mu = xbb.apply(1, 2, b.mul(), std::slice::from_ref(&bs), &xb).unwrap();
            let grouped = xbb.regroup(&[2, 1]).unwrap();
            let action = mu.compose(&grouped.from_grouped).unwrap();
            DgModule::new(Side::Right, b.clone(), complex, action).unwrap()
        }
        Side::Left => {
            let bx = TensorSpace::new(f, vec![bs.clone(), xs.clone()], n);
            let complex = ChainComplex::on_tensor(&bx, &[b.complex(), x]).unwrap();
            let bbx = TensorSpace::new(f, vec![bs.clone(), bs.clone(), xs.clone()], n);
            let mu = bbx.apply(0, 2, b.mul(), std::slice::from_ref(&bs), &bx).unwrap();
            let grouped = bbx.regroup(&[1, 2]).unwrap();
            let action = mu.compose(&grouped.from_grouped).unwrap();
            DgModule::new(Side::Left, b.clone(), complex, action).unwrap()
        }
    }
}
