//! Finite-type graded vector spaces and degreewise linear maps.
//!
//! A space is truncated at `max_degree`; degrees outside `[0, max_degree]`
//! are zero. A map stores one matrix per source degree `k`, of shape
//! `dim target(k + shift) x dim source(k)`. Missing blocks are zero.

use std::borrow::Cow;
use std::collections::BTreeMap;

use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result, Verdict, Violation};

#[derive(Clone, Debug, PartialEq)]
pub struct GradedVectorSpace<F: Field> {
    field: F,
    dims: Vec<usize>,
}

impl<F: Field> GradedVectorSpace<F> {
    /// `dims[k]` is the dimension in degree `k`; `max_degree = dims.len() - 1`.
    pub fn new(field: &F, dims: Vec<usize>) -> Self {
        assert!(!dims.is_empty(), "a graded space needs at least degree 0");
        GradedVectorSpace {
            field: field.clone(),
            dims,
        }
    }

    pub fn zero(field: &F, max_degree: usize) -> Self {
        Self::new(field, vec![0; max_degree + 1])
    }

    /// The ground field in degree 0.
    pub fn unit(field: &F) -> Self {
        Self::new(field, vec![1])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// Dimension in a possibly negative degree.
    pub fn dim_i(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            self.dim(k as usize)
        }
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Degreewise equal dimensions, reading missing degrees as zero.
    pub fn same_dims(&self, other: &Self) -> bool {
        let n = self.dims.len().max(other.dims.len());
        (0..n).all(|k| self.dim(k) == other.dim(k))
    }

    /// First degree where the dimensions differ.
    pub fn first_dim_difference(&self, other: &Self) -> Option<usize> {
        let n = self.dims.len().max(other.dims.len());
        (0..n).find(|&k| self.dim(k) != other.dim(k))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dims.len().max(other.dims.len());
        Self::new(&self.field, (0..n).map(|k| self.dim(k) + other.dim(k)).collect())
    }

    /// Same space with a new truncation degree (dropping or zero-padding).
    pub fn with_max_degree(&self, n: usize) -> Self {
        Self::new(&self.field, (0..=n).map(|k| self.dim(k)).collect())
    }

    /// Shift degrees up by `s` (`s` may be negative; degrees below 0 are dropped).
    pub fn shifted(&self, s: i64) -> Self {
        let top = self.max_degree() as i64 + s;
        let top = top.max(0) as usize;
        Self::new(&self.field, (0..=top).map(|k| self.dim_i(k as i64 - s)).collect())
    }
}

/// A degreewise linear map of fixed degree `shift`.
#[derive(Clone, Debug)]
pub struct GradedLinearMap<F: Field> {
    source: GradedVectorSpace<F>,
    target: GradedVectorSpace<F>,
    shift: i64,
    blocks: BTreeMap<usize, Matrix<F>>,
}

/// Equality of the underlying linear maps: a stored zero block equals an absent one.
impl<F: Field> PartialEq for GradedLinearMap<F> {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift
            && self.source.same_dims(&other.source)
            && self.target.same_dims(&other.target)
            && self.source.field() == other.source.field()
            && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

/// Result of a kernel computation: the subspace and its inclusion.
#[derive(Clone, Debug)]
pub struct Kernel<F: Field> {
    pub space: GradedVectorSpace<F>,
    pub inclusion: GradedLinearMap<F>,
}

/// Result of a cokernel computation: the quotient, the projection and a
/// linear section of the projection.
#[derive(Clone, Debug)]
pub struct Cokernel<F: Field> {
    pub space: GradedVectorSpace<F>,
    pub projection: GradedLinearMap<F>,
    pub section: GradedLinearMap<F>,
}

fn check_field<F: Field>(a: &F, b: &F) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch(a.spec(), b.spec()));
    }
    Ok(())
}

fn check_same<F: Field>(a: &GradedVectorSpace<F>, b: &GradedVectorSpace<F>, what: &str) -> Result<()> {
    check_field(a.field(), b.field())?;
    if let Some(k) = a.first_dim_difference(b) {
        return Err(Error::DimensionMismatch {
            degree: k,
            detail: format!("{what}: {} vs {}", a.dim(k), b.dim(k)),
        });
    }
    Ok(())
}

impl<F: Field> GradedLinearMap<F> {
    /// Build a map from explicit blocks, checking every shape.
    pub fn new(
        source: GradedVectorSpace<F>,
        target: GradedVectorSpace<F>,
        shift: i64,
        blocks: BTreeMap<usize, Matrix<F>>,
    ) -> Result<Self> {
        check_field(source.field(), target.field())?;
        let mut kept = BTreeMap::new();
        for (k, m) in blocks {
            check_field(m.field(), source.field())?;
            let want = (target.dim_i(k as i64 + shift), source.dim(k));
            if m.shape() != want {
                return Err(Error::DimensionMismatch {
                    degree: k,
                    detail: format!("block has shape {:?}, expected {:?}", m.shape(), want),
                });
            }
            if want.0 > 0 && want.1 > 0 {
                kept.insert(k, m);
            }
        }
        Ok(GradedLinearMap {
            source,
            target,
            shift,
            blocks: kept,
        })
    }

    pub fn zero(source: &GradedVectorSpace<F>, target: &GradedVectorSpace<F>, shift: i64) -> Self {
        GradedLinearMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &GradedVectorSpace<F>) -> Self {
        let f = space.field();
        let blocks = (0..=space.max_degree())
            .filter(|&k| space.dim(k) > 0)
            .map(|k| (k, Matrix::identity(f, space.dim(k))))
            .collect();
        GradedLinearMap {
            source: space.clone(),
            target: space.clone(),
            shift: 0,
            blocks,
        }
    }

    /// Build a map from sparse column images: `image(k, j)` lists the
    /// `(target index, coefficient)` pairs of the image of basis vector `j`
    /// in source degree `k`. Repeated indices accumulate.
    pub fn from_columns(
        source: &GradedVectorSpace<F>,
        target: &GradedVectorSpace<F>,
        shift: i64,
        mut image: impl FnMut(usize, usize) -> Vec<(usize, F::Elem)>,
    ) -> Self {
        let f = source.field();
        let mut blocks = BTreeMap::new();
        for k in 0..=source.max_degree() {
            let rows = target.dim_i(k as i64 + shift);
            let cols = source.dim(k);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zeros(f, rows, cols);
            for j in 0..cols {
                for (i, c) in image(k, j) {
                    m.add_at(i, j, &c);
                }
            }
            blocks.insert(k, m);
        }
        GradedLinearMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            blocks,
        }
    }

    pub fn field(&self) -> &F {
        self.source.field()
    }
    pub fn source(&self) -> &GradedVectorSpace<F> {
        &self.source
    }
    pub fn target(&self) -> &GradedVectorSpace<F> {
        &self.target
    }
    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Target degree of source degree `k`, if it is nonnegative.
    pub fn target_degree(&self, k: usize) -> Option<usize> {
        let t = k as i64 + self.shift;
        (t >= 0).then_some(t as usize)
    }

    /// The matrix in source degree `k` (a zero matrix of the right shape if absent).
    pub fn block(&self, k: usize) -> Cow<'_, Matrix<F>> {
        match self.blocks.get(&k) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(Matrix::zeros(
                self.field(),
                self.target.dim_i(k as i64 + self.shift),
                self.source.dim(k),
            )),
        }
    }

    pub fn blocks(&self) -> &BTreeMap<usize, Matrix<F>> {
        &self.blocks
    }

    /// Replace source and target by spaces of equal dimensions (for example
    /// to change truncation degrees); blocks outside the new range are dropped.
    pub fn reframe(&self, source: &GradedVectorSpace<F>, target: &GradedVectorSpace<F>) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .filter(|(&k, _)| k <= source.max_degree())
            .filter(|(&k, _)| {
                let t = k as i64 + self.shift;
                t >= 0 && t as usize <= target.max_degree()
            })
            .map(|(&k, m)| (k, m.clone()))
            .collect();
        Self::new(source.clone(), target.clone(), self.shift, blocks)
    }

    /// `g.compose(f)` is `g ∘ f`.
    pub fn compose(&self, f: &Self) -> Result<Self> {
        check_same(&f.target, &self.source, "composition")?;
        let shift = self.shift + f.shift;
        let mut blocks = BTreeMap::new();
        for (&k, fm) in &f.blocks {
            let Some(mid) = f.target_degree(k) else { continue };
            if let Some(gm) = self.blocks.get(&mid) {
                let m = gm.mul(fm);
                if !m.is_zero() {
                    blocks.insert(k, m);
                }
            }
        }
        Ok(GradedLinearMap {
            source: f.source.clone(),
            target: self.target.clone(),
            shift,
            blocks,
        })
    }

    fn check_parallel(&self, other: &Self) -> Result<()> {
        check_same(&self.source, &other.source, "sources")?;
        check_same(&self.target, &other.target, "targets")?;
        if self.shift != other.shift {
            return Err(Error::Shape(format!(
                "shifts differ: {} vs {}",
                self.shift, other.shift
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, op: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>) -> Result<Self> {
        self.check_parallel(other)?;
        let keys: std::collections::BTreeSet<usize> =
            self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        let blocks = keys
            .into_iter()
            .map(|k| (k, op(&self.block(k), &other.block(k))))
            .collect();
        Ok(GradedLinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            shift: self.shift,
            blocks,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field().neg(&self.field().one()))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        GradedLinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            shift: self.shift,
            blocks: self.blocks.iter().map(|(&k, m)| (k, m.scale(c))).collect(),
        }
    }

    /// First nonzero entry as `(source degree, (row, col))`.
    pub fn first_nonzero(&self) -> Option<(usize, (usize, usize))> {
        self.blocks
            .iter()
            .find_map(|(&k, m)| m.first_nonzero().map(|e| (k, e)))
    }

    /// First nonzero entry in source degrees `<= upto`.
    pub fn first_nonzero_upto(&self, upto: usize) -> Option<(usize, (usize, usize))> {
        self.blocks
            .range(..=upto)
            .find_map(|(&k, m)| m.first_nonzero().map(|e| (k, e)))
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    /// First entry where two parallel maps differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(usize, (usize, usize))>> {
        Ok(self.sub(other)?.first_nonzero())
    }

    /// `Ok` when the two maps are equal, else the first differing entry.
    pub fn agree(&self, other: &Self, check: &str) -> Verdict {
        match self.sub(other) {
            Err(e) => Err(Violation::new(check, 0, e.to_string())),
            Ok(diff) => diff.vanishes(check),
        }
    }

    /// `Ok` when the map is zero, else its first nonzero entry.
    pub fn vanishes(&self, check: &str) -> Verdict {
        match self.first_nonzero() {
            None => Ok(()),
            Some((k, (r, c))) => Err(Violation::new(check, k, "maps differ").at_entry(r, c)),
        }
    }

    /// Columns of the image of basis vector `j` in degree `k`.
    pub fn column(&self, k: usize, j: usize) -> Vec<F::Elem> {
        match self.blocks.get(&k) {
            Some(m) => m.column(j),
            None => vec![self.field().zero(); self.target.dim_i(k as i64 + self.shift)],
        }
    }

    pub fn rank(&self, k: usize) -> usize {
        self.blocks.get(&k).map_or(0, |m| m.rank())
    }

    /// Degreewise kernel with its inclusion.
    pub fn kernel(&self) -> Kernel<F> {
        let f = self.field();
        let mut dims = Vec::new();
        let mut blocks = BTreeMap::new();
        for k in 0..=self.source.max_degree() {
            let basis = self.block(k).kernel_basis();
            dims.push(basis.cols());
            if basis.cols() > 0 {
                blocks.insert(k, basis);
            }
        }
        let space = GradedVectorSpace::new(f, dims);
        let inclusion = GradedLinearMap {
            source: space.clone(),
            target: self.source.clone(),
            shift: 0,
            blocks,
        };
        Kernel { space, inclusion }
    }

    /// Degreewise cokernel with projection and section.
    pub fn cokernel(&self) -> Cokernel<F> {
        let f = self.field();
        let mut dims = Vec::new();
        let mut proj = BTreeMap::new();
        let mut sect = BTreeMap::new();
        for t in 0..=self.target.max_degree() {
            let src = t as i64 - self.shift;
            let m = if src >= 0 && (src as usize) <= self.source.max_degree() {
                self.block(src as usize).into_owned()
            } else {
                Matrix::zeros(f, self.target.dim(t), 0)
            };
            let (p, s) = m.cokernel();
            dims.push(p.rows());
            if p.rows() > 0 && p.cols() > 0 {
                proj.insert(t, p);
                sect.insert(t, s);
            }
        }
        let space = GradedVectorSpace::new(f, dims);
        Cokernel {
            projection: GradedLinearMap {
                source: self.target.clone(),
                target: space.clone(),
                shift: 0,
                blocks: proj,
            },
            section: GradedLinearMap {
                source: space.clone(),
                target: self.target.clone(),
                shift: 0,
                blocks: sect,
            },
            space,
        }
    }

    pub fn equalizer(&self, other: &Self) -> Result<Kernel<F>> {
        Ok(self.sub(other)?.kernel())
    }

    pub fn coequalizer(&self, other: &Self) -> Result<Cokernel<F>> {
        Ok(self.sub(other)?.cokernel())
    }

    /// Lift `self` through an injective map: returns `g` with `incl ∘ g = self`.
    pub fn factor_through(&self, incl: &Self) -> Result<Self> {
        check_same(&incl.target, &self.target, "factorization target")?;
        let shift = self.shift - incl.shift;
        let mut blocks = BTreeMap::new();
        for (&k, m) in &self.blocks {
            let t = k as i64 + self.shift;
            let ks = t - incl.shift;
            if ks < 0 {
                return Err(Error::Precondition(format!(
                    "map does not factor in degree {k}"
                )));
            }
            let i = incl.block(ks as usize);
            let g = i.solve(m).ok_or_else(|| {
                Error::Precondition(format!("map does not factor through the inclusion in degree {k}"))
            })?;
            blocks.insert(k, g);
        }
        Self::new(self.source.clone(), incl.source.clone(), shift, blocks)
    }

    /// Left inverse of an injective degree-0 map, as a map back onto its source.
    pub fn left_inverse(&self) -> Result<Self> {
        if self.shift != 0 {
            return Err(Error::Shape("left inverse needs a degree-0 map".into()));
        }
        let mut blocks = BTreeMap::new();
        for k in 0..=self.source.max_degree() {
            if self.source.dim(k) == 0 {
                continue;
            }
            let l = self
                .block(k)
                .left_inverse()
                .ok_or_else(|| Error::NotInvertible(format!("map is not injective in degree {k}")))?;
            blocks.insert(k, l);
        }
        Self::new(self.target.clone(), self.source.clone(), 0, blocks)
    }

    /// Two-sided inverse of a degree-0 isomorphism.
    pub fn inverse(&self) -> Result<Self> {
        if let Some(k) = self.source.first_dim_difference(&self.target) {
            return Err(Error::NotInvertible(format!("dimensions differ in degree {k}")));
        }
        self.left_inverse()
    }

    /// Block-diagonal sum `self ⊕ other : A ⊕ B -> A' ⊕ B'`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.shift != other.shift {
            return Err(Error::Shape("direct sum of maps with different shifts".into()));
        }
        let (i1, i2) = injections(&self.target, &other.target);
        let (p1, p2) = projections(&self.source, &other.source);
        let a = i1.compose(self)?.compose(&p1)?;
        let b = i2.compose(other)?.compose(&p2)?;
        a.add(&b)
    }

    /// `(f, g) : X -> A ⊕ B`.
    pub fn pair(&self, other: &Self) -> Result<Self> {
        check_same(&self.source, &other.source, "pairing")?;
        let (i1, i2) = injections(&self.target, &other.target);
        i1.compose(self)?.add(&i2.compose(other)?)
    }

    /// `[f, g] : A ⊕ B -> Y`.
    pub fn copair(&self, other: &Self) -> Result<Self> {
        check_same(&self.target, &other.target, "copairing")?;
        let (p1, p2) = projections(&self.source, &other.source);
        self.compose(&p1)?.add(&other.compose(&p2)?)
    }
}

/// Injections `A -> A ⊕ B` and `B -> A ⊕ B` (A's basis first in each degree).
pub fn injections<F: Field>(
    a: &GradedVectorSpace<F>,
    b: &GradedVectorSpace<F>,
) -> (GradedLinearMap<F>, GradedLinearMap<F>) {
    let s = a.direct_sum(b);
    let f = a.field();
    let i1 = GradedLinearMap::from_columns(a, &s, 0, |_, j| vec![(j, f.one())]);
    let i2 = GradedLinearMap::from_columns(b, &s, 0, |k, j| vec![(a.dim(k) + j, f.one())]);
    (i1, i2)
}

/// Projections `A ⊕ B -> A` and `A ⊕ B -> B`.
pub fn projections<F: Field>(
    a: &GradedVectorSpace<F>,
    b: &GradedVectorSpace<F>,
) -> (GradedLinearMap<F>, GradedLinearMap<F>) {
    let s = a.direct_sum(b);
    let f = a.field();
    let p1 = GradedLinearMap::from_columns(&s, a, 0, |k, j| {
        if j < a.dim(k) {
            vec![(j, f.one())]
        } else {
            vec![]
        }
    });
    let p2 = GradedLinearMap::from_columns(&s, b, 0, |k, j| {
        if j >= a.dim(k) {
            vec![(j - a.dim(k), f.one())]
        } else {
            vec![]
        }
    });
    (p1, p2)
}
