//! Chain complexes, chain maps, homology and n-equivalences.
//!
//! Everything is truncated at `max_degree = N`. Homology in degree `N` would
//! need boundaries from degree `N + 1`, so it is reported only up to `N - 1`.
//! The generating complexes `disk(n)` and `sphere(n)` are built with one spare
//! degree so that their whole homology is in range.

use crate::error::{range_error, Error, Result, Verdict, Violation};
use crate::linalg::{Cokernel, Field, GradedLinearMap, GradedVectorSpace, Matrix, TensorSpace};

#[derive(Clone, Debug)]
pub struct ChainComplex<F: Field> {
    space: GradedVectorSpace<F>,
    d: GradedLinearMap<F>,
}

impl<F: Field> ChainComplex<F> {
    /// Pair a space with a degree `-1` endomorphism. Shapes are checked;
    /// `d ∘ d = 0` is left to [`ChainComplex::validate`].
    pub fn new(space: GradedVectorSpace<F>, d: GradedLinearMap<F>) -> Result<Self> {
        if d.shift() != -1 {
            return Err(Error::Shape(format!("differential has shift {}, expected -1", d.shift())));
        }
        for (what, s) in [("source", d.source()), ("target", d.target())] {
            if let Some(k) = s.first_dim_difference(&space) {
                return Err(Error::DimensionMismatch {
                    degree: k,
                    detail: format!("differential {what} does not match the space"),
                });
            }
        }
        let d = d.reframe(&space, &space)?;
        Ok(ChainComplex { space, d })
    }

    /// Zero differential.
    pub fn trivial(space: GradedVectorSpace<F>) -> Self {
        let d = GradedLinearMap::zero(&space, &space, -1);
        ChainComplex { space, d }
    }

    /// The ground field concentrated in degree 0.
    pub fn unit(field: &F) -> Self {
        Self::trivial(GradedVectorSpace::unit(field))
    }

    pub fn zero(field: &F, max_degree: usize) -> Self {
        Self::trivial(GradedVectorSpace::zero(field, max_degree))
    }

    pub fn field(&self) -> &F {
        self.space.field()
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        &self.space
    }
    pub fn d(&self) -> &GradedLinearMap<F> {
        &self.d
    }
    pub fn max_degree(&self) -> usize {
        self.space.max_degree()
    }
    pub fn dim(&self, k: usize) -> usize {
        self.space.dim(k)
    }

    /// Highest degree with reliable homology, `N - 1`.
    pub fn reliable_up_to(&self) -> Option<usize> {
        self.max_degree().checked_sub(1)
    }

    /// Change the truncation degree, padding with zeros or cutting off.
    pub fn with_max_degree(&self, n: usize) -> Self {
        let space = self.space.with_max_degree(n);
        let d = self.d.reframe(&space, &space).expect("same dims in range");
        ChainComplex { space, d }
    }

    /// `d ∘ d = 0`, reporting the first source degree where it fails.
    pub fn validate(&self) -> Verdict {
        let dd = self.d.compose(&self.d).expect("d is an endomorphism");
        match dd.first_nonzero() {
            None => Ok(()),
            Some((k, (r, c))) => Err(Violation::new("d∘d = 0", k, "nonzero composite").at_entry(r, c)),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let space = self.space.direct_sum(&other.space);
        let d = self.d.direct_sum(&other.d)?.reframe(&space, &space)?;
        Ok(ChainComplex { space, d })
    }

    /// Tensor product complex, truncated at `cap`.
    pub fn tensor(&self, other: &Self, cap: usize) -> Result<(TensorSpace<F>, Self)> {
        let ts = TensorSpace::new(self.field(), vec![self.space.clone(), other.space.clone()], cap);
        let d = ts.differential(&[&self.d, &other.d])?;
        Ok((ts.clone(), ChainComplex { space: ts.space().clone(), d }))
    }

    /// Tensor complex on a prepared flat tensor space of the given factors.
    pub fn on_tensor(ts: &TensorSpace<F>, factors: &[&Self]) -> Result<Self> {
        let ds: Vec<_> = factors.iter().map(|c| c.d()).collect();
        let d = ts.differential(&ds)?;
        Ok(ChainComplex { space: ts.space().clone(), d })
    }

    /// The subcomplex spanned by the image of an injective map whose image
    /// is `d`-stable; the restricted differential is solved for exactly.
    pub fn subcomplex(&self, inclusion: &GradedLinearMap<F>) -> Result<(Self, ChainMap<F>)> {
        let dk = self.d.compose(inclusion)?.factor_through(inclusion)?;
        let sub = ChainComplex::new(inclusion.source().clone(), dk)?;
        let map = ChainMap::new(sub.clone(), self.clone(), inclusion.clone())?;
        Ok((sub, map))
    }

    /// The quotient by a `d`-stable subspace given as a cokernel.
    pub fn quotient(&self, coker: &Cokernel<F>) -> Result<(Self, ChainMap<F>)> {
        let dq = coker.projection.compose(&self.d)?.compose(&coker.section)?;
        let q = ChainComplex::new(coker.space.clone(), dq)?;
        let leak = coker.projection.compose(&self.d)?.sub(&q.d.compose(&coker.projection)?)?;
        if let Some((k, _)) = leak.first_nonzero() {
            return Err(Error::Precondition(format!(
                "subspace is not closed under d in degree {k}"
            )));
        }
        let map = ChainMap::new(self.clone(), q.clone(), coker.projection.clone())?;
        Ok((q, map))
    }

    pub fn homology(&self, upto: usize) -> Result<HomologyReport<F>> {
        HomologyReport::compute(self, upto)
    }

    /// `Σ (-1)^k dim X_k` over degrees `<= upto`.
    pub fn euler_characteristic(&self, upto: usize) -> i64 {
        (0..=upto).map(|k| sign(k) * self.dim(k) as i64).sum()
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A degree-0 map between complexes.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    source: ChainComplex<F>,
    target: ChainComplex<F>,
    map: GradedLinearMap<F>,
}

impl<F: Field> ChainMap<F> {
    pub fn new(source: ChainComplex<F>, target: ChainComplex<F>, map: GradedLinearMap<F>) -> Result<Self> {
        if map.shift() != 0 {
            return Err(Error::Shape("chain maps have degree 0".into()));
        }
        let map = map.reframe(source.space(), target.space())?;
        Ok(ChainMap { source, target, map })
    }

    pub fn identity(x: &ChainComplex<F>) -> Self {
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            map: GradedLinearMap::identity(x.space()),
        }
    }

    pub fn zero(source: &ChainComplex<F>, target: &ChainComplex<F>) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            map: GradedLinearMap::zero(source.space(), target.space(), 0),
        }
    }

    pub fn source(&self) -> &ChainComplex<F> {
        &self.source
    }
    pub fn target(&self) -> &ChainComplex<F> {
        &self.target
    }
    pub fn map(&self) -> &GradedLinearMap<F> {
        &self.map
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &ChainMap<F>) -> Result<Self> {
        Ok(ChainMap {
            source: f.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&f.map)?,
        })
    }

    /// `d ∘ f = f ∘ d`, reporting the first failing source degree.
    pub fn validate(&self) -> Verdict {
        let a = self.target.d.compose(&self.map).expect("shapes checked");
        let b = self.map.compose(&self.source.d).expect("shapes checked");
        match a.sub(&b).expect("parallel maps").first_nonzero() {
            None => Ok(()),
            Some((k, (r, c))) => Err(Violation::new("d∘f = f∘d", k, "chain map condition").at_entry(r, c)),
        }
    }

    /// Highest degree where both sides have reliable homology.
    pub fn reliable_up_to(&self) -> Option<usize> {
        self.source.reliable_up_to().min(self.target.reliable_up_to())
    }

    /// The map `H_k(f)` in the representative bases of both sides.
    pub fn induced_map_on_homology(&self, k: usize) -> Result<Matrix<F>> {
        let hs = self.source.homology(k)?;
        let ht = self.target.homology(k)?;
        Ok(induced(&hs, &ht, &self.map, k))
    }

    /// Quasi-isomorphism in degrees `<= upto`.
    pub fn is_quasi_iso(&self, upto: usize) -> Result<Verdict> {
        Ok(self.quasi_iso_by_degree(upto)?.into_iter().collect())
    }

    /// One verdict per degree `0..=upto` on `H_k(f)` being an isomorphism.
    pub fn quasi_iso_by_degree(&self, upto: usize) -> Result<Vec<Verdict>> {
        let (hs, ht) = self.homologies(upto)?;
        Ok((0..=upto)
            .map(|k| {
                let r = induced(&hs, &ht, &self.map, k).rank();
                if hs.dims[k] != ht.dims[k] || r != hs.dims[k] {
                    Err(Violation::new(
                        "H_k(f) is an isomorphism",
                        k,
                        format!("dims {} -> {}, rank {r}", hs.dims[k], ht.dims[k]),
                    ))
                } else {
                    Ok(())
                }
            })
            .collect())
    }

    /// `H_* f` injective throughout the reliable range and bijective for `k <= n`.
    pub fn n_equivalence_check(&self, n: usize) -> Result<Verdict> {
        let top = self.reliable_up_to();
        if top.is_none_or(|t| n > t) {
            return Err(range_error(n, top));
        }
        let top = top.unwrap();
        let (hs, ht) = self.homologies(top)?;
        for k in 0..=top {
            let h = induced(&hs, &ht, &self.map, k);
            let r = h.rank();
            if r != hs.dims[k] {
                return Ok(Err(Violation::new(
                    "H_k(f) injective",
                    k,
                    format!("rank {r} on a {}-dimensional source", hs.dims[k]),
                )));
            }
            if k <= n && r != ht.dims[k] {
                return Ok(Err(Violation::new(
                    "H_k(f) surjective",
                    k,
                    format!("rank {r} onto a {}-dimensional target", ht.dims[k]),
                )));
            }
        }
        Ok(Ok(()))
    }

    fn homologies(&self, upto: usize) -> Result<(HomologyReport<F>, HomologyReport<F>)> {
        let top = self.reliable_up_to();
        if top.is_none_or(|t| upto > t) {
            return Err(range_error(upto, top));
        }
        Ok((self.source.homology(upto)?, self.target.homology(upto)?))
    }

    /// Degreewise kernel as a subcomplex of the source.
    pub fn kernel(&self) -> Result<(ChainComplex<F>, ChainMap<F>)> {
        self.source.subcomplex(&self.map.kernel().inclusion)
    }

    /// Degreewise cokernel as a quotient of the target.
    pub fn cokernel(&self) -> Result<(ChainComplex<F>, ChainMap<F>, GradedLinearMap<F>)> {
        let c = self.map.cokernel();
        let (q, p) = self.target.quotient(&c)?;
        Ok((q, p, c.section))
    }
}

fn induced<F: Field>(hs: &HomologyReport<F>, ht: &HomologyReport<F>, f: &GradedLinearMap<F>, k: usize) -> Matrix<F> {
    ht.coordinates[k].mul(&f.block(k)).mul(&hs.representatives[k])
}

/// Betti numbers with chosen cycle representatives.
#[derive(Clone, Debug)]
pub struct HomologyReport<F: Field> {
    pub dims: Vec<usize>,
    /// Per degree, a `dim X_k x dim H_k` matrix of cycle representatives.
    pub representatives: Vec<Matrix<F>>,
    /// Per degree, a `dim H_k x dim X_k` matrix sending a cycle to its class.
    pub coordinates: Vec<Matrix<F>>,
    pub reliable_up_to: Option<usize>,
}

impl<F: Field> HomologyReport<F> {
    pub fn compute(x: &ChainComplex<F>, upto: usize) -> Result<Self> {
        let rel = x.reliable_up_to();
        if rel.is_none_or(|r| upto > r) {
            return Err(range_error(upto, rel));
        }
        let f = x.field();
        let mut dims = Vec::new();
        let mut reps = Vec::new();
        let mut coords = Vec::new();
        for k in 0..=upto {
            let n = x.dim(k);
            let z = x.d.block(k).kernel_basis();
            let b = x.d.block(k + 1).image_basis();
            let stacked = Matrix::hstack(f, n, &[&b, &z]);
            let piv = stacked.rref().pivots;
            let chosen: Vec<usize> = piv.iter().copied().filter(|&c| c >= b.cols()).collect();
            let rep = stacked.select_cols(&chosen);
            let basis = Matrix::hstack(f, n, &[&b, &rep]);
            let h = rep.cols();
            assert_eq!(h + b.cols(), z.cols(), "boundaries lie in the cycles");
            let coord = match basis.left_inverse() {
                Some(l) => l.select_rows(&(b.cols()..b.cols() + h).collect::<Vec<_>>()),
                None => unreachable!("boundary basis completed by independent cycles"),
            };
            dims.push(h);
            reps.push(rep);
            coords.push(coord);
        }
        Ok(HomologyReport {
            dims,
            representatives: reps,
            coordinates: coords,
            reliable_up_to: rel,
        })
    }
}

/// `D^n`: generators `x` in degree `n - 1` and `y` in degree `n`, `dy = x`.
pub fn disk<F: Field>(field: &F, n: usize) -> Result<ChainComplex<F>> {
    if n == 0 {
        return Err(Error::Precondition("disk(0) is undefined".into()));
    }
    let mut dims = vec![0; n + 2];
    dims[n - 1] = 1;
    dims[n] = 1;
    let space = GradedVectorSpace::new(field, dims);
    let d = GradedLinearMap::from_columns(&space, &space, -1, |k, _| {
        if k == n {
            vec![(0, field.one())]
        } else {
            vec![]
        }
    });
    ChainComplex::new(space, d)
}

/// `S^n`: one generator in degree `n`.
pub fn sphere<F: Field>(field: &F, n: usize) -> ChainComplex<F> {
    let mut dims = vec![0; n + 2];
    dims[n] = 1;
    ChainComplex::trivial(GradedVectorSpace::new(field, dims))
}

/// The projection `D^n -> S^n`, identity in degree `n`.
pub fn disk_to_sphere<F: Field>(field: &F, n: usize) -> Result<ChainMap<F>> {
    let dn = disk(field, n)?;
    let sn = sphere(field, n);
    let m = GradedLinearMap::from_columns(dn.space(), sn.space(), 0, |k, _| {
        if k == n {
            vec![(0, field.one())]
        } else {
            vec![]
        }
    });
    ChainMap::new(dn, sn, m)
}
