//! Path objects and Postnikov factorizations of comodule maps.
//!
//! Every tower stage is a pullback of a map of cofree comodules
//! `q ⊗ C : P ⊗ C -> X ⊗ C` along an attaching map `k♯ : M -> X ⊗ C`.

use crate::algstruct::Side;
use crate::chain::{ChainComplex, ChainMap};
use crate::comod::{pullback, Comodule, ComoduleMap};
use crate::error::{Error, Result, Violation};
use crate::linalg::{Field, GradedLinearMap, GradedVectorSpace, Matrix, TensorSpace};

/// Kernel basis of `d` (columns) and the retraction onto it that kills the
/// standard vectors at the pivot columns of `d`.
fn kernel_retraction<F: Field>(d: &Matrix<F>) -> (Matrix<F>, Matrix<F>) {
    let f = d.field();
    let pivots = d.rref().pivots;
    let free: Vec<usize> = (0..d.cols()).filter(|c| !pivots.contains(c)).collect();
    let basis = d.kernel_basis();
    let retraction = Matrix::from_fn(f, free.len(), d.cols(), |i, j| if free[i] == j { f.one() } else { f.zero() });
    (basis, retraction)
}

/// The based path object `P(X) = X ⊕ s⁻¹(X_{≥2} ⊕ (ker d)_1)` with
/// `D x = dx − s⁻¹x`, `D s⁻¹x = −s⁻¹dx`, and the projection `q : P -> X`.
///
/// In degree 1, `s⁻¹x` means `s⁻¹` of the component of `x` in `ker d`,
/// taken along the complement spanned by the pivot columns of `d_1`.
#[derive(Clone, Debug)]
pub struct PathObject<F: Field> {
    pub input: ChainComplex<F>,
    pub complex: ChainComplex<F>,
    pub q: ChainMap<F>,
}

pub fn path_object<F: Field>(x: &ChainComplex<F>) -> Result<PathObject<F>> {
    let f = x.field();
    let n = x.max_degree();
    let d1 = x.d().block(1).into_owned();
    let h0 = x.dim(0) - if n >= 1 { d1.rank() } else { 0 };
    if h0 != 0 {
        return Err(Error::Precondition(format!("H_0 of the input is {h0}-dimensional, not zero")));
    }
    let (ker1, retract) = if n >= 1 {
        kernel_retraction(&d1)
    } else {
        (Matrix::zeros(f, 0, 0), Matrix::zeros(f, 0, 0))
    };
    let s_dim = |k: usize| match k {
        0 => ker1.cols(),
        _ if k < n => x.dim(k + 1),
        _ => 0,
    };
    let dims: Vec<usize> = (0..=n).map(|k| x.dim(k) + s_dim(k)).collect();
    let space = GradedVectorSpace::new(f, dims);
    let xd = |k: usize| x.dim(k);
    let dblocks: Vec<Matrix<F>> = (0..=n).map(|k| x.d().block(k).into_owned()).collect();
    let d = GradedLinearMap::from_columns(&space, &space, -1, |k, j| {
        let mut out = Vec::new();
        if j < xd(k) {
            if k == 0 {
                return out;
            }
            for (i, v) in dblocks[k].column(j).into_iter().enumerate() {
                if !f.is_zero(&v) {
                    out.push((i, v));
                }
            }
            let off = xd(k - 1);
            if k == 1 {
                for i in 0..retract.rows() {
                    let v = retract.get(i, j);
                    if !f.is_zero(v) {
                        out.push((off + i, f.neg(v)));
                    }
                }
            } else {
                out.push((off + j, f.neg(&f.one())));
            }
        } else {
            let j = j - xd(k);
            if k == 0 {
                return out;
            }
            let dx = dblocks[k + 1].column(j);
            let off = xd(k - 1);
            if k == 1 {
                for (i, v) in retract.apply(&dx).into_iter().enumerate() {
                    if !f.is_zero(&v) {
                        out.push((off + i, f.neg(&v)));
                    }
                }
            } else {
                for (i, v) in dx.into_iter().enumerate() {
                    if !f.is_zero(&v) {
                        out.push((off + i, f.neg(&v)));
                    }
                }
            }
        }
        out
    });
    let complex = ChainComplex::new(space.clone(), d)?;
    complex.validate().map_err(|v| Error::Invalid(v.within("path object")))?;
    let q = GradedLinearMap::from_columns(&space, x.space(), 0, |k, j| {
        if j < xd(k) {
            vec![(j, f.one())]
        } else {
            vec![]
        }
    });
    let q = ChainMap::new(complex.clone(), x.clone(), q)?;
    q.validate().map_err(|v| Error::Invalid(v.within("q")))?;
    if let Some(top) = complex.reliable_up_to() {
        let h = complex.homology(top)?;
        if let Some(k) = h.dims.iter().position(|&b| b != 0) {
            return Err(Error::Invalid(Violation::new("path object is acyclic", k, format!("H_{k} = {}", h.dims[k]))));
        }
    }
    Ok(PathObject {
        input: x.clone(),
        complex,
        q,
    })
}

/// The comodule map `k♯ = (k ⊗ C) ∘ ρ : M -> X ⊗ C` adjoint to a chain map `k : M -> X`.
pub fn adjoint_map<F: Field>(m: &Comodule<F>, k: &GradedLinearMap<F>, x: &ChainComplex<F>) -> Result<ComoduleMap<F>> {
    if m.side() != Side::Right {
        return Err(Error::Precondition("Postnikov towers use right comodules".into()));
    }
    let target = Comodule::cofree(x, m.coalgebra())?;
    let xc = TensorSpace::new(m.field(), vec![x.space().clone(), m.coalgebra().space().clone()], x.max_degree());
    let lifted = m.coaction_space().apply(0, 1, k, std::slice::from_ref(x.space()), &xc)?;
    let sharp = ComoduleMap::new(m.clone(), target, lifted.compose(m.coaction())?)?;
    sharp.validate().map_err(|v| Error::Invalid(v.within("k♯")))?;
    Ok(sharp)
}

/// `q ⊗ C : P ⊗ C -> X ⊗ C` for a chain map `q`.
pub fn cofree_map<F: Field>(q: &ChainMap<F>, c: &crate::algstruct::ChainCoalgebra<F>) -> Result<ComoduleMap<F>> {
    let src = Comodule::cofree(q.source(), c)?;
    let tgt = Comodule::cofree(q.target(), c)?;
    let f = c.field();
    let n = src.max_degree().max(tgt.max_degree());
    let a = TensorSpace::new(f, vec![q.source().space().clone(), c.space().clone()], n);
    let b = TensorSpace::new(f, vec![q.target().space().clone(), c.space().clone()], n);
    let id = GradedLinearMap::identity(c.space());
    let m = TensorSpace::tensor_maps(&[q.map(), &id], &a, &b)?;
    let m = m.reframe(a.space(), b.space())?.reframe(src.space(), tgt.space())?;
    ComoduleMap::new(src, tgt, m)
}

/// One pullback square of a tower.
#[derive(Clone, Debug)]
pub struct TowerStage<F: Field> {
    /// `q ⊗ C : P ⊗ C -> X ⊗ C`.
    pub cofree_map: ComoduleMap<F>,
    /// `k♯ : M -> X ⊗ C`.
    pub attaching: ComoduleMap<F>,
    /// The pullback `M'`.
    pub object: Comodule<F>,
    /// `M' -> M`.
    pub projection: ComoduleMap<F>,
    /// `M' -> P ⊗ C`.
    pub top: ComoduleMap<F>,
}

impl<F: Field> TowerStage<F> {
    pub fn new(attaching: ComoduleMap<F>, cofree_map: ComoduleMap<F>) -> Result<Self> {
        let (object, projection, top) = pullback(&attaching, &cofree_map)?;
        Ok(TowerStage {
            cofree_map,
            attaching,
            object,
            projection,
            top,
        })
    }

    fn legs(&self) -> Result<GradedLinearMap<F>> {
        self.projection.map().pair(self.top.map())
    }

    /// The unique map `T -> M'` induced by a commuting cone `(a, b)`.
    pub fn induced(&self, a: &ComoduleMap<F>, b: &ComoduleMap<F>) -> Result<ComoduleMap<F>> {
        let lhs = self.attaching.map().compose(a.map())?;
        let rhs = self.cofree_map.map().compose(b.map())?;
        lhs.agree(&rhs, "cone commutes").map_err(Error::Invalid)?;
        let legs = self.legs()?;
        let cone = a.map().pair(b.map())?.reframe(a.source().space(), legs.target())?;
        let g = cone.factor_through(&legs)?;
        let g = ComoduleMap::new(a.source().clone(), self.object.clone(), g)?;
        g.validate().map_err(|v| Error::Invalid(v.within("induced map")))?;
        Ok(g)
    }

    /// The legs `M' -> M ⊕ P⊗C` are jointly injective, so induced maps are unique.
    pub fn legs_injective(&self) -> bool {
        self.legs().map(|l| l.left_inverse().is_ok()).unwrap_or(false)
    }
}

/// `f = p ∘ i` with `i` injective and `p` a composite of tower stages.
#[derive(Clone, Debug)]
pub struct PostnikovFactorization<F: Field> {
    pub f: ComoduleMap<F>,
    pub i: ComoduleMap<F>,
    pub p: ComoduleMap<F>,
    pub tower: Vec<TowerStage<F>>,
    /// `i` is an `equivalence_level`-equivalence.
    pub equivalence_level: usize,
}

impl<F: Field> PostnikovFactorization<F> {
    pub fn intermediate(&self) -> &Comodule<F> {
        self.i.target()
    }

    /// `p ∘ i = f`, `i` injective, `i` an n-equivalence.
    pub fn check(&self) -> Result<()> {
        let pi = self.p.map().compose(self.i.map())?;
        pi.agree(self.f.map(), "p∘i = f").map_err(Error::Invalid)?;
        if self.i.map().left_inverse().is_err() {
            return Err(Error::Invalid(Violation::new("i is degreewise injective", 0, "rank deficit")));
        }
        self.i.validate().map_err(|v| Error::Invalid(v.within("i")))?;
        self.p.validate().map_err(|v| Error::Invalid(v.within("p")))?;
        self.i
            .chain_map()
            .n_equivalence_check(self.equivalence_level)?
            .map_err(|v| Error::Invalid(v.within("i")))
    }
}

fn zero_complex<F: Field>(f: &F, n: usize) -> ChainComplex<F> {
    ChainComplex::zero(f, n)
}

fn zero_map_into<F: Field>(src: &Comodule<F>, tgt: &Comodule<F>) -> Result<ComoduleMap<F>> {
    ComoduleMap::new(src.clone(), tgt.clone(), GradedLinearMap::zero(src.space(), tgt.space(), 0))
}

fn require_simply_connected<F: Field>(f: &ComoduleMap<F>) -> Result<()> {
    let c = f.source().coalgebra();
    if !c.one_connected() {
        return Err(Error::NotOneConnected);
    }
    if f.source().side() != Side::Right {
        return Err(Error::Precondition("Postnikov towers use right comodules".into()));
    }
    f.validate().map_err(|v| Error::Invalid(v.within("f")))
}

/// Factor `f : M -> N` as `M -> M' -> N` with `i` an injective 0-equivalence.
pub fn base_step<F: Field>(f: &ComoduleMap<F>) -> Result<PostnikovFactorization<F>> {
    require_simply_connected(f)?;
    let m = f.source();
    let n = f.target();
    let c = m.coalgebra();
    let field = m.field();
    let top = m.max_degree().max(n.max_degree());
    let m = &m.with_max_degree(top)?;
    let n = &n.with_max_degree(top)?;
    let f = ComoduleMap::new(m.clone(), n.clone(), f.map().clone())?;

    // Stage 1: N' = N × (M ⊗ C), the pullback of M ⊗ C -> 0 along N -> 0.
    let zero = Comodule::cofree(&zero_complex(field, top), c)?;
    let mc = Comodule::cofree(m.complex(), c)?;
    let stage1 = TowerStage::new(zero_map_into(n, &zero)?, zero_map_into(&mc, &zero)?)?;
    let rho = ComoduleMap::new(m.clone(), mc.clone(), m.coaction().clone())?;
    let i1 = stage1.induced(&f, &rho)?;
    let n1 = stage1.object.clone();

    // Stage 2: kill H_0 of the cokernel.
    let (k_cx, proj, _) = i1.chain_map().cokernel()?;
    let (pi0, _) = k_cx.d().block(1).cokernel();
    let h0 = pi0.rows();
    let h_cx = ChainComplex::trivial(GradedVectorSpace::new(field, {
        let mut d = vec![0; top + 1];
        d[0] = h0;
        d
    }));
    let proj0 = proj.map().block(0);
    let kmap = GradedLinearMap::new(n1.space().clone(), h_cx.space().clone(), 0, [(0, pi0.mul(&proj0))].into())?;
    ChainMap::new(n1.complex().clone(), h_cx.clone(), kmap.clone())?
        .validate()
        .map_err(|v| Error::Invalid(v.within("k")))?;
    let sharp = adjoint_map(&n1, &kmap, &h_cx)?;
    let empty = ChainMap::zero(&zero_complex(field, top), &h_cx);
    let stage2 = TowerStage::new(sharp, cofree_map(&empty, c)?)?;
    let zero_top = zero_map_into(m, stage2.cofree_map.source())?;
    let i = stage2.induced(&i1, &zero_top)?;
    let p = stage1.projection.compose(&stage2.projection)?;
    let fact = PostnikovFactorization {
        f,
        i,
        p,
        tower: vec![stage1, stage2],
        equivalence_level: 0,
    };
    fact.check()?;
    Ok(fact)
}

/// Improve an injective `n`-equivalence `f : M -> N` to an injective
/// `(n+1)`-equivalence `i : M -> M'` with `p : M' -> N` a single tower stage.
pub fn inductive_step<F: Field>(f: &ComoduleMap<F>, n: usize) -> Result<PostnikovFactorization<F>> {
    require_simply_connected(f)?;
    if f.map().left_inverse().is_err() {
        return Err(Error::Precondition("f is not degreewise injective".into()));
    }
    let chain = f.chain_map();
    chain
        .n_equivalence_check(n)?
        .map_err(|v| Error::Precondition(format!("f is not a {n}-equivalence: {v}")))?;
    if chain.reliable_up_to().is_none_or(|t| n + 1 > t) {
        return Err(crate::error::range_error(n + 1, chain.reliable_up_to()));
    }
    let field = f.source().field();
    let target = f.target();
    let c = target.coalgebra();
    let top = target.max_degree();

    let (k_cx, proj, _) = chain.cokernel()?;
    let (_, sigma) = kernel_retraction(&k_cx.d().block(n + 1));
    let boundaries = sigma.mul(&k_cx.d().block(n + 2));
    let (to_h, _) = boundaries.cokernel();
    let h = to_h.rows();
    if h == 0 {
        let p = ComoduleMap::identity(target);
        let fact = PostnikovFactorization {
            f: f.clone(),
            i: f.clone(),
            p,
            tower: vec![],
            equivalence_level: n + 1,
        };
        fact.check()?;
        return Ok(fact);
    }
    let mut dims = vec![0; top + 1];
    dims[n + 1] = h;
    let h_cx = ChainComplex::trivial(GradedVectorSpace::new(field, dims));
    let kblock = to_h.mul(&sigma).mul(&proj.map().block(n + 1));
    let kmap = GradedLinearMap::new(target.space().clone(), h_cx.space().clone(), 0, [(n + 1, kblock)].into())?;
    ChainMap::new(target.complex().clone(), h_cx.clone(), kmap.clone())?
        .validate()
        .map_err(|v| Error::Invalid(v.within("k")))?;
    let sharp = adjoint_map(target, &kmap, &h_cx)?;
    let path = path_object(&h_cx)?;
    let stage = TowerStage::new(sharp, cofree_map(&path.q, c)?)?;
    if stage.object.space().dim(n + 1) != target.space().dim(n + 1) {
        return Err(Error::Invalid(Violation::new(
            "M'_{n+1} = N_{n+1}",
            n + 1,
            format!("{} vs {}", stage.object.space().dim(n + 1), target.space().dim(n + 1)),
        )));
    }
    let zero_top = zero_map_into(f.source(), stage.cofree_map.source())?;
    let i = stage.induced(f, &zero_top)?;
    let fact = PostnikovFactorization {
        f: f.clone(),
        i,
        p: stage.projection.clone(),
        tower: vec![stage],
        equivalence_level: n + 1,
    };
    fact.check()?;
    Ok(fact)
}

/// Base step followed by inductive steps up to an `n_target`-equivalence.
pub fn postnikov_factorize<F: Field>(f: &ComoduleMap<F>, n_target: usize) -> Result<PostnikovFactorization<F>> {
    let n = f.source().max_degree().max(f.target().max_degree());
    if n < 2 || n_target > n - 2 {
        return Err(crate::error::range_error(n_target + 1, n.checked_sub(1)));
    }
    let mut fact = base_step(f)?;
    for level in 0..n_target {
        let step = inductive_step(&fact.i, level)?;
        fact.p = fact.p.compose(&step.p)?;
        fact.i = step.i;
        fact.tower.extend(step.tower);
        fact.equivalence_level = level + 1;
    }
    fact.f = ComoduleMap::new(fact.i.source().clone(), fact.p.target().clone(), f.map().clone())?;
    fact.check()?;
    Ok(fact)
}

/// The map `M -> 0` into the zero comodule of the same truncation.
pub fn to_zero<F: Field>(m: &Comodule<F>) -> Result<ComoduleMap<F>> {
    let zero = Comodule::cofree(&zero_complex(m.field(), m.max_degree()), m.coalgebra())?;
    zero_map_into(m, &zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::{PrimeField, Rationals};

    fn concentrated<F: Field>(f: &F, k: usize, dim: usize, n: usize) -> ChainComplex<F> {
        let mut dims = vec![0; n + 1];
        dims[k] = dim;
        ChainComplex::trivial(GradedVectorSpace::new(f, dims))
    }

    #[test]
    fn path_object_of_a_sphere() {
        let q = Rationals;
        let x = concentrated(&q, 2, 1, 3);
        let p = path_object(&x).unwrap();
        assert_eq!(p.complex.space().dims(), &[0, 1, 1, 0]);
        assert_eq!(p.complex.d().block(2).into_owned(), Matrix::from_i64(&q, &[&[-1]]));
    }

    #[test]
    fn path_object_of_a_disk() {
        let q = Rationals;
        let mut x = crate::chain::disk(&q, 1).unwrap();
        x = x.with_max_degree(2);
        let p = path_object(&x).unwrap();
        assert_eq!(&p.complex.space().dims()[..2], &[1, 1]);
        let zero = ChainComplex::zero(&q, 3);
        assert_eq!(path_object(&zero).unwrap().complex.space().total_dim(), 0);
    }

    #[test]
    fn path_object_rejects_nonzero_h0() {
        let q = Rationals;
        assert!(path_object(&concentrated(&q, 0, 1, 3)).is_err());
    }

    #[test]
    fn path_object_of_degree_one_cycles() {
        let q = Rationals;
        let x = concentrated(&q, 1, 2, 4);
        let p = path_object(&x).unwrap();
        assert_eq!(p.complex.space().dims(), &[2, 2, 0, 0, 0]);
    }

    #[test]
    fn base_step_over_exterior() {
        let f2 = PrimeField::new(2).unwrap();
        let h = corpus::exterior_bimonoid(&f2, 2, 6);
        let c = h.coalgebra();
        let k = Comodule::trivial(c, Side::Right).unwrap();
        let fact = base_step(&to_zero(&k).unwrap()).unwrap();
        assert_eq!(fact.tower.len(), 2);
        assert!(fact.tower.iter().all(TowerStage::legs_injective));
        let m = Comodule::regular(c, Side::Right);
        let id = ComoduleMap::identity(&m);
        assert!(base_step(&id).is_ok());
    }

    #[test]
    fn inductive_step_adds_a_path_stage() {
        let f2 = PrimeField::new(2).unwrap();
        let h = corpus::exterior_bimonoid(&f2, 2, 6);
        let c = h.coalgebra();
        let k = Comodule::trivial(c, Side::Right).unwrap();
        let m = Comodule::regular(c, Side::Right);
        let eta = c.coaug().unwrap().reframe(k.space(), m.space()).unwrap();
        let f = ComoduleMap::new(k, m, eta).unwrap();
        assert!(f.validate().is_ok());
        let step = inductive_step(&f, 0).unwrap();
        assert!(step.tower.is_empty());
        assert_eq!(step.equivalence_level, 1);
        let step = inductive_step(&f, 1).unwrap();
        assert_eq!(step.tower.len(), 1);
        assert_eq!(step.equivalence_level, 2);
        let added = step.intermediate().space().total_dim() - step.f.target().space().total_dim();
        assert!(added > 0);
        assert!(step.check().is_ok());
    }

    #[test]
    fn factorizations_of_maps_to_zero() {
        let q = Rationals;
        let c = corpus::cp2_coalgebra(&q, 6);
        let m = Comodule::regular(&c, Side::Right);
        let fact = postnikov_factorize(&to_zero(&m).unwrap(), 3).unwrap();
        assert_eq!(fact.equivalence_level, 3);
        assert!(postnikov_factorize(&to_zero(&m).unwrap(), 5).is_err());
    }

    #[test]
    fn tower_stage_universal_property() {
        let f2 = PrimeField::new(2).unwrap();
        let h = corpus::exterior_bimonoid(&f2, 3, 6);
        let m = Comodule::regular(h.coalgebra(), Side::Right);
        let fact = base_step(&to_zero(&m).unwrap()).unwrap();
        let s = &fact.tower[1];
        let induced = s.induced(&s.projection, &s.top).unwrap();
        assert!(induced.map() == &GradedLinearMap::identity(s.object.space()));
    }
}
