//! Extensions of comodule algebras, Galois maps and the homotopic
//! Hopf-Galois check.

use crate::algstruct::{beta_eta, power, Bimonoid, ChainAlgebra, ChainCoalgebra, DgModule, Side};
use crate::chain::{ChainComplex, ChainMap};
use crate::cobar::CobarComplex;
use crate::comod::{Comodule, ComoduleAlgebra};
use crate::error::{Error, Result, Verdict, Violation};
use crate::linalg::{Field, GradedLinearMap, GradedVectorSpace, TensorSpace};
use crate::relative::{flatten, unflatten, Junction, RelativeTensor};

/// Printed with every Hopf-Galois report.
pub const CONDITION_NOTE: &str = "the Galois condition is checked as a quasi-isomorphism of β_φ, \
not as a Quillen equivalence of comodule categories; \
the descent condition is checked through its object-level consequence, i_φ being a quasi-isomorphism";

/// `x ↦ φ(x) ⊗ η(1)` as a map `X -> A ⊗ H` into `target = [A, H]`.
fn with_unit<F: Field>(phi: &GradedLinearMap<F>, eta: &GradedLinearMap<F>, target: &TensorSpace<F>) -> GradedLinearMap<F> {
    let f = phi.field();
    let e = eta.column(0, 0);
    GradedLinearMap::from_columns(phi.source(), target.space(), 0, |k, j| {
        let mut out = Vec::new();
        for (i, v) in phi.column(k, j).into_iter().enumerate() {
            if f.is_zero(&v) {
                continue;
            }
            for (h, w) in e.iter().enumerate() {
                if f.is_zero(w) {
                    continue;
                }
                if let Some((_, t)) = target.index_of(&[(k, i), (0, h)]) {
                    out.push((t, f.mul(&v, w)));
                }
            }
        }
        out
    })
}

/// `φ : B -> A` into an `H`-comodule algebra, with `ρ φ(b) = φ(b) ⊗ 1`.
#[derive(Clone, Debug)]
pub struct Extension<F: Field> {
    h: Bimonoid<F>,
    a: ComoduleAlgebra<F>,
    b: ChainAlgebra<F>,
    phi: ChainMap<F>,
}

impl<F: Field> Extension<F> {
    pub fn new(b: ChainAlgebra<F>, a: ComoduleAlgebra<F>, phi: GradedLinearMap<F>) -> Result<Self> {
        let h = a.bimonoid().clone();
        let phi = ChainMap::new(b.complex().clone(), a.algebra().complex().clone(), phi)?;
        let ext = Extension { h, a, b, phi };
        ext.validate().map_err(Error::Invalid)?;
        Ok(ext)
    }

    pub fn bimonoid(&self) -> &Bimonoid<F> {
        &self.h
    }
    pub fn coalgebra(&self) -> &ChainCoalgebra<F> {
        self.h.coalgebra()
    }
    pub fn algebra(&self) -> &ComoduleAlgebra<F> {
        &self.a
    }
    pub fn base(&self) -> &ChainAlgebra<F> {
        &self.b
    }
    pub fn phi(&self) -> &ChainMap<F> {
        &self.phi
    }
    pub fn field(&self) -> &F {
        self.b.field()
    }
    pub fn max_degree(&self) -> usize {
        self.a.max_degree()
    }

    pub fn validate(&self) -> Verdict {
        self.b.validate().map_err(|v| v.within("B"))?;
        self.a.validate().map_err(|v| v.within("A"))?;
        self.h.validate().map_err(|v| v.within("H"))?;
        self.phi.validate().map_err(|v| v.within("φ"))?;
        let (bs, as_) = (self.b.space(), self.a.space());
        let phi = self.phi.map();
        let bb = power(bs, 2);
        let aa = power(as_, 2);
        let pp = TensorSpace::tensor_maps(&[phi, phi], &bb, &aa).expect("φ⊗φ");
        let lhs = phi.compose(self.b.mul()).expect("shapes");
        let rhs = self.a.algebra().mul().compose(&pp).expect("shapes");
        lhs.agree(&rhs, "φ is multiplicative")?;
        let u = phi.compose(self.b.unit()).expect("shapes");
        u.agree(self.a.algebra().unit(), "φ is unital")?;
        let eta = self.h.algebra().unit();
        let ah = self.a.comodule().coaction_space();
        let lhs = self.a.coaction().compose(phi).expect("shapes");
        lhs.agree(&with_unit(phi, eta, &ah), "ρ∘φ = φ⊗η")
    }

    /// `A` as a right `B`-module through `φ`.
    pub fn right_module(&self) -> Result<DgModule<F>> {
        let a = self.a.space();
        let ab = TensorSpace::new(self.field(), vec![a.clone(), self.b.space().clone()], a.max_degree());
        let aa = power(a, 2);
        let id = GradedLinearMap::identity(a);
        let act = self.a.algebra().mul().compose(&TensorSpace::tensor_maps(&[&id, self.phi.map()], &ab, &aa)?)?;
        DgModule::new(Side::Right, self.b.clone(), self.a.algebra().complex().clone(), act)
    }

    /// `A` as a left `B`-module through `φ`.
    pub fn left_module(&self) -> Result<DgModule<F>> {
        let a = self.a.space();
        let ba = TensorSpace::new(self.field(), vec![self.b.space().clone(), a.clone()], a.max_degree());
        let aa = power(a, 2);
        let id = GradedLinearMap::identity(a);
        let act = self.a.algebra().mul().compose(&TensorSpace::tensor_maps(&[self.phi.map(), &id], &ba, &aa)?)?;
        DgModule::new(Side::Left, self.b.clone(), self.a.algebra().complex().clone(), act)
    }
}

fn same_algebra<F: Field>(a: &ChainAlgebra<F>, b: &ChainAlgebra<F>) -> bool {
    a.field() == b.field()
        && a.space().same_dims(b.space())
        && a.complex().d() == b.complex().d()
        && a.mul() == b.mul()
        && a.unit() == b.unit()
}

/// `M ⊗_B N` for a right module `M` and a left module `N`.
pub fn tensor_over_algebra<F: Field>(m: &DgModule<F>, n: &DgModule<F>) -> Result<RelativeTensor<F>> {
    if m.side() != Side::Right || n.side() != Side::Left {
        return Err(Error::Precondition("tensor over an algebra needs a right and a left module".into()));
    }
    if m.algebra().field() != n.algebra().field() {
        return Err(Error::FieldMismatch(m.algebra().field().spec(), n.algebra().field().spec()));
    }
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::Precondition("modules over different algebras".into()));
    }
    let cap = m.space().max_degree().max(n.space().max_degree());
    let j = Junction {
        right: m.action().clone(),
        left: n.action().clone(),
        algebra: m.algebra().space().clone(),
    };
    RelativeTensor::new(&[m.complex(), n.complex()], &[j], cap)
}

/// `β_φ : A ⊗_B A -> A ⊗ H` with its domain.
#[derive(Clone, Debug)]
pub struct GaloisMap<F: Field> {
    pub domain: RelativeTensor<F>,
    /// `A ⊗ H` as a flat tensor.
    pub codomain: TensorSpace<F>,
    pub map: ChainMap<F>,
    /// `(μ ⊗ H)(A ⊗ ρ)` on the flat `A ⊗ A`.
    pub on_ambient: GradedLinearMap<F>,
}

pub fn galois_map<F: Field>(ext: &Extension<F>) -> Result<GaloisMap<F>> {
    let domain = tensor_over_algebra(&ext.right_module()?, &ext.left_module()?)?;
    let a = ext.a.space();
    let h = ext.h.space();
    let n = a.max_degree();
    let f = ext.field();
    let aa = domain.ambient().clone();
    let aah = TensorSpace::new(f, vec![a.clone(), a.clone(), h.clone()], n);
    let ah = ext.a.comodule().coaction_space();
    let r = aa.apply(1, 1, ext.a.coaction(), &[a.clone(), h.clone()], &aah)?;
    let m = aah.apply(0, 2, ext.a.algebra().mul(), std::slice::from_ref(a), &ah)?;
    let on_ambient = m.compose(&r)?;
    let beta = domain.induced(&on_ambient, "β")?;
    let target = ChainComplex::on_tensor(&ah, &[ext.a.algebra().complex(), ext.h.complex()])?;
    let map = ChainMap::new(domain.complex().clone(), target, beta)?;
    map.validate().map_err(|v| Error::Invalid(v.within("β")))?;
    Ok(GaloisMap {
        domain,
        codomain: ah,
        map,
        on_ambient,
    })
}

/// `i_φ : B -> Ω(A; H; k)`, `b ↦ φ(b) ⊗ [] ⊗ 1`.
pub fn i_phi<F: Field>(ext: &Extension<F>, max_degree: usize) -> Result<(CobarComplex<F>, ChainMap<F>)> {
    let c = ext.coalgebra();
    let k = Comodule::trivial(c, Side::Left)?;
    let om = CobarComplex::new(ext.a.comodule(), c, &k, max_degree)?;
    let f = ext.field();
    let g = om.word_zero_map(ext.phi.map(), &[f.one()])?;
    let src = ext.b.complex().with_max_degree(max_degree);
    let g = g.reframe(ext.b.space(), om.space())?;
    let g = g.reframe(src.space(), om.space()).or_else(|_| {
        GradedLinearMap::new(
            src.space().clone(),
            om.space().clone(),
            0,
            g.blocks().iter().filter(|(&k, _)| k <= max_degree).map(|(&k, m)| (k, m.clone())).collect(),
        )
    })?;
    let map = ChainMap::new(src, om.complex().clone(), g)?;
    map.validate().map_err(|v| Error::Invalid(v.within("i_φ")))?;
    Ok((om, map))
}

/// Verdicts for both homotopic Hopf-Galois conditions, per degree.
#[derive(Clone, Debug)]
pub struct HhgReport {
    pub beta: Vec<Verdict>,
    pub i_phi: Vec<Verdict>,
    pub reliable_up_to: usize,
    pub note: &'static str,
}

impl HhgReport {
    pub fn passed(&self) -> bool {
        self.beta.iter().chain(&self.i_phi).all(Result::is_ok)
    }

    pub fn first_failure(&self) -> Option<&Violation> {
        self.beta.iter().chain(&self.i_phi).find_map(|v| v.as_ref().err())
    }
}

/// Run both checks in degrees below `max_degree`, which may not exceed the
/// extension's own truncation.
pub fn verify_hhg<F: Field>(ext: &Extension<F>, max_degree: usize) -> Result<HhgReport> {
    if !ext.coalgebra().one_connected() {
        return Err(Error::NotOneConnected);
    }
    if max_degree == 0 || max_degree > ext.max_degree() {
        return Err(crate::error::range_error(max_degree, ext.max_degree().checked_sub(1)));
    }
    let top = max_degree - 1;
    let beta = galois_map(ext)?.map.quasi_iso_by_degree(top)?;
    let (_, i) = i_phi(ext, max_degree)?;
    let i_phi = i.quasi_iso_by_degree(top)?;
    Ok(HhgReport {
        beta,
        i_phi,
        reliable_up_to: top,
        note: CONDITION_NOTE,
    })
}

/// `η : k -> H` as an extension of `H` over the ground field.
pub fn unit_extension<F: Field>(h: &Bimonoid<F>) -> Result<Extension<F>> {
    let b = ChainAlgebra::ground(h.field(), h.max_degree());
    let a = ComoduleAlgebra::regular(h);
    let phi = h.algebra().unit().reframe(&GradedVectorSpace::unit(h.field()), h.space())?;
    let phi = GradedLinearMap::new(b.space().clone(), h.space().clone(), 0, phi.blocks().clone())?;
    Extension::new(b, a, phi)
}

/// The trivial extension `B ⊗ η : B -> B ⊗ H` with coaction `B ⊗ Δ`.
pub fn trivial_extension<F: Field>(b: &ChainAlgebra<F>, h: &Bimonoid<F>, max_degree: usize) -> Result<Extension<F>> {
    let f = b.field();
    let n = max_degree;
    let (bs, hs) = (b.space(), h.space());
    let a = b.tensor(h.algebra(), n)?;
    let bh = TensorSpace::new(f, vec![bs.clone(), hs.clone()], n);
    let bhh = TensorSpace::new(f, vec![bs.clone(), hs.clone(), hs.clone()], n);
    let ah = TensorSpace::new(f, vec![a.space().clone(), hs.clone()], n);
    let delta = bh.apply(1, 1, h.coalgebra().comul(), &[hs.clone(), hs.clone()], &bhh)?;
    let coaction = unflatten(&bhh, &[Some(&bh), None], &ah)?.compose(&delta)?;
    let coaction = coaction.reframe(a.space(), ah.space())?;
    let ca = ComoduleAlgebra::new(a.clone(), h.clone(), coaction)?;
    let bn = b.complex().with_max_degree(n);
    let phi0 = with_unit(&GradedLinearMap::identity(bn.space()), h.algebra().unit(), &bh);
    let phi = phi0.reframe(bn.space(), a.space())?;
    let bn_alg = if b.max_degree() == n {
        b.clone()
    } else {
        truncate_algebra(b, n)?
    };
    Extension::new(bn_alg, ca, phi)
}

/// An algebra re-truncated at `n`.
pub fn truncate_algebra<F: Field>(b: &ChainAlgebra<F>, n: usize) -> Result<ChainAlgebra<F>> {
    let cx = b.complex().with_max_degree(n);
    let old = b.pair_space();
    let new = power(cx.space(), 2);
    let mul = GradedLinearMap::from_columns(new.space(), cx.space(), 0, |k, j| {
        let t = &new.basis(k)[j];
        match old.index_of(t) {
            Some((d, i)) => b.mul().column(d, i).into_iter().enumerate().filter(|(_, v)| !b.field().is_zero(v)).collect(),
            None => vec![],
        }
    });
    let unit = b.unit().reframe(&GradedVectorSpace::unit(b.field()), cx.space()).or_else(|_| {
        GradedLinearMap::new(GradedVectorSpace::unit(b.field()), cx.space().clone(), 0, b.unit().blocks().clone())
    })?;
    ChainAlgebra::new(cx, mul, unit)
}

/// `Φ⁻¹ : B ⊗ H ⊗ H -> A ⊗_B A`, `b ⊗ h ⊗ h' ↦ [(b ⊗ h) ⊗ (1 ⊗ h')]`, and the
/// check `β ∘ Φ⁻¹ = B ⊗ β_η` as maps `B ⊗ H ⊗ H -> (B ⊗ H) ⊗ H`.
#[derive(Clone, Debug)]
pub struct TrivialExtensionComparison<F: Field> {
    pub phi_inverse: GradedLinearMap<F>,
    pub lhs: GradedLinearMap<F>,
    pub rhs: GradedLinearMap<F>,
    pub identity: Verdict,
    pub phi_inverse_iso: bool,
}

pub fn compare_with_beta_eta<F: Field>(ext: &Extension<F>, galois: &GaloisMap<F>) -> Result<TrivialExtensionComparison<F>> {
    let f = ext.field();
    let bs = ext.b.space();
    let hs = ext.h.space();
    let n = ext.max_degree();
    let bh = TensorSpace::new(f, vec![bs.clone(), hs.clone()], n);
    if bh.space().first_dim_difference(ext.a.space()).is_some() {
        return Err(Error::Precondition("not a trivial extension: A is not B ⊗ H".into()));
    }
    let bhh = TensorSpace::new(f, vec![bs.clone(), hs.clone(), hs.clone()], n);
    let bhbh = TensorSpace::new(f, vec![bs.clone(), hs.clone(), bs.clone(), hs.clone()], n);
    let ins = bhh.apply(2, 0, ext.b.unit(), std::slice::from_ref(bs), &bhbh)?;
    let to_amb = unflatten(&bhbh, &[Some(&bh), Some(&bh)], galois.domain.ambient())?;
    let phi_inverse = galois.domain.project(&to_amb.compose(&ins)?)?;
    let phi_inverse = phi_inverse.reframe(bhh.space(), galois.domain.space())?;
    let lhs = galois.map.map().compose(&phi_inverse)?;
    let be = beta_eta(&ext.h)?;
    let b_be = bhh.apply(1, 2, &be, &[hs.clone(), hs.clone()], &bhh)?;
    let rhs = unflatten(&bhh, &[Some(&bh), None], &galois.codomain)?.compose(&b_be)?;
    let rhs = rhs.reframe(bhh.space(), galois.map.target().space())?;
    let identity = lhs.agree(&rhs, "β_{B⊗η} = B⊗β_η");
    let phi_inverse_iso = phi_inverse.inverse().is_ok();
    Ok(TrivialExtensionComparison {
        phi_inverse,
        lhs,
        rhs,
        identity,
        phi_inverse_iso,
    })
}

/// Convenience: the flat identification `(B ⊗ H) ⊗ H -> B ⊗ H ⊗ H`.
pub fn flatten_codomain<F: Field>(ext: &Extension<F>, galois: &GaloisMap<F>) -> Result<GradedLinearMap<F>> {
    let f = ext.field();
    let n = ext.max_degree();
    let bh = TensorSpace::new(f, vec![ext.b.space().clone(), ext.h.space().clone()], n);
    let bhh = TensorSpace::new(f, vec![ext.b.space().clone(), ext.h.space().clone(), ext.h.space().clone()], n);
    flatten(&galois.codomain, &[Some(&bh), None], &bhh)
}
