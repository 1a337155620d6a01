//! Bimodules, co-rings over a chain algebra, co-ring morphisms, comodules
//! over co-rings and descent data.
//!
//! Tensor products over `A` are cokernels of flat tensors (see
//! [`RelativeTensor`]); maps out of them are defined on the flat tensor and
//! checked to kill the relations.

use crate::algstruct::{power, ChainAlgebra, ChainCoalgebra, DgModule, Side};
use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result, Verdict, Violation};
use crate::hopfgalois::{galois_map, Extension};
use crate::linalg::{Field, GradedLinearMap, GradedVectorSpace, TensorSpace};
use crate::relative::{flatten, unflatten, Junction, RelativeTensor};

fn ctx<T>(r: Result<T>, what: &str) -> std::result::Result<T, Violation> {
    r.map_err(|e| Violation::new(what, 0, e.to_string()))
}

/// `A ⊗ W -> W` and `W ⊗ A -> W` on a common complex.
#[derive(Clone, Debug)]
pub struct Bimodule<F: Field> {
    algebra: ChainAlgebra<F>,
    complex: ChainComplex<F>,
    left: GradedLinearMap<F>,
    right: GradedLinearMap<F>,
}

impl<F: Field> Bimodule<F> {
    pub fn new(algebra: ChainAlgebra<F>, complex: ChainComplex<F>, left: GradedLinearMap<F>, right: GradedLinearMap<F>) -> Result<Self> {
        let l = DgModule::new(Side::Left, algebra.clone(), complex.clone(), left)?;
        let r = DgModule::new(Side::Right, algebra.clone(), complex.clone(), right)?;
        Ok(Bimodule {
            algebra,
            complex,
            left: l.action().clone(),
            right: r.action().clone(),
        })
    }

    pub fn regular(a: &ChainAlgebra<F>) -> Self {
        Bimodule {
            algebra: a.clone(),
            complex: a.complex().clone(),
            left: a.mul().clone(),
            right: a.mul().clone(),
        }
    }

    pub fn algebra(&self) -> &ChainAlgebra<F> {
        &self.algebra
    }
    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.complex.space()
    }
    pub fn left(&self) -> &GradedLinearMap<F> {
        &self.left
    }
    pub fn right(&self) -> &GradedLinearMap<F> {
        &self.right
    }
    pub fn max_degree(&self) -> usize {
        self.complex.max_degree()
    }
    pub fn left_module(&self) -> DgModule<F> {
        DgModule::new(Side::Left, self.algebra.clone(), self.complex.clone(), self.left.clone()).expect("checked")
    }
    pub fn right_module(&self) -> DgModule<F> {
        DgModule::new(Side::Right, self.algebra.clone(), self.complex.clone(), self.right.clone()).expect("checked")
    }

    /// Both actions are module actions and they commute.
    pub fn validate(&self) -> Verdict {
        self.left_module().validate().map_err(|v| v.within("left action"))?;
        self.right_module().validate().map_err(|v| v.within("right action"))?;
        let f = self.complex.field();
        let (a, w) = (self.algebra.space(), self.space());
        let n = self.max_degree();
        let awa = TensorSpace::new(f, vec![a.clone(), w.clone(), a.clone()], n);
        let wa = TensorSpace::new(f, vec![w.clone(), a.clone()], n);
        let aw = TensorSpace::new(f, vec![a.clone(), w.clone()], n);
        let x = ctx(awa.apply(0, 2, &self.left, std::slice::from_ref(w), &wa), "bimodule")?;
        let y = ctx(awa.apply(1, 2, &self.right, std::slice::from_ref(w), &aw), "bimodule")?;
        let lhs = self.right.compose(&x).expect("shapes");
        let rhs = self.left.compose(&y).expect("shapes");
        lhs.agree(&rhs, "(aw)b = a(wb)")
    }

    /// `ℓ ∘ (A ⊗ g) = g ∘ ℓ` and the same on the right, for `g : self -> other`.
    pub fn check_map(&self, other: &Bimodule<F>, g: &GradedLinearMap<F>, what: &str) -> Verdict {
        let f = self.complex.field();
        let a = self.algebra.space();
        let n = self.max_degree().max(other.max_degree());
        let id = GradedLinearMap::identity(a);
        let aw = TensorSpace::new(f, vec![a.clone(), self.space().clone()], n);
        let aw2 = TensorSpace::new(f, vec![a.clone(), other.space().clone()], n);
        let ag = ctx(TensorSpace::tensor_maps(&[&id, g], &aw, &aw2), what)?;
        let lhs = g.compose(&ctx(self.left.reframe(aw.space(), self.space()), what)?).expect("shapes");
        let rhs = ctx(other.left.reframe(aw2.space(), other.space()), what)?.compose(&ag).expect("shapes");
        lhs.agree(&rhs, &format!("{what} is left A-linear"))?;
        let wa = TensorSpace::new(f, vec![self.space().clone(), a.clone()], n);
        let wa2 = TensorSpace::new(f, vec![other.space().clone(), a.clone()], n);
        let ga = ctx(TensorSpace::tensor_maps(&[g, &id], &wa, &wa2), what)?;
        let lhs = g.compose(&ctx(self.right.reframe(wa.space(), self.space()), what)?).expect("shapes");
        let rhs = ctx(other.right.reframe(wa2.space(), other.space()), what)?.compose(&ga).expect("shapes");
        lhs.agree(&rhs, &format!("{what} is right A-linear"))
    }
}

fn junction<F: Field>(right: &GradedLinearMap<F>, left: &GradedLinearMap<F>, a: &ChainAlgebra<F>) -> Junction<F> {
    Junction {
        right: right.clone(),
        left: left.clone(),
        algebra: a.space().clone(),
    }
}

/// `W_1 ⊗_A ... ⊗_A W_n` with its induced bimodule structure.
#[derive(Clone, Debug)]
pub struct BimoduleTensor<F: Field> {
    pub tensor: RelativeTensor<F>,
    pub bimodule: Bimodule<F>,
}

pub fn tensor_over_a<F: Field>(ws: &[&Bimodule<F>]) -> Result<BimoduleTensor<F>> {
    let a = ws[0].algebra();
    let cap = ws.iter().map(|w| w.max_degree()).max().unwrap_or(0);
    let js: Vec<_> = ws.windows(2).map(|p| junction(&p[0].right, &p[1].left, a)).collect();
    let cxs: Vec<&ChainComplex<F>> = ws.iter().map(|w| &w.complex).collect();
    let tensor = RelativeTensor::new(&cxs, &js, cap)?;
    let left = tensor.induced_left_action(&ws[0].left, a.space())?;
    let right = tensor.induced_right_action(&ws[ws.len() - 1].right, a.space())?;
    let bimodule = Bimodule::new(a.clone(), tensor.complex().clone(), left, right)?;
    Ok(BimoduleTensor { tensor, bimodule })
}

/// `M ⊗_A N` for a right module `M` and a left module `N`.
pub fn tensor_over_a_modules<F: Field>(m: &DgModule<F>, n: &DgModule<F>) -> Result<RelativeTensor<F>> {
    crate::hopfgalois::tensor_over_algebra(m, n)
}

/// The map between relative tensors induced by a map on one factor:
/// `map : V_pos -> out_1 ⊗ ... ⊗ out_k` (flat), landing in `target`, whose
/// flat factors are those of `source` with `V_pos` replaced by `out`.
fn on_factor<F: Field>(
    source: &RelativeTensor<F>,
    pos: usize,
    map: &GradedLinearMap<F>,
    out: &[GradedVectorSpace<F>],
    target: &RelativeTensor<F>,
    what: &str,
) -> Result<GradedLinearMap<F>> {
    let g = source.ambient().apply(pos, 1, map, out, target.ambient())?;
    source.induced(&target.projection().compose(&g)?, what)
}

/// A comonoid `(W, ψ, ε)` in `A`-bimodules.
#[derive(Clone, Debug)]
pub struct CoRing<F: Field> {
    w: Bimodule<F>,
    ww: BimoduleTensor<F>,
    psi: GradedLinearMap<F>,
    eps: GradedLinearMap<F>,
}

impl<F: Field> CoRing<F> {
    /// `ψ : W -> W ⊗_A W` given on `W` into the flat `W ⊗ W` (it is projected),
    /// and `ε : W -> A`.
    pub fn from_flat(w: Bimodule<F>, psi_flat: &GradedLinearMap<F>, eps: GradedLinearMap<F>) -> Result<Self> {
        let ww = tensor_over_a(&[&w, &w])?;
        let psi = ww.tensor.project(&psi_flat.reframe(w.space(), ww.tensor.ambient().space())?)?;
        Self::new(w, ww, psi, eps)
    }

    fn new(w: Bimodule<F>, ww: BimoduleTensor<F>, psi: GradedLinearMap<F>, eps: GradedLinearMap<F>) -> Result<Self> {
        let psi = psi.reframe(w.space(), ww.tensor.space())?;
        let eps = eps.reframe(w.space(), w.algebra().space())?;
        Ok(CoRing { w, ww, psi, eps })
    }

    /// The same bimodule and counit with a replaced comultiplication.
    pub fn with_psi(&self, psi: GradedLinearMap<F>) -> Result<Self> {
        Self::new(self.w.clone(), self.ww.clone(), psi, self.eps.clone())
    }

    pub fn bimodule(&self) -> &Bimodule<F> {
        &self.w
    }
    pub fn algebra(&self) -> &ChainAlgebra<F> {
        self.w.algebra()
    }
    pub fn square(&self) -> &BimoduleTensor<F> {
        &self.ww
    }
    pub fn psi(&self) -> &GradedLinearMap<F> {
        &self.psi
    }
    pub fn eps(&self) -> &GradedLinearMap<F> {
        &self.eps
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.w.space()
    }

    /// Bimodule axioms, `ψ` and `ε` chain maps and bimodule maps,
    /// coassociativity and both counit laws.
    pub fn validate(&self) -> Verdict {
        let w = &self.w;
        let a = w.algebra();
        w.validate().map_err(|v| v.within("bimodule"))?;
        ctx(ChainMap::new(w.complex().clone(), self.ww.tensor.complex().clone(), self.psi.clone()), "ψ")?
            .validate()
            .map_err(|v| v.within("ψ"))?;
        ctx(ChainMap::new(w.complex().clone(), a.complex().clone(), self.eps.clone()), "ε")?
            .validate()
            .map_err(|v| v.within("ε"))?;
        w.check_map(&self.ww.bimodule, &self.psi, "ψ")?;
        w.check_map(&Bimodule::regular(a), &self.eps, "ε")?;

        let www = ctx(tensor_over_a(&[w, w, w]), "W⊗W⊗W")?;
        let ws = w.space().clone();
        let sp = self.ww.tensor.section().compose(&self.psi).expect("shapes");
        let out = [ws.clone(), ws.clone()];
        let left = ctx(on_factor(&self.ww.tensor, 0, &sp, &out, &www.tensor, "ψ⊗W"), "ψ⊗W")?;
        let right = ctx(on_factor(&self.ww.tensor, 1, &sp, &out, &www.tensor, "W⊗ψ"), "W⊗ψ")?;
        let l = left.compose(&self.psi).expect("shapes");
        let r = right.compose(&self.psi).expect("shapes");
        l.agree(&r, "coassociativity")?;

        let f = a.field();
        let n = w.max_degree();
        let amb = self.ww.tensor.ambient();
        let aw = TensorSpace::new(f, vec![a.space().clone(), ws.clone()], n);
        let wa = TensorSpace::new(f, vec![ws.clone(), a.space().clone()], n);
        let e0 = ctx(amb.apply(0, 1, &self.eps, std::slice::from_ref(a.space()), &aw), "ε⊗W")?;
        let e1 = ctx(amb.apply(1, 1, &self.eps, std::slice::from_ref(a.space()), &wa), "W⊗ε")?;
        let lw = ctx(w.left.reframe(aw.space(), &ws), "ℓ")?;
        let rw = ctx(w.right.reframe(wa.space(), &ws), "r")?;
        let cl = ctx(self.ww.tensor.induced(&lw.compose(&e0).expect("shapes"), "ε⊗W"), "ε⊗W")?;
        let cr = ctx(self.ww.tensor.induced(&rw.compose(&e1).expect("shapes"), "W⊗ε"), "W⊗ε")?;
        let id = GradedLinearMap::identity(&ws);
        cl.compose(&self.psi).expect("shapes").agree(&id, "left counit")?;
        cr.compose(&self.psi).expect("shapes").agree(&id, "right counit")
    }
}

/// `γ ⊗_A γ : W ⊗_A W -> W' ⊗_A W'`.
fn tensor_square<F: Field>(g: &GradedLinearMap<F>, src: &CoRing<F>, tgt: &CoRing<F>) -> Result<GradedLinearMap<F>> {
    let (s, t) = (src.ww.tensor.ambient(), tgt.ww.tensor.ambient());
    let gg = TensorSpace::tensor_maps(&[g, g], s, t)?;
    src.ww.tensor.induced(&tgt.ww.tensor.projection().compose(&gg)?, "γ⊗γ")
}

/// `γ` is a bimodule chain map with `(γ ⊗_A γ) ψ = ψ' γ` and `ε' γ = ε`.
pub fn validate_coring_morphism<F: Field>(g: &GradedLinearMap<F>, src: &CoRing<F>, tgt: &CoRing<F>) -> Verdict {
    let g = ctx(g.reframe(src.space(), tgt.space()), "γ")?;
    ctx(ChainMap::new(src.w.complex().clone(), tgt.w.complex().clone(), g.clone()), "γ")?
        .validate()
        .map_err(|v| v.within("γ"))?;
    src.w.check_map(&tgt.w, &g, "γ")?;
    let gg = ctx(tensor_square(&g, src, tgt), "γ⊗γ")?;
    let lhs = gg.compose(&src.psi).expect("shapes");
    let rhs = tgt.psi.compose(&g).expect("shapes");
    lhs.agree(&rhs, "(γ⊗γ)∘ψ = ψ'∘γ")?;
    tgt.eps.compose(&g).expect("shapes").agree(&src.eps, "ε'∘γ = ε")
}

/// `A ⊗ C` with left action on `A`, right action through the symmetry,
/// `ψ(a ⊗ c) = Σ (a ⊗ c') ⊗ (1 ⊗ c'')` and `ε = A ⊗ ε_C`.
pub fn trivial_coring<F: Field>(a: &ChainAlgebra<F>, c: &ChainCoalgebra<F>, n: usize) -> Result<CoRing<F>> {
    let f = a.field();
    let (asp, csp) = (a.space(), c.space());
    let ac = TensorSpace::new(f, vec![asp.clone(), csp.clone()], n);
    let aac = TensorSpace::new(f, vec![asp.clone(), asp.clone(), csp.clone()], n);
    let aca = TensorSpace::new(f, vec![asp.clone(), csp.clone(), asp.clone()], n);
    let complex = ChainComplex::on_tensor(&ac, &[a.complex(), c.complex()])?;
    let w_space = ac.space().clone();
    let a_w = TensorSpace::new(f, vec![asp.clone(), w_space.clone()], n);
    let w_a = TensorSpace::new(f, vec![w_space.clone(), asp.clone()], n);
    let mu_first = aac.apply(0, 2, a.mul(), std::slice::from_ref(asp), &ac)?;
    let left = mu_first.compose(&flatten(&a_w, &[None, Some(&ac)], &aac)?)?;
    let (_, swap) = aca.permute(&[0, 2, 1])?;
    let right = mu_first.compose(&swap)?.compose(&flatten(&w_a, &[Some(&ac), None], &aca)?)?;
    let w = Bimodule::new(a.clone(), complex, left, right)?;
    let (psi, eps) = split_structure(a, c.comul(), c.counit(), &ac, n)?;
    CoRing::from_flat(w, &psi, eps)
}

/// `a ⊗ c ↦ Σ (a ⊗ c') ⊗ (1 ⊗ c'')` into the flat `(A ⊗ C) ⊗ (A ⊗ C)`, and `A ⊗ ε`.
fn split_structure<F: Field>(
    a: &ChainAlgebra<F>,
    comul: &GradedLinearMap<F>,
    counit: &GradedLinearMap<F>,
    ac: &TensorSpace<F>,
    n: usize,
) -> Result<(GradedLinearMap<F>, GradedLinearMap<F>)> {
    let f = a.field();
    let asp = a.space();
    let csp = ac.factors()[1].clone();
    let acc = TensorSpace::new(f, vec![asp.clone(), csp.clone(), csp.clone()], n);
    let acac = TensorSpace::new(f, vec![asp.clone(), csp.clone(), asp.clone(), csp.clone()], n);
    let d = ac.apply(1, 1, comul, &[csp.clone(), csp.clone()], &acc)?;
    let ins = acc.apply(2, 0, a.unit(), std::slice::from_ref(asp), &acac)?;
    let nested = TensorSpace::new(f, vec![ac.space().clone(), ac.space().clone()], n);
    let psi = unflatten(&acac, &[Some(ac), Some(ac)], &nested)?.compose(&ins)?.compose(&d)?;
    let just_a = TensorSpace::new(f, vec![asp.clone()], n);
    let eps = ac.apply(1, 1, counit, &[], &just_a)?;
    let eps = eps.reframe(ac.space(), asp)?;
    Ok((psi, eps))
}

/// `W^ρ = A ⊗ H`: left action on `A`, right action `(a ⊗ h) a' = Σ a a'_0 ⊗ h a'_1`
/// through the coaction, `ψ(a ⊗ h) = Σ (a ⊗ h') ⊗ (1 ⊗ h'')`, `ε = A ⊗ ε_H`.
pub fn rho_coring<F: Field>(ext: &Extension<F>) -> Result<CoRing<F>> {
    let ca = ext.algebra();
    let a = ca.algebra();
    let h = ext.bimonoid();
    let f = a.field();
    let n = ext.max_degree();
    let (asp, hsp) = (a.space(), h.space());
    let ah = TensorSpace::new(f, vec![asp.clone(), hsp.clone()], n);
    let aah = TensorSpace::new(f, vec![asp.clone(), asp.clone(), hsp.clone()], n);
    let aha = TensorSpace::new(f, vec![asp.clone(), hsp.clone(), asp.clone()], n);
    let ahah = TensorSpace::new(f, vec![asp.clone(), hsp.clone(), asp.clone(), hsp.clone()], n);
    let ahh = TensorSpace::new(f, vec![asp.clone(), hsp.clone(), hsp.clone()], n);
    let complex = ChainComplex::on_tensor(&ah, &[a.complex(), h.complex()])?;
    let w_space = ah.space().clone();
    let a_w = TensorSpace::new(f, vec![asp.clone(), w_space.clone()], n);
    let w_a = TensorSpace::new(f, vec![w_space.clone(), asp.clone()], n);
    let mu_first = aah.apply(0, 2, a.mul(), std::slice::from_ref(asp), &ah)?;
    let left = mu_first.compose(&flatten(&a_w, &[None, Some(&ah)], &aah)?)?;
    let rho = aha.apply(2, 1, ca.coaction(), &[asp.clone(), hsp.clone()], &ahah)?;
    let (aahh, swap) = ahah.permute(&[0, 2, 1, 3])?;
    let m_a = aahh.apply(0, 2, a.mul(), std::slice::from_ref(asp), &ahh)?;
    let m_h = ahh.apply(1, 2, h.algebra().mul(), std::slice::from_ref(hsp), &ah)?;
    let right = m_h
        .compose(&m_a)?
        .compose(&swap)?
        .compose(&rho)?
        .compose(&flatten(&w_a, &[Some(&ah), None], &aha)?)?;
    let w = Bimodule::new(a.clone(), complex, left, right)?;
    let (psi, eps) = split_structure(a, h.coalgebra().comul(), h.coalgebra().counit(), &ah, n)?;
    CoRing::from_flat(w, &psi, eps)
}

/// `A` as a right and as a left `B`-module through `φ : B -> A`.
pub fn restricted_modules<F: Field>(
    b: &ChainAlgebra<F>,
    a: &ChainAlgebra<F>,
    phi: &GradedLinearMap<F>,
) -> Result<(DgModule<F>, DgModule<F>)> {
    let asp = a.space();
    let n = asp.max_degree();
    let f = a.field();
    let id = GradedLinearMap::identity(asp);
    let aa = power(asp, 2);
    let ab = TensorSpace::new(f, vec![asp.clone(), b.space().clone()], n);
    let ba = TensorSpace::new(f, vec![b.space().clone(), asp.clone()], n);
    let r = a.mul().compose(&TensorSpace::tensor_maps(&[&id, phi], &ab, &aa)?)?;
    let l = a.mul().compose(&TensorSpace::tensor_maps(&[phi, &id], &ba, &aa)?)?;
    Ok((
        DgModule::new(Side::Right, b.clone(), a.complex().clone(), r)?,
        DgModule::new(Side::Left, b.clone(), a.complex().clone(), l)?,
    ))
}

/// `W_φ = A ⊗_B A` with `ψ[a ⊗ a'] = [(a ⊗ 1) ⊗ (1 ⊗ a')]` and `ε[a ⊗ a'] = a a'`.
pub fn canonical_coring<F: Field>(b: &ChainAlgebra<F>, a: &ChainAlgebra<F>, phi: &GradedLinearMap<F>) -> Result<CoRing<F>> {
    let f = a.field();
    let asp = a.space();
    let n = asp.max_degree();
    let (rm, lm) = restricted_modules(b, a, phi)?;
    let q = crate::hopfgalois::tensor_over_algebra(&rm, &lm)?;
    let left = q.induced_left_action(a.mul(), asp)?;
    let right = q.induced_right_action(a.mul(), asp)?;
    let w = Bimodule::new(a.clone(), q.complex().clone(), left, right)?;
    let ww = tensor_over_a(&[&w, &w])?;
    let aa = q.ambient();
    let aaa = TensorSpace::new(f, vec![asp.clone(); 3], n);
    let aaaa = TensorSpace::new(f, vec![asp.clone(); 4], n);
    let i1 = aa.apply(1, 0, a.unit(), std::slice::from_ref(asp), &aaa)?;
    let i2 = aaa.apply(2, 0, a.unit(), std::slice::from_ref(asp), &aaaa)?;
    let nested = TensorSpace::new(f, vec![aa.space().clone(), aa.space().clone()], n);
    let to_nested = unflatten(&aaaa, &[Some(aa), Some(aa)], &nested)?;
    let pp = TensorSpace::tensor_maps(&[q.projection(), q.projection()], &nested, ww.tensor.ambient())?;
    let psi_amb = ww.tensor.projection().compose(&pp)?.compose(&to_nested)?.compose(&i2)?.compose(&i1)?;
    let psi = q.induced(&psi_amb, "ψ")?;
    let eps = q.induced(&a.mul().reframe(aa.space(), asp)?, "ε")?;
    CoRing::new(w, ww, psi, eps)
}

/// `β_φ : W_φ -> W^ρ` checked as a co-ring morphism.
pub struct GaloisCoringCheck<F: Field> {
    pub canonical: CoRing<F>,
    pub rho: CoRing<F>,
    pub beta: GradedLinearMap<F>,
    pub verdict: Verdict,
}

pub fn galois_as_coring_morphism<F: Field>(ext: &Extension<F>) -> Result<GaloisCoringCheck<F>> {
    let canonical = canonical_coring(ext.base(), ext.algebra().algebra(), ext.phi().map())?;
    let rho = rho_coring(ext)?;
    let g = galois_map(ext)?;
    let beta = g.map.map().reframe(canonical.space(), rho.space())?;
    let verdict = validate_coring_morphism(&beta, &canonical, &rho);
    Ok(GaloisCoringCheck {
        canonical,
        rho,
        beta,
        verdict,
    })
}

/// A right `A`-module `M` with a coaction `θ : M -> M ⊗_A W`.
#[derive(Clone, Debug)]
pub struct CoringComodule<F: Field> {
    module: DgModule<F>,
    coring: CoRing<F>,
    tensor: RelativeTensor<F>,
    theta: GradedLinearMap<F>,
}

impl<F: Field> CoringComodule<F> {
    pub fn new(module: DgModule<F>, coring: CoRing<F>, theta_flat: &GradedLinearMap<F>) -> Result<Self> {
        let tensor = mw_tensor(&module, &coring)?;
        let theta = tensor.project(&theta_flat.reframe(module.space(), tensor.ambient().space())?)?;
        Ok(CoringComodule {
            module,
            coring,
            tensor,
            theta,
        })
    }

    pub fn module(&self) -> &DgModule<F> {
        &self.module
    }
    pub fn coring(&self) -> &CoRing<F> {
        &self.coring
    }
    pub fn tensor(&self) -> &RelativeTensor<F> {
        &self.tensor
    }
    pub fn theta(&self) -> &GradedLinearMap<F> {
        &self.theta
    }

    /// `W` as a comodule over itself.
    pub fn regular(w: &CoRing<F>) -> Result<Self> {
        let module = w.bimodule().right_module();
        let psi_flat = w.square().tensor.section().compose(w.psi())?;
        Self::new(module, w.clone(), &psi_flat)
    }

    /// Chain map, `A`-linearity, coassociativity and counit.
    pub fn validate(&self) -> Verdict {
        let m = &self.module;
        let w = &self.coring;
        let a = w.algebra();
        m.validate().map_err(|v| v.within("module"))?;
        ctx(ChainMap::new(m.complex().clone(), self.tensor.complex().clone(), self.theta.clone()), "θ")?
            .validate()
            .map_err(|v| v.within("θ"))?;
        let right = ctx(self.tensor.induced_right_action(w.bimodule().right(), a.space()), "M⊗W action")?;
        let target = ctx(
            DgModule::new(Side::Right, a.clone(), self.tensor.complex().clone(), right),
            "M⊗W module",
        )?;
        check_right_linear(m, &target, &self.theta, "θ")?;

        let mww = ctx(mww_tensor(m, w), "M⊗W⊗W")?;
        let ws = w.space().clone();
        let st = self.tensor.section().compose(&self.theta).expect("shapes");
        let out_m = [m.space().clone(), ws.clone()];
        let t1 = ctx(on_factor(&self.tensor, 0, &st, &out_m, &mww, "θ⊗W"), "θ⊗W")?;
        let sp = w.square().tensor.section().compose(w.psi()).expect("shapes");
        let t2 = ctx(on_factor(&self.tensor, 1, &sp, &[ws.clone(), ws.clone()], &mww, "M⊗ψ"), "M⊗ψ")?;
        t1.compose(&self.theta)
            .expect("shapes")
            .agree(&t2.compose(&self.theta).expect("shapes"), "coassociativity of θ")?;

        let f = a.field();
        let n = m.space().max_degree();
        let ma = TensorSpace::new(f, vec![m.space().clone(), a.space().clone()], n);
        let e = ctx(self.tensor.ambient().apply(1, 1, w.eps(), std::slice::from_ref(a.space()), &ma), "M⊗ε")?;
        let r = ctx(m.action().reframe(ma.space(), m.space()), "r")?;
        let c = ctx(self.tensor.induced(&r.compose(&e).expect("shapes"), "M⊗ε"), "M⊗ε")?;
        c.compose(&self.theta)
            .expect("shapes")
            .agree(&GradedLinearMap::identity(m.space()), "counit of θ")
    }
}

fn mw_tensor<F: Field>(m: &DgModule<F>, w: &CoRing<F>) -> Result<RelativeTensor<F>> {
    let a = w.algebra();
    let cap = m.space().max_degree().max(w.bimodule().max_degree());
    RelativeTensor::new(
        &[m.complex(), w.bimodule().complex()],
        &[junction(m.action(), w.bimodule().left(), a)],
        cap,
    )
}

fn mww_tensor<F: Field>(m: &DgModule<F>, w: &CoRing<F>) -> Result<RelativeTensor<F>> {
    let a = w.algebra();
    let wb = w.bimodule();
    let cap = m.space().max_degree().max(wb.max_degree());
    RelativeTensor::new(
        &[m.complex(), wb.complex(), wb.complex()],
        &[junction(m.action(), wb.left(), a), junction(wb.right(), wb.left(), a)],
        cap,
    )
}

fn check_right_linear<F: Field>(m: &DgModule<F>, n: &DgModule<F>, g: &GradedLinearMap<F>, what: &str) -> Verdict {
    let f = m.algebra().field();
    let a = m.algebra().space();
    let cap = m.space().max_degree().max(n.space().max_degree());
    let ma = TensorSpace::new(f, vec![m.space().clone(), a.clone()], cap);
    let na = TensorSpace::new(f, vec![n.space().clone(), a.clone()], cap);
    let ga = ctx(TensorSpace::tensor_maps(&[g, &GradedLinearMap::identity(a)], &ma, &na), what)?;
    let lhs = g.compose(&ctx(m.action().reframe(ma.space(), m.space()), what)?).expect("shapes");
    let rhs = ctx(n.action().reframe(na.space(), n.space()), what)?.compose(&ga).expect("shapes");
    lhs.agree(&rhs, &format!("{what} is right A-linear"))
}

/// `γ_*(M, θ) = (M, (M ⊗_A γ) θ)`.
pub fn pushforward<F: Field>(g: &GradedLinearMap<F>, target: &CoRing<F>, m: &CoringComodule<F>) -> Result<CoringComodule<F>> {
    let mw2 = mw_tensor(&m.module, target)?;
    let out = [target.space().clone()];
    let g = g.reframe(m.coring.space(), target.space())?;
    let mg = on_factor(&m.tensor, 1, &g, &out, &mw2, "M⊗γ")?;
    let theta = mg.compose(&m.theta)?;
    Ok(CoringComodule {
        module: m.module.clone(),
        coring: target.clone(),
        tensor: mw2,
        theta,
    })
}

/// `M' □_{W'} W`: the equalizer of `θ' ⊗_A W` and `M' ⊗_A (γ ⊗_A W) ψ` in
/// `M' ⊗_A W' ⊗_A W`, as a `W`-comodule, with its inclusion into `M' ⊗_A W`.
pub fn cotensor_over_coring<F: Field>(
    m: &CoringComodule<F>,
    g: &GradedLinearMap<F>,
    source: &CoRing<F>,
) -> Result<(CoringComodule<F>, GradedLinearMap<F>)> {
    let target = &m.coring;
    let a = source.algebra();
    let mw = mw_tensor(&m.module, source)?;
    let (wb, wtb) = (source.bimodule(), target.bimodule());
    let cap = mw.cap();
    let mw2w = RelativeTensor::new(
        &[m.module.complex(), wtb.complex(), wb.complex()],
        &[junction(m.module.action(), wtb.left(), a), junction(wtb.right(), wb.left(), a)],
        cap,
    )?;
    let st = m.tensor.section().compose(&m.theta)?;
    let first = on_factor(&mw, 0, &st, &[m.module.space().clone(), wtb.space().clone()], &mw2w, "θ'⊗W")?;
    let g = g.reframe(source.space(), target.space())?;
    let w_ts = &source.square().tensor;
    let gw = TensorSpace::tensor_maps(&[&g, &GradedLinearMap::identity(wb.space())], w_ts.ambient(), &TensorSpace::new(a.field(), vec![wtb.space().clone(), wb.space().clone()], cap))?;
    let gpsi = gw.compose(w_ts.section())?.compose(source.psi())?;
    let second = on_factor(&mw, 1, &gpsi, &[wtb.space().clone(), wb.space().clone()], &mw2w, "M'⊗(γ⊗W)ψ")?;
    let eq = first.equalizer(&second)?;
    let (sub, _) = mw.complex().subcomplex(&eq.inclusion)?;
    let right = mw.induced_right_action(wb.right(), a.space())?;
    let mw_mod = DgModule::new(Side::Right, a.clone(), mw.complex().clone(), right)?;
    let f = a.field();
    let sa = TensorSpace::new(f, vec![sub.space().clone(), a.space().clone()], cap);
    let ma = mw_mod.action_space();
    let incl_a = TensorSpace::tensor_maps(&[&eq.inclusion, &GradedLinearMap::identity(a.space())], &sa, &ma)?;
    let sub_action = mw_mod.action().compose(&incl_a)?.factor_through(&eq.inclusion)?;
    let sub_mod = DgModule::new(Side::Right, a.clone(), sub.clone(), sub_action)?;

    // θ on the equalizer: (M' ⊗ ψ) restricted, solved through (incl ⊗_A W).
    let sw = mw_tensor(&sub_mod, source)?;
    let mw_w = RelativeTensor::new(
        &[mw.complex(), wb.complex()],
        &[junction(mw_mod.action(), wb.left(), a)],
        cap,
    )?;
    let incl_w = on_factor(&sw, 0, &eq.inclusion, &[mw.space().clone()], &mw_w, "incl⊗W")?;
    let sp = source.square().tensor.section().compose(source.psi())?;
    let target_amb = TensorSpace::new(f, vec![m.module.space().clone(), wb.space().clone(), wb.space().clone()], cap);
    let m_psi = mw.ambient().apply(1, 1, &sp, &[wb.space().clone(), wb.space().clone()], &target_amb)?;
    let nested_space = TensorSpace::new(f, vec![mw.ambient().space().clone(), wb.space().clone()], cap);
    let nested = unflatten(&target_amb, &[Some(mw.ambient()), None], &nested_space)?;
    let pw = TensorSpace::tensor_maps(&[mw.projection(), &GradedLinearMap::identity(wb.space())], &nested_space, mw_w.ambient())?;
    let m_psi = mw.induced(&mw_w.projection().compose(&pw)?.compose(&nested)?.compose(&m_psi)?, "M'⊗ψ")?;
    let theta = m_psi.compose(&eq.inclusion)?.factor_through(&incl_w)?;
    let theta_flat = sw.section().compose(&theta)?;
    let out = CoringComodule::new(sub_mod, source.clone(), &theta_flat)?;
    Ok((out, eq.inclusion))
}

/// A right `A`-module with `θ : M -> M ⊗_B A`.
#[derive(Clone, Debug)]
pub struct DescentDatum<F: Field> {
    module: DgModule<F>,
    base: ChainAlgebra<F>,
    phi: GradedLinearMap<F>,
    tensor: RelativeTensor<F>,
    theta: GradedLinearMap<F>,
}

/// `M` restricted to a right `B`-module through `φ`.
fn restrict<F: Field>(m: &DgModule<F>, b: &ChainAlgebra<F>, phi: &GradedLinearMap<F>) -> Result<DgModule<F>> {
    let f = b.field();
    let n = m.space().max_degree();
    let mb = TensorSpace::new(f, vec![m.space().clone(), b.space().clone()], n);
    let ma = m.action_space();
    let t = TensorSpace::tensor_maps(&[&GradedLinearMap::identity(m.space()), phi], &mb, &ma)?;
    DgModule::new(Side::Right, b.clone(), m.complex().clone(), m.action().compose(&t)?)
}

fn over_b<F: Field>(m: &DgModule<F>, b: &ChainAlgebra<F>, a: &ChainAlgebra<F>, phi: &GradedLinearMap<F>, extra: usize) -> Result<RelativeTensor<F>> {
    let mb = restrict(m, b, phi)?;
    let (ra, la) = restricted_modules(b, a, phi)?;
    let cap = m.space().max_degree();
    let mut cxs = vec![m.complex()];
    let mut js = vec![Junction {
        right: mb.action().clone(),
        left: la.action().clone(),
        algebra: b.space().clone(),
    }];
    cxs.push(a.complex());
    for _ in 1..extra {
        cxs.push(a.complex());
        js.push(Junction {
            right: ra.action().clone(),
            left: la.action().clone(),
            algebra: b.space().clone(),
        });
    }
    RelativeTensor::new(&cxs, &js, cap)
}

impl<F: Field> DescentDatum<F> {
    pub fn new(module: DgModule<F>, base: ChainAlgebra<F>, phi: GradedLinearMap<F>, theta_flat: &GradedLinearMap<F>) -> Result<Self> {
        let tensor = over_b(&module, &base, module.algebra(), &phi, 1)?;
        let theta = tensor.project(&theta_flat.reframe(module.space(), tensor.ambient().space())?)?;
        Ok(DescentDatum {
            module,
            base,
            phi,
            tensor,
            theta,
        })
    }

    pub fn module(&self) -> &DgModule<F> {
        &self.module
    }
    pub fn tensor(&self) -> &RelativeTensor<F> {
        &self.tensor
    }
    pub fn theta(&self) -> &GradedLinearMap<F> {
        &self.theta
    }

    /// `n ↦ [n ⊗ 1]`.
    fn unit_map(&self) -> Result<GradedLinearMap<F>> {
        let a = self.module.algebra();
        let f = a.field();
        let n = self.module.space().max_degree();
        let single = TensorSpace::new(f, vec![self.module.space().clone()], n);
        let ins = single.apply(1, 0, a.unit(), std::slice::from_ref(a.space()), self.tensor.ambient())?;
        self.tensor.project(&ins.reframe(self.module.space(), self.tensor.ambient().space())?)
    }

    /// Chain map, `A`-linear, cocycle `(θ ⊗_B A) θ = (M ⊗ 1 ⊗ A) θ` and counit `μ̄ θ = id`.
    pub fn validate(&self) -> Verdict {
        let m = &self.module;
        let a = m.algebra();
        m.validate().map_err(|v| v.within("module"))?;
        ctx(ChainMap::new(m.complex().clone(), self.tensor.complex().clone(), self.theta.clone()), "θ")?
            .validate()
            .map_err(|v| v.within("θ"))?;
        let right = ctx(self.tensor.induced_right_action(a.mul(), a.space()), "M⊗_B A action")?;
        let target = ctx(DgModule::new(Side::Right, a.clone(), self.tensor.complex().clone(), right), "M⊗_B A")?;
        check_right_linear(m, &target, &self.theta, "θ")?;

        let three = ctx(over_b(m, &self.base, a, &self.phi, 2), "M⊗_B A⊗_B A")?;
        let st = self.tensor.section().compose(&self.theta).expect("shapes");
        let t1 = ctx(on_factor(&self.tensor, 0, &st, &[m.space().clone(), a.space().clone()], &three, "θ⊗A"), "θ⊗A")?;
        let ins = ctx(
            self.tensor.ambient().apply(1, 0, a.unit(), std::slice::from_ref(a.space()), three.ambient()),
            "M⊗1⊗A",
        )?;
        let t2 = ctx(self.tensor.induced(&three.projection().compose(&ins).expect("shapes"), "M⊗1⊗A"), "M⊗1⊗A")?;
        t1.compose(&self.theta)
            .expect("shapes")
            .agree(&t2.compose(&self.theta).expect("shapes"), "cocycle condition")?;

        let act = ctx(m.action().reframe(self.tensor.ambient().space(), m.space()), "μ̄")?;
        let mu = ctx(self.tensor.induced(&act, "μ̄"), "μ̄")?;
        mu.compose(&self.theta)
            .expect("shapes")
            .agree(&GradedLinearMap::identity(m.space()), "counit condition")
    }
}

/// `Can(M) = (M ⊗_B A, [m ⊗ a] ↦ [[m ⊗ 1] ⊗ a])` for a right `B`-module `M`.
pub fn can<F: Field>(m: &DgModule<F>, a: &ChainAlgebra<F>, phi: &GradedLinearMap<F>) -> Result<DescentDatum<F>> {
    let b = m.algebra();
    let f = a.field();
    let n = m.space().max_degree();
    let (_, la) = restricted_modules(b, a, phi)?;
    let ma = crate::hopfgalois::tensor_over_algebra(m, &la)?;
    let right = ma.induced_right_action(a.mul(), a.space())?;
    let module = DgModule::new(Side::Right, a.clone(), ma.complex().clone(), right)?;
    let tensor = over_b(&module, b, a, phi, 1)?;
    let (ms, asp) = (m.space(), a.space());
    let maa = TensorSpace::new(f, vec![ms.clone(), asp.clone(), asp.clone()], n);
    let ins = ma.ambient().apply(1, 0, a.unit(), std::slice::from_ref(asp), &maa)?;
    let nested = TensorSpace::new(f, vec![ma.ambient().space().clone(), asp.clone()], n);
    let un = unflatten(&maa, &[Some(ma.ambient()), None], &nested)?;
    let pa = TensorSpace::tensor_maps(&[ma.projection(), &GradedLinearMap::identity(asp)], &nested, tensor.ambient())?;
    let theta_amb = tensor.projection().compose(&pa)?.compose(&un)?.compose(&ins)?;
    let theta = ma.induced(&theta_amb, "θ_M")?;
    Ok(DescentDatum {
        module,
        base: b.clone(),
        phi: phi.clone(),
        tensor,
        theta,
    })
}

/// `Coinv(N, θ)`: the equalizer of `θ` and `n ↦ n ⊗ 1`, as a right `B`-module,
/// with its inclusion into `N`.
pub fn coinv<F: Field>(datum: &DescentDatum<F>) -> Result<(DgModule<F>, GradedLinearMap<F>)> {
    let eq = datum.theta.equalizer(&datum.unit_map()?)?;
    let (sub, _) = datum.module.complex().subcomplex(&eq.inclusion)?;
    let nb = restrict(&datum.module, &datum.base, &datum.phi)?;
    let f = datum.base.field();
    let n = datum.module.space().max_degree();
    let sb = TensorSpace::new(f, vec![sub.space().clone(), datum.base.space().clone()], n);
    let incl_b = TensorSpace::tensor_maps(&[&eq.inclusion, &GradedLinearMap::identity(datum.base.space())], &sb, &nb.action_space())?;
    let action = nb
        .action()
        .compose(&incl_b)?
        .factor_through(&eq.inclusion)
        .map_err(|_| Error::Invalid(Violation::new("coinvariants are a B-submodule", 0, "action leaves the equalizer")))?;
    Ok((DgModule::new(Side::Right, datum.base.clone(), sub, action)?, eq.inclusion))
}

/// `η_M : M -> Coinv(Can(M))`, `m ↦ [m ⊗ 1]`.
pub fn descent_unit<F: Field>(m: &DgModule<F>, a: &ChainAlgebra<F>, phi: &GradedLinearMap<F>) -> Result<ChainMap<F>> {
    let datum = can(m, a, phi)?;
    let (co, incl) = coinv(&datum)?;
    let b = m.algebra();
    let (_, la) = restricted_modules(b, a, phi)?;
    let ma = crate::hopfgalois::tensor_over_algebra(m, &la)?;
    let f = a.field();
    let n = m.space().max_degree();
    let single = TensorSpace::new(f, vec![m.space().clone()], n);
    let ins = single.apply(1, 0, a.unit(), std::slice::from_ref(a.space()), ma.ambient())?;
    let to_ma = ma.project(&ins.reframe(m.space(), ma.ambient().space())?)?;
    let g = to_ma.factor_through(&incl)?;
    let map = ChainMap::new(m.complex().clone(), co.complex().clone(), g)?;
    map.validate().map_err(|v| Error::Invalid(v.within("η_M")))?;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::hopfgalois::{trivial_extension, truncate_algebra, unit_extension};
    use crate::linalg::{PrimeField, Rationals};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn trivial_coring_over_the_ground_field() {
        let q = Rationals;
        let c = corpus::cp2_coalgebra(&q, 5);
        let k = ChainAlgebra::ground(&q, 5);
        let w = trivial_coring(&k, &c, 5).unwrap();
        assert!(w.validate().is_ok(), "{:?}", w.validate());
        assert!(w.space().same_dims(c.space()));
    }

    #[test]
    fn trivial_coring_over_an_algebra() {
        let f = f2();
        let a = corpus::exterior_bimonoid(&f, 1, 5).algebra().clone();
        let c = corpus::sphere_coalgebra(&f, 2, 5);
        let w = trivial_coring(&a, &c, 5).unwrap();
        assert!(w.validate().is_ok(), "{:?}", w.validate());
    }

    #[test]
    fn rho_and_canonical_corings_and_galois_morphism() {
        let f = f2();
        let b = truncate_algebra(corpus::exterior_bimonoid(&f, 1, 6).algebra(), 6).unwrap();
        let h = corpus::exterior_bimonoid(&f, 2, 6);
        let ext = trivial_extension(&b, &h, 6).unwrap();
        let check = galois_as_coring_morphism(&ext).unwrap();
        assert!(check.rho.validate().is_ok(), "{:?}", check.rho.validate());
        assert!(check.canonical.validate().is_ok(), "{:?}", check.canonical.validate());
        assert!(check.verdict.is_ok(), "{:?}", check.verdict);
        let bad_psi = check.rho.psi().scale(&f.zero());
        let bad = check.rho.with_psi(bad_psi).unwrap();
        assert!(validate_coring_morphism(&check.beta, &check.canonical, &bad).is_err());
    }

    #[test]
    fn canonical_coring_of_identity() {
        let q = Rationals;
        let a = corpus::exterior_bimonoid(&q, 3, 6).algebra().clone();
        let id = GradedLinearMap::identity(a.space());
        let w = canonical_coring(&a, &a, &id).unwrap();
        assert!(w.space().same_dims(a.space()));
        assert!(w.validate().is_ok());
        assert!(w.psi().inverse().is_ok());
    }

    #[test]
    fn counit_is_not_a_coring_morphism() {
        let q = Rationals;
        let c = corpus::sphere_coalgebra(&q, 2, 4);
        let k = ChainAlgebra::ground(&q, 4);
        let w = trivial_coring(&k, &c, 4).unwrap();
        let unit_c = corpus::unit_bimonoid(&q, 4);
        let w0 = trivial_coring(&k, unit_c.coalgebra(), 4).unwrap();
        assert!(validate_coring_morphism(&GradedLinearMap::identity(w.space()), &w, &w).is_ok());
        let e = w.eps().clone();
        assert!(validate_coring_morphism(&e, &w, &w0).is_ok());
        let twice = e.scale(&q.from_i64(2));
        assert!(validate_coring_morphism(&twice, &w, &w0).is_err());
    }

    #[test]
    fn descent_for_trivial_extensions() {
        let f = f2();
        let h = corpus::exterior_bimonoid(&f, 2, 6);
        let b = truncate_algebra(corpus::exterior_bimonoid(&f, 1, 6).algebra(), 6).unwrap();
        let ext = trivial_extension(&b, &h, 6).unwrap();
        let a = ext.algebra().algebra();
        let m = DgModule::regular(&b, Side::Right);
        let datum = can(&m, a, ext.phi().map()).unwrap();
        assert!(datum.validate().is_ok(), "{:?}", datum.validate());
        let unit = descent_unit(&m, a, ext.phi().map()).unwrap();
        assert!(unit.map().inverse().is_ok());
        let (co, _) = coinv(&datum).unwrap();
        assert!(co.space().same_dims(b.space()));
    }

    #[test]
    fn descent_along_identity() {
        let q = Rationals;
        let a = corpus::exterior_bimonoid(&q, 3, 6).algebra().clone();
        let id = GradedLinearMap::identity(a.space());
        let m = DgModule::regular(&a, Side::Right);
        let unit = descent_unit(&m, &a, &id).unwrap();
        assert!(unit.map().inverse().is_ok());
    }

    #[test]
    fn pushforward_and_cotensor() {
        let f = f2();
        let h = corpus::exterior_bimonoid(&f, 2, 6);
        let ext = unit_extension(&h).unwrap();
        let check = galois_as_coring_morphism(&ext).unwrap();
        let reg = CoringComodule::regular(&check.canonical).unwrap();
        assert!(reg.validate().is_ok(), "{:?}", reg.validate());
        let pushed = pushforward(&check.beta, &check.rho, &reg).unwrap();
        assert!(pushed.validate().is_ok(), "{:?}", pushed.validate());
        let same = pushforward(&GradedLinearMap::identity(check.rho.space()), &check.rho, &pushed).unwrap();
        assert!(same.theta() == pushed.theta());

        let wr = CoringComodule::regular(&check.rho).unwrap();
        let id = GradedLinearMap::identity(check.rho.space());
        let (co, _) = cotensor_over_coring(&wr, &id, &check.rho).unwrap();
        assert!(co.module().space().same_dims(check.rho.space()));
        assert!(co.validate().is_ok(), "{:?}", co.validate());
    }
}
