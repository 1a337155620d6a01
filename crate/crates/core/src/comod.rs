//! Comodules over chain coalgebras, cotensor products and coinvariants.
//!
//! A right coaction is a map `M -> M ⊗ C`, a left one `M -> C ⊗ M`; both are
//! stored on the flat tensor space truncated at `M`'s max degree.

use crate::algstruct::{power, Bimonoid, ChainAlgebra, ChainCoalgebra, Side};
use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result, Verdict, Violation};
use crate::linalg::{injections, projections, Field, GradedLinearMap, GradedVectorSpace, TensorSpace};

#[derive(Clone, Debug)]
pub struct Comodule<F: Field> {
    side: Side,
    coalgebra: ChainCoalgebra<F>,
    complex: ChainComplex<F>,
    coaction: GradedLinearMap<F>,
}

fn coaction_space_of<F: Field>(side: Side, m: &GradedVectorSpace<F>, c: &GradedVectorSpace<F>) -> TensorSpace<F> {
    let fs = match side {
        Side::Right => vec![m.clone(), c.clone()],
        Side::Left => vec![c.clone(), m.clone()],
    };
    TensorSpace::new(m.field(), fs, m.max_degree())
}

impl<F: Field> Comodule<F> {
    pub fn new(
        side: Side,
        coalgebra: ChainCoalgebra<F>,
        complex: ChainComplex<F>,
        coaction: GradedLinearMap<F>,
    ) -> Result<Self> {
        if coalgebra.field() != complex.field() {
            return Err(Error::FieldMismatch(coalgebra.field().spec(), complex.field().spec()));
        }
        let ts = coaction_space_of(side, complex.space(), coalgebra.space());
        for (what, want, got) in [
            ("coaction source", complex.space(), coaction.source()),
            ("coaction target", ts.space(), coaction.target()),
        ] {
            if let Some(k) = want.first_dim_difference(got) {
                return Err(Error::DimensionMismatch {
                    degree: k,
                    detail: format!("{what}: expected {}, found {}", want.dim(k), got.dim(k)),
                });
            }
        }
        if coaction.shift() != 0 {
            return Err(Error::Shape("coaction has degree 0".into()));
        }
        let coaction = coaction.reframe(complex.space(), ts.space())?;
        Ok(Comodule {
            side,
            coalgebra,
            complex,
            coaction,
        })
    }

    /// `C` coacting on itself by `Δ`.
    pub fn regular(coalgebra: &ChainCoalgebra<F>, side: Side) -> Self {
        Comodule {
            side,
            complex: coalgebra.complex().clone(),
            coaction: coalgebra.comul().clone(),
            coalgebra: coalgebra.clone(),
        }
    }

    /// The ground field with coaction `1 ↦ 1 ⊗ η(1)` (or `η(1) ⊗ 1`),
    /// truncated at the coalgebra's max degree.
    pub fn trivial(coalgebra: &ChainCoalgebra<F>, side: Side) -> Result<Self> {
        let eta = coalgebra.coaug().ok_or(Error::NotCoaugmented)?;
        let f = coalgebra.field();
        let complex = ChainComplex::unit(f).with_max_degree(coalgebra.max_degree());
        let ts = coaction_space_of(side, complex.space(), coalgebra.space());
        let col = eta.column(0, 0);
        let coaction = GradedLinearMap::from_columns(complex.space(), ts.space(), 0, |_, _| {
            col.iter()
                .enumerate()
                .filter(|(_, v)| !f.is_zero(v))
                .map(|(i, v)| {
                    let t = match side {
                        Side::Right => [(0, 0), (0, i)],
                        Side::Left => [(0, i), (0, 0)],
                    };
                    (ts.index_of(&t).expect("degree-0 tuple").1, v.clone())
                })
                .collect()
        });
        Comodule::new(side, coalgebra.clone(), complex, coaction)
    }

    /// The cofree right comodule `(X ⊗ C, X ⊗ Δ)`, truncated at `X`'s max degree.
    pub fn cofree(x: &ChainComplex<F>, coalgebra: &ChainCoalgebra<F>) -> Result<Self> {
        let f = x.field();
        let n = x.max_degree();
        let c = coalgebra.space();
        let xc = TensorSpace::new(f, vec![x.space().clone(), c.clone()], n);
        let complex = ChainComplex::on_tensor(&xc, &[x, coalgebra.complex()])?;
        let xcc = xc.replaced(1, 1, &[c.clone(), c.clone()], n);
        let delta = xc.apply(1, 1, coalgebra.comul(), &[c.clone(), c.clone()], &xcc)?;
        let grouped = xcc.regroup(&[2, 1])?;
        let coaction = grouped.to_grouped.compose(&delta)?;
        Comodule::new(Side::Right, coalgebra.clone(), complex, coaction)
    }

    pub fn side(&self) -> Side {
        self.side
    }
    pub fn coalgebra(&self) -> &ChainCoalgebra<F> {
        &self.coalgebra
    }
    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.complex.space()
    }
    pub fn coaction(&self) -> &GradedLinearMap<F> {
        &self.coaction
    }
    pub fn field(&self) -> &F {
        self.complex.field()
    }
    pub fn max_degree(&self) -> usize {
        self.complex.max_degree()
    }

    /// `M ⊗ C` (right) or `C ⊗ M` (left).
    pub fn coaction_space(&self) -> TensorSpace<F> {
        coaction_space_of(self.side, self.space(), self.coalgebra.space())
    }

    fn positions(&self) -> (usize, usize) {
        match self.side {
            Side::Right => (0, 1),
            Side::Left => (1, 0),
        }
    }

    pub fn validate(&self) -> Verdict {
        self.complex.validate().map_err(|v| v.within("complex"))?;
        let (m, c) = (self.space(), self.coalgebra.space());
        let n = m.max_degree();
        let ts = self.coaction_space();
        let dts = ChainComplex::on_tensor(
            &ts,
            &match self.side {
                Side::Right => [&self.complex, self.coalgebra.complex()],
                Side::Left => [self.coalgebra.complex(), &self.complex],
            },
        )
        .expect("tensor differential");
        let lhs = dts.d().compose(&self.coaction).expect("shapes");
        let rhs = self.coaction.compose(self.complex.d()).expect("shapes");
        lhs.agree(&rhs, "coaction is a chain map")?;

        let (mpos, cpos) = self.positions();
        let out_m = match self.side {
            Side::Right => vec![m.clone(), c.clone()],
            Side::Left => vec![c.clone(), m.clone()],
        };
        let three = ts.replaced(mpos, 1, &out_m, n);
        let again = ts.apply(mpos, 1, &self.coaction, &out_m, &three).expect("apply coaction");
        let split = ts
            .apply(cpos, 1, self.coalgebra.comul(), &[c.clone(), c.clone()], &three)
            .expect("apply Δ");
        let a = again.compose(&self.coaction).expect("shapes");
        let b = split.compose(&self.coaction).expect("shapes");
        a.agree(&b, "coaction is coassociative")?;

        let one = TensorSpace::new(self.field(), vec![m.clone()], n);
        let e = ts.apply(cpos, 1, self.coalgebra.counit(), &[], &one).expect("apply ε");
        let id = GradedLinearMap::identity(one.space());
        e.compose(&self.coaction).expect("shapes").agree(&id, "coaction is counital")?;

        for k in 0..=n {
            let r = self.coaction.rank(k);
            if r != m.dim(k) {
                return Err(Violation::new("coaction is injective", k, format!("rank {r} < {}", m.dim(k))));
            }
        }
        Ok(())
    }

    /// Change the truncation degree of the comodule (the coalgebra is padded as needed).
    pub fn with_max_degree(&self, n: usize) -> Result<Self> {
        let coalgebra = self.coalgebra.clone();
        let complex = self.complex.with_max_degree(n);
        let old = self.coaction_space();
        let ts = coaction_space_of(self.side, complex.space(), coalgebra.space());
        let coaction = GradedLinearMap::from_columns(complex.space(), ts.space(), 0, |k, j| {
            self.coaction
                .column(k, j)
                .into_iter()
                .enumerate()
                .filter_map(|(i, v)| ts.index_of(&old.basis(k)[i]).map(|(_, t)| (t, v)))
                .collect()
        });
        Comodule::new(self.side, coalgebra, complex, coaction)
    }

    /// `h ⊗ C` (or `C ⊗ h`) for a degree-0 map `h : M -> M'` into another comodule's carrier.
    pub fn lift_map(&self, h: &GradedLinearMap<F>, target: &Comodule<F>) -> Result<GradedLinearMap<F>> {
        let (mpos, _) = self.positions();
        self.coaction_space()
            .apply(mpos, 1, h, std::slice::from_ref(target.space()), &target.coaction_space())
    }

    /// The subcomodule on the image of an injective map whose image is a
    /// subcomodule; the restricted coaction is solved for exactly.
    pub fn subcomodule(&self, inclusion: &GradedLinearMap<F>) -> Result<(Comodule<F>, ComoduleMap<F>)> {
        let (sub_cx, _) = self.complex.subcomplex(inclusion)?;
        let sub_ts = coaction_space_of(self.side, sub_cx.space(), self.coalgebra.space());
        let (mpos, _) = self.positions();
        let incl_c = sub_ts.apply(mpos, 1, inclusion, std::slice::from_ref(self.space()), &self.coaction_space())?;
        let rho = self.coaction.compose(inclusion)?.factor_through(&incl_c)?;
        let sub = Comodule::new(self.side, self.coalgebra.clone(), sub_cx, rho)?;
        let map = ComoduleMap::new(sub.clone(), self.clone(), inclusion.clone())?;
        Ok((sub, map))
    }
}

/// A degree-0 map of comodules.
#[derive(Clone, Debug)]
pub struct ComoduleMap<F: Field> {
    source: Comodule<F>,
    target: Comodule<F>,
    map: GradedLinearMap<F>,
}

impl<F: Field> ComoduleMap<F> {
    pub fn new(source: Comodule<F>, target: Comodule<F>, map: GradedLinearMap<F>) -> Result<Self> {
        if source.side != target.side {
            return Err(Error::Precondition("comodule map between different sides".into()));
        }
        if map.shift() != 0 {
            return Err(Error::Shape("comodule maps have degree 0".into()));
        }
        let map = map.reframe(source.space(), target.space())?;
        Ok(ComoduleMap { source, target, map })
    }

    pub fn identity(m: &Comodule<F>) -> Self {
        ComoduleMap {
            source: m.clone(),
            target: m.clone(),
            map: GradedLinearMap::identity(m.space()),
        }
    }

    pub fn source(&self) -> &Comodule<F> {
        &self.source
    }
    pub fn target(&self) -> &Comodule<F> {
        &self.target
    }
    pub fn map(&self) -> &GradedLinearMap<F> {
        &self.map
    }

    pub fn chain_map(&self) -> ChainMap<F> {
        ChainMap::new(self.source.complex.clone(), self.target.complex.clone(), self.map.clone())
            .expect("shapes checked")
    }

    pub fn compose(&self, f: &ComoduleMap<F>) -> Result<Self> {
        Ok(ComoduleMap {
            source: f.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&f.map)?,
        })
    }

    /// Chain map and `(g ⊗ C) ∘ ρ = ρ' ∘ g`.
    pub fn validate(&self) -> Verdict {
        self.chain_map().validate()?;
        let lifted = self
            .source
            .lift_map(&self.map, &self.target)
            .map_err(|e| Violation::new("comodule map", 0, e.to_string()))?;
        let a = lifted.compose(&self.source.coaction).expect("shapes");
        let b = self.target.coaction.compose(&self.map).expect("shapes");
        a.agree(&b, "(g⊗C)∘ρ = ρ'∘g")
    }

    /// Kernel as a subcomodule of the source.
    pub fn kernel(&self) -> Result<(Comodule<F>, ComoduleMap<F>)> {
        self.source.subcomodule(&self.map.kernel().inclusion)
    }

    /// Cokernel comodule with its projection and a linear section.
    pub fn cokernel(&self) -> Result<(Comodule<F>, ComoduleMap<F>, GradedLinearMap<F>)> {
        let t = &self.target;
        let cok = self.map.cokernel();
        let (q, _) = t.complex.quotient(&cok)?;
        let q_ts = coaction_space_of(t.side, q.space(), t.coalgebra.space());
        let (mpos, _) = t.positions();
        let proj_c = t.coaction_space().apply(mpos, 1, &cok.projection, std::slice::from_ref(q.space()), &q_ts)?;
        let rho = proj_c.compose(&t.coaction)?.compose(&cok.section)?;
        let qm = Comodule::new(t.side, t.coalgebra.clone(), q, rho)?;
        let p = ComoduleMap::new(t.clone(), qm.clone(), cok.projection)?;
        Ok((qm, p, cok.section))
    }
}

/// `M ⊕ M'` with the induced coaction, and its two projections.
pub fn product_comodule<F: Field>(
    a: &Comodule<F>,
    b: &Comodule<F>,
) -> Result<(Comodule<F>, ComoduleMap<F>, ComoduleMap<F>)> {
    if a.side != b.side {
        return Err(Error::Precondition("product of comodules on different sides".into()));
    }
    let n = a.max_degree().max(b.max_degree());
    let a = a.with_max_degree(n)?;
    let b = b.with_max_degree(n)?;
    let complex = a.complex.direct_sum(&b.complex)?.with_max_degree(n);
    let s = complex.space().clone();
    let (i1, i2) = injections(a.space(), b.space());
    let (p1, p2) = projections(a.space(), b.space());
    let (i1, i2) = (i1.reframe(a.space(), &s)?, i2.reframe(b.space(), &s)?);
    let (p1, p2) = (p1.reframe(&s, a.space())?, p2.reframe(&s, b.space())?);
    let ts = coaction_space_of(a.side, &s, a.coalgebra.space());
    let pos = match a.side {
        Side::Right => 0,
        Side::Left => 1,
    };
    let j1 = a.coaction_space().apply(pos, 1, &i1, std::slice::from_ref(&s), &ts)?;
    let j2 = b.coaction_space().apply(pos, 1, &i2, std::slice::from_ref(&s), &ts)?;
    let rho = j1
        .compose(&a.coaction)?
        .compose(&p1)?
        .add(&j2.compose(&b.coaction)?.compose(&p2)?)?;
    let prod = Comodule::new(a.side, a.coalgebra.clone(), complex, rho)?;
    let q1 = ComoduleMap::new(prod.clone(), a.clone(), p1)?;
    let q2 = ComoduleMap::new(prod.clone(), b.clone(), p2)?;
    Ok((prod, q1, q2))
}

/// The pullback of `f : A -> X` and `g : B -> X`, as a subcomodule of `A ⊕ B`.
pub fn pullback<F: Field>(
    f: &ComoduleMap<F>,
    g: &ComoduleMap<F>,
) -> Result<(Comodule<F>, ComoduleMap<F>, ComoduleMap<F>)> {
    let (prod, q1, q2) = product_comodule(f.source(), g.source())?;
    let diff = f.map.compose(&q1.map)?.sub(&g.map.compose(&q2.map)?)?;
    let (pb, incl) = prod.subcomodule(&diff.kernel().inclusion)?;
    Ok((pb.clone(), q1.compose(&incl)?, q2.compose(&incl)?))
}

/// Equal carriers and structure maps, ignoring truncation padding.
pub fn same_coalgebra<F: Field>(a: &ChainCoalgebra<F>, b: &ChainCoalgebra<F>) -> bool {
    a.field() == b.field()
        && a.space().same_dims(b.space())
        && a.complex().d() == b.complex().d()
        && a.comul() == b.comul()
        && a.counit() == b.counit()
}

/// `M □_C N` with its inclusion into the ambient `M ⊗ N`.
#[derive(Clone, Debug)]
pub struct Cotensor<F: Field> {
    pub complex: ChainComplex<F>,
    pub ambient: TensorSpace<F>,
    pub inclusion: GradedLinearMap<F>,
}

/// The equalizer of `ρ ⊗ N` and `M ⊗ λ` in `M ⊗ C ⊗ N`.
pub fn cotensor<F: Field>(m: &Comodule<F>, n: &Comodule<F>) -> Result<Cotensor<F>> {
    if m.side != Side::Right || n.side != Side::Left {
        return Err(Error::Precondition("cotensor needs a right and a left comodule".into()));
    }
    if m.field() != n.field() {
        return Err(Error::FieldMismatch(m.field().spec(), n.field().spec()));
    }
    if !same_coalgebra(&m.coalgebra, &n.coalgebra) {
        return Err(Error::Precondition("comodules over different coalgebras".into()));
    }
    let f = m.field();
    let cap = m.max_degree().max(n.max_degree());
    let (ms, ns, cs) = (m.space(), n.space(), m.coalgebra.space());
    let mn = TensorSpace::new(f, vec![ms.clone(), ns.clone()], cap);
    let mcn = TensorSpace::new(f, vec![ms.clone(), cs.clone(), ns.clone()], cap);
    let r = mn.apply(0, 1, &m.coaction, &[ms.clone(), cs.clone()], &mcn)?;
    let l = mn.apply(1, 1, &n.coaction, &[cs.clone(), ns.clone()], &mcn)?;
    let eq = r.equalizer(&l)?;
    let tensor = ChainComplex::on_tensor(&mn, &[&m.complex, &n.complex])?;
    let (complex, _) = tensor.subcomplex(&eq.inclusion)?;
    Ok(Cotensor {
        complex,
        ambient: mn,
        inclusion: eq.inclusion,
    })
}

/// `M^{co C} = M □_C k`, with its inclusion expressed directly into `M`.
pub fn coinvariants<F: Field>(m: &Comodule<F>) -> Result<(ChainComplex<F>, GradedLinearMap<F>)> {
    let k = Comodule::trivial(&m.coalgebra, Side::Left)?;
    let ct = cotensor(m, &k)?;
    let f = m.field();
    let to_m = GradedLinearMap::from_columns(ct.ambient.space(), m.space(), 0, |d, j| {
        let t = &ct.ambient.basis(d)[j];
        if t[0].0 > m.max_degree() {
            vec![]
        } else {
            vec![(t[0].1, f.one())]
        }
    });
    let to_m = to_m.reframe(ct.ambient.space(), m.space())?;
    let incl = to_m.compose(&ct.inclusion)?;
    let complex = ct.complex.with_max_degree(m.max_degree());
    let incl = incl.reframe(complex.space(), m.space())?;
    Ok((complex, incl))
}

/// An algebra with a right coaction of a bimonoid that is an algebra map.
#[derive(Clone, Debug)]
pub struct ComoduleAlgebra<F: Field> {
    algebra: ChainAlgebra<F>,
    bimonoid: Bimonoid<F>,
    comodule: Comodule<F>,
}

impl<F: Field> ComoduleAlgebra<F> {
    pub fn new(algebra: ChainAlgebra<F>, bimonoid: Bimonoid<F>, coaction: GradedLinearMap<F>) -> Result<Self> {
        let comodule = Comodule::new(Side::Right, bimonoid.coalgebra().clone(), algebra.complex().clone(), coaction)?;
        Ok(ComoduleAlgebra {
            algebra,
            bimonoid,
            comodule,
        })
    }

    /// A bimonoid coacting on itself by `Δ`.
    pub fn regular(h: &Bimonoid<F>) -> Self {
        ComoduleAlgebra {
            algebra: h.algebra().clone(),
            bimonoid: h.clone(),
            comodule: Comodule::regular(h.coalgebra(), Side::Right),
        }
    }

    pub fn algebra(&self) -> &ChainAlgebra<F> {
        &self.algebra
    }
    pub fn bimonoid(&self) -> &Bimonoid<F> {
        &self.bimonoid
    }
    pub fn comodule(&self) -> &Comodule<F> {
        &self.comodule
    }
    pub fn coaction(&self) -> &GradedLinearMap<F> {
        self.comodule.coaction()
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.algebra.space()
    }
    pub fn field(&self) -> &F {
        self.algebra.field()
    }
    pub fn max_degree(&self) -> usize {
        self.algebra.max_degree()
    }

    pub fn validate(&self) -> Verdict {
        self.algebra.validate().map_err(|v| v.within("algebra"))?;
        self.comodule.validate().map_err(|v| v.within("comodule"))?;
        let f = self.field();
        let (a, h) = (self.space(), self.bimonoid.space());
        let n = a.max_degree();
        let aa = power(a, 2);
        let ah = self.comodule.coaction_space();
        let rhs = (|| -> Result<GradedLinearMap<F>> {
            let ahh = TensorSpace::new(f, vec![a.clone(), h.clone(), a.clone()], n);
            let r1 = aa.apply(0, 1, self.coaction(), &[a.clone(), h.clone()], &ahh)?;
            let ahah = ahh.replaced(2, 1, &[a.clone(), h.clone()], n);
            let r2 = ahh.apply(2, 1, self.coaction(), &[a.clone(), h.clone()], &ahah)?;
            let (aahh, swap) = ahah.permute(&[0, 2, 1, 3])?;
            let ahh2 = aahh.replaced(0, 2, std::slice::from_ref(a), n);
            let m1 = aahh.apply(0, 2, self.algebra.mul(), std::slice::from_ref(a), &ahh2)?;
            let m2 = ahh2.apply(1, 2, self.bimonoid.algebra().mul(), std::slice::from_ref(h), &ah)?;
            m2.compose(&m1)?.compose(&swap)?.compose(&r2)?.compose(&r1)
        })()
        .expect("comodule algebra composite");
        let lhs = self.coaction().compose(self.algebra.mul()).expect("shapes");
        lhs.agree(&rhs, "ρ is multiplicative")?;

        let unit = GradedVectorSpace::unit(f);
        let uu = TensorSpace::new(f, vec![unit.clone(), unit.clone()], n);
        let t = TensorSpace::tensor_maps(&[self.algebra.unit(), self.bimonoid.algebra().unit()], &uu, &ah)
            .expect("η⊗η");
        let to_uu = GradedLinearMap::from_columns(&unit, uu.space(), 0, |_, _| vec![(0, f.one())]);
        let a1 = self.coaction().compose(self.algebra.unit()).expect("shapes");
        a1.agree(&t.compose(&to_uu).expect("shapes"), "ρ is unital")
    }
}
