//! Chain coalgebras, chain algebras, bimonoids and dg-modules.
//!
//! Structure maps live on flat tensor spaces truncated at the carrier's
//! `max_degree`: `Δ : C -> C ⊗ C`, `μ : A ⊗ A -> A`, and units and counits
//! go to and from the one-dimensional unit space.

use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result, Verdict, Violation};
use crate::linalg::{Field, GradedLinearMap, GradedVectorSpace, Matrix, TensorSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// `V^{⊗n}` truncated at `V`'s max degree.
pub fn power<F: Field>(v: &GradedVectorSpace<F>, n: usize) -> TensorSpace<F> {
    TensorSpace::new(v.field(), vec![v.clone(); n], v.max_degree())
}

fn check_space<F: Field>(want: &GradedVectorSpace<F>, got: &GradedVectorSpace<F>, what: &str) -> Result<()> {
    if let Some(k) = want.first_dim_difference(got) {
        return Err(Error::DimensionMismatch {
            degree: k,
            detail: format!("{what}: expected {}, found {}", want.dim(k), got.dim(k)),
        });
    }
    Ok(())
}

fn with_context(v: Verdict, ctx: &str) -> Verdict {
    v.map_err(|e| e.within(ctx))
}

#[derive(Clone, Debug)]
pub struct ChainCoalgebra<F: Field> {
    complex: ChainComplex<F>,
    comul: GradedLinearMap<F>,
    counit: GradedLinearMap<F>,
    coaug: Option<GradedLinearMap<F>>,
}

impl<F: Field> ChainCoalgebra<F> {
    pub fn new(
        complex: ChainComplex<F>,
        comul: GradedLinearMap<F>,
        counit: GradedLinearMap<F>,
        coaug: Option<GradedLinearMap<F>>,
    ) -> Result<Self> {
        let c = complex.space();
        let unit = GradedVectorSpace::unit(complex.field());
        check_space(c, comul.source(), "comultiplication source")?;
        check_space(power(c, 2).space(), comul.target(), "comultiplication target")?;
        check_space(c, counit.source(), "counit source")?;
        check_space(&unit, counit.target(), "counit target")?;
        if comul.shift() != 0 || counit.shift() != 0 {
            return Err(Error::Shape("structure maps have degree 0".into()));
        }
        let comul = comul.reframe(c, power(c, 2).space())?;
        let counit = counit.reframe(c, &unit)?;
        let coaug = match coaug {
            Some(e) => {
                check_space(&unit, e.source(), "coaugmentation source")?;
                check_space(c, e.target(), "coaugmentation target")?;
                Some(e.reframe(&unit, c)?)
            }
            None => None,
        };
        Ok(ChainCoalgebra {
            complex,
            comul,
            counit,
            coaug,
        })
    }

    /// The ground field with its canonical coalgebra structure.
    pub fn unit(field: &F, max_degree: usize) -> Self {
        let c = ChainComplex::unit(field).with_max_degree(max_degree);
        let one = |_: usize, _: usize| vec![(0, field.one())];
        let s = c.space().clone();
        let u = GradedVectorSpace::unit(field);
        ChainCoalgebra {
            comul: GradedLinearMap::from_columns(&s, power(&s, 2).space(), 0, one),
            counit: GradedLinearMap::from_columns(&s, &u, 0, one),
            coaug: Some(GradedLinearMap::from_columns(&u, &s, 0, one)),
            complex: c,
        }
    }

    pub fn field(&self) -> &F {
        self.complex.field()
    }
    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.complex.space()
    }
    pub fn comul(&self) -> &GradedLinearMap<F> {
        &self.comul
    }
    pub fn counit(&self) -> &GradedLinearMap<F> {
        &self.counit
    }
    pub fn coaug(&self) -> Option<&GradedLinearMap<F>> {
        self.coaug.as_ref()
    }
    pub fn max_degree(&self) -> usize {
        self.complex.max_degree()
    }

    /// `C_0 = k` and `C_1 = 0`.
    pub fn one_connected(&self) -> bool {
        self.complex.dim(0) == 1 && self.complex.dim(1) == 0
    }

    /// `C ⊗ C` at the working truncation.
    pub fn pair_space(&self) -> TensorSpace<F> {
        power(self.space(), 2)
    }

    /// Truncate or pad to a new working degree.
    pub fn with_max_degree(&self, n: usize) -> Self {
        let c = self.complex.with_max_degree(n);
        let s = c.space().clone();
        let u = GradedVectorSpace::unit(self.field());
        let cc = power(&s, 2);
        let old = self.pair_space();
        let comul = GradedLinearMap::from_columns(&s, cc.space(), 0, |k, j| {
            let col = self.comul.column(k, j);
            col.into_iter()
                .enumerate()
                .filter_map(|(i, v)| cc.index_of(&old.basis(k)[i]).map(|(_, t)| (t, v)))
                .collect()
        });
        ChainCoalgebra {
            comul,
            counit: self.counit.reframe(&s, &u).expect("same dims"),
            coaug: self.coaug.as_ref().map(|e| e.reframe(&u, &s).expect("same dims")),
            complex: c,
        }
    }

    pub fn validate(&self) -> Verdict {
        let f = self.field();
        with_context(self.complex.validate(), "complex")?;
        let c = self.space();
        let cc = self.pair_space();
        let ccc = power(c, 3);
        let unit = GradedVectorSpace::unit(f);
        let one = TensorSpace::new(f, vec![c.clone()], c.max_degree());

        let dcc = ChainComplex::on_tensor(&cc, &[&self.complex, &self.complex]).expect("tensor differential");
        let lhs = dcc.d().compose(&self.comul).expect("shapes");
        let rhs = self.comul.compose(self.complex.d()).expect("shapes");
        lhs.agree(&rhs, "Δ is a chain map")?;
        self.counit
            .compose(self.complex.d())
            .expect("shapes")
            .vanishes("ε is a chain map")?;

        let left = cc.apply(0, 1, &self.comul, &[c.clone(), c.clone()], &ccc).expect("apply Δ");
        let right = cc.apply(1, 1, &self.comul, &[c.clone(), c.clone()], &ccc).expect("apply Δ");
        let a = left.compose(&self.comul).expect("shapes");
        let b = right.compose(&self.comul).expect("shapes");
        a.agree(&b, "coassociativity")?;

        let id = GradedLinearMap::identity(one.space());
        for pos in 0..2 {
            let e = cc.apply(pos, 1, &self.counit, &[], &one).expect("apply ε");
            e.compose(&self.comul)
                .expect("shapes")
                .agree(&id, if pos == 0 { "left counit" } else { "right counit" })?;
        }

        if let Some(eta) = &self.coaug {
            let unit_id = GradedLinearMap::identity(&unit);
            self.counit.compose(eta).expect("shapes").agree(&unit_id, "ε∘η = id")?;
            self.complex.d().compose(eta).expect("shapes").vanishes("η is a chain map")?;
            let uu = TensorSpace::new(f, vec![unit.clone(), unit.clone()], c.max_degree());
            let eta2 = TensorSpace::tensor_maps(&[eta, eta], &uu, &cc).expect("η⊗η");
            let to_uu = GradedLinearMap::from_columns(&unit, uu.space(), 0, |_, _| vec![(0, f.one())]);
            let a = self.comul.compose(eta).expect("shapes");
            let b = eta2.compose(&to_uu).expect("shapes");
            a.agree(&b, "Δ∘η = η⊗η")?;
        }
        Ok(())
    }

    /// `C ⊗ D` with `Δ = (1 ⊗ τ ⊗ 1)(Δ ⊗ Δ)` and `ε = ε ⊗ ε`, truncated at `n`.
    pub fn tensor(&self, other: &Self, n: usize) -> Result<Self> {
        let f = self.field();
        let (c, d) = (self.space(), other.space());
        let cd = TensorSpace::new(f, vec![c.clone(), d.clone()], n);
        let cx = ChainComplex::on_tensor(&cd, &[&self.complex, &other.complex])?;
        let ccd = cd.replaced(0, 1, &[c.clone(), c.clone()], n);
        let ccdd = ccd.replaced(2, 1, &[d.clone(), d.clone()], n);
        let m1 = cd.apply(0, 1, &self.comul, &[c.clone(), c.clone()], &ccd)?;
        let m2 = ccd.apply(2, 1, &other.comul, &[d.clone(), d.clone()], &ccdd)?;
        let (cdcd, swap) = ccdd.permute(&[0, 2, 1, 3])?;
        let grouped = cdcd.regroup(&[2, 2])?;
        let comul = grouped.to_grouped.compose(&swap)?.compose(&m2)?.compose(&m1)?;

        let unit = GradedVectorSpace::unit(f);
        let d1 = cd.replaced(0, 1, &[], n);
        let e1 = cd.apply(0, 1, &self.counit, &[], &d1)?;
        let e0 = TensorSpace::new(f, vec![], n);
        let e2 = d1.apply(0, 1, &other.counit, &[], &e0)?;
        let counit = e2.compose(&e1)?.reframe(cx.space(), &unit)?;

        let coaug = match (&self.coaug, &other.coaug) {
            (Some(a), Some(b)) => {
                let uu = TensorSpace::new(f, vec![unit.clone(), unit.clone()], n);
                let t = TensorSpace::tensor_maps(&[a, b], &uu, &cd)?;
                let to_uu = GradedLinearMap::from_columns(&unit, uu.space(), 0, |_, _| vec![(0, f.one())]);
                Some(t.compose(&to_uu)?)
            }
            _ => None,
        };
        let comul = comul.reframe(cx.space(), grouped.outer.space())?;
        ChainCoalgebra::new(cx, comul, counit, coaug)
    }
}

#[derive(Clone, Debug)]
pub struct ChainAlgebra<F: Field> {
    complex: ChainComplex<F>,
    mul: GradedLinearMap<F>,
    unit: GradedLinearMap<F>,
}

impl<F: Field> ChainAlgebra<F> {
    pub fn new(complex: ChainComplex<F>, mul: GradedLinearMap<F>, unit: GradedLinearMap<F>) -> Result<Self> {
        let a = complex.space();
        let u = GradedVectorSpace::unit(complex.field());
        check_space(power(a, 2).space(), mul.source(), "multiplication source")?;
        check_space(a, mul.target(), "multiplication target")?;
        check_space(&u, unit.source(), "unit source")?;
        check_space(a, unit.target(), "unit target")?;
        if mul.shift() != 0 || unit.shift() != 0 {
            return Err(Error::Shape("structure maps have degree 0".into()));
        }
        let mul = mul.reframe(power(a, 2).space(), a)?;
        let unit = unit.reframe(&u, a)?;
        Ok(ChainAlgebra { complex, mul, unit })
    }

    /// The ground field as an algebra.
    pub fn ground(field: &F, max_degree: usize) -> Self {
        let c = ChainComplex::unit(field).with_max_degree(max_degree);
        let s = c.space().clone();
        let u = GradedVectorSpace::unit(field);
        let one = |_: usize, _: usize| vec![(0, field.one())];
        ChainAlgebra {
            mul: GradedLinearMap::from_columns(power(&s, 2).space(), &s, 0, one),
            unit: GradedLinearMap::from_columns(&u, &s, 0, one),
            complex: c,
        }
    }

    pub fn field(&self) -> &F {
        self.complex.field()
    }
    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.complex.space()
    }
    pub fn mul(&self) -> &GradedLinearMap<F> {
        &self.mul
    }
    pub fn unit(&self) -> &GradedLinearMap<F> {
        &self.unit
    }
    pub fn max_degree(&self) -> usize {
        self.complex.max_degree()
    }
    pub fn pair_space(&self) -> TensorSpace<F> {
        power(self.space(), 2)
    }

    pub fn validate(&self) -> Verdict {
        let f = self.field();
        with_context(self.complex.validate(), "complex")?;
        let a = self.space();
        let aa = self.pair_space();
        let aaa = power(a, 3);
        let one = TensorSpace::new(f, vec![a.clone()], a.max_degree());

        let daa = ChainComplex::on_tensor(&aa, &[&self.complex, &self.complex]).expect("tensor differential");
        let lhs = self.mul.compose(daa.d()).expect("shapes");
        let rhs = self.complex.d().compose(&self.mul).expect("shapes");
        lhs.agree(&rhs, "μ is a chain map (Leibniz rule)")?;
        self.complex.d().compose(&self.unit).expect("shapes").vanishes("η is a chain map")?;

        let l = aaa.apply(0, 2, &self.mul, std::slice::from_ref(a), &aa).expect("apply μ");
        let r = aaa.apply(1, 2, &self.mul, std::slice::from_ref(a), &aa).expect("apply μ");
        let x = self.mul.compose(&l).expect("shapes");
        let y = self.mul.compose(&r).expect("shapes");
        x.agree(&y, "associativity")?;

        let id = GradedLinearMap::identity(one.space());
        for pos in 0..2 {
            let e = one.apply(pos, 0, &self.unit, std::slice::from_ref(a), &aa).expect("apply η");
            self.mul
                .compose(&e)
                .expect("shapes")
                .reframe(one.space(), one.space())
                .expect("same dims")
                .agree(&id, if pos == 0 { "left unit" } else { "right unit" })?;
        }
        Ok(())
    }

    /// `A ⊗ B` with `μ = (μ ⊗ μ)(1 ⊗ τ ⊗ 1)`, truncated at `n`.
    pub fn tensor(&self, other: &Self, n: usize) -> Result<Self> {
        let f = self.field();
        let (a, b) = (self.space(), other.space());
        let ab = TensorSpace::new(f, vec![a.clone(), b.clone()], n);
        let cx = ChainComplex::on_tensor(&ab, &[&self.complex, &other.complex])?;
        let abab = TensorSpace::new(f, vec![a.clone(), b.clone(), a.clone(), b.clone()], n);
        let grouped = abab.regroup(&[2, 2])?;
        let (aabb, swap) = abab.permute(&[0, 2, 1, 3])?;
        let abb = aabb.replaced(0, 2, std::slice::from_ref(a), n);
        let m1 = aabb.apply(0, 2, &self.mul, std::slice::from_ref(a), &abb)?;
        let m2 = abb.apply(1, 2, &other.mul, std::slice::from_ref(b), &ab)?;
        let mul = m2.compose(&m1)?.compose(&swap)?.compose(&grouped.from_grouped)?;

        let unit = GradedVectorSpace::unit(f);
        let uu = TensorSpace::new(f, vec![unit.clone(), unit.clone()], n);
        let t = TensorSpace::tensor_maps(&[&self.unit, &other.unit], &uu, &ab)?;
        let to_uu = GradedLinearMap::from_columns(&unit, uu.space(), 0, |_, _| vec![(0, f.one())]);
        let u = t.compose(&to_uu)?;
        let pair = power(cx.space(), 2);
        let mul = mul.reframe(pair.space(), cx.space())?;
        ChainAlgebra::new(cx, mul, u)
    }
}

/// An algebra and a coalgebra on the same complex.
#[derive(Clone, Debug)]
pub struct Bimonoid<F: Field> {
    algebra: ChainAlgebra<F>,
    coalgebra: ChainCoalgebra<F>,
}

impl<F: Field> Bimonoid<F> {
    /// The coaugmentation of the coalgebra is set to the algebra unit.
    pub fn new(algebra: ChainAlgebra<F>, coalgebra: ChainCoalgebra<F>) -> Result<Self> {
        check_space(algebra.space(), coalgebra.space(), "bimonoid carriers")?;
        let coalgebra = ChainCoalgebra::new(
            algebra.complex().clone(),
            coalgebra.comul.clone(),
            coalgebra.counit.clone(),
            Some(algebra.unit().clone()),
        )?;
        Ok(Bimonoid { algebra, coalgebra })
    }

    pub fn algebra(&self) -> &ChainAlgebra<F> {
        &self.algebra
    }
    pub fn coalgebra(&self) -> &ChainCoalgebra<F> {
        &self.coalgebra
    }
    pub fn field(&self) -> &F {
        self.algebra.field()
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.algebra.space()
    }
    pub fn complex(&self) -> &ChainComplex<F> {
        self.algebra.complex()
    }
    pub fn max_degree(&self) -> usize {
        self.algebra.max_degree()
    }

    pub fn validate(&self) -> Verdict {
        with_context(self.algebra.validate(), "algebra")?;
        with_context(self.coalgebra.validate(), "coalgebra")?;
        let f = self.field();
        let h = self.space();
        let hh = power(h, 2);
        let n = h.max_degree();

        let delta_mu = self.coalgebra.comul().compose(self.algebra.mul()).expect("shapes");
        let ddd = (|| -> Result<GradedLinearMap<F>> {
            let hhh = hh.replaced(1, 1, &[h.clone(), h.clone()], n);
            let hhhh = power(h, 4);
            let d1 = hh.apply(1, 1, self.coalgebra.comul(), &[h.clone(), h.clone()], &hhh)?;
            let d0 = hhh.apply(0, 1, self.coalgebra.comul(), &[h.clone(), h.clone()], &hhhh)?;
            let (sw, swap) = hhhh.permute(&[0, 2, 1, 3])?;
            let m3 = sw.replaced(0, 2, std::slice::from_ref(h), n);
            let mu0 = sw.apply(0, 2, self.algebra.mul(), std::slice::from_ref(h), &m3)?;
            let mu1 = m3.apply(1, 2, self.algebra.mul(), std::slice::from_ref(h), &hh)?;
            mu1.compose(&mu0)?.compose(&swap)?.compose(&d0)?.compose(&d1)
        })()
        .expect("bimonoid composite");
        delta_mu.agree(&ddd, "Δ is multiplicative")?;

        let e_mu = self.coalgebra.counit().compose(self.algebra.mul()).expect("shapes");
        let unit = GradedVectorSpace::unit(f);
        let uu = TensorSpace::new(f, vec![unit.clone(), unit.clone()], n);
        let ee = TensorSpace::tensor_maps(&[self.coalgebra.counit(), self.coalgebra.counit()], &hh, &uu)
            .expect("ε⊗ε")
            .reframe(hh.space(), &uu.space().with_max_degree(0))
            .expect("degree 0");
        let from_uu = GradedLinearMap::from_columns(ee.target(), &unit, 0, |_, _| vec![(0, f.one())]);
        e_mu.agree(&from_uu.compose(&ee).expect("shapes"), "ε is multiplicative")?;
        Ok(())
    }
}

/// Per-degree matrices of `β_η = (μ ⊗ H)(H ⊗ Δ)` with iso and quasi-iso verdicts.
#[derive(Clone, Debug)]
pub struct HopfReport<F: Field> {
    pub matrices: Vec<Matrix<F>>,
    pub iso: Verdict,
    /// `None` when `upto` is beyond the reliable homology range.
    pub quasi_iso: Option<Verdict>,
}

/// `β_η : H ⊗ H -> H ⊗ H`.
pub fn beta_eta<F: Field>(h: &Bimonoid<F>) -> Result<GradedLinearMap<F>> {
    let s = h.space();
    let hh = power(s, 2);
    let hhh = power(s, 3);
    let d = hh.apply(1, 1, h.coalgebra().comul(), &[s.clone(), s.clone()], &hhh)?;
    let m = hhh.apply(0, 2, h.algebra().mul(), std::slice::from_ref(s), &hh)?;
    m.compose(&d)
}

pub fn hopf_monoid_check<F: Field>(h: &Bimonoid<F>, upto: usize) -> Result<HopfReport<F>> {
    if upto > h.max_degree() {
        return Err(crate::error::range_error(upto, Some(h.max_degree())));
    }
    let beta = beta_eta(h)?;
    let matrices: Vec<_> = (0..=upto).map(|k| beta.block(k).into_owned()).collect();
    let mut iso = Ok(());
    for (k, m) in matrices.iter().enumerate() {
        if m.rows() != m.cols() || m.rank() != m.cols() {
            iso = Err(Violation::new(
                "β_η is an isomorphism",
                k,
                format!("{}x{} block of rank {}", m.rows(), m.cols(), m.rank()),
            ));
            break;
        }
    }
    let hh = power(h.space(), 2);
    let cx = ChainComplex::on_tensor(&hh, &[h.complex(), h.complex()])?;
    let quasi_iso = match cx.reliable_up_to() {
        Some(r) if upto <= r => {
            let map = ChainMap::new(cx.clone(), cx, beta)?;
            Some(map.is_quasi_iso(upto)?)
        }
        _ => None,
    };
    Ok(HopfReport {
        matrices,
        iso,
        quasi_iso,
    })
}

/// A dg-module: `M ⊗ A -> M` (right) or `A ⊗ M -> M` (left).
#[derive(Clone, Debug)]
pub struct DgModule<F: Field> {
    side: Side,
    algebra: ChainAlgebra<F>,
    complex: ChainComplex<F>,
    action: GradedLinearMap<F>,
}

impl<F: Field> DgModule<F> {
    pub fn new(side: Side, algebra: ChainAlgebra<F>, complex: ChainComplex<F>, action: GradedLinearMap<F>) -> Result<Self> {
        let m = complex.space();
        let n = m.max_degree();
        let ts = Self::action_space_of(side, m, algebra.space(), n);
        check_space(ts.space(), action.source(), "action source")?;
        check_space(m, action.target(), "action target")?;
        let action = action.reframe(ts.space(), m)?;
        Ok(DgModule {
            side,
            algebra,
            complex,
            action,
        })
    }

    fn action_space_of(side: Side, m: &GradedVectorSpace<F>, a: &GradedVectorSpace<F>, n: usize) -> TensorSpace<F> {
        let fs = match side {
            Side::Right => vec![m.clone(), a.clone()],
            Side::Left => vec![a.clone(), m.clone()],
        };
        TensorSpace::new(m.field(), fs, n)
    }

    /// The domain of the action, `M ⊗ A` or `A ⊗ M`.
    pub fn action_space(&self) -> TensorSpace<F> {
        Self::action_space_of(self.side, self.space(), self.algebra.space(), self.space().max_degree())
    }

    /// The algebra acting on itself from `side`.
    pub fn regular(algebra: &ChainAlgebra<F>, side: Side) -> Self {
        DgModule {
            side,
            complex: algebra.complex().clone(),
            action: algebra.mul().clone(),
            algebra: algebra.clone(),
        }
    }

    pub fn side(&self) -> Side {
        self.side
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
    pub fn action(&self) -> &GradedLinearMap<F> {
        &self.action
    }

    pub fn validate(&self) -> Verdict {
        let f = self.complex.field();
        with_context(self.complex.validate(), "complex")?;
        let m = self.space();
        let a = self.algebra.space();
        let n = m.max_degree();
        let ts = self.action_space();
        let apos = match self.side {
            Side::Right => 1,
            Side::Left => 0,
        };
        let ds = match self.side {
            Side::Right => [self.complex.d(), self.algebra.complex().d()],
            Side::Left => [self.algebra.complex().d(), self.complex.d()],
        };
        let dts = ts.differential(&ds).expect("tensor differential");
        let lhs = self.action.compose(&dts).expect("shapes");
        let rhs = self.complex.d().compose(&self.action).expect("shapes");
        lhs.agree(&rhs, "action is a chain map")?;

        let (three, first_pos, second_pos) = match self.side {
            Side::Right => (TensorSpace::new(f, vec![m.clone(), a.clone(), a.clone()], n), 0, 1),
            Side::Left => (TensorSpace::new(f, vec![a.clone(), a.clone(), m.clone()], n), 1, 0),
        };
        let act = three.apply(first_pos, 2, &self.action, std::slice::from_ref(m), &ts).expect("apply action");
        let mu = three.apply(second_pos, 2, self.algebra.mul(), std::slice::from_ref(a), &ts).expect("apply μ");
        let x = self.action.compose(&act).expect("shapes");
        let y = self.action.compose(&mu).expect("shapes");
        x.agree(&y, "action is associative")?;

        let one = TensorSpace::new(f, vec![m.clone()], n);
        let e = one.apply(apos, 0, self.algebra.unit(), std::slice::from_ref(a), &ts).expect("apply η");
        let id = GradedLinearMap::identity(one.space());
        self.action
            .compose(&e)
            .expect("shapes")
            .reframe(one.space(), one.space())
            .expect("same dims")
            .agree(&id, "action is unital")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::{PrimeField, Rationals};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn unit_coalgebra_is_valid() {
        let c = ChainCoalgebra::unit(&Rationals, 4);
        assert!(c.validate().is_ok());
        assert!(c.one_connected());
    }

    #[test]
    fn sphere_coalgebra_is_valid() {
        let c = corpus::sphere_coalgebra(&f2(), 2, 6);
        assert!(c.validate().is_ok());
        assert!(c.one_connected());
    }

    #[test]
    fn broken_coassociativity_is_reported() {
        let f = f2();
        let c = corpus::sphere_coalgebra(&f, 2, 4);
        let s = c.space().clone();
        let bad = GradedLinearMap::from_columns(&s, c.pair_space().space(), 0, |k, _| {
            if k == 0 {
                vec![(0, f.one())]
            } else {
                vec![]
            }
        });
        let broken = ChainCoalgebra::new(c.complex().clone(), bad, c.counit().clone(), None).unwrap();
        let v = broken.validate().unwrap_err();
        assert!(v.check.contains("counit"), "{v}");
        assert_eq!(v.degree, 2);
    }

    #[test]
    fn exterior_bimonoid_over_f2() {
        let h = corpus::exterior_bimonoid(&f2(), 2, 8);
        assert!(h.validate().is_ok());
        let r = hopf_monoid_check(&h, 6).unwrap();
        assert!(r.iso.is_ok());
        assert_eq!(r.quasi_iso, Some(Ok(())));
        // basis {1⊗x, x⊗1}; in the order {x⊗1, 1⊗x} this is [[1,1],[0,1]]
        assert_eq!(r.matrices[2], Matrix::from_i64(&f2(), &[&[1, 0], &[1, 1]]));
        assert_eq!(r.matrices[4], Matrix::from_i64(&f2(), &[&[1]]));
    }

    #[test]
    fn even_exterior_is_not_a_bimonoid_over_q() {
        let h = corpus::exterior_bimonoid(&Rationals, 2, 8);
        assert!(h.validate().is_err());
        let h3 = corpus::exterior_bimonoid(&Rationals, 3, 8);
        assert!(h3.validate().is_ok());
    }

    #[test]
    fn unit_bimonoid_beta_is_identity() {
        let h = corpus::unit_bimonoid(&Rationals, 4);
        let b = beta_eta(&h).unwrap();
        assert_eq!(b, GradedLinearMap::identity(b.source()));
    }

    #[test]
    fn regular_modules_validate() {
        let h = corpus::exterior_bimonoid(&Rationals, 3, 8);
        for side in [Side::Left, Side::Right] {
            let m = DgModule::regular(h.algebra(), side);
            assert!(m.validate().is_ok(), "{side:?}");
        }
    }

    #[test]
    fn tensor_coalgebra_validates() {
        let q = Rationals;
        let a = corpus::sphere_coalgebra(&q, 3, 8);
        let b = corpus::cp2_coalgebra(&q, 8);
        let t = a.tensor(&b, 8).unwrap();
        assert!(t.validate().is_ok());
        assert_eq!(t.space().dims(), &[1, 0, 1, 1, 1, 1, 0, 1, 0]);
    }
}
