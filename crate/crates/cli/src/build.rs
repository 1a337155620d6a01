//! Turning a parsed document into library objects over a concrete field.

use std::collections::BTreeMap;

use hgx_core::algstruct::{power, Bimonoid, ChainAlgebra, ChainCoalgebra, DgModule, Side};
use hgx_core::chain::ChainComplex;
use hgx_core::comod::{Comodule, ComoduleAlgebra};
use hgx_core::hopfgalois::Extension;
use hgx_core::linalg::{Field, GradedLinearMap, GradedVectorSpace, TensorSpace};
use hgx_core::Error;

use crate::document::{Diagnostic, Document, Entry, ObjectDoc, ObjectKind, SideDoc};
use crate::RunError;

/// A built object.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Obj<F: Field> {
    Complex(ChainComplex<F>),
    Algebra(ChainAlgebra<F>),
    Coalgebra(ChainCoalgebra<F>),
    Bimonoid(Bimonoid<F>),
    Comodule(Comodule<F>),
    ComoduleAlgebra(ComoduleAlgebra<F>),
    Module(DgModule<F>),
}

impl<F: Field> Obj<F> {
    pub fn complex(&self) -> &ChainComplex<F> {
        match self {
            Obj::Complex(x) => x,
            Obj::Algebra(a) => a.complex(),
            Obj::Coalgebra(c) => c.complex(),
            Obj::Bimonoid(h) => h.complex(),
            Obj::Comodule(m) => m.complex(),
            Obj::ComoduleAlgebra(a) => a.algebra().complex(),
            Obj::Module(m) => m.complex(),
        }
    }

    pub fn algebra(&self) -> Option<&ChainAlgebra<F>> {
        match self {
            Obj::Algebra(a) => Some(a),
            Obj::Bimonoid(h) => Some(h.algebra()),
            Obj::ComoduleAlgebra(a) => Some(a.algebra()),
            _ => None,
        }
    }

    pub fn coalgebra(&self) -> Option<&ChainCoalgebra<F>> {
        match self {
            Obj::Coalgebra(c) => Some(c),
            Obj::Bimonoid(h) => Some(h.coalgebra()),
            _ => None,
        }
    }
}

/// Sparse image of one basis vector.
type Column<F> = Vec<(usize, <F as Field>::Elem)>;

/// Builds objects on demand, caching them by name.
pub struct Builder<'d, F: Field> {
    field: F,
    doc: &'d Document,
    cache: BTreeMap<String, Obj<F>>,
}

fn input(loc: impl Into<String>, msg: impl Into<String>) -> RunError {
    RunError::Input(vec![Diagnostic::new(loc, msg)])
}

/// Attach a location to a core error raised while assembling an object.
fn located(loc: &str) -> impl Fn(Error) -> RunError + '_ {
    move |e| match e {
        Error::Invalid(v) => RunError::Core(Error::Invalid(v)),
        e => input(loc, e.to_string()),
    }
}

impl<'d, F: Field> Builder<'d, F> {
    pub fn new(field: F, doc: &'d Document) -> Self {
        Builder {
            field,
            doc,
            cache: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn doc(&self) -> &'d Document {
        self.doc
    }

    pub fn max_degree(&self) -> usize {
        self.doc.max_degree
    }

    fn space(&self, o: &ObjectDoc) -> GradedVectorSpace<F> {
        let mut dims = o.dims.clone();
        dims.resize(self.doc.max_degree + 1, 0);
        GradedVectorSpace::new(&self.field, dims)
    }

    /// A sparse list as a map `source -> target` of the given shift.
    pub fn sparse_map(
        &self,
        entries: &[Entry],
        source: &GradedVectorSpace<F>,
        target: &GradedVectorSpace<F>,
        shift: i64,
        loc: &str,
    ) -> Result<GradedLinearMap<F>, RunError> {
        let f = &self.field;
        let mut cols: BTreeMap<(usize, usize), Column<F>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            let here = format!("{loc}[{i}]");
            if e.src_degree > source.max_degree() || e.src_index >= source.dim(e.src_degree) {
                let dim = if e.src_degree > source.max_degree() { 0 } else { source.dim(e.src_degree) };
                return Err(input(
                    here,
                    format!(
                        "degree {}: source index {} out of range (source has dimension {dim})",
                        e.src_degree, e.src_index
                    ),
                ));
            }
            let tdim = target.dim_i(e.src_degree as i64 + shift);
            if e.tgt_index >= tdim {
                return Err(input(
                    here,
                    format!(
                        "degree {}: target index {} out of range (target has dimension {tdim} in degree {})",
                        e.src_degree,
                        e.tgt_index,
                        e.src_degree as i64 + shift
                    ),
                ));
            }
            let one = num_bigint::BigInt::from(1);
            let c = f
                .from_fraction(&e.num, e.den.as_ref().unwrap_or(&one))
                .map_err(|err| input(&here, err.to_string()))?;
            cols.entry((e.src_degree, e.src_index)).or_default().push((e.tgt_index, c));
        }
        Ok(GradedLinearMap::from_columns(source, target, shift, |k, j| {
            cols.get(&(k, j)).cloned().unwrap_or_default()
        }))
    }

    fn map_or_zero(
        &self,
        o: &ObjectDoc,
        key: &str,
        source: &GradedVectorSpace<F>,
        target: &GradedVectorSpace<F>,
        shift: i64,
        loc: &str,
    ) -> Result<GradedLinearMap<F>, RunError> {
        match o.maps.get(key) {
            Some(es) => self.sparse_map(es, source, target, shift, &format!("{loc}.maps.{key}")),
            None => Ok(GradedLinearMap::zero(source, target, shift)),
        }
    }

    fn complex_of(&self, o: &ObjectDoc, loc: &str) -> Result<ChainComplex<F>, RunError> {
        let s = self.space(o);
        let d = self.map_or_zero(o, "d", &s, &s, -1, loc)?;
        ChainComplex::new(s, d).map_err(located(loc))
    }

    fn algebra_of(&self, o: &ObjectDoc, x: &ChainComplex<F>, loc: &str) -> Result<ChainAlgebra<F>, RunError> {
        let s = x.space();
        let u = GradedVectorSpace::unit(&self.field);
        let mul = self.map_or_zero(o, "mul", power(s, 2).space(), s, 0, loc)?;
        let unit = self.map_or_zero(o, "unit", &u, s, 0, loc)?;
        ChainAlgebra::new(x.clone(), mul, unit).map_err(located(loc))
    }

    fn coalgebra_of(
        &self,
        o: &ObjectDoc,
        x: &ChainComplex<F>,
        coaug: bool,
        loc: &str,
    ) -> Result<ChainCoalgebra<F>, RunError> {
        let s = x.space();
        let u = GradedVectorSpace::unit(&self.field);
        let comul = self.map_or_zero(o, "comul", s, power(s, 2).space(), 0, loc)?;
        let counit = self.map_or_zero(o, "counit", s, &u, 0, loc)?;
        let coaug = match (coaug, o.maps.contains_key("unit")) {
            (true, true) => Some(self.map_or_zero(o, "unit", &u, s, 0, loc)?),
            _ => None,
        };
        ChainCoalgebra::new(x.clone(), comul, counit, coaug).map_err(located(loc))
    }

    fn side(o: &ObjectDoc) -> Side {
        match o.side {
            Some(SideDoc::Left) => Side::Left,
            _ => Side::Right,
        }
    }

    /// The named object, built on first use.
    pub fn object(&mut self, name: &str) -> Result<Obj<F>, RunError> {
        if let Some(o) = self.cache.get(name) {
            return Ok(o.clone());
        }
        let doc = self.doc;
        let o = doc
            .objects
            .get(name)
            .ok_or_else(|| input("--object", format!("no object named `{name}`")))?;
        let loc = format!("objects.{name}");
        let x = self.complex_of(o, &loc)?;
        let n = self.max_degree();
        let built = match o.kind {
            ObjectKind::Complex => Obj::Complex(x),
            ObjectKind::Algebra => Obj::Algebra(self.algebra_of(o, &x, &loc)?),
            ObjectKind::Coalgebra => Obj::Coalgebra(self.coalgebra_of(o, &x, true, &loc)?),
            ObjectKind::Bimonoid => {
                let a = self.algebra_of(o, &x, &loc)?;
                let c = self.coalgebra_of(o, &x, false, &loc)?;
                Obj::Bimonoid(Bimonoid::new(a, c).map_err(located(&loc))?)
            }
            ObjectKind::Comodule => {
                let over = self.over(o)?;
                let c = over
                    .coalgebra()
                    .cloned()
                    .ok_or_else(|| input(format!("{loc}.over"), "not a coalgebra"))?;
                let side = Self::side(o);
                let fs = match side {
                    Side::Right => vec![x.space().clone(), c.space().clone()],
                    Side::Left => vec![c.space().clone(), x.space().clone()],
                };
                let ts = TensorSpace::new(&self.field, fs, n);
                let rho = self.map_or_zero(o, "coaction", x.space(), ts.space(), 0, &loc)?;
                Obj::Comodule(Comodule::new(side, c, x, rho).map_err(located(&loc))?)
            }
            ObjectKind::ComoduleAlgebra => {
                let h = match self.over(o)? {
                    Obj::Bimonoid(h) => h,
                    _ => return Err(input(format!("{loc}.over"), "not a bimonoid")),
                };
                let a = self.algebra_of(o, &x, &loc)?;
                let ts = TensorSpace::new(&self.field, vec![x.space().clone(), h.space().clone()], n);
                let rho = self.map_or_zero(o, "coaction", x.space(), ts.space(), 0, &loc)?;
                Obj::ComoduleAlgebra(ComoduleAlgebra::new(a, h, rho).map_err(located(&loc))?)
            }
            ObjectKind::Module => {
                let over = self.over(o)?;
                let a = over
                    .algebra()
                    .cloned()
                    .ok_or_else(|| input(format!("{loc}.over"), "not an algebra"))?;
                let side = Self::side(o);
                let fs = match side {
                    Side::Right => vec![x.space().clone(), a.space().clone()],
                    Side::Left => vec![a.space().clone(), x.space().clone()],
                };
                let ts = TensorSpace::new(&self.field, fs, n);
                let act = self.map_or_zero(o, "mul", ts.space(), x.space(), 0, &loc)?;
                Obj::Module(DgModule::new(side, a, x, act).map_err(located(&loc))?)
            }
        };
        self.cache.insert(name.to_string(), built.clone());
        Ok(built)
    }

    fn over(&mut self, o: &ObjectDoc) -> Result<Obj<F>, RunError> {
        let r = o.over.as_deref().expect("parse checks `over`");
        self.object(r)
    }

    /// The named morphism as a graded map between the underlying spaces.
    pub fn morphism(&mut self, name: &str) -> Result<GradedLinearMap<F>, RunError> {
        let m = self
            .doc
            .morphisms
            .get(name)
            .ok_or_else(|| input("--object", format!("no morphism named `{name}`")))?;
        let src = self.object(&m.source)?.complex().space().clone();
        let tgt = self.object(&m.target)?.complex().space().clone();
        self.sparse_map(&m.entries, &src, &tgt, m.shift, &format!("morphisms.{name}.entries"))
    }

    /// The named extension. Fails with a verdict when its axioms do not hold.
    pub fn extension(&mut self, name: &str) -> Result<Extension<F>, RunError> {
        let e = self
            .doc
            .extensions
            .get(name)
            .ok_or_else(|| input("--object", format!("no extension named `{name}`")))?
            .clone();
        let loc = format!("extensions.{name}");
        let a = match self.object(&e.a)? {
            Obj::ComoduleAlgebra(a) => a,
            _ => return Err(input(format!("{loc}.A"), "not a comodule algebra")),
        };
        let b = self
            .object(&e.b)?
            .algebra()
            .cloned()
            .ok_or_else(|| input(format!("{loc}.B"), "not an algebra"))?;
        let phi = self.morphism(&e.phi)?;
        if phi.shift() != 0 {
            return Err(input(format!("morphisms.{}.shift", e.phi), "φ must have degree 0"));
        }
        Extension::new(b, a, phi).map_err(located(&loc))
    }
}
