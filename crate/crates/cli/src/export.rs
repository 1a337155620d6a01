//! Writing library objects back into the document format.

use std::collections::BTreeMap;

use hgx_core::algstruct::{Bimonoid, ChainAlgebra, ChainCoalgebra, DgModule, Side};
use hgx_core::chain::ChainComplex;
use hgx_core::comod::{Comodule, ComoduleAlgebra};
use hgx_core::linalg::{Field, FieldSpec, GradedLinearMap};

use crate::document::{Document, Entry, ExtensionDoc, FieldDoc, MorphismDoc, ObjectDoc, ObjectKind, SideDoc};

/// Sparse entries of a map, in the order of the document format.
pub fn entries<F: Field>(g: &GradedLinearMap<F>) -> Vec<Entry> {
    let f = g.field();
    let rational = f.spec() == FieldSpec::Rationals;
    let mut out = Vec::new();
    for (&k, m) in g.blocks() {
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                let c = m.get(i, j);
                if f.is_zero(c) {
                    continue;
                }
                let (num, den) = f.to_fraction(c);
                out.push(Entry {
                    src_degree: k,
                    src_index: j,
                    tgt_index: i,
                    num,
                    den: rational.then_some(den),
                });
            }
        }
    }
    out.sort();
    out
}

/// Builds a document object by object.
pub struct Exporter {
    doc: Document,
}

fn side_doc(s: Side) -> SideDoc {
    match s {
        Side::Left => SideDoc::Left,
        Side::Right => SideDoc::Right,
    }
}

impl Exporter {
    pub fn new<F: Field>(field: &F, max_degree: usize) -> Self {
        let field = match field.spec() {
            FieldSpec::Prime(p) => FieldDoc::Fp { p },
            FieldSpec::Rationals => FieldDoc::Q,
        };
        Exporter {
            doc: Document {
                field,
                max_degree,
                objects: BTreeMap::new(),
                morphisms: BTreeMap::new(),
                extensions: BTreeMap::new(),
            },
        }
    }

    pub fn finish(self) -> Document {
        self.doc
    }

    fn object<F: Field>(
        &mut self,
        name: &str,
        kind: ObjectKind,
        x: &ChainComplex<F>,
        over: Option<&str>,
        side: Option<Side>,
        maps: Vec<(&str, &GradedLinearMap<F>)>,
    ) -> &mut Self {
        let n = self.doc.max_degree;
        let mut dims: Vec<usize> = (0..=n).map(|k| if k <= x.max_degree() { x.dim(k) } else { 0 }).collect();
        while dims.len() > 1 && dims.last() == Some(&0) {
            dims.pop();
        }
        let mut all = vec![("d", x.d())];
        all.extend(maps);
        let maps = all
            .into_iter()
            .map(|(k, g)| (k.to_string(), entries(g)))
            .filter(|(k, es)| k != "d" || !es.is_empty())
            .collect();
        self.doc.objects.insert(
            name.to_string(),
            ObjectDoc {
                kind,
                dims,
                over: over.map(str::to_string),
                side: side.map(side_doc),
                maps,
            },
        );
        self
    }

    pub fn complex<F: Field>(&mut self, name: &str, x: &ChainComplex<F>) -> &mut Self {
        self.object(name, ObjectKind::Complex, x, None, None, vec![])
    }

    pub fn algebra<F: Field>(&mut self, name: &str, a: &ChainAlgebra<F>) -> &mut Self {
        self.object(
            name,
            ObjectKind::Algebra,
            a.complex(),
            None,
            None,
            vec![("mul", a.mul()), ("unit", a.unit())],
        )
    }

    pub fn coalgebra<F: Field>(&mut self, name: &str, c: &ChainCoalgebra<F>) -> &mut Self {
        let mut maps = vec![("comul", c.comul()), ("counit", c.counit())];
        if let Some(e) = c.coaug() {
            maps.push(("unit", e));
        }
        self.object(name, ObjectKind::Coalgebra, c.complex(), None, None, maps)
    }

    pub fn bimonoid<F: Field>(&mut self, name: &str, h: &Bimonoid<F>) -> &mut Self {
        let (a, c) = (h.algebra(), h.coalgebra());
        self.object(
            name,
            ObjectKind::Bimonoid,
            h.complex(),
            None,
            None,
            vec![("mul", a.mul()), ("unit", a.unit()), ("comul", c.comul()), ("counit", c.counit())],
        )
    }

    pub fn comodule<F: Field>(&mut self, name: &str, m: &Comodule<F>, over: &str) -> &mut Self {
        self.object(
            name,
            ObjectKind::Comodule,
            m.complex(),
            Some(over),
            Some(m.side()),
            vec![("coaction", m.coaction())],
        )
    }

    pub fn comodule_algebra<F: Field>(&mut self, name: &str, a: &ComoduleAlgebra<F>, over: &str) -> &mut Self {
        let alg = a.algebra();
        self.object(
            name,
            ObjectKind::ComoduleAlgebra,
            alg.complex(),
            Some(over),
            None,
            vec![("mul", alg.mul()), ("unit", alg.unit()), ("coaction", a.coaction())],
        )
    }

    pub fn module<F: Field>(&mut self, name: &str, m: &DgModule<F>, over: &str) -> &mut Self {
        self.object(
            name,
            ObjectKind::Module,
            m.complex(),
            Some(over),
            Some(m.side()),
            vec![("mul", m.action())],
        )
    }

    pub fn morphism<F: Field>(&mut self, name: &str, source: &str, target: &str, g: &GradedLinearMap<F>) -> &mut Self {
        self.doc.morphisms.insert(
            name.to_string(),
            MorphismDoc {
                source: source.to_string(),
                target: target.to_string(),
                shift: g.shift(),
                entries: entries(g),
            },
        );
        self
    }

    pub fn extension(&mut self, name: &str, phi: &str, a: &str, h: &str, b: &str) -> &mut Self {
        self.doc.extensions.insert(
            name.to_string(),
            ExtensionDoc {
                phi: phi.to_string(),
                a: a.to_string(),
                h: h.to_string(),
                b: b.to_string(),
            },
        );
        self
    }
}

/// The shipped fixture documents, by file stem.
pub fn fixtures() -> Vec<(&'static str, Document)> {
    use hgx_core::corpus::*;
    use hgx_core::hopfgalois::{trivial_extension, unit_extension};
    use hgx_core::linalg::{PrimeField, Rationals};

    let f2 = PrimeField::new(2).expect("2 is prime");
    let mut out = Vec::new();

    let n = 4;
    let mut e = Exporter::new(&f2, n);
    let disk = disk_coalgebra(&f2, 1, n);
    e.complex("D1", disk.complex());
    e.complex("S2", sphere_coalgebra(&f2, 2, n).complex());
    out.push(("minimal", e.finish()));

    let n = 5;
    let mut e = Exporter::new(&f2, n);
    e.coalgebra("S2", &sphere_coalgebra(&f2, 2, n));
    out.push(("sphere", e.finish()));

    let mut e = Exporter::new(&f2, n);
    e.coalgebra("CP2", &cp2_coalgebra(&f2, n));
    out.push(("cp2", e.finish()));

    let n = 8;
    let mut e = Exporter::new(&f2, n);
    e.bimonoid("Lx", &exterior_bimonoid(&f2, 2, n));
    out.push(("exterior", e.finish()));

    let n = 10;
    let mut e = Exporter::new(&f2, n);
    e.bimonoid("P4", &truncated_polynomial_bimonoid(&f2, 2, 4, n));
    out.push(("truncated", e.finish()));

    let n = 6;
    let mut e = Exporter::new(&f2, n);
    let h = exterior_bimonoid(&f2, 2, n);
    let b = truncated_polynomial_algebra(&f2, 2, 2, n);
    let ext = trivial_extension(&b, &h, n).expect("trivial extensions are extensions");
    let unit = unit_extension(&h).expect("the unit is an extension");
    e.bimonoid("H", &h)
        .algebra("B", &b)
        .comodule_algebra("A", ext.algebra(), "H")
        .morphism("phi", "B", "A", ext.phi().map())
        .extension("trivial", "phi", "A", "H", "B")
        .algebra("k", unit.base())
        .comodule_algebra("H_reg", unit.algebra(), "H")
        .morphism("eta", "k", "H_reg", unit.phi().map())
        .extension("unit", "eta", "H_reg", "H", "k");
    out.push(("trivial_extension", e.finish()));

    let n = 6;
    let mut e = Exporter::new(&f2, n);
    let c = exterior_bimonoid(&f2, 2, n).coalgebra().clone();
    let k = Comodule::trivial(&c, Side::Right).expect("trivial comodule");
    let reg = Comodule::regular(&c, Side::Right);
    let cofree = Comodule::cofree(sphere_coalgebra(&f2, 2, n).complex(), &c).expect("cofree comodule");
    e.coalgebra("C", &c)
        .comodule("k", &k, "C")
        .comodule("C_reg", &reg, "C")
        .comodule("S2_cofree", &cofree, "C");
    out.push(("postnikov", e.finish()));

    let n = 6;
    let q = Rationals;
    let mut e = Exporter::new(&q, n);
    let h = exterior_bimonoid(&q, 3, n);
    let unit = unit_extension(&h).expect("the unit is an extension");
    e.coalgebra("S2", &sphere_coalgebra(&q, 2, n))
        .coalgebra("D2", &disk_coalgebra(&q, 2, n))
        .bimonoid("L3", &h)
        .algebra("k", unit.base())
        .comodule_algebra("L3_reg", unit.algebra(), "L3")
        .morphism("eta", "k", "L3_reg", unit.phi().map())
        .extension("unit", "eta", "L3_reg", "L3", "k");
    out.push(("rational", e.finish()));

    out
}
