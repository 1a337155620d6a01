//! Tensor products over algebras, presented as cokernels of the flat
//! tensor product, and identifications between nested and flat tensors.

use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result, Violation};
use crate::linalg::{Cokernel, Field, GradedLinearMap, GradedVectorSpace, TensorSpace};

/// The relation `r ⊗ 1 − 1 ⊗ ℓ` imposed between two adjacent factors.
#[derive(Clone, Debug)]
pub struct Junction<F: Field> {
    /// `V_i ⊗ A -> V_i`.
    pub right: GradedLinearMap<F>,
    /// `A ⊗ V_{i+1} -> V_{i+1}`.
    pub left: GradedLinearMap<F>,
    pub algebra: GradedVectorSpace<F>,
}

/// `V_1 ⊗_{A_1} V_2 ⊗ ... ⊗_{A_{n-1}} V_n`, the cokernel of the summed
/// junction relations on the flat tensor `V_1 ⊗ ... ⊗ V_n`.
#[derive(Clone, Debug)]
pub struct RelativeTensor<F: Field> {
    factors: Vec<ChainComplex<F>>,
    ambient: TensorSpace<F>,
    ambient_complex: ChainComplex<F>,
    relations: GradedLinearMap<F>,
    complex: ChainComplex<F>,
    projection: GradedLinearMap<F>,
    section: GradedLinearMap<F>,
}

impl<F: Field> RelativeTensor<F> {
    pub fn new(factors: &[&ChainComplex<F>], junctions: &[Junction<F>], cap: usize) -> Result<Self> {
        if factors.is_empty() || junctions.len() + 1 != factors.len() {
            return Err(Error::Shape("one junction between each pair of adjacent factors".into()));
        }
        let f = factors[0].field();
        let spaces: Vec<GradedVectorSpace<F>> = factors.iter().map(|x| x.space().clone()).collect();
        let ambient = TensorSpace::new(f, spaces.clone(), cap);
        let ambient_complex = ChainComplex::on_tensor(&ambient, factors)?;
        let mut relations: Option<GradedLinearMap<F>> = None;
        for (i, j) in junctions.iter().enumerate() {
            let mut fs = spaces.clone();
            fs.insert(i + 1, j.algebra.clone());
            let src = TensorSpace::new(f, fs, cap);
            let r = src.apply(i, 2, &j.right, &spaces[i..=i], &ambient)?;
            let l = src.apply(i + 1, 2, &j.left, &spaces[i + 1..=i + 1], &ambient)?;
            let rel = r.sub(&l)?;
            relations = Some(match relations {
                None => rel,
                Some(acc) => acc.copair(&rel)?.reframe(&acc.source().direct_sum(rel.source()), ambient.space())?,
            });
        }
        let relations = relations.unwrap_or_else(|| {
            GradedLinearMap::zero(&GradedVectorSpace::zero(f, cap), ambient.space(), 0)
        });
        let coker = relations.cokernel();
        let (complex, _) = ambient_complex.quotient(&coker)?;
        let Cokernel { projection, section, .. } = coker;
        Ok(RelativeTensor {
            factors: factors.iter().map(|&x| x.clone()).collect(),
            ambient,
            ambient_complex,
            relations,
            complex,
            projection,
            section,
        })
    }

    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }
    pub fn space(&self) -> &GradedVectorSpace<F> {
        self.complex.space()
    }
    pub fn ambient(&self) -> &TensorSpace<F> {
        &self.ambient
    }
    pub fn ambient_complex(&self) -> &ChainComplex<F> {
        &self.ambient_complex
    }
    pub fn factors(&self) -> &[ChainComplex<F>] {
        &self.factors
    }
    pub fn relations(&self) -> &GradedLinearMap<F> {
        &self.relations
    }
    pub fn projection(&self) -> &GradedLinearMap<F> {
        &self.projection
    }
    pub fn section(&self) -> &GradedLinearMap<F> {
        &self.section
    }
    pub fn cap(&self) -> usize {
        self.ambient.cap()
    }

    /// The projection from the flat tensor as a chain map.
    pub fn projection_map(&self) -> Result<ChainMap<F>> {
        ChainMap::new(self.ambient_complex.clone(), self.complex.clone(), self.projection.clone())
    }

    /// The map out of the quotient induced by `g` on the flat tensor, after
    /// checking that `g` kills the relations.
    pub fn induced(&self, g: &GradedLinearMap<F>, what: &str) -> Result<GradedLinearMap<F>> {
        g.compose(&self.relations)?
            .vanishes(&format!("{what} is well defined on the relative tensor"))
            .map_err(Error::Invalid)?;
        g.compose(&self.section)
    }

    /// `π ∘ h` for `h` landing in the flat tensor.
    pub fn project(&self, h: &GradedLinearMap<F>) -> Result<GradedLinearMap<F>> {
        self.projection.compose(h)
    }

    /// The left action on the first factor, `A ⊗ Q -> Q`, induced by `left : A ⊗ V_1 -> V_1`.
    pub fn induced_left_action(&self, left: &GradedLinearMap<F>, a: &GradedVectorSpace<F>) -> Result<GradedLinearMap<F>> {
        let f = self.complex.field();
        let cap = self.cap();
        let aq = TensorSpace::new(f, vec![a.clone(), self.space().clone()], cap);
        let amb = self.ambient.space().clone();
        let a_amb = TensorSpace::new(f, vec![a.clone(), amb.clone()], cap);
        let mut flat_factors = vec![a.clone()];
        flat_factors.extend(self.ambient.factors().iter().cloned());
        let flat = TensorSpace::new(f, flat_factors, cap);
        let to_flat = flatten(&a_amb, &[None, Some(&self.ambient)], &flat)?;
        let act = flat.apply(0, 2, left, &self.ambient.factors()[..1], &self.ambient)?;
        let on_ambient = act.compose(&to_flat)?;
        let id = GradedLinearMap::identity(a);
        let rel = TensorSpace::tensor_maps(&[&id, &self.relations], &TensorSpace::new(f, vec![a.clone(), self.relations.source().clone()], cap), &a_amb)?;
        self.projection
            .compose(&on_ambient)?
            .compose(&rel)?
            .vanishes("left action preserves the relations")
            .map_err(Error::Invalid)?;
        let lift = TensorSpace::tensor_maps(&[&id, &self.section], &aq, &a_amb)?;
        self.projection.compose(&on_ambient)?.compose(&lift)
    }

    /// The right action on the last factor, `Q ⊗ A -> Q`, induced by `right : V_n ⊗ A -> V_n`.
    pub fn induced_right_action(&self, right: &GradedLinearMap<F>, a: &GradedVectorSpace<F>) -> Result<GradedLinearMap<F>> {
        let f = self.complex.field();
        let cap = self.cap();
        let n = self.factors.len();
        let qa = TensorSpace::new(f, vec![self.space().clone(), a.clone()], cap);
        let amb = self.ambient.space().clone();
        let amb_a = TensorSpace::new(f, vec![amb.clone(), a.clone()], cap);
        let mut flat_factors: Vec<_> = self.ambient.factors().to_vec();
        flat_factors.push(a.clone());
        let flat = TensorSpace::new(f, flat_factors, cap);
        let to_flat = flatten(&amb_a, &[Some(&self.ambient), None], &flat)?;
        let act = flat.apply(n - 1, 2, right, &self.ambient.factors()[n - 1..], &self.ambient)?;
        let on_ambient = act.compose(&to_flat)?;
        let id = GradedLinearMap::identity(a);
        let rel = TensorSpace::tensor_maps(&[&self.relations, &id], &TensorSpace::new(f, vec![self.relations.source().clone(), a.clone()], cap), &amb_a)?;
        self.projection
            .compose(&on_ambient)?
            .compose(&rel)?
            .vanishes("right action preserves the relations")
            .map_err(Error::Invalid)?;
        let lift = TensorSpace::tensor_maps(&[&self.section, &id], &qa, &amb_a)?;
        self.projection.compose(&on_ambient)?.compose(&lift)
    }
}

/// The identification of a tensor whose factors are themselves flat tensors
/// (`parts[i] = Some(t)`) or plain spaces (`None`) with the fully flat tensor.
pub fn flatten<F: Field>(
    nested: &TensorSpace<F>,
    parts: &[Option<&TensorSpace<F>>],
    flat: &TensorSpace<F>,
) -> Result<GradedLinearMap<F>> {
    if parts.len() != nested.factors().len() {
        return Err(Error::Shape("one part per nested factor".into()));
    }
    let f = nested.field();
    let mut tuple = Vec::new();
    Ok(GradedLinearMap::from_columns(nested.space(), flat.space(), 0, |k, j| {
        tuple.clear();
        for (&(d, i), p) in nested.basis(k)[j].iter().zip(parts) {
            match p {
                None => tuple.push((d, i)),
                Some(t) => tuple.extend_from_slice(&t.basis(d)[i]),
            }
        }
        flat.index_of(&tuple).map(|(_, t)| vec![(t, f.one())]).unwrap_or_default()
    }))
}

/// The inverse of [`flatten`], defined on tuples that fit the nested caps.
pub fn unflatten<F: Field>(
    flat: &TensorSpace<F>,
    parts: &[Option<&TensorSpace<F>>],
    nested: &TensorSpace<F>,
) -> Result<GradedLinearMap<F>> {
    let sizes: Vec<usize> = parts.iter().map(|p| p.map_or(1, |t| t.factors().len())).collect();
    if sizes.iter().sum::<usize>() != flat.factors().len() {
        return Err(Error::Shape("parts do not cover the flat factors".into()));
    }
    let f = flat.field();
    Ok(GradedLinearMap::from_columns(flat.space(), nested.space(), 0, |k, j| {
        let t = &flat.basis(k)[j];
        let mut at = 0;
        let mut nt = Vec::with_capacity(parts.len());
        for (p, &s) in parts.iter().zip(&sizes) {
            let piece = &t[at..at + s];
            at += s;
            match p {
                None => nt.push(piece[0]),
                Some(ts) => match ts.index_of(piece) {
                    Some(e) => nt.push(e),
                    None => return vec![],
                },
            }
        }
        nested.index_of(&nt).map(|(_, i)| vec![(i, f.one())]).unwrap_or_default()
    }))
}

/// Degreewise dimensions of a relative tensor computed independently: the
/// flat dimension minus the rank of the stacked relation matrix.
pub fn expected_dims<F: Field>(rt: &RelativeTensor<F>) -> Vec<usize> {
    (0..=rt.cap())
        .map(|k| rt.ambient.space().dim(k) - rt.relations.rank(k))
        .collect()
}

/// A located failure when a map does not vanish on the relations.
pub fn relation_violation<F: Field>(rt: &RelativeTensor<F>, g: &GradedLinearMap<F>, what: &str) -> Option<Violation> {
    g.compose(&rt.relations).ok()?.vanishes(what).err()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algstruct::{ChainAlgebra, DgModule, Side};
    use crate::corpus;
    use crate::linalg::{PrimeField, Rationals};

    fn junction<F: Field>(m: &DgModule<F>, n: &DgModule<F>) -> Junction<F> {
        Junction {
            right: m.action().clone(),
            left: n.action().clone(),
            algebra: m.algebra().space().clone(),
        }
    }

    #[test]
    fn over_the_ground_field_nothing_is_identified() {
        let q = Rationals;
        let k = ChainAlgebra::ground(&q, 4);
        let c = corpus::sphere_coalgebra(&q, 2, 4);
        let m = DgModule::new(Side::Right, k.clone(), c.complex().clone(), {
            let ts = TensorSpace::new(&q, vec![c.space().clone(), k.space().clone()], 4);
            GradedLinearMap::from_columns(ts.space(), c.space(), 0, |_, j| vec![(j, q.one())])
        })
        .unwrap();
        let n = DgModule::new(Side::Left, k.clone(), c.complex().clone(), {
            let ts = TensorSpace::new(&q, vec![k.space().clone(), c.space().clone()], 4);
            GradedLinearMap::from_columns(ts.space(), c.space(), 0, |_, j| vec![(j, q.one())])
        })
        .unwrap();
        let rt = RelativeTensor::new(&[m.complex(), n.complex()], &[junction(&m, &n)], 4).unwrap();
        assert_eq!(rt.space().dims(), &[1, 0, 2, 0, 1]);
    }

    #[test]
    fn algebra_over_itself() {
        let f2 = PrimeField::new(2).unwrap();
        let a = corpus::exterior_bimonoid(&f2, 2, 6).algebra().clone();
        let r = DgModule::regular(&a, Side::Right);
        let l = DgModule::regular(&a, Side::Left);
        let rt = RelativeTensor::new(&[r.complex(), l.complex()], &[junction(&r, &l)], 6).unwrap();
        assert!(rt.space().same_dims(a.space()));
        assert_eq!(expected_dims(&rt), rt.space().dims());
        let mu = rt.induced(a.mul(), "μ").unwrap();
        assert!(mu.inverse().is_ok());
    }

    #[test]
    fn flatten_round_trip() {
        let q = Rationals;
        let v = corpus::sphere_coalgebra(&q, 1, 4).space().clone();
        let inner = TensorSpace::new(&q, vec![v.clone(), v.clone()], 4);
        let nested = TensorSpace::new(&q, vec![v.clone(), inner.space().clone()], 4);
        let flat = TensorSpace::new(&q, vec![v.clone(), v.clone(), v.clone()], 4);
        let a = flatten(&nested, &[None, Some(&inner)], &flat).unwrap();
        let b = unflatten(&flat, &[None, Some(&inner)], &nested).unwrap();
        assert!(b.compose(&a).unwrap() == GradedLinearMap::identity(nested.space()));
        assert!(a.compose(&b).unwrap() == GradedLinearMap::identity(flat.space()));
    }

    #[test]
    fn induced_actions_on_a_tensor_over_itself() {
        let q = Rationals;
        let a = corpus::exterior_bimonoid(&q, 3, 6).algebra().clone();
        let r = DgModule::regular(&a, Side::Right);
        let l = DgModule::regular(&a, Side::Left);
        let rt = RelativeTensor::new(&[r.complex(), l.complex()], &[junction(&r, &l)], 6).unwrap();
        let left = rt.induced_left_action(a.mul(), a.space()).unwrap();
        let right = rt.induced_right_action(a.mul(), a.space()).unwrap();
        let lm = DgModule::new(Side::Left, a.clone(), rt.complex().clone(), left).unwrap();
        let rm = DgModule::new(Side::Right, a.clone(), rt.complex().clone(), right).unwrap();
        assert!(lm.validate().is_ok());
        assert!(rm.validate().is_ok());
    }
}
