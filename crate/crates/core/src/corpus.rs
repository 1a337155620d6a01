//! Small worked examples: coalgebras, algebras and bimonoids used by the
//! tests, the acceptance suite and the shipped fixtures.

use crate::algstruct::{power, Bimonoid, ChainAlgebra, ChainCoalgebra};
use crate::chain::ChainComplex;
use crate::linalg::{Field, GradedLinearMap, GradedVectorSpace};

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `k[x]/(x^height)` with `|x| = n`; the powers `x^j` with `j n <= max_degree`.
fn power_space<F: Field>(field: &F, n: usize, height: usize, max_degree: usize) -> GradedVectorSpace<F> {
    let mut dims = vec![0; max_degree + 1];
    for j in 0..height {
        if j * n <= max_degree {
            dims[j * n] = 1;
        }
    }
    GradedVectorSpace::new(field, dims)
}

fn unit_maps<F: Field>(s: &GradedVectorSpace<F>) -> (GradedLinearMap<F>, GradedLinearMap<F>) {
    let f = s.field();
    let u = GradedVectorSpace::unit(f);
    let counit = GradedLinearMap::from_columns(s, &u, 0, |k, _| if k == 0 { vec![(0, f.one())] } else { vec![] });
    let coaug = GradedLinearMap::from_columns(&u, s, 0, |_, _| vec![(0, f.one())]);
    (counit, coaug)
}

/// Truncated polynomial algebra `k[x]/(x^height)`, `|x| = n > 0`, `d = 0`.
pub fn truncated_polynomial_algebra<F: Field>(field: &F, n: usize, height: usize, max_degree: usize) -> ChainAlgebra<F> {
    assert!(n > 0 && height > 0);
    let s = power_space(field, n, height, max_degree);
    let pair = power(&s, 2);
    let mul = GradedLinearMap::from_columns(pair.space(), &s, 0, |k, j| {
        let t = &pair.basis(k)[j];
        let e = t[0].0 / n + t[1].0 / n;
        if e < height {
            vec![(0, field.one())]
        } else {
            vec![]
        }
    });
    let (_, unit) = unit_maps(&s);
    ChainAlgebra::new(ChainComplex::trivial(s), mul, unit).expect("well-formed algebra")
}

/// The binomial coalgebra on `k[x]/(x^height)`: `Δ x^j = Σ C(j,i) x^i ⊗ x^(j-i)`.
pub fn binomial_coalgebra<F: Field>(field: &F, n: usize, height: usize, max_degree: usize) -> ChainCoalgebra<F> {
    assert!(n > 0 && height > 0);
    let s = power_space(field, n, height, max_degree);
    let pair = power(&s, 2);
    let comul = GradedLinearMap::from_columns(&s, pair.space(), 0, |k, _| {
        let j = k / n;
        (0..=j)
            .map(|i| {
                let (_, t) = pair.index_of(&[(i * n, 0), ((j - i) * n, 0)]).expect("tuple in range");
                (t, field.from_i64(binomial(j, i)))
            })
            .collect()
    });
    let (counit, coaug) = unit_maps(&s);
    ChainCoalgebra::new(ChainComplex::trivial(s), comul, counit, Some(coaug)).expect("well-formed coalgebra")
}

/// `k[x]/(x^height)` with primitive `x` as a bimonoid. This is a bimonoid
/// exactly when the binomial coefficients vanish appropriately, e.g. `Λ(x)`
/// with `|x|` odd over any field, `Λ(x)` with `|x|` even in characteristic 2,
/// and `k[x]/(x^4)` in characteristic 2.
pub fn truncated_polynomial_bimonoid<F: Field>(field: &F, n: usize, height: usize, max_degree: usize) -> Bimonoid<F> {
    Bimonoid::new(
        truncated_polynomial_algebra(field, n, height, max_degree),
        binomial_coalgebra(field, n, height, max_degree),
    )
    .expect("same carrier")
}

/// `Λ(x)`, `|x| = n`, with `x` primitive.
pub fn exterior_bimonoid<F: Field>(field: &F, n: usize, max_degree: usize) -> Bimonoid<F> {
    truncated_polynomial_bimonoid(field, n, 2, max_degree)
}

/// The ground field as a bimonoid.
pub fn unit_bimonoid<F: Field>(field: &F, max_degree: usize) -> Bimonoid<F> {
    Bimonoid::new(
        ChainAlgebra::ground(field, max_degree),
        ChainCoalgebra::unit(field, max_degree),
    )
    .expect("same carrier")
}

/// The homology coalgebra of `S^n`: `1` and a primitive `x` in degree `n`.
pub fn sphere_coalgebra<F: Field>(field: &F, n: usize, max_degree: usize) -> ChainCoalgebra<F> {
    binomial_coalgebra(field, n, 2, max_degree)
}

/// The homology coalgebra of `CP^2`: `1, x_2, y_4` with
/// `Δ y = y ⊗ 1 + x ⊗ x + 1 ⊗ y`.
pub fn cp2_coalgebra<F: Field>(field: &F, max_degree: usize) -> ChainCoalgebra<F> {
    binomial_coalgebra_with(field, 2, 3, max_degree, |_, _| 1)
}

fn binomial_coalgebra_with<F: Field>(
    field: &F,
    n: usize,
    height: usize,
    max_degree: usize,
    coeff: impl Fn(usize, usize) -> i64,
) -> ChainCoalgebra<F> {
    let s = power_space(field, n, height, max_degree);
    let pair = power(&s, 2);
    let comul = GradedLinearMap::from_columns(&s, pair.space(), 0, |k, _| {
        let j = k / n;
        (0..=j)
            .map(|i| {
                let (_, t) = pair.index_of(&[(i * n, 0), ((j - i) * n, 0)]).expect("tuple in range");
                (t, field.from_i64(coeff(j, i)))
            })
            .collect()
    });
    let (counit, coaug) = unit_maps(&s);
    ChainCoalgebra::new(ChainComplex::trivial(s), comul, counit, Some(coaug)).expect("well-formed coalgebra")
}

/// Primitive generators `a` in degree `n` and `b` in degree `n + 1` with
/// `d b = a`: an acyclic-above-0 coalgebra with nonzero differential.
pub fn disk_coalgebra<F: Field>(field: &F, n: usize, max_degree: usize) -> ChainCoalgebra<F> {
    assert!(n >= 1);
    let mut dims = vec![0; max_degree + 1];
    dims[0] = 1;
    for k in [n, n + 1] {
        if k <= max_degree {
            dims[k] += 1;
        }
    }
    let s = GradedVectorSpace::new(field, dims);
    let d = GradedLinearMap::from_columns(&s, &s, -1, |k, _| if k == n + 1 { vec![(0, field.one())] } else { vec![] });
    let pair = power(&s, 2);
    let comul = GradedLinearMap::from_columns(&s, pair.space(), 0, |k, _| {
        if k == 0 {
            let (_, t) = pair.index_of(&[(0, 0), (0, 0)]).unwrap();
            return vec![(t, field.one())];
        }
        let a = pair.index_of(&[(k, 0), (0, 0)]).unwrap().1;
        let b = pair.index_of(&[(0, 0), (k, 0)]).unwrap().1;
        vec![(a, field.one()), (b, field.one())]
    });
    let (counit, coaug) = unit_maps(&s);
    let c = ChainComplex::new(s, d).expect("shapes");
    ChainCoalgebra::new(c, comul, counit, Some(coaug)).expect("well-formed coalgebra")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};

    #[test]
    fn corpus_coalgebras_validate() {
        let q = Rationals;
        let f2 = PrimeField::new(2).unwrap();
        for c in [
            sphere_coalgebra(&q, 2, 10),
            cp2_coalgebra(&q, 10),
            disk_coalgebra(&q, 3, 10),
            binomial_coalgebra(&q, 2, 4, 10),
        ] {
            assert!(c.validate().is_ok());
            assert!(c.one_connected());
        }
        assert!(binomial_coalgebra(&f2, 2, 4, 12).validate().is_ok());
        assert!(truncated_polynomial_bimonoid(&f2, 2, 4, 12).validate().is_ok());
    }

    #[test]
    fn cp2_structure() {
        let c = cp2_coalgebra(&Rationals, 4);
        assert_eq!(c.space().dims(), &[1, 0, 1, 0, 1]);
        assert_eq!(c.comul().block(4).rows(), 3);
    }
}
