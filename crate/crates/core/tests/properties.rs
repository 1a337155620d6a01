//! Property tests for the structural invariants of every layer.

mod common;

use std::collections::BTreeMap;

use common::*;
use hgx_core::algstruct::{hopf_monoid_check, power, ChainCoalgebra, Side};
use hgx_core::chain::{disk, ChainComplex, ChainMap};
use hgx_core::cobar::{cotor, homotopy_coinvariants, CobarComplex};
use hgx_core::comod::{coinvariants, Comodule};
use hgx_core::coring::{canonical_coring, galois_as_coring_morphism, rho_coring, trivial_coring};
use hgx_core::corpus;
use hgx_core::hopfgalois::{compare_with_beta_eta, galois_map, trivial_extension, truncate_algebra, verify_hhg};
use hgx_core::linalg::{injections, projections, Field, GradedLinearMap, Matrix, PrimeField, Rationals, TensorSpace};
use hgx_core::postnikov::{path_object, postnikov_factorize, to_zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Runs the body once over F2 and once over Q.
macro_rules! for_fields {
    (|$f:ident| $body:block) => {{
        {
            let $f = &f2();
            $body
        }
        {
            let $f = &Rationals;
            $body
        }
    }};
}

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Integer matrices `U` and `U^{-1}` built from random elementary operations.
fn unimodular(rng: &mut StdRng, n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let id = |n: usize| (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>()).collect::<Vec<_>>();
    let (mut u, mut v) = (id(n), id(n));
    if n < 2 {
        return (u, v);
    }
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        // u <- E u with E = I + c e_ij; v <- v E^{-1}.
        let uj = u[j].clone();
        for (x, y) in u[i].iter_mut().zip(&uj) {
            *x += c * y;
        }
        for row in v.iter_mut() {
            row[j] -= c * row[i];
        }
    }
    (u, v)
}

fn imul(a: &[Vec<i64>], b: &[Vec<i64>], rows: usize, inner: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|i| (0..cols).map(|j| (0..inner).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

/// An integral complex that is a sum of disks and spheres up to a change of
/// basis over the integers; its Betti numbers do not depend on the field.
fn integral_complex(rng: &mut StdRng, n: usize) -> (Vec<usize>, BTreeMap<usize, Vec<Vec<i64>>>) {
    let mut dims = vec![0usize; n + 1];
    let mut pairs = vec![0usize; n + 1];
    for k in 0..=n {
        let spheres = rng.gen_range(0..=2);
        dims[k] += spheres;
        if k >= 1 && rng.gen_bool(0.6) {
            let disks = rng.gen_range(1..=2);
            pairs[k] = disks;
            dims[k] += disks;
            dims[k - 1] += disks;
        }
    }
    // Standard form: in degree k, basis = [targets of disks from k+1 | spheres | tops of disks from k].
    let mut d = BTreeMap::new();
    for k in 1..=n {
        let mut m = vec![vec![0i64; dims[k]]; dims[k - 1]];
        let top_start = dims[k] - pairs[k];
        for t in 0..pairs[k] {
            m[t][top_start + t] = 1;
        }
        d.insert(k, m);
    }
    let bases: Vec<_> = dims.iter().map(|&m| unimodular(rng, m)).collect();
    let mut out = BTreeMap::new();
    for k in 1..=n {
        let (u, _) = &bases[k - 1];
        let (_, vinv) = &bases[k];
        let m = imul(u, &d[&k], dims[k - 1], dims[k - 1], dims[k]);
        out.insert(k, imul(&m, vinv, dims[k - 1], dims[k], dims[k]));
    }
    (dims, out)
}

fn realize<F: Field>(f: &F, dims: &[usize], d: &BTreeMap<usize, Vec<Vec<i64>>>) -> ChainComplex<F> {
    use hgx_core::linalg::GradedVectorSpace;
    let space = GradedVectorSpace::new(f, dims.to_vec());
    let blocks = d
        .iter()
        .map(|(&k, m)| (k, Matrix::from_fn(f, dims[k - 1], dims[k], |i, j| f.from_i64(m[i][j]))))
        .collect();
    let dd = GradedLinearMap::new(space.clone(), space.clone(), -1, blocks).unwrap();
    ChainComplex::new(space, dd).unwrap()
}

fn permutation<F: Field>(f: &F, rng: &mut StdRng, space: &hgx_core::linalg::GradedVectorSpace<F>) -> GradedLinearMap<F> {
    let blocks = (0..=space.max_degree())
        .filter(|&k| space.dim(k) > 0)
        .map(|k| {
            let n = space.dim(k);
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            (k, Matrix::from_fn(f, n, n, |i, j| if p[j] == i { f.one() } else { f.zero() }))
        })
        .collect();
    GradedLinearMap::new(space.clone(), space.clone(), 0, blocks).unwrap()
}

fn reindex<F: Field>(c: &ChainCoalgebra<F>, p: &GradedLinearMap<F>) -> ChainCoalgebra<F> {
    let pinv = p.inverse().unwrap();
    let pair = power(c.space(), 2);
    let pp = TensorSpace::tensor_maps(&[p, p], &pair, &pair).unwrap();
    let d = p.compose(c.complex().d()).unwrap().compose(&pinv).unwrap();
    let complex = ChainComplex::new(c.space().clone(), d).unwrap();
    let comul = pp.compose(c.comul()).unwrap().compose(&pinv).unwrap();
    let counit = c.counit().compose(&pinv).unwrap();
    let coaug = c.coaug().map(|e| p.compose(e).unwrap());
    ChainCoalgebra::new(complex, comul, counit, coaug).unwrap()
}

fn corpus_coalgebras<F: Field>(f: &F, n: usize) -> Vec<ChainCoalgebra<F>> {
    vec![
        corpus::sphere_coalgebra(f, 2, n),
        corpus::sphere_coalgebra(f, 3, n),
        corpus::cp2_coalgebra(f, n),
        corpus::disk_coalgebra(f, 2, n),
        corpus::binomial_coalgebra(f, 2, 4, n),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_nullity_and_exactness(seed in any::<u64>(), rows in 0usize..6, cols in 0usize..6) {
        let mut r = rng(seed);
        for_fields!(|f| {
            let m = random_matrix(f, &mut r, rows, cols);
            let ker = m.kernel_basis();
            assert_eq!(ker.cols() + m.rank(), cols);
            assert!(m.mul(&ker).is_zero());
            let (pi, s) = m.cokernel();
            assert_eq!(pi.rows(), rows - m.rank());
            assert!(pi.mul(&m).is_zero());
            assert_eq!(pi.mul(&s), Matrix::identity(f, pi.rows()));
        });
    }

    #[test]
    fn graded_kernel_and_cokernel_compose_to_zero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = Rationals;
        let x = random_complex(&q, &mut r, 5, 4);
        let d = x.d();
        assert!(d.compose(&d.kernel().inclusion).unwrap().is_zero());
        assert!(d.cokernel().projection.compose(d).unwrap().is_zero());
    }

    #[test]
    fn betti_numbers_agree_across_fields(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (dims, d) = integral_complex(&mut r, 6);
        let q = realize(&Rationals, &dims, &d).homology(5).unwrap().dims;
        let p2 = realize(&f2(), &dims, &d).homology(5).unwrap().dims;
        let p3 = realize(&PrimeField::new(3).unwrap(), &dims, &d).homology(5).unwrap().dims;
        prop_assert_eq!(&q, &p2);
        prop_assert_eq!(&q, &p3);
        let ranks_q: Vec<usize> = (1..=6).map(|k| realize(&Rationals, &dims, &d).d().rank(k)).collect();
        let ranks_2: Vec<usize> = (1..=6).map(|k| realize(&f2(), &dims, &d).d().rank(k)).collect();
        prop_assert_eq!(ranks_q, ranks_2);
    }

    #[test]
    fn euler_characteristic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = Rationals;
        let mut dims: Vec<usize> = (0..6).map(|_| r.gen_range(0..=4)).collect();
        dims.push(0);
        let x = random_complex_with_dims(&q, &mut r, dims);
        let h = x.homology(5).unwrap();
        let chi_h: i64 = h.dims.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(x.euler_characteristic(6), chi_h);
    }

    #[test]
    fn quasi_isomorphisms_two_out_of_three(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let q = Rationals;
        let x = random_complex(&q, &mut r, 6, 3);
        let dk = disk(&q, n).unwrap().with_max_degree(6);
        let sum = x.direct_sum(&dk).unwrap();
        let (i1, _) = injections(x.space(), dk.space());
        let (p1, _) = projections(x.space(), dk.space());
        let i = ChainMap::new(x.clone(), sum.clone(), i1).unwrap();
        let p = ChainMap::new(sum.clone(), x.clone(), p1).unwrap();
        prop_assert!(i.validate().is_ok() && p.validate().is_ok());
        prop_assert!(ChainMap::identity(&x).is_quasi_iso(5).unwrap().is_ok());
        prop_assert!(i.is_quasi_iso(5).unwrap().is_ok());
        prop_assert!(p.is_quasi_iso(5).unwrap().is_ok());
        prop_assert!(p.compose(&i).unwrap().is_quasi_iso(5).unwrap().is_ok());
        prop_assert!(i.compose(&p).unwrap().is_quasi_iso(5).unwrap().is_ok());
        let zero = ChainMap::zero(&x, &x);
        let acyclic = x.homology(5).unwrap().dims.iter().all(|&b| b == 0);
        prop_assert_eq!(zero.is_quasi_iso(5).unwrap().is_ok(), acyclic);
    }

    #[test]
    fn tensoring_preserves_quasi_isomorphisms(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let q = Rationals;
        let x = random_complex(&q, &mut r, 5, 2);
        let y = random_complex(&q, &mut r, 5, 2);
        let dk = disk(&q, n).unwrap().with_max_degree(5);
        let sum = x.direct_sum(&dk).unwrap();
        let (i1, _) = injections(x.space(), dk.space());
        let (ts, yx) = y.tensor(&x, 5).unwrap();
        let (tt, ys) = y.tensor(&sum, 5).unwrap();
        let yi = TensorSpace::tensor_maps(&[&GradedLinearMap::identity(y.space()), &i1], &ts, &tt).unwrap();
        let g = ChainMap::new(yx, ys, yi).unwrap();
        prop_assert!(g.validate().is_ok());
        prop_assert!(g.is_quasi_iso(4).unwrap().is_ok());
    }

    #[test]
    fn coalgebra_validation_is_basis_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = Rationals;
        let cs = corpus_coalgebras(&q, 8);
        let (a, b) = (&cs[r.gen_range(0..cs.len())], &cs[r.gen_range(0..cs.len())]);
        let c = a.tensor(b, 8).unwrap();
        let p = permutation(&q, &mut r, c.space());
        prop_assert!(c.validate().is_ok());
        prop_assert!(reindex(&c, &p).validate().is_ok());
        let broken = ChainCoalgebra::new(c.complex().clone(), c.comul().scale(&q.from_i64(2)), c.counit().clone(), c.coaug().cloned()).unwrap();
        prop_assert!(broken.validate().is_err());
        prop_assert!(reindex(&broken, &p).validate().is_err());
        let unit = c.counit().compose(c.coaug().unwrap()).unwrap();
        prop_assert_eq!(unit, GradedLinearMap::identity(c.coaug().unwrap().source()));
    }

    #[test]
    fn cofree_comodules(seed in any::<u64>()) {
        let mut r = rng(seed);
        for_fields!(|f| {
            let cs = corpus_coalgebras(f, 6);
            let c = &cs[r.gen_range(0..cs.len())];
            let x = random_complex(f, &mut r, 6, 3);
            let m = Comodule::cofree(&x, c).unwrap();
            assert!(m.validate().is_ok());
            for k in 0..=6 {
                assert_eq!(m.coaction().rank(k), m.space().dim(k), "coaction injective in degree {k}");
            }
            let (co, incl) = coinvariants(&m).unwrap();
            assert!(co.space().same_dims(x.space()));
            assert!(incl.left_inverse().is_ok());
        });
    }

    #[test]
    fn cobar_squares_to_zero_and_respects_word_length(seed in any::<u64>()) {
        let mut r = rng(seed);
        for_fields!(|f| {
            let cs = corpus_coalgebras(f, 6);
            let c = &cs[r.gen_range(0..cs.len())];
            let x = random_complex(f, &mut r, 6, 2);
            let m = Comodule::cofree(&x, c).unwrap();
            let om = CobarComplex::new(&m, c, &Comodule::trivial(c, Side::Left).unwrap(), 6).unwrap();
            assert!(om.complex().validate().is_ok());
            assert!(om.word_length_violation().is_none());
            let h = homotopy_coinvariants(&m, c, 6).unwrap();
            assert!(h.cobar.space().same_dims(om.space()));
        });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn path_objects_are_acyclic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = Rationals;
        let d0 = r.gen_range(0..=2);
        let mut dims = vec![d0, d0 + r.gen_range(0..=2)];
        dims.extend((0..4).map(|_| r.gen_range(0..=3)));
        let x = random_complex_with_dims(&q, &mut r, dims);
        prop_assume!(x.homology(0).unwrap().dims[0] == 0);
        let p = path_object(&x).unwrap();
        let top = p.complex.reliable_up_to().unwrap();
        prop_assert!(p.complex.homology(top).unwrap().dims.iter().all(|&b| b == 0));
        prop_assert!(p.q.validate().is_ok());
    }

    #[test]
    fn postnikov_factorizations_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = f2();
        let c = corpus::exterior_bimonoid(&f, 2, 5).coalgebra().clone();
        let x = random_complex(&f, &mut r, 5, 2);
        let m = Comodule::cofree(&x, &c).unwrap();
        let n = r.gen_range(0..=3);
        let fac = postnikov_factorize(&to_zero(&m).unwrap(), n).unwrap();
        prop_assert!(fac.check().is_ok());
        prop_assert!(fac.equivalence_level >= n);
        for stage in &fac.tower {
            prop_assert!(stage.legs_injective());
            let id = stage.induced(&stage.projection, &stage.top).unwrap();
            prop_assert_eq!(id.map(), &GradedLinearMap::identity(stage.object.space()));
        }
    }
}

#[test]
fn connected_bimonoids_are_hopf() {
    let f = f2();
    for h in [
        corpus::exterior_bimonoid(&f, 1, 10),
        corpus::exterior_bimonoid(&f, 2, 10),
        corpus::truncated_polynomial_bimonoid(&f, 1, 4, 10),
        corpus::truncated_polynomial_bimonoid(&f, 2, 4, 10),
    ] {
        assert!(h.validate().is_ok());
        assert!(hopf_monoid_check(&h, 10).unwrap().iso.is_ok());
    }
    let q = Rationals;
    for n in [1, 3, 5] {
        let h = corpus::exterior_bimonoid(&q, n, 10);
        assert!(hopf_monoid_check(&h, 10).unwrap().iso.is_ok());
    }
}

#[test]
fn cotor_in_degree_zero_and_across_fields() {
    let q = Rationals;
    let f = f2();
    for (cq, c2) in corpus_coalgebras(&q, 8).into_iter().zip(corpus_coalgebras(&f, 8)) {
        let kq = Comodule::trivial(&cq, Side::Right).unwrap();
        let k2 = Comodule::trivial(&c2, Side::Right).unwrap();
        let hq = cotor(&kq, &cq, 8).unwrap().dims;
        let h2 = cotor(&k2, &c2, 8).unwrap().dims;
        assert_eq!(hq[0], 1);
        if cq.space().dims() == corpus::binomial_coalgebra(&q, 2, 4, 8).space().dims() {
            // the binomial coefficients are not units mod 2
            continue;
        }
        assert_eq!(hq, h2);
    }
}

#[test]
fn trivial_extensions_match_beta_eta() {
    let f = f2();
    let n = 6;
    let bases = [
        hgx_core::algstruct::ChainAlgebra::ground(&f, n),
        truncate_algebra(corpus::exterior_bimonoid(&f, 1, n).algebra(), n).unwrap(),
        truncate_algebra(corpus::exterior_bimonoid(&f, 2, n).algebra(), n).unwrap(),
    ];
    let hs = [corpus::exterior_bimonoid(&f, 2, n), corpus::truncated_polynomial_bimonoid(&f, 2, 4, n)];
    for b in &bases {
        for h in &hs {
            let ext = trivial_extension(b, h, n).unwrap();
            let g = galois_map(&ext).unwrap();
            let cmp = compare_with_beta_eta(&ext, &g).unwrap();
            assert!(cmp.identity.is_ok());
            assert!(cmp.phi_inverse_iso);
            assert!(verify_hhg(&ext, n).unwrap().passed());
        }
    }
}

#[test]
fn corings_validate_on_the_corpus() {
    let f = f2();
    let n = 6;
    let a = truncate_algebra(corpus::exterior_bimonoid(&f, 1, n).algebra(), n).unwrap();
    for c in corpus_coalgebras(&f, n) {
        let w = trivial_coring(&a, &c, n).unwrap();
        assert!(w.validate().is_ok());
    }
    let h = corpus::truncated_polynomial_bimonoid(&f, 1, 4, n);
    let ext = trivial_extension(&a, &h, n).unwrap();
    assert!(rho_coring(&ext).unwrap().validate().is_ok());
    let w = canonical_coring(ext.base(), ext.algebra().algebra(), ext.phi().map()).unwrap();
    assert!(w.validate().is_ok());
    assert!(galois_as_coring_morphism(&ext).unwrap().verdict.is_ok());
}
