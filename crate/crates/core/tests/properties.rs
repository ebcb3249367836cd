use std::sync::Arc;

use proptest::prelude::*;

use af_tail::cylinder::CylinderFunction;
use af_tail::expectation::{e0n, en};
use af_tail::groupoid::{psi, GroupoidFunction};
use af_tail::harness::random::{random_element, random_groupoid, random_scalar, stream_rng};
use af_tail::harness::random_cylinder;
use af_tail::tower::{represent_cylinder, AfElement};
use af_tail::{BratteliDiagram, Builtin, Scalar, Vertex};

fn diagram(b: usize, depth: usize) -> Arc<BratteliDiagram> {
    Arc::new(Builtin::ALL[b].diagram(depth).unwrap())
}

fn builtin() -> impl Strategy<Value = usize> {
    0..Builtin::ALL.len()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn cylinder_algebra(b in builtin(), seed: u64, l1 in 0usize..4, l2 in 0usize..4, l3 in 0usize..4) {
        let d = diagram(b, 4);
        let mut rng = stream_rng(seed, 0);
        let f = random_cylinder(&d, l1, &mut rng).unwrap();
        let g = random_cylinder(&d, l2, &mut rng).unwrap();
        let h = random_cylinder(&d, l3, &mut rng).unwrap();
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(f.add(&g).unwrap().mul(&h).unwrap(), f.mul(&h).unwrap().add(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().conjugate(), f.conjugate().mul(&g.conjugate()).unwrap());
        prop_assert!(f.sub(&f).unwrap().is_zero());
        let one = CylinderFunction::one(d.clone());
        prop_assert_eq!(f.mul(&one).unwrap(), f.clone());
    }

    #[test]
    fn refine_is_a_homomorphism(b in builtin(), seed: u64, level in 0usize..3, extra in 0usize..3) {
        let d = diagram(b, 5);
        let mut rng = stream_rng(seed, 0);
        let f = random_cylinder(&d, level, &mut rng).unwrap();
        let g = random_cylinder(&d, level, &mut rng).unwrap();
        let m = level + extra;
        let (fr, gr) = (f.refine(m).unwrap(), g.refine(m).unwrap());
        prop_assert_eq!(fr.level(), m);
        prop_assert_eq!(&fr, &f);
        let (sum, product) = (f.add(&g).unwrap().refine(m).unwrap(), f.mul(&g).unwrap().refine(m).unwrap());
        let (sum_r, product_r) = (fr.add(&gr).unwrap(), fr.mul(&gr).unwrap());
        prop_assert_eq!(sum.table(), sum_r.table());
        prop_assert_eq!(product.table(), product_r.table());
    }

    #[test]
    fn invariance_is_monotone(b in builtin(), seed: u64, n in 0usize..4) {
        let d = diagram(b, 4);
        let f = random_cylinder(&d, 4, &mut stream_rng(seed, 0)).unwrap();
        let e = en(&f, n).unwrap();
        for k in 0..=n {
            prop_assert!(e.is_invariant(k).unwrap());
        }
        // E0ₙ only rescales Eₙ by #s(αₙ), so it is invariant too.
        prop_assert!(e0n(&f, n).unwrap().is_invariant(n).unwrap());
    }

    #[test]
    fn expectation_is_positive_and_star_preserving(b in builtin(), seed: u64, n in 0usize..4) {
        let d = diagram(b, 4);
        let f = random_cylinder(&d, 4, &mut stream_rng(seed, 0)).unwrap();
        prop_assert_eq!(en(&f.conjugate(), n).unwrap(), en(&f, n).unwrap().conjugate());
        let square = en(&f.conjugate().mul(&f).unwrap(), n).unwrap();
        prop_assert!(square.table().iter().all(|s| s.is_real() && !s.re().is_negative()));
        prop_assert!(square.is_zero() == f.is_zero());
    }

    #[test]
    fn af_elements_form_a_star_algebra(b in builtin(), seed: u64, n in 0usize..4) {
        let d = diagram(b, 4);
        let mut rng = stream_rng(seed, 0);
        let x = random_element(&d, n, &mut rng).unwrap();
        let y = random_element(&d, n, &mut rng).unwrap();
        let z = random_element(&d, n, &mut rng).unwrap();
        let c = random_scalar(&mut rng);
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().adjoint(), y.adjoint().mul(&x.adjoint()).unwrap());
        prop_assert_eq!(x.scalar_mul(&c).adjoint(), x.adjoint().scalar_mul(&c.conj()));
        prop_assert_eq!(x.adjoint().adjoint(), x.clone());
        let one = AfElement::identity(d.clone(), n).unwrap();
        prop_assert_eq!(one.mul(&x).unwrap(), x.clone());
        prop_assert_eq!(x.mul(&one).unwrap(), x);
    }

    #[test]
    fn cylinder_representation_is_a_star_homomorphism(b in builtin(), seed: u64, n in 0usize..4) {
        let d = diagram(b, 4);
        let mut rng = stream_rng(seed, 0);
        let f = random_cylinder(&d, n, &mut rng).unwrap();
        let g = random_cylinder(&d, n, &mut rng).unwrap();
        let (rf, rg) = (represent_cylinder(&f).unwrap(), represent_cylinder(&g).unwrap());
        prop_assert_eq!(represent_cylinder(&f.mul(&g).unwrap()).unwrap(), rf.mul(&rg).unwrap());
        prop_assert_eq!(represent_cylinder(&f.add(&g).unwrap()).unwrap(), rf.add(&rg).unwrap());
        prop_assert_eq!(represent_cylinder(&f.conjugate()).unwrap(), rf.adjoint());
    }

    #[test]
    fn convolution_is_associative(b in builtin(), seed: u64, m in 0usize..4, s in prop::array::uniform3(0usize..4)) {
        let d = diagram(b, 4);
        let mut rng = stream_rng(seed, 0);
        let fs: Vec<GroupoidFunction> =
            s.iter().map(|&k| random_groupoid(&d, k.min(m), m, &mut rng).unwrap()).collect();
        let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
        prop_assert_eq!(f.convolve(g).unwrap().convolve(h).unwrap(), f.convolve(&g.convolve(h).unwrap()).unwrap());
        prop_assert_eq!(f.convolve(g).unwrap().involution(), g.involution().convolve(&f.involution()).unwrap());
        let wide = f.widen(m, m).unwrap();
        prop_assert_eq!(&wide, f);
        prop_assert!(f.is_supported_in(f.support_level()).unwrap());
    }

    #[test]
    fn psi_is_multiplicative(b in builtin(), seed: u64, n in 0usize..3) {
        let d = diagram(b, 3);
        let mut rng = stream_rng(seed, 0);
        let x = random_element(&d, n, &mut rng).unwrap();
        let y = random_element(&d, n, &mut rng).unwrap();
        let (px, py) = (psi(&x).unwrap(), psi(&y).unwrap());
        prop_assert_eq!(psi(&x.mul(&y).unwrap()).unwrap(), px.convolve(&py).unwrap());
        prop_assert_eq!(psi(&x.add(&y).unwrap()).unwrap(), px.add(&py).unwrap());
        prop_assert_eq!(psi(&x.embed().unwrap()).unwrap(), px);
    }
}

#[test]
fn indicators_partition_unity() {
    for b in Builtin::ALL {
        let d = Arc::new(b.diagram(4).unwrap());
        let one = CylinderFunction::one(d.clone());
        for n in 0..=4 {
            let mut by_path = CylinderFunction::zero(d.clone());
            for gamma in d.enumerate_paths(n).unwrap() {
                by_path = by_path.add(&CylinderFunction::indicator_path(d.clone(), &gamma).unwrap()).unwrap();
            }
            assert_eq!(by_path, one);
            let mut by_vertex = CylinderFunction::zero(d.clone());
            for v in 0..d.vertex_counts()[n] {
                let iv = CylinderFunction::indicator_vertex(d.clone(), Vertex::new(n, v)).unwrap();
                by_vertex = by_vertex.add(&iv).unwrap();
            }
            assert_eq!(by_vertex, one, "{} level {n}", b.name());
        }
    }
}

#[test]
fn path_indicator_times_vertex_indicator() {
    // I_γ · Iᵛ = [r(γ) = v] · I_γ
    let d = Arc::new(Builtin::Pascal.diagram(4).unwrap());
    for gamma in d.enumerate_paths(3).unwrap() {
        let ig = CylinderFunction::indicator_path(d.clone(), &gamma).unwrap();
        for v in 0..d.vertex_counts()[3] {
            let iv = CylinderFunction::indicator_vertex(d.clone(), Vertex::new(3, v)).unwrap();
            let expected = if gamma.range().index == v { ig.clone() } else { CylinderFunction::zero(d.clone()) };
            assert_eq!(ig.mul(&iv).unwrap(), expected);
        }
    }
}

#[test]
fn path_indicator_factors_through_last_edge() {
    // I_γ = I_γ' · ^{γₙ}I
    for b in Builtin::ALL {
        let d = Arc::new(b.diagram(4).unwrap());
        for gamma in d.enumerate_paths(3).unwrap() {
            let last = *gamma.edges().last().unwrap();
            let prefix = CylinderFunction::indicator_path(d.clone(), &gamma.prefix(2)).unwrap();
            let edge = CylinderFunction::indicator_edge(d.clone(), last).unwrap();
            assert_eq!(prefix.mul(&edge).unwrap(), CylinderFunction::indicator_path(d.clone(), &gamma).unwrap());
        }
    }
}

#[test]
fn car_embedding_of_a_level_one_unit() {
    // e¹_{a,b} = e²_{aa',ba'} + e²_{ab',bb'}
    let d = Arc::new(Builtin::Car.diagram(3).unwrap());
    let ones = d.enumerate_paths(1).unwrap();
    let (a, b) = (&ones[0], &ones[1]);
    let (a2, b2) = (d.edges_from(Vertex::new(1, 0)).unwrap()[0], d.edges_from(Vertex::new(1, 0)).unwrap()[1]);
    let unit = |g: &af_tail::FinitePath, h: &af_tail::FinitePath| AfElement::matrix_unit(d.clone(), g, h).unwrap();
    let expected = unit(&a.extended(a2), &b.extended(a2)).add(&unit(&a.extended(b2), &b.extended(b2))).unwrap();
    assert_eq!(unit(a, b).embed().unwrap(), expected);
}

#[test]
fn indicator_represents_diagonal_unit() {
    // ρ(I_γ) = eᵐ_{γ,γ}
    for b in Builtin::ALL {
        let d = Arc::new(b.diagram(3).unwrap());
        for gamma in d.enumerate_paths(3).unwrap() {
            let rho = represent_cylinder(&CylinderFunction::indicator_path(d.clone(), &gamma).unwrap()).unwrap();
            assert_eq!(rho, AfElement::matrix_unit(d.clone(), &gamma, &gamma).unwrap());
        }
    }
}

#[test]
fn units_are_nonzero_and_compose() {
    // e_{γ,δ} e_{δ,γ} = e_{γ,γ} ≠ 0
    let d = Arc::new(Builtin::Fibonacci.diagram(4).unwrap());
    let level = d.path_level(3).unwrap();
    for block in level.blocks() {
        for &g in block {
            for &h in block {
                let (g, h) = (level.path(g), level.path(h));
                let gh = AfElement::matrix_unit(d.clone(), g, h).unwrap();
                let hg = AfElement::matrix_unit(d.clone(), h, g).unwrap();
                let gg = gh.mul(&hg).unwrap();
                assert!(!gg.is_zero());
                assert_eq!(gg, AfElement::matrix_unit(d.clone(), g, g).unwrap());
                assert_eq!(gg.entry(g, g).unwrap(), Scalar::one());
            }
        }
    }
}
