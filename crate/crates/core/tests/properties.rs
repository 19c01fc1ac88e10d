use std::sync::Arc;

use flasque::cohomology::{h1, profile, tate_minus1, SubgroupMode};
use flasque::groups::{
    all_sylow_cyclic, catalog, catalog_names, cyclic, dihedral, direct_product, group_to_value, parse_group,
    zgroup_presentation, FiniteGroup,
};
use flasque::lattices::{lattice_to_value, parse_lattice, GLattice};
use flasque::monomial::{extension_class, parse_monomial_action, MonomialAction};
use flasque::random::{random_lattice, random_matrix, random_unimodular, rng};
use flasque::resolutions::{flabby_resolution, is_invertible};
use flasque::zlinalg::{smith_invariants, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

const GROUPS: &[&str] = &["C2", "C3", "C4", "C6", "V4", "S3", "D8", "Q8", "C2xC4", "A4"];

fn group(i: usize) -> Arc<FiniteGroup> {
    Arc::new(catalog(GROUPS[i % GROUPS.len()]).unwrap())
}

fn lattice(seed: u64, gi: usize, max_rank: usize) -> GLattice {
    random_lattice(&mut rng(seed), &group(gi), max_rank).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn smith_decomposes(seed in any::<u64>(), rows in 0usize..7, cols in 0usize..7) {
        let a = random_matrix(&mut rng(seed), rows, cols, 20);
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.invariant_factors(), smith_invariants(&a));
    }

    #[test]
    fn smith_invariants_survive_unimodular_change(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, n + 1, 10);
        let (u, _) = random_unimodular(&mut r, n, 10);
        let (v, _) = random_unimodular(&mut r, n + 1, 10);
        prop_assert_eq!(smith_invariants(&(&(&u * &a) * &v)), smith_invariants(&a));
    }

    #[test]
    fn dual_is_an_involution(seed in any::<u64>(), gi in 0usize..10) {
        let m = lattice(seed, gi, 6);
        prop_assert!(m.dual().verify_homomorphism());
        prop_assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn lattice_documents_round_trip(seed in any::<u64>(), gi in 0usize..10) {
        let m = lattice(seed, gi, 6);
        prop_assert_eq!(parse_lattice(&lattice_to_value(&m)).unwrap(), m);
    }

    #[test]
    fn prime_power_and_full_profiles_agree(seed in any::<u64>(), gi in 0usize..10) {
        let m = lattice(seed, gi, 5);
        let pp = profile(&m, SubgroupMode::PrimePower).unwrap();
        let all = profile(&m, SubgroupMode::All).unwrap();
        prop_assert_eq!(pp.is_flabby, all.is_flabby);
        prop_assert_eq!(pp.is_coflabby, all.is_coflabby);
        for e in &pp.entries {
            prop_assert_eq!(Some(e), all.entry(e.subgroup.members()));
        }
    }

    #[test]
    fn cohomology_is_additive(seed in any::<u64>(), gi in 0usize..10) {
        let m = lattice(seed, gi, 4);
        let n = lattice(seed.wrapping_add(1), gi, 4);
        let s = m.direct_sum(&n).unwrap();
        for h in m.group().subgroups().unwrap() {
            prop_assert_eq!(tate_minus1(h, &s).unwrap(), tate_minus1(h, &m).unwrap().direct_sum(&tate_minus1(h, &n).unwrap()));
            prop_assert_eq!(h1(h, &s).unwrap(), h1(h, &m).unwrap().direct_sum(&h1(h, &n).unwrap()));
        }
    }

    #[test]
    fn dual_swaps_flabby_and_coflabby(seed in any::<u64>(), gi in 0usize..10) {
        let m = lattice(seed, gi, 5);
        let p = profile(&m, SubgroupMode::All).unwrap();
        let q = profile(&m.dual(), SubgroupMode::All).unwrap();
        prop_assert_eq!(p.is_flabby, q.is_coflabby);
        prop_assert_eq!(p.is_coflabby, q.is_flabby);
    }

    #[test]
    fn resolutions_are_exact_and_flabby(seed in any::<u64>(), gi in 0usize..10) {
        let m = lattice(seed, gi, 5);
        let res = flabby_resolution(&m).unwrap();
        prop_assert!(res.verify_exactness());
        prop_assert!(res.p.is_visibly_permutation());
        prop_assert!(profile(&res.f, SubgroupMode::All).unwrap().is_flabby);
    }

    #[test]
    fn invertible_sums(seed in any::<u64>(), gi in 0usize..10) {
        let m = lattice(seed, gi, 4);
        let n = lattice(seed ^ 0x5555, gi, 4);
        let (dm, dn) = (is_invertible(&m).unwrap(), is_invertible(&n).unwrap());
        let ds = is_invertible(&m.direct_sum(&n).unwrap()).unwrap();
        if dm.invertible && dn.invertible {
            prop_assert!(ds.invertible);
        }
        if ds.invertible {
            prop_assert!(ds.verify_witness());
            // summands of invertible lattices are invertible
            prop_assert!(dm.invertible && dn.invertible);
        }
    }

    #[test]
    fn rescaling_witnesses_clear_coefficients(seed in any::<u64>(), gi in 0usize..10, d in 1u64..7) {
        let mut r = rng(seed);
        let m = random_lattice(&mut r, &group(gi), 3).unwrap();
        let pure = MonomialAction::purely_monomial(m.clone(), d).unwrap();
        // a coboundary b·A(σ) − b is always cleared by rescaling with b
        let b: Vec<u64> = (0..m.rank()).map(|_| r.gen_range(0..d)).collect();
        let twisted = pure.rescale(&b);
        prop_assert!(twisted.verify_cocycle());
        let ext = extension_class(&twisted).unwrap();
        prop_assert!(ext.vanishes_at_d && ext.vanishes_stably);
        let back = twisted.rescale(ext.rescaling.as_ref().unwrap());
        prop_assert!(back.is_purely_monomial());
        prop_assert_eq!(parse_monomial_action(&twisted.to_value()).unwrap(), twisted);
    }
}

#[test]
fn catalog_group_documents_round_trip() {
    for name in catalog_names() {
        let g = catalog(&name).unwrap();
        let back = parse_group(&group_to_value(&g)).unwrap();
        assert_eq!(back.canonical_key(), g.canonical_key(), "{name}");
        assert_eq!(back.generators(), g.generators(), "{name}");
    }
}

#[test]
fn zgroup_recognition_matches_sylow_test_up_to_32() {
    let mut groups: Vec<FiniteGroup> = (1..=32).map(cyclic).collect();
    groups.extend((4..=32).step_by(2).map(dihedral));
    for a in 2..=16 {
        for b in 2..=(32 / a) {
            groups.push(direct_product(&cyclic(a), &cyclic(b)));
        }
    }
    for name in ["Q8", "S3", "A4", "U32", "S3xC3", "S3xC5", "Q8xC3", "D8xC2", "A4xC2"] {
        groups.push(catalog(name).unwrap());
    }
    for g in &groups {
        assert!(g.order() <= 32);
        let pres = zgroup_presentation(g);
        assert_eq!(pres.is_some(), all_sylow_cyclic(g), "{:?}", g.name());
        if let Some(p) = pres {
            assert!(p.verify(g));
        }
    }
}

#[test]
fn unimodular_inverse_pairs() {
    let mut r = rng(99);
    for n in 1..7 {
        let (u, v) = random_unimodular(&mut r, n, 20);
        assert!((&u * &v).is_identity());
        assert_eq!(u.determinant().unwrap() * v.determinant().unwrap(), BigInt::from(1));
    }
    assert!(IntMatrix::identity(0).is_identity());
}
