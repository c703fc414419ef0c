//! Rewriting operations checked against matrix representations.

use chevalley::group::Group;
use chevalley::repr::{Oracle, RepKind, Representation};
use chevalley::ring::Ring;
use chevalley::words::{
    collect_signed, conj_levi, expand_to_fundamental, split_levi, weyl_conjugate, Generator, UnipotentParams, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn group(ty: &str, ring: &str) -> Group {
    Group::new(ty.parse().unwrap(), ring.parse().unwrap())
}

fn xs(terms: &[(chevalley::roots::RootId, chevalley::ring::Elem)]) -> Word {
    Word::new(terms.iter().map(|&(a, v)| Generator::x(a, v)).collect())
}

#[test]
fn commutator_expansions_match_adjoint_commutators() {
    let systems = ["A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "B4", "C4", "A4"];
    for ty in systems {
        for ring in ["zmod:5", "zmod:7"] {
            let g = group(ty, ring);
            let rep = Representation::new(&g, RepKind::Adjoint).unwrap();
            let rs = g.system();
            let r = &g.ring;
            let (xi, zeta) = (r.from_i64(2), r.from_i64(3));
            for a in rs.roots() {
                for b in rs.roots() {
                    if b == rs.neg(a) || b == a {
                        continue;
                    }
                    // the formula is polynomial in ξ, ζ: skip pairs with no terms cheaply
                    let lhs = Word::new(vec![
                        Generator::x(a, xi),
                        Generator::x(b, zeta),
                        Generator::x(a, r.neg(xi)),
                        Generator::x(b, r.neg(zeta)),
                    ]);
                    let terms = g.constants().commutator_expansion(r, a, b, xi, zeta).unwrap();
                    let rhs = xs(&terms);
                    assert!(rep.verify_equal(&g, &lhs, &rhs).unwrap(), "{ty} over {ring}: {:?} {:?}", rs.vector(a), rs.vector(b));
                }
            }
        }
    }
}

#[test]
fn weyl_conjugation_matches_oracle() {
    for (ty, ring) in [("A2", "zmod:5"), ("B3", "zmod:9"), ("G2", "gf:7"), ("C3", "zmod:4")] {
        let g = group(ty, ring);
        let oracle = Oracle::faithful(&g).unwrap();
        let rs = g.system();
        let r = &g.ring;
        let xi = r.from_i64(3);
        for a in rs.roots() {
            for b in rs.roots() {
                let lhs = Word::new(vec![Generator::w(a, r.one()), Generator::x(b, xi), Generator::w(a, r.neg(r.one()))]);
                let (c, v) = weyl_conjugate(&g, a, b, xi);
                assert!(oracle.verify_equal(&g, &lhs, &xs(&[(c, v)])).unwrap(), "{ty}");
            }
        }
    }
}

#[test]
fn fundamental_expansion_preserves_elements() {
    for (ty, ring) in [("A2", "zmod:5"), ("B3", "zmod:6"), ("G2", "gf:5"), ("F4", "gf:3"), ("D4", "zmod:4")] {
        let g = group(ty, ring);
        let oracle = Oracle::faithful(&g).unwrap();
        let rs = g.system();
        for b in rs.roots() {
            let w = xs(&[(b, g.ring.from_i64(2))]);
            let e = expand_to_fundamental(&g, &w).unwrap();
            assert!(e.gens.iter().all(|x| rs.is_fundamental(x.root)));
            assert!(oracle.verify_equal(&g, &w, &e).unwrap(), "{ty} {:?}", rs.vector(b));
        }
    }
}

fn random_unipotent(g: &Group, rng: &mut ChaCha8Rng, positive: bool, len: usize) -> Vec<(chevalley::roots::RootId, chevalley::ring::Elem)> {
    let rs = g.system();
    let roots: Vec<_> = if positive { rs.positive_roots().collect() } else { rs.negative_roots().collect() };
    let size = g.ring.size().unwrap() as i64;
    (0..len)
        .map(|_| (roots[rng.gen_range(0..roots.len())], g.ring.from_i64(rng.gen_range(0..size))))
        .collect()
}

#[test]
fn collection_and_levi_splitting_preserve_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (ty, ring) in [("A3", "zmod:6"), ("B3", "gf:5"), ("G2", "gf:7"), ("C3", "zmod:9"), ("D4", "gf:3"), ("F4", "gf:5")] {
        let g = group(ty, ring);
        let oracle = Oracle::faithful(&g).unwrap();
        let l = g.rank();
        for positive in [true, false] {
            for _ in 0..4 {
                let raw = random_unipotent(&g, &mut rng, positive, 12);
                let u = collect_signed(&g, positive, raw.iter().copied()).unwrap();
                assert!(oracle.verify_equal(&g, &xs(&raw), &u.to_word()).unwrap(), "collect {ty}");
                assert_eq!(collect_signed(&g, positive, u.terms.iter().copied()).unwrap(), u);
                for r in [1, l] {
                    let (d, s) = split_levi(&g, &u, r, positive).unwrap();
                    assert!(d.terms.iter().all(|&(a, _)| g.system().coeff(a, r) == 0));
                    assert!(s.terms.iter().all(|&(a, _)| g.system().coeff(a, r) != 0));
                    let joined = d.to_word().concat(&s.to_word());
                    assert!(oracle.verify_equal(&g, &joined, &u.to_word()).unwrap(), "split {ty}");
                    let merged = collect_signed(&g, positive, d.terms.iter().chain(&s.terms).copied()).unwrap();
                    assert_eq!(merged, u);

                    // conjugate the Σ-part by a Levi element of either sign
                    for sign in [true, false] {
                        let levi: Vec<_> = random_unipotent(&g, &mut rng, sign, 6)
                            .into_iter()
                            .filter(|&(a, _)| g.system().coeff(a, r) == 0)
                            .collect();
                        let c = conj_levi(&g, &levi, &s, positive).unwrap();
                        assert!(c.terms.iter().all(|&(a, _)| g.system().coeff(a, r) != 0));
                        let inv: Vec<_> = levi.iter().rev().map(|&(a, v)| (a, g.ring.neg(v))).collect();
                        let lhs = xs(&levi).concat(&s.to_word()).concat(&xs(&inv));
                        assert!(oracle.verify_equal(&g, &lhs, &c.to_word()).unwrap(), "conj {ty}");
                    }
                }
            }
        }
    }
}

#[test]
fn conj_levi_b2_example() {
    let g = group("B2", "zmod:5");
    let rs = g.system();
    let r = &g.ring;
    let d = [(rs.neg(rs.simple(1)), r.from_i64(2))];
    let s = UnipotentParams { terms: vec![(rs.simple(2), r.from_i64(3))] };
    let out = conj_levi(&g, &d, &s, true).unwrap();
    let rep = Representation::new(&g, RepKind::Adjoint).unwrap();
    let lhs = xs(&d).concat(&s.to_word()).concat(&xs(&[(d[0].0, r.from_i64(-2))]));
    assert!(rep.verify_equal(&g, &lhs, &out.to_word()).unwrap());
    assert!(out.terms.iter().all(|&(a, _)| rs.coeff(a, 2) > 0));
}

#[test]
fn representation_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (ty, ring) in [("A2", "zmod:12"), ("C2", "gf:7"), ("B3", "zmod:4")] {
        let g = group(ty, ring);
        let rs = g.system();
        let ids: Vec<_> = rs.roots().collect();
        let size = g.ring.size().unwrap() as i64;
        for rep in Oracle::faithful(&g).unwrap().reps() {
            for _ in 0..5 {
                let mut w = |n: usize| {
                    Word::new(
                        (0..n)
                            .map(|_| Generator::x(ids[rng.gen_range(0..ids.len())], g.ring.from_i64(rng.gen_range(0..size))))
                            .collect(),
                    )
                };
                let (w1, w2) = (w(6), w(6));
                let lhs = rep.eval(&g, &w1.concat(&w2)).unwrap();
                let rhs = rep.eval(&g, &w1).unwrap().mul(&g.ring, &rep.eval(&g, &w2).unwrap());
                assert_eq!(lhs, rhs);
            }
            let a = ids[0];
            let add = rep.eval(&g, &xs(&[(a, g.ring.from_i64(2)), (a, g.ring.from_i64(5))])).unwrap();
            assert_eq!(add, rep.eval(&g, &xs(&[(a, g.ring.from_i64(7))])).unwrap());
        }
    }
}

#[test]
fn verify_equal_examples() {
    let g = group("A2", "zmod:3");
    let rs = g.system();
    let r = &g.ring;
    let rep = Representation::new(&g, RepKind::NaturalA).unwrap();
    let a = rs.simple(1);
    let w = xs(&[(a, r.one()), (rs.simple(2), r.from_i64(2))]);
    assert!(rep.verify_equal(&g, &w, &w).unwrap());
    assert!(rep.verify_equal(&g, &w, &w.concat(&xs(&[(a, r.zero())]))).unwrap());
    assert!(!rep.verify_equal(&g, &xs(&[(a, r.one())]), &xs(&[(a, r.from_i64(2))])).unwrap());
}

#[test]
fn natural_images_have_determinant_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (ty, ring) in [("A1", "zmod:9"), ("A2", "zmod:10"), ("A3", "gf:7")] {
        let g = group(ty, ring);
        let rep = Representation::new(&g, RepKind::NaturalA).unwrap();
        let rs = g.system();
        let ids: Vec<_> = rs.roots().collect();
        let n = g.ring.size().unwrap() as i64;
        for _ in 0..10 {
            let w = Word::new(
                (0..8)
                    .map(|_| Generator::x(ids[rng.gen_range(0..ids.len())], g.ring.from_i64(rng.gen_range(0..n))))
                    .collect(),
            );
            let m = rep.eval(&g, &w).unwrap();
            assert_eq!(det(&g.ring, &m.rows()), g.ring.one());
        }
    }
}

/// Laplace expansion; fine for dimension ≤ 4.
fn det(ring: &Ring, m: &[Vec<chevalley::ring::Elem>]) -> chevalley::ring::Elem {
    if m.len() == 1 {
        return m[0][0];
    }
    let mut acc = ring.zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<_>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &v)| v).collect())
            .collect();
        let term = ring.mul(m[0][j], det(ring, &minor));
        acc = if j % 2 == 0 { ring.add(acc, term) } else { ring.sub(acc, term) };
    }
    acc
}
