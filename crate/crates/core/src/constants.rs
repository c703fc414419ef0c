//! Structure constants of a Chevalley basis and the commutator formula.
//!
//! Signs are fixed by taking `N_{αβ} = p + 1 > 0` on extraspecial pairs
//! and propagating through the standard quadruple and triangle identities.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};
use crate::roots::{RootId, RootSystem};

/// One factor `x_γ(coeff · ξ^i · ζ^j)` of `[x_α(ξ), x_β(ζ)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutatorRow {
    pub i: u8,
    pub j: u8,
    pub gamma: RootId,
    pub coeff: i64,
}

#[derive(Debug)]
pub struct StructureConstants {
    system: Arc<RootSystem>,
    n: Vec<i32>,
    rows: Vec<Vec<CommutatorRow>>,
    weyl_signs: Vec<i8>,
}

impl StructureConstants {
    pub fn compute(system: Arc<RootSystem>) -> StructureConstants {
        let n = structure_table(&system);
        let mut sc = StructureConstants { system, n, rows: Vec::new(), weyl_signs: Vec::new() };
        sc.rows = commutator_table(&sc);
        sc.weyl_signs = weyl_sign_table(&sc);
        sc
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    fn idx(&self, a: RootId, b: RootId) -> usize {
        a.index() * self.system.num_roots() + b.index()
    }

    /// `N_{αβ}`, zero when `α + β` is not a root.
    pub fn n(&self, a: RootId, b: RootId) -> i32 {
        self.n[self.idx(a, b)]
    }

    /// Rows of the commutator formula for `[x_α, x_β]`, in the order in which
    /// the factors multiply (increasing `i + j`). Empty for `β = ±α`.
    pub fn rows(&self, a: RootId, b: RootId) -> &[CommutatorRow] {
        &self.rows[self.idx(a, b)]
    }

    /// The factors of `[x_α(ξ), x_β(ζ)] = x_α(ξ)x_β(ζ)x_α(ξ)⁻¹x_β(ζ)⁻¹`.
    pub fn commutator_expansion(
        &self,
        ring: &Ring,
        a: RootId,
        b: RootId,
        xi: Elem,
        zeta: Elem,
    ) -> Result<Vec<(RootId, Elem)>> {
        if b == self.system.neg(a) {
            return Err(Error::OppositeRoots);
        }
        let mut out = Vec::new();
        if ring.is_zero(xi) || ring.is_zero(zeta) {
            return Ok(out);
        }
        for row in self.rows(a, b) {
            let p = ring.mul(
                ring.pow(xi, row.i as i64).expect("positive power"),
                ring.pow(zeta, row.j as i64).expect("positive power"),
            );
            let v = ring.mul(ring.from_i64(row.coeff), p);
            if !ring.is_zero(v) {
                out.push((row.gamma, v));
            }
        }
        Ok(out)
    }

    /// `η` with `w_α(1) x_β(ξ) w_α(1)⁻¹ = x_{w_α(β)}(η ξ)`.
    pub fn weyl_sign(&self, a: RootId, b: RootId) -> i32 {
        self.weyl_signs[self.idx(a, b)] as i32
    }

    /// Dimension of the Lie algebra: roots first, then the simple coroots.
    pub fn lie_dim(&self) -> usize {
        self.system.num_roots() + self.system.rank()
    }

    /// `[x, y]` on Chevalley basis vectors (indices as in [`Self::lie_dim`]).
    pub fn bracket(&self, x: usize, y: usize) -> Vec<(usize, i64)> {
        let rs = &*self.system;
        let nr = rs.num_roots();
        match (x < nr, y < nr) {
            (true, true) => {
                let (a, b) = (RootId(x as u16), RootId(y as u16));
                if b == rs.neg(a) {
                    rs.coroot(a)
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(k, &c)| (nr + k, c as i64))
                        .collect()
                } else {
                    match rs.sum(a, b) {
                        Some(c) => vec![(c.index(), self.n(a, b) as i64)],
                        None => Vec::new(),
                    }
                }
            }
            (false, true) => {
                let b = RootId(y as u16);
                let k = rs.pairing_simple(b, x - nr) as i64;
                if k == 0 {
                    Vec::new()
                } else {
                    vec![(y, k)]
                }
            }
            (true, false) => self.bracket(y, x).into_iter().map(|(i, c)| (i, -c)).collect(),
            (false, false) => Vec::new(),
        }
    }

    /// `ad e_α` applied to a dense vector.
    pub fn ad(&self, a: RootId, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; v.len()];
        for (k, &c) in v.iter().enumerate() {
            if c != 0 {
                for (i, m) in self.bracket(a.index(), k) {
                    out[i] += m * c;
                }
            }
        }
        out
    }

    /// `exp(t · ad e_α) v` over the integers.
    pub fn exp_ad(&self, a: RootId, t: i64, v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        let mut term = v.to_vec();
        for k in 1..=4i64 {
            term = self.ad(a, &term);
            if term.iter().all(|&c| c == 0) {
                break;
            }
            for c in term.iter_mut() {
                debug_assert_eq!((*c * t) % k, 0);
                *c = *c * t / k;
            }
            for (o, c) in out.iter_mut().zip(&term) {
                *o += c;
            }
        }
        out
    }
}

/// Height-ordered computation of `N_{αβ}` for all pairs.
fn structure_table(rs: &RootSystem) -> Vec<i32> {
    let nr = rs.num_roots();
    let mut n = vec![0i32; nr * nr];
    let mut known = vec![false; nr * nr];
    let at = |a: RootId, b: RootId| a.index() * nr + b.index();

    for g in rs.positive_roots() {
        if rs.is_simple(g) {
            continue;
        }
        // positive pairs summing to g, smaller root first
        let pairs: Vec<(RootId, RootId)> = rs
            .positive_roots()
            .filter_map(|x| rs.combine(1, g, -1, x).filter(|y| rs.is_positive(*y) && x < *y).map(|y| (x, y)))
            .collect();
        let (alpha, beta) = pairs[0];
        let p = rs.string_below(alpha, beta);
        let n_ab = p + 1;
        let ng = rs.norm(g) as i64;
        let set = |n: &mut Vec<i32>, known: &mut Vec<bool>, a: RootId, b: RootId, v: i32| {
            n[at(a, b)] = v;
            n[at(b, a)] = -v;
            known[at(a, b)] = true;
            known[at(b, a)] = true;
        };
        set(&mut n, &mut known, alpha, beta, n_ab);
        for &(xi, eta) in &pairs[1..] {
            let look = |a: RootId, b: RootId| lookup_n(rs, &n, &known, a, b) as i64;
            let mut acc = 0i64;
            // quadruple identity for α + β − ξ − η = 0
            if let Some(d) = rs.combine(1, beta, -1, xi) {
                let t = look(beta, rs.neg(xi)) * look(alpha, rs.neg(eta));
                debug_assert_eq!((t * ng) % rs.norm(d) as i64, 0);
                acc += t * ng / rs.norm(d) as i64;
            }
            if let Some(d) = rs.combine(1, alpha, -1, xi) {
                let t = look(rs.neg(xi), alpha) * look(beta, rs.neg(eta));
                acc += t * ng / rs.norm(d) as i64;
            }
            assert_eq!(acc % n_ab as i64, 0, "non-integral structure constant");
            set(&mut n, &mut known, xi, eta, (acc / n_ab as i64) as i32);
        }
    }
    for a in rs.roots() {
        for b in rs.roots() {
            if rs.sum(a, b).is_some() {
                n[at(a, b)] = lookup_n(rs, &n, &known, a, b);
            }
        }
    }
    n
}

/// `N_{ab}` from the positive-pair entries via `N_{−a,−b} = −N_{ab}` and the
/// triangle identity `N_{ab}/|c|² = N_{bc}/|a|² = N_{ca}/|b|²` for `a + b + c = 0`.
fn lookup_n(rs: &RootSystem, n: &[i32], known: &[bool], a: RootId, b: RootId) -> i32 {
    let nr = rs.num_roots();
    let Some(s) = rs.sum(a, b) else { return 0 };
    let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
    if pa && pb {
        assert!(known[a.index() * nr + b.index()], "structure constant requested out of order");
        return n[a.index() * nr + b.index()];
    }
    if !pa && !pb {
        return -lookup_n(rs, n, known, rs.neg(a), rs.neg(b));
    }
    let c = rs.neg(s);
    let (na, nb, nc) = (rs.norm(a), rs.norm(b), rs.norm(c));
    if rs.is_positive(b) == rs.is_positive(c) {
        let v = lookup_n(rs, n, known, b, c) * nc;
        debug_assert_eq!(v % na, 0);
        v / na
    } else {
        let v = lookup_n(rs, n, known, c, a) * nc;
        debug_assert_eq!(v % nb, 0);
        v / nb
    }
}

/// `N_{α,β} N_{α,α+β} ⋯ N_{α,(i−1)α+β} / i!`.
fn m_coeff(sc: &StructureConstants, a: RootId, b: RootId, i: i32) -> i64 {
    let rs = sc.system();
    let mut num = 1i64;
    let mut cur = b;
    let mut fact = 1i64;
    for k in 0..i {
        let next = rs.sum(a, cur).expect("root string");
        num *= sc.n(a, cur) as i64;
        cur = next;
        fact *= (k + 1) as i64;
    }
    assert_eq!(num % fact, 0);
    num / fact
}

fn commutator_table(sc: &StructureConstants) -> Vec<Vec<CommutatorRow>> {
    let rs = sc.system();
    let nr = rs.num_roots();
    let mut rows = vec![Vec::new(); nr * nr];
    for a in rs.roots() {
        for b in rs.roots() {
            if a == b || b == rs.neg(a) || rs.sum(a, b).is_none() {
                continue;
            }
            let mut out = Vec::new();
            for s in 2..=5i32 {
                for i in 1..s {
                    let j = s - i;
                    let Some(g) = rs.combine(i, a, j, b) else { continue };
                    let coeff = match (i, j) {
                        (i, 1) => m_coeff(sc, a, b, i),
                        (1, j) => -m_coeff(sc, b, a, j),
                        (3, 2) => {
                            let ab = rs.sum(a, b).unwrap();
                            let v = 2 * m_coeff(sc, ab, a, 2);
                            assert_eq!(v % 3, 0);
                            v / 3
                        }
                        (2, 3) => {
                            let ab = rs.sum(a, b).unwrap();
                            let v = m_coeff(sc, ab, b, 2);
                            assert_eq!(v % 3, 0);
                            v / 3
                        }
                        _ => unreachable!("reduced rank-two subsystems have no ({i},{j}) term"),
                    };
                    out.push(CommutatorRow { i: i as u8, j: j as u8, gamma: g, coeff });
                }
            }
            rows[a.index() * nr + b.index()] = out;
        }
    }
    rows
}

fn weyl_sign_table(sc: &StructureConstants) -> Vec<i8> {
    let rs = sc.system();
    let nr = rs.num_roots();
    let dim = sc.lie_dim();
    let mut signs = vec![0i8; nr * nr];
    for a in rs.roots() {
        let na = rs.neg(a);
        for b in rs.roots() {
            let mut v = vec![0i64; dim];
            v[b.index()] = 1;
            let v = sc.exp_ad(a, 1, &v);
            let v = sc.exp_ad(na, -1, &v);
            let v = sc.exp_ad(a, 1, &v);
            let target = rs.reflect(a, b).index();
            let eta = v[target];
            debug_assert!(v.iter().enumerate().all(|(k, &c)| k == target || c == 0));
            assert!(eta == 1 || eta == -1, "Weyl element must map root vectors to ± root vectors");
            signs[a.index() * nr + b.index()] = eta as i8;
        }
    }
    signs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(s: &str) -> StructureConstants {
        StructureConstants::compute(Arc::new(RootSystem::build(s.parse().unwrap())))
    }

    const SYSTEMS: [&str; 11] = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "B4", "C4"];

    #[test]
    fn magnitudes_and_antisymmetry() {
        for s in SYSTEMS {
            let t = sc(s);
            let rs = t.system();
            for a in rs.roots() {
                for b in rs.roots() {
                    if rs.sum(a, b).is_some() {
                        let p = rs.string_below(a, b);
                        assert_eq!(t.n(a, b).abs(), p + 1, "{s}");
                        assert_eq!(t.n(b, a), -t.n(a, b));
                        assert_eq!(t.n(rs.neg(a), rs.neg(b)), -t.n(a, b));
                    } else {
                        assert_eq!(t.n(a, b), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn extraspecial_pairs_are_positive() {
        let t = sc("A2");
        let rs = t.system();
        assert_eq!(t.n(rs.simple(1), rs.simple(2)), 1);
        let g2 = sc("G2");
        let rs = g2.system();
        assert_eq!(g2.n(rs.simple(1), rs.simple(2)), 1);
    }

    #[test]
    fn jacobi_identity_on_all_triples() {
        for s in ["A3", "B2", "B3", "C3", "D4", "G2", "C4"] {
            let t = sc(s);
            let dim = t.lie_dim();
            let br = |x: &[i64], y: usize| -> Vec<i64> {
                let mut out = vec![0; dim];
                for (k, &c) in x.iter().enumerate() {
                    if c != 0 {
                        for (i, m) in t.bracket(k, y) {
                            out[i] += c * m;
                        }
                    }
                }
                out
            };
            let unit = |k: usize| {
                let mut v = vec![0; dim];
                v[k] = 1;
                v
            };
            for x in 0..dim {
                for y in 0..dim {
                    let xy = br(&unit(x), y);
                    for z in 0..dim {
                        let a = br(&xy, z);
                        let b = br(&br(&unit(y), z), x);
                        let c = br(&br(&unit(z), x), y);
                        for k in 0..dim {
                            assert_eq!(a[k] + b[k] + c[k], 0, "{s}: Jacobi fails on ({x},{y},{z})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rows_cover_exactly_positive_combinations() {
        for s in SYSTEMS {
            let t = sc(s);
            let rs = t.system();
            for a in rs.roots() {
                for b in rs.roots() {
                    if b == rs.neg(a) || a == b {
                        continue;
                    }
                    let mut expected = Vec::new();
                    for i in 1..=3 {
                        for j in 1..=3 {
                            if let Some(g) = rs.combine(i, a, j, b) {
                                expected.push(g);
                            }
                        }
                    }
                    let mut got: Vec<_> = t.rows(a, b).iter().map(|r| r.gamma).collect();
                    got.sort();
                    expected.sort();
                    assert_eq!(got, expected);
                    assert!(t.rows(a, b).iter().all(|r| (1..=3).contains(&r.coeff.abs())));
                }
            }
        }
    }

    #[test]
    fn b2_short_long_pair_has_two_rows() {
        let t = sc("B2");
        let rs = t.system();
        let rows = t.rows(rs.simple(2), rs.simple(1));
        let shape: Vec<_> = rows.iter().map(|r| (r.i, r.j, rs.vector(r.gamma).to_vec())).collect();
        assert_eq!(shape, vec![(1, 1, vec![1, 1]), (2, 1, vec![1, 2])]);
        assert!(rows.iter().all(|r| r.coeff.abs() == 1));
    }

    #[test]
    fn g2_short_long_pair_has_four_rows() {
        let t = sc("G2");
        let rs = t.system();
        let rows = t.rows(rs.simple(1), rs.simple(2));
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| [1, 2, 3].contains(&r.coeff.abs())));
    }

    #[test]
    fn expansion_examples() {
        let t = sc("A2");
        let rs = t.system();
        let r5 = Ring::zmod(5).unwrap();
        let (a, b) = (rs.simple(1), rs.simple(2));
        let e = t.commutator_expansion(&r5, a, b, r5.from_i64(2), r5.from_i64(3)).unwrap();
        assert_eq!(e, vec![(rs.sum(a, b).unwrap(), r5.from_i64(1))]);
        let c = rs.sum(a, b).unwrap();
        assert!(t.commutator_expansion(&r5, a, c, r5.one(), r5.one()).unwrap().is_empty());
        assert_eq!(
            t.commutator_expansion(&r5, a, rs.neg(a), r5.one(), r5.one()),
            Err(Error::OppositeRoots)
        );
    }

    #[test]
    fn weyl_signs_on_self_and_orthogonal_roots() {
        for s in SYSTEMS {
            let t = sc(s);
            let rs = t.system();
            for a in rs.roots() {
                assert_eq!(t.weyl_sign(a, a), -1);
                for b in rs.roots() {
                    if rs.pairing(b, a) == 0 && rs.sum(a, b).is_none() {
                        assert_eq!(t.weyl_sign(a, b), 1);
                    }
                }
            }
        }
    }
}
