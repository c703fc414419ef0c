//! Gauss decomposition `g = h·u1·v·u2` of elementary Chevalley groups over
//! rings of stable rank 1, and the derived conjugacy and unitriangular forms.
//!
//! Generators are absorbed one at a time from the left into a triangular
//! form `h·B_0⋯B_{L−1}` with alternating block signs (+ first). A negative
//! root that cannot be filed directly is handled by splitting every block
//! along a terminal parabolic of the current sub-diagram, moving the Σ-parts
//! to the right, absorbing into the Levi parts one rank lower, and
//! redistributing the Σ-parts. Rank 1 is solved on 2×2 matrices.

use crate::error::{Error, Result};
use crate::group::Group;
use crate::ring::{Elem, Ring};
use crate::roots::{NodeSet, RootId};
use crate::words::{
    collect_signed, conj_levi, expand_root_generator, split_levi, torus_conjugate, w_gens, GenKind, Generator,
    TorusParams, UnipotentParams, Word,
};

/// `h · u1 · v · u2` with `u1, u2 ∈ U` and `v ∈ U⁻`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussForm {
    pub h: TorusParams,
    pub u1: UnipotentParams,
    pub v: UnipotentParams,
    pub u2: UnipotentParams,
}

impl GaussForm {
    pub fn identity(group: &Group) -> GaussForm {
        GaussForm {
            h: TorusParams::identity(group),
            u1: UnipotentParams::default(),
            v: UnipotentParams::default(),
            u2: UnipotentParams::default(),
        }
    }

    pub fn to_word(&self, group: &Group) -> Word {
        let mut w = self.h.to_word(group);
        w.gens.extend(self.u1.gens().chain(self.v.gens()).chain(self.u2.gens()));
        w
    }

    /// Block supports have the right signs and the torus entries are units.
    pub fn supports_ok(&self, group: &Group) -> bool {
        let rs = group.system();
        self.u1.terms.iter().all(|&(a, _)| rs.is_positive(a))
            && self.u2.terms.iter().all(|&(a, _)| rs.is_positive(a))
            && self.v.terms.iter().all(|&(a, _)| !rs.is_positive(a))
            && self.h.eps.len() == group.rank()
            && self.h.eps.iter().all(|&e| group.ring.is_unit(e))
    }

    /// Largest number of nonzero parameters in a unipotent block.
    pub fn max_block_params(&self) -> usize {
        self.u1.len().max(self.v.len()).max(self.u2.len())
    }
}

/// Five unipotent blocks with signs `+, −, +, −, +`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unitri5Form {
    pub blocks: Vec<UnipotentParams>,
}

impl Unitri5Form {
    pub fn to_word(&self) -> Word {
        Word::new(self.blocks.iter().flat_map(|b| b.gens()).collect())
    }

    pub fn is_alternating(&self, group: &Group) -> bool {
        let rs = group.system();
        self.blocks.len() == 5
            && self
                .blocks
                .iter()
                .enumerate()
                .all(|(k, b)| b.terms.iter().all(|&(a, _)| rs.is_positive(a) == (k % 2 == 0)))
    }
}

/// `g · conjugator⁻¹`-style result: `c · g · c⁻¹ = u · h · v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UhvForm {
    pub conjugator: Word,
    pub u: UnipotentParams,
    pub h: TorusParams,
    pub v: UnipotentParams,
}

impl UhvForm {
    pub fn to_word(&self, group: &Group) -> Word {
        let mut w = Word::new(self.u.gens().collect());
        w.gens.extend(self.h.to_word(group).gens);
        w.gens.extend(self.v.gens());
        w
    }
}

/// 2×2 matrix `[[a, b], [c, d]]` stored as `[a, b, c, d]`.
pub type Mat2 = [Elem; 4];

pub fn mat2_mul(ring: &Ring, x: &Mat2, y: &Mat2) -> Mat2 {
    let f = |p: Elem, q: Elem, r: Elem, s: Elem| ring.add(ring.mul(p, q), ring.mul(r, s));
    [
        f(x[0], y[0], x[1], y[2]),
        f(x[0], y[1], x[1], y[3]),
        f(x[2], y[0], x[3], y[2]),
        f(x[2], y[1], x[3], y[3]),
    ]
}

pub fn upper(ring: &Ring, t: Elem) -> Mat2 {
    [ring.one(), t, ring.zero(), ring.one()]
}

pub fn lower(ring: &Ring, t: Elem) -> Mat2 {
    [ring.one(), ring.zero(), t, ring.one()]
}

/// Image of a generator on `±α` under the standard map `SL_2 → E(Φ, R)`
/// attached to the positive root `alpha`.
fn gen_mat2(group: &Group, alpha: RootId, g: &Generator) -> Result<Mat2> {
    let ring = &group.ring;
    let plus = g.root == alpha;
    if !plus && g.root != group.system().neg(alpha) {
        return Err(Error::UnknownRoot(group.system().vector(g.root).to_vec()));
    }
    let (e, inv) = match g.kind {
        GenKind::X => return Ok(if plus { upper(ring, g.param) } else { lower(ring, g.param) }),
        _ => {
            let inv = ring.inv(g.param).ok_or_else(|| Error::NotUnit(ring.show(g.param)))?;
            if plus {
                (g.param, inv)
            } else {
                (inv, g.param)
            }
        }
    };
    Ok(match g.kind {
        GenKind::H => [e, ring.zero(), ring.zero(), inv],
        // w_{−α}(ε) = w_α(−ε⁻¹)
        _ if plus => [ring.zero(), e, ring.neg(inv), ring.zero()],
        _ => [ring.zero(), ring.neg(e), inv, ring.zero()],
    })
}

/// Product of a rank-one word in `SL_2(R)`.
pub fn word_mat2(group: &Group, alpha: RootId, gens: &[Generator]) -> Result<Mat2> {
    let ring = &group.ring;
    let mut m = upper(ring, ring.zero());
    for g in gens {
        m = mat2_mul(ring, &m, &gen_mat2(group, alpha, g)?);
    }
    Ok(m)
}

/// `z` with `d + c·z` a unit.
fn witness(group: &Group, c: Elem, d: Elem) -> Result<Elem> {
    let ring = &group.ring;
    let found = if ring.is_finite() {
        ring.stable_rank_witness(c, d)?
    } else {
        let bound = group.witness_bound.ok_or_else(|| refuse_infinite(ring))?;
        ring.stable_rank_witness_bounded(c, d, bound)?
    };
    found.ok_or_else(|| Error::NoWitness { c: ring.show(c), d: ring.show(d) })
}

fn refuse_infinite(ring: &Ring) -> Error {
    Error::UnsupportedRing {
        ring: ring.to_string(),
        reason: "decomposition over an infinite ring needs a witness bound".into(),
    }
}

/// The rank-one reduction for `g = [[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneReduction {
    pub z: Elem,
    /// `δ = d + c·z`, a unit.
    pub delta: Elem,
    /// `x_α(−(b+az)δ⁻¹) · g · x_α(z)`, equal to `[[δ⁻¹, 0], [c, δ]]`.
    pub middle: Mat2,
    /// `g = h(ε) x_α(p) x_{−α}(q) x_α(r)` as `(ε, p, q, r)`.
    pub params: (Elem, Elem, Elem, Elem),
}

pub fn rank_one_reduction(group: &Group, g: &Mat2) -> Result<RankOneReduction> {
    let ring = &group.ring;
    let [a, b, c, d] = *g;
    let z = witness(group, c, d)?;
    let delta = ring.add(d, ring.mul(c, z));
    let dinv = ring.inv(delta).ok_or_else(|| Error::Internal("witness is not a unit".into()))?;
    let b_az = ring.add(b, ring.mul(a, z));
    let left = upper(ring, ring.neg(ring.mul(b_az, dinv)));
    let middle = mat2_mul(ring, &mat2_mul(ring, &left, g), &upper(ring, z));
    let params = (dinv, ring.mul(delta, b_az), ring.mul(c, dinv), ring.neg(z));
    Ok(RankOneReduction { z, delta, middle, params })
}

/// `g = x_α(p) x_{−α}(q) x_α(r) x_{−α}(s)` as `(p, q, r, s)`.
pub fn unitriangular4_mat2(group: &Group, g: &Mat2) -> Result<(Elem, Elem, Elem, Elem)> {
    let ring = &group.ring;
    let [a, b, c, d] = *g;
    let z = witness(group, d, c)?;
    let q = ring.add(c, ring.mul(d, z));
    let qinv = ring.inv(q).ok_or_else(|| Error::Internal("witness is not a unit".into()))?;
    let p = ring.mul(ring.sub(ring.add(a, ring.mul(b, z)), ring.one()), qinv);
    let r = ring.mul(ring.sub(d, ring.one()), qinv);
    Ok((p, q, r, ring.neg(z)))
}

/// Gauss decomposition of a word in a rank-one group via its 2×2 matrix.
pub fn decompose_rank1(group: &Group, word: &Word) -> Result<GaussForm> {
    if group.rank() != 1 {
        return Err(Error::InvalidType(format!(
            "rank-one decomposition needs a rank-one system, got {}",
            group.system().cartan_type()
        )));
    }
    let alpha = group.system().simple(1);
    let g = word_mat2(group, alpha, &word.gens)?;
    let l1 = rank_one_reduction(group, &g)?;
    let (eps, p, q, r) = l1.params;
    let neg = group.system().neg(alpha);
    let single = |a: RootId, v: Elem| UnipotentParams {
        terms: if group.ring.is_zero(v) { vec![] } else { vec![(a, v)] },
    };
    Ok(GaussForm {
        h: TorusParams { eps: vec![eps] },
        u1: single(alpha, p),
        v: single(neg, q),
        u2: single(alpha, r),
    })
}

/// `h · B_0 ⋯ B_{L−1}` with block `k` positive for even `k`. Three blocks
/// carry a torus part; four blocks are used torus-free.
#[derive(Clone, Debug)]
struct Triangular {
    h: TorusParams,
    blocks: Vec<UnipotentParams>,
}

impl Triangular {
    fn empty(group: &Group, len: usize) -> Triangular {
        Triangular { h: TorusParams::identity(group), blocks: vec![UnipotentParams::default(); len] }
    }
}

fn inverse_word(ring: &Ring, blocks: &[UnipotentParams]) -> Vec<(RootId, Elem)> {
    blocks.iter().rev().flat_map(|b| b.inverse_gens(ring)).collect()
}

fn block_gens(blocks: &[UnipotentParams]) -> Vec<(RootId, Elem)> {
    blocks.iter().flat_map(|b| b.terms.iter().copied()).collect()
}

/// `x_α(ξ) · t` rewritten into triangular form over the sub-diagram `nodes`.
fn absorb(group: &Group, nodes: NodeSet, alpha: RootId, xi: Elem, t: Triangular) -> Result<Triangular> {
    let ring = &group.ring;
    if ring.is_zero(xi) {
        return Ok(t);
    }
    // x_α(ξ)·h = h·x_α(α(h)⁻¹ξ)
    let chi = t.h.character(group, alpha);
    let xi = ring.mul(ring.inv(chi).expect("torus characters are units"), xi);
    let (h2, blocks) = absorb_unipotent(group, nodes, alpha, xi, t.blocks)?;
    Ok(Triangular { h: t.h.mul(&h2, ring), blocks })
}

fn absorb_unipotent(
    group: &Group,
    nodes: NodeSet,
    alpha: RootId,
    xi: Elem,
    mut blocks: Vec<UnipotentParams>,
) -> Result<(TorusParams, Vec<UnipotentParams>)> {
    let ring = &group.ring;
    let rs = group.system();
    let torus_free = blocks.len() != 3;
    let one = TorusParams::identity(group);
    if rs.is_positive(alpha) {
        let b0 = std::mem::take(&mut blocks[0]);
        blocks[0] = collect_signed(group, true, std::iter::once((alpha, xi)).chain(b0.terms))?;
        return Ok((one, blocks));
    }
    if blocks[0].is_empty() {
        let b1 = std::mem::take(&mut blocks[1]);
        blocks[1] = collect_signed(group, false, std::iter::once((alpha, xi)).chain(b1.terms))?;
        return Ok((one, blocks));
    }
    if nodes.count_ones() == 1 {
        return absorb_rank1(group, nodes, alpha, xi, blocks, torus_free);
    }

    let leaves = rs.leaves(nodes);
    let (first, last) = (leaves[0] + 1, leaves[leaves.len() - 1] + 1);
    let Some(r) = [first, last].into_iter().find(|&r| rs.coeff(alpha, r) == 0) else {
        // no terminal Levi contains α: conjugate it down to a fundamental root
        let mut t = Triangular { h: one, blocks };
        for g in expand_root_generator(group, alpha, xi).into_iter().rev() {
            t = absorb(group, nodes, g.root, g.param, t)?;
        }
        return Ok((t.h, t.blocks));
    };

    let len = blocks.len();
    let sign = |k: usize| k.is_multiple_of(2);
    let mut deltas = Vec::with_capacity(len);
    let mut sigmas = Vec::with_capacity(len);
    for (k, b) in blocks.iter().enumerate() {
        let (d, s) = split_levi(group, b, r, sign(k))?;
        deltas.push(d);
        sigmas.push(s);
    }
    // Δ_0Σ_0⋯Δ_{L−1}Σ_{L−1} = Δ_0⋯Δ_{L−1} · T_0⋯T_{L−1},  T_k = d_k⁻¹Σ_k d_k
    let mut tails = Vec::with_capacity(len);
    for (k, s) in sigmas.iter().enumerate() {
        let conj = inverse_word(ring, &deltas[k + 1..]);
        tails.push(conj_levi(group, &conj, s, sign(k))?);
    }
    let sub = nodes & !(1 << (r - 1));
    let inner = absorb(group, sub, alpha, xi, Triangular { h: one, blocks: deltas })?;
    let new_deltas = inner.blocks;
    // Δ'_0⋯Δ'_{L−1}·T_0⋯T_{L−1} = ∏_k Δ'_k S_k,  S_k = e_k T_k e_k⁻¹
    let mut out = Vec::with_capacity(len);
    for (k, tail) in tails.iter().enumerate() {
        let conj = block_gens(&new_deltas[k + 1..]);
        let s = conj_levi(group, &conj, tail, sign(k))?;
        let merged = collect_signed(group, sign(k), new_deltas[k].terms.iter().chain(&s.terms).copied())?;
        out.push(merged);
    }
    debug_assert!(!torus_free || inner.h.is_identity(ring));
    Ok((inner.h, out))
}

fn absorb_rank1(
    group: &Group,
    nodes: NodeSet,
    alpha: RootId,
    xi: Elem,
    blocks: Vec<UnipotentParams>,
    torus_free: bool,
) -> Result<(TorusParams, Vec<UnipotentParams>)> {
    let ring = &group.ring;
    let rs = group.system();
    let j = nodes.trailing_zeros() as usize + 1;
    let pos = rs.simple(j);
    let neg = rs.neg(pos);
    let mut gens = vec![Generator::x(alpha, xi)];
    gens.extend(blocks.iter().flat_map(|b| b.gens()));
    let g = word_mat2(group, pos, &gens)?;
    let single = |a: RootId, v: Elem| UnipotentParams {
        terms: if ring.is_zero(v) { vec![] } else { vec![(a, v)] },
    };
    let mut h = TorusParams::identity(group);
    let out = if torus_free {
        let (p, q, r, s) = unitriangular4_mat2(group, &g)?;
        vec![single(pos, p), single(neg, q), single(pos, r), single(neg, s)]
    } else {
        let (eps, p, q, r) = rank_one_reduction(group, &g)?.params;
        h.eps[j - 1] = eps;
        vec![single(pos, p), single(neg, q), single(pos, r)]
    };
    Ok((h, out))
}

fn check_ring(group: &Group) -> Result<()> {
    if !group.ring.is_finite() && group.witness_bound.is_none() {
        return Err(refuse_infinite(&group.ring));
    }
    Ok(())
}

/// Absorbs the generators of `word` from right to left into `t`.
fn absorb_word(group: &Group, word: &Word, mut t: Triangular) -> Result<Triangular> {
    let ring = &group.ring;
    let all = group.system().all_nodes();
    for g in word.gens.iter().rev() {
        match g.kind {
            GenKind::X => t = absorb(group, all, g.root, g.param, t)?,
            GenKind::H if t.blocks.len() == 3 => {
                t.h = TorusParams::of_root(group, g.root, g.param)?.mul(&t.h, ring);
            }
            GenKind::H => {
                for x in h_unitri_gens(group, g.root, g.param)?.into_iter().rev() {
                    t = absorb(group, all, x.root, x.param, t)?;
                }
            }
            GenKind::W => {
                for x in w_gens(group, g.root, g.param)?.into_iter().rev() {
                    t = absorb(group, all, x.root, x.param, t)?;
                }
            }
        }
    }
    Ok(t)
}

/// `h_α(ε) = x_α(ε) x_{−α}(−ε⁻¹) x_α(ε−1) x_{−α}(1) x_α(−1)`.
pub fn h_unitri_gens(group: &Group, a: RootId, eps: Elem) -> Result<[Generator; 5]> {
    let ring = &group.ring;
    let inv = ring.inv(eps).ok_or_else(|| Error::NotUnit(ring.show(eps)))?;
    let na = group.system().neg(a);
    let one = ring.one();
    Ok([
        Generator::x(a, eps),
        Generator::x(na, ring.neg(inv)),
        Generator::x(a, ring.sub(eps, one)),
        Generator::x(na, one),
        Generator::x(a, ring.neg(one)),
    ])
}

/// Gauss decomposition `g = h · u1 · v · u2` of the element `word`.
pub fn gauss_decompose(group: &Group, word: &Word) -> Result<GaussForm> {
    check_ring(group)?;
    word.validate(&group.ring)?;
    if group.rank() == 1 {
        return decompose_rank1(group, word);
    }
    let t = absorb_word(group, word, Triangular::empty(group, 3))?;
    let mut blocks = t.blocks.into_iter();
    Ok(GaussForm {
        h: t.h,
        u1: blocks.next().unwrap(),
        v: blocks.next().unwrap(),
        u2: blocks.next().unwrap(),
    })
}

/// `word` read as `X⁺… H… X⁻…`, if it has that shape.
fn as_uhv(group: &Group, word: &Word) -> Result<Option<(UnipotentParams, TorusParams, UnipotentParams)>> {
    let rs = group.system();
    let ring = &group.ring;
    let mut stage = 0;
    let (mut u, mut v) = (Vec::new(), Vec::new());
    let mut h = TorusParams::identity(group);
    for g in &word.gens {
        let s = match g.kind {
            GenKind::X if ring.is_zero(g.param) => continue,
            GenKind::X if rs.is_positive(g.root) => 0,
            GenKind::H => 1,
            GenKind::X => 2,
            GenKind::W => return Ok(None),
        };
        if s < stage {
            return Ok(None);
        }
        stage = s;
        match s {
            0 => u.push((g.root, g.param)),
            1 => h = h.mul(&TorusParams::of_root(group, g.root, g.param)?, ring),
            _ => v.push((g.root, g.param)),
        }
    }
    Ok(Some((collect_signed(group, true, u)?, h, collect_signed(group, false, v)?)))
}

/// A conjugator `c` and `u, h, v` with `c · g · c⁻¹ = u · h · v`.
pub fn conjugate_to_uhv(group: &Group, word: &Word) -> Result<UhvForm> {
    check_ring(group)?;
    word.validate(&group.ring)?;
    if let Some((u, h, v)) = as_uhv(group, word)? {
        return Ok(UhvForm { conjugator: Word::default(), u, h, v });
    }
    let f = gauss_decompose(group, word)?;
    // u2 · (h u1 v u2) · u2⁻¹ = (u2 · h u1 h⁻¹) · h · v
    let conj_u1 = f.u1.terms.iter().map(|&(a, x)| (a, torus_conjugate(group, &f.h, a, x)));
    let u = collect_signed(group, true, f.u2.terms.iter().copied().chain(conj_u1))?;
    Ok(UhvForm { conjugator: f.u2.to_word(), u, h: f.h, v: f.v })
}

/// Unitriangular factorisation of length 5: `U · U⁻ · U · U⁻ · U`.
pub fn unitriangular5(group: &Group, word: &Word) -> Result<Unitri5Form> {
    check_ring(group)?;
    let f = gauss_decompose(group, word)?;
    // h u1 v u2 = (h u1 h⁻¹) · h · v · u2, and h = a·b·c·d unitriangular
    let conj_u1: Vec<_> = f.u1.terms.iter().map(|&(a, x)| (a, torus_conjugate(group, &f.h, a, x))).collect();
    let h_word = f.h.to_word(group);
    let t = absorb_word(group, &h_word, Triangular::empty(group, 4))?;
    if t.blocks.len() != 4 || !t.h.is_identity(&group.ring) {
        return Err(Error::Internal("torus factorisation is not unitriangular of length 4".into()));
    }
    let mut parts = t.blocks.into_iter();
    let (a, b, c, d) = (parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap());
    let first = collect_signed(group, true, conj_u1.into_iter().chain(a.terms))?;
    let fourth = collect_signed(group, false, d.terms.into_iter().chain(f.v.terms))?;
    let blocks = vec![first, b, c, fourth, f.u2];
    let form = Unitri5Form { blocks };
    if !form.is_alternating(group) {
        return Err(Error::Internal("unitriangular blocks do not alternate".into()));
    }
    Ok(form)
}
